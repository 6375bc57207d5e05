#include "film/params.hpp"

#include <cmath>
#include <string>

#include "film/errors.hpp"

namespace film {

void Params::validate() const
{
  if (!(sigma > 0.0 && sigma < 1.0))
    throw DomainError("sigma must lie in (0, 1), got " + std::to_string(sigma));
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("gamma must be finite and >= 0");
  if (!(l1 > 0.0) || !std::isfinite(l2) || !(l1 <= l2))
    throw DomainError("lengths must satisfy 0 < l1 <= l2");
}

void PhysicalParams::validate() const
{
  if (!(film_thickness > 0.0 && youngs_modulus > 0.0 && bond_energy_density > 0.0 && l1 > 0.0 && l2 > 0.0))
    throw DomainError("physical parameters must be positive");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    throw DomainError("poisson ratio must lie in [0, 0.5)");
  if (!(compression_ratio > 0.0 && compression_ratio < 1.0))
    throw DomainError("compression ratio eps_* must satisfy 0 < eps_* < 1");
}

Params rescale_physical(const PhysicalParams& p)
{
  p.validate();
  const double eps = p.compression_ratio, nu = p.poisson_ratio;
  Params out;
  out.sigma = p.film_thickness / (p.l1 * std::sqrt(6.0 * eps));
  out.gamma = 2.0 * (1.0 - nu * nu) * p.bond_energy_density / (p.youngs_modulus * p.film_thickness * eps * eps);
  out.l1 = p.l1;
  out.l2 = p.l2;
  if (out.sigma >= 1.0)
    throw DomainError("rescaled sigma = " + std::to_string(out.sigma) + " >= 1: film too thick for the model");
  out.validate();
  return out;
}

}  // namespace film
