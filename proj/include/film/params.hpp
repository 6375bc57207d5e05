#pragma once

namespace film {

// Rescaled, nondimensional problem parameters.
struct Params {
  double sigma = 0.1;
  double gamma = 0.0;
  double l1 = 1.0;
  double l2 = 1.0;

  void validate() const;
  double bending_prefactor() const { return (sigma * l1) * (sigma * l1); }
};

struct PhysicalParams {
  double film_thickness = 0.0;
  double youngs_modulus = 0.0;
  double poisson_ratio = 0.0;
  double compression_ratio = 0.0;
  double bond_energy_density = 0.0;
  double l1 = 1.0;
  double l2 = 1.0;

  void validate() const;
};

// sigma = h_f / (l1 sqrt(6 eps)), gamma = 2 (1 - nu^2) gamma_* / (E h_f eps^2).
// The energy itself assumes nu = 0; the factor is kept so callers can see it.
Params rescale_physical(const PhysicalParams& p);

}  // namespace film
