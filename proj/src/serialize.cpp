#include "film/serialize.hpp"

#include <variant>

namespace film {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out)
{
  if (auto it = j.find(key); it != j.end())
    it->get_to(out);
}

json shape_json(const CellShape& s)
{
  json j;
  j["cell"] = shape_name(s);
  if (auto* c = std::get_if<LaminateShape>(&s)) {
    j["h"] = c->h;
    j["delta"] = c->delta;
    j["profile"] = to_string(c->profile);
  } else if (auto* c = std::get_if<BoundaryLayerShape>(&s)) {
    j["eps"] = c->eps;
    j["h"] = c->h;
    j["delta"] = c->delta;
    j["profile"] = to_string(c->profile);
  } else if (auto* c = std::get_if<FoldSplitShape>(&s)) {
    j["h"] = c->h;
    j["delta"] = c->delta;
    j["L"] = c->length;
  } else if (auto* c = std::get_if<FoldShrinkShape>(&s)) {
    j["h"] = c->h;
    j["delta"] = c->delta;
    j["lambda"] = c->lambda;
    j["L"] = c->length;
  } else if (auto* c = std::get_if<LiftShape>(&s)) {
    j["h_b"] = c->height;
    j["eta"] = c->eta;
  }
  return j;
}

}  // namespace

void to_json(json& j, const Params& p)
{
  j = json{{"sigma", p.sigma}, {"gamma", p.gamma}, {"l1", p.l1}, {"l2", p.l2}};
}

void from_json(const json& j, Params& p)
{
  get_if(j, "sigma", p.sigma);
  get_if(j, "gamma", p.gamma);
  get_if(j, "l1", p.l1);
  get_if(j, "l2", p.l2);
}

void to_json(json& j, const PhysicalParams& p)
{
  j = json{{"film_thickness", p.film_thickness},       {"youngs_modulus", p.youngs_modulus},
           {"poisson_ratio", p.poisson_ratio},         {"compression_ratio", p.compression_ratio},
           {"bond_energy_density", p.bond_energy_density}, {"l1", p.l1},
           {"l2", p.l2}};
}

void from_json(const json& j, PhysicalParams& p)
{
  get_if(j, "film_thickness", p.film_thickness);
  get_if(j, "youngs_modulus", p.youngs_modulus);
  get_if(j, "poisson_ratio", p.poisson_ratio);
  get_if(j, "compression_ratio", p.compression_ratio);
  get_if(j, "bond_energy_density", p.bond_energy_density);
  get_if(j, "l1", p.l1);
  get_if(j, "l2", p.l2);
}

void to_json(json& j, const EnergyBreakdown& e)
{
  j = json{{"stretching", e.stretching}, {"bending", e.bending}, {"bonding", e.bonding}, {"total", e.total}};
}

void from_json(const json& j, EnergyBreakdown& e)
{
  j.at("stretching").get_to(e.stretching);
  j.at("bending").get_to(e.bending);
  j.at("bonding").get_to(e.bonding);
  j.at("total").get_to(e.total);
}

void to_json(json& j, const BranchSchedule& b)
{
  j = json{{"N", b.N},
           {"h", b.h},
           {"delta", b.delta},
           {"L", b.L},
           {"eps", b.eps},
           {"h0", b.h0},
           {"h0_nominal", b.h0_nominal},
           {"delta0", b.delta0},
           {"hN", b.hN()},
           {"deltaN", b.deltaN()},
           {"regime_case", to_string(b.regime_case)},
           {"switch_index", b.switch_index},
           {"cascade_width", b.cascade_width()}};
}

void to_json(json& j, const Band& b)
{
  j = json{{"role", b.role},
           {"x_begin", b.x_begin},
           {"x_end", b.x_end},
           {"width", b.x_end - b.x_begin},
           {"shape", shape_json(b.shape)}};
}

void to_json(json& j, const Layout& l)
{
  j = json{{"params", l.params}, {"height", l.height}, {"edge_height", l.edge_height}, {"bands", l.bands}};
}

void to_json(json& j, const TiledEnergy& t)
{
  json bands = json::array();
  for (const auto& b : t.bands)
    bands.push_back(json{{"role", b.role},
                         {"x_begin", b.x_begin},
                         {"x_end", b.x_end},
                         {"copies", b.copies},
                         {"nx", b.nx},
                         {"ny", b.ny},
                         {"energy", b.energy}});
  j = json{{"energy", t.energy}, {"bands", bands}, {"max_nx", t.max_nx}, {"max_ny", t.max_ny}};
}

void to_json(json& j, const Construction& c)
{
  j = json{{"construction", to_string(c.kind)}, {"params", c.layout.params}, {"layout", c.layout}};
  if (c.laminate)
    j["laminate"] = json{{"h", c.laminate->h}, {"delta", c.laminate->delta}, {"eps", c.laminate->eps}};
  if (c.schedule)
    j["schedule"] = *c.schedule;
  if (c.lift_height > 0.0)
    j["lift"] = json{{"h_b", c.lift_height}, {"eta", c.lift_width}};
  for (const auto& b : c.layout.bands)
    if (b.role == "bulk")
      j["bulk_width"] = b.x_end - b.x_begin;
}

void to_json(json& j, const CandidateResult& r)
{
  j = json{{"construction", to_string(r.kind)}};
  if (r.skipped.empty())
    j["total"] = r.total;
  else
    j["skipped"] = r.skipped;
}

json regime_report(double sigma, double gamma, double l1, double l2)
{
  const Regime r = classify(sigma, gamma);
  const PatternScales s = pattern_scales(sigma, gamma, l1);
  json scales{{"h0", s.h0}, {"delta0", s.delta0}, {"A0", s.A0}, {"in_scope", s.in_scope}};
  if (!s.warning.empty())
    scales["warning"] = s.warning;
  return json{{"sigma", sigma},
              {"gamma", gamma},
              {"regime", r.letter()},
              {"name", r.name},
              {"a", r.a.str()},
              {"b", r.b.str()},
              {"upper", upper_bound_scaling(sigma, gamma, l1, l2)},
              {"lower", lower_bound_scaling(sigma, gamma, l1, l2)},
              {"scales", scales}};
}

}  // namespace film
