#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "film/field.hpp"

namespace film {

enum class ViolationKind { non_finite, clamped_u, clamped_v, clamped_w, clamped_slope, positivity, support_mask };

std::string to_string(ViolationKind k);

// One entry per violated condition: worst sample, its magnitude, and how many
// samples violate it.
struct Violation {
  ViolationKind kind;
  Eigen::Index i = 0, j = 0;
  double magnitude = 0.0;
  std::size_t samples = 0;
};

struct AdmissibilityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  const Violation* find(ViolationKind k) const;
  std::string summary() const;
};

// Membership in the admissible set at sample precision: clamped edge x = 0
// carries u = v = 0, w = edge_height, w_x = 0; w >= 0; an analytic mask is
// false only where w = 0.
AdmissibilityReport check_admissible(const DisplacementField& f);

}  // namespace film
