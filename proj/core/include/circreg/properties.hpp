#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "circreg/rng.hpp"

namespace circreg {

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::string first_failure;
  bool ok() const { return violations == 0; }
};

PropertyResult hausdorff_metric_axioms(Rng& rng, std::size_t trials);
PropertyResult wedge_rotation_invariance(Rng& rng, std::size_t trials);
PropertyResult cone_rotation_scaling_invariance(Rng& rng, std::size_t trials);
PropertyResult boundary_path_shape(Rng& rng, std::size_t trials);
PropertyResult distance_angle_bound(Rng& rng, std::size_t trials);

// Every suite above with `trials` random inputs each. `trials` on a result
// counts individual checks, so suites checking several axioms report more.
std::vector<PropertyResult> geometry_property_suite(Rng& rng, std::size_t trials);

}  // namespace circreg
