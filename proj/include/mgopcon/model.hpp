#pragma once

#include <string>
#include <vector>

#include "mgopcon/types.hpp"

namespace mgopcon::model {

/// Instantaneous storage power window derived from the energy level:
///   lo = max(p_min, (x_prev - x_max)/Ts),  hi = min(p_max, (x_prev - x_min)/Ts).
/// Any power inside the window keeps the next energy within [x_min, x_max].
struct StoragePowerBounds {
  Vec lo, hi;
};

/// Throws StateViolationError if x_prev leaves the energy window.
StoragePowerBounds storage_power_bounds(const Eigen::Ref<const Vec>& x_prev,
                                        const FleetParams& params);

struct ValidationIssue {
  std::string unit;  // "thermal", "storage", "renewable", "fleet"
  int index;         // unit index, -1 for fleet-level issues
  std::string message;
};

/// Checks every type invariant; returns one issue per violation.
/// Empty result means the parameter set is admissible.
std::vector<ValidationIssue> validate_params(const FleetParams& params);

/// Convenience: throws ValidationError listing all issues when non-empty.
void require_valid(const FleetParams& params);

/// Cost weights bundled out of the fleet description.
CostWeights weights_from(const FleetParams& params);

}  // namespace mgopcon::model
