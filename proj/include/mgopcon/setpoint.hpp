#pragma once

#include <string>
#include <vector>

#include "mgopcon/scenario_log.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::setpoint {

/// Frequency-deviation range spanned by the storage droop curves:
///   rho_min = min_i p_min_i / chi_i,  rho_max = max_i p_max_i / chi_i.
struct StorageRhoBounds {
  double rho_min = 0.0;
  double rho_max = 0.0;
};

/// Throws ValidationError when any storage unit has chi == 0 (the quotient
/// is undefined) or the storage fleet is empty.
StorageRhoBounds storage_rho_bounds(const FleetParams& params);

/// Rule-based constant setpoints realizing the priority order
/// renewables -> storage -> thermal through the droop curves:
///   u_t = p_t_min - rho_max chi_t,  u_r = p_rated - rho_min chi_r,  u_s = 0.
/// delta_t is returned all-on. Throws ValidationError naming the offending
/// bound when a component falls outside [u_min, u_max].
Setpoints constant_setpoints(const FleetParams& params,
                             const Eigen::Ref<const Vec>& p_rated);

/// Operability of a bound profile against the thermal saturation window.
struct RequirementRow {
  int k;
  double load_lo, load_hi;  // |1'w_d| under the two bound profiles
  bool req2_lo, req2_hi;    // load never above sum of thermal p_max
  bool req3_lo, req3_hi;    // load never below sum of thermal p_min
};

struct RequirementReport {
  bool requirement1_assumed = true;  // thermal units all on, by usage
  std::vector<RequirementRow> rows;
  bool all_pass = true;
};

RequirementReport check_requirements(const FleetParams& params,
                                     const ForecastBounds& bounds);

/// Linear droop region of one unit on the rho axis (widest case over the
/// given disturbance / state ranges). Units with chi == 0 have no linear
/// region and are excluded from overlap checks.
struct RhoInterval {
  std::string unit;
  int index;
  double lo, hi;
  bool degenerate;  // zero width or chi == 0
};

struct OverlapReport {
  std::vector<RhoInterval> intervals;
  bool renewable_below_storage = true;
  bool storage_below_thermal = true;
  bool pass = true;  // intervals pairwise non-overlapping in priority order
};

/// w_r_range / x_range give the per-unit min/max of available renewable
/// power and stored energy over which the check must hold.
OverlapReport check_nonoverlap(const Setpoints& sp, const FleetParams& params,
                               const Eigen::Ref<const Vec>& w_r_lo,
                               const Eigen::Ref<const Vec>& w_r_hi,
                               const Eigen::Ref<const Vec>& x_lo,
                               const Eigen::Ref<const Vec>& x_hi);

}  // namespace mgopcon::setpoint
