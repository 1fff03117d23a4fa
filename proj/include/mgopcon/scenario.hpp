#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgopcon/scenario_log.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::scenario {

/// Scenario w^s(k) = w_min(k) + alpha (w_max(k) - w_min(k)); alpha in [0,1].
/// The 11-scenario study uses alpha = 0.1 s, s = 0..10.
DisturbanceTrajectory interpolate(const ForecastBounds& bounds, double alpha);

/// The at-most-two extreme trajectories {w_min, w_max}; a single element
/// when the bounds are degenerate.
std::vector<DisturbanceTrajectory> extreme_set(const ForecastBounds& bounds);

/// Reads the bounds CSV
///   k, wr_min_1..n_r, wr_max_1..n_r, wd_min_1..n_d, wd_max_1..n_d
/// (optional header line). Enforces bound ordering and sign invariants;
/// errors carry the offending row number.
ForecastBounds load_bounds_csv(const std::string& path, int n_r, int n_d);

void save_bounds_csv(const std::string& path, const ForecastBounds& bounds);

/// Linear resampling of the bound profiles from a dt_in-hours grid to a
/// ts_out-hours grid (bridges hourly forecast files to the EMS step).
ForecastBounds resample(const ForecastBounds& bounds, double dt_in_hours,
                        double ts_out_hours);

/// Deterministic diurnal wind/PV/load bound profiles at the fleet's
/// sampling time, constructed so the total load stays inside the thermal
/// saturation window (operability requirements 2-3). PV-shaped units are
/// the second half of the renewable fleet; their bounds vanish over the
/// fixed 20:00-06:00 night window.
ForecastBounds synth_profiles(std::uint64_t seed, int days,
                              const FleetParams& params);

}  // namespace mgopcon::scenario
