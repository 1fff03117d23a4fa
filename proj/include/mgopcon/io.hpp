#pragma once

#include <string>

#include "mgopcon/scenario_log.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::io {

/// Fleet configuration bundle as stored in fleet.json. x0/delta0 are the
/// optional initial state (defaults: mid-window energies, all-on).
struct FleetConfig {
  FleetParams params;
  GridState state0;
};

FleetConfig load_fleet_json(const std::string& path);
FleetConfig parse_fleet_json(const std::string& text);

/// One dispatch request {setpoints, disturbance, state} as JSON text.
struct StepInput {
  Setpoints sp;
  DisturbanceSample w;
  GridState state;
};

StepInput parse_step_json(const std::string& text);
StepInput load_step_json(const std::string& path);

std::string dispatch_to_json(const Dispatch& d, const Vec& x_next);
std::string setpoints_to_json(const Setpoints& sp);

/// SimLog CSV: header `k,rho,p_t_*,p_s_*,p_r_*,x_*,delta_*,stage_cost`
/// preceded by comment lines carrying x0 and delta0 so a log round-trips.
/// Values are printed with 17 significant digits (bit-exact round trip).
std::string simlog_to_csv(const SimLog& log);
void save_simlog_csv(const std::string& path, const SimLog& log);
SimLog load_simlog_csv(const std::string& path, const FleetParams& params);

std::string trajectory_to_csv(const DisturbanceTrajectory& w);

std::string format_double(double v);  // shortest 17-significant-digit form

}  // namespace mgopcon::io
