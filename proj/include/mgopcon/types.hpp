#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mgopcon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;
using IMat = Eigen::MatrixXi;

/// Conventional (thermal) generator fleet, struct-of-arrays over units.
/// Powers in pu, cost weights per pu / per step / per switch.
struct ThermalFleet {
  Vec p_min, p_max;  // saturation limits, p_min >= 0
  Vec chi;           // inverse droop gain, >= 0
  Vec c_fuel, c_on, c_sw;
  Eigen::Index size() const { return p_min.size(); }
};

/// Storage fleet. p_min <= 0 means the unit can charge.
/// Energy window [x_min, x_max] in pu·h.
struct StorageFleet {
  Vec p_min, p_max;
  Vec chi;
  Vec x_min, x_max;
  Vec c_st;
  Eigen::Index size() const { return p_min.size(); }
};

/// Renewable fleet. p_rated is the configured plant rating used by the
/// constant-setpoint rule; NaN marks "not configured" (resolved from
/// forecasts or the command line before use).
struct RenewableFleet {
  Vec p_min;    // lower saturation limit, >= 0
  Vec p_rated;  // plant rating, >= 0 or NaN
  Vec chi;
  Eigen::Index size() const { return p_min.size(); }
};

struct FleetParams {
  ThermalFleet thermal;
  StorageFleet storage;
  RenewableFleet renewable;
  int n_loads = 1;
  double ts_hours = 0.25;   // EMS sampling time [h]
  double u_min = -5.0;      // setpoint box, may lie beyond the power limits
  double u_max = 5.0;
  Eigen::Index n_units() const {
    return thermal.size() + storage.size() + renewable.size();
  }
};

/// State carried between EMS sampling instants.
struct GridState {
  Vec x;            // stored energies [pu·h], length n_s
  IVec delta_prev;  // previous commitment, length n_t, entries in {0,1}
};

/// Per-step control: power setpoints and thermal commitment.
struct Setpoints {
  Vec u_t, u_s, u_r;
  IVec delta_t;
};

/// One realization of the uncertain inputs: available renewable power
/// (w_r >= 0) and load demand (w_d <= 0).
struct DisturbanceSample {
  Vec w_r, w_d;
};

enum class Clamp : std::uint8_t { Lower, Interior, Upper, Off };

/// Result of solving the steady-state power balance.
struct Dispatch {
  Vec p_t, p_s, p_r;      // realized unit powers
  double rho = 0.0;       // steady-state frequency deviation
  double residual = 0.0;  // |1'p_t + 1'p_s + 1'p_r + 1'w_d|
  std::vector<Clamp> sat_t, sat_s, sat_r;
};

struct CostWeights {
  Vec c_fuel, c_on, c_sw;  // over thermal units
  Vec c_st;                // over storage units
};

}  // namespace mgopcon
