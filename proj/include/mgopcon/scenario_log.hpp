#pragma once

#include "mgopcon/types.hpp"

namespace mgopcon {

/// Disturbance trajectory over N steps; rows are steps.
struct DisturbanceTrajectory {
  Mat w_r;  // N x n_r, available renewable power >= 0
  Mat w_d;  // N x n_d, load demand <= 0
  int steps() const { return static_cast<int>(w_d.rows()); }
  DisturbanceSample at(int k) const {
    return {w_r.row(k).transpose(), w_d.row(k).transpose()};
  }
  DisturbanceTrajectory window(int start, int len) const {
    return {w_r.middleRows(start, len), w_d.middleRows(start, len)};
  }
};

/// Per-step interval bounds on the disturbances, lo <= hi element-wise.
struct ForecastBounds {
  DisturbanceTrajectory lo;  // w_min profile
  DisturbanceTrajectory hi;  // w_max profile
  int steps() const { return lo.steps(); }
  ForecastBounds window(int start, int len) const {
    return {lo.window(start, len), hi.window(start, len)};
  }
};

/// Record of a simulated run. Row k holds step k; states chain as
/// x.row(k) = x.row(k-1) - Ts * p_s.row(k) (x0 seeds the chain).
struct SimLog {
  Vec x0;
  IVec delta0;
  Mat p_t, p_s, p_r;  // N x n_*
  Mat x;              // N x n_s, energy after the step
  Mat w_r, w_d;       // realized disturbances
  IMat delta;         // N x n_t
  Vec rho;
  Vec stage_costs;
  int steps() const { return static_cast<int>(rho.size()); }

  void resize(int n, const FleetParams& p) {
    p_t.resize(n, p.thermal.size());
    p_s.resize(n, p.storage.size());
    p_r.resize(n, p.renewable.size());
    x.resize(n, p.storage.size());
    w_r.resize(n, p.renewable.size());
    w_d.resize(n, p.n_loads);
    delta.resize(n, p.thermal.size());
    rho.resize(n);
    stage_costs.resize(n);
  }

  /// Thermal / renewable infeed energies Ts * sum of powers over the log.
  double thermal_infeed_energy(double ts_hours) const {
    return ts_hours * p_t.sum();
  }
  double renewable_infeed_energy(double ts_hours) const {
    return ts_hours * p_r.sum();
  }
};

}  // namespace mgopcon
