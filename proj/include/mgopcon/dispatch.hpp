#pragma once

#include <utility>

#include "mgopcon/model.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::dispatch {

/// Total saturated droop response at frequency deviation rho:
///   p_t = diag(delta) sat(p_t_min, u_t + chi_t rho, p_t_max)
///   p_s =             sat(ps_lo_k, u_s + chi_s rho, ps_hi_k)
///   p_r =             sat(p_r_min, u_r + chi_r rho, w_r)
/// Monotone nondecreasing in rho since all chi >= 0.
double aggregate_power(double rho, const Setpoints& sp,
                       const DisturbanceSample& w,
                       const model::StoragePowerBounds& bounds,
                       const FleetParams& params);

/// Solves 1'p_t + 1'p_s + 1'p_r = -1'w_d for rho by exact scan of the
/// piecewise-linear aggregate curve. On a flat solution segment the
/// midpoint of the valid rho interval is reported (unit powers are
/// identical across it). Throws InfeasibleError when the demand lies
/// outside the reachable aggregate range.
Dispatch solve_balance(const Setpoints& sp, const DisturbanceSample& w,
                       const GridState& state, const FleetParams& params);

/// Dispatches one step and advances the storage energies and commitment:
///   x' = x - Ts p_s,  delta_prev' = sp.delta_t.
std::pair<Dispatch, GridState> step(const GridState& state,
                                    const Setpoints& sp,
                                    const DisturbanceSample& w,
                                    const FleetParams& params);

/// Aggregate generation at full lower / full upper saturation. The balance
/// is solvable iff -1'w_d lies within this closed interval.
std::pair<double, double> feasible_range(const Setpoints& sp,
                                         const DisturbanceSample& w,
                                         const GridState& state,
                                         const FleetParams& params);

/// Allocation-free balance kernel for tight simulation loops. Unit data is
/// flattened once per fleet; solve() reuses internal buffers.
class StepKernel {
 public:
  explicit StepKernel(const FleetParams& params);

  /// Returns false when the balance is infeasible (outputs untouched except
  /// range_lo/range_hi/target). w_r and w_d point at n_r / n_loads entries.
  bool solve(const Vec& u_t, const Vec& u_s, const Vec& u_r, const IVec& delta,
             const double* w_r, const double* w_d,
             const Eigen::Ref<const Vec>& x_prev);

  // Outputs of the last successful solve.
  double rho() const { return rho_; }
  double residual() const { return residual_; }
  double range_lo() const { return g_lo_; }
  double range_hi() const { return g_hi_; }
  double target() const { return target_; }
  const Vec& p_t() const { return p_t_; }
  const Vec& p_s() const { return p_s_; }
  const Vec& p_r() const { return p_r_; }
  /// Next storage energies x - Ts p_s, snapped onto [x_min, x_max]
  /// (the exact value is inside by construction; the snap only removes
  /// last-ulp rounding).
  const Vec& x_next() const { return x_next_; }
  Clamp clamp_t(Eigen::Index i) const;
  Clamp clamp_s(Eigen::Index i) const;
  Clamp clamp_r(Eigen::Index i) const;

 private:
  const FleetParams* P_;
  Eigen::Index nt_, ns_, nr_, n_;
  // flattened per-unit arrays: [thermal | storage | renewable]
  std::vector<double> lo_, hi_, u_, chi_;
  std::vector<int> on_;     // commitment of the last solve
  std::vector<double> bp_;  // breakpoint scratch
  Vec p_t_, p_s_, p_r_, x_next_;
  double rho_ = 0, residual_ = 0, g_lo_ = 0, g_hi_ = 0, target_ = 0;

  double eval_aggregate(double rho) const;
};

}  // namespace mgopcon::dispatch
