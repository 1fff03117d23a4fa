#include "mgopcon/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include "mgopcon/errors.hpp"
#include "mgopcon/sat.hpp"

namespace mgopcon::dispatch {

namespace {

void check_shapes(const Setpoints& sp, const DisturbanceSample& w,
                  const FleetParams& P) {
  if (sp.u_t.size() != P.thermal.size() || sp.u_s.size() != P.storage.size() ||
      sp.u_r.size() != P.renewable.size() ||
      sp.delta_t.size() != P.thermal.size())
    throw ValidationError("setpoint dimensions do not match the fleet");
  if (w.w_r.size() != P.renewable.size() || w.w_d.size() != P.n_loads)
    throw ValidationError("disturbance dimensions do not match the fleet");
  for (Eigen::Index i = 0; i < sp.delta_t.size(); ++i)
    if (sp.delta_t[i] != 0 && sp.delta_t[i] != 1)
      throw ValidationError("delta_t entries must be 0 or 1");
}

}  // namespace

double aggregate_power(double rho, const Setpoints& sp,
                       const DisturbanceSample& w,
                       const model::StoragePowerBounds& bounds,
                       const FleetParams& P) {
  check_shapes(sp, w, P);
  double total = 0.0;
  for (Eigen::Index i = 0; i < P.thermal.size(); ++i)
    if (sp.delta_t[i])
      total += clamp_unchecked(P.thermal.p_min[i],
                               sp.u_t[i] + P.thermal.chi[i] * rho,
                               P.thermal.p_max[i]);
  for (Eigen::Index i = 0; i < P.storage.size(); ++i)
    total += clamp_unchecked(bounds.lo[i], sp.u_s[i] + P.storage.chi[i] * rho,
                             bounds.hi[i]);
  for (Eigen::Index i = 0; i < P.renewable.size(); ++i) {
    // the available power also caps the lower limit: a unit cannot be forced
    // above what the resource provides
    double lo = std::min(P.renewable.p_min[i], w.w_r[i]);
    total += clamp_unchecked(lo, sp.u_r[i] + P.renewable.chi[i] * rho, w.w_r[i]);
  }
  return total;
}

StepKernel::StepKernel(const FleetParams& params)
    : P_(&params),
      nt_(params.thermal.size()),
      ns_(params.storage.size()),
      nr_(params.renewable.size()),
      n_(nt_ + ns_ + nr_) {
  lo_.resize(n_);
  hi_.resize(n_);
  u_.resize(n_);
  chi_.resize(n_);
  on_.resize(nt_);
  bp_.reserve(2 * n_);
  p_t_.resize(nt_);
  p_s_.resize(ns_);
  p_r_.resize(nr_);
  x_next_.resize(ns_);
}

double StepKernel::eval_aggregate(double rho) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i)
    total += clamp_unchecked(lo_[i], u_[i] + chi_[i] * rho, hi_[i]);
  return total;
}

bool StepKernel::solve(const Vec& u_t, const Vec& u_s, const Vec& u_r,
                       const IVec& delta, const Eigen::Ref<const Vec>& w_r,
                       const Eigen::Ref<const Vec>& w_d,
                       const Eigen::Ref<const Vec>& x_prev) {
  const FleetParams& P = *P_;
  for (Eigen::Index i = 0; i < nt_; ++i) {
    on_[i] = delta[i];
    if (delta[i]) {
      lo_[i] = P.thermal.p_min[i];
      hi_[i] = P.thermal.p_max[i];
      u_[i] = u_t[i];
      chi_[i] = P.thermal.chi[i];
    } else {  // off: no output, no power sharing
      lo_[i] = hi_[i] = u_[i] = chi_[i] = 0.0;
    }
  }
  for (Eigen::Index i = 0; i < ns_; ++i) {
    Eigen::Index k = nt_ + i;
    lo_[k] = std::max(P.storage.p_min[i],
                      (x_prev[i] - P.storage.x_max[i]) / P.ts_hours);
    hi_[k] = std::min(P.storage.p_max[i],
                      (x_prev[i] - P.storage.x_min[i]) / P.ts_hours);
    u_[k] = u_s[i];
    chi_[k] = P.storage.chi[i];
  }
  for (Eigen::Index i = 0; i < nr_; ++i) {
    Eigen::Index k = nt_ + ns_ + i;
    lo_[k] = std::min(P.renewable.p_min[i], w_r[i]);
    hi_[k] = w_r[i];
    u_[k] = u_r[i];
    chi_[k] = P.renewable.chi[i];
  }

  target_ = -w_d.sum();
  g_lo_ = 0.0;
  g_hi_ = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    g_lo_ += lo_[i];
    g_hi_ += hi_[i];
  }
  if (target_ < g_lo_ || target_ > g_hi_) return false;

  // breakpoints: the rho values where each droop line meets its clamps
  bp_.clear();
  for (Eigen::Index i = 0; i < n_; ++i) {
    if (chi_[i] > 0.0 && lo_[i] < hi_[i]) {
      bp_.push_back((lo_[i] - u_[i]) / chi_[i]);
      bp_.push_back((hi_[i] - u_[i]) / chi_[i]);
    }
  }
  std::sort(bp_.begin(), bp_.end());

  double rho = 0.0;
  if (!bp_.empty()) {
    const std::size_t m = bp_.size();
    // locate the first breakpoint at or above the target; the curve value
    // sequence is nondecreasing, so binary search over evaluations works
    std::size_t lo_idx = 0, hi_idx = m;  // first index with g(bp) >= target
    while (lo_idx < hi_idx) {
      std::size_t mid = (lo_idx + hi_idx) / 2;
      if (eval_aggregate(bp_[mid]) >= target_)
        hi_idx = mid;
      else
        lo_idx = mid + 1;
    }
    if (lo_idx == 0) {
      rho = bp_.front();
    } else if (lo_idx == m) {
      rho = bp_.back();
    } else {
      double a = bp_[lo_idx - 1], b = bp_[lo_idx];
      double ga = eval_aggregate(a);
      double mid = 0.5 * (a + b);
      double slope = 0.0;
      for (Eigen::Index i = 0; i < n_; ++i)
        if (chi_[i] > 0.0 && lo_[i] < hi_[i]) {
          double rl = (lo_[i] - u_[i]) / chi_[i];
          double rh = (hi_[i] - u_[i]) / chi_[i];
          if (rl < mid && mid < rh) slope += chi_[i];
        }
      if (slope > 0.0)
        rho = clamp_unchecked(a, a + (target_ - ga) / slope, b);
      else  // numerically flat: the right endpoint closes the gap
        rho = b;
    }

    // If no droop line is strictly inside its linear region at rho, the
    // solution is a whole interval; report its midpoint (powers are the
    // same across it). Infinite ends are clamped to the breakpoint hull.
    bool interior = false;
    for (Eigen::Index i = 0; i < n_ && !interior; ++i)
      if (chi_[i] > 0.0 && lo_[i] < hi_[i]) {
        double rl = (lo_[i] - u_[i]) / chi_[i];
        double rh = (hi_[i] - u_[i]) / chi_[i];
        if (rl < rho && rho < rh) interior = true;
      }
    if (!interior) {
      double L = bp_.front(), R = bp_.back();
      for (Eigen::Index i = 0; i < n_; ++i)
        if (chi_[i] > 0.0 && lo_[i] < hi_[i]) {
          double rl = (lo_[i] - u_[i]) / chi_[i];
          double rh = (hi_[i] - u_[i]) / chi_[i];
          if (rh <= rho) L = std::max(L, rh);  // upper-clamped: flat left edge
          if (rl >= rho) R = std::min(R, rl);  // lower-clamped: flat right edge
        }
      if (L <= R) rho = 0.5 * (L + R);
    }
  }

  rho_ = rho;
  double total = 0.0;
  for (Eigen::Index i = 0; i < nt_; ++i) {
    p_t_[i] = delta[i] ? clamp_unchecked(lo_[i], u_[i] + chi_[i] * rho, hi_[i])
                       : 0.0;
    total += p_t_[i];
  }
  for (Eigen::Index i = 0; i < ns_; ++i) {
    Eigen::Index k = nt_ + i;
    p_s_[i] = clamp_unchecked(lo_[k], u_[k] + chi_[k] * rho, hi_[k]);
    total += p_s_[i];
    // exact value lies inside the window by construction of the power
    // bounds; the clamp removes sub-ulp rounding only
    x_next_[i] = clamp_unchecked(P.storage.x_min[i],
                                 x_prev[i] - P.ts_hours * p_s_[i],
                                 P.storage.x_max[i]);
  }
  for (Eigen::Index i = 0; i < nr_; ++i) {
    Eigen::Index k = nt_ + ns_ + i;
    p_r_[i] = clamp_unchecked(lo_[k], u_[k] + chi_[k] * rho, hi_[k]);
    total += p_r_[i];
  }
  residual_ = std::abs(total - target_);
  return true;
}

namespace {
Clamp classify(double lo, double v, double hi) {
  if (v <= lo) return Clamp::Lower;
  if (v >= hi) return Clamp::Upper;
  return Clamp::Interior;
}
}  // namespace

Clamp StepKernel::clamp_t(Eigen::Index i) const {
  if (!on_[i]) return Clamp::Off;
  return classify(lo_[i], u_[i] + chi_[i] * rho_, hi_[i]);
}

Clamp StepKernel::clamp_s(Eigen::Index i) const {
  Eigen::Index k = nt_ + i;
  return classify(lo_[k], u_[k] + chi_[k] * rho_, hi_[k]);
}

Clamp StepKernel::clamp_r(Eigen::Index i) const {
  Eigen::Index k = nt_ + ns_ + i;
  return classify(lo_[k], u_[k] + chi_[k] * rho_, hi_[k]);
}

namespace {

Dispatch package(const StepKernel& K, const FleetParams& P) {
  Dispatch d;
  d.p_t = K.p_t();
  d.p_s = K.p_s();
  d.p_r = K.p_r();
  d.rho = K.rho();
  d.residual = K.residual();
  d.sat_t.resize(P.thermal.size());
  d.sat_s.resize(P.storage.size());
  d.sat_r.resize(P.renewable.size());
  for (Eigen::Index i = 0; i < P.thermal.size(); ++i) d.sat_t[i] = K.clamp_t(i);
  for (Eigen::Index i = 0; i < P.storage.size(); ++i) d.sat_s[i] = K.clamp_s(i);
  for (Eigen::Index i = 0; i < P.renewable.size(); ++i)
    d.sat_r[i] = K.clamp_r(i);
  return d;
}

}  // namespace

Dispatch solve_balance(const Setpoints& sp, const DisturbanceSample& w,
                       const GridState& state, const FleetParams& params) {
  check_shapes(sp, w, params);
  model::storage_power_bounds(state.x, params);  // state invariant gate
  StepKernel K(params);
  if (!K.solve(sp.u_t, sp.u_s, sp.u_r, sp.delta_t, w.w_r, w.w_d, state.x))
    throw InfeasibleError(K.target(), K.range_lo(), K.range_hi());
  return package(K, params);
}

std::pair<Dispatch, GridState> step(const GridState& state, const Setpoints& sp,
                                    const DisturbanceSample& w,
                                    const FleetParams& params) {
  check_shapes(sp, w, params);
  model::storage_power_bounds(state.x, params);
  StepKernel K(params);
  if (!K.solve(sp.u_t, sp.u_s, sp.u_r, sp.delta_t, w.w_r, w.w_d, state.x))
    throw InfeasibleError(K.target(), K.range_lo(), K.range_hi());
  GridState next;
  next.x = K.x_next();
  next.delta_prev = sp.delta_t;
  return {package(K, params), std::move(next)};
}

std::pair<double, double> feasible_range(const Setpoints& sp,
                                         const DisturbanceSample& w,
                                         const GridState& state,
                                         const FleetParams& params) {
  check_shapes(sp, w, params);
  auto b = model::storage_power_bounds(state.x, params);
  double lo = 0.0, hi = 0.0;
  for (Eigen::Index i = 0; i < params.thermal.size(); ++i) {
    if (sp.delta_t[i]) {
      lo += params.thermal.p_min[i];
      hi += params.thermal.p_max[i];
    }
  }
  lo += b.lo.sum();
  hi += b.hi.sum();
  for (Eigen::Index i = 0; i < params.renewable.size(); ++i) {
    lo += std::min(params.renewable.p_min[i], w.w_r[i]);
    hi += w.w_r[i];
  }
  return {lo, hi};
}

}  // namespace mgopcon::dispatch
