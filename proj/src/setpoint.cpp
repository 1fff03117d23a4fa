#include "mgopcon/setpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mgopcon/errors.hpp"

namespace mgopcon::setpoint {

StorageRhoBounds storage_rho_bounds(const FleetParams& params) {
  const auto& s = params.storage;
  if (s.size() == 0)
    throw ValidationError("storage_rho_bounds: fleet has no storage units");
  if ((s.chi.array() == 0.0).any())
    throw ValidationError(
        "storage_rho_bounds: storage chi must be nonzero (droop quotient "
        "p/chi is undefined)");
  StorageRhoBounds b;
  b.rho_min = (s.p_min.array() / s.chi.array()).minCoeff();
  b.rho_max = (s.p_max.array() / s.chi.array()).maxCoeff();
  return b;
}

Setpoints constant_setpoints(const FleetParams& params,
                             const Eigen::Ref<const Vec>& p_rated) {
  if (p_rated.size() != params.renewable.size())
    throw ValidationError("constant_setpoints: p_rated dimension mismatch");
  if ((p_rated.array() < 0.0).any())
    throw ValidationError("constant_setpoints: p_rated must be >= 0");
  auto rb = storage_rho_bounds(params);
  Setpoints sp;
  sp.u_t = params.thermal.p_min - rb.rho_max * params.thermal.chi;
  sp.u_s = Vec::Zero(params.storage.size());
  sp.u_r = p_rated - rb.rho_min * params.renewable.chi;
  sp.delta_t = IVec::Constant(params.thermal.size(), 1);

  auto check_box = [&](const Vec& u, const char* name) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] < params.u_min) {
        std::ostringstream os;
        os << "constant setpoint " << name << "[" << i << "] = " << u[i]
           << " falls below u_min = " << params.u_min
           << "; widen the setpoint box";
        throw ValidationError(os.str());
      }
      if (u[i] > params.u_max) {
        std::ostringstream os;
        os << "constant setpoint " << name << "[" << i << "] = " << u[i]
           << " exceeds u_max = " << params.u_max
           << "; widen the setpoint box";
        throw ValidationError(os.str());
      }
    }
  };
  check_box(sp.u_t, "u_t");
  check_box(sp.u_s, "u_s");
  check_box(sp.u_r, "u_r");
  return sp;
}

RequirementReport check_requirements(const FleetParams& params,
                                     const ForecastBounds& bounds) {
  RequirementReport rep;
  const double floor = params.thermal.p_min.sum();
  const double ceil = params.thermal.p_max.sum();
  for (int k = 0; k < bounds.steps(); ++k) {
    RequirementRow r;
    r.k = k;
    // loads are <= 0; the magnitude is what the fleet must cover. The lower
    // bound profile carries the heavier load.
    r.load_lo = -bounds.lo.w_d.row(k).sum();
    r.load_hi = -bounds.hi.w_d.row(k).sum();
    r.req2_lo = r.load_lo <= ceil;
    r.req2_hi = r.load_hi <= ceil;
    r.req3_lo = r.load_lo >= floor;
    r.req3_hi = r.load_hi >= floor;
    if (!(r.req2_lo && r.req2_hi && r.req3_lo && r.req3_hi))
      rep.all_pass = false;
    rep.rows.push_back(r);
  }
  return rep;
}

namespace {

struct Interval {
  double lo, hi;
  bool degenerate;
};

Interval droop_region(double p_lo, double p_hi, double u, double chi) {
  if (chi <= 0.0 || p_lo >= p_hi) return {0.0, 0.0, true};
  return {(p_lo - u) / chi, (p_hi - u) / chi, false};
}

// non-overlap = interiors disjoint with a below b (touching endpoints allowed)
bool below(const Interval& a, const Interval& b) {
  if (a.degenerate || b.degenerate) return true;
  return a.hi <= b.lo;
}

}  // namespace

OverlapReport check_nonoverlap(const Setpoints& sp, const FleetParams& params,
                               const Eigen::Ref<const Vec>& w_r_lo,
                               const Eigen::Ref<const Vec>& w_r_hi,
                               const Eigen::Ref<const Vec>& x_lo,
                               const Eigen::Ref<const Vec>& x_hi) {
  OverlapReport rep;
  std::vector<Interval> thermal, storage, renewable;
  for (Eigen::Index i = 0; i < params.thermal.size(); ++i) {
    auto iv = droop_region(params.thermal.p_min[i], params.thermal.p_max[i],
                           sp.u_t[i], params.thermal.chi[i]);
    thermal.push_back(iv);
    rep.intervals.push_back({"thermal", (int)i, iv.lo, iv.hi, iv.degenerate});
  }
  for (Eigen::Index i = 0; i < params.storage.size(); ++i) {
    // widest instantaneous power window over the given energy range
    double lo_min = std::max(params.storage.p_min[i],
                             (x_lo[i] - params.storage.x_max[i]) / params.ts_hours);
    double hi_max = std::min(params.storage.p_max[i],
                             (x_hi[i] - params.storage.x_min[i]) / params.ts_hours);
    auto iv = droop_region(lo_min, hi_max, sp.u_s[i], params.storage.chi[i]);
    storage.push_back(iv);
    rep.intervals.push_back({"storage", (int)i, iv.lo, iv.hi, iv.degenerate});
  }
  for (Eigen::Index i = 0; i < params.renewable.size(); ++i) {
    double lo = std::min(params.renewable.p_min[i], w_r_lo[i]);
    auto iv = droop_region(lo, w_r_hi[i], sp.u_r[i], params.renewable.chi[i]);
    renewable.push_back(iv);
    rep.intervals.push_back({"renewable", (int)i, iv.lo, iv.hi, iv.degenerate});
  }

  for (auto& r : renewable)
    for (auto& s : storage)
      if (!below(r, s)) rep.renewable_below_storage = false;
  for (auto& s : storage)
    for (auto& t : thermal)
      if (!below(s, t)) rep.storage_below_thermal = false;
  bool rt = true;
  for (auto& r : renewable)
    for (auto& t : thermal)
      if (!below(r, t)) rt = false;
  rep.pass = rep.renewable_below_storage && rep.storage_below_thermal && rt;
  return rep;
}

}  // namespace mgopcon::setpoint
