#include "mgopcon/ems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mgopcon/cost.hpp"
#include "mgopcon/dispatch.hpp"
#include "mgopcon/errors.hpp"
#include "mgopcon/model.hpp"
#include "mgopcon/scenario.hpp"

namespace mgopcon::ems {

namespace {

int popcount(const IVec& v) { return v.sum(); }

int switch_count(const IVec& a, const IVec& b, const Vec&) {
  int s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double switch_cost(const IVec& a, const IVec& b, const Vec& c_sw) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    s += c_sw[i] * std::abs(a[i] - b[i]);
  return s;
}

// all commitment columns, fewest committed units first, then
// lexicographically earliest-off
std::vector<IVec> commitment_columns(int n_t) {
  if (n_t > 16)
    throw ValidationError("unit commitment: more than 16 thermal units");
  std::vector<IVec> cols;
  for (int mask = 0; mask < (1 << n_t); ++mask) {
    IVec c(n_t);
    for (int i = 0; i < n_t; ++i) c[i] = (mask >> i) & 1;
    cols.push_back(std::move(c));
  }
  std::sort(cols.begin(), cols.end(), [](const IVec& a, const IVec& b) {
    int pa = a.sum(), pb = b.sum();
    if (pa != pb) return pa < pb;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  return cols;
}

// flattened plan (step-major) for deterministic tie-breaking
std::vector<int> flatten(const IMat& delta) {
  std::vector<int> f;
  f.reserve(delta.size());
  for (int j = 0; j < delta.cols(); ++j)
    for (int i = 0; i < delta.rows(); ++i) f.push_back(delta(i, j));
  return f;
}

struct PlanKey {
  double cost;
  int total_on;
  std::vector<int> flat;
  bool better_than(const PlanKey& o) const {
    if (cost != o.cost) return cost < o.cost;
    if (total_on != o.total_on) return total_on < o.total_on;
    return flat < o.flat;
  }
};

// per-step, per-scenario stage-cost floor: the storage term is bounded by
// the cheapest admissible aggregate charge, the fuel term by the generation
// the thermal fleet cannot avoid. Fixed-on and switching terms are >= 0.
double min_stage_cost(const FleetParams& P, const CostWeights& W, double load,
                      double renew_avail) {
  double a = std::max(P.storage.p_min.sum(),
                      load - P.thermal.p_max.sum() - renew_avail);
  // cheapest split of aggregate storage power >= a across units
  double cost = 0.0;
  if (P.storage.size() > 0) {
    std::vector<int> order(P.storage.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return W.c_st[i] < W.c_st[j]; });
    double need = a - P.storage.p_min.sum();
    for (int i : order) {
      double p = P.storage.p_min[i];
      if (need > 0) {
        double raise = std::min(P.storage.p_max[i] - P.storage.p_min[i], need);
        p += raise;
        need -= raise;
      }
      cost += W.c_st[i] * p;
    }
  }
  if (P.thermal.size() > 0) {
    double forced =
        std::max(0.0, load - renew_avail - P.storage.p_max.sum());
    cost += W.c_fuel.minCoeff() * forced;
  }
  return cost;
}

struct UcSearch {
  const FleetParams& P;
  const CostWeights& W;
  const Setpoints& u_star;
  const std::vector<DisturbanceTrajectory>& scen;
  int np;
  int max_switches;
  bool prune;

  dispatch::StepKernel kernel;
  std::vector<IVec> columns;
  std::vector<Mat> x_stack;    // depth -> n_s x n_scen
  std::vector<Vec> acc_stack;  // depth -> per-scenario accumulated cost
  std::vector<IVec> col_stack;
  std::vector<int> sw_stack;
  std::vector<Vec> suffix;  // scenario -> cost floor of steps j..np-1

  bool has_best = false;
  PlanKey best_key{};
  IMat best_delta;
  Vec best_scenario_costs;
  long nodes = 0;
  bool cap_bound = false;

  UcSearch(const FleetParams& p, const CostWeights& w, const Setpoints& u,
           const std::vector<DisturbanceTrajectory>& s, const GridState& st0,
           const EmsOptions& o, bool prune_)
      : P(p), W(w), u_star(u), scen(s), np(o.np),
        max_switches(o.max_switches), prune(prune_), kernel(p) {
    columns = commitment_columns((int)P.thermal.size());
    const int n_scen = (int)scen.size();
    x_stack.assign(np + 1, Mat(P.storage.size(), n_scen));
    acc_stack.assign(np + 1, Vec::Zero(n_scen));
    col_stack.assign(np + 1, IVec::Zero(P.thermal.size()));
    sw_stack.assign(np + 1, 0);
    for (int s_i = 0; s_i < n_scen; ++s_i) x_stack[0].col(s_i) = st0.x;
    col_stack[0] = st0.delta_prev;
    suffix.assign(n_scen, Vec::Zero(np + 1));
    for (int s_i = 0; s_i < n_scen; ++s_i) {
      for (int j = np - 1; j >= 0; --j) {
        double load = -scen[s_i].w_d.row(j).sum();
        double avail = scen[s_i].w_r.row(j).sum();
        suffix[s_i][j] =
            suffix[s_i][j + 1] + min_stage_cost(P, W, load, avail);
      }
    }
  }

  // evaluates one column at depth d for every scenario; returns false when
  // any scenario cannot balance
  bool apply_column(int d, const IVec& col) {
    const int n_scen = (int)scen.size();
    for (int s_i = 0; s_i < n_scen; ++s_i) {
      if (!kernel.solve(u_star.u_t, u_star.u_s, u_star.u_r, col,
                        scen[s_i].w_r.row(d).transpose(),
                        scen[s_i].w_d.row(d).transpose(), x_stack[d].col(s_i)))
        return false;
      double c = W.c_fuel.dot(kernel.p_t()) + W.c_st.dot(kernel.p_s()) +
                 W.c_on.dot(col.cast<double>()) +
                 switch_cost(col, col_stack[d], W.c_sw);
      acc_stack[d + 1][s_i] = acc_stack[d][s_i] + c;
      x_stack[d + 1].col(s_i) = kernel.x_next();
    }
    return true;
  }

  void offer(const IMat& delta, const Vec& scenario_costs) {
    PlanKey key{scenario_costs.maxCoeff(), (int)delta.sum(), flatten(delta)};
    if (!has_best || key.better_than(best_key)) {
      has_best = true;
      best_key = std::move(key);
      best_delta = delta;
      best_scenario_costs = scenario_costs;
    }
  }

  // full-plan evaluation used to seed the incumbent
  void offer_candidate(const IMat& delta) {
    if (delta.rows() != P.thermal.size() || delta.cols() != np) return;
    int sw = 0;
    IVec prev = col_stack[0];
    for (int j = 0; j < np; ++j) {
      sw += switch_count(delta.col(j), prev, W.c_sw);
      prev = delta.col(j);
    }
    if (sw > max_switches) return;
    for (int j = 0; j < np; ++j) {
      col_stack[j + 1] = delta.col(j);
      if (!apply_column(j, col_stack[j + 1])) return;
      // apply_column reads col_stack[d] as the previous column, so keep the
      // stack consistent while walking forward
    }
    offer(delta, acc_stack[np]);
    col_stack.assign(np + 1, IVec::Zero(P.thermal.size()));
    col_stack[0] = IVec(best_delta.rows());  // reset below
    col_stack[0] = IVec::Zero(P.thermal.size());
  }

  void dfs(int d) {
    if (d == np) {
      IMat delta(P.thermal.size(), np);
      for (int j = 0; j < np; ++j) delta.col(j) = col_stack[j + 1];
      offer(delta, acc_stack[np]);
      return;
    }
    for (const auto& col : columns) {
      ++nodes;
      int sw = sw_stack[d] + switch_count(col, col_stack[d], W.c_sw);
      if (sw > max_switches) {
        // only a real bind when the subtree could still have improved
        double lb = (acc_stack[d] + suffix_at(d)).maxCoeff();
        if (!has_best || lb < best_key.cost) cap_bound = true;
        continue;
      }
      if (!apply_column(d, col)) continue;
      if (prune && has_best) {
        double lb = -std::numeric_limits<double>::infinity();
        for (int s_i = 0; s_i < (int)scen.size(); ++s_i)
          lb = std::max(lb, acc_stack[d + 1][s_i] + suffix[s_i][d + 1]);
        if (lb >= best_key.cost) continue;
      }
      col_stack[d + 1] = col;
      sw_stack[d + 1] = sw;
      dfs(d + 1);
    }
  }

  Vec suffix_at(int d) const {
    Vec v((int)scen.size());
    for (int s_i = 0; s_i < (int)scen.size(); ++s_i) v[s_i] = suffix[s_i][d];
    return v;
  }
};

CommitmentPlan solve_core(const GridState& state0,
                          const std::vector<DisturbanceTrajectory>& scenarios,
                          const Setpoints& u_star, const FleetParams& params,
                          const CostWeights& weights, const EmsOptions& opts,
                          const IMat* warm_start) {
  if (opts.np < 1) throw ValidationError("unit commitment: np must be >= 1");
  if (scenarios.empty())
    throw ValidationError("unit commitment: empty scenario set");
  for (const auto& s : scenarios)
    if (s.steps() < opts.np)
      throw ValidationError("unit commitment: scenario shorter than horizon");
  const int n_t = (int)params.thermal.size();
  if (opts.solver == UcSolver::Exhaustive && n_t * opts.np > 20)
    throw ValidationError(
        "exhaustive unit commitment limited to n_t * np <= 20");

  const bool prune = opts.solver == UcSolver::BranchAndBound;
  UcSearch search(params, weights, u_star, scenarios, state0, opts, prune);

  if (prune) {
    if (warm_start) search.offer_candidate(*warm_start);
    search.offer_candidate(IMat::Constant(n_t, opts.np, 1));
    search.offer_candidate(state0.delta_prev.replicate(1, opts.np));
  }
  search.dfs(0);
  if (!search.has_best)
    throw NoFeasiblePlanError(
        "no commitment plan can balance every scenario over the horizon");

  CommitmentPlan plan;
  plan.delta = search.best_delta;
  plan.worst_case_cost = search.best_key.cost;
  plan.per_scenario_costs.assign(
      search.best_scenario_costs.data(),
      search.best_scenario_costs.data() + search.best_scenario_costs.size());
  plan.nodes_explored = search.nodes;
  plan.optimal = !search.cap_bound;
  return plan;
}

std::vector<DisturbanceTrajectory> scenario_set(const ForecastBounds& bounds,
                                                const EmsOptions& opts) {
  if (opts.policy == ScenarioPolicy::Extremes)
    return scenario::extreme_set(bounds);
  std::vector<DisturbanceTrajectory> out;
  for (int i = 0; i <= opts.alpha_grid_m; ++i)
    out.push_back(
        scenario::interpolate(bounds, double(i) / opts.alpha_grid_m));
  return out;
}

}  // namespace

RolloutResult rollout(const IMat& delta, const Setpoints& u_star,
                      const DisturbanceTrajectory& w, const GridState& state0,
                      const FleetParams& params, const CostWeights& weights) {
  const int np = (int)delta.cols();
  if (delta.rows() != params.thermal.size())
    throw ValidationError("rollout: delta rows must match thermal units");
  if (w.steps() < np)
    throw ValidationError("rollout: trajectory shorter than the plan");
  dispatch::StepKernel kernel(params);
  SimLog log;
  log.resize(np, params);
  log.x0 = state0.x;
  log.delta0 = state0.delta_prev;
  Vec x = state0.x;
  IVec prev = state0.delta_prev;
  double total = 0.0;
  for (int j = 0; j < np; ++j) {
    IVec col = delta.col(j);
    if (!kernel.solve(u_star.u_t, u_star.u_s, u_star.u_r, col,
                      w.w_r.row(j).transpose(), w.w_d.row(j).transpose(), x))
      throw InfeasibleError(kernel.target(), kernel.range_lo(),
                            kernel.range_hi(), j);
    double c = weights.c_fuel.dot(kernel.p_t()) +
               weights.c_st.dot(kernel.p_s()) +
               weights.c_on.dot(col.cast<double>()) +
               switch_cost(col, prev, weights.c_sw);
    total += c;
    log.p_t.row(j) = kernel.p_t().transpose();
    log.p_s.row(j) = kernel.p_s().transpose();
    log.p_r.row(j) = kernel.p_r().transpose();
    log.x.row(j) = kernel.x_next().transpose();
    log.w_r.row(j) = w.w_r.row(j);
    log.w_d.row(j) = w.w_d.row(j);
    log.delta.row(j) = col.transpose();
    log.rho[j] = kernel.rho();
    log.stage_costs[j] = c;
    x = kernel.x_next();
    prev = col;
  }
  return {total, std::move(log)};
}

double worst_case_cost(const IMat& delta, const Setpoints& u_star,
                       const std::vector<DisturbanceTrajectory>& scenarios,
                       const GridState& state0, const FleetParams& params,
                       const CostWeights& weights) {
  if (scenarios.empty())
    throw ValidationError("worst_case_cost: empty scenario set");
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < (int)scenarios.size(); ++s) {
    try {
      worst = std::max(
          worst,
          rollout(delta, u_star, scenarios[s], state0, params, weights).cost);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(e.demand, e.range_lo, e.range_hi, e.step, s);
    }
  }
  return worst;
}

CommitmentPlan solve_unit_commitment(const GridState& state0,
                                     const ForecastBounds& bounds,
                                     const Setpoints& u_star,
                                     const FleetParams& params,
                                     const CostWeights& weights,
                                     const EmsOptions& opts,
                                     const IMat* warm_start) {
  if (bounds.steps() < opts.np)
    throw ValidationError("unit commitment: bounds shorter than horizon");
  auto scen = scenario_set(bounds.window(0, opts.np), opts);
  return solve_core(state0, scen, u_star, params, weights, opts, warm_start);
}

CommitmentPlan prescient_plan(const GridState& state0,
                              const DisturbanceTrajectory& w_actual,
                              const Setpoints& u_star,
                              const FleetParams& params,
                              const CostWeights& weights,
                              const EmsOptions& opts, const IMat* warm_start) {
  if (w_actual.steps() < opts.np)
    throw ValidationError("prescient plan: trajectory shorter than horizon");
  std::vector<DisturbanceTrajectory> scen{w_actual.window(0, opts.np)};
  return solve_core(state0, scen, u_star, params, weights, opts, warm_start);
}

SimLog receding_horizon_run(Controller controller, const ForecastBounds& bounds,
                            const DisturbanceTrajectory& realization,
                            const GridState& state0, const FleetParams& params,
                            const CostWeights& weights, const EmsOptions& opts,
                            int nsim) {
  if (realization.steps() < nsim + opts.np)
    throw ValidationError(
        "receding horizon: realization must cover nsim + np steps");
  if (controller == Controller::UcEms && bounds.steps() < nsim + opts.np)
    throw ValidationError(
        "receding horizon: bounds must cover nsim + np steps");

  dispatch::StepKernel kernel(params);
  SimLog log;
  log.resize(nsim, params);
  log.x0 = state0.x;
  log.delta0 = state0.delta_prev;
  GridState state = state0;
  IMat warm;
  bool have_warm = false;

  for (int k = 0; k < nsim; ++k) {
    IVec col;
    if (controller == Controller::FixedOn) {
      col = IVec::Constant(params.thermal.size(), 1);
    } else {
      CommitmentPlan plan;
      if (controller == Controller::UcEms) {
        plan = solve_unit_commitment(state, bounds.window(k, opts.np), u_starred(), params,
                                     weights, opts, have_warm ? &warm : nullptr);
      }
      col = plan.delta.col(0);
      // shift for the next instant: drop the applied column, repeat the tail
      warm.resize(plan.delta.rows(), plan.delta.cols());
      warm.leftCols(plan.delta.cols() - 1) = plan.delta.rightCols(plan.delta.cols() - 1);
      warm.col(plan.delta.cols() - 1) = plan.delta.col(plan.delta.cols() - 1);
      have_warm = true;
    }

    if (!kernel.solve(u_starred().u_t, u_starred().u_s, u_starred().u_r, col,
                      realization.w_r.row(k).transpose(),
                      realization.w_d.row(k).transpose(), state.x))
      throw InfeasibleError(kernel.target(), kernel.range_lo(),
                            kernel.range_hi(), k);
    double c = weights.c_fuel.dot(kernel.p_t()) +
               weights.c_st.dot(kernel.p_s()) +
               weights.c_on.dot(col.cast<double>()) +
               switch_cost(col, state.delta_prev, weights.c_sw);
    log.p_t.row(k) = kernel.p_t().transpose();
    log.p_s.row(k) = kernel.p_s().transpose();
    log.p_r.row(k) = kernel.p_r().transpose();
    log.x.row(k) = kernel.x_next().transpose();
    log.w_r.row(k) = realization.w_r.row(k);
    log.w_d.row(k) = realization.w_d.row(k);
    log.delta.row(k) = col.transpose();
    log.rho[k] = kernel.rho();
    log.stage_costs[k] = c;
    state.x = kernel.x_next();
    state.delta_prev = col;
  }
  return log;
}

RegretResult regret(const Setpoints& u_candidate, const IMat& delta_candidate,
                    const std::vector<DisturbanceTrajectory>& scenarios,
                    const GridState& state0, const FleetParams& params,
                    const CostWeights& weights, const EmsOptions& opts) {
  // placeholder; defined below after grid helpers
  (void)u_candidate;
  (void)delta_candidate;
  (void)scenarios;
  (void)state0;
  (void)params;
  (void)weights;
  (void)opts;
  throw ValidationError("unreachable");
}

}  // namespace mgopcon::ems
