#pragma once

#include <optional>
#include <vector>

#include "mgopcon/scenario_log.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::ems {

enum class ScenarioPolicy { Extremes, AlphaGrid };
enum class UcSolver { BranchAndBound, Exhaustive };
enum class InnerCommitment { FreeDelta, FixedOn };

struct EmsOptions {
  int np = 8;                   // prediction horizon steps
  ScenarioPolicy policy = ScenarioPolicy::Extremes;
  int alpha_grid_m = 10;        // AlphaGrid uses alpha = i/m, i = 0..m
  UcSolver solver = UcSolver::BranchAndBound;
  int max_switches = 4;         // switch-count cap per horizon
  double tolerance = 1e-9;
  // Setpoint grid used by the regret oracle (constant trajectories,
  // first storage setpoint pinned at zero by the droop-shift invariance).
  double grid_step = 0.05;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  InnerCommitment regret_commitment = InnerCommitment::FreeDelta;
};

struct CommitmentPlan {
  IMat delta;  // n_t x Np
  double worst_case_cost = 0.0;
  std::vector<double> per_scenario_costs;
  long nodes_explored = 0;
  bool optimal = true;  // false when the switch cap pruned the search
};

struct RolloutResult {
  double cost;
  SimLog log;
};

/// Simulates Np steps under fixed setpoints u_star and the commitment
/// columns of delta; returns the horizon cost and the log. Throws
/// InfeasibleError carrying the failing step index.
RolloutResult rollout(const IMat& delta, const Setpoints& u_star,
                      const DisturbanceTrajectory& w, const GridState& state0,
                      const FleetParams& params, const CostWeights& weights);

/// Max rollout cost over the scenario set; any infeasible scenario rejects
/// the plan (InfeasibleError with the scenario index).
double worst_case_cost(const IMat& delta, const Setpoints& u_star,
                       const std::vector<DisturbanceTrajectory>& scenarios,
                       const GridState& state0, const FleetParams& params,
                       const CostWeights& weights);

/// Robust unit commitment: delta minimizing the worst-case horizon cost
/// over the scenario set drawn from `bounds` per opts.policy.
/// warm_start, when given, seeds the incumbent (receding-horizon reuse).
CommitmentPlan solve_unit_commitment(const GridState& state0,
                                     const ForecastBounds& bounds,
                                     const Setpoints& u_star,
                                     const FleetParams& params,
                                     const CostWeights& weights,
                                     const EmsOptions& opts,
                                     const IMat* warm_start = nullptr);

/// Perfect-knowledge baseline: the same problem with the singleton
/// scenario set {w_actual}.
CommitmentPlan prescient_plan(const GridState& state0,
                              const DisturbanceTrajectory& w_actual,
                              const Setpoints& u_star,
                              const FleetParams& params,
                              const CostWeights& weights,
                              const EmsOptions& opts,
                              const IMat* warm_start = nullptr);

enum class Controller { UcEms, Prescient, FixedOn };

/// Receding-horizon closed loop: at each step the controller plans over the
/// shifted window, the first commitment column is applied, and the true
/// system is stepped on the realization. realization must cover
/// nsim + opts.np steps.
SimLog receding_horizon_run(Controller controller, const ForecastBounds& bounds,
                            const DisturbanceTrajectory& realization,
                            const GridState& state0, const FleetParams& params,
                            const CostWeights& weights, const EmsOptions& opts,
                            int nsim);

struct RegretResult {
  double max_regret = 0.0;
  std::vector<double> per_scenario_regret;
  std::vector<double> candidate_costs;
  std::vector<double> best_costs;
  std::vector<int> infeasible_scenarios;  // scenarios where the candidate fails
};

/// Desk-scale regret oracle. For each scenario the best achievable cost is
/// found by exhaustive search over a grid of constant setpoint trajectories
/// crossed with commitment sequences (all of them, or delta == 1 under
/// operability requirement 1, per opts.regret_commitment). Np <= 3 enforced.
RegretResult regret(const Setpoints& u_candidate, const IMat& delta_candidate,
                    const std::vector<DisturbanceTrajectory>& scenarios,
                    const GridState& state0, const FleetParams& params,
                    const CostWeights& weights, const EmsOptions& opts);

}  // namespace mgopcon::ems
