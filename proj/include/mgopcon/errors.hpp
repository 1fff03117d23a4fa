#pragma once

#include <stdexcept>
#include <string>

namespace mgopcon {

/// Bad configuration or arguments (bound order, dimensions, signs).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A state vector violates its admissible set (e.g. energy outside limits).
struct StateViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The demanded load lies outside what the saturated fleet can produce.
/// step/scenario are -1 when the failure is not tied to a rollout.
struct InfeasibleError : std::runtime_error {
  double demand;
  double range_lo, range_hi;
  int step;
  int scenario;
  InfeasibleError(double demand_, double lo, double hi, int step_ = -1,
                  int scenario_ = -1)
      : std::runtime_error("infeasible power balance: demand " +
                           std::to_string(demand_) + " outside [" +
                           std::to_string(lo) + ", " + std::to_string(hi) +
                           "]"),
        demand(demand_),
        range_lo(lo),
        range_hi(hi),
        step(step_),
        scenario(scenario_) {}
};

/// Unit commitment search exhausted without a single admissible plan.
struct NoFeasiblePlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File ingestion failure; row is 1-based, 0 when not row-specific.
struct ParseError : std::runtime_error {
  int row;
  explicit ParseError(const std::string& msg, int row_ = 0)
      : std::runtime_error(msg), row(row_) {}
};

}  // namespace mgopcon
