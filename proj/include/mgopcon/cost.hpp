#pragma once

#include <utility>
#include <vector>

#include "mgopcon/scenario_log.hpp"
#include "mgopcon/types.hpp"

namespace mgopcon::cost {

/// Stage operation cost
///   c_fuel' p_t + c_on' delta + c_sw' |delta - delta_prev| + c_st' p_s.
/// Negative while charging: storing surplus renewable power is rewarded.
double stage_cost(const Eigen::Ref<const Vec>& p_t,
                  const Eigen::Ref<const Vec>& p_s, const IVec& delta,
                  const IVec& delta_prev, const CostWeights& w);

double stage_cost(const Dispatch& d, const IVec& delta, const IVec& delta_prev,
                  const CostWeights& w);

/// Sum of stage costs over a predicted trajectory; delta_0 seeds the
/// switching term of the first step.
double horizon_cost(const std::vector<std::pair<Dispatch, IVec>>& trajectory,
                    const IVec& delta_0, const CostWeights& w);

/// Total cost over a closed-loop simulation log.
double closed_loop_cost(const SimLog& log, const CostWeights& w);

}  // namespace mgopcon::cost
