#include "mgopcon/cost.hpp"

#include "mgopcon/errors.hpp"

namespace mgopcon::cost {

double stage_cost(const Eigen::Ref<const Vec>& p_t,
                  const Eigen::Ref<const Vec>& p_s, const IVec& delta,
                  const IVec& delta_prev, const CostWeights& w) {
  if (p_t.size() != w.c_fuel.size() || delta.size() != w.c_on.size() ||
      delta_prev.size() != w.c_sw.size() || p_s.size() != w.c_st.size())
    throw ValidationError("stage_cost: dimension mismatch");
  double c = w.c_fuel.dot(p_t) + w.c_st.dot(p_s);
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    c += w.c_on[i] * delta[i];
    c += w.c_sw[i] * std::abs(delta[i] - delta_prev[i]);
  }
  return c;
}

double stage_cost(const Dispatch& d, const IVec& delta, const IVec& delta_prev,
                  const CostWeights& w) {
  return stage_cost(d.p_t, d.p_s, delta, delta_prev, w);
}

double horizon_cost(const std::vector<std::pair<Dispatch, IVec>>& trajectory,
                    const IVec& delta_0, const CostWeights& w) {
  if (trajectory.empty())
    throw ValidationError("horizon_cost: empty trajectory");
  double total = 0.0;
  const IVec* prev = &delta_0;
  for (const auto& [d, delta] : trajectory) {
    total += stage_cost(d, delta, *prev, w);
    prev = &delta;
  }
  return total;
}

double closed_loop_cost(const SimLog& log, const CostWeights& w) {
  double total = 0.0;
  IVec prev = log.delta0, cur;
  for (int k = 0; k < log.steps(); ++k) {
    cur = log.delta.row(k).transpose();
    total += stage_cost(log.p_t.row(k).transpose(), log.p_s.row(k).transpose(),
                        cur, prev, w);
    prev = cur;
  }
  return total;
}

}  // namespace mgopcon::cost
