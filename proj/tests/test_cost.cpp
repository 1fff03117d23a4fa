#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mgopcon/cost.hpp"
#include "mgopcon/errors.hpp"
#include "mgopcon/model.hpp"
#include "oracles.hpp"

using namespace mgopcon;

namespace {
CostWeights case_weights() { return model::weights_from(fixtures::case_fleet()); }

Dispatch make_dispatch(double pt, double ps) {
  Dispatch d;
  d.p_t = Vec::Constant(1, pt);
  d.p_s = Vec::Constant(1, ps);
  d.p_r = Vec::Zero(2);
  return d;
}
}  // namespace

TEST_CASE("stage cost: fuel, fixed-on, switching and storage terms") {
  auto w = case_weights();
  IVec on = IVec::Constant(1, 1), off = IVec::Constant(1, 0);
  CHECK(cost::stage_cost(make_dispatch(0.2, 0.3), on, off, w) ==
        doctest::Approx(0.97).epsilon(1e-12));
  CHECK(cost::stage_cost(make_dispatch(0.0, 0.0), off, off, w) == 0.0);
  // charging is rewarded
  CHECK(cost::stage_cost(make_dispatch(0.0, -0.5), off, off, w) ==
        doctest::Approx(-0.45).epsilon(1e-12));
}

TEST_CASE("stage cost rejects dimension mismatches") {
  auto w = case_weights();
  IVec on = IVec::Constant(2, 1);
  CHECK_THROWS_AS(cost::stage_cost(make_dispatch(0.1, 0.0), on, on, w),
                  ValidationError);
}

TEST_CASE("horizon cost sums stage costs with the chained switching term") {
  auto w = case_weights();
  IVec on = IVec::Constant(1, 1), off = IVec::Constant(1, 0);
  auto d = make_dispatch(0.2, 0.3);

  // single term reduces to the stage cost
  std::vector<std::pair<Dispatch, IVec>> traj{{d, on}};
  CHECK(cost::horizon_cost(traj, off, w) ==
        doctest::Approx(cost::stage_cost(d, on, off, w)).epsilon(1e-12));

  // two identical steps: switching counted once, at the first step
  traj.push_back({d, on});
  double per_step_no_sw = cost::stage_cost(d, on, on, w);
  CHECK(cost::horizon_cost(traj, off, w) ==
        doctest::Approx(2 * per_step_no_sw + 0.3).epsilon(1e-12));

  // toggling 0 -> 1 -> 0 pays the switching weight twice
  std::vector<std::pair<Dispatch, IVec>> tog{{make_dispatch(0.2, 0.0), on},
                                             {make_dispatch(0.0, 0.0), off}};
  double base = 0.2 * 1.0 + 0.2;  // fuel + fixed-on at the on step
  CHECK(cost::horizon_cost(tog, off, w) ==
        doctest::Approx(base + 2 * 0.3).epsilon(1e-12));

  CHECK_THROWS_AS(cost::horizon_cost({}, off, w), ValidationError);
}

TEST_CASE("closed-loop cost equals the horizon cost on the same window") {
  auto P = fixtures::case_fleet();
  auto w = case_weights();
  SimLog log;
  log.resize(3, P);
  log.x0 = Vec::Constant(1, 2.0);
  log.delta0 = IVec::Constant(1, 0);
  std::vector<std::pair<Dispatch, IVec>> traj;
  IVec deltas[3] = {IVec::Constant(1, 1), IVec::Constant(1, 1),
                    IVec::Constant(1, 0)};
  for (int k = 0; k < 3; ++k) {
    Dispatch d = make_dispatch(0.1 * (k + 1), 0.05 * k);
    log.p_t.row(k) = d.p_t.transpose();
    log.p_s.row(k) = d.p_s.transpose();
    log.p_r.row(k) = d.p_r.transpose();
    log.delta.row(k) = deltas[k].transpose();
    traj.push_back({d, deltas[k]});
  }
  for (int k = 0; k < 3; ++k)
    log.stage_costs[k] = cost::stage_cost(
        traj[k].first, deltas[k], k == 0 ? log.delta0 : deltas[k - 1], w);
  CHECK(cost::closed_loop_cost(log, w) ==
        doctest::Approx(cost::horizon_cost(traj, log.delta0, w))
            .epsilon(1e-12));

  SimLog empty;
  empty.resize(0, P);
  empty.x0 = Vec::Constant(1, 2.0);
  empty.delta0 = IVec::Constant(1, 0);
  CHECK(cost::closed_loop_cost(empty, w) == 0.0);
}

TEST_CASE("cost is linear in the powers for fixed commitment") {
  std::mt19937_64 g(5);
  auto w = case_weights();
  IVec on = IVec::Constant(1, 1);
  for (int it = 0; it < 200; ++it) {
    double pt = oracle::uniform(g, 0, 1), ps = oracle::uniform(g, -1, 1);
    double a = oracle::uniform(g, 0, 3);
    double f1 = cost::stage_cost(make_dispatch(pt, ps), on, on, w) -
                cost::stage_cost(make_dispatch(0, 0), on, on, w);
    double fa = cost::stage_cost(make_dispatch(a * pt, a * ps), on, on, w) -
                cost::stage_cost(make_dispatch(0, 0), on, on, w);
    CHECK(fa == doctest::Approx(a * f1).epsilon(1e-12));
  }
}

TEST_CASE("switching cost only couples adjacent commitment pairs") {
  auto w = case_weights();
  IVec on = IVec::Constant(1, 1);
  auto d1 = make_dispatch(0.3, 0.0), d2 = make_dispatch(0.7, -0.2),
       d3 = make_dispatch(0.5, 0.1);
  // identical commitments throughout: permuting interior steps is neutral
  std::vector<std::pair<Dispatch, IVec>> a{{d1, on}, {d2, on}, {d3, on}};
  std::vector<std::pair<Dispatch, IVec>> b{{d1, on}, {d3, on}, {d2, on}};
  CHECK(cost::horizon_cost(a, on, w) ==
        doctest::Approx(cost::horizon_cost(b, on, w)).epsilon(1e-12));
}
