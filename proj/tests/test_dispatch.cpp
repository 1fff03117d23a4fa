#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "mgopcon/dispatch.hpp"
#include "mgopcon/errors.hpp"
#include "mgopcon/model.hpp"
#include "oracles.hpp"

using namespace mgopcon;

namespace {
DisturbanceSample case_w(double wd) {
  DisturbanceSample w;
  w.w_r = (Vec(2) << 1.2, 0.55).finished();
  w.w_d = Vec::Constant(1, wd);
  return w;
}
}  // namespace

TEST_CASE("aggregate_power sums the saturated droop responses") {
  auto P = fixtures::case_fleet();
  auto sp = fixtures::case_setpoints();
  auto st = fixtures::case_state(2.0);
  auto w = case_w(-2.25);
  auto bounds = model::storage_power_bounds(st.x, P);

  CHECK(dispatch::aggregate_power(0.3, sp, w, bounds, P) ==
        doctest::Approx(2.25).epsilon(1e-12));
  // far above every clamp: sum of upper saturation limits
  CHECK(dispatch::aggregate_power(1e6, sp, w, bounds, P) ==
        doctest::Approx(3.75).epsilon(1e-12));

  // single idle storage unit at zero deviation
  FleetParams P1;
  P1.storage.p_min = Vec::Constant(1, -1.0);
  P1.storage.p_max = Vec::Constant(1, 1.0);
  P1.storage.chi = Vec::Constant(1, 1.0);
  P1.storage.x_min = Vec::Constant(1, 0.0);
  P1.storage.x_max = Vec::Constant(1, 6.0);
  P1.storage.c_st = Vec::Constant(1, 0.0);
  P1.n_loads = 1;
  Setpoints sp1;
  sp1.u_t = Vec(0);
  sp1.u_s = Vec::Zero(1);
  sp1.u_r = Vec(0);
  sp1.delta_t = IVec(0);
  DisturbanceSample w1{Vec(0), Vec::Zero(1)};
  auto b1 = model::storage_power_bounds(Vec::Constant(1, 3.0), P1);
  CHECK(dispatch::aggregate_power(0.0, sp1, w1, b1, P1) == 0.0);
}

TEST_CASE("solve_balance finds the case-study operating point") {
  auto P = fixtures::case_fleet();
  auto d = dispatch::solve_balance(fixtures::case_setpoints(), case_w(-2.25),
                                   fixtures::case_state(2.0), P);
  CHECK(d.rho == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(d.p_t[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(d.p_s[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(d.p_r[0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(d.p_r[1] == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(d.residual <= 1e-9);
  CHECK(d.sat_t[0] == Clamp::Lower);
  CHECK(d.sat_s[0] == Clamp::Interior);
  CHECK(d.sat_r[0] == Clamp::Upper);
  CHECK(d.sat_r[1] == Clamp::Upper);
}

TEST_CASE("solve_balance zero demand with one storage unit") {
  FleetParams P;
  P.storage.p_min = Vec::Constant(1, -1.0);
  P.storage.p_max = Vec::Constant(1, 1.0);
  P.storage.chi = Vec::Constant(1, 1.0);
  P.storage.x_min = Vec::Constant(1, 0.0);
  P.storage.x_max = Vec::Constant(1, 6.0);
  P.storage.c_st = Vec::Constant(1, 0.0);
  P.n_loads = 1;
  Setpoints sp;
  sp.u_t = Vec(0);
  sp.u_s = Vec::Zero(1);
  sp.u_r = Vec(0);
  sp.delta_t = IVec(0);
  GridState st{Vec::Constant(1, 3.0), IVec(0)};
  auto d = dispatch::solve_balance(sp, {Vec(0), Vec::Zero(1)}, st, P);
  CHECK(d.rho == 0.0);
  CHECK(d.p_s[0] == 0.0);
}

TEST_CASE("solve_balance rejects demand beyond the saturation range") {
  auto P = fixtures::case_fleet();
  try {
    dispatch::solve_balance(fixtures::case_setpoints(), case_w(-4.5),
                            fixtures::case_state(2.0), P);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.demand == doctest::Approx(4.5));
    CHECK(e.range_hi == doctest::Approx(3.75).epsilon(1e-12));
  }
}

TEST_CASE("feasible_range spans the clamp sums") {
  auto P = fixtures::case_fleet();
  auto sp = fixtures::case_setpoints();
  auto [lo, hi] = dispatch::feasible_range(sp, case_w(0.0),
                                           fixtures::case_state(2.0), P);
  CHECK(lo == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(hi == doctest::Approx(3.75).epsilon(1e-12));

  // everything off or empty: nothing can generate. A discharge-only store
  // (p_min = 0) at x_min pins both ends of the range at zero.
  auto P0 = P;
  P0.storage.p_min[0] = 0.0;
  auto sp_off = sp;
  sp_off.delta_t[0] = 0;
  DisturbanceSample w0;
  w0.w_r = Vec::Zero(2);
  w0.w_d = Vec::Zero(1);
  auto st_empty = fixtures::case_state(0.0);
  auto [lo0, hi0] = dispatch::feasible_range(sp_off, w0, st_empty, P0);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);
  // the case-study battery can still absorb charge when empty
  auto [loc, hic] = dispatch::feasible_range(sp_off, w0, st_empty, P);
  CHECK(loc == doctest::Approx(-1.0));
  CHECK(hic == 0.0);

  // thermal-only fleet
  FleetParams Pt;
  Pt.thermal.p_min = Vec::Constant(1, 0.2);
  Pt.thermal.p_max = Vec::Constant(1, 1.0);
  Pt.thermal.chi = Vec::Constant(1, 1.0);
  Pt.thermal.c_fuel = Vec::Constant(1, 1.0);
  Pt.thermal.c_on = Vec::Constant(1, 0.2);
  Pt.thermal.c_sw = Vec::Constant(1, 0.3);
  Pt.n_loads = 1;
  Setpoints spt;
  spt.u_t = Vec::Zero(1);
  spt.u_s = Vec(0);
  spt.u_r = Vec(0);
  spt.delta_t = IVec::Constant(1, 1);
  auto [lot, hit] = dispatch::feasible_range(spt, {Vec(0), Vec::Zero(1)},
                                             {Vec(0), IVec::Constant(1, 1)}, Pt);
  CHECK(lot == doctest::Approx(0.2));
  CHECK(hit == doctest::Approx(1.0));
}

TEST_CASE("step advances storage energy and commitment") {
  auto P = fixtures::case_fleet();
  auto [d, st1] = dispatch::step(fixtures::case_state(2.0),
                                 fixtures::case_setpoints(), case_w(-2.25), P);
  CHECK(d.p_s[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(st1.x[0] == doctest::Approx(1.925).epsilon(1e-15));
  CHECK(st1.delta_prev[0] == 1);

  // no storage activity leaves the energy untouched
  auto sp = fixtures::case_setpoints();
  DisturbanceSample w;
  w.w_r = (Vec(2) << 1.2, 0.55).finished();
  // rho = -1: storage setpoint pull is 0 + 1*(-1) = -1 -> clamps? pick the
  // balance where storage sits at 0: renewables cover the load exactly with
  // thermal at its floor.
  w.w_d = Vec::Constant(1, -1.95);  // 0.2 + 0 + 1.2 + 0.55
  auto [d2, st2] = dispatch::step(fixtures::case_state(2.0), sp, w, P);
  CHECK(d2.p_s[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(st2.x[0] == doctest::Approx(2.0).epsilon(1e-12));

  // heavy discharge demand against an almost empty store drains it exactly
  auto [d3, st3] = dispatch::step(fixtures::case_state(0.1),
                                  fixtures::case_setpoints(), case_w(-2.35), P);
  CHECK(d3.p_s[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(st3.x[0] == 0.0);
}

TEST_CASE("aggregate curve is monotone nondecreasing in rho") {
  std::mt19937_64 g(21);
  for (int inst = 0; inst < 300; ++inst) {
    oracle::InstanceOptions o;
    o.n_t = oracle::uniform_int(g, 0, 2);
    o.n_s = oracle::uniform_int(g, 0, 2);
    o.n_r = oracle::uniform_int(g, 0, 2);
    if (o.n_t + o.n_s + o.n_r == 0) o.n_s = 1;
    auto P = oracle::random_fleet(g, o);
    auto st = oracle::random_state(g, P);
    auto w = oracle::random_disturbance(g, P, false);
    Setpoints sp;
    sp.u_t = Vec::NullaryExpr(o.n_t, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.u_s = Vec::NullaryExpr(o.n_s, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.u_r = Vec::NullaryExpr(o.n_r, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.delta_t = IVec::NullaryExpr(o.n_t, [&](Eigen::Index) {
      return oracle::uniform_int(g, 0, 1);
    });
    auto bounds = model::storage_power_bounds(st.x, P);
    double prev = -1e300;
    for (double rho = -6; rho <= 6; rho += 0.05) {
      double v = dispatch::aggregate_power(rho, sp, w, bounds, P);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("solve_balance agrees with the bisection oracle") {
  std::mt19937_64 g(33);
  int solved = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    oracle::InstanceOptions o;
    o.n_t = oracle::uniform_int(g, 0, 3);
    o.n_s = oracle::uniform_int(g, 0, 3);
    o.n_r = oracle::uniform_int(g, 0, 3);
    if (o.n_t + o.n_s + o.n_r == 0) o.n_t = 1;
    auto P = oracle::random_fleet(g, o);
    auto st = oracle::random_state(g, P);
    auto w = oracle::random_disturbance(g, P, false);
    Setpoints sp;
    sp.u_t = Vec::NullaryExpr(o.n_t, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.u_s = Vec::NullaryExpr(o.n_s, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.u_r = Vec::NullaryExpr(o.n_r, [&](Eigen::Index) { return oracle::uniform(g, -3, 3); });
    sp.delta_t = IVec::NullaryExpr(o.n_t, [&](Eigen::Index) {
      return oracle::uniform_int(g, 0, 1);
    });

    auto ref = oracle::bisect_balance(sp, w, st, P);
    try {
      auto d = dispatch::solve_balance(sp, w, st, P);
      REQUIRE(ref.has_value());
      for (int i = 0; i < o.n_t; ++i)
        CHECK(std::abs(d.p_t[i] - ref->p_t[i]) <= 1e-9);
      for (int i = 0; i < o.n_s; ++i)
        CHECK(std::abs(d.p_s[i] - ref->p_s[i]) <= 1e-9);
      for (int i = 0; i < o.n_r; ++i)
        CHECK(std::abs(d.p_r[i] - ref->p_r[i]) <= 1e-9);
      CHECK(d.residual <= 1e-9);
      ++solved;
    } catch (const InfeasibleError&) {
      CHECK(!ref.has_value());
    }
  }
  CHECK(solved > 200);  // the family must exercise the solvable side too
}

TEST_CASE("storage stays inside the energy window over long runs") {
  std::mt19937_64 g(55);
  oracle::InstanceOptions o;
  o.n_t = 1;
  o.n_s = 2;
  o.n_r = 1;
  auto P = oracle::random_fleet(g, o);
  auto st = oracle::random_state(g, P);
  for (int k = 0; k < 20000; ++k) {
    Setpoints sp;
    sp.u_t = Vec::Constant(1, oracle::uniform(g, -2, 2));
    sp.u_s = Vec::NullaryExpr(2, [&](Eigen::Index) { return oracle::uniform(g, -2, 2); });
    sp.u_r = Vec::Constant(1, oracle::uniform(g, -2, 2));
    sp.delta_t = IVec::Constant(1, 1);
    auto w = oracle::random_disturbance(g, P, true);
    try {
      auto [d, next] = dispatch::step(st, sp, w, P);
      st = next;
      for (int i = 0; i < 2; ++i) {
        CHECK(st.x[i] >= P.storage.x_min[i]);
        CHECK(st.x[i] <= P.storage.x_max[i]);
      }
    } catch (const InfeasibleError&) {
      // requirements hold, so this only happens if storage is pinned; the
      // operability property below asserts it never does for this family
      FAIL("dispatch infeasible under operability requirements");
    }
  }
}

TEST_CASE("requirements 2-3 with all units on imply solvability") {
  std::mt19937_64 g(77);
  for (int inst = 0; inst < 500; ++inst) {
    oracle::InstanceOptions o;
    o.n_t = oracle::uniform_int(g, 1, 3);
    o.n_s = oracle::uniform_int(g, 0, 2);
    o.n_r = oracle::uniform_int(g, 0, 2);
    auto P = oracle::random_fleet(g, o);
    auto st = oracle::random_state(g, P);
    auto w = oracle::random_disturbance(g, P, true);
    Setpoints sp;  // arbitrary setpoints: saturation still covers the load
    sp.u_t = Vec::NullaryExpr(o.n_t, [&](Eigen::Index) { return oracle::uniform(g, -5, 5); });
    sp.u_s = Vec::NullaryExpr(o.n_s, [&](Eigen::Index) { return oracle::uniform(g, -5, 5); });
    sp.u_r = Vec::NullaryExpr(o.n_r, [&](Eigen::Index) { return oracle::uniform(g, -5, 5); });
    sp.delta_t = IVec::Constant(o.n_t, 1);
    auto [lo, hi] = dispatch::feasible_range(sp, w, st, P);
    double demand = -w.w_d.sum();
    CHECK(lo <= demand);
    CHECK(demand <= hi);
    CHECK_NOTHROW(dispatch::solve_balance(sp, w, st, P));
  }
}
