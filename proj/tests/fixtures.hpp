// Shared case-study fixture: one diesel generator, one battery, a wind
// turbine and a PV plant on a single load bus.
#pragma once

#include "mgopcon/types.hpp"

namespace fixtures {

using mgopcon::FleetParams;
using mgopcon::GridState;
using mgopcon::IVec;
using mgopcon::Setpoints;
using mgopcon::Vec;

inline FleetParams case_fleet() {
  FleetParams P;
  P.thermal.p_min = Vec::Constant(1, 0.2);
  P.thermal.p_max = Vec::Constant(1, 1.0);
  P.thermal.chi = Vec::Constant(1, 1.0);
  P.thermal.c_fuel = Vec::Constant(1, 1.0);
  P.thermal.c_on = Vec::Constant(1, 0.2);
  P.thermal.c_sw = Vec::Constant(1, 0.3);
  P.storage.p_min = Vec::Constant(1, -1.0);
  P.storage.p_max = Vec::Constant(1, 1.0);
  P.storage.chi = Vec::Constant(1, 1.0);
  P.storage.x_min = Vec::Constant(1, 0.0);
  P.storage.x_max = Vec::Constant(1, 6.0);
  P.storage.c_st = Vec::Constant(1, 0.9);
  P.renewable.p_min = Vec::Zero(2);
  P.renewable.p_rated = (Vec(2) << 1.2, 0.55).finished();
  P.renewable.chi = Vec::Constant(2, 1.0);
  P.n_loads = 1;
  P.ts_hours = 0.25;
  P.u_min = -5.0;
  P.u_max = 5.0;
  return P;
}

/// Constant rule-based setpoints of the case fleet: u_t=-0.8, u_s=0,
/// u_r=(2.2, 1.55), all units committed.
inline Setpoints case_setpoints() {
  Setpoints sp;
  sp.u_t = Vec::Constant(1, -0.8);
  sp.u_s = Vec::Zero(1);
  sp.u_r = (Vec(2) << 2.2, 1.55).finished();
  sp.delta_t = IVec::Constant(1, 1);
  return sp;
}

inline GridState case_state(double x = 2.0, int delta_prev = 1) {
  GridState st;
  st.x = Vec::Constant(1, x);
  st.delta_prev = IVec::Constant(1, delta_prev);
  return st;
}

}  // namespace fixtures
