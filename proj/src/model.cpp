#include "mgopcon/model.hpp"

#include <cmath>
#include <sstream>

#include "mgopcon/errors.hpp"

namespace mgopcon::model {

StoragePowerBounds storage_power_bounds(const Eigen::Ref<const Vec>& x_prev,
                                        const FleetParams& params) {
  const auto& s = params.storage;
  if (x_prev.size() != s.size())
    throw ValidationError("storage_power_bounds: state dimension mismatch");
  if ((x_prev.array() < s.x_min.array()).any() ||
      (x_prev.array() > s.x_max.array()).any())
    throw StateViolationError("stored energy outside [x_min, x_max]");
  StoragePowerBounds b;
  b.lo = s.p_min.cwiseMax((x_prev - s.x_max) / params.ts_hours);
  b.hi = s.p_max.cwiseMin((x_prev - s.x_min) / params.ts_hours);
  return b;
}

namespace {
void check(std::vector<ValidationIssue>& out, bool ok, const char* unit,
           int index, const std::string& message) {
  if (!ok) out.push_back({unit, index, message});
}
}  // namespace

std::vector<ValidationIssue> validate_params(const FleetParams& p) {
  std::vector<ValidationIssue> out;
  const auto& t = p.thermal;
  for (int i = 0; i < t.size(); ++i) {
    check(out, t.p_min[i] <= t.p_max[i], "thermal", i, "p_min <= p_max");
    check(out, t.p_min[i] >= 0.0, "thermal", i, "p_min >= 0");
    check(out, t.chi[i] >= 0.0, "thermal", i, "chi >= 0");
    check(out, t.c_fuel[i] >= 0.0, "thermal", i, "c_fuel >= 0");
    check(out, t.c_on[i] >= 0.0, "thermal", i, "c_on >= 0");
    check(out, t.c_sw[i] >= 0.0, "thermal", i, "c_sw >= 0");
  }
  const auto& s = p.storage;
  for (int i = 0; i < s.size(); ++i) {
    check(out, s.p_min[i] <= s.p_max[i], "storage", i, "p_min <= p_max");
    check(out, s.chi[i] >= 0.0, "storage", i, "chi >= 0");
    check(out, s.x_min[i] >= 0.0, "storage", i, "x_min >= 0");
    check(out, s.x_min[i] < s.x_max[i], "storage", i, "x_min < x_max");
    check(out, s.c_st[i] >= 0.0, "storage", i, "c_st >= 0");
  }
  const auto& r = p.renewable;
  for (int i = 0; i < r.size(); ++i) {
    check(out, r.p_min[i] >= 0.0, "renewable", i, "p_min >= 0");
    check(out, r.chi[i] >= 0.0, "renewable", i, "chi >= 0");
    if (!std::isnan(r.p_rated[i]))
      check(out, r.p_rated[i] >= 0.0, "renewable", i, "p_rated >= 0");
  }
  check(out, p.n_loads >= 0, "fleet", -1, "n_loads >= 0");
  check(out, p.ts_hours > 0.0, "fleet", -1, "ts_hours > 0");
  check(out, p.u_min <= p.u_max, "fleet", -1, "u_min <= u_max");
  return out;
}

void require_valid(const FleetParams& params) {
  auto issues = validate_params(params);
  if (issues.empty()) return;
  std::ostringstream os;
  os << "invalid fleet parameters:";
  for (auto& i : issues)
    os << " [" << i.unit << (i.index >= 0 ? " " + std::to_string(i.index) : "")
       << ": " << i.message << "]";
  throw ValidationError(os.str());
}

CostWeights weights_from(const FleetParams& params) {
  return {params.thermal.c_fuel, params.thermal.c_on, params.thermal.c_sw,
          params.storage.c_st};
}

}  // namespace mgopcon::model
