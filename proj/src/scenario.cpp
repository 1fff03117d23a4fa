#include "mgopcon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mgopcon/errors.hpp"
#include "mgopcon/io.hpp"

namespace mgopcon::scenario {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

DisturbanceTrajectory interpolate(const ForecastBounds& bounds, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("interpolate: alpha must lie in [0, 1]");
  DisturbanceTrajectory w;
  w.w_r = bounds.lo.w_r + alpha * (bounds.hi.w_r - bounds.lo.w_r);
  w.w_d = bounds.lo.w_d + alpha * (bounds.hi.w_d - bounds.lo.w_d);
  return w;
}

std::vector<DisturbanceTrajectory> extreme_set(const ForecastBounds& bounds) {
  if (bounds.lo.w_r == bounds.hi.w_r && bounds.lo.w_d == bounds.hi.w_d)
    return {bounds.lo};
  return {bounds.lo, bounds.hi};
}

namespace {

std::vector<double> parse_row(const std::string& line, int row) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
    } catch (const std::exception&) {
      throw ParseError("bounds csv: non-numeric cell '" + cell + "'", row);
    }
  }
  return out;
}

bool looks_numeric(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',') continue;
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }
  return false;
}

}  // namespace

ForecastBounds load_bounds_csv(const std::string& path, int n_r, int n_d) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open bounds file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (rows.empty() && !looks_numeric(line)) continue;  // header
    rows.push_back(parse_row(line, lineno));
    if ((int)rows.back().size() != 1 + 2 * n_r + 2 * n_d)
      throw ParseError("bounds csv: expected " +
                           std::to_string(1 + 2 * n_r + 2 * n_d) +
                           " columns, got " +
                           std::to_string(rows.back().size()),
                       lineno);
  }
  if (rows.empty()) throw ParseError("bounds csv: no data rows in " + path);

  const int n = (int)rows.size();
  ForecastBounds fb;
  fb.lo.w_r.resize(n, n_r);
  fb.hi.w_r.resize(n, n_r);
  fb.lo.w_d.resize(n, n_d);
  fb.hi.w_d.resize(n, n_d);
  for (int k = 0; k < n; ++k) {
    const auto& r = rows[k];
    int c = 1;
    for (int i = 0; i < n_r; ++i) fb.lo.w_r(k, i) = r[c++];
    for (int i = 0; i < n_r; ++i) fb.hi.w_r(k, i) = r[c++];
    for (int i = 0; i < n_d; ++i) fb.lo.w_d(k, i) = r[c++];
    for (int i = 0; i < n_d; ++i) fb.hi.w_d(k, i) = r[c++];
    for (int i = 0; i < n_r; ++i) {
      if (fb.lo.w_r(k, i) < 0.0 || fb.hi.w_r(k, i) < 0.0)
        throw ParseError("bounds csv: renewable bound must be >= 0", k + 1);
      if (fb.lo.w_r(k, i) > fb.hi.w_r(k, i))
        throw ParseError("bounds csv: wr_min above wr_max", k + 1);
    }
    for (int i = 0; i < n_d; ++i) {
      if (fb.lo.w_d(k, i) > 0.0 || fb.hi.w_d(k, i) > 0.0)
        throw ParseError("bounds csv: load bound must be <= 0", k + 1);
      if (fb.lo.w_d(k, i) > fb.hi.w_d(k, i))
        throw ParseError("bounds csv: wd_min above wd_max", k + 1);
    }
  }
  return fb;
}

void save_bounds_csv(const std::string& path, const ForecastBounds& b) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write bounds file: " + path);
  const int n_r = (int)b.lo.w_r.cols(), n_d = (int)b.lo.w_d.cols();
  out << "k";
  for (int i = 1; i <= n_r; ++i) out << ",wr_min_" << i;
  for (int i = 1; i <= n_r; ++i) out << ",wr_max_" << i;
  for (int i = 1; i <= n_d; ++i) out << ",wd_min_" << i;
  for (int i = 1; i <= n_d; ++i) out << ",wd_max_" << i;
  out << "\n";
  for (int k = 0; k < b.steps(); ++k) {
    out << k;
    for (int i = 0; i < n_r; ++i) out << "," << io::format_double(b.lo.w_r(k, i));
    for (int i = 0; i < n_r; ++i) out << "," << io::format_double(b.hi.w_r(k, i));
    for (int i = 0; i < n_d; ++i) out << "," << io::format_double(b.lo.w_d(k, i));
    for (int i = 0; i < n_d; ++i) out << "," << io::format_double(b.hi.w_d(k, i));
    out << "\n";
  }
}

namespace {

Mat resample_mat(const Mat& m, int n_out, double ratio) {
  Mat out(n_out, m.cols());
  for (int j = 0; j < n_out; ++j) {
    double t = j * ratio;
    int i0 = std::min((int)std::floor(t), (int)m.rows() - 1);
    int i1 = std::min(i0 + 1, (int)m.rows() - 1);
    double f = t - i0;
    out.row(j) = (1.0 - f) * m.row(i0) + f * m.row(i1);
  }
  return out;
}

}  // namespace

ForecastBounds resample(const ForecastBounds& bounds, double dt_in_hours,
                        double ts_out_hours) {
  if (dt_in_hours <= 0 || ts_out_hours <= 0)
    throw ValidationError("resample: time steps must be positive");
  const double ratio = ts_out_hours / dt_in_hours;
  const int n_out =
      (int)std::floor((bounds.steps() - 1) * dt_in_hours / ts_out_hours + 1e-9) +
      1;
  ForecastBounds out;
  out.lo.w_r = resample_mat(bounds.lo.w_r, n_out, ratio);
  out.hi.w_r = resample_mat(bounds.hi.w_r, n_out, ratio);
  out.lo.w_d = resample_mat(bounds.lo.w_d, n_out, ratio);
  out.hi.w_d = resample_mat(bounds.hi.w_d, n_out, ratio);
  return out;
}

namespace {

double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}
double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

}  // namespace

ForecastBounds synth_profiles(std::uint64_t seed, int days,
                              const FleetParams& params) {
  if (days < 1) throw ValidationError("synth_profiles: days must be >= 1");
  std::mt19937_64 g(seed);
  const int per_day = std::max(1, (int)std::lround(24.0 / params.ts_hours));
  const int n = days * per_day;
  const int n_r = (int)params.renewable.size();
  const int n_d = params.n_loads;
  const int n_pv = n_r / 2;          // PV-shaped units: second half
  const int n_wind = n_r - n_pv;

  ForecastBounds fb;
  fb.lo.w_r.setZero(n, n_r);
  fb.hi.w_r.setZero(n, n_r);
  fb.lo.w_d.setZero(n, n_d);
  fb.hi.w_d.setZero(n, n_d);

  const double floor_ = params.thermal.p_min.sum();
  const double ceil_ = params.thermal.p_max.sum();
  const double span = ceil_ - floor_;
  const double spread = 0.075 * std::max(span, 0.1);
  const double c_lo = floor_ + spread + 0.03 * span;
  const double c_hi = ceil_ - spread - 0.03 * span;

  std::vector<double> wind_state(n_wind);
  for (int i = 0; i < n_wind; ++i) wind_state[i] = uniform(g, 0.25, 0.7);

  for (int d = 0; d < days; ++d) {
    const double day_load = uniform(g, -0.06, 0.06) * span;
    const double day_cloud = uniform(g, 0.45, 1.0);
    for (int j = 0; j < per_day; ++j) {
      const int k = d * per_day + j;
      const double h = j * params.ts_hours;  // hour of day

      // total load: twin-peaked diurnal shape plus slow day-level offset
      double c = floor_ + span * (0.45 + 0.18 * std::sin(2 * kPi * (h - 9.0) / 24.0)
                                  + 0.10 * std::sin(4 * kPi * (h - 6.5) / 24.0));
      c += day_load + uniform(g, -0.02, 0.02) * span;
      c = std::clamp(c, c_lo, c_hi);
      for (int i = 0; i < n_d; ++i) {
        fb.lo.w_d(k, i) = -(c + spread) / n_d;  // heavier-load profile
        fb.hi.w_d(k, i) = -(c - spread) / n_d;
      }

      for (int i = 0; i < n_wind; ++i) {
        double rated = params.renewable.p_rated[i];
        if (!(rated > 0.0) || std::isnan(rated)) rated = 1.0;
        double& m = wind_state[i];
        m += 0.05 * (0.45 - m) + 0.10 * (uniform01(g) - 0.5);
        m = std::clamp(m, 0.03, 0.9);
        const double center = rated * m;
        fb.lo.w_r(k, i) = std::max(0.0, center * 0.65);
        fb.hi.w_r(k, i) = std::min(rated, center * 1.35);
      }
      for (int q = 0; q < n_pv; ++q) {
        const int i = n_wind + q;
        double rated = params.renewable.p_rated[i];
        if (!(rated > 0.0) || std::isnan(rated)) rated = 1.0;
        const bool night = h <= 6.0 || h >= 20.0;
        const double bell = night ? 0.0 : std::sin(kPi * (h - 6.0) / 14.0);
        const double wobble = uniform(g, 0.9, 1.0);
        const double center = rated * bell * day_cloud * wobble;
        fb.lo.w_r(k, i) = std::max(0.0, center * 0.55);
        fb.hi.w_r(k, i) = std::min(rated, center * 1.1);
      }
    }
  }
  return fb;
}

}  // namespace mgopcon::scenario
