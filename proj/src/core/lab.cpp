#include "sopslab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sopslab/coupling.hpp"
#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"
#include "sopslab/feedback.hpp"

namespace sopslab {

namespace {

double spread(const double* x, int n) {
  const auto [lo, hi] = std::minmax_element(x, x + n);
  return *hi - *lo;
}

}  // namespace

SyncSeries sync_measure(const Trajectory<double>& traj, double window,
                        const std::vector<double>& sample_times) {
  const int n = traj.dim();
  require(n >= 2, ErrorKind::Domain, "synchrony measure needs at least two components");
  require(window > 0.0, ErrorKind::Domain, "window must be > 0");
  require(traj.t_start() <= 0.0, ErrorKind::Domain, "trajectory must start at or before t = 0");
  SyncSeries out;
  out.window = window;
  out.times = sample_times;
  out.g.reserve(sample_times.size());
  const double h = traj.step();
  std::vector<double> buf(n);
  for (double t : sample_times) {
    require(t >= 0.0, ErrorKind::Domain, "sample times must be >= 0");
    const double lo = std::max(t - window, 0.0);
    if (t > traj.t_end() + 1e-9 * h || traj.node_time(traj.first_kept()) > lo + 1e-9 * h) {
      std::ostringstream m;
      m << "trajectory does not cover [" << lo << ", " << t << "]";
      fail(ErrorKind::Domain, m.str());
    }
    traj.eval(lo, buf.data());
    double g = spread(buf.data(), n);
    traj.eval(t, buf.data());
    g = std::max(g, spread(buf.data(), n));
    const auto k0 = static_cast<std::size_t>(std::ceil((lo - traj.t_start()) / h - 1e-9));
    for (std::size_t k = k0; k < traj.node_count() && traj.node_time(k) <= t; ++k) {
      g = std::max(g, spread(traj.value_at(k), n));
    }
    out.g.push_back(g);
  }
  return out;
}

double log_slope(const SyncSeries& s, double t0, double t1) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double t = s.times[i];
    if (t < t0 || t > t1 || !(s.g[i] > 0.0)) continue;
    const double y = std::log(s.g[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  require(count >= 2, ErrorKind::Domain, "log slope needs at least two positive samples in the window");
  const double den = count * stt - st * st;
  require(den > 0.0, ErrorKind::Domain, "log slope window has no spread in t");
  return (count * sty - st * sy) / den;
}

double nu_star_level_root(double level, bool upper, const LimitProfile& p) {
  const double D = (1.0 - p.rho1) * (1.0 - p.rho2);
  const double r2 = level * D + p.delta_disc + D;
  if (r2 < 0.0) {
    std::ostringstream m;
    m << "nu* never takes the real value " << level << " on the real axis";
    fail(ErrorKind::Domain, m.str());
  }
  return upper ? p.r0 + std::sqrt(r2) : p.r0 - std::sqrt(r2);
}

FigureResult figure_experiment(const FigureSpec& spec) {
  require(spec.horizon > 0.0 && spec.sample_dt > 0.0, ErrorKind::Config,
          "horizon and sample step must be > 0");
  require(spec.fit_t0 < spec.fit_t1 && spec.fit_t1 <= spec.horizon, ErrorKind::Config,
          "fit window must lie inside [0, horizon]");
  const auto f = tanh_feedback(spec.a, spec.b);
  const auto prof = make_profile(spec.alpha, spec.a, spec.b);
  FigureResult r;
  r.beta = spec.beta > 0.0 ? spec.beta : hopf_beta(spec.alpha, f.fprime0) + 0.01;
  const auto [k1, k2] = solve_ring_kappa(3, 1, spec.target);
  r.kappa1 = k1;
  r.kappa2 = k2;
  r.lambda = spec.target;
  r.nu = nu_star(spec.target, prof);
  const auto G = ring(3, k1, k2);

  const double amp = spec.perturbation / (10.0 * std::sqrt(2.0));
  const auto phi = HistorySegment<double>::ramp({0.0, amp, -amp}, {r.beta, r.beta, r.beta});
  const auto traj = integrate_coupled(spec.alpha, r.beta, f, G.entries, phi, spec.horizon, spec.h);

  std::vector<double> times;
  const auto count = static_cast<std::size_t>(std::floor(spec.horizon / spec.sample_dt + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) times.push_back(static_cast<double>(i) * spec.sample_dt);
  r.sync = sync_measure(traj, prof.omega_star, times);
  r.samples.resize(static_cast<Eigen::Index>(times.size()), 3);
  std::vector<double> buf(3);
  for (std::size_t i = 0; i < times.size(); ++i) {
    traj.eval(times[i], buf.data());
    for (int c = 0; c < 3; ++c) r.samples(static_cast<Eigen::Index>(i), c) = buf[c];
  }
  const bool any_positive = std::any_of(r.sync.g.begin(), r.sync.g.end(), [](double g) { return g > 0.0; });
  r.slope = any_positive ? log_slope(r.sync, spec.fit_t0, spec.fit_t1)
                         : -std::numeric_limits<double>::infinity();
  return r;
}

void write_figure_csv(const FigureResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  std::vector<std::string> head{"t"};
  for (Eigen::Index c = 0; c < r.samples.cols(); ++c) head.push_back("x" + std::to_string(c + 1));
  head.push_back("g");
  head.push_back("log_g");
  csv::write_header(out, head);
  std::vector<double> row;
  for (std::size_t i = 0; i < r.sync.times.size(); ++i) {
    row.assign(1, r.sync.times[i]);
    for (Eigen::Index c = 0; c < r.samples.cols(); ++c) row.push_back(r.samples(static_cast<Eigen::Index>(i), c));
    row.push_back(r.sync.g[i]);
    row.push_back(r.sync.g[i] > 0.0 ? std::log(r.sync.g[i]) : -std::numeric_limits<double>::infinity());
    csv::write_row(out, row);
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

void write_trajectory_csv(const Trajectory<double>& traj, const std::vector<double>& times,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  std::vector<std::string> head{"t"};
  for (int c = 0; c < traj.dim(); ++c) head.push_back("x" + std::to_string(c + 1));
  csv::write_header(out, head);
  std::vector<double> buf(traj.dim()), row;
  for (double t : times) {
    traj.eval(t, buf.data());
    row.assign(1, t);
    row.insert(row.end(), buf.begin(), buf.end());
    csv::write_row(out, row);
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

void write_sync_csv(const SyncSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  csv::write_header(out, {"t", "g", "log_g"});
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double lg = s.g[i] > 0.0 ? std::log(s.g[i]) : -std::numeric_limits<double>::infinity();
    csv::write_row(out, {s.times[i], s.g[i], lg});
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace sopslab
