#include "sopslab/sops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"

namespace sopslab {

PeriodicOrbit Sops::orbit() const { return PeriodicOrbit(-1.0, omega, h, p, pdot); }

std::vector<double> Sops::times() const {
  std::vector<double> t(p.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = -1.0 + static_cast<double>(k) * h;
  return t;
}

namespace {

// Zero of the Hermite interpolant on [t_k, t_k + h], seeded by linear inverse interpolation.
double refine_crossing(const Trajectory<double>& x, std::size_t k) {
  const double h = x.step();
  const double y0 = *x.value_at(k), y1 = *x.value_at(k + 1);
  const double t0 = x.node_time(k);
  double t = t0 + h * (-y0) / (y1 - y0);
  for (int it = 0; it < 20; ++it) {
    double v, dv;
    x.eval(t, &v, &dv);
    if (dv == 0.0) break;
    const double next = std::clamp(t - v / dv, t0, t0 + h);
    if (std::abs(next - t) < 1e-15) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

struct Crossings {
  std::vector<double> up;
  std::vector<double> down;
};

Crossings scan(const Trajectory<double>& x, std::size_t from) {
  Crossings c;
  for (std::size_t k = std::max(from, x.first_kept()); k + 1 < x.node_count(); ++k) {
    const double y0 = *x.value_at(k), y1 = *x.value_at(k + 1);
    if (y0 < 0.0 && y1 >= 0.0) c.up.push_back(refine_crossing(x, k));
    if (y0 > 0.0 && y1 <= 0.0) c.down.push_back(refine_crossing(x, k));
  }
  return c;
}

// Sup of |x(t + omega) - x(t)| over grid nodes t in [from, to].
double periodicity_defect(const Trajectory<double>& x, double from, double to, double omega) {
  double worst = 0.0;
  const double h = x.step();
  auto k = static_cast<std::size_t>(std::ceil((from - x.t_start()) / h));
  for (;; ++k) {
    const double t = x.node_time(k);
    if (t > to || t + omega > x.t_end()) break;
    worst = std::max(worst, std::abs(x.eval(t + omega) - *x.value_at(k)));
  }
  return worst;
}

}  // namespace

Sops find_sops(double alpha, double beta, const FeedbackFunction& f, const SopsOptions& opts) {
  const double hopf = hopf_beta(alpha, f.fprime0);
  if (!(beta > hopf)) {
    std::ostringstream m;
    m << "beta = " << beta << " does not exceed beta_Hopf = " << hopf;
    fail(ErrorKind::Precondition, m.str());
  }
  require(opts.tol > 0.0, ErrorKind::Config, "tol must be > 0");
  require(opts.transient >= 0.0 && opts.max_time > opts.transient, ErrorKind::Config,
          "need 0 <= transient < max_time");

  Trajectory<double> x(0.0, steps_per_unit(opts.h), HistorySegment<double>::constant({1.0}));
  extend_scalar(x, alpha, beta, f, std::max(opts.transient, opts.h));
  const auto scan_from = x.node_count() - 1;

  double best = std::numeric_limits<double>::infinity();
  double chunk = 10.0;
  while (true) {
    extend_scalar(x, alpha, beta, f, std::min(x.t_end() + chunk, opts.max_time));
    const Crossings c = scan(x, scan_from);
    const std::size_t L = c.up.size();
    if (L >= 4) {
      const double omega = (c.up[L - 1] - c.up[L - 4]) / 3.0;
      chunk = std::max(2.0 * omega, 4.0);
      const double start = c.up[L - 3];
      const double defect = periodicity_defect(x, start, c.up[L - 2], omega) / beta;
      best = std::min(best, defect);
      if (defect < opts.tol) {
        Sops s;
        s.alpha = alpha;
        s.beta = beta;
        s.feedback = f;
        s.omega = omega;
        s.h = x.step();
        s.residual = defect;
        const auto K = static_cast<std::size_t>(std::floor(omega / s.h - 1e-9));
        s.p.resize(K + 1);
        s.pdot.resize(K + 1);
        for (std::size_t k = 0; k <= K; ++k) {
          const double t = start + static_cast<double>(k) * s.h;
          s.p[k] = k == 0 ? 0.0 : x.eval(t);
          s.pdot[k] = -alpha * s.p[k] + beta * f.eval(x.eval(t - 1.0));
        }
        auto down = std::upper_bound(c.down.begin(), c.down.end(), start);
        require(down != c.down.end(), ErrorKind::Numerical, "orbit has no downward zero");
        s.z1 = *down - start - 1.0;
        s.z2 = omega - 1.0;
        if (!(s.z1 > 0.0 && s.z2 > s.z1 + 1.0)) {
          std::ostringstream m;
          m << "orbit is not slowly oscillating: z1 = " << s.z1 << ", z2 = " << s.z2;
          fail(ErrorKind::Numerical, m.str());
        }
        require(s.pdot[0] > 0.0, ErrorKind::Numerical, "phase-fixed orbit has p'(-1) <= 0");
        return s;
      }
    }
    if (x.t_end() >= opts.max_time - 1e-9) {
      std::ostringstream m;
      m << "periodicity defect did not fall below " << opts.tol << " by t = " << opts.max_time
        << " (best " << best << ")";
      throw NonConvergenceError(m.str(), best);
    }
  }
}

std::vector<double> normalize_sops(const Sops& s) {
  std::vector<double> out(s.p.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = s.p[k] / s.beta;
  return out;
}

ResidualReport limit_residuals(const Sops& s, const LimitProfile& p, double eps) {
  require(eps > 0.0 && eps < p.q1 / 2.0, ErrorKind::Domain, "eps must lie in (0, q1*/2)");
  ResidualReport r;
  r.z1 = std::abs(s.z1 - p.q1);
  r.z2 = std::abs(s.z2 - (p.q1 + p.q2 + 1.0));
  r.omega = std::abs(s.omega - p.omega_star);
  const auto t = s.times();
  for (std::size_t k = 0; k < t.size(); ++k) {
    r.profile = std::max(r.profile, std::abs(s.p[k] / s.beta - pbar_star(t[k], p)));
    // Distance to J = {k omega*, q1* + 1 + k omega*}.
    const double u = wrap_phase(t[k], p);  // in [-1, omega* - 1)
    const double j0 = std::min(std::abs(u), std::abs(u - p.omega_star));
    const double j1 = std::min(std::abs(u - (p.q1 + 1.0)), std::abs(u - (p.q1 + 1.0) + p.omega_star));
    if (j0 <= eps || j1 <= eps) continue;
    r.derivative = std::max(r.derivative, std::abs(s.pdot[k] / s.beta - pbar_star_dot(t[k], p)));
  }
  return r;
}

void write_sops_csv(const Sops& s, const std::string& csv_path, const std::string& json_path) {
  std::ofstream out(csv_path);
  if (!out) fail(ErrorKind::Io, "cannot write " + csv_path);
  csv::write_header(out, {"t", "p", "pdot"});
  const auto t = s.times();
  for (std::size_t k = 0; k < t.size(); ++k) csv::write_row(out, {t[k], s.p[k], s.pdot[k]});
  if (!out) fail(ErrorKind::Io, "write failed for " + csv_path);

  nlohmann::json j = {{"omega", s.omega}, {"z1", s.z1},       {"z2", s.z2},
                      {"residual", s.residual}, {"alpha", s.alpha}, {"beta", s.beta}};
  std::ofstream js(json_path);
  if (!js) fail(ErrorKind::Io, "cannot write " + json_path);
  js << j.dump(2) << '\n';
  if (!js) fail(ErrorKind::Io, "write failed for " + json_path);
}

}  // namespace sopslab
