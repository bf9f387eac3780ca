#include "sopslab/ddesolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sopslab {

PeriodicOrbit::PeriodicOrbit(double t0, double period, double h, std::vector<double> p,
                             std::vector<double> pdot)
    : t0_(t0), period_(period), h_(h), p_(std::move(p)), pd_(std::move(pdot)) {
  require(period > 0.0 && h > 0.0, ErrorKind::Domain, "periodic orbit needs positive period and step");
  require(!p_.empty() && p_.size() == pd_.size(), ErrorKind::Domain,
          "periodic orbit needs matching value/derivative samples");
  require(static_cast<double>(p_.size() - 1) * h < period + 1e-12, ErrorKind::Domain,
          "periodic orbit samples overrun the period");
}

void PeriodicOrbit::locate(double t, std::size_t& k, double& s, double& H) const {
  double u = std::fmod(t - t0_, period_);
  if (u < 0.0) u += period_;
  const std::size_t K = p_.size() - 1;
  k = static_cast<std::size_t>(std::floor(u / h_));
  if (k >= K) {
    k = K;
    H = period_ - static_cast<double>(K) * h_;
  } else {
    H = h_;
  }
  s = H > 0.0 ? (u - static_cast<double>(k) * h_) / H : 0.0;
  s = std::clamp(s, 0.0, 1.0);
}

double PeriodicOrbit::eval(double t) const {
  std::size_t k;
  double s, H, out;
  locate(t, k, s, H);
  const std::size_t k1 = (k + 1 == p_.size()) ? 0 : k + 1;
  detail::hermite(s, H, &p_[k], &pd_[k], &p_[k1], &pd_[k1], 1, &out, static_cast<double*>(nullptr));
  return out;
}

double PeriodicOrbit::eval_deriv(double t) const {
  std::size_t k;
  double s, H, out, dout;
  locate(t, k, s, H);
  const std::size_t k1 = (k + 1 == p_.size()) ? 0 : k + 1;
  detail::hermite(s, H, &p_[k], &pd_[k], &p_[k1], &pd_[k1], 1, &out, &dout);
  return dout;
}

int steps_per_unit(double h) {
  require(std::isfinite(h) && h > 0.0 && h <= 1.0, ErrorKind::Config, "step must lie in (0, 1]");
  const double n = std::round(1.0 / h);
  if (std::abs(n * h - 1.0) > 1e-9) {
    std::ostringstream s;
    s << "step h = " << h << " is not 1/N for an integer N";
    fail(ErrorKind::Config, s.str());
  }
  return static_cast<int>(n);
}

double default_step(double beta) {
  return std::min(1e-3, 1.0 / (4.0 * std::ceil(std::max(std::abs(beta), 1.0))));
}

int spike_substeps(double v, double dv, double beta, double h, const FeedbackFunction& f) {
  const double scale = std::max(f.a, f.b);
  if (!(std::abs(v) < 5.0 * scale)) return 1;
  const double mass = std::abs(beta) * h * f.max_abs_deriv / 0.1;
  const double sweep = std::abs(dv) * h / (0.1 * std::min(f.a, f.b));
  const double k = std::ceil(std::max({mass, sweep, 1.0}));
  return static_cast<int>(std::min(k, 64.0));
}

namespace {

// Classical RK4 per grid step, optionally split into substeps; delayed reads
// come from the trajectory's own dense output.
template <class T, class Rhs, class Substeps>
void march(Trajectory<T>& tr, std::size_t steps, Rhs&& rhs, Substeps&& substeps) {
  const int d = tr.dim();
  const double h = tr.step();
  std::vector<T> y(d), dy(d), k1(d), k2(d), k3(d), k4(d), tmp(d), dl0(d), dlm(d), dl1(d);

  if (tr.node_count() == 0) {
    tr.history().eval(0.0, y.data());
    tr.history().eval(-1.0, dl0.data());
    rhs(tr.t_start(), y.data(), dl0.data(), dy.data());
    tr.push_node(y.data(), dy.data());
  }

  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t n = tr.node_count() - 1;
    const double tn = tr.node_time(n);
    std::copy(tr.value_at(n), tr.value_at(n) + d, y.begin());
    const int ks = std::max(1, substeps(tn));
    const double hs = h / ks;
    for (int sub = 0; sub < ks; ++sub) {
      const double ts = tn + sub * hs;
      if (sub == 0) {
        std::copy(tr.deriv_at(n), tr.deriv_at(n) + d, k1.begin());
      } else {
        tr.eval(ts - 1.0, dl0.data());
        rhs(ts, y.data(), dl0.data(), k1.data());
      }
      tr.eval(ts + hs / 2 - 1.0, dlm.data());
      tr.eval(ts + hs - 1.0, dl1.data());
      for (int c = 0; c < d; ++c) tmp[c] = y[c] + (hs / 2) * k1[c];
      rhs(ts + hs / 2, tmp.data(), dlm.data(), k2.data());
      for (int c = 0; c < d; ++c) tmp[c] = y[c] + (hs / 2) * k2[c];
      rhs(ts + hs / 2, tmp.data(), dlm.data(), k3.data());
      for (int c = 0; c < d; ++c) tmp[c] = y[c] + hs * k3[c];
      rhs(ts + hs, tmp.data(), dl1.data(), k4.data());
      for (int c = 0; c < d; ++c) y[c] += (hs / 6) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    const double t1 = tr.node_time(n + 1);
    tr.eval(t1 - 1.0, dl1.data());
    rhs(t1, y.data(), dl1.data(), dy.data());
    for (int c = 0; c < d; ++c) {
      if (!std::isfinite(std::abs(y[c])) || !std::isfinite(std::abs(dy[c]))) {
        std::ostringstream s;
        s << "non-finite state in component " << c << " at t = " << t1;
        fail(ErrorKind::Numerical, s.str());
      }
    }
    tr.push_node(y.data(), dy.data());
  }
}

template <class T>
std::size_t steps_to(const Trajectory<T>& tr, double t_end) {
  const double have = tr.node_count() == 0 ? tr.t_start() : tr.t_end();
  if (t_end <= have) return 0;
  return static_cast<std::size_t>(std::ceil((t_end - have) / tr.step() - 1e-9));
}

void check_row_sums(const Eigen::MatrixXd& G) {
  require(G.rows() == G.cols() && G.rows() >= 1, ErrorKind::Config, "coupling matrix must be square");
  for (Eigen::Index j = 0; j < G.rows(); ++j) {
    const double s = G.row(j).sum();
    if (!(std::abs(s - 1.0) <= 1e-12)) {
      std::ostringstream m;
      m << "coupling matrix row " << j << " sums to " << s << ", not 1";
      fail(ErrorKind::Config, m.str());
    }
  }
}

// Substep count from the delayed state: the smallest |x_c(t-1)| over the step window decides.
template <class T>
int delayed_substeps(const Trajectory<T>& tr, double tn, double beta, const FeedbackFunction& f) {
  const int d = tr.dim();
  std::vector<T> v(d), dv(d);
  int k = 1;
  for (double off : {0.0, 0.5, 1.0}) {
    tr.eval(tn + off * tr.step() - 1.0, v.data(), dv.data());
    for (int c = 0; c < d; ++c) {
      k = std::max(k, spike_substeps(std::real(v[c]), std::real(dv[c]), beta, tr.step(), f));
    }
  }
  return k;
}

}  // namespace

void extend_scalar(Trajectory<double>& traj, double alpha, double beta, const FeedbackFunction& f,
                   double t_end) {
  require(traj.dim() == 1, ErrorKind::Config, "scalar integration needs a one-dimensional history");
  auto rhs = [&](double, const double* x, const double* xd, double* dx) {
    dx[0] = -alpha * x[0] + beta * f.eval(xd[0]);
  };
  march(traj, steps_to(traj, t_end), rhs,
        [&](double tn) { return delayed_substeps(traj, tn, beta, f); });
}

Trajectory<double> integrate_scalar(double alpha, double beta, const FeedbackFunction& f,
                                    const HistorySegment<double>& history, double T, double h) {
  require(T > 0.0, ErrorKind::Domain, "integration horizon must be > 0");
  Trajectory<double> traj(0.0, steps_per_unit(h), history);
  extend_scalar(traj, alpha, beta, f, T);
  return traj;
}

void extend_coupled(Trajectory<double>& traj, double alpha, double beta, const FeedbackFunction& f,
                    const Eigen::MatrixXd& G, double t_end) {
  check_row_sums(G);
  const int n = static_cast<int>(G.rows());
  require(traj.dim() == n, ErrorKind::Config, "history dimension does not match the coupling matrix");
  std::vector<double> fx(n);
  auto rhs = [&](double, const double* x, const double* xd, double* dx) {
    for (int k = 0; k < n; ++k) fx[k] = f.eval(xd[k]);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += G(j, k) * fx[k];
      dx[j] = -alpha * x[j] + beta * acc;
    }
  };
  march(traj, steps_to(traj, t_end), rhs,
        [&](double tn) { return delayed_substeps(traj, tn, beta, f); });
}

Trajectory<double> integrate_coupled(double alpha, double beta, const FeedbackFunction& f,
                                     const Eigen::MatrixXd& G, const HistorySegment<double>& history,
                                     double T, double h) {
  require(T > 0.0, ErrorKind::Domain, "integration horizon must be > 0");
  check_row_sums(G);
  Trajectory<double> traj(0.0, steps_per_unit(h), history);
  extend_coupled(traj, alpha, beta, f, G, T);
  return traj;
}

OrbitView view_of(const PeriodicOrbit& orbit) {
  OrbitView v;
  v.value = [&orbit](double t) { return orbit.eval(t); };
  v.deriv = [&orbit](double t) { return orbit.eval_deriv(t); };
  return v;
}

OrbitView view_of(const Trajectory<double>& traj) {
  require(traj.dim() == 1, ErrorKind::Domain, "orbit view needs a scalar trajectory");
  OrbitView v;
  v.value = [&traj](double t) { return traj.eval(t); };
  v.deriv = [&traj](double t) {
    double x, dx;
    traj.eval(t, &x, &dx);
    return dx;
  };
  v.cover_lo = traj.t_start() - 1.0;
  v.cover_hi = traj.t_end();
  return v;
}

Trajectory<cplx> integrate_variational_system(const Eigen::MatrixXcd& L, const OrbitView& p,
                                              double alpha, double beta, const FeedbackFunction& f,
                                              double s, const HistorySegment<cplx>& psi, double T,
                                              double h, VariationalOptions opts) {
  require(L.rows() == L.cols() && L.rows() >= 1, ErrorKind::Domain, "coupling block must be square");
  require(T > 0.0, ErrorKind::Domain, "integration horizon must be > 0");
  const int n = static_cast<int>(L.rows());
  require(psi.dim() % n == 0, ErrorKind::Domain, "history dimension must be a multiple of n");
  const int cols = psi.dim() / n;
  if (p.cover_lo > s - 2.0 + 1e-12 || p.cover_hi < s + T - 1.0 - 1e-12) {
    std::ostringstream m;
    m << "orbit covers [" << p.cover_lo << ", " << p.cover_hi << "] but the variational run needs ["
      << s - 2.0 << ", " << s + T - 1.0 << "]";
    fail(ErrorKind::Domain, m.str());
  }

  Trajectory<cplx> traj(s, steps_per_unit(h), psi);
  if (!opts.retain_all) traj.set_retention(static_cast<std::size_t>(traj.steps_per_unit()) + 4);

  const bool diagonal = n == 1;
  const cplx l00 = L(0, 0);
  auto rhs = [&](double t, const cplx* y, const cplx* yd, cplx* dy) {
    const double coef = beta * f.deriv(p.value(t - 1.0));
    if (diagonal) {
      const cplx c = coef * l00;
      for (int i = 0; i < cols; ++i) dy[i] = -alpha * y[i] + c * yd[i];
      return;
    }
    for (int col = 0; col < cols; ++col) {
      const cplx* ydc = yd + col * n;
      for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) acc += L(j, k) * ydc[k];
        dy[col * n + j] = -alpha * y[col * n + j] + coef * acc;
      }
    }
  };
  auto substeps = [&](double tn) {
    int k = 1;
    for (double off : {0.0, 0.5, 1.0}) {
      const double u = tn + off * h - 1.0;
      k = std::max(k, spike_substeps(p.value(u), p.deriv(u), beta, h, f));
    }
    return k;
  };
  march(traj, steps_to(traj, s + T), rhs, substeps);
  return traj;
}

Trajectory<cplx> integrate_variational(cplx lambda, const OrbitView& p, double alpha, double beta,
                                       const FeedbackFunction& f, double s,
                                       const HistorySegment<cplx>& psi, double T, double h,
                                       VariationalOptions opts) {
  Eigen::MatrixXcd L(1, 1);
  L(0, 0) = lambda;
  return integrate_variational_system(L, p, alpha, beta, f, s, psi, T, h, opts);
}

}  // namespace sopslab
