#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sopslab/errors.hpp"
#include "sopslab/feedback.hpp"

namespace sopslab {

using cplx = std::complex<double>;

/// Initial segment on [-1, 0]. The callable writes dim values and, when the
/// deriv pointer is non-null, dim derivatives.
template <class T>
class HistorySegment {
 public:
  using Fn = std::function<void(double theta, T* value, T* deriv)>;

  HistorySegment(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {
    require(dim >= 1, ErrorKind::Domain, "history dimension must be >= 1");
  }

  static HistorySegment constant(std::vector<T> c) {
    const int n = static_cast<int>(c.size());
    return HistorySegment(n, [c](double, T* v, T* d) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        v[i] = c[i];
        if (d) d[i] = T(0);
      }
    });
  }

  /// c0 + slope * theta componentwise.
  static HistorySegment ramp(std::vector<T> c0, std::vector<T> slope) {
    require(c0.size() == slope.size(), ErrorKind::Domain, "ramp offset/slope size mismatch");
    const int n = static_cast<int>(c0.size());
    return HistorySegment(n, [c0, slope](double theta, T* v, T* d) {
      for (std::size_t i = 0; i < c0.size(); ++i) {
        v[i] = c0[i] + slope[i] * theta;
        if (d) d[i] = slope[i];
      }
    });
  }

  /// Piecewise-linear through (m+1) uniform samples per component;
  /// samples[i*dim + c] is component c at theta = -1 + i/m.
  static HistorySegment tabulated(int dim, std::vector<T> samples) {
    require(dim >= 1 && samples.size() % dim == 0 && samples.size() / dim >= 2,
            ErrorKind::Domain, "tabulated history needs at least two samples per component");
    const int m = static_cast<int>(samples.size() / dim) - 1;
    for (const auto& s : samples) {
      require(std::isfinite(std::abs(s)), ErrorKind::Domain, "tabulated history has non-finite samples");
    }
    return HistorySegment(dim, [dim, m, samples](double theta, T* v, T* d) {
      double u = (theta + 1.0) * m;
      int i = static_cast<int>(std::floor(u));
      if (i < 0) i = 0;
      if (i > m - 1) i = m - 1;
      const double w = u - i;
      for (int c = 0; c < dim; ++c) {
        const T y0 = samples[i * dim + c];
        const T y1 = samples[(i + 1) * dim + c];
        v[c] = y0 + (y1 - y0) * w;
        if (d) d[c] = (y1 - y0) * static_cast<double>(m);
      }
    });
  }

  int dim() const { return dim_; }
  void eval(double theta, T* value, T* deriv = nullptr) const { fn_(theta, value, deriv); }

 private:
  int dim_;
  Fn fn_;
};

namespace detail {

template <class T>
inline void hermite(double s, double H, const T* y0, const T* d0, const T* y1, const T* d1,
                    int dim, T* out, T* dout) {
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  for (int c = 0; c < dim; ++c) {
    out[c] = h00 * y0[c] + (h10 * H) * d0[c] + h01 * y1[c] + (h11 * H) * d1[c];
  }
  if (dout) {
    const double g00 = (6 * s2 - 6 * s) / H, g10 = 3 * s2 - 4 * s + 1;
    const double g01 = (-6 * s2 + 6 * s) / H, g11 = 3 * s2 - 2 * s;
    for (int c = 0; c < dim; ++c) {
      dout[c] = g00 * y0[c] + g10 * d0[c] + g01 * y1[c] + g11 * d1[c];
    }
  }
}

}  // namespace detail

/// Dense output on the grid t_start + k/N with the history segment before t_start.
template <class T>
class Trajectory {
 public:
  Trajectory(double t_start, int steps_per_unit, HistorySegment<T> history)
      : t_start_(t_start), n_(steps_per_unit), h_(1.0 / steps_per_unit), history_(std::move(history)) {
    require(steps_per_unit >= 1, ErrorKind::Config, "steps per unit must be >= 1");
  }

  double t_start() const { return t_start_; }
  double step() const { return h_; }
  int steps_per_unit() const { return n_; }
  int dim() const { return history_.dim(); }
  const HistorySegment<T>& history() const { return history_; }

  /// Nodes ever computed, including the one at t_start.
  std::size_t node_count() const { return first_ + count_; }
  std::size_t first_kept() const { return first_; }
  double node_time(std::size_t k) const { return t_start_ + static_cast<double>(k) * h_; }
  double t_end() const { return node_time(node_count() - 1); }

  const T* value_at(std::size_t k) const { return &values_[(k - first_) * dim()]; }
  const T* deriv_at(std::size_t k) const { return &derivs_[(k - first_) * dim()]; }

  /// Keep only the most recent nodes (at least one delay plus slack); 0 keeps all.
  void set_retention(std::size_t keep_nodes) { keep_ = keep_nodes; }

  void push_node(const T* x, const T* dx) {
    values_.insert(values_.end(), x, x + dim());
    derivs_.insert(derivs_.end(), dx, dx + dim());
    ++count_;
    if (keep_ > 0 && count_ >= 2 * keep_) {
      const std::size_t drop = count_ - keep_;
      values_.erase(values_.begin(), values_.begin() + drop * dim());
      derivs_.erase(derivs_.begin(), derivs_.begin() + drop * dim());
      first_ += drop;
      count_ -= drop;
    }
  }

  void eval(double t, T* out, T* dout = nullptr) const {
    if (t < t_start_) {
      require(t >= t_start_ - 1.0 - 1e-12, ErrorKind::Domain, "time precedes the history segment");
      history_.eval(std::max(t - t_start_, -1.0), out, dout);
      return;
    }
    require(count_ > 0, ErrorKind::Domain, "trajectory has no nodes");
    const double u = (t - t_start_) / h_;
    const double last = static_cast<double>(node_count() - 1);
    require(u <= last + 1e-9, ErrorKind::Domain,
            "time " + std::to_string(t) + " beyond trajectory end " + std::to_string(t_end()));
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9) {
      const auto k = static_cast<std::size_t>(r);
      require(k >= first_, ErrorKind::Domain, "time falls before the retained window");
      const T* v = value_at(k);
      std::copy(v, v + dim(), out);
      if (dout) {
        const T* d = deriv_at(k);
        std::copy(d, d + dim(), dout);
      }
      return;
    }
    auto k = static_cast<std::size_t>(std::floor(u));
    require(k >= first_, ErrorKind::Domain, "time falls before the retained window");
    detail::hermite(u - static_cast<double>(k), h_, value_at(k), deriv_at(k), value_at(k + 1),
                    deriv_at(k + 1), dim(), out, dout);
  }

  T eval(double t, int component = 0) const {
    std::vector<T> buf(dim());
    eval(t, buf.data());
    return buf[component];
  }

 private:
  double t_start_;
  int n_;
  double h_;
  HistorySegment<T> history_;
  std::vector<T> values_;
  std::vector<T> derivs_;
  std::size_t first_ = 0;
  std::size_t count_ = 0;
  std::size_t keep_ = 0;
};

/// One period of a scalar periodic orbit sampled at t0 + k*h, k = 0..K with
/// K*h < period; the wrap interval closes on the first sample.
class PeriodicOrbit {
 public:
  PeriodicOrbit(double t0, double period, double h, std::vector<double> p, std::vector<double> pdot);

  double t0() const { return t0_; }
  double period() const { return period_; }
  double step() const { return h_; }
  const std::vector<double>& values() const { return p_; }
  const std::vector<double>& derivs() const { return pd_; }

  double eval(double t) const;
  double eval_deriv(double t) const;

 private:
  void locate(double t, std::size_t& k, double& s, double& H) const;

  double t0_, period_, h_;
  std::vector<double> p_, pd_;
};

/// h must be 1/N for a positive integer N (relative tolerance 1e-9).
int steps_per_unit(double h);
double default_step(double beta);

/// Substep count for one step whose delayed window sees the value v and slope dv.
int spike_substeps(double v, double dv, double beta, double h, const FeedbackFunction& f);

Trajectory<double> integrate_scalar(double alpha, double beta, const FeedbackFunction& f,
                                    const HistorySegment<double>& history, double T, double h);

/// Continue an existing scalar or coupled trajectory up to t_end (rounded up to the grid).
void extend_scalar(Trajectory<double>& traj, double alpha, double beta, const FeedbackFunction& f,
                   double t_end);

Trajectory<double> integrate_coupled(double alpha, double beta, const FeedbackFunction& f,
                                     const Eigen::MatrixXd& G, const HistorySegment<double>& history,
                                     double T, double h);

void extend_coupled(Trajectory<double>& traj, double alpha, double beta, const FeedbackFunction& f,
                    const Eigen::MatrixXd& G, double t_end);

/// Coefficient source p(t) and p'(t) for the variational equation.
struct OrbitView {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  double cover_lo = -INFINITY;
  double cover_hi = INFINITY;
};

OrbitView view_of(const PeriodicOrbit& orbit);
OrbitView view_of(const Trajectory<double>& traj);

struct VariationalOptions {
  bool retain_all = true;  // false keeps only the last delay interval
};

/// y' = -alpha y + beta f'(p(t-1)) L y(t-1) for a state of `cols` stacked n-blocks,
/// index col*n + j. History dim must be n*cols.
Trajectory<cplx> integrate_variational_system(const Eigen::MatrixXcd& L, const OrbitView& p,
                                              double alpha, double beta, const FeedbackFunction& f,
                                              double s, const HistorySegment<cplx>& psi, double T,
                                              double h, VariationalOptions opts = {});

Trajectory<cplx> integrate_variational(cplx lambda, const OrbitView& p, double alpha, double beta,
                                       const FeedbackFunction& f, double s,
                                       const HistorySegment<cplx>& psi, double T, double h,
                                       VariationalOptions opts = {});

}  // namespace sopslab
