#include "sopslab/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"

namespace sopslab {

FeedbackFunction tanh_feedback(double a, double b) {
  require(std::isfinite(a) && a > 0.0, ErrorKind::Domain, "tanh feedback needs a > 0");
  require(std::isfinite(b) && b > 0.0, ErrorKind::Domain, "tanh feedback needs b > 0");
  FeedbackFunction f;
  std::ostringstream name;
  name << "tanh(a=" << a << ",b=" << b << ")";
  f.name = name.str();
  f.eval = [a, b](double xi) { return xi >= 0.0 ? -a * std::tanh(xi / a) : -b * std::tanh(xi / b); };
  f.deriv = [a, b](double xi) {
    const double c = xi >= 0.0 ? std::cosh(xi / a) : std::cosh(xi / b);
    return std::isfinite(c) ? -1.0 / (c * c) : 0.0;
  };
  f.a = a;
  f.b = b;
  f.fprime0 = -1.0;
  f.max_abs_deriv = 1.0;
  return f;
}

static double sampled_max_abs_deriv(const std::function<double(double)>& deriv, double lo, double hi) {
  double m = 0.0;
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(deriv(lo + (hi - lo) * i / (n - 1)));
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

FeedbackFunction custom_feedback(std::string name, std::function<double(double)> eval,
                                 std::function<double(double)> deriv, double a, double b) {
  require(static_cast<bool>(eval) && static_cast<bool>(deriv), ErrorKind::Domain,
          "custom feedback needs both f and f'");
  FeedbackFunction f;
  f.name = std::move(name);
  f.eval = std::move(eval);
  f.deriv = std::move(deriv);
  f.a = a;
  f.b = b;
  f.fprime0 = f.deriv(0.0);
  const double w = 10.0 * std::max({std::abs(a), std::abs(b), 1.0});
  f.max_abs_deriv = sampled_max_abs_deriv(f.deriv, -w, w);
  return f;
}

FeedbackFunction tabulated_feedback(std::vector<FeedbackSample> table, double a, double b) {
  require(table.size() >= 2, ErrorKind::Domain, "feedback table needs at least two rows");
  require(a > 0.0 && b > 0.0, ErrorKind::Domain, "feedback table needs a, b > 0");
  std::sort(table.begin(), table.end(),
            [](const FeedbackSample& x, const FeedbackSample& y) { return x.xi < y.xi; });
  std::vector<double> xs, ys, ds;
  for (const auto& s : table) {
    require(std::isfinite(s.xi) && std::isfinite(s.f) && std::isfinite(s.fprime),
            ErrorKind::Domain, "feedback table has a non-finite entry");
    if (!xs.empty() && s.xi <= xs.back()) fail(ErrorKind::Domain, "feedback table has duplicate xi");
    xs.push_back(s.xi);
    ys.push_back(s.f);
    ds.push_back(s.fprime);
  }
  require(xs.front() <= 0.0 && xs.back() >= 0.0, ErrorKind::Domain,
          "feedback table must bracket xi = 0");

  // Fritsch-Carlson limiting of the supplied slopes.
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double secant = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
    if (secant == 0.0) {
      ds[k] = ds[k + 1] = 0.0;
      continue;
    }
    double p = ds[k] / secant;
    double q = ds[k + 1] / secant;
    if (p < 0.0) ds[k] = p = 0.0;
    if (q < 0.0) ds[k + 1] = q = 0.0;
    const double r = p * p + q * q;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      ds[k] = tau * p * secant;
      ds[k + 1] = tau * q * secant;
    }
  }

  const double lo = xs.front(), hi = xs.back();
  using Spline = boost::math::interpolators::cubic_hermite<std::vector<double>>;
  auto spline = std::make_shared<Spline>(std::move(xs), std::move(ys), std::move(ds));

  FeedbackFunction f;
  f.name = "tabulated";
  f.a = a;
  f.b = b;
  f.eval = [spline, lo, hi, a, b](double xi) {
    if (xi < lo) return b;
    if (xi > hi) return -a;
    return (*spline)(xi);
  };
  f.deriv = [spline, lo, hi](double xi) {
    if (xi < lo || xi > hi) return 0.0;
    return spline->prime(xi);
  };
  f.fprime0 = f.deriv(0.0);
  f.max_abs_deriv = sampled_max_abs_deriv(f.deriv, lo, hi);
  return f;
}

FeedbackFunction load_feedback_csv(const std::string& path) {
  const auto t = csv::read(path, true);
  const std::vector<std::string> expected{"xi", "f", "fprime"};
  if (t.header != expected) fail(ErrorKind::Io, path + ": header must be xi,f,fprime");
  std::vector<FeedbackSample> rows;
  for (const auto& r : t.rows) rows.push_back({r[0], r[1], r[2]});
  require(rows.size() >= 2, ErrorKind::Io, path + ": feedback table needs at least two rows");
  auto lo = std::min_element(rows.begin(), rows.end(),
                             [](auto& x, auto& y) { return x.xi < y.xi; });
  auto hi = std::max_element(rows.begin(), rows.end(),
                             [](auto& x, auto& y) { return x.xi < y.xi; });
  const double a = -hi->f;
  const double b = lo->f;
  return tabulated_feedback(std::move(rows), a, b);
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

static std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

ValidationReport validate_assumption(const FeedbackFunction& f, double grid_half_width, double tol) {
  require(grid_half_width > 0.0, ErrorKind::Domain, "grid_half_width must be > 0");
  require(tol > 0.0, ErrorKind::Domain, "tol must be > 0");
  ValidationReport report;
  const double W = grid_half_width;

  {
    bool ok = true;
    std::string detail = "xi*f(xi) < 0 on a log grid";
    const double top = std::log10(W);
    for (int k = 0; ok; ++k) {
      const double e = -8.0 + k / 20.0;
      if (e > top) break;
      for (double xi : {std::pow(10.0, e), -std::pow(10.0, e)}) {
        const double v = f.eval(xi);
        if (!(xi * v < 0.0)) {
          ok = false;
          detail = "xi*f(xi) >= 0 at xi = " + fmt(xi);
          break;
        }
      }
    }
    if (ok && f.eval(0.0) != 0.0) {
      ok = false;
      detail = "f(0) = " + fmt(f.eval(0.0));
    }
    report.checks.push_back({"sign", ok, detail});
  }

  {
    const double d0 = f.deriv(0.0);
    report.checks.push_back({"fprime0_negative", d0 < 0.0, "f'(0) = " + fmt(d0)});
  }

  {
    bool ok = f.a > 0.0 && f.b > 0.0;
    std::string detail = "a = " + fmt(f.a) + ", b = " + fmt(f.b);
    for (double xi : {W, 2.0 * W}) {
      const double right = std::abs(f.eval(xi) + f.a);
      const double left = std::abs(f.eval(-xi) - f.b);
      if (!(right < tol && left < tol)) {
        ok = false;
        detail = "tail gap at |xi| = " + fmt(xi) + ": " + fmt(std::max(right, left));
      }
    }
    report.checks.push_back({"bounded_tails", ok, detail});
  }

  {
    using boost::math::quadrature::gauss_kronrod;
    auto g = [&](double xi) { return std::abs(f.deriv(xi)); };
    double total = 0.0, tail = 0.0;
    bool finite = true;
    double lo = 0.0;
    for (int k = 0; k <= 6; ++k) {
      const double hi = std::pow(10.0, k);
      const double part = gauss_kronrod<double, 61>::integrate(g, lo, hi, 12, 1e-10) +
                          gauss_kronrod<double, 61>::integrate(g, -hi, -lo, 12, 1e-10);
      if (!std::isfinite(part)) finite = false;
      total += part;
      if (k == 6) tail = part;
      lo = hi;
    }
    const bool ok = finite && tail < std::max(tol, 1e-6 * total);
    report.checks.push_back({"integrable_derivative", ok,
                             "int |f'| = " + fmt(total) + ", mass beyond 1e5 = " + fmt(tail)});
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (double xi : {W, 2.0 * W, 10.0 * W}) {
      for (double x : {xi, -xi}) {
        const double v = std::abs(x * f.deriv(x));
        worst = std::max(worst, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
      }
    }
    ok = worst < tol;
    report.checks.push_back({"derivative_decay", ok, "max |xi f'(xi)| in tails = " + fmt(worst)});
  }
  return report;
}

}  // namespace sopslab
