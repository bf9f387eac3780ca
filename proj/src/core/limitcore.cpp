#include "sopslab/limitcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "sopslab/errors.hpp"

namespace sopslab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

LimitProfile make_profile(double alpha, double a, double b) {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::Domain,
          "alpha must be finite and >= 0");
  require(std::isfinite(a) && a > 0.0, ErrorKind::Domain, "a must be > 0");
  require(std::isfinite(b) && b > 0.0, ErrorKind::Domain, "b must be > 0");

  LimitProfile p;
  p.alpha = alpha;
  if (a < b) {
    std::swap(a, b);
    p.swapped = true;
  }
  p.a = a;
  p.b = b;

  const double decay = std::exp(-alpha);
  p.rho1 = a / (a + b) * decay;
  p.rho2 = b / (a + b) * decay;
  if (alpha == 0.0) {
    p.q1 = b / a;
    p.q2 = a / b;
  } else {
    const double gap = -std::expm1(-alpha);  // 1 - e^{-alpha}
    p.q1 = std::log1p(b / a * gap) / alpha;
    p.q2 = std::log1p(a / b * gap) / alpha;
  }
  p.omega_star = p.q1 + p.q2 + 2.0;
  p.r0 = decay / 2.0;
  const double half = (p.rho1 - p.rho2) / 2.0;
  p.delta_disc = half * half - (1.0 - p.rho1) * (1.0 - p.rho2);
  return p;
}

static double nu_denominator(const LimitProfile& p) {
  return (1.0 - p.rho1) * (1.0 - p.rho2);
}

cplx nu_star(cplx lambda, const LimitProfile& p) {
  return (lambda - p.rho1) * (lambda - p.rho2) / nu_denominator(p);
}

cplx nu_star_prime(cplx lambda, const LimitProfile& p) {
  return (2.0 * lambda - p.rho1 - p.rho2) / nu_denominator(p);
}

double nu_star_real_form(double r, const LimitProfile& p) {
  const double x = r - p.r0;
  return -1.0 - (p.delta_disc - x * x) / nu_denominator(p);
}

double wrap_phase(double t, const LimitProfile& p) {
  double u = std::fmod(t + 1.0, p.omega_star);
  if (u < 0.0) u += p.omega_star;
  return u - 1.0;
}

// Representative of t in [-q2-1, q1+1).
static double wrap_profile(double t, const LimitProfile& p) {
  const double lo = -p.q2 - 1.0;
  double u = std::fmod(t - lo, p.omega_star);
  if (u < 0.0) u += p.omega_star;
  return u + lo;
}

double pbar_star(double t, const LimitProfile& p) {
  const double u = wrap_profile(t, p);
  if (p.alpha == 0.0) {
    return u <= 0.0 ? -p.a + p.b * (u + p.q2 + 1.0) : p.b - p.a * u;
  }
  if (u <= 0.0) return p.b / p.alpha * (-std::expm1(-p.alpha * (u + 1.0)));
  return -p.a / p.alpha * (-std::expm1(-p.alpha * (u - p.q1)));
}

double pbar_star_dot(double t, const LimitProfile& p) {
  const double u = wrap_profile(t, p);
  if (u < 0.0) return p.b * std::exp(-p.alpha * (u + 1.0));
  return -p.a * std::exp(-p.alpha * (u - p.q1));
}

double h_star(double t, const LimitProfile& p) {
  return wrap_phase(t, p) < p.q1 ? -p.a : p.b;
}

std::vector<MeasureAtom> mu_star_atoms(double t0, double t1, const LimitProfile& p) {
  require(t0 < t1, ErrorKind::Domain, "mu_star_atoms needs t0 < t1");
  std::vector<MeasureAtom> atoms;
  const std::pair<double, double> families[] = {
      {-1.0, -(1.0 + p.a / p.b)},
      {p.q1, -(1.0 + p.b / p.a)},
  };
  for (const auto& [base, weight] : families) {
    double k = std::floor((t0 - base) / p.omega_star);
    for (;; k += 1.0) {
      const double time = base + k * p.omega_star;
      if (time > t1) break;
      if (time > t0) atoms.push_back({time, weight});
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const MeasureAtom& x, const MeasureAtom& y) { return x.time < y.time; });
  return atoms;
}

const char* to_string(CassiniTag tag) noexcept {
  switch (tag) {
    case CassiniTag::StableRegion: return "StableRegion";
    case CassiniTag::UnstableRegion: return "UnstableRegion";
    case CassiniTag::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

CassiniVerdict cassini_classify(cplx lambda, double delta, const LimitProfile& p) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0,1)");
  const double mod = std::abs(nu_star(lambda, p));
  CassiniVerdict v{CassiniTag::Indeterminate, mod,
                   std::min(std::abs(mod - (1.0 - delta)), std::abs(mod - (1.0 + delta)))};
  if (mod < 1.0 - delta) v.tag = CassiniTag::StableRegion;
  else if (mod > 1.0 + delta) v.tag = CassiniTag::UnstableRegion;
  return v;
}

CassiniCurve cassini_boundary(double delta, int nsamples, const LimitProfile& p) {
  require(delta >= 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in [0,1)");
  require(nsamples >= 8, ErrorKind::Domain, "nsamples must be >= 8");

  const double level = 1.0 - delta;
  const double half = (p.rho1 - p.rho2) / 2.0;
  const double k2 = level * nu_denominator(p);

  CassiniCurve curve;
  std::vector<double> centers;
  if (k2 > half * half) {
    centers.push_back(p.r0);
  } else {
    centers.push_back(p.rho1);
    centers.push_back(p.rho2);
  }
  curve.lobes = static_cast<int>(centers.size());

  const double scale = std::sqrt(k2) + half;
  const double dr = scale / 256.0;
  const double rmax = 4.0 * scale + 1.0;
  auto excess = [&](cplx z) { return std::abs(nu_star(z, p)) - level; };

  for (double c : centers) {
    for (int k = 0; k < nsamples; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / nsamples;
      const cplx dir = std::polar(1.0, angle);
      if (excess(c) >= 0.0) {
        curve.failures.push_back({angle, "ray origin is not inside the level set"});
        continue;
      }
      double lo = 0.0, hi = -1.0;
      for (double r = dr; r <= rmax; r += dr) {
        if (excess(c + r * dir) >= 0.0) {
          hi = r;
          break;
        }
        lo = r;
      }
      if (hi < 0.0) {
        curve.failures.push_back({angle, "no crossing found before the search radius"});
        continue;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(c + mid * dir) >= 0.0 ? hi : lo) = mid;
      }
      // Snap to exact real crossings when the ray is horizontal.
      cplx z = c + hi * dir;
      if (k * 2 == nsamples || k == 0) z = cplx(z.real(), 0.0);
      const double res = std::abs(excess(z));
      if (res < 1e-10) {
        curve.points.push_back(z);
      } else {
        curve.failures.push_back({angle, "bisection residual above 1e-10"});
      }
    }
  }
  return curve;
}

const char* to_string(RegionA1 r) noexcept {
  switch (r) {
    case RegionA1::InA_less1: return "InA_less1";
    case RegionA1::InA_greater1: return "InA_greater1";
    case RegionA1::Neither: return "Neither";
  }
  return "Neither";
}

const char* to_string(RegionA0 r) noexcept {
  switch (r) {
    case RegionA0::InA_greater0: return "InA_greater0";
    case RegionA0::InA_less0: return "InA_less0";
    case RegionA0::Neither: return "Neither";
  }
  return "Neither";
}

// inf and sup of |nu*| over the closed disk, 100 radii x 100 angles.
static std::pair<double, double> disk_extrema(cplx center, double radius, const LimitProfile& p) {
  double lo = std::abs(nu_star(center, p));
  double hi = lo;
  for (int i = 0; i < 100; ++i) {
    const double r = radius * i / 99.0;
    for (int j = 0; j < 100; ++j) {
      const double v = std::abs(nu_star(center + std::polar(r, 2.0 * std::numbers::pi * j / 100.0), p));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

static RegionConstants finish_constants(double eps, double d, std::pair<double, double> ext) {
  RegionConstants k;
  k.eps = eps;
  k.m = ext.first;
  k.d = d;
  k.delta = std::min(k.m, d);
  k.N = ext.second + k.delta;
  k.c = eps * eps / (4.0 * k.N);
  return k;
}

RegionConstants region_constants_A1(const LimitProfile& p) {
  const double eps = (1.0 - p.rho1) / 2.0;
  return finish_constants(eps, nu_star_prime(1.0, p).real() / 2.0, disk_extrema(1.0, eps, p));
}

RegionConstants region_constants_A0(const LimitProfile& p) {
  require(p.alpha == 0.0, ErrorKind::Domain, "region_A0 requires alpha = 0");
  const double eps = p.rho2 / 2.0;
  return finish_constants(eps, -nu_star_prime(0.0, p).real() / 2.0, disk_extrema(0.0, eps, p));
}

RegionA1 region_A1(cplx lambda, const RegionConstants& k) {
  const cplx w = lambda - 1.0;
  if (std::abs(w) >= k.eps / 2.0) return RegionA1::Neither;
  const double q = std::norm(w) / k.c;
  if (lambda.real() < 1.0) {
    const double g1 = std::abs(cplx(1.0 + k.d * w.real(), 3.0 * k.d * w.imag())) + q;
    if (g1 < 1.0) return RegionA1::InA_less1;
  } else if (lambda.real() > 1.0) {
    const double g2 = std::abs(cplx(1.0 + k.d * w.real(), k.d * w.imag())) - q;
    if (g2 > 1.0) return RegionA1::InA_greater1;
  }
  return RegionA1::Neither;
}

RegionA1 region_A1(cplx lambda, const LimitProfile& p) {
  return region_A1(lambda, region_constants_A1(p));
}

RegionA0 region_A0(cplx lambda, const RegionConstants& k) {
  if (std::abs(lambda) >= k.eps / 2.0) return RegionA0::Neither;
  const double q = std::norm(lambda) / k.c;
  if (lambda.real() > 0.0) {
    const double g1 = std::abs(cplx(1.0 - k.d * lambda.real(), 3.0 * k.d * lambda.imag())) + q;
    if (g1 < 1.0) return RegionA0::InA_greater0;
  } else if (lambda.real() < 0.0) {
    const double g2 = std::abs(cplx(1.0 - k.d * lambda.real(), k.d * lambda.imag())) - q;
    if (g2 > 1.0) return RegionA0::InA_less0;
  }
  return RegionA0::Neither;
}

RegionA0 region_A0(cplx lambda, const LimitProfile& p) {
  return region_A0(lambda, region_constants_A0(p));
}

static cplx limiting_y(cplx lambda, double s, const InitialSegment& psi, double t,
                       const LimitProfile& p) {
  if (t <= s) return psi(t - s);
  cplx y = psi(0.0) * std::exp(-p.alpha * (t - s));
  if (t - 1.0 <= s - 1.0) return y;
  for (const auto& atom : mu_star_atoms(s - 1.0, t - 1.0, p)) {
    y += lambda * atom.weight * std::exp(-p.alpha * (t - 1.0 - atom.time)) *
         limiting_y(lambda, s, psi, atom.time, p);
  }
  return y;
}

cplx limiting_variational_solve(cplx lambda, double s, const InitialSegment& psi, double t,
                                const LimitProfile& p) {
  require(s > -p.q1 && s < 0.0, ErrorKind::Domain, "s must lie in (-q1, 0)");
  require(t >= s - 1.0, ErrorKind::Domain, "t must be >= s - 1");
  require(t <= s + p.omega_star, ErrorKind::Domain, "t must be <= s + omega_star");
  return limiting_y(lambda, s, psi, t, p);
}

cplx limiting_F(double s, cplx lambda, cplx z1, cplx z2, const LimitProfile& p) {
  return -(z1 - lambda * z2 * (1.0 + p.a / p.b) * std::exp(-p.alpha * s)) *
         (lambda - p.rho1) / (1.0 - p.rho2) * std::exp(-p.alpha * (p.q2 + 1.0));
}

double limiting_Q(cplx lambda, const LimitProfile& p) {
  const double m = std::abs(lambda);
  return (1.0 + m * (1.0 + p.a / p.b)) * (1.0 + m * (1.0 + p.b / p.a));
}

cplx limiting_monodromy_dominant(cplx lambda, double s, const LimitProfile& p) {
  require(s > -p.q1 && s < 0.0, ErrorKind::Domain, "s must lie in (-q1, 0)");
  // psi0(theta) = e^{-alpha(theta+1)} maps to F e^{-alpha theta} = (F e^{alpha}) psi0(theta).
  const cplx z1 = std::exp(-p.alpha);
  const cplx z2 = std::exp(p.alpha * s);
  return limiting_F(s, lambda, z1, z2, p) * std::exp(p.alpha);
}

double hopf_beta(double alpha, double fprime0) {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::Domain, "alpha must be >= 0");
  require(std::isfinite(fprime0) && fprime0 < 0.0, ErrorKind::Domain, "f'(0) must be < 0");
  double theta = std::numbers::pi / 2.0;
  if (alpha > 0.0) {
    double lo = std::numbers::pi / 2.0, hi = std::numbers::pi;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      (mid + alpha * std::tan(mid) < 0.0 ? lo : hi) = mid;
    }
    theta = 0.5 * (lo + hi);
  }
  return theta / (std::sin(theta) * -fprime0);
}

}  // namespace sopslab
