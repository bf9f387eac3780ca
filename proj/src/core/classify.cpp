#include "sopslab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "sopslab/coupling.hpp"
#include "sopslab/errors.hpp"
#include "sopslab/floquet.hpp"

namespace sopslab {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

namespace {

void require_row_sums(const Eigen::MatrixXd& M, double target, const char* what) {
  require(M.rows() == M.cols() && M.rows() >= 2, ErrorKind::Domain,
          std::string(what) + " must be square with n >= 2");
  require(M.allFinite(), ErrorKind::Domain, std::string(what) + " has non-finite entries");
  for (Eigen::Index j = 0; j < M.rows(); ++j) {
    const double s = M.row(j).sum();
    if (std::abs(s - target) > 1e-12) {
      std::ostringstream m;
      m << what << " row " << j << " sums to " << s << ", expected " << target;
      fail(ErrorKind::Domain, m.str());
    }
  }
}

StabilityVerdict make(Verdict v, std::string rule, std::vector<Witness> w,
                      std::string caveat = kAsymptoticCaveat) {
  return {v, std::move(rule), std::move(w), std::move(caveat)};
}

// Shared by the weak and near-uniform rules: stable_sign is the sign Re(sign*lambda)
// must have on sigma_{-0}(H) for stability.
StabilityVerdict imaginary_axis_rule(const Eigen::MatrixXd& H, int sign, int stable_sign,
                                     const std::string& rule) {
  require(sign == 1 || sign == -1, ErrorKind::Domain, "sign must be +1 or -1");
  require_row_sums(H, 0.0, "perturbation H");
  const double tol = 1e-10 * std::max(1.0, H.norm());
  const auto sig = sigma_minus(H, 0.0, tol);

  std::vector<Witness> bad;
  for (cplx z : sig.full) {
    const double r = sign * z.real();
    if (stable_sign * r < -tol) bad.push_back({z, r});
  }
  if (!bad.empty()) return make(Verdict::Unstable, rule + "/unstable", bad);

  std::vector<Witness> all;
  bool decisive = sig.one_is_simple;
  for (cplx z : sig.minus_one) {
    const double r = sign * z.real();
    all.push_back({z, r});
    if (!(stable_sign * r > tol)) decisive = false;
  }
  if (decisive) return make(Verdict::Stable, rule + "/stable", all);
  return make(Verdict::Indeterminate, rule, all);
}

void require_eps(const LimitProfile& p, double eps) {
  const double s = std::sqrt(p.delta_disc);
  if (!(eps > 0.0 && eps < std::min(s, p.r0 - s))) {
    std::ostringstream m;
    m << "eps = " << eps << " must lie in (0, min(sqrt(Delta), r0 - sqrt(Delta))) = (0, "
      << std::min(s, p.r0 - s) << ")";
    fail(ErrorKind::Domain, m.str());
  }
}

// Band test on real or complex points: stable if every point sits outside the
// widened disc around r0, unstable if any sits inside the shrunken one.
StabilityVerdict band_rule(const LimitProfile& p, const std::vector<cplx>& sigma_minus_one,
                           const std::vector<cplx>& sigma_full, double eps, const std::string& rule) {
  if (p.delta_disc < 0.0) {
    std::vector<Witness> w;
    for (cplx z : sigma_minus_one) w.push_back({z, std::abs(z - p.r0)});
    return make(Verdict::Stable, rule + "/negative-discriminant", w);
  }
  if (p.delta_disc == 0.0) return make(Verdict::Indeterminate, rule + "/zero-discriminant", {});
  require_eps(p, eps);
  const double s = std::sqrt(p.delta_disc);
  std::vector<Witness> bad;
  for (cplx z : sigma_full) {
    const double d = std::abs(z - p.r0);
    if (d < s - eps) bad.push_back({z, d});
  }
  if (!bad.empty()) return make(Verdict::Unstable, rule + "/inside-band", bad);
  std::vector<Witness> all;
  bool stable = true;
  for (cplx z : sigma_minus_one) {
    const double d = std::abs(z - p.r0);
    all.push_back({z, d});
    if (!(d > s + eps)) stable = false;
  }
  if (stable) return make(Verdict::Stable, rule + "/outside-band", all);
  return make(Verdict::Indeterminate, rule + "/collar", all);
}

}  // namespace

StabilityVerdict classify_general(const LimitProfile& p, const Eigen::MatrixXd& G, double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0, 1)");
  require_row_sums(G, 1.0, "coupling matrix");
  const auto sig = sigma_minus(G, 1.0, 0.0);

  std::vector<Witness> bad;
  for (cplx z : sig.full) {
    const double v = std::abs(nu_star(z, p));
    if (v > 1.0 + delta) bad.push_back({z, v});
  }
  if (!bad.empty()) return make(Verdict::Unstable, "general/outside-oval", bad);

  std::vector<Witness> all;
  bool stable = sig.one_is_simple;
  for (cplx z : sig.minus_one) {
    const double v = std::abs(nu_star(z, p));
    all.push_back({z, v});
    if (!(v < 1.0 - delta)) stable = false;
  }
  if (stable) return make(Verdict::Stable, "general/inside-oval", all);
  return make(Verdict::Indeterminate, sig.one_is_simple ? "general/collar" : "general/one-not-simple",
              all);
}

StabilityVerdict classify_weak(const Eigen::MatrixXd& H, int sign) {
  return imaginary_axis_rule(H, sign, -1, "weak");
}

StabilityVerdict classify_near_uniform(const LimitProfile& p, const Eigen::MatrixXd& H, int sign) {
  if (p.alpha > 0.0) {
    require(sign == 1 || sign == -1, ErrorKind::Domain, "sign must be +1 or -1");
    require_row_sums(H, 0.0, "perturbation H");
    return make(Verdict::Stable, "near-uniform/positive-alpha", {});
  }
  return imaginary_axis_rule(H, sign, 1, "near-uniform");
}

StabilityVerdict classify_doubly_nonneg(const LimitProfile& p, const Eigen::MatrixXd& G, double eps) {
  require_row_sums(G, 1.0, "coupling matrix");
  const auto st = structure_check(G);
  require(st.irreducible, ErrorKind::Precondition, "doubly-nonnegative rule: matrix is not irreducible");
  require(st.nonneg_entries, ErrorKind::Precondition,
          "doubly-nonnegative rule: matrix has negative entries");
  require(st.positive_semidefinite, ErrorKind::Precondition,
          "doubly-nonnegative rule: matrix is not positive semidefinite");
  require(p.alpha > 0.0 || st.positive_definite, ErrorKind::Precondition,
          "doubly-nonnegative rule: alpha = 0 requires a positive definite matrix");
  if (!st.symmetric) {
    return make(Verdict::Indeterminate, "doubly-nonnegative/non-symmetric", {},
                std::string(kAsymptoticCaveat) + "; " + st.warnings.front());
  }
  const auto sig = sigma_minus(G, 1.0, 0.0);
  if (!sig.one_is_simple) return make(Verdict::Indeterminate, "doubly-nonnegative/one-not-simple", {});
  return band_rule(p, sig.minus_one, sig.full, eps, "doubly-nonnegative");
}

StabilityVerdict classify_mean_field(const LimitProfile& p, int n, double kappa, double eps) {
  require(n >= 2, ErrorKind::Domain, "mean-field coupling needs n >= 2");
  const bool in_window = kappa > 0.0 && (p.alpha > 0.0 ? kappa <= 1.0 : kappa < 1.0);
  if (!in_window) {
    std::ostringstream m;
    m << "mean-field rule: kappa = " << kappa << " outside "
      << (p.alpha > 0.0 ? "(0, 1]" : "(0, 1) (alpha = 0)");
    fail(ErrorKind::Precondition, m.str());
  }
  const cplx z = 1.0 - kappa;
  return band_rule(p, {z}, {z, 1.0}, eps, "mean-field");
}

StabilityVerdict classify_ring_symmetric(const LimitProfile& p, int n, double kappa, double eps,
                                         double delta) {
  require(n >= 3, ErrorKind::Domain, "ring coupling needs n >= 3");
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    std::ostringstream m;
    m << "symmetric-ring rule: kappa = " << kappa << " outside (0, 1]";
    fail(ErrorKind::Precondition, m.str());
  }
  const auto z = ring_spectrum(n, kappa, kappa);
  const bool band_window = p.alpha > 0.0 ? kappa <= 0.5 : kappa < 0.5;
  if (band_window) {
    const std::vector<cplx> minus_one(z.begin() + 1, z.end());
    return band_rule(p, minus_one, z, eps, "symmetric-ring");
  }

  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0, 1)");
  double top = 0.0;
  for (int j = 1; j < n; ++j) top = std::max(top, 1.0 - std::cos(2.0 * std::numbers::pi * j / n));
  const double threshold = (1.0 - p.r0) * (1.0 + std::sqrt(1.0 + delta)) / top;
  if (kappa > threshold) {
    std::vector<Witness> bad;
    for (cplx w : z) {
      const double v = std::abs(nu_star(w, p));
      if (v > 1.0 + delta) bad.push_back({w, v});
    }
    return make(Verdict::Unstable, n % 2 == 0 ? "symmetric-ring/even-n" : "symmetric-ring/odd-n", bad);
  }
  return make(Verdict::Indeterminate, "symmetric-ring/strong-coupling", {});
}

StabilityVerdict classify_empirical(const Sops& s, const Eigen::MatrixXd& G, int m, double margin) {
  require(margin >= 0.0, ErrorKind::Domain, "margin must be >= 0");
  const auto sig = sigma_minus_one(G);
  std::vector<cplx> distinct;
  for (cplx z : sig.minus_one) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](cplx w) { return std::abs(w - z) < 1e-10; });
    if (!seen) distinct.push_back(z);
  }
  std::vector<Witness> all, bad;
  bool stable = true;
  for (cplx z : distinct) {
    const double rho = dominant_multiplier(z, s, m).spectral_radius;
    all.push_back({z, rho});
    if (rho > 1.0 + margin) bad.push_back({z, rho});
    if (!(rho < 1.0 - margin)) stable = false;
  }
  std::ostringstream cav;
  cav << "empirical at beta = " << s.beta << " (m = " << m << ", h = " << s.h << ")";
  if (!bad.empty()) return make(Verdict::Unstable, "empirical/radius-above-one", bad, cav.str());
  if (stable) return make(Verdict::Stable, "empirical/radius-below-one", all, cav.str());
  return make(Verdict::Indeterminate, "empirical/collar", all, cav.str());
}

std::string verdict_json(const StabilityVerdict& v) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& x : v.witnesses) {
    w.push_back({{"lambda_re", x.lambda.real()}, {"lambda_im", x.lambda.imag()}, {"value", x.value}});
  }
  nlohmann::json j = {{"verdict", to_string(v.verdict)}, {"rule", v.rule}, {"witnesses", w},
                      {"caveat", v.caveat}};
  return j.dump(2);
}

}  // namespace sopslab
