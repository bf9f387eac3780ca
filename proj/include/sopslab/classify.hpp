#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sopslab/limitcore.hpp"
#include "sopslab/sops.hpp"

namespace sopslab {

enum class Verdict { Stable, Unstable, Indeterminate };

const char* to_string(Verdict v) noexcept;

struct Witness {
  cplx lambda;
  double value;  // |nu*|, Re(sign*lambda), |lambda - r0| or rho(M_lambda), per rule
};

struct StabilityVerdict {
  Verdict verdict = Verdict::Indeterminate;
  std::string rule;
  std::vector<Witness> witnesses;
  std::string caveat;
};

inline constexpr const char* kAsymptoticCaveat = "asymptotic in beta";

StabilityVerdict classify_general(const LimitProfile& p, const Eigen::MatrixXd& G, double delta);

/// Coupling I + sign*eta*H with small eta > 0.
StabilityVerdict classify_weak(const Eigen::MatrixXd& H, int sign);

/// Coupling J + sign*eta*H with small eta > 0.
StabilityVerdict classify_near_uniform(const LimitProfile& p, const Eigen::MatrixXd& H, int sign);

StabilityVerdict classify_doubly_nonneg(const LimitProfile& p, const Eigen::MatrixXd& G, double eps);

StabilityVerdict classify_mean_field(const LimitProfile& p, int n, double kappa, double eps);

/// kappa in (0, 1/2] uses the band corollary; kappa in (1/2, 1] only the
/// even/large-odd instability clause, which needs delta in (0, 1).
StabilityVerdict classify_ring_symmetric(const LimitProfile& p, int n, double kappa, double eps,
                                         double delta);

/// Spectral radii of M_lambda over the distinct members of sigma_{-1}(G).
StabilityVerdict classify_empirical(const Sops& s, const Eigen::MatrixXd& G, int m, double margin);

/// {verdict, rule, witnesses: [{lambda_re, lambda_im, value}], caveat}
std::string verdict_json(const StabilityVerdict& v);

}  // namespace sopslab
