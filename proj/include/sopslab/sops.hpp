#pragma once

#include <string>
#include <vector>

#include "sopslab/ddesolve.hpp"
#include "sopslab/feedback.hpp"
#include "sopslab/limitcore.hpp"

namespace sopslab {

struct SopsOptions {
  double h = 1e-3;
  double tol = 1e-6;
  double transient = 50.0;
  double max_time = 500.0;
};

/// Phase-fixed periodic orbit: p(-1) = 0, p' (-1) > 0, samples on -1 + k*h.
struct Sops {
  double alpha = 0.0;
  double beta = 0.0;
  FeedbackFunction feedback;
  double omega = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double h = 0.0;
  double residual = 0.0;
  std::vector<double> p;
  std::vector<double> pdot;

  PeriodicOrbit orbit() const;
  std::vector<double> times() const;
};

Sops find_sops(double alpha, double beta, const FeedbackFunction& f, const SopsOptions& opts = {});

/// p / beta on the sample grid.
std::vector<double> normalize_sops(const Sops& s);

struct ResidualReport {
  double z1 = 0.0;         // |z1 - q1*|
  double z2 = 0.0;         // |z2 - (q1* + q2* + 1)|
  double omega = 0.0;      // |omega - omega*|
  double profile = 0.0;    // sup over one period of |pbar - pbar*|
  double derivative = 0.0; // sup off the J_eps windows of |pbar' - pbar*'|
};

ResidualReport limit_residuals(const Sops& s, const LimitProfile& p, double eps);

void write_sops_csv(const Sops& s, const std::string& csv_path, const std::string& json_path);

}  // namespace sopslab
