#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sopslab/limitcore.hpp"
#include "sopslab/sops.hpp"

namespace sopslab {

struct MonodromyMatrix {
  int m = 0;           // theta_i = -1 + i/m, i = 0..m
  int n = 1;           // 1 for the scalar extended operator
  cplx lambda = 0.0;   // scalar case only
  double start_phase = 0.0;
  double h = 0.0;
  Eigen::MatrixXcd entries;
};

/// Default start phase: midpoint of (-q1*, 0) for the orbit's (alpha, a, b).
double default_start_phase(const Sops& s);

MonodromyMatrix monodromy_matrix(cplx lambda, const Sops& s, int m);
MonodromyMatrix monodromy_matrix(cplx lambda, const Sops& s, int m, double start_phase);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // above the floor, by descending modulus
  std::optional<cplx> dominant;
  double spectral_radius = 0.0;
  int truncation = 0;
};

SpectrumReport spectrum(const Eigen::MatrixXcd& M, double floor = 1e-4);
SpectrumReport spectrum(const MonodromyMatrix& M, double floor = 1e-4);

struct DominantMultiplier {
  cplx value;           // the dominant one, or the upper member of a tied pair
  bool unique = false;
  double spectral_radius = 0.0;
};

DominantMultiplier dominant_multiplier(cplx lambda, const Sops& s, int m);
DominantMultiplier dominant_multiplier(cplx lambda, const Sops& s, int m, double start_phase);

/// Row and column index j*(m+1) + i for component j at theta_i.
MonodromyMatrix coupled_monodromy(const Eigen::MatrixXd& G, const Sops& s, int m);
MonodromyMatrix coupled_monodromy(const Eigen::MatrixXd& G, const Sops& s, int m, double start_phase);

struct DecompositionReport {
  double hausdorff = 0.0;
  std::vector<cplx> coupled;  // above floor
  std::vector<cplx> scalar_union;
  bool passed = false;
};

DecompositionReport decomposition_check(const Eigen::MatrixXd& G, const Sops& s, int m, double tol,
                                        double floor = 0.05);

/// Symmetric Hausdorff distance, each floored set matched against the other full set.
double hausdorff_distance(const std::vector<cplx>& a_floored, const std::vector<cplx>& a_full,
                          const std::vector<cplx>& b_floored, const std::vector<cplx>& b_full);

void write_spectrum_csv(const SpectrumReport& r, const std::string& path);
void write_matrix_csv(const Eigen::MatrixXcd& M, const std::string& path);

}  // namespace sopslab
