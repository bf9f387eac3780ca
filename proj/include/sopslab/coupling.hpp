#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sopslab {

using cplx = std::complex<double>;

enum class CouplingFamily { MeanField, Ring, General };

const char* to_string(CouplingFamily f) noexcept;

struct CouplingMatrix {
  Eigen::MatrixXd entries;
  CouplingFamily family = CouplingFamily::General;
  double kappa1 = 0.0;  // mean-field kappa, or ring kappa^1
  double kappa2 = 0.0;

  int n() const { return static_cast<int>(entries.rows()); }
};

/// Throws a config error naming the first row whose sum is off by more than tol.
void check_row_sums(const Eigen::MatrixXd& G, double tol = 1e-12);

CouplingMatrix mean_field(int n, double kappa);
CouplingMatrix ring(int n, double kappa1, double kappa2);
std::vector<cplx> ring_spectrum(int n, double kappa1, double kappa2);
CouplingMatrix general_coupling(Eigen::MatrixXd G);

/// n rows of n comma-separated reals.
CouplingMatrix load_coupling_csv(const std::string& path);

/// Eigenvalues, sorted by descending real part then imaginary part.
std::vector<cplx> eigenvalues(const Eigen::MatrixXd& G);

struct SpectrumSigma {
  std::vector<cplx> full;
  std::vector<cplx> minus_one;
  bool one_is_simple = false;
};

/// Removes one copy of `value` when it is algebraically simple (cluster of size 1
/// within tol). tol <= 0 selects 1e-8 * ||G||.
SpectrumSigma sigma_minus(const Eigen::MatrixXd& G, double value, double tol = 0.0);
SpectrumSigma sigma_minus_one(const Eigen::MatrixXd& G, double tol = 0.0);

struct StructureReport {
  bool row_sum_ok = false;
  bool irreducible = false;
  bool nonneg_entries = false;
  bool symmetric = false;
  bool positive_semidefinite = false;
  bool positive_definite = false;
  double min_sym_eigenvalue = 0.0;
  std::vector<std::string> warnings;

  bool doubly_nonnegative() const { return nonneg_entries && positive_semidefinite; }
};

StructureReport structure_check(const Eigen::MatrixXd& G, double tol = 1e-10);

/// Real (kappa1, kappa2) with z_j = target for the ring eigenvalue formula.
std::pair<double, double> solve_ring_kappa(int n, int j, cplx target);

}  // namespace sopslab
