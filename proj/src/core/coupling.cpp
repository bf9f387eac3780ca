#include "sopslab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"

namespace sopslab {

const char* to_string(CouplingFamily f) noexcept {
  switch (f) {
    case CouplingFamily::MeanField: return "mean-field";
    case CouplingFamily::Ring: return "ring";
    case CouplingFamily::General: return "general";
  }
  return "unknown";
}

void check_row_sums(const Eigen::MatrixXd& G, double tol) {
  require(G.rows() == G.cols(), ErrorKind::Config, "coupling matrix must be square");
  require(G.rows() >= 2, ErrorKind::Config, "coupling matrix needs n >= 2");
  require(G.allFinite(), ErrorKind::Config, "coupling matrix has non-finite entries");
  for (Eigen::Index j = 0; j < G.rows(); ++j) {
    const double s = G.row(j).sum();
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream m;
      m << "row " << j << " of the coupling matrix sums to " << s << ", not 1";
      fail(ErrorKind::Config, m.str());
    }
  }
}

CouplingMatrix mean_field(int n, double kappa) {
  require(n >= 2, ErrorKind::Domain, "mean-field coupling needs n >= 2");
  require(std::isfinite(kappa), ErrorKind::Domain, "kappa must be finite");
  CouplingMatrix G;
  G.entries = Eigen::MatrixXd::Constant(n, n, kappa / n);
  G.entries.diagonal().setConstant(1.0 - (n - 1) * kappa / n);
  G.family = CouplingFamily::MeanField;
  G.kappa1 = kappa;
  return G;
}

CouplingMatrix ring(int n, double kappa1, double kappa2) {
  require(n >= 3, ErrorKind::Domain, "ring coupling needs n >= 3");
  require(std::isfinite(kappa1) && std::isfinite(kappa2), ErrorKind::Domain, "kappa must be finite");
  require(kappa1 != 0.0 || kappa2 != 0.0, ErrorKind::Domain, "ring coupling needs (kappa1, kappa2) != (0, 0)");
  CouplingMatrix G;
  G.entries = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    G.entries(j, j) = 1.0 - (kappa1 + kappa2) / 2.0;
    G.entries(j, (j + 1) % n) += kappa1 / 2.0;
    G.entries(j, (j + n - 1) % n) += kappa2 / 2.0;
  }
  G.family = CouplingFamily::Ring;
  G.kappa1 = kappa1;
  G.kappa2 = kappa2;
  return G;
}

std::vector<cplx> ring_spectrum(int n, double kappa1, double kappa2) {
  require(n >= 3, ErrorKind::Domain, "ring coupling needs n >= 3");
  std::vector<cplx> z(n);
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * j / n;
    z[j] = cplx(1.0 - (kappa1 + kappa2) / 2.0 * (1.0 - std::cos(th)),
                (kappa1 - kappa2) / 2.0 * std::sin(th));
  }
  z[0] = 1.0;
  return z;
}

CouplingMatrix general_coupling(Eigen::MatrixXd G) {
  check_row_sums(G);
  CouplingMatrix c;
  c.entries = std::move(G);
  return c;
}

CouplingMatrix load_coupling_csv(const std::string& path) {
  const auto t = csv::read(path, false);
  const auto n = t.rows.size();
  require(n >= 2, ErrorKind::Config, path + ": coupling matrix needs at least 2 rows");
  Eigen::MatrixXd G(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.rows[i].size() != n) {
      std::ostringstream m;
      m << path << ": row " << i << " has " << t.rows[i].size() << " entries, expected " << n;
      fail(ErrorKind::Config, m.str());
    }
    for (std::size_t j = 0; j < n; ++j) G(i, j) = t.rows[i][j];
  }
  return general_coupling(std::move(G));
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXd& G) {
  require(G.rows() == G.cols() && G.rows() > 0, ErrorKind::Domain, "eigenvalues need a square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> es(G, false);
  require(es.info() == Eigen::Success, ErrorKind::Numerical, "coupling eigensolve failed");
  std::vector<cplx> z(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(z.begin(), z.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return z;
}

SpectrumSigma sigma_minus(const Eigen::MatrixXd& G, double value, double tol) {
  if (tol <= 0.0) tol = 1e-8 * std::max(G.norm(), 1e-300);
  SpectrumSigma s;
  s.full = eigenvalues(G);
  std::size_t hits = 0, at = 0;
  for (std::size_t i = 0; i < s.full.size(); ++i) {
    if (std::abs(s.full[i] - value) <= tol) {
      ++hits;
      at = i;
    }
  }
  s.one_is_simple = hits == 1;
  s.minus_one = s.full;
  if (s.one_is_simple) s.minus_one.erase(s.minus_one.begin() + static_cast<std::ptrdiff_t>(at));
  return s;
}

SpectrumSigma sigma_minus_one(const Eigen::MatrixXd& G, double tol) {
  check_row_sums(G);
  return sigma_minus(G, 1.0, tol);
}

namespace {

bool strongly_connected(const Eigen::MatrixXd& G, double tol) {
  const auto n = G.rows();
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        const double w = transpose ? G(v, u) : G(u, v);
        if (!seen[v] && std::abs(w) > tol) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(false) && reach(true);
}

}  // namespace

StructureReport structure_check(const Eigen::MatrixXd& G, double tol) {
  StructureReport r;
  if (G.rows() != G.cols() || G.rows() < 1 || !G.allFinite()) {
    r.warnings.push_back("matrix is not square and finite");
    return r;
  }
  r.row_sum_ok = true;
  for (Eigen::Index j = 0; j < G.rows(); ++j) {
    if (std::abs(G.row(j).sum() - 1.0) > 1e-12) r.row_sum_ok = false;
  }
  r.irreducible = strongly_connected(G, 0.0);
  r.nonneg_entries = (G.array() >= -tol).all();
  r.symmetric = (G - G.transpose()).cwiseAbs().maxCoeff() <= tol;
  const Eigen::MatrixXd S = r.symmetric ? G : Eigen::MatrixXd((G + G.transpose()) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    r.warnings.push_back("symmetric eigensolve failed");
    return r;
  }
  r.min_sym_eigenvalue = es.eigenvalues().minCoeff();
  r.positive_semidefinite = r.min_sym_eigenvalue >= -tol;
  r.positive_definite = r.min_sym_eigenvalue > tol;
  if (!r.symmetric) {
    r.warnings.push_back("matrix is not symmetric; semidefiniteness refers to the symmetric part");
  }
  return r;
}

std::pair<double, double> solve_ring_kappa(int n, int j, cplx target) {
  require(n >= 3, ErrorKind::Domain, "ring coupling needs n >= 3");
  const double th = 2.0 * std::numbers::pi * j / n;
  const double c = std::cos(th), s = std::sin(th);
  require(1.0 - c > 1e-12, ErrorKind::Domain, "index j gives the trivial eigenvalue z_0 = 1");
  const double sum = 2.0 * (1.0 - target.real()) / (1.0 - c);
  double diff = 0.0;
  if (std::abs(s) < 1e-12) {
    require(target.imag() == 0.0, ErrorKind::Domain,
            "target has an imaginary part but sin(2 pi j / n) = 0");
  } else {
    diff = 2.0 * target.imag() / s;
  }
  return {(sum + diff) / 2.0, (sum - diff) / 2.0};
}

}  // namespace sopslab
