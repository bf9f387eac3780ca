#include "sopslab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"

namespace sopslab {

double default_start_phase(const Sops& s) {
  return -make_profile(s.alpha, s.feedback.a, s.feedback.b).q1 / 2.0;
}

namespace {

void check_orbit(const Sops& s, int m) {
  require(m >= 16, ErrorKind::Domain, "monodromy grid needs m >= 16");
  require(s.omega > 0.0 && s.h > 0.0 && s.p.size() >= 2 && s.p.size() == s.pdot.size(),
          ErrorKind::Domain, "degenerate periodic orbit");
  for (double v : s.p) require(std::isfinite(v), ErrorKind::Domain, "orbit samples are not finite");
}

// Columns of the identity: block c of width n starts as e_k hat_i with c = k*(m+1) + i.
HistorySegment<cplx> hat_basis(int n, int m) {
  const int cols = n * (m + 1);
  const int dim = n * cols;
  std::vector<cplx> samples(static_cast<std::size_t>(m + 1) * dim, cplx(0.0));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= m; ++i) {
      const int c = k * (m + 1) + i;
      samples[static_cast<std::size_t>(i) * dim + c * n + k] = 1.0;
    }
  }
  return HistorySegment<cplx>::tabulated(dim, std::move(samples));
}

MonodromyMatrix assemble(const Eigen::MatrixXcd& L, const Sops& s, int m, double start_phase) {
  check_orbit(s, m);
  const int n = static_cast<int>(L.rows());
  const int side = n * (m + 1);
  const PeriodicOrbit orbit = s.orbit();
  const auto traj = integrate_variational_system(L, view_of(orbit), s.alpha, s.beta, s.feedback,
                                                 start_phase, hat_basis(n, m), s.omega, s.h,
                                                 VariationalOptions{false});
  MonodromyMatrix M;
  M.m = m;
  M.n = n;
  M.start_phase = start_phase;
  M.h = s.h;
  M.entries.resize(side, side);
  std::vector<cplx> y(traj.dim());
  for (int i = 0; i <= m; ++i) {
    traj.eval(start_phase + s.omega - 1.0 + static_cast<double>(i) / m, y.data());
    for (int c = 0; c < side; ++c) {
      for (int j = 0; j < n; ++j) M.entries(j * (m + 1) + i, c) = y[c * n + j];
    }
  }
  return M;
}

}  // namespace

MonodromyMatrix monodromy_matrix(cplx lambda, const Sops& s, int m, double start_phase) {
  Eigen::MatrixXcd L(1, 1);
  L(0, 0) = lambda;
  auto M = assemble(L, s, m, start_phase);
  M.lambda = lambda;
  return M;
}

MonodromyMatrix monodromy_matrix(cplx lambda, const Sops& s, int m) {
  return monodromy_matrix(lambda, s, m, default_start_phase(s));
}

namespace {

// Nonzero eigenvalues of U S V* coincide with those of S_r V_r* U_r.
std::vector<cplx> compressed_eigenvalues(const Eigen::MatrixXcd& M) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-13 * sv(0)) ++r;
  std::vector<cplx> out(static_cast<std::size_t>(M.rows()), cplx(0.0));
  if (r == 0) return out;
  const Eigen::MatrixXcd K = sv.head(r).asDiagonal() * svd.matrixV().leftCols(r).adjoint() *
                             svd.matrixU().leftCols(r);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> small(K, false);
  if (small.info() != Eigen::Success) {
    std::ostringstream m;
    m << "eigensolver did not converge (size " << M.rows() << ", norm " << M.norm() << ", numerical rank "
      << r << ", condition " << sv(0) / sv(sv.size() - 1) << ")";
    fail(ErrorKind::Numerical, m.str());
  }
  for (Eigen::Index i = 0; i < r; ++i) out[i] = small.eigenvalues()(i);
  return out;
}

std::vector<cplx> eigenvalues_of(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, false);
  if (solver.info() != Eigen::Success) {
    solver.setMaxIterations(1000 * M.rows());
    solver.compute(M, false);
  }
  if (solver.info() != Eigen::Success) return compressed_eigenvalues(M);
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

}  // namespace

SpectrumReport spectrum(const Eigen::MatrixXcd& M, double floor) {
  require(M.rows() == M.cols() && M.rows() > 0, ErrorKind::Domain, "spectrum needs a square matrix");
  require(M.allFinite(), ErrorKind::Numerical, "matrix has non-finite entries");
  std::vector<cplx> all = eigenvalues_of(M);
  std::stable_sort(all.begin(), all.end(), [](cplx x, cplx y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    return x.imag() > y.imag();
  });
  SpectrumReport r;
  r.spectral_radius = std::abs(all.front());
  for (cplx z : all) {
    if (std::abs(z) >= floor) r.eigenvalues.push_back(z);
    else ++r.truncation;
  }
  const double gap = 1e-6;
  if (all.size() == 1 || std::abs(all[0]) > (1.0 + gap) * std::abs(all[1])) r.dominant = all[0];
  return r;
}

SpectrumReport spectrum(const MonodromyMatrix& M, double floor) { return spectrum(M.entries, floor); }

DominantMultiplier dominant_multiplier(cplx lambda, const Sops& s, int m, double start_phase) {
  const auto r = spectrum(monodromy_matrix(lambda, s, m, start_phase), 0.0);
  DominantMultiplier d;
  d.spectral_radius = r.spectral_radius;
  if (r.dominant) {
    d.value = *r.dominant;
    d.unique = true;
  } else {
    // Tied top: report the member with nonnegative imaginary part.
    d.value = r.eigenvalues.front();
    const double top = std::abs(d.value);
    for (cplx z : r.eigenvalues) {
      if (std::abs(z) < top / (1.0 + 1e-6)) break;
      if (z.imag() >= 0.0) {
        d.value = z;
        break;
      }
    }
  }
  return d;
}

DominantMultiplier dominant_multiplier(cplx lambda, const Sops& s, int m) {
  return dominant_multiplier(lambda, s, m, default_start_phase(s));
}

MonodromyMatrix coupled_monodromy(const Eigen::MatrixXd& G, const Sops& s, int m, double start_phase) {
  require(G.rows() == G.cols() && G.rows() >= 1, ErrorKind::Config, "coupling matrix must be square");
  for (Eigen::Index j = 0; j < G.rows(); ++j) {
    require(std::abs(G.row(j).sum() - 1.0) <= 1e-12, ErrorKind::Config,
            "coupling matrix rows must sum to 1");
  }
  const auto side = G.rows() * (m + 1);
  if (side > 2000) {
    std::ostringstream msg;
    msg << "coupled monodromy side n(m+1) = " << side << " exceeds 2000";
    fail(ErrorKind::Config, msg.str());
  }
  return assemble(G.cast<cplx>(), s, m, start_phase);
}

MonodromyMatrix coupled_monodromy(const Eigen::MatrixXd& G, const Sops& s, int m) {
  return coupled_monodromy(G, s, m, default_start_phase(s));
}

double hausdorff_distance(const std::vector<cplx>& a_floored, const std::vector<cplx>& a_full,
                          const std::vector<cplx>& b_floored, const std::vector<cplx>& b_full) {
  auto directed = [](const std::vector<cplx>& from, const std::vector<cplx>& to) {
    double worst = 0.0;
    for (cplx z : from) {
      double best = std::numeric_limits<double>::infinity();
      for (cplx w : to) best = std::min(best, std::abs(z - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a_floored, b_full), directed(b_floored, a_full));
}

DecompositionReport decomposition_check(const Eigen::MatrixXd& G, const Sops& s, int m, double tol,
                                        double floor) {
  const double phase = default_start_phase(s);
  const auto coupled = spectrum(coupled_monodromy(G, s, m, phase), 0.0);

  Eigen::EigenSolver<Eigen::MatrixXd> gs(G, false);
  require(gs.info() == Eigen::Success, ErrorKind::Numerical, "coupling eigensolve failed");
  std::vector<cplx> lambdas;
  for (Eigen::Index i = 0; i < gs.eigenvalues().size(); ++i) {
    const cplx z = gs.eigenvalues()(i);
    const bool seen = std::any_of(lambdas.begin(), lambdas.end(),
                                  [&](cplx w) { return std::abs(w - z) < 1e-10; });
    if (!seen) lambdas.push_back(z);
  }
  std::vector<cplx> scalar_full;
  for (cplx lambda : lambdas) {
    const auto r = spectrum(monodromy_matrix(lambda, s, m, phase), 0.0);
    scalar_full.insert(scalar_full.end(), r.eigenvalues.begin(), r.eigenvalues.end());
  }

  DecompositionReport rep;
  for (cplx z : coupled.eigenvalues) {
    if (std::abs(z) >= floor) rep.coupled.push_back(z);
  }
  for (cplx z : scalar_full) {
    if (std::abs(z) >= floor) rep.scalar_union.push_back(z);
  }
  rep.hausdorff = hausdorff_distance(rep.coupled, coupled.eigenvalues, rep.scalar_union, scalar_full);
  rep.passed = rep.hausdorff < tol;
  return rep;
}

void write_spectrum_csv(const SpectrumReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  csv::write_header(out, {"re", "im", "modulus"});
  for (cplx z : r.eigenvalues) csv::write_row(out, {z.real(), z.imag(), std::abs(z)});
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

void write_matrix_csv(const Eigen::MatrixXcd& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      row.push_back(M(i, j).real());
      row.push_back(M(i, j).imag());
    }
    csv::write_row(out, row);
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace sopslab
