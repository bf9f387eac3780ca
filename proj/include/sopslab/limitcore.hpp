#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace sopslab {

using cplx = std::complex<double>;

struct LimitProfile {
  double alpha = 0.0;
  double a = 1.0;  // after normalization a >= b
  double b = 1.0;
  double rho1 = 0.5;
  double rho2 = 0.5;
  double q1 = 1.0;
  double q2 = 1.0;
  double omega_star = 4.0;
  double r0 = 0.5;
  double delta_disc = -0.25;
  bool swapped = false;  // caller passed a < b
};

LimitProfile make_profile(double alpha, double a, double b);

cplx nu_star(cplx lambda, const LimitProfile& p);
cplx nu_star_prime(cplx lambda, const LimitProfile& p);
double nu_star_real_form(double r, const LimitProfile& p);

double pbar_star(double t, const LimitProfile& p);
double pbar_star_dot(double t, const LimitProfile& p);
double h_star(double t, const LimitProfile& p);

/// Reduce t into [-1, omega_star - 1).
double wrap_phase(double t, const LimitProfile& p);

struct MeasureAtom {
  double time;
  double weight;
};

/// Atoms of the limit measure in the half-open interval (t0, t1].
std::vector<MeasureAtom> mu_star_atoms(double t0, double t1, const LimitProfile& p);

enum class CassiniTag { StableRegion, UnstableRegion, Indeterminate };

const char* to_string(CassiniTag tag) noexcept;

struct CassiniVerdict {
  CassiniTag tag;
  double modulus;
  double margin;  // distance of modulus to the nearer of 1-delta, 1+delta
};

CassiniVerdict cassini_classify(cplx lambda, double delta, const LimitProfile& p);

struct RayFailure {
  double angle;
  std::string reason;
};

struct CassiniCurve {
  std::vector<cplx> points;
  std::vector<RayFailure> failures;
  int lobes = 1;
};

/// Points on the level set |nu*| = 1 - delta.
CassiniCurve cassini_boundary(double delta, int nsamples, const LimitProfile& p);

enum class RegionA1 { InA_less1, InA_greater1, Neither };
enum class RegionA0 { InA_greater0, InA_less0, Neither };

const char* to_string(RegionA1 r) noexcept;
const char* to_string(RegionA0 r) noexcept;

struct RegionConstants {
  double eps;
  double m;
  double d;
  double delta;
  double N;
  double c;
};

RegionConstants region_constants_A1(const LimitProfile& p);
RegionConstants region_constants_A0(const LimitProfile& p);
RegionA1 region_A1(cplx lambda, const LimitProfile& p);
RegionA1 region_A1(cplx lambda, const RegionConstants& k);
RegionA0 region_A0(cplx lambda, const LimitProfile& p);
RegionA0 region_A0(cplx lambda, const RegionConstants& k);

using InitialSegment = std::function<cplx(double)>;  // theta in [-1, 0]

/// Solution of the limiting extended variational equation started at phase s.
cplx limiting_variational_solve(cplx lambda, double s, const InitialSegment& psi,
                                double t, const LimitProfile& p);

cplx limiting_F(double s, cplx lambda, cplx z1, cplx z2, const LimitProfile& p);

/// Sup-norm growth bound of the limiting variational solution over one period.
double limiting_Q(cplx lambda, const LimitProfile& p);

cplx limiting_monodromy_dominant(cplx lambda, double s, const LimitProfile& p);

double hopf_beta(double alpha, double fprime0);

}  // namespace sopslab
