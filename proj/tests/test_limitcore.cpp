#include "doctest.h"

#include <cmath>
#include <random>

#include "sopslab/errors.hpp"
#include "sopslab/limitcore.hpp"

using namespace sopslab;

namespace {

cplx nu_closed(cplx l, double r1, double r2) { return (l - r1) * (l - r2) / ((1.0 - r1) * (1.0 - r2)); }

}  // namespace

TEST_CASE("profile constants for full symmetry") {
  const auto p = make_profile(0.0, 1.0, 1.0);
  CHECK(p.rho1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.rho2 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.q1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.q2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.omega_star == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(p.delta_disc == doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("profile constants at alpha 0, a 2, b 1") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  CHECK(p.rho1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.rho2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.q1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.q2 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.omega_star == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(p.r0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.delta_disc == doctest::Approx(-7.0 / 36.0).epsilon(1e-14));
}

TEST_CASE("profile constants at alpha 1, a 2, b 1") {
  // mpmath, 30 digits
  const auto p = make_profile(1.0, 2.0, 1.0);
  CHECK(p.q1 == doctest::Approx(0.27464263688015504).epsilon(1e-13));
  CHECK(p.q2 == doctest::Approx(0.81723965540207759).epsilon(1e-13));
  CHECK(p.omega_star == doctest::Approx(3.0918822922822326).epsilon(1e-13));
  CHECK(p.delta_disc == doctest::Approx(-0.65843575279123239).epsilon(1e-13));
}

TEST_CASE("profile constants at alpha 1/8, a 24, b 1") {
  const auto p = make_profile(0.125, 24.0, 1.0);
  CHECK(p.rho1 == doctest::Approx(0.84719702648121156).epsilon(1e-14));
  CHECK(p.rho2 == doctest::Approx(0.035299876103383817).epsilon(1e-14));
  CHECK(p.q1 == doctest::Approx(0.039072129158560453).epsilon(1e-12));
  CHECK(p.q2 == doctest::Approx(10.722159061045051).epsilon(1e-13));
  CHECK(p.omega_star == doctest::Approx(12.761231190203612).epsilon(1e-13));
  CHECK(p.r0 == doctest::Approx(0.4412484512922977).epsilon(1e-14));
  CHECK(p.delta_disc == doctest::Approx(0.017385198212562683).epsilon(1e-12));
}

TEST_CASE("swapped tails are normalized") {
  const auto p = make_profile(0.3, 1.0, 5.0);
  CHECK(p.swapped);
  CHECK(p.a >= p.b);
  CHECK(p.q1 <= p.q2);
}

TEST_CASE("profile rejects bad arguments") {
  CHECK_THROWS_AS(make_profile(-0.1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(make_profile(0.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(make_profile(0.0, 1.0, NAN), Error);
}

TEST_CASE("nu star values") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  CHECK(std::abs(nu_star(0.3, p) - cplx(0.055)) < 1e-14);
  CHECK(std::abs(nu_star(0.6, p) - cplx(-0.08)) < 1e-14);
  CHECK(std::abs(nu_star(cplx(0.5, 0.9), p) - cplx(-3.77, 0.0)) < 1e-13);
  CHECK(std::abs(nu_star(0.0, p) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(nu_star(-1.0, p) - cplx(10.0)) < 1e-13);
  CHECK(std::abs(nu_star(1.0, p) - cplx(1.0)) < 1e-15);
}

TEST_CASE("nu star derivative at 0 and 1") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  const double d0 = -1.0 / ((1 - p.rho1) * (1 - p.rho2));
  CHECK(nu_star_prime(0.0, p).real() == doctest::Approx(d0).epsilon(1e-14));
  CHECK(d0 <= -4.0);
  const double d1 = 1.0 / (1 - p.rho1) + 1.0 / (1 - p.rho2);
  CHECK(nu_star_prime(1.0, p).real() == doctest::Approx(d1).epsilon(1e-14));
}

TEST_CASE("property: nu star invariants over random profiles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ut(0.1, 30.0), uz(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = make_profile(ua(rng), ut(rng), ut(rng));
    CHECK(p.rho1 + p.rho2 == doctest::Approx(std::exp(-p.alpha)).epsilon(1e-14));
    CHECK(std::abs(nu_star(p.rho1, p)) < 1e-14);
    CHECK(std::abs(nu_star(p.rho2, p)) < 1e-14);
    CHECK(p.omega_star == doctest::Approx(p.q1 + p.q2 + 2.0).epsilon(1e-14));
    CHECK(p.q1 <= p.q2);
    const cplx l(uz(rng), uz(rng));
    CHECK(std::abs(nu_star(std::conj(l), p) - std::conj(nu_star(l, p))) < 1e-13);
    CHECK(std::abs(nu_star(l, p) - nu_closed(l, p.rho1, p.rho2)) < 1e-12 * (1 + std::abs(nu_star(l, p))));
    const double r = uz(rng);
    CHECK(std::abs(nu_star_real_form(r, p) - nu_star(r, p).real()) < 1e-12);
  }
}

TEST_CASE("property: alpha 0 gives nu star below 1 on (0, 1)") {
  for (double a : {1.0, 2.0, 7.5}) {
    const auto p = make_profile(0.0, a, 1.0);
    for (int i = 1; i < 1000; ++i) {
      const double r = i / 1000.0;
      CHECK(nu_star(r, p).real() < 1.0);
    }
  }
}

TEST_CASE("alpha 0 continuity of q1 and q2") {
  const auto p0 = make_profile(0.0, 3.0, 2.0);
  const auto pe = make_profile(1e-7, 3.0, 2.0);
  CHECK(pe.q1 == doctest::Approx(p0.q1).epsilon(1e-6));
  CHECK(pe.q2 == doctest::Approx(p0.q2).epsilon(1e-6));
}

TEST_CASE("limiting profile zeros and plateau values") {
  const auto p = make_profile(0.5, 3.0, 1.0);
  CHECK(std::abs(pbar_star(-1.0, p)) < 1e-14);
  CHECK(std::abs(pbar_star(p.q1, p)) < 1e-13);
  CHECK(std::abs(pbar_star(-1.0 + p.omega_star, p)) < 1e-13);
  CHECK(h_star(-0.5, p) == doctest::Approx(-p.a));
  CHECK(h_star(p.q1 + 0.5, p) == doctest::Approx(p.b));
  const double t = 0.2;
  const double d = (pbar_star(t + 1e-6, p) - pbar_star(t - 1e-6, p)) / 2e-6;
  CHECK(pbar_star_dot(t, p) == doctest::Approx(d).epsilon(1e-6));
}

TEST_CASE("limit measure atoms") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  const auto atoms = mu_star_atoms(-2.0, 2.0 * p.omega_star, p);
  REQUIRE(atoms.size() == 5);
  for (const auto& at : atoms) {
    const bool at_minus_one = std::abs(std::remainder(at.time + 1.0, p.omega_star)) < 1e-12;
    const bool at_q1 = std::abs(std::remainder(at.time - p.q1, p.omega_star)) < 1e-12;
    CHECK((at_minus_one || at_q1));
    if (at_minus_one) CHECK(at.weight == doctest::Approx(-(1 + p.a / p.b)));
    if (at_q1) CHECK(at.weight == doctest::Approx(-(1 + p.b / p.a)));
  }
}

TEST_CASE("cassini classification") {
  const auto p = make_profile(0.125, 24.0, 1.0);
  const auto one = cassini_classify(1.0, 0.1, p);
  CHECK(one.tag == CassiniTag::Indeterminate);
  CHECK(one.modulus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cassini_classify(0.62, 0.05, p).tag == CassiniTag::StableRegion);
  CHECK(cassini_classify(1.3, 0.05, p).tag == CassiniTag::UnstableRegion);
}

TEST_CASE("cassini boundary lies on the level set") {
  const auto p = make_profile(0.125, 24.0, 1.0);
  for (double delta : {0.0, 0.1}) {
    const auto c = cassini_boundary(delta, 256, p);
    REQUIRE(!c.points.empty());
    for (auto z : c.points) CHECK(std::abs(std::abs(nu_star(z, p)) - (1.0 - delta)) < 1e-10);
  }
  const auto c0 = cassini_boundary(0.0, 256, p);
  bool has_one = false;
  for (auto z : c0.points) has_one |= std::abs(z - cplx(1.0)) < 1e-9;
  CHECK(has_one);
  CHECK_THROWS_AS(cassini_boundary(0.1, 4, p), Error);
}

TEST_CASE("nu star two-form identity on a grid") {
  for (double alpha : {0.0, 0.125, 1.0}) {
    const auto p = make_profile(alpha, 24.0, 1.0);
    for (int i = -200; i <= 400; ++i) {
      const double r = i / 200.0;
      const double form = -1.0 - (p.delta_disc - (r - p.r0) * (r - p.r0)) / ((1 - p.rho1) * (1 - p.rho2));
      CHECK(std::abs(form - nu_star(r, p).real()) < 1e-12);
    }
  }
}

TEST_CASE("region predicates near 1 and 0") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  CHECK(region_A1(0.999, p) == RegionA1::InA_less1);
  CHECK(region_A1(1.001, p) == RegionA1::InA_greater1);
  CHECK(region_A0(0.001, p) == RegionA0::InA_greater0);
  CHECK(region_A0(-0.001, p) == RegionA0::InA_less0);
  CHECK(region_A1(cplx(-5.0, 3.0), p) == RegionA1::Neither);
  CHECK_THROWS_AS(region_A0(0.001, make_profile(0.5, 2.0, 1.0)), Error);
}

TEST_CASE("property: region predicates agree with nu star") {
  const auto p = make_profile(0.0, 2.0, 1.0);
  const auto k1 = region_constants_A1(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const cplx z = 1.0 + 0.2 * cplx(u(rng), u(rng));
    const auto r = region_A1(z, k1);
    if (r == RegionA1::InA_less1) CHECK(std::abs(nu_star(z, p)) < 1.0);
    if (r == RegionA1::InA_greater1) CHECK(std::abs(nu_star(z, p)) > 1.0);
  }
}

TEST_CASE("limiting variational solution pieces") {
  const auto p = make_profile(0.3, 2.0, 1.0);
  const double s = -p.q1 / 2.0;
  const cplx lambda(0.4, 0.3);
  const InitialSegment psi = [](double th) { return cplx(1.0 + 0.5 * th, 0.2 * th * th); };
  const cplx y0 = psi(0.0) * std::exp(p.alpha * s) - lambda * psi(-1.0 - s) * (1.0 + p.a / p.b);
  CHECK(std::abs(limiting_variational_solve(lambda, s, psi, 0.0, p) - y0) < 1e-12);
  const cplx yq = -y0 * (lambda - p.rho1) / (1.0 - p.rho2);
  CHECK(std::abs(limiting_variational_solve(lambda, s, psi, p.q1 + 1.0, p) - yq) < 1e-12);
  const double t = p.q1 + 2.0;
  CHECK(std::abs(limiting_variational_solve(lambda, s, psi, t, p) - yq * std::exp(-p.alpha * (t - p.q1 - 1.0))) <
        1e-12);
  CHECK_THROWS_AS(limiting_variational_solve(lambda, 0.1, psi, 0.0, p), Error);
}

TEST_CASE("property: limiting monodromy equals nu star") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double alpha : {0.0, 0.125, 1.0}) {
    const auto p = make_profile(alpha, 2.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const cplx l(u(rng), u(rng));
      const cplx nu = nu_star(l, p);
      CHECK(std::abs(limiting_monodromy_dominant(l, -p.q1 / 2.0, p) - nu) < 1e-12 * std::max(1.0, std::abs(nu)));
    }
  }
  const auto p = make_profile(0.2, 3.0, 1.0);
  CHECK(std::abs(limiting_monodromy_dominant(p.rho1, -p.q1 / 2.0, p)) < 1e-14);
  CHECK(std::abs(limiting_monodromy_dominant(p.rho2, -p.q1 / 2.0, p)) < 1e-14);
}

TEST_CASE("Hopf threshold") {
  CHECK(hopf_beta(0.125, -1.0) == doctest::Approx(1.6513044434714033).epsilon(1e-12));
  CHECK(hopf_beta(0.0, -1.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(hopf_beta(1.0, -1.0) == doctest::Approx(2.2618263341146514).epsilon(1e-12));
  CHECK(hopf_beta(0.0, -2.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-15));
}

TEST_CASE("property: negative discriminant for large alpha") {
  const double threshold = std::log((1.0 + std::sqrt(2.0)) / 2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(threshold + 1e-9, 5.0), ut(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(make_profile(ua(rng), ut(rng), ut(rng)).delta_disc < 0.0);
  }
}
