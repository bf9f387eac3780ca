#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sopslab/csv.hpp"
#include "sopslab/errors.hpp"
#include "sopslab/sops.hpp"

using namespace sopslab;

namespace {

const Sops& orbit20() {
  static const Sops s = [] {
    SopsOptions o;
    o.h = 1.0 / 500;
    return find_sops(0.0, 20.0, tanh_feedback(2.0, 1.0), o);
  }();
  return s;
}

}  // namespace

TEST_CASE("orbit is phase fixed and periodic") {
  const auto& s = orbit20();
  CHECK(s.p[0] == 0.0);
  CHECK(s.pdot[0] > 0.0);
  CHECK(s.residual < 1e-6);
  CHECK(s.p.size() == s.pdot.size());
  CHECK(static_cast<double>(s.p.size() - 1) * s.h < s.omega);
  const auto orbit = s.orbit();
  for (double t : {-0.5, 0.7, 2.1, 3.3}) {
    CHECK(orbit.eval(t + s.omega) == doctest::Approx(orbit.eval(t)).epsilon(1e-9));
  }
}

TEST_CASE("orbit is slowly oscillating and near the limit profile") {
  const auto& s = orbit20();
  const auto p = make_profile(0.0, 2.0, 1.0);
  CHECK(s.z1 > 0.0);
  CHECK(s.z2 - s.z1 > 1.0);
  CHECK(s.omega == doctest::Approx(s.z2 + 1.0));
  CHECK(std::abs(s.omega - p.omega_star) < 0.1);
  const auto r = limit_residuals(s, p, p.q1 / 4.0);
  CHECK(r.omega == doctest::Approx(std::abs(s.omega - 4.5)));
  CHECK(r.z1 < 0.15);
  CHECK(r.profile < 0.2);
  CHECK_THROWS_AS(limit_residuals(s, p, p.q1), Error);
}

TEST_CASE("property: zero crossings of the stored orbit") {
  const auto& s = orbit20();
  int sign_changes = 0;
  for (std::size_t k = 1; k < s.p.size(); ++k) {
    if ((s.p[k - 1] > 0.0) != (s.p[k] > 0.0)) ++sign_changes;
  }
  CHECK(sign_changes == 2);
  const auto t = s.times();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] > -1.0 + 1e-9 && t[k] < s.z1 - 1e-2) CHECK(s.p[k] > 0.0);
    if (t[k] > s.z1 + 1e-2 && t[k] < s.z2 - 1e-2) CHECK(s.p[k] < 0.0);
    if (t[k] > s.z2 + 1e-2) CHECK(s.p[k] > 0.0);
  }
}

TEST_CASE("normalized orbit divides by beta") {
  const auto& s = orbit20();
  const auto n = normalize_sops(s);
  CHECK(n[s.p.size() / 3] == doctest::Approx(s.p[s.p.size() / 3] / 20.0));
}

TEST_CASE("no orbit search at or below the Hopf threshold") {
  const auto f = tanh_feedback(2.0, 1.0);
  CHECK_THROWS_AS(find_sops(0.0, 1.5, f), Error);
  try {
    find_sops(0.0, 1.0, f);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("exhausted search reports the best residual") {
  SopsOptions o;
  o.h = 1.0 / 100;
  o.tol = 1e-14;
  o.transient = 0.0;
  o.max_time = 30.0;
  try {
    find_sops(0.0, 10.0, tanh_feedback(2.0, 1.0), o);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
    CHECK(e.best_residual() > 0.0);
    CHECK(std::isfinite(e.best_residual()));
  }
}

TEST_CASE("bad options are configuration errors") {
  SopsOptions o;
  o.tol = 0.0;
  CHECK_THROWS_AS(find_sops(0.0, 10.0, tanh_feedback(2.0, 1.0), o), Error);
  o.tol = 1e-6;
  o.h = 0.3;
  CHECK_THROWS_AS(find_sops(0.0, 10.0, tanh_feedback(2.0, 1.0), o), Error);
}

TEST_CASE("orbit files round trip") {
  const auto& s = orbit20();
  const auto dir = std::filesystem::temp_directory_path() / "sopslab_test_sops";
  std::filesystem::create_directories(dir);
  const auto csv_path = (dir / "sops.csv").string();
  write_sops_csv(s, csv_path, (dir / "sops.json").string());
  const auto t = csv::read(csv_path, true);
  CHECK(t.header == std::vector<std::string>{"t", "p", "pdot"});
  REQUIRE(t.rows.size() == s.p.size());
  CHECK(t.rows[17][1] == s.p[17]);
  CHECK(t.rows[17][2] == s.pdot[17]);
  CHECK(std::filesystem::exists(dir / "sops.json"));
}
