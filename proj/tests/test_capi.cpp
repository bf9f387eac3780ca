#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "sopslab/sopslab.h"

TEST_CASE("version and status names") {
  CHECK(std::string(sopslab_version()) == "0.1.0");
  CHECK(std::string(sopslab_status_name(SOPSLAB_OK)) != "");
  CHECK(std::string(sopslab_status_name(SOPSLAB_ERR_BUFFER_TOO_SMALL)) == "buffer too small");
}

TEST_CASE("profile through the C surface") {
  sopslab_profile p;
  REQUIRE(sopslab_make_profile(0.0, 2.0, 1.0, &p) == SOPSLAB_OK);
  CHECK(p.omega_star == doctest::Approx(4.5));
  CHECK(p.q1 == doctest::Approx(0.5));
  CHECK(p.delta_disc == doctest::Approx(-7.0 / 36.0));
  double re = 0, im = 0;
  REQUIRE(sopslab_nu_star(&p, 0.3, 0.0, &re, &im) == SOPSLAB_OK);
  CHECK(re == doctest::Approx(0.055));
  CHECK(im == 0.0);
  double beta = 0;
  REQUIRE(sopslab_hopf_beta(0.125, -1.0, &beta) == SOPSLAB_OK);
  CHECK(beta == doctest::Approx(1.6513044434714033).epsilon(1e-12));
  int tag = -1;
  double mod = 0;
  REQUIRE(sopslab_cassini_classify(&p, 1.0, 0.0, 0.1, &tag, &mod) == SOPSLAB_OK);
  CHECK(tag == 2);
  CHECK(mod == doctest::Approx(1.0));
}

TEST_CASE("errors carry status and message") {
  sopslab_profile p;
  CHECK(sopslab_make_profile(-1.0, 2.0, 1.0, &p) == SOPSLAB_ERR_DOMAIN);
  CHECK(std::strlen(sopslab_last_error()) > 0);
  CHECK(sopslab_make_profile(0.0, 2.0, 1.0, nullptr) == SOPSLAB_ERR_INVALID_ARGUMENT);
  REQUIRE(sopslab_make_profile(0.0, 2.0, 1.0, &p) == SOPSLAB_OK);
  CHECK(std::string(sopslab_last_error()).empty());
  sopslab_coupling* c = nullptr;
  CHECK(sopslab_coupling_load_csv("/nonexistent/g.csv", &c) == SOPSLAB_ERR_IO);
  CHECK(c == nullptr);
  const double bad[4] = {0.5, 0.6, 0.5, 0.5};
  CHECK(sopslab_coupling_from_rows(2, bad, &c) == SOPSLAB_ERR_CONFIG);
}

TEST_CASE("buffer pattern") {
  size_t count = 0;
  REQUIRE(sopslab_ring_spectrum(5, 0.3, 0.1, nullptr, nullptr, 0, &count) == SOPSLAB_OK);
  CHECK(count == 5);
  std::vector<double> re(2), im(2);
  CHECK(sopslab_ring_spectrum(5, 0.3, 0.1, re.data(), im.data(), 2, &count) == SOPSLAB_ERR_BUFFER_TOO_SMALL);
  re.resize(5);
  im.resize(5);
  REQUIRE(sopslab_ring_spectrum(5, 0.3, 0.1, re.data(), im.data(), 5, &count) == SOPSLAB_OK);
  CHECK(re[0] == 1.0);
  CHECK(im[0] == 0.0);
}

TEST_CASE("coupling handles") {
  sopslab_coupling* c = nullptr;
  REQUIRE(sopslab_coupling_mean_field(3, 0.5, &c) == SOPSLAB_OK);
  int n = 0;
  REQUIRE(sopslab_coupling_size(c, &n) == SOPSLAB_OK);
  CHECK(n == 3);
  double entries[9];
  size_t count = 0;
  REQUIRE(sopslab_coupling_entries(c, entries, 9, &count) == SOPSLAB_OK);
  CHECK(entries[1] == doctest::Approx(0.5 / 3.0));
  double re[3], im[3];
  int simple = 0;
  REQUIRE(sopslab_coupling_sigma_minus_one(c, re, im, 3, &count, &simple) == SOPSLAB_OK);
  CHECK(count == 2);
  CHECK(simple == 1);
  CHECK(re[0] == doctest::Approx(0.5));
  sopslab_structure st;
  REQUIRE(sopslab_coupling_structure(c, &st) == SOPSLAB_OK);
  CHECK(st.irreducible == 1);
  CHECK(st.nonneg_entries == 1);
  sopslab_coupling_free(c);
  sopslab_coupling_free(nullptr);

  double k1 = 0, k2 = 0;
  REQUIRE(sopslab_solve_ring_kappa(3, 1, 0.8, 0.2, &k1, &k2) == SOPSLAB_OK);
  CHECK(k1 == doctest::Approx(0.36427344100918364));
  CHECK(k2 == doctest::Approx(-0.097606774342516972));
}

TEST_CASE("classification through the C surface") {
  sopslab_profile p;
  REQUIRE(sopslab_make_profile(0.0, 2.0, 1.0, &p) == SOPSLAB_OK);
  sopslab_verdict* v = nullptr;
  REQUIRE(sopslab_classify_mean_field(&p, 3, 0.5, 0.0, &v) == SOPSLAB_OK);
  sopslab_verdict_kind kind;
  REQUIRE(sopslab_verdict_kind_of(v, &kind) == SOPSLAB_OK);
  CHECK(kind == SOPSLAB_STABLE);
  size_t need = 0;
  REQUIRE(sopslab_verdict_rule(v, nullptr, 0, &need) == SOPSLAB_OK);
  std::string rule(need, '\0');
  REQUIRE(sopslab_verdict_rule(v, rule.data(), need, &need) == SOPSLAB_OK);
  CHECK(std::string(rule.c_str()) == "mean-field/negative-discriminant");
  REQUIRE(sopslab_verdict_json(v, nullptr, 0, &need) == SOPSLAB_OK);
  CHECK(need > 10);
  sopslab_verdict_free(v);

  const double H[9] = {-1, 1, 0, 1, -2, 1, 0, 1, -1};
  REQUIRE(sopslab_classify_weak(3, H, -1, &v) == SOPSLAB_OK);
  REQUIRE(sopslab_verdict_kind_of(v, &kind) == SOPSLAB_OK);
  CHECK(kind == SOPSLAB_UNSTABLE);
  size_t wc = 0;
  REQUIRE(sopslab_verdict_witness_count(v, &wc) == SOPSLAB_OK);
  CHECK(wc == 2);
  sopslab_verdict_free(v);

  CHECK(sopslab_classify_mean_field(&p, 3, 1.0, 0.0, &v) == SOPSLAB_ERR_PRECONDITION);
}

TEST_CASE("orbit, multipliers and simulation through the C surface") {
  sopslab_feedback* f = nullptr;
  REQUIRE(sopslab_feedback_tanh(2.0, 1.0, &f) == SOPSLAB_OK);
  double a = 0, b = 0, fp = 0;
  REQUIRE(sopslab_feedback_limits(f, &a, &b, &fp) == SOPSLAB_OK);
  CHECK(fp == -1.0);
  int ok = 0;
  size_t need = 0;
  REQUIRE(sopslab_feedback_validate(f, 100.0, 1e-6, &ok, nullptr, 0, &need) == SOPSLAB_OK);
  CHECK(ok == 1);

  sopslab_sops_options o;
  sopslab_sops_options_default(&o);
  o.h = 1.0 / 500;
  sopslab_sops* s = nullptr;
  CHECK(sopslab_sops_find(0.0, 1.0, f, &o, &s) == SOPSLAB_ERR_PRECONDITION);
  REQUIRE(sopslab_sops_find(0.0, 20.0, f, &o, &s) == SOPSLAB_OK);
  sopslab_sops_summary sum;
  REQUIRE(sopslab_sops_summary_of(s, &sum) == SOPSLAB_OK);
  CHECK(sum.omega == doctest::Approx(4.5).epsilon(0.02));
  double re = 0, im = 0, rad = 0;
  int unique = 0;
  REQUIRE(sopslab_dominant_multiplier(s, 1.0, 0.0, 32, &re, &im, &rad, &unique) == SOPSLAB_OK);
  CHECK(re == doctest::Approx(1.0).epsilon(0.02));

  sopslab_coupling* c = nullptr;
  REQUIRE(sopslab_coupling_ring(3, 0.2, 0.2, &c) == SOPSLAB_OK);
  const double offset[3] = {0.0, 0.05, -0.05};
  const double slope[3] = {2.0, 2.0, 2.0};
  sopslab_trajectory* tr = nullptr;
  REQUIRE(sopslab_simulate_ramp(0.0, 2.0, f, c, offset, slope, 20.0, 0.01, &tr) == SOPSLAB_OK);
  int dim = 0;
  double t_end = 0;
  REQUIRE(sopslab_trajectory_dim(tr, &dim, &t_end) == SOPSLAB_OK);
  CHECK(dim == 3);
  CHECK(t_end == doctest::Approx(20.0));
  const double times[3] = {0.0, 10.0, 20.0};
  double g[3];
  REQUIRE(sopslab_sync_measure(tr, 4.5, times, 3, g) == SOPSLAB_OK);
  CHECK(g[0] == doctest::Approx(0.1));
  CHECK(g[2] < g[0]);
  sopslab_trajectory* rejected = nullptr;
  CHECK(sopslab_simulate_ramp(0.0, 2.0, f, c, offset, slope, 20.0, 0.3, &rejected) == SOPSLAB_ERR_CONFIG);
  CHECK(rejected == nullptr);

  sopslab_trajectory_free(tr);
  sopslab_coupling_free(c);
  sopslab_sops_free(s);
  sopslab_feedback_free(f);
}
