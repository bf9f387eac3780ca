#include "sopslab/sopslab.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"

#include "sopslab/classify.hpp"
#include "sopslab/coupling.hpp"
#include "sopslab/ddesolve.hpp"
#include "sopslab/errors.hpp"
#include "sopslab/feedback.hpp"
#include "sopslab/floquet.hpp"
#include "sopslab/lab.hpp"
#include "sopslab/limitcore.hpp"
#include "sopslab/sops.hpp"

struct sopslab_feedback {
  sopslab::FeedbackFunction f;
};
struct sopslab_sops {
  sopslab::Sops s;
};
struct sopslab_coupling {
  sopslab::CouplingMatrix g;
};
struct sopslab_verdict {
  sopslab::StabilityVerdict v;
};
struct sopslab_trajectory {
  sopslab::Trajectory<double> tr;
};
struct sopslab_figure {
  sopslab::FigureResult r;
};

namespace {

using namespace sopslab;

thread_local std::string g_last_error;
thread_local double g_best_residual = 0.0;

sopslab_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return SOPSLAB_ERR_DOMAIN;
    case ErrorKind::Config: return SOPSLAB_ERR_CONFIG;
    case ErrorKind::Precondition: return SOPSLAB_ERR_PRECONDITION;
    case ErrorKind::Numerical: return SOPSLAB_ERR_NUMERICAL;
    case ErrorKind::NonConvergence: return SOPSLAB_ERR_NONCONVERGENCE;
    case ErrorKind::Io: return SOPSLAB_ERR_IO;
  }
  return SOPSLAB_ERR_INTERNAL;
}

sopslab_status set_error(sopslab_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class Fn>
sopslab_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const NonConvergenceError& e) {
    g_best_residual = e.best_residual();
    return set_error(SOPSLAB_ERR_NONCONVERGENCE, e.what());
  } catch (const Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SOPSLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SOPSLAB_ERR_INTERNAL, e.what());
  }
}

#define SOPSLAB_NEED(ptr)                                                    \
  do {                                                                       \
    if (!(ptr)) return set_error(SOPSLAB_ERR_INVALID_ARGUMENT, #ptr " is NULL"); \
  } while (0)

sopslab_status check_buffer(size_t need, size_t cap, size_t* count) {
  if (!count) return set_error(SOPSLAB_ERR_INVALID_ARGUMENT, "count is NULL");
  *count = need;
  if (cap < need) {
    if (cap == 0) return SOPSLAB_OK;
    return set_error(SOPSLAB_ERR_BUFFER_TOO_SMALL,
                     "buffer holds " + std::to_string(cap) + ", needs " + std::to_string(need));
  }
  return SOPSLAB_OK;
}

sopslab_status put_complex(const std::vector<cplx>& z, double* re, double* im, size_t cap, size_t* count) {
  const auto st = check_buffer(z.size(), cap, count);
  if (st != SOPSLAB_OK || cap == 0) return st;
  if (!re || !im) return set_error(SOPSLAB_ERR_INVALID_ARGUMENT, "output arrays are NULL");
  for (size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
  return SOPSLAB_OK;
}

sopslab_status put_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  const auto st = check_buffer(s.size() + 1, cap, needed);
  if (st != SOPSLAB_OK || cap == 0) return st;
  if (!buf) return set_error(SOPSLAB_ERR_INVALID_ARGUMENT, "buf is NULL");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SOPSLAB_OK;
}

LimitProfile core(const sopslab_profile* p) { return make_profile(p->alpha, p->a, p->b); }

Eigen::MatrixXd rows_to_matrix(int n, const double* entries) {
  require(n >= 1, ErrorKind::Domain, "matrix size must be >= 1");
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = entries[i * n + j];
  }
  return M;
}

template <class Handle, class Value>
sopslab_status emit(Handle** out, Value&& v) {
  *out = new Handle{std::forward<Value>(v)};
  return SOPSLAB_OK;
}

}  // namespace

extern "C" {

const char* sopslab_last_error(void) { return g_last_error.c_str(); }
double sopslab_last_best_residual(void) { return g_best_residual; }

const char* sopslab_status_name(sopslab_status s) {
  switch (s) {
    case SOPSLAB_OK: return "ok";
    case SOPSLAB_ERR_DOMAIN: return "domain error";
    case SOPSLAB_ERR_CONFIG: return "configuration error";
    case SOPSLAB_ERR_PRECONDITION: return "precondition not met";
    case SOPSLAB_ERR_NUMERICAL: return "numerical failure";
    case SOPSLAB_ERR_NONCONVERGENCE: return "no convergence";
    case SOPSLAB_ERR_IO: return "i/o error";
    case SOPSLAB_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case SOPSLAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SOPSLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sopslab_version(void) { return "0.1.0"; }

sopslab_status sopslab_make_profile(double alpha, double a, double b, sopslab_profile* out) {
  SOPSLAB_NEED(out);
  return guarded([&] {
    const auto p = make_profile(alpha, a, b);
    *out = {p.alpha, p.a, p.b, p.rho1, p.rho2, p.q1, p.q2, p.omega_star, p.r0, p.delta_disc, p.swapped ? 1 : 0};
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_nu_star(const sopslab_profile* p, double re, double im, double* out_re, double* out_im) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(out_re);
  SOPSLAB_NEED(out_im);
  return guarded([&] {
    const cplx v = nu_star(cplx(re, im), core(p));
    *out_re = v.real();
    *out_im = v.imag();
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_nu_star_level_root(const sopslab_profile* p, double level, int upper, double* out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(out);
  return guarded([&] {
    *out = nu_star_level_root(level, upper != 0, core(p));
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_hopf_beta(double alpha, double fprime0, double* out) {
  SOPSLAB_NEED(out);
  return guarded([&] {
    *out = hopf_beta(alpha, fprime0);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_limiting_dominant(const sopslab_profile* p, double re, double im, double s,
                                         double* out_re, double* out_im) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(out_re);
  SOPSLAB_NEED(out_im);
  return guarded([&] {
    const cplx v = limiting_monodromy_dominant(cplx(re, im), s, core(p));
    *out_re = v.real();
    *out_im = v.imag();
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_cassini_classify(const sopslab_profile* p, double re, double im, double delta, int* tag,
                                        double* modulus) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(tag);
  return guarded([&] {
    const auto v = cassini_classify(cplx(re, im), delta, core(p));
    *tag = static_cast<int>(v.tag);
    if (modulus) *modulus = v.modulus;
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_cassini_boundary(const sopslab_profile* p, double delta, int nsamples, double* re,
                                        double* im, size_t cap, size_t* count, int* failed_rays, int* lobes) {
  SOPSLAB_NEED(p);
  return guarded([&] {
    const auto c = cassini_boundary(delta, nsamples, core(p));
    if (failed_rays) *failed_rays = static_cast<int>(c.failures.size());
    if (lobes) *lobes = c.lobes;
    return put_complex(c.points, re, im, cap, count);
  });
}

sopslab_status sopslab_region_near_one(const sopslab_profile* p, double re, double im, int* region) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(region);
  return guarded([&] {
    *region = static_cast<int>(region_A1(cplx(re, im), core(p)));
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_region_near_zero(const sopslab_profile* p, double re, double im, int* region) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(region);
  return guarded([&] {
    *region = static_cast<int>(region_A0(cplx(re, im), core(p)));
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_feedback_tanh(double a, double b, sopslab_feedback** out) {
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, tanh_feedback(a, b)); });
}

sopslab_status sopslab_feedback_load_csv(const char* path, sopslab_feedback** out) {
  SOPSLAB_NEED(path);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, load_feedback_csv(path)); });
}

void sopslab_feedback_free(sopslab_feedback* f) { delete f; }

sopslab_status sopslab_feedback_limits(const sopslab_feedback* f, double* a, double* b, double* fprime0) {
  SOPSLAB_NEED(f);
  if (a) *a = f->f.a;
  if (b) *b = f->f.b;
  if (fprime0) *fprime0 = f->f.fprime0;
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_feedback_eval(const sopslab_feedback* f, double xi, double* value, double* deriv) {
  SOPSLAB_NEED(f);
  return guarded([&] {
    if (value) *value = f->f.eval(xi);
    if (deriv) *deriv = f->f.deriv(xi);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_feedback_validate(const sopslab_feedback* f, double half_width, double tol,
                                         int* all_passed, char* json, size_t cap, size_t* needed) {
  SOPSLAB_NEED(f);
  return guarded([&] {
    const auto rep = validate_assumption(f->f, half_width, tol);
    if (all_passed) *all_passed = rep.all_passed() ? 1 : 0;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : rep.checks) j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!needed) return SOPSLAB_OK;
    return put_string(j.dump(), json, cap, needed);
  });
}

void sopslab_sops_options_default(sopslab_sops_options* o) {
  if (!o) return;
  const SopsOptions d;
  *o = {d.h, d.tol, d.transient, d.max_time};
}

sopslab_status sopslab_sops_find(double alpha, double beta, const sopslab_feedback* f,
                                 const sopslab_sops_options* opts, sopslab_sops** out) {
  SOPSLAB_NEED(f);
  SOPSLAB_NEED(out);
  return guarded([&] {
    SopsOptions o;
    if (opts) o = {opts->h, opts->tol, opts->transient, opts->max_time};
    return emit(out, find_sops(alpha, beta, f->f, o));
  });
}

void sopslab_sops_free(sopslab_sops* s) { delete s; }

sopslab_status sopslab_sops_summary_of(const sopslab_sops* s, sopslab_sops_summary* out) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(out);
  const auto& x = s->s;
  *out = {x.alpha, x.beta, x.omega, x.z1, x.z2, x.h, x.residual, x.p.size()};
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_sops_samples(const sopslab_sops* s, double* t, double* p, double* pdot, size_t cap,
                                    size_t* count) {
  SOPSLAB_NEED(s);
  return guarded([&] {
    const auto st = check_buffer(s->s.p.size(), cap, count);
    if (st != SOPSLAB_OK || cap == 0) return st;
    const auto times = s->s.times();
    for (size_t k = 0; k < times.size(); ++k) {
      if (t) t[k] = times[k];
      if (p) p[k] = s->s.p[k];
      if (pdot) pdot[k] = s->s.pdot[k];
    }
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_sops_residuals(const sopslab_sops* s, double eps, sopslab_residuals* out) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(out);
  return guarded([&] {
    const auto prof = make_profile(s->s.alpha, s->s.feedback.a, s->s.feedback.b);
    const auto r = limit_residuals(s->s, prof, eps);
    *out = {r.z1, r.z2, r.omega, r.profile, r.derivative};
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_sops_write(const sopslab_sops* s, const char* csv_path, const char* json_path) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(csv_path);
  SOPSLAB_NEED(json_path);
  return guarded([&] {
    write_sops_csv(s->s, csv_path, json_path);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_coupling_mean_field(int n, double kappa, sopslab_coupling** out) {
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, mean_field(n, kappa)); });
}

sopslab_status sopslab_coupling_ring(int n, double kappa1, double kappa2, sopslab_coupling** out) {
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, ring(n, kappa1, kappa2)); });
}

sopslab_status sopslab_coupling_from_rows(int n, const double* entries, sopslab_coupling** out) {
  SOPSLAB_NEED(entries);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, general_coupling(rows_to_matrix(n, entries))); });
}

sopslab_status sopslab_coupling_load_csv(const char* path, sopslab_coupling** out) {
  SOPSLAB_NEED(path);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, load_coupling_csv(path)); });
}

void sopslab_coupling_free(sopslab_coupling* c) { delete c; }

sopslab_status sopslab_coupling_size(const sopslab_coupling* c, int* n) {
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(n);
  *n = c->g.n();
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_coupling_entries(const sopslab_coupling* c, double* rows, size_t cap, size_t* count) {
  SOPSLAB_NEED(c);
  return guarded([&] {
    const auto n = static_cast<size_t>(c->g.n());
    const auto st = check_buffer(n * n, cap, count);
    if (st != SOPSLAB_OK || cap == 0) return st;
    SOPSLAB_NEED(rows);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) rows[i * n + j] = c->g.entries(i, j);
    }
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_coupling_eigenvalues(const sopslab_coupling* c, double* re, double* im, size_t cap,
                                            size_t* count) {
  SOPSLAB_NEED(c);
  return guarded([&] { return put_complex(eigenvalues(c->g.entries), re, im, cap, count); });
}

sopslab_status sopslab_coupling_sigma_minus_one(const sopslab_coupling* c, double* re, double* im, size_t cap,
                                                size_t* count, int* one_is_simple) {
  SOPSLAB_NEED(c);
  return guarded([&] {
    const auto s = sigma_minus_one(c->g.entries);
    if (one_is_simple) *one_is_simple = s.one_is_simple ? 1 : 0;
    return put_complex(s.minus_one, re, im, cap, count);
  });
}

sopslab_status sopslab_coupling_structure(const sopslab_coupling* c, sopslab_structure* out) {
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(out);
  return guarded([&] {
    const auto r = structure_check(c->g.entries);
    *out = {r.row_sum_ok, r.irreducible, r.nonneg_entries, r.symmetric, r.positive_semidefinite,
            r.positive_definite, r.min_sym_eigenvalue};
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_ring_spectrum(int n, double kappa1, double kappa2, double* re, double* im, size_t cap,
                                     size_t* count) {
  return guarded([&] { return put_complex(ring_spectrum(n, kappa1, kappa2), re, im, cap, count); });
}

sopslab_status sopslab_solve_ring_kappa(int n, int j, double re, double im, double* kappa1, double* kappa2) {
  SOPSLAB_NEED(kappa1);
  SOPSLAB_NEED(kappa2);
  return guarded([&] {
    const auto [k1, k2] = solve_ring_kappa(n, j, cplx(re, im));
    *kappa1 = k1;
    *kappa2 = k2;
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_dominant_multiplier(const sopslab_sops* s, double re, double im, int m, double* out_re,
                                           double* out_im, double* radius, int* unique) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(out_re);
  SOPSLAB_NEED(out_im);
  return guarded([&] {
    const auto d = dominant_multiplier(cplx(re, im), s->s, m);
    *out_re = d.value.real();
    *out_im = d.value.imag();
    if (radius) *radius = d.spectral_radius;
    if (unique) *unique = d.unique ? 1 : 0;
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_multipliers(const sopslab_sops* s, double re, double im, int m, double floor,
                                   double* out_re, double* out_im, size_t cap, size_t* count) {
  SOPSLAB_NEED(s);
  return guarded([&] {
    const auto r = spectrum(monodromy_matrix(cplx(re, im), s->s, m), floor);
    return put_complex(r.eigenvalues, out_re, out_im, cap, count);
  });
}

sopslab_status sopslab_decomposition_check(const sopslab_sops* s, const sopslab_coupling* c, int m, double tol,
                                           double* hausdorff, int* passed) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(c);
  return guarded([&] {
    const auto r = decomposition_check(c->g.entries, s->s, m, tol);
    if (hausdorff) *hausdorff = r.hausdorff;
    if (passed) *passed = r.passed ? 1 : 0;
    return SOPSLAB_OK;
  });
}

void sopslab_verdict_free(sopslab_verdict* v) { delete v; }

sopslab_status sopslab_verdict_kind_of(const sopslab_verdict* v, sopslab_verdict_kind* out) {
  SOPSLAB_NEED(v);
  SOPSLAB_NEED(out);
  *out = static_cast<sopslab_verdict_kind>(v->v.verdict);
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_verdict_rule(const sopslab_verdict* v, char* buf, size_t cap, size_t* needed) {
  SOPSLAB_NEED(v);
  return guarded([&] { return put_string(v->v.rule, buf, cap, needed); });
}

sopslab_status sopslab_verdict_caveat(const sopslab_verdict* v, char* buf, size_t cap, size_t* needed) {
  SOPSLAB_NEED(v);
  return guarded([&] { return put_string(v->v.caveat, buf, cap, needed); });
}

sopslab_status sopslab_verdict_witness_count(const sopslab_verdict* v, size_t* count) {
  SOPSLAB_NEED(v);
  SOPSLAB_NEED(count);
  *count = v->v.witnesses.size();
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_verdict_witness(const sopslab_verdict* v, size_t i, double* re, double* im, double* value) {
  SOPSLAB_NEED(v);
  if (i >= v->v.witnesses.size()) return set_error(SOPSLAB_ERR_INVALID_ARGUMENT, "witness index out of range");
  const auto& w = v->v.witnesses[i];
  if (re) *re = w.lambda.real();
  if (im) *im = w.lambda.imag();
  if (value) *value = w.value;
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_verdict_json(const sopslab_verdict* v, char* buf, size_t cap, size_t* needed) {
  SOPSLAB_NEED(v);
  return guarded([&] { return put_string(verdict_json(v->v), buf, cap, needed); });
}

sopslab_status sopslab_classify_general(const sopslab_profile* p, const sopslab_coupling* c, double delta,
                                        sopslab_verdict** out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_general(core(p), c->g.entries, delta)); });
}

sopslab_status sopslab_classify_weak(int n, const double* H, int sign, sopslab_verdict** out) {
  SOPSLAB_NEED(H);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_weak(rows_to_matrix(n, H), sign)); });
}

sopslab_status sopslab_classify_near_uniform(const sopslab_profile* p, int n, const double* H, int sign,
                                             sopslab_verdict** out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(H);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_near_uniform(core(p), rows_to_matrix(n, H), sign)); });
}

sopslab_status sopslab_classify_doubly_nonneg(const sopslab_profile* p, const sopslab_coupling* c, double eps,
                                              sopslab_verdict** out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_doubly_nonneg(core(p), c->g.entries, eps)); });
}

sopslab_status sopslab_classify_mean_field(const sopslab_profile* p, int n, double kappa, double eps,
                                           sopslab_verdict** out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_mean_field(core(p), n, kappa, eps)); });
}

sopslab_status sopslab_classify_ring_symmetric(const sopslab_profile* p, int n, double kappa, double eps,
                                               double delta, sopslab_verdict** out) {
  SOPSLAB_NEED(p);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_ring_symmetric(core(p), n, kappa, eps, delta)); });
}

sopslab_status sopslab_classify_empirical(const sopslab_sops* s, const sopslab_coupling* c, int m, double margin,
                                          sopslab_verdict** out) {
  SOPSLAB_NEED(s);
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(out);
  return guarded([&] { return emit(out, classify_empirical(s->s, c->g.entries, m, margin)); });
}

sopslab_status sopslab_simulate_ramp(double alpha, double beta, const sopslab_feedback* f,
                                     const sopslab_coupling* c, const double* offset, const double* slope,
                                     double horizon, double h, sopslab_trajectory** out) {
  SOPSLAB_NEED(f);
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(offset);
  SOPSLAB_NEED(slope);
  SOPSLAB_NEED(out);
  return guarded([&] {
    const auto n = static_cast<size_t>(c->g.n());
    auto hist = HistorySegment<double>::ramp({offset, offset + n}, {slope, slope + n});
    return emit(out, integrate_coupled(alpha, beta, f->f, c->g.entries, hist, horizon, h));
  });
}

sopslab_status sopslab_simulate_tabulated(double alpha, double beta, const sopslab_feedback* f,
                                          const sopslab_coupling* c, const double* samples, int m,
                                          double horizon, double h, sopslab_trajectory** out) {
  SOPSLAB_NEED(f);
  SOPSLAB_NEED(c);
  SOPSLAB_NEED(samples);
  SOPSLAB_NEED(out);
  return guarded([&] {
    require(m >= 1, ErrorKind::Domain, "tabulated history needs m >= 1");
    const int n = c->g.n();
    std::vector<double> v(samples, samples + static_cast<size_t>(m + 1) * n);
    auto hist = HistorySegment<double>::tabulated(n, std::move(v));
    return emit(out, integrate_coupled(alpha, beta, f->f, c->g.entries, hist, horizon, h));
  });
}

void sopslab_trajectory_free(sopslab_trajectory* tr) { delete tr; }

sopslab_status sopslab_trajectory_dim(const sopslab_trajectory* tr, int* dim, double* t_end) {
  SOPSLAB_NEED(tr);
  if (dim) *dim = tr->tr.dim();
  if (t_end) *t_end = tr->tr.t_end();
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_trajectory_eval(const sopslab_trajectory* tr, double t, double* values) {
  SOPSLAB_NEED(tr);
  SOPSLAB_NEED(values);
  return guarded([&] {
    tr->tr.eval(t, values);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_trajectory_write_csv(const sopslab_trajectory* tr, const double* times, size_t count,
                                            const char* path) {
  SOPSLAB_NEED(tr);
  SOPSLAB_NEED(times);
  SOPSLAB_NEED(path);
  return guarded([&] {
    write_trajectory_csv(tr->tr, {times, times + count}, path);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_sync_measure(const sopslab_trajectory* tr, double window, const double* times,
                                    size_t count, double* g) {
  SOPSLAB_NEED(tr);
  SOPSLAB_NEED(times);
  SOPSLAB_NEED(g);
  return guarded([&] {
    const auto s = sync_measure(tr->tr, window, {times, times + count});
    std::copy(s.g.begin(), s.g.end(), g);
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_log_slope(const double* t, const double* g, size_t count, double t0, double t1,
                                 double* slope) {
  SOPSLAB_NEED(t);
  SOPSLAB_NEED(g);
  SOPSLAB_NEED(slope);
  return guarded([&] {
    SyncSeries s;
    s.times.assign(t, t + count);
    s.g.assign(g, g + count);
    *slope = log_slope(s, t0, t1);
    return SOPSLAB_OK;
  });
}

void sopslab_figure_spec_default(sopslab_figure_spec* spec) {
  if (!spec) return;
  const FigureSpec d;
  *spec = {d.alpha, d.a,       d.b,         d.beta,      d.target.real(), d.target.imag(),
           d.perturbation, d.horizon, d.h, d.sample_dt, d.fit_t0,        d.fit_t1};
}

sopslab_status sopslab_figure_run(const sopslab_figure_spec* spec, sopslab_figure** out) {
  SOPSLAB_NEED(spec);
  SOPSLAB_NEED(out);
  return guarded([&] {
    FigureSpec s;
    s.alpha = spec->alpha;
    s.a = spec->a;
    s.b = spec->b;
    s.beta = spec->beta;
    s.target = cplx(spec->target_re, spec->target_im);
    s.perturbation = spec->perturbation;
    s.horizon = spec->horizon;
    s.h = spec->h;
    s.sample_dt = spec->sample_dt;
    s.fit_t0 = spec->fit_t0;
    s.fit_t1 = spec->fit_t1;
    return emit(out, figure_experiment(s));
  });
}

void sopslab_figure_free(sopslab_figure* fig) { delete fig; }

sopslab_status sopslab_figure_summary_of(const sopslab_figure* fig, sopslab_figure_summary* out) {
  SOPSLAB_NEED(fig);
  SOPSLAB_NEED(out);
  const auto& r = fig->r;
  *out = {r.beta,      r.kappa1,    r.kappa2, r.lambda.real(), r.lambda.imag(),
          r.nu.real(), r.nu.imag(), r.slope,  r.sync.times.size()};
  g_last_error.clear();
  return SOPSLAB_OK;
}

sopslab_status sopslab_figure_series(const sopslab_figure* fig, double* t, double* g, size_t cap, size_t* count) {
  SOPSLAB_NEED(fig);
  return guarded([&] {
    const auto& s = fig->r.sync;
    const auto st = check_buffer(s.times.size(), cap, count);
    if (st != SOPSLAB_OK || cap == 0) return st;
    for (size_t i = 0; i < s.times.size(); ++i) {
      if (t) t[i] = s.times[i];
      if (g) g[i] = s.g[i];
    }
    return SOPSLAB_OK;
  });
}

sopslab_status sopslab_figure_write_csv(const sopslab_figure* fig, const char* path) {
  SOPSLAB_NEED(fig);
  SOPSLAB_NEED(path);
  return guarded([&] {
    write_figure_csv(fig->r, path);
    return SOPSLAB_OK;
  });
}

}  // extern "C"
