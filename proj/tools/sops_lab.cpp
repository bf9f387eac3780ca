#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiment_spec.hpp"
#include "sopslab/sopslab.h"

namespace {

using nlohmann::json;
using labspec::ExperimentSpec;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct ApiError {
  sopslab_status status;
  std::string message;
};

void check(sopslab_status s) {
  if (s != SOPSLAB_OK) throw ApiError{s, sopslab_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Feedback = std::unique_ptr<sopslab_feedback, Deleter<sopslab_feedback, sopslab_feedback_free>>;
using SopsPtr = std::unique_ptr<sopslab_sops, Deleter<sopslab_sops, sopslab_sops_free>>;
using Coupling = std::unique_ptr<sopslab_coupling, Deleter<sopslab_coupling, sopslab_coupling_free>>;
using VerdictPtr = std::unique_ptr<sopslab_verdict, Deleter<sopslab_verdict, sopslab_verdict_free>>;
using TrajPtr = std::unique_ptr<sopslab_trajectory, Deleter<sopslab_trajectory, sopslab_trajectory_free>>;
using FigurePtr = std::unique_ptr<sopslab_figure, Deleter<sopslab_figure, sopslab_figure_free>>;

struct Overrides {
  std::string spec_path;
  std::optional<double> alpha, beta, a, b, kappa, kappa1, kappa2, h, tol, delta, eps, margin, horizon;
  std::optional<int> n, m, samples, sign;
  std::optional<std::string> rule, matrix, out, family;
  std::vector<std::string> lambdas;
  std::vector<double> levels;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--spec", o.spec_path, "ExperimentSpec JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--alpha", o.alpha, "decay rate alpha >= 0");
  cmd->add_option("--beta", o.beta, "feedback gain beta");
  cmd->add_option("--a", o.a, "tanh feedback: -f(+inf)");
  cmd->add_option("--b", o.b, "tanh feedback: f(-inf)");
  cmd->add_option("--kappa", o.kappa, "mean-field or symmetric ring strength");
  cmd->add_option("--kappa1", o.kappa1, "ring strength towards j+1");
  cmd->add_option("--kappa2", o.kappa2, "ring strength towards j-1");
  cmd->add_option("--n", o.n, "number of coupled equations");
  cmd->add_option("--coupling", o.family, "mean-field, ring or general");
  cmd->add_option("--m", o.m, "monodromy grid size");
  cmd->add_option("--h", o.h, "step size, must be 1/N");
  cmd->add_option("--tol", o.tol, "periodicity tolerance");
  cmd->add_option("--delta", o.delta, "oval margin delta");
  cmd->add_option("--eps", o.eps, "band margin eps (0 picks half the admissible bound)");
  cmd->add_option("--margin", o.margin, "empirical collar around 1");
  cmd->add_option("--horizon", o.horizon, "integration horizon");
  cmd->add_option("--samples", o.samples, "boundary rays");
  cmd->add_option("--sign", o.sign, "+1 or -1 for the perturbative rules");
  cmd->add_option("--rule", o.rule, "classifier name");
  cmd->add_option("--matrix", o.matrix, "CSV matrix (coupling for general, H for weak/near-uniform)");
  cmd->add_option("--lambda", o.lambdas, "eigenvalue re,im (repeatable)");
  cmd->add_option("--level", o.levels, "nu* level for figure targets (repeatable)");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentSpec resolve(const Overrides& o, const std::string& command, ExperimentSpec base = {}) {
  ExperimentSpec s = o.spec_path.empty() ? base : labspec::load_spec(o.spec_path);
  if (o.alpha) s.alpha = *o.alpha;
  if (o.beta) s.beta = *o.beta;
  if (o.a) s.feedback.a = *o.a;
  if (o.b) s.feedback.b = *o.b;
  if (o.family) s.coupling.family = *o.family;
  if (o.kappa) s.coupling.kappa = *o.kappa;
  if (o.kappa1) s.coupling.kappa1 = *o.kappa1;
  if (o.kappa2) s.coupling.kappa2 = *o.kappa2;
  if (o.kappa && !o.kappa1 && !o.kappa2 && s.coupling.family == "ring") {
    s.coupling.kappa1 = s.coupling.kappa2 = *o.kappa;
  }
  if (o.n) s.coupling.n = *o.n;
  if (o.m) s.m = *o.m;
  if (o.h) s.h = *o.h;
  if (o.tol) s.tol = *o.tol;
  if (o.delta) s.delta = *o.delta;
  if (o.eps) s.eps = *o.eps;
  if (o.margin) s.margin = *o.margin;
  if (o.horizon) s.horizon = *o.horizon;
  if (o.samples) s.samples = *o.samples;
  if (o.sign) s.sign = *o.sign;
  if (o.rule) s.rule = *o.rule;
  if (o.out) s.out_dir = *o.out;
  if (o.matrix) {
    if (s.rule == "weak" || s.rule == "near-uniform") {
      s.matrix = *o.matrix;
    } else {
      s.coupling.family = "general";
      s.coupling.matrix = *o.matrix;
    }
  }
  if (!o.lambdas.empty()) {
    s.lambdas.clear();
    for (const auto& t : o.lambdas) s.lambdas.push_back(labspec::parse_complex(t));
  }
  if (!o.levels.empty()) s.levels = o.levels;
  labspec::validate(s, command);
  return s;
}

std::string out_path(const ExperimentSpec& s, const std::string& name) {
  return s.out_dir.empty() ? std::string() : s.out_dir + "/" + name;
}

bool wants(const ExperimentSpec& s, const std::string& what) {
  if (s.out_dir.empty()) return false;
  if (s.outputs.empty()) return true;
  for (const auto& o : s.outputs) {
    if (o == what) return true;
  }
  return false;
}

Feedback make_feedback(const ExperimentSpec& s) {
  sopslab_feedback* f = nullptr;
  if (s.feedback.family == "table") {
    check(sopslab_feedback_load_csv(s.feedback.table.c_str(), &f));
  } else {
    check(sopslab_feedback_tanh(s.feedback.a, s.feedback.b, &f));
  }
  return Feedback(f);
}

sopslab_profile profile_of(const ExperimentSpec& s, const sopslab_feedback* f) {
  double a = s.feedback.a, b = s.feedback.b;
  check(sopslab_feedback_limits(f, &a, &b, nullptr));
  sopslab_profile p;
  check(sopslab_make_profile(s.alpha, a, b, &p));
  return p;
}

double beta_or_hopf(const ExperimentSpec& s, const sopslab_feedback* f) {
  if (s.beta > 0.0) return s.beta;
  double fp = -1.0, hopf = 0.0;
  check(sopslab_feedback_limits(f, nullptr, nullptr, &fp));
  check(sopslab_hopf_beta(s.alpha, fp, &hopf));
  return hopf + 0.01;
}

Coupling make_coupling(const ExperimentSpec& s) {
  sopslab_coupling* c = nullptr;
  const auto& cs = s.coupling;
  if (cs.family == "mean-field") {
    check(sopslab_coupling_mean_field(cs.n, cs.kappa, &c));
  } else if (cs.family == "ring") {
    check(sopslab_coupling_ring(cs.n, cs.kappa1, cs.kappa2, &c));
  } else {
    check(sopslab_coupling_load_csv(cs.matrix.c_str(), &c));
  }
  return Coupling(c);
}

SopsPtr make_sops(const ExperimentSpec& s, const sopslab_feedback* f) {
  if (!(s.beta > 0.0)) throw labspec::SpecError("a periodic orbit needs beta > 0");
  sopslab_sops_options o;
  sopslab_sops_options_default(&o);
  o.h = s.h;
  o.tol = s.tol;
  sopslab_sops* p = nullptr;
  check(sopslab_sops_find(s.alpha, s.beta, f, &o, &p));
  return SopsPtr(p);
}

json profile_json(const sopslab_profile& p) {
  return {{"alpha", p.alpha}, {"a", p.a},       {"b", p.b},
          {"rho1", p.rho1},   {"rho2", p.rho2}, {"q1", p.q1},
          {"q2", p.q2},       {"omega_star", p.omega_star}, {"r0", p.r0},
          {"delta_disc", p.delta_disc}, {"swapped", p.swapped != 0}};
}

void emit(const json& j, const ExperimentSpec& s, const std::string& name) {
  std::cout << j.dump(2) << '\n';
  if (wants(s, "summary")) labspec::write_text(out_path(s, name), j.dump(2));
}

std::string verdict_text(const sopslab_verdict* v) {
  size_t need = 0;
  check(sopslab_verdict_json(v, nullptr, 0, &need));
  std::string buf(need, '\0');
  check(sopslab_verdict_json(v, buf.data(), buf.size(), &need));
  buf.resize(need - 1);
  return buf;
}

double default_eps(const sopslab_profile& p, double eps) {
  if (eps > 0.0 || !(p.delta_disc > 0.0)) return eps;
  const double s = std::sqrt(p.delta_disc);
  return std::min(s, p.r0 - s) / 2.0;
}

int cmd_profile(const Overrides& o) {
  const auto s = resolve(o, "profile");
  auto f = make_feedback(s);
  const auto p = profile_of(s, f.get());
  std::vector<std::complex<double>> lambdas = s.lambdas;
  if (lambdas.empty()) {
    for (double r = -1.0; r <= 1.5 + 1e-12; r += 0.25) lambdas.emplace_back(r, 0.0);
  }
  json table = json::array();
  std::vector<std::vector<double>> rows;
  for (auto z : lambdas) {
    double re = 0, im = 0;
    check(sopslab_nu_star(&p, z.real(), z.imag(), &re, &im));
    table.push_back({{"lambda_re", z.real()}, {"lambda_im", z.imag()}, {"nu_re", re}, {"nu_im", im},
                     {"modulus", std::hypot(re, im)}});
    rows.push_back({z.real(), z.imag(), re, im, std::hypot(re, im)});
  }
  auto j = profile_json(p);
  j["nu_table"] = table;
  emit(j, s, "profile.json");
  if (wants(s, "summary")) {
    labspec::write_csv(out_path(s, "nu_table.csv"), {"lambda_re", "lambda_im", "nu_re", "nu_im", "modulus"}, rows);
  }
  return 0;
}

int cmd_sops(const Overrides& o) {
  const auto s = resolve(o, "sops");
  auto f = make_feedback(s);
  const auto p = profile_of(s, f.get());
  auto orbit = make_sops(s, f.get());
  sopslab_sops_summary sum;
  check(sopslab_sops_summary_of(orbit.get(), &sum));
  sopslab_residuals res;
  check(sopslab_sops_residuals(orbit.get(), p.q1 / 4.0, &res));
  json j = {{"alpha", sum.alpha}, {"beta", sum.beta}, {"omega", sum.omega}, {"z1", sum.z1}, {"z2", sum.z2},
            {"h", sum.h}, {"periodicity_defect", sum.residual}, {"samples", sum.samples},
            {"omega_star", p.omega_star},
            {"residuals", {{"z1", res.z1}, {"z2", res.z2}, {"omega", res.omega}, {"profile", res.profile},
                           {"derivative", res.derivative}}}};
  emit(j, s, "sops_summary.json");
  if (wants(s, "trajectory")) {
    std::filesystem::create_directories(s.out_dir);
    check(sopslab_sops_write(orbit.get(), out_path(s, "sops.csv").c_str(), out_path(s, "sops.json").c_str()));
  }
  return 0;
}

int cmd_floquet(const Overrides& o) {
  const auto s = resolve(o, "floquet");
  if (s.lambdas.empty()) throw labspec::SpecError("floquet: give at least one --lambda");
  auto f = make_feedback(s);
  const auto p = profile_of(s, f.get());
  auto orbit = make_sops(s, f.get());
  json list = json::array();
  std::vector<std::vector<double>> rows;
  for (auto z : s.lambdas) {
    double mre = 0, mim = 0, rad = 0, nre = 0, nim = 0;
    int unique = 0;
    check(sopslab_dominant_multiplier(orbit.get(), z.real(), z.imag(), s.m, &mre, &mim, &rad, &unique));
    check(sopslab_nu_star(&p, z.real(), z.imag(), &nre, &nim));
    list.push_back({{"lambda_re", z.real()}, {"lambda_im", z.imag()}, {"multiplier_re", mre},
                    {"multiplier_im", mim}, {"spectral_radius", rad}, {"unique", unique != 0},
                    {"nu_star_re", nre}, {"nu_star_im", nim}});
    rows.push_back({z.real(), z.imag(), mre, mim, rad, double(unique), nre, nim});
  }
  json j = {{"alpha", s.alpha}, {"beta", s.beta}, {"m", s.m}, {"h", s.h}, {"multipliers", list}};
  emit(j, s, "floquet_summary.json");
  if (wants(s, "trajectory")) {
    labspec::write_csv(out_path(s, "multipliers.csv"),
                       {"lambda_re", "lambda_im", "mu_re", "mu_im", "radius", "unique", "nu_re", "nu_im"}, rows);
  }
  return 0;
}

int cmd_classify(const Overrides& o) {
  const auto s = resolve(o, "classify");
  sopslab_verdict* v = nullptr;
  const auto& rule = s.rule;
  if (rule == "weak" || rule == "near-uniform") {
    if (s.matrix.empty()) throw labspec::SpecError("classify: rule '" + rule + "' needs --matrix H");
    int n = 0;
    const auto H = labspec::read_square_csv(s.matrix, n);
    if (rule == "weak") {
      check(sopslab_classify_weak(n, H.data(), s.sign, &v));
    } else {
      auto f = make_feedback(s);
      const auto p = profile_of(s, f.get());
      check(sopslab_classify_near_uniform(&p, n, H.data(), s.sign, &v));
    }
  } else {
    auto f = make_feedback(s);
    const auto p = profile_of(s, f.get());
    const double eps = default_eps(p, s.eps);
    const double kappa = s.coupling.family == "ring" && !o.kappa ? s.coupling.kappa1 : s.coupling.kappa;
    if (rule == "general") {
      check(sopslab_classify_general(&p, make_coupling(s).get(), s.delta, &v));
    } else if (rule == "doubly-nonneg") {
      check(sopslab_classify_doubly_nonneg(&p, make_coupling(s).get(), eps, &v));
    } else if (rule == "mean-field") {
      check(sopslab_classify_mean_field(&p, s.coupling.n, s.coupling.kappa, eps, &v));
    } else if (rule == "ring") {
      check(sopslab_classify_ring_symmetric(&p, std::max(s.coupling.n, 3), kappa, eps, s.delta, &v));
    } else if (rule == "empirical") {
      auto orbit = make_sops(s, f.get());
      check(sopslab_classify_empirical(orbit.get(), make_coupling(s).get(), s.m, s.margin, &v));
    } else {
      throw labspec::SpecError("classify: unknown rule '" + rule +
                               "' (general, weak, near-uniform, doubly-nonneg, mean-field, ring, empirical)");
    }
  }
  VerdictPtr verdict(v);
  emit(json::parse(verdict_text(verdict.get())), s, "verdict.json");
  return 0;
}

int cmd_region(const Overrides& o) {
  const auto s = resolve(o, "region");
  auto f = make_feedback(s);
  const auto p = profile_of(s, f.get());
  size_t count = 0;
  int failed = 0, lobes = 0;
  check(sopslab_cassini_boundary(&p, s.delta, s.samples, nullptr, nullptr, 0, &count, &failed, &lobes));
  std::vector<double> re(count), im(count);
  check(sopslab_cassini_boundary(&p, s.delta, s.samples, re.data(), im.data(), count, &count, &failed, &lobes));
  json crossings = json::array();
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < count; ++i) {
    rows.push_back({re[i], im[i]});
    if (std::abs(im[i]) < 1e-12) crossings.push_back(re[i]);
  }
  json j = {{"delta", s.delta}, {"level", 1.0 - s.delta}, {"points", count}, {"lobes", lobes},
            {"failed_rays", failed}, {"real_crossings", crossings}};
  emit(j, s, "region_summary.json");
  if (wants(s, "trajectory")) labspec::write_csv(out_path(s, "boundary.csv"), {"re", "im"}, rows);
  return 0;
}

std::vector<double> sample_times(double horizon, double dt) {
  std::vector<double> t;
  const auto count = static_cast<size_t>(std::floor(horizon / dt + 1e-9));
  for (size_t i = 0; i <= count; ++i) t.push_back(static_cast<double>(i) * dt);
  return t;
}

int cmd_simulate(const Overrides& o) {
  const auto s = resolve(o, "simulate");
  auto f = make_feedback(s);
  const auto p = profile_of(s, f.get());
  auto c = make_coupling(s);
  int n = 0;
  check(sopslab_coupling_size(c.get(), &n));
  const double beta = beta_or_hopf(s, f.get());
  sopslab_trajectory* tr = nullptr;
  if (s.initial.kind == "tabulated") {
    int m = 0;
    const auto samples = labspec::read_history_csv(s.initial.path, n, m);
    check(sopslab_simulate_tabulated(s.alpha, beta, f.get(), c.get(), samples.data(), m, s.horizon, s.h, &tr));
  } else {
    std::vector<double> offset(n, s.initial.value), slope(n, 0.0);
    if (s.initial.kind == "ramp_plus_perturbation") {
      offset = labspec::perturbation_offsets(s.initial, n);
      slope.assign(n, beta);
    }
    check(sopslab_simulate_ramp(s.alpha, beta, f.get(), c.get(), offset.data(), slope.data(), s.horizon, s.h, &tr));
  }
  TrajPtr traj(tr);
  const auto times = sample_times(s.horizon, s.sample_dt);
  std::vector<double> g(times.size());
  check(sopslab_sync_measure(traj.get(), p.omega_star, times.data(), times.size(), g.data()));
  json j = {{"alpha", s.alpha}, {"beta", beta}, {"n", n}, {"horizon", s.horizon}, {"window", p.omega_star},
            {"g_final", g.back()}};
  if (s.fit_t1 <= s.horizon) {
    double slope = 0.0;
    const auto st = sopslab_log_slope(times.data(), g.data(), times.size(), s.fit_t0, s.fit_t1, &slope);
    j["log_g_slope"] = st == SOPSLAB_OK ? json(slope) : json(nullptr);
    j["fit"] = {s.fit_t0, s.fit_t1};
  }
  emit(j, s, "simulate_summary.json");
  if (wants(s, "trajectory")) {
    std::filesystem::create_directories(s.out_dir);
    check(sopslab_trajectory_write_csv(traj.get(), times.data(), times.size(), out_path(s, "trajectory.csv").c_str()));
  }
  if (wants(s, "sync")) {
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < times.size(); ++i) {
      rows.push_back({times[i], g[i], g[i] > 0.0 ? std::log(g[i]) : -INFINITY});
    }
    labspec::write_csv(out_path(s, "sync.csv"), {"t", "g", "log_g"}, rows);
  }
  return 0;
}

int cmd_figure(const Overrides& o) {
  ExperimentSpec base;
  base.alpha = 0.125;
  base.feedback.a = 24.0;
  base.feedback.b = 1.0;
  base.coupling.family = "ring";
  base.coupling.n = 3;
  base.horizon = 85.0;
  const auto s = resolve(o, "figure", base);
  sopslab_profile p;
  check(sopslab_make_profile(s.alpha, s.feedback.a, s.feedback.b, &p));

  struct Target {
    std::string label;
    std::complex<double> lambda;
  };
  std::vector<Target> targets;
  for (double level : s.levels) {
    double r = 0.0;
    check(sopslab_nu_star_level_root(&p, level, 1, &r));
    targets.push_back({"level_" + labspec::format_double(level), {r, 0.0}});
  }
  for (auto z : s.lambdas) {
    targets.push_back({"lambda_" + labspec::format_double(z.real()) + "_" + labspec::format_double(z.imag()), z});
  }

  json runs = json::array();
  for (const auto& t : targets) {
    sopslab_figure_spec fs;
    sopslab_figure_spec_default(&fs);
    fs.alpha = s.alpha;
    fs.a = s.feedback.a;
    fs.b = s.feedback.b;
    fs.beta = s.beta;
    fs.target_re = t.lambda.real();
    fs.target_im = t.lambda.imag();
    fs.perturbation = s.initial.perturbation;
    fs.horizon = s.horizon;
    fs.h = s.h;
    fs.sample_dt = s.sample_dt;
    fs.fit_t0 = s.fit_t0;
    fs.fit_t1 = std::min(s.fit_t1, s.horizon);
    sopslab_figure* raw = nullptr;
    check(sopslab_figure_run(&fs, &raw));
    FigurePtr fig(raw);
    sopslab_figure_summary sum;
    check(sopslab_figure_summary_of(fig.get(), &sum));
    runs.push_back({{"target", t.label}, {"lambda_re", sum.lambda_re}, {"lambda_im", sum.lambda_im},
                    {"nu_re", sum.nu_re}, {"nu_im", sum.nu_im}, {"kappa1", sum.kappa1}, {"kappa2", sum.kappa2},
                    {"beta", sum.beta}, {"log_g_slope", sum.slope}});
    if (wants(s, "sync") || wants(s, "trajectory")) {
      std::filesystem::create_directories(s.out_dir);
      check(sopslab_figure_write_csv(fig.get(), out_path(s, "figure_" + t.label + ".csv").c_str()));
    }
  }
  json j = {{"alpha", s.alpha}, {"a", s.feedback.a}, {"b", s.feedback.b}, {"n", 3}, {"horizon", s.horizon},
            {"fit", {s.fit_t0, s.fit_t1}}, {"runs", runs}};
  emit(j, s, "figure_summary.json");
  return 0;
}

int exit_code_of(sopslab_status s) {
  switch (s) {
    case SOPSLAB_ERR_NUMERICAL:
    case SOPSLAB_ERR_NONCONVERGENCE:
    case SOPSLAB_ERR_INTERNAL:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slowly oscillating periodic solutions of coupled delayed negative feedback systems"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(sopslab_version()));
  Overrides o;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Overrides&);
  };
  const Command commands[] = {
      {"profile", "limit constants and a nu* table", cmd_profile},
      {"sops", "periodic orbit search and limit residuals", cmd_sops},
      {"floquet", "dominant extended multipliers for a list of eigenvalues", cmd_floquet},
      {"classify", "stability verdict by rule", cmd_classify},
      {"region", "level curve |nu*| = 1 - delta", cmd_region},
      {"simulate", "coupled run and synchrony measure", cmd_simulate},
      {"figure", "3-ring runs at nu* level targets", cmd_figure},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common_flags(sub, o);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  try {
    for (const auto& [sub, c] : subs) {
      if (sub->parsed()) return c->run(o);
    }
  } catch (const labspec::SpecError& e) {
    std::cerr << "sops-lab: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ApiError& e) {
    std::cerr << "sops-lab: " << sopslab_status_name(e.status) << ": " << e.message << '\n';
    return exit_code_of(e.status);
  } catch (const std::exception& e) {
    std::cerr << "sops-lab: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}
