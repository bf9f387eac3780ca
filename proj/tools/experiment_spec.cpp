#include "experiment_spec.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace labspec {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw SpecError(what); }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) bad(where + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) bad("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void take(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key + " has the wrong type");
  }
}

std::complex<double> complex_of(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_string()) return parse_complex(v.get<std::string>());
  bad("lambda entries must be numbers, [re, im] pairs or \"re,im\" strings");
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) bad("cannot parse number '" + s + "'");
  return v;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::is_regular_file(path)) bad(what + " '" + path + "' does not exist");
}

}  // namespace

bool is_unit_fraction(double h) {
  if (!(h > 0.0 && h <= 1.0)) return false;
  const double n = std::round(1.0 / h);
  return std::abs(n * h - 1.0) <= 1e-9;
}

std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text), 0.0};
  return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

ExperimentSpec parse_spec(const json& j) {
  reject_unknown(j,
                 {"alpha", "beta", "feedback", "coupling", "initial", "horizon", "h", "outputs", "m", "tol",
                  "delta", "eps", "margin", "samples", "sign", "rule", "matrix", "lambdas", "levels",
                  "sample_dt", "fit", "out"},
                 "spec");
  ExperimentSpec s;
  take(j, "alpha", s.alpha, "spec");
  take(j, "beta", s.beta, "spec");
  take(j, "horizon", s.horizon, "spec");
  take(j, "h", s.h, "spec");
  take(j, "outputs", s.outputs, "spec");
  take(j, "m", s.m, "spec");
  take(j, "tol", s.tol, "spec");
  take(j, "delta", s.delta, "spec");
  take(j, "eps", s.eps, "spec");
  take(j, "margin", s.margin, "spec");
  take(j, "samples", s.samples, "spec");
  take(j, "sign", s.sign, "spec");
  take(j, "rule", s.rule, "spec");
  take(j, "matrix", s.matrix, "spec");
  take(j, "levels", s.levels, "spec");
  take(j, "sample_dt", s.sample_dt, "spec");
  take(j, "out", s.out_dir, "spec");
  if (j.contains("fit")) {
    std::vector<double> fit;
    take(j, "fit", fit, "spec");
    if (fit.size() != 2) bad("spec.fit must be [t0, t1]");
    s.fit_t0 = fit[0];
    s.fit_t1 = fit[1];
  }
  if (j.contains("lambdas")) {
    if (!j["lambdas"].is_array()) bad("spec.lambdas must be an array");
    for (const auto& v : j["lambdas"]) s.lambdas.push_back(complex_of(v));
  }
  if (j.contains("feedback")) {
    const auto& f = j["feedback"];
    reject_unknown(f, {"family", "a", "b", "table"}, "feedback");
    take(f, "family", s.feedback.family, "feedback");
    take(f, "a", s.feedback.a, "feedback");
    take(f, "b", s.feedback.b, "feedback");
    take(f, "table", s.feedback.table, "feedback");
    if (f.contains("table") && !f.contains("family")) s.feedback.family = "table";
  }
  if (j.contains("coupling")) {
    const auto& c = j["coupling"];
    reject_unknown(c, {"family", "n", "kappa", "kappa1", "kappa2", "matrix"}, "coupling");
    take(c, "family", s.coupling.family, "coupling");
    take(c, "n", s.coupling.n, "coupling");
    take(c, "kappa", s.coupling.kappa, "coupling");
    take(c, "kappa1", s.coupling.kappa1, "coupling");
    take(c, "kappa2", s.coupling.kappa2, "coupling");
    take(c, "matrix", s.coupling.matrix, "coupling");
    if (c.contains("matrix") && !c.contains("family")) s.coupling.family = "general";
  }
  if (j.contains("initial")) {
    const auto& i = j["initial"];
    reject_unknown(i, {"kind", "value", "perturbation", "offsets", "path"}, "initial");
    take(i, "kind", s.initial.kind, "initial");
    take(i, "value", s.initial.value, "initial");
    take(i, "perturbation", s.initial.perturbation, "initial");
    take(i, "offsets", s.initial.offsets, "initial");
    take(i, "path", s.initial.path, "initial");
  }
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open spec " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad("spec " + path + " is not valid JSON: " + e.what());
  }
  return parse_spec(j);
}

nlohmann::json to_json(const ExperimentSpec& s) {
  json lambdas = json::array();
  for (auto z : s.lambdas) lambdas.push_back({z.real(), z.imag()});
  json feedback = {{"family", s.feedback.family}, {"a", s.feedback.a}, {"b", s.feedback.b}};
  if (!s.feedback.table.empty()) feedback["table"] = s.feedback.table;
  json coupling = {{"family", s.coupling.family}, {"n", s.coupling.n},       {"kappa", s.coupling.kappa},
                   {"kappa1", s.coupling.kappa1}, {"kappa2", s.coupling.kappa2}};
  if (!s.coupling.matrix.empty()) coupling["matrix"] = s.coupling.matrix;
  json initial = {{"kind", s.initial.kind}, {"value", s.initial.value}, {"perturbation", s.initial.perturbation}};
  if (!s.initial.offsets.empty()) initial["offsets"] = s.initial.offsets;
  if (!s.initial.path.empty()) initial["path"] = s.initial.path;
  json j = {{"alpha", s.alpha},   {"beta", s.beta},       {"feedback", feedback},   {"coupling", coupling},
            {"initial", initial}, {"horizon", s.horizon}, {"h", s.h},               {"outputs", s.outputs},
            {"m", s.m},           {"tol", s.tol},         {"delta", s.delta},       {"eps", s.eps},
            {"margin", s.margin}, {"samples", s.samples}, {"sign", s.sign},         {"rule", s.rule},
            {"lambdas", lambdas}, {"levels", s.levels},   {"sample_dt", s.sample_dt}, {"fit", {s.fit_t0, s.fit_t1}}};
  if (!s.matrix.empty()) j["matrix"] = s.matrix;
  if (!s.out_dir.empty()) j["out"] = s.out_dir;
  return j;
}

void validate(const ExperimentSpec& s, const std::string& command) {
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) bad(command + ": " + what);
  };
  check(std::isfinite(s.alpha) && s.alpha >= 0.0, "alpha must be >= 0");
  check(std::isfinite(s.beta) && s.beta >= 0.0, "beta must be >= 0");
  if (s.feedback.family == "tanh") {
    check(s.feedback.a > 0.0 && s.feedback.b > 0.0, "feedback a and b must be > 0");
  } else if (s.feedback.family == "table") {
    check(!s.feedback.table.empty(), "feedback table path is empty");
    require_file(s.feedback.table, "feedback table");
  } else {
    bad(command + ": unknown feedback family '" + s.feedback.family + "'");
  }
  const auto& c = s.coupling;
  if (c.family == "mean-field") {
    check(c.n >= 2, "mean-field coupling needs n >= 2");
  } else if (c.family == "ring") {
    check(c.n >= 3, "ring coupling needs n >= 3");
  } else if (c.family == "general") {
    check(!c.matrix.empty(), "general coupling needs a matrix path");
    require_file(c.matrix, "coupling matrix");
  } else {
    bad(command + ": unknown coupling family '" + c.family + "'");
  }
  const auto& i = s.initial;
  if (i.kind == "tabulated") {
    require_file(i.path, "initial history");
  } else {
    check(i.kind == "constant" || i.kind == "ramp_plus_perturbation",
          "unknown initial kind '" + i.kind + "'");
  }
  check(is_unit_fraction(s.h), "h must equal 1/N for a positive integer N");
  check(s.horizon > 0.0, "horizon must be > 0");
  check(s.m >= 16, "m must be >= 16");
  check(s.tol > 0.0, "tol must be > 0");
  check(s.delta >= 0.0 && s.delta < 1.0, "delta must lie in [0, 1)");
  check(s.eps >= 0.0, "eps must be >= 0");
  check(s.margin >= 0.0, "margin must be >= 0");
  check(s.samples >= 8, "samples must be >= 8");
  check(s.sign == 1 || s.sign == -1, "sign must be +1 or -1");
  check(s.sample_dt > 0.0, "sample_dt must be > 0");
  check(s.fit_t0 >= 0.0 && s.fit_t0 < s.fit_t1, "fit window must satisfy 0 <= t0 < t1");
  if (!s.matrix.empty()) require_file(s.matrix, "perturbation matrix");
  for (const auto& o : s.outputs) {
    check(o == "trajectory" || o == "sync" || o == "summary", "unknown output '" + o + "'");
  }
}

std::vector<double> read_square_csv(const std::string& path, int& n) {
  const auto rows = read_rows(path);
  n = static_cast<int>(rows.size());
  if (n < 1) bad(path + " has no rows");
  std::vector<double> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      bad(path + ": row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) + " entries, expected " +
          std::to_string(n));
    }
    out.insert(out.end(), rows[r].begin(), rows[r].end());
  }
  return out;
}

std::vector<double> read_history_csv(const std::string& path, int n, int& m) {
  const auto rows = read_rows(path);
  if (rows.size() < 2) bad(path + " needs at least two rows");
  std::vector<double> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      bad(path + ": row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) + " entries, expected " +
          std::to_string(n));
    }
    out.insert(out.end(), rows[r].begin(), rows[r].end());
  }
  m = static_cast<int>(rows.size()) - 1;
  return out;
}

std::vector<double> perturbation_offsets(const InitialSpec& init, int n) {
  if (!init.offsets.empty()) {
    if (static_cast<int>(init.offsets.size()) != n) {
      bad("initial.offsets has " + std::to_string(init.offsets.size()) + " entries for n = " + std::to_string(n));
    }
    return init.offsets;
  }
  std::vector<double> v(n, 0.0);
  const double amp = init.perturbation / (10.0 * std::sqrt(2.0));
  if (n >= 2) v[1] = amp;
  if (n >= 3) v[2] = -amp;
  return v;
}


std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) bad("cannot format number");
  return std::string(buf, p);
}

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) bad("cannot create directory " + parent.string() + ": " + ec.message());
  }
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
  if (!out) bad("write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) bad("write failed for " + path);
}

}  // namespace labspec
