#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "efgp/cli.hpp"
#include "efgp/numeric.hpp"
#include "efgp/spectral.hpp"

namespace efgp {

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Prufer: return "prufer";
    case Command::BoundCheck: return "bound-check";
    case Command::LemmaSums: return "lemma-sums";
    case Command::Construct: return "construct";
  }
  return "unknown";
}

std::vector<std::int64_t> ExperimentConfig::effective_checkpoints() const {
  return checkpoints.empty() ? default_checkpoints(N) : checkpoints;
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorKind::ValidationError, field + ": " + reason);
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) invalid(prefix + it.key(), "unknown field");
  }
}

double get_real(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_number()) invalid(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(path, "must be finite");
  return d;
}

std::int64_t get_integer(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  invalid(path, "must be an integer");
}

bool get_bool(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_boolean()) invalid(path, "must be a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_string()) invalid(path, "must be a string");
  return v.get<std::string>();
}

Potential parse_potential(const Json& p, const std::string& base_dir) {
  if (!p.is_object()) invalid("potential", "must be an object");
  reject_unknown(p, {"family", "c", "omega", "delta", "seed", "values", "file", "onset"}, "potential.");
  if (!p.contains("family")) invalid("potential.family", "is required");
  const std::string family = get_string(p, "family", "potential.family");
  PotentialParams params;
  if (p.contains("c")) params.amplitude = get_real(p, "c", "potential.c");
  if (p.contains("omega")) params.frequency = get_real(p, "omega", "potential.omega");
  if (p.contains("delta")) params.phase = get_real(p, "delta", "potential.delta");
  if (p.contains("seed")) {
    const auto s = get_integer(p, "seed", "potential.seed");
    if (s < 0) invalid("potential.seed", "must be non-negative");
    params.seed = static_cast<std::uint64_t>(s);
  }
  if (p.contains("onset")) params.onset = get_integer(p, "onset", "potential.onset");
  if (p.contains("values")) {
    const Json& v = p.at("values");
    if (!v.is_array()) invalid("potential.values", "must be an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) invalid("potential.values[" + std::to_string(i) + "]", "must be a number");
      params.values.push_back(v[i].get<double>());
    }
  }
  if (p.contains("file")) {
    std::filesystem::path path = get_string(p, "file", "potential.file");
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    params.values = load_table(path.string());
  }
  try {
    return make_potential(family, params);
  } catch (const Error& e) {
    invalid("potential", e.what());
  }
}

// 1-based line of a byte offset, for syntax diagnostics.
std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  reject_unknown(doc,
                 {"command", "potential", "phi", "N", "window", "x_values", "checkpoints", "output_dir",
                  "x", "c", "candidates", "certified_only", "C", "classify", "csv_stride",
                  "oscillatory", "tolerance"},
                 "");

  ExperimentConfig cfg;
  if (!doc.contains("command")) invalid("command", "is required");
  const std::string cmd = get_string(doc, "command", "command");
  bool known = false;
  for (auto c : {Command::Spectrum, Command::Prufer, Command::BoundCheck, Command::LemmaSums,
                 Command::Construct}) {
    if (cmd == to_string(c)) {
      cfg.command = c;
      known = true;
    }
  }
  if (!known) invalid("command", "unknown command '" + cmd + "'");

  if (doc.contains("potential")) cfg.potential = parse_potential(doc.at("potential"), base_dir);
  if (doc.contains("phi")) {
    cfg.phi = get_real(doc, "phi", "phi");
    if (!(cfg.phi > 0.0 && cfg.phi < std::numbers::pi)) invalid("phi", "must lie in (0,π)");
  }
  if (!doc.contains("N")) invalid("N", "is required");
  cfg.N = get_integer(doc, "N", "N");
  if (cfg.N < 2) invalid("N", "must be >= 2");

  if (doc.contains("window")) {
    const Json& w = doc.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      invalid("window", "must be a pair of numbers");
    }
    cfg.window_lo = w[0].get<double>();
    cfg.window_hi = w[1].get<double>();
    if (!(cfg.window_lo < cfg.window_hi)) invalid("window", "lower end must be below upper end");
  }
  if (doc.contains("x_values")) {
    const Json& xs = doc.at("x_values");
    if (!xs.is_array()) invalid("x_values", "must be an array");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string path = "x_values[" + std::to_string(i) + "]";
      if (!xs[i].is_number()) invalid(path, "must be a number");
      const double x = xs[i].get<double>();
      if (!(x > 0.0 && x < std::numbers::pi)) invalid(path, "must lie in (0,π)");
      cfg.x_values.push_back(x);
    }
  }
  if (doc.contains("checkpoints")) {
    const Json& cps = doc.at("checkpoints");
    if (!cps.is_array() || cps.empty()) invalid("checkpoints", "must be a non-empty array");
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const std::string path = "checkpoints[" + std::to_string(i) + "]";
      Json holder = {{"v", cps[i]}};
      const auto v = get_integer(holder, "v", path);
      if (v < 2 || v > cfg.N) invalid(path, "must lie in [2, N]");
      if (!cfg.checkpoints.empty() && v <= cfg.checkpoints.back()) invalid(path, "must be strictly increasing");
      cfg.checkpoints.push_back(v);
    }
  }
  if (doc.contains("output_dir")) cfg.output_dir = get_string(doc, "output_dir", "output_dir");
  if (doc.contains("x")) {
    cfg.construct_x = get_real(doc, "x", "x");
    if (!(*cfg.construct_x > 0.0 && *cfg.construct_x < std::numbers::pi)) invalid("x", "must lie in (0,π)");
  }
  if (doc.contains("c")) cfg.construct_c = get_real(doc, "c", "c");
  if (cfg.construct_x.has_value() != cfg.construct_c.has_value()) {
    invalid(cfg.construct_x ? "c" : "x", "x and c must be given together");
  }
  if (doc.contains("candidates")) {
    cfg.candidates = get_string(doc, "candidates", "candidates");
    if (cfg.candidates != "x_values" && cfg.candidates != "truncation") {
      invalid("candidates", "must be \"x_values\" or \"truncation\"");
    }
  }
  if (doc.contains("certified_only")) cfg.certified_only = get_bool(doc, "certified_only", "certified_only");
  if (doc.contains("C")) {
    cfg.C = get_real(doc, "C", "C");
    if (*cfg.C < 0.0) invalid("C", "must be >= 0");
  }
  if (doc.contains("classify")) cfg.classify = get_bool(doc, "classify", "classify");
  if (doc.contains("csv_stride")) {
    cfg.csv_stride = get_integer(doc, "csv_stride", "csv_stride");
    if (cfg.csv_stride < 1) invalid("csv_stride", "must be >= 1");
  }
  if (doc.contains("oscillatory")) {
    const Json& os = doc.at("oscillatory");
    if (!os.is_array()) invalid("oscillatory", "must be an array");
    for (std::size_t i = 0; i < os.size(); ++i) {
      const std::string prefix = "oscillatory[" + std::to_string(i) + "].";
      const Json& o = os[i];
      if (!o.is_object()) invalid(prefix.substr(0, prefix.size() - 1), "must be an object");
      reject_unknown(o, {"alpha", "gamma", "coef", "N_max"}, prefix);
      OscillatoryConfig oc;
      if (!o.contains("alpha")) invalid(prefix + "alpha", "is required");
      oc.alpha = get_real(o, "alpha", prefix + "alpha");
      if (o.contains("gamma")) {
        const std::string g = get_string(o, "gamma", prefix + "gamma");
        if (g == "zero") oc.rule = GammaRule::Zero;
        else if (g == "log") oc.rule = GammaRule::Log;
        else invalid(prefix + "gamma", "must be \"zero\" or \"log\"");
      }
      if (o.contains("coef")) oc.coef = get_real(o, "coef", prefix + "coef");
      oc.N_max = o.contains("N_max") ? get_integer(o, "N_max", prefix + "N_max") : cfg.N;
      if (oc.N_max < 1) invalid(prefix + "N_max", "must be >= 1");
      cfg.oscillatory.push_back(oc);
    }
  }
  if (doc.contains("tolerance")) {
    const Json& t = doc.at("tolerance");
    if (!t.is_object()) invalid("tolerance", "must be an object");
    reject_unknown(t, {"eigen_tol", "distinct_tol", "stabilization"}, "tolerance.");
    if (t.contains("eigen_tol")) cfg.tolerance.eigen_tol = get_real(t, "eigen_tol", "tolerance.eigen_tol");
    if (t.contains("distinct_tol")) cfg.tolerance.distinct_tol = get_real(t, "distinct_tol", "tolerance.distinct_tol");
    if (t.contains("stabilization")) cfg.tolerance.stabilization = get_real(t, "stabilization", "tolerance.stabilization");
    if (!(cfg.tolerance.eigen_tol > 0.0)) invalid("tolerance.eigen_tol", "must be positive");
    if (!(cfg.tolerance.distinct_tol >= 0.0)) invalid("tolerance.distinct_tol", "must be >= 0");
    if (!(cfg.tolerance.stabilization > 0.0)) invalid("tolerance.stabilization", "must be positive");
  }

  switch (cfg.command) {
    case Command::Prufer:
      if (cfg.x_values.empty()) invalid("x_values", "is required for prufer");
      break;
    case Command::LemmaSums:
      if (cfg.x_values.empty() && cfg.oscillatory.empty()) invalid("x_values", "is required for this command");
      break;
    case Command::Construct:
      if (!cfg.construct_x) invalid("x", "is required for construct");
      break;
    default:
      break;
  }

  cfg.echo = doc;
  cfg.echo.erase("output_dir");
  cfg.config_hash = hex64(fnv1a64(cfg.echo.dump()));
  return cfg;
}

}  // namespace efgp
