#include "pwell/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace pwell {

namespace {

using nlohmann::json;

// SAX pre-pass rejecting duplicate object keys (the DOM parser would
// silently keep the last occurrence).
class DuplicateKeyGuard : public nlohmann::json_sax<json> {
 public:
  std::string duplicate;

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool start_object(std::size_t) override {
    scopes_.emplace_back();
    return true;
  }
  bool key(string_t& k) override {
    if (!scopes_.back().insert(k).second) {
      duplicate = k;
      return false;
    }
    return true;
  }
  bool end_object() override {
    scopes_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    if (duplicate.empty()) error_ = ex.what();
    return false;
  }

  const std::string& error() const { return error_; }

 private:
  std::vector<std::set<std::string>> scopes_;
  std::string error_;
};

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

/// Wraps one JSON object and tracks which keys were consumed.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_ + " must be an object");
  }

  ~Section() = default;

  bool has(const char* key) const { return obj_.contains(key); }

  const json* get(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  double number(const char* key, double fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(path_ + "." + key + " must be a number");
    return v->get<double>();
  }

  long integer(const char* key, long fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      fail(path_ + "." + key + " must be an integer");
    }
    return v->get<long>();
  }

  std::string text(const char* key, std::string fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(path_ + "." + key + " must be a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) fail("unknown key '" + path_ + "." + item.key() + "'");
    }
  }

  const std::string& path() const { return path_; }
  const json& raw() const { return obj_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ProfileSpec parse_profile(const json& value, const std::string& path) {
  ProfileSpec spec;
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "sobolev_minimizer") {
      spec.kind = ProfileKind::SobolevMinimizer;
    } else if (name == "sine") {
      spec.kind = ProfileKind::Sine;
    } else {
      fail(path + ": unknown profile '" + name +
           "' (expected sobolev_minimizer, sine, {\"bubble\":...} or {\"nodal_file\":...})");
    }
    return spec;
  }
  if (value.is_object()) {
    if (value.contains("bubble")) {
      if (value.size() != 1) fail(path + ": bubble object must have exactly one key");
      Section b(value.at("bubble"), path + ".bubble");
      spec.kind = ProfileKind::Bubble;
      spec.center = b.number("center", 0.5);
      spec.width = b.number("width", 0.1);
      b.finish();
      if (!(spec.width > 0.0)) fail(path + ".bubble.width must be > 0");
      return spec;
    }
    if (value.contains("nodal_file")) {
      if (value.size() != 1) fail(path + ": nodal_file object must have exactly one key");
      const json& p = value.at("nodal_file");
      if (!p.is_string()) fail(path + ".nodal_file must be a string path");
      spec.kind = ProfileKind::NodalFile;
      spec.path = p.get<std::string>();
      return spec;
    }
  }
  fail(path + ": expected a profile name or {\"bubble\":...} / {\"nodal_file\":...}");
}

ScenarioConfig from_json(const json& doc) {
  ScenarioConfig cfg;
  Section root(doc, "");

  if (const json* v = root.get("domain")) {
    Section s(*v, "domain");
    const long n = s.integer("n_elements", static_cast<long>(cfg.domain.n_elements));
    if (n < 2) fail("domain.n_elements must be >= 2");
    cfg.domain.n_elements = static_cast<std::size_t>(n);
    cfg.domain.grading = s.number("grading", cfg.domain.grading);
    if (!(cfg.domain.grading >= 1.0)) fail("domain.grading must be >= 1");
    s.finish();
  }

  if (const json* v = root.get("params")) {
    Section s(*v, "params");
    cfg.params.p = s.number("p", cfg.params.p);
    cfg.params.m = s.number("m", cfg.params.m);
    cfg.params.alpha = s.number("alpha", cfg.params.alpha);
    cfg.params.r = s.number("r", cfg.params.r);
    cfg.params.a = s.number("a", cfg.params.a);
    const std::string source = s.text("source", "on");
    if (source == "on") {
      cfg.params.source_sign = 1;
    } else if (source == "off") {
      cfg.params.source_sign = 0;
    } else if (source == "negated") {
      cfg.params.source_sign = -1;
    } else {
      fail("params.source must be one of on/off/negated");
    }
    s.finish();
    if (!(cfg.params.p >= 2.0)) fail("params.p must be >= 2");
    if (!(cfg.params.m >= 2.0)) fail("params.m must be >= 2");
    if (!(cfg.params.alpha >= 0.0)) fail("params.alpha must be >= 0");
    if (!(cfg.params.r >= 0.0)) fail("params.r must be >= 0");
    if (!(cfg.params.a > 0.0)) fail("params.a must be > 0");
  }

  if (const json* v = root.get("initial")) {
    Section s(*v, "initial");
    if (const json* prof = s.get("profile")) {
      cfg.initial.profile = parse_profile(*prof, "initial.profile");
    }
    if (const json* vel = s.get("velocity")) {
      if (vel->is_string() && vel->get<std::string>() == "zero") {
        cfg.initial.velocity_zero = true;
      } else {
        cfg.initial.velocity_zero = false;
        cfg.initial.velocity = parse_profile(*vel, "initial.velocity");
      }
    }
    const std::string target = s.text("target_set", "none");
    if (target == "none") {
      cfg.initial.target_set = TargetSetConfig::None;
    } else if (target == "stable_w") {
      cfg.initial.target_set = TargetSetConfig::StableW;
    } else if (target == "unstable_u") {
      cfg.initial.target_set = TargetSetConfig::UnstableU;
    } else {
      fail("initial.target_set must be one of none/stable_w/unstable_u");
    }
    cfg.initial.margin = s.number("margin", cfg.initial.margin);
    if (!(cfg.initial.margin > 0.0 && cfg.initial.margin < 1.0)) {
      fail("initial.margin must lie in (0,1)");
    }
    s.finish();
  }

  if (const json* v = root.get("time")) {
    Section s(*v, "time");
    cfg.time.dt0 = s.number("dt0", cfg.time.dt0);
    cfg.time.dt_min = s.number("dt_min", cfg.time.dt_min);
    cfg.time.dt_max = s.number("dt_max", cfg.time.dt_max);
    cfg.time.t_end = s.number("t_end", cfg.time.t_end);
    cfg.time.theta_threshold = s.number("theta_threshold", cfg.time.theta_threshold);
    cfg.time.newton_tol = s.number("newton_tol", cfg.time.newton_tol);
    cfg.time.newton_max = static_cast<int>(s.integer("newton_max", cfg.time.newton_max));
    cfg.time.growth_cap = s.number("growth_cap", cfg.time.growth_cap);
    s.finish();
    if (!(cfg.time.dt_min > 0.0 && cfg.time.dt_min <= cfg.time.dt0 &&
          cfg.time.dt0 <= cfg.time.dt_max)) {
      fail("time: need 0 < dt_min <= dt0 <= dt_max");
    }
    if (!(cfg.time.t_end > 0.0)) fail("time.t_end must be > 0");
    if (!(cfg.time.theta_threshold > 0.0)) fail("time.theta_threshold must be > 0");
    if (!(cfg.time.newton_tol > 0.0)) fail("time.newton_tol must be > 0");
    if (cfg.time.newton_max < 1) fail("time.newton_max must be >= 1");
    if (!(cfg.time.growth_cap > 1.0)) fail("time.growth_cap must be > 1");
  }

  if (const json* v = root.get("constants")) {
    Section s(*v, "constants");
    cfg.constants.tol = s.number("tol", cfg.constants.tol);
    cfg.constants.max_iters = s.integer("max_iters", cfg.constants.max_iters);
    cfg.constants.restarts = static_cast<int>(s.integer("restarts", cfg.constants.restarts));
    cfg.constants.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long>(cfg.constants.seed)));
    s.finish();
    if (!(cfg.constants.tol > 0.0)) fail("constants.tol must be > 0");
    if (cfg.constants.max_iters < 1) fail("constants.max_iters must be >= 1");
    if (cfg.constants.restarts < 0) fail("constants.restarts must be >= 0");
  }

  if (const json* v = root.get("output")) {
    Section s(*v, "output");
    cfg.output.csv_path = s.text("csv_path", cfg.output.csv_path);
    cfg.output.svg_path = s.text("svg_path", cfg.output.svg_path);
    cfg.output.snapshot_stride = static_cast<int>(s.integer("snapshot_stride", cfg.output.snapshot_stride));
    s.finish();
    if (cfg.output.csv_path.empty()) fail("output.csv_path must not be empty");
    if (cfg.output.snapshot_stride < 1) fail("output.snapshot_stride must be >= 1");
  }

  if (const json* v = root.get("sweep")) {
    Section s(*v, "sweep");
    cfg.sweep.points = static_cast<int>(s.integer("points", cfg.sweep.points));
    cfg.sweep.lambda_lo_factor = s.number("lambda_lo_factor", cfg.sweep.lambda_lo_factor);
    cfg.sweep.lambda_hi_factor = s.number("lambda_hi_factor", cfg.sweep.lambda_hi_factor);
    s.finish();
    if (cfg.sweep.points < 2) fail("sweep.points must be >= 2");
    if (!(cfg.sweep.lambda_lo_factor > 0.0 &&
          cfg.sweep.lambda_lo_factor < cfg.sweep.lambda_hi_factor)) {
      fail("sweep: need 0 < lambda_lo_factor < lambda_hi_factor");
    }
  }

  if (const json* v = root.get("analysis")) {
    Section s(*v, "analysis");
    cfg.analysis.window_fraction = s.number("window_fraction", cfg.analysis.window_fraction);
    cfg.analysis.t0_fraction = s.number("t0_fraction", cfg.analysis.t0_fraction);
    s.finish();
    if (!(cfg.analysis.window_fraction > 0.0 && cfg.analysis.window_fraction <= 1.0)) {
      fail("analysis.window_fraction must lie in (0,1]");
    }
    if (!(cfg.analysis.t0_fraction >= 0.0 && cfg.analysis.t0_fraction < 1.0)) {
      fail("analysis.t0_fraction must lie in [0,1)");
    }
  }

  root.finish();
  return cfg;
}

json parse_json_strict(const std::string& document) {
  DuplicateKeyGuard guard;
  if (!json::sax_parse(document, &guard)) {
    if (!guard.duplicate.empty()) fail("duplicate key '" + guard.duplicate + "'");
    fail("malformed JSON: " + guard.error());
  }
  return json::parse(document);
}

} // namespace

ScenarioConfig parse_config(const std::string& document) {
  return from_json(parse_json_strict(document));
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();

  json doc = parse_json_strict(buffer.str());
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) fail("override '" + entry + "' is not key=value");
    const std::string key_path = entry.substr(0, eq);
    const std::string value_text = entry.substr(eq + 1);
    json value;
    try {
      value = json::parse(value_text);
    } catch (const json::exception&) {
      value = value_text; // bare word becomes a string
    }

    json* node = &doc;
    std::size_t pos = 0;
    while (true) {
      const std::size_t dot = key_path.find('.', pos);
      const std::string part = key_path.substr(pos, dot == std::string::npos ? dot : dot - pos);
      if (part.empty()) fail("override '" + entry + "' has an empty path segment");
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &((*node)[part]);
      if (!node->is_object() && !node->is_null()) {
        fail("override '" + entry + "' descends into a non-object");
      }
      pos = dot + 1;
    }
  }
  return from_json(doc);
}

std::string config_schema_help() {
  return R"(Config document (JSON, strict: unknown or duplicate keys are errors).
All keys are optional; defaults shown.

{
  "domain":    { "n_elements": 128, "grading": 1.0 },
  "params":    { "p": 4.0, "m": 2.0, "alpha": 1.0, "r": 1.0, "a": 1.0,
                 "source": "on" },          // on | off | negated
  "initial":   { "profile": "sine",         // sobolev_minimizer | sine |
                                            // {"bubble":{"center":0.5,"width":0.1}} |
                                            // {"nodal_file":"path"}
                 "velocity": "zero",        // zero or any profile spec
                 "target_set": "none",      // none | stable_w | unstable_u
                 "margin": 0.05 },
  "time":      { "dt0": 1e-3, "dt_min": 1e-12, "dt_max": 1e-2, "t_end": 10.0,
                 "theta_threshold": 1e8,    // blow-up norm threshold
                 "newton_tol": 1e-10, "newton_max": 25, "growth_cap": 10.0 },
  "constants": { "tol": 1e-11, "max_iters": 50000, "restarts": 20, "seed": 12345 },
  "output":    { "csv_path": "pwell_out.csv", "svg_path": "", "snapshot_stride": 10 },
  "sweep":     { "points": 20, "lambda_lo_factor": 0.1, "lambda_hi_factor": 3.0 },
  "analysis":  { "window_fraction": 0.5, "t0_fraction": 0.25 }
}

target_set scales the initial displacement: stable_w picks the largest
admissible fraction (1-margin) of the ray maximizer with J < d; unstable_u
solves J(lambda u) = d past the maximizer and inflates by (1+margin).
)";
}

} // namespace pwell
