#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "common.hpp"
#include "server.hpp"
#include "worker.hpp"

namespace airvote::cli {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Strict JSON access: every key must be known, typed, and (for grids)
// non-empty. Violations surface as ConfigError so the CLI can map them to the
// configuration exit code before any computation happens.

namespace detail {

class StrictObject {
 public:
  StrictObject(const json& j, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object())
      throw ConfigError("config" + where_ + ": expected a JSON object");
  }

  // Parsed documents store non-negative literals as unsigned, but documents
  // built in memory may carry them with signed storage; both are accepted.
  static bool non_negative_integer(const json& v) {
    return v.is_number_unsigned() ||
           (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  }

  std::uint64_t u64(const char* key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!non_negative_integer(*v)) fail(key, "must be a non-negative integer");
    return v->get<std::uint64_t>();
  }

  double dbl(const char* key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(key, "must be a number");
    return v->get<double>();
  }

  bool boolean(const char* key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(key, "must be true or false");
    return v->get<bool>();
  }

  std::string str(const char* key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(key, "must be a string");
    return v->get<std::string>();
  }

  std::string str_required(const char* key) {
    const json* v = find(key);
    if (!v) fail(key, "is required");
    if (!v->is_string()) fail(key, "must be a string");
    return v->get<std::string>();
  }

  std::optional<std::uint64_t> u64_optional(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!non_negative_integer(*v)) fail(key, "must be a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::vector<double> dbl_array(const char* key, std::vector<double> fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const json& el : *v) {
      if (!el.is_number()) fail(key, "must be an array of numbers");
      out.push_back(el.get<double>());
    }
    if (out.empty()) fail(key, "must not be an empty grid");
    return out;
  }

  std::vector<std::uint64_t> u64_array(const char* key,
                                       std::vector<std::uint64_t> fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(key, "must be an array of non-negative integers");
    std::vector<std::uint64_t> out;
    for (const json& el : *v) {
      if (!non_negative_integer(el))
        fail(key, "must be an array of non-negative integers");
      out.push_back(el.get<std::uint64_t>());
    }
    if (out.empty()) fail(key, "must not be an empty grid");
    return out;
  }

  // Returns nullptr when absent; the section then keeps its defaults.
  const json* object(const char* key) {
    const json* v = find(key);
    if (!v) return nullptr;
    if (!v->is_object()) fail(key, "must be a JSON object");
    return v;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      bool known = false;
      for (const std::string& k : known_)
        if (k == item.key()) { known = true; break; }
      if (!known)
        throw ConfigError("config" + where_ + ": unknown key '" + item.key() +
                          "'");
    }
  }

 private:
  const json* find(const char* key) {
    known_.push_back(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  [[noreturn]] void fail(const char* key, const std::string& what) const {
    throw ConfigError("config" + where_ + ": key '" + std::string(key) +
                      "' " + what);
  }

  const json& j_;
  std::string where_;
  std::vector<std::string> known_;
};

}  // namespace detail

inline json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Training config. `threads` and `output_dir` are execution plumbing: they are
// accepted here but excluded from the config echo and the run id, so output
// content is identical for any thread count and any output location.

struct TrainConfig {
  server::ExperimentConfig experiment;
  unsigned threads = 1;
  std::string output_dir = "out";
};

inline TrainConfig parse_train_config(const json& root) {
  detail::StrictObject top(root, "");
  TrainConfig tc;
  server::ExperimentConfig& e = tc.experiment;

  const std::string scheme = top.str("scheme", "hierarchical");
  const auto parsed_scheme = server::parse_scheme(scheme);
  if (!parsed_scheme)
    throw ConfigError("config: unknown scheme '" + scheme + "'");
  e.scheme = *parsed_scheme;

  e.K = top.u64("K", 50);
  e.c = top.dbl("c", 0.0);
  e.p = top.dbl("p", 0.1);
  e.A = top.u64("A", 32);
  e.eta = top.dbl("eta", 0.01);
  e.T = top.u64("T", 100);
  e.snr_db = top.dbl("snr_db", 10.0);
  e.seed = top.u64("seed", 1);

  if (const json* m = top.object("model")) {
    detail::StrictObject mo(*m, ".model");
    const std::string kind = mo.str("kind", "logistic");
    if (kind == "logistic") {
      e.model_kind = learn::ModelKind::logistic;
    } else if (kind == "mlp") {
      e.model_kind = learn::ModelKind::mlp;
    } else {
      throw ConfigError("config.model: unknown kind '" + kind + "'");
    }
    e.mlp_hidden = mo.u64("hidden", 32);
    mo.finish();
  }

  if (const json* d = top.object("dataset")) {
    detail::StrictObject dso(*d, ".dataset");
    const std::string kind = dso.str("kind", "synthetic");
    if (kind == "synthetic") {
      e.dataset.kind = server::DatasetSpec::Kind::synthetic;
      server::SyntheticSpec& s = e.dataset.synthetic;
      s.classes = int(dso.u64("classes", 2));
      s.per_class = dso.u64("per_class", 1000);
      s.features = dso.u64("features", 20);
      s.separation = dso.dbl("separation", 2.5);
      s.seed = dso.u64("seed", 1);
      s.test_per_class = dso.u64("test_per_class", 500);
    } else if (kind == "mnist") {
      e.dataset.kind = server::DatasetSpec::Kind::mnist;
      server::MnistSpec& m = e.dataset.mnist;
      m.images = dso.str_required("images");
      m.labels = dso.str_required("labels");
      m.test_images = dso.str_required("test_images");
      m.test_labels = dso.str_required("test_labels");
      m.keep_classes = int(dso.u64("keep_classes", 0));
      m.max_per_class = dso.u64("max_per_class", 0);
    } else {
      throw ConfigError("config.dataset: unknown kind '" + kind + "'");
    }
    dso.finish();
  }

  if (const json* a = top.object("attack")) {
    detail::StrictObject ao(*a, ".attack");
    const std::string variant = ao.str_required("variant");
    const auto parsed = worker::parse_attack_variant(variant);
    if (!parsed)
      throw ConfigError("config.attack: unknown variant '" + variant + "'");
    worker::AttackSpec spec;
    spec.variant = *parsed;
    const auto target = ao.u64_optional("target");
    if (target) {
      if (spec.variant != worker::AttackSpec::Variant::mimic)
        throw ConfigError(
            "config.attack: 'target' applies only to the mimic variant");
      spec.mimic_target = std::size_t(*target);
    }
    ao.finish();
    e.attack = spec;
  }

  e.h_min = top.dbl("h_min", 0.0);
  e.byzantine_power_scale = top.dbl("byzantine_power_scale", 1.0);
  e.eval_stride = top.u64("eval_stride", 1);
  tc.output_dir = top.str("output_dir", "out");
  tc.threads = unsigned(top.u64("threads", 1));
  if (tc.threads < 1)
    throw ConfigError("config: key 'threads' must be at least 1");
  top.finish();

  server::validate_config(e);
  return tc;
}

/// Canonical JSON form of the experiment: every semantic key is present with
/// its resolved value, keys are in lexicographic order, and execution plumbing
/// (threads, output_dir) is excluded. parse -> echo -> parse is the identity.
inline json config_echo(const server::ExperimentConfig& e) {
  json j;
  j["scheme"] = server::scheme_name(e.scheme);
  j["K"] = e.K;
  j["c"] = e.c;
  j["p"] = e.p;
  j["A"] = e.A;
  j["eta"] = e.eta;
  j["T"] = e.T;
  j["snr_db"] = e.snr_db;
  j["seed"] = e.seed;
  j["model"] = json{
      {"kind", e.model_kind == learn::ModelKind::mlp ? "mlp" : "logistic"},
      {"hidden", e.mlp_hidden}};
  if (e.dataset.kind == server::DatasetSpec::Kind::synthetic) {
    const server::SyntheticSpec& s = e.dataset.synthetic;
    j["dataset"] = json{{"kind", "synthetic"},
                        {"classes", std::uint64_t(s.classes)},
                        {"per_class", s.per_class},
                        {"features", s.features},
                        {"separation", s.separation},
                        {"seed", s.seed},
                        {"test_per_class", s.test_per_class}};
  } else {
    const server::MnistSpec& m = e.dataset.mnist;
    j["dataset"] = json{{"kind", "mnist"},
                        {"images", m.images},
                        {"labels", m.labels},
                        {"test_images", m.test_images},
                        {"test_labels", m.test_labels},
                        {"keep_classes", std::uint64_t(m.keep_classes)},
                        {"max_per_class", m.max_per_class}};
  }
  if (e.attack) {
    json a;
    a["variant"] = worker::attack_variant_name(e.attack->variant);
    if (e.attack->mimic_target)
      a["target"] = std::uint64_t(*e.attack->mimic_target);
    j["attack"] = a;
  }
  j["h_min"] = e.h_min;
  j["byzantine_power_scale"] = e.byzantine_power_scale;
  j["eval_stride"] = e.eval_stride;
  return j;
}

/// Content hash of the canonical config echo, as 16 hex digits.
inline std::string run_id(const json& echo) {
  const std::uint64_t h = fnv1a64(echo.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Bound-validation suite config. Defaults reproduce the standard grids; a
// section given explicitly must carry non-empty grids.

struct BoundsSuiteConfig {
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  unsigned threads = 1;
  std::string output_dir = "out";
  // Test-fixture hook: wrecks every computed bound so the failure path and
  // exit code can be exercised deliberately.
  bool corrupt_bounds_self_test = false;

  bool run_prop1 = true;
  std::vector<double> prop1_J{0.5, 1.0, 2.0, 4.0};
  std::vector<std::uint64_t> prop1_s{1, 3, 5, 9};

  bool run_thm1 = true;
  std::uint64_t thm1_K = 50;
  std::vector<double> thm1_J{1.0, 2.0};
  std::vector<double> thm1_p{0.05, 0.1, 0.3};

  bool run_thm2 = true;
  std::uint64_t thm2_K = 50;
  double thm2_p = 0.1;
  double thm2_J = 2.0;
  std::vector<double> thm2_c{0.0, 0.2, 0.4};
  std::vector<double> thm2_snr_db{0.0, 10.0, 20.0};
};

inline BoundsSuiteConfig parse_bounds_config(const json& root) {
  detail::StrictObject top(root, "");
  BoundsSuiteConfig bc;
  bc.seed = top.u64("seed", 1);
  bc.trials = top.u64("trials", 100000);
  bc.threads = unsigned(top.u64("threads", 1));
  bc.output_dir = top.str("output_dir", "out");
  bc.corrupt_bounds_self_test = top.boolean("corrupt_bounds_self_test", false);
  bc.run_prop1 = top.boolean("run_prop1", true);
  bc.run_thm1 = top.boolean("run_thm1", true);
  bc.run_thm2 = top.boolean("run_thm2", true);

  if (const json* s = top.object("local_vote")) {
    detail::StrictObject so(*s, ".local_vote");
    bc.prop1_J = so.dbl_array("J", bc.prop1_J);
    bc.prop1_s = so.u64_array("s", bc.prop1_s);
    so.finish();
  }
  if (const json* s = top.object("hierarchical_vote")) {
    detail::StrictObject so(*s, ".hierarchical_vote");
    bc.thm1_K = so.u64("K", bc.thm1_K);
    bc.thm1_J = so.dbl_array("J", bc.thm1_J);
    bc.thm1_p = so.dbl_array("p", bc.thm1_p);
    so.finish();
  }
  if (const json* s = top.object("global_decode")) {
    detail::StrictObject so(*s, ".global_decode");
    bc.thm2_K = so.u64("K", bc.thm2_K);
    bc.thm2_p = so.dbl("p", bc.thm2_p);
    bc.thm2_J = so.dbl("J", bc.thm2_J);
    bc.thm2_c = so.dbl_array("c", bc.thm2_c);
    bc.thm2_snr_db = so.dbl_array("snr_db", bc.thm2_snr_db);
    so.finish();
  }
  top.finish();

  if (bc.threads < 1)
    throw ConfigError("config: key 'threads' must be at least 1");
  if (bc.trials < 10000)
    throw ConfigError("config: key 'trials' must be at least 10000");
  if (!bc.run_prop1 && !bc.run_thm1 && !bc.run_thm2)
    throw ConfigError("config: all bound families are disabled; empty grid");
  for (double J : bc.prop1_J)
    if (!(J > 0.0))
      throw ConfigError("config.local_vote: GSNR values must be positive");
  for (std::uint64_t s : bc.prop1_s)
    if (s < 1)
      throw ConfigError("config.local_vote: ballot counts must be positive");
  if (bc.thm1_K < 1 || bc.thm2_K < 1)
    throw ConfigError("config: worker counts must be positive");
  for (double J : bc.thm1_J)
    if (!(J > 0.0))
      throw ConfigError("config.hierarchical_vote: GSNR values must be positive");
  for (double p : bc.thm1_p)
    if (!(p > 0.0 && p <= 1.0))
      throw ConfigError(
          "config.hierarchical_vote: allocation probabilities must be in (0, 1]");
  if (!(bc.thm2_p > 0.0 && bc.thm2_p <= 1.0))
    throw ConfigError(
        "config.global_decode: allocation probability must be in (0, 1]");
  if (!(bc.thm2_J > 0.0))
    throw ConfigError("config.global_decode: GSNR must be positive");
  for (double c : bc.thm2_c)
    if (!(c >= 0.0 && c < 1.0))
      throw ConfigError(
          "config.global_decode: corruption levels must be in [0, 1)");
  for (double snr : bc.thm2_snr_db)
    if (std::isnan(snr))
      throw ConfigError("config.global_decode: snr_db must be numbers");
  return bc;
}

}  // namespace airvote::cli
