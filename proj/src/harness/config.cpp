#include "minfo/harness/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "minfo/errors.hpp"

namespace minfo::harness {

using nlohmann::json;

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Estimate: return "estimate";
    case Experiment::Sweep: return "sweep";
    case Experiment::Equitability: return "equitability";
    case Experiment::Ksg: return "ksg";
    case Experiment::GradCheck: return "gradcheck";
    case Experiment::Complexity: return "complexity";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto e : {Experiment::Estimate, Experiment::Sweep, Experiment::Equitability,
                       Experiment::Ksg, Experiment::GradCheck, Experiment::Complexity}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "'");
}

namespace {

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const std::string& key, const json& v) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    throw ConfigError(key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::vector<double> as_numbers(const std::string& key, const json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(key, e));
  return out;
}

std::vector<std::size_t> as_counts(const std::string& key, const json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a non-empty array of integers");
  std::vector<std::size_t> out;
  for (const auto& e : v) out.push_back(as_count(key, e));
  return out;
}

// Wraps parse_* helpers that throw ArgumentError so the key is reported.
template <typename F>
auto keyed(const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const ArgumentError& e) {
    throw ConfigError(key, e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const json&)>;

const std::map<std::string, Setter, std::less<>>& estimator_keys() {
  static const std::map<std::string, Setter, std::less<>> keys{
      {"objective", [](RunConfig& c, const std::string& k, const json& v) {
         c.estimator.objective = keyed(k, [&] { return parse_objective(as_string(k, v)); });
       }},
      {"marginal", [](RunConfig& c, const std::string& k, const json& v) {
         c.estimator.marginal_mode = keyed(k, [&] { return parse_marginal_mode(as_string(k, v)); });
       }},
      {"steps", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.steps = as_count(k, v); }},
      {"batch_size", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.batch_size = as_count(k, v); }},
      {"hidden", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.hidden = as_counts(k, v); }},
      {"activation", [](RunConfig& c, const std::string& k, const json& v) {
         const auto s = as_string(k, v);
         if (s == "relu") c.estimator.activation = Activation::ReLU;
         else if (s == "elu") c.estimator.activation = Activation::ELU;
         else throw ConfigError(k, "expected relu or elu");
       }},
      {"ema_rate", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.ema_rate = as_number(k, v); }},
      {"no_ema", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.use_ema_correction = !as_bool(k, v); }},
      {"clip_cap", [](RunConfig& c, const std::string& k, const json& v) {
         if (v.is_null()) c.estimator.clip_cap.reset();
         else c.estimator.clip_cap = as_number(k, v);
       }},
      {"lr", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.optimizer.lr = as_number(k, v); }},
      {"beta1", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.optimizer.beta1 = as_number(k, v); }},
      {"beta2", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.optimizer.beta2 = as_number(k, v); }},
      {"adam_eps", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.optimizer.eps = as_number(k, v); }},
      {"eval_size", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.eval_size = as_count(k, v); }},
      {"eval_every", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.eval_every = as_count(k, v); }},
      {"smoothing_window", [](RunConfig& c, const std::string& k, const json& v) { c.estimator.smoothing_window = as_count(k, v); }},
  };
  return keys;
}

const std::map<std::string, Setter, std::less<>>& top_keys() {
  static const std::map<std::string, Setter, std::less<>> keys{
      {"experiment", [](RunConfig& c, const std::string& k, const json& v) { c.experiment = parse_experiment(as_string(k, v)); }},
      {"data", [](RunConfig& c, const std::string& k, const json& v) {
         const auto s = as_string(k, v);
         if (s == "gaussian") c.data = DataKind::Gaussian;
         else if (s == "nonlinear") c.data = DataKind::Nonlinear;
         else throw ConfigError(k, "expected gaussian or nonlinear");
       }},
      {"rho", [](RunConfig& c, const std::string& k, const json& v) { c.gaussian.rho = as_number(k, v); }},
      {"k", [](RunConfig& c, const std::string& k, const json& v) { c.gaussian.k = as_count(k, v); }},
      {"f", [](RunConfig& c, const std::string& k, const json& v) {
         c.nonlinear.f = keyed(k, [&] { return parse_nonlinearity(as_string(k, v)); });
       }},
      {"sigma", [](RunConfig& c, const std::string& k, const json& v) { c.nonlinear.sigma = as_number(k, v); }},
      {"dim", [](RunConfig& c, const std::string& k, const json& v) { c.nonlinear.dim = as_count(k, v); }},
      {"rho_grid", [](RunConfig& c, const std::string& k, const json& v) { c.rho_grid = as_numbers(k, v); }},
      {"sigma_grid", [](RunConfig& c, const std::string& k, const json& v) { c.sigma_grid = as_numbers(k, v); }},
      {"samples", [](RunConfig& c, const std::string& k, const json& v) { c.samples = as_count(k, v); }},
      {"ksg_k", [](RunConfig& c, const std::string& k, const json& v) { c.ksg_k = as_count(k, v); }},
      {"gradcheck_trials", [](RunConfig& c, const std::string& k, const json& v) { c.gradcheck_trials = as_count(k, v); }},
      {"gradcheck_tol", [](RunConfig& c, const std::string& k, const json& v) { c.gradcheck_tol = as_number(k, v); }},
      {"d", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.d = as_number(k, v); }},
      {"M", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.M = as_number(k, v); }},
      {"L", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.L = as_number(k, v); }},
      {"K", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.K = as_number(k, v); }},
      {"eps", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.eps = as_number(k, v); }},
      {"delta", [](RunConfig& c, const std::string& k, const json& v) { c.complexity.delta = as_number(k, v); }},
      {"out", [](RunConfig& c, const std::string& k, const json& v) { c.out = as_string(k, v); }},
      {"format", [](RunConfig& c, const std::string& k, const json& v) {
         const auto s = as_string(k, v);
         if (s == "csv") c.format = OutputFormat::Csv;
         else if (s == "json") c.format = OutputFormat::Json;
         else throw ConfigError(k, "expected csv or json");
       }},
      {"seed", [](RunConfig& c, const std::string& k, const json& v) { c.base_seed = as_u64(k, v); }},
      {"jobs", [](RunConfig& c, const std::string& k, const json& v) { c.jobs = as_count(k, v); }},
      {"timing", [](RunConfig& c, const std::string& k, const json& v) { c.timing = as_bool(k, v); }},
  };
  return keys;
}

void apply_estimator(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ConfigError("estimator", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    const auto it = estimator_keys().find(key);
    if (it == estimator_keys().end()) throw ConfigError("estimator." + key, "unknown key");
    it->second(cfg, key, value);
  }
}

}  // namespace

void apply_json(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "estimator") {
      apply_estimator(cfg, value);
      continue;
    }
    if (const auto it = top_keys().find(key); it != top_keys().end()) {
      it->second(cfg, key, value);
    } else if (const auto est = estimator_keys().find(key); est != estimator_keys().end()) {
      est->second(cfg, key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
}

void RunConfig::validate() const {
  if (gaussian.k < 1) throw ConfigError("k", "must be at least 1");
  if (!(std::fabs(gaussian.rho) < 1.0)) throw ConfigError("rho", "|rho| must be < 1");
  for (const double r : rho_grid) {
    if (!(std::fabs(r) < 1.0)) throw ConfigError("rho_grid", "every |rho| must be < 1");
  }
  for (const double s : sigma_grid) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma_grid", "every sigma must be >= 0");
  }
  if (!(nonlinear.sigma >= 0.0) || !std::isfinite(nonlinear.sigma)) throw ConfigError("sigma", "must be >= 0");
  if (nonlinear.dim < 1) throw ConfigError("dim", "must be at least 1");
  if (ksg_k < 1) throw ConfigError("ksg_k", "must be at least 1");
  if (samples <= ksg_k) throw ConfigError("samples", "must exceed ksg_k");
  if (gradcheck_trials < 1) throw ConfigError("gradcheck_trials", "must be at least 1");
  if (!(gradcheck_tol > 0.0)) throw ConfigError("gradcheck_tol", "must be > 0");
  if (out.empty()) throw ConfigError("out", "must name a file or '-'");
  estimator.validate();
  if (experiment == Experiment::Complexity) {
    try {
      (void)sample_complexity(complexity);
    } catch (const ArgumentError& e) {
      throw ConfigError("complexity", e.what());
    }
  }
}

RunConfig parse_config(std::optional<std::string_view> file_text, const json& flag_overrides) {
  RunConfig cfg;
  if (file_text) {
    json doc;
    try {
      doc = json::parse(*file_text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("malformed configuration document: ") + e.what());
    }
    apply_json(cfg, doc);
  }
  apply_json(cfg, flag_overrides);
  cfg.validate();
  return cfg;
}

}  // namespace minfo::harness
