#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "minfo/estimator.hpp"
#include "minfo/sampling.hpp"
#include "minfo/theory.hpp"

namespace minfo::harness {

enum class Experiment { Estimate, Sweep, Equitability, Ksg, GradCheck, Complexity };
enum class OutputFormat { Csv, Json };
enum class DataKind { Gaussian, Nonlinear };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);

struct RunConfig {
  Experiment experiment = Experiment::Estimate;

  DataKind data = DataKind::Gaussian;
  GaussianSpec gaussian{1, 0.5};
  NonlinearSpec nonlinear{};

  std::vector<double> rho_grid{-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> sigma_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

  std::size_t samples = 5000;  // KSG sample count
  std::size_t ksg_k = 3;

  EstimatorConfig estimator{};

  std::size_t gradcheck_trials = 20;
  double gradcheck_tol = 1e-4;

  ComplexityInputs complexity{};

  std::string out = "-";
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 0;  // 0: one per hardware thread
  bool timing = false;   // wall_ms column; off keeps outputs byte-reproducible

  // Throws ConfigError naming the first violated field.
  void validate() const;
};

// Applies the keys of a flat JSON object (plus an optional nested "estimator"
// object) onto cfg. Unknown keys and mistyped values throw ConfigError.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);

// File document first, then flag overrides, then validation.
RunConfig parse_config(std::optional<std::string_view> file_text,
                       const nlohmann::json& flag_overrides = nlohmann::json::object());

}  // namespace minfo::harness
