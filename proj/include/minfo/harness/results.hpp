#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minfo/harness/config.hpp"

namespace minfo::harness {

// One output line. Columns that do not apply to a row stay empty.
struct ResultRow {
  std::string experiment;
  std::string method;
  std::optional<std::uint64_t> k;
  std::optional<double> rho;
  std::optional<std::string> f;
  std::optional<double> sigma;
  std::optional<double> estimate_nats;  // empty for a failed run
  std::optional<double> truth_nats;     // Gaussian data only
  std::optional<double> abs_err;
  std::uint64_t seed = 0;
  std::optional<double> wall_ms;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "experiment,method,k,rho,f,sigma,estimate_nats,truth_nats,abs_err,seed,wall_ms";

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_json_rows(std::string_view text);

// Writes rows to path ("-" is standard output). Throws ConfigError("out") when
// the file cannot be written.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);

// Renders rows to a string in the given format.
std::string render(const std::vector<ResultRow>& rows, OutputFormat format);

// Writes text to path ("-" is standard output); ConfigError("out") on failure.
void write_text(const std::string& text, const std::string& path);

}  // namespace minfo::harness
