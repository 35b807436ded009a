#include "minfo/harness/results.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "minfo/errors.hpp"

namespace minfo::harness {

using nlohmann::json;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

template <typename T>
std::string cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>) {
    return fixed6(*v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return *v;
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
json field(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> read(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.method << ',' << cell(r.k) << ',' << cell(r.rho) << ','
       << cell(r.f) << ',' << cell(r.sigma) << ',' << cell(r.estimate_nats) << ','
       << cell(r.truth_nats) << ',' << cell(r.abs_err) << ',' << r.seed << ',' << cell(r.wall_ms)
       << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"experiment", r.experiment},
                   {"method", r.method},
                   {"k", field(r.k)},
                   {"rho", field(r.rho)},
                   {"f", field(r.f)},
                   {"sigma", field(r.sigma)},
                   {"estimate_nats", field(r.estimate_nats)},
                   {"truth_nats", field(r.truth_nats)},
                   {"abs_err", field(r.abs_err)},
                   {"seed", r.seed},
                   {"wall_ms", field(r.wall_ms)}});
  }
  os << arr.dump(2) << '\n';
}

std::vector<ResultRow> parse_json_rows(std::string_view text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw ArgumentError("result document must be a JSON array");
  std::vector<ResultRow> rows;
  for (const auto& o : arr) {
    ResultRow r;
    r.experiment = o.at("experiment").get<std::string>();
    r.method = o.at("method").get<std::string>();
    r.k = read<std::uint64_t>(o, "k");
    r.rho = read<double>(o, "rho");
    r.f = read<std::string>(o, "f");
    r.sigma = read<double>(o, "sigma");
    r.estimate_nats = read<double>(o, "estimate_nats");
    r.truth_nats = read<double>(o, "truth_nats");
    r.abs_err = read<double>(o, "abs_err");
    r.seed = o.at("seed").get<std::uint64_t>();
    r.wall_ms = read<double>(o, "wall_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render(const std::vector<ResultRow>& rows, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    write_csv(os, rows);
  } else {
    write_json(os, rows);
  }
  return os.str();
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  write_text(render(rows, format), path);
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("out", "cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw ConfigError("out", "failed writing '" + path + "'");
}

}  // namespace minfo::harness
