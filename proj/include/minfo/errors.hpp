#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace minfo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value outside an operation's domain (|rho| >= 1, negative norm cap, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced or consumed. Training failures carry the step index.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::optional<std::size_t> step = std::nullopt)
      : Error(step ? what + " (step " + std::to_string(*step) + ")" : what), step_(step) {}

  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::optional<std::size_t> step_;
};

// Invalid configuration: the offending key is kept so the CLI can name it.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace minfo
