#pragma once

#include <stdexcept>
#include <string>

namespace uam {

// Configuration could not be parsed or violates a semantic constraint.
// `key()` is the dotted path of the offending entry ("fleet.vehicles[2].spec").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Syntax error in a JSON document, with 1-based line/column.
class ParseError : public ConfigError {
 public:
  ParseError(int line, int column, const std::string& message)
      : ConfigError("", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                            message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// A model operation received inputs outside its domain (payload above
// maximum, non-positive C-rate, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The model is well-formed but cannot satisfy a requirement (design mission
// infeasible, battery beyond validity, profile infeasible when fresh).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uam
