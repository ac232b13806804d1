#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/error.hpp"

namespace uam {

// Parses a JSON document, converting syntax errors into ParseError with
// line/column.
nlohmann::json parse_json(std::string_view text);

// Typed, path-tracking view over a JSON object. Every failure raises
// ConfigError naming the dotted key path.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& node, std::string path);

  const std::string& path() const noexcept { return path_; }
  const nlohmann::json& raw() const noexcept { return *node_; }
  std::string key_path(std::string_view key) const;

  bool has(std::string_view key) const;

  template <class T>
  T required(std::string_view key) const {
    if (!has(key)) fail(key, "missing required key");
    return convert<T>(node_->at(std::string(key)), key_path(key));
  }

  template <class T>
  T optional(std::string_view key, T fallback) const {
    if (!has(key)) return fallback;
    return convert<T>(node_->at(std::string(key)), key_path(key));
  }

  JsonReader object(std::string_view key) const;
  std::vector<JsonReader> objects(std::string_view key) const;

  // Unknown keys are an error so that typos never silently fall back to defaults.
  void only_keys(std::initializer_list<std::string_view> known) const;

  [[noreturn]] void fail(std::string_view key, const std::string& message) const;

  template <class T>
  static T convert(const nlohmann::json& value, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw ConfigError(where, "expected a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw ConfigError(where, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (value.is_number_unsigned()) return static_cast<T>(value.get<std::uint64_t>());
        auto v = value.get<std::int64_t>();
        if (v < 0) throw ConfigError(where, "expected a non-negative integer");
        return static_cast<T>(v);
      } else {
        return static_cast<T>(value.get<std::int64_t>());
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw ConfigError(where, "expected a number");
      return value.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw ConfigError(where, "expected a string");
      return value.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!value.is_array()) throw ConfigError(where, "expected an array of numbers");
      std::vector<double> out;
      for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(convert<double>(value[i], where + "[" + std::to_string(i) + "]"));
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported JsonReader type");
    }
  }

 private:
  const nlohmann::json* node_;
  std::string path_;
};

}  // namespace uam
