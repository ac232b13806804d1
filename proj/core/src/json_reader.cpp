#include "uam/json_reader.hpp"

#include <algorithm>

namespace uam {
namespace {

void line_column(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

}  // namespace

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    int line = 0;
    int column = 0;
    // byte is 1-based and points one past the offending character
    line_column(text, e.byte == 0 ? 0 : e.byte - 1, line, column);
    std::string what = e.what();
    auto pos = what.find("parse error");
    throw ParseError(line, column, pos == std::string::npos ? what : what.substr(pos));
  }
}

JsonReader::JsonReader(const nlohmann::json& node, std::string path)
    : node_(&node), path_(std::move(path)) {
  if (!node.is_object()) throw ConfigError(path_, "expected an object");
}

std::string JsonReader::key_path(std::string_view key) const {
  if (path_.empty()) return std::string(key);
  return path_ + "." + std::string(key);
}

bool JsonReader::has(std::string_view key) const {
  auto it = node_->find(std::string(key));
  return it != node_->end() && !it->is_null();
}

JsonReader JsonReader::object(std::string_view key) const {
  if (!has(key)) fail(key, "missing required key");
  const auto& child = node_->at(std::string(key));
  if (!child.is_object()) fail(key, "expected an object");
  return JsonReader(child, key_path(key));
}

std::vector<JsonReader> JsonReader::objects(std::string_view key) const {
  std::vector<JsonReader> out;
  if (!has(key)) return out;
  const auto& arr = node_->at(std::string(key));
  if (!arr.is_array()) fail(key, "expected an array");
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = key_path(key) + "[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) throw ConfigError(p, "expected an object");
    out.emplace_back(arr[i], p);
  }
  return out;
}

void JsonReader::only_keys(std::initializer_list<std::string_view> known) const {
  for (const auto& item : node_->items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ConfigError(key_path(item.key()), "unknown key");
  }
}

void JsonReader::fail(std::string_view key, const std::string& message) const {
  throw ConfigError(key_path(key), message);
}

}  // namespace uam
