#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "parlab/common/error.hpp"

namespace parlab::lab {

// Strict reader over one JSON object. Every key must be consumed through
// req/opt/child before done(), which rejects anything left over. All
// failures are SchemaError with a dotted path.
class Fields {
 public:
  Fields(const nlohmann::json& j, std::string path);

  bool has(const std::string& key) const { return j_->contains(key); }
  const std::string& path() const { return path_; }

  template <class T>
  T req(const std::string& key) {
    if (!has(key)) fail(key, "is required");
    seen_.insert(key);
    return convert<T>(j_->at(key), at(key));
  }

  template <class T>
  T opt(const std::string& key, T fallback) {
    if (!has(key) || j_->at(key).is_null()) {
      seen_.insert(key);
      return fallback;
    }
    return req<T>(key);
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    seen_.insert(key);
    if (!has(key) || j_->at(key).is_null()) return std::nullopt;
    return convert<T>(j_->at(key), at(key));
  }

  Fields child(const std::string& key);
  std::optional<Fields> maybe_child(const std::string& key);
  // Raw access for values handled elsewhere; marks the key as consumed.
  const nlohmann::json& raw(const std::string& key);

  void done() const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  static T convert(const nlohmann::json& v, const std::string& where);

  const nlohmann::json* j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
T Fields::convert(const nlohmann::json& v, const std::string& where) {
  auto bad = [&](const char* expected) -> T {
    throw SchemaError(where + ": expected " + expected);
  };
  if constexpr (std::is_same_v<T, bool>) {
    return v.is_boolean() ? v.get<bool>() : bad("a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v.is_string() ? v.get<std::string>() : bad("a string");
  } else if constexpr (std::is_same_v<T, double>) {
    return v.is_number() ? v.get<double>() : bad("a number");
  } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      return bad("a non-negative integer");
    }
    return static_cast<T>(v.get<std::uint64_t>());
  } else if constexpr (std::is_integral_v<T>) {
    return v.is_number_integer() ? static_cast<T>(v.get<std::int64_t>()) : bad("an integer");
  } else {
    if (!v.is_array()) return bad("an array");
    T out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(convert<typename T::value_type>(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
}

}  // namespace parlab::lab
