#include "parlab/labcli/schema.hpp"

namespace parlab::lab {

Fields::Fields(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {
  if (!j.is_object()) throw SchemaError((path_.empty() ? "config" : path_) + ": expected an object");
}

Fields Fields::child(const std::string& key) {
  if (!has(key)) fail(key, "is required");
  seen_.insert(key);
  return Fields(j_->at(key), at(key));
}

std::optional<Fields> Fields::maybe_child(const std::string& key) {
  seen_.insert(key);
  if (!has(key) || j_->at(key).is_null()) return std::nullopt;
  return Fields(j_->at(key), at(key));
}

const nlohmann::json& Fields::raw(const std::string& key) {
  if (!has(key)) fail(key, "is required");
  seen_.insert(key);
  return j_->at(key);
}

void Fields::done() const {
  for (const auto& [key, value] : j_->items()) {
    if (!seen_.count(key)) throw SchemaError(at(key) + ": unknown key");
  }
}

void Fields::fail(const std::string& key, const std::string& what) const {
  throw SchemaError(at(key) + " " + what);
}

}  // namespace parlab::lab
