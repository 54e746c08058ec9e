#include "collex/universe.hpp"

#include <algorithm>

namespace collex {

Universe::Universe(std::vector<std::string> names) : names_(std::move(names)) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw UniverseError("empty name at position " + std::to_string(i));
    if (!index_.emplace(names_[i], i).second) throw UniverseError("duplicate name '" + names_[i] + "'");
  }
}

std::optional<std::size_t> Universe::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Universe::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UniverseError("unknown name '" + std::string(name) + "'");
}

void Universe::check(std::size_t set_size) const {
  if (set_size != names_.size())
    throw UniverseError("set of size " + std::to_string(set_size) + " used with universe of size " +
                        std::to_string(names_.size()));
}

UniversePtr make_universe(std::vector<std::string> names) {
  return std::make_shared<const Universe>(std::move(names));
}

bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_universe(const UniversePtr& a, const UniversePtr& b, std::string_view what) {
  if (!same_universe(a, b)) throw UniverseError(std::string(what) + ": universe mismatch");
}

std::string quote_name(const std::string& name) {
  const bool plain = std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '"' || c == '#' || c == ':' || c == '\n' || c == '\r';
  }) && name != "->" && name.rfind('+', 0) != 0 && name.rfind('-', 0) != 0;
  if (plain) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace collex
