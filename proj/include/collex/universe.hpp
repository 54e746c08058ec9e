#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "collex/index_set.hpp"

namespace collex {

/// Ordered list of unique names with a stable index per name.
///
/// Used for attribute sets (M) and object sets (G). Two universes are the
/// same when their name lists are equal; identity does not matter.
class Universe {
 public:
  explicit Universe(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws UniverseError

  template <class Tag = AttributeTag>
  IndexSet<Tag> set_of(const std::vector<std::string>& names) const {
    IndexSet<Tag> s(size());
    for (const auto& n : names) s.insert(index_of(n));
    return s;
  }

  template <class Tag>
  std::vector<std::string> names_of(const IndexSet<Tag>& s) const {
    check(s.universe_size());
    std::vector<std::string> out;
    for (auto i = s.first(); i != IndexSet<Tag>::npos; i = s.next(i)) out.push_back(names_[i]);
    return out;
  }

  // "{ro,fl}"; "{}" for the empty set.
  template <class Tag>
  std::string format(const IndexSet<Tag>& s) const {
    std::string out = "{";
    bool first = true;
    for (const auto& n : names_of(s)) {
      if (!first) out += ',';
      out += n;
      first = false;
    }
    return out + "}";
  }

  // Space separated names, as used by the text formats.
  template <class Tag>
  std::string join(const IndexSet<Tag>& s) const;

  void check(std::size_t set_size) const;

  friend bool operator==(const Universe& a, const Universe& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using UniversePtr = std::shared_ptr<const Universe>;

UniversePtr make_universe(std::vector<std::string> names);

bool same_universe(const UniversePtr& a, const UniversePtr& b);
void require_same_universe(const UniversePtr& a, const UniversePtr& b, std::string_view what);

// Names containing whitespace, quotes or format punctuation are written in
// double quotes so the line formats stay parseable.
std::string quote_name(const std::string& name);

template <class Tag>
std::string Universe::join(const IndexSet<Tag>& s) const {
  std::string out;
  for (const auto& n : names_of(s)) {
    if (!out.empty()) out += ' ';
    out += quote_name(n);
  }
  return out;
}

}  // namespace collex
