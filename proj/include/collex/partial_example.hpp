#pragma once

#include <string>

#include "collex/implication.hpp"
#include "collex/index_set.hpp"

namespace collex {

/// Named object with attributes known to hold and known not to hold; the
/// rest are unknown.
struct PartialExample {
  std::string name;
  AttributeSet present;
  AttributeSet absent;

  // Throws InvariantError on overlapping present/absent sets.
  void validate() const;

  friend bool operator==(const PartialExample&, const PartialExample&) = default;
};

// premise ⊆ present and conclusion ∩ absent ≠ ∅
bool refutes(const PartialExample& e, const Implication& f);

// Union of presents and of absents; ConflictingEvidenceError on a clash.
PartialExample merge(const PartialExample& a, const PartialExample& b);

}  // namespace collex
