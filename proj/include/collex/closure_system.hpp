#pragma once

#include <cstddef>
#include <vector>

#include "collex/index_set.hpp"
#include "collex/universe.hpp"

namespace collex {

// Exhaustive scans over P(M) are refused beyond this size.
inline constexpr std::size_t kEnumerationCap = 24;

void require_enumerable(std::size_t universe_size, std::string_view what);

/// Family of subsets of M that contains M and is closed under intersection.
///
/// Members are kept unique and sorted in lectic order.
class ClosureSystem {
 public:
  struct Unchecked {};

  // Throws InvariantError if M is missing or the family is not intersection-closed.
  ClosureSystem(UniversePtr universe, std::vector<AttributeSet> sets);
  // For callers that construct the family by a closure algorithm.
  ClosureSystem(UniversePtr universe, std::vector<AttributeSet> sets, Unchecked);

  // Smallest closure system containing the family: adds M and all intersections.
  static ClosureSystem generated_by(UniversePtr universe, const std::vector<AttributeSet>& family);
  static ClosureSystem power_set(UniversePtr universe);
  static ClosureSystem trivial(UniversePtr universe);  // {M}

  const UniversePtr& universe() const noexcept { return universe_; }
  const std::vector<AttributeSet>& sets() const noexcept { return sets_; }
  std::size_t size() const noexcept { return sets_.size(); }

  bool contains(const AttributeSet& s) const;

  // Intersection of all members containing a (M if none can, which cannot
  // happen since M is a member).
  AttributeSet closure(const AttributeSet& a) const;

  friend bool operator==(const ClosureSystem& a, const ClosureSystem& b);

 private:
  void normalize();

  UniversePtr universe_;
  std::vector<AttributeSet> sets_;
};

// X_N = { X ∩ N | X ∈ X }, re-indexed onto N's own universe.
ClosureSystem restrict_to(const ClosureSystem& system, const AttributeSet& block);

// Same family, but kept over the full universe M (members are X ∩ N).
std::vector<AttributeSet> restrict_in_place(const ClosureSystem& system, const AttributeSet& block);

// The sub-universe of M consisting of the block's attributes in M's order.
UniversePtr sub_universe(const Universe& universe, const AttributeSet& block);

}  // namespace collex
