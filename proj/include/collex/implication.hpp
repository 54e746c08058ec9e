#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "collex/closure_system.hpp"
#include "collex/index_set.hpp"
#include "collex/universe.hpp"

namespace collex {

struct Implication {
  AttributeSet premise;
  AttributeSet conclusion;

  // premise ∪ conclusion
  AttributeSet support() const { return premise | conclusion; }
  bool is_trivial() const { return conclusion.is_subset_of(premise); }
  // Same implication with the premise stripped from the conclusion.
  Implication normalized() const { return {premise, conclusion - premise}; }

  friend bool operator==(const Implication& a, const Implication& b) {
    return a.premise == b.premise && a.conclusion == b.conclusion;
  }
};

/// Ordered list of distinct implications over one universe.
class ImplicationTheory {
 public:
  explicit ImplicationTheory(UniversePtr universe) : universe_(std::move(universe)) {}
  ImplicationTheory(UniversePtr universe, std::vector<Implication> implications);

  const UniversePtr& universe() const noexcept { return universe_; }
  const std::vector<Implication>& implications() const noexcept { return implications_; }
  std::size_t size() const noexcept { return implications_.size(); }
  bool empty() const noexcept { return implications_.empty(); }

  // Returns false if the pair is already present.
  bool add(Implication f);
  bool remove(const Implication& f);
  bool contains(const Implication& f) const;

  auto begin() const { return implications_.begin(); }
  auto end() const { return implications_.end(); }

  // Same universe names and the same implications in the same order.
  friend bool operator==(const ImplicationTheory& a, const ImplicationTheory& b) {
    return *a.universe_ == *b.universe_ && a.implications_ == b.implications_;
  }

 private:
  UniversePtr universe_;
  std::vector<Implication> implications_;
};

bool holds_in(const Implication& f, const ClosureSystem& system);
bool holds_in(const Implication& f, const AttributeSet& set);  // a single model candidate
bool respects(const AttributeSet& set, const ImplicationTheory& theory);

// Least superset of a closed under every implication (forward chaining).
AttributeSet close_under_theory(const ImplicationTheory& theory, const AttributeSet& a);

// Does the theory entail f?
bool entails(const ImplicationTheory& theory, const Implication& f);

// X_F by filtering P(M); |M| <= kEnumerationCap.
ClosureSystem models_of(const ImplicationTheory& theory);

/// Duquenne–Guigues base of a closure system (pseudo-intent premises,
/// closed conclusions), in lectic order of premises.
ImplicationTheory canonical_base(const ClosureSystem& system);

/// Duquenne–Guigues base of the closure operator a theory defines, computed
/// from the theory itself without enumerating P(M).
ImplicationTheory canonical_base(const ImplicationTheory& theory);

// Conclusions with the premise removed; drops trivial implications.
ImplicationTheory normalized(const ImplicationTheory& theory);

// Same closure operator?
bool equivalent(const ImplicationTheory& a, const ImplicationTheory& b);

// Smallest set strictly after `current` in lectic order that is closed
// under `close`; nullopt when `current` is the last one.
template <class Close>
std::optional<AttributeSet> next_closure(const AttributeSet& current, Close&& close) {
  const auto n = current.universe_size();
  AttributeSet a = current;
  for (std::size_t k = n; k-- > 0;) {
    if (a.contains(k)) {
      a.erase(k);
      continue;
    }
    AttributeSet b = close(a.with(k));
    // Accept if b adds nothing below k.
    if ((b - a).prefix(k).empty()) return b;
  }
  return std::nullopt;
}

}  // namespace collex
