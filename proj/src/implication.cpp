#include "collex/implication.hpp"

#include <algorithm>

namespace collex {

namespace {

bool lectic_premise_less(const Implication& a, const Implication& b) {
  if (a.premise == b.premise) return lectic_less(a.conclusion, b.conclusion);
  return lectic_less(a.premise, b.premise);
}

// Forward chaining over an explicit list; `skip` excludes one position.
AttributeSet chain(const std::vector<Implication>& imps, AttributeSet a, std::size_t skip = SIZE_MAX) {
  std::vector<bool> fired(imps.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < imps.size(); ++i) {
      if (i == skip || fired[i]) continue;
      if (imps[i].premise.is_subset_of(a)) {
        fired[i] = true;
        if (!imps[i].conclusion.is_subset_of(a)) {
          a |= imps[i].conclusion;
          changed = true;
        }
      }
    }
  }
  return a;
}

}  // namespace

ImplicationTheory::ImplicationTheory(UniversePtr universe, std::vector<Implication> implications)
    : universe_(std::move(universe)) {
  for (auto& f : implications) add(std::move(f));
}

bool ImplicationTheory::add(Implication f) {
  universe_->check(f.premise.universe_size());
  universe_->check(f.conclusion.universe_size());
  if (contains(f)) return false;
  implications_.push_back(std::move(f));
  return true;
}

bool ImplicationTheory::remove(const Implication& f) {
  auto it = std::find(implications_.begin(), implications_.end(), f);
  if (it == implications_.end()) return false;
  implications_.erase(it);
  return true;
}

bool ImplicationTheory::contains(const Implication& f) const {
  return std::find(implications_.begin(), implications_.end(), f) != implications_.end();
}

bool holds_in(const Implication& f, const AttributeSet& set) {
  return !f.premise.is_subset_of(set) || f.conclusion.is_subset_of(set);
}

bool holds_in(const Implication& f, const ClosureSystem& system) {
  system.universe()->check(f.premise.universe_size());
  system.universe()->check(f.conclusion.universe_size());
  return std::all_of(system.sets().begin(), system.sets().end(),
                     [&](const AttributeSet& x) { return holds_in(f, x); });
}

bool respects(const AttributeSet& set, const ImplicationTheory& theory) {
  return std::all_of(theory.begin(), theory.end(), [&](const Implication& f) { return holds_in(f, set); });
}

AttributeSet close_under_theory(const ImplicationTheory& theory, const AttributeSet& a) {
  theory.universe()->check(a.universe_size());
  return chain(theory.implications(), a);
}

bool entails(const ImplicationTheory& theory, const Implication& f) {
  return f.conclusion.is_subset_of(close_under_theory(theory, f.premise));
}

ClosureSystem models_of(const ImplicationTheory& theory) {
  const auto n = theory.universe()->size();
  require_enumerable(n, "models_of");
  struct Mask {
    std::uint64_t premise, conclusion;
  };
  std::vector<Mask> masks;
  masks.reserve(theory.size());
  for (const auto& f : theory) masks.push_back({f.premise.to_mask(), f.conclusion.to_mask()});
  std::vector<AttributeSet> models;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    bool ok = true;
    for (const auto& m : masks) {
      if ((m.premise & ~x) == 0 && (m.conclusion & ~x) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) models.push_back(AttributeSet::from_mask(n, x));
  }
  return ClosureSystem(theory.universe(), std::move(models), ClosureSystem::Unchecked{});
}

ImplicationTheory canonical_base(const ClosureSystem& system) {
  const auto& universe = system.universe();
  ImplicationTheory base(universe);
  std::optional<AttributeSet> a = AttributeSet(universe->size());
  while (a) {
    auto closed = system.closure(*a);
    if (!(closed == *a)) base.add({*a, closed});
    a = next_closure(*a, [&](const AttributeSet& s) { return close_under_theory(base, s); });
  }
  return base;
}

ImplicationTheory canonical_base(const ImplicationTheory& theory) {
  std::vector<Implication> imps(theory.begin(), theory.end());

  // Close every conclusion under the whole theory.
  for (std::size_t i = 0; i < imps.size(); ++i)
    imps[i].conclusion = chain(imps, imps[i].premise | imps[i].conclusion, i);

  // Saturate each premise with the remaining implications; drop the ones that
  // become redundant.
  for (std::size_t i = 0; i < imps.size();) {
    auto premise = chain(imps, imps[i].premise, i);
    if (premise == imps[i].conclusion) {
      imps.erase(imps.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      imps[i].premise = std::move(premise);
      ++i;
    }
  }

  std::sort(imps.begin(), imps.end(), lectic_premise_less);
  return ImplicationTheory(theory.universe(), std::move(imps));
}

ImplicationTheory normalized(const ImplicationTheory& theory) {
  ImplicationTheory out(theory.universe());
  for (const auto& f : theory)
    if (!f.is_trivial()) out.add(f.normalized());
  return out;
}

bool equivalent(const ImplicationTheory& a, const ImplicationTheory& b) {
  require_same_universe(a.universe(), b.universe(), "equivalent");
  return std::all_of(a.begin(), a.end(), [&](const Implication& f) { return entails(b, f); }) &&
         std::all_of(b.begin(), b.end(), [&](const Implication& f) { return entails(a, f); });
}

}  // namespace collex
