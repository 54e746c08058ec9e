#include "collex/closure_system.hpp"

#include <algorithm>
#include <unordered_set>

namespace collex {

void require_enumerable(std::size_t universe_size, std::string_view what) {
  if (universe_size > kEnumerationCap)
    throw CapacityError(std::string(what) + ": |M| = " + std::to_string(universe_size) + " exceeds cap " +
                        std::to_string(kEnumerationCap));
}

ClosureSystem::ClosureSystem(UniversePtr universe, std::vector<AttributeSet> sets)
    : universe_(std::move(universe)), sets_(std::move(sets)) {
  if (!universe_) throw InvariantError("closure system without universe");
  for (const auto& s : sets_) universe_->check(s.universe_size());
  normalize();
  if (!contains(AttributeSet::full(universe_->size())))
    throw InvariantError("closure system must contain M");
  for (std::size_t i = 0; i < sets_.size(); ++i)
    for (std::size_t j = i + 1; j < sets_.size(); ++j)
      if (!contains(sets_[i] & sets_[j]))
        throw InvariantError("family is not closed under intersection: " + universe_->format(sets_[i]) + " ∩ " +
                             universe_->format(sets_[j]));
}

ClosureSystem::ClosureSystem(UniversePtr universe, std::vector<AttributeSet> sets, Unchecked)
    : universe_(std::move(universe)), sets_(std::move(sets)) {
  normalize();
}

void ClosureSystem::normalize() {
  std::sort(sets_.begin(), sets_.end(), LecticLess<AttributeTag>{});
  sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
}

ClosureSystem ClosureSystem::generated_by(UniversePtr universe, const std::vector<AttributeSet>& family) {
  const auto n = universe->size();
  std::unordered_set<AttributeSet, IndexSetHash<AttributeTag>> seen;
  std::vector<AttributeSet> members;
  auto add = [&](const AttributeSet& s) {
    if (seen.insert(s).second) members.push_back(s);
  };
  add(AttributeSet::full(n));
  for (const auto& f : family) {
    universe->check(f.universe_size());
    // Intersect the new generator with everything so far; the result stays closed.
    const std::size_t before = members.size();
    add(f);
    for (std::size_t i = 0; i < before; ++i) add(members[i] & f);
  }
  return ClosureSystem(std::move(universe), std::move(members), Unchecked{});
}

ClosureSystem ClosureSystem::power_set(UniversePtr universe) {
  const auto n = universe->size();
  require_enumerable(n, "power_set");
  std::vector<AttributeSet> sets;
  sets.reserve(std::size_t{1} << n);
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) sets.push_back(from_lectic_rank(n, r));
  return ClosureSystem(std::move(universe), std::move(sets), Unchecked{});
}

ClosureSystem ClosureSystem::trivial(UniversePtr universe) {
  const auto n = universe->size();
  return ClosureSystem(std::move(universe), {AttributeSet::full(n)}, Unchecked{});
}

bool ClosureSystem::contains(const AttributeSet& s) const {
  universe_->check(s.universe_size());
  return std::binary_search(sets_.begin(), sets_.end(), s, LecticLess<AttributeTag>{});
}

AttributeSet ClosureSystem::closure(const AttributeSet& a) const {
  universe_->check(a.universe_size());
  auto result = AttributeSet::full(universe_->size());
  for (const auto& s : sets_)
    if (a.is_subset_of(s)) result &= s;
  return result;
}

bool operator==(const ClosureSystem& a, const ClosureSystem& b) {
  return same_universe(a.universe_, b.universe_) && a.sets_ == b.sets_;
}

UniversePtr sub_universe(const Universe& universe, const AttributeSet& block) {
  return make_universe(universe.names_of(block));
}

std::vector<AttributeSet> restrict_in_place(const ClosureSystem& system, const AttributeSet& block) {
  system.universe()->check(block.universe_size());
  std::unordered_set<AttributeSet, IndexSetHash<AttributeTag>> seen;
  std::vector<AttributeSet> out;
  for (const auto& x : system.sets()) {
    auto r = x & block;
    if (seen.insert(r).second) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), LecticLess<AttributeTag>{});
  return out;
}

ClosureSystem restrict_to(const ClosureSystem& system, const AttributeSet& block) {
  const auto members = block.indices();
  auto universe = sub_universe(*system.universe(), block);
  std::vector<AttributeSet> sets;
  for (const auto& x : restrict_in_place(system, block)) {
    AttributeSet local(members.size());
    for (std::size_t k = 0; k < members.size(); ++k)
      if (x.contains(members[k])) local.insert(k);
    sets.push_back(std::move(local));
  }
  // X_N is intersection-closed and contains N, so no validation pass is needed.
  return ClosureSystem(std::move(universe), std::move(sets), ClosureSystem::Unchecked{});
}

}  // namespace collex
