#include "collex/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

#include "collex/errors.hpp"

namespace collex {

namespace {

// Calls visit(s) for every size-r subset of `pool` in combination order
// (lexicographic on ascending member lists); stops when visit returns false.
template <class Visit>
void for_each_combination(const std::vector<std::size_t>& pool, std::size_t universe_size, std::size_t r,
                          Visit&& visit) {
  if (r > pool.size()) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    AttributeSet s(universe_size);
    for (auto i : idx) s.insert(pool[i]);
    if (!visit(s)) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == pool.size() - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

int premise_complexity(const ImplicationTheory& theory) {
  int c = -1;
  for (const auto& f : theory) c = std::max(c, static_cast<int>(f.premise.count()));
  return c;
}

int system_premise_complexity(const ClosureSystem& system) {
  const auto n = system.universe()->size();
  if (n > kComplexityCap)
    throw CapacityError("premise complexity is computed only for |M| <= " + std::to_string(kComplexityCap));
  const std::uint32_t top = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> members;
  for (const auto& s : system.sets()) members.push_back(static_cast<std::uint32_t>(s.to_mask()));
  std::vector<std::uint32_t> closure(std::size_t{top} + 1, top);
  for (std::uint32_t a = 0; a <= top; ++a)
    for (auto x : members)
      if ((a & x) == a) closure[a] &= x;

  // c(X) is the largest, over non-closed Y, of the smallest A ⊆ Y whose
  // closure escapes Y.
  int c = -1;
  for (std::uint32_t y = 0; y <= top; ++y) {
    if (closure[y] == y) continue;
    int best = static_cast<int>(n);
    for (std::uint32_t a = y;; a = (a - 1) & y) {
      const int size = std::popcount(a);
      if (size < best && (closure[a] & ~y) != 0) best = size;
      if (a == 0) break;
    }
    c = std::max(c, best);
  }
  return c;
}

int base_premise_complexity(const ClosureSystem& system) {
  require_enumerable(system.universe()->size(), "base_premise_complexity");
  return premise_complexity(canonical_base(system));
}

ImplicationTheory well_formed_valid(const ClosureSystem& system, const ConsortialDomain& domain) {
  require_same_universe(system.universe(), domain.universe(), "well_formed_valid");
  const auto n = system.universe()->size();
  ImplicationTheory out(system.universe());
  for (const auto& block : domain.blocks()) {
    const auto members = block.indices();
    if (members.size() > kConsistencyCap)
      throw CapacityError("block of size " + std::to_string(members.size()) + " exceeds cap " +
                          std::to_string(kConsistencyCap));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << members.size()); ++mask) {
      AttributeSet a(n);
      for (std::size_t k = 0; k < members.size(); ++k)
        if ((mask >> k) & 1U) a.insert(members[k]);
      Implication f{a, system.closure(a) & block};
      if (!f.is_trivial()) out.add(std::move(f));
    }
  }
  return out;
}

ClosureSystem reconstructed_system(const ClosureSystem& system, const ConsortialDomain& domain) {
  return models_of(well_formed_valid(system, domain));
}

CoverReport can_reconstruct_class(const ConsortialDomain& domain, int k) {
  CoverReport report{k, true, std::nullopt};
  if (k < -1) throw InvariantError("k must be at least -1");
  const auto n = domain.universe()->size();
  const auto r = static_cast<std::size_t>(k + 1);
  if (r > n) return report;
  require_enumerable(n, "can_reconstruct_class");
  for_each_combination(all_indices(n), n, r, [&](const AttributeSet& s) {
    for (const auto& b : domain.blocks())
      if (s.is_subset_of(b)) return true;
    report.covered = false;
    report.witness = s;
    return false;
  });
  return report;
}

bool is_steiner_system(const ConsortialDomain& domain, int t) {
  if (domain.size() == 0) throw MalformedDesignError("design without blocks");
  const auto size = domain.block(0).count();
  for (const auto& b : domain.blocks())
    if (b.count() != size) throw MalformedDesignError("blocks of unequal size");
  if (t < 0 || static_cast<std::size_t>(t) > size)
    throw MalformedDesignError("t = " + std::to_string(t) + " exceeds block size " + std::to_string(size));
  const auto n = domain.universe()->size();
  require_enumerable(n, "is_steiner_system");
  bool ok = true;
  for_each_combination(all_indices(n), n, static_cast<std::size_t>(t), [&](const AttributeSet& s) {
    std::size_t hits = 0;
    for (const auto& b : domain.blocks())
      if (s.is_subset_of(b)) ++hits;
    ok = hits == 1;
    return ok;
  });
  return ok;
}

std::vector<ClosureSystem> all_closure_systems(const UniversePtr& universe) {
  const auto n = universe->size();
  if (n > 4) throw CapacityError("closure systems are enumerated only for |M| <= 4");
  // Decide the subsets from M downwards in reverse lectic order, so every
  // superset of a set is decided before the set. A set that is the
  // intersection of chosen supersets is forced in; any other set is free.
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<AttributeSet> order;
  for (std::uint64_t r = total; r-- > 0;) order.push_back(from_lectic_rank(n, r));

  std::vector<ClosureSystem> out;
  std::vector<AttributeSet> chosen{order[0]};
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == order.size()) {
      out.emplace_back(universe, chosen, ClosureSystem::Unchecked{});
      return;
    }
    const auto& s = order[i];
    AttributeSet meet = AttributeSet::full(n);
    for (const auto& c : chosen)
      if (s.is_subset_of(c)) meet &= c;
    chosen.push_back(s);
    self(self, i + 1);
    chosen.pop_back();
    if (!(meet == s)) self(self, i + 1);
  };
  rec(rec, 1);
  return out;
}

std::vector<ClosureSystem> closure_systems_of_complexity(const UniversePtr& universe, int k) {
  std::vector<ClosureSystem> out;
  for (auto& x : all_closure_systems(universe))
    if (system_premise_complexity(x) <= k) out.push_back(std::move(x));
  return out;
}

std::optional<ClosureSystem> find_confounder(const ClosureSystem& system, const ConsortialDomain& domain,
                                             const std::vector<ClosureSystem>& candidates) {
  const auto target = reconstructed_system(system, domain);
  for (const auto& y : candidates)
    if (!(y == system) && reconstructed_system(y, domain) == target) return y;
  return std::nullopt;
}

bool verify_reconstruction(const ClosureSystem& system, const ConsortialDomain& domain,
                           const std::vector<ClosureSystem>& candidates) {
  return !find_confounder(system, domain, candidates);
}

bool verify_reconstruction(const ClosureSystem& system, const ConsortialDomain& domain,
                           const std::function<bool(const ClosureSystem&)>& in_class) {
  const auto target = reconstructed_system(system, domain);
  for (const auto& y : all_closure_systems(system.universe()))
    if (in_class(y) && !(y == system) && reconstructed_system(y, domain) == target) return false;
  return true;
}

std::optional<ConfounderPair> cover_confounder(const ConsortialDomain& domain, int k) {
  auto report = can_reconstruct_class(domain, k);
  if (report.covered) return std::nullopt;
  const auto& m = domain.universe();
  const auto& w = *report.witness;
  std::size_t b = w.first();
  for (auto i = w.first(); i != AttributeSet::npos; i = w.next(i)) b = i;
  auto premise = w;
  premise.erase(b);
  ImplicationTheory single(m, {Implication{premise, AttributeSet::of(m->size(), {b})}});
  return ConfounderPair{ClosureSystem::power_set(m), models_of(single)};
}

}  // namespace collex
