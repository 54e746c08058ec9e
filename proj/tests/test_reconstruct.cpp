#include <random>

#include "collex/errors.hpp"
#include "collex/reconstruct.hpp"
#include "collex/text_io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace collex;
using namespace testing_support;

namespace {

// X_M straight from the definition: Y is reconstructed iff every block sees
// a restriction that X also produces.
std::set<oracle::Mask> reconstructed_oracle(const oracle::Family& x, const std::vector<oracle::Mask>& blocks,
                                            unsigned n) {
  std::set<oracle::Mask> out;
  for (oracle::Mask y = 0;; ++y) {
    bool ok = true;
    for (auto b : blocks) {
      bool seen = false;
      for (auto s : x) seen = seen || ((s & b) == (y & b));
      ok = ok && seen;
    }
    if (ok) out.insert(y);
    if (y == oracle::full(n)) break;
  }
  return out;
}

// min c(F) over all axiomatizations: the smallest k for which the valid
// implications with premises of size <= k already axiomatize X.
int min_complexity_oracle(const oracle::Family& x, unsigned n) {
  std::set<oracle::Mask> target(x.begin(), x.end());
  for (int k = -1; k <= static_cast<int>(n); ++k) {
    std::vector<oracle::Imp> f;
    for (oracle::Mask a = 0; a <= oracle::full(n); ++a)
      if (__builtin_popcount(a) <= k) f.push_back({a, oracle::closure(x, a, n)});
    if (oracle::models(f, n) == target) return k;
  }
  return static_cast<int>(n);
}

std::vector<oracle::Mask> random_cover(std::mt19937_64& rng, unsigned n) {
  std::vector<oracle::Mask> blocks;
  oracle::Mask cover = 0;
  while (cover != oracle::full(n)) {
    blocks.push_back(static_cast<oracle::Mask>(rng() & oracle::full(n)));
    cover |= blocks.back();
  }
  return blocks;
}

ConsortialDomain domain_of(const UniversePtr& m, const std::vector<oracle::Mask>& blocks) {
  std::vector<AttributeSet> sets;
  for (auto b : blocks) sets.push_back(set_of(m, b));
  return ConsortialDomain(m, sets);
}

oracle::Family family_of(const ClosureSystem& x) {
  oracle::Family f;
  for (const auto& s : x.sets()) f.push_back(mask_of(s));
  return f;
}

ConsortialDomain fano() {
  auto m = make_universe({"1", "2", "3", "4", "5", "6", "7"});
  std::vector<AttributeSet> blocks;
  for (auto b : {"123", "145", "167", "246", "257", "347", "356"}) {
    std::vector<std::string> names;
    for (const char* p = b; *p; ++p) names.push_back(std::string(1, *p));
    blocks.push_back(m->set_of(names));
  }
  return ConsortialDomain(m, blocks);
}

}  // namespace

TEST_CASE("premise complexity") {
  auto m = make_universe({"ro", "fl", "ed"});
  CHECK(premise_complexity(ImplicationTheory(m)) == -1);
  CHECK(premise_complexity(parse_implications(m, "ed -> fl")) == 1);
  CHECK(premise_complexity(parse_implications(m, "-> ro fl ed")) == 0);
  CHECK(system_premise_complexity(ClosureSystem::power_set(m)) == -1);
  CHECK(system_premise_complexity(ClosureSystem::trivial(m)) == 0);

  for (std::size_t n : {4u, 5u, 6u}) {
    auto u = letters(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<AttributeSet> small;
      for (oracle::Mask a = 0; a <= oracle::full(n); ++a)
        if (static_cast<std::size_t>(__builtin_popcount(a)) <= k) small.push_back(set_of(u, a));
      auto xk = ClosureSystem::generated_by(u, small);
      const int expected = static_cast<int>(k + 1 < n ? k + 1 : -1);
      CHECK(system_premise_complexity(xk) == expected);
      CHECK(base_premise_complexity(xk) == expected);
    }
  }
}

TEST_CASE("premise complexity is the minimum over axiomatizations") {
  std::size_t base_larger = 0;
  for (unsigned n = 1; n <= 4; ++n) {
    auto m = letters(n);
    for (const auto& x : all_closure_systems(m)) {
      const int c = system_premise_complexity(x);
      CHECK(c == min_complexity_oracle(family_of(x), n));
      CHECK(base_premise_complexity(x) >= c);
      if (base_premise_complexity(x) > c) ++base_larger;
    }
  }
  CHECK(base_larger > 0);

  auto m = letters(3);
  auto x = ClosureSystem(m, {set_of(m, 0b001), set_of(m, 0b011), set_of(m, 0b111)});
  CHECK(system_premise_complexity(x) == 1);
  CHECK(base_premise_complexity(x) == 2);
  CHECK(models_of(parse_implications(m, "-> a\nc -> b")) == x);
}

TEST_CASE("closure system enumeration") {
  const std::size_t all[] = {1, 2, 7, 61, 2480};
  const std::size_t with_empty[] = {1, 1, 4, 45, 2271};
  for (unsigned n = 0; n <= 4; ++n) {
    auto m = letters(n);
    auto systems = all_closure_systems(m);
    CHECK(systems.size() == all[n]);
    std::size_t e = 0;
    std::set<std::set<oracle::Mask>> got;
    for (const auto& x : systems) {
      if (x.contains(AttributeSet(n))) ++e;
      got.insert(masks(x));
    }
    CHECK(e == with_empty[n]);
    CHECK(got.size() == systems.size());
    if (n >= 1) {
      std::set<std::set<oracle::Mask>> want;
      for (const auto& f : oracle::all_moore_families(n)) want.insert({f.begin(), f.end()});
      CHECK(got == want);
    }
  }
  CHECK_THROWS_AS(all_closure_systems(letters(5)), CapacityError);
}

TEST_CASE("well-formed valid implications") {
  auto ctx = load_burmeister(COLLEX_FIXTURES "/toy.cxt");
  auto m = ctx.attributes();
  auto x = all_intents(ctx);
  ConsortialDomain d(m, {m->set_of({"ro", "fl"}), m->set_of({"fl", "ed"}), m->set_of({"ro", "ed"})});
  auto f = well_formed_valid(x, d);
  CHECK(entails(f, {m->set_of({"ed"}), m->set_of({"fl"})}));
  CHECK_FALSE(entails(f, {m->set_of({"fl", "ed"}), m->set_of({"ro"})}));
  CHECK(reconstructed_system(x, d) == x);

  // P(M): only tautologies
  CHECK(well_formed_valid(ClosureSystem::power_set(m), d).empty());
  // {M}: everything inside a block
  auto all = well_formed_valid(ClosureSystem::trivial(m), d);
  CHECK(entails(all, {m->set_of({}), m->set_of({"ro", "fl"})}));
  CHECK(reconstructed_system(ClosureSystem::trivial(m), d) == ClosureSystem::trivial(m));
}

TEST_CASE("reconstructed systems agree with the restriction oracle") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 200; ++round) {
    const unsigned n = 1 + rng() % 6;
    auto m = letters(n);
    std::vector<AttributeSet> gens;
    for (std::uint64_t i = 0; i < rng() % 6; ++i) gens.push_back(set_of(m, static_cast<oracle::Mask>(rng() & oracle::full(n))));
    auto x = ClosureSystem::generated_by(m, gens);
    auto blocks = random_cover(rng, n);
    auto d = domain_of(m, blocks);
    auto xm = reconstructed_system(x, d);
    CHECK(masks(xm) == reconstructed_oracle(family_of(x), blocks, n));
    for (const auto& s : x.sets()) CHECK(xm.contains(s));

    // literal F_M on the blocks, pair by pair, is equivalent to ours
    ImplicationTheory literal(m);
    for (auto b : blocks)
      for (oracle::Mask a = 0; a <= oracle::full(n); ++a)
        for (oracle::Mask c = 0; c <= oracle::full(n); ++c)
          if (oracle::subset(a | c, b) && holds_in(Implication{set_of(m, a), set_of(m, c)}, x))
            literal.add({set_of(m, a), set_of(m, c)});
    CHECK(equivalent(literal, well_formed_valid(x, d)));
  }
}

TEST_CASE("model and validity round trips") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 100; ++round) {
    const unsigned n = 1 + rng() % 5;
    auto m = letters(n);
    std::vector<AttributeSet> gens;
    for (std::uint64_t i = 0; i < rng() % 6; ++i) gens.push_back(set_of(m, static_cast<oracle::Mask>(rng() & oracle::full(n))));
    auto x = ClosureSystem::generated_by(m, gens);
    ConsortialDomain whole(m, {AttributeSet::full(n)});
    CHECK(models_of(well_formed_valid(x, whole)) == x);

    ImplicationTheory f(m);
    for (std::uint64_t i = 0; i < rng() % 4; ++i)
      f.add({set_of(m, static_cast<oracle::Mask>(rng() & oracle::full(n))),
             set_of(m, static_cast<oracle::Mask>(rng() & oracle::full(n)))});
    auto xf = models_of(f);
    for (const auto& g : f) CHECK(holds_in(g, xf));
  }
}

TEST_CASE("cover criterion") {
  auto m = make_universe({"1", "2", "3", "4"});
  auto triples = all_k_subsets(m, 3);
  CHECK(can_reconstruct_class(triples, 1).covered);
  ConsortialDomain halves(m, {m->set_of({"1", "2"}), m->set_of({"3", "4"})});
  auto r = can_reconstruct_class(halves, 1);
  CHECK_FALSE(r.covered);
  REQUIRE(r.witness);
  CHECK(*r.witness == m->set_of({"1", "3"}));
  CHECK(can_reconstruct_class(halves, -1).covered);
  CHECK(can_reconstruct_class(halves, 0).covered);
  CHECK(can_reconstruct_class(halves, 7).covered);
}

TEST_CASE("Steiner systems") {
  auto f = fano();
  CHECK(is_steiner_system(f, 2));
  CHECK(is_steiner_system(all_k_subsets(letters(3), 2), 2));
  CHECK_FALSE(is_steiner_system(all_k_subsets(letters(4), 3), 2));
  auto m = letters(3);
  CHECK_THROWS_AS(is_steiner_system(ConsortialDomain(m, {set_of(m, 1), set_of(m, 6)}), 1), MalformedDesignError);
  CHECK_THROWS_AS(is_steiner_system(all_k_subsets(m, 2), 3), MalformedDesignError);

  for (const auto& design : {f, all_k_subsets(letters(3), 2)}) {
    REQUIRE(can_reconstruct_class(design, 1).covered);
    for (std::size_t drop = 0; drop < design.size(); ++drop) {
      std::vector<AttributeSet> rest;
      for (std::size_t i = 0; i < design.size(); ++i)
        if (i != drop) rest.push_back(design.block(i));
      AttributeSet cover(design.universe()->size());
      for (const auto& b : rest) cover |= b;
      if (!cover.is_full()) continue;  // no longer a consortial domain at all
      CHECK_FALSE(can_reconstruct_class(ConsortialDomain(design.universe(), rest), 1).covered);
    }
  }
}

TEST_CASE("ability of a consortium, exhaustively") {
  auto m = letters(3);
  auto pairs = all_k_subsets(m, 2);
  auto everything = [](const ClosureSystem&) { return true; };
  CHECK(verify_reconstruction(ClosureSystem::trivial(m), pairs, everything));
  auto c = find_confounder(ClosureSystem::power_set(m), pairs, all_closure_systems(m));
  REQUIRE(c);
  CHECK(reconstructed_system(*c, pairs) == ClosureSystem::power_set(m));

  auto ctx = load_burmeister(COLLEX_FIXTURES "/toy.cxt");
  auto toy_m = ctx.attributes();
  auto toy = all_intents(ctx);
  ConsortialDomain toy_d(toy_m, {toy_m->set_of({"ro", "fl"}), toy_m->set_of({"fl", "ed"}), toy_m->set_of({"ro", "ed"})});
  CHECK(verify_reconstruction(toy, toy_d, closure_systems_of_complexity(toy_m, 1)));
  CHECK(verify_reconstruction(toy, toy_d, [](const ClosureSystem& y) { return system_premise_complexity(y) <= 1; }));
}

TEST_CASE("cover criterion decides reconstructability on small universes") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 20; ++round) {
    const unsigned n = 2 + rng() % 3;
    auto m = letters(n);
    auto d = domain_of(m, random_cover(rng, n));
    const auto systems = all_closure_systems(m);
    for (int k = -1; k < static_cast<int>(n); ++k) {
      if (can_reconstruct_class(d, k).covered) {
        for (const auto& x : systems)
          if (system_premise_complexity(x) <= k) CHECK(reconstructed_system(x, d) == x);
      } else {
        auto pair = cover_confounder(d, k);
        REQUIRE(pair);
        CHECK_FALSE(pair->x == pair->y);
        CHECK(system_premise_complexity(pair->y) <= k);
        CHECK(reconstructed_system(pair->x, d) == reconstructed_system(pair->y, d));
      }
    }
  }
}
