#include <random>

#include "collex/errors.hpp"
#include "collex/exploration.hpp"
#include "collex/text_io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace collex;
using namespace testing_support;

namespace {

struct Toy {
  FormalContext ctx = load_burmeister(COLLEX_FIXTURES "/toy.cxt");
  UniversePtr m = ctx.attributes();
  TargetDomain target = TargetDomain::from_context(ctx);
  ConsortialDomain domain{m, {"alice", "bob", "carol"},
                          {m->set_of({"ro", "fl"}), m->set_of({"fl", "ed"}), m->set_of({"ro", "ed"})}};

  AttributeSet s(std::vector<std::string> names) const { return m->set_of(names); }
  Implication imp(std::vector<std::string> a, std::vector<std::string> b) const { return {s(a), s(b)}; }
};

std::string base_text(const ExplorationReport& r) { return write_implications(r.base); }

AttributeSet random_set(std::mt19937_64& rng, std::size_t n) {
  AttributeSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() % 2) s.insert(i);
  return s;
}

}  // namespace

TEST_CASE("undisputed closure") {
  Toy t;
  ExplorationState st(t.m);
  CHECK(undisputed_closure(st, t.s({})).is_full());
  st.examples.push_back({"sphere", t.s({"ro"}), t.s({"fl", "ed"})});
  CHECK(undisputed_closure(st, t.s({})) == t.s({"ro"}));
  CHECK(undisputed_closure(st, t.s({"ro"})) == t.s({"ro"}));
  CHECK(undisputed_closure(st, t.s({"fl"})).is_full());
}

TEST_CASE("a single domain expert recovers the canonical base") {
  Toy t;
  DomainExpertAnswerer expert(t.target);
  auto r = explore(expert, t.m);
  CHECK(base_text(r) == "ed -> fl\n");
  CHECK(r.deferred.empty());
  CHECK_FALSE(r.interval_note);
  CHECK(r.repairs == 0);
}

TEST_CASE("toy consortium with counterexample combining") {
  Toy t;
  auto c = Consortium::of_experts(t.domain, t.target);
  ConsortiumAnswerer answerer(c);
  auto r = explore(answerer, t.m, {.combining = true});
  CHECK(base_text(r) == "ed -> fl\n");
  CHECK(r.deferred.empty());
  CHECK_FALSE(r.interval_note);
  for (const auto& e : r.examples) CHECK((e.present | e.absent).is_full());
}

TEST_CASE("toy consortium without combining leaves an interval") {
  Toy t;
  auto c = Consortium::of_experts(t.domain, t.target);
  ConsortiumAnswerer answerer(c);
  auto r = explore(answerer, t.m);
  CHECK(base_text(r) == "ed -> fl\n");
  REQUIRE(r.deferred.size() == 2);
  CHECK(format_implication(*t.m, r.deferred[0]) == "fl ed -> ro");
  CHECK(format_implication(*t.m, r.deferred[1]) == "ro fl -> ed");
  CHECK(r.interval_note);

  c.accept_on_null = true;
  auto accepted = explore(answerer, t.m);
  CHECK(accepted.deferred.empty());
  CHECK(write_implications(accepted.base) == "ed -> ro fl\nro fl -> ed\n");
}

TEST_CASE("repair of a refuted implication") {
  Toy t;
  ExplorationState st(t.m);
  st.accepted.add(t.imp({"ro"}, {"fl"}));
  st = record_example(std::move(st), {"sphere", t.s({"ro"}), t.s({"fl"})}, false);
  CHECK(write_implications(st.accepted) == "ro ed -> fl\n");
  CHECK(st.repairs == 1);

  auto literal = repair_step(ImplicationTheory(t.m, {t.imp({"ro"}, {"fl"})}), t.imp({"ro"}, {"fl"}), t.s({"ro"}));
  CHECK(write_implications(literal) == "ro ed -> fl\n");
}

TEST_CASE("repair when the literal step re-derives the refuted implication") {
  auto m = make_universe({"a", "c", "q", "x"});
  ExplorationState st(m);
  st.accepted.add({m->set_of({"a"}), AttributeSet::full(4)});
  st.accepted.add({m->set_of({"q"}), m->set_of({"q", "x"})});
  PartialExample e{"o", m->set_of({"a", "q"}), m->set_of({"c"})};
  st = record_example(std::move(st), e, false);
  CHECK(state_invariant_holds(st));
  CHECK_FALSE(entails(st.accepted, {m->set_of({"a"}), AttributeSet::full(4)}));
  for (const auto& f : st.accepted) CHECK_FALSE(refutes(e, f));
  // still weaker than before, and keeps what the example allows
  CHECK(entails(st.accepted, {m->set_of({"q"}), m->set_of({"x"})}));
  CHECK(entails(st.accepted, {m->set_of({"a"}), m->set_of({"q", "x"})}));
}

TEST_CASE("repair properties under random events") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 2 + rng() % 5;
    auto m = letters(n);
    ExplorationState st(m);
    const auto k = rng() % 5;
    for (std::uint64_t i = 0; i < k; ++i) st.accepted.add({random_set(rng, n), random_set(rng, n)});
    st.accepted = canonical_base(st.accepted);
    const auto before = st.accepted;
    auto present = random_set(rng, n);
    auto absent = random_set(rng, n) - present;
    PartialExample e{"e", present, absent};
    st.deferred.push_back({AttributeSet(n), AttributeSet::full(n)});
    auto after = record_example(st, e, false);
    CHECK(state_invariant_holds(after));
    // soundness: the repaired theory is implied by the old one
    for (const auto& f : after.accepted) CHECK(entails(before, f));
    bool refuted = false;
    for (const auto& f : before) refuted = refuted || refutes(e, f);
    CHECK(refuted == (after.repairs == 1));
    if (refuted) CHECK(after.deferred.empty());

    // literal step: removes f, adds nothing the stored example refutes
    for (const auto& f : before)
      if (refutes(e, f)) {
        auto lit = repair_step(before, f, e.present);
        CHECK_FALSE(lit.contains(f));
        for (const auto& g : lit)
          if (!before.contains(g)) CHECK_FALSE(refutes(e, g));
      }
  }
}

TEST_CASE("exploration with a domain expert recovers random closure systems") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 150; ++round) {
    const std::size_t n = 1 + rng() % 6;
    auto m = letters(n);
    std::vector<AttributeSet> gens;
    for (std::uint64_t i = 0; i < rng() % 6; ++i) gens.push_back(random_set(rng, n));
    auto x = ClosureSystem::generated_by(m, gens);
    DomainExpertAnswerer expert(TargetDomain::from_closure_system(x));
    auto r = explore(expert, m);
    CHECK(r.base == canonical_base(x));
    CHECK(r.repairs == 0);
  }
}

TEST_CASE("submit_answer follows the query order") {
  Toy t;
  ExplorationState st(t.m);
  auto q = next_query(st);
  REQUIRE(q);
  CHECK(*q == Implication{t.s({}), AttributeSet::full(3)});
  CHECK_THROWS_AS(submit_answer(st, t.imp({"ro"}, {"fl"}), ExpertAnswer::accept()), ProtocolError);
  CHECK_THROWS_AS(submit_answer(st, *q, ExpertAnswer::refute({"x", t.s({"ro"}), t.s({})})), ProtocolError);
  st = submit_answer(st, *q, ExpertAnswer::refute({"sphere", t.s({"ro"}), t.s({"fl", "ed"})}));
  CHECK(st.queries == 1);
  CHECK(st.examples.size() == 1);
  auto q2 = next_query(st);
  REQUIRE(q2);
  CHECK(*q2 == Implication{t.s({}), t.s({"ro"})});
  st = submit_answer(st, *q2, ExpertAnswer::null());
  CHECK(st.deferred.size() == 1);
  auto q3 = next_query(st);
  REQUIRE(q3);
  CHECK_FALSE(q3->premise.empty());
}

TEST_CASE("explorer budget") {
  Toy t;
  DomainExpertAnswerer expert(t.target);
  auto r = explore(expert, t.m, {.max_queries = 1});
  CHECK(r.queries == 1);
  CHECK(r.budget_exhausted);
}

TEST_CASE("example registry merges by name") {
  Toy t;
  ExampleRegistry reg;
  reg.combine({"ball", t.s({"ro"}), t.s({})});
  reg.combine({"ball", t.s({"fl"}), t.s({"ed"})});
  CHECK(reg.find("ball")->present == t.s({"ro", "fl"}));
  CHECK_THROWS_AS(reg.combine({"ball", t.s({"ed"}), t.s({})}), ConflictingEvidenceError);
  CHECK_FALSE(reg.asked("ball", 1));
  reg.mark_asked("ball", 1);
  CHECK(reg.asked("ball", 1));
}

TEST_CASE("report serialization") {
  Toy t;
  auto c = Consortium::of_experts(t.domain, t.target);
  ConsortiumAnswerer answerer(c);
  auto r = explore(answerer, t.m);
  auto text = r.serialize();
  CHECK(text.find("[base]\ned -> fl\n[examples]\n") == 0);
  CHECK(text.find("[deferred]\nfl ed -> ro\nro fl -> ed\n[meta]\n") != std::string::npos);
  CHECK(text.find("interval = true\n") != std::string::npos);
  CHECK(text.find("sphere : +ro -fl") != std::string::npos);
}
