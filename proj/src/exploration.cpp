#include "collex/exploration.hpp"

#include <algorithm>
#include <sstream>

#include "collex/errors.hpp"
#include "collex/text_io.hpp"

namespace collex {

AttributeSet undisputed_closure(const ExplorationState& state, const AttributeSet& a) {
  AttributeSet out = AttributeSet::full(state.universe->size());
  for (const auto& e : state.examples)
    if (a.is_subset_of(e.present)) out -= e.absent;
  return out;
}

namespace {

std::optional<std::pair<std::size_t, std::size_t>> find_refuted(const ImplicationTheory& theory,
                                                                const std::vector<PartialExample>& examples) {
  const auto& fs = theory.implications();
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < examples.size(); ++j)
      if (refutes(examples[j], fs[i])) return std::make_pair(i, j);
  return std::nullopt;
}

bool is_deferred(const ExplorationState& state, const AttributeSet& premise) {
  return std::any_of(state.deferred.begin(), state.deferred.end(),
                     [&](const Implication& d) { return d.premise == premise; });
}

// Replaces f with something strictly weaker that e does not refute.
ImplicationTheory weaken(const ImplicationTheory& theory, const Implication& f, const PartialExample& e) {
  auto literal = canonical_base(repair_step(theory, f, e.present));
  if (!entails(literal, f)) return literal;

  ImplicationTheory rest = theory;
  rest.remove(f);
  const AttributeSet c_star = close_under_theory(rest, e.present);
  if (!c_star.intersects(e.absent)) {
    auto widened = canonical_base(repair_step(theory, f, c_star));
    if (!entails(widened, f)) return widened;
  }
  return canonical_base(rest);
}

}  // namespace

bool state_invariant_holds(const ExplorationState& state) {
  if (find_refuted(state.accepted, state.examples)) return false;
  for (std::size_t i = 0; i < state.deferred.size(); ++i)
    for (std::size_t j = i + 1; j < state.deferred.size(); ++j)
      if (state.deferred[i].premise == state.deferred[j].premise) return false;
  return true;
}

std::optional<Implication> next_query_from(const ExplorationState& state, const AttributeSet& cursor) {
  auto close = [&](const AttributeSet& x) { return close_under_theory(state.accepted, x); };
  std::optional<AttributeSet> a = cursor;
  if (close(cursor) != cursor) a = next_closure(cursor, close);
  while (a) {
    if (!is_deferred(state, *a)) {
      AttributeSet bullet = undisputed_closure(state, *a);
      if (bullet != *a) return Implication{*a, bullet};
    }
    a = next_closure(*a, close);
  }
  return std::nullopt;
}

std::optional<Implication> next_query(const ExplorationState& state) {
  return next_query_from(state, AttributeSet(state.universe->size()));
}

ImplicationTheory repair_step(const ImplicationTheory& theory, const Implication& f, const AttributeSet& c) {
  ImplicationTheory out(theory.universe());
  for (const auto& g : theory)
    if (!(g == f)) out.add(g);
  auto add = [&](Implication g) {
    if (!g.is_trivial()) out.add(std::move(g));
  };
  add({f.premise, f.conclusion & c});
  const AttributeSet outside = (f.premise | c).complement();
  for (auto m = outside.first(); m != AttributeSet::npos; m = outside.next(m)) add({f.premise.with(m), f.conclusion});
  return out;
}

ExplorationState repair(ExplorationState state, const PartialExample& example) {
  (void)example;  // every stored example is checked, this one included
  bool changed = false;
  while (find_refuted(state.accepted, state.examples)) {
    auto base = canonical_base(state.accepted);
    auto hit = find_refuted(base, state.examples);
    if (!hit) {
      state.accepted = std::move(base);
      changed = true;
      break;
    }
    state.accepted = weaken(base, base.implications()[hit->first], state.examples[hit->second]);
    changed = true;
  }
  if (changed) {
    ++state.repairs;
    state.deferred.clear();
  }
  if (!state_invariant_holds(state)) throw InvariantError("repair left a refuted implication");
  return state;
}

ExplorationState record_example(ExplorationState state, PartialExample example, bool merge_by_name) {
  example.validate();
  state.universe->check(example.present.universe_size());
  auto same = std::find_if(state.examples.begin(), state.examples.end(),
                           [&](const PartialExample& e) { return e.name == example.name; });
  if (merge_by_name && same != state.examples.end()) {
    *same = merge(*same, example);
    example = *same;
  } else if (std::find(state.examples.begin(), state.examples.end(), example) == state.examples.end()) {
    state.examples.push_back(example);
  }
  return repair(std::move(state), example);
}

ExplorationState submit_answer(ExplorationState state, const Implication& f, const ExpertAnswer& answer) {
  auto expected = next_query(state);
  if (!expected || !(*expected == f)) throw ProtocolError("answer does not match the current query");
  validate_answer(f, answer);
  ++state.queries;
  switch (answer.verdict) {
    case Verdict::Accept:
      state.accepted.add(f);
      return state;
    case Verdict::Null:
      state.deferred.push_back(f);
      return state;
    case Verdict::Refute:
      return record_example(std::move(state), answer.example, false);
  }
  return state;
}

const PartialExample& ExampleRegistry::combine(const PartialExample& contribution) {
  auto it = by_name_.find(contribution.name);
  if (it == by_name_.end()) return by_name_.emplace(contribution.name, contribution).first->second;
  it->second = merge(it->second, contribution);
  return it->second;
}

const PartialExample* ExampleRegistry::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &it->second;
}

bool ExampleRegistry::asked(std::string_view name, std::size_t participant) const {
  return asked_.count({std::string(name), participant}) > 0;
}

void ExampleRegistry::mark_asked(std::string_view name, std::size_t participant) {
  asked_.insert({std::string(name), participant});
}

std::string ExplorationReport::serialize() const {
  const Universe& m = *base.universe();
  std::ostringstream out;
  out << "[base]\n";
  for (const auto& f : base) out << format_implication(m, f) << '\n';
  out << "[examples]\n";
  for (const auto& e : examples) {
    out << quote_name(e.name) << " :";
    for (auto i = e.present.first(); i != AttributeSet::npos; i = e.present.next(i))
      out << " +" << quote_name(m.name(i));
    for (auto i = e.absent.first(); i != AttributeSet::npos; i = e.absent.next(i))
      out << " -" << quote_name(m.name(i));
    out << '\n';
  }
  out << "[deferred]\n";
  for (const auto& f : deferred) out << format_implication(m, f) << '\n';
  out << "[meta]\n"
      << "queries = " << queries << '\n'
      << "repairs = " << repairs << '\n'
      << "interval = " << (interval_note ? "true" : "false") << '\n'
      << "budget_exhausted = " << (budget_exhausted ? "true" : "false") << '\n';
  return out.str();
}

ExplorationReport make_report(const ExplorationState& state, bool budget_exhausted) {
  ExplorationReport r{canonical_base(state.accepted), state.examples, {}, false, state.repairs, state.queries,
                      budget_exhausted};
  for (const auto& f : state.deferred) {
    if (!(close_under_theory(state.accepted, f.premise) == f.premise)) continue;
    const auto bullet = undisputed_closure(state, f.premise);
    if (bullet == f.premise) continue;
    r.deferred.push_back(Implication{f.premise, bullet}.normalized());
  }
  r.interval_note = !r.deferred.empty();
  return r;
}

DomainExpertAnswerer::DomainExpertAnswerer(const TargetDomain& target)
    : expert_(LocalExpertSpec::expert("domain", AttributeSet::full(target.universe()->size()), target)) {}

ExpertAnswer DomainExpertAnswerer::ask(const Implication& f) { return local_answer(expert_, f); }

Explorer::Explorer(UniversePtr universe, std::optional<std::size_t> max_queries)
    : state_(universe), cursor_(universe->size()), max_queries_(max_queries) {
  advance();
}

void Explorer::advance() {
  if (max_queries_ && state_.queries >= *max_queries_) {
    pending_ = next_query_from(state_, cursor_);
    budget_exhausted_ = pending_.has_value();
    pending_.reset();
    return;
  }
  pending_ = next_query_from(state_, cursor_);
  if (pending_) cursor_ = pending_->premise;
}

const Implication& Explorer::require_pending() const {
  if (!pending_) throw ProtocolError("no pending query");
  return *pending_;
}

void Explorer::accept() {
  state_.accepted.add(require_pending());
  ++state_.queries;
  advance();
}

void Explorer::defer() {
  state_.deferred.push_back(require_pending());
  ++state_.queries;
  advance();
}

void Explorer::refute(PartialExample example, bool merge_by_name) {
  const auto& f = require_pending();
  validate_answer(f, ExpertAnswer::refute(example));
  ++state_.queries;
  const auto before = state_.repairs;
  state_ = record_example(std::move(state_), std::move(example), merge_by_name);
  if (state_.repairs != before) cursor_ = AttributeSet(state_.universe->size());
  advance();
}

PartialExample combine_counterexample(Answerer& answerer, ExampleRegistry& registry, const PartialExample& example,
                                      std::optional<std::size_t> source) {
  registry.combine(example);
  if (source) registry.mark_asked(example.name, *source);
  for (std::size_t j = 0; j < answerer.participants(); ++j) {
    if (registry.asked(example.name, j)) continue;
    registry.mark_asked(example.name, j);
    if (auto d = answerer.describe(j, example.name)) registry.combine(*d);
  }
  return *registry.find(example.name);
}

ExplorationReport explore(Answerer& answerer, const UniversePtr& universe, const ExploreOptions& options) {
  Explorer ex(universe, options.max_queries);
  ExampleRegistry registry;
  while (const auto& q = ex.pending()) {
    auto answer = answerer.ask(*q);
    switch (answer.verdict) {
      case Verdict::Accept:
        ex.accept();
        break;
      case Verdict::Null:
        if (options.accept_on_null)
          ex.accept();
        else
          ex.defer();
        break;
      case Verdict::Refute:
        if (options.combining && !answer.example.name.empty()) {
          validate_answer(*q, answer);
          ex.refute(combine_counterexample(answerer, registry, answer.example, answer.expert), true);
        } else {
          ex.refute(std::move(answer.example), false);
        }
        break;
    }
  }
  return ex.report();
}

}  // namespace collex
