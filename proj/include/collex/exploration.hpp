#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "collex/consortium.hpp"
#include "collex/implication.hpp"
#include "collex/partial_example.hpp"

namespace collex {

/// Exploration knowledge base (L, E) plus the queries answered with Null.
struct ExplorationState {
  explicit ExplorationState(UniversePtr m) : universe(m), accepted(std::move(m)) {}

  UniversePtr universe;
  ImplicationTheory accepted;
  std::vector<PartialExample> examples;
  std::vector<Implication> deferred;
  std::size_t repairs = 0;
  std::size_t queries = 0;
};

// A•: every attribute not known to be absent from some example whose
// present set contains a.
AttributeSet undisputed_closure(const ExplorationState& state, const AttributeSet& a);

// No accepted implication is refuted by a stored example; deferred queries distinct.
bool state_invariant_holds(const ExplorationState& state);

/// Lectically first premise A, closed under the accepted theory and not
/// deferred, whose undisputed closure is larger than A; the query is A -> A•.
std::optional<Implication> next_query(const ExplorationState& state);

// Same, but starts the scan at `cursor`. Valid when every set before the cursor
// has already been settled (no repair since the cursor was set).
std::optional<Implication> next_query_from(const ExplorationState& state, const AttributeSet& cursor);

// Accept adds f to L, Null defers it, Refute stores the example and repairs.
// ProtocolError if f is not the current query or the answer does not refute it.
ExplorationState submit_answer(ExplorationState state, const Implication& f, const ExpertAnswer& answer);

// Stores an example (merging by name when asked to) and runs repair.
ExplorationState record_example(ExplorationState state, PartialExample example, bool merge_by_name);

/// Literal repair of one implication f = (A, B) against the present set c of a
/// counterexample: f is replaced by A -> B ∩ c and by A ∪ {m} -> B for every
/// m ∉ A ∪ c. Trivial results are dropped; nothing is reduced.
ImplicationTheory repair_step(const ImplicationTheory& theory, const Implication& f, const AttributeSet& c);

/// Restores the state invariant after `example` was added: refuted accepted
/// implications are repaired and the accepted set is reduced to its canonical
/// base. Clears the deferred list when anything changed.
ExplorationState repair(ExplorationState state, const PartialExample& example);

/// Merged counterexamples keyed by object name, plus the (name, participant)
/// pairs that have already been asked during combining.
class ExampleRegistry {
 public:
  // Inserts or merges; ConflictingEvidenceError on a present/absent clash.
  const PartialExample& combine(const PartialExample& contribution);
  const PartialExample* find(std::string_view name) const;
  const std::map<std::string, PartialExample, std::less<>>& entries() const noexcept { return by_name_; }

  bool asked(std::string_view name, std::size_t participant) const;
  void mark_asked(std::string_view name, std::size_t participant);

 private:
  std::map<std::string, PartialExample, std::less<>> by_name_;
  std::set<std::pair<std::string, std::size_t>> asked_;
};

struct ExplorationReport {
  ImplicationTheory base;  // canonical base, closed conclusions
  std::vector<PartialExample> examples;
  std::vector<Implication> deferred;
  bool interval_note = false;
  std::size_t repairs = 0;
  std::size_t queries = 0;
  bool budget_exhausted = false;

  // Sectioned text: [base], [examples], [deferred], [meta].
  std::string serialize() const;
};

ExplorationReport make_report(const ExplorationState& state, bool budget_exhausted = false);

/// Anything that can answer exploration queries: a domain expert, a
/// consortium, a human at a terminal.
class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual ExpertAnswer ask(const Implication& f) = 0;

  // Participants that can be asked about a named object while combining.
  virtual std::size_t participants() const { return 0; }
  virtual std::optional<PartialExample> describe(std::size_t /*participant*/, std::string_view /*name*/) {
    return std::nullopt;
  }
};

// A single local expert on the whole of M.
class DomainExpertAnswerer : public Answerer {
 public:
  explicit DomainExpertAnswerer(const TargetDomain& target);
  ExpertAnswer ask(const Implication& f) override;

 private:
  LocalExpertSpec expert_;
};

class ConsortiumAnswerer : public Answerer {
 public:
  explicit ConsortiumAnswerer(const Consortium& consortium) : consortium_(consortium) {}
  ExpertAnswer ask(const Implication& f) override { return consortial_answer(consortium_, f); }
  std::size_t participants() const override { return consortium_.experts().size(); }
  std::optional<PartialExample> describe(std::size_t participant, std::string_view name) override {
    return describe_object(consortium_.expert(participant), name);
  }

 private:
  const Consortium& consortium_;
};

struct ExploreOptions {
  bool combining = false;
  bool accept_on_null = false;
  std::optional<std::size_t> max_queries;
};

/// Sequential exploration driver. Holds the state and the pending query; the
/// caller answers the pending query and the driver moves on.
class Explorer {
 public:
  explicit Explorer(UniversePtr universe, std::optional<std::size_t> max_queries = std::nullopt);

  const std::optional<Implication>& pending() const noexcept { return pending_; }
  bool done() const noexcept { return !pending_.has_value(); }

  void accept();
  void defer();
  void refute(PartialExample example, bool merge_by_name);

  const ExplorationState& state() const noexcept { return state_; }
  ExplorationReport report() const { return make_report(state_, budget_exhausted_); }

 private:
  void advance();
  const Implication& require_pending() const;

  ExplorationState state_;
  AttributeSet cursor_;
  std::optional<Implication> pending_;
  std::optional<std::size_t> max_queries_;
  bool budget_exhausted_ = false;
};

// Merges the refuter's example and asks every other participant about the
// same name once. Returns the merged example.
PartialExample combine_counterexample(Answerer& answerer, ExampleRegistry& registry, const PartialExample& example,
                                      std::optional<std::size_t> source);

ExplorationReport explore(Answerer& answerer, const UniversePtr& universe, const ExploreOptions& options = {});

}  // namespace collex
