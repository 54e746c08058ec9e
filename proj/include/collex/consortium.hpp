#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collex/closure_system.hpp"
#include "collex/context.hpp"
#include "collex/implication.hpp"
#include "collex/partial_example.hpp"

namespace collex {

struct NamedSet {
  std::string name;
  AttributeSet set;
};

/// The world simulated experts draw counterexamples from: the target closure
/// system together with named objects whose intents generate it.
class TargetDomain {
 public:
  TargetDomain(ClosureSystem system, std::vector<NamedSet> objects);

  // Objects are the context rows; the system is the intent system.
  static TargetDomain from_context(const FormalContext& ctx);
  // Every member of X becomes an object named after its attributes.
  static TargetDomain from_closure_system(const ClosureSystem& system);

  const UniversePtr& universe() const noexcept { return system_.universe(); }
  const ClosureSystem& system() const noexcept { return system_; }
  const std::vector<NamedSet>& objects() const noexcept { return objects_; }
  const NamedSet* find(std::string_view name) const;

 private:
  ClosureSystem system_;
  std::vector<NamedSet> objects_;
};

/// Covering family {N_i} of M with a unique label per block.
class ConsortialDomain {
 public:
  // Throws InvariantError when the blocks do not cover M or labels repeat.
  ConsortialDomain(UniversePtr universe, std::vector<std::string> ids, std::vector<AttributeSet> blocks);
  // Labels default to "1", "2", ...
  ConsortialDomain(UniversePtr universe, std::vector<AttributeSet> blocks);

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<AttributeSet>& blocks() const noexcept { return blocks_; }
  const AttributeSet& block(std::size_t i) const { return blocks_.at(i); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<std::size_t> find(std::string_view id) const;

  // M itself is not a block.
  bool is_proper() const;

 private:
  UniversePtr universe_;
  std::vector<std::string> ids_;
  std::vector<AttributeSet> blocks_;
};

// All k-element subsets of M as blocks, in lectic order.
ConsortialDomain all_k_subsets(const UniversePtr& universe, std::size_t k);

/// M*(A): A itself when some block contains it, otherwise M.
AttributeSet mstar_closure(const ConsortialDomain& domain, const AttributeSet& a);

// Every part (A, {b}), b ∈ B \ A, fits inside a single block.
bool is_well_formed(const ConsortialDomain& domain, const Implication& f);

enum class ExpertKind { Expert, PreExpert };

/// One local (pre-)expert. Knowledge entries are subsets of the block; an
/// Expert knows the restriction of every target object, a pre-expert only some.
struct LocalExpertSpec {
  std::string id;
  AttributeSet block;
  ExpertKind kind = ExpertKind::Expert;
  std::vector<NamedSet> knowledge;  // lectic order of sets, object order among equals
  double cost = 1.0;

  static LocalExpertSpec expert(std::string id, const AttributeSet& block, const TargetDomain& target);
  static LocalExpertSpec pre_expert(std::string id, const AttributeSet& block, const TargetDomain& target,
                                    const std::vector<std::string>& known_objects);
  // Knowledge given as bare sets; names are synthesized from the attributes.
  static LocalExpertSpec pre_expert(std::string id, const AttributeSet& block, const Universe& universe,
                                    std::vector<AttributeSet> family);

  // The family K of sets this expert can use as counterexamples.
  std::vector<AttributeSet> family() const;
};

enum class Verdict { Accept, Refute, Null };

struct ExpertAnswer {
  Verdict verdict = Verdict::Accept;
  PartialExample example;              // Refute only
  std::optional<std::size_t> expert;  // index of the refuting expert, when known

  static ExpertAnswer accept() { return {}; }
  static ExpertAnswer null() { return {Verdict::Null, {}, std::nullopt}; }
  static ExpertAnswer refute(PartialExample e, std::optional<std::size_t> expert = std::nullopt) {
    return {Verdict::Refute, std::move(e), expert};
  }
};

// Throws ProtocolError unless a Refute actually refutes f.
void validate_answer(const Implication& f, const ExpertAnswer& answer);

struct SelectionStrategy {
  enum class Policy { All, FirstQualified, MaxBlockSize, CostGreedy, RandomSample };

  Policy policy = Policy::All;
  std::size_t sample_size = 1;  // RandomSample
  std::uint64_t seed = 0;       // RandomSample

  static SelectionStrategy all() { return {}; }
  static SelectionStrategy first_qualified() { return {Policy::FirstQualified}; }
  static SelectionStrategy max_block_size() { return {Policy::MaxBlockSize}; }
  static SelectionStrategy cost_greedy() { return {Policy::CostGreedy}; }
  static SelectionStrategy random_sample(std::size_t size, std::uint64_t seed) {
    return {Policy::RandomSample, size, seed};
  }
};

// "all", "first", "max-block", "cost", "random"
std::optional<SelectionStrategy::Policy> parse_policy(std::string_view name);
std::string policy_name(SelectionStrategy::Policy policy);

enum class ConsortiumMode { Strong, Sampled };

class Consortium {
 public:
  Consortium(ConsortialDomain domain, std::vector<LocalExpertSpec> experts,
             ConsortiumMode mode = ConsortiumMode::Strong, SelectionStrategy strategy = {});

  // Every block gets a genuine local expert over the target.
  static Consortium of_experts(ConsortialDomain domain, const TargetDomain& target,
                               ConsortiumMode mode = ConsortiumMode::Strong, SelectionStrategy strategy = {});

  const ConsortialDomain& domain() const noexcept { return domain_; }
  const std::vector<LocalExpertSpec>& experts() const noexcept { return experts_; }
  const LocalExpertSpec& expert(std::size_t i) const { return experts_.at(i); }
  ConsortiumMode mode() const noexcept { return mode_; }
  const SelectionStrategy& strategy() const noexcept { return strategy_; }
  const UniversePtr& universe() const noexcept { return domain_.universe(); }

  // Answer Null queries with Accept instead.
  bool accept_on_null = false;

 private:
  ConsortialDomain domain_;
  std::vector<LocalExpertSpec> experts_;
  ConsortiumMode mode_;
  SelectionStrategy strategy_;
};

/// Answer of a single local (pre-)expert. f must lie in Imp(N).
ExpertAnswer local_answer(const LocalExpertSpec& expert, const Implication& f);

// What the expert knows about a named object, restricted to its block.
std::optional<PartialExample> describe_object(const LocalExpertSpec& expert, std::string_view name);

// f restricted to an expert's view: A -> B ∩ N.
Implication restrict_query(const Implication& f, const AttributeSet& block);

// Experts with A ⊆ N_i and some conclusion attribute outside A in N_i.
std::vector<std::size_t> qualified_experts(const Consortium& c, const Implication& f);

// Per-query expert subset S; Strong mode returns every qualified expert.
// Throws QualificationError when nobody qualifies.
std::vector<std::size_t> select_experts(const Consortium& c, const Implication& f);

/// Consortial expert: Null for queries that are not well-formed and not
/// refuted by any selected expert, the lowest-index refutation otherwise,
/// Accept when every selected expert accepts.
ExpertAnswer consortial_answer(const Consortium& c, const Implication& f);

// Aggregation shared with the live session: answers indexed like `selected`.
ExpertAnswer aggregate_answers(const Consortium& c, const Implication& f, const std::vector<std::size_t>& selected,
                               const std::vector<ExpertAnswer>& answers);

// Pairwise agreement on Imp(N_i ∩ N_j); exhaustive, |N_i ∩ N_j| <= kConsistencyCap.
inline constexpr std::size_t kConsistencyCap = 12;
bool check_consistent_experts(const Consortium& c);
bool check_consistent_consortium(const Consortium& c);

}  // namespace collex
