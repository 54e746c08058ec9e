#include "collex/consortium.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "collex/random.hpp"

namespace collex {

namespace {

void sort_knowledge(std::vector<NamedSet>& knowledge) {
  std::stable_sort(knowledge.begin(), knowledge.end(),
                   [](const NamedSet& a, const NamedSet& b) { return lectic_less(a.set, b.set); });
}

bool contains_block(const ConsortialDomain& d, const AttributeSet& s) {
  return std::any_of(d.blocks().begin(), d.blocks().end(), [&](const AttributeSet& n) { return s.is_subset_of(n); });
}

}  // namespace

// --- TargetDomain -----------------------------------------------------------

TargetDomain::TargetDomain(ClosureSystem system, std::vector<NamedSet> objects)
    : system_(std::move(system)), objects_(std::move(objects)) {
  std::set<std::string> names;
  for (const auto& o : objects_) {
    universe()->check(o.set.universe_size());
    if (!names.insert(o.name).second) throw InvariantError("duplicate object name '" + o.name + "'");
    if (!system_.contains(o.set)) throw InvariantError("object '" + o.name + "' is not a member of the target");
  }
}

TargetDomain TargetDomain::from_context(const FormalContext& ctx) {
  std::vector<NamedSet> objects;
  for (std::size_t g = 0; g < ctx.rows().size(); ++g) objects.push_back({ctx.objects()->name(g), ctx.row(g)});
  return TargetDomain(all_intents(ctx), std::move(objects));
}

TargetDomain TargetDomain::from_closure_system(const ClosureSystem& system) {
  std::vector<NamedSet> objects;
  for (const auto& x : system.sets()) objects.push_back({system.universe()->format(x), x});
  return TargetDomain(system, std::move(objects));
}

const NamedSet* TargetDomain::find(std::string_view name) const {
  for (const auto& o : objects_)
    if (o.name == name) return &o;
  return nullptr;
}

// --- ConsortialDomain -------------------------------------------------------

ConsortialDomain::ConsortialDomain(UniversePtr universe, std::vector<std::string> ids,
                                   std::vector<AttributeSet> blocks)
    : universe_(std::move(universe)), ids_(std::move(ids)), blocks_(std::move(blocks)) {
  if (ids_.size() != blocks_.size()) throw InvariantError("one label per block required");
  std::set<std::string> seen;
  auto covered = AttributeSet(universe_->size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    universe_->check(blocks_[i].universe_size());
    if (!seen.insert(ids_[i]).second) throw InvariantError("duplicate block label '" + ids_[i] + "'");
    covered |= blocks_[i];
  }
  if (!covered.is_full()) {
    auto missing = AttributeSet::full(universe_->size()) - covered;
    throw InvariantError("blocks do not cover M; missing " + universe_->format(missing));
  }
}

namespace {

std::vector<std::string> numbered_labels(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return ids;
}

}  // namespace

ConsortialDomain::ConsortialDomain(UniversePtr universe, std::vector<AttributeSet> blocks)
    : ConsortialDomain(std::move(universe), numbered_labels(blocks.size()), std::vector<AttributeSet>(blocks)) {}

std::optional<std::size_t> ConsortialDomain::find(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return i;
  return std::nullopt;
}

bool ConsortialDomain::is_proper() const {
  return std::none_of(blocks_.begin(), blocks_.end(), [](const AttributeSet& b) { return b.is_full(); });
}

ConsortialDomain all_k_subsets(const UniversePtr& universe, std::size_t k) {
  const auto n = universe->size();
  require_enumerable(n, "all_k_subsets");
  std::vector<AttributeSet> blocks;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) {
    auto s = from_lectic_rank(n, r);
    if (s.count() == k) blocks.push_back(std::move(s));
  }
  return ConsortialDomain(universe, std::move(blocks));
}

AttributeSet mstar_closure(const ConsortialDomain& domain, const AttributeSet& a) {
  domain.universe()->check(a.universe_size());
  if (contains_block(domain, a)) return a;
  return AttributeSet::full(domain.universe()->size());
}

bool is_well_formed(const ConsortialDomain& domain, const Implication& f) {
  const auto parts = f.conclusion - f.premise;
  if (parts.empty()) return contains_block(domain, f.premise);
  for (auto b = parts.first(); b != AttributeSet::npos; b = parts.next(b))
    if (!contains_block(domain, f.premise.with(b))) return false;
  return true;
}

// --- Local experts ----------------------------------------------------------

LocalExpertSpec LocalExpertSpec::expert(std::string id, const AttributeSet& block, const TargetDomain& target) {
  LocalExpertSpec spec{std::move(id), block, ExpertKind::Expert, {}, 1.0};
  for (const auto& o : target.objects()) spec.knowledge.push_back({o.name, o.set & block});
  sort_knowledge(spec.knowledge);
  return spec;
}

LocalExpertSpec LocalExpertSpec::pre_expert(std::string id, const AttributeSet& block, const TargetDomain& target,
                                            const std::vector<std::string>& known_objects) {
  LocalExpertSpec spec{std::move(id), block, ExpertKind::PreExpert, {}, 1.0};
  for (const auto& name : known_objects) {
    const auto* o = target.find(name);
    if (!o) throw UniverseError("pre-expert '" + spec.id + "' knows unknown object '" + name + "'");
    spec.knowledge.push_back({o->name, o->set & block});
  }
  sort_knowledge(spec.knowledge);
  return spec;
}

LocalExpertSpec LocalExpertSpec::pre_expert(std::string id, const AttributeSet& block, const Universe& universe,
                                            std::vector<AttributeSet> family) {
  LocalExpertSpec spec{std::move(id), block, ExpertKind::PreExpert, {}, 1.0};
  for (auto& s : family) {
    if (!s.is_subset_of(block)) throw InvariantError("pre-expert knowledge outside its block");
    spec.knowledge.push_back({universe.format(s), std::move(s)});
  }
  sort_knowledge(spec.knowledge);
  return spec;
}

std::vector<AttributeSet> LocalExpertSpec::family() const {
  std::vector<AttributeSet> out;
  for (const auto& k : knowledge)
    if (out.empty() || !(out.back() == k.set)) out.push_back(k.set);
  return out;
}

void validate_answer(const Implication& f, const ExpertAnswer& answer) {
  if (answer.verdict != Verdict::Refute) return;
  try {
    answer.example.validate();
  } catch (const Error& e) {
    throw ProtocolError(e.what());
  }
  if (!refutes(answer.example, f)) throw ProtocolError("counterexample '" + answer.example.name + "' does not refute the query");
}

Implication restrict_query(const Implication& f, const AttributeSet& block) {
  return {f.premise, f.conclusion & block};
}

ExpertAnswer local_answer(const LocalExpertSpec& expert, const Implication& f) {
  if (!f.support().is_subset_of(expert.block)) throw QualificationError("query outside the block of '" + expert.id + "'");
  for (const auto& k : expert.knowledge)
    if (f.premise.is_subset_of(k.set) && !f.conclusion.is_subset_of(k.set))
      return ExpertAnswer::refute({k.name, k.set, expert.block - k.set});
  return ExpertAnswer::accept();
}

std::optional<PartialExample> describe_object(const LocalExpertSpec& expert, std::string_view name) {
  for (const auto& k : expert.knowledge)
    if (k.name == name) return PartialExample{k.name, k.set, expert.block - k.set};
  return std::nullopt;
}

// --- Consortium -------------------------------------------------------------

Consortium::Consortium(ConsortialDomain domain, std::vector<LocalExpertSpec> experts, ConsortiumMode mode,
                       SelectionStrategy strategy)
    : domain_(std::move(domain)), experts_(std::move(experts)), mode_(mode), strategy_(strategy) {
  if (experts_.size() != domain_.size()) throw InvariantError("one expert per block required");
  for (std::size_t i = 0; i < experts_.size(); ++i)
    if (!(experts_[i].block == domain_.block(i)))
      throw InvariantError("expert '" + experts_[i].id + "' does not match block " + domain_.id(i));
}

Consortium Consortium::of_experts(ConsortialDomain domain, const TargetDomain& target, ConsortiumMode mode,
                                  SelectionStrategy strategy) {
  require_same_universe(domain.universe(), target.universe(), "consortium");
  std::vector<LocalExpertSpec> experts;
  for (std::size_t i = 0; i < domain.size(); ++i)
    experts.push_back(LocalExpertSpec::expert(domain.id(i), domain.block(i), target));
  return Consortium(std::move(domain), std::move(experts), mode, strategy);
}

std::vector<std::size_t> qualified_experts(const Consortium& c, const Implication& f) {
  const auto parts = f.conclusion - f.premise;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.domain().size(); ++i) {
    const auto& n = c.domain().block(i);
    if (!f.premise.is_subset_of(n)) continue;
    if (parts.empty() ? f.conclusion.is_subset_of(n) : parts.intersects(n)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> select_experts(const Consortium& c, const Implication& f) {
  auto qualified = qualified_experts(c, f);
  if (qualified.empty()) throw QualificationError("no expert qualified for the query");
  if (c.mode() == ConsortiumMode::Strong || c.strategy().policy == SelectionStrategy::Policy::All) return qualified;

  const auto& domain = c.domain();
  auto parts = f.conclusion - f.premise;
  if (parts.empty()) parts = f.conclusion;  // trivial query: choose among holders of the support
  std::set<std::size_t> chosen;
  for (auto b = parts.first(); b != AttributeSet::npos; b = parts.next(b)) {
    const auto need = f.premise.with(b);
    std::vector<std::size_t> holders;
    for (auto i : qualified)
      if (need.is_subset_of(domain.block(i))) holders.push_back(i);
    if (holders.empty()) continue;  // part not well-formed

    switch (c.strategy().policy) {
      case SelectionStrategy::Policy::All:
        chosen.insert(holders.begin(), holders.end());
        break;
      case SelectionStrategy::Policy::FirstQualified:
        chosen.insert(holders.front());
        break;
      case SelectionStrategy::Policy::MaxBlockSize:
        chosen.insert(*std::max_element(holders.begin(), holders.end(), [&](std::size_t x, std::size_t y) {
          return domain.block(x).count() < domain.block(y).count();
        }));
        break;
      case SelectionStrategy::Policy::CostGreedy:
        chosen.insert(*std::min_element(holders.begin(), holders.end(), [&](std::size_t x, std::size_t y) {
          return c.expert(x).cost < c.expert(y).cost;
        }));
        break;
      case SelectionStrategy::Policy::RandomSample: {
        // Seeded by the part itself so selections do not depend on query order.
        std::uint64_t h = splitmix64(c.strategy().seed);
        for (auto a = f.premise.first(); a != AttributeSet::npos; a = f.premise.next(a)) h = splitmix64(h ^ a);
        h = splitmix64(h ^ (b + 0x51ed270b27ULL));
        std::mt19937_64 rng(h);
        const auto take = std::min(c.strategy().sample_size, holders.size());
        for (std::size_t k = 0; k < take; ++k) {
          auto j = k + static_cast<std::size_t>(rng() % (holders.size() - k));
          std::swap(holders[k], holders[j]);
          chosen.insert(holders[k]);
        }
        break;
      }
    }
  }
  if (chosen.empty()) throw QualificationError("no expert qualified for the query");
  return {chosen.begin(), chosen.end()};
}

ExpertAnswer aggregate_answers(const Consortium& c, const Implication& f, const std::vector<std::size_t>& selected,
                               const std::vector<ExpertAnswer>& answers) {
  for (std::size_t k = 0; k < selected.size() && k < answers.size(); ++k) {
    if (answers[k].verdict == Verdict::Refute) {
      auto a = answers[k];
      a.expert = selected[k];
      return a;
    }
  }
  if (!is_well_formed(c.domain(), f)) return c.accept_on_null ? ExpertAnswer::accept() : ExpertAnswer::null();
  return ExpertAnswer::accept();
}

ExpertAnswer consortial_answer(const Consortium& c, const Implication& f) {
  c.universe()->check(f.premise.universe_size());
  if (f.is_trivial()) return ExpertAnswer::accept();
  std::vector<std::size_t> selected;
  try {
    selected = select_experts(c, f);
  } catch (const QualificationError&) {
    return c.accept_on_null ? ExpertAnswer::accept() : ExpertAnswer::null();
  }
  std::vector<ExpertAnswer> answers;
  for (auto i : selected) {
    answers.push_back(local_answer(c.expert(i), restrict_query(f, c.domain().block(i))));
    if (answers.back().verdict == Verdict::Refute) break;
  }
  return aggregate_answers(c, f, selected, answers);
}

namespace {

bool pairwise_consistent(const Consortium& c, bool experts_only) {
  const auto& d = c.domain();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (experts_only &&
          (c.expert(i).kind != ExpertKind::Expert || c.expert(j).kind != ExpertKind::Expert))
        continue;
      const auto shared = d.block(i) & d.block(j);
      const auto members = shared.indices();
      if (members.size() > kConsistencyCap)
        throw CapacityError("block intersection of size " + std::to_string(members.size()) + " exceeds cap " +
                            std::to_string(kConsistencyCap));
      // Agreement on Imp(S) is equality of the closure systems the
      // restricted knowledge generates on S.
      auto restricted = [&](std::size_t k) {
        std::vector<AttributeSet> fam;
        for (const auto& x : c.expert(k).family()) fam.push_back(x & shared);
        auto sys = ClosureSystem::generated_by(d.universe(), fam);
        std::vector<AttributeSet> inside;
        for (const auto& x : sys.sets()) inside.push_back(x & shared);
        std::sort(inside.begin(), inside.end(), LecticLess<AttributeTag>{});
        inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
        return inside;
      };
      if (restricted(i) != restricted(j)) return false;
    }
  }
  return true;
}

}  // namespace

bool check_consistent_experts(const Consortium& c) { return pairwise_consistent(c, true); }
bool check_consistent_consortium(const Consortium& c) { return pairwise_consistent(c, false); }

namespace {
constexpr std::pair<std::string_view, SelectionStrategy::Policy> kPolicies[] = {
    {"all", SelectionStrategy::Policy::All},
    {"first", SelectionStrategy::Policy::FirstQualified},
    {"max-block", SelectionStrategy::Policy::MaxBlockSize},
    {"cost", SelectionStrategy::Policy::CostGreedy},
    {"random", SelectionStrategy::Policy::RandomSample}};
}  // namespace

std::optional<SelectionStrategy::Policy> parse_policy(std::string_view name) {
  for (const auto& [n, p] : kPolicies)
    if (n == name) return p;
  return std::nullopt;
}

std::string policy_name(SelectionStrategy::Policy policy) {
  for (const auto& [n, p] : kPolicies)
    if (p == policy) return std::string(n);
  return "all";
}

}  // namespace collex
