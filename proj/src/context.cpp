#include "collex/context.hpp"

#include "collex/implication.hpp"

namespace collex {

FormalContext::FormalContext(UniversePtr objects, UniversePtr attributes, std::vector<AttributeSet> rows)
    : objects_(std::move(objects)), attributes_(std::move(attributes)), rows_(std::move(rows)) {
  if (rows_.size() != objects_->size())
    throw InvariantError("context has " + std::to_string(objects_->size()) + " objects but " +
                         std::to_string(rows_.size()) + " rows");
  for (const auto& r : rows_) attributes_->check(r.universe_size());
}

ObjectSet derive_objects(const FormalContext& ctx, const AttributeSet& b) {
  ctx.attributes()->check(b.universe_size());
  ObjectSet out(ctx.objects()->size());
  for (std::size_t g = 0; g < ctx.rows().size(); ++g)
    if (b.is_subset_of(ctx.row(g))) out.insert(g);
  return out;
}

ObjectSet derive_objects(const FormalContext& ctx, const std::vector<std::string>& attribute_names) {
  return derive_objects(ctx, ctx.attributes()->set_of(attribute_names));
}

AttributeSet derive_attributes(const FormalContext& ctx, const ObjectSet& a) {
  ctx.objects()->check(a.universe_size());
  auto out = AttributeSet::full(ctx.attributes()->size());
  for (auto g = a.first(); g != ObjectSet::npos; g = a.next(g)) out &= ctx.row(g);
  return out;
}

AttributeSet derive_attributes(const FormalContext& ctx, const std::vector<std::string>& object_names) {
  return derive_attributes(ctx, ctx.objects()->set_of<ObjectTag>(object_names));
}

AttributeSet intent_closure(const FormalContext& ctx, const AttributeSet& b) {
  ctx.attributes()->check(b.universe_size());
  auto out = AttributeSet::full(ctx.attributes()->size());
  for (const auto& row : ctx.rows())
    if (b.is_subset_of(row)) out &= row;
  return out;
}

ClosureSystem all_intents(const FormalContext& ctx) {
  std::vector<AttributeSet> intents;
  auto close = [&](const AttributeSet& s) { return intent_closure(ctx, s); };
  std::optional<AttributeSet> a = close(AttributeSet(ctx.attributes()->size()));
  while (a) {
    intents.push_back(*a);
    a = next_closure(*a, close);
  }
  return ClosureSystem(ctx.attributes(), std::move(intents), ClosureSystem::Unchecked{});
}

FormalContext context_from_closure_system(const ClosureSystem& system) {
  const auto& universe = system.universe();
  const auto full = AttributeSet::full(universe->size());
  std::vector<std::string> names;
  std::vector<AttributeSet> rows;
  for (const auto& x : system.sets()) {
    if (x == full) continue;
    // Meet-irreducible: x differs from the intersection of its proper supersets.
    auto above = full;
    for (const auto& y : system.sets())
      if (x.is_proper_subset_of(y)) above &= y;
    if (!(above == x)) {
      names.push_back(universe->format(x));
      rows.push_back(x);
    }
  }
  if (rows.empty()) {
    names.push_back(universe->format(full));
    rows.push_back(full);
  }
  return FormalContext(make_universe(std::move(names)), universe, std::move(rows));
}

}  // namespace collex
