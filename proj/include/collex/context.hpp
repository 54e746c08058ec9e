#pragma once

#include <string>
#include <vector>

#include "collex/closure_system.hpp"
#include "collex/index_set.hpp"
#include "collex/universe.hpp"

namespace collex {

/// Formal context (G, M, I) with the incidence stored row-wise per object.
class FormalContext {
 public:
  FormalContext(UniversePtr objects, UniversePtr attributes, std::vector<AttributeSet> rows);

  const UniversePtr& objects() const noexcept { return objects_; }
  const UniversePtr& attributes() const noexcept { return attributes_; }
  const std::vector<AttributeSet>& rows() const noexcept { return rows_; }
  const AttributeSet& row(std::size_t g) const { return rows_.at(g); }
  bool incident(std::size_t g, std::size_t m) const { return rows_.at(g).contains(m); }

 private:
  UniversePtr objects_;
  UniversePtr attributes_;
  std::vector<AttributeSet> rows_;
};

// B' : objects having every attribute of b.
ObjectSet derive_objects(const FormalContext& ctx, const AttributeSet& b);
ObjectSet derive_objects(const FormalContext& ctx, const std::vector<std::string>& attribute_names);

// A' : attributes shared by every object of a.
AttributeSet derive_attributes(const FormalContext& ctx, const ObjectSet& a);
AttributeSet derive_attributes(const FormalContext& ctx, const std::vector<std::string>& object_names);

AttributeSet intent_closure(const FormalContext& ctx, const AttributeSet& b);

// All intents, enumerated by next-closure.
ClosureSystem all_intents(const FormalContext& ctx);

// One object per meet-irreducible member of X (a single all-M object when X = {M}).
FormalContext context_from_closure_system(const ClosureSystem& system);

}  // namespace collex
