#include "collex/partial_example.hpp"

namespace collex {

void PartialExample::validate() const {
  if (present.universe_size() != absent.universe_size())
    throw UniverseError("example '" + name + "': present/absent over different universes");
  if (present.intersects(absent)) throw InvariantError("example '" + name + "': attribute both present and absent");
}

bool refutes(const PartialExample& e, const Implication& f) {
  return f.premise.is_subset_of(e.present) && f.conclusion.intersects(e.absent);
}

PartialExample merge(const PartialExample& a, const PartialExample& b) {
  PartialExample out{a.name, a.present | b.present, a.absent | b.absent};
  if (out.present.intersects(out.absent))
    throw ConflictingEvidenceError("conflicting evidence for object '" + a.name + "'");
  return out;
}

}  // namespace collex
