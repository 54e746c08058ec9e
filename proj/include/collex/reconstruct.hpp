#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "collex/closure_system.hpp"
#include "collex/consortium.hpp"
#include "collex/implication.hpp"

namespace collex {

// Largest premise size; -1 for the empty theory.
int premise_complexity(const ImplicationTheory& theory);

inline constexpr std::size_t kComplexityCap = 16;

/// c(X): least premise complexity over all theories whose models are X.
/// Exhaustive over P(M), |M| <= kComplexityCap.
int system_premise_complexity(const ClosureSystem& system);

// Premise complexity of the canonical base; can exceed c(X), e.g.
// X = {{a}, {a,b}, M} has base {-> a, a c -> b} but also {-> a, c -> b}.
int base_premise_complexity(const ClosureSystem& system);

/// F_M, represented by its strongest members: for every block N and A ⊆ N the
/// implication A -> c(A) ∩ N, when non-trivial. Every valid implication inside
/// a block follows from one of these. Blocks larger than kConsistencyCap throw.
ImplicationTheory well_formed_valid(const ClosureSystem& system, const ConsortialDomain& domain);

// X_M = models of F_M. Always contains X.
ClosureSystem reconstructed_system(const ClosureSystem& system, const ConsortialDomain& domain);

struct CoverReport {
  int k = -1;
  bool covered = true;
  std::optional<AttributeSet> witness;  // first uncovered (k+1)-subset, combination order
};

// Does every (k+1)-subset of M lie inside some block?
CoverReport can_reconstruct_class(const ConsortialDomain& domain, int k);

// Every t-subset of M in exactly one block. MalformedDesignError unless all
// blocks have the same size n >= t.
bool is_steiner_system(const ConsortialDomain& domain, int t);

/// All closure systems on M, |M| <= 4.
std::vector<ClosureSystem> all_closure_systems(const UniversePtr& universe);

// Closure systems on M with system_premise_complexity <= k, |M| <= 4.
std::vector<ClosureSystem> closure_systems_of_complexity(const UniversePtr& universe, int k);

// A member of `candidates` other than X with the same reconstructed system.
std::optional<ClosureSystem> find_confounder(const ClosureSystem& system, const ConsortialDomain& domain,
                                             const std::vector<ClosureSystem>& candidates);

bool verify_reconstruction(const ClosureSystem& system, const ConsortialDomain& domain,
                           const std::vector<ClosureSystem>& candidates);

// Exhaustive over all closure systems on M (|M| <= 4) that satisfy `in_class`.
bool verify_reconstruction(const ClosureSystem& system, const ConsortialDomain& domain,
                           const std::function<bool(const ClosureSystem&)>& in_class);

struct ConfounderPair {
  ClosureSystem x;  // P(M)
  ClosureSystem y;  // models of witness \ {b} -> {b}
};

// The pair that defeats a domain failing the (k+1)-cover; nullopt when covered.
std::optional<ConfounderPair> cover_confounder(const ConsortialDomain& domain, int k);

}  // namespace collex
