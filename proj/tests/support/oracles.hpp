#pragma once

// Brute-force reference implementations. Deliberately naive: bitmask loops
// over P(M), no shared code with the library algorithms.

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Mask = std::uint32_t;
using Family = std::vector<Mask>;

inline bool subset(Mask a, Mask b) { return (a & b) == a; }

inline Mask full(unsigned n) { return n == 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

// Intersection of members containing a.
inline Mask closure(const Family& family, Mask a, unsigned n) {
  Mask out = full(n);
  for (Mask x : family)
    if (subset(a, x)) out &= x;
  return out;
}

inline bool is_closure_system(const Family& family, unsigned n) {
  std::set<Mask> s(family.begin(), family.end());
  if (!s.count(full(n))) return false;
  for (Mask a : s)
    for (Mask b : s)
      if (!s.count(a & b)) return false;
  return true;
}

// Intents of a context given as object rows.
inline std::set<Mask> intents(const std::vector<Mask>& rows, unsigned n) {
  std::set<Mask> out;
  for (Mask a = 0; a <= full(n); ++a) {
    Mask c = full(n);
    for (Mask r : rows)
      if (subset(a, r)) c &= r;
    out.insert(c);
    if (a == full(n)) break;
  }
  return out;
}

struct Imp {
  Mask premise;
  Mask conclusion;
};

inline Mask close_theory(const std::vector<Imp>& theory, Mask a) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : theory)
      if (subset(f.premise, a) && !subset(f.conclusion, a)) {
        a |= f.conclusion;
        changed = true;
      }
  }
  return a;
}

inline std::set<Mask> models(const std::vector<Imp>& theory, unsigned n) {
  std::set<Mask> out;
  for (Mask a = 0;; ++a) {
    bool ok = true;
    for (const auto& f : theory)
      if (subset(f.premise, a) && !subset(f.conclusion, a)) ok = false;
    if (ok) out.insert(a);
    if (a == full(n)) break;
  }
  return out;
}

// Pseudo-intents straight from the definition, processed by cardinality.
inline std::vector<Imp> canonical_base(const Family& family, unsigned n) {
  std::vector<Mask> all;
  for (Mask a = 0;; ++a) {
    all.push_back(a);
    if (a == full(n)) break;
  }
  std::stable_sort(all.begin(), all.end(),
                   [](Mask a, Mask b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  std::vector<Mask> pseudo;
  std::vector<Imp> out;
  for (Mask p : all) {
    Mask c = closure(family, p, n);
    if (c == p) continue;
    bool ok = true;
    for (Mask q : pseudo)
      if (q != p && subset(q, p) && !subset(closure(family, q, n), p)) ok = false;
    if (ok) {
      pseudo.push_back(p);
      out.push_back({p, c});
    }
  }
  return out;
}

// Every Moore family on n <= 4 points: filter all subfamilies of P(M) \ {M}.
inline std::vector<Family> all_moore_families(unsigned n) {
  std::vector<Family> out;
  const Mask top = full(n);
  std::vector<Mask> rest;
  for (Mask a = 0; a < top; ++a) rest.push_back(a);
  const std::size_t k = rest.size();
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << k); ++pick) {
    Family f{top};
    for (std::size_t i = 0; i < k; ++i)
      if (pick >> i & 1) f.push_back(rest[i]);
    bool ok = true;
    for (std::size_t i = 0; ok && i < f.size(); ++i)
      for (std::size_t j = i + 1; ok && j < f.size(); ++j)
        if (std::find(f.begin(), f.end(), f[i] & f[j]) == f.end()) ok = false;
    if (ok) out.push_back(f);
  }
  return out;
}

}  // namespace oracle
