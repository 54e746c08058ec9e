#pragma once

#include <set>
#include <string>
#include <vector>

#include "collex/closure_system.hpp"
#include "collex/implication.hpp"
#include "collex/universe.hpp"
#include "oracles.hpp"

namespace testing_support {

inline collex::UniversePtr letters(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return collex::make_universe(names);
}

inline collex::AttributeSet set_of(const collex::UniversePtr& m, oracle::Mask mask) {
  return collex::AttributeSet::from_mask(m->size(), mask);
}

inline oracle::Mask mask_of(const collex::AttributeSet& s) { return static_cast<oracle::Mask>(s.to_mask()); }

inline std::set<oracle::Mask> masks(const collex::ClosureSystem& x) {
  std::set<oracle::Mask> out;
  for (const auto& s : x.sets()) out.insert(mask_of(s));
  return out;
}

inline collex::ClosureSystem system_of(const collex::UniversePtr& m, const oracle::Family& f) {
  std::vector<collex::AttributeSet> sets;
  for (auto mask : f) sets.push_back(set_of(m, mask));
  return collex::ClosureSystem(m, sets);
}

inline std::vector<oracle::Imp> imps(const collex::ImplicationTheory& t) {
  std::vector<oracle::Imp> out;
  for (const auto& f : t) out.push_back({mask_of(f.premise), mask_of(f.conclusion)});
  return out;
}

}  // namespace testing_support
