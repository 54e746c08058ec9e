#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "collex/errors.hpp"

namespace collex {

/// Subset of a finite indexed universe {0, ..., n-1}.
///
/// The tag keeps attribute sets and object sets from being mixed up. Element 0
/// is the most significant position for the lectic order, so enumeration
/// follows the usual next-closure convention.
template <class Tag>
class IndexSet {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;
  static constexpr std::size_t npos = Bits::npos;

  IndexSet() = default;
  explicit IndexSet(std::size_t universe_size) : bits_(universe_size) {}

  static IndexSet full(std::size_t universe_size) {
    IndexSet s(universe_size);
    s.bits_.set();
    return s;
  }

  static IndexSet of(std::size_t universe_size, std::initializer_list<std::size_t> members) {
    IndexSet s(universe_size);
    for (auto i : members) s.insert(i);
    return s;
  }

  // Bit i of the mask is element i.
  static IndexSet from_mask(std::size_t universe_size, std::uint64_t mask) {
    IndexSet s(universe_size);
    for (std::size_t i = 0; i < universe_size && i < 64; ++i)
      if ((mask >> i) & 1U) s.bits_.set(i);
    return s;
  }

  std::uint64_t to_mask() const {
    if (bits_.size() > 64) throw CapacityError("set does not fit a 64-bit mask");
    std::uint64_t mask = 0;
    for (auto i = bits_.find_first(); i != npos; i = bits_.find_next(i)) mask |= std::uint64_t{1} << i;
    return mask;
  }

  std::size_t universe_size() const noexcept { return bits_.size(); }
  std::size_t count() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool is_full() const noexcept { return bits_.all(); }

  bool contains(std::size_t i) const { return i < bits_.size() && bits_.test(i); }
  void insert(std::size_t i) { bits_.set(checked(i)); }
  void erase(std::size_t i) { bits_.reset(checked(i)); }

  std::size_t first() const { return bits_.find_first(); }
  std::size_t next(std::size_t i) const { return bits_.find_next(i); }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (auto i = first(); i != npos; i = next(i)) out.push_back(i);
    return out;
  }

  bool is_subset_of(const IndexSet& other) const {
    same_size(other);
    return bits_.is_subset_of(other.bits_);
  }
  bool is_proper_subset_of(const IndexSet& other) const {
    same_size(other);
    return bits_.is_proper_subset_of(other.bits_);
  }
  bool intersects(const IndexSet& other) const {
    same_size(other);
    return bits_.intersects(other.bits_);
  }

  IndexSet& operator&=(const IndexSet& o) {
    same_size(o);
    bits_ &= o.bits_;
    return *this;
  }
  IndexSet& operator|=(const IndexSet& o) {
    same_size(o);
    bits_ |= o.bits_;
    return *this;
  }
  IndexSet& operator-=(const IndexSet& o) {
    same_size(o);
    bits_ -= o.bits_;
    return *this;
  }

  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

  IndexSet complement() const {
    IndexSet c = *this;
    c.bits_.flip();
    return c;
  }

  IndexSet with(std::size_t i) const {
    IndexSet s = *this;
    s.insert(i);
    return s;
  }

  // Elements strictly below position i.
  IndexSet prefix(std::size_t i) const {
    IndexSet s = *this;
    for (std::size_t j = i; j < s.bits_.size(); ++j) s.bits_.reset(j);
    return s;
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.bits_ == b.bits_; }

  const Bits& bits() const noexcept { return bits_; }

  std::size_t hash() const noexcept {
    std::size_t h = std::hash<std::size_t>{}(bits_.size());
    std::vector<std::uint64_t> blocks;
    boost::to_block_range(bits_, std::back_inserter(blocks));
    for (auto b : blocks) h ^= std::hash<std::uint64_t>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t checked(std::size_t i) const {
    if (i >= bits_.size()) throw UniverseError("index " + std::to_string(i) + " outside universe");
    return i;
  }
  void same_size(const IndexSet& o) const {
    if (o.bits_.size() != bits_.size()) throw UniverseError("sets over different universes");
  }

  Bits bits_;
};

/// Lectic order: A < B iff the smallest element in which they differ lies in B.
template <class Tag>
bool lectic_less(const IndexSet<Tag>& a, const IndexSet<Tag>& b) {
  auto diff = a.bits() ^ b.bits();
  auto i = diff.find_first();
  if (i == IndexSet<Tag>::npos) return false;
  return b.contains(i);
}

template <class Tag>
struct LecticLess {
  bool operator()(const IndexSet<Tag>& a, const IndexSet<Tag>& b) const { return lectic_less(a, b); }
};

template <class Tag>
struct IndexSetHash {
  std::size_t operator()(const IndexSet<Tag>& s) const noexcept { return s.hash(); }
};

struct AttributeTag {};
struct ObjectTag {};

using AttributeSet = IndexSet<AttributeTag>;
using ObjectSet = IndexSet<ObjectTag>;

// Position of a set in the lectic enumeration of P(M): element 0 is the most
// significant bit. Only for |M| <= 63.
inline std::uint64_t lectic_rank(const AttributeSet& s) {
  const auto n = s.universe_size();
  if (n > 63) throw CapacityError("lectic rank needs |M| <= 63");
  std::uint64_t r = 0;
  for (auto i = s.first(); i != AttributeSet::npos; i = s.next(i)) r |= std::uint64_t{1} << (n - 1 - i);
  return r;
}

inline AttributeSet from_lectic_rank(std::size_t n, std::uint64_t rank) {
  AttributeSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((rank >> (n - 1 - i)) & 1U) s.insert(i);
  return s;
}

}  // namespace collex
