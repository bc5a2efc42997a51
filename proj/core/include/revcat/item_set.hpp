#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace revcat {

/// Index of an alternative within its universe (universe ids are sorted, so
/// index order is id order).
using Item = int;

inline constexpr int kMaxUniverse = 24;

/// A subset of a finite universe of at most kMaxUniverse items, stored as a
/// bit mask. Menus, categories, events and partition classes are all ItemSets.
class ItemSet {
 public:
  constexpr ItemSet() = default;
  constexpr explicit ItemSet(std::uint32_t mask) : mask_(mask) {}
  ItemSet(std::initializer_list<Item> items) {
    for (Item i : items) mask_ |= bit(i);
  }

  static constexpr ItemSet full(int n) { return ItemSet(n >= 32 ? ~0u : ((1u << n) - 1u)); }
  static constexpr ItemSet single(Item i) { return ItemSet(bit(i)); }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(Item i) const { return (mask_ & bit(i)) != 0; }
  constexpr bool subset_of(ItemSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool intersects(ItemSet other) const { return (mask_ & other.mask_) != 0; }
  /// Smallest item; undefined on the empty set.
  constexpr Item first() const { return std::countr_zero(mask_); }

  constexpr ItemSet operator|(ItemSet o) const { return ItemSet(mask_ | o.mask_); }
  constexpr ItemSet operator&(ItemSet o) const { return ItemSet(mask_ & o.mask_); }
  /// Set difference.
  constexpr ItemSet operator-(ItemSet o) const { return ItemSet(mask_ & ~o.mask_); }
  constexpr ItemSet with(Item i) const { return ItemSet(mask_ | bit(i)); }
  constexpr ItemSet without(Item i) const { return ItemSet(mask_ & ~bit(i)); }

  constexpr bool operator==(const ItemSet&) const = default;

  std::vector<Item> items() const;

  /// Iterates the items in increasing order.
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Item;
    using difference_type = std::ptrdiff_t;
    using pointer = const Item*;
    using reference = Item;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint32_t rest) : rest_(rest) {}
    constexpr Item operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint32_t rest_;
  };
  constexpr iterator begin() const { return iterator(mask_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  static constexpr std::uint32_t bit(Item i) { return 1u << i; }
  std::uint32_t mask_ = 0;
};

/// Canonical order on sets: by size, then lexicographically by sorted items.
bool canonical_less(ItemSet lhs, ItemSet rhs);

/// Order used for category search: decreasing size, then lexicographic.
bool size_descending_less(ItemSet lhs, ItemSet rhs);

/// All nonempty subsets of `of`, in canonical order.
std::vector<ItemSet> nonempty_subsets(ItemSet of);

/// Calls fn(subset) for every nonempty subset of `of` (mask order, not canonical).
template <typename Fn>
void for_each_nonempty_subset(ItemSet of, Fn&& fn) {
  const std::uint32_t m = of.mask();
  for (std::uint32_t s = m; s != 0; s = (s - 1) & m) fn(ItemSet(s));
}

}  // namespace revcat

namespace revcat {

/// Re-indexes the members of `set` (which must lie inside `within`) to
/// positions 0..|within|-1 in increasing order of `within`'s items.
ItemSet compress(ItemSet set, ItemSet within);

/// Inverse of compress.
ItemSet expand(ItemSet local, ItemSet within);

}  // namespace revcat
