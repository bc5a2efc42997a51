#include "revcat/item_set.hpp"

#include <algorithm>

namespace revcat {

std::vector<Item> ItemSet::items() const { return std::vector<Item>(begin(), end()); }

namespace {

bool lexicographic_less(ItemSet lhs, ItemSet rhs) {
  auto a = lhs.begin();
  auto b = rhs.begin();
  for (; a != lhs.end() && b != rhs.end(); ++a, ++b) {
    if (*a != *b) return *a < *b;
  }
  return a == lhs.end() && b != rhs.end();
}

}  // namespace

bool canonical_less(ItemSet lhs, ItemSet rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return lexicographic_less(lhs, rhs);
}

bool size_descending_less(ItemSet lhs, ItemSet rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() > rhs.size();
  return lexicographic_less(lhs, rhs);
}

std::vector<ItemSet> nonempty_subsets(ItemSet of) {
  std::vector<ItemSet> out;
  out.reserve((std::size_t{1} << of.size()) - 1);
  for_each_nonempty_subset(of, [&](ItemSet s) { out.push_back(s); });
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace revcat

namespace revcat {

ItemSet compress(ItemSet set, ItemSet within) {
  std::uint32_t out = 0;
  int position = 0;
  for (Item a : within) {
    if (set.contains(a)) out |= 1u << position;
    ++position;
  }
  return ItemSet(out);
}

ItemSet expand(ItemSet local, ItemSet within) {
  ItemSet out;
  int position = 0;
  for (Item a : within) {
    if (local.contains(position)) out = out.with(a);
    ++position;
  }
  return out;
}

}  // namespace revcat
