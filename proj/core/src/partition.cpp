#include "revcat/partition.hpp"

#include <algorithm>

#include "revcat/error.hpp"

namespace revcat {

Partition::Partition(int universe_size, std::vector<ItemSet> classes)
    : universe_size_(universe_size), classes_(std::move(classes)), index_(static_cast<std::size_t>(universe_size), -1) {
  if (universe_size <= 0) throw Error(ErrorCode::InvalidPartition, "partition of an empty universe");
  std::sort(classes_.begin(), classes_.end(), [](ItemSet a, ItemSet b) {
    if (a.empty() || b.empty()) return b.empty() && !a.empty();
    return a.first() < b.first();
  });
  ItemSet covered;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const ItemSet c = classes_[i];
    if (c.empty()) throw Error(ErrorCode::InvalidPartition, "empty class");
    if (!c.subset_of(ItemSet::full(universe_size))) throw Error(ErrorCode::InvalidPartition, "class outside the universe");
    if (c.intersects(covered)) throw Error(ErrorCode::InvalidPartition, "classes overlap");
    covered = covered | c;
    for (Item a : c) index_[static_cast<std::size_t>(a)] = static_cast<int>(i);
  }
  if (covered != ItemSet::full(universe_size)) throw Error(ErrorCode::InvalidPartition, "classes do not cover the universe");
}

Partition Partition::trivial(int universe_size) { return Partition(universe_size, {ItemSet::full(universe_size)}); }

Partition Partition::singletons(int universe_size) {
  std::vector<ItemSet> classes;
  for (Item a = 0; a < universe_size; ++a) classes.push_back(ItemSet::single(a));
  return Partition(universe_size, std::move(classes));
}

Partition Partition::from_ids(const Universe& universe, const std::vector<std::vector<std::string>>& classes) {
  std::vector<ItemSet> sets;
  for (const auto& ids : classes) sets.push_back(universe.set_of(ids));
  return Partition(universe.size(), std::move(sets));
}

ItemSet Partition::image(ItemSet menu) const {
  ItemSet out;
  for (Item a : menu) out = out.with(index_of(a));
  return out;
}

ItemSet Partition::preimage(ItemSet indices) const {
  ItemSet out;
  for (int i : indices) out = out | class_at(i);
  return out;
}

bool Partition::refines_into(const Partition& finer) const {
  if (finer.universe_size_ != universe_size_) return false;
  return std::all_of(finer.classes_.begin(), finer.classes_.end(), [&](ItemSet c) {
    return c.subset_of(class_at(index_of(c.first())));
  });
}

std::string Partition::describe(const Universe& universe) const {
  std::string out = "{";
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (i > 0) out += ",";
    out += universe.describe(classes_[i]);
  }
  return out + "}";
}

std::vector<std::string> Partition::index_ids(const Universe& universe) const {
  std::vector<std::string> out;
  for (ItemSet c : classes_) out.push_back("class:" + universe.id(c.first()));
  return out;
}

std::vector<std::vector<std::string>> Partition::to_ids(const Universe& universe) const {
  std::vector<std::vector<std::string>> out;
  for (ItemSet c : classes_) out.push_back(universe.ids_of(c));
  return out;
}

std::vector<Partition> all_partitions(int universe_size) {
  std::vector<Partition> out;
  if (universe_size <= 0) return out;
  // Restricted growth strings: label[0] = 0, label[k] <= 1 + max(label[0..k-1]).
  std::vector<int> label(static_cast<std::size_t>(universe_size), 0);
  std::vector<int> running_max(static_cast<std::size_t>(universe_size), 0);
  while (true) {
    const int blocks = running_max.back() + 1;
    std::vector<ItemSet> classes(static_cast<std::size_t>(blocks));
    for (Item a = 0; a < universe_size; ++a) {
      auto& c = classes[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])];
      c = c.with(a);
    }
    out.emplace_back(universe_size, std::move(classes));

    int k = universe_size - 1;
    while (k > 0 && label[static_cast<std::size_t>(k)] == running_max[static_cast<std::size_t>(k - 1)] + 1) --k;
    if (k == 0) break;
    ++label[static_cast<std::size_t>(k)];
    running_max[static_cast<std::size_t>(k)] =
        std::max(running_max[static_cast<std::size_t>(k - 1)], label[static_cast<std::size_t>(k)]);
    for (int j = k + 1; j < universe_size; ++j) {
      label[static_cast<std::size_t>(j)] = 0;
      running_max[static_cast<std::size_t>(j)] = running_max[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace revcat
