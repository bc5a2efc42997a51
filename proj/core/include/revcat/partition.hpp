#pragma once

#include <string>
#include <vector>

#include "revcat/choice.hpp"

namespace revcat {

/// Indexed partition {X_i} of the universe {0..n-1}. Classes are ordered by
/// their smallest item, so index i is stable for a given set of classes.
class Partition {
 public:
  Partition() = default;
  /// Throws Error(InvalidPartition) unless the classes are nonempty, disjoint
  /// and cover all n items.
  Partition(int universe_size, std::vector<ItemSet> classes);

  static Partition trivial(int universe_size);
  static Partition singletons(int universe_size);
  /// Throws Error(ForeignItem / InvalidPartition).
  static Partition from_ids(const Universe& universe, const std::vector<std::vector<std::string>>& classes);

  int universe_size() const { return universe_size_; }
  /// |I|
  int size() const { return static_cast<int>(classes_.size()); }
  const std::vector<ItemSet>& classes() const { return classes_; }
  ItemSet class_at(int index) const { return classes_[static_cast<std::size_t>(index)]; }
  /// pi(a)
  int index_of(Item a) const { return index_[static_cast<std::size_t>(a)]; }
  /// pi(A) as a set of class indices.
  ItemSet image(ItemSet menu) const;
  /// Union of the classes whose index is in `indices`.
  ItemSet preimage(ItemSet indices) const;

  /// 1 < |I| < n
  bool nondegenerate() const { return size() > 1 && size() < universe_size_; }
  /// Every class of `finer` lies inside some class of *this.
  bool refines_into(const Partition& finer) const;

  std::string describe(const Universe& universe) const;
  /// Names of the index alternatives: "class:<smallest member id>".
  std::vector<std::string> index_ids(const Universe& universe) const;
  Universe index_universe(const Universe& universe) const { return Universe(index_ids(universe)); }
  std::vector<std::vector<std::string>> to_ids(const Universe& universe) const;

  bool operator==(const Partition&) const = default;

 private:
  int universe_size_ = 0;
  std::vector<ItemSet> classes_;
  std::vector<int> index_;
};

/// Every set partition of {0..n-1} (Bell(n) of them), in restricted-growth order.
std::vector<Partition> all_partitions(int universe_size);

}  // namespace revcat
