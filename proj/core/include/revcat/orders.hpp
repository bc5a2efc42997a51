#pragma once

#include <string>
#include <vector>

#include "revcat/choice.hpp"
#include "revcat/partition.hpp"

namespace revcat {

/// Strict total order over items 0..n-1, best first.
class LinearOrder {
 public:
  LinearOrder() = default;
  /// Throws Error(BadParameter) unless `ranking` is a permutation of 0..n-1.
  explicit LinearOrder(std::vector<Item> ranking);

  int size() const { return static_cast<int>(ranking_.size()); }
  const std::vector<Item>& ranking() const { return ranking_; }
  /// Position of a, 0 being the best.
  int rank(Item a) const { return position_[static_cast<std::size_t>(a)]; }
  bool prefers(Item a, Item b) const { return rank(a) < rank(b); }
  /// max(A, L); A must be nonempty.
  Item best(ItemSet menu) const;
  /// Ranking restricted to `subset`, re-indexed by compress(., subset).
  LinearOrder restrict_to(ItemSet subset) const;
  /// Classes contiguous in the ranking.
  bool is_block_order(const Partition& partition) const;
  /// Order induced on class indices; only meaningful for block orders.
  LinearOrder project(const Partition& partition) const;
  std::string describe(const Universe& universe) const;

  bool operator==(const LinearOrder& other) const { return ranking_ == other.ranking_; }
  bool operator<(const LinearOrder& other) const { return ranking_ < other.ranking_; }

 private:
  std::vector<Item> ranking_;
  std::vector<int> position_;
};

/// All n! orders in lexicographic order of their rankings.
std::vector<LinearOrder> all_orders(int n);

/// Block order with class blocks ranked by `classes` and each block ranked by
/// the matching fiber order (over the class's compressed indices).
LinearOrder block_order(const Partition& partition, const LinearOrder& classes, const std::vector<LinearOrder>& fibers);

}  // namespace revcat
