#include "revcat/orders.hpp"

#include <algorithm>
#include <numeric>

#include "revcat/error.hpp"

namespace revcat {

LinearOrder::LinearOrder(std::vector<Item> ranking) : ranking_(std::move(ranking)), position_(ranking_.size(), -1) {
  const int n = size();
  for (int pos = 0; pos < n; ++pos) {
    const Item a = ranking_[static_cast<std::size_t>(pos)];
    if (a < 0 || a >= n || position_[static_cast<std::size_t>(a)] != -1) {
      throw Error(ErrorCode::BadParameter, "ranking is not a permutation");
    }
    position_[static_cast<std::size_t>(a)] = pos;
  }
}

Item LinearOrder::best(ItemSet menu) const {
  for (Item a : ranking_) {
    if (menu.contains(a)) return a;
  }
  throw Error(ErrorCode::BadParameter, "max over an empty menu");
}

LinearOrder LinearOrder::restrict_to(ItemSet subset) const {
  std::vector<Item> ranking;
  for (Item a : ranking_) {
    if (subset.contains(a)) ranking.push_back(compress(ItemSet::single(a), subset).first());
  }
  return LinearOrder(std::move(ranking));
}

bool LinearOrder::is_block_order(const Partition& partition) const {
  // Contiguous iff the class index changes at most |I| - 1 times.
  int changes = 0;
  for (std::size_t pos = 1; pos < ranking_.size(); ++pos) {
    if (partition.index_of(ranking_[pos]) != partition.index_of(ranking_[pos - 1])) ++changes;
  }
  return changes == partition.size() - 1;
}

LinearOrder LinearOrder::project(const Partition& partition) const {
  std::vector<Item> classes;
  std::vector<bool> seen(static_cast<std::size_t>(partition.size()), false);
  for (Item a : ranking_) {
    const int i = partition.index_of(a);
    if (!seen[static_cast<std::size_t>(i)]) {
      seen[static_cast<std::size_t>(i)] = true;
      classes.push_back(i);
    }
  }
  return LinearOrder(std::move(classes));
}

std::string LinearOrder::describe(const Universe& universe) const {
  std::string out;
  for (Item a : ranking_) {
    if (!out.empty()) out += " > ";
    out += universe.id(a);
  }
  return out;
}

std::vector<LinearOrder> all_orders(int n) {
  std::vector<Item> ranking(static_cast<std::size_t>(n));
  std::iota(ranking.begin(), ranking.end(), 0);
  std::vector<LinearOrder> orders;
  do {
    orders.emplace_back(ranking);
  } while (std::next_permutation(ranking.begin(), ranking.end()));
  return orders;
}

LinearOrder block_order(const Partition& partition, const LinearOrder& classes, const std::vector<LinearOrder>& fibers) {
  if (classes.size() != partition.size() || fibers.size() != static_cast<std::size_t>(partition.size())) {
    throw Error(ErrorCode::BadParameter, "block order needs one fiber order per class");
  }
  std::vector<Item> ranking;
  for (Item i : classes.ranking()) {
    const ItemSet cls = partition.class_at(i);
    const LinearOrder& fiber = fibers[static_cast<std::size_t>(i)];
    if (fiber.size() != cls.size()) throw Error(ErrorCode::BadParameter, "fiber order size differs from its class");
    for (Item local : fiber.ranking()) ranking.push_back(expand(ItemSet::single(local), cls).first());
  }
  return LinearOrder(std::move(ranking));
}

}  // namespace revcat
