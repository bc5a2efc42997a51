#include "revcat/choice.hpp"

#include <algorithm>

#include "revcat/error.hpp"

namespace revcat {

// Tables hold n * 2^n rationals; beyond this the dense layout is impractical.
constexpr int kMaxTableUniverse = 16;

Universe::Universe(std::vector<std::string> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw Error(ErrorCode::BadUniverse, "universe is empty");
  if (static_cast<int>(ids_.size()) > kMaxTableUniverse) {
    throw Error(ErrorCode::BadUniverse, "universe has " + std::to_string(ids_.size()) + " items; at most " +
                                            std::to_string(kMaxTableUniverse) + " are supported");
  }
  std::sort(ids_.begin(), ids_.end());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].empty()) throw Error(ErrorCode::BadUniverse, "empty alternative id");
    if (i > 0 && ids_[i] == ids_[i - 1]) throw Error(ErrorCode::BadUniverse, "duplicate alternative id '" + ids_[i] + "'");
  }
}

std::optional<Item> Universe::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Item>(it - ids_.begin());
}

Item Universe::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorCode::ForeignItem, "'" + std::string(id) + "' is not in the universe");
}

ItemSet Universe::set_of(const std::vector<std::string>& ids) const {
  ItemSet out;
  for (const auto& id : ids) out = out.with(index_of(id));
  return out;
}

std::vector<std::string> Universe::ids_of(ItemSet set) const {
  std::vector<std::string> out;
  for (Item i : set) out.push_back(id(i));
  return out;
}

std::string Universe::describe(ItemSet set) const {
  std::string out = "{";
  bool first = true;
  for (Item i : set) {
    if (!first) out += ",";
    out += id(i);
    first = false;
  }
  return out + "}";
}

void require_size(int n, int bound, std::string_view what) {
  if (n > bound) {
    throw Error(ErrorCode::SizeBound, std::string(what) + " needs n <= " + std::to_string(bound) + ", got n = " +
                                          std::to_string(n) + " (raise the limit to override)");
  }
}

StochasticChoice::StochasticChoice(Universe universe, std::vector<Rational> table)
    : universe_(std::move(universe)), table_(std::move(table)) {}

StochasticChoice StochasticChoice::from_table(Universe universe, std::vector<Rational> table, std::vector<char> defined) {
  const int n = universe.size();
  const std::size_t menus = std::size_t{1} << n;
  if (table.size() != menus * static_cast<std::size_t>(n) || (!defined.empty() && defined.size() != menus)) {
    throw Error(ErrorCode::Internal, "table size does not match the universe");
  }
  if (!defined.empty() && std::all_of(defined.begin() + 1, defined.end(), [](char d) { return d != 0; })) defined.clear();
  StochasticChoice p(std::move(universe), std::move(table));
  p.defined_ = std::move(defined);
  bool positive = true;
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet menu(m);
    if (!p.defined(menu)) continue;
    Rational sum = 0;
    for (Item a = 0; a < n; ++a) {
      Rational& v = p.table_[p.slot(a, menu)];
      v.canonicalize();
      if (!menu.contains(a)) {
        if (sgn(v) != 0) throw Error(ErrorCode::ForeignItem, p.universe_.id(a) + " is not in menu " + p.universe_.describe(menu));
        continue;
      }
      if (sgn(v) < 0 || v > 1) {
        throw Error(ErrorCode::OutOfRange, "p(" + p.universe_.id(a) + ", " + p.universe_.describe(menu) +
                                               ") = " + format_rational(v) + " is outside [0,1]");
      }
      if (sgn(v) == 0) positive = false;
      sum += v;
    }
    if (sum != 1) {
      throw Error(ErrorCode::BadSum, "menu " + p.universe_.describe(menu) + " sums to " + format_rational(sum));
    }
  }
  p.positive_ = positive;
  return p;
}

StochasticChoice StochasticChoice::from_function(Universe universe, const Generator& gen) {
  const int n = universe.size();
  const std::size_t menus = std::size_t{1} << n;
  std::vector<Rational> table(menus * static_cast<std::size_t>(n));
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet menu(m);
    for (Item a : menu) table[static_cast<std::size_t>(m) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = gen(a, menu);
  }
  return from_table(std::move(universe), std::move(table));
}

const Rational& StochasticChoice::prob(Item a, ItemSet menu) const {
  if (!defined(menu)) throw Error(ErrorCode::MissingMenu, "menu " + universe_.describe(menu) + " is not in the data");
  return table_[slot(a, menu)];
}

void require_full_domain(const StochasticChoice& p) {
  if (!p.full_domain()) throw Error(ErrorCode::MissingMenu, "this analysis needs all nonempty menus");
}

bool StochasticChoice::operator==(const StochasticChoice& other) const {
  return universe_ == other.universe_ && table_ == other.table_ && defined_ == other.defined_;
}

namespace {

StochasticChoice validate_impl(const RawDataset& raw, const Tolerance& tol, bool allow_partial) {
  Universe universe(raw.universe);
  const int n = universe.size();
  const std::size_t menus = std::size_t{1} << n;
  std::vector<Rational> table(menus * static_cast<std::size_t>(n));
  std::vector<bool> seen(menus, false);
  auto at = [&](ItemSet menu, Item a) -> Rational& {
    return table[static_cast<std::size_t>(menu.mask()) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)];
  };

  for (const RawMenu& raw_menu : raw.menus) {
    if (raw_menu.items.empty()) throw Error(ErrorCode::MalformedMenu, "menu with no items");
    ItemSet menu;
    for (const auto& id : raw_menu.items) {
      Item a = universe.index_of(id);
      if (menu.contains(a)) throw Error(ErrorCode::MalformedMenu, "item '" + id + "' repeated in a menu");
      menu = menu.with(a);
    }
    if (seen[menu.mask()]) throw Error(ErrorCode::MalformedMenu, "menu " + universe.describe(menu) + " listed twice");
    seen[menu.mask()] = true;
    ItemSet assigned;
    for (const auto& [id, value] : raw_menu.probs) {
      auto a = universe.find(id);
      if (!a || !menu.contains(*a)) {
        throw Error(ErrorCode::ForeignItem, "'" + id + "' is not in menu " + universe.describe(menu));
      }
      if (assigned.contains(*a)) throw Error(ErrorCode::MalformedMenu, "probability for '" + id + "' given twice");
      assigned = assigned.with(*a);
      if (sgn(value) < 0 || value > 1) {
        throw Error(ErrorCode::OutOfRange, "p(" + id + ", " + universe.describe(menu) + ") = " + format_rational(value) +
                                               " is outside [0,1]");
      }
      at(menu, *a) = value;
    }
  }

  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet menu(m);
    if (!seen[m]) {
      if (menu.size() == 1) {
        at(menu, menu.first()) = 1;
        seen[m] = true;
        continue;
      }
      if (allow_partial) continue;
      throw Error(ErrorCode::MissingMenu, "menu " + universe.describe(menu) + " is absent");
    }
    Rational sum = 0;
    for (Item a : menu) sum += at(menu, a);
    if (sum == 1) continue;
    if (!tol.exact() && sgn(sum) > 0 && tol.equal(sum, 1)) {
      for (Item a : menu) at(menu, a) /= sum;
      continue;
    }
    throw Error(ErrorCode::BadSum, "menu " + universe.describe(menu) + " sums to " + format_rational(sum));
  }
  std::vector<char> defined;
  if (allow_partial) defined.assign(seen.begin(), seen.end());
  return StochasticChoice::from_table(std::move(universe), std::move(table), std::move(defined));
}

}  // namespace

StochasticChoice validate(const RawDataset& raw, const Tolerance& tol) { return validate_impl(raw, tol, false); }

StochasticChoice validate_partial(const RawDataset& raw, const Tolerance& tol) { return validate_impl(raw, tol, true); }

RawDataset to_raw(const StochasticChoice& p) {
  RawDataset raw;
  raw.universe = p.universe().ids();
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (!p.defined(menu)) continue;
    RawMenu entry;
    entry.items = p.universe().ids_of(menu);
    for (Item a : menu) entry.probs.emplace_back(p.universe().id(a), p.prob(a, menu));
    raw.menus.push_back(std::move(entry));
  }
  return raw;
}

Rational event_prob(const StochasticChoice& p, ItemSet event, ItemSet menu) {
  Rational sum = 0;
  for (Item a : event & menu) sum += p.prob(a, menu);
  return sum;
}

StochasticChoice restrict(const StochasticChoice& p, ItemSet subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptyRestriction, "cannot restrict to the empty set");
  if (!subset.subset_of(p.all())) throw Error(ErrorCode::ForeignItem, "restriction set is not inside the universe");
  const std::vector<Item> members = subset.items();
  Universe sub(p.universe().ids_of(subset));
  auto lift = [&](ItemSet local) {
    ItemSet global;
    for (Item i : local) global = global.with(members[static_cast<std::size_t>(i)]);
    return global;
  };
  const int k = sub.size();
  const std::size_t menus = std::size_t{1} << k;
  std::vector<Rational> table(menus * static_cast<std::size_t>(k));
  std::vector<char> defined(menus, 0);
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet global = lift(ItemSet(m));
    if (!p.defined(global)) continue;
    defined[m] = 1;
    for (Item a : ItemSet(m)) {
      table[static_cast<std::size_t>(m) * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)] =
          p.prob(members[static_cast<std::size_t>(a)], global);
    }
  }
  if (p.full_domain()) defined.clear();
  return StochasticChoice::from_table(std::move(sub), std::move(table), std::move(defined));
}

}  // namespace revcat
