#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revcat/item_set.hpp"
#include "revcat/rational.hpp"

namespace revcat {

/// Sorted, duplicate-free list of alternative ids. Item indices follow the
/// sorted order.
class Universe {
 public:
  Universe() = default;
  /// Sorts the ids. Throws Error(BadUniverse) on empty or duplicate ids.
  explicit Universe(std::vector<std::string> ids);

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Item i) const { return ids_[static_cast<std::size_t>(i)]; }
  ItemSet all() const { return ItemSet::full(size()); }

  std::optional<Item> find(std::string_view id) const;
  /// Throws Error(ForeignItem) when the id is unknown.
  Item index_of(std::string_view id) const;
  ItemSet set_of(const std::vector<std::string>& ids) const;
  std::vector<std::string> ids_of(ItemSet set) const;
  /// "{a,b,c}"
  std::string describe(ItemSet set) const;

  bool operator==(const Universe&) const = default;

 private:
  std::vector<std::string> ids_;
};

/// Size guards for the exponential procedures. Defaults are the documented
/// practical bounds; callers may raise them.
struct Limits {
  int max_categorize_n = 10;
  int max_rum_n = 7;
  int max_nsc_n = 8;
  std::uint64_t max_resolvable = 1'000'000;
};

/// Throws Error(SizeBound) when n exceeds bound.
void require_size(int n, int bound, std::string_view what);

/// Exact stochastic choice over the full menu domain of a finite universe.
/// Immutable; every menu's probabilities sum to exactly one.
class StochasticChoice {
 public:
  using Generator = std::function<Rational(Item, ItemSet)>;

  /// Builds the table from gen(a, A) for every nonempty A and a in A and checks
  /// the simplex constraints exactly (Error BadSum / OutOfRange).
  static StochasticChoice from_function(Universe universe, const Generator& gen);
  /// Table layout: entry menu.mask() * n + a; entries for a outside the menu
  /// must be zero. Checked exactly like from_function. `defined` marks the
  /// menus present (indexed by mask); empty means the full domain.
  static StochasticChoice from_table(Universe universe, std::vector<Rational> table, std::vector<char> defined = {});

  const Universe& universe() const { return universe_; }
  int size() const { return universe_.size(); }
  ItemSet all() const { return universe_.all(); }

  /// p(a, A); zero when a is not in A. Throws Error(MissingMenu) for a menu
  /// outside a partial domain.
  const Rational& prob(Item a, ItemSet menu) const;
  bool positive() const { return positive_; }

  /// All 2^n - 1 menus present. Only validate(..., allow_partial) produces
  /// partial choices; analysis beyond the axiom checks requires a full domain.
  bool full_domain() const { return defined_.empty(); }
  bool defined(ItemSet menu) const { return defined_.empty() || defined_[menu.mask()] != 0; }

  bool operator==(const StochasticChoice& other) const;

 private:
  StochasticChoice(Universe universe, std::vector<Rational> table);
  std::size_t slot(Item a, ItemSet menu) const {
    return static_cast<std::size_t>(menu.mask()) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(a);
  }

  Universe universe_;
  std::vector<Rational> table_;
  std::vector<char> defined_;
  bool positive_ = false;
};

struct RawMenu {
  std::vector<std::string> items;
  std::vector<std::pair<std::string, Rational>> probs;
};

/// Unvalidated dataset as read from the JSON format.
struct RawDataset {
  std::vector<std::string> universe;
  std::vector<RawMenu> menus;
};

/// Validates a raw table. Singleton menus may be omitted (their only value is
/// forced); items of a menu without an entry get probability zero. With a
/// nonzero tolerance, menus whose sums are within epsilon of one are accepted
/// and rescaled to sum to one exactly.
/// Throws Error with code MissingMenu, BadSum, OutOfRange, ForeignItem or
/// MalformedMenu (empty or repeated menu).
StochasticChoice validate(const RawDataset& raw, const Tolerance& tol = {});

/// Like validate, but absent menus are left undefined instead of rejected.
/// Meant for published tables with known-bad rows; reading an undefined menu
/// later throws Error(MissingMenu).
StochasticChoice validate_partial(const RawDataset& raw, const Tolerance& tol = {});

/// Throws Error(MissingMenu) unless p has the full menu domain.
void require_full_domain(const StochasticChoice& p);

/// Inverse of validate: every defined menu of p, canonical order.
RawDataset to_raw(const StochasticChoice& p);

/// p(C, A) = sum of p(a, A) over a in C and A.
Rational event_prob(const StochasticChoice& p, ItemSet event, ItemSet menu);

/// The choice on universe Y whose table is p's table on menus inside Y.
/// Throws Error(EmptyRestriction) when Y is empty.
StochasticChoice restrict(const StochasticChoice& p, ItemSet subset);

}  // namespace revcat
