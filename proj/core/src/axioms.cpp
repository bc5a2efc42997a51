#include "revcat/axioms.hpp"

#include <algorithm>
#include <vector>

#include "revcat/error.hpp"

namespace revcat {

std::string_view to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::CInd: return "c-IND";
    case Axiom::CNeu: return "c-NEU";
    case Axiom::LocalIia: return "local-IIA";
    case Axiom::Overload: return "c-Overload";
    case Axiom::Monotonicity: return "c-Monotonicity";
    case Axiom::Condition1: return "condition-1";
  }
  return "unknown";
}

namespace {

void require_positive(const StochasticChoice& p, const Tolerance& tol, std::string_view what) {
  if (!p.positive() && tol.exact()) {
    throw Error(ErrorCode::NotPositive, std::string(what) + " compares probability ratios; p has zero entries");
  }
}

void require_inside(const StochasticChoice& p, ItemSet set) {
  if (set.empty() || !set.subset_of(p.all())) {
    throw Error(ErrorCode::ForeignItem, "set must be a nonempty subset of the universe");
  }
}

std::vector<ItemSet> subsets_of_size_at_least(ItemSet of, int min_size) {
  std::vector<ItemSet> out;
  for (ItemSet s : nonempty_subsets(of)) {
    if (s.size() >= min_size) out.push_back(s);
  }
  return out;
}

// Fills lhs/rhs with the two ratios, or the two cross products when a
// denominator is zero. Returns whether the ratios agree under tol.
bool ratio_pair(const Rational& a_small, const Rational& b_small, const Rational& a_big, const Rational& b_big,
                const Tolerance& tol, Rational& lhs, Rational& rhs) {
  Rational cross_left = a_small * b_big;
  Rational cross_right = b_small * a_big;
  const bool equal = tol.equal(cross_left, cross_right);
  if (sgn(b_small) != 0 && sgn(b_big) != 0) {
    lhs = a_small / b_small;
    rhs = a_big / b_big;
  } else {
    lhs = std::move(cross_left);
    rhs = std::move(cross_right);
  }
  return equal;
}

AxiomVerdict strict_external_order(const StochasticChoice& p, ItemSet set, const Tolerance& tol, Axiom axiom) {
  require_inside(p, set);
  AxiomVerdict verdict;
  const ItemSet outside = p.all() - set;
  if (outside.empty()) return verdict;
  const std::vector<ItemSet> inner = nonempty_subsets(set);
  for (ItemSet e : nonempty_subsets(outside)) {
    for (Item x : e) {
      for (ItemSet s : inner) {
        for (ItemSet t : inner) {
          if (t == s || !s.subset_of(t)) continue;
          ++verdict.checked;
          const Rational& small = p.prob(x, s | e);
          const Rational& large = p.prob(x, t | e);
          const bool ok = axiom == Axiom::Overload ? tol.less(small, large) : tol.greater(small, large);
          if (!ok) {
            verdict.holds = false;
            verdict.counterexample = Counterexample{axiom, s, e, t, x, -1, small, large};
            return verdict;
          }
        }
      }
    }
  }
  return verdict;
}

}  // namespace

std::string Counterexample::describe(const Universe& u) const {
  auto id = [&](Item i) { return i >= 0 ? u.id(i) : std::string("?"); };
  auto q = [](const Rational& r) { return format_rational(r); };
  switch (axiom) {
    case Axiom::CInd:
      return "c-IND fails: p(" + id(item) + "," + u.describe(subset) + ")/p(" + id(other) + "," + u.describe(subset) +
             ") = " + q(lhs) + " but p(" + id(item) + "," + u.describe(subset | external) + ")/p(" + id(other) + "," +
             u.describe(subset | external) + ") = " + q(rhs);
    case Axiom::CNeu:
      return "c-NEU fails: p(" + id(item) + "," + u.describe(subset | external) + ") = " + q(lhs) + " but p(" + id(item) +
             "," + u.describe(reference | external) + ") = " + q(rhs);
    case Axiom::LocalIia:
      return "local IIA fails: p(" + id(item) + "," + u.describe(subset) + ")/p(" + id(other) + "," + u.describe(subset) +
             ") = " + q(lhs) + " but p(" + id(item) + "," + u.describe(external) + ")/p(" + id(other) + "," +
             u.describe(external) + ") = " + q(rhs);
    case Axiom::Overload:
    case Axiom::Monotonicity:
      return std::string(to_string(axiom)) + " fails: p(" + id(item) + "," + u.describe(subset | external) + ") = " + q(lhs) +
             (axiom == Axiom::Overload ? " is not below " : " is not above ") + "p(" + id(item) + "," +
             u.describe(reference | external) + ") = " + q(rhs);
    case Axiom::Condition1:
      return "mass of class " + u.describe(reference) + " moves between menus with the same classes: p(" +
             u.describe(subset & reference) + "," + u.describe(subset) + ") = " + q(lhs) + " but p(" +
             u.describe(external & reference) + "," +
             u.describe(external) + ") = " + q(rhs);
  }
  return "counterexample";
}

AxiomVerdict check_cind(const StochasticChoice& p, ItemSet category, const Tolerance& tol) {
  require_inside(p, category);
  require_positive(p, tol, "c-IND");
  AxiomVerdict verdict;
  const ItemSet outside = p.all() - category;
  if (outside.empty() || category.size() < 2) return verdict;
  const std::vector<ItemSet> externals = nonempty_subsets(outside);
  for (ItemSet s : subsets_of_size_at_least(category, 2)) {
    const std::vector<Item> members = s.items();
    for (ItemSet e : externals) {
      const ItemSet menu = s | e;
      for (std::size_t k = 0; k + 1 < members.size(); ++k) {
        const Item a = members[k];
        const Item b = members[k + 1];
        ++verdict.checked;
        Rational lhs;
        Rational rhs;
        if (!ratio_pair(p.prob(a, s), p.prob(b, s), p.prob(a, menu), p.prob(b, menu), tol, lhs, rhs)) {
          verdict.holds = false;
          verdict.counterexample = Counterexample{Axiom::CInd, s, e, category, a, b, lhs, rhs};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

AxiomVerdict check_cneu(const StochasticChoice& p, ItemSet category, const Tolerance& tol) {
  require_inside(p, category);
  AxiomVerdict verdict;
  const ItemSet outside = p.all() - category;
  if (outside.empty()) return verdict;
  const std::vector<ItemSet> inner = nonempty_subsets(category);
  for (ItemSet e : nonempty_subsets(outside)) {
    const ItemSet full_menu = category | e;
    for (Item x : e) {
      const Rational& reference = p.prob(x, full_menu);
      for (ItemSet s : inner) {
        if (s == category) continue;
        ++verdict.checked;
        const Rational& value = p.prob(x, s | e);
        if (!tol.equal(value, reference)) {
          verdict.holds = false;
          verdict.counterexample = Counterexample{Axiom::CNeu, s, e, category, x, -1, value, reference};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

CategoryVerdict is_category(const StochasticChoice& p, ItemSet category, const Tolerance& tol) {
  CategoryVerdict verdict;
  verdict.cind = check_cind(p, category, tol);
  verdict.cneu = check_cneu(p, category, tol);
  verdict.nontrivial = category.size() > 1 && category.size() < p.size();
  return verdict;
}

AxiomVerdict is_weak_category(const StochasticChoice& p, ItemSet category, const Tolerance& tol) {
  return check_cind(p, category, tol);
}

AxiomVerdict check_local_iia(const StochasticChoice& p, ItemSet set, const Tolerance& tol) {
  require_inside(p, set);
  require_positive(p, tol, "local IIA");
  AxiomVerdict verdict;
  const std::vector<Item> members = set.items();
  const std::vector<ItemSet> menus = nonempty_subsets(p.all());
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const Item a = members[i];
      const Item b = members[j];
      const ItemSet pair = ItemSet{a, b};
      for (ItemSet menu : menus) {
        if (menu == pair || !pair.subset_of(menu)) continue;
        ++verdict.checked;
        Rational lhs;
        Rational rhs;
        if (!ratio_pair(p.prob(a, pair), p.prob(b, pair), p.prob(a, menu), p.prob(b, menu), tol, lhs, rhs)) {
          verdict.holds = false;
          verdict.counterexample = Counterexample{Axiom::LocalIia, pair, menu, set, a, b, lhs, rhs};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

AxiomVerdict check_overload(const StochasticChoice& p, ItemSet set, const Tolerance& tol) {
  return strict_external_order(p, set, tol, Axiom::Overload);
}

AxiomVerdict check_monotonicity(const StochasticChoice& p, ItemSet set, const Tolerance& tol) {
  return strict_external_order(p, set, tol, Axiom::Monotonicity);
}

std::pair<Rational, Rational> reevaluate(const StochasticChoice& p, const Counterexample& ce) {
  Rational lhs;
  Rational rhs;
  switch (ce.axiom) {
    case Axiom::CInd: {
      const ItemSet menu = ce.subset | ce.external;
      ratio_pair(p.prob(ce.item, ce.subset), p.prob(ce.other, ce.subset), p.prob(ce.item, menu), p.prob(ce.other, menu),
                 Tolerance{}, lhs, rhs);
      break;
    }
    case Axiom::LocalIia:
      ratio_pair(p.prob(ce.item, ce.subset), p.prob(ce.other, ce.subset), p.prob(ce.item, ce.external),
                 p.prob(ce.other, ce.external), Tolerance{}, lhs, rhs);
      break;
    case Axiom::CNeu:
    case Axiom::Overload:
    case Axiom::Monotonicity:
      lhs = p.prob(ce.item, ce.subset | ce.external);
      rhs = p.prob(ce.item, ce.reference | ce.external);
      break;
    case Axiom::Condition1:
      lhs = event_prob(p, ce.reference, ce.subset);
      rhs = event_prob(p, ce.reference, ce.external);
      break;
  }
  return {lhs, rhs};
}

bool reproduces(const StochasticChoice& p, const Counterexample& ce, const Tolerance& tol) {
  auto [lhs, rhs] = reevaluate(p, ce);
  if (lhs != ce.lhs || rhs != ce.rhs) return false;
  switch (ce.axiom) {
    case Axiom::Overload: return !tol.less(lhs, rhs);
    case Axiom::Monotonicity: return !tol.greater(lhs, rhs);
    case Axiom::CInd:
    case Axiom::LocalIia: {
      // Ratios (or cross products) must differ beyond tolerance; compare the
      // cross-multiplied form to stay consistent with the check itself.
      const ItemSet small = ce.subset;
      const ItemSet big = ce.axiom == Axiom::CInd ? ce.subset | ce.external : ce.external;
      return !tol.equal(p.prob(ce.item, small) * p.prob(ce.other, big), p.prob(ce.other, small) * p.prob(ce.item, big));
    }
    case Axiom::CNeu:
    case Axiom::Condition1: return !tol.equal(lhs, rhs);
  }
  return false;
}

}  // namespace revcat
