#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "revcat/choice.hpp"

namespace revcat {

enum class Axiom { CInd, CNeu, LocalIia, Overload, Monotonicity, Condition1 };

std::string_view to_string(Axiom axiom);

/// Witness of a failed check. Field roles by axiom:
///   CInd:        subset = S, external = E, item = a, other = b;
///                lhs = p(a,S)/p(b,S), rhs = p(a,S∪E)/p(b,S∪E)
///   CNeu:        subset = S, external = E, reference = C, item = x;
///                lhs = p(x,S∪E), rhs = p(x,C∪E)
///   LocalIia:    subset = {a,b}, external = menu A, item = a, other = b;
///                lhs = p(a,ab)/p(b,ab), rhs = p(a,A)/p(b,A)
///   Overload,
///   Monotonicity: subset = S, reference = T (S ⊊ T), external = E, item = x;
///                lhs = p(x,S∪E), rhs = p(x,T∪E)
///   Condition1:  subset = A, external = B, reference = class X_i;
///                lhs = p(A∩X_i,A), rhs = p(B∩X_i,B)
/// Ratios whose denominator vanishes (possible only in tolerance mode) are
/// reported as the two cross products instead.
struct Counterexample {
  Axiom axiom = Axiom::CInd;
  ItemSet subset;
  ItemSet external;
  ItemSet reference;
  Item item = -1;
  Item other = -1;
  Rational lhs;
  Rational rhs;

  std::string describe(const Universe& universe) const;
  bool operator==(const Counterexample&) const = default;
};

struct AxiomVerdict {
  bool holds = true;
  std::uint64_t checked = 0;
  std::optional<Counterexample> counterexample;
};

struct CategoryVerdict {
  AxiomVerdict cind;
  AxiomVerdict cneu;
  bool nontrivial = false;

  bool holds() const { return cind.holds && cneu.holds; }
};

/// Ratio invariance of items in C against every nonempty external set E.
/// Throws Error(NotPositive) on a non-positive p in exact mode.
AxiomVerdict check_cind(const StochasticChoice& p, ItemSet category, const Tolerance& tol = {});

/// External items are unaffected by which nonempty part of C is present.
AxiomVerdict check_cneu(const StochasticChoice& p, ItemSet category, const Tolerance& tol = {});

CategoryVerdict is_category(const StochasticChoice& p, ItemSet category, const Tolerance& tol = {});

/// c-IND alone.
AxiomVerdict is_weak_category(const StochasticChoice& p, ItemSet category, const Tolerance& tol = {});

/// p(a,ab)/p(b,ab) = p(a,A)/p(b,A) for every pair in C and every menu A ⊇ {a,b}.
AxiomVerdict check_local_iia(const StochasticChoice& p, ItemSet set, const Tolerance& tol = {});

/// p(x,S∪E) < p(x,T∪E) for nonempty S ⊊ T ⊆ G, nonempty E outside G, x in E:
/// the class loses share to outside items as its content grows.
AxiomVerdict check_overload(const StochasticChoice& p, ItemSet set, const Tolerance& tol = {});

/// p(x,S∪E) > p(x,T∪E) under the same quantifiers as check_overload.
AxiomVerdict check_monotonicity(const StochasticChoice& p, ItemSet set, const Tolerance& tol = {});

/// Recomputes (lhs, rhs) of a counterexample from the data.
std::pair<Rational, Rational> reevaluate(const StochasticChoice& p, const Counterexample& ce);

/// True when the recomputed quantities equal the recorded ones and still
/// violate the axiom under tol.
bool reproduces(const StochasticChoice& p, const Counterexample& ce, const Tolerance& tol = {});

}  // namespace revcat
