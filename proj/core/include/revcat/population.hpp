#pragma once

#include <string>
#include <vector>

#include "revcat/axioms.hpp"
#include "revcat/categorizer.hpp"
#include "revcat/linear_feasibility.hpp"

namespace revcat {

/// Deterministic choice c_X(A) = fibers[i](A ∩ X_i) with i = base(pi(A)),
/// stored in factored form.
struct ResolvableChoice {
  /// Indexed by index-menu mask; base[J] ∈ J. Entry 0 is unused.
  std::vector<int> base;
  /// fibers[i] is indexed by the compressed mask of S ⊆ X_i and holds the
  /// chosen item (a universe index) of S. Entry 0 is unused.
  std::vector<std::vector<Item>> fibers;

  Item choose(const Partition& partition, ItemSet menu) const;
  bool operator==(const ResolvableChoice&) const = default;
  auto operator<=>(const ResolvableChoice&) const = default;
};

struct PopulationDistribution {
  Universe universe;
  Partition partition;
  /// Canonical enumeration order; weights nonnegative and summing to one.
  std::vector<std::pair<ResolvableChoice, Rational>> weights;
};

/// |R| = prod_{|J|>=2} |J| * prod_i prod_{S ⊆ X_i, |S|>=2} |S|, exactly.
Integer count_resolvable(const Partition& partition);

/// Complete enumeration, lexicographic over the base table (index menus in
/// canonical order) and then each class's fiber table. Throws
/// Error(SizeBound) carrying the exact count past limits.max_resolvable.
std::vector<ResolvableChoice> enumerate_resolvable(const Partition& partition, const Limits& limits = {});

/// Throws Error(BadSum / OutOfRange / InvalidPartition) on an invalid Q.
void validate_population(const PopulationDistribution& q);

/// p(a,A) = total weight of the choices picking a from A.
StochasticChoice induce_choice(const PopulationDistribution& q);

/// Independent draws: Q(c) = prod_J omega(c_I(J),J) * prod_i prod_S sigma_i(c_i(S),S).
/// Throws Error(Degenerate) for a degenerate partition.
PopulationDistribution q_from_scc(const Decomposition& d, const Limits& limits = {});

/// Class masses agree across menus with the same pi-image. The
/// counterexample is (A, B, X_i) with lhs = p(A∩X_i,A), rhs = p(B∩X_i,B).
AxiomVerdict check_condition1(const StochasticChoice& p, const Partition& partition, const Tolerance& tol = {});

enum class PopulationRoute {
  /// Normalized product of p(c(B),B) over all menus B.
  MenuProduct,
  /// Independent draws from omega (from condition 1) and from p on class menus.
  Factored,
  /// Exact feasibility over the weights of R.
  Linear,
};
std::string_view to_string(PopulationRoute route);

struct PopulationFit {
  PopulationDistribution q;
  PopulationRoute route = PopulationRoute::MenuProduct;
};

/// Rows of the population system: item = -1 is total mass, otherwise p(item, menu).
struct PopulationRow {
  Item item = -1;
  ItemSet menu;
  bool operator==(const PopulationRow&) const = default;
};

struct PopulationRefutation {
  std::vector<PopulationRow> rows;
  std::vector<Rational> multipliers;
};

/// Q on R with induce_choice(Q) = p, by exact feasibility.
Outcome<PopulationDistribution, PopulationRefutation> solve_population(const StochasticChoice& p,
                                                                       const Partition& partition,
                                                                       const Limits& limits = {});
bool refutes(const PopulationRefutation& refutation, const StochasticChoice& p, const Partition& partition,
             const Limits& limits = {});

/// Tries the closed-form products first and falls back to exact feasibility;
/// each candidate must reproduce p exactly. Throws Error(Condition1Violated),
/// Error(NotPositive), or Error(NotRepresentable) when no Q on R generates p
/// (condition 1 alone does not guarantee one).
PopulationFit q_from_condition1(const StochasticChoice& p, const Partition& partition, const Limits& limits = {});

}  // namespace revcat
