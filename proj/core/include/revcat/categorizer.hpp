#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "revcat/axioms.hpp"
#include "revcat/choice.hpp"
#include "revcat/outcome.hpp"
#include "revcat/partition.hpp"

namespace revcat {

/// Two-stage form p(a,A) = omega(i, pi(A)) * sigma_i(a, A ∩ X_i).
/// omega lives on the index universe ("class:<smallest id>"), sigma_i on the
/// ids of class i.
struct Decomposition {
  Universe universe;
  Partition partition;
  StochasticChoice omega;
  std::vector<StochasticChoice> sigmas;
};

/// Two-stage form with a menu-dependent first stage omega_A.
struct WeakDecomposition {
  Universe universe;
  Partition partition;
  /// Indexed by menu mask; each entry has one weight per class index, zero
  /// for classes absent from the menu. Entry 0 (empty menu) is unused.
  std::vector<std::vector<Rational>> omega_family;
  std::vector<StochasticChoice> sigmas;

  const Rational& omega(ItemSet menu, int class_index) const {
    return omega_family[menu.mask()][static_cast<std::size_t>(class_index)];
  }
};

enum class DecompositionFailureKind { OmegaIllDefined, RecompositionMismatch };

struct DecompositionFailure {
  DecompositionFailureKind kind = DecompositionFailureKind::RecompositionMismatch;
  int class_index = -1;
  /// OmegaIllDefined: two menus with the same pi-image and different masses
  /// of class_index.
  ItemSet first_menu;
  ItemSet second_menu;
  Rational first_mass;
  Rational second_mass;
  /// RecompositionMismatch: p(item, menu) against the recomposed value.
  ItemSet menu;
  Item item = -1;
  Rational observed;
  Rational recomposed;
  /// c-IND witness inside the offending class, when one exists.
  std::optional<Counterexample> cind;

  std::string describe(const Universe& universe) const;
};

/// Non-trivial categories (weak = false) or weak categories (weak = true),
/// ordered by decreasing size, then lexicographically. With `prune`, strict
/// search skips candidates that overlap a found category without being
/// nested in it (they cannot be categories). Throws Error(SizeBound),
/// Error(BadUniverse) for n < 3, Error(NotPositive).
std::vector<ItemSet> enumerate_categories(const StochasticChoice& p, bool weak, const Tolerance& tol = {},
                                          const Limits& limits = {}, bool prune = true);

/// Maximal non-trivial categories as classes, remaining items as singletons;
/// nullopt when p has no non-trivial category.
std::optional<Partition> coarsest_partition(const StochasticChoice& p, const Tolerance& tol = {},
                                            const Limits& limits = {});

Outcome<Decomposition, DecompositionFailure> decompose_scc(const StochasticChoice& p, const Partition& partition,
                                                           const Tolerance& tol = {});

Outcome<WeakDecomposition, DecompositionFailure> decompose_scwc(const StochasticChoice& p, const Partition& partition,
                                                                const Tolerance& tol = {});

/// Throws Error(ComponentNotPositive) or Error(InvalidPartition) when the
/// components do not fit together.
StochasticChoice compose(const Decomposition& d);
StochasticChoice compose(const WeakDecomposition& d);

/// SCC viewed as SCwC: omega_A := omega(., pi(A)).
WeakDecomposition as_weak(const Decomposition& d);

/// Index set of the partition as a universe and the sigma universes, in the
/// layout compose() expects.
Decomposition make_decomposition(const Universe& universe, const Partition& partition, StochasticChoice omega,
                                 std::vector<StochasticChoice> sigmas);

struct PartitionPoset {
  std::vector<Partition> members;
  /// coarser[i][j]: members[i] is strictly coarser than members[j].
  std::vector<std::vector<bool>> coarser;
  std::optional<std::size_t> maximum;
};

/// Every partition for which p is non-degenerate SCC, ordered coarse to fine.
/// Throws Error(Internal) if the maximum is not unique or differs from
/// coarsest_partition (both always hold in exact mode).
PartitionPoset partition_poset(const StochasticChoice& p, const Tolerance& tol = {}, const Limits& limits = {});

}  // namespace revcat
