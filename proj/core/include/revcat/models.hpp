#pragma once

#include <optional>
#include <string>
#include <vector>

#include "revcat/categorizer.hpp"

namespace revcat {

/// p(a,A) = u(a) / sum of u over A. u is indexed by item and must be positive.
StochasticChoice gen_luce(const Universe& universe, const std::vector<Rational>& u);

/// Nest utility v(S) per class, indexed by the compressed mask of S ⊆ X_i
/// (v[i][0] = 0). With lambda set, v(S) = (sum of u over S)^lambda_i.
struct NestSpec {
  Partition partition;
  std::vector<Rational> u;
  std::vector<std::vector<Rational>> v;
  std::optional<std::vector<Rational>> lambda;
};

/// v(S) = (sum u over S)^lambda_i, exactly. Throws Error(NonRationalPower)
/// when a power is irrational.
NestSpec nested_logit_spec(const Partition& partition, std::vector<Rational> u, std::vector<Rational> lambda);
/// v(S) = weight_i for every nonempty S ⊆ X_i.
NestSpec content_independent_spec(const Partition& partition, std::vector<Rational> u, const std::vector<Rational>& weight);

/// p(a,A) = v(A∩X_i) / sum_j v(A∩X_j) * u(a) / sum over A∩X_i of u.
/// Throws Error(ZeroNestMass) when every nest present in a menu has v = 0,
/// Error(BadParameter) on a malformed spec.
StochasticChoice gen_nsc(const Universe& universe, const NestSpec& spec);

enum class WeightFamily { Overload, Flexibility, Salience, Reference };
std::string_view to_string(WeightFamily family);

struct WeightFamilySpec {
  WeightFamily kind = WeightFamily::Overload;
  /// Overload (beta < 0) and flexibility (beta > 0): rho = |A ∩ X_i|^beta.
  Rational beta;
  /// Salience, by item.
  std::vector<Rational> salience;
  /// Reference: r_A(i) = max u - theta * min u over A ∩ X_i, theta in (0,1).
  std::vector<Rational> u;
  Rational theta;
};

/// The first-stage family omega_A of the spec, laid out as
/// WeakDecomposition::omega_family. Throws Error(BadParameter).
std::vector<std::vector<Rational>> weight_family(const Partition& partition, const WeightFamilySpec& spec);

/// compose() of the weak decomposition built from the spec's omega_A family.
StochasticChoice gen_scwc_weights(const Universe& universe, const Partition& partition,
                                  const std::vector<StochasticChoice>& sigmas, const WeightFamilySpec& spec);

struct LuceVerdict {
  bool holds = false;
  /// Fitted u with u(first item) = 1.
  std::vector<Rational> u;
  /// First menu/item where the Luce formula fails.
  std::optional<std::pair<Item, ItemSet>> failure;
};
LuceVerdict is_luce(const StochasticChoice& p);

struct NscFit {
  Partition partition;
  /// u normalised to 1 on the smallest item of each class.
  std::vector<Rational> u;
  /// Same layout as NestSpec::v.
  std::vector<std::vector<Rational>> v;
};
struct NscVerdict {
  bool holds = false;
  /// Every partition under which refitting regenerates p, in
  /// restricted-growth order.
  std::vector<NscFit> fits;
};
/// Throws Error(SizeBound) for n > limits.max_nsc_n.
NscVerdict is_nsc(const StochasticChoice& p, const Limits& limits = {});

struct NestedLogitFit {
  NscFit nsc;
  std::vector<Rational> lambda;
};
/// Searches the NSC fits for a v of the form K_i (sum u)^lambda_i with
/// rational lambda_i of denominator at most 12, verified exactly. When a
/// rational per-class rescaling of u exists, nsc.u carries it so that
/// nested_logit_spec(partition, nsc.u, lambda) regenerates the data.
std::optional<NestedLogitFit> fit_nested_logit(const NscVerdict& nsc);

struct Classification {
  bool luce = false;
  bool nested_logit = false;
  bool nsc = false;
  bool nondegenerate_scc = false;
  bool nondegenerate_scwc = false;
  LuceVerdict luce_fit;
  NscVerdict nsc_fits;
  std::optional<NestedLogitFit> nested_logit_fit;
  std::optional<Partition> coarsest;
  /// Non-trivial weak categories, search order.
  std::vector<ItemSet> weak_categories;
};

/// Evaluates each region on its own, then asserts the inclusions
/// Luce ⊆ Nested Logit ⊆ NSC ⊆ non-degenerate SCwC, non-degenerate SCC ⊆
/// non-degenerate SCwC and non-degenerate SCC ∩ Luce = ∅. A violation throws
/// Error(Internal). Requires a positive full-domain p with n >= 3.
Classification classify(const StochasticChoice& p, const Limits& limits = {});

}  // namespace revcat
