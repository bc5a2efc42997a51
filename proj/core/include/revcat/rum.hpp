#pragma once

#include <optional>
#include <string>
#include <vector>

#include "revcat/categorizer.hpp"
#include "revcat/linear_feasibility.hpp"
#include "revcat/orders.hpp"

namespace revcat {

struct RumTerm {
  LinearOrder order;
  Rational weight;
  bool operator==(const RumTerm&) const = default;
};

/// Distribution over linear orders of `universe`; terms sorted by ranking,
/// weights strictly positive and summing to one.
struct RumRepresentation {
  Universe universe;
  std::vector<RumTerm> terms;
  bool operator==(const RumRepresentation&) const = default;
};

/// Sorts terms, merges repeated orders and drops zero weights.
RumRepresentation normalize(RumRepresentation rep);

/// The choice generated by rep: p(a,A) = total weight of orders whose best
/// item in A is a. Throws Error(InvalidWitness) on malformed input.
StochasticChoice rationalized_choice(const RumRepresentation& rep);
bool rationalizes(const RumRepresentation& rep, const StochasticChoice& p);

/// Block–Marschak values by memoized inclusion–exclusion over supersets.
class BlockMarschakTable {
 public:
  explicit BlockMarschakTable(const StochasticChoice& p);
  /// q(a,A) = sum over B ⊇ A of (-1)^{|B∖A|} p(a,B), for a in A.
  const Rational& operator()(Item a, ItemSet menu) const {
    return values_[static_cast<std::size_t>(menu.mask()) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a)];
  }

 private:
  int n_;
  std::vector<Rational> values_;
};

/// Row meaning in the order-feasibility system: item = -1 is the total mass
/// row, otherwise the marginal p(item, menu).
struct RumRow {
  Item item = -1;
  ItemSet menu;
  bool operator==(const RumRow&) const = default;
};

struct RumRefutation {
  enum class Kind { NegativeBlockMarschak, Infeasible };
  Kind kind = Kind::Infeasible;
  /// NegativeBlockMarschak.
  Item item = -1;
  ItemSet menu;
  Rational value;
  /// Infeasible: multipliers over `rows`.
  std::vector<RumRow> rows;
  std::vector<Rational> multipliers;
  std::string describe(const Universe& universe) const;
};

/// Re-checks a refutation against the data from scratch.
bool refutes(const RumRefutation& refutation, const StochasticChoice& p);

enum class RumMethod {
  /// Nonnegative Block–Marschak values define a flow on the subset lattice;
  /// each path of its decomposition is an order.
  Flow,
  /// Exact feasibility over the n! order weights.
  Linear,
};

/// Block–Marschak screen, then a witness by `method`. Witnesses are verified
/// before they are returned. Throws Error(SizeBound) for n > limits.max_rum_n.
Outcome<RumRepresentation, RumRefutation> check_rum(const StochasticChoice& p, const Limits& limits = {},
                                                    RumMethod method = RumMethod::Flow);
/// The order-feasibility system on its own, without the screen.
Outcome<RumRepresentation, RumRefutation> solve_rum_system(const StochasticChoice& p, const Limits& limits = {});

/// q(L) = v(L_I) * prod_i s_i(L restricted to X_i), supported on block orders.
RumRepresentation compose_rum(const Universe& universe, const Partition& partition, const RumRepresentation& v,
                              const std::vector<RumRepresentation>& s);

struct RumDecomposition {
  RumRepresentation v;
  std::vector<RumRepresentation> s;
  /// The input witness could not be projected, so v and s were solved afresh
  /// from the decomposition's components.
  bool resolved = false;
};

struct RumDecompositionFailure {
  /// A weighted order that is not a block order, if there was one.
  std::optional<LinearOrder> non_block_order;
  /// The component that is not RUM: -1 for omega, otherwise a class index.
  int component = -1;
  RumRefutation refutation;
  std::string describe(const Universe& universe) const;
};

/// Projects a block-supported witness of compose(d) onto omega and each
/// sigma_i. A witness with weight off the block orders, or one whose
/// projections fail verification, triggers a re-solve from d; only if some
/// component is not RUM is NonBlockSupport reported.
Outcome<RumDecomposition, RumDecompositionFailure> decompose_rum(const RumRepresentation& witness,
                                                                 const Decomposition& d, const Limits& limits = {});

/// Distribution q over orders of G with p(x,A) = p(G∩A,A) q(max(A∩G) = x)
/// for every menu A meeting G. Rows of the refutation are labelled with
/// menus of the full universe. Throws Error(SizeBound) for |G| > max_rum_n.
Outcome<RumRepresentation, RumRefutation> check_local_rationalizability(const StochasticChoice& p, ItemSet subset,
                                                                        const Limits& limits = {});
/// Checks the defining identity of a local witness over the orders of G.
bool locally_rationalizes(const StochasticChoice& p, ItemSet subset, const RumRepresentation& q);
bool refutes_local(const RumRefutation& refutation, const StochasticChoice& p, ItemSet subset);

}  // namespace revcat
