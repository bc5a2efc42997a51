#include "revcat/rum.hpp"

#include <algorithm>
#include <map>

#include "revcat/error.hpp"

namespace revcat {

RumRepresentation normalize(RumRepresentation rep) {
  std::map<LinearOrder, Rational> merged;
  for (RumTerm& term : rep.terms) merged[term.order] += term.weight;
  rep.terms.clear();
  for (auto& [order, weight] : merged) {
    if (sgn(weight) != 0) rep.terms.push_back(RumTerm{order, weight});
  }
  return rep;
}

StochasticChoice rationalized_choice(const RumRepresentation& rep) {
  const int n = rep.universe.size();
  Rational total = 0;
  for (const RumTerm& term : rep.terms) {
    if (term.order.size() != n) throw Error(ErrorCode::InvalidWitness, "order size differs from the universe");
    if (sgn(term.weight) < 0) throw Error(ErrorCode::InvalidWitness, "negative order weight");
    total += term.weight;
  }
  if (total != 1) throw Error(ErrorCode::InvalidWitness, "order weights sum to " + format_rational(total));
  std::vector<Rational> table((std::size_t{1} << n) * static_cast<std::size_t>(n), Rational(0));
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    for (const RumTerm& term : rep.terms) {
      table[static_cast<std::size_t>(m) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(term.order.best(ItemSet(m)))] += term.weight;
    }
  }
  return StochasticChoice::from_table(rep.universe, std::move(table));
}

bool rationalizes(const RumRepresentation& rep, const StochasticChoice& p) {
  if (rep.universe != p.universe()) return false;
  for (const RumTerm& term : rep.terms) {
    if (sgn(term.weight) <= 0) return false;
  }
  try {
    return rationalized_choice(rep) == p;
  } catch (const Error&) {
    return false;
  }
}

BlockMarschakTable::BlockMarschakTable(const StochasticChoice& p) : n_(p.size()) {
  require_full_domain(p);
  const std::size_t menus = std::size_t{1} << n_;
  values_.assign(menus * static_cast<std::size_t>(n_), Rational(0));
  for (Item a = 0; a < n_; ++a) {
    // Superset Mobius transform of B -> p(a,B), one bit at a time.
    std::vector<Rational> f(menus, Rational(0));
    for (std::uint32_t m = 1; m < menus; ++m) {
      if (ItemSet(m).contains(a)) f[m] = p.prob(a, ItemSet(m));
    }
    for (int bit = 0; bit < n_; ++bit) {
      for (std::uint32_t m = 0; m < menus; ++m) {
        if ((m & (1u << bit)) == 0) f[m] -= f[m | (1u << bit)];
      }
    }
    for (std::uint32_t m = 1; m < menus; ++m) {
      if (ItemSet(m).contains(a)) values_[m * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a)] = f[m];
    }
  }
}

std::string RumRefutation::describe(const Universe& universe) const {
  if (kind == Kind::NegativeBlockMarschak) {
    return "Block-Marschak value q(" + universe.id(item) + "," + universe.describe(menu) + ") = " +
           format_rational(value) + " < 0";
  }
  return "order-weight system infeasible (Farkas certificate over " + std::to_string(rows.size()) + " rows)";
}

namespace {

struct OrderSystem {
  std::vector<LinearOrder> orders;
  std::vector<RumRow> rows;
  LinearSystem system;
};

// Coefficient of order `order` in a row; `scale` multiplies marginal rows.
Rational row_coefficient(const RumRow& row, const LinearOrder& order, ItemSet subset, const Rational& scale) {
  if (row.item < 0) return 1;
  const ItemSet local = compress(row.menu & subset, subset);
  const Item local_item = compress(ItemSet::single(row.item), subset).first();
  return order.best(local) == local_item ? scale : Rational(0);
}

OrderSystem full_system(const StochasticChoice& p) {
  OrderSystem out;
  out.orders = all_orders(p.size());
  out.system.variables = out.orders.size();
  out.rows.push_back(RumRow{});
  out.system.add_row(1);
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (menu.size() < 2) continue;
    const Item last = menu.items().back();
    for (Item a : menu) {
      if (a != last) out.rows.push_back(RumRow{a, menu});
    }
  }
  for (std::size_t r = 1; r < out.rows.size(); ++r) out.system.add_row(p.prob(out.rows[r].item, out.rows[r].menu));
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    for (std::size_t j = 0; j < out.orders.size(); ++j) {
      out.system.rows[r][j] = row_coefficient(out.rows[r], out.orders[j], p.all(), Rational(1));
    }
  }
  return out;
}

// Local system over orders of G: p(G∩A,A) * [max(A∩G) = x] weights equal p(x,A).
OrderSystem local_system(const StochasticChoice& p, ItemSet subset) {
  OrderSystem out;
  out.orders = all_orders(subset.size());
  out.system.variables = out.orders.size();
  out.rows.push_back(RumRow{});
  out.system.add_row(1);
  std::vector<Rational> scales{Rational(1)};
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (!menu.intersects(subset)) continue;
    const Rational mass = event_prob(p, subset, menu);
    for (Item x : menu & subset) {
      out.rows.push_back(RumRow{x, menu});
      scales.push_back(mass);
      out.system.add_row(p.prob(x, menu));
    }
  }
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    for (std::size_t j = 0; j < out.orders.size(); ++j) {
      out.system.rows[r][j] = row_coefficient(out.rows[r], out.orders[j], subset, scales[r]);
    }
  }
  return out;
}

Outcome<RumRepresentation, RumRefutation> solve(const OrderSystem& os, const Universe& universe) {
  auto solved = solve_feasibility(os.system);
  if (!solved.ok()) {
    RumRefutation refutation;
    refutation.kind = RumRefutation::Kind::Infeasible;
    refutation.rows = os.rows;
    refutation.multipliers = solved.failure().multipliers;
    return refutation;
  }
  RumRepresentation rep{universe, {}};
  const auto& x = solved.value();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (sgn(x[j]) > 0) rep.terms.push_back(RumTerm{os.orders[j], x[j]});
  }
  return normalize(std::move(rep));
}

bool certificate_holds(const OrderSystem& os, const std::vector<RumRow>& rows, const std::vector<Rational>& y) {
  if (rows != os.rows || y.size() != rows.size()) return false;
  return certifies_infeasibility(os.system, FarkasCertificate{y});
}

std::optional<RumRefutation> screen(const StochasticChoice& p) {
  const BlockMarschakTable q(p);
  for (ItemSet menu : nonempty_subsets(p.all())) {
    for (Item a : menu) {
      if (sgn(q(a, menu)) >= 0) continue;
      RumRefutation refutation;
      refutation.kind = RumRefutation::Kind::NegativeBlockMarschak;
      refutation.item = a;
      refutation.menu = menu;
      refutation.value = q(a, menu);
      return refutation;
    }
  }
  return std::nullopt;
}

// Greedy path decomposition of the lattice flow X -> ... -> ∅ where the edge
// A -> A∖{a} carries q(a,A). Conservation holds when p is a choice, so every
// node entered with positive flow has a positive outgoing edge.
RumRepresentation flow_witness(const StochasticChoice& p) {
  const int n = p.size();
  const BlockMarschakTable bm(p);
  std::vector<Rational> residual((std::size_t{1} << n) * static_cast<std::size_t>(n), Rational(0));
  auto edge = [&](Item a, ItemSet menu) -> Rational& {
    return residual[static_cast<std::size_t>(menu.mask()) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)];
  };
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    for (Item a : ItemSet(m)) edge(a, ItemSet(m)) = bm(a, ItemSet(m));
  }
  RumRepresentation rep{p.universe(), {}};
  Rational remaining = 1;
  while (sgn(remaining) > 0) {
    std::vector<Item> ranking;
    Rational bottleneck = remaining;
    ItemSet node = p.all();
    while (!node.empty()) {
      Item chosen = -1;
      for (Item a : node) {
        if (sgn(edge(a, node)) > 0) {
          chosen = a;
          break;
        }
      }
      if (chosen < 0) throw Error(ErrorCode::Internal, "flow conservation violated on the subset lattice");
      if (edge(chosen, node) < bottleneck) bottleneck = edge(chosen, node);
      ranking.push_back(chosen);
      node = node.without(chosen);
    }
    node = p.all();
    for (Item a : ranking) {
      edge(a, node) -= bottleneck;
      node = node.without(a);
    }
    remaining -= bottleneck;
    rep.terms.push_back(RumTerm{LinearOrder(std::move(ranking)), bottleneck});
  }
  return normalize(std::move(rep));
}

}  // namespace

bool refutes(const RumRefutation& refutation, const StochasticChoice& p) {
  require_full_domain(p);
  if (refutation.kind == RumRefutation::Kind::NegativeBlockMarschak) {
    if (refutation.item < 0 || refutation.item >= p.size() || !refutation.menu.subset_of(p.all()) ||
        !refutation.menu.contains(refutation.item)) {
      return false;
    }
    const Rational value = BlockMarschakTable(p)(refutation.item, refutation.menu);
    return value == refutation.value && sgn(value) < 0;
  }
  return certificate_holds(full_system(p), refutation.rows, refutation.multipliers);
}

bool locally_rationalizes(const StochasticChoice& p, ItemSet subset, const RumRepresentation& q) {
  require_full_domain(p);
  if (subset.empty() || !subset.subset_of(p.all()) || q.universe.ids() != p.universe().ids_of(subset)) return false;
  Rational total = 0;
  for (const RumTerm& term : q.terms) {
    if (sgn(term.weight) <= 0 || term.order.size() != subset.size()) return false;
    total += term.weight;
  }
  if (total != 1) return false;
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (!menu.intersects(subset)) continue;
    const Rational mass = event_prob(p, subset, menu);
    const ItemSet local = compress(menu & subset, subset);
    for (Item x : menu & subset) {
      const Item local_x = compress(ItemSet::single(x), subset).first();
      Rational share = 0;
      for (const RumTerm& term : q.terms) {
        if (term.order.best(local) == local_x) share += term.weight;
      }
      if (mass * share != p.prob(x, menu)) return false;
    }
  }
  return true;
}

bool refutes_local(const RumRefutation& refutation, const StochasticChoice& p, ItemSet subset) {
  require_full_domain(p);
  if (refutation.kind != RumRefutation::Kind::Infeasible || subset.empty() || !subset.subset_of(p.all())) return false;
  return certificate_holds(local_system(p, subset), refutation.rows, refutation.multipliers);
}

Outcome<RumRepresentation, RumRefutation> solve_rum_system(const StochasticChoice& p, const Limits& limits) {
  require_full_domain(p);
  require_size(p.size(), limits.max_rum_n, "RUM feasibility");
  auto result = solve(full_system(p), p.universe());
  if (result.ok() && !rationalizes(result.value(), p)) throw Error(ErrorCode::Internal, "RUM witness failed its self-check");
  return result;
}

Outcome<RumRepresentation, RumRefutation> check_rum(const StochasticChoice& p, const Limits& limits, RumMethod method) {
  require_full_domain(p);
  require_size(p.size(), limits.max_rum_n, "RUM check");
  if (auto refutation = screen(p)) return *std::move(refutation);
  if (method == RumMethod::Linear) return solve_rum_system(p, limits);
  RumRepresentation rep = flow_witness(p);
  if (!rationalizes(rep, p)) throw Error(ErrorCode::Internal, "RUM witness failed its self-check");
  return rep;
}

RumRepresentation compose_rum(const Universe& universe, const Partition& partition, const RumRepresentation& v,
                              const std::vector<RumRepresentation>& s) {
  if (partition.universe_size() != universe.size() || s.size() != static_cast<std::size_t>(partition.size()) ||
      v.universe.size() != partition.size()) {
    throw Error(ErrorCode::InvalidPartition, "RUM components do not match the partition");
  }
  for (int i = 0; i < partition.size(); ++i) {
    if (s[static_cast<std::size_t>(i)].universe.size() != partition.class_at(i).size()) {
      throw Error(ErrorCode::InvalidPartition, "fiber witness " + std::to_string(i) + " has the wrong universe");
    }
  }
  RumRepresentation out{universe, {}};
  std::vector<std::size_t> pick(s.size(), 0);
  for (const RumTerm& top : v.terms) {
    // Odometer over one term per fiber.
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      Rational weight = top.weight;
      std::vector<LinearOrder> fibers;
      for (std::size_t i = 0; i < s.size(); ++i) {
        weight *= s[i].terms[pick[i]].weight;
        fibers.push_back(s[i].terms[pick[i]].order);
      }
      out.terms.push_back(RumTerm{block_order(partition, top.order, fibers), std::move(weight)});
      std::size_t i = 0;
      while (i < s.size() && ++pick[i] == s[i].terms.size()) pick[i++] = 0;
      if (i == s.size()) break;
    }
  }
  return normalize(std::move(out));
}

std::string RumDecompositionFailure::describe(const Universe& universe) const {
  std::string out = "NonBlockSupport";
  if (non_block_order) out += ": weight on non-block order " + non_block_order->describe(universe);
  out += component < 0 ? "; omega is not RUM" : "; sigma_" + std::to_string(component) + " is not RUM";
  return out;
}

Outcome<RumDecomposition, RumDecompositionFailure> decompose_rum(const RumRepresentation& witness,
                                                                 const Decomposition& d, const Limits& limits) {
  if (witness.universe != d.universe) throw Error(ErrorCode::InvalidWitness, "witness universe differs from the decomposition");
  const Partition& partition = d.partition;
  std::optional<LinearOrder> non_block;
  for (const RumTerm& term : witness.terms) {
    if (sgn(term.weight) > 0 && !term.order.is_block_order(partition)) {
      non_block = term.order;
      break;
    }
  }

  if (!non_block) {
    RumDecomposition out;
    out.v.universe = d.omega.universe();
    for (int i = 0; i < partition.size(); ++i) out.s.push_back(RumRepresentation{d.sigmas[static_cast<std::size_t>(i)].universe(), {}});
    for (const RumTerm& term : witness.terms) {
      out.v.terms.push_back(RumTerm{term.order.project(partition), term.weight});
      for (int i = 0; i < partition.size(); ++i) {
        out.s[static_cast<std::size_t>(i)].terms.push_back(RumTerm{term.order.restrict_to(partition.class_at(i)), term.weight});
      }
    }
    out.v = normalize(std::move(out.v));
    for (auto& s : out.s) s = normalize(std::move(s));
    bool valid = rationalizes(out.v, d.omega);
    for (int i = 0; valid && i < partition.size(); ++i) {
      valid = rationalizes(out.s[static_cast<std::size_t>(i)], d.sigmas[static_cast<std::size_t>(i)]);
    }
    if (valid) return out;
  }

  RumDecomposition out;
  out.resolved = true;
  auto v = check_rum(d.omega, limits);
  if (!v.ok()) return RumDecompositionFailure{non_block, -1, v.failure()};
  out.v = v.value();
  for (int i = 0; i < partition.size(); ++i) {
    auto s = check_rum(d.sigmas[static_cast<std::size_t>(i)], limits);
    if (!s.ok()) return RumDecompositionFailure{non_block, i, s.failure()};
    out.s.push_back(s.value());
  }
  return out;
}

Outcome<RumRepresentation, RumRefutation> check_local_rationalizability(const StochasticChoice& p, ItemSet subset,
                                                                        const Limits& limits) {
  require_full_domain(p);
  if (subset.empty() || !subset.subset_of(p.all())) throw Error(ErrorCode::ForeignItem, "G must be a nonempty subset of X");
  require_size(subset.size(), limits.max_rum_n, "local rationalizability");
  Universe local(p.universe().ids_of(subset));
  OrderSystem os = local_system(p, subset);
  return solve(os, local);
}

}  // namespace revcat
