#include "revcat/population.hpp"

#include "revcat/error.hpp"

namespace revcat {

Item ResolvableChoice::choose(const Partition& partition, ItemSet menu) const {
  const int i = base[partition.image(menu).mask()];
  const ItemSet cls = partition.class_at(i);
  return fibers[static_cast<std::size_t>(i)][compress(menu & cls, cls).mask()];
}

namespace {

// One free decision of a resolvable choice: a base entry (cls = -1) or a
// fiber entry of class cls, at `mask`, with its options in increasing order.
struct Digit {
  int cls = -1;
  std::uint32_t mask = 0;
  std::vector<int> options;
};

std::vector<Digit> digits_of(const Partition& partition) {
  std::vector<Digit> digits;
  for (ItemSet j : nonempty_subsets(ItemSet::full(partition.size()))) {
    if (j.size() >= 2) digits.push_back(Digit{-1, j.mask(), j.items()});
  }
  for (int i = 0; i < partition.size(); ++i) {
    const ItemSet cls = partition.class_at(i);
    for (ItemSet local : nonempty_subsets(ItemSet::full(cls.size()))) {
      if (local.size() >= 2) digits.push_back(Digit{i, local.mask(), expand(local, cls).items()});
    }
  }
  return digits;
}

// The choice with every free digit at its first option.
ResolvableChoice skeleton(const Partition& partition) {
  ResolvableChoice c;
  c.base.assign(std::size_t{1} << partition.size(), -1);
  for (std::uint32_t m = 1; m < c.base.size(); ++m) c.base[m] = ItemSet(m).first();
  for (int i = 0; i < partition.size(); ++i) {
    const ItemSet cls = partition.class_at(i);
    std::vector<Item> fiber(std::size_t{1} << cls.size(), -1);
    for (std::uint32_t m = 1; m < fiber.size(); ++m) fiber[m] = expand(ItemSet(m), cls).first();
    c.fibers.push_back(std::move(fiber));
  }
  return c;
}

void set_digit(ResolvableChoice& c, const Digit& digit, int option) {
  const int value = digit.options[static_cast<std::size_t>(option)];
  if (digit.cls < 0) {
    c.base[digit.mask] = value;
  } else {
    c.fibers[static_cast<std::size_t>(digit.cls)][digit.mask] = value;
  }
}

std::vector<Rational> choice_table(const Universe& universe, const Partition& partition,
                                   const std::vector<std::pair<ResolvableChoice, Rational>>& weights) {
  const int n = universe.size();
  std::vector<Rational> table((std::size_t{1} << n) * static_cast<std::size_t>(n), Rational(0));
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    for (const auto& [c, w] : weights) {
      if (sgn(w) == 0) continue;
      table[static_cast<std::size_t>(m) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(c.choose(partition, ItemSet(m)))] += w;
    }
  }
  return table;
}

void require_nondegenerate(const Partition& partition) {
  if (!partition.nondegenerate()) throw Error(ErrorCode::Degenerate, "partition must satisfy 1 < |I| < n");
}

bool reproduces_choice(const PopulationDistribution& q, const StochasticChoice& p) {
  Rational total = 0;
  for (const auto& entry : q.weights) {
    if (sgn(entry.second) < 0) return false;
    total += entry.second;
  }
  return total == 1 && induce_choice(q) == p;
}

struct PopulationSystem {
  std::vector<ResolvableChoice> choices;
  std::vector<PopulationRow> rows;
  LinearSystem system;
};

PopulationSystem population_system(const StochasticChoice& p, const Partition& partition, const Limits& limits) {
  PopulationSystem out;
  out.choices = enumerate_resolvable(partition, limits);
  out.system.variables = out.choices.size();
  out.rows.push_back(PopulationRow{});
  out.system.add_row(1);
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (menu.size() < 2) continue;
    const Item last = menu.items().back();
    for (Item a : menu) {
      if (a == last) continue;
      out.rows.push_back(PopulationRow{a, menu});
      out.system.add_row(p.prob(a, menu));
    }
  }
  for (std::size_t j = 0; j < out.choices.size(); ++j) {
    out.system.rows[0][j] = 1;
    for (std::size_t r = 1; r < out.rows.size(); ++r) {
      if (out.choices[j].choose(partition, out.rows[r].menu) == out.rows[r].item) out.system.rows[r][j] = 1;
    }
  }
  return out;
}

void require_matching(const StochasticChoice& p, const Partition& partition) {
  require_full_domain(p);
  if (partition.universe_size() != p.size()) {
    throw Error(ErrorCode::InvalidPartition, "partition and dataset have different universes");
  }
}

}  // namespace

Integer count_resolvable(const Partition& partition) {
  Integer count = 1;
  for (const Digit& digit : digits_of(partition)) count *= static_cast<unsigned long>(digit.options.size());
  return count;
}

std::vector<ResolvableChoice> enumerate_resolvable(const Partition& partition, const Limits& limits) {
  const Integer count = count_resolvable(partition);
  if (count > Integer(std::to_string(limits.max_resolvable))) {
    throw Error(ErrorCode::SizeBound, "partition has " + count.get_str() + " resolvable choices, limit " +
                                          std::to_string(limits.max_resolvable));
  }
  const std::vector<Digit> digits = digits_of(partition);
  std::vector<int> odometer(digits.size(), 0);
  ResolvableChoice current = skeleton(partition);
  std::vector<ResolvableChoice> out;
  out.reserve(count.get_ui());
  while (true) {
    out.push_back(current);
    // Last digit varies fastest.
    std::size_t k = digits.size();
    while (k > 0) {
      --k;
      if (++odometer[k] < static_cast<int>(digits[k].options.size())) {
        set_digit(current, digits[k], odometer[k]);
        break;
      }
      odometer[k] = 0;
      set_digit(current, digits[k], 0);
      if (k == 0) return out;
    }
    if (digits.empty()) return out;
  }
}

void validate_population(const PopulationDistribution& q) {
  if (q.partition.universe_size() != q.universe.size()) {
    throw Error(ErrorCode::InvalidPartition, "Q's partition does not cover its universe");
  }
  Rational total = 0;
  for (const auto& [c, w] : q.weights) {
    if (sgn(w) < 0 || w > 1) throw Error(ErrorCode::OutOfRange, "Q weight " + format_rational(w) + " outside [0,1]");
    if (c.base.size() != (std::size_t{1} << q.partition.size()) ||
        c.fibers.size() != static_cast<std::size_t>(q.partition.size())) {
      throw Error(ErrorCode::InvalidPartition, "resolvable choice does not fit the partition");
    }
    for (std::uint32_t m = 1; m < c.base.size(); ++m) {
      if (c.base[m] < 0 || !ItemSet(m).contains(c.base[m])) throw Error(ErrorCode::InvalidPartition, "base choice outside its menu");
    }
    for (int i = 0; i < q.partition.size(); ++i) {
      const ItemSet cls = q.partition.class_at(i);
      const auto& fiber = c.fibers[static_cast<std::size_t>(i)];
      if (fiber.size() != (std::size_t{1} << cls.size())) throw Error(ErrorCode::InvalidPartition, "fiber table has the wrong size");
      for (std::uint32_t m = 1; m < fiber.size(); ++m) {
        if (fiber[m] < 0 || !expand(ItemSet(m), cls).contains(fiber[m])) {
          throw Error(ErrorCode::InvalidPartition, "fiber choice outside its menu");
        }
      }
    }
    total += w;
  }
  if (total != 1) throw Error(ErrorCode::BadSum, "Q weights sum to " + format_rational(total));
}

StochasticChoice induce_choice(const PopulationDistribution& q) {
  validate_population(q);
  return StochasticChoice::from_table(q.universe, choice_table(q.universe, q.partition, q.weights));
}

PopulationDistribution q_from_scc(const Decomposition& d, const Limits& limits) {
  require_nondegenerate(d.partition);
  const Partition& partition = d.partition;
  PopulationDistribution q{d.universe, partition, {}};
  for (ResolvableChoice& c : enumerate_resolvable(partition, limits)) {
    Rational w = 1;
    for (std::uint32_t m = 1; m < c.base.size(); ++m) w *= d.omega.prob(c.base[m], ItemSet(m));
    for (int i = 0; i < partition.size(); ++i) {
      const ItemSet cls = partition.class_at(i);
      const StochasticChoice& sigma = d.sigmas[static_cast<std::size_t>(i)];
      const auto& fiber = c.fibers[static_cast<std::size_t>(i)];
      for (std::uint32_t m = 1; m < fiber.size(); ++m) {
        w *= sigma.prob(compress(ItemSet::single(fiber[m]), cls).first(), ItemSet(m));
      }
    }
    q.weights.emplace_back(std::move(c), std::move(w));
  }
  return q;
}

AxiomVerdict check_condition1(const StochasticChoice& p, const Partition& partition, const Tolerance& tol) {
  if (partition.universe_size() != p.size()) {
    throw Error(ErrorCode::InvalidPartition, "partition and dataset have different universes");
  }
  AxiomVerdict verdict;
  std::vector<ItemSet> first(std::size_t{1} << partition.size());
  for (ItemSet menu : nonempty_subsets(p.all())) {
    if (!p.defined(menu)) continue;
    const ItemSet image = partition.image(menu);
    ItemSet& reference = first[image.mask()];
    if (reference.empty()) {
      reference = menu;
      continue;
    }
    for (int i : image) {
      const ItemSet cls = partition.class_at(i);
      ++verdict.checked;
      Rational lhs = event_prob(p, cls, reference);
      Rational rhs = event_prob(p, cls, menu);
      if (tol.equal(lhs, rhs)) continue;
      verdict.holds = false;
      Counterexample ce;
      ce.axiom = Axiom::Condition1;
      ce.subset = reference;
      ce.external = menu;
      ce.reference = cls;
      ce.lhs = std::move(lhs);
      ce.rhs = std::move(rhs);
      verdict.counterexample = std::move(ce);
      return verdict;
    }
  }
  return verdict;
}

std::string_view to_string(PopulationRoute route) {
  switch (route) {
    case PopulationRoute::MenuProduct: return "menu_product";
    case PopulationRoute::Factored: return "factored";
    case PopulationRoute::Linear: return "linear";
  }
  return "unknown";
}

Outcome<PopulationDistribution, PopulationRefutation> solve_population(const StochasticChoice& p,
                                                                       const Partition& partition,
                                                                       const Limits& limits) {
  require_matching(p, partition);
  PopulationSystem ps = population_system(p, partition, limits);
  auto solved = solve_feasibility(ps.system);
  if (!solved.ok()) return PopulationRefutation{ps.rows, solved.failure().multipliers};
  PopulationDistribution q{p.universe(), partition, {}};
  for (std::size_t j = 0; j < ps.choices.size(); ++j) q.weights.emplace_back(std::move(ps.choices[j]), solved.value()[j]);
  if (!reproduces_choice(q, p)) throw Error(ErrorCode::Internal, "population solution does not induce p");
  return q;
}

bool refutes(const PopulationRefutation& refutation, const StochasticChoice& p, const Partition& partition,
             const Limits& limits) {
  require_matching(p, partition);
  PopulationSystem ps = population_system(p, partition, limits);
  if (refutation.rows != ps.rows || refutation.multipliers.size() != ps.rows.size()) return false;
  return certifies_infeasibility(ps.system, FarkasCertificate{refutation.multipliers});
}

PopulationFit q_from_condition1(const StochasticChoice& p, const Partition& partition, const Limits& limits) {
  require_matching(p, partition);
  const AxiomVerdict condition = check_condition1(p, partition);
  if (!condition.holds) {
    throw Error(ErrorCode::Condition1Violated, "condition 1 fails: " + condition.counterexample->describe(p.universe()));
  }
  if (!p.positive()) throw Error(ErrorCode::NotPositive, "population representation needs a positive choice");

  const std::vector<ResolvableChoice> choices = enumerate_resolvable(partition, limits);

  PopulationFit fit{PopulationDistribution{p.universe(), partition, {}}, PopulationRoute::MenuProduct};
  Rational total = 0;
  for (const ResolvableChoice& c : choices) {
    Rational w = 1;
    for (std::uint32_t m = 1; m < (1u << p.size()); ++m) w *= p.prob(c.choose(partition, ItemSet(m)), ItemSet(m));
    total += w;
    fit.q.weights.emplace_back(c, std::move(w));
  }
  for (auto& entry : fit.q.weights) entry.second /= total;
  if (reproduces_choice(fit.q, p)) return fit;

  // omega(i, J) is well defined by condition 1; p on menus inside X_i plays sigma_i.
  std::vector<ItemSet> witness(std::size_t{1} << partition.size());
  for (ItemSet menu : nonempty_subsets(p.all())) {
    ItemSet& slot = witness[partition.image(menu).mask()];
    if (slot.empty()) slot = menu;
  }
  fit.route = PopulationRoute::Factored;
  fit.q.weights.clear();
  for (const ResolvableChoice& c : choices) {
    Rational w = 1;
    for (std::uint32_t m = 1; m < c.base.size(); ++m) {
      const ItemSet menu = witness[m];
      w *= event_prob(p, partition.class_at(c.base[m]), menu);
    }
    for (int i = 0; i < partition.size(); ++i) {
      const ItemSet cls = partition.class_at(i);
      const auto& fiber = c.fibers[static_cast<std::size_t>(i)];
      for (std::uint32_t m = 1; m < fiber.size(); ++m) w *= p.prob(fiber[m], expand(ItemSet(m), cls));
    }
    fit.q.weights.emplace_back(c, std::move(w));
  }
  if (reproduces_choice(fit.q, p)) return fit;

  auto solved = solve_population(p, partition, limits);
  if (!solved.ok()) {
    throw Error(ErrorCode::NotRepresentable,
                "no distribution over resolvable choices generates p although condition 1 holds");
  }
  return PopulationFit{solved.value(), PopulationRoute::Linear};
}

}  // namespace revcat
