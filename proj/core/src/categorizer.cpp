#include "revcat/categorizer.hpp"

#include <algorithm>
#include <functional>

#include "revcat/error.hpp"

namespace revcat {

namespace {

void require_categorizable(const StochasticChoice& p, const Limits& limits) {
  require_full_domain(p);
  if (p.size() < 3) throw Error(ErrorCode::BadUniverse, "categorization needs at least 3 alternatives");
  require_size(p.size(), limits.max_categorize_n, "category search");
}

void require_matching(const StochasticChoice& p, const Partition& partition) {
  require_full_domain(p);
  if (partition.universe_size() != p.size()) {
    throw Error(ErrorCode::InvalidPartition, "partition and dataset have different universes");
  }
}

std::vector<StochasticChoice> restrictions(const StochasticChoice& p, const Partition& partition) {
  std::vector<StochasticChoice> sigmas;
  for (ItemSet c : partition.classes()) sigmas.push_back(restrict(p, c));
  return sigmas;
}

const Rational& sigma_prob(const StochasticChoice& sigma, ItemSet cls, Item a, ItemSet menu) {
  const ItemSet local_menu = compress(menu & cls, cls);
  const Item local_item = compress(ItemSet::single(a), cls).first();
  return sigma.prob(local_item, local_menu);
}

// Recomposition check shared by SCC and SCwC; omega_of(menu, i) supplies the
// first stage.
template <typename OmegaOf>
std::optional<DecompositionFailure> verify_recomposition(const StochasticChoice& p, const Partition& partition,
                                                         const std::vector<StochasticChoice>& sigmas,
                                                         const OmegaOf& omega_of, const Tolerance& tol) {
  for (ItemSet menu : nonempty_subsets(p.all())) {
    for (Item a : menu) {
      const int i = partition.index_of(a);
      const ItemSet cls = partition.class_at(i);
      Rational recomposed = omega_of(menu, i) * sigma_prob(sigmas[static_cast<std::size_t>(i)], cls, a, menu);
      const Rational& observed = p.prob(a, menu);
      if (tol.equal(observed, recomposed)) continue;
      DecompositionFailure failure;
      failure.kind = DecompositionFailureKind::RecompositionMismatch;
      failure.class_index = i;
      failure.menu = menu;
      failure.item = a;
      failure.observed = observed;
      failure.recomposed = std::move(recomposed);
      if (p.positive() || !tol.exact()) {
        AxiomVerdict cind = check_cind(p, cls, tol);
        if (!cind.holds) failure.cind = cind.counterexample;
      }
      return failure;
    }
  }
  return std::nullopt;
}

void require_positive_input(const StochasticChoice& p, const Tolerance& tol) {
  if (!p.positive() && tol.exact()) throw Error(ErrorCode::NotPositive, "decomposition needs a positive choice");
}

}  // namespace

std::string DecompositionFailure::describe(const Universe& u) const {
  if (kind == DecompositionFailureKind::OmegaIllDefined) {
    return "omega ill-defined for class " + std::to_string(class_index) + ": mass " + format_rational(first_mass) +
           " in " + u.describe(first_menu) + " but " + format_rational(second_mass) + " in " + u.describe(second_menu);
  }
  std::string out = "recomposition mismatch at p(" + u.id(item) + "," + u.describe(menu) + "): observed " +
                    format_rational(observed) + ", recomposed " + format_rational(recomposed);
  if (cind) out += "; " + cind->describe(u);
  return out;
}

std::vector<ItemSet> enumerate_categories(const StochasticChoice& p, bool weak, const Tolerance& tol,
                                          const Limits& limits, bool prune) {
  require_categorizable(p, limits);
  const int n = p.size();
  std::vector<ItemSet> candidates;
  for_each_nonempty_subset(p.all(), [&](ItemSet s) {
    if (s.size() > 1 && s.size() < n) candidates.push_back(s);
  });
  std::sort(candidates.begin(), candidates.end(), size_descending_less);

  std::vector<ItemSet> found;
  for (ItemSet c : candidates) {
    if (!weak && prune && tol.exact()) {
      const bool excluded = std::any_of(found.begin(), found.end(), [&](ItemSet f) {
        return c.intersects(f) && !c.subset_of(f);
      });
      if (excluded) continue;
    }
    if (!check_cind(p, c, tol).holds) continue;
    if (!weak && !check_cneu(p, c, tol).holds) continue;
    found.push_back(c);
  }
  return found;
}

std::optional<Partition> coarsest_partition(const StochasticChoice& p, const Tolerance& tol, const Limits& limits) {
  const std::vector<ItemSet> categories = enumerate_categories(p, false, tol, limits);
  if (categories.empty()) return std::nullopt;
  // Search order is by decreasing size, so a category is maximal iff no
  // earlier one contains it. Overlaps cannot occur in exact mode.
  std::vector<ItemSet> classes;
  ItemSet covered;
  for (ItemSet c : categories) {
    if (c.intersects(covered)) continue;
    classes.push_back(c);
    covered = covered | c;
  }
  for (Item a : p.all() - covered) classes.push_back(ItemSet::single(a));
  Partition partition(p.size(), std::move(classes));
  if (!decompose_scc(p, partition, tol).ok()) {
    if (tol.exact()) throw Error(ErrorCode::Internal, "maximal categories do not decompose p");
    return std::nullopt;
  }
  return partition;
}

Outcome<Decomposition, DecompositionFailure> decompose_scc(const StochasticChoice& p, const Partition& partition,
                                                           const Tolerance& tol) {
  require_matching(p, partition);
  require_positive_input(p, tol);
  const int classes = partition.size();
  const std::size_t index_menus = std::size_t{1} << classes;

  // Class masses of the first menu (canonical order) with each pi-image.
  std::vector<std::vector<Rational>> masses(index_menus);
  std::vector<ItemSet> first_menu(index_menus);
  for (ItemSet menu : nonempty_subsets(p.all())) {
    const ItemSet image = partition.image(menu);
    auto& slot = masses[image.mask()];
    if (slot.empty()) {
      first_menu[image.mask()] = menu;
      slot.assign(static_cast<std::size_t>(classes), Rational(0));
      for (int i : image) slot[static_cast<std::size_t>(i)] = event_prob(p, partition.class_at(i), menu);
      continue;
    }
    for (int i : image) {
      Rational mass = event_prob(p, partition.class_at(i), menu);
      if (tol.equal(mass, slot[static_cast<std::size_t>(i)])) continue;
      DecompositionFailure failure;
      failure.kind = DecompositionFailureKind::OmegaIllDefined;
      failure.class_index = i;
      failure.first_menu = first_menu[image.mask()];
      failure.second_menu = menu;
      failure.first_mass = slot[static_cast<std::size_t>(i)];
      failure.second_mass = std::move(mass);
      return failure;
    }
  }

  std::vector<StochasticChoice> sigmas = restrictions(p, partition);
  StochasticChoice omega = StochasticChoice::from_function(
      partition.index_universe(p.universe()),
      [&](Item i, ItemSet indices) { return masses[indices.mask()][static_cast<std::size_t>(i)]; });

  auto omega_of = [&](ItemSet menu, int i) -> const Rational& { return omega.prob(i, partition.image(menu)); };
  if (auto failure = verify_recomposition(p, partition, sigmas, omega_of, tol)) return *std::move(failure);
  return Decomposition{p.universe(), partition, std::move(omega), std::move(sigmas)};
}

Outcome<WeakDecomposition, DecompositionFailure> decompose_scwc(const StochasticChoice& p, const Partition& partition,
                                                                const Tolerance& tol) {
  require_matching(p, partition);
  require_positive_input(p, tol);
  const std::size_t menus = std::size_t{1} << p.size();
  std::vector<std::vector<Rational>> family(menus);
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet menu(m);
    auto& weights = family[m];
    weights.assign(static_cast<std::size_t>(partition.size()), Rational(0));
    for (int i : partition.image(menu)) weights[static_cast<std::size_t>(i)] = event_prob(p, partition.class_at(i), menu);
  }
  std::vector<StochasticChoice> sigmas = restrictions(p, partition);
  auto omega_of = [&](ItemSet menu, int i) -> const Rational& { return family[menu.mask()][static_cast<std::size_t>(i)]; };
  if (auto failure = verify_recomposition(p, partition, sigmas, omega_of, tol)) return *std::move(failure);
  return WeakDecomposition{p.universe(), partition, std::move(family), std::move(sigmas)};
}

namespace {

void check_components(const Universe& universe, const Partition& partition, const std::vector<StochasticChoice>& sigmas) {
  if (partition.universe_size() != universe.size()) {
    throw Error(ErrorCode::InvalidPartition, "partition does not match the universe");
  }
  if (sigmas.size() != static_cast<std::size_t>(partition.size())) {
    throw Error(ErrorCode::InvalidPartition, "need one fiber choice per class");
  }
  for (int i = 0; i < partition.size(); ++i) {
    const StochasticChoice& sigma = sigmas[static_cast<std::size_t>(i)];
    if (sigma.universe().ids() != universe.ids_of(partition.class_at(i))) {
      throw Error(ErrorCode::InvalidPartition, "fiber choice " + std::to_string(i) + " is not over its class");
    }
    require_full_domain(sigma);
    if (!sigma.positive()) throw Error(ErrorCode::ComponentNotPositive, "fiber choice " + std::to_string(i) + " is not positive");
  }
}

}  // namespace

StochasticChoice compose(const Decomposition& d) {
  check_components(d.universe, d.partition, d.sigmas);
  if (d.omega.size() != d.partition.size()) throw Error(ErrorCode::InvalidPartition, "omega is not over the class indices");
  require_full_domain(d.omega);
  if (!d.omega.positive()) throw Error(ErrorCode::ComponentNotPositive, "omega is not positive");
  return StochasticChoice::from_function(d.universe, [&](Item a, ItemSet menu) {
    const int i = d.partition.index_of(a);
    return d.omega.prob(i, d.partition.image(menu)) *
           sigma_prob(d.sigmas[static_cast<std::size_t>(i)], d.partition.class_at(i), a, menu);
  });
}

StochasticChoice compose(const WeakDecomposition& d) {
  check_components(d.universe, d.partition, d.sigmas);
  const std::size_t menus = std::size_t{1} << d.universe.size();
  if (d.omega_family.size() != menus) throw Error(ErrorCode::InvalidPartition, "omega family must cover every menu");
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet image = d.partition.image(ItemSet(m));
    const auto& weights = d.omega_family[m];
    if (weights.size() != static_cast<std::size_t>(d.partition.size())) {
      throw Error(ErrorCode::InvalidPartition, "omega weights must have one entry per class");
    }
    Rational total = 0;
    for (int i = 0; i < d.partition.size(); ++i) {
      const Rational& w = weights[static_cast<std::size_t>(i)];
      if (image.contains(i) ? sgn(w) <= 0 : sgn(w) != 0) {
        throw Error(ErrorCode::ComponentNotPositive,
                    "omega_A must be positive exactly on pi(A), menu " + d.universe.describe(ItemSet(m)));
      }
      total += w;
    }
    if (total != 1) throw Error(ErrorCode::BadSum, "omega_A does not sum to 1 for " + d.universe.describe(ItemSet(m)));
  }
  return StochasticChoice::from_function(d.universe, [&](Item a, ItemSet menu) {
    const int i = d.partition.index_of(a);
    return d.omega(menu, i) * sigma_prob(d.sigmas[static_cast<std::size_t>(i)], d.partition.class_at(i), a, menu);
  });
}

WeakDecomposition as_weak(const Decomposition& d) {
  const std::size_t menus = std::size_t{1} << d.universe.size();
  std::vector<std::vector<Rational>> family(menus);
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet image = d.partition.image(ItemSet(m));
    family[m].assign(static_cast<std::size_t>(d.partition.size()), Rational(0));
    for (int i : image) family[m][static_cast<std::size_t>(i)] = d.omega.prob(i, image);
  }
  return WeakDecomposition{d.universe, d.partition, std::move(family), d.sigmas};
}

Decomposition make_decomposition(const Universe& universe, const Partition& partition, StochasticChoice omega,
                                 std::vector<StochasticChoice> sigmas) {
  check_components(universe, partition, sigmas);
  if (omega.universe() != partition.index_universe(universe)) {
    throw Error(ErrorCode::InvalidPartition, "omega must be over the index universe " +
                                                 partition.index_universe(universe).describe(ItemSet::full(partition.size())));
  }
  return Decomposition{universe, partition, std::move(omega), std::move(sigmas)};
}

PartitionPoset partition_poset(const StochasticChoice& p, const Tolerance& tol, const Limits& limits) {
  const std::vector<ItemSet> categories = enumerate_categories(p, false, tol, limits);
  PartitionPoset poset;

  // Members are exactly the partitions whose non-singleton classes are
  // pairwise disjoint non-trivial categories; each is confirmed by decompose_scc.
  std::vector<ItemSet> chosen;
  std::function<void(std::size_t, ItemSet)> extend = [&](std::size_t start, ItemSet covered) {
    for (std::size_t k = start; k < categories.size(); ++k) {
      if (categories[k].intersects(covered)) continue;
      chosen.push_back(categories[k]);
      std::vector<ItemSet> classes = chosen;
      const ItemSet used = covered | categories[k];
      for (Item a : p.all() - used) classes.push_back(ItemSet::single(a));
      Partition candidate(p.size(), std::move(classes));
      if (decompose_scc(p, candidate, tol).ok()) poset.members.push_back(std::move(candidate));
      extend(k + 1, used);
      chosen.pop_back();
    }
  };
  extend(0, ItemSet());

  std::sort(poset.members.begin(), poset.members.end(), [](const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.classes().begin(), a.classes().end(), b.classes().begin(), b.classes().end(),
                                        [](ItemSet x, ItemSet y) { return x.mask() < y.mask(); });
  });

  const std::size_t m = poset.members.size();
  poset.coarser.assign(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      poset.coarser[i][j] = i != j && poset.members[i].refines_into(poset.members[j]);
    }
  }
  std::vector<std::size_t> maxima;
  for (std::size_t j = 0; j < m; ++j) {
    bool dominated = false;
    for (std::size_t i = 0; i < m; ++i) dominated = dominated || poset.coarser[i][j];
    if (!dominated) maxima.push_back(j);
  }
  if (m == 0) return poset;
  if (maxima.size() != 1) {
    if (tol.exact()) throw Error(ErrorCode::Internal, "partition poset has no unique maximum");
    return poset;
  }
  poset.maximum = maxima.front();
  if (tol.exact()) {
    const std::optional<Partition> coarsest = coarsest_partition(p, tol, limits);
    if (!coarsest || *coarsest != poset.members[*poset.maximum]) {
      throw Error(ErrorCode::Internal, "poset maximum differs from the coarsest partition");
    }
  }
  return poset;
}

}  // namespace revcat
