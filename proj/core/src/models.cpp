#include "revcat/models.hpp"

#include <cmath>
#include <deque>

#include "revcat/error.hpp"

namespace revcat {

namespace {

void require_positive_weights(const std::vector<Rational>& values, int n, std::string_view what) {
  if (static_cast<int>(values.size()) != n) {
    throw Error(ErrorCode::BadParameter, std::string(what) + " needs one value per item");
  }
  for (const Rational& value : values) {
    if (sgn(value) <= 0) throw Error(ErrorCode::BadParameter, std::string(what) + " must be strictly positive");
  }
}

Rational sum_over(const std::vector<Rational>& values, ItemSet set) {
  Rational total = 0;
  for (Item a : set) total += values[static_cast<std::size_t>(a)];
  return total;
}

void check_spec(const Universe& universe, const NestSpec& spec) {
  if (spec.partition.universe_size() != universe.size()) {
    throw Error(ErrorCode::BadParameter, "nest partition does not cover the universe");
  }
  require_positive_weights(spec.u, universe.size(), "u");
  if (spec.v.size() != static_cast<std::size_t>(spec.partition.size())) {
    throw Error(ErrorCode::BadParameter, "v needs one table per class");
  }
  for (int i = 0; i < spec.partition.size(); ++i) {
    const auto& table = spec.v[static_cast<std::size_t>(i)];
    if (table.size() != (std::size_t{1} << spec.partition.class_at(i).size())) {
      throw Error(ErrorCode::BadParameter, "v table of class " + std::to_string(i) + " has the wrong size");
    }
    for (const Rational& value : table) {
      if (sgn(value) < 0) throw Error(ErrorCode::BadParameter, "v must be nonnegative");
    }
    if (sgn(table[0]) != 0) throw Error(ErrorCode::BadParameter, "v of the empty set must be 0");
  }
}

const Rational& nest_value(const NestSpec& spec, int i, ItemSet menu) {
  const ItemSet cls = spec.partition.class_at(i);
  return spec.v[static_cast<std::size_t>(i)][compress(menu & cls, cls).mask()];
}

// Nearest fraction with denominator at most 12, if within 1e-9.
std::optional<Rational> small_fraction(double value) {
  for (long den = 1; den <= 12; ++den) {
    const double num = std::round(value * static_cast<double>(den));
    if (std::fabs(num / static_cast<double>(den) - value) < 1e-9) {
      Rational r(static_cast<long>(num), den);
      r.canonicalize();
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace

StochasticChoice gen_luce(const Universe& universe, const std::vector<Rational>& u) {
  require_positive_weights(u, universe.size(), "u");
  return StochasticChoice::from_function(universe, [&](Item a, ItemSet menu) {
    return Rational(u[static_cast<std::size_t>(a)] / sum_over(u, menu));
  });
}

NestSpec nested_logit_spec(const Partition& partition, std::vector<Rational> u, std::vector<Rational> lambda) {
  if (lambda.size() != static_cast<std::size_t>(partition.size())) {
    throw Error(ErrorCode::BadParameter, "lambda needs one value per class");
  }
  require_positive_weights(u, partition.universe_size(), "u");
  NestSpec spec{partition, std::move(u), {}, std::move(lambda)};
  for (int i = 0; i < partition.size(); ++i) {
    const Rational& l = (*spec.lambda)[static_cast<std::size_t>(i)];
    if (sgn(l) <= 0) throw Error(ErrorCode::BadParameter, "lambda must be strictly positive");
    const ItemSet cls = partition.class_at(i);
    std::vector<Rational> table(std::size_t{1} << cls.size(), Rational(0));
    for (std::uint32_t m = 1; m < table.size(); ++m) table[m] = exact_power(sum_over(spec.u, expand(ItemSet(m), cls)), l);
    spec.v.push_back(std::move(table));
  }
  return spec;
}

NestSpec content_independent_spec(const Partition& partition, std::vector<Rational> u, const std::vector<Rational>& weight) {
  if (weight.size() != static_cast<std::size_t>(partition.size())) {
    throw Error(ErrorCode::BadParameter, "need one nest weight per class");
  }
  NestSpec spec{partition, std::move(u), {}, std::nullopt};
  for (int i = 0; i < partition.size(); ++i) {
    std::vector<Rational> table(std::size_t{1} << partition.class_at(i).size(), weight[static_cast<std::size_t>(i)]);
    table[0] = 0;
    spec.v.push_back(std::move(table));
  }
  return spec;
}

StochasticChoice gen_nsc(const Universe& universe, const NestSpec& spec) {
  check_spec(universe, spec);
  const Partition& partition = spec.partition;
  return StochasticChoice::from_function(universe, [&](Item a, ItemSet menu) {
    Rational nest_total = 0;
    for (int j : partition.image(menu)) nest_total += nest_value(spec, j, menu);
    if (sgn(nest_total) == 0) {
      throw Error(ErrorCode::ZeroNestMass, "every nest in " + universe.describe(menu) + " has zero utility");
    }
    const int i = partition.index_of(a);
    const ItemSet inside = menu & partition.class_at(i);
    return Rational(nest_value(spec, i, menu) / nest_total * spec.u[static_cast<std::size_t>(a)] / sum_over(spec.u, inside));
  });
}

std::string_view to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::Overload: return "overload";
    case WeightFamily::Flexibility: return "flexibility";
    case WeightFamily::Salience: return "salience";
    case WeightFamily::Reference: return "reference";
  }
  return "unknown";
}

std::vector<std::vector<Rational>> weight_family(const Partition& partition, const WeightFamilySpec& spec) {
  const int n = partition.universe_size();
  switch (spec.kind) {
    case WeightFamily::Overload:
      if (sgn(spec.beta) >= 0) throw Error(ErrorCode::BadParameter, "choice overload needs beta < 0");
      break;
    case WeightFamily::Flexibility:
      if (sgn(spec.beta) <= 0) throw Error(ErrorCode::BadParameter, "preference for flexibility needs beta > 0");
      break;
    case WeightFamily::Salience:
      require_positive_weights(spec.salience, n, "salience");
      break;
    case WeightFamily::Reference:
      require_positive_weights(spec.u, n, "u");
      if (sgn(spec.theta) <= 0 || spec.theta >= 1) throw Error(ErrorCode::BadParameter, "theta must lie in (0,1)");
      break;
  }
  auto weight = [&](ItemSet inside) -> Rational {
    switch (spec.kind) {
      case WeightFamily::Overload:
      case WeightFamily::Flexibility:
        return exact_power(Rational(inside.size()), spec.beta);
      case WeightFamily::Salience:
        return sum_over(spec.salience, inside);
      case WeightFamily::Reference: {
        Rational high = spec.u[static_cast<std::size_t>(inside.first())];
        Rational low = high;
        for (Item a : inside) {
          const Rational& value = spec.u[static_cast<std::size_t>(a)];
          if (value > high) high = value;
          if (value < low) low = value;
        }
        return high - spec.theta * low;
      }
    }
    return Rational(0);
  };
  const std::size_t menus = std::size_t{1} << n;
  std::vector<std::vector<Rational>> family(menus);
  for (std::uint32_t m = 1; m < menus; ++m) {
    const ItemSet menu(m);
    auto& row = family[m];
    row.assign(static_cast<std::size_t>(partition.size()), Rational(0));
    Rational total = 0;
    for (int i : partition.image(menu)) {
      row[static_cast<std::size_t>(i)] = weight(menu & partition.class_at(i));
      total += row[static_cast<std::size_t>(i)];
    }
    for (Rational& value : row) value /= total;
  }
  return family;
}

StochasticChoice gen_scwc_weights(const Universe& universe, const Partition& partition,
                                  const std::vector<StochasticChoice>& sigmas, const WeightFamilySpec& spec) {
  return compose(WeakDecomposition{universe, partition, weight_family(partition, spec), sigmas});
}

LuceVerdict is_luce(const StochasticChoice& p) {
  require_full_domain(p);
  LuceVerdict verdict;
  const ItemSet all = p.all();
  if (!p.positive()) {
    verdict.failure = std::make_pair(Item{0}, all);
    for (ItemSet menu : nonempty_subsets(all)) {
      for (Item a : menu) {
        if (sgn(p.prob(a, menu)) == 0) {
          verdict.failure = std::make_pair(a, menu);
          return verdict;
        }
      }
    }
    return verdict;
  }
  const Rational& anchor = p.prob(0, all);
  for (Item a = 0; a < p.size(); ++a) verdict.u.push_back(p.prob(a, all) / anchor);
  for (ItemSet menu : nonempty_subsets(all)) {
    const Rational total = sum_over(verdict.u, menu);
    for (Item a : menu) {
      if (p.prob(a, menu) != verdict.u[static_cast<std::size_t>(a)] / total) {
        verdict.failure = std::make_pair(a, menu);
        return verdict;
      }
    }
  }
  verdict.holds = true;
  return verdict;
}

namespace {

// Fits (u, v) for a partition whose classes pass the pairwise local-IIA
// screen, then regenerates p; nullopt when the regeneration differs.
std::optional<NscFit> fit_nsc(const StochasticChoice& p, const Partition& partition) {
  const int n = p.size();
  NscFit fit{partition, std::vector<Rational>(static_cast<std::size_t>(n)), {}};
  for (ItemSet cls : partition.classes()) {
    const Item anchor = cls.first();
    for (Item a : cls) {
      const ItemSet pair = ItemSet::single(anchor).with(a);
      fit.u[static_cast<std::size_t>(a)] = p.prob(a, pair) / p.prob(anchor, pair);
    }
  }
  // v is a set function on nonempty subsets of the classes. Every menu
  // fixes the ratios among its parts; propagate from v(X_0) = 1.
  const int classes = partition.size();
  fit.v.resize(static_cast<std::size_t>(classes));
  std::vector<std::vector<bool>> known(static_cast<std::size_t>(classes));
  for (int i = 0; i < classes; ++i) {
    const std::size_t size = std::size_t{1} << partition.class_at(i).size();
    fit.v[static_cast<std::size_t>(i)].assign(size, Rational(0));
    known[static_cast<std::size_t>(i)].assign(size, false);
  }
  if (classes == 1) {
    for (std::uint32_t m = 1; m < fit.v[0].size(); ++m) fit.v[0][m] = 1;
  } else {
    // Menus (S ∪ T) for S ⊆ X_i, T ⊆ X_j link the two parts directly; the
    // link through the full second class reaches every node.
    std::deque<std::pair<int, std::uint32_t>> queue;
    const std::uint32_t full0 = (1u << partition.class_at(0).size()) - 1;
    fit.v[0][full0] = 1;
    known[0][full0] = true;
    queue.emplace_back(0, full0);
    while (!queue.empty()) {
      const auto [i, local] = queue.front();
      queue.pop_front();
      const ItemSet s = expand(ItemSet(local), partition.class_at(i));
      for (int j = 0; j < classes; ++j) {
        if (j == i) continue;
        const ItemSet cls = partition.class_at(j);
        for (std::uint32_t m = 1; m < (1u << cls.size()); ++m) {
          if (known[static_cast<std::size_t>(j)][m]) continue;
          const ItemSet t = expand(ItemSet(m), cls);
          const ItemSet menu = s | t;
          fit.v[static_cast<std::size_t>(j)][m] =
              fit.v[static_cast<std::size_t>(i)][local] * event_prob(p, t, menu) / event_prob(p, s, menu);
          known[static_cast<std::size_t>(j)][m] = true;
          queue.emplace_back(j, m);
        }
      }
    }
  }
  NestSpec spec{partition, fit.u, fit.v, std::nullopt};
  try {
    if (gen_nsc(p.universe(), spec) == p) return fit;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

NscVerdict is_nsc(const StochasticChoice& p, const Limits& limits) {
  require_full_domain(p);
  require_size(p.size(), limits.max_nsc_n, "NSC partition search");
  NscVerdict verdict;
  if (!p.positive()) return verdict;
  const int n = p.size();
  std::vector<std::vector<bool>> iia(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), true));
  for (Item a = 0; a < n; ++a) {
    for (Item b = a + 1; b < n; ++b) {
      const bool holds = check_local_iia(p, ItemSet{a, b}).holds;
      iia[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = holds;
      iia[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = holds;
    }
  }
  for (const Partition& partition : all_partitions(n)) {
    bool screened = true;
    for (ItemSet cls : partition.classes()) {
      for (Item a : cls) {
        for (Item b : cls) screened = screened && iia[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    }
    if (!screened) continue;
    if (auto fit = fit_nsc(p, partition)) verdict.fits.push_back(std::move(*fit));
  }
  verdict.holds = !verdict.fits.empty();
  return verdict;
}

std::optional<NestedLogitFit> fit_nested_logit(const NscVerdict& nsc) {
  for (const NscFit& fit : nsc.fits) {
    const Partition& partition = fit.partition;
    NestedLogitFit out{fit, {}};
    bool ok = true;
    for (int i = 0; ok && i < partition.size(); ++i) {
      const ItemSet cls = partition.class_at(i);
      const auto& v = fit.v[static_cast<std::size_t>(i)];
      const std::uint32_t full = (1u << cls.size()) - 1;
      if (cls.size() == 1 || partition.size() == 1) {
        out.lambda.emplace_back(1);
        continue;
      }
      // v(S)/v(X_i) = (U(S)/U(X_i))^lambda; estimate lambda on a singleton.
      const Rational total_u = sum_over(fit.u, cls);
      const Rational ratio_u = fit.u[static_cast<std::size_t>(cls.first())] / total_u;
      const Rational ratio_v = v[1] / v[full];
      const std::optional<Rational> lambda =
          small_fraction(std::log(to_double(ratio_v)) / std::log(to_double(ratio_u)));
      if (!lambda || sgn(*lambda) <= 0) {
        ok = false;
        break;
      }
      for (std::uint32_t m = 1; ok && m <= full; ++m) {
        try {
          ok = v[m] / v[full] == exact_power(sum_over(fit.u, expand(ItemSet(m), cls)) / total_u, *lambda);
        } catch (const Error&) {
          ok = false;
        }
      }
      out.lambda.push_back(*lambda);
    }
    if (!ok) continue;
    // v is fixed only up to one common factor k. Look for a k that makes every
    // class rescale u_i -> c_i u_i with (c_i U(X_i))^lambda_i = k v_i(X_i) rational.
    std::vector<Rational> scales{Rational(1)};
    for (const auto& v : fit.v) scales.push_back(1 / v.back());
    for (const Rational& k : scales) {
      std::vector<Rational> u = fit.u;
      bool exact = true;
      for (int i = 0; exact && i < partition.size(); ++i) {
        const ItemSet cls = partition.class_at(i);
        const Rational& l = out.lambda[static_cast<std::size_t>(i)];
        try {
          const Rational c = exact_power(k * fit.v[static_cast<std::size_t>(i)].back(), 1 / l) / sum_over(fit.u, cls);
          for (Item a : cls) u[static_cast<std::size_t>(a)] *= c;
        } catch (const Error&) {
          exact = false;
        }
      }
      if (exact) {
        out.nsc.u = std::move(u);
        break;
      }
    }
    return out;
  }
  return std::nullopt;
}

Classification classify(const StochasticChoice& p, const Limits& limits) {
  require_full_domain(p);
  if (!p.positive()) throw Error(ErrorCode::NotPositive, "classification needs a positive choice");
  Classification c;
  c.luce_fit = is_luce(p);
  c.luce = c.luce_fit.holds;
  c.nsc_fits = is_nsc(p, limits);
  c.nsc = c.nsc_fits.holds;
  c.nested_logit_fit = fit_nested_logit(c.nsc_fits);
  c.nested_logit = c.nested_logit_fit.has_value();
  c.coarsest = coarsest_partition(p, {}, limits);
  c.nondegenerate_scc = c.coarsest.has_value();
  c.weak_categories = enumerate_categories(p, true, {}, limits);
  c.nondegenerate_scwc = !c.weak_categories.empty();

  auto require = [](bool implication, std::string_view what) {
    if (!implication) throw Error(ErrorCode::Internal, "classification breaks the inclusion " + std::string(what));
  };
  require(!c.luce || c.nested_logit, "Luce => Nested Logit");
  require(!c.nested_logit || c.nsc, "Nested Logit => NSC");
  require(!c.nsc || c.nondegenerate_scwc, "NSC => non-degenerate SCwC");
  require(!c.nondegenerate_scc || c.nondegenerate_scwc, "non-degenerate SCC => non-degenerate SCwC");
  require(!c.nondegenerate_scc || !c.luce, "non-degenerate SCC => not Luce");
  return c;
}

}  // namespace revcat
