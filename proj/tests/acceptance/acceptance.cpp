// One PASS/FAIL line per acceptance criterion. Exact rational arithmetic
// throughout; the only tolerances are the wall-clock limits below. Exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "helpers.hpp"
#include "revcat/axioms.hpp"
#include "revcat/categorizer.hpp"
#include "revcat/io.hpp"
#include "revcat/models.hpp"
#include "revcat/population.hpp"
#include "revcat/rum.hpp"

namespace revcat {
namespace {

using testing::R;
using testing::Rng;
using testing::uniform_int;

// Records the first violation and counts the rest.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  void instance() { ++instances_; }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    if (instances_ > 0) s << instances_ << " instances, ";
    s << checks_ << " checks, " << failures_ << " violations";
    if (failures_ > 0) s << "; first: " << first_;
    return s.str();
  }

 private:
  long instances_ = 0;
  long checks_ = 0;
  long failures_ = 0;
  std::string first_;
};

std::string fmt(const Rational& r) { return format_rational(r); }

struct Criterion {
  int number;
  double limit_seconds;
  std::function<Tally()> body;
};

bool run(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  std::string error;
  try {
    tally = c.body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < c.limit_seconds;
  const bool pass = error.empty() && tally.ok() && in_time;
  std::printf("criterion %d: %s (%s; %.3f s of %.0f s)%s\n", c.number, pass ? "PASS" : "FAIL",
              error.empty() ? tally.summary().c_str() : ("exception: " + error).c_str(), seconds, c.limit_seconds,
              in_time ? "" : " too slow");
  std::fflush(stdout);
  return pass;
}

// Criterion 1: every pair fails; the two-stage product misses the observed value.
Tally intransitive_pairs() {
  Tally t;
  const StochasticChoice p = testing::load("no_category.json");
  const Universe& u = p.universe();
  const ItemSet all = p.all();
  struct Case {
    ItemSet pair;
    Item item;
    const char* within;
    const char* mass;
    const char* product;
    const char* observed;
  };
  const std::vector<Case> cases = {
      {ItemSet{0, 1}, 0, "1/2", "7/24", "7/48", "1/8"},
      {ItemSet{1, 2}, 1, "1/3", "7/8", "7/24", "1/6"},
      {ItemSet{0, 2}, 2, "1/4", "5/6", "5/24", "17/24"},
  };
  for (const Case& c : cases) {
    const std::string name = u.describe(c.pair);
    t.expect(!is_category(p, c.pair).holds(), name + " accepted as a category");
    const Rational within = p.prob(c.item, c.pair);
    const Rational mass = event_prob(p, c.pair, all);
    t.expect(within == R(c.within), name + " within-class share " + fmt(within));
    t.expect(mass == R(c.mass), name + " class mass " + fmt(mass));
    t.expect(within * mass == R(c.product), name + " product " + fmt(within * mass));
    t.expect(p.prob(c.item, all) == R(c.observed), name + " observed " + fmt(p.prob(c.item, all)));
    t.expect(R(c.product) != R(c.observed), name + " product matches observation");
    const Partition partition(3, {c.pair, all - c.pair});
    const auto d = decompose_scc(p, partition);
    t.expect(!d.ok(), name + " decomposes");
    if (!d.ok()) {
      const DecompositionFailure& f = d.failure();
      if (f.kind == DecompositionFailureKind::OmegaIllDefined) {
        t.expect(f.first_mass != f.second_mass, name + " first-stage certificate is not a mismatch");
        t.expect(f.first_mass == event_prob(p, partition.class_at(f.class_index), f.first_menu) &&
                     f.second_mass == event_prob(p, partition.class_at(f.class_index), f.second_menu),
                 name + " first-stage certificate does not replay");
      } else {
        t.expect(f.observed != f.recomposed, name + " failure certificate is not a mismatch");
        t.expect(f.observed == p.prob(f.item, f.menu), name + " failure observed value is wrong");
      }
    }
  }
  t.expect(!coarsest_partition(p).has_value(), "coarsest partition exists");
  t.expect(enumerate_categories(p, false, {}, {}, false).empty(), "non-trivial category found");
  return t;
}

bool counterexample_is(const AxiomVerdict& v, const Rational& first, const Rational& second) {
  if (v.holds || !v.counterexample) return false;
  const Counterexample& ce = *v.counterexample;
  return (ce.lhs == first && ce.rhs == second) || (ce.lhs == second && ce.rhs == first);
}

// Criterion 2: c-IND and c-NEU are independent.
Tally axiom_independence() {
  Tally t;
  const StochasticChoice first = testing::load_partial("cind_without_cneu.json");
  const ItemSet abc = first.universe().set_of({"a", "b", "c"});
  const AxiomVerdict cind1 = check_cind(first, abc);
  const AxiomVerdict cneu1 = check_cneu(first, abc);
  t.expect(cind1.holds, "c-IND fails on the first dataset");
  t.expect(counterexample_is(cneu1, R("2/3"), R("3/8")), "c-NEU counterexample on the first dataset is not 2/3 vs 3/8");
  if (cneu1.counterexample) {
    t.expect(reproduces(first, *cneu1.counterexample), "c-NEU counterexample does not replay");
    t.expect(cneu1.counterexample->item == first.universe().index_of("x"), "c-NEU counterexample is not about x");
  }

  const StochasticChoice second = testing::load("cneu_without_cind.json");
  const ItemSet ab = second.universe().set_of({"a", "b"});
  const AxiomVerdict cneu2 = check_cneu(second, ab);
  const AxiomVerdict cind2 = check_cind(second, ab);
  t.expect(cneu2.holds, "c-NEU fails on the second dataset");
  t.expect(counterexample_is(cind2, R("2/3"), R("1")), "c-IND counterexample on the second dataset is not 2/3 vs 1");
  if (cind2.counterexample) t.expect(reproduces(second, *cind2.counterexample), "c-IND counterexample does not replay");
  return t;
}

// Criterion 3: a population of four resolvable choices.
Tally mixture_population() {
  Tally t;
  const PopulationDistribution q =
      io::parse_population(io::read_json_file(testing::data_path("resolvable_mixture_population.json")));
  t.expect(q.weights.size() == 4, "population does not have four members");
  const StochasticChoice p = induce_choice(q);
  const Universe& u = p.universe();
  auto at = [&](const char* item, std::vector<std::string> menu) { return p.prob(u.index_of(item), u.set_of(menu)); };
  t.expect(at("a", {"a", "b", "c"}) == R("1/5"), "p(a,abc)");
  t.expect(at("b", {"a", "b", "c"}) == R("1/5"), "p(b,abc)");
  t.expect(at("c", {"a", "b", "c"}) == R("3/5"), "p(c,abc)");
  t.expect(at("a", {"a", "c"}) == R("2/5"), "p(a,ac)");
  t.expect(at("b", {"b", "c"}) == R("2/5"), "p(b,bc)");
  t.expect(at("a", {"a", "b"}) == R("2/5"), "p(a,ab)");
  t.expect(p == testing::load("resolvable_mixture.json"), "induced table differs from the stored dataset");

  const Partition partition = Partition::from_ids(u, {{"a", "b"}, {"c"}});
  t.expect(check_condition1(p, partition).holds, "condition 1 fails");
  const auto d = decompose_scc(p, partition);
  t.expect(!d.ok(), "mixture decomposes as SCC");
  if (!d.ok()) {
    const auto& ce = d.failure().cind;
    t.expect(ce.has_value() && ((ce->lhs == R("2/3") && ce->rhs == 1) || (ce->lhs == 1 && ce->rhs == R("2/3"))),
             "failure does not carry the 2/3 vs 1 ratio");
  }
  return t;
}

std::vector<std::vector<Rational>> normalized(std::vector<std::vector<Rational>> family) {
  for (std::size_t m = 1; m < family.size(); ++m) {
    Rational total = 0;
    for (const Rational& w : family[m]) total += w;
    for (Rational& w : family[m]) w /= total;
  }
  return family;
}

WeightFamilySpec random_family(Rng& rng, int n) {
  WeightFamilySpec spec;
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      spec.kind = WeightFamily::Overload;
      spec.beta = -uniform_int(rng, 1, 3);
      break;
    case 1:
      spec.kind = WeightFamily::Flexibility;
      spec.beta = uniform_int(rng, 1, 3);
      break;
    case 2:
      spec.kind = WeightFamily::Salience;
      spec.salience = testing::positive_vector(rng, static_cast<std::size_t>(n));
      break;
    default:
      spec.kind = WeightFamily::Reference;
      spec.u = testing::positive_vector(rng, static_cast<std::size_t>(n));
      spec.theta = Rational(uniform_int(rng, 1, 9), 10);
      spec.theta.canonicalize();
      break;
  }
  return spec;
}

constexpr long kMaxPopulation = 2'000;

// Criterion 4: exact round trips.
Tally round_trips() {
  Tally t;
  Rng rng(4001);
  for (int trial = 0; trial < 500; ++trial) {
    t.instance();
    const int n = 3 + trial % 4;
    const Universe u = testing::letters(n);
    const std::string tag = "trial " + std::to_string(trial) + " n=" + std::to_string(n);
    // A positive SCC puts weight on every resolvable choice, so the partition
    // is redrawn until that population is enumerable.
    Partition partition = testing::random_nondegenerate_partition(rng, n, 3);
    while (count_resolvable(partition) > kMaxPopulation) partition = testing::random_nondegenerate_partition(rng, n, 3);
    const Decomposition d = testing::random_decomposition(rng, u, partition);
    const StochasticChoice p = compose(d);

    const auto back = decompose_scc(p, partition);
    t.expect(back.ok(), tag + ": compose then decompose fails");
    if (back.ok()) {
      t.expect(back.value().omega == d.omega, tag + ": omega differs");
      t.expect(back.value().sigmas == d.sigmas, tag + ": sigma differs");
    }

    t.expect(induce_choice(q_from_scc(d)) == p, tag + ": population from the SCC induces another choice");
    const PopulationFit fit = q_from_condition1(p, partition);
    t.expect(induce_choice(fit.q) == p, tag + ": population from condition 1 induces another choice");

    WeakDecomposition weak{u, partition, normalized(weight_family(partition, random_family(rng, n))), d.sigmas};
    const StochasticChoice pw = compose(weak);
    const auto weak_back = decompose_scwc(pw, partition);
    t.expect(weak_back.ok(), tag + ": weak decomposition fails");
    if (weak_back.ok()) {
      t.expect(compose(weak_back.value()) == pw, tag + ": weak recomposition differs");
      bool same = true;
      for (ItemSet menu : nonempty_subsets(u.all())) {
        for (int i = 0; i < partition.size(); ++i) same = same && weak_back.value().omega(menu, i) == weak.omega(menu, i);
      }
      t.expect(same, tag + ": weak first stage differs");
    }
  }
  return t;
}

// Criterion 5: RUM composition and decomposition.
Tally rum_suite() {
  Tally t;
  Rng rng(5001);
  for (int trial = 0; trial < 200; ++trial) {
    t.instance();
    const int n = 3 + trial % 4;
    const Universe u = testing::letters(n);
    const std::string tag = "trial " + std::to_string(trial) + " n=" + std::to_string(n);
    const Partition partition = testing::random_nondegenerate_partition(rng, n);
    const Universe index = partition.index_universe(u);
    const RumRepresentation v = testing::full_support_rum(rng, index);
    std::vector<RumRepresentation> s;
    for (ItemSet cls : partition.classes()) {
      s.push_back(testing::full_support_rum(rng, Universe(u.ids_of(cls))));
    }
    const RumRepresentation q = compose_rum(u, partition, v, s);
    std::vector<StochasticChoice> sigmas;
    for (const auto& rep : s) sigmas.push_back(rationalized_choice(rep));
    const Decomposition d = make_decomposition(u, partition, rationalized_choice(v), sigmas);
    const StochasticChoice p = compose(d);
    t.expect(rationalizes(q, p), tag + ": composed witness does not rationalize the composed choice");
    bool blocks = true;
    for (const RumTerm& term : q.terms) blocks = blocks && term.order.is_block_order(partition);
    t.expect(blocks, tag + ": composed witness leaves the block orders");

    auto valid = [&](const Outcome<RumDecomposition, RumDecompositionFailure>& r, const std::string& what) {
      t.expect(r.ok(), tag + ": " + what + " fails");
      if (!r.ok()) return;
      t.expect(rationalizes(r.value().v, d.omega), tag + ": " + what + " omega witness invalid");
      for (std::size_t i = 0; i < sigmas.size(); ++i) {
        t.expect(rationalizes(r.value().s[i], d.sigmas[i]), tag + ": " + what + " sigma witness invalid");
      }
    };
    valid(decompose_rum(q, d), "decompose_rum");

    // A single split order ranks a member of one class between two members of another.
    std::vector<Item> ranking;
    for (ItemSet cls : partition.classes()) {
      for (Item a : cls) ranking.push_back(a);
    }
    std::vector<Item> split = ranking;
    bool found = false;
    for (std::size_t k = 0; k + 2 < split.size() && !found; ++k) {
      const Item x = split[k];
      const Item y = split[k + 1];
      const Item z = split[k + 2];
      if (partition.index_of(x) == partition.index_of(y) && partition.index_of(y) != partition.index_of(z)) {
        std::swap(split[k + 1], split[k + 2]);
        found = true;
      }
    }
    if (found) {
      RumRepresentation bogus{u, {RumTerm{LinearOrder(split), Rational(1)}}};
      t.expect(!bogus.terms.front().order.is_block_order(partition), tag + ": split order is a block order");
      const auto resolved = decompose_rum(bogus, d);
      valid(resolved, "non-block re-solve");
      if (resolved.ok()) t.expect(resolved.value().resolved, tag + ": non-block witness was not re-solved");
    }
  }
  return t;
}

std::vector<Rational> integer_lambdas(Rng& rng, const Partition& partition) {
  std::vector<Rational> lambda;
  bool generic = false;
  for (ItemSet cls : partition.classes()) {
    lambda.emplace_back(uniform_int(rng, 1, 3));
    if (cls.size() > 1 && lambda.back() != 1) generic = true;
  }
  if (!generic) {
    for (int i = 0; i < partition.size(); ++i) {
      if (partition.class_at(i).size() > 1) {
        lambda[static_cast<std::size_t>(i)] = 2;
        break;
      }
    }
  }
  return lambda;
}

// Criterion 6: model regions.
Tally model_regions() {
  Tally t;
  Rng rng(6001);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 3;
    const Universe u = testing::letters(n);
    const std::string tag = "trial " + std::to_string(trial) + " n=" + std::to_string(n);

    t.instance();
    const Classification luce = classify(gen_luce(u, testing::positive_vector(rng, static_cast<std::size_t>(n))));
    t.expect(luce.luce && luce.nsc && luce.nondegenerate_scwc && !luce.nondegenerate_scc,
             tag + ": Luce instance outside its region");

    t.instance();
    const Partition partition = testing::random_nondegenerate_partition(rng, n);
    const std::vector<Rational> weights = testing::positive_vector(rng, static_cast<std::size_t>(n));
    const Classification nl =
        classify(gen_nsc(u, nested_logit_spec(partition, weights, integer_lambdas(rng, partition))));
    t.expect(!nl.luce && nl.nested_logit && nl.nsc && !nl.nondegenerate_scc,
             tag + ": nested logit instance outside its region");

    t.instance();
    const Classification ci = classify(gen_nsc(
        u, content_independent_spec(partition, weights, testing::positive_vector(rng, static_cast<std::size_t>(partition.size())))));
    t.expect(ci.nsc && ci.nondegenerate_scc, tag + ": content-independent instance outside its region");
  }
  return t;
}

void structure_laws(const StochasticChoice& p, const std::string& tag, Tally& t) {
  t.instance();
  const std::vector<ItemSet> strict = enumerate_categories(p, false, {}, {}, false);
  for (std::size_t i = 0; i < strict.size(); ++i) {
    for (std::size_t j = i + 1; j < strict.size(); ++j) {
      const ItemSet a = strict[i];
      const ItemSet b = strict[j];
      t.expect(!a.intersects(b) || a.subset_of(b) || b.subset_of(a), tag + ": overlapping categories");
    }
  }
  const std::vector<ItemSet> weak = enumerate_categories(p, true, {}, {}, false);
  for (std::size_t i = 0; i < weak.size(); ++i) {
    for (std::size_t j = i + 1; j < weak.size(); ++j) {
      const ItemSet both = weak[i] & weak[j];
      if (!both.empty()) t.expect(is_weak_category(p, both).holds, tag + ": intersection is not a weak category");
    }
  }
  const PartitionPoset poset = partition_poset(p);
  const std::optional<Partition> coarsest = coarsest_partition(p);
  t.expect(poset.members.empty() != coarsest.has_value(), tag + ": poset and coarsest partition disagree on existence");
  if (!poset.members.empty()) {
    t.expect(poset.maximum.has_value(), tag + ": poset has no maximum");
    if (poset.maximum && coarsest) t.expect(poset.members[*poset.maximum] == *coarsest, tag + ": maximum is not the coarsest");
    if (poset.maximum) {
      for (std::size_t j = 0; j < poset.members.size(); ++j) {
        if (j != *poset.maximum) t.expect(poset.coarser[*poset.maximum][j], tag + ": maximum is not above every member");
      }
    }
  }
}

// Criterion 7: laminarity, weak intersections, unique maximum.
Tally structure() {
  Tally t;
  for (const char* name : {"no_category.json", "cneu_without_cind.json", "resolvable_mixture.json"}) {
    structure_laws(testing::load(name), name, t);
  }
  Rng rng(7001);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 3;
    const Universe u = testing::letters(n);
    const std::string tag = "trial " + std::to_string(trial) + " n=" + std::to_string(n);
    StochasticChoice p = testing::random_choice(rng, u);
    switch (trial % 4) {
      case 1: p = compose(testing::random_decomposition(rng, u, testing::random_nondegenerate_partition(rng, n))); break;
      case 2: {
        // Nested classes: an SCC whose fiber is itself an SCC.
        if (n >= 4) {
          const Universe inner = testing::letters(n - 1);
          const StochasticChoice fiber =
              compose(testing::random_decomposition(rng, inner, testing::random_nondegenerate_partition(rng, n - 1)));
          const Partition outer(n, {ItemSet::full(n - 1), ItemSet::single(n - 1)});
          p = compose(make_decomposition(u, outer, testing::random_choice(rng, outer.index_universe(u)),
                                         {fiber, testing::random_choice(rng, Universe(u.ids_of(ItemSet::single(n - 1))))}));
        }
        break;
      }
      case 3: p = testing::random_luce(rng, u); break;
      default: break;
    }
    structure_laws(p, tag, t);
  }
  return t;
}

// Criterion 8: local rationalizability on composed SCCs with RUM fibers.
Tally local_rationalizability() {
  Tally t;
  Rng rng(8001);
  for (int trial = 0; trial < 100; ++trial) {
    t.instance();
    const int n = 3 + trial % 3;
    const Universe u = testing::letters(n);
    const std::string tag = "trial " + std::to_string(trial) + " n=" + std::to_string(n);
    const Partition partition = testing::random_nondegenerate_partition(rng, n);
    const StochasticChoice p = compose(
        testing::random_decomposition(rng, u, partition, testing::Component::Generic, testing::Component::Rum));
    for (ItemSet cls : partition.classes()) {
      const auto local = check_local_rationalizability(p, cls);
      t.expect(local.ok(), tag + ": class " + u.describe(cls) + " is not locally rationalizable");
      if (local.ok()) t.expect(locally_rationalizes(p, cls, local.value()), tag + ": local witness invalid");
    }
    for (ItemSet g : nonempty_subsets(p.all())) {
      if (g.size() < 2 || g == p.all()) continue;
      const auto local = check_local_rationalizability(p, g);
      if (local.ok()) {
        t.expect(is_weak_category(p, g).holds, tag + ": feasible " + u.describe(g) + " is not a weak category");
      } else {
        t.expect(refutes_local(local.failure(), p, g), tag + ": local refutation for " + u.describe(g) + " invalid");
      }
    }
  }
  return t;
}

}  // namespace
}  // namespace revcat

int main() {
  using namespace revcat;
  const std::vector<Criterion> criteria = {
      {1, 1, intransitive_pairs},   {2, 1, axiom_independence}, {3, 1, mixture_population},
      {4, 120, round_trips},        {5, 300, rum_suite},        {6, 120, model_regions},
      {7, 300, structure},          {8, 300, local_rationalizability},
  };
  int failed = 0;
  for (const Criterion& c : criteria) failed += run(c) ? 0 : 1;
  return failed == 0 ? 0 : 1;
}
