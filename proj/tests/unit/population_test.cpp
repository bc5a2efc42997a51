#include <gtest/gtest.h>

#include <map>
#include <set>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"
#include "revcat/population.hpp"

namespace revcat {
namespace {

using testing::R;

// Deterministic choice functions on X as flat tables indexed by menu mask.
using Table = std::vector<Item>;

std::vector<Table> all_choice_functions(int n) {
  std::vector<Table> out{Table(std::size_t{1} << n, -1)};
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    std::vector<Table> next;
    for (const Table& t : out) {
      for (Item a : ItemSet(m)) {
        Table extended = t;
        extended[m] = a;
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Resolvable straight from the definition: the class of c(A) depends on A
// only through pi(A), and c(A) = c(A ∩ X_i) for that class i.
bool oracle_resolvable(const Table& c, const Partition& partition) {
  const int n = partition.universe_size();
  std::map<std::uint32_t, int> class_of_image;
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    const ItemSet menu(m);
    const int i = partition.index_of(c[m]);
    const auto [it, fresh] = class_of_image.emplace(partition.image(menu).mask(), i);
    if (!fresh && it->second != i) return false;
    if (c[(menu & partition.class_at(i)).mask()] != c[m]) return false;
  }
  return true;
}

Table flatten(const ResolvableChoice& c, const Partition& partition) {
  const int n = partition.universe_size();
  Table t(std::size_t{1} << n, -1);
  for (std::uint32_t m = 1; m < (1u << n); ++m) t[m] = c.choose(partition, ItemSet(m));
  return t;
}

PopulationDistribution mixture_population() {
  // Rows by (class picked from {a,b,c}, item picked from {a,b}): ({c}, a),
  // ({c}, b), ({a,b}, a), ({a,b}, b).
  const Universe u = testing::letters(3);
  const Partition partition(3, {ItemSet{0, 1}, ItemSet{2}});
  PopulationDistribution q{u, partition, {}};
  const std::vector<std::pair<int, Item>> rows{{1, 0}, {1, 1}, {0, 0}, {0, 1}};
  const std::vector<Rational> weights{R("1/5"), R("2/5"), R("1/5"), R("1/5")};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ResolvableChoice c;
    c.base = {-1, 0, 1, rows[k].first};
    c.fibers = {{-1, 0, 1, rows[k].second}, {-1, 2}};
    q.weights.emplace_back(c, weights[k]);
  }
  return q;
}

TEST(Population, CountsMatchFormula) {
  const Partition two_one(3, {ItemSet{0, 1}, ItemSet{2}});
  EXPECT_EQ(count_resolvable(two_one), 4);
  EXPECT_EQ(enumerate_resolvable(two_one).size(), 4u);
  // Base: menus {0,1},{0,2},{1,2},{0,1,2} of three classes; fibers on {a,b}.
  const Partition three(4, {ItemSet{0, 1}, ItemSet{2}, ItemSet{3}});
  EXPECT_EQ(count_resolvable(three), 2 * 2 * 2 * 3 * 2);
}

TEST(Population, EnumerationMatchesDefinitionForThreeItems) {
  const std::vector<Table> functions = all_choice_functions(3);
  ASSERT_EQ(functions.size(), 24u);
  for (const Partition& partition : all_partitions(3)) {
    std::set<Table> expected;
    for (const Table& t : functions) {
      if (oracle_resolvable(t, partition)) expected.insert(t);
    }
    std::set<Table> enumerated;
    const auto choices = enumerate_resolvable(partition);
    for (const ResolvableChoice& c : choices) enumerated.insert(flatten(c, partition));
    EXPECT_EQ(enumerated.size(), choices.size());
    EXPECT_EQ(enumerated, expected) << partition.describe(testing::letters(3));
    EXPECT_EQ(Integer(static_cast<unsigned long>(choices.size())), count_resolvable(partition));
  }
}

TEST(Population, EnumerationIsSortedAndComplete) {
  const Partition partition(4, {ItemSet{0, 1}, ItemSet{2, 3}});
  const auto choices = enumerate_resolvable(partition);
  EXPECT_EQ(Integer(static_cast<unsigned long>(choices.size())), count_resolvable(partition));
  for (std::size_t k = 1; k < choices.size(); ++k) {
    EXPECT_LT(choices[k - 1], choices[k]);
  }
  Limits tight;
  tight.max_resolvable = 4;
  EXPECT_ERROR_CODE(enumerate_resolvable(partition, tight), ErrorCode::SizeBound);
}

TEST(Population, MixtureInducesPublishedChoice) {
  const PopulationDistribution q = mixture_population();
  const StochasticChoice p = induce_choice(q);
  EXPECT_EQ(p, testing::load("resolvable_mixture.json"));
  EXPECT_EQ(p.prob(0, ItemSet{0, 1, 2}), R("1/5"));
  EXPECT_EQ(p.prob(1, ItemSet{0, 1, 2}), R("1/5"));
  EXPECT_EQ(p.prob(2, ItemSet{0, 1, 2}), R("3/5"));
  EXPECT_EQ(p.prob(0, ItemSet{0, 2}), R("2/5"));
  EXPECT_EQ(p.prob(1, ItemSet{1, 2}), R("2/5"));
  EXPECT_EQ(p.prob(0, ItemSet{0, 1}), R("2/5"));
  EXPECT_TRUE(check_condition1(p, q.partition).holds);
  EXPECT_FALSE(decompose_scc(p, q.partition).ok());
}

TEST(Population, UniformPopulation) {
  const Partition partition(3, {ItemSet{0, 1}, ItemSet{2}});
  PopulationDistribution q{testing::letters(3), partition, {}};
  for (const auto& c : enumerate_resolvable(partition)) q.weights.emplace_back(c, R("1/4"));
  const StochasticChoice p = induce_choice(q);
  EXPECT_EQ(p.prob(0, ItemSet{0, 1, 2}), R("1/4"));
  EXPECT_EQ(p.prob(1, ItemSet{0, 1, 2}), R("1/4"));
  EXPECT_EQ(p.prob(2, ItemSet{0, 1, 2}), R("1/2"));
}

TEST(Population, PointMassInducesItsChoice) {
  const Partition partition(4, {ItemSet{0, 1}, ItemSet{2, 3}});
  for (const ResolvableChoice& c : enumerate_resolvable(partition)) {
    const StochasticChoice p = induce_choice(PopulationDistribution{testing::letters(4), partition, {{c, R("1")}}});
    for (std::uint32_t m = 1; m < 16; ++m) {
      EXPECT_EQ(p.prob(c.choose(partition, ItemSet(m)), ItemSet(m)), 1);
    }
  }
}

TEST(Population, ValidationRejectsBadWeights) {
  PopulationDistribution q = mixture_population();
  q.weights[0].second = R("1/2");
  EXPECT_ERROR_CODE(validate_population(q), ErrorCode::BadSum);
  q = mixture_population();
  q.weights[0].second = R("-1/5");
  q.weights[1].second = R("4/5");
  EXPECT_ERROR_CODE(validate_population(q), ErrorCode::OutOfRange);
  q = mixture_population();
  q.weights[0].first.fibers[0][3] = 2;
  EXPECT_ERROR_CODE(validate_population(q), ErrorCode::InvalidPartition);
}

TEST(Population, SccProductInducesTheSameChoice) {
  const Universe u = testing::letters(3);
  const Partition partition(3, {ItemSet{0, 1}, ItemSet{2}});
  const StochasticChoice omega = StochasticChoice::from_function(partition.index_universe(u), [](Item a, ItemSet menu) {
    if (menu.size() == 1) return Rational(1);
    return a == 0 ? R("2/3") : R("1/3");
  });
  const StochasticChoice sigma = StochasticChoice::from_function(Universe({"a", "b"}), [](Item a, ItemSet menu) {
    if (menu.size() == 1) return Rational(1);
    return a == 0 ? R("3/4") : R("1/4");
  });
  const Decomposition d = make_decomposition(u, partition, omega, {sigma, StochasticChoice::from_function(Universe({"c"}), [](Item, ItemSet) { return Rational(1); })});
  const PopulationDistribution q = q_from_scc(d);
  ASSERT_EQ(q.weights.size(), 4u);
  std::map<std::pair<int, Item>, Rational> by_content;
  for (const auto& [c, w] : q.weights) by_content[{c.base[3], c.fibers[0][3]}] = w;
  EXPECT_EQ((by_content[{0, 0}]), R("1/2"));
  EXPECT_EQ((by_content[{0, 1}]), R("1/6"));
  EXPECT_EQ((by_content[{1, 0}]), R("1/4"));
  EXPECT_EQ((by_content[{1, 1}]), R("1/12"));
  EXPECT_EQ(induce_choice(q), compose(d));
}

TEST(Population, SccProductIdentityProperty) {
  testing::Rng rng(107);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = testing::uniform_int(rng, 3, 5);
    const Universe u = testing::letters(n);
    const Partition partition = testing::random_nondegenerate_partition(rng, n, 3);
    const Decomposition d = testing::random_decomposition(rng, u, partition);
    const StochasticChoice p = compose(d);
    const PopulationDistribution q = q_from_scc(d);
    EXPECT_EQ(induce_choice(q), p);
    const PopulationFit fit = q_from_condition1(p, partition);
    EXPECT_EQ(induce_choice(fit.q), p);
  }
}

TEST(Population, DegeneratePartitionRejected) {
  testing::Rng rng(3);
  const Universe u = testing::letters(3);
  const Decomposition d = testing::random_decomposition(rng, u, Partition::singletons(3));
  EXPECT_ERROR_CODE(q_from_scc(d), ErrorCode::Degenerate);
}

TEST(Population, ConditionOneFailsWhenClassMassMoves) {
  const StochasticChoice p = testing::load_partial("cind_without_cneu.json");
  const Universe& u = p.universe();
  const Partition partition = Partition::from_ids(u, {{"a", "b", "c"}, {"x"}});
  const AxiomVerdict v = check_condition1(p, partition);
  ASSERT_FALSE(v.holds);
  EXPECT_TRUE(reproduces(p, *v.counterexample));
  const Item x = u.index_of("x");
  EXPECT_EQ(p.prob(x, u.set_of({"a", "x"})), R("2/3"));
  EXPECT_EQ(p.prob(x, u.all()), R("3/8"));

  const StochasticChoice q = testing::load("no_category.json");
  EXPECT_ERROR_CODE(q_from_condition1(q, Partition(3, {ItemSet{0, 1}, ItemSet{2}})), ErrorCode::Condition1Violated);
}

TEST(Population, MixtureIsRepresentedAgain) {
  const StochasticChoice p = testing::load("resolvable_mixture.json");
  const PopulationFit fit = q_from_condition1(p, Partition(3, {ItemSet{0, 1}, ItemSet{2}}));
  EXPECT_EQ(induce_choice(fit.q), p);
}

// Condition 1 holds, yet the conditional choice within {a,b} swings between
// {a,b,c} and {a,b,d} more than any population of resolvable choices allows.
StochasticChoice condition_one_without_population() {
  const Universe u = testing::letters(4);
  const Partition partition(4, {ItemSet{0, 1}, ItemSet{2}, ItemSet{3}});
  return StochasticChoice::from_function(u, [&](Item a, ItemSet menu) {
    const ItemSet ab{0, 1};
    const ItemSet image = partition.image(menu);
    Rational mass;
    switch (image.mask()) {
      case 0b011: mass = a <= 1 ? R("9/10") : R("1/10"); break;
      case 0b101: mass = a <= 1 ? R("9/10") : R("1/10"); break;
      case 0b110: mass = a == 2 ? R("1/2") : R("1/2"); break;
      case 0b111: mass = a <= 1 ? R("1/3") : R("1/3"); break;
      default: mass = 1; break;
    }
    if (a > 1) return mass;
    const ItemSet inside = menu & ab;
    if (inside.size() == 1) return mass;
    Rational share = R("1/2");
    if (menu == ItemSet{0, 1, 2}) share = R("99/100");
    if (menu == ItemSet{0, 1, 3}) share = R("1/100");
    return Rational(mass * (a == 0 ? share : 1 - share));
  });
}

TEST(Population, ConditionOneAloneDoesNotGuaranteeAPopulation) {
  const StochasticChoice p = condition_one_without_population();
  const Partition partition(4, {ItemSet{0, 1}, ItemSet{2}, ItemSet{3}});
  ASSERT_TRUE(p.positive());
  ASSERT_TRUE(check_condition1(p, partition).holds);
  EXPECT_ERROR_CODE(q_from_condition1(p, partition), ErrorCode::NotRepresentable);
  const auto solved = solve_population(p, partition);
  ASSERT_FALSE(solved.ok());
  EXPECT_TRUE(refutes(solved.failure(), p, partition));
  testing::Rng rng(5);
  const StochasticChoice scc = compose(testing::random_decomposition(rng, testing::letters(4), partition));
  EXPECT_FALSE(refutes(solved.failure(), scc, partition));
}

TEST(Population, LinearRouteFindsPopulationsOfRandomMixturesProperty) {
  testing::Rng rng(109);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testing::uniform_int(rng, 3, 4);
    const Partition partition = testing::random_nondegenerate_partition(rng, n);
    const auto choices = enumerate_resolvable(partition);
    PopulationDistribution q{testing::letters(n), partition, {}};
    const auto w = testing::simplex_point(rng, choices.size());
    for (std::size_t k = 0; k < choices.size(); ++k) q.weights.emplace_back(choices[k], w[k]);
    const StochasticChoice p = induce_choice(q);
    EXPECT_TRUE(check_condition1(p, partition).holds);
    const auto solved = solve_population(p, partition);
    ASSERT_TRUE(solved.ok());
    EXPECT_EQ(induce_choice(solved.value()), p);
    EXPECT_EQ(induce_choice(q_from_condition1(p, partition).q), p);
  }
}

}  // namespace
}  // namespace revcat
