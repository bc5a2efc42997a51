#include <gtest/gtest.h>

#include "generators.hpp"
#include "helpers.hpp"
#include "revcat/linear_feasibility.hpp"

namespace revcat {
namespace {

using testing::R;

LinearSystem make(std::size_t variables, const std::vector<std::vector<int>>& rows, const std::vector<Rational>& rhs) {
  LinearSystem s;
  s.variables = variables;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t k = s.add_row(rhs[r]);
    for (std::size_t j = 0; j < variables; ++j) s.rows[k][j] = rows[r][j];
  }
  return s;
}

TEST(LinearFeasibility, FeasibleSimplex) {
  const LinearSystem s = make(3, {{1, 1, 1}, {1, 0, 0}}, {R("1"), R("1/4")});
  const auto result = solve_feasibility(s);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(satisfies(s, result.value()));
  EXPECT_EQ(result.value()[0], R("1/4"));
}

TEST(LinearFeasibility, InfeasibleWithCertificate) {
  // x1 + x2 = 1 and x1 + x2 = 2.
  const LinearSystem s = make(2, {{1, 1}, {1, 1}}, {R("1"), R("2")});
  const auto result = solve_feasibility(s);
  ASSERT_FALSE(result.ok());
  EXPECT_TRUE(certifies_infeasibility(s, result.failure()));
}

TEST(LinearFeasibility, NegativeRightHandSideNeedsNegativeCoefficients) {
  const LinearSystem infeasible = make(2, {{1, 2}}, {R("-1")});
  ASSERT_FALSE(solve_feasibility(infeasible).ok());
  EXPECT_TRUE(certifies_infeasibility(infeasible, solve_feasibility(infeasible).failure()));
  const LinearSystem feasible = make(2, {{1, -2}}, {R("-1")});
  const auto result = solve_feasibility(feasible);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(satisfies(feasible, result.value()));
}

TEST(LinearFeasibility, RedundantAndZeroRows) {
  const LinearSystem s = make(2, {{1, 1}, {2, 2}, {0, 0}}, {R("1"), R("2"), R("0")});
  const auto result = solve_feasibility(s);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(satisfies(s, result.value()));
  const LinearSystem bad = make(2, {{0, 0}}, {R("1")});
  ASSERT_FALSE(solve_feasibility(bad).ok());
}

TEST(LinearFeasibility, DegenerateSystemTerminates) {
  // Highly degenerate: many zero right-hand sides.
  const LinearSystem s = make(6, {{1, 1, 1, 1, 1, 1}, {1, -1, 0, 0, 0, 0}, {0, 1, -1, 0, 0, 0}, {0, 0, 1, -1, 0, 0},
                                  {0, 0, 0, 1, -1, 0}, {0, 0, 0, 0, 1, -1}},
                              {R("1"), R("0"), R("0"), R("0"), R("0"), R("0")});
  const auto result = solve_feasibility(s);
  ASSERT_TRUE(result.ok());
  for (const Rational& x : result.value()) {
    EXPECT_EQ(x, R("1/6"));
  }
}

TEST(LinearFeasibility, EmptySystem) {
  LinearSystem s;
  s.variables = 2;
  const auto result = solve_feasibility(s);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result.value().size(), 2u);
}

TEST(LinearFeasibility, CheckersRejectWrongAnswers) {
  const LinearSystem s = make(2, {{1, 1}}, {R("1")});
  EXPECT_FALSE(satisfies(s, {R("1"), R("1")}));
  EXPECT_FALSE(satisfies(s, {R("2"), R("-1")}));
  EXPECT_FALSE(certifies_infeasibility(s, FarkasCertificate{{R("1")}}));
}

TEST(LinearFeasibility, PlantedSolutionsAreFoundProperty) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t vars = static_cast<std::size_t>(testing::uniform_int(rng, 1, 7));
    const std::size_t rows = static_cast<std::size_t>(testing::uniform_int(rng, 1, 6));
    std::vector<Rational> x(vars);
    for (auto& v : x) v = testing::uniform_int(rng, 0, 2) == 0 ? Rational(0) : testing::small_positive(rng);
    LinearSystem s;
    s.variables = vars;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t k = s.add_row(0);
      Rational b = 0;
      for (std::size_t j = 0; j < vars; ++j) {
        s.rows[k][j] = testing::uniform_int(rng, -3, 3);
        b += s.rows[k][j] * x[j];
      }
      s.rhs[k] = b;
    }
    const auto result = solve_feasibility(s);
    ASSERT_TRUE(result.ok());
    EXPECT_TRUE(satisfies(s, result.value()));
  }
}

TEST(LinearFeasibility, EveryAnswerIsCertifiedProperty) {
  testing::Rng rng(67);
  int infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t vars = static_cast<std::size_t>(testing::uniform_int(rng, 1, 5));
    const std::size_t rows = static_cast<std::size_t>(testing::uniform_int(rng, 1, 5));
    LinearSystem s;
    s.variables = vars;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t k = s.add_row(testing::uniform_int(rng, -4, 4));
      for (std::size_t j = 0; j < vars; ++j) s.rows[k][j] = testing::uniform_int(rng, -2, 2);
    }
    const auto result = solve_feasibility(s);
    if (result.ok()) {
      EXPECT_TRUE(satisfies(s, result.value()));
    } else {
      ++infeasible;
      EXPECT_TRUE(certifies_infeasibility(s, result.failure()));
    }
  }
  EXPECT_GT(infeasible, 0);
}

}  // namespace
}  // namespace revcat
