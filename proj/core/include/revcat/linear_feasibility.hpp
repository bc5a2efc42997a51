#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "revcat/outcome.hpp"
#include "revcat/rational.hpp"

namespace revcat {

/// The system A x = b, x >= 0, with A stored densely by rows.
struct LinearSystem {
  std::size_t variables = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  /// Appends a zero row with the given right-hand side; returns its index.
  std::size_t add_row(Rational value);
};

/// Farkas multipliers y with y^T A <= 0 componentwise and y^T b > 0, which
/// rules out any x >= 0 with A x = b.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
};

/// Exact two-phase simplex (phase one only) with Bland's rule, so it always
/// terminates. The result is self-checked before it is returned.
Outcome<std::vector<Rational>, FarkasCertificate> solve_feasibility(const LinearSystem& system);

bool satisfies(const LinearSystem& system, const std::vector<Rational>& x);
bool certifies_infeasibility(const LinearSystem& system, const FarkasCertificate& certificate);

}  // namespace revcat
