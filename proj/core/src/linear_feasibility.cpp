#include "revcat/linear_feasibility.hpp"

#include <optional>

#include "revcat/error.hpp"

namespace revcat {

std::size_t LinearSystem::add_row(Rational value) {
  rows.emplace_back(variables, Rational(0));
  rhs.push_back(std::move(value));
  return rows.size() - 1;
}

namespace {

void check_shape(const LinearSystem& system) {
  if (system.rows.size() != system.rhs.size()) throw Error(ErrorCode::Internal, "row count differs from rhs size");
  for (const auto& row : system.rows) {
    if (row.size() != system.variables) throw Error(ErrorCode::Internal, "row width differs from variable count");
  }
}

// Tableau for min 1^T s subject to A x + s = b (rows flipped so b >= 0).
// Columns: structural variables, then one artificial per row, then b.
class PhaseOne {
 public:
  explicit PhaseOne(const LinearSystem& system)
      : m_(system.rows.size()), n_(system.variables), width_(n_ + m_), flipped_(m_, false), basis_(m_) {
    tableau_.assign(m_, std::vector<Rational>(width_ + 1, Rational(0)));
    cost_.assign(width_ + 1, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      flipped_[i] = sgn(system.rhs[i]) < 0;
      auto& row = tableau_[i];
      for (std::size_t j = 0; j < n_; ++j) row[j] = flipped_[i] ? Rational(-system.rows[i][j]) : system.rows[i][j];
      row[n_ + i] = 1;
      row[width_] = flipped_[i] ? Rational(-system.rhs[i]) : system.rhs[i];
      basis_[i] = n_ + i;
    }
    // Reduced costs: artificial costs are 1, so subtract every row once.
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cost_[j] -= tableau_[i][j];
      cost_[width_] -= tableau_[i][width_];
    }
  }

  void run() {
    while (auto entering = choose_entering()) {
      const std::optional<std::size_t> leaving = choose_leaving(*entering);
      if (!leaving) throw Error(ErrorCode::Internal, "phase one is bounded below; unbounded ray is impossible");
      pivot(*leaving, *entering);
    }
  }

  /// Optimal phase-one value (sum of artificials).
  Rational objective() const { return -cost_[width_]; }

  std::vector<Rational> primal() const {
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = tableau_[i][width_];
    }
    return x;
  }

  /// Duals of the phase-one optimum, y_i = 1 - reduced cost of artificial i,
  /// mapped back through the row flips.
  std::vector<Rational> duals() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      y[i] = 1 - cost_[n_ + i];
      if (flipped_[i]) y[i] = -y[i];
    }
    return y;
  }

 private:
  std::optional<std::size_t> choose_entering() const {
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(cost_[j]) < 0) return j;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> choose_leaving(std::size_t column) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& a = tableau_[i][column];
      if (sgn(a) <= 0) continue;
      Rational ratio = tableau_[i][width_] / a;
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t column) {
    auto& pivot_row = tableau_[r];
    const Rational inverse = 1 / pivot_row[column];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j <= width_; ++j) {
      if (sgn(pivot_row[j]) == 0) continue;
      pivot_row[j] *= inverse;
      support.push_back(j);
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[column]) == 0) return;
      const Rational factor = row[column];
      for (std::size_t j : support) row[j] -= factor * pivot_row[j];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(tableau_[i]);
    }
    eliminate(cost_);
    basis_[r] = column;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<bool> flipped_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<Rational> cost_;
};

}  // namespace

bool satisfies(const LinearSystem& system, const std::vector<Rational>& x) {
  check_shape(system);
  if (x.size() != system.variables) return false;
  for (const Rational& v : x) {
    if (sgn(v) < 0) return false;
  }
  for (std::size_t i = 0; i < system.rows.size(); ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < system.variables; ++j) {
      if (sgn(system.rows[i][j]) != 0 && sgn(x[j]) != 0) lhs += system.rows[i][j] * x[j];
    }
    if (lhs != system.rhs[i]) return false;
  }
  return true;
}

bool certifies_infeasibility(const LinearSystem& system, const FarkasCertificate& certificate) {
  check_shape(system);
  const auto& y = certificate.multipliers;
  if (y.size() != system.rows.size()) return false;
  for (std::size_t j = 0; j < system.variables; ++j) {
    Rational column = 0;
    for (std::size_t i = 0; i < system.rows.size(); ++i) {
      if (sgn(y[i]) != 0 && sgn(system.rows[i][j]) != 0) column += y[i] * system.rows[i][j];
    }
    if (sgn(column) > 0) return false;
  }
  Rational value = 0;
  for (std::size_t i = 0; i < system.rows.size(); ++i) value += y[i] * system.rhs[i];
  return sgn(value) > 0;
}

Outcome<std::vector<Rational>, FarkasCertificate> solve_feasibility(const LinearSystem& system) {
  check_shape(system);
  PhaseOne phase(system);
  phase.run();
  if (sgn(phase.objective()) == 0) {
    std::vector<Rational> x = phase.primal();
    if (!satisfies(system, x)) throw Error(ErrorCode::Internal, "simplex returned a point outside the system");
    return x;
  }
  FarkasCertificate certificate{phase.duals()};
  if (!certifies_infeasibility(system, certificate)) {
    throw Error(ErrorCode::Internal, "simplex duals do not certify infeasibility");
  }
  return certificate;
}

}  // namespace revcat
