#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ratio.hpp"

namespace evicomb {

/// Exact feasibility of { x >= 0 : A x <= b } over the rationals.
///
/// Dictionary-form simplex (slack columns implicit, so the tableau is
/// (m + 2) x (n + 2)) with a single artificial variable for phase one.
/// Pivoting uses Bland's rule, which cannot cycle, so the procedure is
/// complete without tolerances.
class FeasibilitySolver {
 public:
  using matrix = std::vector<std::vector<rational>>;

  FeasibilitySolver(const matrix& a, const std::vector<rational>& b)
      : m_(b.size()), n_(a.empty() ? 0 : a.front().size()), basis_(m_), nonbasis_(n_ + 1),
        table_(m_ + 2, std::vector<rational>(n_ + 2)) {
    if (a.size() != m_) throw std::invalid_argument("FeasibilitySolver: row count mismatch");
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_) throw std::invalid_argument("FeasibilitySolver: ragged matrix");
      for (std::size_t j = 0; j < n_; ++j) table_[i][j] = a[i][j];
      basis_[i] = static_cast<long>(n_ + i);
      table_[i][n_] = -1;
      table_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) nonbasis_[j] = static_cast<long>(j);
    nonbasis_[n_] = -1;  // artificial
    table_[m_ + 1][n_] = 1;
  }

  /// Returns a feasible point, or nullopt when the system is infeasible.
  std::optional<std::vector<rational>> solve() {
    std::vector<rational> x(n_);
    if (m_ == 0) return x;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (table_[i][n_ + 1] < table_[r][n_ + 1]) r = i;
    if (table_[r][n_ + 1] < 0) {
      pivot(r, n_);
      run_phase_one();
      if (table_[m_ + 1][n_ + 1] < 0) return std::nullopt;
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) x[basis_[i]] = table_[i][n_ + 1];
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const rational inv = 1 / table_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || table_[i][s] == 0) continue;
      const rational factor = table_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (table_[r][j] != 0) table_[i][j] -= table_[r][j] * factor;
      table_[i][s] = table_[r][s] * factor;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) table_[r][j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) table_[i][s] *= -inv;
    table_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Maximizes -artificial. Bland: smallest-index improving column; ratio ties
  // go to the smallest basic index.
  void run_phase_one() {
    const std::size_t obj = m_ + 1;
    while (true) {
      std::optional<std::size_t> s;
      for (std::size_t j = 0; j <= n_; ++j)
        if (table_[obj][j] < 0 && (!s || nonbasis_[j] < nonbasis_[*s])) s = j;
      if (!s) return;
      std::optional<std::size_t> r;
      rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (table_[i][*s] <= 0) continue;
        rational ratio = table_[i][n_ + 1] / table_[i][*s];
        if (!r || ratio < best || (ratio == best && basis_[i] < basis_[*r])) {
          r = i;
          best = std::move(ratio);
        }
      }
      // The phase-one objective is bounded by zero, so a leaving row exists.
      if (!r) throw std::logic_error("FeasibilitySolver: unbounded phase one");
      pivot(*r, *s);
    }
  }

  std::size_t m_, n_;
  std::vector<long> basis_, nonbasis_;
  matrix table_;
};

inline std::optional<std::vector<rational>> find_feasible_point(const FeasibilitySolver::matrix& a,
                                                                const std::vector<rational>& b) {
  return FeasibilitySolver(a, b).solve();
}

}  // namespace evicomb
