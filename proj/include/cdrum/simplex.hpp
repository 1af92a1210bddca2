#pragma once

#include <cstddef>
#include <vector>

#include "cdrum/errors.hpp"
#include "cdrum/numeric.hpp"

namespace cdrum {

struct ExactFeasibility {
  bool feasible = false;
  Rational infeasibility;      // phase-one optimum: zero iff feasible
  std::vector<Rational> point; // a feasible point when one exists
};

// Decides feasibility of {x >= 0 : Ax = b} exactly over the rationals with
// a phase-one simplex under Bland's rule. A is given as sparse rows of
// (column, coefficient) pairs.
inline ExactFeasibility exact_cone_feasible(
    std::size_t num_cols, const std::vector<std::vector<std::pair<std::uint32_t, int>>>& rows,
    const std::vector<Rational>& rhs) {
  const std::size_t m = rows.size();
  const std::size_t n = num_cols;
  const std::size_t width = n + m;  // original plus artificial columns

  // dense tableau: m rows by (width + 1), last column is the rhs
  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(width + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = rhs[i] < 0;
    for (const auto& [col, coef] : rows[i]) tab[i][col] = flip ? Rational(-coef) : Rational(coef);
    tab[i][n + i] = 1;
    tab[i][width] = flip ? Rational(-rhs[i]) : rhs[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // phase-one objective row: minimize the sum of artificials. Reduced cost
  // of column j is c_j - sum over rows of the column, with c_j = 1 exactly
  // on artificials.
  std::vector<Rational> obj(width + 1, Rational(0));
  for (std::size_t j = 0; j < width; ++j) {
    Rational colsum(0);
    for (std::size_t i = 0; i < m; ++i) colsum += tab[i][j];
    obj[j] = (j >= n ? Rational(1) : Rational(0)) - colsum;
  }

  while (true) {
    // Bland: entering column is the smallest index with negative reduced cost
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;  // optimal

    std::size_t leave = m;
    Rational best_ratio(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] > 0) {
        Rational ratio = tab[i][width] / tab[i][enter];
        if (leave == m || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw Error("phase-one simplex is unbounded; the system is malformed");

    // pivot on (leave, enter)
    Rational pivot = tab[leave][enter];
    for (auto& v : tab[leave]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      Rational factor = tab[i][enter];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= width; ++j) tab[i][j] -= factor * tab[leave][j];
    }
    Rational ofactor = obj[enter];
    if (ofactor != 0) {
      for (std::size_t j = 0; j < width; ++j) obj[j] -= ofactor * tab[leave][j];
    }
    basis[leave] = enter;
  }

  // phase-one optimum: total mass left on artificial basics
  Rational objvalue(0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) objvalue += tab[i][width];

  ExactFeasibility out;
  out.infeasibility = objvalue;
  out.feasible = objvalue == 0;
  if (out.feasible) {
    out.point.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.point[basis[i]] = tab[i][width];
  }
  return out;
}

}  // namespace cdrum
