#pragma once

#include <vector>

#include "cdrum/core.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cdrum {

enum class Exec { Serial, Parallel };

// Signed Mobius coefficients over the product menu lattice at a fixed depth.
// Defined on the full lattice regardless of which menus were observed.
template <class Num>
struct MobiusTable {
  Universe u;
  int depth = 0;
  std::map<Cell, Num> value;

  Num at(const Cell& cell) const {
    auto it = value.find(cell);
    return it == value.end() ? NumTraits<Num>::zero() : it->second;
  }
};

namespace detail {

// q(x, A) = sum over componentwise supersets A' of A of
// (-1)^(sum |A'_i \ A_i|) p(x, A'). One cell, independent of all others.
template <class Num>
Num mobius_cell(const JointRule<Num>& p, const Cell& cell,
                const std::vector<std::vector<Mask>>& supersets) {
  const std::size_t periods = cell.periods();
  Num total = NumTraits<Num>::zero();
  std::vector<std::size_t> idx(periods, 0);
  Cell probe = cell;
  while (true) {
    int extra = 0;
    for (std::size_t t = 0; t < periods; ++t) {
      Mask sup = supersets[cell.menus.menus[t]][idx[t]];
      probe.menus.menus[t] = sup;
      extra += popcount(sup) - popcount(cell.menus.menus[t]);
    }
    Num term = p.at(probe);
    if ((extra & 1) == 0)
      total += term;
    else
      total -= term;
    int t = static_cast<int>(periods) - 1;
    while (t >= 0) {
      auto tt = static_cast<std::size_t>(t);
      if (++idx[tt] < supersets[cell.menus.menus[tt]].size()) break;
      idx[tt] = 0;
      --t;
    }
    if (t < 0) break;
  }
  return total;
}

inline std::vector<std::vector<Mask>> superset_lists(int n) {
  Mask full = (Mask(1) << n) - 1;
  std::vector<std::vector<Mask>> lists(full + 1);
  for (Mask m = 1; m <= full; ++m) lists[m] = supersets_of(m, n);
  return lists;
}

}  // namespace detail

// Full-lattice cell list at the rule's depth, canonical order.
inline std::vector<Cell> full_lattice_cells(const Universe& u, int depth) {
  return all_histories(u, depth);
}

// Mobius inverse of a full-domain rule at its own depth. The parallel path
// computes cells concurrently; results are identical to the serial path.
template <class Num>
MobiusTable<Num> mobius_inverse(const JointRule<Num>& p, Exec exec = Exec::Parallel) {
  for (const MenuSeq& m : all_menu_sequences(p.u.size(), p.periods)) {
    if (!p.domain.contains_seq(m)) throw DomainIncompleteError(format_menu_seq(p.u, m));
  }
  MobiusTable<Num> q;
  q.u = p.u;
  q.depth = p.periods;
  auto supersets = detail::superset_lists(p.u.size());
  std::vector<Cell> cells = full_lattice_cells(p.u, p.periods);
  std::vector<Num> values(cells.size());
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i)
      values[static_cast<std::size_t>(i)] =
          detail::mobius_cell(p, cells[static_cast<std::size_t>(i)], supersets);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i)
      values[i] = detail::mobius_cell(p, cells[i], supersets);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) q.value.emplace(cells[i], std::move(values[i]));
  return q;
}

// p(x, A) = sum over supersets A' of A of q(x, A'). Exact inverse of
// mobius_inverse on the full lattice.
template <class Num>
JointRule<Num> mobius_reconstruct(const MobiusTable<Num>& q, Exec exec = Exec::Parallel) {
  JointRule<Num> p;
  p.u = q.u;
  p.periods = q.depth;
  p.domain = full_domain(q.u, q.depth);
  auto superset_masks = detail::superset_lists(q.u.size());
  std::vector<Cell> cells = full_lattice_cells(q.u, q.depth);
  std::vector<Num> values(cells.size());
  auto reconstruct_cell = [&](const Cell& cell) {
    Num total = NumTraits<Num>::zero();
    std::vector<std::size_t> idx(cell.periods(), 0);
    Cell probe = cell;
    while (true) {
      for (std::size_t t = 0; t < cell.periods(); ++t)
        probe.menus.menus[t] = superset_masks[cell.menus.menus[t]][idx[t]];
      total += q.at(probe);
      int t = static_cast<int>(cell.periods()) - 1;
      while (t >= 0) {
        auto tt = static_cast<std::size_t>(t);
        if (++idx[tt] < superset_masks[cell.menus.menus[tt]].size()) break;
        idx[tt] = 0;
        --t;
      }
      if (t < 0) break;
    }
    return total;
  };
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i)
      values[static_cast<std::size_t>(i)] = reconstruct_cell(cells[static_cast<std::size_t>(i)]);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) values[i] = reconstruct_cell(cells[i]);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!(values[i] == NumTraits<Num>::zero())) p.prob.emplace(cells[i], std::move(values[i]));
  }
  return p;
}

// Mobius inverse of the depth-tau marginal rule. Computed from the marginal,
// never by summing the depth-T table; the two agree when marginality holds
// (cross-check property).
template <class Num>
MobiusTable<Num> truncated_mobius(const JointRule<Num>& p, int tau, const Tolerance<Num>& tol,
                                  Exec exec = Exec::Parallel) {
  auto scan = scan_marginality(p, tol);
  if (!scan.holds) throw MarginalityViolatedError(scan.witness);
  return mobius_inverse(marginal_rule(p, tau), exec);
}

// Variant used while computing objects whose whole point is to test
// marginality afterwards: marginalizes by canonical completion, no check.
template <class Num>
MobiusTable<Num> truncated_mobius_unchecked(const JointRule<Num>& p, int tau,
                                            Exec exec = Exec::Parallel) {
  return mobius_inverse(marginal_rule(p, tau), exec);
}

}  // namespace cdrum
