#pragma once

#include <exception>
#include <string>
#include <vector>

#include "cdrum/axioms.hpp"
#include "cdrum/mobius.hpp"

namespace cdrum {

// Residual cutoff for the float-mode path extraction; prevents spinning on
// rounding dust. Exact mode extracts down to literal zero.
inline constexpr double kResidualEps = 1e-12;

template <class Num>
struct PrefDist {
  std::vector<Num> weight;  // indexed by linear-order rank, n! entries

  static PrefDist uniform(int n) {
    const OrderSpace& space = OrderSpace::get(n);
    PrefDist d;
    d.weight.assign(space.count(), NumTraits<Num>::one() / Num(static_cast<long>(space.count())));
    return d;
  }

  static PrefDist point(int n, std::size_t rank) {
    PrefDist d;
    d.weight.assign(OrderSpace::get(n).count(), NumTraits<Num>::zero());
    d.weight[rank] = NumTraits<Num>::one();
    return d;
  }

  Num total() const {
    Num t = NumTraits<Num>::zero();
    for (const Num& w : weight) t += w;
    return t;
  }

  // Mass on I(x, menu): orders choosing x from menu but from no proper
  // superset. Each order lands in exactly one cell per alternative, so the
  // table below is a partition of the weights.
  std::vector<Num> icell_mass_table(const OrderSpace& space) const {
    const int n = space.n();
    const Mask full = (Mask(1) << n) - 1;
    std::vector<Num> table(static_cast<std::size_t>(n) * (full + 1), NumTraits<Num>::zero());
    for (std::size_t r = 0; r < weight.size(); ++r) {
      if (weight[r] == NumTraits<Num>::zero()) continue;
      for (int x = 0; x < n; ++x)
        table[static_cast<std::size_t>(x) * (full + 1) + space.icell(r, x)] += weight[r];
    }
    return table;
  }

  Num mass_on_upper(const OrderSpace& space, int x, Mask menu) const {
    Num t = NumTraits<Num>::zero();
    for (std::size_t r = 0; r < weight.size(); ++r)
      if (space.top(r, menu) == x) t += weight[r];
    return t;
  }
};

// Lattice graph for one (possibly null) history: a node per subset of X, an
// edge B -> B\{y} carrying the Mobius coefficient of (history, y, B).
template <class Num>
struct FlowGraph {
  Universe u;
  Cell history;                // empty cell for the null history
  std::vector<Num> capacity;   // [menu * n + y], y in menu

  Num cap(Mask menu, int y) const { return capacity[std::size_t(menu) * u.size() + y]; }
  Num& cap(Mask menu, int y) { return capacity[std::size_t(menu) * u.size() + y]; }
};

// Builds the graph for `history` from the depth-(tau+1) truncated Mobius
// table; for the null history pass the depth-1 table and an empty cell.
template <class Num>
FlowGraph<Num> build_flow_graph(const MobiusTable<Num>& q_next, const Cell& history) {
  FlowGraph<Num> g;
  g.u = q_next.u;
  g.history = history;
  const int n = g.u.size();
  const Mask full = g.u.full_mask();
  g.capacity.assign((std::size_t(full) + 1) * n, NumTraits<Num>::zero());
  for (Mask menu = 1; menu <= full; ++menu) {
    for (int y = 0; y < n; ++y) {
      if (!contains(menu, y)) continue;
      g.cap(menu, y) = q_next.at(history.extended(menu, y));
    }
  }
  return g;
}

// Path-flow decomposition. If the graph carries no outflow at X the result
// is the uniform distribution; otherwise capacities are normalized by the
// total outflow at X and strictly positive X-to-empty paths are extracted
// until every residual is zero. Ties pick the edge removing the canonically
// smallest alternative, which makes the output reproducible byte-for-byte.
template <class Num>
PrefDist<Num> decompose(const FlowGraph<Num>& graph, const Tolerance<Num>& tol) {
  const int n = graph.u.size();
  const Mask full = graph.u.full_mask();
  const OrderSpace& space = OrderSpace::get(n);

  const Num residual_eps = NumTraits<Num>::exact ? NumTraits<Num>::zero() : Num(kResidualEps);

  std::vector<Num> cap = graph.capacity;
  for (Mask menu = 1; menu <= full; ++menu) {
    for (int y = 0; y < n; ++y) {
      if (!contains(menu, y)) continue;
      Num& c = cap[std::size_t(menu) * n + y];
      if (!tol.nonnegative(c))
        throw NegativeCapacityError(graph.u.format_menu(menu) + " removing " + graph.u.label(y) +
                                    " capacity " + format_number(c));
      if (c < NumTraits<Num>::zero()) c = NumTraits<Num>::zero();
    }
  }

  // interior conservation: inflow at S equals outflow at S
  for (Mask s = 1; s < full; ++s) {
    Num inflow = NumTraits<Num>::zero();
    Num outflow = NumTraits<Num>::zero();
    for (int z = 0; z < n; ++z) {
      if (contains(s, z))
        outflow += cap[std::size_t(s) * n + z];
      else
        inflow += cap[std::size_t(s | (Mask(1) << z)) * n + z];
    }
    if (!tol.equal(inflow, outflow))
      throw ConservationViolatedError(graph.u.format_menu(s) + " inflow " + format_number(inflow) +
                                      " outflow " + format_number(outflow));
  }

  Num top_outflow = NumTraits<Num>::zero();
  for (int y = 0; y < n; ++y) top_outflow += cap[std::size_t(full) * n + y];
  if (tol.is_zero(top_outflow)) return PrefDist<Num>::uniform(n);

  for (Mask menu = 1; menu <= full; ++menu)
    for (int y = 0; y < n; ++y)
      if (contains(menu, y)) cap[std::size_t(menu) * n + y] /= top_outflow;

  PrefDist<Num> nu;
  nu.weight.assign(space.count(), NumTraits<Num>::zero());

  const std::size_t edge_count = std::size_t(n) << (n - 1);
  std::size_t guard = 0;
  while (true) {
    // start an X-to-empty path while the top node still has outflow
    int start = -1;
    for (int y = 0; y < n; ++y) {
      if (cap[std::size_t(full) * n + y] > residual_eps) {
        start = y;
        break;
      }
    }
    if (start < 0) break;
    if (++guard > edge_count + 1)
      throw ConservationViolatedError("path extraction exceeded the edge budget");

    Order removal;
    Mask node = full;
    Num path_min = cap[std::size_t(full) * n + start];
    while (node != 0) {
      int pick = -1;
      for (int y = 0; y < n; ++y) {
        if (contains(node, y) && cap[std::size_t(node) * n + y] > residual_eps) {
          pick = y;
          break;
        }
      }
      if (pick < 0) {
        // rounding dust can leave every edge at or below the cutoff even
        // though conservation guarantees a continuation; take the largest
        // strictly positive edge so the path can finish
        Num best = NumTraits<Num>::zero();
        for (int y = 0; y < n; ++y) {
          if (contains(node, y) && cap[std::size_t(node) * n + y] > best) {
            best = cap[std::size_t(node) * n + y];
            pick = y;
          }
        }
      }
      if (pick < 0)
        throw ConservationViolatedError("no positive edge leaving " + graph.u.format_menu(node));
      if (cap[std::size_t(node) * n + pick] < path_min) path_min = cap[std::size_t(node) * n + pick];
      removal.push_back(static_cast<std::uint8_t>(pick));
      node &= ~(Mask(1) << pick);
    }
    node = full;
    for (std::uint8_t y : removal) {
      cap[std::size_t(node) * n + y] -= path_min;
      node &= ~(Mask(1) << y);
    }
    nu.weight[space.rank_of(removal)] += path_min;
  }

  if constexpr (!NumTraits<Num>::exact) {
    Num total = nu.total();
    if (total > 0)
      for (Num& w : nu.weight) w /= total;
  }
  return nu;
}

// Transition kernel of one degree: distributions over next-period orders
// keyed by (choice history, I-cell signature). The I-cell signature is
// stored as the menu history it corresponds to. State independent kernels
// may also be keyed by the choice history alone (empty menu sequence).
template <class Num>
struct TransitionFunction {
  int degree = 1;
  bool state_independent = false;
  std::map<Cell, PrefDist<Num>> kernel;

  const PrefDist<Num>* find(const Cell& history) const {
    auto it = kernel.find(history);
    if (it != kernel.end()) return &it->second;
    if (state_independent) {
      Cell wildcard{MenuSeq{}, history.choices};
      it = kernel.find(wildcard);
      if (it != kernel.end()) return &it->second;
    }
    return nullptr;
  }
};

template <class Num>
struct CdrumRepresentation {
  Universe u;
  PrefDist<Num> nu;
  std::vector<TransitionFunction<Num>> transitions;  // degrees 1..T-1

  int periods() const { return static_cast<int>(transitions.size()) + 1; }
};

// Forward evaluation of the representation into a rule on `domain`. Exact
// in rational mode. Kernels missing from the map (histories that carry no
// mass) evaluate as the uniform distribution.
template <class Num>
JointRule<Num> evaluate_representation(const CdrumRepresentation<Num>& rep,
                                       const ObservationDomain& domain) {
  const Universe& u = rep.u;
  const int n = u.size();
  const Mask full = u.full_mask();
  const OrderSpace& space = OrderSpace::get(n);

  // cache I-cell mass tables per distinct kernel distribution
  std::vector<Num> nu_mass = rep.nu.icell_mass_table(space);
  std::map<const PrefDist<Num>*, std::vector<Num>> kernel_mass;
  auto mass_table = [&](const PrefDist<Num>* d) -> const std::vector<Num>& {
    auto it = kernel_mass.find(d);
    if (it == kernel_mass.end()) it = kernel_mass.emplace(d, d->icell_mass_table(space)).first;
    return it->second;
  };
  PrefDist<Num> uniform = PrefDist<Num>::uniform(n);

  JointRule<Num> p;
  p.u = u;
  p.periods = domain.periods;
  p.domain = domain;

  for (const MenuSeq& menus : domain.observed) {
    for (const ChoiceSeq& choices : choice_sequences(menus)) {
      Cell cell{menus, choices};
      // sum over I-cell signatures C_t >= A_t; the running product tracks
      // nu(I(x1,C1)) * prod t(history)(I(x_t,C_t))
      Num value = NumTraits<Num>::zero();
      std::vector<Mask> signature(menus.periods());
      auto recurse = [&](auto&& self, std::size_t t, Num acc) -> void {
        if (t == menus.periods()) {
          value += acc;
          return;
        }
        int x = choices.choices[t];
        for (Mask c = 1; c <= full; ++c) {
          if (!subset_of(menus.menus[t], c)) continue;
          Num mass;
          if (t == 0) {
            mass = nu_mass[std::size_t(x) * (full + 1) + c];
          } else {
            Cell hist;
            hist.menus.menus.assign(signature.begin(), signature.begin() + t);
            hist.choices.choices.assign(choices.choices.begin(), choices.choices.begin() + t);
            const PrefDist<Num>* d = rep.transitions[t - 1].find(hist);
            if (!d) d = &uniform;
            mass = mass_table(d)[std::size_t(x) * (full + 1) + c];
          }
          if (mass == NumTraits<Num>::zero()) continue;
          signature[t] = c;
          self(self, t + 1, Num(acc * mass));
        }
      };
      recurse(recurse, 0, NumTraits<Num>::one());
      if (!(value == NumTraits<Num>::zero())) p.prob[cell] = value;
    }
  }
  return p;
}

// Recovers the canonical representation: nu from the null-history graph and
// one kernel entry per (choice history, I-cell signature) from that
// history's graph. When choice set independence holds the kernels are
// collapsed across signatures sharing a choice history and flagged state
// independent.
template <class Num>
CdrumRepresentation<Num> recover_representation(const JointRule<Num>& p,
                                                const Tolerance<Num>& tol) {
  ModelVerdict verdict = check_cdrum(p, tol);
  if (!verdict.holds) {
    std::string why;
    for (const auto& r : verdict.reports)
      if (!r.holds) why += r.axiom + (r.witnesses.empty() ? "" : " at " + r.witnesses[0].site) + "; ";
    throw NotCdrumError(why);
  }
  bool state_independent = check_choice_set_independence(p, tol).holds;

  std::vector<MobiusTable<Num>> tables;  // depth 1..T
  for (int depth = 1; depth <= p.periods; ++depth)
    tables.push_back(truncated_mobius_unchecked(p, depth));

  CdrumRepresentation<Num> rep;
  rep.u = p.u;
  rep.nu = decompose(build_flow_graph(tables[0], Cell{}), tol);
  for (int tau = 1; tau < p.periods; ++tau) {
    TransitionFunction<Num> t;
    t.degree = tau;
    t.state_independent = state_independent;
    const MobiusTable<Num>& q_next = tables[static_cast<std::size_t>(tau)];
    const MobiusTable<Num>& q_here = tables[static_cast<std::size_t>(tau) - 1];
    if (state_independent) {
      // one decomposition per choice history, taken from the canonically
      // first menu history with positive mass (all agree by the strong
      // independence property); stored once under the wildcard signature
      for (const Cell& hist : all_histories(p.u, tau)) {
        Cell wildcard{MenuSeq{}, hist.choices};
        if (t.kernel.count(wildcard)) continue;
        if (tol.positive(q_here.at(hist)))
          t.kernel.emplace(wildcard, decompose(build_flow_graph(q_next, hist), tol));
      }
    } else {
      // graphs for distinct histories are independent; decompose in parallel
      std::vector<Cell> hists = all_histories(p.u, tau);
      std::vector<PrefDist<Num>> dists(hists.size());
      std::exception_ptr failure = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(hists.size()); ++i) {
        try {
          dists[static_cast<std::size_t>(i)] =
              decompose(build_flow_graph(q_next, hists[static_cast<std::size_t>(i)]), tol);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
      for (std::size_t i = 0; i < hists.size(); ++i)
        t.kernel.emplace(hists[i], std::move(dists[i]));
    }
    rep.transitions.push_back(std::move(t));
  }
  return rep;
}

// Sup-norm gap between the data's Mobius table and the one implied by the
// representation, cell by cell over the full lattice. Zero certifies the
// representation.
template <class Num>
Num verify_representation(const CdrumRepresentation<Num>& rep, const JointRule<Num>& p) {
  const Universe& u = p.u;
  const int n = u.size();
  const Mask full = u.full_mask();
  const OrderSpace& space = OrderSpace::get(n);
  MobiusTable<Num> q = mobius_inverse(p);

  std::vector<Num> nu_mass = rep.nu.icell_mass_table(space);
  std::map<const PrefDist<Num>*, std::vector<Num>> kernel_mass;
  auto mass_table = [&](const PrefDist<Num>* d) -> const std::vector<Num>& {
    auto it = kernel_mass.find(d);
    if (it == kernel_mass.end()) it = kernel_mass.emplace(d, d->icell_mass_table(space)).first;
    return it->second;
  };
  PrefDist<Num> uniform = PrefDist<Num>::uniform(n);

  Num worst = NumTraits<Num>::zero();
  for (const Cell& cell : full_lattice_cells(u, p.periods)) {
    Num implied =
        nu_mass[std::size_t(cell.choices.choices[0]) * (full + 1) + cell.menus.menus[0]];
    for (std::size_t t = 1; t < cell.periods() && !(implied == NumTraits<Num>::zero()); ++t) {
      Cell hist = cell.prefix(t);
      const PrefDist<Num>* d = rep.transitions[t - 1].find(hist);
      if (!d) d = &uniform;
      implied *= mass_table(d)[std::size_t(cell.choices.choices[t]) * (full + 1) +
                               cell.menus.menus[t]];
    }
    Num gap = abs_value(q.at(cell) - implied);
    if (gap > worst) worst = gap;
  }
  return worst;
}

}  // namespace cdrum
