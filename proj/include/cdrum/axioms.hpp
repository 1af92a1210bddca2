#pragma once

#include <string>
#include <vector>

#include "cdrum/mobius.hpp"

namespace cdrum {

struct Witness {
  std::string site;
  std::string lhs;
  std::string rhs;
};

// Verdict for one axiom. On failure, `witnesses` holds the lexicographically
// first violation in canonical cell order; `violation_count` counts them all.
struct AxiomReport {
  std::string axiom;
  bool holds = true;
  std::vector<Witness> witnesses;
  std::size_t violation_count = 0;
  double tolerance = 0.0;

  void record(std::string site, std::string lhs, std::string rhs) {
    if (holds) witnesses.push_back(Witness{std::move(site), std::move(lhs), std::move(rhs)});
    holds = false;
    ++violation_count;
  }
};

// q >= 0 everywhere on the full product lattice.
template <class Num>
AxiomReport check_complete_monotonicity(const MobiusTable<Num>& q, const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "complete_monotonicity";
  report.tolerance = to_double(tol.eps);
  for (const auto& [cell, value] : q.value) {
    if (!tol.nonnegative(value))
      report.record(format_cell(q.u, cell), format_number(value), "0");
  }
  return report;
}

// Earlier-period choice frequencies do not depend on later menus, at every
// truncation depth.
template <class Num>
AxiomReport check_marginality(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "marginality";
  report.tolerance = to_double(tol.eps);
  auto scan = scan_marginality(p, tol);
  if (!scan.holds) {
    report.holds = false;
    report.violation_count = scan.violations;
    report.witnesses.push_back(Witness{scan.witness, format_number(scan.worst), "0"});
  }
  return report;
}

// Mobius-side restatement of marginality: at every depth, for every history
// and nonempty proper B, the mass entering B equals the mass leaving the
// one-element extensions of B. Agrees with check_marginality on every rule.
template <class Num>
AxiomReport check_recursivity(const std::vector<MobiusTable<Num>>& tables,
                              const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "recursivity";
  report.tolerance = to_double(tol.eps);
  for (const MobiusTable<Num>& q : tables) {
    if (q.depth < 2) continue;
    const Universe& u = q.u;
    const int n = u.size();
    const Mask full = u.full_mask();
    for (const Cell& hist : all_histories(u, q.depth - 1)) {
      for (Mask B : all_menus(n)) {
        if (B == full) continue;
        Num lhs = NumTraits<Num>::zero();
        for (int y = 0; y < n; ++y)
          if (contains(B, y)) lhs += q.at(hist.extended(B, y));
        Num rhs = NumTraits<Num>::zero();
        for (int z = 0; z < n; ++z)
          if (!contains(B, z)) rhs += q.at(hist.extended(B | (Mask(1) << z), z));
        if (!tol.equal(lhs, rhs))
          report.record(format_cell(u, hist) + " B=" + u.format_menu(B), format_number(lhs),
                        format_number(rhs));
      }
    }
  }
  return report;
}

// Convenience: builds the truncated tables by canonical completion, then
// checks the recursivity identities.
template <class Num>
AxiomReport check_recursivity(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  std::vector<MobiusTable<Num>> tables;
  for (int depth = 2; depth <= p.periods; ++depth)
    tables.push_back(truncated_mobius_unchecked(p, depth));
  return check_recursivity(tables, tol);
}

// Across-period increasing differences on nested menu pairs (two-period
// form; for longer rules it is applied to the depth-2 marginal).
template <class Num>
AxiomReport check_increasing_differences(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "increasing_differences";
  report.tolerance = to_double(tol.eps);
  const JointRule<Num> rule = p.periods == 2 ? p : marginal_rule(p, 2);
  const Universe& u = rule.u;
  const int n = u.size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (Mask A : all_menus(n)) {
        if (!contains(A, x)) continue;
        for (Mask A2 : supersets_of(A, n)) {
          for (Mask B : all_menus(n)) {
            if (!contains(B, y)) continue;
            for (Mask B2 : supersets_of(B, n)) {
              if (A == A2 && B == B2) continue;
              Num lhs = rule.at(Cell{MenuSeq{{A, B}}, ChoiceSeq{{(std::uint8_t)x, (std::uint8_t)y}}}) -
                        rule.at(Cell{MenuSeq{{A, B2}}, ChoiceSeq{{(std::uint8_t)x, (std::uint8_t)y}}});
              Num rhs = rule.at(Cell{MenuSeq{{A2, B}}, ChoiceSeq{{(std::uint8_t)x, (std::uint8_t)y}}}) -
                        rule.at(Cell{MenuSeq{{A2, B2}}, ChoiceSeq{{(std::uint8_t)x, (std::uint8_t)y}}});
              if (!tol.leq(rhs, lhs))
                report.record("(" + u.label(x) + "," + u.label(y) + ";" + u.format_menu(A) + "," +
                                  u.format_menu(A2) + "," + u.format_menu(B) + "," +
                                  u.format_menu(B2) + ")",
                              format_number(lhs), format_number(rhs));
            }
          }
        }
      }
    }
  }
  return report;
}

// p never increases when menus grow componentwise.
template <class Num>
AxiomReport check_regularity(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "regularity";
  report.tolerance = to_double(tol.eps);
  const int n = p.u.size();
  for (const Cell& cell : full_lattice_cells(p.u, p.periods)) {
    const Num value = p.at(cell);
    // compare against every componentwise superset sequence
    std::vector<std::size_t> idx(cell.periods(), 0);
    std::vector<std::vector<Mask>> sup(cell.periods());
    for (std::size_t t = 0; t < cell.periods(); ++t) sup[t] = supersets_of(cell.menus.menus[t], n);
    Cell probe = cell;
    while (true) {
      bool same = true;
      for (std::size_t t = 0; t < cell.periods(); ++t) {
        probe.menus.menus[t] = sup[t][idx[t]];
        same = same && probe.menus.menus[t] == cell.menus.menus[t];
      }
      if (!same) {
        Num larger = p.at(probe);
        if (!tol.leq(larger, value))
          report.record(format_cell(p.u, cell) + " vs " + format_menu_seq(p.u, probe.menus),
                        format_number(value), format_number(larger));
      }
      int t = static_cast<int>(cell.periods()) - 1;
      while (t >= 0) {
        auto tt = static_cast<std::size_t>(t);
        if (++idx[tt] < sup[tt].size()) break;
        idx[tt] = 0;
        --t;
      }
      if (t < 0) break;
    }
  }
  return report;
}

// Conditional on the same choice history, next-period frequencies do not
// depend on earlier menus. Compared in cross-multiplied form to avoid
// dividing by small history probabilities; histories below tolerance are
// treated as zero probability and skipped.
template <class Num>
AxiomReport check_choice_set_independence(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  AxiomReport report;
  report.axiom = "choice_set_independence";
  report.tolerance = to_double(tol.eps);
  const Universe& u = p.u;
  const int n = u.size();
  std::vector<JointRule<Num>> levels(static_cast<std::size_t>(p.periods));
  levels[static_cast<std::size_t>(p.periods) - 1] = p;
  for (int t = p.periods - 1; t >= 1; --t)
    levels[static_cast<std::size_t>(t) - 1] = marginal_step(levels[static_cast<std::size_t>(t)]);

  for (int tau = 1; tau < p.periods; ++tau) {
    const JointRule<Num>& head = levels[static_cast<std::size_t>(tau) - 1];
    const JointRule<Num>& next = levels[static_cast<std::size_t>(tau)];
    // group histories by their choice sequence
    std::map<ChoiceSeq, std::vector<Cell>> groups;
    for (const Cell& hist : all_histories(u, tau)) {
      if (tol.positive(head.at(hist))) groups[hist.choices].push_back(hist);
    }
    for (const auto& [choices, hists] : groups) {
      for (std::size_t i = 0; i < hists.size(); ++i) {
        for (std::size_t j = i + 1; j < hists.size(); ++j) {
          Num pi = head.at(hists[i]);
          Num pj = head.at(hists[j]);
          for (Mask B : all_menus(n)) {
            for (int y = 0; y < n; ++y) {
              if (!contains(B, y)) continue;
              Num lhs = next.at(hists[i].extended(B, y)) * pj;
              Num rhs = next.at(hists[j].extended(B, y)) * pi;
              if (!tol.equal(lhs, rhs))
                report.record(format_cell(u, hists[i]) + " vs " + format_cell(u, hists[j]) +
                                  " at (" + u.label(y) + ";" + u.format_menu(B) + ")",
                              format_number(lhs), format_number(rhs));
            }
          }
        }
      }
    }
  }
  return report;
}

// Composite verdicts.
struct ModelVerdict {
  bool holds = true;
  std::vector<AxiomReport> reports;

  const AxiomReport* report(const std::string& axiom) const {
    for (const auto& r : reports)
      if (r.axiom == axiom) return &r;
    return nullptr;
  }
};

template <class Num>
ModelVerdict check_cdrum(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  ModelVerdict verdict;
  verdict.reports.push_back(check_complete_monotonicity(mobius_inverse(p), tol));
  verdict.reports.push_back(check_marginality(p, tol));
  for (const auto& r : verdict.reports) verdict.holds = verdict.holds && r.holds;
  return verdict;
}

template <class Num>
ModelVerdict check_si_cdrum(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  ModelVerdict verdict = check_cdrum(p, tol);
  verdict.reports.push_back(check_choice_set_independence(p, tol));
  verdict.holds = verdict.holds && verdict.reports.back().holds;
  return verdict;
}

}  // namespace cdrum
