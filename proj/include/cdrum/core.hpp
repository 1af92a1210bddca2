#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdrum/numeric.hpp"
#include "cdrum/universe.hpp"

namespace cdrum {

// A product of per-period menus A_1 x ... x A_T.
struct MenuSeq {
  std::vector<Mask> menus;

  std::size_t periods() const { return menus.size(); }
};

inline bool operator==(const MenuSeq& a, const MenuSeq& b) { return a.menus == b.menus; }

inline bool operator<(const MenuSeq& a, const MenuSeq& b) {
  if (a.menus.size() != b.menus.size()) return a.menus.size() < b.menus.size();
  for (std::size_t i = 0; i < a.menus.size(); ++i) {
    if (a.menus[i] != b.menus[i]) return canonical_mask_less(a.menus[i], b.menus[i]);
  }
  return false;
}

// Per-period choices x_1, ..., x_T stored as alternative indices.
struct ChoiceSeq {
  std::vector<std::uint8_t> choices;

  std::size_t periods() const { return choices.size(); }
};

inline bool operator==(const ChoiceSeq& a, const ChoiceSeq& b) { return a.choices == b.choices; }

inline bool operator<(const ChoiceSeq& a, const ChoiceSeq& b) {
  return a.choices < b.choices;
}

// One table cell: a menu sequence together with a compatible choice sequence.
// Also used for (possibly partial) histories of length tau < T.
struct Cell {
  MenuSeq menus;
  ChoiceSeq choices;

  std::size_t periods() const { return menus.periods(); }

  Cell extended(Mask menu, int choice) const {
    Cell out = *this;
    out.menus.menus.push_back(menu);
    out.choices.choices.push_back(static_cast<std::uint8_t>(choice));
    return out;
  }

  Cell prefix(std::size_t tau) const {
    Cell out;
    out.menus.menus.assign(menus.menus.begin(), menus.menus.begin() + tau);
    out.choices.choices.assign(choices.choices.begin(), choices.choices.begin() + tau);
    return out;
  }

  bool compatible() const {
    if (menus.periods() != choices.periods()) return false;
    for (std::size_t i = 0; i < menus.periods(); ++i)
      if (!contains(menus.menus[i], choices.choices[i])) return false;
    return true;
  }
};

inline bool operator==(const Cell& a, const Cell& b) {
  return a.menus == b.menus && a.choices == b.choices;
}

inline bool operator<(const Cell& a, const Cell& b) {
  if (!(a.menus == b.menus)) return a.menus < b.menus;
  return a.choices < b.choices;
}

std::string format_menu_seq(const Universe& u, const MenuSeq& m);
std::string format_cell(const Universe& u, const Cell& c);

// The set of observed menu products.
struct ObservationDomain {
  int periods = 0;
  std::set<MenuSeq> observed;

  bool contains_seq(const MenuSeq& m) const { return observed.count(m) > 0; }
};

// All menu sequences of length T over the full lattice, canonical order.
std::vector<MenuSeq> all_menu_sequences(int n, int periods);

ObservationDomain full_domain(const Universe& u, int periods);

bool is_full_domain(const ObservationDomain& domain, const Universe& u);

// All choice sequences compatible with a menu sequence, lexicographic order.
std::vector<ChoiceSeq> choice_sequences(const MenuSeq& m);

// All histories (x^tau, A^tau) over the full lattice, canonical order.
std::vector<Cell> all_histories(const Universe& u, int tau);

// T-period joint choice frequencies indexed by (menu sequence, choice
// sequence). Zero cells may be left unstored; lookups default to zero.
template <class Num>
struct JointRule {
  Universe u;
  int periods = 0;
  ObservationDomain domain;
  std::map<Cell, Num> prob;

  Num at(const Cell& cell) const {
    auto it = prob.find(cell);
    return it == prob.end() ? NumTraits<Num>::zero() : it->second;
  }

  void set(const Cell& cell, Num value) {
    if (value == NumTraits<Num>::zero())
      prob.erase(cell);
    else
      prob[cell] = std::move(value);
  }

  Num block_sum(const MenuSeq& m) const {
    Num total = NumTraits<Num>::zero();
    for (const ChoiceSeq& c : choice_sequences(m)) total += at(Cell{m, c});
    return total;
  }
};

// Validates invariants of a candidate rule in place: nonnegativity, choices
// inside menus, block normalization. Returns the worst absolute deviation of
// any block sum from one.
template <class Num>
Num validate_rule(const JointRule<Num>& p, const Tolerance<Num>& tol);

template <class Num>
JointRule<Num> validate_rjcr(const Universe& u, int periods,
                             const std::vector<std::pair<Cell, Num>>& entries,
                             const Tolerance<Num>& tol);

// Result of scanning the marginality condition across all nested depths.
template <class Num>
struct MarginalityScan {
  bool holds = true;
  Num worst = NumTraits<Num>::zero();
  std::string witness;                          // first violating comparison
  std::size_t violations = 0;
  std::vector<std::pair<Cell, std::pair<Mask, Mask>>> sites;  // (prefix, (B, C))
};

template <class Num>
MarginalityScan<Num> scan_marginality(const JointRule<Num>& p, const Tolerance<Num>& tol);

// One marginalization step: sums out the last period against the full menu.
// Only meaningful when marginality holds (or as the canonical completion
// while checking it).
template <class Num>
JointRule<Num> marginal_step(const JointRule<Num>& p);

// Depth-tau marginal rule via repeated marginal_step.
template <class Num>
JointRule<Num> marginal_rule(const JointRule<Num>& p, int tau);

using BlockKey = std::pair<Mask, int>;  // (menu, alternative)

// First-period marginals plus per-history conditional blocks. Histories with
// zero probability are omitted and listed separately.
template <class Num>
struct ConditionalSystem {
  Universe u;
  int periods = 0;
  ObservationDomain domain;
  std::map<BlockKey, Num> first;
  std::map<Cell, std::map<BlockKey, Num>> blocks;
  std::vector<Cell> omitted;

  Num first_at(Mask menu, int alt) const {
    auto it = first.find({menu, alt});
    return it == first.end() ? NumTraits<Num>::zero() : it->second;
  }

  const std::map<BlockKey, Num>* block(const Cell& history) const {
    auto it = blocks.find(history);
    return it == blocks.end() ? nullptr : &it->second;
  }

  Num block_at(const Cell& history, Mask menu, int alt) const {
    auto* b = block(history);
    if (!b) return NumTraits<Num>::zero();
    auto it = b->find({menu, alt});
    return it == b->end() ? NumTraits<Num>::zero() : it->second;
  }
};

// Requires the rule to satisfy marginality (checked against tol); throws
// MarginalityViolatedError otherwise. Requires a full observation domain.
template <class Num>
ConditionalSystem<Num> to_conditional(const JointRule<Num>& p, const Tolerance<Num>& tol);

// Multiplies the first-period marginal through the conditional blocks.
// Satisfies marginality by construction.
template <class Num>
JointRule<Num> from_conditional(const ConditionalSystem<Num>& ccs);

// -------------------------------------------------------------------------
// implementation

template <class Num>
Num validate_rule(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  if (p.domain.observed.empty()) throw ParseError("observation domain is empty");
  if (p.domain.periods != p.periods) throw ParseError("domain period count mismatch");
  for (const MenuSeq& m : p.domain.observed) {
    if (static_cast<int>(m.periods()) != p.periods)
      throw ParseError("menu sequence of wrong length in domain");
    for (Mask menu : m.menus) {
      if (menu == 0 || !subset_of(menu, p.u.full_mask()))
        throw ParseError("menu is empty or falls outside the universe");
    }
  }
  for (const auto& [cell, value] : p.prob) {
    if (!cell.compatible()) throw ChoiceOutsideMenuError(format_cell(p.u, cell));
    if (!p.domain.contains_seq(cell.menus))
      throw ParseError("probability listed for unobserved menu sequence " +
                       format_menu_seq(p.u, cell.menus));
    if (!tol.nonnegative(value)) throw NegativeProbabilityError(format_cell(p.u, cell));
  }
  Num worst = NumTraits<Num>::zero();
  for (const MenuSeq& m : p.domain.observed) {
    Num dev = abs_value(p.block_sum(m) - NumTraits<Num>::one());
    if (dev > worst) worst = dev;
    if (!tol.is_zero(dev))
      throw NormalizationError(format_menu_seq(p.u, m), format_number(dev));
  }
  return worst;
}

template <class Num>
JointRule<Num> validate_rjcr(const Universe& u, int periods,
                             const std::vector<std::pair<Cell, Num>>& entries,
                             const Tolerance<Num>& tol) {
  JointRule<Num> p;
  p.u = u;
  p.periods = periods;
  p.domain.periods = periods;
  for (const auto& [cell, value] : entries) {
    if (static_cast<int>(cell.periods()) != periods)
      throw ParseError("entry has wrong period count: " + format_cell(u, cell));
    p.domain.observed.insert(cell.menus);
    if (p.prob.count(cell)) throw ParseError("duplicate entry " + format_cell(u, cell));
    p.prob[cell] = value;
  }
  validate_rule(p, tol);
  return p;
}

template <class Num>
MarginalityScan<Num> scan_marginality(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  MarginalityScan<Num> scan;
  const int n = p.u.size();
  std::vector<Mask> menus = all_menus(n);
  JointRule<Num> level = p;
  for (int tau = p.periods - 1; tau >= 1; --tau) {
    // level currently holds the depth tau+1 rule (canonical completion)
    for (const Cell& hist : all_histories(p.u, tau)) {
      std::vector<Num> sums(menus.size(), NumTraits<Num>::zero());
      for (std::size_t bi = 0; bi < menus.size(); ++bi) {
        for (int y = 0; y < n; ++y) {
          if (!contains(menus[bi], y)) continue;
          sums[bi] += level.at(hist.extended(menus[bi], y));
        }
      }
      for (std::size_t bi = 0; bi < menus.size(); ++bi) {
        for (std::size_t ci = bi + 1; ci < menus.size(); ++ci) {
          Num gap = abs_value(sums[bi] - sums[ci]);
          if (gap > scan.worst) scan.worst = gap;
          if (!tol.is_zero(gap)) {
            if (scan.holds) {
              scan.witness = format_cell(p.u, hist) + " vs menus " +
                             p.u.format_menu(menus[bi]) + "," + p.u.format_menu(menus[ci]) +
                             " gap " + format_number(gap);
            }
            scan.holds = false;
            ++scan.violations;
            scan.sites.push_back({hist, {menus[bi], menus[ci]}});
          }
        }
      }
    }
    if (tau > 1) level = marginal_step(level);
  }
  return scan;
}

template <class Num>
JointRule<Num> marginal_step(const JointRule<Num>& p) {
  JointRule<Num> out;
  out.u = p.u;
  out.periods = p.periods - 1;
  out.domain.periods = out.periods;
  const Mask full = p.u.full_mask();
  std::set<MenuSeq> prefixes;
  for (const MenuSeq& m : p.domain.observed) {
    MenuSeq head;
    head.menus.assign(m.menus.begin(), m.menus.end() - 1);
    prefixes.insert(head);
  }
  for (const MenuSeq& head : prefixes) {
    MenuSeq completed = head;
    completed.menus.push_back(full);
    if (!p.domain.contains_seq(completed))
      throw DomainIncompleteError(format_menu_seq(p.u, completed));
    out.domain.observed.insert(head);
    for (const ChoiceSeq& c : choice_sequences(head)) {
      Num total = NumTraits<Num>::zero();
      for (int y = 0; y < p.u.size(); ++y)
        total += p.at(Cell{completed, ChoiceSeq{[&] {
                            auto v = c.choices;
                            v.push_back(static_cast<std::uint8_t>(y));
                            return v;
                          }()}});
      if (!(total == NumTraits<Num>::zero())) out.prob[Cell{head, c}] = total;
    }
  }
  return out;
}

template <class Num>
JointRule<Num> marginal_rule(const JointRule<Num>& p, int tau) {
  JointRule<Num> out = p;
  while (out.periods > tau) out = marginal_step(out);
  return out;
}

template <class Num>
ConditionalSystem<Num> to_conditional(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  auto scan = scan_marginality(p, tol);
  if (!scan.holds) throw MarginalityViolatedError(scan.witness);

  ConditionalSystem<Num> ccs;
  ccs.u = p.u;
  ccs.periods = p.periods;
  ccs.domain = p.domain;

  std::vector<JointRule<Num>> levels;  // levels[t] is the depth t+1 marginal
  levels.resize(static_cast<std::size_t>(p.periods));
  levels[static_cast<std::size_t>(p.periods) - 1] = p;
  for (int t = p.periods - 1; t >= 1; --t)
    levels[static_cast<std::size_t>(t) - 1] = marginal_step(levels[static_cast<std::size_t>(t)]);

  for (const auto& [cell, value] : levels[0].prob) {
    ccs.first[{cell.menus.menus[0], cell.choices.choices[0]}] = value;
  }
  for (int tau = 1; tau < p.periods; ++tau) {
    const JointRule<Num>& head = levels[static_cast<std::size_t>(tau) - 1];
    const JointRule<Num>& next = levels[static_cast<std::size_t>(tau)];
    for (const Cell& hist : all_histories(p.u, tau)) {
      Num mass = head.at(hist);
      if (!tol.positive(mass)) {
        ccs.omitted.push_back(hist);
        continue;
      }
      auto& block = ccs.blocks[hist];
      for (Mask menu : all_menus(p.u.size())) {
        for (int y = 0; y < p.u.size(); ++y) {
          if (!contains(menu, y)) continue;
          block[{menu, y}] = next.at(hist.extended(menu, y)) / mass;
        }
      }
    }
  }
  return ccs;
}

template <class Num>
JointRule<Num> from_conditional(const ConditionalSystem<Num>& ccs) {
  JointRule<Num> p;
  p.u = ccs.u;
  p.periods = ccs.periods;
  p.domain = ccs.domain;
  for (const MenuSeq& m : ccs.domain.observed) {
    for (const ChoiceSeq& c : choice_sequences(m)) {
      Cell cell{m, c};
      Num value = ccs.first_at(m.menus[0], c.choices[0]);
      for (int tau = 1; tau < ccs.periods && !(value == NumTraits<Num>::zero()); ++tau) {
        Cell hist = cell.prefix(static_cast<std::size_t>(tau));
        const auto* block = ccs.block(hist);
        if (!block) {
          // histories carrying zero mass contribute zero cells
          value = NumTraits<Num>::zero();
          break;
        }
        auto it = block->find({m.menus[static_cast<std::size_t>(tau)],
                               c.choices[static_cast<std::size_t>(tau)]});
        value = it == block->end() ? NumTraits<Num>::zero() : Num(value * it->second);
      }
      if (!(value == NumTraits<Num>::zero())) p.prob[cell] = value;
    }
  }
  return p;
}

}  // namespace cdrum
