#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cdrum/axioms.hpp"
#include "cdrum/core.hpp"

namespace cdrum {

// Dynamic logit with streak-dependent utility increments. The designated
// outside option is normalized to zero base utility and zero increments;
// c[x][i] is the increment earned by the (i+1)-th consecutive consumption.
struct HabitLogitParams {
  Universe u;
  std::vector<double> v;
  std::vector<std::vector<double>> c;
  int outside = 0;

  double increment_sum(int x, int run) const {
    double total = 0.0;
    const auto& cx = c[static_cast<std::size_t>(x)];
    for (int i = 0; i < run && i < static_cast<int>(cx.size()); ++i) total += cx[static_cast<std::size_t>(i)];
    return total;
  }

  bool is_habit_formation() const {
    for (const auto& cx : c)
      for (double ci : cx)
        if (ci < 0.0) return false;
    return true;
  }

  bool is_preference_for_variety() const {
    for (const auto& cx : c)
      for (double ci : cx)
        if (ci > 0.0) return false;
    return true;
  }
};

// Dynamic logit with belief/realization pairs: an alternative's expected
// utility is replaced by its realized utility once it has ever been chosen.
struct LearningLogitParams {
  Universe u;
  std::vector<double> mean;
  std::vector<double> realized;
  int outside = 0;
};

// Most recent choice and the length of its trailing run.
struct StreakSignature {
  int last = -1;
  int run = 0;
};

inline StreakSignature streak_of(const ChoiceSeq& history) {
  StreakSignature s;
  if (history.choices.empty()) return s;
  s.last = history.choices.back();
  s.run = 1;
  for (int i = static_cast<int>(history.choices.size()) - 2; i >= 0; --i) {
    if (history.choices[static_cast<std::size_t>(i)] != s.last) break;
    ++s.run;
  }
  return s;
}

inline Mask consumed_set(const ChoiceSeq& history) {
  Mask m = 0;
  for (std::uint8_t x : history.choices) m |= Mask(1) << x;
  return m;
}

namespace detail {

// log-space softmax over the members of a menu
inline void softmax_block(const Universe& u, Mask menu, const std::vector<double>& utility,
                          std::map<BlockKey, double>& block) {
  double peak = -std::numeric_limits<double>::infinity();
  for (int z = 0; z < u.size(); ++z)
    if (contains(menu, z)) peak = std::max(peak, utility[static_cast<std::size_t>(z)]);
  double denom = 0.0;
  for (int z = 0; z < u.size(); ++z)
    if (contains(menu, z)) denom += std::exp(utility[static_cast<std::size_t>(z)] - peak);
  for (int z = 0; z < u.size(); ++z)
    if (contains(menu, z))
      block[{menu, z}] = std::exp(utility[static_cast<std::size_t>(z)] - peak) / denom;
}

template <class UtilityFn>
ConditionalSystem<double> eval_logit(const Universe& u, const ObservationDomain& domain,
                                     int periods, UtilityFn&& utility_for) {
  ConditionalSystem<double> ccs;
  ccs.u = u;
  ccs.periods = periods;
  ccs.domain = domain;

  std::vector<double> utility(static_cast<std::size_t>(u.size()));
  utility_for(ChoiceSeq{}, utility);
  for (Mask menu : all_menus(u.size())) detail::softmax_block(u, menu, utility, ccs.first);

  // histories range over prefixes of the domain's menu products
  for (int tau = 1; tau < periods; ++tau) {
    std::set<MenuSeq> prefixes;
    for (const MenuSeq& m : domain.observed) {
      MenuSeq head;
      head.menus.assign(m.menus.begin(), m.menus.begin() + tau);
      prefixes.insert(head);
    }
    for (const MenuSeq& head : prefixes) {
      for (const ChoiceSeq& c : choice_sequences(head)) {
        Cell hist{head, c};
        utility_for(c, utility);
        auto& block = ccs.blocks[hist];
        for (Mask menu : all_menus(u.size())) detail::softmax_block(u, menu, utility, block);
      }
    }
  }
  return ccs;
}

}  // namespace detail

// Exact conditional blocks of the consumption dependent logit: the most
// recent alternative keeps its accumulated streak increments, everything
// else reverts to base utility.
inline ConditionalSystem<double> eval_habit_logit(const HabitLogitParams& params,
                                                  const ObservationDomain& domain, int periods) {
  if (static_cast<int>(params.v.size()) != params.u.size() ||
      static_cast<int>(params.c.size()) != params.u.size())
    throw Error("habit logit parameter vectors must cover the universe");
  for (const auto& cx : params.c)
    if (static_cast<int>(cx.size()) < periods - 1)
      throw Error("habit logit needs streak increments up to length " + std::to_string(periods - 1));
  return detail::eval_logit(params.u, domain, periods,
                            [&](const ChoiceSeq& history, std::vector<double>& utility) {
                              StreakSignature s = streak_of(history);
                              for (int z = 0; z < params.u.size(); ++z) {
                                utility[static_cast<std::size_t>(z)] =
                                    params.v[static_cast<std::size_t>(z)];
                                if (z == s.last)
                                  utility[static_cast<std::size_t>(z)] +=
                                      params.increment_sum(z, s.run);
                              }
                            });
}

inline ConditionalSystem<double> eval_learning_logit(const LearningLogitParams& params,
                                                     const ObservationDomain& domain,
                                                     int periods) {
  if (static_cast<int>(params.mean.size()) != params.u.size() ||
      static_cast<int>(params.realized.size()) != params.u.size())
    throw Error("learning logit parameter vectors must cover the universe");
  return detail::eval_logit(params.u, domain, periods,
                            [&](const ChoiceSeq& history, std::vector<double>& utility) {
                              Mask consumed = consumed_set(history);
                              for (int z = 0; z < params.u.size(); ++z)
                                utility[static_cast<std::size_t>(z)] =
                                    contains(consumed, z)
                                        ? params.realized[static_cast<std::size_t>(z)]
                                        : params.mean[static_cast<std::size_t>(z)];
                            });
}

namespace detail {

inline double positive_block_value(const ConditionalSystem<double>& ccs, const Cell& hist,
                                   Mask menu, int alt, const std::string& what) {
  double v = hist.periods() == 0 ? ccs.first_at(menu, alt) : ccs.block_at(hist, menu, alt);
  if (!(v > 0.0)) throw PositivityViolatedError(what);
  return v;
}

}  // namespace detail

// Log-odds inversion against the outside option on full-menu blocks. Exact
// inverse of eval_habit_logit up to floating rounding. Streak increments of
// every depth up to T-1 are recovered from own-streak histories.
inline HabitLogitParams identify_habit_logit(const ConditionalSystem<double>& ccs, int outside) {
  const Universe& u = ccs.u;
  const Mask full = u.full_mask();
  HabitLogitParams params;
  params.u = u;
  params.outside = outside;
  params.v.assign(static_cast<std::size_t>(u.size()), 0.0);
  params.c.assign(static_cast<std::size_t>(u.size()),
                  std::vector<double>(static_cast<std::size_t>(std::max(0, ccs.periods - 1)), 0.0));

  for (int x = 0; x < u.size(); ++x) {
    if (x == outside) continue;
    double px = detail::positive_block_value(ccs, Cell{}, full, x, "first period " + u.label(x));
    double po = detail::positive_block_value(ccs, Cell{}, full, outside, "first period outside");
    params.v[static_cast<std::size_t>(x)] = std::log(px / po);

    double previous = params.v[static_cast<std::size_t>(x)];
    Cell hist;  // own-streak history (x, ..., x; X, ..., X)
    for (int run = 1; run <= ccs.periods - 1; ++run) {
      hist = hist.extended(full, x);
      double num = detail::positive_block_value(ccs, hist, full, x,
                                                "conditional " + u.label(x) + " after streak");
      double den = detail::positive_block_value(ccs, hist, full, outside,
                                                "conditional outside after streak");
      double logodds = std::log(num / den);
      params.c[static_cast<std::size_t>(x)][static_cast<std::size_t>(run - 1)] =
          logodds - previous;
      previous = logodds;
    }
  }
  return params;
}

inline LearningLogitParams identify_learning_logit(const ConditionalSystem<double>& ccs,
                                                   int outside) {
  const Universe& u = ccs.u;
  const Mask full = u.full_mask();
  LearningLogitParams params;
  params.u = u;
  params.outside = outside;
  params.mean.assign(static_cast<std::size_t>(u.size()), 0.0);
  params.realized.assign(static_cast<std::size_t>(u.size()), 0.0);

  for (int x = 0; x < u.size(); ++x) {
    if (x == outside) continue;
    double px = detail::positive_block_value(ccs, Cell{}, full, x, "first period " + u.label(x));
    double po = detail::positive_block_value(ccs, Cell{}, full, outside, "first period outside");
    params.mean[static_cast<std::size_t>(x)] = std::log(px / po);
  }
  for (int x = 0; x < u.size(); ++x) {
    // after history (x; X) the reference alternative is unconsumed, so its
    // utility is still its mean
    int ref = x == outside ? (outside == 0 ? 1 : 0) : outside;
    Cell hist = Cell{}.extended(full, x);
    double num =
        detail::positive_block_value(ccs, hist, full, x, "conditional " + u.label(x));
    double den =
        detail::positive_block_value(ccs, hist, full, ref, "conditional reference");
    params.realized[static_cast<std::size_t>(x)] =
        std::log(num / den) + params.mean[static_cast<std::size_t>(ref)];
  }
  return params;
}

// Normalization-free estimate of the own-consumption utility shift for each
// alternative on two-period data: the change in the log-odds of x against an
// unconsumed reference after x was consumed once. For consumption dependent
// logit data this is c(x,1); a habit formation representation exists exactly
// when every entry is nonnegative.
inline std::vector<double> consumption_increments(const ConditionalSystem<double>& ccs) {
  const Universe& u = ccs.u;
  const Mask full = u.full_mask();
  std::vector<double> s(static_cast<std::size_t>(u.size()), 0.0);
  for (int x = 0; x < u.size(); ++x) {
    int ref = x == 0 ? 1 : 0;  // unconsumed after the one-period history (x)
    Cell hist = Cell{}.extended(full, x);
    double own = detail::positive_block_value(ccs, hist, full, x, "own conditional");
    double other = detail::positive_block_value(ccs, hist, full, ref, "reference conditional");
    double base_own = detail::positive_block_value(ccs, Cell{}, full, x, "own marginal");
    double base_other = detail::positive_block_value(ccs, Cell{}, full, ref, "reference marginal");
    s[static_cast<std::size_t>(x)] = std::log(own / other) - std::log(base_own / base_other);
  }
  return s;
}

// Closed-form stationary distribution of the Markov chain whose transitions
// are the full-menu habit blocks; cross-checked against the fixed-point
// property before returning.
inline std::vector<double> stationary_distribution(const HabitLogitParams& params) {
  const Universe& u = params.u;
  const int n = u.size();
  std::vector<double> lognum(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
      terms[static_cast<std::size_t>(y)] =
          params.v[static_cast<std::size_t>(y)] + (x == y ? params.increment_sum(y, 1) : 0.0);
      peak = std::max(peak, terms[static_cast<std::size_t>(y)]);
    }
    double sum = 0.0;
    for (int y = 0; y < n; ++y) sum += std::exp(terms[static_cast<std::size_t>(y)] - peak);
    lognum[static_cast<std::size_t>(x)] = params.v[static_cast<std::size_t>(x)] + peak + std::log(sum);
  }
  double peak = *std::max_element(lognum.begin(), lognum.end());
  double denom = 0.0;
  for (double t : lognum) denom += std::exp(t - peak);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) dist[static_cast<std::size_t>(x)] = std::exp(lognum[static_cast<std::size_t>(x)] - peak) / denom;

  // fixed point sanity: dist * kernel == dist
  double residual = 0.0;
  for (int y = 0; y < n; ++y) {
    double flow = 0.0;
    for (int x = 0; x < n; ++x) {
      double peak2 = -std::numeric_limits<double>::infinity();
      std::vector<double> util(static_cast<std::size_t>(n));
      for (int z = 0; z < n; ++z) {
        util[static_cast<std::size_t>(z)] =
            params.v[static_cast<std::size_t>(z)] + (z == x ? params.increment_sum(z, 1) : 0.0);
        peak2 = std::max(peak2, util[static_cast<std::size_t>(z)]);
      }
      double denom2 = 0.0;
      for (int z = 0; z < n; ++z) denom2 += std::exp(util[static_cast<std::size_t>(z)] - peak2);
      flow += dist[static_cast<std::size_t>(x)] *
              (std::exp(util[static_cast<std::size_t>(y)] - peak2) / denom2);
    }
    residual = std::max(residual, std::abs(flow - dist[static_cast<std::size_t>(y)]));
  }
  if (residual > 1e-8) throw Error("stationary distribution failed its fixed-point check");
  return dist;
}

// ---------------------------------------------------------------------------
// axiom battery for conditional systems (any number of periods)

namespace detail {

inline std::vector<Cell> ccs_histories(const ConditionalSystem<double>& ccs,
                                       bool include_null = true) {
  std::vector<Cell> out;
  if (include_null) out.push_back(Cell{});
  for (const auto& [hist, block] : ccs.blocks) out.push_back(hist);
  return out;
}

inline double ccs_value(const ConditionalSystem<double>& ccs, const Cell& hist, Mask menu,
                        int alt) {
  return hist.periods() == 0 ? ccs.first_at(menu, alt) : ccs.block_at(hist, menu, alt);
}

}  // namespace detail

inline AxiomReport check_positivity(const ConditionalSystem<double>& ccs) {
  AxiomReport report;
  report.axiom = "positivity";
  for (const Cell& hist : detail::ccs_histories(ccs)) {
    for (Mask menu : all_menus(ccs.u.size())) {
      for (int z = 0; z < ccs.u.size(); ++z) {
        if (!contains(menu, z)) continue;
        double v = detail::ccs_value(ccs, hist, menu, z);
        if (!(v > 0.0))
          report.record(format_cell(ccs.u, hist) + " block (" + ccs.u.label(z) + ";" +
                            ccs.u.format_menu(menu) + ")",
                        format_number(v), ">0");
      }
    }
  }
  return report;
}

// Histories of equal length with the same streak signature induce identical
// conditional blocks.
inline AxiomReport check_far_history_independence(const ConditionalSystem<double>& ccs,
                                                  double eps = kFloatTolerance) {
  AxiomReport report;
  report.axiom = "far_history_independence";
  report.tolerance = eps;
  std::vector<Cell> hists = detail::ccs_histories(ccs, false);
  for (std::size_t i = 0; i < hists.size(); ++i) {
    StreakSignature si = streak_of(hists[i].choices);
    for (std::size_t j = i + 1; j < hists.size(); ++j) {
      if (hists[i].periods() != hists[j].periods()) continue;
      StreakSignature sj = streak_of(hists[j].choices);
      if (si.last != sj.last || si.run != sj.run) continue;
      for (Mask menu : all_menus(ccs.u.size())) {
        for (int z = 0; z < ccs.u.size(); ++z) {
          if (!contains(menu, z)) continue;
          double a = detail::ccs_value(ccs, hists[i], menu, z);
          double b = detail::ccs_value(ccs, hists[j], menu, z);
          if (std::abs(a - b) > eps)
            report.record(format_cell(ccs.u, hists[i]) + " vs " + format_cell(ccs.u, hists[j]) +
                              " at (" + ccs.u.label(z) + ";" + ccs.u.format_menu(menu) + ")",
                          format_number(a), format_number(b));
        }
      }
    }
  }
  return report;
}

// Cross-history likelihood ratios are menu independent for alternatives
// whose streak status matches: either neither is the running alternative,
// or both are and the runs agree.
inline AxiomReport check_fhi_iia(const ConditionalSystem<double>& ccs,
                                 double eps = kFloatTolerance) {
  AxiomReport report;
  report.axiom = "fhi_iia";
  report.tolerance = eps;
  const int n = ccs.u.size();
  std::vector<Cell> hists = detail::ccs_histories(ccs);
  for (const Cell& h1 : hists) {
    StreakSignature s1 = streak_of(h1.choices);
    for (const Cell& h2 : hists) {
      StreakSignature s2 = streak_of(h2.choices);
      for (int w = 0; w < n; ++w) {
        for (int z = 0; z < n; ++z) {
          if (w == z) continue;
          bool w_plain = w != s1.last && w != s2.last;
          bool z_plain = z != s1.last && z != s2.last;
          bool case_plain = w_plain && z_plain;
          bool case_streak = w == s1.last && w == s2.last && s1.run == s2.run && z_plain;
          if (!(case_plain || case_streak)) continue;
          // within-history ratio p(w,.)/p(z,.) agrees across the two
          // histories and across menus
          double ref_num = 0.0, ref_den = 0.0;
          bool have_ref = false;
          for (Mask menu : all_menus(n)) {
            if (!contains(menu, w) || !contains(menu, z)) continue;
            double num = detail::ccs_value(ccs, h1, menu, w);
            double den = detail::ccs_value(ccs, h1, menu, z);
            if (!have_ref) {
              ref_num = detail::ccs_value(ccs, h2, menu, w);
              ref_den = detail::ccs_value(ccs, h2, menu, z);
              have_ref = true;
            }
            if (std::abs(num * ref_den - den * ref_num) > eps)
              report.record(format_cell(ccs.u, h1) + " vs " + format_cell(ccs.u, h2) + " pair (" +
                                ccs.u.label(w) + "," + ccs.u.label(z) + ") menu " +
                                ccs.u.format_menu(menu),
                            format_number(num * ref_den), format_number(den * ref_num));
          }
        }
      }
    }
  }
  return report;
}

// Own-choice probability is monotone in streak length (habit formation), or
// antitone (preference for variety).
inline AxiomReport check_habit_formation_axiom(const ConditionalSystem<double>& ccs,
                                               bool variety = false,
                                               double eps = kFloatTolerance) {
  AxiomReport report;
  report.axiom = variety ? "preference_for_variety" : "habit_formation";
  report.tolerance = eps;
  std::vector<Cell> hists = detail::ccs_histories(ccs, false);
  for (const Cell& h1 : hists) {
    StreakSignature s1 = streak_of(h1.choices);
    for (const Cell& h2 : hists) {
      StreakSignature s2 = streak_of(h2.choices);
      if (s1.last != s2.last || s2.run != s1.run + 1) continue;
      int x = s1.last;
      for (Mask menu : all_menus(ccs.u.size())) {
        if (!contains(menu, x)) continue;
        double shorter = detail::ccs_value(ccs, h1, menu, x);
        double longer = detail::ccs_value(ccs, h2, menu, x);
        bool ok = variety ? shorter >= longer - eps : shorter <= longer + eps;
        if (!ok)
          report.record(format_cell(ccs.u, h1) + " vs " + format_cell(ccs.u, h2) + " at (" +
                            ccs.u.label(x) + ";" + ccs.u.format_menu(menu) + ")",
                        format_number(shorter), format_number(longer));
      }
    }
  }
  return report;
}

// Likelihood ratios are invariant across histories and menus for pairs whose
// consumption status matches in both histories.
inline AxiomReport check_intertemporal_iia(const ConditionalSystem<double>& ccs,
                                           double eps = kFloatTolerance) {
  AxiomReport report;
  report.axiom = "intertemporal_iia";
  report.tolerance = eps;
  const int n = ccs.u.size();
  std::vector<Cell> hists = detail::ccs_histories(ccs);
  for (const Cell& h1 : hists) {
    Mask c1 = consumed_set(h1.choices);
    for (const Cell& h2 : hists) {
      Mask c2 = consumed_set(h2.choices);
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          if (x == y) continue;
          bool x_fresh = !contains(c1, x) && !contains(c2, x);
          bool y_fresh = !contains(c1, y) && !contains(c2, y);
          bool x_consumed = contains(c1, x) && contains(c2, x);
          bool y_consumed = contains(c1, y) && contains(c2, y);
          bool applicable = (x_fresh && y_fresh) || (x_fresh && y_consumed) ||
                            (x_consumed && y_consumed);
          if (!applicable) continue;
          double ref_num = 0.0, ref_den = 0.0;
          bool have_ref = false;
          for (Mask menu : all_menus(n)) {
            if (!contains(menu, x) || !contains(menu, y)) continue;
            double num = detail::ccs_value(ccs, h1, menu, x);
            double den = detail::ccs_value(ccs, h1, menu, y);
            double num2 = detail::ccs_value(ccs, h2, menu, x);
            double den2 = detail::ccs_value(ccs, h2, menu, y);
            // within-history ratio must match across the two histories and
            // across menus
            if (!have_ref) {
              ref_num = num2;
              ref_den = den2;
              have_ref = true;
            }
            if (std::abs(num * ref_den - den * ref_num) > eps)
              report.record(format_cell(ccs.u, h1) + " vs " + format_cell(ccs.u, h2) + " pair (" +
                                ccs.u.label(x) + "," + ccs.u.label(y) + ") menu " +
                                ccs.u.format_menu(menu),
                            format_number(num * ref_den), format_number(den * ref_num));
          }
        }
      }
    }
  }
  return report;
}

// Choice set independence stated directly on conditional blocks: histories
// sharing a choice sequence have identical blocks.
inline AxiomReport check_csi_conditional(const ConditionalSystem<double>& ccs,
                                         double eps = kFloatTolerance) {
  AxiomReport report;
  report.axiom = "choice_set_independence";
  report.tolerance = eps;
  std::vector<Cell> hists = detail::ccs_histories(ccs, false);
  for (std::size_t i = 0; i < hists.size(); ++i) {
    for (std::size_t j = i + 1; j < hists.size(); ++j) {
      if (!(hists[i].choices == hists[j].choices)) continue;
      for (Mask menu : all_menus(ccs.u.size())) {
        for (int z = 0; z < ccs.u.size(); ++z) {
          if (!contains(menu, z)) continue;
          double a = detail::ccs_value(ccs, hists[i], menu, z);
          double b = detail::ccs_value(ccs, hists[j], menu, z);
          if (std::abs(a - b) > eps)
            report.record(format_cell(ccs.u, hists[i]) + " vs " + format_cell(ccs.u, hists[j]) +
                              " at (" + ccs.u.label(z) + ";" + ccs.u.format_menu(menu) + ")",
                          format_number(a), format_number(b));
        }
      }
    }
  }
  return report;
}

struct ParametricBattery {
  std::vector<AxiomReport> reports;
  bool consumption_dependent_logit = false;  // marginality + csi + positivity + fhi + fhi_iia
  bool learning_logit = false;               // marginality + csi + positivity + intertemporal_iia

  const AxiomReport* report(const std::string& axiom) const {
    for (const auto& r : reports)
      if (r.axiom == axiom) return &r;
    return nullptr;
  }
};

inline ParametricBattery check_parametric_axioms(const ConditionalSystem<double>& ccs,
                                                 double eps = kFloatTolerance) {
  ParametricBattery battery;
  // marginality holds by construction for any conditional system
  AxiomReport marginality;
  marginality.axiom = "marginality";
  marginality.tolerance = eps;
  battery.reports.push_back(marginality);
  battery.reports.push_back(check_csi_conditional(ccs, eps));
  battery.reports.push_back(check_positivity(ccs));
  battery.reports.push_back(check_far_history_independence(ccs, eps));
  battery.reports.push_back(check_fhi_iia(ccs, eps));
  battery.reports.push_back(check_habit_formation_axiom(ccs, false, eps));
  battery.reports.push_back(check_habit_formation_axiom(ccs, true, eps));
  battery.reports.push_back(check_intertemporal_iia(ccs, eps));

  auto holds = [&](const std::string& name) { return battery.report(name)->holds; };
  bool base = holds("marginality") && holds("choice_set_independence") && holds("positivity");
  battery.consumption_dependent_logit =
      base && holds("far_history_independence") && holds("fhi_iia");
  battery.learning_logit = base && holds("intertemporal_iia");
  return battery;
}

struct ClassifyResult {
  bool consumption_dependent = false;
  bool learning = false;
  bool habit_formation = false;
  bool variety = false;
};

// Two-period classification per the observable battery plus the own-history
// comparison p(x,X|x,X) vs p(x,X).
inline ClassifyResult classify(const ConditionalSystem<double>& ccs,
                               double eps = kFloatTolerance) {
  if (ccs.periods != 2) throw Error("classify is defined for two-period systems");
  ParametricBattery battery = check_parametric_axioms(ccs, eps);
  ClassifyResult out;
  out.consumption_dependent = battery.consumption_dependent_logit;
  out.learning = battery.learning_logit;
  const Mask full = ccs.u.full_mask();
  bool all_up = true, all_down = true;
  for (int x = 0; x < ccs.u.size(); ++x) {
    double base = ccs.first_at(full, x);
    double own = ccs.block_at(Cell{}.extended(full, x), full, x);
    if (own < base - eps) all_up = false;
    if (own > base + eps) all_down = false;
  }
  out.habit_formation = out.consumption_dependent && all_up;
  out.variety = out.consumption_dependent && all_down;
  return out;
}

}  // namespace cdrum
