#pragma once

#include <map>
#include <vector>

#include "cdrum/parametric.hpp"
#include "cdrum/recovery.hpp"
#include "cdrum/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cdrum {

// One deterministic joint choice pattern: a first-period order plus one
// continuation order per choice history. State independent by construction;
// these are the extreme points mixed by random_mixture (for two periods,
// exactly a first order plus one second-period order per alternative).
struct DeterministicPattern {
  std::size_t first_order = 0;
  std::vector<std::map<ChoiceSeq, std::size_t>> continuation;  // [tau-1][history]

  std::size_t order_after(const ChoiceSeq& history) const {
    if (history.choices.empty()) return first_order;
    return continuation[history.periods() - 1].at(history);
  }
};

// The rule induced by mixing deterministic patterns with the given weights.
template <class Num>
JointRule<Num> rule_from_patterns(const Universe& u, int periods,
                                  const std::vector<DeterministicPattern>& patterns,
                                  const std::vector<Num>& weights,
                                  const ObservationDomain& domain) {
  const OrderSpace& space = OrderSpace::get(u.size());
  JointRule<Num> p;
  p.u = u;
  p.periods = periods;
  p.domain = domain;
  for (const MenuSeq& m : domain.observed) {
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      ChoiceSeq realized;
      for (int tau = 0; tau < periods; ++tau) {
        std::size_t rank = patterns[i].order_after(realized);
        realized.choices.push_back(
            static_cast<std::uint8_t>(space.top(rank, m.menus[static_cast<std::size_t>(tau)])));
      }
      p.prob[Cell{m, realized}] += weights[i];
    }
  }
  for (auto it = p.prob.begin(); it != p.prob.end();) {
    if (it->second == NumTraits<Num>::zero())
      it = p.prob.erase(it);
    else
      ++it;
  }
  return p;
}

template <class Num>
struct MixtureDraw {
  JointRule<Num> rule;
  std::vector<DeterministicPattern> patterns;
  std::vector<Num> weights;
};

inline DeterministicPattern random_pattern(const Universe& u, int periods, CounterRng& rng) {
  const OrderSpace& space = OrderSpace::get(u.size());
  DeterministicPattern pat;
  pat.first_order = rng.next_below(static_cast<std::uint32_t>(space.count()));
  pat.continuation.resize(static_cast<std::size_t>(periods) - 1);
  for (int tau = 1; tau < periods; ++tau) {
    // continuation orders for every choice history of length tau
    std::vector<ChoiceSeq> histories;
    histories.push_back(ChoiceSeq{});
    for (int t = 0; t < tau; ++t) {
      std::vector<ChoiceSeq> next;
      for (const ChoiceSeq& h : histories) {
        for (int x = 0; x < u.size(); ++x) {
          ChoiceSeq e = h;
          e.choices.push_back(static_cast<std::uint8_t>(x));
          next.push_back(std::move(e));
        }
      }
      histories = std::move(next);
    }
    for (const ChoiceSeq& h : histories)
      pat.continuation[static_cast<std::size_t>(tau) - 1][h] =
          rng.next_below(static_cast<std::uint32_t>(space.count()));
  }
  return pat;
}

// Mixture of k random deterministic patterns; consistent with consumption
// dependent random utility by construction, with the mixture itself as the
// certificate. Rational mode draws small integer weights so the rule is
// exact.
template <class Num>
MixtureDraw<Num> random_mixture(const Universe& u, int periods, int k, std::uint64_t seed,
                                const ObservationDomain& domain) {
  CounterRng rng = CounterRng(seed).child(0x6d69785fULL);
  MixtureDraw<Num> draw;
  for (int i = 0; i < k; ++i) draw.patterns.push_back(random_pattern(u, periods, rng));
  if constexpr (NumTraits<Num>::exact) {
    Rational total(0);
    std::vector<Rational> raw;
    for (int i = 0; i < k; ++i) {
      Rational w(1 + rng.next_below(12));
      raw.push_back(w);
      total += w;
    }
    for (auto& w : raw) draw.weights.push_back(Num(w / total));
  } else {
    double total = 0.0;
    std::vector<double> raw;
    for (int i = 0; i < k; ++i) {
      double w = -std::log(1.0 - rng.next_unit());
      raw.push_back(w);
      total += w;
    }
    for (double w : raw) draw.weights.push_back(w / total);
  }
  draw.rule = rule_from_patterns(u, periods, draw.patterns, draw.weights, domain);
  return draw;
}

template <class Num>
MixtureDraw<Num> random_mixture(const Universe& u, int periods, int k, std::uint64_t seed) {
  return random_mixture<Num>(u, periods, k, seed, full_domain(u, periods));
}

// Mean-zero per-block disturbance of magnitude epsilon followed by clamping
// and renormalization; stays a valid rule but generically breaks complete
// monotonicity once epsilon is large enough.
template <class Num>
JointRule<Num> perturb(const JointRule<Num>& p, const Num& epsilon, std::uint64_t seed) {
  if (epsilon == NumTraits<Num>::zero()) return p;
  CounterRng rng = CounterRng(seed).child(0x70657274ULL);
  JointRule<Num> out;
  out.u = p.u;
  out.periods = p.periods;
  out.domain = p.domain;
  for (const MenuSeq& m : p.domain.observed) {
    std::vector<ChoiceSeq> cells = choice_sequences(m);
    std::vector<Num> values;
    values.reserve(cells.size());
    Num total = NumTraits<Num>::zero();
    for (const ChoiceSeq& c : cells) {
      // symmetric grid noise in [-epsilon, epsilon]
      int grid = static_cast<int>(rng.next_below(201)) - 100;
      Num noise = epsilon * Num(grid) / Num(100);
      Num v = p.at(Cell{m, c}) + noise;
      if (v < NumTraits<Num>::zero()) v = NumTraits<Num>::zero();
      total += v;
      values.push_back(v);
    }
    if (total == NumTraits<Num>::zero()) {
      for (const ChoiceSeq& c : cells) out.set(Cell{m, c}, p.at(Cell{m, c}));
      continue;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out.set(Cell{m, cells[i]}, values[i] / total);
  }
  return out;
}

// Empirical frequencies from independent agent trajectories through a
// representation; one cohort of n_agents per menu sequence. Deterministic in
// (seed, menu sequence index, agent index) regardless of thread count.
template <class Num>
JointRule<Num> sample_choices(const CdrumRepresentation<double>& rep,
                              const ObservationDomain& domain, int n_agents,
                              std::uint64_t seed) {
  const OrderSpace& space = OrderSpace::get(rep.u.size());
  JointRule<Num> p;
  p.u = rep.u;
  p.periods = domain.periods;
  p.domain = domain;
  PrefDist<double> uniform = PrefDist<double>::uniform(rep.u.size());
  std::vector<MenuSeq> seqs(domain.observed.begin(), domain.observed.end());
  std::vector<std::map<ChoiceSeq, long>> counts(seqs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(seqs.size()); ++si) {
    const MenuSeq& m = seqs[static_cast<std::size_t>(si)];
    auto& local = counts[static_cast<std::size_t>(si)];
    for (int agent = 0; agent < n_agents; ++agent) {
      CounterRng rng = CounterRng(seed).child(static_cast<std::uint64_t>(si)).child(
          static_cast<std::uint64_t>(agent));
      ChoiceSeq realized;
      Cell signature;  // realized choices with I-cell menus
      std::size_t rank = rng.next_weighted(rep.nu.weight);
      for (int tau = 0; tau < domain.periods; ++tau) {
        if (tau > 0) {
          const PrefDist<double>* d =
              rep.transitions[static_cast<std::size_t>(tau) - 1].find(signature);
          if (!d) d = &uniform;
          rank = rng.next_weighted(d->weight);
        }
        int x = space.top(rank, m.menus[static_cast<std::size_t>(tau)]);
        realized.choices.push_back(static_cast<std::uint8_t>(x));
        signature = signature.extended(space.icell(rank, x), x);
      }
      ++local[realized];
    }
  }
  for (std::size_t si = 0; si < seqs.size(); ++si) {
    for (const auto& [choices, count] : counts[si])
      p.prob[Cell{seqs[si], choices}] = Num(count) / Num(n_agents);
  }
  return p;
}

// Trajectories through a conditional system (parametric sources evaluate to
// one of these first).
template <class Num>
JointRule<Num> sample_choices(const ConditionalSystem<double>& ccs,
                              const ObservationDomain& domain, int n_agents,
                              std::uint64_t seed) {
  const Universe& u = ccs.u;
  JointRule<Num> p;
  p.u = u;
  p.periods = domain.periods;
  p.domain = domain;
  std::vector<MenuSeq> seqs(domain.observed.begin(), domain.observed.end());
  std::vector<std::map<ChoiceSeq, long>> counts(seqs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(seqs.size()); ++si) {
    const MenuSeq& m = seqs[static_cast<std::size_t>(si)];
    auto& local = counts[static_cast<std::size_t>(si)];
    std::vector<double> weights(static_cast<std::size_t>(u.size()));
    for (int agent = 0; agent < n_agents; ++agent) {
      CounterRng rng = CounterRng(seed).child(static_cast<std::uint64_t>(si)).child(
          static_cast<std::uint64_t>(agent));
      Cell hist;
      for (int tau = 0; tau < domain.periods; ++tau) {
        Mask menu = m.menus[static_cast<std::size_t>(tau)];
        for (int z = 0; z < u.size(); ++z)
          weights[static_cast<std::size_t>(z)] =
              contains(menu, z)
                  ? (tau == 0 ? ccs.first_at(menu, z) : ccs.block_at(hist, menu, z))
                  : 0.0;
        int x = static_cast<int>(rng.next_weighted(weights));
        hist = hist.extended(menu, x);
      }
      ++local[hist.choices];
    }
  }
  for (std::size_t si = 0; si < seqs.size(); ++si) {
    for (const auto& [choices, count] : counts[si])
      p.prob[Cell{seqs[si], choices}] = Num(count) / Num(n_agents);
  }
  return p;
}

}  // namespace cdrum
