#pragma once

#include "cdrum/simulate.hpp"

namespace cdrum {
namespace fixtures {

// Waning self control over {x, c}: temptation c is resisted on first
// exposure and irresistible on the second. Fails increasing differences and
// complete monotonicity; satisfies marginality.
template <class Num>
JointRule<Num> waning_self_control() {
  Universe u({"x", "c"});
  const Mask X = 1, C = 2, XC = 3;
  std::vector<std::pair<Cell, Num>> entries;
  auto add = [&](Mask a, Mask b, int x1, int x2) {
    entries.push_back({Cell{MenuSeq{{a, b}}, ChoiceSeq{{static_cast<std::uint8_t>(x1),
                                                        static_cast<std::uint8_t>(x2)}}},
                       NumTraits<Num>::one()});
  };
  add(X, X, 0, 0);
  add(X, C, 0, 1);
  add(X, XC, 0, 0);  // first exposure to temptation in period two: resisted
  add(C, X, 1, 0);
  add(C, C, 1, 1);
  add(C, XC, 1, 1);
  add(XC, X, 0, 0);  // temptation resisted in period one
  add(XC, C, 0, 1);
  add(XC, XC, 0, 1);  // second exposure: self control is gone
  return validate_rjcr(u, 2, entries, Tolerance<Num>::standard());
}

// Perfectly correlated choice through pure habit formation over {x, y}:
// whatever was consumed is preferred next period.
template <class Num>
JointRule<Num> perfect_habit() {
  Universe u({"x", "y"});
  DeterministicPattern a, b;
  a.first_order = 0;  // x first
  b.first_order = 1;  // y first
  std::map<ChoiceSeq, std::size_t> habit{{ChoiceSeq{{0}}, 0}, {ChoiceSeq{{1}}, 1}};
  a.continuation = {habit};
  b.continuation = {habit};
  Num half = NumTraits<Num>::one() / Num(2);
  return rule_from_patterns(u, 2, {a, b}, std::vector<Num>{half, half}, full_domain(u, 2));
}

// The same representation written down directly (used to cross-check
// forward evaluation against the recovered object).
template <class Num>
CdrumRepresentation<Num> perfect_habit_representation() {
  CdrumRepresentation<Num> rep;
  rep.u = Universe({"x", "y"});
  Num half = NumTraits<Num>::one() / Num(2);
  rep.nu.weight = {half, half};
  TransitionFunction<Num> t;
  t.degree = 1;
  t.state_independent = true;
  t.kernel[Cell{MenuSeq{}, ChoiceSeq{{0}}}] = PrefDist<Num>::point(2, 0);
  t.kernel[Cell{MenuSeq{}, ChoiceSeq{{1}}}] = PrefDist<Num>::point(2, 1);
  rep.transitions.push_back(std::move(t));
  return rep;
}

// Perfectly correlated choice through pure state dependence over two
// climates: preferences never change across periods.
template <class Num>
JointRule<Num> persistent_state() {
  Universe u({"coat", "tee"});
  DeterministicPattern a, b;
  a.first_order = 0;
  b.first_order = 1;
  a.continuation = {{{ChoiceSeq{{0}}, 0}, {ChoiceSeq{{1}}, 0}}};
  b.continuation = {{{ChoiceSeq{{0}}, 1}, {ChoiceSeq{{1}}, 1}}};
  Num half = NumTraits<Num>::one() / Num(2);
  return rule_from_patterns(u, 2, {a, b}, std::vector<Num>{half, half}, full_domain(u, 2));
}

// State dependent correlation over {x, y, z}: half the population keeps
// x > y > z across both periods, half keeps z > y > x. Consistent with the
// base model but not with choice set independence.
template <class Num>
JointRule<Num> state_dependent_pair() {
  Universe u({"x", "y", "z"});
  const OrderSpace& space = OrderSpace::get(3);
  std::size_t xyz = space.rank_of(Order{0, 1, 2});
  std::size_t zyx = space.rank_of(Order{2, 1, 0});
  DeterministicPattern a, b;
  a.first_order = xyz;
  b.first_order = zyx;
  std::map<ChoiceSeq, std::size_t> keep_x, keep_z;
  for (int x = 0; x < 3; ++x) {
    keep_x[ChoiceSeq{{static_cast<std::uint8_t>(x)}}] = xyz;
    keep_z[ChoiceSeq{{static_cast<std::uint8_t>(x)}}] = zyx;
  }
  a.continuation = {keep_x};
  b.continuation = {keep_z};
  Num half = NumTraits<Num>::one() / Num(2);
  return rule_from_patterns(u, 2, {a, b}, std::vector<Num>{half, half}, full_domain(u, 2));
}

}  // namespace fixtures
}  // namespace cdrum
