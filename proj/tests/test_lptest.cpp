#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdrum/fixtures.hpp"
#include "cdrum/lp_test.hpp"

using namespace cdrum;

namespace {

const Tolerance<Rational> kExact = Tolerance<Rational>::standard();

}  // namespace

TEST_CASE("closed-form row counts reproduce the published schedule") {
  CHECK(matrix_sizes(2) == std::pair<std::uint64_t, std::uint64_t>{8, 24});
  CHECK(matrix_sizes(3) == std::pair<std::uint64_t, std::uint64_t>{108, 216});
  CHECK(matrix_sizes(4) == std::pair<std::uint64_t, std::uint64_t>{2304, 1472});
  CHECK(matrix_sizes(5) == std::pair<std::uint64_t, std::uint64_t>{72000, 8800});
  CHECK(matrix_sizes(6) == std::pair<std::uint64_t, std::uint64_t>{3110400, 48768});
  CHECK(matrix_sizes(7) == std::pair<std::uint64_t, std::uint64_t>{177811200, 257152});
}

TEST_CASE("materialized triple-convention rows match the closed form") {
  for (int n = 2; n <= 4; ++n) {
    Universe u = n == 2 ? Universe({"a", "b"})
                        : (n == 3 ? Universe({"a", "b", "c"}) : Universe({"a", "b", "c", "d"}));
    auto E = build_E(u, full_domain(u, 2), VertexConvention::PerChoiceTriple);
    CHECK(E.materialized_rows == matrix_sizes(n).first);
  }
}

TEST_CASE("materialized facet rows match the closed form") {
  for (int n = 2; n <= 4; ++n) {
    Universe u = n == 2 ? Universe({"a", "b"})
                        : (n == 3 ? Universe({"a", "b", "c"}) : Universe({"a", "b", "c", "d"}));
    auto F = build_F(u, full_domain(u, 2));
    CHECK(F.rows.size() == matrix_sizes(n).second);
    CHECK(F.inflow_rows == 0);  // every menu observed
    CHECK(F.init_rows == 0);
    std::uint64_t cells = (std::uint64_t(n) << (n - 1)) * (std::uint64_t(n) << (n - 1));
    CHECK(F.consistency_rows == cells);
  }
}

TEST_CASE("full tuple rows sum to one inside every observed block") {
  Universe u({"a", "b", "c"});
  auto domain = full_domain(u, 2);
  auto E = build_E(u, domain, VertexConvention::FullTuple);
  CHECK(E.materialized_rows == 6u * 6u * 6u * 6u);
  // group columns by menu product and check each row hits each block once
  std::map<MenuSeq, std::vector<std::uint32_t>> blocks;
  for (std::uint32_t i = 0; i < E.columns.size(); ++i)
    blocks[E.columns[i].menus].push_back(i);
  for (std::size_t r = 0; r < E.rows.size(); r += 97) {
    std::set<std::uint32_t> hit(E.rows[r].begin(), E.rows[r].end());
    for (const auto& [menus, cols] : blocks) {
      int count = 0;
      for (std::uint32_t c : cols) count += hit.count(c);
      CHECK(count == 1);
    }
  }
}

TEST_CASE("triple rows mark only blocks where the designated choice wins") {
  Universe u({"a", "b"});
  auto E = build_E(u, full_domain(u, 2), VertexConvention::PerChoiceTriple);
  CHECK(E.materialized_rows == 8);
  // each row covers exactly the products whose first menu selects x
  for (const auto& row : E.rows) {
    CHECK(row.size() <= 9);
    CHECK(!row.empty());
  }
}

TEST_CASE("flow row groups fire exactly at unobserved first-period menus") {
  Universe u({"a", "b", "c"});
  ObservationDomain dom;
  dom.periods = 2;
  // observe only products whose first menu is the full set
  for (Mask b : all_menus(3)) dom.observed.insert(MenuSeq{{u.full_mask(), b}});
  auto F = build_F(u, dom);
  CHECK(F.init_rows == 0);       // the full menu is observed
  CHECK(F.inflow_rows == 6);     // every proper nonempty menu is unobserved
  auto Ffull = build_F(u, dom, true);
  CHECK(Ffull.inflow_rows == 6);
  CHECK(Ffull.init_rows == 1);
}

TEST_CASE("vertex and facet tests accept consistent tables in exact mode") {
  auto two = fixtures::perfect_habit<Rational>();
  CHECK(test_cdrum_vertex(two).feasible);
  CHECK(test_cdrum_facet(two).feasible);
  auto four = fixtures::state_dependent_pair<Rational>();
  CHECK(test_cdrum_vertex(four).feasible);
  CHECK(test_cdrum_facet(four).feasible);
  CHECK(test_cdrum_facet(four, true).feasible);
}

TEST_CASE("both tests reject the self-control fixture in exact mode") {
  auto one = fixtures::waning_self_control<Rational>();
  auto vertex = test_cdrum_vertex(one);
  auto facet = test_cdrum_facet(one);
  CHECK_FALSE(vertex.feasible);
  CHECK_FALSE(facet.feasible);
  CHECK(vertex.statistic > 0);
  CHECK(facet.statistic > 0);
}

TEST_CASE("quadratic path: consistent mixtures pass, perturbed ones fail") {
  Universe u({"a", "b", "c"});
  auto draw = random_mixture<double>(u, 2, 4, 2024);
  auto ok_v = test_cdrum_vertex(draw.rule);
  auto ok_f = test_cdrum_facet(draw.rule);
  CHECK(ok_v.feasible);
  CHECK(ok_f.feasible);
  CHECK(ok_v.statistic <= 1e-8);

  auto bad = perturb(draw.rule, 0.2, 99);
  auto bad_v = test_cdrum_vertex(bad);
  auto bad_f = test_cdrum_facet(bad);
  CHECK_FALSE(bad_v.feasible);
  CHECK_FALSE(bad_f.feasible);
  CHECK(bad_v.statistic > 1e-6);
  CHECK(bad_f.statistic > 1e-6);
}

TEST_CASE("zero right-hand side solves at zero with the zero vector") {
  std::vector<std::vector<std::pair<std::uint32_t, int>>> rows{{{0, 1}, {1, 1}}, {{1, 1}}};
  auto out = solve_cone_feasibility(rows, 2, {0.0, 0.0});
  CHECK(out.feasible);
  CHECK(out.statistic == 0.0);
  for (double v : out.minimizer) CHECK(v == 0.0);
}

TEST_CASE("feasibility classification does not depend on the diagonal weight") {
  Universe u({"a", "b", "c"});
  auto draw = random_mixture<double>(u, 2, 3, 31);
  auto bad = perturb(draw.rule, 0.2, 32);
  auto F = build_F(u, draw.rule.domain);
  std::vector<double> omega(F.rows.size());
  CounterRng rng(5);
  for (auto& w : omega) w = 0.5 + rng.next_unit() * 4.0;
  for (const auto& rule : {draw.rule, bad}) {
    auto l = F.rhs_for(rule);
    auto plain = solve_cone_feasibility(F.rows, F.columns.size(), l);
    auto weighted = solve_cone_feasibility(F.rows, F.columns.size(), l, omega);
    CHECK(plain.feasible == weighted.feasible);
  }
}

TEST_CASE("tuple and triple conventions agree on feasibility") {
  Universe u({"a", "b", "c"});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto draw = random_mixture<double>(u, 2, 3, seed);
    auto bad = perturb(draw.rule, 0.25, seed);
    for (const auto& rule : {draw.rule, bad}) {
      VertexTestOptions tuple, triple;
      tuple.convention = VertexConvention::FullTuple;
      triple.convention = VertexConvention::PerChoiceTriple;
      CHECK(test_cdrum_vertex(rule, tuple).feasible ==
            test_cdrum_vertex(rule, triple).feasible);
    }
  }
}

TEST_CASE("feasible tuple minimizers sum to one without a normalization row") {
  Universe u({"a", "b", "c"});
  for (std::uint64_t seed : {5u, 6u}) {
    auto draw = random_mixture<double>(u, 2, 4, seed);
    VertexTestOptions options;
    options.convention = VertexConvention::FullTuple;
    auto out = test_cdrum_vertex(draw.rule, options);
    REQUIRE(out.feasible);
    double total = 0.0;
    for (double r : out.minimizer) total += r;
    CHECK(std::abs(total - 1.0) <= 1e-8);
  }
}

TEST_CASE("hiding one menu product keeps a consistent rule feasible") {
  Universe u({"a", "b", "c"});
  auto draw = random_mixture<Rational>(u, 2, 3, 404);
  MenuSeq hide{{0b011, 0b101}};
  ObservationDomain dom = draw.rule.domain;
  dom.observed.erase(hide);
  auto limited = restrict_rule(draw.rule, dom);
  CHECK(test_cdrum_vertex(limited).feasible);
  CHECK(test_cdrum_facet(limited).feasible);
  CHECK(test_cdrum_facet(limited, true).feasible);
  // the triple convention deduplicates heavily on limited domains and must
  // reach the same verdict
  VertexTestOptions triple;
  triple.convention = VertexConvention::PerChoiceTriple;
  CHECK(test_cdrum_vertex(limited, triple).feasible);
}

TEST_CASE("tuple materialization refuses four alternatives") {
  Universe u({"a", "b", "c", "d"});
  CHECK_THROWS_AS(build_E(u, full_domain(u, 2), VertexConvention::FullTuple),
                  UniverseTooLargeError);
}

TEST_CASE("a limited-domain table with no consistent extension is rejected") {
  // two-period universe {x, y}: observe only ({x,y}, {x,y}) and force the
  // first-period marginal of x to differ from a second observation at
  // ({x,y}, {x}); no full-domain extension can satisfy marginality
  Universe u({"x", "y"});
  ObservationDomain dom;
  dom.periods = 2;
  MenuSeq a{{0b11, 0b11}}, b{{0b11, 0b01}};
  dom.observed.insert(a);
  dom.observed.insert(b);
  JointRule<Rational> p;
  p.u = u;
  p.periods = 2;
  p.domain = dom;
  p.prob[Cell{a, ChoiceSeq{{0, 0}}}] = Rational(3, 4);
  p.prob[Cell{a, ChoiceSeq{{1, 1}}}] = Rational(1, 4);
  p.prob[Cell{b, ChoiceSeq{{0, 0}}}] = Rational(1, 4);
  p.prob[Cell{b, ChoiceSeq{{1, 0}}}] = Rational(3, 4);
  CHECK(validate_rule(p, kExact) == 0);
  CHECK_FALSE(test_cdrum_vertex(p).feasible);
  CHECK_FALSE(test_cdrum_facet(p).feasible);
}

TEST_CASE("agreement harness is deterministic and unanimous") {
  Universe u({"a", "b", "c"});
  auto r1 = oracle_agreement(u, 16, 99);
  auto r2 = oracle_agreement(u, 16, 99);
  CHECK(r1.all_agree);
  CHECK(r1.agreements == 16);
  REQUIRE(r1.detail.size() == r2.detail.size());
  for (std::size_t i = 0; i < r1.detail.size(); ++i) {
    CHECK(r1.detail[i].kind == r2.detail[i].kind);
    CHECK(r1.detail[i].vertex == r2.detail[i].vertex);
  }
  auto empty = oracle_agreement(u, 0, 1);
  CHECK(empty.trials == 0);
  CHECK(empty.all_agree);
}
