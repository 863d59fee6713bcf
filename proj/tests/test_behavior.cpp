#include "helpers.hpp"

#include "monogamy/catalog.hpp"
#include "monogamy/errors.hpp"

#include <doctest.h>

using namespace monogamy;
using testing::party;

namespace {

VertexSet ids(const Scenario& s, const std::vector<std::string>& names) { return make_vertex_set(s.indices_of(names)); }

}  // namespace

TEST_CASE("fixture boxes satisfy no-disturbance") {
  const Fixture cabello = load_fixture("cabello_2334");
  CHECK(is_no_disturbance(cabello.box("table")));
  CHECK(evaluate(cabello.expression("I"), cabello.box("table")) == 9);

  const Fixture single = load_fixture("i3322_no_single_monogamy");
  const Behavior& b = single.box("table");
  CHECK(is_no_disturbance(b));
  CHECK(evaluate(single.expression("I3322_AB"), b) == Rational(13, 3));
  CHECK(evaluate(single.expression("I(5)"), b) == 4);
}

TEST_CASE("swapping two entries breaks no-disturbance") {
  const Fixture cabello = load_fixture("cabello_2334");
  const Behavior& box = cabello.box("table");
  const Scenario& s = box.scenario();
  const auto ctx = box.containing_context(ids(s, {"A1", "B1", "C1"}));
  REQUIRE(ctx);
  auto tables = box.tables();
  auto& t = tables[*ctx];
  // Move mass between two entries that differ in the C1 outcome.
  const VertexSet c1 = ids(s, {"C1"});
  std::size_t from = 0, to = 0;
  bool found = false;
  for (std::size_t i = 0; i < t.size() && !found; ++i) {
    if (t[i] == 0) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      auto oi = tuple_outcomes(s, box.contexts()[*ctx], i);
      auto oj = tuple_outcomes(s, box.contexts()[*ctx], j);
      const auto pos = static_cast<std::size_t>(
          std::find(box.contexts()[*ctx].begin(), box.contexts()[*ctx].end(), c1[0]) - box.contexts()[*ctx].begin());
      if (t[j] != t[i] && oi[pos] != oj[pos]) {
        from = i;
        to = j;
        found = true;
        break;
      }
    }
  }
  REQUIRE(found);
  std::swap(t[from], t[to]);
  const Behavior broken(box.scenario_ptr(), tables);
  const auto report = check_no_disturbance(broken);
  CHECK(report.well_formed());
  CHECK_FALSE(report.no_disturbance());
  REQUIRE_FALSE(report.violations.empty());
  bool names_context = false;
  for (const auto& v : report.violations) names_context = names_context || v.first == *ctx || v.second == *ctx;
  CHECK(names_context);
}

TEST_CASE("malformed tables are reported separately") {
  auto s = build_bell_scenario({{"A", party("A", 1)}, {"B", party("B", 1)}});
  const Behavior negative(s, {{Rational(1, 2), Rational(-1, 2), Rational(1), Rational(0)}});
  auto r = check_no_disturbance(negative);
  CHECK_FALSE(r.well_formed());
  CHECK(r.violations.empty());
  const Behavior short_sum(s, {{Rational(1, 4), 0, 0, 0}});
  CHECK_FALSE(check_no_disturbance(short_sum).well_formed());
  CHECK_THROWS_AS(Behavior(s, {{1, 0, 0}}), InputError);
  CHECK_THROWS_AS(Behavior(s, {}), InputError);
}

TEST_CASE("marginals") {
  const Fixture cabello = load_fixture("cabello_2334");
  const Behavior& box = cabello.box("table");
  const Scenario& s = box.scenario();
  const auto ctx = *box.containing_context(ids(s, {"A1", "B1", "C1"}));
  const auto& c = box.contexts()[ctx];
  CHECK(marginal(box, ctx, c) == box.table(ctx));
  CHECK(marginal(box, ctx, VertexSet{}) == std::vector<Rational>{1});
  const std::vector<Rational> uniform(4, Rational(1, 4));
  CHECK(marginal(box, ctx, ids(s, {"C1"})) == uniform);
  CHECK_THROWS_AS(marginal(box, ctx, ids(s, {"A2"})), InputError);
}

TEST_CASE("deterministic behaviors") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  auto chsh = chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "CHSH");
  auto plus = deterministic_behavior(s, Assignment(s->size(), 0));
  CHECK(is_no_disturbance(plus));
  CHECK(evaluate(chsh, plus) == 2);
  CHECK_THROWS_AS(deterministic_behavior(s, Assignment{0, 0}), InputError);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    Assignment a(s->size());
    for (auto& x : a) x = static_cast<int>(rng() % 2);
    auto b = deterministic_behavior(s, a);
    CHECK(is_no_disturbance(b));
    CHECK(evaluate(chsh, b) == chsh.evaluate(a));
  }

  // The printed strategy for the C1 residual: Charlie 00, Alice 00 on A1 and
  // A2 and 10 on A3.
  const Fixture cabello = load_fixture("cabello_2334");
  for (const auto& st : cabello.strategies) {
    const Expression& e = cabello.expression(st.expression);
    const auto b = deterministic_behavior(cabello.scenario, st.assignment);
    CHECK(is_no_disturbance(b));
    CHECK(evaluate(e, b) == algebraic_max(e));
  }
}

TEST_CASE("evaluation is independent of the containing context") {
  const Fixture single = load_fixture("i3322_no_single_monogamy");
  const Behavior& b = single.box("table");
  for (const auto& e : single.expressions) {
    for (const auto& t : e.terms()) {
      std::optional<Rational> first;
      for (std::size_t c = 0; c < b.contexts().size(); ++c) {
        if (!is_subset(make_vertex_set(t.support), b.contexts()[c])) continue;
        const Rational v = evaluate_term_in(t, b, c);
        if (!first) first = v;
        CHECK(v == *first);
      }
      CHECK(first.has_value());
    }
  }
}

TEST_CASE("tables may be given in any observable order") {
  auto s = build_bell_scenario({{"A", party("A", 1)}, {"B", party("B", 1, 3)}});
  // P(a,b) listed as (B1, A1).
  std::vector<Rational> by_b{Rational(1, 6), Rational(1, 6), Rational(1, 12), Rational(1, 4), Rational(1, 3), 0};
  auto b = behavior_from_tables(s, {ContextTable{{"B1", "A1"}, by_b}});
  const auto& t = b.table(0);
  // Native order is (A1, B1): entry (a,b) = by_b[b*2 + a].
  for (int a = 0; a < 2; ++a)
    for (int bb = 0; bb < 3; ++bb) CHECK(t[static_cast<std::size_t>(a * 3 + bb)] == by_b[static_cast<std::size_t>(bb * 2 + a)]);
  auto back = context_tables(b);
  REQUIRE(back.size() == 1);
  CHECK(back[0].observables == std::vector<std::string>{"A1", "B1"});

  CHECK_THROWS_AS(behavior_from_tables(s, {}), InputError);
  CHECK_THROWS_AS(behavior_from_tables(s, {ContextTable{{"A1"}, {1, 0}}}), InputError);
  CHECK_THROWS_AS(behavior_from_tables(s, {ContextTable{{"A1", "B1"}, {1, 0}}}), InputError);
  CHECK_THROWS_AS(behavior_from_tables(s, {ContextTable{{"A1", "B1"}, t}, ContextTable{{"B1", "A1"}, by_b}}), InputError);
}

TEST_CASE("joint distribution on a single context") {
  auto s = build_bell_scenario({{"A", party("A", 1)}, {"B", party("B", 1)}});
  const Behavior b(s, {{Rational(1, 8), Rational(3, 8), Rational(1, 4), Rational(1, 4)}});
  const auto p = jpd_from_clique_tree(b);
  CHECK(p.probabilities == b.table(0));
}

TEST_CASE("joint distribution on a path") {
  // a - b - c with pair tables P(a,b) and P(b,c) sharing the b marginal.
  auto s = testing::scenario_from_edges(3, {{0, 1}, {1, 2}});
  const std::vector<Rational> ab{Rational(1, 2), Rational(1, 6), 0, Rational(1, 3)};
  const std::vector<Rational> bc{Rational(1, 4), Rational(1, 4), Rational(1, 2), 0};
  auto box = behavior_from_tables(s, {ContextTable{{"X0", "X1"}, ab}, ContextTable{{"X1", "X2"}, bc}});
  REQUIRE(is_no_disturbance(box));
  const auto p = jpd_from_clique_tree(box);
  const std::vector<Rational> pb{Rational(1, 2), Rational(1, 2)};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const Rational expect = ab[static_cast<std::size_t>(a * 2 + b)] * bc[static_cast<std::size_t>(b * 2 + c)] / pb[static_cast<std::size_t>(b)];
        CHECK(p.probabilities[static_cast<std::size_t>(a * 4 + b * 2 + c)] == expect);
      }
  CHECK(p.marginal(VertexSet{0, 1}) == ab);
  CHECK(p.marginal(VertexSet{1, 2}) == bc);
}

TEST_CASE("joint distribution round trip on the ten-vertex chordal graph") {
  const std::vector<std::vector<int>> cliques{{1, 3, 5}, {3, 5, 7}, {3, 6, 7, 8}, {3, 4, 6, 8}, {2, 4, 6}, {7, 9}, {6, 10}};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& c : cliques)
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b) edges.emplace_back(c[a] - 1, c[b] - 1);
  auto s = testing::scenario_from_edges(10, edges);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const auto joint = testing::random_joint(rng, s, 40);
    const auto box = behavior_from_joint(joint);
    CHECK(box.contexts().size() == 7);
    REQUIRE(is_no_disturbance(box));
    const auto rebuilt = jpd_from_clique_tree(box);
    Rational total = 0;
    for (const auto& x : rebuilt.probabilities) {
      CHECK(x >= 0);
      total += x;
    }
    CHECK(total == 1);
    for (std::size_t c = 0; c < box.contexts().size(); ++c) CHECK(rebuilt.marginal(box.contexts()[c]) == box.table(c));
  }
}

TEST_CASE("joint distribution of a deterministic behavior is a point mass") {
  std::mt19937_64 rng(12);
  auto s = testing::scenario_from_edges(6, testing::random_chordal_edges(rng, 6), {2, 3, 2, 2, 3, 2});
  Assignment a{1, 2, 0, 1, 0, 1};
  const auto p = jpd_from_clique_tree(deterministic_behavior(s, a));
  std::size_t index = 0;
  for (std::size_t v = 0; v < s->size(); ++v) index = index * static_cast<std::size_t>(s->outcomes(v)) + static_cast<std::size_t>(a[v]);
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) CHECK(p.probabilities[i] == (i == index ? 1 : 0));
}

TEST_CASE("joint distribution rejects non-chordal or disturbing input") {
  auto c4 = testing::scenario_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK_THROWS_AS(jpd_from_clique_tree(deterministic_behavior(c4, Assignment(4, 0))), NotChordal);

  auto path = testing::scenario_from_edges(3, {{0, 1}, {1, 2}});
  auto bad = behavior_from_tables(path, {ContextTable{{"X0", "X1"}, {1, 0, 0, 0}}, ContextTable{{"X1", "X2"}, {0, 0, 1, 0}}});
  CHECK_FALSE(is_no_disturbance(bad));
  CHECK_THROWS_AS(jpd_from_clique_tree(bad), InputError);
}

TEST_CASE("evaluation is linear in combined expressions and mixtures") {
  const Fixture single = load_fixture("i3322_no_single_monogamy");
  const Behavior& b = single.box("table");
  const auto& ab = single.expression("I3322_AB");
  const auto& i5 = single.expression("I(5)");
  CHECK(evaluate(combine({ab, i5}, {2, Rational(-1, 3)}), b) == 2 * evaluate(ab, b) - Rational(1, 3) * evaluate(i5, b));

  const auto det = deterministic_behavior(single.scenario, Assignment(single.scenario->size(), 0));
  const auto m = mix({b, det}, {Rational(1, 3), Rational(2, 3)});
  CHECK(is_no_disturbance(m));
  CHECK(evaluate(ab, m) == Rational(1, 3) * evaluate(ab, b) + Rational(2, 3) * evaluate(ab, det));
}
