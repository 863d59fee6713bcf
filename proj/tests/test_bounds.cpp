#include "helpers.hpp"

#include "monogamy/catalog.hpp"
#include "monogamy/errors.hpp"

#include <doctest.h>

#include <numeric>

using namespace monogamy;
using testing::party;

namespace {

ScenarioPtr chsh_scenario() { return build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}}); }

// d-outcome directed cycle <[X_i - X_{i+1}]> ... + <[X_n - X_1 - 1]>, MINIMIZE.
Expression directed_cycle(std::size_t n, int d) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  std::vector<int> outcomes(n, d);
  auto s = testing::scenario_from_edges(n, edges, outcomes);
  std::vector<ExpressionTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = s->observable(i).id;
    const auto& y = s->observable((i + 1) % n).id;
    terms.push_back(modular_difference(*s, x, y, i + 1 == n ? -1 : 0));
  }
  return Expression(s, "directed", Sense::minimize, std::move(terms));
}

}  // namespace

TEST_CASE("algebraic maxima") {
  auto s = chsh_scenario();
  CHECK(algebraic_max(chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "CHSH")) == 4);
  CHECK(algebraic_max(load_fixture("cabello_2334").expression("I")) == 9);
  for (std::size_t n : {4u, 5u, 7u}) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    auto c = testing::scenario_from_edges(n, edges);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(c->observable(i).id);
    CHECK(algebraic_max(cycle_expression(c, ids, "I(n)")) == static_cast<long>(n));
  }
}

TEST_CASE("classical maxima of the named expressions") {
  const Fixture act = load_fixture("i3322_activation");
  CHECK(classical_max(act.expression("I3322")).value == 4);
  const Fixture kcbs = load_fixture("kcbs");
  CHECK(classical_max(kcbs.expression("I(5)")).value == 3);
  const Fixture xor3 = load_fixture("xor3_counterexample");
  CHECK(classical_max(xor3.expression("I_AB")).value == 5);

  const Fixture cabello = load_fixture("cabello_2334");
  const Expression& e = cabello.expression("I");
  CHECK(classical_assignment_count(e) == 4096);
  const auto r = classical_max(e);
  CHECK(r.value == 7);
  REQUIRE(r.witness);
  CHECK(e.evaluate(*r.witness) == 7);

  for (int d : {2, 3, 4}) CHECK(classical_max(directed_cycle(5, d)).value == d - 1);
}

TEST_CASE("classical enumeration respects the budget") {
  const Fixture cabello = load_fixture("cabello_2334");
  ClassicalOptions o;
  o.budget = 100;
  try {
    classical_max(cabello.expression("I"), o);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.required() == 4096);
  }
}

TEST_CASE("classical results do not depend on the thread count") {
  const Fixture cabello = load_fixture("cabello_2334");
  const auto one = classical_max(cabello.expression("I"));
  for (unsigned t : {2u, 3u, 8u}) {
    ClassicalOptions o;
    o.threads = t;
    const auto many = classical_max(cabello.expression("I"), o);
    CHECK(many.value == one.value);
    CHECK(many.witness == one.witness);
  }
}

TEST_CASE("minimize sense") {
  auto s = chsh_scenario();
  Expression low(s, "low", Sense::minimize, chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "x").terms());
  CHECK(classical_max(low).value == -2);
  CHECK(nd_max(low).optimum == -4);
  const auto d = directed_cycle(4, 3);
  CHECK(nd_max(d).optimum <= classical_max(d).value);
}

TEST_CASE("no-disturbance polytope sizes") {
  const Fixture xor3 = load_fixture("xor3_counterexample");
  const auto p = nd_polytope(xor3.scenario);
  CHECK(p.contexts.size() == 27);
  CHECK(p.lp.num_variables == 216);

  const Fixture act = load_fixture("i3322_activation");
  const auto q = nd_polytope(act.scenario);
  CHECK(q.contexts.size() == 54);
  std::size_t sixteen = 0, eight = 0;
  for (const auto& c : q.contexts) {
    if (c.size() == 4) ++sixteen;
    if (c.size() == 3) ++eight;
  }
  CHECK(sixteen == 45);
  CHECK(eight == 9);
  CHECK(q.lp.num_variables == 45 * 16 + 9 * 8);

  auto single = testing::scenario_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto r = nd_polytope(single);
  CHECK(r.lp.num_variables == 8);
  CHECK(r.normalization_rows == 1);
  CHECK(r.marginal_rows == 0);
}

TEST_CASE("no-disturbance maxima") {
  const Fixture act = load_fixture("i3322_activation");
  CHECK(nd_max(act.expression("I3322")).optimum == 8);

  const Fixture xor3 = load_fixture("xor3_counterexample");
  const auto game = nd_max(xor3.expression("I_AB"));
  CHECK(game.optimum == 9);
  const auto sum = nd_max(xor3.expression("I_AB + I_AC"));
  CHECK(sum.status == LPStatus::optimal);
  CHECK(sum.optimum == 10);
  REQUIRE(sum.witness);
  CHECK(is_no_disturbance(*sum.witness));
  CHECK(evaluate(xor3.expression("I_AB + I_AC"), *sum.witness) == 10);

  const Fixture chsh = load_fixture("chsh_monogamy");
  CHECK(nd_max(chsh.expression("CHSH_AB + CHSH_AC")).optimum == 4);
  CHECK(nd_max(chsh.expression("CHSH_AB")).optimum == 4);

  const Fixture kcbs = load_fixture("kcbs");
  const auto k = nd_max(kcbs.expression("I(5)"));
  CHECK(k.optimum == 5);
  REQUIRE(k.witness);
  CHECK(evaluate(kcbs.expression("I(5)"), *k.witness) == 5);
}

TEST_CASE("fixture boxes never exceed the no-disturbance maximum") {
  for (const char* name : {"cabello_2334", "i3322_no_single_monogamy"}) {
    const Fixture f = load_fixture(name);
    for (const auto& b : f.boxes) {
      for (const auto& e : f.expressions) CHECK(evaluate(e, b.box) <= nd_max(e).optimum);
    }
  }
}

TEST_CASE("classical equals no-disturbance on chordal scenarios") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    std::vector<int> outcomes(n);
    for (auto& d : outcomes) d = 2 + static_cast<int>(rng() % 2);
    auto s = testing::scenario_from_edges(n, testing::random_chordal_edges(rng, n), outcomes);
    const auto e = testing::random_expression(rng, s);
    const auto c = classical_max(e);
    const auto nd = nd_max(e);
    CHECK(c.value == nd.optimum);
    REQUIRE(nd.witness);
    CHECK(evaluate(e, *nd.witness) == nd.optimum);
  }
}

TEST_CASE("classical <= no-disturbance <= algebraic on random scenarios") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    auto g = testing::random_graph(rng, n, 0.5);
    std::vector<std::pair<std::size_t, std::size_t>> edges = g.edges();
    auto s = testing::scenario_from_edges(n, edges);
    const auto e = testing::random_expression(rng, s);
    const Rational c = classical_max(e).value;
    const Rational nd = nd_max(e).optimum;
    CHECK(c <= nd);
    CHECK(nd <= algebraic_max(e));
  }
}

TEST_CASE("no-disturbance maximum is invariant under relabeling") {
  const Fixture kcbs = load_fixture("kcbs");
  const Expression& e = kcbs.expression("I(5)");
  const Scenario& s = e.scenario();
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<std::size_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Observable> obs(s.size());
    for (std::size_t v = 0; v < s.size(); ++v) obs[perm[v]] = s.observable(v);
    auto t = std::make_shared<const Scenario>(obs, s.edge_ids());
    // Flip the outcome labels of one observable as well.
    const std::size_t flipped = rng() % s.size();
    std::vector<ExpressionTerm> terms;
    for (auto term : e.terms()) {
      ExpressionTerm u = term;
      for (auto& v : u.support) v = perm[v];
      for (std::size_t k = 0; k < term.support.size(); ++k) {
        if (term.support[k] != flipped) continue;
        std::vector<Rational> swapped(term.values.size());
        for (std::size_t i = 0; i < term.values.size(); ++i) {
          auto out = tuple_outcomes(s, term.support, i);
          out[k] = 1 - out[k];
          std::size_t j = 0;
          for (std::size_t q = 0; q < out.size(); ++q) j = j * 2 + static_cast<std::size_t>(out[q]);
          swapped[j] = term.values[i];
        }
        u.values = swapped;
      }
      terms.push_back(u);
    }
    const Expression relabeled(t, e.name(), e.sense(), terms);
    CHECK(nd_max(relabeled).optimum == 5);
    CHECK(classical_max(relabeled).value == 3);
  }
}
