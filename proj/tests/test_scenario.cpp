#include "helpers.hpp"

#include "monogamy/behavior.hpp"
#include "monogamy/catalog.hpp"
#include "monogamy/errors.hpp"

#include <doctest.h>

using namespace monogamy;
using testing::party;

TEST_CASE("rationals parse and print as p/q") {
  CHECK(parse_rational("13/3") == Rational(13, 3));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(to_string(Rational(10)) == "10/1");
  CHECK(to_string(Rational(-2, 6)) == "-1/3");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
  CHECK_THROWS_AS(parse_rational("0.5"), InputError);
}

TEST_CASE("bell scenarios connect exactly the distinct parties") {
  auto chsh = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  CHECK(chsh->size() == 4);
  CHECK(chsh->graph().edge_count() == 4);
  CHECK(chsh->adjacent(chsh->index_of("A1"), chsh->index_of("B2")));
  CHECK_FALSE(chsh->adjacent(chsh->index_of("A1"), chsh->index_of("A2")));

  auto three = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}, {"C", party("C", 2)}});
  CHECK(three->graph().edge_count() == 12);

  auto alone = build_bell_scenario({{"A", party("A", 3)}});
  CHECK(alone->graph().edge_count() == 0);

  CHECK_THROWS_AS(build_bell_scenario({{"A", party("A", 2)}, {"B", party("A", 2)}}), InputError);
  CHECK_THROWS_AS(build_bell_scenario({{"A", party("A", 2)}, {"A", party("B", 2)}}), InputError);
}

TEST_CASE("add_contexts builds the five-cycle and is idempotent") {
  auto s = build_bell_scenario({{"A", party("A", 5)}});
  auto c5 = add_contexts(*s, {{"A1", "A2"}, {"A2", "A3"}, {"A3", "A4"}, {"A4", "A5"}, {"A5", "A1"}});
  CHECK(c5->graph().edge_count() == 5);
  CHECK_FALSE(is_chordal(c5->graph()));
  auto again = add_contexts(*c5, {{"A1", "A2"}});
  CHECK(again->edge_ids() == c5->edge_ids());
  CHECK_THROWS_AS(add_contexts(*s, {{"A1", "Z9"}}), InputError);

  auto tri = build_bell_scenario({{"A", party("A", 6)}, {"B", party("B", 3)}, {"C", party("C", 3)}});
  CHECK(tri->adjacent(tri->index_of("B1"), tri->index_of("C2")));
  auto plain = build_bell_scenario({{"A", party("A", 6)}, {"BC", [] {
                                                              auto v = party("B", 3);
                                                              for (auto& o : party("C", 3)) v.push_back(o);
                                                              return v;
                                                            }()}});
  CHECK_FALSE(plain->adjacent(plain->index_of("B1"), plain->index_of("C2")));
  auto grey = add_contexts(*plain, {{"B1", "C2"}});
  CHECK(grey->adjacent(grey->index_of("B1"), grey->index_of("C2")));
}

TEST_CASE("scenario construction rejects malformed input") {
  CHECK_THROWS_AS(Scenario({Observable{"A", {}, 2, {}}, Observable{"A", {}, 2, {}}}, {}), InputError);
  CHECK_THROWS_AS(Scenario({Observable{"A", {}, 2, {}}}, {{"A", "B"}}), InputError);
  CHECK_THROWS_AS(Scenario({Observable{"A", {}, 2, {}}}, {{"A", "A"}}), InputError);
  CHECK_THROWS_AS(Scenario({Observable{"A", {}, 1, {}}}, {}), InputError);
}

TEST_CASE("expression terms must be contexts with full value tables") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  CHECK_THROWS_AS(Expression(s, "bad", Sense::maximize, {correlator(*s, {"A1", "A2"})}), InputError);
  ExpressionTerm short_table{{0, 2}, 1, {1, -1, -1}};
  CHECK_THROWS_AS(Expression(s, "bad", Sense::maximize, {short_table}), InputError);
}

TEST_CASE("dichotomic correlators use value (-1)^a") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  auto t = correlator(*s, {"A1", "B1"});
  REQUIRE(t.values.size() == 4);
  CHECK(t.values == std::vector<Rational>{1, -1, -1, 1});
  auto single = correlator(*s, {"B2"}, 3);
  CHECK(single.values == std::vector<Rational>{1, -1});
  CHECK(single.coefficient == 3);
}

TEST_CASE("modular difference terms") {
  auto s = build_bell_scenario({{"A", party("A", 1, 3)}, {"B", party("B", 1, 3)}});
  auto t = modular_difference(*s, "A1", "B1", 0);
  // [a - b] mod 3 in row-major order, a slowest.
  CHECK(t.values == std::vector<Rational>{0, 2, 1, 1, 0, 2, 2, 1, 0});
  auto shifted = modular_difference(*s, "A1", "B1", -1);
  CHECK(shifted.values == std::vector<Rational>{2, 1, 0, 0, 2, 1, 1, 0, 2});
}

TEST_CASE("combine concatenates weighted terms") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}, {"C", party("C", 2)}});
  auto ab = chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "CHSH_AB");
  auto ac = chsh_expression(s, {"A1", "A2"}, {"C1", "C2"}, "CHSH_AC");
  auto sum = combine({ab, ac}, {1, 2});
  CHECK(sum.terms().size() == 8);
  CHECK(sum.name() == "CHSH_AB + 2/1*CHSH_AC");

  auto same = combine({ab}, {1});
  CHECK(same.terms().size() == ab.terms().size());
  CHECK(combine({ab}, {0}).terms().empty());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Assignment a(s->size());
    for (auto& x : a) x = static_cast<int>(rng() % 2);
    CHECK(sum.evaluate(a) == ab.evaluate(a) + 2 * ac.evaluate(a));
    auto box = deterministic_behavior(s, a);
    CHECK(evaluate(sum, box) == evaluate(ab, box) + 2 * evaluate(ac, box));
  }

  auto other = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 3)}});
  auto foreign = chsh_expression(other, {"A1", "A2"}, {"B1", "B2"}, "x");
  CHECK_THROWS_AS(combine({ab, foreign}, {1, 1}), InputError);
}

TEST_CASE("merging equal supports preserves values") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  auto ab = chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "CHSH");
  auto doubled = combine({ab, ab}, {1, 1});
  auto merged = doubled.merged();
  CHECK(merged.terms().size() == 4);
  for (int bits = 0; bits < 16; ++bits) {
    Assignment a{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1};
    CHECK(merged.evaluate(a) == 2 * ab.evaluate(a));
  }
}

TEST_CASE("reduce_to keeps exactly the contained terms") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}, {"C", party("C", 2)}});
  auto sum = combine({chsh_expression(s, {"A1", "A2"}, {"B1", "B2"}, "AB"),
                      chsh_expression(s, {"A1", "A2"}, {"C1", "C2"}, "AC")},
                     {1, 1});
  auto part = reduce_to(sum, make_vertex_set(s->indices_of({"A1", "A2", "B1", "C2"})));
  REQUIRE(part.terms().size() == 4);
  std::vector<std::pair<std::vector<std::string>, Rational>> got;
  for (const auto& t : part.terms()) got.emplace_back(s->ids_of(t.support), t.coefficient);
  CHECK(got[0] == std::pair<std::vector<std::string>, Rational>{{"A1", "B1"}, 1});
  CHECK(got[1] == std::pair<std::vector<std::string>, Rational>{{"A2", "B1"}, 1});
  CHECK(got[2] == std::pair<std::vector<std::string>, Rational>{{"A1", "C2"}, 1});
  CHECK(got[3] == std::pair<std::vector<std::string>, Rational>{{"A2", "C2"}, -1});

  VertexSet all(s->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(reduce_to(sum, all).terms().size() == sum.terms().size());
  CHECK(reduce_to(sum, {}).terms().empty());

  const VertexSet v1 = make_vertex_set(s->indices_of({"A1", "A2", "B1", "C1", "C2"}));
  const VertexSet v2 = make_vertex_set(s->indices_of({"A1", "B1", "B2", "C2"}));
  CHECK(reduce_to(sum, set_intersection(v1, v2)).terms().size() == reduce_to(reduce_to(sum, v1), v2).terms().size());
}

TEST_CASE("minimize expressions normalize by negation") {
  auto s = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}});
  Expression e(s, "low", Sense::minimize, {correlator(*s, {"A1", "B1"}, 2)});
  auto n = e.normalized();
  CHECK(n.sense() == Sense::maximize);
  Assignment a{0, 0, 1, 0};
  CHECK(n.evaluate(a) == -e.evaluate(a));
}
