#pragma once

#include "monogamy/behavior.hpp"
#include "monogamy/certify.hpp"
#include "monogamy/scenario.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace monogamy {

/// Where an expected value comes from: printed in the source material, or
/// computed here (brute force / LP) and pinned as a regression value.
enum class Origin { stated, derived };

std::string to_string(Origin o);

struct ExpectedValue {
  std::string key;
  Rational value;
  Origin origin = Origin::stated;
};

struct NamedBox {
  std::string name;
  Behavior box;
};

struct NamedDecomposition {
  std::string name;
  std::string expression;
  Decomposition decomposition;
  bool expect_certified = true;
};

/// A decomposition search to run on reproduce; expect_found = false means
/// the search must finish its exhaustive trace with no certificate.
struct SearchSpec {
  std::string expression;
  std::size_t max_parts = 0;
  bool expect_found = true;
};

/// A deterministic strategy whose value is checked against key
/// "strategy:<name>"; saturating strategies reach the algebraic value.
struct Strategy {
  std::string name;
  std::string expression;
  Assignment assignment;
  bool saturates = false;
};

struct Fixture {
  std::string name;
  ScenarioPtr scenario;
  std::vector<Expression> expressions;
  std::vector<NamedBox> boxes;
  std::vector<NamedDecomposition> decompositions;
  std::vector<SearchSpec> searches;
  std::vector<Strategy> strategies;
  /// Keys: classical:<expr>, nd:<expr>, algebraic:<expr>, box:<box>:<expr>,
  /// certificate:<decomposition>, part:<decomposition>:<j> (1-based).
  std::vector<ExpectedValue> expected;
  /// What the load-time gate checked (and which table reading it kept).
  std::vector<std::string> gate_log;

  const Expression& expression(std::string_view name) const;
  const Behavior& box(std::string_view name) const;
  const ExpectedValue& value(std::string_view key) const;
};

/// Names accepted by load_fixture. Parameterised families are written
/// cycle_pair(n,m,k,case) and cycle_pair_d(n,m,d); colons work too.
std::vector<std::string> fixture_names();

/// Builds a fixture and runs its verification gate; throws Error with a
/// diagnostic if the gate fails and InputError for unknown names.
Fixture load_fixture(std::string_view name);

struct Claim {
  std::string fixture;
  std::string label;
  std::string expected;
  std::string actual;
  Origin origin = Origin::stated;
  bool pass = false;
};

struct ReproduceOptions {
  unsigned threads = 1;
  unsigned long long budget = 1ULL << 34;
};

/// Recomputes every value of a fixture (bounds, LPs, certificates, searches)
/// and compares it with the expected value.
std::vector<Claim> reproduce(const Fixture& fixture, const ReproduceOptions& options = {});

/// Fixture names run by "reproduce all".
std::vector<std::string> reproduce_all_names();

/// Which bit of a 4-outcome result a mask letter refers to. The pinned
/// reading is outcome o = 2*b0 + b1 with "10" -> b0, "01" -> b1, "11" -> b0^b1.
enum class BitOrder { high_first, low_first };

/// <X^{mx} Y^{my}> for two 4-outcome observables: the product over both
/// parties of (-1)^(selected bits).
ExpressionTerm bit_correlator_term(const Scenario& s, const std::pair<std::string, std::string>& observables,
                                   const std::pair<std::string, std::string>& masks, Rational coefficient = 1,
                                   BitOrder order = BitOrder::high_first);

// Expression builders shared by fixtures and tests.

/// <A1>+<A4>+<B1>+<B2>-<A1B1>-<A1B2>-<A1B3>-<A4B1>-<A4B2>+<A4B3>-<A6B1>+<A6B2>
/// with a = {A1, A4, A6} and b = {B1, B2, B3}.
Expression i3322_expression(ScenarioPtr s, const std::array<std::string, 3>& a, const std::array<std::string, 3>& b,
                            std::string name);

/// sum_{i<n} <X_i X_{i+1}> - <X_n X_1>.
Expression cycle_expression(ScenarioPtr s, const std::vector<std::string>& ids, std::string name);

/// <A1B1>+<A1B2>+<A2B1>-<A2B2>.
Expression chsh_expression(ScenarioPtr s, const std::array<std::string, 2>& a, const std::array<std::string, 2>& b,
                           std::string name);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

}  // namespace monogamy
