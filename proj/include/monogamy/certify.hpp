#pragma once

#include "monogamy/bounds.hpp"
#include "monogamy/graph.hpp"
#include "monogamy/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace monogamy {

/// Vertex subsets of a scenario plus the part each expression term is
/// charged to. Parts may overlap.
struct Decomposition {
  std::vector<VertexSet> parts;
  /// term index -> part index
  std::vector<std::size_t> term_part;
};

enum class Verdict { certified, failed };

std::string to_string(Verdict v);

struct PartReport {
  VertexSet vertices;
  UndirectedGraph subgraph;
  bool chordal = false;
  /// Chordless cycle of the induced subgraph, in scenario indices.
  std::optional<std::vector<std::size_t>> witness_cycle;
  std::vector<std::size_t> terms;
  Expression reduced;
  Rational value;
  std::optional<Assignment> witness;
};

struct MonogamyCertificate {
  Expression expression;
  /// Classical value of the whole expression; when certified it is also the
  /// no-disturbance bound.
  Rational classical_value;
  std::optional<Assignment> witness;
  std::vector<PartReport> parts;
  Verdict verdict = Verdict::failed;
  std::string reason;
  std::string reduced_bound_kind = "classical";

  bool certified() const { return verdict == Verdict::certified; }
  Rational part_sum() const;
};

/// Checks (a) every part induces a chordal subgraph, (b) every term is
/// charged once to a part containing its support, (c) the per-part classical
/// values add up to the classical value of `e`. Throws InputError when a
/// term's support lies in no part or indices are out of range.
MonogamyCertificate verify_decomposition(const Expression& e, const Decomposition& d,
                                         const ClassicalOptions& options = {});

/// Decomposition charging each term to the first part that contains it.
Decomposition assign_terms(const Expression& e, std::vector<VertexSet> parts);

struct SearchOptions {
  /// Node budget for the enumeration; BudgetExceeded when it runs out.
  unsigned long long budget = 1ULL << 34;
  unsigned threads = 1;
  /// Enumerate terms in reverse canonical order (independent audit run).
  bool reverse_order = false;
};

struct SearchTrace {
  unsigned long long nodes = 0;
  unsigned long long pruned_non_chordal = 0;
  unsigned long long pruned_bound = 0;
  unsigned long long leaves = 0;
  /// Every branch was explored (or cut by a prune) before returning.
  bool complete = false;
};

struct SearchResult {
  std::optional<Decomposition> decomposition;
  std::optional<MonogamyCertificate> certificate;
  SearchTrace trace;
  /// Canonical term order used by the enumeration.
  std::vector<std::size_t> term_order;
  Rational classical_value;
};

/// Exhaustive search over partitions of the terms into at most `max_parts`
/// groups, each group's part being the union of its supports. Returns the
/// first certified decomposition in canonical order, or none.
SearchResult search_decomposition(const Expression& e, std::size_t max_parts, const SearchOptions& options = {});

/// Two cycle expressions sharing k >= 2 vertices. The first cycle has
/// vertices 0..n-1 with its contradiction on edge (n-1, 0); the second has
/// vertices 0..m-1 and its contradiction on edge (contradiction, contradiction+1).
/// shared[l] = (i_l, j_l) identifies vertex i_l of the first cycle with
/// vertex j_l of the second; both coordinates strictly increasing.
struct CycleConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::size_t contradiction = 0;
};

enum class CycleCase { outer, inner };

std::string to_string(CycleCase c);

struct CycleDecomposition {
  /// Union of both cycles plus any edges added to make the parts chordal.
  ScenarioPtr scenario;
  Expression expression;
  Decomposition decomposition;
  CycleCase which = CycleCase::outer;
  std::vector<std::pair<std::string, std::string>> added_edges;
  /// Terms of `expression` carrying the contradiction of each cycle.
  std::vector<std::size_t> contradiction_terms;
};

/// Which of the two constructions applies; InputError if the configuration
/// is malformed.
CycleCase classify_cycle_config(const CycleConfig& config);

/// Dichotomic cycle pair I(n) + I(m), MAXIMIZE.
CycleDecomposition cycle_decomposition(const CycleConfig& config);

/// d-outcome directed cycle pair, MINIMIZE. Only the outer construction is
/// supported; an inner configuration is an InputError.
CycleDecomposition cycle_decomposition_d_outcome(const CycleConfig& config, int d);

/// Adds fill edges until every part induces a chordal subgraph.
ScenarioPtr triangulate_parts(const Scenario& s, const std::vector<VertexSet>& parts,
                              std::vector<std::pair<std::string, std::string>>* added = nullptr);

}  // namespace monogamy
