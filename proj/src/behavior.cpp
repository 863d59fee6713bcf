#include "monogamy/behavior.hpp"

#include <algorithm>
#include <queue>

namespace monogamy {

namespace {

constexpr std::size_t kMaxJointEntries = std::size_t{1} << 24;

// positions[k] = position of subset[k] inside context, or throws.
std::vector<std::size_t> positions_in(const VertexSet& context, std::span<const std::size_t> subset) {
  std::vector<std::size_t> pos;
  pos.reserve(subset.size());
  for (std::size_t v : subset) {
    auto it = std::lower_bound(context.begin(), context.end(), v);
    if (it == context.end() || *it != v) throw InputError("marginal: subset is not inside the context");
    pos.push_back(static_cast<std::size_t>(it - context.begin()));
  }
  return pos;
}

std::vector<Rational> marginalize(const Scenario& s, const VertexSet& context, const std::vector<Rational>& table,
                                  std::span<const std::size_t> subset) {
  auto pos = positions_in(context, subset);
  std::vector<Rational> out(s.table_size(subset), Rational(0));
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] == 0) continue;
    auto outcomes = tuple_outcomes(s, context, i);
    std::size_t j = 0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      j = j * static_cast<std::size_t>(s.outcomes(subset[k])) + static_cast<std::size_t>(outcomes[pos[k]]);
    }
    out[j] += table[i];
  }
  return out;
}

std::string join_ids(const Scenario& s, const VertexSet& vs) {
  std::string out;
  for (std::size_t v : vs) {
    if (!out.empty()) out += ",";
    out += s.observable(v).id;
  }
  return out;
}

}  // namespace

Behavior::Behavior(ScenarioPtr scenario, std::vector<std::vector<Rational>> tables)
    : scenario_(std::move(scenario)), tables_(std::move(tables)) {
  if (!scenario_) throw InputError("behavior without scenario");
  contexts_ = maximal_cliques(scenario_->graph());
  if (tables_.size() != contexts_.size()) {
    throw InputError("behavior has " + std::to_string(tables_.size()) + " tables but the scenario has " +
                     std::to_string(contexts_.size()) + " maximal contexts");
  }
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    if (tables_[c].size() != scenario_->table_size(contexts_[c])) {
      throw InputError("table for context " + std::to_string(c) + " has wrong length");
    }
  }
}

std::optional<std::size_t> Behavior::containing_context(std::span<const std::size_t> vertices) const {
  VertexSet v = make_vertex_set({vertices.begin(), vertices.end()});
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    if (is_subset(v, contexts_[c])) return c;
  }
  return std::nullopt;
}

std::vector<Rational> JointDistribution::marginal(std::span<const std::size_t> vertices) const {
  VertexSet all(scenario->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return marginalize(*scenario, all, probabilities, vertices);
}

NoDisturbanceReport check_no_disturbance(const Behavior& b) {
  NoDisturbanceReport report;
  const auto& ctx = b.contexts();
  for (std::size_t c = 0; c < ctx.size(); ++c) {
    Rational sum = 0;
    bool negative = false;
    for (const auto& p : b.table(c)) {
      sum += p;
      negative = negative || p < 0;
    }
    if (negative) report.defects.push_back({c, "negative probability"});
    if (sum != 1) report.defects.push_back({c, "probabilities sum to " + to_string(sum)});
  }
  if (!report.defects.empty()) return report;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = i + 1; j < ctx.size(); ++j) {
      VertexSet shared = set_intersection(ctx[i], ctx[j]);
      if (shared.empty()) continue;
      if (marginal(b, i, shared) != marginal(b, j, shared)) report.violations.push_back({i, j, shared});
    }
  }
  return report;
}

bool is_no_disturbance(const Behavior& b) { return check_no_disturbance(b).no_disturbance(); }

std::vector<Rational> marginal(const Behavior& b, std::size_t context, std::span<const std::size_t> subset) {
  if (context >= b.contexts().size()) throw InputError("marginal: context index out of range");
  return marginalize(b.scenario(), b.contexts()[context], b.table(context), subset);
}

Rational evaluate_term_in(const ExpressionTerm& t, const Behavior& b, std::size_t context) {
  auto m = marginal(b, context, t.support);
  Rational acc = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) acc += m[i] * t.values[i];
  }
  return t.coefficient * acc;
}

Rational evaluate(const Expression& e, const Behavior& b) {
  if (!(e.scenario() == b.scenario())) throw InputError("evaluate: expression and behavior use different scenarios");
  Rational total = 0;
  for (const auto& t : e.terms()) {
    auto c = b.containing_context(t.support);
    if (!c) throw InputError("evaluate: term support is not contained in any context");
    total += evaluate_term_in(t, b, *c);
  }
  return total;
}

Behavior deterministic_behavior(ScenarioPtr s, const Assignment& assignment) {
  if (assignment.size() != s->size()) throw InputError("deterministic_behavior: assignment must cover every observable");
  for (std::size_t i = 0; i < s->size(); ++i) {
    if (assignment[i] < 0 || assignment[i] >= s->outcomes(i)) {
      throw InputError("deterministic_behavior: outcome out of range for " + s->observable(i).id);
    }
  }
  auto contexts = maximal_cliques(s->graph());
  std::vector<std::vector<Rational>> tables;
  for (const auto& c : contexts) {
    std::vector<Rational> t(s->table_size(c), Rational(0));
    t[tuple_index(*s, c, assignment)] = 1;
    tables.push_back(std::move(t));
  }
  return Behavior(std::move(s), std::move(tables));
}

JointDistribution jpd_from_clique_tree(const Behavior& b, const CliqueTree& t) {
  const Scenario& s = b.scenario();
  if (!is_chordal(s.graph())) throw NotChordal("joint distribution requires a chordal scenario graph");
  if (t.nodes != b.contexts()) throw InputError("clique tree nodes differ from the behavior contexts");
  if (!is_no_disturbance(b)) throw InputError("joint distribution requires a no-disturbance behavior");
  std::size_t total = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total *= static_cast<std::size_t>(s.outcomes(i));
    if (total > kMaxJointEntries) throw BudgetExceeded("joint distribution too large", total);
  }

  // Orient each tree component away from its lowest-index node.
  const std::size_t k = t.nodes.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(k);
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    adj[t.edges[e].a].emplace_back(t.edges[e].b, e);
    adj[t.edges[e].b].emplace_back(t.edges[e].a, e);
  }
  std::vector<std::size_t> parent_edge(k, t.edges.size());
  std::vector<char> seen(k, 0);
  for (std::size_t root = 0; root < k; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (auto [u, e] : adj[v]) {
        if (!seen[u]) {
          seen[u] = 1;
          parent_edge[u] = e;
          q.push(u);
        }
      }
    }
  }
  // Separator marginals, read from the child side.
  std::vector<std::vector<Rational>> sep(k);
  for (std::size_t v = 0; v < k; ++v) {
    if (parent_edge[v] < t.edges.size()) sep[v] = marginal(b, v, t.edges[parent_edge[v]].label);
  }

  JointDistribution out{b.scenario_ptr(), std::vector<Rational>(total, Rational(0))};
  Assignment a(s.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (idx > 0) {
      // Odometer step, last observable fastest (row-major).
      for (std::size_t i = s.size(); i-- > 0;) {
        if (++a[i] < s.outcomes(i)) break;
        a[i] = 0;
      }
    }
    Rational p = 1;
    for (std::size_t v = 0; v < k && p != 0; ++v) {
      const Rational& clique_p = b.table(v)[tuple_index(s, t.nodes[v], a)];
      if (clique_p == 0) {
        p = 0;
        break;
      }
      p *= clique_p;
      if (parent_edge[v] < t.edges.size()) {
        // A zero separator marginal forces clique_p == 0, handled above.
        p /= sep[v][tuple_index(s, t.edges[parent_edge[v]].label, a)];
      }
    }
    out.probabilities[idx] = p;
  }
  return out;
}

JointDistribution jpd_from_clique_tree(const Behavior& b) {
  return jpd_from_clique_tree(b, clique_tree(b.scenario().graph()));
}

Behavior behavior_from_joint(const JointDistribution& p) {
  auto contexts = maximal_cliques(p.scenario->graph());
  std::vector<std::vector<Rational>> tables;
  for (const auto& c : contexts) tables.push_back(p.marginal(c));
  return Behavior(p.scenario, std::move(tables));
}

Behavior mix(const std::vector<Behavior>& boxes, const std::vector<Rational>& weights) {
  if (boxes.empty() || boxes.size() != weights.size()) throw InputError("mix: need one weight per behavior");
  auto tables = boxes.front().tables();
  for (auto& t : tables) {
    for (auto& x : t) x = 0;
  }
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    if (!(boxes[k].scenario() == boxes.front().scenario())) throw InputError("mix: mixed scenarios");
    for (std::size_t c = 0; c < tables.size(); ++c) {
      for (std::size_t i = 0; i < tables[c].size(); ++i) tables[c][i] += weights[k] * boxes[k].table(c)[i];
    }
  }
  return Behavior(boxes.front().scenario_ptr(), std::move(tables));
}

Behavior behavior_from_tables(ScenarioPtr s, const std::vector<ContextTable>& tables) {
  const auto contexts = maximal_cliques(s->graph());
  std::vector<std::vector<Rational>> out(contexts.size());
  std::vector<char> filled(contexts.size(), 0);
  for (const auto& t : tables) {
    const auto given = s->indices_of(t.observables);
    const VertexSet sorted = make_vertex_set(given);
    if (sorted.size() != given.size()) throw InputError("context table repeats an observable");
    auto it = std::find(contexts.begin(), contexts.end(), sorted);
    if (it == contexts.end()) throw InputError("table over a set that is not a maximal context");
    const std::size_t k = static_cast<std::size_t>(it - contexts.begin());
    if (filled[k]) throw InputError("two tables for the same context");
    if (t.probabilities.size() != s->table_size(given)) throw InputError("context table has the wrong length");
    filled[k] = 1;
    out[k].resize(t.probabilities.size());
    std::vector<std::size_t> position(given.size());
    for (std::size_t a = 0; a < given.size(); ++a) {
      position[a] = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), given[a]) - sorted.begin());
    }
    for (std::size_t idx = 0; idx < out[k].size(); ++idx) {
      const auto outcomes = tuple_outcomes(*s, sorted, idx);
      std::size_t src = 0;
      for (std::size_t a = 0; a < given.size(); ++a) {
        src = src * static_cast<std::size_t>(s->outcomes(given[a])) + static_cast<std::size_t>(outcomes[position[a]]);
      }
      out[k][idx] = t.probabilities[src];
    }
  }
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    if (!filled[k]) throw InputError("missing table for context {" + join_ids(*s, contexts[k]) + "}");
  }
  return Behavior(std::move(s), std::move(out));
}

std::vector<ContextTable> context_tables(const Behavior& b) {
  std::vector<ContextTable> out;
  for (std::size_t k = 0; k < b.contexts().size(); ++k) {
    out.push_back(ContextTable{b.scenario().ids_of(b.contexts()[k]), b.table(k)});
  }
  return out;
}

}  // namespace monogamy
