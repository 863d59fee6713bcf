#include "monogamy/certify.hpp"

#include "monogamy/errors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace monogamy {

std::string to_string(Verdict v) { return v == Verdict::certified ? "CERTIFIED" : "FAILED"; }

std::string to_string(CycleCase c) { return c == CycleCase::outer ? "i" : "ii"; }

Rational MonogamyCertificate::part_sum() const {
  Rational sum = 0;
  for (const auto& p : parts) sum += p.value;
  return sum;
}

namespace {

std::vector<std::size_t> to_scenario_indices(const VertexSet& vertices, const std::vector<std::size_t>& local) {
  std::vector<std::size_t> out;
  out.reserve(local.size());
  for (std::size_t v : local) out.push_back(vertices[v]);
  return out;
}

}  // namespace

MonogamyCertificate verify_decomposition(const Expression& e, const Decomposition& d, const ClassicalOptions& options) {
  const Scenario& s = e.scenario();
  const auto& terms = e.terms();
  if (d.term_part.size() != terms.size()) {
    throw InputError("decomposition assigns " + std::to_string(d.term_part.size()) + " terms, expression has " +
                     std::to_string(terms.size()));
  }
  std::vector<VertexSet> parts;
  for (const auto& p : d.parts) {
    for (std::size_t v : p) {
      if (v >= s.size()) throw InputError("decomposition part names an unknown observable");
    }
    parts.push_back(make_vertex_set(p));
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (d.term_part[k] >= parts.size()) throw InputError("term " + std::to_string(k) + " assigned to a missing part");
    const VertexSet support = make_vertex_set(terms[k].support);
    bool covered = std::any_of(parts.begin(), parts.end(), [&](const VertexSet& p) { return is_subset(support, p); });
    if (!covered) throw InputError("term " + std::to_string(k) + " has its support in no part");
  }

  const BoundResult whole = classical_max(e, options);
  std::vector<PartReport> reports;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    UndirectedGraph sub = induced_subgraph(s.graph(), parts[j]);
    std::optional<std::vector<std::size_t>> cycle;
    if (auto c = chordless_cycle(sub)) cycle = to_scenario_indices(parts[j], *c);
    std::vector<std::size_t> charged;
    std::vector<ExpressionTerm> reduced_terms;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (d.term_part[k] != j) continue;
      charged.push_back(k);
      reduced_terms.push_back(terms[k]);
    }
    Expression reduced(e.scenario_ptr(), e.name() + " | part " + std::to_string(j + 1), e.sense(),
                       std::move(reduced_terms));
    BoundResult value = classical_max(reduced, options);
    bool chordal = !cycle.has_value();
    reports.push_back(PartReport{parts[j], std::move(sub), chordal, std::move(cycle), std::move(charged),
                                 std::move(reduced), std::move(value.value), std::move(value.witness)});
  }

  MonogamyCertificate cert{e, whole.value, whole.witness, std::move(reports), Verdict::failed, {}, "classical"};
  for (std::size_t j = 0; j < cert.parts.size(); ++j) {
    if (!cert.parts[j].chordal) {
      cert.reason = "part " + std::to_string(j + 1) + " does not induce a chordal subgraph";
      return cert;
    }
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!is_subset(make_vertex_set(terms[k].support), parts[d.term_part[k]])) {
      cert.reason = "term " + std::to_string(k) + " is charged to part " + std::to_string(d.term_part[k] + 1) +
                    " which does not contain its support";
      return cert;
    }
  }
  const Rational sum = cert.part_sum();
  if (sum != cert.classical_value) {
    cert.reason = "part values sum to " + to_string(sum) + " but the classical value is " + to_string(cert.classical_value);
    return cert;
  }
  cert.verdict = Verdict::certified;
  return cert;
}

Decomposition assign_terms(const Expression& e, std::vector<VertexSet> parts) {
  Decomposition d;
  for (auto& p : parts) p = make_vertex_set(std::move(p));
  for (std::size_t k = 0; k < e.terms().size(); ++k) {
    const VertexSet support = make_vertex_set(e.terms()[k].support);
    auto it = std::find_if(parts.begin(), parts.end(), [&](const VertexSet& p) { return is_subset(support, p); });
    if (it == parts.end()) throw InputError("term " + std::to_string(k) + " has its support in no part");
    d.term_part.push_back(static_cast<std::size_t>(it - parts.begin()));
  }
  d.parts = std::move(parts);
  return d;
}

// ---------------------------------------------------------------------------
// Decomposition search

namespace {

// Loss of a group of terms: sum of the terms' individual maxima minus the
// joint maximum. A decomposition certifies iff its losses add up to
// sum(max t) - omega_c, losses only grow as terms are added, and one term
// can raise a loss by at most its range.
struct SearchProblem {
  const Scenario* scenario = nullptr;
  std::size_t terms = 0;
  std::vector<std::size_t> order;
  std::vector<std::uint64_t> term_vertices;
  std::vector<std::vector<std::size_t>> supports;
  std::vector<std::vector<std::int64_t>> tables;
  std::vector<std::int64_t> term_max;
  std::vector<std::int64_t> suffix_range;
  std::int64_t target = 0;
  std::size_t max_parts = 1;
};

struct Block {
  std::uint64_t terms = 0;
  std::uint64_t vertices = 0;
  std::int64_t loss = 0;
};

struct Task {
  std::vector<Block> blocks;
  std::int64_t loss = 0;
};

struct Shared {
  std::atomic<unsigned long long> nodes{0};
  std::atomic<bool> over_budget{false};
  std::atomic<std::size_t> best_task{std::numeric_limits<std::size_t>::max()};
  unsigned long long budget = 0;
};

class Searcher {
 public:
  Searcher(const SearchProblem& p, Shared& shared) : p_(p), shared_(shared) {}

  bool chordal(std::uint64_t vertices) {
    auto it = chordal_cache_.find(vertices);
    if (it != chordal_cache_.end()) return it->second;
    std::vector<std::size_t> vs;
    for (std::uint64_t m = vertices; m; m &= m - 1) vs.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    bool ok = is_chordal(induced_subgraph(p_.scenario->graph(), vs));
    chordal_cache_.emplace(vertices, ok);
    return ok;
  }

  std::int64_t loss(std::uint64_t terms, std::uint64_t vertices) {
    auto it = loss_cache_.find(terms);
    if (it != loss_cache_.end()) return it->second;
    std::vector<std::size_t> vs;
    std::vector<std::size_t> slot(p_.scenario->size(), 0);
    for (std::uint64_t m = vertices; m; m &= m - 1) {
      slot[static_cast<std::size_t>(std::countr_zero(m))] = vs.size();
      vs.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    }
    std::vector<std::size_t> members;
    std::int64_t sum_max = 0;
    for (std::uint64_t m = terms; m; m &= m - 1) {
      std::size_t t = static_cast<std::size_t>(std::countr_zero(m));
      members.push_back(t);
      sum_max += p_.term_max[t];
    }
    std::vector<int> digits(vs.size(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    while (true) {
      std::int64_t value = 0;
      for (std::size_t t : members) {
        std::size_t index = 0;
        for (std::size_t v : p_.supports[t]) {
          index = index * static_cast<std::size_t>(p_.scenario->outcomes(v)) + static_cast<std::size_t>(digits[slot[v]]);
        }
        value += p_.tables[t][index];
      }
      best = std::max(best, value);
      bool done = true;
      for (std::size_t k = vs.size(); k-- > 0;) {
        if (++digits[k] < p_.scenario->outcomes(vs[k])) {
          done = false;
          break;
        }
        digits[k] = 0;
      }
      if (done) break;
    }
    std::int64_t l = sum_max - best;
    loss_cache_.emplace(terms, l);
    return l;
  }

  // Children of a node at depth `pos`, in canonical order.
  template <class Visit>
  void expand(const Task& node, std::size_t pos, Visit&& visit) {
    const std::size_t t = p_.order[pos];
    const std::size_t open = node.blocks.size();
    for (std::size_t b = 0; b <= open && b < p_.max_parts; ++b) {
      if (!count_node()) return;
      Block nb = b < open ? node.blocks[b] : Block{};
      const std::uint64_t grown = nb.vertices | p_.term_vertices[t];
      if (grown != nb.vertices && !chordal(grown)) {
        ++trace.pruned_non_chordal;
        continue;
      }
      const std::int64_t before = nb.loss;
      nb.terms |= std::uint64_t{1} << t;
      nb.vertices = grown;
      nb.loss = loss(nb.terms, nb.vertices);
      const std::int64_t total = node.loss - before + nb.loss;
      if (total + p_.suffix_range[pos + 1] < p_.target) {
        ++trace.pruned_bound;
        continue;
      }
      Task child{node.blocks, total};
      if (b < open) {
        child.blocks[b] = nb;
      } else {
        child.blocks.push_back(nb);
      }
      if (!visit(std::move(child))) return;
    }
  }

  // Depth-first search below `node`; returns the first certified leaf.
  std::optional<Task> dfs(const Task& node, std::size_t pos, std::size_t task_index) {
    if (pos == p_.terms) {
      ++trace.leaves;
      return node;
    }
    std::optional<Task> found;
    expand(node, pos, [&](Task child) {
      if (shared_.best_task.load() < task_index) return false;
      found = dfs(child, pos + 1, task_index);
      return !found.has_value() && !shared_.over_budget.load();
    });
    return found;
  }

  bool count_node() {
    ++trace.nodes;
    if (shared_.nodes.fetch_add(1) + 1 > shared_.budget) {
      shared_.over_budget = true;
      return false;
    }
    return true;
  }

  SearchTrace trace;

 private:
  const SearchProblem& p_;
  Shared& shared_;
  std::unordered_map<std::uint64_t, bool> chordal_cache_;
  std::unordered_map<std::uint64_t, std::int64_t> loss_cache_;
};

bool term_less(const ExpressionTerm& a, const ExpressionTerm& b) {
  const VertexSet sa = make_vertex_set(a.support);
  const VertexSet sb = make_vertex_set(b.support);
  if (sa != sb) return sa < sb;
  if (a.support != b.support) return a.support < b.support;
  if (a.coefficient != b.coefficient) return a.coefficient < b.coefficient;
  return a.values < b.values;
}

}  // namespace

SearchResult search_decomposition(const Expression& e, std::size_t max_parts, const SearchOptions& options) {
  if (max_parts == 0) throw InputError("max_parts must be positive");
  const Expression en = e.normalized();
  const Scenario& s = en.scenario();
  const auto& terms = en.terms();
  if (terms.size() > 64) throw InputError("decomposition search supports at most 64 terms");
  if (s.size() > 64) throw InputError("decomposition search supports at most 64 observables");

  SearchResult result;
  const BoundResult whole = classical_max(e, ClassicalOptions{options.budget, options.threads});
  result.classical_value = whole.value;

  SearchProblem p;
  p.scenario = &s;
  p.terms = terms.size();
  p.max_parts = max_parts;
  p.order.resize(terms.size());
  std::iota(p.order.begin(), p.order.end(), std::size_t{0});
  std::stable_sort(p.order.begin(), p.order.end(),
                   [&](std::size_t a, std::size_t b) { return term_less(terms[a], terms[b]); });
  if (options.reverse_order) std::reverse(p.order.begin(), p.order.end());
  result.term_order = p.order;

  // Scale everything to integers.
  Integer lcm = 1;
  Rational max_abs = 0;
  for (const auto& t : terms) {
    for (const auto& w : t.weighted_values()) {
      lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(w));
      max_abs = std::max(max_abs, Rational(boost::multiprecision::abs(w)));
    }
  }
  lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(whole.value));
  if (max_abs * lcm * (4 * terms.size() + 4) >= Rational(Integer(1) << 60)) {
    throw InputError("expression values too large for the decomposition search");
  }
  auto scaled = [&](const Rational& w) {
    Rational x = w * lcm;
    return static_cast<std::int64_t>(boost::multiprecision::numerator(x));
  };
  const Rational omega = e.sense() == Sense::minimize ? -whole.value : whole.value;
  std::int64_t sum_max = 0;
  std::vector<std::int64_t> range(terms.size(), 0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::uint64_t mask = 0;
    for (std::size_t v : terms[k].support) mask |= std::uint64_t{1} << v;
    p.term_vertices.push_back(mask);
    p.supports.push_back(terms[k].support);
    std::vector<std::int64_t> table;
    for (const auto& w : terms[k].weighted_values()) table.push_back(scaled(w));
    auto [lo, hi] = std::minmax_element(table.begin(), table.end());
    p.term_max.push_back(*hi);
    range[k] = *hi - *lo;
    sum_max += *hi;
    p.tables.push_back(std::move(table));
  }
  p.target = sum_max - scaled(omega);
  p.suffix_range.assign(terms.size() + 1, 0);
  for (std::size_t pos = terms.size(); pos-- > 0;) p.suffix_range[pos] = p.suffix_range[pos + 1] + range[p.order[pos]];

  auto finish = [&](const Task& leaf) {
    Decomposition d;
    d.term_part.assign(terms.size(), 0);
    for (std::size_t b = 0; b < leaf.blocks.size(); ++b) {
      VertexSet part;
      for (std::uint64_t m = leaf.blocks[b].vertices; m; m &= m - 1) part.push_back(static_cast<std::size_t>(std::countr_zero(m)));
      d.parts.push_back(std::move(part));
      for (std::uint64_t m = leaf.blocks[b].terms; m; m &= m - 1) d.term_part[static_cast<std::size_t>(std::countr_zero(m))] = b;
    }
    result.certificate = verify_decomposition(e, d, ClassicalOptions{options.budget, options.threads});
    if (!result.certificate->certified()) throw std::logic_error("search produced a decomposition that does not verify");
    result.decomposition = std::move(d);
  };

  Shared shared;
  shared.budget = options.budget;
  if (terms.empty()) {
    result.trace.complete = true;
    if (omega == 0) finish(Task{});
    return result;
  }

  // Split the tree into prefix tasks; the split does not depend on the
  // thread count so traces are identical for any --threads value.
  const std::size_t depth = std::min<std::size_t>(terms.size() - 1, 6);
  Searcher prefix(p, shared);
  std::vector<Task> frontier{Task{}};
  for (std::size_t pos = 0; pos < depth; ++pos) {
    std::vector<Task> next;
    for (const auto& node : frontier) {
      prefix.expand(node, pos, [&](Task child) {
        next.push_back(std::move(child));
        return true;
      });
    }
    frontier = std::move(next);
  }

  const std::size_t n_tasks = frontier.size();
  std::vector<SearchTrace> traces(n_tasks);
  std::vector<std::optional<Task>> found(n_tasks);
  std::atomic<std::size_t> next_task{0};
  auto worker = [&]() {
    Searcher searcher(p, shared);
    while (true) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= n_tasks || shared.over_budget.load()) break;
      if (shared.best_task.load() < i) continue;
      searcher.trace = SearchTrace{};
      found[i] = searcher.dfs(frontier[i], depth, i);
      traces[i] = searcher.trace;
      if (found[i]) {
        std::size_t cur = shared.best_task.load();
        while (i < cur && !shared.best_task.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (shared.over_budget) {
    throw BudgetExceeded("decomposition search exceeded its budget of " + std::to_string(options.budget) + " nodes",
                         options.budget + 1);
  }

  result.trace = prefix.trace;
  const std::size_t last = std::min(shared.best_task.load(), n_tasks - 1);
  for (std::size_t i = 0; i <= last && i < n_tasks; ++i) {
    result.trace.nodes += traces[i].nodes;
    result.trace.pruned_non_chordal += traces[i].pruned_non_chordal;
    result.trace.pruned_bound += traces[i].pruned_bound;
    result.trace.leaves += traces[i].leaves;
  }
  result.trace.complete = true;
  if (shared.best_task.load() < n_tasks) finish(*found[shared.best_task.load()]);
  return result;
}

// ---------------------------------------------------------------------------
// Cycle pairs

ScenarioPtr triangulate_parts(const Scenario& s, const std::vector<VertexSet>& parts,
                              std::vector<std::pair<std::string, std::string>>* added) {
  UndirectedGraph g = s.graph();
  std::vector<std::pair<std::string, std::string>> extra;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& part : parts) {
      UndirectedGraph sub = induced_subgraph(g, part);
      if (is_chordal(sub)) continue;
      // Elimination game along the MCS order.
      const auto order = mcs_ordering(sub).order;
      std::vector<std::size_t> position(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
      for (std::size_t v : order) {
        std::vector<std::size_t> later;
        for (std::size_t u : sub.neighbors(v)) {
          if (position[u] > position[v]) later.push_back(u);
        }
        for (std::size_t a = 0; a < later.size(); ++a) {
          for (std::size_t b = a + 1; b < later.size(); ++b) {
            if (sub.adjacent(later[a], later[b])) continue;
            sub.add_edge(later[a], later[b]);
            std::size_t x = std::min(part[later[a]], part[later[b]]);
            std::size_t y = std::max(part[later[a]], part[later[b]]);
            g.add_edge(x, y);
            extra.emplace_back(s.observable(x).id, s.observable(y).id);
            changed = true;
          }
        }
      }
    }
  }
  if (added) *added = extra;
  auto edges = s.edge_ids();
  edges.insert(edges.end(), extra.begin(), extra.end());
  return std::make_shared<const Scenario>(s.observables(), edges);
}

CycleCase classify_cycle_config(const CycleConfig& c) {
  if (c.n < 3 || c.m < 3) throw InputError("cycles need at least 3 vertices");
  if (c.shared.size() < 2) throw InputError("cycle pair needs k >= 2 shared vertices");
  for (std::size_t l = 0; l < c.shared.size(); ++l) {
    if (c.shared[l].first >= c.n || c.shared[l].second >= c.m) throw InputError("shared vertex out of range");
    if (l > 0 && (c.shared[l].first <= c.shared[l - 1].first || c.shared[l].second <= c.shared[l - 1].second)) {
      throw InputError("shared vertices must be strictly increasing in both cycles");
    }
  }
  if (c.contradiction >= c.m) throw InputError("contradiction edge out of range");
  const std::size_t j1 = c.shared.front().second;
  const std::size_t jk = c.shared.back().second;
  return (c.contradiction >= j1 && c.contradiction < jk) ? CycleCase::inner : CycleCase::outer;
}

namespace {

CycleDecomposition build_cycle_pair(const CycleConfig& c, int d) {
  const CycleCase which = classify_cycle_config(c);
  const bool dichotomic = d == 0;
  const int outcomes = dichotomic ? 2 : d;

  std::vector<Observable> obs;
  for (std::size_t p = 0; p < c.n; ++p) obs.push_back(Observable{"A" + std::to_string(p + 1), {}, outcomes, {}});
  std::vector<std::size_t> second(c.m, 0);
  std::vector<bool> is_shared(c.m, false);
  for (auto [i, j] : c.shared) {
    second[j] = i;
    is_shared[j] = true;
  }
  for (std::size_t q = 0; q < c.m; ++q) {
    if (is_shared[q]) continue;
    second[q] = obs.size();
    obs.push_back(Observable{"A'" + std::to_string(q + 1), {}, outcomes, {}});
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t p = 0; p < c.n; ++p) edges.emplace_back(obs[p].id, obs[(p + 1) % c.n].id);
  for (std::size_t q = 0; q < c.m; ++q) {
    const auto& a = obs[second[q]].id;
    const auto& b = obs[second[(q + 1) % c.m]].id;
    if (a != b) edges.emplace_back(a, b);
  }
  auto scenario = std::make_shared<const Scenario>(obs, edges);

  auto edge_term = [&](std::size_t x, std::size_t y, bool contradiction) {
    const auto& a = obs[x].id;
    const auto& b = obs[y].id;
    if (dichotomic) return correlator(*scenario, {a, b}, contradiction ? Rational(-1) : Rational(1));
    return modular_difference(*scenario, a, b, contradiction ? -1 : 0);
  };
  std::vector<ExpressionTerm> first_terms;
  for (std::size_t p = 0; p < c.n; ++p) first_terms.push_back(edge_term(p, (p + 1) % c.n, p == c.n - 1));
  std::vector<ExpressionTerm> second_terms;
  for (std::size_t q = 0; q < c.m; ++q) second_terms.push_back(edge_term(second[q], second[(q + 1) % c.m], q == c.contradiction));
  const Sense sense = dichotomic ? Sense::maximize : Sense::minimize;
  Expression first(scenario, "I(" + std::to_string(c.n) + ")", sense, std::move(first_terms));
  Expression other(scenario, "I'(" + std::to_string(c.m) + ")", sense, std::move(second_terms));
  Expression both = combine({first, other}, {Rational(1), Rational(1)}, first.name() + " + " + other.name());

  // Terms 0..n-1 are the first cycle's edges, n..n+m-1 the second's.
  auto in_range = [](std::size_t x, std::size_t lo, std::size_t hi) { return lo <= x && x < hi; };
  const std::size_t j1 = c.shared.front().second;
  const std::size_t jk = c.shared.back().second;
  std::size_t lo = c.shared.front().first;
  std::size_t hi = c.shared.back().first;
  std::size_t first_inside = 1;
  if (which == CycleCase::inner) {
    std::size_t l = 0;
    while (l + 1 < c.shared.size() && c.shared[l + 1].second <= c.contradiction) ++l;
    lo = c.shared[l].first;
    hi = c.shared[l + 1].first;
    first_inside = 0;
  }
  std::vector<std::size_t> term_part(c.n + c.m, 0);
  for (std::size_t p = 0; p < c.n; ++p) term_part[p] = in_range(p, lo, hi) ? first_inside : 1 - first_inside;
  for (std::size_t q = 0; q < c.m; ++q) term_part[c.n + q] = in_range(q, j1, jk) ? 0 : 1;

  std::vector<VertexSet> parts(2);
  for (std::size_t k = 0; k < both.terms().size(); ++k) {
    parts[term_part[k]] = set_union(parts[term_part[k]], make_vertex_set(both.terms()[k].support));
  }
  const std::vector<std::size_t> contradictions{c.n - 1, c.n + c.contradiction};
  for (std::size_t j = 0; j < 2; ++j) {
    std::size_t count = 0;
    for (std::size_t k : contradictions) count += term_part[k] == j;
    if (count != 1) throw std::logic_error("cycle decomposition part without exactly one contradiction edge");
  }

  CycleDecomposition out{nullptr, both, Decomposition{parts, term_part}, which, {}, contradictions};
  out.scenario = triangulate_parts(*scenario, parts, &out.added_edges);
  out.expression = both.rebind(out.scenario);
  return out;
}

}  // namespace

CycleDecomposition cycle_decomposition(const CycleConfig& config) { return build_cycle_pair(config, 0); }

CycleDecomposition cycle_decomposition_d_outcome(const CycleConfig& config, int d) {
  if (d < 2) throw InputError("d-outcome cycles need d >= 2");
  if (classify_cycle_config(config) != CycleCase::outer) {
    throw InputError("the d-outcome construction only supports the outer configuration (case i)");
  }
  return build_cycle_pair(config, d);
}

}  // namespace monogamy
