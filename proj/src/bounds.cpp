#include "monogamy/bounds.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <thread>

namespace monogamy {

namespace {

Rational best_term_value(const ExpressionTerm& t, bool maximize) {
  Rational best = t.coefficient * t.values.front();
  for (const auto& v : t.values) {
    Rational x = t.coefficient * v;
    if (maximize ? x > best : x < best) best = x;
  }
  return best;
}

// Term tables re-indexed over the positions of the used observables.
template <typename Value>
struct CompiledTerm {
  std::vector<std::size_t> positions;  // into the used-observable list
  std::vector<std::size_t> radix;
  std::vector<Value> weighted;
};

template <typename Value>
struct ChunkBest {
  Value value{};
  unsigned long long index = 0;
  bool found = false;
};

template <typename Value>
ChunkBest<Value> scan(const std::vector<CompiledTerm<Value>>& terms, const std::vector<int>& radix,
                      unsigned long long begin, unsigned long long end) {
  ChunkBest<Value> best;
  if (begin >= end) return best;
  std::vector<int> digits(radix.size(), 0);
  unsigned long long rest = begin;
  for (std::size_t k = radix.size(); k-- > 0;) {
    digits[k] = static_cast<int>(rest % static_cast<unsigned long long>(radix[k]));
    rest /= static_cast<unsigned long long>(radix[k]);
  }
  for (unsigned long long idx = begin; idx < end; ++idx) {
    if (idx != begin) {
      for (std::size_t k = radix.size(); k-- > 0;) {
        if (++digits[k] < radix[k]) break;
        digits[k] = 0;
      }
    }
    Value total{};
    for (const auto& t : terms) {
      std::size_t j = 0;
      for (std::size_t p = 0; p < t.positions.size(); ++p) {
        j = j * t.radix[p] + static_cast<std::size_t>(digits[t.positions[p]]);
      }
      total += t.weighted[j];
    }
    if (!best.found || total > best.value) {
      best.value = total;
      best.index = idx;
      best.found = true;
    }
  }
  return best;
}

template <typename Value>
ChunkBest<Value> parallel_scan(const std::vector<CompiledTerm<Value>>& terms, const std::vector<int>& radix,
                               unsigned long long count, unsigned threads) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<unsigned long long>(count, 64))));
  std::vector<ChunkBest<Value>> partial(threads);
  const unsigned long long chunk = (count + threads - 1) / threads;
  if (threads == 1) {
    partial[0] = scan(terms, radix, 0, count);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        partial[w] = scan(terms, radix, std::min(count, w * chunk), std::min(count, (w + 1) * chunk));
      });
    }
    for (auto& t : pool) t.join();
  }
  // Chunks are in index order, so the first strict improvement keeps the
  // smallest optimal index.
  ChunkBest<Value> best;
  for (auto& p : partial) {
    if (p.found && (!best.found || p.value > best.value)) best = std::move(p);
  }
  return best;
}

}  // namespace

Rational algebraic_max(const Expression& e) {
  const bool maximize = e.sense() == Sense::maximize;
  Rational total = 0;
  for (const auto& t : e.terms()) total += best_term_value(t, maximize);
  return total;
}

unsigned long long classical_assignment_count(const Expression& e) {
  unsigned long long count = 1;
  for (std::size_t v : e.used_observables()) {
    auto d = static_cast<unsigned long long>(e.scenario().outcomes(v));
    if (count > (~0ULL) / d) return ~0ULL;
    count *= d;
  }
  return count;
}

BoundResult classical_max(const Expression& e, const ClassicalOptions& options) {
  const Expression en = e.normalized();
  const Scenario& s = en.scenario();
  const VertexSet used = en.used_observables();
  const unsigned long long count = classical_assignment_count(en);
  if (count > options.budget) {
    throw BudgetExceeded("classical enumeration of " + en.name() + " needs " + std::to_string(count) +
                             " assignments, budget is " + std::to_string(options.budget),
                         count);
  }
  std::vector<int> radix;
  std::vector<std::size_t> position(s.size(), 0);
  for (std::size_t k = 0; k < used.size(); ++k) {
    radix.push_back(s.outcomes(used[k]));
    position[used[k]] = k;
  }

  // Common denominator so the hot loop can run on machine integers.
  Integer lcm = 1;
  Rational max_abs = 0;
  for (const auto& t : en.terms()) {
    for (const auto& v : t.values) {
      Rational w = t.coefficient * v;
      lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(w));
      max_abs = std::max(max_abs, Rational(boost::multiprecision::abs(w)));
    }
  }
  const bool fits = max_abs * lcm * (en.terms().size() + 1) < Rational(Integer(1) << 62);

  auto compile = [&](auto convert) {
    using Value = decltype(convert(Rational{}));
    std::vector<CompiledTerm<Value>> terms;
    for (const auto& t : en.terms()) {
      CompiledTerm<Value> c;
      for (std::size_t v : t.support) {
        c.positions.push_back(position[v]);
        c.radix.push_back(static_cast<std::size_t>(s.outcomes(v)));
      }
      for (const auto& v : t.values) c.weighted.push_back(convert(t.coefficient * v));
      terms.push_back(std::move(c));
    }
    return terms;
  };

  Rational best_value;
  unsigned long long best_index = 0;
  if (fits) {
    auto terms = compile([&](const Rational& w) {
      return static_cast<std::int64_t>(boost::multiprecision::numerator(w) * (lcm / boost::multiprecision::denominator(w)));
    });
    auto best = parallel_scan(terms, radix, count, options.threads);
    best_value = Rational(Integer(best.value), lcm);
    best_index = best.index;
  } else {
    auto terms = compile([](const Rational& w) { return w; });
    auto best = parallel_scan(terms, radix, count, options.threads);
    best_value = best.value;
    best_index = best.index;
  }

  Assignment witness(s.size(), 0);
  for (std::size_t k = used.size(); k-- > 0;) {
    witness[used[k]] = static_cast<int>(best_index % static_cast<unsigned long long>(radix[k]));
    best_index /= static_cast<unsigned long long>(radix[k]);
  }
  if (e.sense() == Sense::minimize) best_value = -best_value;
  return {best_value, witness};
}

NdPolytope nd_polytope(ScenarioPtr s) {
  NdPolytope poly;
  poly.scenario = s;
  poly.contexts = maximal_cliques(s->graph());
  const auto& ctx = poly.contexts;
  if (ctx.empty()) throw InputError("nd_polytope: scenario has no observables");
  std::size_t nvars = 0;
  for (const auto& c : ctx) {
    poly.offsets.push_back(nvars);
    nvars += s->table_size(c);
  }
  poly.lp.num_variables = nvars;

  for (std::size_t c = 0; c < ctx.size(); ++c) {
    LinearProgram::Row row;
    for (std::size_t i = 0; i < s->table_size(ctx[c]); ++i) row.entries.emplace_back(poly.offsets[c] + i, Rational(1));
    row.rhs = 1;
    poly.lp.equalities.push_back(std::move(row));
    // Start from the all-zeros deterministic vertex.
    poly.lp.crash.emplace_back(c, poly.offsets[c]);
  }
  poly.normalization_rows = ctx.size();

  // Every pairwise overlap S must carry equal S-marginals. Overlaps are
  // processed largest first: contexts already tied together through a larger
  // overlap T ⊃ S agree on S, so only the remaining components are chained.
  std::map<VertexSet, std::vector<std::size_t>> holders;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = i + 1; j < ctx.size(); ++j) {
      VertexSet shared = set_intersection(ctx[i], ctx[j]);
      if (!shared.empty()) holders.try_emplace(std::move(shared));
    }
  }
  for (auto& [shared, list] : holders) {
    for (std::size_t c = 0; c < ctx.size(); ++c) {
      if (is_subset(shared, ctx[c])) list.push_back(c);
    }
  }
  std::vector<const VertexSet*> order;
  for (const auto& [shared, list] : holders) order.push_back(&shared);
  std::stable_sort(order.begin(), order.end(), [](const VertexSet* a, const VertexSet* b) { return a->size() > b->size(); });

  auto add_marginal_rows = [&](std::size_t c1, std::size_t c2, const VertexSet& shared) {
    const std::size_t m = s->table_size(shared);
    std::vector<LinearProgram::Row> rows(m);
    for (auto [c, sign] : {std::pair{c1, 1}, std::pair{c2, -1}}) {
      std::vector<std::size_t> pos;
      for (std::size_t v : shared) {
        pos.push_back(static_cast<std::size_t>(std::lower_bound(ctx[c].begin(), ctx[c].end(), v) - ctx[c].begin()));
      }
      for (std::size_t i = 0; i < s->table_size(ctx[c]); ++i) {
        auto out = tuple_outcomes(*s, ctx[c], i);
        std::size_t k = 0;
        for (std::size_t p = 0; p < shared.size(); ++p) {
          k = k * static_cast<std::size_t>(s->outcomes(shared[p])) + static_cast<std::size_t>(out[pos[p]]);
        }
        rows[k].entries.emplace_back(poly.offsets[c] + i, Rational(sign));
      }
    }
    // The last outcome follows from the two normalisation rows.
    for (std::size_t k = 0; k + 1 < m; ++k) {
      rows[k].rhs = 0;
      poly.lp.equalities.push_back(std::move(rows[k]));
      ++poly.marginal_rows;
    }
  };

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const VertexSet& shared = *order[oi];
    const auto& list = holders[shared];
    std::vector<std::size_t> parent(ctx.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t oj = 0; oj < oi; ++oj) {
      const VertexSet& larger = *order[oj];
      if (larger.size() <= shared.size() || !is_subset(shared, larger)) continue;
      const auto& tied = holders[larger];
      for (std::size_t c : tied) parent[find(c)] = find(tied.front());
    }
    for (std::size_t k = 1; k < list.size(); ++k) {
      std::size_t a = find(list.front()), b = find(list[k]);
      if (a == b) continue;
      add_marginal_rows(list.front(), list[k], shared);
      parent[b] = a;
    }
  }
  return poly;
}

std::vector<Rational> nd_objective(const Expression& e, const NdPolytope& polytope) {
  const Expression en = e.normalized();
  if (!(en.scenario() == *polytope.scenario)) throw InputError("nd_objective: expression uses a different scenario");
  const Scenario& s = *polytope.scenario;
  std::vector<Rational> objective(polytope.lp.num_variables, Rational(0));
  for (const auto& t : en.terms()) {
    VertexSet sup = make_vertex_set(t.support);
    std::size_t c = 0;
    while (c < polytope.contexts.size() && !is_subset(sup, polytope.contexts[c])) ++c;
    if (c == polytope.contexts.size()) throw InputError("term support is not inside any maximal context");
    const VertexSet& ctx = polytope.contexts[c];
    std::vector<std::size_t> pos;
    for (std::size_t v : t.support) {
      pos.push_back(static_cast<std::size_t>(std::lower_bound(ctx.begin(), ctx.end(), v) - ctx.begin()));
    }
    for (std::size_t i = 0; i < s.table_size(ctx); ++i) {
      auto out = tuple_outcomes(s, ctx, i);
      std::size_t k = 0;
      for (std::size_t p = 0; p < t.support.size(); ++p) {
        k = k * static_cast<std::size_t>(s.outcomes(t.support[p])) + static_cast<std::size_t>(out[pos[p]]);
      }
      if (t.values[k] != 0) objective[polytope.offsets[c] + i] += t.coefficient * t.values[k];
    }
  }
  return objective;
}

namespace {

Behavior behavior_from_solution(const NdPolytope& polytope, const std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> tables;
  for (std::size_t c = 0; c < polytope.contexts.size(); ++c) {
    const std::size_t n = polytope.scenario->table_size(polytope.contexts[c]);
    tables.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(polytope.offsets[c]),
                        x.begin() + static_cast<std::ptrdiff_t>(polytope.offsets[c] + n));
  }
  return Behavior(polytope.scenario, std::move(tables));
}

}  // namespace

LPSolution nd_max(const Expression& e, const NdPolytope& polytope) {
  LinearProgram lp = polytope.lp;
  lp.objective = nd_objective(e, polytope);
  SimplexResult r = solve_exact(lp);
  LPSolution out;
  out.status = r.status;
  out.stats = r.stats;
  out.variables = lp.num_variables;
  out.constraints = lp.equalities.size();
  if (r.status == LPStatus::infeasible) {
    throw Error("no-disturbance polytope reported infeasible; the constraint builder is broken");
  }
  if (r.status != LPStatus::optimal) return out;
  Behavior witness = behavior_from_solution(polytope, r.x);
  Rational value = evaluate(e, witness);
  Rational optimum = e.sense() == Sense::minimize ? Rational(-r.optimum) : r.optimum;
  if (!is_no_disturbance(witness) || value != optimum) {
    throw Error("LP witness failed exact re-verification");
  }
  out.optimum = optimum;
  out.witness = std::move(witness);
  return out;
}

LPSolution nd_max(const Expression& e) { return nd_max(e, nd_polytope(e.scenario_ptr())); }

Behavior nd_vertex(const NdPolytope& polytope, const std::vector<Rational>& objective) {
  LinearProgram lp = polytope.lp;
  lp.objective = objective;
  SimplexResult r = solve_exact(lp);
  if (r.status != LPStatus::optimal) throw Error("nd_vertex: LP not optimal");
  return behavior_from_solution(polytope, r.x);
}

}  // namespace monogamy
