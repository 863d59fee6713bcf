#include "monogamy/scenario.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace monogamy {

namespace {

std::vector<std::string> collect_ids(const std::vector<Observable>& obs) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& o : obs) {
    if (o.id.empty()) throw InputError("observable with empty id");
    if (!seen.insert(o.id).second) throw InputError("duplicate observable id " + o.id);
    if (o.outcomes < 2) throw InputError("observable " + o.id + " needs at least 2 outcomes");
    ids.push_back(o.id);
  }
  return ids;
}

}  // namespace

Scenario::Scenario(std::vector<Observable> observables, const std::vector<std::pair<std::string, std::string>>& edges)
    : observables_(std::move(observables)), graph_(collect_ids(observables_)) {
  for (auto& o : observables_) {
    if (o.label.empty()) o.label = o.id;
  }
  for (const auto& [a, b] : edges) graph_.add_edge(index_of(a), index_of(b));
}

std::size_t Scenario::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw InputError("unknown observable id " + std::string(id));
  return *i;
}

std::vector<std::size_t> Scenario::indices_of(const std::vector<std::string>& ids) const {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(index_of(id));
  return out;
}

std::vector<std::string> Scenario::ids_of(std::span<const std::size_t> indices) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(observable(i).id);
  return out;
}

std::vector<std::pair<std::string, std::string>> Scenario::edge_ids() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [u, v] : graph_.edges()) out.emplace_back(observables_[u].id, observables_[v].id);
  return out;
}

std::size_t Scenario::table_size(std::span<const std::size_t> vertices) const {
  std::size_t n = 1;
  for (std::size_t v : vertices) n *= static_cast<std::size_t>(outcomes(v));
  return n;
}

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.size() != b.size() || !(a.graph_ == b.graph_)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.observables_[i].outcomes != b.observables_[i].outcomes) return false;
  }
  return true;
}

std::size_t tuple_index(const Scenario& s, std::span<const std::size_t> vertices, const Assignment& full) {
  std::size_t idx = 0;
  for (std::size_t v : vertices) idx = idx * static_cast<std::size_t>(s.outcomes(v)) + static_cast<std::size_t>(full[v]);
  return idx;
}

std::vector<int> tuple_outcomes(const Scenario& s, std::span<const std::size_t> vertices, std::size_t index) {
  std::vector<int> out(vertices.size());
  for (std::size_t k = vertices.size(); k-- > 0;) {
    auto d = static_cast<std::size_t>(s.outcomes(vertices[k]));
    out[k] = static_cast<int>(index % d);
    index /= d;
  }
  return out;
}

Rational ExpressionTerm::value_at(const Scenario& s, const Assignment& a) const {
  return coefficient * values[tuple_index(s, support, a)];
}

std::vector<Rational> ExpressionTerm::weighted_values() const {
  std::vector<Rational> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = coefficient * values[i];
  return out;
}

Expression::Expression(ScenarioPtr scenario, std::string name, Sense sense, std::vector<ExpressionTerm> terms)
    : scenario_(std::move(scenario)), name_(std::move(name)), sense_(sense), terms_(std::move(terms)) {
  if (!scenario_) throw InputError("expression without scenario");
  for (const auto& t : terms_) {
    for (std::size_t v : t.support) {
      if (v >= scenario_->size()) throw InputError("term support index out of range in " + name_);
    }
    if (make_vertex_set(t.support).size() != t.support.size()) {
      throw InputError("repeated observable in a term support of " + name_);
    }
    if (!scenario_->is_clique(t.support)) {
      throw InputError("term support {" + [&] {
        std::string s;
        for (const auto& id : scenario_->ids_of(t.support)) s += (s.empty() ? "" : ",") + id;
        return s;
      }() + "} of " + name_ + " is not a context of the scenario");
    }
    if (t.values.size() != scenario_->table_size(t.support)) {
      throw InputError("term value table of " + name_ + " has wrong length");
    }
  }
}

Rational Expression::evaluate(const Assignment& a) const {
  Rational total = 0;
  for (const auto& t : terms_) total += t.value_at(*scenario_, a);
  return total;
}

Expression Expression::normalized() const {
  if (sense_ == Sense::maximize) return *this;
  std::vector<ExpressionTerm> terms = terms_;
  for (auto& t : terms) t.coefficient = -t.coefficient;
  return Expression(scenario_, name_, Sense::maximize, std::move(terms));
}

Expression Expression::rebind(ScenarioPtr scenario) const {
  if (!scenario || scenario->size() != scenario_->size()) throw InputError("rebind: observable sets differ");
  for (std::size_t i = 0; i < scenario->size(); ++i) {
    if (scenario->observable(i).id != scenario_->observable(i).id ||
        scenario->outcomes(i) != scenario_->outcomes(i)) {
      throw InputError("rebind: observable sets differ");
    }
  }
  return Expression(std::move(scenario), name_, sense_, terms_);
}

Expression Expression::renamed(std::string name) const { return Expression(scenario_, std::move(name), sense_, terms_); }

Expression Expression::merged() const {
  std::map<std::vector<std::size_t>, std::vector<Rational>> acc;
  std::vector<std::vector<std::size_t>> order;
  for (const auto& t : terms_) {
    auto [it, fresh] = acc.try_emplace(t.support, t.values.size(), Rational(0));
    if (fresh) order.push_back(t.support);
    for (std::size_t i = 0; i < t.values.size(); ++i) it->second[i] += t.coefficient * t.values[i];
  }
  std::vector<ExpressionTerm> terms;
  for (const auto& sup : order) terms.push_back({sup, Rational(1), acc[sup]});
  return Expression(scenario_, name_, sense_, std::move(terms));
}

VertexSet Expression::used_observables() const {
  std::vector<std::size_t> all;
  for (const auto& t : terms_) all.insert(all.end(), t.support.begin(), t.support.end());
  return make_vertex_set(std::move(all));
}

ScenarioPtr build_bell_scenario(const std::vector<std::pair<std::string, std::vector<Observable>>>& parties) {
  std::set<std::string> tags;
  std::vector<Observable> obs;
  std::vector<std::size_t> party_of;
  for (std::size_t p = 0; p < parties.size(); ++p) {
    if (!tags.insert(parties[p].first).second) throw InputError("duplicate party tag " + parties[p].first);
    for (auto o : parties[p].second) {
      o.party = parties[p].first;
      obs.push_back(std::move(o));
      party_of.push_back(p);
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      if (party_of[i] != party_of[j]) edges.emplace_back(obs[i].id, obs[j].id);
    }
  }
  return std::make_shared<const Scenario>(std::move(obs), edges);
}

ScenarioPtr add_contexts(const Scenario& s, const std::vector<std::vector<std::string>>& cliques) {
  auto edges = s.edge_ids();
  for (const auto& c : cliques) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      s.index_of(c[i]);
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        if (c[i] != c[j]) edges.emplace_back(c[i], c[j]);
      }
    }
  }
  return std::make_shared<const Scenario>(s.observables(), edges);
}

Expression combine(const std::vector<Expression>& exprs, const std::vector<Rational>& weights, std::string name) {
  if (exprs.empty()) throw InputError("combine: no expressions");
  if (exprs.size() != weights.size()) throw InputError("combine: weight count mismatch");
  const ScenarioPtr& base = exprs.front().scenario_ptr();
  bool same_sense = true;
  for (const auto& e : exprs) {
    if (e.scenario_ptr() != base && !(e.scenario() == *base)) throw InputError("combine: mixed scenarios");
    same_sense = same_sense && e.sense() == exprs.front().sense();
  }
  Sense sense = same_sense ? exprs.front().sense() : Sense::maximize;
  std::vector<ExpressionTerm> terms;
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    if (weights[k] == 0) continue;
    const Expression e = same_sense ? exprs[k] : exprs[k].normalized();
    for (auto t : e.terms()) {
      t.coefficient *= weights[k];
      terms.push_back(std::move(t));
    }
  }
  if (name.empty()) {
    for (std::size_t k = 0; k < exprs.size(); ++k) {
      if (k) name += " + ";
      if (weights[k] != 1) name += to_string(weights[k]) + "*";
      name += exprs[k].name();
    }
  }
  return Expression(base, std::move(name), sense, std::move(terms));
}

Expression reduce_to(const Expression& e, const VertexSet& vertices) {
  std::vector<ExpressionTerm> kept;
  for (const auto& t : e.terms()) {
    if (is_subset(make_vertex_set(t.support), vertices)) kept.push_back(t);
  }
  return Expression(e.scenario_ptr(), e.name(), e.sense(), std::move(kept));
}

ExpressionTerm correlator(const Scenario& s, const std::vector<std::string>& ids, Rational coefficient) {
  ExpressionTerm t;
  t.support = s.indices_of(ids);
  t.coefficient = std::move(coefficient);
  for (std::size_t v : t.support) {
    if (s.outcomes(v) != 2) throw InputError("correlator on non-dichotomic observable " + s.observable(v).id);
  }
  std::size_t n = s.table_size(t.support);
  t.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.values[i] = (std::popcount(i) % 2 == 0) ? 1 : -1;
  }
  return t;
}

ExpressionTerm modular_difference(const Scenario& s, const std::string& x, const std::string& y, int offset,
                                  Rational coefficient) {
  ExpressionTerm t;
  t.support = {s.index_of(x), s.index_of(y)};
  int d = s.outcomes(t.support[0]);
  if (s.outcomes(t.support[1]) != d) throw InputError("modular difference needs equal outcome counts");
  t.coefficient = std::move(coefficient);
  t.values.resize(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      t.values[static_cast<std::size_t>(a * d + b)] = (((a - b + offset) % d) + d) % d;
    }
  }
  return t;
}

}  // namespace monogamy
