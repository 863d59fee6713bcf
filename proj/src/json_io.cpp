#include "monogamy/json_io.hpp"

#include "monogamy/errors.hpp"

#include <fstream>
#include <sstream>

namespace monogamy {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

const json& array_field(const json& j, const char* key, const std::string& where) {
  const json& a = field(j, key, where);
  if (!a.is_array()) throw InputError(where + "/" + key + ": expected an array");
  return a;
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

Rational rational_at(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw InputError(where + ": expected a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<std::string> ids_at(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of observable ids");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(string_at(j[k], where + "/" + std::to_string(k)));
  return out;
}

json ids_json(const Scenario& s, std::span<const std::size_t> vs) {
  json out = json::array();
  for (std::size_t v : vs) out.push_back(s.observable(v).id);
  return out;
}

json rationals_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

std::string sense_name(Sense s) { return s == Sense::maximize ? "maximize" : "minimize"; }

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + source + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

const Expression& ScenarioDocument::expression(const std::string& name) const {
  if (expressions.empty()) throw InputError("the scenario file defines no expressions");
  if (name.empty()) return expressions.front();
  for (const auto& e : expressions) {
    if (e.name() == name) return e;
  }
  throw InputError("no expression named " + name);
}

ScenarioDocument scenario_from_json(const json& j) {
  const json& obs_json = array_field(j, "observables", "");
  std::vector<Observable> observables;
  for (std::size_t k = 0; k < obs_json.size(); ++k) {
    const std::string where = "/observables/" + std::to_string(k);
    const json& o = obs_json[k];
    Observable ob;
    ob.id = string_at(field(o, "id", where), where + "/id");
    if (o.contains("outcomes")) {
      if (!o["outcomes"].is_number_integer() || o["outcomes"].get<int>() < 1) {
        throw InputError(where + "/outcomes: expected a positive integer");
      }
      ob.outcomes = o["outcomes"].get<int>();
    }
    if (o.contains("label")) ob.label = string_at(o["label"], where + "/label");
    if (o.contains("party")) ob.party = string_at(o["party"], where + "/party");
    observables.push_back(std::move(ob));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (j.contains("edges")) {
    const json& e = array_field(j, "edges", "");
    for (std::size_t k = 0; k < e.size(); ++k) {
      auto pair = ids_at(e[k], "/edges/" + std::to_string(k));
      if (pair.size() != 2) throw InputError("/edges/" + std::to_string(k) + ": an edge joins exactly two observables");
      edges.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("contexts")) {
    const json& c = array_field(j, "contexts", "");
    for (std::size_t k = 0; k < c.size(); ++k) {
      auto ids = ids_at(c[k], "/contexts/" + std::to_string(k));
      for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) edges.emplace_back(ids[a], ids[b]);
      }
    }
  }
  ScenarioDocument doc;
  doc.scenario = std::make_shared<const Scenario>(std::move(observables), edges);
  if (j.contains("expressions")) {
    const json& ex = array_field(j, "expressions", "");
    for (std::size_t k = 0; k < ex.size(); ++k) {
      doc.expressions.push_back(expression_from_json(doc.scenario, ex[k], "/expressions/" + std::to_string(k)));
    }
  }
  if (j.contains("box")) doc.box = j["box"];
  return doc;
}

json scenario_to_json(const Scenario& s, const std::vector<Expression>& expressions) {
  json out;
  out["observables"] = json::array();
  for (const auto& o : s.observables()) {
    json jo{{"id", o.id}, {"outcomes", o.outcomes}};
    if (!o.label.empty()) jo["label"] = o.label;
    if (o.party) jo["party"] = *o.party;
    out["observables"].push_back(jo);
  }
  out["edges"] = json::array();
  for (const auto& [a, b] : s.edge_ids()) out["edges"].push_back({a, b});
  out["expressions"] = json::array();
  for (const auto& e : expressions) out["expressions"].push_back(expression_to_json(e));
  return out;
}

Expression expression_from_json(const ScenarioPtr& s, const json& j, const std::string& where) {
  const std::string name = j.contains("name") ? string_at(j["name"], where + "/name") : std::string("expression");
  Sense sense = Sense::maximize;
  if (j.contains("sense")) {
    const std::string sn = string_at(j["sense"], where + "/sense");
    if (sn == "minimize" || sn == "min") {
      sense = Sense::minimize;
    } else if (sn != "maximize" && sn != "max") {
      throw InputError(where + "/sense: expected maximize or minimize");
    }
  }
  const json& terms = array_field(j, "terms", where);
  std::vector<ExpressionTerm> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string tw = where + "/terms/" + std::to_string(k);
    const json& t = terms[k];
    const auto support = ids_at(field(t, "support", tw), tw + "/support");
    Rational coefficient = t.contains("coefficient") ? rational_at(t["coefficient"], tw + "/coefficient") : Rational(1);
    try {
      if (!t.contains("values")) {
        // Shorthand for dichotomic correlators.
        out.push_back(correlator(*s, support, coefficient));
        continue;
      }
      ExpressionTerm term;
      term.support = s->indices_of(support);
      term.coefficient = coefficient;
      const json& values = array_field(t, "values", tw);
      for (std::size_t v = 0; v < values.size(); ++v) {
        term.values.push_back(rational_at(values[v], tw + "/values/" + std::to_string(v)));
      }
      out.push_back(std::move(term));
    } catch (const InputError& e) {
      if (std::string(e.what()).rfind(tw, 0) == 0) throw;
      throw InputError(tw + ": " + e.what());
    }
  }
  try {
    return Expression(s, name, sense, std::move(out));
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

json expression_to_json(const Expression& e) {
  json out{{"name", e.name()}, {"sense", sense_name(e.sense())}};
  out["terms"] = json::array();
  for (const auto& t : e.terms()) {
    out["terms"].push_back(
        {{"support", ids_json(e.scenario(), t.support)}, {"coefficient", to_string(t.coefficient)}, {"values", rationals_json(t.values)}});
  }
  return out;
}

Behavior box_from_json(const ScenarioPtr& s, const json& j) {
  const json& contexts = array_field(j, "contexts", "/box");
  std::vector<ContextTable> tables;
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const std::string where = "/box/contexts/" + std::to_string(k);
    ContextTable t;
    t.observables = ids_at(field(contexts[k], "observables", where), where + "/observables");
    const json& p = array_field(contexts[k], "probabilities", where);
    for (std::size_t v = 0; v < p.size(); ++v) t.probabilities.push_back(rational_at(p[v], where + "/probabilities/" + std::to_string(v)));
    tables.push_back(std::move(t));
  }
  return behavior_from_tables(s, tables);
}

json box_to_json(const Behavior& b) {
  json out;
  out["contexts"] = json::array();
  for (const auto& t : context_tables(b)) {
    out["contexts"].push_back({{"observables", t.observables}, {"probabilities", rationals_json(t.probabilities)}});
  }
  return out;
}

json assignment_to_json(const Scenario& s, const Assignment& a) {
  json out = json::object();
  for (std::size_t v = 0; v < s.size() && v < a.size(); ++v) out[s.observable(v).id] = a[v];
  return out;
}

Decomposition decomposition_from_json(const Expression& e, const json& j) {
  const Scenario& s = e.scenario();
  const json& parts = array_field(j, "parts", "/decomposition");
  std::vector<VertexSet> vs;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    vs.push_back(make_vertex_set(s.indices_of(ids_at(parts[k], "/decomposition/parts/" + std::to_string(k)))));
  }
  if (!j.contains("assignment")) return assign_terms(e, std::move(vs));
  const json& a = array_field(j, "assignment", "/decomposition");
  Decomposition d;
  d.parts = std::move(vs);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_number_unsigned()) throw InputError("/decomposition/assignment/" + std::to_string(k) + ": expected a part index");
    d.term_part.push_back(a[k].get<std::size_t>());
  }
  return d;
}

json decomposition_to_json(const Scenario& s, const Decomposition& d) {
  json out;
  out["parts"] = json::array();
  for (const auto& p : d.parts) out["parts"].push_back(ids_json(s, p));
  out["assignment"] = d.term_part;
  return out;
}

json classical_certificate_json(const Expression& e, const BoundResult& r, unsigned long long assignments) {
  json out{{"expression", e.name()},
           {"bound_kind", "classical"},
           {"sense", sense_name(e.sense())},
           {"value", to_string(r.value)},
           {"assignments", assignments}};
  if (r.witness) out["witness"] = {{"assignment", assignment_to_json(e.scenario(), *r.witness)}};
  return out;
}

json nd_certificate_json(const Expression& e, const LPSolution& r) {
  json out{{"expression", e.name()},
           {"bound_kind", "no-disturbance"},
           {"sense", sense_name(e.sense())},
           {"status", to_string(r.status)},
           {"optimum", to_string(r.optimum)},
           {"value", to_string(r.optimum)},
           {"constraints",
            {{"variables", r.variables},
             {"equalities", r.constraints},
             {"redundant", r.stats.redundant_rows},
             {"phase1_pivots", r.stats.phase1_pivots},
             {"phase2_pivots", r.stats.phase2_pivots}}}};
  if (r.witness) out["witness"] = {{"box", box_to_json(*r.witness)}};
  return out;
}

json nd_report_json(const Scenario& s, const NoDisturbanceReport& r) {
  json out{{"no_disturbance", r.no_disturbance()}, {"well_formed", r.well_formed()}};
  out["defects"] = json::array();
  for (const auto& d : r.defects) out["defects"].push_back({{"context", d.context}, {"message", d.message}});
  out["violations"] = json::array();
  for (const auto& v : r.violations) {
    out["violations"].push_back({{"contexts", {v.first, v.second}}, {"shared", ids_json(s, v.shared)}});
  }
  return out;
}

json search_trace_json(const SearchTrace& t) {
  return {{"nodes", t.nodes},
          {"pruned_non_chordal", t.pruned_non_chordal},
          {"pruned_bound", t.pruned_bound},
          {"leaves", t.leaves},
          {"complete", t.complete}};
}

json monogamy_certificate_json(const MonogamyCertificate& c, const Decomposition& d) {
  const Expression& e = c.expression;
  const Scenario& s = e.scenario();
  json out{{"kind", "monogamy-certificate"},
           {"expression", e.name()},
           {"sense", sense_name(e.sense())},
           {"bound_kind", "no-disturbance"},
           {"reduced_bound_kind", c.reduced_bound_kind},
           {"classical_value", to_string(c.classical_value)},
           {"value", to_string(c.classical_value)},
           {"part_sum", to_string(c.part_sum())},
           {"verdict", to_string(c.verdict)},
           {"reason", c.reason}};
  if (c.witness) out["witness"] = {{"assignment", assignment_to_json(s, *c.witness)}};
  out["parts"] = json::array();
  for (const auto& p : c.parts) {
    json jp{{"observables", ids_json(s, p.vertices)},
            {"chordal", p.chordal},
            {"terms", p.terms},
            {"reduced_expression", expression_to_json(p.reduced)},
            {"value", to_string(p.value)}};
    jp["edges"] = json::array();
    for (auto [a, b] : p.subgraph.edges()) jp["edges"].push_back({s.observable(p.vertices[a]).id, s.observable(p.vertices[b]).id});
    if (p.witness_cycle) jp["witness_cycle"] = ids_json(s, *p.witness_cycle);
    if (p.witness) jp["witness"] = {{"assignment", assignment_to_json(s, *p.witness)}};
    out["parts"].push_back(std::move(jp));
  }
  out["decomposition"] = decomposition_to_json(s, d);
  out["scenario"] = scenario_to_json(s, {e});
  return out;
}

CertificateCheck check_certificate_json(const json& j, const ClassicalOptions& options) {
  if (!j.is_object() || j.value("kind", "") != "monogamy-certificate") {
    throw InputError("not a monogamy certificate (missing kind)");
  }
  ScenarioDocument doc = scenario_from_json(field(j, "scenario", ""));
  const Expression& e = doc.expression(string_at(field(j, "expression", ""), "/expression"));
  const Decomposition d = decomposition_from_json(e, field(j, "decomposition", ""));
  CertificateCheck check;
  check.recomputed = verify_decomposition(e, d, options);
  const MonogamyCertificate& c = *check.recomputed;
  auto compare = [&](const std::string& what, const std::string& claimed, const std::string& actual) {
    if (claimed != actual) check.mismatches.push_back(what + ": claimed " + claimed + ", recomputed " + actual);
  };
  compare("verdict", string_at(field(j, "verdict", ""), "/verdict"), to_string(c.verdict));
  compare("classical_value", string_at(field(j, "classical_value", ""), "/classical_value"), to_string(c.classical_value));
  const json& parts = array_field(j, "parts", "");
  if (parts.size() != c.parts.size()) {
    compare("part count", std::to_string(parts.size()), std::to_string(c.parts.size()));
  } else {
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const std::string where = "/parts/" + std::to_string(k);
      compare("part " + std::to_string(k + 1) + " value", string_at(field(parts[k], "value", where), where + "/value"),
              to_string(c.parts[k].value));
    }
  }
  check.consistent = check.mismatches.empty();
  return check;
}

}  // namespace monogamy
