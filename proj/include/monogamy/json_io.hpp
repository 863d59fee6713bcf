#pragma once

#include "monogamy/behavior.hpp"
#include "monogamy/bounds.hpp"
#include "monogamy/certify.hpp"
#include "monogamy/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace monogamy {

using json = nlohmann::json;

/// Parses text, turning syntax errors into InputError with the byte offset.
json parse_json_text(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

/// Scenario file: observables, edges, optional extra contexts, expressions
/// and an optional embedded "box".
struct ScenarioDocument {
  ScenarioPtr scenario;
  std::vector<Expression> expressions;
  std::optional<json> box;

  /// Expression by name; the first one when `name` is empty.
  const Expression& expression(const std::string& name) const;
};

ScenarioDocument scenario_from_json(const json& j);
json scenario_to_json(const Scenario& s, const std::vector<Expression>& expressions = {});

Expression expression_from_json(const ScenarioPtr& s, const json& j, const std::string& where = "/expression");
json expression_to_json(const Expression& e);

/// {"contexts": [{"observables": [...], "probabilities": ["p/q", ...]}]}
Behavior box_from_json(const ScenarioPtr& s, const json& j);
json box_to_json(const Behavior& b);

json assignment_to_json(const Scenario& s, const Assignment& a);

/// {"parts": [[ids...]], "assignment": [part per term]}; a missing
/// assignment charges each term to the first part containing it.
Decomposition decomposition_from_json(const Expression& e, const json& j);
json decomposition_to_json(const Scenario& s, const Decomposition& d);

json classical_certificate_json(const Expression& e, const BoundResult& r, unsigned long long assignments);
json nd_certificate_json(const Expression& e, const LPSolution& r);
json nd_report_json(const Scenario& s, const NoDisturbanceReport& r);
json search_trace_json(const SearchTrace& t);

/// Self-contained monogamy certificate (embeds scenario and expression).
json monogamy_certificate_json(const MonogamyCertificate& c, const Decomposition& d);

struct CertificateCheck {
  bool consistent = false;
  std::vector<std::string> mismatches;
  std::optional<MonogamyCertificate> recomputed;
};

/// Re-verifies a certificate produced by monogamy_certificate_json.
CertificateCheck check_certificate_json(const json& j, const ClassicalOptions& options = {});

}  // namespace monogamy
