#include "monogamy/cli.hpp"

#include "monogamy/bounds.hpp"
#include "monogamy/catalog.hpp"
#include "monogamy/certify.hpp"
#include "monogamy/errors.hpp"
#include "monogamy/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace monogamy::cli {

namespace {

struct Common {
  std::string input;
  std::string expression;
  std::optional<unsigned long long> budget;
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_expression = true) {
  sub->add_option("input", c.input, "JSON input file ('-' for stdin)")->required();
  if (with_expression) sub->add_option("--expression,-e", c.expression, "Expression name (default: the first)");
  sub->add_option("--budget", c.budget, "Work budget (assignments or search nodes)");
  sub->add_option("--threads", c.threads, "Worker threads; results do not depend on it")->check(CLI::Range(1u, 256u));
}

json load(const std::string& path) {
  if (path != "-") return read_json_file(path);
  std::stringstream ss;
  ss << std::cin.rdbuf();
  return parse_json_text(ss.str(), "<stdin>");
}

ClassicalOptions classical_options(const Common& c) {
  ClassicalOptions o;
  if (c.budget) o.budget = *c.budget;
  o.threads = c.threads;
  return o;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json ids(const Scenario& s, std::span<const std::size_t> vs) {
  json a = json::array();
  for (auto v : vs) a.push_back(s.observable(v).id);
  return a;
}

// A bare graph {"vertices": [...], "edges": [...]} or a full scenario.
ScenarioPtr graph_input(const json& j) {
  if (j.is_object() && j.contains("vertices") && !j.contains("observables")) {
    json s = j;
    s["observables"] = json::array();
    for (const auto& v : j["vertices"]) s["observables"].push_back({{"id", v}});
    s.erase("vertices");
    return scenario_from_json(s).scenario;
  }
  return scenario_from_json(j).scenario;
}

Decomposition decomposition_input(const json& doc, const Expression& e, const std::string& path) {
  if (!path.empty()) return decomposition_from_json(e, load(path));
  if (doc.contains("decomposition")) return decomposition_from_json(e, doc["decomposition"]);
  if (doc.contains("decompositions")) {
    for (const auto& d : doc["decompositions"]) {
      if (d.value("expression", e.name()) == e.name()) return decomposition_from_json(e, d);
    }
  }
  throw InputError("no decomposition given (use --decomposition or a \"decomposition\" key)");
}

std::vector<std::pair<std::size_t, std::size_t>> parse_shared(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--shared expects i:j pairs, got \"" + item + "\"");
    try {
      out.emplace_back(std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw InputError("--shared expects i:j pairs, got \"" + item + "\"");
    }
  }
  return out;
}

std::string file_stem(const std::string& name) {
  std::string s;
  for (char ch : name) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

// Expressions built on another scenario (I3322 alone, in the activation
// fixture) are left out, together with their expected values.
json fixture_json(const Fixture& f) {
  std::vector<Expression> own;
  std::vector<std::string> skipped;
  for (const auto& e : f.expressions) {
    if (&e.scenario() == f.scenario.get()) {
      own.push_back(e);
    } else {
      skipped.push_back(e.name());
    }
  }
  auto names_skipped = [&](const std::string& key) {
    return std::any_of(skipped.begin(), skipped.end(), [&](const std::string& n) {
      return key.size() > n.size() && key.compare(key.size() - n.size(), n.size(), n) == 0 &&
             key[key.size() - n.size() - 1] == ':';
    });
  };
  json j = scenario_to_json(*f.scenario, own);
  j["name"] = f.name;
  if (!f.boxes.empty()) j["box"] = box_to_json(f.boxes.front().box);
  j["boxes"] = json::object();
  for (const auto& b : f.boxes) j["boxes"][b.name] = box_to_json(b.box);
  j["decompositions"] = json::array();
  for (const auto& d : f.decompositions) {
    json jd = decomposition_to_json(*f.scenario, d.decomposition);
    jd["name"] = d.name;
    jd["expression"] = d.expression;
    j["decompositions"].push_back(std::move(jd));
  }
  j["expected"] = json::array();
  for (const auto& v : f.expected) {
    if (names_skipped(v.key)) continue;
    j["expected"].push_back({{"key", v.key}, {"value", to_string(v.value)}, {"origin", to_string(v.origin)}});
  }
  return j;
}

int reproduce_command(const std::string& which, const ReproduceOptions& options, const std::string& export_dir,
                      std::ostream& out) {
  std::vector<std::string> names = which == "all" ? reproduce_all_names() : std::vector<std::string>{which};
  std::size_t passed = 0, total = 0;
  out << std::left << std::setw(8) << "STATUS" << std::setw(28) << "FIXTURE" << std::setw(44) << "CLAIM"
      << std::setw(14) << "EXPECTED" << std::setw(14) << "ACTUAL"
      << "ORIGIN\n";
  for (const auto& name : names) {
    const Fixture f = load_fixture(name);
    if (!export_dir.empty()) {
      std::filesystem::create_directories(export_dir);
      std::ofstream file(std::filesystem::path(export_dir) / (file_stem(f.name) + ".json"));
      if (!file) throw InputError("cannot write to " + export_dir);
      file << fixture_json(f).dump(2) << '\n';
    }
    for (const auto& c : reproduce(f, options)) {
      ++total;
      if (c.pass) ++passed;
      out << std::setw(8) << (c.pass ? "PASS" : "FAIL") << std::setw(28) << c.fixture << std::setw(44) << c.label
          << std::setw(14) << c.expected << std::setw(14) << c.actual << to_string(c.origin) << '\n';
    }
  }
  out << passed << "/" << total << " claims reproduced\n";
  return passed == total ? exit_ok : exit_verdict;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monogamy certificates for contextuality and Bell expressions"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  std::string box_path, decomposition_path, export_dir, shared_text, fixture;
  bool check = false, nd_confirm = false;
  std::size_t max_parts = 2, n = 0, m = 0, contradiction = 0;
  int d = 0;

  auto* chordal = app.add_subcommand("chordal-check", "Chordality test with a chordless-cycle witness");
  add_common(chordal, common, false);
  auto* tree = app.add_subcommand("clique-tree", "Maximal clique tree of a chordal scenario");
  add_common(tree, common, false);
  auto* classical = app.add_subcommand("classical-bound", "Exact classical maximum by enumeration");
  add_common(classical, common);
  auto* nd = app.add_subcommand("nd-max", "Exact no-disturbance maximum by rational simplex");
  add_common(nd, common);
  auto* verify_box = app.add_subcommand("verify-box", "Check a box for no-disturbance and evaluate expressions");
  add_common(verify_box, common);
  verify_box->add_option("--box", box_path, "Box file (default: the \"box\" key of the input)");
  auto* certify = app.add_subcommand("certify", "Verify a monogamy decomposition");
  add_common(certify, common);
  certify->add_option("--decomposition", decomposition_path, "Decomposition file");
  certify->add_flag("--check", check, "Input is a certificate to re-verify");
  auto* search = app.add_subcommand("search-decomposition", "Exhaustive search for a certified decomposition");
  add_common(search, common);
  search->add_option("--max-parts", max_parts, "Largest number of parts")->check(CLI::PositiveNumber);
  auto* cycle = app.add_subcommand("cycle-decompose", "Certificate for two cycle expressions sharing vertices");
  cycle->add_option("--n", n, "Length of the first cycle")->required();
  cycle->add_option("--m", m, "Length of the second cycle")->required();
  cycle->add_option("--shared", shared_text, "Shared vertices as i:j,i:j,...")->required();
  cycle->add_option("--contradiction", contradiction, "Contradiction edge of the second cycle")->required();
  cycle->add_option("--d", d, "Outcome count for the directed MINIMIZE variant");
  cycle->add_flag("--nd", nd_confirm, "Also compute the no-disturbance maximum");
  cycle->add_option("--budget", common.budget, "Assignment budget");
  auto* repro = app.add_subcommand("reproduce", "Recompute every value of a fixture, or of all of them");
  repro->add_option("fixture", fixture, "Fixture name or 'all'")->required();
  repro->add_option("--export", export_dir, "Write the fixtures as JSON into this directory");
  repro->add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  repro->add_option("--budget", common.budget, "Search node budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (chordal->parsed()) {
      const ScenarioPtr s = graph_input(load(common.input));
      const auto order = mcs_ordering(s->graph());
      json j{{"chordal", order.perfect}};
      if (order.perfect) {
        j["elimination_order"] = ids(*s, order.order);
      } else {
        j["witness_cycle"] = ids(*s, *chordless_cycle(s->graph()));
      }
      emit(out, j);
      return exit_ok;
    }
    if (tree->parsed()) {
      const ScenarioPtr s = graph_input(load(common.input));
      if (auto cycle_witness = chordless_cycle(s->graph())) {
        std::string msg = "graph is not chordal; chordless cycle:";
        for (auto v : *cycle_witness) msg += " " + s->observable(v).id;
        throw NotChordal(msg);
      }
      const CliqueTree t = clique_tree(s->graph());
      json j{{"cliques", json::array()}, {"edges", json::array()}};
      for (const auto& c : t.nodes) j["cliques"].push_back(ids(*s, c));
      for (const auto& e : t.edges) j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"separator", ids(*s, e.label)}});
      emit(out, j);
      return exit_ok;
    }
    if (classical->parsed() || nd->parsed() || verify_box->parsed() || certify->parsed() || search->parsed()) {
      const json doc = load(common.input);
      if (certify->parsed() && check) {
        const CertificateCheck c = check_certificate_json(doc, classical_options(common));
        json j{{"consistent", c.consistent}, {"mismatches", c.mismatches}};
        if (c.recomputed) j["verdict"] = to_string(c.recomputed->verdict);
        emit(out, j);
        return c.consistent && c.recomputed && c.recomputed->certified() ? exit_ok : exit_verdict;
      }
      const ScenarioDocument sd = scenario_from_json(doc);
      if (verify_box->parsed()) {
        json box_json;
        if (!box_path.empty()) {
          box_json = load(box_path);
        } else if (sd.box) {
          box_json = *sd.box;
        } else {
          throw InputError("no box given (use --box or a \"box\" key)");
        }
        const Behavior b = box_from_json(sd.scenario, box_json);
        const NoDisturbanceReport r = check_no_disturbance(b);
        json j = nd_report_json(*sd.scenario, r);
        j["values"] = json::object();
        if (r.well_formed()) {
          for (const auto& e : sd.expressions) {
            if (common.expression.empty() || e.name() == common.expression) j["values"][e.name()] = to_string(evaluate(e, b));
          }
        }
        emit(out, j);
        return r.no_disturbance() ? exit_ok : exit_verdict;
      }
      const Expression& e = sd.expression(common.expression);
      if (classical->parsed()) {
        const auto count = classical_assignment_count(e);
        emit(out, classical_certificate_json(e, classical_max(e, classical_options(common)), count));
        return exit_ok;
      }
      if (nd->parsed()) {
        const LPSolution r = nd_max(e);
        emit(out, nd_certificate_json(e, r));
        return r.status == LPStatus::optimal ? exit_ok : exit_verdict;
      }
      if (certify->parsed()) {
        const Decomposition dec = decomposition_input(doc, e, decomposition_path);
        const MonogamyCertificate c = verify_decomposition(e, dec, classical_options(common));
        emit(out, monogamy_certificate_json(c, dec));
        return c.certified() ? exit_ok : exit_verdict;
      }
      SearchOptions so;
      if (common.budget) so.budget = *common.budget;
      so.threads = common.threads;
      const SearchResult r = search_decomposition(e, max_parts, so);
      json j;
      if (r.decomposition && r.certificate) {
        j = monogamy_certificate_json(*r.certificate, *r.decomposition);
        j["result"] = "FOUND";
      } else {
        j = {{"kind", "search-result"}, {"expression", e.name()}, {"classical_value", to_string(r.classical_value)}};
        j["result"] = "NONE";
      }
      j["max_parts"] = max_parts;
      j["search"] = search_trace_json(r.trace);
      emit(out, j);
      return r.decomposition ? exit_ok : exit_verdict;
    }
    if (cycle->parsed()) {
      CycleConfig config{n, m, parse_shared(shared_text), contradiction};
      const CycleDecomposition cd = d > 0 ? cycle_decomposition_d_outcome(config, d) : cycle_decomposition(config);
      ClassicalOptions co;
      if (common.budget) co.budget = *common.budget;
      const MonogamyCertificate c = verify_decomposition(cd.expression, cd.decomposition, co);
      json j = monogamy_certificate_json(c, cd.decomposition);
      j["case"] = to_string(cd.which);
      j["added_edges"] = json::array();
      for (const auto& [a, b] : cd.added_edges) j["added_edges"].push_back({a, b});
      if (nd_confirm) {
        const LPSolution r = nd_max(cd.expression);
        j["nd_optimum"] = to_string(r.optimum);
        j["nd_matches"] = r.status == LPStatus::optimal && r.optimum == c.classical_value;
      }
      emit(out, j);
      return c.certified() ? exit_ok : exit_verdict;
    }
    if (repro->parsed()) {
      ReproduceOptions ro;
      ro.threads = common.threads;
      if (common.budget) ro.budget = *common.budget;
      return reproduce_command(fixture, ro, export_dir, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return exit_budget;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_input;
}

}  // namespace monogamy::cli
