#include "monogamy/catalog.hpp"

#include "monogamy/bounds.hpp"
#include "monogamy/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace monogamy {

std::string to_string(Origin o) { return o == Origin::stated ? "stated" : "derived"; }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const Expression& Fixture::expression(std::string_view n) const {
  for (const auto& e : expressions) {
    if (e.name() == n) return e;
  }
  throw InputError("fixture " + name + " has no expression " + std::string(n));
}

const Behavior& Fixture::box(std::string_view n) const {
  for (const auto& b : boxes) {
    if (b.name == n) return b.box;
  }
  throw InputError("fixture " + name + " has no box " + std::string(n));
}

const ExpectedValue& Fixture::value(std::string_view key) const {
  for (const auto& v : expected) {
    if (v.key == key) return v;
  }
  throw InputError("fixture " + name + " has no expected value " + std::string(key));
}

// ---------------------------------------------------------------------------
// Expression builders

Expression i3322_expression(ScenarioPtr s, const std::array<std::string, 3>& a, const std::array<std::string, 3>& b,
                            std::string name) {
  const Scenario& sc = *s;
  std::vector<ExpressionTerm> t{
      correlator(sc, {a[0]}),           correlator(sc, {a[1]}),           correlator(sc, {b[0]}),
      correlator(sc, {b[1]}),           correlator(sc, {a[0], b[0]}, -1), correlator(sc, {a[0], b[1]}, -1),
      correlator(sc, {a[0], b[2]}, -1), correlator(sc, {a[1], b[0]}, -1), correlator(sc, {a[1], b[1]}, -1),
      correlator(sc, {a[1], b[2]}, 1),  correlator(sc, {a[2], b[0]}, -1), correlator(sc, {a[2], b[1]}, 1),
  };
  return Expression(std::move(s), std::move(name), Sense::maximize, std::move(t));
}

Expression cycle_expression(ScenarioPtr s, const std::vector<std::string>& ids, std::string name) {
  std::vector<ExpressionTerm> t;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.push_back(correlator(*s, {ids[i], ids[i + 1]}));
  t.push_back(correlator(*s, {ids.back(), ids.front()}, -1));
  return Expression(std::move(s), std::move(name), Sense::maximize, std::move(t));
}

Expression chsh_expression(ScenarioPtr s, const std::array<std::string, 2>& a, const std::array<std::string, 2>& b,
                           std::string name) {
  std::vector<ExpressionTerm> t{correlator(*s, {a[0], b[0]}), correlator(*s, {a[0], b[1]}), correlator(*s, {a[1], b[0]}),
                                correlator(*s, {a[1], b[1]}, -1)};
  return Expression(std::move(s), std::move(name), Sense::maximize, std::move(t));
}

ExpressionTerm bit_correlator_term(const Scenario& s, const std::pair<std::string, std::string>& observables,
                                   const std::pair<std::string, std::string>& masks, Rational coefficient,
                                   BitOrder order) {
  const std::size_t x = s.index_of(observables.first);
  const std::size_t y = s.index_of(observables.second);
  if (s.outcomes(x) != 4 || s.outcomes(y) != 4) throw InputError("bit correlators need 4-outcome observables");
  auto parse = [&](const std::string& m) {
    if (m != "10" && m != "01" && m != "11") throw InputError("bit mask must be 10, 01 or 11, got " + m);
    int high = m[0] == '1', low = m[1] == '1';
    if (order == BitOrder::low_first) std::swap(high, low);
    return std::pair<int, int>{high, low};
  };
  const auto mx = parse(masks.first);
  const auto my = parse(masks.second);
  auto sign = [](std::pair<int, int> m, int o) { return ((m.first & (o >> 1)) ^ (m.second & o & 1)) ? -1 : 1; };
  ExpressionTerm t;
  t.support = {x, y};
  t.coefficient = std::move(coefficient);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) t.values.emplace_back(sign(mx, a) * sign(my, b));
  }
  return t;
}

namespace {

std::vector<Observable> party(const std::string& prefix, int count, int outcomes = 2) {
  std::vector<Observable> out;
  for (int i = 1; i <= count; ++i) out.push_back(Observable{prefix + std::to_string(i), {}, outcomes, prefix});
  return out;
}

void expect(Fixture& f, std::string key, Rational value, Origin origin) {
  f.expected.push_back(ExpectedValue{std::move(key), std::move(value), origin});
}

[[noreturn]] void gate_failure(const Fixture& f, const std::string& what) {
  throw Error("fixture " + f.name + " failed its gate: " + what);
}

void check_checksum(Fixture& f, std::string_view label, std::string_view text, std::uint64_t expected) {
  const std::uint64_t h = fnv1a(text);
  if (h != expected) {
    std::ostringstream os;
    os << label << " checksum " << std::hex << h << " differs from the recorded " << expected;
    gate_failure(f, os.str());
  }
  f.gate_log.push_back(std::string(label) + " checksum ok");
}

std::vector<std::string> split_ws(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------
// chsh_monogamy

Fixture make_chsh() {
  Fixture f;
  f.name = "chsh_monogamy";
  f.scenario = build_bell_scenario({{"A", party("A", 2)}, {"B", party("B", 2)}, {"C", party("C", 2)}});
  auto ab = chsh_expression(f.scenario, {"A1", "A2"}, {"B1", "B2"}, "CHSH_AB");
  auto ac = chsh_expression(f.scenario, {"A1", "A2"}, {"C1", "C2"}, "CHSH_AC");
  auto sum = combine({ab, ac}, {Rational(1), Rational(1)}, "CHSH_AB + CHSH_AC");
  f.expressions = {ab, ac, sum};
  const Scenario& s = *f.scenario;
  f.decompositions.push_back(NamedDecomposition{
      "two_part", sum.name(), assign_terms(sum, {s.indices_of({"A1", "A2", "B1", "C2"}), s.indices_of({"A1", "A2", "B2", "C1"})}),
      true});
  f.decompositions.push_back(NamedDecomposition{"triangles", sum.name(),
                                                assign_terms(sum, {s.indices_of({"A1", "B1", "C1"}), s.indices_of({"A2", "B1", "C1"}),
                                                                   s.indices_of({"A1", "B2", "C2"}), s.indices_of({"A2", "B2", "C2"})}),
                                                false});
  f.searches.push_back(SearchSpec{sum.name(), 2, true});
  expect(f, "classical:CHSH_AB", 2, Origin::derived);
  expect(f, "nd:CHSH_AB", 4, Origin::derived);
  expect(f, "classical:CHSH_AB + CHSH_AC", 4, Origin::derived);
  expect(f, "nd:CHSH_AB + CHSH_AC", 4, Origin::derived);
  expect(f, "certificate:two_part", 4, Origin::derived);
  expect(f, "part:two_part:1", 2, Origin::derived);
  expect(f, "part:two_part:2", 2, Origin::derived);
  expect(f, "certificate:triangles", 8, Origin::derived);
  return f;
}

// ---------------------------------------------------------------------------
// i3322_activation

ScenarioPtr alice_cycle_scenario(bool with_charlie) {
  std::vector<std::pair<std::string, std::vector<Observable>>> parties{{"A", party("A", 6)}, {"B", party("B", 3)}};
  if (with_charlie) parties.emplace_back("C", party("C", 3));
  auto bell = build_bell_scenario(parties);
  return add_contexts(*bell, {{"A1", "A2"}, {"A2", "A3"}, {"A3", "A4"}, {"A4", "A5"}, {"A5", "A1"}});
}

Fixture make_i3322_activation() {
  Fixture f;
  f.name = "i3322_activation";
  f.scenario = alice_cycle_scenario(true);
  auto ab = i3322_expression(f.scenario, {"A1", "A4", "A6"}, {"B1", "B2", "B3"}, "I3322_AB");
  auto ac = i3322_expression(f.scenario, {"A1", "A4", "A6"}, {"C1", "C2", "C3"}, "I3322_AC");
  auto i5 = cycle_expression(f.scenario, {"A1", "A2", "A3", "A4", "A5"}, "I(5)");
  // I(5) enters twice as separate terms so each copy can go to its own part.
  auto total = combine({ab, ac, i5, i5}, {Rational(1), Rational(1), Rational(1), Rational(1)},
                       "I3322_AB + I3322_AC + 2 I(5)");
  auto plain = build_bell_scenario({{"A", {Observable{"A1", {}, 2, "A"}, Observable{"A4", {}, 2, "A"}, Observable{"A6", {}, 2, "A"}}},
                                    {"B", party("B", 3)}});
  auto alone = i3322_expression(plain, {"A1", "A4", "A6"}, {"B1", "B2", "B3"}, "I3322");
  f.expressions = {alone, ab, ac, i5, total};

  const Scenario& s = *f.scenario;
  Decomposition d;
  d.parts = {make_vertex_set(s.indices_of({"A1", "A4", "A5", "A6", "B1", "C2"})),
             make_vertex_set(s.indices_of({"A1", "A4", "A5", "A6", "B2", "C1"})),
             make_vertex_set(s.indices_of({"A1", "A2", "A3", "A4", "B3"})),
             make_vertex_set(s.indices_of({"A1", "A2", "A3", "A4", "C3"}))};
  // Term order: I3322_AB, I3322_AC (as in i3322_expression), then the two I(5) copies.
  d.term_part = {0, 0, 0, 1, 0, 1, 2, 0, 1, 2, 0, 1,
                 1, 1, 1, 0, 1, 0, 3, 1, 0, 3, 1, 0,
                 2, 2, 2, 0, 0,
                 3, 3, 3, 1, 1};
  f.decompositions.push_back(NamedDecomposition{"four_parts", total.name(), d, true});

  for (std::size_t k = 0; k < d.term_part.size(); ++k) {
    if (!is_subset(make_vertex_set(total.terms()[k].support), d.parts[d.term_part[k]])) {
      gate_failure(f, "decomposition term " + std::to_string(k) + " lies outside its part");
    }
  }
  for (std::size_t j = 0; j < d.parts.size(); ++j) {
    if (!is_chordal(induced_subgraph(s.graph(), d.parts[j]))) gate_failure(f, "part " + std::to_string(j + 1) + " is not chordal");
  }
  f.gate_log.push_back("decomposition parts chordal and covering");

  expect(f, "classical:I3322", 4, Origin::stated);
  expect(f, "nd:I3322", 8, Origin::stated);
  expect(f, "classical:I(5)", 3, Origin::stated);
  expect(f, "nd:" + total.name(), 14, Origin::stated);
  expect(f, "classical:" + total.name(), 14, Origin::derived);
  expect(f, "certificate:four_parts", 14, Origin::stated);
  expect(f, "part:four_parts:1", 4, Origin::derived);
  expect(f, "part:four_parts:2", 4, Origin::derived);
  expect(f, "part:four_parts:3", 3, Origin::derived);
  expect(f, "part:four_parts:4", 3, Origin::derived);
  return f;
}

// ---------------------------------------------------------------------------
// i3322_no_single_monogamy

// Rows per Alice block: joint outcomes ++, +-, -+, -- of the two listed
// observables; columns B1+, B1-, B2+, B2-, B3+, B3-. "0" marks an empty cell.
constexpr std::string_view kSingleMonogamyTable = R"(A1 A2 | 1/4 1/2 1/4 1/2 1/4 1/2 | 0 0 0 0 0 0 | 0 0 0 0 0 0 | 1/4 0 1/4 0 1/4 0
A2 A3 | 1/4 1/2 1/4 1/2 1/4 1/2 | 0 0 0 0 0 0 | 0 0 0 0 0 0 | 1/4 0 1/4 0 1/4 0
A3 A4 | 1/4 1/3 1/4 1/3 1/4 1/3 | 0 1/6 0 1/6 0 1/6 | 0 0 0 0 0 0 | 1/4 0 1/4 0 1/4 0
A4 A5 | 1/4 1/6 1/4 1/6 1/4 1/6 | 0 1/6 0 1/6 0 1/6 | 0 0 0 0 0 0 | 1/4 1/6 1/4 1/6 1/4 1/6
A5 A1 | 0 1/6 0 1/6 0 1/6 | 1/4 0 1/4 0 1/4 0 | 1/4 1/3 1/4 1/3 1/4 1/3 | 0 0 0 0 0 0
A6 | 0 1/2 1/2 0 1/4 1/4 | 1/2 0 0 1/2 1/4 1/4
)";
constexpr std::uint64_t kSingleMonogamyChecksum = 0x4e83f65d09ab796cULL;

struct TableReading {
  bool swap_pair = false;
  bool flip_rows = false;
  bool flip_columns = false;

  std::string describe() const {
    std::string out = swap_pair ? "second observable slowest" : "first observable slowest";
    out += flip_rows ? ", rows - before +" : ", rows + before -";
    out += flip_columns ? ", columns - before +" : ", columns + before -";
    return out;
  }
};

Behavior read_single_monogamy_table(const ScenarioPtr& s, const TableReading& r) {
  std::vector<ContextTable> tables;
  std::istringstream lines{std::string(kSingleMonogamyTable)};
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string field; std::getline(ls, field, '|');) fields.push_back(field);
    const auto alice = split_ws(fields[0]);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      std::vector<Rational> row;
      for (const auto& w : split_ws(fields[k])) row.push_back(parse_rational(w));
      rows.push_back(std::move(row));
    }
    for (int j = 0; j < 3; ++j) {
      ContextTable t;
      t.observables = alice;
      t.observables.push_back("B" + std::to_string(j + 1));
      const std::size_t width = alice.size() == 2 ? 8 : 4;
      t.probabilities.assign(width, Rational(0));
      for (std::size_t row = 0; row < rows.size(); ++row) {
        for (int b = 0; b < 2; ++b) {
          int bo = r.flip_columns ? 1 - b : b;
          std::size_t index;
          if (alice.size() == 2) {
            int hi = static_cast<int>(row >> 1), lo = static_cast<int>(row & 1);
            if (r.flip_rows) {
              hi = 1 - hi;
              lo = 1 - lo;
            }
            if (r.swap_pair) std::swap(hi, lo);
            index = static_cast<std::size_t>((hi * 2 + lo) * 2 + bo);
          } else {
            int a = static_cast<int>(row);
            if (r.flip_rows) a = 1 - a;
            index = static_cast<std::size_t>(a * 2 + bo);
          }
          t.probabilities[index] = rows[row][static_cast<std::size_t>(2 * j + b)];
        }
      }
      tables.push_back(std::move(t));
    }
  }
  return behavior_from_tables(s, tables);
}

Fixture make_single_monogamy() {
  Fixture f;
  f.name = "i3322_no_single_monogamy";
  f.scenario = alice_cycle_scenario(false);
  auto ab = i3322_expression(f.scenario, {"A1", "A4", "A6"}, {"B1", "B2", "B3"}, "I3322_AB");
  auto i5 = cycle_expression(f.scenario, {"A1", "A2", "A3", "A4", "A5"}, "I(5)");
  auto sum = combine({ab, i5}, {Rational(1), Rational(1)}, "I3322_AB + I(5)");
  f.expressions = {ab, i5, sum};
  check_checksum(f, "probability table", kSingleMonogamyTable, kSingleMonogamyChecksum);

  const Rational want_i3322(13, 3), want_i5(4);
  std::string tried;
  for (int code = 0; code < 8; ++code) {
    TableReading r{(code & 1) != 0, (code & 2) != 0, (code & 4) != 0};
    Behavior b = read_single_monogamy_table(f.scenario, r);
    const bool nd = is_no_disturbance(b);
    const Rational v1 = evaluate(ab, b), v2 = evaluate(i5, b);
    if (nd && v1 == want_i3322 && v2 == want_i5) {
      f.gate_log.push_back("table reading: " + r.describe());
      f.boxes.push_back(NamedBox{"table", std::move(b)});
      break;
    }
    tried += "\n  " + r.describe() + ": no-disturbance " + (nd ? "yes" : "no") + ", I3322 " + to_string(v1) + ", I(5) " +
             to_string(v2);
  }
  if (f.boxes.empty()) gate_failure(f, "no reading of the probability table reproduces 13/3 and 4:" + tried);

  expect(f, "box:table:I3322_AB", want_i3322, Origin::stated);
  expect(f, "box:table:I(5)", want_i5, Origin::stated);
  expect(f, "nd:I3322_AB + I(5)", 9, Origin::derived);
  return f;
}

// ---------------------------------------------------------------------------
// xor3_counterexample

Fixture make_xor3() {
  Fixture f;
  f.name = "xor3_counterexample";
  f.scenario = build_bell_scenario({{"A", party("A", 3)}, {"B", party("B", 3)}, {"C", party("C", 3)}});
  static constexpr int kSigns[3][3] = {{1, -1, -1}, {1, 1, -1}, {1, 1, 1}};
  auto game = [&](const std::string& other, const std::string& name) {
    std::vector<ExpressionTerm> t;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        t.push_back(correlator(*f.scenario, {"A" + std::to_string(a + 1), other + std::to_string(b + 1)}, kSigns[a][b]));
      }
    }
    return Expression(f.scenario, name, Sense::maximize, std::move(t));
  };
  auto ab = game("B", "I_AB");
  auto ac = game("C", "I_AC");
  auto sum = combine({ab, ac}, {Rational(1), Rational(1)}, "I_AB + I_AC");
  f.expressions = {ab, ac, sum};
  f.searches.push_back(SearchSpec{sum.name(), sum.terms().size(), false});
  expect(f, "classical:I_AB", 5, Origin::stated);
  expect(f, "nd:I_AB", 9, Origin::stated);
  expect(f, "nd:I_AB + I_AC", 10, Origin::stated);
  expect(f, "classical:I_AB + I_AC", 10, Origin::derived);
  return f;
}

// ---------------------------------------------------------------------------
// cabello_2334

// One line per context (A_k, B_l, C1): the eight events of probability 1/8,
// each written as a0a1,b0b1,c0c1.
constexpr std::string_view kCabelloTable = R"(A1 B1 C1 | 00,00,00 00,00,01 00,01,00 00,01,01 01,00,10 01,00,11 01,01,10 01,01,11
A1 B2 C1 | 00,00,00 00,00,01 00,01,00 00,01,01 01,10,10 01,10,11 01,11,10 01,11,11
A2 B1 C1 | 00,00,00 00,00,10 01,00,01 01,00,11 10,01,01 10,01,11 11,01,00 11,01,10
A2 B2 C1 | 00,00,00 00,10,10 01,01,01 01,11,11 10,00,01 10,10,11 11,01,00 11,11,10
A3 B1 C1 | 00,00,01 00,00,10 01,00,00 01,00,11 10,01,00 10,01,11 11,01,01 11,01,10
A3 B2 C1 | 00,00,01 00,11,10 01,01,00 01,10,11 10,00,00 10,11,11 11,01,01 11,10,10
)";
constexpr std::uint64_t kCabelloChecksum = 0x03434c8e8a3b52bcULL;

Behavior read_cabello_table(const ScenarioPtr& s) {
  std::vector<ContextTable> tables;
  std::istringstream lines{std::string(kCabelloTable)};
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    const auto bar = line.find('|');
    ContextTable t;
    t.observables = split_ws(line.substr(0, bar));
    t.probabilities.assign(64, Rational(0));
    for (const auto& event : split_ws(line.substr(bar + 1))) {
      std::size_t index = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        const char b0 = event[3 * k], b1 = event[3 * k + 1];
        index = index * 4 + static_cast<std::size_t>(2 * (b0 - '0') + (b1 - '0'));
      }
      t.probabilities[index] += Rational(1, 8);
    }
    tables.push_back(std::move(t));
  }
  return behavior_from_tables(s, tables);
}

Expression cabello_expression(const ScenarioPtr& s, BitOrder order, const std::vector<int>& keep, const std::string& name) {
  struct Row {
    const char* x;
    const char* y;
    const char* mx;
    const char* my;
    int sign;
  };
  static constexpr Row kRows[9] = {
      {"A1", "B1", "10", "10", 1}, {"A1", "B2", "01", "10", 1}, {"A1", "C1", "11", "10", 1},
      {"A2", "B1", "10", "01", 1}, {"A2", "B2", "01", "01", 1}, {"A2", "C1", "11", "01", 1},
      {"A3", "B1", "10", "11", 1}, {"A3", "B2", "01", "11", 1}, {"A3", "C1", "11", "11", -1},
  };
  std::vector<ExpressionTerm> t;
  for (int k : keep) {
    const Row& r = kRows[k];
    t.push_back(bit_correlator_term(*s, {r.x, r.y}, {r.mx, r.my}, r.sign, order));
  }
  return Expression(s, name, Sense::maximize, std::move(t));
}

Fixture make_cabello() {
  Fixture f;
  f.name = "cabello_2334";
  f.scenario = build_bell_scenario({{"A", party("A", 3, 4)}, {"B", party("B", 2, 4)}, {"C", party("C", 1, 4)}});
  check_checksum(f, "event table", kCabelloTable, kCabelloChecksum);
  Behavior box = read_cabello_table(f.scenario);
  if (!is_no_disturbance(box)) gate_failure(f, "event table is not a no-signalling box");
  f.gate_log.push_back("event table is no-signalling");

  std::optional<BitOrder> pinned;
  std::string tried;
  for (BitOrder order : {BitOrder::high_first, BitOrder::low_first}) {
    auto full = cabello_expression(f.scenario, order, {0, 1, 2, 3, 4, 5, 6, 7, 8}, "I");
    const Rational v = evaluate(full, box);
    const char* label = order == BitOrder::high_first ? "mask 10 = first bit" : "mask 10 = second bit";
    if (v == 9) {
      pinned = order;
      f.gate_log.push_back(std::string("bit convention: ") + label);
      break;
    }
    tried += std::string("\n  ") + label + ": " + to_string(v);
  }
  if (!pinned) gate_failure(f, "no bit convention gives the box value 9:" + tried);

  auto full = cabello_expression(f.scenario, *pinned, {0, 1, 2, 3, 4, 5, 6, 7, 8}, "I");
  auto with_b = cabello_expression(f.scenario, *pinned, {0, 1, 3, 4, 6, 7}, "I_B1B2");
  auto with_c = cabello_expression(f.scenario, *pinned, {2, 5, 8}, "I_C1");
  f.expressions = {full, with_b, with_c};
  f.boxes.push_back(NamedBox{"table", std::move(box)});

  // Everyone outputs 00; for the C1 part Alice answers 10 on A3.
  const Scenario& s = *f.scenario;
  const int ten = 2;  // written b0b1 = 10
  Assignment zeros(s.size(), 0);
  Assignment c_strategy(s.size(), 0);
  c_strategy[s.index_of("A3")] = ten;
  f.strategies.push_back(Strategy{"all 00", with_b.name(), zeros, true});
  f.strategies.push_back(Strategy{"A3 10", with_c.name(), c_strategy, true});
  if (with_b.evaluate(zeros) != algebraic_max(with_b) || with_c.evaluate(c_strategy) != algebraic_max(with_c)) {
    gate_failure(f, "printed strategies do not saturate the residual expressions");
  }
  f.gate_log.push_back("residual strategies saturate");

  expect(f, "box:table:I", 9, Origin::stated);
  expect(f, "algebraic:I", 9, Origin::stated);
  expect(f, "classical:I", 7, Origin::stated);
  expect(f, "classical:I_B1B2", 6, Origin::derived);
  expect(f, "classical:I_C1", 3, Origin::derived);
  expect(f, "strategy:all 00", 6, Origin::derived);
  expect(f, "strategy:A3 10", 3, Origin::derived);
  return f;
}

// ---------------------------------------------------------------------------
// Cycle pairs

struct CycleArgs {
  std::size_t n = 6, m = 7, k = 2;
  bool inner = false;
  int d = 3;
};

Fixture make_cycle_fixture(const std::string& name, const CycleDecomposition& cd, const Rational& bound, Origin origin) {
  Fixture f;
  f.name = name;
  f.scenario = cd.scenario;
  const auto& terms = cd.expression.terms();
  const std::size_t n = cd.contradiction_terms[0] + 1;
  std::vector<ExpressionTerm> first(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<ExpressionTerm> second(terms.begin() + static_cast<std::ptrdiff_t>(n), terms.end());
  const auto sense = cd.expression.sense();
  f.expressions = {Expression(cd.scenario, "I(" + std::to_string(n) + ")", sense, std::move(first)),
                   Expression(cd.scenario, "I'(" + std::to_string(terms.size() - n) + ")", sense, std::move(second)),
                   cd.expression};
  f.decompositions.push_back(NamedDecomposition{"case " + to_string(cd.which), cd.expression.name(), cd.decomposition, true});
  for (std::size_t j = 0; j < cd.decomposition.parts.size(); ++j) {
    std::size_t count = 0;
    for (std::size_t k : cd.contradiction_terms) count += cd.decomposition.term_part[k] == j;
    if (count != 1) gate_failure(f, "part " + std::to_string(j + 1) + " does not hold exactly one contradiction edge");
  }
  f.gate_log.push_back("each part holds one contradiction edge");
  f.gate_log.push_back(std::to_string(cd.added_edges.size()) + " commutation edges added for chordality");
  expect(f, "classical:" + cd.expression.name(), bound, origin);
  expect(f, "nd:" + cd.expression.name(), bound, origin);
  expect(f, "certificate:case " + to_string(cd.which), bound, origin);
  return f;
}

Fixture make_cycle_pair(const CycleArgs& a) {
  const std::size_t stride = a.inner ? 2 : 1;
  if (a.k < 2 || stride * (a.k - 1) >= std::min(a.n, a.m)) throw InputError("cycle_pair: k does not fit the cycles");
  CycleConfig c{a.n, a.m, {}, a.inner ? 0 : a.m - 1};
  for (std::size_t l = 0; l < a.k; ++l) c.shared.emplace_back(stride * l, stride * l);
  auto cd = cycle_decomposition(c);
  const std::string name = "cycle_pair(" + std::to_string(a.n) + "," + std::to_string(a.m) + "," + std::to_string(a.k) + "," +
                           (a.inner ? "ii" : "i") + ")";
  if ((cd.which == CycleCase::inner) != a.inner) throw std::logic_error("cycle configuration landed in the wrong case");
  return make_cycle_fixture(name, cd, Rational(static_cast<long>(a.n + a.m) - 4), Origin::stated);
}

Fixture make_cycle_pair_d(const CycleArgs& a) {
  CycleConfig c{a.n, a.m, {{0, 0}, {1, 1}}, a.m - 1};
  auto cd = cycle_decomposition_d_outcome(c, a.d);
  const std::string name =
      "cycle_pair_d(" + std::to_string(a.n) + "," + std::to_string(a.m) + "," + std::to_string(a.d) + ")";
  return make_cycle_fixture(name, cd, Rational(2 * (a.d - 1)), Origin::stated);
}

// ---------------------------------------------------------------------------
// kcbs

Fixture make_kcbs() {
  Fixture f;
  f.name = "kcbs";
  std::vector<Observable> obs = party("A", 5);
  f.scenario = std::make_shared<const Scenario>(
      obs, std::vector<std::pair<std::string, std::string>>{{"A1", "A2"}, {"A2", "A3"}, {"A3", "A4"}, {"A4", "A5"}, {"A5", "A1"}});
  f.expressions = {cycle_expression(f.scenario, {"A1", "A2", "A3", "A4", "A5"}, "I(5)")};
  expect(f, "classical:I(5)", 3, Origin::stated);
  expect(f, "nd:I(5)", 5, Origin::derived);
  return f;
}

// "base(a,b,c)" or "base:a:b:c" -> base and arguments.
std::pair<std::string, std::vector<std::string>> parse_name(std::string_view name) {
  std::string text(name);
  for (char& c : text) {
    if (c == '(' || c == ',' || c == ')') c = ':';
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) {
    if (!p.empty()) parts.push_back(p);
  }
  if (parts.empty()) throw InputError("empty fixture name");
  std::string base = parts.front();
  parts.erase(parts.begin());
  return {base, parts};
}

std::size_t parse_size(const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v < 0) throw InputError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError("bad fixture argument " + s);
  }
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"chsh_monogamy", "i3322_activation", "i3322_no_single_monogamy", "xor3_counterexample", "cabello_2334",
          "cycle_pair(n,m,k,i|ii)", "cycle_pair_d(n,m,d)", "kcbs"};
}

std::vector<std::string> reproduce_all_names() {
  return {"chsh_monogamy",       "kcbs",
          "i3322_activation",    "i3322_no_single_monogamy",
          "xor3_counterexample", "cabello_2334",
          "cycle_pair(5,5,2,i)", "cycle_pair(5,5,2,ii)",
          "cycle_pair(5,6,2,i)", "cycle_pair(5,6,2,ii)",
          "cycle_pair(6,7,2,i)", "cycle_pair(6,7,2,ii)",
          "cycle_pair_d(5,5,2)", "cycle_pair_d(5,5,3)"};
}

Fixture load_fixture(std::string_view name) {
  const auto [base, args] = parse_name(name);
  auto no_args = [&] {
    if (!args.empty()) throw InputError("fixture " + base + " takes no arguments");
  };
  if (base == "chsh_monogamy") {
    no_args();
    return make_chsh();
  }
  if (base == "i3322_activation") {
    no_args();
    return make_i3322_activation();
  }
  if (base == "i3322_no_single_monogamy") {
    no_args();
    return make_single_monogamy();
  }
  if (base == "xor3_counterexample") {
    no_args();
    return make_xor3();
  }
  if (base == "cabello_2334") {
    no_args();
    return make_cabello();
  }
  if (base == "kcbs") {
    no_args();
    return make_kcbs();
  }
  if (base == "cycle_pair") {
    CycleArgs a;
    if (!args.empty()) {
      if (args.size() != 4) throw InputError("cycle_pair takes (n,m,k,case)");
      a.n = parse_size(args[0]);
      a.m = parse_size(args[1]);
      a.k = parse_size(args[2]);
      if (args[3] != "i" && args[3] != "ii") throw InputError("cycle_pair case must be i or ii");
      a.inner = args[3] == "ii";
    }
    return make_cycle_pair(a);
  }
  if (base == "cycle_pair_d") {
    CycleArgs a{5, 5, 2, false, 3};
    if (!args.empty()) {
      if (args.size() != 3) throw InputError("cycle_pair_d takes (n,m,d)");
      a.n = parse_size(args[0]);
      a.m = parse_size(args[1]);
      a.d = static_cast<int>(parse_size(args[2]));
    }
    return make_cycle_pair_d(a);
  }
  throw InputError("unknown fixture " + std::string(name));
}

// ---------------------------------------------------------------------------
// reproduce

std::vector<Claim> reproduce(const Fixture& f, const ReproduceOptions& options) {
  std::vector<Claim> claims;
  const ClassicalOptions copt{options.budget, options.threads};
  std::map<std::string, Rational> classical, nd;
  std::map<std::string, MonogamyCertificate> certs;

  auto add = [&](std::string label, std::string want, std::string got, Origin origin) {
    bool pass = want == got;
    claims.push_back(Claim{f.name, std::move(label), std::move(want), std::move(got), origin, pass});
  };
  auto decomposition = [&](const std::string& name) -> const NamedDecomposition& {
    for (const auto& d : f.decompositions) {
      if (d.name == name) return d;
    }
    throw InputError("fixture " + f.name + " has no decomposition " + name);
  };
  auto certificate = [&](const std::string& name) -> const MonogamyCertificate& {
    auto it = certs.find(name);
    if (it == certs.end()) {
      const auto& d = decomposition(name);
      it = certs.emplace(name, verify_decomposition(f.expression(d.expression), d.decomposition, copt)).first;
    }
    return it->second;
  };

  for (const auto& b : f.boxes) {
    add("no-disturbance(" + b.name + ")", "true", is_no_disturbance(b.box) ? "true" : "false", Origin::stated);
  }
  for (const auto& ev : f.expected) {
    const std::string& key = ev.key;
    const auto colon = key.find(':');
    const std::string kind = key.substr(0, colon);
    const std::string rest = key.substr(colon + 1);
    Rational got;
    std::string label;
    if (kind == "classical") {
      got = classical_max(f.expression(rest), copt).value;
      classical[rest] = got;
      label = "classical_max(" + rest + ")";
    } else if (kind == "nd") {
      got = nd_max(f.expression(rest)).optimum;
      nd[rest] = got;
      label = "nd_max(" + rest + ")";
    } else if (kind == "algebraic") {
      got = algebraic_max(f.expression(rest));
      label = "algebraic_max(" + rest + ")";
    } else if (kind == "box") {
      const auto c2 = rest.find(':');
      const std::string box = rest.substr(0, c2), expr = rest.substr(c2 + 1);
      got = evaluate(f.expression(expr), f.box(box));
      label = expr + " on box " + box;
    } else if (kind == "certificate") {
      const auto& cert = certificate(rest);
      got = cert.part_sum();
      label = "sum of part values (" + rest + ")";
    } else if (kind == "part") {
      const auto c2 = rest.rfind(':');
      const std::string name = rest.substr(0, c2);
      const std::size_t j = parse_size(rest.substr(c2 + 1));
      const auto& cert = certificate(name);
      if (j == 0 || j > cert.parts.size()) throw InputError("no part " + std::to_string(j) + " in " + name);
      got = cert.parts[j - 1].value;
      label = "part " + std::to_string(j) + " value (" + name + ")";
    } else if (kind == "strategy") {
      auto it = std::find_if(f.strategies.begin(), f.strategies.end(), [&](const Strategy& s) { return s.name == rest; });
      if (it == f.strategies.end()) throw InputError("fixture " + f.name + " has no strategy " + rest);
      got = f.expression(it->expression).evaluate(it->assignment);
      label = it->expression + " under strategy " + rest;
    } else {
      throw InputError("unknown expected-value kind " + kind);
    }
    add(label, to_string(ev.value), to_string(got), ev.origin);
  }

  for (const auto& d : f.decompositions) {
    const auto& cert = certificate(d.name);
    add("verdict(" + d.name + ")", d.expect_certified ? "CERTIFIED" : "FAILED", to_string(cert.verdict), Origin::derived);
  }
  for (const auto& st : f.strategies) {
    if (!st.saturates) continue;
    const auto& e = f.expression(st.expression);
    add(st.expression + " saturated by " + st.name, to_string(algebraic_max(e)), to_string(e.evaluate(st.assignment)),
        Origin::stated);
  }
  for (const auto& sp : f.searches) {
    SearchOptions so;
    so.threads = options.threads;
    so.budget = options.budget;
    const auto& e = f.expression(sp.expression);
    auto r = search_decomposition(e, sp.max_parts, so);
    const std::string label = "search_decomposition(" + sp.expression + ", " + std::to_string(sp.max_parts) + ")";
    add(label, sp.expect_found ? "certified" : "NONE", r.decomposition ? "certified" : "NONE",
        sp.expect_found ? Origin::derived : Origin::stated);
    if (r.decomposition) {
      add("parts used by " + label + " <= " + std::to_string(sp.max_parts), "true",
          r.decomposition->parts.size() <= sp.max_parts ? "true" : "false", Origin::derived);
    }
    if (!sp.expect_found) {
      add("search trace complete (" + std::to_string(r.trace.nodes) + " nodes)", "true", r.trace.complete ? "true" : "false",
          Origin::stated);
      so.reverse_order = true;
      auto audit = search_decomposition(e, sp.max_parts, so);
      add("audit search, reversed term order", "NONE", audit.decomposition ? "certified" : "NONE", Origin::stated);
    }
  }
  // classical <= no-disturbance <= algebraic wherever both bounds were computed.
  for (const auto& [name, ndv] : nd) {
    const auto& e = f.expression(name);
    const Rational c = classical.count(name) ? classical[name] : classical_max(e, copt).value;
    const Rational a = algebraic_max(e);
    const bool ordered = e.sense() == Sense::maximize ? (c <= ndv && ndv <= a) : (c >= ndv && ndv >= a);
    add("classical <= nd <= algebraic (" + name + ")", "true", ordered ? "true" : "false", Origin::derived);
  }
  return claims;
}

}  // namespace monogamy
