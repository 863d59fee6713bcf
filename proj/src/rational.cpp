#include "monogamy/rational.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace monogamy {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("not a rational literal: \"" + std::string(text) + "\"");
  }
  Integer p(std::string(num[0] == '+' ? num.substr(1) : num));
  Integer q{std::string(den)};
  if (q == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(p, q);
}

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::string to_decimal(const Rational& r, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << r.convert_to<double>();
  return out.str();
}

}  // namespace monogamy
