#pragma once

#include "monogamy/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace monogamy {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "p/q", "p" or "-p/q". Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Always emits "p/q", with q = 1 for integers.
std::string to_string(const Rational& r);

/// Decimal rendering for human-readable columns only.
std::string to_decimal(const Rational& r, int digits = 6);

}  // namespace monogamy
