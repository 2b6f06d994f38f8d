#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace metaopa {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p/q", "p" and finite decimals such as "2.5".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

Rational floor(const Rational& q);
Rational ceil(const Rational& q);
bool is_integer(const Rational& q);

std::vector<std::string> to_strings(const std::vector<Rational>& v);

}  // namespace metaopa
