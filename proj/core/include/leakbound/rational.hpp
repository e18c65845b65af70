#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace leakbound {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                              boost::multiprecision::et_off>;

/// Parses "num/den", an integer, or a plain decimal ("0.25", "-1.5") into an
/// exact rational. Decimals are read as exact decimal fractions. Throws
/// ValidationError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& value);

/// Natural logarithm of a positive rational, evaluated in long double.
double log_of(const Rational& value);

double to_double(const Rational& value);

}  // namespace leakbound
