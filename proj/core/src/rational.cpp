#include "leakbound/rational.hpp"

#include <gmp.h>

#include <cctype>
#include <cmath>
#include <string>

#include "leakbound/error.hpp"

namespace leakbound {
namespace {

using boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Base 10 always; a leading zero must not switch GMP to octal.
mpz_int parse_integer(std::string_view s) {
  mpz_int out;
  if (mpz_set_str(out.backend().data(), std::string(s).c_str(), 10) != 0) {
    throw ValidationError("malformed integer '" + std::string(s) + "'");
  }
  return out;
}

[[noreturn]] void malformed(std::string_view text) {
  throw ValidationError("malformed rational '" + std::string(text) + "'");
}

// log(|z|) for an arbitrary-size integer, z != 0.
double log_abs(const mpz_int& z) {
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.backend().data());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) malformed(text);
    mpz_int d = parse_integer(den);
    if (d == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    value = Rational(parse_integer(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      malformed(text);
    }
    mpz_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_int digits = parse_integer(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    value = Rational(digits, scale);
  } else {
    if (!all_digits(s)) malformed(text);
    value = Rational(parse_integer(s));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) { return value.str(); }

double log_of(const Rational& value) {
  if (value <= 0) throw ValidationError("log of non-positive value " + to_string(value));
  return log_abs(numerator(value)) - log_abs(denominator(value));
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace leakbound
