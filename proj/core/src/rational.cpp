#include "asp/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace asp {

namespace {

using Int = boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Base-10 digit string to an integer. The string constructor would read a
// leading 0 as an octal prefix.
Int decimal(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Int(std::string(digits));
}

}  // namespace

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Int d = decimal(den);
    if (d == 0) throw std::invalid_argument("zero denominator");
    value = Rational(decimal(num), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
    Int digits = decimal(std::string(whole) + std::string(frac));
    value = Rational(digits, scale);
  } else {
    if (!all_digits(text))
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    value = Rational(decimal(text));
  }
  return negative ? Rational(-value) : value;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double to_double_down(const Rational& r) {
  double d = r.convert_to<double>();
  while (std::isfinite(d) && from_double(d) > r) d = std::nextafter(d, -INFINITY);
  return d;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53 significant bits fit exactly after scaling by 2^53.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{Int(scaled)};
  if (exponent > 0)
    r *= Rational(boost::multiprecision::pow(Int(2), static_cast<unsigned>(exponent)));
  else if (exponent < 0)
    r /= Rational(boost::multiprecision::pow(Int(2), static_cast<unsigned>(-exponent)));
  return r;
}

}  // namespace asp
