#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace asp {

/// Arbitrary-precision rational, always kept in lowest terms by GMP.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Canonical text form: "n" for integers, "n/d" otherwise (d > 0).
std::string to_string(const Rational& r);

/// Parses "n/d", "n" or a finite decimal such as "0.75". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nearest double.
double to_double(const Rational& r);

/// Largest double that is <= r.
double to_double_down(const Rational& r);

/// Exact rational value of a finite double.
Rational from_double(double x);

}  // namespace asp
