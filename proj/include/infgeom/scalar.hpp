#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>
#include <string_view>

#include "infgeom/errors.hpp"

namespace infgeom {

using Rational = boost::multiprecision::cpp_rational;

/// Absolute tolerance used by every float-mode comparison unless overridden.
inline constexpr double kDefaultEpsilon = 1e-9;

/// The two coefficient domains: exact rationals and binary doubles.
template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, double>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

template <Scalar S>
S from_rational(const Rational& q) {
  if constexpr (is_exact_v<S>) {
    return q;
  } else {
    return q.template convert_to<double>();
  }
}

/// Exact value of a double (every finite binary double is a dyadic rational).
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw input_error("non-finite value cannot be made exact");
  return Rational(x);
}
inline Rational to_rational(const Rational& x) { return x; }

template <Scalar S>
bool is_zero(const S& x, double eps = kDefaultEpsilon) {
  if constexpr (is_exact_v<S>) {
    return x.is_zero();
  } else {
    return std::abs(x) <= eps;
  }
}

template <Scalar S>
bool near(const S& a, const S& b, double eps = kDefaultEpsilon) {
  return is_zero<S>(a - b, eps);
}

template <Scalar S>
bool is_positive(const S& x, double eps = kDefaultEpsilon) {
  if constexpr (is_exact_v<S>) {
    return x > 0;
  } else {
    return x > eps;
  }
}

/// Canonical text: "p/q" (or "p" for integers) for rationals, 17 significant
/// digits for doubles.
inline std::string to_string(const Rational& q) { return q.str(); }

inline std::string to_string(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Parses "p", "p/q", "-p/q" and plain decimals such as "1.25" or "-3e-2"
/// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw input_error("empty number");

  auto parse_decimal = [](std::string_view s) -> Rational {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    boost::multiprecision::cpp_int mantissa = 0;
    long exponent = 0;
    bool seen_digit = false;
    bool after_point = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c >= '0' && c <= '9') {
        mantissa = mantissa * 10 + (c - '0');
        if (after_point) --exponent;
        seen_digit = true;
      } else if (c == '.' && !after_point) {
        after_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) throw input_error("malformed number: '" + std::string(s) + "'");
    if (i < s.size()) {
      if (s[i] != 'e' && s[i] != 'E') throw input_error("malformed number: '" + std::string(s) + "'");
      std::string rest(s.substr(i + 1));
      if (rest.empty()) throw input_error("malformed exponent");
      std::size_t used = 0;
      long e = 0;
      try {
        e = std::stol(rest, &used);
      } catch (const std::exception&) {
        throw input_error("malformed exponent: '" + rest + "'");
      }
      if (used != rest.size()) throw input_error("malformed exponent: '" + rest + "'");
      exponent += e;
    }
    Rational value(mantissa);
    boost::multiprecision::cpp_int ten = 10;
    if (exponent > 0) value *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(exponent)));
    if (exponent < 0) value /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-exponent)));
    return negative ? Rational(-value) : value;
  };

  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(trim(text.substr(0, slash)));
  Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den.is_zero()) throw input_error("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace infgeom
