#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "cdrum/errors.hpp"

namespace cdrum {

// Exact scalar used in rational mode. All axiom verdicts on exact data are
// equality tests, so the rational path carries no tolerance at all.
using Rational = boost::multiprecision::cpp_rational;

enum class NumericMode { Float, Rational };

// Default absolute tolerance for float-mode comparisons.
inline constexpr double kFloatTolerance = 1e-9;

template <class Num>
struct NumTraits;

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr NumericMode mode = NumericMode::Float;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
};

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr NumericMode mode = NumericMode::Rational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// Parses "n/d" or a plain decimal string. Both numeric modes accept both
// spellings; rational mode converts decimals exactly (e.g. "0.25" -> 1/4).
template <class Num>
Num parse_number(const std::string& text);

template <>
inline double parse_number<double>(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    double num = parse_number<double>(text.substr(0, slash));
    double den = parse_number<double>(text.substr(slash + 1));
    if (den == 0.0) throw ParseError("zero denominator in '" + text + "'");
    return num / den;
  }
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("bad number '" + text + "'");
  return value;
}

template <>
inline Rational parse_number<Rational>(const std::string& text) {
  using boost::multiprecision::cpp_int;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_number<Rational>(text.substr(0, slash));
    Rational den = parse_number<Rational>(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return num / den;
  }
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  auto dot = s.find('.');
  std::string digits = s;
  std::size_t frac_len = 0;
  if (dot != std::string::npos) {
    frac_len = s.size() - dot - 1;
    digits = s.substr(0, dot) + s.substr(dot + 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("bad number '" + text + "'");
  cpp_int num(digits);
  cpp_int den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

// Canonical text form: shortest round-trip decimal for doubles, "n/d" in
// lowest terms (or plain "n" for integers) for rationals. Serialization
// relies on this being stable byte-for-byte.
inline std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_number(const Rational& x) {
  if (boost::multiprecision::denominator(x) == 1)
    return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}

// Comparison helpers shared by the axiom checks: exact in rational mode,
// absolute-tolerance in float mode.
template <class Num>
struct Tolerance {
  Num eps;

  static Tolerance standard() {
    if constexpr (NumTraits<Num>::exact)
      return Tolerance{Num(0)};
    else
      return Tolerance{kFloatTolerance};
  }

  bool is_zero(const Num& x) const { return abs_value(x) <= eps; }
  bool nonnegative(const Num& x) const { return x >= -eps; }
  bool positive(const Num& x) const { return x > eps; }
  bool equal(const Num& a, const Num& b) const { return abs_value(a - b) <= eps; }
  bool leq(const Num& a, const Num& b) const { return a <= b + eps; }
};

}  // namespace cdrum
