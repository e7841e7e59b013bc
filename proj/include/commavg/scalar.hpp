#ifndef COMMAVG_SCALAR_HPP
#define COMMAVG_SCALAR_HPP

#include <cctype>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace commavg {

/// Exact rational scalar used by the oracle paths and by `--exact`.
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Real field underlying a value type: double for double and complex<double>, Rational for Rational.
template <class V> struct real_of { using type = V; };
template <class T> struct real_of<std::complex<T>> { using type = T; };
template <class V> using real_of_t = typename real_of<V>::type;

template <class V> V conj_value(const V& v) {
  if constexpr (is_complex<V>::value) {
    return std::conj(v);
  } else {
    return v;
  }
}

/// |v|^2 in the real field of V.
template <class V> real_of_t<V> abs2(const V& v) {
  if constexpr (is_complex<V>::value) {
    return std::norm(v);
  } else {
    return v * v;
  }
}

template <class V> double to_double(const V& v) {
  if constexpr (is_complex<V>::value) {
    return static_cast<double>(v.real());
  } else if constexpr (is_exact_v<V>) {
    return v.template convert_to<double>();
  } else {
    return static_cast<double>(v);
  }
}

/// |v| as a double, for tolerance comparisons.
template <class V> double abs_double(const V& v) {
  if constexpr (is_complex<V>::value) {
    return std::abs(v);
  } else {
    return std::fabs(to_double(v));
  }
}

/// Converts a real-field value into V (the inverse of taking the real part).
template <class V, class R> V from_real(const R& r) {
  if constexpr (is_complex<V>::value) {
    return V(to_double(r), 0.0);
  } else if constexpr (is_exact_v<V>) {
    return V(r);
  } else {
    return static_cast<V>(to_double(r));
  }
}

namespace detail {

// cpp_int reads a leading 0 as an octal prefix.
inline std::string decimal_digits(std::string_view s) {
  auto first = s.find_first_not_of('0');
  return first == std::string_view::npos ? std::string("0") : std::string(s.substr(first));
}

} // namespace detail

/// Parses "p/q", an integer, or a plain decimal ("-0.125", "2.5e-3") exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ValidationError("malformed rational '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    auto all_digits = [](std::string_view s, bool allow_sign) {
      if (s.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) ++i;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
      return true;
    };
    if (!all_digits(num, true) || !all_digits(den, false)) fail();
    bool minus = num[0] == '-';
    if (num[0] == '-' || num[0] == '+') num.remove_prefix(1);
    boost::multiprecision::cpp_int n(detail::decimal_digits(num));
    if (minus) n = -n;
    boost::multiprecision::cpp_int d(detail::decimal_digits(den));
    if (d == 0) fail();
    return Rational(n, d);
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    ++i;
    std::string exp_text(text.substr(i));
    if (exp_text.empty()) fail();
    std::size_t used = 0;
    long long e = 0;
    try {
      e = std::stoll(exp_text, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != exp_text.size()) fail();
    exponent += e;
  }
  boost::multiprecision::cpp_int mantissa(detail::decimal_digits(digits));
  boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                    static_cast<unsigned>(std::llabs(exponent)));
  Rational value = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  return negative ? Rational(-value) : value;
}

/// "p/q" (or "p" for integers).
inline std::string rational_to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

} // namespace commavg

#endif // COMMAVG_SCALAR_HPP
