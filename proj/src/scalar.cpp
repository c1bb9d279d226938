#include "divergia/scalar.hpp"

#include "divergia/error.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <limits>
#include <string>
#include <system_error>

namespace divergia {

double to_double(double x) { return x; }
double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) {
    throw UsageError("cannot format floating value");
  }
  return std::string(buf, end);
}

std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  throw UsageError("malformed number: '" + std::string(text) + "'");
}

BigInt pow10(std::int64_t k) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < k; ++i) r *= 10;
  return r;
}

// Decimal with optional exponent, converted without rounding.
Rational parse_decimal_exact(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  std::int64_t scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) bad_number(text);
  std::int64_t exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') bad_number(text);
    auto rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) bad_number(text);
  }
  // A leading zero would make the parser read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{BigInt(digits)};
  std::int64_t shift = exponent - scale;
  if (shift >= 0) {
    value *= Rational(pow10(shift));
  } else {
    value /= Rational(pow10(-shift));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

template <>
double parse_scalar<double>(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return to_double(parse_scalar<Rational>(text));
  }
  double value = 0.0;
  auto first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad_number(text);
  return value;
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  if (text.empty()) bad_number(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal_exact(text.substr(0, slash));
    Rational den = parse_decimal_exact(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal_exact(text);
}

template <Scalar T>
T pow_int(const T& base, std::int64_t e) {
  if (e < 0) {
    if (base == T(0)) throw ParameterError("zero raised to a negative power");
    return T(1) / pow_int(base, -e);
  }
  T result(1);
  T factor = base;
  while (e > 0) {
    if (e & 1) result *= factor;
    e >>= 1;
    if (e > 0) factor *= factor;
  }
  return result;
}

template double pow_int<double>(const double&, std::int64_t);
template Rational pow_int<Rational>(const Rational&, std::int64_t);

std::int64_t floor_int(double x) {
  double f = std::floor(x);
  if (!(f >= static_cast<double>(std::numeric_limits<std::int64_t>::min()) &&
        f <= static_cast<double>(std::numeric_limits<std::int64_t>::max()))) {
    throw UsageError("value does not fit a 64-bit integer");
  }
  return static_cast<std::int64_t>(f);
}

std::int64_t floor_int(const Rational& x) {
  BigInt num = numerator(x);
  BigInt den = denominator(x);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  if (q > std::numeric_limits<std::int64_t>::max() ||
      q < std::numeric_limits<std::int64_t>::min()) {
    throw UsageError("value does not fit a 64-bit integer");
  }
  return q.convert_to<std::int64_t>();
}

bool is_integral(double x) { return std::abs(x - std::round(x)) <= kTolerance; }
bool is_integral(const Rational& x) { return denominator(x) == 1; }

}  // namespace divergia
