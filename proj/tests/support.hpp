#pragma once

#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace divergia::test {

inline Rational Q(std::int64_t p, std::int64_t q = 1) { return Rational(p) / Rational(q); }

inline Rational R(const std::string& text) { return parse_scalar<Rational>(text); }

template <Scalar T>
IntervalUnion<T> make_union(Interval<T> domain, std::initializer_list<std::pair<T, T>> parts) {
  std::vector<Interval<T>> v;
  for (const auto& [a, b] : parts) v.push_back({a, b});
  return IntervalUnion<T>(domain, std::move(v));
}

inline IntervalUnion<Rational> QU(std::initializer_list<std::pair<Rational, Rational>> parts) {
  return make_union<Rational>({Q(0), Q(1)}, parts);
}

inline IntervalUnion<double> DU(std::initializer_list<std::pair<double, double>> parts,
                                Interval<double> domain = {0.0, 1.0}) {
  return make_union<double>(domain, parts);
}

}  // namespace divergia::test
