#pragma once

#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <json.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace divergia {

template <Scalar T>
struct Knot {
  T x;
  T y;

  bool operator==(const Knot&) const = default;
};

/// Continuous piecewise-linear function on [x_0, x_k], linear between knots.
template <Scalar T>
class PiecewiseLinear {
 public:
  /// Needs at least two knots with strictly increasing x.
  explicit PiecewiseLinear(std::vector<Knot<T>> knots);

  static PiecewiseLinear constant(const Interval<T>& domain, const T& value);

  Interval<T> domain() const { return {knots_.front().x, knots_.back().x}; }
  std::span<const Knot<T>> knots() const { return knots_; }

  /// Throws UsageError for x outside the domain.
  T operator()(const T& x) const;

  T min_value() const;
  T max_value() const;

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<Knot<T>> knots_;
};

template <Scalar T>
T eval(const PiecewiseLinear<T>& f, const T& x) {
  return f(x);
}

template <Scalar T>
PiecewiseLinear<T> add(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g);

template <Scalar T>
PiecewiseLinear<T> scale(const PiecewiseLinear<T>& f, const T& c);

/// g - f, evaluated on the merged knot set.
template <Scalar T>
PiecewiseLinear<T> subtract(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g);

/// ∫_x^y f, exact trapezoid sum. Requires lo <= x < y <= hi.
template <Scalar T>
T integral(const PiecewiseLinear<T>& f, const T& x, const T& y);

template <Scalar T>
struct ProductResult {
  PiecewiseLinear<T> function;
  /// Upper bound on |f·g - function| over the domain.
  T error_bound;
};

/// Linear interpolant of f·g on the merged knots refined by one midpoint per segment.
/// The product of two linear pieces deviates from its chord by at most
/// |Δf·Δg|/4 on a segment; halving the segment quarters that.
template <Scalar T>
ProductResult<T> multiply(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g);

/// Continuous [0,1]-valued function that is 0 off `outer` and 1 on `inner`.
///
/// Within each component [A, B] of outer the value is 1 from the first to the
/// last inner point it contains, and ramps linearly to 0 at A and at B. A side
/// where A (or B) is a domain endpoint is held at 1 instead of ramping.
/// Components of outer without inner points are 0.
///
/// Throws ConstructionError unless inner ⊂ relint outer.
template <Scalar T>
PiecewiseLinear<T> bump_from_sets(const IntervalUnion<T>& outer, const IntervalUnion<T>& inner);

/// Lazily indexed sequence n ↦ PiecewiseLinear, meant to be pointwise nondecreasing.
///
/// A family is defined by how to materialize rule(n). Constructions with a
/// cheaper route to point values, integrals or increment bounds supply it;
/// otherwise everything goes through the materialized function.
template <Scalar T>
class FunctionFamily {
 public:
  struct Ops {
    std::function<PiecewiseLinear<T>(std::size_t)> materialize;
    std::function<T(std::size_t, const T&)> value;
    std::function<T(std::size_t, const T&, const T&)> integral;
    /// Certified lower bound of min(rule(n+1) - rule(n)).
    std::function<T(std::size_t)> increment_lower_bound;
    /// Cache materialized functions inside the family.
    bool memoize = true;
  };

  FunctionFamily(Interval<T> domain, std::string tag, nlohmann::ordered_json params, Ops ops);

  const Interval<T>& domain() const { return domain_; }
  const std::string& tag() const { return tag_; }
  const nlohmann::ordered_json& params() const { return params_; }

  PiecewiseLinear<T> at(std::size_t n) const;
  T value(std::size_t n, const T& x) const;
  T integral(std::size_t n, const T& x, const T& y) const;
  T increment_lower_bound(std::size_t n) const;

 private:
  struct Cache;

  Interval<T> domain_;
  std::string tag_;
  nlohmann::ordered_json params_;
  Ops ops_;
  std::shared_ptr<Cache> cache_;
};

/// rule(n) = Σ_{i=first}^{n} term(i), with prefix sums memoized (thread-safe).
/// rule(n) for n < first is the zero function.
template <Scalar T>
FunctionFamily<T> partial_sum_family(Interval<T> domain, std::string tag,
                                     nlohmann::ordered_json params, std::size_t first,
                                     std::function<PiecewiseLinear<T>(std::size_t)> term);

/// n ↦ D_n with D_0 = domain and D_{n+1} ⊂ relint D_n.
template <Scalar T>
using NestedSets = std::function<IntervalUnion<T>(std::size_t)>;

/// d_n = Σ_{i=0}^{n} bump_from_sets(D_i, D_{i+1}). For x in D_{n+1}, d_n(x) = n + 1.
/// A nesting violation raises ConstructionError naming the offending level.
template <Scalar T>
FunctionFamily<T> tietze_family(const Interval<T>& domain, NestedSets<T> nest,
                                std::string tag = "tietze",
                                nlohmann::ordered_json params = nlohmann::ordered_json::object());

/// Constant family rule(n) ≡ slope·n + offset.
template <Scalar T>
FunctionFamily<T> linear_in_n_family(const Interval<T>& domain, const T& slope, const T& offset);

template <Scalar T>
struct MonotoneViolation {
  std::size_t n;  // rule(n+1) < rule(n) somewhere
  T x;
  T drop;         // rule(n+1)(x) - rule(n)(x)
};

template <Scalar T>
struct MonotoneReport {
  bool monotone = true;
  std::size_t n_max = 0;
  std::optional<MonotoneViolation<T>> first_violation;
};

/// Checks rule(n+1) - rule(n) >= -tolerance for 1 <= n < n_max. Differences of
/// piecewise-linear functions are compared on merged knots, so the verdict is exact.
template <Scalar T>
MonotoneReport<T> monotone_check(const FunctionFamily<T>& fam, std::size_t n_max);

#define DIVERGIA_FUNCS_EXTERN(T)                                                               \
  extern template class PiecewiseLinear<T>;                                                    \
  extern template PiecewiseLinear<T> add(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&); \
  extern template PiecewiseLinear<T> scale(const PiecewiseLinear<T>&, const T&);               \
  extern template PiecewiseLinear<T> subtract(const PiecewiseLinear<T>&,                       \
                                              const PiecewiseLinear<T>&);                      \
  extern template T integral(const PiecewiseLinear<T>&, const T&, const T&);                   \
  extern template ProductResult<T> multiply(const PiecewiseLinear<T>&,                         \
                                            const PiecewiseLinear<T>&);                        \
  extern template PiecewiseLinear<T> bump_from_sets(const IntervalUnion<T>&,                   \
                                                    const IntervalUnion<T>&);                  \
  extern template class FunctionFamily<T>;                                                     \
  extern template FunctionFamily<T> partial_sum_family(                                        \
      Interval<T>, std::string, nlohmann::ordered_json, std::size_t,                           \
      std::function<PiecewiseLinear<T>(std::size_t)>);                                         \
  extern template FunctionFamily<T> tietze_family(const Interval<T>&, NestedSets<T>,           \
                                                  std::string, nlohmann::ordered_json);        \
  extern template FunctionFamily<T> linear_in_n_family(const Interval<T>&, const T&, const T&); \
  extern template MonotoneReport<T> monotone_check(const FunctionFamily<T>&, std::size_t);

DIVERGIA_FUNCS_EXTERN(double)
DIVERGIA_FUNCS_EXTERN(Rational)
#undef DIVERGIA_FUNCS_EXTERN

}  // namespace divergia
