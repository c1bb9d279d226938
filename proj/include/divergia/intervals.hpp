#pragma once

// Finite unions of closed intervals inside a compact domain [lo, hi].
//
// Canonical form: components sorted, a_i <= b_i, and strictly separated
// (b_i < a_{i+1}); touching or overlapping pieces are merged on construction.
// On the floating backend pieces whose gap is below the tolerance also merge.
// Degenerate components [a, a] are kept; they carry no measure.
//
// Open sets (superlevel sets, interiors) are represented by their closures.

#include "divergia/scalar.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace divergia {

template <Scalar T>
struct Interval {
  T lo;
  T hi;

  T length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

template <Scalar T>
class IntervalUnion {
 public:
  /// Throws UsageError unless lo < hi and every component is a valid
  /// subinterval of the domain.
  explicit IntervalUnion(Interval<T> domain, std::vector<Interval<T>> components = {});

  static IntervalUnion whole(Interval<T> domain) { return IntervalUnion(domain, {domain}); }
  static IntervalUnion none(Interval<T> domain) { return IntervalUnion(domain, {}); }

  const Interval<T>& domain() const { return domain_; }
  std::span<const Interval<T>> components() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  bool contains(const T& x) const;

  /// Same set with the degenerate components [a, a] removed.
  IntervalUnion without_points() const;

  bool operator==(const IntervalUnion&) const = default;

 private:
  Interval<T> domain_;
  std::vector<Interval<T>> parts_;
};

template <Scalar T>
IntervalUnion<T> unite(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

template <Scalar T>
IntervalUnion<T> intersect(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

/// Closure of domain \ A.
template <Scalar T>
IntervalUnion<T> complement(const IntervalUnion<T>& a);

template <Scalar T>
T measure(const IntervalUnion<T>& a);

/// A ⊆ B as closed sets.
template <Scalar T>
bool subset_of(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

/// A ⊂ int B with the interior taken relative to the domain: each component of A
/// sits strictly inside a component of B, except where that component of B
/// reaches lo or hi.
template <Scalar T>
bool subset_of_relative_interior(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

/// Distance from x to the nearest point of A (A nonempty).
template <Scalar T>
T distance_to(const IntervalUnion<T>& a, const T& x);

/// Hausdorff distance between two nonempty unions.
template <Scalar T>
T hausdorff_distance(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

/// Maps [lo, hi] affinely onto another domain (used for CLI domain conjugation).
template <Scalar T>
IntervalUnion<T> rescale(const IntervalUnion<T>& a, Interval<T> target);

#define DIVERGIA_INTERVALS_EXTERN(T)                                                 \
  extern template class IntervalUnion<T>;                                            \
  extern template IntervalUnion<T> unite(const IntervalUnion<T>&, const IntervalUnion<T>&); \
  extern template IntervalUnion<T> intersect(const IntervalUnion<T>&,                \
                                             const IntervalUnion<T>&);               \
  extern template IntervalUnion<T> complement(const IntervalUnion<T>&);              \
  extern template T measure(const IntervalUnion<T>&);                                \
  extern template bool subset_of(const IntervalUnion<T>&, const IntervalUnion<T>&);  \
  extern template bool subset_of_relative_interior(const IntervalUnion<T>&,          \
                                                   const IntervalUnion<T>&);         \
  extern template T distance_to(const IntervalUnion<T>&, const T&);                  \
  extern template T hausdorff_distance(const IntervalUnion<T>&, const IntervalUnion<T>&); \
  extern template IntervalUnion<T> rescale(const IntervalUnion<T>&, Interval<T>);

DIVERGIA_INTERVALS_EXTERN(double)
DIVERGIA_INTERVALS_EXTERN(Rational)
#undef DIVERGIA_INTERVALS_EXTERN

}  // namespace divergia
