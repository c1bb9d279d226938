#pragma once

#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace divergia {

/// Unique s >= 0 with Σ c_i^s = 1, by bisection (at most 200 halvings).
/// ParameterError for an empty list or a ratio outside (0, 1).
double moran_dimension(std::span<const double> ratios);

/// Number of grid boxes [lo + kδ, lo + (k+1)δ) meeting A. The grid is anchored at
/// the domain's lo; the last box is closed so that hi belongs to it.
template <Scalar T>
std::uint64_t box_count(const IntervalUnion<T>& a, const T& delta);

struct ScaleCount {
  double delta;
  std::uint64_t count;
};

struct DimensionEstimate {
  double estimate = 0.0;  // slope clamped to [0, 1]
  std::vector<ScaleCount> counts;  // δ strictly decreasing
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square regression residual
  bool low_confidence = false;
  std::vector<std::string> warnings;
};

/// Least-squares slope of log N(δ) against log(1/δ). Needs at least four
/// distinct positive scales (ParameterError otherwise).
template <Scalar T>
DimensionEstimate box_dimension(const IntervalUnion<T>& a, std::vector<T> scales);

/// Geometric scales (hi-lo)·2^-k, k = 2, 3, ..., stopping before the longest
/// component of A is resolved (at least four, at most twenty scales).
template <Scalar T>
std::vector<T> auto_scales(const IntervalUnion<T>& a);

#define DIVERGIA_DIMENSION_EXTERN(T)                                                  \
  extern template std::uint64_t box_count(const IntervalUnion<T>&, const T&);         \
  extern template DimensionEstimate box_dimension(const IntervalUnion<T>&, std::vector<T>); \
  extern template std::vector<T> auto_scales(const IntervalUnion<T>&);

DIVERGIA_DIMENSION_EXTERN(double)
DIVERGIA_DIMENSION_EXTERN(Rational)
#undef DIVERGIA_DIMENSION_EXTERN

}  // namespace divergia
