#pragma once

// Two-map Cantor construction on [0, 1]:
//
//   m   = (1/2)^(1/theta)        contraction ratio, in (0, 1/2)
//   F_L = m (x + eps)            F_R = 1 - F_L(x)
//   D_0 = [0, 1],  D_{n+1} = F_L(D_n) ∪ F_R(D_n)
//
// D_n has 2^n components of length m^n, D_{n+1} ⊂ relint D_n, and the limit
// set has dimension theta.

#include "divergia/funcs.hpp"
#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace divergia {

/// x ↦ ratio·x + offset with 0 < |ratio| < 1.
template <Scalar T>
struct Similarity {
  T ratio;
  T offset;

  Similarity(T ratio, T offset);

  T operator()(const T& x) const { return ratio * x + offset; }
  T inverse(const T& y) const { return (y - offset) / ratio; }
  Interval<T> image(const Interval<T>& iv) const;
};

template <Scalar T>
struct CantorParams {
  double theta;
  T m;
  T epsilon;

  /// Validates theta ∈ (0,1) and eps ∈ (0, 1/(2m) - 1). Without eps the midpoint
  /// of that range is used. On the exact backend theta must be 1/k, k >= 2,
  /// so that m = 2^-k is rational.
  static CantorParams make(double theta, std::optional<T> epsilon = std::nullopt);

  /// Parameters given by the ratio directly (theta derived from m).
  static CantorParams from_ratio(const T& m, std::optional<T> epsilon = std::nullopt);
};

template <Scalar T>
std::pair<Similarity<T>, Similarity<T>> cantor_maps(const CantorParams<T>& p);

/// Union of the images of A under each map. ConstructionError if an image leaves the domain.
template <Scalar T>
IntervalUnion<T> apply_ifs(std::span<const Similarity<T>> maps, const IntervalUnion<T>& a);

/// n ↦ D_n, memoized; copies share the cache.
template <Scalar T>
class CantorNest {
 public:
  explicit CantorNest(CantorParams<T> params);

  const CantorParams<T>& params() const;
  IntervalUnion<T> operator()(std::size_t n) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

template <Scalar T>
CantorNest<T> cantor_nest(const CantorParams<T>& p) {
  return CantorNest<T>(p);
}

/// [mε/(1-m), 1 - mε/(1-m)], the convex hull of the limit set.
template <Scalar T>
Interval<T> uniform_cantor_hull(const CantorParams<T>& p);

/// (1-2m)(1-m-2mε)/(1-m): length of the first middle part removed from the hull.
template <Scalar T>
T uniform_cantor_gap(const CantorParams<T>& p);

/// Level n of the middle-removal construction started from the hull.
template <Scalar T>
IntervalUnion<T> uniform_cantor(const CantorParams<T>& p, std::size_t n);

/// Tietze family d_n = Σ_{i=0}^{n} bump(D_i, D_{i+1}) over the Cantor nest.
///
/// Point values and integrals are computed from self-similarity in O(n) and
/// O(n^2) without materializing D_n; at(n) materializes and is only practical
/// for moderate n (2^n components).
template <Scalar T>
FunctionFamily<T> cantor_tietze_family(const CantorParams<T>& p);

#define DIVERGIA_IFS_EXTERN(T)                                                               \
  extern template struct Similarity<T>;                                                      \
  extern template struct CantorParams<T>;                                                    \
  extern template std::pair<Similarity<T>, Similarity<T>> cantor_maps(const CantorParams<T>&); \
  extern template IntervalUnion<T> apply_ifs(std::span<const Similarity<T>>,                 \
                                             const IntervalUnion<T>&);                       \
  extern template class CantorNest<T>;                                                       \
  extern template Interval<T> uniform_cantor_hull(const CantorParams<T>&);                   \
  extern template T uniform_cantor_gap(const CantorParams<T>&);                              \
  extern template IntervalUnion<T> uniform_cantor(const CantorParams<T>&, std::size_t);      \
  extern template FunctionFamily<T> cantor_tietze_family(const CantorParams<T>&);

DIVERGIA_IFS_EXTERN(double)
DIVERGIA_IFS_EXTERN(Rational)
#undef DIVERGIA_IFS_EXTERN

}  // namespace divergia
