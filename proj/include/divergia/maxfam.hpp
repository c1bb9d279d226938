#pragma once

// Finite-scale checks of the max-family conditions.
//
// Divergence f_n(x) → ∞ and ∫_x^y f_n → ∞ cannot be decided from finitely many
// terms. Every check here fixes thresholds (M, N) and reports them: a point is
// flagged when rule(N)(x) > M, and a subinterval is "reached" at the first
// n <= N_max with ∫ rule(n) > M. Flagged sets approximate I_f from above as
// (M, N) grow; they are not I_f. On the floating backend "> M" means by more
// than the comparison tolerance.

#include "divergia/funcs.hpp"
#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace divergia {

inline constexpr double kDefaultThreshold = 10.0;
inline constexpr std::size_t kDefaultIndex = 30;
inline constexpr std::size_t kDefaultSubintervals = 10;

/// rule(n) = f.rule(n) + g.rule(n).
template <Scalar T>
FunctionFamily<T> sum_family(const FunctionFamily<T>& f, const FunctionFamily<T>& g);

template <Scalar T>
struct ProductProviso {
  T threshold = T(10);
  std::size_t index = 30;
  T floor = T(1) / T(1000000);
  std::vector<T> grid;  // empty: default grid
};

template <Scalar T>
struct ProductFamily {
  FunctionFamily<T> family;
  std::vector<std::string> warnings;
};

/// rule(n) = f.rule(n)·g.rule(n), interpolated on merged knots plus midpoints.
///
/// The limit I_{f·g} = I_f ∪ I_g needs the other factor to converge to a
/// positive limit at divergence points. As a finite surrogate, at every grid
/// point flagged for one factor the other must exceed `floor` at indices
/// index/2 .. index; failures become warnings on the result.
template <Scalar T>
ProductFamily<T> product_family(const FunctionFamily<T>& f, const FunctionFamily<T>& g,
                                ProductProviso<T> proviso = {});

/// Bound on |f·g - product_family rule(n)|.
template <Scalar T>
T product_error(const FunctionFamily<T>& f, const FunctionFamily<T>& g, std::size_t n);

/// Closure of {x : f(x) > M}.
template <Scalar T>
IntervalUnion<T> superlevel_set(const PiecewiseLinear<T>& f, const T& level);

/// `points` equispaced points plus every p/q with q <= max_denominator, mapped
/// onto the domain, sorted and deduplicated.
template <Scalar T>
std::vector<T> default_grid(const Interval<T>& domain, std::size_t points = 1001,
                            std::size_t max_denominator = 20);

template <Scalar T>
struct DivergenceEstimate {
  T threshold;
  std::size_t index;
  std::vector<T> grid;
  std::vector<T> values;  // rule(index)(x)
  std::vector<bool> flagged;

  std::size_t flagged_count() const;
};

template <Scalar T>
DivergenceEstimate<T> divergence_estimate(const FunctionFamily<T>& fam, const T& threshold,
                                          std::size_t index, std::vector<T> grid = {});

template <Scalar T>
struct SubintervalRow {
  T x;
  T y;
  std::optional<std::size_t> reached_at;  // smallest n with ∫_x^y rule(n) > M
  std::vector<T> integrals;               // n = 1 .. N_max
  bool nondecreasing = true;
};

template <Scalar T>
struct MaxFamilyReport {
  T threshold;
  std::size_t n_max;
  std::string grid;
  MonotoneReport<T> monotone;
  std::vector<SubintervalRow<T>> rows;

  bool all_reached() const;
  bool passed() const { return monotone.monotone && all_reached(); }
};

/// `count` equal subintervals of the domain.
template <Scalar T>
std::vector<Interval<T>> equal_subintervals(const Interval<T>& domain,
                                            std::size_t count = kDefaultSubintervals);

template <Scalar T>
MaxFamilyReport<T> max_family_check(const FunctionFamily<T>& fam, const T& threshold,
                                    std::size_t n_max, std::vector<Interval<T>> subintervals = {});

/// f_n = d_n + z_n: the Cantor Tietze family of dimension theta plus the
/// Liouville family. theta = 0 drops d_n, theta = 1 uses d_n ≡ n.
FunctionFamily<double> anydh_family(double theta);

#define DIVERGIA_MAXFAM_EXTERN(T)                                                                \
  extern template FunctionFamily<T> sum_family(const FunctionFamily<T>&, const FunctionFamily<T>&); \
  extern template ProductFamily<T> product_family(const FunctionFamily<T>&,                      \
                                                  const FunctionFamily<T>&, ProductProviso<T>);  \
  extern template T product_error(const FunctionFamily<T>&, const FunctionFamily<T>&, std::size_t); \
  extern template IntervalUnion<T> superlevel_set(const PiecewiseLinear<T>&, const T&);          \
  extern template std::vector<T> default_grid(const Interval<T>&, std::size_t, std::size_t);     \
  extern template struct DivergenceEstimate<T>;                                                  \
  extern template DivergenceEstimate<T> divergence_estimate(const FunctionFamily<T>&, const T&,  \
                                                            std::size_t, std::vector<T>);        \
  extern template struct MaxFamilyReport<T>;                                                     \
  extern template std::vector<Interval<T>> equal_subintervals(const Interval<T>&, std::size_t);  \
  extern template MaxFamilyReport<T> max_family_check(const FunctionFamily<T>&, const T&,        \
                                                      std::size_t, std::vector<Interval<T>>);

DIVERGIA_MAXFAM_EXTERN(double)
DIVERGIA_MAXFAM_EXTERN(Rational)
#undef DIVERGIA_MAXFAM_EXTERN

}  // namespace divergia
