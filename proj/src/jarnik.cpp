#include "divergia/jarnik.hpp"

#include "divergia/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace divergia {

namespace {

template <Scalar T>
Interval<T> unit_interval() {
  return {T(0), T(1)};
}

template <Scalar T>
void validate_alpha(const T& alpha) {
  if (!(T(2) < alpha)) throw ParameterError("alpha must exceed 2");
  if constexpr (ScalarTraits<T>::exact) {
    if (!is_integral(alpha)) {
      throw ParameterError("the exact backend needs an integer alpha (q^-alpha must be rational)");
    }
  }
}

// q^-e for e = alpha or alpha + 1.
template <Scalar T>
T inverse_power(std::uint64_t q, const T& exponent) {
  if constexpr (ScalarTraits<T>::exact) {
    return pow_int(T(static_cast<std::int64_t>(q)), -numerator(exponent).template convert_to<std::int64_t>());
  } else {
    return std::pow(static_cast<double>(q), -exponent);
  }
}

template <Scalar T>
IntervalUnion<T> neighbourhoods(std::uint64_t q, const T& radius) {
  std::vector<Interval<T>> parts;
  parts.reserve(q + 1);
  T qq(static_cast<std::int64_t>(q));
  for (std::uint64_t p = 0; p <= q; ++p) {
    T centre = T(static_cast<std::int64_t>(p)) / qq;
    T lo = centre - radius;
    T hi = centre + radius;
    if (lo < T(0)) lo = T(0);
    if (T(1) < hi) hi = T(1);
    parts.push_back({lo, hi});
  }
  return IntervalUnion<T>(unit_interval<T>(), std::move(parts));
}

}  // namespace

template <Scalar T>
T y_radius(std::uint64_t q, const T& alpha) {
  if (q == 0) throw ParameterError("q must be positive");
  validate_alpha(alpha);
  return inverse_power(q, alpha);
}

template <Scalar T>
T z_radius(std::uint64_t q, const T& alpha) {
  if (q == 0) throw ParameterError("q must be positive");
  validate_alpha(alpha);
  return T(static_cast<std::int64_t>(q + 1)) * inverse_power(q, T(alpha + T(1)));
}

template <Scalar T>
IntervalUnion<T> y_set(std::uint64_t q, const T& alpha) {
  return neighbourhoods(q, y_radius(q, alpha));
}

template <Scalar T>
IntervalUnion<T> z_set(std::uint64_t q, const T& alpha) {
  return neighbourhoods(q, z_radius(q, alpha));
}

template <Scalar T>
JarnikParams<T> JarnikParams<T>::make(double theta, std::size_t q_max) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0, 1)");
  if (q_max == 0) throw ParameterError("q_max must be positive");
  T alpha0;
  if constexpr (ScalarTraits<T>::exact) {
    double a = 2.0 / theta;
    double k = std::round(a);
    if (std::abs(a - k) > 1e-9) {
      throw ParameterError("the exact backend needs 2/theta to be an integer");
    }
    alpha0 = T(static_cast<std::int64_t>(k));
  } else {
    alpha0 = 2.0 / theta;
  }
  validate_alpha(alpha0);
  return JarnikParams{theta, alpha0, q_max};
}

template <Scalar T>
FunctionFamily<T> jarnik_family(const JarnikParams<T>& p) {
  validate_alpha(p.alpha0);
  nlohmann::ordered_json params = {{"theta", p.theta},
                                   {"alpha0", to_string(p.alpha0)},
                                   {"q_max", p.q_max},
                                   {"backend", ScalarTraits<T>::name}};
  auto alpha0 = p.alpha0;
  auto q_max = p.q_max;
  auto term = [alpha0, q_max](std::size_t q) {
    if (q > q_max) {
      throw UsageError("jarnik family index " + std::to_string(q) + " exceeds q_max = " +
                       std::to_string(q_max));
    }
    return bump_from_sets(z_set<T>(q, alpha0), y_set<T>(q, alpha0));
  };
  return partial_sum_family<T>(unit_interval<T>(), "jarnik", std::move(params), 1, term);
}

double LiouvilleParams::width(std::size_t q) {
  double lq = std::log(static_cast<double>(q));
  return std::pow(static_cast<double>(q), -std::max(3.0, lq));
}

double LiouvilleParams::height(std::size_t q) { return 1.0 / width(q); }

PiecewiseLinear<double> liouville_level(std::size_t q) {
  if (q == 0) throw ParameterError("q must be positive");
  if (q > LiouvilleParams::kMaxLevel) {
    throw ParameterError("Liouville level " + std::to_string(q) + " is below floating resolution");
  }
  double rho = LiouvilleParams::width(q);
  std::vector<Interval<double>> cores;
  std::vector<Interval<double>> supports;
  for (std::size_t p = 0; p <= q; ++p) {
    double centre = static_cast<double>(p) / static_cast<double>(q);
    cores.push_back({std::max(0.0, centre - rho / 2), std::min(1.0, centre + rho / 2)});
    supports.push_back({std::max(0.0, centre - rho), std::min(1.0, centre + rho)});
  }
  Interval<double> unit{0.0, 1.0};
  auto bump = bump_from_sets(IntervalUnion<double>(unit, std::move(supports)),
                             IntervalUnion<double>(unit, std::move(cores)));
  return scale(bump, LiouvilleParams::height(q));
}

FunctionFamily<double> liouville_family(const LiouvilleParams& p) {
  if (p.q_max == 0 || p.q_max > LiouvilleParams::kMaxLevel) {
    throw ParameterError("liouville q_max must lie in [1, " +
                         std::to_string(LiouvilleParams::kMaxLevel) + "]");
  }
  nlohmann::ordered_json params = {{"q_max", p.q_max},
                                   {"width", "q^-max(3, ln q)"},
                                   {"height", "1/width"},
                                   {"backend", "float"}};
  auto q_max = p.q_max;
  auto term = [q_max](std::size_t q) {
    if (q > q_max) {
      throw UsageError("liouville family index " + std::to_string(q) + " exceeds q_max = " +
                       std::to_string(q_max));
    }
    return liouville_level(q);
  };
  return partial_sum_family<double>(Interval<double>{0.0, 1.0}, "liouville", std::move(params), 1,
                                    term);
}

#define DIVERGIA_JARNIK_INSTANTIATE(T)                              \
  template IntervalUnion<T> y_set(std::uint64_t, const T&);         \
  template IntervalUnion<T> z_set(std::uint64_t, const T&);         \
  template T y_radius(std::uint64_t, const T&);                     \
  template T z_radius(std::uint64_t, const T&);                     \
  template struct JarnikParams<T>;                                  \
  template FunctionFamily<T> jarnik_family(const JarnikParams<T>&);

DIVERGIA_JARNIK_INSTANTIATE(double)
DIVERGIA_JARNIK_INSTANTIATE(Rational)

}  // namespace divergia
