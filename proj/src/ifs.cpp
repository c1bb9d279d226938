#include "divergia/ifs.hpp"

#include "divergia/error.hpp"

#include <cmath>
#include <mutex>

namespace divergia {

namespace {

template <Scalar T>
Interval<T> unit_interval() {
  return {T(0), T(1)};
}

template <Scalar T>
void validate_epsilon(const T& m, const T& eps) {
  T upper = T(1) / (T(2) * m) - T(1);
  if (!(T(0) < eps) || !(eps < upper)) {
    throw ParameterError("eps = " + to_string(eps) + " must lie in (0, 1/(2m) - 1) = (0, " +
                         to_string(upper) + ")");
  }
}

template <Scalar T>
T default_epsilon(const T& m) {
  return (T(1) / (T(2) * m) - T(1)) / T(2);
}

}  // namespace

template <Scalar T>
Similarity<T>::Similarity(T r, T t) : ratio(std::move(r)), offset(std::move(t)) {
  T magnitude = ratio < T(0) ? T(-ratio) : ratio;
  if (!(T(0) < magnitude) || !(magnitude < T(1))) {
    throw ParameterError("similarity ratio must satisfy 0 < |c| < 1");
  }
}

template <Scalar T>
Interval<T> Similarity<T>::image(const Interval<T>& iv) const {
  T a = (*this)(iv.lo);
  T b = (*this)(iv.hi);
  return a < b ? Interval<T>{a, b} : Interval<T>{b, a};
}

template <Scalar T>
CantorParams<T> CantorParams<T>::make(double theta, std::optional<T> epsilon) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ParameterError("theta must lie in (0, 1)");
  }
  T m;
  if constexpr (ScalarTraits<T>::exact) {
    double inv = 1.0 / theta;
    double k = std::round(inv);
    if (std::abs(inv - k) > 1e-9 || k < 2.0 || k > 62.0) {
      throw ParameterError("the exact backend needs theta = 1/k with integer k >= 2");
    }
    m = pow_int(T(2), -static_cast<std::int64_t>(k));
  } else {
    m = std::pow(0.5, 1.0 / theta);
  }
  T eps = epsilon ? *epsilon : default_epsilon(m);
  validate_epsilon(m, eps);
  return CantorParams{theta, m, eps};
}

template <Scalar T>
CantorParams<T> CantorParams<T>::from_ratio(const T& m, std::optional<T> epsilon) {
  if (!(T(0) < m) || !(m * T(2) < T(1))) {
    throw ParameterError("ratio m must lie in (0, 1/2)");
  }
  T eps = epsilon ? *epsilon : default_epsilon(m);
  validate_epsilon(m, eps);
  double theta = std::log(0.5) / std::log(to_double(m));
  return CantorParams{theta, m, eps};
}

template <Scalar T>
std::pair<Similarity<T>, Similarity<T>> cantor_maps(const CantorParams<T>& p) {
  validate_epsilon(p.m, p.epsilon);
  T shift = p.m * p.epsilon;
  return {Similarity<T>(p.m, shift), Similarity<T>(T(-p.m), T(T(1) - shift))};
}

template <Scalar T>
IntervalUnion<T> apply_ifs(std::span<const Similarity<T>> maps, const IntervalUnion<T>& a) {
  const auto& dom = a.domain();
  std::vector<Interval<T>> images;
  images.reserve(maps.size() * a.size());
  for (const auto& f : maps) {
    for (const auto& c : a.components()) {
      auto img = f.image(c);
      if (definitely_less(img.lo, dom.lo) || definitely_less(dom.hi, img.hi)) {
        throw ConstructionError("image [" + to_string(img.lo) + ", " + to_string(img.hi) +
                                "] escapes the domain");
      }
      images.push_back(std::move(img));
    }
  }
  return IntervalUnion<T>(dom, std::move(images));
}

template <Scalar T>
struct CantorNest<T>::State {
  CantorParams<T> params;
  std::vector<Similarity<T>> maps;
  std::mutex mutex;
  std::vector<IntervalUnion<T>> levels;
};

template <Scalar T>
CantorNest<T>::CantorNest(CantorParams<T> params) : state_(std::make_shared<State>()) {
  auto [left, right] = cantor_maps(params);
  state_->params = std::move(params);
  state_->maps = {left, right};
  state_->levels.push_back(IntervalUnion<T>::whole(unit_interval<T>()));
}

template <Scalar T>
const CantorParams<T>& CantorNest<T>::params() const {
  return state_->params;
}

template <Scalar T>
IntervalUnion<T> CantorNest<T>::operator()(std::size_t n) const {
  std::lock_guard lock(state_->mutex);
  auto& levels = state_->levels;
  while (levels.size() <= n) {
    levels.push_back(apply_ifs<T>(state_->maps, levels.back()));
  }
  return levels[n];
}

template <Scalar T>
Interval<T> uniform_cantor_hull(const CantorParams<T>& p) {
  T a = p.m * p.epsilon / (T(1) - p.m);
  return {a, T(1) - a};
}

template <Scalar T>
T uniform_cantor_gap(const CantorParams<T>& p) {
  const T& m = p.m;
  return (T(1) - T(2) * m) * (T(1) - m - T(2) * m * p.epsilon) / (T(1) - m);
}

template <Scalar T>
IntervalUnion<T> uniform_cantor(const CantorParams<T>& p, std::size_t n) {
  auto [left, right] = cantor_maps(p);
  std::vector<Similarity<T>> maps = {left, right};
  IntervalUnion<T> level(unit_interval<T>(), {uniform_cantor_hull(p)});
  for (std::size_t i = 0; i < n; ++i) level = apply_ifs<T>(maps, level);
  return level;
}

namespace {

// Self-similar description of the Cantor bumps. For i >= 1 and every word w of
// length i, δ_i(F_w(u)) = β(u), where β ramps 0→1 on [0, mε], equals 1 on
// [mε, 1-mε] and ramps back to 0 on [1-mε, 1]; δ_i vanishes off D_i. δ_0 ≡ 1.
template <Scalar T>
struct CantorBumps {
  T m;
  T shift;  // mε
  T left_lo, left_hi, right_lo, right_hi;
  std::vector<T> level_mass;  // ∫ φ_j over [0,1] = (2m)^j (1 - mε)

  explicit CantorBumps(const CantorParams<T>& p)
      : m(p.m),
        shift(p.m * p.epsilon),
        left_lo(shift),
        left_hi(p.m + shift),
        right_lo(T(1) - p.m - shift),
        right_hi(T(1) - shift) {}

  T beta(const T& u) const {
    if (u <= shift) return u / shift;
    if (right_hi <= u) return (T(1) - u) / shift;
    return T(1);
  }

  // ∫_0^u β.
  T beta_integral(const T& u) const {
    if (u <= shift) return u * u / (T(2) * shift);
    if (u <= right_hi) return shift / T(2) + (u - shift);
    T rest = T(1) - u;
    return T(1) - shift - rest * rest / (T(2) * shift);
  }

  const T& mass(std::size_t j) {
    while (level_mass.size() <= j) {
      level_mass.push_back(level_mass.empty() ? T(T(1) - shift)
                                              : T(level_mass.back() * T(2) * m));
    }
    return level_mass[j];
  }

  // d_n(x) = 1 + Σ_{k=1}^{n} β(u_k), u_k the k-th pullback of x.
  T value(std::size_t n, T u) const {
    T total(1);
    for (std::size_t k = 1; k <= n; ++k) {
      if (left_lo <= u && u <= left_hi) {
        u = (u - shift) / m;
      } else if (right_lo <= u && u <= right_hi) {
        u = (right_hi - u) / m;
      } else {
        break;
      }
      total += beta(u);
    }
    return total;
  }

  // E_j(y) = ∫_0^y φ_j with φ_0 = β, φ_j = φ_{j-1}∘F^{-1} on F_L(I) ∪ F_R(I).
  T cumulative(std::size_t j, T y, const std::vector<T>& masses) const {
    T acc(0);
    T mult(1);
    for (std::size_t level = j; level >= 1; --level) {
      const T& below = masses[level - 1];
      if (y <= left_lo) return acc;
      if (y <= left_hi) {
        y = (y - shift) / m;
        mult *= m;
        continue;
      }
      if (y < right_lo) return acc + mult * m * below;
      if (y <= right_hi) {
        // F_R reverses orientation: ∫ over [right_lo, y] = m (S - E_{j-1}(u)).
        acc += mult * T(2) * m * below;
        y = (right_hi - y) / m;
        mult *= -m;
        continue;
      }
      return acc + mult * T(2) * m * below;
    }
    return acc + mult * beta_integral(y);
  }
};

}  // namespace

template <Scalar T>
FunctionFamily<T> cantor_tietze_family(const CantorParams<T>& p) {
  auto nest = cantor_nest(p);
  nlohmann::ordered_json params = {{"theta", p.theta},
                                   {"m", to_string(p.m)},
                                   {"epsilon", to_string(p.epsilon)},
                                   {"backend", ScalarTraits<T>::name}};
  auto base = tietze_family<T>(unit_interval<T>(), [nest](std::size_t n) { return nest(n); },
                               "cantor-tietze", params);
  auto bumps = std::make_shared<const CantorBumps<T>>(p);

  typename FunctionFamily<T>::Ops ops;
  ops.materialize = [base](std::size_t n) { return base.at(n); };
  ops.value = [bumps](std::size_t n, const T& x) {
    if (x < T(0) || T(1) < x) throw UsageError("x outside [0, 1]");
    return bumps->value(n, x);
  };
  ops.integral = [p](std::size_t n, const T& x, const T& y) {
    if (!(x < y)) throw UsageError("integral needs x < y");
    if (x < T(0) || T(1) < y) throw UsageError("integration bounds leave [0, 1]");
    CantorBumps<T> geo(p);
    std::vector<T> masses;
    for (std::size_t j = 0; j <= n; ++j) masses.push_back(geo.mass(j));
    T total = y - x;
    for (std::size_t i = 1; i <= n; ++i) {
      total += geo.cumulative(i, y, masses) - geo.cumulative(i, x, masses);
    }
    return total;
  };
  // Every δ_i takes values in [0, 1], so consecutive partial sums never decrease.
  ops.increment_lower_bound = [](std::size_t) { return T(0); };
  ops.memoize = false;
  return FunctionFamily<T>(unit_interval<T>(), "cantor-tietze", params, std::move(ops));
}

#define DIVERGIA_IFS_INSTANTIATE(T)                                                       \
  template struct Similarity<T>;                                                          \
  template struct CantorParams<T>;                                                        \
  template std::pair<Similarity<T>, Similarity<T>> cantor_maps(const CantorParams<T>&);   \
  template IntervalUnion<T> apply_ifs(std::span<const Similarity<T>>, const IntervalUnion<T>&); \
  template class CantorNest<T>;                                                           \
  template Interval<T> uniform_cantor_hull(const CantorParams<T>&);                       \
  template T uniform_cantor_gap(const CantorParams<T>&);                                  \
  template IntervalUnion<T> uniform_cantor(const CantorParams<T>&, std::size_t);          \
  template FunctionFamily<T> cantor_tietze_family(const CantorParams<T>&);

DIVERGIA_IFS_INSTANTIATE(double)
DIVERGIA_IFS_INSTANTIATE(Rational)

}  // namespace divergia
