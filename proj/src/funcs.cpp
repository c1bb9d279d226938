#include "divergia/funcs.hpp"

#include "divergia/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace divergia {

namespace {

// Appends (x, y) unless x coincides with the last knot.
template <Scalar T>
void push_knot(std::vector<Knot<T>>& knots, const T& x, const T& y) {
  if (!knots.empty() && approx_le(x, knots.back().x)) return;
  knots.push_back({x, y});
}

template <Scalar T>
void require_same_domain(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g) {
  auto a = f.domain();
  auto b = g.domain();
  if (!approx_eq(a.lo, b.lo) || !approx_eq(a.hi, b.hi)) {
    throw UsageError("piecewise-linear functions live on different domains");
  }
}

template <Scalar T>
std::vector<T> merged_abscissae(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g) {
  auto a = f.knots();
  auto b = g.knots();
  std::vector<T> xs;
  xs.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&xs](const T& x) {
    if (xs.empty() || definitely_less(xs.back(), x)) xs.push_back(x);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].x <= b[j].x)) {
      push(a[i++].x);
    } else {
      push(b[j++].x);
    }
  }
  return xs;
}

// Values of f at sorted abscissae, sweeping the knots once.
template <Scalar T>
std::vector<T> sample_sorted(const PiecewiseLinear<T>& f, const std::vector<T>& xs) {
  auto k = f.knots();
  std::vector<T> ys;
  ys.reserve(xs.size());
  std::size_t seg = 1;
  for (const auto& x : xs) {
    while (seg + 1 < k.size() && k[seg].x < x) ++seg;
    const auto& a = k[seg - 1];
    const auto& b = k[seg];
    if (x <= a.x) {
      ys.push_back(a.y);
    } else if (b.x <= x) {
      ys.push_back(b.y);
    } else {
      ys.push_back(a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x));
    }
  }
  return ys;
}

template <Scalar T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

}  // namespace

template <Scalar T>
PiecewiseLinear<T>::PiecewiseLinear(std::vector<Knot<T>> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) {
    throw UsageError("a piecewise-linear function needs at least two knots");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].x < knots_[i].x)) {
      throw UsageError("knot abscissae must be strictly increasing");
    }
  }
}

template <Scalar T>
PiecewiseLinear<T> PiecewiseLinear<T>::constant(const Interval<T>& domain, const T& value) {
  return PiecewiseLinear({{domain.lo, value}, {domain.hi, value}});
}

template <Scalar T>
T PiecewiseLinear<T>::operator()(const T& x) const {
  const auto& lo = knots_.front();
  const auto& hi = knots_.back();
  if (definitely_less(x, lo.x) || definitely_less(hi.x, x)) {
    throw UsageError("x = " + to_string(x) + " lies outside [" + to_string(lo.x) + ", " +
                     to_string(hi.x) + "]");
  }
  if (x <= lo.x) return lo.y;
  if (hi.x <= x) return hi.y;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](const T& v, const Knot<T>& k) { return v < k.x; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  if (x == a.x) return a.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

template <Scalar T>
T PiecewiseLinear<T>::min_value() const {
  return std::min_element(knots_.begin(), knots_.end(),
                          [](const Knot<T>& a, const Knot<T>& b) { return a.y < b.y; })
      ->y;
}

template <Scalar T>
T PiecewiseLinear<T>::max_value() const {
  return std::max_element(knots_.begin(), knots_.end(),
                          [](const Knot<T>& a, const Knot<T>& b) { return a.y < b.y; })
      ->y;
}

template <Scalar T>
PiecewiseLinear<T> add(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g) {
  require_same_domain(f, g);
  auto xs = merged_abscissae(f, g);
  auto fy = sample_sorted(f, xs);
  auto gy = sample_sorted(g, xs);
  std::vector<Knot<T>> knots;
  knots.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) knots.push_back({xs[i], fy[i] + gy[i]});
  return PiecewiseLinear<T>(std::move(knots));
}

template <Scalar T>
PiecewiseLinear<T> scale(const PiecewiseLinear<T>& f, const T& c) {
  std::vector<Knot<T>> knots(f.knots().begin(), f.knots().end());
  for (auto& k : knots) k.y *= c;
  return PiecewiseLinear<T>(std::move(knots));
}

template <Scalar T>
PiecewiseLinear<T> subtract(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g) {
  require_same_domain(f, g);
  auto xs = merged_abscissae(f, g);
  auto fy = sample_sorted(f, xs);
  auto gy = sample_sorted(g, xs);
  std::vector<Knot<T>> knots;
  knots.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) knots.push_back({xs[i], gy[i] - fy[i]});
  return PiecewiseLinear<T>(std::move(knots));
}

template <Scalar T>
T integral(const PiecewiseLinear<T>& f, const T& x, const T& y) {
  if (!(x < y)) throw UsageError("integral needs x < y");
  auto dom = f.domain();
  if (definitely_less(x, dom.lo) || definitely_less(dom.hi, y)) {
    throw UsageError("integration bounds leave the domain");
  }
  auto k = f.knots();
  auto it = std::upper_bound(k.begin(), k.end(), x,
                             [](const T& v, const Knot<T>& kn) { return v < kn.x; });
  std::size_t seg = it == k.begin() ? 1 : static_cast<std::size_t>(it - k.begin());
  if (seg >= k.size()) seg = k.size() - 1;
  T total(0);
  for (; seg < k.size(); ++seg) {
    const auto& a = k[seg - 1];
    const auto& b = k[seg];
    if (!(a.x < y)) break;
    T s = a.x < x ? x : a.x;
    T t = y < b.x ? y : b.x;
    if (!(s < t)) continue;
    T slope = (b.y - a.y) / (b.x - a.x);
    T fs = a.y + slope * (s - a.x);
    T ft = a.y + slope * (t - a.x);
    total += (t - s) * (fs + ft) / 2;
  }
  return total;
}

template <Scalar T>
ProductResult<T> multiply(const PiecewiseLinear<T>& f, const PiecewiseLinear<T>& g) {
  require_same_domain(f, g);
  auto merged = merged_abscissae(f, g);
  std::vector<T> xs;
  xs.reserve(2 * merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (i > 0) xs.push_back((merged[i - 1] + merged[i]) / 2);
    xs.push_back(merged[i]);
  }
  auto fy = sample_sorted(f, xs);
  auto gy = sample_sorted(g, xs);
  std::vector<Knot<T>> knots;
  knots.reserve(xs.size());
  T bound(0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    knots.push_back({xs[i], fy[i] * gy[i]});
    if (i > 0) {
      T e = abs_value(T((fy[i] - fy[i - 1]) * (gy[i] - gy[i - 1]))) / 4;
      if (bound < e) bound = e;
    }
  }
  return {PiecewiseLinear<T>(std::move(knots)), bound};
}

template <Scalar T>
PiecewiseLinear<T> bump_from_sets(const IntervalUnion<T>& outer, const IntervalUnion<T>& inner) {
  if (!subset_of_relative_interior(inner, outer)) {
    throw ConstructionError("bump needs the inner set inside the relative interior of the outer set");
  }
  const auto& dom = outer.domain();
  auto cores = inner.components();
  std::vector<Knot<T>> knots;
  std::size_t j = 0;
  for (const auto& o : outer.components()) {
    std::size_t first = j;
    while (j < cores.size() && approx_le(cores[j].hi, o.hi)) ++j;
    if (first == j) continue;
    const T& core_lo = cores[first].lo;
    const T& core_hi = cores[j - 1].hi;
    if (knots.empty() && definitely_less(dom.lo, o.lo)) push_knot(knots, dom.lo, T(0));
    if (approx_eq(o.lo, dom.lo)) {
      push_knot(knots, o.lo, T(1));
    } else {
      push_knot(knots, o.lo, T(0));
      push_knot(knots, core_lo, T(1));
    }
    push_knot(knots, core_hi, T(1));
    push_knot(knots, o.hi, approx_eq(o.hi, dom.hi) ? T(1) : T(0));
  }
  if (knots.empty()) return PiecewiseLinear<T>::constant(dom, T(0));
  if (definitely_less(knots.back().x, dom.hi)) push_knot(knots, dom.hi, T(0));
  return PiecewiseLinear<T>(std::move(knots));
}

template <Scalar T>
struct FunctionFamily<T>::Cache {
  std::mutex mutex;
  std::map<std::size_t, PiecewiseLinear<T>> entries;
};

template <Scalar T>
FunctionFamily<T>::FunctionFamily(Interval<T> domain, std::string tag,
                                  nlohmann::ordered_json params, Ops ops)
    : domain_(std::move(domain)),
      tag_(std::move(tag)),
      params_(std::move(params)),
      ops_(std::move(ops)),
      cache_(std::make_shared<Cache>()) {
  if (!ops_.materialize) throw UsageError("a function family needs a materialize rule");
}

template <Scalar T>
PiecewiseLinear<T> FunctionFamily<T>::at(std::size_t n) const {
  if (!ops_.memoize) return ops_.materialize(n);
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->entries.find(n); it != cache_->entries.end()) return it->second;
  }
  auto f = ops_.materialize(n);
  std::lock_guard lock(cache_->mutex);
  return cache_->entries.try_emplace(n, std::move(f)).first->second;
}

template <Scalar T>
T FunctionFamily<T>::value(std::size_t n, const T& x) const {
  if (ops_.value) return ops_.value(n, x);
  return at(n)(x);
}

template <Scalar T>
T FunctionFamily<T>::integral(std::size_t n, const T& x, const T& y) const {
  if (ops_.integral) return ops_.integral(n, x, y);
  return divergia::integral(at(n), x, y);
}

template <Scalar T>
T FunctionFamily<T>::increment_lower_bound(std::size_t n) const {
  if (ops_.increment_lower_bound) return ops_.increment_lower_bound(n);
  return subtract(at(n), at(n + 1)).min_value();
}

namespace {

template <Scalar T>
struct PrefixSums {
  Interval<T> domain;
  std::size_t first;
  std::function<PiecewiseLinear<T>(std::size_t)> term;
  std::mutex mutex;
  std::vector<PiecewiseLinear<T>> prefix;

  PiecewiseLinear<T> get(std::size_t n) {
    if (n < first) return PiecewiseLinear<T>::constant(domain, T(0));
    std::size_t index = n - first;
    std::lock_guard lock(mutex);
    while (prefix.size() <= index) {
      std::size_t i = first + prefix.size();
      if (prefix.empty()) {
        prefix.push_back(term(i));
      } else {
        prefix.push_back(add(prefix.back(), term(i)));
      }
    }
    return prefix[index];
  }
};

}  // namespace

template <Scalar T>
FunctionFamily<T> partial_sum_family(Interval<T> domain, std::string tag,
                                     nlohmann::ordered_json params, std::size_t first,
                                     std::function<PiecewiseLinear<T>(std::size_t)> term) {
  auto state = std::make_shared<PrefixSums<T>>();
  state->domain = domain;
  state->first = first;
  state->term = term;
  typename FunctionFamily<T>::Ops ops;
  ops.materialize = [state](std::size_t n) { return state->get(n); };
  ops.increment_lower_bound = [first, term](std::size_t n) {
    if (n + 1 < first) return T(0);
    T low = term(n + 1).min_value();
    return low;
  };
  ops.memoize = false;
  return FunctionFamily<T>(std::move(domain), std::move(tag), std::move(params), std::move(ops));
}

template <Scalar T>
FunctionFamily<T> tietze_family(const Interval<T>& domain, NestedSets<T> nest, std::string tag,
                                nlohmann::ordered_json params) {
  if (!(nest(0) == IntervalUnion<T>::whole(domain))) {
    throw ConstructionError("nest must start with D_0 = the whole domain");
  }
  auto term = [nest](std::size_t i) {
    try {
      return bump_from_sets(nest(i), nest(i + 1));
    } catch (const ConstructionError&) {
      throw ConstructionError("nesting violated at level " + std::to_string(i) + ": D_" +
                              std::to_string(i + 1) + " is not inside the relative interior of D_" +
                              std::to_string(i));
    }
  };
  return partial_sum_family<T>(domain, std::move(tag), std::move(params), 0, term);
}

template <Scalar T>
FunctionFamily<T> linear_in_n_family(const Interval<T>& domain, const T& slope, const T& offset) {
  typename FunctionFamily<T>::Ops ops;
  auto level = [slope, offset](std::size_t n) { return T(slope * T(static_cast<std::int64_t>(n)) + offset); };
  ops.materialize = [domain, level](std::size_t n) {
    return PiecewiseLinear<T>::constant(domain, level(n));
  };
  ops.value = [level](std::size_t n, const T&) { return level(n); };
  ops.integral = [level](std::size_t n, const T& x, const T& y) {
    if (!(x < y)) throw UsageError("integral needs x < y");
    return T(level(n) * (y - x));
  };
  ops.increment_lower_bound = [slope](std::size_t) { return slope; };
  ops.memoize = false;
  nlohmann::ordered_json params = {{"slope", to_string(slope)}, {"offset", to_string(offset)}};
  return FunctionFamily<T>(domain, "linear", std::move(params), std::move(ops));
}

template <Scalar T>
MonotoneReport<T> monotone_check(const FunctionFamily<T>& fam, std::size_t n_max) {
  if (n_max < 2) throw UsageError("monotone_check needs n_max >= 2");
  MonotoneReport<T> report;
  report.n_max = n_max;
  for (std::size_t n = 1; n < n_max; ++n) {
    T bound = fam.increment_lower_bound(n);
    if (approx_le(T(0), bound)) continue;
    auto diff = subtract(fam.at(n), fam.at(n + 1));
    for (const auto& k : diff.knots()) {
      if (definitely_less(k.y, T(0))) {
        report.monotone = false;
        report.first_violation = MonotoneViolation<T>{n, k.x, k.y};
        return report;
      }
    }
  }
  return report;
}

#define DIVERGIA_FUNCS_INSTANTIATE(T)                                                         \
  template class PiecewiseLinear<T>;                                                          \
  template PiecewiseLinear<T> add(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&);      \
  template PiecewiseLinear<T> scale(const PiecewiseLinear<T>&, const T&);                     \
  template PiecewiseLinear<T> subtract(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&); \
  template T integral(const PiecewiseLinear<T>&, const T&, const T&);                         \
  template ProductResult<T> multiply(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&);   \
  template PiecewiseLinear<T> bump_from_sets(const IntervalUnion<T>&, const IntervalUnion<T>&); \
  template class FunctionFamily<T>;                                                           \
  template FunctionFamily<T> partial_sum_family(Interval<T>, std::string,                     \
                                                nlohmann::ordered_json, std::size_t,          \
                                                std::function<PiecewiseLinear<T>(std::size_t)>); \
  template FunctionFamily<T> tietze_family(const Interval<T>&, NestedSets<T>, std::string,    \
                                           nlohmann::ordered_json);                           \
  template FunctionFamily<T> linear_in_n_family(const Interval<T>&, const T&, const T&);      \
  template MonotoneReport<T> monotone_check(const FunctionFamily<T>&, std::size_t);

DIVERGIA_FUNCS_INSTANTIATE(double)
DIVERGIA_FUNCS_INSTANTIATE(Rational)

}  // namespace divergia
