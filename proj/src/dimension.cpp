#include "divergia/dimension.hpp"

#include "divergia/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace divergia {

double moran_dimension(std::span<const double> ratios) {
  if (ratios.empty()) throw ParameterError("moran_dimension needs at least one ratio");
  for (double c : ratios) {
    if (!(c > 0.0 && c < 1.0)) throw ParameterError("contraction ratios must lie in (0, 1)");
  }
  auto excess = [&](double s) {
    double sum = 0.0;
    for (double c : ratios) sum += std::pow(c, s);
    return sum - 1.0;
  };
  if (ratios.size() == 1) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    double mid = std::midpoint(lo, hi);
    if (mid == lo || mid == hi) break;
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
}

template <Scalar T>
std::uint64_t box_count(const IntervalUnion<T>& a, const T& delta) {
  if (!(T(0) < delta)) throw ParameterError("box size must be positive");
  const auto& dom = a.domain();
  T span = dom.hi - dom.lo;
  std::int64_t last_box = floor_int(T(span / delta));
  if (approx_eq(T(T(static_cast<std::int64_t>(last_box)) * delta), span)) --last_box;
  auto box_of = [&](const T& x) {
    std::int64_t k = floor_int(T((x - dom.lo) / delta));
    return std::clamp<std::int64_t>(k, 0, last_box);
  };
  std::uint64_t count = 0;
  std::int64_t covered = -1;  // highest box already counted
  for (const auto& c : a.components()) {
    std::int64_t first = std::max(box_of(c.lo), covered + 1);
    std::int64_t last = box_of(c.hi);
    if (last >= first) count += static_cast<std::uint64_t>(last - first + 1);
    covered = std::max(covered, last);
  }
  return count;
}

template <Scalar T>
DimensionEstimate box_dimension(const IntervalUnion<T>& a, std::vector<T> scales) {
  std::sort(scales.begin(), scales.end(), [](const T& x, const T& y) { return y < x; });
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  if (scales.size() < 4) throw ParameterError("box_dimension needs at least four distinct scales");
  if (!(T(0) < scales.back())) throw ParameterError("box sizes must be positive");

  DimensionEstimate est;
  for (const auto& d : scales) est.counts.push_back({to_double(d), box_count(a, d)});

  double finest = est.counts.back().delta;
  double coarsest = est.counts.front().delta;
  if (coarsest / finest < 100.0) {
    est.warnings.push_back("scales span less than two decades");
  }
  double longest = 0.0;
  for (const auto& c : a.components()) longest = std::max(longest, to_double(T(c.hi - c.lo)));
  if (finest < longest) {
    est.warnings.push_back("finest scale resolves components of the set; the estimate drifts toward 1");
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& sc : est.counts) {
    if (sc.count == 0) continue;
    xs.push_back(std::log(1.0 / sc.delta));
    ys.push_back(std::log(static_cast<double>(sc.count)));
  }
  bool all_equal = std::all_of(est.counts.begin(), est.counts.end(),
                               [&](const ScaleCount& s) { return s.count == est.counts.front().count; });
  if (all_equal || xs.size() < 2) {
    est.low_confidence = true;
    est.warnings.push_back("degenerate regression: box counts do not change with scale");
  }
  if (xs.size() >= 2) {
    double n = static_cast<double>(xs.size());
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double r = ys[i] - (est.intercept + est.slope * xs[i]);
      ss += r * r;
    }
    est.residual = std::sqrt(ss / n);
  }
  est.estimate = std::clamp(est.slope, 0.0, 1.0);
  return est;
}

template <Scalar T>
std::vector<T> auto_scales(const IntervalUnion<T>& a) {
  const auto& dom = a.domain();
  T longest(0);
  for (const auto& c : a.components()) {
    if (longest < T(c.hi - c.lo)) longest = c.hi - c.lo;
  }
  std::vector<T> scales;
  T delta = (dom.hi - dom.lo) / T(4);
  for (int k = 2; k < 22; ++k) {
    if (scales.size() >= 4 && delta < T(2) * longest) break;
    scales.push_back(delta);
    delta = delta / T(2);
  }
  return scales;
}

#define DIVERGIA_DIMENSION_INSTANTIATE(T)                                          \
  template std::uint64_t box_count(const IntervalUnion<T>&, const T&);             \
  template DimensionEstimate box_dimension(const IntervalUnion<T>&, std::vector<T>); \
  template std::vector<T> auto_scales(const IntervalUnion<T>&);

DIVERGIA_DIMENSION_INSTANTIATE(double)
DIVERGIA_DIMENSION_INSTANTIATE(Rational)

}  // namespace divergia
