#include "divergia/intervals.hpp"

#include "divergia/error.hpp"

#include <algorithm>

namespace divergia {

namespace {

template <Scalar T>
void require_same_domain(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  if (!(a.domain() == b.domain())) {
    throw UsageError("interval unions live on different domains");
  }
}

// Merges sorted pieces that overlap, touch, or (float backend) are closer than
// the tolerance.
template <Scalar T>
std::vector<Interval<T>> merge_sorted(std::vector<Interval<T>> parts) {
  std::vector<Interval<T>> out;
  out.reserve(parts.size());
  for (auto& p : parts) {
    if (!out.empty() && approx_le(p.lo, out.back().hi)) {
      if (out.back().hi < p.hi) out.back().hi = p.hi;
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
IntervalUnion<T>::IntervalUnion(Interval<T> domain, std::vector<Interval<T>> components)
    : domain_(std::move(domain)) {
  if (!(domain_.lo < domain_.hi)) {
    throw UsageError("domain must satisfy lo < hi");
  }
  for (auto& c : components) {
    if (definitely_less(c.hi, c.lo)) {
      throw UsageError("interval with hi < lo");
    }
    if (definitely_less(c.lo, domain_.lo) || definitely_less(domain_.hi, c.hi)) {
      throw UsageError("interval [" + to_string(c.lo) + ", " + to_string(c.hi) +
                       "] leaves the domain");
    }
    // Clamp tolerance-level overshoot on the floating backend.
    if (c.lo < domain_.lo) c.lo = domain_.lo;
    if (domain_.hi < c.hi) c.hi = domain_.hi;
    if (c.hi < c.lo) c.hi = c.lo;
  }
  std::sort(components.begin(), components.end(),
            [](const Interval<T>& x, const Interval<T>& y) {
              return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
            });
  parts_ = merge_sorted(std::move(components));
}

template <Scalar T>
bool IntervalUnion<T>::contains(const T& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const T& v, const Interval<T>& c) { return v < c.lo; });
  if (it != parts_.end() && approx_eq(it->lo, x)) return true;
  if (it == parts_.begin()) return false;
  --it;
  return approx_le(it->lo, x) && approx_le(x, it->hi);
}

template <Scalar T>
IntervalUnion<T> IntervalUnion<T>::without_points() const {
  std::vector<Interval<T>> kept;
  for (const auto& c : parts_) {
    if (definitely_less(c.lo, c.hi)) kept.push_back(c);
  }
  return IntervalUnion(domain_, std::move(kept));
}

template <Scalar T>
IntervalUnion<T> unite(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  require_same_domain(a, b);
  std::vector<Interval<T>> all(a.components().begin(), a.components().end());
  all.insert(all.end(), b.components().begin(), b.components().end());
  return IntervalUnion<T>(a.domain(), std::move(all));
}

template <Scalar T>
IntervalUnion<T> intersect(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  require_same_domain(a, b);
  auto x = a.components();
  auto y = b.components();
  std::vector<Interval<T>> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    const T& lo = x[i].lo < y[j].lo ? y[j].lo : x[i].lo;
    const T& hi = x[i].hi < y[j].hi ? x[i].hi : y[j].hi;
    if (lo <= hi) out.push_back({lo, hi});
    if (x[i].hi < y[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion<T>(a.domain(), std::move(out));
}

template <Scalar T>
IntervalUnion<T> complement(const IntervalUnion<T>& a) {
  const auto& dom = a.domain();
  std::vector<Interval<T>> out;
  T start = dom.lo;
  for (const auto& c : a.components()) {
    if (definitely_less(start, c.lo)) out.push_back({start, c.lo});
    start = c.hi;
  }
  if (definitely_less(start, dom.hi)) out.push_back({start, dom.hi});
  return IntervalUnion<T>(dom, std::move(out));
}

template <Scalar T>
T measure(const IntervalUnion<T>& a) {
  T total(0);
  for (const auto& c : a.components()) total += c.hi - c.lo;
  return total;
}

template <Scalar T>
bool subset_of(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  require_same_domain(a, b);
  auto outer = b.components();
  std::size_t j = 0;
  for (const auto& c : a.components()) {
    while (j < outer.size() && definitely_less(outer[j].hi, c.hi)) ++j;
    if (j == outer.size() || !approx_le(outer[j].lo, c.lo)) return false;
  }
  return true;
}

template <Scalar T>
bool subset_of_relative_interior(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  require_same_domain(a, b);
  const auto& dom = a.domain();
  auto outer = b.components();
  std::size_t j = 0;
  for (const auto& c : a.components()) {
    while (j < outer.size() && outer[j].hi < c.hi) ++j;
    if (j == outer.size()) return false;
    const auto& o = outer[j];
    bool left_ok = definitely_less(o.lo, c.lo) ||
                   (approx_eq(o.lo, dom.lo) && approx_le(o.lo, c.lo));
    bool right_ok = definitely_less(c.hi, o.hi) ||
                    (approx_eq(o.hi, dom.hi) && approx_le(c.hi, o.hi));
    if (!left_ok || !right_ok) return false;
  }
  return true;
}

template <Scalar T>
T distance_to(const IntervalUnion<T>& a, const T& x) {
  auto parts = a.components();
  if (parts.empty()) throw UsageError("distance to the empty set");
  auto it = std::upper_bound(parts.begin(), parts.end(), x,
                             [](const T& v, const Interval<T>& c) { return v < c.lo; });
  T best(0);
  bool have = false;
  if (it != parts.end()) {
    best = it->lo - x;
    have = true;
  }
  if (it != parts.begin()) {
    const auto& prev = *(it - 1);
    T d = x <= prev.hi ? T(0) : T(x - prev.hi);
    if (!have || d < best) best = d;
  }
  return best;
}

namespace {

// sup over A of the distance to B. On each component of A the distance to B is
// piecewise linear with maxima at the component ends or at gap midpoints of B.
template <Scalar T>
T directed_distance(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  auto gaps = b.components();
  T worst(0);
  auto consider = [&](const T& x) {
    T d = distance_to(b, x);
    if (worst < d) worst = d;
  };
  for (const auto& c : a.components()) {
    consider(c.lo);
    consider(c.hi);
    auto first = std::lower_bound(gaps.begin(), gaps.end(), c.lo,
                                  [](const Interval<T>& g, const T& v) { return g.hi < v; });
    std::size_t k = first == gaps.begin() ? 0 : static_cast<std::size_t>(first - gaps.begin()) - 1;
    for (; k + 1 < gaps.size(); ++k) {
      T mid = (gaps[k].hi + gaps[k + 1].lo) / 2;
      if (!(mid < c.hi)) break;
      if (c.lo < mid) consider(mid);
    }
  }
  return worst;
}

}  // namespace

template <Scalar T>
T hausdorff_distance(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  require_same_domain(a, b);
  if (a.empty() || b.empty()) throw UsageError("Hausdorff distance needs nonempty sets");
  T ab = directed_distance(a, b);
  T ba = directed_distance(b, a);
  return ab < ba ? ba : ab;
}

template <Scalar T>
IntervalUnion<T> rescale(const IntervalUnion<T>& a, Interval<T> target) {
  const auto& dom = a.domain();
  T factor = (target.hi - target.lo) / (dom.hi - dom.lo);
  std::vector<Interval<T>> out;
  out.reserve(a.size());
  for (const auto& c : a.components()) {
    out.push_back({target.lo + (c.lo - dom.lo) * factor, target.lo + (c.hi - dom.lo) * factor});
  }
  return IntervalUnion<T>(target, std::move(out));
}

#define DIVERGIA_INTERVALS_INSTANTIATE(T)                                                \
  template class IntervalUnion<T>;                                                       \
  template IntervalUnion<T> unite(const IntervalUnion<T>&, const IntervalUnion<T>&);     \
  template IntervalUnion<T> intersect(const IntervalUnion<T>&, const IntervalUnion<T>&); \
  template IntervalUnion<T> complement(const IntervalUnion<T>&);                         \
  template T measure(const IntervalUnion<T>&);                                           \
  template bool subset_of(const IntervalUnion<T>&, const IntervalUnion<T>&);             \
  template bool subset_of_relative_interior(const IntervalUnion<T>&,                     \
                                            const IntervalUnion<T>&);                    \
  template T distance_to(const IntervalUnion<T>&, const T&);                             \
  template T hausdorff_distance(const IntervalUnion<T>&, const IntervalUnion<T>&);       \
  template IntervalUnion<T> rescale(const IntervalUnion<T>&, Interval<T>);

DIVERGIA_INTERVALS_INSTANTIATE(double)
DIVERGIA_INTERVALS_INSTANTIATE(Rational)

}  // namespace divergia
