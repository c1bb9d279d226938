#include "divergia/maxfam.hpp"

#include "divergia/error.hpp"
#include "divergia/ifs.hpp"
#include "divergia/jarnik.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace divergia {

namespace {

template <Scalar T>
void require_same_domain(const FunctionFamily<T>& f, const FunctionFamily<T>& g) {
  if (!(f.domain() == g.domain())) throw UsageError("families live on different domains");
}

template <Scalar T>
nlohmann::ordered_json describe(const FunctionFamily<T>& f) {
  return {{"tag", f.tag()}, {"params", f.params()}};
}

template <Scalar T>
FunctionFamily<T> sum_tagged(const FunctionFamily<T>& f, const FunctionFamily<T>& g, std::string tag,
                             nlohmann::ordered_json params) {
  require_same_domain(f, g);
  typename FunctionFamily<T>::Ops ops;
  ops.materialize = [f, g](std::size_t n) { return add(f.at(n), g.at(n)); };
  ops.value = [f, g](std::size_t n, const T& x) { return T(f.value(n, x) + g.value(n, x)); };
  ops.integral = [f, g](std::size_t n, const T& x, const T& y) {
    return T(f.integral(n, x, y) + g.integral(n, x, y));
  };
  ops.increment_lower_bound = [f, g](std::size_t n) {
    return T(f.increment_lower_bound(n) + g.increment_lower_bound(n));
  };
  return FunctionFamily<T>(f.domain(), std::move(tag), std::move(params), std::move(ops));
}

template <Scalar T>
void check_grid(const Interval<T>& dom, const std::vector<T>& grid) {
  for (const auto& x : grid) {
    if (x < dom.lo || dom.hi < x) throw UsageError("grid point " + to_string(x) + " outside the domain");
  }
}

// First grid point flagged for `flagged` where `other` sinks to the floor at
// some index in [index/2, index], with the count of such points.
template <Scalar T>
std::optional<std::string> proviso_failure(const FunctionFamily<T>& flagged, const FunctionFamily<T>& other,
                                           const ProductProviso<T>& pv, const std::vector<T>& grid,
                                           const char* flagged_name, const char* other_name) {
  std::size_t failures = 0;
  std::string first;
  for (const auto& x : grid) {
    if (!(definitely_less(pv.threshold, flagged.value(pv.index, x)))) continue;
    for (std::size_t k = std::max<std::size_t>(1, pv.index / 2); k <= pv.index; ++k) {
      T v = other.value(k, x);
      if (!(pv.floor < v)) {
        if (failures == 0) {
          first = std::string(other_name) + "_" + std::to_string(k) + "(" + to_string(x) + ") = " + to_string(v);
        }
        ++failures;
        break;
      }
    }
  }
  if (failures == 0) return std::nullopt;
  std::ostringstream os;
  os << "product proviso fails at " << failures << " grid point(s) flagged for " << flagged_name
     << ": " << first << " is not above the floor " << to_string(pv.floor)
     << "; the product may diverge on a smaller set than the union";
  return os.str();
}

}  // namespace

template <Scalar T>
FunctionFamily<T> sum_family(const FunctionFamily<T>& f, const FunctionFamily<T>& g) {
  nlohmann::ordered_json params = {{"terms", {describe(f), describe(g)}}};
  return sum_tagged(f, g, "sum", std::move(params));
}

template <Scalar T>
T product_error(const FunctionFamily<T>& f, const FunctionFamily<T>& g, std::size_t n) {
  require_same_domain(f, g);
  return multiply(f.at(n), g.at(n)).error_bound;
}

template <Scalar T>
ProductFamily<T> product_family(const FunctionFamily<T>& f, const FunctionFamily<T>& g,
                                ProductProviso<T> proviso) {
  require_same_domain(f, g);
  if (!(T(0) < proviso.floor)) throw ParameterError("proviso floor must be positive");
  if (proviso.index == 0) throw ParameterError("proviso index must be at least 1");
  std::vector<T> grid = proviso.grid.empty() ? default_grid(f.domain()) : proviso.grid;
  check_grid(f.domain(), grid);

  typename FunctionFamily<T>::Ops ops;
  ops.materialize = [f, g](std::size_t n) { return multiply(f.at(n), g.at(n)).function; };
  // Point values are the true product; at(n) is its interpolant within product_error(n).
  ops.value = [f, g](std::size_t n, const T& x) { return T(f.value(n, x) * g.value(n, x)); };
  nlohmann::ordered_json params = {{"factors", {describe(f), describe(g)}},
                                   {"proviso", {{"M", to_string(proviso.threshold)},
                                                {"N", proviso.index},
                                                {"floor", to_string(proviso.floor)}}}};
  ProductFamily<T> out{FunctionFamily<T>(f.domain(), "product", std::move(params), std::move(ops)), {}};
  if (auto w = proviso_failure(f, g, proviso, grid, "f", "g")) out.warnings.push_back(*w);
  if (auto w = proviso_failure(g, f, proviso, grid, "g", "f")) out.warnings.push_back(*w);
  return out;
}

template <Scalar T>
IntervalUnion<T> superlevel_set(const PiecewiseLinear<T>& f, const T& level) {
  auto ks = f.knots();
  std::vector<Interval<T>> parts;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const auto& a = ks[i - 1];
    const auto& b = ks[i];
    bool above_a = level < a.y;
    bool above_b = level < b.y;
    if (above_a && above_b) {
      parts.push_back({a.x, b.x});
    } else if (above_a || above_b) {
      T cross = a.x + (level - a.y) * (b.x - a.x) / (b.y - a.y);
      if (above_a) {
        parts.push_back({a.x, cross});
      } else {
        parts.push_back({cross, b.x});
      }
    }
  }
  return IntervalUnion<T>(f.domain(), std::move(parts));
}

template <Scalar T>
std::vector<T> default_grid(const Interval<T>& domain, std::size_t points, std::size_t max_denominator) {
  if (points < 2) throw ParameterError("a grid needs at least two equispaced points");
  T width = domain.hi - domain.lo;
  std::vector<T> grid;
  grid.reserve(points + max_denominator * max_denominator);
  T steps(static_cast<std::int64_t>(points - 1));
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(domain.lo + width * T(static_cast<std::int64_t>(i)) / steps);
  }
  for (std::size_t q = 1; q <= max_denominator; ++q) {
    T qq(static_cast<std::int64_t>(q));
    for (std::size_t p = 0; p <= q; ++p) {
      grid.push_back(domain.lo + width * T(static_cast<std::int64_t>(p)) / qq);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](const T& a, const T& b) { return approx_eq(a, b); }),
             grid.end());
  return grid;
}

template <Scalar T>
std::size_t DivergenceEstimate<T>::flagged_count() const {
  return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), true));
}

template <Scalar T>
DivergenceEstimate<T> divergence_estimate(const FunctionFamily<T>& fam, const T& threshold, std::size_t index,
                                          std::vector<T> grid) {
  if (!(T(0) < threshold)) throw ParameterError("threshold M must be positive");
  if (index == 0) throw ParameterError("index N must be at least 1");
  if (grid.empty()) grid = default_grid(fam.domain());
  check_grid(fam.domain(), grid);
  DivergenceEstimate<T> est{threshold, index, std::move(grid), {}, {}};
  est.values.reserve(est.grid.size());
  est.flagged.reserve(est.grid.size());
  for (const auto& x : est.grid) {
    T v = fam.value(index, x);
    est.flagged.push_back(definitely_less(threshold, v));
    est.values.push_back(std::move(v));
  }
  return est;
}

template <Scalar T>
bool MaxFamilyReport<T>::all_reached() const {
  return std::all_of(rows.begin(), rows.end(), [](const SubintervalRow<T>& r) { return r.reached_at.has_value(); });
}

template <Scalar T>
std::vector<Interval<T>> equal_subintervals(const Interval<T>& domain, std::size_t count) {
  if (count == 0) throw ParameterError("need at least one subinterval");
  std::vector<Interval<T>> out;
  T width = domain.hi - domain.lo;
  T k(static_cast<std::int64_t>(count));
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({domain.lo + width * T(static_cast<std::int64_t>(i)) / k,
                   i + 1 == count ? domain.hi : domain.lo + width * T(static_cast<std::int64_t>(i + 1)) / k});
  }
  return out;
}

template <Scalar T>
MaxFamilyReport<T> max_family_check(const FunctionFamily<T>& fam, const T& threshold, std::size_t n_max,
                                    std::vector<Interval<T>> subintervals) {
  if (n_max < 2) throw ParameterError("N_max must be at least 2");
  std::string grid_spec;
  if (subintervals.empty()) {
    subintervals = equal_subintervals(fam.domain(), kDefaultSubintervals);
    grid_spec = "ten equal subintervals";
  } else {
    grid_spec = std::to_string(subintervals.size()) + " custom subintervals";
  }
  const auto& dom = fam.domain();
  for (const auto& s : subintervals) {
    if (!(s.lo < s.hi) || s.lo < dom.lo || dom.hi < s.hi) {
      throw UsageError("subinterval [" + to_string(s.lo) + ", " + to_string(s.hi) + "] is not a proper part of the domain");
    }
  }

  auto row_of = [&fam, &threshold, n_max](Interval<T> s) {
    SubintervalRow<T> row{s.lo, s.hi, std::nullopt, {}, true};
    row.integrals.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
      T v = fam.integral(n, s.lo, s.hi);
      if (!row.integrals.empty() && !approx_le(row.integrals.back(), v)) row.nondecreasing = false;
      if (!row.reached_at && definitely_less(threshold, v)) row.reached_at = n;
      row.integrals.push_back(std::move(v));
    }
    return row;
  };

  auto monotone = std::async(std::launch::async, [&fam, n_max] { return monotone_check(fam, n_max); });
  std::vector<std::future<SubintervalRow<T>>> pending;
  for (const auto& s : subintervals) pending.push_back(std::async(std::launch::async, row_of, s));

  MaxFamilyReport<T> report{threshold, n_max, std::move(grid_spec), {}, {}};
  for (auto& p : pending) report.rows.push_back(p.get());
  report.monotone = monotone.get();
  return report;
}

FunctionFamily<double> anydh_family(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in [0, 1]");
  auto z = liouville_family();
  nlohmann::ordered_json params = {{"theta", theta}};
  if (theta == 0.0) {
    params["d"] = nullptr;
    params["z"] = describe(z);
    return sum_tagged(linear_in_n_family<double>(z.domain(), 0.0, 0.0), z, "anydh", std::move(params));
  }
  auto d = theta == 1.0 ? linear_in_n_family<double>(z.domain(), 1.0, 0.0)
                        : cantor_tietze_family(CantorParams<double>::make(theta));
  params["d"] = describe(d);
  params["z"] = describe(z);
  return sum_tagged(d, z, "anydh", std::move(params));
}

#define DIVERGIA_MAXFAM_INSTANTIATE(T)                                                                    \
  template FunctionFamily<T> sum_family(const FunctionFamily<T>&, const FunctionFamily<T>&);              \
  template ProductFamily<T> product_family(const FunctionFamily<T>&, const FunctionFamily<T>&,            \
                                           ProductProviso<T>);                                            \
  template T product_error(const FunctionFamily<T>&, const FunctionFamily<T>&, std::size_t);              \
  template IntervalUnion<T> superlevel_set(const PiecewiseLinear<T>&, const T&);                          \
  template std::vector<T> default_grid(const Interval<T>&, std::size_t, std::size_t);                     \
  template struct DivergenceEstimate<T>;                                                                  \
  template DivergenceEstimate<T> divergence_estimate(const FunctionFamily<T>&, const T&, std::size_t,     \
                                                     std::vector<T>);                                     \
  template struct MaxFamilyReport<T>;                                                                     \
  template std::vector<Interval<T>> equal_subintervals(const Interval<T>&, std::size_t);                  \
  template MaxFamilyReport<T> max_family_check(const FunctionFamily<T>&, const T&, std::size_t,           \
                                               std::vector<Interval<T>>);

DIVERGIA_MAXFAM_INSTANTIATE(double)
DIVERGIA_MAXFAM_INSTANTIATE(Rational)

}  // namespace divergia
