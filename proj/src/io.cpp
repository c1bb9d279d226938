#include "divergia/io.hpp"

#include <sstream>

namespace divergia {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <Scalar T>
std::pair<T, T> decode_pair(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw UsageError("expected a pair [a, b]");
  return {decode_scalar<T>(j[0]), decode_scalar<T>(j[1])};
}

}  // namespace

template <Scalar T>
Json encode(const T& x) {
  if constexpr (ScalarTraits<T>::exact) {
    return to_string(x);
  } else {
    return x;
  }
}

template <Scalar T>
T decode_scalar(const Json& j) {
  if (j.is_string()) return parse_scalar<T>(j.template get<std::string>());
  if (j.is_number_integer()) return from_int<T>(j.template get<std::int64_t>());
  if (j.is_number()) {
    double v = j.template get<double>();
    if constexpr (ScalarTraits<T>::exact) {
      return from_double<T>(v);
    } else {
      return v;
    }
  }
  throw UsageError("expected a number or a \"p/q\" string, got " + j.dump());
}

template <Scalar T>
Json encode(const IntervalUnion<T>& a) {
  Json comps = Json::array();
  for (const auto& c : a.components()) comps.push_back({encode(c.lo), encode(c.hi)});
  return {{"domain", {encode(a.domain().lo), encode(a.domain().hi)}}, {"components", std::move(comps)}};
}

template <Scalar T>
IntervalUnion<T> decode_union(const Json& j) {
  auto [lo, hi] = decode_pair<T>(field(j, "domain"));
  const Json& comps = field(j, "components");
  if (!comps.is_array()) throw UsageError("\"components\" must be an array");
  std::vector<Interval<T>> parts;
  for (const auto& c : comps) {
    auto [a, b] = decode_pair<T>(c);
    parts.push_back({a, b});
  }
  return IntervalUnion<T>(Interval<T>{lo, hi}, std::move(parts));
}

template <Scalar T>
Json encode(const PiecewiseLinear<T>& f) {
  Json knots = Json::array();
  for (const auto& k : f.knots()) knots.push_back({encode(k.x), encode(k.y)});
  return {{"knots", std::move(knots)}};
}

template <Scalar T>
PiecewiseLinear<T> decode_function(const Json& j) {
  const Json& ks = field(j, "knots");
  if (!ks.is_array()) throw UsageError("\"knots\" must be an array");
  std::vector<Knot<T>> knots;
  for (const auto& k : ks) {
    auto [x, y] = decode_pair<T>(k);
    knots.push_back({x, y});
  }
  return PiecewiseLinear<T>(std::move(knots));
}

template <Scalar T>
Json describe(const FunctionFamily<T>& fam) {
  return {{"tag", fam.tag()},
          {"domain", {encode(fam.domain().lo), encode(fam.domain().hi)}},
          {"params", fam.params()}};
}

template <Scalar T>
Json encode(const MonotoneReport<T>& r) {
  Json j = {{"monotone", r.monotone}, {"checked_up_to", r.n_max}};
  if (r.first_violation) {
    const auto& v = *r.first_violation;
    j["first_violation"] = {{"n", v.n}, {"x", encode(v.x)}, {"drop", encode(v.drop)}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

template <Scalar T>
Json encode(const MaxFamilyReport<T>& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json ints = Json::array();
    for (const auto& v : row.integrals) ints.push_back(encode(v));
    Json reached = row.reached_at ? Json(*row.reached_at) : Json("not reached by N_max");
    rows.push_back({{"x", encode(row.x)},
                    {"y", encode(row.y)},
                    {"reached_at", std::move(reached)},
                    {"nondecreasing", row.nondecreasing},
                    {"integrals", std::move(ints)}});
  }
  return {{"thresholds", {{"M", encode(r.threshold)}, {"N_max", r.n_max}}},
          {"grid", r.grid},
          {"note", "finite surrogate: integral divergence is checked only up to N_max against M"},
          {"monotone", encode(r.monotone)},
          {"all_reached", r.all_reached()},
          {"passed", r.passed()},
          {"rows", std::move(rows)}};
}

template <Scalar T>
Json encode(const DivergenceEstimate<T>& e) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    pts.push_back({{"x", encode(e.grid[i])}, {"value", encode(e.values[i])}, {"flagged", bool(e.flagged[i])}});
  }
  return {{"thresholds", {{"M", encode(e.threshold)}, {"N", e.index}}},
          {"note", "flagged points satisfy rule(N)(x) > M; they approximate the divergence set from above"},
          {"grid_size", e.grid.size()},
          {"flagged_count", e.flagged_count()},
          {"points", std::move(pts)}};
}

template <Scalar T>
std::string to_csv(const DivergenceEstimate<T>& e) {
  std::ostringstream os;
  os << "# M=" << to_string(e.threshold) << " N=" << e.index << " flagged=" << e.flagged_count() << "/"
     << e.grid.size() << "\n";
  os << "x,value,flagged\n";
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    os << to_string(e.grid[i]) << "," << to_string(e.values[i]) << "," << (e.flagged[i] ? 1 : 0) << "\n";
  }
  return os.str();
}

Json encode(const DimensionEstimate& e) {
  Json counts = Json::array();
  for (const auto& c : e.counts) counts.push_back({{"delta", c.delta}, {"count", c.count}});
  return {{"estimate", e.estimate},
          {"slope", e.slope},
          {"intercept", e.intercept},
          {"residual", e.residual},
          {"low_confidence", e.low_confidence},
          {"warnings", e.warnings},
          {"counts", std::move(counts)}};
}

std::string to_csv(const DimensionEstimate& e) {
  std::ostringstream os;
  os << "delta,count\n";
  for (const auto& c : e.counts) os << to_string(c.delta) << "," << c.count << "\n";
  return os.str();
}

Json encode(const RatioReport& r) {
  return {{"points", {r.x, r.y, r.z}},
          {"N", r.n_max},
          {"tolerance", kRatioTolerance},
          {"tag", r.tends_to_zero() ? "ratio->0 (QA-maximal indicator)" : "ratio does not settle below tolerance"},
          {"below_from", r.below_from ? Json(*r.below_from) : Json(nullptr)},
          {"quotients", r.quotients}};
}

Json encode(const Comparability& c) {
  return {{"verdict", to_string(c.verdict)},
          {"arrow_gap", {{"min", c.gap_min}, {"max", c.gap_max}}},
          {"cross_check", {{"seed", c.seed}, {"tuples", c.tuples}, {"agreeing", c.agreeing}}},
          {"consistent", c.consistent()}};
}

Json encode(const ArrowFamily& a) {
  return {{"family", describe(a.family)},
          {"checked_up_to", a.n_checked},
          {"knots", a.knots},
          {"interpolation_error_bound", a.error_bound},
          {"observed_lower_bound", a.lower_bound},
          {"notes", a.notes}};
}

Json encode_error(const Error& e) { return {{"error", {{"kind", e.kind()}, {"message", e.what()}}}}; }

#define DIVERGIA_IO_INSTANTIATE(T)                           \
  template Json encode(const T&);                            \
  template T decode_scalar(const Json&);                     \
  template Json encode(const IntervalUnion<T>&);             \
  template IntervalUnion<T> decode_union(const Json&);       \
  template Json encode(const PiecewiseLinear<T>&);           \
  template PiecewiseLinear<T> decode_function(const Json&);  \
  template Json describe(const FunctionFamily<T>&);          \
  template Json encode(const MonotoneReport<T>&);            \
  template Json encode(const MaxFamilyReport<T>&);           \
  template Json encode(const DivergenceEstimate<T>&);        \
  template std::string to_csv(const DivergenceEstimate<T>&);

DIVERGIA_IO_INSTANTIATE(double)
DIVERGIA_IO_INSTANTIATE(Rational)

}  // namespace divergia
