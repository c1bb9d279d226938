#pragma once

// JSON and CSV encodings. Exact scalars are written as "p/q" strings and
// floating scalars as JSON numbers; decoders accept either form.
//
//   IntervalUnion   {"domain": [lo, hi], "components": [[a, b], ...]}
//   PiecewiseLinear {"knots": [[x, y], ...]}

#include "divergia/dimension.hpp"
#include "divergia/error.hpp"
#include "divergia/funcs.hpp"
#include "divergia/intervals.hpp"
#include "divergia/maxfam.hpp"
#include "divergia/qam.hpp"
#include "divergia/scalar.hpp"

#include <json.hpp>

#include <string>

namespace divergia {

using Json = nlohmann::ordered_json;

template <Scalar T>
Json encode(const T& x);

template <Scalar T>
T decode_scalar(const Json& j);

template <Scalar T>
Json encode(const IntervalUnion<T>& a);

template <Scalar T>
IntervalUnion<T> decode_union(const Json& j);

template <Scalar T>
Json encode(const PiecewiseLinear<T>& f);

template <Scalar T>
PiecewiseLinear<T> decode_function(const Json& j);

template <Scalar T>
Json describe(const FunctionFamily<T>& fam);

template <Scalar T>
Json encode(const MonotoneReport<T>& r);

template <Scalar T>
Json encode(const MaxFamilyReport<T>& r);

template <Scalar T>
Json encode(const DivergenceEstimate<T>& e);

/// Comment header with the thresholds, then "x,value,flagged" rows.
template <Scalar T>
std::string to_csv(const DivergenceEstimate<T>& e);

Json encode(const DimensionEstimate& e);

/// "delta,count" rows.
std::string to_csv(const DimensionEstimate& e);

Json encode(const RatioReport& r);
Json encode(const Comparability& c);
Json encode(const ArrowFamily& a);

/// {"error": {"kind": ..., "message": ...}}
Json encode_error(const Error& e);

#define DIVERGIA_IO_EXTERN(T)                                       \
  extern template Json encode(const T&);                            \
  extern template T decode_scalar(const Json&);                     \
  extern template Json encode(const IntervalUnion<T>&);             \
  extern template IntervalUnion<T> decode_union(const Json&);       \
  extern template Json encode(const PiecewiseLinear<T>&);           \
  extern template PiecewiseLinear<T> decode_function(const Json&);  \
  extern template Json describe(const FunctionFamily<T>&);          \
  extern template Json encode(const MonotoneReport<T>&);            \
  extern template Json encode(const MaxFamilyReport<T>&);           \
  extern template Json encode(const DivergenceEstimate<T>&);        \
  extern template std::string to_csv(const DivergenceEstimate<T>&);

DIVERGIA_IO_EXTERN(double)
DIVERGIA_IO_EXTERN(Rational)
#undef DIVERGIA_IO_EXTERN

}  // namespace divergia
