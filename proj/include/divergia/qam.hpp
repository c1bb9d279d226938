#pragma once

// Quasiarithmetic means M_F(a) = F^-1((F(a_1) + ... + F(a_k)) / k) over a closed
// set of generators, and the tools linking generator sequences to max-families.

#include "divergia/funcs.hpp"
#include "divergia/intervals.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace divergia {

class Generator;

/// F''/F' in the form constant + over_x / x.
struct Arrow {
  double constant = 0.0;
  double over_x = 0.0;

  double operator()(double x) const { return over_x == 0.0 ? constant : constant + over_x / x; }
};

class Generator {
 public:
  struct Power {
    double p;
  };
  struct Log {};
  struct Exp {
    double c;
  };
  struct AffineOf {
    std::shared_ptr<const Generator> inner;
    double a;
    double b;
  };
  using Form = std::variant<Power, Log, Exp, AffineOf>;

  /// x^p on x > 0, p != 0.
  static Generator power(double p);
  /// ln x on x > 0.
  static Generator log();
  /// e^(cx), c != 0.
  static Generator exp(double c);
  /// a·F + b, a != 0.
  static Generator affine(Generator inner, double a, double b);

  const Form& form() const { return form_; }

  double operator()(double x) const;
  bool in_domain(double x) const;
  bool increasing() const;
  Arrow arrow() const;

  /// (F(x) - F(y)) / S with S > 0 depending only on `anchor`, chosen so that
  /// differences near the anchor stay finite. Affine offsets cancel exactly.
  double scaled_difference(double x, double y, double anchor) const;

  /// Anchor for values in [lo, hi]: the end where |F| is largest.
  double anchor(double lo, double hi) const;

  /// DSL form: "power:2", "log", "exp:3", "affine:5:-1:log".
  std::string to_string() const;

 private:
  explicit Generator(Form form) : form_(std::move(form)) {}
  Form form_;
};

/// Parses the DSL form. ParameterError on malformed input or a forbidden parameter.
Generator parse_generator(const std::string& text);

/// n ↦ F_n on a shared domain.
struct GeneratorFamily {
  std::function<Generator(std::size_t)> rule;
  Interval<double> domain;
  std::string spec;

  Generator operator()(std::size_t n) const { return rule(n); }
};

/// Parses a family spec: a generator whose numeric parameters may be "n" or "-n",
/// e.g. "exp:n", "power:n", "affine:2:1:exp:n". A spec without "n" is the
/// constant family. The default domain is [1, 2] when the spec contains
/// power or log and [0, 1] otherwise.
GeneratorFamily parse_generator_family(const std::string& spec,
                                       std::optional<Interval<double>> domain = std::nullopt);

/// Mean by bisection on [min a, max a] to 1e-12. ParameterError for an empty
/// tuple or a value outside F's domain; ConstructionError if the bracket fails.
double qa_mean(const Generator& f, std::span<const double> a);

/// Closed-form power mean, max-factored. p = 0 is the geometric mean.
double power_mean(double p, std::span<const double> a);

/// (F_n(x) - F_n(y)) / (F_n(z) - F_n(y)). ConstructionError when the denominator vanishes.
double ratio_condition(const GeneratorFamily& f, double x, double y, double z, std::size_t n);

inline constexpr double kRatioTolerance = 1e-4;

struct RatioReport {
  double x;
  double y;
  double z;
  std::size_t n_max;
  std::vector<double> quotients;  // n = 1 .. n_max
  /// First n from which |quotient| stays below the tolerance.
  std::optional<std::size_t> below_from;
  bool tends_to_zero() const { return below_from.has_value(); }
};

RatioReport ratio_report(const GeneratorFamily& f, double x, double y, double z, std::size_t n_max);

struct ArrowFamily {
  FunctionFamily<double> family;
  std::size_t n_checked;
  std::size_t knots;
  double error_bound;  // interpolation error over n <= n_checked
  double lower_bound;  // min arrow over the knots, n <= n_checked
  std::vector<std::string> notes;
};

inline constexpr std::size_t kDefaultKnotBudget = 65;

/// Piecewise-linear interpolation of arrow(F_n) on equispaced knots. The arrows
/// must be nondecreasing in n at every knot for n <= n_checked (ConstructionError
/// otherwise). The error bound is max |second difference| / 8.
ArrowFamily arrow_family(const GeneratorFamily& f, std::size_t n_checked,
                         std::size_t knot_budget = kDefaultKnotBudget);

enum class Verdict { LessEqual, GreaterEqual, Equal, Incomparable };

std::string to_string(Verdict v);

struct Comparability {
  Verdict verdict;
  double gap_min;  // min of arrow(G) - arrow(F) on the grid
  double gap_max;
  std::uint64_t seed;
  std::size_t tuples;
  std::size_t agreeing;  // tuples whose mean ordering matches the verdict
  bool consistent() const { return agreeing == tuples; }
};

/// Compares arrow(F) and arrow(G) on `grid` (101 equispaced points when empty),
/// then cross-checks the verdict against qa_mean on 100 random tuples.
Comparability comparability(const Generator& f, const Generator& g, const Interval<double>& domain,
                            std::vector<double> grid = {}, std::uint64_t seed = 20240531);

}  // namespace divergia
