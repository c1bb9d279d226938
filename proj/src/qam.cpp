#include "divergia/qam.hpp"

#include "divergia/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace divergia {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& tok, std::optional<std::size_t> n, bool& uses_n) {
  if (tok == "n" || tok == "-n") {
    uses_n = true;
    if (!n) throw ParameterError("\"n\" is only allowed in a family spec");
    return tok == "n" ? static_cast<double>(*n) : -static_cast<double>(*n);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParameterError("bad generator parameter \"" + tok + "\"");
  }
  return v;
}

Generator parse_tokens(const std::vector<std::string>& toks, std::size_t& pos, std::optional<std::size_t> n,
                       bool& uses_n) {
  if (pos >= toks.size()) throw ParameterError("generator spec ends early");
  const std::string& head = toks[pos++];
  auto arg = [&]() {
    if (pos >= toks.size()) throw ParameterError("generator \"" + head + "\" needs a parameter");
    return parse_number(toks[pos++], n, uses_n);
  };
  if (head == "power") return Generator::power(arg());
  if (head == "log") return Generator::log();
  if (head == "exp") return Generator::exp(arg());
  if (head == "affine") {
    double a = arg();
    double b = arg();
    return Generator::affine(parse_tokens(toks, pos, n, uses_n), a, b);
  }
  throw ParameterError("unknown generator \"" + head + "\" (expected power, log, exp or affine)");
}

Generator parse_with(const std::string& text, std::optional<std::size_t> n, bool& uses_n) {
  auto toks = split(text, ':');
  std::size_t pos = 0;
  Generator g = parse_tokens(toks, pos, n, uses_n);
  if (pos != toks.size()) throw ParameterError("trailing text in generator spec \"" + text + "\"");
  return g;
}

void check_point(const Generator& f, double x) {
  if (!std::isfinite(x) || !f.in_domain(x)) {
    throw ParameterError("value " + number_text(x) + " is outside the domain of " + f.to_string());
  }
}

void check_domain(const Generator& f, const Interval<double>& dom) {
  if (!(dom.lo < dom.hi)) throw ParameterError("generator domain must have lo < hi");
  check_point(f, dom.lo);
  check_point(f, dom.hi);
}

bool below_tolerance(double gap) { return std::abs(gap) <= kTolerance * std::max(1.0, std::abs(gap)); }

}  // namespace

Generator Generator::power(double p) {
  if (p == 0.0 || !std::isfinite(p)) throw ParameterError("power generator needs a finite p != 0 (use log for p = 0)");
  return Generator(Power{p});
}

Generator Generator::log() { return Generator(Log{}); }

Generator Generator::exp(double c) {
  if (c == 0.0 || !std::isfinite(c)) throw ParameterError("exp generator needs a finite c != 0");
  return Generator(Exp{c});
}

Generator Generator::affine(Generator inner, double a, double b) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("affine generator needs a finite a != 0 and a finite b");
  }
  return Generator(AffineOf{std::make_shared<const Generator>(std::move(inner)), a, b});
}

double Generator::operator()(double x) const {
  return std::visit(Overloaded{[x](const Power& g) { return std::pow(x, g.p); },
                               [x](const Log&) { return std::log(x); },
                               [x](const Exp& g) { return std::exp(g.c * x); },
                               [x](const AffineOf& g) { return g.a * (*g.inner)(x) + g.b; }},
                    form_);
}

bool Generator::in_domain(double x) const {
  return std::visit(Overloaded{[x](const Power&) { return x > 0.0; }, [x](const Log&) { return x > 0.0; },
                               [](const Exp&) { return true; },
                               [x](const AffineOf& g) { return g.inner->in_domain(x); }},
                    form_);
}

bool Generator::increasing() const {
  return std::visit(Overloaded{[](const Power& g) { return g.p > 0.0; }, [](const Log&) { return true; },
                               [](const Exp& g) { return g.c > 0.0; },
                               [](const AffineOf& g) { return g.inner->increasing() == (g.a > 0.0); }},
                    form_);
}

Arrow Generator::arrow() const {
  return std::visit(Overloaded{[](const Power& g) { return Arrow{0.0, g.p - 1.0}; },
                               [](const Log&) { return Arrow{0.0, -1.0}; },
                               [](const Exp& g) { return Arrow{g.c, 0.0}; },
                               [](const AffineOf& g) { return g.inner->arrow(); }},
                    form_);
}

double Generator::scaled_difference(double x, double y, double anchor) const {
  return std::visit(
      Overloaded{[&](const Power& g) { return std::pow(x / anchor, g.p) - std::pow(y / anchor, g.p); },
                 [&](const Log&) { return std::log(x) - std::log(y); },
                 [&](const Exp& g) { return std::exp(g.c * (x - anchor)) - std::exp(g.c * (y - anchor)); },
                 [&](const AffineOf& g) { return g.a * g.inner->scaled_difference(x, y, anchor); }},
      form_);
}

double Generator::anchor(double lo, double hi) const {
  return std::visit(Overloaded{[&](const Power& g) { return g.p > 0.0 ? hi : lo; },
                               [&](const Log&) { return hi; },
                               [&](const Exp& g) { return g.c > 0.0 ? hi : lo; },
                               [&](const AffineOf& g) { return g.inner->anchor(lo, hi); }},
                    form_);
}

std::string Generator::to_string() const {
  return std::visit(Overloaded{[](const Power& g) { return "power:" + number_text(g.p); },
                               [](const Log&) { return std::string("log"); },
                               [](const Exp& g) { return "exp:" + number_text(g.c); },
                               [](const AffineOf& g) {
                                 return "affine:" + number_text(g.a) + ":" + number_text(g.b) + ":" +
                                        g.inner->to_string();
                               }},
                    form_);
}

Generator parse_generator(const std::string& text) {
  bool uses_n = false;
  return parse_with(text, std::nullopt, uses_n);
}

GeneratorFamily parse_generator_family(const std::string& spec, std::optional<Interval<double>> domain) {
  bool uses_n = false;
  Generator first = parse_with(spec, 1, uses_n);
  Interval<double> dom = domain.value_or(spec.find("power") != std::string::npos || spec.find("log") != std::string::npos
                                             ? Interval<double>{1.0, 2.0}
                                             : Interval<double>{0.0, 1.0});
  check_domain(first, dom);
  GeneratorFamily fam;
  fam.domain = dom;
  fam.spec = spec;
  if (uses_n) {
    fam.rule = [spec](std::size_t n) {
      if (n == 0) throw UsageError("generator families are indexed from 1");
      bool ignored = false;
      return parse_with(spec, n, ignored);
    };
  } else {
    fam.rule = [first](std::size_t) { return first; };
  }
  return fam;
}

double qa_mean(const Generator& f, std::span<const double> a) {
  if (a.empty()) throw ParameterError("qa_mean needs a nonempty tuple");
  for (double v : a) check_point(f, v);
  auto [mn, mx] = std::minmax_element(a.begin(), a.end());
  double lo = *mn;
  double hi = *mx;
  if (lo == hi) return lo;
  double anchor = f.anchor(lo, hi);
  double sign = f.increasing() ? 1.0 : -1.0;
  // Decreasing in t, nonnegative at min(a) and nonpositive at max(a).
  auto residual = [&](double t) {
    double s = 0.0;
    for (double v : a) s += f.scaled_difference(v, t, anchor);
    return sign * s;
  };
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  if (!std::isfinite(r_lo) || !std::isfinite(r_hi) || r_lo < 0.0 || r_hi > 0.0) {
    throw ConstructionError("qa_mean bracket failed for " + f.to_string() + ": generator is not strictly monotone");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = std::midpoint(lo, hi);
    if (mid == lo || mid == hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::midpoint(lo, hi);
}

double power_mean(double p, std::span<const double> a) {
  if (a.empty()) throw ParameterError("power_mean needs a nonempty tuple");
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("power_mean needs positive entries");
  }
  double k = static_cast<double>(a.size());
  if (p == 0.0) {
    double s = 0.0;
    for (double v : a) s += std::log(v);
    return std::exp(s / k);
  }
  auto [mn, mx] = std::minmax_element(a.begin(), a.end());
  double ref = p > 0.0 ? *mx : *mn;
  double s = 0.0;
  for (double v : a) s += std::pow(v / ref, p);
  return ref * std::pow(s / k, 1.0 / p);
}

double ratio_condition(const GeneratorFamily& f, double x, double y, double z, std::size_t n) {
  if (!(x < y && y < z)) throw UsageError("ratio_condition needs x < y < z");
  if (x < f.domain.lo || f.domain.hi < z) throw UsageError("ratio_condition points must lie in the domain");
  Generator g = f(n);
  check_point(g, x);
  check_point(g, z);
  double anchor = g.anchor(x, z);
  double num = g.scaled_difference(x, y, anchor);
  double den = g.scaled_difference(z, y, anchor);
  if (den == 0.0 || !std::isfinite(den) || !std::isfinite(num)) {
    throw ConstructionError("F_" + std::to_string(n) + "(z) = F_" + std::to_string(n) +
                            "(y): generator is not strictly monotone");
  }
  return num / den;
}

RatioReport ratio_report(const GeneratorFamily& f, double x, double y, double z, std::size_t n_max) {
  if (n_max == 0) throw ParameterError("N must be at least 1");
  RatioReport rep{x, y, z, n_max, {}, std::nullopt};
  rep.quotients.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) rep.quotients.push_back(ratio_condition(f, x, y, z, n));
  for (std::size_t i = n_max; i > 0 && std::abs(rep.quotients[i - 1]) < kRatioTolerance; --i) rep.below_from = i;
  return rep;
}

ArrowFamily arrow_family(const GeneratorFamily& f, std::size_t n_checked, std::size_t knot_budget) {
  if (knot_budget < 2) throw ParameterError("arrow_family needs at least two knots");
  if (n_checked == 0) throw ParameterError("arrow_family needs N >= 1");
  const auto dom = f.domain;
  std::vector<double> xs(knot_budget);
  for (std::size_t k = 0; k < knot_budget; ++k) {
    xs[k] = k + 1 == knot_budget ? dom.hi
                                 : dom.lo + (dom.hi - dom.lo) * static_cast<double>(k) /
                                                static_cast<double>(knot_budget - 1);
  }
  auto values = [f, xs](std::size_t n) {
    Generator g = f(n);
    Arrow ar = g.arrow();
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs) {
      check_point(g, x);
      ys.push_back(ar(x));
    }
    return ys;
  };

  double err = 0.0;
  double low = std::numeric_limits<double>::infinity();
  std::vector<double> prev;
  for (std::size_t n = 1; n <= n_checked; ++n) {
    auto ys = values(n);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      low = std::min(low, ys[k]);
      if (!prev.empty() && ys[k] < prev[k] - kTolerance * std::max(1.0, std::abs(prev[k]))) {
        throw ConstructionError("arrow of " + f.spec + " decreases from n = " + std::to_string(n - 1) + " to n = " +
                                std::to_string(n) + " at x = " + number_text(xs[k]));
      }
      if (k > 0 && k + 1 < ys.size()) err = std::max(err, std::abs(ys[k - 1] - 2.0 * ys[k] + ys[k + 1]) / 8.0);
    }
    prev = std::move(ys);
  }

  FunctionFamily<double>::Ops ops;
  ops.materialize = [values, xs](std::size_t n) {
    auto ys = values(n);
    std::vector<Knot<double>> knots;
    knots.reserve(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) knots.push_back({xs[k], ys[k]});
    return PiecewiseLinear<double>(std::move(knots));
  };
  nlohmann::ordered_json params = {{"spec", f.spec},
                                   {"domain", {dom.lo, dom.hi}},
                                   {"knots", knot_budget},
                                   {"checked_up_to", n_checked}};
  ArrowFamily out{FunctionFamily<double>(dom, "arrow", std::move(params), std::move(ops)),
                  n_checked,
                  knot_budget,
                  err,
                  low,
                  {}};
  out.notes.push_back("arrows nondecreasing in n on the knot grid for n <= " + std::to_string(n_checked));
  out.notes.push_back("observed lower bound of F''/F' on the knots for n <= " + std::to_string(n_checked) + ": " +
                      number_text(low) + "; uniformity over all n is not verified");
  out.notes.push_back("interpolation error bound (max |second difference| / 8): " + number_text(err));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LessEqual:
      return "QA_F <= QA_G";
    case Verdict::GreaterEqual:
      return "QA_F >= QA_G";
    case Verdict::Equal:
      return "QA_F = QA_G";
    case Verdict::Incomparable:
      return "incomparable";
  }
  return "incomparable";
}

Comparability comparability(const Generator& f, const Generator& g, const Interval<double>& domain,
                            std::vector<double> grid, std::uint64_t seed) {
  check_domain(f, domain);
  check_domain(g, domain);
  if (grid.empty()) {
    for (int k = 0; k <= 100; ++k) grid.push_back(k == 100 ? domain.hi : domain.lo + (domain.hi - domain.lo) * k / 100.0);
  }
  Arrow af = f.arrow();
  Arrow ag = g.arrow();
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    if (x < domain.lo || domain.hi < x) throw UsageError("grid point " + number_text(x) + " outside the domain");
    double gap = ag(x) - af(x);
    gmin = std::min(gmin, gap);
    gmax = std::max(gmax, gap);
  }
  Verdict v;
  if (below_tolerance(gmin) && below_tolerance(gmax)) {
    v = Verdict::Equal;
  } else if (gmin >= 0.0 || below_tolerance(gmin)) {
    v = Verdict::LessEqual;
  } else if (gmax <= 0.0 || below_tolerance(gmax)) {
    v = Verdict::GreaterEqual;
  } else {
    v = Verdict::Incomparable;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 5);
  std::uniform_real_distribution<double> point(domain.lo, domain.hi);
  constexpr std::size_t kTuples = 100;
  constexpr double kSlack = 1e-9;
  std::size_t agree = 0;
  for (std::size_t t = 0; t < kTuples; ++t) {
    std::vector<double> tuple(static_cast<std::size_t>(size(rng)));
    for (auto& x : tuple) x = point(rng);
    double mf = qa_mean(f, tuple);
    double mg = qa_mean(g, tuple);
    bool ok = true;
    switch (v) {
      case Verdict::LessEqual:
        ok = mf <= mg + kSlack;
        break;
      case Verdict::GreaterEqual:
        ok = mf + kSlack >= mg;
        break;
      case Verdict::Equal:
        ok = std::abs(mf - mg) <= kSlack;
        break;
      case Verdict::Incomparable:
        break;
    }
    if (ok) ++agree;
  }
  return {v, gmin, gmax, seed, kTuples, agree};
}

}  // namespace divergia
