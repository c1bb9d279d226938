#include "cli.hpp"

#include "divergia/dimension.hpp"
#include "divergia/error.hpp"
#include "divergia/ifs.hpp"
#include "divergia/io.hpp"
#include "divergia/jarnik.hpp"
#include "divergia/maxfam.hpp"
#include "divergia/qam.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace divergia;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::object fraction(const Rational& x) {
  return py::module_::import("fractions").attr("Fraction")(to_string(x));
}

FunctionFamily<double> family_by_tag(const std::string& tag, double theta) {
  if (tag == "anydh") return anydh_family(theta);
  if (tag == "cantor-tietze") return cantor_tietze_family(CantorParams<double>::make(theta));
  if (tag == "jarnik") return jarnik_family(JarnikParams<double>::make(theta));
  if (tag == "liouville") return liouville_family();
  if (tag == "linear") return linear_in_n_family<double>({0.0, 1.0}, 1.0, 0.0);
  throw ParameterError("unknown family \"" + tag + "\"");
}

// Exact levels need theta = 1/k; eps is given as "p/q" or a decimal string.
py::list cantor_levels(double theta, std::optional<std::string> eps, std::size_t levels) {
  std::optional<Rational> e;
  if (eps) e = parse_scalar<Rational>(*eps);
  auto nest = cantor_nest(CantorParams<Rational>::make(theta, e));
  py::list out;
  for (std::size_t k = 1; k <= levels; ++k) {
    py::list comps;
    auto level = nest(k);
    for (const auto& c : level.components()) comps.append(py::make_tuple(fraction(c.lo), fraction(c.hi)));
    out.append(comps);
  }
  return out;
}

py::object box_dimension_of(const std::vector<std::pair<double, double>>& components,
                            std::pair<double, double> domain, std::optional<std::vector<double>> scales) {
  std::vector<Interval<double>> parts;
  for (auto [a, b] : components) parts.push_back({a, b});
  IntervalUnion<double> set({domain.first, domain.second}, std::move(parts));
  auto est = box_dimension(set, scales ? *scales : auto_scales(set));
  return to_python(encode(est));
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Divergence sets of monotone function families";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParameterError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const UsageError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ConstructionError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def("cantor_levels", &cantor_levels, py::arg("theta"), py::arg("eps") = py::none(), py::arg("levels") = 3,
        "Exact levels D_1..D_n as lists of (Fraction, Fraction).");
  m.def("moran_dimension", [](const std::vector<double>& r) { return moran_dimension(r); }, py::arg("ratios"));
  m.def("box_dimension", &box_dimension_of, py::arg("components"), py::arg("domain") = std::pair{0.0, 1.0},
        py::arg("scales") = py::none());

  m.def("qa_mean", [](const std::string& gen, const std::vector<double>& a) { return qa_mean(parse_generator(gen), a); },
        py::arg("generator"), py::arg("values"));
  m.def("power_mean", [](double p, const std::vector<double>& a) { return power_mean(p, a); }, py::arg("p"),
        py::arg("values"));
  m.def("ratio_condition",
        [](const std::string& fam, double x, double y, double z, std::size_t n) {
          return ratio_condition(parse_generator_family(fam), x, y, z, n);
        },
        py::arg("family"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("n"));
  m.def("arrow",
        [](const std::string& gen, double x) { return parse_generator(gen).arrow()(x); }, py::arg("generator"),
        py::arg("x"), "F''/F' at x.");

  m.def("family_value",
        [](const std::string& tag, double theta, std::size_t n, double x) {
          return family_by_tag(tag, theta).value(n, x);
        },
        py::arg("family"), py::arg("theta"), py::arg("n"), py::arg("x"));
  m.def("max_family_check",
        [](const std::string& tag, double theta, double threshold, std::size_t n_max) {
          return to_python(encode(max_family_check(family_by_tag(tag, theta), threshold, n_max)));
        },
        py::arg("family"), py::arg("theta") = 0.5, py::arg("M") = kDefaultThreshold,
        py::arg("N_max") = kDefaultIndex);
  m.def("divergence_estimate",
        [](const std::string& tag, double theta, double threshold, std::size_t n) {
          return to_python(encode(divergence_estimate(family_by_tag(tag, theta), threshold, n)));
        },
        py::arg("family"), py::arg("theta") = 0.5, py::arg("M") = kDefaultThreshold, py::arg("N") = kDefaultIndex);

  m.def("cli", &run_cli, py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");
}
