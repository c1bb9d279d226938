#include "cli.hpp"

#include "divergia/dimension.hpp"
#include "divergia/error.hpp"
#include "divergia/funcs.hpp"
#include "divergia/ifs.hpp"
#include "divergia/io.hpp"
#include "divergia/jarnik.hpp"
#include "divergia/maxfam.hpp"
#include "divergia/qam.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace divergia::cli {

namespace {

struct Options {
  std::string output;
  std::string format = "json";

  double theta = 0.5;
  std::string eps;
  std::size_t levels = 3;

  std::size_t n = 30;
  std::size_t q_max = 100;
  bool liouville = false;
  std::size_t points = 1001;

  std::string family;
  std::string threshold = "10";
  std::size_t index = 30;
  std::size_t subintervals = kDefaultSubintervals;
  std::size_t max_denominator = 20;

  std::string input;
  std::vector<std::string> scales{"auto"};
  std::vector<double> moran;

  std::string gen;
  std::string gen_g;
  std::vector<double> tuple;
  std::vector<double> domain;
  std::vector<double> ratio_points;
  std::size_t knots = kDefaultKnotBudget;
  std::uint64_t seed = 20240531;
};

std::string backend_name() {
  const char* env = std::getenv("DIVERGIA_BACKEND");
  std::string b = env ? env : "float";
  if (b != "float" && b != "exact") throw ParameterError("DIVERGIA_BACKEND must be exact or float, got \"" + b + "\"");
  return b;
}

void require_float(const std::string& what) {
  if (backend_name() != "float") {
    throw ParameterError(what + " uses irrational widths and needs DIVERGIA_BACKEND=float");
  }
}

// Malformed numbers in arguments are parameter errors, not library errors.
template <Scalar T>
T scalar_arg(const std::string& text, const char* name) {
  try {
    return parse_scalar<T>(text);
  } catch (const UsageError&) {
    throw ParameterError(std::string(name) + " expects a number or p/q, got \"" + text + "\"");
  }
}

template <Scalar T>
FunctionFamily<T> make_family(const Options& o) {
  const auto& tag = o.family;
  if (tag == "cantor-tietze") return cantor_tietze_family(CantorParams<T>::make(o.theta));
  if (tag == "jarnik") return jarnik_family(JarnikParams<T>::make(o.theta, o.q_max));
  if (tag == "linear") return linear_in_n_family<T>(Interval<T>{T(0), T(1)}, T(1), T(0));
  if (tag == "liouville" || tag == "anydh") {
    if constexpr (ScalarTraits<T>::exact) {
      require_float("family \"" + tag + "\"");
    } else {
      if (tag == "liouville") return liouville_family(LiouvilleParams{o.q_max});
      return anydh_family(o.theta);
    }
  }
  throw ParameterError("unknown family \"" + tag + "\" (expected anydh, cantor-tietze, jarnik, liouville or linear)");
}

template <Scalar T>
Json cantor(const Options& o, std::string& csv) {
  if (o.levels > 20) throw ParameterError("--levels must be at most 20 (2^n components)");
  std::optional<T> eps;
  if (!o.eps.empty()) eps = scalar_arg<T>(o.eps, "--eps");
  auto p = CantorParams<T>::make(o.theta, eps);
  auto nest = cantor_nest(p);
  Json levels = Json::array();
  std::ostringstream rows;
  rows << "level,lo,hi\n";
  for (std::size_t k = 1; k <= o.levels; ++k) {
    auto set = nest(k);
    levels.push_back({{"n", k}, {"set", encode(set)}});
    for (const auto& c : set.components()) rows << k << "," << to_string(c.lo) << "," << to_string(c.hi) << "\n";
  }
  csv = rows.str();
  auto hull = uniform_cantor_hull(p);
  return {{"m", encode(p.m)},
          {"epsilon", encode(p.epsilon)},
          {"hull", {encode(hull.lo), encode(hull.hi)}},
          {"first_gap", encode(uniform_cantor_gap(p))},
          {"levels", std::move(levels)}};
}

template <Scalar T>
void knot_rows(std::ostringstream& os, const char* series, const PiecewiseLinear<T>& f) {
  for (const auto& k : f.knots()) os << series << "," << to_string(k.x) << "," << to_string(k.y) << "\n";
}

template <Scalar T>
Json jarnik(const Options& o, std::string& csv) {
  auto fam = jarnik_family(JarnikParams<T>::make(o.theta, o.q_max));
  auto r = fam.at(o.n);
  std::ostringstream rows;
  rows << "series,x,y\n";
  knot_rows(rows, "r", r);
  Json j = {{"family", describe(fam)}, {"n", o.n}, {"function", encode(r)}};
  if (o.liouville) {
    if constexpr (ScalarTraits<T>::exact) {
      require_float("--liouville");
    } else {
      auto z = liouville_family(LiouvilleParams{o.q_max});
      auto zn = z.at(o.n);
      knot_rows(rows, "z", zn);
      j["liouville"] = {{"family", describe(z)}, {"function", encode(zn)}};
    }
  }
  csv = rows.str();
  return j;
}

Json liouville(const Options& o, std::string& csv) {
  require_float("liouville");
  auto fam = liouville_family(LiouvilleParams{o.q_max});
  auto z = fam.at(o.n);
  std::ostringstream rows;
  rows << "x,y\n";
  for (const auto& k : z.knots()) rows << to_string(k.x) << "," << to_string(k.y) << "\n";
  csv = rows.str();
  return {{"family", describe(fam)}, {"n", o.n}, {"function", encode(z)}};
}

Json anydh(const Options& o, std::string& csv) {
  require_float("anydh");
  if (o.points < 2) throw ParameterError("--points must be at least 2");
  auto fam = anydh_family(o.theta);
  Json pts = Json::array();
  std::ostringstream rows;
  rows << "x,value\n";
  for (std::size_t i = 0; i < o.points; ++i) {
    double x = i + 1 == o.points ? 1.0 : static_cast<double>(i) / static_cast<double>(o.points - 1);
    double v = fam.value(o.n, x);
    pts.push_back({x, v});
    rows << to_string(x) << "," << to_string(v) << "\n";
  }
  csv = rows.str();
  return {{"family", describe(fam)}, {"n", o.n}, {"points", std::move(pts)}};
}

template <Scalar T>
Json check(const Options& o) {
  auto fam = make_family<T>(o);
  auto subs = o.subintervals == kDefaultSubintervals ? std::vector<Interval<T>>{}
                                                     : equal_subintervals(fam.domain(), o.subintervals);
  auto report = max_family_check(fam, scalar_arg<T>(o.threshold, "--M"), o.index, std::move(subs));
  Json j = {{"family", describe(fam)}};
  Json body = encode(report);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

template <Scalar T>
Json iset(const Options& o, std::string& csv) {
  auto fam = make_family<T>(o);
  auto grid = default_grid(fam.domain(), o.points, o.max_denominator);
  auto est = divergence_estimate(fam, scalar_arg<T>(o.threshold, "--M"), o.index, std::move(grid));
  csv = to_csv(est);
  Json j = {{"family", describe(fam)}};
  Json body = encode(est);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

template <Scalar T>
Json dim(const Options& o, std::string& csv) {
  if (!o.moran.empty()) {
    if (!o.input.empty()) throw ParameterError("give either --moran or --input, not both");
    double s = moran_dimension(o.moran);
    csv = "dimension\n" + to_string(s) + "\n";
    return {{"moran", o.moran}, {"dimension", s}};
  }
  if (o.input.empty()) throw ParameterError("dim needs --input <set.json> or --moran <ratios>");
  std::ifstream in(o.input);
  if (!in) throw ParameterError("cannot open input file \"" + o.input + "\"");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("input is not valid JSON: " + std::string(e.what()));
  }
  if (doc.contains("set")) doc = doc.at("set");
  auto set = decode_union<T>(doc);
  std::vector<T> scales;
  if (o.scales.size() == 1 && o.scales.front() == "auto") {
    scales = auto_scales(set);
  } else {
    for (const auto& s : o.scales) scales.push_back(scalar_arg<T>(s, "--scales"));
  }
  auto est = box_dimension(set, scales);
  csv = to_csv(est);
  return encode(est);
}

Json qam_mean(const Options& o) {
  auto g = parse_generator(o.gen);
  double m = qa_mean(g, o.tuple);
  Json j = {{"generator", g.to_string()}, {"tuple", o.tuple}, {"mean", m}};
  if (const auto* p = std::get_if<Generator::Power>(&g.form())) {
    j["power_mean"] = power_mean(p->p, o.tuple);
  } else if (std::holds_alternative<Generator::Log>(g.form())) {
    j["power_mean"] = power_mean(0.0, o.tuple);
  }
  return j;
}

std::optional<Interval<double>> domain_option(const Options& o) {
  if (o.domain.empty()) return std::nullopt;
  if (o.domain.size() != 2 || !(o.domain[0] < o.domain[1])) throw ParameterError("--domain needs lo,hi with lo < hi");
  return Interval<double>{o.domain[0], o.domain[1]};
}

Json qam_maximal(const Options& o) {
  auto fam = parse_generator_family(o.family, domain_option(o));
  double x = fam.domain.lo;
  double y = std::midpoint(fam.domain.lo, fam.domain.hi);
  double z = fam.domain.hi;
  if (!o.ratio_points.empty()) {
    if (o.ratio_points.size() != 3) throw ParameterError("--points needs x,y,z");
    x = o.ratio_points[0];
    y = o.ratio_points[1];
    z = o.ratio_points[2];
  }
  auto ratio = ratio_report(fam, x, y, z, o.index);
  auto arrows = arrow_family(fam, o.index, o.knots);
  auto report = max_family_check(arrows.family, scalar_arg<double>(o.threshold, "--M"), o.index);
  return {{"family", o.family},
          {"domain", {fam.domain.lo, fam.domain.hi}},
          {"ratio_condition", encode(ratio)},
          {"arrow_family", encode(arrows)},
          {"integral_check", encode(report)}};
}

Json qam_compare(const Options& o) {
  auto f = parse_generator(o.gen);
  auto g = parse_generator(o.gen_g);
  auto dom = domain_option(o).value_or(Interval<double>{1.0, 2.0});
  auto c = comparability(f, g, dom, {}, o.seed);
  Json j = {{"F", f.to_string()}, {"G", g.to_string()}, {"domain", {dom.lo, dom.hi}}};
  Json body = encode(c);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

void emit(const Options& o, std::ostream& out, const Json& config, const Json& result, const std::string& csv) {
  std::ostringstream doc;
  if (o.format == "csv") {
    doc << "# " << config.dump() << "\n" << csv;
  } else {
    Json j = {{"config", config}, {"result", result}};
    doc << j.dump(2) << "\n";
  }
  if (o.output.empty()) {
    out << doc.str();
  } else {
    std::ofstream f(o.output);
    if (!f) throw ParameterError("cannot write output file \"" + o.output + "\"");
    f << doc.str();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Divergence sets of monotone function families: constructions and finite checks", "divergia"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", o.output, "Write the document to this file instead of standard output");

  auto add_format = [&o](CLI::App* sub, const std::string& def) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->default_str(def);
  };
  auto add_family = [&o](CLI::App* sub) {
    sub->add_option("--family", o.family, "anydh, cantor-tietze, jarnik, liouville or linear")->required();
    sub->add_option("--theta", o.theta, "Dimension parameter")->capture_default_str();
    sub->add_option("--M", o.threshold, "Threshold M")->capture_default_str();
    sub->add_option("--N", o.index, "Index N")->capture_default_str();
    sub->add_option("--q-max", o.q_max, "Largest level of the Jarnik and Liouville families")->capture_default_str();
  };

  auto* cantor_cmd = app.add_subcommand("cantor", "Levels D_1..D_n of the two-map Cantor construction");
  cantor_cmd->add_option("--theta", o.theta, "Dimension in (0, 1)")->required();
  cantor_cmd->add_option("--eps", o.eps, "Offset epsilon (default: midpoint of the admissible range)");
  cantor_cmd->add_option("--levels", o.levels, "Number of levels")->capture_default_str();

  auto* jarnik_cmd = app.add_subcommand("jarnik", "Partial sum r_n of the Jarnik bump family");
  jarnik_cmd->add_option("--theta", o.theta, "Dimension in (0, 1), alpha0 = 2/theta")->required();
  jarnik_cmd->add_option("--n", o.n, "Index n")->capture_default_str();
  jarnik_cmd->add_option("--q-max", o.q_max, "Largest admissible q")->capture_default_str();
  jarnik_cmd->add_flag("--liouville", o.liouville, "Also emit the Liouville partial sum z_n");

  auto* liouville_cmd = app.add_subcommand("liouville", "Partial sum z_n of the Liouville family");
  liouville_cmd->add_option("--n", o.n, "Index n")->capture_default_str();
  liouville_cmd->add_option("--q-max", o.q_max, "Largest admissible q")->capture_default_str();

  auto* anydh_cmd = app.add_subcommand("anydh", "Values of f_n = d_n + z_n on an equispaced grid");
  anydh_cmd->add_option("--theta", o.theta, "Dimension in [0, 1]")->required();
  anydh_cmd->add_option("--n", o.n, "Index n")->capture_default_str();
  anydh_cmd->add_option("--points", o.points, "Grid points")->capture_default_str();

  auto* check_cmd = app.add_subcommand("check", "Max-family check: integrals over subintervals up to N_max");
  add_family(check_cmd);
  check_cmd->add_option("--subintervals", o.subintervals, "Equal subintervals of the domain")->capture_default_str();

  auto* iset_cmd = app.add_subcommand("iset", "Divergence-set estimate on a grid");
  add_family(iset_cmd);
  iset_cmd->add_option("--points", o.points, "Equispaced grid points")->capture_default_str();
  iset_cmd->add_option("--max-denominator", o.max_denominator, "Add every p/q with q up to this")->capture_default_str();

  auto* dim_cmd = app.add_subcommand("dim", "Box-counting or Moran dimension");
  dim_cmd->add_option("--input", o.input, "IntervalUnion JSON file");
  dim_cmd->add_option("--scales", o.scales, "auto or a comma-separated list of box sizes")->delimiter(',')->capture_default_str();
  dim_cmd->add_option("--moran", o.moran, "Comma-separated contraction ratios")->delimiter(',');

  auto* qam_cmd = app.add_subcommand("qam", "Quasiarithmetic means");
  qam_cmd->require_subcommand(1);
  auto* mean_cmd = qam_cmd->add_subcommand("mean", "QA mean of a tuple");
  mean_cmd->add_option("--gen", o.gen, "Generator: power:p, log, exp:c, affine:a:b:<generator>")->required();
  mean_cmd->add_option("--tuple", o.tuple, "Comma-separated values")->delimiter(',')->required();
  auto* maximal_cmd = qam_cmd->add_subcommand("maximal", "Ratio condition and integral criterion for a generator family");
  maximal_cmd->add_option("--family", o.family, "Family spec, numeric parameters may be n (e.g. exp:n)")->required();
  maximal_cmd->add_option("--N", o.index, "Largest index")->capture_default_str();
  maximal_cmd->add_option("--M", o.threshold, "Integral threshold")->capture_default_str();
  maximal_cmd->add_option("--domain", o.domain, "lo,hi")->delimiter(',');
  maximal_cmd->add_option("--points", o.ratio_points, "x,y,z for the ratio condition")->delimiter(',');
  maximal_cmd->add_option("--knots", o.knots, "Knot budget of the arrow interpolation")->capture_default_str();
  auto* compare_cmd = qam_cmd->add_subcommand("compare", "Comparability of two generators via F''/F'");
  compare_cmd->add_option("--f", o.gen, "First generator")->required();
  compare_cmd->add_option("--g", o.gen_g, "Second generator")->required();
  compare_cmd->add_option("--domain", o.domain, "lo,hi (default 1,2)")->delimiter(',');
  compare_cmd->add_option("--seed", o.seed, "Seed of the random cross-check")->capture_default_str();

  for (auto* sub : {cantor_cmd, jarnik_cmd, liouville_cmd, anydh_cmd, dim_cmd}) add_format(sub, "json");
  add_format(iset_cmd, "csv");

  std::vector<const char*> argv{"divergia"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }
  if (iset_cmd->parsed() && iset_cmd->count("--format") == 0) o.format = "csv";

  CLI::App* used = app.get_subcommands().front();
  std::string command = used->get_name();
  if (command == "qam") command += " " + used->get_subcommands().front()->get_name();
  CLI::App* leaf = command.rfind("qam", 0) == 0 ? used->get_subcommands().front() : used;

  try {
    std::string backend = backend_name();
    Json config = {{"command", command}, {"backend", backend}};
    for (const auto* opt : leaf->get_options()) {
      if (opt->get_name() == "--help") continue;
      std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      auto results = opt->results();
      if (!results.empty()) {
        if (opt->get_expected_max() == 0) {
          config[name] = true;
        } else if (results.size() == 1) {
          config[name] = results.front();
        } else {
          config[name] = results;
        }
      } else if (!opt->get_default_str().empty()) {
        config[name] = opt->get_default_str();
      }
    }
    if (command == "check" || command == "iset") {
      config["defaults"] = {{"subintervals", "ten equal subintervals unless --subintervals is given"},
                            {"grid", "equispaced points plus every p/q up to the maximal denominator"}};
    }

    std::string csv;
    Json result;
    bool exact = backend == "exact";
    if (command == "cantor") {
      result = exact ? cantor<Rational>(o, csv) : cantor<double>(o, csv);
    } else if (command == "jarnik") {
      result = exact ? jarnik<Rational>(o, csv) : jarnik<double>(o, csv);
    } else if (command == "liouville") {
      result = liouville(o, csv);
    } else if (command == "anydh") {
      result = anydh(o, csv);
    } else if (command == "check") {
      result = exact ? check<Rational>(o) : check<double>(o);
    } else if (command == "iset") {
      result = exact ? iset<Rational>(o, csv) : iset<double>(o, csv);
    } else if (command == "dim") {
      result = exact ? dim<Rational>(o, csv) : dim<double>(o, csv);
    } else if (command == "qam mean") {
      result = qam_mean(o);
    } else if (command == "qam maximal") {
      result = qam_maximal(o);
    } else if (command == "qam compare") {
      result = qam_compare(o);
    }
    emit(o, out, config, result, csv);
    return 0;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n\n" << leaf->help();
    return 2;
  } catch (const Error& e) {
    out << encode_error(e).dump(2) << "\n";
    return 1;
  }
}

}  // namespace divergia::cli
