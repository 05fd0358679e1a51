#ifndef DIVGRAPH_TOOLS_CLI_APP_HPP
#define DIVGRAPH_TOOLS_CLI_APP_HPP

// Command-line front end. run() is kept separate from main() so tests can
// drive it in-process.
//
// Exit codes: 0 success (or "true"), 1 "false", 2 parse/validation error,
// 3 certificate failure under --strict.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "divgraph/divgraph.hpp"

namespace divgraph::cli {

namespace detail {

inline std::optional<double> env_double(const char* name) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0') throw ParseError(std::string(name) + " is not a number: '" + raw + "'");
  return v;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

struct Inputs {
  std::string graph;
  std::vector<std::string> divisors;
  std::vector<std::string> hull;
  std::string p, q, csv, svg;
  double t = 0.0;
  std::optional<double> kappa;
  bool strict = false;
  HullSearchOptions search;
  bool no_peel = false;
  std::optional<double> tol_val, tol_len;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Potential theory and tropical convexity on metric graphs", "divgraph"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Inputs in;
  app.add_option("--tol-val", in.tol_val, "relative value tolerance (default 1e-9)");
  app.add_option("--tol-len", in.tol_len, "relative length tolerance (default 1e-12)");

  std::function<int()> action;
  MetricGraph g;
  auto divisor = [&](std::size_t i) { return divisor_from_json(g, read_json_file(in.divisors.at(i))); };
  auto hull = [&]() {
    std::vector<RDivisor> gens;
    for (const auto& path : in.hull) gens.push_back(divisor_from_json(g, read_json_file(path)));
    return TConvexHull(std::move(gens));
  };
  auto emit = [&](const Json& j) { out << j.dump(2) << '\n'; };
  auto boolean = [&](bool v) {
    out << (v ? "true" : "false") << '\n';
    return v ? 0 : 1;
  };

  auto command = [&](const char* name, const char* help, std::size_t n_divisors, std::function<int()> body) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("graph", in.graph, "graph JSON")->required();
    if (n_divisors > 0) sub->add_option("divisors", in.divisors, "divisor JSON files")->expected(static_cast<int>(n_divisors))->required();
    sub->final_callback([&action, body] { action = body; });
    return sub;
  };

  command("rho", "distance rho(D1, D2)", 2, [&] {
    out << format_real(rho(g, divisor(0), divisor(1))) << '\n';
    return 0;
  });
  command("sfunc", "Phi(D2 - D1)", 2, [&] {
    out << format_real(s_func(g, divisor(0), divisor(1))) << '\n';
    return 0;
  });
  auto point_options = [&](CLI::App* sub) {
    sub->add_option("--p", in.p, "point: vertex id or edge:offset")->required();
    sub->add_option("--q", in.q, "point: vertex id or edge:offset")->required();
    return sub;
  };
  point_options(command("resistance", "effective resistance r(p, q)", 0, [&] {
    out << format_real(effective_resistance(g, parse_point(g, in.p), parse_point(g, in.q))) << '\n';
    return 0;
  }));
  point_options(command("jfun", "samples of j_q(., p)", 0, [&] {
    const std::string csv = function_csv(j_function(g, parse_point(g, in.q), parse_point(g, in.p)));
    if (in.csv.empty())
      out << csv;
    else
      detail::write_file(in.csv, csv);
    return 0;
  }))->add_option("--csv", in.csv, "output CSV path (stdout if omitted)");
  command("tpath", "P(t) on the tropical path from D1 to D2", 2, [&] {
    emit(divisor_to_json(g, t_path_eval(TSegment(g, divisor(0), divisor(1)), in.t)));
    return 0;
  })->add_option("--t", in.t, "path parameter in [0, 1]")->required();
  command("segment-contains", "is D on tconv(D1, D2)", 3, [&] {
    return boolean(segment_contains(g, TSegment(g, divisor(0), divisor(1)), divisor(2)));
  });
  command("segment-intersect", "tconv(A1, A2) ∩ tconv(B1, B2)", 4, [&] {
    const auto s = segment_intersection(g, divisor(0), divisor(1), divisor(2), divisor(3));
    if (!s) {
      out << "empty\n";
      return 0;
    }
    Json j;
    j["from"] = divisor_to_json(g, s->from());
    j["to"] = divisor_to_json(g, s->to());
    emit(j);
    return 0;
  });

  auto hull_command = [&](const char* name, const char* help, std::size_t n_divisors, std::function<int()> body) {
    CLI::App* sub = command(name, help, n_divisors, std::move(body));
    sub->add_option("--hull", in.hull, "generator divisor JSON files")->required()->expected(1, -1);
    return sub;
  };
  CLI::App* reduce = hull_command("reduce", "reduced divisor of E in the hull", 1, [&] {
    const TConvexHull h = hull();
    HullSearchOptions opt = in.search;
    opt.use_peel = !in.no_peel;
    if (opt.grid < 1 || opt.rounds < 1) throw ParameterOutOfRange("--grid and --rounds must be positive");
    emit(reduced_to_json(g, reduced_on_hull(g, h, divisor(0), opt, in.strict)));
    return 0;
  });
  reduce->add_flag("--strict", in.strict, "fail (exit 3) unless the certificate holds");
  reduce->add_option("--grid", in.search.grid, "grid points per walk parameter");
  reduce->add_option("--rounds", in.search.rounds, "refinement rounds of the grid search");
  reduce->add_flag("--no-peel", in.no_peel, "skip the generator-by-generator reduction candidate");
  hull_command("member", "is E in the hull", 1, [&] { return boolean(hull_contains(g, hull(), divisor(0))); });
  hull_command("extremals", "minimal generating subset", 0, [&] {
    const TConvexHull h = hull();
    const TConvexHull ex = extremals(g, h);
    Json j;
    j["generators"] = Json::array();
    for (const auto& d : ex.generators())
      for (std::size_t i = 0; i < h.size(); ++i)
        if (divisors_equal(g, h.generator(i), d)) {
          Json row;
          row["index"] = i;
          row["divisor"] = divisor_to_json(g, d);
          j["generators"].push_back(std::move(row));
          break;
        }
    emit(j);
    return 0;
  });
  hull_command("project", "canonical projection of E onto the hull", 1, [&] {
    emit(divisor_to_json(g, canonical_project(g, hull(), divisor(0))));
    return 0;
  });
  CLI::App* retract = hull_command("retract", "retraction h(t, D) onto the hull", 1, [&] {
    const ProjectionTarget target = hull();
    const RDivisor d = divisor(0);
    const double kappa = in.kappa ? *in.kappa : distance_to_target(g, target, d);
    emit(divisor_to_json(g, retraction_sample(g, target, d, in.t, kappa)));
    return 0;
  });
  retract->add_option("--t", in.t, "homotopy parameter in [0, 1]")->required();
  retract->add_option("--kappa", in.kappa, "upper bound of the distance to the hull (default: that distance)");
  command("plot", "SVG plot of normalize(f_{D2-D1})", 2, [&] {
    const std::string svg = function_svg(associated_function(g, divisor(0), divisor(1)), "normalize(f_{D2-D1})");
    if (in.svg.empty())
      out << svg;
    else
      detail::write_file(in.svg, svg);
    return 0;
  })->add_option("--svg", in.svg, "output SVG path (stdout if omitted)");

  std::vector<std::string> argv_store{"divgraph"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    Tolerances tol;
    if (auto v = detail::env_double("DIVGRAPH_TOL_VAL")) tol.val_rel = *v;
    if (auto v = detail::env_double("DIVGRAPH_TOL_LEN")) tol.len_rel = *v;
    if (in.tol_val) tol.val_rel = *in.tol_val;
    if (in.tol_len) tol.len_rel = *in.tol_len;
    if (!(tol.val_rel > 0.0) || !(tol.len_rel > 0.0)) throw ParameterOutOfRange("tolerances must be positive");
    g = graph_from_json(read_json_file(in.graph), tol);
    return action();
  } catch (const CertificateFailed& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace divgraph::cli

#endif  // DIVGRAPH_TOOLS_CLI_APP_HPP
