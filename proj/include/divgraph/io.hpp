#ifndef DIVGRAPH_IO_HPP
#define DIVGRAPH_IO_HPP

// JSON, CSV and SVG exchange formats.
//
// Graph:   {"vertices":["v0","v1"],"edges":[{"id":"e0","u":"v0","v":"v1","length":0.5}]}
// Divisor: {"points":[{"vertex":"v0","mass":1.0},{"edge":"e0","offset":0.25,"mass":0.5}]}
// Output is deterministic: points are ordered vertices first (input order),
// then by user edge and offset; reals carry at most 12 significant digits.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "divgraph/divisor.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/pwl_function.hpp"
#include "divgraph/reduced.hpp"

namespace divgraph {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to x, capped at 12 significant digits;
/// integral values keep a ".0".
inline std::string format_real(double x) {
  if (x == 0.0) return "0.0";
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  for (int prec = 1; prec <= 12; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

/// x rounded to the value printed by format_real, for embedding in JSON.
inline double round_real(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  return std::strtod(format_real(x).c_str(), nullptr);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string(what) + " lacks field '" + key + "'");
  return j.at(key);
}

inline std::string require_string(const Json& j, const char* key, const char* what) {
  const Json& v = require_field(j, key, what);
  if (!v.is_string()) throw ParseError(std::string(what) + " field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline double require_number(const Json& j, const char* key, const char* what) {
  const Json& v = require_field(j, key, what);
  if (!v.is_number()) throw ParseError(std::string(what) + " field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

inline GraphSpec graph_spec_from_json(const Json& j) {
  GraphSpec spec;
  const Json& vs = detail::require_field(j, "vertices", "graph");
  const Json& es = detail::require_field(j, "edges", "graph");
  if (!vs.is_array() || !es.is_array()) throw ParseError("graph 'vertices' and 'edges' must be arrays");
  for (const auto& v : vs) {
    if (!v.is_string()) throw ParseError("vertex ids must be strings");
    spec.vertices.push_back(v.get<std::string>());
  }
  for (const auto& e : es)
    spec.edges.push_back({detail::require_string(e, "id", "edge"), detail::require_string(e, "u", "edge"),
                          detail::require_string(e, "v", "edge"), detail::require_number(e, "length", "edge")});
  return spec;
}

inline MetricGraph graph_from_json(const Json& j, const Tolerances& tol = {}) {
  return build_graph(graph_spec_from_json(j), tol);
}

inline Json graph_to_json(const MetricGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int v = 0; v < g.user_vertex_count(); ++v) j["vertices"].push_back(g.vertex_id(v));
  j["edges"] = Json::array();
  for (const auto& src : g.source_edges()) {
    Json e;
    e["id"] = src.id;
    e["u"] = g.vertex_id(src.u);
    e["v"] = g.vertex_id(src.v);
    e["length"] = round_real(src.length);
    j["edges"].push_back(std::move(e));
  }
  return j;
}

/// Parses "v0" (vertex) or "e0:0.25" (edge offset).
inline PointOnGraph parse_point(const MetricGraph& g, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return g.locate(text);
  const std::string num = text.substr(colon + 1);
  char* end = nullptr;
  const double offset = std::strtod(num.c_str(), &end);
  if (num.empty() || end != num.c_str() + num.size()) throw ParseError("bad point offset in '" + text + "'");
  return g.locate(text.substr(0, colon), offset);
}

inline RDivisor divisor_from_json(const MetricGraph& g, const Json& j) {
  const Json& pts = detail::require_field(j, "points", "divisor");
  if (!pts.is_array()) throw ParseError("divisor 'points' must be an array");
  std::vector<WeightedPoint> terms;
  for (const auto& p : pts) {
    const double mass = detail::require_number(p, "mass", "divisor point");
    if (p.contains("vertex")) {
      terms.push_back({g.locate(detail::require_string(p, "vertex", "divisor point")), mass});
    } else {
      terms.push_back({g.locate(detail::require_string(p, "edge", "divisor point"),
                                detail::require_number(p, "offset", "divisor point")),
                       mass});
    }
  }
  return RDivisor(g, terms);
}

inline Json point_to_json(const MetricGraph& g, const PointOnGraph& p) {
  const auto uc = g.user_coordinates(p);
  Json j;
  if (uc.vertex) {
    j["vertex"] = *uc.vertex;
  } else {
    j["edge"] = uc.edge;
    j["offset"] = round_real(uc.offset);
  }
  return j;
}

inline Json divisor_to_json(const MetricGraph& g, const RDivisor& d) {
  struct Row {
    int kind, index;
    double offset;
    Json json;
  };
  std::vector<Row> rows;
  for (const auto& t : d.terms()) {
    const auto uc = g.user_coordinates(t.point);
    Json pj = point_to_json(g, t.point);
    pj["mass"] = round_real(t.weight);
    if (uc.vertex)
      rows.push_back({0, *g.find_vertex(*uc.vertex), 0.0, std::move(pj)});
    else
      rows.push_back({1, *g.find_source_edge(uc.edge), uc.offset, std::move(pj)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.kind, a.index, a.offset) < std::tie(b.kind, b.index, b.offset);
  });
  Json j;
  j["points"] = Json::array();
  for (auto& r : rows) j["points"].push_back(std::move(r.json));
  return j;
}

inline Json certificate_to_json(const CertificateReport& c) {
  Json j;
  j["generators"] = Json::array();
  for (const auto& g : c.generators) {
    Json row;
    row["meets"] = g.meets;
    row["gmin_identity"] = g.gmin_identity;
    // Residuals below 1e-12 are rounding noise; print them as 0 for stable output.
    row["phi_residual"] = std::abs(g.phi_residual) < 1e-12 ? 0.0 : round_real(g.phi_residual);
    row["phi_additive"] = g.phi_additive;
    j["generators"].push_back(std::move(row));
  }
  j["gmin_union_identity"] = c.gmin_union_identity;
  j["certified"] = c.certified();
  return j;
}

inline Json reduced_to_json(const MetricGraph& g, const ReducedResult& r) {
  Json j;
  j["divisor"] = divisor_to_json(g, r.divisor);
  j["objective"] = round_real(r.objective);
  j["status"] = to_string(r.status);
  j["certificate"] = certificate_to_json(r.certificate);
  return j;
}

/// Rows (edge_id, offset, value) in user edge coordinates: every breakpoint
/// plus `samples` uniformly spaced offsets per edge.
inline std::string function_csv(const PwlFunction& f, int samples = 16) {
  const MetricGraph& g = f.graph();
  std::ostringstream out;
  out << "edge_id,offset,value\n";
  for (const auto& src : g.source_edges()) {
    std::vector<double> xs;
    for (int piece : src.pieces) {
      const auto& ed = g.edge(piece);
      for (const auto& b : f.breakpoints(piece)) xs.push_back(ed.base + b.offset);
    }
    for (int i = 0; i <= samples; ++i) xs.push_back(src.length * i / samples);
    std::sort(xs.begin(), xs.end());
    double last = -1.0;
    for (double x : xs) {
      if (x - last <= g.tol_len()) continue;
      last = x;
      double value = 0.0;
      for (int piece : src.pieces) {
        const auto& ed = g.edge(piece);
        if (x <= ed.base + ed.length + g.tol_len()) {
          value = f.eval_on_edge(piece, std::clamp(x - ed.base, 0.0, ed.length));
          break;
        }
      }
      out << src.id << ',' << format_real(x) << ',' << format_real(value) << '\n';
    }
  }
  return out.str();
}

/// One panel per user edge with the function drawn over the edge offsets.
inline std::string function_svg(const PwlFunction& f, const std::string& title) {
  const MetricGraph& g = f.graph();
  const double width = 480, panel = 120, margin = 30;
  const double top = std::max(f.max_value(), 1e-12), bottom = std::min(f.min_value(), 0.0);
  const auto& sources = g.source_edges();
  const double height = margin + panel * static_cast<double>(sources.size()) + margin;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 2 * margin << "\" height=\"" << height
    << "\">\n";
  s << "<text x=\"" << margin << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"12\">" << title << "</text>\n";
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& src = sources[i];
    const double y0 = margin + panel * static_cast<double>(i);
    s << "<rect x=\"" << margin << "\" y=\"" << y0 << "\" width=\"" << width << "\" height=\"" << panel - 10
      << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
    s << "<text x=\"" << margin + 4 << "\" y=\"" << y0 + 14 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << src.id << " (" << g.vertex_id(src.u) << " to " << g.vertex_id(src.v) << ")</text>\n";
    s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (int piece : src.pieces) {
      const auto& ed = g.edge(piece);
      for (const auto& b : f.breakpoints(piece)) {
        const double x = margin + width * (ed.base + b.offset) / src.length;
        const double y = y0 + (panel - 10) * (1.0 - (b.value - bottom) / (top - bottom));
        s << format_real(x) << ',' << format_real(y) << ' ';
      }
    }
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace divgraph

#endif  // DIVGRAPH_IO_HPP
