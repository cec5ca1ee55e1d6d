#pragma once

// JSON and CSV forms of the library's values, plus plot-data emission.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/radial.hpp"
#include "rlab/rearrangement.hpp"
#include "rlab/weights.hpp"

namespace rlab::io {

using Json = nlohmann::ordered_json;

/// Finite doubles as JSON numbers; ±∞ and NaN as the strings format_double gives.
inline Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

/// Accepts numbers and the strings "inf", "INF", "Infinity", "-inf".
inline double parse_real(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  if (t == "-inf" || t == "-infinity") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw PreconditionError("not a number: '" + s + "'");
  return v;
}

inline double real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>());
  throw PreconditionError("expected a number, got " + j.dump());
}

inline double real(const Json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
  return real(j.at(key));
}

inline double real_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? real(j.at(key)) : fallback;
}

inline std::vector<double> reals(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw PreconditionError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const auto& x : j.at(key)) out.push_back(real(x));
  return out;
}

inline Json to_json(const SimpleFunction& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back({p.value, p.mass});
  return {{"pieces", pieces}, {"total_mass", f.total_mass()}};
}

inline SimpleFunction simple_function_from_json(const Json& j) {
  std::vector<Piece> pieces;
  for (const auto& p : j.at("pieces")) {
    if (!p.is_array() || p.size() != 2) throw PreconditionError("each piece must be [value, mass]");
    pieces.push_back({real(p[0]), real(p[1])});
  }
  return {std::move(pieces), real(j, "total_mass")};
}

inline Json to_json(const StepProfile& f) {
  return {{"breakpoints", f.breakpoints()}, {"values", f.values()}, {"total_mass", f.total_mass()}};
}

inline StepProfile step_profile_from_json(const Json& j) {
  return {reals(j, "breakpoints"), reals(j, "values"), real(j, "total_mass")};
}

inline Json to_json(const LinearProfile& f) {
  return {{"kind", "linear"}, {"nodes", f.nodes()}, {"values", f.values()}, {"total_mass", f.total_mass()}};
}

inline Json to_json(const Weight& w) {
  if (auto pl = w.powerlog())
    return {{"kind", "powerlog"}, {"p", number(pl->p)}, {"q", pl->q}, {"alpha", pl->alpha}, {"M", pl->M}};
  const auto* t = w.tabulated();
  return {{"kind", "tabulated"}, {"grid", t->grid}, {"values", t->values}, {"M", t->M}};
}

inline Weight weight_from_json(const Json& j) {
  const std::string kind = j.value("kind", "");
  const double M = real_or(j, "M", 1.0);
  if (kind == "powerlog") return PowerLog{real(j, "p"), real(j, "q"), real_or(j, "alpha", 0.0), M};
  if (kind == "tabulated") return Tabulated{reals(j, "grid"), reals(j, "values"), M};
  throw PreconditionError("weight kind must be 'powerlog' or 'tabulated'");
}

inline Json to_json(const Quantity& q) {
  return {{"value", number(q.value)},
          {"abs_err_estimate", number(q.abs_err)},
          {"method", std::string(method_name(q.method))},
          {"converged", q.converged}};
}

/// A radial profile description: "linear" (explicit nodes over the ball
/// measure), "tent" or "moser" (generated for the given geometry).
inline RadialProfile radial_profile_from_json(const Json& j, const BallGeometry& geom) {
  const std::string kind = j.value("kind", "");
  const bool normalize = j.value("normalize", false);
  if (kind == "tent")
    return tent_profile(geom, real_or(j, "support_fraction", 0.5), real_or(j, "height", 1.0), normalize);
  if (kind == "moser") {
    const int nodes = j.value("nodes", 16);
    return moser_profile(geom, real_or(j, "support_fraction", 0.5), real_or(j, "L", 8.0), nodes, normalize);
  }
  if (kind == "linear") {
    RadialProfile v(LinearProfile(reals(j, "nodes"), reals(j, "values"), geom.ball_measure()), geom);
    if (!normalize) return v;
    return v.scaled(1.0 / gradient_n_norm(v, geom), geom);
  }
  throw PreconditionError("radial profile kind must be 'linear', 'tent' or 'moser'");
}

/// Rows of preformatted cells under a header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    require(row.size() == header.size(), "row width differs from the header");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw PreconditionError("table has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }

  std::string to_csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

inline std::vector<std::string> cells(std::initializer_list<double> xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(format_double(x));
  return out;
}

struct PlotData {
  std::string csv;
  std::string svg;
};

/// Columns plotted for each plot kind: x first, then one or more series.
inline std::vector<std::string> plot_columns(const std::string& kind) {
  if (kind == "theta-curve") return {"lambda", "theta"};
  if (kind == "epsilon-curve") return {"lambda0", "epsilon"};
  if (kind == "superadd-growth") return {"k", "ratio"};
  if (kind == "invariance") return {"kappa", "grad_rel_err", "qnorm_rel_err"};
  throw PreconditionError("unknown plot kind '" + kind + "'");
}

namespace detail {

inline std::string svg_chart(const std::vector<std::string>& names, const std::vector<std::vector<double>>& cols) {
  constexpr double W = 640, H = 400, pad = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  const std::size_t n = cols.empty() ? 0 : cols[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(cols[0][i])) continue;
    x0 = std::min(x0, cols[0][i]);
    x1 = std::max(x1, cols[0][i]);
    for (std::size_t c = 1; c < cols.size(); ++c)
      if (std::isfinite(cols[c][i])) {
        y0 = std::min(y0, cols[c][i]);
        y1 = std::max(y1, cols[c][i]);
      }
  }
  os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\">" << (names.empty() ? "" : names[0]) << "</text>\n";
  if (n > 0 && std::isfinite(x0) && std::isfinite(y0)) {
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    os << "<text x=\"5\" y=\"" << pad << "\">" << format_double(y1) << "</text>\n";
    os << "<text x=\"5\" y=\"" << H - pad << "\">" << format_double(y0) << "</text>\n";
    for (std::size_t c = 1; c < cols.size(); ++c) {
      os << "<polyline fill=\"none\" stroke=\"" << (c == 1 ? "black" : "gray") << "\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(cols[0][i]) || !std::isfinite(cols[c][i])) continue;
        const double x = pad + (cols[0][i] - x0) / (x1 - x0) * (W - 2 * pad);
        const double y = H - pad - (cols[c][i] - y0) / (y1 - y0) * (H - 2 * pad);
        os << format_double(x) << ',' << format_double(y) << ' ';
      }
      os << "\"/>\n";
      os << "<text x=\"" << W - pad << "\" y=\"" << pad + 15 * c << "\">" << names[c] << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace detail

/// Projects a report table onto the columns of a plot kind: CSV always, SVG as a bonus.
inline PlotData emit_plotdata(const Table& report, const std::string& kind) {
  const auto names = plot_columns(kind);
  Table out{names, {}};
  std::vector<std::vector<double>> cols(names.size());
  std::vector<std::size_t> idx;
  if (!report.rows.empty())
    for (const auto& n : names) idx.push_back(report.column(n));
  for (const auto& row : report.rows) {
    std::vector<std::string> r;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      r.push_back(row[idx[c]]);
      cols[c].push_back(parse_real(row[idx[c]]));
    }
    out.add(std::move(r));
  }
  return {out.to_csv(), detail::svg_chart(names, cols)};
}

}  // namespace rlab::io
