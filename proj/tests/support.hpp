#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rlab/rlab.hpp"

namespace rlab::testkit {

inline SimpleFunction random_simple(CounterRng& rng, int max_pieces, double M) {
  const auto n = rng.integer(1, max_pieces);
  std::vector<Piece> pieces;
  double used = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    // repeated values on purpose: ties must merge
    const double v = rng.uniform() < 0.2 && !pieces.empty() ? pieces.back().value : rng.log_uniform(1e-2, 1e2);
    pieces.push_back({v, rng.uniform(0.05, 1.0)});
    used += pieces.back().mass;
  }
  const double fill = rng.uniform(0.2, 1.0) * M / used;
  for (auto& p : pieces) p.mass *= fill;
  return {std::move(pieces), M};
}

enum class Layout { disjoint, nested };

/// f and g as signed functions on one partition of (0, M).
/// disjoint: separate supports. nested: g lives on a set, f on a subset of it
/// with random signs, so f + g can cancel.
inline Overlay random_overlay(CounterRng& rng, Layout layout, double M) {
  std::vector<OverlayCell> cells;
  const auto nf = rng.integer(1, 5), ng = rng.integer(1, 5);
  auto signed_value = [&] { return (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.log_uniform(1e-2, 1e2); };
  if (layout == Layout::disjoint) {
    for (std::int64_t i = 0; i < nf; ++i) cells.push_back({signed_value(), 0.0, rng.uniform(0.05, 1.0)});
    for (std::int64_t i = 0; i < ng; ++i) cells.push_back({0.0, signed_value(), rng.uniform(0.05, 1.0)});
  } else {
    for (std::int64_t i = 0; i < ng; ++i) {
      const double gv = signed_value();
      const double m = rng.uniform(0.05, 1.0);
      if (i < nf) {
        // part of this g-cell carries f, sometimes exactly −g
        const double share = rng.uniform(0.1, 0.9);
        const double fv = rng.uniform() < 0.3 ? -gv : signed_value();
        cells.push_back({fv, gv, m * share});
        cells.push_back({0.0, gv, m * (1 - share)});
      } else {
        cells.push_back({0.0, gv, m});
      }
    }
  }
  double used = 0.0;
  for (const auto& c : cells) used += c.mass;
  const double fill = rng.uniform(0.3, 1.0) * M / used;
  for (auto& c : cells) c.mass *= fill;
  return {std::move(cells), M};
}

inline Overlay scale_overlay(const Overlay& o, double cf, double cg) {
  auto cells = o.cells();
  for (auto& c : cells) {
    c.f_value *= cf;
    c.g_value *= cg;
  }
  return {std::move(cells), o.total_mass()};
}

/// ∫_a^b f by Boost's Gauss–Kronrod; independent of the library's quadrature.
template <class F>
double oracle_integral(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

/// ∫_a^b f with endpoint singularities allowed.
template <class F>
double oracle_integral_singular(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b);
}

/// ∫_a^∞ f.
template <class F>
double oracle_integral_half_infinite(F f, double a) {
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate([&](double x) { return f(a + x); }, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace rlab::testkit
