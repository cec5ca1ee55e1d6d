#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "rlab/errors.hpp"

namespace rlab {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 60;
  int max_intervals = 200000;

  void validate() const {
    require(rel_tol > 0 && abs_tol > 0, "quadrature tolerances must be positive");
    require(max_depth > 0, "quadrature max_depth must be positive");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_err = 0.0;
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, err;
  int depth;
  bool operator<(const Panel& other) const { return err < other.err; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f_left{}, f_right{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = f(center - dx);
    f_right[j] = f(center + dx);
    const double pair = f_left[j] + f_right[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));

  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * res_abs, err);
  if (!std::isfinite(result)) err = std::numeric_limits<double>::infinity();
  return {a, b, result, err, depth};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  QuadratureResult out;
  if (a == b) return out;
  long evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };
  std::priority_queue<detail::Panel> active;
  double total = 0.0, total_err = 0.0, frozen_value = 0.0, frozen_err = 0.0;
  {
    auto p = detail::gauss_kronrod_15(counted, a, b, 0);
    total = p.value;
    total_err = p.err;
    active.push(p);
  }
  int intervals = 1;
  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (!active.empty() && total_err > target() && intervals < cfg.max_intervals) {
    auto worst = active.top();
    active.pop();
    if (worst.depth >= cfg.max_depth) {
      frozen_value += worst.value;
      frozen_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod_15(counted, worst.a, mid, worst.depth + 1);
    auto right = detail::gauss_kronrod_15(counted, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
    ++intervals;
  }
  // Resum to shed the drift from incremental updates.
  double sum = frozen_value, err = frozen_err;
  std::vector<detail::Panel> rest;
  while (!active.empty()) {
    rest.push_back(active.top());
    active.pop();
  }
  for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
    sum += it->value;
    err += it->err;
  }
  out.value = sum;
  out.abs_err = err;
  out.evaluations = evals;
  out.converged = std::isfinite(out.value) &&
                  err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value)) * (1.0 + 1e-9);
  return out;
}

/// Quadrature over [a, ∞) through u = a + x / (1 - x).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureConfig& cfg = {}) {
  auto mapped = [&](double x) {
    const double one_minus = 1.0 - x;
    const double u = a + x / one_minus;
    if (!std::isfinite(u)) return 0.0;
    const double value = f(u);
    return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, cfg);
}

/// Quadrature over [a, ∞), a > 0, through u = a·e^s. Turns power-law tails
/// u^β (β < -1) into exponential ones, which the rational map handles well.
template <class F>
QuadratureResult integrate_to_infinity_log(F&& f, double a, const QuadratureConfig& cfg = {}) {
  require(a > 0, "log-mapped semi-infinite quadrature needs a positive lower limit");
  auto stretched = [&](double s) {
    const double u = a * std::exp(s);
    if (!std::isfinite(u)) return 0.0;
    const double value = f(u);
    return value == 0.0 ? 0.0 : value * u;
  };
  return integrate_to_infinity(stretched, 0.0, cfg);
}

}  // namespace rlab
