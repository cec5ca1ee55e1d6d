#pragma once

// Dilation index Θ(λ), uniform-separation certificates, and a randomized
// falsifier for the separation property over finite-dimensional quasinorms.

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/quasinorms.hpp"
#include "rlab/rng.hpp"
#include "rlab/weights.hpp"

namespace rlab {

/// Θ(λ) = sup_{0<t<λM} w(t/λ) / (λ w(t)) for power-log weights, in closed form.
inline double theta_closed_form(const PowerLog& w, double lambda) {
  require(lambda > 0 && lambda < 1, "Θ needs 0 < λ < 1");
  const double c = w.power(), beta = w.log_power();
  const double base = std::pow(lambda, -c);
  if (beta >= 0) return base;
  return base * std::pow(std::log(2.0) / std::log(2.0 / lambda), beta);
}

/// Θ(λ) by a log-grid sup in u = log(2M/t), golden-section polishing, and
/// Richardson extrapolation of the t → 0 limit. Returns +∞ when that limit
/// keeps growing.
inline double theta_numeric(const Weight& w, double lambda) {
  require(lambda > 0 && lambda < 1, "Θ needs 0 < λ < 1");
  const double ell = std::log(1.0 / lambda);
  const double u_lo = std::log(2.0 / lambda);  // t = λM
  const double log_lambda = std::log(lambda);
  auto log_ratio = [&](double u) { return w.log_value_u(u - ell) - w.log_value_u(u) - log_lambda; };

  const int n = 2048;
  const double a = std::log(u_lo), b = std::log(1e4);
  double best = log_ratio(u_lo);
  int arg = 0;
  for (int i = 1; i <= n; ++i) {
    const double v = log_ratio(std::exp(a + (b - a) * i / n));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (arg > 0 && arg < n) {
    auto [x, v] = golden_section_maximize([&](double y) { return log_ratio(std::exp(y)); },
                                          a + (b - a) * (arg - 1) / n, a + (b - a) * (arg + 1) / n, 1e-13);
    best = std::max(best, v);
  }
  const double r4 = std::exp(log_ratio(1e4)), r5 = std::exp(log_ratio(1e5)), r6 = std::exp(log_ratio(1e6));
  const double d1 = r5 - r4, d2 = r6 - r5;
  if (d2 > 1e-12 * r6 && d2 > 0.5 * std::abs(d1)) return kInf;
  const double limit = r6 + d2 / 9.0;
  return std::max(std::exp(best), limit);
}

/// Closed form when available, grid sup otherwise.
inline double theta(const Weight& w, double lambda) {
  if (auto pl = w.powerlog()) return theta_closed_form(*pl, lambda);
  return theta_numeric(w, lambda);
}

/// ε = (R^α − r^α)^{1/α} for an α-norm.
inline double alpha_norm_epsilon(double alpha, double r, double R) {
  require(alpha > 0 && alpha <= 1, "α-norm exponent must lie in (0, 1]");
  require(r > 0 && r < R, "need 0 < r < R");
  return std::pow(std::pow(R, alpha) - std::pow(r, alpha), 1.0 / alpha);
}

struct SeparationCertificate {
  double r = 0.0;
  double R = 0.0;
  double lambda0 = 0.0;
  double epsilon = 0.0;
  double theta_min = 0.0;            // min of Θ over the checking grid
  bool hypothesis_verified = false;  // theta_min ≤ 1 + 1e-6
};

/// ε(λ) = Θ(λ)^{-1/q} (R − Θ(1−λ)^{1/q} r).
inline double separation_epsilon(const Weight& w, double q, double r, double R, double lambda) {
  return std::pow(theta(w, lambda), -1.0 / q) * (R - std::pow(theta(w, 1.0 - lambda), 1.0 / q) * r);
}

/// Best λ₀ for ε(λ₀) from a 64-point seed grid refined by golden-section search.
/// Throws NoPositiveEpsilon if no seed gives ε > 0.
inline SeparationCertificate separation_certificate(const LambdaParams& params, double r, double R) {
  require(r > 0 && r < R, "need 0 < r < R");
  const Weight& w = params.weight;
  const double q = params.q;
  SeparationCertificate cert{r, R};

  double tmin = kInf;
  for (int i = 1; i < 64; ++i) tmin = std::min(tmin, theta(w, i / 64.0));
  for (int k = 1; k <= 8; ++k) tmin = std::min(tmin, theta(w, 1.0 - std::pow(10.0, -k)));
  cert.theta_min = tmin;
  cert.hypothesis_verified = tmin <= 1.0 + 1e-6;

  auto eps = [&](double lam) { return separation_epsilon(w, q, r, R, lam); };
  const int n = 64;
  auto node = [&](int i) { return (i + 0.5) / n; };
  int arg = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = eps(node(i));
    if (e > best) {
      best = e;
      arg = i;
    }
  }
  if (arg < 0) throw NoPositiveEpsilon("no λ₀ on the seed grid gives a positive ε");
  const double lo = arg > 0 ? node(arg - 1) : node(arg) / 2;
  const double hi = arg + 1 < n ? node(arg + 1) : (node(arg) + 1.0) / 2;
  auto [x, v] = golden_section_maximize(eps, lo, hi, 1e-12);
  if (v > best) {
    best = v;
    cert.lambda0 = x;
  } else {
    cert.lambda0 = node(arg);
  }
  cert.epsilon = best;
  return cert;
}

/// 2|x| on the x axis, |x| + |y| off it.
inline double plane_counterexample_qnorm(double x, double y) {
  return y == 0.0 ? 2.0 * std::abs(x) : std::abs(x) + std::abs(y);
}

using VectorQuasinorm = std::function<double(std::span<const double>)>;

struct NamedQuasinorm {
  VectorQuasinorm eval;
  std::size_t dim;
};

/// Built-in quasinorms: "plane", "euclid" (on ℝ²) and "l22", the L^{2,2}
/// quasinorm of |x| viewed as a step function on `cells` equal cells.
inline NamedQuasinorm builtin_quasinorm(const std::string& name, std::size_t cells = 8) {
  if (name == "plane") return {[](std::span<const double> x) { return plane_counterexample_qnorm(x[0], x[1]); }, 2};
  if (name == "euclid") return {[](std::span<const double> x) { return std::hypot(x[0], x[1]); }, 2};
  if (name == "l22") {
    require(cells >= 1, "l22 needs at least one cell");
    return {[cells](std::span<const double> x) {
              std::vector<Piece> pieces;
              for (double v : x)
                if (v != 0.0) pieces.push_back({std::abs(v), 1.0 / static_cast<double>(cells)});
              SimpleFunction f(std::move(pieces), 1.0);
              return lz_quasinorm(rearrangement(f), 2.0, 2.0, 0.0).value;
            },
            cells};
  }
  throw PreconditionError("unknown quasinorm '" + name + "'");
}

struct SeparationCounterexample {
  std::vector<double> f, g;
  double f_norm = 0.0, g_norm = 0.0, sum_norm = 0.0;
  long trial = 0;
};

/// Randomized and structured search for ‖g‖ ≥ R, ‖f‖ ≤ r, ‖f+g‖ < ε.
/// Deterministic for a fixed seed; finding nothing proves nothing.
inline std::optional<SeparationCounterexample> falsify_uniform_separation(
    const NamedQuasinorm& qn, double r, double R, double eps_claimed, long budget, std::uint64_t seed) {
  require(budget >= 1, "budget must be at least 1");
  require(r > 0 && r < R, "need 0 < r < R");
  const std::size_t d = qn.dim;
  CounterRng rng(seed, 0x5e9a);
  auto norm = [&](const std::vector<double>& x) { return qn.eval(std::span<const double>(x)); };

  // Smallest multiple s·dir with ‖s·dir‖ ≥ R, assuming growth along rays.
  auto reach = [&](const std::vector<double>& dir) -> std::optional<std::vector<double>> {
    auto at = [&](double s) {
      auto x = dir;
      for (auto& v : x) v *= s;
      return x;
    };
    double hi = 1.0;
    for (int i = 0; i < 200 && norm(at(hi)) < R; ++i) hi *= 2.0;
    if (norm(at(hi)) < R) return std::nullopt;
    double lo = 0.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (norm(at(mid)) >= R ? hi : lo) = mid;
    }
    return at(hi);
  };

  for (long trial = 0; trial < budget; ++trial) {
    std::vector<double> dir(d, 0.0), h(d, 0.0);
    const bool structured = trial % 2 == 0;
    if (structured) {
      const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(d) - 1));
      dir[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      std::size_t j = i;
      if (d > 1)
        while (j == i) j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(d) - 1));
      h[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.log_uniform(1e-6, 1.0);
    } else {
      for (auto& v : dir) v = rng.uniform(-1.0, 1.0);
      const double size = rng.log_uniform(1e-6, 1.0);
      for (auto& v : h) v = size * rng.uniform(-1.0, 1.0);
    }
    auto g = reach(dir);
    if (!g) continue;
    std::vector<double> f(d), sum(d);
    for (std::size_t k = 0; k < d; ++k) {
      f[k] = -(*g)[k] + h[k];
      sum[k] = f[k] + (*g)[k];
    }
    const double fn = norm(f), gn = norm(*g), sn = norm(sum);
    if (gn >= R && fn <= r && sn < eps_claimed) return SeparationCounterexample{f, *g, fn, gn, sn, trial};
  }
  return std::nullopt;
}

}  // namespace rlab
