#pragma once

// Weights w on (0, M) and their primitives W(t) = ∫_0^t w.
//
// Everything singular happens at t → 0, so the workhorse coordinate is
// u = log(2M/t) ∈ (log 2, ∞): a weight becomes the density
// w(t)·t du, and power-log weights become e^{-cu} u^β, which is smooth.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

/// w(t) = t^{q/p - 1} log(2M/t)^{αq}: the q-th power of the Lorentz–Zygmund
/// weight, so that the Lambda space with this weight is L^{p,q,α}.
struct PowerLog {
  double p = kInf;
  double q = 1.0;
  double alpha = 0.0;
  double M = 1.0;

  double power() const { return is_infinite_parameter(p) ? 0.0 : q / p; }  // c = q/p
  double log_power() const { return alpha * q; }                          // β = αq
};

/// Positive weight through (grid, values) with log–log linear interpolation;
/// the end segments extend as power laws.
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;
  double M = 1.0;
};

namespace detail {

/// ∫_0^Δ e^{-c s} (1 + s/u)^β ds, Δ possibly infinite.
inline QuadratureResult powerlog_kernel(double c, double beta, double u, double delta,
                                        const QuadratureConfig& cfg) {
  auto f = [&](double s) { return std::exp(-c * s + beta * std::log1p(s / u)); };
  if (std::isinf(delta)) {
    // σ = c s normalizes the exponential decay.
    auto g = [&](double sigma) { return std::exp(-sigma + beta * std::log1p(sigma / (c * u))); };
    auto r = integrate_to_infinity(g, 0.0, cfg);
    r.value /= c;
    r.abs_err /= c;
    return r;
  }
  if (c * delta <= 1.0) return integrate(f, 0.0, delta, cfg);
  // Geometric panels keep the quadrature from stepping over the decay near 0.
  QuadratureResult total;
  double lo = 0.0, hi = 1.0 / c;
  while (lo < delta) {
    hi = std::min(hi, delta);
    auto r = integrate(f, lo, hi, cfg);
    total.value += r.value;
    total.abs_err += r.abs_err;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
    lo = hi;
    hi *= 2.0;
  }
  return total;
}

}  // namespace detail

class Weight {
 public:
  Weight(PowerLog w) : rep_(w) {  // NOLINT(google-explicit-constructor)
    require(w.p > 0, "p must be positive");
    require(std::isfinite(w.q) && w.q > 0, "weight q must be finite and positive");
    require(std::isfinite(w.alpha), "alpha must be finite");
    require(std::isfinite(w.M) && w.M > 0, "M must be positive");
  }

  Weight(Tabulated w) : rep_(std::move(w)) {  // NOLINT(google-explicit-constructor)
    const auto& t = std::get<Tabulated>(rep_);
    require(!t.grid.empty() && t.grid.size() == t.values.size(),
            "tabulated weight needs matching, nonempty grid and values");
    require(std::isfinite(t.M) && t.M > 0, "M must be positive");
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      require(std::isfinite(t.grid[i]) && t.grid[i] > 0 && (i == 0 || t.grid[i] > t.grid[i - 1]),
              "tabulated grid must be positive and strictly increasing");
      require(std::isfinite(t.values[i]) && t.values[i] > 0, "tabulated values must be positive");
    }
    build_zones();
  }

  static Weight constant(double M, double c = 1.0) { return Tabulated{{M}, {c}, M}; }

  bool is_powerlog() const { return std::holds_alternative<PowerLog>(rep_); }
  const PowerLog* powerlog() const { return std::get_if<PowerLog>(&rep_); }
  const Tabulated* tabulated() const { return std::get_if<Tabulated>(&rep_); }

  double total_mass() const {
    return std::visit([](const auto& w) { return w.M; }, rep_);
  }

  /// True when the primitive is evaluated without quadrature.
  bool closed_form() const {
    if (auto pl = powerlog()) return is_infinite_parameter(pl->p) || pl->alpha == 0.0;
    return true;
  }

  /// W(0+) = ∞, i.e. the Lambda space contains only zero.
  bool primitive_diverges() const {
    if (auto pl = powerlog()) return is_infinite_parameter(pl->p) && pl->log_power() >= -1.0;
    return zones_.front().beta <= -1.0;
  }

  double value(double t) const {
    if (auto pl = powerlog())
      return std::pow(t, pl->power() - 1.0) * std::pow(std::log(2 * pl->M / t), pl->log_power());
    const auto& z = zone_for_log(std::log(t));
    return z.w * std::pow(t / z.t, z.beta);
  }

  /// log(w(t)·t) at t = 2M e^{-u}: the log-density of w dt against du.
  double log_density_u(double u) const {
    const double log_t = std::log(2 * total_mass()) - u;
    if (auto pl = powerlog()) {
      double out = pl->power() * log_t;
      if (pl->log_power() != 0.0) out += pl->log_power() * std::log(u);
      return out;
    }
    const auto& z = zone_for_log(log_t);
    return std::log(z.w) + z.beta * (log_t - std::log(z.t)) + log_t;
  }

  /// log w(t) at t = 2M e^{-u}.
  double log_value_u(double u) const { return log_density_u(u) - (std::log(2 * total_mass()) - u); }

  /// W(t) = ∫_0^t w; +∞ when the primitive diverges at 0.
  Quantity primitive(double t, const QuadratureConfig& cfg = {}) const {
    require(t > 0 && t <= total_mass() * (1 + kTolEq), "primitive needs 0 < t ≤ M");
    return integral(0.0, t, cfg);
  }

  /// log W at t = 2M e^{-u}, usable far below the smallest normal double in t.
  double log_primitive_u(double u, const QuadratureConfig& cfg = {}) const {
    const double log_t = std::log(2 * total_mass()) - u;
    if (auto pl = powerlog()) {
      const double c = pl->power(), beta = pl->log_power();
      if (is_infinite_parameter(pl->p)) {
        if (beta >= -1.0) return kInf;
        return (beta + 1.0) * std::log(u) - std::log(-beta - 1.0);
      }
      if (beta == 0.0) return c * log_t - std::log(c);
      auto k = detail::powerlog_kernel(c, beta, u, kInf, cfg);
      return c * log_t + beta * std::log(u) + std::log(k.value);
    }
    // Tabulated: below the first knot everything is one power law.
    const auto& z0 = zones_.front();
    if (log_t <= std::log(zones_[1].lo)) {
      const double e = z0.beta + 1.0;
      if (e <= 0) return kInf;
      return std::log(z0.w * z0.t) + e * (log_t - std::log(z0.t)) - std::log(e);
    }
    return std::log(integral(0.0, std::exp(log_t), cfg).value);
  }

  /// ∫_a^b w for 0 ≤ a ≤ b ≤ M, closed form where available.
  Quantity integral(double a, double b, const QuadratureConfig& cfg = {}) const {
    require(a >= 0 && a <= b, "integral bounds must satisfy 0 ≤ a ≤ b");
    Quantity out;
    if (a == b) return out;
    if (auto pl = powerlog()) {
      const double c = pl->power(), beta = pl->log_power(), M2 = 2 * pl->M;
      if (is_infinite_parameter(pl->p)) {
        if (beta >= -1.0) {
          out.value = a == 0.0 ? kInf : segment_log_power(beta, std::log(M2 / b), std::log(M2 / a));
          return out;
        }
        const double e = beta + 1.0;  // < 0
        const double lb = std::log(M2 / b);
        if (a == 0.0) {
          out.value = std::pow(lb, e) / -e;
        } else {
          const double la = std::log(M2 / a);
          out.value = std::pow(lb, e) * -std::expm1(e * std::log(la / lb)) / -e;
        }
        return out;
      }
      if (beta == 0.0 && c == 1.0) {
        out.value = b - a;
        return out;
      }
      if (beta == 0.0) {
        const double head = std::pow(b, c) / c;
        out.value = a == 0.0 ? head : head * -std::expm1(c * std::log(a / b));
        return out;
      }
      const double ub = std::log(M2 / b);
      const double delta = a == 0.0 ? kInf : std::log(b / a);
      auto k = detail::powerlog_kernel(c, beta, ub, delta, cfg);
      const double scale = std::exp(c * std::log(b) + beta * std::log(ub));
      out.value = scale * k.value;
      out.abs_err = scale * k.abs_err;
      out.method = Quantity::Method::quadrature;
      out.converged = k.converged;
      return out;
    }
    // Tabulated: exact power-law pieces.
    double sum = 0.0;
    for (const auto& z : zones_) {
      const double lo = std::max(a, z.lo), hi = std::min(b, z.hi);
      if (lo >= hi) continue;
      sum += power_segment(z, lo, hi);
    }
    out.value = sum;
    return out;
  }

  /// ∫_a^b w by adaptive quadrature on the u axis, whatever the weight.
  Quantity integral_by_quadrature(double a, double b, const QuadratureConfig& cfg = {}) const {
    require(a >= 0 && a < b, "integral bounds must satisfy 0 ≤ a < b");
    const double M2 = 2 * total_mass();
    const double ub = std::log(M2 / b);
    const double shift = log_density_u(ub);
    auto density = [&](double u) { return std::exp(log_density_u(u) - shift); };
    QuadratureResult r;
    if (a == 0.0) {
      r = integrate_to_infinity_log(density, ub, cfg);
    } else {
      const double ua = std::log(M2 / a);
      auto stretched = [&](double s) {
        const double u = ub * std::exp(s);
        return density(u) * u;
      };
      r = integrate(stretched, 0.0, std::log(ua / ub), cfg);
    }
    const double scale = std::exp(shift);
    return {r.value * scale, r.abs_err * scale, Quantity::Method::quadrature, r.converged};
  }

 private:
  struct Zone {
    double lo, hi;  // [lo, hi)
    double t, w;    // anchor point
    double beta;    // local power
  };

  static double segment_log_power(double beta, double lb, double la) {
    // ∫ u^β du over [lb, la] for β ≥ -1.
    if (beta == -1.0) return std::log(la / lb);
    const double e = beta + 1.0;
    return (std::pow(la, e) - std::pow(lb, e)) / e;
  }

  static double power_segment(const Zone& z, double lo, double hi) {
    if (z.beta == 0.0) return z.w * (hi - lo);
    if (z.beta == -1.0) return lo == 0.0 ? kInf : z.w * z.t * std::log(hi / lo);
    const double e = z.beta + 1.0;
    const double head = z.w * z.t * std::pow(hi / z.t, e) / e;
    if (lo == 0.0) return e > 0 ? head : kInf;
    return head * -std::expm1(e * std::log(lo / hi));
  }

  void build_zones() {
    const auto& tab = std::get<Tabulated>(rep_);
    const auto& g = tab.grid;
    const auto& v = tab.values;
    const std::size_t m = g.size();
    std::vector<double> betas;
    for (std::size_t i = 0; i + 1 < m; ++i)
      betas.push_back(std::log(v[i + 1] / v[i]) / std::log(g[i + 1] / g[i]));
    const double first = betas.empty() ? 0.0 : betas.front();
    const double last = betas.empty() ? 0.0 : betas.back();
    zones_.push_back({0.0, g[0], g[0], v[0], first});
    for (std::size_t i = 0; i + 1 < m; ++i) zones_.push_back({g[i], g[i + 1], g[i], v[i], betas[i]});
    zones_.push_back({g[m - 1], kInf, g[m - 1], v[m - 1], last});
  }

  const Zone& zone_for_log(double log_t) const {
    for (std::size_t i = 1; i < zones_.size(); ++i)
      if (log_t < std::log(zones_[i].lo)) return zones_[i - 1];
    return zones_.back();
  }

  std::variant<PowerLog, Tabulated> rep_;
  std::vector<Zone> zones_;
};

/// Parameters of a Lambda space Λ^q_w.
struct LambdaParams {
  double q;
  Weight weight;

  LambdaParams(double q_, Weight w) : q(q_), weight(std::move(w)) {
    require(std::isfinite(q) && q > 0, "Lambda space exponent q must be finite and positive");
    if (auto pl = weight.powerlog())
      require(std::abs(pl->q - q) <= kTolEq * q, "power-log weight was built for a different q");
  }

  double total_mass() const { return weight.total_mass(); }
};

}  // namespace rlab
