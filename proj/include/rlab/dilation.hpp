#pragma once

// The dilation family v_κ of a compactly supported radial profile, numeric
// checks of its two invariances, and the lower-bound certificate built on it.

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/quasinorms.hpp"
#include "rlab/radial.hpp"

namespace rlab {

/// log R_κ for R_κ = 2^{(κ−1)/(nκ)} (R̃/R)^{1/κ} R; R_κ itself underflows for small κ.
inline double log_support_radius(double kappa, double R_tilde, double R, int n) {
  require(kappa > 0 && kappa < 1, "κ must lie in (0, 1)");
  require(R_tilde > 0 && R_tilde < R, "need 0 < R̃ < R");
  require(n >= 1, "dimension must be positive");
  return (kappa - 1) / (n * kappa) * std::log(2.0) + std::log(R_tilde / R) / kappa + std::log(R);
}

inline double support_radius(double kappa, double R_tilde, double R, int n) {
  return std::exp(log_support_radius(kappa, R_tilde, R, n));
}

/// Largest κ (to 1e-12) with R_κ < target, by bisection. Since R_κ → R̃ as κ → 1,
/// every κ qualifies when target > R̃.
inline double kappa_threshold(double R_tilde, double R, int n, double target) {
  require(target > 0, "target radius must be positive");
  auto below = [&](double k) { return log_support_radius(k, R_tilde, R, n) < std::log(target); };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (below(hi)) return hi;
  if (!below(lo)) throw PreconditionError("no κ in (0, 1) brings the support below the target");
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// g(t) = κ^{−1+1/n} v*((2|B_R|)^{1−κ} t^κ), kept symbolic.
class DilatedProfile {
 public:
  DilatedProfile(RadialProfile base, const BallGeometry& geom, double kappa)
      : base_(std::move(base)), geom_(geom), kappa_(kappa) {
    require(kappa > 0 && kappa < 1, "κ must lie in (0, 1)");
    log_2B_ = std::log(2 * geom_.ball_measure());
    amplitude_ = std::pow(kappa_, -1.0 + 1.0 / geom_.n);
  }

  const RadialProfile& base() const { return base_; }
  const BallGeometry& geometry() const { return geom_; }
  double kappa() const { return kappa_; }

  /// log of the argument s fed to v* at t = e^{log_t}.
  double log_argument(double log_t) const { return (1 - kappa_) * log_2B_ + kappa_ * log_t; }
  double log_t_of_argument(double log_s) const { return (log_s - (1 - kappa_) * log_2B_) / kappa_; }

  double value_log(double log_t) const {
    const double s = std::exp(log_argument(log_t));
    return amplitude_ * base_(s);
  }

  double operator()(double t) const { return t <= 0 ? amplitude_ * base_(0.0) : value_log(std::log(t)); }

  /// t·g′(t) = κ^{1/n} s (v*)′(s); the derivative is taken on the right.
  double elasticity_log(double log_t) const {
    const double s = std::exp(log_argument(log_t));
    const auto& p = base_.profile();
    if (s >= p.nodes().back()) return 0.0;
    auto it = std::upper_bound(p.nodes().begin(), p.nodes().end(), s);
    const auto i = static_cast<std::size_t>(it - p.nodes().begin()) - 1;
    return -std::pow(kappa_, 1.0 / geom_.n) * s * p.piece_slope(i);
  }

  /// log of the measure of {g > 0}, located by bisection in log t on the evaluator.
  double measured_log_support_mass() const {
    double hi = std::log(geom_.ball_measure());
    if (value_log(hi) > 0) return hi;
    double lo = hi - 1.0;
    while (!(value_log(lo) > 0)) {
      lo = hi - 2 * (hi - lo);
      require(std::isfinite(lo), "dilated profile has no support");
    }
    for (int i = 0; i < 400; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (value_log(mid) > 0 ? lo : hi) = mid;
    }
    return hi;
  }

 private:
  RadialProfile base_;
  BallGeometry geom_;
  double kappa_;
  double log_2B_;
  double amplitude_;
};

inline DilatedProfile dilate(const RadialProfile& v, const BallGeometry& geom, double kappa) {
  return {v, geom, kappa};
}

/// ‖∇v_κ‖_{Lⁿ(B_R)} by quadrature in ℓ = log r: |∇v_κ(r)| = n |t g′(t)| / r with
/// t = ω_n rⁿ, so the integrand is n ω_n (n |t g′(t)|)ⁿ dℓ. The range is cut at
/// the images of the profile nodes, where the integrand jumps.
inline Quantity dilated_gradient_norm_numeric(const DilatedProfile& d, const QuadratureConfig& cfg = {}) {
  const auto& geom = d.geometry();
  const int n = geom.n;
  const double w = geom.omega_n();
  const double log_w = std::log(w);
  const double ell_top = (d.measured_log_support_mass() - log_w) / n;
  auto f = [&](double x) {  // x = ell_top − ℓ ≥ 0
    const double log_t = log_w + n * (ell_top - x);
    const double e = d.elasticity_log(log_t);
    return n * w * std::pow(n * std::abs(e), n);
  };
  std::vector<double> cuts{0.0};
  for (double node : d.base().profile().nodes()) {
    if (!(node > 0)) continue;
    const double x = ell_top - (d.log_t_of_argument(std::log(node)) - log_w) / n;
    if (x > 0 && std::isfinite(x)) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0, err = 0.0;
  bool converged = true;
  auto add = [&](const auto& r) {
    total += r.value;
    err += r.abs_err;
    converged = converged && r.converged;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add(integrate(f, cuts[i], cuts[i + 1], cfg));
  add(integrate_to_infinity(f, cuts.back(), cfg));
  Quantity out{std::pow(total, 1.0 / n), 0.0, Quantity::Method::quadrature, converged};
  out.abs_err = total > 0 ? out.value * err / (n * total) : 0.0;
  return out;
}

/// ‖v_κ‖ in L^{∞,q,α}(B_R), α = −1 + 1/n − 1/q, straight from the evaluator:
/// for q < ∞ the integral of g^q u^{αq} du with u = log(2|B_R|/t), for q = ∞ the
/// sup of g·u^α by dense sampling in log u plus golden-section polishing.
inline Quantity dilated_lz_quasinorm_numeric(const DilatedProfile& d, double q, const QuadratureConfig& cfg = {}) {
  const auto& geom = d.geometry();
  const int n = geom.n;
  require(q >= n, "target exponent q must be at least n");
  const double log_2B = std::log(2 * geom.ball_measure());
  const double u_supp = log_2B - d.measured_log_support_mass();
  const double alpha = -1.0 + 1.0 / n - (is_infinite_parameter(q) ? 0.0 : 1.0 / q);
  auto g_at_u = [&](double u) { return d.value_log(log_2B - u); };

  if (!is_infinite_parameter(q)) {
    auto f = [&](double u) {
      const double g = g_at_u(u);
      if (g <= 0) return 0.0;
      return std::exp(q * std::log(g) + alpha * q * std::log(u));
    };
    auto r = integrate_to_infinity_log(f, u_supp, cfg);
    Quantity out{std::pow(r.value, 1.0 / q), 0.0, Quantity::Method::quadrature, r.converged};
    out.abs_err = r.value > 0 ? out.value * r.abs_err / (q * r.value) : 0.0;
    return out;
  }

  auto log_h = [&](double x) {  // x = log u
    const double g = g_at_u(std::exp(x));
    return g > 0 ? std::log(g) + alpha * x : -kInf;
  };
  const double g_max = d(0.0);
  if (g_max <= 0) return {0.0, 0.0, Quantity::Method::quadrature, true};
  // Past U the bound g_max·U^α cannot beat what the samples already found.
  const int samples = 4096;
  double x_lo = std::log(u_supp), x_hi = x_lo + 1.0;
  std::vector<double> xs, hs;
  for (int round = 0; round < 64; ++round) {
    xs.clear();
    hs.clear();
    for (int i = 0; i <= samples; ++i) {
      xs.push_back(x_lo + (x_hi - x_lo) * i / samples);
      hs.push_back(log_h(xs.back()));
    }
    const double best = *std::max_element(hs.begin(), hs.end());
    if (std::log(g_max) + alpha * x_hi < best - 1e-12) break;
    x_hi = x_lo + 2 * (x_hi - x_lo);
  }
  std::vector<int> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::partial_sort(order.begin(), order.begin() + 3, order.end(), [&](int a, int b) { return hs[a] > hs[b]; });
  double best = hs[static_cast<std::size_t>(order[0])];
  for (int k = 0; k < 3; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    const double a = xs[static_cast<std::size_t>(std::max(i - 1, 0))];
    const double b = xs[static_cast<std::size_t>(std::min(i + 1, samples))];
    best = std::max(best, golden_section_maximize(log_h, a, b, 1e-15).second);
  }
  return {std::exp(best), 0.0, Quantity::Method::quadrature, true};
}

struct InvarianceRow {
  double kappa = 0.0;
  double R_kappa = 0.0;
  double log_R_kappa = 0.0;
  double grad_rel_err = 0.0;
  double qnorm_rel_err = 0.0;
  double qnorm_value = 0.0;
  double support_mass = 0.0;      // measured, may underflow to 0
  double log_support_mass = 0.0;  // measured
};

/// Runs f(i) for i in [0, count) on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, F&& f) {
  std::vector<T> out(count);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      for (std::size_t i = j; i < count; i += jobs) {
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Both invariances and the support law for every κ.
inline std::vector<InvarianceRow> invariance_report(const RadialProfile& v, const BallGeometry& geom, double q,
                                                    const std::vector<double>& kappas,
                                                    const QuadratureConfig& cfg = {}, unsigned jobs = 1) {
  for (double k : kappas) require(k > 0 && k < 1, "every κ must lie in (0, 1)");
  const int n = geom.n;
  const double alpha = -1.0 + 1.0 / n - (is_infinite_parameter(q) ? 0.0 : 1.0 / q);
  const double grad = gradient_n_norm(v, geom);
  const double base_q = lz_quasinorm(v.profile(), kInf, q, alpha, cfg).value;
  const double R_tilde = geom.radius_of_mass(v.support_mass());
  return parallel_map<InvarianceRow>(kappas.size(), jobs, [&](std::size_t i) {
    const double kappa = kappas[i];
    const DilatedProfile d(v, geom, kappa);
    InvarianceRow row;
    row.kappa = kappa;
    row.log_R_kappa = log_support_radius(kappa, R_tilde, geom.R, n);
    row.R_kappa = std::exp(row.log_R_kappa);
    row.grad_rel_err = relative_error(dilated_gradient_norm_numeric(d, cfg).value, grad);
    row.qnorm_value = dilated_lz_quasinorm_numeric(d, q, cfg).value;
    row.qnorm_rel_err = relative_error(row.qnorm_value, base_q);
    row.log_support_mass = d.measured_log_support_mass();
    row.support_mass = std::exp(row.log_support_mass);
    return row;
  });
}

struct NoncompactnessCertificate {
  double lambda = 0.0;
  double gradient_norm = 0.0;
  double base_quasinorm = 0.0;
  std::vector<double> kappas;
  std::vector<double> log_support_radii;
  std::vector<double> support_radii;
  std::vector<double> quasinorms;
  double kappa0 = 0.0;
  bool conditions_met = false;
};

struct CertificateOptions {
  double support_threshold_rel = 1e-6;  // last R_κ must be ≤ this times R
  unsigned jobs = 1;
};

/// Witness sequence v_{κ_j} for β ≥ λ: inside the unit ball of the gradient
/// norm, supports shrinking to a point, every quasinorm at least λ.
inline NoncompactnessCertificate noncompactness_certificate(const RadialProfile& v, const BallGeometry& geom,
                                                            double q, const std::vector<double>& kappas,
                                                            double lambda, const QuadratureConfig& cfg = {},
                                                            const CertificateOptions& opt = {}) {
  require(lambda > 0, "λ must be positive");
  require(!kappas.empty(), "κ sequence must not be empty");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    require(kappas[i] > 0 && kappas[i] < 1, "every κ must lie in (0, 1)");
    require(i == 0 || kappas[i] < kappas[i - 1], "κ sequence must be strictly decreasing");
  }
  if (v.embedded_steps())
    throw MembershipViolation("profile built from a step function has no admissible gradient");
  NoncompactnessCertificate cert;
  cert.lambda = lambda;
  cert.kappas = kappas;
  cert.gradient_norm = gradient_n_norm(v, geom);
  if (cert.gradient_norm > 1 + 1e-9)
    throw MembershipViolation("gradient norm " + format_double(cert.gradient_norm) + " exceeds 1");
  const int n = geom.n;
  const double alpha = -1.0 + 1.0 / n - (is_infinite_parameter(q) ? 0.0 : 1.0 / q);
  cert.base_quasinorm = lz_quasinorm(v.profile(), kInf, q, alpha, cfg).value;
  const double R_tilde = geom.radius_of_mass(v.support_mass());
  cert.kappa0 = kappa_threshold(R_tilde, geom.R, n, geom.R);

  cert.quasinorms = parallel_map<double>(kappas.size(), opt.jobs, [&](std::size_t i) {
    return dilated_lz_quasinorm_numeric(DilatedProfile(v, geom, kappas[i]), q, cfg).value;
  });
  bool shrinking = true;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (kappas[i] > cert.kappa0) shrinking = false;
    cert.log_support_radii.push_back(log_support_radius(kappas[i], R_tilde, geom.R, n));
    cert.support_radii.push_back(std::exp(cert.log_support_radii.back()));
    if (i > 0 && !(cert.log_support_radii[i] < cert.log_support_radii[i - 1])) shrinking = false;
  }
  if (!(cert.log_support_radii.back() <= std::log(opt.support_threshold_rel * geom.R))) shrinking = false;
  for (std::size_t i = 0; i < kappas.size(); ++i)
    if (cert.quasinorms[i] < lambda - 1e-8)
      throw QuasinormBelowLambda("dilated quasinorm " + format_double(cert.quasinorms[i]) + " at κ = " +
                                     format_double(kappas[i]) + " is below λ = " + format_double(lambda),
                                 kappas[i], cert.quasinorms[i]);
  cert.conditions_met = shrinking;
  return cert;
}

}  // namespace rlab
