#pragma once

// Radial profiles on a ball B_R ⊂ ℝⁿ written in the measure variable
// t = ω_n |x|ⁿ, and the Lⁿ norm of their gradients.

#include <cmath>
#include <numbers>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/rearrangement.hpp"

namespace rlab {

/// Volume of the unit ball in ℝⁿ: π^k/k! for n = 2k, Γ otherwise.
inline double unit_ball_volume(int n) {
  require(n >= 1, "dimension must be positive");
  if (n % 2 == 0) {
    double v = 1.0;
    for (int k = 1; k <= n / 2; ++k) v *= std::numbers::pi / k;
    return v;
  }
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

struct BallGeometry {
  int n;
  double R;

  BallGeometry(int n_, double R_) : n(n_), R(R_) {
    require(n >= 2, "dimension must be at least 2");
    require(std::isfinite(R) && R > 0, "ball radius must be positive");
  }

  double omega_n() const { return unit_ball_volume(n); }
  double ball_measure() const { return omega_n() * std::pow(R, n); }
  /// Radius of the centered ball of measure t.
  double radius_of_mass(double t) const { return std::pow(t / omega_n(), 1.0 / n); }
};

/// v* on [0, |B_R|] for a radial function v(x) = v*(ω_n |x|ⁿ) supported in a
/// smaller concentric ball.
class RadialProfile {
 public:
  RadialProfile(LinearProfile profile, const BallGeometry& geom, bool embedded_steps = false)
      : profile_(std::move(profile)), embedded_steps_(embedded_steps) {
    const double M = geom.ball_measure();
    require(std::abs(profile_.total_mass() - M) <= kTolEq * M, "profile mass must equal the ball measure");
    require(profile_.values().back() == 0.0, "radial profile must vanish at its last node");
    if (!(profile_.support_mass() < M)) throw SupportOverflow("radial profile must be supported in a smaller ball");
  }

  const LinearProfile& profile() const { return profile_; }
  double operator()(double t) const { return profile_(t); }
  double support_mass() const { return profile_.support_mass(); }
  double total_mass() const { return profile_.total_mass(); }
  /// Built from a step function; the ramps at the jumps make the gradient huge.
  bool embedded_steps() const { return embedded_steps_; }

  RadialProfile scaled(double c, const BallGeometry& geom) const {
    return {profile_.scaled(c), geom, embedded_steps_};
  }

 private:
  LinearProfile profile_;
  bool embedded_steps_;
};

/// ‖∇v‖_{Lⁿ} in closed form: a piece of slope −c between masses a < b
/// contributes cⁿ n^{n−1} ω_n (bⁿ − aⁿ) to ‖∇v‖ⁿ.
inline double gradient_n_norm(const RadialProfile& v, const BallGeometry& geom) {
  const auto& p = v.profile();
  const int n = geom.n;
  const double w = geom.omega_n();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    const double c = p.piece_slope(i);
    if (c == 0.0) continue;
    const double a = p.nodes()[i], b = p.nodes()[i + 1];
    sum += std::pow(c, n) * std::pow(n, n - 1) * w * (std::pow(b, n) - std::pow(a, n));
  }
  return std::pow(sum, 1.0 / n);
}

/// Same norm by adaptive quadrature of |∇v(r)|ⁿ n ω_n r^{n−1} dr over each
/// piece's annulus, with |∇v(r)| = −(v*)′(ω_n rⁿ) n ω_n r^{n−1}.
inline Quantity gradient_n_norm_quadrature(const RadialProfile& v, const BallGeometry& geom,
                                           const QuadratureConfig& cfg = {}) {
  const auto& p = v.profile();
  const int n = geom.n;
  const double w = geom.omega_n();
  Quantity sum;
  sum.method = Quantity::Method::quadrature;
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    const double c = p.piece_slope(i);
    if (c == 0.0) continue;
    const double r0 = geom.radius_of_mass(p.nodes()[i]), r1 = geom.radius_of_mass(p.nodes()[i + 1]);
    auto f = [&](double r) {
      const double grad = c * n * w * std::pow(r, n - 1);
      return std::pow(grad, n) * n * w * std::pow(r, n - 1);
    };
    auto res = integrate(f, r0, r1, cfg);
    sum.value += res.value;
    sum.abs_err += res.abs_err;
    sum.converged = sum.converged && res.converged;
  }
  const double norm = std::pow(sum.value, 1.0 / n);
  sum.abs_err = sum.value > 0 ? norm * sum.abs_err / (n * sum.value) : 0.0;
  sum.value = norm;
  return sum;
}

/// u★ for a simple function: its rearrangement read in the measure variable,
/// with each jump replaced by a linear ramp of width δ = min(1e-9·M, half the
/// narrowest step).
inline RadialProfile spherical_rearrangement(const SimpleFunction& f, const BallGeometry& geom) {
  const double M = geom.ball_measure();
  double mass = 0.0;
  for (const auto& p : f.pieces()) mass += p.mass;
  if (mass > M * (1 + kTolEq)) throw SupportOverflow("function mass exceeds the ball measure");
  const auto star = rearrangement(SimpleFunction(f.pieces(), M));
  if (star.empty()) return {LinearProfile::zero(M), geom};
  double delta = 1e-9 * M;
  for (const auto& piece : star.pieces()) delta = std::min(delta, 0.5 * piece.mass);
  if (!(star.support_mass() + delta < M)) throw SupportOverflow("no room for the ramp inside the ball");

  std::vector<double> t{0.0}, v{star.values()[0]};
  const auto& bp = star.breakpoints();
  const auto& vals = star.values();
  for (std::size_t i = 0; i < star.size(); ++i) {
    const double next = i + 1 < star.size() ? vals[i + 1] : 0.0;
    t.push_back(bp[i]);
    v.push_back(vals[i]);
    t.push_back(bp[i] + delta);
    v.push_back(next);
  }
  // A step of width δ would collapse its plateau onto the ramp; keep nodes strict.
  std::vector<double> tt{t[0]}, vv{v[0]};
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] > tt.back()) {
      tt.push_back(t[i]);
      vv.push_back(v[i]);
    } else {
      vv.back() = std::min(vv.back(), v[i]);
    }
  }
  return {LinearProfile(std::move(tt), std::move(vv), M), geom, true};
}

/// v*(t) = h·(1 − t/M̃)₊ with M̃ = fraction·|B_R|; normalized to ‖∇v‖ = 1 on request.
inline RadialProfile tent_profile(const BallGeometry& geom, double support_fraction, double height = 1.0,
                                  bool normalize = false) {
  require(support_fraction > 0 && support_fraction < 1, "support fraction must lie in (0, 1)");
  require(height > 0, "height must be positive");
  const double M = geom.ball_measure();
  RadialProfile v(LinearProfile({0.0, support_fraction * M}, {height, 0.0}, M), geom);
  if (!normalize) return v;
  return v.scaled(1.0 / gradient_n_norm(v, geom), geom);
}

/// Piecewise-linear interpolant of min(1, log(M̃/t)/L): flat up to M̃e^{−L},
/// then nodes M̃e^{−L(1−j/N)} carrying 1 − j/N.
inline RadialProfile moser_profile(const BallGeometry& geom, double support_fraction, double L, int nodes,
                                   bool normalize = false) {
  require(support_fraction > 0 && support_fraction < 1, "support fraction must lie in (0, 1)");
  require(L > 0 && nodes >= 1, "need L > 0 and at least one node");
  const double M = geom.ball_measure();
  const double Mt = support_fraction * M;
  std::vector<double> t{0.0}, v{1.0};
  for (int j = 0; j <= nodes; ++j) {
    t.push_back(j == nodes ? Mt : Mt * std::exp(-L * (1.0 - static_cast<double>(j) / nodes)));
    v.push_back(1.0 - static_cast<double>(j) / nodes);
  }
  RadialProfile prof(LinearProfile(std::move(t), std::move(v), M), geom);
  if (!normalize) return prof;
  return prof.scaled(1.0 / gradient_n_norm(prof, geom), geom);
}

}  // namespace rlab
