#pragma once

// γ-disjoint superadditivity of Lambda spaces: the envelope criterion, the
// Lorentz–Zygmund parameter rule, and empirical constants over disjoint families.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"
#include "rlab/quasinorms.hpp"
#include "rlab/rearrangement.hpp"
#include "rlab/rng.hpp"
#include "rlab/weights.hpp"

namespace rlab {

/// K at which a bounded ratio F/h is no longer believed bounded.
inline constexpr double kSuperaddKMax = 1e6;

namespace detail {

/// Upper ends in u of the envelope grid rounds: t down to 1e-9·M, then far below.
inline double envelope_range(int round) {
  constexpr double far[] = {0.0, 1e6, 1e12};
  return round == 0 ? std::log(2e9) : far[round];
}

struct EnvelopeGrid {
  std::vector<double> u;      // descending t, ascending u
  std::vector<double> log_h;  // log(W(t) t^{-q/γ})
  std::vector<double> log_F;  // running sup over s ≤ t
};

inline EnvelopeGrid envelope_grid(const Weight& w, double q, double gamma, double u_lo, double u_hi, int n,
                                  const QuadratureConfig& cfg) {
  EnvelopeGrid g;
  const double log_2M = std::log(2 * w.total_mass());
  g.u = log_spaced(u_lo, u_hi, n);
  for (double u : g.u) g.log_h.push_back(w.log_primitive_u(u, cfg) - (q / gamma) * (log_2M - u));
  g.log_F.resize(g.u.size());
  double run = -kInf;
  for (std::size_t i = g.u.size(); i-- > 0;) {
    run = std::max(run, g.log_h[i]);
    g.log_F[i] = run;
  }
  return g;
}

}  // namespace detail

struct EnvelopeValue {
  double value = 0.0;
  bool finite = true;
};

/// F(t) = sup_{s ≤ t} W(s) s^{-q/γ}; reported non-finite when the last
/// refinement round still moves it by more than 1%.
inline EnvelopeValue monotone_envelope(const Weight& w, double q, double gamma, double t,
                                       const QuadratureConfig& cfg = {}) {
  require(t > 0 && t <= w.total_mass(), "envelope needs 0 < t ≤ M");
  require(q > 0 && gamma > 0, "q and γ must be positive");
  const double u_t = std::log(2 * w.total_mass() / t);
  double prev = 0.0, last = 0.0;
  for (int r = 0; r < 3; ++r) {
    const double hi = std::max(detail::envelope_range(r), u_t * 2);
    auto g = detail::envelope_grid(w, q, gamma, u_t, hi, 400 << r, cfg);
    prev = last;
    last = g.log_F.front();
    if (!std::isfinite(last)) continue;
    // polish the grid maximum between its neighbours
    const auto i = static_cast<std::size_t>(std::max_element(g.log_h.begin(), g.log_h.end()) - g.log_h.begin());
    const double a = g.u[i == 0 ? 0 : i - 1], b = g.u[std::min(i + 1, g.u.size() - 1)];
    const double log_2M = std::log(2 * w.total_mass());
    auto h = [&](double u) { return w.log_primitive_u(u, cfg) - (q / gamma) * (log_2M - u); };
    last = std::max(last, golden_section_maximize(h, a, b, 1e-12 * std::max(1.0, b)).second);
  }
  if (!std::isfinite(last) || std::abs(last - prev) > std::log(1.01)) return {kInf, false};
  return {std::exp(last), true};
}

/// V(t) = ∫_0^t F^{γ/q}, by the trapezoid rule on the envelope grid.
inline double envelope_primitive(const Weight& w, double q, double gamma, double t,
                                 const QuadratureConfig& cfg = {}) {
  require(t > 0 && t <= w.total_mass(), "V needs 0 < t ≤ M");
  const double log_2M = std::log(2 * w.total_mass());
  const double u_t = std::log(2 * w.total_mass() / t);
  auto g = detail::envelope_grid(w, q, gamma, u_t, std::max(200.0, 4 * u_t), 4000, cfg);
  // ∫ F^{γ/q} ds = ∫ F^{γ/q} s du with s = 2M e^{-u}.
  auto f = [&](std::size_t i) { return std::exp((gamma / q) * g.log_F[i] + log_2M - g.u[i]); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < g.u.size(); ++i) sum += 0.5 * (f(i) + f(i + 1)) * (g.u[i + 1] - g.u[i]);
  return sum;
}

enum class Verdict { yes, no, inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    default: return "inconclusive";
  }
}

struct SuperaddVerdict {
  Verdict superadditive = Verdict::inconclusive;
  double gamma = 0.0;
  std::string reason;
  std::optional<double> K;  // max of F / (W t^{-q/γ}) on the grid
  std::optional<std::pair<double, double>> equivalence_constants;  // (K₁, K₂)
};

/// γ-disjoint superadditivity of Λ^q_w: γ ≥ q and W(t) t^{-q/γ} equivalent to
/// a nondecreasing function, tested as boundedness of F / (W t^{-q/γ}).
inline SuperaddVerdict superadd_classify_lambda(const Weight& w, double q, double gamma,
                                                const QuadratureConfig& cfg = {}) {
  require(q > 0 && std::isfinite(q) && gamma > 0, "need finite q > 0 and γ > 0");
  require(!w.primitive_diverges(), "weight primitive diverges: the Lambda space is trivial");
  SuperaddVerdict v;
  v.gamma = gamma;
  if (gamma < q) {
    v.superadditive = Verdict::no;
    v.reason = "gamma < q";
    return v;
  }
  double K[3];
  for (int r = 0; r < 3; ++r) {
    auto g = detail::envelope_grid(w, q, gamma, std::log(2.0), detail::envelope_range(r), 400 << r, cfg);
    double m = 0.0;
    for (std::size_t i = 0; i < g.u.size(); ++i) m = std::max(m, g.log_F[i] - g.log_h[i]);
    K[r] = std::exp(m);
  }
  v.K = K[2];
  if (!(K[2] <= kSuperaddKMax)) {
    v.superadditive = Verdict::no;
    v.reason = "envelope ratio exceeds K_max";
  } else if (std::abs(K[2] - K[1]) <= 0.01 * K[1]) {
    v.superadditive = Verdict::yes;
    v.reason = "envelope ratio bounded";
    v.equivalence_constants = std::make_pair(1.0 / K[2], 1.0);
  } else {
    v.superadditive = Verdict::inconclusive;
    v.reason = "envelope ratio still growing under refinement";
  }
  return v;
}

/// Parameter rule for L^{p,q,α}: (p < q ≤ γ) or (q ≤ p < γ) or (q ≤ p = γ, α ≤ 0).
inline SuperaddVerdict superadd_classify_lz(double p, double q, double alpha, double gamma) {
  require(p > 0 && q > 0 && gamma > 0, "exponents must be positive");
  require(std::isfinite(q), "q must be finite");
  require(!is_infinite_parameter(p) || alpha + 1.0 / q < 0, "p = ∞ needs α + 1/q < 0");
  SuperaddVerdict v;
  v.gamma = gamma;
  const bool yes = (p < q && q <= gamma) || (q <= p && p < gamma) || (q <= p && p == gamma && alpha <= 0);
  v.superadditive = yes ? Verdict::yes : Verdict::no;
  v.reason = "parameter rule";
  return v;
}

/// k characteristic profiles of value 1 and mass t/k, to be placed disjointly.
inline std::vector<StepProfile> equal_split_family(double t, long k, double M) {
  require(k >= 1, "k must be at least 1");
  require(t > 0 && t <= M, "need 0 < t ≤ M");
  return std::vector<StepProfile>(static_cast<std::size_t>(k), StepProfile::characteristic(t / static_cast<double>(k), M));
}

struct GrowthRow {
  long k;
  double ratio;
};

struct EmpiricalSuperadd {
  double constant = 0.0;  // max ratio over every family tried
  std::vector<GrowthRow> growth;
};

/// Σ_j ‖f_j‖^γ / ‖Σ_j f_j‖^γ for a disjoint family.
inline double superadd_ratio(std::span<const StepProfile> family, const LambdaParams& params, double gamma,
                             const QuadratureConfig& cfg = {}) {
  std::map<std::pair<std::vector<double>, std::vector<double>>, double> memo;
  ExactSum num;
  for (const auto& f : family) {
    auto key = std::make_pair(f.breakpoints(), f.values());
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, std::pow(lambda_quasinorm(f, params, cfg).value, gamma)).first;
    num.add(it->second);
  }
  const double den = std::pow(lambda_quasinorm(disjoint_sum(family), params, cfg).value, gamma);
  return num.value() / den;
}

struct FamilySpec {
  long k_max_growth = 64;  // equal splits k = 2^j ≤ this for the growth table
  int random_families = 200;
};

/// Largest observed ratio over equal splits k = 1..64 at three masses and over
/// random disjoint families; the growth table follows k = 2^j at t = M/2.
inline EmpiricalSuperadd empirical_superadd_constant(const LambdaParams& params, double gamma,
                                                     const FamilySpec& spec, std::uint64_t seed,
                                                     const QuadratureConfig& cfg = {}) {
  const double M = params.total_mass();
  EmpiricalSuperadd out;
  for (double t : {M / 2, M / 8, M * 1e-3})
    for (long k = 1; k <= 64; ++k) {
      auto fam = equal_split_family(t, k, M);
      out.constant = std::max(out.constant, superadd_ratio(fam, params, gamma, cfg));
    }
  for (long k = 2; k <= spec.k_max_growth; k *= 2) {
    auto fam = equal_split_family(M / 2, k, M);
    const double ratio = superadd_ratio(fam, params, gamma, cfg);
    out.growth.push_back({k, ratio});
    out.constant = std::max(out.constant, ratio);
  }
  // Values and masses sit on a 2^-16 grid, so sums of products stay exact in double.
  auto dyadic = [](double x) { return std::max(std::round(x * 0x1.0p16), 1.0) * 0x1.0p-16; };
  auto dyadic_floor = [](double x) { return std::floor(x * 0x1.0p16) * 0x1.0p-16; };
  CounterRng rng(seed, 0x5a9e);
  for (int i = 0; i < spec.random_families; ++i) {
    const auto members = rng.integer(2, 6);
    std::vector<std::vector<Piece>> raw;
    double mass = 0.0;
    for (std::int64_t j = 0; j < members; ++j) {
      std::vector<Piece> pieces;
      for (std::int64_t m = rng.integer(1, 6); m > 0; --m) {
        pieces.push_back({dyadic(rng.log_uniform(1e-3, 1e3)), rng.uniform(0.05, 1.0)});
        mass += pieces.back().mass;
      }
      raw.push_back(std::move(pieces));
    }
    const double fill = rng.uniform(0.1, 1.0) * M / mass;
    std::vector<StepProfile> family;
    for (auto& pieces : raw) {
      for (auto& p : pieces) p.mass = M * std::max(dyadic_floor(p.mass * fill / M), 0x1.0p-16);
      family.push_back(rearrangement(SimpleFunction(pieces, M)));
    }
    out.constant = std::max(out.constant, superadd_ratio(family, params, gamma, cfg));
  }
  return out;
}

}  // namespace rlab
