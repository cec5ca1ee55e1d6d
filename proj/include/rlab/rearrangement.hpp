#pragma once

// Simple functions on a nonatomic measure space of finite mass, their
// distribution functions and nonincreasing rearrangements. Mass sums are
// correctly rounded, so results do not depend on piece order.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"

namespace rlab {

struct Piece {
  double value = 0.0;
  double mass = 0.0;
  bool operator==(const Piece&) const = default;
};

/// |f| given as finitely many (value, mass) pieces; piece order carries no meaning.
class SimpleFunction {
 public:
  SimpleFunction(std::vector<Piece> pieces, double total_mass)
      : pieces_(std::move(pieces)), total_mass_(total_mass) {
    require(std::isfinite(total_mass_) && total_mass_ > 0, "total mass must be positive and finite");
    ExactSum sum;
    for (const auto& p : pieces_) {
      require(std::isfinite(p.value) && p.value >= 0, "piece values must be finite and nonnegative");
      require(std::isfinite(p.mass) && p.mass > 0, "piece masses must be positive");
      sum.add(p.mass);
    }
    if (sum.value() > total_mass_ * (1 + kTolEq))
      throw SupportOverflow("sum of piece masses exceeds the total mass");
  }

  static SimpleFunction zero(double total_mass) { return SimpleFunction({}, total_mass); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  double total_mass() const { return total_mass_; }

  SimpleFunction scaled(double c) const {
    require(c >= 0, "scale factor must be nonnegative");
    auto copy = pieces_;
    for (auto& p : copy) p.value *= c;
    return {std::move(copy), total_mass_};
  }

 private:
  std::vector<Piece> pieces_;
  double total_mass_;
};

/// Nonincreasing right-continuous step function on (0, M): value a_i on
/// [t_{i-1}, t_i) with t_0 = 0, and zero from t_k on. Only t_1..t_k are stored.
class StepProfile {
 public:
  StepProfile(std::vector<double> breakpoints, std::vector<double> values, double total_mass)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)), total_mass_(total_mass) {
    require(std::isfinite(total_mass_) && total_mass_ > 0, "total mass must be positive and finite");
    require(breakpoints_.size() == values_.size(), "breakpoints and values differ in length");
    double prev_t = 0.0;
    double prev_v = kInf;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      require(std::isfinite(breakpoints_[i]) && breakpoints_[i] > prev_t,
              "breakpoints must be strictly increasing and positive");
      require(std::isfinite(values_[i]) && values_[i] >= 0 && values_[i] <= prev_v,
              "profile values must be finite, nonnegative and nonincreasing");
      prev_t = breakpoints_[i];
      prev_v = values_[i];
    }
    if (prev_t > total_mass_ * (1 + kTolEq))
      throw SupportOverflow("profile support exceeds the total mass");
  }

  static StepProfile zero(double total_mass) { return StepProfile({}, {}, total_mass); }

  /// Characteristic profile: value c on [0, mass).
  static StepProfile characteristic(double mass, double total_mass, double c = 1.0) {
    return StepProfile({mass}, {c}, total_mass);
  }

  double operator()(double t) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it == breakpoints_.end()) return 0.0;
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
  }

  /// μ{f* > λ}, which equals the distribution function of every f with this rearrangement.
  double distribution(double lambda) const {
    auto count = std::count_if(values_.begin(), values_.end(), [&](double v) { return v > lambda; });
    return count == 0 ? 0.0 : breakpoints_[static_cast<std::size_t>(count - 1)];
  }

  /// (value, width) of every step, left to right.
  std::vector<Piece> pieces() const {
    std::vector<Piece> out;
    out.reserve(values_.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      out.push_back({values_[i], breakpoints_[i] - prev});
      prev = breakpoints_[i];
    }
    return out;
  }

  StepProfile scaled(double c) const {
    require(c >= 0, "scale factor must be nonnegative");
    auto v = values_;
    for (auto& x : v) x *= c;
    return {breakpoints_, std::move(v), total_mass_};
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double total_mass() const { return total_mass_; }
  double support_mass() const {
    for (std::size_t i = values_.size(); i-- > 0;)
      if (values_[i] > 0) return breakpoints_[i];
    return 0.0;
  }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  bool operator==(const StepProfile&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double total_mass_;
};

/// Continuous nonincreasing piecewise-linear function on (0, M) through the
/// nodes (t_0 = 0, v_0), …, (t_k, v_k); zero beyond t_k.
class LinearProfile {
 public:
  LinearProfile(std::vector<double> nodes, std::vector<double> values, double total_mass)
      : nodes_(std::move(nodes)), values_(std::move(values)), total_mass_(total_mass) {
    require(std::isfinite(total_mass_) && total_mass_ > 0, "total mass must be positive and finite");
    require(nodes_.size() == values_.size() && nodes_.size() >= 2,
            "linear profile needs at least two nodes with matching values");
    require(nodes_.front() == 0.0, "linear profile nodes must start at 0");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      require(std::isfinite(values_[i]) && values_[i] >= 0, "profile values must be finite and nonnegative");
      if (i == 0) continue;
      require(std::isfinite(nodes_[i]) && nodes_[i] > nodes_[i - 1], "nodes must be strictly increasing");
      require(values_[i] <= values_[i - 1], "profile values must be nonincreasing");
    }
    if (nodes_.back() > total_mass_ * (1 + kTolEq))
      throw SupportOverflow("profile support exceeds the total mass");
  }

  static LinearProfile zero(double total_mass) { return {{0.0, total_mass}, {0.0, 0.0}, total_mass}; }

  double operator()(double t) const {
    if (t >= nodes_.back()) return t == nodes_.back() ? values_.back() : 0.0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    return piece_value(i - 1, t);
  }

  /// Value on piece i (between nodes i and i+1) by two-sided interpolation.
  double piece_value(std::size_t i, double t) const {
    const double a = nodes_[i], b = nodes_[i + 1];
    return (values_[i] * (b - t) + values_[i + 1] * (t - a)) / (b - a);
  }

  /// -v' on piece i.
  double piece_slope(std::size_t i) const {
    return (values_[i] - values_[i + 1]) / (nodes_[i + 1] - nodes_[i]);
  }

  std::size_t pieces() const { return nodes_.size() - 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  double total_mass() const { return total_mass_; }

  double support_mass() const {
    if (values_.back() > 0) return nodes_.back();
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == 0.0) return nodes_[i];
    return nodes_.back();
  }

  LinearProfile scaled(double c) const {
    require(c >= 0, "scale factor must be nonnegative");
    auto v = values_;
    for (auto& x : v) x *= c;
    return {nodes_, std::move(v), total_mass_};
  }

  bool operator==(const LinearProfile&) const = default;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  double total_mass_;
};

/// μ{|f| > λ}.
inline double distribution_function(const SimpleFunction& f, double lambda) {
  require(lambda > 0, "distribution function needs λ > 0");
  ExactSum mass;
  for (const auto& p : f.pieces())
    if (p.value > lambda) mass.add(p.mass);
  return mass.value();
}

namespace detail {

inline StepProfile sort_and_accumulate(std::vector<Piece> pieces, double total_mass) {
  std::erase_if(pieces, [](const Piece& p) { return p.value <= 0.0; });
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.value > b.value; });
  std::vector<double> breakpoints, values;
  ExactSum acc;
  for (const auto& p : pieces) {
    acc.add(p.mass);
    const double t = acc.value();
    if (!values.empty() && values.back() == p.value) {
      breakpoints.back() = t;
    } else {
      breakpoints.push_back(t);
      values.push_back(p.value);
    }
  }
  return {std::move(breakpoints), std::move(values), total_mass};
}

}  // namespace detail

/// Nonincreasing rearrangement f*: pieces sorted by value, equal values merged.
inline StepProfile rearrangement(const SimpleFunction& f) {
  return detail::sort_and_accumulate(f.pieces(), f.total_mass());
}

/// f*(t) straight from the definition inf{λ > 0 : f_*(λ) ≤ t}; quadratic in the
/// number of pieces. Serves as an independent check on rearrangement().
inline double rearrangement_point_oracle(const SimpleFunction& f, double t) {
  require(t > 0, "rearrangement oracle needs t > 0");
  auto mass_above = [&](double c) {
    ExactSum m;
    for (const auto& p : f.pieces())
      if (p.value > c) m.add(p.mass);
    return m.value();
  };
  double best = kInf;
  if (mass_above(0.0) <= t) return 0.0;
  for (const auto& candidate : f.pieces())
    if (candidate.value > 0 && candidate.value < best && mass_above(candidate.value) <= t)
      best = candidate.value;
  return best;
}

/// Rearrangement of a sum of disjointly supported functions: its distribution
/// function is the sum of the inputs' distribution functions.
inline StepProfile disjoint_sum(std::span<const StepProfile> profiles) {
  require(!profiles.empty(), "disjoint_sum needs at least one profile");
  const double total_mass = profiles.front().total_mass();
  std::vector<Piece> pieces;
  double support = 0.0;
  for (const auto& p : profiles) {
    require(p.total_mass() == total_mass, "profiles must share the total mass");
    support += p.support_mass();
    for (const auto& piece : p.pieces())
      if (piece.value > 0) pieces.push_back(piece);
  }
  if (support > total_mass * (1 + kTolEq))
    throw SupportOverflow("supports cannot be disjoint: their measures add up to more than M");
  return detail::sort_and_accumulate(std::move(pieces), total_mass);
}

/// One cell of a common refinement of two signed simple functions.
struct OverlayCell {
  double f_value = 0.0;
  double g_value = 0.0;
  double mass = 0.0;
};

/// Two signed simple functions on one explicit partition, so f + g is well defined.
class Overlay {
 public:
  Overlay(std::vector<OverlayCell> cells, double total_mass)
      : cells_(std::move(cells)), total_mass_(total_mass) {
    require(total_mass_ > 0, "total mass must be positive");
    double sum = 0.0;
    for (const auto& c : cells_) {
      if (!(c.mass > 0) || !std::isfinite(c.f_value) || !std::isfinite(c.g_value))
        throw IncompatiblePartition("overlay cells need positive masses and finite values");
      sum += c.mass;
    }
    if (sum > total_mass_ * (1 + kTolEq))
      throw IncompatiblePartition("overlay cells exceed the total mass");
  }

  SimpleFunction first() const { return marginal([](const OverlayCell& c) { return c.f_value; }); }
  SimpleFunction second() const { return marginal([](const OverlayCell& c) { return c.g_value; }); }
  SimpleFunction sum() const {
    return marginal([](const OverlayCell& c) { return c.f_value + c.g_value; });
  }

  const std::vector<OverlayCell>& cells() const { return cells_; }
  double total_mass() const { return total_mass_; }

 private:
  template <class Get>
  SimpleFunction marginal(Get get) const {
    std::vector<Piece> pieces;
    pieces.reserve(cells_.size());
    for (const auto& c : cells_) pieces.push_back({std::abs(get(c)), c.mass});
    return {std::move(pieces), total_mass_};
  }

  std::vector<OverlayCell> cells_;
  double total_mass_;
};

/// (f+g)*(s+t) ≤ f*(s) + g*(t), up to kTolEq.
inline bool subadditivity_check(const Overlay& overlay, double s, double t) {
  require(s > 0 && t > 0, "subadditivity check needs s, t > 0");
  const auto f = rearrangement(overlay.first());
  const auto g = rearrangement(overlay.second());
  const auto sum = rearrangement(overlay.sum());
  return sum(s + t) <= f(s) + g(t) + kTolEq;
}

/// Same inequality, after checking that the overlay really refines f and g.
inline bool subadditivity_check(const SimpleFunction& f, const SimpleFunction& g,
                                const Overlay& overlay, double s, double t) {
  auto same = [](const StepProfile& a, const StepProfile& b) {
    if (a.size() != b.size() || std::abs(a.total_mass() - b.total_mass()) > kTolEq) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a.values()[i] - b.values()[i]) > kTolEq * std::max(1.0, a.values()[i]))
        return false;
      if (std::abs(a.breakpoints()[i] - b.breakpoints()[i]) > kTolEq * a.total_mass())
        return false;
    }
    return true;
  };
  if (!same(rearrangement(f), rearrangement(overlay.first())) ||
      !same(rearrangement(g), rearrangement(overlay.second())))
    throw IncompatiblePartition("overlay marginals are not equimeasurable with f and g");
  return subadditivity_check(overlay, s, t);
}

}  // namespace rlab
