#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Comparison slack for operations that are exact up to roundoff.
inline constexpr double kTolEq = 1e-12;

/// A computed scalar together with how it was obtained.
struct Quantity {
  double value = 0.0;
  double abs_err = 0.0;
  enum class Method { closed_form, quadrature } method = Method::closed_form;
  bool converged = true;
};

inline std::string_view method_name(Quantity::Method m) {
  return m == Quantity::Method::closed_form ? "closed_form" : "quadrature";
}

/// Shortest decimal that round-trips to the same double; "inf"/"-inf"/"nan" otherwise.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

inline bool is_infinite_parameter(double p) { return std::isinf(p) && p > 0; }

inline double relative_error(double value, double reference) {
  if (reference == 0.0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Correctly rounded running sum (Shewchuk's nonoverlapping partials with
/// round-half-even on readout). The result does not depend on summation order.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (std::size_t j = 0; j < partials_.size(); ++j) {
      double y = partials_[j];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n], lo = 0.0;
    while (n > 0) {
      const double x = hi, y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
      const double y = lo * 2, x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

/// Golden-section maximization of f on [a, b]; returns (argmax, max).
/// f is assumed unimodal on the bracket. Stops when the bracket is narrower than
/// x_tol (absolute) or after max_iter steps.
template <class F>
std::pair<double, double> golden_section_maximize(F&& f, double a, double b, double x_tol,
                                                  int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && std::abs(b - a) > x_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // The endpoints are candidates too: the maximum may sit on the bracket boundary.
  double best_x = fc >= fd ? c : d;
  double best_f = std::max(fc, fd);
  for (double x : {a, b}) {
    double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return {best_x, best_f};
}

/// Bisection for a sign change of f on [a, b] (f(a), f(b) of opposite sign or zero).
template <class F>
double bisect_root(F&& f, double a, double b, int max_iter = 200) {
  double fa = f(a);
  for (int i = 0; i < max_iter; ++i) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace rlab
