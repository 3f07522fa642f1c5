#pragma once

// Truncated power series c_0 + c_1 z + ... + c_{N-1} z^{N-1} with complex
// coefficients, and the algebra the operator modules are built on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wcop/error.hpp"

namespace wcop {

template <typename Real = double>
class BasicSeries {
 public:
  using real_type = Real;
  using value_type = std::complex<Real>;

  /// The zero series of the given order.
  explicit BasicSeries(std::size_t order) : c_(order) {
    if (order == 0) throw Error(Errc::InvalidArgument, "series order must be at least 1");
  }

  explicit BasicSeries(std::vector<value_type> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw Error(Errc::InvalidArgument, "series order must be at least 1");
    for (std::size_t n = 0; n < c_.size(); ++n) {
      if (!std::isfinite(c_[n].real()) || !std::isfinite(c_[n].imag()))
        throw Error(Errc::NonFinite, "coefficient " + std::to_string(n) + " is not finite",
                    static_cast<std::int64_t>(n));
    }
  }

  BasicSeries(std::initializer_list<value_type> coeffs)
      : BasicSeries(std::vector<value_type>(coeffs)) {}

  static BasicSeries constant(value_type c, std::size_t order) {
    std::vector<value_type> v(order);
    if (order) v[0] = c;
    return BasicSeries(std::move(v));
  }

  static BasicSeries monomial(std::size_t k, std::size_t order, value_type c = value_type(1)) {
    std::vector<value_type> v(order);
    if (k < order) v[k] = c;
    return BasicSeries(std::move(v));
  }

  std::size_t order() const noexcept { return c_.size(); }
  const value_type& operator[](std::size_t n) const { return c_[n]; }
  std::span<const value_type> coeffs() const noexcept { return c_; }

  /// Drops coefficients beyond `order` or zero-pads up to it.
  BasicSeries truncated(std::size_t order) const {
    std::vector<value_type> v(order);
    std::copy_n(c_.begin(), std::min(order, c_.size()), v.begin());
    return BasicSeries(std::move(v));
  }

  Real max_abs() const {
    Real m = 0;
    for (const auto& a : c_) m = std::max(m, std::abs(a));
    return m;
  }

 private:
  std::vector<value_type> c_;
};

using Series = BasicSeries<double>;
using cplx = std::complex<double>;

enum class OrderPolicy { Strict, TruncateToMin };

namespace detail {

template <typename Real>
std::size_t common_order(const BasicSeries<Real>& f, const BasicSeries<Real>& g, OrderPolicy p) {
  if (f.order() != g.order() && p == OrderPolicy::Strict)
    throw Error(Errc::OrderMismatch, "orders " + std::to_string(f.order()) + " and " +
                                         std::to_string(g.order()) + " differ");
  return std::min(f.order(), g.order());
}

template <typename Real>
bool finite(const std::complex<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

template <typename Real>
BasicSeries<Real> add(const BasicSeries<Real>& f, const BasicSeries<Real>& g,
                      OrderPolicy p = OrderPolicy::Strict) {
  const std::size_t n = detail::common_order(f, g, p);
  std::vector<std::complex<Real>> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f[i] + g[i];
  return BasicSeries<Real>(std::move(v));
}

template <typename Real>
BasicSeries<Real> sub(const BasicSeries<Real>& f, const BasicSeries<Real>& g,
                      OrderPolicy p = OrderPolicy::Strict) {
  const std::size_t n = detail::common_order(f, g, p);
  std::vector<std::complex<Real>> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f[i] - g[i];
  return BasicSeries<Real>(std::move(v));
}

template <typename Real>
BasicSeries<Real> scale(const BasicSeries<Real>& f, std::complex<Real> a) {
  std::vector<std::complex<Real>> v(f.coeffs().begin(), f.coeffs().end());
  for (auto& c : v) c *= a;
  return BasicSeries<Real>(std::move(v));
}

/// Cauchy product truncated to the common order.
template <typename Real>
BasicSeries<Real> mul(const BasicSeries<Real>& f, const BasicSeries<Real>& g,
                      OrderPolicy p = OrderPolicy::Strict) {
  const std::size_t n = detail::common_order(f, g, p);
  std::vector<std::complex<Real>> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto fj = f[j];
    if (fj == std::complex<Real>(0)) continue;
    for (std::size_t k = 0; j + k < n; ++k) v[j + k] += fj * g[k];
  }
  return BasicSeries<Real>(std::move(v));
}

template <typename Real>
BasicSeries<Real> operator+(const BasicSeries<Real>& f, const BasicSeries<Real>& g) { return add(f, g); }
template <typename Real>
BasicSeries<Real> operator-(const BasicSeries<Real>& f, const BasicSeries<Real>& g) { return sub(f, g); }
template <typename Real>
BasicSeries<Real> operator*(const BasicSeries<Real>& f, const BasicSeries<Real>& g) { return mul(f, g); }
template <typename Real>
BasicSeries<Real> operator*(std::complex<Real> a, const BasicSeries<Real>& f) { return scale(f, a); }

/// Formal exponential: g_0 = exp(f_0), n g_n = sum_{k=1..n} k f_k g_{n-k}.
template <typename Real>
BasicSeries<Real> exp_series(const BasicSeries<Real>& f) {
  using C = std::complex<Real>;
  const std::size_t n = f.order();
  if (f[0].real() > std::log(std::numeric_limits<Real>::max()))
    throw Error(Errc::Overflow, "exp of constant term overflows");
  std::vector<C> g(n);
  g[0] = std::exp(f[0]);
  for (std::size_t i = 1; i < n; ++i) {
    C s(0);
    for (std::size_t k = 1; k <= i; ++k) s += Real(k) * f[k] * g[i - k];
    g[i] = s / Real(i);
    if (!detail::finite(g[i]))
      throw Error(Errc::Overflow, "exp coefficient overflows", static_cast<std::int64_t>(i));
  }
  return BasicSeries<Real>(std::move(g));
}

/// Formal logarithm with the principal branch at the constant term.
template <typename Real>
BasicSeries<Real> log_series(const BasicSeries<Real>& f, Real zero_floor = Real(1e-300)) {
  using C = std::complex<Real>;
  const std::size_t n = f.order();
  if (std::abs(f[0]) <= zero_floor)
    throw Error(Errc::ZeroConstantTerm, "log of a series vanishing at the origin");
  std::vector<C> g(n);
  g[0] = std::log(f[0]);
  const C inv0 = Real(1) / f[0];
  for (std::size_t i = 1; i < n; ++i) {
    C s(0);
    for (std::size_t k = 1; k < i; ++k) s += Real(k) * g[k] * f[i - k];
    g[i] = (f[i] - s / Real(i)) * inv0;
    if (!detail::finite(g[i]))
      throw Error(Errc::Overflow, "log coefficient overflows", static_cast<std::int64_t>(i));
  }
  return BasicSeries<Real>(std::move(g));
}

/// Coefficients f_n * powers[n]; `powers` must cover the series order.
template <typename Real>
BasicSeries<Real> compose_rotation(const BasicSeries<Real>& f, std::span<const std::complex<Real>> powers) {
  if (powers.size() < f.order())
    throw Error(Errc::InvalidArgument, "not enough rotation powers for the series order");
  std::vector<std::complex<Real>> v(f.order());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = f[n] * powers[n];
  return BasicSeries<Real>(std::move(v));
}

/// f(beta z) for a unimodular beta given as a complex number.
template <typename Real>
BasicSeries<Real> compose_rotation(const BasicSeries<Real>& f, std::complex<Real> beta) {
  if (std::abs(std::abs(beta) - Real(1)) > Real(1e-12))
    throw Error(Errc::NotUnimodular, "rotation parameter is not on the unit circle");
  const Real angle = std::arg(beta);
  std::vector<std::complex<Real>> powers(f.order());
  for (std::size_t n = 0; n < powers.size(); ++n) powers[n] = std::polar(Real(1), Real(n) * angle);
  return compose_rotation(f, std::span<const std::complex<Real>>(powers));
}

/// The disc involution z -> (alpha - z) / (1 - conj(alpha) z).
template <typename Real>
std::complex<Real> mobius_involution(std::complex<Real> alpha, std::complex<Real> z) {
  return (alpha - z) / (Real(1) - std::conj(alpha) * z);
}

namespace detail {

// h * (alpha - z) / (1 - conj(alpha) z) in O(N).
template <typename Real>
std::vector<std::complex<Real>> times_mobius(const std::vector<std::complex<Real>>& h,
                                             std::complex<Real> alpha) {
  const std::size_t n = h.size();
  std::vector<std::complex<Real>> q(n);
  const auto ab = std::conj(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<Real> num = alpha * h[i];
    if (i > 0) num -= h[i - 1];
    q[i] = num + (i > 0 ? ab * q[i - 1] : std::complex<Real>(0));
  }
  return q;
}

}  // namespace detail

/// Taylor coefficients of f(Psi_alpha(z)) at the origin, by Horner's scheme
/// in the series algebra. Each Horner step multiplies by the Mobius factor,
/// which is a bidiagonal solve, so the whole composition costs O(N^2).
template <typename Real>
BasicSeries<Real> compose_mobius(const BasicSeries<Real>& f, std::complex<Real> alpha) {
  if (!(std::abs(alpha) < Real(1)))
    throw Error(Errc::OutsideDisc, "Mobius parameter must lie in the open unit disc");
  const std::size_t n = f.order();
  std::vector<std::complex<Real>> acc(n);
  acc[0] = f[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    acc = detail::times_mobius(acc, alpha);
    acc[0] += f[i];
  }
  return BasicSeries<Real>(std::move(acc));
}

enum class Confidence { Convergent, Divergent, Borderline };

inline const char* to_string(Confidence c) {
  switch (c) {
    case Confidence::Convergent: return "Convergent";
    case Confidence::Divergent: return "Divergent";
    case Confidence::Borderline: return "Borderline";
  }
  return "?";
}

struct RadiusOptions {
  double band = 0.05;
  double floor = 1e-280;
  std::size_t min_points = 8;
};

struct RadiusEstimate {
  double value = 0;                    // +inf for an all-negligible tail
  std::size_t window_begin = 0;        // [begin, end)
  std::size_t window_end = 0;
  std::size_t usable_points = 0;
  Confidence confidence = Confidence::Borderline;
  std::string note;
};

inline Confidence classify_radius(double value, double band) {
  if (value < 1.0 - band) return Confidence::Divergent;
  if (value > 1.0 + band) return Confidence::Convergent;
  return Confidence::Borderline;
}

/// Hadamard-type estimate of the radius of convergence: least-squares slope s
/// of log|a_n| against n over the window, value exp(-s). Coefficients below
/// the absolute floor are skipped.
template <typename Real>
RadiusEstimate radius_estimate(const BasicSeries<Real>& f, std::size_t begin, std::size_t end,
                               const RadiusOptions& opt = {}) {
  if (begin >= end || end > f.order())
    throw Error(Errc::InvalidArgument, "radius window outside the series range");
  RadiusEstimate est;
  est.window_begin = begin;
  est.window_end = end;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t n = begin; n < end; ++n) {
    const double a = static_cast<double>(std::abs(f[n]));
    if (!(a >= opt.floor)) continue;
    const double x = static_cast<double>(n);
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  est.usable_points = cnt;
  if (cnt == 0) {
    est.value = std::numeric_limits<double>::infinity();
    est.confidence = Confidence::Convergent;
    est.note = "all tail coefficients below floor";
    return est;
  }
  if (cnt < opt.min_points) {
    est.value = std::numeric_limits<double>::quiet_NaN();
    est.confidence = Confidence::Borderline;
    est.note = "window too short: " + std::to_string(cnt) + " usable points";
    return est;
  }
  const double c = static_cast<double>(cnt);
  const double den = c * sxx - sx * sx;
  const double slope = (c * sxy - sx * sy) / den;
  est.value = std::min(std::exp(-slope), std::numeric_limits<double>::max());
  est.confidence = classify_radius(est.value, opt.band);
  return est;
}

/// Default window: the last half of the index range.
template <typename Real>
RadiusEstimate radius_estimate(const BasicSeries<Real>& f, const RadiusOptions& opt = {}) {
  const std::size_t n = f.order();
  return radius_estimate(f, n / 2, n, opt);
}

/// f(z) / z; requires f(0) = 0. The order drops by one.
template <typename Real>
BasicSeries<Real> shift_down(const BasicSeries<Real>& f, Real zero_floor = Real(1e-300)) {
  if (std::abs(f[0]) > zero_floor)
    throw Error(Errc::InvalidArgument, "shift_down needs a vanishing constant term");
  if (f.order() < 2) throw Error(Errc::InvalidArgument, "shift_down of an order-1 series");
  return BasicSeries<Real>(std::vector<std::complex<Real>>(f.coeffs().begin() + 1, f.coeffs().end()));
}

/// z f(z); the order grows by one.
template <typename Real>
BasicSeries<Real> shift_up(const BasicSeries<Real>& f) {
  std::vector<std::complex<Real>> v(f.order() + 1);
  std::copy(f.coeffs().begin(), f.coeffs().end(), v.begin() + 1);
  return BasicSeries<Real>(std::move(v));
}

/// Horner evaluation without domain checks; used where the caller already
/// knows the point is admissible.
template <typename Real>
std::complex<Real> horner(std::span<const std::complex<Real>> c, std::complex<Real> z) {
  std::complex<Real> acc(0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

template <typename Real>
std::complex<Real> eval(const BasicSeries<Real>& f, std::complex<Real> z) {
  if (!(std::abs(z) < Real(1))) throw Error(Errc::OutsideDisc, "evaluation point outside the open disc");
  return horner(f.coeffs(), z);
}

/// Samples f(r e^{2 pi i j / K}), j = 0..K-1.
template <typename Real>
std::vector<std::complex<Real>> eval_circle(const BasicSeries<Real>& f, Real r, std::size_t k) {
  if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "sampling radius must lie in (0,1)");
  if (k == 0 || (k & (k - 1)) != 0) throw Error(Errc::InvalidArgument, "sample count must be a power of two");
  std::vector<std::complex<Real>> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    // Quarter-turn nodes are set exactly so that axis samples carry no rounding.
    std::complex<Real> w;
    if ((4 * j) % k == 0) {
      static constexpr std::complex<Real> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      w = quarter[(4 * j / k) % 4];
    } else {
      w = std::polar(Real(1), Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(k));
    }
    out[j] = horner(f.coeffs(), r * w);
  }
  return out;
}

}  // namespace wcop
