#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "wcop/error.hpp"
#include "wcop/rotation.hpp"
#include "wcop/series.hpp"
#include "wcop/weight.hpp"

namespace wcop {

/// Tf(z) = m(z) f(beta z) at truncation order N = weight order.
class Operator {
 public:
  Operator(Weight weight, Rotation rotation)
      : weight_(std::move(weight)), rot_(std::move(rotation)), powers_(rot_.powers(weight_.order())) {}

  const Weight& weight() const noexcept { return weight_; }
  const Rotation& rotation() const noexcept { return rot_; }
  std::size_t order() const noexcept { return weight_.order(); }
  cplx m0() const { return weight_.m0(); }
  cplx beta() const { return rot_.beta(); }
  /// beta^n for n < N.
  std::span<const cplx> beta_powers() const noexcept { return powers_; }

 private:
  Weight weight_;
  Rotation rot_;
  std::vector<cplx> powers_;
};

inline Series apply(const Operator& T, const Series& f) {
  if (f.order() != T.order())
    throw Error(Errc::OrderMismatch, "apply: series order " + std::to_string(f.order()) + " vs operator order " +
                                         std::to_string(T.order()));
  return mul(T.weight().series(), compose_rotation(f, T.beta_powers()));
}

/// m_n(z) = m(z) m(beta z) ... m(beta^{n-1} z), multiplied left to right.
inline Series iterated_weight(const Operator& T, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "iterated weight needs n >= 1");
  const Series& m = T.weight().series();
  Series acc = m;
  const std::size_t N = T.order();
  std::vector<cplx> pw(N);
  for (std::size_t j = 1; j < n; ++j) {
    const cplx b = T.rotation().power(j);
    cplx p = 1;
    for (std::size_t k = 0; k < N; ++k, p *= b) pw[k] = p;
    acc = mul(acc, compose_rotation(m, std::span<const cplx>(pw)));
  }
  return acc;
}

/// T^n f = m_n(z) f(beta^n z).
inline Series apply_power(const Operator& T, std::size_t n, const Series& f) {
  if (f.order() != T.order()) throw Error(Errc::OrderMismatch, "apply_power: order mismatch");
  if (n == 0) return f;
  const cplx b = T.rotation().power(n);
  std::vector<cplx> pw(T.order());
  cplx p = 1;
  for (auto& v : pw) {
    v = p;
    p *= b;
  }
  return mul(iterated_weight(T, n), compose_rotation(f, std::span<const cplx>(pw)));
}

struct SupEstimate {
  double value = 0;
  double error_bar = 0;  // sampling gap: max |f'| times half the node spacing
};

/// max |f(r e^{it})| over K uniform nodes, 0 < r < 1.
inline SupEstimate sup_circle(const Series& f, double r, std::size_t k = 4096) {
  const auto samples = eval_circle(f, r, k);
  SupEstimate s;
  for (const auto& v : samples) s.value = std::max(s.value, std::abs(v));
  double dmax = 0, rp = 1;
  for (std::size_t n = 1; n < f.order(); ++n, rp *= r) dmax += double(n) * std::abs(f[n]) * rp;
  s.error_bar = dmax * std::numbers::pi * r / double(k);
  return s;
}

/// Sup of |m| on |z| = r; r = 1 goes through the boundary modulus.
inline SupEstimate sup_circle(const Weight& m, double r, std::size_t k = 4096) {
  if (r == 1.0) {
    if (!m.has_boundary()) throw Error(Errc::Unavailable, "r = 1 needs a boundary evaluator");
    SupEstimate s;
    for (std::size_t j = 0; j < k; ++j)
      s.value = std::max(s.value, std::exp(m.boundary_log_abs(2.0 * std::numbers::pi * double(j) / double(k))));
    return s;
  }
  if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "radius must lie in (0, 1]");
  return sup_circle(m.series(), r, k);
}

/// sup_{|z|=r} |m_n(z)|^{1/n} for n = 1..n_max. |m_n| is accumulated pointwise
/// as a sum of log|m(beta^j z)| through the weight's evaluator, which equals
/// the modulus of the iterated product without truncating it.
inline std::vector<double> spectral_radius_banach(const Operator& T, std::size_t n_max, double r,
                                                  std::size_t k = 4096) {
  if (n_max == 0 || n_max > 512) throw Error(Errc::InvalidArgument, "n_max must lie in [1, 512]");
  if (!(r > 0 && r <= 1)) throw Error(Errc::InvalidArgument, "radius must lie in (0, 1]");
  const Weight& m = T.weight();
  if (r == 1.0 && !m.has_boundary()) throw Error(Errc::Unavailable, "r = 1 needs a boundary evaluator");
  std::vector<double> acc(k, 0.0);
  std::vector<double> out(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double shift = T.rotation().frac(n - 1);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double t = 2.0 * std::numbers::pi * ((double(j) + 0.5) / double(k) + shift);
      acc[j] += r == 1.0 ? m.boundary_log_abs(t) : m.log_abs(std::polar(r, t));
      best = std::max(best, acc[j]);
    }
    out[n - 1] = std::exp(best / double(n));
  }
  return out;
}

}  // namespace wcop
