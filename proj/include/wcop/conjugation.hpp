#pragma once

// Elliptic automorphisms phi = Psi_a o r_beta o Psi_a with
// Psi_a(z) = (a - z)/(1 - conj(a) z). Since Psi_a is an involution,
// C_Psi T C_Psi is the rotation operator with weight m o Psi_a, so the
// rotation pipeline classifies T unchanged.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wcop/error.hpp"
#include "wcop/rotation.hpp"
#include "wcop/series.hpp"
#include "wcop/weight.hpp"
#include "wcop/weighted_op.hpp"

namespace wcop {

/// Mobius map z -> (a z + b)/(c z + d).
struct Mobius {
  cplx a{1}, b{0}, c{0}, d{1};
  cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
  Mobius then(const Mobius& g) const {  // g o this
    return {g.a * a + g.b * c, g.a * b + g.b * d, g.c * a + g.d * c, g.c * b + g.d * d};
  }
};

inline Mobius psi_matrix(cplx alpha) { return {-1.0, alpha, -std::conj(alpha), 1.0}; }

struct EllipticAutomorphism {
  cplx alpha;
  Rotation rotation;
  Mobius phi;
};

/// phi = Psi_alpha o r_beta o Psi_alpha.
inline EllipticAutomorphism make_elliptic(cplx alpha, Rotation rot) {
  if (!(std::abs(alpha) < 1)) throw Error(Errc::OutsideDisc, "fixed point must lie in the open disc");
  const Mobius psi = psi_matrix(alpha);
  const Mobius r{rot.beta(), 0.0, 0.0, 1.0};
  return {alpha, std::move(rot), psi.then(r).then(psi)};
}

namespace detail {

// Periodic when arg(beta)/2pi is within 1e-10 of p/q with q <= 1000.
inline Rotation rotation_from_unit(cplx beta) {
  double xi = std::arg(beta) / (2.0 * std::numbers::pi);
  if (xi < 0) xi += 1.0;
  for (std::int64_t q = 1; q <= 1000; ++q) {
    const double p = std::round(xi * double(q));
    if (std::abs(xi - p / double(q)) <= 1e-10) {
      if (std::int64_t(p) % q == 0) throw Error(Errc::InvalidArgument, "the map is the identity");
      return Rotation::periodic(std::int64_t(p), q);
    }
  }
  return Rotation::aperiodic(XiValue::from_double(xi));
}

}  // namespace detail

/// Interior fixed point and rotation parameter of (a z + b)/(c z + d).
inline EllipticAutomorphism fixed_point(cplx a, cplx b, cplx c, cplx d) {
  const cplx det = a * d - b * c;
  if (std::abs(det) < 1e-14) throw Error(Errc::NotAutomorphism, "degenerate Mobius map");
  const Mobius phi{a, b, c, d};
  for (int j = 0; j < 64; ++j) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / 64.0);
    const cplx den = c * z + d;
    if (std::abs(den) < 1e-14 || std::abs(std::abs(phi(z)) - 1.0) > 1e-9)
      throw Error(Errc::NotAutomorphism, "the map does not preserve the unit circle");
  }
  if (std::abs(d) < 1e-14 || !(std::abs(phi(0.0)) < 1.0))
    throw Error(Errc::NotAutomorphism, "the map does not send the disc into itself");

  // c z^2 + (d - a) z - b = 0
  std::vector<cplx> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(c) <= 1e-14 * scale) {
    if (std::abs(d - a) <= 1e-14 * scale) throw Error(Errc::InvalidArgument, "the map is the identity");
    roots.push_back(b / (d - a));
  } else {
    const cplx disc = std::sqrt((d - a) * (d - a) + 4.0 * b * c);
    roots.push_back((a - d + disc) / (2.0 * c));
    roots.push_back((a - d - disc) / (2.0 * c));
  }
  std::optional<cplx> alpha;
  for (const cplx z : roots)
    if (std::abs(z) < 1.0 - 1e-12) alpha = z;
  if (!alpha) throw Error(Errc::NotElliptic, "no fixed point inside the disc");
  const cplx beta = det / ((c * *alpha + d) * (c * *alpha + d));
  if (std::abs(std::abs(beta) - 1.0) > 1e-9) throw Error(Errc::NotAutomorphism, "derivative at the fixed point is not unimodular");
  return {*alpha, detail::rotation_from_unit(beta / std::abs(beta)), phi};
}

/// m o Psi_alpha. Evaluation, boundary modulus and zeros come from the base
/// weight through Psi_alpha; the series is composed on the base series.
class ComposedSource final : public WeightSource {
 public:
  ComposedSource(std::shared_ptr<const WeightSource> base, cplx alpha) : base_(std::move(base)), alpha_(alpha) {
    if (!(std::abs(alpha) < 1)) throw Error(Errc::OutsideDisc, "|alpha| must be below 1");
  }
  std::string describe() const override {
    return base_->describe() + " o Psi(" + std::to_string(alpha_.real()) + "," + std::to_string(alpha_.imag()) + ")";
  }
  std::vector<cplx> coefficients(std::size_t order) const override {
    const Series s = compose_mobius(Series(base_->coefficients(order)), alpha_);
    return {s.coeffs().begin(), s.coeffs().end()};
  }
  cplx value(cplx z) const override { return base_->value(mobius_involution(alpha_, z)); }
  cplx log_value(cplx z) const override { return base_->log_value(mobius_involution(alpha_, z)); }
  bool has_boundary() const override { return base_->has_boundary(); }
  double boundary_log_abs(double t) const override {
    return base_->boundary_log_abs(std::arg(mobius_involution(alpha_, std::polar(1.0, t))));
  }
  std::optional<std::vector<ZeroInfo>> zeros() const override {
    auto zs = base_->zeros();
    if (!zs) return std::nullopt;
    for (auto& z : *zs) z.location = mobius_involution(alpha_, z.location);
    return zs;
  }
  cplx alpha() const noexcept { return alpha_; }

 private:
  std::shared_ptr<const WeightSource> base_;
  cplx alpha_;
};

struct ReducedOperator {
  Operator op;
  double downgrade = 1;  // 1/(1 - |alpha|): loss of accuracy of the composed series
};

/// The rotation operator m~(z) f(beta z), m~ = m o Psi_alpha, similar to
/// m(z) f(phi(z)).
inline ReducedOperator reduce(const Weight& m, const EllipticAutomorphism& phi) {
  Weight mt(std::make_shared<ComposedSource>(m.source_ptr(), phi.alpha), m.order());
  return {Operator(std::move(mt), phi.rotation), 1.0 / (1.0 - std::abs(phi.alpha))};
}

}  // namespace wcop
