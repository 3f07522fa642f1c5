#pragma once

// (lambda I - T) f = g on truncated series. The system is lower triangular:
//   (lambda - m0 beta^n) f_n = g_n + sum_{k<n} m_{n-k} beta^k f_k,
// so the truncated solution is exact up to rounding and the only question is
// whether its coefficients describe a function holomorphic on the disc.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wcop/error.hpp"
#include "wcop/parallel.hpp"
#include "wcop/series.hpp"
#include "wcop/weighted_op.hpp"

namespace wcop {

enum class ResolventVerdict { InResolvent, OutsideHol, NearPole, Borderline };

inline const char* to_string(ResolventVerdict v) {
  switch (v) {
    case ResolventVerdict::InResolvent: return "InResolvent";
    case ResolventVerdict::OutsideHol: return "OutsideHol";
    case ResolventVerdict::NearPole: return "NearPole";
    case ResolventVerdict::Borderline: return "Borderline";
  }
  return "?";
}

struct SolveOptions {
  double pole_tol = 1e-9;
  double overflow = 1e300;  // coefficient magnitude at which the recurrence stops
  RadiusOptions radius;
};

struct ResolventSolution {
  Series f{1};
  RadiusEstimate radius;
  double residual = 0;      // max |((lambda - T) f - g)_n| / max(1, max|f_n|)
  double residual_abs = 0;  // same without normalization
  ResolventVerdict verdict = ResolventVerdict::Borderline;
  bool overflowed = false;  // f is the prefix computed before the overflow threshold
  std::string note;
};

/// Solves (lambda I - T) f = g at the order of g (at most the operator order).
inline ResolventSolution solve(const Operator& T, cplx lambda, const Series& g, const SolveOptions& opt = {}) {
  const std::size_t n = g.order();
  if (n > T.order()) throw Error(Errc::OrderMismatch, "right-hand side longer than the operator order");
  const auto pw = T.beta_powers();
  const cplx m0 = T.m0();
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(lambda - m0 * pw[k]) <= opt.pole_tol)
      throw Error(Errc::NearPole, "lambda is within pole tolerance of m(0) beta^" + std::to_string(k),
                  std::int64_t(k));

  const auto m = T.weight().series().coeffs();
  std::vector<cplx> f(n), h(n);  // h_k = beta^k f_k
  std::size_t len = n;
  bool overflowed = false;
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = g[i];
    for (std::size_t k = 0; k < i; ++k) s += m[i - k] * h[k];
    const cplx v = s / (lambda - m0 * pw[i]);
    if (!detail::finite(v) || std::abs(v) > opt.overflow) {
      len = i;
      overflowed = true;
      break;
    }
    f[i] = v;
    h[i] = pw[i] * v;
  }

  ResolventSolution sol;
  sol.overflowed = overflowed;
  if (len == 0) {
    sol.f = Series(1);
    sol.radius.value = 0;
    sol.radius.confidence = Confidence::Divergent;
    sol.verdict = ResolventVerdict::OutsideHol;
    sol.note = "overflow at the first coefficient";
    return sol;
  }
  f.resize(len);
  double fmax = 0, rmax = 0;
  for (std::size_t i = 0; i < len; ++i) {
    cplx s = lambda * f[i] - g[i];
    for (std::size_t k = 0; k <= i; ++k) s -= m[i - k] * h[k];
    rmax = std::max(rmax, std::abs(s));
    fmax = std::max(fmax, std::abs(f[i]));
  }
  sol.residual_abs = rmax;
  sol.residual = rmax / std::max(1.0, fmax);
  sol.f = Series(std::move(f));
  sol.radius = len >= 2 ? radius_estimate(sol.f, len / 2, len, opt.radius) : RadiusEstimate{};
  if (overflowed) {
    sol.verdict = ResolventVerdict::OutsideHol;
    sol.note = "coefficients exceeded " + std::to_string(opt.overflow) + " at n = " + std::to_string(len);
  } else {
    switch (sol.radius.confidence) {
      case Confidence::Convergent: sol.verdict = ResolventVerdict::InResolvent; break;
      case Confidence::Divergent: sol.verdict = ResolventVerdict::OutsideHol; break;
      case Confidence::Borderline: sol.verdict = ResolventVerdict::Borderline; break;
    }
  }
  return sol;
}

struct RotatedResolvent {
  Series f{1};
  ResolventSolution inner;  // the solve at mu that produced it
};

/// R_{beta mu} g from a single solve at mu. With g = g(0) e0 + z g1 and
/// c = 1/(beta mu - m0):
///   R_{beta mu}(z g1) = z R_mu(conj(beta) g1),
///   R_{beta mu} e0    = c e0 + R_{beta mu}(c (m - m0)),
/// and since m - m0 vanishes at 0 the second term is again of the first kind.
inline RotatedResolvent rotate_resolvent(const Operator& T, cplx mu, const Series& g, const SolveOptions& opt = {}) {
  if (g.order() != T.order()) throw Error(Errc::OrderMismatch, "rotate_resolvent: order mismatch");
  if (g.order() < 2) throw Error(Errc::InvalidArgument, "rotate_resolvent needs order >= 2");
  if (mu == cplx(0)) throw Error(Errc::InvalidArgument, "mu must be nonzero");
  const cplx beta = T.beta();
  const cplx m0 = T.m0();
  if (std::abs(beta * mu - m0) <= opt.pole_tol)
    throw Error(Errc::NearPole, "beta mu coincides with m(0)", 0);
  const cplx c = 1.0 / (beta * mu - m0);
  const cplx g0 = g[0];

  std::vector<cplx> gz(g.coeffs().begin(), g.coeffs().end());
  gz[0] = 0;
  std::vector<cplx> mz(T.weight().series().coeffs().begin(), T.weight().series().coeffs().end());
  mz[0] = 0;
  const Series g1 = shift_down(Series(std::move(gz)));
  const Series d = shift_down(Series(std::move(mz)));
  const Series rhs = scale(add(g1, scale(d, g0 * c)), std::conj(beta));

  RotatedResolvent out;
  out.inner = solve(T, mu, rhs, opt);
  std::vector<cplx> v(g.order());
  v[0] = g0 * c;
  const auto& inner = out.inner.f;
  for (std::size_t i = 0; i < inner.order() && i + 1 < v.size(); ++i) v[i + 1] = inner[i];
  out.f = Series(std::move(v));
  return out;
}

/// Coefficients a_n / (1 - beta^n) for n >= 1 (constant term 0), where m1 =
/// sum a_n z^n. This is the logarithm g1 of the eigenfunction at lambda =
/// m(0) beta^M.
inline Series eigen_log_coefficients(const Series& m1, const Rotation& rot) {
  std::vector<cplx> g(m1.order());
  for (std::size_t n = 1; n < g.size(); ++n) g[n] = m1[n] / (1.0 - rot.power(n));
  return Series(std::move(g));
}

/// Hadamard estimate for limsup (|a_n| / |1 - beta^n|)^{1/n} <= 1, reported
/// as the radius of sum a_n/(1-beta^n) z^n. If the last half of the range
/// has too few usable coefficients the window widens to [1, N).
inline RadiusEstimate condition_31(const Series& m1, const Rotation& rot, const RadiusOptions& opt = {}) {
  if (rot.is_periodic()) throw Error(Errc::PeriodicRotation, "the eigenvalue condition is for aperiodic rotations");
  const Series g = eigen_log_coefficients(m1, rot);
  RadiusEstimate est = radius_estimate(g, opt);
  if (std::isnan(est.value) && g.order() > 1) {
    est = radius_estimate(g, 1, g.order(), opt);
    est.note = "window widened to [1, N)" + (est.note.empty() ? "" : "; " + est.note);
  }
  return est;
}

inline RadiusEstimate condition_31(const Weight& m, const Rotation& rot, const RadiusOptions& opt = {}) {
  if (std::abs(m.m0()) <= 1e-300) throw Error(Errc::ZeroConstantTerm, "m(0) = 0");
  return condition_31(m.log_series(), rot, opt);
}

/// True iff the coefficients of m1 = log m vanish at every positive multiple
/// of q, i.e. m1(z) = a0 + z f_1(z^q) + ... + z^{q-1} f_{q-1}(z^q).
inline bool structural_test_periodic(const Weight& m, std::int64_t q, double tol = 1e-10) {
  if (q < 1) throw Error(Errc::InvalidArgument, "q must be positive");
  if (std::abs(m.m0()) <= 1e-300) return false;
  const Series m1 = m.log_series();
  for (std::size_t n = std::size_t(q); n < m1.order(); n += std::size_t(q))
    if (std::abs(m1[n]) >= tol) return false;
  return true;
}

struct EigenPair {
  cplx lambda;
  std::size_t M = 0;
  Series f{1};
  double residual = 0;  // max |((T - lambda) f)_n| / max(1, max|f_n|)
  RadiusEstimate condition;
};

namespace detail {

inline Series times_z_power(const Series& f, std::size_t M) {
  std::vector<cplx> v(f.order());
  for (std::size_t i = M; i < v.size(); ++i) v[i] = f[i - M];
  return Series(std::move(v));
}

inline double eigen_residual(const Operator& T, cplx lambda, const Series& f) {
  const Series Tf = apply(T, f);
  double r = 0;
  for (std::size_t i = 0; i < f.order(); ++i) r = std::max(r, std::abs(Tf[i] - lambda * f[i]));
  return r / std::max(1.0, f.max_abs());
}

}  // namespace detail

/// f = z^M exp(g1) with g1_n = a_n / (1 - beta^n); T f = m(0) beta^M f.
/// Fails with ConditionFails when the coefficient condition is numerically
/// divergent. A borderline estimate is accepted and recorded.
inline EigenPair eigenfunction(const Operator& T, std::size_t M) {
  const Rotation& rot = T.rotation();
  if (rot.is_periodic()) throw Error(Errc::PeriodicRotation, "use eigen_periodic for periodic rotations");
  if (M >= T.order()) throw Error(Errc::InvalidArgument, "M must be below the truncation order");
  if (std::abs(T.m0()) <= 1e-300) throw Error(Errc::ZeroAtOrigin, "m(0) = 0: no eigenvalues");
  const Series m1 = T.weight().log_series();
  EigenPair ep;
  ep.M = M;
  ep.condition = condition_31(m1, rot);
  if (ep.condition.confidence == Confidence::Divergent)
    throw Error(Errc::ConditionFails, "coefficient condition fails: radius " + std::to_string(ep.condition.value));
  ep.lambda = T.m0() * rot.power(M);
  ep.f = detail::times_z_power(exp_series(eigen_log_coefficients(m1, rot)), M);
  ep.residual = detail::eigen_residual(T, ep.lambda, ep.f);
  return ep;
}

struct PeriodicEigen {
  cplx lambda;
  std::size_t k = 0;
  std::vector<Series> functions;
  std::vector<double> residuals;
  std::vector<std::size_t> free_index;  // 0 for the base function, else the perturbed index q j
};

/// Eigenfunctions for lambda = m(0) beta^k in the periodic case. Coefficients
/// of g1 at multiples of q are free; the base function sets them to zero and
/// each further sample sets one of them to 1.
inline PeriodicEigen eigen_periodic(const Operator& T, std::size_t k, std::size_t samples = 2) {
  const Rotation& rot = T.rotation();
  if (!rot.is_periodic()) throw Error(Errc::InvalidArgument, "eigen_periodic needs a periodic rotation");
  const auto q = std::size_t(rot.q());
  if (k >= T.order()) throw Error(Errc::InvalidArgument, "k must be below the truncation order");
  if (!structural_test_periodic(T.weight(), rot.q()))
    throw Error(Errc::ConditionFails, "structural test failed: the point spectrum is empty");
  const Series m1 = T.weight().log_series();
  std::vector<cplx> g(m1.order());
  for (std::size_t n = 1; n < g.size(); ++n)
    if (n % q != 0) g[n] = m1[n] / (1.0 - rot.power(n));

  PeriodicEigen out;
  out.k = k;
  out.lambda = T.m0() * rot.power(k);
  auto emit = [&](const std::vector<cplx>& g1, std::size_t idx) {
    Series f = detail::times_z_power(exp_series(Series(g1)), k);
    out.residuals.push_back(detail::eigen_residual(T, out.lambda, f));
    out.functions.push_back(std::move(f));
    out.free_index.push_back(idx);
  };
  emit(g, 0);
  for (std::size_t j = 1; j <= samples && q * j < g.size(); ++j) {
    auto gj = g;
    gj[q * j] = 1;
    emit(gj, q * j);
  }
  return out;
}

struct ProjectionResult {
  Series pf{1};
  Confidence weakest = Confidence::Convergent;
  double min_radius = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
};

/// Pf = (1/2 pi i) \oint_{|lambda| = r0} R_lambda f d lambda by the trapezoid
/// rule, i.e. (1/K) sum_j lambda_j R_{lambda_j} f. Node solves run in
/// parallel; the sum is taken in node order.
inline ProjectionResult spectral_projection(const Operator& T, double r0, const Series& f, std::size_t k_quad = 1024,
                                            unsigned threads = 1, const SolveOptions& opt = {}) {
  if (!(r0 > 0)) throw Error(Errc::InvalidArgument, "contour radius must be positive");
  if (k_quad == 0) throw Error(Errc::InvalidArgument, "need at least one node");
  if (f.order() != T.order()) throw Error(Errc::OrderMismatch, "spectral_projection: order mismatch");
  std::vector<cplx> lam(k_quad);
  for (std::size_t j = 0; j < k_quad; ++j) {
    // exact quarter turns keep symmetric contours symmetric
    static constexpr cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    lam[j] = (4 * j) % k_quad == 0 ? r0 * quarter[4 * j / k_quad]
                                   : std::polar(r0, 2.0 * std::numbers::pi * double(j) / double(k_quad));
  }
  std::vector<ResolventSolution> sols(k_quad);
  parallel_for(k_quad, threads, [&](std::size_t j) {
    try {
      sols[j] = solve(T, lam[j], f, opt);
    } catch (const Error& e) {
      if (e.code() == Errc::NearPole)
        throw Error(Errc::ContourRejected, "node " + std::to_string(j) + " is a pole: " + e.what());
      throw;
    }
  });
  ProjectionResult out;
  out.nodes = k_quad;
  std::vector<cplx> acc(f.order());
  for (std::size_t j = 0; j < k_quad; ++j) {
    const auto& s = sols[j];
    if (s.verdict == ResolventVerdict::OutsideHol)
      throw Error(Errc::ContourRejected, "node " + std::to_string(j) + " has a divergent resolvent");
    if (s.radius.confidence == Confidence::Borderline) out.weakest = Confidence::Borderline;
    if (!std::isnan(s.radius.value)) out.min_radius = std::min(out.min_radius, s.radius.value);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += lam[j] * s.f[i];
  }
  for (auto& v : acc) v /= double(k_quad);
  out.pf = Series(std::move(acc));
  return out;
}

}  // namespace wcop
