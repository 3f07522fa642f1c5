#pragma once

// Point classification. The dispatch follows the structure of the operator:
//   periodic beta (beta^q = 1): lambda is spectral iff lambda^q lies in m_q(D),
//     where m_q is the iterated weight; eigenvalues exist iff m_q is constant;
//   aperiodic beta, m zero-free: the Waelbroeck spectrum is |lambda| = |m(0)|;
//   aperiodic beta, m with a zero: the Waelbroeck spectrum is the closed disc
//     of radius M_1, and the spectrum lies inside the open disc.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wcop/error.hpp"
#include "wcop/jensen.hpp"
#include "wcop/parallel.hpp"
#include "wcop/resolvent.hpp"
#include "wcop/rotation.hpp"
#include "wcop/weighted_op.hpp"

namespace wcop {

enum class VerdictClass {
  Eigenvalue = 0,
  InSpectrum = 1,
  InWaelbroeckSpectrum_NotKnownInSpectrum = 2,
  WaelbroeckResolvent = 3,
  Resolvent_NotWaelbroeck = 4,
  Undetermined = 5,
};

inline const char* to_string(VerdictClass c) {
  switch (c) {
    case VerdictClass::Eigenvalue: return "Eigenvalue";
    case VerdictClass::InSpectrum: return "InSpectrum";
    case VerdictClass::InWaelbroeckSpectrum_NotKnownInSpectrum: return "InWaelbroeckSpectrum_NotKnownInSpectrum";
    case VerdictClass::WaelbroeckResolvent: return "WaelbroeckResolvent";
    case VerdictClass::Resolvent_NotWaelbroeck: return "Resolvent_NotWaelbroeck";
    case VerdictClass::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace detail {
inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}
}  // namespace detail

inline bool is_resolvent_class(VerdictClass c) {
  return c == VerdictClass::WaelbroeckResolvent || c == VerdictClass::Resolvent_NotWaelbroeck;
}

struct Certificate {
  std::string kind = "none";  // eigen-residual | resolvent-radius | jensen | diophantine | winding | none
  double scalar = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
  std::optional<RadiusEstimate> radius;
};

struct SpectralVerdict {
  cplx lam;
  VerdictClass cls = VerdictClass::Undetermined;
  std::string rule;
  Certificate cert;
};

struct ClassifierOptions {
  double snap_tol = 1e-9;        // lambda = m(0) beta^n test
  double band_floor = 1e-3;      // undetermined band: max(band_floor, band_rel * radius)
  double band_rel = 0.02;
  double disc_eps = 1e-3;        // periodic case samples m_q on |z| = 1 - disc_eps
  std::size_t winding_nodes = 4096;
  double eigen_tol = 1e-9;
  std::vector<double> r_grid{0.5, 0.9, 0.99, 0.999};
  QuadOptions quad;
  bool certify_resolvent = true;  // attach solve(lambda, e0) to resolvent verdicts
  std::size_t probes = 3;         // basis vectors e_0.. tried inside the Jensen disc
  std::int64_t rational_q_max = 10000;
  double rational_tol = 1e-12;
  SolveOptions solve;
};

/// Holds everything that does not depend on lambda. classify() is const and
/// safe to call from several threads.
class Classifier {
 public:
  explicit Classifier(Operator T, ClassifierOptions opt = {}) : T_(std::move(T)), opt_(std::move(opt)) {
    const cplx m0 = T_.m0();
    if (T_.rotation().is_periodic()) {
      q_ = std::size_t(T_.rotation().q());
      structural_ = structural_test_periodic(T_.weight(), T_.rotation().q());
      if (!structural_) mq_samples_ = mq_circle(opt_.winding_nodes);
      return;
    }
    try {
      m1_ = m_one(T_.weight(), opt_.r_grid, opt_.quad);
    } catch (const Error& e) {
      m1_note_ = e.what();
    }
    if (std::abs(m0) > 1e-300) {
      try {
        cond31_ = condition_31(T_.weight(), T_.rotation());
      } catch (const Error&) {
      }
    }
    const auto& s = T_.weight().series();
    constant_weight_ = std::all_of(s.coeffs().begin() + 1, s.coeffs().end(),
                                   [&](cplx c) { return std::abs(c) <= 1e-14 * std::abs(m0); });
  }

  const Operator& op() const noexcept { return T_; }
  const ClassifierOptions& options() const noexcept { return opt_; }
  const std::optional<M1Estimate>& m1() const noexcept { return m1_; }
  const std::optional<RadiusEstimate>& condition() const noexcept { return cond31_; }
  bool structural_passed() const noexcept { return structural_; }

  SpectralVerdict classify(cplx lambda) const {
    SpectralVerdict v;
    v.lam = lambda;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
      throw Error(Errc::NonFinite, "lambda is not finite");
    if (T_.rotation().is_periodic()) {
      classify_periodic(v);
    } else {
      classify_aperiodic(v);
    }
    return v;
  }

 private:
  double band(double radius) const { return std::max(opt_.band_floor, opt_.band_rel * radius); }

  // n < N with |lambda - m0 beta^n| <= snap_tol, if any.
  std::optional<std::size_t> forced_index(cplx lambda) const {
    const cplx m0 = T_.m0();
    const auto pw = T_.beta_powers();
    for (std::size_t n = 0; n < pw.size(); ++n)
      if (std::abs(lambda - m0 * pw[n]) <= opt_.snap_tol) return n;
    return std::nullopt;
  }

  Certificate resolvent_certificate(cplx lambda) const {
    Certificate c;
    if (!opt_.certify_resolvent) return c;
    try {
      const ResolventSolution s = solve(T_, lambda, Series::monomial(0, T_.order()), opt_.solve);
      c.kind = "resolvent-radius";
      c.scalar = s.radius.value;
      c.radius = s.radius;
      c.detail = std::string("solve(lambda, e0): ") + to_string(s.verdict) +
                 ", residual " + detail::sci(s.residual);
    } catch (const Error& e) {
      c.detail = e.what();
    }
    return c;
  }

  // ---- periodic ----

  std::vector<cplx> mq_circle(std::size_t k) const {
    const double r = 1.0 - opt_.disc_eps;
    std::vector<cplx> out(k);
    for (std::size_t j = 0; j < k; ++j) {
      const cplx z = std::polar(r, 2.0 * std::numbers::pi * double(j) / double(k));
      cplx p = 1;
      for (std::size_t i = 0; i < q_; ++i) p *= T_.weight().value(T_.rotation().power(i) * z);
      out[j] = p;
    }
    return out;
  }

  struct Winding {
    int count = 0;
    double min_dist = 0;
    bool ok = false;
  };

  static Winding winding_about(const std::vector<cplx>& s, cplx w) {
    Winding wd;
    wd.min_dist = std::numeric_limits<double>::infinity();
    double total = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const cplx a = s[j] - w, b = s[(j + 1) % s.size()] - w;
      wd.min_dist = std::min(wd.min_dist, std::abs(a));
      if (a == cplx(0) || b == cplx(0)) return wd;
      const double d = std::arg(b / a);
      if (std::abs(d) > std::numbers::pi / 2) return wd;
      total += d;
    }
    wd.count = int(std::lround(total / (2.0 * std::numbers::pi)));
    wd.ok = true;
    return wd;
  }

  void classify_periodic(SpectralVerdict& v) const {
    const cplx lambda = v.lam;
    const cplx m0 = T_.m0();
    const cplx w = std::polar(std::pow(std::abs(lambda), double(q_)), double(q_) * std::arg(lambda));
    if (structural_) {
      // m_q is the constant m0^q: the spectrum is the q points m0 beta^k.
      const cplx c = std::pow(m0, double(q_));
      for (std::size_t k = 0; k < q_; ++k) {
        if (std::abs(lambda - m0 * T_.rotation().power(k)) <= opt_.snap_tol * std::max(1.0, std::abs(lambda))) {
          const PeriodicEigen pe = eigen_periodic(T_, k, 0);
          v.cert.kind = "eigen-residual";
          v.cert.scalar = pe.residuals.front();
          v.cert.detail = "k = " + std::to_string(k);
          if (pe.residuals.front() < opt_.eigen_tol) {
            v.cls = VerdictClass::Eigenvalue;
            v.rule = "periodic-eigen";
          } else {
            v.cls = VerdictClass::InSpectrum;
            v.rule = "periodic-image";
          }
          return;
        }
      }
      const double d = std::abs(w - c);
      v.cert.kind = "winding";
      v.cert.scalar = d;
      v.cert.detail = "|lambda^q - m_q| with m_q constant";
      if (d > band(std::abs(c))) {
        v.cls = VerdictClass::WaelbroeckResolvent;
        v.rule = "periodic-image";
      } else {
        v.cls = VerdictClass::Undetermined;
        v.rule = "periodic-image-band";
      }
      return;
    }
    Winding wd = winding_about(mq_samples_, w);
    for (std::size_t k = 4 * mq_samples_.size(); !wd.ok && k <= 64 * mq_samples_.size(); k *= 4)
      wd = winding_about(mq_circle(k), w);
    v.cert.kind = "winding";
    v.cert.scalar = wd.min_dist;
    if (!wd.ok) {
      v.cls = VerdictClass::Undetermined;
      v.rule = "periodic-image-unresolved";
      v.cert.detail = "phase steps did not resolve";
      return;
    }
    v.cert.detail = "winding of m_q - lambda^q on |z| = 1 - eps: " + std::to_string(wd.count);
    if (wd.count > 0) {
      v.cls = VerdictClass::InSpectrum;
      v.rule = "periodic-image";
    } else if (wd.min_dist > band(std::abs(w))) {
      v.cls = VerdictClass::WaelbroeckResolvent;
      v.rule = "periodic-image";
    } else {
      v.cls = VerdictClass::Undetermined;
      v.rule = "periodic-image-band";
    }
  }

  // ---- aperiodic ----

  void classify_aperiodic(SpectralVerdict& v) const {
    if (!m1_ || !m1_->zero_free) {
      v.cls = VerdictClass::Undetermined;
      v.rule = "jensen-unavailable";
      v.cert.detail = m1_note_.empty() ? "zero-freeness of m on the disc is undecided" : m1_note_;
      return;
    }
    if (*m1_->zero_free) {
      classify_zero_free(v);
    } else {
      classify_vanishing(v);
    }
  }

  std::optional<std::int64_t> rational_denominator(double r) const {
    for (std::int64_t q = 1; q <= opt_.rational_q_max; ++q) {
      const double p = std::round(r * double(q));
      if (std::abs(r - p / double(q)) <= opt_.rational_tol) return q;
    }
    return std::nullopt;
  }

  void classify_zero_free(SpectralVerdict& v) const {
    const cplx lambda = v.lam;
    const cplx m0 = T_.m0();
    const double a0 = std::abs(m0);
    const double b = band(a0);
    if (std::abs(std::abs(lambda) - a0) > b) {
      v.cls = VerdictClass::WaelbroeckResolvent;
      v.rule = "zero-free-circle";
      v.cert = resolvent_certificate(lambda);
      if (v.cert.kind == "none") {
        v.cert.kind = "jensen";
        v.cert.scalar = a0;
        v.cert.detail = "|m(0)|";
      }
      return;
    }
    if (auto n = forced_index(lambda)) {
      v.rule = "forced-point";
      if (cond31_ && cond31_->confidence != Confidence::Divergent) {
        try {
          const EigenPair ep = eigenfunction(T_, *n);
          v.cert.kind = "eigen-residual";
          v.cert.scalar = ep.residual;
          v.cert.radius = ep.condition;
          v.cert.detail = "M = " + std::to_string(*n);
          if (ep.residual < opt_.eigen_tol) {
            v.cls = VerdictClass::Eigenvalue;
            v.rule = "eigen-condition";
            return;
          }
        } catch (const Error& e) {
          v.cert.detail = e.what();
        }
      } else if (cond31_) {
        v.cert.kind = "resolvent-radius";
        v.cert.scalar = cond31_->value;
        v.cert.radius = cond31_;
        v.cert.detail = "coefficient condition divergent; n = " + std::to_string(*n);
      }
      v.cls = VerdictClass::InSpectrum;
      return;
    }
    const auto& dioph = T_.rotation().diophantine();
    if (constant_weight_ && dioph && std::abs(std::abs(lambda) / a0 - 1.0) <= opt_.rational_tol) {
      double r = std::arg(lambda / m0) / (2.0 * std::numbers::pi);
      if (r < 0) r += 1.0;
      if (auto q0 = rational_denominator(r)) {
        const auto p0 = std::int64_t(std::llround(r * double(*q0)));
        if (p0 % *q0 != 0) {
          const DiophantineReport rep = resolvent_growth(T_.rotation(), p0, *q0, 10000);
          v.cls = VerdictClass::Resolvent_NotWaelbroeck;
          v.rule = "diophantine-rational";
          v.cert.kind = "diophantine";
          v.cert.scalar = rep.max_inverse_distance;
          v.cert.detail = "r = " + std::to_string(p0) + "/" + std::to_string(*q0) + ", violations " +
                          std::to_string(rep.violations.size()) + ", max k-th root " +
                          detail::sci(rep.max_tail_root);
          return;
        }
      }
    }
    v.cls = VerdictClass::Undetermined;
    v.rule = "circle-open";
    v.cert.kind = "jensen";
    v.cert.scalar = a0;
    v.cert.detail = "|lambda| within the band around |m(0)|";
  }

  void classify_vanishing(SpectralVerdict& v) const {
    const cplx lambda = v.lam;
    const double M1 = m1_->value;
    if (std::abs(lambda) <= 1e-12) {
      v.cls = VerdictClass::InSpectrum;
      v.rule = "origin-not-surjective";
      return;
    }
    if (std::abs(T_.m0()) > 1e-300) {
      if (auto n = forced_index(lambda)) {
        v.cls = VerdictClass::InSpectrum;
        v.rule = "forced-point";
        v.cert.detail = "n = " + std::to_string(*n);
        return;
      }
    }
    v.cert.kind = "jensen";
    v.cert.scalar = M1;
    v.cert.detail = std::string("M1 via ") + to_string(m1_->method);
    const bool finite = std::isfinite(M1);
    const double b = finite ? band(M1) : 0.0;
    if (finite && std::abs(lambda) > M1 + b) {
      v.cls = VerdictClass::WaelbroeckResolvent;
      v.rule = "jensen-disc-exterior";
      Certificate c = resolvent_certificate(lambda);
      if (c.kind != "none") v.cert = c;
      return;
    }
    if (finite && std::abs(lambda) >= M1 - b) {
      v.cls = VerdictClass::Undetermined;
      v.rule = "jensen-band";
      return;
    }
    v.cls = VerdictClass::InWaelbroeckSpectrum_NotKnownInSpectrum;
    v.rule = "jensen-disc-interior";
    for (std::size_t k = 0; k < opt_.probes && k < T_.order(); ++k) {
      try {
        const ResolventSolution s = solve(T_, lambda, Series::monomial(k, T_.order()), opt_.solve);
        if (s.verdict == ResolventVerdict::OutsideHol) {
          v.cls = VerdictClass::InSpectrum;
          v.rule = "divergent-resolvent";
          v.cert.kind = "resolvent-radius";
          v.cert.scalar = s.radius.value;
          v.cert.radius = s.radius;
          v.cert.detail = "solve(lambda, e" + std::to_string(k) + ") diverges";
          return;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::NearPole) throw;
        v.cls = VerdictClass::InSpectrum;
        v.rule = "forced-point";
        v.cert.detail = e.what();
        return;
      }
    }
  }

  Operator T_;
  ClassifierOptions opt_;
  std::size_t q_ = 0;
  bool structural_ = false;
  std::vector<cplx> mq_samples_;
  std::optional<M1Estimate> m1_;
  std::string m1_note_;
  std::optional<RadiusEstimate> cond31_;
  bool constant_weight_ = false;
};

inline SpectralVerdict classify(const Operator& T, cplx lambda, const ClassifierOptions& opt = {}) {
  return Classifier(T, opt).classify(lambda);
}

struct GridSpec {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  std::size_t n = 64;
};

struct PortraitGrid {
  GridSpec grid;
  std::vector<SpectralVerdict> verdicts;  // row-major, imaginary part outer
};

inline std::vector<cplx> grid_points(const GridSpec& g) {
  if (g.n < 2 || g.n > 2048) throw Error(Errc::InvalidArgument, "grid resolution must lie in [2, 2048]");
  if (!(g.xmax > g.xmin && g.ymax > g.ymin)) throw Error(Errc::InvalidArgument, "empty grid range");
  std::vector<cplx> pts;
  pts.reserve(g.n * g.n);
  for (std::size_t iy = 0; iy < g.n; ++iy) {
    const double y = g.ymin + (g.ymax - g.ymin) * double(iy) / double(g.n - 1);
    for (std::size_t ix = 0; ix < g.n; ++ix)
      pts.emplace_back(g.xmin + (g.xmax - g.xmin) * double(ix) / double(g.n - 1), y);
  }
  return pts;
}

/// Classifies every node with one shared classifier. Resolvent certificates
/// are skipped; the class of each node does not depend on them.
inline PortraitGrid portrait(const Operator& T, const GridSpec& g, ClassifierOptions opt = {}, unsigned threads = 1) {
  opt.certify_resolvent = false;
  const Classifier cls(T, opt);
  PortraitGrid out;
  out.grid = g;
  const auto pts = grid_points(g);
  out.verdicts.resize(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { out.verdicts[i] = cls.classify(pts[i]); });
  return out;
}

}  // namespace wcop
