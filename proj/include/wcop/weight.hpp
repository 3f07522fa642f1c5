#pragma once

// The multiplier m of Tf(z) = m(z) f(beta z). A Weight pairs an exact source
// (evaluator, optional boundary modulus, optional zero list, optional exact
// logarithm) with its Taylor series materialized at the working order.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wcop/error.hpp"
#include "wcop/series.hpp"

namespace wcop {

inline constexpr std::size_t kMaxOrder = 8192;

struct ZeroInfo {
  cplx location;
  int multiplicity = 1;
};

class WeightSource {
 public:
  virtual ~WeightSource() = default;

  virtual std::string describe() const = 0;
  virtual std::vector<cplx> coefficients(std::size_t order) const = 0;
  virtual cplx value(cplx z) const = 0;

  /// A logarithm of m(z). Only the real part and phase differences are used,
  /// so the branch is irrelevant. Overridden where m underflows near |z| = 1.
  virtual cplx log_value(cplx z) const { return std::log(value(z)); }

  virtual bool has_boundary() const { return false; }
  /// log |m*(e^{it})|.
  virtual double boundary_log_abs(double /*t*/) const {
    throw Error(Errc::Unavailable, "no boundary evaluator for " + describe());
  }

  /// Zeros in the open unit disc with multiplicity, when known.
  virtual std::optional<std::vector<ZeroInfo>> zeros() const { return std::nullopt; }

  /// Taylor coefficients of a logarithm m1 with m = exp(m1), when available
  /// in closed form.
  virtual std::optional<std::vector<cplx>> log_coefficients(std::size_t /*order*/) const { return std::nullopt; }
};

namespace detail {

inline void check_finite(const std::vector<cplx>& c, const char* what) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!finite(c[i])) throw Error(Errc::NonFinite, std::string(what) + " coefficient is not finite", std::int64_t(i));
}

inline std::vector<cplx> padded(const std::vector<cplx>& c, std::size_t order) {
  std::vector<cplx> v(order);
  std::copy_n(c.begin(), std::min(order, c.size()), v.begin());
  return v;
}

inline std::string format_coeffs(const std::vector<cplx>& c) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ',';
    os << c[i].real();
    if (c[i].imag() != 0) os << (c[i].imag() < 0 ? "" : "+") << c[i].imag() << 'i';
  }
  os << ']';
  return os.str();
}

// Roots of sum c_k z^k with c_0 != 0 via the companion matrix, polished by
// Newton on the original polynomial.
inline std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (std::size_t i = 0; i < deg; ++i) comp(0, i) = -c[deg - 1 - i] / c[deg];
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw Error(Errc::Unavailable, "companion eigenvalue solver failed");
  std::vector<cplx> roots(deg);
  for (std::size_t i = 0; i < deg; ++i) {
    cplx z = es.eigenvalues()[static_cast<Eigen::Index>(i)];
    auto eval = [&](cplx x, cplx& dp) {
      cplx p = c[deg];
      dp = 0;
      for (std::size_t k = deg; k-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[k];
      }
      return p;
    };
    cplx dp;
    cplx p = eval(z, dp);
    // Newton polish, kept only while it lowers |p| (multiple roots stall it)
    for (int it = 0; it < 8 && std::abs(dp) > 0 && std::abs(p) > 0; ++it) {
      const cplx cand = z - p / dp;
      cplx dq;
      const cplx q = eval(cand, dq);
      if (!(std::abs(q) < std::abs(p))) break;
      z = cand;
      p = q;
      dp = dq;
    }
    roots[i] = z;
  }
  return roots;
}

// Groups nearly coincident roots into zeros with multiplicity.
inline std::vector<ZeroInfo> cluster_roots(std::vector<cplx> roots, double tol) {
  std::vector<ZeroInfo> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int mult = 1;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < tol) {
        used[j] = true;
        sum += roots[j];
        ++mult;
      }
    }
    out.push_back({sum / double(mult), mult});
  }
  return out;
}

}  // namespace detail

/// A polynomial weight. Zeros come from the companion matrix unless given.
class PolySource final : public WeightSource {
 public:
  explicit PolySource(std::vector<cplx> coeffs, std::string name = {},
                      std::optional<std::vector<ZeroInfo>> known_zeros = std::nullopt)
      : c_(std::move(coeffs)), name_(std::move(name)) {
    detail::check_finite(c_, "polynomial");
    while (c_.size() > 1 && c_.back() == cplx(0)) c_.pop_back();
    if (c_.empty() || (c_.size() == 1 && c_[0] == cplx(0)))
      throw Error(Errc::InvalidArgument, "the weight must not vanish identically");
    if (known_zeros) {
      zeros_ = std::move(*known_zeros);
    } else {
      std::size_t k = 0;
      while (c_[k] == cplx(0)) ++k;
      if (k > 0) zeros_.push_back({cplx(0), int(k)});
      const std::vector<cplx> rest(c_.begin() + std::ptrdiff_t(k), c_.end());
      for (const auto& z : detail::cluster_roots(detail::poly_roots(rest), 1e-6))
        if (std::abs(z.location) < 1.0) zeros_.push_back(z);
    }
  }

  std::string describe() const override { return name_.empty() ? "poly" + detail::format_coeffs(c_) : name_; }
  std::vector<cplx> coefficients(std::size_t order) const override { return detail::padded(c_, order); }
  cplx value(cplx z) const override { return horner<double>(c_, z); }
  bool has_boundary() const override { return true; }
  double boundary_log_abs(double t) const override { return std::log(std::abs(value(std::polar(1.0, t)))); }
  std::optional<std::vector<ZeroInfo>> zeros() const override { return zeros_; }
  const std::vector<cplx>& poly() const { return c_; }

 private:
  std::vector<cplx> c_;
  std::string name_;
  std::vector<ZeroInfo> zeros_;
};

/// m = exp(p) for a polynomial p; zero-free with an exact logarithm.
class ExpSource final : public WeightSource {
 public:
  explicit ExpSource(std::vector<cplx> exponent) : p_(std::move(exponent)) {
    detail::check_finite(p_, "exponent");
    if (p_.empty()) p_.push_back(0);
  }
  std::string describe() const override { return "exp" + detail::format_coeffs(p_); }
  std::vector<cplx> coefficients(std::size_t order) const override {
    const Series e = exp_series(Series(detail::padded(p_, order)));
    return std::vector<cplx>(e.coeffs().begin(), e.coeffs().end());
  }
  cplx value(cplx z) const override { return std::exp(log_value(z)); }
  cplx log_value(cplx z) const override { return horner<double>(p_, z); }
  bool has_boundary() const override { return true; }
  double boundary_log_abs(double t) const override { return log_value(std::polar(1.0, t)).real(); }
  std::optional<std::vector<ZeroInfo>> zeros() const override { return std::vector<ZeroInfo>{}; }
  std::optional<std::vector<cplx>> log_coefficients(std::size_t order) const override {
    return detail::padded(p_, order);
  }

 private:
  std::vector<cplx> p_;
};

/// m(z) = (1 - z) exp(-(1+z)/(1-z)): zero-free in the disc, boundary modulus
/// 2|sin(t/2)|, and M_1 = 1/e strictly below the boundary mean.
class Example76Source final : public WeightSource {
 public:
  std::string describe() const override { return "example76"; }

  std::vector<cplx> coefficients(std::size_t order) const override {
    // h = exp(-(1+z)/(1-z)) satisfies (1-z)^2 h' = -2h, giving
    // (n+1) h_{n+1} = (2n-2) h_n - (n-1) h_{n-1}.
    std::vector<double> h(order + 1);
    h[0] = std::exp(-1.0);
    if (order >= 1) h[1] = -2.0 * h[0];
    for (std::size_t n = 1; n + 1 <= order; ++n)
      h[n + 1] = ((2.0 * double(n) - 2.0) * h[n] - (double(n) - 1.0) * h[n - 1]) / double(n + 1);
    std::vector<cplx> c(order);
    for (std::size_t n = 0; n < order; ++n) c[n] = h[n] - (n > 0 ? h[n - 1] : 0.0);
    return c;
  }

  cplx value(cplx z) const override { return (1.0 - z) * std::exp(-(1.0 + z) / (1.0 - z)); }
  cplx log_value(cplx z) const override { return std::log(1.0 - z) - (1.0 + z) / (1.0 - z); }
  bool has_boundary() const override { return true; }
  double boundary_log_abs(double t) const override { return std::log(2.0 * std::abs(std::sin(t / 2.0))); }
  std::optional<std::vector<ZeroInfo>> zeros() const override { return std::vector<ZeroInfo>{}; }
  std::optional<std::vector<cplx>> log_coefficients(std::size_t order) const override {
    // log(1-z) - (1+z)/(1-z) = -1 - sum_{n>=1} (1/n + 2) z^n
    std::vector<cplx> c(order);
    c[0] = -1.0;
    for (std::size_t n = 1; n < order; ++n) c[n] = -(1.0 / double(n) + 2.0);
    return c;
  }
};

/// Coefficients given directly, e.g. from a file. Evaluation uses the stored
/// coefficients; there is no boundary data and no zero list.
class SeriesSource final : public WeightSource {
 public:
  explicit SeriesSource(std::vector<cplx> coeffs, std::string name = "series")
      : c_(std::move(coeffs)), name_(std::move(name)) {
    detail::check_finite(c_, "series");
    if (c_.empty()) throw Error(Errc::InvalidArgument, "empty series weight");
    if (std::all_of(c_.begin(), c_.end(), [](cplx v) { return v == cplx(0); }))
      throw Error(Errc::InvalidArgument, "the weight must not vanish identically");
  }
  std::string describe() const override { return name_; }
  std::vector<cplx> coefficients(std::size_t order) const override { return detail::padded(c_, order); }
  cplx value(cplx z) const override { return horner<double>(c_, z); }

 private:
  std::vector<cplx> c_;
  std::string name_;
};

class Weight {
 public:
  Weight(std::shared_ptr<const WeightSource> src, std::size_t order) : src_(std::move(src)), series_(check(order)) {
    series_ = Series(src_->coefficients(order));
  }

  static Weight poly(std::vector<cplx> coeffs, std::size_t order) {
    return Weight(std::make_shared<PolySource>(std::move(coeffs)), order);
  }
  static Weight one(std::size_t order) {
    return Weight(std::make_shared<PolySource>(std::vector<cplx>{1}, "one", std::vector<ZeroInfo>{}), order);
  }
  static Weight constant(cplx c, std::size_t order) {
    return Weight(std::make_shared<PolySource>(std::vector<cplx>{c}), order);
  }
  static Weight monomial(std::size_t k, std::size_t order) {
    std::vector<cplx> c(k + 1);
    c[k] = 1;
    std::vector<ZeroInfo> z;
    if (k > 0) z.push_back({cplx(0), int(k)});
    return Weight(std::make_shared<PolySource>(std::move(c), "monomial(" + std::to_string(k) + ")", std::move(z)), order);
  }
  /// z - alpha.
  static Weight shifted(cplx alpha, std::size_t order) {
    std::vector<ZeroInfo> z;
    if (std::abs(alpha) < 1.0) z.push_back({alpha, 1});
    std::ostringstream name;
    name << "shifted(" << alpha.real() << ',' << alpha.imag() << ')';
    return Weight(std::make_shared<PolySource>(std::vector<cplx>{-alpha, 1}, name.str(), std::move(z)), order);
  }
  static Weight example76(std::size_t order) { return Weight(std::make_shared<Example76Source>(), order); }
  static Weight exp_poly(std::vector<cplx> exponent, std::size_t order) {
    return Weight(std::make_shared<ExpSource>(std::move(exponent)), order);
  }
  static Weight series(std::vector<cplx> coeffs, std::size_t order) {
    return Weight(std::make_shared<SeriesSource>(std::move(coeffs)), order);
  }

  Weight with_order(std::size_t order) const { return Weight(src_, order); }

  std::size_t order() const noexcept { return series_.order(); }
  const Series& series() const noexcept { return series_; }
  cplx m0() const { return series_[0]; }
  const WeightSource& source() const noexcept { return *src_; }
  std::shared_ptr<const WeightSource> source_ptr() const noexcept { return src_; }
  std::string describe() const { return src_->describe(); }

  cplx value(cplx z) const { return src_->value(z); }
  cplx log_value(cplx z) const { return src_->log_value(z); }
  double log_abs(cplx z) const { return src_->log_value(z).real(); }
  bool has_boundary() const { return src_->has_boundary(); }
  double boundary_log_abs(double t) const { return src_->boundary_log_abs(t); }
  std::optional<std::vector<ZeroInfo>> zeros() const { return src_->zeros(); }

  /// m1 with m = exp(m1): closed form when the source has one, otherwise the
  /// formal logarithm of the materialized series.
  Series log_series() const {
    if (auto c = src_->log_coefficients(order())) return Series(std::move(*c));
    return wcop::log_series(series_);
  }

 private:
  static std::size_t check(std::size_t order) {
    if (order == 0 || order > kMaxOrder)
      throw Error(Errc::InvalidArgument, "order must lie in [1, " + std::to_string(kMaxOrder) + "]");
    return order;
  }

  std::shared_ptr<const WeightSource> src_;
  Series series_;
};

}  // namespace wcop
