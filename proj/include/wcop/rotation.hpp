#pragma once

// The rotation z -> beta z with beta = e^{2 pi i xi}. Periodic rotations are
// kept as an exact fraction p/q; aperiodic ones carry xi as a 256-bit binary
// fraction so that frac(k xi) is exact modular integer arithmetic.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wcop/error.hpp"

namespace wcop {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using U256 = mp::uint256_t;
using BigFloat = mp::number<mp::cpp_bin_float<120>>;

namespace detail {

inline const BigInt& two_pow_256() {
  static const BigInt v = BigInt(1) << 256;
  return v;
}

// Top 64 bits of a 256-bit fraction as a double in [0, 1).
inline double fraction_to_double(const U256& x) {
  const auto top = static_cast<std::uint64_t>(x >> 192);
  return std::ldexp(static_cast<double>(top), -64);
}

// Distance to the nearest integer of the 256-bit fraction x / 2^256.
inline double fraction_dist(const U256& x) {
  const auto top = static_cast<std::uint64_t>(x >> 192);
  const std::uint64_t d = std::min(top, std::uint64_t(0) - top);
  return std::ldexp(static_cast<double>(d), -64);
}

inline std::complex<double> unit_from_turns(double turns) {
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

}  // namespace detail

/// A real number in (0,1) held to 256 fractional bits, optionally with an
/// exact rational value when it was entered as p/q.
class XiValue {
 public:
  static XiValue golden() {
    BigFloat x = (mp::sqrt(BigFloat(5)) - 1) / 2;
    return XiValue(x, "golden");
  }

  static XiValue sqrt2m1() {
    BigFloat x = mp::sqrt(BigFloat(2)) - 1;
    return XiValue(x, "sqrt2m1");
  }

  static XiValue rational(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw Error(Errc::InvalidArgument, "rational xi needs a positive denominator");
    BigInt num = ((BigInt(p) % q) + q) % q;
    XiValue v;
    v.label_ = std::to_string(p) + "/" + std::to_string(q);
    const BigInt g = mp::gcd(num, BigInt(q));
    v.num_ = num / (g == 0 ? BigInt(1) : g);
    v.den_ = BigInt(q) / (g == 0 ? BigInt(1) : g);
    v.bits_ = static_cast<U256>((v.num_ << 256) / v.den_);
    return v;
  }

  static XiValue from_decimal(const std::string& text) {
    BigFloat x;
    try {
      x = BigFloat(text);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "cannot parse xi '" + text + "'");
    }
    return XiValue(x, text);
  }

  static XiValue from_double(double x) {
    return XiValue(BigFloat(x), std::to_string(x));
  }

  /// Accepts golden, sqrt2m1, p/q, or a decimal literal.
  static XiValue parse(const std::string& text) {
    if (text == "golden") return golden();
    if (text == "sqrt2m1") return sqrt2m1();
    if (auto slash = text.find('/'); slash != std::string::npos) {
      try {
        return rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
      } catch (const std::logic_error&) {
        throw Error(Errc::InvalidArgument, "cannot parse rational xi '" + text + "'");
      }
    }
    return from_decimal(text);
  }

  const U256& bits() const noexcept { return bits_; }
  bool is_exact_rational() const noexcept { return den_ != 0; }
  const BigInt& numerator() const noexcept { return num_; }
  const BigInt& denominator() const noexcept { return den_; }
  const std::string& label() const noexcept { return label_; }
  double to_double() const { return detail::fraction_to_double(bits_); }

  /// frac(k xi) as a 256-bit fraction.
  U256 frac_bits(std::uint64_t k) const {
    if (is_exact_rational()) {
      const BigInt r = (BigInt(k) * num_) % den_;
      return static_cast<U256>((r << 256) / den_);
    }
    return bits_ * U256(k);
  }

  double frac(std::uint64_t k) const { return detail::fraction_to_double(frac_bits(k)); }

 private:
  XiValue() = default;
  XiValue(BigFloat x, std::string label) : label_(std::move(label)) {
    x -= mp::floor(x);
    const BigFloat scaled = mp::ldexp(x, 256);
    BigInt n = scaled.convert_to<BigInt>();
    if (n >= detail::two_pow_256()) n = detail::two_pow_256() - 1;
    bits_ = static_cast<U256>(n);
  }

  U256 bits_ = 0;
  BigInt num_ = 0;
  BigInt den_ = 0;
  std::string label_;
};

struct DiophantineParams {
  double tau = 0;
  double gamma = 0;            // verified: min over q <= q_checked of q^(tau-1) dist(q xi, Z)
  std::uint64_t q_checked = 0;
  std::uint64_t q_at_min = 0;
};

/// Empirical gamma: min over 1 <= q <= q_max of q^(tau-1) * dist(q xi, Z),
/// i.e. the largest gamma with |xi - p/q| >= gamma q^-tau for every checked q.
inline DiophantineParams verify_diophantine(const XiValue& xi, double tau, std::uint64_t q_max) {
  if (!(tau > 2)) throw Error(Errc::InvalidArgument, "diophantine exponent must exceed 2");
  if (q_max == 0) throw Error(Errc::InvalidArgument, "diophantine check depth must be positive");
  DiophantineParams d;
  d.tau = tau;
  d.q_checked = q_max;
  d.gamma = std::numeric_limits<double>::infinity();
  U256 acc = 0;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    acc += xi.bits();
    const double dist = xi.is_exact_rational() ? detail::fraction_dist(xi.frac_bits(q)) : detail::fraction_dist(acc);
    const double g = std::pow(static_cast<double>(q), tau - 1.0) * dist;
    if (g < d.gamma) {
      d.gamma = g;
      d.q_at_min = q;
    }
  }
  return d;
}

class Rotation {
 public:
  enum class Kind { Periodic, Aperiodic };

  static Rotation periodic(std::int64_t p, std::int64_t q) {
    if (q < 2) throw Error(Errc::InvalidArgument, "periodic rotation needs q >= 2");
    const std::int64_t pp = ((p % q) + q) % q;
    if (pp == 0 || std::gcd(pp, q) != 1)
      throw Error(Errc::InvalidArgument, "periodic rotation needs gcd(p,q) = 1 and p not divisible by q");
    Rotation r(Kind::Periodic);
    r.p_ = pp;
    r.q_ = q;
    return r;
  }

  /// An aperiodic rotation. Aperiodicity is the caller's declaration; an
  /// exact rational or a huge continued-fraction quotient is reported through
  /// warnings(). With `tau`, gamma is verified over q <= q_check.
  static Rotation aperiodic(XiValue xi, std::optional<double> tau = std::nullopt,
                            std::uint64_t q_check = 1'000'000) {
    Rotation r(Kind::Aperiodic);
    r.xi_ = std::move(xi);
    if (r.xi_->is_exact_rational()) r.warnings_.push_back("xi is rational; declared aperiodic anyway");
    if (tau) {
      auto d = verify_diophantine(*r.xi_, *tau, q_check);
      if (d.gamma > 0) {
        r.dioph_ = d;
      } else {
        r.warnings_.push_back("diophantine bound fails for some q <= " + std::to_string(q_check));
      }
    }
    return r;
  }

  Kind kind() const noexcept { return kind_; }
  bool is_periodic() const noexcept { return kind_ == Kind::Periodic; }
  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  const XiValue& xi() const {
    if (!xi_) throw Error(Errc::InvalidArgument, "periodic rotation has no xi");
    return *xi_;
  }
  const std::optional<DiophantineParams>& diophantine() const noexcept { return dioph_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// frac(k xi) in [0, 1).
  double frac(std::uint64_t k) const {
    if (is_periodic()) {
      const auto res = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k % q_) * p_) % q_);
      return static_cast<double>(res) / static_cast<double>(q_);
    }
    return xi_->frac(k);
  }

  /// beta^k. Periodic powers are exact at multiples of a quarter turn.
  std::complex<double> power(std::uint64_t k) const {
    if (is_periodic()) {
      const auto res = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k % q_) * p_) % q_);
      if ((4 * res) % q_ == 0) {
        static constexpr std::complex<double> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return quarter[(4 * res / q_) % 4];
      }
      return detail::unit_from_turns(static_cast<double>(res) / static_cast<double>(q_));
    }
    return detail::unit_from_turns(xi_->frac(k));
  }

  std::complex<double> beta() const { return power(1); }

  /// beta^{step*k} for k = 0..n-1.
  std::vector<std::complex<double>> powers(std::size_t n, std::uint64_t step = 1) const {
    std::vector<std::complex<double>> out(n);
    if (!is_periodic() && !xi_->is_exact_rational()) {
      const U256 inc = xi_->bits() * U256(step);
      U256 acc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        out[k] = k == 0 ? std::complex<double>(1, 0) : detail::unit_from_turns(detail::fraction_to_double(acc));
        acc += inc;
      }
      return out;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = power(step * k);
    return out;
  }

  std::string describe() const {
    if (is_periodic()) return "periodic " + std::to_string(p_) + "/" + std::to_string(q_);
    std::string s = "aperiodic xi=" + xi_->label();
    if (dioph_) s += " tau=" + std::to_string(dioph_->tau);
    return s;
  }

 private:
  explicit Rotation(Kind k) : kind_(k) {}

  Kind kind_;
  std::int64_t p_ = 0;
  std::int64_t q_ = 0;
  std::optional<XiValue> xi_;
  std::optional<DiophantineParams> dioph_;
  std::vector<std::string> warnings_;
};

inline std::complex<double> beta_power(const Rotation& rot, std::uint64_t k) { return rot.power(k); }

struct ContinuedFraction {
  std::vector<BigInt> quotients;                   // a_0, a_1, ...
  std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_k, q_k)
  bool rational = false;            // expansion terminated exactly
  bool precision_exhausted = false; // the 256-bit enclosure no longer fixes the next quotient
  bool near_rational = false;       // a partial quotient above 2^32 was seen
  std::size_t achieved_depth() const { return quotients.size(); }
};

/// Continued fraction of xi up to `depth` partial quotients (a_0 included).
/// For a 256-bit value the expansion runs on both ends of the enclosing
/// interval [X, X+1] / 2^256 and stops once their quotients disagree.
inline ContinuedFraction continued_fraction(const XiValue& xi, std::size_t depth) {
  if (depth == 0 || depth > 64) throw Error(Errc::InvalidArgument, "continued fraction depth must be in [1, 64]");
  ContinuedFraction cf;
  BigInt p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  auto push = [&](const BigInt& a) {
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    cf.quotients.push_back(a);
    cf.convergents.emplace_back(p, q);
    if (a > (BigInt(1) << 32)) cf.near_rational = true;
  };

  if (xi.is_exact_rational()) {
    BigInt a = xi.numerator(), b = xi.denominator();
    while (cf.quotients.size() < depth) {
      const BigInt t = a / b;
      push(t);
      const BigInt r = a - t * b;
      if (r == 0) {
        cf.rational = true;
        break;
      }
      a = b;
      b = r;
    }
    return cf;
  }

  BigInt a_lo = BigInt(xi.bits()), b_lo = detail::two_pow_256();
  BigInt a_hi = a_lo + 1, b_hi = b_lo;
  while (cf.quotients.size() < depth) {
    const BigInt t_lo = a_lo / b_lo;
    const BigInt t_hi = a_hi / b_hi;
    if (t_lo != t_hi) {
      cf.precision_exhausted = true;
      break;
    }
    push(t_lo);
    const BigInt r_lo = a_lo - t_lo * b_lo;
    const BigInt r_hi = a_hi - t_hi * b_hi;
    if (r_lo == 0 || r_hi == 0) {
      cf.precision_exhausted = true;
      break;
    }
    a_lo = b_lo;
    b_lo = r_lo;
    a_hi = b_hi;
    b_hi = r_hi;
    if (cf.near_rational) break;
  }
  return cf;
}

struct DiophantineReport {
  std::vector<std::pair<BigInt, BigInt>> convergents;
  std::int64_t p0 = 0;
  std::int64_t q0 = 1;
  std::optional<double> tau;
  std::optional<double> gamma_hat;
  std::optional<double> bound_constant;     // q0^tau / (4 gamma)
  std::vector<double> inverse_distance;     // 1/|beta^k - lambda|, k = 1..K (index k-1)
  std::vector<double> growth_roots;         // (1/|beta^k - lambda|)^(1/k)
  std::vector<std::uint64_t> violations;
  double max_tail_root = 0;                 // over k in [K/2, K]
  double max_inverse_distance = 0;
  std::uint64_t bound_valid_up_to = 0;      // largest k with q0*k inside the verified range
  std::string note;
};

/// 1/|beta^k - e^{2 pi i p0/q0}| for k = 1..K with the diophantine bound
/// c k^(tau-1), c = q0^tau / (4 gamma), checked at every k where q0 k lies in
/// the verified range of gamma.
inline DiophantineReport resolvent_growth(const Rotation& rot, std::int64_t p0, std::int64_t q0, std::uint64_t k_max) {
  if (rot.is_periodic())
    throw Error(Errc::PeriodicRotation, "periodic rotation: beta^k returns to lambda's neighbourhood periodically");
  if (q0 <= 0) throw Error(Errc::InvalidArgument, "denominator must be positive");
  if (((p0 % q0) + q0) % q0 == 0) throw Error(Errc::InvalidArgument, "lambda = 1 is excluded");
  if (k_max == 0 || k_max > 1'000'000) throw Error(Errc::InvalidArgument, "K must lie in [1, 1e6]");

  const std::int64_t g = std::gcd(p0, q0);
  p0 /= g;
  q0 /= g;
  DiophantineReport rep;
  rep.p0 = p0;
  rep.q0 = q0;
  rep.convergents = continued_fraction(rot.xi(), 24).convergents;
  const auto& dioph = rot.diophantine();
  if (dioph) {
    rep.tau = dioph->tau;
    rep.gamma_hat = dioph->gamma;
    rep.bound_constant = std::pow(static_cast<double>(q0), dioph->tau) / (4.0 * dioph->gamma);
    rep.bound_valid_up_to = dioph->q_checked / static_cast<std::uint64_t>(q0);
  } else {
    rep.note = "no diophantine parameters: bound not evaluated";
  }

  const BigInt pn = ((BigInt(p0) % q0) + q0) % q0;
  const U256 r_bits = static_cast<U256>((pn << 256) / BigInt(q0));
  const XiValue& xi = rot.xi();
  rep.inverse_distance.resize(k_max);
  rep.growth_roots.resize(k_max);
  U256 acc = 0;
  const std::uint64_t tail_begin = std::max<std::uint64_t>(1, k_max / 2);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    acc += xi.bits();
    const U256 diff = (xi.is_exact_rational() ? xi.frac_bits(k) : acc) - r_bits;
    const double dist = detail::fraction_dist(diff);
    const double inv = 1.0 / (2.0 * std::sin(std::numbers::pi * dist));
    rep.inverse_distance[k - 1] = inv;
    const double root = std::exp(std::log(inv) / static_cast<double>(k));
    rep.growth_roots[k - 1] = root;
    rep.max_inverse_distance = std::max(rep.max_inverse_distance, inv);
    if (k >= tail_begin) rep.max_tail_root = std::max(rep.max_tail_root, root);
    if (rep.bound_constant && k <= rep.bound_valid_up_to) {
      const double bound = *rep.bound_constant * std::pow(static_cast<double>(k), *rep.tau - 1.0);
      if (inv > bound * (1.0 + 1e-12)) rep.violations.push_back(k);
    }
  }
  if (rep.bound_constant && k_max > rep.bound_valid_up_to)
    rep.note = "bound checked only for k <= " + std::to_string(rep.bound_valid_up_to);
  return rep;
}

struct GConditionReport {
  double liminf_estimate = 0;   // min of g(q0 k)^(1/k) over the tail window
  bool verdict = false;         // liminf >= 1 - band
  std::uint64_t tail_begin = 0;
  std::uint64_t tail_end = 0;
  std::uint64_t xi_checked_up_to = 0;           // q range where |xi - p/q| >= g(q) was tested
  std::optional<std::uint64_t> first_xi_violation;
};

/// Growth condition liminf_k g(q0 k)^(1/k) >= 1 on a tabulated g, given as
/// log g. Also records whether xi itself respects |xi - p/q| >= g(q) for
/// q up to `xi_check`.
inline GConditionReport check_g_condition(const Rotation& rot, const std::function<double(std::uint64_t)>& log_g,
                                          std::uint64_t q0, std::uint64_t k_max, double band = 0.05,
                                          std::uint64_t xi_check = 100'000) {
  if (q0 == 0 || k_max < 2) throw Error(Errc::InvalidArgument, "need q0 >= 1 and Kmax >= 2");
  GConditionReport rep;
  rep.tail_begin = k_max / 2;
  rep.tail_end = k_max;
  rep.liminf_estimate = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = rep.tail_begin; k <= k_max; ++k) {
    const double v = std::exp(log_g(q0 * k) / static_cast<double>(k));
    rep.liminf_estimate = std::min(rep.liminf_estimate, v);
  }
  rep.verdict = rep.liminf_estimate >= 1.0 - band;
  if (!rot.is_periodic()) {
    const XiValue& xi = rot.xi();
    U256 acc = 0;
    for (std::uint64_t q = 1; q <= xi_check; ++q) {
      acc += xi.bits();
      const double dist = detail::fraction_dist(xi.is_exact_rational() ? xi.frac_bits(q) : acc);
      const double lhs = std::log(dist / static_cast<double>(q));
      if (lhs < log_g(q) - 1e-12) {
        rep.first_xi_violation = q;
        break;
      }
    }
    rep.xi_checked_up_to = xi_check;
  }
  return rep;
}

}  // namespace wcop
