#pragma once

// Jensen radii of the weight:
//   M_r = exp( (1/2pi) \int log|m(r e^{it})| dt ),  M_1 = sup_{r<1} M_r,
//   M*  = exp( (1/2pi) \int log|m*(e^{it})| dt ),
// by trapezoid quadrature and, when zeros are known, by the Jensen product
//   M_r = |c| r^k prod_{|a| <= r} r/|a|   (m = z^k (c + ...)).

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
#include "wcop/weight.hpp"

namespace wcop {

struct QuadOptions {
  std::size_t k0 = 4096;
  std::size_t k_max = std::size_t(1) << 22;
  double tol = 1e-10;
};

struct QuadResult {
  double value = 0;
  double r = 0;          // radius actually used
  bool nudged = false;   // r moved off a known zero
  bool converged = false;
  std::size_t nodes = 0;
};

namespace detail {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0, c = 0;
  void add(double x) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return std::isfinite(sum) ? sum + c : sum; }
};

inline double circle_log_sum(const Weight& m, double r, std::size_t k, std::size_t offset_num, std::size_t stride) {
  // sum over nodes t_j = 2 pi (offset_num + stride j) / (stride k_total); stride
  // and offset let the doubling reuse earlier nodes.
  CompensatedSum s;
  const double denom = double(k) * double(stride);
  for (std::size_t j = 0; j < k; ++j) {
    const double t = 2.0 * std::numbers::pi * (double(offset_num) + double(stride) * double(j)) / denom;
    s.add(m.log_abs(std::polar(r, t)));
  }
  return s.value();
}

}  // namespace detail

/// exp of the trapezoid mean of log|m(r e^{it})|, doubling K from k0 until two
/// successive values agree to tol (relative to max(1, M_r)).
inline QuadResult m_r_quadrature(const Weight& m, double r, const QuadOptions& opt = {}) {
  if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "radius must lie in (0, 1)");
  if (opt.k0 == 0 || (opt.k0 & (opt.k0 - 1)) != 0) throw Error(Errc::InvalidArgument, "K must be a power of two");
  QuadResult q;
  q.r = r;
  if (auto zs = m.zeros()) {
    for (const auto& z : *zs) {
      if (std::abs(std::abs(z.location) - q.r) < 1e-8) {
        q.r += (q.r + 1e-6 < 1.0) ? 1e-6 : -1e-6;
        q.nudged = true;
      }
    }
  }
  std::size_t k = opt.k0;
  double sum = detail::circle_log_sum(m, q.r, k, 0, 1);
  if (std::isinf(sum) && sum < 0 && !q.nudged) {
    q.r += (q.r + 1e-6 < 1.0) ? 1e-6 : -1e-6;
    q.nudged = true;
    sum = detail::circle_log_sum(m, q.r, k, 0, 1);
  }
  if (std::isnan(sum) || (std::isinf(sum) && sum < 0))
    throw Error(Errc::InvalidArgument, "log|m| is not finite on the circle r = " + std::to_string(q.r));
  double prev = std::exp(sum / double(k));
  while (2 * k <= opt.k_max) {
    // the new nodes are the midpoints of the current ones
    sum += detail::circle_log_sum(m, q.r, k, 1, 2);
    k *= 2;
    const double cur = std::exp(sum / double(k));
    if (std::abs(cur - prev) <= opt.tol * std::max(1.0, cur)) {
      q.value = cur;
      q.converged = true;
      q.nodes = k;
      return q;
    }
    prev = cur;
  }
  q.value = prev;
  q.nodes = k;
  return q;
}

/// Jensen product from the zero list. Throws Unavailable without zeros.
inline double m_r_zeros(const Weight& m, double r) {
  const auto zs = m.zeros();
  if (!zs) throw Error(Errc::Unavailable, "zeros of " + m.describe() + " are not available");
  if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "radius must lie in (0, 1)");
  std::size_t k0 = 0;
  double v = 1;
  for (const auto& z : *zs) {
    const double a = std::abs(z.location);
    if (a < 1e-14) {
      k0 += std::size_t(z.multiplicity);
    } else if (a <= r) {
      v *= std::pow(r / a, z.multiplicity);
    }
  }
  if (k0 >= m.order()) throw Error(Errc::Unavailable, "order of vanishing exceeds the truncation");
  return std::abs(m.series()[k0]) * std::pow(r, double(k0)) * v;
}

struct ZeroCount {
  int count = 0;
  std::size_t nodes = 0;
  double min_abs = 0;  // smallest |m| over the samples
};

/// Winding number of m around |z| = r by phase unwrapping. The phase comes
/// from the weight's logarithm so that tiny moduli do not underflow. A phase
/// step above pi/2 refines K by 4, at most three times.
inline ZeroCount count_zeros(const Weight& m, double r, std::size_t k = 4096) {
  if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "radius must lie in (0, 1)");
  for (int attempt = 0; attempt <= 3; ++attempt, k *= 4) {
    double total = 0, min_log = std::numeric_limits<double>::infinity();
    bool ok = true;
    cplx first = m.log_value(cplx(r, 0));
    cplx prev = first;
    for (std::size_t j = 1; j <= k && ok; ++j) {
      const cplx cur = j == k ? first : m.log_value(std::polar(r, 2.0 * std::numbers::pi * double(j) / double(k)));
      if (!std::isfinite(cur.real())) throw Error(Errc::InvalidArgument, "m vanishes on the circle");
      min_log = std::min(min_log, cur.real());
      double d = std::remainder(cur.imag() - prev.imag(), 2.0 * std::numbers::pi);
      if (std::abs(d) > std::numbers::pi / 2) ok = false;
      total += d;
      prev = cur;
    }
    if (ok) {
      ZeroCount zc;
      zc.count = int(std::lround(total / (2.0 * std::numbers::pi)));
      zc.nodes = k;
      zc.min_abs = std::exp(std::min(min_log, m.log_abs(cplx(r, 0))));
      return zc;
    }
  }
  throw Error(Errc::RefinementFailed, "phase steps stay above pi/2 after three refinements at r = " + std::to_string(r));
}

enum class M1Method { ExactZeroFree, ZeroProduct, SupOverGrid, Extrapolated };

inline const char* to_string(M1Method m) {
  switch (m) {
    case M1Method::ExactZeroFree: return "exact-zero-free";
    case M1Method::ZeroProduct: return "zero-product";
    case M1Method::SupOverGrid: return "sup-over-grid";
    case M1Method::Extrapolated: return "extrapolated";
  }
  return "?";
}

struct M1Estimate {
  double value = 0;  // may be +inf
  M1Method method = M1Method::SupOverGrid;
  bool heuristic = false;       // the +inf verdict from the growth-ratio rule
  std::optional<bool> zero_free;  // nullopt when undecided
  std::string note;
};

namespace detail {

// Margin on a grid circle: min |m| over the samples less the sampling gap.
inline double rouche_margin(const Weight& m, double r, std::size_t k) {
  const ZeroCount zc = count_zeros(m, r, k);
  double dmax = 0, rp = 1;
  const auto& s = m.series();
  for (std::size_t n = 1; n < s.order(); ++n, rp *= r) dmax += double(n) * std::abs(s[n]) * rp;
  return zc.min_abs - dmax * std::numbers::pi * r / double(zc.nodes);
}

}  // namespace detail

/// M_1 = sup_{r<1} M_r. Known zeros give it in closed form: |m(0)| without
/// zeros, |c| prod 1/|a| otherwise. Without a zero list, a zero-free
/// certificate (no winding on any grid circle and a positive margin) also
/// gives |m(0)|; failing that, the sup over the grid is extrapolated to r = 1.
inline M1Estimate m_one(const Weight& m, const std::vector<double>& r_grid = {0.5, 0.9, 0.99, 0.999},
                        const QuadOptions& qopt = {}) {
  for (double r : r_grid)
    if (!(r > 0 && r < 1)) throw Error(Errc::InvalidArgument, "grid radii must lie in (0, 1)");
  M1Estimate est;
  if (auto zs = m.zeros()) {
    if (zs->empty()) {
      est.value = std::abs(m.m0());
      est.method = M1Method::ExactZeroFree;
      est.zero_free = true;
      return est;
    }
    std::size_t k0 = 0;
    double v = 1;
    for (const auto& z : *zs) {
      const double a = std::abs(z.location);
      if (a < 1e-14) {
        k0 += std::size_t(z.multiplicity);
      } else {
        v /= std::pow(a, z.multiplicity);
      }
    }
    est.value = std::abs(m.series()[std::min(k0, m.order() - 1)]) * v;
    est.method = M1Method::ZeroProduct;
    est.zero_free = false;
    return est;
  }

  bool zero_free = true;
  bool decided = true;
  for (double r : r_grid) {
    try {
      const ZeroCount zc = count_zeros(m, r);
      if (zc.count != 0) {
        zero_free = false;
      } else if (detail::rouche_margin(m, r, zc.nodes) <= 0) {
        decided = false;
      }
    } catch (const Error&) {
      decided = false;
    }
  }
  if (zero_free && decided) {
    est.value = std::abs(m.m0());
    est.method = M1Method::ExactZeroFree;
    est.zero_free = true;
    return est;
  }
  if (!zero_free) est.zero_free = false;

  std::vector<double> rs = r_grid;
  std::sort(rs.begin(), rs.end());
  std::vector<double> vals;
  for (double r : rs) vals.push_back(m_r_quadrature(m, r, qopt).value);
  int growth = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    growth = vals[i] > 1.5 * vals[i - 1] ? growth + 1 : 0;
    if (growth >= 3) {
      est.value = std::numeric_limits<double>::infinity();
      est.method = M1Method::Extrapolated;
      est.heuristic = true;
      est.note = "three successive growth ratios above 1.5";
      return est;
    }
  }
  est.value = *std::max_element(vals.begin(), vals.end());
  est.method = M1Method::SupOverGrid;
  if (vals.size() >= 2) {
    const std::size_t n = vals.size();
    const double slope = (vals[n - 1] - vals[n - 2]) / (rs[n - 1] - rs[n - 2]);
    const double extrap = vals[n - 1] + slope * (1.0 - rs[n - 1]);
    if (extrap > est.value) {
      est.value = extrap;
      est.method = M1Method::Extrapolated;
    }
  }
  return est;
}

/// M* by the midpoint rule on the boundary modulus; midpoints avoid t = 0,
/// where the builtin weights put their boundary zeros.
inline double m_star(const Weight& m, std::size_t k = std::size_t(1) << 16) {
  if (!m.has_boundary()) throw Error(Errc::Unavailable, "no boundary evaluator for " + m.describe());
  if (k == 0) throw Error(Errc::InvalidArgument, "K must be positive");
  detail::CompensatedSum s;
  for (std::size_t j = 0; j < k; ++j) s.add(m.boundary_log_abs(2.0 * std::numbers::pi * (double(j) + 0.5) / double(k)));
  return std::exp(s.value() / double(k));
}

struct JensenRow {
  double r = 0;
  double m_r_quad = 0;
  std::optional<double> m_r_zeros;
  std::optional<int> zero_count;
  bool nudged = false;
  std::size_t nodes = 0;
};

struct JensenProfile {
  std::vector<JensenRow> rows;
  M1Estimate m1;
  std::optional<double> mstar;
};

/// Rows are computed in parallel and stored in grid order.
inline JensenProfile jensen_profile(const Weight& m, const std::vector<double>& r_grid, bool with_mstar = true,
                                    std::size_t mstar_nodes = std::size_t(1) << 16, unsigned threads = 1,
                                    const QuadOptions& qopt = {}) {
  JensenProfile p;
  p.rows.resize(r_grid.size());
  const auto zs = m.zeros();
  parallel_for(r_grid.size(), threads, [&](std::size_t i) {
    JensenRow row;
    const QuadResult q = m_r_quadrature(m, r_grid[i], qopt);
    row.r = q.r;
    row.m_r_quad = q.value;
    row.nudged = q.nudged;
    row.nodes = q.nodes;
    if (zs) {
      row.m_r_zeros = m_r_zeros(m, q.r);
      int c = 0;
      for (const auto& z : *zs)
        if (std::abs(z.location) < q.r) c += z.multiplicity;
      row.zero_count = c;
    } else {
      try {
        row.zero_count = count_zeros(m, q.r).count;
      } catch (const Error&) {
      }
    }
    p.rows[i] = row;
  });
  p.m1 = m_one(m, r_grid, qopt);
  if (with_mstar && m.has_boundary()) p.mstar = m_star(m, mstar_nodes);
  return p;
}

}  // namespace wcop
