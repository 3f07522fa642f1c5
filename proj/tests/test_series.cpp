#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wcop/series.hpp"

using namespace wcop;

namespace {

std::vector<cplx> vec(const Series& s) { return {s.coeffs().begin(), s.coeffs().end()}; }

void expect_coeffs(const Series& s, const std::vector<cplx>& want, double tol = 1e-14) {
  ASSERT_EQ(s.order(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_LT(std::abs(s[i] - want[i]), tol) << "index " << i;
}

}  // namespace

TEST(SeriesConstruction, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Series(std::size_t(0)), Error);
  EXPECT_THROW(Series(std::vector<cplx>{}), Error);
  EXPECT_THROW(Series({cplx(1), cplx(std::nan(""), 0)}), Error);
  EXPECT_THROW(Series({cplx(std::numeric_limits<double>::infinity(), 0)}), Error);
}

TEST(SeriesAdd, Examples) {
  expect_coeffs(add(Series({1, 1}), Series({1, -1})), {2, 0});
  const Series f({0.5, cplx(0, 2), -3});
  expect_coeffs(add(f, Series(3)), vec(f));
  expect_coeffs(add(Series({0, 1, 0, 0}), Series({0, 0, 1, 0})), {0, 1, 1, 0});
}

TEST(SeriesAdd, OrderPolicy) {
  EXPECT_THROW(add(Series(3), Series(4)), Error);
  EXPECT_EQ(add(Series(3), Series(4), OrderPolicy::TruncateToMin).order(), 3u);
  try {
    mul(Series(2), Series(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OrderMismatch);
  }
}

TEST(SeriesMul, Examples) {
  expect_coeffs(mul(Series({1, 1, 0, 0}), Series({1, -1, 0, 0})), {1, 0, -1, 0});
  const Series f({1, 2, 3, cplx(0, 4)});
  expect_coeffs(mul(f, Series::constant(1, 4)), vec(f));
  std::vector<cplx> geo(8, 1.0), one_minus_z(8);
  one_minus_z[0] = 1;
  one_minus_z[1] = -1;
  const auto want = oracle::convolve(geo, one_minus_z, 8);
  expect_coeffs(mul(Series(geo), Series(one_minus_z)), want);
  expect_coeffs(mul(Series(geo), Series(one_minus_z)), {1, 0, 0, 0, 0, 0, 0, 0});
}

TEST(SeriesMul, MatchesFullConvolutionOracle) {
  oracle::Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = rng.index(1, 40);
    std::vector<cplx> a(n), b(n);
    for (auto& v : a) v = rng.in_bidisc();
    for (auto& v : b) v = rng.in_bidisc();
    EXPECT_LT(oracle::max_diff(vec(mul(Series(a), Series(b))), oracle::convolve(a, b, n)), 1e-13);
  }
}

TEST(SeriesMul, CommutativeAndAssociative) {
  oracle::Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = rng.index(1, 64);
    std::vector<cplx> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.in_disc();
      b[i] = rng.in_disc();
      c[i] = rng.in_disc();
    }
    const Series A(a), B(b), C(c);
    EXPECT_LT(oracle::max_diff(vec(A * B), vec(B * A)), 1e-12);
    EXPECT_LT(oracle::max_diff(vec((A * B) * C), vec(A * (B * C))), 1e-12);
  }
}

TEST(SeriesExp, Examples) {
  expect_coeffs(exp_series(Series(3)), {1, 0, 0});
  expect_coeffs(exp_series(Series({0, 1, 0, 0, 0})), {1, 1, 0.5, 1.0 / 6, 1.0 / 24}, 1e-15);
  // log(1+z) = sum (-1)^{n+1} z^n / n
  std::vector<cplx> l(64);
  for (std::size_t n = 1; n < 64; ++n) l[n] = (n % 2 ? 1.0 : -1.0) / double(n);
  std::vector<cplx> want(64);
  want[0] = want[1] = 1;
  expect_coeffs(exp_series(Series(l)), want, 1e-12);
}

TEST(SeriesExp, OverflowIsReported) {
  try {
    exp_series(Series({cplx(800, 0), 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Overflow);
  }
}

TEST(SeriesLog, Examples) {
  expect_coeffs(log_series(Series::constant(1, 5)), {0, 0, 0, 0, 0});
  std::vector<cplx> p(32);
  p[1] = 1;
  p[3] = 1;
  expect_coeffs(log_series(exp_series(Series(p))), p, 1e-12);
  try {
    log_series(Series({0, 1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroConstantTerm);
  }
}

TEST(SeriesLog, PrincipalBranchOfConstantTerm) {
  const Series g = log_series(Series({cplx(-1, 0), 0.5}));
  EXPECT_NEAR(g[0].imag(), std::numbers::pi, 1e-15);
  EXPECT_NEAR(std::abs(g[0].real()), 0, 1e-15);
}

TEST(SeriesLog, ExpLogRoundTrip) {
  oracle::Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = rng.index(1, 256);
    std::vector<cplx> f(n);
    // dominant constant term keeps f zero-free on the closed disc
    const double c0 = std::exp(rng.uniform(std::log(1e-6), std::log(2.0)));
    f[0] = std::polar(c0, rng.uniform(-3, 3));
    for (std::size_t i = 1; i < n; ++i) f[i] = rng.in_disc(0.4 * c0) * std::pow(0.5, double(i));
    EXPECT_LT(oracle::max_diff(vec(exp_series(log_series(Series(f)))), f), 1e-10) << "trial " << t;
  }
}

TEST(SeriesRotation, Examples) {
  const cplx beta = std::polar(1.0, 0.7);
  const Series zk = Series::monomial(5, 8);
  EXPECT_LT(std::abs(compose_rotation(zk, beta)[5] - std::pow(beta, 5)), 1e-15);
  const Series f({1, 2, 3});
  expect_coeffs(compose_rotation(f, cplx(1, 0)), vec(f));
  expect_coeffs(compose_rotation(Series({1, 1, 1}), cplx(0, 1)), {1, cplx(0, 1), -1}, 1e-15);
  try {
    compose_rotation(f, cplx(1.1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotUnimodular);
  }
}

TEST(SeriesRotation, InverseRotationRoundTrip) {
  oracle::Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> f(200);
    for (auto& v : f) v = rng.in_disc();
    const cplx b = std::polar(1.0, rng.uniform(0, 6.3));
    const Series g = compose_rotation(compose_rotation(Series(f), b), std::conj(b));
    EXPECT_LT(oracle::max_diff(vec(g), f), 1e-13);
  }
}

TEST(SeriesMobius, AlphaZeroIsReflection) {
  const Series f({1, 2, 3, 4, 5});
  expect_coeffs(compose_mobius(f, cplx(0)), {1, -2, 3, -4, 5});
}

TEST(SeriesMobius, IdentityGivesPsiExpansion) {
  // (a - z)/(1 - conj(a) z) = a + sum_{n>=1} (|a|^2 - 1) conj(a)^{n-1} z^n
  const cplx a(0.3, -0.4);
  const Series s = compose_mobius(Series::monomial(1, 30), a);
  EXPECT_LT(std::abs(s[0] - a), 1e-15);
  for (std::size_t n = 1; n < 30; ++n)
    EXPECT_LT(std::abs(s[n] - (std::norm(a) - 1.0) * std::pow(std::conj(a), double(n - 1))), 1e-14) << n;
}

TEST(SeriesMobius, Involution) {
  oracle::Rng rng(15);
  for (const cplx a : {cplx(0.3, 0), cplx(0, 0.5), cplx(-0.35, 0.35), cplx(0.1, 0.2)}) {
    std::vector<cplx> f(128);
    for (std::size_t i = 0; i < 128; ++i) f[i] = rng.in_disc() * std::pow(0.5, double(i));
    const Series g = compose_mobius(compose_mobius(Series(f), a), a);
    EXPECT_LT(oracle::max_diff(vec(g), f), a == cplx(0.3, 0) ? 1e-10 : 1e-9) << a;
  }
  EXPECT_THROW(compose_mobius(Series({1, 1}), cplx(1, 0)), Error);
}

TEST(SeriesMobius, MatchesPointwiseComposition) {
  const cplx a(0.25, 0.2);
  std::vector<cplx> f(48);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(cplx(0.5, 0.3), double(i));
  const Series g = compose_mobius(Series(f), a);
  for (const cplx z : {cplx(0.1, 0.1), cplx(-0.2, 0.05)}) {
    const cplx psi = (a - z) / (1.0 - std::conj(a) * z);
    cplx want = 0;
    for (std::size_t i = f.size(); i-- > 0;) want = want * psi + f[i];
    EXPECT_LT(std::abs(eval(g, z) - want), 1e-10);
  }
}

TEST(SeriesRadius, Examples) {
  std::vector<cplx> half(256), two(256);
  for (std::size_t n = 0; n < 256; ++n) {
    half[n] = std::pow(0.5, double(n));
    two[n] = std::pow(2.0, double(n));
  }
  const auto a = radius_estimate(Series(half));
  EXPECT_NEAR(a.value, 2.0, 0.1);
  EXPECT_EQ(a.confidence, Confidence::Convergent);
  const auto b = radius_estimate(Series(two));
  EXPECT_NEAR(b.value, 0.5, 0.025);
  EXPECT_EQ(b.confidence, Confidence::Divergent);
  const auto c = radius_estimate(Series({1, 2, 3, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_TRUE(std::isinf(c.value));
  EXPECT_EQ(c.confidence, Confidence::Convergent);
}

TEST(SeriesRadius, GeometricFamily) {
  for (const double rho : {0.5, 0.9, 1.1, 2.0}) {
    std::vector<cplx> c(512);
    for (std::size_t n = 0; n < 512; ++n) c[n] = std::pow(rho, -double(n));
    const auto est = radius_estimate(Series(c));
    EXPECT_NEAR(est.value, rho, 0.05 * rho) << rho;
  }
}

TEST(SeriesRadius, BorderlineBandAndShortWindow) {
  std::vector<cplx> c(64, 1.0);
  EXPECT_EQ(radius_estimate(Series(c)).confidence, Confidence::Borderline);
  const auto est = radius_estimate(Series(c), 0, 5);
  EXPECT_EQ(est.confidence, Confidence::Borderline);
  EXPECT_FALSE(est.note.empty());
  EXPECT_THROW(radius_estimate(Series(c), 10, 100), Error);
}

TEST(SeriesShift, Examples) {
  expect_coeffs(shift_up(Series({1, 0, 0})), {0, 1, 0, 0});
  const Series f({1, 2, 3});
  expect_coeffs(shift_down(shift_up(f)), vec(f));
  EXPECT_THROW(shift_down(Series({1, 2, 3})), Error);
}

TEST(SeriesEval, Examples) {
  EXPECT_EQ(eval(Series({1, 1}), cplx(0.5)), cplx(1.5));
  const auto ones = eval_circle(Series::constant(1, 3), 0.7, 4);
  for (const auto& v : ones) EXPECT_EQ(v, cplx(1));
  const auto s = eval_circle(Series({0, 1}), 0.5, 4);
  const std::vector<cplx> want{0.5, cplx(0, 0.5), -0.5, cplx(0, -0.5)};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(s[j], want[j]);
  EXPECT_THROW(eval(Series({1}), cplx(1, 0)), Error);
  EXPECT_THROW(eval_circle(Series({1}), 0.5, 6), Error);
  EXPECT_THROW(eval_circle(Series({1}), 1.0, 4), Error);
}
