#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wcop/classifier.hpp"

using namespace wcop;
using VC = VerdictClass;

namespace {

const Rotation& golden() {
  static const Rotation r = Rotation::aperiodic(XiValue::golden(), 2.5);
  return r;
}

struct Fixture {
  const char* name;
  Weight m;
};

std::vector<Fixture> aperiodic_fixtures(std::size_t n) {
  return {{"exp(z/2)", Weight::exp_poly({0, 0.5}, n)},
          {"1+z/2", Weight::poly({1, 0.5}, n)},
          {"z-0.3", Weight::shifted(0.3, n)},
          {"(z-0.5)(z+0.6i)/0.3", Weight::poly({cplx(0, -1), cplx(-5.0 / 3, 2), 1.0 / 0.3}, n)},
          {"example76", Weight::example76(n)}};
}

}  // namespace

TEST(Classify, SpecExamples) {
  const Operator one(Weight::one(256), golden());
  const auto e = classify(one, golden().power(5));
  EXPECT_EQ(e.cls, VC::Eigenvalue);
  EXPECT_EQ(e.cert.kind, "eigen-residual");
  EXPECT_EQ(e.cert.scalar, 0);

  const auto r = classify(one, std::polar(1.0, 2 * std::numbers::pi / 3));
  EXPECT_EQ(r.cls, VC::Resolvent_NotWaelbroeck);
  EXPECT_EQ(r.rule, "diophantine-rational");

  const auto z = classify(Operator(Weight::monomial(1, 256), golden()), 0.5);
  EXPECT_EQ(z.cls, VC::InSpectrum);
  EXPECT_EQ(z.rule, "divergent-resolvent");
  EXPECT_NEAR(z.cert.scalar, 0.5, 0.01);

  const auto x = classify(Operator(Weight::example76(1024), golden()), 0.5);
  EXPECT_EQ(x.cls, VC::WaelbroeckResolvent);
  EXPECT_FALSE(x.rule.empty());

  const auto p = classify(Operator(Weight::one(16), Rotation::periodic(1, 2)), cplx(0, 1));
  EXPECT_TRUE(is_resolvent_class(p.cls));
}

TEST(Classify, ZeroFreeCircle) {
  const Operator T(Weight::exp_poly({0.2, 0.5}, 128), golden());
  const double a0 = std::exp(0.2);
  EXPECT_EQ(classify(T, 0.5 * a0).cls, VC::WaelbroeckResolvent);
  EXPECT_EQ(classify(T, 1.5 * a0).cls, VC::WaelbroeckResolvent);
  EXPECT_EQ(classify(T, a0).cls, VC::Eigenvalue);
  // a circle point off the orbit: open in the theory
  const auto u = classify(T, a0 * std::polar(1.0, 0.123456));
  EXPECT_EQ(u.cls, VC::Undetermined);
  EXPECT_EQ(u.rule, "circle-open");
  // without diophantine data the rational point is undetermined too
  const auto bare = classify(Operator(Weight::one(64), Rotation::aperiodic(XiValue::golden())),
                             std::polar(1.0, 2 * std::numbers::pi / 3));
  EXPECT_EQ(bare.cls, VC::Undetermined);
}

TEST(Classify, ConditionFailureGivesNonEigenSpectrum) {
  std::vector<cplx> a(64);
  for (std::size_t q = 1, r = 2; q < 64; q = std::exchange(r, q + r))
    a[q] = std::abs(1.0 - golden().power(q)) * std::pow(2.0, double(q));
  const Operator T(Weight::exp_poly(a, 64), golden());
  const auto v = classify(T, T.m0());
  EXPECT_EQ(v.cls, VC::InSpectrum);
  EXPECT_EQ(v.rule, "forced-point");
}

TEST(Classify, VanishingWeightRegions) {
  const Operator T(Weight::shifted(0.3, 128), golden());  // M1 = 1
  EXPECT_EQ(classify(T, 0).cls, VC::InSpectrum);
  EXPECT_EQ(classify(T, 0).rule, "origin-not-surjective");
  EXPECT_EQ(classify(T, 1.2).cls, VC::WaelbroeckResolvent);
  EXPECT_EQ(classify(T, cplx(0, 1.005)).cls, VC::Undetermined);
  const auto f = classify(T, -0.3 * golden().power(4));
  EXPECT_EQ(f.cls, VC::InSpectrum);
  EXPECT_EQ(f.rule, "forced-point");
  const auto in = classify(T, cplx(0.2, 0.5));
  EXPECT_TRUE(in.cls == VC::InSpectrum || in.cls == VC::InWaelbroeckSpectrum_NotKnownInSpectrum) << in.rule;
}

TEST(Classify, MonomialDiscIsSpectrum) {
  oracle::Rng rng(61);
  const Classifier cls(Operator(Weight::monomial(1, 256), golden()));
  for (int t = 0; t < 20; ++t) {
    const cplx in = rng.in_disc(0.9);
    if (std::abs(in) < 0.05) continue;
    EXPECT_EQ(cls.classify(in).cls, VC::InSpectrum) << in;
    const cplx out = std::polar(rng.uniform(1.05, 3), rng.uniform(0, 6.3));
    EXPECT_EQ(cls.classify(out).cls, VC::WaelbroeckResolvent) << out;
  }
}

TEST(Classify, UndecidedZeroFreenessDegrades) {
  ClassifierOptions opt;
  opt.r_grid = {0.5, 0.9};
  const auto v = classify(Operator(Weight::series({-0.9, 1}, 64), golden()), 2.0, opt);
  EXPECT_EQ(v.cls, VC::Undetermined);
  EXPECT_EQ(v.rule, "jensen-unavailable");
}

TEST(Classify, NonFiniteLambda) {
  EXPECT_THROW(classify(Operator(Weight::one(8), golden()), cplx(std::nan(""), 0)), Error);
}

TEST(ClassifyProperty, ForcedPointsNeverResolvent) {
  for (const auto& fx : aperiodic_fixtures(128)) {
    const Classifier cls(Operator(fx.m, golden()));
    for (std::size_t n = 0; n <= 32; ++n) {
      const auto v = cls.classify(fx.m.m0() * golden().power(n));
      EXPECT_FALSE(is_resolvent_class(v.cls)) << fx.name << " n=" << n << " " << v.rule;
    }
  }
}

TEST(ClassifyProperty, RotationalInvariance) {
  oracle::Rng rng(62);
  ClassifierOptions opt;
  opt.certify_resolvent = false;
  const cplx b = golden().beta();
  for (const auto& fx : aperiodic_fixtures(128)) {
    const Classifier cls(Operator(fx.m, golden()), opt);
    for (int t = 0; t < 1000; ++t) {
      const cplx lam = rng.in_disc(2.0);
      const auto v = cls.classify(lam);
      const auto w = cls.classify(b * lam);
      if (v.cls == VC::WaelbroeckResolvent) {
        // margin of two bands from every threshold
        const double thr = cls.m1() && *cls.m1()->zero_free ? std::abs(fx.m.m0()) : cls.m1()->value;
        if (std::abs(std::abs(lam) - thr) > 2 * std::max(opt.band_floor, opt.band_rel * thr)) {
          EXPECT_EQ(w.cls, VC::WaelbroeckResolvent) << fx.name << " " << lam;
        }
      }
      if (v.cls == VC::Eigenvalue || v.cls == VC::InSpectrum) {
        EXPECT_NE(w.cls, VC::WaelbroeckResolvent) << fx.name << " " << lam;
      }
    }
  }
}

TEST(ClassifyProperty, EigenvaluesReproduce) {
  for (const auto& fx : aperiodic_fixtures(256)) {
    const Operator T(fx.m, golden());
    const Classifier cls(T);
    for (std::size_t n = 0; n < 8; ++n) {
      const auto v = cls.classify(fx.m.m0() * golden().power(n));
      if (v.cls != VC::Eigenvalue) continue;
      EXPECT_LT(v.cert.scalar, 1e-9);
      EXPECT_LT(eigenfunction(T, n).residual, 1e-9) << fx.name << " n=" << n;
    }
  }
}

TEST(ClassifyProperty, NoEigenvalueWhenWeightVanishes) {
  oracle::Rng rng(63);
  for (const auto& fx : aperiodic_fixtures(128)) {
    if (!fx.m.zeros() || fx.m.zeros()->empty()) continue;
    const Classifier cls(Operator(fx.m, golden()));
    for (int t = 0; t < 200; ++t) EXPECT_NE(cls.classify(rng.in_disc(2.0)).cls, VC::Eigenvalue);
    for (std::size_t n = 0; n < 16; ++n)
      EXPECT_NE(cls.classify(fx.m.m0() * golden().power(n)).cls, VC::Eigenvalue);
  }
}

TEST(ClassifyPeriodic, StructuralCase) {
  // m = exp(0.2 + z), q = 2: eigenvalues +-e^{0.2}
  const Operator T(Weight::exp_poly({0.2, 1}, 64), Rotation::periodic(1, 2));
  const Classifier cls(T);
  EXPECT_TRUE(cls.structural_passed());
  EXPECT_EQ(cls.classify(std::exp(0.2)).cls, VC::Eigenvalue);
  EXPECT_EQ(cls.classify(-std::exp(0.2)).cls, VC::Eigenvalue);
  EXPECT_EQ(cls.classify(cplx(0, std::exp(0.2))).cls, VC::WaelbroeckResolvent);
  EXPECT_EQ(cls.classify(0.5).cls, VC::WaelbroeckResolvent);
}

TEST(ClassifyPeriodic, ImageOfDisc) {
  // m = exp(z^2), q = 2: m_2 = exp(2 z^2) covers the annulus e^-2 < |w| < e^2
  const Classifier cls(Operator(Weight::exp_poly({0, 0, 1}, 64), Rotation::periodic(1, 2)));
  EXPECT_FALSE(cls.structural_passed());
  EXPECT_EQ(cls.classify(1.0).cls, VC::InSpectrum);
  EXPECT_EQ(cls.classify(cplx(0.7, 0.7)).cls, VC::InSpectrum);
  EXPECT_EQ(cls.classify(3.0).cls, VC::WaelbroeckResolvent);
  EXPECT_EQ(cls.classify(0.2).cls, VC::WaelbroeckResolvent);
  // m = z, q = 2: m_2 = -z^2 covers the disc
  const Classifier z(Operator(Weight::monomial(1, 64), Rotation::periodic(1, 2)));
  EXPECT_EQ(z.classify(0.5).cls, VC::InSpectrum);
  EXPECT_EQ(z.classify(cplx(0, 1.5)).cls, VC::WaelbroeckResolvent);
}

TEST(ClassifyPeriodic, SymmetryUnderBeta) {
  oracle::Rng rng(64);
  for (const auto& [p, q] : {std::pair{1, 3}, {1, 4}, {2, 5}}) {
    const auto rot = Rotation::periodic(p, q);
    const Classifier cls(Operator(Weight::poly({1, 0.5, cplx(0, 0.3)}, 64), rot));
    for (int t = 0; t < 200; ++t) {
      const cplx lam = rng.in_disc(2.5);
      EXPECT_EQ(cls.classify(lam).cls, cls.classify(rot.beta() * lam).cls) << p << "/" << q << " " << lam;
    }
  }
}

TEST(Portrait, Example76Annulus) {
  const Operator T(Weight::example76(256), golden());
  const auto g = portrait(T, {-1, 1, -1, 1, 64}, {}, 2);
  ASSERT_EQ(g.verdicts.size(), 64u * 64u);
  const double r = std::exp(-1.0);
  std::size_t off = 0;
  for (const auto& v : g.verdicts) {
    if (v.cls == VC::WaelbroeckResolvent) continue;
    ++off;
    EXPECT_LE(std::abs(std::abs(v.lam) - r), std::max(1e-3, 0.02 * r) + 1e-12) << v.lam;
  }
  EXPECT_GT(off, 0u);
}

TEST(Portrait, MonomialDisc) {
  const auto g = portrait(Operator(Weight::monomial(1, 256), golden()), {-1.5, 1.5, -1.5, 1.5, 32});
  for (const auto& v : g.verdicts) {
    const double a = std::abs(v.lam);
    if (a < 0.9) {
      EXPECT_EQ(v.cls, VC::InSpectrum) << v.lam;
    } else if (a > 1.03) {
      EXPECT_EQ(v.cls, VC::WaelbroeckResolvent) << v.lam;
    }
  }
}

TEST(Portrait, PeriodicFourPoints) {
  const auto g = portrait(Operator(Weight::one(32), Rotation::periodic(1, 4)), {-1, 1, -1, 1, 3});
  int eig = 0;
  for (const auto& v : g.verdicts) {
    if (v.cls == VC::Eigenvalue) {
      ++eig;
      EXPECT_NEAR(std::abs(v.lam), 1.0, 1e-15);
    } else {
      EXPECT_EQ(v.cls, VC::WaelbroeckResolvent) << v.lam;
    }
  }
  EXPECT_EQ(eig, 4);
}

TEST(Portrait, DeterministicAcrossThreads) {
  const Operator T(Weight::shifted(0.3, 64), golden());
  const auto a = portrait(T, {-1.2, 1.2, -1.2, 1.2, 20}, {}, 1);
  const auto b = portrait(T, {-1.2, 1.2, -1.2, 1.2, 20}, {}, 4);
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    EXPECT_EQ(a.verdicts[i].cls, b.verdicts[i].cls);
    EXPECT_EQ(a.verdicts[i].rule, b.verdicts[i].rule);
  }
  EXPECT_THROW(grid_points({0, 1, 0, 1, 1}), Error);
  EXPECT_THROW(grid_points({0, 1, 0, 1, 2049}), Error);
}
