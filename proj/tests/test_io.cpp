#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "wcop/io.hpp"

using namespace wcop;
namespace fs = std::filesystem;

namespace {

std::vector<cplx> vec(const Series& s) { return {s.coeffs().begin(), s.coeffs().end()}; }

Weight parse(const std::string& text, std::size_t order = 16) { return io::parse_weight_arg(text, order); }

}  // namespace

TEST(Io, NumbersAndComplex) {
  EXPECT_EQ(io::num(1.5).dump(), "1.5");
  EXPECT_EQ(io::num(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::num(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::num(std::nan("")), "nan");
  EXPECT_EQ(io::to_json(cplx(1, -2)).dump(), "[1.0,-2.0]");
  EXPECT_EQ(io::parse_complex(nlohmann::json::parse("3")), cplx(3, 0));
  EXPECT_EQ(io::parse_complex(nlohmann::json::parse("[0.5, -1]")), cplx(0.5, -1));
  EXPECT_THROW(io::parse_complex(nlohmann::json::parse("[1, 2, 3]")), Error);
  EXPECT_THROW(io::parse_complex(nlohmann::json::parse("\"x\"")), Error);
}

TEST(Io, InlineWeights) {
  EXPECT_EQ(vec(parse(R"({"type":"poly","coeffs":[1,[0,2]]})", 4).series()),
            (std::vector<cplx>{1, cplx(0, 2), 0, 0}));
  const auto e = parse(R"({"type":"exp","coeffs":[0,0.5]})", 32);
  EXPECT_LT(oracle::max_diff(vec(e.series()), vec(exp_series(Series::monomial(1, 32, 0.5)))), 1e-16);
  EXPECT_EQ(vec(parse(R"({"type":"series","coeffs":[1,0.5]})", 3).series()), (std::vector<cplx>{1, 0.5, 0}));
  EXPECT_EQ(parse(R"({"type":"builtin","name":"one"})").m0(), cplx(1));
  EXPECT_NEAR(parse(R"({"type":"builtin","name":"example76"})").m0().real(), std::exp(-1.0), 1e-16);
  EXPECT_EQ(parse(R"({"type":"builtin","name":"monomial","k":3})").series()[3], cplx(1));
  EXPECT_EQ(parse(R"j({"type":"builtin","name":"monomial(2)"})j").series()[2], cplx(1));
  EXPECT_EQ(parse(R"({"type":"builtin","name":"shifted","alpha":[0.1,0.2]})").m0(), -cplx(0.1, 0.2));
  EXPECT_EQ(parse(R"j({"type":"builtin","name":"shifted(0.25,-0.5)"})j").m0(), -cplx(0.25, -0.5));
}

TEST(Io, MalformedWeights) {
  for (const char* bad : {R"({"type":"poly"})", R"({"type":"poly","coeffs":[]})", R"({"coeffs":[1]})",
                          R"({"type":"nope"})", R"({"type":"builtin","name":"bogus"})",
                          R"({"type":"builtin","name":"shifted"})", R"({"type":"poly","coeffs":[0,0]})", "{not json",
                          "[1,2]", "@/nonexistent/weight.json"}) {
    try {
      parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidArgument) << bad;
    }
  }
}

TEST(Io, SampleFiles) {
  const fs::path dir = WCOP_SAMPLES_DIR;
  const auto e76 = parse("@" + (dir / "example76.json").string(), 64);
  EXPECT_EQ(vec(e76.series()), vec(Weight::example76(64).series()));
  const auto sh = parse("@" + (dir / "poly_shifted.json").string(), 8);
  ASSERT_EQ(sh.zeros()->size(), 1u);
  EXPECT_LT(std::abs(sh.zeros()->front().location - 0.5), 1e-15);
  const auto ex = parse("@" + (dir / "exp_half.json").string(), 8);
  EXPECT_NEAR(ex.series()[1].real(), 0.5, 1e-16);
  // relative path inside the file resolves against the file's directory
  const auto g = parse("@" + (dir / "series_geometric.json").string(), 32);
  for (std::size_t k = 0; k < 32; ++k) EXPECT_EQ(g.series()[k], cplx(std::ldexp(1.0, -int(k)))) << k;
}

TEST(Io, VerdictJsonAndCsv) {
  const Operator T(Weight::monomial(1, 64), Rotation::aperiodic(XiValue::golden()));
  const auto v = classify(T, 2.0);
  const auto j = io::to_json(v);
  EXPECT_EQ(j["class"], "WaelbroeckResolvent");
  EXPECT_EQ(j["class_code"], 3);
  EXPECT_EQ(j["lambda"].dump(), "[2.0,0.0]");
  EXPECT_FALSE(j["rule"].get<std::string>().empty());

  const auto g = portrait(T, {-1.5, 1.5, -1.5, 1.5, 3});
  const auto csv = io::portrait_csv(g);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "re,im,class,rule,certificate_scalar");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string re, im, cls;
    std::getline(ls, re, ',');
    std::getline(ls, im, ',');
    std::getline(ls, cls, ',');
    EXPECT_EQ(std::stoi(cls), static_cast<int>(g.verdicts[rows].cls)) << line;
    EXPECT_EQ(std::stod(re), g.verdicts[rows].lam.real());
    ++rows;
  }
  EXPECT_EQ(rows, 9u);

  const auto pj = io::to_json(g);
  int total = 0;
  for (const auto& [k, n] : pj["class_counts"].items()) total += n.get<int>();
  EXPECT_EQ(total, 9);
  EXPECT_EQ(pj["points"].size(), 9u);
}

TEST(Io, ResolventAndProfileJson) {
  const Operator T(Weight::monomial(1, 32), Rotation::aperiodic(XiValue::golden()));
  const auto s = solve(T, 0.5, Series::constant(1, 32));
  const auto j = io::to_json(s);
  EXPECT_EQ(j["coeffs"].size(), 32u);
  EXPECT_EQ(j["verdict"], to_string(s.verdict));
  const auto p = jensen_profile(Weight::monomial(1, 16), {0.25, 0.5}, true, 1 << 12);
  const auto pj = io::to_json(p);
  ASSERT_EQ(pj["rows"].size(), 2u);
  EXPECT_NEAR(pj["rows"][1]["M_r_quad"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(pj["rows"][1]["zero_count"], 1);
  const auto csv = io::jensen_csv(p);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,M_r_quad,M_r_zeros,zero_count");
}
