#pragma once

// JSON/CSV glue: weight specifications in, verdicts and profiles out.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcop/classifier.hpp"
#include "wcop/error.hpp"
#include "wcop/jensen.hpp"
#include "wcop/resolvent.hpp"
#include "wcop/rotation.hpp"
#include "wcop/series.hpp"
#include "wcop/weight.hpp"

namespace wcop::io {

using json = nlohmann::ordered_json;

/// Finite numbers as numbers; inf and nan as strings, since JSON has neither.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json to_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

inline json to_json(const Series& f) {
  json a = json::array();
  for (const auto& c : f.coeffs()) a.push_back(to_json(c));
  return a;
}

inline cplx parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(Errc::InvalidArgument, "expected a number or an [re, im] pair, got " + j.dump());
}

inline std::vector<cplx> parse_coeffs(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::InvalidArgument, "coefficients must be a nonempty array");
  std::vector<cplx> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(parse_complex(e));
  return v;
}

inline nlohmann::json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, "malformed JSON in " + p.string() + ": " + e.what());
  }
}

/// {"type":"poly","coeffs":[...]} | {"type":"exp","coeffs":[...]} |
/// {"type":"series","path":...} or {"type":"series","coeffs":[...]} |
/// {"type":"builtin","name":"one"|"example76"|"monomial"|"shifted", "k":.., "alpha":..}.
/// Builtin names also accept the forms monomial(k) and shifted(re,im).
inline Weight parse_weight(const nlohmann::json& j, std::size_t order, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw Error(Errc::InvalidArgument, "weight must be an object with a string \"type\"");
  const std::string type = j["type"];
  if (type == "poly") return Weight::poly(parse_coeffs(j.at("coeffs")), order);
  if (type == "exp") return Weight::exp_poly(parse_coeffs(j.at("coeffs")), order);
  if (type == "series") {
    if (j.contains("coeffs")) return Weight::series(parse_coeffs(j["coeffs"]), order);
    if (!j.contains("path") || !j["path"].is_string()) throw Error(Errc::InvalidArgument, "series weight needs a path");
    std::filesystem::path p = j["path"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return Weight::series(parse_coeffs(read_json_file(p)), order);
  }
  if (type == "builtin") {
    if (!j.contains("name") || !j["name"].is_string()) throw Error(Errc::InvalidArgument, "builtin weight needs a name");
    std::string name = j["name"];
    std::string arg;
    if (auto open = name.find('('); open != std::string::npos && name.back() == ')') {
      arg = name.substr(open + 1, name.size() - open - 2);
      name = name.substr(0, open);
    }
    if (name == "one") return Weight::one(order);
    if (name == "example76") return Weight::example76(order);
    if (name == "monomial") {
      long k = j.contains("k") ? j["k"].get<long>() : (arg.empty() ? -1 : std::stol(arg));
      if (k < 0) throw Error(Errc::InvalidArgument, "monomial needs k >= 0");
      return Weight::monomial(std::size_t(k), order);
    }
    if (name == "shifted") {
      cplx a;
      if (j.contains("alpha")) {
        a = parse_complex(j["alpha"]);
      } else if (!arg.empty()) {
        const auto comma = arg.find(',');
        a = comma == std::string::npos ? cplx(std::stod(arg), 0)
                                       : cplx(std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1)));
      } else {
        throw Error(Errc::InvalidArgument, "shifted needs alpha");
      }
      return Weight::shifted(a, order);
    }
    throw Error(Errc::InvalidArgument, "unknown builtin weight '" + name + "'");
  }
  throw Error(Errc::InvalidArgument, "unknown weight type '" + type + "'");
}

/// Inline JSON, or @path to a JSON file.
inline Weight parse_weight_arg(const std::string& arg, std::size_t order) {
  if (!arg.empty() && arg[0] == '@') {
    const std::filesystem::path p = arg.substr(1);
    return parse_weight(read_json_file(p), order, p.parent_path());
  }
  try {
    return parse_weight(nlohmann::json::parse(arg), order);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed weight JSON: ") + e.what());
  }
}

inline json to_json(const RadiusEstimate& r) {
  json j;
  j["value"] = num(r.value);
  j["window"] = json::array({r.window_begin, r.window_end});
  j["usable_points"] = r.usable_points;
  j["confidence"] = to_string(r.confidence);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json to_json(const ResolventSolution& s) {
  json j;
  j["coeffs"] = to_json(s.f);
  j["radius"] = to_json(s.radius);
  j["verdict"] = to_string(s.verdict);
  j["residual"] = num(s.residual);
  j["residual_abs"] = num(s.residual_abs);
  if (s.overflowed) j["overflowed"] = true;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

inline json to_json(const SpectralVerdict& v) {
  json j;
  j["lambda"] = to_json(v.lam);
  j["class"] = to_string(v.cls);
  j["class_code"] = static_cast<int>(v.cls);
  j["rule"] = v.rule;
  json c;
  c["kind"] = v.cert.kind;
  c["scalar"] = num(v.cert.scalar);
  if (!v.cert.detail.empty()) c["detail"] = v.cert.detail;
  if (v.cert.radius) c["radius"] = to_json(*v.cert.radius);
  j["certificate"] = c;
  return j;
}

inline json to_json(const M1Estimate& m) {
  json j;
  j["value"] = num(m.value);
  j["method"] = to_string(m.method);
  if (m.heuristic) j["heuristic"] = true;
  if (m.zero_free) j["zero_free"] = *m.zero_free;
  if (!m.note.empty()) j["note"] = m.note;
  return j;
}

inline json to_json(const JensenProfile& p) {
  json j;
  json rows = json::array();
  for (const auto& r : p.rows) {
    json row;
    row["r"] = r.r;
    row["M_r_quad"] = num(r.m_r_quad);
    row["M_r_zeros"] = r.m_r_zeros ? num(*r.m_r_zeros) : json(nullptr);
    row["zero_count"] = r.zero_count ? json(*r.zero_count) : json(nullptr);
    row["nodes"] = r.nodes;
    if (r.nudged) row["nudged"] = true;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["M1"] = to_json(p.m1);
  j["Mstar"] = p.mstar ? num(*p.mstar) : json(nullptr);
  return j;
}

inline std::string jensen_csv(const JensenProfile& p) {
  std::ostringstream os;
  os.precision(17);
  os << "r,M_r_quad,M_r_zeros,zero_count\n";
  for (const auto& r : p.rows) {
    os << r.r << ',' << r.m_r_quad << ',';
    if (r.m_r_zeros) os << *r.m_r_zeros;
    os << ',';
    if (r.zero_count) os << *r.zero_count;
    os << '\n';
  }
  return os.str();
}

inline json big_to_json(const BigInt& v) {
  if (v <= BigInt(std::numeric_limits<std::int64_t>::max())) return v.convert_to<std::int64_t>();
  return v.str();
}

inline json to_json(const DiophantineReport& r) {
  json j;
  json cv = json::array();
  for (const auto& [p, q] : r.convergents) cv.push_back(json::array({big_to_json(p), big_to_json(q)}));
  j["convergents"] = cv;
  j["r"] = json::array({r.p0, r.q0});
  j["K"] = r.inverse_distance.size();
  j["tau"] = r.tau ? num(*r.tau) : json(nullptr);
  j["gamma_hat"] = r.gamma_hat ? num(*r.gamma_hat) : json(nullptr);
  j["bound_constant"] = r.bound_constant ? num(*r.bound_constant) : json(nullptr);
  j["bound_checked_up_to"] = r.bound_valid_up_to;
  j["violations"] = r.violations.size();
  json first = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 16; ++i) first.push_back(r.violations[i]);
  j["first_violations"] = first;
  j["max_tail_root"] = num(r.max_tail_root);
  j["max_inverse_distance"] = num(r.max_inverse_distance);
  json roots = json::array();
  for (std::size_t k = 1; k <= r.growth_roots.size(); k *= 2)
    roots.push_back(json::array({k, num(r.growth_roots[k - 1])}));
  j["growth_roots_sampled"] = roots;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline std::string portrait_csv(const PortraitGrid& g) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im,class,rule,certificate_scalar\n";
  for (const auto& v : g.verdicts) {
    os << v.lam.real() << ',' << v.lam.imag() << ',' << static_cast<int>(v.cls) << ',' << v.rule << ',';
    if (!std::isnan(v.cert.scalar)) os << v.cert.scalar;
    os << '\n';
  }
  return os.str();
}

inline json to_json(const PortraitGrid& g) {
  json j;
  j["grid"] = {{"xmin", g.grid.xmin}, {"xmax", g.grid.xmax}, {"ymin", g.grid.ymin}, {"ymax", g.grid.ymax}, {"n", g.grid.n}};
  json counts = json::object();
  for (int c = 0; c <= 5; ++c) counts[to_string(VerdictClass(c))] = 0;
  json pts = json::array();
  for (const auto& v : g.verdicts) {
    counts[to_string(v.cls)] = counts[to_string(v.cls)].get<int>() + 1;
    pts.push_back(json::array({num(v.lam.real()), num(v.lam.imag()), static_cast<int>(v.cls), v.rule, num(v.cert.scalar)}));
  }
  j["class_counts"] = counts;
  j["columns"] = json::array({"re", "im", "class", "rule", "certificate_scalar"});
  j["points"] = pts;
  return j;
}

}  // namespace wcop::io
