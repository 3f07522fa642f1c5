// wcop: command-line front end for the weighted composition operator library.

#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcop/io.hpp"
#include "wcop/wcop.hpp"

namespace {

using wcop::cplx;
using wcop::Errc;
using wcop::Error;
using json = wcop::io::json;

constexpr int kExitPrecondition = 2;
constexpr int kExitUndetermined = 3;

struct Options {
  std::string weight;
  std::string weight_file;
  std::string beta;
  std::string xi;
  std::optional<double> tau;
  std::uint64_t gamma_depth = 1'000'000;
  std::string phi;
  std::size_t order = 256;
  std::size_t quad = 4096;
  std::size_t mstar_nodes = std::size_t(1) << 16;
  std::string out;
  std::string format = "json";
  bool strict = false;
  unsigned threads = 1;
  bool no_timestamp = false;

  std::string lambda;
  std::string rhs = "e0";
  std::string grid = "-1,1,-1,1,64";
  std::string r_grid = "0.5,0.9,0.99,0.999";
  bool mstar = false;
  std::size_t eigen_m = 0;
  std::size_t samples = 2;
  std::string r = "1/3";
  std::uint64_t k_max = 10000;
  double r0 = 2.0;
  std::size_t k_quad = 1024;
  std::string example;
};

std::vector<double> split_numbers(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  return v;
}

cplx parse_lambda(const std::string& s) {
  if (s.empty()) throw Error(Errc::InvalidArgument, "--lambda re,im is required");
  const auto v = split_numbers(s, "lambda");
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() != 2) throw Error(Errc::InvalidArgument, "--lambda expects re,im");
  return {v[0], v[1]};
}

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw Error(Errc::InvalidArgument, "expected p/q, got '" + s + "'");
  try {
    return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
  } catch (const std::logic_error&) {
    throw Error(Errc::InvalidArgument, "expected p/q, got '" + s + "'");
  }
}

wcop::Weight load_weight(const Options& o) {
  if (!o.weight.empty() && !o.weight_file.empty())
    throw Error(Errc::InvalidArgument, "give either --weight or --weight-file");
  if (!o.weight_file.empty()) return wcop::io::parse_weight_arg("@" + o.weight_file, o.order);
  if (o.weight.empty()) throw Error(Errc::InvalidArgument, "a weight is required (--weight or --weight-file)");
  return wcop::io::parse_weight_arg(o.weight, o.order);
}

std::optional<wcop::EllipticAutomorphism> load_phi(const Options& o) {
  if (o.phi.empty()) return std::nullopt;
  const auto v = split_numbers(o.phi, "phi");
  cplx c[4];
  if (v.size() == 4) {
    for (int i = 0; i < 4; ++i) c[i] = v[std::size_t(i)];
  } else if (v.size() == 8) {
    for (int i = 0; i < 4; ++i) c[i] = {v[std::size_t(2 * i)], v[std::size_t(2 * i + 1)]};
  } else {
    throw Error(Errc::InvalidArgument, "--phi expects a,b,c,d (real) or 8 numbers (re,im pairs)");
  }
  return wcop::fixed_point(c[0], c[1], c[2], c[3]);
}

wcop::Rotation load_rotation(const Options& o) {
  const int given = int(!o.beta.empty()) + int(!o.xi.empty()) + int(!o.phi.empty());
  if (given > 1) throw Error(Errc::InvalidArgument, "conflicting rotation flags: use one of --beta, --xi, --phi");
  if (given == 0) throw Error(Errc::InvalidArgument, "a rotation is required (--beta p/q, --xi, or --phi)");
  if (!o.beta.empty()) {
    auto [p, q] = parse_fraction(o.beta);
    if (q <= 0) throw Error(Errc::InvalidArgument, "--beta needs a positive denominator");
    const std::int64_t g = std::gcd(p, q);
    return wcop::Rotation::periodic(p / g, q / g);
  }
  if (!o.xi.empty()) return wcop::Rotation::aperiodic(wcop::XiValue::parse(o.xi), o.tau, o.gamma_depth);
  return load_phi(o)->rotation;
}

// The operator in rotation form: with --phi the weight is conjugated first.
struct Setup {
  wcop::Operator op;
  std::optional<wcop::EllipticAutomorphism> phi;
  double downgrade = 1;
};

Setup load_operator(const Options& o) {
  wcop::Weight m = load_weight(o);
  if (!o.phi.empty()) {
    if (!o.beta.empty() || !o.xi.empty())
      throw Error(Errc::InvalidArgument, "conflicting rotation flags: use one of --beta, --xi, --phi");
    auto phi = load_phi(o);
    auto red = wcop::reduce(m, *phi);
    return {std::move(red.op), phi, red.downgrade};
  }
  return {wcop::Operator(std::move(m), load_rotation(o)), std::nullopt, 1.0};
}

wcop::ClassifierOptions classifier_options(const Options& o) {
  wcop::ClassifierOptions c;
  c.quad.k0 = o.quad;
  c.r_grid = split_numbers(o.r_grid, "r-grid");
  return c;
}

json run_config(const Options& o, const std::string& command) {
  const wcop::ClassifierOptions c;
  json j;
  j["command"] = command;
  j["order"] = o.order;
  j["quad"] = o.quad;
  j["mstar_nodes"] = o.mstar_nodes;
  j["radius_band"] = wcop::RadiusOptions{}.band;
  j["radius_floor"] = wcop::RadiusOptions{}.floor;
  j["band_floor"] = c.band_floor;
  j["band_rel"] = c.band_rel;
  j["pole_tol"] = c.solve.pole_tol;
  j["snap_tol"] = c.snap_tol;
  j["eigen_tol"] = c.eigen_tol;
  j["disc_eps"] = c.disc_eps;
  j["r_grid"] = split_numbers(o.r_grid, "r-grid");
  j["threads"] = o.threads;
  j["format"] = o.format;
  if (!o.out.empty()) j["out"] = o.out;
  if (!o.weight.empty()) j["weight"] = o.weight;
  if (!o.weight_file.empty()) j["weight_file"] = o.weight_file;
  if (!o.beta.empty()) j["beta"] = o.beta;
  if (!o.xi.empty()) j["xi"] = o.xi;
  if (o.tau) j["tau"] = *o.tau;
  j["gamma_check_depth"] = o.gamma_depth;
  if (!o.phi.empty()) j["phi"] = o.phi;
  return j;
}

json operator_json(const Setup& s) {
  json j;
  j["weight"] = s.op.weight().describe();
  j["rotation"] = s.op.rotation().describe();
  j["m0"] = wcop::io::to_json(s.op.m0());
  if (const auto& d = s.op.rotation().diophantine()) {
    j["diophantine"] = {{"tau", d->tau}, {"gamma", d->gamma}, {"q_checked", d->q_checked}, {"q_at_min", d->q_at_min}};
  }
  json w = json::array();
  for (const auto& s2 : s.op.rotation().warnings()) w.push_back(s2);
  if (!w.empty()) j["warnings"] = w;
  if (s.phi) {
    j["conjugation"] = {{"alpha", wcop::io::to_json(s.phi->alpha)},
                        {"beta", wcop::io::to_json(s.phi->rotation.beta())},
                        {"downgrade", s.downgrade}};
  }
  return j;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(Errc::InvalidArgument, "cannot write " + o.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_json(const Options& o, json doc, const std::string& command) {
  doc["config"] = run_config(o, command);
  if (!o.no_timestamp) {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    doc["timestamp"] = buf;
  }
  emit(o, doc.dump(2));
}

wcop::Series parse_rhs(const std::string& s, std::size_t order) {
  if (s.size() >= 2 && s[0] == 'e') {
    const std::size_t k = std::stoul(s.substr(1));
    if (k >= order) throw Error(Errc::InvalidArgument, "e_k needs k below the order");
    return wcop::Series::monomial(k, order);
  }
  std::vector<cplx> c;
  try {
    c = wcop::io::parse_coeffs(s[0] == '@' ? wcop::io::read_json_file(s.substr(1)) : nlohmann::json::parse(s));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed --rhs: ") + e.what());
  }
  if (c.size() > order) throw Error(Errc::InvalidArgument, "--rhs is longer than the order");
  c.resize(order);
  return wcop::Series(std::move(c));
}

int cmd_classify(const Options& o) {
  const Setup s = load_operator(o);
  const wcop::Classifier cls(s.op, classifier_options(o));
  const auto v = cls.classify(parse_lambda(o.lambda));
  json doc;
  doc["operator"] = operator_json(s);
  doc["verdict"] = wcop::io::to_json(v);
  emit_json(o, doc, "classify");
  return (o.strict && v.cls == wcop::VerdictClass::Undetermined) ? kExitUndetermined : 0;
}

wcop::GridSpec parse_grid(const std::string& s) {
  const auto v = split_numbers(s, "grid");
  if (v.size() != 5) throw Error(Errc::InvalidArgument, "--grid expects xmin,xmax,ymin,ymax,n");
  return {v[0], v[1], v[2], v[3], std::size_t(v[4])};
}

int cmd_portrait(const Options& o) {
  const Setup s = load_operator(o);
  const auto g = wcop::portrait(s.op, parse_grid(o.grid), classifier_options(o), o.threads);
  if (o.format == "csv") {
    emit(o, "# config " + run_config(o, "portrait").dump() + "\n" + wcop::io::portrait_csv(g));
  } else {
    json doc;
    doc["operator"] = operator_json(s);
    doc["portrait"] = wcop::io::to_json(g);
    emit_json(o, doc, "portrait");
  }
  const bool all_undetermined = std::all_of(g.verdicts.begin(), g.verdicts.end(),
                                            [](const auto& v) { return v.cls == wcop::VerdictClass::Undetermined; });
  return (o.strict && all_undetermined) ? kExitUndetermined : 0;
}

int cmd_jensen(const Options& o) {
  const wcop::Weight m = load_weight(o);
  wcop::QuadOptions q;
  q.k0 = o.quad;
  const auto p = wcop::jensen_profile(m, split_numbers(o.r_grid, "r-grid"), o.mstar, o.mstar_nodes, o.threads, q);
  if (o.format == "csv") {
    emit(o, "# config " + run_config(o, "jensen").dump() + "\n" + wcop::io::jensen_csv(p));
  } else {
    json doc;
    doc["weight"] = m.describe();
    doc["jensen"] = wcop::io::to_json(p);
    emit_json(o, doc, "jensen");
  }
  return 0;
}

int cmd_eigen(const Options& o) {
  const Setup s = load_operator(o);
  json doc;
  doc["operator"] = operator_json(s);
  if (s.op.rotation().is_periodic()) {
    const auto pe = wcop::eigen_periodic(s.op, o.eigen_m, o.samples);
    doc["lambda"] = wcop::io::to_json(pe.lambda);
    doc["k"] = pe.k;
    json fs = json::array();
    for (std::size_t i = 0; i < pe.functions.size(); ++i)
      fs.push_back({{"free_index", pe.free_index[i]}, {"residual", wcop::io::num(pe.residuals[i])},
                    {"coeffs", wcop::io::to_json(pe.functions[i])}});
    doc["eigenfunctions"] = fs;
  } else {
    const auto ep = wcop::eigenfunction(s.op, o.eigen_m);
    doc["lambda"] = wcop::io::to_json(ep.lambda);
    doc["M"] = ep.M;
    doc["residual"] = wcop::io::num(ep.residual);
    doc["condition"] = wcop::io::to_json(ep.condition);
    doc["coeffs"] = wcop::io::to_json(ep.f);
  }
  emit_json(o, doc, "eigen");
  return 0;
}

int cmd_resolve(const Options& o) {
  const Setup s = load_operator(o);
  const auto sol = wcop::solve(s.op, parse_lambda(o.lambda), parse_rhs(o.rhs, s.op.order()));
  json doc = wcop::io::to_json(sol);
  doc["operator"] = operator_json(s);
  emit_json(o, doc, "resolve");
  return 0;
}

int cmd_diophantine(const Options& o) {
  const wcop::Rotation rot = load_rotation(o);
  auto [p, q] = parse_fraction(o.r);
  const auto rep = wcop::resolvent_growth(rot, p, q, o.k_max);
  json doc;
  doc["rotation"] = rot.describe();
  doc["report"] = wcop::io::to_json(rep);
  emit_json(o, doc, "diophantine");
  return 0;
}

int cmd_project(const Options& o) {
  const Setup s = load_operator(o);
  const auto f = parse_rhs(o.rhs, s.op.order());
  const auto pr = wcop::spectral_projection(s.op, o.r0, f, o.k_quad, o.threads);
  const auto pp = wcop::spectral_projection(s.op, o.r0, pr.pf, o.k_quad, o.threads);
  double idem = 0;
  for (std::size_t i = 0; i < f.order(); ++i) idem = std::max(idem, std::abs(pp.pf[i] - pr.pf[i]));
  json doc;
  doc["operator"] = operator_json(s);
  doc["r0"] = o.r0;
  doc["nodes"] = pr.nodes;
  doc["weakest_confidence"] = wcop::to_string(pr.weakest);
  doc["min_node_radius"] = wcop::io::num(pr.min_radius);
  doc["idempotence_defect"] = wcop::io::num(idem);
  doc["coeffs"] = wcop::io::to_json(pr.pf);
  emit_json(o, doc, "project");
  return 0;
}

int cmd_conjugate(const Options& o) {
  if (o.phi.empty()) throw Error(Errc::InvalidArgument, "conjugate needs --phi a,b,c,d");
  const Setup s = load_operator(o);
  const wcop::Weight m = load_weight(o);
  json doc;
  doc["operator"] = operator_json(s);
  doc["m_alpha"] = wcop::io::to_json(m.value(s.phi->alpha));
  doc["m_tilde_0"] = wcop::io::to_json(s.op.m0());
  doc["m_tilde_coeffs"] = wcop::io::to_json(s.op.weight().series().truncated(std::min<std::size_t>(16, s.op.order())));
  const wcop::Classifier cls(s.op, classifier_options(o));
  if (cls.m1()) {
    doc["R"] = wcop::io::to_json(*cls.m1());
    doc["R_label"] = "M1 of the conjugated weight";
  }
  int code = 0;
  if (!o.lambda.empty()) {
    const auto v = cls.classify(parse_lambda(o.lambda));
    doc["verdict"] = wcop::io::to_json(v);
    if (o.strict && v.cls == wcop::VerdictClass::Undetermined) code = kExitUndetermined;
  }
  emit_json(o, doc, "conjugate");
  return code;
}

int cmd_repro(Options o) {
  o.order = 1024;
  o.mstar_nodes = std::size_t(1) << 16;
  if (o.xi.empty() && o.beta.empty() && o.phi.empty()) o.xi = "golden";
  json doc;
  if (o.example == "example76") {
    o.weight = R"({"type":"builtin","name":"example76"})";
    const Setup s = load_operator(o);
    const auto prof = wcop::jensen_profile(s.op.weight(), split_numbers(o.r_grid, "r-grid"), true, o.mstar_nodes,
                                           o.threads);
    doc["operator"] = operator_json(s);
    doc["jensen"] = wcop::io::to_json(prof);
    doc["reference"] = {{"M1", std::exp(-1.0)}, {"Mstar_lower_bound", 2.0 * std::exp(-1.0)}};
    const wcop::Classifier cls(s.op, classifier_options(o));
    doc["lambda_0_5"] = wcop::io::to_json(cls.classify(0.5));
    const auto g = wcop::portrait(s.op, {-1, 1, -1, 1, 64}, classifier_options(o), o.threads);
    doc["portrait"] = wcop::io::to_json(g);
  } else if (o.example == "example77") {
    o.weight = R"({"type":"builtin","name":"monomial","k":1})";
    const Setup s = load_operator(o);
    json rows = json::array();
    for (int i = 1; i <= 9; ++i) {
      const double r = 0.1 * i;
      rows.push_back({{"r", r},
                      {"M_r_quad", wcop::m_r_quadrature(s.op.weight(), r).value},
                      {"M_r_zeros", wcop::m_r_zeros(s.op.weight(), r)}});
    }
    doc["operator"] = operator_json(s);
    doc["M_r"] = rows;
    const auto sol = wcop::solve(s.op, 0.5, wcop::Series::monomial(0, s.op.order()));
    doc["resolvent_lambda_0_5"] = {{"verdict", wcop::to_string(sol.verdict)},
                                   {"radius", wcop::io::to_json(sol.radius)},
                                   {"residual", wcop::io::num(sol.residual)},
                                   {"computed_terms", sol.f.order()}};
    const wcop::Classifier cls(s.op, classifier_options(o));
    doc["lambda_0_5"] = wcop::io::to_json(cls.classify(0.5));
  } else {
    throw Error(Errc::InvalidArgument, "repro knows example76 and example77");
  }
  emit_json(o, doc, "repro " + o.example);
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--weight", o.weight, "weight JSON, or @path");
  sub->add_option("--weight-file", o.weight_file, "path to a weight JSON file");
  sub->add_option("--beta", o.beta, "periodic rotation p/q");
  sub->add_option("--xi", o.xi, "aperiodic rotation: golden, sqrt2m1, or a decimal");
  sub->add_option("--tau", o.tau, "diophantine exponent (> 2)");
  sub->add_option("--gamma-check-depth", o.gamma_depth, "largest q in the gamma verification");
  sub->add_option("--phi", o.phi, "elliptic automorphism a,b,c,d");
  sub->add_option("--order", o.order, "truncation order N")->check(CLI::Range(1, 8192));
  sub->add_option("--quad", o.quad, "initial quadrature nodes K (power of two)");
  sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--strict", o.strict, "exit 3 when every verdict is Undetermined");
  sub->add_option("--threads", o.threads, "worker threads");
  sub->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp field");
  sub->add_option("--r-grid", o.r_grid, "Jensen grid radii");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of weighted composition operators Tf(z) = m(z) f(beta z) on Hol(D)"};
  app.require_subcommand(1);
  Options o;

  auto* classify = app.add_subcommand("classify", "classify one point lambda");
  add_common(classify, o);
  classify->add_option("--lambda", o.lambda, "re,im")->required();

  auto* portrait = app.add_subcommand("portrait", "classify a grid of points");
  add_common(portrait, o);
  portrait->add_option("--grid", o.grid, "xmin,xmax,ymin,ymax,n");

  auto* jensen = app.add_subcommand("jensen", "Jensen radii M_r, M_1 and M*");
  add_common(jensen, o);
  jensen->add_flag("--mstar", o.mstar, "also compute M*");
  jensen->add_option("--mstar-nodes", o.mstar_nodes, "boundary quadrature nodes");

  auto* eigen = app.add_subcommand("eigen", "eigenfunction at m(0) beta^M");
  add_common(eigen, o);
  eigen->add_option("--M", o.eigen_m, "power index M (k in the periodic case)");
  eigen->add_option("--samples", o.samples, "periodic case: perturbed free coefficients");

  auto* resolve = app.add_subcommand("resolve", "solve (lambda - T) f = g");
  add_common(resolve, o);
  resolve->add_option("--lambda", o.lambda, "re,im")->required();
  resolve->add_option("--rhs", o.rhs, "e_k, a JSON coefficient array, or @path");

  auto* dioph = app.add_subcommand("diophantine", "growth of 1/|beta^k - e^{2 pi i r}|");
  add_common(dioph, o);
  dioph->add_option("--r", o.r, "rational p/q");
  dioph->add_option("--K", o.k_max, "largest k (<= 1e6)");

  auto* project = app.add_subcommand("project", "contour spectral projection");
  add_common(project, o);
  project->add_option("--r0", o.r0, "contour radius");
  project->add_option("--rhs", o.rhs, "function to project");
  project->add_option("--quad-nodes", o.k_quad, "contour nodes");

  auto* conjugate = app.add_subcommand("conjugate", "reduce an elliptic automorphism to a rotation");
  add_common(conjugate, o);
  conjugate->add_option("--lambda", o.lambda, "optional point to classify");

  auto* repro = app.add_subcommand("repro", "reproduce a worked example (N = 1024, K = 2^16)");
  add_common(repro, o);
  repro->add_option("example", o.example, "example76 or example77")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitPrecondition;
  }

  try {
    if (*classify) return cmd_classify(o);
    if (*portrait) return cmd_portrait(o);
    if (*jensen) return cmd_jensen(o);
    if (*eigen) return cmd_eigen(o);
    if (*resolve) return cmd_resolve(o);
    if (*dioph) return cmd_diophantine(o);
    if (*project) return cmd_project(o);
    if (*conjugate) return cmd_conjugate(o);
    if (*repro) return cmd_repro(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return 0;
}
