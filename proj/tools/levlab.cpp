// levlab command-line front end: every computation is a subcommand that
// writes one JSON report or one CSV table.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levlab/levlab.hpp"

namespace {

using nlohmann::json;
using namespace levlab;

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kCostGuard = 4 };

struct RunConfig {
  std::string subcommand;
  std::string format;  // json or csv
  std::string out;     // empty: stdout

  double theta = 1.0;
  double r = 10.0 / 9.0;
  double R = 0.83;
  std::optional<double> Rgiven;
  double T = 0.0;
  long q = 0;
  double Q = 0.0;
  std::optional<long> chi;
  std::vector<double> X;
  std::optional<double> sigma;
  std::optional<double> qtilde;
  double tol = 1e-8;
  int grid = 64;
  SearchBox box{};
  std::string conductor = "analytic";
  std::string phi = "gaussian";
  double errorConstant = 2.0;

  json to_json() const {
    json j = {{"subcommand", subcommand}, {"format", format}, {"output", out.empty() ? "-" : out}};
    auto& p = j["parameters"];
    if (subcommand == "kappa") p = {{"theta", theta}, {"r", r}, {"R", R}};
    if (subcommand == "optimize" || subcommand == "surface")
      p = {{"theta", theta},
           {"grid", grid},
           {"tol", tol},
           {"box", {{"rLo", box.r_lo}, {"rHi", box.r_hi}, {"RLo", box.R_lo}, {"RHi", box.R_hi}}}};
    if (subcommand == "zeros" || subcommand == "count") p = {{"q", q}, {"chi", chi.value_or(-1)}, {"T", T}};
    if (subcommand == "moment")
      p = {{"q", q}, {"Q", Q}, {"T", T}, {"theta", theta}, {"r", r}, {"R", R}, {"conductor", conductor},
           {"phi", phi}};
    if (subcommand == "sums")
      p = {{"X", X}, {"r", r}, {"R", R}, {"sigma", sigma ? json(*sigma) : json(nullptr)},
           {"qtilde", qtilde ? json(*qtilde) : json(nullptr)}};
    if (subcommand == "bound")
      p = {{"q", q}, {"T", T}, {"theta", theta}, {"r", r}, {"R", Rgiven ? json(*Rgiven) : json("scan")},
           {"errorConstant", errorConstant}};
    return j;
  }
};

void validate(const RunConfig& c) {
  worker_count();  // LEVLAB_THREADS
  require(c.format == "json" || c.format == "csv", "--format must be json or csv");
  const auto& s = c.subcommand;
  const bool csv_ok = s == "surface" || s == "zeros" || s == "sums";
  require(c.format == "json" || csv_ok, s + ": csv output is not available");
  if (s == "kappa" || s == "optimize" || s == "surface")
    require(c.theta > 0.0 && c.theta <= 1.0, "--theta must lie in (0, 1]");
  if (s == "kappa") {
    require(c.r != 0.0, "--r must be nonzero");
    require(c.R > 0.0, "--R must be positive");
  }
  if (s == "optimize" || s == "surface") {
    require(c.grid >= 2, "--grid must be >= 2");
    require(c.tol > 0.0, "--tol must be positive");
  }
  if (s == "zeros" || s == "count" || s == "bound") {
    require(c.q >= 1, "--q must be >= 1");
    require(c.T > 0.0, "--T must be positive");
  }
  if (s == "moment") {
    require((c.q >= 1) != (c.Q > 0.0), "moment: give exactly one of --q and --Q");
    require(c.T > 0.0, "--T must be positive");
    require(c.theta > 0.0 && c.theta <= 1.0, "--theta must lie in (0, 1]");
    require(c.r != 0.0 && c.R > 0.0, "--r must be nonzero and --R positive");
    require(c.conductor == "analytic" || c.conductor == "arithmetic", "--conductor must be analytic or arithmetic");
    require(c.phi == "gaussian" || c.phi == "bump", "--phi must be gaussian or bump");
  }
  if (s == "sums") {
    require(!c.X.empty(), "sums: at least one --X");
    for (double x : c.X) require(x >= 2.0, "--X must be >= 2");
    require(c.r != 0.0, "--r must be nonzero");
    if (c.qtilde) require(*c.qtilde > 1.0, "--qtilde must exceed 1");
    if (c.sigma) require(*c.sigma < 0.5, "--sigma must be below 1/2");
  }
  if (s == "bound") {
    require(c.theta > 0.0, "--theta must be positive");
    require(c.r > 0.0, "--r must be positive");
    if (c.Rgiven) require(*c.Rgiven > 0.0, "--R must be positive");
  }
}

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

json comparison_json(const SumComparison& s) {
  return {{"X", s.X}, {"direct", s.direct}, {"asymptotic", s.asymptotic}, {"relError", s.relError}};
}

DirichletCharacter pick_character(long q, std::optional<long> index) {
  auto chars = enumerate_characters(q);
  if (index) {
    require(*index >= 0 && static_cast<std::size_t>(*index) < chars.size(), "--chi out of range for this modulus");
    const auto& chi = chars[static_cast<std::size_t>(*index)];
    require(chi.is_primitive(), "--chi must index a primitive character");
    return chi;
  }
  for (const auto& chi : chars)
    if (chi.is_primitive()) return chi;
  throw ValidationError("modulus has no primitive character");
}

json character_json(const DirichletCharacter& chi) {
  return {{"q", chi.modulus()}, {"index", chi.index()}, {"parity", chi.parity()}, {"order", chi.order()},
          {"real", chi.is_real()}};
}

struct Output {
  json report;       // used for json format
  std::string table;  // used for csv format
};

Output run_kappa(const RunConfig& c) {
  const LevinsonParams p{c.theta, c.r, c.R};
  const auto rep = constant_report(p);
  json j = {{"bigC", rep.bigC}, {"bigCstar", rep.bigCstar}, {"c", rep.c}, {"kappaPrime", rep.kappaPrime}};
  if (c.r == 1.0) j["cExplicitR1"] = levinson_c_r1(c.theta, c.R);
  return {j, {}};
}

Output run_optimize(const RunConfig& c) {
  const auto res = optimize_kappa(c.theta, c.box, c.tol, c.grid);
  return {{{"r", res.best.r},
           {"R", res.best.R},
           {"kappaPrime", res.kappaPrime},
           {"c", levinson_c(res.best)},
           {"evaluations", res.evaluations}},
          {}};
}

Output run_surface(const RunConfig& c) {
  const auto pts = kappa_surface(c.theta, c.grid, c.box);
  std::ostringstream csv;
  csv << "r,R,kappaPrime\n";
  json rows = json::array();
  for (const auto& p : pts) {
    csv << csv_number(p.r) << ',' << csv_number(p.R) << ',' << (std::isnan(p.kappaPrime) ? "" : csv_number(p.kappaPrime))
        << '\n';
    rows.push_back({p.r, p.R, std::isnan(p.kappaPrime) ? json(nullptr) : json(p.kappaPrime)});
  }
  return {{{"columns", {"r", "R", "kappaPrime"}}, {"rows", rows}}, csv.str()};
}

Output run_zeros(const RunConfig& c) {
  const auto chi = pick_character(c.q, c.chi);
  const auto list = find_critical_zeros(chi, c.T);
  std::ostringstream csv;
  csv << "gamma,simple\n";
  json zs = json::array();
  for (const auto& z : list.zeros) {
    csv << csv_number(z.gamma) << ',' << (z.simple ? 1 : 0) << '\n';
    zs.push_back({{"gamma", z.gamma}, {"simple", z.simple}});
  }
  json j = {{"character", character_json(chi)},
            {"zeros", zs},
            {"located", list.zeros.size()},
            {"simple", list.simple_count()},
            {"argumentCount", list.argument_count},
            {"suspectedMissed", list.suspected_missed},
            {"step", list.step},
            {"maxResidual", list.max_residual}};
  return {j, csv.str()};
}

Output run_count(const RunConfig& c) {
  const auto chi = pick_character(c.q, c.chi);
  return {{{"character", character_json(chi)}, {"count", count_zeros_argument(chi, c.T)}}, {}};
}

Output run_moment(const RunConfig& c) {
  const LevinsonParams p{c.theta, c.r, c.R};
  const auto phi = c.phi == "bump" ? SmoothingPhi::bump(c.T) : SmoothingPhi::gaussian(c.T);
  const auto scale = c.conductor == "analytic" ? ConductorScale::Analytic : ConductorScale::Arithmetic;
  const auto rep = c.q >= 1 ? family_average(static_cast<double>(c.q), phi, p, scale, {c.q}, true)
                            : family_average(c.Q, phi, p, scale);
  json per = json::array();
  for (const auto& m : rep.perCharacter)
    per.push_back({{"q", m.q}, {"index", m.index}, {"value", m.value}, {"ratio", m.value / (rep.c * rep.phiHat)}});
  return {{{"regime", "desk-scale: small (Q, T), trend only"},
           {"lhs", rep.lhs},
           {"rhs", rep.rhs},
           {"ratio", rep.ratio},
           {"c", rep.c},
           {"phiHat", rep.phiHat},
           {"perCharacter", per}},
          {}};
}

Output run_sums(const RunConfig& c) {
  std::ostringstream csv;
  csv << "X,direct,asymptotic,relError\n";
  json rows = json::array();
  for (double X : c.X) {
    const double qt = c.qtilde.value_or(X);
    const double sig = c.sigma.value_or(0.5 - c.R / std::log(qt));
    const auto s = survey<1>(X, qt, {sig}, c.r, sig);
    const auto& b = s.bilinear;
    csv << csv_number(b.X) << ',' << csv_number(b.direct) << ',' << csv_number(b.asymptotic) << ','
        << csv_number(b.relError) << '\n';
    const auto& v = s.points[0].v;
    rows.push_back({{"X", X},
                    {"qtilde", qt},
                    {"sigma", sig},
                    {"bilinear", comparison_json(b)},
                    {"v0", comparison_json(v.v0)},
                    {"v1", comparison_json(v.v1)},
                    {"v2", comparison_json(v.v2)},
                    {"diagonal",
                     {{"direct", s.diagonal.direct},
                      {"predicted", s.diagonal.predicted},
                      {"ratio", s.diagonal.ratio}}}});
  }
  return {{{"sums", rows}}, csv.str()};
}

json bound_json(const BoundReport& b) {
  return {{"R", b.R},
          {"sigma", b.sigma},
          {"lambda", b.lambda},
          {"X", b.X},
          {"analyticConductorN", b.analyticConductorN},
          {"nTotal", b.nTotal},
          {"nApprox", b.nApprox},
          {"actualN0", b.actualN0},
          {"littlewoodJ", b.littlewoodJ},
          {"logK", b.logK},
          {"lBar", b.lBar},
          {"lowerBoundJ", b.lowerBoundJ},
          {"lowerBoundK", b.lowerBoundK},
          {"lowerBoundL", b.lowerBoundL},
          {"lowerBoundLMain", b.lowerBoundLMain},
          {"errorBand", b.errorBand},
          {"chainSlack", b.chainSlack},
          {"memberJ", b.memberJ}};
}

Output run_bound(const RunConfig& c) {
  const auto family = FamilySpec::primitive(c.q, c.T);
  require(!family.members.empty(), "bound: modulus has no primitive character");
  BoundSettings settings;
  settings.errorConstant = c.errorConstant;
  json j = {{"family", {{"q", c.q}, {"members", family.members.size()}, {"T", c.T}}}, {"theta", c.theta}, {"r", c.r}};
  if (c.Rgiven) {
    j["report"] = bound_json(zero_count_bound(family, *c.Rgiven, c.theta, c.r, settings));
  } else {
    const auto scan = scan_bound(family, c.theta, c.r, 0.3, 2.0, 18, settings);
    j["report"] = bound_json(scan.best);
    json all = json::array();
    for (const auto& b : scan.all) all.push_back(bound_json(b));
    j["scan"] = all;
  }
  return {j, {}};
}

Output dispatch(const RunConfig& c) {
  if (c.subcommand == "kappa") return run_kappa(c);
  if (c.subcommand == "optimize") return run_optimize(c);
  if (c.subcommand == "surface") return run_surface(c);
  if (c.subcommand == "zeros") return run_zeros(c);
  if (c.subcommand == "count") return run_count(c);
  if (c.subcommand == "moment") return run_moment(c);
  if (c.subcommand == "sums") return run_sums(c);
  if (c.subcommand == "bound") return run_bound(c);
  throw ValidationError("unknown subcommand");
}

int fail(int code, const char* kind, const std::string& message) {
  const json j = {{"tool", "levlab"}, {"version", kVersion}, {"error", {{"kind", kind}, {"message", message}}}};
  std::cout << j.dump(2) << '\n';
  return code;
}

void add_box(CLI::App* sub, RunConfig& c) {
  sub->add_option("--r-lo", c.box.r_lo);
  sub->add_option("--r-hi", c.box.r_hi);
  sub->add_option("--R-lo", c.box.R_lo);
  sub->add_option("--R-hi", c.box.R_hi);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levinson-method numerics for Dirichlet L-functions"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  app.add_option("--format", c.format, "json or csv (default per subcommand)");
  app.add_option("--out", c.out, "output file (default stdout)");

  auto* kappa = app.add_subcommand("kappa", "c(theta, r, R) and kappa'");
  kappa->add_option("--theta", c.theta)->required();
  kappa->add_option("--r", c.r)->required();
  kappa->add_option("--R", c.R)->required();

  auto* optimize = app.add_subcommand("optimize", "maximize kappa' over (r, R)");
  optimize->add_option("--theta", c.theta)->required();
  optimize->add_option("--tol", c.tol);
  optimize->add_option("--grid", c.grid);
  add_box(optimize, c);

  auto* surface = app.add_subcommand("surface", "kappa' on a grid (csv: r,R,kappaPrime)");
  surface->add_option("--theta", c.theta)->required();
  surface->add_option("--grid", c.grid)->required();
  add_box(surface, c);

  auto* zeros = app.add_subcommand("zeros", "critical zeros on [-T, T] (csv: gamma,simple)");
  auto* count = app.add_subcommand("count", "argument-principle zero count on |Im s| <= T");
  for (auto* sub : {zeros, count}) {
    sub->add_option("--q", c.q)->required();
    sub->add_option("--chi", c.chi, "character index (default: first primitive)");
    sub->add_option("--T", c.T)->required();
  }

  auto* moment = app.add_subcommand("moment", "mollified second moments against c Phi^(1)");
  moment->add_option("--q", c.q, "single modulus");
  moment->add_option("--Q", c.Q, "family scale");
  moment->add_option("--T", c.T)->required();
  moment->add_option("--theta", c.theta)->required();
  moment->add_option("--r", c.r);
  moment->add_option("--R", c.R);
  moment->add_option("--conductor", c.conductor, "analytic or arithmetic");
  moment->add_option("--phi", c.phi, "gaussian or bump");

  auto* sums = app.add_subcommand("sums", "mollifier sums, direct vs asymptotic (csv: X,direct,asymptotic,relError)");
  sums->add_option("--X", c.X)->required();
  sums->add_option("--sigma", c.sigma, "default 1/2 - R/log qtilde");
  sums->add_option("--r", c.r);
  sums->add_option("--R", c.R);
  sums->add_option("--qtilde", c.qtilde, "default X");

  auto* bound = app.add_subcommand("bound", "zero-count lower bounds for the primitive family mod q");
  bound->add_option("--q", c.q)->required();
  bound->add_option("--T", c.T)->required();
  bound->add_option("--theta", c.theta)->required();
  bound->add_option("--r", c.r);
  bound->add_option("--R", c.Rgiven, "default: scan [0.3, 2]");
  bound->add_option("--C", c.errorConstant, "constant of the reported error band");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kValidation, "validation", e.what());
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.format.empty()) c.format = (c.subcommand == "surface" || c.subcommand == "zeros") ? "csv" : "json";

  Output result;
  try {
    validate(c);
    result = dispatch(c);
  } catch (const ValidationError& e) {
    return fail(kValidation, "validation", e.what());
  } catch (const CostGuardError& e) {
    return fail(kCostGuard, "cost-guard", e.what());
  } catch (const NumericalError& e) {
    return fail(kNumerical, "numerical", e.what());
  }

  std::string text;
  if (c.format == "csv") {
    text = result.table;
  } else {
    json j = {{"tool", "levlab"}, {"version", kVersion}, {"config", c.to_json()}, {"result", result.report}};
    text = j.dump(2) + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) return fail(kValidation, "validation", "cannot open output file " + c.out);
    f << text;
  }
  return kOk;
}
