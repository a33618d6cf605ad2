#include "s2cubic/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

namespace s2cubic::cli {

using io::Json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"certify", "ball",        "minimize", "maximize",
                                              "scale",   "verify-cert", "random",   "selftest"};
  return names;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

sdp::SolverOptions solver_options(const CommandRequest& req, std::ostream* trace) {
  sdp::SolverOptions o;
  o.tol_gap = req.tol_gap;
  o.tol_feas = req.tol_feas;
  if (trace != nullptr) {
    o.on_iterate = [trace](const sdp::IterateInfo& it) {
      const Json line{{"iteration", it.iteration}, {"mu", it.mu},     {"tau", it.tau},
                      {"kappa", it.kappa},         {"primal_infeasibility", it.primal_infeasibility},
                      {"dual_infeasibility", it.dual_infeasibility},  {"gap", it.gap},
                      {"step", it.step}};
      *trace << line.dump() << '\n';
    };
  }
  return o;
}

Json tolerances(const CommandRequest& req) {
  return Json{{"tol_gap", req.tol_gap},
              {"tol_feas", req.tol_feas},
              {"psd", VerifyTolerances{}.psd},
              {"residual", VerifyTolerances{}.residual},
              {"boundary_band", kBoundaryBand}};
}

Json membership_report(const std::string& command, const CubicOnSphere& p, const CubicOnSphere& shifted,
                       const ConeMembershipResult& r, const CommandRequest& req) {
  Json out{{"command", command}, {"coeffs", io::to_json(p)["coeffs"]}};
  const bool nonneg = r.verdict != Verdict::kOutside;
  out["verdict"] = nonneg ? "inside" : "outside";
  out["cone_verdict"] = to_string(r.verdict);
  out["boundary_tolerance"] = r.verdict == Verdict::kBoundaryTolerance;
  out["margin"] = r.margin;
  if (r.relaxation_only) out["sufficient_only"] = true;
  const HermitianMatrix h = poly_to_h(shifted);
  out["certificate"] = r.certificate ? io::to_json(*r.certificate, h) : Json(nullptr);
  if (r.separator) {
    out["separator"] = io::to_json(*r.separator);
    Json pts = Json::array();
    try {
      for (const auto& at : extract_atoms(*r.separator).atoms) {
        const SpherePoint x = to_sphere(at.point);
        pts.push_back(Json{{"point", io::point_json(x)}, {"weight", at.weight}, {"value", shifted.evaluate(x)}});
      }
    } catch (const ExtractionFailure&) {
      // The separating matrix alone is still a valid witness.
    }
    out["separator_points"] = pts;
  } else {
    out["separator"] = nullptr;
  }
  out["tolerances"] = tolerances(req);
  return out;
}

Json random_report(const CommandRequest& req) {
  std::mt19937_64 gen(req.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CubicOnSphere p;
  const auto& basis = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    const double v = dist(gen);
    if (!req.homogeneous || basis[i].degree() == 3) p[i] = v;
  }
  Json coeffs = Json::object();
  for (int i = 0; i < kCubicDim; ++i) {
    if (!req.homogeneous || basis[i].degree() == 3) coeffs[monomial_key(basis[i])] = p[i];
  }
  return Json{{"coeffs", coeffs}, {"seed", req.seed}};
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const CommandRequest& req) {
  if (req.input_path.has_value() == req.inline_json.has_value()) {
    throw UsageError("exactly one of --input and --inline is required");
  }
  if (req.inline_json) return *req.inline_json;
  if (*req.input_path == "-") return read_all(std::cin);
  std::ifstream f(*req.input_path);
  if (!f) throw UsageError("cannot open input file " + *req.input_path);
  return read_all(f);
}

bool needs_input(const std::string& cmd) { return cmd != "random" && cmd != "selftest"; }

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(10) << v;
  return ss.str();
}

std::string point_text(const Json& pt) {
  return "(" + fmt(pt[0].get<double>()) + ", " + fmt(pt[1].get<double>()) + ", " + fmt(pt[2].get<double>()) + ")";
}

void write_text(const Json& r, std::ostream& out) {
  const std::string cmd = r.value("command", std::string());
  if (cmd == "certify" || cmd == "ball") {
    out << cmd << ": " << r["verdict"].get<std::string>();
    if (r["boundary_tolerance"].get<bool>()) out << " (boundary tolerance)";
    out << "\nmargin: " << fmt(r["margin"].get<double>()) << '\n';
    if (!r["certificate"].is_null()) {
      const auto& c = r["certificate"];
      out << "certificate: residual " << fmt(c["residual"].get<double>()) << ", psd margins "
          << fmt(c["psd_margins"][0].get<double>()) << " " << fmt(c["psd_margins"][1].get<double>()) << '\n';
    }
    if (r.contains("separator_points")) {
      for (const auto& sp : r["separator_points"]) {
        out << "violating point " << point_text(sp["point"]) << " value " << fmt(sp["value"].get<double>()) << '\n';
      }
    }
  } else if (cmd == "minimize" || cmd == "maximize") {
    out << cmd << ": " << fmt(r["value"].get<double>()) << '\n';
    const char* key = cmd == "minimize" ? "minimizers" : "maximizers";
    for (const auto& pt : r[key]) out << "  at " << point_text(pt) << '\n';
    if (!r["oracle_value"].is_null()) {
      out << "oracle: " << fmt(r["oracle_value"].get<double>()) << " (gap " << fmt(r["gap_to_oracle"].get<double>())
          << ")\n";
    }
    if (r["extraction_failed"].get<bool>()) out << "warning: " << r["warning"].get<std::string>() << '\n';
  } else if (cmd == "scale") {
    out << "lambda: " << fmt(r["lambda"].get<double>()) << "\nmax |p|: " << fmt(r["max_abs"].get<double>()) << '\n';
  } else if (cmd == "verify-cert") {
    out << "verify-cert: " << (r["passed"].get<bool>() ? "pass" : "fail") << " (" << r["message"].get<std::string>()
        << ")\nresidual: " << fmt(r["residual"].get<double>()) << '\n';
  } else if (cmd == "selftest") {
    for (const auto& c : r["checks"]) {
      out << std::left << std::setw(28) << c["name"].get<std::string>() << (c["passed"].get<bool>() ? "PASS" : "FAIL")
          << "  " << c["detail"].get<std::string>() << '\n';
    }
  } else {
    out << r.dump(2) << '\n';
  }
}

int run_batch(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  std::ifstream f(*req.batch_path);
  if (!f) {
    err << "error: cannot open batch file " << *req.batch_path << '\n';
    return kExitUsage;
  }
  int worst = kExitOk;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json report;
    int code = kExitOk;
    try {
      const Json doc = io::parse_strict(line);
      const std::string cmd = doc.value("command", req.subcommand);
      report = execute(cmd, doc, req, req.trace ? &err : nullptr);
    } catch (const io::ParseError& e) {
      code = kExitUsage;
      report = Json{{"error", std::string("line ") + std::to_string(lineno) + ": " + e.what()}};
    } catch (const std::invalid_argument& e) {
      code = kExitUsage;
      report = Json{{"error", std::string("line ") + std::to_string(lineno) + ": " + e.what()}};
    } catch (const std::exception& e) {
      code = kExitNumerical;
      report = Json{{"error", std::string("line ") + std::to_string(lineno) + ": " + e.what()}};
    }
    report["exit_code"] = code;
    out << report.dump() << '\n';
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

Json execute(const std::string& command, const Json& doc, const CommandRequest& req, std::ostream* trace) {
  const sdp::SolverOptions sopts = solver_options(req, trace);
  if (command == "certify") {
    const CubicOnSphere p = io::poly_from_json(doc);
    return membership_report(command, p, p, in_dual_cone(poly_to_h(p), 3, sopts), req);
  }
  if (command == "ball") {
    const CubicOnSphere p = io::poly_from_json(doc, true);
    return membership_report(command, p, CubicOnSphere::one() + p, in_unit_ball(p, sopts), req);
  }
  if (command == "minimize" || command == "maximize") {
    const CubicOnSphere p = io::poly_from_json(doc);
    OptimizeOptions o;
    o.solver = sopts;
    o.oracle_grid = req.grid;
    const bool maximize = command == "maximize";
    const OptimizationResult r = maximize ? maximize_on_sphere(p, o) : minimize_on_sphere(p, o);
    Json out{{"command", command}, {"coeffs", io::to_json(p)["coeffs"]}};
    out.update(io::to_json(r, p, maximize));
    Json tol = tolerances(req);
    tol["minimizer"] = o.minimizer_tol;
    tol["rank"] = o.rank_tol;
    tol["oracle_grid"] = o.oracle_grid;
    out["tolerances"] = tol;
    return out;
  }
  if (command == "scale") {
    const CubicOnSphere p = io::poly_from_json(doc, true);
    const double lambda = scale_to_ball_boundary(p, sopts);
    return Json{{"command", command},
                {"coeffs", io::to_json(p)["coeffs"]},
                {"lambda", lambda},
                {"max_abs", 1.0 / lambda},
                {"tolerances", tolerances(req)}};
  }
  if (command == "verify-cert") {
    const CubicOnSphere p = io::poly_from_json(doc);
    if (!doc.contains("certificate") || doc["certificate"].is_null()) {
      throw io::ParseError("verify-cert: document has no certificate");
    }
    const NonnegCertificate cert = io::certificate_from_json(doc["certificate"]);
    // A certify/ball report carries its command; ball certificates are for ||x||^2 + p.
    const bool ball = doc.value("command", std::string()) == "ball";
    const HermitianMatrix h = poly_to_h(ball ? CubicOnSphere::one() + p : p);
    const CertificateReport rep = verify_certificate(h, cert);
    return Json{{"command", command},
                {"coeffs", io::to_json(p)["coeffs"]},
                {"passed", rep.passed},
                {"residual", rep.residual},
                {"psd_margins", Json::array({rep.psd_margin_b, rep.psd_margin_c})},
                {"message", rep.message},
                {"tolerances", tolerances(req)}};
  }
  if (command == "random") return random_report(req);
  if (command == "selftest") {
    Json checks = Json::array();
    bool all = true;
    for (const auto& c : selftest()) {
      checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      all = all && c.passed;
    }
    return Json{{"command", command}, {"checks", checks}, {"passed", all}};
  }
  throw std::invalid_argument("unknown command \"" + command + "\"");
}

int run(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  try {
    if (req.format != "json" && req.format != "text") throw UsageError("--format must be json or text");
    if (req.batch_path) return run_batch(req, out, err);
    const Json doc = needs_input(req.subcommand) ? io::parse_strict(read_input(req)) : Json::object();
    const Json report = execute(req.subcommand, doc, req, req.trace ? &err : nullptr);
    if (req.format == "text") {
      write_text(report, out);
    } else {
      out << report.dump(2) << '\n';
    }
    if (req.subcommand == "selftest" && !report["passed"].get<bool>()) return kExitNumerical;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

std::vector<SelfCheck> selftest() {
  std::vector<SelfCheck> checks;
  auto add = [&checks](std::string name, bool ok, std::string detail) {
    checks.push_back(SelfCheck{std::move(name), ok, std::move(detail)});
  };
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_cubic = [&] {
    CubicOnSphere p;
    for (int i = 0; i < kCubicDim; ++i) p[i] = u(gen);
    return p;
  };

  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const CubicOnSphere p = random_cubic();
      worst = std::max(worst, (h_to_poly(poly_to_h(p)).vec() - p.vec()).cwiseAbs().maxCoeff());
    }
    add("bijection round trip", worst <= 1e-10, "max error " + fmt(worst));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Complex z(3.0 * u(gen), 3.0 * u(gen));
      const HermitianMatrix zm = moment_matrix(RiemannPoint(z), 3);
      const BlockHermitian2xd g = duplicate_center(zm);
      Eigen::Matrix2cd k;
      k << 1.0, z, std::conj(z), std::norm(z);
      Eigen::MatrixXcd kron(6, 6);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) kron.block(3 * i, 3 * j, 3, 3) = k(i, j) * g.ul.matrix();
      }
      worst = std::max(worst, (partial_transpose(g).matrix() - kron).norm() / zm.frobenius_norm());
    }
    add("kronecker identity", worst <= 1e-12, "max relative error " + fmt(worst));
  }
  {
    const double a = system_difference(theorem_nonneg_system(), generated_nonneg_system());
    const double b = system_difference(theorem_unit_ball_system(), generated_unit_ball_system());
    const double c = system_difference(substitute_unit_ball(theorem_nonneg_system()), theorem_unit_ball_system());
    add("explicit systems", std::max({a, b, c}) <= 1e-12, "max difference " + fmt(std::max({a, b, c})));
  }
  {
    OptimizeOptions o;
    o.oracle_grid = 2000;
    const CubicOnSphere x1 =
        CubicOnSphere::monomial(3, 0, 0) + CubicOnSphere::monomial(1, 2, 0) + CubicOnSphere::monomial(1, 0, 2);
    const double v1 = minimize_on_sphere(x1, o).value;
    const double v2 = minimize_on_sphere(CubicOnSphere::monomial(1, 1, 1), o).value;
    const double s1 = scale_to_ball_boundary(CubicOnSphere::monomial(3, 0, 0));
    const bool ok = std::abs(v1 + 1.0) <= 1e-8 && std::abs(v2 + std::pow(3.0, -1.5)) <= 1e-6 &&
                    std::abs(s1 - 1.0) <= 1e-7;
    add("analytic landmarks", ok, "min x1 = " + fmt(v1) + ", min x1x2x3 = " + fmt(v2) + ", scale x1^3 = " + fmt(s1));
  }
  {
    const CubicOnSphere edge = CubicOnSphere::one() + CubicOnSphere::monomial(3, 0, 0);
    const CubicOnSphere over = CubicOnSphere::one() + CubicOnSphere::monomial(3, 0, 0, 1.001);
    const auto r1 = in_dual_cone(poly_to_h(edge), 3);
    const auto r2 = in_dual_cone(poly_to_h(over), 3);
    const bool ok = r1.verdict == Verdict::kBoundaryTolerance && r2.verdict == Verdict::kOutside;
    add("boundary classification", ok, to_string(r1.verdict) + " / " + to_string(r2.verdict));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      AtomMeasure m;
      const int k = 1 + t % 3;
      for (int i = 0; i < k; ++i) {
        m.atoms.push_back(Atom{0.1 + 0.45 * (u(gen) + 1.0), RiemannPoint(Complex(2.0 * u(gen), 2.0 * u(gen)))});
      }
      const HermitianMatrix a = m.assemble(3);
      const AtomMeasure got = extract_atoms(a);
      worst = std::max(worst, got.residual / a.frobenius_norm());
    }
    add("atom extraction", worst <= 1e-6, "max relative residual " + fmt(worst));
  }
  {
    sdp::SdpProblem prob;
    prob.block_sizes = {2};
    prob.objective = {Eigen::Matrix2d::Identity()};
    Eigen::Matrix2d e11 = Eigen::Matrix2d::Zero();
    e11(0, 0) = 1.0;
    prob.constraints.push_back(sdp::Constraint{{e11}, 1.0});
    const sdp::SdpSolution sol = sdp::solve(prob);
    const sdp::KktReport rep = sdp::check_kkt(prob, sol);
    add("solver kkt", sol.status == sdp::SolveStatus::kOptimal && rep.passed &&
                          std::abs(sol.primal_objective - 1.0) <= 1e-8,
        "objective " + fmt(sol.primal_objective));
  }
  return checks;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonnegativity certificates and optimization for cubics on the 2-sphere", "s2cubic"};
  CommandRequest req;
  std::string input, inline_json, batch;
  app.add_option("command", req.subcommand, "Subcommand")->required()->check(CLI::IsMember(subcommands()));
  app.add_option("--input", input, "Input JSON file ('-' for standard input)");
  app.add_option("--inline", inline_json, "Input JSON given on the command line");
  app.add_option("--format", req.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--tol-gap", req.tol_gap, "Relative duality gap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-feas", req.tol_feas, "Relative feasibility tolerance")->check(CLI::PositiveNumber);
  app.add_option("--grid", req.grid, "Oracle grid size")->check(CLI::Range(1000, 10000000));
  app.add_option("--seed", req.seed, "Seed for the random subcommand");
  app.add_option("--batch", batch, "File with one JSON request per line");
  app.add_flag("--homogeneous", req.homogeneous, "random: cubic terms only");
  app.add_flag("--trace", req.trace, "Write solver iterates as JSON lines to standard error");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!input.empty()) req.input_path = input;
  if (app.count("--inline") > 0) req.inline_json = inline_json;
  if (!batch.empty()) req.batch_path = batch;
  return run(req, out, err);
}

}  // namespace s2cubic::cli
