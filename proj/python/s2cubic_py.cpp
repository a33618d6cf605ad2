#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "s2cubic/cli.hpp"
#include "s2cubic/serialize.hpp"

namespace py = pybind11;
using namespace s2cubic;

namespace {

CubicOnSphere cubic_from_dict(const std::map<std::string, double>& coeffs) {
  io::Json doc{{"coeffs", io::Json::object()}};
  for (const auto& [k, v] : coeffs) doc["coeffs"][k] = v;
  return io::poly_from_json(doc);
}

std::map<std::string, double> cubic_to_dict(const CubicOnSphere& p) {
  std::map<std::string, double> out;
  const auto& basis = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    if (p[i] != 0.0) out[monomial_key(basis[i])] = p[i];
  }
  return out;
}

RiemannPoint riemann(const std::optional<Complex>& z) { return z ? RiemannPoint(*z) : RiemannPoint::Infinity(); }

std::string run_json(const std::string& command, const std::string& doc, double tol_gap, double tol_feas, int grid) {
  cli::CommandRequest req;
  req.subcommand = command;
  req.tol_gap = tol_gap;
  req.tol_feas = tol_feas;
  req.grid = grid;
  const io::Json parsed = doc.empty() ? io::Json::object() : io::parse_strict(doc);
  return cli::execute(command, parsed, req, nullptr).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonnegativity certificates and optimization for cubics on the 2-sphere";

  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  m.def("run_json", &run_json, py::arg("command"), py::arg("document") = "", py::arg("tol_gap") = 1e-9,
        py::arg("tol_feas") = 1e-9, py::arg("grid") = 20000,
        "Runs a CLI command on a JSON document and returns the JSON report.");

  m.def(
      "moment_matrix",
      [](std::optional<Complex> z, int d) { return moment_matrix(riemann(z), d).matrix(); }, py::arg("z"),
      py::arg("d") = 3, "Z(z); pass None for the point at infinity.");
  m.def(
      "moment_matrix_from_x", [](const Eigen::Vector3d& x, int d) { return moment_matrix_from_x(SpherePoint(x), d).matrix(); },
      py::arg("x"), py::arg("d") = 3);
  m.def(
      "poly_to_h", [](const std::map<std::string, double>& c) { return poly_to_h(cubic_from_dict(c)).matrix(); },
      py::arg("coeffs"));
  m.def(
      "h_to_poly", [](const Eigen::MatrixXcd& h) { return cubic_to_dict(h_to_poly(HermitianMatrix(h))); }, py::arg("h"));
  m.def(
      "evaluate", [](const std::map<std::string, double>& c, const Eigen::Vector3d& x) {
        return cubic_from_dict(c).evaluate(x);
      },
      py::arg("coeffs"), py::arg("x"));
  m.def(
      "to_riemann",
      [](const Eigen::Vector3d& x) -> std::optional<Complex> {
        const RiemannPoint z = to_riemann(SpherePoint(x));
        if (z.is_infinite()) return std::nullopt;
        return z.value();
      },
      py::arg("x"));
  m.def(
      "to_sphere", [](std::optional<Complex> z) { return Eigen::Vector3d(to_sphere(riemann(z)).vec()); }, py::arg("z"));
  m.def(
      "extract_atoms",
      [](const Eigen::MatrixXcd& a, double rank_tol) {
        std::vector<std::pair<double, std::optional<Complex>>> out;
        for (const auto& at : extract_atoms(HermitianMatrix(a), rank_tol).atoms) {
          out.emplace_back(at.weight, at.point.is_infinite() ? std::nullopt : std::optional<Complex>(at.point.value()));
        }
        return out;
      },
      py::arg("a"), py::arg("rank_tol") = 1e-7, "List of (weight, z) with z None at infinity.");
  m.def(
      "oracle_minimum",
      [](const std::map<std::string, double>& c, int n_grid, int n_polish) {
        const OracleResult r = oracle_minimum(cubic_from_dict(c), n_grid, n_polish);
        return py::make_tuple(r.value, Eigen::Vector3d(r.argmin.vec()));
      },
      py::arg("coeffs"), py::arg("n_grid") = 20000, py::arg("n_polish") = 20);
}
