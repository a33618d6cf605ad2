#include "s2cubic/serialize.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace s2cubic::io {

Json to_json(const HermitianMatrix& m) {
  const int n = m.size();
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < n; ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (int j = 0; j < n; ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"n", n}, {"re", re}, {"im", im}};
}

HermitianMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re")) {
    throw ParseError("matrix: expected {\"n\", \"re\", \"im\"}");
  }
  if (!j["n"].is_number_integer() || j["n"].get<int>() < 1) throw ParseError("matrix: \"n\" must be a positive integer");
  const int n = j["n"].get<int>();
  auto read = [n](const Json& a, const char* what) {
    Eigen::MatrixXd out(n, n);
    if (!a.is_array() || static_cast<int>(a.size()) != n) {
      throw ParseError(std::string("matrix: \"") + what + "\" must have " + std::to_string(n) + " rows");
    }
    for (int i = 0; i < n; ++i) {
      const Json& row = a[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw ParseError(std::string("matrix: row ") + std::to_string(i) + " of \"" + what + "\" has wrong length");
      }
      for (int k = 0; k < n; ++k) {
        const Json& v = row[static_cast<size_t>(k)];
        if (!v.is_number()) throw ParseError(std::string("matrix: non-numeric entry in \"") + what + "\"");
        out(i, k) = v.get<double>();
      }
    }
    return out;
  };
  const Eigen::MatrixXd re = read(j["re"], "re");
  const Eigen::MatrixXd im = j.contains("im") ? read(j["im"], "im") : Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXcd m(n, n);
  m.real() = re;
  m.imag() = im;
  try {
    return HermitianMatrix(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

Json to_json(const CubicOnSphere& p) {
  Json coeffs = Json::object();
  const auto& basis = cubic_basis();
  for (int i = 0; i < kCubicDim; ++i) {
    if (p[i] != 0.0) coeffs[monomial_key(basis[i])] = p[i];
  }
  return Json{{"coeffs", coeffs}};
}

Json parse_strict(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  const Json::parser_callback_t cb = [&seen](int, Json::parse_event_t ev, Json& parsed) {
    switch (ev) {
      case Json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case Json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!seen.back().insert(key).second) throw ParseError("duplicate key \"" + key + "\"");
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return Json::parse(text, cb);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

CubicOnSphere poly_from_json(const Json& j, bool require_homogeneous) {
  if (!j.is_object() || !j.contains("coeffs")) throw ParseError("expected an object with a \"coeffs\" member");
  const Json& c = j["coeffs"];
  if (!c.is_object()) throw ParseError("\"coeffs\" must be an object");
  CubicOnSphere p;
  for (const auto& [key, val] : c.items()) {
    if (key.size() != 3 || key.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("coefficient key \"" + key + "\" is not a three-digit exponent triple");
    }
    const int e1 = key[0] - '0', e2 = key[1] - '0', e3 = key[2] - '0';
    const int deg = e1 + e2 + e3;
    if (deg < 2 || deg > 3) {
      std::string msg = "coefficient key \"" + key + "\" has degree " + std::to_string(deg) +
                        "; only degrees 2 and 3 are representable";
      if (deg == 1) {
        msg += " (multiply by ||x||^2: x_i becomes x_i*(x1^2 + x2^2 + x3^2), e.g. 100 -> 300 + 120 + 102)";
      } else if (deg == 0) {
        msg += " (a constant k is entered as 200 = 020 = 002 = k)";
      }
      throw ParseError(msg);
    }
    if (!val.is_number()) throw ParseError("coefficient \"" + key + "\" is not a number");
    const double v = val.get<double>();
    if (!std::isfinite(v)) throw ParseError("coefficient \"" + key + "\" is not finite");
    if (require_homogeneous && deg == 2 && v != 0.0) {
      throw ParseError("coefficient \"" + key + "\" is quadratic; a homogeneous cubic is required");
    }
    p.set(e1, e2, e3, v);
  }
  return p;
}

CubicOnSphere parse_poly(const std::string& text, bool require_homogeneous) {
  return poly_from_json(parse_strict(text), require_homogeneous);
}

Json to_json(const NonnegCertificate& cert, const HermitianMatrix& h) {
  const CertificateReport rep = verify_certificate(h, cert);
  return Json{{"B", to_json(cert.b)},
              {"C", to_json(cert.c)},
              {"residual", rep.residual},
              {"psd_margins", Json::array({rep.psd_margin_b, rep.psd_margin_c})}};
}

NonnegCertificate certificate_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("B") || !j.contains("C")) throw ParseError("certificate: expected \"B\" and \"C\"");
  return NonnegCertificate{matrix_from_json(j["B"]), matrix_from_json(j["C"])};
}

Json point_json(const SpherePoint& x) { return Json::array({x.x1(), x.x2(), x.x3()}); }

Json to_json(const OptimizationResult& r, const CubicOnSphere& p, bool maximize) {
  // The certificate proves p - value >= 0, or value - p >= 0 when maximizing.
  const HermitianMatrix h1 = normalizing_matrix(3);
  const HermitianMatrix shifted = maximize ? h1 * r.value - poly_to_h(p) : poly_to_h(p) - h1 * r.value;
  Json pts = Json::array();
  for (const auto& x : r.minimizers) pts.push_back(point_json(x));
  Json out{{"value", r.value},
           {maximize ? "maximizers" : "minimizers", pts},
           {"certificate", to_json(r.certificate, shifted)}};
  if (r.oracle_run) {
    out["oracle_value"] = r.oracle_value;
    out["gap_to_oracle"] = r.gap_to_oracle;
  } else {
    out["oracle_value"] = nullptr;
    out["gap_to_oracle"] = nullptr;
  }
  out["extraction_failed"] = r.extraction_failed;
  if (!r.warning.empty()) out["warning"] = r.warning;
  out["iterations"] = r.iterations;
  return out;
}

}  // namespace s2cubic::io
