#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "s2cubic/cones.hpp"
#include "s2cubic/hermitian.hpp"
#include "s2cubic/optimize.hpp"
#include "s2cubic/sphere_moment.hpp"

namespace s2cubic::io {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"n": int, "re": [[...]], "im": [[...]]}
Json to_json(const HermitianMatrix& m);
HermitianMatrix matrix_from_json(const Json& j);

/// {"coeffs": {"jkl": value, ...}}; zero coefficients are omitted.
Json to_json(const CubicOnSphere& p);

/// Parses a coefficient document. Rejects duplicate keys, non-numeric
/// values and exponent sums outside {2, 3}. With require_homogeneous, any
/// nonzero quadratic coefficient is rejected as well.
CubicOnSphere parse_poly(const std::string& text, bool require_homogeneous = false);
CubicOnSphere poly_from_json(const Json& j, bool require_homogeneous = false);

/// Parses JSON text, rejecting duplicate object keys.
Json parse_strict(const std::string& text);

/// {"B", "C", "residual", "psd_margins": [lambda_min(B), lambda_min(C)]}
Json to_json(const NonnegCertificate& cert, const HermitianMatrix& h);
NonnegCertificate certificate_from_json(const Json& j);

Json to_json(const OptimizationResult& r, const CubicOnSphere& p, bool maximize);

Json point_json(const SpherePoint& x);

}  // namespace s2cubic::io
