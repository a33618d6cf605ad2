"""Nonnegativity certificates and optimization for cubics on the 2-sphere.

Polynomials are dicts mapping three-digit exponent keys to coefficients,
e.g. ``{"300": 1.0, "111": -2.5}`` for x1^3 - 2.5 x1 x2 x3.
"""

import json

from ._core import (
    NumericalFailure,
    ParseError,
    evaluate,
    extract_atoms,
    h_to_poly,
    moment_matrix,
    moment_matrix_from_x,
    oracle_minimum,
    poly_to_h,
    run_json,
    to_riemann,
    to_sphere,
)

__all__ = [
    "NumericalFailure",
    "ParseError",
    "certify",
    "ball",
    "minimize",
    "maximize",
    "scale",
    "verify_certificate",
    "evaluate",
    "extract_atoms",
    "h_to_poly",
    "moment_matrix",
    "moment_matrix_from_x",
    "oracle_minimum",
    "poly_to_h",
    "to_riemann",
    "to_sphere",
]


def _run(command, coeffs=None, document=None, **tolerances):
    doc = document if document is not None else {"coeffs": dict(coeffs)}
    return json.loads(run_json(command, json.dumps(doc), **tolerances))


def certify(coeffs, **tol):
    """Nonnegativity of p on the sphere, with certificate or separator."""
    return _run("certify", coeffs, **tol)


def ball(coeffs, **tol):
    """Membership of a homogeneous cubic in the sup-norm unit ball."""
    return _run("ball", coeffs, **tol)


def minimize(coeffs, **tol):
    return _run("minimize", coeffs, **tol)


def maximize(coeffs, **tol):
    return _run("maximize", coeffs, **tol)


def scale(coeffs, **tol):
    """Largest lambda with max |lambda p| <= 1 for a homogeneous cubic."""
    return _run("scale", coeffs, **tol)["lambda"]


def verify_certificate(report):
    """Re-checks a certify or ball report; returns the verification report."""
    return _run("verify-cert", document=report)
