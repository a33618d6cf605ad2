import json
import math

import numpy as np
import pytest

import s2cubic

X1_NORM2 = {"300": 1.0, "120": 1.0, "102": 1.0}


def test_bijection_round_trip():
    rng = np.random.default_rng(0)
    keys = ["002", "011", "020", "101", "110", "200",
            "003", "012", "021", "030", "102", "111", "120", "201", "210", "300"]
    for _ in range(10):
        p = {k: float(v) for k, v in zip(keys, rng.uniform(-1, 1, 16))}
        back = s2cubic.h_to_poly(s2cubic.poly_to_h(p))
        assert all(abs(back.get(k, 0.0) - p[k]) < 1e-10 for k in keys)


def test_constant_one_is_diag_1331():
    h = s2cubic.poly_to_h({"200": 1, "020": 1, "002": 1})
    assert np.allclose(h, np.diag([1, 3, 3, 1]), atol=1e-14)


def test_moment_matrix_pairs_with_evaluation():
    x = np.array([0.36, -0.48, 0.8])
    h = s2cubic.poly_to_h(X1_NORM2)
    z = s2cubic.moment_matrix_from_x(x)
    assert abs(np.trace(h @ z).real - x[0]) < 1e-12
    assert np.allclose(s2cubic.moment_matrix(None), np.diag([0, 0, 0, 1]))


def test_stereographic_round_trip():
    assert s2cubic.to_riemann([-1.0, 0.0, 0.0]) is None
    assert np.allclose(s2cubic.to_sphere(1j), [0, -1, 0])


def test_extract_atoms():
    a = 0.5 * s2cubic.moment_matrix(0j) + 0.5 * s2cubic.moment_matrix(None)
    atoms = sorted(s2cubic.extract_atoms(a), key=lambda t: t[1] is None)
    assert len(atoms) == 2
    assert abs(atoms[0][0] - 0.5) < 1e-9 and abs(atoms[0][1]) < 1e-9
    assert atoms[1][1] is None


def test_minimize_and_maximize():
    r = s2cubic.minimize({"111": 1})
    assert abs(r["value"] + 3 ** -1.5) < 1e-6
    assert len(r["minimizers"]) == 4
    m = s2cubic.maximize(X1_NORM2)
    assert abs(m["value"] - 1.0) < 1e-8
    assert np.allclose(m["maximizers"][0], [1, 0, 0], atol=1e-6)


def test_certify_and_verify():
    rep = s2cubic.certify({"200": 1, "020": 1, "002": 1, "300": 1})
    assert rep["verdict"] == "inside"
    assert rep["boundary_tolerance"]
    assert s2cubic.verify_certificate(rep)["passed"]
    bad = json.loads(json.dumps(rep))
    bad["certificate"]["B"]["re"][0][0] += 1e-3
    assert not s2cubic.verify_certificate(bad)["passed"]


def test_ball_and_scale():
    assert s2cubic.ball({"300": 1.001})["verdict"] == "outside"
    assert abs(s2cubic.scale({"300": 2}) - 0.5) < 1e-7
    assert abs(s2cubic.scale({"111": 1}) - 3 ** 1.5) < 1e-6


def test_oracle():
    value, x = s2cubic.oracle_minimum(X1_NORM2, 5000, 10)
    assert value <= -1 + 1e-8
    assert math.isclose(np.linalg.norm(x), 1.0, rel_tol=1e-12)


def test_errors():
    with pytest.raises(s2cubic.ParseError):
        s2cubic.certify({"100": 1})
    with pytest.raises(ValueError):
        s2cubic.scale({"200": 1})
