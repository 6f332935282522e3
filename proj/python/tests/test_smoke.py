import math

import numpy as np
import pytest

import curldiv


def test_cube_counts_and_topology():
    m = curldiv.structured_cube_mesh(1)
    assert (m.num_vertices, m.num_edges, m.num_faces, m.num_tets) == (8, 19, 18, 6)
    assert m.vertices.shape == (8, 3)
    assert m.tets.shape == (6, 4)
    report = curldiv.topology(m)
    assert report["betti"] == [1, 0, 0]
    assert report["dim_W0"] == 12


def test_torus_and_ball_topology():
    assert curldiv.topology(curldiv.solid_torus_mesh())["g"] == 1
    assert curldiv.topology(curldiv.hollow_ball_mesh())["p"] == 1


def test_mesh_from_arrays():
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    m = curldiv.Mesh(v, np.array([[0, 1, 2, 3]], dtype=np.int32))
    assert m.num_faces == 4
    with pytest.raises(curldiv.MeshError):
        curldiv.Mesh(v, np.array([[0, 1, 2, 7]], dtype=np.int32))


def test_solve_constant_case():
    m = curldiv.solid_torus_mesh()
    for formulation in ("tangential", "normal"):
        r = curldiv.solve(m, {"case": "constant", "formulation": formulation})
        assert r["ok"]
        assert r["report"]["errors"]["graph"] < 1e-8
        expected = m.num_faces if formulation == "tangential" else m.num_edges
        assert r["coefficients"].shape == (expected,)


def test_solve_zero_data():
    r = curldiv.solve(curldiv.hollow_ball_mesh(), {"formulation": "normal"})
    assert np.max(np.abs(r["coefficients"])) <= 1e-10


def test_errors_are_mapped():
    m = curldiv.structured_cube_mesh(1)
    with pytest.raises(curldiv.DataError):
        curldiv.solve(m, {"bogus": 1})
    with pytest.raises(curldiv.ParseError):
        curldiv.solve(m, "{ broken")
    with pytest.raises(curldiv.IoError):
        curldiv.read_gmsh("/nonexistent/file.msh")


def test_convergence_rate():
    r = curldiv.convergence("mms1", "normal", levels=2, first_level=1)
    rate = r["levels"][1]["rate_graph"]
    assert math.isfinite(rate) and rate > 0.8
    assert "mms1" in curldiv.case_names()
