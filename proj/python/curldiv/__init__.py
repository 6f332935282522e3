"""Curl-div finite element solver on tetrahedral meshes."""

import json as _json

from ._core import (
    CurldivError,
    DataError,
    IoError,
    Mesh,
    MeshError,
    ParseError,
    SolverError,
    TopologyError,
    case_names,
    hollow_ball_mesh,
    read_gmsh,
    solid_torus_mesh,
    structured_cube_mesh,
    write_gmsh,
)
from . import _core

__all__ = [
    "CurldivError",
    "DataError",
    "IoError",
    "Mesh",
    "MeshError",
    "ParseError",
    "SolverError",
    "TopologyError",
    "case_names",
    "convergence",
    "hollow_ball_mesh",
    "read_gmsh",
    "solid_torus_mesh",
    "solve",
    "structured_cube_mesh",
    "topology",
    "write_gmsh",
]


def topology(mesh):
    """Counts, Betti numbers and homology data of a mesh, as a dict."""
    return _json.loads(_core.topology_report(mesh))


def solve(mesh, config):
    """Solve on `mesh`; `config` is a dict or a JSON string.

    Returns a dict with the parsed report, the field coefficients and the
    reduced unknowns.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    result = _core.solve(mesh, text)
    result["report"] = _json.loads(result["report"])
    return result


def convergence(case, formulation="tangential", levels=2, first_level=0):
    """Refinement study on structured unit cubes, as a dict."""
    return _json.loads(_core.convergence(case, formulation, levels, first_level))
