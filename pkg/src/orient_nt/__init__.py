"""Certified low-diameter orientations of 2-connected near triangulations.

Quick start::

    from orient_nt import random_near_triangulation, orient
    g = random_near_triangulation(40, seed=1, interior_bias=0.3)
    cert = orient(g)
    assert cert.within_bound
"""

__version__ = "0.1.0"

from .catalog import Catalog, CatalogEntry, default_catalog
from .census import CensusRecord, run_census
from .digraph_metrics import (
    INFINITE,
    Certificate,
    Orientation,
    anchored_ecc,
    ceil_half,
    certify,
    diameter,
    is_strongly_connected,
    parse_or,
)
from .engine import EngineConfig, orient, orient_outerplanar
from .errors import (
    BudgetExhausted,
    NotNearTriangulation,
    OrientError,
    ParseError,
    VerificationFailed,
)
from .exact_solver import SearchBudget, anchored_exact, has_orientation_within, oriented_diameter_exact
from .generators import random_maximal_outerplanar, random_near_triangulation, tight_family
from .plane_graph import PlaneGraph, build, is_near_triangulation, parse_pg, read_pg, write_pg
from .structure import analyze, strip_separating_outer_edges

__all__ = [
    "INFINITE", "BudgetExhausted", "Catalog", "CatalogEntry", "CensusRecord", "Certificate",
    "EngineConfig", "NotNearTriangulation", "OrientError", "Orientation", "ParseError",
    "PlaneGraph", "SearchBudget", "VerificationFailed", "analyze", "anchored_ecc",
    "anchored_exact", "build", "ceil_half", "certify", "default_catalog", "diameter",
    "has_orientation_within", "is_near_triangulation", "is_strongly_connected", "orient",
    "orient_outerplanar", "oriented_diameter_exact", "parse_or", "parse_pg",
    "random_maximal_outerplanar", "random_near_triangulation", "read_pg", "run_census",
    "strip_separating_outer_edges", "tight_family", "write_pg",
]
