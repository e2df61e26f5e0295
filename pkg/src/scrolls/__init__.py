"""Exact and numerical verification tools for abelian scrolls in projective space."""

__version__ = "0.1.0"

from .invariants import (
    ScrollData,
    ScrollReport,
    build_report,
    double_point_number,
    hyperplane_power_coefficient,
    rr_min_degree,
    scroll_degree,
    top_chern_normal,
)
from .ring import RingShape, TruncPoly, binomial, coefficient, make_poly, mul, power_signed
from .theta import (
    ClusterProbe,
    ThetaEmbedding,
    cyclic_group,
    elliptic_embedding,
    fibre_independence_probe,
    scroll_smoothness_probe,
    span_rank,
    surface_embedding,
    theta_basis_eval,
    torsion_point,
    very_ampleness_cluster_probe,
)
from .verifier import (
    conjecture_family_report,
    inequality_check,
    sweep,
    termwise_check,
    very_ample_bound,
)
