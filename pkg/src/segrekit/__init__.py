"""Exact truncated power series toolkit for Segre chains of generic real
submanifolds and reflection identities of formal maps between them."""

from .fps import GaussianRational, ParseError, Series, SeriesVector, parse_poly
from .manifold import FormalMap, GenericManifold, identity_map, theta_from_graph

__all__ = [
    "GaussianRational",
    "ParseError",
    "Series",
    "SeriesVector",
    "parse_poly",
    "FormalMap",
    "GenericManifold",
    "identity_map",
    "theta_from_graph",
]

__version__ = "0.1.0"
