"""Minimal-length coset representatives in hyperbolic groups, by brute force
and as regular languages."""

from .words import Alphabet, Group, SubgroupSpec, parse_group, parse_subgroup
from .cayley import Ball, build_ball, estimate_delta
from .automata import Automaton
from .cones import ConeLanguages, compute_cone_types, geodesic_acceptor
from .net import SubgroupOracle

__all__ = ["Alphabet", "Group", "SubgroupSpec", "parse_group", "parse_subgroup", "Ball", "build_ball",
           "estimate_delta", "Automaton", "ConeLanguages", "compute_cone_types", "geodesic_acceptor",
           "SubgroupOracle"]
__version__ = "0.1.0"
