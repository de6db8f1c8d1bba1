"""Verification toolkit for del Pezzo conic webs and hyperlogarithm identities.

Subpackages cover the Picard lattice, line/conic enumeration, the Weyl group
as a line permutation group, character theory, the exact wedge-space kernel
certificate, and symbol/numeric hyperlogarithm checks. The `dp-hlog` console
script ties the routes together.
"""

__version__ = "0.1.0"
