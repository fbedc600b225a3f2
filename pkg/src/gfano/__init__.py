"""Exact arithmetic for the classification of G-Fano threefolds with rho > 1."""
from .catalog import classify, load_catalog, verify_table
from .constraints import conic_discriminant, dp_bundle_check, product_exclusion
from .groups import admissible_orders, corollary_orders, cyclotomic, minkowski_bound
from .intring import RingSpec, ci_degree, double_cover_degree, top_intersection
from .lattice import PicardLattice, TrilinearForm, isometries_fixing_c1, minimal_witness

__version__ = "0.1.0"

__all__ = [
    "RingSpec", "top_intersection", "ci_degree", "double_cover_degree",
    "PicardLattice", "TrilinearForm", "isometries_fixing_c1", "minimal_witness",
    "cyclotomic", "admissible_orders", "corollary_orders", "minkowski_bound",
    "conic_discriminant", "dp_bundle_check", "product_exclusion",
    "load_catalog", "classify", "verify_table",
]
