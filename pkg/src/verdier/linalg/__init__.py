"""Exact chain-complex algebra over Z and prime fields."""
from .chain import (
    ChainComplex,
    ChainMap,
    HomologySummary,
    direct_sum,
    dual,
    free_module,
    homology,
    is_quasi_iso,
    mapping_cone,
    normalize_torsion,
    parse_ring,
    ring_name,
    shift,
    zero_complex,
)
from .matrix import Matrix, determinant
from .snf import SmithForm, invariant_factors, matrix_rank, smith_normal_form

__all__ = [
    "ChainComplex",
    "ChainMap",
    "HomologySummary",
    "Matrix",
    "SmithForm",
    "determinant",
    "direct_sum",
    "dual",
    "free_module",
    "homology",
    "invariant_factors",
    "is_quasi_iso",
    "mapping_cone",
    "matrix_rank",
    "normalize_torsion",
    "parse_ring",
    "ring_name",
    "shift",
    "smith_normal_form",
    "zero_complex",
]
