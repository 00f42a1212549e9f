"""Exact linear algebra over Q, F_p and the localization Z_(p).

Public surface: rational matrices (:class:`QMat`), prime-field matrices
(:class:`FpMat`), Smith normal form over Z_(p), finitely generated modules
in normal form, and homology of two-term complexes of such modules.
"""

from .fpmat import (FpMat, fp_homology_two_term, fp_kron, fp_span_union,
                    quotient_projection)
from .modules import (FGModule, ModuleMap, TwoTermComplex, cokernel,
                      homology_two_term, kernel, zero_module)
from .qmat import QMat, intersect_spans, kron, span_union
from .rationals import (INF, check_prime, format_rational, is_p_local,
                        is_p_unit, parse_rational, reduce_mod_p, unit_part,
                        vp)
from .snf import SNF, kernel_over_zp, smith_normal_form

__all__ = [
    "INF", "vp", "is_p_local", "is_p_unit", "unit_part", "reduce_mod_p",
    "check_prime", "parse_rational", "format_rational",
    "QMat", "kron", "span_union", "intersect_spans",
    "FpMat", "fp_kron", "fp_span_union", "fp_homology_two_term",
    "quotient_projection",
    "SNF", "smith_normal_form", "kernel_over_zp",
    "FGModule", "ModuleMap", "TwoTermComplex", "zero_module",
    "homology_two_term", "kernel", "cokernel",
]
