"""Glued coefficient objects on the reduced locus and their cohomology.

A :class:`ReducedFGauge` is a pair (conjugate-filtered Hodge--Tate datum,
Hodge-filtered de Rham datum) together with identifications of their two
common restrictions: an isomorphism alpha_dR of the de Rham restrictions
and a graded isomorphism alpha_Hod of the Hodge restrictions, both required
to commute with the respective operators.

Reduced syntomic cohomology is the fibre of

    (de Rham+ fibre) + (Hodge--Tate fibre) --(a - b)--> (de Rham fibre) + (Hodge fibre)

assembled as one explicit total complex over F_p of amplitude [0, 2].
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LawViolation
from ..exactlinalg import FpMat, quotient_projection
from .components import (A1Module, FilThetaModule, coh_dR, coh_dRplus,
                         coh_Hod, coh_HTc, restrict_dRplus_to_dR,
                         restrict_dRplus_to_Hod, restrict_HTc_to_dR,
                         restrict_HTc_to_Hod)


@dataclass(frozen=True)
class ReducedFGauge:
    """Glued datum with explicit identifications along the common strata.

    ``alpha_dr`` maps the stable space of ``htc`` to the underlying space of
    ``drp``;  ``alpha_hod[i]`` maps gr_i of ``htc`` to gr^i of ``drp``.
    Theta-equivariance of both is validated eagerly; the cohomology routine
    re-raises the corresponding law if handed an unvalidated datum.
    """

    htc: A1Module
    drp: FilThetaModule
    alpha_dr: FpMat
    alpha_hod: dict

    def __post_init__(self):
        if self.htc.prime != self.drp.prime:
            raise LawViolation("both halves must share one prime")
        object.__setattr__(self, "alpha_hod",
                           {int(k): v for k, v in self.alpha_hod.items()})
        for law in reduced_gauge_violations(self):
            raise LawViolation(law)

    @property
    def prime(self) -> int:
        return self.htc.prime


def reduced_gauge_violations(g: ReducedFGauge) -> list[str]:
    """All gluing laws, checked as plain equalities of matrices."""
    bad = list(g.htc.violations())
    if bad:
        return bad
    try:
        dr_htc = restrict_HTc_to_dR(g.htc)
    except LawViolation as err:
        return [str(err)]
    dr_drp = restrict_dRplus_to_dR(g.drp)
    if g.alpha_dr.shape != (dr_drp.dim, dr_htc.dim):
        bad.append("alpha_dR must map the Hodge--Tate de Rham restriction "
                   "to the de Rham restriction")
        return bad
    if not g.alpha_dr.is_invertible():
        bad.append("alpha_dR must be an isomorphism")
    if g.alpha_dr @ dr_htc.theta != dr_drp.theta @ g.alpha_dr:
        bad.append("alpha_dR must commute with Theta")
    hod_htc = restrict_HTc_to_Hod(g.htc)
    hod_drp = restrict_dRplus_to_Hod(g.drp)
    if hod_htc.support() != hod_drp.support():
        bad.append("the two Hodge restrictions must have equal support")
        return bad
    for i in hod_htc.support():
        a_i = g.alpha_hod.get(i)
        if a_i is None or a_i.shape != (hod_drp.dim_at(i), hod_htc.dim_at(i)):
            bad.append(f"alpha_Hod missing or mis-shaped in degree {i}")
            return bad
        if not a_i.is_invertible():
            bad.append(f"alpha_Hod must be an isomorphism in degree {i}")
    p = g.prime
    for i in hod_htc.support():
        j = i - p
        if hod_htc.dim_at(j) == 0:
            continue
        a_i = g.alpha_hod[i]
        a_j = g.alpha_hod[j]
        if a_j @ hod_htc.theta_at(i) != hod_drp.theta_at(i) @ a_i:
            bad.append(f"alpha_Hod must commute with Theta (degree {i})")
    return bad


@dataclass(frozen=True)
class ReducedCohomology:
    """Cohomology of the glued total complex plus the component fibres."""

    h: tuple[int, int, int]
    components: dict  # "dRplus" / "HTc" / "dR" / "Hod" -> (h0, h1)

    @property
    def euler(self) -> int:
        return self.h[0] - self.h[1] + self.h[2]

    def component_euler(self) -> int:
        c = self.components
        chi = lambda t: t[0] - t[1]
        return chi(c["dRplus"]) + chi(c["HTc"]) - chi(c["dR"]) - chi(c["Hod"])


def reduced_syntomic_cohomology(g: ReducedFGauge) -> ReducedCohomology:
    """Total complex of the gluing fibre; amplitude [0, 2].

    Degree 0: Fil^0(drp) + Fil_0(htc).
    Degree 1: Fil^{-p}(drp) + Fil_{-1}(htc) + V_dR + gr^0.
    Degree 2: V_dR + gr^{-p}.
    The de Rham and Hodge targets are taken in the de Rham+ model; the
    Hodge--Tate side routes through the alphas.
    """
    violations = reduced_gauge_violations(g)
    if violations:
        raise LawViolation(violations[0])
    p = g.prime
    htc, drp = g.htc, g.drp

    # chain-level components of the four corner complexes
    d_drp = drp.theta_in_flag(0)              # Fil^0 -> Fil^{-p}
    d_htc = htc.d_at(0)                       # Fil_0 -> Fil_{-1}
    theta_v = drp.theta                       # V -> V
    hod = restrict_dRplus_to_Hod(g.drp)
    d_hod = hod.theta_at(0)                   # gr^0 -> gr^{-p}

    # restriction chain maps (degree 0 and 1 components)
    n_level = htc.stable_level()
    incl0 = drp.flag_at(0)                    # Fil^0 -> V
    incl1 = drp.flag_at(-p)                   # Fil^{-p} -> V
    proj0, proj_p = _gr_projections(drp)      # Fil^0 -> gr^0, Fil^{-p} -> gr^{-p}
    b0_dr = g.alpha_dr @ htc.x_composite(0, n_level)
    b1_dr = g.alpha_dr @ htc.x_composite(-1, n_level)
    pi_htc0, _ = _htc_gr_projection(htc, 0)
    pi_htcp, _ = _htc_gr_projection(htc, -p)
    a_hod0 = g.alpha_hod.get(0)
    a_hodp = g.alpha_hod.get(-p)
    b0_hod = (a_hod0 @ pi_htc0) if a_hod0 is not None else \
        FpMat.zeros(p, hod.dim_at(0), htc.dim_at(0))
    dcomp = htc.d_composite(-1, -p)           # D^{p-1}: Fil_{-1} -> Fil_{-p}
    b1_hod = (a_hodp @ pi_htcp @ dcomp) if a_hodp is not None else \
        FpMat.zeros(p, hod.dim_at(-p), htc.dim_at(-1))

    f0_drp, f0_htc = drp.fil_dim(0), htc.dim_at(0)
    f1_drp, f1_htc = drp.fil_dim(-p), htc.dim_at(-1)
    n_v, g0, gp = drp.dim, hod.dim_at(0), hod.dim_at(-p)

    # d0: (s, t) |-> (d_drp s, d_htc t, incl0 s - b0_dr t, proj0 s - b0_hod t)
    z = FpMat.zeros
    d0 = _stack_rows(p, [
        [d_drp, z(p, f1_drp, f0_htc)],
        [z(p, f1_htc, f0_drp), d_htc],
        [incl0, -b0_dr],
        [proj0, -b0_hod],
    ])
    # d1: (s1, t1, v, w) |-> (incl1 s1 - b1_dr t1 - theta_v v,
    #                          proj_p s1 - b1_hod t1 - d_hod w)
    d1 = _stack_rows(p, [
        [incl1, -b1_dr, -theta_v, z(p, n_v, g0)],
        [proj_p, -b1_hod, z(p, gp, n_v), -d_hod],
    ])
    if not (d1 @ d0).is_zero():
        raise LawViolation("gluing data does not assemble into a complex",
                           "d1 d0 != 0; alphas fail Theta-equivariance")
    dims = (f0_drp + f0_htc, f1_drp + f1_htc + n_v + g0, n_v + gp)
    r0, r1 = d0.rank(), d1.rank()
    h = (dims[0] - r0, dims[1] - r1 - r0, dims[2] - r1)
    comps = {
        "dRplus": coh_dRplus(drp),
        "HTc": coh_HTc(htc),
        "dR": coh_dR(restrict_dRplus_to_dR(drp)),
        "Hod": coh_Hod(hod),
    }
    return ReducedCohomology(h, comps)


def _stack_rows(p: int, blocks: list[list[FpMat]]) -> FpMat:
    out = None
    for row in blocks:
        acc = None
        for blk in row:
            acc = blk if acc is None else acc.hstack(blk)
        out = acc if out is None else out.vstack(acc)
    return out


def _gr_projections(drp: FilThetaModule) -> tuple[FpMat, FpMat]:
    """Projections Fil^0 -> gr^0 and Fil^{-p} -> gr^{-p} in flag coordinates."""
    p = drp.prime
    out = []
    for i in (0, -p):
        basis = drp.flag_at(i)
        inner = basis.solve(drp.flag_at(i + 1))
        if inner is None:
            raise LawViolation("the filtration must be decreasing")
        pi, _ = quotient_projection(inner)
        out.append(pi)
    return out[0], out[1]


def _htc_gr_projection(htc: A1Module, i: int) -> tuple[FpMat, FpMat]:
    """Projection Fil_i -> gr_i = coker(x_{i-1}) and a section."""
    return quotient_projection(htc.x_at(i - 1).column_space_basis())
