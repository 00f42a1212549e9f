"""F-gauges at the arithmetic point: stabilized u/t diagrams of modules.

An :class:`FpGauge` is a finite window of finitely generated Z_(p)-modules
M^a ... M^b with downward maps t and upward maps u satisfying ut = tu = p,
plus an isomorphism tau: M^b -> M^a identifying the two stabilized ends
(Frobenius is the identity on the base, so tau is a plain isomorphism and
the Frobenius twist is bookkeeping only).  Outside the window the diagram
is declared constant: t is an isomorphism at and below a, u at and above b,
so the stabilized ends stand in for the completed colimits.

Syntomic cohomology is the homology of the single map

    (composite of t's from M^0 down)  -  tau (composite of u's from M^0 up),

and inverting p collapses the whole diagram to the bottom module with the
automorphism induced by tau, the rational realization.

An :class:`FCrystalPoint` is the input datum (free module, invertible
rational tau); its gauge is cut out by the saturated filtration
Fil^i = preimage of p^i M under tau, computed once from the Smith normal
form of tau and then thresholded per index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LawViolation, PrimeMismatchError, WindowError
from .exactlinalg import (FGModule, ModuleMap, QMat, TwoTermComplex,
                          check_prime, homology_two_term, is_p_local,
                          kernel_over_zp, smith_normal_form, zero_module)
from .filphi import PhiModule


@dataclass(frozen=True)
class FpGauge:
    """Windowed u/t diagram with Frobenius identification.

    ``t[k]`` is t_{a+1+k}: M^{a+1+k} -> M^{a+k} and ``u[k]`` is
    u_{a+1+k}: M^{a+k} -> M^{a+1+k}; ``tau``: M^b -> M^a.
    """

    prime: int
    window: tuple[int, int]
    modules: tuple[FGModule, ...]
    t: tuple[ModuleMap, ...]
    u: tuple[ModuleMap, ...]
    tau: ModuleMap

    def __post_init__(self):
        check_prime(self.prime)
        a, b = self.window
        if a > b:
            raise ValueError("window must satisfy a <= b")
        if len(self.modules) != b - a + 1:
            raise ValueError("need one module per window index")
        if len(self.t) != b - a or len(self.u) != b - a:
            raise ValueError("need one t and one u per adjacent pair")
        for m in self.modules:
            if m.prime != self.prime:
                raise PrimeMismatchError(self.prime, m.prime)
        for k, tm in enumerate(self.t):
            if tm.source != self.modules[k + 1] or tm.target != self.modules[k]:
                raise ValueError(f"t[{k}] must map M^{a + 1 + k} to M^{a + k}")
        for k, um in enumerate(self.u):
            if um.source != self.modules[k] or um.target != self.modules[k + 1]:
                raise ValueError(f"u[{k}] must map M^{a + k} to M^{a + 1 + k}")
        if self.tau.source != self.modules[-1] or self.tau.target != self.modules[0]:
            raise ValueError("tau must map M^b to M^a")

    @property
    def a(self) -> int:
        return self.window[0]

    @property
    def b(self) -> int:
        return self.window[1]

    def module_at(self, i: int) -> FGModule:
        a, b = self.window
        return self.modules[min(max(i, a), b) - a]

    def t_at(self, i: int) -> ModuleMap:
        """t_i: M^i -> M^{i-1}, extended by the declared-constant convention."""
        a, b = self.window
        if a < i <= b:
            return self.t[i - a - 1]
        if i <= a:
            return ModuleMap.identity(self.modules[0])
        return ModuleMap.scalar(self.modules[-1], self.prime)

    def u_at(self, i: int) -> ModuleMap:
        """u_i: M^{i-1} -> M^i, extended by the declared-constant convention."""
        a, b = self.window
        if a < i <= b:
            return self.u[i - a - 1]
        if i <= a:
            return ModuleMap.scalar(self.modules[0], self.prime)
        return ModuleMap.identity(self.modules[-1])

    def t_composite(self, top: int, bottom: int) -> ModuleMap:
        """Composite of t's from M^top down to M^bottom (top >= bottom)."""
        acc = ModuleMap.identity(self.module_at(bottom))
        for i in range(bottom + 1, top + 1):
            acc = acc.compose(self.t_at(i))
        return acc

    def u_composite(self, bottom: int, top: int) -> ModuleMap:
        """Composite of u's from M^bottom up to M^top (bottom <= top)."""
        acc = ModuleMap.identity(self.module_at(bottom))
        for i in range(bottom + 1, top + 1):
            acc = self.u_at(i).compose(acc)
        return acc


@dataclass(frozen=True)
class GaugeReport:
    """Result of validating a gauge: the list of violated laws."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(g: FpGauge) -> GaugeReport:
    """Check every gauge law exactly; list each violation, never raise."""
    a, b = g.window
    bad: list[str] = []
    for i in range(a + 1, b + 1):
        ut = g.u_at(i).compose(g.t_at(i))
        tu = g.t_at(i).compose(g.u_at(i))
        if not ut.equals_as_map(ModuleMap.scalar(g.module_at(i), g.prime)):
            bad.append(f"ut = tu = p failed at index {i} (ut != p)")
        if not tu.equals_as_map(ModuleMap.scalar(g.module_at(i - 1), g.prime)):
            bad.append(f"ut = tu = p failed at index {i} (tu != p)")
    if not g.tau.is_isomorphism():
        bad.append("tau must be an isomorphism M^b -> M^a")
    return GaugeReport(tuple(bad))


def extend_window(g: FpGauge, a_new: int, b_new: int) -> FpGauge:
    """Enlarge the window by the declared-constant data; the gauge is unchanged."""
    a, b = g.window
    if a_new > a or b_new < b:
        raise ValueError("window can only grow")
    modules = ([g.modules[0]] * (a - a_new) + list(g.modules)
               + [g.modules[-1]] * (b_new - b))
    ts = [g.t_at(i) for i in range(a_new + 1, a + 1)] + list(g.t) + \
         [g.t_at(i) for i in range(b + 1, b_new + 1)]
    us = [g.u_at(i) for i in range(a_new + 1, a + 1)] + list(g.u) + \
         [g.u_at(i) for i in range(b + 1, b_new + 1)]
    return FpGauge(g.prime, (a_new, b_new), tuple(modules), tuple(ts),
                   tuple(us), g.tau)


def syntomic_cohomology(g: FpGauge) -> tuple[FGModule, FGModule]:
    """(H0, H1) of  M^0 --(t-composite  -  tau u-composite)--> M^a.

    The window must contain 0; extend it first if it does not.
    """
    a, b = g.window
    if not (a <= 0 <= b):
        raise WindowError("syntomic cohomology needs a window containing 0; "
                          "extend the window first")
    down = g.t_composite(0, a)
    up = g.tau.compose(g.u_composite(0, b))
    return homology_two_term(TwoTermComplex(down - up))


def rational_realization(g: FpGauge) -> PhiModule:
    """Invert p: the bottom module with the tau-induced automorphism.

    In bottom coordinates every t becomes the identity and every u becomes
    multiplication by p, so the automorphism is p^b tau (t-composite)^{-1}
    read through the structural identifications; the result does not depend
    on the window (enlarging it multiplies and divides by the same power).
    """
    a, b = g.window
    iota = g.t_composite(b, a).rational_matrix()
    tau = g.tau.rational_matrix()
    n = g.modules[0].free_rank
    if n == 0:
        return PhiModule(g.prime, QMat.zeros(0, 0))
    phi = tau @ QMat.scalar(iota.nrows, Fraction(g.prime) ** b) @ iota.inverse()
    return PhiModule(g.prime, phi)


def direct_sum(g1: FpGauge, g2: FpGauge) -> FpGauge:
    """Levelwise direct sum after aligning the windows."""
    if g1.prime != g2.prime:
        raise PrimeMismatchError(g1.prime, g2.prime)
    a = min(g1.a, g2.a)
    b = max(g1.b, g2.b)
    g1, g2 = extend_window(g1, a, b), extend_window(g2, a, b)

    def sum_map(m1: ModuleMap, m2: ModuleMap) -> ModuleMap:
        src = m1.source.direct_sum(m2.source)
        tgt = m1.target.direct_sum(m2.target)
        return ModuleMap(src, tgt, _block_diag_modmap(m1, m2))

    modules = tuple(x.direct_sum(y) for x, y in zip(g1.modules, g2.modules))
    ts = tuple(sum_map(x, y) for x, y in zip(g1.t, g2.t))
    us = tuple(sum_map(x, y) for x, y in zip(g1.u, g2.u))
    tau = sum_map(g1.tau, g2.tau)
    return FpGauge(g1.prime, (a, b), modules, ts, us, tau)


def _block_diag_modmap(m1: ModuleMap, m2: ModuleMap) -> QMat:
    """Generator-aligned block sum: free generators first, then torsion."""
    src = m1.source.direct_sum(m2.source)
    tgt = m1.target.direct_sum(m2.target)
    out = [[Fraction(0)] * src.ngens for _ in range(tgt.ngens)]
    # direct_sum sorts torsion, so place blocks by searching stable positions
    tgt_tors_positions = _merged_positions(m1.target.torsion, m2.target.torsion)
    src_tors_positions = _merged_positions(m1.source.torsion, m2.source.torsion)
    for i in range(m1.target.ngens):
        oi = i if i < m1.target.free_rank else \
            tgt.free_rank + tgt_tors_positions[0][i - m1.target.free_rank]
        for j in range(m1.source.ngens):
            oj = j if j < m1.source.free_rank else \
                src.free_rank + src_tors_positions[0][j - m1.source.free_rank]
            out[oi][oj] = m1.matrix[i, j]
    for i in range(m2.target.ngens):
        oi = (m1.target.free_rank + i) if i < m2.target.free_rank else \
            tgt.free_rank + tgt_tors_positions[1][i - m2.target.free_rank]
        for j in range(m2.source.ngens):
            oj = (m1.source.free_rank + j) if j < m2.source.free_rank else \
                src.free_rank + src_tors_positions[1][j - m2.source.free_rank]
            out[oi][oj] = m2.matrix[i, j]
    return QMat(out, ncols=src.ngens)


def _merged_positions(t1: tuple[int, ...], t2: tuple[int, ...]):
    """Stable positions of each input exponent inside sorted(t1 + t2)."""
    tagged = [(e, 0, k) for k, e in enumerate(t1)] + [(e, 1, k) for k, e in enumerate(t2)]
    tagged.sort(key=lambda x: (x[0], x[1], x[2]))
    pos1 = {}
    pos2 = {}
    for slot, (_, side, k) in enumerate(tagged):
        (pos1 if side == 0 else pos2)[k] = slot
    return pos1, pos2


# ---------------------------------------------------------------------------
# F-crystals at the point and their saturated filtration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FCrystalPoint:
    """A free module with an invertible rational Frobenius matrix."""

    prime: int
    rank: int
    tau_crys: QMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.tau_crys.shape != (self.rank, self.rank):
            raise ValueError("tau_crys must be rank x rank")
        if self.rank > 0 and self.tau_crys.det() == 0:
            raise LawViolation("tau_crys must be invertible over the rationals")


def _snf_data(c: FCrystalPoint):
    s = smith_normal_form(c.tau_crys, c.prime)
    # all diagonal entries are nonzero since tau is invertible
    return s, list(s.exponents)


def filtration_basis(c: FCrystalPoint, i: int) -> QMat:
    """Column basis of Fil^i = {m : tau(m) in p^i M} inside M = Z_(p)^rank.

    With U tau V = diag(p^{d_j}), the preimage is spanned by
    p^{max(i - d_j, 0)} (column j of V).
    """
    s, exps = _snf_data(c)
    cols = []
    for j, d_j in enumerate(exps):
        scale = Fraction(c.prime) ** max(i - d_j, 0)
        cols.append([scale * s.v[r, j] for r in range(c.rank)])
    return QMat.from_cols(cols, c.rank)


def gauge_from_fcrystal(c: FCrystalPoint) -> FpGauge:
    """Gauge of the saturated filtration Fil^i = preimage of p^i M under tau.

    t is the inclusion, u the unique map with ut = p, and the window is the
    exponent range of the Smith normal form of tau (widened to contain 0).
    tau of the gauge sends m in Fil^b to tau_crys(m)/p^b, which lands in M
    and is an isomorphism there.
    """
    p = c.prime
    if c.rank == 0:
        m = zero_module(p)
        return FpGauge(p, (0, 0), (m,), (), (), ModuleMap.identity(m))
    s, exps = _snf_data(c)
    a = min(min(exps), 0)
    b = max(max(exps), 0)
    free = FGModule(p, c.rank)
    modules = tuple(free for _ in range(a, b + 1))
    ts, us = [], []
    for i in range(a + 1, b + 1):
        tdiag = [Fraction(p) ** (max(i - d, 0) - max(i - 1 - d, 0)) for d in exps]
        udiag = [Fraction(p) / x for x in tdiag]
        ts.append(ModuleMap(free, free, QMat.diagonal(tdiag)))
        us.append(ModuleMap(free, free, QMat.diagonal(udiag)))
    # in the bases B_i = V diag(p^{max(i - d_j, 0)}), tau of the gauge is
    # B_a^{-1} (tau_crys B_b / p^b) = V^{-1} U^{-1}: unimodular
    tau = ModuleMap(free, free, s.v.inverse() @ s.u.inverse())
    return FpGauge(p, (a, b), modules, tuple(ts), tuple(us), tau)


def twist_gauge(n: int, p: int) -> FpGauge:
    """The rank-one gauge with tau_crys = p^{-n} (the n-th twist)."""
    tau = QMat([[Fraction(1, p ** n) if n >= 0 else Fraction(p ** (-n))]])
    return gauge_from_fcrystal(FCrystalPoint(p, 1, tau))


def filtration_saturation_holds(c: FCrystalPoint) -> bool:
    """Exact check of  p M  intersect  Fil^i  =  p Fil^{i-1}  at every window index.

    This is the saturation property of the filtration; it is equivalent to
    injectivity of the induced maps Fil^i / p Fil^{i-1} -> Fil^{i-1} / p Fil^{i-2}
    and is what the mod-p injectivity of the filtration diagram means at the
    point, where the ideal cutting out the point is (p) itself.
    """
    if c.rank == 0:
        return True
    p = c.prime
    _, exps = _snf_data(c)
    a, b = min(min(exps), 0), max(max(exps), 0)
    full = QMat.identity(c.rank)
    for i in range(a, b + 2):
        lhs = _lattice_intersection(full.scale(p), filtration_basis(c, i), p)
        rhs = filtration_basis(c, i - 1).scale(p)
        if not (_lattice_contains(lhs, rhs, p) and _lattice_contains(rhs, lhs, p)):
            return False
    return True


def _lattice_intersection(b1: QMat, b2: QMat, p: int) -> QMat:
    """Basis of the intersection of two full-rank lattices in Q^n."""
    ker = kernel_over_zp(b1.hstack(b2.scale(-1)), p)
    coeffs = ker.take_rows(list(range(b1.ncols)))
    vecs = b1 @ coeffs
    s = smith_normal_form(vecs, p)
    # a basis of the (full-rank) intersection: U^{-1} diag(p^e)
    return s.u.inverse() @ s.d.take_cols(list(range(s.rank)))


def _lattice_contains(outer: QMat, inner: QMat, p: int) -> bool:
    """Every column of ``inner`` lies in the Z_(p)-span of ``outer``."""
    sol = outer.solve(inner)
    if sol is None:
        return False
    return all(is_p_local(sol[i, j], p)
               for i in range(sol.nrows) for j in range(sol.ncols))


# ---------------------------------------------------------------------------
# Hodge--Tate weights
# ---------------------------------------------------------------------------


def hodge_tate_weights(g: FpGauge) -> dict[int, int]:
    """Weight multiset: i -> dim of M^i / (p M^i + image u_i + image t_{i+1}).

    Finite support is guaranteed by stabilization: outside the window one of
    u, t is an isomorphism and the quotient vanishes.
    """
    a, b = g.window
    out: dict[int, int] = {}
    for i in range(a, b + 1):
        m = g.module_at(i)
        u_img = g.u_at(i).matrix
        t_img = g.t_at(i + 1).matrix
        pid = QMat.scalar(m.ngens, g.prime)
        rel = m.relation_matrix()
        stacked = pid.hstack(u_img).hstack(t_img).hstack(rel)
        s = smith_normal_form(stacked, g.prime)
        dim = m.ngens - sum(1 for e in s.exponents if e == 0)
        if dim:
            out[i] = dim
    return out


def snf_weight_multiset(c: FCrystalPoint) -> dict[int, int]:
    """Valuations of the Smith diagonal of tau_crys, with multiplicity.

    For diag(p^{-n_1}, ..., p^{-n_r}) this is the multiset {-n_j}: the twist
    exponents negated; it must match :func:`hodge_tate_weights` of the gauge.
    """
    _, exps = _snf_data(c)
    out: dict[int, int] = {}
    for e in exps:
        out[e] = out.get(e, 0) + 1
    return out
