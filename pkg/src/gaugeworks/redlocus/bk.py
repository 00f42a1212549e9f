"""Invertible glued objects and the flag presentation of the Hodge--Tate side.

Every glued datum whose de Rham+ filtration is honest forces the x maps of
its Hodge--Tate half to be injective (the graded dimensions must add up to
the stable dimension).  Such modules admit a normal form: a space V with an
increasing exhaustive flag G_i and one operator E satisfying

    (E + i)(G_i)  inside  G_{i-1}   for every i,

where V is the stable space, G_i the image of level i in it, and E the
transported operator x D read in a degree divisible by p (equal to the
de Rham restriction Theta).  The level-i component of D is then (E + i)
restricted to G_i, and the algebra relation holds identically.  Tensor
product and dual are flag convolution / flag annihilator with the Leibniz
and negated-transpose operators; this is the engine behind the group law
of the twist family and the randomized glued generators in the test suite.

The n-th twist object ``bk_reduced(n)``: one-dimensional everywhere, flag
jumping at -n, E = n on the Hodge--Tate side; filtration jumping at -n with
Theta = n on the de Rham+ side; identity gluing.  The operator on the
Hodge--Tate column at level i comes out as multiplication by (i + n): the
algebra relation pins it down from the single datum E = n, and it matches
the de Rham restriction Theta = n and the Hodge restriction (one line in
degree -n, Theta = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LawViolation
from ..exactlinalg import FpMat, check_prime, fp_kron, quotient_projection
from .components import (A1Module, FilThetaModule, restrict_dRplus_to_Hod,
                         restrict_HTc_to_Hod)
from .gluing import ReducedFGauge


@dataclass(frozen=True)
class A1Flag:
    """Flag presentation (V, G_., E) of an x-injective stabilized module.

    ``bases[k]`` is a column basis of G_{lo+k}; G_{hi} must be all of V in
    the standard basis (the identity matrix), G_i = 0 below lo.
    """

    prime: int
    dim: int
    lo: int
    hi: int
    bases: tuple[FpMat, ...]
    operator: FpMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.lo > self.hi:
            raise ValueError("window must satisfy lo <= hi")
        if len(self.bases) != self.hi - self.lo + 1:
            raise ValueError("need one basis per window index")
        if self.bases[-1] != FpMat.identity(self.prime, self.dim):
            raise ValueError("the top flag must be the identity basis")
        for k in range(len(self.bases) - 1):
            if self.bases[k + 1].solve(self.bases[k]) is None:
                raise LawViolation("the flag must be increasing")
        if self.operator.shape != (self.dim, self.dim):
            raise ValueError("operator must act on V")
        for i in range(self.lo, self.hi + 1):
            b = self.basis_at(i)
            shifted = self.operator + FpMat.scalar(self.prime, self.dim, i)
            target = self.basis_at(i - 1)
            if target.solve(shifted @ b) is None:
                raise LawViolation("(E + i) must carry G_i into G_{i-1}",
                                   f"failed at i = {i}")

    def basis_at(self, i: int) -> FpMat:
        if i < self.lo:
            return FpMat.zeros(self.prime, self.dim, 0)
        if i > self.hi:
            return FpMat.identity(self.prime, self.dim)
        return self.bases[i - self.lo]

    def to_module(self) -> A1Module:
        """Windowed presentation: x = flag inclusions, D_i = (E + i) on G_i."""
        p = self.prime
        dims, xs, ds = [], [], []
        for i in range(self.lo, self.hi + 1):
            dims.append(self.basis_at(i).ncols)
        for i in range(self.lo, self.hi):
            xs.append(self.basis_at(i + 1).solve(self.basis_at(i)))
        for i in range(self.lo + 1, self.hi + 1):
            shifted = self.operator + FpMat.scalar(p, self.dim, i)
            ds.append(self.basis_at(i - 1).solve(shifted @ self.basis_at(i)))
        return A1Module(p, self.lo, self.hi, tuple(dims), tuple(xs), tuple(ds))

    @classmethod
    def from_module(cls, m: A1Module) -> "A1Flag":
        """Inverse of :meth:`to_module`; requires all x maps injective."""
        p = m.prime
        n_level = m.stable_level()
        dim = m.dim_at(n_level)
        bases = []
        for i in range(m.lo, m.hi + 1):
            comp = m.x_composite(i, n_level)
            if comp.rank() != m.dim_at(i):
                raise LawViolation("flag presentation needs injective x maps",
                                   f"x out of level {i} drops rank")
            bases.append(comp.column_space_basis())
        # normalize the top to the identity basis of the stable space
        if bases and bases[-1].ncols == dim:
            bases[-1] = FpMat.identity(p, dim)
        operator = m.x_at(n_level - 1) @ m.d_at(n_level)  # = E (+ n_level = 0 mod p)
        return cls(p, dim, m.lo, m.hi, tuple(bases), operator)

    def tensor(self, other: "A1Flag") -> "A1Flag":
        """Flag convolution with the Leibniz operator E (x) 1 + 1 (x) E."""
        if self.prime != other.prime:
            raise LawViolation("both factors must share one prime")
        p = self.prime
        dim = self.dim * other.dim
        lo, hi = self.lo + other.lo, self.hi + other.hi
        bases = []
        for k in range(lo, hi + 1):
            pieces = FpMat.zeros(p, dim, 0)
            for i in range(self.lo, self.hi + 1):
                pieces = pieces.hstack(fp_kron(self.basis_at(i),
                                               other.basis_at(k - i)))
            bases.append(pieces.column_space_basis())
        bases[-1] = FpMat.identity(p, dim)
        op = (fp_kron(self.operator, FpMat.identity(p, other.dim))
              + fp_kron(FpMat.identity(p, self.dim), other.operator))
        return A1Flag(p, dim, lo, hi, tuple(bases), op)

    def dual(self) -> "A1Flag":
        """G_i of the dual is the annihilator of G_{-i-1}; E dualizes to -E^T."""
        p = self.prime
        lo, hi = -self.hi, -self.lo
        bases = []
        for i in range(lo, hi + 1):
            ann = self.basis_at(-i - 1).transpose().kernel()
            bases.append(ann.column_space_basis())
        bases[-1] = FpMat.identity(p, self.dim)
        return A1Flag(p, self.dim, lo, hi, tuple(bases), -self.operator.transpose())


# ---------------------------------------------------------------------------
# the twist family
# ---------------------------------------------------------------------------


def bk_flag(n: int, p: int) -> A1Flag:
    """Rank-one flag with jump at -n and operator n."""
    return A1Flag(p, 1, -n, -n, (FpMat.identity(p, 1),),
                  FpMat.scalar(p, 1, n % p))


def bk_filtheta(n: int, p: int) -> FilThetaModule:
    """Rank-one de Rham+ datum: filtration jumping at -n, Theta = n."""
    return FilThetaModule(p, 1, -n, -n, (FpMat.identity(p, 1),),
                          FpMat.scalar(p, 1, n % p))


def bk_reduced(n: int, p: int) -> ReducedFGauge:
    """The n-th invertible glued object, with identity gluing maps."""
    check_prime(p)
    return ReducedFGauge(htc=bk_flag(n, p).to_module(), drp=bk_filtheta(n, p),
                         alpha_dr=FpMat.identity(p, 1),
                         alpha_hod={-n: FpMat.identity(p, 1)})


# ---------------------------------------------------------------------------
# tensor and dual of glued data
# ---------------------------------------------------------------------------


def _convolve_flags(d1: FilThetaModule, d2: FilThetaModule) -> FilThetaModule:
    p = d1.prime
    dim = d1.dim * d2.dim
    lo, hi = d1.lo + d2.lo, d1.hi + d2.hi
    flags = []
    for k in range(lo, hi + 1):
        pieces = FpMat.zeros(p, dim, 0)
        for i in range(d1.lo, d1.hi + 1):
            pieces = pieces.hstack(fp_kron(d1.flag_at(i), d2.flag_at(k - i)))
        flags.append(pieces.column_space_basis())
    theta = (fp_kron(d1.theta, FpMat.identity(p, d2.dim))
             + fp_kron(FpMat.identity(p, d1.dim), d2.theta))
    return FilThetaModule(p, dim, lo, hi, tuple(flags), theta)


def _dual_filtheta(d: FilThetaModule) -> FilThetaModule:
    p = d.prime
    lo, hi = -d.hi, -d.lo
    flags = []
    for i in range(lo, hi + 1):
        flags.append(d.flag_at(1 - i).transpose().kernel().column_space_basis())
    return FilThetaModule(p, d.dim, lo, hi, tuple(flags), -d.theta.transpose())


def _block_iso_increasing(f1: A1Flag, f2: A1Flag, ft: "A1Flag",
                          tensor_module: A1Module):
    """Canonical isomorphisms  (+)_{i+j=k} gr_i (x) gr_j  ->  gr_k(tensor).

    Returns a map degree -> (iso matrix, list of (i, j, block width)).
    Representatives live in V1 (x) V2 and are read in the tensor flag's own
    level bases, which are also the coordinates of its windowed module.
    """
    p = f1.prime
    m1, m2 = f1.to_module(), f2.to_module()
    gr1 = {i: _gr_data_a1(m1, i) for i in range(m1.lo, m1.hi + 1)}
    gr2 = {j: _gr_data_a1(m2, j) for j in range(m2.lo, m2.hi + 1)}
    out = {}
    for k in range(tensor_module.lo, tensor_module.hi + 1):
        pi_k, _ = quotient_projection(
            tensor_module.x_at(k - 1).column_space_basis())
        if pi_k.nrows == 0:
            continue
        cols = FpMat.zeros(p, pi_k.nrows, 0)
        layout = []
        for i in sorted(gr1):
            j = k - i
            if j not in gr2:
                continue
            sig1, lift1 = gr1[i]
            sig2, lift2 = gr2[j]
            if sig1.ncols == 0 or sig2.ncols == 0:
                continue
            # lift gr_i (x) gr_j into V1 (x) V2, then express at level k of
            # the tensor flag and project to its gr
            vec = fp_kron(lift1 @ sig1, lift2 @ sig2)
            coords = ft.basis_at(k).solve(vec)
            if coords is None:
                raise LawViolation("tensor flag does not contain a product piece")
            cols = cols.hstack(pi_k @ coords)
            layout.append((i, j, sig1.ncols * sig2.ncols))
        out[k] = (cols, layout)
    return out


def _gr_data_a1(m: A1Module, i: int):
    """Section of Fil_i -> gr_i plus the embedding Fil_i -> stable space."""
    _, sigma = quotient_projection(m.x_at(i - 1).column_space_basis())
    lift = m.x_composite(i, m.stable_level())
    return sigma, lift


def tensor_reduced(g1: ReducedFGauge, g2: ReducedFGauge) -> ReducedFGauge:
    """Tensor product of glued data, alphas included."""
    f1, f2 = A1Flag.from_module(g1.htc), A1Flag.from_module(g2.htc)
    ft = f1.tensor(f2)
    htc = ft.to_module()
    drp = _convolve_flags(g1.drp, g2.drp)
    alpha_dr = fp_kron(g1.alpha_dr, g2.alpha_dr)
    # assemble alpha_hod degreewise through the canonical block isomorphisms
    p = g1.prime
    htc_blocks = _block_iso_increasing(f1, f2, ft, htc)
    hod1_h, hod2_h = restrict_HTc_to_Hod(g1.htc), restrict_HTc_to_Hod(g2.htc)
    hod_d = restrict_dRplus_to_Hod(drp)
    drp_blocks = _block_iso_decreasing(g1.drp, g2.drp, drp)
    alpha_hod = {}
    for k, (iso_htc, layout) in htc_blocks.items():
        if hod_d.dim_at(k) == 0:
            continue
        iso_drp, layout_d = drp_blocks[k]
        if [(i, j) for i, j, _ in layout] != [(i, j) for i, j, _ in layout_d]:
            raise LawViolation("tensor gradeds disagree between the two halves")
        blocks = FpMat.zeros(p, 0, 0)
        for i, j, _ in layout:
            piece = fp_kron(g1.alpha_hod[i], g2.alpha_hod[j])
            blocks = _block_diag(blocks, piece)
        alpha_hod[k] = iso_drp @ blocks @ iso_htc.inverse()
    return ReducedFGauge(htc=htc, drp=drp, alpha_dr=alpha_dr, alpha_hod=alpha_hod)


def _block_iso_decreasing(d1: FilThetaModule, d2: FilThetaModule,
                          tensor_mod: FilThetaModule):
    """Same as :func:`_block_iso_increasing` on the filtered de Rham side."""
    p = d1.prime
    gr1 = {i: _gr_data_filtheta(d1, i) for i in range(d1.lo, d1.hi + 1)}
    gr2 = {j: _gr_data_filtheta(d2, j) for j in range(d2.lo, d2.hi + 1)}
    out = {}
    for k in range(tensor_mod.lo, tensor_mod.hi + 1):
        basis_k = tensor_mod.flag_at(k)
        inner = basis_k.solve(tensor_mod.flag_at(k + 1))
        pi_k, _ = quotient_projection(inner)
        if pi_k.nrows == 0:
            continue
        cols = FpMat.zeros(p, pi_k.nrows, 0)
        layout = []
        for i in sorted(gr1):
            j = k - i
            if j not in gr2:
                continue
            lift1, lift2 = gr1[i], gr2[j]
            if lift1.ncols == 0 or lift2.ncols == 0:
                continue
            vec = fp_kron(lift1, lift2)
            coords = basis_k.solve(vec)
            if coords is None:
                raise LawViolation("tensor flag does not contain a product piece")
            cols = cols.hstack(pi_k @ coords)
            layout.append((i, j, lift1.ncols * lift2.ncols))
        out[k] = (cols, layout)
    return out


def _gr_data_filtheta(d: FilThetaModule, i: int) -> FpMat:
    """Lift of a gr^i basis into V (columns)."""
    basis = d.flag_at(i)
    inner = basis.solve(d.flag_at(i + 1))
    _, sigma = quotient_projection(inner)
    return basis @ sigma


def _block_diag(a: FpMat, b: FpMat) -> FpMat:
    if a.nrows == 0 and a.ncols == 0:
        return b
    p = a.p
    top = a.hstack(FpMat.zeros(p, a.nrows, b.ncols))
    bot = FpMat.zeros(p, b.nrows, a.ncols).hstack(b)
    return top.vstack(bot)


def dual_reduced(g: ReducedFGauge) -> ReducedFGauge:
    """Dual glued object; on twist objects this negates the twist."""
    p = g.prime
    f = A1Flag.from_module(g.htc)
    fd = f.dual()
    htc = fd.to_module()
    drp = _dual_filtheta(g.drp)
    alpha_dr = g.alpha_dr.inverse().transpose()
    hod_htc = restrict_HTc_to_Hod(htc)
    hod_drp = restrict_dRplus_to_Hod(drp)
    alpha_hod = {}
    for i in hod_htc.support():
        pair_g = _duality_pairing_increasing(f, fd, i)
        pair_f = _duality_pairing_decreasing(g.drp, drp, i)
        middle = g.alpha_hod[-i].inverse().transpose()
        alpha_hod[i] = pair_f.inverse() @ middle @ pair_g
    return ReducedFGauge(htc=htc, drp=drp, alpha_dr=alpha_dr, alpha_hod=alpha_hod)


def _duality_pairing_increasing(f: A1Flag, fd: A1Flag, i: int) -> FpMat:
    """Matrix of gr_i(dual) -> gr_{-i}(original)^*, via the evaluation pairing."""
    m, md = f.to_module(), fd.to_module()
    sig_d, lift_d = _gr_data_a1(md, i)
    sig, lift = _gr_data_a1(m, -i)
    # pairing of representatives inside V* x V
    return ((lift_d @ sig_d).transpose() @ (lift @ sig))


def _duality_pairing_decreasing(d: FilThetaModule, dd: FilThetaModule, i: int) -> FpMat:
    reps_d = _gr_data_filtheta(dd, i)
    reps = _gr_data_filtheta(d, -i)
    return reps_d.transpose() @ reps
