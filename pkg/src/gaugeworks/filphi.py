"""Filtered Frobenius modules over Q_p and their homological algebra.

A PhiModule is a finite-dimensional rational vector space with an
automorphism phi (Frobenius acts trivially on the base field, so a
semilinear structure is just an automorphism).  A FilteredSpace is a finite
decreasing diagram of spaces with transition maps that are allowed to be
non-injective ("non-honest" filtrations keep the category abelian); a
FilteredPhiModule combines both structures on the common underlying space.

The derived Hom out of the unit object is concentrated in degrees 0 and 1
and is computed here two ways: ``rhom_phi`` for plain Frobenius modules
(kernel and cokernel of phi - 1) and ``rhom_mfphi`` for filtered ones, via
the total complex of the fibre of (derived phi-invariants) -> (underlying
space modulo Fil^0).  The equivalent two-term formula Fil^0 -> underlying
with differential (1 - phi) after the structural map is exposed separately
so the agreement of the two routes can be tested rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (LawViolation, NonHonestFiltrationError,
                     PrimeMismatchError)
from .exactlinalg import QMat, check_prime, intersect_spans, kron, vp


@dataclass(frozen=True)
class PhiModule:
    """A rational vector space with an invertible Frobenius matrix."""

    prime: int
    frobenius: QMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.frobenius.nrows != self.frobenius.ncols:
            raise ValueError("frobenius must be square")
        if self.dim > 0 and self.frobenius.det() == 0:
            raise LawViolation("the Frobenius matrix must be invertible",
                               "determinant is zero")

    @property
    def dim(self) -> int:
        return self.frobenius.nrows

    def direct_sum(self, other: "PhiModule") -> "PhiModule":
        if self.prime != other.prime:
            raise PrimeMismatchError(self.prime, other.prime)
        n, m = self.dim, other.dim
        rows = []
        for i in range(n):
            rows.append(list(self.frobenius.rows[i]) + [Fraction(0)] * m)
        for i in range(m):
            rows.append([Fraction(0)] * n + list(other.frobenius.rows[i]))
        return PhiModule(self.prime, QMat(rows, ncols=n + m))


@dataclass(frozen=True)
class FilteredSpace:
    """A finite decreasing diagram of rational spaces.

    ``dims[k]`` is the dimension of the space at index lo+k and
    ``transitions[k]`` maps the space at lo+k+1 to the one at lo+k.
    Outside the window the diagram is constant: equal to the space at ``lo``
    below (identity transitions) and zero above ``hi``.  Transitions need
    not be injective.
    """

    lo: int
    hi: int
    dims: tuple[int, ...]
    transitions: tuple[QMat, ...] = ()

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("window must satisfy lo <= hi")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.hi - self.lo + 1:
            raise ValueError("dims must cover the window")
        if len(self.transitions) != self.hi - self.lo:
            raise ValueError("need one transition per adjacent pair in the window")
        for k, t in enumerate(self.transitions):
            if t.shape != (self.dims[k], self.dims[k + 1]):
                raise ValueError(f"transition {k} has shape {t.shape}, "
                                 f"expected {(self.dims[k], self.dims[k + 1])}")

    @property
    def underlying_dim(self) -> int:
        return self.dims[0]

    def dim_at(self, i: int) -> int:
        if i < self.lo:
            return self.dims[0]
        if i > self.hi:
            return 0
        return self.dims[i - self.lo]

    def transition(self, i: int) -> QMat:
        """The map space_{i+1} -> space_i, with the boundary conventions."""
        if i < self.lo:
            return QMat.identity(self.dims[0])
        if i >= self.hi:
            return QMat.zeros(self.dim_at(i), 0)
        return self.transitions[i - self.lo]

    def iota(self, i: int) -> QMat:
        """Composite structural map space_i -> space_lo (the underlying space)."""
        acc = QMat.identity(self.dim_at(i))
        for j in range(i - 1, self.lo - 1, -1):
            acc = self.transition(j) @ acc
        return acc

    def subspace(self, i: int) -> QMat:
        """Column basis of the image of space_i inside the underlying space."""
        return self.iota(i).column_space_basis()

    def is_honest(self) -> bool:
        return all(self.iota(i).rank() == self.dim_at(i)
                   for i in range(self.lo, self.hi + 1))

    @classmethod
    def from_subspaces(cls, lo: int, hi: int, bases: list[QMat]) -> "FilteredSpace":
        """Honest filtration from a nested list of column bases.

        ``bases[0]`` must have full rank equal to the ambient dimension, and
        each later basis must span a subspace of the previous one.
        """
        if len(bases) != hi - lo + 1:
            raise ValueError("need one basis per window index")
        dims = tuple(b.ncols for b in bases)
        transitions = []
        for k in range(len(bases) - 1):
            sol = bases[k].solve(bases[k + 1])
            if sol is None:
                raise ValueError(f"basis at index {lo + k + 1} is not contained "
                                 f"in the span at index {lo + k}")
            transitions.append(sol)
        return cls(lo, hi, dims, tuple(transitions))


@dataclass(frozen=True)
class FilteredPhiModule:
    """A filtration diagram plus a Frobenius on the underlying space."""

    prime: int
    filtration: FilteredSpace
    frobenius: QMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.frobenius.shape != (self.dim, self.dim):
            raise ValueError("frobenius must act on the underlying space")
        if self.dim > 0 and self.frobenius.det() == 0:
            raise LawViolation("the Frobenius matrix must be invertible",
                               "determinant is zero")

    @property
    def dim(self) -> int:
        return self.filtration.underlying_dim

    def phi_module(self) -> PhiModule:
        """Forget the filtration (the crystalline realization)."""
        return PhiModule(self.prime, self.frobenius)

    def fil0_dim(self) -> int:
        return self.filtration.dim_at(0)

    def fil0_iota(self) -> QMat:
        return self.filtration.iota(0)

    def direct_sum(self, other: "FilteredPhiModule") -> "FilteredPhiModule":
        if self.prime != other.prime:
            raise PrimeMismatchError(self.prime, other.prime)
        lo = min(self.filtration.lo, other.filtration.lo)
        hi = max(self.filtration.hi, other.filtration.hi)
        dims, transitions = [], []
        for i in range(lo, hi + 1):
            dims.append(self.filtration.dim_at(i) + other.filtration.dim_at(i))
        for i in range(lo, hi):
            a, b = _clamped_transition(self.filtration, i), _clamped_transition(other.filtration, i)
            transitions.append(_block_diag(a, b))
        fs = FilteredSpace(lo, hi, tuple(dims), tuple(transitions))
        phi = PhiModule(self.prime, self.frobenius).direct_sum(
            PhiModule(other.prime, other.frobenius)).frobenius
        return FilteredPhiModule(self.prime, fs, phi)


def _clamped_transition(f: FilteredSpace, i: int) -> QMat:
    """transition(i) but with a genuine zero map at the top boundary."""
    if i < f.lo:
        return QMat.identity(f.dims[0])
    if i >= f.hi:
        return QMat.zeros(f.dim_at(i), f.dim_at(i + 1))
    return f.transitions[i - f.lo]


def _block_diag(a: QMat, b: QMat) -> QMat:
    rows = []
    for r in a.rows:
        rows.append(list(r) + [Fraction(0)] * b.ncols)
    for r in b.rows:
        rows.append([Fraction(0)] * a.ncols + list(r))
    return QMat(rows, ncols=a.ncols + b.ncols)


# ---------------------------------------------------------------------------
# derived Hom out of the unit object
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RHom:
    """Cohomology of a complex in degrees 0 and 1, with explicit bases."""

    h0: int
    h1: int
    h0_basis: QMat        # columns: kernel vectors in the degree-0 space
    h1_reps: QMat         # columns: representatives spanning the cokernel
    h0_in_underlying: QMat  # columns: images of the H0 basis downstairs

    @property
    def dims(self) -> tuple[int, int]:
        return (self.h0, self.h1)


def _coker_reps(d: QMat) -> QMat:
    """Standard basis vectors representing a basis of coker(d)."""
    n = d.nrows
    image = d.column_space_basis()
    reps = []
    current = image
    for j in range(n):
        e = QMat.from_cols([[1 if i == j else 0 for i in range(n)]], n)
        candidate = current.hstack(e)
        if candidate.rank() > current.rank():
            reps.append(e)
            current = candidate
    out = QMat.zeros(n, 0)
    for e in reps:
        out = out.hstack(e)
    return out


def rhom_phi(m: PhiModule) -> RHom:
    """Derived phi-invariants: kernel and cokernel of (phi - 1)."""
    d = m.frobenius - QMat.identity(m.dim)
    ker = d.kernel()
    return RHom(h0=ker.ncols, h1=m.dim - d.rank(), h0_basis=ker,
                h1_reps=_coker_reps(d), h0_in_underlying=ker)


def rhom_mfphi(d: FilteredPhiModule) -> RHom:
    """RHom out of the unit in filtered phi-modules.

    Computed as the total complex of the fibre of
    (derived phi-invariants of the underlying space) -> (underlying / Fil^0),
    where the quotient is derived, i.e. the cone of the structural map.
    The output is concentrated in degrees 0 and 1 by construction.
    """
    n = d.dim
    f0 = d.fil0_dim()
    iota = d.fil0_iota()
    phi = d.frobenius
    one = QMat.identity(n)
    # degree 0: underlying + Fil^0, degree 1: underlying + underlying
    # map (x, f) |-> ((phi - 1) x, x - iota f)
    top = (phi - one).hstack(QMat.zeros(n, f0))
    bot = one.hstack(iota.scale(-1))
    d0 = top.vstack(bot)
    ker = d0.kernel()
    h0 = ker.ncols
    h1 = (2 * n) - (n + f0 - h0)  # rank-nullity on the total complex
    # H0 lives on pairs (x, f) with x = iota f; report the Fil^0 part and
    # its image downstairs.
    h0_fil = ker.take_rows(list(range(n, n + f0)))
    h0_under = ker.take_rows(list(range(n)))
    # H1 representatives: in the quotient (under + under) / image(d0), the
    # second block can be absorbed; representatives live in the first copy.
    reps = _coker_reps((phi - one) @ iota if f0 else QMat.zeros(n, 0))
    return RHom(h0=h0, h1=h1, h0_basis=h0_fil, h1_reps=reps,
                h0_in_underlying=h0_under)


def rhom_mfphi_two_term(d: FilteredPhiModule) -> RHom:
    """The equivalent two-term formula Fil^0 --(1 - phi) after iota--> underlying.

    Kept separate from :func:`rhom_mfphi` so tests can compare the two
    routes; do not merge the implementations.
    """
    n = d.dim
    iota = d.fil0_iota()
    diff = iota - d.frobenius @ iota
    ker = diff.kernel()
    return RHom(h0=ker.ncols, h1=n - diff.rank(), h0_basis=ker,
                h1_reps=_coker_reps(diff), h0_in_underlying=iota @ ker)


# ---------------------------------------------------------------------------
# twists and numerical invariants
# ---------------------------------------------------------------------------


def tate(n: int, p: int) -> FilteredPhiModule:
    """The twist object with phi = p^(-n) and filtration jump at -n.

    Convention (fixed once, used everywhere): the weight of the n-th twist
    is -n, so Fil^i is everything for i <= -n and zero above.
    """
    check_prime(p)
    fs = FilteredSpace(lo=-n, hi=-n, dims=(1,), transitions=())
    return FilteredPhiModule(p, fs, QMat([[Fraction(1, p ** n) if n >= 0
                                           else Fraction(p ** (-n))]]))


def newton_number(d: FilteredPhiModule) -> int:
    """p-adic valuation of det(phi)."""
    if d.dim == 0:
        return 0
    return vp(d.frobenius.det(), d.prime)


def hodge_number(d: FilteredPhiModule) -> int:
    """Sum of i * dim gr^i; rejects non-honest filtrations."""
    f = d.filtration
    if not f.is_honest():
        raise NonHonestFiltrationError("hodge_number")
    total = 0
    for i in range(f.lo, f.hi + 1):
        total += i * (f.dim_at(i) - f.dim_at(i + 1))
    return total


# ---------------------------------------------------------------------------
# weak admissibility
# ---------------------------------------------------------------------------


class Admissibility(Enum):
    YES = "true"
    NO = "false"
    UNDECIDED = "undecided"


def _char_poly(a: QMat) -> list[Fraction]:
    """Coefficients [c_0, ..., c_n] of det(tI - A), c_n = 1 (Faddeev-LeVerrier)."""
    n = a.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = QMat.zeros(n, n)
    for k in range(1, n + 1):
        m = a @ m + QMat.scalar(n, coeffs[n - k + 1])
        trace = sum((a @ m).rows[i][i] for i in range(n))
        coeffs[n - k] = -trace / k
    return coeffs


def _rational_roots(coeffs: list[Fraction]) -> dict[Fraction, int]:
    """Rational roots with multiplicities; may miss irrational ones."""
    from math import gcd

    def poly_eval(cs, x):
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def divisors(m: int):
        m = abs(m)
        out = set()
        k = 1
        while k * k <= m:
            if m % k == 0:
                out.add(k)
                out.add(m // k)
            k += 1
        return sorted(out)

    roots: dict[Fraction, int] = {}
    cs = list(coeffs)
    while len(cs) > 1:
        while len(cs) > 1 and cs[0] == 0:
            roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
            cs = cs[1:]
        if len(cs) == 1:
            break
        denlcm = 1
        for c in cs:
            denlcm = denlcm * c.denominator // gcd(denlcm, c.denominator)
        ics = [int(c * denlcm) for c in cs]
        g = 0
        for c in ics:
            g = gcd(g, c)
        if g:
            ics = [c // g for c in ics]
        found = None
        for pnum in divisors(ics[0]) or [0]:
            for qden in divisors(ics[-1]):
                for sign in (1, -1):
                    cand = Fraction(sign * pnum, qden)
                    if poly_eval(cs, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots[found] = roots.get(found, 0) + 1
        # synthetic division by (x - found)
        out = [Fraction(0)] * (len(cs) - 1)
        acc = Fraction(0)
        for k in range(len(cs) - 1, 0, -1):
            acc = cs[k] + acc * found
            out[k - 1] = acc
        cs = out
    return roots


def is_weakly_admissible(d: FilteredPhiModule) -> Admissibility:
    """Newton = Hodge globally and Newton >= Hodge on phi-stable subspaces.

    The subspace enumeration runs over sums of eigenspaces, which is the
    complete list exactly when phi is semisimple with distinct rational
    eigenvalues.  With repeated eigenvalues a violation is still conclusive
    (the witness exists), but a clean pass is reported as UNDECIDED; the
    same applies when phi is not rational-semisimple.  Never guesses.
    """
    f = d.filtration
    if not f.is_honest():
        raise NonHonestFiltrationError("is_weakly_admissible")
    n = d.dim
    if n == 0:
        return Admissibility.YES
    if hodge_number(d) != newton_number(d):
        return Admissibility.NO
    roots = _rational_roots(_char_poly(d.frobenius))
    if sum(roots.values()) != n:
        return Admissibility.UNDECIDED
    # semisimplicity: the product of (phi - lambda) over distinct roots vanishes
    prod = QMat.identity(n)
    for lam in roots:
        prod = prod @ (d.frobenius - QMat.scalar(n, lam))
    if not prod.is_zero():
        return Admissibility.UNDECIDED
    eigen = {lam: (d.frobenius - QMat.scalar(n, lam)).kernel() for lam in roots}
    fil_bases = {i: f.subspace(i) for i in range(f.lo, f.hi + 1)}
    lams = sorted(eigen, key=lambda x: (x.numerator, x.denominator))

    def hodge_of(basis: QMat) -> int:
        # induced filtration: dims of (subspace intersect Fil^i), then jumps
        inter = {}
        for i in range(f.lo, f.hi + 1):
            inter[i] = intersect_spans(basis, fil_bases[i]).ncols
        inter[f.hi + 1] = 0
        return sum(i * (inter[i] - inter[i + 1]) for i in range(f.lo, f.hi + 1))

    violated = False
    for mask in range(1, 2 ** len(lams)):
        chosen = [lams[k] for k in range(len(lams)) if mask >> k & 1]
        basis = QMat.zeros(n, 0)
        for lam in chosen:
            basis = basis.hstack(eigen[lam])
        t_newton = sum(vp(lam, d.prime) * eigen[lam].ncols for lam in chosen)
        if hodge_of(basis) > t_newton:
            violated = True
            break
    if violated:
        return Admissibility.NO
    if any(mult > 1 for mult in roots.values()):
        return Admissibility.UNDECIDED
    return Admissibility.YES


# ---------------------------------------------------------------------------
# tensor structure (honest filtrations only)
# ---------------------------------------------------------------------------


def _honest_bases(d: FilteredPhiModule) -> dict[int, QMat]:
    f = d.filtration
    if not f.is_honest():
        raise NonHonestFiltrationError("tensor structure")
    return {i: f.subspace(i) for i in range(f.lo - 1, f.hi + 2)}


def tensor(d1: FilteredPhiModule, d2: FilteredPhiModule) -> FilteredPhiModule:
    """Tensor product; filtrations convolve: Fil^k = sum of Fil^i (x) Fil^j."""
    if d1.prime != d2.prime:
        raise PrimeMismatchError(d1.prime, d2.prime)
    b1, b2 = _honest_bases(d1), _honest_bases(d2)
    f1, f2 = d1.filtration, d2.filtration
    n = d1.dim * d2.dim
    lo, hi = f1.lo + f2.lo, f1.hi + f2.hi
    bases = []
    for k in range(lo, hi + 1):
        pieces = []
        for i in range(f1.lo, f1.hi + 1):
            j = k - i
            jc = min(max(j, f2.lo), f2.hi + 1)
            pieces.append(kron(b1[i], b2[jc]))
        # the boundary term with Fil^i full on the left
        jc = min(max(k - f1.lo, f2.lo), f2.hi + 1)
        pieces.append(kron(b1[f1.lo], b2[jc]))
        combined = QMat.zeros(n, 0)
        for piece in pieces:
            combined = combined.hstack(piece)
        bases.append(combined.column_space_basis())
    fs = FilteredSpace.from_subspaces(lo, hi, bases)
    return FilteredPhiModule(d1.prime, fs, kron(d1.frobenius, d2.frobenius))


def dual(d: FilteredPhiModule) -> FilteredPhiModule:
    """Dual object: phi inverts and transposes, Fil^i is the annihilator of Fil^{1-i}."""
    b = _honest_bases(d)
    f = d.filtration
    n = d.dim
    lo, hi = -f.hi, -f.lo
    bases = []
    for i in range(lo, hi + 1):
        j = 1 - i
        jc = min(max(j, f.lo), f.hi + 1)
        bases.append(b[jc].transpose().kernel())
    fs = FilteredSpace.from_subspaces(lo, hi, bases)
    return FilteredPhiModule(d.prime, fs, d.frobenius.inverse().transpose())


def internal_hom(d1: FilteredPhiModule, d2: FilteredPhiModule) -> FilteredPhiModule:
    return tensor(dual(d1), d2)
