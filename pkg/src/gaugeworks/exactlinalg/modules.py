"""Finitely generated modules over Z_(p) and maps between them.

A module is stored in Smith normal form: a free rank plus a weakly
increasing list of torsion exponents e_i (the module is free^rank + sum of
cyclics of order p^{e_i}).  Equality of modules is equality of this data.
Maps carry a chosen presentation: a matrix in the standard generators, free
generators first, then torsion generators.

Throughout, ``homology_two_term`` computes kernels and cokernels of such
maps exactly; the results are again in Smith normal form, so dimensions and
exponents are independent of any choices made along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import LawViolation, PrimeMismatchError
from .qmat import QMat
from .rationals import check_prime, is_p_local, vp
from .snf import SNF, smith_normal_form


@dataclass(frozen=True)
class FGModule:
    """free^free_rank + (+)_i Z/p^{e_i} with e_i weakly increasing."""

    prime: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        check_prime(self.prime)
        object.__setattr__(self, "torsion", tuple(int(e) for e in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free_rank must be >= 0")
        if any(e <= 0 for e in self.torsion):
            raise ValueError("torsion exponents must be positive")
        if list(self.torsion) != sorted(self.torsion):
            raise ValueError("torsion exponents must be weakly increasing")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_zero(self) -> bool:
        return self.ngens == 0

    def order_exponent(self, i: int):
        """Exponent of the i-th generator's order; None means free (infinite)."""
        if i < self.free_rank:
            return None
        return self.torsion[i - self.free_rank]

    def relation_matrix(self) -> QMat:
        """Presentation relations: columns p^{e_i} * (torsion basis vector)."""
        cols = []
        for k, e in enumerate(self.torsion):
            v = [Fraction(0)] * self.ngens
            v[self.free_rank + k] = Fraction(self.prime) ** e
            cols.append(v)
        return QMat.from_cols(cols, self.ngens)

    def direct_sum(self, other: "FGModule") -> "FGModule":
        if self.prime != other.prime:
            raise PrimeMismatchError(self.prime, other.prime)
        return FGModule(self.prime, self.free_rank + other.free_rank,
                        tuple(sorted(self.torsion + other.torsion)))

    def __str__(self):
        p = self.prime
        parts = [f"Z({p})^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{p}^{e}" for e in self.torsion]
        return " + ".join(parts) if parts else "0"


def zero_module(p: int) -> FGModule:
    return FGModule(p, 0, ())


@dataclass(frozen=True)
class ModuleMap:
    """A map of presented modules, as a matrix in the standard generators.

    The matrix must respect torsion: the image of a generator of order p^e
    has order dividing p^e in the target.
    """

    source: FGModule
    target: FGModule
    matrix: QMat

    def __post_init__(self):
        if self.source.prime != self.target.prime:
            raise PrimeMismatchError(self.source.prime, self.target.prime)
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.target.ngens} target x {self.source.ngens} source generators")
        p = self.prime
        for i in range(self.target.ngens):
            for j in range(self.source.ngens):
                x = self.matrix[i, j]
                if not is_p_local(x, p):
                    raise LawViolation(
                        "module map entries must lie in Z_(p)",
                        f"entry ({i},{j}) = {x}")
                e = self.source.order_exponent(j)
                f = self.target.order_exponent(i)
                if e is None or x == 0:
                    continue
                if f is None:
                    raise LawViolation(
                        "image of a torsion generator must be torsion",
                        f"entry ({i},{j}) = {x} maps order p^{e} into a free factor")
                if vp(x, p) < f - e:
                    raise LawViolation(
                        "matrix must respect torsion orders",
                        f"entry ({i},{j}) = {x} needs valuation >= {f - e}")

    @property
    def prime(self) -> int:
        return self.source.prime

    @classmethod
    def identity(cls, m: FGModule) -> "ModuleMap":
        return cls(m, m, QMat.identity(m.ngens))

    @classmethod
    def scalar(cls, m: FGModule, c) -> "ModuleMap":
        return cls(m, m, QMat.scalar(m.ngens, c))

    @classmethod
    def zero(cls, source: FGModule, target: FGModule) -> "ModuleMap":
        return cls(source, target, QMat.zeros(target.ngens, source.ngens))

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self after first."""
        if first.target != self.source:
            raise ValueError("composition mismatch")
        return ModuleMap(first.source, self.target, self.matrix @ first.matrix)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("can only subtract parallel maps")
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def equals_as_map(self, other: "ModuleMap") -> bool:
        """Equality modulo the target's relations (entrywise mod p^f)."""
        if self.source != other.source or self.target != other.target:
            return False
        p = self.prime
        diff = self.matrix - other.matrix
        for i in range(self.target.ngens):
            f = self.target.order_exponent(i)
            for j in range(self.source.ngens):
                x = diff[i, j]
                if x == 0:
                    continue
                if f is None or vp(x, p) < f:
                    return False
        return True

    def is_isomorphism(self) -> bool:
        h0, h1 = homology_two_term(TwoTermComplex(self))
        return h0.is_zero() and h1.is_zero()

    def rational_matrix(self) -> QMat:
        """The induced map on (-) tensor Q: the free-by-free block."""
        rows = list(range(self.target.free_rank))
        cols = list(range(self.source.free_rank))
        return self.matrix.take_rows(rows).take_cols(cols)


@dataclass(frozen=True)
class TwoTermComplex:
    """A complex  source --d--> target  placed in degrees 0 -> 1."""

    d: ModuleMap


def _module_from_snf(p: int, ngens: int, s: SNF) -> FGModule:
    """Cokernel of a relation matrix with the given normal form."""
    free = ngens - s.rank
    torsion = tuple(sorted(e for e in s.exponents if e > 0))
    return FGModule(p, free, torsion)


def cokernel(d: ModuleMap) -> FGModule:
    """coker(d) = target / (image of d + relations of target)."""
    p = d.prime
    rel = d.matrix.hstack(d.target.relation_matrix())
    s = smith_normal_form(rel, p)
    return _module_from_snf(p, d.target.ngens, s)


def kernel(d: ModuleMap) -> FGModule:
    """ker(d) in Smith normal form.

    Generators: lifts g with d(g) in the target's relation lattice, found as
    the projection of the free kernel of [matrix | -relations]; relations:
    coefficient vectors landing in the source's relation lattice.
    """
    p = d.prime
    a = d.matrix
    r_src = d.source.relation_matrix()
    r_tgt = d.target.relation_matrix()
    s1 = smith_normal_form(a.hstack(r_tgt.scale(-1)), p)
    lift_cols = s1.v.take_cols(list(range(s1.rank, s1.v.ncols)))
    gens = lift_cols.take_rows(list(range(d.source.ngens)))
    if gens.ncols == 0:
        return zero_module(p)
    s2 = smith_normal_form(gens.hstack(r_src.scale(-1)), p)
    rel_cols = s2.v.take_cols(list(range(s2.rank, s2.v.ncols)))
    relations = rel_cols.take_rows(list(range(gens.ncols)))
    s3 = smith_normal_form(relations, p)
    return _module_from_snf(p, gens.ncols, s3)


def homology_two_term(c: TwoTermComplex) -> tuple[FGModule, FGModule]:
    """(H0, H1) = (kernel, cokernel) of the differential, in normal form."""
    return kernel(c.d), cokernel(c.d)
