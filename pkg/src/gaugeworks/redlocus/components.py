"""The four coefficient categories on the components of the reduced locus.

Over F_p the reduced locus is glued from four strata; quasi-coherent data on
them is plain linear algebra:

* de Rham stratum: a space V with an operator Theta, (Theta^p - Theta)
  nilpotent; cohomology is the fibre of Theta: V -> V.
* Hodge stratum: a graded space with Theta of degree -p, nilpotent;
  cohomology is the fibre of Theta: V_0 -> V_{-p}.
* conjugate-filtered Hodge--Tate stratum: a graded module over the mod-p
  Weyl algebra on x (degree +1) and D (degree -1) with Dx - xD = 1,
  bounded below and x eventually invertible; cohomology is the fibre of
  D: Fil_0 -> Fil_{-1}.
* Hodge-filtered de Rham stratum: an honestly filtered space with Theta
  lowering the filtration by p; cohomology is the fibre of
  Theta: Fil^0 -> Fil^{-p}.

Restriction functors: the Hodge--Tate stratum restricts to de Rham by
passing to the x-stable range in a degree divisible by p and taking
Theta = x D, and to Hodge by taking the associated graded with Theta = D^p
(which descends because D^p commutes with x mod p).  The filtered de Rham
stratum restricts by forgetting the filtration and by taking gr.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LawViolation
from ..exactlinalg import (FpMat, check_prime, fp_homology_two_term,
                           quotient_projection)


@dataclass(frozen=True)
class ThetaModule:
    """(V, Theta) with Theta^p - Theta nilpotent."""

    prime: int
    theta: FpMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.theta.p != self.prime:
            raise LawViolation("matrix prime must match the module prime")
        if self.theta.nrows != self.theta.ncols:
            raise ValueError("theta must be square")
        frob = self.theta.power(self.prime) - self.theta
        if not frob.is_nilpotent():
            raise LawViolation("Theta^p - Theta must act nilpotently",
                               "checked by matrix power up to the dimension")

    @property
    def dim(self) -> int:
        return self.theta.nrows


@dataclass(frozen=True)
class GradedThetaModule:
    """Finitely supported graded pieces with theta_i: V_i -> V_{i-p}."""

    prime: int
    dims: dict  # degree -> dimension (only nonzero entries)
    thetas: dict  # degree i -> FpMat V_i -> V_{i-p}

    def __post_init__(self):
        check_prime(self.prime)
        object.__setattr__(self, "dims",
                           {int(k): int(v) for k, v in self.dims.items() if v})
        thetas = {}
        for i, m in self.thetas.items():
            i = int(i)
            expected = (self.dim_at(i - self.prime), self.dim_at(i))
            if m.shape != expected:
                raise ValueError(f"theta at degree {i} has shape {m.shape}, "
                                 f"expected {expected}")
            if not m.is_zero():
                thetas[i] = m
        object.__setattr__(self, "thetas", thetas)
        if not graded_theta_is_nilpotent(self):
            raise LawViolation("the degree -p operator must act nilpotently")

    def dim_at(self, i: int) -> int:
        return self.dims.get(i, 0)

    def theta_at(self, i: int) -> FpMat:
        if i in self.thetas:
            return self.thetas[i]
        return FpMat.zeros(self.prime, self.dim_at(i - self.prime), self.dim_at(i))

    def support(self) -> list[int]:
        return sorted(self.dims)


def graded_theta_is_nilpotent(m: GradedThetaModule) -> bool:
    """Compose the degree -p operator until it exits the (finite) support.

    Always true for well-formed data; kept as an explicit runnable guard.
    """
    if not m.dims:
        return True
    bottom = min(m.dims)
    for start in m.support():
        acc = FpMat.identity(m.prime, m.dim_at(start))
        level = start
        while level >= bottom:
            acc = m.theta_at(level) @ acc
            level -= m.prime
        if not acc.is_zero():
            return False
    return True


@dataclass(frozen=True)
class A1Module:
    """Graded module over F_p{x, D}/(Dx - xD - 1), windowed and stabilized.

    ``dims[k]`` is the dimension of Fil_{lo+k}; ``x[k]``: Fil_{lo+k} ->
    Fil_{lo+k+1}; ``d[k]``: Fil_{lo+k+1} -> Fil_{lo+k}.  Below the window
    the pieces vanish; at and above the top the transition x is the
    identity, and D continues upward by the recursion forced by the algebra
    relation.  D is automatically locally nilpotent: the module is bounded
    below, so enough D steps land in zero.
    """

    prime: int
    lo: int
    hi: int
    dims: tuple[int, ...]
    x: tuple[FpMat, ...]
    d: tuple[FpMat, ...]

    def __post_init__(self):
        check_prime(self.prime)
        if self.lo > self.hi:
            raise ValueError("window must satisfy lo <= hi")
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))
        if len(self.dims) != self.hi - self.lo + 1:
            raise ValueError("dims must cover the window")
        w = self.hi - self.lo
        if len(self.x) != w or len(self.d) != w:
            raise ValueError("need one x and one D per adjacent pair in the window")
        for k, m in enumerate(self.x):
            if m.shape != (self.dims[k + 1], self.dims[k]):
                raise ValueError(f"x[{k}] has shape {m.shape}")
        for k, m in enumerate(self.d):
            if m.shape != (self.dims[k], self.dims[k + 1]):
                raise ValueError(f"D[{k}] has shape {m.shape}")

    def dim_at(self, i: int) -> int:
        if i < self.lo:
            return 0
        if i > self.hi:
            return self.dims[-1]
        return self.dims[i - self.lo]

    def x_at(self, i: int) -> FpMat:
        """x_i: Fil_i -> Fil_{i+1}; identity at and above the window top."""
        if i < self.lo:
            return FpMat.zeros(self.prime, self.dim_at(i + 1), 0)
        if i >= self.hi:
            return FpMat.identity(self.prime, self.dims[-1])
        return self.x[i - self.lo]

    def d_at(self, i: int) -> FpMat:
        """D_i: Fil_i -> Fil_{i-1}; continued upward by D_{i+1} x_i = x_{i-1} D_i + 1."""
        if i <= self.lo:
            return FpMat.zeros(self.prime, self.dim_at(i - 1), self.dim_at(i))
        if i <= self.hi:
            return self.d[i - self.lo - 1]
        below = self.d_at(i - 1)
        return self.x_at(i - 2) @ below + FpMat.identity(self.prime, self.dim_at(i - 1))

    def x_composite(self, bottom: int, top: int) -> FpMat:
        acc = FpMat.identity(self.prime, self.dim_at(bottom))
        for i in range(bottom, top):
            acc = self.x_at(i) @ acc
        return acc

    def d_composite(self, top: int, bottom: int) -> FpMat:
        acc = FpMat.identity(self.prime, self.dim_at(top))
        for i in range(top, bottom, -1):
            acc = self.d_at(i) @ acc
        return acc

    def stable_level(self) -> int:
        """Least multiple of p that is >= max(hi, 0): the canonical x-stable

        degree at which the de Rham restriction is read off.  A multiple of
        p is required for x D to be transportable along x and for the
        restriction maps out of the cohomology fibre to be chain maps.
        """
        p = self.prime
        top = max(self.hi, 0)
        return p * ((top + p - 1) // p)

    def violations(self) -> tuple[str, ...]:
        """Check the algebra relation on every window level."""
        bad = []
        for i in range(self.lo, self.hi + 1):
            lhs = self.d_at(i + 1) @ self.x_at(i)
            rhs = (self.x_at(i - 1) @ self.d_at(i)
                   + FpMat.identity(self.prime, self.dim_at(i)))
            if lhs != rhs:
                bad.append(f"Dx - xD = 1 failed on Fil_{i}")
        return tuple(bad)


def validate_a1(m: A1Module) -> tuple[str, ...]:
    return m.violations()


@dataclass(frozen=True)
class FilThetaModule:
    """Honest decreasing filtration on V with Theta: Fil^i -> Fil^{i-p}.

    ``flags[k]`` is a column basis of Fil^{lo+k} inside V; Fil^i = V for
    i <= lo and 0 for i > hi.  The fiberwise nilpotence laws are checked at
    construction: Theta^p - Theta nilpotent on V, and the graded operator
    nilpotent on gr (automatic for a degree -p operator on finite support,
    asserted all the same).
    """

    prime: int
    dim: int
    lo: int
    hi: int
    flags: tuple[FpMat, ...]
    theta: FpMat

    def __post_init__(self):
        check_prime(self.prime)
        if self.lo > self.hi:
            raise ValueError("window must satisfy lo <= hi")
        if len(self.flags) != self.hi - self.lo + 1:
            raise ValueError("flags must cover the window")
        if self.flags[0].shape != (self.dim, self.dim) or \
                self.flags[0].rank() != self.dim:
            raise LawViolation("Fil^lo must be the whole space")
        for k in range(len(self.flags) - 1):
            if self.flags[k].solve(self.flags[k + 1]) is None:
                raise LawViolation("the filtration must be decreasing",
                                   f"Fil^{self.lo + k + 1} not inside Fil^{self.lo + k}")
        for k, f in enumerate(self.flags):
            if f.rank() != f.ncols:
                raise LawViolation("flag bases must be independent columns",
                                   f"index {self.lo + k}")
        if self.theta.shape != (self.dim, self.dim):
            raise ValueError("theta must act on V")
        frob = self.theta.power(self.prime) - self.theta
        if not frob.is_nilpotent():
            raise LawViolation("Theta^p - Theta must act nilpotently on the underlying space")
        p = self.prime
        for i in range(self.lo, self.hi + 1):
            img = self.theta @ self.flag_at(i)
            if self.flag_at(i - p).solve(img) is None:
                raise LawViolation("Theta must carry Fil^i into Fil^{i-p}",
                                   f"failed at i = {i}")
        # gr-level nilpotence: the induced operator has degree -p on the
        # finitely supported graded, so composing past the window is zero;
        # the GradedThetaModule constructor runs the explicit guard.
        restrict_dRplus_to_Hod(self)

    def flag_at(self, i: int) -> FpMat:
        if i < self.lo:
            return FpMat.identity(self.prime, self.dim)
        if i > self.hi:
            return FpMat.zeros(self.prime, self.dim, 0)
        return self.flags[i - self.lo]

    def fil_dim(self, i: int) -> int:
        return self.flag_at(i).ncols

    def theta_in_flag(self, i: int) -> FpMat:
        """Theta as a map Fil^i -> Fil^{i-p} in flag coordinates."""
        sol = self.flag_at(i - self.prime).solve(self.theta @ self.flag_at(i))
        if sol is None:  # excluded by validation
            raise LawViolation("Theta must carry Fil^i into Fil^{i-p}")
        return sol


# ---------------------------------------------------------------------------
# cohomology of the four strata
# ---------------------------------------------------------------------------


def coh_dR(m: ThetaModule) -> tuple[int, int]:
    """Fibre of Theta: V -> V."""
    return fp_homology_two_term(m.theta)


def coh_Hod(m: GradedThetaModule) -> tuple[int, int]:
    """Fibre of Theta: V_0 -> V_{-p}."""
    return fp_homology_two_term(m.theta_at(0))


def coh_HTc(m: A1Module) -> tuple[int, int]:
    """Fibre of D: Fil_0 -> Fil_{-1}."""
    return fp_homology_two_term(m.d_at(0))


def coh_dRplus(m: FilThetaModule) -> tuple[int, int]:
    """Fibre of Theta: Fil^0 -> Fil^{-p}."""
    sol = m.flag_at(-m.prime).solve(m.theta @ m.flag_at(0))
    return fp_homology_two_term(sol)


# ---------------------------------------------------------------------------
# restriction functors
# ---------------------------------------------------------------------------


def restrict_HTc_to_dR(m: A1Module) -> ThetaModule:
    """Stable space with Theta = x D, read at the canonical stable level."""
    n = m.stable_level()
    theta = m.x_at(n - 1) @ m.d_at(n)
    return ThetaModule(m.prime, theta)


def restrict_HTc_to_Hod(m: A1Module) -> GradedThetaModule:
    """Associated graded gr_i = coker(x_{i-1}) with Theta = D^p."""
    p = m.prime
    projections = {}
    sections = {}
    dims = {}
    for i in range(m.lo, m.hi + 1):
        pi, sigma = quotient_projection(_image_basis(m.x_at(i - 1)))
        projections[i] = pi
        sections[i] = sigma
        if pi.nrows:
            dims[i] = pi.nrows
    thetas = {}
    for i in sorted(dims):
        j = i - p
        if j in dims:
            comp = m.d_composite(i, j)      # D^p: Fil_i -> Fil_{i-p}
            thetas[i] = projections[j] @ comp @ sections[i]
    return GradedThetaModule(p, dims, thetas)


def _image_basis(x: FpMat) -> FpMat:
    return x.column_space_basis()


def restrict_dRplus_to_dR(m: FilThetaModule) -> ThetaModule:
    """Forget the filtration."""
    return ThetaModule(m.prime, m.theta)


def restrict_dRplus_to_Hod(m: FilThetaModule) -> GradedThetaModule:
    """Associated graded of the flag, with the induced Theta."""
    p = m.prime
    data = {}
    for i in range(m.lo, m.hi + 1):
        basis = m.flag_at(i)
        inner = basis.solve(m.flag_at(i + 1))
        pi, sigma = quotient_projection(inner if inner is not None
                                        else FpMat.zeros(p, basis.ncols, 0))
        data[i] = (basis, pi, sigma)
    dims = {i: d[1].nrows for i, d in data.items() if d[1].nrows}
    thetas = {}
    for i in sorted(dims):
        j = i - p
        if j in dims:
            basis_i, _, sigma_i = data[i]
            basis_j, pi_j, _ = data[j]
            lifted = m.theta @ basis_i @ sigma_i
            coords = basis_j.solve(lifted)
            thetas[i] = pi_j @ coords
    return GradedThetaModule(p, dims, thetas)
