"""Shared fixtures: seeded randomness and independent brute-force oracles.

The random corpora are seeded from the GAUGEWORKS_SEED environment variable
(defaulting to a fixed constant) so runs are reproducible; the seed never
influences any computation inside the package itself.

The oracles below are deliberately self-contained re-implementations of
rank/kernel arithmetic: expected values in the tests are computed with
these, not with the code under test.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction

import pytest

from gaugeworks.exactlinalg import FpMat, QMat
from gaugeworks.fgauge import FCrystalPoint
from gaugeworks.filphi import FilteredPhiModule, FilteredSpace
from gaugeworks.higgs import GradedHiggsModule
from gaugeworks.redlocus import A1Flag, FilThetaModule, ReducedFGauge
from gaugeworks.exactlinalg import quotient_projection


DEFAULT_SEED = 20260808


@pytest.fixture
def rng() -> random.Random:
    return random.Random(int(os.environ.get("GAUGEWORKS_SEED", DEFAULT_SEED)))


# ---------------------------------------------------------------------------
# oracles (independent of the package's elimination code)
# ---------------------------------------------------------------------------


def oracle_q_rank(rows) -> int:
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(1) / mat[rank][c]
        mat[rank] = [inv * x for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def oracle_q_two_term(rows, nrows: int, ncols: int) -> tuple[int, int]:
    """(kernel dim, cokernel dim) of a rational matrix, by brute elimination."""
    r = oracle_q_rank(rows) if rows else 0
    return (ncols - r, nrows - r)


def oracle_fp_rank(p: int, rows) -> int:
    mat = [[x % p for x in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [(inv * x) % p for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def oracle_fp_two_term(p: int, rows, nrows: int, ncols: int) -> tuple[int, int]:
    r = oracle_fp_rank(p, rows) if rows else 0
    return (ncols - r, nrows - r)


def qmat_rows(m: QMat):
    return [list(r) for r in m.rows]


def fpmat_rows(m: FpMat):
    return [list(r) for r in m.rows]


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def rand_rational(rng: random.Random, p: int) -> Fraction:
    num = rng.randint(-6, 6)
    dens = [1, 2, 5, 7]
    den = rng.choice([d for d in dens if d % p != 0])
    return Fraction(num, den)


def rand_qmat(rng: random.Random, p: int, nrows: int, ncols: int) -> QMat:
    return QMat([[rand_rational(rng, p) for _ in range(ncols)]
                 for _ in range(nrows)], ncols=ncols)


def rand_invertible_q(rng: random.Random, p: int, n: int) -> QMat:
    while True:
        m = rand_qmat(rng, p, n, n)
        if n == 0 or m.det() != 0:
            return m


def rand_unimodular(rng: random.Random, p: int, n: int) -> QMat:
    """Random invertible matrix over Z_(p): integer shears and unit scalings."""
    m = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = Fraction(rng.randint(-3, 3))
        for k in range(n):
            m[i][k] += c * m[j][k]
    units = [u for u in (1, -1, 2, 1 + p) if u % p != 0]
    i = rng.randrange(n) if n else 0
    if n:
        u = Fraction(rng.choice(units))
        m[i] = [u * x for x in m[i]]
    return QMat(m, ncols=n)


def rand_filtered_phi(rng: random.Random, p: int, max_dim: int = 6,
                      window: tuple[int, int] = (-5, 5),
                      honest: bool | None = None) -> FilteredPhiModule:
    """Random filtered Frobenius module; non-honest filtrations included."""
    n = rng.randint(0, max_dim)
    lo = rng.randint(window[0], window[1])
    hi = rng.randint(lo, window[1])
    if honest is None:
        honest = rng.random() < 0.5
    if honest:
        dims = [n]
        for _ in range(lo, hi):
            dims.append(rng.randint(0, dims[-1]))
        bases = [QMat.identity(n)]
        for k in range(1, len(dims)):
            prev = bases[-1]
            take = rng.sample(range(prev.ncols), dims[k]) if prev.ncols else []
            take.sort()
            mix = rand_unimodular(rng, p, prev.ncols)
            bases.append((prev @ mix).take_cols(take))
        fs = FilteredSpace.from_subspaces(lo, hi, bases)
    else:
        dims = [n] + [rng.randint(0, max_dim) for _ in range(lo, hi)]
        transitions = tuple(rand_qmat(rng, p, dims[k], dims[k + 1])
                            for k in range(len(dims) - 1))
        fs = FilteredSpace(lo, hi, tuple(dims), transitions)
    return FilteredPhiModule(p, fs, rand_invertible_q(rng, p, n))


def rand_fcrystal(rng: random.Random, p: int, max_rank: int = 4,
                  exp_lo: int = -3, exp_hi: int = 3) -> FCrystalPoint:
    r = rng.randint(1, max_rank)
    exps = sorted(rng.randint(exp_lo, exp_hi) for _ in range(r))
    diag = QMat.diagonal([Fraction(p) ** e for e in exps])
    tau = rand_unimodular(rng, p, r) @ diag @ rand_unimodular(rng, p, r)
    return FCrystalPoint(p, r, tau)


def rand_fp_invertible(rng: random.Random, p: int, n: int) -> FpMat:
    while True:
        m = FpMat(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
        if n == 0 or m.is_invertible():
            return m


def rand_glued(rng: random.Random, p: int, max_rank: int = 3) -> ReducedFGauge:
    """Random glued datum: conjugated sums of twist blocks with a compatible

    nilpotent perturbation of the operator (strictly twist-increasing, so
    every flag law survives) and freshly computed gluing isomorphisms.
    """
    k = rng.randint(1, max_rank)
    base = rng.randint(-2, 2)
    twists = sorted(rng.randint(base, base + p - 1) for _ in range(k))
    diag = FpMat(p, [[twists[i] % p if i == j else 0 for j in range(k)]
                     for i in range(k)])
    nil = [[0] * k for _ in range(k)]
    for l in range(k):
        for j in range(k):
            if twists[l] >= twists[j] + 1 and rng.random() < 0.5:
                nil[l][j] = rng.randrange(p)
    e_model = diag + FpMat(p, nil)
    lo, hi = -max(twists), -min(twists)

    def unit_cols(pred):
        cols = [[1 if r == j else 0 for r in range(k)]
                for j in range(k) if pred(j)]
        return FpMat.from_cols(p, cols, k)

    g_model = [unit_cols(lambda j, i=i: i >= -twists[j]) for i in range(lo, hi + 1)]
    f_model = [unit_cols(lambda j, i=i: i <= -twists[j]) for i in range(lo, hi + 1)]
    pmat = rand_fp_invertible(rng, p, k)
    qmat = rand_fp_invertible(rng, p, k)
    htc_bases = [(pmat @ g).column_space_basis() for g in g_model]
    htc_bases[-1] = FpMat.identity(p, k)
    flag = A1Flag(p, k, lo, hi, tuple(htc_bases), pmat @ e_model @ pmat.inverse())
    htc = flag.to_module()
    drp_flags = [(qmat @ f).column_space_basis() for f in f_model]
    drp_flags[0] = FpMat.identity(p, k)
    drp = FilThetaModule(p, k, lo, hi, tuple(drp_flags),
                         qmat @ e_model @ qmat.inverse())
    alpha_hod = {}
    for i in range(lo, hi + 1):
        model_cols = [j for j in range(k) if twists[j] == -i]
        if not model_cols:
            continue
        sel = FpMat.from_cols(
            p, [[1 if r == j else 0 for r in range(k)] for j in model_cols], k)
        pi_h, _ = quotient_projection(htc.x_at(i - 1).column_space_basis())
        a_i = pi_h @ flag.basis_at(i).solve(pmat @ sel)
        inner = drp.flag_at(i).solve(drp.flag_at(i + 1))
        pi_d, _ = quotient_projection(inner)
        b_i = pi_d @ drp.flag_at(i).solve(qmat @ sel)
        alpha_hod[i] = b_i @ a_i.inverse()
    return ReducedFGauge(htc=htc, drp=drp, alpha_dr=qmat @ pmat.inverse(),
                         alpha_hod=alpha_hod)


def rand_higgs(rng: random.Random, p: int, directions: int,
               max_total: int = 12) -> GradedHiggsModule:
    """Random commuting family: coordinatewise shift operators on a random

    downward-closed staircase of lattice points, with coefficients that
    depend only on the stepped coordinate (hence commute), conjugated by
    random invertible matrices levelwise.
    """
    d = directions
    points = {(0,) * d}
    budget = rng.randint(1, max_total - 1)
    while len(points) <= budget:
        candidates = set()
        for m in points:
            for j in range(d):
                cand = tuple(c + (1 if idx == j else 0)
                             for idx, c in enumerate(m))
                if cand in points:
                    continue
                if all(cand[jj] == 0 or
                       tuple(c - (1 if idx == jj else 0)
                             for idx, c in enumerate(cand)) in points
                       for jj in range(d)):
                    candidates.add(cand)
        if not candidates:
            break
        points.add(rng.choice(sorted(candidates)))
    top = rng.randint(-2, 2)
    by_degree: dict[int, list[tuple]] = {}
    for m in sorted(points):
        deg = top - sum(m)
        by_degree.setdefault(deg, []).append(m)
    dims = {deg: len(ms) for deg, ms in by_degree.items()}
    coeff = {k: [rng.randrange(p) for _ in range(max_total + 2)]
             for k in range(1, d + 1)}
    index = {deg: {m: a for a, m in enumerate(ms)} for deg, ms in by_degree.items()}
    fields: dict = {}
    for k in range(1, d + 1):
        per = {}
        for deg, ms in by_degree.items():
            tgt = by_degree.get(deg - 1, [])
            if not tgt:
                continue
            rows = [[0] * len(ms) for _ in tgt]
            for a, m in enumerate(ms):
                if m[k - 1] == 0:
                    continue
                shifted = tuple(c - (1 if idx == k - 1 else 0)
                                for idx, c in enumerate(m))
                if shifted in index[deg - 1]:
                    rows[index[deg - 1][shifted]][a] = coeff[k][m[k - 1]]
            per[deg] = FpMat(p, rows, ncols=len(ms))
        fields[k] = per
    plain = GradedHiggsModule(p, d, dims, fields)
    # conjugate levelwise for generic-looking matrices
    mixers = {deg: rand_fp_invertible(rng, p, dim) for deg, dim in dims.items()}
    mixed_fields: dict = {}
    for k in range(1, d + 1):
        per = {}
        for deg in dims:
            mat = plain.phi(k, deg)
            lower = mixers.get(deg - 1)
            if lower is None or mat.nrows == 0:
                continue
            per[deg] = lower @ mat @ mixers[deg].inverse()
        mixed_fields[k] = per
    return GradedHiggsModule(p, d, dims, mixed_fields)
