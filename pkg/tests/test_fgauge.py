"""Gauges over F_p: laws, syntomic cohomology, filtrations, weights."""

from fractions import Fraction

import pytest

from conftest import rand_fcrystal
from gaugeworks.errors import WindowError
from gaugeworks.exactlinalg import (FGModule, ModuleMap, QMat, vp,
                                    zero_module)
from gaugeworks.fgauge import (FCrystalPoint, FpGauge, direct_sum,
                               extend_window, filtration_basis,
                               filtration_saturation_holds,
                               gauge_from_fcrystal, hodge_tate_weights,
                               rational_realization, snf_weight_multiset,
                               syntomic_cohomology, twist_gauge, validate)
from gaugeworks.filphi import rhom_phi


def cyclic(p, e=1):
    return FGModule(p, 0, (e,))


def torsion_gauge(p):
    """All levels Z/p, t = 1, u = 0, tau = 1, window ending at 0."""
    t = cyclic(p)
    return FpGauge(p, (-1, 0), (t, t),
                   (ModuleMap(t, t, QMat([[1]])),),
                   (ModuleMap(t, t, QMat([[0]])),),
                   ModuleMap(t, t, QMat([[1]])))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def test_free_rank_one_gauge_is_valid():
    p = 3
    m = FGModule(p, 1)
    g = FpGauge(p, (-1, 0), (m, m),
                (ModuleMap(m, m, QMat([[p]])),),
                (ModuleMap(m, m, QMat([[1]])),),
                ModuleMap(m, m, QMat([[1]])))
    assert validate(g).ok


def test_ut_equal_one_is_invalid():
    p = 3
    m = FGModule(p, 1)
    g = FpGauge(p, (-1, 0), (m, m),
                (ModuleMap(m, m, QMat([[1]])),),
                (ModuleMap(m, m, QMat([[1]])),),
                ModuleMap(m, m, QMat([[1]])))
    rep = validate(g)
    assert not rep.ok
    assert any("ut = tu = p failed at index 0" in v for v in rep.violations)


def test_torsion_gauge_is_valid():
    # ut = 0 = p on a module killed by p
    rep = validate(torsion_gauge(3))
    assert rep.ok


def test_non_isomorphism_tau_is_flagged():
    p = 3
    m = FGModule(p, 1)
    g = FpGauge(p, (0, 0), (m,), (), (), ModuleMap(m, m, QMat([[p]])))
    rep = validate(g)
    assert any("tau" in v for v in rep.violations)


# ---------------------------------------------------------------------------
# syntomic cohomology
# ---------------------------------------------------------------------------


def test_syntomic_of_unit_twist():
    h0, h1 = syntomic_cohomology(twist_gauge(0, 3))
    assert h0 == FGModule(3, 1) and h1 == FGModule(3, 1)


def test_syntomic_of_first_twist():
    # differential is p - 1 = 2, a unit at 3; the normal form of [2] is [1]
    h0, h1 = syntomic_cohomology(twist_gauge(1, 3))
    assert h0 == zero_module(3) and h1 == zero_module(3)


def test_syntomic_of_torsion_gauge():
    h0, h1 = syntomic_cohomology(torsion_gauge(3))
    assert h0 == cyclic(3) and h1 == cyclic(3)


def test_window_must_contain_zero():
    p = 3
    m = FGModule(p, 1)
    shifted = FpGauge(p, (1, 2), (m, m),
                      (ModuleMap(m, m, QMat([[p]])),),
                      (ModuleMap(m, m, QMat([[1]])),),
                      ModuleMap(m, m, QMat([[1]])))
    assert validate(shifted).ok
    with pytest.raises(WindowError):
        syntomic_cohomology(shifted)
    h = syntomic_cohomology(extend_window(shifted, 0, 2))
    assert h == syntomic_cohomology(extend_window(shifted, -2, 3))


@pytest.mark.parametrize("trial", range(20))
def test_window_enlargement_is_invisible(rng, trial):
    g = gauge_from_fcrystal(rand_fcrystal(rng, 3))
    wide = extend_window(g, g.a - 2, g.b + 3)
    assert validate(wide).ok
    assert syntomic_cohomology(wide) == syntomic_cohomology(g)
    assert hodge_tate_weights(wide) == hodge_tate_weights(g)


# ---------------------------------------------------------------------------
# rational realization
# ---------------------------------------------------------------------------


def test_realization_of_twist_gauge():
    for n in range(-3, 4):
        phi = rational_realization(twist_gauge(n, 3))
        assert phi.dim == 1
        assert phi.frobenius == QMat([[Fraction(3) ** (-n)]])


def test_realization_kills_torsion():
    assert rational_realization(torsion_gauge(3)).dim == 0


@pytest.mark.parametrize("trial", range(25))
def test_realization_roundtrip_up_to_base_change(rng, trial):
    c = rand_fcrystal(rng, 3)
    phi = rational_realization(gauge_from_fcrystal(c)).frobenius
    # equal to tau_crys after the change of basis of the normal form
    from gaugeworks.exactlinalg import smith_normal_form
    v = smith_normal_form(c.tau_crys, c.prime).v
    assert phi == v.inverse() @ c.tau_crys @ v


@pytest.mark.parametrize("trial", range(30))
def test_rational_comparison_with_derived_invariants(rng, trial):
    p = rng.choice([3, 5])
    c = rand_fcrystal(rng, p)
    g = gauge_from_fcrystal(c)
    h0, h1 = syntomic_cohomology(g)
    r = rhom_phi(rational_realization(g))
    assert (h0.free_rank, h1.free_rank) == r.dims


# ---------------------------------------------------------------------------
# saturated filtrations
# ---------------------------------------------------------------------------


def test_filtration_rank_one_unit():
    c = FCrystalPoint(3, 1, QMat([[1]]))
    for i in range(-2, 4):
        basis = filtration_basis(c, i)
        assert basis.ncols == 1
        assert vp(basis[0, 0], 3) == max(i, 0)  # elementwise valuation check


@pytest.mark.parametrize("n", range(-3, 4))
def test_filtration_rank_one_twist(n):
    c = FCrystalPoint(3, 1, QMat([[Fraction(3) ** (-n)]]))
    for i in range(-4, 5):
        basis = filtration_basis(c, i)
        assert vp(basis[0, 0], 3) == max(i + n, 0)


def test_filtration_rank_two_diagonal():
    c = FCrystalPoint(3, 2, QMat([[1, 0], [0, Fraction(1, 3)]]))
    for i in range(-3, 4):
        basis = filtration_basis(c, i)
        vals = sorted(vp(x, 3) for x in
                      [basis[r, j] for j in range(2) for r in range(2)]
                      if x != 0)
        assert vals == sorted([max(i, 0), max(i + 1, 0)])


@pytest.mark.parametrize("trial", range(30))
def test_filtration_membership_oracle(rng, trial):
    # Fil^i = preimage of p^i M under tau: check both inclusions elementwise
    p = 3
    c = rand_fcrystal(rng, p, max_rank=3)
    for i in range(-3, 4):
        basis = filtration_basis(c, i)
        image = c.tau_crys @ basis
        for col in range(image.ncols):
            for row in range(image.nrows):
                assert vp(image[row, col], p) >= i  # tau(Fil^i) in p^i M


@pytest.mark.parametrize("trial", range(25))
def test_mod_p_filtration_injectivity(rng, trial):
    # saturation: p M intersect Fil^i = p Fil^{i-1}, equivalently the maps
    # Fil^i / p Fil^{i-1} -> Fil^{i-1} / p Fil^{i-2} are injective
    c = rand_fcrystal(rng, rng.choice([3, 5]))
    assert filtration_saturation_holds(c)


def test_saturation_fails_for_an_unsaturated_filtration():
    # the doubled filtration p^{2 max(i,0)} M is Nygaardian but not saturated;
    # the same check distinguishes it (computed on raw lattices)
    from gaugeworks.fgauge import _lattice_contains, _lattice_intersection
    p = 3
    full = QMat.identity(1)
    fil = {i: QMat([[Fraction(p) ** (2 * max(i, 0))]]) for i in range(-1, 4)}
    ok = True
    for i in range(0, 3):
        lhs = _lattice_intersection(full.scale(p), fil[i], p)
        rhs = fil[i - 1].scale(p)
        if not (_lattice_contains(lhs, rhs, p) and _lattice_contains(rhs, lhs, p)):
            ok = False
    assert not ok


# ---------------------------------------------------------------------------
# Hodge--Tate weights
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(-5, 6))
def test_weights_of_rank_one_twists(n):
    # the n-th twist gauge has the single weight -n
    assert hodge_tate_weights(twist_gauge(n, 3)) == {-n: 1}


def test_weights_additive_in_direct_sums():
    g = direct_sum(twist_gauge(1, 3), twist_gauge(-2, 3))
    assert validate(g).ok
    assert hodge_tate_weights(g) == {-1: 1, 2: 1}


def test_direct_sum_with_torsion_summand():
    # exercises the generator reordering when torsion exponents merge
    g = direct_sum(torsion_gauge(3), twist_gauge(1, 3))
    assert validate(g).ok
    assert hodge_tate_weights(g) == {-1: 1, 0: 1}
    h0, h1 = syntomic_cohomology(g)
    assert h0 == cyclic(3) and h1 == cyclic(3)  # the free part cancels


def test_weights_of_zero_gauge():
    c = FCrystalPoint(3, 0, QMat.zeros(0, 0))
    assert hodge_tate_weights(gauge_from_fcrystal(c)) == {}


def test_weights_of_diagonal_cases_match_snf_exponents():
    for twists in [(0, 1), (-2, 0, 3), (1, 1)]:
        p = 3
        diag = QMat.diagonal([Fraction(p) ** (-n) for n in twists])
        c = FCrystalPoint(p, len(twists), diag)
        expected = {}
        for n in twists:
            expected[-n] = expected.get(-n, 0) + 1
        assert hodge_tate_weights(gauge_from_fcrystal(c)) == expected
        assert snf_weight_multiset(c) == expected


@pytest.mark.parametrize("trial", range(25))
def test_weights_match_snf_multiset_randomized(rng, trial):
    c = rand_fcrystal(rng, rng.choice([3, 5]))
    g = gauge_from_fcrystal(c)
    assert hodge_tate_weights(g) == snf_weight_multiset(c)
