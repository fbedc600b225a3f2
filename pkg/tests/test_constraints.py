import pytest
from hypothesis import given, strategies as st

from gfano import constraints as C
from gfano.groups import corollary_orders
from gfano.intring import RingSpec, top_intersection


def test_conic_discriminant_examples():
    assert C.conic_discriminant(2, 1, 12) == 6
    assert C.conic_discriminant(3, 1, 30) == 2
    assert C.conic_discriminant(2, 1, 26) is None
    assert C.conic_discriminant(2, 1, 24) == 0
    assert C.conic_discriminant(3, 1, 20) is None
    assert C.ConicBundleInstance(2, 1, 12).deg_delta == 6
    with pytest.raises(ValueError):
        C.ConicBundleInstance(4, 1, 12)
    with pytest.raises(ValueError):
        C.ConicBundleInstance(2, 1, 13)


@given(st.sampled_from([2, 3]), st.integers(1, 10), st.integers(1, 40).map(lambda x: 2 * x))
def test_conic_discriminant_solves_the_equation(n, a, c):
    d = C.conic_discriminant(n, a, c)
    if d is not None:
        assert n * (12 - d) == a * c and 0 <= d < 12
    else:
        assert (a * c) % n or not 0 < a * c <= 12 * n


def test_hodge_and_genus():
    assert C.hodge_conic(2, 1, 10) == 9
    assert C.hodge_conic(3, 1, 3) == 3
    assert C.hodge_conic(2, 1, 2) == 1
    with pytest.raises(ValueError):
        C.hodge_conic(1, 1, 0)
    assert [C.plane_curve_genus(d) for d in (1, 6, 8)] == [0, 10, 21]
    # the empty curve has arithmetic genus 1
    assert C.plane_curve_genus(0) == 1
    with pytest.raises(ValueError):
        C.plane_curve_genus(-1)


def test_row1_conic_prediction():
    d = C.conic_discriminant(2, 1, 12)
    assert C.hodge_conic(2, 1, C.plane_curve_genus(d)) == 9


def test_dp_examples():
    assert C.dp_bundle_check(C.DPBundleInstance(3, 1, 24, 8)).passed
    for a in (1, 2, 3):
        for c in (12, 24):
            rep = C.dp_bundle_check(C.DPBundleInstance(2, a, c, 6))
            assert not next(x for x in rep.checks if x.id == C.DP_II).passed
    rep = C.dp_bundle_check(C.DPBundleInstance(3, 1, 18, 6, rho=3))
    assert rep.first_failure == C.DP_V
    rep = C.dp_bundle_check(C.DPBundleInstance(4, 1, 12, 3))
    assert rep.first_failure == C.DP_IV
    with pytest.raises(ValueError):
        C.DPBundleInstance(3, 1, 24, 10)


def test_rho5_case1_needs_seven():
    # 5n = 28a has no solution with n | |G0| for any admissible |G0|
    orders = corollary_orders(5)
    for n in orders.orbit_lengths():
        if (5 * n) % 28 == 0:
            rep = C.dp_bundle_check(C.DPBundleInstance(n, 5 * n // 28, 28, 5, 5))
            assert not rep.passed
    assert all(n % 7 for n in orders.orbit_lengths())


@given(st.integers(2, 12), st.integers(1, 6), st.integers(1, 40).map(lambda x: 2 * x), st.integers(1, 9))
def test_dp_i_bound(n, a, c, k):
    rep = C.dp_bundle_check(C.DPBundleInstance(n, a, c, k))
    i = rep.checks[0]
    if i.passed:
        assert k <= 9 and a * c <= 9 * n and i.witness["nKF2"] == i.witness["ac1cubed"]


@given(st.integers(-50, 50), st.integers(1, 9))
def test_aKF2_parity_matches_a2KF2(a, k):
    assert (a * k) % 2 == (a * a * k) % 2


@pytest.mark.parametrize("KZ2", range(1, 10))
def test_product_always_excluded(KZ2):
    rep = C.product_exclusion(KZ2)
    assert not rep.passed
    w = rep.checks[0].witness
    if KZ2 == 8:
        assert w["rho"] == 3 and w["c1cubed"] == 48
        assert all(att["failed"] for att in w["attempts"])
    else:
        assert "8 does not divide" in w["reason"]


def test_product_degree_oracle():
    # P1 x P1 x P1 = (P1 x P1) x P1 has -K^3 = 48 = 6 K_Z^2
    s = RingSpec([1, 1, 1])
    assert top_intersection([s.anticanonical()] * 3) == 6 * 8


def test_rho2_analysis():
    cases = C.rho2_birational_analysis(1)
    assert [(c.r, c.A1C1) for c in cases] == [(3, 2), (4, 6)]
    assert cases[1].c1cubed == 20
    assert C.rho2_birational_analysis(2)[0].c1cubed == 28
    with pytest.raises(ValueError):
        C.rho2_birational_analysis(0)


@given(st.integers(1, 100))
def test_rho2_r_range(m):
    assert {c.r for c in C.rho2_birational_analysis(m)} <= {3, 4}


def test_rho2_degree_via_ring():
    # (M1 + M2)^3 with the r = 4, M1^3 = 1 numbers equals the P3 x P3 model
    s = RingSpec([3, 3])
    hyps = [s.divisor((1, 1))] * 3
    assert top_intersection([s.divisor((1, 1))] * 3 + hyps) == C.rho2_birational_analysis(1)[1].c1cubed


def test_anticanonical_dim():
    assert C.anticanonical_dim(20) == 12
    assert C.anticanonical_dim(2) == 3
    # h0(O(4)) on P3 counts monomials of degree 4 in 4 variables
    assert C.anticanonical_dim(64) + 1 == 35
    for c in range(2, 65, 2):
        assert C.anticanonical_dim(c) >= 3
    with pytest.raises(ValueError):
        C.anticanonical_dim(7)


def test_singular_divisor_count():
    assert C.singular_divisor_count(14, 4) == [1, 2]
    assert C.singular_divisor_count(6, 4) == [1, 2]
    assert C.singular_divisor_count(15, 4) == [1]
    with pytest.raises(ValueError):
        C.singular_divisor_count(0, 4)


def test_rho3_triples():
    assert C.rho3_conic_triples() == [(4, 24, 3), (6, 18, 10), (8, 12, 21)]
    assert C.rho3_conic_triples(2) == [(4, 12, 3)]


def test_every_id_has_an_anchor():
    ids = [C.EQ_DISC_CURVE, C.HODGE_CONIC, *C.DP_IDS, C.DP_ORDERS, C.PRODUCT_EXCL,
           C.RHO2_R, C.RHO2_POINT, C.SING_R, C.PRIOR_WORK, C.LATTICE_WITNESS, C.RHO3_LOOKUP]
    assert set(ids) == set(C.ANCHORS)
