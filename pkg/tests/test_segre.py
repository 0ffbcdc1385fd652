import random

import pytest
from hypothesis import given, settings, strategies as st

from segrekit.fps import I, Series, SeriesVector, parse_poly
from segrekit.manifold import ambient_vars
from segrekit.segre import (ChainWord, build_fields, chain_map, flow, generic_rank,
                            lie_series_flow, manifold_residual, minimality_witness, random_point,
                            segre_multitype, sigma)

from conftest import corpus, manifold_from

AMB = ambient_vars(1, 1)


def A(text, order=6):
    return parse_poly(text, AMB, order)


POINT = ("p1", "p2")


def point_with(M, seed, extra, order=None):
    """A random point of the complexification depending on two parameters,
    embedded in a ring that also carries the flow parameters ``extra``."""
    rng = random.Random(seed)
    ring = POINT + tuple(extra)
    q = random_point(M, POINT, rng, order=order)
    return SeriesVector(c.embed(ring) for c in q), ring


def params(ring, names, order):
    return [Series.var(x, ring, order) for x in names]


# --- vector fields ----------------------------------------------------------

def test_fields_of_hyperquadric():
    M = manifold_from("w1*zeta1", 1, 1, 6)
    F = build_fields(M)
    assert F.L[0].coeffs["z1"] == A("i*zeta1", 5)
    assert F.Lbar[0].coeffs["xi1"] == A("-i*w1", 5)
    rho = A("xi1 - z1 + i*w1*zeta1")
    assert F.Lbar[0].apply(rho).is_zero()
    assert F.L[0].apply(A("w1")) == Series.const(1, AMB, 5)
    assert F.Lbar[0].apply(A("xi1")) == A("-i*w1", 5)


def test_fields_of_levi_flat():
    F = build_fields(manifold_from("0", 1, 1, 6))
    assert set(F.L[0].coeffs["z1"].terms) == set()
    assert F.Upsilon[0].coeffs["xi1"] == Series.const(1, AMB, 5)


def test_fields_of_product_levi():
    amb = ambient_vars(2, 1)
    M = manifold_from("w1*zeta1*(1 + w2*zeta2)", 2, 1, 6)
    F = build_fields(M)
    assert F.Lbar[0].coeffs["xi1"] == parse_poly("-i*w1*(1 + w2*zeta2)", amb, 5)


@pytest.mark.parametrize("name", ["hyperquadric", "product_levi", "rational_graph"])
def test_fields_commute_and_are_tangent(name):
    M = corpus().manifolds[name].with_order(6)
    F = build_fields(M)
    rho = [r for r in M.defining_equations()]
    for X in F.L + F.Lbar:
        for r in rho:
            assert M.restrict_xi(X.apply(r)).is_zero()
    f = parse_poly("w1*z1^2 + zeta1*xi1^2 + w1*zeta1*z1", M.vars, 6)
    for fam in (F.L, F.Lbar):
        for X in fam:
            for Y in fam:
                assert X.apply(Y.apply(f)) == Y.apply(X.apply(f))


# --- flows and chains -------------------------------------------------------

def test_flow_examples_on_hyperquadric():
    M = manifold_from("w1*zeta1", 1, 1, 6)
    ring = ("a", "b", "c")
    a, b, c = (Series.var(v, ring, 6) for v in ring)
    zero = SeriesVector([Series.zero(ring, 6)] * 4)
    p1 = flow(M, "L", [a], zero)
    assert p1 == SeriesVector([a, zero[0], zero[0], zero[0]])
    p2 = flow(M, "Lbar", [b], p1)
    assert p2 == SeriesVector([a, zero[0], b, (a * b).scale(-I)])
    p3 = flow(M, "L", [c], p2)
    assert p3 == SeriesVector([a + c, (c * b).scale(I), b, (a * b).scale(-I)])


def test_flow_rejects_point_off_manifold():
    M = manifold_from("w1*zeta1", 1, 1, 6)
    ring = ("a",)
    a = Series.var("a", ring, 6)
    with pytest.raises(ValueError):
        flow(M, "L", [a], SeriesVector([a, a, a, Series.zero(ring, 6)]))


def test_chain_examples():
    M = corpus().manifolds["hyperquadric"].with_order(6)
    G1 = chain_map(M, ChainWord("L", 1))
    r1 = G1.gamma.vars
    assert G1.gamma[0] == Series.var("s1_1", r1, 6) and all(c.is_zero() for c in G1.gamma[1:])
    G3 = chain_map(M, ChainWord("L", 3))
    r = G3.gamma.vars
    s1, s2, s3 = (Series.var(f"s{k}_1", r, 6) for k in (1, 2, 3))
    assert G3.gamma == SeriesVector([s1 + s3, (s3 * s2).scale(I), s2, (s1 * s2).scale(-I)])
    LF = corpus().manifolds["levi_flat"].with_order(6)
    G5 = chain_map(LF, ChainWord("L", 5))
    r = G5.gamma.vars
    s = [Series.var(f"s{k}_1", r, 6) for k in range(1, 6)]
    assert G5.gamma == SeriesVector([s[0] + s[2] + s[4], Series.zero(r, 6), s[1] + s[3],
                                     Series.zero(r, 6)])


@pytest.mark.parametrize("name", sorted(corpus().manifolds))
def test_chains_stay_on_manifold(name):
    M = corpus().manifolds[name].with_order(6)
    for start in ("L", "Lbar"):
        G = chain_map(M, ChainWord(start, 4))
        assert manifold_residual(M, G.gamma).is_zero()
        assert all(c.constant_term() == 0 for c in G.gamma)


def test_lie_series_matches_closed_form():
    for name in ("hyperquadric", "product_levi", "rational_graph"):
        M = corpus().manifolds[name].with_order(5)
        extra = [f"a{j}" for j in range(1, max(M.m, M.d) + 1)]
        q, ring = point_with(M, 3, extra, order=5)
        for kind in ("L", "Lbar", "Upsilon", "Upsilon_bar"):
            k = M.m if kind in ("L", "Lbar") else M.d
            names = extra[:k]
            closed = flow(M, kind, params(ring, names, 5), q)
            assert lie_series_flow(M, kind, names, q) == closed, (name, kind)


def flow_identities(M, seed):
    N = M.order
    a = [f"a{j}" for j in range(1, M.m + 1)]
    b = [f"b{j}" for j in range(1, M.m + 1)]
    u = [f"u{j}" for j in range(1, M.d + 1)]
    q, ring = point_with(M, seed, a + b + u)
    va, vb, vu = params(ring, a, N), params(ring, b, N), params(ring, u, N)
    zero = Series.zero(ring, N)
    for kind in ("L", "Lbar"):
        full = flow(M, kind, va, q)
        for perm in ([*range(M.m)], [*reversed(range(M.m))]):
            seq = q
            for j in perm:
                step = [zero] * M.m
                step[j] = va[j]
                seq = flow(M, kind, step, seq)
            assert full == seq
        assert flow(M, kind, vb, full) == flow(M, kind, [x + y for x, y in zip(va, vb)], q)
    assert (flow(M, "L", va, flow(M, "Upsilon_bar", vu, q))
            == flow(M, "Upsilon_bar", vu, flow(M, "L", va, q)))
    assert (flow(M, "Lbar", va, flow(M, "Upsilon", vu, q))
            == flow(M, "Upsilon", vu, flow(M, "Lbar", va, q)))
    n = M.n
    assert sigma(flow(M, "L", va, q), n) == flow(M, "Lbar", va, sigma(q, n))
    assert sigma(flow(M, "Upsilon", vu, q), n) == flow(M, "Upsilon_bar", vu, sigma(q, n))
    return True


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(sorted(corpus().manifolds)), st.integers(0, 10_000))
def test_flow_algebra_property(name, seed):
    assert flow_identities(corpus().manifolds[name].with_order(6), seed)


def test_sigma_involution_and_diagonal():
    M = corpus().manifolds["hyperquadric"]
    G = chain_map(M, ChainWord("L", 3), 6)
    assert sigma(sigma(G.gamma, 2), 2) == G.gamma
    # the diagonal tau = conj(t) of a real point is fixed
    ring = ("x", "y")
    x = Series.var("x", ring, 4)
    y = Series.var("y", ring, 4)
    p = SeriesVector([x.scale(1 + I), y, x.scale(1 - I), y])
    assert sigma(p, 2) == p


def test_sigma_of_chains_is_conjugate_chain():
    for name in ("hyperquadric", "product_levi"):
        M = corpus().manifolds[name]
        for k in (2, 3):
            G = chain_map(M, ChainWord("L", k), 6)
            Gc = chain_map(M, ChainWord("Lbar", k), 6)
            assert sigma(G.gamma, M.n) == Gc.gamma


# --- ranks, Segre type, minimality -------------------------------------------

def test_generic_rank_examples():
    M = corpus().manifolds["hyperquadric"]
    assert generic_rank(chain_map(M, ChainWord("L", 2), 6).gamma) == 2
    assert generic_rank(chain_map(M, ChainWord("L", 3), 6).gamma) == 3
    LF = corpus().manifolds["levi_flat"]
    assert generic_rank(chain_map(LF, ChainWord("L", 5), 6).gamma) == 2
    ring = ("x", "y")
    F = [parse_poly("x*y", ring, 6), parse_poly("x^2*y^2", ring, 6)]
    assert generic_rank(F) == 1


def test_segre_type_corpus():
    rep = segre_multitype(corpus().manifolds["hyperquadric"], order=6)
    assert (rep.mu, rep.multitype, rep.minimal) == (3, (1, 1, 1), True)
    assert rep.e == (1,) and rep.kappa == 1
    rep = segre_multitype(corpus().manifolds["levi_flat"], order=6)
    assert rep.minimal is False and rep.ranks[-1] == 2
    rep = segre_multitype(corpus().manifolds["quartic"], order=6)
    assert (rep.mu, rep.minimal) == (3, True)


@pytest.mark.parametrize("name", ["hyperquadric", "quartic", "product_levi"])
def test_segre_type_invariants(name):
    M = corpus().manifolds[name]
    rep = segre_multitype(M, order=6)
    assert list(rep.ranks) == sorted(rep.ranks)
    assert rep.ranks[0] == M.m and rep.ranks[1] == 2 * M.m
    if rep.minimal:
        assert 3 <= rep.mu <= M.d + 2
        assert 2 * M.m + sum(rep.e) == 2 * M.m + M.d
    assert segre_multitype(M, order=8).multitype == rep.multitype


def test_segre_type_bounds():
    M = corpus().manifolds["hyperquadric"]
    with pytest.raises(ValueError):
        segre_multitype(M, k_max=2)


def test_minimality_witness():
    M = corpus().manifolds["hyperquadric"].with_order(6)
    wit = minimality_witness(M, seed=1)
    assert wit.rank_t == 2 and wit.rank_tau == 2
    assert wit.conjugate_rank_t == 2 and wit.conjugate_rank_tau == 2
    assert wit.returns_to_origin
    M3 = corpus().manifolds["product_levi"].with_order(6)
    assert minimality_witness(M3, seed=2).rank_t == M3.n
    with pytest.raises(ValueError):
        minimality_witness(corpus().manifolds["levi_flat"].with_order(6))
