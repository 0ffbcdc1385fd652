import pytest

from segrekit.classify import (ClassificationReport, Verdict, change_map_coordinates,
                               classify_map, essential_variety, implication_audit, linear_change,
                               manifold_classify, s_finite, s_nondegenerate_manifold,
                               s_nondegenerate_map, s_solvable, solvability_certificate,
                               weierstrass_certificate)
from segrekit.fps import I, Series, parse_poly
from segrekit.manifold import FormalMap, identity_map, verify_maps_into

from conftest import corpus


def maps(name):
    return corpus().maps[name]


def manifold(name):
    return corpus().manifolds[name]


def test_verdict_strings():
    assert str(Verdict("true")) == "true"
    assert str(Verdict("false-up-to", 4)) == "false-up-to(4)"
    assert str(Verdict("inconclusive", 2)) == "inconclusive(2)"
    assert Verdict("false-up-to", 4).is_negative and not Verdict("inconclusive", 4).is_negative
    with pytest.raises(ValueError):
        Verdict("maybe")


# --- S-solvability ----------------------------------------------------------

def test_solvable_on_hyperquadric_identity():
    v = s_solvable(maps("hyperquadric_identity"))
    assert v.is_true and v.bound == 1
    assert v.witness == (((0,), 0), ((1,), 0))


def test_embed_2_not_solvable_within_six():
    v = s_solvable(maps("embed_2"))
    assert str(v) == "false-up-to(6)"


def test_solvable_rejects_map_off_target():
    h = maps("embed_1")
    comps = list(h.h)
    comps[2] = comps[2] + parse_poly("w1^2", h.source.t, h.order)
    with pytest.raises(ValueError):
        s_solvable(FormalMap.from_components(h.source, h.target, comps))


# --- essential variety and S-finiteness ----------------------------------------

def test_essential_variety_generators():
    V = essential_variety(maps("hyperquadric_identity"))
    assert [g.to_poly() for g in V.generators] == ["-z1'", "i*w1'"]
    P = essential_variety(maps("product_levi_identity"))
    assert [g.to_poly() for g in P.generators] == ["-z1'", "i*w1'", "i*w1'*w2'"]
    L = essential_variety(identity_map(manifold("levi_flat")))
    assert [g.to_poly() for g in L.generators] == ["-z1'"]


@pytest.mark.parametrize("name", ["hyperquadric_identity", "embed_quartic", "embed_2"])
def test_finite_maps(name):
    v = s_finite(maps(name))
    assert v.is_true
    # every coordinate gets a univariate eliminant
    assert all(p is not None for p in v.witness.values())


def test_product_levi_variety_contains_a_line():
    v = s_finite(maps("product_levi_identity"))
    assert v.status == "false"
    kind, basis = v.witness
    assert kind == "subspace"
    # the w2' axis (0, s, 0)
    assert basis == ((0, 1, 0),)


def test_embed_1_variety_contains_the_antidiagonal():
    v = s_finite(maps("embed_1"))
    assert v.status == "false"
    V = essential_variety(maps("embed_1"))
    ring = ("s",)
    s = Series.var("s", ring, V.order)
    line = {"w1'": s, "w2'": -s, "z1'": Series.zero(ring, V.order)}
    assert all(g.compose(line).is_zero() for g in V.generators)


# --- S-nondegeneracy ---------------------------------------------------------

def test_nondegenerate_hyperquadric():
    v = s_nondegenerate_map(maps("hyperquadric_identity"))
    assert v.is_true
    assert v.witness["rows"] == (((0,), 0), ((1,), 0))
    assert v.witness["det"].to_poly() == "i"


def test_nondegenerate_product_levi():
    v = s_nondegenerate_map(maps("product_levi_identity"))
    assert v.is_true
    assert v.witness["leading"].to_poly() == "w1"


def test_embed_quartic_degenerate_within_four():
    assert str(s_nondegenerate_map(maps("embed_quartic"))) == "false-up-to(4)"


def test_manifold_nondegeneracy():
    assert s_nondegenerate_manifold(manifold("hyperquadric")).is_true
    v = s_nondegenerate_manifold(manifold("product_levi"))
    assert v.is_true and v.witness["det"].leading_part().to_poly() == "w1"
    assert str(s_nondegenerate_manifold(manifold("rational_graph"))) == "false-up-to(4)"
    assert str(s_nondegenerate_manifold(manifold("levi_flat"))) == "false-up-to(4)"


# --- reports and audit -------------------------------------------------------

@pytest.mark.parametrize("name, flags", [
    ("hyperquadric", ("true", "true", "true")),
    ("product_levi", ("false-up-to(6)", "false", "true")),
    ("levi_flat", ("false-up-to(6)", "false", "false-up-to(4)")),
    ("rational_graph", ("false-up-to(6)", "false", "false-up-to(4)")),
])
def test_manifold_classify(name, flags):
    r = manifold_classify(manifold(name))
    assert r.flags() == flags
    assert r.audit_ok
    assert r.labels["s_nondegenerate"] == flags[2]


def test_classify_map_reports():
    r = classify_map(maps("embed_quartic"))
    assert r.flags()[1:] == ("true", "false-up-to(4)")
    assert r.audit_ok


def test_audit_flags_contradictions():
    bad = ClassificationReport(Verdict("true", 1), Verdict("false"), Verdict("true"), 6)
    assert not implication_audit(bad)
    bad_up_to = ClassificationReport(Verdict("true", 1), Verdict("false-up-to", 4),
                                     Verdict("true"), 6)
    assert not implication_audit(bad_up_to)
    fine = ClassificationReport(Verdict("true", 1), Verdict("inconclusive", 4),
                                Verdict("false"), 6)
    assert implication_audit(fine)
    man = ClassificationReport(Verdict("false-up-to", 6), Verdict("true"), Verdict("false"), 6,
                               kind="manifold")
    assert not implication_audit(man)
    split = ClassificationReport(Verdict("false-up-to", 6), Verdict("false"), Verdict("true"), 6,
                                 kind="manifold", s_nondeg_manifold=Verdict("false-up-to", 4))
    assert not implication_audit(split)


def test_audit_holds_on_corpus():
    doc = corpus()
    for h in doc.maps.values():
        assert classify_map(h).audit_ok, h.name
    for M in doc.manifolds.values():
        if M.normal:
            assert manifold_classify(M).audit_ok, M.name


# --- certificates ------------------------------------------------------------

def test_solvability_certificate_identity():
    c = solvability_certificate(maps("hyperquadric_identity"))
    assert c.verified and c.kappa0 == 1
    assert [a.to_poly() for a in c.A] == ["w1", "xi1 + i*w1*zeta1"]


def test_solvability_certificate_refused_for_embed_2():
    with pytest.raises(ValueError):
        solvability_certificate(maps("embed_2"))


def test_weierstrass_certificate_embed_quartic():
    h = maps("embed_quartic")
    w = weierstrass_certificate(h)
    assert w.verified and w.degrees == (2, 2, 1)
    assert [p.to_poly() for p in w.P][:2] == ["-w1^2 + w1'^2", "w2'^2"]
    bumped = list(w.P)
    bumped[0] = bumped[0] + parse_poly("w1^3", bumped[0].vars, bumped[0].order)
    assert not weierstrass_certificate(h, bumped).verified


def test_weierstrass_certificate_identity_is_linear():
    w = weierstrass_certificate(maps("hyperquadric_identity"))
    assert w.verified and w.degrees == (1, 1)


def test_weierstrass_rejects_mixed_polynomials():
    h = maps("hyperquadric_identity")
    w = weierstrass_certificate(h)
    mixed = [w.P[0] + parse_poly("w1'*z1'", w.P[0].vars, w.P[0].order), w.P[1]]
    with pytest.raises(ValueError):
        weierstrass_certificate(h, mixed)


# --- invariance under linear changes of coordinates ---------------------------

A = [[2, 1], [1, 1]]


def test_linear_change_maps_manifold_onto_image():
    M = manifold("product_levi")
    Mp, phi = linear_change(M, A, 2)
    assert verify_maps_into(phi).is_zero()
    assert manifold_classify(Mp).flags() == manifold_classify(M).flags()


def test_linear_change_rejects_complex_scale():
    with pytest.raises(ValueError):
        linear_change(manifold("hyperquadric"), [[1]], I)


@pytest.mark.parametrize("name", ["hyperquadric_identity", "embed_quartic", "embed_2"])
def test_map_flags_invariant(name):
    h = maps(name)
    m, mp = h.source.m, h.target.m
    As = [[1 + I]] if m == 1 else A
    Ap = [[1 + I]] if mp == 1 else A
    g = change_map_coordinates(h, As, 3, Ap, 2)
    assert verify_maps_into(g).is_zero()
    assert classify_map(g).flags() == classify_map(h).flags()
