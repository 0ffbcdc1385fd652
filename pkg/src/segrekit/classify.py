"""Nondegeneracy tests for formal maps and manifolds: S-solvability,
S-finiteness, S-nondegeneracy, their certificates and the implication audit."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import sympy

from .fps import (GaussianRational, Series, SeriesVector, as_gaussian, implicit_solve,
                  matrix_rank, series_det, _gauss)
from .manifold import FormalMap, GenericManifold, identity_map, verify_maps_into, verify_normal
from .reflection import ReflectionSystem, multiindices
from .segre import random_gaussian

__all__ = [
    "Verdict",
    "EssentialVariety",
    "ClassificationReport",
    "SolvabilityCertificate",
    "WeierstrassCertificate",
    "s_solvable",
    "essential_variety",
    "s_finite",
    "s_nondegenerate_map",
    "s_nondegenerate_manifold",
    "classify_map",
    "manifold_classify",
    "implication_audit",
    "solvability_certificate",
    "weierstrass_certificate",
    "series_to_sympy",
    "sympy_to_series",
    "linear_change",
    "change_map_coordinates",
]


@dataclass(frozen=True)
class Verdict:
    """A three-valued answer: ``true``, ``false``, ``false-up-to(B)`` or
    ``inconclusive(B)``, with the evidence that produced it."""

    status: str
    bound: int | None = None
    witness: object = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in ("true", "false", "false-up-to", "inconclusive"):
            raise ValueError(f"unknown verdict {self.status!r}")

    def __str__(self) -> str:
        if self.status in ("false-up-to", "inconclusive"):
            return f"{self.status}({self.bound})"
        return self.status

    @property
    def is_true(self) -> bool:
        return self.status == "true"

    @property
    def is_negative(self) -> bool:
        return self.status in ("false", "false-up-to")

    @property
    def is_definite(self) -> bool:
        return self.status != "inconclusive"


def _check_map(h: FormalMap) -> None:
    res = verify_maps_into(h)
    if any(not r.is_zero() for r in res):
        raise ValueError("the map does not send the source into the target mod order")


def _order(h: FormalMap, order: int | None) -> int:
    base = min(h.order, h.source.order, h.target.order)
    return base if order is None else min(order, base)


# ---------------------------------------------------------------------------
# S-solvability


def _origin_generators(h: FormalMap, bound: int, order: int):
    """``R'_gamma(0, 0, t')`` for ``|gamma| <= bound`` as series in ``t'``."""
    rs = ReflectionSystem(h, order, zero_vars=h.source.t)
    tp = rs.tprime
    out = []
    for gamma in multiindices(h.source.m, bound):
        if order - sum(gamma) < 2:
            break
        for l, R in enumerate(rs.R(gamma)):
            out.append((gamma, l, R.restrict(h.source.tau).embed(tp)))
    return out, tp


def _gradient(s: Series, vars: Sequence[str]) -> list[GaussianRational]:
    return [s.coefficient({v: 1}) for v in vars]


def s_solvable(h: FormalMap, kappa_max: int = 6, order: int | None = None,
               check: bool = True) -> Verdict:
    """Least ``kappa0`` for which the gradients at ``t' = 0`` of the
    ``R'_gamma(0, 0, t')``, ``|gamma| <= kappa0``, span ``C^{n'}``."""
    N = _order(h, order)
    if check:
        _check_map(h)
    np_ = h.target.n
    gens, tp = _origin_generators(h, kappa_max, N)
    rows: list[list[GaussianRational]] = []
    chosen: list[tuple[tuple[int, ...], int]] = []
    reached = -1
    for kappa in range(kappa_max + 1):
        layer = [g for g in gens if sum(g[0]) == kappa]
        if not layer and kappa > 0 and N - kappa < 2:
            break
        reached = kappa
        for gamma, l, R in layer:
            row = _gradient(R, tp)
            if matrix_rank(rows + [row]) > len(rows):
                rows.append(row)
                chosen.append((gamma, l))
        if len(rows) == np_:
            return Verdict("true", kappa, witness=tuple(chosen), detail=f"kappa0={kappa}")
    return Verdict("false-up-to", reached, witness=tuple(chosen),
                   detail=f"rank={len(rows)} of {np_}")


# ---------------------------------------------------------------------------
# S-finiteness


def series_to_sympy(s: Series, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    expr = sympy.Integer(0)
    for e, c in s.items():
        coef = sympy.Rational(int(c.re.numerator), int(c.re.denominator)) + \
            sympy.I * sympy.Rational(int(c.im.numerator), int(c.im.denominator))
        mono = sympy.Integer(1)
        for sym, k in zip(symbols, e):
            if k:
                mono *= sym ** k
        expr += coef * mono
    return sympy.expand(expr)


def sympy_to_series(expr, symbols: Sequence[sympy.Symbol], vars: Sequence[str],
                    order: int) -> Series:
    poly = sympy.Poly(sympy.expand(expr), *symbols)
    terms = {}
    for e, c in poly.terms():
        if sum(e) >= order:
            continue
        re, im = c.as_real_imag()
        terms[tuple(e)] = GaussianRational(_frac(re), _frac(im))
    return Series(tuple(vars), order, terms)


def _frac(x):
    from fractions import Fraction
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _symbols(names: Sequence[str]) -> list[sympy.Symbol]:
    return [sympy.Symbol(n.replace("'", "p")) for n in names]


@dataclass(frozen=True)
class EssentialVariety:
    """Generators ``R'_gamma(0, 0, t')`` of the essential variety at the origin."""

    generators: tuple[Series, ...]
    labels: tuple[tuple[tuple[int, ...], int], ...]
    vars: tuple[str, ...]
    gamma_bound: int
    order: int
    dim_at_origin: int | str = "unknown"

    @property
    def nprime(self) -> int:
        return len(self.vars)


def essential_variety(h: FormalMap, gamma_bound: int = 4, order: int | None = None,
                      check: bool = True) -> EssentialVariety:
    N = _order(h, order)
    if check:
        _check_map(h)
    gens, tp = _origin_generators(h, gamma_bound, N)
    kept = [(g, l, R) for g, l, R in gens if not R.is_zero()]
    for _, _, R in kept:
        if R.constant_term():
            raise ValueError("essential variety generator does not vanish at the origin")
    return EssentialVariety(tuple(R for _, _, R in kept), tuple((g, l) for g, l, _ in kept),
                            tp, gamma_bound, N)


def _null_space(rows: list[list[GaussianRational]], n: int) -> list[list[GaussianRational]]:
    if not rows:
        return [[GaussianRational(1) if i == j else GaussianRational(0) for i in range(n)]
                for j in range(n)]
    red, piv = _gauss(rows, n)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [GaussianRational(0)] * n
        v[f] = GaussianRational(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def _vanishes_on_subspace(gens: Sequence[Series], vars: Sequence[str],
                          basis: list[list[GaussianRational]]) -> bool:
    k = len(basis)
    params = tuple(f"s{i}" for i in range(k))
    order = min(g.order for g in gens)
    svar = [Series.var(p, params, order) for p in params]
    subs = {}
    for j, v in enumerate(vars):
        acc = Series.zero(params, order)
        for i in range(k):
            if basis[i][j]:
                acc = acc + svar[i].scale(basis[i][j])
        subs[v] = acc
    return all(g.compose(subs).is_zero() for g in gens)


def s_finite(h: FormalMap, gamma_bound: int = 4, order: int | None = None,
             check: bool = True, max_dim: int = 3) -> Verdict:
    """Decide whether the essential variety is zero dimensional at the origin.

    A Groebner basis decides global zero-dimensionality; in that case each
    coordinate gets a univariate eliminant as certificate.  Otherwise a
    linear family of zeros through the origin (inside the kernel of the
    linear parts, or a coordinate subspace) proves positive dimension.
    """
    V = essential_variety(h, gamma_bound, order, check)
    n = V.nprime
    if n > max_dim:
        return Verdict("inconclusive", gamma_bound, detail=f"n'={n} exceeds {max_dim}")
    if not V.generators:
        return Verdict("false", witness=("subspace", tuple(V.vars)), detail="no generators")
    syms = _symbols(V.vars)
    polys = [series_to_sympy(g, syms) for g in V.generators]
    G = sympy.groebner(polys, *syms, order="grevlex", domain="QQ_I")
    if G.is_zero_dimensional:
        elim = {}
        for j, s in enumerate(syms):
            others = [x for x in syms if x != s]
            L = sympy.groebner(polys, *(others + [s]), order="lex", domain="QQ_I")
            uni = [p for p in L.exprs if p.free_symbols <= {s}]
            elim[V.vars[j]] = sympy.Poly(uni[0], s).monic().as_expr() if uni else None
        return Verdict("true", witness=elim, detail="zero-dimensional ideal")
    # positive dimensional globally; look for a family through the origin
    lin = [_gradient(g, V.vars) for g in V.generators]
    kernel = _null_space([r for r in lin if any(r)], n)
    if kernel and _vanishes_on_subspace(V.generators, V.vars, kernel):
        return Verdict("false", witness=("subspace", tuple(tuple(v) for v in kernel)),
                       detail="kernel of the linear parts lies in the variety")
    for size in range(n - 1, 0, -1):
        for keep in combinations(range(n), size):
            basis = [[GaussianRational(1 if i == j else 0) for i in range(n)] for j in keep]
            if _vanishes_on_subspace(V.generators, V.vars, basis):
                return Verdict("false", witness=("subspace", tuple(tuple(v) for v in basis)),
                               detail="coordinate subspace lies in the variety")
    return Verdict("inconclusive", gamma_bound, detail="positive-dimensional away from the origin")


# ---------------------------------------------------------------------------
# S-nondegeneracy


def _segre_rows(h: FormalMap, gamma_bound: int, order: int):
    """Rows ``d R'^l_gamma / d t'`` at ``t = (w, 0)``, ``tau = 0``, ``t' = h(w, 0)``."""
    M = h.source
    rs = ReflectionSystem(h, order, zero_vars=M.z)
    tp = rs.tprime
    wv = M.w
    hw = [c.restrict(M.z).embed(wv) for c in h.h]
    rows = []
    for gamma in multiindices(M.m, gamma_bound):
        if order - sum(gamma) < 2:
            break
        Rs = rs.R(gamma)
        for l, R in enumerate(Rs):
            base = R.restrict(M.tau).embed(wv + tp)
            o = base.order - 1
            subs = {v: Series.var(v, wv, o) for v in wv}
            subs.update({v: c.truncate(o) for v, c in zip(tp, hw)})
            row = tuple(base.derive(v).compose(subs) for v in tp)
            rows.append((gamma, l, row))
    return rows


def _det_search(rows, size: int, seed: int = 0):
    """First row subset (by total weight, then index) with nonzero determinant."""
    if len(rows) < size:
        return None
    order = min(s.order for _, _, r in rows for s in r)
    mats = [[s.truncate(order) for s in r] for _, _, r in rows]
    # random evaluation gives a quick lower bound on the rank
    rng = random.Random(seed)
    vars = mats[0][0].vars
    pt = {v: random_gaussian(rng) for v in vars}
    numeric = [[s.evaluate(pt) for s in r] for r in mats]
    if matrix_rank(numeric) < size and not _any_minor(mats, size):
        return None
    weights = [sum(g) for g, _, _ in rows]
    combos = sorted(combinations(range(len(rows)), size),
                    key=lambda c: (sum(weights[i] for i in c), c))
    for c in combos:
        D = series_det([mats[i] for i in c])
        if not D.is_zero():
            return c, D
    return None


def _any_minor(mats, size: int) -> bool:
    for c in combinations(range(len(mats)), size):
        if not series_det([mats[i] for i in c]).is_zero():
            return True
    return False


def s_nondegenerate_map(h: FormalMap, gamma_bound: int = 4, order: int | None = None,
                        check: bool = True) -> Verdict:
    """Search ``n'`` derived identities whose ``t'``-Jacobian along the Segre
    variety has a determinant that is not zero mod order."""
    N = _order(h, order)
    if not verify_normal(h.source):
        raise ValueError("source manifold must be in normal coordinates")
    if check:
        _check_map(h)
    rows = _segre_rows(h, gamma_bound, N)
    found = _det_search(rows, h.target.n)
    if found is None:
        return Verdict("false-up-to", gamma_bound)
    c, D = found
    wit = tuple((rows[i][0], rows[i][1]) for i in c)
    return Verdict("true", witness={"rows": wit, "det": D, "leading": D.leading_part()},
                   detail=f"order={N}")


def s_nondegenerate_manifold(M: GenericManifold, beta_bound: int = 4,
                             order: int | None = None) -> Verdict:
    """Rank test on ``d/dw`` of the ``zeta^beta``-derivatives of theta at
    ``(w, 0, 0)``, ``beta != 0``."""
    if not verify_normal(M):
        raise ValueError("manifold must be in normal coordinates")
    N = M.order if order is None else min(order, M.order)
    drop = M.z + M.zeta + M.xi
    rows = []
    for beta in multiindices(M.m, beta_bound, min_len=1):
        if N - sum(beta) < 2:
            break
        for l in range(M.d):
            th = M.theta[l].truncate(N).derive_multi(dict(zip(M.zeta, beta)))
            base = th.restrict(drop)
            row = tuple(base.derive(w).truncate(N - sum(beta) - 1) for w in M.w)
            rows.append((beta, l, row))
    order_min = min((s.order for _, _, r in rows for s in r), default=0)
    if order_min < 1:
        rows = [r for r in rows if min(s.order for s in r[2]) >= 1]
    found = _det_search(rows, M.m)
    if found is None:
        return Verdict("false-up-to", beta_bound)
    c, D = found
    wit = tuple((rows[i][0], rows[i][1]) for i in c)
    return Verdict("true", witness={"rows": wit, "det": D, "leading": D.leading_part()})


# ---------------------------------------------------------------------------
# reports and audit


@dataclass(frozen=True)
class ClassificationReport:
    s_solvable: Verdict
    s_finite: Verdict
    s_nondeg: Verdict
    order_used: int
    kind: str = "map"
    s_nondeg_manifold: Verdict | None = None
    labels: dict = field(default_factory=dict)

    @property
    def audit_ok(self) -> bool:
        return implication_audit(self)

    def flags(self) -> tuple[str, str, str]:
        return str(self.s_solvable), str(self.s_finite), str(self.s_nondeg)


def classify_map(h: FormalMap, kappa_max: int = 6, gamma_bound: int = 4,
                 order: int | None = None) -> ClassificationReport:
    N = _order(h, order)
    _check_map(h)
    return ClassificationReport(
        s_solvable(h, kappa_max, N, check=False),
        s_finite(h, gamma_bound, N, check=False),
        s_nondegenerate_map(h, gamma_bound, N, check=False),
        N,
    )


def manifold_classify(M: GenericManifold, kappa_max: int = 6, gamma_bound: int = 4,
                      order: int | None = None) -> ClassificationReport:
    """Run the map tests on the identity of ``M``."""
    if not verify_normal(M):
        raise ValueError("manifold must be in normal coordinates")
    h = identity_map(M)
    r = classify_map(h, kappa_max, gamma_bound, order)
    sm = s_nondegenerate_manifold(M, gamma_bound, r.order_used)
    labels = {
        "finitely_nondegenerate": str(r.s_solvable),
        "essentially_finite": str(r.s_finite),
        "s_nondegenerate": str(r.s_nondeg),
    }
    return ClassificationReport(r.s_solvable, r.s_finite, r.s_nondeg, r.order_used,
                                "manifold", sm, labels)


def implication_audit(report: ClassificationReport) -> bool:
    """No definite pair of flags may contradict the one-way implications
    solvable => finite (maps) and finite => nondegenerate (manifolds)."""
    pairs = [(report.s_solvable, report.s_finite)]
    if report.kind == "manifold":
        pairs.append((report.s_finite, report.s_nondeg))
        if report.s_nondeg_manifold is not None:
            a, b = report.s_nondeg, report.s_nondeg_manifold
            if a.is_definite and b.is_definite and a.is_true != b.is_true:
                return False
    for a, b in pairs:
        if a.is_true and b.is_negative:
            return False
    return True


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class SolvabilityCertificate:
    kappa0: int
    rows: tuple[tuple[tuple[int, ...], int], ...]
    A: SeriesVector
    residual: SeriesVector

    @property
    def verified(self) -> bool:
        return all(r.is_zero() for r in self.residual)


def solvability_certificate(h: FormalMap, kappa0: int | None = None,
                            order: int | None = None) -> SolvabilityCertificate:
    """Solve the selected ``R'_gamma = 0`` for ``t'`` as series in ``(t, tau)``
    and check the solution reproduces ``h`` on the complexification."""
    N = _order(h, order)
    v = s_solvable(h, kappa0 if kappa0 is not None else 6, N)
    if not v.is_true or (kappa0 is not None and v.bound > kappa0):
        raise ValueError("map is not S-solvable within the requested jet order")
    M = h.source
    rs = ReflectionSystem(h, N)
    eqs = [rs.R(g)[l] for g, l in v.witness]
    o = min(e.order for e in eqs)
    eqs = [e.truncate(o) for e in eqs]
    A = implicit_solve(eqs, rs.tprime)
    Ms = M.with_order(A.order)
    hv = h.in_ring(M.vars, A.order)
    res = SeriesVector(Ms.restrict_z(a - b) for a, b in zip(A, hv))
    return SolvabilityCertificate(v.bound, v.witness, A, res)


@dataclass(frozen=True)
class WeierstrassCertificate:
    P: tuple[Series, ...]
    degrees: tuple[int, ...]
    residual: SeriesVector

    @property
    def verified(self) -> bool:
        return all(r.is_zero() for r in self.residual)


def _monic_in(poly: sympy.Poly, k: int) -> bool:
    return poly.degree(k) >= 0 and all(
        c == 0 or sum(m) == 0 for m, c in _lc_terms(poly, k))


def _lc_terms(poly: sympy.Poly, k: int):
    deg = poly.degree(poly.gens[k])
    return [(tuple(e for i, e in enumerate(m) if i != k), c)
            for m, c in poly.terms() if m[k] == deg]


def _deg_in(s: Series, v: str) -> int:
    k = s.vars.index(v)
    return max((e[k] for e, _ in s.items()), default=0)


def weierstrass_certificate(h: FormalMap, P: Sequence[Series] | None = None,
                            gamma_bound: int = 4, order: int | None = None) -> WeierstrassCertificate:
    """Check ``P_j(t, tau, h_j(t)) = 0`` on the complexification.

    ``P_j`` are series over ``(t, tau, t'_j)`` given in the ring
    ``(source ambient, t')``.  Without ``P`` they are obtained by lex
    elimination from the derived identities, keeping one element per
    coordinate that is monic in ``t'_j``.
    """
    N = _order(h, order)
    M = h.source
    rs = ReflectionSystem(h, N)
    tp = rs.tprime
    ring = rs.ring
    if P is None:
        eqs = []
        for gamma in multiindices(M.m, gamma_bound):
            if N - sum(gamma) < 2:
                break
            eqs.extend(R for R in rs.R(gamma) if not R.is_zero())
        o = min(e.order for e in eqs)
        syms = _symbols(ring)
        polys = [series_to_sympy(e.truncate(o), syms) for e in eqs]
        base = syms[: len(M.vars)]
        psyms = syms[len(M.vars):]
        P = []
        for j, s in enumerate(psyms):
            others = [x for x in psyms if x != s]
            gens = others + [s] + base
            G = sympy.groebner(polys, *gens, order="lex", domain="QQ_I")
            pick = None
            for g in G.exprs:
                if g.free_symbols & set(others):
                    continue
                poly = sympy.Poly(g, *gens)
                k = gens.index(s)
                if poly.degree(s) > 0 and _monic_in(poly, k):
                    if pick is None or poly.degree(s) < pick[1]:
                        pick = (g, poly.degree(s), poly)
            if pick is None:
                raise ValueError(f"elimination gave no polynomial monic in {tp[j]}")
            g, deg, poly = pick
            lc = [c for m, c in _lc_terms(poly, gens.index(s))][0]
            P.append(sympy_to_series(sympy.expand(g / lc), syms, ring, o))
    P = tuple(P)
    degrees = []
    residual = []
    for j, Pj in enumerate(P):
        others = [v for k, v in enumerate(tp) if k != j]
        if any(_deg_in(Pj, v) for v in others):
            raise ValueError(f"P_{j + 1} involves other target coordinates")
        degrees.append(_deg_in(Pj, tp[j]))
        o = Pj.order
        hv = h.in_ring(M.vars, o)
        subs = {v: Series.var(v, M.vars, o) for v in M.vars}
        subs.update({v: Series.zero(M.vars, o) for v in others})
        subs[tp[j]] = hv[j]
        Ms = M.with_order(o)
        residual.append(Ms.restrict_z(Pj.compose(subs)))
    return WeierstrassCertificate(P, tuple(degrees), SeriesVector(residual))


# ---------------------------------------------------------------------------
# coordinate changes for invariance checks


def linear_change(M: GenericManifold, A: Sequence[Sequence], c) -> tuple[GenericManifold, FormalMap]:
    """Image of ``M`` under ``(w, z) -> (A w, c z)`` with ``c`` real, and the
    map realising it.  ``A`` is an invertible Gaussian-rational matrix."""
    from .fps import _invert_matrix
    m, d, N = M.m, M.d, M.order
    c = as_gaussian(c)
    if c.im or not c:
        raise ValueError("the transversal scale must be a nonzero real")
    A = [[as_gaussian(x) for x in r] for r in A]
    Ainv = _invert_matrix(A)
    Abinv = [[x.conj() for x in r] for r in Ainv]
    amb = M.vars
    subs = {}
    for j in range(m):
        subs[M.w[j]] = sum((Series.var(M.w[k], amb, N).scale(Ainv[j][k]) for k in range(m)),
                           Series.zero(amb, N))
        subs[M.zeta[j]] = sum((Series.var(M.zeta[k], amb, N).scale(Abinv[j][k])
                               for k in range(m)), Series.zero(amb, N))
    for l in range(d):
        subs[M.z[l]] = Series.var(M.z[l], amb, N).scale(c.inverse())
        subs[M.xi[l]] = Series.var(M.xi[l], amb, N).scale(c.inverse())
    tb = [t.compose(subs).scale(c) for t in M.theta_bar]
    Mp = GenericManifold.from_theta_bar(tb, m, d, name=(M.name + "'") if M.name else "")
    comps = []
    for j in range(m):
        comps.append(sum((Series.var(M.w[k], M.t, N).scale(A[j][k]) for k in range(m)),
                         Series.zero(M.t, N)))
    for l in range(d):
        comps.append(Series.var(M.z[l], M.t, N).scale(c))
    return Mp, FormalMap.from_components(M, Mp, comps)


def change_map_coordinates(h: FormalMap, A: Sequence[Sequence], c,
                           Ap: Sequence[Sequence], cp) -> FormalMap:
    """``phi' o h o phi^-1`` between the linearly changed source and target."""
    from .fps import _invert_matrix
    Ms, phi = linear_change(h.source, A, c)
    Mt, phip = linear_change(h.target, Ap, cp)
    M, N = h.source, h.order
    Ainv = _invert_matrix([[as_gaussian(x) for x in r] for r in A])
    cinv = as_gaussian(c).inverse()
    tv = [Series.var(v, M.t, N) for v in M.t]
    subs = {}
    for j in range(M.m):
        subs[M.w[j]] = sum((tv[k].scale(Ainv[j][k]) for k in range(M.m)), Series.zero(M.t, N))
    for l in range(M.d):
        subs[M.z[l]] = tv[M.m + l].scale(cinv)
    inner = [comp.compose(subs) for comp in h.h]
    rename = dict(zip(h.target.t, inner))
    outer = [comp.truncate(N).compose(rename) for comp in phip.h]
    outer = [Series(M.t, N, o.terms) if o.vars == M.t else o for o in outer]
    return FormalMap.from_components(Ms, Mt, outer, name=h.name)
