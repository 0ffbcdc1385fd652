"""Finite-order harness for propagating a formal map along Segre chains.

Every object here is a truncated series; the checks establish identities
mod the stated order and never say anything about convergence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

import sympy

from .classify import (ClassificationReport, SolvabilityCertificate, Verdict, s_nondegenerate_map,
                       series_to_sympy, sympy_to_series, _symbols)
from .fps import Series, SeriesVector, invert_unit, series_det
from .manifold import FormalMap, GenericManifold, bar
from .reflection import ReflectionSystem, adjugate, multiindices
from .segre import ChainWord, build_fields, chain_map, chain_param_names, flow

__all__ = [
    "FundamentalSystem",
    "ChainJetTable",
    "DeterminationBound",
    "ArtinResult",
    "default_fundamental_system",
    "verify_on_chain",
    "chain_point",
    "direct_jet_table",
    "initial_table",
    "step1_solve_jets",
    "step2_transfer",
    "run_pipeline",
    "iterate_solvable",
    "exact_divide",
    "monic_lift",
    "artin_hypothesis_check",
    "determination_experiment",
    "nonzero_count",
]


def nonzero_count(series: Sequence[Series]) -> int:
    return sum(len(s.terms) for s in series)


# ---------------------------------------------------------------------------
# fundamental systems


@dataclass(frozen=True)
class FundamentalSystem:
    """Identities ``X_lambda(t, tau, t')`` with the hbar-jets already in place.

    ``X`` lives in the ring ``(source ambient, t')``; ``h(t)`` solves it on
    the complexification.  ``witness_rows`` index ``n'`` rows with
    nonvanishing ``t'``-Jacobian along the Segre variety.
    """

    h: FormalMap
    X: tuple[Series, ...]
    labels: tuple[tuple[tuple[int, ...], int], ...]
    kappa0: int
    witness_rows: tuple[int, ...]
    ring: tuple[str, ...]
    tprime: tuple[str, ...]

    @property
    def order(self) -> int:
        return min(x.order for x in self.X)

    def conjugate(self) -> tuple[Series, ...]:
        """``Xbar(tau, t, tau'')``: slots ``t'`` now receive ``hbar(tau)``."""
        M = self.h.source
        return tuple(bar(x, M.m, M.d) for x in self.X)

    def rows(self) -> tuple[Series, ...]:
        return tuple(self.X[i] for i in self.witness_rows)


def _identity_residual(sysX: Sequence[Series], h: FormalMap, ring, tp) -> tuple[Series, ...]:
    M = h.source
    out = []
    for x in sysX:
        o = x.order
        hv = h.in_ring(M.vars, o)
        subs = {v: Series.var(v, M.vars, o) for v in M.vars}
        subs.update(zip(tp, hv))
        out.append(M.with_order(o).restrict_z(x.compose(subs)))
    return tuple(out)


def _segre_det(sysX: Sequence[Series], h: FormalMap, tp) -> Series:
    """``det(dX/dt')`` at ``t = (w, 0)``, ``tau = 0``, ``t' = h(w, 0)``."""
    M = h.source
    drop = M.z + M.tau
    rows = []
    for x in sysX:
        o = x.order - 1
        base = [x.derive(v).truncate(o).restrict(drop) for v in tp]
        hw = [c.truncate(o).restrict(M.z).embed(M.w) for c in h.h]
        subs = {v: Series.var(v, M.w, o) for v in M.w}
        subs.update(zip(tp, hw))
        rows.append([b.compose(subs) for b in base])
    o = min(s.order for r in rows for s in r)
    return series_det([[s.truncate(o) for s in r] for r in rows])


def default_fundamental_system(h: FormalMap, report: ClassificationReport | Verdict | None = None,
                               gamma_bound: int = 4, order: int | None = None) -> FundamentalSystem:
    """Package the S-nondegeneracy witness rows ``R'^l_gamma`` and re-verify
    the vanishing identity and the determinant condition."""
    if isinstance(report, ClassificationReport):
        verdict = report.s_nondeg
    elif isinstance(report, Verdict):
        verdict = report
    else:
        verdict = s_nondegenerate_map(h, gamma_bound, order)
    if not verdict.is_true:
        raise ValueError("no S-nondegeneracy witness: the map has no fundamental system here")
    N = min(h.order, h.source.order, h.target.order) if order is None else order
    rs = ReflectionSystem(h, N)
    labels = tuple(verdict.witness["rows"])
    X = tuple(rs.R(g)[l] for g, l in labels)
    sys_ = FundamentalSystem(h, X, labels, max(sum(g) for g, _ in labels),
                             tuple(range(len(X))), rs.ring, rs.tprime)
    if any(not r.is_zero() for r in _identity_residual(X, h, rs.ring, rs.tprime)):
        raise ArithmeticError("witness identities do not vanish on the complexification")
    if _segre_det(X, h, rs.tprime).is_zero():
        raise ArithmeticError("witness determinant vanishes along the Segre variety")
    return sys_


# ---------------------------------------------------------------------------
# chains


def chain_point(M: GenericManifold, k: int, order: int, start: str = "L",
                extra: Sequence[str] = ()) -> tuple[SeriesVector, tuple[str, ...]]:
    """``Gamma^k`` as a point over the ring of chain parameters plus ``extra``."""
    names = chain_param_names(M.m, k)
    ring = names + tuple(extra)
    if not ring:
        ring = ("s0",)
    C = chain_map(M, ChainWord(start, k), order)
    pt = SeriesVector(c.embed(ring) for c in C.gamma)
    return pt, ring


def _eval_system(X: Sequence[Series], M: GenericManifold, pt: SeriesVector, slots,
                 tp: Sequence[str]) -> list[Series]:
    out = []
    for x in X:
        o = min(x.order, pt.order)
        subs = dict(zip(M.vars, (c.truncate(o) for c in pt)))
        subs.update(zip(tp, (s.truncate(o) for s in slots)))
        out.append(x.truncate(o).compose(subs))
    return out


def _h_at(h: FormalMap, M: GenericManifold, pt: SeriesVector) -> SeriesVector:
    o = pt.order
    subs = dict(zip(M.t, (c for c in pt[: M.n])))
    return SeriesVector(c.truncate(o).compose(subs) for c in h.h)


def _hbar_at(h: FormalMap, M: GenericManifold, pt: SeriesVector) -> SeriesVector:
    o = pt.order
    subs = dict(zip(M.tau, (c for c in pt[M.n:])))
    return SeriesVector(c.truncate(o).compose(subs) for c in h.hbar())


def verify_on_chain(system: FundamentalSystem, h: FormalMap, k: int,
                    order: int | None = None) -> list[Series]:
    """Residuals of ``X(Gamma^k, h o Gamma^k)`` and of the same identities on
    the ``Upsilon_bar``-prefixed chain; all vanish for a consistent map."""
    M = system.h.source
    N = system.order if order is None else min(order, system.order)
    extra = tuple(f"u{j}" for j in range(1, M.d + 1))
    pt, ring = chain_point(M, k, N, extra=extra)
    res = _eval_system(system.X, M, pt, _h_at(h, M, pt), system.tprime)
    u = [Series.var(v, ring, N) for v in extra]
    pu = flow(M, "Upsilon_bar", u, pt)
    res += _eval_system(system.X, M, pu, _h_at(h, M, pu), system.tprime)
    return res


# ---------------------------------------------------------------------------
# chain jet tables


@dataclass(frozen=True)
class ChainJetTable:
    """``(L^gamma Upsilon_bar^delta h_j) o Gamma^k`` (odd ``k``) or
    ``(Lbar^gamma Upsilon^delta hbar_j) o Gamma^k`` (even ``k``)."""

    k: int
    kappa: int
    side: str
    order: int
    entries: dict = field(default_factory=dict)

    def restrict(self, kappa: int) -> ChainJetTable:
        ent = {key: v for key, v in self.entries.items() if sum(key[1]) + sum(key[2]) <= kappa}
        return ChainJetTable(self.k, kappa, self.side, self.order, ent)

    def checksum(self) -> int:
        """Deterministic digest of the table contents."""
        hsh = hashlib.sha256()
        for key in sorted(self.entries):
            hsh.update(repr(key).encode())
            hsh.update(self.entries[key].to_poly().encode())
        return int(hsh.hexdigest()[:12], 16)

    def agrees_with(self, other: ChainJetTable) -> bool:
        for key, v in self.entries.items():
            if key not in other.entries:
                return False
            w = other.entries[key]
            o = min(v.order, w.order)
            if v.truncate(o) != w.truncate(o):
                return False
        return True


def _side(k: int) -> str:
    return "h" if k % 2 == 1 else "hbar"


def _jet_keys(M: GenericManifold, nprime: int, kappa: int):
    for total in range(kappa + 1):
        for a in range(total + 1):
            for g in multiindices(M.m, a, a):
                for dl in multiindices(M.d, total - a, total - a):
                    for j in range(nprime):
                        yield (j, g, dl)


def direct_jet_table(h: FormalMap, k: int, kappa: int, order: int | None = None) -> ChainJetTable:
    """Apply the fields to ``h`` (or ``hbar``) in the ambient ring, then
    compose with ``Gamma^k``; the reference for every propagated table."""
    M = h.source
    N = min(h.order, M.order) if order is None else order
    Mo = M.with_order(N)
    F = build_fields(Mo)
    side = _side(k)
    if side == "h":
        comps, along, trans = h.in_ring(M.vars, N), F.L, F.Upsilon_bar
    else:
        comps, along, trans = h.hbar_in_ring(M.vars, N), F.Lbar, F.Upsilon
    pt, ring = chain_point(M, k, N)
    entries = {}
    for j, g, dl in _jet_keys(M, len(comps), kappa):
        s = comps[j]
        for i, e in enumerate(dl):
            for _ in range(e):
                s = trans[i].apply(s)
        for i, e in enumerate(g):
            for _ in range(e):
                s = along[i].apply(s)
        if s.order < 1:
            continue
        subs = dict(zip(M.vars, (c.truncate(s.order) for c in pt)))
        entries[(j, g, dl)] = s.compose(subs)
    return ChainJetTable(k, kappa, side, N, entries)


def initial_table(system: FundamentalSystem, h: FormalMap, k: int,
                  order: int | None = None) -> ChainJetTable:
    """Zero-jet table ``h^c o Gamma^k`` on the side solved at step ``k``."""
    M = h.source
    N = system.order if order is None else order
    pt, _ = chain_point(M, k, N)
    vals = _h_at(h, M, pt) if _side(k) == "h" else _hbar_at(h, M, pt)
    zm, zd = (0,) * M.m, (0,) * M.d
    return ChainJetTable(k, 0, _side(k), N, {(j, zm, zd): v for j, v in enumerate(vals)})


def exact_divide(a: Series, b: Series) -> Series:
    """``c`` with ``b*c == a`` to the available precision, or ``ArithmeticError``.

    Works homogeneous degree by degree: the lowest part of ``b`` must divide
    each successive remainder exactly.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by a series that is zero mod order")
    a, b = (a.truncate(min(a.order, b.order)), b.truncate(min(a.order, b.order)))
    v = b.valuation()
    order = a.order - v
    if order < 1:
        raise ArithmeticError("no precision left after division")
    va = a.valuation()
    if va is not None and va < v:
        raise ArithmeticError("inexact division: dividend vanishes to lower order than divisor")
    bv = b.homogeneous_part(v)
    vars = a.vars
    c = Series.zero(vars, order)
    rem = a
    for dgr in range(order):
        part = rem.homogeneous_part(dgr + v)
        if part.is_zero():
            continue
        q = _divide_homogeneous(part, bv)
        qs = Series(vars, order, q.terms)
        c = c + qs
        rem = rem - Series(vars, a.order, q.terms) * b
    if not rem.is_zero():
        raise ArithmeticError("inexact division: nonzero remainder")
    return c


def _divide_homogeneous(p: Series, d: Series) -> Series:
    items = list(d.items())
    if len(items) == 1:
        (e0, c0), = items
        inv = c0.inverse()
        terms = {}
        for e, c in p.items():
            diff = tuple(x - y for x, y in zip(e, e0))
            if min(diff) < 0:
                raise ArithmeticError("inexact division: monomial not divisible")
            terms[diff] = c * inv
        return Series(p.vars, p.order, terms)
    syms = _symbols(p.vars)
    q, r = sympy.div(series_to_sympy(p, syms), series_to_sympy(d, syms), *syms, domain="QQ_I")
    if r != 0:
        raise ArithmeticError("inexact division: nonzero remainder")
    return sympy_to_series(q, syms, p.vars, p.order)


def _taylor_in(entries: dict, j: int, M_m: int, dvars: Sequence[str], ring, lam: int,
               order: int) -> Series:
    """``sum_{|beta| <= lam} T_beta u^beta / beta!`` from the table's gamma = 0 entries."""
    zm = (0,) * M_m
    total = Series.zero(ring, order)
    for beta in multiindices(len(dvars), lam):
        key = (j, zm, beta)
        if key not in entries:
            continue
        coef = entries[key].truncate(order).embed(ring) if entries[key].order >= order else \
            Series(ring, order, entries[key].embed(ring).terms)
        mono = Series.const(1, ring, order)
        den = 1
        for v, e in zip(dvars, beta):
            if e:
                mono = mono * Series.var(v, ring, order) ** e
                den *= factorial(e)
        total = total + (coef * mono).scale(Fraction(1, den))
    return total


def step1_solve_jets(system: FundamentalSystem, h: FormalMap, table: ChainJetTable,
                     order: int | None = None) -> ChainJetTable:
    """Raise the jet order of ``table`` by one using the linear system
    ``(det X) H = -adj(X) A`` obtained by differentiating the identities
    along the last chain parameter and the transversal flow."""
    M = h.source
    k, lam = table.k, table.kappa
    if k < 1:
        raise ValueError("chains of length at least one are required")
    side = _side(k)
    N = min(system.order, table.order) if order is None else order
    X = system.X if side == "h" else system.conjugate()
    np_ = len(system.tprime)
    X = [X[i] for i in system.witness_rows]
    uvars = tuple(f"u{j}" for j in range(1, M.d + 1))
    pt, ring = chain_point(M, k, N, extra=uvars)
    last = chain_param_names(M.m, k)[-M.m:]
    u = [Series.var(v, ring, N) for v in uvars]
    phi = flow(M, "Upsilon_bar" if side == "h" else "Upsilon", u, pt)
    T = [_taylor_in(table.entries, j, M.m, uvars, ring, lam, N) for j in range(np_)]
    Y = _eval_system(X, M, phi, T, system.tprime)
    # Jacobian in the slots at the unperturbed chain
    Xt = []
    for x in X:
        row = []
        for v in system.tprime:
            dx = x.derive(v)
            row.append(_eval_system([dx], M, phi, T, system.tprime)[0].restrict(uvars))
        Xt.append(row)
    o = min(s.order for r in Xt for s in r)
    Xt = [[s.truncate(o) for s in r] for r in Xt]
    b = series_det(Xt)
    specialized = b.restrict([v for v in b.vars if v not in last])
    if specialized.is_zero():
        raise ArithmeticError("determinant vanishes on the one-parameter specialization")
    adj = adjugate(Xt) if np_ > 1 else [[Series.const(1, b.vars, b.order)]]
    new = dict(table.entries)
    for _, g, dl in _jet_keys(M, 1, lam + 1):
        if sum(g) + sum(dl) != lam + 1:
            continue
        D = dict(zip(last, g))
        D.update(zip(uvars, dl))
        DY = [y.derive_multi(D).restrict(uvars) for y in Y]
        DT = [t.derive_multi(D).restrict(uvars) for t in T]
        A = []
        for r in range(np_):
            acc = DY[r]
            for c in range(np_):
                acc = _trunc_sub(acc, _trunc_mul(Xt[r][c], DT[c]))
            A.append(acc)
        for c in range(np_):
            rhs = None
            for r in range(np_):
                term = _trunc_mul(adj[c][r], A[r])
                rhs = term if rhs is None else _trunc_add(rhs, term)
            rhs = rhs.scale(-1)
            if rhs.order < 1 + (b.valuation() or 0):
                continue
            new[(c, g, dl)] = exact_divide(rhs, b)
    return ChainJetTable(k, lam + 1, side, N, new)


def _trunc_mul(a: Series, b: Series) -> Series:
    o = min(a.order, b.order)
    return a.truncate(o) * b.truncate(o)


def _trunc_add(a: Series, b: Series) -> Series:
    o = min(a.order, b.order)
    return a.truncate(o) + b.truncate(o)


def _trunc_sub(a: Series, b: Series) -> Series:
    o = min(a.order, b.order)
    return a.truncate(o) - b.truncate(o)


@dataclass(frozen=True)
class TransferResult:
    table: ChainJetTable
    det: Series
    specialized_det: Series
    residual: tuple[Series, ...]

    @property
    def consistent(self) -> bool:
        return (not self.specialized_det.is_zero()) and all(r.is_zero() for r in self.residual)


def step2_transfer(system: FundamentalSystem, h: FormalMap, k: int,
                   candidate: Sequence[Series] | None = None,
                   order: int | None = None) -> TransferResult:
    """Check the zero-jet table on ``Gamma^{k+1}`` against the identities of
    the opposite side: determinant along the last parameter and residual."""
    M = h.source
    N = system.order if order is None else order
    k1 = k + 1
    side = _side(k1)
    X = system.X if side == "h" else system.conjugate()
    X = [X[i] for i in system.witness_rows]
    pt, ring = chain_point(M, k1, N)
    if candidate is None:
        candidate = _h_at(h, M, pt) if side == "h" else _hbar_at(h, M, pt)
    candidate = SeriesVector(c.truncate(min(c.order, N)) for c in candidate)
    res = _eval_system(X, M, pt, candidate, system.tprime)
    Xt = []
    for x in X:
        Xt.append([_eval_system([x.derive(v)], M, pt, candidate, system.tprime)[0]
                   for v in system.tprime])
    o = min(s.order for r in Xt for s in r)
    det = series_det([[s.truncate(o) for s in r] for r in Xt])
    last = chain_param_names(M.m, k1)[-M.m:]
    specialized = det.restrict([v for v in det.vars if v not in last])
    zm, zd = (0,) * M.m, (0,) * M.d
    table = ChainJetTable(k1, 0, side, N, {(j, zm, zd): v for j, v in enumerate(candidate)})
    return TransferResult(table, det, specialized, tuple(res))


def run_pipeline(system: FundamentalSystem, h: FormalMap, k_max: int, kappa: int,
                 order: int | None = None) -> dict[int, ChainJetTable]:
    """Alternate transfer and jet solving along ``Gamma^1 .. Gamma^k_max``."""
    N = system.order if order is None else order
    tables = {}
    for k in range(1, k_max + 1):
        if k == 1:
            t = initial_table(system, h, 1, N)
            if not all(r.is_zero() for r in verify_on_chain(system, h, 1, N)):
                raise ArithmeticError("identities fail on the first Segre chain")
        else:
            tr = step2_transfer(system, h, k - 1, order=N)
            if not tr.consistent:
                raise ArithmeticError(f"transfer to chain {k} is inconsistent")
            t = tr.table
        for _ in range(kappa):
            t = step1_solve_jets(system, h, t, N)
        tables[k] = t
    return tables


def iterate_solvable(cert: SolvabilityCertificate, h: FormalMap, k: int, kappa: int,
                     order: int | None = None) -> ChainJetTable:
    """Jets of ``h^c`` on ``Gamma^k`` from the solved form ``h = A(t, tau)``
    (and its conjugate), with no linear solving."""
    if not cert.verified:
        raise ValueError("certificate does not reproduce the map")
    M = h.source
    N = cert.A.order if order is None else min(order, cert.A.order)
    Mo = M.with_order(N)
    F = build_fields(Mo)
    side = _side(k)
    if side == "h":
        comps, along, trans = [a.truncate(N) for a in cert.A], F.L, F.Upsilon_bar
    else:
        comps, along, trans = [bar(a.truncate(N), M.m, M.d) for a in cert.A], F.Lbar, F.Upsilon
    pt, _ = chain_point(M, k, N)
    entries = {}
    for j, g, dl in _jet_keys(M, len(comps), kappa):
        s = comps[j]
        for i, e in enumerate(dl):
            for _ in range(e):
                s = trans[i].apply(s)
        for i, e in enumerate(g):
            for _ in range(e):
                s = along[i].apply(s)
        if s.order < 1:
            continue
        subs = dict(zip(M.vars, (c.truncate(s.order) for c in pt)))
        entries[(j, g, dl)] = s.compose(subs)
    return ChainJetTable(k, kappa, side, N, entries)


# ---------------------------------------------------------------------------
# monic lifting, the Artin hypothesis and determination


def _eval_poly(P: Series, xname: str, c: Series) -> Series:
    wv = tuple(v for v in P.vars if v != xname)
    o = min(P.order, c.order)
    subs = {v: Series.var(v, wv, o) for v in wv}
    k = P.vars.index(xname)
    total = Series.zero(wv, o)
    powers = [Series.const(1, wv, o)]
    for e, coef in P.items():
        while len(powers) <= e[k]:
            powers.append(powers[-1] * c.truncate(o))
        mono = Series.const(coef, wv, o)
        for v, x in zip(P.vars, e):
            if v != xname and x:
                mono = mono * subs[v] ** x
        total = total + mono * powers[e[k]]
    return total


def monic_lift(P: Series, jet: Series, order: int, xname: str = "X") -> Series:
    """Extend ``jet`` (known mod its own order) to a root of ``P`` mod ``order``.

    ``P`` lives in the ring ``(X, w...)``.  With a unit separant this is
    Newton's iteration; otherwise each new homogeneous part is read off
    behind the separant's valuation, replacing ``P`` by ``dP/dX`` when the
    separant vanishes identically on the jet.
    """
    n0 = jet.order
    if not _eval_poly(P, xname, jet).is_zero():
        raise ValueError("the jet does not solve P to its own order")
    Q = P
    while True:
        S = _eval_poly(Q.derive(xname), xname, jet)
        if not S.is_zero():
            break
        Q = Q.derive(xname)
        if Q.is_zero() or Q.degree() is None:
            raise ArithmeticError("separant vanishes identically after exhausting derivatives")
    wv = jet.vars
    if S.constant_term():
        c = Series(wv, order, jet.terms)
        for _ in range(order + 1):
            r = _eval_poly(Q, xname, c)
            if r.is_zero():
                break
            Sc = _eval_poly(Q.derive(xname), xname, c)
            c = c - r * invert_unit(Sc)
    else:
        v = S.valuation()
        if n0 <= v:
            raise ArithmeticError("jet too short for the separant's valuation")
        Sv = S.homogeneous_part(v)
        c = Series(wv, order, jet.terms)
        for dgr in range(n0, order):
            lifted = Series(wv, min(order, dgr + v + 1), c.truncate(dgr).terms)
            r = _eval_poly(Q, xname, lifted)
            low = [e for e, _ in r.items() if sum(e) < dgr + v]
            if low:
                raise ArithmeticError("no consistent extension of the jet")
            part = r.homogeneous_part(dgr + v)
            if part.is_zero():
                continue
            q = _divide_homogeneous(part.scale(-1), Sv.truncate(part.order))
            c = c + Series(wv, order, q.terms)
    final = _eval_poly(P, xname, c)
    if not final.is_zero():
        raise ArithmeticError("no consistent extension of the jet")
    return c


@dataclass(frozen=True)
class ArtinResult:
    holds: bool
    rows: tuple[int, ...] | None
    det: Series | None


def artin_hypothesis_check(R: Sequence[Series], g_hat: Sequence[Series], yvars: Sequence[str],
                           order: int | None = None) -> ArtinResult:
    """Look for ``m`` rows of ``R(w, y)`` whose ``y``-Jacobian determinant
    along the formal solution ``y = g_hat(w)`` is not zero mod order."""
    R = list(R)
    yvars = tuple(yvars)
    wv = g_hat[0].vars
    o = min([r.order for r in R] + [g.order for g in g_hat])
    if order is not None:
        o = min(o, order)
    subs = {v: Series.var(v, wv, o) for v in wv}
    subs.update({y: g.truncate(o) for y, g in zip(yvars, g_hat)})
    for r in R:
        if not r.truncate(o).compose(subs).is_zero():
            raise ValueError("g_hat does not solve the system mod order")
    jac = []
    for r in R:
        jac.append([r.derive(y).compose({k: s.truncate(r.order - 1) for k, s in subs.items()})
                    for y in yvars])
    for rows in combinations(range(len(R)), len(yvars)):
        D = series_det([jac[i] for i in rows])
        if not D.is_zero():
            return ArtinResult(True, rows, D)
    return ArtinResult(False, None, None)


@dataclass(frozen=True)
class DeterminationBound:
    context: str
    nu: int | None
    evidence: tuple = ()
    empirical: bool = True


def _jet_agrees(a: Sequence[Series], b: Sequence[Series], nu: int) -> bool:
    return all(x.truncate(nu + 1) == y.truncate(nu + 1) for x, y in zip(a, b))


def _full_agrees(a: Sequence[Series], b: Sequence[Series]) -> bool:
    o = min(min(x.order for x in a), min(y.order for y in b))
    return all(x.truncate(o) == y.truncate(o) for x, y in zip(a, b))


def determination_experiment(context: str, family: Sequence[Sequence[Series]],
                             nu_candidates: Sequence[int]) -> DeterminationBound:
    """Least ``nu`` among the candidates such that no two members of the
    family agree to jet order ``nu`` while differing at full order.

    Family members are vectors of series (solutions of a system, or the
    components of maps between fixed manifolds); the verdict is empirical.
    """
    family = [list(f) for f in family]
    log = []
    for nu in sorted(nu_candidates):
        bad = [(i, j) for i, j in combinations(range(len(family)), 2)
               if _jet_agrees(family[i], family[j], nu) and not _full_agrees(family[i], family[j])]
        log.append((nu, len(bad)))
        if not bad:
            return DeterminationBound(context, nu, tuple(log))
    return DeterminationBound(context, None, tuple(log))
