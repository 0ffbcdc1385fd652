"""Reflection identities obtained by differentiating the target equation along
the antiholomorphic fields, and the Cramer-rule recursion that expresses the
zeta'-derivatives of theta' through jets of the conjugate map."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from .fps import I, Series, SeriesVector, series_det
from .manifold import FormalMap, GenericManifold, bar
from .segre import VectorField

__all__ = [
    "multiindices",
    "prime_names",
    "JetVector",
    "ReflectionSystem",
    "compute_R",
    "theta_beta_direct",
    "theta_beta_recursive",
    "recursion_numerator",
    "delta_det",
    "adjugate",
    "MinorVariant",
    "minor_variant",
    "gamma_sharp",
    "conjugate_reflection_check",
    "delta_conjugate_check",
]


def multiindices(m: int, max_len: int, min_len: int = 0) -> Iterator[tuple[int, ...]]:
    """All of N^m with ``min_len <= |a| <= max_len``, by length then lexicographic."""
    for total in range(min_len, max_len + 1):
        for a in sorted(_compositions(total, m), reverse=True):
            yield a


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def prime_names(Mp: GenericManifold) -> tuple[str, ...]:
    """Names of the free target variables ``t' = (w', z')``."""
    return tuple(v + "'" for v in Mp.t)


def _tmin(*series: Series) -> list[Series]:
    o = min(s.order for s in series)
    return [s.truncate(o) if s.order != o else s for s in series]


def _mul(a: Series, b: Series) -> Series:
    a, b = _tmin(a, b)
    return a * b


def _add(a: Series, b: Series) -> Series:
    a, b = _tmin(a, b)
    return a + b


def _sub(a: Series, b: Series) -> Series:
    a, b = _tmin(a, b)
    return a - b


@dataclass(frozen=True)
class JetVector:
    """All derivatives ``d^alpha hbar_j / d tau^alpha`` with ``|alpha| <= kappa``."""

    kappa: int
    base_vars: tuple[str, ...]
    entries: dict

    @classmethod
    def of(cls, h: FormalMap, kappa: int) -> JetVector:
        hb = h.hbar()
        tau = h.source.tau
        entries = {}
        for j, comp in enumerate(hb):
            for alpha in multiindices(len(tau), kappa):
                entries[(j, alpha)] = comp.derive_multi(dict(zip(tau, alpha)))
        return cls(kappa, tau, entries)

    @property
    def count(self) -> int:
        n = len(self.base_vars)
        nprime = len({j for j, _ in self.entries})
        return nprime * comb(self.kappa + n, n)


def _lbar_fields(M: GenericManifold, zero_vars: Sequence[str]) -> tuple[VectorField, ...]:
    ring = tuple(v for v in M.vars if v not in zero_vars)
    N = M.order
    out = []
    for zeta in M.zeta:
        c = {zeta: Series.const(1, ring, N - 1)}
        for k, xi in enumerate(M.xi):
            c[xi] = M.theta[k].derive(zeta).scale(-I).restrict(zero_vars)
        out.append(VectorField(c, ring))
    return tuple(out)


def _l_fields(M: GenericManifold) -> tuple[VectorField, ...]:
    N = M.order
    out = []
    for w in M.w:
        c = {w: Series.const(1, M.vars, N - 1)}
        for k, z in enumerate(M.z):
            c[z] = M.theta_bar[k].derive(w).scale(I)
        out.append(VectorField(c, M.vars))
    return tuple(out)


class ReflectionSystem:
    """The identities ``R'_gamma = Lbar^gamma [rho'(t', hbar(tau))]``.

    Series live in the ring ``(t, tau, t')`` where the target variables
    ``t'`` stay free.  Source ``t`` variables listed in ``zero_vars`` are set
    to zero up front, which is legitimate because the fields never
    differentiate in ``t``.
    """

    def __init__(self, h: FormalMap, order: int | None = None,
                 zero_vars: Sequence[str] = ()):
        M, Mp = h.source, h.target
        self.h = h
        self.M, self.Mp = M, Mp
        self.order = min(h.order, M.order, Mp.order) if order is None else order
        bad = [v for v in zero_vars if v not in M.t]
        if bad:
            raise ValueError(f"only source t variables may be zeroed, got {bad}")
        self.zero_vars = tuple(zero_vars)
        self.tprime = prime_names(Mp)
        self.src_vars = tuple(v for v in M.vars if v not in self.zero_vars)
        self.ring = self.src_vars + self.tprime
        Mo = M.with_order(self.order) if M.order != self.order else M
        self.fields = _lbar_fields(Mo, self.zero_vars)
        self._R: dict[tuple[int, ...], tuple[Series, ...]] = {}

    def tprime_var(self, name: str) -> Series:
        return Series.var(name, self.ring, self.order)

    def hbar_in_ring(self) -> SeriesVector:
        return SeriesVector(c.truncate(self.order).embed(self.ring) for c in self.h.hbar())

    def h_in_ring(self) -> SeriesVector:
        """``h(t)`` with zeroed variables removed."""
        return SeriesVector(c.truncate(self.order).restrict(self.zero_vars).embed(self.ring)
                            for c in self.h.h)

    def rho(self) -> tuple[Series, ...]:
        """``rho'(t', hbar(tau)) = fbar - z' + i*theta'(w', gbar, z')``."""
        Mp, N = self.Mp, self.order
        hb = self.hbar_in_ring()
        subs = {}
        for j, v in enumerate(Mp.w):
            subs[v] = self.tprime_var(v + "'")
        for j, v in enumerate(Mp.z):
            subs[v] = self.tprime_var(v + "'")
        for j, v in enumerate(Mp.zeta):
            subs[v] = hb[j]
        for v in Mp.xi:
            subs[v] = Series.zero(self.ring, N)
        out = []
        for l, zname in enumerate(Mp.z):
            th = Mp.theta[l].truncate(min(N, Mp.order))
            out.append(hb[Mp.m + l] - self.tprime_var(zname + "'") + th.compose(subs).scale(I))
        return tuple(out)

    def R(self, gamma: Sequence[int]) -> tuple[Series, ...]:
        gamma = tuple(gamma)
        if len(gamma) != self.M.m:
            raise ValueError("multiindex length must equal the source CR dimension")
        if gamma in self._R:
            return self._R[gamma]
        if not any(gamma):
            val = self.rho()
        else:
            j = max(i for i, g in enumerate(gamma) if g)
            if self.order - sum(gamma) < 2:
                raise ValueError(f"order {self.order} exhausted by |gamma| = {sum(gamma)}")
            prev = list(gamma)
            prev[j] -= 1
            val = tuple(self.fields[j].apply(s) for s in self.R(prev))
        self._R[gamma] = val
        return val


def compute_R(h: FormalMap, gamma: Sequence[int], order: int | None = None,
              zero_vars: Sequence[str] = ()) -> tuple[Series, ...]:
    return ReflectionSystem(h, order, zero_vars).R(gamma)


# ---------------------------------------------------------------------------
# theta'_beta: direct substitution and recursion


def _target_subs(h: FormalMap, order: int, w_src: str, zeta_src: str, z_src: str | None,
                 xi_src: str | None) -> dict[str, Series]:
    M, Mp = h.source, h.target
    data = {"h": h.in_ring(M.vars, order), "hbar": h.hbar_in_ring(M.vars, order)}
    zero = Series.zero(M.vars, order)
    subs = {}
    for j, v in enumerate(Mp.w):
        subs[v] = data[w_src][j]
    for j, v in enumerate(Mp.zeta):
        subs[v] = data[zeta_src][j]
    for l, v in enumerate(Mp.z):
        subs[v] = data[z_src][Mp.m + l] if z_src else zero
    for l, v in enumerate(Mp.xi):
        subs[v] = data[xi_src][Mp.m + l] if xi_src else zero
    return subs


def _order(h: FormalMap, order: int | None) -> int:
    base = min(h.order, h.source.order, h.target.order)
    return base if order is None else min(order, base)


def _src(h: FormalMap, order: int) -> GenericManifold:
    return h.source.with_order(order) if h.source.order != order else h.source


def theta_beta_direct(h: FormalMap, beta: Sequence[int], order: int | None = None) -> SeriesVector:
    """``[d^beta theta' / d zeta'^beta (g, gbar, f)]`` after ``z := xi + i*theta_bar``."""
    N = _order(h, order)
    Mp = h.target
    beta = tuple(beta)
    if len(beta) != Mp.m:
        raise ValueError("beta must have target CR dimension entries")
    subs = _target_subs(h, N, "h", "hbar", "h", None)
    M = _src(h, N)
    out = []
    for l in range(Mp.d):
        th = Mp.theta[l].truncate(min(N, Mp.order)).derive_multi(dict(zip(Mp.zeta, beta)))
        if th.order < 1:
            raise ValueError("order exhausted by |beta|")
        val = th.compose(subs)
        out.append(M.restrict_z(val))
    return SeriesVector(out)


def _lbar_matrix(h: FormalMap, N: int, rows: Sequence[int], cols: Sequence[int]):
    M = _src(h, N)
    fields = _lbar_fields(M, ())
    gbar = h.hbar_in_ring(M.vars, N)
    return [[fields[j].apply(gbar[k]) for k in cols] for j in rows], fields


def adjugate(A: Sequence[Sequence[Series]]) -> list[list[Series]]:
    """Classical adjoint: ``adj(A)[k][j] = (-1)^(j+k) det(A without row j, col k)``."""
    n = len(A)
    ref = A[0][0]
    if n == 1:
        return [[Series.const(1, ref.vars, ref.order)]]
    out = [[None] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            sub = [[A[r][c] for c in range(n) if c != k] for r in range(n) if r != j]
            d = series_det(sub)
            out[k][j] = d if (j + k) % 2 == 0 else -d
    return out


def delta_det(h: FormalMap, order: int | None = None, rows: Sequence[int] | None = None,
              cols: Sequence[int] | None = None, substitute: bool = True) -> Series:
    """``det(Lbar_j gbar_k)`` over a square selection, after ``z := xi + i*theta_bar``."""
    N = _order(h, order)
    m, mp = h.source.m, h.target.m
    rows = tuple(range(m)) if rows is None else tuple(rows)
    cols = tuple(range(mp)) if cols is None else tuple(cols)
    if len(rows) != len(cols):
        raise ValueError("square selection required")
    A, _ = _lbar_matrix(h, N, rows, cols)
    D = series_det(A)
    return _src(h, D.order).restrict_z(D) if substitute else D


def recursion_numerator(h: FormalMap, beta: Sequence[int], order: int | None = None,
                        rows: Sequence[int] | None = None,
                        cols: Sequence[int] | None = None) -> tuple[SeriesVector, Series, int]:
    """Numerator ``Nbeta`` with ``theta'_beta = Nbeta / Delta^(2|beta|-1)`` on the
    complexification, built by repeated differentiation and the adjoint matrix.

    Returns ``(Nbeta, Delta, 2|beta|-1)``, all over the ambient ring before the
    ``z`` substitution.  ``beta`` is indexed by the selected target columns.
    """
    N = _order(h, order)
    M, Mp = h.source, h.target
    rows = tuple(range(M.m)) if rows is None else tuple(rows)
    cols = tuple(range(Mp.m)) if cols is None else tuple(cols)
    beta = tuple(beta)
    if len(beta) != Mp.m:
        raise ValueError("beta must have target CR dimension entries")
    if any(beta[k] for k in range(Mp.m) if k not in cols):
        raise ValueError("beta must be supported on the selected columns")
    if not any(beta):
        raise ValueError("the recursion starts at |beta| = 1")
    A, fields = _lbar_matrix(h, N, rows, cols)
    D = series_det(A)
    adj = adjugate(A)
    fbar = h.hbar_in_ring(M.vars, N)[Mp.m:]
    sel = [fields[j] for j in rows]
    # walk from a unit multiindex to beta one step at a time
    path = []
    cur = [0] * Mp.m
    for k in cols:
        for _ in range(beta[k]):
            cur[k] += 1
            path.append(k)
    first = path[0]
    ci = cols.index(first)
    num = []
    for l in range(Mp.d):
        acc = None
        for r, X in enumerate(sel):
            term = _mul(adj[ci][r], X.apply(fbar[l]))
            acc = term if acc is None else _add(acc, term)
        num.append(acc.scale(I))
    size = 1
    for k in path[1:]:
        ci = cols.index(k)
        dD = [X.apply(D) for X in sel]
        new = []
        for l in range(Mp.d):
            acc = None
            for r, X in enumerate(sel):
                inner = _sub(_mul(D, X.apply(num[l])), _mul(num[l], dD[r]).scale(2 * size - 1))
                term = _mul(adj[ci][r], inner)
                acc = term if acc is None else _add(acc, term)
            new.append(acc)
        num = new
        size += 1
    num = _tmin(*num)
    return SeriesVector(num), D, 2 * size - 1


def theta_beta_recursive(h: FormalMap, beta: Sequence[int], order: int | None = None) -> SeriesVector:
    """``theta'_beta`` from the recursion, dividing by the invertible ``Delta``."""
    N = _order(h, order)
    M, Mp = h.source, h.target
    beta = tuple(beta)
    if M.m != Mp.m:
        raise ValueError("the invertible recursion needs equal CR dimensions; use minor_variant")
    if not any(beta):
        fb = h.hbar_in_ring(M.vars, N)[Mp.m:]
        f = h.in_ring(M.vars, N)[Mp.m:]
        Ms = _src(h, N)
        return SeriesVector(Ms.restrict_z((a - b).scale(I)) for a, b in zip(fb, f))
    num, D, power = recursion_numerator(h, beta, N)
    if not D.constant_term():
        raise ZeroDivisionError("Delta vanishes at the origin; use minor_variant")
    Dinv = (D.truncate(num.order) ** -1) ** power
    Ms = _src(h, num.order)
    return SeriesVector(Ms.restrict_z(c * Dinv) for c in num)


@dataclass(frozen=True)
class MinorVariant:
    lhs: SeriesVector
    rhs: SeriesVector
    gamma_sharp: tuple[int, ...]
    power: int

    @property
    def agree(self) -> bool:
        return all(a == b for a, b in zip(self.lhs, self.rhs))


def gamma_sharp(h: FormalMap, order: int | None = None, rows=None, cols=None,
                bound: int | None = None) -> tuple[int, ...]:
    """Lexicographically least ``gamma`` (within ``|gamma| <= bound``) with
    ``Lbar^gamma Delta`` nonzero at ``w = z = xi = 0``, ``zeta = 0``."""
    N = _order(h, order)
    M = h.source
    D = delta_det(h, N, rows, cols, substitute=False)
    bound = D.order - 1 if bound is None else bound
    fields = _lbar_fields(_src(h, N), ())
    found = []
    cache = {(0,) * M.m: D}
    for gamma in multiindices(M.m, bound):
        if any(gamma):
            j = max(i for i, g in enumerate(gamma) if g)
            prev = list(gamma)
            prev[j] -= 1
            prev = tuple(prev)
            if prev not in cache or cache[prev].order < 1:
                continue
            cache[gamma] = fields[j].apply(cache[prev])
        val = cache[gamma]
        if val.order > 0 and val.constant_term():
            found.append(gamma)
    if not found:
        raise ValueError("no multiindex makes Delta nonvanishing within the order bound")
    return min(found)


def minor_variant(h: FormalMap, beta: Sequence[int], rows: Sequence[int] | None = None,
                  cols: Sequence[int] | None = None, order: int | None = None) -> MinorVariant:
    """Both sides of the adjoint-matrix identity
    ``Delta^(2|beta|-1) * theta'_beta == Nbeta`` (after the z substitution)."""
    N = _order(h, order)
    M, Mp = h.source, h.target
    k = min(M.m, Mp.m)
    rows = tuple(range(k)) if rows is None else tuple(rows)
    cols = tuple(range(k)) if cols is None else tuple(cols)
    num, D, power = recursion_numerator(h, beta, N, rows, cols)
    direct = theta_beta_direct(h, beta, N)
    o = min(num.order, direct.order)
    Ms = _src(h, o)
    Dz = Ms.restrict_z(D.truncate(o))
    lhs = SeriesVector(Dz ** power * c.truncate(o) for c in direct)
    rhs = SeriesVector(Ms.restrict_z(c.truncate(o)) for c in num)
    gs = gamma_sharp(h, N, rows, cols)
    return MinorVariant(lhs, rhs, gs, power)


def theta_beta_conjugate_side(h: FormalMap, beta: Sequence[int],
                              order: int | None = None) -> SeriesVector:
    """``[d^beta theta_bar' / d w'^beta (gbar, g, fbar)]`` after ``xi := z - i*theta``."""
    N = _order(h, order)
    Mp = h.target
    subs = _target_subs(h, N, "h", "hbar", None, "hbar")
    M = _src(h, N)
    out = []
    for l in range(Mp.d):
        tb = Mp.theta_bar[l].truncate(min(N, Mp.order)).derive_multi(dict(zip(Mp.w, beta)))
        out.append(M.restrict_xi(tb.compose(subs)))
    return SeriesVector(out)


def conjugate_reflection_check(h: FormalMap, beta: Sequence[int],
                               order: int | None = None) -> SeriesVector:
    """Residual between the L-side ``theta'_beta`` and the formal conjugate of
    the Lbar-side ``theta_bar'_beta``; zero for real data."""
    M = h.source
    lside = theta_beta_conjugate_side(h, beta, order)
    rside = theta_beta_direct(h, beta, order)
    o = min(lside.order, rside.order)
    return SeriesVector(a.truncate(o) - bar(b.truncate(o), M.m, M.d) for a, b in zip(lside, rside))


def delta_conjugate_check(h: FormalMap, order: int | None = None) -> Series:
    """``det(L g)`` after ``xi := z - i*theta`` minus the conjugate of ``Delta``."""
    N = _order(h, order)
    M = _src(h, N)
    if M.m != h.target.m:
        raise ValueError("square case only")
    g = h.in_ring(M.vars, N)[: h.target.m]
    fields = _l_fields(M)
    D = series_det([[X.apply(gk) for gk in g] for X in fields])
    lside = M.restrict_xi(D)
    rside = delta_det(h, N)
    o = min(lside.order, rside.order)
    return lside.truncate(o) - bar(rside.truncate(o), M.m, M.d)
