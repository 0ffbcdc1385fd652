"""Complexified CR vector fields, their flows, Segre chains and chain ranks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .fps import GaussianRational, I, Series, SeriesVector, matrix_rank, series_det
from .manifold import GenericManifold

__all__ = [
    "VectorField",
    "VectorFieldSystem",
    "build_fields",
    "apply_field",
    "flow",
    "lie_series_flow",
    "ChainWord",
    "ChainMap",
    "chain_map",
    "chain_param_names",
    "generic_rank",
    "SegreTypeReport",
    "segre_multitype",
    "MinimalityWitness",
    "minimality_witness",
    "sigma",
    "random_gaussian",
    "random_point",
    "manifold_residual",
]

FIELD_KINDS = ("L", "Lbar", "Upsilon", "Upsilon_bar")


@dataclass(frozen=True)
class VectorField:
    """A derivation ``sum_v coeffs[v] * d/dv`` with coefficients over ``base_vars``."""

    coeffs: Mapping[str, Series]
    base_vars: tuple[str, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def coefficients_in(self, vars: tuple[str, ...], order: int) -> dict[str, Series]:
        key = (vars, order)
        if key not in self._cache:
            out = {}
            for v, c in self.coeffs.items():
                out[v] = c.truncate(order).embed(vars)
            self._cache[key] = out
        return self._cache[key]

    def apply(self, F: Series) -> Series:
        order = F.order - 1
        if order < 0:
            raise ValueError("truncation order exhausted")
        coeff_order = min(c.order for c in self.coeffs.values())
        order = min(order, coeff_order)
        coeffs = self.coefficients_in(F.vars, order)
        out = Series.zero(F.vars, order)
        for v, c in coeffs.items():
            dF = F.derive(v)
            if dF.is_zero() or c.is_zero():
                continue
            dF = dF.truncate(order) if dF.order != order else dF
            out = out + c * dF
        return out


@dataclass(frozen=True)
class VectorFieldSystem:
    M: GenericManifold
    L: tuple[VectorField, ...]
    Lbar: tuple[VectorField, ...]
    Upsilon: tuple[VectorField, ...]
    Upsilon_bar: tuple[VectorField, ...]

    def get(self, kind: str) -> tuple[VectorField, ...]:
        return getattr(self, kind)


def build_fields(M: GenericManifold) -> VectorFieldSystem:
    """The four families of complexified tangent fields of the complexification.

    L_j         = d/dw_j    + i * sum_k dtheta_bar_k/dw_j  d/dz_k
    Lbar_j      = d/dzeta_j - i * sum_k dtheta_k/dzeta_j   d/dxi_k
    Upsilon_k   = d/dz_k    + sum_l (delta_kl - i dtheta_l/dz_k)      d/dxi_l
    Upsilon_bar_k = d/dxi_k + sum_l (delta_kl + i dtheta_bar_l/dxi_k) d/dz_l
    """
    vars = M.vars
    N = M.order
    one = Series.const(1, vars, N - 1)
    L, Lb, U, Ub = [], [], [], []
    for j, w in enumerate(M.w):
        c = {w: one}
        for k, z in enumerate(M.z):
            c[z] = M.theta_bar[k].derive(w).scale(I)
        L.append(VectorField(c, vars))
    for j, zeta in enumerate(M.zeta):
        c = {zeta: one}
        for k, xi in enumerate(M.xi):
            c[xi] = M.theta[k].derive(zeta).scale(-I)
        Lb.append(VectorField(c, vars))
    for k, z in enumerate(M.z):
        c = {z: one}
        for l, xi in enumerate(M.xi):
            c[xi] = (one if l == k else Series.zero(vars, N - 1)) - M.theta[l].derive(z).scale(I)
        U.append(VectorField(c, vars))
    for k, xi in enumerate(M.xi):
        c = {xi: one}
        for l, z in enumerate(M.z):
            c[z] = (one if l == k else Series.zero(vars, N - 1)) + M.theta_bar[l].derive(xi).scale(I)
        Ub.append(VectorField(c, vars))
    return VectorFieldSystem(M, tuple(L), tuple(Lb), tuple(U), tuple(Ub))


def apply_field(V: VectorField, F: Series) -> Series:
    return V.apply(F)


# ---------------------------------------------------------------------------
# flows


def manifold_residual(M: GenericManifold, p: Sequence[Series]) -> SeriesVector:
    """``rho`` evaluated on a point ``p = (w, z, zeta, xi)`` given as series."""
    p = SeriesVector(p)
    order = min(M.order, p.order)
    subs = dict(zip(M.vars, (c.truncate(order) for c in p)))
    return SeriesVector(r.compose(subs) for r in M.defining_equations(order))


def _split(M: GenericManifold, p: Sequence[Series]):
    m, d = M.m, M.d
    p = list(p)
    return p[:m], p[m:m + d], p[m + d:2 * m + d], p[2 * m + d:]


def _theta_eval(theta: Series, M: GenericManifold, w, z, zeta, xi, ring_vars, order) -> Series:
    subs = {}
    for names, vals in ((M.w, w), (M.z, z), (M.zeta, zeta), (M.xi, xi)):
        for j, name in enumerate(names):
            subs[name] = vals[j] if vals is not None else Series.zero(ring_vars, order)
    return theta.truncate(min(theta.order, order)).compose(subs)


def flow(M: GenericManifold, kind: str, param: Sequence[Series], p: Sequence[Series],
         check: bool = True) -> SeriesVector:
    """Multi-flow of one field family applied to a point of the complexification.

    ``param`` has m entries for L/Lbar and d entries for Upsilon/Upsilon_bar;
    all series share the ring of ``p`` and vanish at the origin.
    """
    if kind not in FIELD_KINDS:
        raise ValueError(f"unknown field family {kind!r}")
    p = SeriesVector(p)
    param = list(param)
    order = min([p.order] + [s.order for s in param])
    p = p.truncate(order) if p.order != order else p
    param = [s.truncate(order) for s in param]
    if check and not manifold_residual(M, p).is_zero():
        raise ValueError("base point is not on the complexified manifold")
    ring = p.vars
    w, z, zeta, xi = _split(M, p)
    expect = M.m if kind in ("L", "Lbar") else M.d
    if len(param) != expect:
        raise ValueError(f"{kind} flow needs {expect} parameters")
    if kind == "L":
        w2 = [a + b for a, b in zip(w, param)]
        z2 = [x + _theta_eval(tb, M, w2, None, zeta, xi, ring, order).scale(I)
              for x, tb in zip(xi, M.theta_bar)]
        return SeriesVector(w2 + z2 + zeta + xi)
    if kind == "Lbar":
        zeta2 = [a + b for a, b in zip(zeta, param)]
        xi2 = [y - _theta_eval(th, M, w, z, zeta2, None, ring, order).scale(I)
               for y, th in zip(z, M.theta)]
        return SeriesVector(w + z + zeta2 + xi2)
    if kind == "Upsilon":
        z2 = [a + b for a, b in zip(z, param)]
        xi2 = [y - _theta_eval(th, M, w, z2, zeta, None, ring, order).scale(I)
               for y, th in zip(z2, M.theta)]
        return SeriesVector(w + z2 + zeta + xi2)
    xi2 = [a + b for a, b in zip(xi, param)]
    z2 = [x + _theta_eval(tb, M, w, None, zeta, xi2, ring, order).scale(I)
          for x, tb in zip(xi2, M.theta_bar)]
    return SeriesVector(w + z2 + zeta + xi2)


def lie_series_flow(M: GenericManifold, kind: str, param_names: Sequence[str],
                    p: Sequence[Series]) -> SeriesVector:
    """Flow computed as the formal Lie series ``sum_k (s.X)^k x / k!``.

    An independent route to :func:`flow`; the ring of ``p`` must contain the
    parameter names.  Each field application costs one degree, so the result
    is exact only up to the order reached by the series.
    """
    p = SeriesVector(p)
    fields = build_fields(M).get(kind)
    ring = M.vars + tuple(v for v in param_names if v not in M.vars)
    order = min(M.order, p.order)
    s = [Series.var(v, ring, order) for v in param_names]
    out = []
    for x in M.vars:
        total = Series.var(x, ring, order)
        term = total
        for k in range(1, order):
            # s_j * X_j(term): the derivative loses a degree, the factor s_j
            # restores it, so the product is exact at the full order.
            nxt = Series.zero(ring, order)
            for sj, X in zip(s, fields):
                applied = X.apply(term)
                nxt = nxt + sj * Series(ring, order, applied.terms)
            term = nxt.scale(Fraction(1, k))
            if term.is_zero():
                break
            total = total + term
        out.append(total)
    subs = dict(zip(M.vars, p))
    for name in param_names:
        subs[name] = Series.var(name, p.vars, p.order)
    return SeriesVector(c.compose(subs) for c in out)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainWord:
    start: str
    length: int

    def __post_init__(self):
        if self.start not in ("L", "Lbar"):
            raise ValueError("chains start with 'L' or 'Lbar'")
        if self.length < 0:
            raise ValueError("chain length must be nonnegative")

    def letters(self) -> list[str]:
        other = "Lbar" if self.start == "L" else "L"
        return [self.start if i % 2 == 0 else other for i in range(self.length)]


@dataclass(frozen=True)
class ChainMap:
    word: ChainWord
    params: tuple[str, ...]
    gamma: SeriesVector
    order: int

    def point(self, values: Mapping[str, object]) -> list[GaussianRational]:
        return [c.evaluate(values) for c in self.gamma]


def chain_param_names(m: int, k: int) -> tuple[str, ...]:
    return tuple(f"s{i}_{j}" for i in range(1, k + 1) for j in range(1, m + 1))


def chain_map(M: GenericManifold, word: ChainWord, order: int | None = None,
              params: Sequence[str] | None = None) -> ChainMap:
    """Iterated alternating flows from the origin with fresh parameters."""
    order = M.order if order is None else min(order, M.order)
    names = tuple(params) if params is not None else chain_param_names(M.m, word.length)
    if len(names) != M.m * word.length:
        raise ValueError("wrong number of chain parameters")
    ring = names if names else ("s0",)
    p = SeriesVector(Series.zero(ring, order) for _ in M.vars)
    for i, kind in enumerate(word.letters()):
        ps = [Series.var(v, ring, order) for v in names[i * M.m:(i + 1) * M.m]]
        p = flow(M, kind, ps, p, check=False)
    res = manifold_residual(M, p)
    if not res.is_zero():
        raise ArithmeticError("chain left the complexified manifold")
    return ChainMap(word, names, p, order)


def sigma(p: Sequence[Series], n: int) -> SeriesVector:
    """``sigma(t, tau) = (conj tau, conj t)`` on coefficient level."""
    p = list(p)
    if len(p) != 2 * n:
        raise ValueError("point must have 2n components")
    return SeriesVector([c.conj() for c in p[n:]] + [c.conj() for c in p[:n]])


# ---------------------------------------------------------------------------
# generic rank


def random_gaussian(rng: random.Random, height: int = 16, real: bool = False) -> GaussianRational:
    def q():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))
    return GaussianRational(q(), 0 if real else q())


def _jacobian(F: Sequence[Series], vars: Sequence[str]) -> list[list[Series]]:
    return [[f.derive(v) for v in vars] for f in F]


def generic_rank(F: Sequence[Series], vars: Sequence[str] | None = None,
                 seed: int = 0, samples: int = 8, upper: int | None = None) -> int:
    """Generic rank of the Jacobian of the truncation polynomials of ``F``.

    Random point evaluations give exact lower bounds; when the best sampled
    rank is below the trivial cap, all minors one size up are expanded
    symbolically (as exact polynomials) to confirm.
    """
    F = SeriesVector(F)
    vars = tuple(F.vars if vars is None else vars)
    jac = _jacobian(F, vars)
    cap = min(len(F), len(vars))
    if upper is not None:
        cap = min(cap, upper)
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        pt = {v: random_gaussian(rng) for v in F.vars}
        r = matrix_rank([[e.evaluate(pt) for e in row] for row in jac])
        best = max(best, r)
        if best >= cap:
            return cap
    r = best
    while r < cap and _some_minor_nonzero(jac, r + 1):
        r += 1
    return r


def _some_minor_nonzero(jac: list[list[Series]], size: int) -> bool:
    rows, cols = len(jac), len(jac[0])
    exact = size * max(1, max((e.degree() or 0) for row in jac for e in row)) + 1
    lifted = [[Series(e.vars, exact, e.terms) for e in row] for row in jac]
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            sub = [[lifted[i][j] for j in cs] for i in rs]
            if not series_det(sub).is_zero():
                return True
    return False


@dataclass(frozen=True)
class SegreTypeReport:
    mu: int | None
    kappa: int | None
    e: tuple[int, ...]
    multitype: tuple[int, ...]
    partial_sums: tuple[int, ...]
    ranks: tuple[int, ...]
    order_used: int
    minimal: bool | None

    @property
    def conclusive(self) -> bool:
        return self.mu is not None


def segre_multitype(M: GenericManifold, k_max: int = 6, order: int | None = None,
                    seed: int = 0) -> SegreTypeReport:
    """Ranks of the L-first chains, Segre type, multitype and minimality."""
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    if k_max > 6 * M.n:
        raise ValueError("k_max exceeds 3*(2n)")
    order = M.order if order is None else order
    dim_M = 2 * M.m + M.d
    ranks: list[int] = []
    mu = None
    for k in range(1, k_max + 1):
        G = chain_map(M, ChainWord("L", k), order)
        ranks.append(generic_rank(G.gamma, G.params, seed=seed + k, upper=dim_M))
        if k >= 2 and ranks[-1] == ranks[-2]:
            mu = k - 1
            break
    if mu is None:
        return SegreTypeReport(None, None, (), tuple(_increments(ranks)), (), tuple(ranks),
                               order, None)
    inc = _increments(ranks[:mu])
    e = tuple(inc[2:])
    partial = tuple(sum(e[:i + 1]) for i in range(len(e)))
    minimal = ranks[mu - 1] == dim_M
    return SegreTypeReport(mu, mu - 2, e, tuple(inc), partial, tuple(ranks), order, minimal)


def _increments(ranks: Sequence[int]) -> list[int]:
    return [r - (ranks[i - 1] if i else 0) for i, r in enumerate(ranks)]


@dataclass(frozen=True)
class MinimalityWitness:
    params: tuple[str, ...]
    values: tuple[GaussianRational, ...]
    returns_to_origin: bool
    rank_t: int
    rank_tau: int
    conjugate_rank_t: int
    conjugate_rank_tau: int
    order_used: int


def minimality_witness(M: GenericManifold, seed: int = 0, trials: int = 20,
                       k_max: int = 6) -> MinimalityWitness:
    """A parameter tuple for the 2mu-chain where both projections have rank n.

    First tries tuples that retrace their path (so the chain returns to the
    origin exactly); if none has full rank, falls back to unconstrained
    random tuples and records ``returns_to_origin=False``.
    """
    rep = segre_multitype(M, k_max=k_max, seed=seed)
    if not rep.minimal:
        raise ValueError("manifold is not minimal at the origin")
    mu, m, n = rep.mu, M.m, M.n
    k = 2 * mu
    G = chain_map(M, ChainWord("L", k))
    Gc = chain_map(M, ChainWord("Lbar", k))
    jt = _jacobian(G.gamma[:n], G.params)
    jtau = _jacobian(G.gamma[n:], G.params)
    jct = _jacobian(Gc.gamma[:n], Gc.params)
    jctau = _jacobian(Gc.gamma[n:], Gc.params)
    rng = random.Random(seed)

    def ranks_at(vals):
        pt = dict(zip(G.params, vals))
        cpt = dict(zip(Gc.params, (v.conj() for v in vals)))
        ev = lambda J, P: matrix_rank([[e.evaluate(P) for e in row] for row in J])
        return ev(jt, pt), ev(jtau, pt), ev(jct, cpt), ev(jctau, cpt)

    zero = GaussianRational(0)
    for retrace in (True, False):
        for _ in range(trials):
            if retrace:
                steps = [[random_gaussian(rng) for _ in range(m)] for _ in range(mu - 1)]
                seq = steps + [[zero] * m] + [[-x for x in s] for s in reversed(steps)] + [[zero] * m]
            else:
                seq = [[random_gaussian(rng) for _ in range(m)] for _ in range(k)]
            vals = tuple(x for s in seq for x in s)
            r = ranks_at(vals)
            if min(r) == n:
                pt = dict(zip(G.params, vals))
                back = all(not c.evaluate(pt) for c in G.gamma)
                return MinimalityWitness(G.params, vals, back and retrace, *r, G.order)
    raise ArithmeticError("no full-rank parameter tuple found; inconclusive")


# ---------------------------------------------------------------------------
# random points on the complexification


def random_point(M: GenericManifold, param_names: Sequence[str], rng: random.Random,
                 height: int = 8, order: int | None = None) -> SeriesVector:
    """A formal point of the complexification: random ``w, z, zeta`` (linear plus
    quadratic in the parameters, no constant term) and ``xi := z - i*theta``."""
    order = M.order if order is None else order
    ring = tuple(param_names)
    xs = [Series.var(v, ring, order) for v in ring]

    def rand_series():
        s = Series.zero(ring, order)
        for x in xs:
            s = s + x.scale(random_gaussian(rng, height))
        for a, b in combinations(range(len(xs)), 2):
            if rng.random() < 0.5:
                s = s + (xs[a] * xs[b]).scale(random_gaussian(rng, height))
        return s

    w = [rand_series() for _ in range(M.m)]
    z = [rand_series() for _ in range(M.d)]
    zeta = [rand_series() for _ in range(M.m)]
    xi = [zj - _theta_eval(th, M, w, z, zeta, None, ring, order).scale(I)
          for zj, th in zip(z, M.theta)]
    return SeriesVector(w + z + zeta + xi)
