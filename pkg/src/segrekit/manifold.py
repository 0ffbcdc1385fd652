"""Generic real-analytic submanifolds in graph form and formal maps between them.

A manifold of CR dimension ``m`` and codimension ``d`` through the origin of
C^(m+d) is stored through its complexified graph functions

    z  = xi + i*theta_bar(zeta, w, xi)
    xi = z  - i*theta(w, zeta, z)

Both are kept as series over the full ambient ring ``(w, z, zeta, xi)``;
``theta`` never involves ``xi`` and ``theta_bar`` never involves ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fps import I, Series, SeriesVector, implicit_solve

__all__ = [
    "ambient_vars",
    "graph_vars",
    "GenericManifold",
    "FormalMap",
    "bar",
    "theta_from_graph",
    "conjugate_theta",
    "verify_reality",
    "verify_normal",
    "verify_maps_into",
    "identity_map",
]


def ambient_vars(m: int, d: int, suffix: str = "") -> tuple[str, ...]:
    return (tuple(f"w{j}{suffix}" for j in range(1, m + 1))
            + tuple(f"z{j}{suffix}" for j in range(1, d + 1))
            + tuple(f"zeta{j}{suffix}" for j in range(1, m + 1))
            + tuple(f"xi{j}{suffix}" for j in range(1, d + 1)))


def graph_vars(m: int, d: int) -> tuple[str, ...]:
    """Variables of a real graph ``y = h(w, wbar, x)``; ``zeta`` stands for ``wbar``."""
    return (tuple(f"w{j}" for j in range(1, m + 1))
            + tuple(f"zeta{j}" for j in range(1, m + 1))
            + tuple(f"x{j}" for j in range(1, d + 1)))


def _swap_map(m: int, d: int) -> dict[str, str]:
    out = {}
    for j in range(1, m + 1):
        out[f"w{j}"], out[f"zeta{j}"] = f"zeta{j}", f"w{j}"
    for j in range(1, d + 1):
        out[f"z{j}"], out[f"xi{j}"] = f"xi{j}", f"z{j}"
    return out


def bar(s: Series, m: int, d: int) -> Series:
    """Formal conjugate: conjugate coefficients and swap ``w<->zeta``, ``z<->xi``."""
    return s.conj().permute_exponents(_swap_map(m, d))


def _involves(s: Series, names: Sequence[str]) -> bool:
    used = set(s.free_vars())
    return any(n in used for n in names)


@dataclass(frozen=True)
class GenericManifold:
    m: int
    d: int
    order: int
    theta: SeriesVector
    theta_bar: SeriesVector
    name: str = ""
    normal: bool = field(init=False)

    def __post_init__(self):
        vars = ambient_vars(self.m, self.d)
        for comp in tuple(self.theta) + tuple(self.theta_bar):
            if comp.vars != vars:
                raise ValueError(f"theta components must live in the ring {vars}")
            if comp.order != self.order:
                raise ValueError("theta order disagrees with the manifold order")
            if comp.constant_term() or any(comp.coefficient({v: 1}) for v in vars
                                           if self.order > 1):
                raise ValueError("theta must vanish to second order at the origin")
        if len(self.theta) != self.d or len(self.theta_bar) != self.d:
            raise ValueError("theta must have d components")
        if any(_involves(c, self.xi) for c in self.theta):
            raise ValueError("theta(w, zeta, z) must not involve xi")
        if any(_involves(c, self.z) for c in self.theta_bar):
            raise ValueError("theta_bar(zeta, w, xi) must not involve z")
        object.__setattr__(self, "normal", verify_normal(self))

    @classmethod
    def from_theta_bar(cls, theta_bar: Sequence[Series], m: int, d: int,
                       name: str = "") -> GenericManifold:
        """Build from ``theta_bar``; ``theta`` is its formal conjugate.

        Reality is not assumed: check it with :func:`verify_reality`.
        """
        tb = SeriesVector(theta_bar)
        th = SeriesVector(bar(c, m, d) for c in tb)
        return cls(m, d, tb.order, th, tb, name)

    @property
    def n(self) -> int:
        return self.m + self.d

    @property
    def vars(self) -> tuple[str, ...]:
        return ambient_vars(self.m, self.d)

    @property
    def w(self) -> tuple[str, ...]:
        return self.vars[: self.m]

    @property
    def z(self) -> tuple[str, ...]:
        return self.vars[self.m: self.n]

    @property
    def zeta(self) -> tuple[str, ...]:
        return self.vars[self.n: self.n + self.m]

    @property
    def xi(self) -> tuple[str, ...]:
        return self.vars[self.n + self.m:]

    @property
    def t(self) -> tuple[str, ...]:
        return self.vars[: self.n]

    @property
    def tau(self) -> tuple[str, ...]:
        return self.vars[self.n:]

    def var(self, name: str, order: int | None = None) -> Series:
        return Series.var(name, self.vars, self.order if order is None else order)

    def identity_subs(self, order: int | None = None) -> dict[str, Series]:
        return {v: self.var(v, order) for v in self.vars}

    def xi_on_M(self, order: int | None = None) -> list[Series]:
        """``z - i*theta``: the xi coordinates of points of the complexification."""
        order = self.order if order is None else order
        return [self.var(z, order) - self.theta[j].truncate(order).scale(I)
                for j, z in enumerate(self.z)]

    def z_on_M(self, order: int | None = None) -> list[Series]:
        """``xi + i*theta_bar``."""
        order = self.order if order is None else order
        return [self.var(x, order) + self.theta_bar[j].truncate(order).scale(I)
                for j, x in enumerate(self.xi)]

    def restrict_xi(self, s: Series) -> Series:
        """Substitute ``xi := z - i*theta`` in a series over the ambient ring."""
        subs = self.identity_subs(s.order)
        for x, val in zip(self.xi, self.xi_on_M(s.order)):
            subs[x] = val
        return s.compose(subs)

    def restrict_z(self, s: Series) -> Series:
        """Substitute ``z := xi + i*theta_bar``."""
        subs = self.identity_subs(s.order)
        for z, val in zip(self.z, self.z_on_M(s.order)):
            subs[z] = val
        return s.compose(subs)

    def defining_equations(self, order: int | None = None) -> list[Series]:
        """``rho = xi - z + i*theta(w, zeta, z)`` componentwise."""
        order = self.order if order is None else order
        return [self.var(x, order) - self.var(z, order) + self.theta[j].truncate(order).scale(I)
                for j, (z, x) in enumerate(zip(self.z, self.xi))]

    def with_order(self, order: int) -> GenericManifold:
        return GenericManifold(self.m, self.d, order, self.theta.truncate(order),
                               self.theta_bar.truncate(order), self.name)


def theta_from_graph(hgraph: Sequence[Series], m: int, d: int,
                     order: int | None = None, name: str = "") -> GenericManifold:
    """Pass from a real graph ``y = h(w, wbar, x)`` to the complexified graph form.

    ``hgraph`` lives in the ring :func:`graph_vars` (``zeta`` plays ``wbar``).
    Solves ``(z - xi)/(2i) = h(w, zeta, (z + xi)/2)`` for ``z``.
    """
    hv = SeriesVector(hgraph)
    gv = graph_vars(m, d)
    if hv.vars != gv:
        raise ValueError(f"graph functions must live in the ring {gv}")
    order = hv.order if order is None else min(order, hv.order)
    hv = hv.truncate(order)
    swap = {}
    for j in range(1, m + 1):
        swap[f"w{j}"], swap[f"zeta{j}"] = f"zeta{j}", f"w{j}"
    for comp in hv:
        if comp.constant_term() or any(comp.coefficient({v: 1}) for v in gv if order > 1):
            raise ValueError("graph function must vanish to second order (h(0) = 0, dh(0) = 0)")
        if comp.conj().permute_exponents(swap) != comp:
            raise ValueError("graph function violates reality (coefficient symmetry)")
    amb = ambient_vars(m, d)
    wz = amb[:m] + amb[m + d: m + d + m] + amb[m + d + m:]   # w, zeta, xi
    ring = wz + tuple(f"z{j}" for j in range(1, d + 1))
    x = {v: Series.var(v, ring, order) for v in ring}
    two_i = 2 * I
    subs = {f"w{j}": x[f"w{j}"] for j in range(1, m + 1)}
    subs.update({f"zeta{j}": x[f"zeta{j}"] for j in range(1, m + 1)})
    subs.update({f"x{j}": (x[f"z{j}"] + x[f"xi{j}"]).scale(Fraction(1, 2)) for j in range(1, d + 1)})
    F = []
    for j in range(1, d + 1):
        lhs = (x[f"z{j}"] - x[f"xi{j}"]).scale(two_i.inverse())
        F.append(lhs - hv[j - 1].compose(subs))
    zsol = implicit_solve(F, [f"z{j}" for j in range(1, d + 1)], order)
    tb = []
    for j in range(1, d + 1):
        xi_j = Series.var(f"xi{j}", zsol.vars, order)
        tb.append((zsol[j - 1] - xi_j).scale(-I).embed(amb))
    theta = conjugate_theta(tb, m, d, inverse=True)
    return GenericManifold(m, d, order, theta, SeriesVector(tb), name)



def conjugate_theta(theta: Sequence[Series], m: int, d: int, inverse: bool = False,
                    check_real: bool = False) -> SeriesVector:
    """Solve the reality fixed point linking ``theta`` and ``theta_bar``.

    Forward: ``X(zeta, w, xi) = theta(w, zeta, xi + i*X)``.
    With ``inverse=True`` the input is ``theta_bar`` and the output solves
    ``Y(w, zeta, z) = theta_bar(zeta, w, z - i*Y)``.  For a real manifold the
    result is the formal conjugate of the input; ``check_real`` enforces it.
    """
    th = SeriesVector(theta)
    amb = ambient_vars(m, d)
    if th.vars != amb:
        raise ValueError(f"expected series over {amb}")
    order = th.order
    for comp in th:
        if comp.constant_term() or any(comp.coefficient({v: 1}) for v in amb if order > 1):
            raise ValueError("input must vanish to second order at the origin")
    moving = amb[m: m + d] if not inverse else amb[m + d + m:]      # z or xi
    fixed_to = amb[m + d + m:] if not inverse else amb[m: m + d]    # xi or z
    if any(_involves(c, fixed_to) for c in th):
        raise ValueError("input depends on the variables it is solved over")
    sign = I if not inverse else -I
    base = {v: Series.var(v, amb, order) for v in amb}
    X = [Series.zero(amb, order) for _ in range(d)]
    for _ in range(order + 1):
        subs = dict(base)
        for j in range(d):
            subs[moving[j]] = base[fixed_to[j]] + X[j].scale(sign)
        nxt = [c.compose(subs) for c in th]
        if nxt == X:
            break
        X = nxt
    else:
        raise ArithmeticError("reality fixed point did not stabilise")
    out = SeriesVector(X)
    if check_real:
        expected = [bar(c, m, d) for c in th]
        if list(out) != expected:
            raise ValueError("input is not real: fixed point differs from the formal conjugate")
    return out


def verify_reality(M: GenericManifold) -> tuple[SeriesVector, SeriesVector]:
    """Residuals of the two reality identities; both empty means pass.

    First:  theta - theta_bar(zeta, w, z - i*theta)
    Second: theta_bar - theta(w, zeta, xi + i*theta_bar)
    """
    r1 = SeriesVector(M.theta[j] - M.restrict_xi(M.theta_bar[j]) for j in range(M.d))
    r2 = SeriesVector(M.theta_bar[j] - M.restrict_z(M.theta[j]) for j in range(M.d))
    return r1, r2


def verify_normal(M: GenericManifold) -> bool:
    """``theta(0, zeta, z) == 0`` and ``theta(w, 0, z) == 0`` modulo the order."""
    wi = [M.vars.index(v) for v in M.w]
    zi = [M.vars.index(v) for v in M.zeta]
    for comp in M.theta:
        for e, _ in comp.items():
            if all(e[i] == 0 for i in wi) or all(e[i] == 0 for i in zi):
                return False
    return True


@dataclass(frozen=True)
class FormalMap:
    """Truncated formal map ``h = (g, f)`` from ``source`` into ``target``.

    Components are series over the source ``t = (w, z)`` variables.
    """

    source: GenericManifold
    target: GenericManifold
    g: SeriesVector
    f: SeriesVector
    order: int
    name: str = ""

    def __post_init__(self):
        tv = self.source.t
        if len(self.g) != self.target.m or len(self.f) != self.target.d:
            raise ValueError("map component count disagrees with target dimensions")
        for comp in tuple(self.g) + tuple(self.f):
            if comp.vars != tv:
                raise ValueError(f"map components must live in the ring {tv}")
            if comp.order != self.order:
                raise ValueError("map component order disagrees with map order")
            if comp.constant_term():
                raise ValueError("maps must send the origin to the origin")

    @classmethod
    def from_components(cls, source, target, h: Sequence[Series], name: str = "") -> FormalMap:
        h = SeriesVector(h)
        return cls(source, target, SeriesVector(h[: target.m]), SeriesVector(h[target.m:]),
                   h.order, name)

    @property
    def h(self) -> SeriesVector:
        return SeriesVector(tuple(self.g) + tuple(self.f))

    def hbar(self) -> SeriesVector:
        """``hbar(tau)``: conjugate coefficients, rename ``t -> tau``."""
        ren = dict(zip(self.source.t, self.source.tau))
        return SeriesVector(c.conj().embed(self.source.tau, ren) for c in self.h)

    def in_ring(self, vars: Sequence[str], order: int | None = None) -> SeriesVector:
        order = self.order if order is None else order
        return SeriesVector(c.truncate(order).embed(vars) for c in self.h)

    def hbar_in_ring(self, vars: Sequence[str], order: int | None = None) -> SeriesVector:
        order = self.order if order is None else order
        return SeriesVector(c.truncate(order).embed(vars) for c in self.hbar())

    def with_order(self, order: int) -> FormalMap:
        return FormalMap(self.source.with_order(order), self.target.with_order(order),
                         self.g.truncate(order), self.f.truncate(order), order, self.name)


def identity_map(M: GenericManifold) -> FormalMap:
    comps = [Series.var(v, M.t, M.order) for v in M.t]
    return FormalMap.from_components(M, M, comps, name=f"id_{M.name}" if M.name else "id")


def _target_subs(h: FormalMap, order: int, slots: dict[str, str]) -> dict[str, Series]:
    """Substitution of map data into the target ambient ring.

    ``slots`` says which of ``h`` (in t) or ``hbar`` (in tau) feeds each
    target variable group: keys 'w', 'z', 'zeta', 'xi', values 'h' or 'hbar'.
    """
    M, Mp = h.source, h.target
    amb = M.vars
    hv = h.in_ring(amb, order)
    hb = h.hbar_in_ring(amb, order)
    src = {"h": hv, "hbar": hb}
    subs: dict[str, Series] = {}
    mp = Mp.m
    for j, v in enumerate(Mp.w):
        if "w" in slots:
            subs[v] = src[slots["w"]][j]
    for j, v in enumerate(Mp.z):
        if "z" in slots:
            subs[v] = src[slots["z"]][mp + j]
    for j, v in enumerate(Mp.zeta):
        if "zeta" in slots:
            subs[v] = src[slots["zeta"]][j]
    for j, v in enumerate(Mp.xi):
        if "xi" in slots:
            subs[v] = src[slots["xi"]][mp + j]
    return subs


def verify_maps_into(h: FormalMap, conjugate: bool = False) -> SeriesVector:
    """Residual of the tangency identity for ``h(M) in M'`` at truncation order.

    Default: ``f - [fbar + i*theta_bar'(gbar, g, fbar)]`` after
    ``xi := z - i*theta``.  With ``conjugate=True`` the mirrored identity
    ``fbar - [f - i*theta'(g, gbar, f)]`` after ``z := xi + i*theta_bar``.
    """
    M, Mp = h.source, h.target
    order = min(M.order, Mp.order, h.order)
    Ms = M.with_order(order) if M.order != order else M
    amb = M.vars
    hv = h.in_ring(amb, order)
    hb = h.hbar_in_ring(amb, order)
    out = []
    if not conjugate:
        subs = _target_subs(h, order, {"w": "h", "zeta": "hbar", "xi": "hbar"})
        for l in range(Mp.d):
            tb = Mp.theta_bar[l].truncate(order) if Mp.order != order else Mp.theta_bar[l]
            expr = hv[Mp.m + l] - hb[Mp.m + l] - tb.compose(_fill(subs, tb, amb, order)).scale(I)
            out.append(Ms.restrict_xi(expr))
    else:
        subs = _target_subs(h, order, {"w": "h", "zeta": "hbar", "z": "h"})
        for l in range(Mp.d):
            th = Mp.theta[l].truncate(order) if Mp.order != order else Mp.theta[l]
            expr = hb[Mp.m + l] - hv[Mp.m + l] + th.compose(_fill(subs, th, amb, order)).scale(I)
            out.append(Ms.restrict_z(expr))
    return SeriesVector(out)


def _fill(subs: dict[str, Series], s: Series, amb, order) -> dict[str, Series]:
    """Complete ``subs`` with zeros for variables that do not occur in ``s``."""
    full = dict(subs)
    for v in s.vars:
        if v not in full:
            full[v] = Series.zero(amb, order)
    return full
