"""Exact truncated multivariate power series over the Gaussian rationals.

A :class:`Series` lives in a ring described by an ordered tuple of variable
names and a truncation order ``N``: only monomials of total degree ``< N`` are
stored.  Exponent vectors are packed into a single integer (base ``N``) so
that monomial multiplication is integer addition; since the degree of every
product that survives truncation is ``< N`` no digit can overflow.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "I",
    "ONE",
    "ZERO",
    "Series",
    "SeriesVector",
    "ParseError",
    "as_gaussian",
    "invert_unit",
    "implicit_solve",
    "series_det",
    "solve_linear",
    "matrix_rank",
    "parse_poly",
    "format_coefficient",
]


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re, im) -> GaussianRational:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __add__(self, other):
        other = as_gaussian(other)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gaussian(other)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gaussian(other) - self

    def __mul__(self, other):
        if isinstance(other, Series):
            return NotImplemented
        other = as_gaussian(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_gaussian(other) * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> GaussianRational:
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def conj(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = as_gaussian(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    def __repr__(self):
        return f"GaussianRational({format_coefficient(self)})"

    def __str__(self):
        return format_coefficient(self)


def _q(x) -> mpq:
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise TypeError("expected a rational, got a non-real Gaussian rational")
        return x.re
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not supported")
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, complex):
        raise TypeError("floating point coefficients are not supported")
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq" or type(x).__name__ == "mpz":
        return GaussianRational._raw(mpq(x), mpq(0))
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# exponent packing


def _pack(exps: Sequence[int], base: int) -> int:
    key = 0
    for e in reversed(exps):
        key = key * base + e
    return key


def _unpack(key: int, nvars: int, base: int) -> tuple[int, ...]:
    out = []
    for _ in range(nvars):
        key, r = divmod(key, base)
        out.append(r)
    return tuple(out)


def _base(order: int) -> int:
    return max(order, 2)


class Series:
    """Sparse truncated power series; immutable by convention.

    ``terms`` maps packed exponent keys to nonzero coefficients.  Use
    :meth:`items` to iterate with exponent tuples.
    """

    __slots__ = ("vars", "order", "_terms", "_base", "_deg")

    def __init__(self, vars: Sequence[str], order: int,
                 terms: Mapping[tuple[int, ...], object] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.vars = vars
        self.order = order
        self._base = _base(order)
        self._deg = None
        packed = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(vars) or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent {exps} for variables {vars}")
            if sum(exps) >= order:
                continue
            c = as_gaussian(c)
            if c:
                k = _pack(exps, self._base)
                packed[k] = packed[k] + c if k in packed else c
                if not packed[k]:
                    del packed[k]
        self._terms = packed

    @classmethod
    def _from_packed(cls, vars, order, packed: dict) -> Series:
        obj = object.__new__(cls)
        obj.vars = vars
        obj.order = order
        obj._base = _base(order)
        obj._terms = packed
        obj._deg = None
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str], order: int) -> Series:
        return cls._from_packed(tuple(vars), order, {})

    @classmethod
    def const(cls, c, vars: Sequence[str], order: int) -> Series:
        c = as_gaussian(c)
        vars = tuple(vars)
        return cls._from_packed(vars, order, {0: c} if c and order > 0 else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str], order: int) -> Series:
        vars = tuple(vars)
        if name not in vars:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, order, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff, vars: Sequence[str], order: int) -> Series:
        vars = tuple(vars)
        e = [0] * len(vars)
        for name, k in exps.items():
            e[vars.index(name)] = k
        return cls(vars, order, {tuple(e): coeff})

    # inspection -----------------------------------------------------------

    def items(self) -> Iterator[tuple[tuple[int, ...], GaussianRational]]:
        n, b = len(self.vars), self._base
        for k, c in self._terms.items():
            yield _unpack(k, n, b), c

    @property
    def terms(self) -> dict[tuple[int, ...], GaussianRational]:
        return dict(self.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Mapping[str, int] | Sequence[int]) -> GaussianRational:
        if isinstance(exps, Mapping):
            e = [0] * len(self.vars)
            for name, k in exps.items():
                e[self.vars.index(name)] = k
            exps = e
        if sum(exps) >= self.order:
            raise ValueError("coefficient requested beyond the truncation order")
        return self._terms.get(_pack(exps, self._base), ZERO)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(0, ZERO)

    def _degrees(self) -> dict[int, int]:
        if self._deg is None:
            n, b = len(self.vars), self._base
            self._deg = {k: sum(_unpack(k, n, b)) for k in self._terms}
        return self._deg

    def valuation(self) -> int | None:
        """Lowest total degree present, ``None`` for the zero series."""
        d = self._degrees()
        return min(d.values()) if d else None

    def degree(self) -> int | None:
        d = self._degrees()
        return max(d.values()) if d else None

    def homogeneous_part(self, k: int) -> Series:
        d = self._degrees()
        return Series._from_packed(self.vars, self.order,
                                   {key: c for key, c in self._terms.items() if d[key] == k})

    def leading_part(self) -> Series:
        """Lowest-degree homogeneous part."""
        v = self.valuation()
        return self if v is None else self.homogeneous_part(v)

    def free_vars(self) -> tuple[str, ...]:
        used = set()
        for e, _ in self.items():
            used.update(i for i, k in enumerate(e) if k)
        return tuple(v for i, v in enumerate(self.vars) if i in used)

    # structural -----------------------------------------------------------

    def _check_compatible(self, other: Series):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        if order == self.order:
            return self
        return Series(self.vars, order, {e: c for e, c in self.items()})

    def embed(self, vars: Sequence[str], rename: Mapping[str, str] | None = None) -> Series:
        """Move into a ring with variables ``vars`` (after optional renaming).

        Every variable that occurs in ``self`` must exist in the new ring.
        """
        rename = rename or {}
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(vars)}
        target = []
        for v in self.vars:
            target.append(pos.get(rename.get(v, v)))
        n = len(vars)
        out = {}
        for e, c in self.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = target[i]
                    if j is None:
                        raise ValueError(f"variable {self.vars[i]!r} missing from target ring")
                    ne[j] += k
            out[tuple(ne)] = c
        return Series(vars, self.order, out)

    def restrict(self, zero_vars: Iterable[str]) -> Series:
        """Set the given variables to zero and drop them from the ring."""
        zero_vars = set(zero_vars)
        keep = [i for i, v in enumerate(self.vars) if v not in zero_vars]
        kill = [i for i, v in enumerate(self.vars) if v in zero_vars]
        out = {}
        for e, c in self.items():
            if all(e[i] == 0 for i in kill):
                out[tuple(e[i] for i in keep)] = c
        return Series(tuple(self.vars[i] for i in keep), self.order, out)

    def conj(self) -> Series:
        """Conjugate every coefficient (variables untouched)."""
        return Series._from_packed(self.vars, self.order,
                                   {k: c.conj() for k, c in self._terms.items()})

    def permute_exponents(self, mapping: Mapping[str, str]) -> Series:
        """Swap variable roles: the exponent of ``v`` moves to ``mapping[v]``."""
        return self.embed(self.vars, {v: mapping.get(v, v) for v in self.vars})

    def evaluate(self, point: Mapping[str, object]) -> GaussianRational:
        """Evaluate the truncation polynomial at a Gaussian-rational point."""
        vals = [as_gaussian(point.get(v, 0)) for v in self.vars]
        powers: list[dict[int, GaussianRational]] = [{0: ONE} for _ in self.vars]
        total = ZERO
        for e, c in self.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i]
                    if k not in p:
                        p[k] = vals[i] ** k
                    term = term * p[k]
            total = total + term
        return total

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> Series:
        if isinstance(other, Series):
            self._check_compatible(other)
            return other
        return Series.const(other, self.vars, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return Series._from_packed(self.vars, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Series._from_packed(self.vars, self.order, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> Series:
        c = as_gaussian(c)
        if not c:
            return Series.zero(self.vars, self.order)
        return Series._from_packed(self.vars, self.order,
                                   {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check_compatible(other)
        return Series._from_packed(self.vars, self.order, self._mul_packed(other, self.order))

    __rmul__ = __mul__

    def _mul_packed(self, other: Series, limit: int) -> dict:
        a, b = self, other
        if len(a._terms) > len(b._terms):
            a, b = b, a
        if not a._terms or not b._terms:
            return {}
        da, db = a._degrees(), b._degrees()
        bl = sorted(((db[k], k, c.re, c.im) for k, c in b._terms.items()), key=lambda t: t[0])
        acc: dict[int, list] = {}
        for ka, ca in a._terms.items():
            room = limit - da[ka]
            if room <= 0:
                continue
            ar, ai = ca.re, ca.im
            for d, kb, br, bi in bl:
                if d >= room:
                    break
                k = ka + kb
                if ai == 0:
                    re_, im_ = ar * br, ar * bi
                elif bi == 0:
                    re_, im_ = ar * br, ai * br
                else:
                    re_, im_ = ar * br - ai * bi, ar * bi + ai * br
                slot = acc.get(k)
                if slot is None:
                    acc[k] = [re_, im_]
                else:
                    slot[0] += re_
                    slot[1] += im_
        return {k: GaussianRational._raw(r, i) for k, (r, i) in acc.items() if r or i}

    def __pow__(self, k: int) -> Series:
        if k < 0:
            return invert_unit(self) ** (-k)
        out = Series.const(1, self.vars, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * invert_unit(other)
        return self.scale(as_gaussian(other).inverse())

    def derive(self, var: str) -> Series:
        """Partial derivative; the result has order ``self.order - 1``."""
        if var not in self.vars:
            raise KeyError(f"unknown variable {var!r}")
        i = self.vars.index(var)
        out = {}
        for e, c in self.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        return Series(self.vars, max(self.order - 1, 0), out)

    def derive_multi(self, exps: Mapping[str, int]) -> Series:
        out = self
        for v, k in exps.items():
            for _ in range(k):
                out = out.derive(v)
        return out

    def compose(self, subs: Mapping[str, Series]) -> Series:
        """Substitute ``subs[v]`` for each variable ``v`` of ``self``.

        All substituted series must share one ring and have zero constant
        term.  Variables of ``self`` that do not occur may be omitted.  The
        result order is the minimum of ``self.order`` and the target order.
        """
        used = self.free_vars()
        missing = [v for v in used if v not in subs]
        if missing:
            raise KeyError(f"no substitution given for {missing}")
        extra = [v for v in subs if v not in self.vars]
        if extra:
            raise KeyError(f"substitution for unknown variables {extra}")
        targets = [subs[v] for v in used]
        if not targets:
            if not subs:
                raise ValueError("cannot infer the target ring of a constant without substitutions")
            ring = next(iter(subs.values()))
            return Series.const(self.constant_term(), ring.vars, min(self.order, ring.order))
        ring_vars = targets[0].vars
        ring_order = targets[0].order
        for s in targets:
            if s.vars != ring_vars:
                raise ValueError("substituted series must share one ring")
            if s.order != ring_order:
                raise ValueError("substituted series must share one truncation order")
            if s.constant_term():
                raise ValueError("substituted series must have zero constant term")
        order = min(self.order, ring_order)
        idx = [self.vars.index(v) for v in used]
        subs_list = [subs[v].truncate(order) if subs[v].order != order else subs[v] for v in used]
        vals = [s.valuation() for s in subs_list]
        powers: list[dict[int, Series]] = [{} for _ in used]

        def power(j: int, k: int) -> Series:
            p = powers[j]
            if k not in p:
                if k == 1:
                    p[1] = subs_list[j]
                else:
                    h = k // 2
                    p[k] = power(j, h) * power(j, k - h)
            return p[k]

        one = Series.const(1, ring_vars, order)
        cache: dict[tuple, Series] = {(): one}
        acc: dict[int, list] = {}
        for e, c in sorted(self.items()):
            low = 0
            zero = False
            sub_e = []
            for j, i in enumerate(idx):
                k = e[i]
                sub_e.append(k)
                if k:
                    if vals[j] is None:
                        zero = True
                        break
                    low += vals[j] * k
            if zero or low >= order:
                continue
            prod = None
            prefix: tuple = ()
            for j, k in enumerate(sub_e):
                prefix = prefix + (k,)
                if k == 0:
                    continue
                hit = cache.get(prefix)
                if hit is None:
                    prev = prod if prod is not None else one
                    hit = prev * power(j, k)
                    cache[prefix] = hit
                prod = hit
            if prod is None:
                prod = one
            for k2, v in prod._terms.items():
                t = v * c
                slot = acc.get(k2)
                if slot is None:
                    acc[k2] = [t.re, t.im]
                else:
                    slot[0] += t.re
                    slot[1] += t.im
        out = {k: GaussianRational._raw(r, i) for k, (r, i) in acc.items() if r or i}
        return Series._from_packed(ring_vars, order, out)

    # comparison and display ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            try:
                other = Series.const(other, self.vars, self.order)
            except TypeError:
                return NotImplemented
        return (self.vars == other.vars and self.order == other.order
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.vars, self.order, frozenset(self._terms.items())))

    def sorted_items(self) -> list[tuple[tuple[int, ...], GaussianRational]]:
        """Terms sorted by degree then reverse-lexicographically on exponents."""
        return sorted(self.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def to_poly(self) -> str:
        """Render in the polynomial grammar understood by :func:`parse_poly`."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_items():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            sign, mag = _split_sign(c)
            if not mono:
                body = format_coefficient(mag)
            elif mag == ONE:
                body = mono
            else:
                body = f"{format_coefficient(mag)}*{mono}"
            if not parts:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append((" - " if sign < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_poly()

    def __repr__(self):
        return f"Series({self.to_poly()!r}, vars={self.vars}, order={self.order})"


def _split_sign(c: GaussianRational) -> tuple[int, GaussianRational]:
    if c.im == 0:
        return (-1, -c) if c.re < 0 else (1, c)
    if c.re == 0:
        return (-1, -c) if c.im < 0 else (1, c)
    return 1, c


def _fmt_q(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_coefficient(c) -> str:
    c = as_gaussian(c)
    if c.im == 0:
        return _fmt_q(c.re)
    imag = "i" if c.im == 1 else ("-i" if c.im == -1 else f"{_fmt_q(c.im)}*i")
    if c.re == 0:
        return imag
    sign = "-" if c.im < 0 else "+"
    mag = abs(c.im)
    imag = "i" if mag == 1 else f"{_fmt_q(mag)}*i"
    return f"({_fmt_q(c.re)}{sign}{imag})"


class SeriesVector(tuple):
    """A tuple of series sharing one ring."""

    def __new__(cls, components: Iterable[Series]):
        comps = tuple(components)
        if comps:
            v, o = comps[0].vars, comps[0].order
            for c in comps[1:]:
                if c.vars != v or c.order != o:
                    raise ValueError("SeriesVector components must share variables and order")
        return super().__new__(cls, comps)

    @property
    def vars(self) -> tuple[str, ...]:
        return self[0].vars

    @property
    def order(self) -> int:
        return self[0].order

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def compose(self, subs: Mapping[str, Series]) -> SeriesVector:
        return SeriesVector(c.compose(subs) for c in self)

    def truncate(self, order: int) -> SeriesVector:
        return SeriesVector(c.truncate(order) for c in self)

    def embed(self, vars, rename=None) -> SeriesVector:
        return SeriesVector(c.embed(vars, rename) for c in self)

    def conj(self) -> SeriesVector:
        return SeriesVector(c.conj() for c in self)

    def __add__(self, other):
        return SeriesVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return SeriesVector(a - b for a, b in zip(self, other, strict=True))


# ---------------------------------------------------------------------------
# units, linear algebra, implicit solving


def invert_unit(f: Series) -> Series:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = f.constant_term()
    if not c0:
        raise ZeroDivisionError("series has zero constant term; not a unit")
    g = Series.const(c0.inverse(), f.vars, f.order)
    two = Series.const(2, f.vars, f.order)
    prec = 1
    while prec < f.order:
        g = g * (two - f * g)
        prec *= 2
    return g


def _gauss(rows: list[list], ncols: int):
    """Row-reduce a copy of ``rows`` over Q(i); returns (reduced, pivots)."""
    m = [[as_gaussian(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return len(_gauss(rows, len(rows[0]))[1])


def solve_linear(a: Sequence[Sequence], b: Sequence) -> list[GaussianRational]:
    """Solve the square system ``a x = b`` over Q(i)."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = _gauss(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular linear system")
    return [red[i][n] for i in range(n)]


def _invert_matrix(a: Sequence[Sequence]) -> list[list[GaussianRational]]:
    n = len(a)
    aug = [list(a[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    red, piv = _gauss(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def series_det(matrix: Sequence[Sequence[Series]]) -> Series:
    """Determinant of a square matrix of series (Laplace expansion with memo)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    ref = matrix[0][0]
    memo: dict[tuple[int, ...], Series] = {}

    def minor(cols: tuple[int, ...]) -> Series:
        row = n - len(cols)
        if len(cols) == 1:
            return matrix[row][cols[0]]
        if cols in memo:
            return memo[cols]
        total = Series.zero(ref.vars, ref.order)
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            sub = minor(cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[cols] = total
        return total

    return minor(tuple(range(n)))


def implicit_solve(F: Sequence[Series], unknowns: Sequence[str],
                   order: int | None = None) -> SeriesVector:
    """Solve ``F(x, y) = 0`` for ``y = y(x)`` with ``y(0) = 0``.

    ``F`` lives in a ring containing the unknowns; the solution lives in the
    ring of the remaining variables.  Each pass of the constant-Jacobian
    Newton step fixes at least one more degree.
    """
    F = SeriesVector(F)
    unknowns = tuple(unknowns)
    if len(F) != len(unknowns):
        raise ValueError("need as many equations as unknowns")
    order = F.order if order is None else min(order, F.order)
    xvars = tuple(v for v in F.vars if v not in unknowns)
    for comp in F:
        if comp.constant_term():
            raise ValueError("F(0, 0) must vanish")
    jac = []
    for comp in F:
        row = []
        for y in unknowns:
            e = {y: 1}
            row.append(comp.coefficient(e) if comp.order > 1 else ZERO)
        jac.append(row)
    try:
        jinv = _invert_matrix(jac)
    except ZeroDivisionError:
        raise ZeroDivisionError("Jacobian in the unknowns is singular at the origin") from None
    ident = {x: Series.var(x, xvars, order) for x in xvars}
    y = [Series.zero(xvars, order) for _ in unknowns]
    for _ in range(order + 1):
        subs = dict(ident)
        subs.update(zip(unknowns, y))
        res = [comp.compose(subs) for comp in F]
        if all(r.is_zero() for r in res):
            return SeriesVector(y)
        y = [y[i] - sum((res[j].scale(jinv[i][j]) for j in range(len(F)) if jinv[i][j]),
                        Series.zero(xvars, order))
             for i in range(len(y))]
    raise ArithmeticError("implicit solve did not converge; inconsistent system")


def minors(n_rows: int, n_cols: int, size: int):
    for rows in combinations(range(n_rows), size):
        for cols in combinations(range(n_cols), size):
            yield rows, cols


# ---------------------------------------------------------------------------
# polynomial grammar


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            ws = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + ws]!r}", line, col0 + pos + ws)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(("end", "", col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, text, vars, order, line, col0):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.vars = tuple(vars)
        self.order = order
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def parse(self) -> Series:
        s = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return s

    def expr(self) -> Series:
        total = Series.zero(self.vars, self.order)
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        while True:
            t = self.term()
            total = total + t if sign > 0 else total - t
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = -1 if tok[1] == "-" else 1
            else:
                return total

    def term(self) -> Series:
        val = self.factor()
        while self.peek() == ("op", "*", self.peek()[2]):
            self.take()
            val = val * self.factor()
        return val

    def power(self, base: Series) -> Series:
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.error("expected an integer exponent", exp_tok)
            return base ** int(exp_tok[1])
        return base

    def factor(self) -> Series:
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            num = int(text)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den_tok = self.take()
                if den_tok[0] != "num":
                    self.error("expected a denominator", den_tok)
                den = int(den_tok[1])
                if den == 0:
                    self.error("zero denominator", den_tok)
                return Series.const(Fraction(num, den), self.vars, self.order)
            return Series.const(num, self.vars, self.order)
        if kind == "name":
            if text == "i":
                base = Series.const(I, self.vars, self.order)
            elif text in self.vars:
                base = Series.var(text, self.vars, self.order)
            else:
                self.error(f"unknown variable {text!r}", tok)
            return self.power(base)
        if kind == "op" and text == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error("expected ')'", close)
            return self.power(inner)
        if kind == "op" and text == "-":
            return -self.factor()
        self.error(f"unexpected token {text!r}" if text else "unexpected end of input", tok)


def parse_poly(text: str, vars: Sequence[str], order: int,
               line: int = 1, col: int = 1) -> Series:
    """Parse a polynomial expression into a :class:`Series`.

    ``line``/``col`` locate ``text`` inside a larger file for error messages.
    """
    if not text.strip():
        raise ParseError("empty expression", line, col)
    return _Parser(text, vars, order, line, col).parse()
