"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored as an integer numerator vector over the power basis
``1, zeta, ..., zeta^(phi(N)-1)`` together with a positive common
denominator, always kept in lowest terms.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence, Union

import mpmath
import numpy as np
from sympy import Poly, cyclotomic_poly, symbols, totient

Rational = Union[int, Fraction]

MAX_ORDER = 2400


class _Field:
    """Per-order tables: reduction of ``zeta^k`` and float embeddings."""

    def __init__(self, order: int) -> None:
        x = symbols("x")
        coeffs = [int(c) for c in Poly(cyclotomic_poly(order, x), x).all_coeffs()]
        self.order = order
        self.degree = d = int(totient(order))
        monic = coeffs[::-1]  # ascending, leading coefficient 1
        # rows: zeta^k reduced, for 0 <= k < order
        rows = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(order):
            rows.append(tuple(cur))
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                nxt = [nxt[j] - top * monic[j] for j in range(d)]
            cur = nxt
        self.powers = rows
        self.reduce_matrix = np.array(rows[: 2 * d - 1], dtype=np.int64)
        rmax = int(np.abs(self.reduce_matrix).max())
        # largest |a|*|b| for which the int64 product path cannot overflow
        self.safe_product = (2**62) // (max(1, 2 * d * d * rmax))
        self.cos = [math.cos(2 * math.pi * k / order) for k in range(d)]
        self.sin = [math.sin(2 * math.pi * k / order) for k in range(d)]
        conj = [rows[(order - k) % order] for k in range(d)]
        self.conj_matrix = conj


@lru_cache(maxsize=None)
def field(order: int) -> _Field:
    if order < 1:
        raise ValueError("cyclotomic order must be positive")
    if order > MAX_ORDER:
        raise OverflowError(f"cyclotomic order {order} exceeds the supported bound {MAX_ORDER}")
    return _Field(order)


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num, den = [-c for c in num], -den
    g = reduce(math.gcd, num, den)
    if g > 1:
        num, den = [c // g for c in num], den // g
    return tuple(int(c) for c in num), int(den)


class CyclotomicNumber:
    """Immutable element of Q(zeta_order)."""

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, num: Sequence[int], den: int = 1) -> None:
        f = field(order)
        if len(num) != f.degree:
            raise ValueError(f"expected {f.degree} coefficients for order {order}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.order = order
        self.num, self.den = _normalize(num, den)
        self._hash = None

    # constructors -----------------------------------------------------------
    @classmethod
    def from_rational(cls, order: int, q: Rational) -> "CyclotomicNumber":
        q = Fraction(q)
        d = field(order).degree
        return cls(order, [q.numerator] + [0] * (d - 1), q.denominator)

    @classmethod
    def from_coeffs(cls, order: int, coeffs: Sequence[Rational]) -> "CyclotomicNumber":
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lambda u, v: u * v // math.gcd(u, v), (c.denominator for c in fr), 1)
        return cls(order, [int(c * den) for c in fr], den)

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "CyclotomicNumber":
        return cls(order, field(order).powers[k % order])

    @classmethod
    def cos_pi(cls, order: int, p: int, q: int) -> "CyclotomicNumber":
        """``cos(p*pi/q)``; requires ``2q | order``."""
        k = _angle_index(order, p, q)
        return (cls.zeta(order, k) + cls.zeta(order, -k)) * Fraction(1, 2)

    @classmethod
    def sin_pi(cls, order: int, p: int, q: int) -> "CyclotomicNumber":
        """``sin(p*pi/q)``; requires ``2q | order`` and ``4 | order``."""
        if order % 4:
            raise ValueError("sin needs the fourth roots of unity")
        k = _angle_index(order, p, q)
        i = cls.zeta(order, order // 4)
        return (cls.zeta(order, k) - cls.zeta(order, -k)) * i * Fraction(-1, 2)

    @classmethod
    def sqrt(cls, order: int, n: int) -> "CyclotomicNumber":
        """Positive square root of 2, 3 or 5 (the ones built from cosines)."""
        if n == 2:
            return cls.cos_pi(order, 1, 4) * 2
        if n == 3:
            return cls.cos_pi(order, 1, 6) * 2
        if n == 5:
            return cls.cos_pi(order, 1, 5) * 4 - 1
        raise ValueError("only sqrt(2), sqrt(3), sqrt(5) are provided")

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(f"mixed cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return CyclotomicNumber(self.order, [u + v for u, v in zip(self.num, o.num)], self.den)
        return CyclotomicNumber(
            self.order, [u * o.den + v * self.den for u, v in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.order, [-u for u in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber(self.order, [u * q.numerator for u in self.num], self.den * q.denominator)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.order, _poly_mul(self.order, self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "CyclotomicNumber":
        if n < 0:
            return self.inverse() ** (-n)
        out = CyclotomicNumber.from_rational(self.order, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse by solving the multiplication-matrix system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = field(self.order)
        d = f.degree
        cols = []
        for k in range(d):
            basis = [0] * d
            basis[k] = 1
            cols.append(_poly_mul(self.order, self.num, basis))
        mat = [[Fraction(cols[c][r]) for c in range(d)] + [Fraction(1 if r == 0 else 0)] for r in range(d)]
        sol = _solve(mat, d)
        return CyclotomicNumber.from_coeffs(self.order, [s * self.den for s in sol])

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugate (zeta -> zeta^-1)."""
        f = field(self.order)
        acc = [0] * f.degree
        for c, row in zip(self.num, f.conj_matrix):
            if c:
                for j, r in enumerate(row):
                    if r:
                        acc[j] += c * r
        return CyclotomicNumber(self.order, acc, self.den)

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    def __complex__(self) -> complex:
        f = field(self.order)
        re = sum(c * f.cos[k] for k, c in enumerate(self.num) if c)
        im = sum(c * f.sin[k] for k, c in enumerate(self.num) if c)
        return complex(re / self.den, im / self.den)

    def __float__(self) -> float:
        return complex(self).real

    def sign(self) -> int:
        """Sign of a real element: -1, 0 or 1 (exact zero test, float otherwise)."""
        if self.is_zero():
            return 0
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        v = float(self)
        if abs(v) > 1e-9:
            return 1 if v > 0 else -1
        with mpmath.workdps(60):
            acc = mpmath.mpf(0)
            for k, c in enumerate(self.num):
                if c:
                    acc += c * mpmath.cos(2 * mpmath.pi * k / self.order)
            if acc == 0:
                raise ArithmeticError("sign undecided at 60 digits")
            return 1 if acc > 0 else -1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.order == other.order and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.num, self.den))
        return self._hash

    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs()

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CyclotomicNumber({self.order}, {Fraction(self.num[0], self.den)})"
        z = complex(self)
        return f"CyclotomicNumber({self.order}, ~{z.real:.6g}{z.imag:+.6g}i)"


def _angle_index(order: int, p: int, q: int) -> int:
    if (p * order) % (2 * q):
        raise ValueError(f"angle {p}*pi/{q} not available at order {order}")
    return (p * order) // (2 * q)


def _poly_mul(order: int, u: Sequence[int], v: Sequence[int]) -> list[int]:
    f = field(order)
    mu = max((abs(c) for c in u), default=0)
    mv = max((abs(c) for c in v), default=0)
    if mu == 0 or mv == 0:
        return [0] * f.degree
    if mu * mv <= f.safe_product:
        conv = np.convolve(np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64))
        return [int(c) for c in conv @ f.reduce_matrix]
    conv = [0] * (2 * f.degree - 1)
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                if y:
                    conv[i + j] += x * y
    out = [0] * f.degree
    for k, c in enumerate(conv):
        if c:
            for j, r in enumerate(f.powers[k]):
                if r:
                    out[j] += c * r
    return out


def _solve(mat: list[list[Fraction]], n: int) -> list[Fraction]:
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        p = mat[col][col]
        mat[col] = [x / p for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                fct = mat[r][col]
                mat[r] = [x - fct * y for x, y in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


def group_field_order(kind: str, n: int | None = None) -> int:
    """Cyclotomic order used for a group realization."""
    if kind == "D":
        assert n is not None
        return math.lcm(120, 4 * n)
    return 120
