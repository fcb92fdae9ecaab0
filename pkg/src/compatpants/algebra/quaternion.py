"""Exact quaternions and SO(3) rotations as sign classes of unit quaternions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CyclotomicNumber


@dataclass(frozen=True)
class Quaternion:
    w: CyclotomicNumber
    x: CyclotomicNumber
    y: CyclotomicNumber
    z: CyclotomicNumber

    @classmethod
    def from_parts(cls, order: int, w=0, x=0, y=0, z=0) -> "Quaternion":
        def lift(v):
            return v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.from_rational(order, v)

        return cls(lift(w), lift(x), lift(y), lift(z))

    @classmethod
    def one(cls, order: int) -> "Quaternion":
        return cls.from_parts(order, 1)

    @property
    def order(self) -> int:
        return self.w.order

    def parts(self) -> tuple[CyclotomicNumber, ...]:
        return (self.w, self.x, self.y, self.z)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.parts()
        a2, b2, c2, d2 = o.parts()
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> CyclotomicNumber:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 1:
            return self.conjugate()
        ninv = n.inverse()
        c = self.conjugate()
        return Quaternion(c.w * ninv, c.x * ninv, c.y * ninv, c.z * ninv)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_pure(self) -> bool:
        return self.w.is_zero()

    def real_part(self) -> CyclotomicNumber:
        return self.w

    def trace(self) -> CyclotomicNumber:
        """Trace of the corresponding 2x2 SU(2) matrix."""
        return self.w * 2

    def sort_key(self) -> tuple:
        return tuple(p.sort_key() for p in self.parts())

    def approx(self) -> tuple[float, float, float, float]:
        return tuple(float(p) for p in self.parts())

    def coefficient_strings(self) -> list[list[str]]:
        return [[str(c) for c in p.coeffs()] for p in self.parts()]

    @classmethod
    def from_coefficient_strings(cls, order: int, data) -> "Quaternion":
        if len(data) != 4:
            raise ValueError("quaternion needs four components")
        parts = [CyclotomicNumber.from_coeffs(order, [Fraction(s) for s in comp]) for comp in data]
        return cls(*parts)

    def __repr__(self) -> str:
        w, x, y, z = self.approx()
        return f"Quaternion(~{w:.4g}, {x:.4g}, {y:.4g}, {z:.4g})"


def canonical_sign(q: Quaternion) -> Quaternion:
    """Representative of ``{q, -q}`` whose first nonzero coefficient is positive."""
    for p in q.parts():
        if not p.is_zero():
            return q if p.sign() > 0 else -q
    raise ValueError("zero quaternion has no sign class")


@dataclass(frozen=True)
class RotationElement:
    """An element of SO(3), stored as the canonical unit quaternion of its class."""

    rep: Quaternion

    def __post_init__(self) -> None:
        object.__setattr__(self, "rep", canonical_sign(self.rep))

    def __mul__(self, o: "RotationElement") -> "RotationElement":
        return RotationElement(self.rep * o.rep)

    def inverse(self) -> "RotationElement":
        return RotationElement(self.rep.conjugate())

    def lifts(self) -> tuple[Quaternion, Quaternion]:
        return (self.rep, -self.rep)

    def sort_key(self) -> tuple:
        return self.rep.sort_key()

    @property
    def order(self) -> int:
        return self.rep.order

    def __repr__(self) -> str:
        w, x, y, z = self.rep.approx()
        return f"Rotation(~{w:.4g}, {x:.4g}, {y:.4g}, {z:.4g})"


def project(q: Quaternion) -> RotationElement:
    return RotationElement(q)
