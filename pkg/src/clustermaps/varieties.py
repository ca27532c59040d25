"""Invariant 2D varieties of the family, their charts and restricted maps.

Each fiber of the periodic projection is a 2D variety labelled by a pair
(p, q); the special fiber (1, 1) is invariant under the map itself, every
other fiber under its fourth iterate.  The union of 4-periodic points is a
separate variety, defined for every parameter except r = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import PosReal
from .maps import phi, proj_periodic


class UndefinedForR2(ValueError):
    """The 4-periodic variety does not exist at r = 2 (no periodic points)."""


@dataclass(frozen=True)
class VarietyLabel:
    """Fiber label (p, q) of the periodic projection at parameter r."""

    r: int
    p: object
    q: object

    def __iter__(self):
        return iter((self.p, self.q))


def label_of(r: int, x) -> VarietyLabel:
    p, q = proj_periodic(r, x)
    return VarietyLabel(r, p, q)


def _close(a, b, tol):
    return abs(a - b) <= tol * max(abs(a), abs(b))


def member(lbl: VarietyLabel, x, tol: float = 0.0) -> bool:
    """Is x on the fiber of lbl?  Exact when tol=0, relative tol otherwise."""
    r, p, q = lbl.r, lbl.p, lbl.q
    x1, x2, x3, x4 = x
    lhs1, rhs1 = x3, p * x2
    lhs2, rhs2 = q * x1 * x4, (1 + p**r) * x2**r
    if tol:
        return _close(lhs1, rhs1, tol) and _close(lhs2, rhs2, tol)
    return lhs1 == rhs1 and lhs2 == rhs2


def lambda_of(lbl: VarietyLabel):
    """Multiplier of the restricted fourth-iterate map on the fiber of lbl."""
    r, p, q = lbl.r, lbl.p, lbl.q
    return (1 + p**r) ** 2 * (1 + q**r) ** r / (q**2 * p**r)


def l_function(r: int, x):
    """Pointwise multiplier; constant on each fiber and equal to lambda_of there."""
    x1, x2, x3, x4 = x
    s = x2**r + x3**r
    num = (x1**r * x4**r + s**r) ** r
    den = x1 ** (r * r - 2) * x2**r * x3**r * x4 ** (r * r - 2)
    return num / den


def restricted_bar(r: int, pt):
    """Restriction of the map to the (1,1) fiber, in the (x1, x2) chart."""
    u, v = pt
    return (v, 2 * v**r / u)


def restricted_tilde(r: int, lam, pt):
    """Restriction of the 4th iterate to a fiber, in the (x1, x4) chart."""
    u, v = pt
    m = r * r
    return (lam * v ** (m - 2) / u, lam ** (m - 1) * v ** ((m - 3) * (m - 1)) / u ** (m - 2))


def nth_root_exact(value, n: int):
    """Exact n-th root of a positive scalar; Fraction when possible, else PosReal."""
    if isinstance(value, PosReal):
        return value ** Fraction(1, n)
    root = PosReal.from_rational(value) ** Fraction(1, n)
    return root.to_fraction() if root.is_rational() else root


def embed_c11(r: int, pt):
    """Chart inverse for the (1,1) fiber: (x1, x2) -> 4D point on the fiber."""
    u, v = pt
    return (u, v, v, 2 * v**r / u)


def embed_cpq(r: int, pt, lbl: VarietyLabel):
    """Chart inverse for a generic fiber: (x1, x4) -> 4D point on the fiber.

    The middle coordinate is an r-th root, so the result may need PosReal
    coordinates even for rational chart values.
    """
    u, v = pt
    p, q = lbl.p, lbl.q
    x2 = nth_root_exact(q * u * v / (1 + p**r), r)
    return (u, x2, p * x2, v)


def on_v(r: int, x, tol: float = 0.0) -> bool:
    """Is x on the variety of 4-periodic points (plus the fixed point)?"""
    if r == 2:
        raise UndefinedForR2("no 4-periodic variety at r=2")
    x1, x2, x3, x4 = x
    lhs = x1**r * x2 * x3
    rhs = x1 ** (2 * r) + (x2**r + x3**r) ** r
    if tol:
        return _close(x1, x4, tol) and _close(lhs, rhs, tol)
    return x1 == x4 and lhs == rhs


def v_point(r: int, lbl: VarietyLabel):
    """The 4-periodic point on the fiber of lbl (fixed point of the restriction).

    Chart coordinates are (t, t) with t the (4 - r^2)-th root of the
    multiplier; exact PosReal arithmetic throughout.
    """
    if r == 2:
        raise UndefinedForR2("no 4-periodic points at r=2")
    lam = lambda_of(lbl)
    t = PosReal.from_rational(lam) ** Fraction(1, 4 - r * r)
    return embed_cpq(r, (t, t), lbl)


def v_point_r1_rational(x1: Fraction, x2: Fraction):
    """Rational point on the r=1 variety of 4-periodic points (needs x1*x2 > 1)."""
    if x1 * x2 <= 1:
        raise ValueError("chart requires x1*x2 > 1")
    x3 = (x1**2 + x2) / (x1 * x2 - 1)
    return (x1, x2, x3, x1)


def psi_label(lbl: VarietyLabel) -> VarietyLabel:
    """Label of the image fiber: one step of the 4-cycle (p,q) -> (q, 1/p)."""
    return VarietyLabel(lbl.r, lbl.q, 1 / lbl.p)
