"""The 4D cluster maps, their plane reductions, and exact iteration.

Every map here is generic over the scalar type of the point: exact mode
uses ``Fraction`` (or ``PosReal`` when coordinates are irrational), float
mode uses ``float`` or ``mpmath.mpf``.  All maps preserve positivity.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_BIT_BUDGET = 10**6


class SizeExceeded(ArithmeticError):
    """Exact orbit grew past the bit budget (likely non-periodic)."""

    def __init__(self, step: int, bits: int):
        super().__init__(f"coordinate size {bits} bits at step {step}")
        self.step = step
        self.bits = bits


def exact_point(coords):
    """Coerce a coordinate sequence to a tuple of positive Fractions."""
    pt = tuple(Fraction(c) for c in coords)
    if any(c <= 0 for c in pt):
        raise ValueError(f"coordinates must be positive, got {pt}")
    return pt


def phi(r: int, p):
    """One step of the 4D family map."""
    x1, x2, x3, x4 = p
    s = x2**r + x3**r
    return (x3, x4, s / x1, (x1**r * x4**r + s**r) / (x1**r * x2))


def _bit_size(c) -> int:
    if isinstance(c, Fraction):
        return max(c.numerator.bit_length(), c.denominator.bit_length())
    if isinstance(c, int):
        return c.bit_length()
    return 0


def phi_iter(r: int, p, n: int, bit_budget: int = DEFAULT_BIT_BUDGET):
    """Orbit segment [p, phi(p), ..., phi^n(p)].

    Raises SizeExceeded once any rational coordinate outgrows
    ``bit_budget`` bits, which in exact mode signals a non-periodic orbit.
    """
    orbit = [tuple(p)]
    for k in range(n):
        p = phi(r, p)
        bits = max(_bit_size(c) for c in p)
        if bits > bit_budget:
            raise SizeExceeded(k + 1, bits)
        orbit.append(p)
    return orbit


def psi(p):
    """The globally 4-periodic plane map (x, y) -> (y, 1/x)."""
    x, y = p
    return (y, 1 / x)


def hat_phi(r: int, p):
    """The reduced plane map conjugate to psi."""
    x, y = p
    t = 1 + y**r
    return (y * (x**r + t**r) / x**r, t / x)


def proj_reduced(r: int, p):
    """Projection 4D -> 2D intertwining phi with hat_phi."""
    x1, x2, x3, x4 = p
    return (x1 * x4 / x2**r, x3 / x2)


def proj_periodic(r: int, p):
    """Projection 4D -> 2D intertwining phi with psi; equals hat_to_psi o proj_reduced."""
    x1, x2, x3, x4 = p
    return (x3 / x2, (x2**r + x3**r) / (x1 * x4))


def hat_to_psi(r: int, p):
    """Plane homeomorphism conjugating hat_phi to psi."""
    x, y = p
    return (y, (1 + y**r) / x)


def hat_to_psi_inv(r: int, p):
    u, v = p
    return ((1 + u**r) / v, u)
