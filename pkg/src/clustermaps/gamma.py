"""The group of positive monomial plane maps and its normal forms.

A monomial map sends (x, y) to (alpha x^a y^b, beta x^c y^d) with integer
exponents and positive coefficients.  Under coordinate-wise log it becomes
the affine map u -> M u + v, so determinant-1 maps form a group isomorphic
to SL(2,Z) x| R^2.  Up to conjugacy every such map with b or c nonzero
reduces to the trace form (y, y^k/x) when the trace k != 2, and to the
parabolic form (y, xi y^2/x) when the trace is 2; the conjugators are
again monomial and are returned exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import MAX_SIGN_BITS, PosReal, as_posreal


class UnsupportedK(ValueError):
    """Trace outside the classified range (k = 2 or k <= -2)."""


class EmptyLevelSet(ValueError):
    """No real points of the requested level set in the sampled window."""


@dataclass(frozen=True)
class MonomialMap:
    """(x, y) -> (alpha x^a y^b, beta x^c y^d), exponents integer."""

    a: int
    b: int
    c: int
    d: int
    alpha: PosReal
    beta: PosReal

    @staticmethod
    def make(a, b, c, d, alpha=1, beta=1) -> "MonomialMap":
        return MonomialMap(a, b, c, d, as_posreal(alpha), as_posreal(beta))

    @staticmethod
    def identity() -> "MonomialMap":
        return MonomialMap.make(1, 0, 0, 1)

    @staticmethod
    def swap() -> "MonomialMap":
        return MonomialMap.make(0, 1, 1, 0)

    @staticmethod
    def scaling(s) -> "MonomialMap":
        return MonomialMap.make(1, 0, 0, 1, s, s)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def __call__(self, p):
        """Apply to a point; exact for PosReal/Fraction coords, float for floats."""
        x, y = p
        if isinstance(x, float) or isinstance(y, float):
            return (
                float(self.alpha) * x**self.a * y**self.b,
                float(self.beta) * x**self.c * y**self.d,
            )
        return (
            self.alpha * x**self.a * y**self.b,
            self.beta * x**self.c * y**self.d,
        )

    def compose(self, other: "MonomialMap") -> "MonomialMap":
        """self after other; matrices multiply, coefficients twist."""
        f, g = self, other
        return MonomialMap(
            f.a * g.a + f.b * g.c,
            f.a * g.b + f.b * g.d,
            f.c * g.a + f.d * g.c,
            f.c * g.b + f.d * g.d,
            f.alpha * g.alpha**f.a * g.beta**f.b,
            f.beta * g.alpha**f.c * g.beta**f.d,
        )

    def inverse(self) -> "MonomialMap":
        """Group inverse; requires det = +-1 to stay monomial over Z."""
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"det {det} map has no monomial inverse over Z")
        a, b, c, d = self.d * det, -self.b * det, -self.c * det, self.a * det
        alpha = (self.alpha**a * self.beta**b) ** -1
        beta = (self.alpha**c * self.beta**d) ** -1
        return MonomialMap(a, b, c, d, alpha, beta)

    def iterate(self, p, n: int):
        for _ in range(n):
            p = self(p)
        return p


def gamma_element(a, b, c, d, alpha=1, beta=1) -> MonomialMap:
    """A group element proper: determinant must be 1."""
    f = MonomialMap.make(a, b, c, d, alpha, beta)
    if f.det != 1:
        raise ValueError(f"determinant must be 1, got {f.det}")
    return f


def compose(f: MonomialMap, g: MonomialMap) -> MonomialMap:
    return f.compose(g)


def apply(f: MonomialMap, p):
    return f(p)


def to_affine_log(f: MonomialMap, bits: int = 53):
    """Image (M, v) of the map under the log isomorphism, v in floats."""
    return f.matrix, (
        float(f.alpha.log_mpf(bits)),
        float(f.beta.log_mpf(bits)),
    )


# === normal forms =============================================================

def trace_form(k: int) -> MonomialMap:
    """(x, y) -> (y, y^k/x): the normal form with trace k."""
    return MonomialMap.make(0, 1, -1, k)


def parabolic_form(xi) -> MonomialMap:
    """(x, y) -> (y, xi y^2/x): the trace-2 normal form."""
    return MonomialMap.make(0, 1, -1, 2, 1, xi)


@dataclass(frozen=True)
class NormalForm:
    """Conjugacy representative: trace form, parabolic form, or a torus map."""

    kind: str  # "trace" | "parabolic" | "torus"
    k: int | None = None
    xi: PosReal | None = None
    sign: int | None = None
    alpha: PosReal | None = None
    beta: PosReal | None = None

    def as_map(self) -> MonomialMap:
        if self.kind == "trace":
            return trace_form(self.k)
        if self.kind == "parabolic":
            return parabolic_form(self.xi)
        return MonomialMap.make(self.sign, 0, 0, self.sign, self.alpha, self.beta)


def normal_form(f: MonomialMap) -> tuple[NormalForm, MonomialMap]:
    """Normal form of a determinant-1 monomial map, with an exact conjugator.

    Returns (nf, h) with h o f = nf.as_map() o h.  The conjugator h is a
    monomial map with rational-power coefficients; its exponent matrix has
    determinant -c (or -b after a swap), so it lies in the wider monomial
    group rather than in the determinant-1 group itself.
    """
    if f.det != 1:
        raise ValueError("normal forms are defined for determinant-1 maps")
    if f.b == 0 and f.c == 0:
        # a = d = +-1: torus map, already normal
        sign = f.a
        nf = NormalForm(kind="torus", sign=sign, alpha=f.alpha, beta=f.beta)
        return nf, MonomialMap.identity()
    if f.c == 0:
        # swap x and y to move b into the c slot
        sigma = MonomialMap.swap()
        nf, h = normal_form(sigma.compose(f).compose(sigma))
        return nf, h.compose(sigma)
    k = f.trace
    # pi(x, y) = (y^a x^-c, beta^a alpha^-c y) conjugates f to (y, K y^k / x)
    scale = f.beta**f.a * f.alpha**-f.c
    pi = MonomialMap(-f.c, f.a, 0, 1, PosReal.one(), scale)
    K = f.beta * scale ** (1 - k)
    if k == 2:
        return NormalForm(kind="parabolic", xi=K), pi
    # a further scaling by K^(1/(k-2)) removes the coefficient
    s = K ** Fraction(1, k - 2)
    return NormalForm(kind="trace", k=k), MonomialMap.scaling(s).compose(pi)


# === first integral of the trace forms =======================================

def first_integral(k: int, p, bits: int = 53) -> float:
    """log^2 x - k log x log y + log^2 y, invariant under the trace-k form."""
    u, v = (_log_float(c, bits) for c in p)
    return u * u - k * u * v + v * v


def _log_float(c, bits: int = 53) -> float:
    if isinstance(c, PosReal):
        return float(c.log_mpf(bits))
    if isinstance(c, Fraction):
        return math.log(c.numerator) - math.log(c.denominator)
    return math.log(c)


def integral_sign(k: int, x: PosReal, y: PosReal, max_bits: int = MAX_SIGN_BITS):
    """Exact sign of the first integral at an exact point, or None.

    With u = log x and v = log y the integral is u^2 - k u v + v^2.  When
    the exponent vectors of x and y are proportional the sign reduces to a
    rational computation; otherwise a certified interval evaluation is
    refined until it excludes zero.  None means the precision cap was hit
    (possible only on the measure-zero zero set).
    """
    xe, ye = x.exponents, y.exponents
    if not xe and not ye:
        return 0
    if not xe or not ye:
        return 1  # one log vanishes, the other does not: u^2 + v^2 > 0
    t = _proportionality(xe, ye)
    if t is not None:
        # v = t u exactly: sign of u^2 (1 - k t + t^2)
        value = 1 - k * t + t * t
        return (value > 0) - (value < 0)
    bits = 64
    while True:
        old = mpmath.iv.prec
        mpmath.iv.prec = bits
        try:
            u = x.log_iv()
            v = y.log_iv()
            total = u * u - k * u * v + v * v
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
        finally:
            mpmath.iv.prec = old
        if bits >= max_bits:
            return None
        bits *= 2


def _proportionality(xe: dict, ye: dict):
    """Rational t with ye = t * xe, or None."""
    if set(xe) != set(ye):
        return None
    ratios = {ye[p] / xe[p] for p in xe}
    if len(ratios) == 1:
        return ratios.pop()
    return None


# === dynamics of the normal forms ============================================

@dataclass(frozen=True)
class PlaneClass:
    """Fate of an orbit of a plane normal form."""

    kind: str  # periodic | converges-to-fixed | converges-to-origin |
    #            diverges | line-of-fixed-points | undecidable
    period: int | None = None


PERIODIC_1 = PlaneClass("periodic", period=1)
TO_FIXED = PlaneClass("converges-to-fixed")
TO_ORIGIN = PlaneClass("converges-to-origin")
DIVERGES = PlaneClass("diverges")
LINE_OF_FIXED = PlaneClass("line-of-fixed-points")
UNDECIDABLE = PlaneClass("undecidable")

_GLOBAL_PERIODS = {-1: 3, 0: 4, 1: 6}


def _at_fixed_point(p) -> bool:
    x, y = p
    return x == 1 and y == 1


def classify_trace_form(k: int, p) -> PlaneClass:
    """Orbit fate of the trace-k form at an exact positive point.

    k in {-1, 0, 1} is globally periodic; k > 2 splits the plane into a
    basin of the fixed point (zero set of the integral, on the expanding
    side), a basin of the origin, and divergence elsewhere.  Boundary
    membership is decided by exact signs; when the sign decision hits its
    precision cap and the fate depends on it, the verdict is undecidable.
    """
    if k == 2 or k <= -2:
        raise UnsupportedK(f"trace {k} dynamics not classified")
    if k in _GLOBAL_PERIODS:
        if _at_fixed_point(p):
            return PERIODIC_1
        return PlaneClass("periodic", period=_GLOBAL_PERIODS[k])
    if _at_fixed_point(p):
        return TO_FIXED
    x, y = (as_posreal(c) for c in p)
    cx = x.cmp_one()
    cxy = (x / y).cmp_one()
    sign = integral_sign(k, x, y)
    if sign is not None:
        return _trace_fate(sign, cx, cxy)
    fates = {_trace_fate(s, cx, cxy) for s in (-1, 0, 1)}
    return fates.pop() if len(fates) == 1 else UNDECIDABLE


def _trace_fate(sign: int, cx: int, cxy: int) -> PlaneClass:
    if sign == 0 and ((cx < 0 and cxy < 0) or (cx > 0 and cxy > 0)):
        return TO_FIXED
    in_origin_basin = (
        (sign < 0 and cx < 0)
        or (sign == 0 and cx < 0 and cxy > 0)
        or (sign > 0 and cxy > 0)
    )
    return TO_ORIGIN if in_origin_basin else DIVERGES


def parabolic_iterate(xi, n: int, p):
    """Closed-form n-th iterate of the parabolic form, exact."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x, y = p
    xi = as_posreal(xi) if not isinstance(xi, (int, Fraction)) else xi
    lead = xi ** (n * (n - 1) // 2) if n else 1
    ratio = (y / x) ** n
    return (lead * ratio * x, lead * ratio * xi**n * y)


def classify_parabolic(xi, p) -> PlaneClass:
    """Orbit fate of the parabolic form: trichotomy on the coefficient."""
    side = as_posreal(xi).cmp_one()
    if side < 0:
        return TO_ORIGIN
    if side > 0:
        return DIVERGES
    x, y = (as_posreal(c) for c in p)
    cyx = (y / x).cmp_one()
    if cyx == 0:
        return LINE_OF_FIXED
    return TO_ORIGIN if cyx < 0 else DIVERGES


def reversing_symmetry_holds(f: MonomialMap, p) -> bool:
    """Check R o f o R = f^-1 at a point, exactly, with R the swap."""
    sigma = MonomialMap.swap()
    lhs = sigma(f(sigma(p)))
    rhs = f.inverse()(p)
    return lhs[0] == rhs[0] and lhs[1] == rhs[1]


# === level sets of the first integral ========================================

def level_set_points(k: int, value: float, n: int, log_x_range=(-2.0, 2.0), tol=1e-9):
    """n points (x, y) on {first integral = value}, for plotting.

    Solves the quadratic in log y for log x sampled over the window;
    raises EmptyLevelSet when no sample admits a real solution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = log_x_range
    points = []
    samples = max(2 * n, 64)
    for i in range(samples):
        u = lo + (hi - lo) * i / (samples - 1)
        disc = (k * k - 4) * u * u + 4 * value
        if disc < 0:
            continue
        root = math.sqrt(disc)
        for v in ((k * u + root) / 2, (k * u - root) / 2):
            x, y = math.exp(u), math.exp(v)
            if abs(first_integral(k, (x, y)) - value) < tol:
                points.append((x, y))
        if len(points) >= n:
            break
    if not points:
        raise EmptyLevelSet(f"no points of level {value} for k={k} in {log_x_range}")
    return points[:n]
