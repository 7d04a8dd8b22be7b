"""Circular complex interval (disc) arithmetic.

Discs are stored as midpoint/radius pairs.  All kernels work on numpy
arrays so that the matrix layer can reuse them entrywise; the scalar
:class:`ComplexDisc` is a thin wrapper over 0-d arrays.

Rounding model: everything is evaluated in IEEE double round-to-nearest.
The radius returned by each kernel bounds both the exact set-theoretic
radius and the rounding error committed on the midpoint, then gets a final
relative inflation and an additive ``ETA`` (smallest normal double) to
absorb the error of the radius computation itself and any underflow.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnrepresentableEnclosure, ZeroInDisc

EPS = float(np.finfo(float).eps)  # 2**-52, twice the unit roundoff
ETA = float(np.finfo(float).tiny)  # realmin, 2**-1022


def upper(x, c=8):
    """Inflate a computed nonnegative quantity so it bounds the exact one.

    ``x`` must carry a relative error below ``(c - 1) * EPS``.
    """
    return x * (1.0 + c * EPS) + ETA


def lower(x, c=8):
    """Downward counterpart of :func:`upper`, clipped at zero."""
    return np.maximum(x * (1.0 - c * EPS) - ETA, 0.0)


def _quiet(fn):
    """Run a kernel with overflow warnings silenced; :func:`checked` reports them."""

    @functools.wraps(fn)
    def wrapper(*args):
        with np.errstate(over="ignore", invalid="ignore"):
            return fn(*args)

    return wrapper


def checked(mid, rad):
    if not (np.all(np.isfinite(mid)) and np.all(np.isfinite(rad))):
        raise UnrepresentableEnclosure("enclosure overflowed to a non-finite value")
    return mid, rad


# -- vectorized kernels ------------------------------------------------------


@_quiet
def add_mr(m1, r1, m2, r2):
    m = m1 + m2
    return checked(m, upper(r1 + r2 + EPS * np.abs(m), 4))


@_quiet
def sub_mr(m1, r1, m2, r2):
    m = m1 - m2
    return checked(m, upper(r1 + r2 + EPS * np.abs(m), 4))


@_quiet
def mul_mr(m1, r1, m2, r2):
    m = m1 * m2
    r = np.abs(m1) * r2 + np.abs(m2) * r1 + r1 * r2 + 2 * EPS * np.abs(m)
    return checked(m, upper(r, 8))


@_quiet
def recip_mr(m, r):
    """Entrywise reciprocal of discs; raises :class:`ZeroInDisc` if 0 may lie inside."""
    m = np.asarray(m)
    r = np.asarray(r, dtype=float)
    am = np.abs(m) * (1.0 + EPS)
    if np.iscomplexobj(m):
        m2 = m.real * m.real + m.imag * m.imag
    else:
        m2 = m * m
    r2 = r * r
    m2_lo = np.maximum(m2 * (1.0 - 2 * EPS) - ETA, 0.0)
    m2_hi = upper(m2, 3)
    r2_lo = lower(r2, 2)
    r2_hi = upper(r2, 3)
    with np.errstate(invalid="ignore"):
        d_lo = (m2_lo - r2_hi) * (1.0 - 2 * EPS)
    if not np.all(d_lo > 0):
        raise ZeroInDisc("disc contains zero (or cannot be separated from it)")
    d_hi = upper(m2_hi - r2_lo, 4)
    d_mid = np.clip(m2 - r2, d_lo, d_hi)
    center = np.conj(m) * (1.0 / d_mid)
    rho = r / d_lo + am * (d_hi - d_lo) / d_lo / d_lo + 2 * EPS * am / d_lo
    return checked(center, upper(rho, 16))


def div_mr(m1, r1, m2, r2):
    im, ir = recip_mr(m2, r2)
    return mul_mr(m1, r1, im, ir)


def mag_mr(m, r):
    return upper(np.abs(m) + r, 4)


def _dist_plus(c, m, r):
    """Upper bound of |c - m| + r, exact when c == m."""
    return np.where(c == m, r, upper(np.abs(c - m) + r, 6))


@_quiet
def hull_mr(m1, r1, m2, r2):
    """Smallest disc (up to rounding slack) containing both operands."""
    m1, r1, m2, r2 = np.broadcast_arrays(*(np.asarray(a) for a in (m1, r1, m2, r2)))
    dtype = np.result_type(m1, m2)
    delta = m2 - m1
    d = np.abs(delta)
    big = 0.5 * (d + r1 + r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = m1 + delta * ((big - r1) / d)
    c = np.where(d + r1 <= r2, m2, c)
    c = np.where(d + r2 <= r1, m1, c)
    c = np.where(d == 0, np.where(r1 >= r2, m1, m2), c).astype(dtype, copy=False)
    rho = np.maximum(_dist_plus(c, m1, r1), _dist_plus(c, m2, r2))
    return checked(c, rho)


def contains_mr(m, r, z):
    """Conservative test z in <m, r>; boundary ties may answer False."""
    return np.where(z == m, True, upper(np.abs(z - m), 4) <= r)


def subset_interior_mr(m1, r1, m2, r2):
    """Conservative test <m1, r1> subset of int <m2, r2>."""
    return _dist_plus(m1, m2, r1) < r2


def rp_mr(m, r):
    am = np.abs(m)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        rel = np.where(am > r, upper(r / am, 6), upper(r, 1))
    return np.where(r == 0, 0.0, np.minimum(rel, 1.0))


# -- scalar disc -------------------------------------------------------------


@dataclass(frozen=True)
class ComplexDisc:
    """The closed disc {z : |z - mid| <= rad}."""

    mid: complex
    rad: float = 0.0

    def __post_init__(self):
        mid = complex(self.mid)
        rad = float(self.rad)
        if not (math.isfinite(mid.real) and math.isfinite(mid.imag)):
            raise UnrepresentableEnclosure(f"non-finite midpoint {mid!r}")
        if not math.isfinite(rad) or rad < 0:
            raise UnrepresentableEnclosure(f"invalid radius {rad!r}")
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "rad", rad)

    @classmethod
    def _wrap(cls, pair):
        m, r = pair
        return cls(complex(m), float(r))

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexDisc):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return ComplexDisc(complex(other), 0.0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return disc_div(other, self)

    def __neg__(self):
        return ComplexDisc(-self.mid, self.rad)

    def __contains__(self, z):
        return disc_contains(self, z)


def disc_add(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc:
    return ComplexDisc._wrap(add_mr(x.mid, x.rad, y.mid, y.rad))


def disc_sub(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc:
    return ComplexDisc._wrap(sub_mr(x.mid, x.rad, y.mid, y.rad))


def disc_mul(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc:
    return ComplexDisc._wrap(mul_mr(x.mid, x.rad, y.mid, y.rad))


def disc_recip(x: ComplexDisc) -> ComplexDisc:
    return ComplexDisc._wrap(recip_mr(np.complex128(x.mid), x.rad))


def disc_div(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc:
    return disc_mul(x, disc_recip(y))


def disc_mag(x: ComplexDisc) -> float:
    return float(mag_mr(x.mid, x.rad))


def disc_rp(x: ComplexDisc) -> float:
    """Relative precision min(relerr, 1), rounded upward."""
    return float(rp_mr(x.mid, x.rad))


def disc_hull(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc:
    return ComplexDisc._wrap(hull_mr(x.mid, x.rad, y.mid, y.rad))


def disc_contains(x: ComplexDisc, z) -> bool:
    return bool(contains_mr(x.mid, x.rad, complex(z)))


def disc_subset_interior(x: ComplexDisc, y: ComplexDisc) -> bool:
    return bool(subset_interior_mr(x.mid, x.rad, y.mid, y.rad))


def _sqrt_up(q: Fraction) -> float:
    s = math.sqrt(float(q))
    while Fraction(s) ** 2 < q:
        s = math.nextafter(s, math.inf)
    return s


def disc_intersect(x: ComplexDisc, y: ComplexDisc) -> ComplexDisc | None:
    """A disc containing x and y's intersection, or None when they are disjoint.

    Decisions are made in exact rational arithmetic.  When neither disc
    contains the other, the candidate is a disc centred near the common chord
    whose radius is bounded exactly; the smaller operand is returned if that
    is tighter.
    """
    mx = (Fraction(x.mid.real), Fraction(x.mid.imag))
    my = (Fraction(y.mid.real), Fraction(y.mid.imag))
    r1, r2 = Fraction(x.rad), Fraction(y.rad)
    dx, dy = my[0] - mx[0], my[1] - mx[1]
    d2 = dx * dx + dy * dy
    if d2 > (r1 + r2) ** 2:
        return None
    small, big = (x, y) if x.rad <= y.rad else (y, x)
    if d2 <= (Fraction(big.rad) - Fraction(small.rad)) ** 2:
        return small
    # Both boundaries cross.  a*d is the signed distance from x.mid to the
    # radical line, times d.
    ad = (d2 + r1 * r1 - r2 * r2) / 2
    frac = float(ad / d2)
    if not 0.0 <= frac <= 1.0:
        return small
    c = x.mid + (y.mid - x.mid) * frac
    wx, wy = Fraction(c.real) - mx[0], Fraction(c.imag) - mx[1]
    t = wx * dx + wy * dy  # t0 * d
    s = dx * wy - dy * wx  # perpendicular offset * d
    if not 0 <= t <= d2:
        return small
    along = r1 * r1 + (t * t - 2 * ad * t) / d2
    if along < 0:
        return small
    rho = _sqrt_up(along) + _sqrt_up(s * s / d2)
    rho = math.nextafter(rho, math.inf)
    if rho >= small.rad:
        return small
    return ComplexDisc(c, rho)
