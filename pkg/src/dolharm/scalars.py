"""Scalar backends for the form algebra.

Two interchangeable scalar kinds flow through every computation:

* :class:`QI` -- complex numbers with rational real and imaginary parts
  (Gaussian rationals).  This is the exact backend; all catalog structure
  constants, coframes and metric data are rational, so whole decisions run
  without any rounding.
* builtin ``complex`` -- the floating backend.

Both support ``+``, ``-``, ``*``, ``/``, unary ``-``, ``conjugate()`` and
truthiness (nonzero test), which is everything the generic form code uses.
Mixing the two raises ``TypeError`` on purpose: a float leaking into an
exact computation is a bug, not a convenience.

:class:`RootExt` adjoins square roots of up to two positive rationals to
``QI``.  It exists only for the code paths where a frame change genuinely
involves such roots (the orthonormalizing coframe attached to a metric), so
that even those round trips can be checked exactly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rationalish = Union[int, str, Fraction]


def as_fraction(x: Rationalish) -> Fraction:
    """Parse an exact rational; accepts int, Fraction, "p/q" and decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a nonnegative rational, or None when it is irrational."""
    if x < 0:
        raise ValueError("exact_sqrt of a negative rational")
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class QI:
    """Gaussian rational ``re + im*i`` with :class:`Fraction` components."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rationalish = 0, im: Rationalish = 0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @staticmethod
    def of(value) -> "QI":
        if isinstance(value, QI):
            return value
        if isinstance(value, (int, str, Fraction)):
            return QI(value)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def _coerced(self, other) -> "QI | None":
        if isinstance(other, QI):
            return other
        if isinstance(other, (int, Fraction)):
            return QI(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return QI(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * o.re + self.im * o.im) / d,
                  (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return self.to_complex()

    def __repr__(self) -> str:
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imtxt = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{imtxt}"


QI_ZERO = QI(0)
QI_ONE = QI(1)
QI_I = QI(0, 1)


def qi(re: Rationalish = 0, im: Rationalish = 0) -> QI:
    return QI(re, im)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (QI, RootExt))


def to_complex(x) -> complex:
    if isinstance(x, (QI, RootExt)):
        return x.to_complex()
    return complex(x)


def conj(x):
    return x.conjugate()


def magnitude(x) -> float:
    """Floating magnitude, for pivot selection only (never affects exactness)."""
    return abs(to_complex(x))


class RootExt:
    """Element ``a + b*rho + c*sig + d*rho*sig`` of QI(rho, sig), rho=sqrt(R), sig=sqrt(S).

    R and S are positive rationals.  Construction normalizes: a radical whose
    square is a perfect rational square is folded away, and when S/R is a
    perfect square sig is rewritten as a rational multiple of rho.  After
    normalization the active radicals generate a genuine field extension, so
    division is always well defined.
    """

    __slots__ = ("parts", "rad")

    def __init__(self, parts, rad):
        # parts: 4-tuple of QI for grades (1, rho, sig, rho*sig); use make().
        self.parts = tuple(parts)
        self.rad = tuple(rad)

    @staticmethod
    def make(parts, rad) -> "RootExt":
        a, b, c, d = (QI.of(p) for p in parts)
        R, S = (as_fraction(v) for v in rad)
        if R <= 0 or S <= 0:
            raise ValueError("radicands must be positive")
        sr = exact_sqrt(R)
        if sr is not None:
            a, b = a + b * sr, QI_ZERO
            c, d = c + d * sr, QI_ZERO
        ss = exact_sqrt(S)
        if ss is not None:
            a, c = a + c * ss, QI_ZERO
            b, d = b + d * ss, QI_ZERO
        if (c or d) and sr is None and ss is None:
            ratio = exact_sqrt(S / R)
            if ratio is not None:
                # sig = ratio*rho, hence rho*sig = ratio*R
                a, b = a + d * ratio * R, b + c * ratio
                c = d = QI_ZERO
        return RootExt((a, b, c, d), (R, S))

    @staticmethod
    def rational(q, rad) -> "RootExt":
        return RootExt.make((QI.of(q), 0, 0, 0), rad)

    @staticmethod
    def root_r(rad) -> "RootExt":
        return RootExt.make((0, 1, 0, 0), rad)

    @staticmethod
    def root_s(rad) -> "RootExt":
        return RootExt.make((0, 0, 1, 0), rad)

    def _coerced(self, other) -> "RootExt | None":
        if isinstance(other, RootExt):
            if other.rad != self.rad:
                raise ValueError("mixing RootExt values over different radicands")
            return other
        if isinstance(other, (QI, int, Fraction)):
            return RootExt.make((QI.of(other), 0, 0, 0), self.rad)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RootExt(tuple(x + y for x, y in zip(self.parts, o.parts)), self.rad)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RootExt(tuple(x - y for x, y in zip(self.parts, o.parts)), self.rad)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o - self

    _GRADES = ((0, 0), (1, 0), (0, 1), (1, 1))
    _SLOT = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        R, S = self.rad
        out = [QI_ZERO, QI_ZERO, QI_ZERO, QI_ZERO]
        for (er, es), x in zip(self._GRADES, self.parts):
            if not x:
                continue
            for (fr, fs), y in zip(self._GRADES, o.parts):
                if not y:
                    continue
                factor = x * y
                if er and fr:
                    factor = factor * R
                if es and fs:
                    factor = factor * S
                slot = self._SLOT[((er + fr) % 2, (es + fs) % 2)]
                out[slot] = out[slot] + factor
        return RootExt.make(out, self.rad)

    __rmul__ = __mul__

    def _flip_r(self) -> "RootExt":
        a, b, c, d = self.parts
        return RootExt((a, -b, c, -d), self.rad)

    def _flip_s(self) -> "RootExt":
        a, b, c, d = self.parts
        return RootExt((a, b, -c, -d), self.rad)

    def inverse(self) -> "RootExt":
        x = self
        mult = RootExt.rational(1, self.rad)
        if x.parts[1] or x.parts[3]:
            y = x._flip_r()
            mult = mult * y
            x = x * y
        if x.parts[2] or x.parts[3]:
            y = x._flip_s()
            mult = mult * y
            x = x * y
        q = x.parts[0]
        if not q or x.parts[1] or x.parts[2] or x.parts[3]:
            raise ZeroDivisionError("RootExt element is not invertible")
        return mult * RootExt.rational(QI_ONE / q, self.rad)

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return RootExt(tuple(-p for p in self.parts), self.rad)

    def conjugate(self) -> "RootExt":
        # the adjoined roots are real, so conjugation acts on coefficients
        return RootExt(tuple(p.conjugate() for p in self.parts), self.rad)

    def __bool__(self) -> bool:
        return any(self.parts)

    def __eq__(self, other) -> bool:
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.parts == o.parts

    def __hash__(self):
        return hash((self.parts, self.rad))

    @property
    def is_rational(self) -> bool:
        return not (self.parts[1] or self.parts[2] or self.parts[3])

    def rational_value(self) -> QI:
        if not self.is_rational:
            raise ValueError(f"{self} carries an irrational component")
        return self.parts[0]

    def to_complex(self) -> complex:
        R, S = self.rad
        rr, rs = math.sqrt(float(R)), math.sqrt(float(S))
        a, b, c, d = (p.to_complex() for p in self.parts)
        return a + b * rr + c * rs + d * rr * rs

    def __repr__(self) -> str:
        return f"RootExt({self.parts!r}, rad={self.rad!r})"
