"""Complex scalars over a generic real ring.

`Cx` stores real and imaginary parts separately so that the parts may be
floats, numpy arrays (batched evaluation) or :class:`~discgeom.scalars.Dual`
numbers (derivatives).  Defining functions are written against this class
once and work in all three modes.
"""

from __future__ import annotations

from . import scalars as sc

__all__ = ["Cx", "cexp", "unit_circle", "cpow_int"]


class Cx:
    __slots__ = ("re", "im")

    def __init__(self, re, im=0.0):
        self.re = re
        self.im = im

    @classmethod
    def from_complex(cls, c):
        c = complex(c)
        return cls(c.real, c.imag)

    def to_complex(self):
        return complex(sc.scalar_float(self.re), sc.scalar_float(self.im))

    def __repr__(self):
        return f"Cx({self.re!r}, {self.im!r})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Cx):
            return Cx(self.re + other.re, self.im + other.im)
        return Cx(self.re + other, self.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Cx):
            return Cx(self.re - other.re, self.im - other.im)
        return Cx(self.re - other, self.im)

    def __rsub__(self, other):
        return Cx(other - self.re, -self.im)

    def __neg__(self):
        return Cx(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, Cx):
            return Cx(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)
        return Cx(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cx):
            d = other.abs2()
            return Cx((self.re * other.re + self.im * other.im) / d,
                      (self.im * other.re - self.re * other.im) / d)
        return Cx(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        d = self.abs2()
        return Cx(other * self.re / d, -other * self.im / d)

    # -- real-valued extractions -------------------------------------------

    def conj(self):
        return Cx(self.re, -self.im)

    def abs2(self):
        """|z|^2 as a real scalar; smooth everywhere."""
        return self.re * self.re + self.im * self.im

    def absval(self):
        """|z|; not differentiable at 0."""
        return sc.sqrt(self.abs2())


def cexp(z: Cx) -> Cx:
    """exp(z) via exp(re) * (cos im + i sin im)."""
    m = sc.exp(z.re)
    return Cx(m * sc.cos(z.im), m * sc.sin(z.im))


def unit_circle(theta) -> Cx:
    """e^{i theta} for a real scalar theta."""
    return Cx(sc.cos(theta), sc.sin(theta))


def cpow_int(z: Cx, n: int) -> Cx:
    """Integer power by repeated multiplication (negative via reciprocal)."""
    if n < 0:
        return 1.0 / cpow_int(z, -n)
    result = Cx(1.0, 0.0)
    base = z
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result
