"""Forward-mode scalars: dual numbers with exact chain-rule propagation.

A :class:`Dual` holds a value and a tuple of tangent components.  Arithmetic
is generic over the component type, so nesting one level of duals inside
another yields exact mixed second derivatives (used for complex Hessians).
Plain floats and numpy arrays pass through the same helper functions, which
lets one evaluation routine serve point values, derivatives, and batched
sampling.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Dual", "exp", "log", "sqrt", "sin", "cos", "powr", "scalar_float"]


class Dual:
    """value + sum_j partials[j] * eps_j with eps_i * eps_j = 0."""

    __slots__ = ("value", "partials")

    def __init__(self, value, partials):
        self.value = value
        self.partials = tuple(partials)

    @classmethod
    def seed(cls, value, index, width):
        """A dual seeded as the `index`-th of `width` independent variables."""
        return cls(value, tuple(1.0 if j == index else 0.0 for j in range(width)))

    @classmethod
    def constant(cls, value, width):
        return cls(value, (0.0,) * width)

    def __repr__(self):
        return f"Dual({self.value!r}, {self.partials!r})"

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value,
                        tuple(a + b for a, b in zip(self.partials, other.partials)))
        return Dual(self.value + other, self.partials)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value,
                        tuple(a - b for a, b in zip(self.partials, other.partials)))
        return Dual(self.value - other, self.partials)

    def __rsub__(self, other):
        return Dual(other - self.value, tuple(-a for a in self.partials))

    def __neg__(self):
        return Dual(-self.value, tuple(-a for a in self.partials))

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value * other.value,
                        tuple(a * other.value + self.value * b
                              for a, b in zip(self.partials, other.partials)))
        return Dual(self.value * other, tuple(a * other for a in self.partials))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / (other.value * other.value)
            return Dual(self.value / other.value,
                        tuple((a * other.value - self.value * b) * inv
                              for a, b in zip(self.partials, other.partials)))
        return Dual(self.value / other, tuple(a / other for a in self.partials))

    def __rtruediv__(self, other):
        inv = 1.0 / (self.value * self.value)
        return Dual(other / self.value,
                    tuple(-other * a * inv for a in self.partials))

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("Dual ** exponent must be an int; use powr() for real powers")
        if n < 0:
            return 1.0 / self.__pow__(-n)
        result = Dual(1.0, (0.0,) * len(self.partials))
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def scalar_float(x):
    """Underlying float of a (possibly nested) scalar.  Rejects arrays."""
    while isinstance(x, Dual):
        x = x.value
    if np.ndim(x) != 0:
        raise TypeError("expected a scalar, got an array")
    return float(x)


# -- elementary functions, generic over float / ndarray / Dual ---------------


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.value)
        return Dual(e, tuple(e * p for p in x.partials))
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.value), tuple(p / x.value for p in x.partials))
    return np.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.value)
        half = 0.5 / s
        return Dual(s, tuple(half * p for p in x.partials))
    return np.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        c = cos(x.value)
        return Dual(sin(x.value), tuple(c * p for p in x.partials))
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        s = sin(x.value)
        return Dual(cos(x.value), tuple(-s * p for p in x.partials))
    return np.cos(x)


def powr(x, alpha):
    """x ** alpha for real alpha, defined for x > 0 via exp(alpha * log x)."""
    return exp(alpha * log(x))
