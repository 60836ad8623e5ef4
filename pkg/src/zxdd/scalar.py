"""Exact scalars of the form sqrt(2)^p * (a + b w + c w^2 + d w^3), w = e^{i pi/4}.

Every factor produced by the rewrite rules (powers of sqrt(2), powers of w,
terms like 1 + w^k) lives in this ring, so amplitudes are computed without
any floating point error. Conversion to ``complex`` is only for reporting.
"""
from __future__ import annotations

import cmath
import math

_OMEGA = cmath.exp(1j * math.pi / 4)
_OMEGA_POWERS = tuple(_OMEGA**k for k in range(4))


def _negacyclic_mul(x: tuple, y: tuple) -> tuple:
    a0, a1, a2, a3 = x
    b0, b1, b2, b3 = y
    return (
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
    )


def _rotate(x: tuple, k: int) -> tuple:
    """Multiply coefficients by w^k."""
    a, b, c, d = x
    for _ in range(k % 8):
        a, b, c, d = -d, a, b, c
    return (a, b, c, d)


# sqrt(2) = w - w^3
_SQRT2 = (0, 1, 0, -1)


def _canonical(p: int, x: tuple) -> tuple[int, tuple]:
    if x == (0, 0, 0, 0):
        return 0, x
    while True:
        if all(v % 2 == 0 for v in x):
            x = tuple(v // 2 for v in x)
            p += 2
            continue
        y = _negacyclic_mul(x, _SQRT2)
        if all(v % 2 == 0 for v in y):
            x = tuple(v // 2 for v in y)
            p += 1
            continue
        return p, x


class Scalar:
    """Immutable element of Z[w][1/sqrt(2)] kept in a canonical form.

    The canonical form removes every factor of sqrt(2) from the coefficient
    vector, so two scalars are equal iff their ``(p, coeffs)`` pairs match.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int = 0, coeffs: tuple = (1, 0, 0, 0)):
        self.p, self.coeffs = _canonical(p, tuple(int(v) for v in coeffs))

    @classmethod
    def _raw(cls, p: int, coeffs: tuple) -> "Scalar":
        s = object.__new__(cls)
        s.p, s.coeffs = _canonical(p, coeffs)
        return s

    # constructors ---------------------------------------------------------
    @classmethod
    def one(cls) -> "Scalar":
        return cls._raw(0, (1, 0, 0, 0))

    @classmethod
    def zero(cls) -> "Scalar":
        return cls._raw(0, (0, 0, 0, 0))

    @classmethod
    def omega(cls, k: int) -> "Scalar":
        """w^k."""
        return cls._raw(0, _rotate((1, 0, 0, 0), k))

    @classmethod
    def sqrt2_pow(cls, n: int) -> "Scalar":
        return cls._raw(n, (1, 0, 0, 0))

    @classmethod
    def one_plus_omega(cls, k: int) -> "Scalar":
        """1 + w^k, the value of a disconnected Z-spider with phase k*pi/4."""
        a, b, c, d = _rotate((1, 0, 0, 0), k)
        return cls._raw(0, (a + 1, b, c, d))

    @classmethod
    def from_int(cls, n: int) -> "Scalar":
        return cls._raw(0, (n, 0, 0, 0))

    # ring structure ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0, 0, 0, 0)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar._raw(self.p + other.p, _negacyclic_mul(self.coeffs, other.coeffs))

    def __add__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo, hi = (self, other) if self.p <= other.p else (other, self)
        # lift hi onto lo's power of sqrt(2)
        x = hi.coeffs
        diff = hi.p - lo.p
        if diff % 2:
            x = _negacyclic_mul(x, _SQRT2)
        scale = 1 << (diff // 2)
        x = tuple(v * scale for v in x)
        return Scalar._raw(lo.p, tuple(u + v for u, v in zip(lo.coeffs, x)))

    def __neg__(self) -> "Scalar":
        return Scalar._raw(self.p, tuple(-v for v in self.coeffs))

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def mul_sqrt2(self, n: int) -> "Scalar":
        """Multiply by sqrt(2)^n."""
        if n == 0 or self.is_zero:
            return self
        s = object.__new__(Scalar)
        s.p, s.coeffs = self.p + n, self.coeffs
        return s

    def mul_omega(self, k: int) -> "Scalar":
        """Multiply by w^k."""
        if k % 8 == 0:
            return self
        s = object.__new__(Scalar)
        s.p, s.coeffs = self.p, _rotate(self.coeffs, k)
        return s

    def conjugate(self) -> "Scalar":
        a, b, c, d = self.coeffs
        # conj(w^k) = w^{-k} = -w^{4-k}
        return Scalar._raw(self.p, (a, -d, -c, -b))

    # comparison / conversion ------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __complex__(self) -> complex:
        return self.as_complex()

    def as_complex(self) -> complex:
        if self.is_zero:
            return 0j
        z = sum(c * w for c, w in zip(self.coeffs, _OMEGA_POWERS))
        return z * math.sqrt(2) ** self.p

    def log2_abs(self) -> float:
        """log2 |s| computed without overflow for huge powers of sqrt(2)."""
        if self.is_zero:
            return -math.inf
        z = sum(c * w for c, w in zip(self.coeffs, _OMEGA_POWERS))
        return math.log2(abs(z)) + self.p / 2

    def __repr__(self) -> str:
        return f"Scalar(p={self.p}, coeffs={self.coeffs})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        names = ("", "w", "w^2", "w^3")
        parts = [f"{c}{n}" if n else str(c) for c, n in zip(self.coeffs, names) if c]
        body = " + ".join(parts)
        return f"sqrt2^{self.p} * ({body})" if self.p else f"({body})"

