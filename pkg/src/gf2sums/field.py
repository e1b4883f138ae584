"""Arithmetic in the binary field GF(2^m) in polynomial basis.

Elements are plain ints in ``[0, 2**m)``; bit i holds the coefficient of
alpha**i where alpha is the residue class of x modulo the reduction
polynomial. Zero is 0 and one is 1. Addition is ``^``.

Scalar operations live on :class:`FieldSpec`. Whole-field numpy tables
(inverses, traces, square roots, multiplication tables) are built lazily and
cached on the instance; they never change once computed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import NamedTuple

import numpy as np

MAX_DEGREE = 32

# Lexicographically smallest irreducible polynomial of each degree over GF(2),
# leading term included.
DEFAULT_POLYS = {
    1: 0x2,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
    17: 0x20009,
    18: 0x40009,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x100001B,
    25: 0x2000009,
    26: 0x400001B,
    27: 0x8000027,
    28: 0x10000003,
    29: 0x20000005,
    30: 0x40000003,
    31: 0x80000009,
    32: 0x10000008D,
}


class FieldError(ValueError):
    """Invalid field construction request."""


class ReduciblePolynomialError(FieldError):
    def __init__(self, poly: int, factor_degree: int):
        self.poly = poly
        self.factor_degree = factor_degree
        super().__init__(
            f"reducible polynomial {poly:#x}: has an irreducible factor of degree {factor_degree}"
        )


class ZeroInverseError(ZeroDivisionError):
    """Raised when inverting the zero element."""


# -- polynomial arithmetic over GF(2), used for validation only -------------

def _pdeg(a: int) -> int:
    return a.bit_length() - 1


def _pmod(a: int, f: int) -> int:
    df = _pdeg(f)
    while a and _pdeg(a) >= df:
        a ^= f << (_pdeg(a) - df)
    return a


def _pmulmod(a: int, b: int, f: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a = _pmod(a << 1, f)
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def smallest_factor_degree(poly: int) -> int:
    """Degree of the smallest irreducible factor of ``poly`` over GF(2).

    Distinct-degree style: the first d with gcd(x^(2^d) - x, poly) != 1.
    Returns ``deg(poly)`` exactly when ``poly`` is irreducible.
    """
    m = _pdeg(poly)
    if m < 1:
        raise FieldError(f"polynomial {poly:#x} has degree < 1")
    h = 0b10  # x
    for d in range(1, m // 2 + 1):
        h = _pmulmod(h, h, poly)
        if _pgcd(poly, h ^ 0b10) != 1:
            return d
    return m


def is_irreducible(poly: int) -> bool:
    return poly > 1 and smallest_factor_degree(poly) == _pdeg(poly)


# -- roots of quadratics ------------------------------------------------------

class RootKind(enum.Enum):
    NO_ROOTS = "NoRoots"
    ONE_ROOT = "OneRoot"
    TWO_ROOTS = "TwoRoots"


class QuadraticRoots(NamedTuple):
    kind: RootKind
    roots: tuple[int, ...]


# -- the field ----------------------------------------------------------------

def _parity(x: int) -> int:
    return x.bit_count() & 1


def _factor(n: int) -> list[int]:
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


@dataclass(frozen=True)
class FieldSpec:
    """A concrete GF(2^m) with its reduction polynomial and trace data."""

    m: int
    poly: int
    trace_mask: int = dc_field(init=False, compare=False, repr=False)
    # dual_matrix[i] has bit j = Tr(alpha^(i+j)); so bit i of T.a is Tr(alpha^i * a).
    dual_matrix: tuple[int, ...] = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not 1 <= self.m <= MAX_DEGREE:
            raise FieldError(f"degree m={self.m} outside 1..{MAX_DEGREE}")
        if _pdeg(self.poly) != self.m:
            raise FieldError(
                f"polynomial {self.poly:#x} has degree {_pdeg(self.poly)}, expected {self.m}"
            )
        fdeg = smallest_factor_degree(self.poly)
        if fdeg != self.m:
            raise ReduciblePolynomialError(self.poly, fdeg)

        # Tr(alpha^k) for k < 2m-1 by the defining sum.
        traces = []
        e = 1
        for _ in range(2 * self.m - 1):
            traces.append(self._trace_by_sum(e))
            e = self.mulx(e)
        mask = sum(traces[i] << i for i in range(self.m))
        rows = tuple(
            sum(traces[i + j] << j for j in range(self.m)) for i in range(self.m)
        )
        object.__setattr__(self, "trace_mask", mask)
        object.__setattr__(self, "dual_matrix", rows)

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def mask(self) -> int:
        return (1 << self.m) - 1

    def __str__(self):
        return f"GF(2^{self.m}) mod {self.poly:#x}"

    def fmt(self, a: int) -> str:
        return f"{a:#x}"

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mulx(self, a: int) -> int:
        a <<= 1
        if a >> self.m:
            a ^= self.poly
        return a

    def mul(self, a: int, b: int) -> int:
        if a < b:
            a, b = b, a
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.m:
                a ^= self.poly
        return r

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverseError("zero has no multiplicative inverse")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sqrt(self, a: int) -> int:
        """Square root, a^(2^(m-1)); unique since Frobenius is a bijection."""
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def _trace_by_sum(self, a: int) -> int:
        s = 0
        for _ in range(self.m):
            s ^= a
            a = self.mul(a, a)
        return s

    def trace(self, a: int) -> int:
        return _parity(self.trace_mask & a)

    def dual(self, a: int) -> int:
        """T.a, so that Tr(a*x) == parity(dual(a) & x)."""
        return sum(_parity(row & a) << i for i, row in enumerate(self.dual_matrix))

    # -- quadratics -----------------------------------------------------------

    def half_trace(self, c: int) -> int:
        if self.m % 2 == 0:
            raise ValueError("half-trace needs odd m")
        h = 0
        for _ in range((self.m + 1) // 2):
            h ^= c
            c = self.mul(self.mul(c, c), self.mul(c, c))
        return h

    @cached_property
    def _artin_schreier_solver(self) -> list[tuple[int, int]]:
        # Echelon form of the GF(2)-linear map y -> y^2 + y, each row kept with
        # the preimage that produces it.
        rows: list[tuple[int, int]] = []
        for j in range(self.m):
            y = 1 << j
            img = self.mul(y, y) ^ y
            for pivot_img, pivot_pre in rows:
                if img ^ pivot_img < img:
                    img ^= pivot_img
                    y ^= pivot_pre
            if img:
                rows.append((img, y))
                rows.sort(reverse=True)
        return rows

    def _solve_artin_schreier(self, c: int) -> int | None:
        """Some y with y^2 + y = c, or None."""
        if self.m % 2:
            y = self.half_trace(c)
        else:
            y = 0
            rest = c
            for pivot_img, pivot_pre in self._artin_schreier_solver:
                if rest ^ pivot_img < rest:
                    rest ^= pivot_img
                    y ^= pivot_pre
            if rest:
                return None
        return y if self.mul(y, y) ^ y == c else None

    def solve_quadratic(self, p: int, r: int) -> QuadraticRoots:
        """Roots of x^2 + p*x + r = 0."""
        if p == 0:
            return QuadraticRoots(RootKind.ONE_ROOT, (self.sqrt(r),))
        c = self.div(r, self.mul(p, p))
        if self.trace(c):
            return QuadraticRoots(RootKind.NO_ROOTS, ())
        y = self._solve_artin_schreier(c)
        if y is None:
            raise ArithmeticError(f"no Artin-Schreier root for trace-zero {c:#x}")
        x0 = self.mul(p, y)
        roots = tuple(sorted((x0, x0 ^ p)))
        for x in roots:
            if self.mul(x, x) ^ self.mul(p, x) ^ r:
                raise ArithmeticError(f"root check failed for {x:#x}")
        return QuadraticRoots(RootKind.TWO_ROOTS, roots)

    def cube_roots_of_unity(self) -> tuple[int, int] | None:
        """The two roots of x^2 + x + 1 (present iff m is even)."""
        res = self.solve_quadratic(1, 1)
        if res.kind is not RootKind.TWO_ROOTS:
            return None
        return res.roots  # type: ignore[return-value]

    # -- whole-field numpy tables ----------------------------------------------

    def _dtype(self):
        return np.uint32

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.uint64).astype(np.uint32)

    def mulx_vec(self, a: np.ndarray) -> np.ndarray:
        top = (a >> np.uint32(self.m - 1)) & np.uint32(1)
        low_poly = np.uint32(self.poly & self.mask)
        return ((a << np.uint32(1)) & np.uint32(self.mask)) ^ (top * low_poly)

    def mul_scalar_vec(self, a: np.ndarray, s: int) -> np.ndarray:
        """Elementwise a[i] * s."""
        a = np.asarray(a, dtype=np.uint32)
        out = np.zeros_like(a)
        while s:
            if s & 1:
                out ^= a
            s >>= 1
            if s:
                a = self.mulx_vec(a)
        return out

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise a[i] * b[i], shift-and-add across all lanes at once."""
        a = np.asarray(a, dtype=np.uint32)
        b = np.asarray(b, dtype=np.uint32)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.uint32)
        for i in range(self.m):
            bit = (b >> np.uint32(i)) & np.uint32(1)
            out ^= a * bit
            if i + 1 < self.m:
                a = self.mulx_vec(a)
        return out

    def trace_vec(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.uint32)
        return (np.bitwise_count(a & np.uint32(self.trace_mask)) & 1).astype(np.uint8)

    def dual_vec(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.uint32)
        out = np.zeros_like(a)
        for i, row in enumerate(self.dual_matrix):
            out |= (np.bitwise_count(a & np.uint32(row)).astype(np.uint32) & np.uint32(1)) << np.uint32(i)
        return out

    @cached_property
    def primitive_element(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        cofactors = [n // p for p in _factor(n)]
        for g in range(2, self.q):
            if all(self.pow(g, e) != 1 for e in cofactors):
                return g
        raise ArithmeticError("no primitive element found")

    @cached_property
    def exp_table(self) -> np.ndarray:
        """exp_table[k] = g^k for k in [0, q-1), g the smallest primitive element."""
        n = self.q - 1
        g = self.primitive_element
        powers = np.ones(1, dtype=np.uint32)
        while len(powers) < n:
            step = self.pow(g, len(powers))
            powers = np.concatenate([powers, self.mul_scalar_vec(powers, step)])
        powers = powers[:n]
        powers.setflags(write=False)
        return powers

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[a] = 1/a for a != 0; inv_table[0] = 0."""
        exp = self.exp_table
        n = self.q - 1
        inv = np.zeros(self.q, dtype=np.uint32)
        inv[exp] = exp[(-np.arange(n, dtype=np.int64)) % n]
        inv.setflags(write=False)
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        t = self.trace_vec(self.elements())
        t.setflags(write=False)
        return t

    @cached_property
    def square_table(self) -> np.ndarray:
        x = self.elements()
        s = self.mul_vec(x, x)
        s.setflags(write=False)
        return s

    @cached_property
    def sqrt_table(self) -> np.ndarray:
        r = np.empty(self.q, dtype=np.uint32)
        r[self.square_table] = self.elements()
        r.setflags(write=False)
        return r

    def mul_table(self) -> np.ndarray:
        """Full q x q product table; only sensible for small m."""
        if self.m > 12:
            raise FieldError(f"multiplication table refused for m={self.m} > 12")
        x = self.elements()
        table = self.mul_vec(x[:, None], x[None, :])
        return table.astype(np.uint16 if self.m <= 16 else np.uint32)


def make_field(m: int, poly: int | None = None) -> FieldSpec:
    """Build GF(2^m); ``poly`` defaults to the smallest irreducible of degree m."""
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise FieldError(f"degree m={m!r} outside 1..{MAX_DEGREE}")
    if poly is None:
        poly = DEFAULT_POLYS[m]
    return FieldSpec(m, poly)


def parse_hex(text: str) -> int:
    """Parse a hex bit-vector such as ``0x11B`` or ``11b``."""
    t = text.strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    if not t or any(ch not in "0123456789abcdef" for ch in t):
        raise ValueError(f"malformed hex value {text!r}")
    return int(t, 16)
