"""Solution counts for the Goethals-code system

    x + y + z + u = 1
    u^2 + xy + xz + xu + yz + yu + zu = b^2
    x^3 + y^3 + z^3 + u^3 = c

over pairwise distinct x, y, z, u.

Brute-force enumeration counts ordered tuples. The left-hand sides are
symmetric under permuting (x, y, z), so every ordered count is 6 times the
number of solutions up to that permutation; ``mu2`` is the latter, and that
is the quantity the closed forms predict.

Formula paths return :class:`fractions.Fraction` so that a non-integral
value is visible rather than rounded away.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import FieldSpec
from .ksum import CostGuardError, KloostermanTable, kloosterman_table

BRUTE_MAX_M = 10
PERMUTATIONS_OF_XYZ = 6


@dataclass(frozen=True)
class SystemParams:
    b: int
    c: int
    k1: int
    k2: int
    l: int
    degenerate: bool


def derive_params(field: FieldSpec, b: int, c: int) -> SystemParams:
    b2 = field.square(b)
    k1 = b2 ^ c ^ 1
    k2 = b2 ^ b ^ c ^ field.sqrt(c)
    return SystemParams(b, c, k1, k2, field.trace(b), k1 == 0 or k2 == 0)


def _check_brute_guard(field: FieldSpec):
    if field.m > BRUTE_MAX_M:
        raise CostGuardError(
            f"brute-force enumeration is O(q^3); refused for m={field.m} > {BRUTE_MAX_M}"
        )


class _Tables:
    """Small-field lookup tables for the O(q^3) sweeps."""

    def __init__(self, field: FieldSpec):
        self.mul = field.mul_table().astype(np.int64)
        x = np.arange(field.q, dtype=np.int64)
        self.sq = self.mul[x, x]
        self.cube = self.mul[x, self.sq]
        self.sqrt = field.sqrt_table.astype(np.int64)
        yy, zz = np.meshgrid(x, x, indexing="ij")
        keep = yy != zz
        self.y = yy[keep]
        self.z = zz[keep]

    def lhs(self, x: int):
        """Distinct-tuple mask, second and third left-hand sides for fixed x."""
        y, z, M = self.y, self.z, self.mul
        u = 1 ^ x ^ y ^ z
        ok = (y != x) & (z != x) & (u != x) & (u != y) & (u != z)
        mx = M[x]
        second = self.sq[u] ^ mx[y] ^ mx[z] ^ mx[u] ^ M[y, z] ^ M[y, u] ^ M[z, u]
        third = self.cube[x] ^ self.cube[y] ^ self.cube[z] ^ self.cube[u]
        return ok, second, third


def count_ordered_solutions(field: FieldSpec, b: int, c: int) -> int:
    """Ordered tuples (x, y, z, u) of distinct elements solving the system."""
    _check_brute_guard(field)
    t = _Tables(field)
    b2 = field.square(b)
    total = 0
    for x in range(field.q):
        ok, second, third = t.lhs(x)
        total += int(np.count_nonzero(ok & (second == b2) & (third == c)))
    return total


def mu2_bruteforce(field: FieldSpec, b: int, c: int) -> int:
    ordered = count_ordered_solutions(field, b, c)
    if ordered % PERMUTATIONS_OF_XYZ:
        raise ArithmeticError(f"ordered count {ordered} not divisible by 6")
    return ordered // PERMUTATIONS_OF_XYZ


@dataclass(frozen=True)
class Mu2Table:
    field: FieldSpec
    ordered: np.ndarray  # ordered[b, c]: ordered solution tuples

    @property
    def counts(self) -> np.ndarray:
        return self.ordered // PERMUTATIONS_OF_XYZ

    def mu2(self, b: int, c: int) -> int:
        return int(self.ordered[b, c]) // PERMUTATIONS_OF_XYZ

    def total_ordered(self) -> int:
        return int(self.ordered.sum())


def mu2_bruteforce_all(field: FieldSpec, threads: int = 1) -> Mu2Table:
    """One sweep over ordered distinct (x, y, z) filling every (b, c) cell.

    b is recovered from b^2 by the Frobenius square root. With ``threads`` > 1
    the x-range is split across workers with private count arrays.
    """
    _check_brute_guard(field)
    q = field.q
    t = _Tables(field)

    def sweep(xs) -> np.ndarray:
        acc = np.zeros(q * q, dtype=np.int64)
        for x in xs:
            ok, second, third = t.lhs(x)
            idx = t.sqrt[second[ok]] * q + third[ok]
            acc += np.bincount(idx, minlength=q * q)
        return acc

    threads = max(1, int(threads))
    if threads == 1:
        acc = sweep(range(q))
    else:
        chunks = [range(i, q, threads) for i in range(threads)]
        with ThreadPoolExecutor(threads) as pool:
            acc = sum(pool.map(sweep, chunks))
    ordered = acc.reshape(q, q)
    ordered.setflags(write=False)
    return Mu2Table(field, ordered)


def spot_check_pointwise(table: Mu2Table, samples: int, seed: int = 0) -> list[tuple[int, int, int, int]]:
    """Re-count ``samples`` random cells pointwise; returns (b, c, sweep, pointwise) mismatches."""
    field = table.field
    rng = np.random.default_rng(seed)
    cells = rng.integers(0, field.q, size=(samples, 2))
    bad = []
    for b, c in cells.tolist():
        direct = mu2_bruteforce(field, b, c)
        if direct != table.mu2(b, c):
            bad.append((b, c, table.mu2(b, c), direct))
    return bad


def m2_sum(field: FieldSpec, params: SystemParams) -> Fraction:
    """(1/4) * sum over v not in {0, 1} of (1 + (-1)^(Tr(k1/v)+l)) (1 + (-1)^(Tr(k2/v)+l)).

    Evaluated exactly as written, without any side conditions.
    """
    total = 0
    for v in range(2, field.q):
        iv = field.inv(v)
        s1 = 1 - 2 * (field.trace(field.mul(params.k1, iv)) ^ params.l)
        s2 = 1 - 2 * (field.trace(field.mul(params.k2, iv)) ^ params.l)
        total += (1 + s1) * (1 + s2)
    return Fraction(total, 4)


def _sign(bit: int) -> int:
    return -1 if bit else 1


def _k_value(field: FieldSpec, arg: int, table: KloostermanTable | None) -> int:
    if table is None:
        table = kloosterman_table(field)
    return int(table.values[arg])


def m2_closed(field: FieldSpec, params: SystemParams, table: KloostermanTable | None = None) -> Fraction:
    """(1/4)(q - 3 + (-1)^Tr(k1) K(k1 k2) - (-1)^Tr(b) (3 + (-1)^Tr(k1)))."""
    K = _k_value(field, field.mul(params.k1, params.k2), table)
    s1 = _sign(field.trace(params.k1))
    sb = _sign(field.trace(params.b))
    return Fraction(field.q - 3 + s1 * K - sb * (3 + s1), 4)


def mu2_from_m2(m2: Fraction, tr_c: int, tr_one: int) -> Fraction:
    if tr_c != tr_one:
        return Fraction(2, 3) * m2
    return Fraction(2, 3) * (m2 - 1)


def theorem_case(field: FieldSpec, c: int) -> int:
    """1 when Tr(c) == Tr(1) (m odd and Tr(c)=1, or m even and Tr(c)=0), else 2."""
    return 1 if field.trace(c) == field.trace(1) else 2


def mu2_closed(field: FieldSpec, b: int, c: int, table: KloostermanTable | None = None) -> Fraction:
    params = derive_params(field, b, c)
    K = _k_value(field, field.mul(params.k1, params.k2), table)
    sb = _sign(params.l)
    if theorem_case(field, c) == 1:
        return Fraction(field.q - 8 + sb * (K - 3), 6)
    return Fraction(field.q - 2 - sb * (K + 3), 6)


def m2_discrepancies(field: FieldSpec, table: KloostermanTable | None = None):
    """Non-degenerate (b, c, m2_sum, m2_closed) where the two M2 expressions differ."""
    out = []
    for b in range(field.q):
        for c in range(field.q):
            p = derive_params(field, b, c)
            if p.degenerate:
                continue
            direct = m2_sum(field, p)
            closed = m2_closed(field, p, table)
            if direct != closed:
                out.append((b, c, direct, closed))
    return out


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def mu2_table_csv(table: Mu2Table, ktable: KloostermanTable | None = None) -> str:
    field = table.field
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["b_hex", "c_hex", "mu2_bruteforce", "mu2_closed", "degenerate_flag", "match"])
    for b in range(field.q):
        for c in range(field.q):
            brute = table.mu2(b, c)
            closed = mu2_closed(field, b, c, ktable)
            degenerate = derive_params(field, b, c).degenerate
            w.writerow([
                f"{b:#x}", f"{c:#x}", brute, _fmt_fraction(closed),
                int(degenerate), int(closed == brute),
            ])
    return buf.getvalue()
