"""Kloosterman sums K(a) = sum over x != 0 of (-1)^Tr(a*x + 1/x).

K(0) is the literal value of the same sum at a = 0, namely -1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .field import FieldSpec

NAIVE_MAX_M = 16
FAST_MAX_M = 28


class CostGuardError(ValueError):
    """A requested computation exceeds its size guard."""


def residue_mod(k: int, modulus: int) -> int:
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    return int(k) % modulus


def _signs(bits: np.ndarray) -> np.ndarray:
    return 1 - 2 * bits.astype(np.int64)


def kloosterman(field: FieldSpec, a: int) -> int:
    """K(a) by direct summation over F*."""
    x = field.elements()[1:]
    inv_x = field.inv_table[1:]
    bits = field.trace_vec(field.mul_scalar_vec(x, a) ^ inv_x)
    return int(_signs(bits).sum())


@dataclass(frozen=True)
class KloostermanTable:
    field: FieldSpec
    values: np.ndarray
    method: str

    def __getitem__(self, a):
        return self.values[a]

    def __len__(self):
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a_hex", "K", "K_mod12"])
        for a, k in enumerate(self.values.tolist()):
            w.writerow([f"{a:#x}", k, k % 12])
        return buf.getvalue()


def _freeze(field: FieldSpec, values: np.ndarray, method: str) -> KloostermanTable:
    values = values.astype(np.int32)
    values.setflags(write=False)
    return KloostermanTable(field, values, method)


def kloosterman_table_naive(field: FieldSpec) -> KloostermanTable:
    """Every K(a) by its own O(q) sum; O(q^2) overall."""
    if field.m > NAIVE_MAX_M:
        raise CostGuardError(
            f"naive K-table is O(q^2); refused for m={field.m} > {NAIVE_MAX_M}, use the spectral path"
        )
    x = field.elements()[1:]
    inv_sign_bits = field.trace_vec(field.inv_table[1:])
    values = np.empty(field.q, dtype=np.int64)
    values[0] = -1
    for a in range(1, field.q):
        bits = field.trace_vec(field.mul_scalar_vec(x, a)) ^ inv_sign_bits
        values[a] = len(x) - 2 * int(bits.sum())
    return _freeze(field, values, "naive")


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """In-place unnormalized Walsh-Hadamard transform of a length-2^k vector."""
    n = len(values)
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        v = values.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = lo - v[:, 1, :]
        h *= 2
    return values


def kloosterman_table_fast(field: FieldSpec) -> KloostermanTable:
    """All K(a) from one Walsh-Hadamard pass over f(x) = (-1)^Tr(1/x)."""
    if field.m > FAST_MAX_M:
        raise CostGuardError(f"spectral K-table refused for m={field.m} > {FAST_MAX_M}")
    # f(0) = +1 since inv_table[0] = 0 and Tr(0) = 0.
    spectrum = (1 - 2 * field.trace_vec(field.inv_table).astype(np.int32)).astype(np.int32)
    walsh_hadamard(spectrum)
    values = spectrum[field.dual_vec(field.elements())] - 1
    return _freeze(field, values, "spectral")


_TABLE_CACHE: dict[FieldSpec, KloostermanTable] = {}


def kloosterman_table(field: FieldSpec) -> KloostermanTable:
    """Cached spectral table, shared read-only by the verifiers."""
    table = _TABLE_CACHE.get(field)
    if table is None:
        table = _TABLE_CACHE[field] = kloosterman_table_fast(field)
    return table
