"""Tiny finite-field helpers: F16 arithmetic and matrices over F2 of dimension <= 4."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import Singular

F16_MODULUS = 0b10011  # t^4 + t + 1


def _build_f16_tables() -> tuple[list[int], list[int]]:
    exp = [0] * 30
    log = [0] * 16
    x = 1
    for i in range(15):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x10:
            x ^= F16_MODULUS
    for i in range(15, 30):
        exp[i] = exp[i - 15]
    return exp, log


_EXP, _LOG = _build_f16_tables()


def f16_mul(x: int, y: int) -> int:
    if x == 0 or y == 0:
        return 0
    return _EXP[_LOG[x] + _LOG[y]]


def f16_pow(x: int, k: int) -> int:
    if x == 0:
        return 0 if k > 0 else 1
    return _EXP[(_LOG[x] * k) % 15]


@dataclass(frozen=True, order=True)
class F16:
    """Element of F2[t]/(t^4+t+1), stored as a 4-bit integer."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value < 16:
            raise ValueError(f"F16 value out of range: {self.value}")

    def __add__(self, other: "F16") -> "F16":
        return F16(self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "F16") -> "F16":
        return F16(f16_mul(self.value, other.value))

    def __pow__(self, k: int) -> "F16":
        return F16(f16_pow(self.value, k))

    def inverse(self) -> "F16":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F16")
        return F16(_EXP[(15 - _LOG[self.value]) % 15])

    def frobenius(self) -> "F16":
        """The field automorphism x -> x^4 (conjugation over F4)."""
        return self ** 4

    @classmethod
    def elements(cls) -> list["F16"]:
        return [cls(v) for v in range(16)]


@dataclass(frozen=True)
class F2Matrix:
    """Square matrix over F2 acting on row vectors; ``rows[i]`` is a bitmask.

    The image of the row vector ``v`` is the XOR of ``rows[i]`` over the set
    bits ``i`` of ``v``.
    """

    dim: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.dim <= 4 or len(self.rows) != self.dim:
            raise ValueError("F2Matrix supports dimensions 1..4")
        mask = (1 << self.dim) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits outside the dimension")

    @classmethod
    def identity(cls, dim: int) -> "F2Matrix":
        return cls(dim, tuple(1 << i for i in range(dim)))

    def apply(self, v: int) -> int:
        out = 0
        i = 0
        while v:
            if v & 1:
                out ^= self.rows[i]
            v >>= 1
            i += 1
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        # (v M) N: row i of the product is row i of M pushed through N.
        return F2Matrix(self.dim, tuple(other.apply(r) for r in self.rows))

    def rank(self) -> int:
        rows = list(self.rows)
        rank = 0
        for bit in range(self.dim):
            pivot = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] >> bit & 1:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank

    def is_invertible(self) -> bool:
        return self.rank() == self.dim

    def fixed_vectors(self) -> list[int]:
        return [v for v in range(1, 1 << self.dim) if self.apply(v) == v]


def f2_matrix_order(m: F2Matrix) -> int:
    if not m.is_invertible():
        raise Singular(f"matrix {m.rows} is singular")
    ident = F2Matrix.identity(m.dim)
    power = m
    k = 1
    while power != ident:
        power = power @ m
        k += 1
    return k


def gl_order(dim: int) -> int:
    q = 2**dim
    out = 1
    for i in range(dim):
        out *= q - 2**i
    return out


def gl_elements(dim: int) -> Iterator[F2Matrix]:
    """Yield every invertible dim x dim matrix over F2 exactly once.

    Rows are chosen outside the span of the previous rows, so no singular
    matrix is ever produced.
    """
    if not 1 <= dim <= 4:
        raise ValueError("dim must be in 1..4")

    def extend(rows: tuple[int, ...], span: frozenset[int]):
        if len(rows) == dim:
            yield F2Matrix(dim, rows)
            return
        for r in range(1, 1 << dim):
            if r not in span:
                yield from extend(rows + (r,), span | {s ^ r for s in span})

    yield from extend((), frozenset({0}))


@lru_cache(maxsize=None)
def gl_action_tables(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(rows, act)`` for all of GL_dim(2).

    ``rows`` has shape (N, dim); ``act[k, v]`` is the image of vector ``v``
    under matrix ``k``.  Order of matrices matches :func:`gl_elements`.
    """
    mats = list(gl_elements(dim))
    rows = np.array([m.rows for m in mats], dtype=np.int64)
    nvec = 1 << dim
    act = np.zeros((len(mats), nvec), dtype=np.int64)
    for v in range(nvec):
        acc = np.zeros(len(mats), dtype=np.int64)
        for i in range(dim):
            if v >> i & 1:
                acc ^= rows[:, i]
        act[:, v] = acc
    return rows, act


@lru_cache(maxsize=None)
def gl_orders(dim: int) -> np.ndarray:
    """Element orders of GL_dim(2), aligned with :func:`gl_action_tables`."""
    _, act = gl_action_tables(dim)
    n = act.shape[0]
    ident = np.arange(act.shape[1])
    orders = np.zeros(n, dtype=np.int64)
    power = act.copy()
    idx = np.arange(n)[:, None]
    for k in range(1, 32):
        done = (orders == 0) & (power == ident).all(axis=1)
        orders[done] = k
        if (orders > 0).all():
            break
        power = act[idx, power]
    return orders
