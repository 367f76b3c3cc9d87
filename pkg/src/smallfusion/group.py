"""Finite groups stored as dense multiplication tables, plus product constructions.

Element 0 is always the identity.  Tables are read-only numpy arrays, so a
``Group`` can be shared freely between threads or pickled to worker processes.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import get_caps
from .errors import ConstructionInvalid, NotCentralInvolution, NotNormal, UnsupportedOrder


def _table_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


def check_order_cap(order: int, cap: int | None = None) -> None:
    cap = get_caps().order if cap is None else cap
    if order > cap:
        raise UnsupportedOrder(f"group of order {order} exceeds the order cap {cap}")


class Group:
    """A finite group given by its Cayley table.

    Parameters
    ----------
    mul : array of shape (n, n)
        ``mul[x, y]`` is the index of ``x*y``.  Row and column 0 must be the
        identity.
    source : str
        Provenance tag: ``presentation``, ``product``, ``quotient``,
        ``construction`` or ``corpus``.
    named : mapping, optional
        Names for distinguished elements (usually the presentation generators).
    """

    def __init__(
        self,
        mul: np.ndarray,
        *,
        source: str = "construction",
        name: str | None = None,
        named: Mapping[str, int] | None = None,
        labels: Sequence[str] | None = None,
        gens: Sequence[int] | None = None,
    ):
        mul = np.asarray(mul)
        n = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
            raise ValueError("multiplication table must be square and non-empty")
        check_order_cap(n)
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise ValueError("element 0 must be the identity")
        table = mul.astype(_table_dtype(n), copy=True)
        table.flags.writeable = False
        self.mul = table
        self.order = n
        self.source = source
        self.name = name or f"G{n}"
        self.named = dict(named or {})
        self._labels = list(labels) if labels is not None else None
        self._gens = tuple(int(g) for g in gens) if gens is not None else None
        self._cache: dict = {}

        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        if len(rows) != n:
            raise ConstructionInvalid("table is not a Latin square (missing inverses)")
        inv.flags.writeable = False
        self.inv = inv
        self.elt_order = self._element_orders()

    def _element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        ar = np.arange(n)
        power = ar.copy()
        k = 1
        while (orders == 0).any():
            power = self.mul[power, ar].astype(np.int64)
            k += 1
            hit = (power == 0) & (orders == 0)
            orders[hit] = k
            if k > n:
                raise ConstructionInvalid("element of infinite order in a finite table")
        orders.flags.writeable = False
        return orders

    # ------------------------------------------------------------------ basics
    @property
    def id(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<Group {self.name} order={self.order} source={self.source}>"

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.mul.flags.writeable = False

    def label(self, x: int) -> str:
        if self._labels is not None:
            return self._labels[x]
        return f"e{x}"

    def m(self, *xs: int) -> int:
        """Product of the given elements, left to right."""
        out = 0
        for x in xs:
            out = int(self.mul[out, x])
        return out

    def power(self, x: int, k: int) -> int:
        k %= int(self.elt_order[x])
        out = 0
        for _ in range(k):
            out = int(self.mul[out, x])
        return out

    def conj(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        return int(self.mul[self.mul[self.inv[g], x], g])

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return int(self.mul[self.mul[self.inv[x], self.inv[y]], self.mul[x, y]])

    @property
    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            self._cache["abelian"] = bool(np.array_equal(self.mul, self.mul.T))
        return self._cache["abelian"]

    def conj_table(self) -> np.ndarray:
        """``C[g, x] = x^g``; cached (order^2 memory)."""
        if "conj" not in self._cache:
            n = self.order
            ar = np.arange(n)
            left = self.mul[self.inv[:, None], ar[None, :]]
            table = self.mul[left, ar[:, None]]
            table.flags.writeable = False
            self._cache["conj"] = table
        return self._cache["conj"]

    def prime(self) -> int | None:
        """The prime p if the order is a power of p (None for order 1 or mixed)."""
        n = self.order
        if n == 1:
            return None
        p = next(q for q in range(2, n + 1) if n % q == 0)
        while n % p == 0:
            n //= p
        return p if n == 1 else None

    @property
    def is_p_group(self) -> bool:
        return self.order == 1 or self.prime() is not None

    def generators(self) -> tuple[int, ...]:
        """A generating set: the construction's generators or a greedy choice."""
        if self._gens is not None:
            return self._gens
        if "greedy_gens" not in self._cache:
            from .subgroups import closure_mask

            gens: list[int] = []
            mask = np.zeros(self.order, dtype=bool)
            mask[0] = True
            for x in np.argsort(-self.elt_order, kind="stable"):
                if not mask[x]:
                    gens.append(int(x))
                    mask = closure_mask(self, gens)
                    if mask.all():
                        break
            self._cache["greedy_gens"] = tuple(gens)
        return self._cache["greedy_gens"]

    def is_homomorphism_table_valid(self, sample: int | None = None, seed: int = 0) -> bool:
        """Check associativity, exhaustively or on ``sample`` random triples."""
        n = self.order
        mul = self.mul.astype(np.int64)
        if sample is None:
            ar = np.arange(n)
            for z in range(n):
                if not np.array_equal(mul[mul, z], mul[ar[:, None], mul[:, z][None, :]]):
                    return False
            return True
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, sample))
        return bool(np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]]))


# ---------------------------------------------------------------- constructions

def table_from_right_actions(order: int, words: Sequence[tuple[int, int]], right: Sequence[np.ndarray]) -> np.ndarray:
    """Assemble a Cayley table from right-multiplication permutations.

    ``words[y] = (y_prev, j)`` states that element ``y`` equals ``y_prev * gen_j``
    with ``y_prev < y``; ``right[j][x]`` is ``x * gen_j``.
    """
    dtype = _table_dtype(order)
    mul = np.empty((order, order), dtype=dtype)
    mul[:, 0] = np.arange(order)
    for y in range(1, order):
        prev, j = words[y]
        mul[:, y] = right[j][mul[:, prev]]
    return mul


def direct_product(G: Group, H: Group, *, name: str | None = None) -> Group:
    """G x H with (g, h) stored at index g*|H| + h."""
    check_order_cap(G.order * H.order)
    m, n = G.order, H.order
    gm = G.mul.astype(np.int64)
    hm = H.mul.astype(np.int64)
    table = (gm[:, None, :, None] * n + hm[None, :, None, :]).reshape(m * n, m * n)
    named = {k: v * n for k, v in G.named.items()}
    for k, v in H.named.items():
        named[k if k not in named else k + "'"] = v
    gens = [g * n for g in G.generators()] + [h for h in H.generators()]
    return Group(table, source="product", name=name or f"{G.name}x{H.name}", named=named, gens=gens)


def quotient(G: Group, N: Iterable[int] | np.ndarray, *, name: str | None = None) -> tuple[Group, np.ndarray]:
    """G/N with cosets indexed by increasing minimal representative.

    Returns the quotient group and the projection ``proj[x]`` = coset index.
    """
    n = G.order
    mask = _as_mask(G, N)
    members = np.flatnonzero(mask)
    conj = G.conj_table()
    if not mask[conj[:, members]].all():
        raise NotNormal("subgroup is not normal")
    cosets = G.mul[:, members].astype(np.int64)  # row x: the coset xN
    reps = cosets.min(axis=1)
    uniq = np.unique(reps)
    proj = np.searchsorted(uniq, reps)
    qmul = proj[G.mul[uniq[:, None], uniq[None, :]]]
    named = {k: int(proj[v]) for k, v in G.named.items()}
    gens = sorted({int(proj[g]) for g in G.generators()} - {0})
    Q = Group(qmul, source="quotient", name=name or f"{G.name}/N{len(members)}", named=named, gens=gens or None)
    proj.flags.writeable = False
    return Q, proj


def central_product(G: Group, zg: int, H: Group, zh: int, *, name: str | None = None) -> Group:
    """(G x H) / <(zg, zh)> for central involutions zg, zh."""
    for grp, z in ((G, zg), (H, zh)):
        if grp.elt_order[z] != 2 or not (grp.mul[z] == grp.mul[:, z]).all():
            raise NotCentralInvolution(f"element {z} of {grp.name} is not a central involution")
    check_order_cap(G.order * H.order // 2)
    prod = direct_product(G, H)
    z = zg * H.order + zh
    Q, _ = quotient(prod, [0, z], name=name or f"{G.name}*{H.name}")
    return Q


def wreath_c2(G: Group, *, name: str | None = None) -> Group:
    """G wr C2: pairs (g1, g2) extended by the swap t, index e*|G|^2 + g1*|G| + g2."""
    m = G.order
    check_order_cap(2 * m * m)
    gm = G.mul.astype(np.int64)
    base = (gm[:, None, :, None] * m + gm[None, :, None, :]).reshape(m * m, m * m)
    swap = (np.arange(m * m) % m) * m + np.arange(m * m) // m
    b = m * m
    table = np.empty((2 * b, 2 * b), dtype=np.int64)
    table[:b, :b] = base
    table[:b, b:] = base + b
    swapped = base[:, swap]
    table[b:, :b] = swapped + b
    table[b:, b:] = swapped
    gens = [g * m for g in G.generators()] + [b]
    return Group(table, source="product", name=name or f"{G.name}wrC2", named={"t": b}, gens=gens)


def group_from_permutations(gens: Sequence[np.ndarray], *, limit: int | None = None, name: str | None = None):
    """Close permutations (arrays, composed left to right) into a Group.

    Returns ``(group, elements)`` where ``elements[i]`` is the permutation of
    group element ``i``; element 0 is the identity.  The product ``x*y``
    means "apply x, then y".
    """
    limit = get_caps().order if limit is None else limit
    degree = len(gens[0]) if gens else 0
    ident = np.arange(degree)
    elements = [ident]
    index = {ident.tobytes(): 0}
    words: list[tuple[int, int]] = [(0, -1)]
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    right_rows: list[list[int]] = [[] for _ in gens]
    i = 0
    while i < len(elements):
        x = elements[i]
        for j, g in enumerate(gens):
            y = g[x]
            key = y.tobytes()
            if key not in index:
                if len(elements) >= limit:
                    raise UnsupportedOrder(f"permutation group exceeds {limit} elements")
                index[key] = len(elements)
                elements.append(y)
                words.append((i, j))
            right_rows[j].append(index[key])
        i += 1
    n = len(elements)
    right = [np.asarray(r, dtype=np.int64) for r in right_rows]
    if not gens:
        right = []
    mul = table_from_right_actions(n, words, right) if n > 1 else np.zeros((1, 1), dtype=np.int64)
    gen_idx = [index[g.tobytes()] for g in gens]
    grp = Group(mul, source="construction", name=name or f"Perm{n}", gens=[g for g in gen_idx if g != 0] or None)
    return grp, elements


def subgroup_as_group(G: Group, members: Iterable[int] | np.ndarray, *, name: str | None = None) -> tuple[Group, np.ndarray]:
    """Re-index a subgroup as a standalone Group; returns (group, embedding)."""
    mask = _as_mask(G, members)
    elems = np.flatnonzero(mask)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    sub = pos[G.mul[elems[:, None], elems[None, :]]]
    if (sub < 0).any():
        raise ValueError("element set is not closed under multiplication")
    H = Group(sub, source="construction", name=name or f"{G.name}.sub{len(elems)}")
    elems.flags.writeable = False
    return H, elems


def _as_mask(G: Group, elements) -> np.ndarray:
    arr = np.asarray(elements)
    if arr.dtype == bool and arr.shape == (G.order,):
        return arr
    mask = np.zeros(G.order, dtype=bool)
    mask[np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements, dtype=np.int64)] = True
    return mask
