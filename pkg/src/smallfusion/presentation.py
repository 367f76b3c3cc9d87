"""Polycyclic presentations and a table-building collector.

A presentation lists generators g_0, ..., g_{k-1} with relative orders r_i.
Relations are

* ``g_i^{r_i} = w_i`` where ``w_i`` only involves generators after g_i;
* ``g_j^{g_i} = g_i^-1 g_j g_i = w_ij`` for i < j, again in generators after g_i.

Missing power relations default to the identity and missing conjugation
relations to "g_i and g_j commute".  Every element then has a unique normal
form g_0^{e_0} ... g_{k-1}^{e_{k-1}} with 0 <= e_i < r_i, and elements are
indexed by the lexicographic order of their exponent vectors.
"""

from __future__ import annotations

import itertools
import re
import sys
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import InconsistentPresentation, SemanticError
from .group import Group, check_order_cap, table_from_right_actions

Word = tuple[tuple[int, int], ...]  # (generator index, exponent) letters


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = next(q for q in range(2, n + 1) if n % q == 0)
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class PcPresentation:
    gens: tuple[str, ...]
    rel_orders: tuple[int, ...]
    power_rels: dict[int, Word] = field(default_factory=dict)
    conj_rels: dict[tuple[int, int], Word] = field(default_factory=dict)
    extra_rels: tuple[tuple[Word, Word], ...] = ()
    name: str = "G"

    def __post_init__(self):
        k = len(self.gens)
        if len(self.rel_orders) != k:
            raise SemanticError("one relative order per generator is required")
        if len(set(self.gens)) != k:
            raise SemanticError("duplicate generator name")
        for g, r in zip(self.gens, self.rel_orders):
            if not is_prime_power(r):
                raise SemanticError(f"relative order {r} of {g} is not a prime power")
        for i, w in self.power_rels.items():
            self._check_word(w, after=i, what=f"power relation of {self.gens[i]}")
        for (i, j), w in self.conj_rels.items():
            if not 0 <= i < j < k:
                raise SemanticError(
                    f"conjugation relation {self._name(j)}^{self._name(i)} must conjugate a later generator by an earlier one"
                )
            self._check_word(w, after=i, what=f"relation {self.gens[j]}^{self.gens[i]}")
        for lhs, rhs in self.extra_rels:
            self._check_word(lhs, after=-1, what="relation")
            self._check_word(rhs, after=-1, what="relation")

    def _name(self, i: int) -> str:
        return self.gens[i] if 0 <= i < len(self.gens) else f"#{i}"

    def _check_word(self, w: Word, after: int, what: str) -> None:
        for g, _ in w:
            if not 0 <= g < len(self.gens):
                raise SemanticError(f"{what} uses an undefined generator")
            if g <= after:
                raise SemanticError(f"{what} may only involve generators after {self.gens[after]}")

    @property
    def order(self) -> int:
        return prod(self.rel_orders)

    def index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise SemanticError(f"undefined generator {name!r}") from None


class _Collector:
    def __init__(self, pres: PcPresentation):
        self.pres = pres
        self.k = len(pres.gens)
        self.r = pres.rel_orders
        self.memo: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}
        self.zero = (0,) * self.k
        self.power_nf: list[tuple[int, ...]] = [self.zero] * self.k
        self.conj_nf: dict[tuple[int, int], tuple[int, ...]] = {}
        for i in reversed(range(self.k)):
            self.power_nf[i] = self.eval_word(pres.power_rels.get(i, ()))
            for j in range(i + 1, self.k):
                default = ((j, 1),)
                self.conj_nf[i, j] = self.eval_word(pres.conj_rels.get((i, j), default))

    def gen_nf(self, j: int) -> tuple[int, ...]:
        v = [0] * self.k
        v[j] = 1
        return tuple(v)

    def mul_gen(self, vec: tuple[int, ...], j: int) -> tuple[int, ...]:
        key = (vec, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        head = list(vec[: j + 1]) + [0] * (self.k - j - 1)
        head[j] += 1
        result = tuple(head)
        if head[j] == self.r[j]:
            head[j] = 0
            result = self.mul_vec(tuple(head), self.power_nf[j])
        for l in range(j + 1, self.k):
            for _ in range(vec[l]):
                result = self.mul_vec(result, self.conj_nf[j, l])
        self.memo[key] = result
        return result

    def mul_vec(self, vec: tuple[int, ...], other: tuple[int, ...]) -> tuple[int, ...]:
        for l, e in enumerate(other):
            for _ in range(e):
                vec = self.mul_gen(vec, l)
        return vec

    def inverse(self, vec: tuple[int, ...]) -> tuple[int, ...]:
        power, prev = vec, self.zero
        while power != self.zero:
            prev = power
            power = self.mul_vec(power, vec)
            if len(self.memo) > 50 * prod(self.r) * max(self.k, 1):
                raise InconsistentPresentation("collection does not terminate")
        return prev

    def eval_word(self, w) -> tuple[int, ...]:
        out = self.zero
        for g, e in w:
            base = self.gen_nf(g)
            if e < 0:
                base = self.inverse(base)
                e = -e
            for _ in range(e):
                out = self.mul_vec(out, base)
        return out


def collect(pres: PcPresentation, *, name: str | None = None) -> Group:
    """Build the Cayley table of the group defined by ``pres``.

    Raises InconsistentPresentation when the relations do not define a group
    of order prod(rel_orders), and UnsupportedOrder above the order cap.
    """
    n = pres.order
    check_order_cap(n)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        col = _Collector(pres)
        forms = list(itertools.product(*[range(r) for r in pres.rel_orders]))
        index = {f: i for i, f in enumerate(forms)}
        right = []
        for j in range(col.k):
            right.append(np.array([index[col.mul_gen(f, j)] for f in forms], dtype=np.int64))
    except RecursionError as exc:
        raise InconsistentPresentation("collection did not terminate") from exc
    finally:
        sys.setrecursionlimit(limit)

    for j, perm in enumerate(right):
        if len(np.unique(perm)) != n:
            raise InconsistentPresentation(f"right multiplication by {pres.gens[j]} is not a bijection")

    words: list[tuple[int, int]] = [(0, -1)]
    for f in forms[1:]:
        last = max(i for i, e in enumerate(f) if e)
        prev = list(f)
        prev[last] -= 1
        words.append((index[tuple(prev)], last))
    mul = table_from_right_actions(n, words, right)

    gen_idx = [index[col.gen_nf(j)] for j in range(col.k)]
    m64 = mul.astype(np.int64)
    ar = np.arange(n)
    for j, g in enumerate(gen_idx):
        if not np.array_equal(m64[m64, g], m64[ar[:, None], m64[:, g][None, :]]):
            raise InconsistentPresentation(f"associativity fails against generator {pres.gens[j]}")

    labels = [_format_nf(pres, f) for f in forms]
    G = Group(
        mul,
        source="presentation",
        name=name or pres.name,
        named={g: gen_idx[j] for j, g in enumerate(pres.gens)},
        labels=labels,
        gens=[g for g in gen_idx if g != 0],
    )
    _verify_relations(G, pres, gen_idx)
    return G


def _eval_in_group(G: Group, w, gen_idx) -> int:
    out = 0
    for g, e in w:
        x = gen_idx[g] if e >= 0 else int(G.inv[gen_idx[g]])
        for _ in range(abs(e)):
            out = int(G.mul[out, x])
    return out


def _verify_relations(G: Group, pres: PcPresentation, gen_idx) -> None:
    for i, r in enumerate(pres.rel_orders):
        lhs = G.power(gen_idx[i], r)
        if lhs != _eval_in_group(G, pres.power_rels.get(i, ()), gen_idx):
            raise InconsistentPresentation(f"power relation of {pres.gens[i]} fails after collection")
    for i in range(len(gen_idx)):
        for j in range(i + 1, len(gen_idx)):
            lhs = G.conj(gen_idx[j], gen_idx[i])
            rhs = _eval_in_group(G, pres.conj_rels.get((i, j), ((j, 1),)), gen_idx)
            if lhs != rhs:
                raise InconsistentPresentation(f"relation {pres.gens[j]}^{pres.gens[i]} fails after collection")
    for lhs, rhs in pres.extra_rels:
        if _eval_in_group(G, lhs, gen_idx) != _eval_in_group(G, rhs, gen_idx):
            raise InconsistentPresentation("an extra relation does not hold in the collected group")


def _format_nf(pres: PcPresentation, f) -> str:
    parts = []
    for g, e in zip(pres.gens, f):
        if e == 1:
            parts.append(g)
        elif e > 1:
            parts.append(f"{g}^{e}")
    return " ".join(parts) or "1"


_LETTER = re.compile(r"\s*([A-Za-z_]+)(?:\^(-?\d+))?\s*")


def parse_word(text: str, gens: tuple[str, ...]) -> Word:
    """Parse a juxtaposed word such as ``c^-1 a^2`` (``1`` is the empty word)."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m:
            raise SemanticError(f"cannot parse word {text!r}")
        name, exp = m.group(1), m.group(2)
        if name not in gens:
            raise SemanticError(f"undefined generator {name!r}")
        letters.append((gens.index(name), int(exp) if exp else 1))
        pos = m.end()
    return tuple(letters)


def pc(name: str, gens: str, pows: dict[str, str] | None = None, conjs: dict[str, str] | None = None) -> PcPresentation:
    """Compact constructor: ``pc("D8", "t:2, r:4", conjs={"r^t": "r^-1"})``."""
    names, orders = [], []
    for item in gens.split(","):
        g, _, r = item.strip().partition(":")
        names.append(g.strip())
        orders.append(int(r))
    names_t = tuple(names)
    power_rels = {names_t.index(g): parse_word(w, names_t) for g, w in (pows or {}).items()}
    conj_rels = {}
    for lhs, w in (conjs or {}).items():
        target, _, by = lhs.partition("^")
        conj_rels[names_t.index(by.strip()), names_t.index(target.strip())] = parse_word(w, names_t)
    return PcPresentation(names_t, tuple(orders), power_rels, conj_rels, name=name)
