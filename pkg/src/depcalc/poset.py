"""Finite strict partial orders on the carrier {0..n-1}.

Every poset in this package lives on an initial segment of the naturals and
stores its strict relation transitively closed, packed row-major into a single
int (bit i*n+j set means i < j).  Keeping the closure materialized makes
inclusion testing, chain enumeration, and the substitution product cheap at
the small sizes this calculus targets; antisymmetry reduces to the absence of
mutually related pairs and irreflexivity to an empty diagonal.

The three building operations fix a canonical block numbering (first argument
first, blocks contiguous), so disjoint union and join are strictly associative
and unital on the nose and equality of posets is literal equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import ArityError, CycleError, SizeError

ENUMERATION_GUARD = 6  # labeled posets on 7 elements already number in the millions


@dataclass(frozen=True)
class FinitePoset:
    """A strict partial order, transitively closed, on elements 0..size-1.

    ``bits`` is internal; build values through :func:`from_pairs` or the
    constructors below, which guarantee closure.
    """

    size: int
    bits: int = 0

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be nonnegative")
        if self.bits >> (self.size * self.size):
            raise ValueError("relation bits out of range for size")

    def lt(self, i: int, j: int) -> bool:
        """True iff i < j in this poset."""
        return bool(self.bits >> (i * self.size + j) & 1)

    def pairs(self) -> list[tuple[int, int]]:
        """All related pairs (i, j) with i < j, in lexicographic order."""
        n = self.size
        return [(i, j) for i in range(n) for j in range(n) if self.bits >> (i * n + j) & 1]

    def above(self, i: int) -> tuple[int, ...]:
        """Elements strictly above i."""
        return _mask_elements(self._row(i))

    def below(self, i: int) -> tuple[int, ...]:
        """Elements strictly below i."""
        return _mask_elements(self._col(i))

    def comparable(self, i: int, j: int) -> bool:
        return self.lt(i, j) or self.lt(j, i)

    def _row(self, i: int) -> int:
        n = self.size
        return self.bits >> (i * n) & ((1 << n) - 1)

    def _col(self, j: int) -> int:
        n = self.size
        col = 0
        for i in range(n):
            col |= (self.bits >> (i * n + j) & 1) << i
        return col

    def check_valid(self) -> None:
        """Raise if any poset axiom or the closure invariant fails."""
        n = self.size
        for i in range(n):
            if self.lt(i, i):
                raise ValueError(f"irreflexivity violated at {i}")
        for i in range(n):
            for j in range(n):
                if self.lt(i, j) and self.lt(j, i):
                    raise ValueError(f"antisymmetry violated at ({i}, {j})")
                if self.lt(i, j):
                    for k in range(n):
                        if self.lt(j, k) and not self.lt(i, k):
                            raise ValueError(f"not transitively closed at ({i}, {j}, {k})")

    def __repr__(self):
        return f"FinitePoset({self.size}, {self.pairs()!r})"


def _mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _pack(size: int, pairs: Iterable[tuple[int, int]]) -> FinitePoset:
    # Fast path for relations already known to be transitively closed.
    bits = 0
    for i, j in pairs:
        bits |= 1 << (i * size + j)
    return FinitePoset(size, bits)


def from_pairs(size: int, pairs: Iterable[tuple[int, int]]) -> FinitePoset:
    """Transitive closure of the given strict pairs as a poset.

    Raises IndexError for out-of-range indices and CycleError if the closure
    would violate irreflexivity or antisymmetry.
    """
    rows = [0] * size
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise IndexError(f"pair ({i}, {j}) out of range for size {size}")
        if i == j:
            raise CycleError((i, j))
        rows[i] |= 1 << j
    for k in range(size):
        rk = rows[k]
        for i in range(size):
            if rows[i] >> k & 1:
                rows[i] |= rk
    for i in range(size):
        for j in range(size):
            if rows[i] >> j & 1 and rows[j] >> i & 1:
                raise CycleError((i, j))
    bits = 0
    for i in range(size):
        bits |= rows[i] << (i * size)
    return FinitePoset(size, bits)


def empty() -> FinitePoset:
    return FinitePoset(0, 0)


def singleton() -> FinitePoset:
    return FinitePoset(1, 0)


def chain(n: int) -> FinitePoset:
    """The linear order 0 < 1 < ... < n-1."""
    return _pack(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def antichain(n: int) -> FinitePoset:
    return FinitePoset(n, 0)


def disjoint_union(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Side-by-side placement: q's elements are shifted up by |p|, no cross pairs."""
    np_ = p.size
    pairs = p.pairs() + [(i + np_, j + np_) for i, j in q.pairs()]
    return _pack(np_ + q.size, pairs)


def join(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Disjoint union plus every relation from a p-element to a q-element."""
    np_, nq = p.size, q.size
    pairs = p.pairs() + [(i + np_, j + np_) for i, j in q.pairs()]
    pairs += [(i, j + np_) for i in range(np_) for j in range(nq)]
    return _pack(np_ + nq, pairs)


def substitute(p: FinitePoset, parts: list[FinitePoset]) -> FinitePoset:
    """Lexicographic substitution of one poset per element of p.

    Block a occupies the contiguous index range starting at the sum of the
    earlier block sizes; x in block a precedes y in block b iff a < b in p, or
    a = b and x < y inside the block.
    """
    if len(parts) != p.size:
        raise ArityError(f"expected {p.size} parts, got {len(parts)}")
    offsets = [0] * (p.size + 1)
    for a, part in enumerate(parts):
        offsets[a + 1] = offsets[a] + part.size
    pairs: list[tuple[int, int]] = []
    for a, part in enumerate(parts):
        base = offsets[a]
        pairs += [(base + i, base + j) for i, j in part.pairs()]
    for a, b in p.pairs():
        pairs += [
            (x, y)
            for x in range(offsets[a], offsets[a + 1])
            for y in range(offsets[b], offsets[b + 1])
        ]
    return _pack(offsets[-1], pairs)


def is_inclusion(p: FinitePoset, q: FinitePoset) -> bool:
    """True iff the identity on elements is monotone from p to q."""
    return p.size == q.size and p.bits & ~q.bits == 0


def induced(p: FinitePoset, elements: Iterable[int]) -> FinitePoset:
    """Full sub-poset on the given elements, renumbered by position."""
    elems = list(elements)
    index = {e: k for k, e in enumerate(elems)}
    if len(index) != len(elems):
        raise ValueError("duplicate elements")
    pairs = [(index[i], index[j]) for i, j in p.pairs() if i in index and j in index]
    return _pack(len(elems), pairs)


@dataclass(frozen=True)
class Embedding:
    """An injective, order-preserving and order-reflecting element map."""

    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]


def full_embeddings(pattern: FinitePoset, target: FinitePoset) -> list[Embedding]:
    """All injections m with i < j in pattern iff m(i) < m(j) in target."""
    k, n = pattern.size, target.size
    if k > n:
        return []
    out: list[Embedding] = []
    image = [0] * k
    used = [False] * n

    def place(idx: int) -> None:
        if idx == k:
            out.append(Embedding(tuple(image)))
            return
        for cand in range(n):
            if used[cand]:
                continue
            ok = True
            for prev in range(idx):
                if pattern.lt(prev, idx) != target.lt(image[prev], cand) or pattern.lt(
                    idx, prev
                ) != target.lt(cand, image[prev]):
                    ok = False
                    break
            if ok:
                used[cand] = True
                image[idx] = cand
                place(idx + 1)
                used[cand] = False

    place(0)
    return out


def linear_extensions(p: FinitePoset) -> list[tuple[int, ...]]:
    """Every total order containing p, as element sequences bottom to top."""
    n = p.size
    preds = [p._col(i) for i in range(n)]
    out: list[tuple[int, ...]] = []
    order: list[int] = []

    def rec(remaining: int) -> None:
        if not remaining:
            out.append(tuple(order))
            return
        m = remaining
        while m:
            low = m & -m
            m ^= low
            e = low.bit_length() - 1
            if preds[e] & remaining:
                continue
            order.append(e)
            rec(remaining ^ low)
            order.pop()

    rec((1 << n) - 1)
    return out


def is_linear_extension(p: FinitePoset, order: tuple[int, ...]) -> bool:
    if sorted(order) != list(range(p.size)):
        return False
    position = {e: k for k, e in enumerate(order)}
    return all(position[i] < position[j] for i, j in p.pairs())


def chains(p: FinitePoset) -> list[tuple[int, ...]]:
    """All nonempty strictly increasing element sequences, lexicographically."""
    n = p.size
    out: list[tuple[int, ...]] = []

    def extend(seq: list[int]) -> None:
        out.append(tuple(seq))
        for j in p.above(seq[-1]):
            seq.append(j)
            extend(seq)
            seq.pop()

    for start in range(n):
        extend([start])
    return out


def connected_components(p: FinitePoset) -> list[tuple[int, ...]]:
    """Components of the undirected comparability graph, sorted by least element."""
    n = p.size
    neighbors = [p._row(i) | p._col(i) for i in range(n)]
    seen = 0
    comps: list[tuple[int, ...]] = []
    for start in range(n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                m ^= low
                nxt |= neighbors[low.bit_length() - 1]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append(_mask_elements(comp))
    return comps


def transitive_reduction(p: FinitePoset) -> list[tuple[int, int]]:
    """The cover pairs: the minimal pair set whose closure is the relation."""
    n = p.size
    covers = []
    for i, j in p.pairs():
        if not any(p.lt(i, k) and p.lt(k, j) for k in range(n)):
            covers.append((i, j))
    return covers


def enumerate_posets(n: int) -> Iterator[FinitePoset]:
    """Every labeled poset on n elements exactly once, in a deterministic order.

    Guarded at n <= 6; beyond that the exhaustive-oracle role this serves is
    moot and the counts explode.
    """
    if n < 0:
        raise SizeError("n must be nonnegative")
    if n > ENUMERATION_GUARD:
        raise SizeError(f"enumerate_posets is guarded at n <= {ENUMERATION_GUARD}")
    return _enumerate(n)


def _enumerate(n: int) -> Iterator[FinitePoset]:
    if n == 0:
        yield empty()
        return
    k = n - 1
    full = (1 << k) - 1
    for base in _enumerate(k):
        rows = [base._row(i) for i in range(k)]
        cols = [base._col(i) for i in range(k)]
        down_closed = [
            d for d in range(full + 1) if all(cols[x] & ~d == 0 for x in _mask_elements(d))
        ]
        for d in down_closed:
            allowed = full & ~d
            for x in _mask_elements(d):
                allowed &= rows[x]
            # Subsets of `allowed`, ascending, keeping only up-closed ones.
            u = 0
            while True:
                if all(rows[x] & ~u == 0 for x in _mask_elements(u)):
                    pairs = base.pairs()
                    pairs += [(x, k) for x in _mask_elements(d)]
                    pairs += [(k, x) for x in _mask_elements(u)]
                    yield _pack(n, pairs)
                if u == allowed:
                    break
                u = (u - allowed) & allowed


# ---------------------------------------------------------------------------
# Serialization

def to_json_dict(p: FinitePoset) -> dict:
    """Poset JSON value: {"elements": n, "relations": [[i, j], ...]}."""
    return {"elements": p.size, "relations": [list(pair) for pair in p.pairs()]}


def from_json_dict(data: dict) -> FinitePoset:
    """Parse the poset JSON shape; closure is computed on load."""
    if not isinstance(data, dict) or "elements" not in data:
        raise ValueError("poset JSON must be an object with an 'elements' field")
    n = data["elements"]
    relations = data.get("relations", [])
    if not isinstance(n, int) or n < 0:
        raise ValueError("'elements' must be a nonnegative integer")
    pairs = []
    for item in relations:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise ValueError(f"bad relation entry {item!r}")
        pairs.append((int(item[0]), int(item[1])))
    return from_pairs(n, pairs)


def to_json(p: FinitePoset) -> str:
    return json.dumps(to_json_dict(p), sort_keys=True)


def from_json(text: str) -> FinitePoset:
    return from_json_dict(json.loads(text))


def to_dot(p: FinitePoset) -> str:
    """DOT digraph: one node per element, one arrow per cover pair."""
    lines = ["digraph poset {"]
    for i in range(p.size):
        lines.append(f"  {i};")
    for i, j in transitive_reduction(p):
        lines.append(f"  {i} -> {j};")
    lines.append("}")
    return "\n".join(lines)
