"""Recognition and decomposition of expressible posets.

A finite poset is expressible when it can be assembled from singletons using
disjoint unions and joins (equivalently: it is series-parallel / N-free).
The sole obstruction is a full embedding of the four-element zig-zag
a < b > c < d; ``find_z`` searches for one, and ``decompose`` either produces
the canonical normal-form expression of the poset or returns the obstruction
it ran into.  Decomposition splits at the top: the elements lying strictly
below every maximal element form the lower join factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .expression import UNIT, Expression, Var, ox, tri
from .poset import FinitePoset, _mask_elements, from_pairs, induced

#: The zig-zag pattern: 0 < 1, 2 < 1, 2 < 3 and no other relations.
ZIGZAG = from_pairs(4, [(0, 1), (2, 1), (2, 3)])


@dataclass(frozen=True)
class Obstruction:
    """Four elements whose induced order is exactly the zig-zag."""

    elements: tuple[int, int, int, int]


@lru_cache(maxsize=1 << 18)
def find_z(p: FinitePoset) -> Obstruction | None:
    """The lexicographically least zig-zag quadruple, or None.

    A quadruple (a, b, c, d) qualifies when the induced order on those four
    elements is exactly a < b, c < b, c < d.
    """
    n = p.size
    for a in range(n):
        for b in range(n):
            if b == a or not p.lt(a, b):
                continue
            for c in range(n):
                if c in (a, b) or not p.lt(c, b) or p.comparable(a, c):
                    continue
                for d in range(n):
                    if d in (a, b, c) or not p.lt(c, d):
                        continue
                    if p.comparable(a, d) or p.comparable(b, d):
                        continue
                    return Obstruction((a, b, c, d))
    return None


def is_expressible(p: FinitePoset) -> bool:
    return find_z(p) is None


def decompose(p: FinitePoset) -> Union[Expression, Obstruction]:
    """Expression in normal form with evaluate(result) = p, or the obstruction.

    Variable indices are the poset's element indices.  Failure is a return
    value, not an exception, so callers branch on the result.
    """
    n = p.size
    rows = [p._row(i) for i in range(n)]
    cols = [p._col(i) for i in range(n)]
    neighbors = [rows[i] | cols[i] for i in range(n)]

    def components(mask: int) -> list[int]:
        comps = []
        seen = 0
        probe = mask
        while probe:
            start = probe & -probe
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    low = m & -m
                    m ^= low
                    nxt |= neighbors[low.bit_length() - 1]
                nxt &= mask
                frontier = nxt & ~comp
                comp |= nxt
            comps.append(comp)
            seen |= comp
            probe = mask & ~seen
        return comps

    def obstruction_in(mask: int) -> Obstruction:
        elems = _mask_elements(mask)
        witness = find_z(induced(p, elems))
        assert witness is not None, "split failed but no zig-zag found"
        return Obstruction(tuple(elems[k] for k in witness.elements))

    def rec(mask: int) -> Union[Expression, Obstruction]:
        if mask == 0:
            return UNIT
        if mask & (mask - 1) == 0:
            return Var(mask.bit_length() - 1)
        comps = components(mask)
        if len(comps) > 1:
            parts = []
            for comp in comps:
                sub = rec(comp)
                if isinstance(sub, Obstruction):
                    return sub
                parts.append(sub)
            return ox(*parts)
        maxima = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            if rows[low.bit_length() - 1] & mask == 0:
                maxima |= low
        bottom = 0
        m = mask & ~maxima
        while m:
            low = m & -m
            m ^= low
            if rows[low.bit_length() - 1] & maxima == maxima:
                bottom |= low
        top = mask & ~bottom
        if bottom == 0:
            return obstruction_in(mask)
        m = bottom
        while m:
            low = m & -m
            m ^= low
            if rows[low.bit_length() - 1] & top != top:
                # Some element escapes the join split; a zig-zag is hiding here.
                return obstruction_in(mask)
        lower = rec(bottom)
        if isinstance(lower, Obstruction):
            return lower
        upper = rec(top)
        if isinstance(upper, Obstruction):
            return upper
        return tri(lower, upper)

    return rec((1 << n) - 1)
