"""Derivation and checking of duoidal structure maps between expressible posets.

A structure map from P to Q exists exactly when the identity on elements is an
inclusion of expressible posets; the derivation produced here is a tree whose
nodes are the generating moves: canonical-form coercion (Equiv), sequential
composition, parallel application under either product, and substitution of
four sub-derivations into the corners of the lax interchanger
(a tri b) ox (c tri d) -> (a ox c) tri (b ox d).

The construction mirrors the recursive factorization through the interchanger:
peel off disjoint-union layers of the target, then join layers of the source,
and in the crossing case route through the three-step interchanger
factorization on the four overlap blocks.  Unit corners are absorbed by the
normal form, which is how the comparitor a ox b -> a tri b shows up as a
degenerate interchanger.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import DepcalcError, NotExpressible, NotInclusion
from .expression import (
    Expression,
    evaluate_labeled,
    format_expression,
    ox,
    rename_vars,
    tri,
)
from .expressible import Obstruction, decompose, find_z
from .poset import FinitePoset, from_pairs, is_inclusion

Rel = frozenset  # of (label, label) pairs
Labels = tuple  # sorted labels


@dataclass(frozen=True)
class Equiv:
    source: Expression
    target: Expression


@dataclass(frozen=True)
class Compose:
    left: "Proof"
    right: "Proof"


@dataclass(frozen=True)
class OtimesPar:
    parts: tuple["Proof", ...]


@dataclass(frozen=True)
class TriPar:
    parts: tuple["Proof", ...]


@dataclass(frozen=True)
class InterchangerSubst:
    """Corners in reading order: (a tri b) ox (c tri d) -> (a ox c) tri (b ox d)."""

    corner_a: "Proof"
    corner_b: "Proof"
    corner_c: "Proof"
    corner_d: "Proof"

    @property
    def corners(self) -> tuple["Proof", ...]:
        return (self.corner_a, self.corner_b, self.corner_c, self.corner_d)


Proof = Union[Equiv, Compose, OtimesPar, TriPar, InterchangerSubst]


def proof_source(p: Proof) -> Expression:
    if isinstance(p, Equiv):
        return p.source
    if isinstance(p, Compose):
        return proof_source(p.left)
    if isinstance(p, OtimesPar):
        return ox(*(proof_source(c) for c in p.parts))
    if isinstance(p, TriPar):
        return tri(*(proof_source(c) for c in p.parts))
    a, b, c, d = (proof_source(c) for c in p.corners)
    return ox(tri(a, b), tri(c, d))


def proof_target(p: Proof) -> Expression:
    if isinstance(p, Equiv):
        return p.target
    if isinstance(p, Compose):
        return proof_target(p.right)
    if isinstance(p, OtimesPar):
        return ox(*(proof_target(c) for c in p.parts))
    if isinstance(p, TriPar):
        return tri(*(proof_target(c) for c in p.parts))
    a, b, c, d = (proof_target(c) for c in p.corners)
    return tri(ox(a, c), ox(b, d))


# ---------------------------------------------------------------------------
# Labeled-poset helpers (relations as frozensets of label pairs)

def _restrict(rel: Rel, sub: Labels) -> Rel:
    keep = set(sub)
    return frozenset(pair for pair in rel if pair[0] in keep and pair[1] in keep)


def _components(rel: Rel, labels: Labels) -> list[Labels]:
    adj: dict[int, set[int]] = {v: set() for v in labels}
    for x, y in rel:
        adj[x].add(y)
        adj[y].add(x)
    seen: set[int] = set()
    comps = []
    for start in labels:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        comps.append(tuple(sorted(comp)))
    return comps


def _join_split(rel: Rel, labels: Labels) -> tuple[Labels, Labels] | None:
    """Split into (lower, upper) with every lower element below every upper one.

    Uses the canonical top split: the lower part is the set of elements
    strictly below every maximal element.  Returns None when the poset is not
    a join of nonempty parts.
    """
    if len(labels) < 2:
        return None
    above: dict[int, set[int]] = {v: set() for v in labels}
    for x, y in rel:
        above[x].add(y)
    maxima = [v for v in labels if not above[v]]
    bottom = tuple(v for v in labels if all(m in above[v] for m in maxima))
    if not bottom:
        return None
    top = tuple(v for v in labels if v not in set(bottom))
    for v in bottom:
        if not all(u in above[v] for u in top):
            return None
    return bottom, top


@lru_cache(maxsize=None)
def _expr_of(rel: Rel, labels: Labels) -> Expression:
    """Canonical expression of an expressible labeled poset."""
    index = {v: k for k, v in enumerate(labels)}
    packed = from_pairs(len(labels), [(index[x], index[y]) for x, y in rel])
    expr = decompose(packed)
    assert not isinstance(expr, Obstruction), "labeled sub-poset must be expressible"
    return rename_vars(expr, dict(enumerate(labels)))


def _cross(a: Labels, b: Labels) -> set[tuple[int, int]]:
    return {(x, y) for x in a for y in b}


@lru_cache(maxsize=None)
def _derive(rel_a: Rel, rel_b: Rel, labels: Labels) -> Proof:
    # Memoized: sweeps over many poset pairs hit the same labeled subproblems.
    if rel_a == rel_b:
        e = _expr_of(rel_a, labels)
        return Equiv(e, e)

    comps_b = _components(rel_b, labels)
    if len(comps_b) > 1:
        return OtimesPar(
            tuple(_derive(_restrict(rel_a, c), _restrict(rel_b, c), c) for c in comps_b)
        )

    split_a = _join_split(rel_a, labels)
    if split_a is not None:
        bot, top = split_a
        return TriPar(
            (
                _derive(_restrict(rel_a, bot), _restrict(rel_b, bot), bot),
                _derive(_restrict(rel_a, top), _restrict(rel_b, top), top),
            )
        )

    # Crossing case: the source splits as a disjoint union, the target as a
    # join, and the identity factors through the interchanger on the four
    # overlap blocks.
    comps_a = _components(rel_a, labels)
    split_b = _join_split(rel_b, labels)
    assert len(comps_a) > 1 and split_b is not None, "inputs must be expressible"
    a1 = comps_a[0]
    a2 = tuple(sorted(v for c in comps_a[1:] for v in c))
    b1, b2 = split_b
    blocks = {
        (1, 1): tuple(v for v in a1 if v in set(b1)),
        (1, 2): tuple(v for v in a1 if v in set(b2)),
        (2, 1): tuple(v for v in a2 if v in set(b1)),
        (2, 2): tuple(v for v in a2 if v in set(b2)),
    }

    def joined_source(left: Labels, right: Labels) -> Rel:
        return frozenset(
            set(_restrict(rel_a, left)) | set(_restrict(rel_a, right)) | _cross(left, right)
        )

    step1 = OtimesPar(
        (
            _derive(_restrict(rel_a, a1), joined_source(blocks[1, 1], blocks[1, 2]), a1),
            _derive(_restrict(rel_a, a2), joined_source(blocks[2, 1], blocks[2, 2]), a2),
        )
    )
    middle = InterchangerSubst(
        *(
            _derive(_restrict(rel_a, blocks[key]), _restrict(rel_b, blocks[key]), blocks[key])
            for key in ((1, 1), (1, 2), (2, 1), (2, 2))
        )
    )

    def union_rel(left: Labels, right: Labels) -> Rel:
        return frozenset(set(_restrict(rel_b, left)) | set(_restrict(rel_b, right)))

    step3 = TriPar(
        (
            _derive(union_rel(blocks[1, 1], blocks[2, 1]), _restrict(rel_b, b1), b1),
            _derive(union_rel(blocks[1, 2], blocks[2, 2]), _restrict(rel_b, b2), b2),
        )
    )
    return Compose(Compose(step1, middle), step3)


def _is_identity(p: Proof) -> bool:
    return isinstance(p, Equiv) and p.source == p.target


@lru_cache(maxsize=None)
def _simplify(p: Proof) -> Proof:
    if isinstance(p, Equiv):
        return p
    if isinstance(p, Compose):
        left, right = _simplify(p.left), _simplify(p.right)
        if _is_identity(left):
            return right
        if _is_identity(right):
            return left
        return Compose(left, right)
    if isinstance(p, (OtimesPar, TriPar)):
        parts = tuple(_simplify(c) for c in p.parts)
        if all(_is_identity(c) for c in parts):
            src = proof_source(type(p)(parts))
            return Equiv(src, src)
        return type(p)(parts)
    corners = tuple(_simplify(c) for c in p.corners)
    return InterchangerSubst(*corners)


def derive_structure_map(p: FinitePoset, q: FinitePoset) -> Proof:
    """A derivation witnessing the inclusion p -> q between expressible posets.

    Raises NotInclusion when the identity is not monotone from p to q, and
    NotExpressible (carrying the zig-zag) when either poset fails recognition.
    """
    if not is_inclusion(p, q):
        raise NotInclusion(f"no identity-on-elements inclusion ({p!r} into {q!r})")
    for side in (p, q):
        witness = find_z(side)
        if witness is not None:
            raise NotExpressible(witness)
    labels = tuple(range(p.size))
    proof = _derive(frozenset(p.pairs()), frozenset(q.pairs()), labels)
    return _simplify(proof)


def verify_proof(p: Proof) -> bool:
    """Check every node invariant; endpoints must evaluate to included posets."""
    try:
        return _verify(p)
    except (DepcalcError, AssertionError):
        return False


@lru_cache(maxsize=None)
def _verify(p: Proof) -> bool:
    rel_s, labels_s = evaluate_labeled(proof_source(p))
    rel_t, labels_t = evaluate_labeled(proof_target(p))
    if labels_s != labels_t or not rel_s <= rel_t:
        return False
    if isinstance(p, Equiv):
        return rel_s == rel_t
    if isinstance(p, Compose):
        return (
            proof_target(p.left) == proof_source(p.right)
            and _verify(p.left)
            and _verify(p.right)
        )
    if isinstance(p, (OtimesPar, TriPar)):
        return all(_verify(c) for c in p.parts)
    if isinstance(p, InterchangerSubst):
        return all(_verify(c) for c in p.corners)
    return False


def format_proof(p: Proof) -> str:
    """Indented derivation-tree text, one node kind per line."""
    lines: list[str] = []

    def emit(node: Proof, depth: int) -> None:
        pad = "  " * depth
        src = format_expression(proof_source(node))
        tgt = format_expression(proof_target(node))
        if isinstance(node, Equiv):
            lines.append(f"{pad}equiv: {src} => {tgt}")
        elif isinstance(node, Compose):
            lines.append(f"{pad}compose: {src} => {tgt}")
            emit(node.left, depth + 1)
            emit(node.right, depth + 1)
        elif isinstance(node, OtimesPar):
            lines.append(f"{pad}otimes-par: {src} => {tgt}")
            for c in node.parts:
                emit(c, depth + 1)
        elif isinstance(node, TriPar):
            lines.append(f"{pad}tri-par: {src} => {tgt}")
            for c in node.parts:
                emit(c, depth + 1)
        else:
            lines.append(f"{pad}interchanger-subst: {src} => {tgt}")
            for c in node.corners:
                emit(c, depth + 1)

    emit(p, 0)
    return "\n".join(lines)


def proof_to_json_dict(p: Proof) -> dict:
    base = {
        "source": format_expression(proof_source(p)),
        "target": format_expression(proof_target(p)),
    }
    if isinstance(p, Equiv):
        return {"kind": "equiv", **base}
    if isinstance(p, Compose):
        return {
            "kind": "compose",
            **base,
            "children": [proof_to_json_dict(p.left), proof_to_json_dict(p.right)],
        }
    if isinstance(p, OtimesPar):
        kind = "otimes-par"
    elif isinstance(p, TriPar):
        kind = "tri-par"
    else:
        return {
            "kind": "interchanger-subst",
            **base,
            "children": [proof_to_json_dict(c) for c in p.corners],
        }
    return {"kind": kind, **base, "children": [proof_to_json_dict(c) for c in p.parts]}
