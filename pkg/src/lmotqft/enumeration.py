"""Exhaustive diagram generation, organised around a library of connected pieces.

The dashed part of any diagram splits into connected components.  Each
component, with its attachments forgotten but its univalent ends ("hands")
remembered, is a piece: a connected multigraph whose inner vertices are
trivalent.  Vertex cyclic orders are not part of a piece: changing them only
flips the sign of the eventual diagram, so the library fixes one arbitrary
choice per piece.  Enumerating all diagrams of a given degree on a skeleton
then means choosing a multiset of pieces of the right total degree and
distributing their hands over the skeleton edges and the colour palette in
every essentially different way, deduplicating canonically at the end.

Every piece arises from its spanning tree by closing pairs of hands, and
every uni-trivalent tree grows from the single strut by blowing up a hand
into a vertex with two fresh hands, so the library is generated by those two
moves.  Pieces with a dashed loop at a vertex are dropped: they die in every
placement.

Pieces are deduplicated by a multigraph certificate, not by the canonical
form of `diagrams`: with every hand carrying the same colour that engine has
nothing to break ties with and degenerates badly, while plain multigraph
isomorphism stays cheap via degree refinement.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Tuple

from .diagrams import (RawDiagram, Skeleton, canonical, empty_diagram,
                       empty_skeleton, leg_half, slot_half)

__all__ = ["Piece", "piece_key", "piece_library", "diagrams_on"]


class Piece:
    """A connected dashed graph whose hands are colour-0 legs."""

    __slots__ = ("raw", "hands", "degree2")

    def __init__(self, raw: RawDiagram):
        self.raw = raw
        self.hands = tuple(sorted(l for l, _ in raw.colored))
        self.degree2 = raw.n_verts + len(self.hands)

    def __repr__(self):
        return "Piece(verts=%d, hands=%d)" % (self.raw.n_verts, len(self.hands))


def piece_key(raw: RawDiagram) -> Tuple:
    """Isomorphism certificate of a piece's underlying multigraph.

    Encodes, per inner vertex, its hand count and its edge multiplicities to
    the other vertices, minimised over relabellings.  Hand-to-hand struts
    are listed separately since they have no vertex to hang from.
    """
    v = raw.n_verts
    mate = raw.mate
    hand_count = [0] * v
    adj: Dict[Tuple[int, int], int] = {}
    struts = 0
    for a, b in raw.pairs:
        if a[0] == "v" and b[0] == "v":
            u, w = sorted((a[1], b[1]))
            adj[(u, w)] = adj.get((u, w), 0) + 1
        elif a[0] == "v":
            hand_count[a[1]] += 1
        elif b[0] == "v":
            hand_count[b[1]] += 1
        else:
            struts += 1
    if v == 0:
        return ("struts", struts)
    return ("graph", struts, _multigraph_cert(v, hand_count, adj))


def _multigraph_cert(v: int, hand_count: List[int], adj: Dict) -> Tuple:
    nbrs: List[Dict[int, int]] = [dict() for _ in range(v)]
    for (u, w), m in adj.items():
        nbrs[u][w] = m
        nbrs[w][u] = m
    # Refine vertex classes by hand count and neighbourhood until stable.
    colors = list(hand_count)
    for _ in range(v):
        sig = [(colors[w], tuple(sorted((m, colors[u])
                                        for u, m in nbrs[w].items())))
               for w in range(v)]
        order = sorted(set(sig))
        new = [order.index(s) for s in sig]
        if new == colors:
            break
        colors = new
    classes: Dict[int, List[int]] = {}
    for w in range(v):
        classes.setdefault(colors[w], []).append(w)
    blocks = [classes[c] for c in sorted(classes)]
    best = None
    # True minimum over the refinement-respecting relabellings; the classes
    # are isomorphism-invariant, so this is a complete certificate.
    for perms in itertools.product(*[itertools.permutations(b) for b in blocks]):
        flat = [w for p in perms for w in p]
        pos = {w: i for i, w in enumerate(flat)}
        mat = tuple(sorted((min(pos[u], pos[w]), max(pos[u], pos[w]), m)
                           for (u, w), m in adj.items()))
        hands = tuple(hand_count[w] for w in flat)
        cand = (hands, mat)
        if best is None or cand < best:
            best = cand
    return best


_PALETTE1 = empty_skeleton(1)


def _strut() -> RawDiagram:
    return RawDiagram(_PALETTE1, [], [(0, 0), (1, 0)],
                      [(leg_half(0), leg_half(1))], 0)


def _expand_hand(raw: RawDiagram, hand: int) -> RawDiagram:
    """Replace a hand by a new inner vertex carrying two fresh hands."""
    far = raw.mate[leg_half(hand)]
    w = raw.n_verts
    top = max(l for l, _ in raw.colored)
    y1, y2 = top + 1, top + 2
    colored = [(l, c) for l, c in raw.colored if l != hand]
    colored += [(y1, 0), (y2, 0)]
    pairs = [p for p in raw.pairs if leg_half(hand) not in p]
    pairs += [(far, slot_half(w, 0)),
              (slot_half(w, 1), leg_half(y1)),
              (slot_half(w, 2), leg_half(y2))]
    return RawDiagram(raw.skel, [], colored, pairs, w + 1)


def _join_hands(raw: RawDiagram, x: int, y: int) -> Optional[RawDiagram]:
    """Connect the far ends of two hands; None when the result is worthless."""
    mx, my = raw.mate[leg_half(x)], raw.mate[leg_half(y)]
    if mx == leg_half(y):
        return None             # the bare strut closing into a free loop
    if mx[0] == "v" and my[0] == "v" and mx[1] == my[1]:
        return None             # dashed loop at one vertex, zero everywhere
    colored = [(l, c) for l, c in raw.colored if l not in (x, y)]
    hx, hy = leg_half(x), leg_half(y)
    pairs = [p for p in raw.pairs if hx not in p and hy not in p]
    pairs.append((mx, my))
    return RawDiagram(raw.skel, [], colored, pairs, raw.n_verts)


_library_cache: Dict[int, Tuple[Piece, ...]] = {}


def piece_library(max_degree: int) -> Tuple[Piece, ...]:
    """All pieces of degree at most max_degree, sorted by degree.

    A piece of v vertices and h hands has twice-degree v + h.  Trees have
    h = v + 2, so intermediate trees above the degree bound still matter:
    joining hands lowers the degree down to roughly v/2.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    hit = _library_cache.get(max_degree)
    if hit is not None:
        return hit
    max2 = 2 * max_degree
    seen = set()
    work: List[RawDiagram] = []

    def admit(r: RawDiagram):
        k = piece_key(r)
        if k not in seen:
            seen.add(k)
            work.append(r)

    admit(_strut())
    i = 0
    while i < len(work):
        r = work[i]
        i += 1
        hands = [l for l, _ in r.colored]
        if len(hands) == r.n_verts + 2:
            # Still a tree; grow it while a descendant could make the bound.
            v2 = r.n_verts + 1
            if v2 + (v2 % 2) <= max2:
                for h in hands:
                    admit(_expand_hand(r, h))
        for x, y in itertools.combinations(hands, 2):
            r2 = _join_hands(r, x, y)
            if r2 is not None:
                admit(r2)
    pieces = [Piece(r) for r in work
              if r.n_verts + len(r.colored) <= max2]
    pieces.sort(key=lambda p: (p.degree2, piece_key(p.raw)))
    out = tuple(pieces)
    _library_cache[max_degree] = out
    return out


def _assemble(skel: Skeleton, instances, edge_seqs, color_assign) -> RawDiagram:
    leg_ids: Dict[Tuple[int, int], int] = {}

    def lid(i, h):
        k = (i, h)
        r = leg_ids.get(k)
        if r is None:
            r = len(leg_ids)
            leg_ids[k] = r
        return r

    edge_legs = [[lid(i, h) for (i, h) in seq] for seq in edge_seqs]
    colored = [(lid(i, h), c) for (i, h), c in sorted(color_assign.items())]
    pairs = []
    vbase = 0
    for i, p in enumerate(instances):
        for a, b in p.raw.pairs:
            moved = []
            for half in (a, b):
                if half[0] == "l":
                    moved.append(leg_half(lid(i, half[1])))
                else:
                    moved.append(slot_half(half[1] + vbase, half[2]))
            pairs.append(tuple(moved))
        vbase += p.raw.n_verts
    return RawDiagram(skel, edge_legs, colored, pairs, vbase)


def _place(skel: Skeleton, instances: List[Piece], found: set):
    """Drop every hand of every instance onto the skeleton, all ways.

    Hands are processed in a fixed global order; a hand put on an edge picks
    an insertion point among the legs already there, so each final layout is
    produced exactly once.  Runs of identical pieces are tamed by requiring
    their first hands to land at non-decreasing targets; the surviving
    duplicates fall to the canonical dedup.
    """
    E = len(skel.edges)
    C = skel.n_colors
    hands = [(i, h) for i, p in enumerate(instances) for h in p.hands]
    edge_seqs: List[List[Tuple[int, int]]] = [[] for _ in range(E)]
    color_assign: Dict[Tuple[int, int], int] = {}
    first_target: Dict[int, Tuple] = {}

    def rec(j):
        if j == len(hands):
            raw = _assemble(skel, instances, edge_seqs, color_assign)
            key, sign = canonical(raw)
            if sign:
                found.add(key)
            return
        i, h = hands[j]
        p = instances[i]
        is_first = h == p.hands[0]
        bound = None
        if is_first and i > 0 and instances[i - 1] is p:
            bound = first_target.get(i - 1)
        for c in range(C):
            tok = ("c", c)
            if bound is not None and tok < bound:
                continue
            if is_first:
                first_target[i] = tok
            color_assign[(i, h)] = c
            rec(j + 1)
            del color_assign[(i, h)]
        for e in range(E):
            tok = ("e", e)
            if bound is not None and tok < bound:
                continue
            if is_first:
                first_target[i] = tok
            seq = edge_seqs[e]
            # Rotations of a cyclic edge are identified later anyway, so pin
            # the earliest-placed hand there to the front.
            lo = 1 if (seq and skel.is_cyclic(e)) else 0
            for pos in range(lo, len(seq) + 1):
                seq.insert(pos, (i, h))
                rec(j + 1)
                seq.pop(pos)

    rec(0)


_diagrams_cache: Dict[Tuple, Tuple] = {}


def diagrams_on(skel: Skeleton, degree: int, closed_parts: bool = True) -> Tuple:
    """Canonical keys of every nonzero diagram of the given degree.

    With closed_parts False, handless pieces are excluded, so each dashed
    component of each result touches the skeleton or the palette.  The
    result is sorted and memoised per skeleton.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    ck = (skel.key, degree, closed_parts)
    hit = _diagrams_cache.get(ck)
    if hit is not None:
        return hit
    if degree == 0:
        key, _ = canonical(empty_diagram(skel))
        out = (key,)
    else:
        lib = [p for p in piece_library(degree) if p.hands or closed_parts]
        found: set = set()
        target2 = 2 * degree

        def choose(idx, left2, chosen):
            if left2 == 0:
                _place(skel, chosen, found)
                return
            if idx == len(lib):
                return
            p = lib[idx]
            for cnt in range(left2 // p.degree2, -1, -1):
                choose(idx + 1, left2 - cnt * p.degree2, chosen + [p] * cnt)

        choose(0, target2, [])
        out = tuple(sorted(found))
    _diagrams_cache[ck] = out
    return out
