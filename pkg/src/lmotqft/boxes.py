"""Box attachments and the relations they generate.

A box stands for a signed sum of single-end attachments across a bundle
of parallel edges.  A bold bundle edge receives a plain leg and carries
the orientation sign as coefficient; a dashed bundle edge is spliced with
a fresh inner vertex and carries coefficient one.  With this bookkeeping
the two box relations reduce, bundle edge by bundle edge, to sliding and
reconnection relations, which is what the relation tests exercise.

Pending ends are modelled as colored legs: a diagram with a marked open
dashed end is a RawDiagram on a palette skeleton with exactly one leg of
the marking color.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .diagrams import (RawDiagram, Skeleton, arrows, chain, circles,
                       leg_half, slot_half)
from .linalg import FormalSum
from .spaces import as_sum, _moved

__all__ = [
    "attach_end", "attach_two", "fuse_ends", "fork_end",
    "box_stu_sum", "box_as_sum", "eligible_pairs",
    "conn_route_difference", "seam_cuts",
]


def _fresh_leg(raw: RawDiagram) -> int:
    top = -1
    for ls in raw.edge_legs:
        for l in ls:
            top = max(top, l)
    for l, _ in raw.colored:
        top = max(top, l)
    return top + 1


def _pending(raw: RawDiagram, color: int) -> int:
    legs = [l for l, c in raw.colored if c == color]
    if len(legs) != 1:
        raise ValueError("color %d must mark exactly one end" % color)
    return legs[0]


def _without(colored, drop):
    return tuple((l, c) for l, c in colored if l not in drop)


def _plain(raw: RawDiagram) -> RawDiagram:
    """Forget an exhausted palette."""
    if raw.colored:
        raise ValueError("pending ends remain")
    return RawDiagram(Skeleton(raw.skel.components, 0), raw.edge_legs, (),
                      raw.pairs, raw.n_verts, raw.free_loops)


def attach_end(raw: RawDiagram, color: int, target) \
        -> Tuple[RawDiagram, Fraction]:
    """Attach the pending end marked by `color` at one bundle target.

    Targets are ("bold", edge, gap, sign) or ("dashed", (half, half)).
    Returns the new diagram and the bundle coefficient of the target.
    """
    leg = _pending(raw, color)
    h = leg_half(leg)
    if target[0] == "bold":
        _, e, gap, sign = target
        el = list(raw.edge_legs)
        ls = el[e]
        el[e] = ls[:gap] + (leg,) + ls[gap:]
        out = RawDiagram(raw.skel, el, _without(raw.colored, (leg,)),
                         raw.pairs, raw.n_verts, raw.free_loops)
        return out, Fraction(sign)
    _, (a, b) = target
    if h in (a, b):
        raise ValueError("bundle edge touches the pending end")
    stored = [p for p in raw.pairs if set(p) == {a, b}]
    if not stored:
        raise ValueError("target pair not present")
    mate = raw.mate[h]
    v = raw.n_verts
    pairs = [p for p in raw.pairs
             if set(p) != {a, b} and h not in p]
    pairs += [(a, slot_half(v, 1)), (slot_half(v, 2), b),
              (mate, slot_half(v, 0))]
    out = RawDiagram(raw.skel, raw.edge_legs, _without(raw.colored, (leg,)),
                     pairs, v + 1, raw.free_loops)
    return out, Fraction(1)


def attach_two(raw: RawDiagram, ca: int, cb: int, ta, tb,
               crossed: bool = False) -> Tuple[RawDiagram, Fraction]:
    """Attach both pending ends at two bundle targets.

    For distinct targets `crossed` swaps which end goes where; when the
    targets coincide the ends sit adjacently and `crossed` picks the
    order.  A bold target of sign -1 stands for an oppositely oriented
    edge, read with the reversed local order.
    """
    if ta != tb:
        if crossed:
            ta, tb = tb, ta
        r1, c1 = attach_end(raw, ca, ta)
        r2, c2 = attach_end(r1, cb, tb)
        return r2, c1 * c2
    if ta[0] == "bold":
        _, e, gap, sign = ta
        la, lb = _pending(raw, ca), _pending(raw, cb)
        first_lower = (sign > 0) != crossed
        lo, hi = (la, lb) if first_lower else (lb, la)
        el = list(raw.edge_legs)
        ls = el[e]
        el[e] = ls[:gap] + (lo, hi) + ls[gap:]
        out = RawDiagram(raw.skel, el, _without(raw.colored, (la, lb)),
                         raw.pairs, raw.n_verts, raw.free_loops)
        return out, Fraction(1)
    _, (a, b) = ta
    va = raw.n_verts
    r1, _ = attach_end(raw, ca, ta)
    # the splice turned (a, b) into a - va - b; the second end lands on
    # the near segment when uncrossed, the far one when crossed
    t2 = ("dashed", ((slot_half(va, 2), b) if crossed
                     else (a, slot_half(va, 1))))
    r2, _ = attach_end(r1, cb, t2)
    return r2, Fraction(1)


def fuse_ends(raw: RawDiagram, ca: int, cb: int) -> Optional[RawDiagram]:
    """Join the two pending ends at a fresh inner vertex; the vertex's
    third edge becomes the new pending end, marked ca.

    Returns None when the ends are the two halves of one dashed edge:
    the joined picture has a self-loop and is zero.
    """
    la, lb = _pending(raw, ca), _pending(raw, cb)
    ha, hb = leg_half(la), leg_half(lb)
    mate = raw.mate
    if mate[ha] == hb:
        return None
    u = raw.n_verts
    lv = _fresh_leg(raw)
    pairs = [p for p in raw.pairs if ha not in p and hb not in p]
    # slot order matches the sliding-relation contraction: new end, then
    # the far half of the first end, then the far half of the second
    pairs += [(slot_half(u, 0), leg_half(lv)),
              (slot_half(u, 1), mate[ha]),
              (slot_half(u, 2), mate[hb])]
    colored = tuple(sorted(_without(raw.colored, (la, lb)) + ((lv, ca),)))
    return RawDiagram(raw.skel, raw.edge_legs, colored, pairs, u + 1,
                      raw.free_loops)


def fork_end(raw: RawDiagram, color: int, cb: int) -> RawDiagram:
    """Split the pending end into an inner vertex carrying two fresh
    pending ends (the old color on slot 1, cb on slot 2)."""
    leg = _pending(raw, color)
    h = leg_half(leg)
    mate = raw.mate[h]
    u = raw.n_verts
    la = _fresh_leg(raw)
    lb = la + 1
    pairs = [p for p in raw.pairs if h not in p]
    pairs += [(slot_half(u, 0), mate),
              (slot_half(u, 1), leg_half(la)),
              (slot_half(u, 2), leg_half(lb))]
    colored = tuple(sorted(_without(raw.colored, (leg,))
                           + ((la, color), (lb, cb))))
    return RawDiagram(raw.skel, raw.edge_legs, colored, pairs, u + 1,
                      raw.free_loops)


def _check_bundle(bundle: Sequence) -> None:
    # attachments at independent places only: one target per bold edge,
    # one per dashed pair
    bold = [t[1] for t in bundle if t[0] == "bold"]
    dashed = [frozenset(t[1]) for t in bundle if t[0] == "dashed"]
    if len(set(bold)) != len(bold) or len(set(dashed)) != len(dashed):
        raise ValueError("bundle targets must be distinct edges")


def box_stu_sum(raw: RawDiagram, ca: int, cb: int, bundle: Sequence) \
        -> FormalSum:
    """Joined term minus the two-box double sums; zero in the quotient."""
    _check_bundle(bundle)
    out = FormalSum.zero()
    fused = fuse_ends(raw, ca, cb)
    if fused is not None:
        for t in bundle:
            r, c = attach_end(fused, ca, t)
            out = out + c * as_sum(_plain(r))
    for ti in bundle:
        for tj in bundle:
            r2, c2 = attach_two(raw, ca, cb, ti, tj, crossed=False)
            out = out - c2 * as_sum(_plain(r2))
            r2, c2 = attach_two(raw, ca, cb, ti, tj, crossed=True)
            out = out + c2 * as_sum(_plain(r2))
    return out


def box_as_sum(raw: RawDiagram, color: int, cb: int, bundle: Sequence) \
        -> FormalSum:
    """Both routings of a forked end through the bundle, summed; zero."""
    _check_bundle(bundle)
    forked = fork_end(raw, color, cb)
    out = FormalSum.zero()
    for ti in bundle:
        for tj in bundle:
            for crossed in (False, True):
                r2, c2 = attach_two(forked, color, cb, ti, tj, crossed)
                out = out + c2 * as_sum(_plain(r2))
    return out


def eligible_pairs(raw: RawDiagram, colors: Sequence[int]) -> List[Tuple]:
    """Dashed edges of raw usable as bundle targets: every pair not
    containing a pending end, in a deterministic order."""
    ban = {leg_half(_pending(raw, c)) for c in colors}
    out = [tuple(p) for p in raw.pairs if not (set(p) & ban)]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# route differences on chain graphs: the ambiguity of pushing legs off
# the connecting edge is a sum of relations, so the two extreme routes
# must agree in the interval quotient


def _branch_push(raw: RawDiagram, conn: int, end: int) \
        -> List[Tuple[RawDiagram, Fraction]]:
    """The branching relation at the bold vertex holding the given end of
    the connecting edge, solved for the extreme leg there."""
    vends = None
    for ends in raw.skel.vertex_ends:
        if (conn, end) in ends:
            vends = ends
            break
    if vends is None:
        raise ValueError("no bold vertex at that end")
    sign_from = 1 if end == 0 else -1
    out = []
    for (e2, d2) in vends:
        if (e2, d2) == (conn, end):
            continue
        s2 = 1 if d2 == 0 else -1
        out.append((_moved(raw, conn, end, e2, d2),
                    Fraction(-sign_from * s2)))
    return out


def _cut_open(raw: RawDiagram) -> RawDiagram:
    """A chain graph of genus 2 with a bare connecting edge, cut at its
    bold vertices into two intervals."""
    skel = raw.skel
    l1 = skel.edge_named(0, ("loop", 1))
    l2 = skel.edge_named(0, ("loop", 2))
    conn = skel.edge_named(0, ("conn", 1))
    if raw.edge_legs[conn]:
        raise ValueError("connecting edge still carries legs")
    return RawDiagram(arrows(2), [raw.edge_legs[l1], raw.edge_legs[l2]],
                      raw.colored, raw.pairs, raw.n_verts, raw.free_loops)


def conn_route_difference(raw: RawDiagram) -> FormalSum:
    """Push every connecting-edge leg off through the left vertex, then
    independently through the right one; the difference of the two
    results, cut open onto two intervals.  Each push step is a branching
    relation, so this must normalize to zero there."""
    if raw.skel != Skeleton([chain(2)]):
        raise ValueError("expected a genus-2 chain graph")
    conn = raw.skel.edge_named(0, ("conn", 1))

    def push(end: int) -> FormalSum:
        acc = FormalSum.zero()
        work = [(raw, Fraction(1))]
        while work:
            r, c = work.pop()
            if not r.edge_legs[conn]:
                acc = acc + c * as_sum(_cut_open(r))
                continue
            for r2, c2 in _branch_push(r, conn, end):
                work.append((r2, c * c2))
        return acc

    return push(0) - push(1)


def seam_cuts(raw: RawDiagram) -> List[FormalSum]:
    """All ways of cutting one circle open into an interval.  The results
    must agree in the interval quotient; their pairwise differences are
    the genus-1 form of the route ambiguity."""
    if raw.skel != circles(1):
        raise ValueError("expected a single circle")
    ls = raw.edge_legs[0]
    out = []
    for k in range(max(1, len(ls))):
        rot = ls[k:] + ls[:k]
        out.append(as_sum(RawDiagram(arrows(1), [rot], raw.colored,
                                     raw.pairs, raw.n_verts,
                                     raw.free_loops)))
    return out
