"""Degree-truncated invariant of framed tangle words.

A tangle word is a bottom-to-top list of elementary slices: cups, caps,
crossings, bold trivalent vertices, and associator insertions, acting on
a row of strand positions.  Evaluation keeps, per summand, the dashed
legs attached to each monotone strand piece in height order; at the end
the pieces are stitched into interval, circle and chain-graph components
and every summand becomes a concrete diagram on that skeleton.

Conventions baked in here:

  * framing is the blackboard framing, so kinks in the word carry it;
  * a positive crossing is the one where the strand running from lower
    left to upper right passes over, and contributes exp(chord/2) before
    orientation signs;
  * every dashed leg landing at a point where the strand is directed
    downward multiplies the term by -1; together with the height-order
    bookkeeping this realizes the reversal map strand by strand;
  * cups and caps carry the square root of the round-unknot series, and
    bold vertices carry its fourth root on the two edges of their paired
    side and the inverse fourth root on the remaining edge;
  * the associator is even: 1 + [c12, c23]/24 at this truncation, with a
    pluggable degree-4 term (left zero by default, which is only safe
    below degree 4).

The round-unknot series itself is computed here, not transcribed: the
word for a strand with one hump, evaluated with undressed cups and caps,
gives its inverse.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagrams import RawDiagram, Skeleton, arrows, chain, circles, \
    representative
from .linalg import FormalSum
from .spaces import as_sum, transplant, unit

__all__ = [
    "TangleWord", "z_tangle", "z_check", "linking_matrix",
    "bootstrap_nu", "nu_power", "insert_on_circle",
    "vertex_value", "elementary_value", "erase_leg",
]


class TangleWord:
    """Validated slice list with the bottom boundary's orientations.

    Slices (position i counts strand points from the left, zero-based):

      ("cup", i, o)        new min at i; o=+1 orients it so the right
                           point goes up, o=-1 the left one
      ("cap", i)           max joining points i, i+1 (must be a directed
                           through-strand: one up, one down)
      ("x", i, s)          crossing of points i, i+1 with positional
                           sign s
      ("phi", i, s, (a, b, c))
                           associator with exponent s on three groups of
                           widths a, b, c starting at i; s=-1 is the
                           rebracketing ((ab)c) -> (a(bc)) read bottom
                           to top, s=+1 its inverse
      ("vd", i, (d1, d2))  bold vertex splitting point i into two new
                           points with the given directions
      ("vu", i, d)         bold vertex merging points i, i+1 into one
                           new point with direction d

    Directions are +1 for upward strands, -1 for downward.
    """

    __slots__ = ("dirs_in", "slices")

    def __init__(self, slices: Sequence[Tuple], dirs_in: Sequence[int] = ()):
        for d in dirs_in:
            if d not in (1, -1):
                raise ValueError("bad strand direction %r" % (d,))
        self.dirs_in = tuple(dirs_in)
        self.slices = tuple(tuple(s) for s in slices)


# ---------------------------------------------------------------------------
# the round-unknot series and its rational powers


_nu_cache: Dict[int, FormalSum] = {}
_nu_line_cache: Dict[int, FormalSum] = {}
_nu_power_cache: Dict[Tuple[Fraction, int], FormalSum] = {}


def _hump_word() -> TangleWord:
    # bracket (a(bc)) after the cup; the cap needs ((ab)c)
    return TangleWord([
        ("cup", 1, 1),
        ("phi", 0, 1, (1, 1, 1)),
        ("cap", 0),
    ], dirs_in=(1,))


def bootstrap_nu(cap: int) -> FormalSum:
    """The invariant of the 0-framed round unknot, on a circle skeleton.

    Computed as the inverse of the undressed hump-word value; every
    dressed cup and cap afterwards consumes half of it."""
    hit = _nu_cache.get(cap)
    if hit is not None:
        return hit
    hump = z_tangle(_hump_word(), cap, dressed=False)
    inv_line = _series_inverse(hump, cap)
    ring = transplant(inv_line, Skeleton([chain(1)]), {0: 0})
    nu = transplant(ring, circles(1), {0: 0})
    _nu_line_cache[cap] = inv_line
    _nu_cache[cap] = nu
    return nu


def _series_inverse(x: FormalSum, cap: int) -> FormalSum:
    from .hopf import exp_bullet, log_bullet, skeleton_of
    skel = skeleton_of(x)
    return exp_bullet(skel, -log_bullet(skel, x, cap), cap)


def nu_power(q: Fraction, cap: int) -> FormalSum:
    """The q-th power of the round-unknot series on one interval; roots
    are unique because the series starts at 1."""
    q = Fraction(q)
    hit = _nu_power_cache.get((q, cap))
    if hit is not None:
        return hit
    from .hopf import exp_bullet, log_bullet
    line = arrows(1)
    if cap not in _nu_line_cache:
        bootstrap_nu(cap)
    nu_line = _nu_line_cache[cap]
    res = exp_bullet(line, q * log_bullet(line, nu_line, cap), cap)
    _nu_power_cache[(q, cap)] = res
    return res


def insert_on_circle(x: FormalSum, skel: Skeleton, edge: int,
                     extra: FormalSum, cap: int) -> FormalSum:
    """Connected-sum insertion of a one-circle series into the given
    cyclic edge of every term of x; the insertion point is immaterial in
    the quotient."""
    if not skel.is_cyclic(edge):
        raise ValueError("edge %d is not cyclic" % edge)
    from .diagrams import combine
    out = FormalSum.zero()
    ident = {e: e for e in range(len(skel.edges))}
    for k, c in x.terms():
        rep = representative(k)
        for k2, c2 in extra.terms():
            rep2 = representative(k2)
            if degree2_of_pair(k, k2) > 2 * cap:
                continue
            merged = combine(skel, [(rep, ident), (rep2, {0: edge})])
            out = out + (c * c2) * as_sum(merged)
    return out


def degree2_of_pair(k1, k2) -> int:
    from .diagrams import degree2_of
    return degree2_of(k1) + degree2_of(k2)


# ---------------------------------------------------------------------------
# accumulator terms
#
# A term is (legs, pairs, n_verts): legs is a tuple of (piece, leg ids in
# height order); pairs matches tokens ("l", i) and ("v", v, s).  Leg ids
# and vertex ids are normalized after every merge so equal structures
# collide in the accumulator dict.


def _norm_term(legs: Dict[int, List[int]], pairs: Iterable[Tuple], nv: int):
    lmap: Dict[int, int] = {}
    out_legs = []
    for piece in sorted(legs):
        ls = legs[piece]
        if not ls:
            continue
        row = []
        for l in ls:
            lmap[l] = len(lmap)
            row.append(lmap[l])
        out_legs.append((piece, tuple(row)))

    half = []
    for a, b in pairs:
        x = ("l", lmap[a[1]]) if a[0] == "l" else a
        y = ("l", lmap[b[1]]) if b[0] == "l" else b
        half.append((x, y) if x <= y else (y, x))
    half.sort()
    vmap: Dict[int, int] = {}
    for a, b in half:
        for h in (a, b):
            if h[0] == "v" and h[1] not in vmap:
                vmap[h[1]] = len(vmap)
    out_pairs = []
    for a, b in half:
        x = ("v", vmap[a[1]], a[2]) if a[0] == "v" else a
        y = ("v", vmap[b[1]], b[2]) if b[0] == "v" else b
        out_pairs.append((x, y) if x <= y else (y, x))
    out_pairs.sort()
    return (tuple(out_legs), tuple(out_pairs), nv)


_EMPTY_TERM = ((), (), 0)


def _term_degree2(term) -> int:
    legs, _pairs, nv = term
    return sum(len(ls) for _, ls in legs) + nv


def _merge(term, coeff, tmpl, dirs, cap2):
    """Attach one template instance to one accumulator term."""
    t_legs, t_pairs, t_nv = term
    c_coeff, slots, s_pairs, s_nv = tmpl
    add = sum(n for _, n in slots) + s_nv
    if _term_degree2(term) + add > cap2:
        return None
    legs: Dict[int, List[int]] = {}
    for piece, ls in t_legs:
        legs[piece] = list(ls)
    base = sum(len(ls) for ls in legs.values())
    nxt = [base]
    coeff = coeff * c_coeff
    slot_ids: List[List[int]] = []
    for piece, n in slots:
        row = []
        for _ in range(n):
            row.append(nxt[0])
            nxt[0] += 1
        legs.setdefault(piece, []).extend(row)
        slot_ids.append(row)
        if dirs[piece] < 0 and n % 2:
            coeff = -coeff
    pairs = list(t_pairs)

    def tok(h):
        if h[0] == "s":
            return ("l", slot_ids[h[1]][h[2]])
        if h[0] == "v":
            return ("v", h[1] + t_nv, h[2])
        return h

    for a, b in s_pairs:
        pairs.append((tok(a), tok(b)))
    return _norm_term(legs, pairs, t_nv + s_nv), coeff


def _apply(acc, templates, dirs, cap2):
    if templates == [_ID_TMPL]:
        return acc
    out: Dict[Tuple, Fraction] = {}
    for term, coeff in acc.items():
        for tmpl in templates:
            m = _merge(term, coeff, tmpl, dirs, cap2)
            if m is None:
                continue
            t2, c2 = m
            v = out.get(t2, Fraction(0)) + c2
            if v:
                out[t2] = v
            else:
                out.pop(t2, None)
    return out


_ID_TMPL = (Fraction(1), (), (), 0)


def _series_templates(series: FormalSum, piece: int) -> List[Tuple]:
    """Templates attaching every term of a one-interval series to one
    piece, legs in interval order."""
    out = []
    for k, c in series.terms():
        rep = representative(k)
        order = {l: j for j, l in enumerate(rep.edge_legs[0])}

        def tok(h):
            if h[0] == "l":
                return ("s", 0, order[h[1]])
            return h

        pairs = tuple(sorted((tok(a), tok(b)) for a, b in rep.pairs))
        out.append((c, ((piece, len(order)),), pairs, rep.n_verts))
    return out


def _chord_power_templates(pa: int, pb: int, s: int, cap: int) -> List[Tuple]:
    out = []
    fact = 1
    for k in range(cap + 1):
        if k:
            fact *= k
        coeff = Fraction(s, 2) ** k / fact
        pairs = tuple((("s", 0, j), ("s", 1, j)) for j in range(k))
        out.append((coeff, ((pa, k), (pb, k)), pairs, 0))
    return out


def _phi_word_series(sign: int, cap: int, assoc_deg4) -> List[Tuple]:
    """The associator as words in the two chord generators; letter 0 is
    the chord on groups (1,2), letter 1 on groups (2,3)."""
    c: List[Tuple[Fraction, Tuple[int, ...]]] = []
    if cap >= 2:
        c.append((Fraction(1, 24), (0, 1)))
        c.append((Fraction(-1, 24), (1, 0)))
    if cap >= 4:
        if assoc_deg4 is None:
            warnings.warn("degree-4 associator term is unset; values in "
                          "degree 4 and above are not isotopy invariant")
        else:
            c.extend((Fraction(q), tuple(w)) for q, w in assoc_deg4)
    out = [(Fraction(1), ())]
    out.extend(c)
    if sign < 0:
        # (1 + c)^-1 = 1 - c + c*c - ...; degree of a word = its length
        cc = []
        for q1, w1 in c:
            for q2, w2 in c:
                if len(w1) + len(w2) <= cap:
                    cc.append((q1 * q2, w1 + w2))
        out = [(Fraction(1), ())] + [(-q, w) for q, w in c] + cc
    return out


def _phi_templates(groups: Sequence[Sequence[int]], sign: int, cap: int,
                   assoc_deg4) -> List[Tuple]:
    """Expand associator words into chord attachments, summing over the
    strand choices inside each group."""
    out = []
    for coeff, word in _phi_word_series(sign, cap, assoc_deg4):
        choices: List[List[Tuple[int, int]]] = [[]]
        for letter in word:
            ga, gb = (0, 1) if letter == 0 else (1, 2)
            nxt = []
            for pref in choices:
                for p in groups[ga]:
                    for q in groups[gb]:
                        nxt.append(pref + [(p, q)])
            choices = nxt
        for chords in choices:
            per_point: Dict[int, int] = {}
            slots: List[Tuple[int, int]] = []
            slot_of: Dict[int, int] = {}
            ends = []
            for p, q in chords:
                e = []
                for pt in (p, q):
                    if pt not in slot_of:
                        slot_of[pt] = len(slots)
                        slots.append((pt, 0))
                        per_point[pt] = 0
                    si = slot_of[pt]
                    e.append(("s", si, per_point[pt]))
                    per_point[pt] += 1
                    slots[si] = (pt, per_point[pt])
                ends.append(tuple(e))
            out.append((coeff, tuple(slots), tuple(ends), 0))
    return out


# ---------------------------------------------------------------------------
# tracing and evaluation


class _Trace:
    __slots__ = ("pieces", "dirs", "end_link", "junctions", "crossings",
                 "verts", "components", "skeleton", "edge_plan",
                 "comp_kinds", "loop_units", "piece_unit")


def _process(word: TangleWord, cap: Optional[int], dressed: bool,
             collect: bool, assoc_deg4=None):
    dirs: List[int] = []
    points: List[int] = []
    end_link: Dict[Tuple[int, int], Tuple] = {}
    junctions: List[Tuple] = []
    crossings: List[Tuple[int, int, int]] = []
    verts: List[Tuple] = []

    def new_piece(d: int) -> int:
        dirs.append(d)
        return len(dirs) - 1

    for pos, d in enumerate(word.dirs_in):
        p = new_piece(d)
        points.append(p)
        end_link[(p, 0)] = ("bnd", "bottom", pos)

    acc = {_EMPTY_TERM: Fraction(1)} if collect else None
    cap2 = 2 * cap if cap is not None else None

    if dressed and collect:
        half = nu_power(Fraction(1, 2), cap)
        quarter = nu_power(Fraction(1, 4), cap)
        negquarter = nu_power(Fraction(-1, 4), cap)

    def attach_series(series, piece):
        nonlocal acc
        acc = _apply(acc, _series_templates(series, piece), dirs, cap2)

    for sl in word.slices:
        kind = sl[0]
        if kind == "cup":
            _, i, o = sl
            if not 0 <= i <= len(points):
                raise ValueError("cup position %d out of range" % i)
            pa = new_piece(-o)
            pb = new_piece(o)
            j = len(junctions)
            junctions.append(("cup", pa, pb))
            end_link[(pa, 0)] = ("j", j)
            end_link[(pb, 0)] = ("j", j)
            points[i:i] = [pa, pb]
            if collect and dressed:
                attach_series(half, pb if o > 0 else pa)
        elif kind == "cap":
            _, i = sl
            if not 0 <= i < len(points) - 1:
                raise ValueError("cap position %d out of range" % i)
            pa, pb = points[i], points[i + 1]
            if dirs[pa] == dirs[pb]:
                raise ValueError("cap needs one upward and one downward "
                                 "strand at position %d" % i)
            j = len(junctions)
            junctions.append(("cap", pa, pb))
            end_link[(pa, 1)] = ("j", j)
            end_link[(pb, 1)] = ("j", j)
            del points[i:i + 2]
            if collect and dressed:
                attach_series(half, pa if dirs[pa] > 0 else pb)
        elif kind == "x":
            _, i, s = sl
            if s not in (1, -1):
                raise ValueError("crossing sign must be +-1")
            if not 0 <= i < len(points) - 1:
                raise ValueError("crossing position %d out of range" % i)
            pa, pb = points[i], points[i + 1]
            crossings.append((pa, pb, s))
            if collect:
                acc = _apply(acc, _chord_power_templates(pa, pb, s, cap),
                             dirs, cap2)
            points[i], points[i + 1] = pb, pa
        elif kind == "phi":
            _, i, s, widths = sl
            if len(widths) != 3 or any(w < 1 for w in widths):
                raise ValueError("associator needs three positive widths")
            n = sum(widths)
            if not 0 <= i <= len(points) - n:
                raise ValueError("associator span out of range")
            if collect:
                a, b, c = widths
                groups = (points[i:i + a], points[i + a:i + a + b],
                          points[i + a + b:i + n])
                acc = _apply(acc, _phi_templates(groups, s, cap, assoc_deg4),
                             dirs, cap2)
        elif kind == "vd":
            _, i, (d1, d2) = sl
            if not 0 <= i < len(points):
                raise ValueError("vertex position %d out of range" % i)
            p_old = points[i]
            pa = new_piece(d1)
            pb = new_piece(d2)
            j = len(junctions)
            junctions.append(("vert", len(verts)))
            end_link[(p_old, 1)] = ("j", j)
            end_link[(pa, 0)] = ("j", j)
            end_link[(pb, 0)] = ("j", j)
            verts.append({"ports": ((p_old, 1), (pa, 0), (pb, 0)),
                          "single": p_old, "pair": (pa, pb)})
            points[i:i + 1] = [pa, pb]
            if collect and dressed:
                attach_series(negquarter, p_old)
                attach_series(quarter, pa)
                attach_series(quarter, pb)
        elif kind == "vu":
            _, i, d = sl
            if not 0 <= i < len(points) - 1:
                raise ValueError("vertex position %d out of range" % i)
            pa, pb = points[i], points[i + 1]
            p_new = new_piece(d)
            j = len(junctions)
            junctions.append(("vert", len(verts)))
            end_link[(pa, 1)] = ("j", j)
            end_link[(pb, 1)] = ("j", j)
            end_link[(p_new, 0)] = ("j", j)
            verts.append({"ports": ((pa, 1), (pb, 1), (p_new, 0)),
                          "single": p_new, "pair": (pa, pb)})
            points[i:i + 2] = [p_new]
            if collect and dressed:
                attach_series(quarter, pa)
                attach_series(quarter, pb)
                attach_series(negquarter, p_new)
        else:
            raise ValueError("unknown slice kind %r" % (kind,))

    for pos, p in enumerate(points):
        end_link[(p, 1)] = ("bnd", "top", pos)

    tr = _Trace()
    tr.pieces = len(dirs)
    tr.dirs = dirs
    tr.end_link = end_link
    tr.junctions = junctions
    tr.crossings = crossings
    tr.verts = verts
    _assemble_structure(tr)
    return tr, acc


def _partner(tr: _Trace, j: int, end: Tuple[int, int]) -> Tuple[int, int]:
    kind, pa, pb = tr.junctions[j]
    side = 0 if kind == "cup" else 1
    q = pb if end[0] == pa else pa
    return (q, side)


def _walk(tr: _Trace, start: Tuple[int, int]):
    """Follow the strand from an entry end until a boundary end or a
    vertex port; yields (piece, entry side) and accumulates half-turns."""
    path = []
    turns = 0
    cur = start
    while True:
        p, side = cur
        path.append(cur)
        out = (p, 1 - side)
        link = tr.end_link[out]
        if link[0] == "bnd":
            return path, turns, ("bnd", out)
        j = link[1]
        kind = tr.junctions[j][0]
        if kind == "vert":
            return path, turns, ("vert", j, out)
        _, pa, pb = tr.junctions[j]
        if kind == "cap":
            turns += -1 if p == pa else 1
        else:
            turns += 1 if p == pa else -1
        nxt = _partner(tr, j, out)
        if nxt == start and kind != "vert":
            return path, turns, ("closed",)
        cur = nxt


def _assemble_structure(tr: _Trace):
    """Group pieces into components and plan the final skeleton."""
    parent = list(range(tr.pieces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for j, junc in enumerate(tr.junctions):
        if junc[0] == "vert":
            ports = tr.verts[junc[1]]["ports"]
            for (p, _s) in ports[1:]:
                union(ports[0][0], p)
        else:
            union(junc[1], junc[2])

    comp_of = {p: find(p) for p in range(tr.pieces)}
    roots: List[int] = []
    for p in range(tr.pieces):
        if comp_of[p] not in roots:
            roots.append(comp_of[p])
    roots.sort(key=lambda r: min(p for p in range(tr.pieces)
                                 if comp_of[p] == r))

    comp_verts: Dict[int, List[int]] = {r: [] for r in roots}
    for vi, v in enumerate(tr.verts):
        comp_verts[comp_of[v["ports"][0][0]]].append(vi)

    open_ends: Dict[int, List[Tuple]] = {r: [] for r in roots}
    for (p, side), link in tr.end_link.items():
        if link[0] == "bnd":
            entering = (side == 0 and tr.dirs[p] > 0) or \
                       (side == 1 and tr.dirs[p] < 0)
            if entering:
                open_ends[comp_of[p]].append((p, side))

    components = []      # (kind, data) per root in order
    edge_plan = []       # per component: list of (edges...) in skeleton order
    comp_kinds = []
    loop_units = []      # (component index, loop label or None)
    piece_unit: Dict[int, int] = {}

    for ci, r in enumerate(roots):
        vs = comp_verts[r]
        if not vs:
            if open_ends[r]:
                if len(open_ends[r]) != 1:
                    raise ValueError("component with %d entry points"
                                     % len(open_ends[r]))
                path, _t, stop = _walk(tr, open_ends[r][0])
                if stop[0] != "bnd":
                    raise ValueError("open strand runs into a vertex "
                                     "without one")
                comp_kinds.append("arrow")
                edge_plan.append([(path, False)])
            else:
                p0 = min(p for p in range(tr.pieces) if comp_of[p] == r)
                start = (p0, 0 if tr.dirs[p0] > 0 else 1)
                path, _t, stop = _walk(tr, start)
                if stop[0] != "closed":
                    raise ValueError("closed component does not close up")
                comp_kinds.append("circle")
                edge_plan.append([(path, False)])
                for (p, _s) in path:
                    piece_unit[p] = len(loop_units)
                loop_units.append((ci, None))
        else:
            if len(vs) != 2 or open_ends[r]:
                raise ValueError("vertex components must be closed "
                                 "dumbbell graphs")
            plan = _dumbbell_plan(tr, vs, ci, piece_unit, loop_units)
            comp_kinds.append("chain2")
            edge_plan.append(plan)

    tr.components = roots
    tr.comp_kinds = comp_kinds
    tr.edge_plan = edge_plan
    tr.loop_units = loop_units
    tr.piece_unit = piece_unit
    comps = []
    for kind in comp_kinds:
        if kind == "arrow":
            comps.append(("arrow",))
        elif kind == "circle":
            comps.append(("circle",))
        else:
            comps.append(chain(2))
    tr.skeleton = Skeleton(comps)


def _strand_exit_ports(tr: _Trace, vi: int) -> List[Tuple[int, int]]:
    out = []
    for (p, side) in tr.verts[vi]["ports"]:
        if (side == 0 and tr.dirs[p] > 0) or (side == 1 and tr.dirs[p] < 0):
            out.append((p, side))
    return out


def _dumbbell_plan(tr: _Trace, vs: List[int], ci: int,
                   piece_unit: Dict[int, int], loop_units: List[Tuple]):
    """Edge traversal plans for a two-vertex chain graph: each vertex
    carries a self-loop, standardized to run counterclockwise, plus one
    connecting edge oriented from the first-created vertex to the second."""
    v1, v2 = vs
    walks = {}
    for vi in vs:
        for start in tr.verts[vi]["ports"]:
            p, side = start
            entering = (side == 0 and tr.dirs[p] > 0) or \
                       (side == 1 and tr.dirs[p] < 0)
            if not entering:
                continue
            path, turns, stop = _walk(tr, start)
            if stop[0] != "vert":
                raise ValueError("chain-graph edge leaves the component")
            end_v = tr.junctions[stop[1]][1]
            walks[start] = (path, turns, end_v, stop[2])
    loops = {v1: None, v2: None}
    conn = None
    for start, (path, turns, end_v, _end) in walks.items():
        src = None
        for vi in vs:
            if start in tr.verts[vi]["ports"]:
                src = vi
        if end_v == src:
            loops[src] = (path, turns)
        else:
            conn = (src, path)
    if loops[v1] is None or loops[v2] is None or conn is None:
        raise ValueError("vertex component is not a dumbbell graph")

    plan = []
    for vi in (v1, v2):
        path, turns = loops[vi]
        reverse = turns < 0
        plan.append((path, reverse))
        for (p, _s) in path:
            piece_unit[p] = len(loop_units)
        loop_units.append((ci, ("loop", 1 if vi == v1 else 2)))
    src, path = conn
    plan.append((path, src != v1))
    return plan


def _term_diagram(tr: _Trace, term) -> Tuple[RawDiagram, int]:
    t_legs, pairs, nv = term
    legs_by_piece: Dict[int, Tuple[int, ...]] = dict(t_legs)
    edge_legs: List[Tuple[int, ...]] = []
    sign = 1
    for plan in tr.edge_plan:
        for path, reverse in plan:
            seq: List[int] = []
            for (p, side) in path:
                ls = legs_by_piece.get(p, ())
                seq.extend(ls if side == 0 else reversed(ls))
            if reverse:
                if len(seq) % 2:
                    sign = -sign
                seq.reverse()
            edge_legs.append(tuple(seq))
    raw = RawDiagram(tr.skeleton, edge_legs, (), pairs, nv)
    return raw, sign


def z_tangle(word: TangleWord, cap: int, dressed: bool = True,
             assoc_deg4=None) -> FormalSum:
    """Invariant of the word, as a sum on its assembled skeleton."""
    tr, acc = _process(word, cap, dressed, True, assoc_deg4)
    out = FormalSum.zero()
    for term, coeff in acc.items():
        raw, sign = _term_diagram(tr, term)
        out = out + (coeff * sign) * as_sum(raw)
    return out


def z_check(word: TangleWord, cap: int, assoc_deg4=None) -> FormalSum:
    """The invariant with one extra round-unknot factor per circle
    component (chain-graph components get none)."""
    tr, acc = _process(word, cap, True, True, assoc_deg4)
    out = FormalSum.zero()
    for term, coeff in acc.items():
        raw, sign = _term_diagram(tr, term)
        out = out + (coeff * sign) * as_sum(raw)
    nu_ring = bootstrap_nu(cap)
    for ci, kind in enumerate(tr.comp_kinds):
        if kind == "circle":
            (edge,) = tr.skeleton.edges_of(ci)
            out = insert_on_circle(out, tr.skeleton, edge, nu_ring, cap)
    return out


def tangle_skeleton(word: TangleWord) -> Skeleton:
    tr, _ = _process(word, None, False, False)
    return tr.skeleton


def linking_matrix(word: TangleWord) -> List[List[int]]:
    """Pairwise linking numbers and framings of the word's closed loops:
    one row per circle component and per chain-graph circle, in component
    order.  Crossings involving connecting edges are ignored, matching
    the convention that a loop's class is read after deleting the rest
    of its graph."""
    tr, _ = _process(word, None, False, False)
    if any(kind == "arrow" for kind in tr.comp_kinds):
        raise ValueError("linking numbers need a closed word")
    n = len(tr.loop_units)
    twice = [[0] * n for _ in range(n)]
    for pa, pb, s in tr.crossings:
        ua = tr.piece_unit.get(pa)
        ub = tr.piece_unit.get(pb)
        if ua is None or ub is None:
            continue
        val = s * tr.dirs[pa] * tr.dirs[pb]
        twice[ua][ub] += val
        twice[ub][ua] += val
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                if twice[i][i] % 2:
                    raise AssertionError("odd self-crossing total")
                out[i][i] = twice[i][i] // 2
            else:
                if twice[i][j] % 2:
                    raise AssertionError("odd crossing total between loops")
                out[i][j] = twice[i][j] // 2
    return out


# ---------------------------------------------------------------------------
# elementary coupon values, exposed for the erasure checks


def vertex_value(cap: int) -> FormalSum:
    """Value of a bold vertex coupon on three interval strands: strands
    0 and 1 are the paired side, strand 2 the single side.  Legs nearest
    the vertex are those at position 0 of each interval."""
    quarter = nu_power(Fraction(1, 4), cap)
    negq = nu_power(Fraction(-1, 4), cap)
    sk = arrows(3)
    out = unit(sk)
    for strand, series in ((0, quarter), (1, quarter), (2, negq)):
        emap = {0: strand}
        add = FormalSum.zero()
        for k, c in out.terms():
            rep = representative(k)
            for k2, c2 in series.terms():
                if degree2_of_pair(k, k2) > 2 * cap:
                    continue
                rep2 = representative(k2)
                from .diagrams import combine
                ident = {e: e for e in range(3)}
                merged = combine(sk, [(rep2, emap), (rep, ident)])
                add = add + (c * c2) * as_sum(merged)
        out = add
    return out


def elementary_value(kind: str, cap: int) -> FormalSum:
    """Coupon values on their local skeletons: "id" on one strand,
    "cupcap" (the extremum series) on one strand, "vertex" on three."""
    if kind == "id":
        return unit(arrows(1))
    if kind == "cupcap":
        half = nu_power(Fraction(1, 2), cap)
        return half
    if kind == "vertex":
        return vertex_value(cap)
    raise ValueError("unknown coupon kind %r" % (kind,))


def erase_leg(x: FormalSum, skel: Skeleton, edge: int) -> FormalSum:
    """Kill every term with a leg on the given edge and forget the edge.

    Supported shapes: an edge forming its own whole component, or the
    connecting edge of a two-vertex chain graph (whose loops then become
    free circles).  Remaining terms transfer to the reduced skeleton."""
    comps: List[Tuple] = []
    emap: Dict[int, int] = {}
    t = 0
    for ci, comp in enumerate(skel.components):
        edges = skel.edges_of(ci)
        if edge in edges:
            if len(edges) == 1:
                continue
            if comp == chain(2) and skel.edges[edge][1] == ("conn", 1):
                # the two loops close up into circles
                for e in edges:
                    if e == edge:
                        continue
                    comps.append(("circle",))
                    emap[e] = t
                    t += 1
                continue
            raise ValueError("unsupported erasure shape")
        comps.append(comp)
        for e in edges:
            emap[e] = t
            t += 1
    dst = Skeleton(comps, skel.n_colors)
    out = FormalSum.zero()
    for k, c in x.terms():
        rep = representative(k)
        if rep.edge_legs[edge]:
            continue
        out = out + c * transplant(FormalSum.single(k), dst, emap)
    return out
