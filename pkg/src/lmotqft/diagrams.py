"""Uni-trivalent diagrams on 1-dimensional skeletons, with exact canonical forms.

A diagram lives on a skeleton, an ordered list of components that are arrows
(oriented intervals), circles, or chain graphs of a given genus.  Its dashed
part is a graph whose inner vertices are trivalent and carry a cyclic order
of their three half-edges.  Univalent dashed ends ("legs") either occupy an
ordered position on a skeleton edge or carry a colour from a finite palette.
Reversing the cyclic order at an inner vertex negates the diagram, so a
diagram is determined only up to sign by its underlying labelled graph.

``canonical`` computes a canonical encoding together with that sign by
minimising an integer stream over every legal re-reading of the diagram.
If the minimal stream is reachable with both signs the diagram is zero;
this happens exactly when some orientation-reversing automorphism exists,
and it subsumes the vanishing of diagrams with a dashed self-loop at a
vertex, which is detected separately for speed.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Half = Tuple
Token = Tuple

ARROW = ("arrow",)
CIRCLE = ("circle",)


def chain(genus: int) -> Tuple:
    if genus < 0:
        raise ValueError("chain genus must be >= 0")
    return ("chain", genus)


def leg_half(leg: int) -> Half:
    return ("l", leg)


def slot_half(vertex: int, slot: int) -> Half:
    return ("v", vertex, slot)


class Skeleton:
    """Ordered components plus a colour palette, with a fixed edge table.

    Chain graphs of genus g >= 2 are stored with their two extreme circles
    as single loop edges anchored at the nearest bold vertex, so there are
    2(g-1) genuine trivalent bold vertices.  Every edge has a fixed
    orientation; circles and genus-1 chains consist of one cyclic edge.
    """

    __slots__ = ("components", "n_colors", "edges", "vertex_ends",
                 "_comp_edges", "key", "_hash")

    def __init__(self, components: Sequence[Tuple], n_colors: int = 0):
        comps = tuple(tuple(c) for c in components)
        for c in comps:
            if c[0] not in ("arrow", "circle", "chain"):
                raise ValueError("unknown skeleton component %r" % (c,))
        if n_colors < 0:
            raise ValueError("n_colors must be >= 0")
        self.components = comps
        self.n_colors = n_colors
        edges: List[Tuple] = []          # (comp_index, name, cyclic)
        vertex_ends: List[Tuple] = []    # per bold vertex: ((edge, end), ...) with end 0=tail 1=head
        comp_edges: List[Tuple[int, ...]] = []
        for ci, comp in enumerate(comps):
            start = len(edges)
            if comp[0] == "arrow":
                edges.append((ci, ("arrow",), False))
            elif comp[0] == "circle":
                edges.append((ci, ("circle",), True))
            else:
                g = comp[1]
                if g == 0:
                    pass
                elif g == 1:
                    edges.append((ci, ("ring",), True))
                else:
                    local: Dict[Tuple, int] = {}

                    def add(name):
                        local[name] = len(edges)
                        edges.append((ci, name, False))

                    add(("loop", 1))
                    for i in range(2, g):
                        add(("upper", i))
                        add(("lower", i))
                    add(("loop", g))
                    for i in range(1, g):
                        add(("conn", i))
                    # Bold vertices, left to right: r_1, then l_i, r_i for
                    # middle circles, then l_g.  Loop edges list tail before
                    # head so that branching relations can tell them apart.
                    vertex_ends.append(((local[("loop", 1)], 0),
                                        (local[("loop", 1)], 1),
                                        (local[("conn", 1)], 0)))
                    for i in range(2, g):
                        vertex_ends.append(((local[("upper", i)], 1),
                                            (local[("lower", i)], 0),
                                            (local[("conn", i - 1)], 1)))
                        vertex_ends.append(((local[("upper", i)], 0),
                                            (local[("lower", i)], 1),
                                            (local[("conn", i)], 0)))
                    vertex_ends.append(((local[("loop", g)], 0),
                                        (local[("loop", g)], 1),
                                        (local[("conn", g - 1)], 1)))
            comp_edges.append(tuple(range(start, len(edges))))
        self.edges = tuple(edges)
        self.vertex_ends = tuple(vertex_ends)
        self._comp_edges = tuple(comp_edges)
        self.key = (comps, n_colors)
        self._hash = hash(self.key)

    def edges_of(self, comp_index: int) -> Tuple[int, ...]:
        return self._comp_edges[comp_index]

    def edge_named(self, comp_index: int, name: Tuple) -> int:
        for e in self._comp_edges[comp_index]:
            if self.edges[e][1] == name:
                return e
        raise KeyError("no edge %r on component %d" % (name, comp_index))

    def is_cyclic(self, edge: int) -> bool:
        return self.edges[edge][2]

    def __eq__(self, other):
        return isinstance(other, Skeleton) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Skeleton(%r, n_colors=%d)" % (list(self.components), self.n_colors)


def arrows(n: int) -> Skeleton:
    return Skeleton([ARROW] * n)


def circles(n: int) -> Skeleton:
    return Skeleton([CIRCLE] * n)


def empty_skeleton(n_colors: int = 0) -> Skeleton:
    return Skeleton([], n_colors)


class RawDiagram:
    """A concrete labelled diagram, prior to canonicalisation.

    ``edge_legs[e]`` lists leg ids along skeleton edge ``e`` in the edge's
    direction (cyclic edges: in cyclic order starting anywhere).  ``colored``
    maps the remaining legs to palette colours.  ``pairs`` is the perfect
    matching of half-edges realising the dashed graph; inner vertex ``v``
    owns slots ``("v", v, 0..2)`` whose listed order is its cyclic order.
    ``free_loops`` counts dashed circles with no vertex on them; these only
    occur transiently inside the surgery maps.
    """

    __slots__ = ("skel", "edge_legs", "colored", "pairs", "n_verts",
                 "free_loops", "_mate", "_key")

    def __init__(self, skel: Skeleton, edge_legs, colored, pairs,
                 n_verts: int, free_loops: int = 0):
        self.skel = skel
        self.edge_legs = tuple(tuple(ls) for ls in edge_legs)
        self.colored = tuple(sorted(tuple(p) for p in colored))
        self.pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        self.n_verts = n_verts
        self.free_loops = free_loops
        self._mate = None
        self._key = None
        self._validate()

    def _validate(self):
        if len(self.edge_legs) != len(self.skel.edges):
            raise ValueError("edge_legs length does not match skeleton")
        placed = [l for ls in self.edge_legs for l in ls]
        col = [l for l, _ in self.colored]
        legs = placed + col
        if len(set(legs)) != len(legs):
            raise ValueError("duplicate leg id")
        for _, c in self.colored:
            if not (0 <= c < self.skel.n_colors):
                raise ValueError("colour %r out of range" % (c,))
        leg_set = set(legs)
        seen = set()
        for a, b in self.pairs:
            if a == b:
                raise ValueError("half-edge matched to itself")
            for h in (a, b):
                if h in seen:
                    raise ValueError("half-edge %r matched twice" % (h,))
                seen.add(h)
                if h[0] == "l":
                    if h[1] not in leg_set:
                        raise ValueError("pair mentions unknown leg %r" % (h,))
                elif h[0] == "v":
                    if not (0 <= h[1] < self.n_verts and 0 <= h[2] < 3):
                        raise ValueError("pair mentions bad slot %r" % (h,))
                else:
                    raise ValueError("bad half-edge token %r" % (h,))
        want = set(leg_half(l) for l in legs)
        want |= set(slot_half(v, s) for v in range(self.n_verts) for s in range(3))
        if seen != want:
            raise ValueError("matching does not cover all half-edges exactly once")
        if self.free_loops < 0:
            raise ValueError("negative free loop count")

    @property
    def mate(self) -> Dict[Half, Half]:
        if self._mate is None:
            m = {}
            for a, b in self.pairs:
                m[a] = b
                m[b] = a
            self._mate = m
        return self._mate

    def key(self):
        if self._key is None:
            self._key = (self.skel.key, self.edge_legs, self.colored,
                         self.pairs, self.n_verts, self.free_loops)
        return self._key

    @property
    def n_legs(self) -> int:
        return sum(len(ls) for ls in self.edge_legs) + len(self.colored)

    @property
    def degree2(self) -> int:
        """Twice the degree: inner vertices plus legs."""
        return self.n_verts + self.n_legs

    def __repr__(self):
        return ("RawDiagram(verts=%d, legs=%r, colored=%r, loops=%d)"
                % (self.n_verts, self.edge_legs, self.colored, self.free_loops))


def degree2_of(key) -> int:
    """Twice the degree of a canonical key; free loops count zero."""
    _skel, _loops, edges, cc, verts = key
    legs = sum(len(sec) for sec in edges)
    legs += sum(1 for sec in edges for t in sec if t[0] == "c")
    legs += 2 * len(cc)
    legs += sum(1 for tri in verts for t in tri if t[0] == "c")
    return legs + len(verts)


def inner_verts_of(key) -> int:
    return len(key[4])


def loops_of(key) -> int:
    return key[1]


def strip_loops(key):
    """The same key with no free loops, and the removed count."""
    skel, loops, edges, cc, verts = key
    return (skel, 0, edges, cc, verts), loops


_canon_cache: Dict[Tuple, Tuple[Optional[Tuple], int]] = {}
_rep_cache: Dict[Tuple, RawDiagram] = {}


def canonical(raw: RawDiagram):
    """Return ``(key, sign)`` with sign in {1, -1}, or ``(None, 0)`` if zero.

    The key is hashable and identifies the diagram up to the legal
    re-labellings; ``representative(key)`` rebuilds a concrete diagram whose
    own canonical sign is +1.
    """
    rk = raw.key()
    hit = _canon_cache.get(rk)
    if hit is not None:
        return hit
    key, sign = _canonicalise(raw)
    res = (key, sign) if sign else (None, 0)
    _canon_cache[rk] = res
    return res


def representative(key) -> RawDiagram:
    rep = _rep_cache.get(key)
    if rep is None:
        rep = _rebuild(key)
        _rep_cache[key] = rep
    return rep


def _free_vertex_components(raw: RawDiagram) -> List[Tuple[int, ...]]:
    """Connected groups of inner vertices with no path to any leg."""
    parent = list(range(raw.n_verts))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    anchored = set()
    for a, b in raw.pairs:
        av, bv = a[0] == "v", b[0] == "v"
        if av and bv:
            ra, rb = find(a[1]), find(b[1])
            if ra != rb:
                parent[ra] = rb
        elif av:
            anchored.add(a[1])
        elif bv:
            anchored.add(b[1])
    groups: Dict[int, List[int]] = {}
    for v in range(raw.n_verts):
        groups.setdefault(find(v), []).append(v)
    bad = {find(v) for v in anchored}
    return [tuple(sorted(g)) for r, g in sorted(groups.items())
            if r not in bad]


def _sub_vertices(raw: RawDiagram, keep: Sequence[int], skel: Skeleton,
                  with_legs: bool) -> RawDiagram:
    """The diagram restricted to the given inner vertices (keep sorted);
    with_legs carries the skeleton and leg structure across."""
    vmap = {v: i for i, v in enumerate(keep)}

    def mapped(h):
        if h[0] == "v":
            return slot_half(vmap[h[1]], h[2])
        return h

    ks = set(keep)
    pairs = []
    for a, b in raw.pairs:
        ina = a[0] == "v" and a[1] in ks
        inb = b[0] == "v" and b[1] in ks
        legs = (a[0] == "l") or (b[0] == "l")
        if with_legs:
            if ina or inb or legs:
                pairs.append((mapped(a), mapped(b)))
        else:
            if ina and inb:
                pairs.append((mapped(a), mapped(b)))
    if with_legs:
        return RawDiagram(skel, raw.edge_legs, raw.colored, pairs,
                          len(keep), raw.free_loops)
    return RawDiagram(skel, (), (), pairs, len(keep), 0)


_EMPTY_SKEL_KEY = ((), 0)


def _canonicalise_split(raw: RawDiagram, free) -> Tuple:
    """Free closed components are canonicalised one by one and appended
    as sorted blocks; only the leg-attached part runs the full search.
    The combined key is identical to what the plain search would build:
    block streams of connected closed graphs cannot be proper prefixes
    of one another, so sorting local streams gives the global minimum."""
    blocks = []
    sign = 1
    for comp in free:
        mini = _sub_vertices(raw, comp, Skeleton((), 0), False)
        k, s = canonical(mini)
        if s == 0:
            return (None, 0)
        sign *= s
        blocks.append(k[4])
    freed = set()
    for comp in free:
        freed.update(comp)
    keep = [v for v in range(raw.n_verts) if v not in freed]
    att = _sub_vertices(raw, keep, raw.skel, True)
    k2, s2 = canonical(att)
    if s2 == 0:
        return (None, 0)
    skel_key, loops, edges, cc, att_verts = k2
    used = set()
    for sec in edges:
        for t in sec:
            if t[0] == "e":
                used.add(t[1])
    for tri in att_verts:
        for t in tri:
            if t[0] == "e":
                used.add(t[1])
    off = (max(used) + 1) if used else 0
    out = list(att_verts)
    for blk in sorted(blocks):
        ids = {t[1] for tri in blk for t in tri}
        out.extend(tuple(("e", t[1] + off) for t in tri) for tri in blk)
        off += len(ids)
    return ((skel_key, loops, edges, cc, tuple(out)), sign * s2)


def _canonicalise(raw: RawDiagram):
    free = _free_vertex_components(raw)
    if free and not (len(free) == 1 and raw.n_legs == 0
                     and len(free[0]) == raw.n_verts):
        return _canonicalise_split(raw, free)
    return _canonicalise_plain(raw)


def _canonicalise_plain(raw: RawDiagram):
    mate = raw.mate
    # A dashed edge between two slots of one vertex kills the diagram.
    for a, b in raw.pairs:
        if a[0] == "v" and b[0] == "v" and a[1] == b[1]:
            return (None, 0)

    color_of = dict(raw.colored)

    def pairkey(h: Half) -> Tuple:
        m = mate[h]
        return (h, m) if h <= m else (m, h)

    # Colour-to-colour struts form an unordered multiset and need no ids.
    cc = []
    seen_cc = set()
    for a, b in raw.pairs:
        if a[0] == "l" and b[0] == "l" and a[1] in color_of and b[1] in color_of:
            c1, c2 = color_of[a[1]], color_of[b[1]]
            cc.append((min(c1, c2), max(c1, c2)))
            seen_cc.add((a, b))
    cc = tuple(sorted(cc))

    edge_leg_lists = [list(ls) for ls in raw.edge_legs]
    cyclic_edges = [i for i, e in enumerate(raw.skel.edges)
                    if e[2] and len(edge_leg_lists[i]) > 1]

    best: Dict[str, object] = {"stream": None, "signs": set(), "verts": None,
                               "edges": None}

    def token_for(h: Half, ids: Dict[Tuple, int], fresh: List[int],
                  pend_to: List[Tuple[int, int]]):
        """Token describing the dashed edge at half-edge h.

        Assigns a new id on first contact; records (id, vertex) in pend_to
        when the far end is an inner vertex not yet read.
        """
        far = mate[h]
        if far[0] == "l" and far[1] in color_of:
            return ("c", color_of[far[1]])
        pk = pairkey(h)
        i = ids.get(pk)
        if i is None:
            i = fresh[0]
            fresh[0] += 1
            ids[pk] = i
            if far[0] == "v":
                pend_to.append((i, far[1]))
        return ("e", i)

    def run(rotations: Dict[int, int]):
        # One full DFS for a fixed choice of cyclic-edge rotations.
        edge_sections: List[Tuple[Token, ...]] = []
        stream: List[Token] = []
        ids: Dict[Tuple, int] = {}
        fresh = [0]
        pending: List[Tuple[int, int]] = []
        prefix_ok = [True]

        def emit(tok: Token) -> bool:
            bs = best["stream"]
            pos = len(stream)
            stream.append(tok)
            if bs is None or not prefix_ok[0]:
                return True
            if tok < bs[pos]:
                prefix_ok[0] = False
                return True
            return tok == bs[pos]

        for e, ls in enumerate(edge_leg_lists):
            rot = rotations.get(e, 0)
            order = ls[rot:] + ls[:rot]
            sec = []
            ok = True
            for l in order:
                t = token_for(leg_half(l), ids, fresh, pending)
                sec.append(t)
                if not emit(t):
                    ok = False
                    break
            edge_sections.append(tuple(sec))
            if not ok:
                return

        vert_tokens: List[Tuple[Token, Token, Token]] = []
        processed: Dict[int, int] = {}

        def finish(sign: int):
            st = tuple(stream)
            bs = best["stream"]
            if bs is None or st < bs:
                best["stream"] = st
                best["signs"] = {sign}
                best["verts"] = tuple(vert_tokens)
                best["edges"] = tuple(edge_sections)
            elif st == bs:
                best["signs"].add(sign)

        # Vertices are read in the order the pending queue dictates; the
        # branch points are the six readings of each vertex and the root
        # choice for components not reachable from the skeleton.
        def descend(sign: int):
            if len(processed) == raw.n_verts and not pending:
                finish(sign)
                return
            if pending:
                i = min(pending, key=lambda t: t[0])[0]
                cand = [v for (j, v) in pending if j == i]
                v = cand[0]
                rest = [t for t in pending if t[0] != i]
                if v in processed:
                    saved = pending[:]
                    pending[:] = rest
                    descend(sign)
                    pending[:] = saved
                    return
                roots = [v]
            else:
                rest = None
                roots = [v for v in range(raw.n_verts) if v not in processed]
            for root in roots:
                slots = [slot_half(root, s) for s in range(3)]
                for r in range(3):
                    for d, dsign in ((1, 1), (2, -1)):
                        order = [slots[r], slots[(r + d) % 3], slots[(r + 2 * d) % 3]]
                        save_ids = dict(ids)
                        save_fresh = fresh[0]
                        save_pend = pending[:]
                        save_stream = len(stream)
                        save_prefix = prefix_ok[0]
                        if rest is not None:
                            pending[:] = rest
                        tri = []
                        ok = True
                        for h in order:
                            t = token_for(h, ids, fresh, pending)
                            tri.append(t)
                            if not emit(t):
                                ok = False
                                break
                        if ok:
                            processed[root] = len(processed)
                            vert_tokens.append(tuple(tri))
                            descend(sign * dsign)
                            vert_tokens.pop()
                            del processed[root]
                        ids.clear()
                        ids.update(save_ids)
                        fresh[0] = save_fresh
                        pending[:] = save_pend
                        del stream[save_stream:]
                        prefix_ok[0] = save_prefix

        descend(1)

    rot_space = [range(len(edge_leg_lists[e])) for e in cyclic_edges]
    for rots in itertools.product(*rot_space):
        run(dict(zip(cyclic_edges, rots)))

    if best["stream"] is None:
        # No vertices and no legs at all: the empty diagram.
        key = (raw.skel.key, raw.free_loops, tuple(() for _ in edge_leg_lists),
               cc, ())
        return (key, 1)
    key = (raw.skel.key, raw.free_loops, best["edges"], cc, best["verts"])
    if len(best["signs"]) == 2:
        return (key, 0)
    (sign,) = best["signs"]
    return (key, sign)


def _rebuild(key) -> RawDiagram:
    skel_key, loops, edge_secs, cc, vert_tris = key
    skel = Skeleton(skel_key[0], skel_key[1])
    next_leg = [0]

    def new_leg():
        l = next_leg[0]
        next_leg[0] += 1
        return l

    endpoints: Dict[int, List[Half]] = {}
    pairs = []
    colored = []
    edge_legs = []
    for sec in edge_secs:
        ls = []
        for tok in sec:
            l = new_leg()
            ls.append(l)
            if tok[0] == "c":
                m = new_leg()
                colored.append((m, tok[1]))
                pairs.append((leg_half(l), leg_half(m)))
            else:
                endpoints.setdefault(tok[1], []).append(leg_half(l))
        edge_legs.append(tuple(ls))
    for c1, c2 in cc:
        a, b = new_leg(), new_leg()
        colored.append((a, c1))
        colored.append((b, c2))
        pairs.append((leg_half(a), leg_half(b)))
    for v, tri in enumerate(vert_tris):
        for s, tok in enumerate(tri):
            if tok[0] == "c":
                m = new_leg()
                colored.append((m, tok[1]))
                pairs.append((slot_half(v, s), leg_half(m)))
            else:
                endpoints.setdefault(tok[1], []).append(slot_half(v, s))
    for i, ends in endpoints.items():
        if len(ends) != 2:
            raise ValueError("corrupt canonical key: edge %d has %d ends"
                             % (i, len(ends)))
        pairs.append(tuple(ends))
    return RawDiagram(skel, edge_legs, colored, pairs, len(vert_tris), loops)


def combine(skel: Skeleton, parts: Sequence[Tuple[RawDiagram, Dict[int, int]]],
            extra_loops: int = 0) -> RawDiagram:
    """Union of diagrams on a common target skeleton.

    Each part comes with a map from its own edge indices to target edge
    indices.  Legs land on the target edges in part order, preserving the
    order within each part.  Colours are shared between parts.
    """
    edge_legs: List[List[int]] = [[] for _ in skel.edges]
    colored: List[Tuple[int, int]] = []
    pairs: List[Tuple[Half, Half]] = []
    n_verts = 0
    loops = extra_loops
    leg_base = 0
    for raw, emap in parts:
        lmap: Dict[int, int] = {}
        for e, ls in enumerate(raw.edge_legs):
            if ls and e not in emap:
                raise ValueError("part edge %d carries legs but is unmapped" % e)
            for l in ls:
                lmap[l] = leg_base + len(lmap)
        for l, _ in raw.colored:
            lmap[l] = leg_base + len(lmap)
        for e, ls in enumerate(raw.edge_legs):
            for l in ls:
                edge_legs[emap[e]].append(lmap[l])
        for l, c in raw.colored:
            colored.append((lmap[l], c))

        def move(h: Half) -> Half:
            if h[0] == "l":
                return leg_half(lmap[h[1]])
            return slot_half(h[1] + n_verts, h[2])

        for a, b in raw.pairs:
            pairs.append((move(a), move(b)))
        n_verts += raw.n_verts
        loops += raw.free_loops
        leg_base += len(lmap)
    return RawDiagram(skel, edge_legs, colored, pairs, n_verts, loops)


def empty_diagram(skel: Skeleton) -> RawDiagram:
    return RawDiagram(skel, [() for _ in skel.edges], (), (), 0, 0)
