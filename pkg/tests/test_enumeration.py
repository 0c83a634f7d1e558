"""Enumeration oracle checks.

The piece library is produced by growth moves (blow up a hand, join two
hands).  The tests rebuild small strata by brute-force matching over the
half-edges, which shares none of the growth logic, and compare certificate
sets.  Placement counts on tiny skeletons are frozen from hand enumeration.
"""

import random

import pytest

from lmotqft.diagrams import (RawDiagram, arrows, circles, degree2_of,
                              empty_skeleton, leg_half, slot_half)
from lmotqft.enumeration import diagrams_on, piece_key, piece_library


def _connected(v, leg_ids, pairs):
    if v == 0 and not leg_ids:
        return True
    parent = {}
    for w in range(v):
        parent[("v", w)] = ("v", w)
    for l in leg_ids:
        parent[("l", l)] = ("l", l)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        na = ("v", a[1]) if a[0] == "v" else a
        nb = ("v", b[1]) if b[0] == "v" else b
        parent[find(na)] = find(nb)
    return len(set(find(x) for x in parent)) == 1


def _brute_certs(v, h):
    """Certificates of all tadpole-free connected shapes: raw matching search."""
    halves = [slot_half(w, s) for w in range(v) for s in range(3)]
    halves += [leg_half(l) for l in range(h)]
    certs = set()

    def match(remaining, pairs):
        if not remaining:
            if _connected(v, range(h), pairs):
                raw = RawDiagram(empty_skeleton(1), [],
                                 [(l, 0) for l in range(h)], pairs, v)
                certs.add(piece_key(raw))
            return
        a = remaining[0]
        for idx in range(1, len(remaining)):
            b = remaining[idx]
            if a[0] == "v" and b[0] == "v" and a[1] == b[1]:
                continue
            match(remaining[1:idx] + remaining[idx + 1:], pairs + [(a, b)])

    match(halves, [])
    return certs


@pytest.mark.parametrize("v,h,count", [
    (0, 2, 1),   # the strut
    (1, 1, 0),   # would need a dashed loop
    (1, 3, 1),   # the tripod
    (2, 0, 1),   # the triple edge
    (2, 2, 1),   # doubled edge, one hand each side
    (2, 4, 1),   # the two-vertex tree
    (3, 1, 1),   # doubled edge plus a stem
    (3, 3, 2),   # triangle, and doubled edge with both hands on one side
    (4, 0, 2),   # K4, and the square with opposite sides doubled
])
def test_brute_strata_known_counts(v, h, count):
    assert len(_brute_certs(v, h)) == count


def _random_piece_raw(rng):
    """A random connected tadpole-free piece via rejection sampling."""
    while True:
        v = rng.randrange(1, 6)
        halves = [slot_half(w, s) for w in range(v) for s in range(3)]
        rng.shuffle(halves)
        pairs = []
        legs = []
        ok = True
        while halves:
            a = halves.pop()
            if not halves or rng.random() < 0.3:
                legs.append(a)
                continue
            b = halves.pop(rng.randrange(len(halves)))
            if a[0] == "v" and b[0] == "v" and a[1] == b[1]:
                ok = False
                break
            pairs.append((a, b))
        if not ok:
            continue
        colored = []
        for i, s in enumerate(legs):
            colored.append((i, 0))
            pairs.append((leg_half(i), s))
        # leg ids collide with nothing: slot halves use the "v" tag
        if not _connected(v, range(len(legs)), pairs):
            continue
        return RawDiagram(empty_skeleton(1), [], colored, pairs, v)


def test_piece_key_invariant_under_relabelling():
    rng = random.Random(5)
    for _ in range(60):
        raw = _random_piece_raw(rng)
        perm = list(range(raw.n_verts))
        rng.shuffle(perm)
        rots = [rng.randrange(3) for _ in range(raw.n_verts)]

        def mv(half):
            if half[0] == "l":
                return half
            return slot_half(perm[half[1]], (half[2] + rots[half[1]]) % 3)

        moved = RawDiagram(raw.skel, [], raw.colored,
                           [(mv(a), mv(b)) for a, b in raw.pairs], raw.n_verts)
        assert piece_key(moved) == piece_key(raw)


def test_piece_key_separates_known_pair():
    # K4 and the doubled square: same vertex count, same degree sequence.
    def closed(pairs, v):
        return RawDiagram(empty_skeleton(1), [], [], pairs, v)

    def edge(u, su, w, sw):
        return (slot_half(u, su), slot_half(w, sw))

    k4 = closed([edge(0, 0, 1, 0), edge(0, 1, 2, 0), edge(0, 2, 3, 0),
                 edge(1, 1, 2, 1), edge(1, 2, 3, 1), edge(2, 2, 3, 2)], 4)
    sq = closed([edge(0, 0, 1, 0), edge(0, 1, 1, 1), edge(2, 0, 3, 0),
                 edge(2, 1, 3, 1), edge(0, 2, 2, 2), edge(1, 2, 3, 2)], 4)
    assert piece_key(k4) != piece_key(sq)


def test_library_matches_brute_force():
    lib = piece_library(4)
    by_stratum = {}
    for p in lib:
        by_stratum.setdefault((p.raw.n_verts, len(p.hands)), set()).add(
            piece_key(p.raw))
    for v, h in [(0, 2), (1, 3), (2, 0), (2, 2), (2, 4),
                 (3, 1), (3, 3), (4, 0), (4, 2)]:
        assert by_stratum.get((v, h), set()) == _brute_certs(v, h), (v, h)
    # nothing below the tadpole bar sneaks in
    assert (1, 1) not in by_stratum


def test_library_degree_counts():
    lib = piece_library(2)
    per_degree = {}
    for p in lib:
        assert p.degree2 % 2 == 0
        per_degree[p.degree2 // 2] = per_degree.get(p.degree2 // 2, 0) + 1
    # degree 1: strut, triple edge; degree 2: tripod, doubled edge with two
    # hands, doubled edge with stem, K4, doubled square
    assert per_degree == {1: 2, 2: 5}


def test_library_structural_invariants():
    lib = piece_library(3)
    keys = [piece_key(p.raw) for p in lib]
    assert len(set(keys)) == len(keys)
    for p in lib:
        assert p.degree2 <= 6
        assert _connected(p.raw.n_verts, p.hands, list(p.raw.pairs))
        for a, b in p.raw.pairs:
            assert not (a[0] == "v" and b[0] == "v" and a[1] == b[1])
    small = set(piece_key(p.raw) for p in piece_library(2))
    assert small <= set(keys)


# Placement counts, hand-derived.  At degree 2 the doubled-edge-with-stem
# piece dies everywhere: swapping its two far vertices reverses the cyclic
# order at the attachment vertex only.  The all-one-colour tripod dies too.
@pytest.mark.parametrize("skel,degree,count", [
    (arrows(1), 0, 1),
    (arrows(1), 1, 2),    # one chord, or the triple edge floating free
    (arrows(1), 2, 9),    # 3 chord pairs, chord+triple, triple^2, tripod,
                          # two-handed bubble, K4, doubled square
    (circles(1), 1, 2),
    (circles(1), 2, 8),   # chord pairs merge to crossed/uncrossed
    (empty_skeleton(1), 1, 2),
    (empty_skeleton(1), 2, 6),
    (circles(2), 1, 4),
])
def test_placement_counts(skel, degree, count):
    keys = diagrams_on(skel, degree)
    assert len(keys) == count
    assert len(set(keys)) == len(keys)
    for k in keys:
        assert degree2_of(k) == 2 * degree


def test_placements_without_closed_parts():
    full = diagrams_on(arrows(1), 2)
    touching = diagrams_on(arrows(1), 2, closed_parts=False)
    assert set(touching) <= set(full)
    # drops: chord+triple, triple+triple, K4, doubled square
    assert len(touching) == 5


def test_placement_cache_returns_same_object():
    a = diagrams_on(circles(1), 2)
    b = diagrams_on(circles(1), 2)
    assert a is b
