"""Colored-diagram spaces and the surgery invariant built from them.

The pipeline: symmetrize circle legs into colored legs (a linear solve
against the averaging map), pair up the colored legs, trade free dashed
circles for scalars, normalize by the signature counts of the linking
matrix, truncate.  Chain-graph components ride along untouched.
"""

from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .diagrams import (RawDiagram, Skeleton, leg_half, representative,
                       slot_half)
from .enumeration import diagrams_on
from .linalg import FormalSum
from .spaces import ConsistencyError, as_sum, degree_split, stratum
from .hopf import exp_bullet, log_bullet, product_bullet
from .tangles import TangleWord, linking_matrix, z_check

__all__ = [
    "split_components", "phi_map", "phi_inverse", "link_relation",
    "kappa", "o_reduce", "iota", "conjugate_sum",
    "signature_counts", "det_fraction",
    "c_constants", "omega_invariant", "z_surgery",
]


# ---------------------------------------------------------------------------
# skeleton bookkeeping


def split_components(skel: Skeleton) -> Tuple[Skeleton, List[int], List[int]]:
    """Separate circle components from the rest.

    Returns (colored-side skeleton, circle component indices, other
    component indices).  The colored-side skeleton keeps the non-circle
    components in order and carries one palette color per removed circle."""
    circles_at = [i for i, c in enumerate(skel.components)
                  if c[0] == "circle"]
    others = [i for i, c in enumerate(skel.components) if c[0] != "circle"]
    side = Skeleton([skel.components[i] for i in others], len(circles_at))
    return side, circles_at, others


def _edge_maps(skel: Skeleton, side: Skeleton, circles_at, others):
    """Edge index translation tables between skel and its colored side."""
    full_of_side: Dict[int, int] = {}
    for si, fi in enumerate(others):
        for _, name, _ in side.edges_of(si):
            full_of_side[side.edge_named(si, name)] = skel.edge_named(fi, name)
    circle_edge = {color: skel.edges_of(ci)[0][0] is None
                   for color, ci in enumerate(circles_at)}
    return full_of_side


def phi_map(x: FormalSum, skel: Skeleton) -> FormalSum:
    """Average colored legs onto the matching circles of skel.

    x lives on the colored side of skel (see split_components); color i
    feeds the i-th circle component, in all leg orders, each weighted by
    one over the factorial.  Legs on non-circle components are carried
    across unchanged."""
    side, circles_at, others = split_components(skel)
    out = FormalSum.zero()
    for k, c in x.terms():
        rep = representative(k)
        if rep.skel != side:
            raise ValueError("diagram not on the colored side of the target")
        per: List[List[int]] = [[] for _ in range(side.n_colors)]
        for l, col in rep.colored:
            per[col].append(l)
        out = out + c * _place_all(rep, skel, circles_at, others, per)
    return out


def _place_all(rep, skel, circles_at, others, per) -> FormalSum:
    el_base: List[Tuple[int, ...]] = [() for _ in skel.edges]
    for si, fi in enumerate(others):
        for e, name, _ in Skeleton([skel.components[i] for i in others],
                                   0).edges_of(si):
            pass
    # copy legs of the carried components by edge name
    side_skel = Skeleton([skel.components[i] for i in others],
                         len(circles_at))
    for si, fi in enumerate(others):
        for e, name, _ in side_skel.edges_of(si):
            el_base[skel.edge_named(fi, name)] = rep.edge_legs[e]
    weight = Fraction(1)
    for legs in per:
        weight /= _factorial(len(legs))
    out = FormalSum.zero()
    for orders in _order_products(per):
        el = list(el_base)
        for color, seq in enumerate(orders):
            e = skel.edges_of(circles_at[color])[0][0]
            el[e] = tuple(seq)
        raw = RawDiagram(skel, el, (), rep.pairs, rep.n_verts,
                         rep.free_loops)
        out = out + weight * as_sum(raw)
    return out


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _order_products(per):
    if not per:
        yield ()
        return
    head, rest = per[0], per[1:]
    for tail in _order_products(rest):
        for p in permutations(head):
            yield (p,) + tail
