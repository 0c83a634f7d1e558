"""Products, coproduct and exponentials on diagram sums.

On a stack of upward intervals, diagrams multiply by placing the second
factor's legs above the first's on every strand; with no skeleton at all
this is disjoint union and the product is commutative.  The coproduct
splits the dashed part of a diagram over all subsets of its connected
components.  exp and log are the usual series for this product, truncated
at a degree cap, and the Campbell-Hausdorff product is computed from them
rather than from a transcribed series.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .diagrams import (RawDiagram, Skeleton, combine, degree2_of,
                       representative)
from .linalg import FormalSum
from .spaces import DiagramSpace, as_sum, unit

__all__ = [
    "product_bullet", "module_action", "commutator",
    "coproduct", "tensor_nf",
    "exp_bullet", "log_bullet", "ch",
    "is_primitive", "is_grouplike", "has_connected_dashed",
    "HopfElement",
]


def skeleton_of(x: FormalSum) -> Optional[Skeleton]:
    """The common skeleton of x's support, or None for the zero sum."""
    skel = None
    for k, _ in x.terms():
        s = representative(k).skel
        if skel is None:
            skel = s
        elif s != skel:
            raise ValueError("sum mixes skeletons %r and %r" % (skel, s))
    return skel


def _stackable(skel: Skeleton) -> None:
    for c in skel.components:
        if c[0] != "arrow":
            raise ValueError("stacking product needs interval strands, "
                             "got %r" % (c,))


def product_bullet(a: FormalSum, b: FormalSum,
                   cap: Optional[int] = None) -> FormalSum:
    """Stack b above a strandwise (disjoint union when there are no
    strands); bilinear, truncated at the cap when one is given."""
    out = FormalSum.zero()
    ident = None
    for ka, ca in a.terms():
        ra = representative(ka)
        if ident is None:
            _stackable(ra.skel)
            ident = {e: e for e in range(len(ra.skel.edges))}
        for kb, cb in b.terms():
            rb = representative(kb)
            if rb.skel != ra.skel:
                raise ValueError("factors live on different skeletons")
            if cap is not None and \
                    degree2_of(ka) + degree2_of(kb) > 2 * cap:
                continue
            merged = combine(ra.skel, [(ra, ident), (rb, ident)])
            out = out + (ca * cb) * as_sum(merged)
    return out


def module_action(v: FormalSum, x: FormalSum,
                  cap: Optional[int] = None) -> FormalSum:
    """Disjoint-union a skeletonless sum v onto x.  Any skeleton for x."""
    out = FormalSum.zero()
    for kv, cv in v.terms():
        rv = representative(kv)
        if rv.skel.components:
            raise ValueError("left factor must have an empty skeleton")
        for kx, cx in x.terms():
            rx = representative(kx)
            if cap is not None and \
                    degree2_of(kv) + degree2_of(kx) > 2 * cap:
                continue
            ident = {e: e for e in range(len(rx.skel.edges))}
            merged = combine(rx.skel, [(rv, {}), (rx, ident)])
            out = out + (cv * cx) * as_sum(merged)
    return out


def commutator(a: FormalSum, b: FormalSum,
               cap: Optional[int] = None) -> FormalSum:
    return product_bullet(a, b, cap) - product_bullet(b, a, cap)


# ---------------------------------------------------------------------------
# coproduct


def _dashed_components(rep: RawDiagram) -> List[List[Tuple]]:
    """Connected components of the dashed graph, each as its pair list."""
    parent: Dict[Tuple, Tuple] = {}

    def node(h):
        return ("v", h[1]) if h[0] == "v" else ("l", h[1])

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in rep.pairs:
        ra, rb = find(node(a)), find(node(b))
        if ra != rb:
            parent[ra] = rb
    groups: Dict[Tuple, List[Tuple]] = {}
    for p in rep.pairs:
        groups.setdefault(find(node(p[0])), []).append(p)
    return list(groups.values())


def _sub_diagram(rep: RawDiagram, pair_lists: Sequence[List[Tuple]]) \
        -> RawDiagram:
    pairs = [p for pl in pair_lists for p in pl]
    legs = set()
    verts = set()
    for a, b in pairs:
        for h in (a, b):
            if h[0] == "l":
                legs.add(h[1])
            else:
                verts.add(h[1])
    vmap = {v: i for i, v in enumerate(sorted(verts))}

    def ren(h):
        return h if h[0] == "l" else ("v", vmap[h[1]], h[2])

    el = [tuple(l for l in ls if l in legs) for ls in rep.edge_legs]
    colored = [(l, c) for l, c in rep.colored if l in legs]
    return RawDiagram(rep.skel, el, colored,
                      [(ren(a), ren(b)) for a, b in pairs], len(verts))


def coproduct(x: FormalSum) -> List[Tuple[FormalSum, FormalSum]]:
    """All (left, right) splittings of the dashed part over subsets of
    its connected components; the scalar coefficient rides on the left."""
    out: List[Tuple[FormalSum, FormalSum]] = []
    for k, c in x.terms():
        rep = representative(k)
        if rep.free_loops:
            raise ValueError("coproduct undefined with free loops present")
        comps = _dashed_components(rep)
        n = len(comps)
        for mask in range(1 << n):
            left = [comps[i] for i in range(n) if mask >> i & 1]
            right = [comps[i] for i in range(n) if not mask >> i & 1]
            out.append((c * as_sum(_sub_diagram(rep, left)),
                        as_sum(_sub_diagram(rep, right))))
    return out


def tensor_nf(pairs: Sequence[Tuple[FormalSum, FormalSum]],
              space: DiagramSpace,
              cap2: Optional[int] = None) -> Dict[Tuple, Fraction]:
    """Normal form of a sum of tensors as a key-pair coefficient table;
    cap2 drops terms of total twice-degree above it."""
    acc: Dict[Tuple, Fraction] = {}
    for l, r in pairs:
        for kl, cl in space.nf(l).terms():
            for kr, cr in space.nf(r).terms():
                if cap2 is not None and \
                        degree2_of(kl) + degree2_of(kr) > cap2:
                    continue
                key = (kl, kr)
                v = acc.get(key, Fraction(0)) + cl * cr
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
    return acc


# ---------------------------------------------------------------------------
# exp / log / Campbell-Hausdorff


def exp_bullet(skel: Skeleton, x: FormalSum, cap: int) -> FormalSum:
    for k, _ in x.terms():
        if degree2_of(k) == 0:
            raise ValueError("exponent has a degree-0 term")
    result = unit(skel)
    term = unit(skel)
    for n in range(1, cap + 1):
        term = Fraction(1, n) * product_bullet(term, x, cap)
        if term.is_zero():
            break
        result = result + term
    return result


def log_bullet(skel: Skeleton, x: FormalSum, cap: int) -> FormalSum:
    low = FormalSum({k: c for k, c in x.terms() if degree2_of(k) == 0})
    if low != unit(skel):
        raise ValueError("log needs an input of the form 1 + higher degree")
    h = x - unit(skel)
    result = FormalSum.zero()
    term = unit(skel)
    for n in range(1, cap + 1):
        term = product_bullet(term, h, cap)
        if term.is_zero():
            break
        result = result + Fraction((-1) ** (n + 1), n) * term
    return result


def ch(skel: Skeleton, a: FormalSum, b: FormalSum, cap: int) -> FormalSum:
    """The product making exp a homomorphism: log(exp a . exp b)."""
    return log_bullet(
        skel,
        product_bullet(exp_bullet(skel, a, cap), exp_bullet(skel, b, cap),
                       cap),
        cap)


# ---------------------------------------------------------------------------
# coproduct-defined classes of elements


def is_primitive(x: FormalSum, space: Optional[DiagramSpace] = None) -> bool:
    """Whether the coproduct of x is x (x) 1 + 1 (x) x in the quotient."""
    skel = skeleton_of(x)
    if skel is None:
        return True
    if space is None:
        space = DiagramSpace(skel)
    one = unit(skel)
    pairs = coproduct(x) + [(-x, one), (Fraction(-1) * one, x)]
    return not tensor_nf(pairs, space)


def is_grouplike(x: FormalSum, cap: int,
                 space: Optional[DiagramSpace] = None) -> bool:
    """Whether the coproduct of x is x (x) x up to total degree cap."""
    skel = skeleton_of(x)
    if skel is None:
        return True
    if space is None:
        space = DiagramSpace(skel)
    lhs = tensor_nf(coproduct(x), space, cap2=2 * cap)
    rhs = tensor_nf([(x, x)], space, cap2=2 * cap)
    for key in set(lhs) | set(rhs):
        if lhs.get(key, Fraction(0)) != rhs.get(key, Fraction(0)):
            return False
    return True


def has_connected_dashed(key) -> bool:
    rep = representative(key)
    return len(_dashed_components(rep)) == 1


class HopfElement:
    """A diagram sum with its degree cap; the two coproduct flags are
    computed on first use and cached."""

    __slots__ = ("value", "cap", "_skel", "_primitive", "_grouplike")

    def __init__(self, value: FormalSum, cap: int):
        self.value = value
        self.cap = cap
        self._skel = skeleton_of(value)
        self._primitive: Optional[bool] = None
        self._grouplike: Optional[bool] = None

    @property
    def is_primitive(self) -> bool:
        if self._primitive is None:
            self._primitive = is_primitive(self.value)
        return self._primitive

    @property
    def is_grouplike(self) -> bool:
        if self._grouplike is None:
            self._grouplike = is_grouplike(self.value, self.cap)
        return self._grouplike

    def __mul__(self, other: "HopfElement") -> "HopfElement":
        if self.cap != other.cap:
            raise ValueError("cap mismatch: %d vs %d" % (self.cap, other.cap))
        return HopfElement(product_bullet(self.value, other.value, self.cap),
                           self.cap)

    def exp(self) -> "HopfElement":
        return HopfElement(exp_bullet(self._skel, self.value, self.cap),
                           self.cap)

    def log(self) -> "HopfElement":
        return HopfElement(log_bullet(self._skel, self.value, self.cap),
                           self.cap)

    def __eq__(self, other):
        return (isinstance(other, HopfElement) and self.cap == other.cap
                and self.value == other.value)

    def __repr__(self):
        return "HopfElement(%r, cap=%d)" % (self.value, self.cap)
