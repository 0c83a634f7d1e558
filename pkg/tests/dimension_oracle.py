"""Brute-force dimensions of the diagram quotients, by an independent route.

Nothing here imports the package under test.  Diagrams are encoded as
loopless multigraphs on (leg, vertex) node sets via explicit edge lists,
with a rotation-normalized triple of incident edge ids per inner vertex
recording its cyclic order.  The sign quotient (relabelling invariance and
antisymmetry) is a signed union-find over elementary moves; the sliding
and reconnection relations are rebuilt directly on edge lists; the final
rank over the surviving classes is sympy's.

Supported skeletons: no skeleton at all, one circle, one line, two lines.
Legs sit at fixed positions; only inner vertices may be relabelled, plus
whole-circle rotation.
"""

from itertools import product
from math import gcd

# encoding: (n1, legs, edges, triples)
#   n1      legs on the first line (equal to legs except for "lines2")
#   legs    total number of legs; leg nodes are 0..legs-1, inner vertex
#           nodes follow
#   edges   sorted tuple of (a, b) node pairs, a < b, parallel copies
#           adjacent; the edge id is the tuple index
#   triples one tuple per inner vertex: its three incident edge ids,
#           rotated so the smallest is first; the two cyclic orders of a
#           vertex give two different triples (ids are distinct)


def _norm_triple(seq):
    seq = list(seq)
    i = seq.index(min(seq))
    return tuple(seq[i:] + seq[:i])


def _build(n1, legs, edge_list, triple_map):
    """Sort an edge list (stably, so parallel copies keep their relative
    order), remap the edge ids inside the triples, rotation-normalize."""
    order = sorted(range(len(edge_list)), key=lambda i: (edge_list[i], i))
    newid = {old: new for new, old in enumerate(order)}
    edges = tuple(edge_list[i] for i in order)
    triples = tuple(_norm_triple([newid[e] for e in triple_map[v]])
                    for v in range(len(triple_map)))
    return (n1, legs, edges, triples)


def _relabel(enc, node_map):
    """Apply a node relabelling; cyclic data is transported, never flipped."""
    n1, legs, edges, triples = enc
    el = []
    for a, b in edges:
        x, y = node_map[a], node_map[b]
        el.append((min(x, y), max(x, y)))
    tm = {}
    for v in range(len(triples)):
        tm[node_map[legs + v] - legs] = list(triples[v])
    return _build(n1, legs, el, tm)


def _enumerate_matrices(caps):
    """Symmetric nonnegative integer matrices, zero diagonal, row sums caps."""
    n = len(caps)
    if n == 0:
        return [[]]
    m = [[0] * n for _ in range(n)]
    used = [0] * n
    out = []

    def row(i):
        if i == n:
            out.append([r[:] for r in m])
            return
        rem = caps[i] - used[i]
        if rem < 0:
            return
        cell(i, i + 1, rem)

    def cell(i, j, rem):
        if j == n:
            if rem == 0:
                row(i + 1)
            return
        top = min(rem, caps[j] - used[j])
        for x in range(top + 1):
            m[i][j] = m[j][i] = x
            used[j] += x
            cell(i, j + 1, rem - x)
            used[j] -= x
        m[i][j] = m[j][i] = 0

    row(0)
    return out


def _incident(edge_list, node):
    out = []
    for i, (a, b) in enumerate(edge_list):
        if a == node or b == node:
            out.append(i)
    return out


def _structures(shape, degree):
    """Every labeled oriented diagram of the degree on the shape."""
    deg2 = 2 * degree
    out = []
    for v in range(deg2 + 1):
        legs = deg2 - v
        if shape == "empty" and legs:
            continue
        splits = [(legs, legs)] if shape != "lines2" else \
            [(a, legs) for a in range(legs + 1)]
        for n1, _ in splits:
            caps = [1] * legs + [3] * v
            for mat in _enumerate_matrices(caps):
                el = []
                for a in range(len(caps)):
                    for b in range(a + 1, len(caps)):
                        el.extend([(a, b)] * mat[a][b])
                tris = [_incident(el, legs + w) for w in range(v)]
                options = [( _norm_triple(t), _norm_triple(t[::-1]) )
                           for t in tris]
                for choice in product(*options):
                    out.append((n1, legs, tuple(el), tuple(choice)))
    return out


# ---------------------------------------------------------------------------
# signed union-find


class _Signed:
    def __init__(self):
        self.parent = {}
        self.sign = {}
        self.dead = set()

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.sign[x] = 1
            return x, 1
        path = []
        r = x
        while self.parent[r] != r:
            path.append(r)
            r = self.parent[r]
        cur = 1
        for y in reversed(path):
            cur = self.sign[y] * cur
            self.parent[y] = r
            self.sign[y] = cur
        return r, (cur if path else 1)

    def union(self, a, b, rel):
        """Impose a = rel * b."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            if sa != rel * sb:
                self.dead.add(ra)
            return
        # want sign(rb -> ra) with a = rel*b: sa = rel * sb * sign(rb->ra)
        self.parent[rb] = ra
        self.sign[rb] = rel * sa * sb
        if rb in self.dead:
            self.dead.discard(rb)
            self.dead.add(ra)

    def classify(self, x):
        r, s = self.find(x)
        if r in self.dead:
            return None
        return r, s


def _moves(shape, enc):
    n1, legs, edges, triples = enc
    v = len(triples)
    out = []
    for w in range(v):  # antisymmetry
        tm = {u: list(triples[u]) for u in range(v)}
        tm[w] = list(reversed(triples[w]))
        out.append((_build(n1, legs, list(edges), tm), -1))
    for w in range(v - 1):  # relabel inner vertices
        nm = list(range(legs + v))
        nm[legs + w], nm[legs + w + 1] = nm[legs + w + 1], nm[legs + w]
        out.append((_relabel(enc, nm), 1))
    for e in range(len(edges) - 1):  # renumber parallel copies
        if edges[e] == edges[e + 1]:
            swap = {e: e + 1, e + 1: e}
            tm = {u: [swap.get(i, i) for i in triples[u]] for u in range(v)}
            out.append((_build(n1, legs, list(edges), tm), 1))
    if shape == "circle" and legs > 1:
        nm = [(x - 1) % legs if x < legs else x for x in range(legs + v)]
        out.append((_relabel(enc, nm), 1))
    return out


# ---------------------------------------------------------------------------
# relation rows on edge lists


def _leg_sites(shape, n1, legs):
    sites = []
    if shape == "lines2":
        sites += [(p, p + 1) for p in range(n1 - 1)]
        sites += [(p, p + 1) for p in range(n1, legs - 1)]
    elif shape in ("line", "circle"):
        sites += [(p, p + 1) for p in range(legs - 1)]
        if shape == "circle" and legs >= 2:
            sites.append((legs - 1, 0))
    return sites


def _neighbor(edges, leg):
    for i, (a, b) in enumerate(edges):
        if a == leg:
            return i, b
        if b == leg:
            return i, a
    raise AssertionError("leg %d unmatched" % leg)


def _stu_row(shape, enc, p, q):
    """[D] - [legs p,q exchanged] - [contraction], or None on a chord
    whose two ends are exactly these legs."""
    n1, legs, edges, triples = enc
    v = len(triples)
    e1, m1 = _neighbor(edges, p)
    e2, m2 = _neighbor(edges, q)
    if m1 == q:
        return None
    nm = list(range(legs + v))
    nm[p], nm[q] = q, p
    swapped = _relabel(enc, nm)

    wrap = q < p
    lo = p if not wrap else None
    newleg = (legs - 2) if wrap else lo

    def shrink(x):
        if x >= legs:
            return x - 1  # vertex block shifts into the freed leg slot
        r = x - sum(1 for d in (p, q) if d < x)
        if wrap:
            return r
        return r if r < newleg else r + 1

    nlegs = legs - 1
    w_node = nlegs + v
    el = []
    keep = []
    for i, (a, b) in enumerate(edges):
        if i in (e1, e2):
            continue
        x, y = shrink(a), shrink(b)
        el.append((min(x, y), max(x, y)))
        keep.append(i)
    t0 = len(el)
    el.append((min(newleg, w_node), max(newleg, w_node)))
    x, y = shrink(m1), w_node
    el.append((min(x, y), max(x, y)))
    x, y = shrink(m2), w_node
    el.append((min(x, y), max(x, y)))
    old2tmp = {old: i for i, old in enumerate(keep)}
    # strands that ended on the removed legs now end on the new vertex
    old2tmp[e1] = t0 + 1
    old2tmp[e2] = t0 + 2
    tm = {u: [old2tmp[i] for i in triples[u]] for u in range(v)}
    tm[v] = [t0, t0 + 1, t0 + 2]
    if shape == "lines2":
        nn1 = n1 - 1 if q < n1 else n1
    else:
        nn1 = nlegs
    y_term = _build(nn1, nlegs, el, tm)
    return [(enc, 1), (swapped, -1), (y_term, -1)]


def _ihx_rows_at(enc, nu, nw, conn):
    """Row I - H + X for the inner edge copy conn between vertex nodes
    nu and nw; terms whose reconnection closes a strand onto its own
    vertex are dropped."""
    n1, legs, edges, triples = enc
    v = len(triples)
    tu = list(triples[nu - legs])
    tw = list(triples[nw - legs])
    iu = tu.index(conn)
    a1, a2 = tu[(iu + 1) % 3], tu[(iu + 2) % 3]
    iw = tw.index(conn)
    b1, b2 = tw[(iw + 1) % 3], tw[(iw + 2) % 3]

    def far(eid, near):
        a, b = edges[eid]
        return b if a == near else a

    def rebuilt(u_pair, w_pair):
        # slots: (edge id, old near end, new near end)
        slots = [(a1, nu), (a2, nu), (b1, nw), (b2, nw)]
        tgt = {}
        for eid in u_pair:
            tgt.setdefault(eid, []).append(nu)
        for eid in w_pair:
            tgt.setdefault(eid, []).append(nw)
        el = list(edges)
        done = set()
        for eid, near in slots:
            if eid in done:
                continue
            done.add(eid)
            tg = tgt[eid]
            if len(tg) == 2:
                x, y = tg  # both ends of the strand are being reattached
            else:
                x, y = far(eid, near), tg[0]
            if x == y:
                return None
            el[eid] = (min(x, y), max(x, y))
        tm = {u: list(triples[u]) for u in range(v)}
        tm[nu - legs] = [conn] + list(u_pair)
        tm[nw - legs] = [conn] + list(w_pair)
        return _build(n1, legs, el, tm)

    row = [(enc, 1)]
    h_term = rebuilt((a1, b1), (a2, b2))
    x_term = rebuilt((a1, b2), (a2, b1))
    if h_term is not None:
        row.append((h_term, -1))
    if x_term is not None:
        row.append((x_term, 1))
    return row


# ---------------------------------------------------------------------------
# the dimension computation


def _int_rank(rows):
    """Rank of sparse integer rows; cross-multiplication keeps every
    intermediate value an integer (no fractions anywhere)."""
    basis = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            c = min(r)
            if c not in basis:
                g = 0
                for v in r.values():
                    g = gcd(g, v)
                basis[c] = {k: v // g for k, v in r.items()}
                rank += 1
                break
            b = basis[c]
            pv, cv = b[c], r[c]
            new = {}
            for k, v in r.items():
                w = pv * v - cv * b.get(k, 0)
                if w:
                    new[k] = w
            for k, v in b.items():
                if k not in r:
                    new[k] = -cv * v
            r = new
    return rank


def oracle_dimension(shape, degree):
    """Dimension of the degree-d quotient on one of "empty", "circle",
    "line", "lines2"."""
    if shape not in ("empty", "circle", "line", "lines2"):
        raise ValueError(shape)
    structs = _structures(shape, degree)
    uf = _Signed()
    for enc in structs:
        uf.find(enc)
        for other, rel in _moves(shape, enc):
            uf.union(enc, other, rel)

    def as_row(terms):
        row = {}
        for enc, coeff in terms:
            cl = uf.classify(enc)
            if cl is None:
                continue
            root, sign = cl
            c = row.get(root, 0) + coeff * sign
            if c:
                row[root] = c
            else:
                row.pop(root, None)
        return tuple(sorted(row.items()))

    rows = set()
    for enc in structs:
        n1, legs, edges, triples = enc
        for p, q in _leg_sites(shape, n1, legs):
            r = _stu_row(shape, enc, p, q)
            if r is not None:
                cl = as_row(r)
                if cl:
                    rows.add(cl)
        for u in range(len(triples)):
            for w in range(len(triples)):
                if u == w:
                    continue
                nu, nw = legs + u, legs + w
                for conn in triples[u]:
                    a, b = edges[conn]
                    if (a, b) == (min(nu, nw), max(nu, nw)):
                        cl = as_row(_ihx_rows_at(enc, nu, nw, conn))
                        if cl:
                            rows.add(cl)

    roots = set()
    for enc in structs:
        cl = uf.classify(enc)
        if cl is not None:
            roots.add(cl[0])
    return len(roots) - _int_rank(sorted(rows))
