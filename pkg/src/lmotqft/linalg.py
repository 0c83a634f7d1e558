"""Sparse exact linear algebra over the rationals.

Everything downstream (quotient spaces, normal forms, the inverse of the
half-circle isomorphism) reduces to row reduction of sparse matrices with
Fraction entries.  Columns are arbitrary hashable keys; a KeyIndex assigns
them integer ids in first-seen order so pivot selection is deterministic.

The module also carries two independent checks used by the test suite:
a fraction-free Bareiss elimination (rank and determinant without any
intermediate fractions) and an exact signature computation for symmetric
matrices by congruence reduction.  These are deliberately separate code
paths from the rref so they can serve as oracles for it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Scalar = Fraction
Row = Dict[int, Fraction]


class FormalSum:
    """A finite rational linear combination of hashable keys.

    The zero coefficient is never stored.  Instances are treated as
    immutable; all arithmetic returns fresh objects.

    >>> a = FormalSum({"x": Fraction(1)})
    >>> b = FormalSum({"x": Fraction(-1), "y": Fraction(2)})
    >>> sorted((a + b).terms())
    [('y', Fraction(2, 1))]
    >>> (a - a).is_zero()
    True
    >>> 3 * b == FormalSum({"x": Fraction(-3), "y": Fraction(6)})
    True
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Dict[Hashable, Fraction]] = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[k] = v
        self._c = c

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls()

    @classmethod
    def single(cls, key: Hashable, coeff=Fraction(1)) -> "FormalSum":
        return cls({key: Fraction(coeff)})

    def terms(self) -> Iterable[Tuple[Hashable, Fraction]]:
        return self._c.items()

    def keys(self):
        return self._c.keys()

    def coeff(self, key: Hashable) -> Fraction:
        return self._c.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        c = dict(self._c)
        for k, v in other._c.items():
            nv = c.get(k, Fraction(0)) + v
            if nv:
                c[k] = nv
            else:
                c.pop(k, None)
        out = FormalSum()
        out._c = c
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __neg__(self) -> "FormalSum":
        out = FormalSum()
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def scaled(self, s) -> "FormalSum":
        s = Fraction(s)
        out = FormalSum()
        if s:
            out._c = {k: s * v for k, v in self._c.items()}
        return out

    def __rmul__(self, s) -> "FormalSum":
        return self.scaled(s)

    def __mul__(self, s) -> "FormalSum":
        return self.scaled(s)

    def map_keys(self, fn) -> "FormalSum":
        """Push the sum through a key map; images may collide or vanish.

        fn returns either a new key, None (kill the term), or a FormalSum
        (expand the term).
        """
        out = FormalSum()
        for k, v in self._c.items():
            img = fn(k)
            if img is None:
                continue
            if isinstance(img, FormalSum):
                out = out + img.scaled(v)
            else:
                out = out + FormalSum.single(img, v)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "FormalSum(0)"
        bits = []
        for k, v in sorted(self._c.items(), key=lambda t: repr(t[0])):
            bits.append("%s*%r" % (v, k))
        return "FormalSum(" + " + ".join(bits) + ")"


class KeyIndex:
    """Assigns dense integer ids to hashable keys in first-seen order."""

    def __init__(self):
        self._id: Dict[Hashable, int] = {}
        self._key: List[Hashable] = []

    def id(self, key: Hashable) -> int:
        i = self._id.get(key)
        if i is None:
            i = len(self._key)
            self._id[key] = i
            self._key.append(key)
        return i

    def known(self, key: Hashable) -> Optional[int]:
        return self._id.get(key)

    def key(self, i: int) -> Hashable:
        return self._key[i]

    def __len__(self):
        return len(self._key)

    def row_of(self, v: FormalSum) -> Row:
        return {self.id(k): c for k, c in v.terms()}


# ---------------------------------------------------------------------------
# incremental reduced row echelon form


class Echelon:
    """Rows in reduced echelon form, built incrementally.

    Each stored row has leading coefficient 1 at its pivot column and
    zeros at every other pivot column.  Adding a row either extends the
    span (returns the new pivot) or reduces to zero (returns None).

    When track=True the class also records, for every stored row, the
    combination of the original input rows producing it.  That is what
    lets us express a target vector back in terms of the inputs.
    """

    def __init__(self, track: bool = False):
        self.pivots: List[int] = []           # sorted pivot columns
        self._rows: Dict[int, Row] = {}       # pivot col -> row
        self._combo: Dict[int, Row] = {}      # pivot col -> input combination
        self._track = track
        self._n_in = 0

    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Tuple[Row, Row]:
        """Fully reduce a row against the current echelon.

        Returns (residual, combination) where
        residual == row - sum combination[p] * stored_row[p].
        """
        row = dict(row)
        combo: Row = {}
        for p in self.pivots:
            c = row.get(p)
            if not c:
                continue
            combo[p] = c
            for col, v in self._rows[p].items():
                nv = row.get(col, Fraction(0)) - c * v
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
        return row, combo

    def add(self, row: Row) -> Optional[int]:
        """Insert one row; returns its pivot column or None if dependent."""
        idx = self._n_in
        self._n_in += 1
        residual, combo = self.reduce(row)
        if not residual:
            return None
        p = min(residual)
        lead = residual[p]
        newrow = {col: v / lead for col, v in residual.items()}

        if self._track:
            newcombo: Row = {idx: Fraction(1)}
            for q, c in combo.items():
                for j, v in self._combo[q].items():
                    nv = newcombo.get(j, Fraction(0)) - c * v
                    if nv:
                        newcombo[j] = nv
                    else:
                        newcombo.pop(j, None)
            newcombo = {j: v / lead for j, v in newcombo.items()}
        else:
            newcombo = {}

        # back-substitute so older rows are zero on the new pivot column
        for q in self.pivots:
            old = self._rows[q]
            c = old.get(p)
            if not c:
                continue
            merged = dict(old)
            for col, v in newrow.items():
                nv = merged.get(col, Fraction(0)) - c * v
                if nv:
                    merged[col] = nv
                else:
                    merged.pop(col, None)
            self._rows[q] = merged
            if self._track:
                mc = dict(self._combo[q])
                for j, v in newcombo.items():
                    nv = mc.get(j, Fraction(0)) - c * v
                    if nv:
                        mc[j] = nv
                    else:
                        mc.pop(j, None)
                self._combo[q] = mc

        self._rows[p] = newrow
        self._combo[p] = newcombo
        self.pivots.append(p)
        self.pivots.sort()
        return p

    def add_all(self, rows: Iterable[Row]) -> None:
        for r in rows:
            self.add(r)

    def row(self, pivot: int) -> Row:
        return self._rows[pivot]

    def contains(self, row: Row) -> bool:
        residual, _ = self.reduce(row)
        return not residual

    def express(self, row: Row) -> Optional[Row]:
        """Write row as a combination of the original input rows.

        Returns {input index: coefficient} or None if row is outside the
        span.  Requires track=True at construction.
        """
        if not self._track:
            raise ValueError("Echelon built without tracking")
        residual, combo = self.reduce(row)
        if residual:
            return None
        out: Row = {}
        for p, c in combo.items():
            for j, v in self._combo[p].items():
                nv = out.get(j, Fraction(0)) + c * v
                if nv:
                    out[j] = nv
                else:
                    out.pop(j, None)
        return out


def rref(rows: Sequence[Row]) -> List[Tuple[int, Row]]:
    """Reduced row echelon form of a list of sparse rows.

    Returns [(pivot_col, row), ...] sorted by pivot column.
    """
    e = Echelon()
    e.add_all(rows)
    return [(p, e.row(p)) for p in e.pivots]


def rank(rows: Sequence[Row]) -> int:
    e = Echelon()
    e.add_all(rows)
    return e.rank()


# ---------------------------------------------------------------------------
# dense exact routines: Bareiss elimination and symmetric signature


def _to_int_matrix(mat: Sequence[Sequence]) -> List[List[int]]:
    """Clear denominators row by row; preserves rank and sign of det
    (each row is scaled by a positive integer)."""
    out = []
    for row in mat:
        row = [Fraction(x) for x in row]
        lcm = 1
        for x in row:
            d = x.denominator
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        out.append([int(x * lcm) for x in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss(mat: Sequence[Sequence]) -> Tuple[int, Fraction]:
    """Fraction-free Gaussian elimination.

    Returns (rank, det) where det is the determinant of the original
    matrix when it is square (0 for singular), and Fraction(0) otherwise.
    Used as an independent oracle for the rref-based rank.
    """
    rows = [[Fraction(x) for x in r] for r in mat]
    n = len(rows)
    m = len(rows[0]) if n else 0
    a = [[x for x in r] for r in rows]

    # track row scalings from denominator clearing to recover the true det
    scale = Fraction(1)
    cleared = []
    for r in a:
        lcm = 1
        for x in r:
            d = x.denominator
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        scale *= lcm
        cleared.append([int(x * lcm) for x in r])
    a = cleared

    prev = 1
    rk = 0
    sign = 1
    col = 0
    for col in range(m):
        if rk >= n:
            break
        piv = None
        for r in range(rk, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rk:
            a[rk], a[piv] = a[piv], a[rk]
            sign = -sign
        for r in range(rk + 1, n):
            for c in range(col + 1, m):
                a[r][c] = (a[rk][col] * a[r][c] - a[r][col] * a[rk][c]) // prev
            a[r][col] = 0
        prev = a[rk][col]
        rk += 1

    if n == m and rk == n:
        det = Fraction(sign * prev, 1) / scale
    else:
        det = Fraction(0)
    return rk, det


def det(mat: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = len(mat)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in mat):
        raise ValueError("matrix is not square")
    _, d = bareiss(mat)
    return d


def signature(mat: Sequence[Sequence]) -> Tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric rational matrix.

    Congruence reduction: repeatedly clear a nonzero diagonal entry; if
    the diagonal is zero but some off-diagonal entry is not, a row+column
    addition manufactures a nonzero diagonal entry without changing the
    signature.  Exact throughout.
    """
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    for i, row in enumerate(a):
        if len(row) != n:
            raise ValueError("matrix is not square")
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")

    pos = neg = zero = 0
    live = list(range(n))
    while live:
        # find a usable diagonal entry
        k = None
        for i in live:
            if a[i][i]:
                k = i
                break
        if k is None:
            # diagonal all zero on the live block; look off-diagonal
            found = None
            for i in live:
                for j in live:
                    if i != j and a[i][j]:
                        found = (i, j)
                        break
                if found:
                    break
            if not found:
                zero += len(live)
                break
            i, j = found
            # row_i += row_j ; col_i += col_j  (congruence by E + e_ij)
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        live.remove(k)
        for r in live:
            f = a[r][k] / d
            if not f:
                continue
            for c in range(n):
                a[r][c] -= f * a[k][c]
            for c in range(n):
                a[c][r] -= f * a[c][k]
    return pos, neg, zero


def solve_symmetric(mat: Sequence[Sequence], rhs: Sequence[Sequence]) -> List[List[Fraction]]:
    """Solve A X = B exactly for invertible A; B given by columns as rows.

    rhs is a list of right-hand-side vectors; the result is the list of
    solution vectors in the same order.
    """
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(v[i]) for v in rhs]
         for i, row in enumerate(mat)]
    m = len(rhs)
    # plain Gauss-Jordan with partial pivot by first nonzero
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            raise ValueError("singular matrix")
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][col]
        a[r] = [x / lead for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                c = a[i][col]
                a[i] = [x - c * y for x, y in zip(a[i], a[r])]
        r += 1
    return [[a[i][n + j] for i in range(n)] for j in range(m)]


def invert(mat: Sequence[Sequence]) -> List[List[Fraction]]:
    """Exact inverse of a square rational matrix."""
    n = len(mat)
    eye = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    cols = solve_symmetric(mat, eye)
    # cols[j] is the j-th column of the inverse
    return [[cols[j][i] for j in range(n)] for i in range(n)]
