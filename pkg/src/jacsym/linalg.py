"""Exact matrices over the tower and over the polynomial ring.

``ScalarMatrix`` holds constant linear maps (conjugators, Kronecker
factors); ``PolyMatrix`` holds Jacobians and Hessians.  ``nullspace``
solves sparse homogeneous systems exactly.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactnum import ONE, ZERO, Scalar, ScalarLike, as_scalar
from .multipoly import Poly

ScalarVector = Tuple[Scalar, ...]


def vector(values: Iterable[ScalarLike]) -> ScalarVector:
    return tuple(as_scalar(v) for v in values)


# ---------------------------------------------------------------------------
# sparse exact elimination

def row_reduce(rows: Iterable[Mapping[int, Scalar]]) -> Dict[int, Dict[int, Scalar]]:
    """Reduced row echelon form of a sparse system.

    Rows are ``{column: coefficient}`` dicts.  Returns ``{pivot_col: row}``
    where each row has coefficient 1 at its pivot and 0 at every other pivot.
    """
    pivots: Dict[int, Dict[int, Scalar]] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if not v.is_zero()}
        for c in [c for c in r if c in pivots]:
            f = r.get(c)
            if f is None:
                continue
            for k, v in pivots[c].items():
                s = r.get(k, ZERO) - f * v
                if s.is_zero():
                    r.pop(k, None)
                else:
                    r[k] = s
        if not r:
            continue
        p = min(r)
        inv = r[p].inverse()
        r = {k: v * inv for k, v in r.items()}
        for pr in pivots.values():
            f = pr.get(p)
            if f is None:
                continue
            for k, v in r.items():
                s = pr.get(k, ZERO) - f * v
                if s.is_zero():
                    pr.pop(k, None)
                else:
                    pr[k] = s
        pivots[p] = r
    return pivots


def nullspace(rows: Iterable[Mapping[int, Scalar]], ncols: int) -> List[List[Scalar]]:
    """Basis of {v : row . v = 0 for every row}, one vector per free column."""
    pivots = row_reduce(rows)
    if any(c >= ncols or c < 0 for c in pivots):
        raise ValueError("row references a column outside the system")
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for p, row in pivots.items():
            coef = row.get(f)
            if coef is not None:
                v[p] = -coef
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------

class ScalarMatrix:
    """Dense matrix of Scalars; immutable."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[ScalarLike]]):
        data = tuple(tuple(as_scalar(v) for v in r) for r in rows)
        if not data:
            raise ValueError("empty matrix")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix")
        self.rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def reversal(cls, n: int) -> "ScalarMatrix":
        """I_n^r, the identity with its rows reversed."""
        return cls([[ONE if i + j == n - 1 else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "ScalarMatrix":
        return cls([[ZERO] * n for _ in range(m)])

    @classmethod
    def diagonal(cls, values: Sequence[ScalarLike]) -> "ScalarMatrix":
        n = len(values)
        return cls([[as_scalar(values[i]) if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ScalarMatrix"]]) -> "ScalarMatrix":
        rows = []
        for brow in blocks:
            h = brow[0].nrows
            for i in range(h):
                rows.append([v for b in brow for v in b.rows[i]])
        return cls(rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, ScalarMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._same_shape(other)
        return ScalarMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._same_shape(other)
        return ScalarMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.scale(-ONE)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def scale(self, c: ScalarLike) -> "ScalarMatrix":
        c = as_scalar(c)
        return ScalarMatrix([[v * c for v in r] for r in self.rows])

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ScalarMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows))
            return ScalarMatrix([[_dot(r, c) for c in cols] for r in self.rows])
        vec = tuple(as_scalar(v) for v in other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, vec) for r in self.rows)

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(list(zip(*self.rows)))

    @property
    def T(self):
        return self.transpose()

    def reverse(self) -> "ScalarMatrix":
        """M^r: rows in reverse order."""
        return ScalarMatrix(self.rows[::-1])

    def conj(self) -> "ScalarMatrix":
        return ScalarMatrix([[v.conj() for v in r] for r in self.rows])

    def power(self, k: int) -> "ScalarMatrix":
        result = ScalarMatrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self.rows for v in r)

    def kron(self, other: "ScalarMatrix") -> "ScalarMatrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append([a * b for a in r for b in s])
        return ScalarMatrix(rows)

    def det(self) -> Scalar:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        det = ONE
        for k in range(n):
            piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
            if piv is None:
                return ZERO
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det = det * m[k][k]
            inv = m[k][k].inverse()
            for i in range(k + 1, n):
                f = m[i][k] * inv
                if f.is_zero():
                    continue
                for j in range(k, n):
                    m[i][j] = m[i][j] - f * m[k][j]
        return det

    def inverse(self) -> "ScalarMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        m = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for k in range(n):
            piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            m[k], m[piv] = m[piv], m[k]
            inv = m[k][k].inverse()
            m[k] = [v * inv for v in m[k]]
            for i in range(n):
                if i != k and not m[i][k].is_zero():
                    f = m[i][k]
                    m[i] = [a - f * b for a, b in zip(m[i], m[k])]
        return ScalarMatrix([r[n:] for r in m])

    def nullspace(self) -> List[ScalarVector]:
        rows = [{j: v for j, v in enumerate(r) if not v.is_zero()} for r in self.rows]
        return [tuple(v) for v in nullspace(rows, self.ncols)]

    def __repr__(self):
        return "ScalarMatrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"


def _dot(r, c) -> Scalar:
    total = ZERO
    for a, b in zip(r, c):
        if a.is_zero() or b.is_zero():
            continue
        total = total + a * b
    return total


# ---------------------------------------------------------------------------

class PolyMatrix:
    """Dense matrix of polynomials sharing one arity; immutable."""

    __slots__ = ("rows", "nrows", "ncols", "arity")

    def __init__(self, rows: Sequence[Sequence[Poly]], arity: Optional[int] = None):
        data = tuple(tuple(r) for r in rows)
        if not data or not data[0]:
            raise ValueError("empty matrix")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix")
        if arity is not None:
            # scalar entries become constants
            data = tuple(tuple(p if isinstance(p, Poly) else Poly.constant(arity, p) for p in r) for r in data)
        arities = {p.arity for r in data for p in r}
        if len(arities) != 1:
            raise ValueError("matrix entries must share one arity")
        (a,) = arities
        if arity is not None and arity != a:
            raise ValueError("declared arity does not match entries")
        self.rows = data
        self.nrows = len(data)
        self.ncols = width
        self.arity = a

    @classmethod
    def from_scalars(cls, m: ScalarMatrix, arity: int) -> "PolyMatrix":
        return cls([[Poly.constant(arity, v) for v in r] for r in m.rows])

    @classmethod
    def identity(cls, n: int, arity: int) -> "PolyMatrix":
        return cls.from_scalars(ScalarMatrix.identity(n), arity)

    @classmethod
    def zeros(cls, m: int, n: int, arity: int) -> "PolyMatrix":
        return cls([[Poly.zero(arity)] * n for _ in range(m)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.arity == other.arity and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.rows for p in r)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: ScalarLike) -> "PolyMatrix":
        return PolyMatrix([[p.scale(c) for p in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, ScalarMatrix):
            other = PolyMatrix.from_scalars(other, self.arity)
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows))
            return PolyMatrix([[_pdot(r, c, self.arity) for c in cols] for r in self.rows])
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_pdot(r, vec, self.arity) for r in self.rows)

    def __rmatmul__(self, other):
        if isinstance(other, ScalarMatrix):
            return PolyMatrix.from_scalars(other, self.arity) @ self
        return NotImplemented

    def left_vector_product(self, lam: Sequence[ScalarLike]) -> Tuple[Poly, ...]:
        """The row vector lam^t . M."""
        lam = [as_scalar(v) for v in lam]
        if len(lam) != self.nrows:
            raise ValueError("vector length mismatch")
        out = []
        for j in range(self.ncols):
            acc = Poly.zero(self.arity)
            for i, l in enumerate(lam):
                if not l.is_zero():
                    acc = acc + self.rows[i][j].scale(l)
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows)))

    def reverse(self) -> "PolyMatrix":
        """M^r: rows in reverse order."""
        return PolyMatrix(self.rows[::-1])

    def anti_transpose(self) -> "PolyMatrix":
        n, m = self.nrows, self.ncols
        return PolyMatrix([[self.rows[n - 1 - j][m - 1 - i] for j in range(n)] for i in range(m)])

    def subst(self, images: Sequence[Poly]) -> "PolyMatrix":
        """Evaluate every entry at the polynomial point ``images``."""
        return PolyMatrix([[p.subst(images) for p in r] for r in self.rows])

    def power(self, k: int) -> "PolyMatrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        result = PolyMatrix.identity(self.nrows, self.arity)
        for _ in range(k):
            result = result @ self
        return result

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def det(self) -> Poly:
        """Determinant: fraction-free Bareiss up to size 6, memoized Laplace beyond."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        if self.nrows <= 6:
            return det_bareiss(self)
        return det_laplace(self)

    def rank(self) -> int:
        """Rank over the rational function field K(x)."""
        return rank_fraction_free(self)

    def __repr__(self):
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.rows) + "])"


def _pdot(r, c, arity) -> Poly:
    acc = Poly.zero(arity)
    for a, b in zip(r, c):
        if a and b:
            acc = acc + a * b
    return acc


def det_bareiss(m: PolyMatrix) -> Poly:
    n = m.nrows
    a = [list(r) for r in m.rows]
    sign = 1
    prev: Optional[Poly] = None
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if piv is None:
                return Poly.zero(m.arity)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = v if prev is None else v.exact_div(prev)
        prev = a[k][k]
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def det_laplace(m: PolyMatrix) -> Poly:
    """Cofactor expansion along rows, memoized on the remaining column set."""
    n = m.nrows
    memo: Dict[Tuple[int, ...], Poly] = {}

    def minor(cols: Tuple[int, ...]) -> Poly:
        row = n - len(cols)
        if not cols:
            return Poly.constant(m.arity, ONE)
        if cols in memo:
            return memo[cols]
        total = Poly.zero(m.arity)
        for pos, c in enumerate(cols):
            entry = m.rows[row][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(rest)
            total = total - term if pos % 2 else total + term
        memo[cols] = total
        return total

    return minor(tuple(range(n)))


def rank_fraction_free(m: PolyMatrix) -> int:
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    r = 0
    prev: Optional[Poly] = None
    for col in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            for j in range(col + 1, nc):
                v = a[r][col] * a[i][j] - a[i][col] * a[r][j]
                a[i][j] = v if prev is None else v.exact_div(prev)
            a[i][col] = Poly.zero(m.arity)
        prev = a[r][col]
        r += 1
    return r
