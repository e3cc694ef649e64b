"""Dense linear algebra over Q with exact ``Fraction`` entries.

Every cohomological and K-theoretic matrix in the package is a
:class:`RatMat`.  Matrices are immutable; all operations return new objects.
Vectors are plain tuples of ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction
Vector = tuple  # tuple[Fraction, ...]


class LinAlgError(ArithmeticError):
    pass


class ShapeMismatch(LinAlgError, ValueError):
    pass


class NonInvertible(LinAlgError):
    pass


class NoSolution(LinAlgError):
    pass


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatMat:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")
        if not all(type(x) is Fraction for x in self.entries):
            object.__setattr__(self, "entries", tuple(as_rat(x) for x in self.entries))

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMat":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeMismatch("ragged rows")
        return cls(len(rows), cols, tuple(as_rat(x) for r in rows for x in r))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence], rows: int | None = None) -> "RatMat":
        cols = [list(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMat":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMat":
        n = len(values)
        return cls(n, n, tuple(as_rat(values[i]) if i == j else Fraction(0)
                               for i in range(n) for j in range(n)))

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[rat_str(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_strings(cls, data, rows: int, cols: int) -> "RatMat":
        if rows == 0 or cols == 0:
            return cls.zeros(rows, cols)
        return cls.from_rows(data, cols)

    def __repr__(self):
        return f"RatMat({self.to_strings()})" if self.rows else f"RatMat(0x{self.cols})"

    # -- arithmetic -------------------------------------------------------
    def _same_shape(self, other: "RatMat"):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other)
        return RatMat(self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other)
        return RatMat(self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMat":
        return RatMat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "RatMat":
        c = as_rat(c)
        return RatMat(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        zero = Fraction(0)
        for i in range(n):
            acc = [zero] * p
            for k in range(m):
                x = a[i * m + k]
                if x:
                    for j, y in enumerate(b[k * p:(k + 1) * p]):
                        if y:
                            acc[j] += x * y
            out.extend(acc)
        return RatMat(n, p, tuple(out))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ShapeMismatch("vector length")
        v = [as_rat(x) for x in v]
        return tuple(sum((x * y for x, y in zip(self.row(i), v)), Fraction(0))
                     for i in range(self.rows))

    @property
    def T(self) -> "RatMat":
        return RatMat(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == RatMat.identity(self.rows)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ShapeMismatch("trace of non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of non-square matrix")
        n = self.rows
        a = self.tolist()
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def rank(self) -> int:
        return sparse_rank(self)

    def __pow__(self, k: int) -> "RatMat":
        if self.rows != self.cols:
            raise ShapeMismatch("power of non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        out = RatMat.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


# -- block helpers --------------------------------------------------------

def hstack(*ms: RatMat) -> RatMat:
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise ShapeMismatch("hstack row counts differ")
    return RatMat.from_rows([sum((list(m.row(i)) for m in ms), []) for i in range(rows)],
                            sum(m.cols for m in ms))


def vstack(*ms: RatMat) -> RatMat:
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise ShapeMismatch("vstack column counts differ")
    return RatMat(sum(m.rows for m in ms), cols, sum((m.entries for m in ms), ()))


def block_diag(*ms: RatMat) -> RatMat:
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return RatMat.from_rows(out, cols)


def kron(a: RatMat, b: RatMat) -> RatMat:
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [[a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols] for j in range(cols)]
           for i in range(rows)]
    return RatMat.from_rows(out, cols)


# -- elimination ----------------------------------------------------------

def rref(m: RatMat) -> tuple[RatMat, list[int]]:
    """Reduced row echelon form, pivoting on the first nonzero entry."""
    a = m.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMat.from_rows(a, m.cols) if m.rows else m, pivots


def sparse_rank(m: RatMat) -> int:
    """Rank by forward elimination on dict-of-nonzeros rows."""
    pivot_rows: dict[int, dict] = {}
    for i in range(m.rows):
        row = {j: x for j, x in enumerate(m.row(i)) if x}
        while row:
            c = min(row)
            prow = pivot_rows.get(c)
            if prow is None:
                pivot_rows[c] = row
                break
            f = row[c] / prow[c]
            for j, y in prow.items():
                v = row.get(j, 0) - f * y
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
    return len(pivot_rows)


def kernel_basis(m: RatMat) -> list[Vector]:
    """Basis of {x : m x = 0}, one vector per free column of the rref."""
    r, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, free]
        basis.append(tuple(v))
    return basis


def inverse(m: RatMat) -> RatMat:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of non-square matrix")
    n = m.rows
    if n == 0:
        return m
    r, pivots = rref(hstack(m, RatMat.identity(n)))
    if pivots[:n] != list(range(n)):
        raise NonInvertible("singular matrix")
    return RatMat.from_rows([r.row(i)[n:] for i in range(n)], n)


def solve(a: RatMat, b: Sequence) -> tuple[Vector, list[Vector]]:
    """Return (particular solution, kernel basis) of ``a x = b``."""
    if len(b) != a.rows:
        raise ShapeMismatch("right-hand side length")
    aug = hstack(a, RatMat.from_cols([b], a.rows)) if a.rows else RatMat.zeros(0, a.cols + 1)
    r, pivots = rref(aug)
    if a.cols in pivots:
        raise NoSolution("right-hand side not in the image")
    x = [Fraction(0)] * a.cols
    for i, p in enumerate(pivots):
        x[p] = r[i, a.cols]
    return tuple(x), kernel_basis(a)


def solve_matrix(a: RatMat, b: RatMat) -> RatMat:
    """Some X with a X = b, column by column."""
    cols = [solve(a, b.col(j))[0] for j in range(b.cols)]
    return RatMat.from_cols(cols, a.cols) if cols else RatMat.zeros(a.cols, 0)


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    vs = [list(v) for v in vectors]
    return RatMat.from_rows(vs, dim).rank() if vs else 0


def quotient_projection(ambient_dim: int, subspace: Sequence[Sequence]) -> RatMat:
    """Surjection Q : Q^ambient_dim -> Q^(ambient_dim - rank) with ker Q = span(subspace).

    The rows of Q are a kernel basis of the matrix whose rows are the subspace
    vectors, i.e. coordinates on the annihilator.
    """
    for s in subspace:
        if len(s) != ambient_dim:
            raise ShapeMismatch("subspace vector outside ambient space")
    if not subspace:
        return RatMat.identity(ambient_dim)
    rows = kernel_basis(RatMat.from_rows(subspace, ambient_dim))
    return RatMat.from_rows(rows, ambient_dim) if rows else RatMat.zeros(0, ambient_dim)


def vec(m: RatMat) -> Vector:
    """Row-major vectorization; vec(A X B) = kron(A, B.T) vec(X)."""
    return m.entries


def unvec(v: Sequence, rows: int, cols: int) -> RatMat:
    return RatMat(rows, cols, tuple(as_rat(x) for x in v))


def charpoly(m: RatMat) -> tuple:
    """Coefficients (c_0, ..., c_n) of det(x I - m) = sum c_k x^k (Faddeev-LeVerrier)."""
    if m.rows != m.cols:
        raise ShapeMismatch("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    acc = RatMat.zeros(n, n)
    for k in range(1, n + 1):
        acc = m @ acc + RatMat.identity(n).scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ acc).trace() / k
    return tuple(coeffs)
