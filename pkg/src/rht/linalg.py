"""Exact rational linear algebra: RREF, kernels, images, homology, subspaces.

Everything is over Q with fractions.Fraction; no floating point.  Subspaces
are canonical (reduced row-echelon basis), so equality of subspaces is plain
equality of the stored rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import AmbientMismatch, NotAComplex

Vector = tuple[Fraction, ...]


def _vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


class RatMatrix:
    """A rows x cols matrix of exact rationals, stored sparsely."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[dict] = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                v = Fraction(v)
                if v:
                    if not (0 <= r < rows and 0 <= c < cols):
                        raise IndexError("entry outside matrix dimensions")
                    self.entries[(r, c)] = v

    @staticmethod
    def from_rows(data: Sequence[Sequence]) -> "RatMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                v = Fraction(v)
                if v:
                    ent[(r, c)] = v
        return RatMatrix(rows, cols, ent)

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(rows, cols)

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(n, n, {(i, i): Fraction(1) for i in range(n)})

    def to_rows(self) -> list[list[Fraction]]:
        data = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            data[r][c] = v
        return data

    def get(self, r: int, c: int) -> Fraction:
        return self.entries.get((r, c), Fraction(0))

    def row(self, r: int) -> Vector:
        return tuple(self.get(r, c) for c in range(self.cols))

    def column(self, c: int) -> Vector:
        return tuple(self.get(r, c) for r in range(self.rows))

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, k), v in self.entries.items():
            by_row.setdefault(r, []).append((k, v))
        by_k: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, c), v in other.entries.items():
            by_k.setdefault(k, []).append((c, v))
        out: dict[tuple[int, int], Fraction] = {}
        for r, terms in by_row.items():
            for k, v in terms:
                for c, w in by_k.get(k, ()):
                    key = (r, c)
                    out[key] = out.get(key, Fraction(0)) + v * w
        return RatMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (r, c), a in self.entries.items():
            if v[c]:
                out[r] += a * Fraction(v[c])
        return tuple(out)

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        ent = dict(self.entries)
        for (r, c), v in other.entries.items():
            ent[(r + self.rows, c)] = v
        return RatMatrix(self.rows + other.rows, self.cols, ent)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def _rref_rows(data: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    n_rows = len(data)
    n_cols = len(data[0]) if n_rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if data[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        data[r], data[pivot_row] = data[pivot_row], data[r]
        inv = 1 / data[r][c]
        data[r] = [v * inv for v in data[r]]
        for i in range(n_rows):
            if i != r and data[i][c]:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return data, pivots


def rref(m: RatMatrix) -> tuple[RatMatrix, int, list[int]]:
    data, pivots = _rref_rows(m.to_rows())
    return RatMatrix.from_rows(data) if m.rows else m, len(pivots), pivots


class Subspace:
    """A subspace of a labeled coordinate space, stored as an RREF basis."""

    __slots__ = ("ambient", "rows")

    def __init__(self, ambient: Sequence[str], vectors: Iterable[Sequence] = ()):
        self.ambient: tuple[str, ...] = tuple(ambient)
        data = [list(_vec(v)) for v in vectors]
        for v in data:
            if len(v) != len(self.ambient):
                raise AmbientMismatch("vector length does not match ambient frame")
        if data:
            data, _ = _rref_rows(data)
        self.rows: tuple[Vector, ...] = tuple(
            tuple(row) for row in data if any(row)
        )

    @staticmethod
    def full(ambient: Sequence[str]) -> "Subspace":
        n = len(ambient)
        return Subspace(ambient, [[1 if j == i else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise AmbientMismatch(
                f"ambient frames differ: {self.ambient} vs {other.ambient}"
            )

    def reduce(self, v: Sequence) -> Vector:
        """Reduce a vector modulo this subspace (eliminate its pivots)."""
        v = list(_vec(v))
        if len(v) != len(self.ambient):
            raise AmbientMismatch("vector length does not match ambient frame")
        for row in self.rows:
            pivot = next(i for i, a in enumerate(row) if a)
            if v[pivot]:
                f = v[pivot]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def includes(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(row) for row in other.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # row space = orthogonal complement of the kernel, and the standard
        # form on Q^n is definite, so U cap V = (ker U + ker V)^perp
        ka = kernel(RatMatrix.from_rows(self.rows or [[0] * len(self.ambient)]))
        kb = kernel(RatMatrix.from_rows(other.rows or [[0] * len(self.ambient)]))
        stacked = RatMatrix.from_rows(
            list(ka.rows) + list(kb.rows) or [[0] * len(self.ambient)]
        )
        return Subspace(self.ambient, kernel(stacked).rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def basis_labels(self) -> list[str]:
        """Labels of coordinates that head the basis rows (for display)."""
        out = []
        for row in self.rows:
            pivot = next(i for i, a in enumerate(row) if a)
            out.append(self.ambient[pivot])
        return out

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {len(self.ambient)})"


def kernel(m: RatMatrix, ambient: Optional[Sequence[str]] = None) -> Subspace:
    """Null space {x : M x = 0} as a subspace of the domain coordinates."""
    if ambient is None:
        ambient = [f"x{i}" for i in range(m.cols)]
    if m.rows == 0 or m.is_zero():
        return Subspace.full(ambient)
    data, pivots = _rref_rows(m.to_rows())
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -data[r][f]
        vectors.append(v)
    return Subspace(ambient, vectors)


def image(m: RatMatrix, ambient: Optional[Sequence[str]] = None) -> Subspace:
    """Column space of M as a subspace of the codomain coordinates."""
    if ambient is None:
        ambient = [f"x{i}" for i in range(m.rows)]
    return Subspace(ambient, [m.column(c) for c in range(m.cols)])


def solve(m: RatMatrix, b: Sequence) -> Optional[Vector]:
    """One exact solution x of M x = b (free variables set to 0), or None."""
    b = _vec(b)
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    data = m.to_rows()
    for r in range(m.rows):
        data[r] = data[r] + [b[r]]
    data, pivots = _rref_rows(data) if m.rows else (data, [])
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        if p == m.cols:
            return None  # pivot in the augmented column: inconsistent
        x[p] = data[r][m.cols]
    return tuple(x)


class HomologySlice:
    """Homology at one spot of a chain complex, with quotient coordinates.

    Built from d_in: C_{n+1} -> C_n and d_out: C_n -> C_{n-1}.  Stores cycle
    representatives whose classes form a basis of ker(d_out)/im(d_in).
    """

    __slots__ = ("dim", "representatives", "_boundaries", "_rep_matrix", "_ambient")

    def __init__(self, d_in: RatMatrix, d_out: RatMatrix):
        if d_in.rows != d_out.cols:
            raise ValueError("chain degree mismatch between d_in and d_out")
        if not (d_out @ d_in).is_zero():
            raise NotAComplex("d_out . d_in != 0")
        n = d_in.rows
        self._ambient = [f"c{i}" for i in range(n)]
        cycles = kernel(d_out, self._ambient)
        self._boundaries = image(d_in, self._ambient)
        reduced = []
        for row in cycles.rows:
            r = self._boundaries.reduce(row)
            if any(r):
                reduced.append(r)
        reps = Subspace(self._ambient, reduced)
        self.representatives: tuple[Vector, ...] = reps.rows
        self.dim = len(self.representatives)
        assert self.dim == cycles.dim - self._boundaries.dim
        # columns = representatives followed by a boundary basis; any cycle is
        # a unique combination, and the leading coordinates are its class
        cols = list(self.representatives) + list(self._boundaries.rows)
        if cols:
            self._rep_matrix = RatMatrix.from_rows(cols).transpose()
        else:
            self._rep_matrix = RatMatrix.zero(n, 0)

    def coords(self, cycle: Sequence) -> Vector:
        """Class of a cycle in the chosen representative basis."""
        if self.dim == 0 and self._boundaries.dim == 0:
            return ()
        x = solve(self._rep_matrix, cycle)
        if x is None:
            raise ValueError("vector is not a cycle modulo boundaries of this slice")
        return x[: self.dim]


def homology(d_in: RatMatrix, d_out: RatMatrix) -> tuple[int, list[Vector]]:
    """Dimension and representative cycles of ker(d_out)/im(d_in)."""
    h = HomologySlice(d_in, d_out)
    return h.dim, list(h.representatives)
