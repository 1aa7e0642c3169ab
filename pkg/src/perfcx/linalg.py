"""Dense exact matrices and the elimination kernels everything else reduces to.

Over QQ rows are cleared to integers and reduced with fraction-free
Gauss-Jordan (Bareiss); over QQ(u...) rows are cleared to polynomials and
reduced the same way with exact polynomial division.  GF(p) uses plain
elimination.  The reduced row echelon form is canonical, so kernel bases and
solutions read off from it are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import MissingVariable, NonFieldRing, RingMismatch, ShapeMismatch
from .rings import (
    PolynomialRing,
    PrimeField,
    RationalFunctionField,
    Rationals,
    Ring,
    Scalar,
)

Vector = tuple


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    rows: int
    cols: int
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch(f"entries do not form a {self.rows}x{self.cols} grid")

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(ring.coerce(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(ring, len(data), cols, data)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(ring, rows, 0)
        return cls(ring, rows, len(columns), tuple(zip(*columns)))

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def block(cls, ring: Ring, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble from a grid of blocks with compatible shapes."""
        rows: list[tuple] = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ShapeMismatch("block row heights differ")
            for i in range(h):
                rows.append(tuple(x for b in brow for x in b.entries[i]))
        cols = sum(b.cols for b in blocks[0]) if blocks else 0
        return cls(ring, len(rows), cols, tuple(rows))

    # -- access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.ring, r1 - r0, c1 - c0, tuple(r[c0:c1] for r in self.entries[r0:r1]))

    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(x) for r in self.entries for x in r)

    @property
    def T(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.ring, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.ring, self.cols, self.rows, tuple(zip(*self.entries)))

    def map(self, fn: Callable, ring: Ring) -> "Matrix":
        return Matrix(ring, self.rows, self.cols, tuple(tuple(fn(x) for x in r) for r in self.entries))

    # -- arithmetic -------------------------------------------------------------
    def _check_same(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        add = self.ring.add
        return Matrix(self.ring, self.rows, self.cols, tuple(
            tuple(map(add, a, b)) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        sub = self.ring.sub
        return Matrix(self.ring, self.rows, self.cols, tuple(
            tuple(map(sub, a, b)) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.map(self.ring.neg, self.ring)

    def scale(self, s) -> "Matrix":
        R = self.ring
        s = R.coerce(s)
        return self.map(lambda x: R.mul(s, x), R)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        dot = self.ring.dot
        if self.cols == 0:
            return Matrix.zeros(self.ring, self.rows, other.cols)
        cols = list(zip(*other.entries))
        return Matrix(self.ring, self.rows, other.cols, tuple(
            tuple(dot(r, c) for c in cols) for r in self.entries))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ShapeMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        dot = self.ring.dot
        return tuple(dot(r, v) for r in self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(self.ring.render(x) for x in r) for r in self.entries)
        return f"Matrix<{self.ring} {self.rows}x{self.cols}>[{body}]"


# ---------------------------------------------------------------------------
# elimination


def _require_field(ring: Ring) -> None:
    if not isinstance(ring, (Rationals, PrimeField, RationalFunctionField)):
        raise NonFieldRing(f"{ring} is not a field; rank/kernel/solve need a field")


def _ff_rref(rows: list[list], exquo: Callable, is_zero: Callable, reduced: bool = True):
    """Fraction-free Gauss-Jordan in place.

    Returns ``(pivot_columns, den)``.  With ``reduced`` the final matrix equals
    ``den`` times the reduced row echelon form (every pivot entry equals
    ``den``); otherwise only the rows below each pivot are cleared.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    den = 1
    i = 0
    for j in range(ncols):
        if i == nrows:
            break
        k = next((k for k in range(i, nrows) if not is_zero(rows[k][j])), None)
        if k is None:
            continue
        rows[i], rows[k] = rows[k], rows[i]
        piv_row = rows[i]
        p = piv_row[j]
        targets = range(nrows) if reduced else range(i + 1, nrows)
        for r in targets:
            if r == i:
                continue
            row = rows[r]
            a = row[j]
            if is_zero(a):
                if den != 1:
                    rows[r] = [exquo(p * x, den) for x in row]
                elif p != 1:
                    rows[r] = [p * x for x in row]
            else:
                rows[r] = [exquo(p * x - a * y, den) for x, y in zip(row, piv_row)]
        den = p
        pivots.append(j)
        i += 1
    return pivots, den


def _gf_rref(rows: list[list], p: int):
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    i = 0
    for j in range(ncols):
        if i == nrows:
            break
        k = next((k for k in range(i, nrows) if rows[k][j]), None)
        if k is None:
            continue
        rows[i], rows[k] = rows[k], rows[i]
        inv = pow(rows[i][j], -1, p)
        piv = [x * inv % p for x in rows[i]]
        rows[i] = piv
        for r in range(nrows):
            if r != i and rows[r][j]:
                a = rows[r][j]
                rows[r] = [(x - a * y) % p for x, y in zip(rows[r], piv)]
        pivots.append(j)
        i += 1
    return pivots


def _int_exquo(a: int, b: int) -> int:
    q, r = divmod(a, b)
    assert r == 0, "inexact Bareiss division"
    return q


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (canonical)."""
    R = m.ring
    _require_field(R)
    if isinstance(R, PrimeField):
        rows = [list(r) for r in m.entries]
        pivots = _gf_rref(rows, R.p)
        return Matrix(R, m.rows, m.cols, tuple(tuple(r) for r in rows)), pivots
    if isinstance(R, Rationals):
        rows = []
        for r in m.entries:
            scale = math.lcm(*(x.denominator for x in r)) if r else 1
            rows.append([int(x * scale) for x in r])
        pivots, den = _ff_rref(rows, _int_exquo, lambda x: x == 0)
        out = tuple(tuple(R.div(R.from_int(x), R.from_int(den)) for x in r) for r in rows)
        return _zero_below(Matrix(R, m.rows, m.cols, out), len(pivots)), pivots
    # rational functions: clear denominators to polynomials
    P = R.polynomials.sym
    rows = []
    for r in m.entries:
        dens = [x.denom.set_ring(P) for x in r]
        scale = P.one
        for d in dens:
            scale = scale.lcm(d)
        rows.append([x.numer.set_ring(P) * scale.exquo(d) for x, d in zip(r, dens)])
    pivots, den = _ff_rref(rows, lambda a, b: a if b == 1 else a.exquo(b), lambda x: not x)
    den_f = R.from_polynomial(den if not isinstance(den, int) else P(den))
    out = tuple(tuple(R.from_polynomial(x) / den_f for x in r) for r in rows)
    return _zero_below(Matrix(R, m.rows, m.cols, out), len(pivots)), pivots


def _zero_below(m: Matrix, rank: int) -> Matrix:
    # rows past the rank are zero in exact arithmetic; normalize their values
    z = m.ring.zero
    rows = m.entries[:rank] + tuple((z,) * m.cols for _ in range(m.rows - rank))
    return Matrix(m.ring, m.rows, m.cols, rows)


def rank(m: Matrix) -> int:
    """Exact rank over a field kind."""
    R = m.ring
    _require_field(R)
    if m.rows == 0 or m.cols == 0:
        return 0
    if isinstance(R, PrimeField):
        return len(_gf_rref([list(r) for r in m.entries], R.p))
    if isinstance(R, Rationals):
        rows = []
        for r in m.entries:
            scale = math.lcm(*(x.denominator for x in r))
            rows.append([int(x * scale) for x in r])
        return len(_ff_rref(rows, _int_exquo, lambda x: x == 0, reduced=False)[0])
    P = R.polynomials.sym
    rows = []
    for r in m.entries:
        dens = [x.denom.set_ring(P) for x in r]
        scale = P.one
        for d in dens:
            scale = scale.lcm(d)
        rows.append([x.numer.set_ring(P) * scale.exquo(d) for x, d in zip(r, dens)])
    return len(_ff_rref(rows, lambda a, b: a if b == 1 else a.exquo(b), lambda x: not x,
                        reduced=False)[0])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of the right kernel: one vector per non-pivot column."""
    R = m.ring
    _require_field(R)
    red, pivots = rref(m)
    pset = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pset:
            continue
        v = [R.zero] * m.cols
        v[f] = R.one
        for i, pc in enumerate(pivots):
            v[pc] = R.neg(red.entries[i][f])
        out.append(tuple(v))
    return out


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """Some ``x`` with ``a x = b`` (free variables zero), or ``None``."""
    R = a.ring
    _require_field(R)
    if len(b) != a.rows:
        raise ShapeMismatch(f"right-hand side of length {len(b)} for {a.shape} matrix")
    b = [R.coerce(x) for x in b]
    aug = Matrix(R, a.rows, a.cols + 1, tuple(r + (x,) for r, x in zip(a.entries, b)))
    red, pivots = rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [R.zero] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.entries[i][a.cols]
    return tuple(x)


def solve_matrix(a: Matrix, b: Matrix) -> Matrix | None:
    """Column-by-column :func:`solve`; ``None`` if any column is inconsistent."""
    cols = []
    for j in range(b.cols):
        x = solve(a, b.column(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(a.ring, cols, a.cols)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    inv = solve_matrix(m, Matrix.identity(m.ring, m.rows))
    if inv is None:
        raise ZeroDivisionError("matrix is singular")
    return inv


def image_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of the column space (rows of the RREF of the transpose)."""
    red, pivots = rref(m.T)
    return [red.entries[i] for i in range(len(pivots))]


def evaluate(m: Matrix, point: Mapping[str, Any]) -> Matrix:
    """Substitute base-field values for every variable of a polynomial matrix."""
    R = m.ring
    if not isinstance(R, PolynomialRing):
        raise RingMismatch(f"evaluate needs a polynomial ring, got {R}")
    missing = [v for v in R.vars if v not in point]
    if missing:
        raise MissingVariable(f"no value for {', '.join(missing)}")
    B = R.base
    values = [B.coerce(point[v]) for v in R.vars]
    return m.map(lambda x: R.evaluate(x, values), B)


def vector_is_zero(ring: Ring, v: Iterable) -> bool:
    return all(ring.is_zero(x) for x in v)


__all__ = [
    "Matrix",
    "Scalar",
    "evaluate",
    "image_basis",
    "inverse",
    "kernel_basis",
    "rank",
    "rref",
    "solve",
    "solve_matrix",
]
