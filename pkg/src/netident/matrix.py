"""Dense matrices over the rational-function field.

Determinants, inverses and ranks go through fraction-free (Bareiss)
elimination on a polynomial matrix obtained by clearing row denominators, so
the only gcd computations happen when results are turned back into
:class:`RatFunc` values.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ArithmeticDomainError, InputError, SingularMatrixError
from .ratfunc import ONE_POLY, ZERO_POLY, Poly, RatFunc, Scalar, poly_gcd

RANK_PROBES = 3
PROBE_RANGE = 10**6
COFACTOR_LIMIT = 6


class RatMatrix:
    """Immutable ``rows x cols`` grid of :class:`RatFunc` entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[RatFunc | Scalar]]):
        grid = tuple(tuple(_to_rf(x) for x in row) for row in data)
        widths = {len(r) for r in grid}
        if len(widths) > 1:
            raise InputError("ragged matrix")
        self._data = grid
        self.rows = len(grid)
        self.cols = widths.pop() if widths else 0

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        m = cls([[0] * cols for _ in range(rows)])
        m.cols = cols
        return m

    def __getitem__(self, idx: tuple[int, int]) -> RatFunc:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[RatFunc, ...]:
        return self._data[i]

    def tolist(self) -> list[list[RatFunc]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"RatMatrix([{body}])"

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        m = RatMatrix([[self._data[i][j] for j in cols] for i in rows])
        m.cols = len(cols)
        return m

    def transpose(self) -> RatMatrix:
        m = RatMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])
        m.cols = self.rows
        return m

    def __add__(self, other: RatMatrix) -> RatMatrix:
        _check_same_shape(self, other)
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        _check_same_shape(self, other)
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> RatMatrix:
        return RatMatrix([[-a for a in r] for r in self._data])

    def scale(self, f: RatFunc | Scalar) -> RatMatrix:
        f = _to_rf(f)
        return RatMatrix([[a * f for a in r] for r in self._data])

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self._data:
            row = []
            for j in range(other.cols):
                acc = RatFunc()
                for k, a in enumerate(r):
                    if a:
                        b = other._data[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        m = RatMatrix(out)
        m.cols = other.cols
        return m

    def evaluate(self, point: Scalar) -> list[list[Fraction]]:
        """Numeric matrix at ``z = point``; raises if any entry has a pole there."""
        return [[f(point) for f in r] for r in self._data]

    def determinant(self) -> RatFunc:
        return determinant(self)

    def inverse(self) -> RatMatrix:
        return inverse(self)

    def adjugate(self) -> RatMatrix:
        return adjugate(self)

    def normal_rank(self, rng: random.Random | None = None) -> int:
        return normal_rank(self, rng)


def _to_rf(x: RatFunc | Scalar) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc.const(x)


def _check_same_shape(a: RatMatrix, b: RatMatrix) -> None:
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")


def _poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_one():
        return b
    if b.is_one() or a == b:
        return a
    return (a * b) // poly_gcd(a, b)


def _clear_denominators(m: RatMatrix) -> tuple[list[list[Poly]], list[Poly]]:
    """Rows of polynomials ``P`` and row multipliers ``d`` with ``M = diag(d)^-1 P``."""
    polys, scales = [], []
    for r in m._data:
        d = ONE_POLY
        for f in r:
            d = _poly_lcm(d, f.den)
        polys.append([f.num if f.den == d else f.num * (d // f.den) for f in r])
        scales.append(d)
    return polys, scales


def _bareiss(a: list[list[Poly]]) -> tuple[list[tuple[int, int]], int]:
    """In-place fraction-free row echelon form.

    Returns the pivot positions and the parity of row swaps.  Entries below
    and right of each pivot are exact minors of the input, so every division
    is exact.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev = ONE_POLY
    r = 0
    swaps = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
            swaps += 1
        piv = a[r][c]
        for i in range(r + 1, rows):
            lead = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, cols):
                v = piv * row_i[j]
                if lead:
                    v = v - lead * row_r[j]
                row_i[j] = v if prev.is_one() else v.exact_div(prev)
            row_i[c] = ZERO_POLY
        prev = piv
        pivots.append((r, c))
        r += 1
    return pivots, swaps % 2


def determinant(m: RatMatrix) -> RatFunc:
    if not m.is_square():
        raise InputError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return RatFunc.const(1)
    polys, scales = _clear_denominators(m)
    pivots, parity = _bareiss(polys)
    if len(pivots) < n:
        return RatFunc()
    det = polys[n - 1][n - 1]
    if parity:
        det = -det
    den = ONE_POLY
    for s in scales:
        den = den * s
    return RatFunc(det, den)


def inverse(m: RatMatrix) -> RatMatrix:
    """Exact inverse; raises :class:`SingularMatrixError` when ``det M == 0``."""
    if not m.is_square():
        raise InputError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return m
    polys, scales = _clear_denominators(m)
    aug = [row + [ONE_POLY if i == j else ZERO_POLY for j in range(n)] for i, row in enumerate(polys)]
    pivots, _ = _bareiss(aug)
    if len(pivots) < n or pivots[n - 1] != (n - 1, n - 1):
        raise SingularMatrixError("matrix is singular over the rational functions")
    det = aug[n - 1][n - 1]
    # back substitution for Y = det * P^-1; each division is exact because Y is the adjugate up to sign
    y = [[ZERO_POLY] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            acc = det * aug[i][n + col]
            for k in range(i + 1, n):
                if aug[i][k] and y[k][col]:
                    acc = acc - aug[i][k] * y[k][col]
            y[i][col] = acc.exact_div(aug[i][i])
    # M^-1 = P^-1 diag(d)
    out = [[RatFunc(y[i][j] * scales[j], det) if y[i][j] else RatFunc() for j in range(n)] for i in range(n)]
    return RatMatrix(out)


def _minor(m: RatMatrix, drop_row: int, drop_col: int) -> RatMatrix:
    rows = [i for i in range(m.rows) if i != drop_row]
    cols = [j for j in range(m.cols) if j != drop_col]
    return m.submatrix(rows, cols)


def adjugate(m: RatMatrix) -> RatMatrix:
    """Classical adjoint: ``adj(M) @ M == det(M) * I`` for every square ``M``."""
    if not m.is_square():
        raise InputError("adjugate of a non-square matrix")
    n = m.rows
    if n == 0:
        return m
    if n == 1:
        return RatMatrix([[1]])
    if n > COFACTOR_LIMIT:
        det = determinant(m)
        if det:
            return inverse(m).scale(det)
    out = [[RatFunc()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = determinant(_minor(m, i, j))
            out[j][i] = -c if (i + j) % 2 else c
    return RatMatrix(out)


def rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a numeric matrix over Q by plain Gaussian elimination."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[p], a[r] = a[r], a[p]
        inv = 1 / a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            if f:
                f *= inv
                ri, rr = a[i], a[r]
                for j in range(c, ncols):
                    ri[j] -= f * rr[j]
        r += 1
        if r == nrows:
            break
    return r


def random_probe(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, PROBE_RANGE), rng.randint(1, PROBE_RANGE))


def probe_ranks(m: RatMatrix, rng: random.Random, probes: int = RANK_PROBES) -> list[int]:
    """Numeric ranks at random rational points, skipping points that hit a pole."""
    out = []
    attempts = 0
    while len(out) < probes and attempts < 10 * probes:
        attempts += 1
        try:
            out.append(rational_rank(m.evaluate(random_probe(rng))))
        except ArithmeticDomainError:
            continue
    return out


def exact_rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    polys, _ = _clear_denominators(m)
    pivots, _ = _bareiss(polys)
    return len(pivots)


def normal_rank(m: RatMatrix, rng: random.Random | None = None) -> int:
    """Rank over the rational-function field.

    Random evaluations give a lower bound; when that bound already equals
    ``min(rows, cols)`` it is the answer, otherwise exact fraction-free
    elimination decides.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    full = min(m.rows, m.cols)
    rng = rng or random.Random(0)
    probed = probe_ranks(m, rng)
    if probed and max(probed) == full:
        return full
    exact = exact_rank(m)
    if probed and max(probed) > exact:
        raise ArithmeticDomainError("evaluation rank exceeded exact rank")
    return exact


def principal_minors_nonzero(a: list[list[Fraction]]) -> bool:
    """True iff every principal minor of the numeric square matrix is nonzero."""
    n = len(a)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = [[a[i][j] for j in idx] for i in idx]
            if rational_rank(sub) < size:
                return False
    return True
