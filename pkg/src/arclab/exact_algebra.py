"""Exact integer linear algebra, Laurent polynomials and truncated series.

Everything here runs over arbitrary-precision Python ints: Smith normal form
intermediates can swell far beyond 64 bits even for small inputs, so
fixed-width arithmetic is never used.  The SNF uses smallest-nonzero-pivot
selection, which keeps entry growth moderate and makes the output
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class InconsistencyError(ValueError):
    """Raised when a subquotient's boundaries are not contained in its cycles."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix shape mismatch")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        if not cols:
            return cls(rows or 0, 0, tuple(() for _ in range(rows or 0)))
        n = len(cols[0])
        return cls(n, len(cols), tuple(tuple(int(c[i]) for c in cols) for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = list(zip(*other.data)) if other.data and other.cols else [()] * other.cols
        out = []
        for r in self.data:
            out.append(tuple(sum(a * b for a, b in zip(r, c)) for c in ot))
        if not out:
            out = []
        return IntMatrix(self.rows, other.cols, tuple(out))

    def mul_vec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.data else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in r) for r in self.data)


@dataclass(frozen=True)
class SmithForm:
    """m = left * diag * right with unimodular outer factors.

    row_transform / col_transform are the inverse factors:
    diag = row_transform * m * col_transform.
    """

    left: IntMatrix
    diag: IntMatrix
    right: IntMatrix
    row_transform: IntMatrix
    col_transform: IntMatrix
    rank: int

    def diagonal(self) -> list[int]:
        return [self.diag.data[i][i] for i in range(min(self.diag.rows, self.diag.cols))]


def _swap_rows(m: list[list[int]], i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: list[list[int]], i: int, j: int) -> None:
    for r in m:
        r[i], r[j] = r[j], r[i]


def _add_row(m: list[list[int]], src: int, dst: int, c: int) -> None:
    row_s, row_d = m[src], m[dst]
    for k in range(len(row_d)):
        row_d[k] += c * row_s[k]


def _add_col(m: list[list[int]], src: int, dst: int, c: int) -> None:
    for r in m:
        r[dst] += c * r[src]


def _negate_row(m: list[list[int]], i: int) -> None:
    m[i] = [-x for x in m[i]]


def _negate_col(m: list[list[int]], j: int) -> None:
    for r in m:
        r[j] = -r[j]


def smith_normal_form(mat: IntMatrix) -> SmithForm:
    """Smith normal form with all four transformation matrices.

    Pivots are chosen as a smallest-nonzero-absolute-value entry of the
    remaining block (ties broken by position), so the reduction is fully
    deterministic.
    """
    nr, nc = mat.rows, mat.cols
    d = [list(r) for r in mat.data]
    u = [list(r) for r in IntMatrix.identity(nr).data]        # d = u * mat * v
    uinv = [list(r) for r in IntMatrix.identity(nr).data]
    v = [list(r) for r in IntMatrix.identity(nc).data]
    vinv = [list(r) for r in IntMatrix.identity(nc).data]

    def row_op(src, dst, c):
        _add_row(d, src, dst, c)
        _add_row(u, src, dst, c)
        _add_col(uinv, dst, src, -c)

    def col_op(src, dst, c):
        _add_col(d, src, dst, c)
        _add_col(v, src, dst, c)
        _add_row(vinv, dst, src, -c)

    def row_swap(i, j):
        _swap_rows(d, i, j)
        _swap_rows(u, i, j)
        _swap_cols(uinv, i, j)

    def col_swap(i, j):
        _swap_cols(d, i, j)
        _swap_cols(v, i, j)
        _swap_rows(vinv, i, j)

    def row_neg(i):
        _negate_row(d, i)
        _negate_row(u, i)
        _negate_col(uinv, i)

    t = 0
    while t < nr and t < nc:
        # locate smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            row = d[i]
            for j in range(t, nc):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        if d[t][t] < 0:
            row_neg(t)

        p = d[t][t]
        dirty = False
        for i in range(t + 1, nr):
            if d[i][t] != 0:
                q = d[i][t] // p
                if q:
                    row_op(t, i, -q)
                if d[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if d[t][j] != 0:
                q = d[t][j] // p
                if q:
                    col_op(t, j, -q)
                if d[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # cross is clear; enforce divisibility of the remaining block
        culprit = None
        for i in range(t + 1, nr):
            row = d[i]
            for j in range(t + 1, nc):
                if row[j] % p != 0:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            row_op(culprit, t, 1)
            continue
        t += 1

    rank = sum(1 for i in range(min(nr, nc)) if d[i][i] != 0)
    diag = IntMatrix.from_rows(d, nc)
    return SmithForm(
        left=IntMatrix.from_rows(uinv, nr),
        diag=diag,
        right=IntMatrix.from_rows(vinv, nc),
        row_transform=IntMatrix.from_rows(u, nr),
        col_transform=IntMatrix.from_rows(v, nc),
        rank=rank,
    )


def kernel_basis(mat: IntMatrix) -> IntMatrix:
    """Columns form a saturated basis of the integer null space of mat."""
    snf = smith_normal_form(mat)
    cols = [snf.col_transform.column(j) for j in range(snf.rank, mat.cols)]
    return IntMatrix.from_cols(cols, rows=mat.cols)


def rank(mat: IntMatrix) -> int:
    return smith_normal_form(mat).rank


def is_unimodular(mat: IntMatrix) -> bool:
    if mat.rows != mat.cols:
        return False
    snf = smith_normal_form(mat)
    return snf.rank == mat.rows and all(x == 1 for x in snf.diagonal())


def solve(mat: IntMatrix, rhs: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of mat * x = rhs, or None."""
    if len(rhs) != mat.rows:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(mat)
    c = snf.row_transform.mul_vec(rhs)
    y = [0] * mat.cols
    diag = snf.diagonal()
    for i in range(mat.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return snf.col_transform.mul_vec(y)


@dataclass(frozen=True)
class AbelianGroupSummary:
    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        if self.free_rank < 0 or any(t < 2 for t in self.torsion):
            raise ValueError("bad summary")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion is not a divisibility chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def subquotient_summary(cycles: IntMatrix, boundaries: IntMatrix) -> AbelianGroupSummary:
    """Canonical summary of (saturation of col-span of cycles) / col-span of boundaries.

    Callers computing homology pass a saturated kernel basis for `cycles`, in
    which case this is literally cycles/boundaries.
    """
    if boundaries.rows != cycles.rows:
        raise ValueError("ambient rank mismatch")
    snf = smith_normal_form(cycles)
    r = snf.rank
    # coords of each boundary column in the saturated basis (first r cols of snf.left)
    coords = []
    ub = snf.row_transform * boundaries
    for j in range(boundaries.cols):
        col = ub.column(j)
        if any(col[i] != 0 for i in range(r, cycles.rows)):
            raise InconsistencyError("boundaries are not contained in the span of cycles")
        coords.append(col[:r])
    rel = IntMatrix.from_cols(coords, rows=r)
    rel_snf = smith_normal_form(rel)
    diag = [x for x in rel_snf.diagonal() if x != 0]
    torsion = tuple(x for x in diag if x >= 2)
    return AbelianGroupSummary(free_rank=r - len(diag), torsion=torsion)


def lattice_contains(gens: IntMatrix, vec: Sequence[int]) -> bool:
    """Is vec an integer combination of the columns of gens?"""
    return solve(gens, vec) is not None


# ---------------------------------------------------------------------------
# Laurent polynomials in q
# ---------------------------------------------------------------------------

class Laurent:
    """Integer Laurent polynomial in q, stored sparsely without zero terms."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        c = {}
        if coeffs:
            for d, x in coeffs.items():
                if x:
                    c[int(d)] = int(x)
        self._c = c

    @classmethod
    def zero(cls) -> "Laurent":
        return cls()

    @classmethod
    def one(cls) -> "Laurent":
        return cls({0: 1})

    @classmethod
    def q(cls, power: int = 1, coeff: int = 1) -> "Laurent":
        return cls({power: coeff})

    @classmethod
    def from_int(cls, n: int) -> "Laurent":
        return cls({0: n})

    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def coeff(self, d: int) -> int:
        return self._c.get(d, 0)

    def is_zero(self) -> bool:
        return not self._c

    def support(self) -> list[int]:
        return sorted(self._c)

    def min_degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial")
        return min(self._c)

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent.from_int(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        c = dict(self._c)
        for d, x in other._c.items():
            c[d] = c.get(d, 0) + x
        return Laurent(c)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({d: -x for d, x in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent.from_int(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({d: x * other for d, x in self._c.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        c: dict[int, int] = {}
        for d1, x1 in self._c.items():
            for d2, x2 in other._c.items():
                d = d1 + d2
                c[d] = c.get(d, 0) + x1 * x2
        return Laurent(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Laurent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, s: int) -> "Laurent":
        """Multiply by q^s (grading shift {s})."""
        return Laurent({d + s: x for d, x in self._c.items()})

    def bar(self) -> "Laurent":
        """The involution q -> q^{-1}."""
        return Laurent({-d: x for d, x in self._c.items()})

    def evaluate_at_one(self) -> int:
        return sum(self._c.values())

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.from_int(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for d in sorted(self._c):
            x = self._c[d]
            if d == 0:
                parts.append(f"{x}")
            else:
                mono = "q" if d == 1 else f"q^{d}"
                if x == 1:
                    parts.append(mono)
                elif x == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{x}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return out

    def to_json(self) -> dict[str, int]:
        return {str(d): x for d, x in sorted(self._c.items())}

    @classmethod
    def from_json(cls, obj: dict) -> "Laurent":
        return cls({int(d): int(x) for d, x in obj.items()})


def quantum_integer(n: int) -> Laurent:
    """[n] = (q^n - q^-n)/(q - q^-1); odd in n."""
    if n == 0:
        return Laurent.zero()
    sign = 1 if n > 0 else -1
    n = abs(n)
    return Laurent({n - 1 - 2 * j: sign for j in range(n)})


# ---------------------------------------------------------------------------
# Truncated integer power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntSeries:
    """Integer power series truncated to degrees < order."""

    coeffs: tuple[int, ...]
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order:
            raise ValueError("coefficient list must match the truncation order")

    @classmethod
    def from_list(cls, coeffs: Iterable[int], order: int) -> "IntSeries":
        c = list(coeffs)[:order]
        c += [0] * (order - len(c))
        return cls(tuple(c), order)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __add__(self, other: "IntSeries") -> "IntSeries":
        n = min(self.order, other.order)
        return IntSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(n)), n)

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        n = min(self.order, other.order)
        out = [0] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                out[i + j] += a * b
        return IntSeries(tuple(out), n)

    def __pow__(self, k: int) -> "IntSeries":
        out = IntSeries.from_list([1], self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out


def catalan_numbers(order: int) -> list[int]:
    """C_0 .. C_{order-1} by the Segner convolution recurrence."""
    c = [1]
    for n in range(1, order):
        c.append(sum(c[i] * c[n - 1 - i] for i in range(n)))
    return c


def catalan_series(order: int) -> IntSeries:
    """(1 - sqrt(1-4x)) / 2x, the Catalan generating function, truncated."""
    return IntSeries.from_list(catalan_numbers(order), order)


def inv_sqrt_1m4x(order: int) -> IntSeries:
    """1/sqrt(1-4x) = sum of central binomial coefficients C(2i, i) x^i."""
    c = [1]
    for i in range(order - 1):
        c.append(c[-1] * (4 * i + 2) // (i + 1))
    return IntSeries.from_list(c, order)


def catalan_series_coefficient(j: int, i: int) -> int:
    """Coefficient of x^i in the j-th power of the Catalan generating function."""
    if j < 0 or i < 0:
        raise ValueError("indices must be non-negative")
    return (catalan_series(i + 1) ** j)[i]


def _comb0(n: int, r: int) -> int:
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def series_sqrt_inverse_identity(s: int, k: int) -> bool:
    """[ (1-4x)^{-1/2} * C(x)^{k-1} ]_{s-k} == C(2s-k, s-k) - C(2s-k-1, s-k-1).

    Both sides computed exactly: left by series arithmetic, right by binomial
    coefficients (vanishing outside their range).
    """
    if not 0 <= k <= s:
        raise ValueError("need 0 <= k <= s")
    order = s - k + 1
    if k == 0:
        # C(x)^{-1} = (1 - x C(x)): the k-1 = -1 power is still a power series
        cs = catalan_series(order)
        xc = IntSeries.from_list([0] + list(cs.coeffs[:-1]), order)
        power = IntSeries.from_list([1], order) + IntSeries.from_list(
            [-c for c in xc.coeffs], order
        )
    else:
        power = catalan_series(order) ** (k - 1)
    lhs = (inv_sqrt_1m4x(order) * power)[s - k]
    rhs = _comb0(2 * s - k, s - k) - _comb0(2 * s - k - 1, s - k - 1)
    return lhs == rhs
