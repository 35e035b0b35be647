"""Level-two weight combinatorics, the tableaux/matching bijection, the
categorified raising and lowering action, and the quantum-group relation
checks on the Grothendieck group.

Weights μ live in {0,1,2}^N with total 2s+k and dominated partial sums for
the highest weight with two columns of lengths s+k and s.  Each admissible μ
owns an arc ring over (m(μ), k, 0) where m(μ) counts the 1-entries; raising
at i moves weight mass from position i+1 to i and acts through the simplest
flat tangle between the corresponding free-point sets: an identity tangle
when one endpoint slides, a cup when two new free points appear, a cap when
two disappear.  On the Grothendieck group the induced matrices in the
projective bases are extracted from the projective decomposition of F(T·a).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bimodules import TangleBimodule, build_bimodule, decompose_left_projective
from .diagrams import (
    DiagramError,
    FlatTangle,
    Triple,
    compose_flat,
    is_coherent,
    matchings_cached,
)
from .exact_algebra import Laurent, quantum_integer


@dataclass(frozen=True)
class HighestWeight:
    N: int
    s: int
    k: int

    def __post_init__(self):
        if self.s < 0 or self.k < 0 or self.s + self.k > self.N:
            raise DiagramError("need s >= 0 and s + k <= N")

    @property
    def lam(self) -> tuple[int, ...]:
        return tuple(
            2 if i < self.s else (1 if i < self.s + self.k else 0)
            for i in range(self.N)
        )

    @property
    def total(self) -> int:
        return 2 * self.s + self.k


def is_admissible(hw: HighestWeight, mu: tuple[int, ...]) -> bool:
    if len(mu) != hw.N or any(x not in (0, 1, 2) for x in mu):
        return False
    if sum(mu) != hw.total:
        return False
    lam = hw.lam
    acc_mu = acc_lam = 0
    for a, b in zip(mu, lam):
        acc_mu += a
        acc_lam += b
        if acc_mu > acc_lam:
            return False
    return True


def admissible_weights(hw: HighestWeight) -> list[tuple[int, ...]]:
    """All admissible weights, the highest weight first (lex-descending)."""
    out = [
        mu
        for mu in itertools.product((0, 1, 2), repeat=hw.N)
        if is_admissible(hw, mu)
    ]
    out.sort(reverse=True)
    return out


def ones_positions(mu: tuple[int, ...]) -> list[int]:
    """M_μ, 1-based."""
    return [i + 1 for i, x in enumerate(mu) if x == 1]


def twos_positions(mu: tuple[int, ...]) -> list[int]:
    """N_μ, 1-based."""
    return [i + 1 for i, x in enumerate(mu) if x == 2]


def weight_ring_triple(hw: HighestWeight, mu: tuple[int, ...]) -> Triple | None:
    """Triple of the ring attached to μ; None when the basis is empty."""
    m = len(ones_positions(mu))
    if not is_coherent(m, hw.k, 0):
        return None
    return Triple(m, hw.k, 0)


# ---------------------------------------------------------------------------
# Semistandard tableaux on the two-column shape
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tableau:
    left: tuple[int, ...]  # column of length s+k
    right: tuple[int, ...]  # column of length s

    def __post_init__(self):
        for col in (self.left, self.right):
            if any(a >= b for a, b in zip(col, col[1:])):
                raise DiagramError("columns must strictly increase")
        for a, b in zip(self.left, self.right):
            if a > b:
                raise DiagramError("rows must be non-decreasing")


def enumerate_tableaux(hw: HighestWeight, mu: tuple[int, ...]) -> list[Tableau]:
    """All semistandard fillings of the two-column shape with content μ."""
    if sum(mu) != hw.total:
        return []
    twos = twos_positions(mu)
    ones = ones_positions(mu)
    need_right = hw.s - len(twos)
    if need_right < 0 or need_right > len(ones):
        return []
    out = []
    for chosen in itertools.combinations(ones, need_right):
        right = tuple(sorted(twos + list(chosen)))
        left = tuple(sorted(twos + [x for x in ones if x not in chosen]))
        if len(left) != hw.s + hw.k or len(right) != hw.s:
            continue
        try:
            out.append(Tableau(left=left, right=right))
        except DiagramError:
            continue
    return out


def weight_dim(hw: HighestWeight, mu: tuple[int, ...]) -> int:
    return len(enumerate_tableaux(hw, mu))


def hook_content_dimension(hw: HighestWeight) -> int:
    """Independent total dimension of the two-column module (hook contents)."""
    N, s, k = hw.N, hw.s, hw.k
    dim = Fraction(1)
    for i in range(1, s + k + 1):  # first column, content 1 - i
        arm = 1 if i <= s else 0
        hook = arm + (s + k - i) + 1
        dim *= Fraction(N + 1 - i, hook)
    for i in range(1, s + 1):  # second column, content 2 - i
        hook = (s - i) + 1
        dim *= Fraction(N + 2 - i, hook)
    assert dim.denominator == 1
    return int(dim)


# ---------------------------------------------------------------------------
# Bijection with one-platform matchings
# ---------------------------------------------------------------------------

def phi(hw: HighestWeight, mu: tuple[int, ...], tab: Tableau):
    """Tableau to matching on the points M_μ with a k-slot left platform."""
    M = ones_positions(mu)
    mpos = {v: i for i, v in enumerate(M)}  # value -> 0-based free index
    m = len(M)
    triple = weight_ring_triple(hw, mu)
    if triple is None:
        raise DiagramError("weight has no matching model")
    in_right = sorted(set(M) & set(tab.right))
    pairing = [-1] * triple.points

    def free_pos(v: int) -> int:
        return hw.k + mpos[v]

    for b in in_right:
        partner = None
        for v in reversed([x for x in M if x < b]):
            if pairing[free_pos(v)] == -1:
                partner = v
                break
        if partner is None:
            raise DiagramError("no unconnected point to the left")
        i, j = free_pos(partner), free_pos(b)
        pairing[i], pairing[j] = j, i
    remaining = sorted((v for v in M if pairing[free_pos(v)] == -1), reverse=True)
    for slot, v in enumerate(remaining):
        i, j = slot, free_pos(v)
        pairing[i], pairing[j] = j, i
    from .diagrams import Matching

    return Matching(triple, tuple(pairing))


def psi(hw: HighestWeight, mu: tuple[int, ...], a) -> Tableau:
    """Matching to tableau: right arc-endpoints and the 2s fill the right column."""
    M = ones_positions(mu)
    t = a.triple
    right_ends = {M[j - t.k] for i, j in a.free_free_arcs()}
    twos = twos_positions(mu)
    right = tuple(sorted(twos + sorted(right_ends)))
    left = tuple(sorted(twos + [v for v in M if v not in right_ends]))
    return Tableau(left=left, right=right)


# ---------------------------------------------------------------------------
# The raising/lowering tangles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctorTangle:
    tangle: FlatTangle
    source: tuple[int, ...]
    target: tuple[int, ...]


def functor_tangle(hw: HighestWeight, mu: tuple[int, ...], i: int, direction: str):
    """The simplest flat tangle of E_i / F_i on C_μ, or None when zero."""
    if not 1 <= i <= hw.N - 1:
        raise DiagramError(f"index {i} out of range")
    if direction not in ("E", "F"):
        raise DiagramError("direction must be 'E' or 'F'")
    eps = 1 if direction == "E" else -1
    a, b = mu[i - 1], mu[i]
    target = mu[: i - 1] + (a + eps, b - eps) + mu[i + 1 :]
    if not is_admissible(hw, target):
        return None
    src_triple = weight_ring_triple(hw, mu)
    tgt_triple = weight_ring_triple(hw, target)
    if src_triple is None or tgt_triple is None:
        return None
    m_src = src_triple.n
    M_src = ones_positions(mu)
    M_tgt = ones_positions(target)
    pair = (a, b) if direction == "E" else (b, a)
    if pair in ((0, 1), (1, 2)):
        tangle = FlatTangle.identity(m_src)
    elif pair == (0, 2):
        p = sorted(M_tgt).index(i) + 1
        tangle = FlatTangle(m_src, m_src + 2, (("cup", p),))
    elif pair == (1, 1):
        p = sorted(M_src).index(i) + 1
        tangle = FlatTangle(m_src, m_src - 2, (("cap", p),))
    else:
        raise DiagramError("unreachable weight case")  # guarded by admissibility
    return FunctorTangle(tangle=tangle, source=mu, target=target)


# ---------------------------------------------------------------------------
# Sparse Laurent matrices over the projective basis
# ---------------------------------------------------------------------------

class LaurentMatrix:
    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Laurent] = {}
        if entries:
            for key, val in entries.items():
                if not val.is_zero():
                    self.entries[key] = val

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls(n, n, {(i, i): Laurent.one() for i in range(n)})

    @classmethod
    def diagonal(cls, values) -> "LaurentMatrix":
        values = list(values)
        return cls(
            len(values),
            len(values),
            {(i, i): v for i, v in enumerate(values)},
        )

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for key, val in other.entries.items():
            out[key] = out.get(key, Laurent.zero()) + val
        return LaurentMatrix(self.rows, self.cols, out)

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + other.scale(Laurent.from_int(-1))

    def scale(self, c: Laurent) -> "LaurentMatrix":
        return LaurentMatrix(
            self.rows, self.cols, {k: v * c for k, v in self.entries.items()}
        )

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_col: dict[int, list[tuple[int, Laurent]]] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out: dict[tuple[int, int], Laurent] = {}
        for (m, c2), v2 in other.entries.items():
            for r, v1 in by_col.get(m, ()):
                key = (r, c2)
                out[key] = out.get(key, Laurent.zero()) + v1 * v2
        return LaurentMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"LaurentMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


# ---------------------------------------------------------------------------
# The Grothendieck-group action
# ---------------------------------------------------------------------------

class KGroup:
    """Projective-class lattice of the category attached to one highest weight."""

    def __init__(self, hw: HighestWeight):
        self.hw = hw
        self.weights = admissible_weights(hw)
        self.basis: list[tuple[tuple[int, ...], int]] = []
        self.offsets: dict[tuple[int, ...], int] = {}
        for mu in self.weights:
            self.offsets[mu] = len(self.basis)
            triple = weight_ring_triple(hw, mu)
            count = (
                len(matchings_cached(triple.n, triple.k, triple.l))
                if triple is not None
                else 0
            )
            for ai in range(count):
                self.basis.append((mu, ai))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def weight_of_index(self, idx: int) -> tuple[int, ...]:
        return self.basis[idx][0]

    def matrix_e(self, i: int) -> LaurentMatrix:
        return self._action_matrix(i, "E")

    def matrix_f(self, i: int) -> LaurentMatrix:
        return self._action_matrix(i, "F")

    def matrix_k(self, i: int, inverse: bool = False) -> LaurentMatrix:
        diag = []
        for mu, _ in self.basis:
            d = mu[i - 1] - mu[i]
            diag.append(Laurent.q(-d if inverse else d))
        return LaurentMatrix.diagonal(diag)

    def _action_matrix(self, i: int, direction: str) -> LaurentMatrix:
        entries: dict[tuple[int, int], Laurent] = {}
        qq = Laurent({1: 1, -1: 1})
        for mu in self.weights:
            ft = functor_tangle(self.hw, mu, i, direction)
            if ft is None:
                continue
            src_triple = weight_ring_triple(self.hw, mu)
            tgt_triple = weight_ring_triple(self.hw, ft.target)
            if src_triple is None or tgt_triple is None:
                continue
            bimod = build_bimodule(ft.tangle, tgt_triple, src_triple)
            src_count = len(matchings_cached(src_triple.n, src_triple.k, src_triple.l))
            for ai in range(src_count):
                factor = decompose_left_projective(bimod, ai)
                row = self.offsets[ft.target] + bimod.top_ring.index(factor.matching)
                col = self.offsets[mu] + ai
                entries[(row, col)] = (qq ** factor.circles).shift(factor.shift)
        return LaurentMatrix(self.dim, self.dim, entries)

    def commutator_rhs(self, i: int) -> LaurentMatrix:
        diag = []
        for mu, _ in self.basis:
            diag.append(quantum_integer(mu[i - 1] - mu[i]))
        return LaurentMatrix.diagonal(diag)


def cartan_coupling(i: int, j: int) -> int:
    if i == j:
        return 2
    if abs(i - j) == 1:
        return -1
    return 0


def verify_qrel(hw: HighestWeight) -> dict:
    """All nine relation families as Laurent matrix identities."""
    kg = KGroup(hw)
    N = hw.N
    E = {i: kg.matrix_e(i) for i in range(1, N)}
    F = {i: kg.matrix_f(i) for i in range(1, N)}
    K = {i: kg.matrix_k(i) for i in range(1, N)}
    Kinv = {i: kg.matrix_k(i, inverse=True) for i in range(1, N)}
    one = LaurentMatrix.identity(kg.dim)
    qq = Laurent({1: 1, -1: 1})
    failures = []

    for i in range(1, N):
        if K[i] * Kinv[i] != one or Kinv[i] * K[i] != one:
            failures.append(f"K_{i} K_{i}^-1 != 1")
        for j in range(1, N):
            if K[i] * K[j] != K[j] * K[i]:
                failures.append(f"K_{i} K_{j} do not commute")
            c = cartan_coupling(i, j)
            if K[i] * E[j] != (E[j] * K[i]).scale(Laurent.q(c)):
                failures.append(f"K_{i} E_{j} twist fails")
            if K[i] * F[j] != (F[j] * K[i]).scale(Laurent.q(-c)):
                failures.append(f"K_{i} F_{j} twist fails")
            lhs = E[i] * F[j] - F[j] * E[i]
            rhs = kg.commutator_rhs(i) if i == j else LaurentMatrix(kg.dim, kg.dim)
            if lhs != rhs:
                failures.append(f"[E_{i}, F_{j}] fails")
            if abs(i - j) > 1:
                if E[i] * E[j] != E[j] * E[i]:
                    failures.append(f"E_{i} E_{j} do not commute")
                if F[i] * F[j] != F[j] * F[i]:
                    failures.append(f"F_{i} F_{j} do not commute")
            if abs(i - j) == 1:
                serre_e = (
                    E[i] * E[i] * E[j]
                    - (E[i] * E[j] * E[i]).scale(qq)
                    + E[j] * E[i] * E[i]
                )
                if not serre_e.is_zero():
                    failures.append(f"E-Serre fails at ({i},{j})")
                serre_f = (
                    F[i] * F[i] * F[j]
                    - (F[i] * F[j] * F[i]).scale(qq)
                    + F[j] * F[i] * F[i]
                )
                if not serre_f.is_zero():
                    failures.append(f"F-Serre fails at ({i},{j})")
    return {"pass": not failures, "failures": failures, "dim": kg.dim}


# ---------------------------------------------------------------------------
# Props 1-2 at the blockwise graded-rank level
# ---------------------------------------------------------------------------

def composite_rank_table(hw: HighestWeight, mu: tuple[int, ...], steps):
    """Blockwise graded ranks of the composite functor bimodule on C_μ.

    steps act left to right: [("F", j), ("E", i)] means E_i ∘ F_j.  Returns
    (target weight, {(ci, bi): Laurent}) or None when the composite vanishes.
    """
    src_triple = weight_ring_triple(hw, mu)
    if src_triple is None:
        return None
    cur = mu
    tangle = FlatTangle.identity(src_triple.n)
    for direction, i in steps:
        ft = functor_tangle(hw, cur, i, direction)
        if ft is None:
            return None
        tangle, _ = compose_flat(ft.tangle, tangle)
        cur = ft.target
    tgt_triple = weight_ring_triple(hw, cur)
    if tgt_triple is None:
        return None
    bimod = build_bimodule(tangle, tgt_triple, src_triple)
    return cur, bimod.graded_rank_table()


def _table_add(t1, t2):
    if t1 is None:
        return t2
    if t2 is None:
        return t1
    out = dict(t1)
    for key, val in t2.items():
        out[key] = out.get(key, Laurent.zero()) + val
    return out


def _table_scale(t, c: Laurent):
    if t is None:
        return None
    return {key: val * c for key, val in t.items()}


def _tables_equal(t1, t2) -> bool:
    keys = set(t1 or {}) | set(t2 or {})
    for key in keys:
        v1 = (t1 or {}).get(key, Laurent.zero())
        v2 = (t2 or {}).get(key, Laurent.zero())
        if v1 != v2:
            return False
    return True


def _identity_table(hw: HighestWeight, mu) -> dict | None:
    from .rings import build_ring

    triple = weight_ring_triple(hw, mu)
    if triple is None:
        return None
    ring = build_ring(triple.n, triple.k, triple.l)
    return {
        (ci, bi): ring.block(ci, bi).graded_rank()
        for ci in range(len(ring))
        for bi in range(len(ring))
    }


def _strip_target(result):
    return None if result is None else result[1]


def verify_prop2(hw: HighestWeight) -> dict:
    """E_iF_i against F_iE_i ⊕ Id-shifts, per admissible weight and index."""
    qq = Laurent({1: 1, -1: 1})
    failures = []
    checked = 0
    for mu in admissible_weights(hw):
        for i in range(1, hw.N):
            ef = _strip_target(composite_rank_table(hw, mu, [("F", i), ("E", i)]))
            fe = _strip_target(composite_rank_table(hw, mu, [("E", i), ("F", i)]))
            ident = _identity_table(hw, mu)
            diff = mu[i - 1] - mu[i]
            if diff == 2:
                rhs = _table_add(fe, _table_scale(ident, qq))
                ok = _tables_equal(ef, rhs)
            elif diff == 1:
                ok = _tables_equal(ef, _table_add(fe, ident))
            elif diff == 0:
                ok = _tables_equal(ef, fe)
            elif diff == -1:
                ok = _tables_equal(_table_add(ef, ident), fe)
            else:
                ok = _tables_equal(_table_add(ef, _table_scale(ident, qq)), fe)
            checked += 1
            if not ok:
                failures.append(f"Prop2 fails at mu={mu}, i={i}")
    return {"pass": not failures, "failures": failures, "cases": checked}


def verify_prop1(hw: HighestWeight) -> dict:
    """Functor-level commutations and the Serre decompositions, rank-wise."""
    qq = Laurent({1: 1, -1: 1})
    failures = []
    checked = 0
    weights = admissible_weights(hw)
    N = hw.N
    for mu in weights:
        for i in range(1, N):
            for j in range(1, N):
                if i == j:
                    continue
                lhs = _strip_target(composite_rank_table(hw, mu, [("F", j), ("E", i)]))
                rhs = _strip_target(composite_rank_table(hw, mu, [("E", i), ("F", j)]))
                checked += 1
                if not _tables_equal(lhs, rhs):
                    failures.append(f"E_{i}F_{j} ≇ F_{j}E_{i} at mu={mu}")
                if abs(i - j) > 1:
                    for d in ("E", "F"):
                        lhs = _strip_target(
                            composite_rank_table(hw, mu, [(d, j), (d, i)])
                        )
                        rhs = _strip_target(
                            composite_rank_table(hw, mu, [(d, i), (d, j)])
                        )
                        checked += 1
                        if not _tables_equal(lhs, rhs):
                            failures.append(f"{d}_{i}{d}_{j} commute fails at mu={mu}")
                if abs(i - j) == 1:
                    for d in ("E", "F"):
                        iij = _strip_target(
                            composite_rank_table(hw, mu, [(d, j), (d, i), (d, i)])
                        )
                        jii = _strip_target(
                            composite_rank_table(hw, mu, [(d, i), (d, i), (d, j)])
                        )
                        iji = _strip_target(
                            composite_rank_table(hw, mu, [(d, i), (d, j), (d, i)])
                        )
                        lhs = _table_add(iij, jii)
                        rhs = _table_scale(iji, qq)
                        checked += 1
                        if not _tables_equal(lhs, rhs):
                            failures.append(f"{d}-Serre ⊕ fails at mu={mu}, ({i},{j})")
    return {"pass": not failures, "failures": failures, "cases": checked}


# ---------------------------------------------------------------------------
# The sl2 dimension oracle
# ---------------------------------------------------------------------------

def tensor_power_multiplicities(n: int) -> dict[int, int]:
    """Multiplicity of each V_j inside V_1^{⊗n} by the Clebsch-Gordan walk."""
    mult = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for j, c in mult.items():
            for j2 in ((j - 1, j + 1) if j > 0 else (j + 1,)):
                nxt[j2] = nxt.get(j2, 0) + c
        mult = nxt
    return mult


def sl2_invariant_dimension(k: int, l: int, n: int) -> tuple[Laurent, int]:
    """dim Hom(V_k ⊗ V_l, V^{⊗n}) with a spin-resolved refinement.

    The Laurent output records the count at each intermediate spin j as the
    q^j coefficient; evaluating at q = 1 gives the plain dimension, which
    must equal |B_n^{k,l}|.
    """
    mult = tensor_power_multiplicities(n)
    spins = set(range(abs(k - l), k + l + 1, 2))
    poly = Laurent({j: c for j, c in mult.items() if j in spins})
    return poly, poly.evaluate_at_one()
