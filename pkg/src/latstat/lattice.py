"""Finite lattice backends and lattice order statistics.

Two element representations share one abstract interface (elements /
meet / join / leq): explicit meet-join tables, and lattices of
finite-valued functions on a small ground set with pointwise min/max.
Order statistics are computed literally from their defining subset
formulas; the pointwise per-point sort is provided separately for
function elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from .report import CheckReport, Witness
from .scalars import (
    INF,
    BudgetExceededError,
    InputError,
    as_scalar,
    is_inf,
)

DEFAULT_MAX_GROUND = 6
DEFAULT_MAX_CHAIN = 6
DEFAULT_BUDGET = 10 ** 8


@dataclass(frozen=True)
class GroundSet:
    """The index set that function elements are defined over."""

    size: int
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.size < 1:
            raise InputError("ground set must have at least one point")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise InputError("ground labels must match the ground size")
            if len(set(self.labels)) != self.size:
                raise InputError("ground labels must be distinct")


# --- pointwise operations on function elements (plain tuples of scalars) ---

def fn_meet(a: tuple, b: tuple) -> tuple:
    return tuple(x if x <= y else y for x, y in zip(a, b))


def fn_join(a: tuple, b: tuple) -> tuple:
    return tuple(x if x >= y else y for x, y in zip(a, b))


def fn_leq(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def fn_diff(a: tuple, b: tuple) -> tuple:
    """a \\ b := a - (a meet b), computed pointwise."""
    out = []
    for x, y in zip(a, b):
        m = x if x <= y else y
        if is_inf(x):
            out.append(Fraction(0) if is_inf(m) else INF)
        else:
            out.append(x - m)
    return tuple(out)


class FnLattice:
    """All functions from a ground set into a fixed finite chain of values.

    A product of chains, hence always distributive; closed under pointwise
    min and max by construction.
    """

    def __init__(self, ground, chain: Sequence, *, max_ground: int = DEFAULT_MAX_GROUND,
                 max_chain: int = DEFAULT_MAX_CHAIN):
        if isinstance(ground, int):
            ground = GroundSet(ground)
        self.ground = ground
        vals = tuple(as_scalar(v) for v in chain)
        if len(vals) < 1:
            raise InputError("value chain must be nonempty")
        if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
            raise InputError("value chain must be strictly increasing")
        if ground.size > max_ground:
            raise InputError(
                f"ground size {ground.size} exceeds cap {max_ground} "
                "(pass max_ground to override)")
        if len(vals) > max_chain:
            raise InputError(
                f"chain length {len(vals)} exceeds cap {max_chain} "
                "(pass max_chain to override)")
        self.chain = vals
        self._chain_set = frozenset(vals)
        self._elements: Optional[list] = None

    @classmethod
    def zero_to(cls, ground_size: int, top: int, **kw) -> "FnLattice":
        return cls(ground_size, [Fraction(v) for v in range(top + 1)], **kw)

    @classmethod
    def symmetric(cls, ground_size: int, absmax: int, **kw) -> "FnLattice":
        return cls(ground_size, [Fraction(v) for v in range(-absmax, absmax + 1)], **kw)

    @property
    def size(self) -> int:
        return len(self.chain) ** self.ground.size

    def elements(self) -> list:
        if self._elements is None:
            self._elements = [tuple(v) for v in product(self.chain, repeat=self.ground.size)]
        return self._elements

    def contains(self, a) -> bool:
        return (isinstance(a, tuple) and len(a) == self.ground.size
                and all(v in self._chain_set for v in a))

    def meet(self, a, b):
        return fn_meet(a, b)

    def join(self, a, b):
        return fn_join(a, b)

    def leq(self, a, b) -> bool:
        return fn_leq(a, b)

    def bottom(self):
        return tuple(self.chain[0] for _ in range(self.ground.size))

    def top(self):
        return tuple(self.chain[-1] for _ in range(self.ground.size))

    def __repr__(self):
        return f"FnLattice(ground={self.ground.size}, chain={list(self.chain)})"


class TableLattice:
    """A finite lattice given by explicit N x N meet and join tables over ids 0..N-1."""

    def __init__(self, n_elems: int, meet_table, join_table, labels: Optional[Sequence] = None):
        if n_elems < 1:
            raise InputError("lattice must have at least one element")
        self.n = n_elems
        self._meet = _check_table(meet_table, n_elems, "meet")
        self._join = _check_table(join_table, n_elems, "join")
        if labels is not None:
            labels = list(labels)
            if len(labels) != n_elems or len(set(labels)) != n_elems:
                raise InputError("labels must be distinct and match the element count")
        self.labels = labels

    @property
    def size(self) -> int:
        return self.n

    def elements(self) -> list:
        return list(range(self.n))

    def contains(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.n

    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]

    def leq(self, a: int, b: int) -> bool:
        return self._meet[a][b] == a

    def id_of(self, label) -> int:
        if self.labels is None:
            raise InputError("lattice carries no labels")
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown label {label!r}")

    def label_of(self, a: int):
        return self.labels[a] if self.labels is not None else a

    def element_value(self, a: int) -> Fraction:
        """Numeric value of an element for scalar-valued functionals: its
        numeric label when labels are numeric, else the raw id."""
        if self.labels is not None:
            lab = self.labels[a]
            if isinstance(lab, (int, Fraction)) and not isinstance(lab, bool):
                return Fraction(lab)
            raise InputError(f"label {lab!r} is not numeric")
        return Fraction(a)

    def __repr__(self):
        return f"TableLattice(n={self.n})"


def _check_table(table, n: int, name: str):
    rows = [list(r) for r in table]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"{name} table must be {n}x{n}")
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise InputError(f"{name}[{i}][{j}] = {v!r} is not an element id")
    return rows


# --- public element operations with membership validation ---

def _require_member(L, a):
    if not L.contains(a):
        raise InputError(f"element {a!r} is not in the lattice")


def meet(L, a, b):
    _require_member(L, a)
    _require_member(L, b)
    return L.meet(a, b)


def join(L, a, b):
    _require_member(L, a)
    _require_member(L, b)
    return L.join(a, b)


def leq(L, a, b) -> bool:
    _require_member(L, a)
    _require_member(L, b)
    return L.leq(a, b)


# --- structural checks ---

def validate_table_lattice(t: TableLattice) -> CheckReport:
    """Exhaustively verify the lattice axioms on the tables: commutativity,
    idempotence, absorption, associativity.  Reports the first violation."""
    n = t.n
    checked = 0
    for a in range(n):
        checked += 2
        if t.meet(a, a) != a:
            return _axiom_fail((a,), t.meet(a, a), a, "meet idempotence", checked)
        if t.join(a, a) != a:
            return _axiom_fail((a,), t.join(a, a), a, "join idempotence", checked)
    for a in range(n):
        for b in range(n):
            checked += 4
            if t.meet(a, b) != t.meet(b, a):
                return _axiom_fail((a, b), t.meet(a, b), t.meet(b, a), "meet commutativity", checked)
            if t.join(a, b) != t.join(b, a):
                return _axiom_fail((a, b), t.join(a, b), t.join(b, a), "join commutativity", checked)
            if t.join(a, t.meet(a, b)) != a:
                return _axiom_fail((a, b), t.join(a, t.meet(a, b)), a, "absorption join(a, meet(a,b))", checked)
            if t.meet(a, t.join(a, b)) != a:
                return _axiom_fail((a, b), t.meet(a, t.join(a, b)), a, "absorption meet(a, join(a,b))", checked)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                checked += 2
                if t.meet(a, t.meet(b, c)) != t.meet(t.meet(a, b), c):
                    return _axiom_fail((a, b, c), t.meet(a, t.meet(b, c)),
                                       t.meet(t.meet(a, b), c), "meet associativity", checked)
                if t.join(a, t.join(b, c)) != t.join(t.join(a, b), c):
                    return _axiom_fail((a, b, c), t.join(a, t.join(b, c)),
                                       t.join(t.join(a, b), c), "join associativity", checked)
    return CheckReport(holds=True, instances_checked=checked)


def _axiom_fail(args, lhs, rhs, law, checked) -> CheckReport:
    return CheckReport(holds=False, instances_checked=checked,
                       witness=Witness(args=args, lhs=lhs, rhs=rhs, note=law))


def is_distributive(L, budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Check a meet (b join c) == (a meet b) join (a meet c) over all triples."""
    elems = L.elements()
    n = len(elems)
    if n ** 3 > budget:
        raise BudgetExceededError(f"{n}^3 triples exceed budget {budget}")
    checked = 0
    first = None
    for a in elems:
        for b in elems:
            for c in elems:
                checked += 1
                lhs = L.meet(a, L.join(b, c))
                rhs = L.join(L.meet(a, b), L.meet(a, c))
                if lhs != rhs and first is None:
                    first = Witness(args=(a, b, c), lhs=lhs, rhs=rhs,
                                    note="a meet (b join c) != (a meet b) join (a meet c)")
    if first is not None:
        return CheckReport(holds=False, instances_checked=checked, witness=first)
    return CheckReport(holds=True, instances_checked=checked)


# --- order statistics ---

def _validate_tuple(L, f):
    if len(f) < 1:
        raise InputError("tuple must have at least one element")
    for a in f:
        _require_member(L, a)


def order_statistics(L, f: Sequence, j: int):
    """The j-th order statistic: meet over all j-element subsets of the
    join of each subset."""
    n = len(f)
    if not 1 <= j <= n:
        raise InputError(f"order statistic index {j} out of range 1..{n}")
    _validate_tuple(L, f)
    return _order_statistic_unchecked(L, f, j)


def _order_statistic_unchecked(L, f, j):
    best = None
    for J in combinations(range(len(f)), j):
        v = f[J[0]]
        for i in J[1:]:
            v = L.join(v, f[i])
        best = v if best is None else L.meet(best, v)
    return best


def order_statistics_tuple(L, f: Sequence) -> tuple:
    _validate_tuple(L, f)
    return tuple(_order_statistic_unchecked(L, f, j) for j in range(1, len(f) + 1))


def order_statistics_dual(L, f: Sequence, j: int):
    """Dual formula: join over all (n+1-j)-element subsets of the meet of
    each subset.  Equals the primal formula exactly on distributive lattices."""
    n = len(f)
    if not 1 <= j <= n:
        raise InputError(f"order statistic index {j} out of range 1..{n}")
    _validate_tuple(L, f)
    return _order_statistic_dual_unchecked(L, f, j)


def _order_statistic_dual_unchecked(L, f, j):
    n = len(f)
    best = None
    for J in combinations(range(n), n + 1 - j):
        v = f[J[0]]
        for i in J[1:]:
            v = L.meet(v, f[i])
        best = v if best is None else L.join(best, v)
    return best


def order_statistics_dual_tuple(L, f: Sequence) -> tuple:
    _validate_tuple(L, f)
    return tuple(_order_statistic_dual_unchecked(L, f, j) for j in range(1, len(f) + 1))


def pointwise_order_statistics(fs: Sequence[tuple]) -> tuple:
    """Sort the values of a tuple of function elements at every point.

    Output tuple j (0-based j-1) is the function whose value at each point
    is the (j)-th smallest of the input values there; per-point multisets
    are preserved.
    """
    if len(fs) < 1:
        raise InputError("tuple must have at least one element")
    width = len(fs[0])
    if any(len(f) != width for f in fs):
        raise InputError("all function elements must share one ground set")
    cols = [sorted(col) for col in zip(*fs)]
    return tuple(tuple(col[j] for col in cols) for j in range(len(fs)))


# --- Birkhoff embedding ---

def birkhoff_embed(t: TableLattice):
    """Embed a distributive table lattice into a 0/1 function lattice.

    Each element maps to the indicator of the set of join-irreducible
    elements below it.  Returns (ambient FnLattice, id -> element map,
    tuple of join-irreducible ids forming the ground set).  Refuses
    non-distributive input, quoting the violating triple.
    """
    ok = validate_table_lattice(t)
    if not ok.holds:
        raise InputError(f"not a lattice: {ok.witness.note} at {ok.witness.args}")
    dist = is_distributive(t)
    if not dist.holds:
        raise InputError(
            f"lattice is not distributive: witness triple {dist.witness.args} "
            f"gives {dist.witness.lhs} != {dist.witness.rhs}")
    bottom = 0
    for a in range(t.n):
        bottom = t.meet(bottom, a)
    irreducibles = []
    for x in range(t.n):
        if x == bottom:
            continue
        below = [y for y in range(t.n) if y != x and t.leq(y, x)]
        v = bottom
        for y in below:
            v = t.join(v, y)
        if v != x:
            irreducibles.append(x)
    ground = tuple(irreducibles)
    if not ground:
        # one-element lattice embeds on a single dummy point
        ambient = FnLattice(1, [Fraction(0), Fraction(1)])
        return ambient, {bottom: (Fraction(0),)}, ground
    one, zero = Fraction(1), Fraction(0)
    mapping = {x: tuple(one if t.leq(g, x) else zero for g in ground) for x in range(t.n)}
    if len(set(mapping.values())) != t.n:
        raise InputError("embedding failed to separate elements; tables are inconsistent")
    for a in range(t.n):
        for b in range(t.n):
            if mapping[t.meet(a, b)] != fn_meet(mapping[a], mapping[b]) or \
               mapping[t.join(a, b)] != fn_join(mapping[a], mapping[b]):
                raise InputError("embedding does not preserve meet/join; tables are inconsistent")
    ambient = FnLattice(len(ground), [zero, one],
                        max_ground=max(DEFAULT_MAX_GROUND, len(ground)))
    return ambient, mapping, ground


# --- constructors ---

def lattice_from_order(n: int, leq_pairs, labels: Optional[Sequence] = None) -> TableLattice:
    """Build the meet/join tables from an explicit order relation on ids
    0..n-1.  Verifies the relation is a partial order and that every pair
    has a meet and a join."""
    rel = [[False] * n for _ in range(n)]
    for k, pair in enumerate(leq_pairs):
        pair = list(pair)
        if len(pair) != 2 or any(not isinstance(v, int) or isinstance(v, bool)
                                 or not 0 <= v < n for v in pair):
            raise InputError(f"leq_pairs[{k}] = {pair!r} is not a valid id pair")
        rel[pair[0]][pair[1]] = True
    for a in range(n):
        rel[a][a] = True
    for a in range(n):
        for b in range(n):
            if a != b and rel[a][b] and rel[b][a]:
                raise InputError(f"order is not antisymmetric at ({a},{b})")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if rel[a][b] and rel[b][c] and not rel[a][c]:
                    raise InputError(f"order is not transitive at ({a},{b},{c})")
    meet_t = [[0] * n for _ in range(n)]
    join_t = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lows = [c for c in range(n) if rel[c][a] and rel[c][b]]
            tops = [m for m in lows if all(rel[c][m] for c in lows)]
            if len(tops) != 1:
                raise InputError(f"elements ({a},{b}) have no meet")
            meet_t[a][b] = tops[0]
            ups = [c for c in range(n) if rel[a][c] and rel[b][c]]
            bots = [m for m in ups if all(rel[m][c] for c in ups)]
            if len(bots) != 1:
                raise InputError(f"elements ({a},{b}) have no join")
            join_t[a][b] = bots[0]
    return TableLattice(n, meet_t, join_t, labels=labels)


def build_m3() -> TableLattice:
    """The 5-element diamond lattice M3: bottom 1, three mutually
    incomparable middle elements 2,3,4, top 5 (labels 1..5)."""
    pairs_labels = [(1, 2), (1, 3), (1, 4), (2, 5), (3, 5), (4, 5), (1, 5)]
    pairs = [(a - 1, b - 1) for a, b in pairs_labels]
    return lattice_from_order(5, pairs, labels=[1, 2, 3, 4, 5])


def product_of_chains(sizes: Sequence[int], labels: bool = False) -> TableLattice:
    """Table lattice for a product of chains (a convenient distributive family)."""
    if not sizes or any(s < 1 for s in sizes):
        raise InputError("chain sizes must be positive")
    elems = [tuple(v) for v in product(*(range(s) for s in sizes))]
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    meet_t = [[0] * n for _ in range(n)]
    join_t = [[0] * n for _ in range(n)]
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            meet_t[i][j] = index[tuple(min(x, y) for x, y in zip(a, b))]
            join_t[i][j] = index[tuple(max(x, y) for x, y in zip(a, b))]
    return TableLattice(n, meet_t, join_t, labels=elems if labels else None)
