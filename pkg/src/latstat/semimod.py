"""Checkers for generalized semimodularity of tuple functionals.

A functional on n-tuples of lattice elements is compared, under a pluggable
transitive relation, against its value on the tuple's lattice order
statistics.  The pair-swap (window k = 2) variant, the relaxed sorted-prefix
variant, and the constructive rearrangement chain that sorts a tuple into
its order statistics by adjacent meet/join swaps are all implemented
exactly, with deterministic first witnesses.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .lattice import (
    DEFAULT_BUDGET,
    TableLattice,
    birkhoff_embed,
    build_m3,
    order_statistics_dual_tuple,
    order_statistics_tuple,
    _order_statistic_unchecked,
    _validate_tuple,
)
from .report import CheckReport, Witness
from .scalars import BudgetExceededError, InputError

_TRANSITIVITY_SAMPLE_CAP = 60


@dataclass(frozen=True)
class TransitiveRelation:
    """Comparison on a functional's codomain: >=, <=, ==, or a custom predicate.

    Custom predicates are only spot-checked for transitivity, on the values
    a scan actually encounters (capped at a deterministic subsample); that
    check is a falsification filter, not a proof.
    """

    kind: str
    pred: Optional[Callable] = None
    name: str = ""

    @classmethod
    def ge(cls):
        return cls(kind="ge", name="ge")

    @classmethod
    def le(cls):
        return cls(kind="le", name="le")

    @classmethod
    def eq(cls):
        return cls(kind="eq", name="eq")

    @classmethod
    def custom(cls, pred: Callable, name: str = "custom"):
        return cls(kind="custom", pred=pred, name=name)

    @classmethod
    def from_name(cls, name: str):
        try:
            return {"ge": cls.ge, "le": cls.le, "eq": cls.eq}[str(name).lower()]()
        except KeyError:
            raise InputError(f"unknown relation {name!r}; use ge, le, or eq")

    def holds(self, a, b) -> bool:
        if self.kind == "ge":
            return a >= b
        if self.kind == "le":
            return a <= b
        if self.kind == "eq":
            return a == b
        return bool(self.pred(a, b))

    def check_transitive(self, values: Sequence) -> None:
        """Raise InputError if the relation is visibly non-transitive on values."""
        if self.kind != "custom":
            return
        vals = list(values)
        if len(vals) > _TRANSITIVITY_SAMPLE_CAP:
            stride = len(vals) // _TRANSITIVITY_SAMPLE_CAP + 1
            vals = vals[::stride]
        for a in vals:
            for b in vals:
                if not self.pred(a, b):
                    continue
                for c in vals:
                    if self.pred(b, c) and not self.pred(a, c):
                        raise InputError(
                            f"relation {self.name!r} is not transitive: "
                            f"{a!r} ~ {b!r} ~ {c!r} but not {a!r} ~ {c!r}")


@dataclass
class TupleFunctional:
    """A total, deterministic map from n-tuples of lattice elements to an
    ordered codomain.  The optional lattice field records the carrier the
    functional was constructed for."""

    arity: int
    fn: Callable[[tuple], object]
    tag: str = ""
    lattice: object = None

    def __call__(self, args: tuple):
        return self.fn(args)


@dataclass(frozen=True)
class InsertionChain:
    """Rows g_0 .. g_{n-1} of the adjacent meet/join rearrangement: row 0 has
    the first n-1 entries already sorted (recursively) with the last entry
    appended; row k swaps positions (n-k, n-k+1) for meet/join; the final
    row is the tuple of order statistics."""

    rows: tuple


# --- scan engine ---

def _decode_odometer(index: int, base: int, width: int) -> tuple:
    digits = []
    for _ in range(width):
        digits.append(index % base)
        index //= base
    return tuple(reversed(digits))


def _exhaustive_scan(total: int, check_at: Callable[[int], Optional[Witness]],
                     jobs: int = 1):
    """Evaluate check_at on 0..total-1; return the witness with the smallest
    index, or None.  The full range is always scanned so reported instance
    counts are true counts, and the merge is deterministic for any jobs."""
    if jobs <= 1 or total < 4096:
        first = None
        for i in range(total):
            w = check_at(i)
            if w is not None and first is None:
                first = (i, w)
        return first
    nchunks = min(total, jobs * 4)
    bounds = [(total * c // nchunks, total * (c + 1) // nchunks) for c in range(nchunks)]

    def work(rng):
        lo, hi = rng
        for i in range(lo, hi):
            w = check_at(i)
            if w is not None:
                return (i, w)
        return None

    with ThreadPoolExecutor(max_workers=jobs) as ex:
        results = [r for r in ex.map(work, bounds) if r is not None]
    if not results:
        return None
    return min(results, key=lambda r: r[0])


def _require_budget(total: int, budget: int, what: str):
    if total > budget:
        raise BudgetExceededError(
            f"{what} needs {total} evaluations, over budget {budget} "
            "(raise the budget or use sampled mode)")


def _derive_seed(seed: int, i: int) -> int:
    # 64-bit splitmix-style stream derivation so trial i is independent of jobs
    x = (seed + (i + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


# --- the checkers ---

def check_generalized_n(L, lam: TupleFunctional, rel: TransitiveRelation, *,
                        mode: str = "exhaustive", seed: Optional[int] = None,
                        trials: int = 1000, budget: int = DEFAULT_BUDGET,
                        jobs: int = 1) -> CheckReport:
    """Verify rel(lam(f), lam(order statistics of f)) over L^n."""
    n = lam.arity
    if n == 1:
        return CheckReport(holds=True, instances_checked=0, mode=mode, seed=seed,
                           detail={"vacuous": "1-tuples equal their order statistics"})
    elems = L.elements()
    m = len(elems)
    memo: dict = {}

    def value(t: tuple):
        v = memo.get(t)
        if v is None:
            v = lam.fn(t)
            memo[t] = v
        return v

    def check_at(i: int) -> Optional[Witness]:
        f = tuple(elems[d] for d in _decode_odometer(i, m, n))
        stats = tuple(_order_statistic_unchecked(L, f, j) for j in range(1, n + 1))
        a, b = value(f), value(stats)
        if rel.holds(a, b):
            return None
        return Witness(args=f, lhs=a, rhs=b)

    if mode == "exhaustive":
        total = m ** n
        _require_budget(total, budget, f"exhaustive scan of L^{n}")
        if rel.kind == "custom":
            jobs = 1
        found = _exhaustive_scan(total, check_at, jobs)
        rel.check_transitive(list(memo.values()))
        witness = found[1] if found else None
        return CheckReport(holds=witness is None, instances_checked=total,
                           witness=witness, mode="exhaustive")
    if mode == "sampled":
        if seed is None:
            raise InputError("sampled mode requires a seed")
        first = None
        for i in range(trials):
            rng = random.Random(_derive_seed(seed, i))
            f = tuple(elems[rng.randrange(m)] for _ in range(n))
            stats = tuple(_order_statistic_unchecked(L, f, j) for j in range(1, n + 1))
            a, b = value(f), value(stats)
            if not rel.holds(a, b) and first is None:
                first = Witness(args=f, lhs=a, rhs=b)
        rel.check_transitive(list(memo.values()))
        return CheckReport(holds=first is None, instances_checked=trials,
                           witness=first, mode="sampled", seed=seed)
    raise InputError(f"unknown mode {mode!r}; use exhaustive or sampled")


def check_generalized_nk(L, lam: TupleFunctional, k: int, rel: TransitiveRelation, *,
                         mode: str = "exhaustive", seed: Optional[int] = None,
                         trials: int = 1000, budget: int = DEFAULT_BUDGET,
                         jobs: int = 1) -> CheckReport:
    """Verify the windowed form: every contiguous k-argument slice, with the
    other arguments fixed, satisfies the k-ary check.  One instance is one
    (window position, full tuple) pair."""
    n = lam.arity
    if not 1 <= k <= n:
        raise InputError(f"window width {k} out of range 1..{n}")
    if k == 1:
        return CheckReport(holds=True, instances_checked=0, mode=mode, seed=seed,
                           detail={"vacuous": "1-wide windows equal their order statistics"})
    elems = L.elements()
    m = len(elems)
    windows = n - k + 1
    memo: dict = {}

    def value(t: tuple):
        v = memo.get(t)
        if v is None:
            v = lam.fn(t)
            memo[t] = v
        return v

    def check_pair(j: int, f: tuple) -> Optional[Witness]:
        w = f[j:j + k]
        stats = tuple(_order_statistic_unchecked(L, w, idx) for idx in range(1, k + 1))
        g = f[:j] + stats + f[j + k:]
        a, b = value(f), value(g)
        if rel.holds(a, b):
            return None
        return Witness(args=f, lhs=a, rhs=b, note=f"window start {j}")

    if mode == "exhaustive":
        per_window = m ** n
        total = windows * per_window
        _require_budget(total, budget, f"exhaustive windowed scan of L^{n}")
        if rel.kind == "custom":
            jobs = 1

        def check_at(i: int) -> Optional[Witness]:
            j, r = divmod(i, per_window)
            return check_pair(j, tuple(elems[d] for d in _decode_odometer(r, m, n)))

        found = _exhaustive_scan(total, check_at, jobs)
        rel.check_transitive(list(memo.values()))
        witness = found[1] if found else None
        return CheckReport(holds=witness is None, instances_checked=total,
                           witness=witness, mode="exhaustive")
    if mode == "sampled":
        if seed is None:
            raise InputError("sampled mode requires a seed")
        first = None
        for i in range(trials):
            rng = random.Random(_derive_seed(seed, i))
            j = rng.randrange(windows)
            f = tuple(elems[rng.randrange(m)] for _ in range(n))
            w = check_pair(j, f)
            if w is not None and first is None:
                first = w
        rel.check_transitive(list(memo.values()))
        return CheckReport(holds=first is None, instances_checked=trials,
                           witness=first, mode="sampled", seed=seed)
    raise InputError(f"unknown mode {mode!r}; use exhaustive or sampled")


def check_relaxed_hypothesis(L, lam: TupleFunctional, rel: TransitiveRelation, *,
                             budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Weaker-than-windowed hypothesis: only tuples whose first j entries are
    already a nondecreasing chain must improve under the (j, j+1) meet/join
    swap."""
    n = lam.arity
    if n < 2:
        raise InputError("relaxed hypothesis needs arity >= 2")
    elems = L.elements()
    m = len(elems)
    _require_budget((n - 1) * m ** n, budget, "relaxed-hypothesis scan")
    memo: dict = {}

    def value(t: tuple):
        v = memo.get(t)
        if v is None:
            v = lam.fn(t)
            memo[t] = v
        return v

    checked = 0
    first = None
    from itertools import product as _product
    for j in range(1, n):  # 1-based length of the sorted prefix
        for idx in _product(range(m), repeat=n):
            f = tuple(elems[d] for d in idx)
            if any(not L.leq(f[i], f[i + 1]) for i in range(j - 1)):
                continue
            a, b = f[j - 1], f[j]
            g = f[:j - 1] + (L.meet(a, b), L.join(a, b)) + f[j + 1:]
            checked += 1
            va, vb = value(f), value(g)
            if not rel.holds(va, vb) and first is None:
                first = Witness(args=f, lhs=va, rhs=vb, note=f"sorted prefix length {j}")
    rel.check_transitive(list(memo.values()))
    return CheckReport(holds=first is None, instances_checked=checked, witness=first)


# --- the rearrangement chain ---

def insertion_chain(L, f: Sequence) -> InsertionChain:
    """Build the adjacent meet/join rearrangement that sorts f into its order
    statistics.  Table lattices are routed through the Birkhoff embedding
    (refusing non-distributive input) and mapped back."""
    _validate_tuple(L, f)
    if isinstance(L, TableLattice):
        ambient, mapping, _ = birkhoff_embed(L)
        inverse = {v: key for key, v in mapping.items()}
        fn_chain = _insertion_chain_fn(ambient, tuple(mapping[a] for a in f))
        rows = tuple(tuple(inverse[e] for e in row) for row in fn_chain.rows)
        return InsertionChain(rows=rows)
    return _insertion_chain_fn(L, tuple(f))


def _insertion_chain_fn(L, f: tuple) -> InsertionChain:
    n = len(f)
    if n == 1:
        return InsertionChain(rows=(f,))
    prev = _insertion_chain_fn(L, f[:-1])
    row = prev.rows[-1] + (f[-1],)
    rows = [row]
    for k in range(1, n):
        i = n - k - 1  # 0-based index of the meet slot at step k
        a, b = row[i], row[i + 1]
        row = row[:i] + (L.meet(a, b), L.join(a, b)) + row[i + 2:]
        rows.append(row)
    return InsertionChain(rows=tuple(rows))


def verify_chain_sortedness(chain: InsertionChain) -> CheckReport:
    """Check the partial sortedness every rearrangement row guarantees.

    For row k (k >= 1) of an n-wide chain over function elements, at every
    point: entries are pointwise nondecreasing at adjacent positions
    j..j+1 for j in [1, n-k-2] and [n-k, n-1] (1-based), and position
    n-k-1 is below position n-k+1 whenever k <= n-2.
    """
    rows = chain.rows
    if not rows:
        raise InputError("empty chain")
    n = len(rows[0])
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError("chain must have n rows of n entries each")
    for row in rows:
        for e in row:
            if not isinstance(e, tuple):
                raise InputError("chain rows must hold function elements")
    width = len(rows[0][0])
    checked = 0
    first = None

    def record(k, j1, j2, s, a, b):
        nonlocal first
        if first is None:
            first = Witness(args=(k, j1, s), lhs=a, rhs=b,
                            note=f"row {k}: position {j1} above position {j2} at point {s}")

    for k in range(1, n):
        row = rows[k]
        adj = list(range(1, n - k - 1)) + list(range(n - k, n))  # 1-based j values
        for j in adj:
            for s in range(width):
                checked += 1
                if not row[j - 1][s] <= row[j][s]:
                    record(k, j, j + 1, s, row[j - 1][s], row[j][s])
        if k <= n - 2:
            lo, hi = n - k - 2, n - k  # 0-based positions n-k-1 and n-k+1
            for s in range(width):
                checked += 1
                if not row[lo][s] <= row[hi][s]:
                    record(k, lo + 1, hi + 1, s, row[lo][s], row[hi][s])
    return CheckReport(holds=first is None, instances_checked=checked, witness=first)


def chain_point_multisets_conserved(chain: InsertionChain) -> bool:
    """True when every row carries the same per-point value multiset as row 0."""
    rows = chain.rows
    width = len(rows[0][0])
    base = [sorted(e[s] for e in rows[0]) for s in range(width)]
    return all(sorted(e[s] for e in row) == base[s]
               for row in rows[1:] for s in range(width))


# --- scalar-valued quadratic functionals and the diamond demo ---

def scalar_quadratic(L, terms: Sequence, n: int) -> TupleFunctional:
    """Functional sum of c * v(f_i) * v(f_j) over the given (c, i, j) terms,
    where v is the element's numeric value and i, j are 1-based argument
    positions."""
    prepared = []
    for c, i, j in terms:
        if not 1 <= i <= n or not 1 <= j <= n:
            raise InputError(f"term indices ({i},{j}) out of range 1..{n}")
        prepared.append((Fraction(c), i - 1, j - 1))

    if isinstance(L, TableLattice):
        values = {a: L.element_value(a) for a in L.elements()}

        def numeric(a):
            return values[a]
    else:
        def numeric(a):
            if len(a) != 1:
                raise InputError("quadratic functionals need scalar-valued elements")
            return a[0]

    def fn(f):
        return sum((c * numeric(f[i]) * numeric(f[j]) for c, i, j in prepared),
                   Fraction(0))

    return TupleFunctional(arity=n, fn=fn, tag="quadratic", lattice=L)


M3_QUADRATIC_TERMS = ((12, 1, 2), (3, 2, 3), (5, 1, 3))


def m3_quadratic(L=None) -> TupleFunctional:
    """The diamond-lattice demo functional 12ab + 3bc + 5ac on numeric labels."""
    return scalar_quadratic(L if L is not None else build_m3(), M3_QUADRATIC_TERMS, 3)


def run_counterexample_m3() -> dict:
    """Reproduce the diamond-lattice demonstration: the quadratic functional
    passes all 250 pair-window inequalities yet fails the full 3-ary check
    at labels (2,3,4), where it evaluates to 148 against 160 on the order
    statistics (1,5,5)."""
    L = build_m3()
    lam = m3_quadratic(L)
    rel = TransitiveRelation.ge()
    pair = check_generalized_nk(L, lam, 2, rel)
    full = check_generalized_n(L, lam, rel)
    f_ids = tuple(L.id_of(x) for x in (2, 3, 4))
    stats_ids = order_statistics_tuple(L, f_ids)
    dual_ids = order_statistics_dual_tuple(L, f_ids)
    stats_labels = tuple(L.label_of(a) for a in stats_ids)
    dual_labels = tuple(L.label_of(a) for a in dual_ids)
    value_tuple = lam.fn(f_ids)
    value_stats = lam.fn(stats_ids)
    witness_labels = (tuple(L.label_of(a) for a in full.witness.args)
                      if full.witness is not None else None)
    expected = (pair.holds and pair.instances_checked == 250
                and stats_labels == (1, 5, 5) and dual_labels == (1, 1, 5)
                and value_tuple == Fraction(148) and value_stats == Fraction(160)
                and not full.holds)
    return {
        "lattice": "diamond M3 on labels 1..5",
        "pair_window_check": pair,
        "pair_inequalities": pair.instances_checked,
        "order_stats_of_234": stats_labels,
        "dual_order_stats_of_234": dual_labels,
        "value_at_234": value_tuple,
        "value_at_order_stats": value_stats,
        "full_check": full,
        "full_check_witness_labels": witness_labels,
        "expected_violation_reproduced": expected,
    }


# --- regression harness for the pair-to-full reduction ---

def reduction_regression(generator: Callable, trials: int, seed: int, *,
                         rel: Optional[TransitiveRelation] = None,
                         budget: int = DEFAULT_BUDGET, jobs: int = 1) -> CheckReport:
    """Generate functionals from families built to pass the pair-window check
    and confirm each also passes the full check on its (distributive)
    carrier.  A functional failing its own pair-window precondition is
    flagged, not counted as a falsification; a pair-passing functional that
    fails the full check is a falsification and is reported with its
    witness.
    """
    if rel is None:
        rel = TransitiveRelation.ge()
    rng = random.Random(seed)
    verified = 0
    flagged = 0
    first = None
    for t in range(trials):
        L, lam = generator(rng)
        pair = check_generalized_nk(L, lam, 2, rel, budget=budget, jobs=jobs)
        if not pair.holds:
            flagged += 1
            continue
        full = check_generalized_n(L, lam, rel, budget=budget, jobs=jobs)
        verified += 1
        if not full.holds and first is None:
            first = Witness(args=full.witness.args, lhs=full.witness.lhs,
                            rhs=full.witness.rhs,
                            note=f"trial {t}, functional {lam.tag!r} passed pair windows "
                                 "but failed the full check")
    return CheckReport(holds=first is None, instances_checked=verified,
                       witness=first, mode="sampled", seed=seed,
                       detail={"trials": trials, "precondition_failures": flagged})
