"""Factories for tuple functionals that are pair-window submodular by
construction (Schur compositions, one-sided potentials, symmetric sums of
multiadditive forms) and exact checkers for the inequalities they yield:
permanents, elementary symmetric functions, monotone transforms, power /
sup / inf products, association on product spaces, and product measures of
set tuples.

Everything is exact rational arithmetic; the only floating point lives in
the explicitly requested high-precision mode for non-integer exponents.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Optional, Sequence

from .lattice import FnLattice, fn_diff, fn_meet, pointwise_order_statistics
from .report import CheckReport, Witness
from .scalars import (
    ConventionMode,
    InputError,
    Scalar,
    as_scalar,
    ext_pow,
    ext_prod,
    ext_sum,
    ext_mul,
    is_inf,
    require_nonneg,
)
from .semimod import TupleFunctional


# --- measures on a finite ground set ---

@dataclass(frozen=True)
class Measure:
    """Nonnegative point weights; the integral of a function element is the
    weighted sum of its values, with 0 * inf resolved by the caller's mode."""

    weights: tuple
    probability: bool = False

    def __post_init__(self):
        ws = tuple(as_scalar(w) for w in self.weights)
        for w in ws:
            require_nonneg(w, "measure weight")
        if self.probability:
            if any(is_inf(w) for w in ws):
                raise InputError("probability weights must be finite")
            if sum(ws) != 1:
                raise InputError("probability weights must sum to 1")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def counting(cls, size: int) -> "Measure":
        return cls(tuple(Fraction(1) for _ in range(size)))

    @classmethod
    def uniform(cls, size: int) -> "Measure":
        return cls(tuple(Fraction(1, size) for _ in range(size)), probability=True)

    @property
    def size(self) -> int:
        return len(self.weights)

    def integral(self, h: Sequence, mode: Optional[ConventionMode] = None) -> Scalar:
        if len(h) != self.size:
            raise InputError("function element does not match the measure's ground set")
        return ext_sum(ext_mul(as_scalar(v), w, mode) for v, w in zip(h, self.weights))

    def total(self) -> Scalar:
        return ext_sum(self.weights)


def _require_nonneg_fn(f, what="function element"):
    for v in f:
        require_nonneg(as_scalar(v), what)
    return f


# --- majorization ---

def majorizes(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """True when x is majorized by y: equal totals and every ascending
    partial sum of x dominates the corresponding one of y."""
    if len(x) != len(y):
        raise InputError("majorization needs vectors of equal length")
    xs, ys = sorted(x), sorted(y)
    if sum(xs) != sum(ys):
        return False
    tx = ty = Fraction(0)
    for a, b in zip(xs[:-1], ys[:-1]):
        tx += a
        ty += b
        if tx < ty:
            return False
    return True


# --- Schur composition ---

@dataclass
class SchurSpec:
    """A one-argument submodular nondecreasing map on a small carrier lattice
    together with a coordinatewise-nondecreasing Schur-concave combiner."""

    lattice: object
    lam: Callable
    combiner: Callable
    lam_name: str = "lam"
    combiner_name: str = "F"


def verify_schur_spec(spec: SchurSpec, n: int, *, seed: int = 0,
                      spot_checks: int = 40) -> None:
    """Exhaustively check the one-argument map (submodular, nondecreasing) and
    spot-check the combiner on generated majorization pairs.  The combiner
    check is a falsification filter, not a proof.  Raises with a witness on
    failure."""
    elems = spec.lattice.elements()
    vals = {e: Fraction(spec.lam(e)) for e in elems}
    for f in elems:
        for g in elems:
            lhs = vals[f] + vals[g]
            rhs = vals[spec.lattice.join(f, g)] + vals[spec.lattice.meet(f, g)]
            if lhs < rhs:
                raise InputError(
                    f"{spec.lam_name} is not submodular: pair ({f!r}, {g!r}) "
                    f"gives {lhs} < {rhs}")
            if spec.lattice.leq(f, g) and vals[f] > vals[g]:
                raise InputError(
                    f"{spec.lam_name} is not nondecreasing: {f!r} <= {g!r} "
                    f"but {vals[f]} > {vals[g]}")
    rng = random.Random(seed)
    pool = sorted(set(vals.values()))
    for _ in range(spot_checks):
        y = tuple(rng.choice(pool) if pool else Fraction(rng.randrange(8))
                  for _ in range(n))
        i, j = rng.sample(range(n), 2) if n >= 2 else (0, 0)
        if i == j:
            continue
        t = Fraction(rng.randrange(1, 4), 4)
        x = list(y)
        x[i] = t * y[i] + (1 - t) * y[j]
        x[j] = (1 - t) * y[i] + t * y[j]
        x = tuple(x)
        if not majorizes(x, y):
            raise InputError("internal error: averaging transform broke majorization")
        if spec.combiner(x) < spec.combiner(y):
            raise InputError(
                f"{spec.combiner_name} is not Schur-concave: {x} majorized by {y} "
                f"but F(x)={spec.combiner(x)} < F(y)={spec.combiner(y)}")
        bumped = tuple(v + (1 if k == i else 0) for k, v in enumerate(y))
        if spec.combiner(bumped) < spec.combiner(y):
            raise InputError(f"{spec.combiner_name} is not nondecreasing in argument {i}")


def schur_construct(spec: SchurSpec, n: int, *, seed: int = 0) -> TupleFunctional:
    """Functional F(lam(f_1), ..., lam(f_n)); verified spec makes it pass the
    pair-window check (>=) on any distributive carrier."""
    verify_schur_spec(spec, n, seed=seed)
    vals = {e: Fraction(spec.lam(e)) for e in spec.lattice.elements()}
    combiner = spec.combiner

    def fn(f):
        return combiner(tuple(vals[a] for a in f))

    return TupleFunctional(arity=n, fn=fn,
                           tag=f"schur({spec.lam_name},{spec.combiner_name})",
                           lattice=spec.lattice)


# --- set functions from relations ---

@dataclass(frozen=True)
class SetRelation:
    """Pairs (s, t) between two finite index sets; forward images of subsets
    of the source are unions, so measuring the image yields a submodular,
    nondecreasing set function."""

    pairs: frozenset
    source_size: int
    target_size: int

    def __post_init__(self):
        for s, t in self.pairs:
            if not (0 <= s < self.source_size and 0 <= t < self.target_size):
                raise InputError(f"relation pair ({s},{t}) out of range")

    def image(self, subset_indicator: Sequence) -> frozenset:
        return frozenset(t for s, t in self.pairs if subset_indicator[s] != 0)


def relation_image_measure(relation: SetRelation, target_weights: Sequence) -> Callable:
    """Map a source subset (0/1 indicator tuple) to the measure of its image.
    Submodular and nondecreasing; suitable as the one-argument map of a
    SchurSpec over an indicator lattice."""
    ws = tuple(as_scalar(w) for w in target_weights)
    if len(ws) != relation.target_size:
        raise InputError("target weights must match the relation's target size")
    for w in ws:
        require_nonneg(w, "target weight")
        if is_inf(w):
            raise InputError("target weights must be finite")

    def lam(indicator):
        if len(indicator) != relation.source_size:
            raise InputError("indicator length does not match the relation source")
        return sum((ws[t] for t in relation.image(indicator)), Fraction(0))

    return lam


# --- one-sided potentials ---

@dataclass
class PotentialSpec:
    """Monotone inner map, curved outer map, and a measure over the carrier's
    ground set.  The carrier is a lattice of possibly-negative values since
    the functional is built from argument differences."""

    carrier: FnLattice
    measure: Measure
    phi: Callable
    psi: Callable
    curvature: str  # "concave" or "convex"
    phi_name: str = "phi"
    psi_name: str = "psi"
    sign_mode: str = ""  # "sub" (>= direction) or "super" (<=); derived if empty

    def __post_init__(self):
        if self.curvature not in ("concave", "convex"):
            raise InputError("curvature must be 'concave' or 'convex'")
        if not self.sign_mode:
            self.sign_mode = "sub" if self.curvature == "concave" else "super"
        if self.sign_mode not in ("sub", "super"):
            raise InputError("sign_mode must be 'sub' or 'super'")
        if self.measure.size != self.carrier.ground.size:
            raise InputError("measure and carrier ground sets differ")


def _difference_values(carrier: FnLattice) -> list:
    chain = carrier.chain
    return sorted({a - b for a in chain for b in chain})


def verify_potential_spec(spec: PotentialSpec) -> None:
    """Check the inner map is monotone on all achievable differences and the
    outer map has the declared curvature on all achievable integral values.
    Raises with a witness on failure."""
    diffs = _difference_values(spec.carrier)
    phi_vals = [as_scalar(spec.phi(d)) for d in diffs]
    for v in phi_vals:
        require_nonneg(v, f"{spec.phi_name} value")
    nondecr = all(phi_vals[i] <= phi_vals[i + 1] for i in range(len(phi_vals) - 1))
    nonincr = all(phi_vals[i] >= phi_vals[i + 1] for i in range(len(phi_vals) - 1))
    if not (nondecr or nonincr):
        raise InputError(f"{spec.phi_name} is not monotone on the difference range")
    points = set()
    for g in product(diffs, repeat=spec.carrier.ground.size):
        vals = [as_scalar(spec.phi(d)) for d in g]
        if any(is_inf(v) for v in vals):
            continue
        points.add(spec.measure.integral(tuple(vals)))
    points = sorted(points)
    for u1, u2, u3 in zip(points, points[1:], points[2:]):
        left = (spec.psi(u2) - spec.psi(u1)) * (u3 - u2)
        right = (spec.psi(u3) - spec.psi(u2)) * (u2 - u1)
        if spec.curvature == "concave" and left < right:
            raise InputError(
                f"{spec.psi_name} is not concave at ({u1},{u2},{u3})")
        if spec.curvature == "convex" and left > right:
            raise InputError(
                f"{spec.psi_name} is not convex at ({u1},{u2},{u3})")


def potential_construct(spec: PotentialSpec, n: int) -> TupleFunctional:
    """Sum over all ordered argument pairs of the curved integral transform of
    their difference, normalized so the zero difference contributes zero
    (constant tuples evaluate to 0)."""
    verify_potential_spec(spec)
    memo: dict = {}
    zero = tuple(Fraction(0) for _ in range(spec.carrier.ground.size))

    def transform(g: tuple) -> Fraction:
        v = memo.get(g)
        if v is None:
            v = spec.psi(spec.measure.integral(tuple(spec.phi(x) for x in g)))
            memo[g] = v
        return v

    base = transform(zero)

    def fn(f):
        total = Fraction(0)
        for j in range(n):
            for k in range(n):
                if j == k:
                    continue
                d = tuple(a - b for a, b in zip(f[j], f[k]))
                total += transform(d) - base
        return total

    return TupleFunctional(arity=n, fn=fn,
                           tag=f"potential({spec.phi_name},{spec.psi_name},{spec.curvature})",
                           lattice=spec.carrier)


def potential_pair_transform(spec: PotentialSpec, g: tuple) -> Fraction:
    """Symmetrized transform of a difference function: value at g plus value
    at -g (normalization cancels in comparisons)."""
    def one(h):
        return spec.psi(spec.measure.integral(tuple(spec.phi(x) for x in h)))
    return one(g) + one(tuple(-x for x in g))


def potential_pair_inequality_check(spec: PotentialSpec, *, seed: int = 0,
                                    samples: int = 200) -> CheckReport:
    """Compare the symmetrized transform at f1 - f2 against its value at
    |f1 - f2| on sampled carrier pairs: <= under a convex outer map, >=
    under a concave one."""
    verify_potential_spec(spec)
    rng = random.Random(seed)
    elems = spec.carrier.elements()
    want_le = spec.curvature == "convex"
    first = None
    for _ in range(samples):
        f1 = elems[rng.randrange(len(elems))]
        f2 = elems[rng.randrange(len(elems))]
        d = tuple(a - b for a, b in zip(f1, f2))
        ad = tuple(abs(x) for x in d)
        lhs = potential_pair_transform(spec, d)
        rhs = potential_pair_transform(spec, ad)
        ok = lhs <= rhs if want_le else lhs >= rhs
        if not ok and first is None:
            first = Witness(args=(f1, f2), lhs=lhs, rhs=rhs,
                            note=f"curvature {spec.curvature}")
    return CheckReport(holds=first is None, instances_checked=samples,
                       witness=first, mode="sampled", seed=seed)


# --- multiadditive forms ---

@dataclass
class MultiadditiveFn:
    """A map on k-tuples of nonnegative function elements that is additive in
    every slot under the split f = (f meet g) + (f minus-below g)."""

    arity: int
    fn: Callable[..., Fraction]
    tag: str = ""
    nonneg: bool = True

    def __call__(self, *args):
        return self.fn(*args)


def verify_multiadditive(m: MultiadditiveFn, lattice: FnLattice, *, seed: int = 0,
                         samples: int = 60) -> None:
    """Spot-check slotwise additivity and nonnegativity on sampled tuples;
    raises with a witness on failure."""
    rng = random.Random(seed)
    elems = lattice.elements()
    k = m.arity

    def pick():
        return elems[rng.randrange(len(elems))]

    for _ in range(samples):
        slot = rng.randrange(k)
        fixed = [pick() for _ in range(k)]
        f, g = pick(), pick()
        with_f = list(fixed)
        with_f[slot] = f
        with_meet = list(fixed)
        with_meet[slot] = fn_meet(f, g)
        with_rest = list(fixed)
        with_rest[slot] = fn_diff(f, g)
        lhs = m.fn(*with_f)
        rhs = m.fn(*with_meet) + m.fn(*with_rest)
        if lhs != rhs:
            raise InputError(
                f"{m.tag or 'map'} is not additive in slot {slot}: "
                f"{lhs} != {rhs} at f={f}, g={g}")
        if m.nonneg and lhs < 0:
            raise InputError(f"{m.tag or 'map'} is negative at {with_f}")


def symmetrize(m: MultiadditiveFn) -> MultiadditiveFn:
    """Average over all argument orders; preserves multiadditivity and
    nonnegativity, and the result is permutation-symmetric."""
    k = m.arity
    scale = Fraction(1, math.factorial(k))

    def fn(*args):
        if len(args) != k:
            raise InputError(f"expected {k} arguments")
        return scale * sum((m.fn(*(args[i] for i in perm))
                            for perm in permutations(range(k))), Fraction(0))

    return MultiadditiveFn(arity=k, fn=fn, tag=f"sym({m.tag})", nonneg=m.nonneg)


def multiadd_symmetric_sum(m: MultiadditiveFn, n: int,
                           lattice: Optional[FnLattice] = None) -> TupleFunctional:
    """Sum of m over all injective placements of k of the n arguments;
    nonnegative multiadditive m makes this pass the pair-window check (>=)."""
    k = m.arity
    if k > n:
        raise InputError(f"multiadditive arity {k} exceeds tuple length {n}")
    memo: dict = {}

    def fn(f):
        total = Fraction(0)
        for perm in permutations(range(n), k):
            args = tuple(f[i] for i in perm)
            v = memo.get(args)
            if v is None:
                v = m.fn(*args)
                memo[args] = v
            total += v
        return total

    return TupleFunctional(arity=n, fn=fn, tag=f"multiadd({m.tag},k={k})",
                           lattice=lattice)


def multiadd_sum_via_symmetrized(m: MultiadditiveFn, n: int, f: Sequence) -> Fraction:
    """Equivalent evaluation k! * sum of the symmetrized form over index
    subsets; used to cross-check the direct permutation sum."""
    k = m.arity
    sym = symmetrize(m)
    total = Fraction(0)
    for I in combinations(range(n), k):
        total += sym.fn(*(f[i] for i in I))
    return math.factorial(k) * total


def product_of_integrals(measures: Sequence[Measure]) -> MultiadditiveFn:
    """m(f_1, ..., f_k) as the product of one integral per slot."""
    ms = list(measures)

    def fn(*args):
        if len(args) != len(ms):
            raise InputError(f"expected {len(ms)} arguments")
        out = Fraction(1)
        for mu, f in zip(ms, args):
            v = mu.integral(f)
            if is_inf(v):
                raise InputError("product-of-integrals needs finite integrals")
            out *= v
        return out

    return MultiadditiveFn(arity=len(ms), fn=fn, tag="prod-integrals")


def integral_of_product(measure: Measure, k: int) -> MultiadditiveFn:
    """m(f_1, ..., f_k) as the integral of the pointwise product."""

    def fn(*args):
        if len(args) != k:
            raise InputError(f"expected {k} arguments")
        total = Fraction(0)
        for s, w in enumerate(measure.weights):
            term = w
            for f in args:
                term *= f[s]
            total += term
        return total

    return MultiadditiveFn(arity=k, fn=fn, tag="integral-of-product")


def tensor_multiadditive(weights: dict, k: int, ground_size: int) -> MultiadditiveFn:
    """General multilinear form from sparse nonnegative weights on k-tuples of
    ground points."""
    table = {}
    for key, w in weights.items():
        key = tuple(key)
        if len(key) != k or any(not 0 <= s < ground_size for s in key):
            raise InputError(f"weight key {key!r} is not a valid point {k}-tuple")
        w = as_scalar(w)
        require_nonneg(w, "tensor weight")
        if is_inf(w):
            raise InputError("tensor weights must be finite")
        table[key] = w

    def fn(*args):
        if len(args) != k:
            raise InputError(f"expected {k} arguments")
        total = Fraction(0)
        for key, w in table.items():
            term = w
            for f, s in zip(args, key):
                term *= f[s]
            total += term
        return total

    return MultiadditiveFn(arity=k, fn=fn, tag="tensor")


# --- permanents ---

def permanent(matrix: Sequence[Sequence]) -> Fraction:
    """Permanent of a rectangular rational matrix: the sum over all injective
    column placements of row-entry products (transposed first when there are
    more rows than columns, keeping the value transposition-invariant)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows or not rows[0]:
        raise InputError("permanent needs a nonempty matrix")
    p = len(rows[0])
    if any(len(r) != p for r in rows):
        raise InputError("matrix rows must have equal length")
    if len(rows) > p:
        rows = [list(col) for col in zip(*rows)]
        p = len(rows[0])
    d = len(rows)
    # integer core: factor a common denominator out of each row
    scale = Fraction(1)
    int_rows = []
    for row in rows:
        denom = math.lcm(*(x.denominator for x in row))
        int_rows.append([int(x * denom) for x in row])
        scale *= denom
    total = 0
    for cols in permutations(range(p), d):
        term = 1
        for i, c in enumerate(cols):
            term *= int_rows[i][c]
            if term == 0:
                break
        total += term
    return Fraction(total) / scale


def _sorted_rows(matrix):
    cols = [sorted(col) for col in zip(*matrix)]
    return [[col[i] for col in cols] for i in range(len(matrix))]


def perm_orderstat_check(matrix: Sequence[Sequence]) -> CheckReport:
    """Verify the permanent does not increase when the rows are replaced by
    their pointwise order statistics, nor when the columns are."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    for row in rows:
        for x in row:
            require_nonneg(x, "matrix entry")
    base = permanent(rows)
    row_sorted = _sorted_rows(rows)
    col_sorted = [sorted(row) for row in rows]
    perm_rows = permanent(row_sorted)
    perm_cols = permanent(col_sorted)
    detail = {"permanent": base, "rows_sorted": perm_rows, "cols_sorted": perm_cols}
    if perm_rows > base:
        return CheckReport(holds=False, instances_checked=2,
                           witness=Witness(args=(tuple(map(tuple, rows)),),
                                           lhs=perm_rows, rhs=base, note="rows"),
                           detail=detail)
    if perm_cols > base:
        return CheckReport(holds=False, instances_checked=2,
                           witness=Witness(args=(tuple(map(tuple, rows)),),
                                           lhs=perm_cols, rhs=base, note="columns"),
                           detail=detail)
    return CheckReport(holds=True, instances_checked=2, detail=detail)


# --- elementary symmetric functions ---

def elementary_symmetric(k: int, xs: Sequence, mode: Optional[ConventionMode] = None) -> Scalar:
    """Sum over all k-element subsets of the product of the chosen entries."""
    vals = [as_scalar(x) for x in xs]
    n = len(vals)
    if not 1 <= k <= n:
        raise InputError(f"symmetric-function order {k} out of range 1..{n}")
    return ext_sum(ext_prod((vals[i] for i in J), mode) for J in combinations(range(n), k))


def esym_orderstat_check(measure: Measure, fs: Sequence, k: int,
                         mode: ConventionMode = ConventionMode.ZERO) -> CheckReport:
    """Elementary symmetric function of the integrals dominates its value on
    the integrals of the pointwise order statistics."""
    for f in fs:
        _require_nonneg_fn(f)
    mus = [measure.integral(f, mode) for f in fs]
    stats = pointwise_order_statistics(tuple(fs))
    mus_stats = [measure.integral(g, mode) for g in stats]
    lhs = elementary_symmetric(k, mus, mode)
    rhs = elementary_symmetric(k, mus_stats, mode)
    detail = {"integrals": mus, "stat_integrals": mus_stats}
    if lhs >= rhs:
        return CheckReport(holds=True, instances_checked=1, detail=detail)
    return CheckReport(holds=False, instances_checked=1,
                       witness=Witness(args=tuple(fs), lhs=lhs, rhs=rhs,
                                       note=f"k={k}"),
                       detail=detail)


# --- association on independent product spaces ---

def indep_association_check(marginals: Sequence[Sequence]) -> CheckReport:
    """Build the product space of independent finite-support nonnegative
    random values and verify the mean of the product of the coordinate
    order statistics dominates the product of their means."""
    supports = []
    for m_idx, marg in enumerate(marginals):
        pts = [(as_scalar(v), as_scalar(p)) for v, p in marg]
        total = Fraction(0)
        for v, p in pts:
            require_nonneg(v, "support value")
            require_nonneg(p, "probability")
            if is_inf(v) or is_inf(p):
                raise InputError("supports and probabilities must be finite")
            total += p
        if total != 1:
            raise InputError(f"marginal {m_idx} probabilities sum to {total}, not 1")
        supports.append(pts)
    n = len(supports)
    mean_of_prod = Fraction(0)
    stat_means = [Fraction(0)] * n
    for outcome in product(*supports):
        w = Fraction(1)
        for _, p in outcome:
            w *= p
        values = sorted(v for v, _ in outcome)
        term = Fraction(1)
        for v in values:
            term *= v
        mean_of_prod += w * term
        for j, v in enumerate(values):
            stat_means[j] += w * v
    rhs = Fraction(1)
    for v in stat_means:
        rhs *= v
    detail = {"mean_of_product": mean_of_prod, "stat_means": stat_means,
              "product_of_means": rhs}
    if mean_of_prod >= rhs:
        return CheckReport(holds=True, instances_checked=1, detail=detail)
    return CheckReport(holds=False, instances_checked=1,
                       witness=Witness(args=tuple(tuple(m) for m in marginals),
                                       lhs=mean_of_prod, rhs=rhs),
                       detail=detail)


# --- monotone transforms ---

def psi_transform_check(psi: Callable, direction: str, measure: Measure,
                        fs: Sequence,
                        mode: ConventionMode = ConventionMode.ZERO) -> CheckReport:
    """Product of integrals of a monotone transform of each argument versus
    the same product over the transformed order statistics.  A nondecreasing
    transform composes with the order statistics directly; a nonincreasing
    one reverses their order."""
    if direction not in ("nondecreasing", "nonincreasing"):
        raise InputError("direction must be 'nondecreasing' or 'nonincreasing'")
    for f in fs:
        _require_nonneg_fn(f)
    seen = sorted({as_scalar(v) for f in fs for v in f})
    imgs = [as_scalar(psi(v)) for v in seen]
    for v in imgs:
        require_nonneg(v, "transform value")
    for a, b in zip(imgs, imgs[1:]):
        if direction == "nondecreasing" and not a <= b:
            raise InputError("transform is not nondecreasing on the sampled values")
        if direction == "nonincreasing" and not a >= b:
            raise InputError("transform is not nonincreasing on the sampled values")
    n = len(fs)
    lhs = ext_prod((measure.integral(tuple(psi(v) for v in f), mode) for f in fs), mode)
    stats = pointwise_order_statistics(tuple(fs))
    if direction == "nondecreasing":
        composed = [tuple(psi(v) for v in stats[j]) for j in range(n)]
    else:
        composed = [tuple(psi(v) for v in stats[n - 1 - j]) for j in range(n)]
    rhs = ext_prod((measure.integral(g, mode) for g in composed), mode)
    if lhs >= rhs:
        return CheckReport(holds=True, instances_checked=1,
                           detail={"lhs": lhs, "rhs": rhs})
    return CheckReport(holds=False, instances_checked=1,
                       witness=Witness(args=tuple(fs), lhs=lhs, rhs=rhs,
                                       note=direction))


# --- power products ---

def _mpf_scalar(x: Scalar):
    import mpmath
    return mpmath.inf if is_inf(x) else mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)


def _mpf_pow(x, t):
    import mpmath
    if x == mpmath.inf:
        return mpmath.inf if t > 0 else mpmath.mpf(0)
    if x == 0:
        return mpmath.mpf(0) if t > 0 else mpmath.inf
    return mpmath.power(x, t)


def _mpf_prod(vals, mode: ConventionMode):
    import mpmath
    has_inf = any(v == mpmath.inf for v in vals)
    has_zero = any(v == 0 for v in vals)
    if has_inf and has_zero:
        return mpmath.inf if mode is ConventionMode.INF else mpmath.mpf(0)
    if has_inf:
        return mpmath.inf
    out = mpmath.mpf(1)
    for v in vals:
        out *= v
    return out


FLOAT_MODE_TOLERANCE = Fraction(1, 10 ** 9)


def power_inequality_check(p, r, measure: Measure, fs: Sequence) -> CheckReport:
    """Product over arguments of (integral of the p-th power) to the r-th
    power, against the same expression over the order statistics: dominating
    for positive r (zero rule for 0 * inf), dominated for negative r
    (infinity rule).  Zero to a negative power is infinity and infinity to a
    negative power is zero.

    Integer exponents run exactly; non-integer rational exponents run in
    high-precision floating point with comparisons widened by 1e-9.
    """
    p = p if isinstance(p, (int, Fraction)) else Fraction(p)
    r = r if isinstance(r, (int, Fraction)) else Fraction(r)
    if p == 0 or r == 0:
        raise InputError("exponents must be nonzero")
    for f in fs:
        _require_nonneg_fn(f)
    r_pos = r > 0
    mode = ConventionMode.ZERO if r_pos else ConventionMode.INF
    stats = pointwise_order_statistics(tuple(fs))
    exact = (isinstance(p, int) or p.denominator == 1) and \
            (isinstance(r, int) or r.denominator == 1)
    if exact:
        pi, ri = int(p), int(r)

        def side(elems):
            return ext_prod(
                (ext_pow(measure.integral(tuple(ext_pow(as_scalar(v), pi) for v in f),
                                          mode), ri)
                 for f in elems), mode)

        lhs, rhs = side(fs), side(stats)
        ok = lhs >= rhs if r_pos else lhs <= rhs
        detail = {"lhs": lhs, "rhs": rhs, "arithmetic": "exact"}
        if ok:
            return CheckReport(holds=True, instances_checked=1, detail=detail)
        return CheckReport(holds=False, instances_checked=1,
                           witness=Witness(args=tuple(fs), lhs=lhs, rhs=rhs,
                                           note=f"p={p}, r={r}"),
                           detail=detail)
    import mpmath
    with mpmath.workdps(40):
        pf, rf = mpmath.mpf(str(p)), mpmath.mpf(str(r))

        def side_f(elems):
            terms = []
            for f in elems:
                powed = [_mpf_pow(_mpf_scalar(as_scalar(v)), pf) for v in f]
                integ = mpmath.mpf(0)
                inf_hit = False
                for v, w in zip(powed, measure.weights):
                    wf = _mpf_scalar(w)
                    if v == mpmath.inf or wf == mpmath.inf:
                        if v == 0 or wf == 0:
                            if mode is ConventionMode.INF:
                                inf_hit = True
                            continue
                        inf_hit = True
                        continue
                    integ += v * wf
                terms.append(_mpf_pow(mpmath.inf if inf_hit else integ, rf))
            return _mpf_prod(terms, mode)

        lhs, rhs = side_f(fs), side_f(stats)
        tol = mpmath.mpf(1) / mpmath.mpf(10) ** 9
        if lhs == mpmath.inf or rhs == mpmath.inf:
            ok = (lhs >= rhs) if r_pos else (lhs <= rhs)
        else:
            ok = (lhs >= rhs - tol) if r_pos else (lhs <= rhs + tol)
        detail = {"lhs": float(lhs), "rhs": float(rhs),
                  "arithmetic": "float(tol=1e-9)"}
    if ok:
        return CheckReport(holds=True, instances_checked=1, detail=detail)
    return CheckReport(holds=False, instances_checked=1,
                       witness=Witness(args=tuple(fs), lhs=detail["lhs"],
                                       rhs=detail["rhs"], note=f"p={p}, r={r}"),
                       detail=detail)


# --- sup / inf products ---

def supinf_check(fs: Sequence) -> CheckReport:
    """Product of pointwise suprema dominates the same product over the order
    statistics (zero rule), and the product of infima is dominated by it
    (infinity rule)."""
    for f in fs:
        _require_nonneg_fn(f)
    stats = pointwise_order_statistics(tuple(fs))
    sups = [max(as_scalar(v) for v in f) for f in fs]
    infs = [min(as_scalar(v) for v in f) for f in fs]
    sup_stats = [max(as_scalar(v) for v in g) for g in stats]
    inf_stats = [min(as_scalar(v) for v in g) for g in stats]
    lhs_sup = ext_prod(sups, ConventionMode.ZERO)
    rhs_sup = ext_prod(sup_stats, ConventionMode.ZERO)
    lhs_inf = ext_prod(infs, ConventionMode.INF)
    rhs_inf = ext_prod(inf_stats, ConventionMode.INF)
    detail = {"sup_lhs": lhs_sup, "sup_rhs": rhs_sup,
              "inf_lhs": lhs_inf, "inf_rhs": rhs_inf}
    if not lhs_sup >= rhs_sup:
        return CheckReport(holds=False, instances_checked=2,
                           witness=Witness(args=tuple(fs), lhs=lhs_sup, rhs=rhs_sup,
                                           note="sup side"),
                           detail=detail)
    if not lhs_inf <= rhs_inf:
        return CheckReport(holds=False, instances_checked=2,
                           witness=Witness(args=tuple(fs), lhs=lhs_inf, rhs=rhs_inf,
                                           note="inf side"),
                           detail=detail)
    return CheckReport(holds=True, instances_checked=2, detail=detail)


# --- product measures of set tuples ---

def subset_order_statistics(sets: Sequence[frozenset], universe: int) -> tuple:
    """Order statistics on the subset lattice: a point lies in the j-th
    statistic (ascending) exactly when at least n+1-j of the inputs
    contain it."""
    n = len(sets)
    counts = [sum(1 for A in sets if s in A) for s in range(universe)]
    return tuple(frozenset(s for s in range(universe) if counts[s] >= n + 1 - j)
                 for j in range(1, n + 1))


def product_measure_check(weights: dict, sets: Sequence, k: int,
                          ground_size: int) -> CheckReport:
    """Sum over injective placements of k of the n sets of the weight of
    their Cartesian product; the order-statistic sets never beat the
    originals."""
    table = {}
    for key, w in weights.items():
        key = tuple(key)
        if len(key) != k or any(not 0 <= s < ground_size for s in key):
            raise InputError(f"weight key {key!r} is not a valid point {k}-tuple")
        w = as_scalar(w)
        require_nonneg(w, "product-measure weight")
        if is_inf(w):
            raise InputError("product-measure weights must be finite")
        table[key] = w
    fams = [frozenset(A) for A in sets]
    for A in fams:
        if any(not 0 <= s < ground_size for s in A):
            raise InputError("set contains points outside the ground set")
    n = len(fams)
    if k > n:
        raise InputError(f"product arity {k} exceeds the number of sets {n}")

    def box_measure(box):
        return sum((w for key, w in table.items()
                    if all(s in B for s, B in zip(key, box))), Fraction(0))

    def perm_sum(family):
        return sum((box_measure([family[i] for i in perm])
                    for perm in permutations(range(n), k)), Fraction(0))

    stats = subset_order_statistics(fams, ground_size)
    original = perm_sum(fams)
    rearranged = perm_sum(list(stats))
    detail = {"original_sum": original, "orderstat_sum": rearranged}
    if rearranged <= original:
        return CheckReport(holds=True, instances_checked=1, detail=detail)
    return CheckReport(holds=False, instances_checked=1,
                       witness=Witness(args=tuple(sorted(tuple(sorted(A)) for A in fams)),
                                       lhs=rearranged, rhs=original),
                       detail=detail)
