"""Correlation inequalities on finite function lattices: multiplicative
log-supermodularity, the FKG inequality with verified preconditions, the
n-family extension with order-statistic set families, and the demonstration
that the negative-power / infimum instances do not reverse.

Log-supermodularity is checked multiplicatively (products, never logs) so
zero weights stay exact; infinite weights are resolved by the infinity rule
that the negative-power instances carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .constructions import Measure
from .lattice import fn_join, fn_leq, fn_meet, pointwise_order_statistics
from .report import CheckReport, Witness
from .scalars import (
    BudgetExceededError,
    ConventionMode,
    InputError,
    Scalar,
    as_scalar,
    ext_mul,
    ext_pow,
    ext_prod,
    ext_sum,
    is_inf,
    parse_rational,
    require_nonneg,
)

DEFAULT_FAMILY_BUDGET = 10 ** 6


class ExplicitSublattice:
    """A finite set of function elements verified closed under pointwise
    min and max."""

    def __init__(self, elements: Sequence[tuple]):
        elems = []
        seen = set()
        for e in elements:
            e = tuple(as_scalar(v) for v in e)
            if e not in seen:
                seen.add(e)
                elems.append(e)
        if not elems:
            raise InputError("sublattice must be nonempty")
        width = len(elems[0])
        if any(len(e) != width for e in elems):
            raise InputError("sublattice elements must share one ground set")
        for a in elems:
            for b in elems:
                m, j = fn_meet(a, b), fn_join(a, b)
                if m not in seen:
                    raise InputError(f"not meet-closed: {a} meet {b} = {m} is missing")
                if j not in seen:
                    raise InputError(f"not join-closed: {a} join {b} = {j} is missing")
        self._elems = elems
        self.width = width

    @classmethod
    def closure(cls, seeds: Sequence[tuple], max_size: int = 64) -> "ExplicitSublattice":
        """Close a seed set under pointwise min and max."""
        current = {tuple(as_scalar(v) for v in e) for e in seeds}
        while True:
            new = set()
            for a in current:
                for b in current:
                    for c in (fn_meet(a, b), fn_join(a, b)):
                        if c not in current:
                            new.add(c)
            if not new:
                break
            current |= new
            if len(current) > max_size:
                raise BudgetExceededError(f"closure exceeded {max_size} elements")
        return cls(sorted(current))

    @property
    def size(self) -> int:
        return len(self._elems)

    def elements(self) -> list:
        return list(self._elems)

    def contains(self, a) -> bool:
        return tuple(a) in set(self._elems)

    def meet(self, a, b):
        return fn_meet(a, b)

    def join(self, a, b):
        return fn_join(a, b)

    def leq(self, a, b) -> bool:
        return fn_leq(a, b)


@dataclass(frozen=True)
class LatticeWeight:
    """Nonnegative weights on lattice elements; aggregates pair a function
    with the weights pointwise and sum."""

    weights: dict

    def __post_init__(self):
        clean = {}
        for e, w in self.weights.items():
            w = as_scalar(w)
            require_nonneg(w, "lattice weight")
            clean[tuple(e)] = w
        object.__setattr__(self, "weights", clean)

    def __call__(self, e) -> Scalar:
        return self.weights[tuple(e)]

    def aggregate(self, func: Callable, elements: Sequence,
                  mode: Optional[ConventionMode] = None) -> Scalar:
        return ext_sum(ext_mul(as_scalar(func(e)), self(e), mode) for e in elements)


def _as_func(f):
    if callable(f):
        return f
    table = {tuple(k): v for k, v in dict(f).items()}
    return lambda e: table[tuple(e)]


def is_log_supermodular(nu, L, mode: Optional[ConventionMode] = None) -> CheckReport:
    """All pairs satisfy weight(meet) * weight(join) >= weight(f) * weight(g)."""
    nu = _as_func(nu)
    elems = L.elements()
    checked = 0
    first = None
    for f in elems:
        for g in elems:
            checked += 1
            lhs = ext_mul(as_scalar(nu(L.meet(f, g))), as_scalar(nu(L.join(f, g))), mode)
            rhs = ext_mul(as_scalar(nu(f)), as_scalar(nu(g)), mode)
            if not lhs >= rhs and first is None:
                first = Witness(args=(f, g), lhs=lhs, rhs=rhs)
    return CheckReport(holds=first is None, instances_checked=checked, witness=first)


def _check_nondecreasing(func, name, L) -> Optional[Witness]:
    elems = L.elements()
    for f in elems:
        for g in elems:
            if L.leq(f, g) and not as_scalar(func(f)) <= as_scalar(func(g)):
                return Witness(args=(f, g), lhs=func(f), rhs=func(g),
                               note=f"{name} is not nondecreasing")
    return None


def fkg_check(L, nu, F, G, mode: Optional[ConventionMode] = None) -> CheckReport:
    """The four-sum correlation inequality: with a log-supermodular weight
    and nondecreasing F and G,
    sum(F*G*w) * sum(w) >= sum(F*w) * sum(G*w).
    Precondition failures are reported with their witnesses rather than
    asserted away."""
    nu, F, G = _as_func(nu), _as_func(F), _as_func(G)
    elems = L.elements()
    logsup = is_log_supermodular(nu, L, mode)
    if not logsup.holds:
        return CheckReport(holds=False, instances_checked=logsup.instances_checked,
                           witness=logsup.witness,
                           detail={"precondition_failed": "log-supermodularity"})
    for func, name in ((F, "F"), (G, "G")):
        w = _check_nondecreasing(func, name, L)
        if w is not None:
            return CheckReport(holds=False, instances_checked=logsup.instances_checked,
                               witness=w, detail={"precondition_failed": "monotonicity"})
    has_inf_weight = any(is_inf(as_scalar(nu(e))) for e in elems)
    if has_inf_weight:
        for func, name in ((F, "F"), (G, "G")):
            for e in elems:
                require_nonneg(as_scalar(func(e)),
                               f"{name} value (required with infinite weights)")

    def agg(func):
        return ext_sum(ext_mul(as_scalar(func(e)), as_scalar(nu(e)), mode)
                       for e in elems)

    s_fg = agg(lambda e: as_scalar(F(e)) * as_scalar(G(e)))
    s_1 = agg(lambda e: Fraction(1))
    s_f = agg(F)
    s_g = agg(G)
    lhs = ext_mul(s_fg, s_1, mode)
    rhs = ext_mul(s_f, s_g, mode)
    detail = {"sum_FG": s_fg, "sum_1": s_1, "sum_F": s_f, "sum_G": s_g}
    checked = logsup.instances_checked + 1
    if lhs >= rhs:
        return CheckReport(holds=True, instances_checked=checked, detail=detail)
    return CheckReport(holds=False, instances_checked=checked,
                       witness=Witness(args=(), lhs=lhs, rhs=rhs, note="four-sum"),
                       detail=detail)


def power_weight(measure: Measure, r: int) -> Callable:
    """h -> integral(h) ** r for a negative integer r (zero integrals map to
    infinity)."""
    if not isinstance(r, int) or r >= 0:
        raise InputError(f"power weight needs a negative integer exponent, got {r!r}")

    def nu(h):
        return ext_pow(measure.integral(h, ConventionMode.INF), r)

    return nu


def inf_weight() -> Callable:
    """h -> pointwise infimum of h."""
    return lambda h: min(as_scalar(v) for v in h)


def corollary_fkg_check(L, F, G, *, measure: Optional[Measure] = None,
                        r: Optional[int] = None, use_inf: bool = False) -> CheckReport:
    """FKG instance with the negative-power-of-the-integral weight or the
    pointwise-infimum weight."""
    if use_inf:
        nu = inf_weight()
        tag = "inf"
    else:
        if measure is None or r is None:
            raise InputError("power mode needs a measure and a negative integer r")
        if r >= 0:
            raise InputError(f"exponent must be negative, got {r}")
        nu = power_weight(measure, r)
        tag = f"power(r={r})"
    out = fkg_check(L, nu, F, G, ConventionMode.INF)
    out.detail["weight"] = tag
    return out


def orderstat_family(families: Sequence[Sequence[tuple]], *,
                     budget: int = DEFAULT_FAMILY_BUDGET) -> tuple:
    """The j-th output collects the j-th order statistic of every tuple in
    the product of the input families, deduplicated."""
    fams = [list(dict.fromkeys(tuple(tuple(as_scalar(v) for v in e) for e in fam)))
            for fam in families]
    if not fams or any(not fam for fam in fams):
        raise InputError("families must be nonempty")
    width = len(fams[0][0])
    for fam in fams:
        if any(len(e) != width for e in fam):
            raise InputError("family elements must share one ground set")
    total = 1
    for fam in fams:
        total *= len(fam)
    if total > budget:
        raise BudgetExceededError(f"family product of size {total} exceeds budget {budget}")
    n = len(fams)
    out = [set() for _ in range(n)]
    for f in product(*fams):
        stats = pointwise_order_statistics(f)
        for j in range(n):
            out[j].add(stats[j])
    return tuple(sorted(s) for s in out)


def aharoni_keich_check(alphas: Sequence, betas: Sequence,
                        families: Sequence[Sequence[tuple]], *,
                        mode: Optional[ConventionMode] = None,
                        budget: int = DEFAULT_FAMILY_BUDGET) -> CheckReport:
    """n-family four-function extension.  First verifies the pointwise
    hypothesis prod(alpha_j(f_j)) <= prod(beta_j(stats_j)) over the family
    product; when it fails the conclusion is not asserted (both sides are
    still reported as informational).  When it holds, verifies
    prod_j sum(alpha_j over family_j) <= prod_j sum(beta_j over stat family_j).
    """
    n = len(families)
    if len(alphas) != n or len(betas) != n:
        raise InputError("need one alpha and one beta per family")
    alphas = [_as_func(a) for a in alphas]
    betas = [_as_func(b) for b in betas]
    fams = [[tuple(as_scalar(v) for v in e) for e in fam] for fam in families]
    stat_fams = orderstat_family(fams, budget=budget)

    def val(func, e, name):
        v = as_scalar(func(e))
        require_nonneg(v, f"{name} value")
        return v

    lhs = ext_prod((ext_sum(val(alphas[j], e, "alpha") for e in fams[j])
                    for j in range(n)), mode)
    rhs = ext_prod((ext_sum(val(betas[j], e, "beta") for e in stat_fams[j])
                    for j in range(n)), mode)

    checked = 0
    hyp_witness = None
    for f in product(*fams):
        checked += 1
        stats = pointwise_order_statistics(f)
        h_lhs = ext_prod((val(alphas[j], f[j], "alpha") for j in range(n)), mode)
        h_rhs = ext_prod((val(betas[j], stats[j], "beta") for j in range(n)), mode)
        if not h_lhs <= h_rhs and hyp_witness is None:
            hyp_witness = Witness(args=f, lhs=h_lhs, rhs=h_rhs,
                                  note="pointwise hypothesis violated")
    if hyp_witness is not None:
        return CheckReport(holds=False, instances_checked=checked,
                           witness=hyp_witness,
                           detail={"hypothesis_violated": True,
                                   "informational_lhs": lhs,
                                   "informational_rhs": rhs})
    detail = {"lhs": lhs, "rhs": rhs,
              "stat_family_sizes": [len(s) for s in stat_fams]}
    if lhs <= rhs:
        return CheckReport(holds=True, instances_checked=checked + 1, detail=detail)
    return CheckReport(holds=False, instances_checked=checked + 1,
                       witness=Witness(args=(), lhs=lhs, rhs=rhs, note="sum products"),
                       detail=detail)


def corollary_ahke_check(families: Sequence[Sequence[tuple]], *,
                         measure: Optional[Measure] = None,
                         r: Optional[int] = None, use_inf: bool = False,
                         budget: int = DEFAULT_FAMILY_BUDGET) -> CheckReport:
    """Family inequality with alpha = beta = the negative-power-of-integral
    weight, or the pointwise-infimum weight."""
    if use_inf:
        nu = inf_weight()
        tag = "inf"
    else:
        if measure is None or r is None:
            raise InputError("power mode needs a measure and a negative integer r")
        if not isinstance(r, int) or r >= 0:
            raise InputError(f"exponent must be a negative integer, got {r!r}")
        nu = power_weight(measure, r)
        tag = f"power(r={r})"
    n = len(families)
    out = aharoni_keich_check([nu] * n, [nu] * n, families,
                              mode=ConventionMode.INF, budget=budget)
    out.detail["weight"] = tag
    return out


def nonreversibility_demo(N: int, delta, eps, r: int = 1) -> dict:
    """Two families on an (N+1)-point grid under the uniform probability
    measure: N near-one constants against N two-level step functions.  Both
    order-statistic families blow up to N^2 elements, so the sum-product on
    the order-statistic side scales like N^4 against N^2 on the original
    side; the exact ratio is reported.
    """
    delta = parse_rational(delta) if not isinstance(delta, Fraction) else delta
    eps = parse_rational(eps) if not isinstance(eps, Fraction) else eps
    if N < 1:
        raise InputError("N must be at least 1")
    if not 0 < eps < delta < 1:
        raise InputError("parameters must satisfy 0 < eps < delta < 1")
    if not isinstance(r, int):
        raise InputError("r must be an integer for exact evaluation")
    points = N + 1
    mu = Measure.uniform(points)
    one = Fraction(1)
    constants = [tuple(one + eps * Fraction(2 * i - N - 1, 2 * N) for _ in range(points))
                 for i in range(1, N + 1)]
    steps = [tuple((one - delta) if s <= j else (one + delta)
                   for s in range(1, points + 1))
             for j in range(1, N + 1)]
    fam1, fam2 = orderstat_family([constants, steps])

    def weight_sum(elems):
        return ext_sum(ext_pow(mu.integral(e), r) for e in elems)

    lhs = ext_mul(weight_sum(constants), weight_sum(steps), ConventionMode.INF)
    rhs = ext_mul(weight_sum(fam1), weight_sum(fam2), ConventionMode.INF)
    ratio = None
    if not is_inf(lhs) and not is_inf(rhs) and lhs != 0:
        ratio = rhs / lhs
    return {
        "N": N,
        "delta": delta,
        "eps": eps,
        "r": r,
        "grid_points": points,
        "family_sizes": (len(constants), len(steps)),
        "stat_family_sizes": (len(fam1), len(fam2)),
        "expected_stat_size": N * N,
        "lhs": lhs,
        "rhs": rhs,
        "ratio": ratio,
        "ratio_float": float(ratio) if ratio is not None else None,
        "sizes_are_n_squared": len(fam1) == N * N and len(fam2) == N * N,
    }
