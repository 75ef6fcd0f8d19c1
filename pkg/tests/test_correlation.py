import random
from fractions import Fraction

import pytest

from latstat import (
    BudgetExceededError,
    ConventionMode,
    ExplicitSublattice,
    InputError,
    LatticeWeight,
    Measure,
    aharoni_keich_check,
    corollary_ahke_check,
    corollary_fkg_check,
    fkg_check,
    is_log_supermodular,
    nonreversibility_demo,
    orderstat_family,
    pointwise_order_statistics,
    power_inequality_check,
)
from latstat.correlation import inf_weight, power_weight
from latstat.generators import (
    rand_measure,
    random_families,
    random_monotone_func,
    random_sublattice,
)


def boolean_square():
    return ExplicitSublattice([(0, 0), (0, 1), (1, 0), (1, 1)])


# --- sublattice plumbing ---

def test_sublattice_requires_closure():
    with pytest.raises(InputError):
        ExplicitSublattice([(0, 1), (1, 0)])  # missing meet and join
    sub = ExplicitSublattice.closure([(0, 1), (1, 0)])
    assert sub.size == 4


def test_sublattice_closure_budget():
    with pytest.raises(BudgetExceededError):
        ExplicitSublattice.closure(
            [tuple(Fraction(v == i) for v in range(8)) for i in range(8)],
            max_size=10)


# --- log-supermodularity ---

def test_constant_weight_is_log_supermodular():
    sub = boolean_square()
    report = is_log_supermodular(lambda h: Fraction(1), sub)
    assert report.holds
    assert report.instances_checked == 16


def test_reciprocal_integral_weight_is_log_supermodular():
    rng = random.Random(1)
    for _ in range(20):
        sub = random_sublattice(rng)
        mu = rand_measure(rng, sub.width)
        report = is_log_supermodular(power_weight(mu, -1), sub, ConventionMode.INF)
        assert report.holds, report.witness


def test_inf_weight_is_log_supermodular():
    rng = random.Random(2)
    for _ in range(20):
        sub = random_sublattice(rng)
        report = is_log_supermodular(inf_weight(), sub, ConventionMode.INF)
        assert report.holds, report.witness


def test_log_supermodular_counterexample_detected():
    sub = boolean_square()
    # weight 1 everywhere except 0 at the top breaks the pair (01, 10)
    weights = {(0, 0): Fraction(1), (0, 1): Fraction(1),
               (1, 0): Fraction(1), (1, 1): Fraction(0)}
    report = is_log_supermodular(LatticeWeight(weights), sub)
    assert not report.holds
    f, g = report.witness.args
    assert {f, g} == {(0, 1), (1, 0)}


def test_multiplicative_matches_log_form_on_positive_weights():
    import math
    rng = random.Random(3)
    sub = random_sublattice(rng, positive=True)
    nu = {e: rand_fraction_positive(rng) for e in sub.elements()}
    report = is_log_supermodular(LatticeWeight(nu), sub)
    log_ok = all(
        math.log(nu[sub.meet(f, g)]) + math.log(nu[sub.join(f, g)])
        >= math.log(nu[f]) + math.log(nu[g]) - 1e-12
        for f in sub.elements() for g in sub.elements())
    assert report.holds == log_ok


def rand_fraction_positive(rng):
    return Fraction(rng.randint(1, 8), rng.randint(1, 8))


# --- FKG ---

def test_fkg_on_chains_any_weight():
    # totally ordered sublattices satisfy the hypothesis for every weight
    rng = random.Random(4)
    for _ in range(20):
        base = tuple(sorted(rng.randint(0, 3) for _ in range(3)))
        chain = {tuple(Fraction(v + k) for v in base) for k in range(3)}
        sub = ExplicitSublattice(sorted(chain))
        nu = {e: Fraction(rng.randint(0, 5)) for e in sub.elements()}
        F = random_monotone_func(rng, sub.width)
        G = random_monotone_func(rng, sub.width)
        report = fkg_check(sub, LatticeWeight(nu), F, G)
        assert report.holds, report.witness


def test_fkg_constant_factor_gives_equality():
    sub = boolean_square()
    nu = lambda h: Fraction(1)
    F = lambda h: Fraction(3)
    G = lambda h: Fraction(h[0]) + Fraction(h[1])
    report = fkg_check(sub, nu, F, G)
    assert report.holds
    lhs = report.detail["sum_FG"] * report.detail["sum_1"]
    rhs = report.detail["sum_F"] * report.detail["sum_G"]
    assert lhs == rhs


def test_fkg_boolean_square_against_enumeration_oracle():
    sub = boolean_square()
    rng = random.Random(5)
    for _ in range(30):
        # product weights are log-supermodular on the square
        a, b = rand_fraction_positive(rng), rand_fraction_positive(rng)

        def nu(h):
            return (a if h[0] else Fraction(1)) * (b if h[1] else Fraction(1))

        F = random_monotone_func(rng, 2)
        G = random_monotone_func(rng, 2)
        report = fkg_check(sub, nu, F, G)
        elems = sub.elements()
        lhs = sum(F(e) * G(e) * nu(e) for e in elems) * sum(nu(e) for e in elems)
        rhs = sum(F(e) * nu(e) for e in elems) * sum(G(e) * nu(e) for e in elems)
        assert report.holds == (lhs >= rhs)
        assert report.holds


def test_fkg_reports_precondition_failures():
    sub = boolean_square()
    bad_nu = {(0, 0): Fraction(1), (0, 1): Fraction(1),
              (1, 0): Fraction(1), (1, 1): Fraction(0)}
    report = fkg_check(sub, LatticeWeight(bad_nu), lambda h: Fraction(1),
                       lambda h: Fraction(1))
    assert not report.holds
    assert report.detail["precondition_failed"] == "log-supermodularity"

    def not_monotone(h):
        return -Fraction(h[0])

    report = fkg_check(sub, lambda h: Fraction(1), not_monotone,
                       lambda h: Fraction(1))
    assert not report.holds
    assert report.detail["precondition_failed"] == "monotonicity"


def test_corollary_fkg_power_and_inf_modes():
    rng = random.Random(6)
    for i in range(20):
        sub = random_sublattice(rng, positive=True)
        F = random_monotone_func(rng, sub.width)
        G = random_monotone_func(rng, sub.width)
        if i % 2:
            report = corollary_fkg_check(sub, F, G,
                                         measure=rand_measure(rng, sub.width), r=-1)
        else:
            report = corollary_fkg_check(sub, F, G, use_inf=True)
        assert report.holds, report.witness


def test_corollary_fkg_rejects_nonnegative_r():
    sub = boolean_square()
    with pytest.raises(InputError):
        corollary_fkg_check(sub, lambda h: Fraction(1), lambda h: Fraction(1),
                            measure=Measure.counting(2), r=1)


# --- order-statistic families ---

def test_orderstat_family_singletons():
    f1, f2 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(2))
    fams = orderstat_family([[f1], [f2]])
    stats = pointwise_order_statistics((f1, f2))
    assert fams == ([stats[0]], [stats[1]])


def test_orderstat_family_size_bound():
    rng = random.Random(7)
    fams_in = random_families(rng, n=3, width=2, max_family=3)
    fams = orderstat_family(fams_in)
    bound = 1
    for fam in fams_in:
        bound *= len(fam)
    for out in fams:
        assert 1 <= len(out) <= bound


def test_orderstat_family_budget():
    fam = [[(Fraction(v),) for v in range(10)]] * 7
    with pytest.raises(BudgetExceededError):
        orderstat_family(fam, budget=100)


# --- the n-family inequality ---

def test_ahke_with_unit_functions_counts_family_sizes():
    rng = random.Random(8)
    fams = random_families(rng, n=3, width=2, max_family=3)
    one = lambda h: Fraction(1)
    report = aharoni_keich_check([one] * 3, [one] * 3, fams)
    assert report.holds
    stat_sizes = report.detail["stat_family_sizes"]
    lhs = 1
    for fam in fams:
        lhs *= len(fam)
    rhs = 1
    for s in stat_sizes:
        rhs *= s
    assert report.detail["lhs"] == lhs
    assert report.detail["rhs"] == rhs
    assert lhs <= rhs


def test_ahke_singletons_hypothesis_equals_conclusion():
    f1, f2 = (Fraction(2), Fraction(0)), (Fraction(1), Fraction(3))
    mu = Measure.counting(2)
    report = corollary_ahke_check([[f1], [f2]], measure=mu, r=-1)
    assert report.holds
    inner = power_inequality_check(1, -1, mu, [f1, f2])
    assert inner.holds
    assert report.detail["lhs"] == inner.detail["lhs"]
    assert report.detail["rhs"] == inner.detail["rhs"]


def test_ahke_hypothesis_violation_reported_not_asserted():
    fams = [[(Fraction(1),)], [(Fraction(2),)]]
    big = lambda h: Fraction(10)
    small = lambda h: Fraction(1)
    report = aharoni_keich_check([big, big], [small, small], fams)
    assert not report.holds
    assert report.detail["hypothesis_violated"]
    assert report.witness.note == "pointwise hypothesis violated"
    assert "informational_lhs" in report.detail


def test_corollary_ahke_random_power_and_inf():
    rng = random.Random(9)
    for i in range(20):
        n = rng.randint(2, 3)
        width = rng.randint(1, 3)
        fams = random_families(rng, n=n, width=width)
        if i % 2:
            report = corollary_ahke_check(fams, measure=rand_measure(rng, width),
                                          r=-rng.randint(1, 2))
        else:
            report = corollary_ahke_check(fams, use_inf=True)
        assert report.holds, (fams, report.witness)


def test_corollary_ahke_rejects_bad_r():
    fams = [[(Fraction(1),)]]
    with pytest.raises(InputError):
        corollary_ahke_check(fams, measure=Measure.counting(1), r=0)
    with pytest.raises(InputError):
        corollary_ahke_check(fams, measure=Measure.counting(1), r=Fraction(-1, 2))


def test_fkg_never_fails_when_preconditions_pass_bulk():
    # falsification would mean an implementation bug, not new mathematics
    rng = random.Random(1009)
    verified = 0
    attempts = 0
    while verified < 1000 and attempts < 2500:
        attempts += 1
        sub = random_sublattice(rng, width=rng.randint(1, 2), chain_top=2,
                                positive=bool(attempts % 2), seeds=3)
        F = random_monotone_func(rng, sub.width)
        G = random_monotone_func(rng, sub.width)
        kind = attempts % 3
        if kind == 0:
            weights = LatticeWeight({e: Fraction(rng.randint(0, 4))
                                     for e in sub.elements()})
            report = fkg_check(sub, weights, F, G)
            if report.detail.get("precondition_failed"):
                continue
        elif kind == 1:
            report = corollary_fkg_check(sub, F, G,
                                         measure=rand_measure(rng, sub.width), r=-1)
        else:
            report = corollary_fkg_check(sub, F, G, use_inf=True)
        assert report.holds, report.witness
        verified += 1
    assert verified >= 1000


def test_two_family_case_specializes_to_four_sum_regime():
    # with two families and alpha = beta = a log-supermodular weight, the
    # family inequality sits in the classical four-function regime; both the
    # family check and the four-sum check must hold on the same data
    rng = random.Random(1013)
    for _ in range(50):
        sub = random_sublattice(rng, width=2, chain_top=2, positive=True)
        mu = rand_measure(rng, sub.width)
        nu = power_weight(mu, -1)
        elems = sub.elements()
        fam1 = sorted({elems[rng.randrange(len(elems))] for _ in range(2)})
        fam2 = sorted({elems[rng.randrange(len(elems))] for _ in range(2)})
        family_report = aharoni_keich_check([nu, nu], [nu, nu], [fam1, fam2],
                                            mode=ConventionMode.INF)
        assert family_report.holds, family_report.witness
        F = random_monotone_func(rng, sub.width)
        G = random_monotone_func(rng, sub.width)
        four_sum = corollary_fkg_check(sub, F, G, measure=mu, r=-1)
        assert four_sum.holds, four_sum.witness


# --- non-reversibility ---

def test_nonrev_exact_numbers():
    demo = nonreversibility_demo(3, Fraction(1, 1000), Fraction(1, 10000), 1)
    assert demo["stat_family_sizes"] == (9, 9)
    assert demo["lhs"] == 9
    assert abs(demo["ratio"] / 9 - 1) <= Fraction(1, 10)


def test_nonrev_single_element_families():
    # singleton families: sizes collapse to 1 = N^2 and the two sides agree
    # up to the exact defect delta^2/4 (ratio -> 1 as delta -> 0)
    delta = Fraction(1, 100)
    demo = nonreversibility_demo(1, delta, Fraction(1, 1000), 1)
    assert demo["stat_family_sizes"] == (1, 1)
    assert demo["ratio"] == 1 - delta ** 2 / 4
    tiny = Fraction(1, 10 ** 6)
    demo = nonreversibility_demo(1, tiny, Fraction(1, 10 ** 7), 1)
    assert abs(demo["ratio"] - 1) < Fraction(1, 10 ** 12)


def test_nonrev_parameter_validation():
    with pytest.raises(InputError):
        nonreversibility_demo(0, Fraction(1, 10), Fraction(1, 100), 1)
    with pytest.raises(InputError):
        nonreversibility_demo(3, Fraction(1, 1000), Fraction(1, 100), 1)  # eps > delta
    with pytest.raises(InputError):
        nonreversibility_demo(3, Fraction(2), Fraction(1, 100), 1)  # delta >= 1
