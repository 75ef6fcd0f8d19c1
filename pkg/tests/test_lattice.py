import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from latstat import (
    FnLattice,
    InputError,
    TableLattice,
    birkhoff_embed,
    build_m3,
    is_distributive,
    join,
    leq,
    meet,
    order_statistics,
    order_statistics_dual,
    order_statistics_dual_tuple,
    order_statistics_tuple,
    pointwise_order_statistics,
    product_of_chains,
    validate_table_lattice,
)
from latstat.lattice import fn_diff, fn_join, fn_meet


@pytest.fixture(scope="module")
def m3():
    return build_m3()


@pytest.fixture(scope="module")
def fn22():
    return FnLattice.zero_to(2, 3)


def lab(m3, *labels):
    return tuple(m3.id_of(x) for x in labels)


# --- meet / join / leq ---

def test_fn_meet_join_pointwise(fn22):
    assert meet(fn22, (2, 0), (1, 3)) == (1, 0)
    assert join(fn22, (2, 0), (1, 3)) == (2, 3)
    assert meet(fn22, (2, 1), (2, 1)) == (2, 1)
    assert join(fn22, (2, 1), (2, 1)) == (2, 1)


def test_m3_meet_join_labels(m3):
    a, b = lab(m3, 2, 3)
    assert m3.label_of(meet(m3, a, b)) == 1
    assert m3.label_of(join(m3, a, b)) == 5
    c, d = lab(m3, 2, 4)
    assert m3.label_of(meet(m3, c, d)) == 1
    e, f = lab(m3, 3, 4)
    assert m3.label_of(join(m3, e, f)) == 5


def test_leq(m3, fn22):
    assert leq(fn22, (1, 0), (1, 3))
    assert not leq(fn22, (2, 0), (1, 3))
    a, b = lab(m3, 2, 3)
    assert not leq(m3, a, b)
    assert leq(m3, a, a)
    bot, top = lab(m3, 1, 5)
    assert leq(m3, bot, top)


def test_membership_errors(fn22, m3):
    with pytest.raises(InputError):
        meet(fn22, (9, 9), (0, 0))
    with pytest.raises(InputError):
        join(m3, 0, 17)


# --- table validation ---

def test_validate_m3_and_chain(m3):
    assert validate_table_lattice(m3).holds
    chain = product_of_chains([2])
    assert validate_table_lattice(chain).holds


def test_validate_catches_broken_commutativity():
    chain = product_of_chains([3])
    bad_join = [row[:] for row in chain._join]
    bad_join[0][2] = 0  # join(0,2) != join(2,0)
    bad = TableLattice(3, chain._meet, bad_join)
    report = validate_table_lattice(bad)
    assert not report.holds
    assert "commut" in report.witness.note or "absorption" in report.witness.note


def test_table_constructor_rejects_malformed():
    with pytest.raises(InputError):
        TableLattice(2, [[0, 0]], [[0, 1], [1, 1]])
    with pytest.raises(InputError):
        TableLattice(2, [[0, 0], [0, 5]], [[0, 1], [1, 1]])


# --- distributivity ---

def test_m3_not_distributive_with_valid_witness(m3):
    report = is_distributive(m3)
    assert not report.holds
    a, b, c = report.witness.args
    lhs = m3.meet(a, m3.join(b, c))
    rhs = m3.join(m3.meet(a, b), m3.meet(a, c))
    assert lhs != rhs
    assert report.instances_checked == 5 ** 3


def test_fn_lattices_distributive(fn22):
    assert is_distributive(FnLattice.zero_to(1, 2)).holds
    assert is_distributive(fn22).holds


def test_boolean_cube_distributive():
    assert is_distributive(product_of_chains([2, 2, 2])).holds


# --- order statistics ---

def test_order_statistics_on_a_chain():
    L = FnLattice.zero_to(1, 3)
    f = ((3,), (1,), (2,))
    assert order_statistics_tuple(L, f) == ((1,), (2,), (3,))
    assert order_statistics(L, f, 1) == (1,)
    assert order_statistics(L, f, 3) == (3,)


def test_order_statistics_on_m3(m3):
    f = lab(m3, 2, 3, 4)
    stats = order_statistics_tuple(m3, f)
    assert tuple(m3.label_of(x) for x in stats) == (1, 5, 5)
    dual = order_statistics_dual_tuple(m3, f)
    assert tuple(m3.label_of(x) for x in dual) == (1, 1, 5)


def test_order_statistics_extremes(fn22):
    elems = fn22.elements()
    rng = random.Random(3)
    for _ in range(50):
        f = tuple(elems[rng.randrange(len(elems))] for _ in range(3))
        all_meet = f[0]
        all_join = f[0]
        for x in f[1:]:
            all_meet = fn22.meet(all_meet, x)
            all_join = fn22.join(all_join, x)
        assert order_statistics(fn22, f, 1) == all_meet
        assert order_statistics(fn22, f, 3) == all_join
        assert order_statistics_dual(fn22, f, 1) == all_meet


def test_order_statistics_index_errors(fn22):
    with pytest.raises(InputError):
        order_statistics(fn22, ((0, 0),), 2)
    with pytest.raises(InputError):
        order_statistics_dual(fn22, ((0, 0),), 0)


def test_order_statistics_permutation_invariant(fn22):
    elems = fn22.elements()
    rng = random.Random(11)
    for _ in range(30):
        f = [elems[rng.randrange(len(elems))] for _ in range(4)]
        stats = order_statistics_tuple(fn22, tuple(f))
        rng.shuffle(f)
        assert order_statistics_tuple(fn22, tuple(f)) == stats


def test_dual_agrees_on_distributive_lattices():
    for L in (FnLattice.zero_to(1, 3), FnLattice.zero_to(2, 1),
              product_of_chains([2, 3])):
        elems = L.elements()
        for n in (1, 2, 3):
            for f in product(elems, repeat=n):
                assert order_statistics_tuple(L, f) == \
                    order_statistics_dual_tuple(L, f)


def test_dual_below_primal_everywhere_on_m3(m3):
    for f in product(m3.elements(), repeat=3):
        primal = order_statistics_tuple(m3, f)
        dual = order_statistics_dual_tuple(m3, f)
        assert all(m3.leq(d, p) for d, p in zip(dual, primal))


def test_dual_agreement_up_to_27_elements_and_n4():
    cube27 = product_of_chains([3, 3, 3])
    assert cube27.size == 27
    for n in (1, 2, 3):
        for f in product(cube27.elements(), repeat=n):
            assert order_statistics_tuple(cube27, f) == \
                order_statistics_dual_tuple(cube27, f)
    small = product_of_chains([2, 2])
    for f in product(small.elements(), repeat=4):
        assert order_statistics_tuple(small, f) == \
            order_statistics_dual_tuple(small, f)


# --- pointwise order statistics ---

def test_pointwise_sort_example():
    assert pointwise_order_statistics(((1, 0), (0, 1))) == ((0, 0), (1, 1))


def test_pointwise_identical_tuple():
    f = (Fraction(2), Fraction(5))
    assert pointwise_order_statistics((f, f, f)) == (f, f, f)


def test_pointwise_matches_subset_formula(fn22):
    elems = fn22.elements()
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 4)
        f = tuple(elems[rng.randrange(len(elems))] for _ in range(n))
        assert pointwise_order_statistics(f) == order_statistics_tuple(fn22, f)


def test_pointwise_monotone_and_multiset_preserving(fn22):
    elems = fn22.elements()
    rng = random.Random(13)
    for _ in range(100):
        n = rng.randint(1, 4)
        f = tuple(elems[rng.randrange(len(elems))] for _ in range(n))
        stats = pointwise_order_statistics(f)
        for j in range(n - 1):
            assert fn_meet(stats[j], stats[j + 1]) == stats[j]
        for s in range(2):
            assert sorted(g[s] for g in stats) == sorted(x[s] for x in f)


def test_pointwise_mismatched_widths():
    with pytest.raises(InputError):
        pointwise_order_statistics(((1, 2), (1,)))


# --- Birkhoff embedding ---

def test_birkhoff_three_chain():
    chain = product_of_chains([3])
    ambient, mapping, ground = birkhoff_embed(chain)
    assert len(ground) == 2
    images = [mapping[x] for x in range(3)]
    assert images == [(0, 0), (1, 0), (1, 1)]


def test_birkhoff_two_atom_boolean():
    square = product_of_chains([2, 2])
    ambient, mapping, ground = birkhoff_embed(square)
    assert len(ground) == 2
    assert len(set(mapping.values())) == 4


def test_birkhoff_preserves_structure():
    L = product_of_chains([2, 3])
    _, mapping, _ = birkhoff_embed(L)
    for a in L.elements():
        for b in L.elements():
            assert mapping[L.meet(a, b)] == fn_meet(mapping[a], mapping[b])
            assert mapping[L.join(a, b)] == fn_join(mapping[a], mapping[b])


def test_birkhoff_refuses_m3(m3):
    with pytest.raises(InputError) as err:
        birkhoff_embed(m3)
    assert "distributive" in str(err.value)


# --- constructors ---

def test_build_m3_order_relation(m3):
    one, five = lab(m3, 1, 5)
    assert leq(m3, one, five)
    for x in (2, 3, 4):
        for y in (2, 3, 4):
            if x != y:
                assert not leq(m3, m3.id_of(x), m3.id_of(y))


def test_lattice_from_order_rejects_non_lattice():
    from latstat.lattice import lattice_from_order
    # two incomparable elements with no common upper bound
    with pytest.raises(InputError):
        lattice_from_order(2, [])


def test_fn_lattice_guards():
    with pytest.raises(InputError):
        FnLattice.zero_to(7, 1)
    with pytest.raises(InputError):
        FnLattice(1, [Fraction(0)] * 9)
    with pytest.raises(InputError):
        FnLattice(1, [Fraction(1), Fraction(1)])
    FnLattice.zero_to(7, 1, max_ground=8)  # override allowed


def test_fn_diff():
    assert fn_diff((3, 1), (2, 5)) == (1, 0)
    assert fn_diff((2, 2), (2, 2)) == (0, 0)


@settings(max_examples=60)
@given(st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2),
       st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2))
def test_absorption_on_fn_lattice(a, b):
    L = FnLattice.zero_to(2, 3)
    a, b = tuple(a), tuple(b)
    assert L.join(a, L.meet(a, b)) == a
    assert L.meet(a, L.join(a, b)) == a
