from itertools import combinations

import pytest
from hypothesis import given, settings

from strategies import instances
from tcand.errors import TooLarge, UncoverableError
from tcand.fd import FD, FDSet, Instance, is_feasible
from tcand.oracle import exact_rbsc, exact_tcand
from tcand.redblue import RBSCInstance

A, B, C = range(3)
CHAIN = FDSet([FD({A}, B), FD({B}, C)], 3)


def test_exact_tcand_examples():
    assert exact_tcand(Instance(CHAIN, {C}, 3)) == {A}
    assert exact_tcand(Instance(FDSet([], 2), {A, B}, 2)) == {A, B}
    assert exact_tcand(Instance(CHAIN, {C}, 1)) == {B}


def test_exact_tcand_empty_target():
    assert exact_tcand(Instance(CHAIN, set(), 1)) == frozenset()


def test_exact_tcand_guards():
    with pytest.raises(TooLarge):
        exact_tcand(Instance(FDSet([], 30), {0}, 1))
    with pytest.raises(TooLarge):
        exact_tcand(Instance(CHAIN, {C}, 3), limit=2)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=8, max_m=10))
def test_exact_tcand_is_minimum(inst):
    sol = exact_tcand(inst)
    assert is_feasible(sol, inst)
    for k in range(len(sol)):
        for x in combinations(range(inst.n), k):
            assert not is_feasible(x, inst)


@settings(max_examples=100, deadline=None)
@given(instances(max_n=7, max_m=10))
def test_more_rounds_never_hurt(inst):
    sizes = [len(exact_tcand(inst.with_rounds(d))) for d in range(1, inst.n + 1)]
    assert sizes == sorted(sizes, reverse=True)


def test_exact_rbsc_examples():
    rb = RBSCInstance(frozenset({"r1"}), frozenset({"b1"}), (frozenset({"r1", "b1"}),))
    assert exact_rbsc(rb) == ((0,), 1)
    rb = RBSCInstance(
        frozenset({"r1", "r2"}),
        frozenset({"b1"}),
        (frozenset({"r1", "b1"}), frozenset({"r1", "r2", "b1"})),
    )
    assert exact_rbsc(rb) == ((0,), 1)
    rb = RBSCInstance(frozenset({"r1"}), frozenset(), (frozenset({"r1"}),))
    assert exact_rbsc(rb) == ((), 0)


def test_exact_rbsc_tie_break_prefers_fewer_sets():
    rb = RBSCInstance(
        frozenset({"r"}),
        frozenset({"b1", "b2"}),
        (frozenset({"r", "b1"}), frozenset({"r", "b2"}), frozenset({"r", "b1", "b2"})),
    )
    assert exact_rbsc(rb) == ((2,), 1)


def test_exact_rbsc_uncoverable():
    rb = RBSCInstance(frozenset({"r"}), frozenset({"b"}), (frozenset({"r"}),))
    with pytest.raises(UncoverableError):
        exact_rbsc(rb)
