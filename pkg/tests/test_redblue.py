from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import instances
from tcand.errors import InstanceError, ParseError, UncoverableError
from tcand.fd import FD, FDSet, Instance, is_feasible
from tcand.oracle import exact_rbsc, exact_tcand
from tcand.redblue import (
    RBSCInstance,
    format_rbsc,
    parse_rbsc,
    rbsc_greedy,
    rbsc_to_tcand,
    red_cost,
    tcand_to_rbsc,
)


def rb(reds, blues, *sets):
    return RBSCInstance(frozenset(reds), frozenset(blues), tuple(frozenset(s) for s in sets))


def test_forward_example():
    inst = Instance(FDSet([FD({0, 1}, 2)], 3), {2}, 1, ("a", "b", "t"))
    out, mapping = tcand_to_rbsc(inst)
    assert out.blues == {"t'"}
    assert out.reds == {"a", "b", "t"}
    assert out.sets == ({"a", "b", "t'"}, {"t", "t'"})
    assert mapping.origin == (FD({0, 1}, 2), None)


def test_forward_no_targets():
    out, _ = tcand_to_rbsc(Instance(FDSet([FD({0}, 1)], 2), set(), 1))
    assert out.blues == frozenset() and out.sets == ()
    assert exact_rbsc(out)[1] == 0


def test_forward_discards_fds_into_non_targets():
    inst = Instance(FDSet([FD({0, 1}, 2), FD({0, 1}, 3)], 4), {2}, 1, ("a", "b", "t", "u"))
    out, _ = tcand_to_rbsc(inst)
    assert out.sets == ({"a", "b", "t'"}, {"t", "t'"})


def test_forward_fresh_names_avoid_clashes():
    inst = Instance(FDSet([], 2), {0}, 1, ("t", "t'"))
    out, mapping = tcand_to_rbsc(inst)
    assert out.blues == {"t''"}
    assert mapping.blue_target == {"t''": 0}


def test_forward_needs_one_round():
    with pytest.raises(InstanceError):
        tcand_to_rbsc(Instance(FDSet([FD({0}, 1)], 2), {1}, 2))


def test_reverse_examples():
    inst, _ = rbsc_to_tcand(rb({"r1"}, {"b1"}, {"r1", "b1"}))
    assert list(inst.fds) == [FD({0}, 1)]
    assert inst.targets == {1} and inst.rounds == 1
    inst, _ = rbsc_to_tcand(rb(set(), {"b1"}, {"b1"}))
    assert list(inst.fds) == [FD(frozenset(), 0)]
    assert len(exact_tcand(inst)) == 0
    inst, _ = rbsc_to_tcand(rb({"r"}, set(), {"r"}))
    assert inst.targets == frozenset() and len(exact_tcand(inst)) == 0


def test_reverse_copies_repair_direct_selection():
    # one set with two reds: selecting the lone blue target would cost 1
    problem = rb({"r1", "r2"}, {"b"}, {"r1", "r2", "b"})
    literal, _ = rbsc_to_tcand(problem, copies=1)
    assert len(exact_tcand(literal)) == 1 < exact_rbsc(problem)[1]
    fixed, mapping = rbsc_to_tcand(problem)
    assert mapping.copies == 2
    assert len(exact_tcand(fixed)) == 2


def test_reverse_rejects_bad_copies():
    with pytest.raises(InstanceError):
        rbsc_to_tcand(rb({"r"}, {"b"}, {"r", "b"}), copies=0)


def test_greedy_examples():
    assert rbsc_greedy(rb({"r"}, {"b"}, {"r", "b"})) == ((0,), 1)
    got = rbsc_greedy(rb({"r1"}, {"b1", "b2"}, {"r1", "b1", "b2"}, {"b1"}, {"b2"}))
    assert got == ((1, 2), 0)
    with pytest.raises(UncoverableError):
        rbsc_greedy(rb({"r"}, {"b"}, {"r"}))


def small_instances(max_elems=4, max_sets=3):
    for n in range(max_elems + 1):
        for r in range(n + 1):
            universe = [f"r{i}" for i in range(r)] + [f"b{i}" for i in range(n - r)]
            subsets = [frozenset(universe[j] for j in range(n) if m >> j & 1) for m in range(1, 1 << n)]
            for k in range(max_sets + 1):
                for fam in combinations(subsets, k):
                    yield RBSCInstance(frozenset(universe[:r]), frozenset(universe[r:]), fam)


def test_exhaustive_small_round_trip():
    checked = 0
    for problem in small_instances():
        try:
            _, cost = exact_rbsc(problem)
        except UncoverableError:
            continue
        inst, mapping = rbsc_to_tcand(problem)
        sol = exact_tcand(inst)
        assert len(sol) == cost
        # witness translation: an optimal attribute set yields a cover of equal cost
        assert red_cost(problem, mapping.attrs_to_cover(problem, sol)) <= cost
        greedy_cost = rbsc_greedy(problem)[1]
        assert greedy_cost >= cost
        checked += 1
    assert checked > 1000


@settings(max_examples=150, deadline=None)
@given(instances(max_n=8, max_m=10, rounds=1))
def test_forward_value_preservation(inst):
    problem, mapping = tcand_to_rbsc(inst)
    cover, cost = exact_rbsc(problem)
    sol = exact_tcand(inst)
    assert len(sol) == cost
    # a cover maps to a feasible attribute set of the same size, and back
    attrs = mapping.cover_to_attrs(problem, cover)
    assert is_feasible(attrs, inst) and len(attrs) == cost
    back = mapping.attrs_to_cover(problem, sol)
    assert problem.covers(back) and red_cost(problem, back) == len(sol)


def test_parse_and_format_round_trip():
    text = "# demo\nred: r1 r2\nblue: b1\nset: r1 b1\nset: r2 b1\n"
    problem = parse_rbsc(text)
    assert problem.reds == {"r1", "r2"} and len(problem.sets) == 2
    assert parse_rbsc(format_rbsc(problem)) == problem


@pytest.mark.parametrize(
    "text, exc",
    [
        ("red r1\n", ParseError),
        ("colour: x\n", ParseError),
        ("red: a\nblue: b\nset: a zz\n", InstanceError),
        ("red: a\nblue: a\n", InstanceError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_rbsc(text)


@st.composite
def rbsc_problems(draw, max_elems=7, max_sets=5):
    n = draw(st.integers(0, max_elems))
    r = draw(st.integers(0, n))
    universe = [f"r{i}" for i in range(r)] + [f"b{i}" for i in range(n - r)]
    sets = draw(st.lists(st.frozensets(st.sampled_from(universe), min_size=1) if universe else st.just(frozenset()),
                         max_size=max_sets))
    return RBSCInstance(frozenset(universe[:r]), frozenset(universe[r:]), tuple(sets))


@settings(max_examples=400, deadline=None)
@given(rbsc_problems())
def test_round_trip_full_scale_fuzz(problem):
    try:
        _, cost = exact_rbsc(problem)
    except UncoverableError:
        return
    inst, _ = rbsc_to_tcand(problem)
    assert len(exact_tcand(inst)) == cost
    literal, _ = rbsc_to_tcand(problem, copies=1)
    forward, _ = tcand_to_rbsc(literal)
    assert len(exact_tcand(literal)) == exact_rbsc(forward)[1]
