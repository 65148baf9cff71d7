"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from tcand.fd import FD, FDSet, Instance


@st.composite
def fd_sets(draw, max_n=8, max_m=12, max_lhs=3, allow_empty_lhs=True):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    lo = 0 if allow_empty_lhs else 1
    fds = []
    for _ in range(m):
        lhs = draw(st.frozensets(st.integers(0, n - 1), min_size=lo, max_size=min(max_lhs, n)))
        rhs = draw(st.integers(0, n - 1))
        fds.append(FD(lhs, rhs))
    return FDSet(fds, n)


@st.composite
def instances(draw, max_n=8, max_m=12, max_lhs=3, rounds=None, simple=False):
    fds = draw(fd_sets(max_n, max_m, 1 if simple else max_lhs, allow_empty_lhs=not simple))
    targets = draw(st.frozensets(st.integers(0, fds.n - 1)))
    d = rounds if rounds is not None else draw(st.integers(1, fds.n))
    d = min(d, fds.n)
    return Instance(fds, targets, d)
