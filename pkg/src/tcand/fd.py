"""Functional dependencies over a dense attribute universe.

Attributes are integers in ``[0, n)``; a symbol table on :class:`Instance`
maps them back to the names used in FD files. Attribute sets cross the
public API as ``frozenset``; the hot paths (closure, exhaustive search)
work on Python ints used as bitsets, which are fixed-width words for small
``n`` and grow transparently beyond 64 attributes.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from .errors import AttributeOutOfRange, InstanceError, ParseError

__all__ = [
    "FD",
    "FDSet",
    "Instance",
    "Stats",
    "normalize",
    "one_step_closure",
    "closure",
    "closure_with_work",
    "bounded_closure",
    "is_feasible",
    "stats",
    "parse_instance",
    "format_instance",
    "to_mask",
    "from_mask",
]


def to_mask(attrs: Iterable[int]) -> int:
    m = 0
    for a in attrs:
        m |= 1 << a
    return m


def from_mask(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True, order=True)
class FD:
    """Regular FD ``lhs -> rhs``. An empty ``lhs`` fires unconditionally."""

    lhs: frozenset[int]
    rhs: int

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))

    def __str__(self):
        left = " ".join(map(str, sorted(self.lhs))) or "_"
        return f"{left} -> {self.rhs}"


class FDSet:
    """Immutable, duplicate-free list of regular FDs over ``n`` attributes."""

    __slots__ = ("fds", "n", "lhs_masks", "rhs", "_watch", "_unconditional")

    def __init__(self, fds: Iterable[FD], n: int):
        if n < 0:
            raise InstanceError("universe size must be non-negative")
        seen = set()
        kept = []
        for fd in fds:
            if fd in seen:
                continue
            for a in (*fd.lhs, fd.rhs):
                if not 0 <= a < n:
                    raise AttributeOutOfRange(f"attribute {a} outside [0, {n})")
            seen.add(fd)
            kept.append(fd)
        self.fds: tuple[FD, ...] = tuple(kept)
        self.n = n
        self.lhs_masks = tuple(to_mask(fd.lhs) for fd in kept)
        self.rhs = tuple(fd.rhs for fd in kept)
        watch: list[list[int]] = [[] for _ in range(n)]
        for k, fd in enumerate(kept):
            for a in fd.lhs:
                watch[a].append(k)
        self._watch = tuple(tuple(w) for w in watch)
        self._unconditional = tuple(k for k, fd in enumerate(kept) if not fd.lhs)

    def __iter__(self) -> Iterator[FD]:
        return iter(self.fds)

    def __len__(self):
        return len(self.fds)

    def __getitem__(self, k):
        return self.fds[k]

    def __eq__(self, other):
        return isinstance(other, FDSet) and self.n == other.n and self.fds == other.fds

    def __hash__(self):
        return hash((self.n, self.fds))

    def __repr__(self):
        return f"FDSet(n={self.n}, fds=[{', '.join(map(str, self.fds))}])"

    @property
    def left_sides(self) -> tuple[frozenset[int], ...]:
        """Distinct left sides in order of first appearance."""
        return tuple(dict.fromkeys(fd.lhs for fd in self.fds))

    def left_sides_of(self, attr: int) -> tuple[frozenset[int], ...]:
        return tuple(dict.fromkeys(fd.lhs for fd in self.fds if fd.rhs == attr))

    def restrict(self, keep) -> "FDSet":
        return FDSet((fd for fd in self.fds if keep(fd)), self.n)


def normalize(raw: Iterable, n: int | None = None) -> FDSet:
    """Split multi-attribute right sides into regular FDs and drop duplicates.

    ``raw`` holds ``(lhs, rhs)`` pairs where ``rhs`` is an attribute or an
    iterable of attributes. Output order is input order, then rhs order.
    """
    out = []
    top = -1
    for lhs, rhs in raw:
        lhs = frozenset(lhs)
        rhs_list = [rhs] if isinstance(rhs, int) else list(rhs)
        for r in rhs_list:
            out.append(FD(lhs, r))
            top = max(top, r, *lhs) if lhs else max(top, r)
    if n is None:
        n = top + 1
    return FDSet(out, n)


@dataclass(frozen=True)
class Instance:
    """A D-round TCAND instance: FDs, target set and round budget."""

    fds: FDSet
    targets: frozenset[int]
    rounds: int
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "targets", frozenset(self.targets))
        n = self.fds.n
        for t in self.targets:
            if not 0 <= t < n:
                raise AttributeOutOfRange(f"target {t} outside [0, {n})")
        if not 1 <= self.rounds <= max(n, 1):
            raise InstanceError(f"rounds must lie in [1, {max(n, 1)}], got {self.rounds}")
        if self.names and len(self.names) != n:
            raise InstanceError("symbol table size does not match universe")

    @classmethod
    def build(cls, fds: FDSet, targets: Iterable[int], rounds: int | None = None, names=()):
        return cls(fds, frozenset(targets), max(fds.n, 1) if rounds is None else rounds, tuple(names))

    @property
    def n(self) -> int:
        return self.fds.n

    def with_rounds(self, rounds: int) -> "Instance":
        return replace(self, rounds=rounds)

    def name(self, attr: int) -> str:
        return self.names[attr] if self.names else str(attr)

    def label(self, attrs: Iterable[int]) -> list[str]:
        return [self.name(a) for a in sorted(attrs)]

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        table = {nm: i for i, nm in enumerate(self.names)} if self.names else None
        out = set()
        for nm in names:
            if table is not None:
                if nm not in table:
                    raise InstanceError(f"unknown attribute {nm!r}")
                out.add(table[nm])
            else:
                try:
                    a = int(nm)
                except ValueError:
                    raise InstanceError(f"unknown attribute {nm!r}") from None
                if not 0 <= a < self.n:
                    raise AttributeOutOfRange(f"attribute {a} outside [0, {self.n})")
                out.add(a)
        return frozenset(out)


@dataclass(frozen=True)
class Stats:
    f: int
    delta: int


def _check(attrs, n) -> frozenset[int]:
    s = frozenset(attrs)
    for a in s:
        if not 0 <= a < n:
            raise AttributeOutOfRange(f"attribute {a} outside [0, {n})")
    return s


def _one_step_mask(mask: int, fds: FDSet) -> int:
    out = mask
    for lm, r in zip(fds.lhs_masks, fds.rhs):
        if lm & mask == lm:
            out |= 1 << r
    return out


def _bounded_closure_mask(mask: int, fds: FDSet, rounds: int) -> int:
    for _ in range(rounds):
        nxt = _one_step_mask(mask, fds)
        if nxt == mask:
            break
        mask = nxt
    return mask


def one_step_closure(attrs: Iterable[int], fds: FDSet) -> frozenset[int]:
    """``X`` plus every attribute with an FD whose left side lies inside ``X``."""
    x = _check(attrs, fds.n)
    return from_mask(_one_step_mask(to_mask(x), fds))


def closure_with_work(attrs: Iterable[int], fds: FDSet) -> tuple[frozenset[int], list[int]]:
    """Linear-time closure; also returns how often each FD's counter was decremented."""
    x = set(_check(attrs, fds.n))
    missing = [len(fd.lhs) for fd in fds.fds]
    work = [0] * len(fds.fds)
    queue = deque(x)
    for k in fds._unconditional:
        r = fds.rhs[k]
        if r not in x:
            x.add(r)
            queue.append(r)
    while queue:
        a = queue.popleft()
        for k in fds._watch[a]:
            missing[k] -= 1
            work[k] += 1
            if missing[k] == 0:
                r = fds.rhs[k]
                if r not in x:
                    x.add(r)
                    queue.append(r)
    return frozenset(x), work


def closure(attrs: Iterable[int], fds: FDSet) -> frozenset[int]:
    """Attribute closure ``X+`` (unbounded inference)."""
    return closure_with_work(attrs, fds)[0]


def bounded_closure(attrs: Iterable[int], fds: FDSet, rounds: int) -> frozenset[int]:
    """Attributes derivable from ``X`` within ``rounds`` rounds of FD inference."""
    if rounds < 0:
        raise InstanceError("rounds must be non-negative")
    x = _check(attrs, fds.n)
    return from_mask(_bounded_closure_mask(to_mask(x), fds, rounds))


def is_feasible(attrs: Iterable[int], inst: Instance) -> bool:
    x = to_mask(_check(attrs, inst.n))
    goal = to_mask(inst.targets)
    return _bounded_closure_mask(x, inst.fds, inst.rounds) & goal == goal


def stats(fds: FDSet) -> Stats:
    """``f``: most distinct left sides into one attribute.
    ``delta``: most other left sides that intersect a given left side."""
    per_rhs: dict[int, set[frozenset[int]]] = {}
    for fd in fds:
        per_rhs.setdefault(fd.rhs, set()).add(fd.lhs)
    f = max((len(v) for v in per_rhs.values()), default=0)
    masks = [to_mask(ls) for ls in fds.left_sides]
    delta = 0
    for i, m in enumerate(masks):
        deg = sum(1 for j, o in enumerate(masks) if j != i and m & o)
        delta = max(delta, deg)
    return Stats(f=f, delta=delta)


# --- FD file format -------------------------------------------------------

_KEY = re.compile(r"^([A-Za-z_]+)\s*:(.*)$")
_TARGET_KEYS = {"target", "targets"}
_ATTR_KEYS = {"attributes", "attrs"}


def _names(tokens, lineno):
    for tok in tokens:
        if tok in ("_", "->") or ":" in tok:
            raise ParseError(f"invalid attribute name {tok!r}", lineno)
    return tokens


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented FD format into a normalized :class:`Instance`.

    ``a b -> c d`` declares FDs, ``_ -> c`` has an empty left side,
    ``target: ...`` lists targets, ``rounds: D`` bounds inference
    (default ``n``), ``attributes: ...`` declares names that occur in no
    FD. ``#`` starts a comment line.
    """
    table: dict[str, int] = {}

    def intern(nm):
        if nm not in table:
            table[nm] = len(table)
        return table[nm]

    raw = []
    target_lines = []
    rounds = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "->" in line:
            left, _, right = line.partition("->")
            lhs_tok, rhs_tok = left.split(), right.split()
            if "->" in right:
                raise ParseError("more than one '->' on a line", lineno)
            if not lhs_tok:
                raise ParseError("empty left side must be written as '_'", lineno)
            if not rhs_tok:
                raise ParseError("missing right side", lineno)
            if lhs_tok == ["_"]:
                lhs_tok = []
            lhs = [intern(t) for t in _names(lhs_tok, lineno)]
            rhs = [intern(t) for t in _names(rhs_tok, lineno)]
            raw.append((lhs, rhs))
            continue
        m = _KEY.match(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", lineno)
        key, value = m.group(1).lower(), m.group(2).split()
        if key in _TARGET_KEYS:
            target_lines.append((lineno, _names(value, lineno)))
        elif key in _ATTR_KEYS:
            for t in _names(value, lineno):
                intern(t)
        elif key == "rounds":
            if rounds is not None:
                raise ParseError("duplicate rounds line", lineno)
            if len(value) != 1 or not re.fullmatch(r"[+-]?\d+", value[0]):
                raise ParseError("rounds must be a single integer", lineno)
            rounds = (lineno, int(value[0]))
        else:
            raise ParseError(f"unknown key {key!r}", lineno)

    n = len(table)
    targets = set()
    for lineno, names in target_lines:
        for nm in names:
            if nm not in table:
                raise InstanceError(f"line {lineno}: unknown attribute {nm!r} in target line")
            targets.add(table[nm])
    D = max(n, 1)
    if rounds is not None:
        lineno, D = rounds
        if not 1 <= D <= max(n, 1):
            raise InstanceError(f"line {lineno}: rounds {D} outside [1, {max(n, 1)}]")
    names = tuple(sorted(table, key=table.get))
    return Instance(normalize(raw, n), frozenset(targets), D, names)


def format_instance(inst: Instance, comment: str | None = None) -> str:
    """Inverse of :func:`parse_instance`; ids survive a round trip."""
    names = [inst.name(i) for i in range(inst.n)]
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append("attributes: " + " ".join(names))
    for fd in inst.fds:
        left = " ".join(names[a] for a in sorted(fd.lhs)) or "_"
        lines.append(f"{left} -> {names[fd.rhs]}")
    lines.append("target: " + " ".join(names[t] for t in sorted(inst.targets)))
    lines.append(f"rounds: {inst.rounds}")
    return "\n".join(lines) + "\n"
