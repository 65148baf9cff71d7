"""Red-Blue Set Cover and its equivalence with 1-round TCAND.

Elements are arbitrary hashable labels (strings in files). A cover is a
tuple of set indices; its cost is the number of distinct red elements
touched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InstanceError, ParseError, UncoverableError
from .fd import FD, FDSet, Instance

__all__ = [
    "RBSCInstance",
    "ReductionMap",
    "parse_rbsc",
    "format_rbsc",
    "red_cost",
    "tcand_to_rbsc",
    "rbsc_to_tcand",
    "rbsc_greedy",
]


@dataclass(frozen=True)
class RBSCInstance:
    reds: frozenset
    blues: frozenset
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "reds", frozenset(self.reds))
        object.__setattr__(self, "blues", frozenset(self.blues))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if self.reds & self.blues:
            raise InstanceError("red and blue elements must be disjoint")
        universe = self.reds | self.blues
        for i, s in enumerate(self.sets):
            if not s <= universe:
                raise InstanceError(f"set {i} has elements outside red/blue universe")

    def covers(self, chosen: Iterable[int]) -> bool:
        covered = set()
        for i in chosen:
            covered |= self.sets[i]
        return self.blues <= covered


def red_cost(rb: RBSCInstance, chosen: Iterable[int]) -> int:
    touched = set()
    for i in chosen:
        touched |= rb.sets[i] & rb.reds
    return len(touched)


def parse_rbsc(text: str) -> RBSCInstance:
    """``red: ...``, ``blue: ...`` and one ``set: ...`` line per set."""
    reds, blues, sets = [], [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"cannot parse {line!r}", lineno)
        key = key.strip().lower()
        items = value.split()
        if key in ("red", "reds"):
            reds += items
        elif key in ("blue", "blues"):
            blues += items
        elif key == "set":
            sets.append((lineno, items))
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    universe = set(reds) | set(blues)
    for lineno, items in sets:
        for e in items:
            if e not in universe:
                raise InstanceError(f"line {lineno}: element {e!r} is neither red nor blue")
    return RBSCInstance(frozenset(reds), frozenset(blues), tuple(frozenset(s) for _, s in sets))


def format_rbsc(rb: RBSCInstance) -> str:
    key = str
    lines = [
        "red: " + " ".join(sorted(map(key, rb.reds))),
        "blue: " + " ".join(sorted(map(key, rb.blues))),
    ]
    lines += ["set: " + " ".join(sorted(map(key, s))) for s in rb.sets]
    return "\n".join(lines) + "\n"


def rbsc_greedy(rb: RBSCInstance) -> tuple[tuple[int, ...], int]:
    """Repeatedly take the set with the best ratio of new blues to new reds.

    A set that adds blues without adding reds is taken first (infinite
    ratio); ties prefer more new blues, then the lowest index.
    """
    coverable = set()
    for s in rb.sets:
        coverable |= s
    if not rb.blues <= coverable:
        raise UncoverableError("some blue element lies in no set")
    uncovered = set(rb.blues)
    touched: set = set()
    chosen = []
    while uncovered:
        best_key, best = None, None
        for i, s in enumerate(rb.sets):
            new_blue = len(s & uncovered)
            if not new_blue:
                continue
            new_red = len((s & rb.reds) - touched)
            ratio = float("inf") if new_red == 0 else new_blue / new_red
            key = (ratio, new_blue, -i)
            if best_key is None or key > best_key:
                best_key, best = key, i
        chosen.append(best)
        uncovered -= rb.sets[best]
        touched |= rb.sets[best] & rb.reds
    chosen.sort()
    return tuple(chosen), len(touched)


@dataclass(frozen=True)
class ReductionMap:
    """Bookkeeping that translates witnesses between the two problems.

    For ``tcand_to_rbsc``: ``red_attr`` maps red elements to attributes,
    ``blue_target`` maps blue elements to targets and ``origin[i]`` names the
    FD behind set ``i`` (``None`` for a virtual self set ``{t, t'}``).

    For ``rbsc_to_tcand``: ``attr_element`` maps attributes to elements
    (blue copies map to their blue element) and ``fd_set[k]`` is the set
    that produced FD ``k``.
    """

    red_attr: dict = field(default_factory=dict)
    blue_target: dict = field(default_factory=dict)
    origin: tuple = ()
    attr_element: tuple = ()
    fd_set: tuple = ()
    copies: int = 1

    def cover_to_attrs(self, rb: RBSCInstance, chosen: Iterable[int]) -> frozenset[int]:
        out = set()
        for i in chosen:
            out |= {self.red_attr[e] for e in rb.sets[i] & rb.reds}
        return frozenset(out)

    def attrs_to_cover(self, rb: RBSCInstance, attrs: Iterable[int]) -> tuple[int, ...]:
        picked = {e for e, a in self.red_attr.items() if a in set(attrs)}
        return tuple(i for i, s in enumerate(rb.sets) if (s & rb.reds) <= picked)


def _fresh(base: str, taken: set) -> str:
    name = base + "'"
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def tcand_to_rbsc(inst: Instance) -> tuple[RBSCInstance, ReductionMap]:
    """1-round TCAND -> Red-Blue Set Cover.

    Attributes become red elements; each target ``t`` gets a blue twin
    ``t'``. Every FD ``LS -> t`` into a target yields the set ``LS + {t'}``
    and every target also gets ``{t, t'}`` so that selecting the target
    itself stays expressible. FDs into non-targets are dropped.
    """
    if inst.rounds != 1:
        raise InstanceError("the Red-Blue reduction needs a 1-round instance")
    red_name = [inst.name(i) for i in range(inst.n)]
    taken = set(red_name)
    blue_name = {t: _fresh(red_name[t], taken) for t in sorted(inst.targets)}
    sets, origin = [], []
    for fd in inst.fds:
        if fd.rhs in inst.targets:
            sets.append(frozenset(red_name[a] for a in fd.lhs) | {blue_name[fd.rhs]})
            origin.append(fd)
    for t in sorted(inst.targets):
        sets.append(frozenset({red_name[t], blue_name[t]}))
        origin.append(None)
    rb = RBSCInstance(frozenset(red_name), frozenset(blue_name.values()), tuple(sets))
    mapping = ReductionMap(
        red_attr={nm: i for i, nm in enumerate(red_name)},
        blue_target={b: t for t, b in blue_name.items()},
        origin=tuple(origin),
    )
    return rb, mapping


def rbsc_to_tcand(rb: RBSCInstance, copies: int | None = None) -> tuple[Instance, ReductionMap]:
    """Red-Blue Set Cover -> 1-round TCAND.

    Each set ``S`` yields FDs ``S - B -> b`` for its blue members ``b``;
    blues become targets. A TCAND solution may also name a target outright,
    which no cover can mimic when the cheapest covering set has several
    reds, so every blue is represented by ``copies`` target attributes.
    Taking all copies of one blue then costs at least as much as a cover.
    The default uses the greedy cover cost as the copy count (at least 1),
    which leaves instances of optimum <= 1 in their plain form.
    """
    reds = sorted(rb.reds, key=repr)
    blues = sorted(rb.blues, key=repr)
    if copies is None:
        copies = 1
        try:
            copies = max(1, rbsc_greedy(rb)[1])
        except UncoverableError:
            pass
    if copies < 1:
        raise InstanceError("copies must be positive")
    elements = list(reds)
    red_attr = {e: i for i, e in enumerate(reds)}
    blue_attrs: dict = {}
    for b in blues:
        blue_attrs[b] = list(range(len(elements), len(elements) + copies))
        elements += [b] * copies
    first_set: dict[FD, int] = {}
    for i, s in enumerate(rb.sets):
        lhs = frozenset(red_attr[e] for e in s if e in rb.reds)
        for b in sorted(s & rb.blues, key=repr):
            for a in blue_attrs[b]:
                first_set.setdefault(FD(lhs, a), i)
    fds, fd_set = list(first_set), list(first_set.values())
    names = []
    for a, e in enumerate(elements):
        if e in rb.blues and copies > 1:
            names.append(f"{e}#{blue_attrs[e].index(a) + 1}")
        else:
            names.append(str(e))
    if len(set(names)) != len(names):
        names = [f"v{a}" for a in range(len(elements))]
    targets = frozenset(a for b in blues for a in blue_attrs[b])
    inst = Instance(FDSet(fds, len(elements)), targets, 1, tuple(names))
    mapping = ReductionMap(
        red_attr=red_attr,
        attr_element=tuple(elements),
        fd_set=tuple(fd_set),
        copies=copies,
    )
    return inst, mapping
