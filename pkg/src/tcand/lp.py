"""Layered LP relaxation of the TCAND integer program and a dense simplex.

Layers are numbered like the integer program: ``x[i, d]`` for
``d = n-D .. n`` says attribute ``i`` is known after ``d - (n-D)`` rounds,
``z[LS, d]`` says left side ``LS`` fires in round ``d``. Targets are pinned
to 1 at layer ``n``; the objective counts layer ``n-D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, InstanceError, SolverError
from .fd import Instance

__all__ = [
    "LPModel",
    "LPSolution",
    "build_layered_lp",
    "build_one_round_lp",
    "solve_lp",
    "lp_lower_bound",
    "export_lp",
]

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
_COST_TOL = 1e-10


@dataclass
class Constraint:
    coeffs: dict[int, float]
    sense: str  # "<=", ">=", "="
    rhs: float
    name: str = ""


@dataclass
class LPModel:
    """Minimisation LP with box-bounded variables."""

    names: list[str] = field(default_factory=list)
    lower: list[float] = field(default_factory=list)
    upper: list[float] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    x_index: dict[tuple[int, int], int] = field(default_factory=dict)
    z_index: dict[tuple[frozenset, int], int] = field(default_factory=dict)
    top_layer: int = 0
    bottom_layer: int = 0
    _taken: set = field(default_factory=set, repr=False)

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def add_var(self, name: str, lb: float = 0.0, ub: float = 1.0) -> int:
        if name in self._taken:
            name = f"{name}_{len(self.names)}"
        self._taken.add(name)
        self.names.append(name)
        self.lower.append(lb)
        self.upper.append(ub)
        return len(self.names) - 1

    def add_constraint(self, coeffs: dict[int, float], sense: str, rhs: float, name: str = ""):
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"bad constraint sense {sense!r}")
        for j in coeffs:
            if not 0 <= j < self.num_vars:
                raise ValueError(f"constraint references undeclared variable {j}")
        self.constraints.append(Constraint(dict(coeffs), sense, float(rhs), name))

    def x(self, attr: int, layer: int) -> int | None:
        return self.x_index.get((attr, layer))

    def z(self, lhs, layer: int) -> int | None:
        return self.z_index.get((frozenset(lhs), layer))

    def violation(self, values) -> float:
        """Largest constraint or bound violation of ``values``."""
        v = np.asarray(values, dtype=float)
        worst = 0.0
        if len(v):
            worst = max(worst, float(np.max(np.asarray(self.lower) - v)), float(np.max(v - np.asarray(self.upper))))
        for c in self.constraints:
            lhs = sum(a * v[j] for j, a in c.coeffs.items())
            if c.sense == "<=":
                worst = max(worst, lhs - c.rhs)
            elif c.sense == ">=":
                worst = max(worst, c.rhs - lhs)
            else:
                worst = max(worst, abs(lhs - c.rhs))
        return worst


@dataclass
class LPSolution:
    status: str
    objective: float
    values: np.ndarray
    model: LPModel
    duals: np.ndarray | None = None

    def x(self, attr: int, layer: int) -> float:
        j = self.model.x(attr, layer)
        return 0.0 if j is None else float(self.values[j])

    def z(self, lhs, layer: int) -> float:
        j = self.model.z(lhs, layer)
        return 0.0 if j is None else float(self.values[j])

    def by_name(self) -> dict[str, float]:
        return {nm: float(v) for nm, v in zip(self.model.names, self.values)}


def _ls_name(inst: Instance, ls) -> str:
    return "_".join(inst.name(a) for a in sorted(ls)) or "empty"


def build_layered_lp(inst: Instance, prune: bool = True) -> LPModel:
    """LP relaxation of the D-round integer program.

    With ``prune`` only variables that can influence a target (backward
    reachability from the targets) are created; the optimum is unchanged.
    """
    n, D = inst.n, inst.rounds
    if not 1 <= D <= max(n, 1):
        raise InstanceError(f"rounds {D} outside [1, {max(n, 1)}]")
    top, bottom = n - D, n
    into: dict[int, list[frozenset]] = {}
    for fd in inst.fds:
        if fd.rhs in fd.lhs:
            continue  # trivial; the self term already covers it
        into.setdefault(fd.rhs, [])
        if fd.lhs not in into[fd.rhs]:
            into[fd.rhs].append(fd.lhs)

    relevant = {bottom: set(inst.targets) if prune else set(range(n))}
    for d in range(bottom, top, -1):
        below = set(relevant[d])
        if prune:
            for i in relevant[d]:
                for ls in into.get(i, ()):
                    below |= ls
        else:
            below = set(range(n))
        relevant[d - 1] = below

    model = LPModel(top_layer=top, bottom_layer=bottom)
    for d in range(top, bottom + 1):
        for i in sorted(relevant[d]):
            model.x_index[(i, d)] = model.add_var(f"x_{inst.name(i)}_{d}")
        if d == top:
            continue
        for i in sorted(relevant[d]):
            for ls in into.get(i, ()):
                if (ls, d) not in model.z_index:
                    model.z_index[(ls, d)] = model.add_var(f"z_{_ls_name(inst, ls)}_{d}")
    for d in range(top + 1, bottom + 1):
        for i in sorted(relevant[d]):
            coeffs = {model.x_index[(i, d)]: 1.0, model.x_index[(i, d - 1)]: -1.0}
            for ls in into.get(i, ()):
                coeffs[model.z_index[(ls, d)]] = coeffs.get(model.z_index[(ls, d)], 0.0) - 1.0
            model.add_constraint(coeffs, "<=", 0.0, f"derive_{inst.name(i)}_{d}")
        for (ls, dd), zj in list(model.z_index.items()):
            if dd != d:
                continue
            for j in sorted(ls):
                model.add_constraint({zj: 1.0, model.x_index[(j, d - 1)]: -1.0}, "<=", 0.0,
                                     f"fire_{_ls_name(inst, ls)}_{inst.name(j)}_{d}")
    for t in sorted(inst.targets):
        model.add_constraint({model.x_index[(t, bottom)]: 1.0}, "=", 1.0, f"target_{inst.name(t)}")
    model.objective = {model.x_index[(i, top)]: 1.0 for i in sorted(relevant[top])}
    return model


def build_one_round_lp(inst: Instance) -> LPModel:
    """The single-round relaxation over ``y`` (selection) and ``z`` (fired left sides).

    The self-FD ``t -> t`` is implicit: ``y_t`` sits directly in the covering
    row of target ``t``. ``y_j`` is stored as ``x[j, 0]`` and ``z_LS`` as ``z[LS, 1]``.
    """
    if inst.rounds != 1:
        raise InstanceError("the one-round LP needs rounds = 1")
    model = LPModel(top_layer=0, bottom_layer=1)
    for j in range(inst.n):
        model.x_index[(j, 0)] = model.add_var(f"y_{inst.name(j)}")
    into: dict[int, list[frozenset]] = {}
    for fd in inst.fds:
        if fd.rhs in inst.targets and fd.rhs not in fd.lhs:
            into.setdefault(fd.rhs, [])
            if fd.lhs not in into[fd.rhs]:
                into[fd.rhs].append(fd.lhs)
            if (fd.lhs, 1) not in model.z_index:
                model.z_index[(fd.lhs, 1)] = model.add_var(f"z_{_ls_name(inst, fd.lhs)}")
    for t in sorted(inst.targets):
        coeffs = {model.x_index[(t, 0)]: 1.0}
        for ls in into.get(t, ()):
            zj = model.z_index[(ls, 1)]
            coeffs[zj] = coeffs.get(zj, 0.0) + 1.0
        model.add_constraint(coeffs, ">=", 1.0, f"cover_{inst.name(t)}")
    for (ls, _), zj in model.z_index.items():
        for j in sorted(ls):
            model.add_constraint({zj: 1.0, model.x_index[(j, 0)]: -1.0}, "<=", 0.0,
                                 f"fire_{_ls_name(inst, ls)}_{inst.name(j)}")
    model.objective = {model.x_index[(j, 0)]: 1.0 for j in range(inst.n)}
    return model


# --- simplex -----------------------------------------------------------------


def _pivot(T: np.ndarray, r: int, c: int):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, c] = 0.0
    T[r, c] = 1.0


def _run(T, basis, obj_row, n_rows, allowed, max_iter):
    """Bland's-rule primal simplex on tableau ``T`` (rhs in the last column)."""
    for _ in range(max_iter):
        row = T[obj_row, :-1]
        cand = np.flatnonzero((row < -_COST_TOL) & allowed)
        if cand.size == 0:
            return "optimal"
        c = int(cand[0])
        colv = T[:n_rows, c]
        rows = np.flatnonzero(colv > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / colv[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
    raise SolverError("simplex iteration limit reached")


def solve_lp(model: LPModel, max_iter: int = 100_000) -> LPSolution:
    """Two-phase dense simplex with Bland's rule.

    Raises :class:`InfeasibleError` when no feasible point exists and
    :class:`SolverError` on unboundedness or a failed post-hoc check.
    """
    nv = model.num_vars
    lb = np.asarray(model.lower, dtype=float)
    ub = np.asarray(model.upper, dtype=float)
    if np.any(~np.isfinite(lb)):
        raise SolverError("free variables are not supported")
    if np.any(lb > ub + FEAS_TOL):
        raise InfeasibleError("empty variable bounds")

    # rows over shifted variables x' = x - lb >= 0
    rows: list[tuple[np.ndarray, str, float]] = []
    for con in model.constraints:
        a = np.zeros(nv)
        for j, v in con.coeffs.items():
            a[j] += v
        rows.append((a, con.sense, con.rhs - float(a @ lb)))
    for j in range(nv):
        if math.isfinite(ub[j]):
            a = np.zeros(nv)
            a[j] = 1.0
            rows.append((a, "<=", ub[j] - lb[j]))

    m = len(rows)
    n_slack = sum(1 for _, s, _ in rows if s != "=")
    A = np.zeros((m, nv + n_slack))
    b = np.zeros(m)
    art_rows = []
    basis = [-1] * m
    k = nv
    for i, (a, sense, rhs) in enumerate(rows):
        A[i, :nv] = a
        if sense == "<=":
            A[i, k] = 1.0
        elif sense == ">=":
            A[i, k] = -1.0
        if sense != "=":
            slack = k
            k += 1
        b[i] = rhs
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
        if sense != "=" and A[i, slack] > 0:
            basis[i] = slack
        else:
            art_rows.append(i)
    n_art = len(art_rows)
    ncols = nv + n_slack + n_art
    T = np.zeros((m + 2, ncols + 1))
    T[:m, : nv + n_slack] = A
    T[:m, -1] = b
    for a_k, i in enumerate(art_rows):
        col = nv + n_slack + a_k
        T[i, col] = 1.0
        basis[i] = col
    cost = np.zeros(ncols)
    for j, v in model.objective.items():
        cost[j] += v
    offset = float(sum(v * lb[j] for j, v in model.objective.items()))
    T[m + 1, :ncols] = cost
    # phase 1 row: minimise the sum of artificials
    T[m, nv + n_slack : ncols] = 1.0
    for i in art_rows:
        T[m] -= T[i]

    allowed = np.ones(ncols, dtype=bool)
    if n_art:
        status = _run(T, basis, m, m, allowed, max_iter)
        if status != "optimal" or -T[m, -1] > FEAS_TOL:
            raise InfeasibleError("LP has no feasible point")
        is_art = np.zeros(ncols, dtype=bool)
        is_art[nv + n_slack :] = True
        keep = []
        for i in range(m):
            if is_art[basis[i]]:
                nz = np.flatnonzero((np.abs(T[i, :-1]) > PIVOT_TOL) & ~is_art)
                if nz.size:
                    c = int(nz[0])
                    _pivot(T, i, c)
                    basis[i] = c
                    keep.append(i)
            else:
                keep.append(i)
        # rows whose artificial could not leave are redundant
        T = T[keep + [m + 1]]
        kept = keep
        basis = [basis[i] for i in keep]
        m = len(keep)
        T = np.delete(T, np.arange(nv + n_slack, ncols), axis=1)
        ncols = nv + n_slack
        obj_row = m
    else:
        T = np.delete(T, m, axis=0)
        kept = list(range(m))
        obj_row = m
    allowed = np.ones(ncols, dtype=bool)
    status = _run(T, basis, obj_row, m, allowed, max_iter)
    if status == "unbounded":
        raise SolverError("LP is unbounded; bounded TCAND models never are")

    x = np.zeros(ncols)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    # refine basic values against the original rows, then check dual feasibility
    duals = None
    if m:
        B = A[np.ix_(kept, basis)]
        try:
            xb = np.linalg.solve(B, b[kept])
            duals = np.linalg.solve(B.T, cost[:ncols][basis])
        except np.linalg.LinAlgError:
            pass
        else:
            if np.all(xb > -FEAS_TOL):
                x = np.zeros(ncols)
                x[basis] = xb
            reduced = cost[:ncols] - A[kept].T @ duals
            if np.min(reduced, initial=0.0) < -1e-7:
                raise SolverError("post-hoc dual feasibility check failed")
    values = x[:nv] + lb
    values = np.where(np.abs(values - np.round(values)) < 1e-12, np.round(values), values)
    if model.violation(values) > FEAS_TOL:
        raise SolverError(f"post-hoc feasibility check failed ({model.violation(values):.2e})")
    values = np.clip(values, lb, ub)
    objective = float(sum(v * values[j] for j, v in model.objective.items()))
    assert abs(objective - (offset + float(cost[:nv] @ x[:nv]))) < 1e-6
    return LPSolution("optimal", objective, values, model, duals)


def lp_lower_bound(inst: Instance) -> float:
    """Optimum of the layered relaxation; never exceeds the integral optimum."""
    return solve_lp(build_layered_lp(inst)).objective


def export_lp(model: LPModel) -> str:
    """CPLEX-LP text for cross-checking with external solvers."""

    def term(coeff, j, first):
        sign = "-" if coeff < 0 else ("" if first else "+")
        mag = abs(coeff)
        mag_s = "" if mag == 1 else f"{mag:g} "
        return f"{sign} {mag_s}{model.names[j]}".strip() if first else f"{sign} {mag_s}{model.names[j]}"

    def expr(coeffs):
        parts = []
        for j, c in sorted(coeffs.items()):
            if c == 0:
                continue
            parts.append(term(c, j, not parts))
        return " ".join(parts) if parts else "0"

    out = ["\\ TCAND relaxation", "Minimize", f" obj: {expr(model.objective)}", "Subject To"]
    for k, c in enumerate(model.constraints):
        name = c.name or f"c{k}"
        out.append(f" {name}: {expr(c.coeffs)} {c.sense} {c.rhs:g}")
    out.append("Bounds")
    for j, nm in enumerate(model.names):
        out.append(f" {model.lower[j]:g} <= {nm} <= {model.upper[j]:g}")
    out.append("End")
    return "\n".join(out) + "\n"
