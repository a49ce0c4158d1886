"""Semi-implicit time stepping for the degenerate logistic equation.

One step solves

    (I + dt (-Lap_h) + dt diag(n(t_{k+1}, x) u_k^{rho-1})) u_{k+1}
        = (1 + dt lam) u_k,

i.e. diffusion implicit, the logistic power lagged so the reaction enters as
a nonnegative diagonal, and the linear growth explicit in the right-hand-side
multiplier.  The system matrix is an M-matrix, so the scheme preserves
nonnegativity and nodewise comparison (in initial data, in the coefficient n,
and under domain inclusion) — the structural properties the continuous
comparison arguments rest on — at first-order accuracy in dt.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import MovingSet, NuProfile, evaluate_n
from .grid import Field, Grid, MaskedOperator

__all__ = [
    "EquationParams",
    "SchemeConfig",
    "StepState",
    "Trajectory",
    "step",
    "run",
]


@dataclass(frozen=True)
class EquationParams:
    """Growth rate, logistic exponent and the logistic coefficient n(t, x).

    The coefficient is built from the moving set and the nu profile; a None
    moving set means n is identically zero (purely linear equation).  n_func,
    when given, overrides both: a callable (t, points) -> nonnegative values,
    used by property harnesses that need arbitrary coefficients.
    """

    lam: float
    rho: float
    nu: NuProfile | None = None
    moving_set: MovingSet | None = None
    n_func: object = None

    def __post_init__(self):
        if not self.rho > 1.0:
            raise ValueError("logistic exponent rho must exceed 1")
        if self.moving_set is not None and self.nu is None:
            raise ValueError("a moving set needs a nu profile")

    def n_values(self, t: float, points: np.ndarray) -> np.ndarray:
        if self.n_func is not None:
            vals = np.asarray(self.n_func(t, points), dtype=float)
        elif self.moving_set is not None:
            vals = evaluate_n(self.moving_set, self.nu, t, points)
        else:
            return np.zeros(len(points))
        if np.any(vals < 0):
            raise ValueError("logistic coefficient n must be nonnegative")
        return vals


@dataclass(frozen=True)
class SchemeConfig:
    """Step size, inner solve tolerance and the sup-norm abort threshold."""

    dt: float
    solve_tol: float = 1e-10
    growth_cap: float = 1e4

    def validate(self, lam: float) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.dt * max(lam, 0.0) >= 0.5:
            raise ValueError("dt * max(lam, 0) must stay below 0.5")
        if 1.0 + self.dt * lam <= 0.0:
            raise ValueError("1 + dt*lam must be positive")
        if self.growth_cap <= 0:
            raise ValueError("growth cap must be positive")


@dataclass
class StepState:
    t: float
    u: Field


@dataclass
class Trajectory:
    """Recorded norms and snapshots of one run."""

    times: list = field(default_factory=list)
    sup_norms: list = field(default_factory=list)
    l2_norms: list = field(default_factory=list)
    masses: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)   # (t, Field)
    cap_hit: float | None = None
    growth_cap: float = 0.0

    def record(self, state: StepState) -> None:
        self.times.append(state.t)
        self.sup_norms.append(state.u.sup_norm())
        self.l2_norms.append(state.u.l2_norm())
        self.masses.append(state.u.mass())

    def __len__(self) -> int:
        return len(self.times)


def step(state: StepState, params: EquationParams, cfg: SchemeConfig,
         op: MaskedOperator, points: np.ndarray | None = None) -> StepState:
    """Advance one step; state.u must be nonnegative."""
    cfg.validate(params.lam)
    grid = state.u.grid
    if points is None:
        points = grid.points()[op.mask.ravel()]
    u = op.restrict(state.u.values)
    t_next = state.t + cfg.dt
    n_next = params.n_values(t_next, points)
    c = cfg.dt * n_next * np.power(u, params.rho - 1.0)
    rhs = (1.0 + cfg.dt * params.lam) * u
    sol = op.solve_spd(rhs, a=1.0, b=cfg.dt, c=c, tol=cfg.solve_tol, x0=u)
    np.maximum(sol, 0.0, out=sol)   # clip solver roundoff
    return StepState(t=t_next, u=Field(grid, op.extend(sol)))


def run(grid: Grid, params: EquationParams, cfg: SchemeConfig, u0: Field,
        t0: float, t_end: float, sample_every: int = 1,
        snapshot_times=()) -> Trajectory:
    """Iterate step over [t0, t_end], recording norms and snapshots.

    Aborts early (after recording) once the sup-norm exceeds the growth cap;
    the cap-hit time is stored on the trajectory.
    """
    cfg.validate(params.lam)
    if t_end < t0:
        raise ValueError("t_end must not precede t0")
    if np.any(u0.values < 0):
        raise ValueError("initial data must be nonnegative")
    op = MaskedOperator(grid)
    points = grid.points()[op.mask.ravel()]
    state = StepState(t=t0, u=u0.copy())
    tr = Trajectory(growth_cap=cfg.growth_cap)
    tr.record(state)
    pending_snaps = sorted(float(t) for t in snapshot_times)
    if pending_snaps and abs(pending_snaps[0] - t0) <= 0.5 * cfg.dt:
        tr.snapshots.append((state.t, state.u.copy()))
        pending_snaps.pop(0)
    n_steps = int(round((t_end - t0) / cfg.dt))
    for k in range(1, n_steps + 1):
        state = step(state, params, cfg, op, points)
        if pending_snaps and state.t >= pending_snaps[0] - 0.5 * cfg.dt:
            tr.snapshots.append((state.t, state.u.copy()))
            pending_snaps.pop(0)
        if k % sample_every == 0 or k == n_steps:
            tr.record(state)
            if tr.sup_norms[-1] > cfg.growth_cap:
                tr.cap_hit = state.t
                break
    return tr
