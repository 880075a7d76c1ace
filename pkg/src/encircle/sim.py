"""Fixed-step closed-loop simulation of the cooperative engagement.

Integrates, with a classical 4th-order Runge-Kutta scheme and controls
re-evaluated at every stage, the coupled system of all attacker LOS-frame
states, adaptive parameters, observer states and the target pose.  Detects
intercepts (range crossing a small threshold), freezes intercepted attackers
and drops them from their neighbors' coupling sums, and records per-step
diagnostics: enclosing area, the Lyapunov-style energies of both channels,
and the LOS rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from . import _fast, guidance, propagation
from .engagement import (
    AttackerConfig,
    Maneuver,
    TargetState,
    bearing_angles,
    relative_velocity,
    reverse_los,
    target_accel_profile,
    wrap_angle,
)
from .guidance import GuidanceParams
from .topology import CommGraph, has_spanning_tree

Array = NDArray[np.float64]

MODES = ("known_accel", "observer")
INFO_MODES = ("omniscient", "distributed")


@dataclass
class ScenarioConfig:
    """Full description of one simulation run."""

    attackers: list[AttackerConfig]
    target: TargetState
    maneuver: Maneuver
    graph: CommGraph
    params: GuidanceParams
    mode: str = "known_accel"
    info_mode: str = "omniscient"
    observers: tuple[int, ...] = (0,)
    mu0: float = 1.0
    z0: float = 0.0
    h: float = 1e-3
    t_end: float = 20.0
    intercept_eps: float = 0.01

    @property
    def n(self) -> int:
        return len(self.attackers)

    def validation_errors(self) -> list[str]:
        """All violated invariants, reported together."""
        errs: list[str] = []
        if self.mode not in MODES:
            errs.append(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.info_mode not in INFO_MODES:
            errs.append(f"info_mode must be one of {INFO_MODES}, got {self.info_mode!r}")
        if self.n < 1:
            errs.append("at least one attacker is required")
        if self.graph.n != self.n:
            errs.append(f"graph has {self.graph.n} nodes for {self.n} attackers")
        elif not has_spanning_tree(self.graph):
            errs.append("communication graph has no spanning tree")
        for k, a in enumerate(self.attackers):
            if a.speed >= self.target.speed:
                errs.append(
                    f"attacker {k} speed {a.speed} must be below target speed {self.target.speed}"
                )
        errs.extend(self.params.validation_errors())
        if self.params.initial_ranges.shape != (self.n,):
            errs.append("params.initial_ranges must have one entry per attacker")
        if self.h <= 0:
            errs.append("step size h must be positive")
        if self.t_end <= 0:
            errs.append("t_end must be positive")
        if self.intercept_eps <= 0:
            errs.append("intercept_eps must be positive")
        if self.mode == "observer":
            if self.maneuver.kind != "exogenous":
                errs.append("observer mode requires the exogenous maneuver model")
            elif self.maneuver.pole != self.params.accel_pole:
                errs.append(
                    "observer mode requires maneuver.pole == params.accel_pole "
                    f"({self.maneuver.pole} != {self.params.accel_pole})"
                )
        if self.info_mode == "distributed":
            if not self.observers:
                errs.append("distributed info mode needs a nonempty observer set")
            bad = [i for i in self.observers if not 0 <= i < self.n]
            if bad:
                errs.append(f"observer indices out of range: {bad}")
        return errs

    def validate(self) -> None:
        errs = self.validation_errors()
        if errs:
            raise ScenarioError(errs)


class ScenarioError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("invalid scenario: " + "; ".join(errors))
        self.errors = errors


class NumericalFailure(RuntimeError):
    def __init__(self, t: float):
        super().__init__(f"non-finite state at t = {t:.6f} s")
        self.t = t


@dataclass
class InterceptEvent:
    attacker: int
    time: float
    v_r: float


@dataclass
class SimState:
    """Integration state at one instant, plus the active (not yet
    intercepted) mask."""

    t: float
    y: Array
    active: NDArray[np.bool_]


@dataclass
class Trace:
    """Time-indexed record of a run on the uniform step grid.

    Attacker arrays have shape (steps, n); intercept times are interpolated
    within a step and stored in ``events``.
    """

    cfg: ScenarioConfig
    t: Array
    r: Array
    los: Array
    v_r: Array
    v_los: Array
    a_mr: Array
    a_mlos: Array
    mu: Array
    z: Array
    a_mag: Array
    x: Array
    y: Array
    target_x: Array
    target_y: Array
    target_heading: Array
    target_accel: Array
    area: Array
    v1: Array
    v2: Array
    v3: Array
    w: Array
    events: list[InterceptEvent] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return self.t.shape[0]


@dataclass
class SimultaneityResult:
    """Arrival synchronization summary: spread of intercept times and the
    worst leftover range when the last intercept (or the run) ends."""

    spread: float
    miss: float
    all_intercepted: bool


# --- state vector layout -------------------------------------------------

def _slices(n: int):
    return (
        slice(0, n),            # r
        slice(n, 2 * n),        # los
        slice(2 * n, 3 * n),    # v_r
        slice(3 * n, 4 * n),    # v_los
        slice(4 * n, 5 * n),    # mu
        slice(5 * n, 6 * n),    # z
    )


class _Runtime:
    """Precomputed constants for one run."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        n = cfg.n
        self.n = n
        self.speeds = np.array([a.speed for a in cfg.attackers])
        self.weights = cfg.graph.weights
        self.sl_r, self.sl_los, self.sl_vr, self.sl_vlos, self.sl_mu, self.sl_z = _slices(n)
        self.i_tx, self.i_ty, self.i_th, self.i_ta = 6 * n, 6 * n + 1, 6 * n + 2, 6 * n + 3
        self.use_fast = _fast.HAVE_NUMBA and cfg.info_mode == "omniscient"
        man_kinds = {"none": _fast.MAN_NONE, "sinusoid": _fast.MAN_SINUSOID,
                     "exogenous": _fast.MAN_EXOGENOUS}
        self._fast_args = (
            n,
            self.speeds,
            cfg.target.speed,
            self.weights,
            cfg.params.initial_ranges,
            _fast.MODE_OBSERVER if cfg.mode == "observer" else _fast.MODE_KNOWN,
            cfg.params.normal_gain,
            cfg.params.tangent_gain,
            cfg.params.closing_speed,
            cfg.params.accel_pole,
            man_kinds[cfg.maneuver.kind],
            cfg.maneuver.amplitude,
            cfg.maneuver.frequency,
            cfg.maneuver.pole,
            cfg.maneuver.initial,
        )

    def initial_state(self) -> SimState:
        cfg = self.cfg
        n = self.n
        y = np.zeros(6 * n + 4)
        for k, a in enumerate(cfg.attackers):
            ang = bearing_angles(a.los0, a.heading0, cfg.target.heading)
            v_r, v_los = relative_velocity(ang, a.speed, cfg.target.speed)
            y[self.sl_r][k] = a.r0
            y[self.sl_los][k] = a.los0
            y[self.sl_vr][k] = v_r
            y[self.sl_vlos][k] = v_los
        y[self.sl_mu] = cfg.mu0
        y[self.sl_z] = cfg.z0
        y[self.i_tx] = cfg.target.x
        y[self.i_ty] = cfg.target.y
        y[self.i_th] = cfg.target.heading
        y[self.i_ta] = cfg.maneuver.initial if cfg.maneuver.kind == "exogenous" else 0.0
        return SimState(t=0.0, y=y, active=np.ones(n, dtype=bool))

    def target_accel(self, t: float, y: Array) -> float:
        if self.cfg.maneuver.kind == "exogenous":
            return float(y[self.i_ta])
        return target_accel_profile(t, self.cfg.maneuver)

    def info_ranges_los(self, y: Array) -> tuple[Array, Array]:
        """(range, LOS) arrays each attacker works with.

        In omniscient mode the true state; in distributed mode the values
        flooded from the observer set through the communication graph, with
        inter-attacker geometry taken from the reconstructed true positions.
        """
        r = y[self.sl_r]
        los = y[self.sl_los]
        if self.cfg.info_mode == "omniscient":
            return r, los
        xs = y[self.i_tx] - r * np.cos(los)
        ys = y[self.i_ty] - r * np.sin(los)
        baselines, bearings = propagation.pair_geometry_from_positions(xs, ys)
        obs = propagation.ObservationSet(
            observers=frozenset(self.cfg.observers),
            known={i: (float(r[i]), float(los[i])) for i in self.cfg.observers},
        )
        out = propagation.flood(self.cfg.graph, obs, baselines, bearings)
        # Unreachable nodes fall back to their own true state; the scenario
        # validator guarantees this does not happen for spanning-tree graphs
        # rooted at an observer.
        r2, los2 = r.copy(), los.copy()
        for i, (ri, li) in out.known.items():
            r2[i] = ri
            los2[i] = li
        return r2, los2

    def controls(self, t: float, y: Array, active: NDArray[np.bool_]) -> tuple[Array, Array]:
        """LOS-frame acceleration commands for all attackers at state y.

        Coupling terms toward intercepted attackers are dropped (their
        adjacency column is zeroed).
        """
        cfg = self.cfg
        r_info, los_info = self.info_ranges_los(y)
        v_r = y[self.sl_vr]
        v_los = y[self.sl_vlos]
        w_eff = self.weights * active[None, :]
        rev = los_info % (2.0 * np.pi) - np.pi  # antipodal LOS, already in [-pi, pi)
        aspect = wrap_vec(y[self.i_th] - rev)
        if cfg.mode == "known_accel":
            a_t = self.target_accel(t, y)
            a_tr = -a_t * np.sin(aspect)
            a_tlos = a_t * np.cos(aspect)
            return guidance.known_accel_law(
                r_info, los_info, v_r, v_los, self.speeds, cfg.target.speed,
                w_eff, cfg.params, a_tr, a_tlos,
            )
        return guidance.observer_law(
            r_info, los_info, v_r, v_los, self.speeds, cfg.target.speed,
            w_eff, cfg.params, aspect, y[self.sl_z],
        )

    def derivs(self, t: float, y: Array, active: NDArray[np.bool_]) -> Array:
        cfg = self.cfg
        dy = np.zeros_like(y)
        r = y[self.sl_r]
        v_r = y[self.sl_vr]
        v_los = y[self.sl_vlos]
        a_mr, a_mlos = self.controls(t, y, active)

        rev = y[self.sl_los] % (2.0 * np.pi) - np.pi  # antipodal LOS
        aspect = wrap_vec(y[self.i_th] - rev)
        a_t = self.target_accel(t, y)
        a_tr = -a_t * np.sin(aspect)
        a_tlos = a_t * np.cos(aspect)

        dy[self.sl_r] = v_r
        dy[self.sl_los] = v_los / r
        dy[self.sl_vr] = v_los**2 / r - a_mr + a_tr
        dy[self.sl_vlos] = -v_los * v_r / r - a_mlos + a_tlos
        dy[self.sl_mu] = guidance.adaptive_rate(y[self.sl_mu], r, v_r, cfg.params.closing_speed)
        if cfg.mode == "observer":
            sigma1, sigma2 = guidance.observer_coefficients(
                r, y[self.sl_los], aspect, self.weights * active[None, :],
                cfg.params.initial_ranges,
            )
            dy[self.sl_z] = guidance.observer_rate(
                y[self.sl_z], cfg.params.accel_pole, sigma1, sigma2, v_los, v_r
            )
        # frozen attackers keep their state
        if not active.all():
            for sl in (self.sl_r, self.sl_los, self.sl_vr, self.sl_vlos, self.sl_mu, self.sl_z):
                dy[sl][~active] = 0.0
        dy[self.i_tx] = cfg.target.speed * math.cos(y[self.i_th])
        dy[self.i_ty] = cfg.target.speed * math.sin(y[self.i_th])
        dy[self.i_th] = a_t / cfg.target.speed
        if cfg.maneuver.kind == "exogenous":
            dy[self.i_ta] = cfg.maneuver.pole * y[self.i_ta]
        return dy


def wrap_vec(a):
    """Vectorized angle wrap to [-pi, pi)."""
    return (np.asarray(a) + np.pi) % (2.0 * np.pi) - np.pi


def step(state: SimState, cfg: ScenarioConfig, rt: _Runtime | None = None) -> SimState:
    """One RK4 step of size cfg.h with stage-wise control re-evaluation.

    Dispatches to the compiled core when available; the numpy path below is
    the reference implementation and the fallback for distributed-info runs.
    """
    if rt is None:
        rt = _Runtime(cfg)
    t, y, active = state.t, state.y, state.active
    h = cfg.h
    if rt.use_fast:
        y_new, ok = _fast.rk4_step(t, y, active, h, *rt._fast_args)
        if not ok:
            raise NumericalFailure(t + h)
        return SimState(t=t + h, y=y_new, active=active.copy())
    k1 = rt.derivs(t, y, active)
    k2 = rt.derivs(t + 0.5 * h, y + 0.5 * h * k1, active)
    k3 = rt.derivs(t + 0.5 * h, y + 0.5 * h * k2, active)
    k4 = rt.derivs(t + h, y + h * k3, active)
    y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y_new)):
        raise NumericalFailure(t + h)
    return SimState(t=t + h, y=y_new, active=active.copy())


# --- diagnostics ---------------------------------------------------------

def lyapunov_v1(r: Array, los: Array, v_los: Array, weights: Array, r0: Array) -> float:
    """Transverse-channel energy: the area-weighted plus plain sums of
    squared transverse rates."""
    cross = r[:, None] * r[None, :] * np.sin(guidance.pair_thetas(los))
    norm = r0[:, None] ** 2 * r0[None, :] ** 2
    coupled = 0.5 * float(np.sum(weights * (v_los[:, None] ** 2) * cross**2 / norm))
    return coupled + 0.5 * float(np.sum(v_los**2))


def lyapunov_v2(r: Array, v_r: Array, mu: Array, weights: Array, closing_speed: float) -> float:
    """Tangential-channel energy: range and closing-rate disagreement plus
    the adaptive-parameter terms."""
    dr = r[:, None] - r[None, :]
    dv = v_r[:, None] - v_r[None, :]
    pair = 0.5 * float(np.sum(weights * (dr**2 + dv**2)))
    off = v_r + closing_speed
    return pair + 0.5 * float(np.sum(mu**2 * off**2)) + 0.5 * float(np.sum(mu**2))


def lyapunov_w(r: Array, v_r: Array, est_err: Array) -> float:
    """Radial-and-estimation energy of the observer analysis."""
    return 0.5 * float(np.sum(r**2) + np.sum(v_r**2) + np.sum(est_err**2))


def lyapunov_v3(r: Array, los: Array, v_r: Array, v_los: Array, est_err: Array,
                weights: Array, r0: Array) -> float:
    """Observer-mode energy: transverse part plus the radial/estimation part.

    ``est_err`` is the ground-truth target acceleration minus the observer
    estimates; it is available to diagnostics only.
    """
    return lyapunov_v1(r, los, v_los, weights, r0) + lyapunov_w(r, v_r, est_err)


# --- driver --------------------------------------------------------------

def run(cfg: ScenarioConfig) -> Trace:
    """Integrate from t = 0 until t_end or until every attacker intercepts.

    The intercept time of attacker i is the first crossing of
    ``intercept_eps`` by its range, linearly interpolated within the step;
    the attacker's state is frozen from the end of that step on.
    """
    cfg.validate()
    rt = _Runtime(cfg)
    n = cfg.n
    nsteps = int(math.floor(cfg.t_end / cfg.h + 0.5))
    m = nsteps + 1

    def alloc(*shape):
        return np.full(shape, np.nan)

    tr = Trace(
        cfg=cfg,
        t=alloc(m),
        r=alloc(m, n), los=alloc(m, n), v_r=alloc(m, n), v_los=alloc(m, n),
        a_mr=alloc(m, n), a_mlos=alloc(m, n), mu=alloc(m, n), z=alloc(m, n),
        a_mag=alloc(m, n), x=alloc(m, n), y=alloc(m, n),
        target_x=alloc(m), target_y=alloc(m), target_heading=alloc(m),
        target_accel=alloc(m),
        area=alloc(m), v1=alloc(m), v2=alloc(m), v3=alloc(m), w=alloc(m),
    )

    state = rt.initial_state()
    _record(tr, rt, state, 0)
    last = 0
    for k in range(1, m):
        new = step(state, cfg, rt)
        # intercept detection on the active set
        r_old = state.y[rt.sl_r]
        r_new = new.y[rt.sl_r]
        hit = state.active & (r_new <= cfg.intercept_eps)
        for i in np.flatnonzero(hit):
            i = int(i)
            denom = r_old[i] - r_new[i]
            frac = (r_old[i] - cfg.intercept_eps) / denom if denom > 0 else 1.0
            frac = min(max(frac, 0.0), 1.0)
            t_hit = state.t + frac * cfg.h
            v_hit = state.y[rt.sl_vr][i] + frac * (new.y[rt.sl_vr][i] - state.y[rt.sl_vr][i])
            tr.events.append(InterceptEvent(attacker=i, time=float(t_hit), v_r=float(v_hit)))
            new.active[i] = False
        state = new
        _record(tr, rt, state, k)
        last = k
        if not state.active.any():
            break

    if last < nsteps:  # early full intercept: truncate the grid
        for name in ("t", "r", "los", "v_r", "v_los", "a_mr", "a_mlos", "mu", "z",
                     "a_mag", "x", "y", "target_x", "target_y", "target_heading",
                     "target_accel", "area", "v1", "v2", "v3", "w"):
            setattr(tr, name, getattr(tr, name)[: last + 1])
    tr.events.sort(key=lambda e: e.time)
    return tr


def _record(tr: Trace, rt: _Runtime, state: SimState, k: int) -> None:
    cfg = rt.cfg
    y = state.y
    r = y[rt.sl_r]
    los = y[rt.sl_los]
    if rt.use_fast:
        a_mr = np.empty(rt.n)
        a_mlos = np.empty(rt.n)
        area, v1, v2, w_part = _fast.diag_core(
            state.t, y, state.active, *rt._fast_args, a_mr, a_mlos
        )
        a_t = rt.target_accel(state.t, y)
        tr.t[k] = state.t
        tr.r[k] = r
        tr.los[k] = los
        tr.v_r[k] = y[rt.sl_vr]
        tr.v_los[k] = y[rt.sl_vlos]
        tr.a_mr[k] = a_mr
        tr.a_mlos[k] = a_mlos
        tr.mu[k] = y[rt.sl_mu]
        tr.z[k] = y[rt.sl_z]
        tr.a_mag[k] = np.hypot(a_mr, a_mlos)
        tr.x[k] = y[rt.i_tx] - r * np.cos(los)
        tr.y[k] = y[rt.i_ty] - r * np.sin(los)
        tr.target_x[k] = y[rt.i_tx]
        tr.target_y[k] = y[rt.i_ty]
        tr.target_heading[k] = y[rt.i_th]
        tr.target_accel[k] = a_t
        tr.area[k] = area
        tr.v1[k] = v1
        tr.v2[k] = v2
        if cfg.mode == "observer":
            tr.w[k] = w_part
            tr.v3[k] = v1 + w_part
        return
    a_mr, a_mlos = rt.controls(state.t, y, state.active)
    tr.t[k] = state.t
    tr.r[k] = r
    tr.los[k] = los
    tr.v_r[k] = y[rt.sl_vr]
    tr.v_los[k] = y[rt.sl_vlos]
    tr.a_mr[k] = a_mr
    tr.a_mlos[k] = a_mlos
    tr.mu[k] = y[rt.sl_mu]
    tr.z[k] = y[rt.sl_z]
    tr.a_mag[k] = np.hypot(a_mr, a_mlos)
    tr.x[k] = y[rt.i_tx] - r * np.cos(los)
    tr.y[k] = y[rt.i_ty] - r * np.sin(los)
    tr.target_x[k] = y[rt.i_tx]
    tr.target_y[k] = y[rt.i_ty]
    tr.target_heading[k] = y[rt.i_th]
    a_t = rt.target_accel(state.t, y)
    tr.target_accel[k] = a_t
    w = rt.weights
    r0 = cfg.params.initial_ranges
    tr.area[k] = guidance.enclosing_area(r, los, w)
    tr.v1[k] = lyapunov_v1(r, los, y[rt.sl_vlos], w, r0)
    tr.v2[k] = lyapunov_v2(r, y[rt.sl_vr], y[rt.sl_mu], w, cfg.params.closing_speed)
    if cfg.mode == "observer":
        err = a_t - y[rt.sl_z]
        tr.w[k] = lyapunov_w(r, y[rt.sl_vr], err)
        tr.v3[k] = tr.v1[k] + tr.w[k]


def los_rates(tr: Trace) -> Array:
    """LOS angular rates v_los / r for every recorded step."""
    return tr.v_los / tr.r


def simultaneity_metrics(tr: Trace) -> SimultaneityResult:
    """Spread of intercept times and worst leftover range.

    With no intercepts at all the result is flagged (NaN spread, full miss).
    """
    n = tr.cfg.n
    if not tr.events:
        return SimultaneityResult(spread=float("nan"), miss=float(np.max(tr.r[-1])),
                                  all_intercepted=False)
    times = [e.time for e in tr.events]
    done = {e.attacker for e in tr.events}
    complete = len(done) == n
    if complete:
        miss = 0.0
    else:
        # leftover ranges of stragglers at the last intercept
        k = int(np.searchsorted(tr.t, max(times)))
        k = min(k, tr.steps - 1)
        rest = [i for i in range(n) if i not in done]
        miss = float(np.max(tr.r[k, rest]))
    return SimultaneityResult(spread=float(max(times) - min(times)), miss=miss,
                              all_intercepted=complete)
