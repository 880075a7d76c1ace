"""Run-level verification of the convergence claims.

Each check turns one qualitative claim about a run (simultaneous arrival,
monotone energies, area collapse, LOS quieting, observer error decay) into a
pass/fail result at a fixed tolerance.  The checks operate on a recorded
Trace and are shared by the CLI ``check`` subcommand and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sim import Trace, los_rates, simultaneity_metrics

#: Per-step slack on energy finite differences, scaled by max(value, 1).
LYAPUNOV_TOL = 1e-6
#: Intercept-time spread bound (s).
SPREAD_TOL = 0.05
#: Enclosing area must fall below this fraction of its initial value.
AREA_FRACTION = 0.01
#: Late-window LOS-rate bound as a fraction of the early-window value.
LOS_QUIET_FRACTION = 0.05
#: Observer error bound at intercept as a fraction of the peak target accel.
OBSERVER_ERROR_FRACTION = 0.10


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


@dataclass
class RunSummary:
    intercept_times: list[float]
    spread: float
    final_area: float
    lyapunov_violations: int
    max_implied_accel: float

    @classmethod
    def from_trace(cls, tr: Trace) -> "RunSummary":
        sm = simultaneity_metrics(tr) if tr.events else None
        violations = 0
        for series in _energy_series(tr):
            violations += int(np.sum(_violation_mask(tr, series)))
        return cls(
            intercept_times=[e.time for e in tr.events],
            spread=sm.spread if sm else float("nan"),
            final_area=float(tr.area[-1]),
            lyapunov_violations=violations,
            max_implied_accel=float(np.nanmax(tr.a_mag)),
        )


def _pre_intercept_end(tr: Trace) -> int:
    """Index one past the last recorded step before the first intercept
    (the whole run when nothing intercepts)."""
    if not tr.events:
        return tr.steps
    t_first = min(e.time for e in tr.events)
    return max(2, int(np.searchsorted(tr.t, t_first)))


def _energy_series(tr: Trace) -> list[tuple[str, np.ndarray]]:
    if tr.cfg.mode == "observer":
        return [("V3", tr.v3)]
    return [("V1", tr.v1), ("V2", tr.v2)]


def _violation_mask(tr: Trace, series: tuple[str, np.ndarray]) -> np.ndarray:
    _, v = series
    end = _pre_intercept_end(tr)
    dv = np.diff(v[:end])
    return dv > LYAPUNOV_TOL * np.maximum(v[: end - 1], 1.0)


def check_intercepts(tr: Trace) -> CriterionResult:
    """Every attacker reaches the intercept threshold within the horizon."""
    done = {e.attacker for e in tr.events}
    n = tr.cfg.n
    if len(done) == n:
        t_last = max(e.time for e in tr.events)
        return CriterionResult(
            "all-intercept", True,
            f"all {n} attackers intercepted, last at t = {t_last:.3f} s",
        )
    left = sorted(set(range(n)) - done)
    ranges = ", ".join(f"{tr.r[-1, i]:.4f}" for i in left)
    return CriterionResult(
        "all-intercept", False,
        f"attackers {left} never reached {tr.cfg.intercept_eps} km by "
        f"t = {tr.t[-1]:.1f} s (final ranges {ranges} km)",
    )


def check_spread(tr: Trace, tol: float = SPREAD_TOL) -> CriterionResult:
    sm = simultaneity_metrics(tr)
    if not sm.all_intercepted:
        return CriterionResult("arrival-spread", False,
                               "not all attackers intercepted; spread undefined")
    ok = sm.spread <= tol
    return CriterionResult("arrival-spread", ok,
                           f"spread = {sm.spread:.4f} s (tolerance {tol} s)")


def check_lyapunov(tr: Trace) -> list[CriterionResult]:
    """Per-step finite differences of the channel energies stay within the
    monotonicity slack before the first intercept."""
    out = []
    for name, v in _energy_series(tr):
        bad = _violation_mask(tr, (name, v))
        count = int(np.sum(bad))
        detail = f"{count} violating steps of {bad.size} (tol {LYAPUNOV_TOL} * max(V, 1))"
        out.append(CriterionResult(f"monotone-{name}", count == 0, detail))
    return out


def check_area(tr: Trace, frac: float = AREA_FRACTION) -> CriterionResult:
    end = _pre_intercept_end(tr)
    s0 = tr.area[0]
    s_min = float(np.min(tr.area[:end]))
    ok = s_min < frac * s0
    return CriterionResult(
        "area-collapse", ok,
        f"min S / S0 = {s_min / s0:.2e} before first intercept (bound {frac})",
    )


def check_los_quiet(tr: Trace, frac: float = LOS_QUIET_FRACTION) -> CriterionResult:
    """Peak LOS rate over the last quarter of the pre-intercept window
    against the first quarter."""
    end = _pre_intercept_end(tr)
    rates = np.abs(los_rates(tr)[:end])
    q = max(end // 4, 1)
    early = float(np.max(rates[:q]))
    late = float(np.max(rates[end - q:]))
    ok = late < frac * early
    return CriterionResult(
        "los-rate-quieting", ok,
        f"late/early peak LOS rate = {late:.4g}/{early:.4g} = {late / early:.3f} "
        f"(bound {frac})",
    )


def check_observer_error(tr: Trace, frac: float = OBSERVER_ERROR_FRACTION) -> CriterionResult:
    """Estimation error at each attacker's intercept stays below a fraction
    of the peak target acceleration over the run."""
    scale = float(np.max(np.abs(tr.target_accel)))
    done = {e.attacker: e.time for e in tr.events}
    if len(done) < tr.cfg.n:
        return CriterionResult("observer-error", False,
                               "not all attackers intercepted; error-at-intercept undefined")
    worst = 0.0
    for i, t_hit in done.items():
        k = min(int(np.searchsorted(tr.t, t_hit)), tr.steps - 1)
        err = abs(tr.target_accel[k] - tr.z[k, i])
        worst = max(worst, err)
    ok = worst < frac * scale
    return CriterionResult(
        "observer-error", ok,
        f"worst |error| at intercept = {worst:.4g} vs bound {frac * scale:.4g}",
    )


def run_checks(tr: Trace) -> list[CriterionResult]:
    """All checks applicable to the trace's mode."""
    out = [check_intercepts(tr), check_spread(tr)]
    out.extend(check_lyapunov(tr))
    out.append(check_area(tr))
    out.append(check_los_quiet(tr))
    if tr.cfg.mode == "observer":
        out.append(check_observer_error(tr))
    return out
