"""Orbit iteration and tail diagnostics for A[n+1] = A[n] * F(A[n-m]).

Orbits are stored in log coordinates: excursions of the recurrence are
multiplicative (bounded by powers of inf F and sup F), so log space avoids
under/overflow and makes amplitude measurements additive.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .model import GrowthModel

# |ln A| beyond this is treated as numerically certain divergence
LOG_OVERFLOW = 700.0

# tail windows used for the liminf/limsup estimates
N_WINDOWS = 10
ESTIMATE_WINDOWS = 3


@dataclass(frozen=True)
class OrbitTrace:
    """A simulated orbit. log_values[i] holds ln A[i-m] for i = 0 .. m+n_steps."""

    model: GrowthModel
    m: int
    history: tuple[float, ...]
    log_values: np.ndarray
    n_steps: int
    divergent: bool = False

    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    def log_at(self, n: int) -> float:
        """ln A[n], n ranging from -m to n_steps."""
        return float(self.log_values[n + self.m])


@dataclass(frozen=True)
class TailStats:
    burn_in: int
    tail_min: float
    tail_max: float
    liminf_est: float
    limsup_est: float
    last_value: float


@dataclass(frozen=True)
class ConvergenceVerdict:
    converged: bool
    achieved_tolerance: float
    steps_used: int


@dataclass(frozen=True)
class Oscillation:
    """Upward equilibrium crossings and per-cycle peak log-amplitudes.

    crossings holds indices t (in recurrence numbering, history included)
    with A[t] <= x_bar < A[t+1]; peak_amplitudes[k] is the maximum of
    |ln(A[t]/x_bar)| over t in (crossings[k], crossings[k+1]].
    """

    crossings: list[int] = field(default_factory=list)
    peak_amplitudes: list[float] = field(default_factory=list)


def iterate(model: GrowthModel, m: int, history, n_steps: int) -> OrbitTrace:
    """Iterate ln A[n+1] = ln A[n] + ln F(A[n-m]) from an initial history.

    history is oldest-first: history[0] = A[-m], ..., history[m] = A[0].
    If |ln A| exceeds LOG_OVERFLOW the orbit is truncated and flagged
    divergent (numerical evidence of non-persistence).
    """
    if m < 0:
        raise ValueError("delay m must be >= 0")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    history = tuple(float(h) for h in history)
    if len(history) != m + 1:
        raise ValueError(f"history must have m+1 = {m + 1} values, got {len(history)}")
    if any(h <= 0.0 for h in history):
        raise ValueError("history values must be positive")

    logs = [math.log(h) for h in history]
    F = model.F
    divergent = False
    for _ in range(n_steps):
        a_delayed = math.exp(logs[-1 - m])
        nxt = logs[-1] + math.log(F(a_delayed))
        logs.append(nxt)
        if abs(nxt) > LOG_OVERFLOW:
            divergent = True
            break
    return OrbitTrace(
        model=model,
        m=m,
        history=history,
        log_values=np.asarray(logs),
        n_steps=len(logs) - (m + 1),
        divergent=divergent,
    )


def tail_stats(trace: OrbitTrace, burn_in: int) -> TailStats:
    """Empirical liminf/limsup estimates over the post-burn-in tail.

    The tail (indices n > burn_in) is split into N_WINDOWS equal windows;
    the liminf estimate is the min of window-minima over the final
    ESTIMATE_WINDOWS windows (and symmetrically for limsup), which discards
    the residual transient while approximating the limit of running extrema.
    """
    if trace.divergent:
        raise ValueError("orbit diverged; tail statistics are undefined")
    if burn_in >= trace.n_steps:
        raise ValueError("burn_in must be smaller than n_steps")
    tail = trace.log_values[burn_in + trace.m + 1 :]
    if len(tail) < N_WINDOWS * (trace.m + 1):
        raise ValueError(f"tail too short: need at least {N_WINDOWS * (trace.m + 1)} points, got {len(tail)}")

    windows = np.array_split(tail, N_WINDOWS)
    win_min = np.array([w.min() for w in windows])
    win_max = np.array([w.max() for w in windows])
    return TailStats(
        burn_in=burn_in,
        tail_min=float(np.exp(tail.min())),
        tail_max=float(np.exp(tail.max())),
        liminf_est=float(np.exp(win_min[-ESTIMATE_WINDOWS:].min())),
        limsup_est=float(np.exp(win_max[-ESTIMATE_WINDOWS:].max())),
        last_value=float(np.exp(tail[-1])),
    )


def detect_convergence(trace: OrbitTrace, x_bar: float, tol: float, window: int) -> ConvergenceVerdict:
    """Converged iff max |ln(A[n]/x_bar)| over the final `window` entries <= tol."""
    if window > trace.n_steps:
        raise ValueError("window must not exceed n_steps")
    dev = np.abs(trace.log_values[-window:] - math.log(x_bar))
    achieved = float(dev.max())
    return ConvergenceVerdict(
        converged=bool(achieved <= tol) and not trace.divergent,
        achieved_tolerance=achieved,
        steps_used=trace.n_steps,
    )


def detect_oscillation(trace: OrbitTrace, x_bar: float) -> Oscillation:
    """Find upward crossings of x_bar and the peak amplitude of each cycle."""
    dev = trace.log_values - math.log(x_bar)
    up = np.nonzero((dev[:-1] <= 0.0) & (dev[1:] > 0.0))[0]
    crossings = [int(i) - trace.m for i in up]
    peaks = []
    for a, b in zip(up, up[1:]):
        peaks.append(float(np.abs(dev[a + 1 : b + 1]).max()))
    return Oscillation(crossings=crossings, peak_amplitudes=peaks)


def trace_to_csv(trace: OrbitTrace) -> str:
    """Render the orbit as CSV with header n,A_n,log_A_n starting at n = -m."""
    out = io.StringIO()
    out.write("n,A_n,log_A_n\n")
    for i, lv in enumerate(trace.log_values):
        out.write(f"{i - trace.m},{math.exp(lv):.17g},{lv:.17g}\n")
    return out.getvalue()
