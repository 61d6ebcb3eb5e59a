"""Built-in property suites, runnable from the CLI (`delaypop verify`).

Each suite draws seeded random cases and checks an invariant of the library
at desk scale; together they cross-check the simulator against the analytic
criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import estimate_log_lipschitz, paper_L, persistence_envelope
from .model import make_bobwhite, make_pielou
from .simulate import detect_oscillation, iterate, tail_stats

# bobwhite draw box where the closed-form L is the tight constant on the
# truncated domain (slope argmax interior to (0, x_bar*c^(m+1)))
L_BOX = dict(alpha=(0.3, 0.8), total=(1.8, 3.0), r=(0.5, 2.0))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_bobwhite(rng, box=None):
    box = box or dict(alpha=(0.1, 0.9), total=(1.1, 3.0), r=(0.5, 2.0))
    alpha = rng.uniform(*box["alpha"])
    total = rng.uniform(*box["total"])
    r = rng.uniform(*box["r"])
    return make_bobwhite(alpha, total - alpha, r)


def suite_residual(seed: int) -> SuiteResult:
    """Recurrence residual |ln A[n+1] - ln A[n] - ln F(A[n-m])| <= 1e-12."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        model = _random_bobwhite(rng) if rng.integers(2) else make_pielou(rng.uniform(1.2, 4), rng.uniform(0.2, 5))
        m = int(rng.integers(0, 4))
        hist = np.exp(rng.uniform(math.log(model.x_bar / 4), math.log(4 * model.x_bar), m + 1))
        trace = iterate(model, m, hist, 200)
        lv = trace.log_values
        for i in range(m + 1, len(lv)):
            resid = abs(lv[i] - lv[i - 1] - math.log(model.F(math.exp(lv[i - 1 - m]))))
            worst = max(worst, resid)
    return SuiteResult("residual", worst <= 1e-12, f"max residual {worst:.3e}")


def suite_envelope(seed: int) -> SuiteResult:
    """Tail extrema stay inside the uniform persistence envelope; when the
    tail crosses the equilibrium, the windowed estimates bracket it."""
    rng = np.random.default_rng(seed)
    violations = 0
    checked = 0
    for _ in range(100):
        model = _random_bobwhite(rng)
        m = int(rng.integers(0, 4))
        lower, upper = persistence_envelope(model, m)
        for _ in range(3):
            hist = np.exp(rng.uniform(math.log(model.x_bar / 4), math.log(4 * model.x_bar), m + 1))
            trace = iterate(model, m, hist, 20000)
            checked += 1
            if trace.divergent:
                violations += 1
                continue
            ts = tail_stats(trace, 10000)
            if ts.tail_min < lower or ts.tail_max > upper:
                violations += 1
                continue
            osc = detect_oscillation(trace, model.x_bar)
            tail_crossings = [t for t in osc.crossings if t > 10000]
            if tail_crossings and not (ts.liminf_est <= model.x_bar <= ts.limsup_est):
                violations += 1
    return SuiteResult("envelope", violations == 0, f"{violations} violations in {checked} orbits")


def suite_equivariance(seed: int) -> SuiteResult:
    """Rescaling x -> lambda*x conjugates pielou(beta, lambda) to pielou(beta, 1)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        beta = rng.uniform(1.2, 4)
        lam = rng.uniform(0.1, 10)
        m = int(rng.integers(0, 4))
        model = make_pielou(beta, lam)
        ref = make_pielou(beta, 1.0)
        hist = np.exp(rng.uniform(math.log(model.x_bar / 4), math.log(4 * model.x_bar), m + 1))
        a = iterate(model, m, hist, 500).values()
        b = iterate(ref, m, lam * hist, 500).values() / lam
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    return SuiteResult("equivariance", worst <= 1e-12, f"max relative deviation {worst:.3e}")


def suite_lipschitz(seed: int) -> SuiteResult:
    """Grid L estimate agrees with the bobwhite closed form within 1%."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        model = _random_bobwhite(rng, L_BOX)
        est = estimate_log_lipschitz(model, 1, 10**5)
        worst = max(worst, abs(est.L_hat - paper_L(model)) / paper_L(model))
    return SuiteResult("lipschitz", worst <= 0.01, f"max relative error {worst:.3e}")


SUITES = {
    "residual": suite_residual,
    "envelope": suite_envelope,
    "equivariance": suite_equivariance,
    "lipschitz": suite_lipschitz,
}


def run_suites(seed: int = 0, only: str | None = None) -> list[SuiteResult]:
    names = [only] if only else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}; available: {', '.join(SUITES)}")
    return [SUITES[n](seed) for n in names]
