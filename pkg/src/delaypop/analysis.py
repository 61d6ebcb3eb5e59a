"""Stability and persistence criteria for the delayed recurrence.

Implements, for a model and delay m:

* the standing hypotheses on F (positivity/boundedness, limits at 0 and inf),
* the uniform persistence envelope [x_bar*a^(m+1), x_bar*c^(m+1)] with
  a = inf F, c = sup F,
* the log-Lipschitz constant L of |ln F(x)| <= L*|ln(x/x_bar)| on
  (0, x_bar*c^(m+1)), both in closed form and by a numerical grid supremum,
* the 3/2-type delay condition (m + 3/2)*L < 3/2 and its predicted per-cycle
  amplitude contraction factor q = L*(m + 3/2) - 1/2,
* the two published bobwhite r-thresholds (Graef et al. 1998; Liz 2007).

The closed-form L and the grid estimate are always reported side by side;
for the pielou family with beta > 2 they genuinely disagree (the published
constant is smaller than the slope supremum on the stated domain), and the
report records both verdicts rather than preferring one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BOBWHITE, PIELOU, GrowthModel
from .simulate import (
    ConvergenceVerdict,
    TailStats,
    detect_convergence,
    iterate,
    tail_stats,
)

DEFAULT_GRID_SIZE = 10**5

# relative half-width of the excluded neighborhood of x_bar on the grid
XBAR_EXCLUSION = 1e-6
# lower end of the grid relative to x_bar (the domain is open at 0)
GRID_FLOOR = 1e-9
# central-difference step in ln x for the local slope
SLOPE_STEP = 1e-5


@dataclass(frozen=True)
class HypothesisCheck:
    bounded_positive: bool       # 0 < F(x) <= c < inf
    decays_below_one: bool       # limsup of F at infinity < 1
    grows_above_one: bool        # liminf of F at 0+ > 1
    sampled_min: float
    sampled_max: float

    def all_hold(self) -> bool:
        return self.bounded_positive and self.decays_below_one and self.grows_above_one


@dataclass(frozen=True)
class LipschitzEstimate:
    L_hat: float
    L_local: float
    domain_upper: float
    grid_size: int
    argmax_x: float


@dataclass(frozen=True)
class SimOptions:
    n_steps: int = 20000
    burn_in: int = 10000
    tol: float = 1e-6
    window: int = 100
    histories: tuple[tuple[float, ...], ...] | None = None
    n_histories: int = 3
    seed: int = 0


@dataclass(frozen=True)
class SimulationSummary:
    converged: bool
    achieved_tolerance: float
    liminf_est: float | None
    limsup_est: float | None
    in_envelope: bool
    any_divergent: bool
    n_histories: int


@dataclass(frozen=True)
class StabilityReport:
    model: GrowthModel
    m: int
    hypotheses: HypothesisCheck
    condition_26: bool
    envelope_lower: float | None
    envelope_upper: float
    L_paper: float
    lipschitz: LipschitzEstimate
    theorem3_paper: bool
    theorem3_paper_margin: float
    theorem3_numeric: bool
    theorem3_numeric_margin: float
    contraction_q: float | None
    graef_r_max: float | None
    liz_r_max: float | None
    simulation: SimulationSummary | None

    @property
    def L_hat(self) -> float:
        return self.lipschitz.L_hat


def check_hypotheses(model: GrowthModel, n_samples: int = 2000) -> HypothesisCheck:
    """Verify the standing hypotheses on F, analytically plus a sampled check.

    Both families are strictly decreasing with F -> c_sup at 0+ and
    F -> alpha_inf at infinity, so the limits are available in closed form;
    a log grid on [1e-8, 1e8] corroborates.
    """
    xs = np.logspace(-8, 8, n_samples)
    vals = model.F(xs)
    return HypothesisCheck(
        bounded_positive=bool(math.isfinite(model.c_sup) and np.all(vals > 0.0) and np.all(vals <= model.c_sup)),
        decays_below_one=bool(model.alpha_inf < 1.0 and vals[-1] < 1.0),
        grows_above_one=bool(model.c_sup > 1.0 and vals[0] > 1.0),
        sampled_min=float(vals.min()),
        sampled_max=float(vals.max()),
    )


def condition_26(model: GrowthModel) -> bool:
    """0 < inf F < 1 < sup F < inf (fails for pielou, where inf F = 0)."""
    return 0.0 < model.alpha_inf < 1.0 < model.c_sup < math.inf


def persistence_envelope(model: GrowthModel, m: int) -> tuple[float | None, float]:
    """Uniform persistence bounds (x_bar*a^(m+1), x_bar*c^(m+1)).

    The lower bound is None when inf F = 0 (pielou): the uniform lower
    persistence bound requires a strictly positive infimum.
    """
    if m < 0:
        raise ValueError("delay m must be >= 0")
    upper = model.x_bar * model.c_sup ** (m + 1)
    if model.alpha_inf <= 0.0:
        return None, upper
    return model.x_bar * model.alpha_inf ** (m + 1), upper


def estimate_log_lipschitz(model: GrowthModel, m: int, grid_size: int = DEFAULT_GRID_SIZE) -> LipschitzEstimate:
    """Numerical log-Lipschitz constant on (0, x_bar*c^(m+1)).

    L_hat is the grid supremum of the log-log slope |d ln F / d ln x|
    (central difference with step SLOPE_STEP in ln x), which bounds every
    chord ratio |ln F(x)| / |ln(x/x_bar)| on the interval by the mean value
    theorem.  A 1e-6 relative neighborhood of x_bar is excluded from the
    grid; the exact limit there, x_bar*|F'(x_bar)|, enters as L_local.
    """
    if grid_size < 10**3:
        raise ValueError("grid_size must be at least 1000")
    x_bar = model.x_bar
    domain_upper = x_bar * model.c_sup ** (m + 1)
    u = np.linspace(math.log(x_bar * GRID_FLOOR), math.log(domain_upper), grid_size)
    u = u[np.abs(u - math.log(x_bar)) > XBAR_EXCLUSION]
    slopes = np.abs(np.log(model.F(np.exp(u + SLOPE_STEP))) - np.log(model.F(np.exp(u - SLOPE_STEP)))) / (2 * SLOPE_STEP)
    if not np.all(np.isfinite(slopes)):
        bad = np.exp(u[np.nonzero(~np.isfinite(slopes))[0][0]])
        raise ValueError(f"non-finite log-slope at x={bad:g}")

    h = 1e-6 * x_bar
    L_local = x_bar * abs(model.F(x_bar + h) - model.F(x_bar - h)) / (2 * h)
    i = int(slopes.argmax())
    if slopes[i] >= L_local:
        L_hat, argmax_x = float(slopes[i]), float(np.exp(u[i]))
    else:
        L_hat, argmax_x = float(L_local), x_bar
    return LipschitzEstimate(L_hat=L_hat, L_local=float(L_local), domain_upper=domain_upper,
                             grid_size=grid_size, argmax_x=argmax_x)


def paper_L(model: GrowthModel) -> float:
    """Published closed-form log-Lipschitz constant for each family."""
    if model.family == BOBWHITE:
        a, b, r = model.alpha, model.beta, model.r
        return b * r / (2 * a + b + 2 * math.sqrt(a * a + a * b))
    return 1.0 / (model.beta - 1.0)


def theorem3_check(L: float, m: int) -> tuple[bool, float]:
    """Delay-weighted smallness condition (m + 3/2)*L < 3/2 (strict).

    Returns (holds, q) with q = max(0, L*(m + 3/2) - 1/2), the predicted
    geometric factor by which oscillation amplitudes shrink per cycle.
    q = 0 means the tested rate is faster than any positive geometric rate
    the bound certifies.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    if m < 0:
        raise ValueError("m must be >= 0")
    lhs = (m + 1.5) * L
    return lhs < 1.5, max(0.0, lhs - 0.5)


def graef_r_max(alpha: float, beta: float, m: int) -> float:
    """Graef et al. (1998) bobwhite threshold on the exponent r."""
    return (2 * alpha + beta + 2 * math.sqrt(alpha * alpha + alpha * beta)) / beta * (3 * m + 4) / (2 * (m + 1) ** 2)


def liz_r_max(alpha: float, beta: float, m: int) -> float:
    """Liz (2007) bobwhite threshold on r (sharp at m = 0)."""
    denom = (alpha + beta - 1.0) * (1.0 - alpha)
    if denom == 0.0:
        raise ZeroDivisionError("threshold undefined at alpha+beta=1 or alpha=1")
    return beta / denom * (3 * m + 4) / (2 * (m + 1) ** 2)


def classify(
    model: GrowthModel,
    m: int,
    sim: SimOptions | None = SimOptions(),
    grid_size: int = DEFAULT_GRID_SIZE,
) -> StabilityReport:
    """Evaluate every criterion for (model, m) and optionally attach simulation evidence.

    Pass sim=None to skip simulation.  Simulation divergence is recorded in
    the summary, never raised.
    """
    if m < 0:
        raise ValueError("delay m must be >= 0")
    hyp = check_hypotheses(model)
    lower, upper = persistence_envelope(model, m)
    L_p = paper_L(model)
    lip = estimate_log_lipschitz(model, m, grid_size)
    holds_p, q_p = theorem3_check(L_p, m)
    holds_n, q_n = theorem3_check(lip.L_hat, m)
    if holds_n:
        q = q_n
    elif holds_p:
        q = q_p
    else:
        q = None

    if model.family == BOBWHITE:
        g_max = graef_r_max(model.alpha, model.beta, m)
        l_max = liz_r_max(model.alpha, model.beta, m)
    else:
        g_max = l_max = None

    summary = _run_simulations(model, m, lower, upper, sim) if sim is not None else None
    return StabilityReport(
        model=model,
        m=m,
        hypotheses=hyp,
        condition_26=condition_26(model),
        envelope_lower=lower,
        envelope_upper=upper,
        L_paper=L_p,
        lipschitz=lip,
        theorem3_paper=holds_p,
        theorem3_paper_margin=1.5 - (m + 1.5) * L_p,
        theorem3_numeric=holds_n,
        theorem3_numeric_margin=1.5 - (m + 1.5) * lip.L_hat,
        contraction_q=q,
        graef_r_max=g_max,
        liz_r_max=l_max,
        simulation=summary,
    )


def default_histories(model: GrowthModel, m: int, n_histories: int, seed: int) -> tuple[tuple[float, ...], ...]:
    """Seeded histories drawn log-uniformly from [x_bar/4, 4*x_bar]."""
    rng = np.random.default_rng(seed)
    lo, hi = math.log(model.x_bar / 4), math.log(4 * model.x_bar)
    return tuple(tuple(np.exp(rng.uniform(lo, hi, m + 1))) for _ in range(n_histories))


def _run_simulations(model, m, lower, upper, sim: SimOptions) -> SimulationSummary:
    histories = sim.histories or default_histories(model, m, sim.n_histories, sim.seed)
    converged = True
    achieved = 0.0
    liminf = math.inf
    limsup = -math.inf
    in_env = True
    any_div = False
    got_tail = False
    for h in histories:
        trace = iterate(model, m, h, sim.n_steps)
        if trace.divergent:
            any_div = True
            converged = False
            in_env = False
            continue
        verdict = detect_convergence(trace, model.x_bar, sim.tol, min(sim.window, trace.n_steps))
        converged = converged and verdict.converged
        achieved = max(achieved, verdict.achieved_tolerance)
        ts = tail_stats(trace, sim.burn_in)
        got_tail = True
        liminf = min(liminf, ts.liminf_est)
        limsup = max(limsup, ts.limsup_est)
        if ts.tail_max > upper or (lower is not None and ts.tail_min < lower):
            in_env = False
    return SimulationSummary(
        converged=converged,
        achieved_tolerance=achieved,
        liminf_est=liminf if got_tail else None,
        limsup_est=limsup if got_tail else None,
        in_envelope=in_env,
        any_divergent=any_div,
        n_histories=len(histories),
    )


# --- serialization ----------------------------------------------------------

REPORT_COLUMNS = (
    "family", "alpha", "beta", "r", "lambda", "m", "x_bar",
    "graef_ok", "liz_ok", "thm3_paper", "thm3_numeric",
    "L_paper", "L_hat", "q", "converged", "liminf_est", "limsup_est",
    "in_envelope", "skipped",
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def report_csv_fields(report: StabilityReport) -> dict[str, str]:
    """Flat field map for one report, keyed by REPORT_COLUMNS."""
    mdl = report.model
    r = mdl.r
    graef_ok = liz_ok = None
    if mdl.family == BOBWHITE:
        graef_ok = r < report.graef_r_max
        liz_ok = r < report.liz_r_max
    sim = report.simulation
    return {
        "family": mdl.family,
        "alpha": _fmt(mdl.alpha),
        "beta": _fmt(mdl.beta),
        "r": _fmt(mdl.r),
        "lambda": _fmt(mdl.lam),
        "m": str(report.m),
        "x_bar": _fmt(mdl.x_bar),
        "graef_ok": _fmt(graef_ok),
        "liz_ok": _fmt(liz_ok),
        "thm3_paper": _fmt(report.theorem3_paper),
        "thm3_numeric": _fmt(report.theorem3_numeric),
        "L_paper": _fmt(report.L_paper),
        "L_hat": _fmt(report.L_hat),
        "q": _fmt(report.contraction_q),
        "converged": _fmt(sim.converged if sim else None),
        "liminf_est": _fmt(sim.liminf_est if sim else None),
        "limsup_est": _fmt(sim.limsup_est if sim else None),
        "in_envelope": _fmt(sim.in_envelope if sim else None),
        "skipped": "false",
    }


def report_csv_row(report: StabilityReport) -> str:
    fields = report_csv_fields(report)
    return ",".join(fields[c] for c in REPORT_COLUMNS)


def report_text(report: StabilityReport) -> str:
    """Flat key=value rendering of a report."""
    mdl = report.model
    lines = [
        f"family={mdl.family}",
        f"alpha={_fmt(mdl.alpha) or 'n/a'}",
        f"beta={_fmt(mdl.beta)}",
        f"r={_fmt(mdl.r) or 'n/a'}",
        f"lambda={_fmt(mdl.lam) or 'n/a'}",
        f"m={report.m}",
        f"x_bar={_fmt(mdl.x_bar)}",
        f"hyp_bounded={_fmt(report.hypotheses.bounded_positive)}",
        f"hyp_decay={_fmt(report.hypotheses.decays_below_one)}",
        f"hyp_growth={_fmt(report.hypotheses.grows_above_one)}",
        f"cond_26={_fmt(report.condition_26)}",
        f"envelope_lower={_fmt(report.envelope_lower) or 'n/a'}",
        f"envelope_upper={_fmt(report.envelope_upper)}",
        f"L_paper={_fmt(report.L_paper)}",
        f"L_hat={_fmt(report.L_hat)}",
        f"L_local={_fmt(report.lipschitz.L_local)}",
        f"thm3_paper={_fmt(report.theorem3_paper)}",
        f"thm3_paper_margin={_fmt(report.theorem3_paper_margin)}",
        f"thm3_numeric={_fmt(report.theorem3_numeric)}",
        f"thm3_numeric_margin={_fmt(report.theorem3_numeric_margin)}",
        f"q={_fmt(report.contraction_q) or 'n/a'}",
        f"graef_r_max={_fmt(report.graef_r_max) or 'n/a'}",
        f"liz_r_max={_fmt(report.liz_r_max) or 'n/a'}",
    ]
    sim = report.simulation
    if sim is not None:
        lines += [
            f"converged={_fmt(sim.converged)}",
            f"achieved_tol={_fmt(sim.achieved_tolerance)}",
            f"liminf_est={_fmt(sim.liminf_est) or 'n/a'}",
            f"limsup_est={_fmt(sim.limsup_est) or 'n/a'}",
            f"in_envelope={_fmt(sim.in_envelope)}",
            f"divergent={_fmt(sim.any_divergent)}",
        ]
    return "\n".join(lines) + "\n"
