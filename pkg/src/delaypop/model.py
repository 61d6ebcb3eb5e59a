"""Growth-function families for the delayed recurrence A[n+1] = A[n] * F(A[n-m]).

Two families are supported:

* bobwhite:  F(x) = alpha + beta / (1 + x^r)
* pielou:    F(x) = beta / (1 + lambda * x)

Both are continuous, strictly decreasing on (0, inf), and have a unique
positive equilibrium x_bar with F(x_bar) = 1 inside their parameter domains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BOBWHITE = "bobwhite"
PIELOU = "pielou"

# equilibrium residual |F(x_bar) - 1| must stay below this
EQUILIBRIUM_TOL = 1e-10


@dataclass(frozen=True)
class GrowthModel:
    """Immutable growth-function family instance.

    Fields alpha/r are None for the pielou family, lam is None for bobwhite.
    alpha_inf and c_sup are the infimum and supremum of F over (0, inf);
    alpha_inf is 0 for pielou (F decays to 0 at infinity).
    """

    family: str
    beta: float
    alpha: float | None = None
    r: float | None = None
    lam: float | None = None
    x_bar: float = 0.0
    alpha_inf: float = 0.0
    c_sup: float = 0.0

    def F(self, x):
        """Evaluate the growth factor at x (scalar or ndarray), x > 0."""
        return eval_F(self, x)

    def dF(self, x):
        """Closed-form derivative F'(x)."""
        if self.family == BOBWHITE:
            return -self.beta * self.r * np.asarray(x) ** (self.r - 1) / (1.0 + np.asarray(x) ** self.r) ** 2
        return -self.beta * self.lam / (1.0 + self.lam * np.asarray(x)) ** 2


def make_bobwhite(alpha: float, beta: float, r: float) -> GrowthModel:
    """Bobwhite quail family F(x) = alpha + beta/(1+x^r).

    Requires 0 < alpha < 1, alpha + beta > 1 and r > 0, which guarantee a
    unique positive equilibrium x_bar = ((alpha+beta-1)/(1-alpha))^(1/r).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"bobwhite requires 0 < alpha < 1, got alpha={alpha}")
    if not alpha + beta > 1.0:
        raise ValueError(f"bobwhite requires alpha + beta > 1, got alpha+beta={alpha + beta}")
    if not r > 0.0:
        raise ValueError(f"bobwhite requires r > 0, got r={r}")
    x_bar = ((alpha + beta - 1.0) / (1.0 - alpha)) ** (1.0 / r)
    model = GrowthModel(
        family=BOBWHITE,
        alpha=float(alpha),
        beta=float(beta),
        r=float(r),
        x_bar=x_bar,
        alpha_inf=float(alpha),
        c_sup=float(alpha + beta),
    )
    _check_equilibrium(model)
    return model


def make_pielou(beta: float, lam: float) -> GrowthModel:
    """Pielou logistic family F(x) = beta/(1+lambda*x).

    Requires beta > 1 (otherwise no positive equilibrium) and lambda > 0;
    the equilibrium is x_bar = (beta-1)/lambda.  inf F = 0, so the uniform
    lower persistence bound does not apply to this family.
    """
    if not beta > 1.0:
        raise ValueError(f"pielou requires beta > 1 for a positive equilibrium, got beta={beta}")
    if not lam > 0.0:
        raise ValueError(f"pielou requires lambda > 0, got lambda={lam}")
    model = GrowthModel(
        family=PIELOU,
        beta=float(beta),
        lam=float(lam),
        x_bar=(beta - 1.0) / lam,
        alpha_inf=0.0,
        c_sup=float(beta),
    )
    _check_equilibrium(model)
    return model


def eval_F(model: GrowthModel, x):
    """Evaluate F at x > 0; accepts scalars and numpy arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("F is only defined for x > 0")
    if model.family == BOBWHITE:
        out = model.alpha + model.beta / (1.0 + arr**model.r)
    elif model.family == PIELOU:
        out = model.beta / (1.0 + model.lam * arr)
    else:
        raise ValueError(f"unknown family {model.family!r}")
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def equilibrium_bisect(model: GrowthModel, rel_tol: float = 1e-12) -> float:
    """Locate the root of F(x) - 1 by bisection, independent of the closed form.

    The bracket starts at [1e-12, 1] and the upper end doubles until
    F(upper) < 1 (F is strictly decreasing so the sign change is unique).
    """
    lo, hi = 1e-12, 1.0
    doublings = 0
    while eval_F(model, hi) >= 1.0:
        hi *= 2.0
        doublings += 1
        if doublings > 200:
            raise RuntimeError("bisection bracket expansion failed: no sign change of F(x)-1")
    if eval_F(model, lo) <= 1.0:
        raise RuntimeError("bisection bracket expansion failed: F(lo) <= 1 at lo=1e-12")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if eval_F(model, mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_equilibrium(model: GrowthModel) -> None:
    resid = abs(eval_F(model, model.x_bar) - 1.0)
    if resid > EQUILIBRIUM_TOL:
        raise ValueError(f"equilibrium residual {resid:.3e} exceeds {EQUILIBRIUM_TOL}")
    if not math.isfinite(model.x_bar) or model.x_bar <= 0.0:
        raise ValueError(f"equilibrium x_bar={model.x_bar} is not a positive real")
