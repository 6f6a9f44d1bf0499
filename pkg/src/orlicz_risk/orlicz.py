"""Luxemburg norms on finite sample spaces, duality pairing, Ando profiles.

A length-n sample vector is read as a random variable on n equally weighted
atoms. The Luxemburg norm for a Young function Phi is

    ||xi||_Phi = inf{alpha > 0 : mean Phi(xi / alpha) <= 1},

computed by bracketing and bisection on the monotone map
alpha -> mean Phi(xi / alpha). The returned value sits on the feasible side
of the infimum (mean <= 1 there), so Hoelder-type bounds built from it stay
mathematically valid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantiles import as_sample
from .young import EvaluationRangeError, YoungFunction

__all__ = ["AndoProfile", "ando_profile", "luxemburg_norm", "pairing"]


def luxemburg_norm(xi, yf: YoungFunction, tol: float = 1e-10) -> float:
    """Luxemburg norm of a sample vector, to relative tolerance ``tol``."""
    x = as_sample(xi)
    if not (0.0 < tol < 0.1):
        raise ValueError("tol must lie in (0, 0.1)")
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        return 0.0

    def mean_phi(alpha: float) -> float:
        try:
            return float(np.mean(yf.value(x / alpha)))
        except EvaluationRangeError:
            return math.inf

    hi = peak
    while mean_phi(hi) > 1.0:
        hi *= 2.0
    lo = hi
    while mean_phi(lo) <= 1.0:
        lo /= 2.0
        if lo < 5e-324:
            # all derivative mass is below the sample scale; treat as zero
            return 0.0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break  # subnormal scale: the interval is one ulp wide already
        if mean_phi(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return float(hi)


def pairing(xi, eta, yf: YoungFunction, tol: float = 1e-10) -> tuple[float, float]:
    """Duality pairing mean(xi * eta) and its bound 2 ||xi||_Phi ||eta||_Psi."""
    x = as_sample(xi)
    y = as_sample(eta)
    if x.size != y.size:
        raise ValueError("xi and eta must have the same number of atoms")
    inner = float(np.mean(x * y))
    bound = 2.0 * luxemburg_norm(x, yf, tol) * luxemburg_norm(y, yf.conjugate(), tol)
    return inner, bound


@dataclass(frozen=True, eq=False)
class AndoProfile:
    """Values of lambda -> sup_h lambda * mean Phi(h / lambda) on a schedule."""

    lambdas: np.ndarray
    values: np.ndarray
    tol: float

    @property
    def converged(self) -> bool:
        return bool(self.values[-1] < self.tol)


def ando_profile(
    densities,
    yf: YoungFunction,
    lambdas=(1.0, 10.0, 100.0, 1000.0, 10000.0),
    *,
    tol: float = 1e-6,
    mean_tol: float = 1e-9,
) -> AndoProfile:
    """Compactness profile of a finite density family.

    Each row of ``densities`` must be a nonnegative vector with mean one
    (within ``mean_tol``). The profile vanishing as lambda grows is the
    uniform-integrability criterion for relative weak compactness of the
    family in the Orlicz space of Phi.
    """
    dens = np.atleast_2d(np.asarray(densities, dtype=float))
    if dens.ndim != 2 or dens.size == 0:
        raise ValueError("densities must be a nonempty 2-D array")
    if not np.all(np.isfinite(dens)):
        raise ValueError("densities must be finite")
    if np.any(dens < 0.0):
        raise ValueError("densities must be nonnegative")
    means = dens.mean(axis=1)
    if np.any(np.abs(means - 1.0) > mean_tol):
        raise ValueError("every density must have mean 1 within tolerance")
    lams = np.asarray(lambdas, dtype=float)
    if lams.ndim != 1 or lams.size == 0 or lams[0] <= 0.0 or np.any(np.diff(lams) <= 0.0):
        raise ValueError("lambdas must be positive and strictly increasing")
    values = np.empty(lams.size)
    for j, lam in enumerate(lams):
        try:
            values[j] = lam * float(np.max(np.mean(yf.value(dens / lam), axis=1)))
        except EvaluationRangeError:
            values[j] = math.inf
    values.setflags(write=False)
    lams.setflags(write=False)
    return AndoProfile(lams, values, float(tol))
