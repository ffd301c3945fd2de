"""Built-in statistical checks for the correlated field engine."""

from __future__ import annotations

import sys

import numpy as np
from scipy.stats import kstest

from .sosfield import AcfSpec, fit_frequencies, reseed_phases, target_acf

__all__ = ["empirical_acf", "run_selftest"]


def empirical_acf(fld, lags_m: np.ndarray, pairs_per_lag: int, rng: np.random.Generator,
                  region_m: float = 2000.0) -> np.ndarray:
    """Correlation estimate at each lag from random position pairs."""
    rho = np.empty(len(lags_m))
    for i, lag in enumerate(lags_m):
        p1 = rng.uniform(-region_m / 2, region_m / 2, (pairs_per_lag, 3))
        direction = rng.standard_normal((pairs_per_lag, 3))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        v1 = fld.evaluate(p1)
        v2 = fld.evaluate(p1 + lag * direction)
        rho[i] = np.corrcoef(v1, v2)[0, 1]
    return rho


def run_selftest(quick: bool = False, stream=None) -> bool:
    """ACF fidelity, marginal normality, and phase-reuse independence checks.

    Prints one pass/fail line per check; returns overall success.
    """
    stream = stream or sys.stdout
    n_sinusoids = 500
    pairs = 1000 if quick else 4000
    n_marginal = 10000  # cheap either way; only the pair count shrinks in quick mode
    rng = np.random.Generator(np.random.PCG64(424243))
    ok_all = True

    def report(name: str, ok: bool, detail: str):
        nonlocal ok_all
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})", file=stream)

    for d_lambda in (5.0, 15.0, 50.0):
        spec = AcfSpec(d_lambda)
        fld = fit_frequencies(spec, n_sinusoids, 1000 + int(d_lambda))
        lags = np.linspace(0.0, 3.0 * d_lambda, 25)
        rho = empirical_acf(fld, lags, pairs, rng, region_m=max(2000.0, 40 * d_lambda))
        rmse = float(np.sqrt(np.mean((rho - target_acf(spec, lags)) ** 2)))
        report(f"acf d_lambda={d_lambda:g} m", rmse <= 0.05, f"rmse={rmse:.4f} <= 0.05")
        samples = fld.evaluate(rng.uniform(-2000, 2000, (n_marginal, 3)))
        ks = float(kstest(samples, "norm", args=(spec.mean, spec.std)).statistic)
        report(f"normality d_lambda={d_lambda:g} m", ks <= 0.02, f"ks={ks:.4f} <= 0.02")

    spec = AcfSpec(15.0)
    fld = fit_frequencies(spec, n_sinusoids, 77)
    twin = reseed_phases(fld, 78)
    pts = rng.uniform(-2000, 2000, (n_marginal, 3))
    corr = float(np.corrcoef(fld.evaluate(pts), twin.evaluate(pts))[0, 1])
    shared = twin.frequencies is fld.frequencies
    report("phase reuse independence", abs(corr) <= 0.05 and shared,
           f"|corr|={abs(corr):.4f} <= 0.05, frequencies shared={shared}")
    return ok_all
