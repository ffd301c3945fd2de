"""Sum-of-sinusoids generator for 3D spatially correlated Gaussian fields.

A field k(p) = mu + sum_n a_n * cos(2*pi*<f_n, p> + psi_n) approximates a
stationary Gaussian process whose spatial autocorrelation follows the
exponential decay exp(-d/d_lambda). Equal amplitudes a_n = sigma*sqrt(2/N)
give asymptotic Gaussianity; the frequency vectors are drawn from the 3D
spectral density of the exponential autocorrelation, which makes the
ensemble autocorrelation converge to the target as N grows.

The spectral density of exp(-d/d_lambda) in 3D is isotropic with radial
profile S(r) ~ d_lambda^3 / (1 + (2*pi*r*d_lambda)^2)^2, so the radial
magnitude is sampled by inverse-CDF in the dimensionless variable
u = 2*pi*d_lambda*r, whose density (4/pi)*u^2/(1+u^2)^2 integrates to the
closed-form CDF Q(u) = (2/pi)*(arctan(u) - u/(1+u^2)). Directions are
uniform on the unit sphere.

Swapping the phases psi_n while keeping amplitudes and frequencies produces
a fresh, statistically independent field with the same autocorrelation at
negligible cost; the field banks downstream lean on that.

A decorrelation distance of zero switches a field into uncorrelated mode:
every queried position (quantized to 1 mm) gets an independent draw derived
from a position hash, so repeated queries at one spot stay consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = [
    "AcfSpec",
    "SosField",
    "target_acf",
    "fit_frequencies",
    "uncorrelated_field",
    "reseed_phases",
    "map_to_uniform",
    "export_parameters",
]

# Quantization step (meters) for position keys in uncorrelated mode.
UNCORRELATED_QUANTUM_M = 1e-3


@dataclass(frozen=True)
class AcfSpec:
    """Target statistics of one field: exp(-d/decorr_m) autocorrelation with
    Normal(mean, std^2) marginal. decorr_m == 0 means uncorrelated draws."""

    decorr_m: float
    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        if self.decorr_m < 0:
            raise ValueError(f"decorrelation distance must be >= 0, got {self.decorr_m}")
        if self.std < 0:
            raise ValueError(f"std must be >= 0, got {self.std}")


def target_acf(spec: AcfSpec, d) -> np.ndarray | float:
    """Target autocorrelation exp(-d/decorr) at lag d >= 0 (indicator at decorr=0)."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0):
        raise ValueError("lag distance must be >= 0")
    if spec.decorr_m == 0.0:
        out = np.where(d_arr == 0.0, 1.0, 0.0)
    else:
        out = np.exp(-d_arr / spec.decorr_m)
    return float(out) if np.ndim(d) == 0 else out


def _radial_cdf(u: np.ndarray) -> np.ndarray:
    return (2.0 / np.pi) * (np.arctan(u) - u / (1.0 + u * u))


def _radial_pdf(u: np.ndarray) -> np.ndarray:
    return (4.0 / np.pi) * u * u / (1.0 + u * u) ** 2


_QUANTILE_GRID = None


def _quantile_grid():
    # Dense monotone table for the first inverse-CDF guess; Newton refines it.
    global _QUANTILE_GRID
    if _QUANTILE_GRID is None:
        u = np.concatenate([[0.0], np.geomspace(1e-6, 1e10, 4096)])
        _QUANTILE_GRID = (_radial_cdf(u), u)
    return _QUANTILE_GRID


def _sample_radial(v: np.ndarray) -> np.ndarray:
    """Inverse-CDF samples of the dimensionless radial magnitude u."""
    cdf, grid = _quantile_grid()
    u = np.interp(v, cdf, grid)
    for _ in range(4):
        pdf = _radial_pdf(u)
        step = np.where(pdf > 0, (_radial_cdf(u) - v) / np.where(pdf > 0, pdf, 1.0), 0.0)
        u = np.maximum(u - step, 0.0)
    return u


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = (x + np.uint64(0x9E3779B97F4A7C15)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@dataclass
class SosField:
    """One realized field. Immutable after construction; evaluate() is pure.

    In uncorrelated mode (decorr 0) the sinusoid arrays are empty and
    hash_seed drives per-position draws.
    """

    amplitudes: np.ndarray = field(repr=False)
    frequencies: np.ndarray = field(repr=False)  # (N, 3) cycles per meter
    phases: np.ndarray = field(repr=False)
    spec: AcfSpec = AcfSpec(1.0)
    hash_seed: int = 0

    @property
    def n_sinusoids(self) -> int:
        return len(self.amplitudes)

    @property
    def uncorrelated(self) -> bool:
        return self.spec.decorr_m == 0.0

    def evaluate(self, points):
        """Field value(s) at one (3,) point or a stack of (M, 3) points."""
        pts = np.asarray(points, dtype=float)
        scalar = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if self.uncorrelated:
            vals = self._evaluate_uncorrelated(pts)
        else:
            arg = 2.0 * np.pi * (pts @ self.frequencies.T) + self.phases[None, :]
            vals = self.spec.mean + np.cos(arg) @ self.amplitudes
        return float(vals[0]) if scalar else vals

    def _evaluate_uncorrelated(self, pts: np.ndarray) -> np.ndarray:
        q = np.round(pts / UNCORRELATED_QUANTUM_M).astype(np.int64).view(np.uint64)
        h = _splitmix64(np.full(len(pts), self.hash_seed, dtype=np.uint64))
        for k in range(3):
            h = _splitmix64(h ^ q[:, k])
        # 53-bit mantissa -> open-interval uniform -> standard normal
        u = (h >> np.uint64(11)).astype(float) * 2.0 ** -53 + 2.0 ** -54
        return self.spec.mean + self.spec.std * ndtri(u)


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """Accept a plain int seed or an already-built SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _seed_to_uint64(seed) -> int:
    return int(as_seed_sequence(seed).generate_state(1, np.uint64)[0])


def _draw_phases(rng: np.random.Generator, n: int) -> np.ndarray:
    # pi - U[0, 2pi) lands exactly in (-pi, pi]
    return np.pi - rng.uniform(0.0, 2.0 * np.pi, n)


def fit_frequencies(spec: AcfSpec, n_sinusoids: int, seed) -> SosField:
    """Draw a field whose ensemble autocorrelation matches the target.

    seed may be an int or a numpy SeedSequence; the generator is PCG64.
    """
    if spec.decorr_m == 0.0:
        raise ValueError("decorrelation distance 0 has no spectral fit; "
                         "use uncorrelated_field instead")
    n = int(n_sinusoids)
    if n < 1:
        raise ValueError(f"need at least one sinusoid, got {n_sinusoids}")
    rng = np.random.Generator(np.random.PCG64(seed))
    radii = _sample_radial(rng.random(n)) / (2.0 * np.pi * spec.decorr_m)
    dirs = rng.standard_normal((n, 3))
    dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
    freqs = radii[:, None] * dirs
    amps = np.full(n, spec.std * np.sqrt(2.0 / n))
    return SosField(amps, freqs, _draw_phases(rng, n), spec)


def uncorrelated_field(spec: AcfSpec, seed) -> SosField:
    """Field in uncorrelated mode: independent draw per (1 mm quantized) position."""
    if spec.decorr_m != 0.0:
        raise ValueError("uncorrelated_field requires decorrelation distance 0")
    empty = np.zeros(0)
    return SosField(empty, np.zeros((0, 3)), empty, spec, hash_seed=_seed_to_uint64(seed))


def reseed_phases(fld: SosField, seed) -> SosField:
    """Same amplitudes and frequencies (shared arrays), fresh phases.

    The result has the same autocorrelation but is statistically independent
    of the original.
    """
    if fld.uncorrelated:
        return SosField(fld.amplitudes, fld.frequencies, fld.phases, fld.spec,
                        hash_seed=_seed_to_uint64(seed))
    rng = np.random.Generator(np.random.PCG64(seed))
    return SosField(fld.amplitudes, fld.frequencies,
                    _draw_phases(rng, fld.n_sinusoids), fld.spec, fld.hash_seed)


def map_to_uniform(value, spec: AcfSpec):
    """Probability-integral transform of field values to (0, 1)."""
    if spec.std == 0:
        raise ValueError("cannot map a degenerate (std 0) field to uniform")
    return ndtr((np.asarray(value, dtype=float) - spec.mean) / spec.std)


def export_parameters(fld: SosField, path) -> None:
    """Dump the sinusoid table (amplitude, f_x, f_y, f_z, phase) as CSV."""
    table = np.column_stack([fld.amplitudes, fld.frequencies, fld.phases])
    header = "amplitude,f_x_per_m,f_y_per_m,f_z_per_m,phase_rad"
    np.savetxt(path, table, delimiter=",", header=header, comments="")
