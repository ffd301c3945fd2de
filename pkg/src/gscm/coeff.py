"""Channel coefficient synthesis: per-path MIMO matrices and the frequency response.

A path contributes, between receive antenna r and transmit antenna t,

    g = sqrt(P) * F_r(aoa)^T * M * F_t(aod) * exp(-j*2*pi*length/lambda)
        * phase_r(aoa) * phase_t(aod)

with F the polarimetric element responses, M the 2x2 polarization coupling
matrix built from the path's XPR and phase draws, and phase_* the per-element
planar-wave factors of the arrays. The frequency response stacks paths as

    H(f_n) = sum_l G_l * exp(-2*pi*j * f_n * tau_l)

on a subcarrier grid relative to the lower band edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antenna import Array
from .smallscale import Path, PathSet

__all__ = [
    "PolarizationMatrix",
    "CoefficientMatrix",
    "ChannelMatrix",
    "subcarrier_grid",
    "polarization_matrix",
    "path_coefficient",
    "assemble_frequency_response",
    "channel_for_paths",
]


@dataclass(frozen=True)
class PolarizationMatrix:
    m: np.ndarray = field(repr=False)  # 2x2 complex


@dataclass(frozen=True)
class CoefficientMatrix:
    g: np.ndarray = field(repr=False)  # (n_r, n_t) complex
    delay_s: float


@dataclass(frozen=True)
class ChannelMatrix:
    h: np.ndarray = field(repr=False)  # (n_r, n_t, n_f) complex
    f_grid_hz: np.ndarray = field(repr=False)


def subcarrier_grid(bandwidth_hz: float, n_subcarriers: int) -> np.ndarray:
    """Sample frequencies relative to the lower band edge, inclusive ends."""
    n = int(n_subcarriers)
    if n < 1:
        raise ValueError(f"need at least one subcarrier, got {n_subcarriers}")
    if n == 1:
        return np.zeros(1)
    return np.arange(n) * (bandwidth_hz / (n - 1))


def polarization_matrix(path: Path) -> PolarizationMatrix:
    """Polarization coupling of one path from its stored phase draws.

    Diagonal entries are unit phasors, off-diagonals carry sqrt(1/XPR).
    """
    if not path.xpr > 0:
        raise ValueError(f"XPR must be > 0, got {path.xpr}")
    z = np.exp(1j * np.asarray(path.pol_phases))
    leak = np.sqrt(1.0 / path.xpr)
    m = np.array([[z[0], leak * z[1]],
                  [leak * z[2], z[3]]])
    return PolarizationMatrix(m)


def _pattern_chain(path: Path, tx_array: Array, rx_array: Array):
    """sqrt(P) * F_r^T M F_t and the per-element phasors for one path."""
    rx_ph, frt, frp = rx_array.response(path.aoa.azimuth, path.aoa.elevation)
    tx_ph, ftt, ftp = tx_array.response(path.aod.azimuth, path.aod.elevation)
    m = polarization_matrix(path).m
    f_r = np.array([frt[0], frp[0]])
    f_t = np.array([ftt[0], ftp[0]])
    scalar = np.sqrt(path.power) * (f_r @ m @ f_t)
    return scalar, rx_ph[:, 0], tx_ph[:, 0]


def path_coefficient(path: Path, tx_array: Array, rx_array: Array,
                     wavelength_m: float) -> CoefficientMatrix:
    """MIMO coefficient matrix of one path."""
    if not wavelength_m > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m}")
    scalar, rx_ph, tx_ph = _pattern_chain(path, tx_array, rx_array)
    dist_phase = np.exp(-2j * np.pi * path.length_m / wavelength_m)
    g = scalar * dist_phase * np.outer(rx_ph, tx_ph)
    return CoefficientMatrix(g, path.delay_s)


def assemble_frequency_response(coeffs: list[CoefficientMatrix],
                                f_grid_hz: np.ndarray) -> ChannelMatrix:
    """Sum path matrices with their delay phase ramps over the subcarrier grid."""
    if not coeffs:
        raise ValueError("no paths to assemble")
    f = np.asarray(f_grid_hz, dtype=float)
    g = np.stack([c.g for c in coeffs])                       # (L, n_r, n_t)
    tau = np.array([c.delay_s for c in coeffs])               # (L,)
    ramps = np.exp(-2j * np.pi * np.outer(f, tau))            # (n_f, L)
    h = np.einsum("nl,lrt->rtn", ramps, g)
    return ChannelMatrix(h, f)


def channel_for_paths(path_set: PathSet, tx_array: Array, rx_array: Array,
                      wavelength_m: float, f_grid_hz: np.ndarray) -> ChannelMatrix:
    """Frequency response of a whole path set."""
    coeffs = [path_coefficient(p, tx_array, rx_array, wavelength_m)
              for p in path_set.paths]
    return assemble_frequency_response(coeffs, f_grid_hz)
