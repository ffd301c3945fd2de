"""Antenna element patterns, polarimetric responses, and planar array geometry.

Element fields are resolved onto the spherical unit vectors e_theta / e_phi.
All elements here are vertically polarized, so the e_phi component is zero
and the pattern only shapes the e_theta component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import SphericalAngle, spherical_basis, wrap_azimuth

__all__ = [
    "Pattern",
    "PolarimetricResponse",
    "Array",
    "element_response",
    "array_phase",
    "build_upa",
]

ISOTROPIC = "isotropic"
SECTOR = "sector"


@dataclass(frozen=True)
class Pattern:
    """Element power pattern.

    ``isotropic`` ignores the beamwidth fields. ``sector`` is the parabolic
    in-dB pattern att = min(12*(az/hpbw_az)^2, A_max) + min(12*(el/hpbw_el)^2,
    A_max), capped overall at A_max, with angles taken relative to boresight.
    """

    kind: str = ISOTROPIC
    hpbw_az_deg: float = 65.0
    hpbw_el_deg: float = 65.0
    max_attenuation_db: float = 30.0

    def __post_init__(self):
        if self.kind not in (ISOTROPIC, SECTOR):
            raise ValueError(f"unknown pattern kind '{self.kind}'")
        if self.kind == SECTOR and (self.hpbw_az_deg <= 0 or self.hpbw_el_deg <= 0):
            raise ValueError("sector pattern needs positive beamwidths")


@dataclass(frozen=True)
class PolarimetricResponse:
    f_theta: complex
    f_phi: complex


def element_response(pattern: Pattern, angle: SphericalAngle) -> PolarimetricResponse:
    """Polarimetric field response of one element at a (boresight-relative) angle."""
    f_theta, _ = _response_arrays(pattern, np.array([angle.azimuth]), np.array([angle.elevation]))
    return PolarimetricResponse(complex(f_theta[0]), 0j)


def _response_arrays(pattern: Pattern, az: np.ndarray, el: np.ndarray):
    """Vectorized element response; returns (f_theta, f_phi) real arrays."""
    if pattern.kind == ISOTROPIC:
        return np.ones_like(az), np.zeros_like(az)
    amax = pattern.max_attenuation_db
    az_deg = np.degrees(az)
    el_deg = np.degrees(el)
    att_az = np.minimum(12.0 * (az_deg / pattern.hpbw_az_deg) ** 2, amax)
    att_el = np.minimum(12.0 * (el_deg / pattern.hpbw_el_deg) ** 2, amax)
    att = np.minimum(att_az + att_el, amax)
    return 10.0 ** (-att / 20.0), np.zeros_like(az)


def array_phase(element_pos_wl: np.ndarray, angle: SphericalAngle) -> complex:
    """Planar-wave phase factor exp(+j*2*pi*<pos, e_r>) for one element.

    Positions are in wavelengths relative to the array phase center.
    """
    _, _, e_r = spherical_basis(angle)
    return complex(np.exp(2j * np.pi * float(np.dot(np.asarray(element_pos_wl, dtype=float), e_r))))


@dataclass(frozen=True)
class Array:
    """Antenna array: element positions (wavelengths, phase-center relative),
    a shared element pattern, and an azimuth boresight orientation."""

    positions_wl: np.ndarray = field(repr=False)
    pattern: Pattern = Pattern()
    orientation_az: float = 0.0

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions_wl, dtype=float))
        if pos.shape[1] != 3:
            raise ValueError("element positions must be (n, 3)")
        object.__setattr__(self, "positions_wl", pos)

    @property
    def n_elements(self) -> int:
        return self.positions_wl.shape[0]

    def response(self, az: np.ndarray, el: np.ndarray):
        """Per-element phasors and element field response for directions (az, el).

        Returns (phasors (n_elements, k) complex, f_theta (k,), f_phi (k,)).
        """
        az = np.atleast_1d(np.asarray(az, dtype=float))
        el = np.atleast_1d(np.asarray(el, dtype=float))
        ce, se = np.cos(el), np.sin(el)
        e_r = np.stack([ce * np.cos(az), ce * np.sin(az), se], axis=0)  # (3, k)
        phasors = np.exp(2j * np.pi * (self.positions_wl @ e_r))
        local_az = wrap_azimuth(az - self.orientation_az)
        f_theta, f_phi = _response_arrays(self.pattern, np.atleast_1d(local_az), el)
        return phasors, f_theta, f_phi


def single_antenna(pattern: Pattern | None = None) -> Array:
    """One element at the phase center."""
    return Array(np.zeros((1, 3)), pattern or Pattern())


def build_upa(rows: int, cols: int, spacing_wl: float, pattern: Pattern,
              orientation_az: float = 0.0) -> Array:
    """Uniform planar array in the y-z plane (broadside +x before rotation).

    Columns step along y, rows along z; the grid is centered on its centroid.
    ``orientation_az`` rotates the whole array about z.
    """
    rows, cols = int(rows), int(cols)
    if rows < 1 or cols < 1:
        raise ValueError(f"array dimensions must be >= 1, got {rows}x{cols}")
    if not spacing_wl > 0:
        raise ValueError(f"element spacing must be > 0, got {spacing_wl}")
    y = (np.arange(cols) - (cols - 1) / 2.0) * spacing_wl
    z = (np.arange(rows) - (rows - 1) / 2.0) * spacing_wl
    yy, zz = np.meshgrid(y, z)
    pos = np.column_stack([np.zeros(rows * cols), yy.ravel(), zz.ravel()])
    if orientation_az != 0.0:
        c, s = np.cos(orientation_az), np.sin(orientation_az)
        rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        pos = pos @ rot.T
    return Array(pos, pattern, orientation_az)
