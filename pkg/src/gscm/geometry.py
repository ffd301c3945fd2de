"""3D Cartesian/spherical geometry: bearings, spherical basis vectors, linear tracks.

Coordinates are geographic: azimuth is measured in the x-y plane
counterclockwise from the +x axis, elevation from the horizontal plane
(positive up). Azimuths live in (-pi, pi], elevations in [-pi/2, pi/2].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "vec3",
    "unit_vector",
    "wrap_azimuth",
    "SphericalAngle",
    "Track",
    "bearing",
    "spherical_basis",
    "track_positions",
]


def vec3(x: float, y: float, z: float) -> np.ndarray:
    """Build a validated 3-vector (meters, or dimensionless for directions)."""
    v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components: {v}")
    return v


def unit_vector(v: np.ndarray) -> np.ndarray:
    """Normalize to Euclidean length 1; rejects the zero vector."""
    n = float(np.linalg.norm(v))
    if n < 1e-300:
        raise ValueError("cannot normalize zero vector")
    return np.asarray(v, dtype=float) / n


def wrap_azimuth(phi):
    """Wrap angle(s) into (-pi, pi]."""
    w = np.remainder(np.asarray(phi, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    w = np.where(w == -np.pi, np.pi, w)
    return float(w) if np.isscalar(phi) or np.ndim(phi) == 0 else w


@dataclass(frozen=True)
class SphericalAngle:
    """Azimuth/elevation pair; azimuth is wrapped, elevation must be in range."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        az = wrap_azimuth(float(self.azimuth))
        el = float(self.elevation)
        if not np.isfinite(az) or not np.isfinite(el):
            raise ValueError("non-finite angle")
        if el < -np.pi / 2 or el > np.pi / 2:
            raise ValueError(f"elevation {el} outside [-pi/2, pi/2]")
        object.__setattr__(self, "azimuth", az)
        object.__setattr__(self, "elevation", el)


@dataclass(frozen=True)
class Track:
    """Straight constant-step sample line: position i = start + i*step*direction."""

    start: np.ndarray
    direction: np.ndarray
    step: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "start", vec3(*np.asarray(self.start, dtype=float)))
        object.__setattr__(self, "direction", unit_vector(self.direction))
        if not self.step > 0:
            raise ValueError(f"track step must be > 0, got {self.step}")
        if int(self.count) < 1:
            raise ValueError(f"track count must be >= 1, got {self.count}")
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "count", int(self.count))


def bearing(from_pos: np.ndarray, to_pos: np.ndarray) -> SphericalAngle:
    """Azimuth/elevation of the direction from one point toward another.

    azimuth = atan2(dy, dx), elevation = atan2(dz, hypot(dx, dy)).
    """
    d = np.asarray(to_pos, dtype=float) - np.asarray(from_pos, dtype=float)
    if np.all(d == 0.0):
        raise ValueError("degenerate bearing: coincident points")
    az = float(np.arctan2(d[1], d[0]))
    el = float(np.arctan2(d[2], np.hypot(d[0], d[1])))
    return SphericalAngle(az, el)


def spherical_basis(angle: SphericalAngle):
    """Orthonormal spherical unit vectors (e_theta, e_phi, e_r) at an angle.

    e_r points from the origin toward the angle, e_phi toward increasing
    azimuth, e_theta toward increasing elevation; e_theta x e_phi = -e_r.
    """
    ca, sa = np.cos(angle.azimuth), np.sin(angle.azimuth)
    ce, se = np.cos(angle.elevation), np.sin(angle.elevation)
    e_r = np.array([ce * ca, ce * sa, se])
    e_phi = np.array([-sa, ca, 0.0])
    e_theta = np.array([-se * ca, -se * sa, ce])
    return e_theta, e_phi, e_r


def track_positions(track: Track) -> np.ndarray:
    """All sample positions of a track, shape (count, 3)."""
    i = np.arange(track.count, dtype=float)
    return track.start[None, :] + (i * track.step)[:, None] * track.direction[None, :]
