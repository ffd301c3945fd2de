"""Similarity metrics between users: angular distances, covariance, chordal, CMD."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeff import ChannelMatrix
from .smallscale import PathSet

__all__ = [
    "Covariance",
    "AngularDistanceReport",
    "azimuth_distance",
    "elevation_distance",
    "average_angular_distance",
    "covariance",
    "chordal_distance",
    "cmd_similarity",
]


@dataclass(frozen=True)
class Covariance:
    r: np.ndarray = field(repr=False)  # Hermitian (n_t, n_t)


@dataclass(frozen=True)
class AngularDistanceReport:
    azimuth: np.ndarray = field(repr=False)    # per-path, [0, pi]
    elevation: np.ndarray = field(repr=False)  # per-path, [0, pi]
    mean_azimuth: float
    mean_elevation: float


def azimuth_distance(phi_i: float, phi_j: float) -> float:
    """Circular distance: |difference|, or its 2*pi complement if that is smaller."""
    d = abs(float(phi_i) - float(phi_j))
    return d if d < np.pi else 2.0 * np.pi - d


def elevation_distance(theta_i: float, theta_j: float) -> float:
    """Plain |difference|; elevations do not wrap."""
    for t in (theta_i, theta_j):
        if abs(float(t)) > np.pi / 2 + 1e-12:
            raise ValueError(f"elevation {t} outside [-pi/2, pi/2]")
    return abs(float(theta_i) - float(theta_j))


def average_angular_distance(paths_i: PathSet, paths_j: PathSet) -> AngularDistanceReport:
    """Per-cluster and mean angular distances between two index-aligned path sets."""
    if len(paths_i) != len(paths_j):
        raise ValueError(f"path sets differ in size: {len(paths_i)} vs {len(paths_j)}")
    az = np.array([azimuth_distance(a.aoa.azimuth, b.aoa.azimuth)
                   for a, b in zip(paths_i.paths, paths_j.paths)])
    el = np.array([elevation_distance(a.aoa.elevation, b.aoa.elevation)
                   for a, b in zip(paths_i.paths, paths_j.paths)])
    return AngularDistanceReport(az, el, float(az.mean()), float(el.mean()))


def covariance(channel: ChannelMatrix) -> Covariance:
    """Transmit-side covariance, averaged over the subcarrier grid."""
    h = channel.h  # (n_r, n_t, n_f)
    n_f = h.shape[2]
    r = np.einsum("rtn,rsn->ts", h.conj(), h) / n_f
    return Covariance(r)


def chordal_distance(c1: Covariance, c2: Covariance) -> float:
    """Squared Frobenius distance between the squared covariances."""
    r1, r2 = c1.r, c2.r
    if r1.shape != r2.shape:
        raise ValueError(f"dimension mismatch: {r1.shape} vs {r2.shape}")
    diff = r1 @ r1.conj().T - r2 @ r2.conj().T
    return float(np.sum(np.abs(diff) ** 2))


def cmd_similarity(c1: Covariance, c2: Covariance) -> float:
    """Normalized trace inner product: 1 for collinear, 0 for orthogonal."""
    r1, r2 = c1.r, c2.r
    if r1.shape != r2.shape:
        raise ValueError(f"dimension mismatch: {r1.shape} vs {r2.shape}")
    n1 = np.linalg.norm(r1)
    n2 = np.linalg.norm(r2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("undefined similarity: zero covariance matrix")
    inner = complex(np.sum(r1.conj() * r2))
    if abs(inner.imag) > 1e-10 * n1 * n2:
        raise ValueError("undefined similarity: non-Hermitian covariance input")
    return inner.real / (n1 * n2)
