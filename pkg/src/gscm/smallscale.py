"""Spatially consistent per-cluster delays, powers, angles, and polarization draws.

Every random quantity that places a scattering cluster comes from a
correlated field bank evaluated at the receiver position, so two nearby
receivers see nearly the same clusters while distant receivers see
independent ones. Cluster identity is positional: path l always refers to
the same underlying cluster, and nothing is re-sorted after generation.

Per cluster the bank carries 11 fields:

    delay, power, sign, offset-aoa-az, offset-aoa-el, offset-aod-az,
    offset-aod-el, xpr, and three polarization phase fields (the fourth
    polarization phase is tied to the first by a half-turn co-phasing
    convention, which keeps the marginal uniform).

Generation recipe for one receiver position p (all field values taken at p):

    1. delays: u_l = Phi(delay_l), tau'_l = -r_tau * DS * ln(u_l),
       tau_l = tau'_l - min_k tau'_k (no sorting).
    2. powers: ln p_l = -tau_l*(r_tau-1)/(r_tau*DS) - (ln10/10)*zeta*power_l,
       normalized to sum 1.
    3. angles: deviation_l = sign_l * C * spread * g_l + (spread/7) * offset_l
       with g_l = sqrt(-ln(P_l / max_k P_k)); azimuths wrap around the
       line-of-sight bearing, elevations clamp to [-pi/2, pi/2].
    4. xpr_l = 10^((XPR_mu + XPR_sigma * xpr_l) / 10); polarization phases
       are uniform maps of their fields.
    5. path length = |tx - rx| + c * tau_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .geometry import SphericalAngle, wrap_azimuth
from .scenario import ScenarioTable
from .sosfield import (AcfSpec, SosField, as_seed_sequence, fit_frequencies,
                       uncorrelated_field)

__all__ = [
    "Path",
    "PathSet",
    "SsfFieldBank",
    "build_ssf_bank",
    "generate_paths",
    "generate_path_arrays",
]

SPEED_OF_LIGHT = 299792458.0

FIELD_ROLES = (
    "delay", "power", "sign",
    "offset_aoa_az", "offset_aoa_el", "offset_aod_az", "offset_aod_el",
    "xpr", "pol_a", "pol_b", "pol_c",
)

# Scale of the power-driven angle deviation, calibrated once so that the
# power-weighted rms azimuth spread of generated path sets matches the ASA
# draw within 15% on average over the scenario's LSP distribution (see
# tests/test_smallscale.py for the calibration check).
ANGLE_SPREAD_SCALE = 1.54

_STD_NORMAL = AcfSpec(1.0)  # log-domain mapping spec shared by all bank fields
_LN10_OVER_10 = np.log(10.0) / 10.0


@dataclass(frozen=True)
class Path:
    """One multipath component as seen from a receiver position."""

    delay_s: float
    power: float
    aoa: SphericalAngle
    aod: SphericalAngle
    xpr: float
    pol_phases: tuple[float, float, float, float]
    length_m: float


@dataclass(frozen=True)
class PathSet:
    """Index-stable list of the L cluster paths at one receiver position."""

    paths: tuple[Path, ...]
    user_pos: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.paths)

    def aoa_azimuths(self) -> np.ndarray:
        return np.array([p.aoa.azimuth for p in self.paths])

    def aoa_elevations(self) -> np.ndarray:
        return np.array([p.aoa.elevation for p in self.paths])


@dataclass(frozen=True)
class SsfFieldBank:
    """Per-cluster field bank: fields[role][l] drives cluster l's draw for role."""

    fields: dict[str, tuple[SosField, ...]]
    n_clusters: int
    decorr_m: float

    @property
    def n_fields(self) -> int:
        return sum(len(v) for v in self.fields.values())


def build_ssf_bank(n_clusters: int, decorr_m: float, seed,
                   n_sinusoids: int = 500) -> SsfFieldBank:
    """Build the 11 * L field bank for one decorrelation distance.

    Every field gets its own frequency draw. Sharing one frequency set via
    phase swaps would be cheaper, but then all fields share one realized
    correlation-vs-lag curve, and its finite-N fluctuation (std about
    1/sqrt(2N)) would modulate the whole bank coherently; at short lags and
    large decorrelation distances that fluctuation dominates the true
    decorrelation and visibly distorts the drift statistics downstream.
    Independent draws average that error across the bank instead.
    """
    n_clusters = int(n_clusters)
    if n_clusters < 1:
        raise ValueError(f"cluster count must be >= 1, got {n_clusters}")
    if decorr_m < 0:
        raise ValueError(f"decorrelation distance must be >= 0, got {decorr_m}")
    n_total = len(FIELD_ROLES) * n_clusters
    root = as_seed_sequence(seed)
    spec = AcfSpec(decorr_m)
    children = root.spawn(n_total)
    if decorr_m == 0.0:
        flat = [uncorrelated_field(spec, child) for child in children]
    else:
        flat = [fit_frequencies(spec, n_sinusoids, child) for child in children]
    fields = {
        role: tuple(flat[i * n_clusters:(i + 1) * n_clusters])
        for i, role in enumerate(FIELD_ROLES)
    }
    return SsfFieldBank(fields, n_clusters, float(decorr_m))


def _bank_values(bank: SsfFieldBank, points: np.ndarray) -> dict[str, np.ndarray]:
    """Evaluate every bank field at (M, 3) points; arrays come back (M, L)."""
    return {
        role: np.stack([f.evaluate(points) for f in bank.fields[role]], axis=1)
        for role in FIELD_ROLES
    }


def _deviation_angles(anchor, spread, g, sign, offset):
    return anchor + sign * (ANGLE_SPREAD_SCALE * spread * g) + (spread / 7.0) * offset


def generate_path_arrays(bank: SsfFieldBank, lsp_values: dict[str, np.ndarray],
                         table: ScenarioTable, tx: np.ndarray,
                         rx_points: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized cluster parameters for a stack of receiver positions.

    ``lsp_values`` holds per-position LSP arrays as returned by
    ``scenario.lsps_grid``. Returns (M, L) arrays for delays, powers, the
    four angles, xpr, the four polarization phases, and path lengths.
    """
    tx = np.asarray(tx, dtype=float)
    rx = np.atleast_2d(np.asarray(rx_points, dtype=float))
    v = _bank_values(bank, rx)
    ds = np.asarray(lsp_values["ds"], dtype=float)[:, None]
    r_tau = table.r_tau

    # delays: exponential quantile of the uniform-mapped delay field
    u = ndtr(v["delay"])
    u = np.clip(u, np.finfo(float).eps, 1.0)
    tau_raw = -r_tau * ds * np.log(u)
    tau = tau_raw - tau_raw.min(axis=1, keepdims=True)

    # powers in the log domain (stable against underflow), then normalized
    log_p = -tau * (r_tau - 1.0) / (r_tau * ds) - _LN10_OVER_10 * table.cluster_shadow_db * v["power"]
    log_p_max = log_p.max(axis=1, keepdims=True)
    p = np.exp(log_p - log_p_max)
    powers = p / p.sum(axis=1, keepdims=True)

    # power-driven deviation magnitude and its sign
    g = np.sqrt(log_p_max - log_p)
    sign = np.where(v["sign"] >= 0.0, 1.0, -1.0)

    # line-of-sight anchors per position
    d_vec = tx[None, :] - rx
    los_dist = np.linalg.norm(d_vec, axis=1)
    if np.any(los_dist == 0.0):
        raise ValueError("degenerate geometry: receiver at transmitter position")
    aoa_az0 = np.arctan2(d_vec[:, 1], d_vec[:, 0])[:, None]
    aoa_el0 = np.arctan2(d_vec[:, 2], np.hypot(d_vec[:, 0], d_vec[:, 1]))[:, None]
    aod_az0 = np.arctan2(-d_vec[:, 1], -d_vec[:, 0])[:, None]
    aod_el0 = np.arctan2(-d_vec[:, 2], np.hypot(d_vec[:, 0], d_vec[:, 1]))[:, None]

    asa = np.asarray(lsp_values["asa"], dtype=float)[:, None]
    asd = np.asarray(lsp_values["asd"], dtype=float)[:, None]
    esa = np.asarray(lsp_values["esa"], dtype=float)[:, None]
    esd = np.asarray(lsp_values["esd"], dtype=float)[:, None]
    half_pi = np.pi / 2.0
    aoa_az = wrap_azimuth(_deviation_angles(aoa_az0, asa, g, sign, v["offset_aoa_az"]))
    aod_az = wrap_azimuth(_deviation_angles(aod_az0, asd, g, sign, v["offset_aod_az"]))
    aoa_el = np.clip(_deviation_angles(aoa_el0, esa, g, sign, v["offset_aoa_el"]), -half_pi, half_pi)
    aod_el = np.clip(_deviation_angles(aod_el0, esd, g, sign, v["offset_aod_el"]), -half_pi, half_pi)

    xpr = 10.0 ** ((table.xpr_mu_db + table.xpr_sigma_db * v["xpr"]) / 10.0)
    pol = [2.0 * np.pi * ndtr(v[r]) - np.pi for r in ("pol_a", "pol_b", "pol_c")]
    pol.append(wrap_azimuth(pol[0] + np.pi))

    return {
        "delay": tau, "power": powers,
        "aoa_az": aoa_az, "aoa_el": aoa_el, "aod_az": aod_az, "aod_el": aod_el,
        "xpr": xpr,
        "pol_phases": np.stack(pol, axis=2),  # (M, L, 4)
        "length": los_dist[:, None] + SPEED_OF_LIGHT * tau,
    }


def pathset_from_arrays(arrays: dict[str, np.ndarray], index: int,
                        rx_pos: np.ndarray) -> PathSet:
    """Extract one position's PathSet from batch arrays."""
    i = index
    paths = tuple(
        Path(
            delay_s=float(arrays["delay"][i, l]),
            power=float(arrays["power"][i, l]),
            aoa=SphericalAngle(float(arrays["aoa_az"][i, l]), float(arrays["aoa_el"][i, l])),
            aod=SphericalAngle(float(arrays["aod_az"][i, l]), float(arrays["aod_el"][i, l])),
            xpr=float(arrays["xpr"][i, l]),
            pol_phases=tuple(float(x) for x in arrays["pol_phases"][i, l]),
            length_m=float(arrays["length"][i, l]),
        )
        for l in range(arrays["delay"].shape[1])
    )
    return PathSet(paths, np.asarray(rx_pos, dtype=float).copy())


def generate_paths(bank: SsfFieldBank, lsps, table: ScenarioTable,
                   tx, rx) -> PathSet:
    """Cluster paths for one receiver position (deterministic in its inputs)."""
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    if np.array_equal(tx, rx):
        raise ValueError("degenerate geometry: receiver at transmitter position")
    lsp_values = {
        "ds": np.array([lsps.ds_s]), "asa": np.array([lsps.asa_rad]),
        "asd": np.array([lsps.asd_rad]), "esa": np.array([lsps.esa_rad]),
        "esd": np.array([lsps.esd_rad]),
    }
    arrays = generate_path_arrays(bank, lsp_values, table, tx, rx[None, :])
    return pathset_from_arrays(arrays, 0, rx)
