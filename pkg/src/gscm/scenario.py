"""Scenario parameter tables and spatially correlated large-scale parameters.

Each large-scale parameter (LSP) gets its own standard-normal correlated
field at its own decorrelation distance; evaluating the fields at a user
position and pushing the draws through the log-domain table yields the
local delay spread, angular spreads, shadow fading, and K-factor. Nearby
users therefore see similar LSPs, with similarity decaying per the
exponential autocorrelation.

Tables load from a flat key=value text file (see data/uma_nlos.params for
the documented keys and units).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .sosfield import (AcfSpec, SosField, as_seed_sequence, fit_frequencies,
                       uncorrelated_field)

__all__ = [
    "LspEntry",
    "ScenarioTable",
    "Lsps",
    "load_table",
    "default_table",
    "build_lsp_fields",
    "lsps_at",
    "lsps_grid",
]

LSP_NAMES = ("ds", "asd", "asa", "esd", "esa", "sf", "kf")

# Spread caps (degrees) keep log-normal tail draws physically meaningful.
AZIMUTH_SPREAD_CAP_DEG = 104.0
ELEVATION_SPREAD_CAP_DEG = 52.0


@dataclass(frozen=True)
class LspEntry:
    """Distribution of one LSP: mean/std in its log domain (log10 of the
    natural unit, or plain dB for sf/kf) plus its decorrelation distance."""

    mu: float
    sigma: float
    decorr_m: float


@dataclass(frozen=True)
class ScenarioTable:
    ds: LspEntry
    asd: LspEntry
    asa: LspEntry
    esd: LspEntry
    esa: LspEntry
    sf: LspEntry
    kf: LspEntry
    xpr_mu_db: float
    xpr_sigma_db: float
    r_tau: float
    cluster_shadow_db: float
    n_clusters: int

    def __post_init__(self):
        for name in LSP_NAMES:
            entry = getattr(self, name)
            if entry.sigma < 0 or entry.decorr_m < 0:
                raise ValueError(f"{name}: negative std or decorrelation distance")
        if self.xpr_sigma_db < 0 or self.cluster_shadow_db < 0:
            raise ValueError("negative std in scenario table")
        if not self.r_tau > 1:
            raise ValueError(f"delay scaling factor must be > 1, got {self.r_tau}")
        if self.n_clusters < 1:
            raise ValueError(f"cluster count must be >= 1, got {self.n_clusters}")


@dataclass(frozen=True)
class Lsps:
    """Large-scale parameters at one position, in natural units."""

    ds_s: float
    asa_rad: float
    asd_rad: float
    esa_rad: float
    esd_rad: float
    sf_db: float
    kf_db: float


def _parse_kv_file(text: str, source: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, _, val = line.partition("=")
        key = key.strip()
        try:
            values[key] = float(val.strip())
        except ValueError:
            raise ValueError(f"{source}:{lineno}: invalid value for '{key}': '{val.strip()}'") from None
    return values


_KEYS = {
    "ds": ("ds_log10_mu", "ds_log10_sigma", "ds_decorr_m"),
    "asd": ("asd_log10_mu", "asd_log10_sigma", "asd_decorr_m"),
    "asa": ("asa_log10_mu", "asa_log10_sigma", "asa_decorr_m"),
    "esd": ("esd_log10_mu", "esd_log10_sigma", "esd_decorr_m"),
    "esa": ("esa_log10_mu", "esa_log10_sigma", "esa_decorr_m"),
    "sf": ("sf_mu_db", "sf_sigma_db", "sf_decorr_m"),
    "kf": ("kf_mu_db", "kf_sigma_db", "kf_decorr_m"),
}


def _table_from_values(values: dict[str, float], source: str) -> ScenarioTable:
    def take(key):
        try:
            return values.pop(key)
        except KeyError:
            raise ValueError(f"{source}: missing key '{key}'") from None

    entries = {name: LspEntry(*(take(k) for k in keys)) for name, keys in _KEYS.items()}
    table = ScenarioTable(
        **entries,
        xpr_mu_db=take("xpr_mu_db"), xpr_sigma_db=take("xpr_sigma_db"),
        r_tau=take("r_tau"), cluster_shadow_db=take("cluster_shadow_db"),
        n_clusters=int(take("n_clusters")),
    )
    if values:
        raise ValueError(f"{source}: unknown key '{sorted(values)[0]}'")
    return table


def load_table(path) -> ScenarioTable:
    """Load a scenario table from a key=value parameter file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return _table_from_values(_parse_kv_file(text, str(path)), str(path))


def default_table(n_clusters: int | None = None) -> ScenarioTable:
    """Bundled UMa NLoS table, optionally overriding the cluster count."""
    text = resources.files("gscm.data").joinpath("uma_nlos.params").read_text()
    table = _table_from_values(_parse_kv_file(text, "uma_nlos.params"), "uma_nlos.params")
    if n_clusters is not None and n_clusters != table.n_clusters:
        table = replace(table, n_clusters=int(n_clusters))
    return table


def build_lsp_fields(table: ScenarioTable, seed, n_sinusoids: int = 500) -> dict[str, SosField]:
    """One independent standard-normal field per LSP.

    Every field gets its own frequency draw and phase seed, so pairs of LSP
    fields stay uncorrelated.
    """
    children = as_seed_sequence(seed).spawn(len(LSP_NAMES))
    fields = {}
    for name, child in zip(LSP_NAMES, children):
        spec = AcfSpec(getattr(table, name).decorr_m)
        if spec.decorr_m == 0.0:
            fields[name] = uncorrelated_field(spec, child)
        else:
            fields[name] = fit_frequencies(spec, n_sinusoids, child)
    return fields


def _lsp_values(table: ScenarioTable, gaussians: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Map standard-normal draws to natural units (vectorized)."""
    out = {}
    for name in ("ds", "asd", "asa", "esd", "esa"):
        entry = getattr(table, name)
        out[name] = 10.0 ** (entry.mu + entry.sigma * gaussians[name])
    cap = {"asd": AZIMUTH_SPREAD_CAP_DEG, "asa": AZIMUTH_SPREAD_CAP_DEG,
           "esd": ELEVATION_SPREAD_CAP_DEG, "esa": ELEVATION_SPREAD_CAP_DEG}
    for name, cap_deg in cap.items():
        out[name] = np.radians(np.minimum(out[name], cap_deg))
    out["sf"] = table.sf.mu + table.sf.sigma * gaussians["sf"]
    out["kf"] = table.kf.mu + table.kf.sigma * gaussians["kf"]
    return out


def lsps_grid(fields: dict[str, SosField], table: ScenarioTable,
              points: np.ndarray) -> dict[str, np.ndarray]:
    """LSP arrays for a stack of positions (M, 3)."""
    gaussians = {name: np.atleast_1d(fields[name].evaluate(points)) for name in LSP_NAMES}
    return _lsp_values(table, gaussians)


def lsps_at(fields: dict[str, SosField], table: ScenarioTable, point) -> Lsps:
    """Large-scale parameters at one position."""
    v = lsps_grid(fields, table, np.atleast_2d(np.asarray(point, dtype=float)))
    return Lsps(ds_s=float(v["ds"][0]), asa_rad=float(v["asa"][0]), asd_rad=float(v["asd"][0]),
                esa_rad=float(v["esa"][0]), esd_rad=float(v["esd"][0]),
                sf_db=float(v["sf"][0]), kf_db=float(v["kf"][0]))
