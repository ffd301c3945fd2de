"""Two-user drift experiment: seeded sweep over separation and decorrelation distance.

User one sits still; user two walks a straight track toward user one. For
every (seed, decorrelation distance, track position) the sweep generates
both users' cluster paths from the same correlated field bank, synthesizes
both downlink channels, and records the four similarity metrics. Output is
a flat CSV with one row per (decorrelation distance, separation, seed).

Configuration is a flat key = value text file; unit suffixes are part of
the key names. ``default_config()`` mirrors the standard setup: 2 GHz
carrier, 18 MHz bandwidth with 100 subcarriers, 5 clusters, an 8x8
half-wavelength sector-element array at the base station, a single
isotropic user antenna, and a 20 m approach track sampled every 0.1 m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .antenna import Array, Pattern, build_upa, single_antenna
from .geometry import Track, track_positions
from .scenario import ScenarioTable, build_lsp_fields, default_table, load_table, lsps_grid
from .smallscale import SPEED_OF_LIGHT, build_ssf_bank, generate_path_arrays

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SweepRecord",
    "default_config",
    "load_config",
    "parse_config_text",
    "run_sweep",
    "write_csv",
    "CSV_HEADER",
]

CSV_HEADER = "d_lambda,separation_m,delta_aaoa_rad,delta_eaoa_rad,chordal,cmd,seed"

SUPPORTED_RNG = "pcg64"


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    carrier_frequency_hz: float = 2e9
    bandwidth_hz: float = 18e6
    n_subcarriers: int = 100
    n_paths: int = 5
    n_sinusoids: int = 500
    rng: str = SUPPORTED_RNG
    bs_position_m: tuple = (0.0, 0.0, 25.0)
    bs_array_rows: int = 8
    bs_array_cols: int = 8
    bs_array_spacing_wl: float = 0.5
    bs_pattern: str = "sector"
    bs_hpbw_az_deg: float = 65.0
    bs_hpbw_el_deg: float = 65.0
    bs_max_attenuation_db: float = 30.0
    bs_orientation_deg: float = 0.0
    user1_position_m: tuple = (100.0, 0.0, 1.5)
    track_start_m: tuple = (100.0, 20.0, 1.5)
    track_direction: tuple = (0.0, -1.0, 0.0)
    track_step_m: float = 0.1
    track_count: int = 201
    d_lambda_list_m: tuple = (0.0, 5.0, 15.0, 50.0)
    seeds: tuple = tuple(range(1, 21))
    scenario_table: str = ""
    epsilon_c: float = 1e-3
    epsilon_cmd: float = 0.95

    def validate(self) -> None:
        if self.carrier_frequency_hz <= 0:
            raise ConfigError(f"carrier_frequency_hz must be > 0, got {self.carrier_frequency_hz}")
        if self.bandwidth_hz <= 0:
            raise ConfigError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.n_subcarriers < 1:
            raise ConfigError(f"n_subcarriers must be >= 1, got {self.n_subcarriers}")
        if self.n_paths < 1:
            raise ConfigError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.n_sinusoids < 1:
            raise ConfigError(f"n_sinusoids must be >= 1, got {self.n_sinusoids}")
        if self.rng != SUPPORTED_RNG:
            raise ConfigError(f"rng must be '{SUPPORTED_RNG}', got '{self.rng}'")
        if self.bs_array_rows < 1 or self.bs_array_cols < 1:
            raise ConfigError("bs_array_rows and bs_array_cols must be >= 1")
        if self.bs_array_spacing_wl <= 0:
            raise ConfigError(f"bs_array_spacing_wl must be > 0, got {self.bs_array_spacing_wl}")
        if self.bs_pattern not in ("isotropic", "sector"):
            raise ConfigError(f"bs_pattern must be 'isotropic' or 'sector', got '{self.bs_pattern}'")
        if self.track_step_m <= 0:
            raise ConfigError(f"track_step_m must be > 0, got {self.track_step_m}")
        if self.track_count < 1:
            raise ConfigError(f"track_count must be >= 1, got {self.track_count}")
        if not self.d_lambda_list_m:
            raise ConfigError("d_lambda_list_m must not be empty")
        if any(d < 0 for d in self.d_lambda_list_m):
            raise ConfigError("d_lambda_list_m entries must be >= 0")
        if not self.seeds:
            raise ConfigError("seeds must not be empty")
        if any(int(s) < 0 for s in self.seeds):
            raise ConfigError("seeds must be non-negative integers")
        if not 0.0 <= self.epsilon_cmd <= 1.0:
            raise ConfigError(f"epsilon_cmd must be in [0, 1], got {self.epsilon_cmd}")
        if self.epsilon_c < 0:
            raise ConfigError(f"epsilon_c must be >= 0, got {self.epsilon_c}")
        if np.allclose(self.track_direction, 0.0):
            raise ConfigError("track_direction must be a non-zero vector")

    def table(self) -> ScenarioTable:
        if not self.scenario_table:
            return default_table(n_clusters=self.n_paths)
        try:
            loaded = load_table(self.scenario_table)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"scenario table '{self.scenario_table}': {exc}") from None
        if loaded.n_clusters != self.n_paths:
            from dataclasses import replace
            loaded = replace(loaded, n_clusters=self.n_paths)
        return loaded

    def bs_array(self) -> Array:
        pattern = Pattern(self.bs_pattern, self.bs_hpbw_az_deg, self.bs_hpbw_el_deg,
                          self.bs_max_attenuation_db)
        return build_upa(self.bs_array_rows, self.bs_array_cols, self.bs_array_spacing_wl,
                         pattern, math.radians(self.bs_orientation_deg))

    def track(self) -> Track:
        return Track(np.asarray(self.track_start_m), np.asarray(self.track_direction),
                     self.track_step_m, self.track_count)


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': '{raw}' (expected a number)") from None


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': '{raw}' (expected an integer)") from None


def _parse_vec3(key, raw):
    parts = raw.split()
    if len(parts) != 3:
        raise ConfigError(f"invalid value for '{key}': '{raw}' (expected three numbers)")
    return tuple(_parse_float(key, p) for p in parts)


def _parse_float_list(key, raw):
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ConfigError(f"invalid value for '{key}': empty list")
    return tuple(_parse_float(key, p) for p in parts)


def _parse_int_list(key, raw):
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ConfigError(f"invalid value for '{key}': empty list")
    return tuple(_parse_int(key, p) for p in parts)


_PARSERS = {
    "carrier_frequency_hz": _parse_float,
    "bandwidth_hz": _parse_float,
    "n_subcarriers": _parse_int,
    "n_paths": _parse_int,
    "n_sinusoids": _parse_int,
    "rng": lambda k, v: v,
    "bs_position_m": _parse_vec3,
    "bs_array_rows": _parse_int,
    "bs_array_cols": _parse_int,
    "bs_array_spacing_wl": _parse_float,
    "bs_pattern": lambda k, v: v,
    "bs_hpbw_az_deg": _parse_float,
    "bs_hpbw_el_deg": _parse_float,
    "bs_max_attenuation_db": _parse_float,
    "bs_orientation_deg": _parse_float,
    "user1_position_m": _parse_vec3,
    "track_start_m": _parse_vec3,
    "track_direction": _parse_vec3,
    "track_step_m": _parse_float,
    "track_count": _parse_int,
    "d_lambda_list_m": _parse_float_list,
    "seeds": _parse_int_list,
    "scenario_table": lambda k, v: v,
    "epsilon_c": _parse_float,
    "epsilon_cmd": _parse_float,
}

assert set(_PARSERS) == {f.name for f in dataclass_fields(ExperimentConfig)}


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse a flat key = value config; unknown keys and bad values are errors."""
    config = ExperimentConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'")
        setattr(config, key, _PARSERS[key](key, val.strip()))
    config.validate()
    return config


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc}") from None
    return parse_config_text(text, source=str(path))


@dataclass(frozen=True)
class SweepRecord:
    d_lambda: float
    separation_m: float
    delta_aaoa_rad: float
    delta_eaoa_rad: float
    chordal: float
    cmd: float
    seed: int


def _batched_channels(arrays: dict, tx_array: Array, rx_array: Array,
                      wavelength_m: float, f_grid_hz: np.ndarray) -> np.ndarray:
    """Frequency responses (M, n_f, n_t) for every position's path set at once.

    Single-antenna receiver; equivalent to assembling each position through
    the per-path coefficient route.
    """
    aod_az, aod_el = arrays["aod_az"], arrays["aod_el"]
    n_pos, n_paths = aod_az.shape
    tx_ph, ftt, ftp = tx_array.response(aod_az.ravel(), aod_el.ravel())
    rx_ph, frt, frp = rx_array.response(arrays["aoa_az"].ravel(), arrays["aoa_el"].ravel())
    pol = arrays["pol_phases"].reshape(-1, 4)
    z = np.exp(1j * pol)
    leak = np.sqrt(1.0 / arrays["xpr"].ravel())
    chain = (frt * (z[:, 0] * ftt + leak * z[:, 1] * ftp)
             + frp * (leak * z[:, 2] * ftt + z[:, 3] * ftp))
    amp = (np.sqrt(arrays["power"].ravel()) * chain * rx_ph[0]
           * np.exp(-2j * np.pi * arrays["length"].ravel() / wavelength_m))
    g = (amp[:, None] * tx_ph.T).reshape(n_pos, n_paths, -1)       # (M, L, n_t)
    ramps = np.exp(-2j * np.pi * f_grid_hz[None, :, None] * arrays["delay"][:, None, :])
    return ramps @ g                                               # (M, n_f, n_t)


def _wrapped_abs_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.abs(a - b)
    return np.where(d < np.pi, d, 2.0 * np.pi - d)


def run_sweep(config: ExperimentConfig) -> list[SweepRecord]:
    """Run the full two-user drift sweep; deterministic for fixed config."""
    config.validate()
    table = config.table()
    tx_array = config.bs_array()
    rx_array = single_antenna(Pattern("isotropic"))
    wavelength = SPEED_OF_LIGHT / config.carrier_frequency_hz
    f_grid = np.arange(config.n_subcarriers) * (
        config.bandwidth_hz / max(config.n_subcarriers - 1, 1))
    bs = np.asarray(config.bs_position_m, dtype=float)
    user1 = np.asarray(config.user1_position_m, dtype=float)
    track_pts = track_positions(config.track())
    # row 0 is the fixed user; the rest are the moving user's track samples
    batch = np.vstack([user1[None, :], track_pts])
    separations = np.linalg.norm(track_pts - user1[None, :], axis=1)
    n_f = len(f_grid)

    records: list[SweepRecord] = []
    for seed in config.seeds:
        # the LSP stream depends on the seed only, the cluster-field stream on
        # (seed, decorrelation value): curves stay comparable across d_lambda
        # and are independent of the order of d_lambda_list_m
        lsp_seed = np.random.SeedSequence(entropy=int(seed), spawn_key=(1,))
        lsp_fields = build_lsp_fields(table, lsp_seed, config.n_sinusoids)
        lsp_vals = lsps_grid(lsp_fields, table, batch)
        for d_lambda in config.d_lambda_list_m:
            bank_seed = np.random.SeedSequence(
                entropy=int(seed),
                spawn_key=(2, int(np.float64(d_lambda).view(np.uint64))))
            bank = build_ssf_bank(config.n_paths, d_lambda, bank_seed,
                                  config.n_sinusoids)
            arrays = generate_path_arrays(bank, lsp_vals, table, bs, batch)
            h = _batched_channels(arrays, tx_array, rx_array, wavelength, f_grid)
            r = h.conj().transpose(0, 2, 1) @ h / n_f              # (M+1, n_t, n_t)
            a = r @ r.conj().transpose(0, 2, 1)
            r_norm = np.linalg.norm(r, axis=(1, 2))
            delta_az = _wrapped_abs_diff(arrays["aoa_az"][1:], arrays["aoa_az"][0]).mean(axis=1)
            delta_el = np.abs(arrays["aoa_el"][1:] - arrays["aoa_el"][0]).mean(axis=1)
            chordal = np.sum(np.abs(a[1:] - a[0]) ** 2, axis=(1, 2))
            cmd = np.real(np.sum(r[0].conj() * r[1:], axis=(1, 2))) / (r_norm[0] * r_norm[1:])
            for i in range(len(track_pts)):
                records.append(SweepRecord(
                    d_lambda=float(d_lambda),
                    separation_m=float(separations[i]),
                    delta_aaoa_rad=float(delta_az[i]),
                    delta_eaoa_rad=float(delta_el[i]),
                    chordal=float(chordal[i]),
                    cmd=float(cmd[i]),
                    seed=int(seed),
                ))
    records.sort(key=lambda rec: (rec.d_lambda, rec.separation_m, rec.seed))
    return records


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(records: list[SweepRecord], path) -> None:
    """Write sweep records with the fixed schema, 12 significant digits."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            _fmt(r.d_lambda), _fmt(r.separation_m), _fmt(r.delta_aaoa_rad),
            _fmt(r.delta_eaoa_rad), _fmt(r.chordal), _fmt(r.cmd), str(r.seed),
        ]))
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write CSV '{path}': {exc}") from exc
