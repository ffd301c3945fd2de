import numpy as np
import pytest

from gscm.antenna import Pattern, build_upa, single_antenna
from gscm.coeff import (assemble_frequency_response, channel_for_paths,
                        path_coefficient, polarization_matrix, subcarrier_grid,
                        CoefficientMatrix)
from gscm.geometry import SphericalAngle
from gscm.smallscale import Path, PathSet

WAVELENGTH = 0.15


def make_path(power=1.0, delay=0.0, xpr=1e30, phases=(0.0, 0.0, 0.0, 0.0),
              aoa=(0.0, 0.0), aod=(0.0, 0.0), length=None):
    return Path(delay_s=delay, power=power,
                aoa=SphericalAngle(*aoa), aod=SphericalAngle(*aod),
                xpr=xpr, pol_phases=phases,
                length_m=WAVELENGTH if length is None else length)


def test_subcarrier_grid():
    f = subcarrier_grid(18e6, 100)
    assert len(f) == 100 and f[0] == 0.0 and f[-1] == 18e6
    assert np.allclose(np.diff(f), 18e6 / 99)
    assert subcarrier_grid(18e6, 1).tolist() == [0.0]
    with pytest.raises(ValueError):
        subcarrier_grid(18e6, 0)


def test_polarization_matrix_limits():
    m_inf = polarization_matrix(make_path(xpr=1e30)).m
    assert abs(m_inf[0, 1]) < 1e-14 and abs(m_inf[1, 0]) < 1e-14
    assert abs(abs(m_inf[0, 0]) - 1) < 1e-14 and abs(abs(m_inf[1, 1]) - 1) < 1e-14
    m_one = polarization_matrix(make_path(xpr=1.0)).m
    assert np.allclose(np.abs(m_one), 1.0)
    p = make_path(xpr=4.0, phases=(0.3, -0.7, 1.1, 2.2))
    assert np.array_equal(polarization_matrix(p).m, polarization_matrix(p).m)
    with pytest.raises(ValueError):
        polarization_matrix(make_path(xpr=0.0))


def test_path_coefficient_collapses_for_single_isotropic_pair():
    tx = single_antenna()
    rx = single_antenna()
    p = make_path(power=0.42, length=1.0)
    g = path_coefficient(p, tx, rx, WAVELENGTH).g
    expected = np.sqrt(0.42) * np.exp(-2j * np.pi * 1.0 / WAVELENGTH)
    assert g.shape == (1, 1)
    assert abs(g[0, 0] - expected) < 1e-12


def test_path_coefficient_zero_power_and_full_wavelength():
    tx = single_antenna()
    rx = single_antenna()
    assert np.all(path_coefficient(make_path(power=0.0), tx, rx, WAVELENGTH).g == 0)
    g = path_coefficient(make_path(length=WAVELENGTH), tx, rx, WAVELENGTH).g
    assert abs(g[0, 0] - 1.0) < 1e-12


def test_assemble_flat_channel():
    g = np.array([[0.5 - 0.2j]])
    cm = assemble_frequency_response([CoefficientMatrix(g, 0.0)], subcarrier_grid(18e6, 10))
    assert cm.h.shape == (1, 1, 10)
    assert np.all(cm.h == g[..., None])


def test_assemble_rejects_empty():
    with pytest.raises(ValueError):
        assemble_frequency_response([], subcarrier_grid(18e6, 4))


def test_two_path_ripple_closed_form():
    f_grid = subcarrier_grid(18e6, 100)
    tau = 1.0 / (2 * 18e6)
    coeffs = [CoefficientMatrix(np.array([[1.0 + 0j]]), 0.0),
              CoefficientMatrix(np.array([[1.0 + 0j]]), tau)]
    h = assemble_frequency_response(coeffs, f_grid).h[0, 0]
    expected = 1.0 + np.exp(-2j * np.pi * f_grid * tau)
    assert np.allclose(h, expected, atol=1e-12)
    mag = np.abs(h)
    assert mag.max() > 1.9 and mag.min() < 0.2


def test_parseval_on_grid_orthogonal_delays(rng):
    # delay spacing k*(n_f-1)/(n_f*B) makes the per-path ramps exactly
    # orthogonal on the sampling grid; band-average power then equals the
    # sum of per-path powers
    n_f, bw = 100, 18e6
    f_grid = subcarrier_grid(bw, n_f)
    spacing = (n_f - 1) / (n_f * bw)
    coeffs = []
    for l in range(5):
        g = (rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))) / np.sqrt(6)
        coeffs.append(CoefficientMatrix(g, l * spacing))
    h = assemble_frequency_response(coeffs, f_grid).h
    mean_power = np.mean(np.sum(np.abs(h) ** 2, axis=(0, 1)))
    brute = sum(np.sum(np.abs(c.g) ** 2) for c in coeffs)
    assert abs(mean_power - brute) <= 1e-6 * brute


def test_band_average_power_accounting():
    # isotropic 1x1 link, no cross-polar leakage, grid-orthogonal delays:
    # band-average |H|^2 recovers total path power one
    n_f, bw = 100, 18e6
    f_grid = subcarrier_grid(bw, n_f)
    spacing = (n_f - 1) / (n_f * bw)
    tx, rx = single_antenna(), single_antenna()
    powers = np.array([0.4, 0.3, 0.15, 0.1, 0.05])
    paths = [make_path(power=p, delay=l * spacing, phases=(0.3 * l, 0, 0, 0),
                       length=5.0 + l) for l, p in enumerate(powers)]
    h = channel_for_paths(PathSet(tuple(paths), np.zeros(3)), tx, rx, WAVELENGTH, f_grid).h
    assert abs(np.mean(np.abs(h[0, 0]) ** 2) - 1.0) <= 1e-9


def test_zero_delays_make_flat_response():
    coeffs = [CoefficientMatrix(np.array([[0.3 + 0.1j]]), 0.0),
              CoefficientMatrix(np.array([[0.2 - 0.4j]]), 0.0)]
    h = assemble_frequency_response(coeffs, subcarrier_grid(18e6, 16)).h[0, 0]
    assert np.all(h == h[0])


def test_negative_frequencies_conjugate_real_coefficients():
    f_grid = subcarrier_grid(18e6, 32)
    coeffs = [CoefficientMatrix(np.array([[0.7 + 0j]]), 2e-7),
              CoefficientMatrix(np.array([[0.3 + 0j]]), 5e-7)]
    h_pos = assemble_frequency_response(coeffs, f_grid).h
    h_neg = assemble_frequency_response(coeffs, -f_grid).h
    assert np.allclose(h_neg, h_pos.conj(), atol=1e-14)


def test_assemble_matches_brute_force_sum(rng):
    f_grid = subcarrier_grid(18e6, 20)
    coeffs = []
    for _ in range(4):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        coeffs.append(CoefficientMatrix(g, rng.uniform(0, 1e-6)))
    h = assemble_frequency_response(coeffs, f_grid).h
    brute = np.zeros_like(h)
    for n, f in enumerate(f_grid):
        for c in coeffs:
            brute[:, :, n] += c.g * np.exp(-2j * np.pi * f * c.delay_s)
    assert np.allclose(h, brute, atol=1e-12)


def test_full_chain_with_array_phases():
    # one path hitting an 8x8 array broadside: all element phases align
    tx = build_upa(8, 8, 0.5, Pattern("sector", 65, 65, 30))
    rx = single_antenna()
    p = make_path(power=1.0, aod=(0.0, 0.0), length=3.0)
    g = path_coefficient(p, tx, rx, WAVELENGTH).g
    assert g.shape == (1, 64)
    assert abs(abs(g.sum()) - 64.0) < 1e-9
    # off-boresight departure attenuates through the element pattern
    p2 = make_path(power=1.0, aod=(np.radians(65 / 2), 0.0), length=3.0)
    g2 = path_coefficient(p2, tx, rx, WAVELENGTH).g
    assert np.allclose(np.abs(g2), 10 ** (-3 / 20), atol=1e-12)


def test_coefficient_norm_bound(rng):
    # Frobenius norm of one path never exceeds sqrt(P * n_r * n_t) for
    # unit-gain elements
    tx = build_upa(4, 4, 0.5, Pattern("isotropic"))
    rx = single_antenna()
    for _ in range(20):
        p = make_path(power=rng.uniform(0, 1), xpr=rng.uniform(0.5, 100),
                      phases=tuple(rng.uniform(-np.pi, np.pi, 4)),
                      aod=(rng.uniform(-np.pi, np.pi), rng.uniform(-1.5, 1.5)),
                      length=rng.uniform(1, 500))
        g = path_coefficient(p, tx, rx, WAVELENGTH).g
        assert np.linalg.norm(g) ** 2 <= p.power * 16 * (1 + 1 / p.xpr) + 1e-9
