"""Array geometry, element pattern, steering, and codebook construction."""

import numpy as np
import pytest

from mmsim.antenna import (
    ArrayGeometry,
    Direction,
    ElementPatternParams,
    build_codebook,
    codebook_to_csv,
    element_gain,
    element_gain_db,
    field_factor,
    field_factors,
    quantize_phases,
    steering_columns,
    steering_phases,
    steering_vector,
    wrap_azimuth_deg,
)


def _geometry(n_v=3, n_h=5, d_v=0.7, d_h=0.5):
    return ArrayGeometry(n_vertical=n_v, n_horizontal=n_h, spacing_vertical=d_v,
                         spacing_horizontal=d_h, carrier_frequency=28e9)


def test_steering_matches_explicit_double_loop():
    geom = _geometry()
    theta_deg, phi_deg = 77.3, -28.4
    got = steering_vector(geom, Direction(theta_deg, phi_deg))

    theta = np.deg2rad(theta_deg)
    phi = np.deg2rad(phi_deg)
    expected = np.empty(geom.n_elements, dtype=complex)
    for p in range(geom.n_vertical):
        for q in range(geom.n_horizontal):
            phase = 2.0 * np.pi * (p * 0.7 * np.cos(theta)
                                   + q * 0.5 * np.sin(theta) * np.sin(phi))
            expected[p * geom.n_horizontal + q] = np.exp(1j * phase)
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12)
    assert np.linalg.norm(got) == pytest.approx(np.sqrt(geom.n_elements), rel=1e-12)


def test_steering_element_order_is_row_major():
    # With a single row the second element must carry the horizontal increment.
    geom = _geometry(n_v=1, n_h=2)
    theta, phi = 90.0, 30.0
    phases = steering_phases(geom, theta, phi)
    assert phases[0] == 0.0
    assert phases[1] == pytest.approx(
        2.0 * np.pi * 0.5 * np.sin(np.deg2rad(theta)) * np.sin(np.deg2rad(phi)), rel=1e-12)
    # And with a single column the second element carries the vertical increment.
    geom_v = _geometry(n_v=2, n_h=1)
    phases_v = steering_phases(geom_v, 60.0, 0.0)
    assert phases_v[1] == pytest.approx(2.0 * np.pi * 0.7 * np.cos(np.deg2rad(60.0)), rel=1e-12)


def test_steering_columns_match_scalar_calls():
    geom = _geometry()
    theta = np.array([10.0, 90.0, 133.7, 180.0])
    phi = np.array([-120.0, 0.0, 45.0, 179.0])
    cols = steering_columns(geom, theta, phi)
    assert cols.shape == (geom.n_elements, 4)
    for i in range(4):
        np.testing.assert_array_equal(cols[:, i],
                                      steering_vector(geom, Direction(theta[i], phi[i])))


def test_boresight_gain_frozen():
    params = ElementPatternParams()
    assert element_gain_db(params, 90.0, 0.0) == pytest.approx(8.0, abs=1e-12)
    d = Direction(90.0, 0.0)
    assert element_gain(params, d) == pytest.approx(6.309573444801933, rel=1e-12)
    assert field_factor(params, d) == pytest.approx(2.51188643150958, rel=1e-12)


def test_pattern_attenuation_frozen_values():
    params = ElementPatternParams()
    # One 3 dB width off boresight in azimuth: 12 dB down from peak.
    assert element_gain_db(params, 90.0, 65.0) == pytest.approx(-4.0, abs=1e-12)
    assert element_gain(params, Direction(90.0, 65.0)) == pytest.approx(
        0.3981071705534972, rel=1e-12)
    # Same attenuation via the zenith cut.
    assert element_gain_db(params, 25.0, 0.0) == pytest.approx(-4.0, abs=1e-12)


def test_backlobe_clamped_at_front_to_back_limit():
    params = ElementPatternParams()
    assert element_gain_db(params, 90.0, 180.0) == pytest.approx(-22.0, abs=1e-12)
    assert element_gain(params, Direction(90.0, 180.0)) == pytest.approx(
        0.00630957344480193, rel=1e-12)
    assert field_factor(params, Direction(90.0, 180.0)) == pytest.approx(
        0.07943282347242814, rel=1e-12)


def test_combined_attenuation_clamped():
    # Vertical (~23 dB) plus horizontal (30 dB) still cannot exceed a_max.
    params = ElementPatternParams()
    assert element_gain_db(params, 0.0, 180.0) == pytest.approx(-22.0, abs=1e-12)


def test_field_factors_vectorized_matches_scalar():
    params = ElementPatternParams()
    theta = np.array([0.0, 45.0, 90.0, 135.0])
    phi = np.array([0.0, -65.0, 100.0, 180.0])
    got = field_factors(params, theta, phi)
    for i in range(4):
        assert got[i] == pytest.approx(field_factor(params, Direction(theta[i], phi[i])),
                                       rel=1e-12)


def test_wrap_azimuth():
    assert wrap_azimuth_deg(190.0) == pytest.approx(-170.0)
    assert wrap_azimuth_deg(-185.0) == pytest.approx(175.0)
    assert wrap_azimuth_deg(180.0) == pytest.approx(-180.0)
    np.testing.assert_allclose(wrap_azimuth_deg(np.array([0.0, 360.0, 540.0])),
                               [0.0, 0.0, -180.0], atol=1e-12)


def test_direction_validation_and_wrapping():
    assert Direction(90.0, 270.0).phi == pytest.approx(-90.0)
    with pytest.raises(ValueError):
        Direction(-0.1, 0.0)
    with pytest.raises(ValueError):
        Direction(180.1, 0.0)


def test_geometry_validation():
    with pytest.raises(ValueError):
        _geometry(n_v=0)
    with pytest.raises(ValueError):
        _geometry(d_h=0.0)
    with pytest.raises(ValueError):
        ArrayGeometry(2, 2, 0.5, 0.5, carrier_frequency=0.0)
    geom = _geometry()
    assert geom.n_elements == 15
    assert geom.wavelength == pytest.approx(299792458.0 / 28e9, rel=1e-15)


def test_codebook_counts_and_unit_norms():
    geom = _geometry(n_v=8, n_h=8)
    cb = build_codebook(geom, phase_bits=6)
    assert cb.n_beams == 64
    assert cb.beams.shape == (64, 64)
    np.testing.assert_allclose(np.linalg.norm(cb.beams, axis=1), 1.0, atol=1e-12)

    cb_over = build_codebook(geom, oversampling_v=2, oversampling_h=3, phase_bits=6)
    assert cb_over.n_beams == 8 * 2 * 8 * 3
    np.testing.assert_allclose(np.linalg.norm(cb_over.beams, axis=1), 1.0, atol=1e-12)


def test_codebook_orthogonal_when_quantization_is_lossless():
    # DFT phases for an 8x8 array are multiples of 2*pi/8, which the 64-level
    # 6-bit grid represents exactly, so quantization changes nothing and the
    # critically sampled codebook stays unitary.
    geom = _geometry(n_v=8, n_h=8)
    cb = build_codebook(geom, phase_bits=6)
    gram = cb.beams.conj() @ cb.beams.T
    np.testing.assert_allclose(gram, np.eye(64), atol=1e-12)


def test_codebook_entries_are_kronecker_dft():
    geom = _geometry(n_v=2, n_h=4)
    cb = build_codebook(geom, phase_bits=0)
    for a in range(2):
        for b in range(4):
            beam = cb.beams[a * 4 + b]
            for p in range(2):
                for q in range(4):
                    expected = np.exp(-2j * np.pi * (p * a / 2 + q * b / 4)) / np.sqrt(8)
                    assert beam[p * 4 + q] == pytest.approx(expected, abs=1e-12)


def test_codebook_matrix_property_is_transpose():
    cb = build_codebook(_geometry(n_v=2, n_h=2), phase_bits=6)
    np.testing.assert_array_equal(cb.matrix, cb.beams.T)


def test_quantize_phases_snaps_to_grid():
    rng = np.random.default_rng(5)
    w = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    q = quantize_phases(w, 6)
    step = 2.0 * np.pi / 64
    # magnitudes preserved, phases on the grid, error at most half a step
    np.testing.assert_allclose(np.abs(q), np.abs(w), rtol=1e-12)
    offsets = np.angle(q) / step
    np.testing.assert_allclose(offsets, np.round(offsets), atol=1e-9)
    delta = np.angle(q * np.conj(w))
    assert np.max(np.abs(delta)) <= np.pi / 64 + 1e-12


def test_quantize_phases_disabled_for_nonpositive_bits():
    w = np.array([1.0 + 1.0j])
    assert quantize_phases(w, 0) is w


def test_oversampled_codebook_quantization_error_bounded():
    geom = _geometry(n_v=2, n_h=3)
    exact = build_codebook(geom, oversampling_h=3, phase_bits=0)
    quant = build_codebook(geom, oversampling_h=3, phase_bits=6)
    delta = np.angle(quant.beams * np.conj(exact.beams))
    assert np.max(np.abs(delta)) <= np.pi / 64 + 1e-12


def test_codebook_csv(tmp_path):
    cb = build_codebook(_geometry(n_v=2, n_h=2), phase_bits=6)
    path = tmp_path / "codebook.csv"
    codebook_to_csv(cb, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "beam,element,re,im"
    assert len(lines) == 1 + cb.n_beams * 4
    beam, element, re, im = lines[1].split(",")
    assert (int(beam), int(element)) == (0, 0)
    assert complex(float(re), float(im)) == cb.beams[0, 0]
