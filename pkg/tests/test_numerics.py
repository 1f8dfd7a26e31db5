"""Matrix power and unit-conversion tests."""

import math

import numpy as np
import pytest

from zenogate.numerics import (
    ALPHA_QED,
    C_M_PER_S,
    CONSTANTS,
    HBAR_EV_S,
    Quantity,
    UnitError,
    convert,
    mat_power,
    rotation2,
)


class TestMatPower:
    def test_identity(self):
        assert np.array_equal(mat_power(np.eye(3), 7), np.eye(3))

    def test_power_zero_gives_identity(self):
        m = np.array([[1, 2], [3, 4]], dtype=complex)
        assert np.array_equal(mat_power(m, 0), np.eye(2))

    def test_rotation_additivity(self):
        got = mat_power(rotation2(math.pi / 20), 10)
        assert np.max(np.abs(got - rotation2(math.pi / 2))) < 1e-12

    def test_rotation_has_unit_determinant(self):
        assert abs(abs(np.linalg.det(rotation2(0.7312))) - 1.0) < 1e-12

    def test_random_3x3_against_repeated_multiplication(self):
        rng = np.random.default_rng(42)
        m = rng.uniform(-1, 1, size=(3, 3)) + 0j
        naive = np.eye(3, dtype=complex)
        for _ in range(9):
            naive = naive @ m
        assert np.max(np.abs(mat_power(m, 9) - naive)) < 1e-10

    def test_power_additivity(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = rng.uniform(-1, 1, size=(3, 3)) + 1j * rng.uniform(-1, 1, size=(3, 3))
            m /= np.linalg.norm(m, 2)  # contractive, so absolute tolerances apply
            a, b = map(int, rng.integers(0, 33, size=2))
            lhs = mat_power(m, a) @ mat_power(m, b)
            assert np.max(np.abs(lhs - mat_power(m, a + b))) < 1e-10

    def test_rejects_negative_power_and_bad_shape(self):
        with pytest.raises(ValueError):
            mat_power(np.eye(2), -1)
        with pytest.raises(ValueError):
            mat_power(np.eye(4), 2)


class TestConstants:
    def test_fine_structure_constant(self):
        assert abs(CONSTANTS.alpha_qed - 7.2973525e-3) <= 1e-9
        assert CONSTANTS.alpha_qed == ALPHA_QED


class TestConvert:
    def test_wavelength_to_angular_frequency(self):
        omega = convert(Quantity(500.0, "nm"), "1/s").value
        assert omega == pytest.approx(2 * math.pi * C_M_PER_S / 500e-9, rel=1e-12)
        assert omega == pytest.approx(3.77e15, rel=1e-2)

    def test_angular_frequency_to_energy(self):
        ev = convert(Quantity(1e14, "1/s"), "eV").value
        assert ev == pytest.approx(1e14 * HBAR_EV_S, rel=1e-12)
        assert ev == pytest.approx(0.0658, abs=1e-4)

    def test_identity_conversion(self):
        q = Quantity(2.5, "eV")
        assert convert(q, "eV").value == 2.5

    def test_round_trip(self):
        for unit, target in [
            ("nm", "1/s"),
            ("eV", "1/s"),
            ("W/cm^2", "eV^4"),
            ("cm^2", "1/eV^2"),
            ("nm", "eV"),
        ]:
            q = Quantity(3.7, unit)
            back = convert(convert(q, target), unit).value
            assert back == pytest.approx(3.7, rel=1e-12)

    def test_conversions_compose(self):
        direct = convert(Quantity(432.1, "nm"), "eV").value
        via = convert(convert(Quantity(432.1, "nm"), "1/s"), "eV").value
        assert via == pytest.approx(direct, rel=1e-12)

    def test_hz_is_angular(self):
        assert convert(Quantity(1.0, "Hz"), "1/s").value == 1.0

    def test_mismatched_kinds_rejected(self):
        with pytest.raises(UnitError):
            Quantity(1.0, "eV") + Quantity(1.0, "nm")
        with pytest.raises(UnitError):
            convert(Quantity(1.0, "W/cm^2"), "nm")

    def test_unknown_unit_rejected(self):
        with pytest.raises(UnitError):
            Quantity(1.0, "furlong")
