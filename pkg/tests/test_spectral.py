"""Transforms, conventions, supports, and the indicator-spectrum identities."""

import numpy as np
import pytest

from zncert.lattice import GroupParams, SupportSet, all_cyclic_subgroups, annihilator
from zncert.spectral import (
    ANALYST_PLUS,
    Convention,
    Signal,
    convert_convention,
    dft,
    idft,
    indicator,
    indicator_spectrum,
    signal_from_json_dict,
    signal_to_json_dict,
    support_of,
)

ALL_CONVENTIONS = [
    Convention(norm, sign)
    for norm in ("unitary", "analyst")
    for sign in ("minus-forward", "plus-forward")
]


def random_signal(params, rng):
    values = rng.normal(size=params.size) + 1j * rng.normal(size=params.size)
    return Signal(params, values)


def test_convention_validation():
    with pytest.raises(ValueError):
        Convention("orthonormal", "minus-forward")
    with pytest.raises(ValueError):
        Convention("unitary", "backward")


def test_delta_transforms_to_constant():
    p = GroupParams(4, 1)
    f = Signal(p, np.array([1, 0, 0, 0], dtype=complex))
    assert np.allclose(dft(f).values, 0.5)


def test_constant_transforms_to_delta():
    p = GroupParams(5, 2)
    f = Signal(p, np.ones(25, dtype=complex))
    spec = dft(f)
    expected = np.zeros(25, dtype=complex)
    expected[0] = 5.0  # N^{d/2}
    assert np.allclose(spec.values, expected, atol=1e-12)


def test_four_point_spectrum_is_convention_pinned():
    """The walkthrough's spectrum list appears under the plus-forward
    analyst convention; the minus-forward evaluation of the same sum swaps
    the entries at frequencies 1 and 3. Both are kept; nothing is 'fixed'."""
    p = GroupParams(4, 1)
    values = np.array([1, 0, 0, 2], dtype=complex)
    golden = np.array([3, 1 - 2j, -1, 1 + 2j])

    plus = dft(Signal(p, values, ANALYST_PLUS))
    assert np.allclose(plus.values, golden, atol=1e-12)

    minus = dft(Signal(p, values, Convention("analyst", "minus-forward")))
    assert np.allclose(minus.values, golden[[0, 3, 2, 1]], atol=1e-12)


def test_four_point_spectrum_inverts():
    p = GroupParams(4, 1)
    spec = Signal(
        p, np.array([3, 1 - 2j, -1, 1 + 2j]), ANALYST_PLUS, side="frequency"
    )
    assert np.allclose(idft(spec).values, [1, 0, 0, 2], atol=1e-12)


@pytest.mark.parametrize("convention", ALL_CONVENTIONS)
def test_round_trip_identity(convention):
    rng = np.random.default_rng(11)
    for n, d in [(5, 2), (7, 1), (4, 3)]:
        p = GroupParams(n, d)
        f = Signal(
            p,
            rng.normal(size=p.size) + 1j * rng.normal(size=p.size),
            convention,
        )
        back = idft(dft(f))
        scale = np.max(np.abs(f.values))
        assert np.max(np.abs(back.values - f.values)) <= 1e-12 * scale


def test_parseval_unitary():
    rng = np.random.default_rng(3)
    for trial in range(100):
        p = GroupParams(int(rng.integers(2, 9)), int(rng.integers(1, 3)))
        f = random_signal(p, rng)
        spec = dft(f)
        assert abs(f.l2_norm_sq() - spec.l2_norm_sq()) <= 1e-10 * f.l2_norm_sq()


def test_support_examples():
    p = GroupParams(4, 1)
    f = Signal(p, np.array([1, 0, 0, 2], dtype=complex))
    assert [v.coords for v in support_of(f, tau=0.0)] == [(0,), (3,)]

    zero = Signal(p, np.zeros(4, dtype=complex))
    assert len(support_of(zero)) == 0

    p2 = GroupParams(2, 1)
    tiny = Signal(p2, np.array([1e-15, 1.0], dtype=complex))
    assert [v.coords for v in support_of(tiny)] == [(1,)]

    with pytest.raises(ValueError):
        support_of(f, tau=-1.0)


def test_indicator_spectrum_examples():
    p = GroupParams(4, 1)
    full = SupportSet.from_coords(p, [(i,) for i in range(4)])
    spec = indicator_spectrum(full)
    expected = np.zeros(4, dtype=complex)
    expected[0] = 2.0  # N^{1/2}
    assert np.allclose(spec.values, expected, atol=1e-12)

    sub = SupportSet.from_coords(p, [(0,), (2,)])
    spec = indicator_spectrum(sub)
    assert np.allclose(spec.values, [1, 0, 1, 0], atol=1e-12)

    pair = SupportSet.from_coords(p, [(0,), (1,)])
    spec = indicator_spectrum(pair)
    assert abs(spec.l2_norm_sq() - 2.0) <= 1e-12  # Parseval: |A|

    with pytest.raises(ValueError):
        indicator_spectrum(SupportSet(p, ()))


def test_subgroup_spectrum_supported_on_annihilator():
    for n in range(2, 17):
        p = GroupParams(n, 1)
        for sub in all_cyclic_subgroups(p):
            spec_support = support_of(indicator_spectrum(sub), tau=None)
            ann = annihilator(sub)
            assert [v.coords for v in spec_support] == [v.coords for v in ann]


def test_exponential_sum_mass():
    # sum over frequencies of |sum_{x in A} chi(x . m)|^2 equals |A| N^d
    rng = np.random.default_rng(8)
    for trial in range(50):
        p = GroupParams(int(rng.integers(2, 13)), int(rng.integers(1, 3)))
        size = int(rng.integers(1, p.size + 1))
        idx = rng.choice(p.size, size=size, replace=False)
        a = SupportSet(p, tuple(p.from_flat(int(i)) for i in idx))
        spec = indicator_spectrum(a)
        mass = p.size * spec.l2_norm_sq()  # undo the unitary N^{-d/2}
        assert abs(mass - size * p.size) <= 1e-9 * size * p.size


@pytest.mark.parametrize("target", ALL_CONVENTIONS)
def test_convention_coherence(target):
    rng = np.random.default_rng(21)
    p = GroupParams(6, 1)
    f = random_signal(p, rng)
    transformed_then_converted = convert_convention(dft(f), target)
    converted_then_transformed = dft(convert_convention(f, target))
    assert np.max(
        np.abs(transformed_then_converted.values - converted_then_transformed.values)
    ) <= 1e-12 * np.max(np.abs(transformed_then_converted.values))


def test_convert_convention_round_trip():
    rng = np.random.default_rng(5)
    p = GroupParams(5, 2)
    spec = dft(random_signal(p, rng))
    for target in ALL_CONVENTIONS:
        back = convert_convention(convert_convention(spec, target), spec.convention)
        assert np.allclose(back.values, spec.values, atol=1e-12)


def test_signal_values_are_immutable():
    p = GroupParams(4, 1)
    f = Signal(p, np.array([1, 0, 0, 2], dtype=complex))
    with pytest.raises(ValueError):
        f.values[0] = 5.0


def test_signal_json_round_trip():
    p = GroupParams(4, 1)
    f = Signal(p, np.array([1, 0.5j, 0, 2], dtype=complex), ANALYST_PLUS)
    data = signal_to_json_dict(f)
    assert data["N"] == 4 and data["d"] == 1
    assert data["convention"] == {
        "normalization": "analyst",
        "exponent_sign": "plus-forward",
    }
    restored = signal_from_json_dict(data)
    assert restored.convention == f.convention
    assert np.allclose(restored.values, f.values)


def test_signal_length_mismatch_rejected():
    with pytest.raises(ValueError):
        Signal(GroupParams(4, 1), np.zeros(5, dtype=complex))
