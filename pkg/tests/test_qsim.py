"""Encoding, measurement, and noise channel behavior."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybb84.qsim import (
    Basis,
    NoiseSpec,
    apply_depolarizing,
    apply_pauli_noise,
    bases_from_string,
    bases_to_string,
    encode,
    flip_measurement,
    make_rng,
    measure,
)

from conftest import StubRng

INV_SQRT2 = 1 / math.sqrt(2)

bits = st.sampled_from([0, 1])
bases = st.sampled_from([Basis.Z, Basis.X])


def test_encode_table():
    assert encode(0, Basis.Z) == (1, 0)
    assert encode(1, Basis.Z) == (0, 1)
    plus = encode(0, Basis.X)
    minus = encode(1, Basis.X)
    assert plus.amp0 == pytest.approx(INV_SQRT2)
    assert plus.amp1 == pytest.approx(INV_SQRT2)
    assert minus.amp0 == pytest.approx(INV_SQRT2)
    assert minus.amp1 == pytest.approx(-INV_SQRT2)


def test_encode_rejects_non_bit():
    with pytest.raises(ValueError):
        encode(2, Basis.Z)


def test_basis_string_round_trip():
    assert bases_from_string("ZXZ") == (Basis.Z, Basis.X, Basis.Z)
    assert bases_to_string((Basis.X, Basis.Z)) == "XZ"


def test_measure_zero_state_is_deterministic():
    rng = make_rng(0)
    assert all(measure(encode(0, Basis.Z), Basis.Z, rng) == 0 for _ in range(100))


@given(bit=bits, basis=bases, seed=st.integers(0, 2**32 - 1))
def test_matching_basis_round_trip(bit, basis, seed):
    assert measure(encode(bit, basis), basis, make_rng(seed)) == bit


@pytest.mark.parametrize("bit,prep,meas", [(0, Basis.Z, Basis.X), (1, Basis.X, Basis.Z)])
def test_wrong_basis_is_uniform(bit, prep, meas):
    rng = make_rng(7)
    state = encode(bit, prep)
    ones = sum(measure(state, meas, rng) for _ in range(10_000))
    assert ones / 10_000 == pytest.approx(0.5, abs=0.02)


def test_equal_superposition_born_rule():
    rng = make_rng(11)
    state = encode(0, Basis.X)  # (|0> + |1>)/sqrt(2)
    ones = sum(measure(state, Basis.Z, rng) for _ in range(10_000))
    assert ones / 10_000 == pytest.approx(0.5, abs=0.02)


@given(bit=bits, basis=bases)
@settings(max_examples=20)
def test_all_operations_preserve_norm(bit, basis):
    rng = make_rng(3)
    state = encode(bit, basis)
    for _ in range(50):
        state = apply_pauli_noise(state, 0.7, rng)
        state = apply_depolarizing(state, 0.7, rng)
        assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_pauli_noise_zero_probability_is_identity():
    state = encode(1, Basis.X)
    assert apply_pauli_noise(state, 0.0, make_rng(0)) is state


def test_pauli_noise_forced_x_branch():
    # random() below p selects noise; integers(3) == 0 picks the X operator
    rng = StubRng(randoms=[0.0], ints=[0])
    assert apply_pauli_noise(encode(0, Basis.Z), 1.0, rng) == (0, 1)


def test_pauli_noise_flips_zero_state_two_thirds():
    # X and Y flip |0>, Z leaves it; uniform over the three operators
    rng = make_rng(5)
    flips = 0
    for _ in range(10_000):
        state = apply_pauli_noise(encode(0, Basis.Z), 1.0, rng)
        flips += measure(state, Basis.Z, rng)
    assert flips / 10_000 == pytest.approx(2 / 3, abs=0.02)


def test_depolarizing_zero_probability_is_identity():
    state = encode(0, Basis.X)
    assert apply_depolarizing(state, 0.0, make_rng(0)) is state


@pytest.mark.parametrize(
    "bit,basis,expected",
    [(0, Basis.Z, 0), (1, Basis.X, 1)],
)
def test_depolarizing_fully_mixes(bit, basis, expected):
    # Averaging the four branches gives the maximally mixed state, so the
    # original outcome survives with probability exactly 1/2 in any basis.
    rng = make_rng(13)
    hits = 0
    for _ in range(10_000):
        state = apply_depolarizing(encode(bit, basis), 1.0, rng)
        hits += measure(state, basis, rng) == expected
    assert hits / 10_000 == pytest.approx(0.5, abs=0.02)


@given(bit=bits)
def test_flip_measurement_extremes(bit):
    rng = make_rng(0)
    assert flip_measurement(bit, 0.0, rng) == bit
    assert flip_measurement(bit, 1.0, rng) == 1 - bit


def test_flip_measurement_fair_coin():
    rng = make_rng(17)
    ones = sum(flip_measurement(0, 0.5, rng) for _ in range(10_000))
    assert ones / 10_000 == pytest.approx(0.5, abs=0.02)


def test_identical_seeds_reproduce_outcomes():
    def sample(seed):
        rng = make_rng(seed)
        out = []
        for _ in range(200):
            state = apply_depolarizing(encode(0, Basis.X), 0.3, rng)
            state = apply_pauli_noise(state, 0.3, rng)
            out.append(measure(state, Basis.Z, rng))
        return out

    assert sample(99) == sample(99)
    assert sample(99) != sample(100)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(pauli_p=1.5)
    with pytest.raises(ValueError):
        NoiseSpec(meas_flip_p=-0.1)
    assert NoiseSpec.none().silent
