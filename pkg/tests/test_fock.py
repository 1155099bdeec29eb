from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermient.fock import (
    ANNIHILATE,
    CREATE,
    NotParityEigenstateError,
    annihilate,
    apply_ladder,
    bits_to_label,
    create,
    enumerate_sector,
    fock_state,
    label_to_bits,
    ladder_matrix,
    parity,
    particle_numbers,
    popcount,
)

from oracles import jw_matrix, random_state


def test_sector_four_modes_two_particles():
    basis = enumerate_sector(4, 2)
    assert basis.labels == (3, 5, 6, 9, 10, 12)
    assert basis.dim == 6


def test_sector_six_modes_three_particles():
    expected = (7, 11, 13, 14, 19, 21, 22, 25, 26, 28, 35, 37, 38, 41, 42, 44, 49, 50, 52, 56)
    assert enumerate_sector(6, 3).labels == expected


def test_vacuum_sector():
    basis = enumerate_sector(4, 0)
    assert basis.labels == (0,)
    assert basis.states() == [(0, 0, 0, 0)]


@pytest.mark.parametrize("M", [1, 2, 4, 6, 8])
def test_sector_sizes_sum_to_full_space(M):
    sizes = [enumerate_sector(M, N).dim for N in range(M + 1)]
    assert sizes == [comb(M, N) for N in range(M + 1)]
    assert sum(sizes) == 2**M


@pytest.mark.parametrize("N", [-1, 5])
def test_sector_rejects_bad_particle_number(N):
    with pytest.raises(ValueError):
        enumerate_sector(4, N)


def test_every_sector_state_has_n_particles():
    basis = enumerate_sector(6, 3)
    assert all(sum(bits) == 3 for bits in basis.states())
    assert list(basis.labels) == sorted(basis.labels)


def test_label_codec_examples():
    assert label_to_bits(3, 4) == (0, 0, 1, 1)
    assert label_to_bits(12, 4) == (1, 1, 0, 0)


def test_label_codec_round_trip_six_modes():
    for k in range(64):
        assert bits_to_label(label_to_bits(k, 6)) == k


@pytest.mark.parametrize("k", [-1, 16])
def test_label_out_of_range(k):
    with pytest.raises(ValueError):
        label_to_bits(k, 4)


def test_annihilate_mode_one_picks_up_string_sign():
    out = annihilate(1, fock_state("1100"))
    assert np.allclose(out, -fock_state("0100"))


def test_create_last_mode_has_no_string():
    out = create(4, fock_state("1100"))
    assert np.allclose(out, fock_state("1101"))


def test_annihilate_empty_mode_gives_zero():
    assert not np.any(annihilate(2, fock_state("1001")))


@pytest.mark.parametrize("M", [3, 4, 6])
def test_ladder_matches_kronecker_jordan_wigner(M):
    for i in range(1, M + 1):
        for kind in (ANNIHILATE, CREATE):
            assert np.array_equal(ladder_matrix(i, kind, M).toarray(), jw_matrix(i, kind, M))


def test_apply_ladder_agrees_with_matrix(rng):
    vec = random_state(rng, 64)
    for i in range(1, 7):
        for kind in (ANNIHILATE, CREATE):
            assert np.allclose(apply_ladder(i, kind, vec), ladder_matrix(i, kind, 6) @ vec, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.sampled_from([4, 6]))
def test_anticommutation(seed, M):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(0, M + 1))
    vec = random_state(rng, 2**M, enumerate_sector(M, N).index)
    for i in range(1, M + 1):
        for j in range(1, M + 1):
            aa = annihilate(i, annihilate(j, vec)) + annihilate(j, annihilate(i, vec))
            cc = create(i, create(j, vec)) + create(j, create(i, vec))
            ac = annihilate(i, create(j, vec)) + create(j, annihilate(i, vec))
            assert np.max(np.abs(aa)) <= 1e-12
            assert np.max(np.abs(cc)) <= 1e-12
            target = vec if i == j else 0.0
            assert np.max(np.abs(ac - target)) <= 1e-12


def test_ladder_changes_particle_number(rng):
    vec = random_state(rng, 64, enumerate_sector(6, 3).index)
    for i in range(1, 7):
        assert particle_numbers(annihilate(i, vec)) == {2}
        assert particle_numbers(create(i, vec)) == {4}


def test_number_operator_is_diagonal():
    for k in range(16):
        bits = label_to_bits(k, 4)
        vec = fock_state(bits)
        for i in range(1, 5):
            assert np.allclose(create(i, annihilate(i, vec)), bits[i - 1] * vec)


def test_parity_values():
    assert parity(fock_state("1100")) == 1
    assert parity(fock_state("0100")) == -1
    with pytest.raises(NotParityEigenstateError):
        parity((fock_state("1100") + fock_state("0100")) / np.sqrt(2))


def test_parity_matches_operator_product(rng):
    M = 4
    P = np.eye(2**M)
    for i in range(1, M + 1):
        n_i = jw_matrix(i, CREATE, M) @ jw_matrix(i, ANNIHILATE, M)
        P = P @ (np.eye(2**M) - 2 * n_i)
    for N in range(M + 1):
        vec = random_state(rng, 2**M, enumerate_sector(M, N).index)
        assert np.allclose(P @ vec, parity(vec) * vec)


def test_hopping_preserves_parity(rng):
    vec = random_state(rng, 16, enumerate_sector(4, 2).index)
    for i in range(1, 5):
        for j in range(1, 5):
            out = create(i, annihilate(j, vec))
            if np.linalg.norm(out) > 1e-12:
                assert parity(out) == 1


def test_popcount_vectorised():
    assert list(popcount([0, 1, 3, 7, 12, 63])) == [0, 1, 2, 3, 2, 6]
