import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermient.fock import fock_state
from fermient.partition import (
    PartitionError,
    apply_local,
    group_state,
    make_partition,
    parse_partition,
    purity,
    random_local_unitary,
    reduced_density,
    ungroup_state,
)
from fermient.models import dimer_ground_state_analytic

from oracles import random_product_state, random_state


def test_site_partition_dims():
    p = make_partition(4, [[1, 2], [3, 4]])
    assert p.dims == (4, 4)
    assert p.m == 2


def test_one_three_partition_dims():
    assert make_partition(4, [[1], [2, 3, 4]]).dims == (2, 8)


@pytest.mark.parametrize(
    "subsets, word",
    [
        ([[1, 2], [2, 3, 4]], "overlap"),
        ([[1, 2], [3]], "gap"),
        ([[1, 2], [], [3, 4]], "empty"),
        ([[1, 2, 3, 4]], "two subsets"),
        ([[1, 2], [3, 5]], "outside"),
    ],
)
def test_invalid_partitions(subsets, word):
    with pytest.raises(PartitionError, match=word):
        make_partition(4, subsets)


def test_parse_grammar():
    p = parse_partition("1,2|3,4", 4)
    assert p.subsets == ((1, 2), (3, 4))
    assert p.spec() == "1,2|3,4"
    with pytest.raises(PartitionError):
        parse_partition("1,a|3,4", 4)


def test_group_contiguous_is_reshape():
    g = group_state(fock_state("0110"), parse_partition("1,2|3,4", 4))
    assert g.shape == (4, 4)
    assert g[1, 2] == 1 and np.count_nonzero(g) == 1


def test_group_one_three():
    g = group_state(fock_state("1001"), parse_partition("1|2,3,4", 4))
    assert g[1, 1] == 1 and np.count_nonzero(g) == 1


def test_group_non_contiguous_places_bits_in_subset_order():
    # modes 2 and 4 form the first qudit; "0101" has both set
    g = group_state(fock_state("0101"), parse_partition("2,4|1,3", 4))
    assert g[3, 0] == 1 and np.count_nonzero(g) == 1


def test_group_rejects_mode_mismatch(rng):
    with pytest.raises(PartitionError):
        group_state(random_state(rng, 16), parse_partition("1|2|3", 3))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), spec=st.sampled_from(["1,2|3,4", "3|1,4|2", "4,1|2,3", "1|2|3|4"]))
def test_grouping_preserves_norm_and_inverts(seed, spec):
    rng = np.random.default_rng(seed)
    vec = random_state(rng, 16)
    p = parse_partition(spec, 4)
    g = group_state(vec, p)
    assert abs(np.linalg.norm(g) - 1) <= 1e-12
    assert np.allclose(ungroup_state(g, p), vec)


def test_reduced_density_of_product_is_pure(rng):
    p = parse_partition("1|2,3|4,5,6", 6)
    vec = random_product_state(rng, p.subsets)
    g = group_state(vec, p)
    for k in (1, 2, 3):
        rho = reduced_density(g, [k])
        assert abs(np.trace(rho) - 1) <= 1e-12
        assert abs(purity(rho) - 1) <= 1e-12


def test_reduced_density_dimer_site_a():
    # expand the ground state over the orthogonal kets of site B by hand
    alpha = 2.0
    rho = reduced_density(group_state(dimer_ground_state_analytic(alpha), parse_partition("1,2|3,4", 4)), [1])
    expected = np.diag([1, alpha**2, alpha**2, 1]) / (2 * (1 + alpha**2))
    assert np.allclose(rho, expected, atol=1e-14)


def test_reduced_density_of_equal_weight_state_is_maximally_mixed():
    vec = np.zeros(16, dtype=complex)
    vec[[3, 5, 10, 12]] = 0.5
    rho = reduced_density(group_state(vec, parse_partition("1,2|3,4", 4)), [1])
    assert np.allclose(np.linalg.eigvalsh(rho), 0.25)


def test_reduced_density_rejects_bad_keep(rng):
    g = group_state(random_state(rng, 16), parse_partition("1,2|3,4", 4))
    for keep in ([], [0], [3], [1, 1]):
        with pytest.raises(PartitionError):
            reduced_density(g, keep)


def test_reduced_density_is_a_state(rng):
    g = group_state(random_state(rng, 64), parse_partition("1,2|3|4,5,6", 6))
    for keep in ([1], [2, 3], [3, 1]):
        rho = reduced_density(g, keep)
        assert np.allclose(rho, rho.conj().T)
        assert abs(np.trace(rho) - 1) <= 1e-12
        assert np.min(np.linalg.eigvalsh(rho)) >= -1e-10


def test_local_unitaries_are_unitary(rng):
    p = parse_partition("1|2,3", 3)
    for u in random_local_unitary(p, rng):
        assert np.allclose(u @ u.conj().T, np.eye(u.shape[0]))
    vec = random_state(rng, 8)
    assert abs(np.linalg.norm(apply_local(vec, p, random_local_unitary(p, rng))) - 1) <= 1e-12
