import numpy as np
import pytest

from gibbslab.cube.measure import (
    BINARY,
    Alphabet,
    DenseMeasure,
    bernoulli,
    block_measure,
    empirical,
    marginal,
    point_mass,
    product_measure,
    two_halves_product,
    two_level_mixture,
)
from gibbslab.errors import BudgetExceeded, InvalidArgument


def test_alphabet_invariants():
    with pytest.raises(InvalidArgument):
        Alphabet(())
    with pytest.raises(InvalidArgument):
        Alphabet((0, 0))
    assert Alphabet((0, 1)).pair().size == 4


def test_product_marginal_uniform():
    mu = product_measure(BINARY, bernoulli(0.5), 2)
    m = marginal(mu, [0])
    assert np.allclose(m.mass, [0.5, 0.5])


def test_mixture_marginals_all_uniform():
    mu = two_level_mixture(8)
    for i in range(8):
        assert np.allclose(marginal(mu, [i]).mass, [0.5, 0.5], atol=1e-15)


def test_point_mass_marginal_restricts():
    sigma = (0, 1, 1, 0)
    mu = point_mass(BINARY, sigma)
    m = marginal(mu, [1, 3])
    expect = point_mass(BINARY, (1, 0))
    assert np.array_equal(m.mass, expect.mass)


def test_marginal_consistency_tower():
    rng = np.random.default_rng(0)
    mass = rng.exponential(size=2**5)
    mu = DenseMeasure(BINARY, 5, mass / mass.sum())
    big = marginal(mu, [0, 2, 4])
    small_direct = marginal(mu, [0, 4])
    small_via_big = marginal(big, [0, 2])  # coordinates 0, 4 are positions 0, 2 of big
    assert np.allclose(small_direct.mass, small_via_big.mass, atol=1e-15)


def test_marginal_empty_coords_rejected():
    mu = product_measure(BINARY, bernoulli(0.5), 3)
    with pytest.raises(InvalidArgument):
        marginal(mu, [])


def test_empirical_examples():
    assert np.allclose(empirical(BINARY, (0, 0, 0), [0, 1, 2]), [1.0, 0.0])
    assert np.allclose(empirical(BINARY, (0, 1), [0, 1]), [0.5, 0.5])
    assert np.allclose(empirical(BINARY, (0, 0, 1), [0, 2]), [0.5, 0.5])
    with pytest.raises(InvalidArgument):
        empirical(BINARY, (0, 1), [])


def test_normalization_drift_rejected_but_tiny_fixed():
    mass = np.full(4, 0.25)
    mass[0] += 5e-13  # within tolerance: renormalized
    mu = DenseMeasure(BINARY, 2, mass)
    assert mu.mass.sum() == pytest.approx(1.0, abs=1e-15)
    mass[0] += 1e-6
    with pytest.raises(InvalidArgument):
        DenseMeasure(BINARY, 2, mass)


def test_mass_is_write_locked():
    mu = product_measure(BINARY, bernoulli(0.5), 2)
    with pytest.raises(ValueError):
        mu.mass[0] = 1.0


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        DenseMeasure(BINARY, 40, np.zeros(4), budget=1 << 20)


def test_json_round_trip():
    mu = two_halves_product(6)
    again = DenseMeasure.from_json(mu.to_json())
    assert again.n == mu.n
    assert np.allclose(again.mass, mu.mass, atol=0)
    # pair alphabets (tuple symbols) survive the round trip too
    from gibbslab.cube.states import tensor_square

    squared = tensor_square(product_measure(BINARY, bernoulli(0.25), 3))
    back = DenseMeasure.from_json(squared.to_json())
    assert back.alphabet.symbols == squared.alphabet.symbols


def test_block_measure_structure():
    mu = block_measure(6, 3, 0.5)
    # only assignments constant on each block carry mass
    for idx in range(mu.size):
        row = mu.digits[idx]
        constant = all(row[0] == row[i] for i in range(3)) and all(row[3] == row[i] for i in range(3, 6))
        assert (mu.mass[idx] > 0) == constant


def test_indexing_round_trip():
    mu = product_measure(BINARY, bernoulli(0.5), 4)
    for idx in (0, 5, 15):
        assert mu.index_of(mu.assignment(idx)) == idx
