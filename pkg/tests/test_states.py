"""(eps, k)-states, symmetry, extraction, tensorisation; frozen exact values."""
import numpy as np
import pytest

from gibbslab.cube.measure import (
    BINARY,
    DenseMeasure,
    bernoulli,
    block_measure,
    point_mass,
    product_measure,
    two_halves_product,
    two_level_mixture,
)
from gibbslab.cube.states import extract_states, is_state, is_symmetric, state_deviation, tensor_square
from gibbslab.errors import InvalidArgument
from gibbslab.simplex import tv, tv_norm


def test_product_deviation_exactly_zero():
    mu = product_measure(BINARY, bernoulli(0.5), 9)
    assert state_deviation(mu, range(mu.size), 2) == 0.0  # dyadic: no roundoff at all
    skew = product_measure(BINARY, bernoulli(0.3), 9)
    assert state_deviation(skew, range(skew.size), 2) < 1e-12
    assert is_state(skew, range(skew.size), 1e-12, 2)


def test_point_mass_symmetric():
    mu = point_mass(BINARY, [1, 0, 1, 1, 0])
    assert state_deviation(mu, range(mu.size), 2) == 0.0
    assert is_symmetric(mu, 1e-12, 2)


def test_block_measure_frozen_value():
    # 3 blocks of 3: 18 of 81 ordered pairs are distinct same-block pairs,
    # each contributing || diag(1/2) - unif_4 || = 1; all others vanish
    mu = block_measure(9, 3, 0.5)
    dev = state_deviation(mu, range(mu.size), 2)
    assert dev == pytest.approx(2.0 / 9.0, abs=1e-12)
    assert is_state(mu, range(mu.size), 0.5, 2)


def test_mixture_frozen_value_and_verdict():
    # per distinct pair the signed-measure norm is (2/3 - 1/3)^2 = 1/9;
    # averaged over the 132 distinct ordered pairs of 144: 11/108
    mu = two_level_mixture(12)
    dev = state_deviation(mu, range(mu.size), 2)
    assert dev == pytest.approx(11.0 / 108.0, abs=1e-12)
    assert not is_symmetric(mu, 0.1, 2)


def test_mixture_conditional_low_half_is_state():
    mu = two_level_mixture(12)
    levels = mu.digits.sum(axis=1)
    low = np.flatnonzero(levels <= 6)
    dev = state_deviation(mu, low, 2)
    assert dev < 0.2
    assert is_state(mu, low, 0.2, 2)


def test_zero_mass_event_rejected():
    mu = point_mass(BINARY, [0, 0, 0])
    with pytest.raises(InvalidArgument):
        state_deviation(mu, [7], 2)  # all-ones has zero mass


def test_deviation_oracle_small():
    """Independent brute-force oracle over ordered tuples with set collapsing."""
    rng = np.random.default_rng(5)
    mass = rng.exponential(size=2**4)
    mu = DenseMeasure(BINARY, 4, mass / mass.sum())
    sel = np.arange(mu.size)

    def oracle(k):
        total = 0.0
        marg = [np.zeros(2) for _ in range(4)]
        for idx in range(mu.size):
            for x in range(4):
                marg[x][mu.digits[idx, x]] += mu.mass[idx]
        import itertools

        for tup in itertools.product(range(4), repeat=k):
            uniq = sorted(set(tup))
            joint = np.zeros((2,) * len(uniq))
            for idx in range(mu.size):
                joint[tuple(mu.digits[idx, x] for x in uniq)] += mu.mass[idx]
            ref = marg[uniq[0]].copy()
            for x in uniq[1:]:
                ref = np.multiply.outer(ref, marg[x])
            total += np.abs(joint - ref).sum()
        return total / 4**k

    for k in (2, 3):
        assert state_deviation(mu, sel, k) == pytest.approx(oracle(k), abs=1e-12)


# -- extraction ------------------------------------------------------------------


def test_extract_product_single_state():
    mu = product_measure(BINARY, bernoulli(0.5), 12)
    states = extract_states(mu, 0.1, 2)
    assert len(states) == 1
    assert states[0].mass == pytest.approx(1.0)


def test_extract_two_halves_single_state():
    mu = two_halves_product(12)
    states = extract_states(mu, 0.1, 2)
    assert len(states) == 1


def test_extract_mixture_two_half_states():
    mu = two_level_mixture(13)
    states = extract_states(mu, 0.1, 2)
    assert len(states) == 2
    for s in states:
        assert s.mass == pytest.approx(0.5, abs=1e-9)
        assert s.deviation < 0.1
    union = sorted(states[0].indices) + sorted(states[1].indices)
    assert len(set(union)) == mu.size  # disjoint and covering


# -- marginal-shift spot check for symmetric measures ---------------------------


def test_symmetric_measure_states_have_small_marginal_shift():
    """Concrete (delta, gamma, eta, eps) = (0.25, 0.2, 0.3, 0.5).

    The block measure is (0.25, 2)-symmetric (deviation 2/9 < 0.25 exactly);
    conditioning on the first block being all-ones (one shared bit, so mass
    1/2 >= 0.3) is a (0.2, 2)-state, and its average one-point marginal shift
    stays below 0.5.
    """
    mu = block_measure(9, 3, 0.5)
    assert state_deviation(mu, range(mu.size), 2) < 0.25
    event = np.flatnonzero(mu.digits[:, :3].sum(axis=1) == 3)
    assert mu.mass_of(event) == pytest.approx(0.5, abs=1e-12)
    dev = state_deviation(mu, event, 2)
    # remaining same-block correlation: 12 of 81 ordered pairs at norm 1
    assert dev == pytest.approx(12.0 / 81.0, abs=1e-12)
    assert dev < 0.2
    cond = mu.conditioned(event)
    shift = 0.0
    for x in range(9):
        m_cond = np.zeros(2)
        m_full = np.zeros(2)
        np.add.at(m_cond, cond.digits[:, x], cond.mass)
        np.add.at(m_full, mu.digits[:, x], mu.mass)
        shift += tv_norm(m_cond, m_full)
    shift /= 9
    # exact value: three coordinates shift from Be(1/2) to the point mass at 1
    assert shift == pytest.approx(3 * 1.0 / 9, abs=1e-12)
    assert shift < 0.5


# -- tensorisation ---------------------------------------------------------------


def test_tensor_point_mass():
    mu = point_mass(BINARY, [0, 1])
    sq = tensor_square(mu)
    assert sq.mass.max() == pytest.approx(1.0)
    idx = int(np.argmax(sq.mass))
    assert sq.assignment(idx) == ((0, 0), (1, 1))


def test_tensor_of_product_is_product_and_symmetric():
    mu = product_measure(BINARY, bernoulli(0.25), 4)
    sq = tensor_square(mu)
    assert is_symmetric(sq, 1e-10, 2)


def test_tensor_first_component_marginal_identity():
    rng = np.random.default_rng(8)
    mass = rng.exponential(size=2**4)
    mu = DenseMeasure(BINARY, 4, mass / mass.sum())
    sq = tensor_square(mu)
    for x in range(4):
        pair_marg = np.zeros(4)
        np.add.at(pair_marg, sq.digits[:, x], sq.mass)
        first = pair_marg.reshape(2, 2).sum(axis=1)
        single = np.zeros(2)
        np.add.at(single, mu.digits[:, x], mu.mass)
        assert np.allclose(first, single, atol=1e-14)
