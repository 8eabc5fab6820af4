"""Gibbs uniqueness and non-reconstruction diagnostics."""
import numpy as np
import pytest

from gibbslab.bethe import build_marginal_assignment, gibbs_uniqueness_check, nonreconstruction_estimate
from gibbslab.errors import BudgetExceeded
from gibbslab.localstruct import FamilySpec, limit_tree
from gibbslab.models import ising_cycle_graph, sample_graph


def make_p(fam, ell, m=1):
    theta = limit_tree(fam, ell + m)
    p = build_marginal_assignment(theta, ell, m)
    return p, theta.meta["weight_functions"], theta


def variable_template(fam, depth):
    theta = limit_tree(fam, depth)
    return theta.variable_items()[0][1].template


def test_beta_zero_unique_any_eps():
    fam = FamilySpec("ising", {"d": 3, "beta": 0.0})
    p, wfs, _ = make_p(fam, 2)
    t = variable_template(fam, 2)
    v = gibbs_uniqueness_check(t, p, 1e-9, 2, "exhaustive", weight_functions=wfs)
    assert v.unique
    assert v.worst_tv <= 1e-12


def test_d2_small_beta_unique_at_depth4():
    fam = FamilySpec("ising", {"d": 2, "beta": 0.2})
    p, wfs, _ = make_p(fam, 4)
    t = variable_template(fam, 4)
    v = gibbs_uniqueness_check(t, p, 0.1, 4, "exhaustive", weight_functions=wfs)
    assert v.unique
    # closed form for the path: both ends pinned, influence tanh^4
    expect = np.tanh(2 * np.arctanh(np.tanh(0.2) ** 4)) / 2
    assert v.worst_tv == pytest.approx(expect, abs=1e-10)


def test_d3_large_beta_not_unique_with_constant_witness():
    fam = FamilySpec("ising", {"d": 3, "beta": 2.0})
    p, wfs, _ = make_p(fam, 2)
    t = variable_template(fam, 2)
    v = gibbs_uniqueness_check(t, p, 0.1, 2, "exhaustive", weight_functions=wfs)
    assert v.status == "not-unique"
    assert len(set(v.worst_boundary)) == 1  # the all-equal boundary is extremal


def test_uniqueness_monotone_in_depth_for_fixture():
    # worst shift decays like ((d-1) tanh beta)^ell; beta = 0.15 passes at
    # depth 2 (0.065) and must still pass at depth 3 (0.019)
    fam = FamilySpec("ising", {"d": 3, "beta": 0.15})
    worst = []
    for ell in (2, 3):
        p, wfs, _ = make_p(fam, ell)
        t = variable_template(fam, ell)
        v = gibbs_uniqueness_check(t, p, 0.1, ell, "exhaustive", weight_functions=wfs)
        assert v.unique
        worst.append(v.worst_tv)
    assert worst[1] < worst[0]


def test_sampled_mode_witness_or_unknown():
    fam = FamilySpec("ising", {"d": 3, "beta": 2.0})
    p, wfs, _ = make_p(fam, 2)
    t = variable_template(fam, 2)
    v = gibbs_uniqueness_check(t, p, 0.1, 2, "sampled", weight_functions=wfs, samples=10, seed=1)
    assert v.status == "not-unique"  # the all-constant probe finds it immediately
    fam = FamilySpec("ising", {"d": 3, "beta": 0.1})
    p, wfs, _ = make_p(fam, 2)
    t = variable_template(fam, 2)
    v = gibbs_uniqueness_check(t, p, 0.1, 2, "sampled", weight_functions=wfs, samples=10, seed=1)
    assert v.status == "unknown"  # sampling cannot certify uniqueness


def test_exhaustive_cap_refused():
    fam = FamilySpec("ising", {"d": 3, "beta": 0.5})
    p, wfs, _ = make_p(fam, 3)
    t = variable_template(fam, 3)
    with pytest.raises(BudgetExceeded):
        gibbs_uniqueness_check(t, p, 0.1, 3, "exhaustive", weight_functions=wfs, cap=4)


# -- non-reconstruction --------------------------------------------------------------


def test_nonrecon_beta_zero_exact_zero():
    fam = FamilySpec("ising", {"d": 2, "beta": 0.0})
    p, _, _ = make_p(fam, 2)
    g = ising_cycle_graph(10, 0.0)
    assert nonreconstruction_estimate(g, p, 2, samples=10, seed=1) == 0.0


def test_nonrecon_cycle_decreasing_in_depth():
    g = ising_cycle_graph(12, 0.3)
    vals = []
    for ell in (2, 3):
        fam = FamilySpec("ising", {"d": 2, "beta": 0.3})
        p, _, _ = make_p(fam, ell)
        vals.append(nonreconstruction_estimate(g, p, ell, samples=80, seed=5))
    assert vals[0] > vals[1]
    assert vals[1] < 0.05


def test_nonrecon_low_temperature_bounded_away():
    fam = FamilySpec("ising", {"d": 3, "beta": 2.0})
    p, _, _ = make_p(fam, 2)
    g = sample_graph(fam.model(12), 3)
    val = nonreconstruction_estimate(g, p, 2, samples=40, seed=9)
    assert val > 0.2
