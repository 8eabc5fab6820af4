"""Templates, canonical keys, local distributions, limiting trees."""
import numpy as np
import pytest

from gibbslab.cube.measure import Alphabet
from gibbslab.errors import InvalidArgument
from gibbslab.localstruct import FamilySpec, limit_tree, local_distribution, neighborhood, reroot, truncate
from gibbslab.localstruct.template import root_position_of
from gibbslab.models import FactorGraph, ModelSpec, WeightFunction, ising, ising_cycle_graph, ksat, sample_graph
from gibbslab.rng import stream


def star_graph(d):
    """One variable of degree d bound by d arity-1 constraints."""
    alpha = Alphabet((0, 1))
    wf = WeightFunction("leaf", alpha, [1.0, 2.0])
    model = ModelSpec(alpha, [(0,) * d], [(0,)] * d, ["leaf"] * d, {"leaf": wf})
    match = np.arange(d, dtype=np.intp)
    return FactorGraph(model, match)


def test_star_neighborhood():
    g = star_graph(4)
    t = neighborhood(g, ("var", 0), 1)
    assert t.root_kind == "var"
    assert t.num_nodes == 5  # root plus four constraint children
    assert t.is_tree


def test_cycle_flags():
    g9 = ising_cycle_graph(9, 0.3)
    assert neighborhood(g9, ("var", 0), 3).is_tree
    g4 = ising_cycle_graph(4, 0.3)
    assert not neighborhood(g4, ("var", 0), 3).is_tree


def test_keys_invariant_under_relabeling():
    # the same cycle built with rotated variable ids gives identical keys
    n, beta = 7, 0.4
    g = ising_cycle_graph(n, beta)
    model = g.model
    match = np.empty(model.num_clones, dtype=np.intp)
    shift = 3
    for x in range(n):
        match[model.var_clone((x + shift) % n, 0)] = model.fac_clone(x, 0)
        match[model.var_clone((x + 1 + shift) % n, 1)] = model.fac_clone(x, 1)
    h = FactorGraph(model, match)
    for depth in (1, 2, 3):
        assert neighborhood(g, ("var", 0), depth).key == neighborhood(h, ("var", shift), depth).key


def test_path_lengths_have_distinct_keys():
    g = ising_cycle_graph(12, 0.4)
    t2 = neighborhood(g, ("var", 0), 2)
    t3 = neighborhood(g, ("var", 0), 3)
    assert t2.key != t3.key
    assert truncate(t3, 2).key == t2.key


def test_ksat_sign_patterns_positional():
    from gibbslab.models import is_l_acyclic

    model = ksat(6, 3, 0.5, 1, 1)
    g = next(
        g
        for g in (sample_graph(model, s) for s in range(50))
        if is_l_acyclic(g, 2)  # no repeated-variable or doubled clauses
    )
    lam = local_distribution(g, 0)
    fac_keys = {k for k, e in lam.constraint_items()}
    # the dealt sign patterns (+,-,+) and (-,+,-) are distinct classes
    assert len(fac_keys) == 2


def test_regular_graph_two_keys():
    g = ising_cycle_graph(16, 0.3)
    lam = local_distribution(g, 2)
    assert len(lam.entries) == 2
    assert lam.variable_share == pytest.approx(16 / 32)
    assert sum(e.weight for e in lam.entries.values()) == pytest.approx(1.0)


def test_tv_to_self_zero_and_limit_match():
    g = ising_cycle_graph(16, 0.3)
    lam = local_distribution(g, 2)
    assert lam.tv_to(lam) == 0.0
    theta = limit_tree(FamilySpec("ising", {"d": 2, "beta": 0.3}), 2)
    assert lam.tv_to(theta) == 0.0  # 16-cycle is acyclic to depth 2 everywhere


def test_limit_shares_d3():
    theta = limit_tree(FamilySpec("ising", {"d": 3, "beta": 0.2}), 2)
    assert theta.variable_share == pytest.approx(2 / 5)
    assert theta.constraint_share == pytest.approx(3 / 5)
    assert len(theta.entries) == 2


def test_limit_matches_sampled_acyclic_graph_d3():
    # girth > 3 suffices: a length-4 cycle cannot fit inside a depth-1
    # constraint ball (bipartite radius 3)
    fam = FamilySpec("ising", {"d": 3, "beta": 0.2})
    theta = limit_tree(fam, 1)
    rng = stream(17, "acyclic-search")
    from gibbslab.models import is_l_acyclic

    hits = 0
    for _ in range(400):
        g = sample_graph(fam.model(24), int(rng.integers(0, 2**32)))
        if is_l_acyclic(g, 3):
            lam = local_distribution(g, 1)
            assert lam.tv_to(theta) < 1e-12
            hits += 1
    assert hits > 0


def test_depth_zero_key_carries_degree_and_types_only():
    a = limit_tree(FamilySpec("ising", {"d": 3, "beta": 0.2}), 0)
    b = limit_tree(FamilySpec("ising", {"d": 3, "beta": 0.9}), 0)
    va = [k for k, _ in a.variable_items()]
    vb = [k for k, _ in b.variable_items()]
    assert va == vb  # no weights visible at depth 0 from a variable
    fa = [k for k, _ in a.constraint_items()]
    fb = [k for k, _ in b.constraint_items()]
    assert fa != fb  # the constraint root's weight id differs with beta


def test_potts_and_ising_keys_differ():
    a = limit_tree(FamilySpec("ising", {"d": 3, "beta": 0.4}), 1)
    b = limit_tree(FamilySpec("potts", {"d": 3, "k": 2, "beta": 0.4}), 1)
    assert set(a.entries) != set(b.entries)


def test_reroot_involution_and_range():
    theta = limit_tree(FamilySpec("ising", {"d": 3, "beta": 0.2}), 2)
    for key, entry in theta.constraint_items():
        t = entry.template
        moved = reroot(t, 1)
        back = reroot(moved, root_position_of(moved, t.root))
        assert back.key == t.key
        with pytest.raises(InvalidArgument):
            reroot(t, t.root_degree)


def test_reroot_truncate_lands_in_variable_classes():
    fam = FamilySpec("ising", {"d": 3, "beta": 0.2})
    theta2 = limit_tree(fam, 2)
    theta1_vars = {k for k, _ in limit_tree(fam, 1).variable_items()}
    for key, entry in theta2.constraint_items():
        for j in range(entry.template.root_degree):
            sub = truncate(reroot(entry.template, j), 1)
            assert sub.key in theta1_vars


def test_lambda_tv_to_theta_decreases_with_n():
    fam = FamilySpec("ising", {"d": 3, "beta": 0.3})
    theta = limit_tree(fam, 2)
    means = []
    for n in (12, 24, 48):
        rng = stream(5, "trend", n)
        vals = []
        for _ in range(12):
            g = sample_graph(fam.model(n), int(rng.integers(0, 2**32)))
            vals.append(local_distribution(g, 2).tv_to(theta))
        means.append(float(np.mean(vals)))
    assert means[0] > means[1] > means[2]


def test_ksat_limit_weights_sum_to_one():
    theta = limit_tree(FamilySpec("ksat", {"k": 3, "beta": 0.5}), 1)
    assert sum(e.weight for e in theta.entries.values()) == pytest.approx(1.0, abs=1e-9)
    assert theta.variable_share == pytest.approx(3 / 5)
    assert all(e.is_tree for e in theta.entries.values())


def test_acyclic_graph_shallow_balls_all_trees():
    # girth 9 cycle: every neighborhood at depth <= (9 - 1) / 2 is a tree
    g = ising_cycle_graph(9, 0.4)
    for depth in range(0, 5):
        for x in range(9):
            assert neighborhood(g, ("var", x), depth).is_tree
    assert not neighborhood(g, ("var", 0), 5).is_tree
