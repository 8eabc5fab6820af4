"""Desk-scale laboratory for Gibbs measures on sparse random factor graphs.

Subpackages:
    cube         probability measures on finite cubes: regularity, homogeneity
                 decompositions, states, symmetry, tensorisation
    models       typed-clone factor-graph models, configuration-model sampling,
                 exact partition functions, built-in Ising / Potts / k-SAT
    localstruct  rooted templates, neighborhood truncation, canonical keys,
                 empirical and limiting local distributions
    bethe        marginal assignments, constrained max-entropy joints, tree
                 marginals, Bethe free energy, uniqueness / reconstruction
                 diagnostics
    moments      marginal sequences, restricted partition functions, enhanced
                 configuration model resampling, planted sampling
    experiments  reproducible CLI sweeps with CSV/JSON output
"""

__version__ = "0.1.0"
