"""Bayesian comparative judgement engine.

Adaptive pairwise ranking with Beta-Bernoulli pair posteriors, exact
Poisson-binomial rank densities, entropy-driven pair selection, agreement
metrics and a replayable judgement audit trail. `bayescj.api` exposes the
session service over HTTP; `bayescj.cli` provides batch simulation tooling.
"""

__version__ = "0.1.0"
