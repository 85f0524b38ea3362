"""Randomized gossip averaging with non-uniform Poisson clocks.

Subpackages and modules:

* :mod:`gossipclock.topology` builds graphs from compact descriptors.
* :mod:`gossipclock.core` assembles the expected gossip operator.
* :mod:`gossipclock.analytic` holds the closed-form optimizers.
* :mod:`gossipclock.oracle` is an independent numeric optimizer.
* :mod:`gossipclock.quantum` checks the qudit-swap reduction.
* :mod:`gossipclock.simulator` runs the protocol with Poisson clocks.
"""

from __future__ import annotations

from gossipclock.core import ProbabilityAssignment, build_operator, spectrum
from gossipclock.optimize import optimize
from gossipclock.topology import Topology, generate

__version__ = "0.1.0"

__all__ = ["ProbabilityAssignment", "Topology", "build_operator", "generate", "optimize", "spectrum", "__version__"]
