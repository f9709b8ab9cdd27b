"""Trust-managed multihop IoT network simulator.

Subpackages:

- ``anfis``: adaptive neuro-fuzzy inference engine and its fixed comparator
- ``trust``: trust properties, data trust and evidence bookkeeping
- ``simnet``: seeded discrete-event network simulator
- ``metrics``: service and detection metrics over event logs
- ``harness``: experiments, datasets, reports, and the CLI
"""

from . import anfis, harness, metrics, simnet, trust

__version__ = "0.1.0"

__all__ = ["anfis", "harness", "metrics", "simnet", "trust", "__version__"]
