"""Python access to the beaconing simulator and the analytical overhead model."""

import json as _json

from ._core import (
    ConfigError,
    ModelDomainError,
    avg_distance,
    avg_hops,
    compare,
    energy_cost,
    forwarding_ops,
    hop_progress_fraction,
    monte_carlo_distance,
    normalize_scenario,
    odl_overhead,
    predict_position,
    run,
    total_overhead,
)


def scenario(**sections):
    """Builds a scenario JSON string from keyword sections, e.g. scenario(timing={"duration": 10})."""
    return _json.dumps(sections)


__all__ = [
    "ConfigError",
    "ModelDomainError",
    "avg_distance",
    "avg_hops",
    "compare",
    "energy_cost",
    "forwarding_ops",
    "hop_progress_fraction",
    "monte_carlo_distance",
    "normalize_scenario",
    "odl_overhead",
    "predict_position",
    "run",
    "scenario",
    "total_overhead",
]
