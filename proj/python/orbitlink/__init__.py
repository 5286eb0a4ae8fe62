"""Periodic-orbit counting, linking and helicity experiments."""

import json as _json

from ._orbitlink import (
    InvalidInput,
    OrbitlinkError,
    System,
    __version__,
    beta,
    class_count,
    fixture,
    fixtures,
    helicity_abc,
    hopf,
    lambda_scan,
    link_words,
    moebius_prime_count,
    parse_system,
    pressure,
    prime_orbits,
    study,
    template_linking,
)
from ._orbitlink import run as _run


def run(config, out_dir=None, threads=None, verify=False):
    """Run an experiment.  `config` is a dict, a JSON string or a path to a config file."""
    if isinstance(config, dict):
        text = _json.dumps(config)
    elif isinstance(config, str) and config.lstrip().startswith("{"):
        text = config
    else:
        with open(config) as fh:
            text = fh.read()
    return _run(text, out_dir, threads, verify)


__all__ = [
    "InvalidInput",
    "OrbitlinkError",
    "System",
    "beta",
    "class_count",
    "fixture",
    "fixtures",
    "helicity_abc",
    "hopf",
    "lambda_scan",
    "link_words",
    "moebius_prime_count",
    "parse_system",
    "pressure",
    "prime_orbits",
    "run",
    "study",
    "template_linking",
]
