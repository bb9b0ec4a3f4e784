"""Photon transmission fidelity and capacity through a two-level medium."""

import json as _json

from ._polfid import (
    CompletelyDephasing,
    ConvergenceError,
    Depolarizing,
    DispersionResult,
    Erasure,
    Error,
    InvalidStateError,
    MediumParams,
    ValidationError,
    WavepacketSpec,
    avg_fidelity_dephasing_diffusion,
    avg_fidelity_erasure_diffusion,
    channel_label,
    coupling_from_gbar,
    dispersion,
    dispersion_omega,
    excitation_probability,
    fidelity_dephasing_uniform,
    fidelity_depolarizing_uniform,
    fidelity_erasure_uniform,
    gbar_from_coupling,
    integral_I,
    integral_I_monte_carlo,
    maximize_holevo,
    normalized_fidelity,
    weight_N,
)
from ._polfid import default_config_json as _default_config_json
from ._polfid import run as _run


def default_config():
    """Default run configuration as a dict."""
    return _json.loads(_default_config_json())


def run_sweep(what, config=None):
    """CSV text of the "fidelity", "capacity" or "integrals" sweep."""
    return _run(what, _json.dumps(config) if config is not None else "")


__all__ = [name for name in dir() if not name.startswith("_")]
