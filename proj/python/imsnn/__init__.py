"""ISI-modulated spiking neural networks with Gaussian synapses."""

from ._core import (
    Error,
    Network,
    __version__,
    backward,
    cross_entropy,
    demo,
    encode,
    exit_code_for,
    forward,
    gaussian_factor,
    gradcheck,
    isi_trace,
    isi_update,
    load_model,
    membrane_step,
    output_probabilities,
    oracle_backward,
    parse_architecture,
    save_model,
    surrogate,
)

__all__ = [
    "Error",
    "Network",
    "__version__",
    "backward",
    "cross_entropy",
    "demo",
    "encode",
    "exit_code_for",
    "forward",
    "gaussian_factor",
    "gradcheck",
    "isi_trace",
    "isi_update",
    "load_model",
    "membrane_step",
    "output_probabilities",
    "oracle_backward",
    "parse_architecture",
    "save_model",
    "surrogate",
]
