"""Wavelet toolkit for mild Navier-Stokes solutions on the torus.

Thin wrapper over the compiled extension: JSON-string results are parsed
into dictionaries here.
"""

import json as _json

try:
    from ._pmns import *  # noqa: F401,F403  (installed layout)
    from . import _pmns as _impl
except ImportError:  # in-tree layout: extension on PYTHONPATH
    from _pmns import *  # noqa: F401,F403
    import _pmns as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")] + [
    "heat_trajectory_norms_dict",
    "fit_decay_dict",
    "picard_solve_dict",
    "run_basis_suite_dict",
]


def heat_trajectory_norms_dict(*args, **kwargs):
    return _json.loads(_impl.heat_trajectory_norms(*args, **kwargs))


def fit_decay_dict(*args, **kwargs):
    return _json.loads(_impl.fit_decay(*args, **kwargs))


def picard_solve_dict(*args, **kwargs):
    return _json.loads(_impl.picard_solve(*args, **kwargs))


def run_basis_suite_dict(*args, **kwargs):
    return _json.loads(_impl.run_basis_suite(*args, **kwargs))
