"""Brownian motion on dyadic grids by midpoint displacement.

Construction lives in :mod:`dyadicbm.path` on top of a counter-based noise
family (:mod:`dyadicbm.noise`); ensembles and distributional checks in
:mod:`dyadicbm.ensemble` and :mod:`dyadicbm.verify`; oscillation statistics
and tail bounds in :mod:`dyadicbm.modulus`; the maximal inequality oracle in
:mod:`dyadicbm.etemadi`.  Hot kernels run on a compiled extension when
available (``dyadicbm.backend()`` tells you which).
"""

from ._kernels import BACKEND as _BACKEND
from .dyadic import Dyadic, canonicalize
from .ensemble import Ensemble, EnsembleConfig, generate_ensemble
from .etemadi import (
    EtemadiResult,
    FiniteStepDistribution,
    GaussianStepDistribution,
    etemadi_exact,
    etemadi_mc,
    gaussian_fourth_moment_bound,
    markov_tail_bound,
    rademacher,
)
from .modulus import (
    ModulusStat,
    compute_modulus,
    interval_tail_bound,
    modulus_tail_term,
)
from .noise import GENERATOR_ID, NoiseSource
from .path import DyadicPath, build_path, construct_level0, refine, refine_to
from .report import CheckRecord, StatReport

__version__ = "0.1.0"


def backend() -> str:
    """Name of the active kernel backend ('compiled' or 'numpy')."""
    return _BACKEND


__all__ = [
    "CheckRecord",
    "Dyadic",
    "DyadicPath",
    "Ensemble",
    "EnsembleConfig",
    "EtemadiResult",
    "FiniteStepDistribution",
    "GENERATOR_ID",
    "GaussianStepDistribution",
    "ModulusStat",
    "NoiseSource",
    "StatReport",
    "backend",
    "build_path",
    "canonicalize",
    "compute_modulus",
    "construct_level0",
    "etemadi_exact",
    "etemadi_mc",
    "gaussian_fourth_moment_bound",
    "generate_ensemble",
    "interval_tail_bound",
    "markov_tail_bound",
    "modulus_tail_term",
    "rademacher",
    "refine",
    "refine_to",
]
