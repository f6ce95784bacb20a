"""Quasi-Monte Carlo point sets, discrepancy and error functionals."""

from .cbc import CbcResult, cbc_fast, cbc_naive
from .digital import (
    GeneratingMatrices,
    digital_kronecker,
    digital_net,
    dual_net,
    net_character_sum,
    niederreiter_matrices,
    polynomial_lattice,
    walsh,
)
from .discrepancy import (
    enhanced_trig_degree,
    etk_bound,
    exp_sum,
    l2_discrepancy,
    l2_star_discrepancy,
    l2_via_parseval,
    lp_discrepancy_mc,
    star_discrepancy_exact,
)
from .errors import (
    CapacityError,
    NumericalConsistencyError,
    ParameterError,
    ParseError,
    QmcError,
    RepresentationError,
)
from .formats import read_pointset, write_pointset
from .kernels import KernelSpec, parse_space, wce_kernel, wce_korobov_closed, wce_korobov_dual
from .pointsets import (
    LatticeRule,
    PointSet,
    halton,
    hammersley,
    kronecker,
    rank1_lattice,
    symmetrized_hammersley,
    van_der_corput,
)
from .stochastic import RngStream, kl_brownian_paths, random_discrepancy_experiment

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
