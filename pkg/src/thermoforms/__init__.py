"""Central-moment symmetric forms on the state surfaces of gas entropy models.

The library evaluates the second, third and fourth central-moment symmetric
forms induced by a measurement distribution on the state surface of an
entropy model S(e, v), finds the "symmetric process" directions that
annihilate the skewness form, and maps the domains where the even-order
forms stay positive-definite.

Entry points
------------
* :mod:`thermoforms.entropy`    -- entropy models and the (e, v) <-> (T, v) maps
* :mod:`thermoforms.forms`      -- sigma2 / sigma3 / sigma4 evaluation
* :mod:`thermoforms.processes`  -- slope cubic, root classification, curves
* :mod:`thermoforms.domains`    -- positivity classification and grid scans
* :mod:`thermoforms.oracle`     -- 1-D exponential-family cross-validation
* :mod:`thermoforms.estimators` -- scikit-learn compatible wrappers
* ``thermoforms`` CLI           -- forms / processes / curve / domains / oracle
"""

__version__ = "0.1.0"

from .entropy import (CustomModel, EntropyModel, IdealGas, StatePoint,
                      VanDerWaalsReduced, make_model)
from .estimators import (ApplicabilityClassifier, MomentFormsTransformer,
                         SymmetricProcessCounter)
from .exceptions import (AllZeroCubicError, DimensionMismatchError,
                         DomainError, NonPositiveTemperatureError,
                         QuadratureError, SingularSigma2Error,
                         ThermoformsError)
from .forms import (SymForm2, SymForm3, SymForm4, central_from_raw, sigma2,
                    sigma3, sigma4)
from .domains import (DomainCell, GridSpec, ScanResult, classify_sigma2,
                      classify_sigma4, scan, vdw_spinodal_temperature)
from .oracle import ExponentialFamily, GaussianFamily, make_family
from .processes import (CubicCoeffs, ProcessCurve, RootCount, RootSet,
                        cubic_at, integrate_process, root_count, solve_cubic)

__all__ = [
    "__version__",
    # entropy
    "EntropyModel", "IdealGas", "VanDerWaalsReduced", "CustomModel",
    "StatePoint", "make_model",
    # forms
    "SymForm2", "SymForm3", "SymForm4", "sigma2", "sigma3", "sigma4",
    "central_from_raw",
    # processes
    "CubicCoeffs", "RootSet", "RootCount", "ProcessCurve", "cubic_at",
    "solve_cubic", "root_count", "integrate_process",
    # domains
    "GridSpec", "DomainCell", "ScanResult", "classify_sigma2",
    "classify_sigma4", "scan", "vdw_spinodal_temperature",
    # oracle
    "GaussianFamily", "ExponentialFamily", "make_family",
    # estimators
    "MomentFormsTransformer", "SymmetricProcessCounter", "ApplicabilityClassifier",
    # exceptions
    "ThermoformsError", "DomainError", "NonPositiveTemperatureError",
    "SingularSigma2Error", "DimensionMismatchError", "AllZeroCubicError",
    "QuadratureError",
]
