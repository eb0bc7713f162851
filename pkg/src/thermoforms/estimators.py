"""Scikit-learn compatible wrappers around the point-wise operations.

The core library is functional; these estimators expose the map-over-points
surfaces (form components as features, root counts and applicability as
labels) with the fit/transform/predict protocol, ``get_params``/clone
support and input validation, so they compose with pipelines and the wider
ecosystem.  ``fit`` validates hyperparameters and binds the entropy model;
nothing is learned from data.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import domains, forms, processes
from .entropy import make_model
from .exceptions import DomainError, SingularSigma2Error
from .validation import check_points, check_positive_scalar

__all__ = [
    "MomentFormsTransformer",
    "SymmetricProcessCounter",
    "ApplicabilityClassifier",
]

_FORM_FEATURES = (
    "sigma2_ee", "sigma2_ev", "sigma2_vv",
    "sigma3_eee", "sigma3_eev", "sigma3_evv", "sigma3_vvv",
    "sigma4_eeee", "sigma4_eeev", "sigma4_eevv", "sigma4_evvv", "sigma4_vvvv",
)


class _ModelBound(BaseEstimator):
    """Shared fit/validation: binds an entropy model from hyperparameters."""

    def __init__(self, model="ideal", n=3.0):
        self.model = model
        self.n = n

    def fit(self, X=None, y=None):
        check_positive_scalar(self.n, "n")
        self.model_ = make_model(self.model, self.n)
        self.n_features_in_ = 2
        return self

    def _require_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit() first"
            )


class MomentFormsTransformer(_ModelBound, TransformerMixin):
    """Map (e, v) state points to the 12 central-moment form components.

    Output columns: sigma2 (ee, ev, vv), sigma3 (eee.. vvv), sigma4
    (eeee.. vvvv).  Points where sigma2 degenerates have NaN in the sigma4
    columns when ``on_error="nan"`` (the default raises).
    """

    def __init__(self, model="ideal", n=3.0, on_error="raise"):
        super().__init__(model=model, n=n)
        self.on_error = on_error

    def fit(self, X=None, y=None):
        if self.on_error not in ("raise", "nan"):
            raise ValueError(f"on_error must be 'raise' or 'nan', got {self.on_error!r}")
        return super().fit(X, y)

    def transform(self, X) -> np.ndarray:
        self._require_fitted()
        pts = check_points(X)
        out = np.full((pts.shape[0], 12), np.nan)
        for i, (e, v) in enumerate(pts):
            try:
                out[i, 0:3] = forms.sigma2(self.model_, e, v).components
                out[i, 3:7] = forms.sigma3(self.model_, e, v).components
                out[i, 7:12] = forms.sigma4(self.model_, e, v).components
            except SingularSigma2Error:
                # sigma2/sigma3 columns are already written; sigma4 stays NaN
                if self.on_error == "raise":
                    raise
            except DomainError:
                if self.on_error == "raise":
                    raise
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(_FORM_FEATURES, dtype=object)


class SymmetricProcessCounter(_ModelBound):
    """Predict the number of symmetric-process slopes {1, 3} at (e, v) points."""

    def predict(self, X) -> np.ndarray:
        self._require_fitted()
        pts = check_points(X)
        out = np.empty(pts.shape[0], dtype=int)
        for i, (e, v) in enumerate(pts):
            out[i] = processes.root_count(self.model_, e, v).count
        return out

    def decision_function(self, X) -> np.ndarray:
        """Normalized cubic discriminant per point (> 0 means three slopes)."""
        self._require_fitted()
        pts = check_points(X)
        out = np.empty(pts.shape[0])
        for i, (e, v) in enumerate(pts):
            out[i] = processes.root_count(self.model_, e, v).discriminant
        return out


class ApplicabilityClassifier(_ModelBound):
    """Binary applicability of (T, v) points: 1 where both even forms are
    positive-definite, 0 elsewhere (including out-of-domain points)."""

    def predict(self, X) -> np.ndarray:
        s2, s4 = self.classify(X)
        return ((s2 == "positive_definite") & (s4 == "positive_definite")).astype(int)

    def classify(self, X):
        """Per-point (sigma2_class, sigma4_class) label arrays."""
        self._require_fitted()
        pts = check_points(X)
        s2 = np.empty(pts.shape[0], dtype=object)
        s4 = np.empty(pts.shape[0], dtype=object)
        for i, (T, v) in enumerate(pts):
            try:
                e = self.model_.energy_from_T(T, v)
                self.model_.check_domain(e, v)
            except DomainError:
                s2[i] = s4[i] = "invalid"
                continue
            form2 = forms.sigma2(self.model_, e, v)
            s2[i] = domains.classify_sigma2(form2)
            if s2[i] == "degenerate":
                s4[i] = "undefined_pole"
            else:
                s4[i] = domains.classify_sigma4(forms.sigma4(self.model_, e, v))
        return s2, s4
