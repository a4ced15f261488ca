"""scikit-learn style facade over the per-sample theorem checks.

Inputs ``X`` are parameter points ``(u, v)`` of shape ``(n, 2)``.  ``fit``
measures the surface on those points and fixes the zero tolerance;
``transform`` returns the residual columns and ``predict`` a per-sample
verdict label.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .ambient import get_model
from .catalog import default_model, make_immersion
from .pipeline import analyze_points
from .report import COLUMNS


def sample_verdicts(values, tol):
    """Per-sample verdict labels from a dict of residual columns."""
    r = np.asarray(values["r_conf"])
    labels = np.full(r.shape, "holomorphic-lift", dtype=object)
    defect = np.maximum(values["cW"], values["c3"]) > tol
    labels[defect] = "inconsistent"
    labels[values["a_eta"] > tol] = "hypothesis-violated"
    labels[values["tau_norm"] > tol] = "conformal-not-harmonic"
    labels[r > tol] = "non-conformal"
    labels[np.isnan(r)] = "degenerate"
    return labels


class GaussLiftTheoremCheck(BaseEstimator, TransformerMixin):
    """Residuals of the holomorphic Gauss lift criterion at chosen points.

    Parameters
    ----------
    surface : str
        Catalog name, or ``"custom"`` together with ``expressions``.
    surface_params : dict, optional
        Overrides of the catalog parameters.
    expressions : sequence of 7 str, optional
        Component expressions for a custom surface.
    model : {"flat_r7", "cy_x_s1"}, optional
        Ambient model; defaults to the catalog entry's model.
    fd_step : float
        Finite-difference step.
    domain : (u0, u1, v0, v1), optional
    """

    def __init__(self, surface="plane", surface_params=None, expressions=None, model=None,
                 fd_step=1e-3, domain=None):
        self.surface = surface
        self.surface_params = surface_params
        self.expressions = expressions
        self.model = model
        self.fd_step = fd_step
        self.domain = domain

    def _immersion(self):
        return make_immersion(self.surface, self.surface_params, self.domain, (4, 4), self.fd_step,
                              self.expressions)

    def _measure(self, X):
        X = check_array(X, dtype=float, ensure_min_samples=1)
        if X.shape[1] != 2:
            raise ValueError(f"X must have 2 columns (u, v), got {X.shape[1]}")
        f = self.immersion_
        f.check_margin(X, self.fd_step)
        return analyze_points(f, self.model_, X, self.fd_step)

    def fit(self, X, y=None):
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        self.immersion_ = self._immersion()
        self.model_ = get_model(self.model or default_model(self.surface))
        data = self._measure(X)
        ok = ~data["degenerate"]
        curv = data["curvature"][ok]
        self.scale_ = (float(np.max(curv)) if curv.size else 0.0) + 1.0
        self.tol_ = 10.0 * self.fd_step ** 2 * self.scale_
        self.n_features_in_ = 2
        self.residual_max_ = {k: float(np.max(data[k][ok], initial=0.0)) for k in COLUMNS}
        return self

    def transform(self, X):
        """``(n, 6)`` array with columns r_conf, tau_norm, a_eta, cW, c3, w_defect."""
        check_is_fitted(self, "tol_")
        data = self._measure(X)
        return np.column_stack([data[k] for k in COLUMNS])

    def predict(self, X):
        check_is_fitted(self, "tol_")
        data = self._measure(X)
        return sample_verdicts(data, self.tol_)
