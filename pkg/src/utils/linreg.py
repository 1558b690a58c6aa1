"""
Ordinary least squares with the usual inference statistics, and backward elimination on top of it. Used by the
regression oracle (refit after every pull) and by the verification of the pattern step simulator.

The system is solved through a QR decomposition of the (column-scaled) design, never through the normal equations:
step counts around 10^4 squared lose too many digits in X'X. Standard errors and p-values come from a statsmodels OLS
fit (QR method) once the design passed the rank check.
"""
from dataclasses import dataclass, field

import numpy as np
import statsmodels.api as sm
from scipy import linalg

from src.utils.errors import DimensionError, InsufficientDataError, ParameterDomainError, SingularDesignError

SINGULAR_TOL = 1e-10    # on |diag(R)| of the unit-norm scaled design


@dataclass(frozen=True)
class DesignMatrix:
    rows: np.ndarray    # (n, p) features
    targets: np.ndarray    # (n,)
    feature_names: tuple[str, ...]
    has_intercept: bool = True

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if rows.ndim == 1:
            rows = rows.reshape(targets.shape[0], len(self.feature_names))
        if rows.ndim != 2 or rows.shape[1] != len(self.feature_names):
            raise DimensionError(f"Rows have {rows.shape[-1]} columns but {len(self.feature_names)} feature names were given")
        if rows.shape[0] != targets.shape[0]:
            raise DimensionError(f"{rows.shape[0]} rows but {targets.shape[0]} targets")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @classmethod
    def from_lists(cls, rows: list, targets: list, feature_names: list[str], has_intercept: bool = True) -> "DesignMatrix":
        rows = np.asarray(rows, dtype=float).reshape(len(rows), len(feature_names))
        return cls(rows, np.asarray(targets, dtype=float), tuple(feature_names), has_intercept)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_parameters(self) -> int:
        return len(self.feature_names) + int(self.has_intercept)

    def without(self, feature: str) -> "DesignMatrix":
        keep = [i for i, name in enumerate(self.feature_names) if name != feature]
        return DesignMatrix(self.rows[:, keep], self.targets, tuple(self.feature_names[i] for i in keep), self.has_intercept)


@dataclass(frozen=True)
class RegressionFit:
    coefficients: np.ndarray
    intercept: float | None
    std_errors: np.ndarray
    p_values: np.ndarray
    residual_variance: float
    feature_names: tuple[str, ...] = ()
    n_observations: int = 0
    intercept_std_error: float | None = None
    intercept_p_value: float | None = None
    residuals: np.ndarray | None = field(default=None, repr=False, compare=False)

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.feature_names.index(name)])

    def as_dict(self) -> dict:
        return {
            "features": {
                name: {
                    "coefficient": float(self.coefficients[i]),
                    "std_error": float(self.std_errors[i]),
                    "p_value": float(self.p_values[i]),
                }
                for i, name in enumerate(self.feature_names)
            },
            "intercept": self.intercept,
            "intercept_std_error": self.intercept_std_error,
            "intercept_p_value": self.intercept_p_value,
            "residual_variance": self.residual_variance,
            "n_observations": self.n_observations,
        }


def _exact_p(estimates: np.ndarray) -> np.ndarray:
    # Zero residual variance: a non-zero estimate is certain, a zero one carries no evidence
    return np.where(estimates != 0, 0.0, 1.0)


def fit_ols(design: DesignMatrix, inference: bool = True) -> RegressionFit:
    """
    Least squares fit of @design.
        @pre design: at least as many rows as parameters (features + intercept)
        @param inference: compute std errors and p-values with statsmodels (skipped by the regression oracle, which
                          only predicts)
    Raises InsufficientDataError for an underdetermined system and SingularDesignError for a rank deficient one.
    """
    n, p = design.n_rows, design.n_parameters
    if p == 0:
        raise DimensionError("Design has neither features nor intercept")
    if n < p:
        raise InsufficientDataError(f"{n} rows cannot determine {p} parameters")

    x = design.rows
    if design.has_intercept:
        x = np.column_stack([np.ones(n), x])
    norms = np.linalg.norm(x, axis=0)
    if np.any(norms == 0):
        raise SingularDesignError("Design has an all-zero column")
    q, r = np.linalg.qr(x / norms, mode="reduced")
    if np.min(np.abs(np.diag(r))) < SINGULAR_TOL:
        raise SingularDesignError(f"Design of {n}x{p} is rank deficient")

    df = n - p
    if inference and df > 0:
        results = sm.OLS(design.targets, x).fit(method="qr")
        beta = np.asarray(results.params, dtype=float)
        residuals = np.asarray(results.resid, dtype=float)
        residual_variance = float(results.scale)
        std_errors = np.asarray(results.bse, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            p_values = np.asarray(results.pvalues, dtype=float)
        p_values = np.where(std_errors > 0, p_values, _exact_p(beta))
    else:
        beta = linalg.solve_triangular(r, q.T @ design.targets) / norms
        residuals = design.targets - x @ beta
        residual_variance = float(residuals @ residuals / df) if df > 0 else 0.0
        if inference:
            std_errors = np.zeros(p)
            p_values = _exact_p(beta)
        else:
            std_errors = np.full(p, np.nan)
            p_values = np.full(p, np.nan)

    offset = 1 if design.has_intercept else 0
    return RegressionFit(
        coefficients=beta[offset:],
        intercept=float(beta[0]) if design.has_intercept else None,
        std_errors=std_errors[offset:],
        p_values=np.clip(p_values[offset:], 0.0, 1.0),
        residual_variance=residual_variance,
        feature_names=design.feature_names,
        n_observations=n,
        intercept_std_error=float(std_errors[0]) if design.has_intercept else None,
        intercept_p_value=float(np.clip(p_values[0], 0.0, 1.0)) if design.has_intercept else None,
        residuals=residuals,
    )


def predict(fit: RegressionFit, features) -> float:
    features = np.asarray(features, dtype=float).reshape(-1)
    if features.shape[0] != fit.coefficients.shape[0]:
        raise DimensionError(f"Fit has {fit.coefficients.shape[0]} coefficients, got {features.shape[0]} features")
    value = float(fit.coefficients @ features)
    if fit.intercept is not None:
        value += fit.intercept
    return value


def backward_eliminate(design: DesignMatrix, alpha: float = 0.05) -> tuple[RegressionFit, tuple[str, ...]]:
    """
    Refits @design after dropping, one at a time, the feature with the largest p-value while that p-value is >= @alpha.
    The intercept is never dropped.
    returns the final fit and the surviving feature names
    """
    if not 0 < alpha < 1:
        raise ParameterDomainError(f"alpha must be in (0, 1), got {alpha}")
    fit = fit_ols(design)
    while len(design.feature_names) > 0:
        worst = int(np.argmax(fit.p_values))
        if fit.p_values[worst] < alpha or design.n_parameters == 1:
            break
        design = design.without(design.feature_names[worst])
        fit = fit_ols(design)
    return fit, design.feature_names
