"""Single-instance OS-ELM autoencoder trained one sample at a time.

The hidden layer is a frozen random projection; only the output weights
``beta`` are learned, by recursive least squares seeded with a ridge prior
``P0 = I / ridge_lambda``.  With ``forgetting_rate == 1`` the result after
``n`` updates equals the batch ridge solution over those ``n`` samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import ConfigError, DataError, NumericalError

ACTIVATIONS = ("sigmoid", "identity")

_DENOM_EPS = 1e-12


@dataclass(frozen=True)
class OselmParams:
    input_dim: int
    hidden_dim: int
    activation: str = "sigmoid"
    seed: int = 0
    ridge_lambda: float = 0.01
    forgetting_rate: float = 1.0

    def __post_init__(self):
        if self.input_dim < 1 or self.hidden_dim < 1:
            raise ConfigError(
                f"input_dim and hidden_dim must be >= 1, got {self.input_dim}, {self.hidden_dim}"
            )
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}; expected one of {ACTIVATIONS}")
        if not self.ridge_lambda > 0:
            raise ConfigError(f"ridge_lambda must be > 0, got {self.ridge_lambda}")
        if not 0 < self.forgetting_rate <= 1:
            raise ConfigError(f"forgetting_rate must lie in (0, 1], got {self.forgetting_rate}")

    def replace(self, **changes) -> "OselmParams":
        return OselmParams(**{**asdict(self), **changes})


def _sigmoid(z):
    # tanh form: no overflow for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass(eq=False)
class OselmModel:
    """Weights and recursive-least-squares state of one autoencoder.

    Attributes
    ----------
    alpha : ndarray, shape (D, H)
        Random input weights, frozen after construction.
    bias : ndarray, shape (H,)
        Random hidden bias, frozen after construction.
    beta : ndarray, shape (H, D)
        Output weights; the only trained parameter.
    P : ndarray, shape (H, H)
        Inverse of the regularized hidden-activation Gram matrix.
    """

    params: OselmParams
    alpha: np.ndarray
    bias: np.ndarray
    beta: np.ndarray
    P: np.ndarray
    trained_count: int = 0
    _act: object = field(default=None, repr=False)

    def __post_init__(self):
        self._act = _sigmoid if self.params.activation == "sigmoid" else None

    @classmethod
    def new(cls, params: OselmParams) -> "OselmModel":
        rng = np.random.default_rng(params.seed)
        D, H = params.input_dim, params.hidden_dim
        alpha = rng.uniform(-1.0, 1.0, size=(D, H))
        bias = rng.uniform(-1.0, 1.0, size=H)
        return cls(
            params=params,
            alpha=alpha,
            bias=bias,
            beta=np.zeros((H, D)),
            P=np.eye(H) / params.ridge_lambda,
        )

    @property
    def input_dim(self) -> int:
        return self.params.input_dim

    @property
    def hidden_dim(self) -> int:
        return self.params.hidden_dim

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.params.input_dim,):
            raise DataError(f"expected vector of length {self.params.input_dim}, got shape {x.shape}")
        return x

    def hidden(self, x) -> np.ndarray:
        """Hidden activation ``act(x @ alpha + bias)``."""
        x = self._check(x)
        z = x @ self.alpha + self.bias
        return z if self._act is None else self._act(z)

    def reconstruct(self, x) -> np.ndarray:
        return self.hidden(x) @ self.beta

    def anomaly_score(self, x) -> float:
        """Mean squared reconstruction error of ``x``."""
        x = self._check(x)
        r = x - self.reconstruct(x)
        return float(r @ r) / x.shape[0]

    def seq_train(self, x) -> "OselmModel":
        """Rank-one update of ``P`` and ``beta`` with target ``x`` (in place).

        Raises
        ------
        DataError
            If ``x`` has the wrong shape or non-finite entries.
        NumericalError
            If the update denominator is not safely positive.
        """
        x = self._check(x)
        if not np.all(np.isfinite(x)):
            raise DataError("training sample contains non-finite values")
        h = self.hidden(x)
        rho2 = self.params.forgetting_rate ** 2
        Ph = self.P @ h
        denom = rho2 + h @ Ph
        if not denom > _DENOM_EPS:
            raise NumericalError(f"degenerate update denominator {denom!r}")
        P = (self.P - np.outer(Ph, Ph) / denom) / rho2
        P = 0.5 * (P + P.T)
        self.P = P
        self.beta = self.beta + np.outer(P @ h, x - h @ self.beta)
        self.trained_count += 1
        return self

    def copy(self) -> "OselmModel":
        return OselmModel(
            params=self.params,
            alpha=self.alpha.copy(),
            bias=self.bias.copy(),
            beta=self.beta.copy(),
            P=self.P.copy(),
            trained_count=self.trained_count,
        )

    def arrays(self) -> dict:
        """Array state keyed by field name (used for checkpoints and audits)."""
        return {"alpha": self.alpha, "bias": self.bias, "beta": self.beta, "P": self.P}


def new_model(params: OselmParams) -> OselmModel:
    return OselmModel.new(params)
