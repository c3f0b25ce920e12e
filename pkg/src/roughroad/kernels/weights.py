"""Cell weights of a look-ahead kernel and the discrete convolution R_{j+1/2}."""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DivisibilityError, InvalidArgumentError
from ..state import State
from .base_kernel import KernelSpec

logger = logging.getLogger(__name__)

DIVISIBILITY_TOL = 1e-9

ArrayLike = Union[State, np.ndarray]


@dataclass(frozen=True)
class KernelWeights:
    """omega_k = (1/dx) * integral of omega_eta over [k dx, (k+1) dx], k < n."""

    weights: np.ndarray
    dx: float
    eta: float
    omega_at_zero: float
    kind: str = "linear-decreasing"

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def mass(self) -> float:
        """dx * sum(omega_k); 1 for normalized kernels."""
        return float(self.dx * self.weights.sum())

    def to_dict(self):
        return {
            "kind": self.kind,
            "eta": self.eta,
            "dx": self.dx,
            "n": self.n,
            "omega_at_zero": self.omega_at_zero,
        }


@dataclass(frozen=True)
class ConvolutionField:
    """R at the M + 1 interfaces of an M-cell state.

    ``values[i]`` belongs to the interface between physical positions i - 1
    and i, so ``values[0]`` is the left boundary interface.
    """

    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())


def discretize_kernel(spec: KernelSpec, dx: float) -> KernelWeights:
    """Integrate the kernel exactly over each of the N = eta / dx cells.

    Raises:
        DivisibilityError: If eta / dx is not an integer >= 1
    """
    dx = float(dx)
    if not dx > 0:
        raise InvalidArgumentError(f"dx must be positive, got {dx}")
    ratio = spec.eta / dx
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > DIVISIBILITY_TOL * ratio:
        nearest = spec.eta / max(1, n)
        raise DivisibilityError(f"eta={spec.eta:g} is not a multiple of dx={dx:.12g}", nearest=nearest)

    edges = spec.eta * np.arange(n + 1) / n
    weights = np.diff(spec.antiderivative(edges)) / dx
    logger.debug("Discretized %s kernel: eta=%g, dx=%g, N=%d", spec.kind, spec.eta, dx, n)
    return KernelWeights(
        weights=weights,
        dx=dx,
        eta=spec.eta,
        omega_at_zero=spec.omega_at_zero(),
        kind=spec.kind,
    )


def _values(state: ArrayLike) -> np.ndarray:
    return state.values if isinstance(state, State) else np.asarray(state, dtype=np.float64)


def convolve(state: ArrayLike, weights: KernelWeights, j: int) -> float:
    """dx * sum_k omega_k rho_{j+k+1} for the interface right of position j.

    ``j`` is an array position in ``-1 .. M - 1``; cells past the right end
    are absorbing ghosts equal to the last physical value.
    """
    rho = _values(state)
    last = rho.shape[0] - 1
    if not -1 <= j <= last:
        raise IndexError(f"Interface position {j} outside [-1, {last}]")
    acc = 0.0
    for k, w in enumerate(weights.weights):
        acc += w * rho[min(j + k + 1, last)]
    return weights.dx * acc


def convolve_all(state: ArrayLike, weights: KernelWeights) -> ConvolutionField:
    """R at every interface of one step, summed in the same order as ``convolve``."""
    rho = _values(state)
    m = rho.shape[0]
    n = weights.n
    padded = np.concatenate((rho, np.full(n, rho[-1])))
    acc = np.zeros(m + 1)
    term = np.empty(m + 1)
    for k in range(n):
        np.multiply(weights.weights[k], padded[k : k + m + 1], out=term)
        acc += term
    acc *= weights.dx
    return ConvolutionField(values=acc)
