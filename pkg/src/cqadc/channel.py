"""Qubit states, the amplitude damping channel and its Holevo quantities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import linalg
from .errors import DimensionError, DomainError, ValidationError

KET_PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
KET_MINUS = np.array([1.0, -1.0]) / np.sqrt(2)


def density_operator(matrix, tol: float = 1e-9) -> np.ndarray:
    """Validate ``matrix`` as a density operator and return it as a read-only array.

    Hermiticity and unit trace are checked to 1e-10, positivity to ``tol``.
    """
    rho = linalg.hermitize(matrix)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise ValidationError(f"density operator has trace {tr!r}")
    if not linalg.is_psd(rho, tol):
        raise ValidationError("density operator is not positive semidefinite")
    rho.setflags(write=False)
    return rho


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by its Kraus operators."""

    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must share one shape")
        total = sum(linalg.dagger(k) @ k for k in ops)
        defect = np.linalg.norm(total - np.eye(shape[1]))
        if defect > 1e-10:
            raise ValidationError(f"Kraus operators are not trace preserving (defect {defect:.2e})")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def in_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True)
class Ensemble:
    """Prior probabilities paired with density operators of a common dimension."""

    priors: np.ndarray
    states: tuple

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float).reshape(-1)
        states = tuple(density_operator(s) for s in self.states)
        if len(priors) != len(states) or not states:
            raise ValidationError("priors and states must be non-empty and of equal length")
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-12:
            raise ValidationError("priors must be a probability vector")
        if len({s.shape for s in states}) != 1:
            raise DimensionError("ensemble states must share one dimension")
        priors.setflags(write=False)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def __len__(self) -> int:
        return len(self.states)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def adc(gamma: float) -> KrausChannel:
    """Qubit amplitude damping channel with damping probability ``gamma``."""
    g = _check_unit_interval("gamma", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - g)]])
    k1 = np.array([[0.0, np.sqrt(g)], [0.0, 0.0]])
    return KrausChannel((k0, k1))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    """Channel output ``sum_i K_i rho K_i^dagger``."""
    rho = linalg.as_matrix(rho)
    if rho.shape != (ch.in_dim, ch.in_dim):
        raise DimensionError(f"state of shape {rho.shape} does not fit channel input {ch.in_dim}")
    out = sum(k @ rho @ linalg.dagger(k) for k in ch.kraus_ops)
    return (out + linalg.dagger(out)) / 2


def apply_product(ch: KrausChannel, states: Sequence) -> np.ndarray:
    """Output of ``ch`` applied independently to each state, tensored left to right."""
    if len(states) == 0:
        raise DomainError("apply_product needs at least one input state")
    return linalg.kron_all([apply(ch, s) for s in states])


def binary_entropy(p: float) -> float:
    """Binary entropy in bits, with ``0 log 0 = 0``."""
    p = _check_unit_interval("p", p)
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits."""
    w = linalg.eigvalsh(rho)
    if w[0] < -1e-10 or w[-1] > 1 + 1e-10:
        raise ValidationError("eigenvalues outside [0, 1]; not a density operator")
    w = np.clip(w, 0.0, 1.0)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def holevo_information(ens: Ensemble, ch: KrausChannel) -> float:
    """Holevo quantity ``H(sum p N(rho)) - sum p H(N(rho))`` of a fixed ensemble."""
    if ens.dim != ch.in_dim:
        raise DimensionError(f"ensemble dimension {ens.dim} != channel input {ch.in_dim}")
    outs = [apply(ch, s) for s in ens.states]
    avg = sum(p * o for p, o in zip(ens.priors, outs))
    return von_neumann_entropy(avg) - sum(
        p * von_neumann_entropy(o) for p, o in zip(ens.priors, outs)
    )


def _chi_objective(p: float, gamma: float) -> float:
    root = np.sqrt(max(0.0, 1.0 - 4.0 * (1.0 - gamma) * gamma * p * p))
    return binary_entropy((1.0 - gamma) * p) - binary_entropy(min(1.0, (1.0 + root) / 2.0))


def holevo_chi_adc(gamma: float) -> tuple[float, float]:
    """Holevo chi-capacity of the amplitude damping channel.

    Maximizes the closed-form objective over the input population ``p``
    of the excited state. A 1e-3 grid locates the first maximizing cell,
    then a bounded Brent search refines ``p`` to 1e-10.

    Returns
    -------
    chi : float
        Capacity in bits per channel use.
    p_star : float
        Maximizing population.
    """
    g = _check_unit_interval("gamma", gamma)
    grid = np.linspace(0.0, 1.0, 1001)
    values = np.array([_chi_objective(p, g) for p in grid])
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(
        lambda p: -_chi_objective(p, g), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-10},
    )
    p_star, chi = grid[i], values[i]
    if -res.fun > chi:
        p_star, chi = float(res.x), float(-res.fun)
    return float(max(chi, 0.0)), float(p_star)


def chi_states(gamma: float) -> Ensemble:
    """Uniform two-state ensemble achieving the chi-capacity of ``adc(gamma)``.

    Both states are pure, with diagonal ``(1 - p*, p*)`` and off-diagonal
    entries ``+/- sqrt((1 - p*) p*)``.
    """
    _, p = holevo_chi_adc(gamma)
    off = np.sqrt((1.0 - p) * p)
    states = [np.array([[1.0 - p, s * off], [s * off, p]]) for s in (1.0, -1.0)]
    return Ensemble(np.array([0.5, 0.5]), tuple(states))


def pm_states() -> Ensemble:
    """Uniform ensemble of ``|+><+|`` and ``|-><-|``."""
    return Ensemble(
        np.array([0.5, 0.5]),
        (linalg.projector(KET_PLUS), linalg.projector(KET_MINUS)),
    )


def eps_bsc(gamma: float) -> float:
    """Crossover probability ``(1 - sqrt(1 - gamma)) / 2`` of the induced BSC."""
    g = _check_unit_interval("gamma", gamma)
    return (1.0 - np.sqrt(1.0 - g)) / 2.0
