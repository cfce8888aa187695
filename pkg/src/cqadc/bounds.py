"""Finite-blocklength bounds and capacities for q-ary symmetric channels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import binom

from .channel import adc, binary_entropy, eps_bsc, pm_states
from .codes import BlockCode, named_code, ml_success
from .errors import CqadcError, DimensionError, DomainError
from .measurement import DMC, extract_qsc_eps


@dataclass(frozen=True)
class BoundResult:
    """A bound on the average success probability.

    ``kind`` is ``"converse_upper"``, ``"rcb_lower"`` or ``"exact"``;
    ``params`` is ``(n, M, q, eps)``. ``detail`` holds intermediate
    quantities (``t`` and ``A_t`` for the converse, ``p`` and ``s`` for the
    random-coding bound).
    """

    value: float
    kind: str
    params: tuple
    detail: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CapacityPair:
    """BSC capacity in bits and QSC capacity in 4-ary units at one damping value."""

    c_bsc: float
    c_qsc: float
    gamma: float


def symmetric_dmc(q: int, eps: float) -> DMC:
    """q-ary symmetric channel moving a symbol to each other symbol with probability ``eps``."""
    if q < 2 or not 0.0 <= eps <= 1.0 / (q - 1):
        raise DomainError(f"need q >= 2 and 0 <= eps <= 1/(q-1); got q={q}, eps={eps}")
    probs = np.full((q, q), float(eps))
    np.fill_diagonal(probs, 1.0 - (q - 1) * eps)
    return DMC(probs)


def bsc(eps: float) -> DMC:
    return symmetric_dmc(2, eps)


def ml_success_exact(code: BlockCode, dmc: DMC) -> float:
    """Exact average ML success of ``code`` over a square DMC on its alphabet."""
    if dmc.in_size != code.q or dmc.out_size != code.q:
        raise DimensionError(f"DMC is {dmc.in_size}x{dmc.out_size}, code alphabet is {code.q}")
    return ml_success(code.codewords, dmc.probs)


def _check_nmq(n: int, M: int, q: int) -> None:
    if n < 1 or M < 1 or q < 2:
        raise DomainError(f"need n >= 1, M >= 1, q >= 2; got n={n}, M={M}, q={q}")


def qsc_converse(n: int, M: int, q: int, eps: float) -> BoundResult:
    """Upper bound on the success probability of any ``(n, M)_q`` code over the q-SC.

    ``eps`` is the probability of each particular wrong symbol, so a symbol
    survives with probability ``1 - (q - 1) eps``. The decoding region of
    size ``q^n / M`` is filled greedily with the most likely error patterns:
    all patterns of weight below ``t`` plus ``A_t`` patterns of weight ``t``.
    """
    _check_nmq(n, M, q)
    eps = float(eps)
    if M > q**n:
        raise DomainError(f"M={M} exceeds q^n={q**n}")
    if not 0.0 <= eps <= 1.0 / q:
        raise DomainError(f"eps must lie in [0, 1/q], got {eps}")
    budget = Fraction(q**n, M)
    t, a_t = 0, budget
    # A_t is decreasing in t; keep the last non-negative one, capped at weight n.
    while t < n:
        nxt = a_t - math.comb(n, t) * (q - 1) ** t
        if nxt < 0:
            break
        t, a_t = t + 1, nxt
    keep = 1.0 - (q - 1) * eps
    value = sum(math.comb(n, j) * (q - 1) ** j * eps**j * keep ** (n - j) for j in range(t))
    value += float(a_t) * eps**t * keep ** (n - t)
    return BoundResult(
        float(min(max(value, 0.0), 1.0)), "converse_upper", (n, M, q, eps), {"t": t, "A_t": float(a_t)}
    )


def qsc_rcb(n: int, M: int, q: int, eps: float) -> BoundResult:
    """Random-coding lower bound: mean ML success of a uniformly random ``(n, M)_q`` code.

    Codewords are drawn independently and uniformly (repetition allowed);
    collisions in the decoder are resolved uniformly at random. Here ``eps``
    is the total symbol error probability, spread evenly over the ``q - 1``
    wrong symbols.
    """
    _check_nmq(n, M, q)
    eps = float(eps)
    if not 0.0 <= eps <= 1.0 - 1.0 / q:
        raise DomainError(f"eps must lie in [0, 1 - 1/q], got {eps}")
    i = np.arange(n + 1)
    p = np.array([math.comb(n, k) * (q - 1) ** k for k in range(n + 1)], dtype=float) / q**n
    s = np.concatenate([np.cumsum(p[::-1])[::-1][1:], [0.0]])
    others = M - 1
    inner = np.ones(n + 1)
    if others > 0:
        l = np.arange(others + 1)
        for k in range(n + 1):
            total = p[k] + s[k]
            pmf = binom.pmf(l, others, p[k] / total)
            inner[k] = total**others * np.sum(pmf / (l + 1))
    weights = binom.pmf(i, n, eps)
    value = float(np.sum(weights * inner))
    return BoundResult(float(min(max(value, 0.0), 1.0)), "rcb_lower", (n, M, q, eps), {"p": p, "s": s})


def c_bsc(eps: float) -> float:
    """BSC capacity ``1 - H_b(eps)`` in bits per use."""
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps must lie in [0, 1], got {eps}")
    return 1.0 - binary_entropy(eps)


def c_qsc(eps: float) -> float:
    """Quaternary symmetric channel capacity in 4-ary units; ``eps`` per wrong symbol."""
    if not 0.0 <= eps <= 0.25:
        raise DomainError(f"eps must lie in [0, 1/4], got {eps}")
    return (2.0 - binary_entropy(3.0 * eps) - 3.0 * eps * np.log2(3.0)) / 2.0


def capacities(gamma: float, tol: float | None = None) -> CapacityPair:
    """BSC and QSC capacities induced by the [3, 2] SPC scheme at ``gamma``."""
    eps_q = extract_qsc_eps(named_code("spc_3_2"), pm_states(), adc(gamma), tol)
    return CapacityPair(c_bsc(eps_bsc(gamma)), c_qsc(min(max(eps_q, 0.0), 0.25)), float(gamma))


def _qsc_advantage(gamma: float, tol: float | None) -> float:
    pair = capacities(gamma, tol)
    return 2.0 / 3.0 * pair.c_qsc - pair.c_bsc


def capacity_crossing(resolution: float = 1e-3, scan_step: float = 0.01, tol: float | None = None) -> float:
    """Smallest damping at which ``(2/3) C_QSC`` exceeds ``C_BSC``.

    A scan with spacing ``scan_step`` finds the first grid cell where the
    sign flips; bisection then shrinks it below ``resolution``. Returns the
    upper end of the final bracket.
    """
    if resolution <= 0 or scan_step <= 0:
        raise DomainError("resolution and scan_step must be positive")
    grid = np.arange(1, int(round(1.0 / scan_step))) * scan_step
    lo = 0.0
    for g in grid:
        if _qsc_advantage(g, tol) > 0:
            hi = float(g)
            break
        lo = float(g)
    else:
        raise CqadcError("(2/3) C_QSC never exceeds C_BSC on the scan grid")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if _qsc_advantage(mid, tol) > 0:
            hi = mid
        else:
            lo = mid
    return hi
