"""POVMs, induced classical channels and minimum-error discrimination.

The optimal collective measurement is found by a fixed-point iteration and
accepted only once the Holevo-Yuen-Kennedy-Lax (HYKL) optimality residual is
below tolerance, so correctness never rests on the iteration itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .channel import KET_MINUS, KET_PLUS, Ensemble, KrausChannel, apply
from .codes import BlockCode, ml_decisions, ml_success, output_words
from .errors import ConvergenceError, DimensionError, StructureError, ValidationError

logger = logging.getLogger(__name__)

POVM_HERMITIAN_TOL = 1e-9
POVM_PSD_TOL = 1e-8
POVM_COMPLETENESS_TOL = 1e-8
QSC_SYMMETRY_TOL = 1e-6
_EXACT_TOL = 1e-14
_RANK_RTOL = 1e-14


@dataclass(frozen=True)
class POVM:
    """Positive operators on a ``dim``-dimensional space summing to the identity."""

    elements: tuple

    def __post_init__(self):
        els = tuple(linalg.as_matrix(e) for e in self.elements)
        if not els:
            raise ValidationError("a POVM needs at least one element")
        d = els[0].shape[0]
        if any(e.shape != (d, d) for e in els):
            raise DimensionError("POVM elements must be square and of equal size")
        checked = []
        for e in els:
            h = linalg.hermitize(e, POVM_HERMITIAN_TOL)
            if not linalg.is_psd(h, POVM_PSD_TOL):
                raise ValidationError("POVM element is not positive semidefinite")
            h.setflags(write=False)
            checked.append(h)
        defect = np.linalg.norm(sum(checked) - np.eye(d))
        if defect > POVM_COMPLETENESS_TOL:
            raise ValidationError(f"POVM elements do not sum to identity (defect {defect:.2e})")
        object.__setattr__(self, "elements", tuple(checked))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


@dataclass(frozen=True)
class DMC:
    """Discrete memoryless channel; ``probs[x, y] = P(y | x)``."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise ValidationError("DMC needs a non-empty 2-D probability matrix")
        if np.any(p < -1e-12) or np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-10):
            raise ValidationError("DMC rows must be probability vectors")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def in_size(self) -> int:
        return self.probs.shape[0]

    @property
    def out_size(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class DiscriminationResult:
    povm: POVM
    success_probability: float
    hykl_residual: float
    iterations: int


def pm_povm() -> POVM:
    """Projective measurement in the ``{|+>, |->}`` basis."""
    return POVM((linalg.projector(KET_PLUS), linalg.projector(KET_MINUS)))


def uninformative_povm(dim: int, M: int) -> POVM:
    return POVM(tuple(np.eye(dim) / M for _ in range(M)))


def default_tol(dim: int) -> float:
    """Default HYKL tolerance: 1e-7 up to dimension 16, 1e-6 beyond."""
    return 1e-7 if dim <= 16 else 1e-6


def _check_problem(outputs, priors) -> tuple[list, np.ndarray]:
    outs = [linalg.as_matrix(o) for o in outputs]
    p = np.asarray(priors, dtype=float).reshape(-1)
    if len(outs) != len(p) or not outs:
        raise DimensionError(f"{len(outs)} outputs but {len(p)} priors")
    if len({o.shape for o in outs}) != 1 or outs[0].shape[0] != outs[0].shape[1]:
        raise DimensionError("outputs must be square matrices of one size")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValidationError("priors must be a probability vector")
    return outs, p


def success_prob(povm: POVM, outputs: Sequence, priors) -> float:
    """Average success probability ``sum_m p_m tr(Lambda_m rho_m)``."""
    outs, p = _check_problem(outputs, priors)
    if len(povm) != len(outs) or povm.dim != outs[0].shape[0]:
        raise DimensionError("POVM does not match the outputs")
    total = sum(pm * np.trace(e @ o).real for pm, e, o in zip(p, povm, outs))
    if total < -1e-12 or total > 1 + 1e-12:
        raise ValidationError(f"success probability {total!r} outside [0, 1]")
    return float(min(max(total, 0.0), 1.0))


def induced_dmc(states: Ensemble, povm: POVM, ch: KrausChannel) -> DMC:
    """Classical channel ``P(y | x) = tr(Lambda_y N(rho_x))`` of a single use."""
    if povm.dim != ch.out_dim or states.dim != ch.in_dim:
        raise DimensionError("states, POVM and channel dimensions disagree")
    probs = np.array([[np.trace(e @ apply(ch, s)).real for e in povm] for s in states.states])
    return DMC(probs)


def code_outputs(code: BlockCode, states: Ensemble, ch: KrausChannel) -> list[np.ndarray]:
    """Product channel outputs ``N(rho_{x_1}) (x) ... (x) N(rho_{x_n})`` for every codeword."""
    if code.q != len(states):
        raise DimensionError(f"code alphabet {code.q} != number of input states {len(states)}")
    symbol_out = [apply(ch, s) for s in states.states]
    return [linalg.kron_all([symbol_out[x] for x in cw]) for cw in code.codewords]


def ml_povm(code: BlockCode, states: Ensemble, symbol_povm: POVM, ch: KrausChannel) -> POVM:
    """Collective POVM realizing individual measurements plus classical ML decoding.

    ``Lambda_m`` sums the product operators ``Lambda_{y_1} (x) ... (x) Lambda_{y_n}``
    over all outcome words ``y`` decoded to message ``m``.
    """
    dmc = induced_dmc(states, symbol_povm, ch)
    if code.q != dmc.in_size:
        raise DimensionError("code alphabet does not match the number of input states")
    decisions, _ = ml_decisions(code.codewords, dmc.probs)
    ys = output_words(dmc.out_size, code.n)
    d = symbol_povm.dim**code.n
    if d > linalg.MAX_DIM:
        raise DimensionError(f"output dimension {d} exceeds {linalg.MAX_DIM}")
    elements = [np.zeros((d, d), dtype=complex) for _ in range(code.M)]
    for y, m in zip(ys, decisions):
        elements[m] += linalg.kron_all([symbol_povm[j] for j in y])
    return POVM(tuple(elements))


def individual_success(
    code: BlockCode, states: Ensemble, symbol_povm: POVM, ch: KrausChannel
) -> float:
    """Success probability of symbolwise measurement followed by ML decoding.

    Computed classically from the induced DMC; no ``2^n``-dimensional
    operators are formed.
    """
    dmc = induced_dmc(states, symbol_povm, ch)
    if code.q != dmc.in_size:
        raise DimensionError("code alphabet does not match the number of input states")
    return ml_success(code.codewords, dmc.probs)


def _polar_blocks(blocks: list[np.ndarray]) -> tuple[list[np.ndarray], np.ndarray]:
    """Split the polar factor of ``[C_1, ..., C_M]`` back into blocks.

    Returns ``W_m = G^{-1/2} C_m`` with ``G = sum_m C_m C_m^dagger``
    (pseudo-inverted on its support) and the projector onto ``ker G``.
    Working from the stacked factor avoids squaring the condition number.
    """
    d = blocks[0].shape[0]
    widths = [b.shape[1] for b in blocks]
    u, s, vh = np.linalg.svd(np.hstack(blocks), full_matrices=False)
    keep = s > _RANK_RTOL * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
    uk = u[:, keep]
    w = uk @ vh[keep]
    kernel = np.eye(d) - uk @ linalg.dagger(uk)
    out, start = [], 0
    for width in widths:
        out.append(w[:, start:start + width])
        start += width
    return out, kernel


def _assemble(factors: list[np.ndarray], kernel: np.ndarray) -> list[np.ndarray]:
    M = len(factors)
    els = [f @ linalg.dagger(f) + kernel / M for f in factors]
    return [(e + linalg.dagger(e)) / 2 for e in els]


def pgm(outputs: Sequence, priors) -> POVM:
    """Pretty-good (square-root) measurement.

    ``Lambda_m = S^{-1/2} p_m rho_m S^{-1/2}`` with ``S = sum_m p_m rho_m``
    inverted on its support; the projector onto ``ker S`` is split evenly
    across the elements.
    """
    outs, p = _check_problem(outputs, priors)
    factors, kernel = _polar_blocks([np.sqrt(pm) * linalg.psd_sqrt(o) for pm, o in zip(p, outs)])
    return POVM(tuple(_assemble(factors, kernel)))


def _hykl_residual(elements, outs, p) -> float:
    r = sum(pm * e @ o for pm, e, o in zip(p, elements, outs))
    asym = float(np.linalg.norm(r - linalg.dagger(r)))
    r_sym = (r + linalg.dagger(r)) / 2
    worst = 0.0
    for pm, o in zip(p, outs):
        lo = np.linalg.eigvalsh(r_sym - pm * o)[0]
        worst = max(worst, -lo)
    return max(asym, worst)


def hykl_residual(povm: POVM, outputs: Sequence, priors) -> float:
    """Violation of the HYKL optimality conditions.

    With ``R = sum_m p_m Lambda_m rho_m`` this is the larger of
    ``||R - R^dagger||_F`` and the most negative eigenvalue of
    ``(R + R^dagger)/2 - p_m rho_m`` over ``m`` (as a magnitude). It is zero
    exactly when the POVM maximizes the average success probability.
    """
    outs, p = _check_problem(outputs, priors)
    if len(povm) != len(outs) or povm.dim != outs[0].shape[0]:
        raise DimensionError("POVM does not match the outputs")
    return _hykl_residual(povm.elements, outs, p)


def _exact_solution(outs, p):
    """POVM for the degenerate cases solved in closed form, else ``None``."""
    d, M = outs[0].shape[0], len(outs)
    if all(np.linalg.norm(o - outs[0]) <= _EXACT_TOL for o in outs[1:]):
        best = np.flatnonzero(p >= p.max() - _EXACT_TOL)
        return [np.eye(d) / len(best) if m in best else np.zeros((d, d)) for m in range(M)]
    for i in range(M):
        for j in range(i + 1, M):
            if np.linalg.norm(outs[i] @ outs[j]) > _EXACT_TOL:
                return None
    elements = []
    for o in outs:
        w, v = np.linalg.eigh((o + linalg.dagger(o)) / 2)
        vk = v[:, w > 1e-12 * max(w[-1], 1e-300)]
        elements.append(vk @ linalg.dagger(vk))
    rest = np.eye(d) - sum(elements)
    return [e + rest / M for e in elements]


def optimal_povm(
    outputs: Sequence,
    priors,
    tol: float | None = None,
    max_iter: int = 100_000,
    check_every: int = 5,
    stall_iter: int = 5_000,
) -> DiscriminationResult:
    """Minimum-error discrimination of ``outputs`` with prior probabilities ``priors``.

    Identical or mutually orthogonal outputs are solved in closed form.
    Otherwise the fixed-point iteration
    ``Lambda_m <- G^{-1/2} A_m Lambda_m A_m G^{-1/2}``, ``A_m = p_m rho_m``,
    ``G = sum_m A_m Lambda_m A_m``, is run on factors ``Lambda_m = B_m B_m^dagger``
    starting from the pretty-good measurement. Every iterate is a valid POVM.

    Parameters
    ----------
    tol : float, optional
        Required HYKL residual; defaults to :func:`default_tol`.
    max_iter : int
        Iteration budget.
    check_every : int
        Residual evaluation period.
    stall_iter : int
        Give up early when the best residual has not halved within this many
        iterations.

    Raises
    ------
    ConvergenceError
        If the residual never reaches ``tol``; carries the best residual.
    """
    outs, p = _check_problem(outputs, priors)
    if len(outs) < 2:
        raise DimensionError("discrimination needs at least two hypotheses")
    d = outs[0].shape[0]
    outs = [(o + linalg.dagger(o)) / 2 for o in outs]
    tol = default_tol(d) if tol is None else tol

    exact = _exact_solution(outs, p)
    if exact is not None:
        return _result(exact, outs, p, 0)

    scaled = [pm * o for pm, o in zip(p, outs)]
    factors, kernel = _polar_blocks([np.sqrt(pm) * linalg.psd_sqrt(o) for pm, o in zip(p, outs)])
    best_res, best_els, best_it = np.inf, None, 0
    it = 0
    while True:
        if it % check_every == 0 or it == max_iter:
            els = _assemble(factors, kernel)
            res = _hykl_residual(els, outs, p)
            if res < best_res:
                if res < 0.5 * best_res:
                    best_it = it
                best_res, best_els = res, els
            logger.debug("iteration %d: HYKL residual %.3e", it, res)
            if res <= tol:
                return _result(els, outs, p, it)
            if it >= max_iter or it - best_it >= stall_iter:
                raise ConvergenceError(
                    f"HYKL residual {best_res:.3e} above tolerance {tol:.1e} after {it} iterations",
                    best_residual=float(best_res),
                    iterations=it,
                )
        factors, kernel = _polar_blocks([a @ b for a, b in zip(scaled, factors)])
        it += 1


def _result(elements, outs, p, iterations) -> DiscriminationResult:
    povm = POVM(tuple(elements))
    return DiscriminationResult(
        povm=povm,
        success_probability=success_prob(povm, outs, p),
        hykl_residual=_hykl_residual(povm.elements, outs, p),
        iterations=iterations,
    )


def collective_optimum(
    code: BlockCode, states: Ensemble, ch: KrausChannel, tol: float | None = None
) -> DiscriminationResult:
    """Optimal collective measurement for equiprobable codewords."""
    outs = code_outputs(code, states, ch)
    return optimal_povm(outs, np.full(code.M, 1.0 / code.M), tol)


def confusion_matrix(povm: POVM, outputs: Sequence) -> np.ndarray:
    """``P[m, k] = tr(Lambda_k rho_m)``."""
    return np.array([[np.trace(e @ o).real for e in povm] for o in outputs])


def extract_qsc_eps(
    code: BlockCode, states: Ensemble, ch: KrausChannel, tol: float | None = None
) -> float:
    """Crossover probability of the symmetric channel induced by the optimal POVM.

    The ``M x M`` confusion matrix of the optimal collective measurement must
    have all off-diagonal entries equal and all diagonal entries equal to
    ``1 - (M - 1) eps`` (each within 1e-6); for ``M = 4`` this is a QSC.

    Raises
    ------
    StructureError
        If the induced channel is not symmetric at tolerance.
    """
    outs = code_outputs(code, states, ch)
    res = optimal_povm(outs, np.full(code.M, 1.0 / code.M), tol)
    conf = confusion_matrix(res.povm, outs)
    off = conf[~np.eye(code.M, dtype=bool)]
    spread = float(off.max() - off.min())
    if spread > QSC_SYMMETRY_TOL:
        raise StructureError(f"off-diagonal transition probabilities spread by {spread:.2e}")
    eps = float(off.mean())
    diag_err = float(np.max(np.abs(np.diag(conf) - (1.0 - (code.M - 1) * eps))))
    if diag_err > QSC_SYMMETRY_TOL:
        raise StructureError(f"diagonal deviates from 1 - (M-1) eps by {diag_err:.2e}")
    return eps
