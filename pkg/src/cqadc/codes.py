"""Classical block codes over small finite fields and exhaustive ML decoding."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, DomainError, ValidationError

ENUM_GUARD = 2**20
PAIRWISE_GUARD = 2**16
TIE_RTOL = 1e-12

# F_4 = F_2[x]/(x^2 + x + 1); element b1*x + b0 is stored as the integer 2*b1 + b0.
_GF4_MUL = np.array(
    [
        [0, 0, 0, 0],
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
    ]
)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def field_tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of F_q for prime ``q`` or ``q = 4``."""
    if q == 4:
        a = np.arange(4)
        return a[:, None] ^ a[None, :], _GF4_MUL.copy()
    if _is_prime(q):
        a = np.arange(q)
        return (a[:, None] + a[None, :]) % q, (a[:, None] * a[None, :]) % q
    raise DomainError(f"unsupported field size q={q}; use a prime or 4")


@dataclass(frozen=True)
class BlockCode:
    """An ``(n, M)_q`` code given by its codeword list.

    Row ``m`` of ``codewords`` is the codeword for message index ``m``
    (0-based); that ordering fixes POVM element indexing downstream.
    """

    q: int
    codewords: np.ndarray

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=np.int64)
        if cw.ndim != 2 or cw.shape[0] == 0 or cw.shape[1] == 0:
            raise ValidationError("codewords must be a non-empty M x n array")
        if np.any(cw < 0) or np.any(cw >= self.q):
            raise ValidationError(f"codeword symbols must lie in [0, {self.q - 1}]")
        cw.setflags(write=False)
        object.__setattr__(self, "codewords", cw)

    @property
    def n(self) -> int:
        return self.codewords.shape[1]

    @property
    def M(self) -> int:
        return self.codewords.shape[0]

    def __len__(self) -> int:
        return self.M

    def __iter__(self):
        return iter(self.codewords)


@dataclass(frozen=True)
class LinearCode(BlockCode):
    """An ``[n, k]_q`` linear code with its generator matrix."""

    generator: np.ndarray = None

    @property
    def k(self) -> int:
        return self.generator.shape[0]


def from_codewords(q: int, words) -> BlockCode:
    """Build an unstructured code from an explicit list of distinct codewords."""
    code = BlockCode(q, np.asarray(words))
    if len({tuple(w) for w in code.codewords}) != code.M:
        raise ValidationError("codeword list contains duplicates")
    return code


def from_generator(q: int, g) -> LinearCode:
    """Enumerate the code spanned by the rows of ``g`` over F_q.

    Message ``m`` (0-based) uses the base-``q`` digits of ``m``, most
    significant first, as its information vector.
    """
    add, mul = field_tables(q)
    gen = np.atleast_2d(np.asarray(g, dtype=np.int64))
    if gen.ndim != 2 or gen.size == 0:
        raise ValidationError("generator must be a non-empty k x n matrix")
    if np.any(gen < 0) or np.any(gen >= q):
        raise ValidationError(f"generator entries must lie in [0, {q - 1}]")
    k, n = gen.shape
    if q**k > ENUM_GUARD:
        raise DimensionError(f"q^k = {q**k} codewords exceeds the enumeration guard")
    words = np.zeros((q**k, n), dtype=np.int64)
    for m, info in enumerate(itertools.product(range(q), repeat=k)):
        acc = np.zeros(n, dtype=np.int64)
        for u, row in zip(info, gen):
            acc = add[acc, mul[u, row]]
        words[m] = acc
    if len({tuple(w) for w in words}) != len(words):
        raise ValidationError("generator is rank deficient over F_q (duplicate codewords)")
    gen.setflags(write=False)
    return LinearCode(q, words, gen)


NAMED_GENERATORS = {
    "spc_3_2": [[1, 0, 1], [0, 1, 1]],
    "reduced_hamming_6_3": [
        [1, 0, 0, 1, 1, 0],
        [0, 1, 0, 1, 0, 1],
        [0, 0, 1, 0, 1, 1],
    ],
    "hamming_7_4": [
        [1, 0, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
    ],
}


def named_code(name: str, n: int | None = None) -> LinearCode:
    """Look up one of the built-in binary codes.

    ``name`` is ``spc_3_2``, ``reduced_hamming_6_3``, ``hamming_7_4``, or the
    uncoded ``trivial_n_n`` (pass ``n``), also accepted spelled out as e.g.
    ``trivial_3_3``.
    """
    match = re.fullmatch(r"trivial_(\d+)_(\d+)", name)
    if match and match.group(1) == match.group(2):
        n = int(match.group(1))
        name = "trivial_n_n"
    if name == "trivial_n_n":
        if n is None or n < 1:
            raise DomainError("trivial_n_n needs a blocklength n >= 1")
        return from_generator(2, np.eye(n, dtype=np.int64))
    if name not in NAMED_GENERATORS:
        raise DomainError(f"unknown code name {name!r}")
    return from_generator(2, NAMED_GENERATORS[name])


def code_from_dict(obj: dict) -> LinearCode:
    """Build a code from its JSON form ``{"q": 2, "generator": [[...], ...]}``."""
    try:
        q = int(obj["q"])
        g = obj["generator"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed code definition: {exc}") from exc
    return from_generator(q, g)


def load_code(ref: str) -> LinearCode:
    """Resolve ``ref`` as a JSON file path if it exists, otherwise as a code name."""
    path = Path(ref)
    if path.is_file():
        return code_from_dict(json.loads(path.read_text()))
    return named_code(ref)


def min_distance(code: BlockCode) -> int:
    """Minimum Hamming distance over all distinct codeword pairs."""
    if code.M > PAIRWISE_GUARD:
        raise DimensionError(f"M = {code.M} exceeds the pairwise guard {PAIRWISE_GUARD}")
    if code.M < 2:
        raise DomainError("minimum distance needs at least two codewords")
    cw = code.codewords
    best = code.n
    for start in range(0, code.M, 256):
        block = cw[start:start + 256]
        d = (block[:, None, :] != cw[None, :, :]).sum(axis=2)
        idx = np.arange(start, start + len(block))
        d[np.arange(len(block)), idx] = code.n + 1
        best = min(best, int(d.min()))
    return best


def output_words(alphabet: int, n: int) -> np.ndarray:
    """All length-``n`` words over ``[0, alphabet)`` in lexicographic order."""
    if alphabet**n > ENUM_GUARD:
        raise DimensionError(f"{alphabet}^{n} output words exceed the enumeration guard")
    return np.array(list(itertools.product(range(alphabet), repeat=n)), dtype=np.int64).reshape(-1, n)


def ml_decisions(codewords, probs) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive maximum-likelihood decoding table.

    Parameters
    ----------
    codewords : (M, n) int array
    probs : (in_size, out_size) array
        Per-symbol channel law ``P(y | x)``.

    Returns
    -------
    decisions : (out_size**n,) int array
        Decoded message for each output word, ties going to the smallest index.
    likelihoods : (out_size**n,) array
        ``P(y | x_{g(y)})`` for each output word.
    """
    cw = np.asarray(codewords, dtype=np.int64)
    probs = np.asarray(probs, dtype=float)
    ys = output_words(probs.shape[1], cw.shape[1])
    decisions = np.empty(len(ys), dtype=np.int64)
    chosen = np.empty(len(ys))
    chunk = max(1, 2**22 // max(cw.shape[0], 1))
    for start in range(0, len(ys), chunk):
        y = ys[start:start + chunk]
        lik = np.ones((cw.shape[0], len(y)))
        for j in range(cw.shape[1]):
            lik *= probs[cw[:, j][:, None], y[None, :, j]]
        best = lik.max(axis=0)
        winners = np.argmax(lik >= best * (1.0 - TIE_RTOL), axis=0)
        decisions[start:start + len(y)] = winners
        chosen[start:start + len(y)] = lik[winners, np.arange(len(y))]
    return decisions, chosen


def ml_success(codewords, probs) -> float:
    """Average ML success probability of a code over a memoryless channel."""
    _, chosen = ml_decisions(codewords, probs)
    return float(chosen.sum() / len(codewords))
