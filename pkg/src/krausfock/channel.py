"""Quantum channels presented by finite Kraus families.

A channel acts on observables as ``A -> sum_k K_k† A K_k`` (Heisenberg
picture) and on density matrices as ``rho -> sum_k K_k rho K_k†``
(Schrödinger picture).  Unitality means ``sum_k K_k† K_k = 1``.

Operator words are products ``K[j1] @ K[j2] @ ... @ K[jm]`` indexed by
tuples of 0-based letters; the empty word is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import Tolerances, as_matrix, numerical_rank, operator_norm

__all__ = [
    "KrausSet",
    "ValidationReport",
    "validate",
    "apply_heisenberg",
    "apply_schrodinger",
    "kraus_word",
    "minimal_kraus",
    "choi_matrix",
]


@dataclass(eq=False)
class KrausSet:
    """An ordered family of ``n`` square matrices presenting one channel.

    ``ops`` is stored as an ``(n, d, d)`` stack and frozen against writes;
    word products are memoized by prefix on the instance.
    """

    ops: np.ndarray
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        ops = np.array(self.ops, dtype=complex)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise ValueError("Kraus operators must form an (n, d, d) stack of square matrices")
        if ops.shape[0] < 1 or ops.shape[1] < 1:
            raise ValueError("need at least one Kraus operator of dimension >= 1")
        if not np.all(np.isfinite(ops)):
            raise ValueError("Kraus operators must have finite entries")
        ops.flags.writeable = False
        self.ops = ops
        eye = np.eye(self.dim, dtype=complex)
        eye.flags.writeable = False
        self._words = {(): eye}

    @property
    def size(self) -> int:
        """Number of Kraus operators."""
        return self.ops.shape[0]

    @property
    def dim(self) -> int:
        """Dimension of the system Hilbert space."""
        return self.ops.shape[1]


@dataclass(frozen=True)
class ValidationReport:
    unitality_residual: float
    independence_rank: int
    valid: bool


def validate(kraus: KrausSet) -> ValidationReport:
    """Unitality residual ``|sum K†K - 1|`` and rank of the Gram matrix.

    The set is flagged valid iff the residual is within ``residual_tol``.
    """
    d = kraus.dim
    total = np.einsum("kba,kbc->ac", kraus.ops.conj(), kraus.ops)
    residual = operator_norm(total - np.eye(d))
    gram = np.einsum("jba,kba->jk", kraus.ops.conj(), kraus.ops)
    rank = numerical_rank(gram, kraus.tol)
    return ValidationReport(float(residual), rank, bool(residual <= kraus.tol.residual_tol))


def apply_heisenberg(kraus: KrausSet, a) -> np.ndarray:
    """Evaluate ``sum_k K_k† a K_k``."""
    a = as_matrix(a)
    if a.shape != (kraus.dim, kraus.dim):
        raise ValueError(f"observable must be {kraus.dim}x{kraus.dim}, got {a.shape}")
    return sum(k.conj().T @ a @ k for k in kraus.ops)


def apply_schrodinger(kraus: KrausSet, rho) -> np.ndarray:
    """Evaluate ``sum_k K_k rho K_k†``."""
    rho = as_matrix(rho)
    if rho.shape != (kraus.dim, kraus.dim):
        raise ValueError(f"state must be {kraus.dim}x{kraus.dim}, got {rho.shape}")
    return sum(k @ rho @ k.conj().T for k in kraus.ops)


def kraus_word(kraus: KrausSet, word: Sequence[int]) -> np.ndarray:
    """Left-to-right product ``K[j1] @ ... @ K[jm]`` for a letter tuple.

    The empty word gives the identity.  Results are cached by prefix and
    returned read-only; copy before mutating.
    """
    letters = tuple(int(j) for j in word)
    n = kraus.size
    for j in letters:
        if not 0 <= j < n:
            raise ValueError(f"letter {j} out of range for {n} Kraus operators")
    if n ** len(letters) > kraus.tol.word_count_cap:
        raise ValueError(
            f"word of length {len(letters)} exceeds the word budget "
            f"({n}**{len(letters)} > {kraus.tol.word_count_cap})"
        )
    cache = kraus._words
    if letters in cache:
        return cache[letters]
    prefix = letters
    while prefix not in cache:
        prefix = prefix[:-1]
    mat = cache[prefix]
    for pos in range(len(prefix), len(letters)):
        mat = mat @ kraus.ops[letters[pos]]
        mat.flags.writeable = False
        cache[letters[: pos + 1]] = mat
    return mat


def minimal_kraus(kraus: KrausSet) -> KrausSet:
    """Reduce to a linearly independent family presenting the same channel.

    The reduced operators are the singular-value-scaled leading right
    singular vectors of the ``n x d^2`` stacking matrix, so the channel
    action is preserved exactly and the result is deterministic up to the
    usual singular-subspace freedom.  Already independent sets are returned
    unchanged.
    """
    n, d = kraus.size, kraus.dim
    stack = kraus.ops.reshape(n, d * d)
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s[0] == 0.0:
        raise ValueError("all Kraus operators vanish")
    rank = int(np.count_nonzero(s > kraus.tol.rank_rel_tol * s[0]))
    if rank == n:
        return kraus
    reduced = (s[:rank, None] * vh[:rank]).reshape(rank, d, d)
    return KrausSet(reduced, tol=kraus.tol)


def choi_matrix(kraus: KrausSet) -> np.ndarray:
    """Block matrix ``sum_ab E_ab ⊗ Phi_*(E_ab)``; PSD iff the map is CP."""
    d = kraus.dim
    c = np.einsum("kia,kjb->aibj", kraus.ops, kraus.ops.conj())
    return c.reshape(d * d, d * d)
