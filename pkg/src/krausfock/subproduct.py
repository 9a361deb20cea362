"""Level spaces spanned by operator words, with shifts and inductive maps.

For a Kraus family ``K_1..K_n`` the level-``m`` space is the span of the
adjoints of all length-``m`` operator words.  It is embedded in the
``m``-fold tensor power of C^n by matching the basis vector
``e_j1 ⊗ ... ⊗ e_jm`` with ``(K_j1 @ ... @ K_jm)†``: a coefficient vector
lies in the kernel of that correspondence exactly when the matching
combination of adjoint words vanishes, and since word concatenation
multiplies the underlying operators, both one-sided extensions of a kernel
vector stay in the kernel.  The orthocomplements therefore satisfy the
nesting law ``level(m+l) ⊆ level(m) ⊗ level(l)`` exactly.

Each level is stored as an isometry ``B_m`` of shape ``(n^m, d_m)`` whose
columns are an orthonormal basis of the level subspace; the level
projection is ``p_m = B_m @ B_m†``.  When a level has full dimension
``n^m`` the basis is the exact identity matrix, so free families produce
exactly zero residuals.

Levels are enumerated while ``n^m`` stays within ``tol.word_count_cap``.
Once the operator span of the words stops growing (projective-type
families) the dimension ladder continues without further enumeration;
bases beyond the last materialized level are not available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import KrausSet, validate
from .linalg import (
    Tolerances,
    as_matrix,
    kron_power_apply,
    operator_norm,
    orthonormal_range,
)

__all__ = [
    "SubproductSystem",
    "TruncatedFock",
    "build_subproduct",
    "level_projection",
    "subproduct_residual",
    "shift_left",
    "shift_right",
    "inductive_map",
    "multiplicativity_residual",
    "presentation_residual",
    "truncated_fock",
]


@dataclass(eq=False)
class SubproductSystem:
    """Per-level dimensions and orthonormal level bases of a Kraus family.

    ``dims[m]`` is valid for every ``m <= max_level``; ``bases[m]`` and the
    cached word stacks exist only for ``m <= built_level``.  ``stable_from``
    records the first level at which the operator span of the words stopped
    growing, if that was detected.
    """

    n: int
    dim: int
    dims: list[int]
    bases: list[np.ndarray]
    word_stacks: list[np.ndarray] = field(repr=False)
    stable_from: int | None
    tol: Tolerances

    @property
    def max_level(self) -> int:
        return len(self.dims) - 1

    @property
    def built_level(self) -> int:
        return len(self.bases) - 1

    def dimension(self, m: int) -> int:
        if not 0 <= m <= self.max_level:
            raise ValueError(f"level {m} out of range (max level {self.max_level})")
        return self.dims[m]

    def basis(self, m: int) -> np.ndarray:
        """Isometry ``B_m`` with the level subspace as its column range."""
        if not 0 <= m <= self.max_level:
            raise ValueError(f"level {m} out of range (max level {self.max_level})")
        if m > self.built_level:
            raise ValueError(
                f"level {m} was not materialized (word budget reached at level "
                f"{self.built_level}); only dimensions are available beyond that"
            )
        return self.bases[m]

    def words(self, m: int) -> np.ndarray:
        """Stack of all length-``m`` word products, shape ``(n^m, dim, dim)``."""
        if not 0 <= m <= self.built_level:
            raise ValueError(f"words at level {m} not available (built to {self.built_level})")
        return self.word_stacks[m]


def build_subproduct(kraus: KrausSet, max_level: int) -> SubproductSystem:
    """Construct level bases for ``m = 0..max_level`` from a minimal family.

    Requires a valid (unital) and minimal Kraus set.  Levels are built
    incrementally, each word stack extending the previous one by one letter.
    If ``n^m`` would exceed the word budget before ``max_level`` and the word
    span has stabilized, remaining dimensions are filled in at the stabilized
    value; otherwise the budget violation is an error.
    """
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")
    report = validate(kraus)
    if not report.valid:
        raise ValueError(
            f"Kraus set is not unital (residual {report.unitality_residual:.3e})"
        )
    if report.independence_rank != kraus.size:
        raise ValueError(
            "Kraus operators are linearly dependent; reduce with minimal_kraus first"
        )
    n, d = kraus.size, kraus.dim
    tol = kraus.tol

    dims = [1]
    bases = [np.ones((1, 1), dtype=complex)]
    stacks = [np.eye(d, dtype=complex).reshape(1, d, d)]
    span_basis = orthonormal_range(np.eye(d, dtype=complex).reshape(d * d, 1), tol)
    stable_from = None

    level = 0
    while level < max_level and n ** (level + 1) <= tol.word_count_cap:
        level += 1
        count = n**level
        words = np.einsum("wab,kbc->wkac", stacks[-1], kraus.ops).reshape(count, d, d)
        stacks.append(words)
        # rows of adj_vecs are vec((K_word)†); the level space is the span of
        # the conjugated columns, i.e. the orthocomplement of the kernel of
        # the adjoint-word correspondence.
        adj_vecs = words.conj().transpose(0, 2, 1).reshape(count, d * d)
        basis = orthonormal_range(adj_vecs.conj(), tol)
        if basis.shape[1] == count:
            basis = np.eye(count, dtype=complex)
        bases.append(basis)
        dims.append(basis.shape[1])
        # operator span of the plain words, used for stabilization detection
        new_span = orthonormal_range(words.reshape(count, d * d).T, tol)
        if stable_from is None and new_span.shape[1] == span_basis.shape[1]:
            outside = new_span - span_basis @ (span_basis.conj().T @ new_span)
            if operator_norm(outside) <= tol.residual_tol:
                stable_from = level
        span_basis = new_span

    if level < max_level:
        if stable_from is None:
            raise ValueError(
                f"word budget exceeded: level {level + 1} needs {n ** (level + 1)} words "
                f"(cap {tol.word_count_cap}) and the word span has not stabilized"
            )
        dims.extend([dims[-1]] * (max_level - level))

    return SubproductSystem(
        n=n,
        dim=d,
        dims=dims,
        bases=bases,
        word_stacks=stacks,
        stable_from=stable_from,
        tol=tol,
    )


def level_projection(system: SubproductSystem, m: int) -> np.ndarray:
    """Projection ``p_m = B_m @ B_m†`` on the full ``n^m`` tensor level."""
    b = system.basis(m)
    return b @ b.conj().T


def subproduct_residual(system: SubproductSystem, m: int, l: int) -> float:
    """Operator norm of ``p_{m+l} (1 - p_m ⊗ p_l)``.

    Evaluated as ``|B_{m+l} - (p_m ⊗ p_l) B_{m+l}|`` without forming any
    ``n^{m+l}``-square matrix.
    """
    b_top = system.basis(m + l)
    bm = system.basis(m)
    bl = system.basis(l)
    nm, nl = system.n**m, system.n**l
    cols = b_top.shape[1]
    top = b_top.reshape(nm, nl, cols)
    inner = np.einsum("au,avk->uvk", bm.conj(), top)
    inner = np.einsum("uvk,vw->uwk", inner, bl.conj())
    recon = np.einsum("au,uwk,bw->abk", bm, inner, bl).reshape(nm * nl, cols)
    return operator_norm(b_top - recon)


def shift_left(system: SubproductSystem, k: int, m: int) -> np.ndarray:
    """Block of the left shift: prepend letter ``k``, level ``m -> m+1``.

    Returns the ``(d_{m+1}, d_m)`` matrix of ``psi -> p_{m+1}(e_k ⊗ psi)``
    in the level bases; always a contraction.
    """
    if not 0 <= k < system.n:
        raise ValueError(f"letter {k} out of range")
    b_next = system.basis(m + 1)
    block = b_next[k * system.n**m : (k + 1) * system.n**m, :]
    return block.conj().T @ system.basis(m)


def shift_right(system: SubproductSystem, k: int, m: int) -> np.ndarray:
    """Block of the right shift: append letter ``k``, level ``m -> m+1``."""
    if not 0 <= k < system.n:
        raise ValueError(f"letter {k} out of range")
    b_next = system.basis(m + 1)
    block = b_next[k :: system.n, :]
    return block.conj().T @ system.basis(m)


def inductive_map(system: SubproductSystem, a, m: int, l: int) -> np.ndarray:
    """Sum of right-shift conjugations carrying level ``m`` to level ``l``.

    Unital and positive; iterating the one-step sums makes the composition
    rule ``iota(r,l) ∘ iota(m,r) = iota(m,l)`` hold by construction.
    """
    x = as_matrix(a)
    if x.shape != (system.dimension(m),) * 2:
        raise ValueError(
            f"operator must be {system.dimension(m)}-square at level {m}, got {x.shape}"
        )
    if not m <= l <= system.max_level:
        raise ValueError(f"need m <= l <= max_level, got m={m}, l={l}")
    for level in range(m, l):
        shifts = [shift_right(system, k, level) for k in range(system.n)]
        x = sum(r @ x @ r.conj().T for r in shifts)
    return x


def multiplicativity_residual(system: SubproductSystem, a, b, m: int, l: int) -> float:
    """Norm of ``iota(ab) - iota(a) iota(b)`` between levels ``m`` and ``l``."""
    a = as_matrix(a)
    b = as_matrix(b)
    joint = inductive_map(system, a @ b, m, l)
    separate = inductive_map(system, a, m, l) @ inductive_map(system, b, m, l)
    return operator_norm(joint - separate)


def presentation_residual(
    original: SubproductSystem, mixed: SubproductSystem, u, m: int
) -> float:
    """Distance between level projections of two presentations of one channel.

    ``mixed`` must be built from the operators ``K'_j = sum_i u[i, j] K_i``
    for a unitary ``u``.  The mixing rotates the embedded level subspace by
    the ``m``-fold power of ``u^T``, so the aligned projections agree; the
    returned operator norm ``|p'_m - (u^T)^{⊗m} p_m (u^T†)^{⊗m}|`` is zero
    up to rounding whenever both systems present the same channel.
    """
    u = as_matrix(u)
    b_mixed = mixed.basis(m)
    b_aligned = kron_power_apply(u.T, m, original.basis(m))
    # |P - Q| = max of the two one-sided sines of the largest principal
    # angle; evaluated residual-first to avoid cancellation near zero.
    left = b_aligned - b_mixed @ (b_mixed.conj().T @ b_aligned)
    right = b_mixed - b_aligned @ (b_aligned.conj().T @ b_mixed)
    return max(operator_norm(left), operator_norm(right))


@dataclass(eq=False)
class TruncatedFock:
    """Direct sum of the levels ``0..top`` with per-level shift blocks.

    ``left_blocks[m][k]`` maps level ``m`` to level ``m+1`` by prepending
    letter ``k``; ``right_blocks`` appends instead.  Full matrices on the
    truncated sum place each block below the diagonal.
    """

    dims: tuple[int, ...]
    left_blocks: list[list[np.ndarray]]
    right_blocks: list[list[np.ndarray]]

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.dims:
            out.append(out[-1] + d)
        return tuple(out)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def _assemble(self, blocks: list[np.ndarray]) -> np.ndarray:
        off = self.offsets
        full = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for m, block in enumerate(blocks):
            full[off[m + 1] : off[m + 2], off[m] : off[m + 1]] = block
        return full

    def left_shift_matrix(self, k: int) -> np.ndarray:
        return self._assemble([level[k] for level in self.left_blocks])

    def right_shift_matrix(self, k: int) -> np.ndarray:
        return self._assemble([level[k] for level in self.right_blocks])


def truncated_fock(system: SubproductSystem, top: int | None = None) -> TruncatedFock:
    """Assemble the truncated direct sum of levels ``0..top`` with shifts."""
    top = system.built_level if top is None else top
    if top > system.built_level:
        raise ValueError(f"level {top} not materialized (built to {system.built_level})")
    left = [[shift_left(system, k, m) for k in range(system.n)] for m in range(top)]
    right = [[shift_right(system, k, m) for k in range(system.n)] for m in range(top)]
    return TruncatedFock(dims=tuple(system.dims[: top + 1]), left_blocks=left, right_blocks=right)
