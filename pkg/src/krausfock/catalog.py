"""Deterministic constructors for families of example channels.

Every constructor is a pure function of its parameters (including the
seed), produces exactly unital Kraus families, and is used by both the
test suite and the command line front end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .channel import KrausSet
from .linalg import Tolerances

__all__ = [
    "FAMILIES",
    "CatalogSpec",
    "identity_channel",
    "unitary_channel",
    "projective_measurement",
    "uniform_projective",
    "commuting_generic",
    "random_unital",
    "sequential_projective",
    "build_catalog",
]

FAMILIES = (
    "identity",
    "unitary",
    "projective",
    "commuting_generic",
    "random_unital",
    "sequential_projective",
)


@dataclass(frozen=True)
class CatalogSpec:
    """Family name plus the parameters that pin one instance down."""

    family: str
    n: int | None = None
    d: int | None = None
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")


def identity_channel(d: int, tol: Tolerances | None = None) -> KrausSet:
    """The trivial channel ``A -> A``."""
    return KrausSet(np.eye(d, dtype=complex)[None, :, :], tol=tol or Tolerances())


def unitary_channel(d: int, seed: int = 0, tol: Tolerances | None = None) -> KrausSet:
    """Conjugation by a Haar-random unitary."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return KrausSet(q[None, :, :], tol=tol or Tolerances())


def projective_measurement(d: int, ranks, tol: Tolerances | None = None) -> KrausSet:
    """Measurement channel from orthogonal projections onto coordinate blocks."""
    ranks = [int(r) for r in ranks]
    if any(r < 1 for r in ranks):
        raise ValueError("projection ranks must be positive")
    if sum(ranks) != d:
        raise ValueError(f"projection ranks {ranks} must sum to the dimension {d}")
    ops = np.zeros((len(ranks), d, d), dtype=complex)
    start = 0
    for k, r in enumerate(ranks):
        ops[k, start : start + r, start : start + r] = np.eye(r)
        start += r
    return KrausSet(ops, tol=tol or Tolerances())


def uniform_projective(n: int, tol: Tolerances | None = None) -> KrausSet:
    """``n`` rank-one orthogonal projections on ``C^n``."""
    return projective_measurement(n, [1] * n, tol=tol)


def commuting_generic(n: int, d: int, seed: int = 0, tol: Tolerances | None = None) -> KrausSet:
    """``n`` commuting diagonal operators with generic entries.

    Each diagonal position carries a seeded random point on the unit sphere
    of ``C^n``, so unitality holds by construction and the operators satisfy
    no relations beyond commutativity while the level dimensions fit in ``d``.
    """
    rng = np.random.default_rng(seed)
    points = rng.normal(size=(d, n)) + 1j * rng.normal(size=(d, n))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    ops = np.stack([np.diag(points[:, k]) for k in range(n)])
    return KrausSet(ops, tol=tol or Tolerances())


def random_unital(n: int, d: int, seed: int = 0, tol: Tolerances | None = None) -> KrausSet:
    """Generic family with no relations: normalized Gaussian matrices.

    Draws ``n`` seeded complex Gaussians ``G_k`` and right-multiplies by
    ``(sum_k G_k† G_k)^(-1/2)``, which enforces unitality exactly.  If the
    normalizer were singular the next seed is tried; the result is still a
    deterministic function of the requested seed.
    """
    attempt = seed
    while True:
        rng = np.random.default_rng(attempt)
        g = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
        total = np.einsum("kba,kbc->ac", g.conj(), g)
        w, v = np.linalg.eigh((total + total.conj().T) / 2.0)
        if w[0] > 1e-12 * w[-1]:
            break
        attempt += 1
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return KrausSet(g @ inv_sqrt, tol=tol or Tolerances())


def sequential_projective(
    d: int, angle: float, seed: int = 0, tol: Tolerances | None = None
) -> KrausSet:
    """Two sequential two-outcome measurements with rotated projections.

    Builds a seeded rank-``d//2`` real projection ``P`` and a copy ``Q``
    rotated by ``angle`` inside a plane mixing the range of ``P`` with its
    complement, then returns the four products ``Q_b P_a``.  Unitality holds
    because the two ``P_a`` and the two ``Q_b`` each sum to the identity.
    As the angle shrinks the family degenerates toward a commuting one.
    """
    if not 0.0 < angle < np.pi / 2:
        raise ValueError("angle must lie strictly between 0 and pi/2")
    if d < 2:
        raise ValueError("need dimension at least 2")
    rng = np.random.default_rng(seed)
    o, _ = np.linalg.qr(rng.normal(size=(d, d)))
    r = d // 2
    p = o[:, :r] @ o[:, :r].T
    p = (p + p.T) / 2.0
    u, v = o[:, 0], o[:, r]
    rot = (
        np.eye(d)
        + np.sin(angle) * (np.outer(v, u) - np.outer(u, v))
        + (np.cos(angle) - 1.0) * (np.outer(u, u) + np.outer(v, v))
    )
    q = rot @ p @ rot.T
    q = (q + q.T) / 2.0
    p_parts = [p, np.eye(d) - p]
    q_parts = [q, np.eye(d) - q]
    ops = np.stack([qb @ pa for pa in p_parts for qb in q_parts]).astype(complex)
    return KrausSet(ops, tol=tol or Tolerances())


def build_catalog(spec: CatalogSpec, tol: Tolerances | None = None) -> KrausSet:
    """Instantiate a catalog family from its spec."""
    family = spec.family
    if family == "identity":
        return identity_channel(_require(spec, "d"), tol=tol)
    if family == "unitary":
        return unitary_channel(_require(spec, "d"), seed=spec.seed, tol=tol)
    if family == "projective":
        d = _require(spec, "d")
        ranks = spec.params.get("ranks")
        if ranks is None:
            if spec.n not in (None, d):
                raise ValueError("projective family without ranks needs n == d")
            ranks = [1] * d
        return projective_measurement(d, ranks, tol=tol)
    if family == "commuting_generic":
        return commuting_generic(_require(spec, "n"), _require(spec, "d"), seed=spec.seed, tol=tol)
    if family == "random_unital":
        return random_unital(_require(spec, "n"), _require(spec, "d"), seed=spec.seed, tol=tol)
    if family == "sequential_projective":
        angle = float(spec.params.get("angle", np.pi / 4))
        return sequential_projective(_require(spec, "d"), angle, seed=spec.seed, tol=tol)
    raise ValueError(f"unknown family {family!r}")


def _require(spec: CatalogSpec, name: str) -> int:
    value = getattr(spec, name)
    if value is None:
        raise ValueError(f"family {spec.family!r} needs parameter {name!r}")
    return int(value)
