"""Watching a channel turn classical over repeated applications.

Fixing a reference state, every observable A has a time-m shadow on the
level-m space: a matrix of normalized post-measurement pairings.  For a
projective measurement the shadow is diagonal from the first step — the
channel is classical immediately.  For commuting-but-not-projective
channels the shadows form fuzzy approximations whose defects shrink only
as m grows; for free random channels nothing commutes and the word algebra
keeps its full quantum character (normal ordering fails).
"""

import numpy as np

from krausfock import (
    build_subproduct,
    commuting_generic,
    convergence_report,
    correlations,
    dequantize,
    normal_ordering_residual,
    operator_norm,
    random_unital,
    state_spec,
    uniform_projective,
)

MAX_LEVEL = 6

print("=== projective measurement: classical after one step ===")
kraus = uniform_projective(3)
system = build_subproduct(kraus, MAX_LEVEL)
spec = state_spec(kraus, np.eye(3) / 3)
corr = correlations(kraus, system, spec, MAX_LEVEL)
a = np.diag([1.0, -0.5, 2.0])
b = np.diag([0.5, 1.5, -1.0])
report = convergence_report(kraus, system, corr, a, b, MAX_LEVEL)
print("multiplicativity defect per level:",
      " ".join(f"{x:.1e}" for x in report.vn_residual))
print("identity shadow defect:",
      f"{operator_norm(dequantize(kraus, system, corr, np.eye(3), MAX_LEVEL) - np.eye(3)):.1e}")
print("state recovered from the level pairing:",
      " ".join(f"{x:.1e}" for x in report.limit_state_gap))

print()
print("=== commuting generic: a fuzzy classical limit ===")
kraus = commuting_generic(2, 12, seed=3)
system = build_subproduct(kraus, MAX_LEVEL)
spec = state_spec(kraus, np.eye(12) / 12)
corr = correlations(kraus, system, spec, MAX_LEVEL)
a = kraus.ops[0].conj().T @ kraus.ops[0] - kraus.ops[1].conj().T @ kraus.ops[1]
b = kraus.ops[0].conj().T @ kraus.ops[1] + kraus.ops[1].conj().T @ kraus.ops[0]
report = convergence_report(kraus, system, corr, a, b, MAX_LEVEL)
print("level dimensions:", system.dims[1:])
print("correlation symmetry defect (first residual) per level:")
print("   ", " ".join(f"{corr.symmetry_residuals[m][0]:.2e}" for m in range(1, MAX_LEVEL + 1)))
print("norm gap |  |shadow| - |A|  | per level:")
print("   ", " ".join(f"{x:.3f}" for x in report.norm_gap))
print("scaled commutator m|[shadow_A, shadow_B]| per level (bounded):")
print("   ", " ".join(f"{x:.3f}" for x in report.scaled_commutator))
print("verdicts:", report.verdicts)
print("note: the multiplicativity defect plateaus at this scale; the")
print("asymptotic decay needs levels beyond a 12-point instance (the")
print("shadows only resolve the points once m is comparable with d).")

print()
print("=== free random family: no reordering, no classical limit ===")
kraus = random_unital(2, 16, seed=0)
system = build_subproduct(kraus, 3)
residual = normal_ordering_residual(kraus, system, (0,), (1,), 3)
print(f"normal-ordering residual of K_0 K_1† at degree <= 3: {residual:.3f}")
print("strictly positive: anti-normally ordered words carry information the")
print("forward trajectories cannot express.")
