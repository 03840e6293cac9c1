"""Two-copy collision measurement.

Symmetric/antisymmetric projectors on two copies, the four collision
probabilities, the purity identities they encode, and the entropic
entanglement witness. Subscript order is (A, B): p_ca means the symmetric
(coalescence) outcome on the two A copies and the antisymmetric
(anticoalescence) outcome on the two B copies.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from renyi2.qstate import DensityOperator

PROJECTOR_TOL = 1e-12
PROB_SUM_TOL = 1e-10
# slack for collision probabilities that land a hair outside [0, 1]
PROB_EDGE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectorPair:
    """Projectors onto the symmetric/antisymmetric subspaces of dim x dim."""

    dim: int
    p_sym: np.ndarray
    p_anti: np.ndarray

    def __post_init__(self):
        d2 = self.dim * self.dim
        for name, p in (("p_sym", self.p_sym), ("p_anti", self.p_anti)):
            if p.shape != (d2, d2):
                raise ValueError(f"{name} has shape {p.shape}, expected ({d2}, {d2})")
            defect = float(np.max(np.abs(p @ p - p)))
            if defect > PROJECTOR_TOL:
                raise ValueError(f"{name} not idempotent, defect {defect:.3e}")
        if float(np.max(np.abs(self.p_sym @ self.p_anti))) > PROJECTOR_TOL:
            raise ValueError("projectors are not orthogonal")
        if float(np.max(np.abs(self.p_sym + self.p_anti - np.eye(d2)))) > PROJECTOR_TOL:
            raise ValueError("projectors do not resolve the identity")
        # the trace of a projector is its rank
        d = self.dim
        for name, p, want in (
            ("p_sym", self.p_sym, d * (d + 1) // 2),
            ("p_anti", self.p_anti, d * (d - 1) // 2),
        ):
            if abs(float(np.trace(p).real) - want) > 1e-9:
                raise ValueError(f"{name} has rank {np.trace(p).real:.6f}, expected {want}")
        for p in (self.p_sym, self.p_anti):
            p.setflags(write=False)


def _swap(dim: int) -> np.ndarray:
    """SWAP on dim x dim: |i>|j> -> |j>|i>."""
    s = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            s[i * dim + j, j * dim + i] = 1.0
    return s


@lru_cache(maxsize=None)
def projectors(dim: int) -> ProjectorPair:
    """P_S = (I + SWAP)/2 and P_A = (I - SWAP)/2 on a dim x dim double copy."""
    if dim < 2:
        raise ValueError(f"single-copy dimension must be at least 2, got {dim}")
    s = _swap(dim)
    eye = np.eye(dim * dim)
    return ProjectorPair(dim, (eye + s) / 2.0, (eye - s) / 2.0)


@dataclass(frozen=True)
class CollisionProbabilities:
    """The quadruple (p_cc, p_ca, p_ac, p_aa); first subscript is side A."""

    p_cc: float
    p_ca: float
    p_ac: float
    p_aa: float

    def __post_init__(self):
        vals = (self.p_cc, self.p_ca, self.p_ac, self.p_aa)
        for name, v in zip(("p_cc", "p_ca", "p_ac", "p_aa"), vals):
            if not -PROB_EDGE_TOL <= v <= 1.0 + PROB_EDGE_TOL:
                raise ValueError(f"{name} = {v} outside [0, 1]")
        total = sum(vals)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_cc, self.p_ca, self.p_ac, self.p_aa)


@lru_cache(maxsize=None)
def _collision_operators(dim_a: int, dim_b: int):
    """The four (P_X on A copies) kron (P_Y on B copies) operators, X,Y in {S,A}."""
    pa = projectors(dim_a)
    pb = projectors(dim_b)
    return tuple(
        np.kron(px, py)
        for px in (pa.p_sym, pa.p_anti)
        for py in (pb.p_sym, pb.p_anti)
    )


def collision_probabilities(rho: DensityOperator) -> CollisionProbabilities:
    """The four traces Tr[(P_X kron P_Y)(rho kron rho)], X,Y in {S,A}.

    The double copy lives on (A1 B1 A2 B2); the copies of each side are made
    adjacent internally before the projectors are applied.
    """
    if rho.dim_a < 2 or rho.dim_b < 2:
        raise ValueError(
            f"dimension mismatch: need a bipartite state with both local "
            f"dimensions >= 2, got {rho.dim_a} x {rho.dim_b}"
        )
    da, db = rho.dim_a, rho.dim_b
    x = np.kron(rho.matrix, rho.matrix)
    # reorder (A1 B1 A2 B2) -> (A1 A2 B1 B2) on both row and column indices
    x = (
        x.reshape(da, db, da, db, da, db, da, db)
        .transpose(0, 2, 1, 3, 4, 6, 5, 7)
        .reshape(x.shape)
    )
    ss, sa, as_, aa = _collision_operators(da, db)
    trace = lambda op: float(np.einsum("ij,ji->", op, x).real)
    return CollisionProbabilities(trace(ss), trace(sa), trace(as_), trace(aa))


def purities_from_probabilities(
    p: CollisionProbabilities,
) -> tuple[float, float, float]:
    """Reconstruct (tr rho^2, tr rho_A^2, tr rho_B^2) from collision probabilities.

    tr rho^2   = p_cc - p_ca - p_ac + p_aa
    tr rho_A^2 = p_cc + p_ca - p_ac - p_aa
    tr rho_B^2 = p_cc - p_ca + p_ac - p_aa

    Results outside [0, 1] indicate inconsistent inputs; they are clamped and
    reported through a RuntimeWarning, never silently.
    """
    raw = (
        ("tr_rho2", p.p_cc - p.p_ca - p.p_ac + p.p_aa),
        ("tr_rhoA2", p.p_cc + p.p_ca - p.p_ac - p.p_aa),
        ("tr_rhoB2", p.p_cc - p.p_ca + p.p_ac - p.p_aa),
    )
    out = []
    for name, v in raw:
        if v < -1e-12 or v > 1.0 + 1e-12:
            warnings.warn(
                f"reconstructed {name} = {v:.6g} lies outside [0, 1]; clamped "
                f"(the input probabilities are not consistent with any state)",
                RuntimeWarning,
                stacklevel=2,
            )
        out.append(min(1.0, max(0.0, v)))
    return tuple(out)


@dataclass(frozen=True)
class WitnessVerdict:
    """Outcome of the entropic witness on one set of collision probabilities.

    margin_a = p_aa - p_ca and margin_b = p_aa - p_ac; a positive margin
    violates the corresponding separability inequality. Significances are in
    standard deviations, present only when errors were supplied.
    """

    violated_a: bool
    violated_b: bool
    margin_a: float
    margin_b: float
    significance_a: float | None
    significance_b: float | None
    entangled: bool

    @property
    def significance(self) -> float | None:
        """Largest per-side significance, if errors were supplied."""
        sides = [s for s in (self.significance_a, self.significance_b) if s is not None]
        return max(sides) if sides else None


def _margin_significance(margin: float, s1: float, s2: float) -> float:
    # Gaussian propagation for a difference of two proportions
    denom = np.hypot(s1, s2)
    if denom == 0.0:
        return 0.0 if margin == 0.0 else np.copysign(np.inf, margin)
    return float(margin / denom)


def entropic_witness(
    p: CollisionProbabilities,
    sigma: tuple[float, float, float, float] | None = None,
) -> WitnessVerdict:
    """Separability test p_ca >= p_aa and p_ac >= p_aa; violation flags entanglement.

    sigma, when given, holds standard errors in the same order as the
    probabilities (cc, ca, ac, aa).
    """
    if sigma is not None:
        s_cc, s_ca, s_ac, s_aa = (float(s) for s in sigma)
        for s in (s_cc, s_ca, s_ac, s_aa):
            if s < 0.0:
                raise ValueError(f"standard errors must be non-negative, got {s}")
    margin_a = p.p_aa - p.p_ca
    margin_b = p.p_aa - p.p_ac
    sig_a = sig_b = None
    if sigma is not None:
        sig_a = _margin_significance(margin_a, s_aa, s_ca)
        sig_b = _margin_significance(margin_b, s_aa, s_ac)
    violated_a = margin_a > 0.0
    violated_b = margin_b > 0.0
    return WitnessVerdict(
        violated_a=violated_a,
        violated_b=violated_b,
        margin_a=float(margin_a),
        margin_b=float(margin_b),
        significance_a=sig_a,
        significance_b=sig_b,
        entangled=violated_a or violated_b,
    )
