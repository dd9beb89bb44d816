"""Weighted complex projective 2-designs built from the two OGF families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import equiangularity, gramian, mutual_unbiasedness, tightness
from .config import DEFAULT_TOLERANCES, MAX_PROJECTOR_DIM, Tolerances
from .errors import DimTooLarge, PrereqFailed, ShapeMismatch
from .framegen import Frame, cyclic_part, flatness_defect, split_blocks


@dataclass(frozen=True, eq=False)
class WeightedFrame:
    frame: Frame
    weights: np.ndarray
    exact_weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.shape != (self.frame.size,):
            raise ShapeMismatch(f"{w.shape[0] if w.ndim else 0} weights for {self.frame.size} vectors")
        if np.any(w <= 0) or np.any(w > 1):
            raise ValueError("weights must lie in (0, 1]")
        if abs(math.fsum(w) - 1.0) > DEFAULT_TOLERANCES.weight:
            raise ValueError(f"weights sum to {math.fsum(w)!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def to_dict(self) -> dict:
        d = self.frame.to_dict()
        d["weights"] = [float(x) for x in self.weights]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> WeightedFrame:
        return cls(Frame.from_dict(d), np.array(d["weights"], dtype=np.float64))


def singer_weight_values(K: int) -> tuple[Fraction, Fraction]:
    """(alpha, beta) for K basis vectors plus a (K^2 - K + 1)-vector flat ETF."""
    return Fraction(K * K - K + 1, K * (K**3 + 1)), Fraction(K, K**3 + 1)


def picket_weight_values(K: int) -> tuple[Fraction, Fraction]:
    """(alpha, beta) for K basis vectors plus K - 1 mutually unbiased flat ETF blocks."""
    return Fraction(1, K * (K + 1)), Fraction(K, (K + 1) * (K * K - 1))


def _attach(f: Frame, alpha: Fraction, beta: Fraction) -> WeightedFrame:
    exact = tuple(alpha if lab[0] == "basis" else beta for lab in f.labels)
    return WeightedFrame(f, np.array([float(w) for w in exact]), exact)


def _split_shape(f: Frame, M: int) -> Frame:
    K = f.dim
    basis, cyclic = f.indices("basis"), f.indices("cyclic")
    if len(basis) != K or len(cyclic) != M or f.size != K + M:
        raise ShapeMismatch(
            f"expected {K} basis and {M} cyclic vectors, got {len(basis)} and {len(cyclic)} of {f.size}"
        )
    basis_vecs = f.vectors[basis]
    if not np.allclose(np.abs(basis_vecs), np.eye(K)[[f.labels[i][1] for i in basis]], atol=1e-12):
        raise PrereqFailed("basis-labelled vectors are not the canonical basis")
    return cyclic_part(f)


def _require_flat_etf(part: Frame, tol: Tolerances, what: str):
    _, dev = flatness_defect(part)
    if dev > tol.flat:
        raise PrereqFailed(f"{what} is not flat (deviation {dev:.3e})")
    if not tightness(part, tol).is_tight:
        raise PrereqFailed(f"{what} is not tight")
    if not equiangularity(part, tol)[0]:
        raise PrereqFailed(f"{what} is not equiangular")


def singer_weights(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> WeightedFrame:
    K = f.dim
    part = _split_shape(f, K * K - K + 1)
    _require_flat_etf(part, tol, "cyclic part")
    return _attach(f, *singer_weight_values(K))


def picket_weights(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> WeightedFrame:
    K = f.dim
    _split_shape(f, K * K - 1)
    blocks = split_blocks(f)
    if len(blocks) != K - 1 or any(b.size != K + 1 for b in blocks):
        raise ShapeMismatch(f"cyclic part does not split into {K - 1} blocks of {K + 1}")
    for l, block in enumerate(blocks):
        _require_flat_etf(block, tol, f"block {l}")
    for i, b1 in enumerate(blocks):
        for j in range(i + 1, len(blocks)):
            if not mutual_unbiasedness(b1, blocks[j], tol):
                raise PrereqFailed(f"blocks {i} and {j} are not mutually unbiased")
    return _attach(f, *picket_weight_values(K))


def infer_weights(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> WeightedFrame:
    """Attach whichever family's weights match the frame's shape."""
    K = f.dim
    n_cyc = len(f.indices("cyclic"))
    if n_cyc == K * K - K + 1:
        return singer_weights(f, tol)
    if n_cyc == K * K - 1:
        return picket_weights(f, tol)
    raise ShapeMismatch(f"no weight family for {f.size} vectors in C^{K}")


@dataclass(frozen=True)
class DesignCertificate:
    t: int
    target: float
    achieved: float
    defect: float
    tolerance: float
    verdict: bool

    def to_dict(self) -> dict:
        return dict(vars(self))


def design_sum(wf: WeightedFrame, t: int = 2, tol: Tolerances = DEFAULT_TOLERANCES) -> DesignCertificate:
    """Compare sum_{j,l} w_j w_l |<x_j, x_l>|^(2t), diagonal included, with 1/C(K+t-1, t)."""
    if t < 1:
        raise ValueError("design order must be positive")
    K = wf.frame.dim
    target = 1.0 / math.comb(K + t - 1, t)
    A = np.abs(gramian(wf.frame)) ** (2 * t)
    w = wf.weights
    # fixed-order row reduction keeps the certificate bit-stable
    achieved = math.fsum(float(w[j]) * math.fsum(A[j] * w) for j in range(len(w)))
    defect = abs(achieved - target)
    return DesignCertificate(t, target, achieved, defect, tol.design, defect <= tol.design)


def symmetric_projector(K: int, t: int) -> np.ndarray:
    """Projector onto the symmetric subspace of (C^K)^(tensor t), t in {1, 2}."""
    if t == 1:
        return np.eye(K)
    if t == 2:
        swap = np.zeros((K * K, K * K))
        for a in range(K):
            for b in range(K):
                swap[a * K + b, b * K + a] = 1.0
        return (np.eye(K * K) + swap) / 2.0
    raise ValueError("only t = 1 and t = 2 are supported")


def projector_sum_check(wf: WeightedFrame, t: int = 2, max_dim: int = MAX_PROJECTOR_DIM) -> float:
    """Frobenius distance of sum_j w_j (x_j x_j^*)^(tensor t) from Pi_sym / C(K+t-1, t)."""
    K = wf.frame.dim
    if t not in (1, 2):
        raise ValueError("only t = 1 and t = 2 are supported")
    if t == 2 and K > max_dim:
        raise DimTooLarge(f"K={K} exceeds the t=2 matrix cap {max_dim}")
    V = wf.frame.vectors
    if t == 2:
        V = np.einsum("ja,jb->jab", V, V).reshape(len(V), K * K)
    total = np.einsum("j,ja,jb->ab", wf.weights, V, V.conj())
    target = symmetric_projector(K, t) / math.comb(K + t - 1, t)
    return float(np.linalg.norm(total - target))
