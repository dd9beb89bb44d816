"""Frame certification: Gramians, coherence bounds, tightness, modulation operators.

Inner products are linear in the first argument: <x, y> = sum_i x_i conj(y_i).
Squared magnitudes are compared against exact rationals with absolute tolerance
``Tolerances.magnitude``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimMismatch, TooFewVectors
from .framegen import Frame, GeneratingSequence, cyclic_frame, cyclic_part, root_of_unity


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.vdot(y, x))


def gramian(f: Frame) -> np.ndarray:
    """G[a, b] = <f_a, f_b>."""
    V = f.vectors
    return V @ V.conj().T


def frame_operator(f: Frame) -> np.ndarray:
    """S = sum_j f_j f_j^*."""
    V = f.vectors
    return V.T @ V.conj()


def _offdiag_sq(f: Frame) -> np.ndarray:
    G2 = np.abs(gramian(f)) ** 2
    return G2[~np.eye(f.size, dtype=bool)]


def coherence(f: Frame) -> float:
    """Largest |<f_j, f_l>| over j != l."""
    if f.size < 2:
        raise TooFewVectors("coherence needs at least two vectors")
    return float(np.sqrt(_offdiag_sq(f).max()))


def welch_bound(N: int, K: int) -> float:
    if not N >= K >= 1:
        raise ValueError(f"Welch bound needs N >= K >= 1, got N={N}, K={K}")
    if N == 1:
        return 0.0
    return math.sqrt((N - K) / (K * (N - 1)))


@dataclass(frozen=True)
class Tightness:
    residual: float
    bound: float
    is_tight: bool


def tightness(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> Tightness:
    """Frobenius distance of the frame operator from (N/K) I."""
    A = f.size / f.dim
    residual = float(np.linalg.norm(frame_operator(f) - A * np.eye(f.dim)))
    return Tightness(residual, A, residual <= tol.tight)


def equiangularity(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[bool, float | None]:
    if f.size < 2:
        raise TooFewVectors("equiangularity needs at least two vectors")
    sq = _offdiag_sq(f)
    if sq.max() - sq.min() > tol.magnitude:
        return False, None
    return True, float(math.sqrt(max(sq.mean(), 0.0)))


def mutual_unbiasedness(f1: Frame, f2: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Every cross inner product has magnitude 1/sqrt(K)."""
    if f1.dim != f2.dim:
        raise DimMismatch(f"dimensions differ: {f1.dim} vs {f2.dim}")
    cross = np.abs(f1.vectors @ f2.vectors.conj().T) ** 2
    return bool(np.all(np.abs(cross - 1.0 / f1.dim) <= tol.magnitude))


@dataclass(frozen=True)
class OrthoplexVerdict:
    applicable: bool
    coherence: float | None
    bound: float
    is_ogf: bool
    max_frame_size: int
    within_size_cap: bool


def orthoplex_check(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> OrthoplexVerdict:
    N, K = f.size, f.dim
    applicable = N >= K * K + 1
    mu = coherence(f) if N >= 2 else None
    is_ogf = applicable and mu is not None and abs(mu * mu - 1.0 / K) <= tol.magnitude
    cap = 2 * (K * K - 1)
    return OrthoplexVerdict(applicable, mu, 1.0 / math.sqrt(K), is_ogf, cap, N <= cap)


@dataclass(frozen=True)
class AnalysisReport:
    N: int
    K: int
    coherence: float | None
    welch_bound: float
    orthoplex_bound: float
    orthoplex_applicable: bool
    max_frame_size_bound: int
    within_size_cap: bool
    tightness_residual: float
    frame_bound: float
    is_tight: bool
    is_equiangular: bool
    equiangular_value: float | None
    is_ogf: bool
    norm_defect: float
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def analyze(f: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> AnalysisReport:
    N, K = f.size, f.dim
    ortho = orthoplex_check(f, tol)
    tight = tightness(f, tol)
    eq, value = equiangularity(f, tol) if N >= 2 else (False, None)
    return AnalysisReport(
        N=N,
        K=K,
        coherence=ortho.coherence,
        welch_bound=welch_bound(N, K) if N >= K else 0.0,
        orthoplex_bound=ortho.bound,
        orthoplex_applicable=ortho.applicable,
        max_frame_size_bound=ortho.max_frame_size,
        within_size_cap=ortho.within_size_cap,
        tightness_residual=tight.residual,
        frame_bound=tight.bound,
        is_tight=tight.is_tight,
        is_equiangular=eq,
        equiangular_value=value,
        is_ogf=ortho.is_ogf,
        norm_defect=f.norm_defect(),
        tolerances=asdict(tol),
    )


# -- modulation operators ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModulationOperator:
    xi: int
    matrix: np.ndarray


def _phase_table(M: int) -> np.ndarray:
    """W[xi, j] = exp(2 pi i xi j / M)."""
    return np.array([[root_of_unity(x * j, M) for j in range(M)] for x in range(M)], dtype=np.complex128)


def _modulation_stack(f: Frame) -> np.ndarray:
    V = f.vectors
    projectors = np.einsum("ja,jb->jab", V, V.conj())
    return np.einsum("xj,jab->xab", _phase_table(f.size), projectors)


def modulation_operators(f: Frame) -> list[ModulationOperator]:
    """X_xi = sum_j exp(2 pi i xi j / M) f_j f_j^* for the frame indexed by Z_M."""
    return [ModulationOperator(xi, X) for xi, X in enumerate(_modulation_stack(f))]


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """<A, B>_HS = trace(A B^*)."""
    return complex(np.sum(A * B.conj()))


def modulation_hs_gram(f: Frame) -> np.ndarray:
    """H[xi, eta] = <X_xi, X_eta>_HS."""
    X = _modulation_stack(f)
    return np.einsum("xab,yab->xy", X, X.conj())


def modulation_supports(seq: GeneratingSequence) -> list[frozenset[tuple[int, int]]]:
    """Exact support of each X_xi of a cyclic frame: pairs (a, b) with n_b - n_a = xi."""
    M, n = seq.modulus, seq.exponents
    supports: list[set] = [set() for _ in range(M)]
    for a, na in enumerate(n):
        for b, nb in enumerate(n):
            supports[(nb - na) % M].add((a, b))
    return [frozenset(s) for s in supports]


def cyclic_modulation_defect(seq: GeneratingSequence, f: Frame | None = None) -> float:
    """Largest deviation of the numeric X_xi entries from M/K on the exact support, 0 off it.

    ``f`` defaults to the cyclic frame generated by ``seq``.
    """
    f = cyclic_frame(seq) if f is None else cyclic_part(f)
    M, K = seq.modulus, len(seq.exponents)
    X = _modulation_stack(f)
    expected = np.zeros_like(X)
    for xi, support in enumerate(modulation_supports(seq)):
        for a, b in support:
            expected[xi, a, b] = M / K
    return float(np.abs(X - expected).max())


def _looks_cyclic(f: Frame) -> bool:
    return f.size > 0 and all(lab and lab[0] == "cyclic" for lab in f.labels)


def fourier_lemma_defect(f: Frame) -> float:
    """max_{a,b} |M^2 |<f_a,f_b>|^2 - sum_{xi,eta} w^(b eta - a xi) <X_xi, X_eta>_HS|."""
    M = f.size
    W = _phase_table(M)
    rhs = W.conj() @ modulation_hs_gram(f) @ W
    lhs = M * M * np.abs(gramian(f)) ** 2
    return float(np.abs(lhs - rhs).max())


def fourier_corollary_defect(f: Frame) -> float:
    """max_a |M^2 |<h_a,h_0>|^2 - sum_xi w^(a xi) ||X_xi||_HS^2| (cyclic frames)."""
    M = f.size
    norms = np.real(np.diag(modulation_hs_gram(f)))
    rhs = _phase_table(M) @ norms
    lhs = M * M * np.abs(gramian(f)[:, 0]) ** 2
    return float(np.abs(lhs - rhs).max())


def fourier_identity_check(f: Frame, cyclic: bool | None = None) -> float:
    """Worst defect of the Fourier identities linking inner products and X_xi.

    The double-sum form holds for any frame indexed by Z_M; for cyclic frames the
    single-sum form is checked as well. Frames with cyclic labels are reordered
    by their index first.
    """
    if cyclic is None:
        cyclic = _looks_cyclic(f)
    if cyclic:
        f = cyclic_part(f)
    defect = fourier_lemma_defect(f)
    if cyclic:
        defect = max(defect, fourier_corollary_defect(f))
    return defect


def hs_orthogonality_defect(f: Frame) -> float:
    """Largest |<X_xi, X_zeta>_HS| with xi != zeta."""
    H = modulation_hs_gram(f)
    off = ~np.eye(f.size, dtype=bool)
    return float(np.abs(H[off]).max()) if f.size > 1 else 0.0


@dataclass(frozen=True)
class CyclicIdentityDefects:
    """Per-sequence worst defects for a batch of cyclic frames sharing (M, K)."""

    support: np.ndarray  # X_xi entries vs. the exact M/K pattern
    orthogonality: np.ndarray  # off-diagonal HS inner products
    lemma: np.ndarray  # double-sum form
    corollary: np.ndarray  # single-sum form


def _abs2(A: np.ndarray) -> np.ndarray:
    return A.real * A.real + A.imag * A.imag


def _absmax(A: np.ndarray) -> np.ndarray:
    """Row-wise max modulus of a 2-D complex array."""
    return np.sqrt(_abs2(A).max(axis=1))


def cyclic_identity_defects(M: int, exponents, chunk: int = 32) -> CyclicIdentityDefects:
    """Vectorised modulation/Fourier checks for many generating sequences in Z_M.

    Small chunks keep the per-batch working set in cache, which is faster here
    than one large batch.

    ``exponents`` is a (B, K) integer array of distinct exponents per row.
    """
    E = np.asarray(exponents, dtype=np.int64)
    if E.ndim != 2 or E.shape[1] == 0:
        raise ValueError("exponents must be a non-empty (B, K) array")
    B, K = E.shape
    W = _phase_table(M)
    out = {k: np.empty(B) for k in ("support", "orthogonality", "lemma", "corollary")}
    off = ~np.eye(M, dtype=bool)
    for s in range(0, B, chunk):
        e = E[s:s + chunk]
        b = len(e)
        V = W[:, e % M].transpose(1, 0, 2) / math.sqrt(K)  # (b, j, l)
        P = (V[:, :, :, None] * V.conj()[:, :, None, :]).reshape(b, M, K * K)
        X = W @ P  # (b, xi, K*K)
        H = X @ X.conj().transpose(0, 2, 1)
        norms = H.real.reshape(b, M * M)[:, :: M + 1].copy()
        # subtract the exact pattern: M/K where n_b - n_a = xi
        diff = ((e[:, None, :] - e[:, :, None]) % M).reshape(b, K * K)
        rows = np.repeat(np.arange(b), K * K)
        cols = np.tile(np.arange(K * K), b)
        X[rows, diff.ravel(), cols] -= M / K
        out["support"][s:s + chunk] = _absmax(X.reshape(b, -1))
        out["orthogonality"][s:s + chunk] = _absmax(H[:, off]) if M > 1 else 0.0
        G2 = _abs2(V @ V.conj().transpose(0, 2, 1))
        lemma = W.conj()[None] @ H @ W[None]
        out["lemma"][s:s + chunk] = _absmax((M * M * G2 - lemma).reshape(b, -1))
        cor = norms @ W.T
        out["corollary"][s:s + chunk] = _absmax(M * M * G2[:, :, 0] - cor)
    return CyclicIdentityDefects(**out)


@dataclass(frozen=True)
class PicketCertificate:
    ok: bool
    first_violation: int | None
    # (a, |<h_0, h_a>|^2, expected squared value)
    rows: tuple[tuple[int, float, float], ...]

    def __bool__(self):
        return self.ok


def certify_picket_values(f: Frame, K: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> PicketCertificate:
    """|<h_0, h_a>| is 1 at a = 0, 1/K on nonzero multiples of K - 1, 1/sqrt(K) elsewhere."""
    cyc = cyclic_part(f) if f.indices("cyclic") else f
    K = K or cyc.dim
    M = K * K - 1
    if cyc.size != M:
        return PicketCertificate(False, None, ())
    h = cyc.vectors
    rows, first = [], None
    for a in range(M):
        value = abs(inner(h[0], h[a])) ** 2
        if a == 0:
            expected = 1.0
        elif a % (K - 1) == 0:
            expected = 1.0 / (K * K)
        else:
            expected = 1.0 / K
        rows.append((a, value, expected))
        if first is None and abs(value - expected) > tol.magnitude:
            first = a
    return PicketCertificate(first is None, first, tuple(rows))
