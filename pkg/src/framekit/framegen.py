"""Frame constructors: cyclic frames, basis adjunction, chirps, picket blocks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .designsets import Relative, DesignSet, relative_set, singer_set, verify_design
from .errors import DuplicateExponents, NotFlat, NotPicketFence, NotPrime, TooManyRemoved
from .gf import is_prime

# Labels are tuples: ("basis", i), ("cyclic", j), ("chirp", k, i),
# ("block", l, j) or ("custom", ...).
Label = tuple


@dataclass(frozen=True, eq=False)
class Frame:
    """N unit vectors in C^K, stored as rows of ``vectors``."""

    vectors: np.ndarray
    labels: tuple[Label, ...]

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise ValueError("frame vectors must form an (N, K) array")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        labels = tuple(tuple(lab) for lab in self.labels)
        if len(labels) != v.shape[0]:
            raise ValueError("one label per vector required")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def __len__(self):
        return self.size

    def norm_defect(self) -> float:
        if self.size == 0:
            return 0.0
        return float(np.max(np.abs(np.linalg.norm(self.vectors, axis=1) - 1.0)))

    def is_unit_norm(self, tol: float = DEFAULT_TOLERANCES.norm) -> bool:
        return self.norm_defect() <= tol

    def indices(self, kind: str) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab and lab[0] == kind]

    def subframe(self, idx) -> Frame:
        idx = list(idx)
        return Frame(self.vectors[idx].reshape(len(idx), self.dim), tuple(self.labels[i] for i in idx))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in self.vectors],
            "labels": [list(lab) for lab in self.labels],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Frame:
        K = int(d["dim"])
        rows = [[complex(re, im) for re, im in row] for row in d["vectors"]]
        vectors = np.array(rows, dtype=np.complex128).reshape(len(rows), K)
        labels = d.get("labels") or [("custom", i) for i in range(len(rows))]
        return cls(vectors, tuple(tuple(lab) for lab in labels))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"{part}_{i + 1}" for i in range(self.dim) for part in ("re", "im")])
        for row in self.vectors:
            writer.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
        return buf.getvalue()


@dataclass(frozen=True)
class GeneratingSequence:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) % self.modulus for e in self.exponents)
        if len(set(exps)) != len(exps):
            raise DuplicateExponents(f"exponents {self.exponents} repeat modulo {self.modulus}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_design(cls, s: DesignSet) -> GeneratingSequence:
        return cls(s.modulus, s.elements)


def root_of_unity(num: int, den: int) -> complex:
    """exp(2 pi i num / den) with the angle reduced exactly first."""
    r = num % den
    if 2 * r == den:
        return -1.0 + 0j
    if 4 * r == den:
        return 1j
    if 4 * r == 3 * den:
        return -1j
    if r == 0:
        return 1.0 + 0j
    theta = 2.0 * math.pi * r / den
    return complex(math.cos(theta), math.sin(theta))


def cyclic_frame(seq: GeneratingSequence) -> Frame:
    """M flat vectors h_j with coordinates exp(2 pi i j n_l / M) / sqrt(K)."""
    M, exps = seq.modulus, seq.exponents
    K = len(exps)
    if K > M:
        raise ValueError("more exponents than residues")
    scale = 1.0 / math.sqrt(K)
    vectors = np.array(
        [[root_of_unity(j * n, M) * scale for n in exps] for j in range(M)], dtype=np.complex128
    ).reshape(M, K)
    return Frame(vectors, tuple(("cyclic", j) for j in range(M)))


def flatness_defect(f: Frame) -> tuple[int, float]:
    """Index and size of the worst |coordinate| - 1/sqrt(K) deviation."""
    if f.size == 0:
        return -1, 0.0
    dev = np.abs(np.abs(f.vectors) - 1.0 / math.sqrt(f.dim)).max(axis=1)
    idx = int(np.argmax(dev))
    return idx, float(dev[idx])


def canonical_basis(K: int) -> Frame:
    return Frame(np.eye(K, dtype=np.complex128), tuple(("basis", i) for i in range(K)))


def adjoin_basis(flat: Frame, tol: Tolerances = DEFAULT_TOLERANCES) -> Frame:
    """Canonical basis of C^K followed by the flat vectors of ``flat``."""
    idx, dev = flatness_defect(flat)
    if dev > tol.flat:
        raise NotFlat(idx, dev)
    basis = canonical_basis(flat.dim)
    return Frame(np.vstack([basis.vectors, flat.vectors]), basis.labels + flat.labels)


def chirp_mub(K: int) -> Frame:
    """Canonical basis plus K discrete-chirp bases, K(K + 1) vectors in C^K.

    For odd primes the l-th coordinate of e_i^(k) is w^(-(k-1) l^2 + i l) / sqrt(K)
    with w = exp(2 pi i / K). At K = 2 that rule repeats a basis, so the quadratic
    phase is taken over the 4th roots of unity instead.
    """
    if not is_prime(K):
        raise NotPrime(f"K={K} is not prime")
    scale = 1.0 / math.sqrt(K)
    rows = [np.eye(K, dtype=np.complex128)[i] for i in range(K)]
    labels = [("chirp", 1, i) for i in range(1, K + 1)]
    for k in range(2, K + 2):
        for i in range(1, K + 1):
            if K == 2:
                row = [root_of_unity(-(k - 1) * l * l + 2 * i * l, 4) * scale for l in range(1, K + 1)]
            else:
                row = [root_of_unity(-(k - 1) * l * l + i * l, K) * scale for l in range(1, K + 1)]
            rows.append(np.array(row))
            labels.append(("chirp", k, i))
    return Frame(np.array(rows), tuple(labels))


def example_5_2() -> Frame:
    """Five vectors in C^2: e_1, e_2 and (e_1 + w^j e_2)/sqrt(2), w = exp(2 pi i / 3)."""
    a = 1.0 / math.sqrt(2.0)
    rows = [[1, 0], [0, 1]] + [[a, a * root_of_unity(j, 3)] for j in (1, 2, 3)]
    labels = (("basis", 0), ("basis", 1), ("cyclic", 1), ("cyclic", 2), ("cyclic", 0))
    return Frame(np.array(rows, dtype=np.complex128), labels)


def cyclic_part(f: Frame) -> Frame:
    """The cyclic-labelled vectors of ``f``, ordered by their index j."""
    idx = sorted(f.indices("cyclic"), key=lambda i: f.labels[i][1])
    return f.subframe(idx)


def recover_sequence(f: Frame) -> GeneratingSequence:
    """Exponents n_l read back from the phases of h_1 in a cyclic frame."""
    cyc = cyclic_part(f)
    M = cyc.size
    if M == 0:
        raise ValueError("frame has no cyclic vectors")
    if M == 1:
        return GeneratingSequence(1, (0,))
    h1 = cyc.vectors[[lab[1] for lab in cyc.labels].index(1)]
    exps = [round(np.angle(z) * M / (2 * math.pi)) % M for z in h1]
    return GeneratingSequence(M, tuple(exps))


def is_picket_fence(seq: GeneratingSequence) -> bool:
    K = len(seq.exponents)
    if K < 2 or seq.modulus != K * K - 1:
        return False
    s = DesignSet(seq.modulus, seq.exponents, Relative(K + 1, K - 1, K, 1))
    return bool(verify_design(s))


def picket_blocks(seq: GeneratingSequence) -> list[Frame]:
    """Split a picket-fence cyclic frame into K - 1 blocks of K + 1 vectors.

    Block l holds h_{j(K-1)+l} for j in Z_{K+1}, labelled ("block", l, j).
    """
    if not is_picket_fence(seq):
        raise NotPicketFence(f"{seq.exponents} is not a picket fence sequence for Z_{seq.modulus}")
    K = len(seq.exponents)
    h = cyclic_frame(seq).vectors
    blocks = []
    for l in range(K - 1):
        idx = [j * (K - 1) + l for j in range(K + 1)]
        blocks.append(Frame(h[idx], tuple(("block", l, j) for j in range(K + 1))))
    return blocks


def split_blocks(f: Frame) -> list[Frame]:
    """Picket blocks of the cyclic part of ``f`` grouped by index mod (K - 1)."""
    cyc = cyclic_part(f)
    K = f.dim
    if K < 2:
        return [cyc]
    groups: dict[int, list[int]] = {}
    for pos, lab in enumerate(cyc.labels):
        groups.setdefault(lab[1] % (K - 1), []).append(pos)
    return [cyc.subframe(groups[l]) for l in sorted(groups)]


def drop_basis_vectors(f: Frame, count: int) -> Frame:
    """Remove the last ``count`` basis vectors, keeping at least K^2 + 1 vectors."""
    K = f.dim
    basis = f.indices("basis")
    if count < 1 or count > K - 2 or count > len(basis) or f.size - count < K * K + 1:
        raise TooManyRemoved(f"cannot remove {count} basis vectors from a {f.size}-vector frame in C^{K}")
    drop = set(basis[-count:])
    return f.subframe(i for i in range(f.size) if i not in drop)


def singer_ogf(q: int, n: int = 1) -> Frame:
    """Basis adjoined to the cyclic ETF of the Singer (q^2+q+1, q+1, 1) set (n = 1)."""
    return adjoin_basis(cyclic_frame(GeneratingSequence.from_design(singer_set(q, n))))


def picket_ogf(q: int, n: int = 1) -> Frame:
    """Basis adjoined to the cyclic frame of the trace-built picket fence sequence."""
    return adjoin_basis(cyclic_frame(GeneratingSequence.from_design(relative_set(q, n))))
