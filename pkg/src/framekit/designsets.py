"""Cyclic difference sets and relative difference sets.

Construction goes through the trace map of a finite field; everything is then
re-checked by counting differences in plain integer arithmetic.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

from .config import DEFAULT_SEARCH_BUDGET, MAX_FIELD_SIZE
from .errors import FieldCapExceeded, SearchBudgetExceeded
from .gf import make_field, prime_power, primitive_element, relative_trace


@dataclass(frozen=True)
class Plain:
    K: int
    lam: int


@dataclass(frozen=True)
class Relative:
    N: int
    L: int
    K: int
    lam: int


Kind = Union[Plain, Relative]

PROVENANCES = ("trace-constructed", "searched", "user-supplied")


@dataclass(frozen=True)
class DesignSet:
    modulus: int
    elements: tuple[int, ...]
    kind: Kind
    provenance: str = "user-supplied"
    # (q, n) for trace-constructed sets
    params: tuple[int, int] | None = None

    def __post_init__(self):
        elems = tuple(sorted(int(e) % self.modulus for e in self.elements))
        if len(set(elems)) != len(elems):
            raise ValueError("design set elements must be distinct mod M")
        object.__setattr__(self, "elements", elems)
        if isinstance(self.kind, Relative) and self.kind.N * self.kind.L != self.modulus:
            raise ValueError("relative difference set needs M = N*L")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def K(self) -> int:
        return len(self.elements)

    def shifted(self, c: int) -> DesignSet:
        return DesignSet(
            self.modulus, tuple(e + c for e in self.elements), self.kind, self.provenance, self.params
        )

    def canonical(self) -> DesignSet:
        return DesignSet(
            self.modulus, canonical_form(self.elements, self.modulus), self.kind, self.provenance, self.params
        )

    def forbidden(self) -> frozenset[int]:
        """Forbidden subgroup: {0} for plain sets, multiples of N for relative ones."""
        if isinstance(self.kind, Relative):
            return frozenset(range(0, self.modulus, self.kind.N))
        return frozenset({0})

    def to_dict(self) -> dict:
        if isinstance(self.kind, Relative):
            kind = {"relative": {"N": self.kind.N, "L": self.kind.L, "K": self.kind.K, "lambda": self.kind.lam}}
        else:
            kind = {"plain": {"K": self.kind.K, "lambda": self.kind.lam}}
        if self.provenance == "trace-constructed" and self.params is not None:
            prov = {"trace-constructed": {"q": self.params[0], "n": self.params[1]}}
        else:
            prov = self.provenance
        return {"modulus": self.modulus, "elements": list(self.elements), "kind": kind, "provenance": prov}

    @classmethod
    def from_dict(cls, d: dict) -> DesignSet:
        kind = d["kind"]
        if "relative" in kind:
            r = kind["relative"]
            k = Relative(int(r["N"]), int(r["L"]), int(r["K"]), int(r["lambda"]))
        else:
            r = kind["plain"]
            k = Plain(int(r["K"]), int(r["lambda"]))
        prov = d.get("provenance", "user-supplied")
        params = None
        if isinstance(prov, dict):
            ((prov, p),) = prov.items()
            params = (int(p["q"]), int(p["n"]))
        return cls(int(d["modulus"]), tuple(d["elements"]), k, prov, params)


def canonical_form(elements, M: int) -> tuple[int, ...]:
    """Lexicographically smallest sorted translate of ``elements`` in Z_M."""
    return min(tuple(sorted((e + c) % M for e in elements)) for c in range(M))


def shift_equivalent(a, b, M: int) -> bool:
    return canonical_form(a, M) == canonical_form(b, M)


@dataclass(frozen=True)
class DifferenceSpectrum:
    modulus: int
    counts: tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.counts[x % self.modulus]


def difference_spectrum(s: DesignSet) -> DifferenceSpectrum:
    M = s.modulus
    counts = [0] * M
    for a in s.elements:
        for b in s.elements:
            if a != b:
                counts[(a - b) % M] += 1
    return DifferenceSpectrum(M, tuple(counts))


@dataclass(frozen=True)
class DesignVerdict:
    ok: bool
    witness: int | None = None
    count: int | None = None
    expected: int | None = None

    def __bool__(self):
        return self.ok


def verify_design(s: DesignSet) -> DesignVerdict:
    """Exact check of the difference condition for the set's declared kind."""
    if s.K != s.kind.K:
        return DesignVerdict(False)
    spec = difference_spectrum(s)
    forbidden = s.forbidden()
    for x in range(1, s.modulus):
        expected = 0 if x in forbidden else s.kind.lam
        if spec.counts[x] != expected:
            return DesignVerdict(False, x, spec.counts[x], expected)
    return DesignVerdict(True)


# -- trace constructions --------------------------------------------------------


def _trace_field(q: int, degree: int, max_size: int):
    p, m = prime_power(q)
    if q**degree > max_size:
        raise FieldCapExceeded(f"GF({q}^{degree}) exceeds field size cap {max_size}")
    F = make_field(p, m * degree, max_size)
    return F, m


def _trace_indices(q: int, degree: int, count: int, target: int, max_size: int) -> list[int]:
    F, m = _trace_field(q, degree, max_size)
    alpha = primitive_element(F)
    out, x = [], F.one
    for i in range(count):
        if relative_trace(x, m).to_int() == target:
            out.append(i)
        x = x * alpha
    return out


def singer_set(q: int, n: int, max_size: int = MAX_FIELD_SIZE) -> DesignSet:
    """Singer (M, K, lam) difference set from the trace-zero hyperplane of GF(q^(n+2))."""
    if n < 1:
        raise ValueError("n must be positive")
    prime_power(q)
    M = (q ** (n + 2) - 1) // (q - 1)
    K = (q ** (n + 1) - 1) // (q - 1)
    lam = (q**n - 1) // (q - 1)
    elems = _trace_indices(q, n + 2, M, 0, max_size)
    s = DesignSet(M, tuple(elems), Plain(K, lam), "trace-constructed", (q, n))
    verdict = verify_design(s)
    if not verdict:
        raise AssertionError(f"Singer construction failed verification: {verdict}")
    return s


def relative_set(q: int, n: int, max_size: int = MAX_FIELD_SIZE) -> DesignSet:
    """(N, L, K, lam) relative difference set {i : tr(alpha^i) = 1} in Z_{q^(n+1) - 1}."""
    if n < 1:
        raise ValueError("n must be positive")
    prime_power(q)
    N = (q ** (n + 1) - 1) // (q - 1)
    L = q - 1
    elems = _trace_indices(q, n + 1, N * L, 1, max_size)
    s = DesignSet(N * L, tuple(elems), Relative(N, L, q**n, q ** (n - 1)), "trace-constructed", (q, n))
    verdict = verify_design(s)
    if not verdict:
        raise AssertionError(f"relative construction failed verification: {verdict}")
    return s


# -- exhaustive search ------------------------------------------------------------


def _search_branch(M, K, caps, prefix, budget, limit):
    """Depth-first extension of ``prefix`` by increasing residues.

    Returns (found sets, node count, completed flag).
    """
    counts = [0] * M
    for i, a in enumerate(prefix):
        for b in prefix[:i]:
            counts[(a - b) % M] += 1
            counts[(b - a) % M] += 1
    found: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    nodes = 0
    chosen = list(prefix)

    class _Stop(Exception):
        pass

    def extend(start):
        nonlocal nodes
        if len(chosen) == K:
            if all(counts[x] == caps[x] for x in range(1, M)):
                canon = canonical_form(chosen, M)
                if canon not in seen:
                    seen.add(canon)
                    found.append(canon)
                    if limit is not None and len(found) >= limit:
                        raise _Stop
            return
        for e in range(start, M - (K - len(chosen)) + 1):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"node budget {budget} exhausted")
            touched = []
            ok = True
            for s in chosen:
                for d in ((e - s) % M, (s - e) % M):
                    counts[d] += 1
                    touched.append(d)
                    if counts[d] > caps[d]:
                        ok = False
                if not ok:
                    break
            if ok:
                chosen.append(e)
                extend(e + 1)
                chosen.pop()
            for d in touched:
                counts[d] -= 1

    try:
        extend(prefix[-1] + 1)
    except _Stop:
        return found, nodes, False
    return found, nodes, True


def _run_branch(args):
    M, K, caps, prefix, budget, limit = args
    try:
        return _search_branch(M, K, caps, prefix, budget, limit)
    except SearchBudgetExceeded:
        return None


def _search(M, K, caps, budget, limit, workers):
    allowed = sum(1 for x in range(1, M) if caps[x] > 0)
    lam_total = sum(caps[1:])
    if K == 1:
        return [(0,)] if lam_total == 0 else []
    # Every allowed residue must be covered exactly cap times; a mismatch in
    # total count rules the parameters out without searching.
    if K * (K - 1) != lam_total or allowed == 0:
        return []
    if caps[1] == 0:
        raise ValueError("search assumes difference 1 is allowed")
    # Difference 1 occurs, so some translate contains {0, 1}.
    if K == 2:
        prefixes = [(0, 1)]
    else:
        prefixes = [(0, 1, e) for e in range(2, M - K + 3)]
        prefixes = [pre for pre in prefixes if _prefix_ok(pre, M, caps)]
    results: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()

    def merge(found):
        for canon in found:
            if canon not in seen:
                seen.add(canon)
                results.append(canon)

    if K == 2:
        found, _, _ = _search_branch(M, K, caps, (0, 1), budget, limit)
        merge(found)
        return sorted(results)[:limit] if limit else sorted(results)

    workers = max(1, workers or 1)
    total_nodes = 0
    if workers == 1:
        for pre in prefixes:
            found, nodes, _ = _search_branch(M, K, caps, pre, budget - total_nodes, None if limit is None else limit - len(results))
            total_nodes += nodes
            merge(found)
            if limit is not None and len(results) >= limit:
                break
    else:
        tasks = [(M, K, caps, pre, budget, limit) for pre in prefixes]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for out in pool.map(_run_branch, tasks):
                if out is None:
                    raise SearchBudgetExceeded(f"node budget {budget} exhausted")
                found, nodes, _ = out
                total_nodes += nodes
                merge(found)
        if total_nodes > budget:
            raise SearchBudgetExceeded(f"node budget {budget} exhausted")
    results.sort()
    return results[:limit] if limit is not None else results


def _prefix_ok(pre, M, caps) -> bool:
    counts = [0] * M
    for i, a in enumerate(pre):
        for b in pre[:i]:
            counts[(a - b) % M] += 1
            counts[(b - a) % M] += 1
    return all(c <= cap for c, cap in zip(counts, caps))


def _default_workers() -> int:
    env = os.environ.get("FRAMEKIT_THREADS")
    return int(env) if env else 1


def search_difference_sets(
    M: int, K: int, lam: int = 1, limit: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET, workers: int | None = None,
) -> list[DesignSet]:
    """All (M, K, lam) cyclic difference sets up to translation, canonical form.

    An empty list means the search space was exhausted. Raises
    SearchBudgetExceeded if ``budget`` node visits were not enough.
    """
    if M < 1 or K < 1 or lam < 1:
        raise ValueError("M, K, lam must be positive")
    if K > M:
        return []
    caps = [0] + [lam] * (M - 1)
    found = _search(M, K, caps, budget, limit, workers if workers is not None else _default_workers())
    return [DesignSet(M, s, Plain(K, lam), "searched") for s in found]


def search_picket_fence(
    K: int, limit: int | None = None, budget: int = DEFAULT_SEARCH_BUDGET, workers: int | None = None,
) -> list[DesignSet]:
    """Picket fence sequences of size K in Z_{K^2 - 1}, forbidden subgroup <K + 1>."""
    if K < 2:
        raise ValueError("picket fence search needs K >= 2")
    M = K * K - 1
    caps = [0 if x % (K + 1) == 0 else 1 for x in range(M)]
    found = _search(M, K, caps, budget, limit, workers if workers is not None else _default_workers())
    kind = Relative(K + 1, K - 1, K, 1)
    return [DesignSet(M, s, kind, "searched") for s in found]
