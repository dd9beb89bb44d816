#!/usr/bin/env python3
"""Certify the Singer and picket-fence OGF families and their weighted 2-design sums.

Prints one row per (family, q) with coherence vs. 1/sqrt(K), tightness residual,
2-design defect and, when K is small enough, the projector residual.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from framekit.analysis import analyze
from framekit.config import MAX_PROJECTOR_DIM
from framekit.design2 import design_sum, picket_weights, projector_sum_check, singer_weights
from framekit.framegen import picket_ogf, singer_ogf


@dataclass(frozen=True)
class FamilyConfig:
    singer_q: tuple[int, ...] = (2, 3, 4, 5, 7, 8, 9, 11, 13)
    picket_q: tuple[int, ...] = (3, 4, 5, 7, 8, 9, 11, 13)
    projector_max_k: int = 8


def rows(cfg: FamilyConfig):
    for name, qs, build, weigh in (
        ("singer", cfg.singer_q, singer_ogf, singer_weights),
        ("picket", cfg.picket_q, picket_ogf, picket_weights),
    ):
        for q in qs:
            f = build(q)
            r = analyze(f)
            cert = design_sum(weigh(f))
            proj = projector_sum_check(weigh(f)) if f.dim <= min(cfg.projector_max_k, MAX_PROJECTOR_DIM) else None
            yield {
                "family": name,
                "q": q,
                "K": f.dim,
                "N": f.size,
                "mu_gap": abs(r.coherence - 1 / math.sqrt(f.dim)),
                "tight_residual": r.tightness_residual,
                "design_defect": cert.defect,
                "projector_residual": proj,
                "ogf": r.is_ogf and r.is_tight and cert.verdict,
            }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--singer-q", type=int, nargs="*", default=list(FamilyConfig.singer_q))
    ap.add_argument("--picket-q", type=int, nargs="*", default=list(FamilyConfig.picket_q))
    ap.add_argument("--projector-max-k", type=int, default=FamilyConfig.projector_max_k)
    ns = ap.parse_args(argv)
    cfg = FamilyConfig(tuple(ns.singer_q), tuple(ns.picket_q), ns.projector_max_k)

    header = f"{'family':<7} {'q':>3} {'K':>3} {'N':>4} {'|mu-1/sqrtK|':>13} {'tight res':>10} {'design def':>10} {'proj res':>10}  ok"
    print(header)
    ok = True
    for row in rows(cfg):
        proj = "-" if row["projector_residual"] is None else f"{row['projector_residual']:.1e}"
        print(f"{row['family']:<7} {row['q']:>3} {row['K']:>3} {row['N']:>4} {row['mu_gap']:>13.1e} "
              f"{row['tight_residual']:>10.1e} {row['design_defect']:>10.1e} {proj:>10}  {'yes' if row['ogf'] else 'NO'}")
        ok &= row["ogf"]
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
