"""framekit command line: construct, verify, search, report.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for unreadable input or invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, replace

from . import analysis as an
from .config import DEFAULT_SEARCH_BUDGET, DEFAULT_TOLERANCES, Tolerances
from .design2 import WeightedFrame, design_sum, infer_weights, projector_sum_check
from .designsets import (
    DesignSet,
    relative_set,
    search_difference_sets,
    search_picket_fence,
    singer_set,
)
from .errors import FramekitError, SearchBudgetExceeded
from .framegen import (
    Frame,
    GeneratingSequence,
    canonical_basis,
    chirp_mub,
    cyclic_frame,
    cyclic_part,
    example_5_2,
    picket_ogf,
    recover_sequence,
    singer_ogf,
    split_blocks,
)
from .gf import prime_power

FAMILIES = ("singer", "rds", "singer-ogf", "picket-ogf", "singer-etf", "chirps", "example-5-2", "basis")
CHECKS = (
    "coherence", "welch", "orthoplex", "tight", "equiangular", "mub",
    "modulation", "fourier", "picket-values", "design2", "projector-sum",
)
DEFAULT_CHECKS = ("coherence", "welch", "orthoplex", "tight")


class InputError(Exception):
    """Bad parameters or unreadable input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    q: int | None = None
    n: int = 1
    k: int | None = None
    m: int | None = None
    lam: int = 1
    k_min: int | None = None
    k_max: int | None = None
    limit: int | None = 1
    weighted: bool = False
    checks: tuple[str, ...] = DEFAULT_CHECKS
    tolerances: Tolerances = DEFAULT_TOLERANCES
    fmt: str = "json"
    out: str | None = None
    budget: int = DEFAULT_SEARCH_BUDGET
    threads: int = 1
    inputs: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.fmt not in ("json", "csv", "text"):
            raise InputError(f"unknown format {self.fmt!r}")
        if self.budget <= 0:
            raise InputError("budget must be positive")
        if self.threads <= 0:
            raise InputError("threads must be positive")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- construct ------------------------------------------------------------------------


def _require(value, flag, family):
    if value is None:
        raise InputError(f"{family} needs {flag}")
    return value


def build_artifact(cfg: RunConfig):
    fam = cfg.target
    if fam in ("singer", "rds", "singer-ogf", "picket-ogf", "singer-etf"):
        q = _require(cfg.q, "--q", fam)
        prime_power(q)
        if fam == "singer":
            return singer_set(q, cfg.n)
        if fam == "rds":
            return relative_set(q, cfg.n)
        if fam == "singer-etf":
            return cyclic_frame(GeneratingSequence.from_design(singer_set(q, cfg.n)))
        frame = singer_ogf(q, cfg.n) if fam == "singer-ogf" else picket_ogf(q, cfg.n)
        return infer_weights(frame, cfg.tolerances) if cfg.weighted else frame
    if fam == "chirps":
        return chirp_mub(_require(cfg.k, "--k", fam))
    if fam == "basis":
        return canonical_basis(_require(cfg.k, "--k", fam))
    if fam == "example-5-2":
        return example_5_2()
    raise InputError(f"unknown family {fam!r}")


def _artifact_text(obj) -> str:
    if isinstance(obj, DesignSet):
        k = obj.kind
        params = ", ".join(f"{name}={getattr(k, name)}" for name in k.__dataclass_fields__)
        return f"Z_{obj.modulus} ({params}): {{{', '.join(map(str, obj.elements))}}}\n"
    frame = obj.frame if isinstance(obj, WeightedFrame) else obj
    lines = [f"{frame.size} vectors in C^{frame.dim}"]
    for i, (row, lab) in enumerate(zip(frame.vectors, frame.labels)):
        entries = " ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in row)
        extra = f" w={obj.weights[i]:.6g}" if isinstance(obj, WeightedFrame) else ""
        lines.append(f"{':'.join(map(str, lab))}{extra}  {entries}")
    return "\n".join(lines) + "\n"


def cmd_construct(cfg: RunConfig) -> int:
    obj = build_artifact(cfg)
    if cfg.fmt == "json":
        text = dumps(obj.to_dict())
    elif cfg.fmt == "csv":
        if isinstance(obj, DesignSet):
            text = "element\n" + "".join(f"{e}\n" for e in obj.elements)
        elif isinstance(obj, WeightedFrame):
            lines = obj.frame.to_csv().splitlines()
            text = "\n".join([lines[0] + ",weight"] + [f"{row},{w!r}" for row, w in zip(lines[1:], map(float, obj.weights))]) + "\n"
        else:
            text = obj.to_csv()
    else:
        text = _artifact_text(obj)
    _emit(text, cfg)
    return 0


# -- verify -----------------------------------------------------------------------------


def load_frame(path: str) -> Frame | WeightedFrame:
    try:
        with open(path) as fh:
            d = json.load(fh)
        if "weights" in d:
            return WeightedFrame.from_dict(d)
        return Frame.from_dict(d)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read frame from {path}: {exc}") from exc


def _groups(frame: Frame) -> list[Frame]:
    """Label groups that should be pairwise unbiased: chirp bases or picket blocks."""
    chirp = frame.indices("chirp")
    if chirp:
        ks = sorted({frame.labels[i][1] for i in chirp})
        return [frame.subframe(i for i in chirp if frame.labels[i][1] == k) for k in ks]
    block = frame.indices("block")
    if block:
        ls = sorted({frame.labels[i][1] for i in block})
        return [frame.subframe(i for i in block if frame.labels[i][1] == l) for l in ls]
    K = frame.dim
    if K > 2 and len(frame.indices("cyclic")) == K * K - 1:
        return split_blocks(frame)
    return []


def _check(name, status, **detail):
    return {"check": name, "status": status, **detail}


def run_checks(obj, checks, tol: Tolerances):
    """Run the named checks; returns (report, design certificate or None, rows)."""
    weighted = obj if isinstance(obj, WeightedFrame) else None
    frame = obj.frame if weighted else obj
    report = an.analyze(frame, tol)
    rows, certificate = [], None
    for name in checks:
        if name == "coherence":
            rows.append(_check(name, "pass" if report.coherence is not None else "fail", value=report.coherence))
        elif name == "welch":
            ok = report.coherence is not None and report.coherence >= report.welch_bound - tol.magnitude
            rows.append(_check(name, "pass" if ok else "fail", welch_bound=report.welch_bound))
        elif name == "orthoplex":
            if not report.orthoplex_applicable:
                rows.append(_check(name, "n/a", reason=f"N={report.N} < K^2+1={report.K ** 2 + 1}"))
            else:
                rows.append(_check(name, "pass" if report.is_ogf else "fail",
                                   coherence=report.coherence, bound=report.orthoplex_bound))
        elif name == "tight":
            rows.append(_check(name, "pass" if report.is_tight else "fail",
                               residual=report.tightness_residual, bound=report.frame_bound))
        elif name == "equiangular":
            rows.append(_check(name, "pass" if report.is_equiangular else "fail", value=report.equiangular_value))
        elif name == "mub":
            groups = _groups(frame)
            if len(groups) < 2:
                rows.append(_check(name, "n/a", reason="no labelled bases or blocks"))
            else:
                ok = all(an.mutual_unbiasedness(a, b, tol) for i, a in enumerate(groups) for b in groups[i + 1:])
                rows.append(_check(name, "pass" if ok else "fail", groups=len(groups)))
        elif name == "modulation":
            if not frame.indices("cyclic"):
                rows.append(_check(name, "fail", reason="frame has no cyclic vectors"))
            else:
                seq = recover_sequence(frame)
                defect = an.cyclic_modulation_defect(seq, frame)
                rows.append(_check(name, "pass" if defect <= tol.fourier else "fail", defect=defect))
        elif name == "fourier":
            part = cyclic_part(frame) if frame.indices("cyclic") else frame
            defect = an.fourier_identity_check(part, cyclic=bool(frame.indices("cyclic")))
            rows.append(_check(name, "pass" if defect <= tol.fourier else "fail", defect=defect))
        elif name == "picket-values":
            cert = an.certify_picket_values(frame, frame.dim, tol)
            rows.append(_check(name, "pass" if cert.ok else "fail", first_violation=cert.first_violation))
        elif name in ("design2", "projector-sum"):
            try:
                wf = weighted or infer_weights(frame, tol)
            except FramekitError as exc:
                rows.append(_check(name, "fail", reason=f"{exc.code}: {exc}"))
                continue
            if name == "design2":
                certificate = design_sum(wf, 2, tol)
                rows.append(_check(name, "pass" if certificate.verdict else "fail", defect=certificate.defect))
            else:
                try:
                    residual = projector_sum_check(wf, 2)
                except FramekitError as exc:
                    rows.append(_check(name, "fail", reason=f"{exc.code}: {exc}"))
                    continue
                rows.append(_check(name, "pass" if residual <= tol.projector else "fail", residual=residual))
        else:
            raise InputError(f"unknown check {name!r}")
    return report, certificate, rows


def cmd_verify(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise InputError("verify takes exactly one input file")
    obj = load_frame(cfg.inputs[0])
    report, certificate, rows = run_checks(obj, cfg.checks, cfg.tolerances)
    all_pass = all(r["status"] != "fail" for r in rows)
    if cfg.fmt == "text":
        lines = [f"{r['check']:<14} {r['status'].upper()}" for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = dumps({
            "report": report.to_dict(),
            "design": certificate.to_dict() if certificate else None,
            "checks": rows,
            "all_pass": all_pass,
        })
    _emit(text, cfg)
    return 0 if all_pass else 1


# -- search -----------------------------------------------------------------------------


def _k_range(cfg: RunConfig) -> list[int]:
    if cfg.k is not None:
        return [cfg.k]
    if cfg.k_min is None or cfg.k_max is None:
        raise InputError("search needs --k or both --k-min and --k-max")
    if cfg.k_min > cfg.k_max:
        raise InputError("--k-min exceeds --k-max")
    return list(range(cfg.k_min, cfg.k_max + 1))


def search_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for K in _k_range(cfg):
        if cfg.target == "ds":
            M = cfg.m if cfg.m is not None else K * K - K + 1
            call = lambda: search_difference_sets(M, K, cfg.lam, cfg.limit, cfg.budget, cfg.threads)
        elif cfg.target == "picket":
            if K < 2:
                raise InputError("picket search needs K >= 2")
            M = K * K - 1
            call = lambda: search_picket_fence(K, cfg.limit, cfg.budget, cfg.threads)
        else:
            raise InputError(f"unknown search target {cfg.target!r}")
        try:
            found = call()
        except SearchBudgetExceeded:
            rows.append({"K": K, "M": M, "status": "inconclusive", "sets": []})
            continue
        if found:
            rows.append({"K": K, "M": M, "status": "found", "sets": [list(s.elements) for s in found]})
        else:
            rows.append({"K": K, "M": M, "status": "DNE", "sets": []})
    return rows


def cmd_search(cfg: RunConfig) -> int:
    rows = search_rows(cfg)
    if cfg.fmt == "json":
        text = dumps({"target": cfg.target, "lambda": cfg.lam, "rows": rows})
    else:
        title = "Difference set" if cfg.target == "ds" else "Picket Fence Sequence"
        lines = [f"K  | M   | {title}"]
        for r in rows:
            if r["status"] == "found":
                cell = "; ".join("{" + ", ".join(map(str, s)) + "}" for s in r["sets"])
            else:
                cell = r["status"]
            lines.append(f"{r['K']:<2} | {r['M']:<3} | {cell}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return 0


# -- report -----------------------------------------------------------------------------

REPORT_COLUMNS = ("input", "N", "K", "coherence", "welch_bound", "orthoplex_bound", "ETF", "OGF", "tight")


def report_row(path: str, tol: Tolerances) -> dict:
    obj = load_frame(path)
    frame = obj.frame if isinstance(obj, WeightedFrame) else obj
    r = an.analyze(frame, tol)
    mu = r.coherence if r.coherence is not None else 0.0
    etf = r.is_equiangular and r.is_tight and abs(mu - r.welch_bound) <= math.sqrt(tol.magnitude)
    return {
        "input": path,
        "N": r.N,
        "K": r.K,
        "coherence": mu,
        "welch_bound": r.welch_bound,
        "orthoplex_bound": r.orthoplex_bound if r.orthoplex_applicable else None,
        "ETF": etf,
        "OGF": r.is_ogf,
        "tight": r.is_tight,
    }


def cmd_report(cfg: RunConfig) -> int:
    if not cfg.inputs:
        raise InputError("report needs at least one input file")
    rows = [report_row(p, cfg.tolerances) for p in cfg.inputs]
    if cfg.fmt == "json":
        text = dumps({"columns": list(REPORT_COLUMNS), "rows": rows})
    elif cfg.fmt == "csv":
        lines = [",".join(REPORT_COLUMNS)]
        for r in rows:
            lines.append(",".join("" if r[c] is None else str(r[c]) for c in REPORT_COLUMNS))
        text = "\n".join(lines) + "\n"
    else:
        def fmt(v):
            if v is None:
                return "n/a"
            if isinstance(v, bool):
                return "yes" if v else "no"
            if isinstance(v, float):
                return f"{v:.6f}"
            return str(v)

        table = [list(REPORT_COLUMNS)] + [[fmt(r[c]) for c in REPORT_COLUMNS] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(REPORT_COLUMNS))]
        text = "".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in table)
    _emit(text, cfg)
    return 0


# -- argument parsing ----------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"))
    common.add_argument("--out")
    common.add_argument("--tol-tight", type=float)
    common.add_argument("--tol-design", type=float)
    common.add_argument("--threads", type=int)

    c = sub.add_parser("construct", parents=[common], help="build a design set or frame")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("--q", type=int)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--k", type=int)
    c.add_argument("--weighted", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="certify a frame file")
    v.add_argument("input")
    v.add_argument("--checks", default=",".join(DEFAULT_CHECKS))

    s = sub.add_parser("search", parents=[common], help="exhaustive difference set search")
    s.add_argument("target", choices=("ds", "picket"))
    s.add_argument("--k", type=int)
    s.add_argument("--k-min", type=int)
    s.add_argument("--k-max", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--lambda", dest="lam", type=int, default=1)
    s.add_argument("--limit", type=int, default=1, help="sets per row; 0 lists all")
    s.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)

    r = sub.add_parser("report", parents=[common], help="compare frames against coherence bounds")
    r.add_argument("inputs", nargs="+")
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = _parser().parse_args(argv)
    tol = DEFAULT_TOLERANCES
    try:
        if ns.tol_tight is not None:
            tol = replace(tol, tight=ns.tol_tight)
        if ns.tol_design is not None:
            tol = replace(tol, design=ns.tol_design)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    threads = ns.threads or int(os.environ.get("FRAMEKIT_THREADS", "1") or 1)
    default_fmt = {"construct": "json", "verify": "json", "search": "text", "report": "text"}[ns.command]
    cfg = RunConfig(command=ns.command, tolerances=tol, fmt=ns.fmt or default_fmt, out=ns.out, threads=threads)
    if ns.command == "construct":
        cfg = replace(cfg, target=ns.family, q=ns.q, n=ns.n, k=ns.k, weighted=ns.weighted)
    elif ns.command == "verify":
        checks = tuple(c.strip() for c in ns.checks.split(",") if c.strip())
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise InputError(f"unknown checks: {','.join(bad)}")
        cfg = replace(cfg, checks=checks, inputs=(ns.input,))
    elif ns.command == "search":
        cfg = replace(cfg, target=ns.target, k=ns.k, k_min=ns.k_min, k_max=ns.k_max, m=ns.m,
                      lam=ns.lam, limit=ns.limit or None, budget=ns.budget)
    else:
        cfg = replace(cfg, inputs=tuple(ns.inputs))
    return cfg


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "search": cmd_search, "report": cmd_report}


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: InputError: {exc}", file=sys.stderr)
        return 2
    except FramekitError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
