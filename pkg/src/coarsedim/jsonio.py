"""JSON readers and writers for spaces, covers, witness families and reports.

Infinite margins and ratios are written as the string ``"inf"``.  Exact
ratios travel alongside their float value as ``"p/q"`` strings.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .covers import Cover, CoverReport
from .metric import FiniteMetricSpace, gen_grid, validate_space
from .witness import Certificate, WitnessFamily, WitnessReport


class FormatError(ValueError):
    pass


def _num(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Fraction):
        return float(x)
    return x


def _unnum(x):
    if x == "inf":
        return math.inf
    return x


def _ratio_out(r) -> dict:
    if r is None:
        return {"value": None, "exact": None}
    if isinstance(r, float) and math.isinf(r):
        return {"value": "inf", "exact": "inf"}
    return {"value": float(r), "exact": str(Fraction(r))}


def _ratio_in(obj):
    if obj is None or obj.get("exact") is None:
        return None
    return math.inf if obj["exact"] == "inf" else Fraction(obj["exact"])


def write_json(path: str | os.PathLike, obj) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(obj, f, indent=1)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str | os.PathLike):
    with open(path) as f:
        return json.load(f)


def space_to_json(space: FiniteMetricSpace, keep_generator: bool = False) -> dict:
    if keep_generator and space.grid is not None:
        g = space.grid
        return {"generator": {"kind": "grid", "dim": g.dim, "side": g.side, "norm": g.norm}}
    return {"size": space.size, "dist": space.dist.tolist()}


def space_from_json(obj: dict) -> FiniteMetricSpace:
    try:
        if "generator" in obj:
            gen = obj["generator"]
            if gen.get("kind") != "grid":
                raise FormatError(f"unknown generator kind {gen.get('kind')!r}")
            return gen_grid(int(gen["dim"]), int(gen["side"]), gen.get("norm", "linf"))
        space = validate_space(obj["dist"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed space JSON: {exc}") from exc
    if "size" in obj and obj["size"] != space.size:
        raise FormatError(f"size {obj['size']} does not match matrix of size {space.size}")
    return space


def cover_to_json(cover: Cover) -> dict:
    return {"elements": [list(e) for e in cover]}


def cover_from_json(obj: dict, size: int | None = None) -> Cover:
    try:
        cover = Cover(obj["elements"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed cover JSON: {exc}") from exc
    if size is not None and any(e[0] < 0 or e[-1] >= size for e in cover):
        raise FormatError(f"cover mentions points outside [0, {size})")
    return cover


def witness_to_json(family: WitnessFamily) -> dict:
    return {"radius_S": family.radius_S,
            "sets": [[list(pair) for pair in sorted(a)] for a in family.sets]}


def witness_from_json(obj: dict, size: int | None = None) -> WitnessFamily:
    try:
        family = WitnessFamily(obj["radius_S"], obj["sets"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed witness JSON: {exc}") from exc
    if size is not None:
        if len(family) != size:
            raise FormatError(f"witness has {len(family)} sets for {size} points")
        if any(not 0 <= p < size for a in family.sets for p, _ in a):
            raise FormatError("witness mentions points outside the space")
    return family


def cover_report_to_json(report: CoverReport) -> dict:
    return {
        "passed": report.passed,
        "is_cover": report.is_cover,
        "multiplicity": report.multiplicity,
        "mesh": _num(report.mesh),
        "min_margin": _num(report.min_margin),
        "margin_argmin": report.margin_argmin,
        "uncovered": list(report.uncovered),
        "n": report.n, "S": _num(report.S), "L": _num(report.L),
        "multiplicity_ok": report.multiplicity_ok,
        "mesh_ok": report.mesh_ok,
        "lebesgue_ok": report.lebesgue_ok,
        "failures": list(report.failures),
    }


def cover_report_from_json(obj: dict) -> CoverReport:
    return CoverReport(
        is_cover=obj["is_cover"], multiplicity=obj["multiplicity"],
        mesh=_unnum(obj["mesh"]), min_margin=_unnum(obj["min_margin"]),
        margin_argmin=obj["margin_argmin"], uncovered=tuple(obj["uncovered"]),
        n=obj["n"], S=_unnum(obj["S"]), L=_unnum(obj["L"]),
        multiplicity_ok=obj["multiplicity_ok"], mesh_ok=obj["mesh_ok"],
        lebesgue_ok=obj["lebesgue_ok"], failures=list(obj["failures"]),
    )


def witness_report_to_json(report: WitnessReport) -> dict:
    return {
        "passed": report.passed,
        "worst_ratio": _ratio_out(report.worst_ratio),
        "worst_pair": list(report.worst_pair) if report.worst_pair else None,
        "max_projection": report.max_projection,
        "close_pairs_checked": report.close_pairs_checked,
        "max_symdiff": report.max_symdiff,
        "min_intersection": report.min_intersection,
        "ratio_violations": [list(p) for p in report.ratio_violations],
        "support_violations": [list(v) for v in report.support_violations],
        "projection_violations": list(report.projection_violations),
        "R": report.R,
        "epsilon_bound": _ratio_out(report.epsilon_bound),
        "n": report.n,
        "symdiff_within_2n": report.symdiff_within_2n,
    }


def witness_report_from_json(obj: dict) -> WitnessReport:
    return WitnessReport(
        passed=obj["passed"],
        worst_ratio=_ratio_in(obj["worst_ratio"]),
        worst_pair=tuple(obj["worst_pair"]) if obj["worst_pair"] else None,
        max_projection=obj["max_projection"],
        close_pairs_checked=obj["close_pairs_checked"],
        max_symdiff=obj["max_symdiff"],
        min_intersection=obj["min_intersection"],
        ratio_violations=[tuple(p) for p in obj["ratio_violations"]],
        support_violations=[tuple(v) for v in obj["support_violations"]],
        projection_violations=list(obj["projection_violations"]),
        R=obj["R"], epsilon_bound=_ratio_in(obj["epsilon_bound"]), n=obj["n"],
        symdiff_within_2n=obj["symdiff_within_2n"],
    )


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "passed": cert.passed,
        "multiplicity": cert.multiplicity,
        "mesh": _num(cert.mesh),
        "radius_S": _num(cert.radius_S),
        "multiplicity_ok": cert.multiplicity_ok,
        "inclusion_ok": cert.inclusion_ok,
        "mesh_ok": cert.mesh_ok,
        "column_bound_ok": cert.column_bound_ok,
        "min_column_fraction": str(cert.min_column_fraction),
        "inclusion_failures": [[x, y, _ratio_out(r)] for x, y, r in cert.inclusion_failures],
        "centers": list(cert.derived.centers),
        "selected": list(cert.derived.selected),
        "premise": witness_report_to_json(cert.premise),
    }
