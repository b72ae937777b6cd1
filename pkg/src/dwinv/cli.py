"""Command line front end.

    dwinv invariant --group G.json --cocycle C.json --diagram K.morse --surgery 1/0
    dwinv cocycle find --group G.json --m 10 --out DIR
    dwinv diagram check --diagram K.morse

Errors are reported as one JSON object on stderr.  Exit status 2 means the
input was rejected, 3 means the request cannot be met (no strongly
normalized representative, or a size cap was hit).
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
from pathlib import Path

from . import __version__
from .cochains import (Cochain3, cocycle_from_json, cocycle_to_json, h3_generators,
                       is_strongly_normalized, strongly_normalize)
from .diagram import (abelianized_longitude, linking_matrix, load_diagram, longitude_word,
                      wirtinger)
from .engine import SurgeryPresentation, dw_invariant
from .errors import DWError, NoSolution, TooLarge
from .groups import DEFAULT_MAX_ORDER, FiniteGroup, GroupSpec, construct_group

EXIT_INVALID = 2
EXIT_UNSATISFIABLE = 3


def parse_surgery(text: str) -> list[tuple[int, int]]:
    """``"p1/q1,p2/q2"`` -> ``[(p1, q1), (p2, q2)]``; a bare ``p`` means ``p/1``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty surgery coefficient in {text!r}")
        p, _, q = part.partition("/")
        out.append((int(p), int(q) if q else 1))
    return out


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from None


def _load_group(path: str, max_order: int) -> tuple[FiniteGroup, dict]:
    spec = GroupSpec.from_dict(_read_json(path))
    return construct_group(spec, max_order=max_order), spec.to_dict()


def _cocycle_digest(alpha: Cochain3) -> str:
    h = hashlib.sha256()
    h.update(str(alpha.den).encode())
    h.update(alpha.num.astype("<i8").tobytes())
    return h.hexdigest()[:16]


def _fraction(v) -> str:
    return f"{v.num}/{v.den}"


def _float(x: float) -> float:
    return 0.0 if abs(x) < 1e-15 else round(x, 15)


def _error(exc: BaseException, code: int) -> int:
    kind = exc.code if isinstance(exc, DWError) else type(exc).__name__
    print(json.dumps({"error": kind, "message": str(exc), "exit": code}, sort_keys=True), file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# invariant
# ---------------------------------------------------------------------------

def _resolve_cocycle(args, group: FiniteGroup) -> tuple[Cochain3, dict]:
    if args.cocycle and args.generator:
        raise ValueError("give either --cocycle or --generator, not both")
    if args.cocycle:
        alpha = cocycle_from_json(_read_json(args.cocycle), group)
        source = {"file": Path(args.cocycle).name}
    elif args.generator:
        idx, _, mult = args.generator.partition(":")
        gens = h3_generators(group, group.order)
        i = int(idx)
        if not 0 <= i < len(gens):
            raise ValueError(f"generator {i} out of range (H^3 has {len(gens)} generators)")
        k = int(mult) if mult else 1
        alpha = gens[i].cocycle.scale(k)
        source = {"generator": i, "multiple": k, "order": gens[i].order}
    else:
        alpha = Cochain3.zero(group)
        source = {"zero": True}
    source["normalized_here"] = False
    if not is_strongly_normalized(alpha):
        alpha = strongly_normalize(alpha).alpha
        source["normalized_here"] = True
    source["sha256"] = _cocycle_digest(alpha)
    source["den"] = alpha.den
    return alpha, source


def run_invariant(args) -> int:
    group, gspec = _load_group(args.group, args.max_order)
    diagram = load_diagram(args.diagram)
    coeffs = parse_surgery(args.surgery)
    surgery = SurgeryPresentation(diagram, coeffs)
    alpha, csrc = _resolve_cocycle(args, group)
    res = dw_invariant(surgery, group, alpha, dedup=args.dedup_conj, fz_range=args.range)
    total = res.total
    report = {
        "manifold": {"diagram": Path(args.diagram).name, "surgery": [f"{p}/{q}" for p, q in coeffs]},
        "group": {"spec": gspec, "order": group.order, "name": group.name},
        "cocycle": csrc,
        "values": [{"F": F, "multiplicity": k} for F, k in res.multiset()],
        "dw": {"re": _float(total.real), "im": _float(total.imag)},
        "counts": {
            "representations": res.count,
            "distinct_values": len(res.values),
            "orbit_representatives": len(res.per_rep) if args.dedup_conj else None,
        },
    }
    if args.per_rep:
        report["reps"] = [
            {"coloring": list(s.coloring),
             "peripheral": [{"m": P.m, "l": P.l, "z": P.z} for P in s.peripheral],
             "weight": s.weight,
             "F": _fraction(F)}
            for s, F in res.per_rep
        ]
    text = json.dumps(report, sort_keys=True, indent=1)
    if args.json:
        Path(args.json).write_text(text + "\n")
    print(f"DW = {report['dw']['re']:.12g} {report['dw']['im']:+.12g}i  "
          f"({res.count} representations, |G| = {group.order})")
    if not args.json and args.per_rep:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# cocycle find
# ---------------------------------------------------------------------------

SURVEY_CAP = 256


def run_cocycle_find(args) -> int:
    group, gspec = _load_group(args.group, args.max_order)
    m = args.m if args.m else group.order
    gens = h3_generators(group, m)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    orders = [g.order for g in gens]
    rows = []
    n_classes = 1
    for o in orders:
        n_classes *= o
    if gens and n_classes <= SURVEY_CAP:
        combos = itertools.product(*(range(o) for o in orders))
    else:
        # too many classes: survey multiples of each generator separately
        combos = (tuple(k if j == i else 0 for j in range(len(orders)))
                  for i in range(len(orders)) for k in range(orders[i]))
    for ks in (combos if gens else []):
        alpha = Cochain3.zero(group)
        for k, g in zip(ks, gens):
            alpha = alpha + g.cocycle.scale(k)
        try:
            rep = strongly_normalize(alpha).alpha
            ok = True
        except NoSolution:
            rep, ok = None, False
        entry = {"class": list(ks), "strongly_normalizable": ok}
        if ok and out and any(ks):
            name = "cocycle_" + "_".join(map(str, ks)) + ".json"
            (out / name).write_text(json.dumps(cocycle_to_json(rep, gspec)) + "\n")
            entry["file"] = name
        rows.append(entry)
    if out:
        for i, g in enumerate(gens):
            (out / f"generator_{i}.json").write_text(json.dumps(cocycle_to_json(g.cocycle, gspec)) + "\n")
    survey = {"group": {"spec": gspec, "order": group.order}, "m": m,
              "generators": [{"index": i, "order": o} for i, o in enumerate(orders)],
              "classes": rows}
    text = json.dumps(survey, sort_keys=True, indent=1)
    if out:
        (out / "survey.json").write_text(text + "\n")
    print(f"H^3({group.name}; 1/{m} Z/Z) invariant factors: {orders or 'none'}")
    for r in rows:
        print(f"  class {tuple(r['class'])}: {'yes' if r['strongly_normalizable'] else 'NO'}")
    return 0


# ---------------------------------------------------------------------------
# diagram check
# ---------------------------------------------------------------------------

def run_diagram_check(args) -> int:
    d = load_diagram(args.diagram)
    pres = wirtinger(d)
    info = {
        "components": d.n_components,
        "rows": len(d.rows),
        "crossings": sum(1 for c in d.crossings if c is not None),
        "arcs": pres.n_arcs,
        "writhe": list(pres.writhe),
        "linking": linking_matrix(pres),
        "meridians": list(pres.meridian),
        "longitudes": [[[a, e] for a, e in longitude_word(pres, i)] for i in range(pres.n_components)],
        "relations": [{"row": r.row, "out": r.out_arc, "over": r.over_arc, "in": r.in_arc, "sign": r.sign}
                      for r in pres.relations],
    }
    for i in range(pres.n_components):
        ab = abelianized_longitude(pres, i)
        info.setdefault("longitude_abelianized", []).append(
            [ab.get(j, 0) for j in range(pres.n_components)])
    print(json.dumps(info, sort_keys=True, indent=1))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dwinv", description="Cohomological invariants of surgered 3-manifolds.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invariant", help="DW invariant of a surgery presentation")
    inv.add_argument("--group", required=True, help="group spec JSON")
    inv.add_argument("--cocycle", help="cocycle JSON (default: zero cocycle)")
    inv.add_argument("--generator", help="use H^3 generator INDEX[:MULTIPLE] instead of a file")
    inv.add_argument("--diagram", required=True, help="layered diagram text file")
    inv.add_argument("--surgery", required=True, help='coefficients "p1/q1,p2/q2,..."')
    inv.add_argument("--per-rep", action="store_true", help="include every representation in the report")
    inv.add_argument("--dedup-conj", action="store_true", help="one representation per conjugacy orbit")
    inv.add_argument("--range", type=int, default=None, help="grid half-width for solid-torus tables")
    inv.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    inv.add_argument("--json", metavar="PATH", help="write the report here")
    inv.set_defaults(func=run_invariant)

    coc = sub.add_parser("cocycle", help="cocycle utilities")
    csub = coc.add_subparsers(dest="action", required=True)
    find = csub.add_parser("find", help="H^3 generators and a strong-normalization survey")
    find.add_argument("--group", required=True)
    find.add_argument("--m", type=int, default=None, help="coefficients (1/m)Z/Z (default |G|)")
    find.add_argument("--out", help="directory for cocycle files and survey.json")
    find.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    find.set_defaults(func=run_cocycle_find)

    dg = sub.add_parser("diagram", help="diagram utilities")
    dsub = dg.add_subparsers(dest="action", required=True)
    chk = dsub.add_parser("check", help="validate a diagram and print its presentation")
    chk.add_argument("--diagram", required=True)
    chk.set_defaults(func=run_diagram_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NoSolution, TooLarge) as exc:
        return _error(exc, EXIT_UNSATISFIABLE)
    except (DWError, ValueError, OSError) as exc:
        return _error(exc, EXIT_INVALID)


if __name__ == "__main__":
    sys.exit(main())
