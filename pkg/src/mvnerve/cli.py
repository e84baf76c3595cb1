"""Command-line interface.

Exit codes: 0 success (or bound verified), 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import io
from .bounds import certify, sharpness_suite
from .complex import ComplexError, CoverError, GridMap, compatibility_problems, cover_from_members
from .lowerbounds import generate_bipyramid_example, generate_sphere_example
from .modules import doubled
from .nerve import acyclicity, nerve
from .persistence import PersistenceError, barcode, check_field
from .random_instances import random_instance
from .spectral import DoubleComplex, page, total_barcode

GRAMMAR = """\
file grammar (one record per line, '#' starts a comment):
  complex:  simplex <v0> ... <vk> : <birth>
  cover:    cover <index>
            simplex <v0> ... <vk> [: <birth>]
vertices are integers; births are integers (rationals with --grid-step).
cover lines without a birth inherit the ambient birth; faces are implied.
the output directory can be overridden with MVNERVE_OUT_DIR.
"""


@dataclass(frozen=True)
class RunConfig:
    field: int = 2
    grid_step: Fraction | None = None
    max_degree: int | None = None
    max_card: float = float("inf")
    fmt: str = "json"
    seed: int = 0

    def __post_init__(self):
        check_field(self.field)

    @property
    def grid(self) -> GridMap | None:
        return None if self.grid_step is None else GridMap(self.grid_step)


class InputError(Exception):
    pass


def _emit(obj, text: str | None, cfg: RunConfig) -> None:
    if cfg.fmt == "json" or text is None:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _load(args, cfg: RunConfig):
    X = io.parse_complex(args.complex, cfg.grid)
    cover = None
    if getattr(args, "cover", None):
        cover = io.parse_cover(args.cover, X, cfg.grid)
    return X, cover


def cmd_barcode(args, cfg):
    X = io.parse_complex(args.complex, cfg.grid)
    deg = cfg.max_degree if cfg.max_degree is not None else max(X.dim, 0)
    bc = barcode(X, deg, cfg.field)
    _emit(bc.to_json(), bc.to_text(), cfg)
    return 0


def cmd_nerve(args, cfg):
    if args.complex:
        X = io.parse_complex(args.complex, cfg.grid)
        cover = io.parse_cover(args.cover, X, cfg.grid)
    else:
        cover = io.parse_cover(args.cover, None, cfg.grid)
    max_card = cfg.max_card if args.max_card is not None else None
    nv = nerve(cover, max_card, args.strategy)
    report = acyclicity(cover, cfg.max_card, cfg.field)
    labels = "  ".join(f"{k}={lab}" for k, lab in enumerate(cover.indices))
    nerve_text = f"# nerve vertices are cover positions: {labels}\n" + io.serialize_complex(nv.complex)
    rep = report.to_json(labels=nv.labels)
    if args.out or os.environ.get("MVNERVE_OUT_DIR"):
        out = io.output_dir(args.out)
        io.write_text(out / "nerve.cplx", nerve_text)
        io.write_text(out / "acyclicity.json", json.dumps(rep, indent=2) + "\n")
    if cfg.fmt == "json":
        _emit({"nerve": nerve_text, "acyclicity": rep}, None, cfg)
    else:
        sys.stdout.write(nerve_text + "# acyclicity\n" + json.dumps(rep, indent=2) + "\n")
    return 0


def cmd_check_cover(args, cfg):
    X = io.parse_complex(args.complex, cfg.grid)
    members = io.parse_cover_members(args.cover, X, cfg.grid)
    problems = compatibility_problems(X, list(members.values()))
    ok = not problems
    if ok:
        cover = cover_from_members(members, X)
        induced = cover.is_induced()
    else:
        induced = None
    obj = {"valid": ok, "members": len(members), "induced": induced, "problems": problems}
    text = ("valid cover" if ok else "invalid cover") + f" ({len(members)} members)\n" + "".join(f"  {p}\n" for p in problems)
    _emit(obj, text, cfg)
    return 0 if ok else 1


def cmd_spectral(args, cfg):
    X, cover = _load(args, cfg)
    dc = DoubleComplex(cover, cfg.field)
    last = args.page if args.page is not None else dc.infinity_page
    first = args.page if args.page is not None else 1
    pgs = [page(dc, r) for r in range(first, last + 1)]
    obj = {"infinity_page": dc.infinity_page, "pages": [pg.to_json() for pg in pgs]}
    text = "".join(pg.render() + "\n" for pg in pgs)
    _emit(obj, text, cfg)
    return 0


def cmd_total(args, cfg):
    X, cover = _load(args, cfg)
    dc = DoubleComplex(cover, cfg.field)
    deg = cfg.max_degree if cfg.max_degree is not None else max(X.dim, 0)
    tb = total_barcode(dc, deg)
    agrees = tb == barcode(X, deg, cfg.field)
    obj = {"barcode": tb.to_json(), "equals_ambient": agrees}
    _emit(obj, tb.to_text() + f"# equals ambient barcode: {agrees}\n", cfg)
    return 0 if agrees else 1


def cmd_verify_bound(args, cfg):
    X, cover = _load(args, cfg)
    rep = certify(X, cover, cfg.field, stepwise=not args.no_stepwise)
    _emit(rep.to_json(), rep.to_text(), cfg)
    return 1 if rep.verdict == "fail" else 0


def cmd_examples(args, cfg):
    if args.kind == "random":
        X, cover = random_instance(cfg.seed, max_simplices=args.max_simplices)
        stem = f"random_s{cfg.seed}"
    else:
        gen = generate_sphere_example if args.kind == "sphere" else generate_bipyramid_example
        X, cover = gen(args.dim)
        stem = f"{args.kind}_D{args.dim}"
    obj = {"example": args.kind, "simplices": len(X), "members": len(cover)}
    if args.kind != "random":
        obj["dim"] = args.dim
    if args.emit:
        out = io.output_dir(args.out)
        cx = io.write_text(out / f"{stem}.cplx", io.serialize_complex(X))
        cv = io.write_text(out / f"{stem}.cover", io.serialize_cover(cover, births=not cover.is_induced()))
        obj["files"] = [str(cx), str(cv)]
    status = 0
    if args.sharpness:
        items = sharpness_suite(args.dim, cfg.field)
        obj["sharpness"] = [it.to_json() for it in items]
        status = 0 if all(it.holds for it in items) else 1
    else:
        bX = barcode(X, max(X.dim, 0), cfg.field)
        bN = barcode(nerve(cover, float("inf")).complex, max(X.dim, 0) + 1, cfg.field)
        obj["barcode"] = bX.to_json()
        obj["nerve_barcode"] = bN.to_json()
        obj["eps2"] = doubled(acyclicity(cover, field=cfg.field).eps)
    lines = [f"{k}: {json.dumps(v)}" for k, v in obj.items()]
    _emit(obj, "\n".join(lines) + "\n", cfg)
    return status


def _grid_step(s: str) -> Fraction:
    try:
        v = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid grid step {s!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    return v


def _max_card(s: str) -> float:
    if s in ("inf", "all"):
        return float("inf")
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("max-card must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=2, help="prime field characteristic (default 2)")
    common.add_argument("--grid-step", type=_grid_step, default=None, help="floor rational births onto this grid")
    common.add_argument("--degree", type=int, default=None, help="highest homological degree")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output directory for written files")

    ap = argparse.ArgumentParser(
        prog="mvnerve",
        description="Persistent homology of filtered covers, their nerves and the Mayer-Vietoris spectral sequence.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("barcode", parents=[common], help="barcode of a filtered complex")
    p.add_argument("complex")
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("nerve", parents=[common], help="filtered nerve and acyclicity report")
    p.add_argument("cover")
    p.add_argument("--complex", default=None, help="ambient complex (needed for covers without births)")
    p.add_argument("--max-card", type=_max_card, default=None)
    p.add_argument("--strategy", choices=("min", "max", "average"), default="min")
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("check-cover", parents=[common], help="validate a cover against a complex")
    p.add_argument("complex")
    p.add_argument("cover")
    p.set_defaults(func=cmd_check_cover)

    p = sub.add_parser("spectral", parents=[common], help="pages of the Mayer-Vietoris spectral sequence")
    p.add_argument("complex")
    p.add_argument("cover")
    p.add_argument("--page", type=int, default=None, help="only this page (default: all up to E^inf)")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("total", parents=[common], help="barcode of the total complex")
    p.add_argument("complex")
    p.add_argument("cover")
    p.set_defaults(func=cmd_total)

    p = sub.add_parser("verify-bound", parents=[common], help="certify the nerve bounds on a cover")
    p.add_argument("complex")
    p.add_argument("cover")
    p.add_argument("--no-stepwise", action="store_true", help="skip the spectral-sequence distances")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("examples", parents=[common], help="generate the sphere/bipyramid examples or a random instance")
    p.add_argument("kind", choices=("sphere", "bipyramid", "random"))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--emit", action="store_true", help="write .cplx/.cover files to the output directory")
    p.add_argument("--sharpness", action="store_true", help="check the sharpness equalities at this dimension")
    p.add_argument("--max-simplices", type=int, default=60)
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = RunConfig(
            field=args.field,
            grid_step=args.grid_step,
            max_degree=args.degree,
            max_card=getattr(args, "max_card", None) or float("inf"),
            fmt=args.format,
            seed=args.seed,
        )
        if cfg.max_degree is not None and cfg.max_degree < 0:
            raise InputError("--degree must be >= 0")
        return args.func(args, cfg)
    except (io.ParseError, ComplexError, CoverError, PersistenceError, InputError, ValueError, OSError) as e:
        sys.stderr.write(f"mvnerve: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
