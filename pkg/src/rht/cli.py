"""Command-line front end.

Every subcommand reads line-oriented model files, runs one computation, and
prints a text table or, with --json, a stable JSON document of the shape
{"model": ..., "degrees": {...}, "bound": ..., "window": ...}.  Exit status
is 0 on success, 1 for validation failures, and 2 for computation failures
(bound overruns, enumeration blowups, failed finiteness gates).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .catalog import Catalog, build_poset, enumerate_fibrations
from .derivations import ABSOLUTE, RELATIVE
from .errors import (
    AmbientMismatch,
    BoundExceeded,
    CombinatorialBlowup,
    NotAComplex,
    NotFiniteAtBound,
    RhtError,
)
from .invariants import (
    connecting_images,
    depth_of_subspaces,
    der_homology,
    fibre_gottlieb,
    finiteness_window,
    gottlieb,
    les_check,
    top_shift,
    toral_certificate,
)
from .model import (
    RelativeModel,
    SullivanModel,
    cohomology,
    formal_dimension_estimate,
    parse_document,
)
from .poset import render

ModelLike = Union[SullivanModel, RelativeModel]

COMPUTATION_ERRORS = (
    BoundExceeded,
    CombinatorialBlowup,
    NotFiniteAtBound,
    NotAComplex,
    AmbientMismatch,
)


def _load_models(paths: Sequence[str]) -> list[ModelLike]:
    out: list[ModelLike] = []
    for path in paths:
        out.extend(parse_document(Path(path).read_text()))
    if not out:
        raise RhtError("no models found in " + ", ".join(paths))
    return out


def _fibrations(models: Sequence[ModelLike]) -> list[RelativeModel]:
    fibs = [m for m in models if isinstance(m, RelativeModel)]
    if not fibs:
        raise RhtError("this subcommand needs at least one [fibration]")
    return fibs


def _parse_degrees(spec: Optional[str], default: tuple[int, int]) -> range:
    if spec is None:
        lo, hi = default
    elif ".." in spec:
        a, b = spec.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(spec)
    return range(lo, hi + 1)


def _parse_coeffs(spec: str) -> list[Fraction]:
    return [Fraction(tok.strip()) for tok in spec.split(",") if tok.strip()]


def _emit_json(args, model_name, degrees, bound=None, window=None):
    doc = {
        "model": model_name,
        "degrees": degrees,
        "bound": bound,
        "window": window,
    }
    print(json.dumps(doc, indent=2, default=str))


def _report_degrees(args, model_name, rows, bound=None, window=None):
    """rows: degree -> (dim, basis labels).  Text table or JSON document."""
    if args.json:
        degrees = {
            str(n): {"dim": dim, "basis": list(basis)}
            for n, (dim, basis) in sorted(rows.items())
        }
        _emit_json(args, model_name, degrees, bound, window)
        return
    print(f"model {model_name}")
    for n, (dim, basis) in sorted(rows.items()):
        suffix = "  " + ", ".join(basis) if basis else ""
        print(f"  n={n}  dim {dim}{suffix}")


# ----------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    status = 0
    for path in args.files:
        try:
            models = parse_document(Path(path).read_text())
            for m in models:
                target = m.total if isinstance(m, RelativeModel) else m
                target.validate()
            print(f"{path}: OK ({len(models)} model(s))")
        except (RhtError, OSError) as exc:
            print(f"{path}: {type(exc).__name__}: {exc}")
            status = 1
    return status


def _cmd_homotopy(args) -> int:
    for m in _load_models(args.files):
        space = m.fiber if isinstance(m, RelativeModel) else m
        top = args.max_degree or max(g.degree for g in space.gens)
        rows = {}
        for n in range(2, top + 1):
            names = [g.name for g in space.gens if g.degree == n]
            if names:
                rows[n] = (len(names), names)
        _report_degrees(args, space.name or "model", rows, bound=space.bound)
    return 0


def _cmd_cohomology(args) -> int:
    for m in _load_models(args.files):
        total = m.total if isinstance(m, RelativeModel) else m
        top = args.max_degree
        if top is None:
            top = total.bound if total.bound is not None else formal_dimension_estimate(total.gens)
        if top is None:
            raise RhtError("need --max-degree for a model with no bound and even generators")
        coh = cohomology(m, top)
        rows = {
            n: (dim, [rep.format() for rep in reps])
            for n, (dim, reps) in coh.items()
            if dim
        }
        _report_degrees(args, m.name or "model", rows, bound=total.bound)
    return 0


def _cmd_der_homology(args) -> int:
    for m in _load_models(args.files):
        scope = RELATIVE if isinstance(m, RelativeModel) else ABSOLUTE
        degrees = _parse_degrees(args.degrees, (1, top_shift(m)))
        rows = {}
        for n in degrees:
            h = der_homology(m, n, scope)
            labels = []
            for theta in h.derivations():
                parts = [
                    f"({theta.gens[i].name}, {val.format()})"
                    for i, val in sorted(theta.values.items())
                ]
                labels.append(" + ".join(parts))
            rows[n] = (h.dim, labels)
        _report_degrees(args, m.name or "model", rows)
    return 0


def _gottlieb_rows(result) -> dict[int, tuple[int, list[str]]]:
    return {
        n: (sub.dim, sub.basis_labels())
        for n, sub in sorted(result.per_degree.items())
    }


def _cmd_gottlieb(args) -> int:
    for m in _load_models(args.files):
        result = gottlieb(m, args.max_degree)
        _report_degrees(args, m.name or "model", _gottlieb_rows(result))
    return 0


def _cmd_fibre_gottlieb(args) -> int:
    for f in _fibrations(_load_models(args.files)):
        result = fibre_gottlieb(f, args.max_degree)
        _report_degrees(args, f.name or "fibration", _gottlieb_rows(result))
    return 0


def _cmd_connecting(args) -> int:
    for f in _fibrations(_load_models(args.files)):
        rows = {
            n: (sub.dim, sub.basis_labels())
            for n, sub in sorted(connecting_images(f).items())
        }
        _report_degrees(args, f.name or "fibration", rows)
    return 0


def _cmd_les_check(args) -> int:
    status = 0
    for f in _fibrations(_load_models(args.files)):
        degrees = _parse_degrees(args.degrees, (1, top_shift(f)))
        report = les_check(f, list(degrees))
        if args.json:
            doc = {
                "model": f.name or "fibration",
                "chain_level_ok": report.chain_level_ok,
                "exact": report.exact,
                "nodes": [
                    {
                        "node": nd.node,
                        "dim": nd.dim,
                        "rank_in": nd.rank_in,
                        "rank_out": nd.rank_out,
                        "exact": nd.exact,
                    }
                    for nd in report.nodes
                ],
            }
            print(json.dumps(doc, indent=2))
        else:
            print(f"model {f.name or 'fibration'}")
            for nd in report.nodes:
                flag = "ok" if nd.exact else "FAIL"
                print(
                    f"  {nd.node}: dim {nd.dim}, in {nd.rank_in}, out {nd.rank_out}  [{flag}]"
                )
            print("  exact" if report.exact else "  NOT exact")
        if not report.exact:
            status = 1
    return status


def _cmd_toral_check(args) -> int:
    for f in _fibrations(_load_models(args.files)):
        cert = toral_certificate(f, args.window)
        if args.json:
            doc = {
                "model": f.name or "fibration",
                "r": cert.r,
                "verdict": cert.verdict,
                "finite_through": cert.finite_through,
                "top_nonzero": cert.top_nonzero,
                "window": args.window,
            }
            print(json.dumps(doc, indent=2))
        else:
            extra = (
                f", top nonzero degree {cert.top_nonzero}"
                if cert.top_nonzero is not None
                else ""
            )
            print(
                f"{f.name or 'fibration'}: r={cert.r} {cert.verdict}"
                f" (checked through degree {cert.finite_through}{extra})"
            )
    return 0


def _catalog_from_files(args) -> Catalog:
    fibs = _fibrations(_load_models(args.files))
    entries = []
    for i, f in enumerate(fibs):
        entries.append((f.name or f"fibration-{i}", f))
    return Catalog(fibs[0].fiber, entries, source_paths=list(args.files))


def _cmd_depth(args) -> int:
    cat = _catalog_from_files(args)
    subspaces = cat.realized_subspaces(args.window, args.require_finite)
    result = depth_of_subspaces(subspaces)
    if args.json:
        doc = {"depth": result.depth, "witness": result.witness}
        print(json.dumps(doc, indent=2))
    else:
        chain = " > ".join(result.witness)
        print(f"depth {result.depth}  ({chain})")
    return 0


def _emit_poset(args, poset) -> None:
    if args.dot:
        Path(args.dot).write_text(render(poset, "dot"))
    if args.json:
        print(render(poset, "json"), end="")
    else:
        print(render(poset, "text"), end="")


def _cmd_poset(args) -> int:
    cat = _catalog_from_files(args)
    _emit_poset(args, build_poset(cat, args.window, args.require_finite))
    return 0


def _cmd_enumerate(args) -> int:
    models = _load_models(args.files)
    spaces = [m for m in models if isinstance(m, SullivanModel)]
    if len(spaces) != 2:
        raise RhtError("enumerate needs exactly two [space] models: fiber then base")
    fiber, base = spaces
    cat = enumerate_fibrations(
        fiber,
        base,
        coeff_set=_parse_coeffs(args.coeffs),
        require_finite=args.require_finite,
        window=args.window,
    )
    print(f"{len(cat.entries)} fibration(s) kept", file=sys.stderr)
    _emit_poset(args, build_poset(cat, args.window, args.require_finite))
    return 0


# ----------------------------------------------------------------------
# dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rht",
        description="Gottlieb groups, derivation homology, and fibration posets "
        "of Sullivan models over the rationals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("files", nargs="+", help="model files")
        p.add_argument("--degrees", help="degree range a..b or a single degree")
        p.add_argument("--max-degree", type=int, help="top degree to compute")
        p.add_argument("--window", type=int, default=6, help="finiteness window size")
        p.add_argument("--coeffs", default="0,1", help="enumeration coefficients")
        p.add_argument(
            "--require-finite",
            action="store_true",
            help="drop or reject entries failing the finiteness window check",
        )
        p.add_argument("--dot", help="write the Hasse diagram to this DOT file")
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, "parse and check model files")
    add("homotopy", _cmd_homotopy, "rational homotopy ranks from generator degrees")
    add("cohomology", _cmd_cohomology, "cohomology of the (total) algebra")
    add("der-homology", _cmd_der_homology, "derivation complex homology")
    add("gottlieb", _cmd_gottlieb, "rationalized Gottlieb group")
    add("fibre-gottlieb", _cmd_fibre_gottlieb, "fibre-restricted Gottlieb group")
    add("connecting", _cmd_connecting, "connecting image inside the Gottlieb group")
    add("les-check", _cmd_les_check, "ideal/relative/absolute exactness check")
    add("toral-check", _cmd_toral_check, "bounded almost-free torus certificate")
    add("depth", _cmd_depth, "depth of realized subspaces of a catalog")
    add("poset", _cmd_poset, "inclusion poset of realized subspaces")
    add("enumerate", _cmd_enumerate, "enumerate fibrations of a fiber over a base")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except COMPUTATION_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (RhtError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
