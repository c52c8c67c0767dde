"""Batch command-line front end: order / region / search / simulate.

All tabular output is CSV (comma separator, '.' decimal point, LF endings,
UTF-8) and every run is deterministic given its flags, so repeated runs
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
import yaml

from .ordering import check_ordering
from .probability import (CapacityError, ValidationError, load_channel)
from .regions import (RatePolytope, RegionError, UnionRegion, fme_eliminate,
                      format_region, instantiate_template, parse_region,
                      polytope_equal, remove_redundant, RAW_ELIMINATIONS,
                      template_names)
from .search import (ChainSpec, BoundaryPoint, boundary_point, chain_labels,
                     inner_region)
from .simulate import (MessageLayout, build_layered_wiretap_code,
                       build_xor_multicast_code, exact_error_probability,
                       exact_leakage, mc_error_probability)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"  # + 0.0 folds -0.0 into 0


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def format_union(region: UnionRegion) -> str:
    blocks = []
    for i, piece in enumerate(region.pieces):
        blocks.append(f"# piece {i}\n" + format_region(piece))
    return "\n".join(blocks)


def parse_union(text: str) -> UnionRegion:
    chunks, cur = [], []
    for line in text.splitlines():
        if line.startswith("# piece") and cur:
            chunks.append("\n".join(cur))
            cur = []
        cur.append(line)
    if cur:
        chunks.append("\n".join(cur))
    return UnionRegion(tuple(parse_region(c) for c in chunks))


def emit_plot_data(points: list[BoundaryPoint], path) -> None:
    """CSV of swept boundary points: rate columns then weight columns."""
    if not points:
        raise ValidationError("no boundary points to emit")
    vars = list(points[0].rates)
    header = vars + [f"w_{v}" for v in vars]
    lines = [",".join(header)]
    for bp in points:
        row = [_fmt(bp.rates[v]) for v in vars] + [_fmt(bp.weights[v]) for v in vars]
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_order(args) -> int:
    ch = load_channel(args.channel)
    rel = args.relation.replace("-", "_")
    report = check_ordering(ch, args.strong, args.weak, rel)
    verdict = ">=" if report.holds else "!>="
    lines = [
        f"{rel}: {args.strong} {verdict} {args.weak}",
        f"holds: {str(report.holds).lower()}",
        f"margin: {_fmt(report.margin)}",
        f"conclusive: {str(report.conclusive).lower()}",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write_text(args.out, text)
    return EXIT_OK


def _load_values(path) -> dict:
    with open(path, encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, dict):
        raise ValidationError(f"values file {path} must map symbols to numbers")
    return {str(k): float(v) for k, v in raw.items()}


def _cmd_region(args) -> int:
    if args.action == "instantiate":
        values = _load_values(args.values)
        region = instantiate_template(args.template, values)
        text = format_union(region)
        if args.out:
            _write_text(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.action == "fme":
        values = _load_values(args.values)
        region = instantiate_template(args.template, values)
        if args.eliminate:
            drop = args.eliminate.split(",")
        else:
            drop = list(RAW_ELIMINATIONS.get(args.template, ()))
        if not drop:
            raise ValidationError(
                f"no variables to eliminate for template {args.template!r}; pass --eliminate")
        pieces = tuple(remove_redundant(fme_eliminate(p, drop)) for p in region.pieces)
        text = format_union(UnionRegion(pieces))
        if args.out:
            _write_text(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.action == "compare":
        with open(args.a, encoding="utf-8") as f:
            ra = parse_union(f.read())
        with open(args.b, encoding="utf-8") as f:
            rb = parse_union(f.read())
        if len(ra.pieces) == 1 and len(rb.pieces) == 1:
            equal, witness = polytope_equal(ra.pieces[0], rb.pieces[0])
        else:
            from .regions import region_subset
            ab, wit_ab = region_subset(ra, rb, seed=args.seed)
            ba, wit_ba = region_subset(rb, ra, seed=args.seed)
            equal, witness = ab and ba, wit_ab or wit_ba
        sys.stdout.write(f"equal: {str(equal).lower()}\n")
        if witness is not None:
            pt = ",".join(f"{k}={_fmt(v)}" for k, v in witness.items())
            sys.stdout.write(f"witness: {pt}\n")
        return EXIT_OK
    raise ValidationError(f"unknown region action {args.action!r}")


def _parse_grid(text: str) -> float:
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def _cmd_search(args) -> int:
    ch = load_channel(args.channel)
    labels = chain_labels(args.template)
    if args.layers:
        layers = tuple(int(x) for x in args.layers.split(",")) if args.layers != "-" else ()
    else:
        layers = tuple(1 for _ in labels)
    spec = ChainSpec(labels, layers, bound_rule=args.bound_rule)
    grid = _parse_grid(args.grid)
    if args.sweep:
        hull, points = inner_region(ch, args.template, spec, weight_count=args.sweep,
                                    grid_step=grid, restarts=args.restarts,
                                    budget=args.budget, seed=args.seed,
                                    threads=args.threads)
        if args.out:
            emit_plot_data(points, args.out)
        best = points[0]
    else:
        weights = [float(w) for w in args.weights.split(",")]
        best = boundary_point(ch, args.template, weights, spec, grid_step=grid,
                              restarts=args.restarts, budget=args.budget,
                              seed=args.seed, threads=args.threads)
        if args.out:
            emit_plot_data([best], args.out)
    sys.stdout.write(f"template: {args.template}\n")
    sys.stdout.write(f"value: {_fmt(best.value)}\n")
    for v in best.rates:
        sys.stdout.write(f"{v}: {_fmt(best.rates[v])}\n")
    return EXIT_OK


def _parse_layout(text: str) -> MessageLayout:
    kwargs = {}
    if text:
        for item in text.split(","):
            k, _, v = item.partition("=")
            if not _:
                raise ValidationError(f"layout item {item!r} must look like m0=2")
            kwargs[k.strip()] = int(v)
    try:
        return MessageLayout(**kwargs)
    except TypeError as e:
        raise ValidationError(f"bad layout field: {e}") from None


def _load_chains(path) -> dict:
    with open(path, encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, dict):
        raise ValidationError(f"chains file {path} must map layer names to arrays")
    return {str(k): np.asarray(v, float) for k, v in raw.items()}


def _cmd_simulate(args) -> int:
    ch = load_channel(args.channel)
    layout = _parse_layout(args.layout)
    if args.scheme == "xor":
        if layout.m1 != layout.m2:
            raise ValidationError(
                f"xor scheme needs |M1| = |M2|, got {layout.m1} and {layout.m2}")
        cb = build_xor_multicast_code(ch, args.n, layout.m1, seed=args.seed)
    else:
        if not args.chains:
            raise ValidationError("layered schemes need --chains FILE")
        chains = _load_chains(args.chains)
        cb = build_layered_wiretap_code(ch, args.n, layout, chains,
                                        scheme=args.scheme, seed=args.seed)
    report = exact_leakage(cb, ch, criterion=args.criterion)
    rows = [("quantity", "value", "method", "samples")]
    for name in sorted(report.quantities):
        rows.append((name, _fmt(report.quantities[name]), report.method, "0"))
    if args.samples:
        err = mc_error_probability(cb, ch, args.samples, seed=args.seed)
        rows.append(("P(error)", _fmt(err.value), "monte_carlo", str(args.samples)))
        rows.append(("P(error) 95% half-width", _fmt(err.half_width),
                     "monte_carlo", str(args.samples)))
    else:
        err = exact_error_probability(cb, ch)
        rows.append(("P(error)", _fmt(err.value), "exact", "0"))
    text = "\n".join(",".join(r) for r in rows) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wtbc",
                                description="Secrecy rate regions of the three-receiver "
                                            "wiretap broadcast channel: ordering checks, "
                                            "region algebra, boundary search and toy-code "
                                            "simulation.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="global RNG seed (default 0)")
        sp.add_argument("--out", default=None, help="output file path")
        sp.add_argument("--threads", type=int, default=1, help="worker cap")
        sp.add_argument("--budget", type=int, default=10 ** 6, help="enumeration budget")

    po = sub.add_parser("order", help="decide a channel ordering relation")
    po.add_argument("--channel", required=True)
    po.add_argument("--relation", required=True,
                    choices=["degraded", "less-noisy", "more-capable"])
    po.add_argument("--strong", default="Y1", help="claimed stronger output")
    po.add_argument("--weak", default="Z", help="claimed weaker output")
    common(po)

    pr = sub.add_parser("region", help="instantiate, project or compare rate regions")
    pr.add_argument("action", choices=["instantiate", "fme", "compare"])
    pr.add_argument("--template", default=None, choices=template_names())
    pr.add_argument("--values", default=None, help="YAML file of info-symbol values")
    pr.add_argument("--eliminate", default=None, help="comma list of vars to project out")
    pr.add_argument("--a", default=None, help="first region file (compare)")
    pr.add_argument("--b", default=None, help="second region file (compare)")
    common(pr)

    ps = sub.add_parser("search", help="search auxiliary chains for boundary points")
    ps.add_argument("--channel", required=True)
    ps.add_argument("--template", required=True, choices=template_names())
    ps.add_argument("--weights", default=None, help="comma list, one per rate variable")
    ps.add_argument("--grid", default="1/8", help="simplex grid step, e.g. 1/16")
    ps.add_argument("--layers", default=None, help="auxiliary sizes, e.g. 2,1")
    ps.add_argument("--restarts", type=int, default=0)
    ps.add_argument("--sweep", type=int, default=0, help="weight-fan size (0 = single point)")
    ps.add_argument("--bound-rule", default="default", choices=["default", "thm1"])
    common(ps)

    pm = sub.add_parser("simulate", help="build a toy code and report error and leakage")
    pm.add_argument("--channel", required=True)
    pm.add_argument("--scheme", required=True, choices=["xor", "joint", "individual"])
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--layout", default="", help="sizes, e.g. m0=2,mr=4")
    pm.add_argument("--chains", default=None, help="YAML of chain conditionals")
    pm.add_argument("--criterion", default="joint", choices=["joint", "individual"])
    pm.add_argument("--samples", type=int, default=0,
                    help="Monte-Carlo samples for the error (0 = exact)")
    common(pm)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "order":
            return _cmd_order(args)
        if args.command == "region":
            return _cmd_region(args)
        if args.command == "search":
            return _cmd_search(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        raise ValidationError(f"unknown command {args.command!r}")
    except (ValidationError, RegionError, CapacityError, ValueError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VALIDATION
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
