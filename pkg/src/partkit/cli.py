"""Command-line entry point: ``partkit <subcommand> ...``.

Exit codes: 0 success, 1 computation failure (for example a certified
quasimodular fit failure), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .partitions import rational_to_json

# options whose values may start with '-' (negative coordinates)
_SIGNED_OPTIONS = ("--bbox", "--point", "--B")


class UsageError(Exception):
    pass


def _join_signed(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    return tuple(int(x) for x in text.split(",") if x.strip()) if text else ()


def _floats(text: str, sep: str, count: int) -> tuple[float, ...]:
    vals = tuple(float(x) for x in text.split(sep))
    if len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers separated by {sep!r}")
    return vals


def _bbox(text: str):
    return _floats(text, ":", 4)


def _pair(text: str):
    return _floats(text, ",", 2)


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out: str, argv: list[str], started: float, inputs=(), seed=None) -> Path:
    """Sidecar ``<out>.manifest.json``; kept apart so the output stays byte-stable."""
    manifest = {
        "command_line": ["partkit", *argv],
        "seed": seed,
        "tool_version": __version__,
        "input_digests": {p: _digest(p) for p in inputs},
        "wall_time_seconds": round(time.time() - started, 3),
        "output": out,
    }
    path = Path(str(out) + ".manifest.json")
    path.write_text(_dump(manifest) + "\n")
    return path


def _load_poly(path: str):
    from .dimers import LaurentPoly2

    return LaurentPoly2.from_json(Path(path).read_text())


def _load_graph(args):
    from .dimers import BUILTIN, PeriodicBipartiteGraph

    if args.graph:
        return PeriodicBipartiteGraph.from_json(Path(args.graph).read_text())
    if args.builtin in BUILTIN:
        return BUILTIN[args.builtin]()
    raise UsageError("need --graph FILE or --builtin {honeycomb,square,gapped-square}")


# -- subcommands ---------------------------------------------------------------


def cmd_hurwitz(args) -> int:
    from .hurwitz import BranchData, hurwitz_number, hurwitz_oracle

    data = BranchData.parse(args.target_genus, args.degree, args.profiles)
    value = hurwitz_number(data)
    oracle = hurwitz_oracle(data) if args.oracle else None
    if args.json:
        out = {"hurwitz_number": rational_to_json(value)}
        if oracle is not None:
            out["oracle"] = rational_to_json(oracle)
            out["agree"] = oracle == value
        print(_dump(out))
    else:
        print(_fmt_rational(value))
        if oracle is not None:
            print(f"oracle {_fmt_rational(oracle)} {'agrees' if oracle == value else 'DISAGREES'}")
    return 0 if oracle is None or oracle == value else 1


def cmd_gw(args) -> int:
    from .gw import StationaryInsertions, domain_genus, gwh_substitution_check, stationary_gw
    from .hurwitz import BranchData

    ins = StationaryInsertions(args.target_genus, args.degree, _ints(args.descendants))
    value = stationary_gw(ins)
    genus = domain_genus(ins)
    check = None
    if args.check_hurwitz:
        check = gwh_substitution_check(
            BranchData(ins.target_genus, ins.degree, tuple((k + 1,) for k in ins.descendants))
        )
    if args.json:
        out = {"gw": rational_to_json(value), "domain_genus": rational_to_json(genus)}
        if check:
            out["hurwitz_side"] = rational_to_json(check[0])
            out["gw_side"] = rational_to_json(check[1])
        print(_dump(out))
    else:
        print(_fmt_rational(value))
        if check:
            print(f"hurwitz {_fmt_rational(check[0])} gw {_fmt_rational(check[1])}")
    return 0


def cmd_quasimod_fit(args) -> int:
    from .qseries import UnderdeterminedFit, elliptic_gw_series, minimal_fit_weight, q_bracket, quasimodular_fit

    raw = elliptic_gw_series(_ints(args.descendants), args.order)
    series = raw if args.raw else q_bracket(raw)
    try:
        fit = quasimodular_fit(series, args.max_weight)
    except UnderdeterminedFit as exc:
        raise UsageError(str(exc)) from exc
    out = fit.to_json()
    out["series"] = "raw" if args.raw else "q-bracket (divided by sum p(d) q^d)"
    if fit.success:
        best = minimal_fit_weight(series, args.max_weight)
        out["minimal_weight"] = best.max_weight if best else None
    print(_dump(out))
    return 0 if fit.success else 1


def cmd_plancherel(args) -> int:
    from .plancherel import PMF_MAX_N, first_row_statistics, plancherel_pmf

    if args.pmf is not None:
        if args.pmf > PMF_MAX_N:
            raise UsageError(f"--pmf is limited to n <= {PMF_MAX_N}")
        pmf = plancherel_pmf(args.pmf)
        print(_dump([{"shape": list(k), "p": rational_to_json(v)} for k, v in pmf.items()]))
        return 0
    if args.n is None:
        raise UsageError("need --n or --pmf")
    print(_dump(first_row_statistics(args.n, args.samples, args.seed)))
    return 0


def cmd_dimer_count(args) -> int:
    from .dimers import finite_graph_oracle, planar_partition_function, torus_graph, torus_partition_function

    if args.builtin == "grid":
        if args.rows is None or args.cols is None:
            raise UsageError("--builtin grid needs --rows and --cols")
        print(planar_partition_function(args.rows, args.cols))
        return 0
    G = _load_graph(args)
    value = torus_partition_function(G, args.n)
    if args.json:
        out = {"partition_function": value, "n": args.n}
        if args.oracle:
            out["oracle"] = float(finite_graph_oracle(torus_graph(G, args.n)))
        print(_dump(out))
    else:
        print(f"{value:.12g}")
        if args.oracle:
            print(f"oracle {float(finite_graph_oracle(torus_graph(G, args.n))):.12g}")
    return 0


def cmd_spectral(args) -> int:
    from .dimers import spectral_polynomial

    P = spectral_polynomial(_load_graph(args), normalize=not args.raw)
    print(json.dumps(P.to_json()))
    return 0


def cmd_amoeba(args, argv, started) -> int:
    from .amoeba import harnack_area_test, rasterize_amoeba

    P = _load_poly(args.poly)
    raster = rasterize_amoeba(P, args.bbox, args.res, args.theta)
    side = raster.sidecar()
    side["harnack"] = harnack_area_test(P, raster.bbox, args.res, args.theta)
    if args.out:
        side["manifest"] = Path(args.out).name + ".manifest.json"
        Path(args.out).write_text(raster.to_pgm())
        Path(args.out + ".json").write_text(_dump(side) + "\n")
        write_manifest(args.out, argv, started, inputs=[args.poly])
    else:
        print(_dump(side))
    return 0


def cmd_ronkin(args) -> int:
    from .amoeba import ronkin

    P = _load_poly(args.poly)
    x, y = args.point
    print(_dump({"x": x, "y": y, "ronkin": ronkin(P, x, y, args.quad), "quad_order": args.quad}))
    return 0


def cmd_phase(args) -> int:
    from .amoeba import classify_phase

    P = _load_poly(args.poly)
    try:
        label = classify_phase(P, args.B, args.bbox, args.res, args.theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(label.value)
    return 0


def cmd_limit_shape(args, argv, started) -> int:
    from .amoeba import limit_shape_surface, surface_to_csv

    P = _load_poly(args.poly)
    text = surface_to_csv(limit_shape_surface(P, args.bbox, args.res, args.quad))
    if args.out:
        Path(args.out).write_text(text)
        write_manifest(args.out, argv, started, inputs=[args.poly])
    else:
        sys.stdout.write(text)
    return 0


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all()
    return 0 if all(r.passed for r in results) else 1


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partkit", description="Partition sums, Hurwitz/GW numbers and dimer models.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hurwitz", help="Hurwitz number of branched covers (Burnside character sum)")
    s.add_argument("--target-genus", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--profiles", default="", help='ramification profiles, e.g. "2,2;3"')
    s.add_argument("--oracle", action="store_true", help="cross-check by permutation enumeration")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("gw", help="stationary Gromov-Witten invariant <prod tau_k(omega)> of a target curve (disconnected)")
    s.add_argument("--target-genus", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--descendants", default="", help="k1,k2,...")
    s.add_argument("--check-hurwitz", action="store_true", help="compare with the f_{k+1} Hurwitz sum")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("quasimod-fit", help="fit the elliptic-curve GW generating series in Q[E2,E4,E6]")
    s.add_argument("--descendants", default="")
    s.add_argument("--max-weight", type=int, required=True)
    s.add_argument("--order", type=int, default=40)
    s.add_argument("--raw", action="store_true", help="fit the undivided series (expected to fail)")

    s = sub.add_parser("plancherel", help="Plancherel measure (dim lam)^2/n!: exact pmf or first-row statistics")
    s.add_argument("--n", type=int)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--pmf", type=int, metavar="N")

    s = sub.add_parser("dimer-count", help="dimer partition function (weighted perfect matchings) on G/nZ^2 or a planar grid")
    s.add_argument("--graph")
    s.add_argument("--builtin", choices=["grid", "honeycomb", "square", "gapped-square"])
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--rows", type=int)
    s.add_argument("--cols", type=int)
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("spectral", help="spectral polynomial P(z,w) = det K(z,w) as a JSON term list")
    s.add_argument("--graph")
    s.add_argument("--builtin", choices=["honeycomb", "square", "gapped-square"])
    s.add_argument("--raw", action="store_true", help="skip monomial normalization")

    s = sub.add_parser("amoeba", help="raster of the amoeba Log(P = 0) as PGM plus JSON sidecar")
    s.add_argument("--poly", required=True)
    s.add_argument("--bbox", type=_bbox, help="xmin:xmax:ymin:ymax")
    s.add_argument("--res", type=int, default=600)
    s.add_argument("--theta", type=int, default=720)
    s.add_argument("--out")

    s = sub.add_parser("ronkin", help="Ronkin function R(x,y), torus average of log|P|")
    s.add_argument("--poly", required=True)
    s.add_argument("--point", type=_pair, required=True, help="x,y")
    s.add_argument("--quad", type=int, default=256)

    s = sub.add_parser("phase", help="dimer phase (frozen/liquid/gaseous) at magnetic field B from the amoeba")
    s.add_argument("--poly", required=True)
    s.add_argument("--B", type=_pair, required=True, help="B1,B2")
    s.add_argument("--bbox", type=_bbox)
    s.add_argument("--res", type=int, default=400)
    s.add_argument("--theta", type=int, default=360)

    s = sub.add_parser("limit-shape", help="limit shape height -R(x,y) (minus the Ronkin function) as CSV")
    s.add_argument("--poly", required=True)
    s.add_argument("--bbox", type=_bbox)
    s.add_argument("--res", type=int, default=200)
    s.add_argument("--quad", type=int, default=256)
    s.add_argument("--out")

    sub.add_parser("selftest", help="run the acceptance checks (exact identities, oracles, numeric bounds)")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.time()
    parser = build_parser()
    try:
        args = parser.parse_args(_join_signed(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "hurwitz": cmd_hurwitz,
        "gw": cmd_gw,
        "quasimod-fit": cmd_quasimod_fit,
        "plancherel": cmd_plancherel,
        "dimer-count": cmd_dimer_count,
        "spectral": cmd_spectral,
        "ronkin": cmd_ronkin,
        "phase": cmd_phase,
        "selftest": cmd_selftest,
    }
    try:
        if args.command == "amoeba":
            return cmd_amoeba(args, argv, started)
        if args.command == "limit-shape":
            return cmd_limit_shape(args, argv, started)
        return handlers[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"partkit: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"partkit: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FloatingPointError) as exc:
        print(f"partkit: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
