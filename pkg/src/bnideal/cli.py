"""Command-line interface: ``bnideal <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import cache as gbcache
from . import groebner as gbmod
from .algebra import DEFAULT_CHARACTERISTIC, Field, lex
from .bayes import Network, global_ideal, global_markov, local_ideal, local_markov


def _field(args) -> Field:
    return Field(args.prime)


def _network(args) -> Network:
    if args.net in _named():
        return Network.from_children(_named()[args.net], args.levels)
    net = Network.load(args.net)
    return net.with_levels(args.levels) if args.levels else net


def _named():
    from .harness import NAMED
    return NAMED


def _levels(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _ideal(args, net=None):
    net = net or _network(args)
    build = local_ideal if args.model == "local" else global_ideal
    return build(net, marginalized=not args.plain, field=_field(args))


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


# ----------------------------------------------------------------------------


def cmd_gen_ideal(args) -> int:
    net = _network(args)
    stmts = local_markov(net) if args.model == "local" else global_markov(net)
    I = _ideal(args, net)
    _emit({"statements": [str(s) for s in stmts], **I.to_json()}, args)
    return 0


def cmd_groebner(args) -> int:
    if args.ideal:
        from .ideals import Ideal
        I = Ideal.from_json(json.loads(Path(args.ideal).read_text()))
    else:
        I = _ideal(args)
    order = lex(I.ring.nvars) if args.order == "lex" else None
    basis = I.gb(order)
    out = {"order": basis.order.descriptor(), "size": len(basis.generators),
           "max_degree": basis.max_degree(),
           "squarefree_initial": basis.squarefree_initial(),
           "generators": [g.to_string() for g in basis.generators]}
    if all(g.is_homogeneous() for g in I.generators):
        h = gbmod.hilbert(basis)
        out.update(codim=h.codim, degree=h.degree, numerator=h.numerator)
    _emit(out, args)
    return 0


def cmd_kerphi(args) -> int:
    from .factorization import distinguished_component, kernel_phi
    from .ideals import equal
    net = _network(args)
    L = local_ideal(net, field=_field(args))
    out = {}
    routes = {}
    if args.route in ("elim", "both"):
        routes["elim"] = kernel_phi(net, L.ring)
    if args.route in ("sat", "both"):
        routes["sat"] = distinguished_component(L, net, full=args.full)
    for name, K in routes.items():
        h = gbmod.hilbert(K.gb())
        out[name] = {"codim": h.codim, "degree": h.degree,
                     "generators": [g.to_string() for g in K.gb().generators]}
    if args.route == "both":
        same = equal(routes["elim"], routes["sat"])
        out["equal"] = same
        _emit(out, args)
        if not same:
            print("error: elimination and saturation routes disagree", file=sys.stderr)
            return 2
        return 0
    _emit(out, args)
    return 0


def cmd_decompose(args) -> int:
    from .decomposition import is_radical, minimal_primes
    I = _ideal(args)
    dec = minimal_primes(I)
    rad = is_radical(I, certify=args.certify, components=dec.components if dec.complete else None)
    _emit({"complete": dec.complete, "components": len(dec.components),
           "radical": rad.status, "witness": rad.witness.to_string() if rad.witness else None,
           "primes": [[g.to_string() for g in P.gb().generators] for P in dec.components]}, args)
    return 0 if dec.complete else 1


def cmd_classify(args) -> int:
    from .harness import RunConfig, compare_with_golden, run_classification
    nets = []
    if args.net:
        nets = [args.net if args.net in _named() else Network.load(args.net)]
    mode = args.mode or ("single" if nets else "table1")
    config = RunConfig.from_env(mode=mode, allow_full=args.allow_full, networks=nets,
                                levels=args.levels, workers=args.workers,
                                time_budget=None if args.budget == 0 else args.budget,
                                cache_dir=args.cache, characteristic=args.prime,
                                certify=not args.no_certify, degree_cap=args.degree_cap)
    report = run_classification(config)
    if args.csv:
        Path(args.csv).write_text(report.csv())
    if args.json:
        Path(args.json).write_text(report.json() + "\n")
    if not args.csv and not args.json:
        sys.stdout.write(report.csv())
    if mode == "table1" and not args.levels:
        diff = compare_with_golden(report)
        for line in diff:
            print("mismatch:", line, file=sys.stderr)
        return 1 if diff else 0
    return 0


def cmd_secant(args) -> int:
    from . import secant as sec
    shape = sec.SegreShape(args.shape, args.r)
    out = {"shape": list(shape.levels), "r": shape.r, "expected": sec.expected_dimension(shape)}
    if args.task == "dim":
        out["actual"] = sec.terracini_dimension(shape, seed=args.seed, p=args.prime)
    elif args.task == "cubics":
        rep = sec.flattening_cubics(shape.levels)
        out.update(minors=len(rep.cubics), cubics=rep.span)
    elif args.task == "ideal":
        rep = sec.secant_ideal_small(shape, field=_field(args))
        out.update(actual=shape.ambient - rep.codim, degree=rep.degree, mingens=rep.mingens)
    elif args.task == "quartics":
        qs = sec.strassen_quartics()
        out.update(quartics=len(qs), generators=[q.to_string() for q in qs])
    _emit(out, args)
    return 0


def cmd_enumerate(args) -> int:
    from .harness import enumerate_dags
    nets = enumerate_dags(args.n)
    _emit({"n": args.n, "count": len(nets), "networks": [g.children_lists() for g in nets]}, args)
    return 0


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    env_prime = int(os.environ.get("BNIDEAL_PRIME", DEFAULT_CHARACTERISTIC))
    env_seed = int(os.environ.get("BNIDEAL_SEED", 0))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=env_prime, help="field characteristic")
    common.add_argument("--seed", type=int, default=env_seed)
    common.add_argument("--cache", default=os.environ.get("BNIDEAL_CACHE"),
                        help="directory for cached bases and rows")
    common.add_argument("--degree-cap", type=int, default=gbmod.DEFAULT_DEGREE_CAP)
    common.add_argument("--out", help="write JSON output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    netopts = argparse.ArgumentParser(add_help=False)
    netopts.add_argument("--net", required=True, help="network JSON file or a known name (e.g. G23)")
    netopts.add_argument("--levels", type=_levels, help="override levels, e.g. 2,3,2,2")
    netopts.add_argument("--model", choices=("local", "global"), default="local")
    netopts.add_argument("--plain", action="store_true",
                         help="use the original coordinates instead of marginalized ones")

    parser = argparse.ArgumentParser(prog="bnideal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-ideal", parents=[common, netopts], help="Markov ideal generators")
    p.set_defaults(func=cmd_gen_ideal)

    p = sub.add_parser("groebner", parents=[common], help="reduced Groebner basis and Hilbert data")
    p.add_argument("--net")
    p.add_argument("--ideal", help="ideal JSON file {ring, generators}")
    p.add_argument("--levels", type=_levels)
    p.add_argument("--model", choices=("local", "global"), default="local")
    p.add_argument("--plain", action="store_true")
    p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("kerphi", parents=[common], help="distinguished component")
    p.add_argument("--net", required=True)
    p.add_argument("--levels", type=_levels)
    p.add_argument("--route", choices=("elim", "sat", "both"), default="both")
    p.add_argument("--full", action="store_true", help="saturate by the full set of forms")
    p.set_defaults(func=cmd_kerphi)

    p = sub.add_parser("decompose", parents=[common, netopts], help="minimal primes")
    p.add_argument("--certify", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("classify", parents=[common], help="classification rows")
    p.add_argument("--net", help="single network file or name")
    p.add_argument("--levels", type=_levels)
    p.add_argument("--mode", choices=("table1", "five-sample", "five-full", "single"))
    p.add_argument("--allow-full", action="store_true", help="opt in to the five-full mode")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=float, default=600.0, help="seconds per row (0 = none)")
    p.add_argument("--no-certify", action="store_true")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("secant", parents=[common], help="secant varieties of Segre products")
    p.add_argument("--shape", type=_levels, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--task", choices=("dim", "cubics", "ideal", "quartics"), default="dim")
    p.set_defaults(func=cmd_secant)

    p = sub.add_parser("enumerate", parents=[common], help="DAGs up to isomorphism")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    gbmod.set_default_degree_cap(args.degree_cap)
    if args.cache:
        gbcache.configure(Path(args.cache) / "gb")
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
