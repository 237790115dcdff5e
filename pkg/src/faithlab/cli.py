"""Command-line interface: ``faithlab {analyze,alpha,seq,chartab,qthreshold,verify}``.

Exit codes: 0 success, 2 internal-consistency failure, 64 usage or parse
error, 65 resource limit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass

from . import alpha, build, chartab, faith, grp, seq, verify
from .errors import (
    BudgetExceeded,
    DimTooLarge,
    FaithlabError,
    LimitExceeded,
    NotPrimePower,
    OracleMismatch,
    OrderCapExceeded,
    ParseError,
    UnknownBuilder,
)

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_USAGE = 64
EXIT_RESOURCE = 65


@dataclass
class RunConfig:
    threads: int
    max_order: int
    seed: int
    cache: str | None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ParseError(f"{name}={raw!r} is not an integer") from None


def run_config(args: argparse.Namespace) -> RunConfig:
    threads = args.threads if args.threads is not None else _env_int("FAITHLAB_THREADS", os.cpu_count() or 1)
    max_order = args.max_order if args.max_order is not None else _env_int("FAITHLAB_MAX_ORDER", grp.DEFAULT_MAX_ORDER)
    seed = args.seed if args.seed is not None else _env_int("FAITHLAB_SEED", chartab.DEFAULT_SEED)
    return RunConfig(max(1, threads), max_order, seed, args.cache)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _add_group_args(p: argparse.ArgumentParser):
    p.add_argument("--builder", help="named builder: " + ", ".join(sorted(build.BUILDERS)))
    p.add_argument("--spec", help="JSON group descriptor file ('-' for stdin)")
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--invariants", type=int, nargs="+", help="invariant factors for the abelian builder")


_BUILDER_PARAMS = {
    "gqm": ("q", "m"),
    "cyclic": ("n",),
    "elementary_abelian": ("p", "r"),
    "abelian": ("invariants",),
    "dihedral": ("n",),
    "symmetric": ("n",),
    "alternating": ("n",),
    "quaternion8": (),
    "heisenberg27": (),
    "d8_central_product": (),
    "appendix_a": (),
}


def group_descriptor(args: argparse.Namespace) -> dict:
    if args.spec:
        try:
            text = sys.stdin.read() if args.spec == "-" else open(args.spec).read()
            return json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read group descriptor: {exc}") from None
    if not args.builder:
        raise ParseError("give --builder or --spec")
    if args.builder not in _BUILDER_PARAMS:
        raise UnknownBuilder(args.builder)
    params = {"name": args.builder}
    for key in _BUILDER_PARAMS[args.builder]:
        val = getattr(args, key)
        if val is None:
            if args.builder == "gqm" and key == "m":
                val = 1
            else:
                raise ParseError(f"builder {args.builder} needs --{key}")
        params[key] = val
    return {"builder": params}


def build_group(args: argparse.Namespace, cfg: RunConfig) -> tuple[grp.FiniteGroup, str]:
    desc = group_descriptor(args)
    os.environ["FAITHLAB_MAX_ORDER"] = str(cfg.max_order)
    G = build.from_descriptor(desc)
    key = hashlib.sha256(json.dumps(desc, sort_keys=True).encode()).hexdigest()[:16]
    return G, key


def _emit(obj: dict, path: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _fmt_threshold(t) -> str:
    if isinstance(t, faith.LowerBound):
        return f">= {t.n} (undetermined)"
    return "inf" if t == faith.INF else str(int(t))


# -- subcommands ------------------------------------------------------------

def cmd_analyze(args, cfg: RunConfig) -> int:
    G, key = build_group(args, cfg)
    table = None
    if args.oracle or args.q_oracle:
        table = chartab.cached_character_table(G, cache_dir=cfg.cache, key=key, seed=cfg.seed)
    rep = faith.analyze(G, oracle=args.oracle or args.q_oracle, q_oracle=args.q_oracle)
    out = rep.to_json()
    if table is not None:
        degs = Counter(table.degrees.tolist())
        out["characters"] = {
            "degrees": {str(d): c for d, c in sorted(degs.items())},
            "abelian_kernels": sum(grp.is_abelian(G, K) for K in table.kernels),
        }
    if args.json:
        _emit(out, args.json)
    if args.json != "-":
        print(f"group {G.name or key}: order {G.order}")
        print(f"  abelian socle order: {rep.socle_a_order}")
        print(f"  faithful irreducible representation: {'yes' if rep.gaschutz_faithful else 'no'}")
        print(f"  P-threshold: {_fmt_threshold(rep.p_threshold)}")
        print(f"  Q-threshold: {_fmt_threshold(rep.q_threshold)}")
        for o in rep.offenders:
            print(f"  offender: p={o.p} q={o.q} m={o.m} multiplicity={o.multiplicity} n={o.n}")
        if rep.witness is not None:
            print(f"  unfaithful witness: {rep.witness}")
        if rep.oracle_p_threshold is not None:
            print(f"  oracle P-threshold: {_fmt_threshold(rep.oracle_p_threshold)} (agrees)")
        if rep.oracle_q_threshold is not None:
            print(f"  oracle Q-threshold: {_fmt_threshold(rep.oracle_q_threshold)}")
        if table is not None:
            degs = ", ".join(f"{c} x deg {d}" for d, c in sorted(Counter(table.degrees.tolist()).items()))
            print(f"  characters: {degs}; abelian kernels: {out['characters']['abelian_kernels']}")
        for n in rep.notes:
            print(f"  note: {n}")
    return EXIT_OK


def cmd_alpha(args, cfg: RunConfig) -> int:
    res = alpha.alpha_search(args.q, args.m, node_limit=args.node_limit, threads=cfg.threads)
    if args.json:
        _emit(res.to_json(), args.json)
    if args.json != "-":
        print(f"alpha({args.q},{args.m}) = {res.alpha}  (lower bound {res.lower_bound}, "
              f"{res.nodes} nodes, {res.elapsed:.2f}s)")
        if args.witness:
            for v in res.witness_vectors:
                print(f"  {v}")
    return EXIT_OK


def cmd_seq(args, cfg: RunConfig) -> int:
    out: dict = {}
    terms = seq.generate(args.limit)
    out["terms"] = [t.to_json() for t in terms]
    if args.gaps:
        out["gaps"] = seq.gaps(args.limit).to_json()
    if args.goormaghtigh:
        out["goormaghtigh"] = [c.to_json() for c in seq.goormaghtigh(args.xmax, args.emax)]
    if args.json:
        _emit(out, args.json)
    if args.json != "-":
        print(f"{len(terms)} terms <= {args.limit}")
        for t in terms:
            reps = "  ".join(f"q={q},m={m}" for q, m in t.representations)
            print(f"{t.n:>8}  {reps}")
        if args.gaps:
            g = out["gaps"]
            print(f"largest gap: {g['largest']} after term #{g['largest_index']}")
        if args.goormaghtigh:
            for c in out["goormaghtigh"]:
                print(f"{c['value']} = repunit{tuple(c['first'])} = repunit{tuple(c['second'])}")
    return EXIT_OK


def cmd_chartab(args, cfg: RunConfig) -> int:
    G, key = build_group(args, cfg)
    T = chartab.cached_character_table(G, cache_dir=cfg.cache, key=key, seed=cfg.seed)
    out = {
        "order": G.order,
        "degrees": T.degrees.tolist(),
        "class_sizes": T.classes.sizes.tolist(),
        "kernels": [K.elements.tolist() for K in T.kernels],
    }
    if args.values:
        out["values"] = T.values.tolist()
    _emit(out, args.json or "-")
    return EXIT_OK


def cmd_qthreshold(args, cfg: RunConfig) -> int:
    G, key = build_group(args, cfg)
    chartab.cached_character_table(G, cache_dir=cfg.cache, key=key, seed=cfg.seed)
    res = faith.q_threshold_oracle(G, max_n=args.max_n)
    out = {"order": G.order, "q_threshold": faith.threshold_json(res.threshold), "witness": res.witness,
           "max_n": args.max_n}
    if args.json:
        _emit(out, args.json)
    if args.json != "-":
        print(f"Q-threshold: {_fmt_threshold(res.threshold)}" + ("" if res.threshold != faith.INF
                                                                  else f" (no failing set of size <= {args.max_n})"))
        if res.witness:
            print(f"  witness: {res.witness}")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    results = verify.run_all(quick=args.quick, threads=cfg.threads)
    if args.json:
        _emit({"results": [r.to_json() for r in results], "all_ok": all(r.ok for r in results)}, args.json)
    if args.json != "-":
        for r in results:
            print(r.line())
            for d in r.details:
                if d.startswith(("FAIL", "ERROR")):
                    print(f"      {d.splitlines()[0]}")
            if r.skipped:
                print(f"      skipped: {', '.join(r.skipped)}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="faithlab", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=None, help="worker count (env FAITHLAB_THREADS)")
    ap.add_argument("--max-order", type=int, default=None, help="group order cap (env FAITHLAB_MAX_ORDER)")
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="eigenspace-splitting seed (env FAITHLAB_SEED)")
    ap.add_argument("--cache", default=None, help="directory memoizing character tables")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="structural P/Q analysis of a group")
    _add_group_args(p)
    p.add_argument("--oracle", action="store_true", help="cross-check with the character-table oracle")
    p.add_argument("--q-oracle", action="store_true", help="also run the exact Q-threshold search (implies --oracle)")
    p.add_argument("--json", help="write the report as JSON ('-' for stdout only)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("alpha", help="compute alpha(q, m)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("seq", help="repunit sequence, gaps, and two-base coincidences")
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--gaps", action="store_true")
    p.add_argument("--goormaghtigh", action="store_true")
    p.add_argument("--xmax", type=int, default=100)
    p.add_argument("--emax", type=int, default=14)
    p.add_argument("--json")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("chartab", help="character table degrees, class sizes, kernels (JSON)")
    _add_group_args(p)
    p.add_argument("--values", action="store_true", help="include multiplicity vectors")
    p.add_argument("--json")
    p.set_defaults(func=cmd_chartab)

    p = sub.add_parser("qthreshold", help="exact Q-threshold search")
    _add_group_args(p)
    p.add_argument("--max-n", type=int, default=faith.DEFAULT_Q_MAX_N)
    p.add_argument("--json")
    p.set_defaults(func=cmd_qthreshold)

    p = sub.add_parser("verify", help="run the reproduction checks")
    p.add_argument("--quick", action="store_true", help="skip alpha(9,1) and Q-searches on groups above 120")
    p.add_argument("--json")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        cfg = run_config(args)
        return args.func(args, cfg)
    except OracleMismatch as exc:
        print(f"faithlab: consistency failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ParseError, UnknownBuilder, NotPrimePower, ValueError) as exc:
        print(f"faithlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrderCapExceeded, BudgetExceeded, LimitExceeded, DimTooLarge, MemoryError) as exc:
        print(f"faithlab: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FaithlabError as exc:
        print(f"faithlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
