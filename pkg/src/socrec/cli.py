"""Command-line front-end.

Exit codes: 0 success, 1 runtime/data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import jsonfmt
from .evaluation import (SplitSpec, SyntheticParams, generate_synthetic, measure_runtime,
                         run_coldstart_sweep, run_evaluation, run_profile_sweep, split_train_test)
from .ingestion import dump_jsonl, ingest, load_jsonl
from .model import AlgorithmId
from .recommenders import build_item_index, recommend


def _algorithm(text):
    try:
        return AlgorithmId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socrec", description="Social marketplace recommender")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p):
        p.add_argument("--data", action="append", required=True, metavar="PATH",
                       help="JSONL record file; repeat for several files")
        p.add_argument("-k", type=_positive, default=10)

    g = sub.add_parser("generate", help="write a seeded synthetic dataset")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--users", type=_positive, default=1000)
    g.add_argument("--items", type=_positive, default=500)
    g.add_argument("--communities", type=_positive, default=10)
    g.add_argument("--purchases", type=_positive, default=10, help="purchases per user")
    g.add_argument("--social-fraction", type=float, default=0.5)
    g.add_argument("-o", "--output", required=True)

    r = sub.add_parser("recommend", help="print recommendations for one user as JSON")
    data_args(r)
    r.add_argument("--algo", type=_algorithm, required=True)
    r.add_argument("--user", required=True)

    e = sub.add_parser("evaluate", help="benchmark algorithms on a temporal split")
    data_args(e)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--algo", type=_algorithm, action="append", help="restrict to these algorithms")
    e.add_argument("--timing", action="store_true", help="include mean runtime (not reproducible)")
    e.add_argument("-o", "--output")

    s = sub.add_parser("sweep", help="run an experiment sweep and write a TSV series")
    s.add_argument("kind", choices=("profile", "coldstart"))
    data_args(s)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", "--output")

    t = sub.add_parser("runtime", help="mean per-user recommendation time in milliseconds")
    data_args(t)
    t.add_argument("--algo", type=_algorithm, required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--sample", type=_positive, default=100, help="number of users to time")
    t.add_argument("--repetitions", type=_positive, default=3)

    v = sub.add_parser("serve", help="run the HTTP service")
    v.add_argument("--addr", help="HOST:PORT (default $SOCREC_ADDR or 127.0.0.1:8080)")
    return parser


def _load(paths):
    records = []
    for path in paths:
        records.extend(load_jsonl(path))
    return ingest(records)


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on usage error, 0 on --help
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.command == "generate":
            params = SyntheticParams(user_count=args.users, item_count=args.items,
                                     community_count=args.communities,
                                     purchases_per_user=args.purchases,
                                     social_fraction=args.social_fraction)
            dump_jsonl(generate_synthetic(params, args.seed), args.output)
        elif args.command == "recommend":
            dataset = _load(args.data)
            recs = recommend(args.algo, args.user, dataset, build_item_index(dataset), args.k)
            print(jsonfmt.recommendations_to_json(recs))
        elif args.command == "evaluate":
            algorithms = args.algo or list(AlgorithmId)
            report = run_evaluation(_load(args.data), algorithms, args.k, args.seed,
                                    measure_runtime=args.timing)
            _emit(report.to_json() + "\n", args.output)
        elif args.command == "sweep":
            run = run_profile_sweep if args.kind == "profile" else run_coldstart_sweep
            _emit(run(_load(args.data), SplitSpec(), args.seed, args.k).to_tsv(), args.output)
        elif args.command == "runtime":
            train, test_sets = split_train_test(_load(args.data), SplitSpec(), args.seed)
            users = sorted(test_sets)
            users = random.Random(args.seed).sample(users, min(args.sample, len(users)))
            ms = measure_runtime(args.algo, train, build_item_index(train), users,
                                 args.repetitions, args.k)
            print(f"{args.algo.value}\t{jsonfmt.format_number(ms)}")
        elif args.command == "serve":
            from .service.app import serve
            serve(args.addr)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
