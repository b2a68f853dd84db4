"""Command-line front end.

Subcommands map onto the library operations as recorded in
:data:`OP_DISPATCH`; output is deterministic for a fixed argv and seed, exact
rationals are always rendered as ``num/den`` strings, and every stochastic
command requires an explicit ``--seed``.  Exit codes: 0 on success, 1 on a
domain error (singular Gram matrix, budget or leg-bound violations, parse
errors), 2 on usage errors.

A config file in ``key=value`` form (path from ``--config`` or the
``PARTCAT_CONFIG`` environment variable) can override the run defaults; flags
take precedence over the file.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

from . import classify, laws, tensors, weingarten
from .categories import (
    BASE_FAMILIES,
    CategoryId,
    axioms_hold,
    category_table,
    enumerate_category,
    generate,
    member,
    parse_category,
    special_partition,
)
from .exact import frac_str
from .partitions import (
    DEFAULT_LEG_BOUND,
    LegBoundError,
    ParseError,
    Partition,
    ShapeMismatchError,
    enumerate_partitions,
    parse,
)
from .tensors import BudgetError, DEFAULT_BUDGET
from .weingarten import GramSingularError

#: every library operation and the unique subcommand exposing it.
OP_DISPATCH = {
    # partitions
    "parse": "member",
    "tensor": "member",
    "compose": "member",
    "involute": "member",
    "rotate": "member",
    "join": "member",
    "block_count": "member",
    "block_sizes": "member",
    "is_noncrossing": "member",
    "enumerate": "enum",
    "subpartitions": "enum",
    # categories
    "member": "member",
    "axioms_hold": "verify",
    "generate": "closure",
    "special_partition": "member",
    # tensor operators and groups
    "delta": "integrate",
    "build_operator": "sample",
    "sample": "sample",
    "intertwines": "sample",
    "mc_fixed_dim": "sample",
    "gram_from_vectors": "gram",
    # weingarten
    "gram_matrix": "gram",
    "weingarten_matrix": "weingarten",
    "haar_integral": "integrate",
    "moment": "moments",
    "asymptotic_moment": "asymptotic",
    # laws
    "law_moments": "law-compare",
    "balanced_recurrence": "recurrence",
    "law_compare": "law-compare",
    # classify
    "apply_capping": "member",
    "lambda_set": "verify",
    "associated_easy_group": "verify",
    "verify_block_size_lemma": "verify",
    "verify_capping_descent": "verify",
    "verify_difference_generators": "verify",
    "verify_pairing_trichotomy": "verify",
    "verify_cubic_ring_relations": "verify",
}

SUBCOMMANDS = (
    "enum", "member", "gram", "weingarten", "integrate", "moments",
    "asymptotic", "law-compare", "closure", "verify", "sample", "recurrence",
)


@dataclass(frozen=True)
class RunConfig:
    leg_bound: int = DEFAULT_LEG_BOUND
    budget: int = DEFAULT_BUDGET
    seed: int | None = None
    samples: int = 100_000
    format: str = "text"
    output: str | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.leg_bound < 0 or self.budget <= 0 or self.samples <= 0:
            raise ValueError("bounds must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.format not in ("text", "json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")


def load_config(path: str | None) -> RunConfig:
    """Build a RunConfig from a key=value file (or the defaults)."""
    if path is None:
        path = os.environ.get("PARTCAT_CONFIG")
    cfg = RunConfig()
    if not path:
        return cfg
    overrides: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in ("leg_bound", "budget", "samples", "jobs"):
                overrides[key] = int(value)
            elif key == "seed":
                overrides[key] = int(value)
            elif key in ("format", "output"):
                overrides[key] = value
            else:
                raise ValueError(f"unknown config key {key!r}")
    return replace(cfg, **overrides)


class _CliError(Exception):
    """Domain error carrying the library error name."""

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")


class _UsageError(Exception):
    """Bad flag combination; exits with status 2."""


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        upper, lower = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("shape must be 'k,l'") from None
    return upper, lower


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("indices must be comma-separated") from None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def _category(text: str) -> CategoryId:
    try:
        return parse_category(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _require_seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise _UsageError("a --seed is mandatory for stochastic commands")
    return cfg.seed


def _matrix_output(cfg: RunConfig, matrix) -> str:
    if cfg.format == "json":
        return matrix.to_json() + "\n"
    if cfg.format == "csv":
        return matrix.to_csv()
    lines = [" | ".join(frac_str(x) for x in row) for row in matrix.data]
    lines.append(f"basis: {len(matrix.basis)} diagrams")
    return "\n".join(lines) + "\n"


# -- subcommand handlers ---------------------------------------------------------


def _cmd_enum(args, cfg: RunConfig) -> str:
    if args.subpartitions_of is not None:
        parts = list(parse(args.subpartitions_of).subpartitions())
    else:
        upper, lower = args.shape
        predicate = None
        if args.category is not None:
            cat = args.category
            predicate = lambda p: member(cat, p)
        parts = enumerate_partitions(
            upper, lower, predicate, leg_bound=cfg.leg_bound
        )
    if args.count:
        total = sum(1 for _ in parts)
        return f"{total}\n"
    listing = [str(p) for p in parts]
    if cfg.format == "json":
        return json.dumps({"partitions": listing}, indent=2) + "\n"
    return "".join(line + "\n" for line in listing)


def _cmd_member(args, cfg: RunConfig) -> str:
    if args.special is not None:
        p = special_partition(args.special, args.param)
    else:
        p = parse(args.partition)
    if args.op is not None:
        other = parse(args.with_partition) if args.with_partition else None
        if args.op in ("tensor", "compose", "join") and other is None:
            raise _UsageError(f"--op {args.op} needs --with")
        if args.op == "tensor":
            result: object = p.tensor(other)
        elif args.op == "compose":
            q, loops = p.compose(other)
            result = f"{q}  [loops={loops}]"
        elif args.op == "join":
            result = p.join(other)
        elif args.op == "involute":
            result = p.involute()
        elif args.op == "rotate":
            result = p.rotate(args.side, args.frm)
        elif args.op == "cap":
            capping = classify.Capping(args.cap_kind, tuple(args.cap_positions))
            result = classify.apply_capping(p, capping)
        else:
            raise _UsageError(f"unknown --op {args.op}")
        return f"{result}\n"
    info = {
        "partition": str(p),
        "shape": [p.upper, p.lower],
        "block_count": p.block_count,
        "block_sizes": list(p.block_sizes()),
        "noncrossing": p.is_noncrossing(),
    }
    if args.category is not None:
        info["category"] = str(args.category)
        info["member"] = member(args.category, p)
    if cfg.format == "json":
        return json.dumps(info, indent=2) + "\n"
    if args.category is not None:
        return f"{str(info['member']).lower()}\n"
    return "".join(f"{key}: {value}\n" for key, value in info.items())


def _cmd_gram(args, cfg: RunConfig) -> str:
    if args.method == "vectors":
        basis = tuple(
            enumerate_category(args.category, 0, args.k, leg_bound=cfg.leg_bound)
        )
        matrix = tensors.gram_from_vectors(basis, args.n, budget=cfg.budget)
    else:
        matrix = weingarten.gram_matrix(args.category, args.k, args.n, cfg.leg_bound)
    return _matrix_output(cfg, matrix)


def _cmd_weingarten(args, cfg: RunConfig) -> str:
    matrix = weingarten.weingarten_matrix(args.category, args.k, args.n, cfg.leg_bound)
    return _matrix_output(cfg, matrix)


def _cmd_integrate(args, cfg: RunConfig) -> str:
    if args.delta_of is not None:
        p = parse(args.delta_of)
        value = tensors.delta(p, args.i, args.j, args.n)
        return f"{value}\n"
    if args.group is not None:
        value = tensors.exact_haar_integral(
            args.group, args.n, args.i, args.j, args.s
        )
    else:
        value = weingarten.haar_integral(args.category, args.n, args.i, args.j)
    if cfg.format == "json":
        return json.dumps({"integral": frac_str(value)}) + "\n"
    return frac_str(value) + "\n"


def _cmd_moments(args, cfg: RunConfig) -> str:
    rows = []
    for k in range(1, args.max_k + 1):
        value = weingarten.moment(args.category, args.n, k, args.m)
        rows.append((args.category, k, args.n, args.m, value))
    if cfg.format == "csv":
        return weingarten.moment_table_csv(rows)
    if cfg.format == "json":
        return json.dumps(
            {
                "moments": [
                    {"k": k, "n": n, "m": m, "value": frac_str(v)}
                    for _, k, n, m, v in rows
                ]
            },
            indent=2,
        ) + "\n"
    return "".join(f"k={k}: {frac_str(v)}\n" for _, k, _, _, v in rows)


def _cmd_asymptotic(args, cfg: RunConfig) -> str:
    value = weingarten.asymptotic_moment(args.category, args.k, args.t)
    if cfg.format == "json":
        return json.dumps({"asymptotic_moment": frac_str(value)}) + "\n"
    return frac_str(value) + "\n"


def _cmd_law_compare(args, cfg: RunConfig) -> str:
    if args.reference_only:
        series = laws.law_moments(args.law, args.t, args.max_k)
        lines = [
            f"{order}: {frac_str(value)}"
            for order, value in zip(series.orders, series.values)
        ]
        return "".join(line + "\n" for line in lines)
    seed = None
    if args.law == "squeezed_s_bessel":
        seed = _require_seed(cfg)
    report = laws.law_compare(
        args.category,
        args.law,
        args.t,
        args.max_k,
        args.n_list,
        s=args.s,
        samples=cfg.samples,
        seed=seed,
    )
    if cfg.format == "json":
        payload = {
            "category": report.category,
            "law": report.law,
            "t": str(report.t),
            "rows": [
                {
                    "k": r.k,
                    "n": r.n,
                    "m": r.m,
                    "value": frac_str(r.value),
                    "reference": frac_str(r.reference)
                    if isinstance(r.reference, Fraction)
                    else r.reference,
                    "abs_dev": r.abs_dev,
                }
                for r in report.rows
            ],
            "convergent": report.convergent,
        }
        return json.dumps(payload, indent=2) + "\n"
    return report.to_csv()


def _cmd_closure(args, cfg: RunConfig) -> str:
    gens = [parse(text) for text in args.generators]
    target = None
    if args.equals_category is not None:
        target = category_table(args.equals_category, cfg.leg_bound)
    closure = generate(gens, args.base, cfg.leg_bound, target=target)
    by_shape: dict[str, int] = {}
    for p in sorted(closure.table, key=lambda q: (q.legs, q.upper, q.blocks)):
        key = f"({p.upper},{p.lower})"
        by_shape[key] = by_shape.get(key, 0) + 1
    payload = {
        "generators": [str(g) for g in gens],
        "base": str(args.base) if args.base else None,
        "leg_bound": cfg.leg_bound,
        "size": len(closure.table),
        "by_shape": by_shape,
    }
    if target is not None:
        payload["equals_category"] = closure.same_table(target)
    if cfg.format == "json":
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"{key}: {value}" for key, value in payload.items()]
    return "".join(line + "\n" for line in lines)


_VERIFY_DEFAULT_BOUNDS = {
    "axioms": 8,
    "lambda": 8,
    "associated": 6,
    "block-sizes": 6,
    "trichotomy": 6,
    "ring-relations": 8,
}


def _cmd_verify(args, cfg: RunConfig) -> str:
    check = args.check
    explicit = getattr(args, "leg_bound", None)
    if check == "capping-descent":
        default = 8 if args.case in (1, 2) else 6
    elif check == "generators":
        default = classify.GENERATOR_CASE_BOUNDS.get(args.case, 6)
    else:
        default = _VERIFY_DEFAULT_BOUNDS.get(check, DEFAULT_LEG_BOUND)
    bound = explicit if explicit is not None else default
    if check == "axioms":
        report = axioms_hold(args.category, bound).to_dict()
    elif check == "lambda":
        values = sorted(classify.lambda_set(args.category, bound))
        report = {
            "check": "lambda",
            "category": str(args.category),
            "bound": bound,
            "block_sizes": values,
        }
    elif check == "associated":
        assoc = classify.associated_easy_group(args.category, bound)
        report = {
            "check": "associated",
            "category": str(args.category),
            "bound": bound,
            "associated": str(assoc),
        }
    elif check == "block-sizes":
        report = classify.verify_block_size_lemma(args.category, bound).to_dict()
    elif check == "capping-descent":
        report = classify.verify_capping_descent(
            args.case, bound, jobs=cfg.jobs
        ).to_dict()
    elif check == "generators":
        samples = (
            [parse(text) for text in args.sample_partitions]
            if args.sample_partitions
            else None
        )
        report = classify.verify_difference_generators(
            args.case, samples, bound
        ).to_dict()
    elif check == "trichotomy":
        report = classify.verify_pairing_trichotomy(bound).to_dict()
    elif check == "ring-relations":
        report = classify.verify_cubic_ring_relations(args.k_max, bound).to_dict()
    else:
        raise _UsageError(f"unknown check {check!r}")
    if cfg.format == "csv":
        raise _UsageError("verify reports are text or json")
    if cfg.format == "json":
        return json.dumps(report, indent=2) + "\n"
    return "".join(f"{key}: {value}\n" for key, value in report.items())


def _format_matrix_entries(matrix) -> list[list[str]]:
    out = []
    for row in matrix:
        formatted = []
        for x in row:
            if isinstance(x, complex):
                formatted.append(f"{x.real:.12g}{x.imag:+.12g}j")
            else:
                formatted.append(f"{float(x):.12g}")
        out.append(formatted)
    return out


def _cmd_sample(args, cfg: RunConfig) -> str:
    if args.operator is not None:
        op = tensors.build_operator(parse(args.operator), args.n, budget=cfg.budget)
        dense = op.toarray()
        if cfg.format == "json":
            return json.dumps({"operator": dense.tolist()}) + "\n"
        return "".join(
            " ".join(str(int(x)) for x in row) + "\n" for row in dense
        )
    if args.group is None:
        raise _UsageError("--group is required unless --operator is given")
    seed = _require_seed(cfg)
    if args.fixed_dim is not None:
        mean, err = tensors.mc_fixed_dim(
            args.group, args.n, args.fixed_dim, cfg.samples, seed, args.s,
            budget=cfg.budget,
        )
        payload = {"estimate": mean, "stderr": err, "samples": cfg.samples}
        if cfg.format == "json":
            return json.dumps(payload) + "\n"
        return f"{mean!r} +- {err!r}\n"
    g = tensors.sample(args.group, args.n, seed, args.s)
    if args.intertwines is not None:
        ok, residual = tensors.intertwines(
            parse(args.intertwines), g, budget=cfg.budget
        )
        payload = {"intertwines": ok, "residual": residual}
        if cfg.format == "json":
            return json.dumps(payload) + "\n"
        return f"{str(ok).lower()} residual={residual!r}\n"
    entries = _format_matrix_entries(g.matrix)
    if cfg.format == "json":
        return json.dumps({"group": args.group, "n": args.n, "matrix": entries}) + "\n"
    if cfg.format == "csv":
        return "".join(",".join(row) + "\n" for row in entries)
    return "".join(" ".join(row) + "\n" for row in entries)


def _cmd_recurrence(args, cfg: RunConfig) -> str:
    series = laws.balanced_recurrence(args.max_k)
    if cfg.format == "json":
        return json.dumps(
            {
                "orders": list(series.orders),
                "values": [frac_str(v) for v in series.values],
            }
        ) + "\n"
    if cfg.format == "csv":
        lines = ["order,value_num,value_den"]
        for order, value in zip(series.orders, series.values):
            lines.append(f"{order},{value.numerator},{value.denominator}")
        return "\n".join(lines) + "\n"
    return "".join(
        f"c_{order // 2} = {frac_str(value)}\n"
        for order, value in zip(series.orders, series.values)
    )


# -- argument parsing --------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    """Run-config options, usable both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="path to a key=value config file")
    common.add_argument("--max-legs", type=int, dest="leg_bound")
    common.add_argument("--budget", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--format", choices=("text", "json", "csv"))
    common.add_argument("--output")
    common.add_argument("--jobs", type=int)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="partcat",
        description="exact partition-category calculus",
        parents=[common],
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, help: str):
        return sub.add_parser(name, help=help, parents=[common], allow_abbrev=False)

    p = add_parser("enum", help="enumerate partitions")
    p.add_argument("--shape", type=_parse_shape, default=(0, 0))
    p.add_argument("--category", type=_category)
    p.add_argument("--count", action="store_true")
    p.add_argument("--subpartitions-of")

    p = add_parser("member", help="inspect a partition / apply diagram ops")
    p.add_argument("--partition")
    p.add_argument("--special", choices=(
        "half_commutation", "s_mixing", "k_cubic", "ultracubic_generator"))
    p.add_argument("--param", type=int)
    p.add_argument("--category", type=_category)
    p.add_argument("--op", choices=(
        "tensor", "compose", "join", "involute", "rotate", "cap"))
    p.add_argument("--with", dest="with_partition")
    p.add_argument("--side", choices=("left", "right"), default="right")
    p.add_argument("--from", dest="frm", choices=("top", "bottom"), default="top")
    p.add_argument("--cap-kind", choices=classify.CAPPING_KINDS)
    p.add_argument("--cap-positions", type=int, nargs="+", default=())

    p = add_parser("gram", help="Gram matrix of a category")
    p.add_argument("--category", type=_category, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("joins", "vectors"), default="joins")

    p = add_parser("weingarten", help="Weingarten matrix of a category")
    p.add_argument("--category", type=_category, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add_parser("integrate", help="Haar integrals of coordinate words")
    p.add_argument("--category", type=_category)
    p.add_argument("--group", choices=tensors.GROUP_TAGS)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=_parse_indices, required=True)
    p.add_argument("--j", type=_parse_indices, required=True)
    p.add_argument("--delta-of")

    p = add_parser("moments", help="finite-n truncated character moments")
    p.add_argument("--category", type=_category, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-k", type=int, default=4)

    p = add_parser("asymptotic", help="asymptotic truncated moments")
    p.add_argument("--category", type=_category, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=_parse_fraction, default=Fraction(1))

    p = add_parser("law-compare", help="finite moments against a limit law")
    p.add_argument("--category", type=_category)
    p.add_argument("--law", choices=laws.LAW_NAMES, required=True)
    p.add_argument("--t", type=_parse_fraction, default=Fraction(1))
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--n-list", type=_parse_indices, default=(8, 16, 32))
    p.add_argument("--s", type=int)
    p.add_argument("--reference-only", action="store_true")

    p = add_parser("closure", help="bounded categorical closure")
    p.add_argument("--generators", nargs="+", required=True)
    p.add_argument("--base", type=_category)
    p.add_argument("--equals-category", type=_category)

    p = add_parser("verify", help="bounded verification sweeps")
    p.add_argument("--check", required=True, choices=(
        "axioms", "lambda", "associated", "block-sizes", "capping-descent",
        "generators", "trichotomy", "ring-relations"))
    p.add_argument("--category", type=_category)
    p.add_argument("--case", type=int)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--sample-partitions", nargs="+")

    p = add_parser("sample", help="group samples, operators, MC estimates")
    p.add_argument("--group", choices=tensors.GROUP_TAGS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--operator")
    p.add_argument("--intertwines")
    p.add_argument("--fixed-dim", type=int)

    p = add_parser("recurrence", help="balanced even-moment recurrence")
    p.add_argument("--max-k", type=int, default=5)
    return parser


_HANDLERS: dict[str, Callable] = {
    "enum": _cmd_enum,
    "member": _cmd_member,
    "gram": _cmd_gram,
    "weingarten": _cmd_weingarten,
    "integrate": _cmd_integrate,
    "moments": _cmd_moments,
    "asymptotic": _cmd_asymptotic,
    "law-compare": _cmd_law_compare,
    "closure": _cmd_closure,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "recurrence": _cmd_recurrence,
}


def run(argv: Sequence[str]) -> int:
    """Execute one command line; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(getattr(args, "config", None))
        overrides = {
            key: getattr(args, key)
            for key in (
                "leg_bound", "budget", "seed", "samples", "format", "output", "jobs",
            )
            if getattr(args, key, None) is not None
        }
        cfg = replace(cfg, **overrides)
        text = _HANDLERS[args.command](args, cfg)
        _emit(cfg, text)
        return 0
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return 2
    except (
        _CliError,
        ParseError,
        ShapeMismatchError,
        LegBoundError,
        BudgetError,
        GramSingularError,
        classify.NoMatchError,
        ValueError,
        OSError,
    ) as err:
        name = type(err).__name__ if not isinstance(err, _CliError) else ""
        prefix = f"{name}: " if name else ""
        sys.stderr.write(f"error: {prefix}{err}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
