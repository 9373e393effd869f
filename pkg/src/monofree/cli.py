"""Command line interface: ``monofree convolve|verify|reduce|mixed``.

Exit codes: 0 success, 2 verification failure, 3 non-stabilized evaluation,
4 input error, 5 a moment beyond what a moment spec provides.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .algebras import make_F0, make_H0
from .bialgebra import convolve_states
from .errors import NonStabilizedError, ParseError, PresentationError, SpecExhaustedError
from .freeness import free_sum_moments, m_free_moment, mixed_moment
from .ncpoly import Gen, format_coeff, parse
from .oracle import free_convolve_oracle, free_product_state
from .states import Element, MomentSpec
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_UNSTABLE = 3
EXIT_INPUT = 4
EXIT_EXHAUSTED = 5

DEFAULT_MAX_ORDER = 10


@dataclass
class RunConfig:
    """Validated settings of one invocation; the seed is echoed in every report."""

    command: str
    seed: int = 0
    fmt: str = "table"
    order: int | None = None
    max_order: int = DEFAULT_MAX_ORDER
    truncation: int | None = None
    spec_texts: list = field(default_factory=list)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        texts = [t for t in (getattr(args, "a", None), getattr(args, "b", None)) if t is not None]
        cfg = cls(args.command, args.seed, args.format, getattr(args, "order", None),
                  getattr(args, "max_order", DEFAULT_MAX_ORDER), getattr(args, "truncation", None),
                  texts + list(getattr(args, "spec", []) or []))
        if cfg.order is not None and not 1 <= cfg.order <= cfg.max_order:
            raise ParseError(f"--order must be in 1..{cfg.max_order}")
        if cfg.truncation is not None and cfg.truncation < 1:
            raise ParseError("--truncation must be positive")
        return cfg


def _fmt(v) -> str:
    return format_coeff(v)


def _table(header, rows) -> str:
    cols = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cols]
    return "\n".join(lines)


def _emit(report: dict, fmt: str, render) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render(report))


def _spec(text: str) -> MomentSpec:
    return MomentSpec.parse(text)


# ---------------------------------------------------------------------------
# convolve


def cmd_convolve(args) -> int:
    a, b = _spec(args.a), _spec(args.b)
    methods = ("representation", "oracle") if args.method == "both" else (args.method,)
    rows = [{"n": n} for n in range(1, args.order + 1)]
    if "representation" in methods:
        if args.path == "coproduct":
            vals, certs = convolve_states(a, b, args.order, args.truncation, with_certificates=True)
        else:
            if args.truncation is not None:
                raise ParseError("--truncation applies to the coproduct path")
            vals, certs = free_sum_moments([a, b], args.order, with_certificates=True)
        for row, v, c in zip(rows, vals, certs):
            row["representation"] = _fmt(v)
            row["certificate"] = c.to_dict()
    if "oracle" in methods:
        for row, v in zip(rows, free_convolve_oracle(a, b, args.order)):
            row["oracle"] = _fmt(v)
    ok = True
    if args.method == "both":
        for row in rows:
            row["equal"] = row["representation"] == row["oracle"]
            ok = ok and row["equal"]
    report = {"command": "convolve", "seed": args.seed, "a": a.describe(), "b": b.describe(),
              "method": args.method, "path": args.path, "order": args.order,
              "truncation": args.truncation, "moments": rows}
    if args.method == "both":
        report["all_equal"] = ok

    def render(r):
        head = ["n"] + list(methods) + (["equal"] if args.method == "both" else [])
        if "representation" in methods:
            head.append("certificate")
        body = []
        for row in r["moments"]:
            line = [row["n"]] + [row[m] for m in methods]
            if args.method == "both":
                line.append("yes" if row["equal"] else "NO")
            if "representation" in methods:
                c = row["certificate"]
                line.append(f"K={c['K']}:{c['values'][0]} K={c['K+1']}:{c['values'][1]}")
            body.append(line)
        title = f"convolve {r['a']} [+] {r['b']}  method={r['method']}  seed={r['seed']}"
        return title + "\n" + _table(head, body)

    _emit(report, args.format, render)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.size).to_dict()
    report["command"] = "verify"

    def render(r):
        body = [[p["property"], p["instances"], p["failures"], "pass" if p["passed"] else "FAIL"]
                for p in r["properties"]]
        title = f"verify {r['suite']}  seed={r['seed']}  {'PASS' if r['passed'] else 'FAIL'}"
        return title + "\n" + _table(["property", "instances", "failures", "result"], body)

    _emit(report, args.format, render)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    default = "F" if args.algebra == "F0" else "A"
    raw = parse(args.expression, default_label=default)
    names: dict = {}
    for w in raw.terms:
        for a in w:
            names.setdefault(a.label, set())
            if type(a) is Gen:
                names[a.label].add(a.name)
    if args.generators:
        for g in args.generators.split(","):
            names.setdefault(default, set()).add(g.strip())
    if args.algebra == "F0":
        if set(names) - {default}:
            raise PresentationError("F0 has a single algebra label 'F'")
        pres = make_F0(names.get(default) or {"X"})
    else:
        pres = make_H0(sorted((lab, gens or {"X"}) for lab, gens in names.items()) or [(default, {"X"})])
    result = pres.format(pres.reduce(raw))
    if args.format == "json":
        print(json.dumps({"command": "reduce", "algebra": args.algebra, "input": args.expression,
                          "normal_form": result, "seed": args.seed}, indent=2, sort_keys=True))
    else:
        print(result)
    return EXIT_OK


# ---------------------------------------------------------------------------
# mixed


def parse_mixed_word(text: str) -> list:
    """``"1:X | 2:X X - 1 | 1:X"`` to ``[(1, X), (2, X^2 - 1), (1, X)]``."""
    out = []
    for part in text.split("|"):
        leg, sep, body = part.partition(":")
        if not sep:
            raise ParseError(f"factor {part.strip()!r} needs a 'leg:' prefix")
        try:
            out.append((int(leg), Element.parse(body)))
        except ValueError as exc:
            raise ParseError(f"bad leg number in {part.strip()!r}") from exc
    return out


def cmd_mixed(args) -> int:
    specs = [_spec(s) for s in args.spec]
    if not specs:
        raise ParseError("give one --spec per leg")
    word = parse_mixed_word(args.word)
    for leg, _ in word:
        if not 1 <= leg <= len(specs):
            raise ParseError(f"leg {leg} out of range 1..{len(specs)}")
    if args.center:
        word = [(leg, a.centered(specs[leg - 1])) for leg, a in word]
    report = {"command": "mixed", "seed": args.seed, "specs": [s.describe() for s in specs],
              "word": " | ".join(f"{leg}:{a.format()}" for leg, a in word)}
    ok = True
    if args.m is not None:
        report["m"] = args.m
        report["representation"] = _fmt(m_free_moment(word, specs, args.m))
    else:
        if args.method in ("representation", "both"):
            v, cert = mixed_moment(word, specs, args.truncation, with_certificate=True)
            report["representation"] = _fmt(v)
            report["certificate"] = cert.to_dict()
        if args.method in ("oracle", "both"):
            report["oracle"] = _fmt(free_product_state(word, specs))
        if args.method == "both":
            ok = report["representation"] == report["oracle"]
            report["equal"] = ok

    def render(r):
        lines = [f"mixed {r['word']}  specs={', '.join(r['specs'])}  seed={r['seed']}"]
        for key in ("m", "representation", "oracle", "equal"):
            if key in r:
                lines.append(f"{key}: {r[key]}")
        if "certificate" in r:
            c = r["certificate"]
            lines.append(f"certificate: K={c['K']}:{c['values'][0]} K={c['K+1']}:{c['values'][1]}")
        return "\n".join(lines)

    _emit(report, args.format, render)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites (echoed in reports)")
    common.add_argument("--format", choices=("table", "json"), default="table")

    p = argparse.ArgumentParser(prog="monofree", description="Exact free convolutions through tensor independence.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convolve", parents=[common], help="moments of a free additive convolution")
    c.add_argument("--a", required=True, help="preset like two_point(-1,1,1/2), JSON text or a spec file")
    c.add_argument("--b", required=True)
    c.add_argument("--order", type=int, default=6)
    c.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="hard cap on --order")
    c.add_argument("--method", choices=("representation", "oracle", "both"), default="both")
    c.add_argument("--path", choices=("coproduct", "embedding"), default="coproduct",
                   help="lifted coproduct of tau(X)^n, or powers of j1(X) + j2(X)")
    c.add_argument("--truncation", type=int, default=None, help="read every moment at this index K")
    c.set_defaults(func=cmd_convolve)

    v = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--size", type=int, default=None, help="number of random instances")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", parents=[common], help="normal form of a word expression")
    r.add_argument("expression")
    r.add_argument("--algebra", choices=("F0", "H0"), default="F0")
    r.add_argument("--generators", default=None, help="comma separated extra generator names")
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("mixed", parents=[common], help="mixed moment of free variables")
    m.add_argument("--spec", action="append", default=[], help="one per leg, in leg order")
    m.add_argument("--word", required=True, help='factors like "1:X | 2:X X - 1 | 1:X"')
    m.add_argument("--center", action="store_true", help="center every factor in its own state")
    m.add_argument("--method", choices=("representation", "oracle", "both"), default="both")
    m.add_argument("--truncation", type=int, default=None)
    m.add_argument("--m", type=int, default=None, help="read the m-th layer of the hierarchy")
    m.set_defaults(func=cmd_mixed)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        RunConfig.from_args(args)
        return args.func(args)
    except NonStabilizedError as exc:
        vals = ", ".join(f"K={k}: {_fmt(v)}" for k, v in sorted(exc.values.items()))
        print(f"error: {exc} ({vals})", file=sys.stderr)
        return EXIT_UNSTABLE
    except SpecExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (ParseError, PresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
