"""Command-line front end.

Verbs::

    eval         value of a functional on --dist (uniform:N, iuniform:N, degenerate:N or a CSV file)
    max          maximum of a functional at dimension --n
    certify      issue an (alpha, eps, delta) certificate as JSON
    verify       probe a certificate at every N in --n-list
    probe        search for a large deviation inside a --delta ball
    witness      build an explicit instability pair
    lemma-check  randomized check of the power-difference inequalities and bound constants
    sweep        sampled soundness check over a (q, alpha, eps, N) grid

Exit codes: 0 success, 1 violation or instability shown, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .adversary import (
    STRATEGIES,
    probe,
    renyi_instability_witness,
    theorem12c_witness,
    verify_by_sampling,
)
from .certificates import (
    BOUND_FAMILIES,
    LEMMA_VARIANTS,
    TSALLIS_HIGH,
    TSALLIS_LOW,
    bound_grid_excess,
    certificate_for,
    lemma10_check,
)
from .errors import LescheError, ParameterError, UnsupportedRegimeError
from .functionals import (
    INCOMPLETE_ENTROPY,
    INCOMPLETE_EXPECTATION,
    KAPPA,
    RENYI,
    TSALLIS,
    Functional,
    canonical_variant,
    evaluate,
    functional_max,
    random_observable,
)
from .io import fmt, read_distributions, write_witness
from .simplex import INCOMPLETE, degenerate, uniform_complete, uniform_incomplete

VERDICTS = ("pass", "violation", "n/a")
REPORT_FIELDS = ("functional", "q", "alpha", "N", "delta", "epsilon", "ratio", "verdict")

# (functional, q, alphas): the certificate-soundness grid
DEFAULT_SWEEP = (
    (INCOMPLETE_ENTROPY, 0.5, (0.5, 1.0)),
    (INCOMPLETE_ENTROPY, 2.0, (0.5, 1.0)),
    (TSALLIS, 0.5, (0.5, 1.0)),
    (TSALLIS, 2.0, (0.5, 1.0)),
    (INCOMPLETE_EXPECTATION, 2.0, (0.5, 1.0)),
    (INCOMPLETE_EXPECTATION, 0.5, (0.25, 0.5)),
    (RENYI, 0.5, (0.25, 0.5)),
)
DEFAULT_N = (2, 3, 10, 100, 1000)
DEFAULT_EPS = 0.1

# alphas per inequality variant
LEMMA_ALPHAS = {"a": (0.25, 0.5, 0.9), "b": (0.25, 0.5, 0.9), "c": (1.5, 2.0, 5.0), "d": (1.5, 2.0, 5.0)}
LEMMA9_GRID = {
    TSALLIS_LOW: (0.1, 0.3, 0.5, 0.7, 0.9),
    TSALLIS_HIGH: (1.5, 2.0, 3.0, 5.0),
    INCOMPLETE_ENTROPY: (0.3, 0.5, 0.7, 2.0, 3.0),
}
LEMMA_SLACK = 1e-12


class UsageError(LescheError):
    """Bad command line that argparse itself cannot detect."""


# --- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    functional: str
    q: float
    alpha: float
    N: int
    delta: float
    epsilon: float
    ratio: float
    verdict: str
    message: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ParameterError(f"unknown verdict {self.verdict!r}")
        for name in ("q", "alpha", "delta", "epsilon", "ratio"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.verdict != "n/a" and (self.verdict == "pass") != (self.ratio < self.epsilon):
            raise ParameterError(f"verdict {self.verdict!r} inconsistent with ratio {self.ratio} vs eps {self.epsilon}")

    @classmethod
    def judged(cls, functional, q, alpha, n, delta, epsilon, ratio) -> "ReportRow":
        verdict = "pass" if ratio < epsilon else "violation"
        return cls(functional, float(q), float(alpha), int(n), float(delta), float(epsilon), float(ratio), verdict)

    @classmethod
    def unsupported(cls, functional, q, alpha, n, epsilon, message: str) -> "ReportRow":
        return cls(functional, float(q), float(alpha), int(n), 0.0, float(epsilon), 0.0, "n/a", message)

    def record(self) -> dict:
        out = {k: getattr(self, k) for k in REPORT_FIELDS}
        if self.verdict == "n/a":
            out["message"] = self.message
        return out


def _cell(x) -> str:
    return fmt(x) if isinstance(x, float) else str(x)


def write_report(rows: Iterable[ReportRow], format: str = "csv", destination: str | Path | TextIO | None = None) -> None:
    """CSV (fixed header) or JSON array of the rows; ``destination`` is a path, a stream or stdout."""
    rows = list(rows)
    if format == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_FIELDS)
        for r in rows:
            writer.writerow([_cell(getattr(r, k)) for k in REPORT_FIELDS])
        text = buf.getvalue()
    elif format == "json":
        text = json.dumps([r.record() for r in rows], indent=2) + "\n"
    else:
        raise ParameterError(f"unknown report format {format!r}")
    _emit(text, destination)


def _emit(text: str, destination) -> None:
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


# --- argument parsing --------------------------------------------------------


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _functional_flags(p: argparse.ArgumentParser, *, many: bool = False, required: bool = True):
    num = _float_list if many else float
    p.add_argument("--functional", required=required,
                   help="tsallis, incomplete, renyi, kappa, quantum_group, incomplete_expectation (alias iqe)")
    p.add_argument("--q", type=num, help="deformation parameter" + (" (comma list)" if many else ""))
    p.add_argument("--kappa", type=num, help="kappa for the kappa entropy" + (" (comma list)" if many else ""))
    p.add_argument("--observable", type=_float_list,
                   help="comma-separated observable for the q-expectation (default: seeded random)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lesche", description="Lesche (alpha-) stability laboratory.")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", required=True)

    p = sub.add_parser("eval", help="evaluate a functional")
    _functional_flags(p)
    p.add_argument("--dist", required=True, help="uniform:N, iuniform:N, degenerate:N or a distribution CSV")
    p.add_argument("--out")

    p = sub.add_parser("max", help="maximum of a functional at dimension N")
    _functional_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("certify", help="issue a certificate")
    _functional_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="probe a certificate")
    _functional_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n-list", type=_int_list, default=DEFAULT_N)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=STRATEGIES, default="all")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("probe", help="adversarial search inside a delta ball")
    _functional_flags(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.5, help="ratio at or above which instability is reported")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=STRATEGIES, default="all")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write the best pair as CSV plus a JSON sidecar")

    p = sub.add_parser("witness", help="explicit instability pair")
    _functional_flags(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, default=10_000, help="dimension (Renyi witness only)")
    p.add_argument("--eps", type=float, default=0.5, help="ratio at or above which instability is reported")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write the pair as CSV plus a JSON sidecar")

    p = sub.add_parser("lemma-check", help="randomized inequality checks")
    p.add_argument("--lemma", choices=("9", "10", "10a", "10b", "10c", "10d", "all"), default="all")
    p.add_argument("--alpha", type=_float_list, help="override the alpha list for the 10x checks")
    p.add_argument("--trials", type=int, default=100_000, help="checks per (variant, alpha)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="sampled soundness check over a parameter grid")
    _functional_flags(p, many=True, required=False)
    p.add_argument("--alpha", type=_float_list)
    p.add_argument("--eps", type=_float_list, default=(DEFAULT_EPS,))
    p.add_argument("--n-list", type=_int_list, default=DEFAULT_N)
    p.add_argument("--trials", type=int, default=10_000, help="pairs (sample) or trials (probe) per grid point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=("sample",) + STRATEGIES, default="sample")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    return parser


# --- helpers -----------------------------------------------------------------


def _make_functional(name: str, q=None, kappa=None, observable=None, n: int | None = None, seed: int = 0) -> Functional:
    variant = canonical_variant(name)
    if variant == KAPPA:
        if kappa is None:
            raise UsageError("--kappa is required for the kappa entropy")
        return Functional.kappa_entropy(kappa)
    if q is None:
        raise UsageError(f"--q is required for {variant}")
    if variant == INCOMPLETE_EXPECTATION:
        if observable is None:
            if n is None:
                raise UsageError("--observable is required here")
            observable = random_observable(n, seed)
        return Functional.incomplete_expectation(q, observable)
    return Functional(variant, q=q)


def _functional_from(args, n: int | None = None) -> Functional:
    return _make_functional(args.functional, args.q, args.kappa, args.observable, n, getattr(args, "seed", 0))


def _parse_dist(spec: str, f: Functional):
    head, _, tail = spec.partition(":")
    if head in ("uniform", "iuniform", "degenerate") and tail:
        try:
            n = int(tail)
        except ValueError:
            raise UsageError(f"bad dimension in --dist {spec!r}")
        if head == "uniform":
            return [uniform_complete(n)]
        if head == "iuniform":
            if f.q is None:
                raise UsageError("iuniform needs a functional with q")
            return [uniform_incomplete(n, f.q)]
        kind = f.domain
        return [degenerate(n, kind, f.q if kind == INCOMPLETE else None)]
    return read_distributions(spec)


def _out_stream(path):
    return None if path is None else Path(path)


# --- verbs -------------------------------------------------------------------


def _cmd_eval(args) -> int:
    if canonical_variant(args.functional) == INCOMPLETE_EXPECTATION and args.observable is None:
        raise UsageError("--observable is required to evaluate the q-expectation")
    f = _functional_from(args)
    dists = _parse_dist(args.dist, f)
    _emit("".join(fmt(evaluate(f, d)) + "\n" for d in dists), _out_stream(args.out))
    return 0


def _cmd_max(args) -> int:
    f = _functional_from(args, n=args.n)
    m = functional_max(f, args.n)
    text = json.dumps(m.to_dict()) + "\n" if args.format == "json" else fmt(m.value) + "\n"
    _emit(text, _out_stream(args.out))
    return 0


def _cmd_certify(args) -> int:
    f = _functional_from(args, n=1)
    cert = certificate_for(f, args.alpha, args.eps)
    _emit(cert.to_json() + "\n", _out_stream(args.out))
    return 0


def _cmd_verify(args) -> int:
    f = _functional_from(args, n=max(args.n_list))
    cert = certificate_for(f, args.alpha, args.eps)
    rows = []
    for n in args.n_list:
        if n < cert.n_min:
            rows.append(ReportRow.unsupported(f.variant, f.param, args.alpha, n, args.eps,
                                              f"certificate covers N >= {cert.n_min}"))
            continue
        g = f if args.observable is not None else _functional_from(args, n=n)
        res = probe(g, cert.alpha, cert.delta, n, args.strategy, args.trials, args.seed)
        rows.append(ReportRow.judged(f.variant, f.param, args.alpha, n, cert.delta, args.eps, res.ratio))
    write_report(rows, args.format, _out_stream(args.out))
    return 1 if any(r.verdict == "violation" for r in rows) else 0


def _show_pair(args, f: Functional, witness, n: int, delta: float) -> int:
    if args.out is not None:
        write_witness(witness, args.out)
    ratio = witness.ratio
    if args.format == "text":
        _emit(fmt(ratio) + "\n", None)
    elif args.format == "json":
        _emit(json.dumps(witness.summary(), sort_keys=True) + "\n", None)
    else:
        # a pair at or above eps is an instability, not a pass
        write_report([ReportRow.judged(f.variant, f.param, witness.alpha, n, delta, args.eps, ratio)], "csv")
    return 1 if ratio >= args.eps else 0


def _cmd_probe(args) -> int:
    f = _functional_from(args, n=args.n)
    res = probe(f, args.alpha, args.delta, args.n, args.strategy, args.trials, args.seed)
    return _show_pair(args, f, res.best, args.n, args.delta)


def _cmd_witness(args) -> int:
    variant = canonical_variant(args.functional)
    if args.q is None:
        raise UsageError("--q is required")
    if variant == INCOMPLETE_EXPECTATION:
        w = theorem12c_witness(args.q, args.delta, args.alpha)
    elif variant == RENYI:
        if args.alpha != 1.0:
            raise UsageError("the Renyi witness is built for alpha = 1")
        w = renyi_instability_witness(args.q, args.delta, args.n)
    else:
        raise UsageError(f"no explicit witness family for {variant}")
    return _show_pair(args, w.functional, w, w.n, args.delta)


@dataclass(frozen=True)
class LemmaRow:
    lemma: str
    param: float
    checks: int
    max_excess: float
    verdict: str


def _cmd_lemma_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = []
    which = args.lemma
    if which in ("9", "all"):
        for family in BOUND_FAMILIES:
            for q in LEMMA9_GRID[family]:
                excess = bound_grid_excess(family, q)
                rows.append(LemmaRow(f"9-{family}", q, 9_999, excess, "pass" if excess <= LEMMA_SLACK else "violation"))
    variants = LEMMA_VARIANTS if which in ("10", "all") else (which[2:],) if which.startswith("10") else ()
    for v in variants:
        alphas = LEMMA_ALPHAS[v]
        if args.alpha is not None:
            alphas = tuple(a for a in args.alpha if (a < 1) == (v in "ab") and a != 1)
            if not alphas:
                raise UsageError(f"no --alpha value applies to variant {v}")
        for a in alphas:
            checks, excess = lemma10_check(v, a, args.trials, args.seed)
            rows.append(LemmaRow(f"10{v}", a, checks, excess, "pass" if excess <= LEMMA_SLACK else "violation"))
    fields = ("lemma", "param", "checks", "max_excess", "verdict")
    if args.format == "json":
        text = json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    else:
        lines = [",".join(fields)]
        lines += [",".join(_cell(getattr(r, k)) for k in fields) for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, _out_stream(args.out))
    return 1 if any(r.verdict == "violation" for r in rows) else 0


def sweep_grid(args) -> list[tuple[str, float, float, float, int]]:
    """Grid points ``(functional, param, alpha, eps, N)`` in output order."""
    if args.functional is None:
        if args.q is not None or args.kappa is not None or args.alpha is not None:
            raise UsageError("--q/--kappa/--alpha need --functional")
        cells = [(name, q, a) for name, q, alphas in DEFAULT_SWEEP for a in alphas]
    else:
        variant = canonical_variant(args.functional)
        params = args.kappa if variant == KAPPA else args.q
        if params is None:
            raise UsageError("--kappa is required for the kappa entropy" if variant == KAPPA else "--q is required")
        alphas = args.alpha or (0.5, 1.0)
        cells = [(variant, x, a) for x, a in itertools.product(params, alphas)]
    return [(name, x, a, e, n) for (name, x, a), e, n in itertools.product(cells, args.eps, args.n_list)]


def sweep_rows(args) -> list[ReportRow]:
    rows = []
    for name, x, alpha, eps, n in sweep_grid(args):
        variant = canonical_variant(name)
        try:
            kwargs = {"kappa": x} if variant == KAPPA else {"q": x}
            f = _make_functional(variant, observable=args.observable if args.functional else None,
                                 n=n, seed=args.seed, **kwargs)
            cert = certificate_for(f, alpha, eps)
        except UnsupportedRegimeError as exc:
            rows.append(ReportRow.unsupported(variant, x, alpha, n, eps, str(exc)))
            continue
        if f.variant == INCOMPLETE_EXPECTATION and len(f.observable) != n:
            raise UsageError(f"--observable has {len(f.observable)} entries but N={n}")
        if args.strategy == "sample":
            ratio = verify_by_sampling(cert, f, n, args.trials, args.seed).max_ratio
        else:
            ratio = probe(f, cert.alpha, cert.delta, n, args.strategy, args.trials, args.seed).ratio
        rows.append(ReportRow.judged(variant, x, alpha, n, cert.delta, eps, ratio))
    return rows


def _cmd_sweep(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = sweep_rows(args)
    write_report(rows, args.format, _out_stream(args.out))
    return 1 if any(r.verdict == "violation" for r in rows) else 0


COMMANDS = {
    "eval": _cmd_eval,
    "max": _cmd_max,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "probe": _cmd_probe,
    "witness": _cmd_witness,
    "lemma-check": _cmd_lemma_check,
    "sweep": _cmd_sweep,
}


def parse_and_dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.verb](args)
    except LescheError as exc:
        print(f"lesche {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lesche {args.verb}: error: {exc}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    return parse_and_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
