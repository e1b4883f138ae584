"""Command-line front end.

Exit codes: 0 when every asserted case passes, 1 when any report carries a
violation, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import goethals, ksum, verify
from .field import MAX_DEGREE, FieldError, make_field, parse_hex

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

DEFAULT_SEED = 20240521

COMMANDS = ("field-info", "ksum", "ksum-table", "goethals-count", "verify", "conjecture-scan")

# Per-command upper bound on m; all are checked before any work starts.
GUARDS = {
    "field-info": MAX_DEGREE,
    "ksum": ksum.FAST_MAX_M,
    "ksum-table": ksum.FAST_MAX_M,
    "goethals-count": goethals.BRUTE_MAX_M,
    "verify": None,  # depends on --family
    "conjecture-scan": ksum.FAST_MAX_M,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m_range: tuple[int, int]
    poly_override: int | None = None
    output_format: str = "plain"
    output_path: str | None = None
    n_max: int = 0
    family: str = "corrected"
    a: int | None = None
    b: int | None = None
    c: int | None = None
    seed: int = DEFAULT_SEED
    threads: int = 1
    method: str = "spectral"
    exponent: str = "even"
    spot_check: int = 0
    inject_expected_residue: int | None = None

    @property
    def degrees(self) -> range:
        return range(self.m_range[0], self.m_range[1] + 1)


def parse_m_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            rng = int(lo), int(hi)
        else:
            rng = int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree range {text!r}; use M or A..B") from None
    if rng[0] > rng[1]:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return rng


def _hex_arg(text: str) -> int:
    try:
        return parse_hex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-m", dest="m_range", type=parse_m_range, required=True,
                        help="extension degree or inclusive range A..B")
    common.add_argument("--poly", type=_hex_arg, help="reduction polynomial as hex, e.g. 0x11B")
    common.add_argument("--format", dest="output_format", choices=["csv", "report", "plain"])
    common.add_argument("--out", dest="output_path", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="gf2sums",
        description="Kloosterman sums and Goethals-system counts over GF(2^m)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("field-info", parents=[common], help="field parameters")

    p = sub.add_parser("ksum", parents=[common], help="a single Kloosterman sum")
    p.add_argument("-a", type=_hex_arg, required=True)

    p = sub.add_parser("ksum-table", parents=[common], help="K(a) for every a")
    p.add_argument("--method", choices=["spectral", "naive"], default="spectral")

    p = sub.add_parser("goethals-count", parents=[common], help="mu2(b, c) counts")
    p.add_argument("-b", type=_hex_arg)
    p.add_argument("-c", type=_hex_arg)

    p = sub.add_parser("verify", parents=[common], help="check a theorem exhaustively")
    p.add_argument("--family", choices=sorted(verify.FAMILIES), default="corrected")
    p.add_argument("--spot-check", type=int, default=0,
                   help="corrected family: re-count this many random (b,c) pointwise")
    p.add_argument("--inject-expected-residue", type=int, help=argparse.SUPPRESS)

    p = sub.add_parser("conjecture-scan", parents=[common], help="scan the xi-sum conjecture")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--exponent", choices=["even", "power2"], default="even")
    p.add_argument("--inject-expected-residue", type=int, help=argparse.SUPPRESS)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    default_format = {"ksum-table": "csv", "goethals-count": "csv", "verify": "plain",
                      "conjecture-scan": "plain"}.get(ns.command, "plain")
    cfg = RunConfig(
        command=ns.command,
        m_range=ns.m_range,
        poly_override=ns.poly,
        output_format=ns.output_format or default_format,
        output_path=ns.output_path,
        seed=ns.seed,
        threads=ns.threads,
    )
    for name in ("a", "b", "c", "family", "method", "exponent", "n_max", "spot_check",
                 "inject_expected_residue"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    return cfg


def validate(cfg: RunConfig) -> None:
    lo, hi = cfg.m_range
    if lo < 1:
        raise UsageError(f"m must be >= 1, got {lo}")
    limit = GUARDS[cfg.command]
    if cfg.command == "verify":
        limit = verify.FAMILY_MAX_M[cfg.family]
    if cfg.command == "ksum-table" and cfg.method == "naive":
        limit = ksum.NAIVE_MAX_M
    if hi > limit:
        raise UsageError(f"{cfg.command}: m={hi} exceeds the guard m <= {limit}")
    if cfg.poly_override is not None and lo != hi:
        raise UsageError("--poly needs a single degree, not a range")
    if (cfg.b is None) != (cfg.c is None):
        raise UsageError("-b and -c must be given together")
    if cfg.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    if cfg.threads < 1:
        raise UsageError("--threads must be positive")
    for name in ("a", "b", "c"):
        v = getattr(cfg, name)
        if v is not None and v >> hi:
            raise UsageError(f"-{name} {v:#x} is not an element of GF(2^{hi})")
    if cfg.command == "verify" and cfg.output_format == "csv":
        raise UsageError("verify reports support --format report or plain")


class _Sink:
    """Collects output per degree, then writes it once."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.parts: list[tuple[int, str]] = []

    def add(self, m: int, text: str):
        self.parts.append((m, text))

    def flush(self, stdout) -> None:
        path = self.cfg.output_path
        if path is None:
            for _, text in self.parts:
                stdout.write(text)
            return
        target = Path(path)
        try:
            if len(self.parts) == 1 or self.cfg.output_format != "csv":
                target.write_text("".join(t for _, t in self.parts))
            else:
                for m, text in self.parts:
                    target.with_name(f"{target.stem}_m{m}{target.suffix}").write_text(text)
        except OSError as e:
            raise UsageError(f"cannot write {path}: {e}") from None


def _field_for(cfg: RunConfig, m: int):
    return make_field(m, cfg.poly_override)


def _report_output(cfg: RunConfig, reports: list[verify.VerificationReport], sink: _Sink):
    if cfg.output_format == "report":
        docs = [r.to_dict() for r in reports]
        body = docs[0] if len(docs) == 1 else docs
        sink.add(reports[0].m, json.dumps(body, indent=2, sort_keys=True) + "\n")
        return
    lines = []
    for r in reports:
        lines.append(r.summary())
        lines.extend(f"  note: {n}" for n in r.notes)
        for v in r.violations[:20]:
            lines.append(f"  violation {v.kind}: {v.inputs} expected={v.expected} observed={v.observed}")
        if len(r.violations) > 20:
            lines.append(f"  ... {len(r.violations) - 20} more")
    sink.add(reports[0].m, "\n".join(lines) + "\n")


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    validate(cfg)
    fields = [_field_for(cfg, m) for m in cfg.degrees]
    sink = _Sink(cfg)
    status = EXIT_OK
    hook = None
    if cfg.inject_expected_residue is not None:
        hook = lambda _m, r=cfg.inject_expected_residue: r  # noqa: E731

    if cfg.command == "field-info":
        for f in fields:
            roots = f.cube_roots_of_unity()
            info = {
                "m": f.m, "q": f.q, "poly": f"{f.poly:#X}".replace("0X", "0x"),
                "trace_mask": f"{f.trace_mask:#x}", "Tr(1)": f.trace(1),
                "cube_roots_of_unity": [f"{w:#x}" for w in roots] if roots else [],
            }
            if cfg.output_format == "report":
                sink.add(f.m, json.dumps(info, sort_keys=True) + "\n")
            else:
                sink.add(f.m, "".join(f"{k}: {v}\n" for k, v in info.items()))

    elif cfg.command == "ksum":
        for f in fields:
            k = ksum.kloosterman(f, cfg.a)
            sink.add(f.m, f"m={f.m} poly={f.poly:#x} a={cfg.a:#x} K={k} K mod 12 = {ksum.residue_mod(k, 12)}\n")

    elif cfg.command == "ksum-table":
        for f in fields:
            build = ksum.kloosterman_table_naive if cfg.method == "naive" else ksum.kloosterman_table_fast
            table = build(f)
            if cfg.output_format == "csv":
                sink.add(f.m, table.to_csv())
            else:
                sink.add(f.m, "".join(f"{a:#x} {k}\n" for a, k in enumerate(table.values.tolist())))

    elif cfg.command == "goethals-count":
        for f in fields:
            if cfg.b is not None:
                sink.add(f.m, _single_pair(f, cfg.b, cfg.c))
            else:
                table = goethals.mu2_bruteforce_all(f, threads=cfg.threads)
                sink.add(f.m, goethals.mu2_table_csv(table))

    elif cfg.command == "verify":
        reports = []
        for f in fields:
            if cfg.family == "corrected":
                rep = verify.verify_corrected_theorem(f, threads=cfg.threads)
                if cfg.spot_check:
                    table = goethals.mu2_bruteforce_all(f, threads=cfg.threads)
                    bad = goethals.spot_check_pointwise(table, cfg.spot_check, cfg.seed)
                    rep.notes.append(
                        f"pointwise spot-check: {cfg.spot_check} cells, seed {cfg.seed}, {len(bad)} mismatches"
                    )
                    for b, c, swept, direct in bad:
                        rep.violations.append(verify.Violation(
                            {"b": f"{b:#x}", "c": f"{c:#x}"}, swept, direct, "pointwise"))
            elif cfg.family == "cube-root":
                cube_hook = None
                if hook is not None:
                    cube_hook = lambda _tr, r=cfg.inject_expected_residue: r  # noqa: E731
                rep = verify.verify_cube_root_theorem(f, cube_hook)
            else:
                rep = verify.FAMILIES[cfg.family](f, hook)
            reports.append(rep)
        _report_output(cfg, reports, sink)
        status = EXIT_VIOLATION if any(r.violations for r in reports) else EXIT_OK

    elif cfg.command == "conjecture-scan":
        reports = [verify.conjecture_scan(f, cfg.n_max, cfg.exponent, hook) for f in fields]
        _report_output(cfg, reports, sink)
        status = EXIT_VIOLATION if any(r.violations for r in reports) else EXIT_OK

    sink.flush(stdout)
    return status


def _single_pair(f, b: int, c: int) -> str:
    p = goethals.derive_params(f, b, c)
    m2s = goethals.m2_sum(f, p)
    m2c = goethals.m2_closed(f, p)
    lines = [
        f"m={f.m} poly={f.poly:#x} b={b:#x} c={c:#x}",
        f"k1={p.k1:#x} k2={p.k2:#x} l={p.l} degenerate={int(p.degenerate)}",
        f"mu2_bruteforce={goethals.mu2_bruteforce(f, b, c)}",
        f"mu2_closed={goethals.mu2_closed(f, b, c)}",
        f"m2_sum={m2s}",
        f"m2_closed={m2c}",
        f"mu2_from_m2(m2_sum)={goethals.mu2_from_m2(m2s, f.trace(c), f.trace(1))}",
        f"mu2_from_m2(m2_closed)={goethals.mu2_from_m2(m2c, f.trace(c), f.trace(1))}",
    ]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return run(config_from_args(ns))
    except (UsageError, FieldError, ksum.CostGuardError) as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
