"""Command line entry point: ``figmod <subcommand> [options] FILE``.

Exit codes: 0 all PASS, 1 any FAIL, 2 only UNCERTIFIED beyond PASS, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import __version__
from .checks import CHECKS, DEFAULT_CHECKS, CheckResult, Report, exit_code_for, run_suite
from .degree import GradedDegree
from .errors import FigmodError, ParseError, TruncationInsufficient, TruncationTooSmall, ValidationError
from .functors import derivative, shift_module
from .fuzz import FuzzConfig, random_batch
from .homology import homology_report, torsion_submodule
from .io import load_module_file, parse_module_file
from .local_cohomology import FAIL, PASS, UNCERTIFIED, fi_ext_oracle, local_cohomology
from .nagpal import build_complex, stabilization_index

EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, GradedDegree):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _emit_table(rows: list, fmt: str, out) -> None:
    """rows: list of (key, value) pairs."""
    if fmt == "json":
        out.write(json.dumps({k: _jsonable(v) for k, v in rows}, indent=2, sort_keys=True) + "\n")
        return
    for k, v in rows:
        v = _jsonable(v)
        text = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
        out.write(f"{k}\t{text}\n")


def _emit_reports(reports: list, fmt: str, out) -> None:
    if fmt == "json":
        doc = {"status": [PASS, FAIL, UNCERTIFIED][exit_code_for(reports)], "reports": [r.to_json() for r in reports]}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    out.write("instance\tcheck\tstatus\tflag\tdetail\n")
    for r in reports:
        for line in r.tsv_lines():
            out.write(line + "\n")


def _load(path):
    mf = load_module_file(path)
    return mf, mf.realize()


# ---------------------------------------------------------------------------
# subcommands


def cmd_info(args, out) -> int:
    mf, V = _load(args.file)
    rows = [
        ("name", mf.name or ""),
        ("field", mf.field.spec()),
        ("group_order", mf.group.order),
        ("truncation", mf.T),
        ("generator_degrees", list(mf.presentation.generator_degrees)),
        ("relation_degrees", [d for d, _ in mf.presentation.relations]),
        ("dims", list(V.dims)),
    ]
    _emit_table(rows, args.format, out)
    return 0


def cmd_homology(args, out) -> int:
    _, V = _load(args.file)
    h = homology_report(V, args.max_i)
    rows = [("H0", list(h.h0.dims)), ("gd", h.gd)]
    for i in sorted(h.H):
        rows.append((f"H{i}", list(h.H[i].dims)))
        rows.append((f"hd{i}", h.hd[i]))
    rows += [("reg", h.reg), ("reg_certified", h.reg_certified), ("reg_bound", h.bound), ("resolution_degree", h.T_res)]
    _emit_table(rows, args.format, out)
    return 0 if h.gd.known and h.hd[1].known else 2


def cmd_torsion(args, out) -> int:
    _, V = _load(args.file)
    t = torsion_submodule(V)
    rows = [("torsion", list(t.dims.dims)), ("td", t.td), ("certified", t.certified), ("single_step_kernels", t.top_kernel)]
    _emit_table(rows, args.format, out)
    return 0 if t.certified else 2


def cmd_shift(args, out) -> int:
    _, V = _load(args.file)
    S = shift_module(V, args.a)
    _emit_table([("a", args.a), ("dims", list(S.dims)), ("truncation", S.T)], args.format, out)
    return 0


def cmd_derivative(args, out) -> int:
    _, V = _load(args.file)
    d = derivative(V, args.a)
    rows = [("a", args.a), ("dims", list(d.D.dims)), ("kernel", list(d.kernel.dims)), ("truncation", d.D.T)]
    _emit_table(rows, args.format, out)
    return 0


def cmd_nagpal(args, out) -> int:
    _, V = _load(args.file)
    st = stabilization_index(V)
    C = build_complex(V)
    rows = [
        ("N", st.N),
        ("N_certified", st.certified),
        ("shifts", C.shifts),
        ("terms", [list(t.dims) for t in C.terms]),
        ("complex_certified", C.certified),
        ("top_degree", C.top),
    ]
    _emit_table(rows, args.format, out)
    return 0 if st.certified and C.certified else 2


def cmd_local_cohomology(args, out) -> int:
    _, V = _load(args.file)
    tab = local_cohomology(V)
    rows = [(f"H{i}_m", list(r.dims)) for i, r in enumerate(tab.rows)]
    rows += [
        ("dimension", tab.dimension),
        ("depth", tab.depth),
        ("sharp_filtered", tab.sharp_filtered),
        ("certified", tab.certified),
    ]
    code = 0 if tab.certified else 2
    if args.oracle:
        o = fi_ext_oracle(V)
        for i, vals in sorted(o.rows.items()):
            rows.append((f"oracle_H{i}_m", vals))
        rows.append(("oracle_skipped_degrees", [r for r, _ in o.skipped]))
        agree = o.agrees_with(tab)
        rows.append(("oracle_agrees", agree))
        if not agree:
            code = 1
    _emit_table(rows, args.format, out)
    return code


def cmd_check(args, out) -> int:
    mf = load_module_file(args.file)
    checks = list(CHECKS) if args.all else DEFAULT_CHECKS
    report = run_suite(mf, checks, name=mf.name or str(args.file))
    _emit_reports([report], args.format, out)
    return report.exit_code()


def cmd_fuzz(args, out) -> int:
    cfg = FuzzConfig(seed=args.seed, count=args.count, group=args.group, T=args.truncation, field=str(args.p))
    checks = list(CHECKS) if args.all else DEFAULT_CHECKS
    reports = [run_suite(mf, checks) for mf in random_batch(cfg)]
    _emit_reports(reports, args.format, out)
    return exit_code_for(reports)


# hand-derived values for the shipped fixtures
SELFCHECK = {
    "m0_mod_m2.json": {"td": 1, "gd": 0, "hd1": 2, "reg": 1, "N": 2, "H0_m": "module", "dimension": 0},
    "mm0_like.json": {"td": "-inf", "hd1": 2, "N": 1, "H1_m": [1], "depth": 1, "dimension": 1},
    "m1.json": {"td": "-inf", "gd": 1, "hd1": "-inf", "N": 0, "depth": "+inf", "dimension": "+inf"},
    "m0.json": {"td": "-inf", "gd": 0, "hd1": "-inf", "N": 0, "depth": "+inf", "dimension": "+inf"},
}


def fixture_values(V) -> dict:
    h = homology_report(V, 1)
    t = torsion_submodule(V)
    tab = local_cohomology(V)
    return {
        "td": t.td.to_json(),
        "gd": h.gd.to_json(),
        "hd1": h.hd[1].to_json(),
        "reg": h.reg.to_json(),
        "N": tab.complex.shifts[0] if tab.complex.shifts else 0,
        "rows": [list(r.dims) for r in tab.rows],
        "depth": tab.depth.to_json(),
        "dimension": tab.dimension.to_json(),
        "dims": list(V.dims),
    }


def _expected_ok(key, want, got) -> bool:
    if key == "H0_m":
        top = len(got["rows"][0])
        return got["rows"][0] == got["dims"][:top]
    if key.startswith("H") and key.endswith("_m"):
        i = int(key[1:-2])
        row = got["rows"][i] if i < len(got["rows"]) else []
        return row[: len(want)] == want and not any(row[len(want):])
    return got[key] == want


def selfcheck_reports() -> list:
    reports = []
    pkg = resources.files("figmod.fixtures")
    for fname, expected in SELFCHECK.items():
        mf = parse_module_file(pkg.joinpath(fname).read_text(encoding="utf-8"))
        got = fixture_values(mf.realize())
        rows = []
        for key, want in expected.items():
            ok = _expected_ok(key, want, got)
            shown = got[key] if key in got else got["rows"]
            rows.append(CheckResult(f"fixture_{key}", PASS if ok else FAIL, {"expected": want, "computed": shown}))
        reports.append(Report(mf.name or fname, rows))
    return reports


def cmd_selfcheck(args, out) -> int:
    reports = selfcheck_reports()
    _emit_reports(reports, args.format, out)
    return exit_code_for(reports)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="figmod", description="Exact computations with truncated FI_G-modules.")
    p.add_argument("--version", action="version", version=f"figmod {__version__}")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["tsv", "json"], default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_text, with_file=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if with_file:
            sp.add_argument("file")
        sp.set_defaults(func=func)
        return sp

    add("info", cmd_info, "presentation summary and graded dimensions")
    sp = add("homology", cmd_homology, "FI_G-homology, homological degrees, regularity")
    sp.add_argument("--max-i", type=int, default=3, dest="max_i")
    add("torsion", cmd_torsion, "torsion submodule and torsion degree")
    sp = add("shift", cmd_shift, "graded dimensions of the shift")
    sp.add_argument("-a", type=int, default=1)
    sp = add("derivative", cmd_derivative, "derivative and kernel of tau")
    sp.add_argument("-a", type=int, default=1)
    add("nagpal", cmd_nagpal, "stabilization index and the shift complex")
    sp = add("local-cohomology", cmd_local_cohomology, "local cohomology table")
    sp.add_argument("--oracle", action="store_true", help="also compute the Ext-colimit oracle")
    sp = add("check", cmd_check, "run the property suite on one module")
    sp.add_argument("--all", action="store_true", help="include the Ext-colimit oracle")
    sp = add("fuzz", cmd_fuzz, "run the property suite on seeded random modules", with_file=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--group", choices=["trivial", "z2"], default="trivial")
    sp.add_argument("--truncation", type=int, default=8)
    sp.add_argument("-p", type=int, default=5)
    sp.add_argument("--all", action="store_true", help="include the Ext-colimit oracle")
    add("selfcheck", cmd_selfcheck, "compare shipped fixtures with hand-derived values", with_file=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (ParseError, ValidationError, TruncationTooSmall, OSError) as exc:
        print(f"figmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationInsufficient as exc:
        print(f"figmod: uncertified: {exc}", file=sys.stderr)
        return 2
    except FigmodError as exc:
        print(f"figmod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
