"""Property suite: every structural invariant evaluated on one module, with certification status.

Each check returns rows carrying PASS, FAIL or UNCERTIFIED plus the witness
numbers.  A row is UNCERTIFIED when the truncation is too small to expose a
violation; a FAIL is only ever reported on certified data.  Rows marked
informational are reported but do not affect the exit status.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .degree import GradedDegree, degree_of_dims
from .errors import FigmodError, NoStabilization, SizeLimitExceeded, TruncationInsufficient
from .functors import derivative, derived_derivative_series, depth
from .homology import homology_report, torsion_submodule
from .io import ModuleFile
from .local_cohomology import FAIL, PASS, UNCERTIFIED, fi_ext_oracle, invariant_report, local_cohomology, local_duality_check
from .module import TruncatedModule, validate_module
from .nagpal import build_complex, dreg_value, is_sharp_filtered, stabilization_index

I_MAX = 3


@dataclass
class CheckResult:
    name: str
    status: str
    detail: dict = dc_field(default_factory=dict)
    informational: bool = False

    def to_json(self) -> dict:
        out = {"check": self.name, "status": self.status, "detail": self.detail}
        if self.informational:
            out["informational"] = True
        return out


@dataclass
class Report:
    instance: str
    rows: list

    @property
    def status(self) -> str:
        counted = [r.status for r in self.rows if not r.informational]
        if FAIL in counted:
            return FAIL
        if UNCERTIFIED in counted:
            return UNCERTIFIED
        return PASS

    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, UNCERTIFIED: 2}[self.status]

    def row(self, name: str) -> CheckResult | None:
        return next((r for r in self.rows if r.name == name), None)

    def to_json(self) -> dict:
        return {"instance": self.instance, "status": self.status, "checks": [r.to_json() for r in self.rows]}

    def tsv_lines(self) -> list:
        out = []
        for r in self.rows:
            flag = "info" if r.informational else ""
            out.append("\t".join([self.instance, r.name, r.status, flag, json.dumps(r.detail, sort_keys=True)]))
        return out


def exit_code_for(reports) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return 1
    if UNCERTIFIED in statuses:
        return 2
    return 0


def _deg(d: GradedDegree):
    return d.to_json()


class Context:
    """Lazily computed invariants of one module, shared between checks."""

    def __init__(self, V: TruncatedModule):
        self.V = V

    @cached_property
    def hom(self):
        return homology_report(self.V, I_MAX)

    @cached_property
    def torsion(self):
        return torsion_submodule(self.V)

    @cached_property
    def sharp(self):
        return is_sharp_filtered(self.V)

    @cached_property
    def stab(self):
        return stabilization_index(self.V)

    @cached_property
    def complex(self):
        return build_complex(self.V)

    @cached_property
    def table(self):
        return local_cohomology(self.V, self.complex)

    @cached_property
    def depth(self):
        return depth(self.V, sharp_filtered=self.table.sharp_filtered)

    @cached_property
    def series(self):
        return derived_derivative_series(self.V)

    @property
    def homology_certified(self) -> bool:
        """gd and hd_1 are known and the resolution reaches past R + i_max."""
        h = self.hom
        if not (h.gd.known and h.hd[1].known and all(d.known for d in h.hd.values())):
            return False
        if h.bound is not None:
            return h.bound + I_MAX + 1 <= self.V.T
        if h.gd.is_finite:
            return h.gd.value + I_MAX + 1 <= self.V.T
        return True


# ---------------------------------------------------------------------------
# individual checks


def check_module_axioms(ctx: Context) -> list:
    try:
        validate_module(ctx.V)
        return [CheckResult("module_axioms", PASS, {"dims": list(ctx.V.dims)})]
    except FigmodError as exc:
        return [CheckResult("module_axioms", FAIL, {"error": str(exc)})]


def check_regularity_bound(ctx: Context) -> list:
    h = ctx.hom
    detail = {
        "gd": _deg(h.gd),
        "hd": {str(i): _deg(d) for i, d in sorted(h.hd.items())},
        "reg_computed": _deg(h.reg),
        "bound": h.bound,
    }
    if not ctx.homology_certified:
        return [CheckResult("regularity_bound", UNCERTIFIED, detail)]
    if h.bound is None:
        ok = all(d.is_neg_inf for d in h.hd.values())
    else:
        ok = all(d.is_neg_inf or d.value - i <= h.bound for i, d in h.hd.items())
    return [CheckResult("regularity_bound", PASS if ok else FAIL, detail)]


def check_sharp_filtered_acyclic(ctx: Context) -> list:
    h = ctx.hom
    detail = {"hd": {str(i): _deg(d) for i, d in sorted(h.hd.items())}}
    if not ctx.homology_certified:
        return [CheckResult("sharp_filtered_acyclic", UNCERTIFIED, detail)]
    lhs = h.hd[1].is_neg_inf
    rhs = all(h.hd[i].is_neg_inf for i in range(2, I_MAX + 1))
    return [CheckResult("sharp_filtered_acyclic", PASS if lhs == rhs else FAIL, detail)]


def check_coherent_iff_finite_torsion(ctx: Context) -> list:
    t, h = ctx.torsion, ctx.hom
    detail = {"td": _deg(t.td), "hd1": _deg(h.hd[1]), "gd": _deg(h.gd)}
    if not h.gd.known:
        return [CheckResult("coherent_iff_finite_torsion_degree", UNCERTIFIED, detail)]
    # a truncation can hide either side, so a mismatch is never conclusive
    coherent, finite_td = h.hd[1].known, t.certified
    return [CheckResult("coherent_iff_finite_torsion_degree", PASS if coherent and finite_td else UNCERTIFIED, detail)]


def check_torsion_first_derivative(ctx: Context) -> list:
    t = ctx.torsion
    d = derivative(ctx.V, 1)
    kdims = list(d.kernel.dims)
    kdeg = degree_of_dims(kdims)
    detail = {"ker_tau1": kdims, "td": _deg(t.td)}
    if not t.certified:
        return [CheckResult("torsion_degree_from_first_derivative", UNCERTIFIED, detail)]
    ok = str(kdeg) == str(t.td)
    return [CheckResult("torsion_degree_from_first_derivative", PASS if ok else FAIL, detail)]


def check_derived_derivative_kernel(ctx: Context) -> list:
    series = ctx.series
    d = derivative(ctx.V, 1)
    lhs = list(series[1].dims) if 1 in series else []
    rhs = list(d.kernel.dims)[: len(lhs)]
    detail = {"H1_D": lhs, "ker_tau1": rhs}
    return [CheckResult("derived_derivative_is_kernel_of_tau", PASS if lhs == rhs else FAIL, detail)]


def check_torsion_complex(ctx: Context) -> list:
    t, C, tab = ctx.torsion, ctx.complex, ctx.table
    top = C.top
    lhs = list(tab.rows[0].dims[: top + 1])
    rhs = list(t.dims.dims[: top + 1])
    detail = {"H_minus_1": lhs, "torsion": rhs}
    if not (t.certified and C.certified):
        return [CheckResult("torsion_equals_complex_h_minus_one", UNCERTIFIED, detail)]
    return [CheckResult("torsion_equals_complex_h_minus_one", PASS if lhs == rhs else FAIL, detail)]


def check_stabilization_dreg(ctx: Context) -> list:
    sharp, stab = ctx.sharp, ctx.stab
    if sharp.value and sharp.certified:
        return []
    series = ctx.series
    value = dreg_value(series)
    vanishes = bool(series) and series[max(series)].is_zero()
    detail = {
        "N": stab.N,
        "max_deg_H1_Db": _deg(value),
        "series": {str(b): list(s.dims) for b, s in sorted(series.items())},
    }
    certified = stab.certified and sharp.certified and vanishes
    out = []
    if not certified:
        out.append(CheckResult("stabilization_index_from_derived_derivatives", UNCERTIFIED, detail))
        out.append(CheckResult("stabilization_index_from_derived_derivatives_plus_one", UNCERTIFIED, detail, True))
        return out
    direct = value.is_finite and value.value == stab.N
    shifted = (value.value + 1 if value.is_finite else 0) == stab.N
    out.append(CheckResult("stabilization_index_from_derived_derivatives", PASS if direct else FAIL, detail))
    out.append(CheckResult("stabilization_index_from_derived_derivatives_plus_one", PASS if shifted else FAIL, detail, True))
    return out


def check_higher_local_cohomology(ctx: Context) -> list:
    t, tab, sharp = ctx.torsion, ctx.table, ctx.sharp
    top = tab.complex.top
    is_torsion = t.certified and tuple(t.dims.dims) == tuple(ctx.V.dims)
    rows = {str(i - 1): list(r.dims) for i, r in enumerate(tab.rows)}
    if is_torsion:
        ok = list(tab.rows[0].dims) == list(ctx.V.dims[: top + 1]) and all(r.is_zero() for r in tab.rows[1:])
        kind = "torsion"
    elif sharp.value:
        ok = all(r.is_zero() for r in tab.rows)
        kind = "sharp_filtered"
    else:
        return []
    detail = {"class": kind, "local_cohomology": rows}
    status = PASS if ok else FAIL
    if not tab.certified:
        status = UNCERTIFIED
    return [CheckResult("higher_local_cohomology_vanishes", status, detail)]


def check_oracle(ctx: Context) -> list:
    tab = ctx.table
    detail = {"local_cohomology": {str(i - 1): list(r.dims) for i, r in enumerate(tab.rows[:4])}}
    try:
        o = fi_ext_oracle(ctx.V)
    except (TruncationInsufficient, NoStabilization, SizeLimitExceeded) as exc:
        detail["error"] = str(exc)
        return [CheckResult("local_cohomology_matches_ext_oracle", UNCERTIFIED, detail)]
    detail["oracle"] = {str(i): v for i, v in sorted(o.rows.items())}
    detail["skipped_degrees"] = [r for r, _ in o.skipped]
    # H^i_m is rows[i] of the table (rows[0] is H^0_m = H^{-1} of the complex)
    covered = True
    for i, vals in o.rows.items():
        local = tab.rows[i].dims if i < len(tab.rows) else ()
        for r, x in enumerate(local):
            if x and (r >= len(vals) or vals[r] is None):
                covered = False
    agree = o.agrees_with(tab)
    status = PASS if agree else FAIL
    if agree and not covered or not tab.certified:
        status = UNCERTIFIED
    return [CheckResult("local_cohomology_matches_ext_oracle", status, detail)]


def check_corollaries(ctx: Context) -> list:
    out = []
    for v in invariant_report(ctx.V, ctx.table, ctx.hom, ctx.depth):
        info = bool(v.detail.get("informational"))
        status = v.status
        if v.name.startswith("regularity") and status != UNCERTIFIED and not ctx.homology_certified:
            status = UNCERTIFIED
        out.append(CheckResult(v.name, status, {k: x for k, x in v.detail.items() if k != "informational"}, info))
    return out


def check_local_duality(ctx: Context) -> list:
    rows = local_duality_check(ctx.V, ctx.table)
    if not rows:
        return []
    worst = PASS
    for v in rows:
        if v.status == FAIL:
            worst = FAIL
        elif v.status == UNCERTIFIED and worst == PASS:
            worst = UNCERTIFIED
    detail = {v.name: {"status": v.status, **v.detail} for v in rows}
    detail["dimension"] = _deg(ctx.table.dimension)
    return [CheckResult("local_duality", worst, detail)]


CHECKS = {
    "module_axioms": check_module_axioms,
    "regularity_bound": check_regularity_bound,
    "sharp_filtered_acyclic": check_sharp_filtered_acyclic,
    "coherent_iff_finite_torsion_degree": check_coherent_iff_finite_torsion,
    "torsion_degree_from_first_derivative": check_torsion_first_derivative,
    "derived_derivative_is_kernel_of_tau": check_derived_derivative_kernel,
    "torsion_equals_complex_h_minus_one": check_torsion_complex,
    "stabilization_index_from_derived_derivatives": check_stabilization_dreg,
    "higher_local_cohomology_vanishes": check_higher_local_cohomology,
    "local_cohomology_matches_ext_oracle": check_oracle,
    "local_cohomology_corollaries": check_corollaries,
    "local_duality": check_local_duality,
}
DEFAULT_CHECKS = [name for name in CHECKS if name != "local_cohomology_matches_ext_oracle"]


def run_suite(module, checks=None, name: str | None = None) -> Report:
    """Run the named checks (default: all but the oracle) on a module or module file."""
    if isinstance(module, ModuleFile):
        V = module.realize()
        name = name or module.name
    else:
        V = module
    ctx = Context(V)
    rows = []
    for key in checks or DEFAULT_CHECKS:
        if key not in CHECKS:
            raise KeyError(f"unknown check {key!r}")
        try:
            rows.extend(CHECKS[key](ctx))
        except TruncationInsufficient as exc:
            rows.append(CheckResult(key, UNCERTIFIED, {"error": str(exc)}))
    return Report(name or V.name or "module", rows)
