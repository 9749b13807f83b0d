"""Local cohomology by two routes: the shift complex and Ext against M(r)/m^n M(r)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .category import generator_count, hom_count
from .degree import GradedDegree, GradedDims, degree_of_dims
from .errors import NoStabilization, SizeLimitExceeded, TruncationInsufficient
from .functors import depth as derivative_depth
from .homology import Copy, _propagate, homology_report, resolution, torsion_submodule
from .functors import shift_module
from .module import TruncatedModule, free_module, quotient
from .nagpal import FilteredComplex, build_complex, complex_cohomology, is_sharp_filtered, stabilization_index

PASS, FAIL, UNCERTIFIED = "PASS", "FAIL", "UNCERTIFIED"


@dataclass
class LocalCohomologyTable:
    rows: list  # rows[i] = GradedDims of H^i_m(V)
    dimension: GradedDegree
    depth: GradedDegree
    sharp_filtered: bool
    certified: bool
    complex: FilteredComplex

    def degree(self, i: int) -> GradedDegree:
        if i >= len(self.rows):
            return GradedDegree.neg_inf()
        return degree_of_dims(self.rows[i].dims)


def local_cohomology(V: TruncatedModule, complex_: FilteredComplex | None = None) -> LocalCohomologyTable:
    """H^i_m(V) = H^{i-1} of the shift complex."""
    C = complex_ or build_complex(V)
    coh = complex_cohomology(C)
    sharp = is_sharp_filtered(V)
    nonzero = [i for i, h in enumerate(coh) if not h.is_zero()]
    if sharp.value:
        dim = GradedDegree.pos_inf()
    elif nonzero:
        dim = GradedDegree.finite(max(nonzero))
    else:
        dim = GradedDegree.neg_inf()
    dep = GradedDegree.finite(min(nonzero)) if nonzero else GradedDegree.pos_inf()
    return LocalCohomologyTable(coh, dim, dep, sharp.value, C.certified and sharp.certified, C)


# ---------------------------------------------------------------------------
# the Ext oracle


def truncated_free(r: int, n: int, group, field, T: int) -> TruncatedModule:
    """M(r) / m^n M(r): kill every degree >= r + n."""
    M = free_module(r, group, field, T)
    sub = []
    for m in range(T + 1):
        d = M.dims[m]
        if m >= r + n:
            sub.append((field.eye(d), list(range(d))))
        else:
            sub.append((field.zeros((0, d)), []))
    return quotient(M, sub).module


def _equivariant(V: TruncatedModule, s: int, gens: list, actions: list, d: int) -> list:
    """Basis of d x dim V_s matrices X with g.X = A_g X for each listed generator."""
    F = V.field
    dV = V.dims[s]
    cols = []
    for k in range(d * dV):
        X = F.zeros((d * dV,))
        X[k] = 1
        X = X.reshape(d, dV)
        parts = [F.sub(V.act(s, j, X), F.matmul(Ag, X)).reshape(-1) for j, Ag in zip(gens, actions)]
        cols.append(np.concatenate(parts) if parts else F.zeros((0,)))
    system = np.stack(cols, axis=1)
    sol = la.kernel(F, system) if system.shape[0] else F.eye(d * dV)
    return [x.reshape(d, dV) for x in sol]


def _hom_basis(cp: Copy, V: TruncatedModule) -> list:
    """Basis of Hom(copy, V), each given by the images of the start unit's basis."""
    F, s = V.field, cp.degree
    if V.dims[s] == 0:
        return []
    if not cp.relative:
        return [row.reshape(1, -1) for row in F.eye(V.dims[s])]
    ind = cp.induced
    if ind is None:
        gens = list(range(generator_count(s, V.group)))
        acts = [cp.module.actions[s][j].apply_rows(F, F.eye(cp.unit)) for j in gens]
        return _equivariant(V, s, gens, acts, cp.unit)
    # Frobenius: G_m-maps f0 on W extend by phi (x) w -> g_phi f0(g_phi^{-1} w)
    out = []
    for X0 in _equivariant(V, s, ind.sub_generators, ind.sub_actions, ind.unit):
        blocks = [V.apply_wreath(g, F.matmul(R, X0)) for g, R in zip(ind.reps, ind.rinv)]
        out.append(np.vstack(blocks))
    return out


def _extensions(cp: Copy, V: TruncatedModule, basis: list, top: int) -> list:
    """For each Hom basis element, the images of the copy's basis in V up to ``top``."""
    out = []
    for X in basis:
        c = Copy(cp.degree, cp.module, cp.unit, cp.start_unit, X, relative=cp.relative)
        for m in range(cp.degree, min(top, V.T, cp.module.T) + 1):
            _propagate(c, V, m)
        out.append(c.rows)
    return out


def ext_groups(Q: TruncatedModule, V: TruncatedModule, i_max: int, cap: int = 3000) -> list:
    """dim Ext^i(Q, V) for i <= i_max via a projective resolution of Q.

    Copies are M(W) where k[G_n] is semisimple (W is then projective) and
    M(n) otherwise, so every term is projective.
    """
    F = V.field
    res = resolution(Q, i_max + 1, literal="projective", cap=cap)
    gens = [c.copies for c in res.covers]
    for lst in gens:
        for cp in lst:
            if cp.degree > V.T:
                raise TruncationInsufficient("resolution generator beyond the module truncation")
    top = max((cp.degree for lst in gens for cp in lst), default=0)
    homs = [[_hom_basis(cp, V) for cp in lst] for lst in gens[: i_max + 1]]
    exts = [[_extensions(cp, V, hb, top) for cp, hb in zip(lst, hl)] for lst, hl in zip(gens, homs)]

    def cochain_dim(j):
        return sum(len(hb) for hb in homs[j])

    def delta(j):
        # Hom(F_j, V) -> Hom(F_{j+1}, V), into start-unit coordinates of F_{j+1}
        blocks = []
        for cp2 in gens[j + 1]:
            t, d2 = cp2.degree, cp2.unit
            cols = []
            off = 0
            for cp, ext in zip(gens[j], exts[j]):
                size = cp.module.dims[t] if t <= cp.module.T else 0
                coeff = cp2.eps[:, off : off + size]
                for rows in ext:
                    if V.dims[t] == 0 or size == 0 or not np.any(coeff):
                        cols.append(F.zeros((d2 * V.dims[t],)))
                    else:
                        cols.append(F.matmul(coeff, rows[t]).reshape(-1))
                off += size
            if cols:
                blocks.append(np.stack(cols, axis=1))
        if not blocks:
            return F.zeros((0, cochain_dim(j)))
        return np.vstack(blocks)

    ranks = []
    for j in range(i_max + 1):
        Dj = delta(j)
        ranks.append(la.rank(F, Dj) if Dj.size else 0)
    return [cochain_dim(i) - ranks[i] - (ranks[i - 1] if i > 0 else 0) for i in range(i_max + 1)]


@dataclass
class OracleResult:
    rows: dict  # i -> list over r of stabilized dims (None where not computed)
    stable_at: dict = dc_field(default_factory=dict)  # r -> n
    skipped: list = dc_field(default_factory=list)  # (r, reason)

    def agrees_with(self, table: "LocalCohomologyTable") -> bool:
        for i, vals in self.rows.items():
            local = table.rows[i].dims if i < len(table.rows) else ()
            for r, v in enumerate(vals):
                if v is None or r >= len(local):
                    continue
                if v != local[r]:
                    return False
        return True


def fi_ext_oracle(
    V: TruncatedModule, i_max: int = 2, n_max: int | None = None, r_max: int | None = None, cap: int = 3000, method: str = "shift"
) -> OracleResult:
    """Colimit over n of Ext^i(M(r)/m^n M(r), V), per degree r, for i <= i_max.

    ``method="shift"`` evaluates degree r as Ext^i(M(0)/m^n, Sigma_r V): the
    shift has an exact left adjoint sending M(0)/m^n to M(r)/m^n M(r), and
    resolving M(0)/m^n needs generators only up to degree n + i_max.
    ``method="direct"`` resolves M(r)/m^n M(r) itself (degree bound 2r + n + i_max).
    Degrees that outrun the truncation or the size cap are skipped and listed.
    """
    if i_max > 2:
        raise ValueError("the oracle is limited to i <= 2")
    if method not in ("shift", "direct"):
        raise ValueError(f"unknown method {method!r}")
    G, F = V.group, V.field
    top = V.T if r_max is None else min(V.T, r_max)
    rows = {i: [None] * (top + 1) for i in range(i_max + 1)}
    result = OracleResult(rows)
    tors = torsion_submodule(V).dims.dims
    td = degree_of_dims(tors)
    for r in range(top + 1):
        # torsion in degree r dies within td + 1 - r steps; below that H^0 has not reached its limit
        n_min = max(1, td.value + 1 - r) if td.is_finite and tors[r] else 1
        prev, done, reason = None, False, None
        n_top = n_max if n_max is not None else max(4, n_min + 1)
        for n in range(1, n_top + 1):
            if method == "shift":
                TQ, room = n + i_max, V.T - r
            else:
                TQ, room = 2 * r + n + i_max, V.T
            if TQ > room:
                reason = f"needs degree {TQ} beyond the truncation"
                break
            if method == "shift":
                Q, W = truncated_free(0, n, G, F, TQ), shift_module(V, r)
            else:
                Q, W = truncated_free(r, n, G, F, TQ), V
            try:
                vals = ext_groups(Q, W, i_max, cap)
            except SizeLimitExceeded:
                reason = "resolution exceeds the size cap"
                break
            if prev is not None and vals == prev and n - 1 >= n_min:
                for i in range(i_max + 1):
                    rows[i][r] = vals[i]
                result.stable_at[r] = n - 1
                done = True
                break
            prev = vals
        if not done:
            if reason is None:
                raise NoStabilization(f"Ext did not stabilize by n = {n_top} in degree {r}")
            result.skipped.append((r, reason))
    return result


def fi_hom_direct(V: TruncatedModule, n: int) -> list:
    """Elements of V_r killed by the transition into degree r + n, per r."""
    out = []
    for r in range(V.T - n + 1):
        d = V.dims[r]
        if d == 0:
            out.append(0)
            continue
        X = V.include_chain(r, r + n, V.basis(r))
        out.append(d - (la.rank(V.field, X) if X.size else 0))
    return out


# ---------------------------------------------------------------------------
# corollary and duality checks


@dataclass
class Verdict:
    name: str
    status: str
    detail: dict


def invariant_report(V: TruncatedModule, table: LocalCohomologyTable | None = None, hom=None, dep=None) -> list:
    """Depth, stabilization index and regularity compared against local cohomology."""
    table = table or local_cohomology(V)
    hom = hom or homology_report(V)
    dep = dep or derivative_depth(V, sharp_filtered=table.sharp_filtered)
    out = []
    cert = table.certified
    # depth from derivatives vs first nonzero local cohomology
    status = PASS if dep.value == table.depth else FAIL
    if not cert:
        status = UNCERTIFIED
    out.append(Verdict("depth_matches_local_cohomology", status, {"derivative": str(dep.value), "local": str(table.depth)}))
    # N(V) vs top degree of local cohomology
    degs = [table.degree(i) for i in range(len(table.rows))]
    finite = [d.value for d in degs if d.is_finite]
    N = table.complex.shifts[0]
    if table.sharp_filtered:
        out.append(Verdict("stabilization_from_local_cohomology", PASS, {"N": N, "sharp_filtered": True}))
    else:
        rhs = max(finite) + 1 if finite else None
        status = PASS if rhs == N else FAIL
        out.append(Verdict("stabilization_from_local_cohomology", status if cert else UNCERTIFIED, {"N": N, "max_deg_plus_one": rhs}))
    # regularity upper bound and the equality probe
    top = max((d + i for i, d in enumerate([x.value if x.is_finite else None for x in degs]) if d is not None), default=None)
    reg = hom.reg
    tv = float("-inf") if top is None else top
    detail = {"reg": str(reg), "bound": top}
    if reg.known and (hom.reg_certified or reg.is_neg_inf):
        lo = hi = reg.as_number()
    elif reg.known and hom.bound is not None:
        # computed reg is a lower bound, the regularity bound an upper one
        lo, hi = reg.as_number(), hom.bound
        detail["upper"] = hi
    else:
        lo, hi = None, None
    if lo is None:
        below = equal = UNCERTIFIED
    else:
        below = PASS if hi <= tv else FAIL if lo > tv else UNCERTIFIED
        equal = PASS if lo == hi == tv else FAIL if lo > tv or hi < tv else UNCERTIFIED
    out.append(Verdict("regularity_below_local_bound", below, dict(detail)))
    out.append(Verdict("regularity_equals_local_bound", equal, {**detail, "informational": True}))
    return out


def local_duality_check(V: TruncatedModule, table: LocalCohomologyTable | None = None) -> list:
    """Compare torsion of the k-th derivative stage with H^k_m for k = d+1-i, 1 <= i <= d+1."""
    table = table or local_cohomology(V)
    if not table.dimension.is_finite:
        return []
    d = table.dimension.value
    C = table.complex
    out = []
    for i in range(1, d + 2):
        k = d + 1 - i
        if k >= len(C.stages):
            lhs = None
        else:
            tor = torsion_submodule(C.stages[k])
            lhs = tor.dims.dims
        rhs = table.rows[k].dims if k < len(table.rows) else ()
        top = min(len(rhs), len(lhs)) if lhs is not None else 0
        if lhs is None:
            ok = not any(rhs)
        else:
            ok = tuple(lhs[:top]) == tuple(rhs[:top])
        status = PASS if ok else FAIL
        if not table.certified:
            status = UNCERTIFIED
        out.append(Verdict(f"duality_i{i}", status, {"torsion_of_stage": lhs and list(lhs[:top]), "local": list(rhs[:top])}))
    return out
