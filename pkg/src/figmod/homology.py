"""FI_G-homology: H_0, covers, resolutions, homological degrees, regularity, torsion.

Two cover flavours are available.  The default covers the degree-n generators
by one relative free module M(W) with W the G_n-span of the new generators;
these modules are homology-acyclic, so the H_i they produce agree with a free
resolution while keeping kernels small.  ``literal=True`` covers by one copy
of M(n) per H_0 basis vector.  ``literal="projective"`` keeps every term
projective: M(W) where k[G_n] is semisimple, otherwise M of W induced up from
the largest G_m whose group algebra is semisimple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .category import WreathElement, enumerate_hom, generator_count, hom_index, wreath_inverse
from .degree import GradedDegree, GradedDims, degree_of_dims
from .errors import SizeLimitExceeded, TruncationInsufficient
from .module import (
    IndexOp,
    KronOp,
    ModuleMap,
    TruncatedModule,
    direct_sum,
    free_module,
    free_relative,
    g_span,
    submodule,
    zero_module,
)

# ---------------------------------------------------------------------------
# covers


@dataclass
class Copy:
    degree: int
    module: TruncatedModule
    unit: int
    start_unit: int
    eps: np.ndarray  # images of the start unit's basis, rows in the target
    relative: bool = False  # M(W) copy rather than M(degree)
    induced: "Induced | None" = None  # set when W is induced from a p'-subgroup
    rows: dict = dc_field(default_factory=dict)  # degree -> image rows


@dataclass
class Induced:
    """W' = k[Hom([n-m],[n])] (x) W with diagonal action, projective as Ind from G_m.

    ``reps[i]`` sends the base injection onto points m+1..n to the i-th hom
    element; ``rinv[i]`` is reps[i]^{-1} acting on W in its own coordinates.
    """

    m: int
    unit: int  # dim W
    sub_generators: list  # indices into the G_n generators that generate G_m
    sub_actions: list  # W-coordinate row matrices of those generators
    reps: list
    rinv: list


def _unit_moves(op):
    which = op.which if op.which is not None else np.full(len(op.image), -1)
    return op.image, which


def _propagate(copy: Copy, A: TruncatedModule, m: int) -> None:
    """Image rows of copy.module at degree m, by breadth-first search over units."""
    F = A.field
    P, d, dimA = copy.module, copy.unit, A.dims[m]
    units = P.dims[m] // d if d else 0
    if dimA == 0:
        copy.rows[m] = F.zeros((units * d, 0))
        return
    R = F.zeros((units, d, dimA))
    known = np.zeros(units, dtype=bool)
    if m == copy.degree:
        R[copy.start_unit] = copy.eps
        known[copy.start_unit] = True
    else:
        prev = copy.rows[m - 1]
        inc = P.inclusions[m - 1]
        img = A.include(m - 1, prev)
        R[inc.image] = img.reshape(-1, d, dimA)
        known[inc.image] = True
    frontier = np.nonzero(known)[0]
    ngen = generator_count(m, A.group)
    while frontier.size:
        nxt = []
        for j in range(ngen):
            image, which = _unit_moves(P.actions[m][j])
            cand = frontier[which[frontier] == -1]
            ch = image[cand]
            fresh = ~known[ch]
            cand, ch = cand[fresh], ch[fresh]
            if not ch.size:
                continue
            ch, first = np.unique(ch, return_index=True)
            cand = cand[first]
            R[ch] = A.act(m, j, R[cand].reshape(-1, dimA)).reshape(-1, d, dimA)
            known[ch] = True
            nxt.append(ch)
        frontier = np.concatenate(nxt) if nxt else np.zeros(0, dtype=np.int64)
    if not known.all():
        raise RuntimeError("unit search did not reach every basis block")
    copy.rows[m] = R.reshape(units * d, dimA)


@dataclass
class Cover:
    target: TruncatedModule
    free: TruncatedModule
    copies: list
    images: list  # per degree: rows = images of free basis vectors in the target
    h0: list  # dim K_n / K_{<n}
    lower_rank: list  # dim K_{<n}
    generators: list  # per degree: rows lifting an H_0 basis
    T: int

    def map_matrix(self, n: int) -> np.ndarray:
        return self.images[n].T

    def degree_columns(self, n: int) -> np.ndarray:
        """Coordinates of the free module at degree n that belong to degree-n copies."""
        cols, off = [], 0
        for c in self.copies:
            size = c.module.dims[n]
            if c.degree == n:
                cols.extend(range(off, off + size))
            off += size
        return np.array(cols, dtype=np.int64)

    def as_map(self) -> ModuleMap:
        return ModuleMap(self.free, self.target.restrict(self.T), [self.images[n].T.copy() for n in range(self.T + 1)])


def free_cover(
    A: TruncatedModule,
    sub=None,
    T: int | None = None,
    literal: bool | str = False,
    cap: int | None = None,
    images: bool = True,
) -> Cover:
    """Cover the submodule ``sub`` of A (all of A if None) by relative free modules.

    With ``images=False`` only generators are chosen: K_{<n} is computed as the
    G_n-span of the image of K_{n-1}, and the cover map is not materialized.
    """
    F, G = A.field, A.group
    Tc = A.T if T is None else T
    copies, imgs, h0, lower, gens = [], [], [], [], []
    for n in range(Tc + 1):
        dimA = A.dims[n]
        K = F.eye(dimA) if sub is None else sub[n][0]
        if images:
            for c in copies:
                _propagate(c, A, n)
            img = np.vstack([c.rows[n] for c in copies]) if copies else F.zeros((0, dimA))
            red, piv = F.rref(img) if img.shape[0] and dimA else (F.zeros((0, dimA)), [])
        else:
            prevK = None if n == 0 else (F.eye(A.dims[n - 1]) if sub is None else sub[n - 1][0])
            if prevK is not None and prevK.shape[0] and dimA:
                red, piv = g_span(A, n, A.include(n - 1, prevK))
            else:
                red, piv = F.zeros((0, dimA)), []
        resid = F.rref(la.reduce_rows(F, red, piv, K))[0] if K.shape[0] else F.zeros((0, dimA))
        lower.append(len(piv))
        h0.append(resid.shape[0])
        gens.append(resid)
        if resid.shape[0]:
            copies.extend(_new_copies(A, n, resid, Tc, literal))
            if images and cap is not None and sum(c.module.dims[Tc] for c in copies) > cap:
                raise SizeLimitExceeded(f"cover exceeds {cap} basis vectors in degree {Tc}")
            if images:
                for c in copies:
                    if c.degree == n:
                        _propagate(c, A, n)
        if images:
            imgs.append(np.vstack([c.rows[n] for c in copies]) if copies else F.zeros((0, dimA)))
    free = direct_sum(*[c.module for c in copies]) if copies else zero_module(G, F, Tc)
    return Cover(A, free, copies, imgs if images else None, h0, lower, gens, Tc)


def _semisimple(field, group, n: int) -> bool:
    """k[G_n] is semisimple iff the characteristic does not divide n! |G|^n."""
    p = getattr(field, "p", 0)
    return p == 0 or (math.factorial(n) * group.order**n) % p != 0


def _coset_rep(phi, m: int, n: int, group) -> WreathElement:
    """An element of G_n carrying points m+1..n (trivial labels) to phi."""
    perm, labels = [0] * n, [group.identity] * n
    for x in range(len(phi.f)):
        perm[m + x], labels[m + x] = phi.f[x], phi.g[x]
    rest = [y for y in range(1, n + 1) if y not in phi.f]
    for x in range(m):
        perm[x] = rest[x]
    return WreathElement(n, tuple(perm), tuple(labels))


def _induced_copy(A, n, B, piv, m, Tc):
    F, G = A.field, A.group
    k = n - m
    d = B.shape[0]
    homs = enumerate_hom(k, n, G)
    P = free_module(k, G, F, n)
    mats = []
    for j in range(generator_count(n, G)):
        Wj = A.act(n, j, B)[:, piv].T
        perm = P.actions[n][j]
        if not isinstance(perm, IndexOp):
            raise TypeError("free module actions are expected to be index maps")
        mats.append(KronOp(perm, Wj))
    M = free_relative(n, mats, G, F, Tc, dim=len(homs) * d, check=False)
    reps = [_coset_rep(phi, m, n, G) for phi in homs]
    rinv = [A.apply_wreath(wreath_inverse(g, G), B)[:, piv] for g in reps]
    sub = list(range(m - 1)) + ([n - 1 + t for t in range(len(G.generators))] if m else [])
    sub_actions = [A.act(n, j, B)[:, piv] for j in sub]
    info = Induced(m, d, sub, sub_actions, reps, rinv)
    return Copy(n, M, len(homs) * d, 0, np.tile(B, (len(homs), 1)), relative=True, induced=info)


def _new_copies(A, n, resid, Tc, literal):
    F, G = A.field, A.group
    induce_from = None
    if literal == "projective":
        literal = False
        if not _semisimple(F, G, n):
            induce_from = max(m for m in range(n) if _semisimple(F, G, m))
            literal = induce_from == 0
    if literal:
        M = free_module(n, G, F, Tc)
        ident = tuple(range(1, n + 1)) + (G.identity,) * n
        start = hom_index(n, n, G)[ident]
        return [Copy(n, M, 1, start, v.reshape(1, -1)) for v in resid]
    B, piv = g_span(A, n, resid)
    if induce_from is not None:
        return [_induced_copy(A, n, B, piv, induce_from, Tc)]
    mats = [A.act(n, j, B)[:, piv].T.copy() for j in range(generator_count(n, G))]
    M = free_relative(n, mats, G, F, Tc, dim=B.shape[0], check=False)
    return [Copy(n, M, B.shape[0], 0, B, relative=True)]


def kernel_of_cover(cover: Cover, T: int | None = None) -> list:
    F = cover.target.field
    top = cover.T if T is None else T
    out = []
    for n in range(top + 1):
        dimF = cover.free.dims[n]
        if dimF == 0:
            out.append((F.zeros((0, 0)), []))
            continue
        if cover.target.dims[n] == 0:
            out.append((F.eye(dimF), list(range(dimF))))
            continue
        K = la.kernel(F, cover.images[n].T)
        out.append((K, [int(np.nonzero(r)[0][0]) for r in K]))
    return out


# ---------------------------------------------------------------------------
# resolutions and H_i


@dataclass
class Resolution:
    V: TruncatedModule
    covers: list  # covers[i] resolves K_i (K_0 = V)
    kernels: list  # kernels[i] = K_{i+1} inside covers[i].free
    T: int

    def homology(self, i: int) -> GradedDims:
        """dim H_i(V)_n = h0(K_i)_n - rank(K_i,n -> generators of F_{i-1} at n)."""
        if i == 0:
            return GradedDims(self.covers[0].h0, self.covers[0].T)
        cov, prev = self.covers[i], self.covers[i - 1]
        K = self.kernels[i - 1]
        F = self.V.field
        top = cov.T
        dims = []
        for n in range(top + 1):
            rows = K[n][0]
            cols = prev.degree_columns(n)
            rk = la.rank(F, rows[:, cols]) if rows.shape[0] and cols.size else 0
            dims.append(cov.h0[n] - rk)
        return GradedDims(dims, top)

    def differential(self, i: int) -> ModuleMap:
        """F_i -> F_{i-1} (i >= 1) or the augmentation F_0 -> V (i = 0)."""
        return self.covers[i].as_map()


def resolution(
    V: TruncatedModule, i_max: int = 3, T: int | None = None, literal: bool | str = False, T_tail=None, cap: int | None = None,
    full_last: bool = False,
) -> Resolution:
    """Covers of V, K_1, ..., K_{i_max}; ``T_tail`` limits degrees for stages >= 2."""
    top = V.T if T is None else T
    covers = [free_cover(V, None, top, literal, cap)]
    kernels = []
    for i in range(1, i_max + 1):
        Ti = top if (T_tail is None or i < 2) else min(top, T_tail)
        K = kernel_of_cover(covers[-1], Ti)
        kernels.append(K)
        last = i == i_max and not full_last
        covers.append(free_cover(covers[-1].free, K, Ti, literal, cap, images=not last))
    return Resolution(V, covers, kernels, top)


def h0(V: TruncatedModule):
    """(graded dims of H_0(V), per-degree generator lifts in V_n)."""
    c = free_cover(V)
    return GradedDims(c.h0, V.T), c.generators


def generating_degree(V: TruncatedModule) -> GradedDegree:
    return degree_of_dims(h0(V)[0].dims, V.T)


@dataclass
class HomologyReport:
    T: int
    h0: GradedDims
    H: dict  # i -> GradedDims
    gd: GradedDegree
    hd: dict  # i -> GradedDegree
    reg: GradedDegree
    reg_certified: bool
    bound: int | None  # hd_1 + min(hd_1, gd) - 1 when defined
    T_res: int
    resolution: Resolution

    def hd_list(self):
        return [self.hd[i] for i in sorted(self.hd)]


def regularity_bound(gd: GradedDegree, hd1: GradedDegree):
    if gd.is_finite and hd1.is_finite:
        return hd1.value + min(hd1.value, gd.value) - 1
    return None


def homology_report(V: TruncatedModule, i_max: int = 3, literal: bool = False) -> HomologyReport:
    T = V.T
    base = resolution(V, 1, literal=literal)
    H0 = base.homology(0)
    H1 = base.homology(1)
    gd = degree_of_dims(H0.dims, T)
    hd1 = degree_of_dims(H1.dims, T)
    R = regularity_bound(gd, hd1)
    if R is not None:
        T_res = min(T, R + i_max + 1)
    elif gd.is_finite and hd1.is_neg_inf:
        T_res = min(T, gd.value + i_max + 1)
    elif gd.is_neg_inf:
        T_res = min(T, i_max + 1)
    else:
        T_res = T
    res = base
    if i_max >= 2:
        res = resolution(V, i_max, literal=literal, T_tail=T_res)
    H = {1: H1}
    hd = {1: hd1}
    for i in range(2, i_max + 1):
        Hi = res.homology(i)
        H[i] = Hi
        deg = degree_of_dims(Hi.dims)
        if deg.is_finite and deg.value >= T:
            deg = GradedDegree.exceeds(T)
        hd[i] = deg
    reg, cert = _regularity(hd, R)
    return HomologyReport(T, H0, H, gd, hd, reg, cert, R, T_res, res)


def _regularity(hd: dict, R):
    if any(not d.known for d in hd.values()):
        return GradedDegree.exceeds(max(d.T for d in hd.values() if not d.known)), False
    if hd[1].is_neg_inf:
        return GradedDegree.neg_inf(), all(d.is_neg_inf for d in hd.values())
    vals = [d.value - i for i, d in hd.items() if d.is_finite]
    top = max(vals)
    return GradedDegree.finite(top), R is not None and top == R


def homological_degrees(V: TruncatedModule, i_max: int = 3) -> list:
    return homology_report(V, i_max).hd_list()


def regularity(V: TruncatedModule, i_max: int = 3):
    rep = homology_report(V, i_max)
    return rep.reg, rep.reg_certified


def is_acyclic_free_resolution(res: Resolution) -> bool:
    """d o d = 0 for consecutive maps, checked degree-wise."""
    F = res.V.field
    for i in range(1, len(res.covers)):
        a, b = res.covers[i - 1], res.covers[i]
        for n in range(b.T + 1):
            if b.images[n].shape[0] == 0 or a.images[n].shape[0] == 0:
                continue
            comp = F.matmul(b.images[n], a.images[n])
            if np.any(comp != 0):
                return False
    return True


# ---------------------------------------------------------------------------
# torsion


@dataclass
class Torsion:
    module: TruncatedModule
    inclusion: ModuleMap
    basis: list
    dims: GradedDims
    td: GradedDegree
    certified: bool
    top_kernel: list  # dims of ker(V_n -> V_{n+1})


def single_step_kernels(V: TruncatedModule) -> list:
    F = V.field
    out = []
    for n in range(V.T):
        if V.dims[n] == 0:
            out.append(0)
            continue
        M = V.inclusion_matrix(n)
        out.append(V.dims[n] - (la.rank(F, M) if V.dims[n + 1] else 0))
    return out


def torsion_submodule(V: TruncatedModule) -> Torsion:
    """Torsion at degree n = ker(V_n -> V_T) along the chain of inclusions."""
    F, T = V.field, V.T
    basis = [None] * (T + 1)
    chain = F.eye(V.dims[T])  # rows: V_n basis images in V_T
    basis[T] = (F.zeros((0, V.dims[T])), [])
    for n in range(T - 1, -1, -1):
        chain = V.include(n, V.basis(n)) if n == T - 1 else _chain_step(V, n, chain)
        if V.dims[n] == 0:
            basis[n] = (F.zeros((0, 0)), [])
            continue
        K = la.kernel(F, chain.T) if chain.shape[1] else F.eye(V.dims[n])
        basis[n] = (K, [int(np.nonzero(r)[0][0]) for r in K])
    dims = [b[0].shape[0] for b in basis]
    mod = submodule(V, basis)
    inc = ModuleMap(mod, V, [b[0].T.copy() for b in basis])
    single = single_step_kernels(V)
    top = degree_of_dims(dims)
    certified = (T == 0 or single[T - 1] == 0) and (not top.is_finite or top.value + 1 < T)
    td = top if certified else GradedDegree.exceeds(T)
    return Torsion(mod, inc, basis, GradedDims(dims, T), td, certified, single)


def _chain_step(V, n, chain_next):
    """Rows: images in V_T of the basis of V_n, given those for V_{n+1}."""
    F = V.field
    step = V.include(n, V.basis(n))
    if step.shape[0] == 0 or chain_next.shape[0] == 0:
        return F.zeros((V.dims[n], chain_next.shape[1]))
    return F.matmul(step, chain_next)
