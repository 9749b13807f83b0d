"""Truncated FI_G-modules: graded pieces, generator actions and inclusions.

Linear maps are stored as *ops* in column convention (an op ``A`` of shape
dst x src sends a column vector x to A x).  Internally vectors travel as
rows, so every op exposes ``apply_rows(field, X)`` returning ``(A X^T)^T``.
Free modules use index/block ops so that large permutation-like actions
never become dense matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import linalg as la
from .category import (
    FIGMorphism,
    FiniteGroup,
    WreathElement,
    _label_words,
    enumerate_hom,
    extend_generator_index,
    factor_through_inclusion,
    generator_count,
    hom_count,
    wreath_generators,
    wreath_word,
)
from .errors import (
    DegreeExceedsTruncation,
    IncompatibleModules,
    InvalidRepresentation,
    TruncationTooSmall,
    ValidationError,
)

# ---------------------------------------------------------------------------
# ops


class Op:
    src_dim: int
    dst_dim: int

    def apply_rows(self, field, X):
        raise NotImplementedError

    def dense(self, field) -> np.ndarray:
        return self.apply_rows(field, field.eye(self.src_dim)).T.copy()


class DenseOp(Op):
    def __init__(self, mat):
        self.mat = mat
        self.dst_dim, self.src_dim = mat.shape

    def apply_rows(self, field, X):
        if X.shape[0] == 0 or self.src_dim == 0 or self.dst_dim == 0:
            return field.zeros((X.shape[0], self.dst_dim))
        return field.matmul(X, self.mat.T)

    def dense(self, field):
        return self.mat


class IndexOp(Op):
    """Sends basis vector j to basis vector image[j]."""

    def __init__(self, image, dst_dim: int):
        self.image = np.asarray(image, dtype=np.int64)
        self.src_dim = len(self.image)
        self.dst_dim = int(dst_dim)
        self.unit = 1
        self.which = None

    def apply_rows(self, field, X):
        Y = field.zeros((X.shape[0], self.dst_dim))
        if self.src_dim:
            Y[:, self.image] = X
        return Y


class BlockOp(Op):
    """Block-monomial op: unit block c goes to block image[c], twisted by mats[which[c]]."""

    def __init__(self, image, which, mats, unit: int, dst_units: int):
        self.image = np.asarray(image, dtype=np.int64)
        self.which = np.asarray(which, dtype=np.int64)
        self.mats = mats
        self.unit = int(unit)
        self.src_dim = len(self.image) * self.unit
        self.dst_dim = int(dst_units) * self.unit

    def apply_rows(self, field, X):
        k, d = X.shape[0], self.unit
        Y = field.zeros((k, self.dst_dim))
        if self.src_dim == 0 or k == 0:
            return Y
        X3 = X.reshape(k, -1, d)
        Y3 = Y.reshape(k, -1, d)
        for t in np.unique(self.which):
            cs = np.nonzero(self.which == t)[0]
            blk = X3[:, cs, :]
            if t >= 0:
                m = self.mats[t]
                flat = blk.reshape(-1, d)
                flat = m.apply_rows(field, flat) if isinstance(m, Op) else field.matmul(flat, m.T)
                blk = flat.reshape(k, len(cs), d)
            Y3[:, self.image[cs], :] = blk
        return Y3.reshape(k, self.dst_dim)


class KronOp(Op):
    """perm (x) inner on a basis of blocks: permute blocks by an IndexOp, act by ``inner`` in each."""

    def __init__(self, perm: "IndexOp", inner):
        self.perm = perm
        self.inner = inner
        d = inner.shape[0]
        self.src_dim = perm.src_dim * d
        self.dst_dim = perm.dst_dim * d

    def apply_rows(self, field, X):
        k, d = X.shape[0], self.inner.shape[0]
        Y = field.zeros((k, self.dst_dim))
        if k == 0 or self.src_dim == 0:
            return Y
        Z = field.matmul(X.reshape(-1, d), self.inner.T).reshape(k, -1, d)
        Y.reshape(k, -1, d)[:, self.perm.image, :] = Z
        return Y


class SumOp(Op):
    """Block-diagonal op over direct-sum coordinates."""

    def __init__(self, parts, src_dim: int, dst_dim: int):
        self.parts = parts  # (src_offset, dst_offset, op)
        self.src_dim = int(src_dim)
        self.dst_dim = int(dst_dim)

    def apply_rows(self, field, X):
        Y = field.zeros((X.shape[0], self.dst_dim))
        for so, do, op in self.parts:
            if op.src_dim and op.dst_dim:
                Y[:, do : do + op.dst_dim] = op.apply_rows(field, X[:, so : so + op.src_dim])
        return Y


class ChainOp(Op):
    """ops[0] is applied first."""

    def __init__(self, ops):
        self.ops = list(ops)
        self.src_dim = self.ops[0].src_dim
        self.dst_dim = self.ops[-1].dst_dim

    def apply_rows(self, field, X):
        for op in self.ops:
            X = op.apply_rows(field, X)
        return X


def identity_op(n: int) -> IndexOp:
    return IndexOp(np.arange(n), n)


# ---------------------------------------------------------------------------
# the module


class TruncatedModule:
    """Graded pieces V_0..V_T with G_n generator actions and inclusions V_n -> V_{n+1}."""

    def __init__(self, field, group: FiniteGroup, T: int, dims, actions, inclusions, name: str = ""):
        self.field = field
        self.group = group
        self.T = int(T)
        self.dims = [int(d) for d in dims]
        self.actions = actions
        self.inclusions = inclusions
        self.name = name
        if len(self.dims) != self.T + 1:
            raise ValidationError("dims must have length T + 1")
        if len(self.actions) != self.T + 1 or len(self.inclusions) != self.T:
            raise ValidationError("need actions for 0..T and inclusions for 0..T-1")
        for n in range(self.T + 1):
            if len(self.actions[n]) != generator_count(n, group):
                raise ValidationError(f"wrong number of generator actions at degree {n}")

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<TruncatedModule{label} T={self.T} dims={self.dims}>"

    # basic access -----------------------------------------------------------
    def act(self, n: int, j: int, X):
        return self.actions[n][j].apply_rows(self.field, X)

    def include(self, n: int, X):
        return self.inclusions[n].apply_rows(self.field, X)

    def include_chain(self, n: int, m: int, X):
        for k in range(n, m):
            X = self.include(k, X)
        return X

    def apply_word(self, n: int, word, X):
        for j in reversed(word):
            X = self.act(n, j, X)
        return X

    def apply_wreath(self, w: WreathElement, X):
        return self.apply_word(w.n, wreath_word(w, self.group), X)

    def apply_morphism(self, phi: FIGMorphism, X):
        if phi.target > self.T:
            raise DegreeExceedsTruncation(f"target degree {phi.target} exceeds T = {self.T}")
        w, _ = factor_through_inclusion(phi, self.group)
        return self.apply_wreath(w, self.include_chain(phi.source, phi.target, X))

    def action_matrix(self, n: int, j: int) -> np.ndarray:
        return self.actions[n][j].dense(self.field)

    def inclusion_matrix(self, n: int) -> np.ndarray:
        return self.inclusions[n].dense(self.field)

    def basis(self, n: int):
        return self.field.eye(self.dims[n])

    def is_zero(self) -> bool:
        return not any(self.dims)

    def degree(self):
        from .degree import degree_of_dims

        return degree_of_dims(self.dims)

    def restrict(self, T: int) -> "TruncatedModule":
        if T > self.T:
            raise TruncationTooSmall(f"cannot restrict T={self.T} to {T}")
        return TruncatedModule(
            self.field, self.group, T, self.dims[: T + 1], self.actions[: T + 1], self.inclusions[:T], self.name
        )

    def validate(self, max_degree: int | None = None) -> None:
        validate_module(self, max_degree)


def induced_map(V: TruncatedModule, phi: FIGMorphism) -> np.ndarray:
    """Matrix of V(phi): V_n -> V_m."""
    X = V.apply_morphism(phi, V.basis(phi.source))
    return X.T.copy()


# ---------------------------------------------------------------------------
# relation checks


def wreath_relation_pairs(n: int, group: FiniteGroup):
    """Pairs of words (u, v) with u = v in G_n; together they present G_n."""
    if n == 0:
        return []
    pairs = []
    s = list(range(n - 1))
    lab = {x: [n - 1 + k for k in w] for x, w in _label_words(group).items()}
    for i in s:
        pairs.append(([i, i], []))
    for i in s[:-1]:
        pairs.append(([i, i + 1] * 3, []))
    for i in s:
        for j in s:
            if j > i + 1:
                pairs.append(([i, j], [j, i]))
    order = group.order
    for x in range(order):
        for y in range(order):
            # labels at position 1 multiply in reverse order
            pairs.append((lab[x] + lab[y], lab[group.mul(y, x)]))
    for k in range(len(group.generators)):
        gk = [n - 1 + k]
        for i in s[1:]:
            pairs.append((gk + [i], [i] + gk))
        if n >= 2:
            for k2 in range(len(group.generators)):
                other = [0, n - 1 + k2, 0]
                pairs.append((gk + other, other + gk))
    return pairs


def check_wreath_relations(n: int, group: FiniteGroup, apply_word, dim: int, field) -> list:
    """Return the failing relations for the action given by ``apply_word(word, X)``."""
    X = field.eye(dim)
    bad = []
    for u, v in wreath_relation_pairs(n, group):
        if not np.array_equal(apply_word(u, X), apply_word(v, X)):
            bad.append((u, v))
    return bad


def validate_module(V: TruncatedModule, max_degree: int | None = None) -> None:
    """Group relations, equivariance of inclusions, and invariance of the complement."""
    F, G = V.field, V.group
    top = V.T if max_degree is None else min(V.T, max_degree)
    for n in range(top + 1):
        bad = check_wreath_relations(n, G, lambda w, X, n=n: V.apply_word(n, w, X), V.dims[n], F)
        if bad:
            raise ValidationError(f"degree {n}: group relation fails for words {bad[0]}")
    e = G.identity
    for n in range(min(top, V.T - 1) + 1):
        X = V.basis(n)
        inc = V.include(n, X)
        for j in range(generator_count(n, G)):
            lhs = V.include(n, V.act(n, j, X))
            rhs = V.act(n + 1, extend_generator_index(n, j, 1, G), inc)
            if not np.array_equal(lhs, rhs):
                raise ValidationError(f"inclusion at degree {n} is not equivariant for generator {j}")
        for gamma in range(G.order):
            labels = (e,) * n + (gamma,)
            w = WreathElement(n + 1, tuple(range(1, n + 2)), labels)
            if not np.array_equal(V.apply_wreath(w, inc), inc):
                raise ValidationError(f"label on the new point moves the image of degree {n}")
        if n + 2 <= V.T:
            inc2 = V.include(n + 1, inc)
            if not np.array_equal(V.act(n + 2, n, inc2), inc2):
                raise ValidationError(f"swapping the two new points moves the image of degree {n}")


# ---------------------------------------------------------------------------
# free modules M(r)


def _perm_count(a: int, b: int) -> int:
    out = 1
    for k in range(a - b + 1, a + 1):
        out *= k
    return out


def hom_arrays(r: int, n: int, group: FiniteGroup):
    homs = enumerate_hom(r, n, group)
    Fm = np.array([phi.f for phi in homs], dtype=np.int64).reshape(len(homs), r)
    Gm = np.array([phi.g for phi in homs], dtype=np.int64).reshape(len(homs), r)
    return Fm, Gm


def hom_rank(Fm, Gm, r: int, n: int, order: int) -> np.ndarray:
    """Vectorized canonical index of morphisms given as rows of (f, g)."""
    N = Fm.shape[0]
    idx = np.zeros(N, dtype=np.int64)
    for i in range(r):
        smaller_used = np.zeros(N, dtype=np.int64)
        for j in range(i):
            smaller_used += Fm[:, j] < Fm[:, i]
        c = Fm[:, i] - 1 - smaller_used
        idx += c * _perm_count(n - i - 1, r - i - 1)
    lab = np.zeros(N, dtype=np.int64)
    for i in range(r):
        lab = lab * order + Gm[:, i]
    return idx * order**r + lab


@lru_cache(maxsize=None)
def _free_ops(r: int, n: int, group: FiniteGroup, with_inclusion: bool):
    table = np.array(group.table, dtype=np.int64)
    Fm, Gm = hom_arrays(r, n, group)
    dim = Fm.shape[0]
    acts = []
    for w in wreath_generators(n, group):
        perm = np.array(w.perm, dtype=np.int64)
        labels = np.array(w.labels, dtype=np.int64)
        F2 = perm[Fm - 1] if r else Fm
        G2 = table[Gm, labels[Fm - 1]] if r else Gm
        acts.append(IndexOp(hom_rank(F2, G2, r, n, group.order), dim))
    inc = None
    if with_inclusion:
        inc = IndexOp(hom_rank(Fm, Gm, r, n + 1, group.order), hom_count(r, n + 1, group))
    return acts, inc


def free_module(r: int, group: FiniteGroup, field, T: int) -> TruncatedModule:
    """M(r) with basis Hom([r],[n]) in canonical order."""
    if r > T:
        raise TruncationTooSmall(f"generator degree {r} exceeds T = {T}")
    if r < 0:
        raise ValueError("degree must be nonnegative")
    dims = [hom_count(r, n, group) for n in range(T + 1)]
    actions, inclusions = [], []
    for n in range(T + 1):
        if n < r:
            actions.append([identity_op(0)] * generator_count(n, group))
            if n < T:
                inclusions.append(IndexOp(np.zeros(0, dtype=np.int64), dims[n + 1]))
            continue
        acts, inc = _free_ops(r, n, group, n < T)
        actions.append(acts)
        if n < T:
            inclusions.append(inc)
    return TruncatedModule(field, group, T, dims, actions, inclusions, name=f"M({r})")


# ---------------------------------------------------------------------------
# relative free modules M(W)


@lru_cache(maxsize=None)
def _subsets(r: int, m: int):
    subs = list(combinations(range(1, m + 1), r))
    return subs, {s: i for i, s in enumerate(subs)}


@lru_cache(maxsize=None)
def _relative_structure(r: int, m: int, group: FiniteGroup):
    """Coset moves at degree m: per generator (image, which), plus the inclusion image."""
    subs, index = _subsets(r, m)
    ngen = len(group.generators)
    moves = []
    for i in range(1, m):
        image = np.empty(len(subs), dtype=np.int64)
        which = np.full(len(subs), -1, dtype=np.int64)
        for c, S in enumerate(subs):
            a, b = i in S, (i + 1) in S
            if a and b:
                image[c] = c
                which[c] = S.index(i)  # s_{pos} with pos 1-based = index + 1
            elif a or b:
                T2 = tuple(sorted(i + 1 if x == i else i if x == i + 1 else x for x in S))
                image[c] = index[T2]
            else:
                image[c] = c
        moves.append((image, which))
    for k in range(ngen if m else 0):
        image = np.arange(len(subs), dtype=np.int64)
        which = np.full(len(subs), -1, dtype=np.int64)
        if r:
            for c, S in enumerate(subs):
                if S[0] == 1:
                    which[c] = r - 1 + k
        moves.append((image, which))
    _, index_up = _subsets(r, m + 1)
    inc = np.array([index_up[S] for S in subs], dtype=np.int64)
    return moves, inc


def check_representation(r: int, mats, group: FiniteGroup, field) -> None:
    if len(mats) != generator_count(r, group):
        raise InvalidRepresentation(f"need {generator_count(r, group)} generator matrices for G_{r}")
    dim = mats[0].shape[0] if mats else 0
    ops = [DenseOp(np.asarray(m)) for m in mats]

    def apply(word, X):
        for j in reversed(word):
            X = ops[j].apply_rows(field, X)
        return X

    if any(m.shape != (dim, dim) for m in mats):
        raise InvalidRepresentation("generator matrices must be square of equal size")
    if check_wreath_relations(r, group, apply, dim, field):
        raise InvalidRepresentation("matrices violate the defining relations of the wreath product")


def free_relative(r: int, W, group: FiniteGroup, field, T: int, dim: int | None = None, check: bool = True):
    """M(W) = k[Hom([r],[-])] (x)_{kG_r} W; basis = increasing injections x basis of W.

    ``W`` is the list of generator matrices of G_r (column convention).  For
    r = 0 pass ``dim``.
    """
    if r > T:
        raise TruncationTooSmall(f"generator degree {r} exceeds T = {T}")
    mats = [m if isinstance(m, Op) else field.array(m) for m in W]
    d = (mats[0].dst_dim if isinstance(mats[0], Op) else mats[0].shape[0]) if mats else int(dim or 0)
    if check and r > 0:
        check_representation(r, mats, group, field)
    dims = [comb(m, r) * d for m in range(T + 1)]
    actions, inclusions = [], []
    for m in range(T + 1):
        if m < r:
            actions.append([identity_op(0)] * generator_count(m, group))
            if m < T:
                inclusions.append(IndexOp(np.zeros(0, dtype=np.int64), dims[m + 1]))
            continue
        moves, inc = _relative_structure(r, m, group)
        C = comb(m, r)
        actions.append([BlockOp(img, wh, mats, d, C) for img, wh in moves])
        if m < T:
            inclusions.append(BlockOp(inc, np.full(C, -1), mats, d, comb(m + 1, r)))
    return TruncatedModule(field, group, T, dims, actions, inclusions, name=f"M(W_{r})")


# ---------------------------------------------------------------------------
# direct sums, submodules, quotients


def _check_compatible(*mods):
    a = mods[0]
    for b in mods[1:]:
        if b.field != a.field or b.group != a.group or b.T != a.T:
            raise IncompatibleModules("modules differ in field, group or truncation")


def zero_module(group, field, T: int) -> TruncatedModule:
    actions = [[identity_op(0)] * generator_count(n, group) for n in range(T + 1)]
    inclusions = [identity_op(0) for _ in range(T)]
    return TruncatedModule(field, group, T, [0] * (T + 1), actions, inclusions, name="0")


def direct_sum(*mods: TruncatedModule) -> TruncatedModule:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    _check_compatible(*mods)
    a = mods[0]
    if len(mods) == 1:
        return a
    G, T = a.group, a.T
    dims = [sum(m.dims[n] for m in mods) for n in range(T + 1)]

    def summed(ops_per_mod, n_src, n_dst):
        parts, so, do = [], 0, 0
        for m, op in zip(mods, ops_per_mod):
            parts.append((so, do, op))
            so += m.dims[n_src]
            do += m.dims[n_dst]
        return SumOp(parts, so, do)

    actions = [
        [summed([m.actions[n][j] for m in mods], n, n) for j in range(generator_count(n, G))] for n in range(T + 1)
    ]
    inclusions = [summed([m.inclusions[n] for m in mods], n, n + 1) for n in range(T)]
    return TruncatedModule(a.field, G, T, dims, actions, inclusions, name=" + ".join(m.name or "?" for m in mods))


def free_sum(degrees, group, field, T: int) -> TruncatedModule:
    """(+)_i M(r_i), basis blocks concatenated in the given order."""
    if not degrees:
        return zero_module(group, field, T)
    return direct_sum(*[free_module(r, group, field, T) for r in degrees])


def as_rows(field, rows, dim: int):
    a = np.asarray(rows, dtype=field.dtype)
    if a.size == 0:
        return field.zeros((0, dim))
    return a.reshape(-1, dim)


def g_span(A: TruncatedModule, n: int, rows, start=None):
    """G_n-span of ``rows`` (plus an already closed RREF ``start``) inside A_n."""
    F = A.field
    dim = A.dims[n]
    if start is None:
        red, piv = F.zeros((0, dim)), []
    else:
        red, piv = start
    rows = as_rows(F, rows, dim)
    new = la.reduce_rows(F, red, piv, rows)
    frontier, _ = F.rref(new)
    ngen = generator_count(n, A.group)
    while frontier.shape[0]:
        red, piv = F.rref(np.vstack([red, frontier]))
        imgs = np.vstack([A.act(n, j, frontier) for j in range(ngen)]) if ngen else F.zeros((0, dim))
        frontier, _ = F.rref(la.reduce_rows(F, red, piv, imgs))
    return red, list(piv)


def closure(A: TruncatedModule, seeds) -> list:
    """Smallest submodule containing the seed rows; RREF basis per degree."""
    F = A.field
    out = []
    for n in range(A.T + 1):
        rows = seeds.get(n) if isinstance(seeds, dict) else seeds[n]
        if rows is None:
            rows = F.zeros((0, A.dims[n]))
        rows = as_rows(F, rows, A.dims[n])
        if n > 0 and out[-1][0].shape[0]:
            carried = A.include(n - 1, out[-1][0])
            rows = np.vstack([rows, carried])
        out.append(g_span(A, n, rows))
    return out


@dataclass
class Quotient:
    module: TruncatedModule
    proj: list  # per degree, q x a
    lift: list  # per degree, a x q


def quotient(A: TruncatedModule, sub) -> Quotient:
    """A / S for a submodule given as per-degree RREF (rows, pivots)."""
    F = A.field
    projs, lifts, dims = [], [], []
    for n in range(A.T + 1):
        red, piv = sub[n]
        p, q = la.projection_from_rref(F, A.dims[n], red, piv)
        projs.append(p)
        lifts.append(la.complement_lift(F, A.dims[n], piv))
        dims.append(q)
    actions = []
    for n in range(A.T + 1):
        L = lifts[n].T
        acts = []
        for j in range(generator_count(n, A.group)):
            Y = A.act(n, j, L)
            acts.append(DenseOp(F.matmul(projs[n], Y.T) if dims[n] else F.zeros((0, 0))))
        actions.append(acts)
    inclusions = []
    for n in range(A.T):
        Y = A.include(n, lifts[n].T)
        inclusions.append(DenseOp(F.matmul(projs[n + 1], Y.T) if dims[n] and dims[n + 1] else F.zeros((dims[n + 1], dims[n]))))
    V = TruncatedModule(F, A.group, A.T, dims, actions, inclusions, name=f"{A.name}/S")
    return Quotient(V, projs, lifts)


def submodule(A: TruncatedModule, sub) -> TruncatedModule:
    """The submodule with per-degree RREF bases; coordinates read off at pivots."""
    F = A.field
    dims = [sub[n][0].shape[0] for n in range(A.T + 1)]
    actions = []
    for n in range(A.T + 1):
        B, piv = sub[n]
        acts = []
        for j in range(generator_count(n, A.group)):
            Y = A.act(n, j, B) if dims[n] else F.zeros((0, A.dims[n]))
            acts.append(DenseOp(Y[:, piv].T.copy() if dims[n] else F.zeros((0, 0))))
        actions.append(acts)
    inclusions = []
    for n in range(A.T):
        B, _ = sub[n]
        _, piv1 = sub[n + 1]
        if dims[n] == 0 or dims[n + 1] == 0:
            inclusions.append(DenseOp(F.zeros((dims[n + 1], dims[n]))))
            continue
        Y = A.include(n, B)
        inclusions.append(DenseOp(Y[:, piv1].T.copy()))
    return TruncatedModule(F, A.group, A.T, dims, actions, inclusions, name=f"sub({A.name})")


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    generator_degrees: list
    relations: list = dc_field(default_factory=list)  # (degree, vector over F_0 basis)

    def validate(self, group: FiniteGroup, T: int) -> None:
        for r in self.generator_degrees:
            if not 0 <= r <= T:
                raise TruncationTooSmall(f"generator degree {r} outside 0..{T}")
        for d, vec in self.relations:
            if not 0 <= d <= T:
                raise TruncationTooSmall(f"relation degree {d} outside 0..{T}")
            need = sum(hom_count(r, d, group) for r in self.generator_degrees)
            if len(vec) != need:
                raise ValidationError(f"relation at degree {d} has length {len(vec)}, expected {need}")


@dataclass
class Realization:
    module: TruncatedModule
    free: TruncatedModule
    relations: list  # closed submodule S of the free module
    proj: list
    lift: list


def presentation_closure(P: Presentation, group, field, T: int):
    P.validate(group, T)
    F0 = free_sum(P.generator_degrees, group, field, T)
    seeds = {}
    for d, vec in P.relations:
        v = field.array([field.element(x) for x in vec]).reshape(1, -1)
        seeds[d] = v if d not in seeds else np.vstack([seeds[d], v])
    return F0, closure(F0, seeds)


def realize(P: Presentation, group, field, T: int) -> Realization:
    F0, S = presentation_closure(P, group, field, T)
    q = quotient(F0, S)
    return Realization(q.module, F0, S, q.proj, q.lift)


def realize_presentation(P: Presentation, group, field, T: int) -> TruncatedModule:
    return realize(P, group, field, T).module


# ---------------------------------------------------------------------------
# module maps


@dataclass
class ModuleMap:
    source: TruncatedModule
    target: TruncatedModule
    blocks: list  # per degree, target dim x source dim

    def __post_init__(self):
        if self.source.field != self.target.field or self.source.group != self.target.group:
            raise IncompatibleModules("maps need a common field and group")
        if self.source.T != self.target.T:
            raise IncompatibleModules("maps need a common truncation")

    def validate(self) -> None:
        V, W, F = self.source, self.target, self.source.field
        for n in range(V.T + 1):
            h = self.blocks[n]
            if h.shape != (W.dims[n], V.dims[n]):
                raise ValidationError(f"block {n} has shape {h.shape}")
            X = V.basis(n)
            for j in range(generator_count(n, V.group)):
                lhs = _rows_times(F, V.act(n, j, X), h)
                rhs = W.act(n, j, _rows_times(F, X, h))
                if not np.array_equal(lhs, rhs):
                    raise ValidationError(f"map is not equivariant at degree {n}")
            if n < V.T:
                lhs = _rows_times(F, V.include(n, X), self.blocks[n + 1])
                rhs = W.include(n, _rows_times(F, X, h))
                if not np.array_equal(lhs, rhs):
                    raise ValidationError(f"map does not commute with inclusions at degree {n}")


def _rows_times(field, X, h):
    """Rows of (h X^T)^T."""
    if X.shape[0] == 0 or h.shape[0] == 0 or h.shape[1] == 0:
        return field.zeros((X.shape[0], h.shape[0]))
    return field.matmul(X, h.T)


def identity_map(V: TruncatedModule) -> ModuleMap:
    return ModuleMap(V, V, [V.field.eye(d) for d in V.dims])


def zero_map(V: TruncatedModule, W: TruncatedModule) -> ModuleMap:
    return ModuleMap(V, W, [V.field.zeros((W.dims[n], V.dims[n])) for n in range(V.T + 1)])


def compose_maps(outer: ModuleMap, inner: ModuleMap) -> ModuleMap:
    F = inner.source.field
    blocks = []
    for a, b in zip(outer.blocks, inner.blocks):
        if a.shape[1] == 0 or b.shape[0] == 0:
            blocks.append(F.zeros((a.shape[0], b.shape[1])))
        else:
            blocks.append(F.matmul(a, b))
    return ModuleMap(inner.source, outer.target, blocks)


@dataclass
class KernelCokernel:
    kernel: TruncatedModule
    kernel_inclusion: ModuleMap
    kernel_basis: list
    cokernel: TruncatedModule
    cokernel_projection: ModuleMap
    cokernel_lift: list


def map_kernel_cokernel(h: ModuleMap) -> KernelCokernel:
    V, W, F = h.source, h.target, h.source.field
    ker = []
    img = []
    for n in range(V.T + 1):
        b = h.blocks[n]
        K = la.kernel(F, b) if V.dims[n] else F.zeros((0, 0))
        ker.append((K, _pivots(K)))
        img.append(F.rref(b.T) if V.dims[n] and W.dims[n] else (F.zeros((0, W.dims[n])), []))
    K = submodule(V, ker)
    inc = ModuleMap(K, V, [ker[n][0].T.copy() for n in range(V.T + 1)])
    q = quotient(W, img)
    proj = ModuleMap(W, q.module, q.proj)
    return KernelCokernel(K, inc, ker, q.module, proj, q.lift)


def _pivots(R) -> list:
    piv = []
    for row in R:
        nz = np.nonzero(row)[0]
        piv.append(int(nz[0]))
    return piv


def span_dims(V: TruncatedModule, rows_per_degree) -> list:
    F = V.field
    return [la.rank(F, r) if r.size else 0 for r in rows_per_degree]
