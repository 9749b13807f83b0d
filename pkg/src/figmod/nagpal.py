"""Sharp-filtered detection, the stabilization index N(V), and the complex built from shifts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .degree import GradedDegree, GradedDims, degree_of_dims
from .errors import TruncationInsufficient
from .functors import derivative, shift_module
from .module import ModuleMap, TruncatedModule
from .homology import resolution


@dataclass
class SharpCheck:
    value: bool
    certified: bool
    H1: GradedDims
    gd: GradedDegree


def is_sharp_filtered(V: TruncatedModule, bound: int | None = None) -> SharpCheck:
    """H_1(V) = 0 through the truncation; certified when T reaches ``bound`` (if given)."""
    res = resolution(V, 1)
    H1 = res.homology(1)
    gd = degree_of_dims(res.homology(0).dims, V.T)
    value = H1.is_zero()
    if bound is None:
        certified = gd.known and (V.T == 0 or H1.dims[-1] == 0)
    else:
        certified = V.T >= bound
    return SharpCheck(value, certified, H1, gd)


@dataclass
class Stabilization:
    N: int
    certified: bool
    bound: int | None  # degree up to which H_1 of every shift must be checked


def stabilization_index(V: TruncatedModule) -> Stabilization:
    """Smallest b with Sigma_b V sharp-filtered, by direct iteration.

    hd_1(Sigma_b V) <= max(gd V, hd_1 V), so a vanishing check through that
    degree is conclusive.
    """
    base = is_sharp_filtered(V)
    hd1 = degree_of_dims(base.H1.dims, V.T)
    if not base.gd.known or not hd1.known:
        raise TruncationInsufficient("generating or relation degree reaches the truncation")
    if base.value:
        return Stabilization(0, base.certified, None)
    bound = max(base.gd.value if base.gd.is_finite else -1, hd1.value)
    for b in range(1, V.T + 1):
        S = shift_module(V, b)
        chk = is_sharp_filtered(S, bound)
        if chk.value:
            return Stabilization(b, S.T >= bound, bound)
    raise TruncationInsufficient(f"no shift up to {V.T} is sharp-filtered")


@dataclass
class FilteredComplex:
    V: TruncatedModule
    terms: list  # F^0..F^L
    maps: list  # maps[0]: V -> F^0, maps[i]: F^{i-1} -> F^i
    shifts: list  # b_{-1}, b_0, ...
    stages: list  # V = stage_0, stage_{k+1} = D_{b_k} stage_k
    certified: bool
    top: int  # degrees <= top are covered by every term

    @property
    def length(self) -> int:
        return len(self.terms)


def _compose_blocks(field, outer, inner, top):
    blocks = []
    for n in range(top + 1):
        a, b = outer[n], inner[n]
        if a.shape[1] == 0 or b.shape[0] == 0:
            blocks.append(field.zeros((a.shape[0], b.shape[1])))
        else:
            blocks.append(field.matmul(a, b))
    return blocks


def build_complex(V: TruncatedModule) -> FilteredComplex:
    """0 -> V -> Sigma_{b_-1} V -> ... built by alternating shifts and derivatives."""
    F = V.field
    terms, maps, shifts, stages = [], [], [], [V]
    certified = True
    cur = V
    pending = None  # blocks stage_k -> (last term), per degree, to be followed by tau
    top = V.T
    for _ in range(V.T + 2):
        st = stabilization_index(cur)
        certified &= st.certified
        b = st.N
        shifts.append(b)
        if b == 0:
            term = cur
            tau_blocks = [F.eye(d) for d in cur.dims]
            nxt = None
        else:
            d = derivative(cur, b)
            term = d.shift.shifted
            tau_blocks = d.shift.tau.blocks
            nxt = d
        top = min(top, term.T)
        if term.is_zero():
            break
        src = V if not terms else terms[-1]
        blocks = tau_blocks if pending is None else _compose_blocks(F, tau_blocks, pending, term.T)
        maps.append(ModuleMap(src.restrict(term.T), term, blocks[: term.T + 1]))
        terms.append(term)
        if nxt is None or nxt.D.is_zero():
            break
        pending = nxt.proj  # Sigma_b stage -> D_b stage
        cur = nxt.D
        stages.append(cur)
    else:
        raise TruncationInsufficient("complex construction did not terminate within the truncation")
    return FilteredComplex(V, terms, maps, shifts, stages, certified, top)


def complex_cohomology(C: FilteredComplex) -> list:
    """Graded dims of H^{-1}, H^0, ..., H^{L-1} over degrees 0..C.top."""
    F = C.V.field
    top = C.top
    objs = [C.V] + C.terms

    def rank_of(k, n):
        # rank of the map out of objs[k] at degree n
        if k >= len(C.maps):
            return 0
        blk = C.maps[k].blocks[n]
        return la.rank(F, blk) if blk.size else 0

    out = []
    for k, obj in enumerate(objs):
        dims = []
        for n in range(top + 1):
            into = rank_of(k - 1, n) if k > 0 else 0
            dims.append(obj.dims[n] - rank_of(k, n) - into)
        out.append(GradedDims(dims, top))
    return out


def dreg_value(series: dict):
    """max_b deg H_1^{D^b}(V) over the computed b."""
    best = GradedDegree.neg_inf()
    for b in sorted(series):
        deg = degree_of_dims(series[b].dims)
        if deg.is_finite and (not best.is_finite or deg.value > best.value):
            best = deg
    return best
