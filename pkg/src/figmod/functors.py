"""Shift, derivative, derived derivatives and depth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .category import WreathElement, extend_generator_index, generator_count, wreath_word
from .degree import GradedDegree, GradedDims, degree_of_dims
from .errors import TruncationInsufficient, TruncationTooSmall
from .homology import free_cover, kernel_of_cover
from .module import (
    ChainOp,
    ModuleMap,
    TruncatedModule,
    _rows_times,
    identity_op,
    map_kernel_cokernel,
    submodule,
)


def _cycle_word(n: int, a: int, group) -> list:
    """Word for c in G_{n+a+1}: fixes 1..n, n+j -> n+1+j, n+a+1 -> n+1."""
    m = n + a + 1
    perm = list(range(1, n + 1)) + [n + 1 + j for j in range(1, a + 1)] + [n + 1]
    return wreath_word(WreathElement(m, tuple(perm), (group.identity,) * m), group)


class _WordOp(ChainOp):
    def __init__(self, module: TruncatedModule, degree: int, word):
        ops = [module.actions[degree][j] for j in reversed(word)]
        if not ops:
            ops = [identity_op(module.dims[degree])]
        super().__init__(ops)


@dataclass
class ShiftResult:
    shifted: TruncatedModule
    tau: ModuleMap  # V restricted to T - a  ->  shifted


def shift_module(V: TruncatedModule, a: int) -> TruncatedModule:
    if a < 0:
        raise ValueError("shift amount must be nonnegative")
    if a > V.T:
        raise TruncationTooSmall(f"cannot shift by {a} with T = {V.T}")
    if a == 0:
        return V
    G, T = V.group, V.T - a
    dims = [V.dims[n + a] for n in range(T + 1)]
    actions = [
        [V.actions[n + a][extend_generator_index(n, j, a, G)] for j in range(generator_count(n, G))]
        for n in range(T + 1)
    ]
    inclusions = []
    for n in range(T):
        inclusions.append(ChainOp([V.inclusions[n + a], _WordOp(V, n + a + 1, _cycle_word(n, a, G))]))
    return TruncatedModule(V.field, G, T, dims, actions, inclusions, name=f"S_{a}({V.name})")


def tau_blocks(V: TruncatedModule, a: int) -> list:
    """tau_a at degree n is the chained inclusion V_n -> V_{n+a}."""
    return [V.include_chain(n, n + a, V.basis(n)).T.copy() for n in range(V.T - a + 1)]


def shift(V: TruncatedModule, a: int) -> ShiftResult:
    S = shift_module(V, a)
    return ShiftResult(S, ModuleMap(V.restrict(V.T - a), S, tau_blocks(V, a)))


@dataclass
class DerivativeResult:
    D: TruncatedModule
    kernel: TruncatedModule
    shift: ShiftResult
    proj: list  # Sigma_a V -> D_a V per degree
    lift: list  # D_a V -> Sigma_a V per degree (complement lift)
    kernel_basis: list


def derivative(V: TruncatedModule, a: int = 1) -> DerivativeResult:
    """D_a V = coker(tau_a) and H_1^{D_a}(V) = ker(tau_a)."""
    sh = shift(V, a)
    kc = map_kernel_cokernel(sh.tau)
    return DerivativeResult(kc.cokernel, kc.kernel, sh, kc.cokernel_projection.blocks, kc.cokernel_lift, kc.kernel_basis)


def shift_map(h: ModuleMap, a: int) -> ModuleMap:
    return ModuleMap(
        shift_module(h.source, a), shift_module(h.target, a), [h.blocks[n + a] for n in range(h.source.T - a + 1)]
    )


def derivative_map(h: ModuleMap, dV: DerivativeResult, dW: DerivativeResult, a: int = 1) -> ModuleMap:
    """D_a(h) = proj_W . h_{n+a} . lift_V."""
    F = h.source.field
    blocks = []
    for n in range(dV.D.T + 1):
        p, hh, l = dW.proj[n], h.blocks[n + a], dV.lift[n]
        if p.shape[0] == 0 or l.shape[1] == 0 or hh.shape[0] == 0 or hh.shape[1] == 0:
            blocks.append(F.zeros((p.shape[0], l.shape[1])))
        else:
            blocks.append(F.matmul(F.matmul(p, hh), l))
    return ModuleMap(dV.D, dW.D, blocks)


def iterate_derivative(h: ModuleMap, b: int):
    """Yield D^k(h) for k = 1..b, as ModuleMaps."""
    for _ in range(b):
        if h.source.T < 1:
            raise TruncationInsufficient("no truncation budget left for another derivative")
        dV, dW = derivative(h.source), derivative(h.target)
        h = derivative_map(h, dV, dW)
        yield h


def kernel_dims(h: ModuleMap) -> list:
    F = h.source.field
    out = []
    for n, blk in enumerate(h.blocks):
        d = h.source.dims[n]
        out.append(d - (la.rank(F, blk) if d and h.target.dims[n] else 0))
    return out


def syzygy_inclusion(V: TruncatedModule, i: int) -> ModuleMap:
    """The inclusion K_i -> F_{i-1} of the i-th syzygy of V (i >= 1), M(W) covers."""
    cover = free_cover(V)
    for _ in range(i - 1):
        cover = free_cover(cover.free, kernel_of_cover(cover))
    K = kernel_of_cover(cover)
    Kmod = submodule(cover.free, K)
    return ModuleMap(Kmod, cover.free, [K[n][0].T.copy() for n in range(cover.T + 1)])


def derived_derivative(V: TruncatedModule, i: int, b: int, inclusion: ModuleMap | None = None) -> GradedDims:
    """Graded dims of H_i^{D^b}(V) = ker(D^b K_i -> D^b F_{i-1}) for i >= 1."""
    if i < 1:
        raise ValueError("use derivative() for the functor itself")
    if b > V.T:
        raise TruncationInsufficient(f"D^{b} needs truncation at least {b}")
    h = inclusion if inclusion is not None else syzygy_inclusion(V, i)
    if b == 0:
        return GradedDims([0] * (V.T + 1), V.T)
    for h in iterate_derivative(h, b):
        pass
    return GradedDims(kernel_dims(h), h.source.T)


def derived_derivative_series(V: TruncatedModule, b_max: int | None = None) -> dict:
    """H_1^{D^b}(V) for b = 1..b_max, sharing one syzygy computation."""
    top = V.T if b_max is None else min(b_max, V.T)
    h = syzygy_inclusion(V, 1)
    out = {}
    for b, hb in enumerate(iterate_derivative(h, top), start=1):
        out[b] = GradedDims(kernel_dims(hb), hb.source.T)
    return out


@dataclass
class Depth:
    value: GradedDegree
    certified: bool
    series: dict


def depth(V: TruncatedModule, sharp_filtered: bool | None = None) -> Depth:
    """inf{b : H_1^{D^{b+1}}(V) != 0}; +inf when no derivative within budget shows a kernel."""
    series = derived_derivative_series(V)
    for b in sorted(series):
        if not series[b].is_zero():
            return Depth(GradedDegree.finite(b - 1), True, series)
    return Depth(GradedDegree.pos_inf(), bool(sharp_filtered), series)
