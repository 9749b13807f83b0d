from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figmod.category import FiniteGroup, compose, enumerate_hom, hom_index, identity
from figmod.errors import InvalidRepresentation, TruncationTooSmall
from figmod.fuzz import FuzzConfig, random_presentation
from figmod.linalg import PrimeField, rank
from figmod.module import (
    ModuleMap,
    Presentation,
    direct_sum,
    free_module,
    free_relative,
    g_span,
    identity_map,
    induced_map,
    map_kernel_cokernel,
    realize_presentation,
    validate_module,
    zero_map,
    zero_module,
)

F5 = PrimeField(5)
TRIV = FiniteGroup.trivial()
Z2 = FiniteGroup.cyclic(2)


def regular_rep(r, G, F):
    """Generator matrices of G_r acting on k[G_r] by left multiplication."""
    from figmod.category import wreath_generators

    elems = enumerate_hom(r, r, G)
    idx = hom_index(r, r, G)
    mats = []
    for w in wreath_generators(r, G):
        m = F.zeros((len(elems), len(elems)))
        for c, h in enumerate(elems):
            m[idx[compose(w.as_morphism(), h, G).key()], c] = 1
        mats.append(m)
    return mats


def sign_rep(r, G, F):
    # transpositions act by -1, labels trivially
    n_s = max(r - 1, 0)
    return [F.array([[F.element(-1)]])] * n_s + [F.eye(1)] * len(G.generators)


def test_free_module_examples():
    M0 = free_module(0, TRIV, F5, 5)
    assert list(M0.dims) == [1] * 6
    for n in range(5):
        assert M0.inclusion_matrix(n).tolist() == [[1]]
    assert list(free_module(1, TRIV, F5, 4).dims) == [0, 1, 2, 3, 4]
    assert list(free_module(1, Z2, F5, 3).dims) == [0, 2, 4, 6]
    with pytest.raises(TruncationTooSmall):
        free_module(3, TRIV, F5, 2)


@pytest.mark.parametrize("G", [TRIV, Z2])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_free_module_axioms(G, r):
    validate_module(free_module(r, G, F5, 4))


def test_free_relative_examples():
    triv1 = [F5.eye(1)]  # G_1 for trivial G has the single identity generator
    assert list(free_relative(1, triv1, TRIV, F5, 3).dims) == [0, 1, 2, 3]
    V = free_relative(2, sign_rep(2, TRIV, F5), TRIV, F5, 4)
    assert list(V.dims) == [0, 0, 1, 3, 6]
    validate_module(V)


def test_free_relative_rejects_bad_representation():
    with pytest.raises(InvalidRepresentation):
        free_relative(2, [F5.array([[2]]), F5.eye(1)], TRIV, F5, 3)


@pytest.mark.parametrize("G,r", [(TRIV, 1), (TRIV, 2), (Z2, 1), (Z2, 2)])
def test_regular_relative_is_free(G, r):
    T = 4
    MW = free_relative(r, regular_rep(r, G, F5), G, F5, T)
    M = free_module(r, G, F5, T)
    assert MW.dims == M.dims
    # generator id of M(r) goes to 1 (x) e_id; extend by the action on morphisms
    e = F5.zeros((1, MW.dims[r]))
    e[0, hom_index(r, r, G)[identity(r, G).key()]] = 1
    blocks = []
    for n in range(T + 1):
        cols = [MW.apply_morphism(phi, e)[0] for phi in enumerate_hom(r, n, G)]
        blocks.append(F5.array(np.array(cols).T) if cols else F5.zeros((MW.dims[n], 0)))
    h = ModuleMap(M, MW, blocks)
    h.validate()
    assert all(rank(F5, b) == b.shape[0] for b in blocks if b.size)


def test_realize_examples():
    V = realize_presentation(Presentation([0], [(2, [1])]), TRIV, F5, 6)
    assert list(V.dims) == [1, 1, 0, 0, 0, 0, 0]
    # e_{f=1} - e_{f=2} at degree 2 on a degree-1 generator
    V = realize_presentation(Presentation([1], [(2, [1, 4])]), TRIV, F5, 6)
    assert list(V.dims) == [0, 1, 1, 1, 1, 1, 1]
    V = realize_presentation(Presentation([0, 1, 1]), Z2, F5, 3)
    assert list(V.dims) == [1, 1 + 4, 1 + 8, 1 + 12]


def test_induced_map_examples():
    M1 = free_module(1, TRIV, F5, 3)
    assert induced_map(M1, identity(2, TRIV)).tolist() == F5.eye(2).tolist()


@pytest.mark.parametrize("G", [TRIV, Z2])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_induced_map_on_free_is_postcomposition(G, r):
    M = free_module(r, G, F5, 4)
    for n in range(r, 4):
        for m in range(n, min(n + 2, 5)):
            src, dst = hom_index(r, n, G), hom_index(r, m, G)
            for phi in enumerate_hom(n, m, G):
                A = induced_map(M, phi)
                want = F5.zeros((len(dst), len(src)))
                for psi in enumerate_hom(r, n, G):
                    want[dst[compose(phi, psi, G).key()], src[psi.key()]] = 1
                assert np.array_equal(A, want)


def test_kernel_cokernel_examples():
    M1 = free_module(1, TRIV, F5, 5)
    M0 = free_module(0, TRIV, F5, 5)
    kc = map_kernel_cokernel(identity_map(M1))
    assert kc.kernel.is_zero() and kc.cokernel.is_zero()
    kc = map_kernel_cokernel(zero_map(M1, M0))
    assert kc.kernel.dims == M1.dims and kc.cokernel.dims == M0.dims
    h = ModuleMap(M1, M0, [F5.array(np.ones((1, n), dtype=np.int64)) for n in range(6)])
    h.validate()
    kc = map_kernel_cokernel(h)
    assert list(kc.kernel.dims) == [0, 0, 1, 2, 3, 4]
    assert list(kc.cokernel.dims) == [1, 0, 0, 0, 0, 0]
    validate_module(kc.kernel)
    kc.kernel_inclusion.validate()
    kc.cokernel_projection.validate()


def test_direct_sum_examples():
    M0 = free_module(0, TRIV, F5, 3)
    M1 = free_module(1, TRIV, F5, 3)
    Z = zero_module(TRIV, F5, 3)
    assert direct_sum(M1, Z).dims == M1.dims
    assert direct_sum(Z, Z).is_zero()
    S = direct_sum(M0, M1)
    assert list(S.dims) == [1, 2, 3, 4]
    validate_module(S)


def _span_over_all_morphisms(V, n):
    rows = []
    B = V.basis(n - 1)
    for phi in enumerate_hom(n - 1, n, V.group):
        rows.append(V.apply_morphism(phi, B))
    stacked = np.vstack(rows) if rows else V.field.zeros((0, V.dims[n]))
    return rank(V.field, stacked) if stacked.size else 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "z2"]))
def test_lower_span_reduction(seed, group):
    # G_n-span of the standard inclusion image equals the span over every [n-1] -> [n]
    cfg = FuzzConfig(seed=seed, count=1, group=group, T=4)
    V = realize_presentation(random_presentation(cfg, 0), cfg.group_object(), F5, 4)
    validate_module(V)
    for n in range(1, 5):
        if V.dims[n - 1] == 0:
            continue
        red, _ = g_span(V, n, V.include(n - 1, V.basis(n - 1)))
        assert red.shape[0] == _span_over_all_morphisms(V, n)


@pytest.mark.parametrize("G", [TRIV, Z2])
def test_free_dims_formula(G):
    for r in range(4):
        M = free_module(r, G, F5, 6)
        for n in range(r, 7):
            assert M.dims[n] == math.perm(n, r) * G.order**r
