from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figmod.category import FiniteGroup
from figmod.degree import GradedDegree
from figmod.functors import depth, derivative, derived_derivative, shift, shift_module
from figmod.fuzz import FuzzConfig, random_presentation
from figmod.linalg import PrimeField
from figmod.module import Presentation, direct_sum, free_module, realize_presentation, validate_module

F5 = PrimeField(5)
TRIV = FiniteGroup.trivial()
Z2 = FiniteGroup.cyclic(2)


def m0_mod_m2(T=8):
    return realize_presentation(Presentation([0], [(2, [1])]), TRIV, F5, T)


def mm0_like(T=8):
    return realize_presentation(Presentation([1], [(2, [1, 4])]), TRIV, F5, T)


def _fuzz(seed, group, T=5):
    cfg = FuzzConfig(seed=seed, count=1, group=group, T=T)
    return realize_presentation(random_presentation(cfg, 0), cfg.group_object(), F5, T)


def test_shift_examples():
    V = mm0_like(5)
    assert shift_module(V, 0) is V
    M0 = free_module(0, TRIV, F5, 6)
    assert shift_module(M0, 2).dims == M0.restrict(4).dims
    S = shift_module(free_module(1, TRIV, F5, 6), 1)
    assert S.dims == direct_sum(free_module(1, TRIV, F5, 5), free_module(0, TRIV, F5, 5)).dims


def test_derivative_examples():
    assert derivative(free_module(0, TRIV, F5, 5)).D.is_zero()
    assert list(derivative(free_module(1, TRIV, F5, 5)).D.dims) == [1] * 5
    assert list(derivative(m0_mod_m2(6)).kernel.dims) == [0, 1, 0, 0, 0, 0]


def test_derived_derivative_examples():
    for r in range(3):
        assert derived_derivative(free_module(r, TRIV, F5, 5), 1, 1).is_zero()
    assert derived_derivative(mm0_like(6), 2, 1).is_zero()


def test_depth_examples():
    assert depth(m0_mod_m2()).value == GradedDegree.finite(0)
    assert depth(mm0_like()).value == GradedDegree.finite(1)
    d = depth(free_module(1, TRIV, F5, 6), sharp_filtered=True)
    assert d.value.kind == "pos_inf" and d.certified


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "z2"]), st.integers(1, 2))
def test_shift_is_module_and_tau_is_map(seed, group, a):
    V = _fuzz(seed, group)
    sh = shift(V, a)
    validate_module(sh.shifted)
    sh.tau.validate()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "z2"]))
def test_first_derived_derivative_is_kernel_of_tau(seed, group):
    V = _fuzz(seed, group)
    got = derived_derivative(V, 1, 1).dims
    assert list(got) == list(derivative(V, 1).kernel.dims)[: len(got)]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "z2"]))
def test_second_homology_of_first_derivative_vanishes(seed, group):
    assert derived_derivative(_fuzz(seed, group), 2, 1).is_zero()


@pytest.mark.parametrize("G", [TRIV, Z2])
def test_shift_commutes_with_derivative_dims(G):
    # D_2 fits as coker of the chained inclusion; its dims equal dim V_{n+2} - rank
    V = m0_mod_m2(6) if G is TRIV else realize_presentation(Presentation([0], [(2, [1])]), Z2, F5, 6)
    d = derivative(V, 2)
    assert [V.dims[n + 2] for n in range(5)] == list(d.shift.shifted.dims)
    assert d.D.is_zero()
