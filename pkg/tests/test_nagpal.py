from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from figmod.category import FiniteGroup
from figmod.errors import TruncationInsufficient
from figmod.fuzz import FuzzConfig, random_presentation
from figmod.linalg import PrimeField
from figmod.module import Presentation, free_module, realize_presentation
from figmod.nagpal import build_complex, complex_cohomology, is_sharp_filtered, stabilization_index

F5 = PrimeField(5)
TRIV = FiniteGroup.trivial()


def m0_mod_m2(T=8):
    return realize_presentation(Presentation([0], [(2, [1])]), TRIV, F5, T)


def mm0_like(T=8):
    return realize_presentation(Presentation([1], [(2, [1, 4])]), TRIV, F5, T)


def test_sharp_filtered_examples():
    for r in range(3):
        assert is_sharp_filtered(free_module(r, TRIV, F5, 6)).value
    assert not is_sharp_filtered(m0_mod_m2()).value
    assert not is_sharp_filtered(mm0_like()).value


def test_stabilization_examples():
    assert stabilization_index(free_module(2, TRIV, F5, 6)).N == 0
    st0 = stabilization_index(m0_mod_m2())
    assert st0.N == 2 and st0.certified
    assert stabilization_index(mm0_like()).N == 1


def test_complex_examples():
    C = build_complex(free_module(1, TRIV, F5, 6))
    assert C.length == 1 and C.shifts == [0]
    assert all(h.is_zero() for h in complex_cohomology(C))
    C = build_complex(m0_mod_m2())
    assert C.length == 0
    H = complex_cohomology(C)
    assert list(H[0].dims) == [1, 1] + [0] * (C.top - 1)
    C = build_complex(mm0_like())
    assert C.length == 1 and C.terms[0].dims[: C.top + 1] == free_module(0, TRIV, F5, C.top).dims
    H = complex_cohomology(C)
    assert H[0].is_zero()
    assert list(H[1].dims) == [1] + [0] * C.top


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "z2"]))
def test_complex_maps_are_module_maps(seed, group):
    cfg = FuzzConfig(seed=seed, count=1, group=group, T=6)
    V = realize_presentation(random_presentation(cfg, 0), cfg.group_object(), F5, 6)
    try:
        C = build_complex(V)
    except TruncationInsufficient:
        return
    for h in C.maps:
        h.validate()
    for a, b in zip(C.maps, C.maps[1:]):
        for n in range(C.top + 1):
            x, y = a.blocks[n], b.blocks[n]
            if x.size and y.size:
                assert not F5.matmul(y, x).any()
