"""Seeded random presentations; instance k of a batch depends only on (seed, k)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import FiniteGroup, hom_count
from .errors import ValidationError
from .io import ModuleFile
from .linalg import PrimeField, RationalField
from .module import Presentation


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    count: int = 1
    max_gen_degree: int = 1
    max_rel_degree: int = 3
    max_generators: int = 2
    max_relations: int = 2
    T: int = 8
    field: str = "5"  # a prime, or "rational"
    group: str = "trivial"  # or "z2"
    density: float = 0.5

    def validate(self) -> None:
        if not 0 <= self.max_gen_degree <= self.max_rel_degree <= self.T:
            raise ValidationError("need 0 <= max_gen_degree <= max_rel_degree <= T")
        if self.max_generators < 1 or self.max_relations < 0 or self.count < 0:
            raise ValidationError("generator, relation and instance counts out of range")
        if self.group not in ("trivial", "z2"):
            raise ValidationError(f"unknown group choice {self.group!r}")
        if not 0.0 < self.density <= 1.0:
            raise ValidationError("density must lie in (0, 1]")
        make_field(self.field)

    def group_object(self) -> FiniteGroup:
        return FiniteGroup.trivial() if self.group == "trivial" else FiniteGroup.cyclic(2)


def make_field(spec: str):
    if spec == "rational":
        return RationalField()
    return PrimeField(int(spec))


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), index]))


def random_presentation(cfg: FuzzConfig, index: int = 0) -> Presentation:
    """Instance ``index`` of the batch described by cfg."""
    rng = _rng(cfg.seed, index)
    G = cfg.group_object()
    field = make_field(cfg.field)
    ngen = int(rng.integers(1, cfg.max_generators + 1))
    gens = sorted(int(x) for x in rng.integers(0, cfg.max_gen_degree + 1, size=ngen))
    nrel = int(rng.integers(0, cfg.max_relations + 1))
    rels = []
    for _ in range(nrel):
        d = int(rng.integers(gens[0], cfg.max_rel_degree + 1))
        size = sum(hom_count(g, d, G) for g in gens if g <= d)
        mask = rng.random(size) < cfg.density
        if isinstance(field, PrimeField):
            vals = rng.integers(1, field.p, size=size)
        else:
            vals = rng.integers(-3, 4, size=size)
        vec = [int(v) if m else 0 for v, m in zip(vals, mask)]
        rels.append((d, vec))
    rels.sort(key=lambda r: r[0])
    return Presentation(gens, rels)


def random_batch(cfg: FuzzConfig) -> list:
    """ModuleFiles for instances 0..count-1, in index order."""
    cfg.validate()
    G = cfg.group_object()
    field = make_field(cfg.field)
    out = []
    for k in range(cfg.count):
        P = random_presentation(cfg, k)
        out.append(ModuleFile(P, field, G, cfg.T, name=f"fuzz-{cfg.seed}-{k}"))
    return out
