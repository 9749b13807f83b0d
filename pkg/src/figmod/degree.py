"""Degrees in N u {-inf, +inf} plus an explicit 'beyond the truncation' marker."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GradedDegree:
    kind: str  # finite | neg_inf | pos_inf | exceeds
    value: int | None = None
    T: int | None = None

    @classmethod
    def finite(cls, n: int) -> "GradedDegree":
        return cls("finite", int(n))

    @classmethod
    def neg_inf(cls) -> "GradedDegree":
        return cls("neg_inf")

    @classmethod
    def pos_inf(cls) -> "GradedDegree":
        return cls("pos_inf")

    @classmethod
    def exceeds(cls, T: int) -> "GradedDegree":
        return cls("exceeds", None, int(T))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == "neg_inf"

    @property
    def known(self) -> bool:
        return self.kind != "exceeds"

    def as_number(self) -> float:
        """Comparable value; raises for an unknown degree."""
        if self.kind == "finite":
            return self.value
        if self.kind == "neg_inf":
            return float("-inf")
        if self.kind == "pos_inf":
            return float("inf")
        raise ValueError(f"degree exceeds truncation {self.T}")

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "neg_inf":
            return "-inf"
        if self.kind == "pos_inf":
            return "+inf"
        return f">{self.T}"

    def to_json(self):
        if self.kind == "finite":
            return self.value
        return str(self)


def degree_of_dims(dims, T: int | None = None) -> GradedDegree:
    """Top nonzero index of ``dims``; 'exceeds' if nonzero at index T."""
    top = None
    for n, d in enumerate(dims):
        if d:
            top = n
    if top is None:
        return GradedDegree.neg_inf()
    if T is not None and top >= T:
        return GradedDegree.exceeds(T)
    return GradedDegree.finite(top)


@dataclass(frozen=True)
class GradedDims:
    dims: tuple
    T: int

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 0 for d in self.dims):
            raise ValueError("graded dimensions must be nonnegative")

    def degree(self, certify: bool = False) -> GradedDegree:
        return degree_of_dims(self.dims, self.T if certify else None)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def __getitem__(self, n):
        return self.dims[n]

    def __len__(self):
        return len(self.dims)
