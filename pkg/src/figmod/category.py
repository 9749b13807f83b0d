"""Combinatorics of the category FI_G for a finite group G.

Objects are the sets [n] = {1..n}.  A morphism (f, g): [n] -> [m] is an
injection f together with labels g: [n] -> G, and composition follows

    (f, g) o (h, g') = (f o h, x -> g'(x) * g(h(x)))

with the product taken in G's multiplication table.  Maps are stored as
1-based tuples; group elements are indices into the table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from .errors import DegreeMismatch, ValidationError


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple
    identity: int
    generators: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        _validate_group(table, self.identity, self.generators)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        row = self.table[a]
        return row.index(self.identity)

    def spec(self) -> dict:
        return {
            "order": self.order,
            "table": [list(row) for row in self.table],
            "identity": self.identity,
            "generators": list(self.generators),
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "FiniteGroup":
        table = spec["table"]
        if len(table) != spec.get("order", len(table)):
            raise ValidationError("group order does not match table size")
        return cls(tuple(map(tuple, table)), int(spec["identity"]), tuple(spec["generators"]))

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        # the generator list must be nonempty; the identity generates the trivial group
        return cls(((0,),), 0, (0,), name="trivial")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return cls(table, 0, (1 % n,), name=f"Z/{n}")


def _validate_group(table, identity, generators):
    n = len(table)
    if n < 1:
        raise ValidationError("group must have at least one element")
    if any(len(row) != n for row in table):
        raise ValidationError("multiplication table must be square")
    if any(not 0 <= x < n for row in table for x in row):
        raise ValidationError("table entries must be element indices")
    if not 0 <= identity < n:
        raise ValidationError("identity index out of range")
    for a in range(n):
        if table[identity][a] != a or table[a][identity] != a:
            raise ValidationError(f"element {identity} is not an identity")
        if identity not in table[a]:
            raise ValidationError(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise ValidationError("multiplication is not associative")
    if not generators:
        raise ValidationError("generator list must be nonempty")
    if any(not 0 <= g < n for g in generators):
        raise ValidationError("generator index out of range")
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = table[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(seen) != n:
        raise ValidationError("generators do not generate the group")


@dataclass(frozen=True)
class FIGMorphism:
    source: int
    target: int
    f: tuple
    g: tuple

    def __post_init__(self):
        if self.source > self.target:
            raise DegreeMismatch(f"no morphism [{self.source}] -> [{self.target}]")
        if len(self.f) != self.source or len(self.g) != self.source:
            raise ValidationError("f and g must have length equal to the source")
        if len(set(self.f)) != len(self.f):
            raise ValidationError("f must be injective")
        if any(not 1 <= x <= self.target for x in self.f):
            raise ValidationError("f values must lie in 1..target")

    def key(self) -> tuple:
        return self.f + self.g


def identity(n: int, group: FiniteGroup) -> FIGMorphism:
    return FIGMorphism(n, n, tuple(range(1, n + 1)), (group.identity,) * n)


def standard_inclusion(n: int, m: int, group: FiniteGroup) -> FIGMorphism:
    return FIGMorphism(n, m, tuple(range(1, n + 1)), (group.identity,) * n)


def compose(outer: FIGMorphism, inner: FIGMorphism, group: FiniteGroup) -> FIGMorphism:
    """outer o inner; ``inner`` is applied first."""
    if inner.target != outer.source:
        raise DegreeMismatch(
            f"cannot compose [{outer.source}]->[{outer.target}] after [{inner.source}]->[{inner.target}]"
        )
    f = tuple(outer.f[h - 1] for h in inner.f)
    g = tuple(group.mul(inner.g[x], outer.g[inner.f[x] - 1]) for x in range(inner.source))
    return FIGMorphism(inner.source, outer.target, f, g)


@lru_cache(maxsize=None)
def _hom(r: int, n: int, group: FiniteGroup):
    if r > n:
        return ()
    labels = list(product(range(group.order), repeat=r))
    return tuple(FIGMorphism(r, n, f, g) for f in permutations(range(1, n + 1), r) for g in labels)


def enumerate_hom(r: int, n: int, group: FiniteGroup) -> list:
    """Hom([r], [n]) in canonical order: lexicographic on (f(1..r), g(1..r))."""
    return list(_hom(r, n, group))


@lru_cache(maxsize=None)
def hom_index(r: int, n: int, group: FiniteGroup) -> dict:
    return {phi.key(): i for i, phi in enumerate(_hom(r, n, group))}


def hom_count(r: int, n: int, group: FiniteGroup) -> int:
    if r > n:
        return 0
    count = group.order**r
    for k in range(n - r + 1, n + 1):
        count *= k
    return count


@dataclass(frozen=True)
class WreathElement:
    """An automorphism of [n] in FI_G: a permutation with labels."""

    n: int
    perm: tuple
    labels: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, self.n + 1)):
            raise ValidationError("perm must be a bijection of [n]")
        if len(self.labels) != self.n:
            raise ValidationError("labels must have length n")

    def as_morphism(self) -> FIGMorphism:
        return FIGMorphism(self.n, self.n, self.perm, self.labels)

    @classmethod
    def from_morphism(cls, phi: FIGMorphism) -> "WreathElement":
        if phi.source != phi.target:
            raise DegreeMismatch("an automorphism needs equal source and target")
        return cls(phi.source, phi.f, phi.g)


def wreath_inverse(w: WreathElement, group: FiniteGroup) -> WreathElement:
    inv = [0] * w.n
    for x, y in enumerate(w.perm, start=1):
        inv[y - 1] = x
    labels = tuple(group.inverse(w.labels[inv[y] - 1]) for y in range(w.n))
    return WreathElement(w.n, tuple(inv), labels)


def wreath_generators(n: int, group: FiniteGroup) -> list:
    """Adjacent transpositions s_1..s_{n-1}, then each group generator placed at position 1."""
    if n == 0:
        return []
    e = group.identity
    gens = []
    for i in range(1, n):
        perm = list(range(1, n + 1))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        gens.append(WreathElement(n, tuple(perm), (e,) * n))
    for gamma in group.generators:
        gens.append(WreathElement(n, tuple(range(1, n + 1)), (gamma,) + (e,) * (n - 1)))
    return gens


def generator_count(n: int, group: FiniteGroup) -> int:
    return 0 if n == 0 else n - 1 + len(group.generators)


def extend_generator_index(n: int, j: int, a: int, group: FiniteGroup) -> int:
    """Index in G_{n+a}'s generator list of the extension of generator j of G_n."""
    if j < n - 1:
        return j
    return j + a


def factor_through_inclusion(phi: FIGMorphism, group: FiniteGroup):
    """Return (w, a) with phi = w o (standard inclusion [n] -> [n + a])."""
    n, m = phi.source, phi.target
    rest = [v for v in range(1, m + 1) if v not in set(phi.f)]
    # lexicographically least completion: remaining points ascending, labels of index 0
    perm = phi.f + tuple(rest)
    labels = phi.g + (0,) * (m - n)
    return WreathElement(m, perm, labels), m - n


@lru_cache(maxsize=None)
def _label_words(group: FiniteGroup) -> dict:
    """For each label x, a word W in group generators with prod_k gamma_{W_k}@1 = x@1."""
    e = group.identity
    words = {e: ()}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for k, gamma in enumerate(group.generators):
            # gamma@1 o x@1 carries the label x * gamma
            y = group.mul(x, gamma)
            if y not in words:
                words[y] = (k,) + words[x]
                queue.append(y)
    return words


def perm_word(perm) -> list:
    """Adjacent transposition indices i with perm = s_{i_1} o s_{i_2} o ... (1-based i)."""
    cur = list(perm)
    record = []
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                record.append(i + 1)
                changed = True
    return record[::-1]


def wreath_word(w: WreathElement, group: FiniteGroup) -> list:
    """Generator indices (into wreath_generators(n)) whose ordered composite is w."""
    n = w.n
    word = [i - 1 for i in perm_word(w.perm)]
    label_words = _label_words(group)
    for j, x in enumerate(w.labels, start=1):
        if x == group.identity:
            continue
        core = [n - 1 + k for k in label_words[x]]
        to_j = [i - 1 for i in range(j - 1, 0, -1)]
        back = [i - 1 for i in range(1, j)]
        word += to_j + core + back
    return word


def compose_word(word, n: int, group: FiniteGroup) -> FIGMorphism:
    gens = wreath_generators(n, group)
    out = identity(n, group)
    for i in reversed(word):
        out = compose(gens[i].as_morphism(), out, group)
    return out
