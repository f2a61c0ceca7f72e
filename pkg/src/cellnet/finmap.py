"""Maps on {1..N}, their composition and the semigroups they generate.

Cells and map indices are 1-based everywhere in the public interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class FiniteMap:
    """A map {1..N} -> {1..N} stored as its image sequence."""

    images: tuple[int, ...]

    def __init__(self, images: Sequence[int], codomain_size: int | None = None):
        imgs = tuple(int(x) for x in images)
        if not imgs:
            raise ValidationError("a map needs at least one cell")
        top = len(imgs) if codomain_size is None else codomain_size
        for pos, x in enumerate(imgs, start=1):
            if not 1 <= x <= top:
                raise ValidationError(f"image {x} of cell {pos} is outside 1..{top}")
        object.__setattr__(self, "images", imgs)

    @property
    def domain_size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __iter__(self):
        return iter(self.images)

    def __len__(self):
        return len(self.images)

    def __repr__(self):
        return f"FiniteMap({self.images})"

    def __matmul__(self, other: "FiniteMap") -> "FiniteMap":
        return compose_maps(self, other)

    @classmethod
    def identity(cls, n: int) -> "FiniteMap":
        return cls(range(1, n + 1))

    def is_permutation(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def inverse(self) -> "FiniteMap":
        if not self.is_permutation():
            raise DomainError("map is not a permutation")
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return FiniteMap(inv)


def compose_maps(a: FiniteMap, b: FiniteMap) -> FiniteMap:
    """The map a∘b, i.e. i -> a(b(i))."""
    if a.domain_size != b.domain_size:
        raise DomainError(f"cannot compose maps on {a.domain_size} and {b.domain_size} cells")
    ai = a.images
    return FiniteMap(tuple(ai[x - 1] for x in b.images))


@dataclass(frozen=True)
class SemigroupTable:
    """A finite set of maps closed under composition.

    ``table[j1-1][j2-1]`` is the 1-based index of σ_j1∘σ_j2 and
    ``tilde[j-1]`` is left multiplication by σ_j, a map on {1..n}.
    """

    elements: tuple[FiniteMap, ...]
    table: tuple[tuple[int, ...], ...]
    tilde: tuple[FiniteMap, ...]

    @property
    def n(self) -> int:
        return len(self.elements)

    def index(self, m: FiniteMap) -> int:
        for j, e in enumerate(self.elements, start=1):
            if e == m:
                return j
        raise DomainError(f"{m} is not an element of the semigroup")

    def product(self, j1: int, j2: int) -> int:
        return self.table[j1 - 1][j2 - 1]


def _check_maps(maps: Sequence[FiniteMap]) -> list[FiniteMap]:
    maps = [m if isinstance(m, FiniteMap) else FiniteMap(m) for m in maps]
    if not maps:
        raise ValidationError("at least one map is required")
    size = maps[0].domain_size
    for m in maps:
        if m.domain_size != size:
            raise DomainError("all maps must act on the same number of cells")
    seen = set()
    for pos, m in enumerate(maps, start=1):
        if m in seen:
            raise ValidationError(f"map {pos} duplicates an earlier map {m.images}")
        seen.add(m)
    return maps


def semigroup_closure(maps: Sequence[FiniteMap]) -> SemigroupTable:
    """Close a list of maps under composition.

    The inputs keep their positions.  New elements are appended round by
    round; within a round products are visited by (left index, right index)
    and only pairs involving an element from the previous round are formed.
    """
    elems = _check_maps(maps)
    position = {m: j for j, m in enumerate(elems)}
    done = 0
    while True:
        size = len(elems)
        for i in range(size):
            for j in range(size):
                if i < done and j < done:
                    continue
                prod = compose_maps(elems[i], elems[j])
                if prod not in position:
                    position[prod] = len(elems)
                    elems.append(prod)
        if len(elems) == size:
            break
        done = size
    n = len(elems)
    table = tuple(
        tuple(position[compose_maps(elems[i], elems[j])] + 1 for j in range(n)) for i in range(n)
    )
    tilde = tuple(FiniteMap(row) for row in table)
    return SemigroupTable(tuple(elems), table, tilde)


def is_semigroup(maps: Sequence[FiniteMap]) -> bool:
    elems = _check_maps(maps)
    present = set(elems)
    return all(compose_maps(a, b) in present for a in elems for b in elems)


def is_faithful_tilde(table: SemigroupTable) -> bool:
    return len(set(table.tilde)) == table.n


@dataclass(frozen=True)
class SlaveRemoval:
    """Outcome of repeatedly deleting cells that feed no other cell.

    ``kept_cells`` lists the surviving original cells in order.
    ``maps`` are the distinct restricted maps and ``merged[k]`` lists the
    original map indices that became the k-th of them.  ``rounds`` counts
    removal passes.  ``degenerate`` is set when nothing survives.
    """

    kept_cells: tuple[int, ...]
    maps: tuple[FiniteMap, ...]
    merged: tuple[tuple[int, ...], ...]
    rounds: int
    degenerate: bool = False


def remove_slaves(maps: Sequence[FiniteMap]) -> SlaveRemoval:
    maps = list(maps)
    if not maps:
        return SlaveRemoval((), (), (), 0, True)
    size = maps[0].domain_size
    cells = list(range(1, size + 1))
    images = [list(m.images) for m in maps]
    rounds = 0
    while True:
        # images use the current labels 1..len(cells)
        hit = {x for img in images for x in img}
        keep = [pos for pos in range(len(cells)) if pos + 1 in hit]
        if len(keep) == len(cells):
            break
        rounds += 1
        new_label = {pos + 1: k + 1 for k, pos in enumerate(keep)}
        images = [[new_label[img[pos]] for pos in keep] for img in images]
        cells = [cells[pos] for pos in keep]
        if not cells:
            return SlaveRemoval((), (), (), rounds, True)
    distinct: list[tuple[int, ...]] = []
    merged: list[list[int]] = []
    for j, img in enumerate(images, start=1):
        t = tuple(img)
        if t in distinct:
            merged[distinct.index(t)].append(j)
        else:
            distinct.append(t)
            merged.append([j])
    return SlaveRemoval(
        tuple(cells),
        tuple(FiniteMap(t) for t in distinct),
        tuple(tuple(g) for g in merged),
        rounds,
    )
