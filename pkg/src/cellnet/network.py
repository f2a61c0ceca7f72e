"""Networks, input selections and admissible maps.

A network on N cells is a list of maps σ_1..σ_n on {1..N}.  Cell i
receives the inputs x_{σ_1(i)}, ..., x_{σ_n(i)}, so a single response
function f drives the whole network via (γ_f)_i = f(π_i x).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, StateError, ValidationError
from .finmap import (FiniteMap, SemigroupTable, _check_maps, is_faithful_tilde, is_semigroup,
                     remove_slaves, semigroup_closure)
from .linalg import frac
from .polyspace import PolyMap


@dataclass(frozen=True)
class IndexSelection:
    """A linear map that copies whole blocks: slot k of the output is
    slot ``selector[k-1]`` of the input."""

    source_arity: int
    target_arity: int
    selector: tuple[int, ...]

    def __post_init__(self):
        sel = tuple(int(s) for s in self.selector)
        object.__setattr__(self, "selector", sel)
        if len(sel) != self.target_arity:
            raise DomainError("selector length must equal the target arity")
        for s in sel:
            if not 1 <= s <= self.source_arity:
                raise DomainError(f"selector entry {s} outside 1..{self.source_arity}")

    def apply(self, blocks: Sequence) -> list:
        if len(blocks) != self.source_arity:
            raise DomainError(f"expected {self.source_arity} blocks, got {len(blocks)}")
        return [blocks[s - 1] for s in self.selector]

    def apply_flat(self, x: Sequence, m: int) -> list:
        if len(x) != self.source_arity * m:
            raise DomainError("flat point has the wrong length")
        out = []
        for s in self.selector:
            out.extend(x[(s - 1) * m: s * m])
        return out

    def __matmul__(self, other: "IndexSelection") -> "IndexSelection":
        """self∘other: first apply other, then self."""
        if other.target_arity != self.source_arity:
            raise DomainError("selections cannot be composed")
        return IndexSelection(other.source_arity, self.target_arity,
                              tuple(other.selector[s - 1] for s in self.selector))

    @classmethod
    def from_map(cls, sigma: FiniteMap) -> "IndexSelection":
        """The selection X -> (X_{σ(1)}, ..., X_{σ(n)})."""
        return cls(sigma.domain_size, sigma.domain_size, sigma.images)

    def is_identity(self) -> bool:
        return self.source_arity == self.target_arity and self.selector == tuple(
            range(1, self.target_arity + 1))


@dataclass(frozen=True)
class NetworkSpec:
    """Maps σ_1..σ_n on N cells with cell dimension m.

    ``table`` is set when the maps form a semigroup.  ``original_n`` is the
    number of user-supplied maps; closure appends new maps after them.
    Duplicate maps are only tolerated for non-faithful fundamental networks,
    in which case ``table`` is None.
    """

    maps: tuple[FiniteMap, ...]
    m: int = 1
    original_n: int = 0
    table: SemigroupTable | None = None
    closed: bool = False

    @classmethod
    def from_maps(cls, maps: Sequence, m: int = 1, close: bool = True) -> "NetworkSpec":
        maps = _check_maps(maps)
        if m < 1:
            raise ValidationError("cell dimension must be positive")
        if close:
            table = semigroup_closure(maps)
            return cls(table.elements, m, len(maps), table, closed=len(table.elements) > len(maps))
        if is_semigroup(maps):
            return cls(tuple(maps), m, len(maps), semigroup_closure(maps), False)
        return cls(tuple(maps), m, len(maps), None, False)

    @property
    def N(self) -> int:
        return self.maps[0].domain_size

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def is_semigroup(self) -> bool:
        return self.table is not None

    def require_semigroup(self) -> SemigroupTable:
        if self.table is None:
            raise StateError("operation needs a network whose maps form a semigroup; close it first")
        return self.table

    def closure(self) -> "NetworkSpec":
        table = semigroup_closure(self.maps)
        return NetworkSpec(table.elements, self.m, self.original_n or self.n, table,
                           closed=self.closed or table.n > self.n)

    def with_dim(self, m: int) -> "NetworkSpec":
        return NetworkSpec(self.maps, m, self.original_n, self.table, self.closed)

    def index_of(self, sigma: FiniteMap) -> int:
        for j, s in enumerate(self.maps, start=1):
            if s == sigma:
                return j
        raise DomainError(f"{sigma} is not one of the network maps")

    def check_polymap(self, f: PolyMap):
        if f.blocks != (self.m,) * self.n or f.m != self.m:
            raise DomainError(
                f"map has arity {f.n} and dimension {f.m}, network needs arity {self.n} and dimension {self.m}")


def pi(spec: NetworkSpec, i: int) -> IndexSelection:
    """The input selection of cell i: x -> (x_{σ_1(i)}, ..., x_{σ_n(i)})."""
    if not 1 <= i <= spec.N:
        raise DomainError(f"cell {i} outside 1..{spec.N}")
    return IndexSelection(spec.N, spec.n, tuple(s(i) for s in spec.maps))


def a_map(spec: NetworkSpec, j: int) -> IndexSelection:
    """The block selection A_{σ_j}: slot k takes slot tilde_k(j)."""
    table = spec.require_semigroup()
    if not 1 <= j <= spec.n:
        raise DomainError(f"map index {j} outside 1..{spec.n}")
    return IndexSelection(spec.n, spec.n, tuple(table.table[k][j - 1] for k in range(spec.n)))


def gamma_eval(spec: NetworkSpec, f: PolyMap, x: Sequence, lam: Sequence = ()) -> list[Fraction]:
    """Exact value of the network vector field at x (flat, length N·m)."""
    spec.check_polymap(f)
    x = [frac(v) for v in x]
    if len(x) != spec.N * spec.m:
        raise DomainError(f"state point has length {len(x)}, expected {spec.N * spec.m}")
    out = []
    for i in range(1, spec.N + 1):
        out.extend(f.evaluate(pi(spec, i).apply_flat(x, spec.m), lam))
    return out


def gamma_symbolic(spec: NetworkSpec, f: PolyMap) -> list[PolyMap]:
    """The components f∘π_i as polynomial maps in the N·m cell variables."""
    spec.check_polymap(f)
    cells = (spec.m,) * spec.N
    return [f.compose_linear(pi(spec, i).selector, cells) for i in range(1, spec.N + 1)]


def gamma_matrix(spec: NetworkSpec, f0: PolyMap) -> list[list[Fraction]]:
    """Matrix of γ_{f0} for a linear map f0, size N·m by N·m."""
    spec.check_polymap(f0)
    if not f0.in_grade(0, 0) and f0:
        raise ValidationError("map is not linear in the state without parameters")
    size = spec.N * spec.m
    rows = []
    for comp in gamma_symbolic(spec, f0):
        for poly in comp.components:
            row = [Fraction(0)] * size
            for e, c in poly.items():
                row[e.index(1)] = c
            rows.append(row)
    return rows


def fundamental_network(spec: NetworkSpec) -> NetworkSpec:
    """The network on n cells whose maps are the left multiplications.

    When left multiplication is not faithful the maps repeat; the result
    then carries no semigroup table and a warning is issued.
    """
    table = spec.require_semigroup()
    maps = table.tilde
    if is_faithful_tilde(table):
        return NetworkSpec.from_maps(maps, spec.m, close=False)
    warnings.warn("left multiplication is not faithful; remove slave cells to fix this",
                  stacklevel=2)
    return NetworkSpec(tuple(maps), spec.m, len(maps), None, False)


@dataclass(frozen=True)
class SlaveReduction:
    """A network with slave cells removed.

    ``merged[k]`` lists the original map indices that collapsed onto map
    k+1 of ``spec``; a response function is transferred by feeding the same
    argument to all of them.  ``spec`` is None for a degenerate result.
    """

    spec: NetworkSpec | None
    kept_cells: tuple[int, ...]
    merged: tuple[tuple[int, ...], ...]
    rounds: int
    degenerate: bool

    @property
    def unchanged(self) -> bool:
        return self.rounds == 0 and all(len(g) == 1 for g in self.merged)

    def transfer(self, f: PolyMap) -> PolyMap:
        """Rewrite f so it reads one argument per merged map class."""
        if self.spec is None:
            raise StateError("degenerate reduction has no network")
        sel = [0] * f.n
        for k, group in enumerate(self.merged, start=1):
            for j in group:
                sel[j - 1] = k
        if 0 in sel:
            raise DomainError("map does not match the reduced network")
        return f.compose_linear(sel, (f.m,) * len(self.merged))


def slave_reduce(spec: NetworkSpec) -> SlaveReduction:
    res = remove_slaves(spec.maps)
    if res.degenerate:
        return SlaveReduction(None, (), (), res.rounds, True)
    reduced = NetworkSpec.from_maps(res.maps, spec.m, close=False)
    return SlaveReduction(reduced, res.kept_cells, res.merged, res.rounds, False)
