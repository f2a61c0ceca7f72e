"""Symmetries, balanced partitions and input symmetries of a network.

Exhaustive searches refuse inputs above an explicit cell limit with a
GuardError instead of running for an unbounded time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, GuardError, InternalError, ValidationError
from .finmap import FiniteMap, compose_maps
from .linalg import Subspace, nullspace
from .network import NetworkSpec, pi
from .polyspace import PolyMap, basis

MAX_PARTITION_CELLS = 12
MAX_INPUT_SYMMETRY_CELLS = 10


def _maps_of(spec) -> list[FiniteMap]:
    if isinstance(spec, NetworkSpec):
        return list(spec.maps)
    return [m if isinstance(m, FiniteMap) else FiniteMap(m) for m in spec]


@dataclass(frozen=True)
class Partition:
    """A partition of {1..N}, blocks sorted internally and by least element."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        cells = [x for b in blocks for x in b]
        if any(not b for b in blocks):
            raise ValidationError("partition blocks must be non-empty")
        if sorted(cells) != list(range(1, len(cells) + 1)):
            raise ValidationError("blocks must be disjoint and cover 1..N")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        groups: dict = {}
        for i, lab in enumerate(labels, start=1):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(groups.values()))

    @classmethod
    def discrete(cls, N: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, N + 1)))

    @property
    def N(self) -> int:
        return sum(len(b) for b in self.blocks)

    def labels(self) -> tuple:
        out = [0] * self.N
        for k, b in enumerate(self.blocks):
            for x in b:
                out[x - 1] = k
        return tuple(out)

    def block_of(self, i: int) -> int:
        return self.labels()[i - 1]

    def is_balanced(self, maps) -> bool:
        lab = self.labels()
        for s in _maps_of(maps):
            for b in self.blocks:
                if len({lab[s(x) - 1] for x in b}) > 1:
                    return False
        return True

    def refines(self, other: "Partition") -> bool:
        lab = other.labels()
        return all(len({lab[x - 1] for x in b}) == 1 for b in self.blocks)

    def meet(self, other: "Partition") -> "Partition":
        return Partition.from_labels(list(zip(self.labels(), other.labels())))

    def synchrony_point(self, values: Sequence) -> list:
        """A point of the synchrony space: cell i takes the value of its block."""
        lab = self.labels()
        return [values[lab[i]] for i in range(self.N)]

    def __str__(self):
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def balanced_closure(maps, partition: Partition) -> Partition:
    """The finest balanced partition coarser than the given one."""
    maps = _maps_of(maps)
    N = partition.N
    parent = list(range(N + 1))
    pending = []
    for b in partition.blocks:
        for x in b[1:]:
            pending.append((b[0], x))
    while pending:
        a, b = pending.pop()
        ra, rb = _find(parent, a), _find(parent, b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        for s in maps:
            pending.append((s(a), s(b)))
    return Partition.from_labels([_find(parent, i) for i in range(1, N + 1)])


def _sort_partitions(parts: Iterable[Partition]) -> list[Partition]:
    return sorted(parts, key=lambda P: (len(P.blocks), P.blocks))


def balanced_partitions(spec, seed: Partition | None = None,
                        max_cells: int = MAX_PARTITION_CELLS) -> list[Partition]:
    """All balanced partitions, fewest blocks first, then lexicographic.

    With a seed, only the balanced partitions coarser than the seed are
    listed; this is the route for networks above the cell limit.
    """
    maps = _maps_of(spec)
    N = maps[0].domain_size
    if seed is None:
        if N > max_cells:
            raise GuardError(f"balanced partition enumeration is limited to {max_cells} cells, got {N}; "
                             "pass a seed partition to search its coarsenings")
        start = Partition.discrete(N)
    else:
        if seed.N != N:
            raise DomainError("seed partition has the wrong number of cells")
        start = balanced_closure(maps, seed)
    found = {start}
    queue = [start]
    while queue:
        P = queue.pop()
        reps = [b[0] for b in P.blocks]
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                merged = list(P.blocks)
                joined = merged[a] + merged[b]
                merged = [blk for k, blk in enumerate(merged) if k not in (a, b)] + [joined]
                Q = balanced_closure(maps, Partition(tuple(merged)))
                if Q not in found:
                    found.add(Q)
                    queue.append(Q)
    return _sort_partitions(found)


def network_symmetries(spec) -> list[FiniteMap]:
    """All permutations p with p∘σ_j = σ_j∘p for every j, in lexicographic order."""
    maps = _maps_of(spec)
    N = maps[0].domain_size
    found = []

    def extend(assign: dict, used: set):
        if len(assign) == N:
            found.append(FiniteMap(tuple(assign[i] for i in range(1, N + 1))))
            return
        i = next(x for x in range(1, N + 1) if x not in assign)
        for target in range(1, N + 1):
            if target in used:
                continue
            new_assign, new_used = dict(assign), set(used)
            if _propagate(maps, new_assign, new_used, i, target):
                extend(new_assign, new_used)

    extend({}, set())
    return sorted(found, key=lambda p: p.images)


def _propagate(maps, assign, used, i, target) -> bool:
    """Force p(σ_j(x)) = σ_j(p(x)) from the assignment p(i) = target."""
    stack = [(i, target)]
    while stack:
        x, y = stack.pop()
        if x in assign:
            if assign[x] != y:
                return False
            continue
        if y in used:
            return False
        assign[x] = y
        used.add(y)
        for s in maps:
            stack.append((s(x), s(y)))
    return True


@dataclass(frozen=True)
class InputSymmetryPair:
    """Permutations p of the cells and q of the maps with p∘σ_j = σ_{q(j)}∘p."""

    p: FiniteMap
    q: FiniteMap

    def holds(self, spec) -> bool:
        maps = _maps_of(spec)
        return all(compose_maps(self.p, s) == compose_maps(maps[self.q(j) - 1], self.p)
                   for j, s in enumerate(maps, start=1))

    def __matmul__(self, other: "InputSymmetryPair") -> "InputSymmetryPair":
        return InputSymmetryPair(compose_maps(self.p, other.p), compose_maps(self.q, other.q))

    def is_identity(self) -> bool:
        return self.p == FiniteMap.identity(len(self.p)) and self.q == FiniteMap.identity(len(self.q))


def dynamical_input_symmetries(spec, max_cells: int = MAX_INPUT_SYMMETRY_CELLS) -> list[InputSymmetryPair]:
    """All pairs (p, q), sorted by the images of p and then q."""
    maps = _maps_of(spec)
    N = maps[0].domain_size
    n = len(maps)
    if N > max_cells:
        raise GuardError(f"input symmetry search is limited to {max_cells} cells, got {N}")
    index = {s.images: j for j, s in enumerate(maps, start=1)}
    found = []

    def consistent(assign) -> bool:
        for s in maps:
            ok = False
            for t in maps:
                good = True
                for x, px in assign.items():
                    y = s(x)
                    if y in assign and t(px) != assign[y]:
                        good = False
                        break
                if good:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def extend(assign, used, i):
        if i > N:
            p = FiniteMap(tuple(assign[x] for x in range(1, N + 1)))
            pinv = p.inverse()
            q = []
            for s in maps:
                conj = compose_maps(compose_maps(p, s), pinv)
                k = index.get(conj.images)
                if k is None:
                    return
                q.append(k)
            if len(set(q)) == n:
                found.append(InputSymmetryPair(p, FiniteMap(q)))
            return
        for y in range(1, N + 1):
            if y in used:
                continue
            assign[i] = y
            used.add(y)
            if consistent(assign):
                extend(assign, used, i + 1)
            del assign[i]
            used.discard(y)

    extend({}, set(), 1)
    return sorted(found, key=lambda pq: (pq.p.images, pq.q.images))


def extend_input_symmetry(closed: NetworkSpec, pair: InputSymmetryPair) -> InputSymmetryPair:
    """Extend q from the user maps to the whole semigroup.

    Uses q'(index of σ_a∘σ_b) = index of σ_{q'(a)}∘σ_{q'(b)} starting from q on
    the first ``len(pair.q)`` maps.
    """
    table = closed.require_semigroup()
    n0 = len(pair.q)
    qp: dict = {j: pair.q(j) for j in range(1, n0 + 1)}
    changed = True
    while changed:
        changed = False
        known = list(qp.items())
        for a, qa in known:
            for b, qb in known:
                target = table.table[a - 1][b - 1]
                value = table.table[qa - 1][qb - 1]
                if target in qp:
                    if qp[target] != value:
                        raise InternalError("input symmetry does not extend consistently")
                else:
                    qp[target] = value
                    changed = True
    if len(qp) != closed.n:
        raise InternalError("closure elements are not all products of the user maps")
    q = FiniteMap(tuple(qp[j] for j in range(1, closed.n + 1)))
    out = InputSymmetryPair(pair.p, q)
    if not out.holds(closed):
        raise InternalError("extended input symmetry fails the defining relation")
    return out


def generate_group(pairs: Iterable[InputSymmetryPair]) -> list[InputSymmetryPair]:
    """Close a set of pairs under componentwise composition."""
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("at least one pair is needed")
    N, n = len(pairs[0].p), len(pairs[0].q)
    ident = InputSymmetryPair(FiniteMap.identity(N), FiniteMap.identity(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in pairs:
                x = h @ g
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
    return sorted(group, key=lambda pq: (pq.p.images, pq.q.images))


def _q_selectors(spec: NetworkSpec, qs) -> list:
    """Selectors of λ_q∘π_i for every q and cell i."""
    out = []
    for q in qs:
        for i in range(1, spec.N + 1):
            sel = pi(spec, i).selector
            out.append((tuple(sel[q[k] - 1] for k in range(spec.n)), sel))
    return out


@lru_cache(maxsize=256)
def _invariant_space(spec: NetworkSpec, qs: tuple, k: int, l: int, p: int) -> Subspace:
    b = basis(k, l, spec.n, spec.m, p)
    cells = (spec.m,) * spec.N
    pairs = _q_selectors(spec, [q for q in qs if q != tuple(range(1, spec.n + 1))])
    row_of: dict = {}
    columns = []
    for e in b.entries:
        col: dict = {}
        for idx, (sel_q, sel) in enumerate(pairs):
            diff = e.compose_linear(sel_q, cells) - e.compose_linear(sel, cells)
            for c, comp in enumerate(diff.components):
                for ex, v in comp.items():
                    r = row_of.setdefault((idx, c, ex), len(row_of))
                    col[r] = col.get(r, 0) + v
        columns.append(col)
    rows = [[Fraction(0)] * len(b) for _ in range(len(row_of))]
    for j, col in enumerate(columns):
        for r, v in col.items():
            rows[r][j] = Fraction(v)
    return Subspace(nullspace(rows, len(b)), len(b))


def _group_qs(spec: NetworkSpec, group) -> tuple:
    qs = []
    for g in group:
        q = g.q if isinstance(g, InputSymmetryPair) else FiniteMap(g)
        if len(q) != spec.n:
            raise DomainError(f"q acts on {len(q)} maps, the network has {spec.n}")
        qs.append(q.images)
    return tuple(sorted(set(qs)))


def invariant_subbasis(spec: NetworkSpec, group, k: int, l: int = 0, p: int = 0) -> list[PolyMap]:
    """Echelon basis of the grade (k, l) maps g with g∘λ_q∘π_i = g∘π_i for all q, i."""
    space = _invariant_space(spec, _group_qs(spec, group), k, l, p)
    b = basis(k, l, spec.n, spec.m, p)
    return [b.from_coordinates(v) for v in space.basis]


def is_invariant(spec: NetworkSpec, f: PolyMap, pair: InputSymmetryPair) -> bool:
    """Whether f∘λ_q∘π_i = f∘π_i holds for every cell i."""
    cells = (spec.m,) * spec.N
    for sel_q, sel in _q_selectors(spec, [pair.q.images]):
        if f.compose_linear(sel_q, cells) != f.compose_linear(sel, cells):
            return False
    return True


@dataclass(frozen=True)
class ClosureReport:
    symmetries: tuple
    balanced_partitions: tuple


def closure_invariance_report(before, after) -> ClosureReport:
    """Check that closing the maps changes neither symmetries nor balanced partitions."""
    sym_a, sym_b = network_symmetries(before), network_symmetries(after)
    if sym_a != sym_b:
        raise InternalError("closure changed the network symmetry group")
    part_a, part_b = balanced_partitions(before), balanced_partitions(after)
    if part_a != part_b:
        raise InternalError("closure changed the balanced partitions")
    return ClosureReport(tuple(sym_a), tuple(part_a))
