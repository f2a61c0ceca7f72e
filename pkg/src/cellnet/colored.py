"""Networks with several cell colors.

Cells of color c are numbered 1..N_c and carry state in Q^{m_c}.  A typed
map σ^{(d,c)}_j sends color-c cells to color-d cells and tells every
color-c cell which color-d cell feeds its j-th input of that color.  The
response function of color c therefore reads one block per pair (d, j),
ordered by d first and then j; this ordering is called the profile of c.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import DomainError, StateError, ValidationError
from .finmap import FiniteMap
from .linalg import Subspace, frac, nullspace, solve
from .network import IndexSelection, NetworkSpec
from .polyspace import GradedBasis, PolyMap, basis, parse_scalar


def _typed(images, source_count: int, target_count: int) -> FiniteMap:
    fm = images if isinstance(images, FiniteMap) else FiniteMap(images, codomain_size=target_count)
    if fm.domain_size != source_count:
        raise ValidationError(f"typed map {fm.images} must have {source_count} entries")
    if any(not 1 <= x <= target_count for x in fm.images):
        raise ValidationError(f"typed map {fm.images} has images outside 1..{target_count}")
    return fm


def compose_typed(a: FiniteMap, b: FiniteMap) -> FiniteMap:
    """a∘b for typed maps; b's images must index a's cells."""
    if max(b.images) > a.domain_size:
        raise DomainError("typed maps are not composable")
    return FiniteMap(tuple(a.images[x - 1] for x in b.images), codomain_size=max(a.images))


@dataclass(frozen=True)
class ColoredNetworkSpec:
    """Typed maps on colored cells.

    ``maps[d-1][c-1]`` holds the maps σ^{(d,c)}_1, σ^{(d,c)}_2, ... from color c
    to color d.  ``table`` is set when the maps are closed under all
    composable products; it sends (e, d, c, j1, j2) to j3 with
    σ^{(e,d)}_{j1}∘σ^{(d,c)}_{j2} = σ^{(e,c)}_{j3}.
    """

    cell_counts: tuple
    cell_dims: tuple
    maps: tuple
    table: tuple | None = None
    original_counts: tuple | None = None

    @classmethod
    def build(cls, cell_counts: Sequence[int], cell_dims: Sequence[int] | None, typed_maps: dict,
              close: bool = True) -> "ColoredNetworkSpec":
        """``typed_maps`` maps (d, c) to a list of image lists from color c to color d."""
        counts = tuple(int(x) for x in cell_counts)
        C = len(counts)
        if C == 0 or any(x < 1 for x in counts):
            raise ValidationError("every color needs at least one cell")
        dims = tuple(int(x) for x in (cell_dims or (1,) * C))
        if len(dims) != C or any(x < 1 for x in dims):
            raise ValidationError("cell dimensions must be positive, one per color")
        grid = [[[] for _ in range(C)] for _ in range(C)]
        for (d, c), lst in typed_maps.items():
            if not (1 <= d <= C and 1 <= c <= C):
                raise ValidationError(f"color pair ({d},{c}) outside 1..{C}")
            for images in lst:
                fm = _typed(images, counts[c - 1], counts[d - 1])
                if fm in grid[d - 1][c - 1]:
                    raise ValidationError(f"duplicate map {fm.images} of type ({d},{c})")
                grid[d - 1][c - 1].append(fm)
        maps = tuple(tuple(tuple(x) for x in row) for row in grid)
        originals = tuple(tuple(len(x) for x in row) for row in maps)
        spec = cls(counts, dims, maps, None, originals)
        closed = semigroupoid_closure(spec)
        if close or closed.maps == spec.maps:
            return closed
        return spec

    @classmethod
    def from_homogeneous(cls, spec: NetworkSpec) -> "ColoredNetworkSpec":
        table = None
        maps = ((tuple(FiniteMap(s.images) for s in spec.maps),),)
        if spec.table is not None:
            t = spec.table.table
            table = tuple(((1, 1, 1, j1 + 1, j2 + 1), t[j1][j2])
                          for j1 in range(spec.n) for j2 in range(spec.n))
        return cls((spec.N,), (spec.m,), maps, table, ((spec.original_n or spec.n,),))

    @property
    def C(self) -> int:
        return len(self.cell_counts)

    def N(self, c: int) -> int:
        return self.cell_counts[c - 1]

    def dim(self, c: int) -> int:
        return self.cell_dims[c - 1]

    def typed(self, d: int, c: int) -> tuple:
        return self.maps[d - 1][c - 1]

    def n(self, d: int, c: int) -> int:
        return len(self.maps[d - 1][c - 1])

    @property
    def is_semigroupoid(self) -> bool:
        return self.table is not None

    @cached_property
    def _table(self) -> dict:
        return dict(self.table or ())

    def product(self, e: int, d: int, c: int, j1: int, j2: int) -> int:
        if self.table is None:
            raise StateError("the typed maps are not closed under composition; close them first")
        return self._table[(e, d, c, j1, j2)]

    def profile(self, c: int) -> list[tuple[int, int]]:
        """Input slots of color c as (source color d, map index j)."""
        return [(d, j) for d in range(1, self.C + 1) for j in range(1, self.n(d, c) + 1)]

    def blocks(self, c: int) -> tuple:
        return tuple(self.dim(d) for d, _ in self.profile(c))

    def slot(self, c: int, d: int, j: int) -> int:
        return self.profile(c).index((d, j)) + 1

    @cached_property
    def cell_offsets(self) -> tuple:
        offs, acc = [], 0
        for N in self.cell_counts:
            offs.append(acc)
            acc += N
        return tuple(offs)

    def global_cell(self, c: int, i: int) -> int:
        return self.cell_offsets[c - 1] + i

    @property
    def total_cells(self) -> int:
        return sum(self.cell_counts)

    def state_blocks(self) -> tuple:
        return tuple(self.dim(c) for c in range(1, self.C + 1) for _ in range(self.N(c)))

    def check_family(self, f: "ColoredPolyFamily"):
        if not isinstance(f, ColoredPolyFamily) or len(f.maps) != self.C:
            raise DomainError(f"expected a family with one map per color ({self.C})")
        for c in range(1, self.C + 1):
            g = f.color(c)
            if g.blocks != self.blocks(c) or g.m != self.dim(c):
                raise DomainError(f"map of color {c} does not match its input profile")


def semigroupoid_closure(spec: ColoredNetworkSpec) -> ColoredNetworkSpec:
    """Close the typed maps under all composable products, round by round.

    Input maps keep their positions.  Within a round, triples (e, d, c) are
    visited in lexicographic order and products by (left index, right index).
    """
    C = spec.C
    elems = {(d, c): list(spec.typed(d, c)) for d in range(1, C + 1) for c in range(1, C + 1)}
    done = {key: 0 for key in elems}
    while True:
        sizes = {key: len(v) for key, v in elems.items()}
        grew = False
        for e in range(1, C + 1):
            for d in range(1, C + 1):
                for c in range(1, C + 1):
                    left, right, out = elems[(e, d)], elems[(d, c)], elems[(e, c)]
                    for i in range(sizes[(e, d)]):
                        for j in range(sizes[(d, c)]):
                            if i < done[(e, d)] and j < done[(d, c)]:
                                continue
                            prod = compose_typed(left[i], right[j])
                            if prod not in out:
                                out.append(prod)
                                grew = True
        if not grew:
            break
        done = sizes
    table = []
    for e in range(1, C + 1):
        for d in range(1, C + 1):
            for c in range(1, C + 1):
                left, right, out = elems[(e, d)], elems[(d, c)], elems[(e, c)]
                for i, a in enumerate(left, start=1):
                    for j, b in enumerate(right, start=1):
                        table.append(((e, d, c, i, j), out.index(compose_typed(a, b)) + 1))
    maps = tuple(tuple(tuple(elems[(d, c)]) for c in range(1, C + 1)) for d in range(1, C + 1))
    return ColoredNetworkSpec(spec.cell_counts, spec.cell_dims, maps, tuple(table),
                              spec.original_counts or tuple(tuple(len(x) for x in row) for row in spec.maps))


def colored_pi(spec: ColoredNetworkSpec, c: int, i: int) -> IndexSelection:
    """Inputs of cell i of color c, selected from the global list of cells."""
    if not 1 <= i <= spec.N(c):
        raise DomainError(f"cell {i} outside 1..{spec.N(c)} for color {c}")
    sel = tuple(spec.global_cell(d, spec.typed(d, c)[j - 1](i)) for d, j in spec.profile(c))
    return IndexSelection(spec.total_cells, len(sel), sel)


def colored_a_map(spec: ColoredNetworkSpec, d: int, c: int, j: int) -> IndexSelection:
    """A_{σ^{(d,c)}_j}: from the profile of c to the profile of d.

    Target slot (e, k) reads source slot (e, index of σ^{(e,d)}_k∘σ^{(d,c)}_j).
    """
    if not spec.is_semigroupoid:
        raise StateError("the typed maps are not closed under composition; close them first")
    if not 1 <= j <= spec.n(d, c):
        raise DomainError(f"map index {j} outside 1..{spec.n(d, c)} for type ({d},{c})")
    src = {slot: pos for pos, slot in enumerate(spec.profile(c), start=1)}
    sel = tuple(src[(e, spec.product(e, d, c, k, j))] for e, k in spec.profile(d))
    return IndexSelection(len(src), len(sel), sel)


class ColoredPolyFamily:
    """One response function per color, indexed from 1."""

    __slots__ = ("maps", "_hash")

    def __init__(self, maps: Sequence[PolyMap]):
        self.maps = tuple(maps)
        ps = {g.p for g in self.maps}
        if len(ps) > 1:
            raise DomainError("all colors must use the same parameters")
        self._hash = None

    @property
    def p(self) -> int:
        return self.maps[0].p

    def color(self, c: int) -> PolyMap:
        return self.maps[c - 1]

    def _zip(self, other, op):
        if not isinstance(other, ColoredPolyFamily) or len(other.maps) != len(self.maps):
            raise DomainError("families do not match")
        return ColoredPolyFamily([op(a, b) for a, b in zip(self.maps, other.maps)])

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return ColoredPolyFamily([-a for a in self.maps])

    def scale(self, c):
        return ColoredPolyFamily([a.scale(c) for a in self.maps])

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __bool__(self):
        return any(bool(a) for a in self.maps)

    def __eq__(self, other):
        return isinstance(other, ColoredPolyFamily) and self.maps == other.maps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.maps)
        return self._hash

    def __repr__(self):
        return "ColoredPolyFamily(" + ", ".join(str(a) for a in self.maps) + ")"

    def zero_like(self):
        return ColoredPolyFamily([a.zero_like() for a in self.maps])

    def grade_parts(self) -> dict:
        per = [a.grade_parts() for a in self.maps]
        grades = sorted({g for parts in per for g in parts}, key=lambda g: (g[1], g[0]))
        return {g: ColoredPolyFamily([parts.get(g, a.zero_like()) for parts, a in zip(per, self.maps)])
                for g in grades}

    def truncate(self, r1: int, r2: int = 0):
        return ColoredPolyFamily([a.truncate(r1, r2) for a in self.maps])

    def with_params(self, p: int):
        return ColoredPolyFamily([a.with_params(p) for a in self.maps])

    def in_grade(self, k: int, l: int = 0) -> bool:
        return all(a.in_grade(k, l) for a in self.maps)


def _shift(spec: ColoredNetworkSpec, g: ColoredPolyFamily, c: int) -> list[PolyMap]:
    """g^{(d)}∘A_{σ^{(d,c)}_j} for every slot (d, j) of color c."""
    src = spec.blocks(c)
    return [g.color(d).compose_linear(colored_a_map(spec, d, c, j).selector, src)
            for d, j in spec.profile(c)]


def colored_compose(spec: ColoredNetworkSpec, f: ColoredPolyFamily, g: ColoredPolyFamily) -> ColoredPolyFamily:
    spec.check_family(f)
    spec.check_family(g)
    return ColoredPolyFamily([f.color(c).substitute_blocks(_shift(spec, g, c))
                              for c in range(1, spec.C + 1)])


def colored_bracket(spec: ColoredNetworkSpec, f: ColoredPolyFamily, g: ColoredPolyFamily) -> ColoredPolyFamily:
    """[f,g]^{(c)} = Σ_{d,j} D_{(d,j)} f^{(c)}·(g^{(d)}∘A) − D_{(d,j)} g^{(c)}·(f^{(d)}∘A)."""
    spec.check_family(f)
    spec.check_family(g)
    out = []
    for c in range(1, spec.C + 1):
        gs, fs = _shift(spec, g, c), _shift(spec, f, c)
        fc, gc = f.color(c), g.color(c)
        acc = fc.zero_like()
        for slot in range(1, len(gs) + 1):
            acc = acc + fc.directional(slot, gs[slot - 1]) - gc.directional(slot, fs[slot - 1])
        out.append(acc)
    return ColoredPolyFamily(out)


def colored_gamma_symbolic(spec: ColoredNetworkSpec, f: ColoredPolyFamily) -> list[PolyMap]:
    """Components f^{(c)}∘π^{(c)}_i over all cells, colors in order."""
    spec.check_family(f)
    cells = spec.state_blocks()
    return [f.color(c).compose_linear(colored_pi(spec, c, i).selector, cells)
            for c in range(1, spec.C + 1) for i in range(1, spec.N(c) + 1)]


def colored_gamma_eval(spec: ColoredNetworkSpec, f: ColoredPolyFamily, x: Sequence, lam: Sequence = ()) -> list:
    spec.check_family(f)
    cells = spec.state_blocks()
    if len(x) != sum(cells):
        raise DomainError(f"state point has length {len(x)}, expected {sum(cells)}")
    offs, acc = [], 0
    for b in cells:
        offs.append(acc)
        acc += b
    x = [frac(v) for v in x]
    out = []
    for c in range(1, spec.C + 1):
        for i in range(1, spec.N(c) + 1):
            args = []
            for s in colored_pi(spec, c, i).selector:
                args.extend(x[offs[s - 1]: offs[s - 1] + cells[s - 1]])
            out.extend(f.color(c).evaluate(args, lam))
    return out


class ColoredGradedBasis:
    """Concatenation of the per-color monomial bases of one grade."""

    def __init__(self, parts: Sequence[GradedBasis], k: int, l: int):
        self.parts = tuple(parts)
        self.k, self.l = k, l
        offs, acc = [], 0
        for b in self.parts:
            offs.append(acc)
            acc += len(b)
        self.offsets = tuple(offs)
        self.size = acc

    def __len__(self):
        return self.size

    @property
    def keys(self):
        return tuple((c, key) for c, b in enumerate(self.parts, start=1) for key in b.keys)

    def coordinates(self, f: ColoredPolyFamily) -> list:
        out = []
        for b, g in zip(self.parts, f.maps):
            out.extend(b.coordinates(g))
        return out

    def from_coordinates(self, vec) -> ColoredPolyFamily:
        if len(vec) != self.size:
            raise DomainError("coordinate vector has the wrong length")
        return ColoredPolyFamily([b.from_coordinates(vec[o:o + len(b)])
                                  for b, o in zip(self.parts, self.offsets)])

    @property
    def entries(self) -> tuple:
        out = []
        for i in range(self.size):
            e = [0] * self.size
            e[i] = 1
            out.append(self.from_coordinates(e))
        return tuple(out)


class ColoredAlgebra:
    """Graded Lie algebra of colored response families; mirrors NetworkAlgebra."""

    def __init__(self, spec: ColoredNetworkSpec, p: int = 0):
        if not spec.is_semigroupoid:
            raise StateError("the typed maps are not closed under composition; close them first")
        self.spec = spec
        self.p = p
        self._kernels: dict = {}

    def check(self, f):
        self.spec.check_family(f)
        if f.p != self.p:
            raise DomainError(f"family has {f.p} parameters, expected {self.p}")

    def zero(self):
        return ColoredPolyFamily([PolyMap.zero(m=self.spec.dim(c), p=self.p, blocks=self.spec.blocks(c))
                                  for c in range(1, self.spec.C + 1)])

    def basis(self, k: int, l: int) -> ColoredGradedBasis:
        return ColoredGradedBasis([basis(k, l, m=self.spec.dim(c), p=self.p, blocks=self.spec.blocks(c))
                                   for c in range(1, self.spec.C + 1)], k, l)

    def bracket(self, f, g):
        return colored_bracket(self.spec, f, g)

    def compose(self, f, g):
        return colored_compose(self.spec, f, g)

    def grade_parts(self, f) -> dict:
        return f.grade_parts()

    def truncate(self, f, r1, r2):
        return f.truncate(r1, r2)

    def kernel(self, k: int, l: int) -> Subspace:
        key = (k, l)
        if key not in self._kernels:
            self._kernels[key] = colored_kernel_gamma_space(self.spec, k, l, self.p)
        return self._kernels[key]

    def linear_matrix(self, f0) -> list:
        return colored_gamma_matrix(self.spec, f0.with_params(0))

    def linear_from_matrix(self, target):
        b = ColoredAlgebra(self.spec, 0).basis(0, 0)
        cols = [[x for row in colored_gamma_matrix(self.spec, e) for x in row] for e in b.entries]
        rhs = [x for row in target for x in row]
        a = [[col[r] for col in cols] for r in range(len(rhs))]
        x = solve(a, rhs, len(b))
        if x is None:
            return None
        return b.from_coordinates(x).with_params(self.p)


def colored_gamma_matrix(spec: ColoredNetworkSpec, f0: ColoredPolyFamily) -> list:
    if not f0.in_grade(0, 0) and f0:
        raise ValidationError("family is not linear in the state without parameters")
    size = sum(spec.state_blocks())
    rows = []
    for comp in colored_gamma_symbolic(spec, f0):
        for poly in comp.components:
            row = [Fraction(0)] * size
            for e, c in poly.items():
                row[e.index(1)] = c
            rows.append(row)
    return rows


def colored_kernel_gamma_space(spec: ColoredNetworkSpec, k: int, l: int = 0, p: int = 0) -> Subspace:
    b = ColoredAlgebra(spec, p).basis(k, l)
    row_of: dict = {}
    columns = []
    for e in b.entries:
        col: dict = {}
        for idx, image in enumerate(colored_gamma_symbolic(spec, e)):
            for c, comp in enumerate(image.components):
                for ex, v in comp.items():
                    r = row_of.setdefault((idx, c, ex), len(row_of))
                    col[r] = col.get(r, 0) + v
        columns.append(col)
    rows = [[Fraction(0)] * len(b) for _ in range(len(row_of))]
    for j, col in enumerate(columns):
        for r, v in col.items():
            rows[r][j] = Fraction(v)
    return Subspace(nullspace(rows, len(b)), len(b))


def colored_kernel_gamma(spec: ColoredNetworkSpec, k: int, l: int = 0, p: int = 0) -> list:
    b = ColoredAlgebra(spec, p).basis(k, l)
    return [b.from_coordinates(v) for v in colored_kernel_gamma_space(spec, k, l, p).basis]


def embed_family(f: PolyMap) -> ColoredPolyFamily:
    return ColoredPolyFamily([f])


def extend_family(before: ColoredNetworkSpec, after: ColoredNetworkSpec, f: ColoredPolyFamily) -> ColoredPolyFamily:
    """View a family written for ``before`` as one for its closure, ignoring new slots."""
    out = []
    for c in range(1, after.C + 1):
        g = f.color(c)
        new_slots = after.profile(c)
        positions = [new_slots.index(s) for s in before.profile(c)]
        blocks = after.blocks(c)
        offs, acc = [], 0
        for b in blocks:
            offs.append(acc)
            acc += b
        targets = []
        for slot, pos in enumerate(positions):
            targets.extend(offs[pos] + t for t in range(g.blocks[slot]))
        targets.extend(acc + t for t in range(g.p))
        nv = acc + g.p
        comps = []
        for comp in g.components:
            d = {}
            for e, coef in comp.items():
                ne = [0] * nv
                for v, kk in enumerate(e):
                    ne[targets[v]] += kk
                d[tuple(ne)] = coef
            comps.append(d)
        out.append(PolyMap(comps, m=g.m, p=g.p, blocks=blocks))
    return ColoredPolyFamily(out)


_COLORED_VAR = re.compile(r"X(\d+)\.(\d+)(?:_(\d+))?$")
_PARAM = re.compile(r"l(\d+)$")


def colored_variable_names(spec: ColoredNetworkSpec, c: int, p: int = 0) -> list[str]:
    names = []
    for d, j in spec.profile(c):
        if spec.dim(d) == 1:
            names.append(f"X{d}.{j}")
        else:
            names.extend(f"X{d}.{j}_{t}" for t in range(1, spec.dim(d) + 1))
    return names + [f"l{t}" for t in range(1, p + 1)]


def parse_colored_polymap(spec: ColoredNetworkSpec, c: int, text, p: int = 0) -> PolyMap:
    """Parse the response function of color c.

    Input slot (d, j) is written ``Xd.j`` (or ``Xd.j_t`` for component t when
    color d cells are vectors); parameters are ``l1``, ``l2``, ...
    """
    names = colored_variable_names(spec, c, 0)
    blocks = spec.blocks(c)
    nstate = sum(blocks)
    position = {nm: i for i, nm in enumerate(names)}

    def resolve(name):
        mt = _PARAM.match(name)
        if mt:
            t = int(mt.group(1))
            if not 1 <= t <= p:
                raise ValidationError(f"parameter {name} outside l1..l{p}")
            return nstate + t - 1
        if name in position:
            return position[name]
        mt = _COLORED_VAR.match(name)
        if mt:
            raise ValidationError(f"{name} is not an input of color {c}")
        raise ValidationError(f"unknown name {name!r}")

    m = spec.dim(c)
    texts = [text] if isinstance(text, str) else list(text)
    if len(texts) != m:
        raise ValidationError(f"expected {m} component expressions for color {c}")
    return PolyMap([parse_scalar(t, resolve, nstate + p) for t in texts], m=m, p=p, blocks=blocks)


def cell_variable_names(spec: ColoredNetworkSpec) -> list[str]:
    names = []
    for c in range(1, spec.C + 1):
        for i in range(1, spec.N(c) + 1):
            if spec.dim(c) == 1:
                names.append(f"x{c}.{i}")
            else:
                names.extend(f"x{c}.{i}_{t}" for t in range(1, spec.dim(c) + 1))
    return names

