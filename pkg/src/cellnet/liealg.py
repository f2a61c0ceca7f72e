"""Composition and Lie bracket of response functions, homological
operators on graded pieces, and the kernel of f -> γ_f."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, ValidationError
from .linalg import RationalMatrix, Subspace, nullspace, solve
from .network import NetworkSpec, a_map, gamma_matrix, pi
from .polyspace import GradedBasis, PolyMap, basis


def _check_pair(spec: NetworkSpec, f: PolyMap, g: PolyMap):
    spec.check_polymap(f)
    spec.check_polymap(g)
    if f.p != g.p:
        raise DomainError("maps have different parameter counts")


def _shifted(spec: NetworkSpec, g: PolyMap) -> list[PolyMap]:
    return [g.compose_linear(a_map(spec, j).selector, g.blocks) for j in range(1, spec.n + 1)]


def sigma_compose(spec: NetworkSpec, f: PolyMap, g: PolyMap) -> PolyMap:
    """f∘_Σ g = f(g∘A_{σ_1}, ..., g∘A_{σ_n}), so that γ_f∘γ_g = γ_{f∘_Σ g}."""
    _check_pair(spec, f, g)
    return f.substitute_blocks(_shifted(spec, g))


def sigma_bracket(spec: NetworkSpec, f: PolyMap, g: PolyMap) -> PolyMap:
    """[f,g]_Σ = Σ_j D_j f·(g∘A_{σ_j}) − D_j g·(f∘A_{σ_j})."""
    _check_pair(spec, f, g)
    g_shift = _shifted(spec, g)
    f_shift = _shifted(spec, f)
    out = f.zero_like()
    for j in range(1, spec.n + 1):
        out = out + f.directional(j, g_shift[j - 1]) - g.directional(j, f_shift[j - 1])
    return out


def _check_linear(f0: PolyMap):
    if f0 and not f0.in_grade(0, 0):
        raise ValidationError("the linear part must be linear in the state and free of parameters")


def ad_matrix(spec: NetworkSpec, f0: PolyMap, k: int, l: int = 0) -> RationalMatrix:
    """Matrix of g -> [f0, g]_Σ on the monomial basis of grade (k, l)."""
    spec.check_polymap(f0)
    _check_linear(f0)
    b = basis(k, l, spec.n, spec.m, f0.p)
    cols = [b.coordinates(sigma_bracket(spec, f0, e)) for e in b.entries]
    return RationalMatrix.from_columns(cols, b.keys, b.keys)


@lru_cache(maxsize=256)
def kernel_gamma_space(spec: NetworkSpec, k: int, l: int = 0, p: int = 0) -> Subspace:
    """ker γ on grade (k, l) as a subspace of basis coordinates."""
    b = basis(k, l, spec.n, spec.m, p)
    cells = (spec.m,) * spec.N
    selectors = [pi(spec, i).selector for i in range(1, spec.N + 1)]
    row_of: dict = {}
    columns = []
    for e in b.entries:
        col: dict = {}
        for i, sel in enumerate(selectors):
            image = e.compose_linear(sel, cells)
            for c, comp in enumerate(image.components):
                for ex, v in comp.items():
                    key = (i, c, ex)
                    r = row_of.setdefault(key, len(row_of))
                    col[r] = col.get(r, 0) + v
        columns.append(col)
    rows = [[Fraction(0)] * len(b) for _ in range(len(row_of))]
    for j, col in enumerate(columns):
        for r, v in col.items():
            rows[r][j] = Fraction(v)
    return Subspace(nullspace(rows, len(b)), len(b))


def kernel_gamma(spec: NetworkSpec, k: int, l: int = 0, p: int = 0) -> list[PolyMap]:
    """Echelon basis of the maps of grade (k, l) with γ_h = 0."""
    b = basis(k, l, spec.n, spec.m, p)
    return [b.from_coordinates(v) for v in kernel_gamma_space(spec, k, l, p).basis]


class NetworkAlgebra:
    """Graded Lie algebra of response functions for one homogeneous network.

    The normal form machinery only talks to this interface, so the colored
    version can supply its own.
    """

    def __init__(self, spec: NetworkSpec, p: int = 0):
        spec.require_semigroup()
        self.spec = spec
        self.p = p

    def check(self, f: PolyMap):
        self.spec.check_polymap(f)
        if f.p != self.p:
            raise DomainError(f"map has {f.p} parameters, expected {self.p}")

    def zero(self) -> PolyMap:
        return PolyMap.zero(self.spec.n, self.spec.m, self.p)

    def basis(self, k: int, l: int) -> GradedBasis:
        return basis(k, l, self.spec.n, self.spec.m, self.p)

    def bracket(self, f, g):
        return sigma_bracket(self.spec, f, g)

    def compose(self, f, g):
        return sigma_compose(self.spec, f, g)

    def kernel(self, k: int, l: int) -> Subspace:
        return kernel_gamma_space(self.spec, k, l, self.p)

    def grade_parts(self, f) -> dict:
        return f.grade_parts()

    def truncate(self, f, r1: int, r2: int):
        return f.truncate(r1, r2)

    def linear_matrix(self, f0) -> list:
        return gamma_matrix(self.spec, f0.with_params(0))

    def linear_from_matrix(self, target) -> PolyMap:
        """The unique linear f with γ_f equal to the given matrix."""
        b = basis(0, 0, self.spec.n, self.spec.m, 0)
        cols = [[x for row in gamma_matrix(self.spec, e) for x in row] for e in b.entries]
        rhs = [x for row in target for x in row]
        a = [[col[r] for col in cols] for r in range(len(rhs))]
        x = solve(a, rhs, len(b))
        if x is None:
            return None
        return b.from_coordinates(x).with_params(self.p)
