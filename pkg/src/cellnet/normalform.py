"""Semisimple/nilpotent splitting of linear response functions and
Lie-series normal forms graded by state and parameter degree.

All homological algebra runs in the quotient of each graded piece by
ker γ.  Coset representatives are the vectors reduced against the
echelon basis of the kernel, so quotient coordinates are simply the
non-pivot monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InternalError, ValidationError
from .linalg import Subspace, jordan_chevalley, nullspace, rank, solve

STRATEGIES = ("sn", "image")


def algebra_for(spec, p: int = 0):
    """The graded Lie algebra object for a homogeneous or colored network."""
    from .colored import ColoredAlgebra, ColoredNetworkSpec
    from .liealg import NetworkAlgebra

    if isinstance(spec, ColoredNetworkSpec):
        return ColoredAlgebra(spec, p)
    return NetworkAlgebra(spec, p)


@dataclass(frozen=True)
class SnSplit:
    """f0 = f0_S + f0_N with γ_{f0_S} semisimple, γ_{f0_N} nilpotent.

    ``witness_polynomial`` lists the coefficients (constant term first) of
    a polynomial p with p(γ_{f0}) = γ_{f0_S}.  ``unique`` is False when ker γ
    contains linear maps; f0_S is then the reduced representative.
    """

    f0: object
    f0_S: object
    f0_N: object
    witness_polynomial: tuple
    S: tuple
    N: tuple
    unique: bool = True


def sn_decompose(spec, f0) -> SnSplit:
    algebra = algebra_for(spec, f0.p)
    algebra.check(f0)
    for (k, l) in algebra.grade_parts(f0):
        if (k, l) != (0, 0):
            raise ValidationError("the map to split must be linear in the state without parameters")
    m = algebra.linear_matrix(f0)
    s, n, poly = jordan_chevalley(m)
    f0_s = algebra.linear_from_matrix(s)
    if f0_s is None:
        raise InternalError("semisimple part is not the matrix of a network map")
    kernel = algebra.kernel(0, 0)
    b = algebra.basis(0, 0)
    if len(kernel):
        f0_s = b.from_coordinates(kernel.reduce(b.coordinates(f0_s)))
    if algebra.linear_matrix(f0_s) != s:
        raise InternalError("recovered semisimple part does not reproduce its matrix")
    f0_n = f0 - f0_s
    return SnSplit(f0, f0_s, f0_n, tuple(poly), tuple(map(tuple, s)), tuple(map(tuple, n)),
                   unique=not len(kernel))


def normalization_order(r1: int, r2: int = 0) -> list[tuple[int, int]]:
    """Grades in the order they are normalized: row l = 0 first, then each
    parameter degree from k = -1 upwards."""
    order = [(k, 0) for k in range(1, r1 + 1)]
    for l in range(1, r2 + 1):
        order += [(k, l) for k in range(-1, r1 + 1)]
    return order


class GradeWorkspace:
    """One graded piece modulo ker γ, optionally cut down to an invariant subspace.

    Vectors come in three coordinate systems: basis coordinates (one per
    monomial), quotient coordinates (one per non-pivot monomial of the
    kernel) and workspace coordinates (one per echelon basis vector of W).
    """

    def __init__(self, algebra, k: int, l: int, quotient: bool = True, invariant=None):
        self.algebra = algebra
        self.k, self.l = k, l
        self.basis = algebra.basis(k, l)
        dim = len(self.basis)
        self.kernel = algebra.kernel(k, l) if quotient else Subspace([], dim)
        self.qcols = self.kernel.free_columns()
        if invariant is None:
            self.W = Subspace.full(len(self.qcols))
        else:
            self.W = Subspace([self.to_quotient(self.basis.coordinates(g)) for g in invariant],
                              len(self.qcols))

    @property
    def dim(self) -> int:
        return len(self.W)

    def to_quotient(self, vec: Sequence) -> list:
        red = self.kernel.reduce(vec)
        return [red[c] for c in self.qcols]

    def from_quotient(self, qvec: Sequence) -> list:
        full = [Fraction(0)] * len(self.basis)
        for c, v in zip(self.qcols, qvec):
            full[c] = v
        return full

    def from_workspace(self, wvec: Sequence) -> list:
        q = [Fraction(0)] * len(self.qcols)
        for coef, row in zip(wvec, self.W.basis):
            if coef:
                for j, x in enumerate(row):
                    if x:
                        q[j] += coef * x
        return q

    def lift(self, wvec: Sequence):
        return self.basis.from_coordinates(self.from_quotient(self.from_workspace(wvec)))

    def coordinates(self, f) -> list:
        """Workspace coordinates of the coset of f; raises if it is outside W."""
        q = self.to_quotient(self.basis.coordinates(f))
        rest = self.W.reduce(q)
        if any(rest):
            raise DomainError(f"grade ({self.k},{self.l}) component leaves the invariant subspace")
        return [q[c] for c in self.W.pivots]

    def operator(self, f0) -> list:
        """Matrix of ad_{f0} acting on the workspace."""
        cols = []
        for i in range(self.dim):
            e = [Fraction(0)] * self.dim
            e[i] = Fraction(1)
            image = self.algebra.bracket(f0, self.lift(e))
            try:
                cols.append(self.coordinates(image))
            except DomainError:
                raise InternalError(
                    f"ad does not preserve the workspace at grade ({self.k},{self.l})") from None
        return [[col[r] for col in cols] for r in range(self.dim)]


def _columns(mat, ncols):
    return [[row[j] for row in mat] for j in range(ncols)]


@dataclass
class GradeSolver:
    """Normal space and homological solver for one grade."""

    space: GradeWorkspace
    T: list
    normal: list

    @classmethod
    def build(cls, space: GradeWorkspace, f0, split: SnSplit | None, strategy: str,
              strict: bool = True) -> "GradeSolver":
        r = space.dim
        if strategy == "image":
            T = space.operator(f0)
            im = Subspace(_columns(T, r), r)
            normal = []
            for c in im.free_columns():
                e = [Fraction(0)] * r
                e[c] = Fraction(1)
                normal.append(e)
        elif strategy == "sn":
            if split is None:
                raise DomainError("the SN strategy needs a semisimple/nilpotent split")
            TS = space.operator(split.f0_S)
            TN = space.operator(split.f0_N)
            T = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(TS, TN)]
            ker_s = Subspace(nullspace(TS, r), r)
            images = []
            for v in ker_s.basis:
                w = [sum((row[j] * v[j] for j in range(r) if v[j]), Fraction(0)) for row in TN]
                try:
                    images.append(ker_s.coordinates(w))
                except DomainError:
                    raise InternalError("nilpotent part does not preserve the semisimple kernel") from None
            im = Subspace(images, len(ker_s))
            normal = [list(ker_s.basis[c]) for c in im.free_columns()]
        else:
            raise ValidationError(f"unknown strategy {strategy!r}, use one of {STRATEGIES}")
        rank_t = rank(_columns(T, r), r)
        total = rank(_columns(T, r) + normal, r)
        if total != r or rank_t + len(normal) != r:
            msg = (f"normal space at grade ({space.k},{space.l}) is not complementary to the image "
                   f"(rank {rank_t}, normal {len(normal)}, dimension {r})")
            if strict:
                raise InternalError(msg)
            raise ValidationError(msg)
        return cls(space, T, normal)

    def solve(self, h):
        """(g, residual) with ad_{f0}(g) + residual = h modulo ker γ."""
        sp = self.space
        r = sp.dim
        hw = sp.coordinates(h)
        a = [list(self.T[i]) + [v[i] for v in self.normal] for i in range(r)]
        x = solve(a, hw, r + len(self.normal))
        if x is None:
            raise InternalError(f"homological equation has no solution at grade ({sp.k},{sp.l})")
        g = sp.lift(x[:r])
        res_w = [Fraction(0)] * r
        for c, v in zip(x[r:], self.normal):
            if c:
                res_w = [a_ + c * b_ for a_, b_ in zip(res_w, v)]
        return g, sp.lift(res_w)

    def normal_basis(self) -> list:
        return [self.space.lift(v) for v in self.normal]


def homological_solve(spec, f0, k: int, l: int, h, strategy: str = "sn", *, split: SnSplit | None = None,
                      quotient: bool = True, invariant=None):
    """Solve ad_{f0}(g) + residual ≡ h modulo ker γ with residual in the normal space.

    Free directions of the solution are set to zero, so g has no
    component along the kernel of ad.
    """
    algebra = algebra_for(spec, f0.p)
    algebra.check(f0)
    algebra.check(h)
    if strategy == "sn" and split is None:
        split = sn_decompose(spec, f0.with_params(0) if hasattr(f0, "with_params") else f0)
        split = _split_with_params(split, f0.p)
    space = GradeWorkspace(algebra, k, l, quotient, invariant)
    solver = GradeSolver.build(space, f0, split, strategy, strict=quotient)
    return solver.solve(h)


def _split_with_params(split: SnSplit, p: int) -> SnSplit:
    if split.f0_S.p == p:
        return split
    return SnSplit(split.f0.with_params(p), split.f0_S.with_params(p), split.f0_N.with_params(p),
                   split.witness_polynomial, split.S, split.N, split.unique)


def lie_series(algebra, g, f, r1: int, r2: int = 0):
    """e^{ad_g} f = f + [g,f] + [g,[g,f]]/2 + ..., truncated at grade (r1, r2)."""
    result = algebra.truncate(f, r1, r2)
    term = result
    limit = (r1 + 3) * (r2 + 2) + 2
    i = 0
    while True:
        i += 1
        term = algebra.truncate(algebra.bracket(g, term), r1, r2).scale(Fraction(1, i))
        if not term:
            return result
        result = result + term
        if i > limit:
            raise InternalError("Lie series did not terminate under truncation")


@dataclass
class QuotientData:
    """Echelon data for one graded piece modulo ker γ."""

    kernel: list
    representatives: list


@dataclass
class NormalFormResult:
    fbar: object
    generators: dict
    normal_spaces: dict
    quotient_bases: dict
    residuals: dict
    order: list
    r1: int
    r2: int
    strategy: str
    split: SnSplit | None = None
    quotient: bool = True
    invariant: bool = False
    extra: dict = field(default_factory=dict)


def _check_family(algebra, f):
    parts = algebra.grade_parts(f)
    if (-1, 0) in parts:
        raise ValidationError("the map must vanish at the origin for zero parameters")
    if (0, 0) not in parts:
        raise ValidationError("the linear part f_{0,0} is missing")
    return parts


def normal_form(spec, f, r1: int, r2: int = 0, strategy: str = "sn", *, quotient: bool = True,
                invariance=None) -> NormalFormResult:
    """Normalize grade by grade up to state degree r1+1 and parameter degree r2.

    ``invariance`` is a list of dynamical input symmetries; when given,
    every graded piece is restricted to maps invariant under their q parts.
    """
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}, use one of {STRATEGIES}")
    if r1 < 0 or r2 < 0:
        raise ValidationError("degree bounds must be non-negative")
    algebra = algebra_for(spec, f.p)
    algebra.check(f)
    parts = _check_family(algebra, f)
    current = algebra.truncate(f, r1, r2)
    f0 = parts[(0, 0)]
    split = None
    if strategy == "sn":
        split = _split_with_params(sn_decompose(spec, f0.with_params(0)), f.p)
    def invariant_of(k, l):
        if invariance is None:
            return None
        from .structure import invariant_subbasis

        return invariant_subbasis(spec, list(invariance), k, l, p=f.p)

    if invariance is not None:
        GradeWorkspace(algebra, 0, 0, quotient, invariant_of(0, 0)).coordinates(f0)
    generators, normals, quotients, residuals = {}, {}, {}, {}
    order = normalization_order(r1, r2)
    for (k, l) in order:
        space = GradeWorkspace(algebra, k, l, quotient, invariant_of(k, l))
        solver = GradeSolver.build(space, f0, split, strategy, strict=quotient)
        h = algebra.grade_parts(current).get((k, l), space.basis.from_coordinates([0] * len(space.basis)))
        g, res = solver.solve(h)
        if g:
            current = lie_series(algebra, g, current, r1, r2)
        generators[(k, l)] = g
        residuals[(k, l)] = res
        normals[(k, l)] = solver.normal_basis()
        quotients[(k, l)] = QuotientData(
            [space.basis.from_coordinates(v) for v in space.kernel.basis],
            [space.basis.entries[c] for c in space.qcols])
    final_parts = algebra.grade_parts(current)
    for (k, l) in order:
        space = GradeWorkspace(algebra, k, l, quotient)
        comp = final_parts.get((k, l))
        diff = residuals[(k, l)] if comp is None else comp - residuals[(k, l)]
        if not space.kernel.contains(space.basis.coordinates(diff)):
            raise InternalError(f"grade ({k},{l}) changed after it was normalized")
    return NormalFormResult(current, generators, normals, quotients, residuals, order, r1, r2,
                            strategy, split, quotient, invariance is not None)


def normal_form_symmetry_check(spec, split: SnSplit, fbar, r1: int, r2: int = 0,
                               quotient: bool = True) -> bool:
    """True iff [f0_S, fbar] vanishes modulo ker γ in every grade up to (r1, r2)."""
    algebra = algebra_for(spec, fbar.p)
    s = _split_with_params(split, fbar.p).f0_S
    br = algebra.bracket(s, algebra.truncate(fbar, r1, r2))
    for (k, l), part in algebra.grade_parts(br).items():
        if k > r1 or l > r2:
            continue
        if not quotient:
            return False
        b = algebra.basis(k, l)
        if not algebra.kernel(k, l).contains(b.coordinates(part)):
            return False
    return True
