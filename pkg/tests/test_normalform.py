import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cellnet.errors import ValidationError
from cellnet.finmap import FiniteMap
from cellnet.liealg import NetworkAlgebra, sigma_bracket
from cellnet.linalg import Subspace
from cellnet.network import NetworkSpec, gamma_matrix
from cellnet.normalform import (GradeSolver, GradeWorkspace, homological_solve, lie_series, normal_form,
                                normalization_order, sn_decompose)
from cellnet.polyspace import parse_polymap, random_polymap

FEED_FORWARD = [(1, 2, 3), (1, 1, 2)]
SKEW = [(1, 2), (1, 1)]
FOUR_MAP = [(1, 1), (2, 2), (2, 1), (1, 2)]


def network(maps):
    return NetworkSpec.from_maps([FiniteMap(s) for s in maps])


@st.composite
def specs_with_linear(draw):
    N = draw(st.integers(1, 3))
    images = draw(st.lists(st.tuples(*[st.integers(1, N)] * N), min_size=1, max_size=2, unique=True))
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in images])
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=spec.n, max_size=spec.n))
    f0 = parse_polymap(" + ".join(f"({c})*X{j}" for j, c in enumerate(coeffs, start=1)), spec.n)
    return spec, f0


@given(specs_with_linear())
def test_sn_split_properties(case):
    spec, f0 = case
    split = sn_decompose(spec, f0)
    M = sp.Matrix(gamma_matrix(spec, f0))
    S, N = sp.Matrix(split.S), sp.Matrix(split.N)
    assert S + N == M
    assert S * N == N * S
    assert N ** M.shape[0] == sp.zeros(*M.shape)
    assert S.is_diagonalizable(reals_only=False)
    assert sp.Matrix(gamma_matrix(spec, split.f0_S)) == S
    assert split.f0_S + split.f0_N == f0
    poly_s = sp.zeros(*M.shape)
    for k, c in enumerate(split.witness_polynomial):
        poly_s += sp.Rational(c.numerator, c.denominator) * M ** k
    assert poly_s == S


@pytest.mark.parametrize("a1,a2", [(1, 1), (1, -1), (2, 0), (-3, 5)])
def test_skew_linear_part_is_semisimple(a1, a2):
    split = sn_decompose(network(SKEW), parse_polymap(f"{a1}*X1 + {a2}*X2", 2))
    assert not split.f0_N
    assert split.unique


def test_sn_on_four_map_is_not_unique():
    split = sn_decompose(network(FOUR_MAP), parse_polymap("X1 + 2*X3", 4))
    assert not split.unique


def test_homological_solve_skew_example():
    spec = network(SKEW)
    f0 = parse_polymap("X1 + X2", 2)
    h = parse_polymap("(X1 - X2)*X2", 2)
    g, residual = homological_solve(spec, f0, 1, 0, h)
    assert g == h.scale(Fraction(-1, 2))
    assert not residual


@pytest.mark.parametrize("strategy", ["sn", "image"])
@pytest.mark.parametrize("maps,linear", [(FEED_FORWARD, "X2 + 2*X3"), (SKEW, "X2"), (FOUR_MAP, "X1 + 2*X3 - X4")])
def test_homological_equation_holds(maps, linear, strategy):
    spec = network(maps)
    alg = NetworkAlgebra(spec)
    f0 = parse_polymap(linear, spec.n)
    split = sn_decompose(spec, f0) if strategy == "sn" else None
    rng = random.Random(5)
    for k in (1, 2):
        space = GradeWorkspace(alg, k, 0, True)
        solver = GradeSolver.build(space, f0, split, strategy)
        normal = solver.normal_basis()
        for _ in range(3):
            h = random_polymap(rng, spec.n, 1, 0, k + 1, min_degree=k + 1)
            g, res = solver.solve(h)
            diff = sigma_bracket(spec, f0, g) + res - h
            assert space.kernel.contains(space.basis.coordinates(diff))
            b = space.basis
            allowed = Subspace([b.coordinates(v) for v in normal] + list(space.kernel.basis), len(b))
            assert allowed.contains(b.coordinates(res))


def test_normal_space_dimensions_agree_between_strategies():
    spec = network(FEED_FORWARD)
    alg = NetworkAlgebra(spec)
    f0 = parse_polymap("X2 + 2*X3", 3)
    split = sn_decompose(spec, f0)
    for k in (0, 1, 2):
        space = GradeWorkspace(alg, k, 0)
        sn = GradeSolver.build(space, f0, split, "sn")
        im = GradeSolver.build(space, f0, None, "image")
        assert len(sn.normal) == len(im.normal)


def test_lie_series_of_zero_generator_truncates():
    alg = NetworkAlgebra(network(SKEW))
    f = parse_polymap("X2 + X1^2 + X1^3*X2", 2)
    assert lie_series(alg, alg.zero(), f, 1) == parse_polymap("X2 + X1^2", 2)


def test_lie_series_first_terms():
    alg = NetworkAlgebra(network(SKEW))
    f = parse_polymap("X2", 2)
    g = parse_polymap("X1^2", 2)
    once = alg.bracket(g, f)
    twice = alg.bracket(g, once)
    # g raises the degree by one, so grade 2 keeps exactly two brackets
    expected = f + once + twice.scale(Fraction(1, 2))
    assert lie_series(alg, g, f, 2) == expected


def _family(rng, maps, linear, p=0):
    spec = network(maps)
    f = random_polymap(rng, spec.n, 1, p, 3, min_degree=0, density=0.6, max_param_degree=1 if p else 0)
    return spec, f - f.grade(-1, 0) - f.grade(0, 0) + parse_polymap(linear, spec.n, 1, p)


@pytest.mark.parametrize("maps,linear", [(FEED_FORWARD, "X2 + 2*X3"), (SKEW, "X2"), (FOUR_MAP, "X1 + 2*X3 - X4")])
def test_normal_form_replays_and_is_idempotent(maps, linear):
    rng = random.Random(11)
    spec, f = _family(rng, maps, linear, p=1)
    res = normal_form(spec, f, 2, 1)
    alg = NetworkAlgebra(spec, 1)
    current = f.truncate(2, 1)
    for grade in res.order:
        g = res.generators[grade]
        if g:
            current = lie_series(alg, g, current, 2, 1)
    assert current == res.fbar
    again = normal_form(spec, res.fbar, 2, 1)
    assert all(not g for g in again.generators.values())
    assert again.fbar == res.fbar


def test_quotient_and_full_space_agree_without_kernel():
    rng = random.Random(3)
    spec, f = _family(rng, FEED_FORWARD, "X2 + 2*X3")
    assert normal_form(spec, f, 2).fbar == normal_form(spec, f, 2, quotient=False).fbar


def test_normalization_order():
    assert normalization_order(2, 1) == [(1, 0), (2, 0), (-1, 1), (0, 1), (1, 1), (2, 1)]
    assert normalization_order(0) == []


@pytest.mark.parametrize("text,message", [("X1^2", "linear part"), ("X2 + 1", "vanish at the origin")])
def test_normal_form_rejects_bad_families(text, message):
    with pytest.raises(ValidationError, match=message):
        normal_form(network(SKEW), parse_polymap(text, 2), 2)


def test_normal_form_rejects_bad_arguments():
    f = parse_polymap("X2", 2)
    with pytest.raises(ValidationError):
        normal_form(network(SKEW), f, 2, strategy="other")
    with pytest.raises(ValidationError):
        normal_form(network(SKEW), f, -1)
