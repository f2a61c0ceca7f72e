import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cellnet.errors import DomainError, ValidationError
from cellnet.finmap import FiniteMap
from cellnet.liealg import (NetworkAlgebra, ad_matrix, kernel_gamma, kernel_gamma_space, sigma_bracket,
                            sigma_compose)
from cellnet.network import NetworkSpec, gamma_matrix, gamma_symbolic
from cellnet.polyspace import basis, parse_polymap, random_polymap

FOUR_MAP = [(1, 1), (2, 2), (2, 1), (1, 2)]


@st.composite
def small_specs(draw):
    N = draw(st.integers(1, 3))
    images = draw(st.lists(st.tuples(*[st.integers(1, N)] * N), min_size=1, max_size=2, unique=True))
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in images])
    if spec.n > 4:
        spec = NetworkSpec.from_maps([FiniteMap(images[0])])
    return spec


def fields(spec, f):
    cells = oracles.symbols("x", spec.N)
    return [oracles.polymap_to_sympy(c, cells)[0] for c in gamma_symbolic(spec, f)], cells


@given(small_specs(), st.randoms(use_true_random=False))
def test_compose_is_a_homomorphism(spec, r):
    f = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    g = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    F, xs = fields(spec, f)
    G, _ = fields(spec, g)
    H, _ = fields(spec, sigma_compose(spec, f, g))
    assert H == oracles.field_compose(F, G, xs)


@given(small_specs(), st.randoms(use_true_random=False))
def test_bracket_is_a_homomorphism(spec, r):
    f = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    g = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    F, xs = fields(spec, f)
    G, _ = fields(spec, g)
    H, _ = fields(spec, sigma_bracket(spec, f, g))
    assert H == oracles.jacobian_bracket(F, G, xs)


@given(small_specs(), st.randoms(use_true_random=False))
def test_bracket_matches_selector_formula(spec, r):
    f = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    g = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    xs = oracles.symbols("X", spec.n)
    expected = oracles.bracket_formula([s.images for s in spec.maps], oracles.polymap_to_sympy(f, xs)[0],
                                       oracles.polymap_to_sympy(g, xs)[0], xs)
    assert oracles.polymap_to_sympy(sigma_bracket(spec, f, g), xs)[0] == expected


@given(small_specs(), st.randoms(use_true_random=False))
def test_bracket_with_vector_cells(spec, r):
    spec = spec.with_dim(2)
    f = random_polymap(r, spec.n, 2, 0, 2, min_degree=0)
    g = random_polymap(r, spec.n, 2, 0, 2, min_degree=0)
    cells = oracles.slot_symbols(spec.N, 2, "x")

    def field(h):
        return [e for c in gamma_symbolic(spec, h) for e in oracles.polymap_to_sympy(c, cells)]

    assert field(sigma_bracket(spec, f, g)) == oracles.jacobian_bracket(field(f), field(g), cells)


@given(small_specs(), st.randoms(use_true_random=False))
def test_kernel_is_an_ideal(spec, r):
    kernel = kernel_gamma(spec, 1)
    if not kernel:
        return
    f = random_polymap(r, spec.n, 1, 0, 2, min_degree=0)
    h = kernel[r.randrange(len(kernel))]
    F, _ = fields(spec, sigma_bracket(spec, f, h))
    assert all(e == 0 for e in F)


@settings(max_examples=25)
@given(small_specs(), st.integers(0, 2))
def test_kernel_dimension_matches_sympy(spec, k):
    images = [s.images for s in spec.maps]
    assert len(kernel_gamma_space(spec, k)) == oracles.kernel_dimension(images, k + 1)


def test_four_map_kernel():
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in FOUR_MAP])
    assert len(kernel_gamma_space(spec, 0)) == oracles.kernel_dimension(FOUR_MAP, 1) == 1
    assert len(kernel_gamma_space(spec, 1)) == oracles.kernel_dimension(FOUR_MAP, 2) == 5
    (lin,) = kernel_gamma(spec, 0)
    xs = oracles.symbols("X", 4)
    expr = oracles.polymap_to_sympy(lin, xs)[0]
    assert sp.expand(expr / expr.coeff(xs[0])) == xs[0] + xs[1] - xs[2] - xs[3]


def test_kernel_with_parameters():
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in FOUR_MAP])
    # a parameter monomial multiplies the state kernel
    assert len(kernel_gamma_space(spec, 0, 1, 1)) == 1
    assert len(kernel_gamma_space(spec, -1, 1, 1)) == 0


def test_ad_matrix_columns_are_brackets():
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in [(1, 2, 3), (1, 1, 2)]])
    f0 = parse_polymap("X2 + 2*X3", 3)
    b = basis(1, 0, 3)
    mat = ad_matrix(spec, f0, 1)
    for j, e in enumerate(b.entries):
        assert [row[j] for row in mat.entries] == b.coordinates(sigma_bracket(spec, f0, e))
    with pytest.raises(ValidationError):
        ad_matrix(spec, parse_polymap("X1^2", 3), 1)


def test_linear_from_matrix_round_trip(rng):
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in [(1, 2, 3), (1, 1, 2)]])
    alg = NetworkAlgebra(spec)
    f0 = random_polymap(rng, 3, 1, 0, 1, min_degree=0)
    assert alg.linear_from_matrix(gamma_matrix(spec, f0)) == f0
    assert alg.linear_from_matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]]) is None


def test_mismatched_maps_are_rejected():
    spec = NetworkSpec.from_maps([FiniteMap(t) for t in [(1, 2, 3), (1, 1, 2)]])
    f = parse_polymap("X1", 3)
    with pytest.raises(DomainError):
        sigma_bracket(spec, f, parse_polymap("X1", 3, 1, 1))
    with pytest.raises(DomainError):
        sigma_compose(spec, f, parse_polymap("X1", 2))
