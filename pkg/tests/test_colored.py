from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cellnet.colored import (ColoredAlgebra, ColoredNetworkSpec, ColoredPolyFamily, colored_a_map,
                             colored_bracket, colored_compose, colored_gamma_eval, colored_gamma_symbolic, colored_pi,
                             extend_family, parse_colored_polymap, semigroupoid_closure)
from cellnet.errors import DomainError, StateError, ValidationError
from cellnet.finmap import FiniteMap, semigroup_closure
from cellnet.network import NetworkSpec, a_map
from cellnet.normalform import lie_series, normal_form
from cellnet.polyspace import random_polymap

THREE_CELL = {(1, 1): [(2, 2)], (1, 2): [(2,)], (2, 1): [(1, 1)]}


def three_cell(close=True):
    return ColoredNetworkSpec.build((2, 1), (1, 1), THREE_CELL, close=close)


@st.composite
def colored_specs(draw, dims=(1, 1)):
    counts = (draw(st.integers(1, 2)), draw(st.integers(1, 2)))
    grid = {}
    for d in (1, 2):
        for c in (1, 2):
            images = st.tuples(*[st.integers(1, counts[d - 1])] * counts[c - 1])
            grid[(d, c)] = draw(st.lists(images, max_size=1 if d != c else 2, unique=True))
    spec = ColoredNetworkSpec.build(counts, dims, grid)
    if any(not spec.profile(c) for c in (1, 2)) or max(len(spec.profile(c)) for c in (1, 2)) > 5:
        spec = ColoredNetworkSpec.build(counts, dims, {(1, 1): [(1,) * counts[0]], (2, 2): [(1,) * counts[1]],
                                                       (1, 2): [(1,) * counts[1]]})
    return spec


def cell_symbols(spec):
    out = []
    for c in range(1, spec.C + 1):
        for i in range(1, spec.N(c) + 1):
            out.extend(sp.Symbol(f"x{c}_{i}_{t}") for t in range(1, spec.dim(c) + 1))
    return out


def gamma_sympy(spec, F):
    """γ straight from the typed maps: slot (d, j) of cell i reads cell σ^{(d,c)}_j(i)."""
    cells = cell_symbols(spec)
    start, acc = {}, 0
    for c in range(1, spec.C + 1):
        for i in range(1, spec.N(c) + 1):
            start[(c, i)] = acc
            acc += spec.dim(c)
    out = []
    for c in range(1, spec.C + 1):
        names = []
        for d, j in spec.profile(c):
            names.extend(sp.Symbol(f"s{d}_{j}_{t}") for t in range(1, spec.dim(d) + 1))
        exprs = oracles.polymap_to_sympy(F.color(c), names)
        for i in range(1, spec.N(c) + 1):
            sub, pos = {}, 0
            for d, j in spec.profile(c):
                src = start[(d, spec.typed(d, c)[j - 1](i))]
                for t in range(spec.dim(d)):
                    sub[names[pos]] = cells[src + t]
                    pos += 1
            out.extend(sp.expand(e.xreplace(sub)) for e in exprs)
    return out, cells


def random_family(spec, r, degree=2):
    return ColoredPolyFamily([random_polymap(r, blocks=spec.blocks(c), m=spec.dim(c), max_degree=degree,
                                             density=0.6) for c in range(1, spec.C + 1)])


def test_three_cell_closure():
    raw = three_cell(close=False)
    assert not raw.is_semigroupoid
    with pytest.raises(StateError):
        colored_a_map(raw, 1, 1, 1)
    closed = semigroupoid_closure(raw)
    assert closed.is_semigroupoid
    assert [s.images for s in closed.typed(2, 2)] == [(1,)]
    for d in (1, 2):
        for c in (1, 2):
            assert closed.typed(d, c)[:raw.n(d, c)] == raw.typed(d, c)
    assert closed.profile(1) == [(1, 1), (2, 1)]
    assert closed.profile(2) == [(1, 1), (2, 1)]


@given(colored_specs())
def test_closure_is_closed_and_tabled(spec):
    for e in (1, 2):
        for d in (1, 2):
            for c in (1, 2):
                for j1, a in enumerate(spec.typed(e, d), start=1):
                    for j2, b in enumerate(spec.typed(d, c), start=1):
                        prod = tuple(a.images[x - 1] for x in b.images)
                        j3 = spec.product(e, d, c, j1, j2)
                        assert spec.typed(e, c)[j3 - 1].images == prod


@given(colored_specs())
def test_a_maps_intertwine_cell_selections(spec):
    for d in (1, 2):
        for c in (1, 2):
            for j, s in enumerate(spec.typed(d, c), start=1):
                for i in range(1, spec.N(c) + 1):
                    assert colored_a_map(spec, d, c, j) @ colored_pi(spec, c, i) == colored_pi(spec, d, s(i))


@given(colored_specs(), st.randoms(use_true_random=False))
def test_gamma_matches_direct_substitution(spec, r):
    F = random_family(spec, r)
    expected, cells = gamma_sympy(spec, F)
    names = [sp.Symbol(f"x{c}_{i}_1") for c in (1, 2) for i in range(1, spec.N(c) + 1)]
    got = [oracles.polymap_to_sympy(g, names)[0] for g in colored_gamma_symbolic(spec, F)]
    assert got == expected
    point = [Fraction(r.randint(-4, 4)) for _ in cells]
    sub = {x: sp.Integer(v) for x, v in zip(cells, point)}
    assert [sp.Rational(v.numerator, v.denominator) for v in colored_gamma_eval(spec, F, point)] == \
        [e.xreplace(sub) for e in expected]


@pytest.mark.parametrize("dims", [(1, 1), (2, 1)])
@given(data=st.data())
def test_bracket_and_compose_are_homomorphisms(dims, data):
    spec = data.draw(colored_specs(dims))
    r = data.draw(st.randoms(use_true_random=False))
    F, G = random_family(spec, r), random_family(spec, r)
    gf, cells = gamma_sympy(spec, F)
    gg, _ = gamma_sympy(spec, G)
    assert gamma_sympy(spec, colored_bracket(spec, F, G))[0] == oracles.jacobian_bracket(gf, gg, cells)
    assert gamma_sympy(spec, colored_compose(spec, F, G))[0] == oracles.field_compose(gf, gg, cells)


def test_extending_to_the_closure_keeps_the_dynamics(rng):
    raw, closed = three_cell(close=False), three_cell()
    for _ in range(5):
        F = random_family(raw, rng)
        G = extend_family(raw, closed, F)
        assert gamma_sympy(raw, F)[0] == gamma_sympy(closed, G)[0]


def test_parse_colored_functions():
    spec = three_cell()
    f = parse_colored_polymap(spec, 1, "X1.1^2 + X2.1")
    assert f.blocks == (1, 1)
    g = parse_colored_polymap(spec, 1, "X1.1*l1", p=1)
    assert g.p == 1
    with pytest.raises(ValidationError, match="not an input of color 1"):
        parse_colored_polymap(spec, 1, "X2.2")
    with pytest.raises(ValidationError, match="unknown name"):
        parse_colored_polymap(spec, 1, "X1")
    with pytest.raises(ValidationError):
        parse_colored_polymap(spec, 1, ["X1.1", "X2.1"])


def test_family_checks():
    spec = three_cell()
    with pytest.raises(DomainError):
        colored_bracket(spec, ColoredPolyFamily([parse_colored_polymap(spec, 1, "X1.1")]),
                        ColoredPolyFamily([parse_colored_polymap(spec, 1, "X1.1")]))
    with pytest.raises(ValidationError):
        ColoredNetworkSpec.build((2, 1), None, {(1, 2): [(3,)]})
    with pytest.raises(ValidationError):
        ColoredNetworkSpec.build((2, 1), None, {(3, 1): [(1, 1)]})


def test_colored_normal_form_replays():
    spec = three_cell()
    f = ColoredPolyFamily([parse_colored_polymap(spec, 1, "X1.1 + 2*X2.1 + X1.1^2 - X1.1*X2.1"),
                           parse_colored_polymap(spec, 2, "3*X1.1 - X2.1 + X1.1^2 + X2.1^3")])
    res = normal_form(spec, f, 2)
    alg = ColoredAlgebra(spec)
    current = f.truncate(2, 0)
    for grade in res.order:
        if res.generators[grade]:
            current = lie_series(alg, res.generators[grade], current, 2, 0)
    assert current == res.fbar
    again = normal_form(spec, res.fbar, 2)
    assert all(not g for g in again.generators.values())


SKEW = {(1, 1): [(1,)], (1, 2): [(1,)], (2, 2): [(1,)]}


def test_colored_skew_product_is_already_closed():
    raw = ColoredNetworkSpec.build((1, 1), None, SKEW, close=False)
    assert raw.is_semigroupoid
    assert semigroupoid_closure(raw).maps == raw.maps
    # color 1 reads only itself; A for the (1<-2) map keeps the single color-1 slot
    assert raw.profile(1) == [(1, 1)]
    assert raw.profile(2) == [(1, 1), (2, 1)]
    assert colored_a_map(raw, 1, 2, 1).selector == (1,)


def test_colored_skew_product_linear_bracket():
    spec = ColoredNetworkSpec.build((1, 1), None, SKEW)
    F = ColoredPolyFamily([parse_colored_polymap(spec, 1, "2*X1.1"),
                           parse_colored_polymap(spec, 2, "X1.1 - 3*X2.1")])
    G = ColoredPolyFamily([parse_colored_polymap(spec, 1, "-X1.1"),
                           parse_colored_polymap(spec, 2, "5*X1.1 + X2.1")])
    gf, cells = gamma_sympy(spec, F)
    gg, _ = gamma_sympy(spec, G)
    # linear fields: the bracket is the matrix commutator, taken with the Jacobian convention
    assert gamma_sympy(spec, colored_bracket(spec, F, G))[0] == oracles.jacobian_bracket(gf, gg, cells)


def test_a_maps_represent_the_semigroupoid():
    spec = three_cell()
    for e in (1, 2):
        for d in (1, 2):
            for c in (1, 2):
                for j1 in range(1, spec.n(e, d) + 1):
                    for j2 in range(1, spec.n(d, c) + 1):
                        j3 = spec.product(e, d, c, j1, j2)
                        lhs = colored_a_map(spec, e, d, j1) @ colored_a_map(spec, d, c, j2)
                        assert lhs == colored_a_map(spec, e, c, j3)


def test_jacobi_on_three_cell_triples(rng):
    spec = three_cell()
    for _ in range(10):
        f, g, h = (random_family(spec, rng) for _ in range(3))
        total = (colored_bracket(spec, f, colored_bracket(spec, g, h))
                 + colored_bracket(spec, g, colored_bracket(spec, h, f))
                 + colored_bracket(spec, h, colored_bracket(spec, f, g)))
        assert not total
        assert colored_bracket(spec, f, g) == -colored_bracket(spec, g, f)


def test_one_color_reduces_to_homogeneous():
    maps = [(1, 2, 3), (1, 1, 2)]
    col = ColoredNetworkSpec.build((3,), None, {(1, 1): maps})
    table = semigroup_closure([FiniteMap(m) for m in maps])
    assert col.typed(1, 1) == table.elements
    spec = NetworkSpec.from_maps([FiniteMap(m) for m in maps])
    for j in range(1, spec.n + 1):
        assert colored_a_map(col, 1, 1, j) == a_map(spec, j)
