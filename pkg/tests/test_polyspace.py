from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cellnet.errors import DomainError, ValidationError
from cellnet.polyspace import (PolyMap, basis, basis_size, format_polymap, parse_polymap,
                               random_polymap, variable_names)


def syms(f):
    return [sp.Symbol(n) for n in variable_names(f.blocks, f.p)]


def as_sympy(f):
    return oracles.polymap_to_sympy(f, syms(f))


polys = st.builds(lambda r, n, m, p: random_polymap(r, n, m, p, 3, min_degree=0, density=0.4),
                  st.randoms(use_true_random=False), st.integers(1, 3), st.integers(1, 2), st.integers(0, 1))


@pytest.mark.parametrize("k,l,n,m,p", [(0, 0, 3, 1, 0), (1, 0, 3, 1, 0), (2, 0, 2, 2, 0), (-1, 1, 2, 1, 1),
                                        (0, 2, 3, 1, 2), (1, 1, 2, 2, 1), (-1, 0, 3, 1, 1), (0, 1, 2, 1, 0)])
def test_basis_size_matches_count(k, l, n, m, p):
    state = comb(n * m + k, k + 1) if k >= -1 else 0
    params = comb(p + l - 1, l) if p else (1 if l == 0 else 0)
    expected = 0 if (k, l) == (-1, 0) else m * state * params
    assert basis_size(k, l, n, m, p) == expected
    assert len(basis(k, l, n, m, p)) == expected


def test_basis_order_and_coordinates():
    b = basis(1, 0, 2)
    assert [e for _, e in b.keys] == [(2, 0), (1, 1), (0, 2)]
    f = parse_polymap("3*X1^2 - X2^2", 2)
    assert b.coordinates(f) == [3, 0, -1]
    assert b.from_coordinates([3, 0, -1]) == f
    with pytest.raises(DomainError):
        b.coordinates(parse_polymap("X1", 2))


@given(polys)
def test_parse_format_round_trip(f):
    text = format_polymap(f)
    assert parse_polymap(text, f.n, f.m, f.p) == f


@given(polys, st.randoms(use_true_random=False))
def test_arithmetic_matches_sympy(f, r):
    g = random_polymap(r, f.n, f.m, f.p, 2, min_degree=0)
    fs, gs = as_sympy(f), as_sympy(g)
    assert as_sympy(f + g) == [sp.expand(a + b) for a, b in zip(fs, gs)]
    assert as_sympy(f - g) == [sp.expand(a - b) for a, b in zip(fs, gs)]
    assert as_sympy(f.scale(Fraction(-3, 2))) == [sp.expand(a * sp.Rational(-3, 2)) for a in fs]
    if f.m == 1:
        assert as_sympy(f * g) == [sp.expand(fs[0] * gs[0])]


def test_grading():
    f = parse_polymap("l1 + X1 + X1*l1 + X1^2*X2 + l1^2*X2^2", 2, 1, 1)
    parts = f.grade_parts()
    assert set(parts) == {(-1, 1), (0, 0), (0, 1), (2, 0), (1, 2)}
    assert f.grade(2, 0) == parse_polymap("X1^2*X2", 2, 1, 1)
    assert f.truncate(1, 1) == parse_polymap("l1 + X1 + X1*l1", 2, 1, 1)
    assert f.in_grade(0, 0) is False
    assert parts[(0, 0)].in_grade(0, 0)


@given(polys, st.randoms(use_true_random=False))
def test_evaluate_matches_sympy(f, r):
    s = syms(f)
    point = [Fraction(r.randint(-5, 5), r.randint(1, 4)) for _ in s]
    vals = f.evaluate(point[:f.nstate], point[f.nstate:])
    sub = {a: sp.Rational(b.numerator, b.denominator) for a, b in zip(s, point)}
    assert [sp.Rational(v.numerator, v.denominator) for v in vals] == [e.xreplace(sub) for e in as_sympy(f)]


@given(polys)
def test_partial_matches_sympy(f):
    s = syms(f)
    for slot in range(1, f.n + 1):
        for c in range(1, f.m + 1):
            v = s[f.var_index(slot, c)]
            assert as_sympy(f.partial(slot, c)) == [sp.diff(e, v) for e in as_sympy(f)]


@given(polys, st.randoms(use_true_random=False))
def test_compose_linear_matches_substitution(f, r):
    src = r.randint(1, 3)
    sel = [r.randint(1, src) for _ in range(f.n)]
    g = f.compose_linear(sel, (f.m,) * src)
    s_old, s_new = syms(f), syms(g)
    sub = {}
    for j, k in enumerate(sel, start=1):
        for c in range(1, f.m + 1):
            sub[s_old[f.var_index(j, c)]] = s_new[g.var_index(k, c)]
    for t in range(1, f.p + 1):
        sub[s_old[f.param_index(t)]] = s_new[g.param_index(t)]
    assert as_sympy(g) == [sp.expand(e.xreplace(sub)) for e in as_sympy(f)]


@given(st.randoms(use_true_random=False))
def test_substitute_blocks_matches_sympy(r):
    f = random_polymap(r, 2, 1, 1, 2, min_degree=0)
    subs = [random_polymap(r, 3, 1, 1, 2, min_degree=0) for _ in range(2)]
    out = f.substitute_blocks(subs)
    s_f, s_g = syms(f), syms(subs[0])
    replace = {s_f[0]: as_sympy(subs[0])[0], s_f[1]: as_sympy(subs[1])[0], s_f[2]: s_g[3]}
    assert as_sympy(out) == [sp.expand(as_sympy(f)[0].xreplace(replace))]


def test_extend_and_params():
    f = parse_polymap("X1*X2 + l1", 2, 1, 1)
    g = f.extend(3)
    assert g.n == 3 and format_polymap(g) == "l1 + X1*X2"
    assert f.with_params(2).p == 2
    with pytest.raises(DomainError):
        f.with_params(0)
    with pytest.raises(DomainError):
        f.extend(1)


def test_vector_valued_parse():
    f = parse_polymap(["X1_1 + X2_2", "X1_2^2"], 2, 2)
    assert f.m == 2 and f.n == 2
    assert format_polymap(f) == ["X1_1 + X2_2", "X1_2^2"]
    with pytest.raises(ValidationError):
        parse_polymap("X1", 2, 2)


@pytest.mark.parametrize("text,fragment", [
    ("X1 + * X2", "column 6"),
    ("X4", "outside X1..X3"),
    ("X1 / X2", "column"),
    ("X1^X2", "column"),
    ("(X1 + X2", "column"),
    ("y1", "unknown name"),
    ("l1", "outside l1..l0"),
])
def test_parse_errors_are_located(text, fragment):
    with pytest.raises(ValidationError) as err:
        parse_polymap(text, 3)
    assert fragment in str(err.value)


def test_parse_accepts_both_power_styles_and_rationals():
    assert parse_polymap("X1**2/2", 1) == parse_polymap("1/2*X1^2", 1)
    assert parse_polymap("-(X1 - 2)^2 + 4", 1) == parse_polymap("-X1^2 + 4*X1", 1)


def test_rejects_float_coefficients():
    with pytest.raises(ValidationError):
        PolyMap([{(1,): 0.5}], n=1)
