import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cellnet.errors import DomainError, ValidationError
from cellnet.finmap import (FiniteMap, compose_maps, is_faithful_tilde, is_semigroup, remove_slaves,
                           semigroup_closure)


@st.composite
def map_sets(draw, max_cells=4, max_maps=3):
    N = draw(st.integers(1, max_cells))
    images = draw(st.lists(st.tuples(*[st.integers(1, N)] * N), min_size=1, max_size=max_maps, unique=True))
    return [FiniteMap(t) for t in images]


def test_finite_map_basics():
    s = FiniteMap((1, 1, 2))
    assert s(3) == 2
    assert s.domain_size == 3
    assert not s.is_permutation()
    assert FiniteMap.identity(3).images == (1, 2, 3)
    p = FiniteMap((2, 3, 1))
    assert (p @ p.inverse()).images == (1, 2, 3)


def test_composition_order():
    a, b = FiniteMap((1, 1, 2)), FiniteMap((2, 3, 3))
    # (a∘b)(i) = a(b(i))
    assert compose_maps(a, b).images == (1, 2, 2)
    assert (a @ b).images == (1, 2, 2)


def test_rejects_bad_maps():
    with pytest.raises(ValidationError):
        FiniteMap((0, 1))
    with pytest.raises(ValidationError):
        FiniteMap((1, 4, 2))
    with pytest.raises(ValidationError):
        semigroup_closure([])
    with pytest.raises(ValidationError):
        semigroup_closure([FiniteMap((1, 2)), FiniteMap((1, 2))])
    with pytest.raises(DomainError):
        semigroup_closure([FiniteMap((1, 2)), FiniteMap((1, 1, 1))])


def test_closure_keeps_user_maps_first():
    t = semigroup_closure([FiniteMap((1, 2, 3)), FiniteMap((1, 1, 2))])
    assert [s.images for s in t.elements] == [(1, 2, 3), (1, 1, 2), (1, 1, 1)]
    assert t.product(2, 2) == 3
    assert t.index(FiniteMap((1, 1, 1))) == 3
    assert is_faithful_tilde(t)


def test_four_map_table():
    maps = [FiniteMap(s) for s in [(1, 1), (2, 2), (2, 1), (1, 2)]]
    t = semigroup_closure(maps)
    assert [list(r) for r in t.table] == [[1, 1, 1, 1], [2, 2, 2, 2], [2, 1, 4, 3], [1, 2, 3, 4]]
    assert is_semigroup(maps)
    assert is_faithful_tilde(t)


@given(map_sets())
def test_closure_matches_brute_force(maps):
    t = semigroup_closure(maps)
    assert {s.images for s in t.elements} == oracles.brute_closure([m.images for m in maps])
    n = t.n
    for a in range(n):
        for b in range(n):
            assert compose_maps(t.elements[a], t.elements[b]) == t.elements[t.table[a][b] - 1]


@given(map_sets())
def test_tilde_is_a_left_action(maps):
    t = semigroup_closure(maps)
    for a in range(t.n):
        for b in range(t.n):
            assert t.tilde[a] @ t.tilde[b] == t.tilde[t.table[a][b] - 1]


@given(map_sets())
def test_closure_is_idempotent(maps):
    t = semigroup_closure(maps)
    assert semigroup_closure(t.elements).elements == t.elements
    assert is_semigroup(t.elements)


def test_unfaithful_tilde():
    # the two maps differ only at cell 3, which feeds nobody
    maps = [FiniteMap((1, 1, 1)), FiniteMap((1, 1, 2))]
    t = semigroup_closure(maps)
    assert [x.images for x in t.tilde] == [(1, 1), (1, 1)]
    assert not is_faithful_tilde(t)
    r = remove_slaves(t.elements)
    assert r.kept_cells == (1,)
    assert r.merged == ((1, 2),)


def test_remove_slaves_feed_forward_has_none():
    r = remove_slaves([FiniteMap((1, 2, 3)), FiniteMap((1, 1, 2))])
    assert r.rounds == 0 and r.kept_cells == (1, 2, 3)


def test_remove_slaves_cascade():
    # cell 3 feeds nobody; once it goes, cell 2 feeds nobody either
    maps = [FiniteMap((1, 1, 2)), FiniteMap((1, 1, 1))]
    r = remove_slaves(maps)
    assert r.kept_cells == (1,)
    assert r.rounds == 2
    assert r.maps == (FiniteMap((1,)),)
    assert r.merged == ((1, 2),)


def test_remove_slaves_relabels_between_rounds():
    # cell 1 goes in the first pass; the survivors are then labelled 1..2
    r = remove_slaves([FiniteMap((2, 2, 3))])
    assert r.kept_cells == (2, 3)
    assert r.maps == (FiniteMap((1, 2)),)
    assert r.rounds == 1


@given(map_sets())
def test_remove_slaves_leaves_every_cell_fed(maps):
    r = remove_slaves(maps)
    if r.degenerate:
        return
    hit = {x for m in r.maps for x in m.images}
    assert hit == set(range(1, len(r.kept_cells) + 1))
    for k, group in enumerate(r.merged):
        for j in group:
            # the restriction of the original map to kept cells, relabelled
            label = {c: i + 1 for i, c in enumerate(r.kept_cells)}
            assert tuple(label[maps[j - 1](c)] for c in r.kept_cells) == r.maps[k].images


@given(map_sets())
def test_slave_free_closures_are_faithful(maps):
    t = semigroup_closure(maps)
    r = remove_slaves(t.elements)
    if r.rounds == 0:
        assert is_faithful_tilde(t)
