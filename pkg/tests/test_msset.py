import itertools
import json

import pytest
from hypothesis import given, strategies as st

from theta2kit import msset as M


# ---------------------------------------------------------------------------
# degeneracy-word arithmetic


@st.composite
def refs(draw, max_gen_dim=3, max_extra=4):
    gdim = draw(st.integers(0, max_gen_dim))
    ref = ("g", ())
    dim = gdim
    for _ in range(draw(st.integers(0, max_extra))):
        ref = M.degenerate(ref, draw(st.integers(0, dim)))
        dim += 1
    return gdim, ref


@given(refs())
def test_degenerate_keeps_normal_form(data):
    _, ref = data
    assert M.normal_word(ref[1])


@given(refs(), st.data())
def test_degenerate_word_length_tracks_dimension(data, extra):
    gdim, ref = data
    dim = gdim + len(ref[1])
    i = extra.draw(st.integers(0, dim))
    out = M.degenerate(ref, i)
    assert len(out[1]) == len(ref[1]) + 1


@given(st.lists(st.integers(0, 5), min_size=0, max_size=6))
def test_degenerate_order_independence_on_swapped_pairs(indices):
    # s_i s_j = s_{j+1} s_i for i <= j, checked through the normalizer
    ref1 = ("g", ())
    dim = 6
    for i in indices:
        i = min(i, dim)
        ref1 = M.degenerate(ref1, i)
        dim += 1
    assert M.normal_word(ref1[1])


def test_face_of_degeneracy_cancels():
    X = M.standard_simplex(2)
    ref = ("012", ())
    for i in range(3):
        s = M.degenerate(ref, i)
        assert X.face(s, i) == ref
        assert X.face(s, i + 1) == ref


def test_valid_words_counts():
    # words raising dimension d to n are choices of n-d indices
    assert len(list(M.valid_words(1, 3))) == 3  # C(3,2)
    assert len(list(M.valid_words(0, 2))) == 1
    assert list(M.valid_words(2, 2)) == [()]
    assert list(M.valid_words(3, 2)) == []


# ---------------------------------------------------------------------------
# standard simplices


def test_flat_simplex_counts():
    X = M.standard_simplex(2)
    assert X.counts()[:3] == (3, 3, 1)
    assert X.marked_counts() == (0,) * (X.bound + 1)
    assert M.validate_msset(X).ok


def test_sharp_marks_everything_positive():
    X = M.standard_simplex(2, "sharp")
    assert X.marked_counts()[:3] == (0, 3, 1)


def test_boundary_and_horn():
    B = M.standard_simplex(2, "boundary")
    assert B.counts()[:3] == (3, 3, 0)
    H = M.standard_simplex(2, "horn", horn=1)
    assert H.counts()[:3] == (3, 2, 0)
    with pytest.raises(ValueError):
        M.standard_simplex(2, "horn", horn=5)


def test_edge_marked_and_eq3():
    T = M.standard_simplex(1, "edge_marked")
    assert T.marked == frozenset({"01"})
    E = M.standard_simplex(3, "eq3")
    assert set(E.marked) == {"02", "13", "012", "013", "023", "123", "0123"}
    with pytest.raises(ValueError):
        M.standard_simplex(2, "eq3")


def test_all_simplices_of_delta1():
    X = M.standard_simplex(1)
    # two doubly-degenerate vertices and two degeneracies of the edge
    assert len(X.all_simplices(2)) == 4


# ---------------------------------------------------------------------------
# products


def _shuffle_count(p, q, n):
    """Jointly injective monotone pairs [n] -> [p] x [q]: the
    nondegenerate n-simplices of the product of standard simplices."""
    count = 0
    for a in itertools.product(range(p + 1), repeat=n + 1):
        if any(a[i] > a[i + 1] for i in range(n)):
            continue
        for b in itertools.product(range(q + 1), repeat=n + 1):
            if any(b[i] > b[i + 1] for i in range(n)):
                continue
            if len(set(zip(a, b))) == n + 1:
                count += 1
    return count


def test_square_matches_shuffle_oracle():
    X = M.standard_simplex(1)
    P = M.product(X, X)
    assert P.counts()[:3] == (4, 5, 2)
    for n in range(3):
        assert len(P.gens_at(n)) == _shuffle_count(1, 1, n)
    assert M.validate_msset(P).ok


def test_prism_counts():
    P = M.product(M.standard_simplex(2), M.standard_simplex(1))
    expected = tuple(_shuffle_count(2, 1, n) for n in range(4))
    assert P.counts()[:4] == expected


def test_product_with_point_is_identity_shaped():
    X = M.standard_simplex(2, "sharp")
    P = M.product(X, M.standard_simplex(0))
    iso = M.find_iso(P, X)
    assert iso is not None and M.is_iso(iso)


def test_product_marking_is_componentwise():
    T = M.standard_simplex(1, "edge_marked")
    S = M.standard_simplex(1, "sharp")
    P = M.product(T, S)
    marked_edges = [g for g in P.gens_at(1) if g in P.marked]
    # every nondegenerate edge projects to a marked edge in both factors
    # here (the marked edge or a degenerate one), so all five are marked
    assert len(marked_edges) == 5
    for g in P.gens_at(1):
        rx, ry = M._decode_pair(g)
        assert (g in P.marked) == (T.is_marked(rx) and S.is_marked(ry))


def test_product_map_tracks_projections():
    X = M.standard_simplex(1)
    f = M.MSSetMap(X, X, {"0": ("0", ()), "1": ("0", ()), "01": ("0", (0,))})
    pf = M.product_map(f, M.identity_map(X))
    assert M.validate_map(pf).ok


# ---------------------------------------------------------------------------
# colimits


def test_coproduct_of_points():
    pt = M.standard_simplex(0)
    P, legs = M.colimit([pt, pt], [])
    assert P.counts()[0] == 2
    assert all(M.validate_map(l).ok for l in legs)


def test_circle_pushout():
    D1 = M.standard_simplex(1)
    B = M.standard_simplex(1, "boundary")
    inc = M.MSSetMap(B, D1, {"0": ("0", ()), "1": ("1", ())})
    C, l1, l2 = M.pushout(inc, inc)
    assert C.counts()[:2] == (2, 2)
    assert M.validate_msset(C).ok


def test_colimit_quotient_collapses_edge():
    D1 = M.standard_simplex(1)
    pt = M.standard_simplex(0)
    collapse = M.MSSetMap(D1, pt, {"0": ("0", ()), "1": ("0", ()), "01": ("0", (0,))})
    Q, legs = M.colimit([D1, pt], [(0, 1, collapse)])
    assert Q.counts()[:2] == (1, 0)


def test_colimit_marking_rule_union_of_preimages():
    # glue a flat edge onto a marked edge: the class stays marked
    D1 = M.standard_simplex(1)
    T = M.standard_simplex(1, "edge_marked")
    ident = M.MSSetMap(D1, T, {"0": ("0", ()), "1": ("1", ()), "01": ("01", ())})
    Q, _ = M.colimit([D1, T], [(0, 1, ident)])
    assert Q.marked_counts()[1] == 1


def test_colimit_rejects_bogus_arrow():
    D1 = M.standard_simplex(1)
    pt = M.standard_simplex(0)
    bad = M.MSSetMap(pt, D1, {"0": ("nope", ())})
    with pytest.raises(ValueError):
        M.colimit([pt, D1], [(0, 1, bad)])


# ---------------------------------------------------------------------------
# maps


def test_enumerate_maps_interval_oracle():
    D1 = M.standard_simplex(1)
    maps = M.enumerate_maps(D1, D1)
    assert len(maps) == 3  # monotone maps [1] -> [1]
    assert all(M.validate_map(f).ok for f in maps)


def test_enumerate_maps_respects_marking():
    T = M.standard_simplex(1, "edge_marked")
    D1 = M.standard_simplex(1)
    maps = M.enumerate_maps(T, D1)
    assert len(maps) == 2  # marked edge must collapse
    assert all(f.apply(("01", ()))[1] for f in maps)


def test_enumerate_maps_from_point():
    X = M.standard_simplex(2, "boundary")
    assert len(M.enumerate_maps(M.standard_simplex(0), X)) == 3


def test_mono_iso_checks():
    D2 = M.standard_simplex(2)
    B = M.standard_simplex(2, "boundary")
    inc = M.MSSetMap(
        B, D2, {g: (g, ()) for n in range(2) for g in B.gens_at(n)}
    )
    assert M.is_mono(inc)
    assert not M.is_iso(inc)
    assert M.is_iso(M.identity_map(D2))


def test_find_iso_detects_marking_difference():
    flat = M.standard_simplex(1)
    marked = M.standard_simplex(1, "edge_marked")
    assert M.find_iso(flat, marked) is None


def test_map_by_vertices_unique_extension():
    D2 = M.standard_simplex(2)
    f = M.map_by_vertices(D2, D2, {"0": "0", "1": "1", "2": "2"})
    assert f.assignment["012"] == ("012", ())
    g = M.map_by_vertices(D2, D2, {"0": "0", "1": "0", "2": "0"})
    assert g.assignment["012"][0] == "0"


def test_validate_map_reports_dropped_marking():
    T = M.standard_simplex(1, "edge_marked")
    D1 = M.standard_simplex(1)
    f = M.MSSetMap(T, D1, {"0": ("0", ()), "1": ("1", ()), "01": ("01", ())})
    rep = M.validate_map(f)
    assert not rep.ok and any("marking" in v for v in rep.violations)


def test_validate_msset_negative_control():
    X = M.standard_simplex(2)
    broken = M.MarkedSSet(
        X.bound,
        X.gens,
        {**X.faces, "012": (("01", ()), ("01", ()), ("01", ()))},
        X.marked,
    )
    assert not M.validate_msset(broken).ok


# ---------------------------------------------------------------------------
# serialization


def test_json_round_trip():
    for X in [
        M.standard_simplex(2, "sharp"),
        M.standard_simplex(3, "eq3"),
        M.product(M.standard_simplex(1), M.standard_simplex(1)),
    ]:
        data = json.loads(M.msset_dumps(X))
        Y = M.msset_from_json(data)
        assert Y.gens == X.gens
        assert Y.faces == X.faces
        assert Y.marked == X.marked
        assert Y.bound == X.bound


def test_json_rejects_unknown_schema():
    data = M.msset_to_json(M.standard_simplex(0))
    data["schema"] = "other/9"
    with pytest.raises(ValueError):
        M.msset_from_json(data)
