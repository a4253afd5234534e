import itertools
import math

from theta2kit import msset as M
from theta2kit import nerves as N
from theta2kit import twocat as T


def _ordinal_2cat(m):
    return T.as_two_category(T.ordinal(m))


# ---------------------------------------------------------------------------
# classical degeneration


def test_nerve_of_ordinal_matches_classical_nerve():
    for m in range(4):
        X = N.rs_nerve(_ordinal_2cat(m), bound=4)
        assert M.validate_msset(X).ok
        for n in range(5):
            assert len(X.all_simplices(n)) == math.comb(m + n + 1, n + 1)
        # nondegenerate n-simplices of [m] are strictly increasing chains
        for n in range(5):
            assert len(X.gens_at(n)) == math.comb(m + 1, n + 1)


def test_nerve_of_ordinal_marking():
    X = N.rs_nerve(_ordinal_2cat(3), bound=4)
    assert X.marked_counts()[1] == 0
    # all 2-cells of a 1-category are identities, so every triangle is marked
    assert X.marked_counts()[2] == len(X.gens_at(2))
    assert X.marked_counts()[3] == len(X.gens_at(3))


def test_theta_200_is_triangle():
    X = N.duskin_nerve(
        T.theta2_object(T.Theta2Shape(2, (0, 0))), bound=4
    )
    D2 = M.standard_simplex(2, bound=4)
    assert M.find_iso(X, D2) is not None


def test_rs_nerve_of_point():
    X = N.rs_nerve(T.cell(0), bound=3)
    assert M.find_iso(X, M.standard_simplex(0, bound=3)) is not None


# ---------------------------------------------------------------------------
# the free 2-cell


def test_c2_nerve_generators():
    X = N.duskin_nerve(T.cell(2), bound=5)
    assert X.counts() == (2, 2, 2, 2, 2, 2)
    assert M.validate_msset(X).ok


def test_c2_rs_marking():
    X = N.rs_nerve(T.cell(2), bound=4)
    # both nondegenerate triangles carry the noninvertible 2-cell
    assert X.marked_counts()[:3] == (0, 0, 0)
    assert X.marked_counts()[3] == len(X.gens_at(3))


def test_c2_scaled_marking_matches_rs():
    # in the poset [1] nothing nonidentity is invertible
    X = N.scaled_nerve(T.cell(2), bound=3)
    assert X.marked_counts()[2] == 0


def test_scaled_nerve_of_suspended_iso_marks_triangles():
    D = T.suspend_category(T.free_iso())
    rs = N.rs_nerve(D, bound=3)
    sc = N.scaled_nerve(D, bound=3)
    assert rs.gens == sc.gens
    # the triangles witnessing the isomorphism are scaled-marked only
    assert sc.marked_counts()[2] > rs.marked_counts()[2]


def test_scaled_nerve_of_1_category_marks_all_triangles():
    X = N.scaled_nerve(_ordinal_2cat(2), bound=3)
    assert X.marked_counts()[2] == len(X.gens_at(2))


def test_free_iso_nerve_two_generators_per_dimension():
    X = N.duskin_nerve(T.as_two_category(T.free_iso()), bound=4)
    assert X.counts() == (2, 2, 2, 2, 2)


# ---------------------------------------------------------------------------
# suspension cross-oracle


def test_suspended_point_nerve_is_interval():
    # the nerve of the suspension of [0] is an interval: the shift-by-one
    # picture is exact here, and only here — for larger ordinals the
    # nerve of the suspension strictly exceeds the suspended nerve
    X = N.duskin_nerve(T.suspend_category(T.ordinal(0)), bound=4)
    assert M.find_iso(X, M.standard_simplex(1, bound=4)) is not None


def test_suspended_category_nerve_contains_shifted_nerve():
    for m in range(4):
        D = T.suspend_category(T.ordinal(m))
        X = N.duskin_nerve(D, bound=4)
        C = N.duskin_nerve(_ordinal_2cat(m), bound=3)
        for n in range(1, 5):
            assert len(X.gens_at(n)) >= len(C.gens_at(n - 1)), (m, n)


# ---------------------------------------------------------------------------
# functoriality


def test_nerve_map_identity():
    D = T.cell(2)
    f = N.nerve_map(T.identity_two_functor(D), bound=3)
    assert f.assignment == M.identity_map(f.source).assignment


def test_nerve_map_edge_inclusion():
    fs = T.enumerate_two_functors(T.cell(1), T.cell(2))
    picks = [F for F in fs if F.obj("0") == "0" and F.obj("1") == "1"]
    assert len(picks) == 2
    for F in picks:
        f = N.nerve_map(F, bound=3)
        assert M.validate_map(f).ok
        assert M.is_mono(f)


def test_nerve_map_collapse_marks_degenerates():
    fs = T.enumerate_two_functors(T.cell(2), T.cell(1))
    collapse = [
        F for F in fs if F.obj("0") == "0" and F.obj("1") == "1"
    ]
    assert len(collapse) == 1
    f = N.nerve_map(collapse[0], bound=3)
    assert M.validate_map(f).ok
    for g in f.source.gens_at(2):
        assert f.assignment[g][1]  # both alpha-triangles collapse


def test_nerve_map_composes():
    F = T.enumerate_two_functors(T.cell(1), T.cell(2))[0]
    G = T.enumerate_two_functors(T.cell(2), T.cell(0))[0]
    lhs = N.nerve_map(F.compose(G), bound=3)
    rhs = N.nerve_map(F, bound=3).compose(N.nerve_map(G, bound=3))
    assert lhs.assignment == rhs.assignment


# ---------------------------------------------------------------------------
# coskeletality


def test_duskin_nerve_is_3_coskeletal_on_grid():
    shapes = [T.Theta2Shape(0, ())]
    for m in (1, 2):
        for ks in itertools.product(range(3), repeat=m):
            shapes.append(T.Theta2Shape(m, ks))
    for shape in shapes:
        X = N.duskin_nerve(T.theta2_object(shape), bound=5)
        for n in (4, 5):
            for boundary, count in N.filler_counts(X, n):
                assert count == 1, (shape, n, boundary)


def test_classical_nerve_fills_from_dimension_two():
    # the nerve of a 1-category is already 2-coskeletal
    X = N.rs_nerve(_ordinal_2cat(3), bound=4)
    for n in (3, 4):
        assert all(c == 1 for _, c in N.filler_counts(X, n))
