"""Nerves of finite 2-categories as marked simplicial sets.

An n-simplex consists of objects x_0..x_n, 1-cells f_ij: x_i -> x_j for
i < j, and 2-cells phi_ijk: f_ik => f_jk . f_ij subject to the cocycle
relation on every quadruple of indices.  The three marking conventions
(none / identity 2-simplices / invertible 2-simplices) share the same
underlying simplicial set.
"""

from __future__ import annotations

import functools
import itertools

from .msset import DEFAULT_BOUND, MarkedSSet, MSSetMap, _Guard, from_raw
from .twocat import Fin2Category, TwoFunctor

# raw simplex: (verts, edges, tris) with edges indexed by pairs i<j and
# tris by triples i<j<k, both in lexicographic order


@functools.lru_cache(maxsize=None)
def _pairs(n):
    return [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]


@functools.lru_cache(maxsize=None)
def _triples(n):
    return [
        (i, j, k)
        for i in range(n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
    ]


@functools.lru_cache(maxsize=None)
def _pidx(n):
    return {p: t for t, p in enumerate(_pairs(n))}


@functools.lru_cache(maxsize=None)
def _tidx(n):
    return {p: t for t, p in enumerate(_triples(n))}


class _RawOps:
    """Simplicial operators on raw nerve simplices of a fixed 2-category."""

    def __init__(self, D: Fin2Category):
        self.D = D

    def _identity_two(self, x, y, f):
        return self.D.hom_at(x, y).identity[f]

    def face(self, raw, n, i):
        verts, edges, tris = raw
        keep = [a for a in range(n + 1) if a != i]
        nverts = tuple(verts[a] for a in keep)
        pidx = _pidx(n)
        tidx = _tidx(n)
        nedges = tuple(
            edges[pidx[(keep[a], keep[b])]] for a, b in _pairs(n - 1)
        )
        ntris = tuple(
            tris[tidx[(keep[a], keep[b], keep[c])]]
            for a, b, c in _triples(n - 1)
        )
        return (nverts, nedges, ntris)

    def degenerate(self, raw, n, p):
        verts, edges, tris = raw
        sig = tuple(a if a <= p else a - 1 for a in range(n + 2))
        nverts = tuple(verts[s] for s in sig)
        pidx = _pidx(n)
        tidx = _tidx(n)
        nedges = []
        for a, b in _pairs(n + 1):
            sa, sb = sig[a], sig[b]
            if sa == sb:
                nedges.append(self.D.unit1[verts[sa]])
            else:
                nedges.append(edges[pidx[(sa, sb)]])
        ntris = []
        for a, b, c in _triples(n + 1):
            sa, sb, sc = sig[a], sig[b], sig[c]
            if sa < sb < sc:
                ntris.append(tris[tidx[(sa, sb, sc)]])
            else:
                # a collapsed edge: the triangle is the identity 2-cell
                # on its long edge
                if sa == sb:
                    f = edges[pidx[(sb, sc)]] if sb != sc else self.D.unit1[verts[sa]]
                else:
                    f = edges[pidx[(sa, sb)]]
                ntris.append(self._identity_two(nverts[a], nverts[c], f))
        return (nverts, tuple(nedges), tuple(ntris))


def _hom2_index(D, x, y, cache):
    idx = cache.get((x, y))
    if idx is None:
        H = D.hom_at(x, y)
        idx = {}
        for m, (src, tgt) in H.morphisms.items():
            idx.setdefault((src, tgt), []).append(m)
        cache[(x, y)] = idx
    return idx


def _extend(D: Fin2Category, base, n, guard, hom2_cache):
    """All n-simplices extending the (n-1)-simplex base by a last vertex.

    Edges f_i: x_i -> x_n are chosen for i descending from n-1, and the
    triangles phi_{ijn} over an edge are chosen (with cocycle pruning)
    as soon as the edge is fixed, so dead branches die early.
    """
    verts, edges, tris = base
    out = []
    pidx = _pidx(n - 1)
    tidx = _tidx(n - 1)

    for xn in sorted(D.objects):
        if any(D.hom_at(verts[i], xn) is None for i in range(n)):
            continue

        def emit(new_edges, new_tris):
            all_edges = tuple(
                edges[pidx[(i, j)]] if j < n else new_edges[i]
                for i, j in _pairs(n)
            )
            all_tris = tuple(
                tris[tidx[(i, j, k)]] if k < n else new_tris[(i, j)]
                for i, j, k in _triples(n)
            )
            out.append((tuple(verts) + (xn,), all_edges, all_tris))

        def pick_tris(i, j, new_edges, new_tris):
            # triangles over vertex i, with third vertex j ascending
            if j == n:
                if i == 0:
                    emit(new_edges, new_tris)
                else:
                    pick_edge(i - 1, new_edges, new_tris)
                return
            fij = edges[pidx[(i, j)]]
            tgt = D.hc1(verts[i], verts[j], xn, fij, new_edges[j])
            idx = _hom2_index(D, verts[i], xn, hom2_cache)
            for phi in idx.get((new_edges[i], tgt), ()):
                guard.step()
                new_tris[(i, j)] = phi
                if _relations_ok(D, verts, xn, edges, tris, pidx, tidx,
                                 new_edges, new_tris, (i, j), n):
                    pick_tris(i, j + 1, new_edges, new_tris)
                del new_tris[(i, j)]

        def pick_edge(i, new_edges, new_tris):
            for f in D.hom_at(verts[i], xn).objects:
                guard.step()
                new_edges[i] = f
                pick_tris(i, i + 1, new_edges, new_tris)
                del new_edges[i]

        if n == 1:
            for f in D.hom_at(verts[0], xn).objects:
                guard.step()
                emit({0: f}, {})
        else:
            pick_edge(n - 1, {}, {})
    return out


def _relations_ok(D, verts, xn, edges, tris, pidx, tidx, new_edges, new_tris,
                  last, n):
    """Check cocycle relations on quadruples (i,j,k,n) made complete by last."""
    for i, j, k in _triples(n - 1):
        needed = [(i, j), (j, k), (i, k)]
        if last not in needed or any(p not in new_tris for p in needed):
            continue
        xi, xj, xk = verts[i], verts[j], verts[k]
        fij = edges[pidx[(i, j)]]
        fjk = edges[pidx[(j, k)]]
        fkn = new_edges[k]
        H_in = D.hom_at(xi, xn)
        Hij = D.hom_at(xi, xj)
        Hkn = D.hom_at(xk, xn)
        id_fij = Hij.identity[fij]
        id_fkn = Hkn.identity[fkn]
        lhs = H_in.then(
            new_tris[(i, j)],
            D.hc2(xi, xj, xn, id_fij, new_tris[(j, k)]),
        )
        rhs = H_in.then(
            new_tris[(i, k)],
            D.hc2(xi, xk, xn, tris[tidx[(i, j, k)]], id_fkn),
        )
        if lhs != rhs:
            return False
    return True


_nerve_cache = {}


def _raw_nerve(D: Fin2Category, bound: int, limit=5_000_000):
    key = (D.signature(), bound)
    if key in _nerve_cache:
        return _nerve_cache[key]
    guard = _Guard(limit)
    ops = _RawOps(D)
    hom2_cache = {}
    by_dim = {0: [((x,), (), ()) for x in sorted(D.objects)]}
    for n in range(1, bound + 1):
        layer = []
        for base in by_dim[n - 1]:
            layer.extend(_extend(D, base, n, guard, hom2_cache))
        by_dim[n] = layer
    _nerve_cache[key] = (by_dim, ops)
    return by_dim, ops


def _key_fn(raw, n):
    verts, edges, tris = raw
    return ";".join([",".join(verts), ",".join(edges), ",".join(tris)])


def _nerve(D: Fin2Category, marked_fn, bound, limit):
    by_dim, ops = _raw_nerve(D, bound, limit)
    return from_raw(bound, by_dim, ops.face, ops.degenerate, marked_fn, _key_fn)


def _phi_of_2simplex(raw):
    return raw[2][0]


def duskin_nerve(D: Fin2Category, bound=DEFAULT_BOUND, limit=5_000_000):
    """The nerve with no marking beyond degenerate simplices."""
    return _nerve(D, lambda raw, n: False, bound, limit)[0]


def _rs_marked(D):
    def marked_fn(raw, n):
        if n >= 3:
            return True
        if n == 2:
            verts = raw[0]
            H = D.hom_at(verts[0], verts[2])
            return H.is_identity(_phi_of_2simplex(raw))
        return False

    return marked_fn


def _scaled_marked(D):
    def marked_fn(raw, n):
        if n >= 3:
            return True
        if n == 2:
            verts = raw[0]
            H = D.hom_at(verts[0], verts[2])
            return H.is_invertible(_phi_of_2simplex(raw))
        return False

    return marked_fn


def rs_nerve(D: Fin2Category, bound=DEFAULT_BOUND, limit=5_000_000):
    """Nerve marked at 2-simplices whose 2-cell is an identity."""
    return _nerve(D, _rs_marked(D), bound, limit)[0]


def rs_nerve_with_index(D: Fin2Category, bound=DEFAULT_BOUND, limit=5_000_000):
    """As rs_nerve, also returning the raw-simplex -> reference index."""
    return _nerve(D, _rs_marked(D), bound, limit)


def scaled_nerve(D: Fin2Category, bound=DEFAULT_BOUND, limit=5_000_000):
    """Nerve marked at 2-simplices whose 2-cell is invertible."""
    return _nerve(D, _scaled_marked(D), bound, limit)[0]


def _apply_raw(F: TwoFunctor, raw):
    verts, edges, tris = raw
    n = len(verts) - 1
    nverts = tuple(F.obj(x) for x in verts)
    nedges = tuple(
        F.one(verts[i], verts[j], edges[t]) for t, (i, j) in enumerate(_pairs(n))
    )
    ntris = tuple(
        F.two(verts[i], verts[k], tris[t])
        for t, (i, j, k) in enumerate(_triples(n))
    )
    return (nverts, nedges, ntris)


def nerve_map(F: TwoFunctor, variant="rs", bound=DEFAULT_BOUND, limit=5_000_000):
    """The simplicial map induced on nerves by a 2-functor."""
    builders = {"rs": _rs_marked, "scaled": _scaled_marked,
                "duskin": lambda D: (lambda raw, n: False)}
    mk = builders[variant]
    X, _ = _nerve(F.source, mk(F.source), bound, limit)
    Y, yindex = _nerve(F.target, mk(F.target), bound, limit)
    xraws, _ = _raw_nerve(F.source, bound, limit)
    raw_of = {}
    _, xindex = _nerve(F.source, mk(F.source), bound, limit)
    for n, raws in xraws.items():
        for raw in raws:
            ref = xindex[raw]
            if not ref[1]:
                raw_of.setdefault(ref[0], raw)
    assignment = {
        g: yindex[_apply_raw(F, raw)] for g, raw in raw_of.items()
    }
    return MSSetMap(X, Y, assignment)


# ---------------------------------------------------------------------------
# coskeletality


def compatible_boundaries(X: MarkedSSet, n: int, limit=5_000_000):
    """All (n+1)-tuples of (n-1)-simplices matching like a boundary.

    The tuples satisfy d_i sigma_j = d_{j-1} sigma_i for i < j; every
    actual boundary of an n-simplex appears among them.
    """
    guard = _Guard(limit)
    cells = X.all_simplices(n - 1)
    faces = {s: tuple(X.face(s, i) for i in range(n)) for s in cells}
    # the first j faces of sigma_j are forced: d_i sigma_j = d_{j-1}
    # sigma_i, so index the cells by face prefixes for exact pool lookup
    by_prefix = [{} for _ in range(n + 1)]
    for s in cells:
        fs = faces[s]
        for k in range(n + 1):
            by_prefix[k].setdefault(fs[:k], []).append(s)
    results = []
    chosen = []

    def extend(j):
        if j == n + 1:
            results.append(tuple(chosen))
            return
        key = tuple(faces[chosen[i]][j - 1] for i in range(min(j, n)))
        for s in by_prefix[len(key)].get(key, ()):
            guard.step()
            chosen.append(s)
            extend(j + 1)
            chosen.pop()

    extend(0)
    return results


def filler_counts(X: MarkedSSet, n: int, limit=5_000_000):
    """For each compatible boundary in dimension n, its number of fillers."""
    index = {}
    for x in X.all_simplices(n):
        key = tuple(X.face(x, i) for i in range(n + 1))
        index[key] = index.get(key, 0) + 1
    return [
        (b, index.get(b, 0)) for b in compatible_boundaries(X, n, limit)
    ]
