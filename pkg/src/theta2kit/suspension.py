"""Marked suspension and the nerve comparison map.

Sigma X has two vertices bot/top and one nondegenerate (n+1)-generator
per nondegenerate n-generator of X.  The embedded copy of an n-simplex x
sits with vertex 0 at bot and all later vertices at top, and its faces
run through x in reverse: d_i Sigma(x) = Sigma(d_{n+1-i} x) for i >= 1,
while d_0 collapses to a degenerate top simplex.
"""

from __future__ import annotations

from .msset import DEFAULT_BOUND, MarkedSSet, MSSetMap, degenerate, rebound
from .twocat import FinCategory, as_two_category, suspend_category
from .nerves import _pairs, _triples, rs_nerve_with_index


def cone_ref(dim_fn, ref):
    """Image of a reference under the suspension embedding.

    Pushes degeneracies through the reversal: the simplex s_j(y) maps to
    s_{dim(y)+1-j} applied to the image of y.
    """
    g, w = ref
    if not w:
        return ("^" + g, ())
    j, rest = w[0], w[1:]
    inner = (g, rest)
    d = dim_fn(inner)
    return degenerate(cone_ref(dim_fn, inner), d + 1 - j)


def suspend_marked(X: MarkedSSet) -> MarkedSSet:
    top_dim = max((n for n in X.gens if X.gens_at(n)), default=-1)
    if top_dim + 1 > X.bound:
        raise ValueError(
            f"suspension of a {top_dim}-dimensional set exceeds bound {X.bound}"
        )
    gens = {0: ("bot", "top")}
    faces = {}
    marked = set()
    for n in range(X.bound):
        layer = tuple(sorted("^" + g for g in X.gens_at(n)))
        if layer:
            gens[n + 1] = layer
    for n in range(1, X.bound + 1):
        gens.setdefault(n, ())
    for n in sorted(X.gens):
        for g in X.gens_at(n):
            m = n + 1
            if m == 1:
                faces["^" + g] = (("top", ()), ("bot", ()))
            else:
                fs = [("top", tuple(range(m - 2, -1, -1)))]
                for i in range(1, m + 1):
                    fs.append(cone_ref(X.dim_of, X.face((g, ()), m - i)))
                faces["^" + g] = tuple(fs)
            if g in X.marked:
                marked.add("^" + g)
    return MarkedSSet(X.bound, gens, faces, frozenset(marked))


def suspend_map(f: MSSetMap) -> MSSetMap:
    SX = suspend_marked(f.source)
    SY = suspend_marked(f.target)
    assignment = {"bot": ("bot", ()), "top": ("top", ())}
    for g, ref in f.assignment.items():
        assignment["^" + g] = cone_ref(f.target.dim_of, ref)
    return MSSetMap(SX, SY, assignment)


def suspension_comparison(C: FinCategory, bound=None):
    """The canonical map from the suspended nerve of C to the nerve of
    the suspension 2-category of C."""
    if not C.objects:
        raise ValueError("the comparison needs a nonempty category")
    target_bound = bound if bound is not None else DEFAULT_BOUND
    NC, cindex = rs_nerve_with_index(as_two_category(C), target_bound - 1)
    NC = rebound(NC, target_bound)
    SC = suspend_category(C)
    N, nindex = rs_nerve_with_index(SC, target_bound)
    SNC = suspend_marked(NC)

    # recover the raw nerve simplex behind each generator of NC
    raw_of = {}
    for raw, ref in cindex.items():
        if not ref[1]:
            raw_of.setdefault(ref[0], raw)

    assignment = {
        "bot": nindex[(("bot",), (), ())],
        "top": nindex[(("top",), (), ())],
    }
    for g, raw in raw_of.items():
        verts, edges, tris = raw
        n = len(verts) - 1
        m = n + 1
        pidx = {p: t for t, p in enumerate(_pairs(n))}
        nverts = ("bot",) + ("top",) * m
        nedges = []
        for i, j in _pairs(m):
            if i == 0:
                nedges.append(verts[m - j])
            else:
                nedges.append("*")
        ntris = []
        for i, j, k in _triples(m):
            if i == 0:
                # the 2-cell f_{0k} => f_{0j} is the edge of the original
                # simplex between the reversed positions m-k < m-j
                ntris.append(edges[pidx[(m - k, m - j)]])
            else:
                ntris.append("id")
        assignment["^" + g] = nindex[(nverts, tuple(nedges), tuple(ntris))]
    return MSSetMap(SNC, N, assignment)
