"""Finitely generated simplicial sets with marking.

Objects are stored by their nondegenerate generators; every other simplex
is a degeneracy word (in normal form) applied to a generator.  All values
are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

DEFAULT_BOUND = 5

Word = tuple  # strictly decreasing degeneracy indices
Ref = tuple  # (generator id, Word)


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed its search-space guard."""


def normal_word(word) -> bool:
    return all(word[t] > word[t + 1] for t in range(len(word) - 1))


def degenerate(ref: Ref, i: int) -> Ref:
    """Apply the degeneracy s_i to a normal-form reference.

    Uses s_i s_j = s_{j+1} s_i (i <= j) to reinsert the new index while
    keeping the word strictly decreasing.
    """
    g, w = ref
    out = []
    idx = 0
    k = i
    while idx < len(w) and k <= w[idx]:
        out.append(w[idx] + 1)
        idx += 1
    out.append(k)
    out.extend(w[idx:])
    return (g, tuple(out))


def valid_words(gen_dim: int, n: int):
    """All normal degeneracy words raising dimension gen_dim to n."""
    p = n - gen_dim
    if p < 0:
        return
    for combo in itertools.combinations(range(n - 1, -1, -1), p):
        yield combo


@dataclass(frozen=True)
class MarkedSSet:
    """A marked simplicial set truncated at a dimension bound.

    gens maps each dimension to a sorted tuple of nondegenerate generator
    ids; faces maps each generator of dimension n >= 1 to its n+1 face
    references; marked holds the marked nondegenerate generators
    (degenerate simplices are marked by convention).
    """

    bound: int
    gens: dict
    faces: dict
    marked: frozenset

    def __post_init__(self):
        dims = {}
        for n, ids in self.gens.items():
            for g in ids:
                dims[g] = n
        object.__setattr__(self, "_dim", dims)

    def dim_of_gen(self, g) -> int:
        return self._dim[g]

    def dim_of(self, ref: Ref) -> int:
        return self._dim[ref[0]] + len(ref[1])

    def gens_at(self, n) -> tuple:
        return self.gens.get(n, ())

    def all_simplices(self, n):
        """All simplices (as refs) in dimension n, degenerate ones included."""
        out = []
        for k in range(n + 1):
            for g in self.gens_at(k):
                for w in valid_words(k, n):
                    out.append((g, w))
        return out

    def face(self, ref: Ref, i: int) -> Ref:
        g, w = ref
        if not w:
            return self.faces[g][i]
        j = w[0]
        sub = (g, w[1:])
        if i == j or i == j + 1:
            return sub
        if i < j:
            return degenerate(self.face(sub, i), j - 1)
        return degenerate(self.face(sub, i - 1), j)

    def is_marked(self, ref: Ref) -> bool:
        g, w = ref
        return bool(w) or g in self.marked

    def counts(self) -> tuple:
        return tuple(len(self.gens_at(n)) for n in range(self.bound + 1))

    def marked_counts(self) -> tuple:
        return tuple(
            sum(1 for g in self.gens_at(n) if g in self.marked)
            for n in range(self.bound + 1)
        )

    def vertices(self) -> tuple:
        return self.gens_at(0)


def validate_msset(X: MarkedSSet):
    """Exhaustive invariant check; returns a Report with witnesses."""
    problems = []
    for n, ids in X.gens.items():
        if n < 0 or n > X.bound:
            problems.append(f"generator dimension {n} outside bound")
        for g in ids:
            if n == 0:
                continue
            fs = X.faces.get(g)
            if fs is None or len(fs) != n + 1:
                problems.append(f"{g}: expected {n + 1} faces")
                continue
            for i, (h, w) in enumerate(fs):
                if h not in X._dim:
                    problems.append(f"{g}: face {i} targets unknown generator {h}")
                elif not normal_word(w):
                    problems.append(f"{g}: face {i} word {w} not normal")
                elif X._dim[h] + len(w) != n - 1:
                    problems.append(f"{g}: face {i} has wrong dimension")
    for g in X.marked:
        if g not in X._dim:
            problems.append(f"marked id {g} is not a generator")
        elif X._dim[g] == 0:
            problems.append(f"marked id {g} has dimension 0")
    if not problems:
        for n, ids in X.gens.items():
            if n < 2:
                continue
            for g in ids:
                ref = (g, ())
                for j in range(n + 1):
                    for i in range(j):
                        lhs = X.face(X.face(ref, j), i)
                        rhs = X.face(X.face(ref, i), j - 1)
                        if lhs != rhs:
                            problems.append(
                                f"simplicial identity fails: d_{i} d_{j} {g}"
                            )
    return Report("msset", problems)


@dataclass(frozen=True)
class Report:
    subject: str
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return f"{self.subject}: ok"
        lines = "\n  ".join(self.violations)
        return f"{self.subject}: {len(self.violations)} violation(s)\n  {lines}"


@dataclass(frozen=True)
class MSSetMap:
    """Marking-preserving simplicial map, given on nondegenerate generators."""

    source: MarkedSSet
    target: MarkedSSet
    assignment: dict

    def apply(self, ref: Ref) -> Ref:
        g, w = ref
        out = self.assignment[g]
        for j in reversed(w):
            out = degenerate(out, j)
        return out

    def compose(self, other: "MSSetMap") -> "MSSetMap":
        """self followed by other."""
        assignment = {g: other.apply(r) for g, r in self.assignment.items()}
        return MSSetMap(self.source, other.target, assignment)

    def __eq__(self, other):
        return (
            isinstance(other, MSSetMap)
            and self.assignment == other.assignment
            and self.source.gens == other.source.gens
            and self.target.gens == other.target.gens
        )


def identity_map(X: MarkedSSet) -> MSSetMap:
    return MSSetMap(X, X, {g: (g, ()) for ids in X.gens.values() for g in ids})


def validate_map(f: MSSetMap):
    problems = []
    X, Y = f.source, f.target
    for n in sorted(X.gens):
        for g in X.gens_at(n):
            if g not in f.assignment:
                problems.append(f"{g}: no assignment")
                continue
            img = f.assignment[g]
            if img[0] not in Y._dim:
                problems.append(f"{g}: image targets unknown generator {img[0]}")
                continue
            if Y.dim_of(img) != n:
                problems.append(f"{g}: image has wrong dimension")
                continue
            for i in range(n + 1) if n >= 1 else ():
                if f.apply(X.face((g, ()), i)) != Y.face(img, i):
                    problems.append(f"{g}: does not commute with d_{i}")
            if g in X.marked and not Y.is_marked(img):
                problems.append(f"{g}: marking dropped")
    return Report("map", problems)


def from_raw(bound, by_dim, face_fn, deg_fn, marked_fn, key_fn):
    """Build a MarkedSSet from a raw dimensionwise presentation.

    by_dim lists every simplex (degenerate ones included) per dimension;
    face_fn/deg_fn are the raw simplicial operators.  Returns the marked
    simplicial set together with the raw -> reference index.
    """
    normal = {}
    gens = {}
    faces = {}
    marked = set()
    seen_ids = set()
    for n in range(bound + 1):
        gens[n] = []
        for x in by_dim.get(n, ()):
            if x in normal:
                continue
            hit = None
            for i in range(n):
                y = face_fn(x, n, i + 1)
                if deg_fn(y, n - 1, i) == x:
                    hit = (i, y)
                    break
            if hit is not None:
                i, y = hit
                normal[x] = degenerate(normal[y], i)
            else:
                gid = key_fn(x, n)
                if gid in seen_ids:
                    raise ValueError(f"duplicate generator id {gid}")
                seen_ids.add(gid)
                gens[n].append(gid)
                if n >= 1:
                    faces[gid] = tuple(
                        normal[face_fn(x, n, i)] for i in range(n + 1)
                    )
                    if marked_fn(x, n):
                        marked.add(gid)
                normal[x] = (gid, ())
        gens[n] = tuple(sorted(gens[n]))
    X = MarkedSSet(bound, gens, faces, frozenset(marked))
    return X, normal


# ---------------------------------------------------------------------------
# standard simplices


def _simplex_key(verts, n):
    return "".join(str(v) for v in verts)


def standard_simplex(ell, variant="flat", horn=None, bound=None):
    """Delta[ell] and friends: flat, sharp, boundary, horn(k), edge_marked, eq3."""
    if ell < 0:
        raise ValueError("dimension must be nonnegative")
    if bound is None:
        bound = max(DEFAULT_BOUND, ell)
    if variant == "horn":
        if horn is None or not 0 <= horn <= ell:
            raise ValueError(f"horn index must satisfy 0 <= k <= {ell}")
    elif horn is not None:
        raise ValueError("horn index only valid for the horn variant")
    if variant == "edge_marked" and ell != 1:
        raise ValueError("edge_marked requires ell = 1")
    if variant == "eq3" and ell != 3:
        raise ValueError("eq3 requires ell = 3")
    if variant not in ("flat", "sharp", "boundary", "horn", "edge_marked", "eq3"):
        raise ValueError(f"unknown variant {variant!r}")

    cells = []
    for n in range(min(ell, bound) + 1):
        for verts in itertools.combinations(range(ell + 1), n + 1):
            if variant == "boundary" and len(verts) == ell + 1:
                continue
            if variant == "horn":
                missing = set(range(ell + 1)) - set(verts)
                if len(verts) == ell + 1 or missing == {horn}:
                    continue
            cells.append(verts)

    gens = {n: () for n in range(bound + 1)}
    grouped = {}
    for verts in cells:
        grouped.setdefault(len(verts) - 1, []).append(verts)
    faces = {}
    marked = set()
    for n, vlist in grouped.items():
        ids = []
        for verts in vlist:
            gid = _simplex_key(verts, n)
            ids.append(gid)
            if n >= 1:
                faces[gid] = tuple(
                    (_simplex_key(verts[:i] + verts[i + 1 :], n - 1), ())
                    for i in range(n + 1)
                )
                if variant == "sharp":
                    marked.add(gid)
                elif variant == "edge_marked" and verts == (0, 1):
                    marked.add(gid)
                elif variant == "eq3":
                    if n >= 2 or verts in ((0, 2), (1, 3)):
                        marked.add(gid)
        gens[n] = tuple(sorted(ids))
    return MarkedSSet(bound, gens, faces, frozenset(marked))


def rebound(X: MarkedSSet, bound: int) -> MarkedSSet:
    """The same marked simplicial set with a different dimension bound."""
    top = max((n for n in X.gens if X.gens_at(n)), default=0)
    if top > bound:
        raise ValueError(f"generators in dimension {top} exceed bound {bound}")
    gens = {n: X.gens_at(n) for n in range(bound + 1)}
    return MarkedSSet(bound, gens, X.faces, X.marked)


def empty_msset(bound=DEFAULT_BOUND) -> MarkedSSet:
    return MarkedSSet(bound, {n: () for n in range(bound + 1)}, {}, frozenset())


# ---------------------------------------------------------------------------
# products


def product_with_index(X: MarkedSSet, Y: MarkedSSet):
    bound = min(X.bound, Y.bound)
    by_dim = {
        n: [
            (rx, ry)
            for rx in X.all_simplices(n)
            for ry in Y.all_simplices(n)
        ]
        for n in range(bound + 1)
    }

    def face_fn(pair, n, i):
        return (X.face(pair[0], i), Y.face(pair[1], i))

    def deg_fn(pair, n, i):
        return (degenerate(pair[0], i), degenerate(pair[1], i))

    def marked_fn(pair, n):
        return X.is_marked(pair[0]) and Y.is_marked(pair[1])

    def key_fn(pair, n):
        (gx, wx), (gy, wy) = pair
        wxs = ".".join(map(str, wx))
        wys = ".".join(map(str, wy))
        return f"<{gx}|{wxs}*{gy}|{wys}>"

    return from_raw(bound, by_dim, face_fn, deg_fn, marked_fn, key_fn)


def product(X: MarkedSSet, Y: MarkedSSet) -> MarkedSSet:
    """Categorical product; marked iff marked in both projections."""
    return product_with_index(X, Y)[0]


def product_map(f: MSSetMap, g: MSSetMap) -> MSSetMap:
    """The induced map f x g between the products."""
    P, _ = product_with_index(f.source, g.source)
    Q, qindex = product_with_index(f.target, g.target)
    assignment = {}
    for n in sorted(P.gens):
        for gid in P.gens_at(n):
            rx, ry = _decode_pair(gid)
            assignment[gid] = qindex[(f.apply(rx), g.apply(ry))]
    return MSSetMap(P, Q, assignment)


def _decode_pair(gid):
    body = gid[1:-1]
    left, right = body.split("*")
    gx, wxs = left.rsplit("|", 1)
    gy, wys = right.rsplit("|", 1)
    wx = tuple(int(t) for t in wxs.split(".") if t)
    wy = tuple(int(t) for t in wys.split(".") if t)
    return (gx, wx), (gy, wy)


# ---------------------------------------------------------------------------
# colimits


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def colimit(nodes, arrows, bound=None):
    """Colimit of a finite diagram of marked simplicial sets.

    nodes is a list of MarkedSSets; arrows a list of (src index, dst
    index, MSSetMap).  Returns the colimit and the cocone legs.
    """
    if not nodes:
        raise ValueError("empty diagram")
    if bound is None:
        bound = min(X.bound for X in nodes)

    for i, j, f in arrows:
        for g, (h, _) in f.assignment.items():
            if h not in nodes[j]._dim:
                raise ValueError(
                    f"arrow {i}->{j}: image of {g} targets unknown generator {h}"
                )

    uf = {n: _UnionFind() for n in range(bound + 1)}
    members = {n: {} for n in range(bound + 1)}
    for n in range(bound + 1):
        for i, X in enumerate(nodes):
            for ref in X.all_simplices(n):
                uf[n].add((i, ref))
        for i, j, f in arrows:
            for ref in nodes[i].all_simplices(n):
                img = (j, f.apply(ref))
                uf[n].add(img)
                uf[n].union((i, ref), img)
        for elt in uf[n].parent:
            members[n].setdefault(uf[n].find(elt), []).append(elt)

    def elt_key(elt):
        i, (g, w) = elt
        return f"{i}#{g}#{'.'.join(map(str, w))}"

    canon = {}
    by_dim = {}
    for n in range(bound + 1):
        classes = []
        for root, elts in members[n].items():
            cls = min(elt_key(e) for e in elts)
            for e in elts:
                canon[(n, e)] = cls
            classes.append(cls)
        by_dim[n] = sorted(classes)
    reps = {}
    for n in range(bound + 1):
        for root, elts in members[n].items():
            cls = canon[(n, elts[0])]
            reps[(n, cls)] = elts[0]

    def face_fn(cls, n, i):
        j, ref = reps[(n, cls)]
        return canon[(n - 1, (j, nodes[j].face(ref, i)))]

    def deg_fn(cls, n, i):
        j, ref = reps[(n, cls)]
        return canon[(n + 1, (j, degenerate(ref, i)))]

    def marked_fn(cls, n):
        j, ref = reps[(n, cls)]
        root = uf[n].find((j, ref))
        return any(nodes[i].is_marked(r) for i, r in members[n][root])

    def key_fn(cls, n):
        return cls

    colim, normal = from_raw(bound, by_dim, face_fn, deg_fn, marked_fn, key_fn)
    legs = []
    for i, X in enumerate(nodes):
        assignment = {}
        for n in range(bound + 1):
            for g in X.gens_at(n):
                assignment[g] = normal[canon[(n, (i, (g, ())))]]
        legs.append(MSSetMap(X, colim, assignment))
    return colim, legs


def pushout(f: MSSetMap, g: MSSetMap):
    """Pushout of X <- A -> Y; returns (P, leg_X, leg_Y)."""
    if f.source is not g.source and f.source.gens != g.source.gens:
        raise ValueError("pushout legs must share their source")
    nodes = [f.source, f.target, g.target]
    P, legs = colimit(nodes, [(0, 1, f), (0, 2, g)])
    return P, legs[1], legs[2]


# ---------------------------------------------------------------------------
# maps: enumeration, mono/iso


def _candidates(Y, n, expected_faces, need_marked, guard):
    out = []
    for ref in Y.all_simplices(n):
        guard.step()
        if need_marked and not Y.is_marked(ref):
            continue
        if expected_faces is not None:
            if any(Y.face(ref, i) != expected_faces[i] for i in range(n + 1)):
                continue
        out.append(ref)
    return sorted(out)


class _Guard:
    def __init__(self, limit):
        self.limit = limit
        self.count = 0

    def step(self, k=1):
        self.count += k
        if self.count > self.limit:
            raise ResourceLimitError(
                f"search-space guard exceeded ({self.limit} steps)"
            )


def enumerate_maps(X: MarkedSSet, Y: MarkedSSet, limit=2_000_000):
    """All marking-preserving maps X -> Y, canonically ordered."""
    top = max((n for n in X.gens if X.gens_at(n)), default=0)
    if top > Y.bound:
        raise ValueError("X has generators above the bound of Y")
    guard = _Guard(limit)
    order = [(n, g) for n in sorted(X.gens) for g in X.gens_at(n)]
    results = []
    assignment = {}

    def extend(k):
        if k == len(order):
            results.append(MSSetMap(X, Y, dict(assignment)))
            return
        n, g = order[k]
        if n == 0:
            expected = None
        else:
            expected = [
                MSSetMap(X, Y, assignment).apply(X.face((g, ()), i))
                for i in range(n + 1)
            ]
        for ref in _candidates(Y, n, expected, g in X.marked, guard):
            assignment[g] = ref
            extend(k + 1)
            del assignment[g]

    extend(0)
    return results


def is_mono(f: MSSetMap) -> bool:
    bound = min(f.source.bound, f.target.bound)
    for n in range(bound + 1):
        refs = f.source.all_simplices(n)
        if len({f.apply(r) for r in refs}) != len(refs):
            return False
    return True


def is_iso(f: MSSetMap) -> bool:
    bound = min(f.source.bound, f.target.bound)
    for n in range(bound + 1):
        if len(f.source.gens_at(n)) != len(f.target.gens_at(n)):
            return False
        for g in f.source.gens_at(n):
            img = f.assignment[g]
            if img[1]:
                return False
            if (g in f.source.marked) != (img[0] in f.target.marked):
                return False
    return is_mono(f)


def find_iso(X: MarkedSSet, Y: MarkedSSet, limit=2_000_000):
    """Search for an isomorphism of marked simplicial sets; None if absent."""
    bound = min(X.bound, Y.bound)
    if X.counts()[: bound + 1] != Y.counts()[: bound + 1]:
        return None
    if X.marked_counts()[: bound + 1] != Y.marked_counts()[: bound + 1]:
        return None
    guard = _Guard(limit)
    order = [(n, g) for n in range(bound + 1) for g in X.gens_at(n)]
    if not order:
        return MSSetMap(X, Y, {})
    assignment = {}
    used = set()

    def candidates(k):
        n, g = order[k]
        if n == 0:
            return list(Y.gens_at(0))
        partial = MSSetMap(X, Y, assignment)
        expected = [partial.apply(X.face((g, ()), i)) for i in range(n + 1)]
        return [
            h
            for h in Y.gens_at(n)
            if list(Y.faces[h]) == expected
            and (g in X.marked) == (h in Y.marked)
        ]

    # explicit-stack backtracking: nerves can have thousands of
    # generators, one recursion frame each would overflow
    stack = [[candidates(0), 0]]
    while stack:
        k = len(stack) - 1
        g = order[k][1]
        if g in assignment:
            used.discard(assignment[g][0])
            del assignment[g]
        cands, idx = stack[-1]
        if idx >= len(cands):
            stack.pop()
            continue
        stack[-1][1] = idx + 1
        h = cands[idx]
        guard.step()
        if h in used:
            continue
        assignment[g] = (h, ())
        used.add(h)
        if len(stack) == len(order):
            return MSSetMap(X, Y, dict(assignment))
        stack.append([candidates(len(stack)), 0])
    return None


def map_by_vertices(X: MarkedSSet, Y: MarkedSSet, vertex_images):
    """Extend a vertex assignment to the unique compatible map X -> Y.

    Raises if some generator has no candidate or more than one.
    """
    assignment = {v: (vertex_images[v], ()) for v in X.gens_at(0)}
    guard = _Guard(2_000_000)
    for n in sorted(X.gens):
        if n == 0:
            continue
        for g in X.gens_at(n):
            partial = MSSetMap(X, Y, assignment)
            expected = [partial.apply(X.face((g, ()), i)) for i in range(n + 1)]
            cands = _candidates(Y, n, expected, g in X.marked, guard)
            if len(cands) != 1:
                raise ValueError(
                    f"{g}: expected a unique extension, found {len(cands)}"
                )
            assignment[g] = cands[0]
    return MSSetMap(X, Y, assignment)


# ---------------------------------------------------------------------------
# JSON (schema msset/1)


def msset_to_json(X: MarkedSSet) -> dict:
    return {
        "schema": "msset/1",
        "bound": X.bound,
        "gens": {str(n): list(X.gens_at(n)) for n in sorted(X.gens)},
        "faces": {
            g: [{"gen": h, "word": list(w)} for h, w in X.faces[g]]
            for g in sorted(X.faces)
        },
        "marked": sorted(X.marked),
    }


def msset_from_json(data: dict) -> MarkedSSet:
    if data.get("schema") != "msset/1":
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    gens = {int(n): tuple(ids) for n, ids in data["gens"].items()}
    faces = {
        g: tuple((f["gen"], tuple(f["word"])) for f in fs)
        for g, fs in data["faces"].items()
    }
    return MarkedSSet(data["bound"], gens, faces, frozenset(data["marked"]))


def msset_dumps(X: MarkedSSet) -> str:
    return json.dumps(msset_to_json(X), indent=2, sort_keys=True)
