"""Finite 1- and 2-categories with explicit composition tables.

Composition is written diagrammatically throughout: compose(f, g) means
"f then g", and horizontal composition hc(f, g) of 1-cells f: x -> y and
g: y -> z lands in hom(x, z).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .msset import Report, ResourceLimitError, _Guard


# ---------------------------------------------------------------------------
# 1-categories


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    morphisms: dict  # id -> (src, tgt)
    identity: dict  # object -> morphism id
    compose: dict  # (f, g) -> id of "f then g"

    def src(self, f):
        return self.morphisms[f][0]

    def tgt(self, f):
        return self.morphisms[f][1]

    def then(self, f, g):
        return self.compose[(f, g)]

    def is_identity(self, f):
        return self.identity.get(self.src(f)) == f and self.src(f) == self.tgt(f)

    def hom(self, a, b):
        return sorted(f for f, (s, t) in self.morphisms.items() if s == a and t == b)

    def is_invertible(self, f):
        a, b = self.morphisms[f]
        for g in self.hom(b, a):
            if (
                self.compose.get((f, g)) == self.identity[a]
                and self.compose.get((g, f)) == self.identity[b]
            ):
                return True
        return False

    def __eq__(self, other):
        return (
            isinstance(other, FinCategory)
            and sorted(self.objects) == sorted(other.objects)
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.compose == other.compose
        )


def validate_category(C: FinCategory) -> Report:
    problems = []
    for f, (a, b) in C.morphisms.items():
        if a not in C.objects or b not in C.objects:
            problems.append(f"{f}: endpoint not an object")
    for x in C.objects:
        i = C.identity.get(x)
        if i is None or C.morphisms.get(i) != (x, x):
            problems.append(f"{x}: bad identity")
    mor = list(C.morphisms)
    for f in mor:
        for g in mor:
            composable = C.tgt(f) == C.src(g)
            h = C.compose.get((f, g))
            if composable and h is None:
                problems.append(f"compose undefined on ({f}, {g})")
            elif not composable and h is not None:
                problems.append(f"compose defined on non-composable ({f}, {g})")
            elif h is not None and (
                C.src(h) != C.src(f) or C.tgt(h) != C.tgt(g)
            ):
                problems.append(f"compose({f}, {g}) has wrong endpoints")
    for f in mor:
        if C.compose.get((C.identity[C.src(f)], f)) != f:
            problems.append(f"left unit fails at {f}")
        if C.compose.get((f, C.identity[C.tgt(f)])) != f:
            problems.append(f"right unit fails at {f}")
    for f in mor:
        for g in mor:
            if C.tgt(f) != C.src(g):
                continue
            for h in mor:
                if C.tgt(g) != C.src(h):
                    continue
                if C.then(C.then(f, g), h) != C.then(f, C.then(g, h)):
                    problems.append(f"associativity fails on ({f}, {g}, {h})")
    return Report("category", problems)


def ordinal(m: int) -> FinCategory:
    """The linear order with m+1 elements; m = -1 gives the empty category."""
    if m < -1:
        raise ValueError("m must be at least -1")
    objects = tuple(str(i) for i in range(m + 1))
    morphisms = {
        f"{i}>{j}": (str(i), str(j))
        for i in range(m + 1)
        for j in range(i, m + 1)
    }
    identity = {str(i): f"{i}>{i}" for i in range(m + 1)}
    compose = {
        (f"{i}>{j}", f"{j}>{k}"): f"{i}>{k}"
        for i in range(m + 1)
        for j in range(i, m + 1)
        for k in range(j, m + 1)
    }
    return FinCategory(objects, morphisms, identity, compose)


def free_iso() -> FinCategory:
    """The free-living isomorphism: two objects, two mutually inverse arrows."""
    objects = ("a", "b")
    morphisms = {
        "a>a": ("a", "a"),
        "b>b": ("b", "b"),
        "f": ("a", "b"),
        "g": ("b", "a"),
    }
    identity = {"a": "a>a", "b": "b>b"}
    compose = {}
    for u, (s1, t1) in morphisms.items():
        for v, (s2, t2) in morphisms.items():
            if t1 != s2:
                continue
            if u == identity[s1]:
                compose[(u, v)] = v
            elif v == identity[t2]:
                compose[(u, v)] = u
            else:
                compose[(u, v)] = identity[s1] if s1 == t2 else None
    assert None not in compose.values()
    return FinCategory(objects, morphisms, identity, compose)


def terminal_category() -> FinCategory:
    return FinCategory(("*",), {"id": ("*", "*")}, {"*": "id"}, {("id", "id"): "id"})


def _enc(t) -> str:
    return "(" + ",".join(str(a) for a in t) + ")"


def _mid(a, b) -> str:
    return f"{_enc(a)}>{_enc(b)}"


def product_poset(ks) -> FinCategory:
    """The poset [k_1] x ... x [k_r] as a category; r = 0 gives [0]."""
    cells = list(itertools.product(*(range(k + 1) for k in ks)))
    objects = tuple(_enc(t) for t in cells)
    morphisms = {}
    identity = {}
    pairs = []
    for a in cells:
        for b in cells:
            if all(x <= y for x, y in zip(a, b)):
                morphisms[_mid(a, b)] = (_enc(a), _enc(b))
                pairs.append((a, b))
        identity[_enc(a)] = _mid(a, a)
    compose = {}
    for a, b in pairs:
        for b2, c in pairs:
            if b == b2:
                compose[(_mid(a, b), _mid(b, c))] = _mid(a, c)
    return FinCategory(objects, morphisms, identity, compose)


def chain_count(C: FinCategory, j: int) -> int:
    """Number of composable j-chains (the classical nerve in dimension j)."""
    if j == 0:
        return len(C.objects)
    weights = {f: 1 for f in C.morphisms}
    for _ in range(j - 1):
        nxt = {g: 0 for g in C.morphisms}
        for g in C.morphisms:
            for f in C.morphisms:
                if C.tgt(f) == C.src(g):
                    nxt[g] += weights[f]
        weights = nxt
    return sum(weights.values())


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: dict
    mor_map: dict

    def compose(self, other: "Functor") -> "Functor":
        """self followed by other."""
        return Functor(
            self.source,
            other.target,
            {x: other.obj_map[y] for x, y in self.obj_map.items()},
            {f: other.mor_map[g] for f, g in self.mor_map.items()},
        )

    def key(self):
        return (
            tuple(sorted(self.obj_map.items())),
            tuple(sorted(self.mor_map.items())),
        )

    def __eq__(self, other):
        return isinstance(other, Functor) and self.key() == other.key()


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms})


def validate_functor(F: Functor) -> Report:
    problems = []
    C, D = F.source, F.target
    for f, (a, b) in C.morphisms.items():
        g = F.mor_map.get(f)
        if g is None or D.morphisms.get(g) != (F.obj_map[a], F.obj_map[b]):
            problems.append(f"{f}: image missing or has wrong endpoints")
    for x in C.objects:
        if F.mor_map.get(C.identity[x]) != D.identity.get(F.obj_map[x]):
            problems.append(f"{x}: identity not preserved")
    for f in C.morphisms:
        for g in C.morphisms:
            if C.tgt(f) != C.src(g):
                continue
            if F.mor_map[C.then(f, g)] != D.then(F.mor_map[f], F.mor_map[g]):
                problems.append(f"composition not preserved on ({f}, {g})")
    return Report("functor", problems)


def _atoms(C: FinCategory):
    """Non-identity morphisms admitting no nontrivial factorization."""
    nonid = [f for f in C.morphisms if not C.is_identity(f)]
    atoms = []
    for f in nonid:
        decomposable = any(
            C.compose.get((g, h)) == f
            for g in nonid
            for h in nonid
            if C.tgt(g) == C.src(h)
        )
        if not decomposable:
            atoms.append(f)
    return sorted(atoms)


def _factorizations(C: FinCategory, atoms):
    """For each non-identity morphism, one splitting (atom, remainder)."""
    factor = {}
    pending = [f for f in C.morphisms if not C.is_identity(f) and f not in atoms]
    progress = True
    while pending and progress:
        progress = False
        for f in list(pending):
            for g in atoms:
                if C.src(g) != C.src(f):
                    continue
                for h in C.morphisms:
                    if C.compose.get((g, h)) == f and (
                        h in atoms or C.is_identity(h) or h in factor
                    ):
                        factor[f] = (g, h)
                        pending.remove(f)
                        progress = True
                        break
                if f in factor:
                    break
    if pending:
        raise ValueError(f"morphisms without atomic factorization: {pending}")
    return factor


def enumerate_functors(C: FinCategory, D: FinCategory, limit=2_000_000):
    """The complete, canonically ordered list of functors C -> D."""
    if not C.objects:
        return [Functor(C, D, {}, {})]
    if not D.objects and C.objects:
        return []
    guard = _Guard(limit)
    atoms = _atoms(C)
    factor = _factorizations(C, atoms)
    hom_cache = {}

    def hom(a, b):
        if (a, b) not in hom_cache:
            hom_cache[(a, b)] = D.hom(a, b)
        return hom_cache[(a, b)]

    objs = sorted(C.objects)
    results = []

    def derive(obj_map, atom_map):
        mor_map = {}
        for x in C.objects:
            mor_map[C.identity[x]] = D.identity[obj_map[x]]
        for f in atoms:
            mor_map[f] = atom_map[f]

        def image(f):
            if f in mor_map:
                return mor_map[f]
            g, h = factor[f]
            mor_map[f] = D.then(image(g), image(h))
            return mor_map[f]

        for f in C.morphisms:
            image(f)
        for f in C.morphisms:
            for g in C.morphisms:
                if C.tgt(f) != C.src(g):
                    continue
                if mor_map[C.then(f, g)] != D.then(mor_map[f], mor_map[g]):
                    return None
        return mor_map

    def assign_atoms(obj_map, k, atom_map):
        if k == len(atoms):
            mor_map = derive(dict(obj_map), dict(atom_map))
            if mor_map is not None:
                results.append(Functor(C, D, dict(obj_map), mor_map))
            return
        f = atoms[k]
        a, b = C.morphisms[f]
        for g in hom(obj_map[a], obj_map[b]):
            guard.step()
            atom_map[f] = g
            assign_atoms(obj_map, k + 1, atom_map)
            del atom_map[f]

    def assign_objects(k, obj_map):
        if k == len(objs):
            assign_atoms(obj_map, 0, {})
            return
        x = objs[k]
        for y in sorted(D.objects):
            guard.step()
            obj_map[x] = y
            ok = all(
                hom(obj_map[C.src(f)], obj_map[C.tgt(f)])
                for f in atoms
                if C.src(f) in obj_map and C.tgt(f) in obj_map
            )
            if ok:
                assign_objects(k + 1, obj_map)
            del obj_map[x]

    assign_objects(0, {})
    return results


# ---------------------------------------------------------------------------
# 2-categories


@dataclass(frozen=True)
class Theta2Shape:
    m: int
    ks: tuple

    def __post_init__(self):
        if self.m < 0 or len(self.ks) != self.m or any(k < 0 for k in self.ks):
            raise ValueError(f"invalid shape [{self.m}|{self.ks}]")
        object.__setattr__(self, "ks", tuple(self.ks))

    def __str__(self):
        return f"[{self.m}|{','.join(str(k) for k in self.ks)}]"


@dataclass(frozen=True, eq=False)
class Fin2Category:
    """A finite 2-category given by hom-categories and horizontal tables.

    hom maps object pairs with nonempty mapping category to a FinCategory
    whose objects are the 1-cells and whose morphisms are the 2-cells;
    hcompose1/hcompose2 give horizontal composition per object triple.
    Optional metadata (segments and the decomposition tables) records a
    free generating pasting scheme used by the functor enumerator.
    """

    objects: tuple
    hom: dict  # (x, y) -> FinCategory, nonempty pairs only
    hcompose1: dict  # (x, y, z) -> {(f, g): h}
    hcompose2: dict  # (x, y, z) -> {(alpha, beta): gamma}
    unit1: dict  # x -> 1-cell id in hom(x, x)
    segments: tuple = None
    one_decomp: dict = None
    two_decomp: dict = None

    def hom_at(self, x, y):
        return self.hom.get((x, y))

    def one_cells(self, x, y):
        H = self.hom.get((x, y))
        return sorted(H.objects) if H else []

    def hc1(self, x, y, z, f, g):
        return self.hcompose1[(x, y, z)][(f, g)]

    def hc2(self, x, y, z, alpha, beta):
        return self.hcompose2[(x, y, z)][(alpha, beta)]

    def signature(self) -> str:
        parts = [
            repr(sorted(self.objects)),
            repr(sorted((k, sorted(v.morphisms.items())) for k, v in self.hom.items())),
            repr(sorted((k, sorted(v.items())) for k, v in self.hcompose1.items())),
            repr(sorted((k, sorted(v.items())) for k, v in self.hcompose2.items())),
            repr(sorted(self.unit1.items())),
        ]
        return "|".join(parts)


def validate_2cat(D: Fin2Category) -> Report:
    problems = []
    for (x, y), H in D.hom.items():
        sub = validate_category(H)
        for v in sub.violations:
            problems.append(f"hom({x},{y}): {v}")
    for x in D.objects:
        H = D.hom_at(x, x)
        if H is None or D.unit1.get(x) not in H.objects:
            problems.append(f"{x}: missing unit 1-cell")
    # horizontal composition: totality, functoriality, units, associativity
    for x in D.objects:
        for y in D.objects:
            for z in D.objects:
                Hxy, Hyz = D.hom_at(x, y), D.hom_at(y, z)
                if Hxy is None or Hyz is None:
                    continue
                t1 = D.hcompose1.get((x, y, z))
                t2 = D.hcompose2.get((x, y, z))
                Hxz = D.hom_at(x, z)
                if t1 is None or t2 is None or Hxz is None:
                    problems.append(f"hcompose missing at ({x},{y},{z})")
                    continue
                before = len(problems)
                for f in Hxy.objects:
                    for g in Hyz.objects:
                        h = t1.get((f, g))
                        if h is None or h not in Hxz.objects:
                            problems.append(f"hc1 bad on ({x},{y},{z}) ({f},{g})")
                for a in Hxy.morphisms:
                    for b in Hyz.morphisms:
                        c = t2.get((a, b))
                        if c is None or c not in Hxz.morphisms:
                            problems.append(f"hc2 bad on ({x},{y},{z}) ({a},{b})")
                            continue
                        want = (
                            t1[(Hxy.src(a), Hyz.src(b))],
                            t1[(Hxy.tgt(a), Hyz.tgt(b))],
                        )
                        if Hxz.morphisms[c] != want:
                            problems.append(
                                f"hc2 endpoints wrong on ({x},{y},{z}) ({a},{b})"
                            )
                if len(problems) > before:
                    continue
                for f in Hxy.objects:
                    for g in Hyz.objects:
                        if t2[(Hxy.identity[f], Hyz.identity[g])] != Hxz.identity[
                            t1[(f, g)]
                        ]:
                            problems.append(
                                f"hc does not preserve identities at ({f},{g})"
                            )
                # interchange: hc2 preserves vertical composition
                for a in Hxy.morphisms:
                    for a2 in Hxy.morphisms:
                        if Hxy.tgt(a) != Hxy.src(a2):
                            continue
                        for b in Hyz.morphisms:
                            for b2 in Hyz.morphisms:
                                if Hyz.tgt(b) != Hyz.src(b2):
                                    continue
                                lhs = t2[(Hxy.then(a, a2), Hyz.then(b, b2))]
                                rhs = Hxz.then(t2[(a, b)], t2[(a2, b2)])
                                if lhs != rhs:
                                    problems.append(
                                        "interchange fails on "
                                        f"({x},{y},{z}) ({a},{a2},{b},{b2})"
                                    )
    for x in D.objects:
        for y in D.objects:
            Hxy = D.hom_at(x, y)
            if Hxy is None:
                continue
            tl = D.hcompose1.get((x, x, y), {})
            tr = D.hcompose1.get((x, y, y), {})
            for f in Hxy.objects:
                if tl.get((D.unit1[x], f)) != f:
                    problems.append(f"left horizontal unit fails at ({x},{y}) {f}")
                if tr.get((f, D.unit1[y])) != f:
                    problems.append(f"right horizontal unit fails at ({x},{y}) {f}")
    for w in D.objects:
        for x in D.objects:
            for y in D.objects:
                for z in D.objects:
                    if (
                        D.hom_at(w, x) is None
                        or D.hom_at(x, y) is None
                        or D.hom_at(y, z) is None
                    ):
                        continue
                    for f in D.hom_at(w, x).objects:
                        for g in D.hom_at(x, y).objects:
                            for h in D.hom_at(y, z).objects:
                                lhs = D.hc1(w, y, z, D.hc1(w, x, y, f, g), h)
                                rhs = D.hc1(w, x, z, f, D.hc1(x, y, z, g, h))
                                if lhs != rhs:
                                    problems.append(
                                        f"horizontal associativity fails ({f},{g},{h})"
                                    )
    return Report("2-category", problems)


def suspend_category(C: FinCategory) -> Fin2Category:
    """Two objects bot/top with C as the mapping category bot -> top."""
    T = terminal_category()
    hom = {("bot", "bot"): T, ("top", "top"): T}
    if C.objects:
        hom[("bot", "top")] = C
    hcompose1 = {
        ("bot", "bot", "bot"): {("*", "*"): "*"},
        ("top", "top", "top"): {("*", "*"): "*"},
    }
    hcompose2 = {
        ("bot", "bot", "bot"): {("id", "id"): "id"},
        ("top", "top", "top"): {("id", "id"): "id"},
    }
    if C.objects:
        hcompose1[("bot", "bot", "top")] = {("*", f): f for f in C.objects}
        hcompose1[("bot", "top", "top")] = {(f, "*"): f for f in C.objects}
        hcompose2[("bot", "bot", "top")] = {("id", m): m for m in C.morphisms}
        hcompose2[("bot", "top", "top")] = {(m, "id"): m for m in C.morphisms}
    one_decomp = {("bot", "bot", "*"): (), ("top", "top", "*"): ()}
    two_decomp = {("bot", "bot", "id"): (), ("top", "top", "id"): ()}
    for f in C.objects:
        one_decomp[("bot", "top", f)] = ((("bot", "top"), f),)
    for m in C.morphisms:
        two_decomp[("bot", "top", m)] = ((("bot", "top"), m),)
    return Fin2Category(
        ("bot", "top"),
        hom,
        hcompose1,
        hcompose2,
        {"bot": "*", "top": "*"},
        segments=(("bot", "top"),),
        one_decomp=one_decomp,
        two_decomp=two_decomp,
    )


def theta2_object(shape: Theta2Shape) -> Fin2Category:
    """The pasting 2-category [m|k_1,...,k_m] with product-poset homs."""
    m, ks = shape.m, shape.ks
    objects = tuple(str(i) for i in range(m + 1))
    hom = {}
    tuples = {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            hom[(str(i), str(j))] = product_poset(ks[i:j])
            tuples[(i, j)] = list(
                itertools.product(*(range(k + 1) for k in ks[i:j]))
            )
    hcompose1, hcompose2 = {}, {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            for l in range(j, m + 1):
                key = (str(i), str(j), str(l))
                t1, t2 = {}, {}
                for a in tuples[(i, j)]:
                    for b in tuples[(j, l)]:
                        t1[(_enc(a), _enc(b))] = _enc(a + b)
                for a in tuples[(i, j)]:
                    for a2 in tuples[(i, j)]:
                        if not all(p <= q for p, q in zip(a, a2)):
                            continue
                        for b in tuples[(j, l)]:
                            for b2 in tuples[(j, l)]:
                                if not all(p <= q for p, q in zip(b, b2)):
                                    continue
                                t2[(_mid(a, a2), _mid(b, b2))] = _mid(a + b, a2 + b2)
                hcompose1[key] = t1
                hcompose2[key] = t2
    unit1 = {str(i): _enc(()) for i in range(m + 1)}
    segments = tuple((str(i), str(i + 1)) for i in range(m))
    one_decomp, two_decomp = {}, {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            for a in tuples[(i, j)]:
                one_decomp[(str(i), str(j), _enc(a))] = tuple(
                    ((str(i + t), str(i + t + 1)), _enc((a[t],)))
                    for t in range(j - i)
                )
                for b in tuples[(i, j)]:
                    if all(p <= q for p, q in zip(a, b)):
                        two_decomp[(str(i), str(j), _mid(a, b))] = tuple(
                            ((str(i + t), str(i + t + 1)), _mid((a[t],), (b[t],)))
                            for t in range(j - i)
                        )
    return Fin2Category(
        objects,
        hom,
        hcompose1,
        hcompose2,
        unit1,
        segments=segments,
        one_decomp=one_decomp,
        two_decomp=two_decomp,
    )


def cell(j: int) -> Fin2Category:
    """The free j-cell for j = 0, 1, 2."""
    if j == 0:
        return theta2_object(Theta2Shape(0, ()))
    if j == 1:
        return theta2_object(Theta2Shape(1, (0,)))
    if j == 2:
        return theta2_object(Theta2Shape(1, (1,)))
    raise ValueError("j must be 0, 1 or 2")


def as_two_category(C: FinCategory) -> Fin2Category:
    """A 1-category viewed as a 2-category with only identity 2-cells."""
    hom = {}
    for x in C.objects:
        for y in C.objects:
            fs = C.hom(x, y)
            if not fs:
                continue
            hom[(x, y)] = FinCategory(
                tuple(fs),
                {f"id({f})": (f, f) for f in fs},
                {f: f"id({f})" for f in fs},
                {(f"id({f})", f"id({f})"): f"id({f})" for f in fs},
            )
    hcompose1, hcompose2 = {}, {}
    for x in C.objects:
        for y in C.objects:
            for z in C.objects:
                if (x, y) not in hom or (y, z) not in hom:
                    continue
                t1, t2 = {}, {}
                for f in C.hom(x, y):
                    for g in C.hom(y, z):
                        h = C.then(f, g)
                        t1[(f, g)] = h
                        t2[(f"id({f})", f"id({g})")] = f"id({h})"
                hcompose1[(x, y, z)] = t1
                hcompose2[(x, y, z)] = t2
    unit1 = {x: C.identity[x] for x in C.objects}
    return Fin2Category(tuple(C.objects), hom, hcompose1, hcompose2, unit1)


# ---------------------------------------------------------------------------
# 2-functors


class TwoFunctor:
    """A 2-functor between Fin2Categories.

    Stored either as full hom-functor tables or compactly as images of
    the generating segments, with the full assignment tables derived on
    demand through the decomposition metadata of the source.
    """

    def __init__(self, source, target, on_objects, hom_maps=None, seg_maps=None):
        self.source = source
        self.target = target
        self.on_objects = on_objects
        self._hom_maps = hom_maps
        self._seg_maps = seg_maps

    @classmethod
    def from_tables(cls, source, target, on_objects, hom_maps):
        return cls(source, target, on_objects, hom_maps=hom_maps)

    @classmethod
    def from_segments(cls, source, target, on_objects, seg_maps):
        return cls(source, target, on_objects, seg_maps=seg_maps)

    def obj(self, x):
        return self.on_objects[x]

    @cached_property
    def hom_maps(self):
        """Full tables (x, y) -> (1-cell map, 2-cell map) per nonempty hom."""
        if self._hom_maps is not None:
            return self._hom_maps
        D, E = self.source, self.target
        out = {}
        for (x, y), H in D.hom.items():
            obj_map = {f: self._derive_one(x, y, f) for f in H.objects}
            mor_map = {m: self._derive_two(x, y, m) for m in H.morphisms}
            out[(x, y)] = (obj_map, mor_map)
        return out

    def _fold_one(self, pieces, x):
        E = self.target
        if not pieces:
            return E.unit1[self.obj(x)]
        cur = None
        cx = None
        for (a, b), atom in pieces:
            g = self._seg_maps[(a, b)].obj_map[atom]
            if cur is None:
                cur, cx = g, self.obj(a)
            else:
                cur = E.hc1(cx, self.obj(a), self.obj(b), cur, g)
        return cur

    def _fold_two(self, pieces, x):
        E = self.target
        if not pieces:
            u = E.unit1[self.obj(x)]
            return E.hom_at(self.obj(x), self.obj(x)).identity[u]
        cur = None
        cx = None
        for (a, b), atom in pieces:
            g = self._seg_maps[(a, b)].mor_map[atom]
            if cur is None:
                cur, cx = g, self.obj(a)
            else:
                cur = E.hc2(cx, self.obj(a), self.obj(b), cur, g)
        return cur

    def _derive_one(self, x, y, f):
        if self._seg_maps is not None:
            return self._fold_one(self.source.one_decomp[(x, y, f)], x)
        return self._hom_maps[(x, y)][0][f]

    def _derive_two(self, x, y, m):
        if self._seg_maps is not None:
            return self._fold_two(self.source.two_decomp[(x, y, m)], x)
        return self._hom_maps[(x, y)][1][m]

    def one(self, x, y, f):
        if self._hom_maps is not None or "hom_maps" in self.__dict__:
            return self.hom_maps[(x, y)][0][f]
        return self._derive_one(x, y, f)

    def two(self, x, y, m):
        if self._hom_maps is not None or "hom_maps" in self.__dict__:
            return self.hom_maps[(x, y)][1][m]
        return self._derive_two(x, y, m)

    def compact_key(self):
        if self._seg_maps is not None:
            return (
                tuple(sorted(self.on_objects.items())),
                tuple(
                    (pair, self._seg_maps[pair].key())
                    for pair in sorted(self._seg_maps)
                ),
            )
        return self.key()

    def key(self):
        return (
            tuple(sorted(self.on_objects.items())),
            tuple(
                (pair, tuple(sorted(om.items())), tuple(sorted(mm.items())))
                for pair, (om, mm) in sorted(self.hom_maps.items())
            ),
        )

    def __eq__(self, other):
        return isinstance(other, TwoFunctor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def compose(self, other: "TwoFunctor") -> "TwoFunctor":
        """self followed by other."""
        on_objects = {x: other.obj(y) for x, y in self.on_objects.items()}
        hom_maps = {}
        for (x, y), (om, mm) in self.hom_maps.items():
            fx, fy = self.obj(x), self.obj(y)
            hom_maps[(x, y)] = (
                {f: other.one(fx, fy, g) for f, g in om.items()},
                {m: other.two(fx, fy, n) for m, n in mm.items()},
            )
        return TwoFunctor.from_tables(self.source, other.target, on_objects, hom_maps)


def identity_two_functor(D: Fin2Category) -> TwoFunctor:
    hom_maps = {
        pair: ({f: f for f in H.objects}, {m: m for m in H.morphisms})
        for pair, H in D.hom.items()
    }
    return TwoFunctor.from_tables(D, D, {x: x for x in D.objects}, hom_maps)


def validate_two_functor(F: TwoFunctor) -> Report:
    problems = []
    D, E = F.source, F.target
    for x in D.objects:
        if F.obj(x) not in E.objects:
            problems.append(f"{x}: image not an object")
    for (x, y), H in D.hom.items():
        He = E.hom_at(F.obj(x), F.obj(y))
        om, mm = F.hom_maps[(x, y)]
        if He is None:
            problems.append(f"hom({x},{y}): target hom empty")
            continue
        for f in H.objects:
            if om.get(f) not in He.objects:
                problems.append(f"1-cell {f}: bad image")
        for m in H.morphisms:
            img = mm.get(m)
            if img not in He.morphisms:
                problems.append(f"2-cell {m}: bad image")
                continue
            if He.morphisms[img] != (om[H.src(m)], om[H.tgt(m)]):
                problems.append(f"2-cell {m}: image endpoints wrong")
        for f in H.objects:
            if mm[H.identity[f]] != He.identity[om[f]]:
                problems.append(f"identity 2-cell of {f} not preserved")
        for m in H.morphisms:
            for n in H.morphisms:
                if H.tgt(m) != H.src(n):
                    continue
                if mm[H.then(m, n)] != He.then(mm[m], mm[n]):
                    problems.append(f"vertical composition broken on ({m},{n})")
    for x in D.objects:
        u = D.unit1[x]
        if F.one(x, x, u) != E.unit1[F.obj(x)]:
            problems.append(f"unit 1-cell at {x} not preserved")
    for x in D.objects:
        for y in D.objects:
            for z in D.objects:
                if D.hom_at(x, y) is None or D.hom_at(y, z) is None:
                    continue
                fx, fy, fz = F.obj(x), F.obj(y), F.obj(z)
                for f in D.hom_at(x, y).objects:
                    for g in D.hom_at(y, z).objects:
                        lhs = F.one(x, z, D.hc1(x, y, z, f, g))
                        rhs = E.hc1(fx, fy, fz, F.one(x, y, f), F.one(y, z, g))
                        if lhs != rhs:
                            problems.append(
                                f"horizontal 1-composition broken on ({f},{g})"
                            )
                for a in D.hom_at(x, y).morphisms:
                    for b in D.hom_at(y, z).morphisms:
                        lhs = F.two(x, z, D.hc2(x, y, z, a, b))
                        rhs = E.hc2(fx, fy, fz, F.two(x, y, a), F.two(y, z, b))
                        if lhs != rhs:
                            problems.append(
                                f"horizontal 2-composition broken on ({a},{b})"
                            )
    return Report("2-functor", problems)


def enumerate_two_functors(D: Fin2Category, E: Fin2Category, limit=5_000_000):
    """All 2-functors D -> E, duplicate-free and canonically ordered.

    With generator metadata on D the search runs over segment images;
    otherwise a full-table search with horizontal-composition filtering
    is used.
    """
    guard = _Guard(limit)
    if D.segments is not None:
        return _enumerate_free(D, E, guard)
    return _enumerate_full(D, E, guard)


def _enumerate_free(D, E, guard):
    objs = sorted(D.objects)
    eobjs = sorted(E.objects)
    results = []
    seg_homs = {pair: D.hom_at(*pair) for pair in D.segments}

    def assign(k, on_objects):
        if k == len(objs):
            choice_lists = []
            for pair in D.segments:
                fx, fy = on_objects[pair[0]], on_objects[pair[1]]
                He = E.hom_at(fx, fy)
                if He is None:
                    return
                fns = enumerate_functors(seg_homs[pair], He, guard.limit)
                guard.step(len(fns))
                if not fns:
                    return
                choice_lists.append(fns)
            for combo in itertools.product(*choice_lists):
                guard.step()
                seg_maps = dict(zip(D.segments, combo))
                results.append(
                    TwoFunctor.from_segments(D, E, dict(on_objects), seg_maps)
                )
            return
        x = objs[k]
        for y in eobjs:
            guard.step()
            on_objects[x] = y
            ok = True
            for a, b in D.segments:
                if a in on_objects and b in on_objects:
                    if E.hom_at(on_objects[a], on_objects[b]) is None:
                        ok = False
                        break
            if ok:
                assign(k + 1, on_objects)
            del on_objects[x]

    assign(0, {})
    return results


def _enumerate_full(D, E, guard):
    objs = sorted(D.objects)
    eobjs = sorted(E.objects)
    pairs = sorted(D.hom)
    results = []

    def check(on_objects, maps):
        for x in D.objects:
            om, _ = maps[(x, x)]
            if om[D.unit1[x]] != E.unit1[on_objects[x]]:
                return False
        for x in D.objects:
            for y in D.objects:
                for z in D.objects:
                    if (x, y) not in maps or (y, z) not in maps:
                        continue
                    fx, fy, fz = on_objects[x], on_objects[y], on_objects[z]
                    om1, mm1 = maps[(x, y)]
                    om2, mm2 = maps[(y, z)]
                    om3, mm3 = maps[(x, z)]
                    for f in D.hom_at(x, y).objects:
                        for g in D.hom_at(y, z).objects:
                            guard.step()
                            if om3[D.hc1(x, y, z, f, g)] != E.hc1(
                                fx, fy, fz, om1[f], om2[g]
                            ):
                                return False
                    for a in D.hom_at(x, y).morphisms:
                        for b in D.hom_at(y, z).morphisms:
                            guard.step()
                            if mm3[D.hc2(x, y, z, a, b)] != E.hc2(
                                fx, fy, fz, mm1[a], mm2[b]
                            ):
                                return False
        return True

    for images in itertools.product(eobjs, repeat=len(objs)):
        guard.step()
        on_objects = dict(zip(objs, images))
        choice_lists = []
        feasible = True
        for pair in pairs:
            He = E.hom_at(on_objects[pair[0]], on_objects[pair[1]])
            if He is None:
                feasible = False
                break
            fns = enumerate_functors(D.hom[pair], He, guard.limit)
            if not fns:
                feasible = False
                break
            choice_lists.append(fns)
        if not feasible:
            continue
        for combo in itertools.product(*choice_lists):
            guard.step()
            maps = {
                pair: (fn.obj_map, fn.mor_map) for pair, fn in zip(pairs, combo)
            }
            if check(on_objects, maps):
                results.append(
                    TwoFunctor.from_tables(D, E, dict(on_objects), dict(maps))
                )
    return results


# ---------------------------------------------------------------------------
# JSON (schema twocat/1)


def category_to_json(C: FinCategory) -> dict:
    return {
        "objects": sorted(C.objects),
        "morphisms": {f: list(C.morphisms[f]) for f in sorted(C.morphisms)},
        "identity": dict(sorted(C.identity.items())),
        "compose": sorted([f, g, h] for (f, g), h in C.compose.items()),
    }


def category_from_json(data: dict) -> FinCategory:
    return FinCategory(
        tuple(data["objects"]),
        {f: tuple(v) for f, v in data["morphisms"].items()},
        dict(data["identity"]),
        {(f, g): h for f, g, h in data["compose"]},
    )


def two_category_to_json(D: Fin2Category) -> dict:
    return {
        "schema": "twocat/1",
        "objects": sorted(D.objects),
        "hom": {
            f"{x}|{y}": category_to_json(H) for (x, y), H in sorted(D.hom.items())
        },
        "hcompose1": {
            f"{x}|{y}|{z}": sorted([f, g, h] for (f, g), h in t.items())
            for (x, y, z), t in sorted(D.hcompose1.items())
        },
        "hcompose2": {
            f"{x}|{y}|{z}": sorted([a, b, c] for (a, b), c in t.items())
            for (x, y, z), t in sorted(D.hcompose2.items())
        },
        "unit1": dict(sorted(D.unit1.items())),
    }


def two_category_from_json(data: dict) -> Fin2Category:
    if data.get("schema") != "twocat/1":
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    hom = {
        tuple(k.split("|")): category_from_json(v) for k, v in data["hom"].items()
    }
    hcompose1 = {
        tuple(k.split("|")): {(f, g): h for f, g, h in triples}
        for k, triples in data["hcompose1"].items()
    }
    hcompose2 = {
        tuple(k.split("|")): {(a, b): c for a, b, c in triples}
        for k, triples in data["hcompose2"].items()
    }
    return Fin2Category(
        tuple(data["objects"]), hom, hcompose1, hcompose2, dict(data["unit1"])
    )
