"""Finitely presented Theta_2-sets, elementary acyclic cofibrations, and
the comparison functor L.

A presentation is a finite colimit diagram of box cells (shape, level),
each denoting the representable of the shape times a standard simplex on
the level.  L replaces every box cell by rs_nerve(shape) x Delta[level]#
and takes the colimit of marked simplicial sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .msset import (
    DEFAULT_BOUND,
    MarkedSSet,
    MSSetMap,
    colimit,
    enumerate_maps,
    product,
    product_map,
    standard_simplex,
)
from .msset import _UnionFind
from .nerves import nerve_map, rs_nerve
from .twocat import (
    Fin2Category,
    Functor,
    Theta2Shape,
    TwoFunctor,
    _enc,
    _mid,
    chain_count,
    enumerate_two_functors,
    theta2_object,
)


@dataclass(frozen=True)
class BoxCell:
    shape: Theta2Shape
    level: int = 0

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")


@dataclass(frozen=True)
class Theta2Presentation:
    """A finite colimit diagram of box cells.

    arrows are tuples (src index, dst index, TwoFunctor between the
    shapes, monotone vertex images between the levels).
    """

    cells: tuple
    arrows: tuple = ()

    def __post_init__(self):
        for i, j, F, lam in self.arrows:
            if not (0 <= i < len(self.cells) and 0 <= j < len(self.cells)):
                raise ValueError("arrow endpoint out of range")
            if len(lam) != self.cells[i].level + 1:
                raise ValueError("level map has wrong length")
            if any(lam[t] > lam[t + 1] for t in range(len(lam) - 1)):
                raise ValueError("level map not monotone")
            if any(v < 0 or v > self.cells[j].level for v in lam):
                raise ValueError("level map image out of range")


def representable(shape: Theta2Shape, level: int = 0) -> Theta2Presentation:
    return Theta2Presentation((BoxCell(shape, level),))


@dataclass(frozen=True)
class PresentationMap:
    """A map of presentations: per source cell, a target cell together
    with a shape functor and a level map."""

    source: Theta2Presentation
    target: Theta2Presentation
    cell_map: tuple  # per source cell: (target index, TwoFunctor, level images)


# ---------------------------------------------------------------------------
# shape functors between theta objects


def shape_functor(src: Theta2Shape, dst: Theta2Shape, obj_images,
                  seg_images=None) -> TwoFunctor:
    """2-functor between pasting shapes from object images and, per
    source segment, images of the segment hom objects in the product
    poset of the target."""
    D = theta2_object(src)
    E = theta2_object(dst)
    on_objects = {str(i): str(obj_images[i]) for i in range(src.m + 1)}
    seg_maps = {}
    for t in range(1, src.m + 1):
        lo, hi = obj_images[t - 1], obj_images[t]
        imgs = seg_images[t - 1]
        H = D.hom_at(str(t - 1), str(t))
        width = hi - lo
        obj_map, mor_map = {}, {}
        for a in range(src.ks[t - 1] + 1):
            img = tuple(imgs[a])
            if len(img) != width:
                raise ValueError(f"segment {t}: image tuple has wrong length")
            obj_map[_enc((a,))] = _enc(img)
            for b in range(a, src.ks[t - 1] + 1):
                if any(p > q for p, q in zip(imgs[a], imgs[b])):
                    raise ValueError(f"segment {t}: images not monotone")
                mor_map[_mid((a,), (b,))] = _mid(tuple(imgs[a]), tuple(imgs[b]))
        He = E.hom_at(str(lo), str(hi))
        seg_maps[(str(t - 1), str(t))] = Functor(H, He, obj_map, mor_map)
    return TwoFunctor.from_segments(D, E, on_objects, seg_maps)


def _collapse_functor(src: Theta2Shape) -> TwoFunctor:
    """The unique functor to the point shape."""
    point = Theta2Shape(0, ())
    return shape_functor(
        src, point, [0] * (src.m + 1), [[()] * (k + 1) for k in src.ks]
    )


# ---------------------------------------------------------------------------
# elementary acyclic cofibrations


def _identity_presentation_map(shape: Theta2Shape) -> PresentationMap:
    W = representable(shape)
    F = shape_functor(
        shape,
        shape,
        list(range(shape.m + 1)),
        [[(a,) for a in range(k + 1)] for k in shape.ks],
    )
    return PresentationMap(W, W, ((0, F, (0,)),))


def vertical_segal(k: int) -> PresentationMap:
    """Spine of k vertically stacked 2-cells into Theta2[1|k]."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return _identity_presentation_map(Theta2Shape(1, (0,)))
    one_one = Theta2Shape(1, (1,))
    one_zero = Theta2Shape(1, (0,))
    target_shape = Theta2Shape(1, (k,))
    # cells: k copies of [1|1] glued along k-1 copies of [1|0]
    cells = [BoxCell(one_one) for _ in range(k)]
    cells += [BoxCell(one_zero) for _ in range(k - 1)]
    arrows = []
    for t in range(k - 1):
        glue = k + t
        # the shared 1-cell is the top of copy t and the bottom of copy t+1
        arrows.append((glue, t, shape_functor(one_zero, one_one, [0, 1], [[(1,)]]), (0,)))
        arrows.append((glue, t + 1, shape_functor(one_zero, one_one, [0, 1], [[(0,)]]), (0,)))
    source = Theta2Presentation(tuple(cells), tuple(arrows))
    target = representable(target_shape)
    cell_map = []
    for t in range(k):
        cell_map.append(
            (0, shape_functor(one_one, target_shape, [0, 1], [[(t,), (t + 1,)]]), (0,))
        )
    for t in range(k - 1):
        cell_map.append(
            (0, shape_functor(one_zero, target_shape, [0, 1], [[(t + 1,)]]), (0,))
        )
    return PresentationMap(source, target, tuple(cell_map))


def horizontal_segal(m: int, ks) -> PresentationMap:
    """Spine of m horizontally composable cells into Theta2[m|ks]."""
    ks = tuple(ks)
    if m < 0 or len(ks) != m:
        raise ValueError("ks must list one entry per segment")
    point = Theta2Shape(0, ())
    if m == 0:
        return _identity_presentation_map(point)
    target_shape = Theta2Shape(m, ks)
    cells = [BoxCell(Theta2Shape(1, (ks[t],))) for t in range(m)]
    cells += [BoxCell(point) for _ in range(m - 1)]
    arrows = []
    for t in range(m - 1):
        glue = m + t
        arrows.append((glue, t, shape_functor(point, Theta2Shape(1, (ks[t],)), [1]), (0,)))
        arrows.append((glue, t + 1, shape_functor(point, Theta2Shape(1, (ks[t + 1],)), [0]), (0,)))
    source = Theta2Presentation(tuple(cells), tuple(arrows))
    target = representable(target_shape)
    cell_map = []
    for t in range(m):
        seg = [[(a,) for a in range(ks[t] + 1)]]
        cell_map.append(
            (0, shape_functor(Theta2Shape(1, (ks[t],)), target_shape, [t, t + 1], seg), (0,))
        )
    for t in range(m - 1):
        cell_map.append((0, shape_functor(point, target_shape, [t + 1]), (0,)))
    return PresentationMap(source, target, tuple(cell_map))


def horizontal_completeness() -> PresentationMap:
    """The inclusion of a point into the 02/13 quotient of Theta2[3|0,0,0]."""
    point = Theta2Shape(0, ())
    edge = Theta2Shape(1, (0,))
    three = Theta2Shape(3, (0, 0, 0))
    leg02 = shape_functor(edge, three, [0, 2], [[(0, 0)]])
    leg13 = shape_functor(edge, three, [1, 3], [[(0, 0)]])
    cells = (
        BoxCell(point),
        BoxCell(three),
        BoxCell(point),
        BoxCell(edge),
        BoxCell(edge),
    )
    arrows = (
        (3, 0, _collapse_functor(edge), (0,)),
        (3, 1, leg02, (0,)),
        (4, 1, leg13, (0,)),
        (4, 2, _collapse_functor(edge), (0,)),
    )
    target = Theta2Presentation(cells, arrows)
    source = representable(point)
    inclusion = shape_functor(point, point, [0])
    return PresentationMap(source, target, ((0, inclusion, (0,)),))


def vertical_completeness() -> PresentationMap:
    """Suspension of the horizontal completeness map: Theta2[1|0] into
    the 02/13 quotient of Theta2[1|3]."""
    edge = Theta2Shape(1, (0,))
    cone = Theta2Shape(1, (1,))
    three = Theta2Shape(1, (3,))
    leg02 = shape_functor(cone, three, [0, 1], [[(0,), (2,)]])
    leg13 = shape_functor(cone, three, [0, 1], [[(1,), (3,)]])
    collapse = shape_functor(cone, edge, [0, 1], [[(0,), (0,)]])
    cells = (
        BoxCell(edge),
        BoxCell(three),
        BoxCell(edge),
        BoxCell(cone),
        BoxCell(cone),
    )
    arrows = (
        (3, 0, collapse, (0,)),
        (3, 1, leg02, (0,)),
        (4, 1, leg13, (0,)),
        (4, 2, collapse, (0,)),
    )
    target = Theta2Presentation(cells, arrows)
    source = representable(edge)
    inclusion = shape_functor(edge, edge, [0, 1], [[(0,)]])
    return PresentationMap(source, target, ((0, inclusion, (0,)),))


def elementary_cofibration(kind: str, *params) -> PresentationMap:
    if kind == "vertical_segal":
        return vertical_segal(*params)
    if kind == "horizontal_segal":
        return horizontal_segal(*params)
    if kind == "horizontal_completeness":
        return horizontal_completeness()
    if kind == "vertical_completeness":
        return vertical_completeness()
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# evaluation (the underlying Theta_2-set, pointwise)


def _monotone_maps(l_src, l_dst):
    return sorted(
        itertools.combinations_with_replacement(range(l_dst + 1), l_src + 1)
    )


def evaluate(W: Theta2Presentation, theta: Theta2Shape, ell: int = 0,
             limit=5_000_000):
    """The value of the presented Theta_2-set at (theta, [ell]).

    Elements are equivalence classes of triples (cell index, functor
    index, level map), quotiented along the diagram arrows.
    """
    D = theta2_object(theta)
    per_cell = []
    keyed = []
    for cell in W.cells:
        fs = enumerate_two_functors(D, theta2_object(cell.shape), limit)
        per_cell.append(fs)
        keyed.append({F.key(): t for t, F in enumerate(fs)})
    uf = _UnionFind()
    for i, cell in enumerate(W.cells):
        for t in range(len(per_cell[i])):
            for mu in _monotone_maps(ell, cell.level):
                uf.add((i, t, mu))
    for i, j, G, lam in W.arrows:
        for t, F in enumerate(per_cell[i]):
            img = keyed[j][F.compose(G).key()]
            for mu in _monotone_maps(ell, W.cells[i].level):
                nu = tuple(lam[v] for v in mu)
                uf.add((j, img, nu))
                uf.union((i, t, mu), (j, img, nu))
    classes = {}
    for elt in uf.parent:
        classes.setdefault(uf.find(elt), []).append(elt)
    return sorted(min(elts) for elts in classes.values())


def evaluate_map(P: PresentationMap, theta: Theta2Shape, ell: int = 0,
                 limit=5_000_000):
    """The induced function on evaluations, as a dict on class reps."""
    D = theta2_object(theta)
    src_classes = evaluate(P.source, theta, ell, limit)
    tgt_classes = evaluate(P.target, theta, ell, limit)

    tgt_fs = {}
    tgt_keyed = {}
    tgt_lookup = {}
    for j, cell in enumerate(P.target.cells):
        tgt_fs[j] = enumerate_two_functors(D, theta2_object(cell.shape), limit)
        tgt_keyed[j] = {F.key(): t for t, F in enumerate(tgt_fs[j])}
    uf = _UnionFind()
    for j, cell in enumerate(P.target.cells):
        for t in range(len(tgt_fs[j])):
            for mu in _monotone_maps(ell, cell.level):
                uf.add((j, t, mu))
    for i, j, G, lam in P.target.arrows:
        src_list = enumerate_two_functors(D, theta2_object(P.target.cells[i].shape), limit)
        for t, F in enumerate(src_list):
            img = tgt_keyed[j][F.compose(G).key()]
            for mu in _monotone_maps(ell, P.target.cells[i].level):
                nu = tuple(lam[v] for v in mu)
                uf.add((j, img, nu))
                uf.union((i, t, mu), (j, img, nu))
    classes = {}
    for elt in uf.parent:
        classes.setdefault(uf.find(elt), []).append(elt)
    canon = {}
    for elts in classes.values():
        rep = min(elts)
        for e in elts:
            canon[e] = rep

    src_fs = {}
    for i, cell in enumerate(P.source.cells):
        src_fs[i] = enumerate_two_functors(D, theta2_object(cell.shape), limit)
    out = {}
    for i, t, mu in src_classes:
        j, G, lam = P.cell_map[i]
        img = tgt_keyed[j][src_fs[i][t].compose(G).key()]
        nu = tuple(lam[v] for v in mu)
        out[(i, t, mu)] = canon[(j, img, nu)]
    assert set(out.values()) <= set(tgt_classes)
    return out


# ---------------------------------------------------------------------------
# the comparison functor L


def _simplex_ref(vertex_seq):
    """Reference of the simplex with the given monotone vertex sequence
    inside a standard simplex."""
    distinct = sorted(set(vertex_seq))
    gid = "".join(str(v) for v in distinct)
    word = tuple(
        p for p in range(len(vertex_seq) - 2, -1, -1)
        if vertex_seq[p] == vertex_seq[p + 1]
    )
    return (gid, word)


def simplex_map(l_src, l_dst, images, variant="sharp", bound=None) -> MSSetMap:
    """Map of standard simplices induced by monotone vertex images."""
    X = standard_simplex(l_src, variant, bound=bound)
    Y = standard_simplex(l_dst, variant, bound=bound)
    assignment = {}
    for n in sorted(X.gens):
        for g in X.gens_at(n):
            verts = tuple(int(c) for c in g)
            assignment[g] = _simplex_ref(tuple(images[v] for v in verts))
    return MSSetMap(X, Y, assignment)


def _box_nerve(cell: BoxCell, bound):
    return product(
        rs_nerve(theta2_object(cell.shape), bound),
        standard_simplex(cell.level, "sharp", bound=bound),
    )


def _box_map(G: TwoFunctor, lam, l_src, l_dst, bound) -> MSSetMap:
    nf = nerve_map(G, "rs", bound)
    sf = simplex_map(l_src, l_dst, lam, "sharp", bound)
    return product_map(nf, sf)


def apply_L(W: Theta2Presentation, bound=DEFAULT_BOUND):
    """L of a presentation: colimit of nerve-times-simplex blocks."""
    colim, _ = _apply_L_with_legs(W, bound)
    return colim


def _apply_L_with_legs(W: Theta2Presentation, bound):
    nodes = [_box_nerve(cell, bound) for cell in W.cells]
    arrows = []
    for i, j, G, lam in W.arrows:
        f = _box_map(G, lam, W.cells[i].level, W.cells[j].level, bound)
        # product_map rebuilds the product objects; re-anchor on ours
        arrows.append((i, j, MSSetMap(nodes[i], nodes[j], f.assignment)))
    return colimit(nodes, arrows, bound=bound)


def apply_L_map(P: PresentationMap, bound=DEFAULT_BOUND) -> MSSetMap:
    src, src_legs = _apply_L_with_legs(P.source, bound)
    tgt, tgt_legs = _apply_L_with_legs(P.target, bound)
    node_maps = []
    for i, cell in enumerate(P.source.cells):
        j, G, lam = P.cell_map[i]
        node_maps.append(
            (j, _box_map(G, lam, cell.level, P.target.cells[j].level, bound))
        )
    assignment = {}
    for i, leg in enumerate(src_legs):
        j, f = node_maps[i]
        for g, ref in leg.assignment.items():
            if ref[1]:
                continue
            assignment.setdefault(ref[0], tgt_legs[j].apply(f.assignment[g]))
    missing = [
        g for n in src.gens for g in src.gens_at(n) if g not in assignment
    ]
    if missing:
        raise RuntimeError(f"colimit generators without preimage: {missing}")
    return MSSetMap(src, tgt, assignment)


def apply_R_at(X: MarkedSSet, theta: Theta2Shape, ell: int = 0,
               limit=2_000_000):
    """Pointwise right adjoint: maps from the L-image of a box cell."""
    block = _box_nerve(BoxCell(theta, ell), X.bound)
    return enumerate_maps(block, X, limit)


# ---------------------------------------------------------------------------
# hom restriction along d: (i, j) -> [i|j,...,j]


def d_restriction(theta: Theta2Shape, i: int, j: int, limit=5_000_000):
    """Hom from [i|j,...,j] by enumeration and by the fiber-product
    count over chains of objects; returns (functors, formula count)."""
    if i < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    shape = Theta2Shape(i, (j,) * i)
    E = theta2_object(theta)
    fs = enumerate_two_functors(theta2_object(shape), E, limit)
    homs = {}
    for x in E.objects:
        for y in E.objects:
            H = E.hom_at(x, y)
            homs[(x, y)] = chain_count(H, j) if H is not None else 0
    total = 0
    for chain in itertools.product(sorted(E.objects), repeat=i + 1):
        term = 1
        for t in range(i):
            term *= homs[(chain[t], chain[t + 1])]
        total += term
    return fs, total


# ---------------------------------------------------------------------------
# JSON (schema theta/1)


def _functor_to_json(F: TwoFunctor, src_shape, dst_shape):
    return {
        "source": str(src_shape),
        "target": str(dst_shape),
        "on_objects": dict(sorted(F.on_objects.items())),
        "hom": {
            f"{x}|{y}": {
                "one": dict(sorted(om.items())),
                "two": dict(sorted(mm.items())),
            }
            for (x, y), (om, mm) in sorted(F.hom_maps.items())
        },
    }


def parse_shape(text: str) -> Theta2Shape:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"bad shape {text!r}")
    body = body[1:-1]
    if "|" in body:
        m_str, ks_str = body.split("|", 1)
        m = int(m_str)
        ks = tuple(int(t) for t in ks_str.split(",")) if ks_str.strip() else ()
    else:
        m, ks = int(body), ()
        if m != 0:
            # plain "[k]" is the 1-category [k], i.e. the shape [k|0,...,0]
            ks = (0,) * m
    return Theta2Shape(m, ks)


def _functor_from_json(data) -> TwoFunctor:
    src = theta2_object(parse_shape(data["source"]))
    dst = theta2_object(parse_shape(data["target"]))
    hom_maps = {
        tuple(k.split("|")): (dict(v["one"]), dict(v["two"]))
        for k, v in data["hom"].items()
    }
    return TwoFunctor.from_tables(src, dst, dict(data["on_objects"]), hom_maps)


def presentation_to_json(W: Theta2Presentation) -> dict:
    return {
        "schema": "theta/1",
        "cells": [
            {"shape": str(c.shape), "level": c.level} for c in W.cells
        ],
        "arrows": [
            {
                "src": i,
                "dst": j,
                "functor": _functor_to_json(
                    G, W.cells[i].shape, W.cells[j].shape
                ),
                "level_map": list(lam),
            }
            for i, j, G, lam in W.arrows
        ],
    }


def presentation_from_json(data: dict) -> Theta2Presentation:
    if data.get("schema") != "theta/1":
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    cells = tuple(
        BoxCell(parse_shape(c["shape"]), c["level"]) for c in data["cells"]
    )
    arrows = tuple(
        (a["src"], a["dst"], _functor_from_json(a["functor"]),
         tuple(a["level_map"]))
        for a in data["arrows"]
    )
    return Theta2Presentation(cells, arrows)
