"""Bundled surface corpus and target generators.

Polygons are generated; the punctured and orbifold fixtures are written out
literally.  All triangles list their sides in clockwise order; the loader
validates orientation, so a wrong listing fails fast.
"""

from __future__ import annotations

from .orbifold import (
    CrossingRecord,
    IdealTriangulation,
    SurfaceError,
    parse_surface,
    resolve_crossing,
)


def polygon_surface(n: int) -> str:
    """Disk with n marks, fan triangulation from the first vertex."""
    if n < 4:
        raise ValueError("need at least 4 marks")
    marks = [f"P{i}" for i in range(1, n + 1)]
    lines = ["boundary 1: " + " ".join(marks)]
    for i in range(3, n):
        lines.append(f"arc d1{i} P1 P{i}")
    for i in range(2, n):
        left = f"d1{i}" if i > 2 else "1:P1-P2"
        right = f"d1{i + 1}" if i + 1 < n else f"1:P{n}-P1"
        lines.append(f"triangle {left} 1:P{i}-P{i + 1} {right}")
    return "\n".join(lines) + "\n"


def punctured_polygon_surface(k: int) -> str:
    """Once-punctured k-gon with the star triangulation and the full chord
    target list c<i>_<j> (crossing the spokes strictly between i and j,
    walking clockwise)."""
    if k < 2:
        raise ValueError("need at least 2 marks")
    marks = [f"M{i}" for i in range(1, k + 1)]
    lines = ["boundary 1: " + " ".join(marks), "puncture P"]
    for i in range(1, k + 1):
        lines.append(f"arc r{i} M{i} P")
    for i in range(1, k + 1):
        j = i % k + 1
        lines.append(f"triangle 1:M{i}-M{j} r{j} r{i}")
    for i in range(1, k + 1):
        for step in range(2, k):
            j = (i - 1 + step) % k + 1
            spokes = [f"r{(i - 1 + s) % k + 1}" for s in range(1, step)]
            lines.append(f"arc c{i}_{j} M{i} M{j}")
            lines.append(f"crossing c{i}_{j}: " + " ".join(spokes))
    return "\n".join(lines) + "\n"


TWICE_PUNCTURED_DIGON = """\
boundary 1: A B
puncture P
puncture Q
arc rAP A P
arc rAQ A Q
arc rBP B P
arc rBQ B Q
arc rPQ P Q
triangle rAQ rPQ rAP
triangle rBP rPQ rBQ
triangle rAP rBP 1:B-A
triangle 1:A-B rBQ rAQ
# chord between the marks, separating the two punctures
arc cAB A B
crossing cAB: rPQ
# loop based at P around Q
arc lpq P P
crossing lpq: rAQ rBQ
"""

ANNULUS = """\
boundary 3: A
boundary 4: B
arc 1 A B
arc 2 A B
triangle 1 3:A-A 2
triangle 1 4:B-B 2
# the curve winding once more than arc 1 does
arc g A B
crossing g: 2 1 2
# winding twice
arc g2 A B
crossing g2: 2 1 2 1 2
"""

ORBIFOLD_DISK_C2 = """\
boundary 1: A B C
orbifold O weight 1/2
arc a A C
arc p A O pending
triangle 1:A-B 1:B-C a
triangle a 1:C-A p
# the other pending arc, through its companion loop at C
arc pc C O pending
crossing pc: p
# the other chord
arc a2 B C
crossing a2: a
"""

PUNCTURED_ORBIFOLD_DISK = """\
boundary 1: A B
puncture P
orbifold O weight 1/2
arc rA A P
arc rB B P
arc c A B
arc pd B O pending
triangle rA rB 1:B-A
triangle c rB rA
triangle 1:A-B pd c
# pending arc from A, via its companion loop
arc pda A O pending
crossing pda: pd
# chord separating P from O the other way
arc c2 A B
crossing c2: rB | via 1 0
"""

FIXTURES = {
    "twice-punctured-digon": TWICE_PUNCTURED_DIGON,
    "annulus": ANNULUS,
    "orbifold-disk-c2": ORBIFOLD_DISK_C2,
    "punctured-orbifold-disk": PUNCTURED_ORBIFOLD_DISK,
}
for _n in range(4, 9):
    FIXTURES[f"polygon{_n}"] = polygon_surface(_n)
for _k in range(2, 6):
    FIXTURES[f"punctured{_k}"] = punctured_polygon_surface(_k)


def load_fixture(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}")
    return parse_surface(FIXTURES[name])


# ---------------------------------------------------------------------------
# chord records on pure disks (any triangulation of a polygon fixture)
# ---------------------------------------------------------------------------

def polygon_chord_record(tri: IdealTriangulation, u: str, v: str,
                         name: str | None = None) -> CrossingRecord:
    """Crossing record of the chord u-v against any triangulation of a disk
    with one boundary component and no punctures.

    The crossed arcs are the chords separating u from v, ordered by nesting
    toward u; this is exact for disks since chords of a triangulation are
    pairwise non-crossing."""
    cyc = tri.surface.boundaries[0]
    pos = {m: i for i, m in enumerate(cyc)}
    n = len(cyc)

    def separates(chord_ends, a, b):
        c, d = sorted((pos[e] for e in chord_ends))
        ia, ib = pos[a], pos[b]
        return (c < ia < d) != (c < ib < d)

    crossing = []
    for a in tri.arcs:
        ends = tri.arc(a).ends
        if u in ends or v in ends:
            continue
        if separates(ends, u, v):
            crossing.append(a)

    def before(x, y):
        # x is crossed first iff x separates u from both ends of y
        ex = tri.arc(x).ends
        ey = tri.arc(y).ends
        return separates(ex, u, ey[0]) and separates(ex, u, ey[1])

    import functools
    crossing.sort(key=functools.cmp_to_key(lambda x, y: -1 if before(x, y) else 1))
    label = name or f"{u}-{v}"
    if not crossing:
        for a in tri.arcs:
            if set(tri.arc(a).ends) == {u, v}:
                return CrossingRecord(label, u, v, (), (), False)
        raise SurfaceError(f"{u}-{v} crosses nothing and is not an arc of the triangulation")
    return resolve_crossing(tri, label, crossing) if label in tri.surface.arcs else _resolve_unregistered(tri, label, u, v, crossing)


def _resolve_unregistered(tri, label, u, v, crossing):
    from dataclasses import replace
    from .orbifold import Arc
    surface2 = replace(tri.surface, arcs={**tri.surface.arcs, label: Arc(label, (u, v))})
    tri2 = IdealTriangulation(surface2, tri.arcs, tri.triangles)
    rec = resolve_crossing(tri2, label, crossing)
    return rec
