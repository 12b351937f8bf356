"""Combinatorial marked orbifolds and their ideal triangulations.

Everything is slot-level: a triangle is a clockwise-ordered triple of side
slots, each slot naming an arc.  Ordinary interior arcs fill two slots,
boundary segments one, pending arcs one (their face is the orbifold quotient
of a quadrilateral), and the radius of a self-folded triangle fills two
slots of the same triangle.  No embedded geometry: curves enter as explicit
crossing records against a triangulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .seeds import Matrix, mat


class SurfaceError(Exception):
    pass


class RadiusNotFlippable(SurfaceError):
    pass


# ---------------------------------------------------------------------------
# points and arcs
# ---------------------------------------------------------------------------

MARK = "mark"
PUNCTURE = "puncture"
ORBIFOLD_POINT = "orbifold"


@dataclass(frozen=True)
class Arc:
    name: str
    ends: tuple          # (point, point)
    boundary: bool = False
    pending: bool = False

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class TaggedArc:
    """Arc with plain/notched labels keyed by puncture name.

    Only endpoints that are punctures may carry a notch; a loop is notched
    at its base either at both ends or neither, so puncture-keyed tags are
    enough."""

    arc: str
    notched: frozenset = frozenset()

    def toggled(self, q: str) -> "TaggedArc":
        s = set(self.notched)
        if q in s:
            s.remove(q)
        else:
            s.add(q)
        return TaggedArc(self.arc, frozenset(s))


@dataclass(frozen=True)
class OrbifoldSurface:
    points: dict
    boundaries: tuple         # tuple of tuples of mark names, clockwise
    arcs: dict                # name -> Arc (all declared arcs incl. targets)
    crossing_specs: dict = field(default_factory=dict)

    def kind(self, point: str) -> str:
        return self.points[point]

    def punctures(self):
        return sorted(p for p, k in self.points.items() if k == PUNCTURE)

    def orbifold_points(self):
        return sorted(p for p, k in self.points.items() if k == ORBIFOLD_POINT)

    def weight(self, arc_name: str) -> int:
        return 2 if self.arcs[arc_name].pending else 1


# ---------------------------------------------------------------------------
# triangulations
# ---------------------------------------------------------------------------

Slot = tuple  # (triangle index, side index 0..2)


@dataclass(frozen=True)
class IdealTriangulation:
    surface: OrbifoldSurface
    arcs: tuple               # names of non-boundary arcs, fixed order
    triangles: tuple          # tuple of (a, b, c) side triples, clockwise
    corners: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "corners", tuple(
            _resolve_corners(self.surface, tri) for tri in self.triangles))
        self._validate()

    # -- basic queries --------------------------------------------------

    def arc(self, name: str) -> Arc:
        return self.surface.arcs[name]

    def weight(self, name: str) -> int:
        return self.surface.weight(name)

    def slots_of(self, name: str):
        out = []
        for t, tri in enumerate(self.triangles):
            for s, a in enumerate(tri):
                if a == name:
                    out.append((t, s))
        return out

    def slot_arc(self, slot: Slot) -> str:
        return self.triangles[slot[0]][slot[1]]

    def other_side(self, slot: Slot) -> Slot:
        """The slot glued to `slot` across its arc.

        Pending arcs are glued to themselves (the two banks of the same
        slot); radii pair the two slots of the self-folded triangle."""
        name = self.slot_arc(slot)
        arc = self.arc(name)
        if arc.boundary:
            raise SurfaceError(f"boundary segment {name} has no other side")
        if arc.pending:
            return slot
        a, b = self.slots_of(name)
        return b if slot == a else a

    def is_self_folded_radius(self, name: str) -> bool:
        slots = self.slots_of(name)
        return len(slots) == 2 and slots[0][0] == slots[1][0]

    def loop_of_radius(self, name: str) -> str:
        (t, _), _ = self.slots_of(name)
        for a in self.triangles[t]:
            if a != name:
                return a
        raise SurfaceError(f"{name} is not a self-folded radius")

    def self_folded_triangles(self):
        out = []
        for t, tri in enumerate(self.triangles):
            for s in range(3):
                if tri[s] == tri[(s + 1) % 3]:
                    out.append(t)
                    break
        return out

    def is_self_folded_triangle(self, t: int) -> bool:
        tri = self.triangles[t]
        return len(set(tri)) < 3 and not any(
            self.arc(a).pending for a in tri)

    def radius_of_triangle(self, t: int) -> Optional[str]:
        tri = self.triangles[t]
        for s in range(3):
            if tri[s] == tri[(s + 1) % 3]:
                return tri[s]
        return None

    def mutable_arcs(self):
        return self.arcs

    def boundary_arcs(self):
        return tuple(sorted(a for a, arc in self.surface.arcs.items()
                            if arc.boundary and any(a in tri for tri in self.triangles)))

    def label_order(self):
        """Mutable arcs first (declared order) then boundary segments."""
        return tuple(self.arcs) + self.boundary_arcs()

    # -- validation ------------------------------------------------------

    def _validate(self):
        counts = {}
        for tri in self.triangles:
            if len(tri) != 3:
                raise SurfaceError("triangles must list three sides")
            for a in tri:
                if a not in self.surface.arcs:
                    raise SurfaceError(f"unknown arc {a!r} in triangle")
                counts[a] = counts.get(a, 0) + 1
        for a in self.arcs:
            arc = self.arc(a)
            expect = 1 if arc.pending else 2
            if counts.get(a, 0) != expect:
                raise SurfaceError(
                    f"arc {a} fills {counts.get(a, 0)} slots, expected {expect}")
        for a, c in counts.items():
            if self.surface.arcs[a].boundary and c != 1:
                raise SurfaceError(f"boundary segment {a} fills {c} slots")
        # orientation: an ordinary interior arc is traversed in opposite
        # directions by its two triangles
        for a in self.arcs:
            arc = self.arc(a)
            if arc.pending or arc.is_loop:
                continue
            slots = self.slots_of(a)
            if len(slots) == 2 and slots[0][0] != slots[1][0]:
                d0 = self._slot_direction(slots[0])
                d1 = self._slot_direction(slots[1])
                if d0 == d1:
                    raise SurfaceError(
                        f"triangles disagree on the orientation across {a}")

    def _slot_direction(self, slot: Slot):
        t, s = slot
        cs = self.corners[t]
        return (cs[(s - 1) % 3], cs[s])

    # -- signed adjacency -------------------------------------------------

    def loop_substitute(self, name: str) -> str:
        return self.loop_of_radius(name) if self.is_self_folded_radius(name) else name

    def signed_adjacency(self):
        """(B over all label rows x mutable columns, D = diag of weights)."""
        labels = self.label_order()
        idx = {a: i for i, a in enumerate(labels)}
        raw = {}
        for t, tri in enumerate(self.triangles):
            if self.is_self_folded_triangle(t):
                continue
            for s in range(3):
                tau, nxt = tri[s], tri[(s + 1) % 3]
                # b[tau][nxt] gains +w(nxt) since nxt follows tau clockwise,
                # and b[nxt][tau] gains -w(tau)
                raw[(tau, nxt)] = raw.get((tau, nxt), 0) + self.weight(nxt)
                raw[(nxt, tau)] = raw.get((nxt, tau), 0) - self.weight(tau)

        def entry(r, c):
            return raw.get((self.loop_substitute(r), self.loop_substitute(c)), 0)

        b = [[entry(r, c) for c in self.arcs] for r in labels]
        d = tuple(self.weight(a) for a in self.arcs)
        n = len(self.arcs)
        for i in range(n):
            for j in range(n):
                if d[i] * b[i][j] != -d[j] * b[j][i]:
                    raise SurfaceError("D*B is not skew-symmetric; check triangle orientations")
        return mat(b), d

    # -- flips -------------------------------------------------------------

    def quadrilateral_of(self, alpha: str):
        """(a1, a2, a3, a4): sides of alpha's quadrilateral, clockwise, as
        (slot) references; repeats allowed for self-folded and pending data."""
        if self.is_self_folded_radius(alpha):
            raise RadiusNotFlippable(alpha)
        arc = self.arc(alpha)
        slots = self.slots_of(alpha)
        if arc.pending:
            (t, s), = slots
            tri = self.triangles[t]
            a1, a2 = tri[(s + 1) % 3], tri[(s + 2) % 3]
            return (a1, a2, a1, a2)
        (t1, s1), (t2, s2) = slots
        tri1, tri2 = self.triangles[t1], self.triangles[t2]
        a1, a2 = tri1[(s1 + 1) % 3], tri1[(s1 + 2) % 3]
        a3, a4 = tri2[(s2 + 1) % 3], tri2[(s2 + 2) % 3]
        return (a1, a2, a3, a4)

    def flip(self, alpha: str, new_name: str | None = None):
        """Flip at alpha; returns (new triangulation, new arc name,
        triangle correspondence old index -> new index)."""
        if self.is_self_folded_radius(alpha):
            raise RadiusNotFlippable(alpha)
        arc = self.arc(alpha)
        if new_name is None:
            new_name = fresh_name(alpha, self.surface.arcs)
        new_arc_ends = self._flipped_ends(alpha)
        surface2 = replace(
            self.surface,
            arcs={**self.surface.arcs,
                  new_name: Arc(new_name, new_arc_ends, pending=arc.pending)},
        )
        slots = self.slots_of(alpha)
        if arc.pending:
            (t, s), = slots
            tri = self.triangles[t]
            a1, a2 = tri[(s + 1) % 3], tri[(s + 2) % 3]
            new_tri = (new_name, a2, a1)
            tris = list(self.triangles)
            tris[t] = new_tri
            arcs2 = tuple(new_name if a == alpha else a for a in self.arcs)
            t2 = IdealTriangulation(surface2, arcs2, tuple(tris))
            corr = {i: i for i in range(len(tris))}
            return t2, new_name, corr
        (t1, s1), (t2, s2) = slots
        tri1, tri2 = self.triangles[t1], self.triangles[t2]
        a1, a2 = tri1[(s1 + 1) % 3], tri1[(s1 + 2) % 3]
        a3, a4 = tri2[(s2 + 1) % 3], tri2[(s2 + 2) % 3]
        trA = (new_name, a2, a3)
        trB = (new_name, a4, a1)
        tris = list(self.triangles)
        tris[t1] = trA
        tris[t2] = trB
        arcs2 = tuple(new_name if a == alpha else a for a in self.arcs)
        t_new = IdealTriangulation(surface2, arcs2, tuple(tris))
        corr = {i: i for i in range(len(tris))}
        return t_new, new_name, corr

    def _flipped_ends(self, alpha: str):
        arc = self.arc(alpha)
        slots = self.slots_of(alpha)
        if arc.pending:
            (t, s), = slots
            # other pending arc inside the same orbifold digon: from the
            # corner opposite the pending slot to the orbifold point
            o = arc.ends[1] if self.surface.kind(arc.ends[1]) == ORBIFOLD_POINT else arc.ends[0]
            opp = self.corners[t][(s + 1) % 3]
            return (opp, o)
        (t1, s1), (t2, s2) = slots
        c1 = self.corners[t1][(s1 + 1) % 3]
        c2 = self.corners[t2][(s2 + 1) % 3]
        return (c1, c2)

    # -- tagging -----------------------------------------------------------

    def tagged(self):
        """The corresponding tagged triangulation: self-folded loops become
        the radius notched at the enclosed puncture."""
        out = []
        for a in self.arcs:
            if self.is_self_folded_radius(a):
                out.append(TaggedArc(a))
                continue
            radius = self._radius_enclosed_by(a)
            if radius is not None:
                q = self._puncture_inside(a, radius)
                out.append(TaggedArc(radius, frozenset({q})))
            else:
                out.append(TaggedArc(a))
        return tuple(out)

    def _radius_enclosed_by(self, loop: str):
        for t in self.self_folded_triangles():
            tri = self.triangles[t]
            r = self.radius_of_triangle(t)
            if loop in tri and loop != r:
                return r
        return None

    def _puncture_inside(self, loop: str, radius: str) -> str:
        base = self.arc(loop).ends[0]
        for e in self.arc(radius).ends:
            if e != base:
                return e
        return self.arc(radius).ends[0]

    def notched_punctures(self):
        """Punctures at which the tagged triangulation has a notched arc."""
        out = set()
        for ta in self.tagged():
            out |= ta.notched
        return out


def fresh_name(base: str, existing) -> str:
    stem = base.rstrip("'")
    cand = base + "'"
    while cand in existing:
        cand += "'"
    if len(cand) - len(stem) > 8:
        i = 0
        while f"{stem}~{i}" in existing:
            i += 1
        cand = f"{stem}~{i}"
    return cand


def _resolve_corners(surface: OrbifoldSurface, tri) -> tuple:
    """Corner i sits between side i and side i+1 on the clockwise circuit.

    Solved by backtracking against each side's endpoint multiset; a pending
    side bounces at the orbifold point, so both of its circuit corners are
    its marked endpoint."""
    sides = [surface.arcs[a] for a in tri]

    def side_constraint(i, c_prev, c_here) -> bool:
        arc = sides[i]
        if arc.pending:
            m = arc.ends[0] if surface.kind(arc.ends[0]) != ORBIFOLD_POINT else arc.ends[1]
            return c_prev == m and c_here == m
        return sorted((c_prev, c_here)) == sorted(arc.ends)

    cands = []
    for arc in sides:
        if arc.pending:
            m = arc.ends[0] if surface.kind(arc.ends[0]) != ORBIFOLD_POINT else arc.ends[1]
            cands.append((m,))
        else:
            cands.append(tuple(dict.fromkeys(arc.ends)))

    # corner i is an endpoint of side i and of side i+1
    for c0 in cands[0]:
        for c1 in cands[1]:
            for c2 in cands[2]:
                cs = (c0, c1, c2)
                # side i between corners i-1 and i
                if all(side_constraint(i, cs[(i - 1) % 3], cs[i]) for i in range(3)):
                    return cs
    raise SurfaceError(f"cannot resolve corners of triangle {tri}")


# ---------------------------------------------------------------------------
# puncture fans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FanSector:
    triangle: int
    corner: int           # corner index equal to the puncture

    # sides: incoming spoke = side corner, outgoing = corner+1, third = corner+2


@dataclass(frozen=True)
class PunctureFan:
    puncture: str
    sectors: tuple        # FanSector list, clockwise, anchored

    def __len__(self):
        return len(self.sectors)


def fan_sectors_at(tri: IdealTriangulation, q: str):
    """All (triangle, corner) sectors around q, unanchored."""
    out = []
    for t, cs in enumerate(tri.corners):
        for c, p in enumerate(cs):
            if p == q:
                out.append(FanSector(t, c))
    return out


def sector_sides(tri: IdealTriangulation, sec: FanSector):
    """(incoming spoke slot, outgoing spoke slot, third slot)."""
    c = sec.corner
    return ((sec.triangle, c), (sec.triangle, (c + 1) % 3), (sec.triangle, (c + 2) % 3))


def next_sector(tri: IdealTriangulation, sec: FanSector) -> FanSector:
    _, out_slot, _ = sector_sides(tri, sec)
    t2, s2 = tri.other_side(out_slot)
    return FanSector(t2, s2)


def puncture_fan(tri: IdealTriangulation, q: str, anchor: FanSector) -> PunctureFan:
    """Walk the fan clockwise starting at `anchor` (which becomes sector 1)."""
    if tri.surface.kind(q) != PUNCTURE:
        raise SurfaceError(f"{q} is not a puncture")
    all_secs = set(fan_sectors_at(tri, q))
    if anchor not in all_secs:
        raise SurfaceError("anchor sector is not incident to the puncture")
    seq = [anchor]
    cur = next_sector(tri, anchor)
    guard = 0
    while cur != anchor:
        seq.append(cur)
        cur = next_sector(tri, cur)
        guard += 1
        if guard > 4 * len(all_secs) + 8:
            raise SurfaceError("fan walk does not close up")
    if len(seq) != len(all_secs):
        raise SurfaceError("fan walk missed sectors; inconsistent data")
    return PunctureFan(q, tuple(seq))


def fan_spoke(tri: IdealTriangulation, fan: PunctureFan, j: int) -> str:
    """tau_j: the spoke between sector j and j+1 (1-based, tau_0 = tau_t)."""
    t = len(fan)
    j = ((j - 1) % t)
    sec = fan.sectors[j]
    return tri.slot_arc(sector_sides(tri, sec)[1])


def fan_third(tri: IdealTriangulation, fan: PunctureFan, j: int) -> str:
    sec = fan.sectors[(j - 1) % len(fan)]
    return tri.slot_arc(sector_sides(tri, sec)[2])


# ---------------------------------------------------------------------------
# crossing records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingRecord:
    """An oriented curve against a triangulation, slot-resolved."""

    name: str
    start: str
    end: str
    slots: tuple            # crossed slots, in order; slot j lies in both
    triangles: tuple        # triangle indices Delta_0 .. Delta_c
    pending_target: bool = False   # record describes sl(target)

    @property
    def c(self) -> int:
        return len(self.slots)

    def crossed_arcs(self, tri: IdealTriangulation):
        return tuple(tri.slot_arc(s) for s in self.slots)


def record_for_arc_in_t(tri: IdealTriangulation, name: str) -> CrossingRecord:
    arc = tri.arc(name)
    return CrossingRecord(name, arc.ends[0], arc.ends[1], (), (), False)


def resolve_crossing(tri: IdealTriangulation, name: str, crossed: Sequence[str],
                     via: Sequence[int] | None = None) -> CrossingRecord:
    """Infer slot-level crossing data from an ordered list of crossed arc
    names; `via` optionally pins the triangle sequence when inference is
    ambiguous."""
    arc = tri.arc(name)
    start, end = arc.ends
    pending_target = arc.pending
    if pending_target:
        # the machinery expands a pending arc through its companion loop,
        # based at the marked endpoint
        if tri.surface.kind(start) == ORBIFOLD_POINT:
            start, end = end, start
        end = start
    if not crossed:
        return CrossingRecord(name, start, end, (), (), pending_target)

    c = len(crossed)
    states = []
    # initial states: (triangle containing `start` as a corner adjacent to
    # crossed[0]) with the exit slot
    for t, tris in enumerate(tri.triangles):
        if via is not None and via[0] != t:
            continue
        for s in range(3):
            if tris[s] != crossed[0]:
                continue
            opp = tri.corners[t][(s + 1) % 3]
            if opp == start:
                states.append(((t, s), [t]))
    results = []
    for exit_slot, tri_seq in states:
        _extend_walk(tri, crossed, via, 1, exit_slot, tri_seq, [exit_slot], end, results)
    if not results:
        raise SurfaceError(f"no consistent crossing data for {name}: {crossed}")
    if len(results) > 1:
        raise SurfaceError(
            f"crossing data for {name} is ambiguous; give a 'via' triangle list")
    slots, tri_seq = results[0]
    return CrossingRecord(name, start, end, tuple(slots), tuple(tri_seq), pending_target)


def _extend_walk(tri, crossed, via, j, entry_slot, tri_seq, slots, end, results):
    """Depth-first continuation of the crossing walk past crossing j-1."""
    # step into the triangle on the other side of entry_slot
    t2, s2 = tri.other_side(entry_slot)
    seq = tri_seq + [t2]
    if via is not None and via[j] != t2:
        return
    if j == len(crossed):
        # the endpoint must be the corner of t2 opposite the entry slot
        if tri.corners[t2][(s2 + 1) % 3] == end:
            results.append((slots, seq))
        return
    tris = tri.triangles[t2]
    for s in range(3):
        if s == s2 and not tri.arc(tris[s]).pending:
            continue  # no U-turn through the same slot
        if tris[s] == crossed[j]:
            _extend_walk(tri, crossed, via, j + 1, (t2, s), seq, slots + [(t2, s)], end, results)


# ---------------------------------------------------------------------------
# tag-change at a puncture
# ---------------------------------------------------------------------------

def tag_change_sigma(tagged: Sequence[TaggedArc], q: str, tri: IdealTriangulation) -> tuple:
    """Toggle the tags at q across a tagged arc collection.

    Arcs not incident to q are untouched; toggling is keyed by the arc's
    endpoints, so the map is an involution."""
    out = []
    for ta in tagged:
        if q in tri.arc(ta.arc).ends:
            out.append(ta.toggled(q))
        else:
            out.append(ta)
    return tuple(out)


# ---------------------------------------------------------------------------
# flip paths
# ---------------------------------------------------------------------------

def triangulation_key(tri: IdealTriangulation):
    """Canonical key for a triangulation, independent of interior arc names.

    Relabels triangles by a breadth-first walk of the face-adjacency graph
    rooted at a boundary-anchored slot, and records per side either the
    boundary segment name, a pending marker, or the partner slot under the
    relabeling, together with corner point names.  Stable under renaming of
    flipped arcs, so flip-graph searches deduplicate correctly."""
    roots = []
    for t, tr in enumerate(tri.triangles):
        for s in range(3):
            if tri.arc(tr[s]).boundary:
                roots.append((tr[s], t, s))
    if roots:
        roots = [min(roots)[1:]]
    else:
        roots = [(t, s) for t in range(len(tri.triangles)) for s in range(3)]
    best = None
    for root in roots:
        sig = _walk_signature(tri, root)
        if best is None or sig < best:
            best = sig
    return best


def _walk_signature(tri: IdealTriangulation, root):
    order = {root[0]: 0}
    rot = {root[0]: root[1]}
    queue = [root[0]]
    while queue:
        t = queue.pop(0)
        for ds in range(3):
            s = (rot[t] + ds) % 3
            a = tri.triangles[t][s]
            arc = tri.arc(a)
            if arc.boundary or arc.pending:
                continue
            t2, s2 = tri.other_side((t, s))
            if t2 not in order:
                order[t2] = len(order)
                rot[t2] = s2
                queue.append(t2)
    rows = []
    inv = sorted(order, key=order.get)
    for t in inv:
        row = []
        for ds in range(3):
            s = (rot[t] + ds) % 3
            a = tri.triangles[t][s]
            arc = tri.arc(a)
            if arc.boundary:
                row.append(("b", a))
            elif arc.pending:
                row.append(("p", arc.ends[0], arc.ends[1]))
            else:
                t2, s2 = tri.other_side((t, s))
                row.append(("i", order[t2], (s2 - rot[t2]) % 3))
            row.append(tri.corners[t][(rot[t] + ds) % 3])
        rows.append(tuple(row))
    return tuple(rows)


def has_self_folded_at(tri: IdealTriangulation, punctures) -> bool:
    """Whether some self-folded triangle encloses one of the punctures."""
    for t in tri.self_folded_triangles():
        r = tri.radius_of_triangle(t)
        loop = tri.loop_of_radius(r)
        base = tri.arc(loop).ends[0]
        enclosed = [e for e in tri.arc(r).ends if e != base]
        inner = enclosed[0] if enclosed else base
        if inner in punctures:
            return True
    return False


def flip_path(t1: IdealTriangulation, t2_key, forbidden_punctures=frozenset(),
              node_cap: int = 10 ** 6):
    """Breadth-first flip word from t1 to the triangulation with canonical
    key `t2_key` (or satisfying the predicate), avoiding self-folded
    triangles at the forbidden punctures along the way."""
    if callable(t2_key):
        goal = t2_key
    else:
        goal = lambda tri: triangulation_key(tri) == t2_key
    if has_self_folded_at(t1, forbidden_punctures):
        raise SurfaceError("start triangulation violates the forbidden set")
    start = (t1, ())
    if goal(t1):
        return ()
    seen = {triangulation_key(t1)}
    queue = [start]
    while queue:
        cur, word = queue.pop(0)
        for a in cur.arcs:
            if cur.is_self_folded_radius(a):
                continue
            nxt, _, _ = cur.flip(a)
            if has_self_folded_at(nxt, forbidden_punctures):
                continue
            key = triangulation_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > node_cap:
                raise SurfaceError("flip graph search exceeded the node cap")
            w2 = word + (a,)
            if goal(nxt):
                return w2
            queue.append((nxt, w2))
    raise SurfaceError("no flip path found under the given constraints")


# ---------------------------------------------------------------------------
# surface file parsing
# ---------------------------------------------------------------------------

def parse_surface(text: str):
    """Parse the line-oriented surface format.

        boundary 1: A B C
        puncture P
        orbifold O weight 1/2
        arc r1 A P
        arc g A C [pending] [loop]
        triangle b1:A-B r1 r2 [selffolded radius=r1]
        crossing g: r1 r2 ... [| via 0 2 1]

    Boundary segments are named '<k>:<from>-<to>' per boundary component k,
    walking the marks clockwise.  Returns (surface, triangulation).
    """
    points = {}
    boundaries = []
    arcs = {}
    triangles = []
    crossing_specs = {}
    order = []

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "boundary":
            label, _, marks = rest.partition(":")
            marks = marks.split()
            if not marks:
                raise SurfaceError("boundary component needs at least one mark")
            for m in marks:
                points[m] = MARK
            k = label.strip()
            boundaries.append(tuple(marks))
            for i, m in enumerate(marks):
                m2 = marks[(i + 1) % len(marks)]
                name = f"{k}:{m}-{m2}"
                arcs[name] = Arc(name, (m, m2), boundary=True)
        elif head == "puncture":
            points[rest] = PUNCTURE
        elif head == "orbifold":
            name = rest.split()[0]
            if "1/2" not in rest:
                raise SurfaceError("only weight 1/2 orbifold points are supported")
            points[name] = ORBIFOLD_POINT
        elif head == "arc":
            parts = rest.split()
            name, e1, e2 = parts[0], parts[1], parts[2]
            flags = set(parts[3:])
            pending = "pending" in flags
            arcs[name] = Arc(name, (e1, e2), pending=pending)
        elif head == "triangle":
            parts = [p for p in rest.split() if not p.startswith("selffolded")
                     and not p.startswith("radius=")]
            if len(parts) != 3:
                raise SurfaceError(f"triangle needs three sides: {line}")
            triangles.append(tuple(parts))
            for a in parts:
                if a not in order:
                    order.append(a)
        elif head == "crossing":
            name, _, spec = rest.partition(":")
            name = name.strip()
            spec, _, via = spec.partition("|")
            crossed = spec.split()
            via_list = None
            if via.strip():
                v = via.strip()
                if not v.startswith("via"):
                    raise SurfaceError(f"bad crossing suffix {via!r}")
                via_list = [int(x) for x in v[3:].split()]
            crossing_specs[name] = (tuple(crossed), via_list)
        else:
            raise SurfaceError(f"unknown directive {head!r}")

    used = [a for a in order if a in arcs and not arcs[a].boundary]
    missing = [a for t in triangles for a in t if a not in arcs]
    if missing:
        raise SurfaceError(f"triangles reference undeclared arcs: {missing}")
    for a in arcs.values():
        for e in a.ends:
            if e not in points:
                raise SurfaceError(f"arc {a.name} uses unknown point {e}")
        if a.pending:
            kinds = sorted(points[e] for e in a.ends)
            if kinds.count(ORBIFOLD_POINT) != 1:
                raise SurfaceError(f"pending arc {a.name} needs exactly one orbifold endpoint")
        elif any(points[e] == ORBIFOLD_POINT for e in a.ends):
            raise SurfaceError(f"arc {a.name} touches an orbifold point but is not pending")
    surface = OrbifoldSurface(points, tuple(boundaries), arcs, crossing_specs)
    tri = IdealTriangulation(surface, tuple(used), tuple(triangles))
    return surface, tri


def load_crossing(tri: IdealTriangulation, name: str) -> CrossingRecord:
    """Crossing record for a declared target, resolved against tri."""
    if name in tri.arcs:
        return record_for_arc_in_t(tri, name)
    spec = tri.surface.crossing_specs.get(name)
    if spec is None:
        raise SurfaceError(f"no crossing data declared for {name}")
    crossed, via = spec
    return resolve_crossing(tri, name, crossed, via)
