"""Ribbon graphs with 4-valent vertices: topology and tree combinatorics.

A graph is given by its rotation system: every vertex carries exactly four
slots in counterclockwise cyclic order.  Slot i (1-based) has sign
(-1)^(i+1); each oriented internal line runs from a tail on a '-' slot to a
head on a '+' slot, and the remaining slots hold external legs.

The module computes faces/genus/broken faces by the rotation-system walk,
enumerates spanning trees and admissible line sets, and contracts trees
into rosettes, recording the order relations between the surviving loop
lines that downstream matrix builders read off.
"""

import json
from itertools import combinations


class GraphValidationError(ValueError):
    """Structural problem in an input graph; carries (vertex, slot) coords."""

    def __init__(self, message, vertex=None, slot=None):
        super().__init__(message)
        self.vertex = vertex
        self.slot = slot


class InternalConsistencyError(RuntimeError):
    """An identity the construction guarantees failed to hold."""


def _nat_key(x):
    return (0, int(x)) if str(x).isdigit() else (1, str(x))


def slot_sign(slot_index0):
    """Sign of a corner from its 0-based slot index: (-1)^(i+1), i 1-based."""
    return 1 if slot_index0 % 2 == 0 else -1


class RibbonGraph:
    def __init__(self, name, root, vertices):
        """``vertices`` maps vertex-id -> list of 4 slot dicts, each either
        {"line": id, "end": "head"|"tail"} or {"ext": label}."""
        self.name = name
        self.root = root
        self.slots = {v: list(slots) for v, slots in vertices.items()}
        self.lines = {}
        self.externals = {}
        self._validate()
        self.line_ids = sorted(self.lines, key=_nat_key)
        self.vertex_ids = sorted(self.slots, key=_nat_key)

    # ---- structure ----

    def _validate(self):
        if self.root not in self.slots:
            raise GraphValidationError("root %r is not a vertex" % self.root)
        ends = {}
        for v in self.slots:
            slots = self.slots[v]
            if len(slots) != 4:
                raise GraphValidationError(
                    "vertex %r has %d slots, want 4" % (v, len(slots)), v, None)
            for i, sl in enumerate(slots):
                if "ext" in sl:
                    label = sl["ext"]
                    if label in self.externals:
                        raise GraphValidationError(
                            "duplicate external label %r" % label, v, i)
                    self.externals[label] = (v, i)
                elif "line" in sl:
                    lid, end = sl["line"], sl.get("end")
                    if end not in ("head", "tail"):
                        raise GraphValidationError(
                            "slot needs end 'head' or 'tail'", v, i)
                    want = 0 if end == "head" else 1
                    if i % 2 != want:
                        raise GraphValidationError(
                            "line %r %s sits on a %s corner"
                            % (lid, end, "+" if i % 2 == 0 else "-"), v, i)
                    if (lid, end) in ends:
                        raise GraphValidationError(
                            "line %r has two %s ends" % (lid, end), v, i)
                    ends[(lid, end)] = (v, i)
                else:
                    raise GraphValidationError("slot is neither line nor ext", v, i)
        for (lid, end), pos in ends.items():
            other = "tail" if end == "head" else "head"
            if (lid, other) not in ends:
                raise GraphValidationError(
                    "line %r misses its %s end" % (lid, other),
                    pos[0], pos[1])
            self.lines[lid] = {"head": ends[(lid, "head")],
                               "tail": ends[(lid, "tail")]}
        # connectivity
        reached = {self.root}
        frontier = [self.root]
        while frontier:
            v = frontier.pop()
            for sl in self.slots[v]:
                if "line" in sl:
                    ln = self.lines[sl["line"]]
                    for end in ("head", "tail"):
                        w = ln[end][0]
                        if w not in reached:
                            reached.add(w)
                            frontier.append(w)
        if len(reached) != len(self.slots):
            missing = sorted(set(self.slots) - reached, key=_nat_key)[0]
            raise GraphValidationError(
                "graph is disconnected (vertex %r unreachable)" % missing,
                missing, None)

    @property
    def n(self):
        return len(self.slots)

    @property
    def L(self):
        return len(self.lines)

    @property
    def N(self):
        return len(self.externals)

    def line_index(self, lid):
        return self.line_ids.index(lid)

    def end_pos(self, lid, end):
        return self.lines[lid][end]

    def slot_at(self, v, i):
        return self.slots[v][i % 4]

    def hooked_corners(self, lid, v):
        """(slot0, eps) pairs where line lid hooks vertex v."""
        out = []
        for end in ("head", "tail"):
            w, i = self.lines[lid][end]
            if w == v:
                out.append((i, slot_sign(i)))
        return out

    def far_end(self, lid, end):
        other = "tail" if end == "head" else "head"
        return self.lines[lid][other]

    def adjacency(self, line_subset=None):
        """vertex -> set of (neighbor, lid) over a line subset."""
        lids = self.line_ids if line_subset is None else line_subset
        adj = {v: [] for v in self.slots}
        for lid in lids:
            hv = self.lines[lid]["head"][0]
            tv = self.lines[lid]["tail"][0]
            adj[hv].append((tv, lid))
            if hv != tv:
                adj[tv].append((hv, lid))
        return adj

    # ---- serialization ----

    def to_dict(self):
        return {"name": self.name, "root": self.root,
                "vertices": {v: self.slots[v] for v in self.vertex_ids}}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d.get("name", ""), d["root"], d["vertices"])
        except KeyError as e:
            raise GraphValidationError("missing required key %s" % e)


def load_graph(path):
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return RibbonGraph.from_dict(data), data


def save_graph(g, path, extra=None):
    data = g.to_dict()
    if extra:
        data.update(extra)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=1, sort_keys=True)
        f.write("\n")


# ---- faces, genus, broken faces ----

class TopologyReport:
    def __init__(self, n, L, F, genus, B, N, faces):
        self.n = n
        self.L = L
        self.F = F
        self.genus = genus
        self.B = B
        self.N = N
        self.faces = faces  # list of dicts: darts, corners, externals, broken

    def summary(self):
        return "n=%d L=%d F=%d g=%d B=%d N=%d" % (
            self.n, self.L, self.F, self.genus, self.B, self.N)

    def to_dict(self):
        return {"n": self.n, "L": self.L, "F": self.F, "g": self.genus,
                "B": self.B, "N": self.N,
                "faces": [{"darts": [list(d) for d in f["darts"]],
                           "externals": sorted(f["externals"]),
                           "broken": f["broken"]} for f in self.faces]}


def trace_faces(g):
    """Rotation-system face walk.

    A dart is a line end; from a dart we cross the line to its far corner,
    then turn counterclockwise past any external slots (which only mark the
    face as broken) to the next line end, which is the next dart.
    """
    if g.L == 0:
        face = {"darts": [], "corners": [],
                "externals": set(g.externals), "broken": bool(g.externals)}
        return TopologyReport(g.n, 0, 1, 0, 1 if g.externals else 0,
                              g.N, [face])

    def next_dart(lid, end):
        v, i = g.far_end(lid, end)
        passed = []
        for k in range(1, 5):
            sl = g.slot_at(v, i + k)
            if "ext" in sl:
                passed.append(sl["ext"])
                continue
            return (sl["line"], sl["end"]), (v, i), passed
        raise InternalConsistencyError("vertex %r has no internal slot" % v)

    all_darts = [(lid, end) for lid in g.line_ids for end in ("head", "tail")]
    seen = set()
    faces = []
    for start in all_darts:
        if start in seen:
            continue
        darts, corners, exts = [], [], set()
        d = start
        while True:
            darts.append(d)
            seen.add(d)
            d, corner, passed = next_dart(*d)
            corners.append(corner)
            exts.update(passed)
            if d == start:
                break
        faces.append({"darts": darts, "corners": corners,
                      "externals": exts, "broken": bool(exts)})
    F = len(faces)
    euler = g.n - g.L + F
    if euler % 2 != 0 or euler > 2:
        raise InternalConsistencyError(
            "Euler characteristic %d is not 2-2g" % euler)
    genus = (2 - euler) // 2
    B = sum(1 for f in faces if f["broken"])
    return TopologyReport(g.n, g.L, F, genus, B, g.N, faces)


# ---- dual graph ----

class DualGraph:
    """One vertex per face; one edge per internal line (self-loops kept)."""

    def __init__(self, face_count, edges):
        self.face_count = face_count
        self.edges = edges  # lid -> (face_i, face_j)

    def connects_all(self, lids):
        if self.face_count == 1:
            return True
        parent = list(range(self.face_count))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for lid in lids:
            a, b = (find(x) for x in self.edges[lid])
            if a != b:
                parent[a] = b
        return len({find(i) for i in range(self.face_count)}) == 1

    def spanning_tree(self, lids):
        """Lexicographically greedy spanning tree inside ``lids`` (or None)."""
        parent = list(range(self.face_count))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        tree = []
        for lid in sorted(lids, key=_nat_key):
            a, b = (find(x) for x in self.edges[lid])
            if a != b:
                parent[a] = b
                tree.append(lid)
        if len({find(i) for i in range(self.face_count)}) != 1:
            return None
        return frozenset(tree)


def dual_graph(g, topo=None):
    topo = topo or trace_faces(g)
    dart_face = {}
    for fi, f in enumerate(topo.faces):
        for d in f["darts"]:
            dart_face[d] = fi
    edges = {}
    for lid in g.line_ids:
        edges[lid] = (dart_face[(lid, "head")], dart_face[(lid, "tail")])
    return DualGraph(topo.F, edges)


# ---- spanning trees ----

def _spans(g, lids):
    """True if the line set connects every vertex of g."""
    if g.n == 1:
        return True
    adj = g.adjacency(lids)
    reached = {g.root}
    stack = [g.root]
    while stack:
        v = stack.pop()
        for w, _ in adj[v]:
            if w not in reached:
                reached.add(w)
                stack.append(w)
    return len(reached) == g.n


class RootedTree:
    def __init__(self, g, lines):
        self.graph = g
        self.lines = frozenset(lines)
        self.toward_root = {}   # vertex (not root) -> its line going rootward
        self.parent = {}        # vertex -> parent vertex
        sign = {}
        branch = {}
        adj = g.adjacency(sorted(self.lines, key=_nat_key))
        order = [g.root]
        seen = {g.root}
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for w, lid in sorted(adj[v], key=lambda x: _nat_key(x[1])):
                if w not in seen:
                    seen.add(w)
                    self.toward_root[w] = lid
                    self.parent[w] = v
                    order.append(w)
        if len(seen) != g.n:
            raise ValueError("line set %s does not span" % sorted(lines))
        for w, lid in self.toward_root.items():
            head_v = g.lines[lid]["head"][0]
            sign[lid] = -1 if head_v == self.parent[w] else 1
        # branch of a tree line: the vertices at or above its child vertex
        children = {v: [] for v in g.slots}
        for w, p in self.parent.items():
            children[p].append(w)
        for w, lid in self.toward_root.items():
            stack, above = [w], {w}
            while stack:
                x = stack.pop()
                for y in children[x]:
                    if y not in above:
                        above.add(y)
                        stack.append(y)
            branch[lid] = frozenset(above)
        self.sign = sign
        self.branch = branch
        self.corner_order = self._walk()

    def _walk(self):
        """Root-anchored boundary walk of the fattened tree: every one of
        the 4n corners once, in the order they are met turning
        counterclockwise around the tree."""
        g = self.graph
        order = []
        pos = (g.root, 0)
        for _ in range(4 * g.n):
            order.append(pos)
            sl = g.slot_at(*pos)
            if "line" in sl and sl["line"] in self.lines:
                pos = g.far_end(sl["line"], sl["end"])
            pos = (pos[0], (pos[1] + 1) % 4)
        if pos != (g.root, 0) or len(set(order)) != 4 * g.n:
            raise InternalConsistencyError("tree boundary walk is not a cycle")
        return order

    def branch_sign(self, lid, loop_lid):
        """+1/-1/0 as the loop line enters/exits/avoids the branch of lid."""
        b = self.branch[lid]
        g = self.graph
        head_in = g.lines[loop_lid]["head"][0] in b
        tail_in = g.lines[loop_lid]["tail"][0] in b
        if head_in and not tail_in:
            return 1
        if tail_in and not head_in:
            return -1
        return 0


def spanning_trees(g):
    """All spanning trees, lexicographic in their sorted line-id sets."""
    if g.n == 1:
        return [RootedTree(g, frozenset())]
    out = []
    for combo in combinations(g.line_ids, g.n - 1):
        if _spans(g, combo):
            out.append(RootedTree(g, frozenset(combo)))
    out.sort(key=lambda t: sorted(_nat_key(x) for x in t.lines))
    return out


# ---- admissible sets ----

class AdmissibleSet:
    def __init__(self, j0, k_i, leading, dual_tree, direct_tree):
        self.j0 = frozenset(j0)
        self.k_i = k_i
        self.leading = leading
        self.dual_tree = dual_tree
        self.direct_tree = direct_tree

    def complement(self, g):
        return frozenset(set(g.line_ids) - self.j0)


def admissible_sets(g, topo=None):
    """All line sets containing a dual-graph tree whose complement contains
    a direct-graph tree, ordered by (size, ids)."""
    topo = topo or trace_faces(g)
    dual = dual_graph(g, topo)
    out = []
    ids = g.line_ids
    for r in range(len(ids) + 1):
        for combo in combinations(ids, r):
            j0 = set(combo)
            dual_tree = dual.spanning_tree(j0)
            if dual_tree is None:
                continue
            comp = [x for x in ids if x not in j0]
            if not _spans(g, comp):
                continue
            direct_tree = _greedy_tree(g, comp)
            i_size = len(comp)
            k_i = i_size - g.L - topo.F + 1
            out.append(AdmissibleSet(j0, k_i, len(j0) == topo.F - 1,
                                     dual_tree, direct_tree))
    return out


def _greedy_tree(g, lids):
    if g.n == 1:
        return frozenset()
    parent = {v: v for v in g.slots}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = []
    for lid in sorted(lids, key=_nat_key):
        a = find(g.lines[lid]["head"][0])
        b = find(g.lines[lid]["tail"][0])
        if a != b:
            parent[a] = b
            tree.append(lid)
    return frozenset(tree) if len(tree) == g.n - 1 else None


# ---- fat graphs: contraction machinery behind the first Filk move ----

class FatGraph:
    """Rotation system with arbitrary valences.

    Items are ("line", lid, "head"|"tail") or ("ext", label, corner) where
    corner is the originating (vertex, slot) of a 4-valent graph, kept so
    corner signs survive contraction.
    """

    def __init__(self, vertices, root):
        self.vertices = {v: list(items) for v, items in vertices.items()}
        self.root = root

    @classmethod
    def from_ribbon(cls, g):
        vertices = {}
        for v in g.vertex_ids:
            items = []
            for i, sl in enumerate(g.slots[v]):
                if "ext" in sl:
                    items.append(("ext", sl["ext"], (v, i)))
                else:
                    items.append(("line", sl["line"], sl["end"], (v, i)))
            vertices[v] = items
        return cls(vertices, g.root)

    def find_end(self, lid, end):
        for v, items in self.vertices.items():
            for i, it in enumerate(items):
                if it[0] == "line" and it[1] == lid and it[2] == end:
                    return v, i
        raise KeyError((lid, end))

    def n_lines(self):
        return sum(1 for items in self.vertices.values()
                   for it in items if it[0] == "line") // 2

    def contract(self, lid):
        """First Filk move: glue the two endpoints of a non-loop line."""
        hv, hi = self.find_end(lid, "head")
        tv, ti = self.find_end(lid, "tail")
        if hv == tv:
            raise ValueError("cannot contract self-loop %r" % lid)
        keep, ki = (hv, hi) if hv == self.root or tv != self.root else (tv, ti)
        drop, di = (tv, ti) if keep == hv else (hv, hi)
        a = self.vertices[keep]
        b = self.vertices[drop]
        spliced = a[:ki] + b[di + 1:] + b[:di] + a[ki + 1:]
        self.vertices[keep] = spliced
        del self.vertices[drop]

    def delete_line(self, lid):
        for v in self.vertices:
            self.vertices[v] = [it for it in self.vertices[v]
                                if not (it[0] == "line" and it[1] == lid)]

    def face_cycles(self):
        """Faces as dart cycles; externals mark broken faces only."""
        darts = []
        pos = {}
        for v in sorted(self.vertices, key=_nat_key):
            for i, it in enumerate(self.vertices[v]):
                if it[0] == "line":
                    pos[(it[1], it[2])] = (v, i)
                    darts.append((it[1], it[2]))
        if not darts:
            exts = {it[1] for items in self.vertices.values()
                    for it in items if it[0] == "ext"}
            return [{"darts": [], "externals": exts, "broken": bool(exts)}]

        def next_dart(d):
            lid, end = d
            other = "tail" if end == "head" else "head"
            v, i = pos[(lid, other)]
            items = self.vertices[v]
            passed = []
            for k in range(1, len(items) + 1):
                it = items[(i + k) % len(items)]
                if it[0] == "ext":
                    passed.append(it[1])
                    continue
                return (it[1], it[2]), passed
            raise InternalConsistencyError("vertex with no line ends")

        seen = set()
        faces = []
        for start in darts:
            if start in seen:
                continue
            cyc, exts = [], set()
            d = start
            while True:
                cyc.append(d)
                seen.add(d)
                d, passed = next_dart(d)
                exts.update(passed)
                if d == start:
                    break
            faces.append({"darts": cyc, "externals": exts,
                          "broken": bool(exts)})
        return faces

    def euler_genus(self):
        F = len(self.face_cycles())
        euler = len(self.vertices) - self.n_lines() + F
        if euler % 2:
            raise InternalConsistencyError("odd Euler characteristic")
        return F, (2 - euler) // 2


# ---- rosette ----

class Rosette:
    """Single fat vertex obtained by contracting a spanning tree.

    ``cycle`` lists the surviving corners counterclockwise starting from the
    first surviving corner of the root-anchored walk: loop-line ends and
    external legs, with the corner signs still alternating.
    """

    def __init__(self, graph, tree, cycle):
        self.graph = graph
        self.tree = tree
        self.cycle = cycle
        self.loop_lines = sorted(
            {it[1] for it in cycle if it[0] == "line"}, key=_nat_key)
        self._pos = {}
        for p, it in enumerate(cycle):
            if it[0] == "line":
                self._pos[(it[1], it[2])] = p
            else:
                self._pos[("ext", it[1])] = p
        self.loop_sign = {}
        for lid in self.loop_lines:
            self.loop_sign[lid] = 1 if (self._pos[(lid, "tail")]
                                        < self._pos[(lid, "head")]) else -1
        faces = self.face_cycles()
        self.faces = len(faces)
        euler = 1 - len(self.loop_lines) + self.faces
        if euler % 2:
            raise InternalConsistencyError("rosette Euler characteristic odd")
        self.genus = (2 - euler) // 2

    # positions and order relations (positions are linear, root-anchored)

    def span(self, lid):
        a = self._pos[(lid, "head")]
        b = self._pos[(lid, "tail")]
        return (a, b) if a < b else (b, a)

    def ext_pos(self, label):
        return self._pos[("ext", label)]

    def precedes(self, a, b):
        """Line a lies entirely before line b."""
        return self.span(a)[1] < self.span(b)[0]

    def nested(self, a, b):
        """Line a lies strictly inside line b."""
        sa, sb = self.span(a), self.span(b)
        return sb[0] < sa[0] and sa[1] < sb[1]

    def crosses(self, a, b):
        sa, sb = self.span(a), self.span(b)
        return sa[0] < sb[0] < sa[1] < sb[1] or sb[0] < sa[0] < sb[1] < sa[1]

    def ext_inside(self, label, lid):
        p = self.ext_pos(label)
        sa = self.span(lid)
        return sa[0] < p < sa[1]

    def corner_signs_alternate(self):
        signs = [slot_sign(it[-1][1]) for it in self.cycle]
        return all(signs[i] != signs[(i + 1) % len(signs)]
                   for i in range(len(signs)))

    def face_cycles(self):
        """Chord-diagram faces of the rosette (externals only mark broken)."""
        line_positions = sorted(p for key, p in self._pos.items()
                                if key[0] != "ext")
        if not line_positions:
            has_ext = any(it[0] == "ext" for it in self.cycle)
            return [{"darts": [], "broken": has_ext}]
        at = {}
        for key, p in self._pos.items():
            if key[0] != "ext":
                at[p] = key
        order = line_positions

        def next_corner(p):
            lid, end = at[p]
            other = "tail" if end == "head" else "head"
            q = self._pos[(lid, other)]
            i = order.index(q)
            return order[(i + 1) % len(order)]

        seen = set()
        faces = []
        for start in order:
            if start in seen:
                continue
            cyc = []
            p = start
            while True:
                cyc.append(at[p])
                seen.add(p)
                p = next_corner(p)
                if p == start:
                    break
            faces.append({"darts": cyc})
        return faces

    def remove_lines(self, lids):
        """Rosette with the given loop lines deleted (dual-tree removal)."""
        lids = set(lids)
        cycle = [it for it in self.cycle
                 if it[0] != "line" or it[1] not in lids]
        return Rosette(self.graph, self.tree, cycle)

    def branch_sign(self, vertex, lid):
        tree_line = self.tree.toward_root.get(vertex)
        if tree_line is None:
            return 0
        return self.tree.branch_sign(tree_line, lid)


def build_rosette(g, tree):
    """Contract the n-1 tree lines in sequence and return the rosette.

    The contraction result is cross-checked against the root-anchored
    boundary walk of the tree, and face count and genus must match the
    original graph at every step.
    """
    topo = trace_faces(g)
    fat = FatGraph.from_ribbon(g)
    for lid in sorted(tree.lines, key=_nat_key):
        f_before = len(fat.face_cycles())
        fat.contract(lid)
        f_after = len(fat.face_cycles())
        if f_before != f_after:
            raise InternalConsistencyError(
                "contraction of %r changed the face count" % lid)
    (vid, items), = fat.vertices.items()

    # the same cycle from the boundary walk, anchored at the root
    walk_cycle = []
    for (v, i) in tree.corner_order:
        sl = g.slot_at(v, i)
        if "ext" in sl:
            walk_cycle.append(("ext", sl["ext"], (v, i)))
        elif sl["line"] not in tree.lines:
            walk_cycle.append(("line", sl["line"], sl["end"], (v, i)))
    if len(items) != len(walk_cycle):
        raise InternalConsistencyError("rosette size mismatch")
    if items and walk_cycle:
        k = items.index(walk_cycle[0])
        rotated = items[k:] + items[:k]
        if rotated != walk_cycle:
            raise InternalConsistencyError(
                "contracted rosette disagrees with the tree boundary walk")

    ros = Rosette(g, tree, walk_cycle)
    if ros.faces != topo.F or ros.genus != topo.genus:
        raise InternalConsistencyError("rosette changed F or genus")
    if walk_cycle and not ros.corner_signs_alternate():
        raise InternalConsistencyError("rosette corner signs do not alternate")
    return ros


def nice_crossings(rosette):
    """The g pairs (a, b) on a one-faced rosette where the start of b
    immediately precedes the end of a among the loop-line corners."""
    if rosette.faces != 1:
        raise ValueError("nice crossings need a one-face rosette, got F=%d"
                         % rosette.faces)
    lines = rosette.loop_lines
    if not lines:
        return []
    order = sorted(p for key, p in rosette._pos.items() if key[0] != "ext")
    index = {p: i for i, p in enumerate(order)}
    pairs = []
    for a in lines:
        end_a = rosette.span(a)[1]
        prev = order[(index[end_a] - 1) % len(order)]
        for b in lines:
            if b != a and rosette.span(b)[0] == prev and rosette.crosses(a, b):
                pairs.append((a, b))
    used = [x for p in pairs for x in p]
    if len(pairs) != rosette.genus or len(set(used)) != len(used):
        raise InternalConsistencyError(
            "expected %d disjoint nice crossings, found %r"
            % (rosette.genus, pairs))
    return sorted(pairs, key=lambda p: _nat_key(p[0]))


# ---- random orientable graphs (for property suites) ----

def random_orientable_graph(rng, max_n=4, max_l=6):
    """Connected 4-valent orientable ribbon graph from a seeded Random."""
    while True:
        n = rng.randint(1, max_n)
        lo = max(n - 1, 1)
        hi = min(max_l, 2 * n)
        if lo > hi:
            continue
        L = rng.randint(lo, hi)
        vids = ["V%d" % i for i in range(n)]
        plus = [(v, i) for v in vids for i in (0, 2)]
        minus = [(v, i) for v in vids for i in (1, 3)]
        rng.shuffle(plus)
        rng.shuffle(minus)
        heads = plus[:L]
        tails = minus[:L]
        slots = {v: [None] * 4 for v in vids}
        for k in range(L):
            lid = str(k + 1)
            hv, hi = heads[k]
            tv, ti = tails[k]
            slots[hv][hi] = {"line": lid, "end": "head"}
            slots[tv][ti] = {"line": lid, "end": "tail"}
        ext = 1
        for v in vids:
            for i in range(4):
                if slots[v][i] is None:
                    slots[v][i] = {"ext": "x%d" % ext}
                    ext += 1
        try:
            return RibbonGraph("random", "V0", slots)
        except GraphValidationError:
            continue
