"""The real part of the second hyperbolic polynomial.

HV^R is a quadratic form in the external positions and the root
hypermomentum.  Each line subset I of the right parity contributes the
square of a bracket: the P-weighted, sign-graded sum of sub-Pfaffians of
the s-scaled coupling matrix with I and one further index deleted.  The
exact-rational oracle (P Q^-1 P^t at sampled points) is the ground truth
for this module; there are no printed reference polynomials.

The leading-term machinery interprets each external leg as a dummy line to
the root: 2-admissible subsets, the two-face contracted graph and its
sign-alternating second face, and the closed-form lower bound.
"""

import json
from fractions import Fraction
from itertools import combinations

from .poly import Poly
from .pfaffian import PfaffianCache, perm_sign
from .qmatrix import build_B, build_P
from .ribbon import (FatGraph, InternalConsistencyError, Rosette, _nat_key,
                     admissible_sets, nice_crossings, slot_sign, spanning_trees,
                     trace_faces)
from .hupoly import subset_weight

DUMMY = "__dummy__"


class QuadForm:
    """Symmetric quadratic form with Poly coefficients.

    ``coeff[(a, b)]`` with a <= b holds the matrix entry; off-diagonal
    entries act twice when evaluating.
    """

    def __init__(self, labels, nt):
        self.labels = list(labels)
        self.nt = nt
        self.coeff = {}

    def _key(self, a, b):
        return (a, b) if a <= b else (b, a)

    def add(self, a, b, value):
        k = self._key(a, b)
        cur = self.coeff.get(k, Poly.zero(self.nt))
        cur = cur + value
        if cur.is_zero():
            self.coeff.pop(k, None)
        else:
            self.coeff[k] = cur

    def entry(self, a, b):
        return self.coeff.get(self._key(a, b), Poly.zero(self.nt))

    def eval(self, point, values):
        """Scalar value given parameter point and external values."""
        total = Fraction(0)
        for (a, b), c in self.coeff.items():
            term = c.eval(point) * Fraction(values[a]) * Fraction(values[b])
            total += term if a == b else 2 * term
        return total

    def label_text(self, lab):
        kind, name = lab
        return name if kind == "x" else "pbar"

    def to_dict(self):
        out = {}
        for (a, b), c in sorted(self.coeff.items()):
            out["%s*%s" % (self.label_text(a), self.label_text(b))] = \
                c.canonical()
        return {"coefficients": out}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def hv_real(g, b=None, p=None):
    """HV^R as a QuadForm over the external legs and the root symbol."""
    if g.N == 0:
        raise ValueError("graph has no external legs: HV is empty")
    if b is None:
        b = build_B(g)[0]
    if p is None:
        p = build_P(g)
    nt = g.L
    cache = PfaffianCache(b)
    d = b.dim
    u_index = {lid: k for k, lid in enumerate(g.line_ids)}
    form = QuadForm(p.row_labels, nt)
    all_idx = tuple(range(d))
    for r in range(g.L + 1):
        if (g.n + r) % 2 == 1:
            continue
        for combo in combinations(g.line_ids, r):
            deleted = {u_index[lid] for lid in combo}
            rest = [i for i in all_idx if i not in deleted]
            weights = {}
            for tau in rest:
                sub = tuple(i for i in rest if i != tau)
                pf_val = cache.pf(sub)
                if not pf_val.is_zero():
                    weights[tau] = perm_sign(deleted, tau, d) * pf_val
            if not weights:
                continue
            brackets = {}
            for row in p.row_labels:
                acc = Poly.zero(nt)
                for tau, wv in weights.items():
                    c = p.value(row, b.labels[tau])
                    if c:
                        acc = acc + wv * c
                if not acc.is_zero():
                    brackets[row] = acc
            if not brackets:
                continue
            w = subset_weight(g, set(combo))
            rows = sorted(brackets)
            for i, ra in enumerate(rows):
                for rb in rows[i:]:
                    form.add(ra, rb, w * brackets[ra] * brackets[rb])
    return form


# ---- 2-admissible sets and the leading bound ----

class TwoAdmissibleSet:
    def __init__(self, j, dummy_target, t2, f_j, opposite_flag, leading,
                 gprime_faces, gprime_genus, root_gap):
        self.j = frozenset(j)
        self.dummy_target = dummy_target
        self.t2 = frozenset(t2)
        self.f_j = f_j          # tuple of (external label, +-1 corner sign)
        self.opposite_flag = opposite_flag
        self.leading = leading
        self.gprime_faces = gprime_faces
        self.gprime_genus = gprime_genus
        self.root_gap = root_gap


def has_opposite_externals(g, v):
    """True if vertex v carries external legs on opposite corners."""
    ext_slots = [i for i, sl in enumerate(g.slots[v]) if "ext" in sl]
    return any((i + 2) % 4 == j for i in ext_slots for j in ext_slots)


def _component_split(g, lids):
    """Vertex components of the line subset, as a list of sets."""
    adj = g.adjacency(sorted(lids, key=_nat_key))
    seen = {}
    comps = []
    for v in g.vertex_ids:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen[v] = True
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in seen:
                    seen[y] = True
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _two_forest(g, lids, root, target):
    """Spanning 2-forest inside ``lids`` separating root from target."""
    comps = _component_split(g, lids)
    if len(comps) == 1:
        tree = _greedy_tree_lines(g, lids)
        path = _tree_path(g, tree, root, target)
        cut = sorted(path, key=_nat_key)[0]
        return frozenset(tree - {cut})
    if len(comps) == 2:
        where = {v: k for k, comp in enumerate(comps) for v in comp}
        if where[root] == where[target]:
            return None
        forest = set()
        for comp in comps:
            forest |= _greedy_tree_lines(
                g, [l for l in lids
                    if g.lines[l]["head"][0] in comp
                    and g.lines[l]["tail"][0] in comp],
                vertices=comp)
        return frozenset(forest)
    return None


def _greedy_tree_lines(g, lids, vertices=None):
    verts = vertices if vertices is not None else set(g.vertex_ids)
    parent = {v: v for v in verts}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = set()
    for lid in sorted(lids, key=_nat_key):
        a = find(g.lines[lid]["head"][0])
        b = find(g.lines[lid]["tail"][0])
        if a != b:
            parent[a] = b
            tree.add(lid)
    return tree


def _tree_path(g, tree, a, b):
    """Line ids on the path between two vertices of a spanning forest."""
    adj = g.adjacency(sorted(tree, key=_nat_key))
    prev = {a: (None, None)}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for w, lid in adj[v]:
            if w not in prev:
                prev[w] = (v, lid)
                stack.append(w)
    if b not in prev:
        raise InternalConsistencyError("no forest path between %r, %r" % (a, b))
    path = []
    v = b
    while prev[v][0] is not None:
        path.append(prev[v][1])
        v = prev[v][0]
    return set(path)


def _fat_with_dummy(g, e, gap):
    """FatGraph of g with the external e replaced by a dummy line to the
    root; the root end is inserted before the root's slot ``gap``."""
    fat = FatGraph.from_ribbon(g)
    v, i = g.externals[e]
    dummy_end = "head" if slot_sign(i) > 0 else "tail"
    other_end = "tail" if dummy_end == "head" else "head"
    fat.vertices[v][i] = ("line", DUMMY, dummy_end, (v, i))
    root_items = fat.vertices[g.root]
    root_items.insert(gap, ("line", DUMMY, other_end, (g.root, "gap%d" % gap)))
    return fat, dummy_end


def _fat_corner_walk(fat, tree_lids, root):
    """Root-anchored boundary walk of a tree inside a fat graph."""
    total = sum(len(items) for items in fat.vertices.values())
    pos_index = {}
    for v, items in fat.vertices.items():
        for i, it in enumerate(items):
            if it[0] == "line":
                pos_index[(it[1], it[2])] = (v, i)
    order = []
    pos = (root, 0)
    for _ in range(total):
        order.append(pos)
        it = fat.vertices[pos[0]][pos[1]]
        if it[0] == "line" and it[1] in tree_lids:
            other = "tail" if it[2] == "head" else "head"
            pos = pos_index[(it[1], other)]
        v, i = pos
        pos = (v, (i + 1) % len(fat.vertices[v]))
    if pos != (root, 0) or len(set(order)) != total:
        raise InternalConsistencyError("fat tree walk is not a boundary cycle")
    return order


def _rosette_of_fat(fat, tree_lids, root):
    walk = _fat_corner_walk(fat, tree_lids, root)
    cycle = []
    for (v, i) in walk:
        it = fat.vertices[v][i]
        if it[0] == "ext":
            cycle.append(it)
        elif it[1] not in tree_lids:
            cycle.append(it)
    return Rosette(None, None, cycle)


def two_admissible_sets(g, e, topo=None):
    """All line sets that are admissible in g and whose complement carries
    a two-tree separating the root from the vertex of external e.

    Each result also records the contracted two-face graph data: the
    external content of the second face (with alternating corner signs)
    and the face count and genus of the graph with the dummy line added.
    """
    topo = topo or trace_faces(g)
    ve = g.externals[e][0]
    out = []
    if ve == g.root:
        return out
    opp = has_opposite_externals(g, ve)
    for adm in admissible_sets(g, topo):
        comp = adm.complement(g)
        t2 = _two_forest(g, comp, g.root, ve)
        if t2 is None:
            continue
        built = _contracted_two_face(g, e, adm.j0, t2)
        if built is None:
            # no reattachment of the dummy produces the two-face picture;
            # the set does not contribute a closed-form term
            continue
        f_j, gap, fprime, gprime = built
        leading = len(adm.j0) == fprime - 1
        out.append(TwoAdmissibleSet(adm.j0, e, t2, f_j, opp, leading,
                                    fprime, gprime, gap))
    return out


def _contracted_two_face(g, e, j, t2):
    """Contract the two-tree plus dummy and read off the second face."""
    for gap in range(5):
        fat, dummy_end = _fat_with_dummy(g, e, gap)
        fprime, gprime = fat.euler_genus()
        for lid in g.line_ids:
            if lid not in j and lid not in t2:
                fat.delete_line(lid)
        for lid in sorted(t2, key=_nat_key):
            fat.contract(lid)
        faces = fat.face_cycles()
        if len(faces) != 2:
            continue
        target = None
        for f in faces:
            if (DUMMY, dummy_end) in f["darts"]:
                target = f
                break
        if target is None:
            continue
        labels = sorted(target["externals"] | {e}, key=_nat_key)
        f_j = tuple((lab, slot_sign(g.externals[lab][1])) for lab in labels)
        return f_j, gap, fprime, gprime
    return None


def hv_leading_bound(g, topo=None):
    """Closed-form lower bound for HV^R from the 2-admissible sets.

    Returns a QuadForm over the external labels; at any point with
    t in (0,1)^L, s > 0 and W in [0,1) its value is dominated by HV^R
    evaluated with the same external values.
    """
    topo = topo or trace_faces(g)
    nt = g.L
    p_rows = [("x", lab) for lab in sorted(g.externals, key=_nat_key)]
    form = QuadForm(p_rows, nt)
    seen = set()
    for e in sorted(g.externals, key=_nat_key):
        for ta in two_admissible_sets(g, e, topo):
            key = (ta.j, ta.f_j)
            if key in seen:
                continue
            seen.add(key)
            cf = _gprime_closed_form(g, ta)
            spow = 2 * (ta.gprime_genus + ta.gprime_faces - 1)
            complement = set(g.line_ids) - ta.j
            base = (Poly.s(nt) ** spow) * cf * cf \
                * subset_weight(g, complement)
            for i, (la, sa) in enumerate(ta.f_j):
                for (lb, sb) in ta.f_j[i:]:
                    form.add(("x", la), ("x", lb),
                             base * Poly.const(nt, sa * sb))
    return form


def _gprime_closed_form(g, ta):
    """2^g' prod 2(W - eps) for the dummy-extended graph along J."""
    nt = g.L
    fat, _ = _fat_with_dummy(g, ta.dummy_target, ta.root_gap)
    tree = set(ta.t2) | {DUMMY}
    rosette = _rosette_of_fat(fat, tree, g.root)
    sgn = dict(rosette.loop_sign)
    pairs = []
    if ta.gprime_genus > 0:
        sub = rosette.remove_lines(ta.j)
        if sub.faces == 1:
            pairs = nice_crossings(sub)
    flips = {f: 1 for f in ta.j}
    for (a, b) in pairs:
        if sgn[a] * sgn[b] == 1:
            for f in ta.j:
                if rosette.crosses(f, a):
                    flips[f] = -flips[f]
    cf = Poly.const(nt, 2 ** ta.gprime_genus)
    w = Poly.W(nt)
    for f in sorted(ta.j, key=_nat_key):
        eps = sgn[f] * flips[f]
        cf = cf * (2 * w - Poly.const(nt, 2 * eps))
    return cf
