#!/usr/bin/env python3
"""Reconstruct the reference ribbon-graph fixtures from their published
invariants.

The original drawings for these graphs are not available, so each fixture
is recovered by enumerating (or sampling) orientable 4-valent ribbon
structures with the stated vertex/line/face counts and keeping a structure,
up to line relabelling, whose HU (or leading Pfaffian) matches the
published polynomial.  Results are written to fixtures/*.json with the
frozen canonical HU embedded.

Run from the repository root:
    python3 tools/reconstruct_fixtures.py [fixture ...]
"""

import itertools
import json
import os
import random
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hypoly.poly import Poly, parse_poly
from hypoly.ribbon import RibbonGraph, GraphValidationError, trace_faces, \
    admissible_sets
from hypoly.qmatrix import build_B
from hypoly.pfaffian import PfaffianCache
from hypoly.oracle import bareiss_det, ab_matrix_at
from hypoly.hupoly import hu

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


# ---- golden polynomials (factored forms, expanded symbolically) ----

def golden_hu():
    return {
        "tadpole_plus": parse_poly("4*s^2*t1*(W+1)^2", 1),
        "tadpole_minus": parse_poly("4*s^2*t1*(W-1)^2", 1),
        "bubble": parse_poly("2*s^2*(t1+t2+t1^2*t2+t1*t2^2)*(W-1)^2", 2),
        "broken_bubble": parse_poly(
            "2*s^2*((t2+t1^2*t2)*(W-1)^2+(t1+t1*t2^2)*(W+1)^2)", 2),
        "sunshine": parse_poly(
            "8*(1+W)^2*s^4*((W-1)^2*t2*t3+(W-1)^2*t1^2*t2*t3"
            "+(1+W)^2*t1*(t2+t3)*(1+t2*t3))", 3),
        "sunshine_np": parse_poly(
            "1/2*s^2*(1+16*(1+W^2)^2*s^2*t2*t3+t3^2+t2^2*(1+t3^2)"
            "+16*(-1+2*W+W^2)^2*s^2*t1*(t2+t3+t2^2*t3+t2*t3^2)"
            "+t1^2*(1+16*(1+W^2)^2*s^2*t2*t3+t3^2+t2^2*(1+t3^2)))", 3),
        "half_eye": parse_poly(
            "4*s^4*(W-1)^2*(W+1)^2*("
            "t3*t4+t2^2*t3*t4+t2*(t3+t4+t3^2*t4+t3*t4^2)"
            "+t1^2*(t3*t4+t2^2*t3*t4+t2*(t3+t4+t3^2*t4+t3*t4^2))"
            "+t1*((1+t2^2)*(t4+t3^2*t4)"
            "+t3*(1+64*s^2*t2*t4+t4^2+t2^2*(1+t4^2))))", 4),
        "eye": parse_poly(
            "8*(W-1)^4*(W+1)^2*s^6*("
            "t3*t4*(t5+t6)*(1+t5*t6)"
            "+t2^2*t3*t4*(t5+t6)*(1+t5*t6)"
            "+t2*(t4*(t5+t6)*(1+t5*t6)+t3^2*t4*(t5+t6)*(1+t5*t6)"
            " +t3*(t5+t6+t5*t6*(t5+t6)+t4^2*(t5+t6)*(1+t5*t6)"
            "  +t4*(1+64*W^2*s^2*t5*t6+t6^2+t5^2*(1+t6^2))))"
            "+t1*((1+t2^2)*t4*(t5+t6)*(1+t5*t6)"
            " +(1+t2^2)*t3^2*t4*(t5+t6)*(1+t5*t6)"
            " +t3*((1+t2^2)*(t5+t6)*(1+t5*t6)"
            "  +(1+t2^2)*t4^2*(t5+t6)*(1+t5*t6)"
            "  +t4*(1+t5^2+64*W^2*s^2*t5*t6+(1+t5^2)*t6^2"
            "   +64*W^2*s^2*t2*(t5+t6)*(1+t5*t6)"
            "   +t2^2*(1+t5^2+64*W^2*s^2*t5*t6+(1+t5^2)*t6^2))))"
            "+t1^2*(t3*t4*(t5+t6)*(1+t5*t6)+t2^2*t3*t4*(t5+t6)*(1+t5*t6)"
            " +t2*(t4*(t5+t6)*(1+t5*t6)+t3^2*t4*(t5+t6)*(1+t5*t6)"
            "  +t3*(t5+t6+t5*t6*(t5+t6)+t4^2*(t5+t6)*(1+t5*t6)"
            "   +t4*(1+64*W^2*s^2*t5*t6+t6^2+t5^2*(1+t6^2))))))", 6),
    }


# ---- lightweight candidate enumeration ----

def ext_distributions(n, num_ext):
    out = []

    def rec(prefix, left):
        if len(prefix) == n:
            if left == 0:
                out.append(tuple(prefix))
            return
        for e in range(0, min(3, left) + 1):
            rec(prefix + [e], left - e)

    rec([], num_ext)
    return out


def candidate_structures(n, L):
    """Slot tables of all orientable pairings, lines labelled by order."""
    num_ext = 4 * n - 2 * L
    vids = ["V%d" % k for k in range(n)]
    for dist in ext_distributions(n, num_ext):
        per_vertex = [list(itertools.combinations(range(4), e)) for e in dist]
        for ext_slots in itertools.product(*per_vertex):
            plus, minus = [], []
            for v, chosen in zip(vids, ext_slots):
                for i in range(4):
                    if i in chosen:
                        continue
                    (plus if i % 2 == 0 else minus).append((v, i))
            if len(plus) != L or len(minus) != L:
                continue
            for perm in itertools.permutations(range(L)):
                slots = {v: [None] * 4 for v in vids}
                for k in range(L):
                    hv, hi = plus[k]
                    tv, ti = minus[perm[k]]
                    slots[hv][hi] = {"line": str(k + 1), "end": "head"}
                    slots[tv][ti] = {"line": str(k + 1), "end": "tail"}
                ext = 1
                for v in vids:
                    for i in range(4):
                        if slots[v][i] is None:
                            slots[v][i] = {"ext": "x%d" % ext}
                            ext += 1
                yield slots


def random_structure(rng, n, L):
    vids = ["V%d" % k for k in range(n)]
    plus = [(v, i) for v in vids for i in (0, 2)]
    minus = [(v, i) for v in vids for i in (1, 3)]
    rng.shuffle(plus)
    rng.shuffle(minus)
    slots = {v: [None] * 4 for v in vids}
    for k in range(L):
        hv, hi = plus[k]
        tv, ti = minus[k]
        slots[hv][hi] = {"line": str(k + 1), "end": "head"}
        slots[tv][ti] = {"line": str(k + 1), "end": "tail"}
    ext = 1
    for v in vids:
        for i in range(4):
            if slots[v][i] is None:
                slots[v][i] = {"ext": "x%d" % ext}
                ext += 1
    return slots


def quick_topology(slots):
    """(connected, F, genus, B) for a slot table, without full validation."""
    ends = {}
    for v, arr in slots.items():
        for i, sl in enumerate(arr):
            if "line" in sl:
                ends[(sl["line"], sl["end"])] = (v, i)
    lines = {lid for (lid, _e) in ends}
    n = len(slots)
    parent = {v: v for v in slots}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for lid in lines:
        a, b = find(ends[(lid, "head")][0]), find(ends[(lid, "tail")][0])
        if a != b:
            parent[a] = b
    if len({find(v) for v in slots}) != 1:
        return False, 0, 0, 0
    darts = list(ends)
    seen = set()
    F = 0
    B = 0
    for start in darts:
        if start in seen:
            continue
        F += 1
        broken = False
        d = start
        while True:
            seen.add(d)
            lid, e = d
            other = "tail" if e == "head" else "head"
            v, i = ends[(lid, other)]
            for k in range(1, 5):
                sl = slots[v][(i + k) % 4]
                if "ext" in sl:
                    broken = True
                    continue
                d = (sl["line"], sl["end"])
                break
            if d == start:
                break
        if broken:
            B += 1
    euler = n - len(lines) + F
    if euler % 2:
        return False, 0, 0, 0
    return True, F, (2 - euler) // 2, B


# ---- polynomial matching with precomputed relabelling table ----

def probe_points(L, seed, count=2):
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pt = {"s": Fraction(rng.randint(1, 12), 13),
              "W": Fraction(rng.randint(1, 12), 13)}
        for i in range(1, L + 1):
            pt["t%d" % i] = Fraction(rng.randint(1, 30), 31)
        pts.append(pt)
    return pts


class LabelMatcher:
    """Maps HU probe values to the line relabelling that explains them."""

    def __init__(self, target, L, pts):
        self.pts = pts
        self.table = {}
        for perm in itertools.permutations(range(1, L + 1)):
            vals = []
            for pt in pts:
                assign = {"s": pt["s"], "W": pt["W"]}
                for i in range(1, L + 1):
                    assign["t%d" % perm[i - 1]] = pt["t%d" % i]
                vals.append(target.eval(assign))
            self.table.setdefault(tuple(vals), perm)

    def match(self, g):
        vals = []
        for pt in self.pts:
            v = bareiss_det(ab_matrix_at(g, pt, 1))
            for i in range(g.L):
                v *= pt["t%d" % (i + 1)]
            vals.append(v)
        return self.table.get(tuple(vals))


def relabel(slots, perm_table):
    out = {}
    for v, arr in slots.items():
        row = []
        for sl in arr:
            if "line" in sl:
                row.append({"line": str(perm_table[int(sl["line"]) - 1]),
                            "end": sl["end"]})
            else:
                row.append(dict(sl))
        out[v] = row
    return out


def search_hu(name, n, L, want, target, seed, bmax=None, exhaustive=False,
              tries=5000000):
    matcher = LabelMatcher(target, L, probe_points(L, seed=seed + 1))
    if exhaustive:
        source = candidate_structures(n, L)
    else:
        rng = random.Random(seed)
        source = (random_structure(rng, n, L) for _ in range(tries))
    count = 0
    for slots in source:
        count += 1
        conn, F, genus, B = quick_topology(slots)
        if not conn or (F, genus) != want:
            continue
        if bmax is not None and B > bmax:
            continue
        try:
            g = RibbonGraph(name, "V0", slots)
        except GraphValidationError:
            continue
        perm = matcher.match(g)
        if perm is None:
            continue
        g2 = RibbonGraph(name, "V0", relabel(slots, perm))
        if hu(g2).hu == target:
            print("  %s: matched after %d candidates" % (name, count))
            return g2
    raise SystemExit("no structure found for %s" % name)


def leading_pf_squares(g, topo, bprime, omega):
    """Numeric (J0, Pf^2) pairs for the leading admissible sets."""
    point = {"W": omega, "s": Fraction(1)}
    rows = [[e.eval(point) for e in row] for row in bprime.entries]
    u_idx = {lid: k for k, lid in enumerate(g.line_ids)}
    out = []
    for adm in admissible_sets(g, topo):
        if not adm.leading:
            continue
        deleted = {u_idx[lid] for lid in adm.complement(g)}
        keep = [i for i in range(bprime.dim) if i not in deleted]
        sub = [[rows[i][j] for j in keep] for i in keep]
        out.append((adm, bareiss_det(sub)))
    return out


def search_by_leading(name, n, L, want, wanted_pairs, seed, tries=5000000):
    """Random search for a structure whose leading Pfaffians match targets.

    ``wanted_pairs``: list of (requested final ids, Poly in W up to sign).
    After a hit, structure lines are permuted so each matched admissible
    set lands exactly on its requested ids, then reverified symbolically.
    """
    omega = Fraction(3, 7)
    tgt_vals = [(set(ids), p, p.eval({"W": omega}) ** 2)
                for ids, p in wanted_pairs]
    rng = random.Random(seed)
    for k in range(tries):
        slots = random_structure(rng, n, L)
        conn, F, genus, B = quick_topology(slots)
        if not conn or (F, genus) != want:
            continue
        g = RibbonGraph(name, "V0", slots)
        topo = trace_faces(g)
        _, bprime = build_B(g)
        hits = []
        used = set()
        ok = True
        for ids, p, val in tgt_vals:
            found = None
            for adm, det_val in leading_pf_squares(g, topo, bprime, omega):
                if adm.j0 in used:
                    continue
                if det_val == val and len(adm.j0) == len(ids):
                    found = adm.j0
                    used.add(adm.j0)
                    break
            if found is None:
                ok = False
                break
            hits.append((found, ids))
        if not ok:
            continue
        perm = {}
        clash = False
        for found, ids in hits:
            for a, b in zip(sorted(found, key=int), sorted(int(x) for x in ids)):
                if perm.get(int(a), b) != b:
                    clash = True
                perm[int(a)] = b
        if clash or len(set(perm.values())) != len(perm):
            continue
        rest_src = [i for i in range(1, L + 1) if i not in perm]
        rest_dst = [i for i in range(1, L + 1)
                    if i not in set(perm.values())]
        for a, b in zip(rest_src, rest_dst):
            perm[a] = b
        table = [perm[i] for i in range(1, L + 1)]
        g2 = RibbonGraph(name, "V0", relabel(slots, table))
        if _verify_leading(g2, wanted_pairs):
            print("  %s: matched after %d samples" % (name, k + 1))
            return g2
    raise SystemExit("no structure found for %s" % name)


def _verify_leading(g, wanted_pairs):
    topo = trace_faces(g)
    _, bprime = build_B(g)
    cache = PfaffianCache(bprime)
    u_idx = {lid: k for k, lid in enumerate(g.line_ids)}
    adm_by_set = {adm.j0: adm for adm in admissible_sets(g, topo)
                  if adm.leading}
    for ids, p in wanted_pairs:
        j0 = frozenset(str(i) for i in ids)
        if j0 not in adm_by_set:
            return False
        deleted = {u_idx[lid] for lid in g.line_ids if lid not in j0}
        n_i = cache.pf(tuple(i for i in range(bprime.dim)
                             if i not in deleted))
        tgt = Poly(g.L, dict(p.terms))
        if n_i != tgt and n_i != -tgt:
            return False
    return True


def write_fixture(g, filename, expected_hu=None, note=""):
    data = g.to_dict()
    topo = trace_faces(g)
    data["topology"] = {"n": topo.n, "L": topo.L, "F": topo.F,
                        "g": topo.genus, "B": topo.B, "N": topo.N}
    if expected_hu is not None:
        data["expected_hu"] = expected_hu.canonical()
    if note:
        data["note"] = note
    path = os.path.join(OUT_DIR, filename)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=1, sort_keys=True)
        f.write("\n")
    print("  wrote %s  (%s)" % (path, topo.summary()))


def build_direct():
    """The four smallest fixtures have known explicit slot tables."""
    targets = golden_hu()
    out = {}
    out["tadpole_plus"] = RibbonGraph("tadpole_plus", "V0", {
        "V0": [{"line": "1", "end": "head"}, {"line": "1", "end": "tail"},
               {"ext": "x1"}, {"ext": "x2"}]})
    out["tadpole_minus"] = RibbonGraph("tadpole_minus", "V0", {
        "V0": [{"ext": "x1"}, {"line": "1", "end": "tail"},
               {"line": "1", "end": "head"}, {"ext": "x2"}]})
    out["bubble"] = RibbonGraph("bubble", "V0", {
        "V0": [{"ext": "x1"}, {"line": "2", "end": "tail"},
               {"line": "1", "end": "head"}, {"ext": "x2"}],
        "V1": [{"ext": "x3"}, {"line": "1", "end": "tail"},
               {"line": "2", "end": "head"}, {"ext": "x4"}]})
    out["broken_bubble"] = RibbonGraph("broken_bubble", "V0", {
        "V0": [{"line": "1", "end": "head"}, {"ext": "x1"},
               {"line": "2", "end": "head"}, {"ext": "x2"}],
        "V1": [{"ext": "x3"}, {"line": "1", "end": "tail"},
               {"ext": "x4"}, {"line": "2", "end": "tail"}]})
    for name, g in out.items():
        assert hu(g).hu == targets[name], name
    return out


NOTES = {
    "tadpole_plus": "one-loop graph, loop on the first two corners",
    "tadpole_minus": "one-loop graph, loop straddling the corner-1 boundary",
    "bubble": "planar regular two-point bubble",
    "broken_bubble": "planar bubble with both faces broken; both vertices"
                     " carry opposite external legs",
    "sunshine": "planar regular three-line two-point graph",
    "sunshine_np": "genus-one three-line two-point graph",
    "half_eye": "planar regular four-line three-vertex graph",
    "eye": "planar regular six-line four-vertex graph",
    "twisted_eye": "genus-one six-line graph; the published vertex count"
                   " of this example violates the Euler relation, so the"
                   " fixture uses the four-vertex topology that reproduces"
                   " the published leading Pfaffians for lines 4 and 6",
    "nonplanar_eight": "genus-one eight-line five-vertex graph whose"
                       " admissible pair {7,8} carries the published"
                       " leading Pfaffian",
}


def main(argv):
    os.makedirs(OUT_DIR, exist_ok=True)
    targets = golden_hu()
    wanted = set(argv) if argv else {
        "tadpole_plus", "tadpole_minus", "bubble", "broken_bubble",
        "sunshine", "sunshine_np", "half_eye", "eye", "twisted_eye",
        "nonplanar_eight"}

    direct = build_direct()
    for name, g in direct.items():
        if name in wanted:
            print(name)
            write_fixture(g, name + ".json", targets[name], NOTES[name])

    if "sunshine" in wanted:
        print("sunshine (exhaustive search)")
        g = search_hu("sunshine", 2, 3, (3, 0), targets["sunshine"],
                      seed=11, bmax=1, exhaustive=True)
        write_fixture(g, "sunshine.json", targets["sunshine"],
                      NOTES["sunshine"])
    if "sunshine_np" in wanted:
        print("sunshine_np (exhaustive search)")
        g = search_hu("sunshine_np", 2, 3, (1, 1), targets["sunshine_np"],
                      seed=12, exhaustive=True)
        write_fixture(g, "sunshine_np.json", targets["sunshine_np"],
                      NOTES["sunshine_np"])
    if "half_eye" in wanted:
        print("half_eye (exhaustive search)")
        g = search_hu("half_eye", 3, 4, (3, 0), targets["half_eye"],
                      seed=13, bmax=1, exhaustive=True)
        write_fixture(g, "half_eye.json", targets["half_eye"],
                      NOTES["half_eye"])
    if "eye" in wanted:
        print("eye (random search)")
        g = search_hu("eye", 4, 6, (4, 0), targets["eye"], seed=2024, bmax=1)
        write_fixture(g, "eye.json", targets["eye"], NOTES["eye"])
    if "twisted_eye" in wanted:
        print("twisted_eye (random search on leading Pfaffians)")
        nw = parse_poly("4*W-4", 6)
        g = search_by_leading("twisted_eye", 4, 6, (2, 1),
                              [({"4"}, nw), ({"6"}, nw)], seed=515)
        write_fixture(g, "twisted_eye.json", None, NOTES["twisted_eye"])
    if "nonplanar_eight" in wanted:
        print("nonplanar_eight (random search on leading Pfaffians)")
        nw2 = parse_poly("8*(W-1)*(W+1)", 8)
        g = search_by_leading("nonplanar_eight", 5, 8, (3, 1),
                              [({"7", "8"}, nw2)], seed=99)
        write_fixture(g, "nonplanar_eight.json", None,
                      NOTES["nonplanar_eight"])
    print("done")


if __name__ == "__main__":
    main(sys.argv[1:])
