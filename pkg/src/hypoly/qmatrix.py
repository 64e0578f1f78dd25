"""Matrix builders for the quadratic form of a 4-valent ribbon graph.

From a graph we build the incidence arrays, the diagonal short-variable
weight A, the antisymmetric couplings B (with the 1/Omega scale s on the
internal block) and its integer companion B', the external coupling P, and
the rosette-reduced form of B' together with the triangular change of
variables that decouples genus pairs (the "fourth Filk move").

Matrix entries are Poly values in t1..tL, s, W; everything is exact.
"""

from fractions import Fraction

from .poly import Poly
from .ribbon import InternalConsistencyError, _nat_key, slot_sign


def omega_order(i, j):
    """Antisymmetric corner order factor: +1 if i<j, -1 if i>j, 0 if i=j."""
    return (i < j) - (i > j)


class SkewPolyMatrix:
    """Square antisymmetric matrix of Poly entries with labelled indices."""

    def __init__(self, labels, nt, entries=None):
        self.labels = list(labels)
        self.nt = nt
        d = len(self.labels)
        self.entries = [[Poly.zero(nt) for _ in range(d)] for _ in range(d)]
        if entries is not None:
            for i in range(d):
                for j in range(d):
                    self.entries[i][j] = entries[i][j]
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self):
        return len(self.labels)

    def entry(self, a, b):
        return self.entries[self.index[a]][self.index[b]]

    def add_at(self, a, b, value):
        """Accumulate value at (a, b) and -value at (b, a)."""
        i, j = self.index[a], self.index[b]
        if i == j:
            raise ValueError("diagonal of a skew matrix must stay zero")
        self.entries[i][j] = self.entries[i][j] + value
        self.entries[j][i] = self.entries[j][i] - value

    def is_antisymmetric(self):
        d = self.dim
        for i in range(d):
            if not self.entries[i][i].is_zero():
                return False
            for j in range(i + 1, d):
                if self.entries[i][j] != -self.entries[j][i]:
                    return False
        return True

    def minor_by_indices(self, deleted):
        deleted = set(deleted)
        if len(deleted) != len(set(deleted)):
            raise ValueError("duplicate indices in minor")
        keep = [i for i in range(self.dim) if i not in deleted]
        m = SkewPolyMatrix([self.labels[i] for i in keep], self.nt)
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                m.entries[a][b] = self.entries[i][j]
        return m

    def minor_by_labels(self, deleted_labels):
        return self.minor_by_indices([self.index[l] for l in deleted_labels])

    def congruence(self, u):
        """U^T M U for a scalar coefficient matrix u (list of lists)."""
        d = self.dim
        mu = [[Poly.zero(self.nt) for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                acc = Poly.zero(self.nt)
                for k in range(d):
                    if u[k][j]:
                        acc = acc + self.entries[i][k] * u[k][j]
                mu[i][j] = acc
        out = SkewPolyMatrix(self.labels, self.nt)
        for i in range(d):
            for j in range(d):
                acc = Poly.zero(self.nt)
                for k in range(d):
                    if u[k][i]:
                        acc = acc + mu[k][j] * u[k][i]
                out.entries[i][j] = acc
        return out

    def to_json(self):
        ent = []
        for i in range(self.dim):
            for j in range(self.dim):
                if not self.entries[i][j].is_zero():
                    ent.append([list(self.labels[i]), list(self.labels[j]),
                                self.entries[i][j].canonical()])
        return {"dim": self.dim,
                "labels": [list(l) for l in self.labels],
                "entries": ent}

    def __repr__(self):
        return "SkewPolyMatrix(dim=%d)" % self.dim


# ---- incidence ----

class Incidence:
    """eps[line][corner] = (-1)^(i+1) where the line hooks that corner."""

    def __init__(self, g):
        self.graph = g
        self.corners = [(v, i) for v in g.vertex_ids for i in range(4)]
        cidx = {c: k for k, c in enumerate(self.corners)}
        self.eps = []
        self.eta = []
        for lid in g.line_ids:
            row = [0] * len(self.corners)
            for end in ("head", "tail"):
                v, i = g.lines[lid][end]
                row[cidx[(v, i)]] = slot_sign(i)
            self.eps.append(row)
            self.eta.append([abs(x) for x in row])


def build_incidence(g):
    return Incidence(g)


# ---- diagonal A ----

class DiagA:
    """Diagonal (1+t^2)/(2t) weights on the short-variable indices."""

    def __init__(self, g):
        self.graph = g
        nt = g.L
        self.pairs = {}
        for k, lid in enumerate(g.line_ids):
            num = Poly.one(nt) + Poly.t(nt, k + 1) ** 2
            den = 2 * Poly.t(nt, k + 1)
            self.pairs[("u", lid)] = (num, den)

    def eval_entry(self, label, point):
        if label not in self.pairs:
            return Fraction(0)
        num, den = self.pairs[label]
        d = den.eval(point)
        if d == 0:
            raise ZeroDivisionError("t=0 is a pole of the diagonal weight")
        return num.eval(point) / d


def build_A(g):
    return DiagA(g)


# ---- the B matrices ----

def matrix_labels(g):
    lines = g.line_ids
    verts = [v for v in g.vertex_ids if v != g.root]
    return ([("u", l) for l in lines] + [("v", l) for l in lines]
            + [("p", v) for v in verts])


def _vertex_pair_sum(g, v, la, lb, kind_a, kind_b):
    """sum over corner pairs (i, j) at v of
    (-1)^(i+j+1) * omega(i, j) * x_{la,i} * y_{lb,j}
    with x, y = eps or eta according to kind_a/kind_b."""
    total = 0
    for (i, ei) in g.hooked_corners(la, v):
        a = ei if kind_a == "eps" else 1
        for (j, ej) in g.hooked_corners(lb, v):
            if i == j:
                continue
            b = ej if kind_b == "eps" else 1
            par = -1 if (i + j) % 2 == 0 else 1   # (-1)^(i+j+1), 1-based i,j
            total += par * omega_order(i, j) * a * b
    return total


def _c_column(g, v):
    """Hypermomentum couplings of vertex v: label ('u'|'v', lid) -> int."""
    col = {}
    for lid in g.line_ids:
        cu = sum(slot_sign(i) * ei for (i, ei) in g.hooked_corners(lid, v))
        cv = sum(slot_sign(i) for (i, _) in g.hooked_corners(lid, v))
        if cu:
            col[("u", lid)] = cu
        if cv:
            col[("v", lid)] = cv
    return col


def build_B(g):
    """The antisymmetric matrices (B, B') of dimension 2L + n - 1.

    B carries the factor s on the internal (u, v) block; B' is its
    integer-entry companion (apart from the 2*W short/long diagonal).
    """
    nt = g.L
    labels = matrix_labels(g)
    b = SkewPolyMatrix(labels, nt)
    bp = SkewPolyMatrix(labels, nt)
    s = Poly.s(nt)
    w2 = 2 * Poly.W(nt)

    for ka, la in enumerate(g.line_ids):
        for kb, lb in enumerate(g.line_ids):
            e_uv = sum(_vertex_pair_sum(g, v, la, lb, "eps", "eta")
                       for v in g.vertex_ids)
            if la == lb:
                val = Poly.const(nt, e_uv) + w2
            else:
                val = Poly.const(nt, e_uv)
            if not val.is_zero():
                bp.add_at(("u", la), ("v", lb), val)
                b.add_at(("u", la), ("v", lb), s * val)
            if kb > ka:
                e_uu = sum(_vertex_pair_sum(g, v, la, lb, "eps", "eps")
                           for v in g.vertex_ids)
                e_vv = sum(_vertex_pair_sum(g, v, la, lb, "eta", "eta")
                           for v in g.vertex_ids)
                if e_uu:
                    bp.add_at(("u", la), ("u", lb), Poly.const(nt, e_uu))
                    b.add_at(("u", la), ("u", lb), s * e_uu)
                if e_vv:
                    bp.add_at(("v", la), ("v", lb), Poly.const(nt, e_vv))
                    b.add_at(("v", la), ("v", lb), s * e_vv)

    for v in g.vertex_ids:
        if v == g.root:
            continue
        for lab, c in _c_column(g, v).items():
            bp.add_at(lab, ("p", v), Poly.const(nt, c))
            b.add_at(lab, ("p", v), Poly.const(nt, c))
    return b, bp


# ---- external couplings P ----

class PMatrix:
    """Rows: external legs and the root hypermomentum; columns: (u, v, p)."""

    def __init__(self, g):
        if g.N == 0:
            raise ValueError("vacuum graph: no external couplings to build")
        nt = g.L
        self.graph = g
        self.col_labels = matrix_labels(g)
        self.row_labels = ([("x", e) for e in sorted(g.externals, key=_nat_key)]
                           + [("pbar", g.root)])
        self.entries = {}
        for e, (v, k0) in g.externals.items():
            k = k0 + 1
            row = {}
            for lid in g.line_ids:
                cu = cv = 0
                for (i, ei) in g.hooked_corners(lid, v):
                    cu += 2 * omega_order(i, k) * ei
                    cv += 2 * omega_order(i, k)
                if cu:
                    row[("u", lid)] = cu
                if cv:
                    row[("v", lid)] = cv
            if v != g.root:
                row[("p", v)] = slot_sign(k0)
            self.entries[("x", e)] = row
        self.entries[("pbar", g.root)] = _c_column(g, g.root)
        self.nt = nt

    def value(self, row, col):
        return self.entries.get(row, {}).get(col, 0)

    def row_vector(self, row, col_labels=None):
        cols = col_labels if col_labels is not None else self.col_labels
        return [self.value(row, c) for c in cols]


def build_P(g):
    return PMatrix(g)


# ---- rosette-reduced B' ----

def reduced_bprime(rosette, j0):
    """Matrix over (u_f for f in j0, w_l for loop lines l), read from the
    contracted-vertex factor of the rosette.

    Valid for an admissible j0 of leading size (dual-tree lines); entries
    combine the 2*W propagator coupling with the order-relation couplings
    of the surviving loop lines.
    """
    g = rosette.graph
    nt = g.L
    loops = rosette.loop_lines
    j0 = sorted(set(j0), key=_nat_key)
    for f in j0:
        if f not in loops:
            raise ValueError("%r is not a loop line of this rosette" % f)
    labels = [("u", f) for f in j0] + [("w", l) for l in loops]
    m = SkewPolyMatrix(labels, nt)
    sgn = rosette.loop_sign
    ju = set(j0)
    w2 = 2 * Poly.W(nt)

    for l in loops:
        if l in ju:
            # propagator short/long coupling plus the tree-reduction term
            m.add_at(("u", l), ("w", l), w2 - Poly.const(nt, 2 * sgn[l]))
    for a in loops:
        for b in loops:
            if a == b:
                continue
            if rosette.precedes(a, b):
                # a entirely before b
                if a in ju and b in ju:
                    m.add_at(("u", b), ("u", a), Poly.const(nt, 4))
            if rosette.nested(a, b):
                # a strictly inside b
                if a in ju:
                    m.add_at(("w", b), ("u", a), Poly.const(nt, 4 * sgn[b]))
        for b in loops:
            if _nat_key(a) < _nat_key(b) and rosette.crosses(a, b):
                late, early = ((a, b) if rosette.span(b)[0] < rosette.span(a)[0]
                               else (b, a))
                if early in ju:
                    m.add_at(("w", late), ("u", early),
                             Poly.const(nt, 2 * sgn[late]))
                if late in ju:
                    m.add_at(("w", early), ("u", late),
                             Poly.const(nt, 2 * sgn[early]))
                if late in ju and early in ju:
                    m.add_at(("u", early), ("u", late), Poly.const(nt, 2))
                m.add_at(("w", early), ("w", late),
                         Poly.const(nt, 2 * sgn[late] * sgn[early]))
    return m


# ---- fourth Filk move ----

def fourth_filk(m, pairs):
    """Decouple each genus pair from the rest of the reduced matrix by a
    unit-Jacobian triangular change of variables.

    ``pairs`` are the nice-crossing line pairs of the one-face rosette left
    after removing the dual-tree lines.  The Pfaffian is preserved exactly;
    the result has no couplings between the genus block and the rest, and
    the face block keeps its triangular structure with 2(W +- 1) diagonal.
    """
    if not pairs:
        return m
    genus_ids = set()
    for a, b in pairs:
        genus_ids.update((a, b))
    face_ids = [lab[1] for lab in m.labels
                if lab[0] == "w" and lab[1] not in genus_ids]

    out = m
    for a, b in pairs:
        out = _decouple_pair(out, ("w", a), ("w", b))

    for f in face_ids:
        for gline in sorted(genus_ids, key=_nat_key):
            if not out.entry(("w", f), ("w", gline)).is_zero():
                raise InternalConsistencyError(
                    "face/genus long coupling (%r, %r) survived" % (f, gline))
            if ("u", f) in out.index and \
                    not out.entry(("u", f), ("w", gline)).is_zero():
                raise InternalConsistencyError(
                    "short/genus coupling (%r, %r) survived" % (f, gline))
        for f2 in face_ids:
            if not out.entry(("w", f), ("w", f2)).is_zero():
                raise InternalConsistencyError(
                    "face/face long coupling (%r, %r) nonzero" % (f, f2))
    return out


def _decouple_pair(m, la, lb):
    d = m.dim
    ia, ib = m.index[la], m.index[lb]
    pivot = m.entries[ia][ib].as_constant()
    if not pivot:
        raise InternalConsistencyError("vanishing genus pivot at %r,%r"
                                       % (la, lb))
    u = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for y in range(d):
        if y in (ia, ib):
            continue
        c = m.entries[y][ib].as_constant()
        if c is None:
            raise InternalConsistencyError("non-constant genus coupling")
        if c:
            u[ia][y] = -c / pivot
        c2 = m.entries[y][ia].as_constant()
        if c2 is None:
            raise InternalConsistencyError("non-constant genus coupling")
        if c2:
            u[ib][y] = -c2 / (-pivot)
    return m.congruence(u)


def closed_form_factors(m, j0, pairs):
    """(closed_form Poly, eps signs) from a fourth-Filk-reduced matrix.

    The Pfaffian of the block form is 2^g times the product of the
    2(W - eps) diagonal couplings, up to sign.
    """
    nt = m.nt
    signs = {}
    cf = Poly.one(nt)
    for f in sorted(j0, key=_nat_key):
        diag = m.entry(("u", f), ("w", f))
        c = (diag - 2 * Poly.W(nt)).as_constant()
        if c is None or abs(c) != 2:
            raise InternalConsistencyError(
                "diagonal entry for %r is not 2(W +- 1): %s"
                % (f, diag.canonical()))
        signs[f] = -c / 2
        cf = cf * diag
    for a, b in pairs:
        piv = m.entry(("w", a), ("w", b)).as_constant()
        if piv is None or abs(piv) != 2:
            raise InternalConsistencyError(
                "genus pivot (%r, %r) is not +-2" % (a, b))
        cf = cf * 2
    return cf, signs
