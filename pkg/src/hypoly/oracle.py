"""Independent exact linear-algebra oracle at rational parameter points.

Everything here evaluates matrices numerically over the rationals (or
Gaussian rationals for the 4-fold quadratic form) and never touches the
symbolic Pfaffian route, so agreement between the two is a genuine
cross-check with zero tolerance.
"""

from fractions import Fraction

from .qmatrix import build_A, build_B, build_P, matrix_labels


class OracleSingularError(ArithmeticError):
    """A sampled point made a matrix singular; resample and retry."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


# ---- sampling ----

def rand_unit_fraction(rng):
    """Random rational strictly inside (0, 1), denominators <= 97."""
    den = rng.randint(2, 97)
    return Fraction(rng.randint(1, den - 1), den)


def rand_fraction(rng):
    """Random rational in [0, 1] range-ish with small denominators."""
    den = rng.randint(1, 97)
    return Fraction(rng.randint(0, 97), den)


def sample_point(g, rng, omega=None, s=None):
    """A full variable assignment with every t in (0, 1)."""
    point = {}
    for i in range(g.L):
        point["t%d" % (i + 1)] = rand_unit_fraction(rng)
    point["s"] = s if s is not None else rand_unit_fraction(rng)
    point["W"] = omega if omega is not None else rand_unit_fraction(rng)
    return point


# ---- dense rational linear algebra ----

def _lcm(a, b):
    import math
    return a // math.gcd(a, b) * b


def _to_integer_matrix(rows):
    """(integer matrix, scale) with scale * rows integral."""
    den = 1
    for r in rows:
        for x in r:
            den = _lcm(den, Fraction(x).denominator)
    out = []
    for r in rows:
        out.append([int(Fraction(x) * den) for x in r])
    return out, den


def bareiss_det(rows):
    """Fraction-free elimination determinant; exact for any field.

    Fraction matrices are scaled to integers first so the Bareiss
    intermediates stay minors (no gcd churn on huge rationals).
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, (int, Fraction)) for r in rows for x in r):
        a, den = _to_integer_matrix(rows)
        d = _bareiss_int_det(a)
        return Fraction(d, den ** n)
    return _bareiss_generic_det([list(r) for r in rows])


def _bareiss_int_det(a):
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _bareiss_generic_det(a):
    n = len(a)
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = val if prev is None else val / prev
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def invert(rows, point=None):
    """Exact inverse via integer fraction-free Gauss-Jordan (Montante).

    The matrix is scaled to integers; the one-step division-free update
    keeps every intermediate an exact minor, and a single division by the
    final pivot recovers the rational inverse.
    """
    n = len(rows)
    if n == 0:
        return []
    m, den = _to_integer_matrix(rows)
    a = [m[i] + [den if j == i else 0 for j in range(n)] for i in range(n)]
    prev = 1
    for k in range(n):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise OracleSingularError("singular matrix at sampled point",
                                          point)
        piv = a[k][k]
        for i in range(n):
            if i == k:
                continue
            f = a[i][k]
            for j in range(2 * n):
                a[i][j] = (a[i][j] * piv - f * a[k][j]) // prev
        prev = piv
    return [[Fraction(a[i][n + j], a[i][i]) for j in range(n)]
            for i in range(n)]


def eval_skew(m, point):
    """Numeric rows of a SkewPolyMatrix at a rational point."""
    return [[e.eval(point) for e in row] for row in m.entries]


def ab_matrix_at(g, point, sign=1, b=None):
    """(A + sign*B) evaluated at a point; A is the (1+t^2)/(2t) diagonal."""
    if b is None:
        b = build_B(g)[0]
    a = build_A(g)
    rows = eval_skew(b, point)
    if sign < 0:
        rows = [[-x for x in row] for row in rows]
    for i, lab in enumerate(b.labels):
        if lab in a.pairs:
            rows[i][i] = rows[i][i] + a.eval_entry(lab, point)
    return rows


def det_AB_at(g, point, b=None):
    """Exact det(A+B) at a rational point with every t nonzero."""
    for i in range(g.L):
        if point["t%d" % (i + 1)] == 0:
            raise ValueError("t%d=0 is a pole of A" % (i + 1))
    return bareiss_det(ab_matrix_at(g, point, 1, b))


def hu_check_at(g, hu_poly, point, b=None):
    """det(A+B) * prod(t) == HU at the point, both sides exact."""
    prod_t = Fraction(1)
    for i in range(g.L):
        prod_t *= point["t%d" % (i + 1)]
    return det_AB_at(g, point, b) * prod_t == hu_poly.eval(point)


def pqinvpt_at(g, point, b=None, p=None):
    """Real part of P Q^-1 P^t at a point, as a dict over row-label pairs.

    The real part of the inverse is ((A+B)^-1 + (A-B)^-1)/2; both inverses
    are computed independently.
    """
    if b is None:
        b = build_B(g)[0]
    if p is None:
        p = build_P(g)
    plus = invert(ab_matrix_at(g, point, 1, b), point)
    minus = invert(ab_matrix_at(g, point, -1, b), point)
    d = len(plus)
    sym = [[(plus[i][j] + minus[i][j]) / 2 for j in range(d)]
           for i in range(d)]
    cols = matrix_labels(g)
    rows = {r: p.row_vector(r, cols) for r in p.row_labels}
    out = {}
    for ra in p.row_labels:
        for rb in p.row_labels:
            acc = Fraction(0)
            va, vb = rows[ra], rows[rb]
            for i in range(d):
                if va[i]:
                    for j in range(d):
                        if vb[j]:
                            acc += va[i] * sym[i][j] * vb[j]
            out[(ra, rb)] = acc
    return out


# ---- Gaussian rationals and the 4-fold determinant identity ----

class QGauss:
    """Exact complex rational a + b*i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _qg(o)
        return QGauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _qg(o)
        return QGauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _qg(o) - self

    def __neg__(self):
        return QGauss(-self.re, -self.im)

    def __mul__(self, o):
        o = _qg(o)
        return QGauss(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _qg(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QGauss((self.re * o.re + self.im * o.im) / n,
                      (self.im * o.re - self.re * o.im) / n)

    def __eq__(self, o):
        o = _qg(o)
        return self.re == o.re and self.im == o.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        return "QGauss(%s, %s)" % (self.re, self.im)


def _qg(x):
    return x if isinstance(x, QGauss) else QGauss(x)


_I = QGauss(0, 1)
# sigma = diag(sigma_2, sigma_2) with sigma_2 = [[0, -i], [i, 0]]
_SIGMA = {(0, 1): -_I, (1, 0): _I, (2, 3): -_I, (3, 2): _I}


def detq_check(g, point, b=None):
    """det(A (x) I4 - B (x) sigma) == det(A+B)^4 over Gaussian rationals."""
    if b is None:
        b = build_B(g)[0]
    rows = eval_skew(b, point)
    a = build_A(g)
    d = len(rows)
    diag = [a.eval_entry(lab, point) for lab in b.labels]
    q = [[QGauss(0) for _ in range(4 * d)] for _ in range(4 * d)]
    for i in range(d):
        for mu in range(4):
            q[4 * i + mu][4 * i + mu] = QGauss(diag[i])
        for j in range(d):
            if rows[i][j]:
                for (mu, nu), sig in _SIGMA.items():
                    q[4 * i + mu][4 * j + nu] = \
                        q[4 * i + mu][4 * j + nu] - rows[i][j] * sig
    det_q = bareiss_det(q)
    det_ab = det_AB_at(g, point, b)
    return det_q == QGauss(det_ab ** 4)
