"""Exact Pfaffians, determinants and permutation signs for skew matrices.

The Pfaffian uses first-row expansion with memoization on index subsets;
the cache is shared across minors of one matrix, which is what the
subset sums over deleted short-variable indices need.  The determinant is
the division-free Berkowitz scheme, kept independent of the Pfaffian so
Pf^2 = det stays a real cross-check.
"""

from .poly import Poly
from .qmatrix import SkewPolyMatrix


class PfaffianCache:
    """Sub-Pfaffians of one skew matrix, keyed by the surviving indices."""

    def __init__(self, m):
        self.m = m
        self.memo = {(): Poly.one(m.nt)}

    def pf(self, indices):
        """Pfaffian of the minor on the given (sorted) index tuple."""
        key = tuple(indices)
        if len(key) % 2:
            raise ValueError("Pfaffian needs an even index set")
        got = self.memo.get(key)
        if got is not None:
            return got
        ent = self.m.entries
        i0 = key[0]
        total = Poly.zero(self.m.nt)
        row = ent[i0]
        for k in range(1, len(key)):
            e = row[key[k]]
            if e.is_zero():
                continue
            rest = key[1:k] + key[k + 1:]
            sub = self.pf(rest)
            if sub.is_zero():
                continue
            term = e * sub
            total = total + term if k % 2 == 1 else total - term
        self.memo[key] = total
        return total

    def pf_without(self, deleted):
        deleted = set(deleted)
        return self.pf(tuple(i for i in range(self.m.dim) if i not in deleted))


def pfaffian(m):
    """Pfaffian of an antisymmetric SkewPolyMatrix of even dimension."""
    if m.dim % 2:
        raise ValueError("Pfaffian of odd dimension %d" % m.dim)
    return PfaffianCache(m).pf(tuple(range(m.dim)))


class MinorSpec:
    """Symmetric row/column deletion, optionally with one extra index."""

    def __init__(self, deleted, tau=None):
        deleted = list(deleted)
        if len(deleted) != len(set(deleted)):
            raise ValueError("duplicate indices in minor spec")
        if tau is not None and tau in deleted:
            raise ValueError("tau must not belong to the deleted set")
        self.deleted = sorted(deleted)
        self.tau = tau

    def all_deleted(self):
        return self.deleted + ([self.tau] if self.tau is not None else [])


def minor(m, spec):
    """Delete the rows and matching columns of a MinorSpec."""
    return m.minor_by_indices(spec.all_deleted())


def perm_sign(deleted, tau, d):
    """Signature of moving the positions ``deleted`` and then ``tau`` to the
    end of (0..d-1), with tau first and the deleted set in descending order.
    """
    deleted = set(deleted)
    if tau in deleted:
        raise ValueError("tau collides with the deleted set")
    arrangement = [x for x in range(d) if x not in deleted and x != tau]
    arrangement.append(tau)
    arrangement.extend(sorted(deleted, reverse=True))
    inv = 0
    for i in range(len(arrangement)):
        for j in range(i + 1, len(arrangement)):
            if arrangement[i] > arrangement[j]:
                inv += 1
    return -1 if inv % 2 else 1


def det(m):
    """Division-free determinant (Berkowitz) of a square Poly matrix."""
    v = _berkowitz_vector(m.entries, m.nt)
    out = v[-1]
    return out if m.dim % 2 == 0 else -out


def _berkowitz_vector(a, nt):
    """Characteristic-polynomial coefficients [1, c1, ..., cn] of ``a``;
    det(a) = (-1)^n * c_n."""
    n = len(a)
    one = Poly.one(nt)
    if n == 0:
        return [one]
    if n == 1:
        return [one, -a[0][0]]
    sub = [row[1:] for row in a[1:]]
    row = a[0][1:]
    col = [a[i][0] for i in range(1, n)]
    items = [one, -a[0][0]]
    t = col
    for _ in range(n - 2):
        acc = Poly.zero(nt)
        for x, y in zip(row, t):
            acc = acc + x * y
        items.append(-acc)
        t = [_dot(sub[i], t, nt) for i in range(n - 1)]
    v = _berkowitz_vector(sub, nt)
    out = []
    for i in range(n + 1):
        acc = Poly.zero(nt)
        for j in range(max(0, i - len(items) + 1), min(i + 1, len(v))):
            if i - j < len(items):
                acc = acc + items[i - j] * v[j]
        out.append(acc)
    return out


def _dot(row, vec, nt):
    acc = Poly.zero(nt)
    for x, y in zip(row, vec):
        acc = acc + x * y
    return acc
