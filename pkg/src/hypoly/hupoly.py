"""The first hyperbolic polynomial of a rooted ribbon graph.

HU is assembled from the subset expansion of det(A+B): every line subset I
of the right parity contributes s^(2g-k_I) times the squared Pfaffian of
B' with the short-variable rows and columns of I deleted, weighted by
(1+t^2)/2 on I and t elsewhere.  The subset with every short index deleted
is the boundary term; the admissible subsets of leading size carry the
closed-form Pfaffians that the rosette route must reproduce.
"""

import random
from fractions import Fraction
from itertools import combinations

from .poly import Poly
from .pfaffian import PfaffianCache, pfaffian
from .qmatrix import (build_B, closed_form_factors, fourth_filk,
                      reduced_bprime)
from .ribbon import (InternalConsistencyError, _nat_key, admissible_sets,
                     build_rosette, nice_crossings, spanning_trees,
                     trace_faces)


class HUResult:
    def __init__(self, hu, terms, topology):
        self.hu = hu
        self.terms = terms      # list of dicts: I, k_i, n_i, contribution
        self.topology = topology

    def term_for(self, subset):
        subset = frozenset(subset)
        for t in self.terms:
            if t["I"] == subset:
                return t
        return None

    def to_dict(self):
        return {
            "topology": self.topology.to_dict(),
            "hu": self.hu.canonical(),
            "terms": [{"I": sorted(t["I"], key=_nat_key), "kI": t["k_i"],
                       "nI": t["n_i"].canonical()} for t in self.terms],
        }


def subset_weight(g, subset):
    """prod_{l in I} (1+t_l^2)/2 * prod_{l not in I} t_l."""
    nt = g.L
    half = Poly.const(nt, Fraction(1, 2))
    w = Poly.one(nt)
    for k, lid in enumerate(g.line_ids):
        tk = Poly.t(nt, k + 1)
        if lid in subset:
            w = w * (Poly.one(nt) + tk * tk) * half
        else:
            w = w * tk
    return w


def hu(g, topo=None, bprime=None, cache=None):
    """Full subset expansion of HU for the graph's declared root."""
    topo = topo or trace_faces(g)
    if bprime is None:
        _, bprime = build_B(g)
    cache = cache or PfaffianCache(bprime)
    nt = g.L
    n = g.n
    total = Poly.zero(nt)
    terms = []
    u_index = {lid: k for k, lid in enumerate(g.line_ids)}
    all_idx = tuple(range(bprime.dim))
    for r in range(g.L + 1):
        if (n + r) % 2 == 0:
            continue
        for combo in combinations(g.line_ids, r):
            deleted = {u_index[lid] for lid in combo}
            rest = tuple(i for i in all_idx if i not in deleted)
            n_i = cache.pf(rest)
            k_i = r - g.L - topo.F + 1
            spow = 2 * topo.genus - k_i
            if spow < 0:
                raise InternalConsistencyError(
                    "negative s power %d for I=%s" % (spow, combo))
            contribution = Poly.zero(nt)
            if not n_i.is_zero():
                contribution = (Poly.s(nt) ** spow) * n_i * n_i \
                    * subset_weight(g, set(combo))
                total = total + contribution
            terms.append({"I": frozenset(combo), "k_i": k_i, "n_i": n_i,
                          "contribution": contribution})
    return HUResult(total, terms, topo)


def boundary_pfaffian(g, bprime=None):
    """Pfaffian of B' with every short index deleted.

    Zero whenever that minor has odd dimension (the subset I = all lines
    then simply does not occur in the expansion); otherwise 0 for two or
    more faces and +-2^g for a single face.
    """
    if bprime is None:
        _, bprime = build_B(g)
    rest = tuple(range(g.L, bprime.dim))
    if len(rest) % 2:
        return Poly.zero(g.L)
    return PfaffianCache(bprime).pf(rest)


class LeadingTerm:
    def __init__(self, adm, n_i, closed_form, eps_signs, pairs):
        self.adm = adm                  # AdmissibleSet with |J0| = F-1
        self.j0 = adm.j0
        self.n_i = n_i
        self.closed_form = closed_form  # 2^g * prod 2(W - eps), sign-free
        self.eps_signs = eps_signs
        self.pairs = pairs

    def to_dict(self):
        return {"J0": sorted(self.j0, key=_nat_key),
                "nI": self.n_i.canonical(),
                "closedForm": self.closed_form.canonical()}


def min_tree_in(g, allowed):
    """Lexicographically first spanning tree inside an allowed line set."""
    allowed = set(allowed)
    for tree in spanning_trees(g):
        if tree.lines <= allowed:
            return tree
    return None


def leading_terms(g, topo=None, hu_result=None):
    """Leading admissible subsets with both Pfaffian routes compared.

    For each admissible J0 of size F-1: the direct minor Pfaffian n_I, the
    rosette-reduced matrix before and after the fourth Filk move (equal
    Pfaffians), and the 2^g prod 2(W +- 1) closed form; each route must
    reproduce n_I^2 exactly.
    """
    topo = topo or trace_faces(g)
    res = hu_result or hu(g, topo)
    out = []
    for adm in admissible_sets(g, topo):
        if not adm.leading:
            continue
        complement = adm.complement(g)
        term = res.term_for(complement)
        if term is None:
            raise InternalConsistencyError(
                "leading subset %s has the wrong parity" % sorted(adm.j0))
        n_i = term["n_i"]
        tree = min_tree_in(g, complement)
        if tree is None:
            raise InternalConsistencyError(
                "complement of admissible %s has no tree" % sorted(adm.j0))
        rosette = build_rosette(g, tree)
        red = reduced_bprime(rosette, adm.j0)
        pairs = []
        if topo.genus > 0:
            pairs = nice_crossings(rosette.remove_lines(adm.j0))
        pf_red = pfaffian(red)
        filked = fourth_filk(red, pairs)
        pf_filked = pfaffian(filked)
        if pf_filked != pf_red:
            raise InternalConsistencyError(
                "fourth Filk move changed the Pfaffian for J0=%s"
                % sorted(adm.j0))
        if pf_red * pf_red != n_i * n_i:
            raise InternalConsistencyError(
                "rosette and minor Pfaffians disagree for J0=%s"
                % sorted(adm.j0))
        cf, signs = closed_form_factors(filked, adm.j0, pairs)
        if cf * cf != n_i * n_i:
            raise InternalConsistencyError(
                "closed form disagrees with n_I for J0=%s" % sorted(adm.j0))
        out.append(LeadingTerm(adm, n_i, cf, signs, pairs))
    return out


def theorem_bound(g, topo=None, leading=None):
    """Sum of the leading closed-form terms: a lower bound for HU on
    0 < t, s and 0 <= W < 1."""
    topo = topo or trace_faces(g)
    leading = leading if leading is not None else leading_terms(g, topo)
    nt = g.L
    spow = 2 * (topo.genus + topo.F - 1)
    total = Poly.zero(nt)
    for lt in leading:
        complement = lt.adm.complement(g)
        total = total + (Poly.s(nt) ** spow) * lt.closed_form ** 2 \
            * subset_weight(g, complement)
    return total


def positivity_check(g, omegas, samples, seed, hu_result=None, bound=None):
    """Sampled positivity of HU and dominance over the leading-term bound.

    Every point has t in (0,1)^L and s in (0,1); omegas must lie in [0,1).
    Returns a report dict; any violation carries the witness point.
    """
    from .oracle import rand_unit_fraction

    topo = trace_faces(g)
    res = hu_result or hu(g, topo)
    leading = leading_terms(g, topo, res)
    bnd = bound if bound is not None else theorem_bound(g, topo, leading)
    failures = []
    checked = 0
    for omega in omegas:
        omega = Fraction(omega)
        if not 0 <= omega < 1:
            raise ValueError("omega %s outside [0,1)" % omega)
        rng = random.Random((seed, str(omega)).__repr__())
        for _ in range(samples):
            point = {"W": omega, "s": rand_unit_fraction(rng)}
            for i in range(g.L):
                point["t%d" % (i + 1)] = rand_unit_fraction(rng)
            hu_val = res.hu.eval(point)
            bound_val = bnd.eval(point)
            checked += 1
            if not hu_val > 0:
                failures.append({"point": point, "kind": "HU<=0",
                                 "hu": hu_val})
            elif not hu_val >= bound_val:
                failures.append({"point": point, "kind": "HU<bound",
                                 "hu": hu_val, "bound": bound_val})
    degree_ok = all(
        lt.n_i.degree_in("W") == topo.F - 1
        and not lt.n_i.coefficient_in("W", topo.F - 1).is_zero()
        and not lt.n_i.is_zero()
        for lt in leading)
    return {"ok": not failures and degree_ok, "checked": checked,
            "failures": failures, "leading_degree_ok": degree_ok,
            "leading_count": len(leading)}
