"""Sparse exact multivariate polynomials in t1..tL, s and W.

All coefficients are exact rationals (python Fractions; integer-valued in
almost every intermediate object, but the assembled graph polynomials pick
up dyadic denominators from the (1+t^2)/2 line weights).  The exponent key
of a term is a tuple of ``nt + 2`` non-negative ints: the exponents of
t1..t<nt>, then s, then W.  W is the ASCII spelling of the frequency
parameter Omega; the parser also accepts the UTF-8 spellings.
"""

from fractions import Fraction


class Poly:
    """Immutable-by-convention sparse polynomial over the rationals.

    ``nt`` is the number of t-variables; it is fixed per graph and all
    operands of a binary operation must agree on it.
    """

    __slots__ = ("nt", "terms")

    def __init__(self, nt, terms=None):
        self.nt = nt
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    if len(exps) != nt + 2:
                        raise ValueError("exponent tuple of wrong arity: %r" % (exps,))
                    if any(e < 0 for e in exps):
                        raise ValueError("negative exponent in %r" % (exps,))
                    self.terms[exps] = c

    # ---- constructors ----

    @classmethod
    def zero(cls, nt):
        return cls(nt)

    @classmethod
    def const(cls, nt, c):
        c = c if isinstance(c, Fraction) else Fraction(c)
        if c == 0:
            return cls(nt)
        return cls(nt, {tuple([0] * (nt + 2)): c})

    @classmethod
    def one(cls, nt):
        return cls.const(nt, 1)

    @classmethod
    def monomial(cls, nt, exps, c=1):
        return cls(nt, {tuple(exps): Fraction(c)})

    @classmethod
    def t(cls, nt, i):
        """The variable t_i, 1-based."""
        if not 1 <= i <= nt:
            raise ValueError("t index %d out of range 1..%d" % (i, nt))
        e = [0] * (nt + 2)
        e[i - 1] = 1
        return cls.monomial(nt, e)

    @classmethod
    def s(cls, nt):
        e = [0] * (nt + 2)
        e[nt] = 1
        return cls.monomial(nt, e)

    @classmethod
    def W(cls, nt):
        e = [0] * (nt + 2)
        e[nt + 1] = 1
        return cls.monomial(nt, e)

    # ---- ring operations ----

    def _check(self, other):
        if not isinstance(other, Poly):
            return Poly.const(self.nt, other)
        if other.nt != self.nt:
            raise ValueError("mixing polynomials with %d and %d t-variables"
                             % (self.nt, other.nt))
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            nc = out.get(e, 0) + c
            if nc:
                out[e] = nc
            elif e in out:
                del out[e]
        return Poly(self.nt, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nt, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly(self.nt)
            return Poly(self.nt, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                nc = out.get(e, 0) + c1 * c2
                if nc:
                    out[e] = nc
                elif e in out:
                    del out[e]
        return Poly(self.nt, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial power must be a non-negative int")
        result = Poly.one(self.nt)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nt, other)
        return isinstance(other, Poly) and self.nt == other.nt \
            and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.nt, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # ---- queries ----

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def t_degrees(self):
        """Set of total t-degrees over all monomials."""
        return {sum(e[:self.nt]) for e in self.terms}

    def degree_in(self, var):
        """Degree in one variable: 't3', 's' or 'W'."""
        i = _var_index(var, self.nt)
        return max((e[i] for e in self.terms), default=0)

    def coefficient_in(self, var, k):
        """Coefficient polynomial of var^k (var eliminated from the result)."""
        i = _var_index(var, self.nt)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                ne = e[:i] + (0,) + e[i + 1:]
                out[ne] = out.get(ne, 0) + c
        return Poly(self.nt, out)

    def as_constant(self):
        """Fraction value if the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return Fraction(c)
        return None

    def eval(self, point):
        """Exact value at a rational point.

        ``point`` maps every variable name appearing in the polynomial
        ('t1'..'tL', 's', 'W') to a Fraction; missing assignments raise.
        """
        names = _var_names(self.nt)
        vals = []
        for i, name in enumerate(names):
            if any(e[i] for e in self.terms):
                if name not in point:
                    raise KeyError("no value assigned to %s" % name)
                vals.append(Fraction(point[name]))
            else:
                vals.append(None)
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for i, k in enumerate(e):
                if k:
                    v *= vals[i] ** k
            total += v
        return total

    # ---- canonical text form ----

    def sorted_terms(self):
        """Terms in descending graded-lex order (t1 < ... < tL < s < W)."""
        return sorted(self.terms.items(),
                      key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def canonical(self):
        """Deterministic rendering; parses back to an equal polynomial."""
        if not self.terms:
            return "0"
        names = _var_names(self.nt)
        parts = []
        for e, c in self.sorted_terms():
            c = Fraction(c)
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append("%s^%d" % (names[i], k))
            mag = abs(c)
            if not factors:
                body = _frac_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _frac_str(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += " %s %s" % (sign, body)
        return out

    def to_json(self):
        return [{"exponents": list(e), "coeff": _frac_str(Fraction(c))}
                for e, c in self.sorted_terms()]

    def __repr__(self):
        return "Poly(%d, %s)" % (self.nt, self.canonical())


def _var_names(nt):
    return ["t%d" % (i + 1) for i in range(nt)] + ["s", "W"]


def _var_index(var, nt):
    if var == "s":
        return nt
    if var in ("W", "Omega", "Ω"):
        return nt + 1
    if var.startswith("t"):
        i = int(var[1:])
        if 1 <= i <= nt:
            return i - 1
    raise ValueError("unknown variable %r" % var)


def _frac_str(c):
    return str(c.numerator) if c.denominator == 1 else \
        "%d/%d" % (c.numerator, c.denominator)


# ---- parser for the canonical grammar ----
#
#   expr   := term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ('^' int)?
#   atom   := number | variable | '(' expr ')' | '-' atom
#
# Numbers may be integers or a/b fractions; variables are t<k>, s, W
# (UTF-8 Omega also accepted).

class PolyParseError(ValueError):
    pass


class _Parser:
    def __init__(self, text, nt):
        self.text = text
        self.pos = 0
        self.nt = nt

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse_expr(self):
        sign = 1
        while True:
            if self.take("-"):
                sign = -sign
            elif not self.take("+"):
                break
        total = self.parse_term() * sign
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                total = total + self.parse_term()
            elif c == "-":
                self.pos += 1
                total = total - self.parse_term()
            else:
                return total

    def parse_term(self):
        p = self.parse_factor()
        while self.take("*"):
            p = p * self.parse_factor()
        return p

    def parse_factor(self):
        a = self.parse_atom()
        if self.take("^"):
            return a ** self.parse_int()
        return a

    def parse_atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            e = self.parse_expr()
            if not self.take(")"):
                raise PolyParseError("missing ')' at %d in %r" % (self.pos, self.text))
            return e
        if c == "-":
            self.pos += 1
            return -self.parse_atom()
        if c.isdigit():
            num = self.parse_int()
            if self.take("/"):
                return Poly.const(self.nt, Fraction(num, self.parse_int()))
            return Poly.const(self.nt, num)
        if c == "s":
            self.pos += 1
            return Poly.s(self.nt)
        if c in ("W", "Ω"):
            self.pos += 1
            return Poly.W(self.nt)
        if c == "t":
            self.pos += 1
            return Poly.t(self.nt, self.parse_int())
        raise PolyParseError("unexpected %r at %d in %r" % (c, self.pos, self.text))

    def parse_int(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolyParseError("expected integer at %d in %r" % (start, self.text))
        return int(self.text[start:self.pos])


def parse_poly(text, nt):
    """Parse an expression in t1..t<nt>, s, W into a Poly."""
    p = _Parser(text, nt)
    result = p.parse_expr()
    p.skip_ws()
    if p.pos != len(text):
        raise PolyParseError("trailing input at %d in %r" % (p.pos, text))
    return result
