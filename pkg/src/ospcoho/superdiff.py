"""Symbolic differential operators on the superline R^{1|1}.

Functions F(x, theta) = f0(x) + f1(x) theta have polynomial coefficients
and theta^2 = 0. Operators are kept in the normal order
x^m theta^e1 dtheta^e2 dx^k; composition rewrites with

    dx o x^m   = x^m dx + m x^{m-1}      (Leibniz)
    dtheta o theta = 1 - theta o dtheta  (left-derivative convention)
    theta o theta = 0,  dtheta o dtheta = 0

while x and dx commute past theta and dtheta.

The contact structure enters through eta = dtheta + theta dx and
etabar = dtheta - theta dx: the bracket {F,G} = F G' - F' G +
1/2 eta(F) etabar(G) and the contact field X_G = G dx + 1/2 eta(G) etabar.
Scaled copies of X_1, X_x, X_{x^2}, X_theta, X_{x theta} realize
osp(1|2); the scaling constants are solved from the adopted bracket
table, not assumed.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import GENS, PARITY

_ZERO = Fraction(0)


def _falling(n, j):
    out = 1
    for i in range(j):
        out *= n - i
    return out


def _binom(n, j):
    out = 1
    for i in range(j):
        out = out * (n - i) // (i + 1)
    return out


def _dict_add(target, key, coeff):
    s = target.get(key, _ZERO) + coeff
    if s:
        target[key] = s
    else:
        target.pop(key, None)


class SFun:
    """Superline function: {(m, eps): Fraction} for x^m theta^eps."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def term(cls, m, eps, coeff=1):
        return cls({(m, eps): Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _dict_add(out, k, v)
        return SFun(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return SFun({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (m1, e1), v1 in self.terms.items():
            for (m2, e2), v2 in other.terms.items():
                if e1 and e2:
                    continue  # theta^2 = 0
                _dict_add(out, (m1 + m2, e1 + e2), v1 * v2)
        return SFun(out)

    def dx(self):
        out = {}
        for (m, e), v in self.terms.items():
            if m:
                _dict_add(out, (m - 1, e), m * v)
        return SFun(out)

    def parity(self):
        """0 or 1 when homogeneous, None for mixed or zero."""
        ps = {e for (_, e) in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SFun) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"SFun({self.terms})"


class OpPoly:
    """Operator polynomial: {(m, e1, e2, k): Fraction} in normal order."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def term(cls, m, e1, e2, k, coeff=1):
        return cls({(m, e1, e2, k): Fraction(coeff)})

    @classmethod
    def multiplication(cls, f):
        """The operator 'multiply by the superfunction f'."""
        return cls({(m, e, 0, 0): c for (m, e), c in f.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _dict_add(out, k, v)
        return OpPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return OpPoly({k: c * v for k, v in self.terms.items()})

    def compose(self, other):
        """Normal-ordered operator product self o other."""
        out = {}
        for (m1, a1, b1, k1), v1 in self.terms.items():
            for (m2, a2, b2, k2), v2 in other.terms.items():
                coeff0 = v1 * v2
                for j in range(min(k1, m2) + 1):
                    c = coeff0 * _binom(k1, j) * _falling(m2, j)
                    if not c:
                        continue
                    m = m1 + m2 - j
                    k = k1 - j + k2
                    # resolve dtheta^b1 against theta^a2, then merge the
                    # remaining theta power into theta^a1 and the
                    # remaining dtheta power into dtheta^b2
                    if b1 and a2:
                        # dtheta theta = 1 - theta dtheta
                        _dict_add(out, (m, a1, b2, k), c)
                        if not a1 and not b2:
                            _dict_add(out, (m, 1, 1, k), -c)
                    elif b1:
                        if not b2:
                            _dict_add(out, (m, a1, 1, k), c)
                    elif a2:
                        if not a1:
                            _dict_add(out, (m, 1, b2, k), c)
                    else:
                        _dict_add(out, (m, a1, b2, k), c)
        return OpPoly(out)

    def apply(self, f):
        """Evaluate the operator on a superfunction."""
        out = {}
        for (m, e1, e2, k), c in self.terms.items():
            for (u, v), cf in f.terms.items():
                if k > u:
                    continue
                coeff = c * cf * _falling(u, k)
                eps = v
                if e2:
                    if not eps:
                        continue
                    eps = 0
                eps += e1
                if eps > 1:
                    continue
                _dict_add(out, (u - k + m, eps), coeff)
        return SFun(out)

    def parity(self):
        ps = {(e1 + e2) % 2 for (_, e1, e2, _) in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def max_dx_order(self):
        return max((k for (_, _, _, k) in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, OpPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"OpPoly({op_str(self)})"


def graded_commutator(p, q):
    """[p, q] = p o q - (-1)^{pq} q o p for parity-homogeneous p, q."""
    sign = -1 if p.parity() and q.parity() else 1
    return p.compose(q) - q.compose(p).scale(sign)


ETA = OpPoly({(0, 0, 1, 0): 1, (0, 1, 0, 1): 1})
ETABAR = OpPoly({(0, 0, 1, 0): 1, (0, 1, 0, 1): -1})


def contact_bracket(f, g):
    """{F,G} = F G' - F' G + 1/2 eta(F) etabar(G)."""
    out = f * g.dx() - f.dx() * g
    return out + (ETA.apply(f) * ETABAR.apply(g)).scale(Fraction(1, 2))


def vector_field(g):
    """X_G = G dx + 1/2 eta(G) etabar."""
    gdx = OpPoly({(m, e, 0, 1): c for (m, e), c in g.terms.items()})
    half_eta = OpPoly.multiplication(ETA.apply(g)).scale(Fraction(1, 2))
    return gdx + half_eta.compose(ETABAR)


def density_action(g, lam):
    """First-order action of X_G on weight-lam densities."""
    return vector_field(g) + OpPoly.multiplication(g.dx()).scale(lam)


# symbols of the base contact fields, in generator order
_BASE_SYMBOLS = {
    "X": SFun.term(0, 0),   # 1
    "A": SFun.term(0, 1),   # theta
    "H": SFun.term(1, 0),   # x
    "B": SFun.term(1, 1),   # x theta
    "Y": SFun.term(2, 0),   # x^2
}


@dataclass(frozen=True)
class RealizationConstants:
    """Scalings g = c_g X_{symbol(g)} realizing the adopted bracket table."""

    cH: Fraction
    cX: Fraction
    cY: Fraction
    cA: Fraction
    cB: Fraction

    def scale_of(self, gen):
        return {"H": self.cH, "X": self.cX, "Y": self.cY,
                "A": self.cA, "B": self.cB}[gen]

    def symbol(self, gen):
        return _BASE_SYMBOLS[gen].scale(self.scale_of(gen))

    def field(self, gen):
        return vector_field(self.symbol(gen))


def fields_match_table(consts, table):
    """All 25 graded commutators of the scaled fields equal the table."""
    fields = {g: consts.field(g) for g in GENS}
    return _partial_match(fields, table, GENS)


def _partial_match(fields, table, assigned):
    for u, v in itertools.product(assigned, repeat=2):
        row = table.bracket(u, v)
        if any(g not in fields for g in row):
            continue
        lhs = graded_commutator(fields[u], fields[v])
        rhs = OpPoly()
        for g, c in row.items():
            rhs = rhs + fields[g].scale(c)
        if lhs != rhs:
            return False
    return True


_CANDIDATE_SCALES = tuple(
    s * Fraction(n, d)
    for n, d in ((1, 1), (2, 1), (4, 1), (1, 2), (1, 4))
    for s in (1, -1)
)


def solve_realization_constants(table):
    """Solve the five field scalings from the bracket table.

    Backtracking over candidate rationals (+-1, +-2, +-4, +-1/2, +-1/4
    per generator); each partial assignment is pruned against every
    bracket row it already determines, and a full assignment is accepted
    only if all 25 commutators reproduce the table exactly.
    """
    order = ("X", "H", "Y", "A", "B")  # gauge first, cheap prunes early

    def extend(scales, depth):
        if depth == len(order):
            return scales
        g = order[depth]
        fields = {h: vector_field(_BASE_SYMBOLS[h].scale(c))
                  for h, c in scales.items()}
        for c in _CANDIDATE_SCALES:
            fields[g] = vector_field(_BASE_SYMBOLS[g].scale(c))
            if _partial_match(fields, table, order[:depth + 1]):
                found = extend({**scales, g: c}, depth + 1)
                if found is not None:
                    return found
        return None

    scales = extend({}, 0)
    if scales is None:
        raise ValueError("no realization constants reproduce the table")
    return RealizationConstants(cH=scales["H"], cX=scales["X"],
                                cY=scales["Y"], cA=scales["A"],
                                cB=scales["B"])


def derived_module_action(gen, op, lam, mu, consts):
    """Action of a generator on an operator from lam- to mu-densities.

    This is the commutator construction
    L^mu_G o T - (-1)^{T G} T o L^lam_G, a representation by
    construction; it serves as the oracle for the tabulated action.
    """
    g = consts.symbol(gen)
    l_mu = density_action(g, mu)
    l_lam = density_action(g, lam)
    sign = -1 if PARITY[gen] and op.parity() else 1
    return l_mu.compose(op) - op.compose(l_lam).scale(sign)


# --- pretty-printing and parsing ------------------------------------------

def _factor_str(base, power):
    if power == 0:
        return ""
    if power == 1:
        return base
    return f"{base}^{power}"


def op_str(op):
    """Operator in the classical notation, e.g. '3/2 x^2 θ ∂x^3 - ∂θ'."""
    if not op.terms:
        return "0"
    parts = []
    for key in sorted(op.terms):
        m, e1, e2, k = key
        c = op.terms[key]
        factors = [f for f in (_factor_str("x", m), _factor_str("θ", e1),
                               _factor_str("∂θ", e2), _factor_str("∂x", k))
                   if f]
        body = " ".join(factors) if factors else "1"
        if c == 1:
            term = body
        elif c == -1:
            term = f"-{body}" if factors else "-1"
        else:
            term = f"{c} {body}" if factors else f"{c}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


_ALIASES = {"theta": "θ", "dθ": "∂θ", "dtheta": "∂θ", "dx": "∂x",
            "∂_x": "∂x", "∂_θ": "∂θ"}


def parse_op(text):
    """Parse the grammar emitted by op_str back into an OpPoly."""
    text = text.strip()
    if not text or text == "0":
        return OpPoly()
    text = text.replace(" - ", " + -")
    out = OpPoly()
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = Fraction(1)
        if chunk.startswith("-"):
            coeff = -coeff
            chunk = chunk[1:]
        m = e1 = e2 = k = 0
        for tok in chunk.split():
            base, _, power = tok.partition("^")
            base = _ALIASES.get(base, base)
            power = int(power) if power else 1
            if base == "x":
                m += power
            elif base == "θ":
                e1 += power
            elif base == "∂θ":
                e2 += power
            elif base == "∂x":
                k += power
            elif base == "1":
                pass
            else:
                coeff *= Fraction(base) ** power
        out = out + OpPoly.term(m, e1, e2, k, coeff)
    return out
