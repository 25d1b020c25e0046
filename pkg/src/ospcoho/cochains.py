"""Cochains of osp(1|2) and the graded Chevalley-Eilenberg differential.

A degree-n cochain stores one module value per canonical monomial;
evaluation on arbitrary generator tuples goes through `canonicalize`, so
the graded antisymmetry never has to be re-derived. The coboundary is
the two-sum Koszul formula

  (df)(U_0..U_n) =
      sum_i (-1)^i (-1)^{U_i(f + U_0+..+U_{i-1})} U_i f(.. ^i ..)
    + sum_{i<j} (-1)^{i+j} (-1)^{U_i(U_0+..+U_{i-1})}
                (-1)^{U_j(U_0+..+^i+..+U_{j-1})} f([U_i,U_j], .. ^i ^j ..)

with generator parities in the exponents. Restricting the generator
universe to (X, H, Y) turns the same formula into the classical sl(2)
differential (all parity exponents vanish).

Reduction to cochains vanishing on A-monomials is done by an exact
linear solve per cochain weight instead of the inductive construction;
the solve is guaranteed to succeed, and the output is verified.
"""

from fractions import Fraction

from . import linalg
from .algebra import (GENS, PARITY, SL2, adopted_table, canonicalize,
                      monomial_basis, monomial_parity, monomial_str,
                      monomial_weight, parse_monomial)
from .weightmod import (FAMILY_PARITY, TruncatedDlm, from_oppoly, to_oppoly,
                        vec_add, vec_from_json, vec_scale, vec_to_json)


class SolveFailed(RuntimeError):
    """An exact solve that the theory guarantees has failed."""


class NoCocycle(RuntimeError):
    """A cocycle template could not be realized; conventions are broken."""


class TypeMismatch(TypeError):
    """Cup-product factors with incompatible density weights."""


class Cochain:
    """Parity-homogeneous n-cochain with values in a truncated module."""

    __slots__ = ("mod", "degree", "parity", "values", "universe")

    def __init__(self, mod, degree, parity, values=None, universe=GENS):
        self.mod = mod
        self.degree = degree
        self.parity = parity
        self.universe = tuple(universe)
        self.values = {}
        for mono, vec in (values or {}).items():
            mono = tuple(mono)
            vec = {bv: Fraction(c) for bv, c in vec.items() if c}
            if not vec:
                continue
            want = (parity + monomial_parity(mono)) % 2
            for bv in vec:
                if FAMILY_PARITY[bv[0]] != want:
                    raise ValueError(
                        f"value {bv} on {monomial_str(mono)} breaks "
                        f"parity {parity} homogeneity")
            self.values[mono] = vec

    def evaluate(self, args):
        """Value on an arbitrary generator tuple (canonicalize + sign)."""
        if len(args) != self.degree:
            raise ValueError("tuple length must equal the cochain degree")
        mono, sign = canonicalize(args)
        if sign == 0:
            return {}
        vec = self.values.get(mono)
        if not vec:
            return {}
        return vec_scale(vec, sign)

    def is_zero(self):
        return not self.values

    def scale(self, c):
        return Cochain(self.mod, self.degree, self.parity,
                       {u: vec_scale(v, c) for u, v in self.values.items()},
                       self.universe)

    def add(self, other, coeff=Fraction(1)):
        vals = {u: dict(v) for u, v in self.values.items()}
        for u, v in other.values.items():
            vec_add(vals.setdefault(u, {}), v, coeff)
        return Cochain(self.mod, self.degree, self.parity, vals,
                       self.universe)

    def sub(self, other):
        return self.add(other, Fraction(-1))

    def weight_components(self):
        """Split into cochain-weight-homogeneous parts: {w: Cochain}."""
        parts = {}
        for u, vec in self.values.items():
            wu = monomial_weight(u)
            for bv, c in vec.items():
                w = self.mod.basis_weight(bv) - wu
                parts.setdefault(w, {}).setdefault(u, {})[bv] = c
        return {w: Cochain(self.mod, self.degree, self.parity, vals,
                           self.universe)
                for w, vals in sorted(parts.items())}

    def __eq__(self, other):
        return (isinstance(other, Cochain)
                and self.degree == other.degree
                and self.mod == other.mod
                and self.universe == other.universe
                and self.values == other.values)

    def __repr__(self):
        slots = ", ".join(monomial_str(u) for u in sorted(self.values))
        return (f"Cochain(deg={self.degree}, parity={self.parity}, "
                f"support=[{slots}])")


def zero_cochain(mod, degree, parity, universe=GENS):
    return Cochain(mod, degree, parity, {}, universe)


def _term1_sign(i, parities, prefix, q):
    s = -1 if i % 2 else 1
    if parities[i] and (q + prefix[i]) % 2:
        s = -s
    return s


def _term2_sign(i, j, parities, prefix):
    s = -1 if (i + j) % 2 else 1
    if parities[i] and prefix[i] % 2:
        s = -s
    if parities[j] and (prefix[j] - parities[i]) % 2:
        s = -s
    return s


def coboundary(f, table=None):
    """The differential of f; degree n+1, same parity, same weight."""
    table = table if table is not None else adopted_table()
    n = f.degree
    out = {}
    for target in monomial_basis(n + 1, f.universe):
        parities = [PARITY[g] for g in target]
        prefix = [0]
        for p in parities:
            prefix.append(prefix[-1] + p)
        acc = {}
        for i, gen in enumerate(target):
            sub = target[:i] + target[i + 1:]
            vec = f.values.get(sub)
            if vec:
                sgn = _term1_sign(i, parities, prefix, f.parity)
                vec_add(acc, f.mod.act(gen, vec), Fraction(sgn))
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                row = table.bracket(target[i], target[j])
                if not row:
                    continue
                rest = (target[:i] + target[i + 1:j] + target[j + 1:])
                sgn = _term2_sign(i, j, parities, prefix)
                for g, cg in row.items():
                    mono, s = canonicalize((g,) + rest)
                    if not s:
                        continue
                    vec = f.values.get(mono)
                    if vec:
                        vec_add(acc, vec, Fraction(sgn * s) * cg)
        if acc:
            out[target] = acc
    return Cochain(f.mod, n + 1, f.parity, out, f.universe)


# --- weight blocks of the differential -------------------------------------

def block_basis(mod, n, w, parity, universe=GENS):
    """Ordered basis [(monomial, BasisVector)] of the weight-w part of C^n.

    A delta cochain u -> bv has cochain parity parity(u) + parity(bv);
    the `parity` argument filters to one homogeneous component.
    """
    w = Fraction(w)
    out = []
    for u in monomial_basis(n, universe):
        bvpar = None
        if parity is not None:
            bvpar = (parity + monomial_parity(u)) % 2
        for bv in mod.weight_basis(w + monomial_weight(u), parity=bvpar):
            out.append((u, bv))
    return out


def delta_matrix(mod, n, w, parity, table=None, universe=GENS):
    """Exact matrix of d: C^n_w -> C^{n+1}_w on one parity component.

    Returns (domain_basis, codomain_basis, SparseMatrix); column c of
    the matrix is the coboundary of the delta cochain at domain_basis[c].
    """
    table = table if table is not None else adopted_table()
    w = Fraction(w)
    dom = block_basis(mod, n, w, parity, universe)
    cod = block_basis(mod, n + 1, w, parity, universe)
    dom_slice = {}
    for col, (u, bv) in enumerate(dom):
        dom_slice.setdefault(u, []).append((bv, col))
    cod_index = {pair: r for r, pair in enumerate(cod)}
    rows = [dict() for _ in cod]
    q = parity if parity is not None else 0
    for target in monomial_basis(n + 1, universe):
        parities = [PARITY[g] for g in target]
        prefix = [0]
        for p in parities:
            prefix.append(prefix[-1] + p)
        for i, gen in enumerate(target):
            sub = target[:i] + target[i + 1:]
            cols = dom_slice.get(sub)
            if not cols:
                continue
            sgn = Fraction(_term1_sign(i, parities, prefix, q))
            for bv, col in cols:
                for tbv, c in mod.act_basis(gen, bv).items():
                    r = cod_index[(target, tbv)]
                    s = rows[r].get(col, Fraction(0)) + sgn * c
                    if s:
                        rows[r][col] = s
                    else:
                        del rows[r][col]
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                row = table.bracket(target[i], target[j])
                if not row:
                    continue
                rest = (target[:i] + target[i + 1:j] + target[j + 1:])
                sgn = _term2_sign(i, j, parities, prefix)
                for g, cg in row.items():
                    mono, s = canonicalize((g,) + rest)
                    if not s:
                        continue
                    cols = dom_slice.get(mono)
                    if not cols:
                        continue
                    coeff = Fraction(sgn * s) * cg
                    for bv, col in cols:
                        r = cod_index[(target, bv)]
                        val = rows[r].get(col, Fraction(0)) + coeff
                        if val:
                            rows[r][col] = val
                        else:
                            del rows[r][col]
    m = linalg.SparseMatrix(len(cod), len(dom), rows)
    return dom, cod, m


def cochain_coords(f, basis):
    """Coordinates of f on a block basis: {index: Fraction}."""
    out = {}
    for idx, (u, bv) in enumerate(basis):
        vec = f.values.get(u)
        if vec and bv in vec:
            out[idx] = vec[bv]
    return out


def cochain_from_coords(mod, degree, parity, basis, coords, universe=GENS):
    vals = {}
    for idx, c in coords.items():
        u, bv = basis[idx]
        vals.setdefault(u, {})[bv] = c
    return Cochain(mod, degree, parity, vals, universe)


# --- reduction --------------------------------------------------------------

def _a_monomial(u):
    # the reducible slots: A present, every entry in {A, H, B, Y}
    return "A" in u and "X" not in u


def is_reduced(f):
    """True iff f vanishes on every monomial A U_2..U_n, U_i in {A,H,B,Y}.

    Monomials containing both A and X are exempt: no coboundary can kill
    them in general. For cocycles they are pinned anyway: values on
    X-monomials die through [A,A] = 2X and values on A-and-X monomials
    through the weight equations.
    """
    return not any(_a_monomial(u) for u in f.values)


def reduce_cochain(f, table=None):
    """Return (g, f_red) with f_red = f - dg reduced.

    g is solved per cochain weight from the linear system
    (dg)(A-monomials) = f(A-monomials); solvability is guaranteed, so a
    failed solve raises SolveFailed.
    """
    table = table if table is not None else adopted_table()
    n = f.degree
    if n == 0 or is_reduced(f):
        return zero_cochain(f.mod, max(n - 1, 0), f.parity, f.universe), f
    g = zero_cochain(f.mod, n - 1, f.parity, f.universe)
    for w, part in f.weight_components().items():
        dom, cod, mat = delta_matrix(f.mod, n - 1, w, f.parity, table,
                                     f.universe)
        rows_a = [r for r, (u, _) in enumerate(cod) if _a_monomial(u)]
        if not rows_a:
            continue
        reindex = {r: i for i, r in enumerate(rows_a)}
        sub = linalg.SparseMatrix(len(rows_a), mat.ncols,
                                  [mat.rows[r] for r in rows_a])
        rhs_full = cochain_coords(part, cod)
        rhs = {reindex[r]: c for r, c in rhs_full.items() if r in reindex}
        sol = linalg.solve(sub, rhs)
        if sol is None:
            raise SolveFailed(
                f"reduction solve failed at weight {w}; sign conventions "
                "are inconsistent")
        g = g.add(cochain_from_coords(f.mod, n - 1, f.parity, dom, sol,
                                      f.universe))
    f_red = f.sub(coboundary(g, table))
    if not is_reduced(f_red):
        raise SolveFailed("reduction produced a non-reduced cochain")
    return g, f_red


# --- sl(2) restriction ------------------------------------------------------

def restrict_sl2(f):
    """Drop every monomial containing an odd generator."""
    vals = {u: v for u, v in f.values.items()
            if all(g in SL2 for g in u)}
    return Cochain(f.mod, f.degree, f.parity, vals, SL2)


def sl2_coboundary(f, table=None):
    """Classical Chevalley-Eilenberg differential on the (X,H,Y) complex."""
    if tuple(f.universe) != SL2:
        raise ValueError("expected an sl(2) cochain")
    return coboundary(f, table)


# --- cup product ------------------------------------------------------------

def _slot_op(f, gen):
    vec = f.values.get((gen,))
    return to_oppoly(vec) if vec else to_oppoly({})


def cup(f, h, table=None):
    """Operator-composition cup product of two 1-cochains.

    f maps into operators from lam2- to mu-densities, h into operators
    from lam1- to lam2-densities; the product is the 2-cochain
    (U,V) -> f(U) o h(V) - (-1)^{UV} f(V) o h(U) into the lam1-to-mu
    module. If both factors are cocycles but that sign convention fails
    to produce a cocycle, the Koszul variant weighted by the cochain
    parities is used instead; the variant actually used is returned.
    """
    table = table if table is not None else adopted_table()
    if f.degree != 1 or h.degree != 1:
        raise ValueError("cup factors must be 1-cochains")
    if h.mod.mu != f.mod.lam:
        raise TypeMismatch(
            f"factor modules do not compose: {h.mod} then {f.mod}")
    factors_are_cocycles = (coboundary(f, table).is_zero()
                            and coboundary(h, table).is_zero())
    for variant in ("printed", "koszul"):
        ops = {}
        max_k = 0
        for mono in monomial_basis(2):
            u, v = mono
            fu_hv = _slot_op(f, u).compose(_slot_op(h, v))
            fv_hu = _slot_op(f, v).compose(_slot_op(h, u))
            if variant == "printed":
                s1 = Fraction(1)
                s2 = Fraction(-1 if PARITY[u] * PARITY[v] == 0 else 1)
            else:
                ph = h.parity
                s1 = Fraction(-1 if (ph * PARITY[u]) % 2 else 1)
                s2 = Fraction(
                    1 if (PARITY[u] * PARITY[v] + ph * PARITY[v]) % 2
                    else -1)
            op = fu_hv.scale(s1) + fv_hu.scale(s2)
            if not op.is_zero():
                ops[mono] = op
                max_k = max(max_k, op.max_dx_order() + 1)
        mod_out = TruncatedDlm(h.mod.lam, f.mod.mu, max(3, max_k))
        vals = {mono: from_oppoly(op, mod_out) for mono, op in ops.items()}
        result = Cochain(mod_out, 2, (f.parity + h.parity) % 2, vals)
        if not factors_are_cocycles:
            return result, variant  # nothing to certify against
        if coboundary(result, table).is_zero():
            return result, variant
    raise NoCocycle("no cup sign variant makes the product a cocycle")


# --- explicit cocycle constructors ------------------------------------------

def _reduced_cocycle_space(mod, parity, slots, table):
    """Weight-0 cocycles supported on the given 1-slots, as Cochains."""
    dom, cod, mat = delta_matrix(mod, 1, 0, parity, table)
    keep = [c for c, (u, _) in enumerate(dom) if u[0] in slots]
    reindex = dict(enumerate(keep))
    cols = [mat.column(c) for c in keep]
    sub = linalg.SparseMatrix.from_columns(mat.nrows, cols)
    out = []
    for kv in linalg.kernel_basis(sub):
        coords = {reindex[i]: c for i, c in kv.items()}
        out.append(cochain_from_coords(mod, 1, parity, dom, coords))
    return out


def _normalized(f, slot, bv):
    vec = f.values.get((slot,), {})
    lead = vec.get(bv)
    if not lead:
        raise NoCocycle(f"expected a {bv} term on the {slot} slot")
    return f.scale(1 / lead)


def slot_ratios(f, template):
    """Per-slot factors r with f(slot) = r * template(slot), exactly.

    Raises NoCocycle when some slot is not proportional to the template
    or the supports differ.
    """
    ratios = {}
    slots = set(template) | {u[0] for u in f.values}
    for slot in sorted(slots):
        have = f.values.get((slot,), {})
        want = template.get(slot, {})
        if not want:
            if have:
                raise NoCocycle(f"unexpected support on slot {slot}")
            continue
        if set(have) != set(want):
            raise NoCocycle(f"slot {slot} support differs from template")
        vals = {have[bv] / want[bv] for bv in want}
        if len(vals) != 1:
            raise NoCocycle(f"slot {slot} not proportional to template")
        ratios[slot] = vals.pop()
    return ratios


def h_lambda_template(lam=None):
    """Reference slots of the lam = mu generating 1-cocycle."""
    return {
        "H": {("a", 0, 0): Fraction(-1)},
        "B": {("c", 0, 0): Fraction(1)},
        "Y": {("a", 1, 0): Fraction(-2)},
    }


def f_k_template(k):
    return {
        "H": {("d", 0, k): Fraction(1)},
        "B": {("b", 0, k): Fraction(1)},
        "Y": {("d", 1, k): Fraction(2)},
    }


def ftilde_k_template(k):
    y_slot = {("c", 0, k): Fraction(2)}
    if k:
        y_slot[("d", 0, k - 1)] = Fraction(-2 * k)
    return {
        "B": {("a", 0, k): Fraction(1)},
        "Y": y_slot,
    }


def make_h_lambda(lam, K=3, table=None):
    """The reduced generating 1-cocycle of D_{lam,lam}.

    Slot support matches the reference template (zero on X and A, the
    H/B/Y slots proportional to id, theta, x); coefficients are solved
    from the cocycle equations and normalized so the B slot equals the
    reference. Returns (cochain, per-slot ratios to the reference).
    """
    table = table if table is not None else adopted_table()
    mod = TruncatedDlm(lam, lam, K)
    space = _reduced_cocycle_space(mod, 0, ("H", "B", "Y"), table)
    if len(space) != 1:
        raise NoCocycle(
            f"expected a single reduced cocycle, found {len(space)}")
    f = _normalized(space[0], "B", ("c", 0, 0))
    return f, slot_ratios(f, h_lambda_template())


def _special_module(k, K):
    if K is None:
        K = max(3, k + 1)
    return TruncatedDlm(Fraction(-k, 2), Fraction(k + 1, 2), K)


def make_f_k(k, K=None, table=None):
    """The odd reduced 1-cocycle with nonzero H slot of D_{-k/2,(k+1)/2}."""
    table = table if table is not None else adopted_table()
    mod = _special_module(k, K)
    space = _reduced_cocycle_space(mod, 1, ("H", "B", "Y"), table)
    if len(space) != 2:
        raise NoCocycle(
            f"expected a 2-dimensional cocycle space, found {len(space)}")
    v1, v2 = space
    a1 = v1.values.get(("B",), {}).get(("a", 0, k), Fraction(0))
    a2 = v2.values.get(("B",), {}).get(("a", 0, k), Fraction(0))
    if a1 == 0 and a2 == 0:
        raise NoCocycle("cannot separate the two cocycle classes")
    if a1 == 0:
        f = v1
    elif a2 == 0:
        f = v2
    else:
        f = v2.add(v1, -a2 / a1)
    f = _normalized(f, "B", ("b", 0, k))
    return f, slot_ratios(f, f_k_template(k))


def make_ftilde_k(k, K=None, table=None):
    """The odd reduced 1-cocycle with zero H slot of D_{-k/2,(k+1)/2}."""
    table = table if table is not None else adopted_table()
    mod = _special_module(k, K)
    space = _reduced_cocycle_space(mod, 1, ("B", "Y"), table)
    if len(space) != 1:
        raise NoCocycle(
            f"expected a single H-free cocycle, found {len(space)}")
    f = _normalized(space[0], "B", ("a", 0, k))
    return f, slot_ratios(f, ftilde_k_template(k))


# --- serialization ----------------------------------------------------------

def cochain_to_json(f):
    return {
        "degree": f.degree,
        "parity": f.parity,
        "universe": "sl2" if tuple(f.universe) == SL2 else "osp",
        "lambda": str(f.mod.lam),
        "mu": str(f.mod.mu),
        "K": f.mod.K,
        "values": {monomial_str(u): vec_to_json(v)
                   for u, v in sorted(f.values.items())},
    }


def cochain_from_json(data):
    mod = TruncatedDlm(Fraction(data["lambda"]), Fraction(data["mu"]),
                       data["K"])
    universe = SL2 if data.get("universe") == "sl2" else GENS
    vals = {parse_monomial(u): vec_from_json(v)
            for u, v in data["values"].items()}
    return Cochain(mod, data["degree"], data["parity"], vals, universe)
