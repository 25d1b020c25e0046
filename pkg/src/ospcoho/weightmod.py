"""The truncated weight module of differential operators on densities.

Basis operators, with p = mu - lambda:

    a_{m,k} = x^m dx^k                    (even, weight k-m-p)
    b_{m,k} = x^m theta dtheta dx^k       (even, weight k-m-p)
    c_{m,k} = x^m theta dx^k              (odd,  weight k-m-p-1/2)
    d_{m,k} = x^m dtheta dx^k - x^m theta dx^{k+1}
                                          (odd,  weight k-m-p+1/2)

The H, A and B actions are the tabulated first-order rows; X and Y act
through the odd generators as X = A o A and Y = -B o B, which are forced
by [A,A] = 2X and [B,B] = -2Y and keep the module axiom an identity
instead of a separate assumption. No row ever increases k, so cutting at
k <= K yields a genuine submodule on which H is diagonal and A is onto.

Weight slices are finite (at most 4(K+1) vectors) because fixing the
weight pins m as a function of k within each family.
"""

from fractions import Fraction

from . import linalg
from .algebra import GENS, PARITY, WEIGHT
from .superdiff import OpPoly

FAMILIES = ("a", "b", "c", "d")
FAMILY_PARITY = {"a": 0, "b": 0, "c": 1, "d": 1}
# weight(family_{m,k}) = k - m - p + FAMILY_SHIFT[family]
FAMILY_SHIFT = {
    "a": Fraction(0),
    "b": Fraction(0),
    "c": Fraction(-1, 2),
    "d": Fraction(1, 2),
}


class TruncationViolation(ValueError):
    pass


class NotContained(linalg.NotContained):
    pass


def vec_add(target, src, coeff=Fraction(1)):
    """target += coeff * src for {BasisVector: Fraction} dicts."""
    if not coeff:
        return target
    for bv, v in src.items():
        s = target.get(bv, Fraction(0)) + coeff * v
        if s:
            target[bv] = s
        else:
            del target[bv]
    return target


def vec_scale(src, coeff):
    if not coeff:
        return {}
    coeff = Fraction(coeff)
    return {bv: coeff * v for bv, v in src.items()}


def vec_parity(vec):
    ps = {FAMILY_PARITY[f] for (f, _, _) in vec}
    return ps.pop() if len(ps) == 1 else None


def vec_str(vec):
    if not vec:
        return "0"
    parts = []
    for bv in sorted(vec, key=lambda t: (FAMILIES.index(t[0]), t[1], t[2])):
        f, m, k = bv
        c = vec[bv]
        body = f"{f}[{m},{k}]"
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{c}*{body}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def vec_to_json(vec):
    """[["a", m, k, "num/den"], ...] in deterministic order."""
    out = []
    for bv in sorted(vec, key=lambda t: (FAMILIES.index(t[0]), t[1], t[2])):
        f, m, k = bv
        out.append([f, m, k, str(vec[bv])])
    return out


def vec_from_json(data):
    return {(f, m, k): Fraction(c) for f, m, k, c in data}


class TruncatedDlm:
    """D_{lambda,mu} truncated to dx-order k <= K."""

    __slots__ = ("lam", "mu", "K", "p")

    def __init__(self, lam, mu, K):
        self.lam = Fraction(lam)
        self.mu = Fraction(mu)
        self.K = int(K)
        self.p = self.mu - self.lam

    def __repr__(self):
        return f"TruncatedDlm(lam={self.lam}, mu={self.mu}, K={self.K})"

    def __eq__(self, other):
        return (isinstance(other, TruncatedDlm)
                and (self.lam, self.mu, self.K)
                == (other.lam, other.mu, other.K))

    def __hash__(self):
        return hash((self.lam, self.mu, self.K))

    def basis_weight(self, bv):
        f, m, k = bv
        return k - m - self.p + FAMILY_SHIFT[f]

    def act_basis(self, gen, bv):
        """Action of one generator on one basis vector."""
        f, m, k = bv
        if k > self.K:
            raise TruncationViolation(f"{bv} exceeds K={self.K}")
        lam, p = self.lam, self.p
        out = {}
        if gen == "H":
            w = self.basis_weight(bv)
            if w:
                out[bv] = w
        elif gen == "A":
            if f == "a":
                if m:
                    out[("c", m - 1, k)] = Fraction(m)
            elif f == "b":
                out[("d", m, k)] = Fraction(1)
            elif f == "c":
                out[("a", m, k)] = Fraction(1)
            else:
                if m:
                    out[("b", m - 1, k)] = Fraction(m)
        elif gen == "B":
            if f == "a":
                c1 = Fraction(m - 2 * k) + 2 * p
                if c1:
                    out[("c", m, k)] = c1
                if k:
                    out[("d", m, k - 1)] = Fraction(-k)
            elif f == "b":
                out[("d", m + 1, k)] = Fraction(1)
                c1 = 2 * lam + k
                if c1:
                    out[("c", m, k)] = -c1
            elif f == "c":
                out[("a", m + 1, k)] = Fraction(1)
                if k:
                    out[("b", m, k - 1)] = Fraction(k)
            else:
                c1 = Fraction(m - 2 * k - 1) + 2 * p
                if c1:
                    out[("b", m, k)] = c1
                c2 = 2 * lam + k
                if c2:
                    out[("a", m, k)] = c2
        elif gen == "X":
            out = self.act("A", self.act_basis("A", bv))
        elif gen == "Y":
            out = vec_scale(self.act("B", self.act_basis("B", bv)), -1)
        else:
            raise ValueError(f"unknown generator {gen!r}")
        return out

    def act(self, gen, vec):
        """Linear extension of act_basis to {BasisVector: Fraction}."""
        out = {}
        for bv, c in vec.items():
            vec_add(out, self.act_basis(gen, bv), c)
        return out

    def weight_basis(self, alpha, parity=None):
        """All basis vectors of weight alpha with k <= K, family-major."""
        alpha = Fraction(alpha)
        out = []
        for f in FAMILIES:
            if parity is not None and FAMILY_PARITY[f] != parity:
                continue
            s = alpha + self.p - FAMILY_SHIFT[f]  # = k - m
            if s.denominator != 1:
                continue
            s = int(s)
            for k in range(max(0, s), self.K + 1):
                out.append((f, k - s, k))
        return out

    # --- subspaces of a weight slice -----------------------------------

    def subspace(self, alpha, vectors, parity=None):
        basis = self.weight_basis(alpha, parity)
        index = {bv: i for i, bv in enumerate(basis)}
        rows = []
        for vec in vectors:
            row = {}
            for bv, c in vec.items():
                if bv not in index:
                    raise ValueError(
                        f"{bv} is not in the weight-{alpha} slice")
                row[index[bv]] = c
            rows.append(row)
        return Subspace(self, alpha, parity, tuple(basis),
                        tuple(linalg.rref(rows, len(basis))))

    def full_slice(self, alpha, parity=None):
        basis = self.weight_basis(alpha, parity)
        rows = [{i: Fraction(1)} for i in range(len(basis))]
        return Subspace(self, alpha, parity, tuple(basis), tuple(rows))

    def kernel_slice(self, gens, alpha, parity=None):
        """Joint kernel of the listed generator actions in one slice."""
        basis = self.weight_basis(alpha, parity)
        if not basis:
            return self.subspace(alpha, [], parity)
        columns = []
        row_offset = {}
        targets = {}
        for g in sorted(set(gens)):
            t_basis = self.weight_basis(alpha + WEIGHT[g])
            row_offset[g] = sum(len(t) for t in targets.values())
            targets[g] = {bv: i for i, bv in enumerate(t_basis)}
        nrows = sum(len(t) for t in targets.values())
        for bv in basis:
            col = {}
            for g in sorted(set(gens)):
                image = self.act_basis(g, bv)
                for tbv, c in image.items():
                    col[row_offset[g] + targets[g][tbv]] = c
            columns.append(col)
        m = linalg.SparseMatrix.from_columns(nrows, columns)
        vecs = []
        for kv in linalg.kernel_basis(m):
            vecs.append({basis[i]: c for i, c in kv.items()})
        return self.subspace(alpha, vecs, parity)

    def kernel_weights(self):
        """Weights that can support m = 0 vectors (k <= K).

        Kernels of the raising/odd generators consist of m = 0 vectors
        only (every action row on an m > 0 vector keeps an m >= 1 tail
        with a nonzero coefficient m), so scanning these weights sees
        every kernel element.
        """
        out = set()
        for f in FAMILIES:
            for k in range(self.K + 1):
                out.add(k - self.p + FAMILY_SHIFT[f])
        return sorted(out)

    def check_a_onto(self, weights=None):
        """rank(A : M^w -> M^{w+1/2}) == dim M^{w+1/2} on the window."""
        if weights is None:
            weights = self.kernel_weights()
        for w in weights:
            target = self.weight_basis(w + Fraction(1, 2))
            if not target:
                continue
            index = {bv: i for i, bv in enumerate(target)}
            cols = []
            for bv in self.weight_basis(w):
                img = self.act_basis("A", bv)
                cols.append({index[t]: c for t, c in img.items()})
            m = linalg.SparseMatrix.from_columns(len(target), cols)
            if linalg.rank(m) != len(target):
                return False
        return True


class Subspace:
    """Subspace of one weight slice, held as a canonical echelon basis."""

    __slots__ = ("mod", "alpha", "parity", "basis", "rows")

    def __init__(self, mod, alpha, parity, basis, rows):
        self.mod = mod
        self.alpha = Fraction(alpha)
        self.parity = parity
        self.basis = basis
        self.rows = rows

    @property
    def dim(self):
        return len(self.rows)

    def vectors(self):
        """Basis as {BasisVector: Fraction} dicts."""
        return [{self.basis[i]: c for i, c in row.items()}
                for row in self.rows]

    def _coords(self, vec):
        index = {bv: i for i, bv in enumerate(self.basis)}
        return {index[bv]: c for bv, c in vec.items()}

    def contains_vector(self, vec):
        try:
            row = self._coords(vec)
        except KeyError:
            return False
        return linalg.span_contains(list(self.rows), row)

    def contains(self, other):
        self._check_ambient(other)
        return all(linalg.span_contains(list(self.rows), r)
                   for r in other.rows)

    def _check_ambient(self, other):
        if self.basis != other.basis:
            raise ValueError("subspaces live in different slices")

    def sum(self, other):
        self._check_ambient(other)
        rows = linalg.subspace_sum(self.rows, other.rows, len(self.basis))
        return Subspace(self.mod, self.alpha, self.parity, self.basis,
                        tuple(rows))

    def intersect(self, other):
        self._check_ambient(other)
        rows = linalg.subspace_intersect(self.rows, other.rows,
                                         len(self.basis))
        return Subspace(self.mod, self.alpha, self.parity, self.basis,
                        tuple(rows))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.basis == other.basis
                and self.rows == other.rows)

    def __repr__(self):
        return (f"Subspace(alpha={self.alpha}, dim={self.dim}, "
                f"ambient={len(self.basis)})")


def image_of_subspace(mod, gen, s):
    """Echelon basis of gen . s inside the shifted weight slice."""
    vecs = [mod.act(gen, v) for v in s.vectors()]
    return mod.subspace(s.alpha + WEIGHT[gen], [v for v in vecs if v])


def quotient_dim(s, t):
    """dim(s / t); raises NotContained when t is not a subspace of s."""
    s._check_ambient(t)
    try:
        return linalg.quotient_dim(list(s.rows), list(t.rows))
    except linalg.NotContained as exc:
        raise NotContained(str(exc)) from None


def complement(s, inside):
    """Deterministic complement of s in `inside` by greedy pivots.

    Scans the canonical basis of `inside` in order and keeps the vectors
    that enlarge span(s); the result C satisfies inside = s (+) C.
    """
    s._check_ambient(inside)
    if not inside.contains(s):
        raise NotContained("s is not contained in the ambient subspace")
    ncols = len(s.basis)
    current = list(s.rows)
    chosen = []
    for row in inside.rows:
        if not linalg.span_contains(current, row):
            chosen.append(row)
            current = linalg.rref(current + [row], ncols)
    picked = [{s.basis[i]: c for i, c in row.items()} for row in chosen]
    return s.mod.subspace(s.alpha, picked, s.parity)


def action_compat_defect(mod, table, u, v, bv):
    """[u,v].w - (u.(v.w) - (-1)^{uv} v.(u.w)) for a basis vector w.

    Zero for all inputs iff the action is a module for `table`.
    """
    w = {bv: Fraction(1)}
    out = {}
    for g, c in table.bracket(u, v).items():
        vec_add(out, mod.act(g, w), c)
    vec_add(out, mod.act(u, mod.act(v, w)), Fraction(-1))
    sign = Fraction(-1 if PARITY[u] and PARITY[v] else 1)
    vec_add(out, mod.act(v, mod.act(u, w)), sign)
    return out


def module_axiom_holds(mod, table, max_m=3, max_k=None):
    """Check the module axiom on all generator pairs and small vectors."""
    if max_k is None:
        max_k = mod.K
    for u in GENS:
        for v in GENS:
            for f in FAMILIES:
                for m in range(max_m + 1):
                    for k in range(min(max_k, mod.K) + 1):
                        if action_compat_defect(mod, table, u, v, (f, m, k)):
                            return False
    return True


# --- conversions to and from operator polynomials -------------------------

def to_oppoly(vec):
    """ModuleVector -> normal-ordered operator polynomial."""
    terms = {}
    for (f, m, k), c in vec.items():
        if f == "a":
            contrib = (((m, 0, 0, k), c),)
        elif f == "b":
            contrib = (((m, 1, 1, k), c),)
        elif f == "c":
            contrib = (((m, 1, 0, k), c),)
        else:
            contrib = (((m, 0, 1, k), c), ((m, 1, 0, k + 1), -c))
        for key, val in contrib:
            s = terms.get(key, Fraction(0)) + val
            if s:
                terms[key] = s
            else:
                del terms[key]
    return OpPoly(terms)


def from_oppoly(op, mod):
    """Operator polynomial -> ModuleVector in the a/b/c/d basis.

    The dtheta monomials are resolved as (m,0,1,k) = d_{m,k} + c_{m,k+1}.
    Raises TruncationViolation when a required k exceeds mod.K.
    """
    vec = {}
    for (m, e1, e2, k), c in op.terms.items():
        if e1 and e2:
            vec_add(vec, {("b", m, k): c})
        elif e2:
            vec_add(vec, {("d", m, k): c, ("c", m, k + 1): c})
        elif e1:
            vec_add(vec, {("c", m, k): c})
        else:
            vec_add(vec, {("a", m, k): c})
    for (f, m, k) in vec:
        if k > mod.K:
            raise TruncationViolation(
                f"operator needs {f}[{m},{k}] beyond K={mod.K}")
    return vec
