"""Trivariate polynomials over a finite field.

The variables are indexed 0, 1, 2 and printed X, Y, Z.  Terms are a sparse
map from exponent triples to nonzero coefficient codes.  Public constructors
enforce the desk-scale total-degree cap; internal arithmetic is uncapped so
eliminants may exceed it transiently.

Alongside the class this module provides the canonical-representative
machinery used for all congruence tests modulo a curve equation
(:func:`normal_form`), Sylvester resultants with polynomial entries
(:func:`resultant`), and exact gcd/squarefree/factor routines for homogeneous
forms built on specialization plus interpolation.
"""

from __future__ import annotations

from ..errors import HardFailure, InputError, ToolLimitError, extension_required
from . import multipoly
from .field import FieldElement
from .unipoly import UniPoly, factor_univariate

DEGREE_CAP = 64
VAR_NAMES = "XYZ"


class TriPoly:
    __slots__ = ("field", "terms")

    def __init__(self, field, terms):
        """terms: mapping {(e0,e1,e2): coefficient (code or FieldElement)}."""
        self.field = field
        self.terms = {}
        for e, c in terms.items():
            code = c.code if isinstance(c, FieldElement) else c
            if code:
                e = (int(e[0]), int(e[1]), int(e[2]))
                if min(e) < 0:
                    raise InputError("PARSE_ERROR", f"negative exponent in {e}")
                if sum(e) > DEGREE_CAP:
                    raise ToolLimitError(
                        "CAP_EXCEEDED",
                        f"total degree {sum(e)} exceeds the cap {DEGREE_CAP}",
                    )
                self.terms[e] = code

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, field):
        return cls._raw(field, {})

    @classmethod
    def constant(cls, field, c):
        code = c.code if isinstance(c, FieldElement) else field.from_int(c)
        return cls._raw(field, {(0, 0, 0): code} if code else {})

    @classmethod
    def variable(cls, field, v):
        e = [0, 0, 0]
        e[v] = 1
        return cls._raw(field, {tuple(e): 1})

    @classmethod
    def linear_form(cls, field, codes):
        terms = {}
        for v, c in enumerate(codes):
            if c:
                e = [0, 0, 0]
                e[v] = 1
                terms[tuple(e)] = c
        return cls._raw(field, terms)

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(e == (0, 0, 0) for e in self.terms)

    def constant_code(self):
        return self.terms.get((0, 0, 0), 0)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def deg_in(self, v):
        return max((e[v] for e in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def involves(self, v):
        return any(e[v] for e in self.terms)

    def lead_key(self):
        return max(self.terms, key=lambda e: (sum(e), e))

    def lead_code(self):
        return self.terms[self.lead_key()] if self.terms else 0

    def canonical(self):
        """Scale so the grlex-leading coefficient is 1."""
        if not self.terms or self.lead_code() == 1:
            return self
        return self.scale(self.field.inv(self.lead_code()))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        K = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = K.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TriPoly._raw(K, out)

    def __neg__(self):
        K = self.field
        return TriPoly._raw(K, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.field
        if isinstance(other, (int, FieldElement)):
            code = other.code if isinstance(other, FieldElement) else K.from_int(other)
            return self.scale(code)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = K.add(out.get(e, 0), K.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TriPoly._raw(K, out)

    __rmul__ = __mul__

    def scale(self, code):
        K = self.field
        if not code:
            return TriPoly.zero(K)
        return TriPoly._raw(K, {e: K.mul(c, code) for e, c in self.terms.items()})

    def pow(self, n):
        r = TriPoly.constant(self.field, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        return (
            isinstance(other, TriPoly)
            and self.field is other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.field), tuple(sorted(self.terms.items()))))

    def partial(self, v):
        K = self.field
        out = {}
        for e, c in self.terms.items():
            if e[v]:
                c2 = K.mul(c, e[v] % K.p)
                if c2:
                    e2 = list(e)
                    e2[v] -= 1
                    out[tuple(e2)] = c2
        return TriPoly._raw(K, out)

    def eval(self, codes):
        """Value at a triple of codes."""
        K = self.field
        pows = [{0: 1}, {0: 1}, {0: 1}]
        acc = 0
        for e, c in self.terms.items():
            t = c
            for v in range(3):
                k = e[v]
                cache = pows[v]
                if k not in cache:
                    base = codes[v]
                    best = max(x for x in cache if x <= k)
                    val = cache[best]
                    for _ in range(k - best):
                        val = K.mul(val, base)
                        cache[best + 1] = val
                        best += 1
                t = K.mul(t, cache[k])
                if not t:
                    break
            acc = K.add(acc, t)
        return acc

    def eval_point(self, point):
        return self.eval(point.codes if hasattr(point, "codes") else point)

    def coeff_in(self, v, k):
        """Coefficient of var_v^k, with the v slot zeroed."""
        out = {}
        for e, c in self.terms.items():
            if e[v] == k:
                e2 = list(e)
                e2[v] = 0
                out[tuple(e2)] = c
        return TriPoly._raw(self.field, out)

    def set_var(self, v, code):
        """Substitute var_v := constant code."""
        K = self.field
        out = {}
        for e, c in self.terms.items():
            c2 = K.mul(c, K.pow(code, e[v])) if e[v] else c
            if c2:
                e2 = list(e)
                e2[v] = 0
                e2 = tuple(e2)
                s = K.add(out.get(e2, 0), c2)
                if s:
                    out[e2] = s
                else:
                    out.pop(e2, None)
        return TriPoly._raw(K, out)

    def substitute_linear(self, mat):
        """F(M x) for a row-major 3x3 matrix of codes."""
        K = self.field
        rows = [
            TriPoly.linear_form(K, (mat[3 * r], mat[3 * r + 1], mat[3 * r + 2]))
            for r in range(3)
        ]
        caches = [{0: TriPoly.constant(K, 1)} for _ in range(3)]

        def power(v, k):
            cache = caches[v]
            if k not in cache:
                best = max(x for x in cache if x <= k)
                val = cache[best]
                while best < k:
                    val = val * rows[v]
                    best += 1
                    cache[best] = val
            return cache[k]

        acc = TriPoly.zero(K)
        for e, c in self.terms.items():
            t = power(0, e[0]) * power(1, e[1]) * power(2, e[2])
            acc = acc + t.scale(c)
        return acc

    def map_field(self, embedding):
        return TriPoly._raw(
            embedding.target, {e: embedding(c) for e, c in self.terms.items()}
        )

    # -- serialization -----------------------------------------------------

    def to_json(self):
        K = self.field
        out = []
        for e in sorted(self.terms):
            out.append([list(K.decode(self.terms[e])), e[0], e[1], e[2]])
        return out

    @classmethod
    def from_json(cls, field, data):
        terms = {}
        for item in data:
            if len(item) != 4:
                raise InputError("PARSE_ERROR", f"bad polynomial term {item!r}")
            vec, e0, e1, e2 = item
            el = field.element(vec)
            key = (int(e0), int(e1), int(e2))
            if key in terms:
                raise InputError("PARSE_ERROR", f"duplicate exponent {key}")
            terms[key] = el.code
        return cls(field, terms)

    def __repr__(self):
        if not self.terms:
            return "TriPoly(0)"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(
                f"{VAR_NAMES[v]}^{e[v]}" if e[v] > 1 else VAR_NAMES[v]
                for v in range(3)
                if e[v]
            )
            coeff = list(self.field.decode(self.terms[e]))
            parts.append(f"{coeff}{'*' + mono if mono else ''}")
        return "TriPoly(" + " + ".join(parts) + ")"


# -- division and normal forms --------------------------------------------


def divmod_in_var(A, B, v):
    """Division of A by B as polynomials in var v; the leading v-coefficient
    of B must be a nonzero constant."""
    K = A.field
    db = B.deg_in(v)
    lc = B.coeff_in(v, db)
    if not lc.is_constant() or lc.is_zero():
        raise HardFailure(
            "NOT_MONICIZABLE", f"divisor has nonconstant leading {VAR_NAMES[v]} term"
        )
    inv_lc = K.inv(lc.constant_code())
    quo = TriPoly.zero(K)
    rem = A
    while not rem.is_zero():
        dr = rem.deg_in(v)
        if dr < db:
            break
        c = rem.coeff_in(v, dr).scale(inv_lc)
        shift = [0, 0, 0]
        shift[v] = dr - db
        mono = TriPoly._raw(K, {tuple(shift): 1})
        step = c * mono
        quo = quo + step
        rem = rem - step * B
    return quo, rem


class Reducer:
    """Canonical representatives modulo a fixed F.

    Chooses the first variable in which F is monic (a pure power of that
    variable at full total degree); when none exists a recorded shear makes
    one.  With a shear, representatives live in sheared coordinates, which is
    transparent to congruence tests.
    """

    def __init__(self, F):
        if F.is_zero():
            raise InputError("ZERO_DIVISOR", "cannot reduce modulo zero")
        K = F.field
        n = F.total_degree()
        self.var = None
        self.shear = None
        self.shear_inv = None
        for v in range(3):
            e = [0, 0, 0]
            e[v] = n
            if tuple(e) in F.terms:
                self.var = v
                self.F = F
                return
        for v in range(3):
            others = [j for j in range(3) if j != v]
            found = None
            for l1 in range(K.q):
                for l2 in range(K.q):
                    col = [0, 0, 0]
                    col[v] = 1
                    col[others[0]] = l1
                    col[others[1]] = l2
                    if F.eval(tuple(col)):
                        found = (l1, l2)
                        break
                if found:
                    break
            if found:
                mat = [0] * 9
                inv = [0] * 9
                for j in range(3):
                    mat[3 * j + j] = 1
                    inv[3 * j + j] = 1
                mat[3 * others[0] + v] = found[0]
                mat[3 * others[1] + v] = found[1]
                inv[3 * others[0] + v] = K.neg(found[0])
                inv[3 * others[1] + v] = K.neg(found[1])
                self.var = v
                self.shear = tuple(mat)
                self.shear_inv = tuple(inv)
                self.F = F.substitute_linear(self.shear)
                return
        raise extension_required(
            "no shear over this field makes F monic in a variable", 2
        )

    def reduce(self, g):
        if self.shear is not None:
            g = g.substitute_linear(self.shear)
        return divmod_in_var(g, self.F, self.var)[1]

    def is_multiple(self, g):
        return self.reduce(g).is_zero()


def normal_form(g, F):
    """Canonical representative of g modulo F (see :class:`Reducer`)."""
    return Reducer(F).reduce(g)


# -- resultants ------------------------------------------------------------


def _to_m(t):
    m = multipoly.MPoly(t.field, 3)
    m.terms = dict(t.terms)
    return m


def _from_m(field, m):
    return TriPoly._raw(field, dict(m.terms))


def exact_div_tri(A, B):
    try:
        return _from_m(A.field, multipoly.exact_div(_to_m(A), _to_m(B)))
    except ArithmeticError as exc:
        raise HardFailure("DIVISION_NOT_EXACT", str(exc)) from exc


def resultant(A, B, var, report=None):
    """Sylvester resultant of A and B with respect to ``var``.

    When ``report`` is a dict, ``report["degenerate"]`` is set to whether the
    leading coefficients in ``var`` share a common projective zero (computed
    for homogeneous inputs; None otherwise)."""
    if A.field is not B.field:
        raise InputError("FIELD_MISMATCH", "resultant inputs over different fields")
    if not A.involves(var) and not B.involves(var):
        raise InputError(
            "VAR_ABSENT", f"neither input involves {VAR_NAMES[var]}"
        )
    if report is not None:
        report["degenerate"] = None
        if A.is_homogeneous() and B.is_homogeneous():
            lcA = A.coeff_in(var, A.deg_in(var))
            lcB = B.coeff_in(var, B.deg_in(var))
            if lcA.is_constant() or lcB.is_constant():
                report["degenerate"] = False
            else:
                g = _binary_gcd_forms(lcA, lcB, var)
                report["degenerate"] = not g.is_constant()
    return _from_m(A.field, multipoly.resultant(_to_m(A), _to_m(B), var))


# -- binary-form helpers ---------------------------------------------------


def _binary_vars(v):
    return tuple(j for j in range(3) if j != v)


def _binary_to_uni(c, v):
    """Homogeneous form c in the two non-v variables (s, t) -> (UniPoly in s,
    form degree)."""
    s, t = _binary_vars(v)
    d = c.total_degree()
    coeffs = [0] * (d + 1)
    for e, code in c.terms.items():
        coeffs[e[s]] = code
    return UniPoly.from_codes(c.field, coeffs), d


def _uni_to_binary(u, v, d):
    s, t = _binary_vars(v)
    terms = {}
    for k, code in enumerate(u.coeffs):
        if code:
            e = [0, 0, 0]
            e[s] = k
            e[t] = d - k
            terms[tuple(e)] = code
    return TriPoly._raw(u.field, terms)


def _binary_gcd_forms(c1, c2, v):
    """gcd of two homogeneous forms in the two non-v variables."""
    if c1.is_zero():
        return c2.canonical()
    if c2.is_zero():
        return c1.canonical()
    u1, d1 = _binary_to_uni(c1, v)
    u2, d2 = _binary_to_uni(c2, v)
    tpow = min(d1 - u1.degree, d2 - u2.degree)
    g = u1.gcd(u2)
    return _uni_to_binary(g, v, g.degree + tpow).canonical()


def _content_in(P, v):
    """Binary-form content of homogeneous P w.r.t. variable v."""
    cont = TriPoly.zero(P.field)
    for k in sorted({e[v] for e in P.terms}):
        cont = _binary_gcd_forms(cont, P.coeff_in(v, k), v)
        if cont.is_constant() and not cont.is_zero():
            break
    return cont.canonical()


def _prem(A, B, v):
    """A pseudo-remainder of A by B in var v (defined up to lc_B powers)."""
    K = A.field
    db = B.deg_in(v)
    lcB = B.coeff_in(v, db)
    R = A
    guard = A.deg_in(v) - db + 2
    while not R.is_zero() and R.deg_in(v) >= db and guard:
        dr = R.deg_in(v)
        lcR = R.coeff_in(v, dr)
        shift = [0, 0, 0]
        shift[v] = dr - db
        mono = TriPoly._raw(K, {tuple(shift): 1})
        R = lcB * R - (lcR * mono) * B
        guard -= 1
    return R


def gcd_homogeneous(A, B):
    """gcd of homogeneous trivariate forms, canonically scaled."""
    if A.is_zero():
        return B.canonical()
    if B.is_zero():
        return A.canonical()
    if A.is_constant() or B.is_constant():
        return TriPoly.constant(A.field, 1)
    shared = [
        v for v in range(3) if A.deg_in(v) >= 1 and B.deg_in(v) >= 1
    ]
    if not shared:
        # no overlap in any variable: a common divisor is free of every
        # variable A uses, hence divides the content of A in such a variable
        v = next(j for j in range(3) if A.deg_in(j) >= 1)
        return gcd_homogeneous(_content_in(A, v), B)
    v = max(shared, key=lambda j: min(A.deg_in(j), B.deg_in(j)))
    contA = _content_in(A, v)
    contB = _content_in(B, v)
    primA = exact_div_tri(A, contA)
    primB = exact_div_tri(B, contB)
    if primA.deg_in(v) < primB.deg_in(v):
        primA, primB = primB, primA
    while not primB.is_zero():
        R = _prem(primA, primB, v)
        if not R.is_zero() and not R.involves(v):
            # a v-free remainder divides out: primitive parts are coprime
            primA = TriPoly.constant(A.field, 1)
            break
        if not R.is_zero():
            R = exact_div_tri(R, _content_in(R, v))
        primA, primB = primB, R
    g = _binary_gcd_forms(contA, contB, v) * primA
    return g.canonical()


def pth_root_homogeneous(F):
    K = F.field
    p = K.p
    terms = {}
    for e, c in F.terms.items():
        assert all(x % p == 0 for x in e)
        terms[tuple(x // p for x in e)] = K.pow(c, K.q // p)
    return TriPoly._raw(K, terms)


def squarefree_part_homogeneous(F):
    """Product of the distinct irreducible factors of homogeneous F."""
    K = F.field
    if F.is_zero():
        raise InputError("ZERO_DIVISOR", "squarefree part of zero")
    if F.is_constant():
        return TriPoly.constant(K, 1)
    if all(all(x % K.p == 0 for x in e) for e in F.terms):
        return squarefree_part_homogeneous(pth_root_homogeneous(F))
    v = next(v for v in range(3) if not F.partial(v).is_zero())
    g = gcd_homogeneous(F, F.partial(v))
    if g.is_constant():
        return F.canonical()
    part1 = exact_div_tri(F, g)
    h = g
    while True:
        d = gcd_homogeneous(h, part1)
        if d.is_constant():
            break
        h = exact_div_tri(h, d)
    if h.is_constant():
        return part1.canonical()
    return (part1 * squarefree_part_homogeneous(h)).canonical()


# -- factorization of homogeneous forms ------------------------------------


def _lagrange(field, xs, ys):
    """UniPoly through the given code points."""
    total = UniPoly.from_codes(field, ())
    for i, xi in enumerate(xs):
        num = UniPoly.from_codes(field, (1,))
        denom = 1
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = num * UniPoly.from_codes(field, (field.neg(xj), 1))
            denom = field.mul(denom, field.sub(xi, xj))
        total = total + num.scale(field.div(ys[i], denom))
    return total


def _monic_divisors_of_degree(factored, a, field, cap):
    """All monic divisors of degree a from [(irr, mult)]; capped."""
    out = []

    def rec(i, acc, deg):
        if len(out) > cap:
            raise ToolLimitError(
                "CAP_EXCEEDED", f"divisor enumeration exceeded {cap}"
            )
        if deg == a:
            out.append(acc)
            return
        if i == len(factored):
            return
        irr, mult = factored[i]
        cur = acc
        for k in range(mult + 1):
            nd = deg + k * irr.degree
            if nd > a:
                break
            rec(i + 1, cur, nd)
            if k < mult:
                cur = cur * irr
    rec(0, UniPoly.from_codes(field, (1,)), 0)
    return out


def _find_homogeneous_factor(G, combo_cap=200000):
    """One nontrivial monic factor of squarefree homogeneous G, or None."""
    K = G.field
    n = G.total_degree()
    if n <= 1:
        return None
    reducer = Reducer(G)
    v = reducer.var
    work = G if reducer.shear is None else G.substitute_linear(reducer.shear)
    others = _binary_vars(v)
    s, t = others
    amax = n // 2
    if amax + 1 > K.q:
        raise extension_required(
            "not enough field elements to specialize for factor search", 2
        )
    betas = list(range(amax + 1))
    unit = work.coeff_in(v, n).constant_code()
    inv_unit = K.inv(unit)
    specs = []
    for b in betas:
        spec = work.set_var(s, b).set_var(t, 1)
        coeffs = [0] * (n + 1)
        for e, c in spec.terms.items():
            coeffs[e[v]] = c
        f = UniPoly.from_codes(K, coeffs).scale(inv_unit)
        _, fac = factor_univariate(f)
        specs.append(fac)
    for a in range(1, amax + 1):
        div_lists = []
        feasible = True
        for m in range(a + 1):
            divs = _monic_divisors_of_degree(specs[m], a, K, combo_cap)
            if not divs:
                feasible = False
                break
            div_lists.append(divs)
        if not feasible:
            continue
        total = 1
        for d in div_lists:
            total *= len(d)
            if total > combo_cap:
                raise ToolLimitError(
                    "CAP_EXCEEDED",
                    f"factor-combination search exceeded {combo_cap}",
                )
        idx = [0] * (a + 1)
        while True:
            combo = [div_lists[m][idx[m]] for m in range(a + 1)]
            cand = _interpolate_factor(K, v, s, t, a, betas[: a + 1], combo)
            if cand is not None:
                quo, rem = divmod_in_var(work, cand, v)
                if rem.is_zero():
                    if reducer.shear is not None:
                        cand = cand.substitute_linear(reducer.shear_inv)
                    return cand.canonical()
            k = a
            while k >= 0:
                idx[k] += 1
                if idx[k] < len(div_lists[k]):
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                break
    return None


def _interpolate_factor(K, v, s, t, a, betas, combo):
    """Candidate homogeneous factor from monic specialized divisors."""
    terms = {}
    top = [0, 0, 0]
    top[v] = a
    terms[tuple(top)] = 1
    for j in range(a):
        ys = []
        for m in range(a + 1):
            cs = combo[m].coeffs
            ys.append(cs[j] if j < len(cs) else 0)
        cj = _lagrange(K, betas, ys)
        if cj.degree > a - j:
            return None
        for k, code in enumerate(cj.coeffs):
            if code:
                e = [0, 0, 0]
                e[v] = j
                e[s] = k
                e[t] = a - j - k
                terms[tuple(e)] = code
    return TriPoly._raw(K, terms)


def factor_homogeneous(F, combo_cap=200000):
    """Complete factorization of a homogeneous form.

    Returns (unit code, [(irreducible canonical factor, multiplicity), ...])
    sorted deterministically; the re-multiplied product is asserted equal to F.
    """
    if F.is_zero():
        raise InputError("ZERO_DIVISOR", "cannot factor zero")
    if not F.is_homogeneous():
        raise InputError("NOT_HOMOGENEOUS", "factorization expects a form")
    K = F.field
    work = F
    bag = []
    for v in range(3):
        xv = TriPoly.variable(K, v)
        while not work.is_constant() and all(e[v] >= 1 for e in work.terms):
            work = exact_div_tri(work, xv)
            bag.append(xv)
    distinct = []
    if not work.is_constant():
        sq = squarefree_part_homogeneous(work)
        stack = [sq]
        while stack:
            g = stack.pop()
            if g.total_degree() == 0:
                continue
            split = _find_homogeneous_factor(g, combo_cap)
            if split is None:
                distinct.append(g.canonical())
            else:
                stack.append(split)
                stack.append(exact_div_tri(g, split))
    result = {}
    for f in bag:
        key = tuple(sorted(f.terms.items()))
        result[key] = (f, result.get(key, (f, 0))[1] + 1)
    for f in distinct:
        mult = 0
        probe = work
        while True:
            try:
                probe = exact_div_tri(probe, f)
            except HardFailure:
                break
            mult += 1
        key = tuple(sorted(f.terms.items()))
        result[key] = (f, mult)
    factors = sorted(
        result.values(),
        key=lambda fm: (fm[0].total_degree(), sorted(fm[0].terms.items())),
    )
    check = TriPoly.constant(K, 1)
    for f, m in factors:
        for _ in range(m):
            check = check * f
    unit_num = F.lead_code()
    unit_den = check.lead_code()
    unit = K.div(unit_num, unit_den)
    assert check.scale(unit) == F, "homogeneous factorization postcheck failed"
    return unit, factors
