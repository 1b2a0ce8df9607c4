"""Projective-linear maps acting on a plane curve.

This module models finite subgroups of the linear automorphism group of a
smooth plane model: composition and closure from generators, orbits and
stabilizers, pullback of rational functions and divisors, the degree of
the morphism to the line that a rational function induces, search for a
generator of the fixed field of a group, and the Mobius normalization
that moves a prescribed fiber to zero and another to infinity.

Matrices are stored as flat row-major 9-tuples of field codes in the
canonical projective scaling (first nonzero entry equal to one), so maps
compare and hash by value.
"""

import math
import random

from ._backend import closure_set, mat_apply, mat_canon, mat_mul3
from .algebra.linalg import det3, mat_inv, nullspace
from .algebra.tripoly import TriPoly
from .algebra.unipoly import UniPoly, roots_in_field
from .curve import (
    Divisor,
    divisor_of_function,
    form_intersection_divisor,
    local_valuation,
    normalize_point,
    point_from_codes,
)
from .errors import HardFailure, InputError, ToolLimitError

CLOSURE_CAP_DEFAULT = 100000

_IDENTITY_ROWS = (1, 0, 0, 0, 1, 0, 0, 0, 1)


class ProjMap:
    """Invertible projective-linear map of the plane.

    The matrix acts on column vectors of homogeneous coordinates; the
    stored representative is scaled so its first nonzero entry is one,
    which makes equality and hashing well defined.
    """

    __slots__ = ("field", "rows")

    def __init__(self, field, entries):
        entries = list(entries)
        if len(entries) == 3:
            flat = [x for row in entries for x in row]
        else:
            flat = entries
        if len(flat) != 9:
            raise InputError("BAD_MATRIX", "expected a 3x3 matrix")
        flat = [int(x) for x in flat]
        if any(x < 0 or x >= field.q for x in flat):
            raise InputError("BAD_MATRIX", "matrix entry is not a field code")
        try:
            canon = mat_canon(field, flat)
        except ValueError:
            raise InputError("BAD_MATRIX", "zero matrix") from None
        nested = [canon[0:3], canon[3:6], canon[6:9]]
        if det3(field, nested) == 0:
            raise InputError("SINGULAR_MATRIX", "matrix is not invertible")
        self.field = field
        self.rows = canon

    @classmethod
    def identity(cls, field):
        return cls(field, _IDENTITY_ROWS)

    def nested(self):
        r = self.rows
        return [list(r[0:3]), list(r[3:6]), list(r[6:9])]

    def is_identity(self):
        return self.rows == _IDENTITY_ROWS

    def apply(self, codes):
        """Image of a coordinate triple of field codes."""
        return mat_apply(self.field, self.rows, codes)

    def apply_point(self, P):
        """Image of a curve point, revalidated on the same curve."""
        codes, _ = normalize_point(self.field, self.apply(P.codes))
        return point_from_codes(P.curve, codes)

    def inverse(self):
        return ProjMap(self.field, mat_inv(self.field, self.nested()))

    def __mul__(self, other):
        if not isinstance(other, ProjMap):
            return NotImplemented
        if self.field is not other.field:
            raise InputError("FIELD_MISMATCH", "maps over different fields")
        return ProjMap(self.field, mat_mul3(self.field, self.rows, other.rows))

    def __eq__(self, other):
        return (
            isinstance(other, ProjMap)
            and self.field is other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.field), self.rows))

    def __repr__(self):
        K = self.field
        rows = [
            "[" + ", ".join(str(list(K.decode(c))) for c in self.rows[3 * i : 3 * i + 3]) + "]"
            for i in range(3)
        ]
        return "ProjMap(" + "; ".join(rows) + ")"

    def map_field(self, embed):
        return ProjMap(embed.target, [embed(c) for c in self.rows])

    def to_json(self):
        K = self.field
        return [
            [list(K.decode(self.rows[3 * i + j])) for j in range(3)] for i in range(3)
        ]

    @classmethod
    def from_json(cls, field, obj):
        rows = [[field.encode(tuple(v)) for v in row] for row in obj]
        return cls(field, rows)


def map_preserves_curve(M, C):
    """Proportionality constant c with F(M x) = c F(x), or None.

    The comparison is a full symbolic substitution, so a non-None return
    certifies that M restricts to an automorphism of the curve.
    """
    if M.field is not C.field:
        raise InputError("FIELD_MISMATCH", "map and curve over different fields")
    G = C.F.substitute_linear(M.rows)
    c = C.field.div(G.terms.get(C.F.lead_key(), 0), C.F.lead_code())
    if c == 0:
        return None
    return c if G == C.F.scale(c) else None


def _projective_point_codes(K):
    q = K.q
    pts = [(1, y, z) for y in range(q) for z in range(q)]
    pts.extend((0, 1, z) for z in range(q))
    pts.append((0, 0, 1))
    return pts


def _verify_elements_preserve(C, elems):
    """Check F(M x) = c F(x) for every listed map; internal failure is fatal.

    When deg F <= q the identity is certified by evaluating at every point
    of the projective plane over the base field: a nonzero form of degree
    d <= q restricted to a line is a binary form of degree d, so vanishing
    at all q+1 > d points of the line forces the line to divide it, and a
    form cannot carry more than d distinct line factors.  Larger degrees
    fall back to one symbolic substitution per element.
    """
    K = C.field
    if C.degree <= K.q and K.q <= 1024:
        pts = _projective_point_codes(K)
        terms = C.terms_flat()
        exps = sorted({e for t in terms for e in t[1:] if e > 1})
        pow_tab = {e: [K.pow(c, e) for c in range(K.q)] for e in exps}
        mul = K.mul
        add = K.add

        def fval(pt):
            x, y, z = pt
            acc = 0
            for cf, e0, e1, e2 in terms:
                t = cf
                if e0:
                    t = mul(t, x if e0 == 1 else pow_tab[e0][x])
                if e1:
                    t = mul(t, y if e1 == 1 else pow_tab[e1][y])
                if e2:
                    t = mul(t, z if e2 == 1 else pow_tab[e2][z])
                acc = add(acc, t)
            return acc

        fvals = [fval(pt) for pt in pts]
        base = next(i for i, v in enumerate(fvals) if v)
        for M in elems:
            rows = M.rows
            c = K.div(fval(mat_apply(K, rows, pts[base])), fvals[base])
            ok = c != 0
            if ok:
                for pt, fv in zip(pts, fvals):
                    if fval(mat_apply(K, rows, pt)) != mul(c, fv):
                        ok = False
                        break
            if not ok:
                raise HardFailure(
                    "NOT_AUTOMORPHISM",
                    "a closure element does not preserve the curve",
                )
    else:
        for M in elems:
            if map_preserves_curve(M, C) is None:
                raise HardFailure(
                    "NOT_AUTOMORPHISM",
                    "a closure element does not preserve the curve",
                )


class AutGroup:
    """Finite set of curve-preserving maps, closed under product and inverse.

    Construction re-verifies the group axioms on the element set: identity
    membership, inverse closure, and product closure (full pairwise table
    for small orders, generator translates otherwise, which suffices since
    every element is a word in the generators).
    """

    __slots__ = ("curve", "elements", "generators", "order", "rows_set")

    def __init__(self, curve, elements, generators):
        elements = tuple(sorted(elements, key=lambda m: m.rows))
        self.curve = curve
        self.elements = elements
        self.generators = tuple(generators)
        self.order = len(elements)
        self.rows_set = frozenset(m.rows for m in elements)
        if len(self.rows_set) != self.order:
            raise HardFailure("CLOSURE_BROKEN", "duplicate elements in group set")
        self._verify_axioms()

    def _verify_axioms(self):
        K = self.curve.field
        if _IDENTITY_ROWS not in self.rows_set:
            raise HardFailure("CLOSURE_BROKEN", "identity missing from group set")
        for g in self.generators:
            if g.rows not in self.rows_set:
                raise HardFailure("CLOSURE_BROKEN", "generator missing from group set")
        left = self.elements if self.order <= 512 else self.generators
        for a in left:
            ar = a.rows
            for b in self.elements:
                if mat_canon(K, mat_mul3(K, ar, b.rows)) not in self.rows_set:
                    raise HardFailure(
                        "CLOSURE_BROKEN", "group set is not closed under composition"
                    )
        for m in self.elements:
            if m.inverse().rows not in self.rows_set:
                raise HardFailure(
                    "CLOSURE_BROKEN", "group set is not closed under inverse"
                )

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def contains(self, M):
        return M.rows in self.rows_set

    def is_trivial(self):
        return self.order == 1

    def conjugate(self, by):
        """Subgroup by * G * by^-1 for a curve-preserving map."""
        if map_preserves_curve(by, self.curve) is None:
            raise InputError("NOT_AUTOMORPHISM", "conjugating map moves the curve")
        inv = by.inverse()
        gens = [by * g * inv for g in self.generators]
        return group_closure(gens, self.curve, cap=max(self.order, 1))

    def to_json(self):
        return {
            "order": self.order,
            "generators": [g.to_json() for g in self.generators],
        }

    def __repr__(self):
        return f"AutGroup(order={self.order})"


def _generating_subset(K, rows_sorted, cap):
    """Small generating list for a set of matrices already known to be a group."""
    gens = []
    have = {_IDENTITY_ROWS}
    for r in rows_sorted:
        if r not in have:
            gens.append(r)
            have = set(closure_set(K, gens, cap))
    return gens


def group_closure(gens, C, cap=CLOSURE_CAP_DEFAULT):
    """Group generated by the maps inside Aut of the curve.

    Every generator is certified symbolically; the closure is recomputed
    by breadth-first products and then every element is re-verified
    against the curve.
    """
    if cap < 1:
        raise InputError("BAD_CAP", "closure cap must be at least 1")
    K = C.field
    pgens = []
    for g in gens:
        M = g if isinstance(g, ProjMap) else ProjMap(K, g)
        if M.field is not K:
            raise InputError("FIELD_MISMATCH", "generator over a different field")
        if map_preserves_curve(M, C) is None:
            raise InputError(
                "NOT_AUTOMORPHISM", "a generator does not preserve the curve"
            )
        pgens.append(M)
    rows_list = closure_set(K, [M.rows for M in pgens], cap)
    elems = tuple(ProjMap(K, r) for r in rows_list)
    _verify_elements_preserve(C, elems)
    if not pgens:
        pgens = [ProjMap.identity(K)]
    return AutGroup(C, elems, tuple(pgens))


def orbit_and_stabilizer(G, P):
    """Orbit of P under G (sorted points) and its stabilizer subgroup."""
    C = G.curve
    if P.curve is not C:
        raise InputError("CURVE_MISMATCH", "point does not live on the group's curve")
    K = C.field
    seen = {}
    stab = []
    for M in G.elements:
        img, _ = normalize_point(K, M.apply(P.codes))
        if img == P.codes:
            stab.append(M)
        if img not in seen:
            seen[img] = point_from_codes(C, img)
    orbit = sorted(seen.values(), key=lambda Q: Q.sort_key())
    if len(orbit) * len(stab) != G.order:
        raise HardFailure(
            "ORBIT_STABILIZER_BROKEN",
            "orbit times stabilizer size does not match the group order",
        )
    if len(stab) > 512:
        rows = _generating_subset(K, [m.rows for m in stab], len(stab))
        sgens = tuple(ProjMap(K, r) for r in rows)
    else:
        sgens = tuple(stab)
    return orbit, AutGroup(C, tuple(stab), sgens)


def orbit_sum(G, P):
    """Divisor sum of M(P) over all M in G, of degree equal to the order.

    Computed twice: directly by accumulation over the elements, and as
    stabilizer order times the sum over the orbit; the two must agree.
    """
    orbit, stab = orbit_and_stabilizer(G, P)
    K = G.curve.field
    acc = {}
    cache = {}
    for M in G.elements:
        img, _ = normalize_point(K, M.apply(P.codes))
        if img not in cache:
            cache[img] = point_from_codes(G.curve, img)
        Q = cache[img]
        acc[Q] = acc.get(Q, 0) + 1
    direct = Divisor(acc)
    cross = Divisor({Q: stab.order for Q in orbit})
    if direct != cross or direct.degree() != G.order:
        raise HardFailure(
            "ORBIT_STABILIZER_BROKEN",
            "orbit sum disagrees with the stabilizer-scaled orbit",
        )
    return direct


class RatFunc:
    """Rational function on a curve, as a ratio of equal-degree forms.

    Numerator and denominator are stored reduced to their normal forms
    modulo the curve, and equality is cross-multiplication modulo the
    curve, so representatives never matter.
    """

    __slots__ = ("curve", "num", "den")

    def __init__(self, curve, num, den):
        K = curve.field
        if num.field is not K or den.field is not K:
            raise InputError("FIELD_MISMATCH", "function over a different field")
        if not num.is_homogeneous() or not den.is_homogeneous():
            raise InputError("NOT_HOMOGENEOUS", "numerator and denominator must be forms")
        if not num.is_zero() and num.total_degree() != den.total_degree():
            raise InputError(
                "DEGREE_MISMATCH", "numerator and denominator degrees differ"
            )
        rden = curve.reducer.reduce(den)
        if rden.is_zero():
            raise InputError(
                "DENOMINATOR_VANISHES", "denominator vanishes on the curve"
            )
        self.curve = curve
        self.num = curve.reducer.reduce(num)
        self.den = rden

    def is_zero_function(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RatFunc) or self.curve is not other.curve:
            return NotImplemented if not isinstance(other, RatFunc) else False
        cross = self.num * other.den - other.num * self.den
        return self.curve.reducer.reduce(cross).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"RatFunc(({self.num!r})/({self.den!r}))"

    def sub_constant(self, code):
        """The function f - c for a field code c."""
        return RatFunc(self.curve, self.num - self.den.scale(code), self.den)

    def reciprocal(self):
        return RatFunc(self.curve, self.den, self.num)

    def value_at(self, P):
        """Value at a point as ("finite", code) or ("infinity", None).

        Indeterminate 0/0 coordinates are resolved along the branch at P
        by comparing valuations of numerator and denominator.
        """
        if P.curve is not self.curve:
            raise InputError("CURVE_MISMATCH", "point on a different curve")
        K = self.curve.field
        if self.num.is_zero():
            return ("finite", 0)
        nv = self.num.eval(P.codes)
        dv = self.den.eval(P.codes)
        if dv:
            return ("finite", K.div(nv, dv))
        if nv:
            return ("infinity", None)
        vn = local_valuation(P, self.num)
        vd = local_valuation(P, self.den)
        if vn > vd:
            return ("finite", 0)
        if vn < vd:
            return ("infinity", None)
        n = vn + 2
        br = P.branch(n)
        sn = br.eval_form(self.num, n)
        sd = br.eval_form(self.den, n)
        return ("finite", K.div(sn[vn], sd[vn]))

    def base_change(self, curve_big):
        embed = self.curve.field.embed_into(curve_big.field)
        return RatFunc(
            curve_big, self.num.map_field(embed), self.den.map_field(embed)
        )

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, curve, obj):
        K = curve.field
        return cls(
            curve,
            TriPoly.from_json(K, obj["num"]),
            TriPoly.from_json(K, obj["den"]),
        )


def _constant_value(C, f):
    """Field code c with f = c on the curve, or None if f is nonconstant."""
    r_num = C.reducer.reduce(f.num)
    r_den = C.reducer.reduce(f.den)
    if r_num.is_zero():
        return 0
    c = C.field.div(r_num.terms.get(r_den.lead_key(), 0), r_den.lead_code())
    if c and r_num == r_den.scale(c):
        return c
    return None


def pullback(M, x):
    """Pullback of a rational function or a divisor along the map M.

    Functions compose with M; divisors move point by point through the
    inverse map, preserving multiplicities, so the action law
    pullback(M1*M2, x) = pullback(M2, pullback(M1, x)) holds.
    """
    if isinstance(x, Divisor):
        if x.is_zero():
            return x
        C = next(iter(x.mult)).curve
        if M.field is not C.field:
            raise InputError("FIELD_MISMATCH", "map and divisor over different fields")
        inv = M.inverse()
        K = C.field
        out = {}
        for P, m in x.mult.items():
            codes, _ = normalize_point(K, inv.apply(P.codes))
            out[point_from_codes(C, codes)] = m
        return Divisor(out)
    C = x.curve
    if M.field is not C.field:
        raise InputError("FIELD_MISMATCH", "map and function over different fields")
    return RatFunc(
        C,
        x.num.substitute_linear(M.rows),
        x.den.substitute_linear(M.rows),
    )


def _effective_part(D):
    return Divisor({P: m for P, m in D.mult.items() if m > 0})


def _polar_part(D):
    return Divisor({P: -m for P, m in D.mult.items() if m < 0})


def function_degree(f, seed=0):
    """Degree of the morphism to the line induced by a nonconstant function.

    Primary computation: the zero divisor of f - lambda for a sampled
    lambda, with retries when a fiber is not rational over the working
    field; cross-checked against the pole divisor of f.  The lambda
    sequence is deterministic in the seed.
    """
    C = f.curve
    K = C.field
    if f.is_zero_function() or _constant_value(C, f) is not None:
        raise InputError("CONSTANT_FUNCTION", "degree is defined for nonconstant functions")
    D = divisor_of_function(C, f)
    deg_inf = _polar_part(D).degree()
    den_div = form_intersection_divisor(C, f.den)
    rng = random.Random(f"{seed}/function-degree")
    if K.q <= 4096:
        lams = rng.sample(range(K.q), min(16, K.q))
    else:
        lams = [rng.randrange(K.q) for _ in range(16)]
    best_ext = 0
    failures = 0
    for lam in lams:
        form = f.num - f.den.scale(lam)
        try:
            fiber = _effective_part(form_intersection_divisor(C, form) - den_div)
        except ToolLimitError as err:
            failures += 1
            deg = err.details.get("degree", 0)
            if deg and (best_ext == 0 or deg < best_ext):
                best_ext = deg
            continue
        except InputError as err:
            if err.code == "SINGULAR_POINT":
                failures += 1
                continue
            raise
        if fiber.degree() != deg_inf:
            raise HardFailure(
                "DEGREE_CROSS_CHECK",
                "sampled fiber degree disagrees with the pole degree",
                fiber=fiber.degree(),
                poles=deg_inf,
            )
        return deg_inf
    raise ToolLimitError(
        "RETRIES_EXHAUSTED",
        f"no sampled fiber was rational over the working field after {failures} tries",
        suggested_extension=best_ext,
    )


def is_invariant(f, G):
    """True when every element of G pulls f back to itself."""
    if f.curve is not G.curve:
        raise InputError("CURVE_MISMATCH", "function and group on different curves")
    for M in G.elements:
        if M.is_identity():
            continue
        if pullback(M, f) != f:
            return False
    return True


def _char_poly(K, A):
    """Characteristic polynomial of a nested 3x3 matrix, little-endian."""
    (a, b, c), (d, e, f), (g, h, i) = A
    tr = K.add(K.add(a, e), i)
    m1 = K.sub(K.mul(e, i), K.mul(f, h))
    m2 = K.sub(K.mul(a, i), K.mul(c, g))
    m3 = K.sub(K.mul(a, e), K.mul(b, d))
    minors = K.add(K.add(m1, m2), m3)
    dt = det3(K, A)
    return UniPoly(K, [K.neg(dt), minors, K.neg(tr), 1])


def _common_eigenforms(G):
    """Linear forms scaled by every element of G, up to projective scaling.

    Candidates come from the eigen-lines of the transposed generator
    matrices; each survivor is checked against all group elements, so the
    returned list is correct though not always exhaustive for repeated
    eigenvalues.
    """
    K = G.curve.field
    cands = {}
    for g in G.generators:
        n = g.nested()
        tr = [[n[j][i] for j in range(3)] for i in range(3)]
        for root in set(roots_in_field(_char_poly(K, tr), K)):
            lam = root.code
            shifted = [
                [K.sub(tr[i][j], lam if i == j else 0) for j in range(3)]
                for i in range(3)
            ]
            for vec in nullspace(K, shifted):
                key = mat_canon(K, tuple(vec) + (0,) * 6)[0:3]
                cands[key] = None
    forms = []
    for vec in cands:
        keep = True
        for M in G.elements:
            img = tuple(
                K.add(
                    K.add(K.mul(vec[0], M.rows[0 + j]), K.mul(vec[1], M.rows[3 + j])),
                    K.mul(vec[2], M.rows[6 + j]),
                )
                for j in range(3)
            )
            if mat_canon(K, img + (0,) * 6)[0:3] != vec:
                keep = False
                break
        if keep:
            forms.append(TriPoly.linear_form(K, vec))
    return forms


def invariant_generator(G, seed=0):
    """Search for t with fixed field k(t): invariant and of degree |G|.

    Candidate families, in order: coordinate ratios, ratios of common
    eigenforms of the group, Reynolds averages of coordinate ratios, and
    orbit products of coordinate ratios.  The first candidate passing
    both the invariance and the degree filter wins.
    """
    C = G.curve
    K = C.field
    if G.order < 2:
        raise InputError("TRIVIAL_GROUP", "fixed-field search needs order at least 2")
    coords = [TriPoly.variable(K, v) for v in range(3)]
    pairs = [(i, j) for i in range(3) for j in range(3) if i != j]
    cands = [(coords[i], coords[j]) for i, j in pairs]
    eig = _common_eigenforms(G)
    cands.extend(
        (eig[a], eig[b])
        for a in range(len(eig))
        for b in range(len(eig))
        if a != b
    )
    n_linear = len(cands)
    if G.order <= 20:
        images = {
            v: [coords[v].substitute_linear(M.rows) for M in G.elements]
            for v in range(3)
        }
        for i, j in pairs:
            den = TriPoly.constant(K, 1)
            for Lj in images[j]:
                den = den * Lj
            num = TriPoly.zero(K)
            for k, Li in enumerate(images[i]):
                part = Li
                for m, Lj in enumerate(images[j]):
                    if m != k:
                        part = part * Lj
                num = num + part
            cands.append((num, den))
        for i, j in pairs:
            num = TriPoly.constant(K, 1)
            den = TriPoly.constant(K, 1)
            for Li, Lj in zip(images[i], images[j]):
                num = num * Li
                den = den * Lj
            cands.append((num, den))
    # seed zero keeps the canonical order; other seeds shuffle the cheap
    # linear candidates so repeated runs can realize the same quotient
    # through different generators; the heavy fallback families stay last
    if seed:
        head = cands[:n_linear]
        random.Random(f"{seed}/invariant-candidates").shuffle(head)
        cands[:n_linear] = head
    for num, den in cands:
        try:
            f = RatFunc(C, num, den)
        except InputError:
            continue
        try:
            if not is_invariant(f, G):
                continue
            if function_degree(f, seed=seed) != G.order:
                continue
        except (InputError, ToolLimitError):
            continue
        return f
    raise ToolLimitError(
        "NOT_FOUND",
        "no invariant generator found; supply t in the scenario",
    )


def _fiber_divisor(t, val):
    """Scheme-theoretic fiber of t over a value, as an effective divisor."""
    C = t.curve
    if val[0] == "infinity":
        return _polar_part(divisor_of_function(C, t))
    form = t.num - t.den.scale(val[1])
    D = form_intersection_divisor(C, form) - form_intersection_divisor(C, t.den)
    return _effective_part(D)


def mobius_normalize(t, zero_at, pole_at):
    """Fractional-linear change of t with prescribed zero and pole fibers.

    Returns (t - a)/(t - b) for a = t(zero_at), b = t(pole_at), with the
    degenerate forms t - a when b is infinite and 1/(t - b) when a is.
    The divisor identity (result) = fiber(a) - fiber(b) is recomputed and
    enforced on every call.
    """
    C = t.curve
    if zero_at.curve is not C or pole_at.curve is not C:
        raise InputError("CURVE_MISMATCH", "points on a different curve")
    if t.is_zero_function() or _constant_value(C, t) is not None:
        raise InputError("CONSTANT_FUNCTION", "cannot normalize a constant function")
    a = t.value_at(zero_at)
    b = t.value_at(pole_at)
    if a == b:
        raise InputError(
            "SAME_FIBER", "the two points lie in one fiber of the function"
        )
    if a[0] == "infinity":
        result = RatFunc(C, t.den, t.num - t.den.scale(b[1]))
    elif b[0] == "infinity":
        result = RatFunc(C, t.num - t.den.scale(a[1]), t.den)
    else:
        result = RatFunc(
            C, t.num - t.den.scale(a[1]), t.num - t.den.scale(b[1])
        )
    fiber_zero = _fiber_divisor(t, a)
    fiber_pole = _fiber_divisor(t, b)
    D = divisor_of_function(C, result)
    if D != fiber_zero - fiber_pole:
        raise HardFailure(
            "MOBIUS_POSTCONDITION",
            "normalized divisor does not match the fiber difference",
        )
    if fiber_zero.mult.get(zero_at, 0) <= 0 or fiber_pole.mult.get(pole_at, 0) <= 0:
        raise HardFailure(
            "MOBIUS_POSTCONDITION",
            "prescribed points are missing from their fibers",
        )
    return result
