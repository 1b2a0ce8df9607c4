"""Plane curve models, smooth points, local valuations, divisors.

A curve is an irreducible homogeneous trivariate form over a finite field.
Points are normalized projective triples required to be smooth; each smooth
point carries a unique branch, expanded on demand by Newton lifting in the
chart of its leading coordinate.  Valuations of forms and rational functions
along these branches drive all divisor computations.
"""

from __future__ import annotations

import math

from . import _backend
from .algebra.field import FieldElement
from .algebra.linalg import nullspace
from .algebra.tripoly import Reducer, TriPoly, factor_homogeneous
from .algebra.unipoly import UniPoly, factor_univariate
from .errors import HardFailure, InputError, ToolLimitError, extension_required

ABS_IRRED_EXT_DEGREES = (2, 3)

# largest projective plane the intersection fallback may enumerate when
# chasing support that left the working field
INTERSECTION_SCAN_CAP = 4_000_000


# -- truncated power series helpers (lists of codes, index = t-power) ------


def _ser_trim(a, n):
    return a[:n] if len(a) > n else a


def _ser_add(K, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] = K.add(out[k], c)
    return out


def _ser_scale(K, a, c):
    return [K.mul(x, c) for x in a]


def _ser_mul(K, a, b, n):
    out = [0] * min(n, len(a) + len(b) - 1 if a and b else 0)
    if not out:
        return [0]
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        top = min(len(b), n - i)
        for j in range(top):
            y = b[j]
            if y:
                out[i + j] = K.add(out[i + j], K.mul(x, y))
    return out


def _ser_inv(K, a, n):
    if not a or a[0] == 0:
        raise HardFailure("NOT_A_UNIT", "series with zero constant term")
    inv0 = K.inv(a[0])
    out = [inv0] + [0] * (n - 1)
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            s = K.add(s, K.mul(a[j], out[k - j]))
        out[k] = K.neg(K.mul(inv0, s))
    return out


def _ser_pow(K, a, e, n, cache):
    if e in cache:
        return cache[e]
    best = max(k for k in cache if k <= e)
    cur = cache[best]
    while best < e:
        cur = _ser_mul(K, cur, a, n)
        best += 1
        cache[best] = cur
    return cur


class PlaneCurve:
    """Irreducible homogeneous plane model with cached reduction machinery."""

    def __init__(self, F, field, degree, abs_irreducible):
        self.F = F
        self.field = field
        self.degree = degree
        self.abs_irreducible = abs_irreducible
        self.reducer = Reducer(F)
        self._points_cache = None
        self._base_changes = {}

    @property
    def shear_record(self):
        return self.reducer.shear

    def terms_flat(self):
        return sorted((c, e[0], e[1], e[2]) for e, c in self.F.terms.items())

    def rational_points(self):
        """All normalized points over the base field (smooth or not)."""
        if self._points_cache is None:
            self._points_cache = _backend.find_projective_zeros(
                self.field, self.terms_flat()
            )
        return self._points_cache

    def base_change(self, target):
        if target is self.field:
            return self
        hit = self._base_changes.get(id(target))
        if hit is None:
            emb = self.field.embed_into(target)
            hit = PlaneCurve(
                self.F.map_field(emb), target, self.degree, self.abs_irreducible
            )
            self._base_changes[id(target)] = hit
        return hit

    def __repr__(self):
        return f"PlaneCurve(deg {self.degree} over {self.field!r})"


def validate_curve(F, K):
    """Checked curve model: homogeneous, degree >= 3, irreducible over K;
    absolute irreducibility is certified by extension point counts when the
    counts are decisive and recorded as probable otherwise."""
    if F.field is not K:
        raise InputError("FIELD_MISMATCH", "curve polynomial over a different field")
    if F.is_zero() or not F.is_homogeneous():
        raise InputError("NOT_HOMOGENEOUS", "curve polynomial must be a nonzero form")
    n = F.total_degree()
    if n < 3:
        raise InputError("DEGREE_TOO_SMALL", f"curve degree {n} < 3")
    _, factors = factor_homogeneous(F)
    if len(factors) != 1 or factors[0][1] != 1:
        raise InputError(
            "REDUCIBLE",
            "curve polynomial factors over the base field",
            factors=[f.to_json() for f, _ in factors],
        )
    # r conjugate geometric components would force r | e for any extension
    # degree e whose point count exceeds the pairwise Bezout bound n^2/2;
    # exceeding it for e = 2 and e = 3 leaves r = 1.
    bound = n * n // 2
    certified = True
    for e in ABS_IRRED_EXT_DEGREES:
        try:
            big, emb = _extension(K, e)
        except ToolLimitError:
            certified = False
            break
        if big.q * big.q + big.q + 1 > INTERSECTION_SCAN_CAP:
            certified = False
            break
        Fe = F.map_field(emb)
        terms = sorted((c, ex[0], ex[1], ex[2]) for ex, c in Fe.terms.items())
        if _backend.count_projective_zeros(big, terms) <= bound:
            certified = False
            break
    status = "certified"
    if not certified:
        status = "probable"
        for e in ABS_IRRED_EXT_DEGREES:
            try:
                big, emb = _extension(K, e)
            except ToolLimitError:
                continue
            _, efactors = factor_homogeneous(F.map_field(emb))
            if len(efactors) != 1 or efactors[0][1] != 1:
                raise InputError(
                    "REDUCIBLE",
                    f"curve polynomial factors over the degree-{e} extension",
                )
    return PlaneCurve(F, K, n, status)


def _extension(K, e):
    from .algebra.field import extension_field

    return extension_field(K, e)


class CurvePoint:
    """Normalized smooth projective point on a fixed curve."""

    __slots__ = ("curve", "codes", "chart", "_branches")

    def __init__(self, curve, codes, chart):
        self.curve = curve
        self.codes = codes
        self.chart = chart
        self._branches = {}

    @property
    def field(self):
        return self.curve.field

    @property
    def coords(self):
        K = self.curve.field
        return tuple(K.decode(c) for c in self.codes)

    def sort_key(self):
        return self.coords

    def __eq__(self, other):
        return (
            isinstance(other, CurvePoint)
            and self.curve is other.curve
            and self.codes == other.codes
        )

    def __hash__(self):
        return hash((id(self.curve), self.codes))

    def __repr__(self):
        K = self.curve.field
        return "(" + " : ".join(str(list(K.decode(c))) for c in self.codes) + ")"

    def to_json(self):
        K = self.curve.field
        return [list(K.decode(c)) for c in self.codes]

    def branch(self, precision):
        """Branch expansion at this point with at least the given precision."""
        best = max((p for p in self._branches if p >= precision), default=None)
        if best is not None:
            return self._branches[best]
        be = BranchExpansion(self, precision)
        self._branches[precision] = be
        return be


def normalize_point(K, codes):
    lead = next((i for i, c in enumerate(codes) if c), None)
    if lead is None:
        raise InputError("PARSE_ERROR", "projective point with all coordinates zero")
    if codes[lead] != 1:
        inv = K.inv(codes[lead])
        codes = tuple(K.mul(inv, c) for c in codes)
    else:
        codes = tuple(codes)
    return codes, lead


def point_from_codes(C, codes):
    """Validated smooth point from coordinate codes."""
    K = C.field
    codes, chart = normalize_point(K, tuple(codes))
    if C.F.eval(codes) != 0:
        raise InputError(
            "NOT_ON_CURVE",
            "point does not satisfy the curve equation",
            point=[list(K.decode(c)) for c in codes],
        )
    if all(C.F.partial(v).eval(codes) == 0 for v in range(3)):
        raise InputError(
            "SINGULAR_POINT",
            "point is singular on the curve",
            point=[list(K.decode(c)) for c in codes],
        )
    return CurvePoint(C, codes, chart)


def point_check(C, coords):
    """Validated smooth point from raw coordinates (field elements,
    coefficient vectors, or rational integers)."""
    K = C.field
    codes = []
    for c in coords:
        if isinstance(c, FieldElement):
            if c.field is not K:
                raise InputError("FIELD_MISMATCH", "point coordinate in a different field")
            codes.append(c.code)
        else:
            codes.append(K.element(c).code)
    return point_from_codes(C, codes)


class BranchExpansion:
    """Newton-lifted power series of the dependent chart coordinate.

    In the chart of the point's leading coordinate the curve is smooth, so one
    of the two affine coordinates has a nonvanishing partial; that one becomes
    dependent and the other is the local parameter t (shifted to 0).
    """

    def __init__(self, point, precision):
        C = point.curve
        K = C.field
        self.point = point
        self.precision = max(2, precision)
        chart = point.chart
        others = [v for v in range(3) if v != chart]
        f_aff = C.F.set_var(chart, 1)
        d2 = f_aff.partial(others[1]).eval(point.codes)
        if d2 != 0:
            self.indep, self.dep = others[0], others[1]
        else:
            self.indep, self.dep = others[1], others[0]
            if f_aff.partial(self.dep).eval(point.codes) == 0:
                raise HardFailure(
                    "SINGULAR_POINT", "no transverse coordinate at a smooth point"
                )
        u0 = point.codes[self.indep]
        v0 = point.codes[self.dep]
        # coefficients of f(u0 + t, w) as polynomials in t, indexed by w-power
        shift = UniPoly.from_codes(K, (u0, 1))
        dmax = f_aff.deg_in(self.dep)
        coeffs = [UniPoly.from_codes(K, ()) for _ in range(dmax + 1)]
        spow = {0: UniPoly.from_codes(K, (1,))}
        for e, code in f_aff.terms.items():
            eu, ev = e[self.indep], e[self.dep]
            if eu not in spow:
                best = max(k for k in spow if k <= eu)
                cur = spow[best]
                while best < eu:
                    cur = cur * shift
                    best += 1
                    spow[best] = cur
            coeffs[ev] = coeffs[ev] + spow[eu].scale(code)
        dcoeffs = [
            coeffs[j + 1].scale(K.from_int(j + 1)) for j in range(dmax)
        ]

        def eval_poly(cs, w, n):
            acc = [0]
            for j in range(len(cs) - 1, -1, -1):
                acc = _ser_mul(K, acc, w, n)
                acc = _ser_add(K, acc, _ser_trim(list(cs[j].coeffs), n))
            return acc

        target = self.precision
        n = 1
        w = [v0]
        while n < target:
            n = min(2 * n, target)
            fw = _ser_trim(eval_poly(coeffs, w, n), n)
            dfw = _ser_trim(eval_poly(dcoeffs, w, n), n)
            corr = _ser_mul(K, fw, _ser_inv(K, dfw, n), n)
            w = _ser_trim(_ser_add(K, w, _ser_scale(K, corr, K.neg(1))), n)
        check = eval_poly(coeffs, w, target)
        assert all(c == 0 for c in check[:target]), "branch series residual nonzero"
        self.series = w
        triple = [None, None, None]
        triple[chart] = [1]
        triple[self.indep] = [u0, 1]
        triple[self.dep] = w
        self.coordinate_series = triple

    def eval_form(self, G, n):
        """Series of the form G along the branch, to length n."""
        K = self.point.curve.field
        caches = [
            {0: [1], 1: _ser_trim(list(cs), n)} for cs in self.coordinate_series
        ]
        acc = [0]
        for e, code in G.terms.items():
            term = [code]
            for v in range(3):
                if e[v]:
                    pv = _ser_pow(
                        K, caches[v][1], e[v], n, caches[v]
                    )
                    term = _ser_mul(K, term, pv, n)
            acc = _ser_add(K, acc, term)
        return _ser_trim(acc, n)


def local_valuation(P, G):
    """Order of vanishing along the branch at P; +inf for forms identically
    zero on the curve.  Accepts a homogeneous form or a rational function
    (pairs with .num/.den), where the value is v(num) - v(den)."""
    if hasattr(G, "num") and hasattr(G, "den"):
        return local_valuation(P, G.num) - local_valuation(P, G.den)
    C = P.curve
    if G.is_zero():
        return math.inf
    cap = C.degree * G.total_degree() + 1
    be = P.branch(cap)
    ser = be.eval_form(G, cap)
    for k, c in enumerate(ser):
        if c:
            return k
    if C.reducer.is_multiple(G):
        return math.inf
    raise HardFailure(
        "PRECISION_EXHAUSTED",
        "valuation exceeded the Bezout cap for a form not vanishing on the curve",
    )


class Divisor:
    """Finite formal sum of curve points with nonzero integer multiplicities."""

    __slots__ = ("mult",)

    def __init__(self, mult=None):
        self.mult = {}
        if mult:
            for P, m in mult.items() if hasattr(mult, "items") else mult:
                if m:
                    self.mult[P] = self.mult.get(P, 0) + m
            self.mult = {P: m for P, m in self.mult.items() if m}

    @classmethod
    def single(cls, P, m=1):
        return cls({P: m})

    def degree(self):
        return sum(self.mult.values())

    def is_effective(self):
        return all(m > 0 for m in self.mult.values())

    def is_zero(self):
        return not self.mult

    def support(self):
        return sorted(self.mult, key=lambda P: P.sort_key())

    def __add__(self, other):
        out = dict(self.mult)
        for P, m in other.mult.items():
            out[P] = out.get(P, 0) + m
        return Divisor(out)

    def __sub__(self, other):
        out = dict(self.mult)
        for P, m in other.mult.items():
            out[P] = out.get(P, 0) - m
        return Divisor(out)

    def __neg__(self):
        return Divisor({P: -m for P, m in self.mult.items()})

    def scale(self, k):
        return Divisor({P: k * m for P, m in self.mult.items()})

    def minimum(self, other):
        """Pointwise minimum (for effective divisors: common part)."""
        out = {}
        for P in set(self.mult) | set(other.mult):
            m = min(self.mult.get(P, 0), other.mult.get(P, 0))
            if m:
                out[P] = m
        return Divisor(out)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.mult == other.mult

    def __hash__(self):
        return hash(tuple(sorted((P.codes, m) for P, m in self.mult.items())))

    def items_sorted(self):
        return sorted(self.mult.items(), key=lambda pm: pm[0].sort_key())

    def to_json(self):
        return [[P.to_json(), m] for P, m in self.items_sorted()]

    def __repr__(self):
        if not self.mult:
            return "Divisor(0)"
        parts = []
        for P, m in self.items_sorted():
            parts.append(f"{m}*{P!r}" if m != 1 else f"{P!r}")
        return " + ".join(parts)


def line_intersection_divisor(C, L, K_work=None):
    """Divisor cut on C by a line, of degree deg C; every intersection point
    must be rational over the working field and smooth on C."""
    if K_work is not None and K_work is not C.field:
        C = C.base_change(K_work)
    K = C.field
    if L.field is not K:
        L = L.map_field(L.field.embed_into(K))
    if L.is_zero() or L.total_degree() != 1:
        raise InputError("PARSE_ERROR", "intersection expects a nonzero linear form")
    row = [L.terms.get((1, 0, 0), 0), L.terms.get((0, 1, 0), 0), L.terms.get((0, 0, 1), 0)]
    v1, v2 = nullspace(K, [row])
    n = C.degree
    # binary form F(s*v1 + t*v2) via convolution on [s^k t^(deg-k)] vectors
    lin = []
    for i in range(3):
        lin.append([v2[i], v1[i]])
    bform = _binary_substitute(K, C.F, lin)
    u = UniPoly.from_codes(K, bform)
    t_mult = n - u.degree if not u.is_zero() else n
    points = []
    if t_mult:
        points.append((tuple(v1), t_mult))
    if not u.is_zero() and u.degree > 0:
        _, factors = factor_univariate(u)
        irr_degs = sorted({f.degree for f, _ in factors if f.degree > 1})
        if irr_degs:
            need = math.lcm(*irr_degs)
            raise extension_required(
                "line meets the curve in points defined over a degree-"
                f"{need} extension",
                need,
            )
        for f, m in factors:
            r = K.neg(f.coeffs[0])
            pt = tuple(K.add(K.mul(r, a), b) for a, b in zip(v1, v2))
            points.append((pt, m))
    out = {}
    for codes, m in points:
        P = point_from_codes(C, codes)
        out[P] = out.get(P, 0) + m
    D = Divisor(out)
    assert D.degree() == n, "line divisor degree mismatch"
    return D


def _binary_substitute(K, F, lin):
    """Coefficient list (index = s-power) of F(s*v1 + t*v2)."""
    n = F.total_degree()
    pow_cache = [{0: [1]} for _ in range(3)]

    def power(i, e):
        cache = pow_cache[i]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            cur = cache[best]
            while best < e:
                nxt = [0] * (len(cur) + 1)
                for a, c in enumerate(cur):
                    if c:
                        nxt[a] = K.add(nxt[a], K.mul(c, lin[i][0]))
                        nxt[a + 1] = K.add(nxt[a + 1], K.mul(c, lin[i][1]))
                cur = nxt
                best += 1
                cache[best] = cur
        return cache[e]

    out = [0] * (n + 1)
    for e, code in F.terms.items():
        term = [code]
        for i in range(3):
            if e[i]:
                p = power(i, e[i])
                nxt = [0] * (len(term) + len(p) - 1)
                for a, x in enumerate(term):
                    if x:
                        for b, y in enumerate(p):
                            if y:
                                nxt[a + b] = K.add(nxt[a + b], K.mul(x, y))
                term = nxt
        for k, c in enumerate(term):
            if c:
                out[k] = K.add(out[k], c)
    return out


def form_intersection_divisor(C, G):
    """Divisor cut on C by a homogeneous form G, of degree deg C * deg G."""
    K = C.field
    if G.field is not K:
        raise InputError("FIELD_MISMATCH", "form over a different field")
    if G.is_zero() or C.reducer.is_multiple(G):
        raise InputError("ZERO_DIVISOR", "form vanishes identically on the curve")
    if G.total_degree() == 0:
        return Divisor()
    out = {}
    total = 0
    for codes in C.rational_points():
        if G.eval(codes) == 0:
            P = point_from_codes(C, codes)
            v = local_valuation(P, G)
            out[P] = v
            total += v
    want = C.degree * G.total_degree()
    if total != want:
        for e in ABS_IRRED_EXT_DEGREES:
            try:
                big, _ = _extension(K, e)
            except ToolLimitError:
                continue
            if big.q * big.q + big.q + 1 > INTERSECTION_SCAN_CAP:
                raise extension_required(
                    "intersection support leaves the working field and the"
                    f" degree-{e} verification scan is out of reach",
                    e,
                )
            Ce = C.base_change(big)
            Ge = G.map_field(K.embed_into(big))
            t2 = 0
            for codes in Ce.rational_points():
                if Ge.eval(codes) == 0:
                    P = point_from_codes(Ce, codes)
                    t2 += local_valuation(P, Ge)
            if t2 == want:
                raise extension_required(
                    f"intersection support requires a degree-{e} extension", e
                )
        raise extension_required(
            "intersection support is not rational over extensions of degree "
            f"<= {max(ABS_IRRED_EXT_DEGREES)}",
            0,
        )
    return Divisor(out)


def divisor_of_function(C, f):
    """Principal divisor (f) = zeros - poles; degree 0 is asserted."""
    num, den = f.num, f.den
    r_num = C.reducer.reduce(num)
    r_den = C.reducer.reduce(den)
    if r_den.is_zero():
        raise InputError("ZERO_DIVISOR", "denominator vanishes on the curve")
    if r_num.is_zero():
        raise InputError("ZERO_DIVISOR", "function is identically zero on the curve")
    c = C.field.div(r_num.terms.get(r_den.lead_key(), 0), r_den.lead_code())
    if c and r_num == r_den.scale(c):
        raise InputError("ZERO_DIVISOR", "function is constant on the curve")
    D = form_intersection_divisor(C, num) - form_intersection_divisor(C, den)
    assert D.degree() == 0, "principal divisor has nonzero degree"
    return D
