"""Linear-system computations over a plane curve.

Span membership and dimension for rational functions with symbolic
certificates, base loci of effective divisors, implicitization of a pair
of functions into the image plane curve of (f : g : 1), indeterminacy-safe
image points through branch expansions, and search for a projective
equivalence between two marked plane curves.

Sampling at rational points is only ever a prefilter or a witness source;
every positive answer is certified by exact polynomial identities.
"""

import itertools

from .action import ProjMap, RatFunc, _constant_value
from .algebra.linalg import det3, nullspace, solve
from .algebra.multipoly import MPoly, resultant
from .algebra.tripoly import (
    TriPoly,
    factor_homogeneous,
    squarefree_part_homogeneous,
)
from .curve import (
    form_intersection_divisor,
    local_valuation,
    normalize_point,
    point_from_codes,
)
from .errors import HardFailure, InputError, ToolLimitError

EQUIV_ENUM_CAP = 100000

_SAMPLE_EXT_DEGREES = (1, 2, 3)


def _compose(phi, forms):
    """phi(A, B, C) for three forms substituted for the variables."""
    K = phi.field
    caches = [{0: TriPoly.constant(K, 1), 1: forms[v]} for v in range(3)]

    def power(v, k):
        cache = caches[v]
        if k not in cache:
            best = max(x for x in cache if x <= k)
            val = cache[best]
            while best < k:
                val = val * cache[1]
                best += 1
                cache[best] = val
        return cache[k]

    acc = TriPoly.zero(K)
    for (e0, e1, e2), c in phi.terms.items():
        term = TriPoly.constant(K, c)
        if e0:
            term = term * power(0, e0)
        if e1:
            term = term * power(1, e1)
        if e2:
            term = term * power(2, e2)
        acc = acc + term
    return acc


class SpanCertificate:
    """Outcome of a span-membership test, recheckable without search.

    Either ``coefficients`` holds codes c_i with target = sum c_i basis_i
    certified by a polynomial identity modulo the curve, or ``witness``
    names a sample point whose evaluation row makes the sampled linear
    system inconsistent.
    """

    __slots__ = (
        "target",
        "basis",
        "coefficients",
        "witness",
        "samples",
        "sample_extension",
    )

    def __init__(self, target, basis, coefficients, witness, samples, ext):
        self.target = target
        self.basis = tuple(basis)
        self.coefficients = coefficients
        self.witness = witness
        self.samples = tuple(samples)
        self.sample_extension = ext

    @property
    def found(self):
        return self.coefficients is not None

    def to_json(self):
        K = self.target.curve.field
        out = {
            "target": self.target.to_json(),
            "basis": [b.to_json() for b in self.basis],
            "samples": [[list(K.decode(c)) for c in s] for s in self.samples],
            "sample_extension": self.sample_extension,
        }
        if self.found:
            out["coefficients"] = [list(K.decode(c)) for c in self.coefficients]
        else:
            out["witness"] = [list(K.decode(c)) for c in self.witness]
        return out


def _cleared_identity(C, h, basis, coeffs):
    """Normal form of target*(basis dens) - sum c_i basis_i*(other dens)."""
    K = C.field
    dens = [b.den for b in basis]
    prod_all = TriPoly.constant(K, 1)
    for d in dens:
        prod_all = prod_all * d
    acc = h.num * prod_all
    for i, b in enumerate(basis):
        if coeffs[i] == 0:
            continue
        part = b.num.scale(coeffs[i]) * h.den
        for j, d in enumerate(dens):
            if j != i:
                part = part * d
        acc = acc - part
    return C.reducer.reduce(acc)


def _symbolic_span_solve(C, h, basis):
    """Exact coefficients from normal-form linear algebra, or None."""
    K = C.field
    dens = [b.den for b in basis]
    prod_all = TriPoly.constant(K, 1)
    for d in dens:
        prod_all = prod_all * d
    target = C.reducer.reduce(h.num * prod_all)
    cols = []
    for i, b in enumerate(basis):
        part = b.num * h.den
        for j, d in enumerate(dens):
            if j != i:
                part = part * d
        cols.append(C.reducer.reduce(part))
    monomials = sorted(set(target.terms) | {m for c in cols for m in c.terms})
    A = [[c.terms.get(m, 0) for c in cols] for m in monomials]
    b = [target.terms.get(m, 0) for m in monomials]
    return solve(K, A, b)


def _sample_curves(C):
    """The curve over extensions of degree 1, 2, 3, lazily valid ones."""
    out = [(1, C)]
    for e in _SAMPLE_EXT_DEGREES[1:]:
        try:
            from .curve import _extension

            big, _ = _extension(C.field, e)
        except ToolLimitError:
            continue
        out.append((e, C.base_change(big)))
    return out


def _span_samples(C, h, basis, minimum):
    """Smooth rational points where every denominator is nonzero."""
    fns = [h] + list(basis)
    pts = []
    for codes in C.rational_points():
        if any(f.den.eval(codes) == 0 for f in fns):
            continue
        try:
            point_from_codes(C, codes)
        except InputError:
            continue
        pts.append(codes)
        if len(pts) >= minimum:
            break
    return pts


def span_coefficients(h, basis):
    """Coefficients of the target in the span of the basis, or a refutation.

    An evaluation system at sampled smooth points acts as a prefilter;
    positive answers are always recertified by the exact polynomial
    identity, falling back to symbolic linear algebra when sampling alone
    underdetermines the coefficients.  Refutations carry a witness point
    whose evaluation row is inconsistent with the rest.
    """
    basis = list(basis)
    if not basis:
        raise InputError("EMPTY_LIST", "span test needs at least one basis function")
    C = h.curve
    K = C.field
    for b in basis:
        if b.curve is not C:
            raise InputError("CURVE_MISMATCH", "basis function on a different curve")
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if basis[i] == basis[j]:
                raise InputError(
                    "BASIS_NOT_DISTINCT", "basis functions coincide modulo the curve"
                )
    fns = [h] + basis
    maxdeg = max(max(f.num.total_degree(), f.den.total_degree()) for f in fns)
    need = max(2 * maxdeg * maxdeg, len(basis) + 2)
    pts = _span_samples(C, h, basis, need)
    if len(pts) < need:
        raise ToolLimitError(
            "SAMPLING_EXHAUSTED",
            f"found {len(pts)} usable sample points, need {need};"
            " retry over a working extension",
            suggested_extension=2,
        )

    def value_row(field, codes, flist):
        return [
            field.div(f.num.eval(codes), f.den.eval(codes)) for f in flist
        ]

    rows = [value_row(K, codes, basis) for codes in pts]
    rhs = [value_row(K, codes, [h])[0] for codes in pts]
    cand = solve(K, rows, rhs)
    if cand is None:
        for k in range(1, len(pts) + 1):
            if solve(K, rows[:k], rhs[:k]) is None:
                return SpanCertificate(h, basis, None, pts[k - 1], pts[:k], 1)
        raise HardFailure("SPAN_INTERNAL", "inconsistent system lost its witness")
    cand = [int(c) for c in cand]
    if _cleared_identity(C, h, basis, cand).is_zero():
        return SpanCertificate(h, basis, tuple(cand), None, pts, 1)

    exact = _symbolic_span_solve(C, h, basis)
    if exact is not None:
        exact = [int(c) for c in exact]
        if not _cleared_identity(C, h, basis, exact).is_zero():
            raise HardFailure(
                "SPAN_INTERNAL", "symbolic span solution failed its own identity"
            )
        return SpanCertificate(h, basis, tuple(exact), None, pts, 1)
    return _refute_by_separation(C, h, basis, pts, rows, rhs, value_row)


def _refute_by_separation(C, h, basis, pts, rows, rhs, value_row):
    """Grow the sampled system with separating points until it refutes.

    Membership is already symbolically refuted; this derives a witnessed
    evaluation refutation.  Each extension level restarts from the base
    samples, since the small extensions do not embed into each other;
    within a level every added point strictly shrinks the solution space
    of the system, so the loop terminates.
    """
    for lvl, Ce in _sample_curves(C):
        Ke = Ce.field
        if lvl == 1:
            he, be = h, basis
            pts_e, rows_e, rhs_e = list(pts), [list(r) for r in rows], list(rhs)
        else:
            embed = C.field.embed_into(Ke)
            he = h.base_change(Ce)
            be = [b.base_change(Ce) for b in basis]
            pts_e = [tuple(embed(c) for c in s) for s in pts]
            rows_e = [[embed(c) for c in r] for r in rows]
            rhs_e = [embed(c) for c in rhs]
        for _ in range(len(basis) + 2):
            cur = solve(Ke, rows_e, rhs_e)
            if cur is None:
                return SpanCertificate(h, basis, None, pts_e[-1], pts_e, lvl)
            resid = _cleared_identity(Ce, he, be, [int(c) for c in cur])
            if resid.is_zero():
                raise HardFailure(
                    "SPAN_INTERNAL",
                    "a sampled solution certified although the symbolic solve failed",
                )
            found = None
            taken = set(pts_e)
            for codes in Ce.rational_points():
                if codes in taken:
                    continue
                if any(f.den.eval(codes) == 0 for f in [he] + be):
                    continue
                if resid.eval(codes) == 0:
                    continue
                try:
                    point_from_codes(Ce, codes)
                except InputError:
                    continue
                found = codes
                break
            if found is None:
                break
            pts_e.append(found)
            rows_e.append(value_row(Ke, found, be))
            rhs_e.append(value_row(Ke, found, [he])[0])
    raise ToolLimitError(
        "SAMPLING_EXHAUSTED",
        "no separating sample point exists over extensions of degree <= 3",
        suggested_extension=max(_SAMPLE_EXT_DEGREES) + 1,
    )


def span_dimension(fns):
    """Dimension of the linear span of the functions inside the function field."""
    fns = list(fns)
    if not fns:
        raise InputError("EMPTY_LIST", "span dimension of an empty list")
    indep = []
    for f in fns:
        if f.is_zero_function():
            continue
        if not indep:
            indep.append(f)
            continue
        if span_coefficients(f, indep).found:
            continue
        indep.append(f)
    return len(indep)


def base_locus(divisors):
    """Pointwise minimum of effective divisors of one common degree."""
    divisors = list(divisors)
    if not divisors:
        raise InputError("EMPTY_LIST", "base locus of an empty list")
    deg = divisors[0].degree()
    for D in divisors:
        if not D.is_effective():
            raise InputError("NOT_EFFECTIVE", "base locus needs effective divisors")
        if D.degree() != deg:
            raise InputError("DEGREE_MISMATCH", "divisors of unequal degree")
    out = divisors[0]
    for D in divisors[1:]:
        out = out.minimum(D)
    return out


class EmbeddingModel:
    """Plane image model of the map (f : g : 1) on a source curve.

    Carries the image polynomial, the cleared coordinate forms, the
    degree bookkeeping of the underlying linear system, and optional
    marked image points.  Construction recertifies that the image
    polynomial vanishes on the image of the source curve.
    """

    __slots__ = (
        "curve",
        "f",
        "g",
        "phi",
        "forms",
        "degree",
        "system_degree",
        "map_degree",
        "base",
        "birational",
        "marks",
        "marks_on_curve",
    )

    def __init__(
        self,
        curve,
        f,
        g,
        phi,
        system_degree,
        map_degree,
        base,
        marks=(),
        marks_on_curve=True,
    ):
        self.curve = curve
        self.f = f
        self.g = g
        self.phi = phi
        a = f.num * g.den
        b = g.num * f.den
        c = f.den * g.den
        self.forms = (a, b, c)
        self.degree = phi.total_degree()
        self.system_degree = system_degree
        self.map_degree = map_degree
        self.base = base
        self.birational = map_degree == 1
        if not curve.reducer.reduce(_compose(phi, self.forms)).is_zero():
            raise HardFailure(
                "IMAGE_NOT_CERTIFIED",
                "image polynomial does not vanish on the image of the curve",
            )
        marks = tuple(tuple(m) for m in marks)
        if marks_on_curve:
            for m in marks:
                if phi.eval(m) != 0:
                    raise InputError(
                        "MARK_OFF_CURVE", "marked point does not lie on the image curve"
                    )
        self.marks = marks
        self.marks_on_curve = marks_on_curve

    def with_marks(self, marks, on_curve=True):
        return EmbeddingModel(
            self.curve,
            self.f,
            self.g,
            self.phi,
            self.system_degree,
            self.map_degree,
            self.base,
            marks,
            marks_on_curve=on_curve,
        )

    def to_json(self):
        K = self.curve.field
        return {
            "phi": self.phi.to_json(),
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "degree": self.degree,
            "system_degree": self.system_degree,
            "map_degree": self.map_degree,
            "birational": self.birational,
            "marks": [[list(K.decode(c)) for c in m] for m in self.marks],
            "marks_on_curve": self.marks_on_curve,
        }

    @classmethod
    def from_json(cls, curve, obj):
        K = curve.field
        f = RatFunc.from_json(curve, obj["f"])
        g = RatFunc.from_json(curve, obj["g"])
        phi = TriPoly.from_json(K, obj["phi"])
        marks = [tuple(K.encode(tuple(v)) for v in m) for m in obj["marks"]]
        return cls(
            curve,
            f,
            g,
            phi,
            obj["system_degree"],
            obj["map_degree"],
            None,
            marks,
            marks_on_curve=obj.get("marks_on_curve", True),
        )


def _dehom5(K, T):
    """Affine z = 1 image of a form, as a polynomial in five variables."""
    terms = {}
    for (e0, e1, _), c in T.terms.items():
        key = (e0, e1, 0, 0, 0)
        if key in terms:
            terms[key] = K.add(terms[key], c)
            if terms[key] == 0:
                del terms[key]
        else:
            terms[key] = c
    return MPoly(K, 5, terms)


def _collapse_to_image(K, R):
    """Five-variable eliminant with source variables gone, as a form."""
    terms = {}
    for key, c in R.terms.items():
        if key[0] or key[1]:
            raise HardFailure(
                "ELIMINATION_INTERNAL", "eliminant still involves source variables"
            )
        terms[(key[2], key[3], key[4])] = c
    return TriPoly._raw(K, terms)


def _strip_variable_powers(T):
    mins = [min(e[v] for e in T.terms) for v in range(3)]
    if not any(mins):
        return T
    terms = {
        (e0 - mins[0], e1 - mins[1], e2 - mins[2]): c
        for (e0, e1, e2), c in T.terms.items()
    }
    return TriPoly._raw(T.field, terms)


def _image_samples(C, forms, need):
    """Distinct normalized image triples, over the smallest sufficient field.

    Returns (extension degree, field, samples); raises when extensions of
    degree up to three cannot supply enough distinct image points.
    """
    for lvl, Ce in _sample_curves(C):
        if lvl == 1:
            fe = forms
        else:
            embed = C.field.embed_into(Ce.field)
            fe = tuple(f.map_field(embed) for f in forms)
        seen = {}
        for codes in Ce.rational_points():
            vals = tuple(f.eval(codes) for f in fe)
            if not any(vals):
                continue
            norm, _ = normalize_point(Ce.field, vals)
            seen[norm] = None
        if len(seen) >= need:
            return lvl, Ce.field, list(seen)
    raise ToolLimitError(
        "SAMPLING_EXHAUSTED",
        f"could not collect {need} distinct image points over extensions"
        " of degree <= 3",
        suggested_extension=max(_SAMPLE_EXT_DEGREES) + 1,
    )


def implicitize(f, g):
    """Image plane curve of (f : g : 1) with degree and map bookkeeping.

    Eliminates the source variables by successive resultants, strips
    variable powers, and among the irreducible factors keeps the one
    vanishing on a certifying number of distinct sampled image points; the
    result is recertified by substituting the coordinate forms.  The map
    degree is the system degree divided by the image degree; anything
    other than one is rejected.
    """
    C = f.curve
    K = C.field
    if g.curve is not C:
        raise InputError("CURVE_MISMATCH", "functions on different curves")
    for fn in (f, g):
        if fn.is_zero_function() or _constant_value(C, fn) is not None:
            raise InputError("CONSTANT_FUNCTION", "implicitization needs nonconstant functions")
    if f == g:
        raise InputError("ELIMINATION_DEGENERATE", "the two coordinate functions coincide")

    f0 = _dehom5(K, C.F)
    U = MPoly.variable(K, 5, 2)
    V = MPoly.variable(K, 5, 3)
    W = MPoly.variable(K, 5, 4)
    A1 = U * _dehom5(K, f.den) - W * _dehom5(K, f.num)
    A2 = V * _dehom5(K, g.den) - W * _dehom5(K, g.num)
    R1 = resultant(f0, A1, 1) if A1.deg_in(1) > 0 else A1
    R2 = resultant(f0, A2, 1) if A2.deg_in(1) > 0 else A2
    if R1.deg_in(0) <= 0 or R2.deg_in(0) <= 0:
        raise InputError(
            "ELIMINATION_DEGENERATE", "resultant chain lost a source variable"
        )
    R = resultant(R1, R2, 0)
    if R.is_zero() or R.is_constant():
        raise InputError(
            "ELIMINATION_DEGENERATE", "eliminant is trivial; the image is not a curve"
        )
    eliminant = _strip_variable_powers(_collapse_to_image(K, R))
    if eliminant.is_constant():
        raise InputError(
            "ELIMINATION_DEGENERATE", "eliminant is trivial; the image is not a curve"
        )
    if not eliminant.is_homogeneous():
        raise InputError(
            "ELIMINATION_DEGENERATE", "eliminant failed to be homogeneous"
        )
    _, factors = factor_homogeneous(squarefree_part_homogeneous(eliminant))
    candidates = [fac for fac, _ in factors]
    dmax = max(fac.total_degree() for fac in candidates)

    a = f.num * g.den
    b = g.num * f.den
    c = f.den * g.den
    lvl, Ks, samples = _image_samples(C, (a, b, c), 3 * dmax * dmax)
    if lvl == 1:
        mapped = candidates
    else:
        embed = K.embed_into(Ks)
        mapped = [fac.map_field(embed) for fac in candidates]
    survivors = [
        i
        for i, fac in enumerate(mapped)
        if all(fac.eval(s) == 0 for s in samples)
    ]
    if len(survivors) != 1:
        raise HardFailure(
            "IMAGE_FACTOR_AMBIGUOUS",
            f"{len(survivors)} eliminant factors vanish on the sampled image",
        )
    phi = candidates[survivors[0]].canonical()

    Da = form_intersection_divisor(C, a)
    Db = form_intersection_divisor(C, b)
    Dc = form_intersection_divisor(C, c)
    base = Da.minimum(Db).minimum(Dc)
    system_degree = C.degree * a.total_degree() - base.degree()
    if system_degree % phi.total_degree():
        raise HardFailure(
            "DEGREE_INCONSISTENT",
            "system degree is not a multiple of the image degree",
            system=system_degree,
            image=phi.total_degree(),
        )
    map_degree = system_degree // phi.total_degree()
    if map_degree != 1:
        raise HardFailure(
            "NOT_BIRATIONAL",
            f"the map has degree {map_degree}; the criteria upstream cannot all hold",
            map_degree=map_degree,
        )
    return EmbeddingModel(C, f, g, phi, system_degree, map_degree, base)


def image_point(model, P):
    """Image of a source point under (f : g : 1), as normalized codes.

    Indeterminate points of the affine representation are resolved by
    scaling the three cleared forms with the common power of a local
    parameter; the output always satisfies the image polynomial.
    """
    C = model.curve
    if P.curve is not C:
        raise InputError("CURVE_MISMATCH", "point on a different curve")
    K = C.field
    vals = tuple(form.eval(P.codes) for form in model.forms)
    if not any(vals):
        v = min(local_valuation(P, form) for form in model.forms)
        n = v + 2
        br = P.branch(n)
        series = [br.eval_form(form, n) for form in model.forms]
        vals = tuple(s[v] if len(s) > v else 0 for s in series)
    codes, _ = normalize_point(K, vals)
    if model.phi.eval(codes) != 0:
        raise HardFailure(
            "IMAGE_OFF_MODEL", "computed image point misses the image curve"
        )
    return codes


def projective_equivalence(phi_a, marks_a, phi_b, marks_b, cap=EQUIV_ENUM_CAP,
                           marks_on_curve=True):
    """Map M with phi_b(M x) proportional to phi_a and marks_a sent to marks_b.

    Mark assignments are tried injectively in lexicographic order; each
    yields a linear system on the matrix entries whose solution space is
    searched (enumerating projective combinations when it is not a line)
    with an evaluation prefilter and a final symbolic proportionality
    check.  None means the finitely many mark-compatible candidates are
    exhausted.  marks_on_curve=False skips the membership validation, for
    marks that are distinguished points of the ambient plane instead.
    """
    K = phi_a.field
    if phi_b.field is not K:
        raise InputError("FIELD_MISMATCH", "image curves over different fields")
    marks_a = [tuple(m) for m in marks_a]
    marks_b = [tuple(m) for m in marks_b]
    if len(marks_a) != len(marks_b):
        raise InputError("MARK_COUNT_MISMATCH", "mark lists of different lengths")
    if phi_a.total_degree() != phi_b.total_degree():
        return None
    if marks_on_curve:
        for m in marks_a:
            if phi_a.eval(m) != 0:
                raise InputError("MARK_OFF_CURVE", "mark does not lie on its curve")
        for m in marks_b:
            if phi_b.eval(m) != 0:
                raise InputError("MARK_OFF_CURVE", "mark does not lie on its curve")

    lead = phi_a.lead_key()
    lead_code = phi_a.lead_code()

    def certify(rows_flat):
        G = phi_b.substitute_linear(rows_flat)
        c = K.div(G.terms.get(lead, 0), lead_code)
        if c == 0:
            return None
        return c if G == phi_a.scale(c) else None

    prefilter_pts = []
    q = K.q
    for x in range(min(q, 5)):
        for y in range(min(q, 5)):
            prefilter_pts.append((1, x, y))
    prefilter_pts = prefilter_pts[:20]

    def prefilter(rows_flat):
        c = None
        for pt in prefilter_pts:
            va = phi_a.eval(pt)
            vb = phi_b.eval(
                tuple(
                    K.add(
                        K.add(
                            K.mul(rows_flat[3 * i], pt[0]),
                            K.mul(rows_flat[3 * i + 1], pt[1]),
                        ),
                        K.mul(rows_flat[3 * i + 2], pt[2]),
                    )
                    for i in range(3)
                )
            )
            if va == 0:
                if vb != 0:
                    return False
                continue
            if c is None:
                if vb == 0:
                    return False
                c = K.div(vb, va)
            elif vb != K.mul(c, va):
                return False
        return True

    m = len(marks_a)
    if m == 0:
        raise ToolLimitError(
            "INSUFFICIENT_MARKS",
            "no marks given; the candidate space is all of the matrix space",
        )
    for perm in itertools.permutations(range(m)):
        rows = []
        for k in range(m):
            p = marks_a[k]
            t = marks_b[perm[k]]
            for r, s in ((0, 1), (0, 2), (1, 2)):
                row = [0] * 9
                for j in range(3):
                    row[3 * r + j] = K.mul(p[j], t[s])
                    row[3 * s + j] = K.neg(K.mul(p[j], t[r]))
                rows.append(row)
        basis = nullspace(K, rows)
        if not basis:
            continue
        k = len(basis)
        if k == 1:
            combos = [basis[0]]
        else:
            count = (q**k - 1) // (q - 1)
            if count > cap:
                raise ToolLimitError(
                    "INSUFFICIENT_MARKS",
                    f"{m} marks leave a candidate space of {count} matrices,"
                    f" above the cap {cap}",
                    candidates=count,
                    cap=cap,
                )
            combos = _projective_combinations(K, basis)
        for vec in combos:
            flat = tuple(int(x) for x in vec)
            nested = [flat[0:3], flat[3:6], flat[6:9]]
            if det3(K, nested) == 0:
                continue
            if not prefilter(flat):
                continue
            c = certify(flat)
            if c is None:
                continue
            M = ProjMap(K, flat)
            ok = True
            for idx in range(m):
                img, _ = normalize_point(K, M.apply(marks_a[idx]))
                want, _ = normalize_point(K, marks_b[perm[idx]])
                if img != want:
                    ok = False
                    break
            if not ok:
                raise HardFailure(
                    "EQUIV_INTERNAL", "candidate satisfied its constraints inconsistently"
                )
            return M
    return None


def _projective_combinations(K, basis):
    """All projective combinations of the basis, leading coefficient one."""
    q = K.q
    k = len(basis)
    out = []
    for lead in range(k):
        tails = itertools.product(range(q), repeat=k - lead - 1)
        for tail in tails:
            coeffs = [0] * lead + [1] + list(tail)
            vec = [0] * 9
            for ci, bvec in zip(coeffs, basis):
                if ci:
                    for idx in range(9):
                        vec[idx] = K.add(vec[idx], K.mul(ci, bvec[idx]))
            out.append(vec)
    return out
