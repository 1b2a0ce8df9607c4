"""Criteria engines for collinear Galois points of plane curves.

Decides the two-point and three-point criteria (inner and outer variants),
constructs the birational plane models from the projection functions,
decides linear extendability of covering automorphisms, and supplies
independent brute-force oracles.  Every positive verdict carries data
that re-verifies by identity checking alone; every negative verdict
names the first failing equality or a witness.
"""

import random

from .action import (
    AutGroup,
    ProjMap,
    RatFunc,
    _constant_value,
    _fiber_divisor,
    function_degree,
    group_closure,
    invariant_generator,
    is_invariant,
    map_preserves_curve,
    mobius_normalize,
    orbit_and_stabilizer,
    orbit_sum,
    pullback,
)
from .algebra.linalg import det3, nullspace
from .algebra.tripoly import TriPoly
from .curve import Divisor, divisor_of_function, local_valuation, normalize_point, point_from_codes
from .errors import HardFailure, InputError, ToolLimitError
from .linsys import (
    base_locus,
    image_point,
    implicitize,
    projective_equivalence,
    span_coefficients,
    span_dimension,
)
from . import _backend

SCHEMA_VERSION = 1

# candidate count bound for the hintless automorphism scan
PGL_SCAN_CAP = 10**8

# resampling budget of the fiber oracle, per requested trial
ORACLE_RETRY_FACTOR = 40


def _ordered_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _one_function(C):
    unit = TriPoly.constant(C.field, 1)
    return RatFunc(C, unit, unit)


def _require_same_curve(C, groups, points):
    for G in groups:
        if G.curve is not C:
            raise InputError("CURVE_MISMATCH", "group attached to a different curve")
    for P in points:
        if P.curve is not C:
            raise InputError("CURVE_MISMATCH", "point on a different curve")


def _field_record(K):
    return {"p": K.p, "modulus": list(K.modulus), "q": K.q}


class QuotientCertificate:
    """Artin-criterion record for one group: an invariant function whose
    degree equals the group order certifies that the quotient is a line."""

    __slots__ = ("group", "invariant", "degree", "positive", "reason", "witness", "derived")

    def __init__(self, group, invariant, degree, positive, reason, witness, derived):
        self.group = group
        self.invariant = invariant
        self.degree = degree
        self.positive = positive
        self.reason = reason
        self.witness = witness
        self.derived = derived

    def to_json(self):
        return {
            "order": self.group.order,
            "generators": [g.to_json() for g in self.group.generators],
            "invariant": self.invariant.to_json(),
            "degree": self.degree,
            "positive": self.positive,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.to_json(),
            "derived": self.derived,
        }


def verify_quotient_rational(G, t, seed=0):
    """Certificate that the quotient by G is rational, via the supplied or
    derived function t: positive iff t is G-invariant of degree |G|."""
    if G.order < 2:
        raise InputError("GROUP_TOO_SMALL", "quotient certification needs order at least 2")
    if t.curve is not G.curve:
        raise InputError("CURVE_MISMATCH", "function on a different curve")
    if t.is_zero_function() or _constant_value(G.curve, t) is not None:
        raise InputError("CONSTANT_FUNCTION", "invariant candidate is constant")
    witness = None
    for M in G.elements:
        if pullback(M, t) != t:
            witness = M
            break
    if witness is not None:
        return QuotientCertificate(G, t, None, False, "not invariant", witness, False)
    degree = function_degree(t, seed=seed)
    if degree != G.order:
        return QuotientCertificate(
            G, t, degree, False, f"degree {degree} differs from order {G.order}", None, False
        )
    return QuotientCertificate(G, t, degree, True, None, None, False)


class PairwiseCertificate:
    """Record of all pairwise group intersections; positive when trivial."""

    __slots__ = ("pairs", "positive", "witness")

    def __init__(self, pairs, positive, witness):
        self.pairs = pairs
        self.positive = positive
        self.witness = witness

    def to_json(self):
        out = {
            "pairs": [{"pair": list(p), "size": s} for p, s in self.pairs],
            "positive": self.positive,
        }
        if self.witness is not None:
            pair, M = self.witness
            out["witness"] = {"pair": list(pair), "element": M.to_json()}
        else:
            out["witness"] = None
        return out


def verify_pairwise_trivial(groups):
    """Checks G_i and G_j share only the identity, for every pair."""
    if len(groups) < 2:
        raise InputError("TOO_FEW_GROUPS", "pairwise intersection needs at least two groups")
    C = groups[0].curve
    _require_same_curve(C, groups, ())
    K = C.field
    ident = ProjMap.identity(K).rows
    pairs = []
    witness = None
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            inter = groups[i].rows_set & groups[j].rows_set
            pairs.append(((i + 1, j + 1), len(inter)))
            if len(inter) > 1 and witness is None:
                shared = min(r for r in inter if r != ident)
                witness = ((i + 1, j + 1), ProjMap(K, shared))
    return PairwiseCertificate(pairs, witness is None, witness)


class CommonDivisorResult:
    """Outcome of the candidate-divisor comparison of the third condition."""

    __slots__ = ("positive", "divisor", "candidates", "witness")

    def __init__(self, positive, divisor, candidates, witness):
        self.positive = positive
        self.divisor = divisor
        self.candidates = candidates
        self.witness = witness

    def to_json(self):
        return {
            "positive": self.positive,
            "divisor": None if self.divisor is None else self.divisor.to_json(),
            "candidates": [
                {"pair": list(pair), "divisor": D.to_json()} for pair, D in self.candidates
            ],
            "witness": None if self.witness is None else {
                "first": list(self.witness[0]),
                "differs": list(self.witness[1]),
            },
        }


def inner_common_divisor(groups, points):
    """All candidates P_i + sum of the G_i-translates of P_j must agree.

    Candidates are enumerated over ordered index pairs (i, j) in
    lexicographic order; a refutation names the first candidate that
    differs from the (1, 2) baseline.
    """
    n = len(groups)
    if len(points) != n or n < 2:
        raise InputError("BAD_ARITY", "need matching groups and points, at least two each")
    C = groups[0].curve
    _require_same_curve(C, groups, points)
    for a in range(n):
        for b in range(a + 1, n):
            if points[a].codes == points[b].codes:
                raise InputError(
                    "POINTS_NOT_DISTINCT", f"points {a + 1} and {b + 1} coincide"
                )
    cands = []
    for i, j in _ordered_pairs(n):
        D = Divisor({points[i]: 1}) + orbit_sum(groups[i], points[j])
        cands.append(((i + 1, j + 1), D))
    base_pair, base = cands[0]
    for pair, D in cands[1:]:
        if D != base:
            return CommonDivisorResult(False, None, cands, (base_pair, pair))
    return CommonDivisorResult(True, base, cands, None)


def outer_common_divisor(groups, q_point):
    """The orbit sums of the common point under every group must agree."""
    if len(groups) < 2:
        raise InputError("TOO_FEW_GROUPS", "need at least two groups")
    C = groups[0].curve
    _require_same_curve(C, groups, (q_point,))
    cands = []
    for i, G in enumerate(groups):
        cands.append(((i + 1,), orbit_sum(G, q_point)))
    base_pair, base = cands[0]
    for pair, D in cands[1:]:
        if D != base:
            return CommonDivisorResult(False, None, cands, (base_pair, pair))
    return CommonDivisorResult(True, base, cands, None)


def _outer_projection(t, q_point):
    """Member of the pole-fiber linear system through the common point.

    Returns (t - a)/(t - b) where b = t(Q) and a is the smallest field
    value with a rational fiber distinct from b.  The pole divisor then
    equals the fiber through Q; the identity is recomputed and enforced.
    """
    C = t.curve
    K = C.field
    b = t.value_at(q_point)
    fiber_pole = _fiber_divisor(t, b)
    if fiber_pole.mult.get(q_point, 0) <= 0:
        raise HardFailure(
            "PROJECTION_POSTCONDITION", "common point missing from its own fiber"
        )
    for code in range(K.q):
        val = ("finite", code)
        if val == b:
            continue
        try:
            fiber_zero = _fiber_divisor(t, val)
        except ToolLimitError:
            continue
        if fiber_zero.degree() == 0:
            continue
        shifted = t.num - t.den.scale(code)
        if b[0] == "infinity":
            result = RatFunc(C, shifted, t.den)
        else:
            result = RatFunc(C, shifted, t.num - t.den.scale(b[1]))
        if divisor_of_function(C, result) != fiber_zero - fiber_pole:
            raise HardFailure(
                "PROJECTION_POSTCONDITION",
                "normalized divisor does not match the fiber difference",
            )
        return result
    raise ToolLimitError(
        "ANCHOR_NOT_FOUND",
        "no base-field value has a rational fiber; extend the working field",
    )


class ConditionReport:
    """Assembled verdicts for one run of a criteria engine.

    conditions maps "a" to a list of quotient certificates and "b", "c",
    "d" to per-condition payload dicts; overall is their conjunction.
    Engine-side objects (functions, invariants, divisor) are kept for
    construction reuse and are serialized inside the payloads.
    """

    __slots__ = (
        "kind",
        "conditions",
        "overall",
        "seed",
        "field",
        "invariants",
        "derived",
        "functions",
        "divisor",
        "span",
        "fact3",
    )

    def __init__(self, kind, conditions, overall, seed, field, invariants,
                 derived, functions, divisor, span, fact3):
        self.kind = kind
        self.conditions = conditions
        self.overall = overall
        self.seed = seed
        self.field = field
        self.invariants = invariants
        self.derived = derived
        self.functions = functions
        self.divisor = divisor
        self.span = span
        self.fact3 = fact3

    def first_failure(self):
        for name in ("a", "b", "c", "d"):
            entry = self.conditions[name]
            if name == "a":
                for k, cert in enumerate(entry):
                    if not cert.positive:
                        return f"(a) group {k + 1}"
                continue
            if entry.get("verdict") == "fail":
                return f"({name})"
        return None

    def to_json(self):
        cond = {}
        cond["a"] = [
            dict(cert.to_json(), group_index=k + 1, derived=self.derived[k])
            for k, cert in enumerate(self.conditions["a"])
        ]
        for name in ("b", "c", "d"):
            cond[name] = self.conditions[name]
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "seed": self.seed,
            "field": self.field,
            "conditions": cond,
            "overall": self.overall,
            "fact3": self.fact3,
        }


def _resolve_invariants(groups, invariants, seed):
    n = len(groups)
    if invariants is None:
        invariants = [None] * n
    if len(invariants) != n:
        raise InputError("BAD_ARITY", "one invariant slot per group")
    ts = []
    derived = []
    for G, t in zip(groups, invariants):
        if t is None:
            ts.append(invariant_generator(G, seed=seed))
            derived.append(True)
        else:
            if t.curve is not G.curve:
                raise InputError("CURVE_MISMATCH", "invariant on a different curve")
            ts.append(t)
            derived.append(False)
    return ts, derived


def _skipped():
    return {"verdict": "skipped"}


def _fact3_payload(groups, points, D):
    """Transversality and orbit-avoidance facts implied by a positive
    verdict at degree >= 4: each marked point is simple on the common
    divisor (the image chord is not a tangent) and no group moves its
    own point onto another marked point."""
    mults = []
    for P in points:
        m = D.mult.get(P, 0)
        if m != 1:
            raise HardFailure(
                "FACT3_VIOLATION",
                f"marked point has multiplicity {m} in the common divisor",
            )
        mults.append(m)
    avoidance = []
    for i, G in enumerate(groups):
        orbit, _ = orbit_and_stabilizer(G, points[i])
        orbit_codes = {P.codes for P in orbit}
        for j, Q in enumerate(points):
            if i == j:
                continue
            ok = Q.codes not in orbit_codes
            avoidance.append({"pair": [i + 1, j + 1], "disjoint": ok})
            if not ok:
                raise HardFailure(
                    "FACT3_VIOLATION",
                    f"group {i + 1} moves its point onto point {j + 1}",
                )
    return {
        "degree": groups[0].order + 1,
        "chord_multiplicities": mults,
        "orbit_avoidance": avoidance,
    }


def _span_payload(C, fs, D):
    """Span-dimension test of the projection triple, with coefficients."""
    one = _one_function(C)
    f, g, h = fs
    dim = span_dimension([one, f, g, h])
    cert = span_coefficients(h, [one, f, g])
    locus = base_locus([D] + [divisor_of_function(C, u) + D for u in fs])
    payload = {
        "verdict": "pass" if dim <= 3 else "fail",
        "dimension": dim,
        "projective_dimension": dim - 1,
        "functions": {"f": f.to_json(), "g": g.to_json(), "h": h.to_json()},
        "span": cert.to_json(),
        "base_locus_degree": locus.degree(),
    }
    return payload, dim <= 3, cert


def _check_engine(kind, C, groups, points, q_point, invariants, seed):
    inner = kind.endswith("inner")
    n = len(groups)
    if inner:
        _require_same_curve(C, groups, points)
        for k, G in enumerate(groups):
            if G.order < 3:
                raise InputError(
                    "HYPOTHESIS_VIOLATION",
                    f"inner criteria require group orders at least three; group {k + 1} has order {G.order}",
                )
    else:
        _require_same_curve(C, groups, (q_point,))
        for k, G in enumerate(groups):
            if G.order == 1:
                raise InputError(
                    "DEGENERATE_ORDER",
                    f"outer criteria with a trivial group {k + 1} are degenerate; supply order at least 2",
                )
    ts, derived = _resolve_invariants(groups, invariants, seed)

    a_certs = [verify_quotient_rational(G, t, seed=seed) for G, t in zip(groups, ts)]
    a_ok = all(c.positive for c in a_certs)

    conditions = {"a": a_certs, "b": _skipped(), "c": _skipped()}
    conditions["d"] = _skipped() if n == 3 else {
        "verdict": "not_applicable",
        "note": "a pair of projections always spans projective dimension at most 2",
    }
    divisor = None
    functions = None
    span_cert = None
    fact3 = None
    overall = False

    b_ok = c_ok = d_ok = False
    if a_ok:
        b_cert = verify_pairwise_trivial(groups)
        b_ok = b_cert.positive
        entry = b_cert.to_json()
        entry["verdict"] = "pass" if b_ok else "fail"
        conditions["b"] = entry

    if a_ok and b_ok:
        if inner:
            c_res = inner_common_divisor(groups, points)
        else:
            c_res = outer_common_divisor(groups, q_point)
        c_ok = c_res.positive
        entry = c_res.to_json()
        entry["verdict"] = "pass" if c_ok else "fail"
        conditions["c"] = entry
        divisor = c_res.divisor

    if a_ok and b_ok and c_ok:
        try:
            if inner:
                fs = tuple(
                    mobius_normalize(ts[i], points[i], points[(i + 1) % n])
                    for i in range(n)
                )
            else:
                fs = tuple(_outer_projection(t, q_point) for t in ts)
        except InputError as exc:
            if exc.code != "SAME_FIBER":
                raise
            fs = None
            if n == 3:
                conditions["d"] = {
                    "verdict": "fail",
                    "reason": "DEGENERATE_PROJECTION",
                    "note": "two anchor points share one fiber; the projection triple degenerates",
                }
        if fs is not None:
            functions = fs
            if n == 3:
                payload, d_ok, span_cert = _span_payload(C, fs, divisor)
                conditions["d"] = payload
            else:
                d_ok = True
        overall = c_ok and (d_ok if n == 3 else True) and fs is not None

    if overall and inner:
        fact3 = _fact3_payload(groups, points, divisor)

    return ConditionReport(
        kind,
        conditions,
        overall,
        seed,
        _field_record(C.field),
        tuple(ts),
        tuple(derived),
        functions,
        divisor,
        span_cert,
        fact3,
    )


def check_three_inner(C, groups, points, invariants=None, seed=0):
    """Decides the three-point inner criteria for (G1, G2, G3, P1, P2, P3)."""
    if len(groups) != 3 or len(points) != 3:
        raise InputError("BAD_ARITY", "three groups and three points required")
    return _check_engine("three-inner", C, tuple(groups), tuple(points), None, invariants, seed)


def check_three_outer(C, groups, q_point, invariants=None, seed=0):
    """Decides the three-point outer criteria for (G1, G2, G3, Q)."""
    if len(groups) != 3:
        raise InputError("BAD_ARITY", "three groups required")
    return _check_engine("three-outer", C, tuple(groups), None, q_point, invariants, seed)


def check_two_inner(C, groups, points, invariants=None, seed=0):
    """Two-point inner criteria; the span condition is vacuous and noted."""
    if len(groups) != 2 or len(points) != 2:
        raise InputError("BAD_ARITY", "two groups and two points required")
    return _check_engine("two-inner", C, tuple(groups), tuple(points), None, invariants, seed)


def check_two_outer(C, groups, q_point, invariants=None, seed=0):
    """Two-point outer criteria; the span condition is vacuous and noted."""
    if len(groups) != 2:
        raise InputError("BAD_ARITY", "two groups required")
    return _check_engine("two-outer", C, tuple(groups), None, q_point, invariants, seed)


class GaloisCertificate:
    """Per-center record: the center, the group, the invariant function,
    and the Artin verdict; the flag tells inner from outer membership."""

    __slots__ = ("center", "on_curve", "group", "invariant", "degree", "positive", "oracle")

    def __init__(self, center, on_curve, group, invariant, degree, positive, oracle=None):
        self.center = center
        self.on_curve = on_curve
        self.group = group
        self.invariant = invariant
        self.degree = degree
        self.positive = positive
        self.oracle = oracle

    def to_json(self, K):
        return {
            "center": [list(K.decode(c)) for c in self.center],
            "on_curve": self.on_curve,
            "order": self.group.order,
            "generators": [g.to_json() for g in self.group.generators],
            "invariant": self.invariant.to_json(),
            "degree": self.degree,
            "positive": self.positive,
            "oracle": self.oracle,
        }


class ConstructionResult:
    """Check report plus, when positive, the image model and certificates."""

    __slots__ = ("kind", "report", "model", "certificates", "q_image", "seed")

    def __init__(self, kind, report, model, certificates, q_image, seed):
        self.kind = kind
        self.report = report
        self.model = model
        self.certificates = certificates
        self.q_image = q_image
        self.seed = seed

    def to_json(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "seed": self.seed,
            "report": self.report.to_json(),
            "model": None,
            "certificates": [],
            "q_image": None,
        }
        if self.model is not None:
            K = self.model.curve.field
            out["model"] = self.model.to_json()
            out["certificates"] = [c.to_json(K) for c in self.certificates]
            if self.q_image is not None:
                out["q_image"] = [list(K.decode(c)) for c in self.q_image]
        return out


def _third_center(K, cert):
    """Center of the pencil of the third projection: the common point of
    the line at infinity and the line from the span coefficients."""
    if not cert.found:
        raise HardFailure(
            "DEGENERATE_SYSTEM", "third projection is not in the span of the first two"
        )
    c0, c1, c2 = cert.coefficients
    codes, _ = normalize_point(K, (K.neg(c2), c1, 0))
    return codes


def construct_three_inner(C, groups, points, invariants=None, seed=0):
    """Builds the degree |G1|+1 plane model with three collinear inner
    Galois points; refuses when the criteria do not hold."""
    report = check_three_inner(C, groups, points, invariants, seed)
    if not report.overall:
        return ConstructionResult("construct/three-inner", report, None, (), None, seed)
    f, g, h = report.functions
    model = implicitize(f, g)
    want = groups[0].order + 1
    if model.degree != want:
        raise HardFailure(
            "DEGREE_MISMATCH",
            f"image degree {model.degree} differs from expected {want}",
        )
    if not model.birational:
        raise HardFailure("NOT_BIRATIONAL", "image model is not birational")
    K = C.field
    m1 = image_point(model, points[0])
    m2 = image_point(model, points[1])
    if m1 != (0, 1, 0) or m2 != (1, 0, 0):
        raise HardFailure(
            "MARK_MISMATCH", "valuation-forced marks are off their coordinate points"
        )
    m3 = _third_center(K, report.span)
    if image_point(model, points[2]) != m3:
        raise HardFailure(
            "THIRD_CENTER_MISMATCH",
            "span-coefficient center disagrees with the evaluated image",
        )
    # source-side cross-check: supp(D) meet supp((h)+D) pins the third point
    hull = divisor_of_function(C, h) + report.divisor
    shared = [P for P in report.divisor.support() if hull.mult.get(P, 0) > 0]
    if shared != [points[2]]:
        raise HardFailure(
            "THIRD_CENTER_MISMATCH",
            "divisor-support route does not single out the third point",
        )
    marks = (m1, m2, m3)
    for m in marks:
        if m[2] != 0:
            raise HardFailure("MARK_MISMATCH", "marks must lie on the line at infinity")
    model = model.with_marks(marks)
    certs = tuple(
        GaloisCertificate(marks[i], True, groups[i], report.invariants[i],
                          groups[i].order, True)
        for i in range(3)
    )
    return ConstructionResult("construct/three-inner", report, model, certs, None, seed)


def construct_three_outer(C, groups, q_point, invariants=None, seed=0):
    """Builds the degree |G1| plane model whose three collinear outer
    centers realize the quotients; refuses when the criteria fail."""
    report = check_three_outer(C, groups, q_point, invariants, seed)
    if not report.overall:
        return ConstructionResult("construct/three-outer", report, None, (), None, seed)
    f, g, h = report.functions
    model = implicitize(f, g)
    want = groups[0].order
    if model.degree != want:
        raise HardFailure(
            "DEGREE_MISMATCH",
            f"image degree {model.degree} differs from expected {want}",
        )
    if not model.birational:
        raise HardFailure("NOT_BIRATIONAL", "image model is not birational")
    K = C.field
    centers = ((0, 1, 0), (1, 0, 0), _third_center(K, report.span))
    for c in centers:
        if c[2] != 0:
            raise HardFailure("MARK_MISMATCH", "centers must lie on the line at infinity")
        if model.phi.eval(c) == 0:
            raise HardFailure(
                "CENTER_ON_CURVE", "outer center landed on the image curve"
            )
    q_image = image_point(model, q_point)
    if q_image[2] != 0:
        raise HardFailure(
            "LINE_MISMATCH", "image of the common point left the line of centers"
        )
    model = model.with_marks(centers, on_curve=False)
    certs = tuple(
        GaloisCertificate(centers[i], False, groups[i], report.invariants[i],
                          groups[i].order, True)
        for i in range(3)
    )
    return ConstructionResult("construct/three-outer", report, model, certs, q_image, seed)


def is_total_inflection(G, P):
    """True when the whole group fixes P.  For nontrivial groups the
    tangent contact order is recomputed and must equal |G|+1."""
    C = G.curve
    if P.curve is not C:
        raise InputError("CURVE_MISMATCH", "point on a different curve")
    K = C.field
    for M in G.elements:
        img, _ = normalize_point(K, M.apply(P.codes))
        if img != P.codes:
            return False
    if G.order >= 2:
        grad = [C.F.partial(v).eval(P.codes) for v in range(3)]
        tangent = TriPoly(K, {
            (1, 0, 0): grad[0],
            (0, 1, 0): grad[1],
            (0, 0, 1): grad[2],
        })
        contact = local_valuation(P, tangent)
        if contact != G.order + 1:
            raise HardFailure(
                "INFLECTION_CROSS_CHECK",
                f"tangent contact {contact} differs from order plus one {G.order + 1}",
            )
    return True


class ExtensionReport:
    """Verdicts for the three extendability conditions, the fast-path
    record, and the certified matrix once built."""

    __slots__ = ("conditions", "fast_path", "matrix", "transcript", "seed")

    def __init__(self, conditions, fast_path, matrix, transcript, seed):
        self.conditions = conditions
        self.fast_path = fast_path
        self.matrix = matrix
        self.transcript = transcript
        self.seed = seed

    @property
    def positive(self):
        return all(self.conditions[k]["verdict"] == "pass" for k in ("a", "b", "c"))

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "extend",
            "seed": self.seed,
            "conditions": self.conditions,
            "fast_path": self.fast_path,
            "matrix": None if self.matrix is None else self.matrix.to_json(),
            "transcript": list(self.transcript),
        }


def check_extendability(model, sigma, groups, points, invariants=None, seed=0):
    """Decides whether the covering automorphism sigma extends linearly.

    sigma must belong to the first group and carry the second marked
    point to the third; the image degree must be at least four.  The
    total-inflection fast path runs alongside the divisor computation
    and the two must agree.
    """
    C = model.curve
    if model.degree < 4:
        raise InputError(
            "DEGREE_HYPOTHESIS", f"extendability requires image degree >= 4, got {model.degree}"
        )
    if len(groups) != 3 or len(points) != 3:
        raise InputError("BAD_ARITY", "three groups and three points required")
    _require_same_curve(C, groups, points)
    G1, G2, G3 = groups
    P1, P2, P3 = points
    if not G1.contains(sigma):
        raise InputError("SIGMA_NOT_IN_GROUP", "sigma is not an element of the first group")
    if sigma.apply_point(P2) != P3:
        raise InputError(
            "SIGMA_NOT_ADMISSIBLE", "sigma must carry the second point to the third"
        )
    ts, _ = _resolve_invariants(groups, invariants, seed)
    transcript = []

    a_ok = sigma.apply_point(P1) == P1
    transcript.append(f"(a) sigma fixes the first point: {'yes' if a_ok else 'no'}")

    cert_b = verify_quotient_rational(G3, ts[2], seed=seed)
    b_ok = cert_b.positive
    transcript.append(
        f"(b) third center is inner Galois (order {G3.order}): {'yes' if b_ok else 'no'}"
    )

    lhs = pullback(sigma, Divisor({P3: 1}) + orbit_sum(G3, P3))
    rhs = Divisor({P2: 1}) + orbit_sum(G2, P2)
    c_ok = lhs == rhs
    transcript.append(
        "(c) pulled-back third divisor matches the second: " + ("yes" if c_ok else "no")
    )

    flags = [is_total_inflection(groups[i], points[i]) for i in range(3)]
    applicable = all(flags)
    agrees = None
    if applicable:
        agrees = a_ok and b_ok and c_ok
        transcript.append("fast path: all three points are total inflections")
        if not agrees:
            raise HardFailure(
                "COROLLARY5_MISMATCH",
                "total-inflection fast path disagrees with the divisor path",
            )
    fast = {"applicable": applicable, "per_point": flags, "agrees": agrees}

    conditions = {
        "a": {"verdict": "pass" if a_ok else "fail"},
        "b": dict(cert_b.to_json(), verdict="pass" if b_ok else "fail"),
        "c": {
            "verdict": "pass" if c_ok else "fail",
            "lhs": lhs.to_json(),
            "rhs": rhs.to_json(),
        },
    }
    return ExtensionReport(conditions, fast, None, transcript, seed)


def _general_position(K, chosen, cand):
    if any(cand == u for u, _ in chosen):
        return False
    if len(chosen) < 2:
        return True
    for a in range(len(chosen)):
        for b in range(a + 1, len(chosen)):
            rows = [list(chosen[a][0]), list(chosen[b][0]), list(cand)]
            if det3(K, rows) == 0:
                return False
    return True


def build_linear_extension(model, sigma):
    """Solves for the plane transformation compatible with sigma through
    the embedding and certifies the identity symbolically."""
    C = model.curve
    K = C.field
    pairs = []
    for codes in sorted(C.rational_points()):
        try:
            P = point_from_codes(C, codes)
        except InputError:
            continue
        u = image_point(model, P)
        v = image_point(model, sigma.apply_point(P))
        pairs.append((u, v))
    chosen = []
    for u, v in pairs:
        if _general_position(K, chosen, u):
            chosen.append((u, v))
        if len(chosen) == 4:
            break
    if len(chosen) < 4:
        raise ToolLimitError(
            "SAMPLING_EXHAUSTED",
            "fewer than four image points in general position over the working field",
        )
    rest = [pv for pv in pairs if pv not in chosen]
    while True:
        rows = []
        for u, v in chosen:
            for r, s in ((0, 1), (0, 2), (1, 2)):
                row = [0] * 9
                for c in range(3):
                    row[3 * r + c] = K.add(row[3 * r + c], K.mul(u[c], v[s]))
                    row[3 * s + c] = K.sub(row[3 * s + c], K.mul(u[c], v[r]))
                rows.append(row)
        basis = nullspace(K, rows)
        if not basis:
            raise HardFailure(
                "CERTIFICATION_FAILED", "image correspondence admits no matrix at all"
            )
        if len(basis) == 1:
            break
        if not rest:
            raise HardFailure(
                "CERTIFICATION_FAILED",
                "image correspondence does not pin down a unique matrix",
            )
        chosen.append(rest.pop(0))
    try:
        candidate = ProjMap(K, tuple(basis[0]))
    except InputError:
        raise HardFailure(
            "CERTIFICATION_FAILED", "solved correspondence matrix is singular"
        ) from None
    a, b, c = model.forms
    lhs = tuple(T.substitute_linear(sigma.rows) for T in (a, b, c))
    forms = (a, b, c)
    rhs = []
    for r in range(3):
        acc = TriPoly.zero(K)
        for col in range(3):
            coef = candidate.rows[3 * r + col]
            if coef:
                acc = acc + forms[col].scale(coef)
        rhs.append(acc)
    for r, s in ((0, 1), (0, 2), (1, 2)):
        if not C.reducer.reduce(lhs[r] * rhs[s] - lhs[s] * rhs[r]).is_zero():
            raise HardFailure(
                "CERTIFICATION_FAILED",
                "candidate matrix fails the symbolic compatibility identity",
            )
    return candidate


def extend_pipeline(C, groups, points, sigma, invariants=None, seed=0):
    """Construction followed by extendability and the certified matrix."""
    cons = construct_three_inner(C, groups, points, invariants, seed)
    if cons.model is None:
        return cons, None
    report = check_extendability(cons.model, sigma, groups, points, invariants, seed)
    if report.positive:
        report.matrix = build_linear_extension(cons.model, sigma)
        report.transcript.append("matrix certified against the embedding")
    return cons, report


class EquivalenceResult:
    """Two construction runs and the certified change of coordinates."""

    __slots__ = ("matrix", "first", "second", "marks_a", "marks_b", "seed_a", "seed_b")

    def __init__(self, matrix, first, second, marks_a, marks_b, seed_a, seed_b):
        self.matrix = matrix
        self.first = first
        self.second = second
        self.marks_a = marks_a
        self.marks_b = marks_b
        self.seed_a = seed_a
        self.seed_b = seed_b

    def to_json(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": "equiv",
            "seed_a": self.seed_a,
            "seed_b": self.seed_b,
            "matrix": None,
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "marks_a": [],
            "marks_b": [],
        }
        if self.matrix is not None:
            K = self.first.model.curve.field
            out["matrix"] = self.matrix.to_json()
            out["marks_a"] = [[list(K.decode(c)) for c in m] for m in self.marks_a]
            out["marks_b"] = [[list(K.decode(c)) for c in m] for m in self.marks_b]
        return out


def uniqueness_compare(C, kind, groups, points=None, q_point=None,
                       invariants=None, seed_a=1, seed_b=2):
    """Runs the construction under two seeds and certifies a projective
    equivalence between the two outputs."""
    for k, G in enumerate(groups):
        if G.order < 3:
            raise InputError(
                "HYPOTHESIS_VIOLATION",
                f"uniqueness comparison requires orders at least three; group {k + 1} has order {G.order}",
            )
    if kind == "three-inner":
        first = construct_three_inner(C, groups, points, invariants, seed_a)
        second = construct_three_inner(C, groups, points, invariants, seed_b)
    elif kind == "three-outer":
        first = construct_three_outer(C, groups, q_point, invariants, seed_a)
        second = construct_three_outer(C, groups, q_point, invariants, seed_b)
    else:
        raise InputError("UNSUPPORTED_TASK", f"no construction for task kind {kind!r}")
    if first.model is None or second.model is None:
        return EquivalenceResult(None, first, second, (), (), seed_a, seed_b)
    marks_a = list(first.model.marks)
    marks_b = list(second.model.marks)
    if kind == "three-outer":
        marks_a.append(first.q_image)
        marks_b.append(second.q_image)
    M = projective_equivalence(
        first.model.phi, marks_a, second.model.phi, marks_b,
        marks_on_curve=(kind == "three-inner"),
    )
    if M is None:
        raise HardFailure(
            "EQUIVALENCE_NOT_FOUND",
            "construction outputs admit no mark-compatible projective equivalence",
        )
    return EquivalenceResult(M, first, second, tuple(marks_a), tuple(marks_b), seed_a, seed_b)


class FiberOracleTranscript:
    """Sampled-fiber transitivity record, independent of the Artin route."""

    __slots__ = ("verdict", "entries", "skipped", "reason", "degree", "order", "trials", "seed")

    def __init__(self, verdict, entries, skipped, reason, degree, order, trials, seed):
        self.verdict = verdict
        self.entries = entries
        self.skipped = skipped
        self.reason = reason
        self.degree = degree
        self.order = order
        self.trials = trials
        self.seed = seed

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "oracle",
            "seed": self.seed,
            "verdict": self.verdict,
            "entries": self.entries,
            "skipped": self.skipped,
            "reason": self.reason,
            "degree": self.degree,
            "order": self.order,
            "trials": self.trials,
        }


def generic_fiber_orbit_test(t, G, trials, seed=0):
    """Galois means the group is transitive on generic fibers of full
    size; this samples values, keeps squarefree rational fibers, and
    checks each is a single orbit of size |G|."""
    if G.order < 2:
        raise InputError("GROUP_TOO_SMALL", "oracle needs order at least 2")
    if trials < 1:
        raise InputError("BAD_TRIALS", "need at least one trial")
    C = G.curve
    if t.curve is not C:
        raise InputError("CURVE_MISMATCH", "function on a different curve")
    if t.is_zero_function() or _constant_value(C, t) is not None:
        raise InputError("CONSTANT_FUNCTION", "oracle target is constant")
    K = C.field
    degree = function_degree(t, seed=seed)
    if degree != G.order:
        return FiberOracleTranscript(
            False, [], 0, "degree_mismatch", degree, G.order, trials, seed
        )
    rng = random.Random(f"{seed}/fiber-oracle")
    entries = []
    skipped = 0
    budget = ORACLE_RETRY_FACTOR * trials
    tried = 0
    # values are drawn with replacement: small fields may carry fewer
    # distinct values than requested trials
    while len(entries) < trials:
        if tried >= budget:
            raise ToolLimitError(
                "RETRIES_EXHAUSTED",
                "could not collect enough squarefree rational fibers; extend the working field",
                collected=len(entries),
                requested=trials,
            )
        lam = rng.randrange(K.q)
        tried += 1
        try:
            fib = _fiber_divisor(t, ("finite", lam))
        except ToolLimitError:
            skipped += 1
            continue
        items = fib.items_sorted()
        if fib.degree() != degree or any(m != 1 for _, m in items):
            skipped += 1
            continue
        pts = [P for P, _ in items]
        orbit, _ = orbit_and_stabilizer(G, pts[0])
        ok = len(orbit) == G.order and {P.codes for P in orbit} == {P.codes for P in pts}
        entries.append({
            "lambda": list(K.decode(lam)),
            "fiber": fib.to_json(),
            "orbit_size": len(orbit),
            "ok": ok,
        })
        if not ok:
            return FiberOracleTranscript(
                False, entries, skipped, "fiber_not_single_orbit",
                degree, G.order, trials, seed
            )
    return FiberOracleTranscript(True, entries, skipped, None, degree, G.order, trials, seed)


def enumerate_linear_automorphisms(C, hints=None, cap=None):
    """Curve-preserving plane transformations: closure of hints when
    given, else an exhaustive certified scan of the projective matrices."""
    from .action import CLOSURE_CAP_DEFAULT
    if cap is None:
        cap = CLOSURE_CAP_DEFAULT
    if cap < 1:
        raise InputError("BAD_CAP", "cap must be positive")
    if hints:
        return group_closure(tuple(hints), C, cap=cap)
    K = C.field
    sample = C.rational_points()[:12]
    rows_list = _backend.pgl_scan(K, C.terms_flat(), sample, PGL_SCAN_CAP)
    elements = []
    for rows in rows_list:
        M = ProjMap(K, rows)
        if map_preserves_curve(M, C) is not None:
            elements.append(M)
    if len(elements) > cap:
        raise ToolLimitError(
            "CAP_EXCEEDED",
            f"automorphism count {len(elements)} exceeds the cap {cap}",
        )
    from .action import _generating_subset
    gens_rows = _generating_subset(K, [m.rows for m in elements], max(len(elements), 1))
    gens = tuple(ProjMap(K, r) for r in gens_rows) or (ProjMap.identity(K),)
    return AutGroup(C, tuple(elements), gens)
