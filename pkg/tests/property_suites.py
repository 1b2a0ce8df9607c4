"""Randomized property suites, shared between the unit tests and the
acceptance gate.  Each function runs a pinned-seed batch and returns the
number of cases it exercised."""

import random

from galoispoints.action import (
    ProjMap,
    RatFunc,
    function_degree,
    group_closure,
    mobius_normalize,
    orbit_and_stabilizer,
    pullback,
    _fiber_divisor,
)
from galoispoints.algebra.field import build_field, extension_field
from galoispoints.algebra.linalg import det3, mat_inv, mat_mul, nullspace
from galoispoints.algebra.tripoly import TriPoly
from galoispoints.algebra.unipoly import UniPoly, factor_univariate
from galoispoints.curve import divisor_of_function, line_intersection_divisor, point_from_codes
from galoispoints.errors import InputError, ToolLimitError


def field_axioms(seed=0, cases=450):
    """Commutativity, associativity, distributivity, inverses, Frobenius."""
    rng = random.Random(f"{seed}/field-axioms")
    fields = [
        build_field(3, (1, 0, 1)),
        build_field(7, (0, 1)),
        extension_field(build_field(3, (1, 0, 1)), 2)[0],
    ]
    done = 0
    while done < cases:
        K = fields[done % len(fields)]
        a = rng.randrange(K.q)
        b = rng.randrange(K.q)
        c = rng.randrange(K.q)
        assert K.add(a, b) == K.add(b, a)
        assert K.mul(a, b) == K.mul(b, a)
        assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
        assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
        assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
        assert K.add(a, K.neg(a)) == 0
        if a:
            assert K.mul(a, K.inv(a)) == 1
        assert K.pow(a, K.q) == a
        assert K.pow(K.add(a, b), K.p) == K.add(K.pow(a, K.p), K.pow(b, K.p))
        done += 1
    return done


def linear_algebra_certificates(seed=0, cases=150):
    """Nullspace vectors annihilate, inverses invert, det is multiplicative."""
    rng = random.Random(f"{seed}/linalg")
    K = build_field(3, (1, 0, 1))
    done = 0
    while done < cases:
        rows = [[rng.randrange(K.q) for _ in range(4)] for _ in range(3)]
        for v in nullspace(K, rows):
            for row in rows:
                acc = 0
                for x, y in zip(row, v):
                    acc = K.add(acc, K.mul(x, y))
                assert acc == 0
        A = [[rng.randrange(K.q) for _ in range(3)] for _ in range(3)]
        B = [[rng.randrange(K.q) for _ in range(3)] for _ in range(3)]
        assert det3(K, mat_mul(K, A, B)) == K.mul(det3(K, A), det3(K, B))
        if det3(K, A):
            prod = mat_mul(K, A, mat_inv(K, A))
            assert prod == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        done += 1
    return done


def polynomial_factor_roundtrip(seed=0, cases=120):
    rng = random.Random(f"{seed}/unipoly")
    K = build_field(3, (1, 0, 1))
    done = 0
    while done < cases:
        deg = rng.randrange(1, 7)
        coeffs = [rng.randrange(K.q) for _ in range(deg)] + [1]
        f = UniPoly(K, coeffs)
        lead, factors = factor_univariate(f)
        prod = UniPoly(K, [lead])
        for g, m in factors:
            assert g.coeffs[-1] == 1
            for _ in range(m):
                prod = prod * g
        assert prod == f
        done += 1
    return done


def orbit_stabilizer_counting(big_group, seed=0, cases=120):
    """|orbit| times |stabilizer| equals |G| for random subgroups and points."""
    rng = random.Random(f"{seed}/orbit-stabilizer")
    C = big_group.curve
    pts = [point_from_codes(C, c) for c in sorted(C.rational_points())]
    done = 0
    while done < cases:
        gens = [big_group.elements[rng.randrange(big_group.order)]
                for _ in range(rng.randrange(1, 3))]
        G = group_closure(gens, C, cap=big_group.order)
        P = pts[rng.randrange(len(pts))]
        orbit, stab = orbit_and_stabilizer(G, P)
        assert len(orbit) * stab.order == G.order
        assert stab.contains(ProjMap.identity(C.field))
        for Q in orbit:
            assert Q.curve is C
        done += 1
    return done


def _random_form(K, rng, degree):
    exps = [(i, j, degree - i - j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    terms = {e: rng.randrange(K.q) for e in exps}
    return TriPoly(K, {e: c for e, c in terms.items() if c})


def degree_zero_law(C, seed=0, cases=120):
    """Principal divisors have degree zero whenever their support is rational."""
    rng = random.Random(f"{seed}/degree-zero")
    K = C.field
    done = 0
    attempts = 0
    while done < cases and attempts < 40 * cases:
        attempts += 1
        deg = rng.randrange(1, 3)
        num = _random_form(K, rng, deg)
        den = _random_form(K, rng, deg)
        if num.is_zero() or den.is_zero():
            continue
        try:
            D = divisor_of_function(C, RatFunc(C, num, den))
        except (InputError, ToolLimitError):
            continue
        assert D.degree() == 0
        done += 1
    assert done == cases, f"only {done} rational principal divisors found"
    return done


def pullback_action_law(group, seed=0, cases=200):
    """pullback(M*N, t) = pullback(N, pullback(M, t)) and divisor version."""
    rng = random.Random(f"{seed}/pullback")
    C = group.curve
    K = C.field
    X = TriPoly.variable(K, 0)
    Y = TriPoly.variable(K, 1)
    Z = TriPoly.variable(K, 2)
    fns = [RatFunc(C, X, Y), RatFunc(C, X, Z), RatFunc(C, Y, Z), RatFunc(C, X + Y, Z)]
    pts = [point_from_codes(C, c) for c in sorted(C.rational_points())]
    done = 0
    while done < cases:
        M = group.elements[rng.randrange(group.order)]
        N = group.elements[rng.randrange(group.order)]
        t = fns[rng.randrange(len(fns))]
        assert pullback(M * N, t) == pullback(N, pullback(M, t))
        from galoispoints.curve import Divisor
        P = pts[rng.randrange(len(pts))]
        Q = pts[rng.randrange(len(pts))]
        D = Divisor({P: 1, Q: 2})
        assert pullback(M * N, D) == pullback(N, pullback(M, D))
        done += 1
    return done


def mobius_postcondition(invariant, seed=0, cases=40):
    """The normalized function's divisor is the difference of the two fibers."""
    rng = random.Random(f"{seed}/mobius")
    C = invariant.curve
    pts = [point_from_codes(C, c) for c in sorted(C.rational_points())]
    done = 0
    attempts = 0
    while done < cases and attempts < 40 * cases:
        attempts += 1
        P = pts[rng.randrange(len(pts))]
        Q = pts[rng.randrange(len(pts))]
        try:
            f = mobius_normalize(invariant, P, Q)
        except InputError as exc:
            if exc.code in ("SAME_FIBER",):
                continue
            raise
        except ToolLimitError:
            continue
        a = invariant.value_at(P)
        b = invariant.value_at(Q)
        D = divisor_of_function(C, f)
        assert D == _fiber_divisor(invariant, a) - _fiber_divisor(invariant, b)
        assert D.mult.get(P, 0) > 0
        assert D.mult.get(Q, 0) < 0
        done += 1
    assert done == cases, f"only {done} usable point pairs found"
    return done


def _chord(K, P, Q):
    a, b, c = P.codes
    d, e, f = Q.codes
    coeffs = (
        K.sub(K.mul(b, f), K.mul(c, e)),
        K.sub(K.mul(c, d), K.mul(a, f)),
        K.sub(K.mul(a, e), K.mul(b, d)),
    )
    return TriPoly(K, {(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})


def fact3_assertions(report, groups, points):
    """Chords between marked points are not tangent lines, and no group
    moves its own point onto another marked point."""
    from galoispoints.curve import local_valuation

    assert report.overall and report.kind.endswith("inner")
    C = groups[0].curve
    K = C.field
    degree = groups[0].order + 1
    assert degree >= 4
    done = 0
    for i, P in enumerate(points):
        for j, Q in enumerate(points):
            if i == j:
                continue
            chord = _chord(K, P, Q)
            assert local_valuation(P, chord) == 1
            orbit, _ = orbit_and_stabilizer(groups[i], P)
            assert all(R.codes != Q.codes for R in orbit)
            done += 1
    return done


def function_degree_values(C):
    """Frozen degrees of the corpus projections."""
    K = C.field
    X = TriPoly.variable(K, 0)
    Y = TriPoly.variable(K, 1)
    Z = TriPoly.variable(K, 2)
    assert function_degree(RatFunc(C, X, Y)) == 3
    assert function_degree(RatFunc(C, X, Z)) == 3
    assert function_degree(RatFunc(C, Y, Z)) == 4
    return 3


def condition_c_permutations(groups, points):
    """The common-divisor comparison is invariant under reindexing."""
    import itertools

    from galoispoints.galois import inner_common_divisor

    base = inner_common_divisor(groups, points)
    assert base.positive
    done = 0
    for perm in itertools.permutations(range(3)):
        res = inner_common_divisor(
            tuple(groups[k] for k in perm), tuple(points[k] for k in perm)
        )
        assert res.positive and res.divisor == base.divisor
        done += 1
    return done


def line_divisor_degrees(C, seed=0, cases=60):
    """A line meets the curve in deg C points counted with multiplicity."""
    rng = random.Random(f"{seed}/line-divisor")
    K = C.field
    done = 0
    attempts = 0
    while done < cases and attempts < 40 * cases:
        attempts += 1
        coeffs = [rng.randrange(K.q) for _ in range(3)]
        if not any(coeffs):
            continue
        L = TriPoly(K, {(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})
        try:
            D = line_intersection_divisor(C, L)
        except (InputError, ToolLimitError):
            continue
        assert D.degree() == C.degree
        assert D.is_effective()
        done += 1
    assert done == cases, f"only {done} rational line sections found"
    return done
