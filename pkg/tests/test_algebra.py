"""Unit tests for finite fields, matrices, and polynomial arithmetic."""

import random

import pytest

from galoispoints.algebra.field import (
    FieldElement, build_field, extension_field, find_irreducible, prime_field)
from galoispoints.algebra.linalg import (
    mat_inv, mat_mul, mat_vec, nullspace, rank, rref, solve)
from galoispoints.algebra import tripoly
from galoispoints.algebra.tripoly import (
    TriPoly, factor_homogeneous, gcd_homogeneous, normal_form,
    pth_root_homogeneous, squarefree_part_homogeneous)
from galoispoints.algebra.unipoly import (
    UniPoly, factor_univariate, is_irreducible, roots_in_field,
    squarefree_decomposition)
from galoispoints.errors import GaloisPointsError, InputError


F9 = build_field(3, (1, 0, 1))
F7 = prime_field(7)


class TestField:
    def test_prime_arithmetic(self):
        assert F7.add(5, 4) == 2
        assert F7.mul(3, 5) == 1
        assert F7.inv(3) == 5
        assert F7.neg(0) == 0
        assert F7.pow(3, 6) == 1

    def test_codes_are_little_endian(self):
        # code 5 over F9 is 2 + 1*3, i.e. coordinates (2, 1)
        assert F9.decode(5) == (2, 1)
        assert F9.encode((2, 1)) == 5
        assert F9.encode((2, 1, 0, 0)) == 5

    def test_generator_imaginary_unit(self):
        i = F9.encode((0, 1))
        assert i == 3
        assert F9.mul(i, i) == 2

    def test_element_uses_integer_semantics(self):
        # plain integers reduce mod p, they are not raw codes
        assert F9.element(4).code == 1
        assert F9.element(-1).code == 2

    def test_from_int_matches_element(self):
        for n in range(-5, 12):
            assert F9.from_int(n) == F9.element(n).code

    def test_element_wrapper_arithmetic(self):
        a = FieldElement(F9, 3)
        b = FieldElement(F9, 5)
        assert (a + b).code == F9.add(3, 5)
        assert (a * b).code == F9.mul(3, 5)
        assert (a / b) * b == a
        assert (-a) + a == FieldElement(F9, 0)
        assert a ** 8 == FieldElement(F9, 1)

    def test_elements_enumeration(self):
        codes = [e.code for e in F9.elements()]
        assert codes == list(range(9))

    def test_gen_is_residue_of_variable(self):
        g = F9.gen
        assert g.code == F9.encode((0, 1))
        # the modulus is t^2 + 1, so the residue squares to -1
        assert g * g == F9.element(-1)
        assert prime_field(7).gen.code == 1

    def test_inverse_of_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            F9.inv(0)

    def test_field_cache_returns_same_object(self):
        assert build_field(3, (1, 0, 1)) is F9

    def test_find_irreducible(self):
        mod = find_irreducible(5, 3)
        assert len(mod) == 4 and mod[3] == 1
        f = UniPoly(prime_field(5), list(mod))
        assert is_irreducible(f)

    def test_extension_embedding_is_homomorphism(self):
        F81, emb = extension_field(F9, 2)
        assert F81.q == 81
        rng = random.Random(11)
        for _ in range(60):
            a, b = rng.randrange(9), rng.randrange(9)
            assert emb(F9.add(a, b)) == F81.add(emb(a), emb(b))
            assert emb(F9.mul(a, b)) == F81.mul(emb(a), emb(b))
        assert emb(0) == 0 and emb(1) == 1

    def test_extension_preserves_minimal_relations(self):
        F81, emb = extension_field(F9, 2)
        i = F9.encode((0, 1))
        assert F81.mul(emb(i), emb(i)) == emb(2)

    def test_generic_kind_arithmetic(self):
        # 2^21 exceeds the discrete-log table limit, forcing generic mode
        big = prime_field(2)
        F, emb = extension_field(big, 21)
        assert F.kind == "generic"
        rng = random.Random(5)
        for _ in range(25):
            a = rng.randrange(1, F.q)
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, 5) == F.mul(F.mul(a, a), F.mul(a, F.mul(a, a)))

    def test_frobenius_fixes_prime_subfield(self):
        for a in range(9):
            assert F9.pow(a, 9) == a
        for a in range(3):
            assert F9.pow(a, 3) == a


class TestLinalg:
    def test_rref_idempotent(self):
        rng = random.Random(3)
        for _ in range(30):
            A = [[rng.randrange(9) for _ in range(4)] for _ in range(3)]
            R, piv = rref(F9, A)
            R2, piv2 = rref(F9, R)
            assert R == R2 and piv == piv2

    def test_rank_plus_nullity(self):
        rng = random.Random(4)
        for _ in range(30):
            A = [[rng.randrange(9) for _ in range(5)] for _ in range(3)]
            basis = nullspace(F9, A)
            assert rank(F9, A) + len(basis) == 5
            for v in basis:
                assert all(c == 0 for c in mat_vec(F9, A, v))

    def test_solve_recovers_solution(self):
        rng = random.Random(6)
        hits = 0
        while hits < 25:
            A = [[rng.randrange(9) for _ in range(3)] for _ in range(3)]
            x = [rng.randrange(9) for _ in range(3)]
            b = mat_vec(F9, A, x)
            sol = solve(F9, A, b)
            if sol is None:
                continue
            assert mat_vec(F9, A, sol) == b
            hits += 1

    def test_inverse_roundtrip(self):
        M = [[1, 0, 0], [0, 1, 3], [0, 0, 1]]
        Minv = mat_inv(F9, M)
        eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert mat_mul(F9, M, Minv) == eye
        assert mat_mul(F9, Minv, M) == eye

    def test_singular_matrix_has_no_inverse(self):
        # second row is -1 times the first
        M = [[1, 2, 0], [2, 1, 0], [0, 0, 1]]
        with pytest.raises(InputError) as err:
            mat_inv(F9, M)
        assert err.value.code == "SINGULAR_MATRIX"


def _upow(f, n):
    out = UniPoly.constant(f.field, 1)
    for _ in range(n):
        out = out * f
    return out


class TestUniPoly:
    def test_trailing_zero_normalization(self):
        f = UniPoly(F9, [1, 2, 0, 0])
        assert f.coeffs == (1, 2)
        assert f.degree == 1
        assert UniPoly(F9, [0, 0]).is_zero()

    def test_divmod_invariant(self):
        rng = random.Random(9)
        for _ in range(40):
            f = UniPoly(F9, [rng.randrange(9) for _ in range(6)])
            g = UniPoly(F9, [rng.randrange(9) for _ in range(3)])
            if g.is_zero():
                continue
            q, r = divmod(f, g)
            assert q * g + r == f
            assert r.is_zero() or r.degree < g.degree

    def test_gcd_contains_common_factor(self):
        x = UniPoly.x(F9)
        h = x * x + UniPoly.constant(F9, 3)
        f = (x + UniPoly.constant(F9, 1)) * h
        g = (x + UniPoly.constant(F9, 2)) * h
        d = f.gcd(g)
        assert divmod(d, h.monic())[1].is_zero()

    def test_powmod_matches_naive(self):
        x = UniPoly.x(F9)
        mod = _upow(x, 3) + x + UniPoly.constant(F9, 1)

        naive = UniPoly.constant(F9, 1)
        for _ in range(13):
            naive = (naive * x) % mod
        assert x.powmod(13, mod) == naive

    def test_factor_reassembles(self):
        rng = random.Random(12)
        for _ in range(20):
            f = UniPoly(F9, [rng.randrange(9) for _ in range(7)])
            if f.degree < 1:
                continue
            lead, parts = factor_univariate(f)
            prod = UniPoly.constant(F9, lead)
            for g, mult in parts:
                assert g.lc() == 1 and is_irreducible(g)
                prod = prod * _upow(g, mult)
            assert prod == f

    def test_known_splitting(self):
        # x^2 + 1 stays irreducible over F3 but splits over F9
        F3 = prime_field(3)
        f3 = UniPoly(F3, [1, 0, 1])
        assert is_irreducible(f3)
        f9 = UniPoly(F9, [1, 0, 1])
        assert not is_irreducible(f9)
        rts = roots_in_field(f9, F9)
        assert [r.code for r in rts] == [3, 6]

    def test_squarefree_decomposition(self):
        x = UniPoly.x(F9)
        a = x + UniPoly.constant(F9, 1)
        b = x + UniPoly.constant(F9, 2)
        f = a * a * b
        parts = squarefree_decomposition(f.monic())
        prod = UniPoly.constant(F9, 1)
        for g, mult in parts:
            prod = prod * _upow(g, mult)
        assert prod == f.monic()
        assert sorted(m for _, m in parts) == [1, 2]

    def test_roots_respect_multiplicity(self):
        x = UniPoly.x(F9)
        a = x + UniPoly.constant(F9, 5)
        f = a * a * (x + UniPoly.constant(F9, 1))
        rts = roots_in_field(f, F9)
        # -5 has coordinates (1, 2), hence code 7
        assert [r.code for r in rts] == [2, 7, 7]

    def test_roots_of_zero_rejected(self):
        with pytest.raises(InputError):
            roots_in_field(UniPoly(F9, []), F9)

    def test_map_field_roundtrip(self):
        F81, emb = extension_field(F9, 2)
        f = UniPoly(F9, [2, 3, 1])
        g = f.map_field(emb)
        assert g.field is F81
        assert g.eval(emb(5)) == emb(f.eval(5))


def _curve_form(K):
    X = TriPoly.variable(K, 0)
    Y = TriPoly.variable(K, 1)
    Z = TriPoly.variable(K, 2)
    return X, Y, Z


class TestTriPoly:
    def test_linear_form_and_eval(self):
        L = TriPoly.linear_form(F9, (1, 3, 2))
        assert L.eval((1, 0, 0)) == 1
        assert L.eval((0, 1, 0)) == 3
        assert L.eval((1, 1, 1)) == F9.add(F9.add(1, 3), 2)

    def test_substitution_composes_with_matrix_product(self):
        rng = random.Random(21)
        X, Y, Z = _curve_form(F9)
        F = X * Y + Z.pow(2) + X.pow(2).scale(3)
        for _ in range(15):
            M = [[rng.randrange(9) for _ in range(3)] for _ in range(3)]
            N = [[rng.randrange(9) for _ in range(3)] for _ in range(3)]
            flat_m = [c for row in M for c in row]
            flat_n = [c for row in N for c in row]
            flat_mn = [c for row in mat_mul(F9, M, N) for c in row]
            left = F.substitute_linear(flat_m).substitute_linear(flat_n)
            assert left == F.substitute_linear(flat_mn)

    def test_euler_relation_for_quartic(self):
        X, Y, Z = _curve_form(F9)
        F = Y.pow(3) * Z + Y * Z.pow(3) - X.pow(4)
        total = TriPoly.zero(F9)
        for v, var in enumerate((X, Y, Z)):
            total = total + var * F.partial(v)
        # degree 4 reduces to 1 in characteristic 3
        assert total == F

    def test_homogeneous_gcd(self):
        X, Y, Z = _curve_form(F9)
        C = X + Y.scale(3)
        A = (X + Z) * C
        B = (Y + Z.scale(2)) * C
        g = gcd_homogeneous(A, B)
        assert g.total_degree() == 1
        assert g.scale(F9.inv(g.lead_code())) == C.scale(
            F9.inv(C.lead_code()))

    def test_factor_homogeneous_reassembles(self):
        X, Y, Z = _curve_form(F9)
        F = (X + Y) * (X + Y.scale(2)) * Z.pow(2)
        lead, parts = factor_homogeneous(F)
        prod = TriPoly.constant(F9, lead)
        for g, mult in parts:
            prod = prod * g.pow(mult)
        assert prod == F
        assert sorted(p.total_degree() for p, _ in parts) == [1, 1, 1]

    def test_pth_root(self):
        X, Y, Z = _curve_form(F9)
        F = X * Y + Z.pow(2)
        cube = F.pow(3)
        assert pth_root_homogeneous(cube) == F

    def test_squarefree_part(self):
        X, Y, Z = _curve_form(F9)
        A = X + Y
        F = A.pow(2) * (Y + Z)
        sq = squarefree_part_homogeneous(F)
        expected = A * (Y + Z)
        assert sq.scale(F9.inv(sq.lead_code())) == expected.scale(
            F9.inv(expected.lead_code()))

    def test_resultant_detects_common_factor(self):
        # the eliminated variable must occur in the shared factor
        X, Y, Z = _curve_form(F9)
        shared = X + Z.scale(5)
        A = shared * (X + Y)
        B = shared * (Y + Z)
        assert tripoly.resultant(A, B, 2).is_zero()
        assert not tripoly.resultant(X + Z, Y + Z.scale(2), 2).is_zero()

    def test_normal_form_annihilates_multiples(self):
        X, Y, Z = _curve_form(F9)
        F = Y.pow(3) * Z + Y * Z.pow(3) - X.pow(4)
        g = (X + Y.scale(4)) * F
        assert normal_form(g, F).is_zero()
        r = X * Y + Z.pow(2)
        assert normal_form(g + r, F) == normal_form(r, F)

    def test_json_roundtrip(self):
        X, Y, Z = _curve_form(F9)
        F = X.pow(2).scale(7) + Y * Z.scale(3)
        again = TriPoly.from_json(F9, F.to_json())
        assert again == F

    def test_map_field_commutes_with_eval(self):
        F81, emb = extension_field(F9, 2)
        X, Y, Z = _curve_form(F9)
        F = X * Y.scale(4) + Z.pow(2)
        G = F.map_field(emb)
        assert G.eval((emb(2), emb(3), emb(1))) == emb(F.eval((2, 3, 1)))
