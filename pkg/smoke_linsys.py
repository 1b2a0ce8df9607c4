import time

from galoispoints.algebra.field import build_field
from galoispoints.algebra.tripoly import TriPoly
from galoispoints.curve import validate_curve, point_from_codes
from galoispoints.action import RatFunc, ProjMap
from galoispoints.linsys import (
    span_coefficients,
    span_dimension,
    base_locus,
    implicitize,
    image_point,
    projective_equivalence,
    EmbeddingModel,
)
from galoispoints.errors import InputError

t0 = time.time()

K = build_field(3, [1, 0, 1])
i = K.gen
F = TriPoly(K, {(0, 3, 1): K.one, (0, 1, 3): K.one, (4, 0, 0): -K.one})
H = validate_curve(F, K)

X = TriPoly.variable(K, 0)
Y = TriPoly.variable(K, 1)
Z = TriPoly.variable(K, 2)

one = RatFunc(H, X, X)
f = RatFunc(H, Y, X)
g = RatFunc(H, Z, X)
YmiZ = TriPoly(K, {(0, 1, 0): K.one, (0, 0, 1): -i})
h = RatFunc(H, YmiZ, X)

# --- span_coefficients -------------------------------------------------
cert = span_coefficients(h, [one, f, g])
assert cert.found, cert.to_json()
coeffs = list(cert.coefficients)
print("span h in <1,f,g>:", coeffs, "witness:", cert.witness)
assert coeffs == [0, 1, (-i).code], coeffs
assert cert.witness is None

cert2 = span_coefficients(f, [one, f, g])
assert cert2.found
assert list(cert2.coefficients) == [0, 1, 0]
print("span f in basis: (0,1,0) ok")

# refutation: Y^2/(XZ) has a pole at P2 of order 4+4-... just try it
bad = RatFunc(H, TriPoly(K, {(0, 2, 0): K.one}), TriPoly(K, {(1, 0, 1): K.one}))
cert3 = span_coefficients(bad, [one, f, g])
assert not cert3.found
assert cert3.witness is not None
print("span refutation witness:", cert3.witness)

# --- span_dimension ----------------------------------------------------
assert span_dimension([one, f, g, h]) == 3
assert span_dimension([one, f]) == 2
assert span_dimension([one, one, one]) == 1
print("span_dimension: 3 / 2 / 1 ok")

# --- base_locus --------------------------------------------------------
from galoispoints.curve import divisor_of_function, form_intersection_divisor

DX = form_intersection_divisor(H, X)
DY = form_intersection_divisor(H, Y)
B = base_locus([DX, DY])
print("base_locus deg:", B.degree(), dict((p.codes, m) for p, m in B.items_sorted()))

# --- implicitize H9 ----------------------------------------------------
t1 = time.time()
model = implicitize(f, g)
t2 = time.time()
print("implicitize H9 in %.2fs" % (t2 - t1))
expected = TriPoly(K, {(3, 1, 0): K.one, (1, 3, 0): K.one, (0, 0, 4): -K.one}).canonical()
print("phi:", model.phi.terms)
assert model.phi == expected, (model.phi.terms, expected.terms)
assert model.degree == 4
assert model.system_degree == 4
assert model.map_degree == 1
assert model.birational
print("H9 model: degree 4, system 4, map 1, birational ok")

# --- image_point -------------------------------------------------------
P1 = point_from_codes(H, (0, 0, 1))
P2 = point_from_codes(H, (0, 1, 0))
P3 = point_from_codes(H, (0, i.code, 1))
P4 = point_from_codes(H, (0, 6, 1))
q1 = image_point(model, P1)
q2 = image_point(model, P2)
q3 = image_point(model, P3)
q4 = image_point(model, P4)
print("images:", q1, q2, q3, q4)
assert q1 == (0, 1, 0), q1
assert q2 == (1, 0, 0), q2
assert q3 == (1, 6, 0), q3
assert q4 == (1, 3, 0), q4

# marks
model = model.with_marks([q1, q2, q3])
print("marks:", model.marks)

# --- implicitize FQ9 ---------------------------------------------------
F2 = TriPoly(K, {(4, 0, 0): K.one, (0, 4, 0): K.one, (0, 0, 4): K.one})
Q = validate_curve(F2, K)
QX = TriPoly.variable(K, 0)
QY = TriPoly.variable(K, 1)
QZ = TriPoly.variable(K, 2)
t1 = time.time()
model2 = implicitize(RatFunc(Q, QY, QZ), RatFunc(Q, QX, QZ))
t2 = time.time()
print("implicitize FQ9 in %.2fs" % (t2 - t1))
exp2 = TriPoly(K, {(4, 0, 0): K.one, (0, 4, 0): K.one, (0, 0, 4): K.one}).canonical()
assert model2.phi == exp2, model2.phi.terms
assert model2.degree == 4 and model2.map_degree == 1
print("FQ9 model: U^4+V^4+W^4 ok")

# --- projective_equivalence -------------------------------------------
# identical inputs with 4 marks -> identity
marksA = [(0, 0, 1), (0, 1, 0), (0, i.code, 1), (0, 6, 1)]
M = projective_equivalence(F, marksA, F, marksA)
assert M is not None
print("self-equivalence:", M.rows)
assert M.is_identity()

# H9 curve vs image model: marks map P_k -> images
marksB = [q1, q2, q3, q4]
M2 = projective_equivalence(F, marksA, model.phi, marksB)
assert M2 is not None
print("H9 -> image equivalence:", M2.rows)
# verify: phi(M2 x) == c F(x), and marks map correctly in SOME pairing
sub = model.phi.substitute_linear(M2.rows)
c = sub.lead_code()
lhs = sub.canonical()
rhs = F.canonical()
assert lhs == rhs, (lhs.terms, rhs.terms)
print("pullback identity verified, c =", c)

# degree mismatch -> None
conic = TriPoly(K, {(2, 0, 0): K.one, (0, 1, 1): K.one})
M3 = projective_equivalence(F, marksA, conic, [(0, 0, 1), (0, 1, 0), (1, 1, 2), (1, 2, 1)])
assert M3 is None
print("degree mismatch -> None ok")

# determinism: run twice
M2b = projective_equivalence(F, marksA, model.phi, marksB)
assert M2 == M2b

# --- json round trips --------------------------------------------------
js = model.to_json()
back = EmbeddingModel.from_json(H, js)
assert back.phi == model.phi and back.marks == model.marks
print("EmbeddingModel json round trip ok")

print("ALL LINSYS SMOKE OK in %.2fs total" % (time.time() - t0))
