import time

t00 = time.time()

from galoispoints.algebra.field import build_field
from galoispoints.algebra.tripoly import TriPoly
from galoispoints.action import ProjMap, RatFunc, group_closure
from galoispoints.curve import validate_curve, point_from_codes, normalize_point, Divisor
from galoispoints.errors import InputError, HardFailure, ToolLimitError
from galoispoints import galois as ga

K = build_field(3, (1, 0, 1))
i = 3
assert tuple(K.decode(i)) == (0, 1)

X = TriPoly.variable(K, 0)
Y = TriPoly.variable(K, 1)
Z = TriPoly.variable(K, 2)

F = TriPoly(K, {(0, 3, 1): 1, (0, 1, 3): 1, (4, 0, 0): 2})
C = validate_curve(F, K)

P1 = point_from_codes(C, (0, 0, 1))
P2 = point_from_codes(C, (0, 1, 0))
P3 = point_from_codes(C, (0, 1, 6))
P4 = point_from_codes(C, (0, 1, 3))

g1 = ProjMap(K, (1, 0, 0, 0, 1, 0, 0, 3, 1))
g2 = ProjMap(K, (1, 0, 0, 0, 1, 3, 0, 0, 1))
G1 = group_closure((g1,), C)
G2 = group_closure((g2,), C)
G3 = G1.conjugate(g2)
assert G1.order == G2.order == G3.order == 3

t1 = RatFunc(C, X, Y)
t2 = RatFunc(C, X, Z)
t3 = RatFunc(C, X, TriPoly(K, {(0, 1, 0): 1, (0, 0, 1): 6}))

# --- three-inner check -------------------------------------------------
t0 = time.time()
rep = ga.check_three_inner(C, (G1, G2, G3), (P1, P2, P3), (t1, t2, t3), seed=0)
print("check_three_inner:", time.time() - t0, "s")
assert rep.overall, rep.to_json()
assert rep.first_failure() is None
D = rep.divisor
assert D == Divisor({P1: 1, P2: 1, P3: 1, P4: 1}), D.to_json()
assert rep.span.found
assert tuple(rep.span.coefficients) == (0, 1, 6), rep.span.coefficients
assert rep.conditions["d"]["dimension"] == 3
assert rep.conditions["d"]["base_locus_degree"] == 0
assert rep.fact3 is not None
assert rep.fact3["degree"] == 4
assert rep.fact3["chord_multiplicities"] == [1, 1, 1]
j1 = rep.to_json()
j2 = ga.check_three_inner(C, (G1, G2, G3), (P1, P2, P3), (t1, t2, t3), seed=0).to_json()
assert j1 == j2
print("OK check_three_inner")

# --- three-inner construct --------------------------------------------
t0 = time.time()
cons = ga.construct_three_inner(C, (G1, G2, G3), (P1, P2, P3), (t1, t2, t3), seed=0)
print("construct_three_inner:", time.time() - t0, "s")
m = cons.model
assert m is not None
assert m.degree == 4
assert m.birational
assert dict(m.phi.terms) == {(3, 1, 0): 1, (1, 3, 0): 1, (0, 0, 4): 2}, m.phi.terms
assert m.marks == ((0, 1, 0), (1, 0, 0), (1, 6, 0)), m.marks
assert all(c.positive and c.on_curve and c.degree == 3 for c in cons.certificates)
assert cons.q_image is None
c1 = cons.to_json()
c2 = ga.construct_three_inner(C, (G1, G2, G3), (P1, P2, P3), (t1, t2, t3), seed=0).to_json()
assert c1 == c2
print("OK construct_three_inner")

# --- derived invariants give the same picture -------------------------
t0 = time.time()
rep_d = ga.check_three_inner(C, (G1, G2, G3), (P1, P2, P3), None, seed=0)
print("check derived invariants:", time.time() - t0, "s")
assert rep_d.overall
assert rep_d.divisor == D
assert all(rep_d.derived)
print("OK derived invariants")

# --- broken (b): third group duplicates the second --------------------
G3b = group_closure((g2,), C)
rep_b = ga.check_three_inner(C, (G1, G2, G3b), (P1, P2, P3), (t1, t2, None), seed=0)
assert not rep_b.overall
assert rep_b.first_failure() == "(b)", rep_b.first_failure()
assert all(c.positive for c in rep_b.conditions["a"])
assert rep_b.conditions["b"]["verdict"] == "fail"
assert rep_b.conditions["b"]["witness"]["pair"] == [2, 3]
assert rep_b.conditions["c"] == {"verdict": "skipped"}
assert rep_b.conditions["d"] == {"verdict": "skipped"}
cons_b = ga.construct_three_inner(C, (G1, G2, G3b), (P1, P2, P3), (t1, t2, None), seed=0)
assert cons_b.model is None and cons_b.certificates == ()
print("OK broken (b)")

# --- broken (c): third point replaced ---------------------------------
P3c = point_from_codes(C, (1, 2, 1))
rep_c = ga.check_three_inner(C, (G1, G2, G3), (P1, P2, P3c), (t1, t2, t3), seed=0)
assert not rep_c.overall
assert rep_c.first_failure() == "(c)", rep_c.first_failure()
assert rep_c.conditions["c"]["verdict"] == "fail"
assert rep_c.conditions["c"]["witness"] == {"first": [1, 2], "differs": [1, 3]}, rep_c.conditions["c"]["witness"]
print("OK broken (c)")

# --- extendability + linear extension ---------------------------------
sigma = ProjMap(K, (1, 0, 0, 0, 1, 0, 0, 6, 1))
t0 = time.time()
cons_e, ext = ga.extend_pipeline(C, (G1, G2, G3), (P1, P2, P3), sigma, (t1, t2, t3), seed=0)
print("extend_pipeline:", time.time() - t0, "s")
assert cons_e.model is not None
assert ext is not None and ext.positive
assert ext.conditions["a"]["verdict"] == "pass"
assert ext.conditions["b"]["verdict"] == "pass"
assert ext.conditions["c"]["verdict"] == "pass"
assert ext.fast_path == {"applicable": True, "per_point": [True, True, True], "agrees": True}
assert ext.matrix is not None
assert ext.matrix.rows == (1, 0, 0, 6, 1, 0, 0, 0, 1), ext.matrix.rows
print("OK extend")

# --- uniqueness -------------------------------------------------------
t0 = time.time()
eq = ga.uniqueness_compare(C, "three-inner", (G1, G2, G3), points=(P1, P2, P3),
                           invariants=(t1, t2, t3), seed_a=1, seed_b=2)
print("uniqueness provided:", time.time() - t0, "s")
assert eq.matrix is not None
assert eq.matrix.rows == (1, 0, 0, 0, 1, 0, 0, 0, 1), eq.matrix.rows
t0 = time.time()
eq_d = ga.uniqueness_compare(C, "three-inner", (G1, G2, G3), points=(P1, P2, P3),
                             invariants=None, seed_a=1, seed_b=2)
print("uniqueness derived:", time.time() - t0, "s")
assert eq_d.matrix is not None
print("OK uniqueness inner")

# --- fiber oracle ------------------------------------------------------
t0 = time.time()
tr = ga.generic_fiber_orbit_test(t1, G1, 10, seed=0)
print("oracle t1/G1:", time.time() - t0, "s")
assert tr.verdict and len(tr.entries) == 10 and tr.degree == 3
trj = tr.to_json()
trj2 = ga.generic_fiber_orbit_test(t1, G1, 10, seed=0).to_json()
assert trj == trj2

tr_neg = ga.generic_fiber_orbit_test(t1, G2, 10, seed=0)
assert not tr_neg.verdict and tr_neg.reason == "fiber_not_single_orbit", tr_neg.reason

t4 = RatFunc(C, Y, Z)
tr_deg = ga.generic_fiber_orbit_test(t4, G1, 5, seed=0)
assert not tr_deg.verdict and tr_deg.reason == "degree_mismatch" and tr_deg.degree == 4
print("OK oracle")

# --- two-point variants -----------------------------------------------
rep2 = ga.check_two_inner(C, (G1, G2), (P1, P2), (t1, t2), seed=0)
assert rep2.overall
assert rep2.conditions["d"]["verdict"] == "not_applicable"
assert rep2.fact3 is not None
print("OK two-inner")

# ======================================================================
# Fermat quartic over F9, outer configuration
KQ = K
FQ = TriPoly(KQ, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})
CF = validate_curve(FQ, KQ)

d1 = ProjMap(KQ, (3, 0, 0, 0, 1, 0, 0, 0, 1))
d2 = ProjMap(KQ, (1, 0, 0, 0, 3, 0, 0, 0, 1))
H1 = group_closure((d1,), CF)
H2 = group_closure((d2,), CF)
assert H1.order == 4 and H2.order == 4

Q = point_from_codes(CF, (1, 5, 0))

# enumerate the full linear automorphism group from hints
perm = ProjMap(KQ, (0, 1, 0, 0, 0, 1, 1, 0, 0))
mix = ProjMap(KQ, (4, 5, 0, 5, 4, 0, 0, 0, 1))
t0 = time.time()
AUT = ga.enumerate_linear_automorphisms(CF, hints=(d1, d2, perm, mix))
print("enumerate:", time.time() - t0, "s")
assert AUT.order == 6048, AUT.order

target, _ = normalize_point(KQ, (1, 1, 0))
carrier = None
for M in AUT.elements:
    img, _ = normalize_point(KQ, M.apply((1, 0, 0)))
    if img == target:
        carrier = M
        break
assert carrier is not None
H3 = H1.conjugate(carrier)
assert H3.order == 4

tq = RatFunc(CF, TriPoly.variable(KQ, 1), TriPoly.variable(KQ, 2))

t0 = time.time()
repo = ga.check_three_outer(CF, (H1, H2, H3), Q, (tq, None, None), seed=0)
print("check_three_outer:", time.time() - t0, "s")
assert repo.overall, repo.to_json()
DQ = repo.divisor
assert DQ.degree() == 4
assert all(p.codes[2] == 0 for p in DQ.support()), [p.codes for p in DQ.support()]
print("outer D support:", sorted(p.codes for p in DQ.support()))

t0 = time.time()
cono = ga.construct_three_outer(CF, (H1, H2, H3), Q, (tq, None, None), seed=0)
print("construct_three_outer:", time.time() - t0, "s")
mo = cono.model
assert mo is not None and mo.degree == 4 and mo.birational
print("outer phi:", dict(mo.phi.terms))
print("outer marks:", mo.marks)
print("outer q_image:", cono.q_image)
assert dict(mo.phi.terms) == {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1}
assert mo.marks[0] == (0, 1, 0) and mo.marks[1] == (1, 0, 0)
assert all(c[2] == 0 for c in mo.marks)
assert not mo.marks_on_curve
assert cono.q_image[2] == 0
assert all((not c.on_curve) and c.positive and c.degree == 4 for c in cono.certificates)
co1 = cono.to_json()
co2 = ga.construct_three_outer(CF, (H1, H2, H3), Q, (tq, None, None), seed=0).to_json()
assert co1 == co2
print("OK outer check+construct")

t0 = time.time()
eqo = ga.uniqueness_compare(CF, "three-outer", (H1, H2, H3), q_point=Q,
                            invariants=(tq, None, None), seed_a=1, seed_b=2)
print("uniqueness outer:", time.time() - t0, "s")
assert eqo.matrix is not None
print("OK uniqueness outer")

tro = ga.generic_fiber_orbit_test(tq, H1, 10, seed=0)
assert tro.verdict, tro.to_json()
print("OK outer oracle")

rep2o = ga.check_two_outer(CF, (H1, H2), Q, (tq, None), seed=0)
assert rep2o.overall
assert rep2o.conditions["d"]["verdict"] == "not_applicable"
print("OK two-outer")

print("ALL GALOIS SMOKE OK", time.time() - t00, "s")
