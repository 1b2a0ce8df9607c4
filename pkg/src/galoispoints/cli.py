"""Command dispatch over scenario files and certificate verification.

Commands check, construct, extend, equiv, and oracle load a scenario,
run the matching engine, print a summary, and optionally write a
certificate.  verify re-checks every identity embedded in a certificate
file without repeating any search.  Exit codes: 0 criteria hold, 1
criteria refuted or certificate inconsistent, 2 invalid input, 3 tool
limitation.
"""

import argparse
import sys

from . import galois as engines
from .action import (
    ProjMap,
    RatFunc,
    function_degree,
    group_closure,
    invariant_generator,
    is_invariant,
    orbit_and_stabilizer,
    orbit_sum,
    pullback,
    _fiber_divisor,
)
from .algebra.field import build_field
from .algebra.tripoly import TriPoly
from .curve import Divisor, point_from_codes, normalize_point, validate_curve
from .errors import GaloisPointsError, HardFailure, InputError, ToolLimitError
from .galois import _one_function
from .linsys import EmbeddingModel, _cleared_identity, image_point, span_coefficients
from .scenario import load_scenario
from .serialize import read_json, stable_dumps, write_json

SCHEMA_VERSION = 1


def _base_kind(task):
    if task.kind == "extend":
        return "three-inner"
    if task.kind == "equiv":
        return task.base
    return task.kind


def _envelope(scn, command, seed_obj, payload):
    K = scn.field
    task = scn.task
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "scenario": scn.name,
        "seed": seed_obj,
        "field": {"p": K.p, "modulus": list(K.modulus)},
        "base_field": scn.field_record(),
        "working_extension": scn.working_extension,
        "curve": scn.curve.F.to_json(),
        "task": {
            "kind": task.kind,
            "base": None if task.kind == "oracle" else _base_kind(task),
            "points": [scn.points[n].to_json() for n in task.points],
            "q": scn.points[task.q].to_json() if task.q else None,
            "sigma": task.sigma.to_json() if task.sigma else None,
        },
        "payload": payload,
    }


def _vec(K, code):
    return list(K.decode(code))


def _fmt_point(pj):
    return "(" + " : ".join(str(v) for v in pj) + ")"


def _fmt_report_lines(rep_json):
    cond = rep_json["conditions"]
    lines = []
    verdicts = ["pass" if e["positive"] else "fail" for e in cond["a"]]
    lines.append("condition (a): " + ", ".join(verdicts))
    for name in ("b", "c", "d"):
        entry = cond[name]
        v = entry.get("verdict")
        extra = ""
        if v == "fail":
            w = entry.get("witness")
            if name == "b" and w:
                extra = f" (groups {w['pair']} share a nontrivial element)"
            elif name == "c" and w:
                extra = f" (candidate {w['differs']} differs from {w['first']})"
            elif name == "d":
                extra = f" (dimension {entry.get('dimension', '?')})" if "dimension" in entry else ""
        lines.append(f"condition ({name}): {v}{extra}")
    lines.append(
        "overall: criteria hold" if rep_json["overall"] else "overall: criteria refuted"
    )
    return lines


def _run_check(scn):
    kind = _base_kind(scn.task)
    if kind is None or kind == "oracle":
        raise InputError("UNSUPPORTED_TASK", f"cannot check task kind {scn.task.kind!r}")
    groups = scn.group_list()
    inv = scn.invariant_list()
    if kind == "three-inner":
        rep = engines.check_three_inner(scn.curve, groups, scn.point_list(), inv, seed=scn.seed)
    elif kind == "two-inner":
        rep = engines.check_two_inner(scn.curve, groups, scn.point_list(), inv, seed=scn.seed)
    elif kind == "three-outer":
        rep = engines.check_three_outer(scn.curve, groups, scn.points[scn.task.q], inv, seed=scn.seed)
    else:
        rep = engines.check_two_outer(scn.curve, groups, scn.points[scn.task.q], inv, seed=scn.seed)
    code = 0 if rep.overall else 1
    lines = [f"scenario: {scn.name}  task: {kind}  seed: {scn.seed}"]
    lines.extend(_fmt_report_lines(rep.to_json()))
    return code, lines, _envelope(scn, "check", scn.seed, rep.to_json())


def _run_construct(scn):
    kind = _base_kind(scn.task)
    groups = scn.group_list()
    inv = scn.invariant_list()
    if kind == "three-inner":
        cons = engines.construct_three_inner(scn.curve, groups, scn.point_list(), inv, seed=scn.seed)
    elif kind == "three-outer":
        cons = engines.construct_three_outer(scn.curve, groups, scn.points[scn.task.q], inv, seed=scn.seed)
    else:
        raise InputError(
            "UNSUPPORTED_TASK", f"construction applies to three-point tasks, not {scn.task.kind!r}"
        )
    lines = [f"scenario: {scn.name}  task: construct/{kind}  seed: {scn.seed}"]
    lines.extend(_fmt_report_lines(cons.report.to_json()))
    if cons.model is None:
        code = 1
    else:
        code = 0
        K = scn.field
        m = cons.model
        lines.append(f"image degree: {m.degree}  birational: {'yes' if m.birational else 'no'}")
        marks = ", ".join(_fmt_point([_vec(K, c) for c in mk]) for mk in m.marks)
        lines.append(f"marks on W = 0: {marks}")
        if cons.q_image is not None:
            lines.append(f"common point image: {_fmt_point([_vec(K, c) for c in cons.q_image])}")
    return code, lines, _envelope(scn, "construct", scn.seed, cons.to_json())


def _run_extend(scn):
    if scn.task.kind != "extend":
        raise InputError("UNSUPPORTED_TASK", "extend needs a scenario with task kind 'extend'")
    groups = scn.group_list()
    inv = scn.invariant_list()
    cons, ext = engines.extend_pipeline(
        scn.curve, groups, scn.point_list(), scn.task.sigma, inv, seed=scn.seed
    )
    payload = {
        "construction": cons.to_json(),
        "extension": None if ext is None else ext.to_json(),
    }
    lines = [f"scenario: {scn.name}  task: extend  seed: {scn.seed}"]
    if cons.model is None:
        lines.append("construction refused: underlying criteria refuted")
        code = 1
    elif ext.positive:
        K = scn.field
        rows = [[_vec(K, ext.matrix.rows[3 * r + c]) for c in range(3)] for r in range(3)]
        lines.extend(ext.transcript)
        lines.append(f"extension matrix: {rows}")
        code = 0
    else:
        lines.extend(ext.transcript)
        lines.append("extension refused: a condition fails")
        code = 1
    return code, lines, _envelope(scn, "extend", scn.seed, payload)


def _run_equiv(scn, seed_override):
    base = _base_kind(scn.task)
    if base not in ("three-inner", "three-outer"):
        raise InputError("UNSUPPORTED_TASK", f"equiv applies to three-point tasks, not {scn.task.kind!r}")
    seeds = scn.task.seeds if scn.task.seeds else (1, 2)
    if seed_override is not None:
        seeds = (seed_override, seed_override + 1)
    groups = scn.group_list()
    inv = scn.invariant_list()
    res = engines.uniqueness_compare(
        scn.curve,
        base,
        groups,
        points=scn.point_list() if base == "three-inner" else None,
        q_point=scn.points[scn.task.q] if base == "three-outer" else None,
        invariants=inv,
        seed_a=seeds[0],
        seed_b=seeds[1],
    )
    lines = [f"scenario: {scn.name}  task: equiv/{base}  seeds: {seeds[0]}, {seeds[1]}"]
    if res.matrix is None:
        lines.append("equivalence not attempted: a construction was refused")
        code = 1
    else:
        K = scn.field
        rows = [[_vec(K, res.matrix.rows[3 * r + c]) for c in range(3)] for r in range(3)]
        lines.append(f"projective equivalence: {rows}")
        code = 0
    return code, lines, _envelope(scn, "equiv", {"a": seeds[0], "b": seeds[1]}, res.to_json())


def _run_oracle(scn):
    names = scn.task.groups
    if not names:
        raise InputError("UNSUPPORTED_TASK", "oracle needs at least one group in the task")
    trials = scn.task.trials if scn.task.trials else 10
    items = []
    all_ok = True
    lines = [f"scenario: {scn.name}  task: oracle  trials: {trials}  seed: {scn.seed}"]
    for name in names:
        G = scn.groups[name]
        t = scn.invariants.get(name)
        if t is None:
            t = invariant_generator(G, seed=scn.seed)
        tr = engines.generic_fiber_orbit_test(t, G, trials, seed=scn.seed)
        all_ok = all_ok and tr.verdict
        items.append({
            "group": name,
            "order": G.order,
            "generators": [g.to_json() for g in G.generators],
            "invariant": t.to_json(),
            "transcript": tr.to_json(),
        })
        word = "transitive on sampled fibers" if tr.verdict else f"refuted ({tr.reason})"
        lines.append(f"group {name} (order {G.order}): {word}")
    lines.append("oracle verdict: " + ("agrees" if all_ok else "refutes"))
    payload = {"trials": trials, "oracles": items}
    return (0 if all_ok else 1), lines, _envelope(scn, "oracle", scn.seed, payload)


# ---------------------------------------------------------------------------
# certificate verification: identity re-checking only, no search


class _VerifyError(Exception):
    pass


def _vassert(cond, msg):
    if not cond:
        raise _VerifyError(msg)


def _point_codes(K, pj):
    _vassert(isinstance(pj, list) and len(pj) == 3, "malformed point coordinates")
    return tuple(K.encode(tuple(v)) for v in pj)


def _divisor_from_json(C, dj):
    mult = {}
    for item in dj:
        pj, m = item
        P = point_from_codes(C, _point_codes(C.field, pj))
        mult[P] = mult.get(P, 0) + int(m)
    return Divisor(mult)


def _group_from_json(C, entry):
    gens = tuple(ProjMap.from_json(C.field, g) for g in entry["generators"])
    G = group_closure(gens, C, cap=max(int(entry["order"]), 1))
    _vassert(G.order == entry["order"], "group closure order differs from its claim")
    return G


def _verify_quotient_entry(C, entry):
    G = _group_from_json(C, entry)
    t = RatFunc.from_json(C, entry["invariant"])
    if entry["positive"]:
        _vassert(is_invariant(t, G), "claimed invariant moves under the group")
        d = function_degree(t)
        _vassert(d == entry["degree"] == G.order, "claimed function degree is wrong")
    elif entry.get("witness") is not None:
        M = ProjMap.from_json(C.field, entry["witness"])
        _vassert(G.contains(M), "invariance witness is outside the group")
        _vassert(pullback(M, t) != t, "invariance witness does not move the function")
    else:
        d = function_degree(t)
        _vassert(d == entry["degree"] and d != G.order, "degree refutation does not hold")
    return G, t


def _verify_pairwise_entry(groups, entry):
    sizes = {tuple(p["pair"]): p["size"] for p in entry["pairs"]}
    ok = True
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            size = len(groups[i].rows_set & groups[j].rows_set)
            _vassert(sizes.get((i + 1, j + 1)) == size, f"intersection size of pair ({i + 1},{j + 1}) differs")
            ok = ok and size == 1
    _vassert((entry["verdict"] == "pass") == ok, "pairwise verdict inconsistent with sizes")
    if entry["verdict"] == "fail":
        w = entry["witness"]
        _vassert(w is not None, "pairwise failure lacks a witness")
        M = ProjMap.from_json(groups[0].curve.field, w["element"])
        i, j = w["pair"]
        _vassert(
            groups[i - 1].contains(M) and groups[j - 1].contains(M) and not M.is_identity(),
            "pairwise witness is not a shared nontrivial element",
        )


def _verify_common_entry(C, groups, points, q, entry, inner):
    cands = {}
    for item in entry["candidates"]:
        cands[tuple(item["pair"])] = _divisor_from_json(C, item["divisor"])
    n = len(groups)
    if inner:
        expected = {(i + 1, j + 1) for i in range(n) for j in range(n) if i != j}
        _vassert(set(cands) == expected, "candidate pair set differs")
        for (i, j), D in cands.items():
            own = Divisor({points[i - 1]: 1}) + orbit_sum(groups[i - 1], points[j - 1])
            _vassert(own == D, f"candidate ({i},{j}) divisor does not recompute")
    else:
        expected = {(i + 1,) for i in range(n)}
        _vassert(set(cands) == expected, "candidate index set differs")
        for (i,), D in cands.items():
            _vassert(orbit_sum(groups[i - 1], q) == D, f"candidate ({i},) divisor does not recompute")
    base = cands[(1, 2) if inner else (1,)]
    all_equal = all(D == base for D in cands.values())
    if entry["verdict"] == "pass":
        _vassert(all_equal, "claimed common divisor is not common")
        D = _divisor_from_json(C, entry["divisor"])
        _vassert(D == base, "embedded common divisor differs from the candidates")
        return D
    _vassert(not all_equal, "failure claimed but all candidates agree")
    w = entry["witness"]
    _vassert(w is not None, "common-divisor failure lacks a witness")
    _vassert(
        cands[tuple(w["first"])] != cands[tuple(w["differs"])],
        "witnessed candidate pair does not differ",
    )
    return None


def _verify_span_entry(C, entry, ts, points, inner):
    if entry.get("reason") == "DEGENERATE_PROJECTION":
        n = len(points)
        degenerate = any(
            ts[i].value_at(points[i]) == ts[i].value_at(points[(i + 1) % n])
            for i in range(n)
        )
        _vassert(degenerate, "claimed projection degeneracy does not recompute")
        return None
    fj = entry["functions"]
    f = RatFunc.from_json(C, fj["f"])
    g = RatFunc.from_json(C, fj["g"])
    h = RatFunc.from_json(C, fj["h"])
    one = _one_function(C)
    span = entry["span"]
    if entry["verdict"] == "pass":
        _vassert("coefficients" in span, "positive span entry lacks coefficients")
        coeffs = [C.field.encode(tuple(v)) for v in span["coefficients"]]
        _vassert(len(coeffs) == 3, "span coefficient count differs")
        _vassert(
            _cleared_identity(C, h, [one, f, g], coeffs).is_zero(),
            "span identity fails modulo the curve",
        )
        _vassert(entry["dimension"] <= 3, "span dimension claim inconsistent")
    else:
        cert = span_coefficients(h, [one, f, g])
        _vassert(not cert.found, "negative span entry but membership holds")
    return f, g, h, span.get("coefficients")


def _verify_check_payload(C, task_echo, payload):
    K = C.field
    kind = payload["kind"]
    inner = kind.endswith("inner")
    n = 3 if kind.startswith("three") else 2
    cond = payload["conditions"]
    _vassert(len(cond["a"]) == n, "per-group certificate count differs")
    points = ()
    q = None
    if inner:
        _vassert(len(task_echo["points"]) >= n, "task echo lacks the marked points")
        points = tuple(
            point_from_codes(C, _point_codes(K, pj)) for pj in task_echo["points"][:n]
        )
    else:
        _vassert(task_echo.get("q") is not None, "task echo lacks the common point")
        q = point_from_codes(C, _point_codes(K, task_echo["q"]))

    groups = []
    ts = []
    for e in cond["a"]:
        G, t = _verify_quotient_entry(C, e)
        groups.append(G)
        ts.append(t)
    a_ok = all(e["positive"] for e in cond["a"])

    b = cond["b"]
    if a_ok:
        _vassert(b.get("verdict") in ("pass", "fail"), "condition (b) missing after positive (a)")
        _verify_pairwise_entry(groups, b)
    else:
        _vassert(b.get("verdict") == "skipped", "condition (b) should be skipped")
    b_ok = a_ok and b.get("verdict") == "pass"

    c = cond["c"]
    D = None
    if b_ok:
        _vassert(c.get("verdict") in ("pass", "fail"), "condition (c) missing after positive (b)")
        D = _verify_common_entry(C, groups, points, q, c, inner)
    else:
        _vassert(c.get("verdict") == "skipped", "condition (c) should be skipped")
    c_ok = b_ok and c.get("verdict") == "pass"

    d = cond["d"]
    span_data = None
    if n == 2:
        _vassert(d.get("verdict") == "not_applicable", "two-point span verdict out of place")
        overall = c_ok
        if inner and c_ok:
            # a shared fiber still blocks the projection pair
            degenerate = any(
                ts[i].value_at(points[i]) == ts[i].value_at(points[(i + 1) % n])
                for i in range(n)
            )
            overall = not degenerate
    else:
        if c_ok:
            _vassert(d.get("verdict") in ("pass", "fail"), "condition (d) missing after positive (c)")
            span_data = _verify_span_entry(C, d, ts, points, inner)
            d_ok = d.get("verdict") == "pass"
        else:
            _vassert(d.get("verdict") == "skipped", "condition (d) should be skipped")
            d_ok = False
        overall = c_ok and d_ok
    _vassert(payload["overall"] == overall, "overall verdict inconsistent with conditions")

    if payload.get("fact3") is not None:
        _vassert(overall and inner, "transversality payload out of place")
        f3 = payload["fact3"]
        _vassert(f3["degree"] == groups[0].order + 1, "transversality degree differs")
        for i, P in enumerate(points):
            _vassert(D.mult.get(P, 0) == 1 == f3["chord_multiplicities"][i], "chord multiplicity differs")
        for item in f3["orbit_avoidance"]:
            i, j = item["pair"]
            orbit, _ = orbit_and_stabilizer(groups[i - 1], points[i - 1])
            hit = any(P.codes == points[j - 1].codes for P in orbit)
            _vassert(item["disjoint"] == (not hit) and not hit, "orbit avoidance differs")
    elif payload["overall"] and inner:
        raise _VerifyError("positive inner report lacks the transversality payload")
    return groups, ts, points, q, D, span_data


def _third_from_coeffs(K, coeff_vecs):
    c0, c1, c2 = [K.encode(tuple(v)) for v in coeff_vecs]
    codes, _ = normalize_point(K, (K.neg(c2), c1, 0))
    return codes


def _verify_construct_payload(C, task_echo, payload):
    K = C.field
    kind = payload["kind"]
    inner = kind.endswith("inner")
    rep = payload["report"]
    groups, ts, points, q, D, span_data = _verify_check_payload(C, task_echo, rep)
    if not rep["overall"]:
        _vassert(payload["model"] is None, "model present despite a refuted report")
        _vassert(payload["certificates"] == [], "certificates present despite a refuted report")
        return None
    _vassert(payload["model"] is not None, "positive report without a model")
    model = EmbeddingModel.from_json(C, payload["model"])
    order = groups[0].order
    want = order + 1 if inner else order
    _vassert(model.degree == want, "image degree differs from the group order law")
    _vassert(model.birational, "image model not flagged birational")
    _vassert(span_data is not None and span_data[3] is not None, "span coefficients missing")
    third = _third_from_coeffs(K, span_data[3])
    _vassert(model.marks == ((0, 1, 0), (1, 0, 0), third), "marks differ from the forced positions")
    if inner:
        imgs = tuple(image_point(model, P) for P in points)
        _vassert(imgs == model.marks, "marked points do not map to the marks")
    else:
        for mk in model.marks:
            _vassert(model.phi.eval(mk) != 0, "outer center lies on the image curve")
        qi = tuple(K.encode(tuple(v)) for v in payload["q_image"])
        _vassert(qi[2] == 0, "common point image left the line of centers")
        _vassert(model.phi.eval(qi) == 0, "common point image misses the image curve")
        _vassert(image_point(model, q) == qi, "common point image does not recompute")
    certs = payload["certificates"]
    _vassert(len(certs) == 3, "expected one certificate per center")
    for i, entry in enumerate(certs):
        _vassert(entry["positive"], "construction carries a negative certificate")
        _vassert(entry["on_curve"] == inner, "certificate curve-membership flag differs")
        _vassert(entry["order"] == groups[i].order, "certificate order differs")
        center = tuple(K.encode(tuple(v)) for v in entry["center"])
        _vassert(center == model.marks[i], "certificate center differs from its mark")
        Gr = _group_from_json(C, entry)
        _vassert(Gr.rows_set == groups[i].rows_set, "certificate group differs")
    return model


def _verify_extend_payload(C, task_echo, payload):
    K = C.field
    cons = payload["construction"]
    model = _verify_construct_payload(C, task_echo, cons)
    ext = payload["extension"]
    if model is None:
        _vassert(ext is None, "extension present despite a refused construction")
        return
    _vassert(ext is not None, "extension payload missing")
    _vassert(task_echo.get("sigma") is not None, "task echo lacks sigma")
    sigma = ProjMap.from_json(K, task_echo["sigma"])
    points = tuple(
        point_from_codes(C, _point_codes(K, pj)) for pj in task_echo["points"][:3]
    )
    rep = cons["report"]
    groups = [_group_from_json(C, e) for e in rep["conditions"]["a"]]
    _vassert(groups[0].contains(sigma), "sigma is outside the first group")
    _vassert(sigma.apply_point(points[1]) == points[2], "sigma does not carry the second point to the third")

    conds = ext["conditions"]
    a_ok = sigma.apply_point(points[0]) == points[0]
    _vassert((conds["a"]["verdict"] == "pass") == a_ok, "extension condition (a) differs")

    G3_entry = conds["b"]
    G3 = _group_from_json(C, G3_entry)
    _vassert(G3.rows_set == groups[2].rows_set, "third group differs between payloads")
    t3 = RatFunc.from_json(C, G3_entry["invariant"])
    b_ok = G3_entry["positive"]
    if b_ok:
        _vassert(is_invariant(t3, G3), "third invariant moves under its group")
        _vassert(function_degree(t3) == G3.order, "third invariant degree differs")
    _vassert((G3_entry["verdict"] == "pass") == b_ok, "extension condition (b) differs")

    lhs = _divisor_from_json(C, conds["c"]["lhs"])
    rhs = _divisor_from_json(C, conds["c"]["rhs"])
    own_lhs = pullback(sigma, Divisor({points[2]: 1}) + orbit_sum(groups[2], points[2]))
    own_rhs = Divisor({points[1]: 1}) + orbit_sum(groups[1], points[1])
    _vassert(own_lhs == lhs and own_rhs == rhs, "extension divisors do not recompute")
    c_ok = lhs == rhs
    _vassert((conds["c"]["verdict"] == "pass") == c_ok, "extension condition (c) differs")

    fast = ext["fast_path"]
    flags = [engines.is_total_inflection(groups[i], points[i]) for i in range(3)]
    _vassert(fast["per_point"] == flags, "total-inflection flags differ")
    _vassert(fast["applicable"] == all(flags), "fast-path applicability differs")
    if fast["applicable"]:
        _vassert(fast["agrees"] == (a_ok and b_ok and c_ok), "fast-path agreement differs")

    positive = a_ok and b_ok and c_ok
    if positive:
        _vassert(ext["matrix"] is not None, "positive extension without a matrix")
        tilde = ProjMap.from_json(K, ext["matrix"])
        a, b, c = model.forms
        lhs_forms = tuple(T.substitute_linear(sigma.rows) for T in (a, b, c))
        forms = (a, b, c)
        rhs_forms = []
        for r in range(3):
            acc = TriPoly.zero(K)
            for col in range(3):
                coef = tilde.rows[3 * r + col]
                if coef:
                    acc = acc + forms[col].scale(coef)
            rhs_forms.append(acc)
        for r, s in ((0, 1), (0, 2), (1, 2)):
            _vassert(
                C.reducer.reduce(lhs_forms[r] * rhs_forms[s] - lhs_forms[s] * rhs_forms[r]).is_zero(),
                "extension matrix fails the compatibility identity",
            )
    else:
        _vassert(ext["matrix"] is None, "matrix present despite a failing condition")


def _marks_with_line_point(K, model, cons_payload):
    marks = list(model.marks)
    if cons_payload.get("q_image") is not None:
        marks.append(tuple(K.encode(tuple(v)) for v in cons_payload["q_image"]))
    return marks


def _verify_equiv_payload(C, task_echo, payload):
    K = C.field
    first = _verify_construct_payload(C, task_echo, payload["first"])
    second = _verify_construct_payload(C, task_echo, payload["second"])
    if payload["matrix"] is None:
        _vassert(first is None or second is None, "missing matrix despite two models")
        return
    _vassert(first is not None and second is not None, "matrix present without two models")
    M = ProjMap.from_json(K, payload["matrix"])
    phi_a, phi_b = first.phi, second.phi
    G = phi_b.substitute_linear(M.rows)
    lead = phi_a.lead_key()
    c = K.div(G.terms.get(lead, 0), phi_a.lead_code())
    _vassert(c != 0 and G == phi_a.scale(c), "equivalence proportionality identity fails")
    marks_a = [tuple(K.encode(tuple(v)) for v in m) for m in payload["marks_a"]]
    marks_b = [tuple(K.encode(tuple(v)) for v in m) for m in payload["marks_b"]]
    _vassert(marks_a == _marks_with_line_point(K, first, payload["first"]),
             "first mark list detached from its model")
    _vassert(marks_b == _marks_with_line_point(K, second, payload["second"]),
             "second mark list detached from its model")
    # the matrix may realize any injective assignment between the mark sets
    imgs = []
    for ma in marks_a:
        img, _ = normalize_point(K, M.apply(ma))
        imgs.append(img)
    wanted = []
    for mb in marks_b:
        nb, _ = normalize_point(K, mb)
        wanted.append(nb)
    _vassert(
        len(set(imgs)) == len(imgs) and sorted(imgs) == sorted(wanted),
        "equivalence does not carry the marks onto the marks",
    )


def _verify_oracle_payload(C, payload):
    K = C.field
    for item in payload["oracles"]:
        G = _group_from_json(C, item)
        t = RatFunc.from_json(C, item["invariant"])
        tr = item["transcript"]
        degree = function_degree(t)
        _vassert(degree == tr["degree"], "oracle degree claim differs")
        _vassert(tr["order"] == G.order, "oracle order claim differs")
        if tr["reason"] == "degree_mismatch":
            _vassert(degree != G.order and tr["verdict"] is False, "degree-mismatch claim inconsistent")
            continue
        _vassert(degree == G.order, "oracle ran despite a degree mismatch")
        seen_bad = False
        for entry in tr["entries"]:
            lam = K.encode(tuple(entry["lambda"]))
            fib = _fiber_divisor(t, ("finite", lam))
            _vassert(
                _divisor_from_json(C, entry["fiber"]) == fib,
                "oracle fiber does not recompute",
            )
            items = fib.items_sorted()
            _vassert(
                fib.degree() == degree and all(m == 1 for _, m in items),
                "oracle fiber is not squarefree of full degree",
            )
            pts = [P for P, _ in items]
            orbit, _ = orbit_and_stabilizer(G, pts[0])
            ok = len(orbit) == G.order and {P.codes for P in orbit} == {P.codes for P in pts}
            _vassert(entry["ok"] == ok, "oracle orbit flag differs")
            _vassert(entry["orbit_size"] == len(orbit), "oracle orbit size differs")
            seen_bad = seen_bad or not ok
        if tr["verdict"]:
            _vassert(not seen_bad, "positive oracle verdict with a failing entry")
        else:
            _vassert(seen_bad, "negative oracle verdict without a failing entry")


def verify_certificate(obj):
    """Re-checks every identity a certificate claims.  Returns (ok, detail)."""
    try:
        _vassert(isinstance(obj, dict), "certificate is not an object")
        _vassert(obj.get("schema_version") == SCHEMA_VERSION, "unknown schema version")
        field = obj["field"]
        K = build_field(int(field["p"]), tuple(field["modulus"]))
        C = validate_curve(TriPoly.from_json(K, obj["curve"]), K)
        cmd = obj["command"]
        payload = obj["payload"]
        task = obj.get("task", {})
        if cmd == "check":
            _verify_check_payload(C, task, payload)
        elif cmd == "construct":
            _verify_construct_payload(C, task, payload)
        elif cmd == "extend":
            _verify_extend_payload(C, task, payload)
        elif cmd == "equiv":
            _verify_equiv_payload(C, task, payload)
        elif cmd == "oracle":
            _verify_oracle_payload(C, payload)
        else:
            raise _VerifyError(f"unknown command {cmd!r}")
    except _VerifyError as exc:
        return False, str(exc)
    except GaloisPointsError as exc:
        return False, str(exc)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return False, f"malformed certificate: {exc!r}"
    return True, "certificate verified"


# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="galoispoints",
        description="Criteria, constructions, and certificates for collinear Galois points of plane curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "decide the collinearity criteria for a scenario",
        "construct": "build the plane model realizing a positive scenario",
        "extend": "decide linear extendability and build the matrix",
        "equiv": "construct twice under two seeds and certify an equivalence",
        "oracle": "independent fiber-transitivity check of the Galois property",
    }
    for cmd, text in helps.items():
        p = sub.add_parser(cmd, help=text)
        p.add_argument("scenario", help="path to a scenario file")
        p.add_argument("--cert", metavar="PATH", help="write a certificate file")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--working-ext", type=int, default=None, dest="working_ext",
                       help="override the working extension degree")
        p.add_argument("--cap", type=int, default=None, help="override the closure cap")
        p.add_argument("--json", action="store_true", help="print the certificate JSON instead of a summary")
    v = sub.add_parser("verify", help="re-check all identities embedded in a certificate")
    v.add_argument("--cert", metavar="PATH", required=True, help="certificate file to verify")
    v.add_argument("--json", action="store_true", help="print a JSON verdict")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            obj = read_json(args.cert)
            ok, detail = verify_certificate(obj)
            if args.json:
                sys.stdout.write(stable_dumps({"verified": ok, "detail": detail}))
            else:
                print(("verified: " if ok else "verification failed: ") + detail)
            return 0 if ok else 1
        scn = load_scenario(
            args.scenario, seed=args.seed, working_ext=args.working_ext, cap=args.cap
        )
        if args.command == "check":
            code, lines, cert = _run_check(scn)
        elif args.command == "construct":
            code, lines, cert = _run_construct(scn)
        elif args.command == "extend":
            code, lines, cert = _run_extend(scn)
        elif args.command == "equiv":
            code, lines, cert = _run_equiv(scn, args.seed)
        else:
            code, lines, cert = _run_oracle(scn)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except HardFailure as exc:
        print(f"hard failure: {exc}", file=sys.stderr)
        return 2
    except ToolLimitError as exc:
        print(f"tool limit: {exc}", file=sys.stderr)
        return 3
    if args.json:
        sys.stdout.write(stable_dumps(cert))
    else:
        for line in lines:
            print(line)
    if args.cert:
        write_json(args.cert, cert)
    return code


if __name__ == "__main__":
    sys.exit(main())
