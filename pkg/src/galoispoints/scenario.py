"""Scenario files: a field, a curve, named points and groups, and a task.

Field elements appear as coefficient vectors over the prime field and
matrices are row-major, so files are writable by hand and parseable
anywhere.  Loading resolves every reference: groups close from their
generators or arise by conjugation, points are validated on the curve by
name, and an optional working extension lifts all data coherently.
"""

from .action import ProjMap, RatFunc, group_closure, CLOSURE_CAP_DEFAULT
from .algebra.field import build_field
from .algebra.tripoly import TriPoly
from .curve import _extension, normalize_point, point_from_codes, validate_curve
from .errors import InputError
from .galois import enumerate_linear_automorphisms
from .linsys import EQUIV_ENUM_CAP
from .serialize import read_json

TASK_KINDS = (
    "two-inner",
    "two-outer",
    "three-inner",
    "three-outer",
    "extend",
    "equiv",
    "oracle",
)

_INNER_ARITY = {"two-inner": 2, "three-inner": 3, "extend": 3}
_OUTER_ARITY = {"two-outer": 2, "three-outer": 3}


def _fail(msg):
    raise InputError("PARSE_ERROR", msg)


def _expect(obj, key, kind, where):
    if key not in obj:
        _fail(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        _fail(f"{where}: key {key!r} has the wrong shape")
    return val


class Task:
    __slots__ = ("kind", "base", "groups", "points", "q", "sigma", "seeds", "trials")

    def __init__(self, kind, base, groups, points, q, sigma, seeds, trials):
        self.kind = kind
        self.base = base
        self.groups = groups
        self.points = points
        self.q = q
        self.sigma = sigma
        self.seeds = seeds
        self.trials = trials


class Scenario:
    """Fully resolved scenario: every name maps to a live object."""

    __slots__ = (
        "name",
        "base_field",
        "field",
        "working_extension",
        "curve",
        "points",
        "groups",
        "invariants",
        "task",
        "seed",
        "caps",
    )

    def __init__(self, name, base_field, field, working_extension, curve,
                 points, groups, invariants, task, seed, caps):
        self.name = name
        self.base_field = base_field
        self.field = field
        self.working_extension = working_extension
        self.curve = curve
        self.points = points
        self.groups = groups
        self.invariants = invariants
        self.task = task
        self.seed = seed
        self.caps = caps

    def group_list(self):
        return tuple(self.groups[n] for n in self.task.groups)

    def point_list(self):
        return tuple(self.points[n] for n in self.task.points)

    def invariant_list(self):
        return [self.invariants.get(n) for n in self.task.groups]

    def field_record(self):
        K = self.base_field
        return {"p": K.p, "modulus": list(K.modulus)}


def _parse_vector(vec, where):
    if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
        _fail(f"{where}: expected a coefficient vector of integers")
    return vec


def _parse_code(K0, lift, vec, where):
    _parse_vector(vec, where)
    try:
        el = K0.element(vec)
    except InputError as exc:
        raise InputError(exc.code, f"{where}: {exc.message}") from None
    return lift(el.code)


def _parse_matrix(K0, lift, obj, where):
    if not isinstance(obj, list) or len(obj) != 3:
        _fail(f"{where}: expected three matrix rows")
    flat = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != 3:
            _fail(f"{where}: row {r} must have three entries")
        for c, vec in enumerate(row):
            flat.append(_parse_code(K0, lift, vec, f"{where}[{r}][{c}]"))
    return tuple(flat)


def _parse_triple(K0, lift, obj, where):
    if not isinstance(obj, list) or len(obj) != 3:
        _fail(f"{where}: expected three coordinates")
    return tuple(_parse_code(K0, lift, v, f"{where}[{k}]") for k, v in enumerate(obj))


def _parse_poly(K0, emb, obj, where):
    if not isinstance(obj, list):
        _fail(f"{where}: expected a term list")
    try:
        poly = TriPoly.from_json(K0, obj)
    except InputError as exc:
        raise InputError(exc.code, f"{where}: {exc.message}") from None
    return poly.map_field(emb)


def _resolve_groups(specs, C, K0, lift, cap):
    if not isinstance(specs, dict):
        _fail("groups: expected a name-to-spec table")
    K = C.field
    resolved = {}
    progress = True
    while progress:
        progress = False
        for name, spec in specs.items():
            if name in resolved:
                continue
            if not isinstance(spec, dict):
                _fail(f"groups.{name}: expected an object")
            if "generators" in spec:
                gens = tuple(
                    ProjMap(K, _parse_matrix(K0, lift, m, f"groups.{name}.generators[{i}]"))
                    for i, m in enumerate(_expect(spec, "generators", list, f"groups.{name}"))
                )
                resolved[name] = group_closure(gens, C, cap=cap)
                progress = True
            elif "conjugate_of" in spec:
                ref = spec["conjugate_of"]
                if ref not in specs:
                    raise InputError(
                        "UNRESOLVED_REFERENCE",
                        f"groups.{name}: unknown group {ref!r}",
                    )
                if ref not in resolved:
                    continue
                if "by" in spec:
                    M = ProjMap(K, _parse_matrix(K0, lift, spec["by"], f"groups.{name}.by"))
                elif "by_automorphism_sending" in spec:
                    want = spec["by_automorphism_sending"]
                    frm = _parse_triple(K0, lift, _expect(want, "from", list, f"groups.{name}"),
                                        f"groups.{name}.from")
                    to = _parse_triple(K0, lift, _expect(want, "to", list, f"groups.{name}"),
                                       f"groups.{name}.to")
                    frm, _ = normalize_point(K, frm)
                    to, _ = normalize_point(K, to)
                    hints = tuple(
                        ProjMap(K, _parse_matrix(K0, lift, m, f"groups.{name}.search_hints[{i}]"))
                        for i, m in enumerate(spec.get("search_hints", []))
                    )
                    aut = enumerate_linear_automorphisms(C, hints=hints or None, cap=cap)
                    M = None
                    for cand in aut.elements:
                        img, _ = normalize_point(K, cand.apply(frm))
                        if img == to:
                            M = cand
                            break
                    if M is None:
                        raise InputError(
                            "AUTOMORPHISM_NOT_FOUND",
                            f"groups.{name}: no enumerated automorphism sends the source point to the target",
                        )
                else:
                    _fail(f"groups.{name}: conjugate_of needs 'by' or 'by_automorphism_sending'")
                resolved[name] = resolved[ref].conjugate(M)
                progress = True
            else:
                _fail(f"groups.{name}: need 'generators' or 'conjugate_of'")
    missing = sorted(set(specs) - set(resolved))
    if missing:
        raise InputError(
            "UNRESOLVED_REFERENCE",
            f"groups {missing} cannot be resolved (cycle or missing base)",
        )
    return resolved


def _parse_task(obj, groups, points, K0, lift, K):
    if not isinstance(obj, dict):
        _fail("task: expected an object")
    kind = _expect(obj, "kind", str, "task")
    if kind not in TASK_KINDS:
        _fail(f"task: unknown kind {kind!r}")
    base = obj.get("base", kind)
    if kind == "equiv":
        if base not in ("three-inner", "three-outer"):
            _fail("task: equiv needs base 'three-inner' or 'three-outer'")
    elif kind == "oracle":
        base = None

    def names(key, count=None):
        vals = _expect(obj, key, list, "task")
        if count is not None and len(vals) != count:
            _fail(f"task: {key} must list exactly {count} names")
        for v in vals:
            table = groups if key == "groups" else points
            if v not in table:
                raise InputError(
                    "UNRESOLVED_REFERENCE", f"task: unknown {key[:-1]} {v!r}"
                )
        return tuple(vals)

    group_names = ()
    point_names = ()
    q_name = None
    sigma = None
    seeds = None
    trials = None

    probe = base if kind in ("equiv",) else kind
    if kind == "oracle":
        group_names = names("groups")
        if not group_names:
            _fail("task: oracle needs at least one group")
        trials = obj.get("trials", 10)
        if not isinstance(trials, int) or trials < 1:
            _fail("task: trials must be a positive integer")
    elif probe in _INNER_ARITY:
        n = _INNER_ARITY[probe]
        group_names = names("groups", n)
        point_names = names("points", n)
    elif probe in _OUTER_ARITY:
        n = _OUTER_ARITY[probe]
        group_names = names("groups", n)
        q_name = _expect(obj, "q", str, "task")
        if q_name not in points:
            raise InputError("UNRESOLVED_REFERENCE", f"task: unknown point {q_name!r}")
    if kind == "extend":
        sigma = ProjMap(K, _parse_matrix(K0, lift, _expect(obj, "sigma", list, "task"), "task.sigma"))
    if kind == "equiv" or "seeds" in obj:
        seeds = obj.get("seeds", [1, 2])
        if (not isinstance(seeds, list) or len(seeds) != 2
                or not all(isinstance(s, int) for s in seeds)):
            _fail("task: seeds must be a pair of integers")
        seeds = tuple(seeds)
    return Task(kind, base, group_names, point_names, q_name, sigma, seeds, trials)


def build_scenario(obj, seed=None, working_ext=None, cap=None):
    """Validates and resolves a parsed scenario object."""
    if not isinstance(obj, dict):
        _fail("scenario: expected a JSON object")
    name = obj.get("name", "unnamed")
    fs = _expect(obj, "field", dict, "scenario")
    p = _expect(fs, "p", int, "field")
    modulus = _expect(fs, "modulus", list, "field")
    K0 = build_field(p, tuple(modulus))

    ext = obj.get("working_extension", 1)
    if working_ext is not None:
        ext = working_ext
    if not isinstance(ext, int) or ext < 1:
        _fail("scenario: working_extension must be a positive integer")

    caps = obj.get("caps", {})
    if not isinstance(caps, dict):
        _fail("scenario: caps must be an object")
    closure_cap = caps.get("closure", CLOSURE_CAP_DEFAULT)
    equiv_cap = caps.get("equiv", EQUIV_ENUM_CAP)
    if cap is not None:
        closure_cap = cap

    F0 = _parse_poly(K0, K0.embed_into(K0), _expect(obj, "curve", list, "scenario"), "curve")
    C0 = validate_curve(F0, K0)
    if ext > 1:
        K, emb = _extension(K0, ext)
        C = C0.base_change(K)
    else:
        K = K0
        emb = K0.embed_into(K0)
        C = C0
    lift = emb

    points = {}
    for pname, triple in _expect(obj, "points", dict, "scenario").items():
        codes = _parse_triple(K0, lift, triple, f"points.{pname}")
        codes, _ = normalize_point(K, codes)
        try:
            points[pname] = point_from_codes(C, codes)
        except InputError as exc:
            raise InputError(
                exc.code, f"point {pname!r}: {exc.message}"
            ) from None

    groups = _resolve_groups(_expect(obj, "groups", dict, "scenario"), C, K0, lift, closure_cap)

    invariants = {}
    for gname, spec in obj.get("invariants", {}).items():
        if gname not in groups:
            raise InputError(
                "UNRESOLVED_REFERENCE", f"invariants: unknown group {gname!r}"
            )
        if not isinstance(spec, dict) or "num" not in spec or "den" not in spec:
            _fail(f"invariants.{gname}: expected num and den term lists")
        num = _parse_poly(K0, emb, spec["num"], f"invariants.{gname}.num")
        den = _parse_poly(K0, emb, spec["den"], f"invariants.{gname}.den")
        invariants[gname] = RatFunc(C, num, den)

    task = _parse_task(_expect(obj, "task", dict, "scenario"), groups, points, K0, lift, K)

    base_seed = obj.get("seed", 0)
    if seed is not None:
        base_seed = seed
    if not isinstance(base_seed, int):
        _fail("scenario: seed must be an integer")

    return Scenario(
        name, K0, K, ext, C, points, groups, invariants, task, base_seed,
        {"closure": closure_cap, "equiv": equiv_cap},
    )


def load_scenario(path, seed=None, working_ext=None, cap=None):
    """Reads, validates, and resolves a scenario file."""
    return build_scenario(read_json(path), seed=seed, working_ext=working_ext, cap=cap)
