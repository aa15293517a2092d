"""``modinv`` command-line frontend.

Each subcommand builds an :class:`ExperimentConfig`, runs, and prints one
JSON :class:`Report` (sorted keys).  Exit status: 0 when every check passes
(vacuous passes and unmet hypotheses included), 1 on a violation, 2 when
something is inconclusive or an input document is malformed.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Callable, Sequence

import jsonschema
import numpy as np

from . import jsonio
from .cartan_frac import CartanEvaluator, Fraction, map_to, verify_cartan_axiom
from .dickson import (
    DEFAULT_DICKSON_CAP,
    dickson_by_moore,
    dickson_by_roots,
    dickson_degrees,
    generators_independent,
)
from .gf import FieldSpec
from .group_action import (
    Group,
    GroupElement,
    cyclic_transvection_group,
    general_linear_group,
    gl_generators,
    random_invariant,
    trivial_group,
)
from .linalg import MatrixGF
from .localcoh import (
    DEFAULT_DEGREE_CAP,
    DEFAULT_POWER_BOUND,
    DegreeCapError,
    IdealSpec,
    Inconclusive,
    colimit_window,
    compare_generator_choices,
    default_threads,
    depth_probe,
    dickson_containment_probe,
    pstar_closure_check,
    window_annihilator,
)
from .poly import PolyRing, Polynomial, random_homogeneous
from .steenrod import p as steenrod_p, total

GROUP_PRESETS = ("trivial", "full-GL", "cyclic-transvection")
IDEAL_PRESETS = ("variables", "dickson")
PASSING = {"pass", "vacuous_pass", "hypothesis_not_met"}


# --------------------------------------------------------------------------
# config and report


@dataclass
class ExperimentConfig:
    command: str
    p: int | None = None
    s: int = 1
    d: int | None = None
    group: str | None = None
    ideal: str | None = None
    i: int | None = None
    window: tuple[int, int] | None = None
    t_max: int = 8
    degree_cap: int = DEFAULT_DEGREE_CAP
    power_bound: int = DEFAULT_POWER_BOUND
    seed: int = 0
    samples: int = 0
    output: str | None = None
    threads: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("t_max", "degree_cap", "power_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")
        if self.window is not None and self.window[0] > self.window[1]:
            raise ValueError(f"window {self.window[0]}..{self.window[1]} is empty")
        if self.d is not None and self.d < 1:
            raise ValueError("d must be at least 1")

    def field_spec(self) -> FieldSpec:
        if self.p is None:
            raise ValueError("--p is required")
        return FieldSpec(self.p, self.s)

    def to_json(self) -> dict:
        out = asdict(self)
        if self.window is not None:
            out["window"] = list(self.window)
        return out


@dataclass
class Report:
    config: ExperimentConfig
    checks: list[dict] = field(default_factory=list)
    result: Any = None
    inputs: dict = field(default_factory=dict)
    seconds: float = 0.0

    def add(self, name: str, status: str, **info) -> None:
        if status == "inconclusive" and "reason" not in info:
            raise ValueError("inconclusive checks need a reason")
        self.checks.append({"name": name, "status": status, **info})

    @property
    def status(self) -> str:
        statuses = [c["status"] for c in self.checks]
        if any(s == "fail" for s in statuses):
            return "fail"
        if any(s not in PASSING for s in statuses):
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "inconclusive": 2}[self.status]

    def to_json(self) -> dict:
        return {
            "command": self.config.to_json(),
            "inputs": self.inputs,
            "checks": self.checks,
            "status": self.status,
            "result": self.result,
            "timing": {"wall_seconds": round(self.seconds, 6)},
            "versions": versions(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def versions() -> dict:
    try:
        own = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        own = "unknown"
    return {
        "modinv": own,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "jsonschema": metadata.version("jsonschema"),
        "schema": jsonio.SCHEMA_VERSION,
    }


# --------------------------------------------------------------------------
# shared input handling


def build_group(cfg: ExperimentConfig) -> Group:
    src = cfg.group or "trivial"
    if src in GROUP_PRESETS:
        fld = cfg.field_spec()
        if cfg.d is None:
            raise ValueError("--d is required with a group preset")
        return {
            "trivial": trivial_group,
            "full-GL": general_linear_group,
            "cyclic-transvection": cyclic_transvection_group,
        }[src](fld, cfg.d)
    grp = jsonio.group_from_json(jsonio.load_document(src))
    if cfg.d is not None and cfg.d != grp.d:
        raise ValueError(f"--d {cfg.d} disagrees with the group file (d={grp.d})")
    return grp


def build_ideal(cfg: ExperimentConfig, group: Group, source: str | None = None) -> IdealSpec:
    src = source or cfg.ideal or "dickson"
    ring = group.ring
    if src == "variables":
        ideal = IdealSpec(tuple(ring.gens()))
    elif src == "dickson":
        ideal = IdealSpec(dickson_by_roots(group.d, group.field, ring=ring).gens)
    else:
        ideal = jsonio.ideal_from_json(jsonio.load_document(src), ring)
    ideal.check_invariant(group)
    return ideal


def _poly_input(path: str, report: Report, key: str) -> Polynomial:
    f = jsonio.polynomial_from_json(jsonio.load_document(path))
    report.inputs[key] = f.to_json()
    return f


# --------------------------------------------------------------------------
# subcommands


def cmd_dickson(cfg: ExperimentConfig, report: Report) -> None:
    fld = cfg.field_spec()
    d = cfg.d
    cap = cfg.extra.get("cap", DEFAULT_DICKSON_CAP)
    method = cfg.extra.get("method", "roots")
    build = dickson_by_roots if method == "roots" else dickson_by_moore
    alg = build(d, fld, cap)
    report.result = {
        "generators": [g.to_json() for g in alg.gens],
        "degrees": alg.degrees(),
        "method": method,
    }
    if not cfg.extra.get("check"):
        return
    other = (dickson_by_moore if method == "roots" else dickson_by_roots)(d, fld, cap)
    bad = [j for j, (a, b) in enumerate(zip(alg.gens, other.gens)) if a != b]
    if bad:
        report.add("roots_vs_moore", "fail", witness={"index": bad[0]})
    else:
        report.add("roots_vs_moore", "pass")
    expected = dickson_degrees(d, fld.q)
    if alg.degrees() == expected:
        report.add("degrees", "pass", expected=expected)
    else:
        report.add("degrees", "fail", witness={"expected": expected, "got": alg.degrees()})
    gens = gl_generators(fld, d)
    for j, f in enumerate(alg.gens):
        for g in gens:
            if g.act(f) != f:
                report.add("gl_invariance", "fail", witness={"index": j, "matrix": g.matrix.to_json()})
                break
        else:
            continue
        break
    else:
        report.add("gl_invariance", "pass")
    top = cfg.extra.get("independence_degree") or fld.q**d
    if generators_independent(alg, top):
        report.add("algebraic_independence", "pass", max_degree=top)
    else:
        report.add("algebraic_independence", "fail", max_degree=top)


def cmd_steenrod_apply(cfg: ExperimentConfig, report: Report) -> None:
    f = _poly_input(cfg.extra["poly"], report, "poly")
    k = cfg.extra["index"]
    if k is None:
        tot = total(f)
        report.result = {"total": {str(i): c.to_json() for i, c in tot.coefficients.items()}}
    else:
        report.result = {"i": k, "value": steenrod_p(k, f).to_json()}
    report.add("apply", "pass")


def _random_matrix(fld: FieldSpec, d: int, rng) -> GroupElement:
    while True:
        m = MatrixGF(fld, rng.integers(0, fld.q, size=(d, d)))
        if m.det():
            return GroupElement(m)


def steenrod_property_checks(fld: FieldSpec, d: int, samples: int, max_degree: int, seed: int) -> list[dict]:
    """Seeded property suite; each entry is a check record."""
    rng = np.random.default_rng(seed)
    ring = PolyRing(fld, d)
    q = fld.q
    out = []

    bad = None
    for j, x in enumerate(ring.gens()):
        if steenrod_p(0, x) != x or steenrod_p(1, x) != x**q or any(not steenrod_p(k, x).is_zero() for k in (2, 3)):
            bad = j
            break
    out.append({"name": "rules_on_generators", "status": "pass"} if bad is None else {"name": "rules_on_generators", "status": "fail", "witness": {"variable": bad}})

    def rand():
        return random_homogeneous(ring, int(rng.integers(0, max_degree + 1)), rng)

    bad = None
    for _ in range(samples):
        u, v = rand(), rand()
        pu, pv, puv = total(u), total(v), total(u * v)
        for k in range(0, max(puv.top, pu.top + pv.top) + 1):
            rhs = ring.zero
            for i in range(k + 1):
                rhs = rhs + pu.get(i, ring) * pv.get(k - i, ring)
            if puv.get(k, ring) != rhs:
                bad = {"u": u.to_json(), "v": v.to_json(), "k": k}
                break
        if bad:
            break
    out.append(_record("cartan_formula", bad, samples=samples))

    bad = None
    for _ in range(samples):
        f, g = rand(), _random_matrix(fld, d, rng)
        n = f.homogeneous_degree()
        for i in range(0, n + 2):
            if g.act(steenrod_p(i, f)) != steenrod_p(i, g.act(f)):
                bad = {"f": f.to_json(), "matrix": g.matrix.to_json(), "i": i}
                break
        if bad:
            break
    out.append(_record("equivariance", bad, samples=samples))

    # P^n(f) = f^q and P^{>n}(f) = 0: both sides are GF(q)-linear in f, so the
    # monomial basis of each degree is an exhaustive test
    bad = None
    for n in range(0, min(max_degree, 4) + 1):
        for e in _monomials(d, n):
            f = ring.monomial(e)
            if steenrod_p(n, f) != f**q or any(not steenrod_p(k, f).is_zero() for k in range(n + 1, n + 3)):
                bad = {"exp": list(e)}
                break
        if bad:
            break
    out.append(_record("top_power_and_vanishing", bad))
    return out


def _monomials(d, n):
    from .poly import monomial_basis

    return monomial_basis(d, n)


def _record(name: str, witness, **info) -> dict:
    if witness is None:
        return {"name": name, "status": "pass", **info}
    return {"name": name, "status": "fail", "witness": witness, **info}


def cmd_steenrod_check(cfg: ExperimentConfig, report: Report) -> None:
    fld = cfg.field_spec()
    max_degree = cfg.extra.get("max_degree", 6)
    report.checks.extend(steenrod_property_checks(fld, cfg.d, cfg.samples or 200, max_degree, cfg.seed))


def cmd_invariants(cfg: ExperimentConfig, report: Report) -> None:
    group = build_group(cfg)
    lo, hi = cfg.window or (0, cfg.extra.get("max_degree", 4))
    report.inputs["group"] = group.to_json()
    pieces = {}
    for n in range(max(lo, 0), hi + 1):
        basis = group.invariant_matrix(n)
        polys = [group.ring.from_vector(n, row) for row in basis]
        pieces[str(n)] = {"dim": len(polys), "basis": [f.to_json() for f in polys]}
    report.result = {"order": group.order, "pieces": pieces}
    report.add("invariants", "pass")


def cmd_cartan_qr(cfg: ExperimentConfig, report: Report) -> None:
    u = jsonio.fraction_from_json(jsonio.load_document(cfg.extra["fraction"]))
    report.inputs["fraction"] = u.to_json()
    if cfg.group:
        if cfg.d is None:
            cfg.d = u.ring.nvars
        if cfg.p is None:
            cfg.p, cfg.s = u.ring.field.p, u.ring.field.s
        group = build_group(cfg)
        for f, what in ((u.num, "numerator"), (u.base, "base")):
            if not group.is_invariant(_rering(f, group.ring)):
                raise ValueError(f"{what} is not invariant under the group")
    r = cfg.extra["r"]
    ev = CartanEvaluator(u)
    out = ev(r)
    report.result = {"r": r, "value": out.to_json(), "degree": out.degree()}
    report.add("qr", "pass")


def _rering(f: Polynomial, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, f.terms)


def cartan_property_checks(fld: FieldSpec, group: Group, samples: int, r_max: int, seed: int, max_degree: int = 4) -> list[dict]:
    """Representation independence, Cartan axiom, linearity, naturality on seeded samples."""
    rng = np.random.default_rng(seed)
    ring = group.ring

    # degrees carrying nonzero invariants; the smallest positive ones may exceed max_degree
    positive = [n for n in range(1, 4 * max_degree * group.field.q + 1) if group.invariant_dim(n)]
    if not positive:
        raise ValueError("no positive-degree invariants found to localize at")
    hi_num = max(max_degree, positive[0])
    bases = positive[:2]

    def inv(lo=0, hi=hi_num, nonzero=False):
        if nonzero:
            pool = [n for n in positive if lo <= n <= hi] or bases[:1]
            while True:
                f = random_invariant(group, int(rng.choice(pool)), rng)
                if not f.is_zero():
                    return f
        return random_invariant(group, int(rng.integers(lo, hi + 1)), rng)

    def frac(deg=None, x=None):
        x = x if x is not None else inv(bases[0], bases[-1], nonzero=True)
        e = int(rng.integers(0, 3))
        if deg is None:
            return Fraction(inv(), x, e, normalize=False)
        dx = x.homogeneous_degree()
        while deg + e * dx < 0:
            e += 1
        return Fraction(random_invariant(group, deg + e * dx, rng), x, e, normalize=False)

    results = {k: None for k in ("representation_independence", "cartan_axiom", "linearity", "map_to_naturality")}
    for _ in range(samples):
        u = frac()
        # the same element over base^(exp+k)
        k = int(rng.integers(1, 3))
        u2 = Fraction(u.with_exp(u.exp + k), u.base, u.exp + k, normalize=False)
        e1, e2 = CartanEvaluator(u), CartanEvaluator(u2)
        if results["representation_independence"] is None:
            for r in range(r_max + 1):
                if e1(r) != e2(r):
                    results["representation_independence"] = {"u": u.to_json(), "r": r}
                    break
        s = inv()
        if results["cartan_axiom"] is None:
            rep = verify_cartan_axiom(s, u, r_max)
            if not rep.ok:
                results["cartan_axiom"] = {"s": s.to_json(), "u": u.to_json(), "r": rep.violation}
        deg_u = u.num.homogeneous_degree() - u.exp * u.base.homogeneous_degree()
        v = frac(deg_u, u.base)
        c = ring.constant(fld.element(int(rng.integers(0, fld.q))))
        if results["linearity"] is None:
            ew, ev = CartanEvaluator(u + v * c), CartanEvaluator(v)
            for r in range(r_max + 1):
                if ew(r) != e1(r) + ev(r) * c:
                    results["linearity"] = {"u": u.to_json(), "v": v.to_json(), "r": r}
                    break
        y = inv(bases[0], bases[0], nonzero=True)
        if results["map_to_naturality"] is None:
            em = CartanEvaluator(map_to(u, y))
            for r in range(r_max + 1):
                if em(r) != map_to(e1(r), y):
                    results["map_to_naturality"] = {"u": u.to_json(), "y": y.to_json(), "r": r}
                    break
    return [_record(name, wit, samples=samples, r_max=r_max) for name, wit in results.items()]


def cmd_cartan_check(cfg: ExperimentConfig, report: Report) -> None:
    group = build_group(cfg)
    report.checks.extend(
        cartan_property_checks(group.field, group, cfg.samples or 100, cfg.extra.get("r_max", 4), cfg.seed)
    )


def _window(cfg: ExperimentConfig, group: Group, ideal: IdealSpec):
    report_threads = cfg.threads or default_threads()
    return colimit_window(
        ideal, group, cfg.i, cfg.window, cfg.t_max, degree_cap=cfg.degree_cap, threads=report_threads
    )


def _stabilization_check(report: Report, w) -> None:
    loose = [n for n in w.degrees if not w.stabilized[n]]
    if loose:
        report.add("stabilization", "inconclusive", reason=f"unstabilized degrees {loose} at t_max={w.t_max}", degrees=loose)
    else:
        report.add("stabilization", "pass")


def cmd_localcoh(cfg: ExperimentConfig, report: Report) -> None:
    group = build_group(cfg)
    ideal = build_ideal(cfg, group)
    report.inputs.update(group=group.to_json(), ideal=ideal.to_json())
    w = _window(cfg, group, ideal)
    report.result = {"i": cfg.i, "window": list(cfg.window), "precision": "window", "degrees": w.report()}
    _stabilization_check(report, w)
    other = cfg.extra.get("compare")
    if other:
        ideal_b = build_ideal(cfg, group, other)
        report.inputs["compare_ideal"] = ideal_b.to_json()
        cmp = compare_generator_choices(ideal, ideal_b, group, cfg.i, cfg.window, cfg.t_max, degree_cap=cfg.degree_cap)
        report.result["comparison"] = cmp
        report.add("generator_comparison", "pass", structures_differ=cmp["structures_differ"])


def cmd_probe(cfg: ExperimentConfig, report: Report) -> None:
    kind = cfg.extra["kind"]
    group = build_group(cfg)
    report.inputs["group"] = group.to_json()
    if kind == "ls":
        alg = dickson_by_roots(group.d, group.field, ring=group.ring)
        r = cfg.extra.get("r") or group.d
        seq = [alg.gens[group.d - 1 - k] for k in range(r)]
        dep = depth_probe(seq, group, cfg.degree_cap)
        report.result = dep.to_json()
        report.result["sequence"] = [f"d_{group.d},{group.d - 1 - k}" for k in range(r)]
        report.add("dickson_regular_sequence", "pass" if dep.regular else "fail", regular_length=dep.regular_length)
        return
    ideal = build_ideal(cfg, group)
    report.inputs["ideal"] = ideal.to_json()
    w = _window(cfg, group, ideal)
    _stabilization_check(report, w)
    ann_cap = cfg.extra.get("ann_cap") or min(cfg.degree_cap, cfg.window[1] - cfg.window[0])
    ann = window_annihilator(w, ann_cap)
    report.result = {"window": w.report(), "annihilator": ann.report()}
    if kind == "annp":
        closure = pstar_closure_check(ann, w)
        report.result["closure"] = closure.to_json()
        report.add("pstar_closure", closure.to_json()["status"], **({"witness": closure.violations[0]} if closure.violations else {}))
        bad = ann.check_ideal_closure()
        report.add("ideal_closure", "pass" if not bad else "fail", **({"witness": {"degree": bad[0][0], "k": bad[0][1]}} if bad else {}))
    else:
        alg = dickson_by_roots(group.d, group.field, ring=group.ring)
        g = cfg.extra.get("g")
        g = group.d if g is None else g
        cont = dickson_containment_probe(ann, alg, g, cfg.power_bound)
        report.result["containment"] = cont.to_json()
        info = {}
        if cont.reason:
            info["reason"] = cont.reason
        if cont.status == "fail":
            info["witness"] = [row for row in cont.per_generator if row["status"] == "not_contained"]
        if cont.status == "inconclusive" and "reason" not in info:
            info["reason"] = "; ".join(row.get("reason", "") for row in cont.per_generator if row["status"] == "inconclusive")
        report.add("dickson_containment", cont.status, **info)


def cmd_depth(cfg: ExperimentConfig, report: Report) -> None:
    group = build_group(cfg)
    seq = build_ideal(cfg, group, cfg.extra["sequence"])
    report.inputs.update(group=group.to_json(), sequence=seq.to_json())
    dep = depth_probe(list(seq.generators), group, cfg.degree_cap)
    report.result = dep.to_json()
    report.add("regular_sequence", "pass" if dep.regular else "fail", regular_length=dep.regular_length)


# --------------------------------------------------------------------------
# argument parsing


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like a..b, got {text!r}") from None


def _field_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--p", type=int, required=required, help="field characteristic")
    p.add_argument("--s", type=int, default=1, help="extension degree (q = p^s)")
    p.add_argument("--d", type=int, required=required, help="number of variables")


def _group_args(p: argparse.ArgumentParser) -> None:
    _field_args(p)
    p.add_argument("--group", default="trivial", help=f"preset ({', '.join(GROUP_PRESETS)}) or group JSON file")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="also write the report to this path")


def _coh_args(p: argparse.ArgumentParser) -> None:
    _group_args(p)
    p.add_argument("--ideal", default="dickson", help=f"preset ({', '.join(IDEAL_PRESETS)}) or ideal JSON file")
    p.add_argument("--i", type=int, required=True, help="cohomological index")
    p.add_argument("--window", type=parse_window, required=True, help="internal degrees a..b")
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    p.add_argument("--threads", type=int, default=None)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modinv", description="Modular invariants, Steenrod operations and local cohomology at desk scale.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dickson", help="Dickson invariants of GL(d, q)")
    _field_args(p, required=True)
    p.add_argument("--check", action="store_true", help="cross-validate the two constructions")
    p.add_argument("--method", choices=("roots", "moore"), default="roots")
    p.add_argument("--cap", type=int, default=DEFAULT_DICKSON_CAP, help="largest allowed q^d")
    p.add_argument("--independence-degree", type=int, default=None)
    _common(p)

    p = sub.add_parser("steenrod", help="Steenrod reduced powers")
    ss = p.add_subparsers(dest="action", required=True)
    a = ss.add_parser("apply", help="P^i of a JSON polynomial")
    a.add_argument("--i", type=int, default=None, help="index; omit for the total operation")
    a.add_argument("--poly", required=True)
    _common(a)
    c = ss.add_parser("check", help="seeded property suite")
    _field_args(c, required=True)
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--max-degree", type=int, default=6)
    _common(c)

    p = sub.add_parser("invariants", help="graded pieces of the invariant ring")
    _group_args(p)
    p.add_argument("--window", type=parse_window, default=None, help="degrees a..b (default 0..4)")
    _common(p)

    p = sub.add_parser("cartan", help="Cartan operators on localizations")
    cs = p.add_subparsers(dest="action", required=True)
    a = cs.add_parser("qr", help="Q^r of a JSON fraction")
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--fraction", required=True)
    _group_args(a)
    a.set_defaults(group=None)
    _common(a)
    c = cs.add_parser("check", help="seeded property suite")
    _group_args(c)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--r-max", type=int, default=4)
    _common(c)

    p = sub.add_parser("localcoh", help="graded local cohomology over a window")
    _coh_args(p)
    p.add_argument("--compare", default=None, help="second generating set of the same ideal")
    _common(p)

    p = sub.add_parser("probe", help="annihilator and depth probes")
    ps = p.add_subparsers(dest="kind", required=True)
    for kind, text in (("main", "Dickson containment in the radical of the annihilator"), ("annp", "P*-closure of the annihilator")):
        a = ps.add_parser(kind, help=text)
        _coh_args(a)
        a.add_argument("--ann-cap", type=int, default=None, help="top annihilator degree (default: window width)")
        a.add_argument("--power-bound", type=int, default=DEFAULT_POWER_BOUND)
        if kind == "main":
            a.add_argument("--g", type=int, default=None, help="test d_{d,0}..d_{d,g-1} (default g = d)")
        _common(a)
    a = ps.add_parser("ls", help="regularity of d_{d,d-1}, ..., d_{d,d-r}")
    _group_args(a)
    a.add_argument("--r", type=int, default=None)
    a.add_argument("--degree-cap", type=int, default=None, help="default 2 q^d")
    _common(a)

    p = sub.add_parser("depth", help="regularity of an explicit sequence")
    _group_args(p)
    p.add_argument("--sequence", required=True, help="JSON file in the ideal format")
    p.add_argument("--degree-cap", type=int, default=24)
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> tuple[ExperimentConfig, Callable]:
    cmd = ns.command
    extra: dict[str, Any] = {}
    kw: dict[str, Any] = dict(
        p=getattr(ns, "p", None),
        s=getattr(ns, "s", 1),
        d=getattr(ns, "d", None),
        group=getattr(ns, "group", None),
        seed=ns.seed,
        output=ns.output,
        samples=getattr(ns, "samples", 0) or 0,
    )
    if cmd == "dickson":
        extra.update(check=ns.check, method=ns.method, cap=ns.cap, independence_degree=ns.independence_degree)
        run = cmd_dickson
    elif cmd == "steenrod":
        cmd = f"steenrod {ns.action}"
        if ns.action == "apply":
            extra.update(index=ns.i, poly=ns.poly)
            run = cmd_steenrod_apply
        else:
            extra.update(max_degree=ns.max_degree)
            run = cmd_steenrod_check
    elif cmd == "invariants":
        kw["window"] = ns.window
        run = cmd_invariants
    elif cmd == "cartan":
        cmd = f"cartan {ns.action}"
        if ns.action == "qr":
            extra.update(r=ns.r, fraction=ns.fraction)
            run = cmd_cartan_qr
        else:
            extra.update(r_max=ns.r_max)
            run = cmd_cartan_check
    elif cmd in ("localcoh", "probe") and getattr(ns, "kind", None) != "ls":
        kw.update(ideal=ns.ideal, i=ns.i, window=ns.window, t_max=ns.tmax, degree_cap=ns.degree_cap, threads=ns.threads)
        if cmd == "localcoh":
            extra["compare"] = ns.compare
            run = cmd_localcoh
        else:
            cmd = f"probe {ns.kind}"
            extra.update(kind=ns.kind, ann_cap=ns.ann_cap)
            kw["power_bound"] = ns.power_bound
            if ns.kind == "main":
                extra["g"] = ns.g
            run = cmd_probe
    elif cmd == "probe":
        cmd = "probe ls"
        extra.update(kind="ls", r=ns.r)
        if ns.degree_cap is None:
            q = ns.p ** ns.s if ns.p else None
            if q is None or ns.d is None:
                raise ValueError("--degree-cap is needed when the field or d is not given")
            kw["degree_cap"] = 2 * q**ns.d
        else:
            kw["degree_cap"] = ns.degree_cap
        run = cmd_probe
    else:
        kw["degree_cap"] = ns.degree_cap
        extra["sequence"] = ns.sequence
        run = cmd_depth
    return ExperimentConfig(command=cmd, extra=extra, **kw), run


def _glue_windows(argv: Sequence[str]) -> list[str]:
    """Join ``--window -5..-2`` so argparse does not read -5..-2 as an option."""
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--window={nxt}")
        else:
            out.append(a)
    return out


def run(cfg: ExperimentConfig, fn: Callable) -> Report:
    report = Report(cfg)
    start = time.perf_counter()
    try:
        fn(cfg, report)
    except (Inconclusive, DegreeCapError) as exc:
        report.add("computation", "inconclusive", reason=str(exc))
    report.seconds = time.perf_counter() - start
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = _glue_windows(sys.argv[1:] if argv is None else argv)
    ns = make_parser().parse_args(argv)
    try:
        cfg, fn = config_from_args(ns)
        report = run(cfg, fn)
    except jsonio.SchemaError as exc:
        err = {"status": "error", "error": {"kind": "schema", "path": exc.path, "message": exc.message, "source": exc.source}}
        print(json.dumps(err, sort_keys=True, indent=2), file=sys.stderr)
        return 2
    except (ValueError, OSError, jsonschema.exceptions.SchemaError) as exc:
        print(json.dumps({"status": "error", "error": {"kind": "input", "message": str(exc)}}, sort_keys=True, indent=2), file=sys.stderr)
        return 2
    text = report.dumps()
    print(text)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
