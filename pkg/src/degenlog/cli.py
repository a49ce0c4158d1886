"""Command-line front end: scenario files, runs, spectral queries, suites.

Scenario files are flat INI with sections [domain], [equation], [kset],
[time], [initial], [output]; every key maps 1:1 to a scenario field, unknown
keys are errors, and the canonical emission round-trips.  All outputs
(CSV trajectories, PGM snapshots, suite reports) are deterministic byte
streams: no timestamps, fixed formatting, fixed ordering.
"""

from __future__ import annotations

import argparse
import configparser
import math
import multiprocessing
import os
import sys
from pathlib import Path

import numpy as np

from . import geometry as geo
from .evolve import EquationParams, SchemeConfig, Trajectory, run as evolve_run
from .geometry import (DomainSpec, JumpingSets, NuProfile, PathSchedule,
                       RadiusBall, RadiusSchedule, RotatingSector, SetShape,
                       StaticSet, TranslatingSet)
from .grid import Field, MaskedOperator, build_grid, mask_from_shape, write_pgm
from .oracles import OdeBoundParams, w_closed_form, w_inf, w_rk4
from .scenarios import (CrossCheckReport, InitialData, OutputPlan, Scenario,
                        classify, cross_check, initial_data_independence,
                        predict, registry, run_scenario, scenario_grid)
from .spectral import (lambda0_of_set, principal_eigenpair,
                       principal_eigenvalue, second_eigenvalue)

__all__ = ["main"]


class CliError(Exception):
    """User-facing error naming the violated invariant or file location."""


# ---------------------------------------------------------------------------
# Shape / domain mini-language (used by eig, lambda0 and scenario files)
# ---------------------------------------------------------------------------


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as e:
        raise CliError(f"expected comma-separated numbers, got {text!r}") from e


def parse_shape(text: str) -> SetShape:
    """ball:cx,cy,r | sector:cx,cy,r,theta0,theta1 | point:x,y | empty"""
    text = text.strip()
    if text == "empty":
        return SetShape.empty()
    if ":" not in text:
        raise CliError(f"malformed shape {text!r} (expected kind:numbers)")
    kind, _, rest = text.partition(":")
    vals = _floats(rest)
    try:
        if kind == "ball":
            if len(vals) < 2:
                raise ValueError("ball needs center coordinates and a radius")
            return SetShape.ball(vals[:-1], vals[-1])
        if kind == "point":
            return SetShape.point(vals)
        if kind == "sector":
            return SetShape.sector(vals[:2], vals[2], vals[3], vals[4])
    except (ValueError, IndexError) as e:
        raise CliError(f"invalid shape {text!r}: {e}") from e
    raise CliError(f"unknown shape kind {kind!r}")


def format_shape(s: SetShape) -> str:
    if s.is_empty:
        return "empty"
    nums = lambda vs: ",".join(_num(v) for v in vs)  # noqa: E731
    if s.kind == "ball":
        return f"ball:{nums(s.center)},{_num(s.radius)}"
    if s.kind == "point":
        return f"point:{nums(s.center)}"
    if s.kind == "sector":
        return (f"sector:{nums(s.center)},{_num(s.radius)},"
                f"{_num(s.theta0)},{_num(s.theta1)}")
    raise CliError(f"shape kind {s.kind!r} has no file representation")


def parse_domain(text: str) -> DomainSpec:
    """rect:lox,loy,hix,hiy | interval:a,b | disc:cx,cy,r"""
    kind, _, rest = text.strip().partition(":")
    vals = _floats(rest)
    try:
        if kind == "rect":
            half = len(vals) // 2
            return DomainSpec.rectangle(vals[:half], vals[half:])
        if kind == "interval":
            return DomainSpec.interval(vals[0], vals[1])
        if kind == "disc":
            return DomainSpec.disc(vals[:2], vals[2])
    except (ValueError, IndexError) as e:
        raise CliError(f"invalid domain {text!r}: {e}") from e
    raise CliError(f"unknown domain kind {kind!r}")


def _num(v: float) -> str:
    """Shortest exact decimal form (repr) for deterministic output."""
    return repr(float(v))


# ---------------------------------------------------------------------------
# Scenario file format
# ---------------------------------------------------------------------------

_SECTION_KEYS = {
    "domain": {"kind", "lo", "hi", "center", "radius", "resolution"},
    "equation": {"lam", "rho", "nu_kind", "nu_max", "d_ramp", "n_empty"},
    "kset": {"kind", "center", "radius", "schedule", "omega", "theta0",
             "theta1", "k0", "k1", "period", "t1", "path", "point",
             "velocity", "path_center", "path_radius", "phase"},
    "time": {"t0", "t_end", "dt"},
    "initial": {"kind", "value", "center", "radius", "height"},
    "output": {"sample_every", "growth_cap", "solve_tol", "snapshot_times"},
}


def _check_keys(cfg: dict, where: str) -> None:
    for section, keys in cfg.items():
        if section not in _SECTION_KEYS:
            raise CliError(f"{where}: unknown section [{section}]")
        for key in keys:
            if key not in _SECTION_KEYS[section]:
                raise CliError(
                    f"{where}: unknown key {key!r} in section [{section}]")


def _get(cfg, section, key, default=None, required=False):
    val = cfg.get(section, {}).get(key)
    if val is None:
        if required:
            raise CliError(f"missing required key {key!r} in [{section}]")
        return default
    return val


def config_to_scenario(cfg: dict, label: str,
                       expected_status: str = "CONSISTENT",
                       hints: tuple = ()) -> Scenario:
    """Build a scenario from a section->key->string mapping."""
    _check_keys(cfg, label)
    g = _get
    try:
        dkind = g(cfg, "domain", "kind", "rectangle")
        if dkind == "rectangle":
            domain = DomainSpec.rectangle(
                _floats(g(cfg, "domain", "lo", required=True)),
                _floats(g(cfg, "domain", "hi", required=True)))
        elif dkind == "disc":
            domain = DomainSpec.disc(
                _floats(g(cfg, "domain", "center", required=True)),
                float(g(cfg, "domain", "radius", required=True)))
        else:
            raise CliError(f"unknown domain kind {dkind!r}")
        resolution = int(g(cfg, "domain", "resolution", "64"))

        nu = NuProfile(kind=g(cfg, "equation", "nu_kind", "saturating"),
                       nu_max=float(g(cfg, "equation", "nu_max", "1.0")),
                       d_ramp=float(g(cfg, "equation", "d_ramp", "0.05")),
                       n_empty=float(g(cfg, "equation", "n_empty", "1.0")))
        moving = _config_to_kset(cfg)
        params = EquationParams(
            lam=float(g(cfg, "equation", "lam", required=True)),
            rho=float(g(cfg, "equation", "rho", "2.0")),
            nu=None if moving is None else nu, moving_set=moving)

        scheme = SchemeConfig(
            dt=float(g(cfg, "time", "dt", "0.002")),
            solve_tol=float(g(cfg, "output", "solve_tol", "1e-10")),
            growth_cap=float(g(cfg, "output", "growth_cap", "1e5")))

        ikind = g(cfg, "initial", "kind", "constant")
        if ikind == "constant":
            initial = InitialData.constant(float(g(cfg, "initial", "value",
                                                   "1.0")))
        elif ikind == "bump":
            initial = InitialData.bump(
                _floats(g(cfg, "initial", "center", required=True)),
                float(g(cfg, "initial", "radius", required=True)),
                float(g(cfg, "initial", "height", "1.0")))
        else:
            raise CliError(f"unknown initial data kind {ikind!r} "
                           "(files support constant | bump)")

        snaps = g(cfg, "output", "snapshot_times", "")
        outputs = OutputPlan(
            sample_every=int(g(cfg, "output", "sample_every", "10")),
            snapshot_times=_floats(snaps) if snaps else ())
        return Scenario(label=label, domain=domain, resolution=resolution,
                        params=params, scheme=scheme,
                        t0=float(g(cfg, "time", "t0", "0.0")),
                        t_end=float(g(cfg, "time", "t_end", required=True)),
                        initial=initial, outputs=outputs,
                        expected_status=expected_status, hints=hints)
    except ValueError as e:
        raise CliError(f"{label}: invalid scenario: {e}") from e


def _config_to_kset(cfg: dict):
    g = _get
    kind = g(cfg, "kset", "kind", "none")
    if kind == "none":
        return None
    if kind == "static-ball":
        return StaticSet(SetShape.ball(
            _floats(g(cfg, "kset", "center", required=True)),
            float(g(cfg, "kset", "radius", required=True))))
    if kind == "radius-ball":
        return RadiusBall(
            tuple(_floats(g(cfg, "kset", "center", required=True))),
            RadiusSchedule(g(cfg, "kset", "schedule", "constant"),
                           float(g(cfg, "kset", "radius", required=True)),
                           omega=float(g(cfg, "kset", "omega", "0.0"))))
    if kind == "rotating-sector":
        return RotatingSector(
            tuple(_floats(g(cfg, "kset", "center", required=True))),
            float(g(cfg, "kset", "radius", required=True)),
            float(g(cfg, "kset", "theta0", "0.0")),
            float(g(cfg, "kset", "theta1", required=True)),
            float(g(cfg, "kset", "omega", required=True)))
    if kind == "jumping":
        return JumpingSets(parse_shape(g(cfg, "kset", "k0", required=True)),
                           parse_shape(g(cfg, "kset", "k1", required=True)),
                           period=float(g(cfg, "kset", "period",
                                          required=True)),
                           t1=float(g(cfg, "kset", "t1", required=True)))
    if kind == "translating-ball":
        path = g(cfg, "kset", "path", required=True)
        if path == "line":
            curve = PathSchedule(
                kind="line",
                point=tuple(_floats(g(cfg, "kset", "point", required=True))),
                velocity=tuple(_floats(g(cfg, "kset", "velocity",
                                         required=True))))
        elif path == "circle":
            curve = PathSchedule(
                kind="circle",
                center=tuple(_floats(g(cfg, "kset", "path_center",
                                       required=True))),
                radius=float(g(cfg, "kset", "path_radius", required=True)),
                omega=float(g(cfg, "kset", "omega", required=True)),
                phase=float(g(cfg, "kset", "phase", "0.0")))
        else:
            raise CliError(f"unknown path kind {path!r}")
        return TranslatingSet(
            SetShape.ball(_floats(g(cfg, "kset", "center", "0,0")),
                          float(g(cfg, "kset", "radius", required=True))),
            curve)
    raise CliError(f"unknown kset kind {kind!r}")


def scenario_to_config(s: Scenario) -> dict:
    """Canonical section->key->string mapping (inverse of config_to_scenario)."""
    cfg: dict = {sec: {} for sec in _SECTION_KEYS}
    d = s.domain
    if d.kind == "rectangle":
        cfg["domain"] = {"kind": "rectangle",
                         "lo": ",".join(_num(v) for v in d.lo),
                         "hi": ",".join(_num(v) for v in d.hi)}
    else:
        cfg["domain"] = {"kind": "disc",
                         "center": ",".join(_num(v) for v in d.center),
                         "radius": _num(d.radius)}
    cfg["domain"]["resolution"] = str(s.resolution)

    cfg["equation"] = {"lam": _num(s.params.lam), "rho": _num(s.params.rho)}
    if s.params.nu is not None:
        cfg["equation"].update({
            "nu_kind": s.params.nu.kind, "nu_max": _num(s.params.nu.nu_max),
            "d_ramp": _num(s.params.nu.d_ramp),
            "n_empty": _num(s.params.nu.n_empty)})
    cfg["kset"] = _kset_to_config(s.params.moving_set)
    cfg["time"] = {"t0": _num(s.t0), "t_end": _num(s.t_end),
                   "dt": _num(s.scheme.dt)}
    init = s.initial
    if init.kind == "constant":
        cfg["initial"] = {"kind": "constant", "value": _num(init.value)}
    elif init.kind == "bump":
        cfg["initial"] = {"kind": "bump",
                          "center": ",".join(_num(v) for v in init.center),
                          "radius": _num(init.radius),
                          "height": _num(init.value)}
    else:
        raise CliError(f"initial data kind {init.kind!r} has no file form")
    cfg["output"] = {"sample_every": str(s.outputs.sample_every),
                     "growth_cap": _num(s.scheme.growth_cap),
                     "solve_tol": _num(s.scheme.solve_tol)}
    if s.outputs.snapshot_times:
        cfg["output"]["snapshot_times"] = ",".join(
            _num(v) for v in s.outputs.snapshot_times)
    return cfg


def _kset_to_config(spec) -> dict:
    if spec is None:
        return {"kind": "none"}
    if isinstance(spec, StaticSet):
        if spec.base.kind != "ball":
            raise CliError("only ball static sets have a file form")
        return {"kind": "static-ball",
                "center": ",".join(_num(v) for v in spec.base.center),
                "radius": _num(spec.base.radius)}
    if isinstance(spec, RadiusBall):
        return {"kind": "radius-ball",
                "center": ",".join(_num(v) for v in spec.center),
                "radius": _num(spec.schedule.r0),
                "schedule": spec.schedule.kind,
                "omega": _num(spec.schedule.omega)}
    if isinstance(spec, RotatingSector):
        return {"kind": "rotating-sector",
                "center": ",".join(_num(v) for v in spec.center),
                "radius": _num(spec.r0), "theta0": _num(spec.theta0),
                "theta1": _num(spec.theta1), "omega": _num(spec.omega)}
    if isinstance(spec, JumpingSets):
        return {"kind": "jumping", "k0": format_shape(spec.k0),
                "k1": format_shape(spec.k1), "period": _num(spec.period),
                "t1": _num(spec.t1)}
    if isinstance(spec, TranslatingSet):
        out = {"kind": "translating-ball",
               "center": ",".join(_num(v) for v in spec.template.center),
               "radius": _num(spec.template.radius)}
        c = spec.curve
        if c.kind == "line":
            out.update({"path": "line",
                        "point": ",".join(_num(v) for v in c.point),
                        "velocity": ",".join(_num(v) for v in c.velocity)})
        elif c.kind == "circle":
            out.update({"path": "circle",
                        "path_center": ",".join(_num(v) for v in c.center),
                        "path_radius": _num(c.radius),
                        "omega": _num(c.omega), "phase": _num(c.phase)})
        else:
            raise CliError(f"path kind {c.kind!r} has no file form")
        return out
    raise CliError(f"moving set {type(spec).__name__} has no file form")


def emit_scenario_ini(s: Scenario) -> str:
    cfg = scenario_to_config(s)
    lines = []
    for section in ("domain", "equation", "kset", "time", "initial", "output"):
        body = cfg.get(section, {})
        if not body:
            continue
        lines.append(f"[{section}]")
        lines.extend(f"{k} = {v}" for k, v in body.items())
        lines.append("")
    return "\n".join(lines)


def parse_scenario_file(path) -> Scenario:
    path = Path(path)
    if not path.is_file():
        raise CliError(f"scenario file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as e:
        raise CliError(f"{path}: syntax error: {e}") from e
    cfg = {sec: dict(parser.items(sec)) for sec in parser.sections()}
    return config_to_scenario(cfg, label=path.stem)


def _apply_overrides(cfg: dict, overrides) -> dict:
    for item in overrides or ():
        if "=" not in item:
            raise CliError(f"override {item!r} must look like section.key=value")
        key, _, value = item.partition("=")
        if "." not in key:
            raise CliError(f"override key {key!r} must look like section.key")
        section, _, name = key.partition(".")
        cfg.setdefault(section, {})[name] = value
    return cfg


def resolve_scenario(ref: str, overrides=None) -> Scenario:
    """Registry label or scenario file path, with --set overrides applied."""
    reg = registry()
    if ref in reg:
        base = reg[ref]
        cfg = _apply_overrides(scenario_to_config(base), overrides)
        return config_to_scenario(cfg, base.label,
                                  expected_status=base.expected_status,
                                  hints=base.hints)
    if Path(ref).is_file():
        if overrides:
            cfg = _apply_overrides(
                scenario_to_config(parse_scenario_file(ref)), overrides)
            return config_to_scenario(cfg, Path(ref).stem)
        return parse_scenario_file(ref)
    raise CliError(f"unknown scenario label or missing file: {ref!r} "
                   f"(labels: {', '.join(reg)})")


# ---------------------------------------------------------------------------
# Outputs
# ---------------------------------------------------------------------------


def emit_trajectory_csv(tr: Trajectory, path) -> None:
    lines = ["t,sup_norm,l2_norm,mass,cap_hit"]
    for t, sn, l2, m in zip(tr.times, tr.sup_norms, tr.l2_norms, tr.masses):
        hit = "1" if tr.cap_hit is not None and t >= tr.cap_hit else ""
        lines.append(f"{_num(t)},{_num(sn)},{_num(l2)},{_num(m)},{hit}")
    Path(path).write_text("\n".join(lines) + "\n")


def emit_snapshots(tr: Trajectory, out_dir: Path) -> None:
    display_max = max((f.sup_norm() for _, f in tr.snapshots), default=0.0)
    if display_max <= 0.0:
        display_max = 1.0
    for i, (t, f) in enumerate(tr.snapshots):
        write_pgm(f, out_dir / f"snapshot_{i:03d}.pgm", display_max)
        (out_dir / f"snapshot_{i:03d}.pgm.txt").open("a").write(
            f"t = {_num(t)}\n")


def checks_table(checks) -> str:
    lines = [f"{'check':32s} {'fires':6s} {'predicts':9s} details",
             "-" * 78]
    for c in checks:
        det = "; ".join(f"{k}={_fmt_detail(v)}" for k, v in c.details)
        lines.append(f"{c.name:32s} {str(c.hypotheses_hold).lower():6s} "
                     f"{c.predicted:9s} {det}")
    return "\n".join(lines)


def _fmt_detail(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt_detail(x) for x in v) + ")"
    return str(v)


def crosscheck_text(rep: CrossCheckReport) -> str:
    head = (f"scenario {rep.label}: predicted={rep.predicted} "
            f"verdict={rep.verdict.kind} status={rep.status}")
    return "\n".join([head, f"  evidence: {rep.verdict.evidence}",
                      checks_table(rep.checks)])


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _crosscheck_label(label: str) -> tuple:
    s = registry()[label]
    rep = cross_check(s)
    return (label, rep.predicted, rep.verdict.kind, rep.status,
            s.expected_status, rep.verdict.evidence)


def suite_scenarios(jobs: int = 1):
    """Cross-check every registry scenario; rows in registry order."""
    labels = list(registry())
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            rows = pool.map(_crosscheck_label, labels)
    else:
        rows = [_crosscheck_label(lb) for lb in labels]
    return rows


def suite_properties():
    """Fast structural property checks; rows (name, ok, detail)."""
    rows = []

    def add(name, ok, detail):
        rows.append((name, bool(ok), detail))

    # golden eigenvalues against closed forms
    square = DomainSpec.rectangle((0.0, 0.0), (1.0, 1.0))
    gsq = build_grid(square, 128)
    l1 = principal_eigenpair(gsq, gsq.mask).value
    rel = abs(l1 - 2.0 * math.pi ** 2) / (2.0 * math.pi ** 2)
    add("eigen-square-lambda1", rel < 0.005, f"rel_err={rel:.3g}")
    l2 = second_eigenvalue(gsq, gsq.mask)
    rel = abs(l2 - 5.0 * math.pi ** 2) / (5.0 * math.pi ** 2)
    add("eigen-square-lambda2", rel < 0.01, f"rel_err={rel:.3g}")

    # characteristic value of a regular set vs its own eigenvalue; of a point
    dom = DomainSpec.rectangle((-1.0, -1.0), (1.0, 1.0))
    g = build_grid(dom, 128)
    ball = SetShape.ball((0.0, 0.0), 0.3)
    est = lambda0_of_set(g, ball)
    own = principal_eigenvalue(g, mask_from_shape(g, ball))
    rel = abs(est.value - own) / own
    add("lambda0-ball-matches-own", est.is_finite and rel < 0.02,
        f"rel_err={rel:.3g}")
    add("lambda0-values-monotone",
        all(b >= a for a, b in zip(est.values, est.values[1:])),
        "values nondecreasing as delta shrinks")
    add("lambda0-point-infinite",
        not lambda0_of_set(g, SetShape.point((0.0, 0.0)), cap=1e4).is_finite,
        "verdict infinite at cap 1e4")

    # comparison in the coefficient and in the initial data
    rows.extend(_comparison_rows(n_pairs=10))

    # ODE oracle agreement and envelope dominance
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(10):
        p = OdeBoundParams(lam=rng.uniform(-2, 4), nu0=rng.uniform(0.2, 2),
                           rho=rng.uniform(1.3, 3.0), w0=rng.uniform(0.1, 5))
        t = rng.uniform(0.1, 3.0)
        worst = max(worst, abs(w_closed_form(p, t) - w_rk4(p, t)))
    add("ode-closed-form-vs-rk4", worst < 1e-8, f"max_abs_diff={worst:.3g}")
    ok = True
    for _ in range(20):
        lam, nu0, rho = rng.uniform(0.5, 5), rng.uniform(0.2, 2), \
            rng.uniform(1.3, 3.0)
        t = rng.uniform(0.1, 4.0)
        p = OdeBoundParams(lam=lam, nu0=nu0, rho=rho, w0=rng.uniform(0.1, 50))
        ok = ok and w_inf(lam, nu0, rho, t) >= w_closed_form(p, t) - 1e-12
    add("ode-envelope-dominates", ok, "w_inf >= w at sampled points")
    return rows


def _comparison_rows(n_pairs: int):
    """Nodewise comparison in the coefficient, initial data and scaling."""
    rng = np.random.default_rng(7)
    dom = DomainSpec.rectangle((0.0, 0.0), (1.0, 1.0))
    grid = build_grid(dom, 16)
    op = MaskedOperator(grid)
    pts = grid.points()[op.mask.ravel()]
    cfg = SchemeConfig(dt=1e-3)
    rows = []

    def evolve(u0, n_field, lam=5.0, rho=2.0, steps=50):
        from .evolve import StepState, step
        params = EquationParams(lam=lam, rho=rho,
                                n_func=lambda t, p: n_field)
        st = StepState(0.0, Field(grid, op.extend(u0)))
        out = [u0]
        for _ in range(steps):
            st = step(st, params, cfg, op, pts)
            out.append(op.restrict(st.u.values))
        return out

    worst = -math.inf
    for _ in range(n_pairs):
        n2 = rng.uniform(0.0, 1.0, op.n)
        n1 = n2 + rng.uniform(0.0, 1.0, op.n)
        u0 = rng.uniform(0.0, 2.0, op.n)
        for a, b in zip(evolve(u0, n1), evolve(u0, n2)):
            worst = max(worst, float(np.max(a - b)))
    rows.append(("comparison-coefficient", worst <= 1e-10,
                 f"worst_breach={worst:.3g}"))

    worst = -math.inf
    for _ in range(n_pairs):
        n1 = rng.uniform(0.0, 1.0, op.n)
        u0 = rng.uniform(0.0, 1.0, op.n)
        v0 = u0 + rng.uniform(0.0, 1.0, op.n)
        for a, b in zip(evolve(u0, n1), evolve(v0, n1)):
            worst = max(worst, float(np.max(a - b)))
    rows.append(("comparison-initial-data", worst <= 1e-10,
                 f"worst_breach={worst:.3g}"))

    worst = -math.inf
    for alpha in (0.5, 2.0):
        for _ in range(5):
            n1 = rng.uniform(0.0, 1.0, op.n)
            u0 = rng.uniform(0.0, 1.0, op.n)
            for a, b in zip(evolve(alpha * u0, n1), evolve(u0, n1)):
                breach = (np.max(a - alpha * b) if alpha >= 1.0
                          else np.max(alpha * b - a))
                worst = max(worst, float(breach))
    rows.append(("comparison-scaling", worst <= 1e-10,
                 f"worst_breach={worst:.3g}"))
    return rows


def suite_report(name: str, jobs: int):
    """(text report, csv report, exit code) for a suite."""
    text = [f"suite: {name}", ""]
    csv = ["suite,row,status,detail"]
    code = 0
    if name in ("paper-examples", "all"):
        rows = suite_scenarios(jobs)
        text.append(f"{'label':22s} {'predicted':9s} {'verdict':12s} "
                    f"{'status':11s} expected")
        text.append("-" * 72)
        for label, predicted, verdict, status, expected, _ in rows:
            text.append(f"{label:22s} {predicted:9s} {verdict:12s} "
                        f"{status:11s} {expected}")
            csv.append(f"scenarios,{label},{status},"
                       f"predicted={predicted};verdict={verdict};"
                       f"expected={expected}")
            if status == "VIOLATION":
                code = 1
        text.append("")
    if name in ("properties", "all"):
        rows = suite_properties()
        text.append(f"{'check':32s} {'result':7s} detail")
        text.append("-" * 72)
        for cname, ok, detail in rows:
            result = "PASS" if ok else "FAIL"
            text.append(f"{cname:32s} {result:7s} {detail}")
            csv.append(f"properties,{cname},{result},{detail}")
            if not ok:
                code = 1
        text.append("")
    return "\n".join(text), "\n".join(csv) + "\n", code


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_run(args) -> int:
    s = resolve_scenario(args.scenario, args.set)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tr = run_scenario(s)
    emit_trajectory_csv(tr, out / "trajectory.csv")
    emit_snapshots(tr, out)
    (out / "scenario.ini").write_text(emit_scenario_ini(s))
    verdict = classify(tr)
    (out / "verdict.txt").write_text(
        f"label = {s.label}\nverdict = {verdict.kind}\n"
        f"evidence = {verdict.evidence}\n")
    print(f"{s.label}: {verdict.kind} ({len(tr.times)} records) -> {out}")
    return 0


def _cmd_predict(args) -> int:
    s = resolve_scenario(args.scenario, args.set)
    print(checks_table(predict(s)))
    return 0


def _cmd_crosscheck(args) -> int:
    s = resolve_scenario(args.scenario, args.set)
    rep = cross_check(s)
    print(crosscheck_text(rep))
    return 1 if rep.status == "VIOLATION" else 0


def _cmd_eig(args) -> int:
    domain = parse_domain(args.domain)
    grid = build_grid(domain, args.n)
    mask = grid.mask if args.shape is None else \
        mask_from_shape(grid, parse_shape(args.shape))
    l1 = principal_eigenvalue(grid, mask)
    print(f"lambda1 = {_num(l1)}")
    if args.second:
        print(f"lambda2 = {_num(second_eigenvalue(grid, mask))}")
    return 0


def _cmd_lambda0(args) -> int:
    domain = parse_domain(args.domain)
    grid = build_grid(domain, args.n)
    est = lambda0_of_set(grid, parse_shape(args.shape), cap=args.cap)
    for d, v in zip(est.deltas, est.values):
        print(f"delta = {d:.8g}  lambda1 = {_num(v)}")
    print(f"verdict = {est.verdict}")
    print(f"lambda0 = {_num(est.value) if est.is_finite else 'inf'}")
    return 0


def _cmd_suite(args) -> int:
    jobs = int(os.environ.get("DEGENLOG_JOBS", args.jobs))
    if jobs < 1:
        raise CliError("jobs must be a positive integer")
    text, csv, code = suite_report(args.name, jobs)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text + "\n")
        (out / "report.csv").write_text(csv)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degenlog",
        description="Simulation laboratory for the degenerate logistic "
                    "equation with a moving vanishing set.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("scenario", help="registry label or scenario file")
        p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override a scenario file key")

    p = sub.add_parser("run", help="simulate and write CSV/PGM outputs")
    scenario_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("predict", help="evaluate the criteria on a scenario")
    scenario_args(p)
    p.set_defaults(fn=_cmd_predict)

    p = sub.add_parser("crosscheck",
                       help="confront prediction with simulation")
    scenario_args(p)
    p.set_defaults(fn=_cmd_crosscheck)

    p = sub.add_parser("eig", help="principal Dirichlet eigenvalue")
    p.add_argument("--domain", required=True,
                   help="rect:lox,loy,hix,hiy | interval:a,b | disc:cx,cy,r")
    p.add_argument("--shape", help="ball:... | sector:... | point:... "
                                   "(defaults to the whole domain)")
    p.add_argument("--n", type=int, default=128, help="cells per axis")
    p.add_argument("--second", action="store_true",
                   help="also print the second eigenvalue")
    p.set_defaults(fn=_cmd_eig)

    p = sub.add_parser("lambda0",
                       help="characteristic value of a compact set")
    p.add_argument("--domain", required=True)
    p.add_argument("--shape", required=True)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--cap", type=float, default=1e4,
                   help="threshold above which the value is called infinite")
    p.set_defaults(fn=_cmd_lambda0)

    p = sub.add_parser("suite", help="run an acceptance suite")
    p.add_argument("name", choices=("paper-examples", "properties", "all"))
    p.add_argument("--out", help="directory for report.txt / report.csv")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel scenario workers (env DEGENLOG_JOBS wins)")
    p.set_defaults(fn=_cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
