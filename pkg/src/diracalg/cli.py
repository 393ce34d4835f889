"""Command-line front end.

Commands: spectrum, verify, wavefunction, check-metric, models.  A run is
configured by an optional JSON document (--config) whose fields individual
flags override; unknown config keys are rejected.  Outputs are CSV or JSON
written atomically with 15-significant-digit numbers, so identical
configurations produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 tolerance failure,
4 solver non-convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from .funcs import const
from .chanop import (AlgebraClass, as_channel, build_h, build_ladder,
                     compose, coefficient_residual, identity_operator,
                     family_so21, family_so3_trig, family_oscillator,
                     casimir_shift)
from .geometry import MetricProfile, validate_metric, derive_gauge_potential
from .discretize import Grid, DiscreteSpinor, assemble, physical_levels, \
    convergence_study, rayleigh_quotient
from .reps import weight_energy, representation_dimension, climb
from .models import catalog, MODEL_NAMES, btz_check
from .susy import (n2_superalgebra_residuals, n4_superalgebra_residuals,
                   local_subalgebra_residuals, parity_conjugation_report,
                   pdm_system)
from .exprgrammar import parse_expression, ExpressionError

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_SOLVER = 4


class ConfigError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_rows(path, fmt, header, rows, meta=None):
    if fmt == "csv":
        lines = [",".join(header)]
        for r in rows:
            lines.append(",".join(_fmt(v) for v in r))
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        doc = {"schema_version": SCHEMA_VERSION,
               "columns": list(header),
               "rows": [[(v if not isinstance(v, float) else float(_fmt(v)))
                         for v in r] for r in rows]}
        if meta:
            doc["meta"] = meta
        _atomic_write(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _parse_m_range(text):
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = Fraction(lo_s).limit_denominator(2), Fraction(hi_s).limit_denominator(2)
    except Exception as exc:
        raise ConfigError(f"bad m-range {text!r}; expected 'a..b'") from exc
    if hi < lo:
        raise ConfigError("empty m-range")
    out = []
    m = lo
    while m <= hi:
        out.append(m)
        m += Fraction(1, 2)
    return out


MODEL_PARAM_KEYS = {"c3", "n_defects", "k", "M", "length", "domain"}


def _load_model(cfg):
    name = cfg.get("model")
    if name is None:
        raise ConfigError("no model selected")
    params = {k: v for k, v in cfg.items() if k in MODEL_PARAM_KEYS and v is not None}
    try:
        return catalog(name, **params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _merge_config(args, keys):
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as f:
                loaded = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        unknown = set(loaded) - set(keys)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for k in keys:
        v = getattr(args, k.replace("-", "_"), None)
        if v is not None:
            cfg[k] = v
    return cfg


# -- spectrum -----------------------------------------------------------------

def _numeric_level_eigensolver(spec, m, target, grid_n):
    pad = max(0.9, 0.2 * (1 + abs(target)))

    def level(grid, t):
        op = spec.channel_operator(m)
        mat = assemble(op, grid)
        levels = physical_levels(mat, (t - pad, t + pad))
        if not levels:
            raise SolverError(
                f"no eigenvalue near {t} in channel {m} at n={grid.n}")
        best = min(levels, key=lambda L: abs(L.energy - t))
        return best.energy

    grids = [Grid(spec.domain, grid_n // 4, bc=spec.bc),
             Grid(spec.domain, grid_n // 2, bc=spec.bc),
             Grid(spec.domain, grid_n, bc=spec.bc)]
    rows = convergence_study(level, grids, [target])
    return rows[0].extrapolated


def _numeric_level_rayleigh(spec, m, target, grid_n):
    ws = spec.weight_state(m)
    op = spec.channel_operator(m)

    def level(grid, t):
        psi = ws.sample(grid)
        return rayleigh_quotient(op, psi)

    grids = [Grid(spec.domain, grid_n // 4, bc=spec.bc),
             Grid(spec.domain, grid_n // 2, bc=spec.bc),
             Grid(spec.domain, grid_n, bc=spec.bc)]
    rows = convergence_study(level, grids, [target])
    return abs(rows[0].extrapolated)


def _dimension_string(spec, m, kind):
    cls = spec.cls
    if cls.c1 != -1:
        return "inf"
    mh = -m if kind == "lowest" else m
    d = representation_dimension(mh, cls.c3, cross_validate=False)
    return "inf" if d == float("inf") else str(d)


def cmd_spectrum(args):
    keys = ("model", "c3", "n_defects", "k", "M", "m_range", "grid_n",
            "tol", "out", "format")
    cfg = _merge_config(args, keys)
    spec = _load_model(cfg)
    ms = _parse_m_range(cfg.get("m_range") or "-4..4")
    grid_n = int(cfg.get("grid_n") or 4096)
    tol = float(cfg.get("tol") or 1e-6)
    fmt = cfg.get("format") or "csv"
    out = cfg.get("out") or f"spectrum-{spec.name}.{fmt}"

    kind = spec.admissible_kind
    adm = spec.admissible(ms, kind)
    rows = []
    all_ok = True
    for w in adm:
        e_alg = w.energy
        if spec.numeric_route == "eigensolver":
            e_num = _numeric_level_eigensolver(spec, w.m, e_alg, grid_n)
        elif spec.numeric_route == "state-rayleigh":
            e_num = _numeric_level_rayleigh(spec, w.m, e_alg, grid_n)
        else:
            raise ConfigError(f"model {spec.name} has no spectral route")
        delta = abs(e_num - e_alg)
        all_ok &= delta <= tol
        rows.append((str(w.m), w.kind, e_alg, e_num, delta,
                     _dimension_string(spec, w.m, w.kind)))
    header = ("m", "kind", "E_algebraic", "E_numeric", "abs_delta",
              "multiplet_dimension")
    _write_rows(out, fmt, header, rows,
                meta={"model": spec.name, "params": spec.params, "tol": tol})
    if not adm:
        print(f"warning: no admissible weights in range for {spec.name}")
        return EXIT_OK
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK if all_ok else EXIT_TOLERANCE


# -- verify -------------------------------------------------------------------

SUITES = ("metric", "structure-constants", "casimir", "intertwining",
          "factorization", "n2", "n4", "local-subalgebra", "parity-report",
          "all")

DEFAULT_MS = (-2, -1, 0, Fraction(1, 2), 1, 2)


def _family_from_cfg(cfg):
    if cfg.get("model"):
        spec = _load_model(cfg)
        return spec.family, spec
    famspec = cfg.get("family")
    if not famspec:
        raise ConfigError("verify needs --model or --family c1=<-1|0|1>")
    if not famspec.startswith("c1="):
        raise ConfigError("family selector must look like c1=1")
    c1 = int(famspec.split("=", 1)[1])
    c3 = float(cfg.get("c3") if cfg.get("c3") is not None else
               {1: 2.0, 0: -1.0, -1: 1.5}[c1])
    if c1 == 1:
        fam = family_so21(c3, symmetric=True, domain=(0.0, 3.0))
    elif c1 == 0:
        fam = family_oscillator(c3, length=6.0)
        fam.domain = (-6.0, 6.0)
    else:
        fam = family_so3_trig(c3)
    return fam, None


def _sym_suite_entries(fam, ms, suite):
    """Symbolic identity residuals keyed by the report labels."""
    entries = []
    cls = fam.cls
    for m in ms:
        m = as_channel(m)
        if suite == "structure-constants":
            jm_m = build_ladder(fam, m - 1, "-")
            jp_m = build_ladder(fam, m - 1, "+")
            jm = build_ladder(fam, m, "-")
            jp = build_ladder(fam, m, "+")
            lhs = compose(jm, jp) - compose(jp_m, jm_m)
            rhs = identity_operator(fam.domain, m).scale(
                2.0 * cls.c1 * float(m) + cls.c2)
            entries.append((f"algebra1[m={m}]", "algebra1",
                            coefficient_residual(lhs, rhs)))
        elif suite == "casimir":
            h = build_h(fam, m)
            h2 = compose(h, h)
            for ordering, jfirst, jsecond, mm in (
                    ("J-J+", build_ladder(fam, m, "+"), build_ladder(fam, m, "-"), m),
                    ("J+J-", build_ladder(fam, m - 1, "-"), build_ladder(fam, m - 1, "+"), m)):
                prod = compose(jsecond, jfirst)
                shift = casimir_shift(cls, m, ordering)
                rhs = (h2 - identity_operator(fam.domain, m)
                       .scale(cls.M ** 2 + shift))
                entries.append((f"hDsquare[{ordering},m={m}]", "hDsquare",
                                coefficient_residual(prod, rhs)))
        elif suite == "intertwining":
            h_m = build_h(fam, m)
            h_m1 = build_h(fam, m + 1)
            jm = build_ladder(fam, m, "-")
            jp = build_ladder(fam, m, "+")
            r1 = coefficient_residual(compose(h_m, jm), compose(jm, h_m1))
            r2 = coefficient_residual(compose(h_m1, jp), compose(jp, h_m))
            entries.append((f"DiracSIP[h j-,m={m}]", "DiracSIP", r1))
            entries.append((f"DiracSIP[h j+,m={m}]", "DiracSIP", r2))
        elif suite == "factorization":
            from .chanop import weight_energy_squared
            EM = weight_energy_squared(cls, m, "highest")
            h_m = build_h(fam, m)
            h_m1 = build_h(fam, m + 1)
            jm = build_ladder(fam, m, "-")
            jp = build_ladder(fam, m, "+")
            lhs1 = compose(jm, jp)
            rhs1 = compose(h_m, h_m) - identity_operator(fam.domain, m).scale(EM)
            lhs2 = compose(jp, jm)
            rhs2 = compose(h_m1, h_m1) - identity_operator(fam.domain, m + 1).scale(EM)
            entries.append((f"shapeDirac[j-j+,m={m}]", "shapeDirac",
                            coefficient_residual(lhs1, rhs1)))
            entries.append((f"shapeDirac[j+j-,m={m}]", "shapeDirac",
                            coefficient_residual(lhs2, rhs2)))
    return entries


def cmd_verify(args):
    keys = ("model", "family", "c3", "n_defects", "k", "M", "suite", "m",
            "grid_n", "tol", "out", "format")
    cfg = _merge_config(args, keys)
    suite = cfg.get("suite") or "all"
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; known: {', '.join(SUITES)}")
    fam, spec = _family_from_cfg(cfg)
    fmt = cfg.get("format") or "json"
    out = cfg.get("out") or f"verify-{suite}.{fmt}"
    tol = float(cfg.get("tol") or 1e-10)
    grid_n = int(cfg.get("grid_n") or 2048)
    ms = ([as_channel(Fraction(str(cfg["m"])).limit_denominator(2))]
          if cfg.get("m") is not None else list(DEFAULT_MS))

    report = []

    def add(relation, paper_eq, residual, tolerance, ok=None):
        report.append({
            "relation": relation, "paper_eq": paper_eq,
            "residual": (None if residual is None else float(residual)),
            "tolerance": tolerance,
            "pass": (bool(residual <= tolerance) if ok is None and residual is not None
                     else ok),
        })

    symbolic_suites = ("structure-constants", "casimir", "intertwining",
                       "factorization")
    wanted = [s for s in SUITES if s not in ("all",)] if suite == "all" else [suite]
    for s in wanted:
        if s in symbolic_suites:
            for rel, eq, r in _sym_suite_entries(fam, ms, s):
                add(rel, eq, r, tol)
        elif s == "metric":
            if spec is None or spec.profile is None:
                add("metric", "g1g", None, tol, ok=None)
                continue
            rep = validate_metric(spec.profile, spec.cls)
            add(f"metric[{spec.name}]", "g1g", rep.residual, rep.tolerance)
        elif s == "n2":
            gtol = max(tol, 1e-6)
            for m in ms[:1] if suite == "all" else ms:
                try:
                    res = n2_superalgebra_residuals(fam, m, n=grid_n, tol=gtol)
                except ValueError as exc:
                    add(f"n2[m={m}]", "dnsusy1", None, gtol, ok=None)
                    continue
                for e in res["entries"]:
                    add(f"n2[{e['relation']},m={m}]", "dnsusy1",
                        e["residual"], gtol)
        elif s == "n4":
            gtol = max(tol, 1e-6)
            for m in ms[:1] if suite == "all" else ms:
                res = n4_superalgebra_residuals(fam, m, n=grid_n, tol=gtol)
                if res.get("skipped"):
                    add(f"n4[m={m}]", "JJ", None, gtol, ok=None)
                    continue
                for e in res["entries"]:
                    add(f"n4[{e['relation']},m={m}]", "JJ", e["residual"], gtol)
        elif s == "local-subalgebra":
            stol, ptol = max(tol, 1e-10), max(tol, 1e-8)
            for m in ms[:1] if suite == "all" else ms:
                res = local_subalgebra_residuals(fam, m, stol, ptol)
                if res.get("skipped"):
                    add(f"local[m={m}]", "PDMWITTEN", None, ptol, ok=None)
                    continue
                for e in res["entries"]:
                    t = stol if e["mode"] == "symbolic" else ptol
                    add(f"local[{e['relation']},m={m}]", _local_eq(e["relation"]),
                        e["residual"], t)
        elif s == "parity-report":
            for m in ms[:1] if suite == "all" else ms:
                rep = parity_conjugation_report(fam, m)
                add(f"parity[m={m},{rep.verdict}]", "parity",
                    None if not np.isfinite(max(rep.residual_h, rep.residual_j))
                    else max(rep.residual_h, rep.residual_j),
                    max(tol, 1e-10), ok=True)

    doc = {"schema_version": SCHEMA_VERSION, "suite": suite,
           "family": fam.label, "entries": report}
    ran = [e for e in report if e["pass"] is not None]
    ok = all(e["pass"] for e in ran)
    doc["pass"] = bool(ok)
    if fmt == "json":
        _atomic_write(out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        header = ("relation", "paper_eq", "residual", "tolerance", "pass")
        rows = [(e["relation"], e["paper_eq"],
                 "" if e["residual"] is None else e["residual"],
                 e["tolerance"], e["pass"]) for e in report]
        _write_rows(out, "csv", header, rows)
    print(f"wrote {out} ({len(report)} relations, pass={ok})")
    return EXIT_OK if ok else EXIT_TOLERANCE


def _local_eq(relation):
    if relation.startswith("{Q"):
        return "PDMWITTEN"
    if relation.startswith("{Jt(") and ",Q(" not in relation:
        return "PDMSHAPE"
    if relation.startswith("{Jt"):
        return "block"
    if relation.startswith("[H,"):
        return "PDMWITTEN"
    return "shapeall"


# -- wavefunction -------------------------------------------------------------

def cmd_wavefunction(args):
    keys = ("model", "c3", "n_defects", "k", "M", "m", "members", "grid_n",
            "out", "format")
    cfg = _merge_config(args, keys)
    spec = _load_model(cfg)
    if cfg.get("m") is None:
        raise ConfigError("wavefunction needs --m")
    m = as_channel(Fraction(str(cfg["m"])).limit_denominator(2))
    grid_n = int(cfg.get("grid_n") or 2048)
    out = cfg.get("out") or f"wavefunction-{spec.name}"
    grid = Grid(spec.domain, grid_n, bc=spec.bc)
    x = grid.points()

    try:
        ws = spec.weight_state(m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    states = []
    if spec.name == "pdm":
        u, v = ws.spinor
        states.append(("doublet-up", DiscreteSpinor.from_fn((u, const(0.0)), grid)))
        states.append(("doublet-down", DiscreteSpinor.from_fn((const(0.0), v), grid)))
    else:
        want = cfg.get("members")
        if want is None:
            d = _dimension_string(spec, m, ws.kind)
            want = 20 if d == "inf" else int(d)
        else:
            want = int(want)
        mult = climb(spec.family, ws, want - 1, grid_n=grid_n)
        if want > len(mult.members):
            raise ConfigError(
                f"requested {want} members; multiplet has {len(mult.members)}")
        for mm, dspin in mult.members[:want]:
            states.append((f"m{mm}", dspin))

    mass_col = None
    if spec.name == "pdm":
        from .specfun import jacobi_sn_cn_dn
        dnv = jacobi_sn_cn_dn(x, spec.params["k"])[2]
        mass_col = dnv ** 2

    written = []
    for i, (tag, dspin) in enumerate(states):
        vals = dspin.values / dspin.norm()
        dens = np.sum(np.abs(vals) ** 2, axis=1)
        header = ["x1", "re_u", "im_u", "re_v", "im_v", "density"]
        cols = [x, vals[:, 0].real, vals[:, 0].imag,
                vals[:, 1].real, vals[:, 1].imag, dens]
        if mass_col is not None:
            header.append("mass_profile")
            cols.append(mass_col)
        rows = list(zip(*cols))
        path = f"{out}-{tag}.csv"
        _write_rows(path, "csv", header, rows)
        written.append(path)
    print("wrote " + ", ".join(written))
    return EXIT_OK


# -- check-metric --------------------------------------------------------------

def cmd_checkmetric(args):
    keys = ("g11", "g22", "epsilon", "k", "c3", "out", "format", "tol")
    cfg = _merge_config(args, keys)
    if not cfg.get("g11") or not cfg.get("g22"):
        raise ConfigError("check-metric needs --g11 and --g22 expressions")
    k = cfg.get("k")
    try:
        g11 = parse_expression(cfg["g11"], k)
        g22 = parse_expression(cfg["g22"], k)
    except ExpressionError as exc:
        raise ConfigError(f"expression error: {exc}") from exc
    eps = int(cfg.get("epsilon") or 1)
    c3 = float(cfg.get("c3") or 1.0)
    tol = float(cfg.get("tol") or 1e-10)
    domain = _positive_domain(g11, g22)
    profile = MetricProfile(g11, g22, domain, epsilon=eps, label="user")
    fmt = cfg.get("format") or "json"
    out = cfg.get("out") or f"check-metric.{fmt}"
    entries = []
    fits = []
    for c1 in (-1, 0, 1):
        cls = AlgebraClass(c1, c3)
        rep = validate_metric(profile, cls, tol=tol)
        entry = {"paper_eq": "g1g", "relation": f"c1={c1}",
                 "residual": (None if not np.isfinite(rep.residual) else rep.residual),
                 "tolerance": tol, "pass": rep.passed}
        if rep.passed:
            fits.append(c1)
            g3 = derive_gauge_potential(profile, cls)
            xs = profile.sample_points(5)
            entry["g3_samples"] = {f"{_fmt(float(xx))}": float(np.real(g3(np.array([xx]))[0]))
                                   for xx in xs}
        entries.append(entry)
    doc = {"schema_version": SCHEMA_VERSION, "fits": fits, "entries": entries,
           "epsilon": eps}
    if fmt == "json":
        _atomic_write(out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        header = ("relation", "paper_eq", "residual", "tolerance", "pass")
        rows = [(e["relation"], e["paper_eq"],
                 "" if e["residual"] is None else e["residual"],
                 e["tolerance"], e["pass"]) for e in entries]
        _write_rows(out, "csv", header, rows)
    print(f"wrote {out}; fits: {fits if fits else 'none'}")
    return EXIT_OK


def _positive_domain(g11, g22, span=(0.05, 5.0), n=512):
    """Largest sampled subinterval of `span` where both entries are positive."""
    for lo, hi in ((span), (-span[1], -span[0]), (span[0] + 1.0, span[1] + 1.0)):
        xs = np.linspace(lo, hi, n)
        try:
            a = np.asarray(g11(xs), dtype=complex).real
            b = np.asarray(g22(xs), dtype=complex).real
        except Exception:
            continue
        good = np.isfinite(a) & np.isfinite(b) & (a > 0) & (b > 0)
        if not good.any():
            continue
        # longest run of good samples
        best_len, best_start, cur_start = 0, None, None
        for i, g in enumerate(list(good) + [False]):
            if g and cur_start is None:
                cur_start = i
            elif not g and cur_start is not None:
                if i - cur_start > best_len:
                    best_len, best_start = i - cur_start, cur_start
                cur_start = None
        if best_len >= 32:
            return (float(xs[best_start]), float(xs[best_start + best_len - 1]))
    raise ConfigError("could not find a domain where g11, g22 > 0")


def cmd_models(args):
    for name in MODEL_NAMES:
        spec = catalog(name)
        extras = ", ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                           for k, v in sorted(spec.params.items()))
        print(f"{name:16s} c1={spec.cls.c1:+d}  domain=({spec.domain[0]:.4g}, "
              f"{spec.domain[1]:.4g})  {extras}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="diracalg",
        description="Spectra and operator-identity verification for "
                    "separable two-component Dirac operators")
    p.add_argument("--config", help="JSON config file; flags override fields")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q):
        q.add_argument("--out")
        q.add_argument("--format", choices=("csv", "json"))
        q.add_argument("--tol", type=float)
        q.add_argument("--grid-n", type=int, dest="grid_n")

    q = sub.add_parser("spectrum", help="algebraic vs numerical spectrum table")
    q.add_argument("--model", choices=MODEL_NAMES)
    q.add_argument("--c3", type=float)
    q.add_argument("--n-defects", type=int, dest="n_defects")
    q.add_argument("--k", type=float)
    q.add_argument("--M", type=float)
    q.add_argument("--m-range", dest="m_range")
    common(q)
    q.set_defaults(fn=cmd_spectrum)

    q = sub.add_parser("verify", help="operator-identity residual suites")
    q.add_argument("--model", choices=MODEL_NAMES)
    q.add_argument("--family")
    q.add_argument("--c3", type=float)
    q.add_argument("--n-defects", type=int, dest="n_defects")
    q.add_argument("--k", type=float)
    q.add_argument("--M", type=float)
    q.add_argument("--suite", choices=SUITES)
    q.add_argument("--m")
    common(q)
    q.set_defaults(fn=cmd_verify)

    q = sub.add_parser("wavefunction", help="sampled states as CSV")
    q.add_argument("--model", choices=MODEL_NAMES)
    q.add_argument("--c3", type=float)
    q.add_argument("--n-defects", type=int, dest="n_defects")
    q.add_argument("--k", type=float)
    q.add_argument("--M", type=float)
    q.add_argument("--m")
    q.add_argument("--members", type=int)
    common(q)
    q.set_defaults(fn=cmd_wavefunction)

    q = sub.add_parser("check-metric", help="fit a metric to the algebra classes")
    q.add_argument("--g11")
    q.add_argument("--g22")
    q.add_argument("--epsilon", type=int, choices=(-1, 1))
    q.add_argument("--k", type=float)
    q.add_argument("--c3", type=float)
    common(q)
    q.set_defaults(fn=cmd_checkmetric)

    q = sub.add_parser("models", help="list the model catalog")
    q.set_defaults(fn=cmd_models)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
