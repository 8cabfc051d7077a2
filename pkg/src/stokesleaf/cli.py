"""Command-line front end for the verification suites.

Every command produces a list of records.  Each record carries a ``tag``
naming the identity it checked and a boolean ``passed``; measurement-only
commands always pass.  Exit status is 0 when every record passes, 1 on the
first failing record (which is echoed to stderr) and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import isomonodromy as iso
from . import leaves as lv
from . import poisson as pb
from .laurent import GaussianRational, LaurentScalar
from .surfaces import (
    ShearPoint,
    SurfaceFamily,
    boundary_monodromy_trace,
    boundary_prediction,
    point_from_sums,
    random_point,
    stokes_matrix,
)

log = logging.getLogger("stokesleaf")

COMMANDS = (
    "verify-bracket", "stokes", "jordan", "leaf-dim", "rank", "minkowski", "markov",
    "char-identity", "isospectral", "flow", "pvi-check", "dual-monodromy",
    "calibrate-incidence", "skein", "casimir", "trace-bracket-calibration",
    "commutator-report",
)

TOL_RANGE = (1e-14, 1e-2)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Everything a run depends on; ``seed`` fixes every random draw."""

    command: str
    family: str = "an"
    n: int | None = None
    mode: str = "default"
    seed: int = 0
    tol: float | None = None
    samples: int | None = None
    emit: str = "json"
    jobs: int = 1
    Z: list | None = None
    Y: list | None = None
    X: list | None = None
    dump_symbolic: bool = False
    step: float | None = None
    q: complex | None = None
    mu: complex = 0.3
    indices: list | None = None
    stride: int = 100

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.emit not in ("json", "csv", "text"):
            raise UsageError(f"unknown output format {self.emit!r}")
        if self.tol is not None and not (TOL_RANGE[0] <= self.tol <= TOL_RANGE[1]):
            raise UsageError(f"tol must lie in [{TOL_RANGE[0]}, {TOL_RANGE[1]}]")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise UsageError("seed must be a 64-bit unsigned integer")

    @property
    def surface(self) -> SurfaceFamily:
        n = self.n if self.n is not None else (3 if self.family.lower() == "an" else 4)
        try:
            return SurfaceFamily(self.family, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def tol_or(self, default: float) -> float:
        return default if self.tol is None else self.tol

    def samples_or(self, default: int) -> int:
        return default if self.samples is None else self.samples

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise UsageError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


# -- serialization helpers -----------------------------------------------------------

def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, GaussianRational):
        return str(x.re) if x.im == 0 else [str(x.re), str(x.im)]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, LaurentScalar):
        return x.serialize()
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)) or hasattr(x, "imag"):
        z = complex(x)
        return _plain(z.real) if z.imag == 0 else [_plain(z.real), _plain(z.imag)]
    return x


def _record(tag: str, passed: bool, **data) -> dict:
    rec = {"tag": tag, "passed": bool(passed)}
    rec.update(data)
    return _plain(rec)


def _parse_values(text: str | None) -> list | None:
    if text is None or text == "":
        return None if text is None else []
    out = []
    for part in text.split(","):
        v = complex(part.strip().replace("i", "j"))
        out.append(v.real if v.imag == 0 else v)
    return out


def _points(cfg: RunConfig, fam: SurfaceFamily, count: int) -> list[ShearPoint]:
    if cfg.Z is not None:
        try:
            return [ShearPoint(fam, tuple(cfg.Z), tuple(cfg.Y or ()))]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    rng = np.random.default_rng(cfg.seed)
    return [random_point(fam, rng) for _ in range(count)]


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally across processes."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_star, [(fn, it) for it in items]))


def _star(job):
    fn, args = job
    return fn(*args)


def _pt_args(p: ShearPoint):
    return (p.family.kind, p.family.n, p.Z, p.Y)


# -- workers (top level so they can be pickled) ----------------------------------------

def _leaf_worker(kind, n, Z, Y, tol):
    fam = SurfaceFamily(kind, n)
    pt = ShearPoint(fam, Z, Y)
    with lv._mp(None):
        S = stokes_matrix(fam, pt, backend="mpmath")
        prof = lv.jordan_profile(lv.monodromy_product(S), 1e-9)
    try:
        d, leaf = lv.bondal_dimension(prof, n)
    except lv.ProfileError as exc:
        return None, None, str(exc)
    return d, leaf, None


def _jordan_worker(kind, n, Z, Y, tol):
    fam = SurfaceFamily(kind, n)
    chk = lv.verify_jordan_theorems(fam, ShearPoint(fam, Z, Y), tol)
    return chk.max_rel_error, chk.blocks_match, chk.skipped, chk.passed(tol)


# -- commands -----------------------------------------------------------------------

def cmd_verify_bracket(cfg: RunConfig) -> list:
    fam = cfg.surface
    form = pb.incidence_form(fam)
    S = stokes_matrix(fam)
    tag = "goldman-bracket=du-bracket"
    recs = []
    for a, b in itertools.combinations(list(S.pairs()), 2):
        diff = pb.bracket_identity(fam, a, b, form)
        extra = {"difference": diff.serialize()} if cfg.dump_symbolic and not diff.is_zero() else {}
        recs.append(_record(tag, diff.is_zero(), a=list(a), b=list(b), terms=len(diff), **extra))
    return recs


def cmd_stokes(cfg: RunConfig) -> list:
    fam = cfg.surface
    recs = []
    if cfg.dump_symbolic or cfg.mode == "symbolic":
        S = stokes_matrix(fam)
        for i, j in S.pairs():
            recs.append(_record("stokes-entry", True, i=i, j=j, G=S.G(i, j).serialize()))
        if fam.kind == "An":
            tr = boundary_monodromy_trace(fam)
            recs.append(_record("boundary-trace", True, trace=tr.serialize()))
        return recs
    for k, pt in enumerate(_points(cfg, fam, cfg.samples_or(1))):
        S = stokes_matrix(fam, pt)
        for i, j in S.pairs():
            recs.append(_record("stokes-entry", True, sample=k, i=i, j=j, G=S.G(i, j)))
        if fam.kind == "An":
            tr = boundary_monodromy_trace(fam, pt)
            pred = boundary_prediction(pt)
            err = abs(tr - pred) / max(1.0, abs(pred))
            recs.append(_record("boundary-trace=-2cosh(total)", err <= cfg.tol_or(1e-9),
                                sample=k, trace=tr, predicted=pred, residual=err))
    return recs


def cmd_jordan(cfg: RunConfig) -> list:
    fam = cfg.surface
    tol = cfg.tol_or(1e-8)
    pts = _points(cfg, fam, cfg.samples_or(10))
    out = _pmap(_jordan_worker, [_pt_args(p) + (tol,) for p in pts], cfg.jobs)
    recs = []
    for k, (p, (err, match, skipped, ok)) in enumerate(zip(pts, out)):
        recs.append(_record("jordan-spectrum", ok, sample=k, Z=list(p.Z), Y=list(p.Y),
                            max_rel_error=err, blocks_match=match, skipped=skipped))
    return recs


def cmd_leaf_dim(cfg: RunConfig) -> list:
    fam = cfg.surface
    recs = []
    if cfg.mode == "generic":
        rng = np.random.default_rng(cfg.seed)
        expected = lv.generic_leaf_dimension(fam.n)
        for k in range(cfg.samples_or(10)):
            S = lv.random_generic_stokes(fam.n, rng)
            d, leaf = lv.bondal_dimension(lv.jordan_profile(lv.monodromy_product(S)), fam.n)
            recs.append(_record("leaf-dimension-generic", leaf == expected, sample=k, d=d,
                                leaf_dim=leaf, expected=expected, S=S))
        return recs
    expected = lv.predicted_leaf_dimension(fam)
    pts = _points(cfg, fam, cfg.samples_or(10))
    out = _pmap(_leaf_worker, [_pt_args(p) + (cfg.tol_or(1e-9),) for p in pts], cfg.jobs)
    for k, (p, (d, leaf, err)) in enumerate(zip(pts, out)):
        recs.append(_record("leaf-dimension", leaf == expected, sample=k, Z=list(p.Z), Y=list(p.Y),
                            d=d, leaf_dim=leaf, expected=expected, error=err))
    return recs


def cmd_rank(cfg: RunConfig) -> list:
    fam = cfg.surface
    expected = 3 if fam.kind == "An" else 4
    recs = []
    for k, p in enumerate(_points(cfg, fam, cfg.samples_or(10))):
        with lv._mp(None):
            S = stokes_matrix(fam, p, backend="mpmath")
            r = lv.symmetric_rank(S.to_mpmath(), cfg.tol)
        recs.append(_record("rank(S+S^T)", r == min(expected, fam.n), sample=k, rank=r,
                            expected=min(expected, fam.n)))
    return recs


def cmd_minkowski(cfg: RunConfig) -> list:
    fam = cfg.surface
    tol = cfg.tol_or(1e-9)
    recs = []
    for k, p in enumerate(_points(cfg, fam, cfg.samples_or(10))):
        mv = lv.minkowski_vectors(fam, p)
        S = stokes_matrix(fam, p).to_numpy()
        target = S + S.T
        err = float(np.max(np.abs(mv.gram - target) / np.maximum(1.0, np.abs(target))))
        recs.append(_record("minkowski-gram=G", err <= tol, sample=k, max_rel_error=err,
                            dimension=mv.vectors.shape[1]))
    return recs


def cmd_markov(cfg: RunConfig) -> list:
    fam = cfg.surface
    if fam.kind != "An" or fam.n != 3:
        raise UsageError("markov is defined for --family an --n 3")
    tol = cfg.tol_or(1e-9)
    recs = []
    for k, p in enumerate(_points(cfg, fam, cfg.samples_or(100))):
        rep = lv.markov_element(p)
        M = complex(rep.M)
        ok = rep.residual <= tol and (p.mode != "numeric-real" or M.real >= -tol * (1 + abs(M)))
        recs.append(_record("markov=(e^P-e^-P)^2", ok, sample=k, M=M, predicted=rep.predicted,
                            residual=rep.residual))
    return recs


def cmd_char_identity(cfg: RunConfig) -> list:
    fam = cfg.surface
    tol = cfg.tol_or(1e-8)
    rng = np.random.default_rng(cfg.seed + 1)
    recs = []
    pts = _points(cfg, fam, cfg.samples_or(10))
    for k, p in enumerate(pts):
        lams = _lambda_samples(rng, 20)
        res = lv.characteristic_identity(fam, p, lams)
        recs.append(_record("char-det-closed-form", res <= tol, sample=k, residual=res))
    # same Casimirs, different point: the determinants agree
    prng = np.random.default_rng(cfg.seed + 2)
    p0 = pts[0]
    p1 = point_from_sums(fam, prng, p0)
    lams = _lambda_samples(rng, 5)
    worst = 0.0
    for lam in lams:
        a = lv.characteristic_determinant(stokes_matrix(fam, p0, backend="mpmath").to_mpmath(), lam)
        b = lv.characteristic_determinant(stokes_matrix(fam, p1, backend="mpmath").to_mpmath(), lam)
        worst = max(worst, float(abs(a - b) / max(abs(a), 1e-300)))
    recs.append(_record("char-det-depends-on-casimirs-only", worst <= tol, residual=worst))
    return recs


def _lambda_samples(rng: np.random.Generator, count: int) -> list:
    out = []
    while len(out) < count:
        lam = complex(np.exp(rng.uniform(-0.7, 0.7) + 1j * rng.uniform(0, 2 * np.pi)))
        if min(abs(lam - b) for b in (0, 1, -1, 1j, -1j)) > 0.05:
            out.append(lam)
    return out


def cmd_isospectral(cfg: RunConfig) -> list:
    tol = cfg.tol_or(1e-10)
    if cfg.X is not None:
        triples = [np.array(cfg.X, dtype=float)]
    else:
        rng = np.random.default_rng(cfg.seed)
        triples = [rng.uniform(-2, 2, 3) for _ in range(cfg.samples_or(10))]
    recs = []
    for k, X in enumerate(triples):
        r = lv.isospectral_solve(X, seed=cfg.seed + k)
        real = r.is_real
        consistent = real == (r.markov >= 0)
        recs.append(_record("isospectral-identification", r.converged and r.residual <= tol and consistent,
                            sample=k, X=X, Z=r.Z, residual=r.residual, real=real, markov=r.markov))
    return recs


def cmd_flow(cfg: RunConfig) -> list:
    n = cfg.n or 4
    step = cfg.step or 1e-3
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol_or(1e-6)
    recs = []
    for k in range(cfg.samples_or(1)):
        st = iso.FlowState.random(n, rng, 0.5)
        u = st.u.copy()
        u[0] = 0.0
        # keep the other poles off the real segment [0, 1]
        u[1:] = u[1:] + 1j * np.sign(u[1:].imag + 1e-300) * 0.5
        st = iso.FlowState(u, st.V)
        traj = iso.integrate_flow(st, 0, (0.0, 1.0), step)
        drift = iso.eigenvalue_drift(traj)
        half = iso.eigenvalue_drift(iso.integrate_flow(st, 0, (0.0, 1.0), step / 2))
        lp = max(iso.lie_poisson_check(st, i) for i in range(n))
        d = traj.to_dict()
        s = max(1, cfg.stride)
        d["times"] = d["times"][::s]
        d["V"] = d["V"][::s]
        recs.append(_record("isospectral-flow", drift <= tol, sample=k, eigenvalue_drift=drift,
                            drift_half_step=half, lie_poisson_residual=lp, trajectory=d))
        recs.append(_record("lie-poisson={V,H}", lp <= 1e-10, sample=k, residual=lp))
    return recs


def cmd_pvi_check(cfg: RunConfig) -> list:
    step = cfg.step or 1e-3
    mu = complex(cfg.mu)
    variant = "uncorrected" if cfg.mode == "uncorrected" else "corrected"
    a = iso.pvi_experiment(mu, seed=cfg.seed, step=step, variant=variant)
    b = iso.pvi_experiment(mu, seed=cfg.seed, step=step / 2, variant=variant)
    tol = cfg.tol_or(1e-3)
    ratio = a.residual / b.residual if (a.residual and b.residual) else None
    ok = a.residual is not None and a.residual <= tol and ratio is not None and ratio >= 2
    return [_record("painleve-vi-residual", ok, mu=mu, step=step, residual=a.residual,
                    residual_half_step=b.residual, improvement=ratio, variant=variant,
                    flagged=a.flagged)]


def cmd_dual_monodromy(cfg: RunConfig) -> list:
    n = cfg.n or 4
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol_or(1e-10)
    recs = []
    if n <= 4:
        sym = iso.dual_trace_symbolic(n)
        recs.append(_record("Tr(AiAj)+Vij^2=0 symbolic", all(p.is_zero() for p in sym.values()), n=n))
    for k in range(cfg.samples_or(10)):
        V = iso.FlowState.random(n, rng).V
        _, rep = iso.dual_residues(V, complex(rng.normal()))
        worst = max(r["residual"] for r in rep)
        recs.append(_record("Tr(AiAj)+Vij^2=0", worst <= tol, sample=k, residual=worst))
        S = iso.random_unipotent(n, rng)
        q = cfg.q if cfg.q is not None else iso.random_q(S, rng)
        mt = iso.monodromy_matrices(S, q)
        res = mt.trace_identity_residual()
        det = mt.determinant_residual()
        recs.append(_record("Tr(MiMj)=n-2-2q+qSij^2", res <= tol and det <= 1e-10 * max(1, abs(q)),
                            sample=k, q=q, residual=res, det_residual=det))
    return recs


def cmd_calibrate_incidence(cfg: RunConfig) -> list:
    fam = cfg.surface
    res = pb.calibrate_incidence_form(fam)
    expected = pb._form_from_vertices(fam, pb.vertex_list(fam))
    same = res.form == expected
    entries = {f"{a},{b}": int(res.form.entry(a, b)) for a, b in itertools.combinations(fam.edges, 2)
               if res.form.entry(a, b) != 0}
    return [_record("incidence-calibration", res.unique and same, unique=res.unique, rank=res.rank,
                    unknowns=res.unknowns, equations=res.equations, matches_vertex_form=same,
                    entries=entries)]


def cmd_skein(cfg: RunConfig) -> list:
    fam = cfg.surface
    rng = np.random.default_rng(cfg.seed)
    recs = []
    for k in range(cfg.samples_or(50)):
        A, B = pb.random_word(fam, rng), pb.random_word(fam, rng)
        r = pb.skein_check(A, B, family=fam)
        recs.append(_record("skein", r.is_zero(), sample=k, A=repr(A), B=repr(B), terms=len(r)))
    return recs


def cmd_casimir(cfg: RunConfig) -> list:
    fam = cfg.surface
    rep = pb.casimir_check(fam)
    recs = []
    for name, res in rep.results.items():
        bad = [list(p) for p, c in res.items() if c]
        recs.append(_record("casimir", not bad, function=name, failing_pairs=bad))
    return recs


def cmd_trace_bracket_calibration(cfg: RunConfig) -> list:
    fam = cfg.surface
    rep = pb.trace_bracket_calibration(fam)
    ratios = {f"{a}|{b}": (None if r is None else r) for (a, b), r in rep.ratios.items()}
    return [_record("trace-bracket-ratio (measurement)", True, constant=rep.constant,
                    values=sorted(str(v) for v in rep.values), ratios=ratios,
                    skipped=[[list(a), list(b)] for a, b in rep.skipped])]


def cmd_commutator_report(cfg: RunConfig) -> list:
    n = cfg.n or 4
    idx = tuple(cfg.indices or (1, 2, 3, 4))
    rng = np.random.default_rng(cfg.seed)
    samples = [iso.random_unipotent(n, rng) for _ in range(cfg.samples_or(5))]
    recs = []
    qs = [cfg.q] if cfg.q is not None else [0.5, 0.7, 1.3, 2.0]
    for q in qs:
        rep = iso.commutator_trace_report(samples, q, idx)
        recs.append(_record("commutator-trace-ratio (measurement)", True, **rep.to_dict()))
    return recs


DISPATCH = {
    "verify-bracket": cmd_verify_bracket,
    "stokes": cmd_stokes,
    "jordan": cmd_jordan,
    "leaf-dim": cmd_leaf_dim,
    "rank": cmd_rank,
    "minkowski": cmd_minkowski,
    "markov": cmd_markov,
    "char-identity": cmd_char_identity,
    "isospectral": cmd_isospectral,
    "flow": cmd_flow,
    "pvi-check": cmd_pvi_check,
    "dual-monodromy": cmd_dual_monodromy,
    "calibrate-incidence": cmd_calibrate_incidence,
    "skein": cmd_skein,
    "casimir": cmd_casimir,
    "trace-bracket-calibration": cmd_trace_bracket_calibration,
    "commutator-report": cmd_commutator_report,
}


# -- output -------------------------------------------------------------------------

def render(cfg: RunConfig, records: list) -> str:
    passed = all(r["passed"] for r in records)
    if cfg.emit == "json":
        doc = {"command": cfg.command, "config": _plain(asdict(cfg)), "passed": passed,
               "records": records}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if cfg.emit == "csv":
        keys = sorted({k for r in records for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v)
                        for k, v in r.items()})
        return buf.getvalue()
    lines = []
    for r in records:
        rest = {k: v for k, v in r.items() if k not in ("tag", "passed", "trajectory")}
        lines.append(f"{'PASS' if r['passed'] else 'FAIL'}  {r['tag']}  {json.dumps(rest, sort_keys=True)}")
    lines.append(f"{cfg.command}: {sum(r['passed'] for r in records)}/{len(records)} passed")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, out=None) -> int:
    """Execute one command and write its report; returns the exit status."""
    out = out or sys.stdout
    try:
        records = DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.write(render(cfg, records))
    for r in records:
        if not r["passed"]:
            print("first failure: " + json.dumps(r, sort_keys=True), file=sys.stderr)
            return 1
    return 0


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return RunConfig.from_dict(data)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="an", choices=["an", "cfp"])
    p.add_argument("--n", type=int)
    p.add_argument("--mode", default="default",
                   help="command variant: symbolic (stokes), generic (leaf-dim), uncorrected (pvi-check)")
    p.add_argument("--Z", help="comma separated Z coordinates")
    p.add_argument("--Y", help="comma separated Y coordinates")
    p.add_argument("--X", help="comma separated X triple (isospectral)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--emit", default="json", choices=["json", "csv", "text"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump-symbolic", action="store_true")
    p.add_argument("--step", type=float)
    p.add_argument("--q", type=complex)
    p.add_argument("--mu", type=complex, default=0.3)
    p.add_argument("--indices", help="four 1-based indices i<j<k<l (commutator-report)")
    p.add_argument("--stride", type=int, default=100, help="trajectory output stride (flow)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stokesleaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(sub.add_parser(name))
    r = sub.add_parser("run", help="run a command described by a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = load_config(args.config)
        else:
            indices = [int(x) for x in args.indices.split(",")] if args.indices else None
            cfg = RunConfig(
                command=args.command, family=args.family, n=args.n, mode=args.mode,
                seed=args.seed, tol=args.tol, samples=args.samples, emit=args.emit,
                jobs=args.jobs, Z=_parse_values(args.Z), Y=_parse_values(args.Y),
                X=_parse_values(args.X), dump_symbolic=args.dump_symbolic, step=args.step,
                q=args.q, mu=args.mu, indices=indices, stride=args.stride,
            )
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
