"""``conformal-flow``: reproducible experiments over the toolkit.

Commands
--------
transform  clock/derivative/integral identity report over the function library
evolve     mild-solution trace of a built-in family on the alpha clock
orbit      hypercyclic-candidate construction and orbit distance trace
dsw        spectral chaos-criterion hypothesis report
isometry   weighted-norm / classical-norm transfer report
selftest   reduced-size invariant matrix for every module

Descriptors come from ``key = value`` config files (``#`` comments) with
command-line flags taking precedence.  All validation happens before any
output is written; outputs are CSV (UTF-8, LF, 17 significant digits) written
atomically, plus a ``manifest.txt`` echoing the descriptor, versions, wall
time and per-check results.

Exit codes: 0 success, 1 check failure, 2 validation error, 3 resource or
domain error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, fields

import numpy as np

from . import functions, selftest
from .errors import (ContractError, CriterionViolationError, DomainError,
                     NumericalFailureError, WindowTooSmallError)
from .kernel import (Order, clock, conformable_derivative, conformable_integral,
                     default_epsilons, factor_through_clock,
                     graded_weighted_quadrature)
from .dsw import (DSWConfig, SpectralRectangle, dsw_report_text, dsw_verdict,
                  weighted_translation_eigenfamily)
from .reporting import RunManifest, atomic_write_text, csv_text
from .semigroups import alpha_from_classical, mild_solution, multiplication_family
from .spaces import (GridFunction, SpaceDescriptor, inner_product_alpha,
                     inner_product_l2, make_grid, norm_lp, norm_p_alpha, u_p)
from .translation import TargetList, WeightCocycle, build_hypercyclic_candidate, orbit_trace

COMMANDS = ("transform", "evolve", "orbit", "dsw", "isometry", "selftest")


class ValidationError(ValueError):
    pass


@dataclass
class ExperimentDescriptor:
    """Validated parameter set for one experiment run."""

    command: str
    alpha: float | None = None
    p: float = 2.0
    kappa: float = 1.0
    epsilon: float = 0.1
    n: int | None = None
    x_max: float | None = None
    seed: int = 0
    tolerance: float | None = None
    out: str = "conformal_flow_out"
    targets: int = 3
    re_min: float | None = None
    re_max: float | None = None
    im_min: float | None = None
    im_max: float | None = None
    inject_negative_control: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.alpha is not None and not (0.0 < self.alpha <= 1.0):
            raise ValidationError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (np.isfinite(self.p) and self.p >= 1):
            raise ValidationError(f"p must be finite and >= 1, got {self.p}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.n is not None and self.n < 2:
            raise ValidationError(f"n must be at least 2, got {self.n}")
        if self.x_max is not None and not (np.isfinite(self.x_max) and self.x_max > 0):
            raise ValidationError(f"x_max must be finite and positive, got {self.x_max}")
        if self.tolerance is not None and not (np.isfinite(self.tolerance)
                                               and self.tolerance > 0):
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if not np.isfinite(self.kappa):
            raise ValidationError("kappa must be finite")
        if self.command == "orbit":
            if self.kappa <= 0:
                raise ValidationError(
                    "criterion violation: the hypercyclic construction needs "
                    f"kappa > 0 (no orbit growth to exploit), got {self.kappa}")
            if not (0 <= self.targets <= 3):
                raise ValidationError("targets must be between 0 and 3")
        region = [self.re_min, self.re_max, self.im_min, self.im_max]
        if any(v is not None for v in region) and any(v is None for v in region):
            raise ValidationError("region needs all of re_min, re_max, im_min, im_max")
        if self.re_min is not None:
            try:
                SpectralRectangle(self.re_min, self.re_max, self.im_min, self.im_max)
            except DomainError as exc:
                raise ValidationError(f"malformed region: {exc}") from exc

    def echo(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}


_KEY_ALIASES = {"output_path": "out", "x-max": "x_max", "output-path": "out"}
_INT_KEYS = {"n", "seed", "targets"}
_STR_KEYS = {"out", "command"}


def parse_config_file(path) -> dict:
    """Line-oriented ``key = value`` with ``#`` comments."""
    values = {}
    valid = {f.name for f in fields(ExperimentDescriptor)}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            key = _KEY_ALIASES.get(key, key)
            if key not in valid:
                raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
            if key in _STR_KEYS:
                values[key] = val
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key == "inject_negative_control":
                values[key] = val.lower() in ("1", "true", "yes")
            else:
                values[key] = float(val)
    return values


def build_descriptor(args: argparse.Namespace) -> ExperimentDescriptor:
    values = {"command": args.command}
    if args.config:
        values.update(parse_config_file(args.config))
    for key in ("alpha", "p", "kappa", "epsilon", "n", "x_max", "seed",
                "tolerance", "out", "targets", "re_min", "re_max", "im_min",
                "im_max"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "inject_negative_control", False):
        values["inject_negative_control"] = True
    desc = ExperimentDescriptor(**values)
    desc.validate()
    return desc


# ---------------------------------------------------------------------------
# command implementations; each returns (exit_code, manifest)


def _alphas(desc: ExperimentDescriptor):
    return [desc.alpha] if desc.alpha is not None else [0.25, 0.5, 1.0]


def _richardson_derivative(order, f, t):
    eps = default_epsilons(order, t)
    d0 = conformable_derivative(order, f, t, eps[-2])
    d1 = conformable_derivative(order, f, t, eps[-1])
    return (4.0 * d1 - d0) / 3.0


def run_transform(desc: ExperimentDescriptor, out_dir: str, manifest: RunManifest):
    tol = desc.tolerance if desc.tolerance is not None else 1e-8
    ts = (0.25, 0.7, 1.3, 2.4, 4.1)
    rows = []
    worst = 0.0
    for alpha in _alphas(desc):
        order = Order(alpha)
        for f in functions.LIBRARY:
            g = factor_through_clock(order, f)
            fac = max(abs(complex(g(clock(order, t))) - complex(f(t)))
                      / (1.0 + abs(complex(f(t)))) for t in ts)
            rows.append((f.name, alpha, "factorization", fac))

            der = 0.0
            for t in (0.6, 1.1, 2.3):
                ref = t ** (1.0 - alpha) * complex(f.derivative(t))
                der = max(der, abs(_richardson_derivative(order, f, t) - ref)
                          / (1.0 + abs(ref)))
            rows.append((f.name, alpha, "derivative", der))

            integ = 0.0
            for a, x in ((0.0, 1.5), (0.5, 4.0)):
                lhs = conformable_integral(order, f, a, x, tol=1e-10)
                rhs = graded_weighted_quadrature(order, f, a, x)
                integ = max(integ, abs(lhs - rhs) / (1.0 + abs(rhs)))
            rows.append((f.name, alpha, "integral", integ))

            if alpha == 1.0:
                deg = max(abs(float(clock(order, t)) - t) / t for t in ts)
                for t in (0.6, 1.1):
                    conf = conformable_derivative(order, f, t, 1e-3, scheme="one_sided")
                    classical = (complex(f(t + 1e-3)) - complex(f(t))) / 1e-3
                    deg = max(deg, abs(conf - classical) / (1.0 + abs(classical)))
                rows.append((f.name, alpha, "degeneracy", deg))
    worst = max(r[3] for r in rows)

    path = os.path.join(out_dir, "transform_report.csv")
    atomic_write_text(path, csv_text("function,alpha,identity,max_error", rows))
    manifest.add_output(path)
    manifest.add_check("identities-within-tolerance", worst <= tol)
    print(f"transform: {len(rows)} identity rows, worst error {worst:.3e} "
          f"(tolerance {tol:g})")
    return 0 if worst <= tol else 1


def run_evolve(desc: ExperimentDescriptor, out_dir: str, manifest: RunManifest):
    alpha = desc.alpha if desc.alpha is not None else 0.5
    n = desc.n if desc.n is not None else 200
    x_max = desc.x_max if desc.x_max is not None else 4.0
    order = Order(alpha)
    space = SpaceDescriptor(p=2.0, order=order, x_max=x_max, n=n)
    grid = make_grid(space)
    family = alpha_from_classical(
        multiplication_family(lambda x: -x ** 2), order)
    x0 = GridFunction(grid, np.exp(-((grid - 0.5 * x_max) / (0.2 * x_max)) ** 2))
    times = np.logspace(-3, np.log10(3.0), 20)
    states = mild_solution(family, x0, times)

    rows = []
    for t, state in zip(times, states):
        s = float(clock(order, t))
        for idx, v in enumerate(state.values):
            rows.append((float(t), s, idx, v.real, v.imag))
    path = os.path.join(out_dir, "evolve.csv")
    atomic_write_text(path, csv_text("t,s,node_index,re,im", rows))
    manifest.add_output(path)

    # correspondence check: the classical family at s = clock(t) must agree
    classical = multiplication_family(lambda x: -x ** 2)
    worst = max((state - classical(float(clock(order, t)), x0)).sup_norm()
                for t, state in zip(times, states))
    ok = worst <= 1e-10 * (1.0 + x0.sup_norm())
    manifest.add_check("mild-solution-correspondence", ok)
    print(f"evolve: {len(times)} times on alpha={alpha} clock, "
          f"correspondence gap {worst:.3e}")
    return 0 if ok else 1


def _builtin_targets(space: SpaceDescriptor, count: int) -> TargetList:
    xi = space.xi_grid()
    grid = make_grid(space)
    profiles = [np.where(xi <= 1.0, 1.0, 0.0),
                np.where(xi <= 0.5, 1.5, 0.0),
                np.where((xi > 0.25) & (xi <= 0.75), -1.0, 0.0)]
    return TargetList(targets=tuple(GridFunction(grid, v) for v in profiles[:count]),
                      support_length=1.0, epsilon=0.1)


def run_orbit(desc: ExperimentDescriptor, out_dir: str, manifest: RunManifest):
    alpha = desc.alpha if desc.alpha is not None else 0.5
    n = desc.n if desc.n is not None else 10_000
    x_max = desc.x_max if desc.x_max is not None else 16.0 ** (1.0 / alpha)
    space = SpaceDescriptor(p=desc.p, order=Order(alpha), x_max=x_max, n=n)
    cocycle = WeightCocycle(kappa=desc.kappa)
    targets = _builtin_targets(space, desc.targets)
    targets = TargetList(targets=targets.targets, support_length=1.0,
                         epsilon=desc.epsilon)

    candidate = build_hypercyclic_candidate(space, cocycle, targets)
    if candidate.hit_times:
        probes = np.geomspace(space.h, 1.2 * max(candidate.hit_times), 200)
        time_grid = np.union1d(np.asarray(candidate.hit_times), probes)
    else:
        time_grid = np.array([])
    trace = orbit_trace(space, cocycle, candidate.f, targets, time_grid)

    orbit_path = os.path.join(out_dir, "orbit.csv")
    atomic_write_text(orbit_path,
                      csv_text("t,target_index,distance",
                               [(t, k, d) for t, k, d in trace.entries]))
    meta_path = os.path.join(out_dir, "candidate.txt")
    atomic_write_text(meta_path, candidate.to_metadata())
    manifest.add_output(orbit_path)
    manifest.add_output(meta_path)

    print("orbit: hit table (time, target, distance, tail bound)")
    for j, t in enumerate(candidate.hit_times):
        print(f"  t={t:<12.6g} target={j} distance={candidate.hit_distances[j]:.3e} "
              f"bound={candidate.tail_bounds[j]:.3e}")
    hits_ok = all(d <= targets.epsilon for d in candidate.hit_distances)
    manifest.add_check("all-targets-hit", hits_ok)
    return 0 if hits_ok else 1


def run_dsw(desc: ExperimentDescriptor, out_dir: str, manifest: RunManifest):
    alpha = desc.alpha if desc.alpha is not None else 0.5
    n = desc.n if desc.n is not None else 10_000
    x_max = desc.x_max if desc.x_max is not None else 36.0 ** (1.0 / alpha)
    space = SpaceDescriptor(p=desc.p, order=Order(alpha), x_max=x_max, n=n)
    if desc.re_min is not None:
        region = SpectralRectangle(desc.re_min, desc.re_max, desc.im_min, desc.im_max)
    else:
        region = SpectralRectangle(desc.kappa - 1.5, desc.kappa - 0.5, -1.0, 1.0)

    fam = weighted_translation_eigenfamily(space, kappa=desc.kappa, region=region)
    report = dsw_verdict(fam, DSWConfig(seed=desc.seed))

    txt_path = os.path.join(out_dir, "dsw_report.txt")
    csv_path = os.path.join(out_dir, "dsw_residuals.csv")
    atomic_write_text(txt_path, dsw_report_text(report))
    atomic_write_text(csv_path,
                      csv_text("re_lambda,im_lambda,eigen_residual,cr_residual",
                               report.lambda_rows))
    manifest.add_output(txt_path)
    manifest.add_output(csv_path)
    manifest.add_check("hypotheses-supported", report.supported)
    print(f"dsw: verdict {report.verdict} "
          f"(eigen {report.max_eigen_residual:.2e}, cr {report.max_cr_residual:.2e}, "
          f"margin {report.nondegeneracy_margin:.2e})")
    return 0 if report.supported else 1


def run_isometry(desc: ExperimentDescriptor, out_dir: str, manifest: RunManifest):
    tol = desc.tolerance if desc.tolerance is not None else 1e-6
    n = desc.n if desc.n is not None else 10_000
    x_max = desc.x_max if desc.x_max is not None else 4.0
    rows = []
    worst = 0.0
    for p in (1.0, 2.0, 4.0):
        for alpha in (0.25, 0.5, 1.0):
            space = SpaceDescriptor(p=p, order=Order(alpha), x_max=x_max, n=n)
            xi = space.xi_grid()
            grid = make_grid(space)
            probes = [
                ("bump", GridFunction(grid, np.exp(-((xi - 0.45 * space.xi_max)
                                                     / (0.12 * space.xi_max)) ** 2))),
                ("wave", GridFunction(grid, np.sin(np.pi * xi / space.xi_max)
                                      + 0.5j * np.cos(2 * np.pi * xi / space.xi_max))),
            ]
            for name, f in probes:
                norm_gap = (abs(norm_lp(u_p(space, f), p) - norm_p_alpha(space, f))
                            / norm_p_alpha(space, f))
                if p == 2.0:
                    g = probes[0][1]
                    inner_gap = (abs(inner_product_l2(u_p(space, f), u_p(space, g))
                                     - inner_product_alpha(space, f, g))
                                 / (norm_p_alpha(space, f) * norm_p_alpha(space, g)))
                else:
                    inner_gap = 0.0
                rows.append((p, alpha, name, norm_gap, inner_gap))
                worst = max(worst, norm_gap, inner_gap)
    path = os.path.join(out_dir, "isometry_report.csv")
    atomic_write_text(path, csv_text("p,alpha,function,norm_rel_gap,inner_rel_gap", rows))
    manifest.add_output(path)
    manifest.add_check("isometry-within-tolerance", worst <= tol)
    print(f"isometry: worst relative gap {worst:.3e} over {len(rows)} rows "
          f"(tolerance {tol:g})")
    return 0 if worst <= tol else 1


def run_selftest_command(desc: ExperimentDescriptor, out_dir: str,
                         manifest: RunManifest):
    n = desc.n if desc.n is not None else 2000
    results = selftest.run_selftest(
        n=n, seed=desc.seed,
        inject_negative_control=desc.inject_negative_control)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"  [{status}] {name:<{width}}  {detail}")
        manifest.add_check(name, ok)
    path = os.path.join(out_dir, "selftest.csv")
    atomic_write_text(path, csv_text("check,passed",
                                     [(name, int(ok)) for name, ok, _ in results]))
    manifest.add_output(path)
    failures = [name for name, ok, _ in results if not ok]
    if failures:
        print(f"selftest: FAILED checks: {', '.join(failures)}")
        return 1
    print(f"selftest: all {len(results)} checks passed at n={n}")
    return 0


_RUNNERS = {
    "transform": run_transform,
    "evolve": run_evolve,
    "orbit": run_orbit,
    "dsw": run_dsw,
    "isometry": run_isometry,
    "selftest": run_selftest_command,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conformal-flow",
        description="Conformable-calculus and semigroup-dynamics experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", type=str, default=None)
        cmd.add_argument("--alpha", type=float, default=None)
        cmd.add_argument("--p", type=float, default=None)
        cmd.add_argument("--kappa", type=float, default=None)
        cmd.add_argument("--epsilon", type=float, default=None)
        cmd.add_argument("--n", type=int, default=None)
        cmd.add_argument("--x-max", dest="x_max", type=float, default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--tolerance", type=float, default=None)
        cmd.add_argument("--out", type=str, default=None)
        if name == "orbit":
            cmd.add_argument("--targets", type=int, default=None)
        if name == "dsw":
            cmd.add_argument("--re-min", dest="re_min", type=float, default=None)
            cmd.add_argument("--re-max", dest="re_max", type=float, default=None)
            cmd.add_argument("--im-min", dest="im_min", type=float, default=None)
            cmd.add_argument("--im-max", dest="im_max", type=float, default=None)
        if name == "selftest":
            cmd.add_argument("--inject-negative-control", action="store_true")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        desc = build_descriptor(args)
    except (ValidationError, DomainError, ValueError, OSError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2

    out_dir = desc.out
    manifest = RunManifest(descriptor=desc.echo())
    started = time.perf_counter()
    try:
        os.makedirs(out_dir, exist_ok=True)
        code = _RUNNERS[desc.command](desc, out_dir, manifest)
    except WindowTooSmallError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        print(f"required x_max: {exc.required_x_max:.6g}", file=sys.stderr)
        return 3
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except CriterionViolationError as exc:
        print(f"criterion violation: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ContractError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3

    manifest.duration_seconds = time.perf_counter() - started
    manifest.validate_outputs()
    atomic_write_text(os.path.join(out_dir, "manifest.txt"), manifest.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
