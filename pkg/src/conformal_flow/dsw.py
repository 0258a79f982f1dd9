"""Numerical checks for the spectral chaos criterion hypotheses.

For a candidate generator the criterion needs: an open set V of eigenvalues
meeting the imaginary axis, an eigenvector field lambda -> x_lambda on V, and
analytic, not-identically-zero maps lambda -> <phi, x_lambda> for every
functional phi.  None of this is provable at desk scale; what can be certified
on samples is

* eigen-residuals  ||A x_lambda - lambda x_lambda|| / ||x_lambda||,
* the rectangle geometry (does V straddle the imaginary axis?),
* Cauchy-Riemann defects of the pairings on a lambda-grid,
* a nondegeneracy margin  min_phi max_lambda |<phi, x_lambda>|.

The verdict is deliberately worded "hypotheses supported at sample
resolution": it backs, but never proves, chaotic behavior.  The behavioral
companion is the orbit experiment in :mod:`conformal_flow.translation`.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ContractError, DomainError, SpectrumMembershipError
from .spaces import (GridFunction, SpaceDescriptor, inner_product_alpha,
                     make_grid, norm_p_alpha, pairing)
from .translation import generator_apply

__all__ = [
    "SpectralRectangle",
    "EigenFamily",
    "DSWConfig",
    "DSWReport",
    "weighted_translation_eigenfamily",
    "make_phi_library",
    "eigen_residual",
    "imag_axis_intersection",
    "analyticity_check",
    "nondegeneracy_check",
    "dsw_verdict",
    "write_dsw_report",
]

SUPPORTED = "hypotheses-supported"


def violated(reason: str) -> str:
    return f"hypotheses-violated({reason})"


@dataclass(frozen=True)
class SpectralRectangle:
    """Open axis-aligned rectangle in the complex plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("spectral rectangle must be open and nonempty "
                              "(positive width and height)")

    def contains(self, lam: complex, margin: float = 0.0) -> bool:
        return (self.re_min + margin < lam.real < self.re_max - margin
                and self.im_min + margin < lam.imag < self.im_max - margin)

    def interior_grid(self, n_re: int, n_im: int, margin: float) -> np.ndarray:
        res = np.linspace(self.re_min + margin, self.re_max - margin, n_re)
        ims = np.linspace(self.im_min + margin, self.im_max - margin, n_im)
        return (res[:, None] + 1j * ims[None, :]).ravel()


def imag_axis_intersection(region: SpectralRectangle) -> bool:
    """True iff the open rectangle meets the imaginary axis (0 interior to Re-range)."""
    return region.re_min < 0.0 < region.re_max


@dataclass(frozen=True)
class EigenFamily:
    """Eigenvector field over a spectral rectangle, with its numerical generator."""

    desc: SpaceDescriptor
    region: SpectralRectangle
    eigenvector: Callable[[complex], GridFunction]
    generator_action: Callable[[GridFunction], GridFunction]


def weighted_translation_eigenfamily(desc: SpaceDescriptor, kappa: float,
                                     region: SpectralRectangle,
                                     tail_fraction: float = 1e-12) -> EigenFamily:
    """Eigenfamily ``x_lambda(x) = exp((lambda-kappa) x**alpha)`` of the weighted shift generator.

    The generator is ``A f = x**(1-alpha) f'(x)/alpha + kappa f`` (transported
    ``d/dxi + kappa``), discretized by :func:`~conformal_flow.translation.generator_apply`.
    A sample ``lambda`` is admitted only when ``Re(lambda - kappa) < 0`` and
    the truncated tail mass fraction ``exp(p Re(lambda-kappa) x_max**alpha)``
    is below ``tail_fraction``; otherwise it is rejected as outside the point
    spectrum at this truncation.
    """
    xi = desc.xi_grid()
    x = make_grid(desc)

    def eigenvector(lam: complex) -> GridFunction:
        mu = complex(lam) - kappa
        if mu.real >= 0:
            raise SpectrumMembershipError(
                f"lambda={lam} is outside the point spectrum at this truncation "
                f"(needs Re(lambda - kappa) < 0)", lam)
        if np.exp(desc.p * mu.real * desc.xi_max) > tail_fraction:
            raise SpectrumMembershipError(
                f"lambda={lam} decays too slowly for the window "
                f"x_max={desc.x_max:g}", lam)
        return GridFunction(x, np.exp(mu * xi))

    def generator_action(g: GridFunction) -> GridFunction:
        return generator_apply(desc, g, kappa=kappa)

    return EigenFamily(desc=desc, region=region, eigenvector=eigenvector,
                       generator_action=generator_action)


def _norm2_alpha(desc: SpaceDescriptor, f: GridFunction) -> float:
    return float(np.sqrt(abs(inner_product_alpha(desc, f, f))))


def make_phi_library(desc: SpaceDescriptor, count: int = 16,
                     seed: int = 0) -> list:
    """Fixed library of normalized functionals: indicators, Gaussians, band-limited noise.

    All profiles live at small xi (cuts and centers scale with the window but
    stay within xi <= max(6, window/4)) so pairings against decaying
    eigenvectors are well scaled.  Indicator jumps landing on a node take the
    half value, keeping the trapezoid pairing second-order accurate.
    Normalization is in the weighted 2-norm.  Deterministic per seed.
    """
    xi = desc.xi_grid()
    span = min(6.0, 0.75 * desc.xi_max)
    rng = np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(b"phi-library")]))
    profiles = []

    for cut in (span / 12.0, span / 6.0, span / 3.0, 2.0 * span / 3.0):
        vals = np.where(xi < cut, 1.0, 0.0)
        vals = np.where(np.abs(xi - cut) <= 1e-9 * desc.xi_max, 0.5, vals)
        profiles.append(vals)

    for center, width in ((0.13 * span, 0.08 * span), (0.27 * span, 0.12 * span),
                          (0.43 * span, 0.15 * span), (0.63 * span, 0.2 * span)):
        profiles.append(np.exp(-((xi - center) / width) ** 2))

    window = np.where(xi < span, np.sin(np.pi * np.clip(xi, 0, span) / span) ** 2, 0.0)
    while len(profiles) < count:
        coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        vals = sum(c * np.cos((k + 1) * np.pi * xi / span)
                   for k, c in enumerate(coeffs))
        profiles.append(vals * window)

    x = make_grid(desc)
    phis = []
    for vals in profiles[:count]:
        g = GridFunction(x, vals)
        phis.append(g * (1.0 / _norm2_alpha(desc, g)))
    return phis


def eigen_residual(fam: EigenFamily, lambdas: Sequence[complex]) -> float:
    """Worst normalized eigen-residual ``||A x - lambda x|| / ||x||`` over the samples."""
    worst = 0.0
    for lam in lambdas:
        x = fam.eigenvector(lam)
        nx = norm_p_alpha(fam.desc, x)
        if nx < 1e-12:
            raise ContractError(f"eigenvector sample at lambda={lam} is numerically zero")
        res = norm_p_alpha(fam.desc, fam.generator_action(x) - complex(lam) * x) / nx
        worst = max(worst, res)
    return worst


def _pairing_table(fam: EigenFamily, phis, lambdas) -> dict:
    cache = {}
    for lam in lambdas:
        x = fam.eigenvector(lam)
        cache[complex(lam)] = [pairing(fam.desc, phi, x) for phi in phis]
    return cache


def analyticity_check(fam: EigenFamily, phis: Sequence[GridFunction],
                      lambdas: Sequence[complex], h: float,
                      per_lambda: Optional[dict] = None) -> float:
    """Largest normalized Cauchy-Riemann defect of ``lambda -> <phi, x_lambda>``.

    Central differences with step ``h`` in both real and imaginary directions;
    the defect of an analytic family is O(h^2).  Each functional is normalized
    by its largest ``|F|`` over the sample grid.  The grid (with its
    four-neighbor stencils) must sit inside the rectangle with margin ``h``.
    """
    if h <= 0:
        raise DomainError("step h must be positive")
    for lam in lambdas:
        if not fam.region.contains(complex(lam), margin=h * (1.0 - 1e-12)):
            raise DomainError(f"lambda={lam} closer than h to the rectangle boundary")

    base = list(map(complex, lambdas))
    stencil = sorted({lam + d for lam in base for d in (0, h, -h, 1j * h, -1j * h)},
                     key=lambda z: (z.real, z.imag))
    table = _pairing_table(fam, phis, stencil)

    worst = 0.0
    for i, _ in enumerate(phis):
        fmax = max(abs(table[lam][i]) for lam in base)
        fmax = max(fmax, 1e-300)
        for lam in base:
            d_re = (table[lam + h][i] - table[lam - h][i]) / (2.0 * h)
            d_im = (table[lam + 1j * h][i] - table[lam - 1j * h][i]) / (2.0 * h)
            defect = abs(d_re + 1j * d_im) / fmax
            worst = max(worst, defect)
            if per_lambda is not None:
                per_lambda[lam] = max(per_lambda.get(lam, 0.0), defect)
    return worst


def nondegeneracy_check(fam: EigenFamily, phis: Sequence[GridFunction],
                        lambdas: Sequence[complex]) -> float:
    """Margin ``min_phi max_lambda |<phi, x_lambda>|`` over normalized functionals."""
    for k, phi in enumerate(phis):
        if abs(_norm2_alpha(fam.desc, phi) - 1.0) > 1e-6:
            raise ContractError(f"functional {k} is not normalized")
    table = _pairing_table(fam, phis, list(map(complex, lambdas)))
    margin = np.inf
    for i, _ in enumerate(phis):
        margin = min(margin, max(abs(table[lam][i]) for lam in table))
    return float(margin)


@dataclass(frozen=True)
class DSWConfig:
    """Thresholds and sampling resolution for the criterion verdict."""

    eigen_tol: float = 1e-6
    cr_tol: float = 1e-4
    margin_tol: float = 1e-6
    cr_step: float = 1e-3
    n_re: int = 5
    n_im: int = 5
    n_phi: int = 16
    seed: int = 0


@dataclass(frozen=True)
class DSWReport:
    """Aggregated criterion statistics and the verdict they imply.

    A supported verdict backs the criterion's premises at sample resolution;
    it does not prove chaos.  Run the orbit experiments for the behavioral
    counterpart.
    """

    max_eigen_residual: float
    imag_axis_hit: bool
    max_cr_residual: float
    nondegeneracy_margin: float
    verdict: str
    n_lambda: int
    n_rejected: int
    lambda_rows: tuple = field(default_factory=tuple)
    note: str = ("verdict supports, but does not prove, chaotic dynamics; "
                 "see the orbit experiments for behavior")

    @property
    def supported(self) -> bool:
        return self.verdict == SUPPORTED


def dsw_verdict(fam: EigenFamily, config: DSWConfig = DSWConfig()) -> DSWReport:
    """Run all four hypothesis checks and aggregate them into a report.

    Sample eigenvalues form an interior grid of the rectangle (margin twice
    the Cauchy-Riemann step); samples rejected by the eigenvector field
    (outside the point spectrum at this truncation) are dropped and counted.
    The verdict is supported iff every threshold passes; otherwise it names
    the first failing hypothesis in the order: insufficient samples,
    imaginary-axis intersection, eigen-residual, analyticity, nondegeneracy.
    """
    margin = 2.0 * config.cr_step
    candidates = fam.region.interior_grid(config.n_re, config.n_im, margin)
    lambdas, rejected = [], 0
    for lam in candidates:
        try:
            fam.eigenvector(complex(lam))
        except SpectrumMembershipError:
            rejected += 1
            continue
        lambdas.append(complex(lam))

    axis = imag_axis_intersection(fam.region)
    if not lambdas:
        return DSWReport(max_eigen_residual=float("nan"), imag_axis_hit=axis,
                         max_cr_residual=float("nan"),
                         nondegeneracy_margin=float("nan"),
                         verdict=violated("insufficient-samples"),
                         n_lambda=0, n_rejected=rejected)

    phis = make_phi_library(fam.desc, count=config.n_phi, seed=config.seed)

    eigen_rows = {}
    worst_eigen = 0.0
    for lam in lambdas:
        x = fam.eigenvector(lam)
        nx = norm_p_alpha(fam.desc, x)
        res = norm_p_alpha(fam.desc, fam.generator_action(x) - lam * x) / nx
        eigen_rows[lam] = res
        worst_eigen = max(worst_eigen, res)

    cr_rows: dict = {}
    worst_cr = analyticity_check(fam, phis, lambdas, config.cr_step,
                                 per_lambda=cr_rows)
    margin_value = nondegeneracy_check(fam, phis, lambdas)

    if not axis:
        verdict = violated("imag-axis")
    elif worst_eigen > config.eigen_tol:
        verdict = violated("eigen-residual")
    elif worst_cr > config.cr_tol:
        verdict = violated("analyticity")
    elif margin_value < config.margin_tol:
        verdict = violated("nondegeneracy")
    else:
        verdict = SUPPORTED

    rows = tuple((lam.real, lam.imag, eigen_rows[lam], cr_rows.get(lam, 0.0))
                 for lam in lambdas)
    return DSWReport(max_eigen_residual=worst_eigen, imag_axis_hit=axis,
                     max_cr_residual=worst_cr,
                     nondegeneracy_margin=margin_value, verdict=verdict,
                     n_lambda=len(lambdas), n_rejected=rejected,
                     lambda_rows=rows)


def dsw_report_text(report: DSWReport) -> str:
    """Key=value summary block of a report."""
    return (f"max_eigen_residual={report.max_eigen_residual:.17g}\n"
            f"imag_axis_hit={str(report.imag_axis_hit).lower()}\n"
            f"max_cr_residual={report.max_cr_residual:.17g}\n"
            f"nondegeneracy_margin={report.nondegeneracy_margin:.17g}\n"
            f"n_lambda={report.n_lambda}\n"
            f"n_rejected={report.n_rejected}\n"
            f"verdict={report.verdict}\n"
            f"note={report.note}\n")


def write_dsw_report(txt_path, csv_path, report: DSWReport):
    """Key=value summary plus per-lambda residual CSV."""
    with open(txt_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dsw_report_text(report))
    lines = ["re_lambda,im_lambda,eigen_residual,cr_residual"]
    for re, im, e, c in report.lambda_rows:
        lines.append(f"{re:.17g},{im:.17g},{e:.17g},{c:.17g}")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
