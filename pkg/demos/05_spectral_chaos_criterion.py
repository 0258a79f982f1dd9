"""Checking the spectral chaos criterion for the weighted pullback shift.

The criterion asks for an open set V of eigenvalues of the generator that
crosses the imaginary axis, carrying an eigenvector field lambda -> x_lambda
whose pairings with functionals are analytic and not identically zero.  For
the weighted shift generator A = x^(1-a) d/dx / a + kappa the eigenvectors
are explicit, x_lambda = exp((lambda - kappa) x^a), so every hypothesis can
be probed numerically.  A supported verdict backs the premises at sample
resolution; the orbit experiment of demo 04 is the behavioral counterpart.
"""

from conformal_flow import (DSWConfig, Order, SpaceDescriptor,
                            SpectralRectangle, dsw_verdict,
                            weighted_translation_eigenfamily)
from conformal_flow.dsw import dsw_report_text

desc = SpaceDescriptor(p=2.0, order=Order(0.5), x_max=1296.0, n=10_000)

print("== kappa = +1: the point spectrum covers Re(lambda) < 1 ==")
region = SpectralRectangle(-0.5, 0.5, -1.0, 1.0)
fam = weighted_translation_eigenfamily(desc, kappa=1.0, region=region)
report = dsw_verdict(fam, DSWConfig())
print(dsw_report_text(report))

print("== kappa = -1: the spectrum sits left of the axis; criterion fails ==")
region_neg = SpectralRectangle(-2.5, -1.5, -1.0, 1.0)
fam_neg = weighted_translation_eigenfamily(desc, kappa=-1.0, region=region_neg)
report_neg = dsw_verdict(fam_neg, DSWConfig())
print(dsw_report_text(report_neg))

print("worst per-lambda eigen-residuals of the supported family:")
rows = sorted(report.lambda_rows, key=lambda r: -r[2])[:5]
for re, im, eig, cr in rows:
    print(f"  lambda = {re:+.3f} {im:+.3f}i   eigen residual = {eig:.2e}   "
          f"CR defect = {cr:.2e}")
