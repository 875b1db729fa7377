use num_complex::Complex64;
use serde::Serialize;

use super::Tables;
use crate::error::{Error, Result};
use crate::numeric::{BoundKind, ValueWithBound};
use crate::products::{zeta, EulerProductSpec, ProductKind};

/// Both truncated sides of `sum phi(n,F) n^{-s} = zeta(s-1) sum alpha(n) n^{-s}`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesIdentityReport {
    pub s: f64,
    pub n: u64,
    pub lhs: ValueWithBound,
    pub rhs: ValueWithBound,
    pub zeta_shifted: ValueWithBound,
    pub difference: f64,
    pub combined_bound: f64,
    pub within_bound: bool,
}

/// Compares the two Dirichlet series truncated at `N`.
///
/// The left tail uses `|phi(n,F)| <= r n`. For zeta `r = 1`; otherwise `r` is
/// the largest observed `|phi(n,F)|/n` and the bound is heuristic. The right
/// tail uses `|alpha(n)| <= 1` when the degree is 1 and every `|gamma(p)| <= 1`,
/// and the largest observed `|alpha(n)|` otherwise.
pub fn series_identity_check(spec: &EulerProductSpec, s: f64, n: usize) -> Result<SeriesIdentityReport> {
    if !(s > 2.0) || !s.is_finite() {
        return Err(Error::SOutOfRange(s));
    }
    let tables = Tables::<Complex64>::build(spec, n)?;
    let view = tables.float_view();
    let (mut lhs, mut sum_alpha) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let (mut phi_ratio, mut alpha_max) = (0.0f64, 0.0f64);
    // smallest terms first
    for k in (1..=n).rev() {
        let w = (k as f64).powf(-s);
        let phi = *view.phi(k);
        let a = *view.alpha(k);
        lhs += phi * w;
        sum_alpha += a * w;
        phi_ratio = phi_ratio.max(phi.norm() / k as f64);
        alpha_max = alpha_max.max(a.norm());
    }

    let z = zeta(s - 1.0, 1e-14)?;
    let nf = n as f64;
    let rounding = |v: Complex64| 4.0 * nf * f64::EPSILON * v.norm().max(1.0);

    // sum_{k>N} k^{1-s} < N^{2-s}/(s-2), sum_{k>N} k^{-s} < N^{1-s}/(s-1)
    let lhs_rigorous = matches!(spec.kind(), ProductKind::Zeta);
    let r = if lhs_rigorous { 1.0 } else { phi_ratio };
    let lhs_tail = r * nf.powf(2.0 - s) / (s - 2.0);
    let lhs_kind = if lhs_rigorous { BoundKind::Rigorous } else { BoundKind::Heuristic };

    let rhs_rigorous = spec.degree() == 1 && alpha_unit_bounded(spec);
    let amax = if rhs_rigorous { 1.0 } else { alpha_max };
    let alpha_tail = amax * nf.powf(1.0 - s) / (s - 1.0);
    let rhs_value = z.value * sum_alpha;
    let rhs_bound = z.value.norm() * alpha_tail + z.bound * (sum_alpha.norm() + alpha_tail) + rounding(rhs_value);
    let rhs_kind = if rhs_rigorous { BoundKind::Rigorous } else { BoundKind::Heuristic };

    let lhs = ValueWithBound::new(lhs, lhs_tail + rounding(lhs), lhs_kind);
    let rhs = ValueWithBound::new(rhs_value, rhs_bound, rhs_kind);
    let difference = (lhs.value - rhs.value).norm();
    let combined_bound = lhs.bound + rhs.bound;
    Ok(SeriesIdentityReport {
        s,
        n: n as u64,
        within_bound: difference <= combined_bound,
        lhs,
        rhs,
        zeta_shifted: z,
        difference,
        combined_bound,
    })
}

fn alpha_unit_bounded(spec: &EulerProductSpec) -> bool {
    match spec.kind() {
        ProductKind::Zeta | ProductKind::Dirichlet(_) => true,
        ProductKind::Custom(_) => false,
    }
}
