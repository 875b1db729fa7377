//! Periodic Dirichlet series `sum c(n) n^{-s}` with `c` of period `q`:
//! Dirichlet L-values and the Riemann zeta function.
//!
//! The series is summed directly over `K` full periods; the remaining tail is
//! split by residue class and handled by Euler-Maclaurin with an explicit
//! remainder bound.

use num_complex::Complex64;

use super::character::CharacterSpec;
use crate::error::{Error, Result};
use crate::numeric::{BoundKind, ValueWithBound};

/// `B_2, B_4, ..., B_14`.
const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Cap on directly summed terms.
const MAX_TERMS: u64 = 50_000_000;

/// `L(s, chi)` for a non-principal character and real `s > 0`.
pub fn l_value(chi: &CharacterSpec, s: f64, precision: f64) -> Result<ValueWithBound> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("L-value needs s > 0, got {s}")));
    }
    periodic_series(chi.values(), s, precision)
}

/// Riemann zeta `zeta(s)` for real `s > 1`.
pub fn zeta(s: f64, precision: f64) -> Result<ValueWithBound> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {s}")));
    }
    periodic_series(&[Complex64::new(1.0, 0.0)], s, precision)
}

/// `sum_{n>=1} c(n mod q) n^{-s}`. When `s <= 1` the coefficients must sum
/// to zero over a period.
fn periodic_series(coeffs: &[Complex64], s: f64, precision: f64) -> Result<ValueWithBound> {
    let q = coeffs.len() as u64;
    let period_sum: Complex64 = coeffs.iter().sum();
    if s <= 1.0 && period_sum.norm() > 1e-9 {
        return Err(Error::InvalidArgument("series diverges: period sum is nonzero".into()));
    }
    let target = precision.max(0.0);
    let mut k = 8u64;
    loop {
        let (value, bound) = sum_with_tail(coeffs, s, k);
        if bound <= target {
            return Ok(ValueWithBound::new(value, bound, BoundKind::Rigorous));
        }
        if (2 * k) * q > MAX_TERMS {
            return Err(Error::PrecisionUnreachable { target, cap: MAX_TERMS });
        }
        k *= 2;
    }
}

/// Direct sum over `n <= k q` plus the Euler-Maclaurin tail; returns the value
/// and a bound covering the remainder and floating-point accumulation.
fn sum_with_tail(coeffs: &[Complex64], s: f64, k: u64) -> (Complex64, f64) {
    let q = coeffs.len() as u64;
    let mut head = Complex64::new(0.0, 0.0);
    let mut max_term: f64 = 0.0;
    // Sum from the smallest terms up to limit rounding growth.
    for n in (1..=k * q).rev() {
        let c = coeffs[(n % q) as usize];
        if c.norm() == 0.0 {
            continue;
        }
        let t = c * (n as f64).powf(-s);
        max_term = max_term.max(t.norm());
        head += t;
    }
    let qs = (q as f64).powf(-s);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut remainder = 0.0;
    let terms = BERNOULLI_EVEN.len();
    for a in 1..=q {
        let c = coeffs[(a % q) as usize];
        if c.norm() == 0.0 {
            continue;
        }
        let x = k as f64 + a as f64 / q as f64;
        // regularized integral of (t + a/q)^{-s} over [k, inf)
        let integral = if (s - 1.0).abs() < 1e-15 { -x.ln() } else { x.powf(1.0 - s) / (s - 1.0) };
        let mut local = integral + 0.5 * x.powf(-s);
        // f^{(r)}(x) = (-1)^r (s)_r x^{-s-r}
        let mut rising = 1.0;
        let mut fact = 1.0;
        for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
            let r = 2 * j + 1;
            // extend (s)_r and r! from r-2 (or from 0 when j = 0)
            let start = if j == 0 { 0 } else { r - 2 };
            for i in start..r {
                rising *= s + i as f64;
                fact *= (i + 1) as f64;
            }
            let deriv = -rising * x.powf(-s - r as f64);
            local -= b / (fact * (r as f64 + 1.0)) * deriv;
        }
        // |R_m| <= 2 zeta(2m) (2 pi)^{-2m} |f^{(2m-1)}(x)|, zeta(2m) < 2
        let m = terms as i32;
        let last = rising * x.powf(-s - (2 * terms - 1) as f64);
        remainder += c.norm() * 4.0 * (2.0 * std::f64::consts::PI).powi(-2 * m) * last;
        tail += c * local;
    }
    let value = head + qs * tail;
    let rounding = (k * q) as f64 * f64::EPSILON * max_term.max(value.norm()) + 8.0 * f64::EPSILON * value.norm();
    (value, qs * remainder + rounding)
}
