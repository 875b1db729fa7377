use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lvalue::l_value;
use super::spec::{EulerProductSpec, ProductKind};
use crate::coeffs::sieve_alpha;
use crate::error::{Error, Result};
use crate::numeric::{BoundKind, ValueWithBound};
use crate::primes::primes_up_to;

/// `C(F) = 1/2 prod_p (1 - gamma(p)/p^2)` over `p <= prime_cutoff`, with a
/// rigorous bound on the neglected primes.
///
/// The tail uses `|gamma(p)| <= d 2^{d-1}` and `sum_{n>P} n^{-2} < 1/P`, so
/// `|prod_{p>P} (1 - gamma(p)/p^2) - 1| <= exp(d 2^{d-1}/P) - 1`.
pub fn c_constant(spec: &EulerProductSpec, prime_cutoff: u64) -> Result<ValueWithBound> {
    if prime_cutoff < 2 {
        return Err(Error::CutoffTooSmall(prime_cutoff));
    }
    let tail_vanishes = finite_support_within(spec, prime_cutoff);
    if tail_vanishes && spec.is_exact() {
        return exact_finite_c(spec).map(ValueWithBound::exact);
    }
    let primes = primes_up_to(prime_cutoff);
    let mut prod = Complex64::one();
    for &p in &primes {
        let g = spec.gamma(p)?;
        prod *= 1.0 - g / (p as f64 * p as f64);
    }
    let value = 0.5 * prod;
    let rounding = 4.0 * primes.len() as f64 * f64::EPSILON * value.norm();
    let tail = if tail_vanishes {
        0.0
    } else {
        value.norm() * (spec.gamma_bound() / prime_cutoff as f64).exp_m1()
    };
    Ok(ValueWithBound::new(value, tail + rounding, BoundKind::Rigorous))
}

fn finite_support_within(spec: &EulerProductSpec, cutoff: u64) -> bool {
    spec.finite_support().is_some_and(|ps| ps.iter().all(|&p| p <= cutoff))
}

fn exact_finite_c(spec: &EulerProductSpec) -> Result<BigRational> {
    let mut prod = BigRational::one();
    for p in spec.finite_support().unwrap_or_default() {
        let g = spec.gamma_exact(p)?;
        prod = prod * (BigRational::one() - g / BigRational::from_integer((p * p).into()));
    }
    Ok(prod / BigRational::from_integer(2.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A1Mode {
    ClosedForm,
    PartialSums,
}

/// `A_1 = sum_{n>=1} alpha(n)/n`. Convergence of this series is assumed, not
/// checked.
///
/// Closed forms: `0` for zeta and principal characters, `1/L(1, chi)` for
/// non-principal characters. Partial sums carry a heuristic bound: the
/// largest deviation from the final partial sum over the last decade.
pub fn a1_constant(spec: &EulerProductSpec, mode: A1Mode, cutoff: u64) -> Result<ValueWithBound> {
    match mode {
        A1Mode::ClosedForm => match spec.kind() {
            ProductKind::Zeta => Ok(ValueWithBound::exact(BigRational::zero())),
            ProductKind::Dirichlet(chi) if chi.is_principal() => Ok(ValueWithBound::exact(BigRational::zero())),
            ProductKind::Dirichlet(chi) => {
                let l = l_value(chi, 1.0, 1e-13)?;
                let norm = l.value.norm();
                if l.bound >= norm {
                    return Err(Error::PrecisionUnreachable { target: l.bound, cap: 0 });
                }
                let bound = l.bound / (norm * (norm - l.bound));
                Ok(ValueWithBound::new(l.value.inv(), bound, BoundKind::Rigorous))
            }
            ProductKind::Custom(_) => Err(Error::ModeUnavailable(
                "no closed form for A1 of a custom product; use partial sums".into(),
            )),
        },
        A1Mode::PartialSums => {
            if cutoff == 0 {
                return Err(Error::CutoffTooSmall(cutoff));
            }
            let table = sieve_alpha::<Complex64>(spec, cutoff as usize)?;
            let mut partial = Vec::with_capacity(cutoff as usize);
            let mut acc = Complex64::zero();
            for n in 1..=cutoff as usize {
                acc += table.alpha(n) / n as f64;
                partial.push(acc);
            }
            let last = acc;
            let from = (cutoff as usize / 10).max(1);
            let bound = partial[from - 1..].iter().map(|p| (p - last).norm()).fold(0.0, f64::max);
            Ok(ValueWithBound::new(last, bound, BoundKind::Heuristic))
        }
    }
}

/// The two constants the decomposition depends on: `C(F)` and `A_1`.
/// `A_2 = 2 C(F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    pub c: ValueWithBound,
    pub a1: ValueWithBound,
}

impl Constants {
    /// Closed-form `A_1` when available, partial sums up to `a1_cutoff` otherwise.
    pub fn compute(spec: &EulerProductSpec, prime_cutoff: u64, a1_cutoff: u64) -> Result<Self> {
        let c = c_constant(spec, prime_cutoff)?;
        let a1 = match a1_constant(spec, A1Mode::ClosedForm, a1_cutoff) {
            Err(Error::ModeUnavailable(_)) => a1_constant(spec, A1Mode::PartialSums, a1_cutoff)?,
            other => other?,
        };
        Ok(Self { c, a1 })
    }

    pub fn a2(&self) -> ValueWithBound {
        ValueWithBound::new(2.0 * self.c.value, 2.0 * self.c.bound, self.c.kind)
    }
}
