//! Multiplicative coefficients `alpha(n) = mu(n) prod_{p|n} gamma(p)`, the
//! associated totient `phi(n, F)`, its summatory function and error terms.

mod cache;
mod growth;
mod series;

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::affine::Affine;
use crate::error::{Error, Result};
use crate::numeric::{Abscissa, Accumulator, Scalar, ValueWithBound};
use crate::primes::{distinct_prime_factors, smallest_prime_factors};
use crate::products::{Constants, EulerProductSpec};

pub use cache::{load_table_csv, write_table_csv, TABLE_FORMAT_VERSION};
pub use growth::{growth_scan, scan_range, GrowthReport, GrowthRow};
pub use series::{series_identity_check, SeriesIdentityReport};

/// Largest table size accepted.
pub const TABLE_CAP: usize = 100_000_000;

/// `alpha(n)` for `n <= N`, plus float prefix sums
/// `P_1(k) = sum_{n<=k} alpha(n)/n` and `P_2(k) = sum_{n<=k} alpha(n)/n^2`.
#[derive(Clone, Debug)]
pub struct CoefficientTable<T> {
    n_max: usize,
    alpha: Vec<T>,
    spf: Vec<u32>,
    alpha_f: Vec<Complex64>,
    p1_f: Vec<Complex64>,
    p2_f: Vec<Complex64>,
    alpha_max: f64,
}

/// Smallest-prime-factor sieve of `alpha(n)`: `alpha(p) = -gamma(p)` and
/// `alpha(pm) = alpha(p) alpha(m)` when `p` does not divide `m`, zero otherwise.
pub fn sieve_alpha<T: Scalar>(spec: &EulerProductSpec, n_max: usize) -> Result<CoefficientTable<T>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("table size must be at least 1".into()));
    }
    if n_max > TABLE_CAP {
        return Err(Error::OutOfMemory { n: n_max as u64, cap: TABLE_CAP as u64 });
    }
    let spf = smallest_prime_factors(n_max);
    let mut alpha: Vec<T> = Vec::with_capacity(n_max + 1);
    alpha.push(T::zero());
    alpha.push(T::one());
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let value = if p == n {
            -T::gamma(spec, n as u64)?
        } else {
            let m = n / p;
            if m % p == 0 {
                T::zero()
            } else {
                alpha[m].clone() * alpha[p].clone()
            }
        };
        alpha.push(value);
    }
    Ok(CoefficientTable::from_parts(alpha, spf))
}

impl<T: Scalar> CoefficientTable<T> {
    fn from_parts(alpha: Vec<T>, spf: Vec<u32>) -> Self {
        let n_max = alpha.len() - 1;
        let alpha_f: Vec<Complex64> = alpha.iter().map(Scalar::to_c64).collect();
        let mut p1_f = Vec::with_capacity(n_max + 1);
        let mut p2_f = Vec::with_capacity(n_max + 1);
        let (mut s1, mut s2) = (Complex64::zero(), Complex64::zero());
        p1_f.push(s1);
        p2_f.push(s2);
        for (n, a) in alpha_f.iter().enumerate().skip(1) {
            let n = n as f64;
            s1 += a / n;
            s2 += a / (n * n);
            p1_f.push(s1);
            p2_f.push(s2);
        }
        let alpha_max = alpha_f.iter().map(|a| a.norm()).fold(0.0, f64::max);
        Self { n_max, alpha, spf, alpha_f, p1_f, p2_f, alpha_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn alpha(&self, n: usize) -> &T {
        &self.alpha[n]
    }

    /// `alpha(0..=N)`; index 0 holds zero.
    pub fn alphas(&self) -> &[T] {
        &self.alpha
    }

    pub fn alpha_f(&self) -> &[Complex64] {
        &self.alpha_f
    }

    pub fn spf(&self) -> &[u32] {
        &self.spf
    }

    /// Float `P_2(k)`, the partial sum converging to `2 C(F)`.
    pub fn p2_f(&self, k: usize) -> Complex64 {
        self.p2_f[k]
    }

    pub fn p1_f(&self, k: usize) -> Complex64 {
        self.p1_f[k]
    }
}

/// `phi(n, F)` for `n <= N` with prefix sums.
#[derive(Debug)]
pub struct TotientTable<T> {
    n_max: usize,
    phi: Vec<T>,
    cumulative: OnceLock<Vec<T>>,
    phi_f: Vec<Complex64>,
    cum_f: Vec<Complex64>,
    phi_ratio_max: f64,
}

impl<T: Scalar> Clone for TotientTable<T> {
    fn clone(&self) -> Self {
        let cumulative = OnceLock::new();
        if let Some(c) = self.cumulative.get() {
            let _ = cumulative.set(c.clone());
        }
        Self {
            n_max: self.n_max,
            phi: self.phi.clone(),
            cumulative,
            phi_f: self.phi_f.clone(),
            cum_f: self.cum_f.clone(),
            phi_ratio_max: self.phi_ratio_max,
        }
    }
}

/// `phi(n, F) = n prod_{p|n} F_p(1)^{-1}` straight from the local factors,
/// factoring `n` by trial division.
pub fn phi_direct<T: Scalar>(spec: &EulerProductSpec, n: u64) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("phi is defined for n >= 1".into()));
    }
    distinct_prime_factors(n)
        .into_iter()
        .try_fold(T::from_frac(n as i128, 1), |acc, p| Ok(acc * T::inverse_local_factor(spec, p)?))
}

/// `phi(n, F)` over the sieve, multiplicatively: `phi(p^k m) = phi(m) p^k F_p(1)^{-1}`.
pub fn phi_table<T: Scalar>(spec: &EulerProductSpec, coeffs: &CoefficientTable<T>) -> Result<TotientTable<T>> {
    let n_max = coeffs.n_max;
    let spf = &coeffs.spf;
    let mut local: Vec<Option<T>> = vec![None; n_max + 1];
    let mut phi: Vec<T> = Vec::with_capacity(n_max + 1);
    phi.push(T::zero());
    phi.push(T::one());
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n / p;
        let mut pk = p;
        while m % p == 0 {
            m /= p;
            pk *= p;
        }
        if local[p].is_none() {
            local[p] = Some(T::inverse_local_factor(spec, p as u64)?);
        }
        let f = local[p].as_ref().expect("just filled");
        phi.push(phi[m].clone() * f.scale(pk as i128, 1));
    }
    Ok(TotientTable::from_phi(phi))
}

/// `phi(n, F) = n sum_{m|n} alpha(m)/m` by divisor convolution.
pub fn phi_by_convolution<T: Scalar>(coeffs: &CoefficientTable<T>) -> Vec<T> {
    let n_max = coeffs.n_max;
    let mut acc: Vec<T::Acc> = (0..=n_max).map(|_| T::Acc::default()).collect();
    for m in 1..=n_max {
        let a = &coeffs.alpha[m];
        if a.is_zero() {
            continue;
        }
        for k in (m..=n_max).step_by(m) {
            acc[k].add_scaled(a, k as i128, m as i128);
        }
    }
    acc.into_iter().map(Accumulator::finish).collect()
}

impl<T: Scalar> TotientTable<T> {
    fn from_phi(phi: Vec<T>) -> Self {
        let phi_f: Vec<Complex64> = phi.iter().map(Scalar::to_c64).collect();
        let mut cum_f = Vec::with_capacity(phi_f.len());
        let mut s = Complex64::zero();
        for v in &phi_f {
            s += v;
            cum_f.push(s);
        }
        let phi_ratio_max = phi_f.iter().enumerate().skip(1).map(|(n, v)| v.norm() / n as f64).fold(0.0, f64::max);
        Self { n_max: phi.len() - 1, phi, cumulative: OnceLock::new(), phi_f, cum_f, phi_ratio_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn phi(&self, n: usize) -> &T {
        &self.phi[n]
    }

    pub fn phis(&self) -> &[T] {
        &self.phi
    }

    pub fn phi_f(&self) -> &[Complex64] {
        &self.phi_f
    }

    /// `sum_{n<=k} phi(n, F)` for every `k <= N`, built on first use.
    pub fn cumulative(&self) -> &[T] {
        self.cumulative.get_or_init(|| {
            let mut out = Vec::with_capacity(self.phi.len());
            let mut s = T::zero();
            for v in &self.phi {
                s = s + v.clone();
                out.push(s.clone());
            }
            out
        })
    }

    /// Float prefix sums.
    pub fn cumulative_f(&self) -> &[Complex64] {
        &self.cum_f
    }

    /// `sum_{n<=k} phi(n, F)`, exact when `T` is.
    pub fn sum_upto(&self, k: usize) -> T {
        if let Some(c) = self.cumulative.get() {
            return c[k].clone();
        }
        let mut acc = T::Acc::default();
        for v in &self.phi[1..=k] {
            acc.add(v);
        }
        acc.finish()
    }
}

/// `sum_{n<=x} phi(n, F)`.
pub fn partial_sum_phi<T: Scalar>(table: &TotientTable<T>, x: &Abscissa) -> Result<T> {
    let k = table_index(x, table.n_max)?;
    Ok(table.sum_upto(k))
}

/// `[x]` as a table index, rejecting negative `x` and `x > N`.
pub(crate) fn table_index(x: &Abscissa, n_max: usize) -> Result<usize> {
    if x.is_negative() {
        return Err(Error::NegativeX(x.to_f64()));
    }
    let k = x.floor();
    if k > n_max as i128 {
        return Err(Error::XBeyondTable { x: x.to_f64(), n: n_max as u64 });
    }
    Ok(k as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `E(x, F)`: right-continuous step sum.
    Plain,
    /// `E_2(x, F)`: the mean of the one-sided limits at integers.
    Symmetric,
}

/// Coefficient and totient tables of one product, in one numeric mode.
#[derive(Clone, Debug)]
pub struct Tables<T: Scalar> {
    spec: EulerProductSpec,
    coeffs: CoefficientTable<T>,
    totient: TotientTable<T>,
}

impl<T: Scalar> Tables<T> {
    pub fn build(spec: &EulerProductSpec, n_max: usize) -> Result<Self> {
        let coeffs = sieve_alpha::<T>(spec, n_max)?;
        let totient = phi_table(spec, &coeffs)?;
        Ok(Self { spec: spec.clone(), coeffs, totient })
    }

    pub(crate) fn from_parts(spec: EulerProductSpec, alpha: Vec<T>, phi: Vec<T>) -> Self {
        let spf = smallest_prime_factors(alpha.len() - 1);
        Self { spec, coeffs: CoefficientTable::from_parts(alpha, spf), totient: TotientTable::from_phi(phi) }
    }

    pub fn spec(&self) -> &EulerProductSpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.n_max
    }

    pub fn coeffs(&self) -> &CoefficientTable<T> {
        &self.coeffs
    }

    pub fn totient(&self) -> &TotientTable<T> {
        &self.totient
    }

    /// Native view: exact sums when `T` is exact.
    pub fn view(&self) -> View<'_, T> {
        View {
            alpha: &self.coeffs.alpha,
            phi: &self.totient.phi,
            prefix: None,
            n_max: self.coeffs.n_max,
        }
    }

    /// Float view backed by prefix arrays; O(1) partial sums.
    pub fn float_view(&self) -> View<'_, Complex64> {
        View {
            alpha: &self.coeffs.alpha_f,
            phi: &self.totient.phi_f,
            prefix: Some(Prefix {
                p1: &self.coeffs.p1_f,
                p2: &self.coeffs.p2_f,
                cum: &self.totient.cum_f,
                alpha_max: self.coeffs.alpha_max,
                phi_ratio_max: self.totient.phi_ratio_max,
            }),
            n_max: self.coeffs.n_max,
        }
    }

    /// `E(x, F)` or `E_2(x, F)` with `C(F)` substituted; the bound is
    /// `bound(C) x^2`.
    pub fn error_term(&self, c: &ValueWithBound, x: &Abscissa, convention: Convention) -> Result<ValueWithBound> {
        let consts = Constants { c: c.clone(), a1: ValueWithBound::exact(num_rational::BigRational::zero()) };
        Ok(self.float_view().error_term(x, convention)?.eval(&consts))
    }
}

#[derive(Clone, Copy, Debug)]
struct Prefix<'a> {
    p1: &'a [Complex64],
    p2: &'a [Complex64],
    cum: &'a [Complex64],
    alpha_max: f64,
    phi_ratio_max: f64,
}

/// Which prefix sum a rounding estimate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixKind {
    P1,
    P2,
    Phi,
}

/// `k eps / (1 - k eps)`: relative error factor of a `k`-term float sum.
pub fn sum_error_factor(k: usize) -> f64 {
    let ke = k as f64 * f64::EPSILON;
    ke / (1.0 - ke)
}

/// Read access to `alpha` and `phi` in scalar field `S`, with partial sums
/// from prefix arrays (float) or exact accumulation.
#[derive(Clone, Copy, Debug)]
pub struct View<'a, S> {
    alpha: &'a [S],
    phi: &'a [S],
    prefix: Option<Prefix<'a>>,
    n_max: usize,
}

impl<'a, S: Scalar> View<'a, S> {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn alpha(&self, n: usize) -> &S {
        &self.alpha[n]
    }

    pub fn phi(&self, n: usize) -> &S {
        &self.phi[n]
    }

    fn prefix_value(&self, pick: impl Fn(&Prefix<'a>) -> Complex64) -> Option<S> {
        // Prefix arrays only exist on the float view, where S = Complex64.
        self.prefix.as_ref().map(|p| {
            let v = pick(p);
            let any: &dyn std::any::Any = &v;
            any.downcast_ref::<S>().cloned().expect("prefix arrays are only attached to float views")
        })
    }

    /// `sum_{n<=k} alpha(n) * num/(den n^power)`.
    fn weighted_alpha_sum(&self, k: usize, power: u32) -> S {
        let mut acc = S::Acc::default();
        for n in 1..=k {
            acc.add_scaled(&self.alpha[n], 1, (n as i128).pow(power));
        }
        acc.finish()
    }

    /// `P_1(k) = sum_{n<=k} alpha(n)/n`.
    pub fn p1(&self, k: usize) -> S {
        self.prefix_value(|p| p.p1[k]).unwrap_or_else(|| self.weighted_alpha_sum(k, 1))
    }

    /// `P_2(k) = sum_{n<=k} alpha(n)/n^2`.
    pub fn p2(&self, k: usize) -> S {
        self.prefix_value(|p| p.p2[k]).unwrap_or_else(|| self.weighted_alpha_sum(k, 2))
    }

    /// `sum_{n<=k} phi(n, F)`.
    pub fn sum_phi(&self, k: usize) -> S {
        self.prefix_value(|p| p.cum[k]).unwrap_or_else(|| {
            let mut acc = S::Acc::default();
            for v in &self.phi[1..=k] {
                acc.add(v);
            }
            acc.finish()
        })
    }

    /// Rounding bound of a float prefix sum up to `k`, from the majorants
    /// `|alpha(n)| <= max |alpha|` and `|phi(n)| <= n max |phi(m)|/m` over the
    /// table. Zero for exact views.
    pub fn prefix_err(&self, which: PrefixKind, k: usize) -> f64 {
        let Some(p) = &self.prefix else { return 0.0 };
        let kf = k as f64;
        let abs_sum = match which {
            PrefixKind::P1 => p.alpha_max * (1.0 + kf.max(1.0).ln()),
            PrefixKind::P2 => p.alpha_max * 2.0,
            PrefixKind::Phi => p.phi_ratio_max * kf * (kf + 1.0) / 2.0,
        };
        sum_error_factor(k) * abs_sum
    }

    /// `[x]` as an index into this view.
    pub fn index(&self, x: &Abscissa) -> Result<usize> {
        table_index(x, self.n_max)
    }

    /// `sum_{m|n} alpha(m)/m`, the jump of `f_1` at the integer `n`.
    pub fn divisor_jump(&self, n: usize) -> S {
        let mut acc = S::Acc::default();
        for d in crate::primes::divisors(n as u64) {
            acc.add_scaled(&self.alpha[d as usize], 1, d as i128);
        }
        acc.finish()
    }

    /// `E(x, F) = sum_{n<=x} phi(n, F) - C(F) x^2`, or the half-value version
    /// `E_2` which subtracts `phi(x, F)/2` at integers.
    pub fn error_term(&self, x: &Abscissa, convention: Convention) -> Result<Affine<S>> {
        let k = self.index(x)?;
        let xs = S::from_abscissa(x);
        let mut rest = self.sum_phi(k);
        if convention == Convention::Symmetric && x.is_integer() && k >= 1 {
            rest = rest - self.phi[k].scale(1, 2);
        }
        let err = self.prefix_err(PrefixKind::Phi, k);
        Ok(Affine::new(rest, S::zero(), -(xs.clone() * xs)).with_err(err))
    }
}
