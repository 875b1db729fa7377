//! O(1) float evaluators of `E_2` and `f_1` from prefix tables.
//!
//! Between integers `f_1` is linear with slope `-2C`, and
//! `f_1(k+0) = A_1/2 - 2Ck + sum_{m<=k} phi(m,F)/m`, since
//! `sum_{n<=k} (alpha(n)/n)[k/n] = sum_{m<=k} sum_{n|m} alpha(n)/n`.

use num_complex::Complex64;

use crate::coeffs::Tables;
use crate::error::{Error, Result};
use crate::numeric::Scalar;
use crate::products::Constants;

#[derive(Clone, Debug)]
pub struct E2Eval {
    cum: Vec<Complex64>,
    phi: Vec<Complex64>,
    c: Complex64,
}

impl E2Eval {
    pub fn new<T: Scalar>(tables: &Tables<T>, consts: &Constants) -> Self {
        Self {
            cum: tables.totient().cumulative_f().to_vec(),
            phi: tables.totient().phi_f().to_vec(),
            c: consts.c.value,
        }
    }

    pub fn max_x(&self) -> f64 {
        (self.cum.len() - 1) as f64
    }

    /// Errors when `x` lies outside `[0, N]`.
    pub fn try_eval(&self, x: f64) -> Result<Complex64> {
        if x < 0.0 {
            return Err(Error::NegativeX(x));
        }
        if x > self.max_x() {
            return Err(Error::XBeyondTable { x, n: self.max_x() as u64 });
        }
        Ok(self.eval(x))
    }

    /// `E_2(x)`; panics beyond the table, see [`try_eval`](Self::try_eval).
    pub fn eval(&self, x: f64) -> Complex64 {
        let k = x.floor() as usize;
        let mut s = self.cum[k];
        if x == k as f64 && k >= 1 {
            s -= self.phi[k] * 0.5;
        }
        s - self.c * (x * x)
    }
}

#[derive(Clone, Debug)]
pub struct F1Eval {
    right: Vec<Complex64>,
    jump: Vec<Complex64>,
    c: Complex64,
}

impl F1Eval {
    pub fn new<T: Scalar>(tables: &Tables<T>, consts: &Constants) -> Self {
        let phi = tables.totient().phi_f();
        let c = consts.c.value;
        let mut right = Vec::with_capacity(phi.len());
        let mut jump = Vec::with_capacity(phi.len());
        let mut acc = Complex64::new(0.0, 0.0);
        let half_a1 = consts.a1.value * 0.5;
        right.push(half_a1);
        jump.push(Complex64::new(0.0, 0.0));
        for (k, p) in phi.iter().enumerate().skip(1) {
            let j = p / k as f64;
            acc += j;
            jump.push(j);
            right.push(half_a1 - c * (2.0 * k as f64) + acc);
        }
        Self { right, jump, c }
    }

    pub fn max_x(&self) -> f64 {
        (self.right.len() - 1) as f64
    }

    /// `f_1(x)` with the half-value convention at integers and `f_1(0) = 0`.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = x.floor();
        let i = k as usize;
        if x == k {
            self.right[i] - self.jump[i] * 0.5
        } else {
            self.right[i] - self.c * (2.0 * (x - k))
        }
    }

    pub fn try_eval(&self, x: f64) -> Result<Complex64> {
        if x < 0.0 {
            return Err(Error::NegativeX(x));
        }
        if x > self.max_x() {
            return Err(Error::XBeyondTable { x, n: self.max_x() as u64 });
        }
        Ok(self.eval(x))
    }
}
