//! Quantities that are affine in the two constants `A_1` and `C(F)`.
//!
//! Every series in the decomposition has a finite part plus an analytic tail
//! expressed through `A_1 = sum alpha(n)/n` and `A_2 = 2 C(F)`. Keeping the
//! coefficients of those constants symbolic lets exact mode decide identities
//! exactly, and lets float mode propagate the constants' error bounds.

use std::ops::{Add, Mul, Sub};

use crate::numeric::{BoundKind, Scalar, ValueWithBound};
use crate::products::Constants;

/// `rest + a1 * A_1 + c * C(F)`. `err` bounds the floating-point error
/// already committed in the three coefficients (zero in exact mode).
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<S> {
    pub rest: S,
    pub a1: S,
    pub c: S,
    pub err: f64,
}

impl<S: Scalar> Affine<S> {
    pub fn new(rest: S, a1: S, c: S) -> Self {
        Self { rest, a1, c, err: 0.0 }
    }

    pub fn constant(rest: S) -> Self {
        Self::new(rest, S::zero(), S::zero())
    }

    pub fn with_err(mut self, err: f64) -> Self {
        self.err += err;
        self
    }

    pub fn zero() -> Self {
        Self::constant(S::zero())
    }

    /// Exactly zero in all three coefficients.
    pub fn is_zero(&self) -> bool {
        self.rest.is_zero() && self.a1.is_zero() && self.c.is_zero()
    }

    pub fn scale(&self, k: &S) -> Self {
        let norm = k.abs_bound();
        Self {
            rest: self.rest.clone() * k.clone(),
            a1: self.a1.clone() * k.clone(),
            c: self.c.clone() * k.clone(),
            err: self.err * norm + if S::EXACT { 0.0 } else { 2.0 * f64::EPSILON * self.magnitude() * norm },
        }
    }

    pub fn scale_frac(&self, num: i128, den: i128) -> Self {
        let f = (num as f64 / den as f64).abs();
        Self {
            rest: self.rest.scale(num, den),
            a1: self.a1.scale(num, den),
            c: self.c.scale(num, den),
            err: self.err * f + if S::EXACT { 0.0 } else { 2.0 * f64::EPSILON * self.magnitude() * f },
        }
    }

    fn magnitude(&self) -> f64 {
        self.rest.abs_bound() + self.a1.abs_bound() + self.c.abs_bound()
    }

    /// Numeric value with the constants substituted. The bound covers the
    /// constants' bounds weighted by their coefficients plus rounding.
    pub fn eval(&self, k: &Constants) -> ValueWithBound {
        let rest = self.rest.to_c64();
        let a1 = self.a1.to_c64();
        let c = self.c.to_c64();
        let t_a1 = a1 * k.a1.value;
        let t_c = c * k.c.value;
        let value = rest + t_a1 + t_c;
        let mut kind = BoundKind::Rigorous;
        let mut bound = 0.0;
        if a1.norm() > 0.0 {
            bound += a1.norm() * k.a1.bound;
            kind = kind.and(k.a1.kind);
        }
        if c.norm() > 0.0 {
            bound += c.norm() * k.c.bound;
            kind = kind.and(k.c.kind);
        }
        let magnitude = self.rest.abs_bound() + t_a1.norm() + t_c.norm();
        bound += self.err + 8.0 * f64::EPSILON * magnitude;
        ValueWithBound::new(value, bound, kind)
    }
}

impl<S: Scalar> Add for Affine<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let round = if S::EXACT { 0.0 } else { f64::EPSILON * (self.magnitude() + o.magnitude()) };
        Self { rest: self.rest + o.rest, a1: self.a1 + o.a1, c: self.c + o.c, err: self.err + o.err + round }
    }
}

impl<S: Scalar> Sub for Affine<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let round = if S::EXACT { 0.0 } else { f64::EPSILON * (self.magnitude() + o.magnitude()) };
        Self { rest: self.rest - o.rest, a1: self.a1 - o.a1, c: self.c - o.c, err: self.err + o.err + round }
    }
}

impl<S: Scalar> Mul<S> for Affine<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        self.scale(&k)
    }
}
