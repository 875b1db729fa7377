//! Number types shared by every module: the exact abscissa `x`, the scalar
//! field the coefficient tables live in, and values carrying error bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::products::EulerProductSpec;

/// A nonnegative-capable exact real `num/den` used for the argument `x`.
///
/// Floors and fractional parts of `x/n` are computed with integer arithmetic,
/// so jump points (integers) are detected without rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Abscissa(Ratio<i128>);

impl Abscissa {
    /// Largest power-of-two denominator accepted when converting from `f64`.
    const MAX_DYADIC_SHIFT: i32 = 62;

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub fn integer(n: u64) -> Self {
        Self(Ratio::from_integer(n as i128))
    }

    pub fn zero() -> Self {
        Self(Ratio::from_integer(0))
    }

    /// Exact conversion of a finite double. Denominators are capped at 2^62;
    /// anything finer is rounded to that grid.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Parse(format!("non-finite abscissa {x}")));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        if x.abs() >= 2f64.powi(60) {
            return Err(Error::Parse(format!("abscissa {x} out of range")));
        }
        let shift = Self::MAX_DYADIC_SHIFT;
        let scaled = x * 2f64.powi(shift);
        // `scaled` may exceed 2^53 but is still an integer-valued double when x
        // has fewer than `shift` fractional bits.
        let num = scaled.round() as i128;
        Ok(Self(Ratio::new(num, 1i128 << shift)))
    }

    /// Parses `7`, `7.25`, `-3.5`, `29/4` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse '{s}' as a number"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            return Self::new(n, d);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.contains(['e', 'E']) {
            let v: f64 = s.parse().map_err(|_| bad())?;
            return Self::from_f64(v);
        }
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 30
        {
            return Err(bad());
        }
        let den = 10i128.pow(frac_part.len() as u32);
        let digits = format!("{int_part}{frac_part}");
        let num: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        Self::new(if neg { -num } else { num }, den)
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    /// `[x/n]`.
    pub fn floor_div(&self, n: u64) -> i128 {
        Integer::div_floor(&self.numer(), &(self.denom() * n as i128))
    }

    /// `{x/n}` as an unreduced pair `(r, d)` with `0 <= r < d`.
    pub fn fract_div(&self, n: u64) -> (i128, i128) {
        let d = self.denom() * n as i128;
        (self.numer().mod_floor(&d), d)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }
}

impl fmt::Display for Abscissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            return write!(f, "{}", self.numer());
        }
        // Terminating decimals print as decimals, everything else as p/q.
        let mut d = self.denom();
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        let digits = twos.max(fives);
        if d == 1 && digits <= 20 {
            let scale = 10i128.pow(digits);
            let scaled = self.numer() * (scale / self.denom());
            let sign = if scaled < 0 { "-" } else { "" };
            let a = scaled.abs();
            write!(f, "{sign}{}.{:0width$}", a / scale, a % scale, width = digits as usize)
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Scalar field for coefficient tables: exact rationals or complex doubles.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;
    type Acc: Accumulator<Self>;

    fn from_frac(num: i128, den: i128) -> Self;
    fn from_abscissa(x: &Abscissa) -> Self {
        Self::from_frac(x.numer(), x.denom())
    }
    fn to_c64(&self) -> Complex64;
    /// Multiply by the small rational `num/den`.
    fn scale(&self, num: i128, den: i128) -> Self;
    /// `gamma(p)` of the product in this field.
    fn gamma(spec: &EulerProductSpec, p: u64) -> Result<Self>;
    /// `F_p(1)^{-1} = prod_j (1 - alpha_j(p)/p)` in this field.
    fn inverse_local_factor(spec: &EulerProductSpec, p: u64) -> Result<Self>;
    /// Canonical text form: `p/q` for rationals, 17 significant digits for floats.
    fn render(&self) -> String;
    fn parse_value(s: &str) -> Result<Self>;
    fn abs_bound(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// Order-insensitive summation of `v * num/den` terms.
pub trait Accumulator<T>: Default {
    fn add_scaled(&mut self, v: &T, num: i128, den: i128);
    fn add(&mut self, v: &T) {
        self.add_scaled(v, 1, 1)
    }
    fn finish(self) -> T;
}

#[derive(Default)]
pub struct FloatSum(Complex64);

impl Accumulator<Complex64> for FloatSum {
    fn add_scaled(&mut self, v: &Complex64, num: i128, den: i128) {
        self.0 += v * (num as f64 / den as f64);
    }

    fn finish(self) -> Complex64 {
        self.0
    }
}

/// Exact sum of rationals grouped by denominator; the common denominator is
/// formed once in [`finish`](Accumulator::finish), so only one large gcd is
/// taken per sum.
#[derive(Default)]
pub struct FracSum {
    groups: BTreeMap<BigInt, BigInt>,
}

impl Accumulator<BigRational> for FracSum {
    fn add_scaled(&mut self, v: &BigRational, num: i128, den: i128) {
        if v.is_zero() || num == 0 {
            return;
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let key = v.denom() * BigInt::from(den);
        let add = v.numer() * BigInt::from(num);
        *self.groups.entry(key).or_insert_with(BigInt::zero) += add;
    }

    fn finish(self) -> BigRational {
        let groups: Vec<_> = self.groups.into_iter().filter(|(_, n)| !n.is_zero()).collect();
        if groups.is_empty() {
            return BigRational::zero();
        }
        let mut lcm = BigInt::one();
        for (den, _) in &groups {
            let g = match den.to_u64() {
                Some(small) => BigInt::from((&lcm % small).to_u64().unwrap_or(0).gcd(&small)),
                None => lcm.gcd(den),
            };
            lcm = &lcm * (den / &g);
        }
        let total: BigInt = groups.iter().map(|(den, num)| num * (&lcm / den)).sum();
        BigRational::new(total, lcm)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    type Acc = FracSum;

    fn from_frac(num: i128, den: i128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn scale(&self, num: i128, den: i128) -> Self {
        self * Self::from_frac(num, den)
    }

    fn gamma(spec: &EulerProductSpec, p: u64) -> Result<Self> {
        spec.gamma_exact(p)
    }

    fn inverse_local_factor(spec: &EulerProductSpec, p: u64) -> Result<Self> {
        spec.inverse_local_factor_exact(p)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_value(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot parse '{s}' as a rational"));
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }

    fn abs_bound(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    type Acc = FloatSum;

    fn from_frac(num: i128, den: i128) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_abscissa(x: &Abscissa) -> Self {
        Complex64::new(x.to_f64(), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn scale(&self, num: i128, den: i128) -> Self {
        self * (num as f64 / den as f64)
    }

    fn gamma(spec: &EulerProductSpec, p: u64) -> Result<Self> {
        spec.gamma(p)
    }

    fn inverse_local_factor(spec: &EulerProductSpec, p: u64) -> Result<Self> {
        Ok(spec.local_factor_at_one(p)?.inv())
    }

    fn render(&self) -> String {
        format_complex(*self)
    }

    fn parse_value(s: &str) -> Result<Self> {
        parse_complex(s)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{v:.16e}")
}

/// Real values print as a single number; complex ones as `re+imi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else {
        let im = format_f64(z.im);
        let sign = if im.starts_with('-') { "" } else { "+" };
        format!("{}{sign}{im}i", format_f64(z.re))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse '{s}' as a number"));
    match s.strip_suffix('i') {
        None => Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0)),
        Some(body) => {
            // Split at the last sign that is not part of an exponent.
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
                .ok_or_else(bad)?;
            let re: f64 = body[..split].parse().map_err(|_| bad())?;
            let im: f64 = body[split..].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

impl BoundKind {
    pub fn and(self, other: BoundKind) -> BoundKind {
        if self == BoundKind::Rigorous && other == BoundKind::Rigorous {
            BoundKind::Rigorous
        } else {
            BoundKind::Heuristic
        }
    }
}

/// A value together with a radius that the true value is known (rigorous) or
/// estimated (heuristic) to lie within.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueWithBound {
    pub value: Complex64,
    pub bound: f64,
    pub kind: BoundKind,
    /// Set when the value is an exact rational; the bound is then 0.
    pub exact: Option<BigRational>,
}

impl ValueWithBound {
    pub fn new(value: Complex64, bound: f64, kind: BoundKind) -> Self {
        debug_assert!(bound >= 0.0 || bound.is_nan());
        Self { value, bound, kind, exact: None }
    }

    pub fn real(value: f64, bound: f64, kind: BoundKind) -> Self {
        Self::new(Complex64::new(value, 0.0), bound, kind)
    }

    pub fn exact(r: BigRational) -> Self {
        Self {
            value: r.to_c64(),
            bound: 0.0,
            kind: BoundKind::Rigorous,
            exact: Some(r),
        }
    }

    /// Whether `z` lies within `bound + slack` of the value.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (self.value - z).norm() <= self.bound + slack
    }
}

impl Serialize for ValueWithBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ValueWithBound", 3)?;
        match &self.exact {
            Some(r) => st.serialize_field("value", &r.render())?,
            None => st.serialize_field("value", &format_complex(self.value))?,
        }
        st.serialize_field("bound", &format_f64(self.bound))?;
        st.serialize_field("bound_kind", &self.kind)?;
        st.end()
    }
}
