//! The saw-tooth series `f_1`, the analytic series `g_1`, the auxiliary
//! function `R = E_2 - x f_1 = -int_0^x f_1`, and the split
//! `E_2 = x f_1 + g_1/2` for `x >= 1`.
//!
//! All quantities are built as [`Affine`] combinations of `A_1` and `C(F)`:
//! finite sums over `n <= x` are computed in the table's scalar field and the
//! infinite tails are folded into the constants.

mod batch;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::affine::Affine;
use crate::coeffs::{sum_error_factor, Convention, PrefixKind, View};
use crate::error::{Error, Result};
use crate::numeric::{format_complex, Abscissa, Accumulator, Scalar, ValueWithBound};
use crate::products::Constants;

pub use batch::{decompose_batch, write_decomposition_csv};

/// `s(x)`: `0` at integers, `1/2 - {x}` elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SawtoothValue(Ratio<i128>);

impl SawtoothValue {
    pub fn value(&self) -> Ratio<i128> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

pub fn sawtooth(x: &Abscissa) -> SawtoothValue {
    let (r, d) = x.fract_div(1);
    if r == 0 {
        SawtoothValue(Ratio::from_integer(0))
    } else {
        SawtoothValue(Ratio::new(d - 2 * r, 2 * d))
    }
}

/// `r/d` as a scalar, falling back to scalar arithmetic when the integer
/// numerator or denominator would overflow.
fn ratio_or<S: Scalar>(num: Option<i128>, den: Option<i128>, fallback: impl FnOnce() -> S) -> S {
    match (num, den) {
        (Some(n), Some(d)) => S::from_frac(n, d),
        _ => fallback(),
    }
}

/// `{x/n}({x/n} - 1)`.
fn frac_poly<S: Scalar>(x: &Abscissa, n: u64) -> S {
    let (r, d) = x.fract_div(n);
    ratio_or(r.checked_mul(r - d), d.checked_mul(d), || {
        let f = S::from_frac(r, d);
        f.clone() * (f - S::one())
    })
}

/// `s(x/n)`.
fn sawtooth_div<S: Scalar>(x: &Abscissa, n: u64) -> S {
    let (r, d) = x.fract_div(n);
    if r == 0 {
        S::zero()
    } else {
        S::from_frac(d - 2 * r, 2 * d)
    }
}

/// `int_n^x {t/n} dt = (n/2)({x/n}^2 + [x/n] - 1)`.
pub fn frac_integral<S: Scalar>(n: u64, x: &Abscissa) -> Result<S> {
    if n == 0 {
        return Err(Error::InvalidArgument("frac_integral needs n >= 1".into()));
    }
    if *x < Abscissa::integer(n) {
        return Err(Error::XBelowN { x: x.to_f64(), n });
    }
    let (r, d) = x.fract_div(n);
    let q = x.floor_div(n);
    let sq: S = ratio_or(r.checked_mul(r), d.checked_mul(d), || {
        let f = S::from_frac(r, d);
        f.clone() * f
    });
    Ok((sq + S::from_frac(q - 1, 1)).scale(n as i128, 2))
}

/// Float rounding tracker for the finite sums; inert in exact mode.
#[derive(Default)]
struct AbsSum {
    total: f64,
    terms: usize,
}

impl AbsSum {
    fn push<S: Scalar>(&mut self, term: impl FnOnce() -> f64) {
        if !S::EXACT {
            self.total += term();
            self.terms += 1;
        }
    }

    fn err(&self) -> f64 {
        sum_error_factor(self.terms + 1) * self.total
    }
}

/// `S_f(x) = sum_{n<=x} (alpha(n)/n) [x/n]`.
fn s_f<S: Scalar>(view: &View<'_, S>, x: &Abscissa, k: usize) -> (S, f64) {
    let mut acc = S::Acc::default();
    let mut abs = AbsSum::default();
    for n in 1..=k {
        let a = view.alpha(n);
        let q = x.floor_div(n as u64);
        acc.add_scaled(a, q, n as i128);
        abs.push::<S>(|| a.abs_bound() * q as f64 / n as f64);
    }
    (acc.finish(), abs.err())
}

/// `S_g(x) = sum_{n<=x} alpha(n) {x/n}({x/n} - 1)`.
fn s_g<S: Scalar>(view: &View<'_, S>, x: &Abscissa, k: usize) -> (S, f64) {
    let mut acc = S::Acc::default();
    let mut abs = AbsSum::default();
    for n in 1..=k {
        let a = view.alpha(n);
        if a.is_zero() {
            continue;
        }
        let w: S = frac_poly(x, n as u64);
        abs.push::<S>(|| a.abs_bound() * 0.25);
        acc.add(&(a.clone() * w));
    }
    (acc.finish(), abs.err())
}

/// Right-limit form `1/2 A_1 - 2 C x + S_f(x)`; at `x = 0` the series value 0.
fn f1_right<S: Scalar>(view: &View<'_, S>, x: &Abscissa) -> Result<Affine<S>> {
    let k = view.index(x)?;
    if k == 0 && x.numer() == 0 {
        return Ok(Affine::zero());
    }
    let (sf, err) = s_f(view, x, k);
    let xs = S::from_abscissa(x);
    Ok(Affine::new(sf, S::from_frac(1, 2), xs.scale(-2, 1)).with_err(err))
}

/// `f_1(x, F)` from the closed form, with the half-jump correction
/// `-1/2 sum_{n|x} alpha(n)/n` at positive integers.
pub fn f1_closed<S: Scalar>(view: &View<'_, S>, x: &Abscissa) -> Result<Affine<S>> {
    let right = f1_right(view, x)?;
    if x.is_integer() && x.numer() > 0 {
        let jump = view.divisor_jump(x.numer() as usize);
        return Ok(right - Affine::constant(jump.scale(1, 2)));
    }
    Ok(right)
}

/// `f_1(x, F)` from the defining series truncated at `M`, with the tail
/// `n > M` summed through `s(x/n) = 1/2 - x/n`:
/// `1/2 (A_1 - P_1(M)) - x (2C - P_2(M))`.
pub fn f1_series<S: Scalar>(view: &View<'_, S>, x: &Abscissa, m: usize) -> Result<Affine<S>> {
    if m > view.n_max() {
        return Err(Error::MBeyondTable { m: m as u64, n: view.n_max() as u64 });
    }
    if x.is_negative() {
        return Err(Error::NegativeX(x.to_f64()));
    }
    if Abscissa::integer(m as u64) < *x {
        return Err(Error::MSmallerThanX { m: m as u64, x: x.to_f64() });
    }
    if x.numer() == 0 {
        return Ok(Affine::zero());
    }
    let mut acc = S::Acc::default();
    let mut abs = AbsSum::default();
    for n in 1..=m {
        let a = view.alpha(n);
        if a.is_zero() {
            continue;
        }
        let s: S = sawtooth_div(x, n as u64);
        abs.push::<S>(|| 0.5 * a.abs_bound() / n as f64);
        acc.add(&(a.clone() * s).scale(1, n as i128));
    }
    let xs = S::from_abscissa(x);
    let rest = acc.finish() - view.p1(m).scale(1, 2) + xs.clone() * view.p2(m);
    let err = abs.err()
        + view.prefix_err(PrefixKind::P1, m)
        + xs.abs_bound() * view.prefix_err(PrefixKind::P2, m);
    Ok(Affine::new(rest, S::from_frac(1, 2), xs.scale(-2, 1)).with_err(err))
}

/// One-sided limits of `f_1` at a positive integer.
#[derive(Clone, Debug)]
pub struct OneSided<S> {
    pub n: u64,
    pub left: Affine<S>,
    pub right: Affine<S>,
    pub half: Affine<S>,
    pub jump: S,
    pub f1_at_n: Affine<S>,
    /// Whether `(left + right)/2` equals `f1_closed(N)` (exactly in exact
    /// mode, within rounding otherwise) and `right - left` equals the jump.
    pub consistent: bool,
}

/// `f_1(N - 0)` uses `[t/n] = [(N-1)/n]` for `t` just below `N`;
/// `f_1(N + 0)` is the closed form at `N`.
pub fn f1_one_sided<S: Scalar>(view: &View<'_, S>, big_n: u64) -> Result<OneSided<S>> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("one-sided limits need N >= 1".into()));
    }
    let x = Abscissa::integer(big_n);
    let right = f1_right(view, &x)?;
    let below = Abscissa::integer(big_n - 1);
    let (sf_left, err) = s_f(view, &below, (big_n - 1) as usize);
    let xs = S::from_abscissa(&x);
    let left = Affine::new(sf_left, S::from_frac(1, 2), xs.scale(-2, 1)).with_err(err);
    let half = (left.clone() + right.clone()).scale_frac(1, 2);
    let jump = view.divisor_jump(big_n as usize);
    let f1_at_n = f1_closed(view, &x)?;
    let diff = right.clone() - left.clone() - Affine::constant(jump.clone());
    let gap = half.clone() - f1_at_n.clone();
    let consistent = if S::EXACT {
        diff.is_zero() && gap.is_zero()
    } else {
        let tol = |a: &Affine<S>| a.err + 64.0 * f64::EPSILON;
        coeff_norm(&diff) <= tol(&diff) && coeff_norm(&gap) <= tol(&gap)
    };
    Ok(OneSided { n: big_n, left, right, half, jump, f1_at_n, consistent })
}

fn coeff_norm<S: Scalar>(a: &Affine<S>) -> f64 {
    a.rest.abs_bound() + a.a1.abs_bound() + a.c.abs_bound()
}

/// `g_1(x, F) = S_g(x) + x^2 (A_2 - P_2(x)) - x (A_1 - P_1(x))`, the tail
/// `n > x` using `{x/n} = x/n`.
pub fn g1<S: Scalar>(view: &View<'_, S>, x: &Abscissa) -> Result<Affine<S>> {
    let k = view.index(x)?;
    let (sg, err) = s_g(view, x, k);
    let xs = S::from_abscissa(x);
    let x2 = xs.clone() * xs.clone();
    let rest = sg - x2.clone() * view.p2(k) + xs.clone() * view.p1(k);
    let err = err
        + x2.abs_bound() * view.prefix_err(PrefixKind::P2, k)
        + xs.abs_bound() * view.prefix_err(PrefixKind::P1, k);
    Ok(Affine::new(rest, -xs, x2.scale(2, 1)).with_err(err))
}

/// `E_2(x, F)` as an affine quantity (`C(F)` kept symbolic).
pub fn e2<S: Scalar>(view: &View<'_, S>, x: &Abscissa) -> Result<Affine<S>> {
    view.error_term(x, Convention::Symmetric)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// `E_2 - x f_1`.
    Definition,
    /// `-int_0^x f_1(t) dt`, integrated piece by piece.
    Integral,
    /// `g_1 / 2`, valid for `x >= 1`.
    Closed,
}

/// `R(x, F)` by the requested route.
///
/// The integral route uses `int_0^x f_1 = 1/2 A_1 x - C x^2
/// + sum_{n<=x} (alpha(n)/n) int_n^x [t/n] dt` with
/// `int_n^x [t/n] dt = (x^2 - n^2)/(2n) - int_n^x {t/n} dt`.
pub fn r_function<S: Scalar>(view: &View<'_, S>, x: &Abscissa, route: Route) -> Result<Affine<S>> {
    match route {
        Route::Definition => {
            let xs = S::from_abscissa(x);
            Ok(e2(view, x)? - f1_closed(view, x)?.scale(&xs))
        }
        Route::Integral => {
            if x.numer() <= 0 {
                return Err(Error::NonPositiveX);
            }
            let k = view.index(x)?;
            let xs = S::from_abscissa(x);
            let x2 = xs.clone() * xs.clone();
            let mut acc = S::Acc::default();
            let mut abs = AbsSum::default();
            for n in 1..=k {
                let a = view.alpha(n);
                if a.is_zero() {
                    continue;
                }
                let nn = n as i128;
                let floor_part = (x2.clone() - S::from_frac(nn * nn, 1)).scale(1, 2 * nn) - frac_integral::<S>(n as u64, x)?;
                abs.push::<S>(|| a.abs_bound() * floor_part.abs_bound() / n as f64);
                acc.add(&(a.clone() * floor_part).scale(1, nn));
            }
            let rest = -acc.finish();
            Ok(Affine::new(rest, xs.scale(-1, 2), x2).with_err(abs.err()))
        }
        Route::Closed => {
            if *x < Abscissa::integer(1) {
                return Err(Error::XBelowOne(x.to_f64()));
            }
            Ok(g1(view, x)?.scale_frac(1, 2))
        }
    }
}

/// Both sides of the constant-free identity
/// `sum'_{n<=x} phi(n,F) = x (S_f(x) - [x in Z] J(x)/2) + S_g(x)/2
///  - (x^2/2) P_2(x) + (x/2) P_1(x)`,
/// where `J(x) = sum_{n|x} alpha(n)/n = phi(x,F)/x` and `sum'` halves the
/// last term at integers. At integers this is the same as the plain sum
/// `sum_{n<=x} phi(n,F) = x S_f(x) + S_g(x)/2 - (x^2/2) P_2(x) + (x/2) P_1(x)`.
#[derive(Clone, Debug)]
pub struct ReducedIdentity<S> {
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> ReducedIdentity<S> {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn reduced_identity<S: Scalar>(view: &View<'_, S>, x: &Abscissa) -> Result<ReducedIdentity<S>> {
    let k = view.index(x)?;
    let integer = x.is_integer() && k >= 1;
    let mut lhs = view.sum_phi(k);
    if integer {
        lhs = lhs - view.phi(k).scale(1, 2);
    }
    let xs = S::from_abscissa(x);
    let (mut sf, _) = s_f(view, x, k);
    if integer {
        sf = sf - view.divisor_jump(k).scale(1, 2);
    }
    let (sg, _) = s_g(view, x, k);
    let x2 = xs.clone() * xs.clone();
    let rhs = xs.clone() * sf + sg.scale(1, 2) - (x2 * view.p2(k)).scale(1, 2) + (xs * view.p1(k)).scale(1, 2);
    Ok(ReducedIdentity { lhs, rhs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

/// `E_2 = x f_1 + g_1/2` at one abscissa.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    #[serde(serialize_with = "display")]
    pub x: Abscissa,
    pub e2: ValueWithBound,
    pub arithmetic_part: ValueWithBound,
    pub analytic_part: ValueWithBound,
    #[serde(serialize_with = "complex")]
    pub residual: Complex64,
    #[serde(serialize_with = "float")]
    pub residual_bound: f64,
    pub exact_verdict: Verdict,
}

impl DecompositionReport {
    pub fn within_bound(&self) -> bool {
        self.residual.norm() <= self.residual_bound
    }
}

fn display<T: std::fmt::Display, Z: Serializer>(v: &T, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.collect_str(v)
}

fn complex<Z: Serializer>(v: &Complex64, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&format_complex(*v))
}

fn float<Z: Serializer>(v: &f64, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&crate::numeric::format_f64(*v))
}

/// Fills a [`DecompositionReport`] for `1 <= x <= N`. In exact mode the
/// verdict is `pass` iff the symbolic residual vanishes and the reduced
/// identity holds as an equality of rationals.
pub fn decompose<S: Scalar>(view: &View<'_, S>, consts: &Constants, x: &Abscissa) -> Result<DecompositionReport> {
    if *x < Abscissa::integer(1) {
        return Err(Error::XBelowOne(x.to_f64()));
    }
    let xs = S::from_abscissa(x);
    let e = e2(view, x)?;
    let arith = f1_closed(view, x)?.scale(&xs);
    let analytic = g1(view, x)?.scale_frac(1, 2);
    let (ev, av, gv) = (e.eval(consts), arith.eval(consts), analytic.eval(consts));
    let residual = ev.value - av.value - gv.value;
    let residual_bound = ev.bound + av.bound + gv.bound;
    let exact_verdict = if S::EXACT {
        let symbolic = e - arith - analytic;
        if symbolic.is_zero() && reduced_identity(view, x)?.holds() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else {
        Verdict::NotApplicable
    };
    Ok(DecompositionReport { x: *x, e2: ev, arithmetic_part: av, analytic_part: gv, residual, residual_bound, exact_verdict })
}
