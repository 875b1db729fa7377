//! The Volterra equation `F_1(x) - int_0^x F_1(t) dt/t = E_2(x)` on a
//! half-offset grid: quadrature of the improper integral, residuals of
//! candidate solutions, a solver via the ODE `(H/x)' = E_2/x^2`, and a probe
//! of the homogeneous solutions `A x`.

mod fast;

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::format_complex;

pub use fast::{E2Eval, F1Eval};

/// Grid points `t_i = (i + 1/2) h`, `i = 0..K`, with `h = 1/m`; they sit
/// exactly halfway between multiples of `h` and so at distance `>= h/2` from
/// every integer.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    m: u64,
    x_end: f64,
    points: Vec<f64>,
}

impl Grid {
    /// `h` must be the reciprocal of an integer `m >= 10`, so that at least
    /// ten points lie below 1.
    pub fn new(x_end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("step {h} must be positive")));
        }
        let m = (1.0 / h).round();
        if (m * h - 1.0).abs() > 1e-9 || m < 10.0 {
            return Err(Error::InvalidGrid(format!("step {h} must be 1/m for an integer m >= 10")));
        }
        if !(x_end > 0.0) || !x_end.is_finite() {
            return Err(Error::InvalidGrid(format!("right endpoint {x_end} must be positive")));
        }
        let m = m as u64;
        let count = (x_end * m as f64 - 0.5).floor() as i64 + 1;
        if count < 2 {
            return Err(Error::InvalidGrid("fewer than two grid points".into()));
        }
        let points = (0..count as u64).map(|i| (2 * i + 1) as f64 / (2 * m) as f64).collect();
        Ok(Self { m, x_end, points })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn x_end(&self) -> f64 {
        self.x_end
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> GridFunction {
        GridFunction { grid: self.clone(), values: self.points.iter().map(|&t| f(t)).collect() }
    }
}

/// A function sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("{} values for {} points", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn points(&self) -> &[f64] {
        &self.grid.points
    }

    fn ratios(&self) -> Vec<Complex64> {
        self.values.iter().zip(&self.grid.points).map(|(v, t)| v / t).collect()
    }
}

/// `(f_1(x, F) + A) x`.
#[derive(Clone, Debug)]
pub struct SolutionFamily<'a> {
    pub f1: &'a F1Eval,
    pub a: Complex64,
}

impl SolutionFamily<'_> {
    pub fn member(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (self.f1.eval(x) + self.a) * x
    }

    pub fn sample(&self, grid: &Grid) -> GridFunction {
        grid.sample(|t| self.member(t))
    }
}

/// Heuristic `g(t) = O(t)` check: `|g(t_0)/t_0|` may not exceed four times
/// `|g(t_9)/t_9|` (plus an absolute slack), which rules out `1/t`-type
/// blow-up near zero.
fn check_near_zero(r: &[Complex64]) -> Result<()> {
    let probe = 9.min(r.len() - 1);
    let scale = r[..=probe].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !scale.is_finite() || r[0].norm() > 4.0 * r[probe].norm() + 1e-9 {
        return Err(Error::NotIntegrableNearZero);
    }
    Ok(())
}

/// `int_0^{t_i} g(t)/t dt` at every grid point.
///
/// The head `[0, t_0]` assumes `g(t) = c t` there and contributes
/// `g(t_0)`; the rest is the composite trapezoid rule.
pub fn cumulative_integral(g: &GridFunction) -> Result<Vec<Complex64>> {
    let r = g.ratios();
    check_near_zero(&r)?;
    let h = g.grid.h();
    let mut out = Vec::with_capacity(r.len());
    let mut acc = g.values[0];
    out.push(acc);
    for w in r.windows(2) {
        acc += (w[0] + w[1]) * (0.5 * h);
        out.push(acc);
    }
    Ok(out)
}

/// `lim_{eps -> 0+} int_eps^x g(t)/t dt` for `0 <= x <= X`, interpolating
/// `g(t)/t` linearly between grid points.
pub fn improper_integral(g: &GridFunction, x: f64) -> Result<Complex64> {
    let grid = &g.grid;
    if x > grid.x_end * (1.0 + 1e-15) || x.is_nan() {
        return Err(Error::XBeyondGrid { x, end: grid.x_end });
    }
    if x < 0.0 {
        return Err(Error::NegativeX(x));
    }
    let cum = cumulative_integral(g)?;
    let r = g.ratios();
    let h = grid.h();
    let t0 = grid.points[0];
    if x <= t0 {
        // the head model g = c t gives int_0^x c dt
        return Ok(r[0] * x);
    }
    let n = grid.len();
    let j = (((x - t0) / h).floor() as usize).min(n - 2);
    let (ta, tb) = (grid.points[j], grid.points[j + 1]);
    let slope = (r[j + 1] - r[j]) / (tb - ta);
    let dx = x - ta;
    Ok(cum[j] + r[j] * dx + slope * (0.5 * dx * dx))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub x: f64,
    #[serde(serialize_with = "complex")]
    pub f1: Complex64,
    #[serde(serialize_with = "complex")]
    pub e2: Complex64,
    #[serde(serialize_with = "complex")]
    pub residual: Complex64,
}

fn complex<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_complex(*v))
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub x_end: f64,
    pub h: f64,
    pub sup: f64,
    pub argmax: f64,
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    /// Largest `|residual|` over grid points in `[lo, hi]`.
    pub fn sup_on(&self, lo: f64, hi: f64) -> f64 {
        self.rows.iter().filter(|r| r.x >= lo && r.x <= hi).map(|r| r.residual.norm()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,F1,E2,residual")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                crate::numeric::format_f64(r.x),
                format_complex(r.f1),
                format_complex(r.e2),
                format_complex(r.residual)
            )?;
        }
        Ok(())
    }
}

/// `F_1(x) - int_0^x F_1(t) dt/t - E_2(x)` at every grid point.
pub fn residual(candidate: &GridFunction, e2: impl Fn(f64) -> Complex64) -> Result<ResidualReport> {
    let cum = cumulative_integral(candidate)?;
    let mut rows = Vec::with_capacity(cum.len());
    let (mut sup, mut argmax) = (0.0f64, candidate.grid.points[0]);
    for ((&x, &f), i) in candidate.grid.points.iter().zip(&candidate.values).zip(cum) {
        let e = e2(x);
        let res = f - i - e;
        if res.norm() > sup {
            (sup, argmax) = (res.norm(), x);
        }
        rows.push(ResidualRow { x, f1: f, e2: e, residual: res });
    }
    Ok(ResidualReport { x_end: candidate.grid.x_end, h: candidate.grid.h(), sup, argmax, rows })
}

/// Three-point Gauss-Legendre rule on `[a, b]`; never evaluates the endpoints.
fn gauss3(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let node = (0.6f64).sqrt();
    (f(mid - half * node) * (5.0 / 9.0) + f(mid) * (8.0 / 9.0) + f(mid + half * node) * (5.0 / 9.0)) * half
}

/// Solves the equation from `E_2` alone:
/// `F_1(x) = E_2(x) + x int_{x_0}^x E_2(t)/t^2 dt + K x`, with
/// `K = (v - E_2(x_0))/x_0` fixed by the anchor `F_1(x_0) = v`.
///
/// `E_2(t)/t^2` is smooth between integers and bounded near 0, so the
/// integral uses the trapezoid rule on the grid plus a Gauss-Legendre
/// segment between `x_0` and the nearest grid point.
pub fn solve_from_e2(e2: impl Fn(f64) -> Complex64, x_end: f64, h: f64, anchor: (f64, Complex64)) -> Result<GridFunction> {
    let grid = Grid::new(x_end, h)?;
    let (x0, v) = anchor;
    if !(x0 > 0.0) || x0 > x_end {
        return Err(Error::AnchorOutOfRange(x0));
    }
    let q = |t: f64| e2(t) / (t * t);
    let pts = &grid.points;
    let qs: Vec<Complex64> = pts.iter().map(|&t| q(t)).collect();
    // trapezoid prefix from t_0
    let mut prefix = Vec::with_capacity(pts.len());
    let mut acc = Complex64::new(0.0, 0.0);
    prefix.push(acc);
    for w in qs.windows(2) {
        acc += (w[0] + w[1]) * (0.5 * grid.h());
        prefix.push(acc);
    }
    let j = pts
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x0).abs().total_cmp(&(b.1 - x0).abs()))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    // int_{x_0}^{t_j}
    let link = if pts[j] == x0 { Complex64::new(0.0, 0.0) } else { gauss3(&q, x0, pts[j]) };
    let k = (v - e2(x0)) / x0;
    let values = pts
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let integral = prefix[i] - prefix[j] + link;
            e2(t) + integral * t + k * t
        })
        .collect();
    GridFunction::new(grid, values)
}

/// Least-squares `A` for `g(x) ~ A x` and the sup deviation.
pub fn fit_linear(g: &GridFunction) -> (Complex64, f64) {
    let pts = g.points();
    let num: Complex64 = g.values.iter().zip(pts).map(|(v, t)| v * t).sum();
    let den: f64 = pts.iter().map(|t| t * t).sum();
    let a = num / den;
    let dev = g.values.iter().zip(pts).map(|(v, t)| (v - a * t).norm()).fold(0.0, f64::max);
    (a, dev)
}

/// Least-squares `A` for `g(x) ~ (f_1(x) + A) x` and the sup deviation.
pub fn fit_family(g: &GridFunction, f1: &F1Eval) -> (Complex64, f64) {
    let shifted = GridFunction {
        grid: g.grid.clone(),
        values: g.values.iter().zip(g.points()).map(|(v, &t)| v - f1.eval(t) * t).collect(),
    };
    fit_linear(&shifted)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneousProbe {
    #[serde(serialize_with = "complex")]
    pub a_fit: Complex64,
    pub deviation: f64,
    pub residual: f64,
}

/// Relative residual accepted as a solution of `G - int_0^x G/t = 0`.
pub const HOMOGENEOUS_TOLERANCE: f64 = 1e-6;

/// Fits `g = A x` after checking that `g` solves the homogeneous equation.
/// A small deviation is numerical evidence that the only such solutions are
/// the lines through the origin.
pub fn homogeneous_probe(g: &GridFunction) -> Result<HomogeneousProbe> {
    let report = residual(g, |_| Complex64::new(0.0, 0.0))?;
    let scale = g.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if report.sup > HOMOGENEOUS_TOLERANCE * scale {
        return Err(Error::NotHomogeneous(report.sup));
    }
    let (a_fit, deviation) = fit_linear(g);
    Ok(HomogeneousProbe { a_fit, deviation, residual: report.sup })
}

#[cfg(test)]
mod tests;
