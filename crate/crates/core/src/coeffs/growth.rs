use num_complex::Complex64;
use serde::Serialize;

use super::Tables;
use crate::error::{Error, Result};
use crate::numeric::{Scalar, ValueWithBound};

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub x: u64,
    pub error: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub x_max: u64,
    pub degree: usize,
    pub sup: f64,
    pub argmax: u64,
    /// Whether the sup was attained as `x` tends to `argmax` from the left.
    pub left_limit: bool,
    pub rows: Vec<GrowthRow>,
}

/// `|E(x,F)| / (x (log 2x)^d)` over `1 <= x <= X`.
///
/// `E` is a step function minus `C x^2`, so on each `[k, k+1)` the ratio's
/// extremes sit at the endpoints: the sup is taken over `E(k)` and the left
/// limits `E(k-0)` for every integer `k <= X`. `samples` evenly spaced
/// integers are reported as rows.
pub fn growth_scan<T: Scalar>(tables: &Tables<T>, c: &ValueWithBound, x_max: u64, samples: usize) -> Result<GrowthReport> {
    let report = scan_range(tables, c, 1, x_max, samples)?;
    Ok(report)
}

/// The same scan restricted to `lo <= x <= hi`.
pub fn scan_range<T: Scalar>(
    tables: &Tables<T>,
    c: &ValueWithBound,
    lo: u64,
    hi: u64,
    samples: usize,
) -> Result<GrowthReport> {
    if lo < 1 || hi < lo {
        return Err(Error::InvalidArgument(format!("empty growth range [{lo}, {hi}]")));
    }
    if hi > tables.n_max() as u64 {
        return Err(Error::XBeyondTable { x: hi as f64, n: tables.n_max() as u64 });
    }
    let d = tables.spec().degree() as i32;
    let cum = tables.totient().cumulative_f();
    let cv = c.value;
    let norm = |x: f64| x * (2.0 * x).ln().powi(d);
    let e_at = |k: u64, left: bool| -> f64 {
        let idx = if left { k - 1 } else { k } as usize;
        let kf = k as f64;
        (cum[idx] - cv * kf * kf).norm()
    };
    let (mut sup, mut argmax, mut left_limit) = (0.0f64, lo, false);
    for k in lo..=hi {
        for left in [false, true] {
            // the left limit at lo lies outside [lo, hi]
            if left && k == lo && lo > 1 {
                continue;
            }
            let r = e_at(k, left) / norm(k as f64);
            if r > sup {
                (sup, argmax, left_limit) = (r, k, left);
            }
        }
    }
    let count = samples.clamp(1, (hi - lo + 1) as usize);
    let mut xs: Vec<u64> = (0..count)
        .map(|i| if count == 1 { hi } else { lo + ((hi - lo) as u128 * i as u128 / (count - 1) as u128) as u64 })
        .collect();
    xs.dedup();
    let rows = xs
        .into_iter()
        .map(|x| {
            let error = e_at(x, false);
            GrowthRow { x, error: signed_error(cum[x as usize], cv, x), ratio: error / norm(x as f64) }
        })
        .collect();
    Ok(GrowthReport { x_max: hi, degree: d as usize, sup, argmax, left_limit, rows })
}

fn signed_error(cum: Complex64, c: Complex64, x: u64) -> f64 {
    let xf = x as f64;
    (cum - c * xf * xf).re
}
