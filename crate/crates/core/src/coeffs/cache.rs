//! Versioned CSV form of a table: `n,alpha,phi,cumulative`.

use std::io::{BufRead, Write};

use super::Tables;
use crate::error::{Error, Result};
use crate::numeric::{Accumulator, Scalar};
use crate::products::EulerProductSpec;

pub const TABLE_FORMAT_VERSION: u32 = 1;

fn mode_name<T: Scalar>() -> &'static str {
    if T::EXACT {
        "exact"
    } else {
        "float"
    }
}

fn header<T: Scalar>(spec: &EulerProductSpec, n_max: usize) -> String {
    format!(
        "# assoc-totient table v{TABLE_FORMAT_VERSION} spec_hash={} N={n_max} mode={}",
        spec.spec_hash(),
        mode_name::<T>()
    )
}

pub fn write_table_csv<T: Scalar, W: Write>(tables: &Tables<T>, mut out: W) -> Result<()> {
    writeln!(out, "{}", header::<T>(tables.spec(), tables.n_max()))?;
    writeln!(out, "n,alpha,phi,cumulative")?;
    let cum = tables.totient().cumulative();
    for n in 1..=tables.n_max() {
        writeln!(
            out,
            "{n},{},{},{}",
            tables.coeffs().alpha(n).render(),
            tables.totient().phi(n).render(),
            cum[n].render()
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a table written by [`write_table_csv`]. Returns `Ok(None)` when the
/// header belongs to a different product, size, mode or format version.
pub fn load_table_csv<T: Scalar, R: BufRead>(spec: &EulerProductSpec, n_max: usize, input: R) -> Result<Option<Tables<T>>> {
    let mut lines = input.lines();
    let first = match lines.next() {
        Some(l) => l?,
        None => return Err(Error::Cache("empty table file".into())),
    };
    if first != header::<T>(spec, n_max) {
        return Ok(None);
    }
    if lines.next().transpose()?.as_deref() != Some("n,alpha,phi,cumulative") {
        return Err(Error::Cache("missing column header".into()));
    }
    let mut alpha = Vec::with_capacity(n_max + 1);
    let mut phi = Vec::with_capacity(n_max + 1);
    alpha.push(T::zero());
    phi.push(T::zero());
    let mut running = T::Acc::default();
    let mut last_cumulative = String::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        let [n, a, p, c] = fields.as_slice() else {
            return Err(Error::Cache(format!("malformed row {}", i + 1)));
        };
        if n.parse::<usize>().ok() != Some(i + 1) {
            return Err(Error::Cache(format!("row {} out of order", i + 1)));
        }
        let p = T::parse_value(p)?;
        running.add(&p);
        alpha.push(T::parse_value(a)?);
        phi.push(p);
        last_cumulative = c.to_string();
    }
    if alpha.len() != n_max + 1 {
        return Err(Error::Cache(format!("expected {n_max} rows, found {}", alpha.len() - 1)));
    }
    let total = running.finish();
    let stored = T::parse_value(&last_cumulative)?;
    let tol = if T::EXACT { 0.0 } else { 1e-9 * total.abs_bound().max(1.0) };
    if (stored - total).abs_bound() > tol {
        return Err(Error::Cache("cumulative column inconsistent".into()));
    }
    let tables = Tables::from_parts(spec.clone(), alpha, phi);
    Ok(Some(tables))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn round_trip<T: Scalar>(spec: &EulerProductSpec, n: usize) {
        let t = Tables::<T>::build(spec, n).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&t, &mut buf).unwrap();
        let back = load_table_csv::<T, _>(spec, n, buf.as_slice()).unwrap().unwrap();
        assert_eq!(back.coeffs().alphas(), t.coeffs().alphas());
        assert_eq!(back.totient().phis(), t.totient().phis());
        let mut again = Vec::new();
        write_table_csv(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn exact_and_float_round_trip() {
        round_trip::<BigRational>(&EulerProductSpec::zeta(), 50);
        round_trip::<Complex64>(&EulerProductSpec::kronecker(-4).unwrap(), 50);
        round_trip::<Complex64>(&EulerProductSpec::kronecker(5).unwrap(), 50);
    }

    #[test]
    fn header_mismatch_is_a_miss() {
        let spec = EulerProductSpec::zeta();
        let t = Tables::<BigRational>::build(&spec, 10).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&t, &mut buf).unwrap();
        assert!(load_table_csv::<BigRational, _>(&spec, 11, buf.as_slice()).unwrap().is_none());
        assert!(load_table_csv::<Complex64, _>(&spec, 10, buf.as_slice()).unwrap().is_none());
        let other = EulerProductSpec::kronecker(-4).unwrap();
        assert!(load_table_csv::<BigRational, _>(&other, 10, buf.as_slice()).unwrap().is_none());
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let truncated = lines[..5].join("\n");
        assert!(load_table_csv::<BigRational, _>(&spec, 10, truncated.as_bytes()).is_err());
    }
}
