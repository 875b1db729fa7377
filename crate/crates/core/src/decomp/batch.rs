use std::io::Write;

use rayon::prelude::*;

use super::{decompose, DecompositionReport};
use crate::coeffs::View;
use crate::error::Result;
use crate::numeric::{format_complex, Abscissa, Scalar};
use crate::products::Constants;

/// [`decompose`] over many abscissae in parallel; results keep input order.
pub fn decompose_batch<S: Scalar>(
    view: &View<'_, S>,
    consts: &Constants,
    xs: &[Abscissa],
) -> Vec<Result<DecompositionReport>> {
    xs.par_iter().map(|x| decompose(view, consts, x)).collect()
}

pub fn write_decomposition_csv<W: Write>(reports: &[DecompositionReport], mut out: W) -> Result<()> {
    writeln!(out, "x,E2,x_f1,half_g1,residual,exact_verdict")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.x,
            format_complex(r.e2.value),
            format_complex(r.arithmetic_part.value),
            format_complex(r.analytic_part.value),
            format_complex(r.residual),
            r.exact_verdict.as_str()
        )?;
    }
    Ok(())
}
