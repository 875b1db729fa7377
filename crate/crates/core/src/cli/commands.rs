use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{Anchor, Command, Mode, Outcome, RunConfig, VolterraTask, CACHE_ENV};
use crate::coeffs::{growth_scan, load_table_csv, series_identity_check, write_table_csv, Tables};
use crate::decomp::{decompose_batch, reduced_identity, Verdict};
use crate::error::{Error, Result};
use crate::numeric::{format_complex, format_f64, Abscissa, Scalar, ValueWithBound};
use crate::products::{l_value, Constants};
use crate::report::{Meta, Report};
use crate::volterra::{
    fit_family, homogeneous_probe, residual, solve_from_e2, E2Eval, F1Eval, Grid, SolutionFamily,
};

/// Dispatches on the numeric mode and runs the configured subcommand.
pub fn run_command(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.mode {
        Mode::Exact => {
            if !cfg.spec.is_exact() {
                return Err(Error::ModeUnavailable(format!(
                    "exact mode needs rational roots; {} product has complex ones",
                    cfg.spec.kind_name()
                )));
            }
            run_typed::<BigRational>(cfg)
        }
        Mode::Float => {
            if cfg.command == Command::VerifyIdentity {
                return Err(Error::ModeUnavailable("verify-identity runs in exact mode only".into()));
            }
            run_typed::<Complex64>(cfg)
        }
    }
}

fn meta<T: Scalar>(cfg: &RunConfig) -> Meta {
    Meta {
        spec_hash: cfg.spec.spec_hash(),
        version: env!("CARGO_PKG_VERSION").into(),
        mode: mode_name::<T>().into(),
        command: cfg.command.name().into(),
    }
}

fn mode_name<T: Scalar>() -> &'static str {
    if T::EXACT {
        "exact"
    } else {
        "float"
    }
}

fn run_typed<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Constants => constants::<T>(cfg),
        Command::Table => table::<T>(cfg),
        Command::ErrorTerm => error_term::<T>(cfg),
        Command::Decompose => decompose::<T>(cfg),
        Command::VerifyIdentity => verify_identity::<T>(cfg),
        Command::Volterra => volterra::<T>(cfg),
        Command::Growth => growth::<T>(cfg),
        Command::SeriesCheck => series_check::<T>(cfg),
    }
}

fn require_xs(cfg: &RunConfig) -> Result<&[Abscissa]> {
    if cfg.xs.is_empty() {
        return Err(Error::Usage(format!("{} needs --x", cfg.command.name())));
    }
    Ok(&cfg.xs)
}

/// `--n` when given, else the smallest table covering `upto`.
fn table_size(cfg: &RunConfig, upto: f64) -> Result<usize> {
    let need = upto.ceil().max(1.0) as usize;
    match cfg.n {
        Some(n) if (n as f64) < upto => Err(Error::Usage(format!("--n {n} is below the largest requested x = {upto}"))),
        Some(n) => Ok(n),
        None => Ok(need),
    }
}

fn constants_for(cfg: &RunConfig) -> Result<Constants> {
    Constants::compute(&cfg.spec, cfg.prime_cutoff, cfg.a1_cutoff)
}

/// Builds the tables, going through the on-disk cache when `ASSOC_TOTIENT_CACHE`
/// names a directory. A stale or foreign file is rebuilt and replaced.
pub fn load_tables<T: Scalar>(cfg: &RunConfig, n: usize) -> Result<Tables<T>> {
    let Some(dir) = std::env::var_os(CACHE_ENV) else {
        return Tables::build(&cfg.spec, n);
    };
    let dir = PathBuf::from(dir);
    let path = dir.join(format!("table-{}-N{n}-{}.csv", cfg.spec.spec_hash(), mode_name::<T>()));
    if let Ok(file) = fs::File::open(&path) {
        if let Some(tables) = load_table_csv::<T, _>(&cfg.spec, n, BufReader::new(file))? {
            return Ok(tables);
        }
    }
    let tables = Tables::build(&cfg.spec, n)?;
    fs::create_dir_all(&dir)?;
    // write then rename so readers never see a partial file
    let tmp = dir.join(format!(".{}.{}", path.file_name().and_then(|s| s.to_str()).unwrap_or("table"), std::process::id()));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        write_table_csv(&tables, &mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(tables)
}

fn vwb_row(name: &str, v: &ValueWithBound) -> Vec<String> {
    let kind = serde_json::to_value(v.kind).ok().and_then(|k| k.as_str().map(String::from)).unwrap_or_default();
    vec![name.into(), format_complex(v.value), format_f64(v.bound), kind]
}

fn constants<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let k = constants_for(cfg)?;
    let mut report = Report::new(meta::<T>(cfg), &["name", "value", "bound", "kind"]);
    report.push(vwb_row("C_F", &k.c));
    report.push(vwb_row("A1", &k.a1));
    report.push(vwb_row("A2", &k.a2()));
    if let Some(chi) = cfg.spec.character() {
        for s in [1.0, 2.0] {
            match l_value(chi, s, 1e-12) {
                Ok(l) => report.push(vwb_row(&format!("L({s})"), &l)),
                Err(Error::PrincipalCharacter | Error::PrecisionUnreachable { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    report.note("C_F", format_complex(k.c.value));
    report.note("A1", format_complex(k.a1.value));
    report.note("prime_cutoff", cfg.prime_cutoff);
    Ok(Outcome { report, passed: true })
}

fn table<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let n = cfg.n.ok_or_else(|| Error::Usage("table needs --n".into()))?;
    let tables = load_tables::<T>(cfg, n)?;
    let mut report = Report::new(meta::<T>(cfg), &["n", "alpha", "phi", "cumulative"]);
    let cum = tables.totient().cumulative();
    for i in 1..=n {
        report.push(vec![
            i.to_string(),
            tables.coeffs().alpha(i).render(),
            tables.totient().phi(i).render(),
            cum[i].render(),
        ]);
    }
    Ok(Outcome { report, passed: true })
}

fn max_x(xs: &[Abscissa]) -> f64 {
    xs.iter().map(Abscissa::to_f64).fold(0.0, f64::max)
}

fn error_term<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let xs = require_xs(cfg)?;
    let tables = load_tables::<T>(cfg, table_size(cfg, max_x(xs))?)?;
    let k = constants_for(cfg)?;
    let mut report = Report::new(meta::<T>(cfg), &["x", "E", "bound", "kind"]);
    for x in xs {
        let v = tables.error_term(&k.c, x, cfg.convention)?;
        let mut row = vwb_row(&x.to_string(), &v);
        row.truncate(4);
        report.push(row);
    }
    report.note("convention", cfg.convention);
    Ok(Outcome { report, passed: true })
}

fn decompose<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let xs = require_xs(cfg)?;
    let tables = load_tables::<T>(cfg, table_size(cfg, max_x(xs))?)?;
    let k = constants_for(cfg)?;
    let view = tables.view();
    let mut report =
        Report::new(meta::<T>(cfg), &["x", "E2", "x_f1", "half_g1", "residual", "residual_bound", "exact_verdict"]);
    let mut passed = true;
    let mut worst = 0.0f64;
    for r in decompose_batch(&view, &k, xs) {
        let r = r?;
        passed &= r.within_bound() && r.exact_verdict != Verdict::Fail;
        worst = worst.max(r.residual.norm());
        report.push(vec![
            r.x.to_string(),
            format_complex(r.e2.value),
            format_complex(r.arithmetic_part.value),
            format_complex(r.analytic_part.value),
            format_complex(r.residual),
            format_f64(r.residual_bound),
            r.exact_verdict.as_str().into(),
        ]);
    }
    report.note("max_residual", format_f64(worst));
    report.note("passed", passed);
    Ok(Outcome { report, passed })
}

fn verify_identity<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let xs = require_xs(cfg)?;
    let tables = load_tables::<T>(cfg, table_size(cfg, max_x(xs))?)?;
    let view = tables.view();
    let mut report = Report::new(meta::<T>(cfg), &["x", "lhs", "rhs", "holds"]);
    let mut failures = 0usize;
    for x in xs {
        let id = reduced_identity(&view, x)?;
        let holds = id.holds();
        failures += usize::from(!holds);
        report.push(vec![x.to_string(), id.lhs.render(), id.rhs.render(), holds.to_string()]);
    }
    report.note("checked", xs.len());
    report.note("failures", failures);
    Ok(Outcome { report, passed: failures == 0 })
}

fn volterra<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let x_end = cfg.x_max.ok_or_else(|| Error::Usage("volterra needs --X".into()))?;
    let grid = Grid::new(x_end, cfg.h)?;
    let mut report = Report::new(meta::<T>(cfg), &["x", "F1", "E2", "residual"]);
    report.note("X", format_f64(x_end));
    report.note("h", format_f64(grid.h()));
    if cfg.task == VolterraTask::Probe {
        let (x0, v) = match cfg.anchor {
            Anchor::Auto(x0) => (x0, Complex64::new(x0, 0.0)),
            Anchor::Value(x0, v) => (x0, v),
        };
        let g = solve_from_e2(|_| Complex64::new(0.0, 0.0), x_end, cfg.h, (x0, v))?;
        let p = homogeneous_probe(&g)?;
        for (t, v) in g.points().iter().zip(g.values()) {
            report.push(vec![format_f64(*t), format_complex(*v), "0".into(), format_complex(*v - p.a_fit * *t)]);
        }
        report.note("A_fit", format_complex(p.a_fit));
        report.note("deviation", format_f64(p.deviation));
        report.note("residual", format_f64(p.residual));
        return Ok(Outcome { report, passed: true });
    }

    let tables = load_tables::<T>(cfg, table_size(cfg, x_end)?)?;
    let k = constants_for(cfg)?;
    let f1 = F1Eval::new(&tables, &k);
    let e2 = E2Eval::new(&tables, &k);
    let candidate = match cfg.task {
        VolterraTask::Residual => SolutionFamily { f1: &f1, a: cfg.a }.sample(&grid),
        _ => {
            let anchor = match cfg.anchor {
                Anchor::Auto(x0) => {
                    if !(x0 > 0.0 && x0 <= x_end) {
                        return Err(Error::AnchorOutOfRange(x0));
                    }
                    (x0, SolutionFamily { f1: &f1, a: cfg.a }.member(x0))
                }
                Anchor::Value(x0, v) => (x0, v),
            };
            let sol = solve_from_e2(|x| e2.eval(x), x_end, cfg.h, anchor)?;
            let (a, dev) = fit_family(&sol, &f1);
            report.note("A_fit", format_complex(a));
            report.note("family_deviation", format_f64(dev));
            sol
        }
    };
    let r = residual(&candidate, |x| e2.eval(x))?;
    for row in &r.rows {
        report.push(vec![format_f64(row.x), format_complex(row.f1), format_complex(row.e2), format_complex(row.residual)]);
    }
    let passed = r.sup <= cfg.tolerance;
    report.note("A", format_complex(cfg.a));
    report.note("sup", format_f64(r.sup));
    report.note("argmax", format_f64(r.argmax));
    report.note("tolerance", format_f64(cfg.tolerance));
    report.note("passed", passed);
    Ok(Outcome { report, passed })
}

fn growth<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let x_end = cfg.x_max.ok_or_else(|| Error::Usage("growth needs --X".into()))?;
    if !(x_end >= 1.0) {
        return Err(Error::Usage("--X must be at least 1".into()));
    }
    let x_end = x_end.floor() as u64;
    let tables = load_tables::<T>(cfg, table_size(cfg, x_end as f64)?)?;
    let k = constants_for(cfg)?;
    let g = growth_scan(&tables, &k.c, x_end, cfg.samples)?;
    let mut report = Report::new(meta::<T>(cfg), &["x", "E", "ratio"]);
    for row in &g.rows {
        report.push(vec![row.x.to_string(), format_f64(row.error), format_f64(row.ratio)]);
    }
    report.note("degree", g.degree);
    report.note("sup", format_f64(g.sup));
    report.note("argmax", g.argmax);
    report.note("left_limit", g.left_limit);
    Ok(Outcome { report, passed: true })
}

fn series_check<T: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let n = cfg.n.unwrap_or(1_000_000);
    let r = series_identity_check(&cfg.spec, cfg.s, n)?;
    let mut report = Report::new(meta::<T>(cfg), &["name", "value", "bound", "kind"]);
    report.push(vwb_row("lhs", &r.lhs));
    report.push(vwb_row("rhs", &r.rhs));
    report.push(vwb_row("zeta(s-1)", &r.zeta_shifted));
    report.note("s", format_f64(r.s));
    report.note("N", r.n);
    report.note("difference", format_f64(r.difference));
    report.note("combined_bound", format_f64(r.combined_bound));
    report.note("within_bound", r.within_bound);
    Ok(Outcome { report, passed: r.within_bound })
}
