//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use assoc_totient::coeffs::{phi_by_convolution, phi_direct, scan_range, series_identity_check, Tables};
use assoc_totient::decomp::{f1_closed, f1_one_sided, g1, r_function, reduced_identity, Route};
use assoc_totient::primes::primes_up_to;
use assoc_totient::products::{c_constant, DefaultRule};
use assoc_totient::volterra::{fit_family, residual, solve_from_e2, E2Eval, F1Eval, Grid, SolutionFamily};
use assoc_totient::{Abscissa, Constants, EulerProductSpec};
use num_complex::Complex64;
use num_rational::BigRational;

const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn zeta() -> EulerProductSpec {
    EulerProductSpec::zeta()
}

fn chi4() -> EulerProductSpec {
    EulerProductSpec::kronecker(-4).unwrap()
}

fn chi4_value(n: u64) -> i64 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Möbius by a linear sieve, independent of the library's tables.
fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    mu[0] = 0;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            if i * p > n {
                break;
            }
            composite[i * p] = true;
            if i % p == 0 {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = -mu[i];
        }
    }
    mu
}

/// `n prod_{p|n} (1 - chi(p)/p)` by trial division.
fn twisted_phi(n: u64, chi: impl Fn(u64) -> i64) -> f64 {
    let (mut m, mut out, mut p) = (n, n as f64, 2u64);
    while p * p <= m {
        if m % p == 0 {
            out *= 1.0 - chi(p) as f64 / p as f64;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out *= 1.0 - chi(m) as f64 / m as f64;
    }
    out
}

/// Euler-Maclaurin zeta for real `s > 1`, with six Bernoulli corrections.
fn em_zeta(s: f64) -> f64 {
    const B: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let n = 20.0f64;
    let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in B.iter().enumerate() {
        let j = 2 * (k + 1);
        sum += b / fact * rising * n.powf(-s - j as f64 + 1.0);
        rising *= (s + j as f64 - 1.0) * (s + j as f64);
        fact *= ((j + 1) * (j + 2)) as f64;
    }
    sum
}

fn consts(spec: &EulerProductSpec) -> Constants {
    Constants::compute(spec, 1_000_000, 1_000_000).unwrap()
}

// 1: exact reduced identity on the half-integer grid, and the reduction
// against truncated brute-force series
fn exact_decomposition() -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    for spec in [zeta(), chi4()] {
        let t = Tables::<BigRational>::build(&spec, 500).unwrap();
        let view = t.view();
        for twice in 2..=1000i128 {
            let x = Abscissa::new(twice, 2).unwrap();
            if !reduced_identity(&view, &x).unwrap().holds() {
                failures.push(format!("{}@{x}", spec.kind_name()));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();

    let m = 1_000_000usize;
    let mu = mobius_sieve(m);
    let mut worst = 0.0f64;
    let mut brute_ok = true;
    for (spec, chi, a1, c) in [
        (zeta(), (|_| 1) as fn(u64) -> i64, 0.0, 3.0 / (PI * PI)),
        (chi4(), chi4_value as fn(u64) -> i64, 4.0 / PI, 1.0 / (2.0 * CATALAN)),
    ] {
        let t = Tables::<Complex64>::build(&spec, 16).unwrap();
        let k = consts(&spec);
        for xs in ["2.5", "7.5", "10"] {
            let xa = Abscissa::parse(xs).unwrap();
            let x = xa.to_f64();
            let (mut f, mut g, mut p1) = (0.0, 0.0, 0.0);
            for n in 1..=m {
                let a = mu[n] as i64 * chi(n as u64);
                if a == 0 {
                    continue;
                }
                let a = a as f64;
                let y = x / n as f64;
                let fr = y.fract();
                let saw = if fr == 0.0 { 0.0 } else { 0.5 - fr };
                f += a / n as f64 * saw;
                g += a * fr * (fr - 1.0);
                p1 += a / n as f64;
            }
            // tails n > M: s(x/n) = 1/2 - x/n and {x/n} = x/n, with
            // |sum_{n>M} alpha(n)/n^2| <= 1/M
            let tail_f = 0.5 * (a1 - p1).abs() + x / m as f64;
            let tail_g = x * (a1 - p1).abs() + x * x / m as f64;
            let slack = 1e-9;
            let fc = f1_closed(&t.float_view(), &xa).unwrap().eval(&k);
            let gc = g1(&t.float_view(), &xa).unwrap().eval(&k);
            let e2_indep = {
                let whole = x.floor() as u64;
                let mut s: f64 = (1..=whole).map(|n| twisted_phi(n, chi)).sum();
                if x.fract() == 0.0 {
                    s -= 0.5 * twisted_phi(whole, chi);
                }
                s - c * x * x
            };
            let d_f = (f - fc.value.re).abs();
            let d_g = (g - gc.value.re).abs();
            let d_e = (e2_indep - (x * f + 0.5 * g)).abs();
            let ok = d_f <= tail_f + fc.bound + slack
                && d_g <= tail_g + gc.bound + slack
                && d_e <= x * tail_f + 0.5 * tail_g + slack;
            brute_ok &= ok;
            worst = worst.max(d_e);
        }
    }
    let pass = failures.is_empty() && brute_ok && elapsed < 10.0;
    outcome(
        pass,
        format!(
            "1998 exact checks, {} failures, {elapsed:.2}s (target < 10s); brute-force M=1e6 {} (max |E2 - x f1 - g1/2| = {worst:.2e})",
            failures.len(),
            if brute_ok { "within tail bounds" } else { "OUTSIDE tail bounds" }
        ),
    )
}

// 2: phi from the product formula against the sieve table and the
// convolution phi = id * alpha
fn dual_path() -> Outcome {
    let n = 10_000usize;
    let roots: BTreeMap<u64, Vec<Complex64>> =
        primes_up_to(100).into_iter().map(|p| (p, vec![Complex64::new(1.0, 0.0); 2])).collect();
    let custom = EulerProductSpec::custom(2, roots, DefaultRule::Zero).unwrap();
    let mut mismatches = 0usize;
    for spec in [zeta(), chi4(), custom] {
        let t = Tables::<BigRational>::build(&spec, n).unwrap();
        let conv = phi_by_convolution(t.coeffs());
        for i in 1..=n {
            let direct: BigRational = phi_direct(&spec, i as u64).unwrap();
            if &direct != t.totient().phi(i) || direct != conv[i] {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("n <= {n} on zeta, chi_4, custom degree 2: {mismatches} mismatches"))
}

// 3: alpha(n) = mu(n) chi(n) for the mod-4 character
fn specialization() -> Outcome {
    let n = 10_000usize;
    let mu = mobius_sieve(n);
    let t = Tables::<BigRational>::build(&chi4(), n).unwrap();
    let bad = (1..=n)
        .filter(|&i| *t.coeffs().alpha(i) != BigRational::from_integer((mu[i] as i64 * chi4_value(i as u64)).into()))
        .count();
    outcome(bad == 0, format!("n <= {n}: {bad} mismatches"))
}

// 4: one-sided limits at integers and the slope -2C between them
fn one_sided() -> Outcome {
    let mut inconsistent = 0usize;
    let mut slope_bad = 0usize;
    let delta = Abscissa::new(1, 1_000_000).unwrap();
    for spec in [zeta(), chi4()] {
        let t = Tables::<BigRational>::build(&spec, 201).unwrap();
        let k = consts(&spec);
        let view = t.view();
        for big_n in 1..=200u64 {
            let o = f1_one_sided(&view, big_n).unwrap();
            inconsistent += usize::from(!o.consistent);
            let n_ab = Abscissa::integer(big_n);
            let above = Abscissa::new(n_ab.numer() * 1_000_000 + 1, 1_000_000).unwrap();
            let below = Abscissa::new(n_ab.numer() * 1_000_000 - 1, 1_000_000).unwrap();
            for (x, limit) in [(above, &o.right), (below, &o.left)] {
                let d = (f1_closed(&view, &x).unwrap() - limit.clone()).eval(&k);
                let allowed = 2.0 * k.c.value.norm() * delta.to_f64() + d.bound;
                slope_bad += usize::from(d.value.norm() > allowed);
            }
        }
    }
    outcome(
        inconsistent == 0 && slope_bad == 0,
        format!("N <= 200 on zeta, chi_4: {inconsistent} half-sum mismatches, {slope_bad} slope violations at delta=1e-6"),
    )
}

// 5: the three routes to R(x)
fn routes() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for spec in [zeta(), chi4()] {
        let t = Tables::<Complex64>::build(&spec, 101).unwrap();
        let k = consts(&spec);
        let view = t.float_view();
        for xs in ["2.5", "7.25", "19.5", "100.5"] {
            let x = Abscissa::parse(xs).unwrap();
            let def = r_function(&view, &x, Route::Definition).unwrap();
            for other in [Route::Integral, Route::Closed] {
                let o = r_function(&view, &x, other).unwrap();
                let (a, b) = (def.eval(&k), o.eval(&k));
                let gap = (a.value - b.value).norm();
                ok &= gap <= a.bound + b.bound && gap <= 1e-9;
                worst = worst.max(gap);
            }
        }
    }
    outcome(ok, format!("max route gap {worst:.2e} (target <= 1e-9, prime cutoff 1e6)"))
}

// 6: residual of the family member and invariance in A
fn volterra_residual() -> Outcome {
    let started = Instant::now();
    let tol = 1e-5;
    let mut sups = Vec::new();
    let mut drift = 0.0f64;
    for spec in [zeta(), chi4()] {
        let t = Tables::<Complex64>::build(&spec, 21).unwrap();
        let k = consts(&spec);
        let f1 = F1Eval::new(&t, &k);
        let e2 = E2Eval::new(&t, &k);
        let grid = Grid::new(20.0, 1e-3).unwrap();
        let r0 = residual(&SolutionFamily { f1: &f1, a: Complex64::new(0.0, 0.0) }.sample(&grid), |x| e2.eval(x)).unwrap();
        let r1 = residual(&SolutionFamily { f1: &f1, a: Complex64::new(1.0, 0.0) }.sample(&grid), |x| e2.eval(x)).unwrap();
        sups.push(r0.sup);
        let d = r0.rows.iter().zip(&r1.rows).map(|(a, b)| (a.residual - b.residual).norm()).fold(0.0, f64::max);
        drift = drift.max(d);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = sups.iter().all(|&s| s <= tol) && drift <= 2.0 * tol && elapsed < 60.0;
    outcome(
        pass,
        format!(
            "sup residual zeta {:.2e}, chi_4 {:.2e} (<= 1e-5); |r(A=1) - r(A=0)| <= {drift:.2e}; {elapsed:.2}s",
            sups[0], sups[1]
        ),
    )
}

// 7: recovering the family from E_2 alone
fn solver() -> Outcome {
    let mut worst = 0.0f64;
    let mut ratios = Vec::new();
    for spec in [zeta(), chi4()] {
        let t = Tables::<Complex64>::build(&spec, 21).unwrap();
        let k = consts(&spec);
        let f1 = F1Eval::new(&t, &k);
        let e2 = E2Eval::new(&t, &k);
        for a in [0.0, 1.0] {
            let fam = SolutionFamily { f1: &f1, a: Complex64::new(a, 0.0) };
            let x0 = 1.5;
            let sol = solve_from_e2(|x| e2.eval(x), 20.0, 1e-3, (x0, fam.member(x0))).unwrap();
            let (a_fit, _) = fit_family(&sol, &f1);
            let err = sol
                .points()
                .iter()
                .zip(sol.values())
                .filter(|(t, _)| **t >= 0.5)
                .map(|(&t, v)| (v - fam.member(t)).norm())
                .fold(0.0, f64::max);
            worst = worst.max(err).max((a_fit - fam.a).norm());
        }
        let sup = |h: f64| {
            let g = SolutionFamily { f1: &f1, a: Complex64::new(0.0, 0.0) }.sample(&Grid::new(20.0, h).unwrap());
            residual(&g, |x| e2.eval(x)).unwrap().sup
        };
        ratios.push(sup(1e-2) / sup(5e-3));
    }
    let pass = worst <= 1e-4 && ratios.iter().all(|&r| r >= 1.8);
    outcome(
        pass,
        format!("sup error on [0.5, 20] {worst:.2e} (<= 1e-4); halving ratios zeta {:.2}, chi_4 {:.2} (>= 1.8)", ratios[0], ratios[1]),
    )
}

// 8: Dirichlet series identity at s = 3
fn series() -> Outcome {
    let r = series_identity_check(&zeta(), 3.0, 1_000_000).unwrap();
    let oracle = em_zeta(2.0) / em_zeta(3.0);
    let lhs_gap = (r.lhs.value.re - oracle).abs();
    let rhs_gap = (r.rhs.value.re - oracle).abs();
    let pass = r.difference <= 1e-6
        && lhs_gap <= r.lhs.bound + 1e-12
        && rhs_gap <= r.rhs.bound + 1e-12
        && (oracle - 1.368432).abs() < 1e-6;
    outcome(
        pass,
        format!(
            "|lhs - rhs| = {:.2e}; against zeta(2)/zeta(3) = {oracle:.9}: lhs {lhs_gap:.2e} (bound {:.2e}), rhs {rhs_gap:.2e} (bound {:.2e})",
            r.difference, r.lhs.bound, r.rhs.bound
        ),
    )
}

// 9: no divergence in E(x) / (x log 2x)
fn growth() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in [zeta(), chi4()] {
        let t = Tables::<Complex64>::build(&spec, 100_000).unwrap();
        let k = consts(&spec);
        let low = scan_range(&t, &k.c, 1_000, 10_000, 10).unwrap();
        let high = scan_range(&t, &k.c, 10_000, 100_000, 10).unwrap();
        let ratio = high.sup / low.sup;
        ok &= ratio < 1.25 && high.degree == 1;
        parts.push(format!("{} sup[1e3,1e4] {:.4}, sup[1e4,1e5] {:.4}, ratio {ratio:.3}", spec.kind_name(), low.sup, high.sup));
    }
    outcome(ok, format!("{} (< 1.25)", parts.join("; ")))
}

// 10: C(F) against partial sums of alpha(n)/n^2 and the closed form for zeta
fn constants() -> Outcome {
    let m = 1_000_000usize;
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in [zeta(), chi4()] {
        let t = Tables::<Complex64>::build(&spec, m).unwrap();
        let c = c_constant(&spec, 1_000_000).unwrap();
        let p2 = t.coeffs().p2_f(m);
        // |sum_{n>M} alpha(n)/n^2| <= 1/M, plus rounding of the partial sum
        let bound = 2.0 * c.bound + 1.0 / m as f64 + m as f64 * f64::EPSILON;
        let gap = (2.0 * c.value - p2).norm();
        ok &= gap <= bound;
        parts.push(format!("{} |2C - P2| {gap:.2e} <= {bound:.2e}", spec.kind_name()));
    }
    let cz = c_constant(&zeta(), 10_000_000).unwrap();
    let gap = (cz.value.re - 3.0 / (PI * PI)).abs();
    ok &= gap <= 1e-8;
    parts.push(format!("|C(zeta) - 3/pi^2| {gap:.2e} at cutoff 1e7"));
    outcome(ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact decomposition", exact_decomposition),
        ("dual-path totient", dual_path),
        ("alpha = mu chi", specialization),
        ("one-sided limits", one_sided),
        ("route agreement", routes),
        ("volterra residual", volterra_residual),
        ("solver recovery", solver),
        ("series identity", series),
        ("growth stability", growth),
        ("constants", constants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
