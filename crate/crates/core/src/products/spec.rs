use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::character::{build_character, CharacterSource, CharacterSpec};
use crate::error::{Error, Result};
use crate::primes::is_prime;

const ROOT_TOL: f64 = 1e-12;

/// How primes missing from a custom root table are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefaultRule {
    /// `alpha_j(p) = 0` for all j.
    Zero,
    /// `alpha_j(p) = 1` for all j.
    One,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CustomProduct {
    degree: usize,
    roots: BTreeMap<u64, Vec<Complex64>>,
    default: DefaultRule,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProductKind {
    Zeta,
    Dirichlet(CharacterSpec),
    Custom(CustomProduct),
}

/// Local data `{alpha_j(p)}` of a polynomial Euler product
/// `F(s) = prod_p prod_j (1 - alpha_j(p) p^{-s})^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerProductSpec {
    kind: ProductKind,
    source: ProductFile,
}

impl EulerProductSpec {
    pub fn zeta() -> Self {
        Self { kind: ProductKind::Zeta, source: ProductFile::Zeta {} }
    }

    pub fn dirichlet(chi: CharacterSpec) -> Self {
        let source = ProductFile::Dirichlet {
            modulus: Some(chi.modulus()),
            values: Some(chi.values().iter().map(|&z| ComplexRepr::from(z)).collect()),
            kronecker: None,
        };
        Self { kind: ProductKind::Dirichlet(chi), source }
    }

    /// The real character `(D|.)` of modulus `|D|`.
    pub fn kronecker(d: i64) -> Result<Self> {
        let chi = build_character(d.unsigned_abs(), CharacterSource::Kronecker(d))?;
        Ok(Self {
            kind: ProductKind::Dirichlet(chi),
            source: ProductFile::Dirichlet { modulus: None, values: None, kronecker: Some(d) },
        })
    }

    pub fn custom(degree: usize, roots: BTreeMap<u64, Vec<Complex64>>, default: DefaultRule) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidSpec("degree must be positive".into()));
        }
        for (&p, row) in &roots {
            if !is_prime(p) {
                return Err(Error::InvalidSpec(format!("root table key {p} is not prime")));
            }
            if row.len() != degree {
                return Err(Error::InvalidSpec(format!("p = {p}: expected {degree} roots, got {}", row.len())));
            }
            if let Some(z) = row.iter().find(|z| !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + ROOT_TOL) {
                return Err(Error::InvalidSpec(format!("p = {p}: root {z} has modulus above 1")));
            }
        }
        let minimal = default == DefaultRule::One || roots.values().any(|row| row.iter().all(|z| *z != Complex64::zero()));
        if !minimal {
            return Err(Error::InvalidSpec(format!(
                "degree {degree} is not minimal: no prime has all roots nonzero"
            )));
        }
        let source = ProductFile::Custom {
            degree,
            roots: roots
                .iter()
                .map(|(p, row)| (p.to_string(), row.iter().map(|&z| [z.re, z.im]).collect()))
                .collect(),
            default,
        };
        Ok(Self { kind: ProductKind::Custom(CustomProduct { degree, roots, default }), source })
    }

    pub fn kind(&self) -> &ProductKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ProductKind::Zeta => "zeta",
            ProductKind::Dirichlet(_) => "dirichlet",
            ProductKind::Custom(_) => "custom",
        }
    }

    pub fn character(&self) -> Option<&CharacterSpec> {
        match &self.kind {
            ProductKind::Dirichlet(chi) => Some(chi),
            _ => None,
        }
    }

    /// Euler degree `d`.
    pub fn degree(&self) -> usize {
        match &self.kind {
            ProductKind::Zeta | ProductKind::Dirichlet(_) => 1,
            ProductKind::Custom(c) => c.degree,
        }
    }

    /// Crude bound `|gamma(p)| <= d 2^{d-1}` valid for every prime.
    pub fn gamma_bound(&self) -> f64 {
        let d = self.degree() as i32;
        d as f64 * 2f64.powi(d - 1)
    }

    /// The primes outside of which `gamma(p)` vanishes, when that set is finite.
    pub fn finite_support(&self) -> Option<Vec<u64>> {
        match &self.kind {
            ProductKind::Custom(c) if c.default == DefaultRule::Zero => Some(c.roots.keys().copied().collect()),
            _ => None,
        }
    }

    /// Whether every `gamma(p)` is rational, so tables can be built exactly.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            ProductKind::Zeta => true,
            ProductKind::Dirichlet(chi) => chi.is_real(),
            ProductKind::Custom(c) => c.roots.values().flatten().all(|z| z.im == 0.0),
        }
    }

    /// The inverse roots `alpha_1(p), ..., alpha_d(p)`.
    pub fn roots(&self, p: u64) -> Vec<Complex64> {
        match &self.kind {
            ProductKind::Zeta => vec![Complex64::one()],
            ProductKind::Dirichlet(chi) => vec![chi.value(p)],
            ProductKind::Custom(c) => match c.roots.get(&p) {
                Some(row) => row.clone(),
                None => {
                    let v = match c.default {
                        DefaultRule::Zero => Complex64::zero(),
                        DefaultRule::One => Complex64::one(),
                    };
                    vec![v; c.degree]
                }
            },
        }
    }

    /// `F_p(1) = prod_j (1 - alpha_j(p)/p)^{-1}`.
    pub fn local_factor_at_one(&self, p: u64) -> Result<Complex64> {
        check_prime(p)?;
        let inv: Complex64 = self.roots(p).iter().map(|a| 1.0 - a / p as f64).product();
        Ok(inv.inv())
    }

    /// `gamma(p) = p (1 - 1/F_p(1))`.
    pub fn gamma(&self, p: u64) -> Result<Complex64> {
        check_prime(p)?;
        let pf = p as f64;
        let inv: Complex64 = self.roots(p).iter().map(|a| 1.0 - a / pf).product();
        Ok(pf * (1.0 - inv))
    }

    /// `prod_j (1 - alpha_j(p)/p)` as an exact rational.
    pub fn inverse_local_factor_exact(&self, p: u64) -> Result<BigRational> {
        check_prime(p)?;
        let pr = BigRational::from_integer(BigInt::from(p));
        self.exact_roots(p)?
            .into_iter()
            .try_fold(BigRational::one(), |acc, a| Ok(acc * (BigRational::one() - a / &pr)))
    }

    pub fn gamma_exact(&self, p: u64) -> Result<BigRational> {
        let inv = self.inverse_local_factor_exact(p)?;
        Ok(BigRational::from_integer(BigInt::from(p)) * (BigRational::one() - inv))
    }

    fn exact_roots(&self, p: u64) -> Result<Vec<BigRational>> {
        if !self.is_exact() {
            return Err(Error::ModeUnavailable(format!(
                "{} product has non-real local roots; exact mode needs rational gamma(p)",
                self.kind_name()
            )));
        }
        self.roots(p)
            .iter()
            .map(|z| {
                BigRational::from_float(z.re)
                    .ok_or_else(|| Error::InvalidSpec(format!("root {z} is not finite")))
            })
            .collect()
    }

    pub fn to_file(&self) -> &ProductFile {
        &self.source
    }

    /// Hex SHA-256 of the canonical JSON form; keys table caches and reports.
    pub fn spec_hash(&self) -> String {
        let json = serde_json::to_string(&self.source).expect("product file serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProductFile = serde_json::from_str(text)?;
        file.into_spec()
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// A complex number on the wire: `[re, im]`, or a bare real.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        ComplexRepr::Pair([z.re, z.im])
    }
}

impl From<ComplexRepr> for Complex64 {
    fn from(c: ComplexRepr) -> Self {
        match c {
            ComplexRepr::Real(re) => Complex64::new(re, 0.0),
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// JSON form of a product specification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProductFile {
    Zeta {},
    Dirichlet {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        values: Option<Vec<ComplexRepr>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kronecker: Option<i64>,
    },
    Custom {
        degree: usize,
        roots: BTreeMap<String, Vec<[f64; 2]>>,
        default: DefaultRule,
    },
}

impl ProductFile {
    pub fn into_spec(self) -> Result<EulerProductSpec> {
        match self {
            ProductFile::Zeta {} => Ok(EulerProductSpec::zeta()),
            ProductFile::Dirichlet { modulus, values, kronecker } => match (kronecker, values) {
                (Some(d), None) => {
                    if let Some(q) = modulus {
                        if q != d.unsigned_abs() {
                            return Err(Error::BadModulus(format!("modulus {q} != |{d}|")));
                        }
                    }
                    EulerProductSpec::kronecker(d)
                }
                (None, Some(values)) => {
                    let q = modulus.unwrap_or(values.len() as u64);
                    let values = values.into_iter().map(Complex64::from).collect();
                    let chi = build_character(q, CharacterSource::Explicit(values))?;
                    Ok(EulerProductSpec::dirichlet(chi))
                }
                _ => Err(Error::InvalidSpec("dirichlet needs exactly one of 'values' or 'kronecker'".into())),
            },
            ProductFile::Custom { degree, roots, default } => {
                let mut table = BTreeMap::new();
                for (key, row) in roots {
                    let p: u64 = key
                        .parse()
                        .map_err(|_| Error::InvalidSpec(format!("root table key '{key}' is not an integer")))?;
                    table.insert(p, row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect());
                }
                EulerProductSpec::custom(degree, table, default)
            }
        }
    }
}
