use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

/// A Dirichlet character given by its table of values on residues `0..q`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSpec {
    modulus: u64,
    values: Vec<Complex64>,
    is_real: bool,
    is_principal: bool,
}

/// Where the values of a character come from.
#[derive(Clone, Debug)]
pub enum CharacterSource {
    Explicit(Vec<Complex64>),
    /// The real character `n -> (D|n)` of modulus `|D|`.
    Kronecker(i64),
}

/// Builds and validates a character of modulus `q`.
pub fn build_character(q: u64, source: CharacterSource) -> Result<CharacterSpec> {
    if q == 0 {
        return Err(Error::BadModulus("modulus must be positive".into()));
    }
    let values = match source {
        CharacterSource::Explicit(v) => v,
        CharacterSource::Kronecker(d) => {
            if d == 0 || d.unsigned_abs() != q {
                return Err(Error::BadModulus(format!("Kronecker discriminant {d} does not have modulus {q}")));
            }
            if d.rem_euclid(4) > 1 {
                return Err(Error::BadModulus(format!("{d} is not a discriminant (must be 0 or 1 mod 4)")));
            }
            (0..q).map(|n| Complex64::new(kronecker(d, n) as f64, 0.0)).collect()
        }
    };
    CharacterSpec::from_values(q, values)
}

impl CharacterSpec {
    pub fn from_values(q: u64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() as u64 != q {
            return Err(Error::BadModulus(format!("expected {q} values, got {}", values.len())));
        }
        for (a, v) in values.iter().enumerate() {
            let a = a as u64;
            let coprime = a.gcd(&q) == 1;
            let norm = v.norm();
            if !coprime && norm > TOL {
                return Err(Error::WrongSupport { residue: a, modulus: q });
            }
            if coprime && (norm - 1.0).abs() > 1e-9 {
                return Err(if norm <= TOL {
                    Error::WrongSupport { residue: a, modulus: q }
                } else {
                    Error::InvalidCharacter(format!("|chi({a})| = {norm} is neither 0 nor 1"))
                });
            }
        }
        if (values[(1 % q) as usize] - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::InvalidCharacter("chi(1) != 1".into()));
        }
        for a in 0..q {
            for b in a..q {
                let lhs = values[((a * b) % q) as usize];
                let rhs = values[a as usize] * values[b as usize];
                if (lhs - rhs).norm() > 1e-9 {
                    return Err(Error::NonMultiplicative { a, b });
                }
            }
        }
        let is_real = values.iter().all(|v| v.im.abs() <= TOL);
        let values: Vec<Complex64> = values
            .into_iter()
            .map(|v| if is_real { Complex64::new(v.re.round(), 0.0) } else { v })
            .collect();
        let is_principal = (0..q).all(|a| a.gcd(&q) != 1 || (values[a as usize].re - 1.0).abs() <= 1e-9);
        Ok(Self { modulus: q, values, is_real, is_principal })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    /// Integer value of a real character.
    pub fn real_value(&self, n: u64) -> Option<i64> {
        self.is_real.then(|| self.value(n).re as i64)
    }
}

/// Kronecker symbol `(d|n)` for `n >= 0`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= twos;
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a|n)` for odd `n`.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}
