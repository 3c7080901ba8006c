//! Exact arithmetic in Z[zeta_p].
//!
//! Values are stored on the basis `1, zeta, ..., zeta^(p-2)`; the power
//! `zeta^(p-1)` is rewritten as `-1 - zeta - ... - zeta^(p-2)`, so equality
//! of values is equality of coefficient vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    pub p: u32,
    pub coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(p: u32) -> Self {
        Cyclotomic {
            p,
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn from_int(p: u32, k: i64) -> Self {
        let mut c = Cyclotomic::zero(p);
        c.coeffs[0] = k;
        c
    }

    pub fn one(p: u32) -> Self {
        Cyclotomic::from_int(p, 1)
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        Cyclotomic::from_cyclic(p, &counts)
    }

    /// Reduces a vector of coefficients of `1, zeta, ..., zeta^(p-1)`.
    pub fn from_cyclic(p: u32, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        Cyclotomic {
            p,
            coeffs: counts[..p as usize - 1].iter().map(|&c| c - top).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coeffs.iter().any(|c| c % k != 0) {
            return None;
        }
        Some(Cyclotomic {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| c / k).collect(),
        })
    }

    /// Complex conjugation, `zeta -> zeta^(p-1)`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut counts = vec![0i64; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            counts[(p - k) % p] += c;
        }
        Cyclotomic::from_cyclic(self.p, &counts)
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(Cyclotomic {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        // multiply in Z[x]/(x^p - 1), then reduce
        let p = self.p as usize;
        let mut counts = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                counts[(i + j) % p] += a * b;
            }
        }
        Ok(Cyclotomic::from_cyclic(self.p, &counts))
    }
}

pub fn cyc_add(x: &Cyclotomic, y: &Cyclotomic) -> Result<Cyclotomic> {
    x.checked_add(y)
}

pub fn cyc_mul(x: &Cyclotomic, y: &Cyclotomic) -> Result<Cyclotomic> {
    x.checked_mul(y)
}

pub fn cyc_conj(x: &Cyclotomic) -> Cyclotomic {
    x.conj()
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-1)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

/// `c0+c1z+c2z^2+...`, every basis coefficient written out.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &c) in self.coeffs.iter().enumerate() {
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    let sign = if c < 0 { '-' } else { '+' };
                    write!(f, "{sign}{}z", c.abs())?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
