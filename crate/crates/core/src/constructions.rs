//! Standard families of Camina data and seeded random data.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::fpla::{self, FpMat, FpVec};
use crate::group::{pair_count, pair_index, pairs, Element, GroupDatum};

/// Which extraspecial group of a given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// exponent p, `mu = 0`
    ExpP,
    /// exponent p^2, `mu = [1 0 ... 0]`
    ExpP2,
}

/// Multiplication in GF(p^m) on coordinates in the basis `1, x, ..., x^(m-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTable {
    pub p: u32,
    pub m: usize,
    /// `c_0, ..., c_{m-1}` of the monic modulus `x^m + c_{m-1} x^{m-1} + ... + c_0`.
    pub modulus: Vec<u32>,
    /// `mul[i][j]` = coordinates of `x^i * x^j`.
    pub mul: Vec<Vec<FpVec>>,
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low to high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let shift = a.len() - dm;
        for k in 0..dm {
            let sub = (lead as u64 * m[k] as u64 % p as u64) as u32;
            a[shift + k] = (a[shift + k] + p - sub) % p;
        }
    }
    a
}

fn is_irreducible(monic: &[u32], p: u32) -> bool {
    let deg = monic.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = FpVec::from_index(idx, d, p).0;
            f.reverse();
            f.push(1);
            if poly_rem(monic, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldTable {
    /// Builds GF(p^m) from the lexicographically least monic irreducible
    /// polynomial, comparing coefficient lists `(c_{m-1}, ..., c_0)`.
    pub fn new(p: u32, m: usize) -> Result<Self> {
        if !fpla::is_odd_prime(p) || m == 0 {
            return Err(Error::Unsupported(format!("GF({p}^{m})")));
        }
        let count = (p as u64).pow(m as u32);
        let modulus = (0..count)
            .map(|idx| {
                let mut c = FpVec::from_index(idx, m, p).0;
                c.reverse();
                c
            })
            .find(|c| {
                let mut monic = c.clone();
                monic.push(1);
                is_irreducible(&monic, p)
            })
            .ok_or_else(|| Error::Unsupported(format!("no irreducible of degree {m}")))?;
        let mut monic = modulus.clone();
        monic.push(1);
        let mul = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut mono = vec![0u32; i + j + 1];
                        mono[i + j] = 1;
                        let mut red = poly_rem(&mono, &monic, p);
                        red.resize(m, 0);
                        FpVec(red)
                    })
                    .collect()
            })
            .collect();
        Ok(FieldTable { p, m, modulus, mul })
    }

    pub fn multiply(&self, a: &FpVec, b: &FpVec) -> FpVec {
        let mut out = FpVec::zeros(self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                let c = (a.0[i] as u64 * b.0[j] as u64 % self.p as u64) as u32;
                if c != 0 {
                    out.add_scaled(c, &self.mul[i][j], self.p);
                }
            }
        }
        out
    }
}

/// Extraspecial group of order `p^(2m+1)`: `B(m+i, i) = 1`.
pub fn extraspecial(p: u32, m: usize, variant: Variant) -> GroupDatum {
    let r = 2 * m;
    let mut g = GroupDatum::zero(p, r, 1);
    for i in 0..m {
        g.b[pair_index(m + i, i)] = FpVec(vec![1]);
    }
    if variant == Variant::ExpP2 {
        g.mu.set(0, 0, 1);
    }
    g
}

/// Heisenberg group over GF(p^m): generators `a_1..a_m, b_1..b_m` with
/// `[b_j, a_i]` the field product of the basis elements `x^i x^j`.
pub fn field_camina(p: u32, m: usize) -> Result<GroupDatum> {
    if !(1..=3).contains(&m) {
        return Err(Error::Unsupported(format!(
            "field_camina needs 1 <= m <= 3, got {m}"
        )));
    }
    let field = FieldTable::new(p, m)?;
    let mut g = GroupDatum::zero(p, 2 * m, m);
    for j in 0..m {
        for i in 0..m {
            g.b[pair_index(m + j, i)] = field.mul[i][j].clone();
        }
    }
    Ok(g)
}

/// The `n x r` map sending `e_i` to `z_i` for `i < k` and everything else to 0.
pub fn canonical_mu(p: u32, n: usize, r: usize, k: usize) -> FpMat {
    let mut m = FpMat::zeros(p, n, r);
    for i in 0..k.min(n).min(r) {
        m.set(i, i, 1);
    }
    m
}

/// Same commutator data with the power data replaced by `mu`.
pub fn with_mu(g: &GroupDatum, mu: &FpMat) -> Result<GroupDatum> {
    if mu.rows != g.n || mu.cols != g.r || mu.p != g.p {
        return Err(Error::InvalidDatum(format!(
            "mu must be {}x{} over F_{}, got {}x{} over F_{}",
            g.n, g.r, g.p, mu.rows, mu.cols, mu.p
        )));
    }
    let mut out = g.clone();
    out.mu = mu.clone();
    out.validate()?;
    Ok(out)
}

/// Maximum number of draws before `random_datum` gives up.
pub const RANDOM_RETRIES: u32 = 10_000;

/// Deterministic stream for `(p, r, n, seed)`: SplitMix64 seeded with the
/// seed xor the parameters.
pub fn datum_rng(p: u32, r: usize, n: usize, seed: u64) -> SplitMix64 {
    let folded = seed ^ ((p as u64) << 40) ^ ((r as u64) << 24) ^ ((n as u64) << 8);
    SplitMix64::seed_from_u64(folded)
}

/// Uniform residue mod `p`.
pub fn draw(rng: &mut impl RngCore, p: u32) -> u32 {
    (rng.next_u64() % p as u64) as u32
}

/// Uniform random element.
pub fn random_element(g: &GroupDatum, rng: &mut impl RngCore) -> Element {
    let e = FpVec((0..g.r).map(|_| draw(rng, g.p)).collect());
    let z = FpVec((0..g.n).map(|_| draw(rng, g.p)).collect());
    Element::new(e, z)
}

/// Seeded random datum. Entries are drawn for the `B` pairs in lex order
/// (each pair's `n` coordinates in turn), then for `mu` column by column.
/// With `require_camina` whole data are redrawn from the same stream until
/// one is Camina.
pub fn random_datum(
    p: u32,
    r: usize,
    n: usize,
    seed: u64,
    require_camina: bool,
) -> Result<GroupDatum> {
    if !fpla::is_odd_prime(p) || r == 0 {
        return Err(Error::InvalidDatum(format!("random_datum({p}, {r}, {n})")));
    }
    let mut rng = datum_rng(p, r, n, seed);
    let mut rejected = 0;
    for _ in 0..RANDOM_RETRIES {
        let mut g = GroupDatum::zero(p, r, n);
        for (i, j) in pairs(r) {
            for k in 0..n {
                g.b[pair_index(i, j)].0[k] = draw(&mut rng, p);
            }
        }
        for col in 0..r {
            for row in 0..n {
                g.mu.set(row, col, draw(&mut rng, p));
            }
        }
        debug_assert_eq!(g.b.len(), pair_count(r));
        if !require_camina || g.is_camina() {
            return Ok(g);
        }
        rejected += 1;
    }
    Err(Error::RetriesExhausted {
        attempts: RANDOM_RETRIES,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extraspecial_shapes() {
        let g = extraspecial(3, 1, Variant::ExpP);
        assert_eq!(g.order(), 27);
        assert_eq!(g.subgroup_report().mho1_dim, 0);
        let g = extraspecial(3, 1, Variant::ExpP2);
        assert_eq!(g.subgroup_report().mho1_dim, 1);
        for m in 1..=2 {
            for v in [Variant::ExpP, Variant::ExpP2] {
                let g = extraspecial(3, m, v);
                assert!(g.is_valid() && g.is_camina());
            }
        }
        assert!(extraspecial(5, 2, Variant::ExpP2).is_camina());
    }

    #[test]
    fn field_camina_small() {
        assert_eq!(
            field_camina(3, 1).unwrap(),
            extraspecial(3, 1, Variant::ExpP)
        );
        let g = field_camina(3, 2).unwrap();
        assert_eq!(g.order(), 729);
        assert!(g.is_camina());
        let rep = g.subgroup_report();
        assert_eq!((rep.exponent, rep.mho1_dim), (3, 0));
        assert_eq!(rep.derived_dim, 2);
        assert!(field_camina(3, 3).unwrap().is_camina());
        assert!(field_camina(5, 2).unwrap().is_camina());
        assert!(field_camina(3, 4).is_err());
    }

    #[test]
    fn gf9_modulus() {
        // x^2 + 1 is the least monic irreducible quadratic over F_3
        let f = FieldTable::new(3, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 0]);
        assert_eq!(f.mul[1][1], FpVec(vec![2, 0]));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)] {
            let f = FieldTable::new(p, m).unwrap();
            let all = fpla::all_vectors(m, p);
            let one = FpVec::unit(m, 0);
            for a in &all {
                if !a.is_zero() {
                    assert!(all.iter().any(|b| f.multiply(a, b) == one), "no inverse");
                }
                for b in &all {
                    let ab = f.multiply(a, b);
                    assert_eq!(ab, f.multiply(b, a));
                    if !a.is_zero() && !b.is_zero() {
                        assert!(!ab.is_zero());
                    }
                }
            }
            // associativity on a sample when the field is large
            let step = if all.len() > 27 { 7 } else { 1 };
            for a in all.iter().step_by(step) {
                for b in all.iter().step_by(step) {
                    for c in all.iter().step_by(step) {
                        assert_eq!(
                            f.multiply(&f.multiply(a, b), c),
                            f.multiply(a, &f.multiply(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn with_mu_examples() {
        let g = field_camina(3, 2).unwrap();
        assert_eq!(with_mu(&g, &FpMat::zeros(3, 2, 4)).unwrap(), g);
        let g1 = with_mu(&g, &canonical_mu(3, 2, 4, 1)).unwrap();
        assert_eq!(g1.subgroup_report().mho1_dim, 1);
        let g2 = with_mu(&g, &canonical_mu(3, 2, 4, 2)).unwrap();
        assert_eq!(g2.subgroup_report().mho1_dim, 2);
        assert!(g2.is_camina());
        assert!(with_mu(&g, &FpMat::zeros(3, 4, 2)).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_datum(3, 4, 2, 17, false).unwrap();
        let b = random_datum(3, 4, 2, 17, false).unwrap();
        assert_eq!(a, b);
        let c = random_datum(3, 4, 2, 17, true).unwrap();
        assert!(c.is_camina());
        assert!(random_datum(3, 4, 1, 17, false).unwrap().is_valid());
        let mut r1 = datum_rng(3, 4, 2, 17);
        let mut r2 = datum_rng(3, 4, 1, 17);
        assert_ne!(r1.next_u64(), r2.next_u64());
    }

    #[test]
    fn impossible_camina_reports_statistics() {
        // one commutator value can never span F_3^2
        match random_datum(3, 2, 2, 1, true) {
            Err(Error::RetriesExhausted { attempts, rejected }) => {
                assert_eq!(attempts, rejected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
