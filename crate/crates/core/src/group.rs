//! Class-two p-groups given by commutator data `B` and p-th power data `mu`.
//!
//! A datum `(p, r, n, B, mu)` describes a group of order `p^(r+n)` whose
//! elements are pairs `(e, z)` with `e` in F_p^r (the image in `G/G'`
//! coordinates) and `z` in F_p^n (the central coordinates). Multiplication is
//! the sum of the bilinear cocycle `sum_{i>j} e_i e'_j B(i,j)` and one carry
//! cocycle per generator, which contributes `mu_i` whenever `e_i + e'_i`
//! wraps past `p`. Both pieces are 2-cocycles, so every valid datum defines a
//! group.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::fpla::{self, FpMat, FpVec};
use crate::par::Exec;

/// Largest group handled by the exhaustive oracles.
pub const ORACLE_LIMIT: u128 = 1_000_000;

/// Position of the pair `(i, j)`, `i > j`, in the lexicographic pair order
/// `(1,0), (2,0), (2,1), (3,0), ...` (0-based indices).
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i > j);
    i * (i - 1) / 2 + j
}

pub fn pair_count(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// Iterates the pairs `(i, j)` with `i > j` in storage order.
pub fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..r).flat_map(|i| (0..i).map(move |j| (i, j)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupDatum {
    pub p: u32,
    pub r: usize,
    pub n: usize,
    /// `b[pair_index(i, j)]` is the commutator value `[g_i, g_j]`, `i > j`.
    pub b: Vec<FpVec>,
    /// `n x r`; column `i` is the central value of `g_i^p`.
    pub mu: FpMat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub e: FpVec,
    pub z: FpVec,
}

impl Element {
    pub fn new(e: FpVec, z: FpVec) -> Self {
        Element { e, z }
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}; {}]", self.e, self.z)
    }
}

/// Subgroup data read off from a datum. Orders are given as base-`p` logarithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupReport {
    pub derived_dim: usize,
    pub center_dim: usize,
    pub mho1_dim: usize,
    pub omega1_log_order: usize,
    pub omega1_abelian: bool,
    /// `p` or `p^2`.
    pub exponent: u64,
}

impl GroupDatum {
    /// Builds and validates a datum.
    pub fn new(p: u32, r: usize, n: usize, b: Vec<FpVec>, mu: FpMat) -> Result<Self> {
        let g = GroupDatum { p, r, n, b, mu };
        g.validate()?;
        Ok(g)
    }

    /// The abelian elementary datum `B = 0`, `mu = 0`.
    pub fn zero(p: u32, r: usize, n: usize) -> Self {
        GroupDatum {
            p,
            r,
            n,
            b: vec![FpVec::zeros(n); pair_count(r)],
            mu: FpMat::zeros(p, n, r),
        }
    }

    /// Checks the datum and reports the first field that is wrong.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDatum(msg));
        if !fpla::is_odd_prime(self.p) {
            return bad(format!("p = {} is not an odd prime below 65536", self.p));
        }
        if self.r == 0 {
            return bad("r must be positive".into());
        }
        if self.b.len() != pair_count(self.r) {
            return bad(format!(
                "B has {} entries, expected {}",
                self.b.len(),
                pair_count(self.r)
            ));
        }
        for (i, j) in pairs(self.r) {
            let v = &self.b[pair_index(i, j)];
            if v.dim() != self.n {
                return bad(format!("B({},{}) has dimension {}", i + 1, j + 1, v.dim()));
            }
            if let Some(&x) = v.0.iter().find(|&&x| x >= self.p) {
                return bad(format!("B({},{}) has unreduced entry {x}", i + 1, j + 1));
            }
        }
        if self.mu.rows != self.n || self.mu.cols != self.r || self.mu.p != self.p {
            return bad(format!(
                "mu has shape {}x{} over F_{}, expected {}x{} over F_{}",
                self.mu.rows, self.mu.cols, self.mu.p, self.n, self.r, self.p
            ));
        }
        if self.mu.entries.len() != self.n * self.r {
            return bad("mu storage length is wrong".into());
        }
        if let Some(&x) = self.mu.entries.iter().find(|&&x| x >= self.p) {
            return bad(format!("mu has unreduced entry {x}"));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn params(&self) -> (u32, usize, usize) {
        (self.p, self.r, self.n)
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> usize {
        self.r + self.n
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.log_order() as u32)
    }

    #[inline]
    pub fn b_at(&self, i: usize, j: usize) -> &FpVec {
        &self.b[pair_index(i, j)]
    }

    pub fn identity(&self) -> Element {
        Element::new(FpVec::zeros(self.r), FpVec::zeros(self.n))
    }

    fn check_dims(&self, x: &Element) -> Result<()> {
        if x.e.dim() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                got: x.e.dim(),
            });
        }
        if x.z.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.z.dim(),
            });
        }
        Ok(())
    }

    /// `sum_{i>j} e_i f_j B(i,j)`, the bilinear part of the multiplication cocycle.
    pub fn bilinear(&self, e: &[u32], f: &[u32]) -> FpVec {
        let p = self.p as u64;
        let mut acc = vec![0u64; self.n];
        for (i, j) in pairs(self.r) {
            let c = e[i] as u64 * f[j] as u64 % p;
            if c != 0 {
                for (a, &bv) in acc.iter_mut().zip(&self.b[pair_index(i, j)].0) {
                    *a += c * bv as u64;
                }
            }
        }
        FpVec(acc.into_iter().map(|a| (a % p) as u32).collect())
    }

    /// The alternating commutator form `sum_{i>j} (e_i f_j - f_i e_j) B(i,j)`.
    pub fn commutator_form(&self, e: &[u32], f: &[u32]) -> FpVec {
        let p = self.p as u64;
        let mut acc = vec![0u64; self.n];
        for (i, j) in pairs(self.r) {
            let c = (e[i] as u64 * f[j] as u64 + (p - 1) * (f[i] as u64 * e[j] as u64 % p)) % p;
            if c != 0 {
                for (a, &bv) in acc.iter_mut().zip(&self.b[pair_index(i, j)].0) {
                    *a += c * bv as u64;
                }
            }
        }
        FpVec(acc.into_iter().map(|a| (a % p) as u32).collect())
    }

    /// Full multiplication cocycle `f(e, e')`: bilinear part plus carries.
    pub fn cocycle(&self, e: &[u32], f: &[u32]) -> FpVec {
        let mut w = self.bilinear(e, f);
        for i in 0..self.r {
            if e[i] + f[i] >= self.p {
                for k in 0..self.n {
                    w.0[k] = (w.0[k] + self.mu.get(k, i)) % self.p;
                }
            }
        }
        w
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dims(x)?;
        self.check_dims(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &Element, y: &Element) -> Element {
        let p = self.p;
        let e = FpVec(
            x.e.0
                .iter()
                .zip(&y.e.0)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
        );
        let f = self.cocycle(&x.e.0, &y.e.0);
        let z = FpVec(
            x.z.0
                .iter()
                .zip(&y.z.0)
                .zip(&f.0)
                .map(|((&a, &b), &c)| (a + b + c) % p)
                .collect(),
        );
        Element { e, z }
    }

    /// `x^k` by square-and-multiply; negative `k` goes through the inverse.
    pub fn power(&self, x: &Element, k: i64) -> Element {
        // every element has order dividing p^2
        let modulus = (self.p as i64) * (self.p as i64);
        let mut k = k.rem_euclid(modulus) as u64;
        let mut acc = self.identity();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let pp = (self.p as i64) * (self.p as i64);
        self.power(x, pp - 1)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        let xi = self.inverse(x);
        let yi = self.inverse(y);
        let t = self.mul_unchecked(&xi, &yi);
        let t = self.mul_unchecked(&t, x);
        self.mul_unchecked(&t, y)
    }

    /// The p-power map on `G/G'`: `x^p = (0, mu e)`.
    pub fn nu(&self, x: &Element) -> FpVec {
        self.mu.apply(&x.e.0)
    }

    pub fn element_order(&self, x: &Element) -> u64 {
        if x.e.is_zero() && x.z.is_zero() {
            1
        } else if x.e.is_zero() || self.nu(x).is_zero() {
            self.p as u64
        } else {
            (self.p as u64).pow(2)
        }
    }

    /// Span of the commutator values `B(i, j)`.
    pub fn derived_dim(&self) -> usize {
        if self.n == 0 || self.b.is_empty() {
            return 0;
        }
        FpMat::from_columns(self.p, self.n, &self.b).rank()
    }

    /// Gram matrix of the alternating form `lambda . B` (`r x r`).
    pub fn form_matrix(&self, lambda: &FpVec) -> FpMat {
        let mut m = FpMat::zeros(self.p, self.r, self.r);
        for (i, j) in pairs(self.r) {
            let v = lambda.dot(self.b_at(i, j), self.p);
            m.set(i, j, v);
            m.set(j, i, (self.p - v) % self.p);
        }
        m
    }

    /// Radical of the commutator form: `{e : [e, .] = 0}`.
    pub fn radical(&self) -> Vec<FpVec> {
        // stack the r x r matrices of each coordinate of B
        let mut rows = Vec::new();
        for k in 0..self.n {
            let m = self.form_matrix(&FpVec::unit(self.n, k));
            for i in 0..self.r {
                rows.extend_from_slice(&m.row(i).0);
            }
        }
        let stacked = FpMat {
            p: self.p,
            rows: self.n * self.r,
            cols: self.r,
            entries: rows,
        };
        fpla::kernel_basis(&stacked)
    }

    /// Whether the commutator form vanishes on every pair from `basis`.
    fn form_vanishes_on(&self, basis: &[FpVec]) -> bool {
        basis.iter().enumerate().all(|(a, u)| {
            basis[a + 1..]
                .iter()
                .all(|v| self.commutator_form(&u.0, &v.0).is_zero())
        })
    }

    pub fn subgroup_report(&self) -> SubgroupReport {
        let mho1_dim = self.mu.rank();
        let omega_e = fpla::kernel_basis(&self.mu);
        SubgroupReport {
            derived_dim: self.derived_dim(),
            center_dim: self.radical().len() + self.n,
            mho1_dim,
            omega1_log_order: self.r - mho1_dim + self.n,
            omega1_abelian: self.form_vanishes_on(&omega_e),
            exponent: if self.mu.is_zero() {
                self.p as u64
            } else {
                (self.p as u64).pow(2)
            },
        }
    }

    /// Camina test on the datum: `B` spans F_p^n and every `lambda . B` is
    /// a nondegenerate alternating form.
    pub fn is_camina(&self) -> bool {
        if self.n == 0 || self.r % 2 == 1 {
            return false;
        }
        if self.derived_dim() != self.n {
            return false;
        }
        fpla::projective_functionals(self.n, self.p)
            .iter()
            .all(|l| self.form_matrix(l).rank() == self.r)
    }

    // ---- element indexing for the exhaustive oracles ----

    /// Index with `e` as the high-order digits, then `z`; index order agrees
    /// with lexicographic order on `(e, z)`.
    pub fn element_index(&self, x: &Element) -> u64 {
        let pn = (self.p as u64).pow(self.n as u32);
        x.e.to_index(self.p) * pn + x.z.to_index(self.p)
    }

    pub fn element_at(&self, idx: u64) -> Element {
        let pn = (self.p as u64).pow(self.n as u32);
        Element::new(
            FpVec::from_index(idx / pn, self.r, self.p),
            FpVec::from_index(idx % pn, self.n, self.p),
        )
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as u64).map(move |i| self.element_at(i))
    }

    pub(crate) fn guard(&self, what: &'static str) -> Result<u64> {
        let needed = self.order();
        if needed > ORACLE_LIMIT {
            return Err(Error::SizeGuard {
                what,
                needed,
                limit: ORACLE_LIMIT,
            });
        }
        Ok(needed as u64)
    }

    /// All conjugacy classes by brute-force conjugation. Classes are sorted
    /// by their least element; members are sorted.
    pub fn conjugacy_classes_oracle(&self) -> Result<Vec<Vec<Element>>> {
        self.conjugacy_classes_with(Exec::default())
    }

    pub fn conjugacy_classes_with(&self, exec: Exec) -> Result<Vec<Vec<Element>>> {
        let table = IndexedGroup::build(self, exec)?;
        Ok(table
            .conjugacy_classes(exec)
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.element_at(i as u64)).collect())
            .collect())
    }

    /// Camina test straight from the definition: class exactly 2 and every
    /// `g` outside `G'` is conjugate to all of `gG'`.
    pub fn is_camina_oracle(&self) -> Result<bool> {
        self.is_camina_oracle_with(Exec::default())
    }

    pub fn is_camina_oracle_with(&self, exec: Exec) -> Result<bool> {
        let t = IndexedGroup::build(self, exec)?;
        let order = t.order;

        // G' as the subgroup generated by all commutators
        let gens: BTreeSet<u32> = (0..order)
            .flat_map(|x| (0..order).map(move |y| (x, y)))
            .map(|(x, y)| t.commutator(x, y))
            .collect();
        let mut derived: HashSet<u32> = HashSet::from([0]);
        let mut frontier = vec![0u32];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = t.mul(x, g);
                if derived.insert(y) {
                    frontier.push(y);
                }
            }
        }
        if derived.len() == 1 {
            return Ok(false); // abelian
        }
        let mut derived_elems: Vec<u32> = derived.iter().copied().collect();
        derived_elems.sort_unstable();
        // class 2: G' central
        let central = derived_elems
            .iter()
            .all(|&d| (0..order).all(|g| t.mul(d, g) == t.mul(g, d)));
        if !central {
            return Ok(false);
        }
        Ok(exec.all_range(order as usize, |g| {
            let g = g as u32;
            if derived.contains(&g) {
                return true;
            }
            let mut class: Vec<u32> = (0..order).map(|h| t.conjugate(g, h)).collect();
            class.sort_unstable();
            class.dedup();
            let mut coset: Vec<u32> = derived_elems.iter().map(|&d| t.mul(g, d)).collect();
            coset.sort_unstable();
            class == coset
        }))
    }
}

/// A group with elements replaced by their indices, for the brute-force
/// oracles. Small groups get a full multiplication table.
pub struct IndexedGroup<'a> {
    datum: &'a GroupDatum,
    pub order: u32,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
}

const TABLE_LIMIT: u64 = 6561;

impl<'a> IndexedGroup<'a> {
    pub fn build(datum: &'a GroupDatum, exec: Exec) -> Result<Self> {
        let order = datum.guard("exhaustive oracle")?;
        let table = (order <= TABLE_LIMIT).then(|| {
            let rows = exec.map_range(order as usize, |a| {
                let x = datum.element_at(a as u64);
                (0..order)
                    .map(|b| {
                        let y = datum.element_at(b);
                        datum.element_index(&datum.mul_unchecked(&x, &y)) as u32
                    })
                    .collect::<Vec<u32>>()
            });
            rows.concat()
        });
        let inv = exec.map_range(order as usize, |a| {
            let x = datum.element_at(a as u64);
            datum.element_index(&datum.inverse(&x)) as u32
        });
        Ok(IndexedGroup {
            datum,
            order: order as u32,
            table,
            inv,
        })
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => {
                let x = self.datum.element_at(a as u64);
                let y = self.datum.element_at(b as u64);
                self.datum.element_index(&self.datum.mul_unchecked(&x, &y)) as u32
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `h^-1 g h`.
    #[inline]
    pub fn conjugate(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(self.inv(h), g), h)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// Conjugacy classes as sorted index lists, ordered by least member.
    pub fn conjugacy_classes(&self, exec: Exec) -> Vec<Vec<u32>> {
        let order = self.order;
        let least = exec.map_range(order as usize, |g| {
            (0..order)
                .map(|h| self.conjugate(g as u32, h))
                .min()
                .expect("group is nonempty")
        });
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        for (g, &rep) in least.iter().enumerate() {
            let k = *slot.entry(rep).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(g as u32);
        }
        classes.sort_by_key(|c| c[0]);
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{extraspecial, field_camina, Variant};

    fn heisenberg() -> GroupDatum {
        GroupDatum::new(3, 2, 1, vec![FpVec(vec![1])], FpMat::zeros(3, 1, 2)).unwrap()
    }

    fn el(e: &[u32], z: &[u32]) -> Element {
        Element::new(FpVec(e.to_vec()), FpVec(z.to_vec()))
    }

    #[test]
    fn validate_rejects_bad_data() {
        assert!(extraspecial(3, 1, Variant::ExpP).is_valid());
        let mut g = heisenberg();
        g.p = 2;
        g.mu.p = 2;
        assert!(matches!(g.validate(), Err(Error::InvalidDatum(m)) if m.contains("odd prime")));
        let mut g = heisenberg();
        g.b[0] = FpVec(vec![3]);
        assert!(!g.is_valid());
        let mut g = heisenberg();
        g.b.push(FpVec(vec![0]));
        assert!(!g.is_valid());
    }

    #[test]
    fn heisenberg_products() {
        let g = heisenberg();
        let x = el(&[1, 0], &[0]);
        let y = el(&[0, 1], &[0]);
        assert_eq!(g.multiply(&x, &g.identity()).unwrap(), x);
        assert_eq!(g.multiply(&x, &y).unwrap(), el(&[1, 1], &[0]));
        assert_eq!(g.multiply(&y, &x).unwrap(), el(&[1, 1], &[1]));
        assert!(g.multiply(&x, &el(&[1], &[0])).is_err());
    }

    #[test]
    fn heisenberg_commutator() {
        let g = heisenberg();
        let x = el(&[1, 0], &[0]);
        let y = el(&[0, 1], &[0]);
        assert_eq!(g.commutator(&x, &x), g.identity());
        assert_eq!(g.commutator(&x, &y), el(&[0, 0], &[2]));
    }

    #[test]
    fn exponent_p_squared_power() {
        let g = extraspecial(3, 1, Variant::ExpP2);
        let x = el(&[1, 0], &[0]);
        // oracle: repeated multiplication
        let mut acc = g.identity();
        for _ in 0..3 {
            acc = g.multiply(&acc, &x).unwrap();
        }
        assert_eq!(acc, el(&[0, 0], &[1]));
        assert_eq!(g.power(&x, 3), acc);
        assert_eq!(g.power(&x, 0), g.identity());
        assert_eq!(g.power(&x, 9), g.identity());
        assert_eq!(g.element_order(&x), 9);
    }

    #[test]
    fn inverse_examples() {
        let g = extraspecial(3, 1, Variant::ExpP2);
        assert_eq!(g.inverse(&g.identity()), g.identity());
        assert_eq!(g.inverse(&el(&[0, 0], &[1])), el(&[0, 0], &[2]));
        for x in g.elements() {
            assert_eq!(g.mul_unchecked(&x, &g.inverse(&x)), g.identity());
        }
    }

    #[test]
    fn nu_examples() {
        let g = extraspecial(3, 1, Variant::ExpP);
        assert!(g.elements().all(|x| g.nu(&x).is_zero()));
        let g = GroupDatum::new(3, 2, 2, vec![FpVec(vec![1, 0])], FpMat::identity(3, 2)).unwrap();
        assert_eq!(g.nu(&el(&[1, 2], &[1, 1])), FpVec(vec![1, 2]));
    }

    #[test]
    fn report_examples() {
        let r = extraspecial(3, 1, Variant::ExpP).subgroup_report();
        assert_eq!((r.derived_dim, r.mho1_dim, r.exponent), (1, 0, 3));
        assert_eq!(r.center_dim, 1);
        let r = extraspecial(3, 1, Variant::ExpP2).subgroup_report();
        assert_eq!(r.mho1_dim, 1);
        assert_eq!(r.exponent, 9);
    }

    #[test]
    fn camina_examples() {
        assert!(!GroupDatum::zero(3, 2, 1).is_camina());
        assert!(field_camina(3, 2).unwrap().is_camina());
        let g = GroupDatum::new(
            3,
            3,
            1,
            vec![FpVec(vec![1]), FpVec(vec![1]), FpVec(vec![2])],
            FpMat::zeros(3, 1, 3),
        )
        .unwrap();
        assert!(!g.is_camina());
        assert!(!g.is_camina_oracle().unwrap());
        assert!(field_camina(3, 1).unwrap().is_camina_oracle().unwrap());
    }

    #[test]
    fn rank_deficient_form_fails_oracle() {
        // r = 4, n = 1, B(2,1) = 1 only: form has rank 2 < 4
        let mut g = GroupDatum::zero(3, 4, 1);
        g.b[pair_index(1, 0)] = FpVec(vec![1]);
        assert!(!g.is_camina());
        assert!(!g.is_camina_oracle().unwrap());
    }

    #[test]
    fn classes_of_small_groups() {
        let a = GroupDatum::zero(3, 2, 1);
        let cls = a.conjugacy_classes_oracle().unwrap();
        assert_eq!(cls.len(), 27);
        assert!(cls.iter().all(|c| c.len() == 1));

        let g = extraspecial(3, 1, Variant::ExpP);
        let cls = g.conjugacy_classes_oracle().unwrap();
        assert_eq!(cls.len(), 11);
        assert_eq!(cls.iter().filter(|c| c.len() == 1).count(), 3);
        assert_eq!(cls.iter().filter(|c| c.len() == 3).count(), 8);
        assert_eq!(cls[0][0], g.identity());
    }

    #[test]
    fn guard_trips() {
        let g = GroupDatum::zero(5, 6, 3);
        assert!(matches!(
            g.conjugacy_classes_oracle(),
            Err(Error::SizeGuard { .. })
        ));
    }
}
