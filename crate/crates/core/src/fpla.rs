//! Dense linear algebra over the prime field F_p.
//!
//! The prime is a runtime value; entries are `u32` residues reduced after
//! every operation. All echelon forms pivot on the lowest available index, so
//! every output is deterministic.

use std::fmt;

use crate::error::{Error, Result};

/// Returns true when `p` is an odd prime below 2^16.
pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 || p >= 1 << 16 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .expect("a prime has a primitive root")
}

pub fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64 % p64;
    let mut b = base as u64 % p64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// A vector over F_p. The prime is carried by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVec(pub Vec<u32>);

impl FpVec {
    pub fn zeros(dim: usize) -> Self {
        FpVec(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        FpVec(v)
    }

    /// Builds a vector from arbitrary integers, reducing them mod `p`.
    pub fn from_ints(p: u32, xs: &[i64]) -> Self {
        FpVec(xs.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &FpVec, p: u32) -> u32 {
        debug_assert_eq!(self.dim(), other.dim());
        let s: u64 = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        (s % p as u64) as u32
    }

    pub fn add(&self, other: &FpVec, p: u32) -> FpVec {
        FpVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &FpVec, p: u32) -> FpVec {
        FpVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| (a + p - b) % p)
                .collect(),
        )
    }

    pub fn scale(&self, k: u32, p: u32) -> FpVec {
        FpVec(
            self.0
                .iter()
                .map(|&a| (a as u64 * k as u64 % p as u64) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, p: u32) -> FpVec {
        FpVec(self.0.iter().map(|&a| (p - a) % p).collect())
    }

    /// `self += k * other`, in place.
    pub fn add_scaled(&mut self, k: u32, other: &FpVec, p: u32) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = ((*a as u64 + k as u64 * b as u64) % p as u64) as u32;
        }
    }

    /// Index of this vector in the base-`p` enumeration where coordinate 0 is
    /// the most significant digit (so index order is lexicographic order).
    pub fn to_index(&self, p: u32) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &x| acc * p as u64 + x as u64)
    }

    pub fn from_index(mut idx: u64, dim: usize, p: u32) -> FpVec {
        let mut v = vec![0u32; dim];
        for slot in v.iter_mut().rev() {
            *slot = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        FpVec(v)
    }
}

impl fmt::Display for FpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All vectors of F_p^dim in lexicographic order.
pub fn all_vectors(dim: usize, p: u32) -> Vec<FpVec> {
    let count = (p as u64).pow(dim as u32);
    (0..count).map(|i| FpVec::from_index(i, dim, p)).collect()
}

/// A dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl FpMat {
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(FpMat {
            p,
            rows,
            cols,
            entries: entries.into_iter().map(|x| x % p).collect(),
        })
    }

    /// Builds from signed integer rows, reducing mod `p`.
    pub fn from_rows(p: u32, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(move |&x| x.rem_euclid(p as i64) as u32)
            })
            .collect();
        FpMat {
            p,
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_columns(p: u32, rows: usize, cols: &[FpVec]) -> Self {
        let mut m = FpMat::zeros(p, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.dim(), rows);
            for i in 0..rows {
                m.set(i, j, col.0[i]);
            }
        }
        m
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMat {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, d: usize) -> Self {
        let mut m = FpMat::zeros(p, d, d);
        for i in 0..d {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> FpVec {
        FpVec(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> FpVec {
        FpVec((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMat) -> Result<FpMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let p = self.p as u64;
        let mut out = FpMat::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u64 = (0..self.cols)
                    .map(|k| self.get(i, k) as u64 * other.get(k, j) as u64)
                    .sum();
                out.entries[i * other.cols + j] = (s % p) as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FpVec) -> Result<FpVec> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        Ok(self.apply(&v.0))
    }

    /// Matrix-vector product without the dimension check.
    pub fn apply(&self, v: &[u32]) -> FpVec {
        let p = self.p as u64;
        FpVec(
            (0..self.rows)
                .map(|i| {
                    let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                    let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                    (s % p) as u32
                })
                .collect(),
        )
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, row * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for j in 0..m.cols {
                let v = (m.get(row, j) as u64 * inv as u64 % p as u64) as u32;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let f = m.get(i, col);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) as u64 + (p - f) as u64 * m.get(row, j) as u64) % p as u64;
                    m.set(i, j, v as u32);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse by Gauss-Jordan elimination on `[M | I]`.
    pub fn inverse(&self) -> Option<FpMat> {
        if self.rows != self.cols {
            return None;
        }
        let d = self.rows;
        let mut aug = FpMat::zeros(self.p, d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, d + i, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < d || pivots[d - 1] != d - 1 {
            return None;
        }
        let mut inv = FpMat::zeros(self.p, d, d);
        for i in 0..d {
            for j in 0..d {
                inv.set(i, j, red.get(i, d + j));
            }
        }
        Some(inv)
    }
}

impl fmt::Display for FpMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Rank over F_p.
pub fn mat_rank(m: &FpMat) -> usize {
    m.rank()
}

/// Basis of the right null space, itself in reduced echelon form.
pub fn kernel_basis(m: &FpMat) -> Vec<FpVec> {
    let p = m.p;
    let (red, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Vec::new();
    }
    let mut raw = FpMat::zeros(p, free.len(), m.cols);
    for (k, &f) in free.iter().enumerate() {
        raw.set(k, f, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            raw.set(k, pc, (p - red.get(r, f)) % p);
        }
    }
    let (basis, piv) = raw.rref();
    (0..piv.len()).map(|i| basis.row(i)).collect()
}

/// One solution of `M x = b` with free variables set to zero, or `None`.
pub fn solve(m: &FpMat, b: &FpVec) -> Result<Option<FpVec>> {
    if b.dim() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            got: b.dim(),
        });
    }
    let mut aug = FpMat::zeros(m.p, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols, b.0[i]);
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = FpVec::zeros(m.cols);
    for (r, &pc) in pivots.iter().enumerate() {
        x.0[pc] = red.get(r, m.cols);
    }
    Ok(Some(x))
}

/// Generators of GL(d, p): all elementary transvections `I + E_ij`, then
/// `diag(g, 1, ..., 1)` for the least primitive root `g`.
pub fn gl_generators(d: usize, p: u32) -> Vec<FpMat> {
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut t = FpMat::identity(p, d);
                t.set(i, j, 1);
                gens.push(t);
            }
        }
    }
    let mut g = FpMat::identity(p, d);
    g.set(0, 0, primitive_root(p));
    gens.push(g);
    gens
}

/// Order of GL(d, p).
pub fn gl_order(d: usize, p: u32) -> u128 {
    let q = p as u128;
    let pd = q.pow(d as u32);
    (0..d).map(|i| pd - q.pow(i as u32)).product()
}

/// One representative per line of F_p^n: nonzero vectors whose first nonzero
/// coordinate is 1, sorted lexicographically.
pub fn projective_functionals(n: usize, p: u32) -> Vec<FpVec> {
    all_vectors(n, p)
        .into_iter()
        .filter(|v| v.0.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&FpMat::identity(3, 2)), 2);
        assert_eq!(mat_rank(&FpMat::zeros(3, 2, 2)), 0);
        assert_eq!(mat_rank(&FpMat::from_rows(5, &[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&FpMat::from_rows(3, &[&[1, 1]]));
        assert_eq!(k, vec![FpVec(vec![1, 2])]);
        assert!(kernel_basis(&FpMat::identity(3, 3)).is_empty());
        let k = kernel_basis(&FpMat::zeros(3, 1, 2));
        assert_eq!(k, vec![FpVec(vec![1, 0]), FpVec(vec![0, 1])]);
    }

    #[test]
    fn solve_examples() {
        let b = FpVec(vec![2, 1]);
        assert_eq!(solve(&FpMat::identity(3, 2), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve(&FpMat::zeros(3, 2, 2), &b).unwrap(), None);
        let m = FpMat::from_rows(3, &[&[1, 1]]);
        assert_eq!(solve(&m, &FpVec(vec![2])).unwrap(), Some(FpVec(vec![2, 0])));
        assert!(solve(&m, &FpVec(vec![1, 1])).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMat::from_rows(5, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMat::identity(5, 3));
        assert!(FpMat::from_rows(3, &[&[1, 2], &[2, 1]]).inverse().is_none());
    }

    #[test]
    fn gl_generator_examples() {
        assert_eq!(gl_generators(1, 3), vec![FpMat::from_rows(3, &[&[2]])]);
        let g = gl_generators(2, 3);
        assert_eq!(
            g,
            vec![
                FpMat::from_rows(3, &[&[1, 1], &[0, 1]]),
                FpMat::from_rows(3, &[&[1, 0], &[1, 1]]),
                FpMat::from_rows(3, &[&[2, 0], &[0, 1]]),
            ]
        );
        for d in 1..=3 {
            for p in [3, 5, 7] {
                assert!(gl_generators(d, p).iter().all(|m| mat_rank(m) == d));
            }
        }
    }

    fn closure_size(d: usize, p: u32) -> usize {
        let gens = gl_generators(d, p);
        let id = FpMat::identity(p, d);
        let mut seen: HashSet<FpMat> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(m) = frontier.pop() {
            for g in &gens {
                let next = g.mul(&m).unwrap();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn gl_generators_generate() {
        assert_eq!(closure_size(2, 3), 48);
        for d in 1..=2 {
            for p in [3, 5] {
                assert_eq!(closure_size(d, p) as u128, gl_order(d, p), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn functional_examples() {
        assert_eq!(projective_functionals(1, 3), vec![FpVec(vec![1])]);
        assert_eq!(
            projective_functionals(2, 3),
            vec![
                FpVec(vec![0, 1]),
                FpVec(vec![1, 0]),
                FpVec(vec![1, 1]),
                FpVec(vec![1, 2])
            ]
        );
        assert_eq!(projective_functionals(2, 5).len(), 6);
        assert_eq!(projective_functionals(3, 3).len(), 13);
    }

    #[test]
    fn primes_and_roots() {
        assert!(is_odd_prime(3) && is_odd_prime(5) && is_odd_prime(65521));
        assert!(!is_odd_prime(2) && !is_odd_prime(9) && !is_odd_prime(1));
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }
}
