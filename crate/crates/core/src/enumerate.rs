//! Classification of Camina data for small parameters.
//!
//! Isomorphism classes of Camina groups with `|G:G'| = p^r`, `|G'| = p^n`
//! are the orbits of `GL(r, p) x GL(n, p)` on pairs `(B, mu)`. They are
//! computed in two stages: orbits on the commutator data `B` by BFS over
//! group generators, then, for each orbit representative, orbits of the
//! stabilizer of `B` acting on all `mu` by `mu -> C mu A^-1`.
//!
//! Data are encoded as base-`p` integers with the first serialized entry as
//! the most significant digit, so the numeric order of codes is the
//! lexicographic order of serializations.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::brauer::{check_main_theorem, check_nenciu, invariant_triple};
use crate::equiv::{EquivSearch, Equivalence};
use crate::error::{Error, Result};
use crate::fpla::{self, gl_order, FpMat, FpVec};
use crate::group::{pair_count, pair_index, pairs, GroupDatum, SubgroupReport};
use crate::par::Exec;

/// Largest commutator-data space scanned.
pub const SCAN_LIMIT: u128 = 1_000_000_000;
/// Largest `GL(r, p)` searched for stabilizers.
pub const STABILIZER_LIMIT: u128 = 30_000_000;
/// Largest orbit kept in memory by the BFS.
pub const ORBIT_LIMIT: usize = 50_000_000;

/// Commutator data packed as a base-`p` integer.
pub type BCode = u64;

/// Layout of the codes for given parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub p: u32,
    pub r: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(p: u32, r: usize, n: usize) -> Self {
        Shape { p, r, n }
    }

    pub fn b_digits(&self) -> usize {
        pair_count(self.r) * self.n
    }

    pub fn b_space(&self) -> u128 {
        (self.p as u128).pow(self.b_digits() as u32)
    }

    pub fn mu_space(&self) -> u128 {
        (self.p as u128).pow((self.r * self.n) as u32)
    }

    /// Flat `B` entries, pair-major, from a code.
    pub fn decode_b(&self, code: BCode) -> Vec<u32> {
        FpVec::from_index(code, self.b_digits(), self.p).0
    }

    pub fn encode_b(&self, flat: &[u32]) -> BCode {
        flat.iter()
            .fold(0, |acc, &x| acc * self.p as u64 + x as u64)
    }

    pub fn b_vectors(&self, code: BCode) -> Vec<FpVec> {
        self.decode_b(code)
            .chunks(self.n)
            .map(|c| FpVec(c.to_vec()))
            .collect()
    }

    pub fn b_code_of(&self, g: &GroupDatum) -> BCode {
        let flat: Vec<u32> = g.b.iter().flat_map(|v| v.0.iter().copied()).collect();
        self.encode_b(&flat)
    }

    /// `mu` from a code; digits run column by column.
    pub fn decode_mu(&self, code: u64) -> FpMat {
        let digits = FpVec::from_index(code, self.r * self.n, self.p).0;
        let mut m = FpMat::zeros(self.p, self.n, self.r);
        for col in 0..self.r {
            for row in 0..self.n {
                m.set(row, col, digits[col * self.n + row]);
            }
        }
        m
    }

    pub fn encode_mu(&self, m: &FpMat) -> u64 {
        let mut acc = 0u64;
        for col in 0..self.r {
            for row in 0..self.n {
                acc = acc * self.p as u64 + m.get(row, col) as u64;
            }
        }
        acc
    }

    pub fn datum(&self, b: BCode, mu: u64) -> GroupDatum {
        GroupDatum {
            p: self.p,
            r: self.r,
            n: self.n,
            b: self.b_vectors(b),
            mu: self.decode_mu(mu),
        }
    }
}

/// Rank of a small square matrix mod `p`, in place.
fn small_rank(m: &mut [[u32; 8]; 8], d: usize, p: u32) -> usize {
    let mut rank = 0;
    for col in 0..d {
        let Some(pr) = (rank..d).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(pr, rank);
        let inv = fpla::inv_mod(m[rank][col], p) as u64;
        for i in rank + 1..d {
            let f = m[i][col] as u64 * inv % p as u64;
            if f != 0 {
                for j in col..d {
                    m[i][j] =
                        ((m[i][j] as u64 + (p as u64 - f) * m[rank][j] as u64) % p as u64) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Camina test on flat `B` entries: every `lambda . B` nondegenerate. This
/// also forces the values of `B` to span F_p^n.
fn camina_flat(shape: &Shape, flat: &[u32], functionals: &[FpVec]) -> bool {
    let (p, r, n) = (shape.p, shape.r, shape.n);
    if r % 2 == 1 || n == 0 || r > 8 {
        return false;
    }
    functionals.iter().all(|l| {
        let mut m = [[0u32; 8]; 8];
        for (i, j) in pairs(r) {
            let base = pair_index(i, j) * n;
            let v = (0..n)
                .map(|k| l.0[k] as u64 * flat[base + k] as u64)
                .sum::<u64>()
                % p as u64;
            m[i][j] = v as u32;
            m[j][i] = (p - v as u32) % p;
        }
        small_rank(&mut m, r, p) == r
    })
}

/// All Camina commutator data for `(p, r, n)`, ascending by code.
pub fn scan_camina_b(p: u32, r: usize, n: usize) -> Result<Vec<BCode>> {
    scan_camina_b_with(p, r, n, Exec::default())
}

pub fn scan_camina_b_with(p: u32, r: usize, n: usize, exec: Exec) -> Result<Vec<BCode>> {
    if !fpla::is_odd_prime(p) || r == 0 || r > 8 {
        return Err(Error::Unsupported(format!("scan for p={p}, r={r}, n={n}")));
    }
    let shape = Shape::new(p, r, n);
    let space = shape.b_space();
    if space > SCAN_LIMIT {
        return Err(Error::SizeGuard {
            what: "commutator data scan",
            needed: space,
            limit: SCAN_LIMIT,
        });
    }
    let functionals = fpla::projective_functionals(n, p);
    Ok(exec.filter_range(space as u64, |code| {
        camina_flat(&shape, &shape.decode_b(code), &functionals)
    }))
}

/// Transforms flat `B` by `(A, C)`: `B'(i, j) = C B(A e_i, A e_j)`.
fn act_on_b(shape: &Shape, flat: &[u32], a: &FpMat, c: &FpMat) -> Vec<u32> {
    let g = GroupDatum {
        p: shape.p,
        r: shape.r,
        n: shape.n,
        b: flat.chunks(shape.n).map(|x| FpVec(x.to_vec())).collect(),
        mu: FpMat::zeros(shape.p, shape.n, shape.r),
    };
    let cols: Vec<FpVec> = (0..shape.r).map(|i| a.column(i)).collect();
    let mut out = Vec::with_capacity(flat.len());
    for (i, j) in pairs(shape.r) {
        let v = g.commutator_form(&cols[i].0, &cols[j].0);
        out.extend(c.apply(&v.0).0);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BOrbit {
    /// least code in the orbit
    pub representative: BCode,
    pub size: usize,
}

/// Orbits of `GL(r, p) x GL(n, p)` on the given commutator data.
pub fn b_orbits(survivors: &[BCode], p: u32, r: usize, n: usize) -> Result<Vec<BOrbit>> {
    b_orbits_with(survivors, p, r, n, Exec::default())
}

pub fn b_orbits_with(
    survivors: &[BCode],
    p: u32,
    r: usize,
    n: usize,
    exec: Exec,
) -> Result<Vec<BOrbit>> {
    let shape = Shape::new(p, r, n);
    let mut gens: Vec<(FpMat, FpMat)> = fpla::gl_generators(r, p)
        .into_iter()
        .map(|a| (a, FpMat::identity(p, n)))
        .collect();
    gens.extend(
        fpla::gl_generators(n, p)
            .into_iter()
            .map(|c| (FpMat::identity(p, r), c)),
    );

    let mut visited: HashSet<BCode> = HashSet::new();
    let mut orbits = Vec::new();
    for &seed in survivors {
        if visited.contains(&seed) {
            continue;
        }
        visited.insert(seed);
        let mut least = seed;
        let mut size = 1usize;
        let mut frontier = vec![seed];
        while !frontier.is_empty() {
            let images = exec.map_slice(&frontier, |&code| {
                let flat = shape.decode_b(code);
                gens.iter()
                    .map(|(a, c)| shape.encode_b(&act_on_b(&shape, &flat, a, c)))
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for code in images.into_iter().flatten() {
                if visited.insert(code) {
                    least = least.min(code);
                    size += 1;
                    next.push(code);
                }
            }
            if visited.len() > ORBIT_LIMIT {
                return Err(Error::SizeGuard {
                    what: "orbit BFS",
                    needed: visited.len() as u128,
                    limit: ORBIT_LIMIT as u128,
                });
            }
            frontier = next;
        }
        orbits.push(BOrbit {
            representative: least,
            size,
        });
    }
    orbits.sort_by_key(|o| o.representative);
    Ok(orbits)
}

/// All `(A, C)` with `C B(x, y) = B(Ax, Ay)`.
pub fn stabilizer(b: &[FpVec], p: u32, r: usize, n: usize) -> Result<Vec<Equivalence>> {
    stabilizer_with(b, p, r, n, Exec::default())
}

pub fn stabilizer_with(
    b: &[FpVec],
    p: u32,
    r: usize,
    n: usize,
    exec: Exec,
) -> Result<Vec<Equivalence>> {
    let order = gl_order(r, p);
    if order > STABILIZER_LIMIT {
        return Err(Error::SizeGuard {
            what: "stabilizer search over GL(r, p)",
            needed: order,
            limit: STABILIZER_LIMIT,
        });
    }
    let g = GroupDatum::new(p, r, n, b.to_vec(), FpMat::zeros(p, n, r))?;
    if g.derived_dim() != n {
        return Err(Error::InvalidDatum(
            "commutator data must span F_p^n".into(),
        ));
    }
    Ok(EquivSearch::new(&g, &g, false).all(exec))
}

/// One isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub representative: GroupDatum,
    /// number of data `(B, mu)` describing this group
    pub orbit_size: u128,
    pub b_orbit_size: usize,
    pub mu_orbit_size: usize,
    pub report: SubgroupReport,
    pub triple: (u128, u128, u128),
    pub class_count: u128,
}

impl OrbitRecord {
    pub fn mho1_order(&self) -> u128 {
        self.triple.2
    }

    pub fn omega1_order(&self) -> u128 {
        (self.representative.p as u128).pow(self.report.omega1_log_order as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub p: u32,
    pub r: usize,
    pub n: usize,
    pub survivors: usize,
    pub b_orbits: Vec<BOrbit>,
    /// sorted by `(|mho_1|, Omega_1 abelian, serialization)`
    pub classes: Vec<OrbitRecord>,
    /// pairs of class indices satisfying the Brauer condition
    pub brauer_pairs: Vec<(usize, usize)>,
}

impl ClassificationReport {
    /// `|mho_1| -> number of classes`.
    pub fn mho1_distribution(&self) -> BTreeMap<u128, usize> {
        let mut d = BTreeMap::new();
        for c in &self.classes {
            *d.entry(c.mho1_order()).or_insert(0) += 1;
        }
        d
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Camina groups with p = {}, |G:G'| = {}^{}, |G'| = {}^{}",
            self.p, self.p, self.r, self.p, self.n
        );
        let _ = writeln!(s, "camina commutator data: {}", self.survivors);
        let _ = writeln!(s, "commutator orbits: {}", self.b_orbits.len());
        for (i, o) in self.b_orbits.iter().enumerate() {
            let _ = writeln!(s, "  B-orbit {}: size {}", i + 1, o.size);
        }
        let _ = writeln!(s, "isomorphism classes: {}", self.classes.len());
        for (i, c) in self.classes.iter().enumerate() {
            let _ = writeln!(
                s,
                "  class {}: |mho1| = {}, |Omega1| = {}, Omega1 {}, exponent {}, classes {}, orbit size {}",
                i + 1,
                c.mho1_order(),
                c.omega1_order(),
                if c.report.omega1_abelian { "abelian" } else { "nonabelian" },
                c.report.exponent,
                c.class_count,
                c.orbit_size
            );
        }
        let dist: Vec<String> = self
            .mho1_distribution()
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect();
        let _ = writeln!(s, "|mho1| distribution: {{{}}}", dist.join(", "));
        let _ = writeln!(s, "brauer pairs: {}", self.brauer_pairs.len());
        for (a, b) in &self.brauer_pairs {
            let _ = writeln!(s, "  {} ~ {}", a + 1, b + 1);
        }
        s
    }

    /// One line per class: p, r, n, |mho1|, |Omega1|, Omega1 abelian,
    /// exponent, class count, orbit size.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from(
            "p\tr\tn\tmho1\tomega1\tomega1_abelian\texponent\tclass_count\torbit_size\n",
        );
        for c in &self.classes {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                self.p,
                self.r,
                self.n,
                c.mho1_order(),
                c.omega1_order(),
                c.report.omega1_abelian,
                c.report.exponent,
                c.class_count,
                c.orbit_size
            );
        }
        s
    }
}

/// Orbits of the stabilizer on `mu`, as `(least code, size)` ascending.
pub fn mu_orbits(shape: &Shape, stab: &[Equivalence], exec: Exec) -> Vec<(u64, usize)> {
    let inverses: Vec<(FpMat, FpMat)> = stab
        .iter()
        .map(|s| {
            (
                s.c.clone(),
                s.a.inverse().expect("stabilizer element is invertible"),
            )
        })
        .collect();
    let space = shape.mu_space() as u64;
    let mut seen = vec![false; space as usize];
    let mut out = Vec::new();
    for code in 0..space {
        if seen[code as usize] {
            continue;
        }
        let mu = shape.decode_mu(code);
        let images = exec.map_slice(&inverses, |(c, ainv)| {
            let m = c
                .mul(&mu)
                .and_then(|cm| cm.mul(ainv))
                .expect("shapes agree");
            shape.encode_mu(&m)
        });
        let mut orbit: Vec<u64> = images;
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen[x as usize] = true;
        }
        out.push((orbit[0], orbit.len()));
    }
    out
}

pub fn classify(p: u32, r: usize, n: usize) -> Result<ClassificationReport> {
    classify_with(p, r, n, Exec::default())
}

pub fn classify_with(p: u32, r: usize, n: usize, exec: Exec) -> Result<ClassificationReport> {
    let shape = Shape::new(p, r, n);
    let survivors = scan_camina_b_with(p, r, n, exec)?;
    let orbits = b_orbits_with(&survivors, p, r, n, exec)?;
    let mut classes = Vec::new();
    for orbit in &orbits {
        let b = shape.b_vectors(orbit.representative);
        let stab = stabilizer_with(&b, p, r, n, exec)?;
        for (mu_code, mu_size) in mu_orbits(&shape, &stab, exec) {
            let datum = shape.datum(orbit.representative, mu_code);
            let report = datum.subgroup_report();
            let triple = invariant_triple(&datum)?;
            classes.push(OrbitRecord {
                orbit_size: orbit.size as u128 * mu_size as u128,
                b_orbit_size: orbit.size,
                mu_orbit_size: mu_size,
                report,
                triple,
                class_count: (p as u128).pow(n as u32) + (p as u128).pow(r as u32) - 1,
                representative: datum,
            });
        }
    }
    classes.sort_by_key(|c| {
        (
            c.mho1_order(),
            c.report.omega1_abelian,
            shape.b_code_of(&c.representative),
            shape.encode_mu(&c.representative.mu),
        )
    });

    let mut brauer_pairs = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (a, b) = (&classes[i].representative, &classes[j].representative);
            let condition = check_main_theorem(a, b)?;
            let nenciu = check_nenciu(a, b)?.is_some();
            debug_assert_eq!(condition, nenciu);
            if condition {
                brauer_pairs.push((i, j));
            }
        }
    }
    Ok(ClassificationReport {
        p,
        r,
        n,
        survivors: survivors.len(),
        b_orbits: orbits,
        classes,
        brauer_pairs,
    })
}
