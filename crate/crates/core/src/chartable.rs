//! Character tables and power maps of Camina groups of class 2.
//!
//! For a Camina datum with `r = 2m` the group is a VZ-group: its classes are
//! the identity, the `p^n - 1` nontrivial central elements, and the
//! `p^r - 1` nontrivial cosets of `G'`. The irreducible characters are the
//! `p^r` linear characters of `G/G'` and one character of degree `p^m` for
//! each nontrivial character of `G'`, vanishing off the center.

use std::collections::HashMap;
use std::fmt;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fpla::{self, FpVec};
use crate::group::{Element, GroupDatum, IndexedGroup};
use crate::par::Exec;

/// Variant order gives the canonical class order: identity, central
/// classes by `z`, then noncentral cosets by `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Identity,
    Central(FpVec),
    /// The whole coset `eG'`.
    Noncentral(FpVec),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLabel {
    /// `e -> zeta^(sigma . e)`
    Linear(FpVec),
    /// degree `p^m`, `zeta^(lambda . z)` times the degree on the center
    Nonlinear(FpVec),
}

impl ClassLabel {
    /// Label of the class containing `x` (valid for Camina data).
    pub fn of(x: &Element) -> ClassLabel {
        if !x.e.is_zero() {
            ClassLabel::Noncentral(x.e.clone())
        } else if !x.z.is_zero() {
            ClassLabel::Central(x.z.clone())
        } else {
            ClassLabel::Identity
        }
    }

    /// A representative with zero central part.
    pub fn representative(&self, g: &GroupDatum) -> Element {
        match self {
            ClassLabel::Identity => g.identity(),
            ClassLabel::Central(z) => Element::new(FpVec::zeros(g.r), z.clone()),
            ClassLabel::Noncentral(e) => Element::new(e.clone(), FpVec::zeros(g.n)),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Identity => write!(f, "1"),
            ClassLabel::Central(z) => write!(f, "C{z}"),
            ClassLabel::Noncentral(e) => write!(f, "N{e}"),
        }
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Linear(s) => write!(f, "L{s}"),
            CharLabel::Nonlinear(l) => write!(f, "X{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub p: u32,
    pub order: u64,
    pub classes: Vec<ClassLabel>,
    pub chars: Vec<CharLabel>,
    /// `values[chi][class]`
    pub values: Vec<Vec<Cyclotomic>>,
    pub class_sizes: Vec<u64>,
    /// `power_maps[k][c]` is the class of `x^k` for `x` in class `c`, `0 <= k < p^2`.
    pub power_maps: Vec<Vec<usize>>,
}

/// First failing pair found by [`CharacterTable::check_orthogonality`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthogonalityFailure {
    Rows(usize, usize),
    Columns(usize, usize),
}

impl fmt::Display for OrthogonalityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrthogonalityFailure::Rows(a, b) => write!(f, "row orthogonality fails at ({a}, {b})"),
            OrthogonalityFailure::Columns(a, b) => {
                write!(f, "column orthogonality fails at ({a}, {b})")
            }
        }
    }
}

pub fn build_table(g: &GroupDatum) -> Result<CharacterTable> {
    if !g.is_camina() {
        return Err(Error::NotCamina);
    }
    let p = g.p;
    let m = g.r / 2;
    let degree = (p as i64).pow(m as u32);

    let mut classes = vec![ClassLabel::Identity];
    classes.extend(
        fpla::all_vectors(g.n, p)
            .into_iter()
            .skip(1)
            .map(ClassLabel::Central),
    );
    classes.extend(
        fpla::all_vectors(g.r, p)
            .into_iter()
            .skip(1)
            .map(ClassLabel::Noncentral),
    );
    let mut chars: Vec<CharLabel> = fpla::all_vectors(g.r, p)
        .into_iter()
        .map(CharLabel::Linear)
        .collect();
    chars.extend(
        fpla::all_vectors(g.n, p)
            .into_iter()
            .skip(1)
            .map(CharLabel::Nonlinear),
    );

    let values = chars
        .iter()
        .map(|chi| {
            classes
                .iter()
                .map(|c| match (chi, c) {
                    (CharLabel::Linear(_), ClassLabel::Identity | ClassLabel::Central(_)) => {
                        Cyclotomic::one(p)
                    }
                    (CharLabel::Linear(s), ClassLabel::Noncentral(e)) => {
                        Cyclotomic::zeta_pow(p, s.dot(e, p) as i64)
                    }
                    (CharLabel::Nonlinear(_), ClassLabel::Identity) => {
                        Cyclotomic::from_int(p, degree)
                    }
                    (CharLabel::Nonlinear(l), ClassLabel::Central(z)) => {
                        Cyclotomic::zeta_pow(p, l.dot(z, p) as i64).scale(degree)
                    }
                    (CharLabel::Nonlinear(_), ClassLabel::Noncentral(_)) => Cyclotomic::zero(p),
                })
                .collect()
        })
        .collect();

    let coset = (p as u64).pow(g.n as u32);
    let class_sizes = classes
        .iter()
        .map(|c| match c {
            ClassLabel::Noncentral(_) => coset,
            _ => 1,
        })
        .collect();

    let index: HashMap<&ClassLabel, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let power_maps = (0..(p as i64) * (p as i64))
        .map(|k| {
            classes
                .iter()
                .map(|c| {
                    let x = g.power(&c.representative(g), k);
                    index[&ClassLabel::of(&x)]
                })
                .collect()
        })
        .collect();

    Ok(CharacterTable {
        p,
        order: g.order() as u64,
        classes,
        chars,
        values,
        class_sizes,
        power_maps,
    })
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Character degrees, i.e. the identity column.
    pub fn degrees(&self) -> Vec<i64> {
        self.values.iter().map(|row| row[0].coeffs[0]).collect()
    }

    pub fn class_index(&self, label: &ClassLabel) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn char_index(&self, label: &CharLabel) -> Option<usize> {
        self.chars.iter().position(|c| c == label)
    }

    /// Exact row and column orthogonality.
    pub fn check_orthogonality(&self) -> std::result::Result<(), OrthogonalityFailure> {
        self.check_orthogonality_with(Exec::default())
    }

    pub fn check_orthogonality_with(
        &self,
        exec: Exec,
    ) -> std::result::Result<(), OrthogonalityFailure> {
        let p = self.p;
        let h = self.classes.len();
        if self.values.len() != h || self.values.iter().any(|row| row.len() != h) {
            return Err(OrthogonalityFailure::Rows(0, 0));
        }
        let conj: Vec<Vec<Cyclotomic>> = self
            .values
            .iter()
            .map(|row| row.iter().map(Cyclotomic::conj).collect())
            .collect();
        let order = self.order as i64;

        let row_fail = exec.map_range(h, |a| {
            (a..h).find(|&b| {
                let mut s = Cyclotomic::zero(p);
                for c in 0..h {
                    s = &s + &(&self.values[a][c] * &conj[b][c]).scale(self.class_sizes[c] as i64);
                }
                s != Cyclotomic::from_int(p, if a == b { order } else { 0 })
            })
        });
        if let Some((a, b)) = row_fail
            .iter()
            .enumerate()
            .find_map(|(a, b)| b.map(|b| (a, b)))
        {
            return Err(OrthogonalityFailure::Rows(a, b));
        }

        let col_fail = exec.map_range(h, |c| {
            (c..h).find(|&d| {
                let mut s = Cyclotomic::zero(p);
                for chi in 0..h {
                    s = &s + &(&self.values[chi][c] * &conj[chi][d]);
                }
                let expect = if c == d {
                    order / self.class_sizes[c] as i64
                } else {
                    0
                };
                s != Cyclotomic::from_int(p, expect)
            })
        });
        if let Some((c, d)) = col_fail
            .iter()
            .enumerate()
            .find_map(|(c, d)| d.map(|d| (c, d)))
        {
            return Err(OrthogonalityFailure::Columns(c, d));
        }
        Ok(())
    }

    /// `<chi, psi>` times `|G|`, i.e. `sum_c |c| chi(c) conj(psi(c))`.
    pub fn scaled_inner_product(&self, chi: &[Cyclotomic], psi: &[Cyclotomic]) -> Cyclotomic {
        let mut s = Cyclotomic::zero(self.p);
        for (c, (a, b)) in chi.iter().zip(psi).enumerate() {
            s = &s + &(a * &b.conj()).scale(self.class_sizes[c] as i64);
        }
        s
    }
}

/// The class function induced from the central character `lambda`,
/// computed on the concrete group with brute-force conjugation and the
/// induction formula. Values are returned in canonical class order.
pub fn induced_from_center_oracle(g: &GroupDatum, lambda: &FpVec) -> Result<Vec<Cyclotomic>> {
    if !g.is_camina() {
        return Err(Error::NotCamina);
    }
    if lambda.dim() != g.n || lambda.is_zero() {
        return Err(Error::InvalidDatum(
            "lambda must be a nonzero functional on G'".into(),
        ));
    }
    let p = g.p;
    let exec = Exec::default();
    let t = IndexedGroup::build(g, exec)?;
    let order = t.order;
    let center: Vec<bool> = exec.map_range(order as usize, |x| {
        (0..order).all(|y| t.mul(x as u32, y) == t.mul(y, x as u32))
    });
    let center_size = center.iter().filter(|&&c| c).count() as i64;

    let mut out: Vec<(ClassLabel, Cyclotomic)> = t
        .conjugacy_classes(exec)
        .into_iter()
        .map(|class| {
            let rep = class[0];
            let mut counts = vec![0i64; p as usize];
            for h in 0..order {
                let c = t.conjugate(rep, h);
                if center[c as usize] {
                    let x = g.element_at(c as u64);
                    counts[lambda.dot(&x.z, p) as usize] += 1;
                }
            }
            let value = Cyclotomic::from_cyclic(p, &counts)
                .div_exact(center_size)
                .expect("induction formula is integral");
            (ClassLabel::of(&g.element_at(rep as u64)), value)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, v)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_mu, extraspecial, field_camina, with_mu, Variant};

    #[test]
    fn extraspecial_27_table() {
        let g = extraspecial(3, 1, Variant::ExpP);
        let t = build_table(&g).unwrap();
        assert_eq!(t.class_count(), 11);
        let mut deg = t.degrees();
        deg.sort();
        assert_eq!(deg, vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3]);
        assert!(t.check_orthogonality().is_ok());
        // <chi_lambda, chi_lambda> = (9 + 9 + 9) / 27
        let chi = t.char_index(&CharLabel::Nonlinear(FpVec(vec![1]))).unwrap();
        assert_eq!(
            t.scaled_inner_product(&t.values[chi], &t.values[chi]),
            Cyclotomic::from_int(3, 27)
        );
        let c = t.class_index(&ClassLabel::Central(FpVec(vec![1]))).unwrap();
        assert_eq!(t.values[chi][c].to_string(), "0+3z");
    }

    #[test]
    fn central_classes_power_to_identity() {
        let g = extraspecial(3, 1, Variant::ExpP2);
        let t = build_table(&g).unwrap();
        for (i, c) in t.classes.iter().enumerate() {
            if let ClassLabel::Central(_) = c {
                assert_eq!(t.power_maps[3][i], 0);
            }
        }
        assert!((0..t.class_count()).all(|i| t.power_maps[1][i] == i));
    }

    #[test]
    fn perturbed_table_fails() {
        let g = extraspecial(3, 1, Variant::ExpP);
        let mut t = build_table(&g).unwrap();
        t.values[3][4] = &t.values[3][4] + &Cyclotomic::one(3);
        assert!(t.check_orthogonality().is_err());
    }

    #[test]
    fn induced_row_matches() {
        let g = extraspecial(3, 1, Variant::ExpP);
        let t = build_table(&g).unwrap();
        let row = induced_from_center_oracle(&g, &FpVec(vec![1])).unwrap();
        let z = Cyclotomic::zeta_pow(3, 1);
        assert_eq!(row[0], Cyclotomic::from_int(3, 9));
        assert_eq!(row[1], z.scale(9));
        assert_eq!(row[2], (&z * &z).scale(9));
        assert!(row[3..].iter().all(Cyclotomic::is_zero));
        let chi = t.char_index(&CharLabel::Nonlinear(FpVec(vec![1]))).unwrap();
        let scaled: Vec<Cyclotomic> = t.values[chi].iter().map(|v| v.scale(3)).collect();
        assert_eq!(row, scaled);
        // <lambda^G, lambda^G> = p^(2m)
        assert_eq!(
            t.scaled_inner_product(&row, &row),
            Cyclotomic::from_int(3, 9 * 27)
        );
        let other = induced_from_center_oracle(&g, &FpVec(vec![2])).unwrap();
        assert_ne!(row, other);
    }

    #[test]
    fn not_camina_rejected() {
        assert_eq!(
            build_table(&GroupDatum::zero(3, 2, 1)),
            Err(Error::NotCamina)
        );
    }

    #[test]
    fn rank_two_mu_power_map() {
        let g = with_mu(&field_camina(3, 2).unwrap(), &canonical_mu(3, 2, 4, 2)).unwrap();
        let t = build_table(&g).unwrap();
        assert_eq!(t.class_count(), 89);
        for (i, c) in t.classes.iter().enumerate() {
            if let ClassLabel::Noncentral(e) = c {
                let image = g.nu(&c.representative(&g));
                let expect = if image.is_zero() {
                    ClassLabel::Identity
                } else {
                    ClassLabel::Central(image)
                };
                assert_eq!(t.classes[t.power_maps[3][i]], expect, "class {e}");
            }
        }
    }
}
