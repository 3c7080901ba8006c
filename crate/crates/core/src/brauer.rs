//! Deciding Brauer pairs and isomorphism for Camina data.
//!
//! Three routes decide whether two Camina groups `P`, `Q` of class 2 share
//! character tables and power maps:
//!
//! * [`check_main_theorem`] compares `(|P:P'|, |P'|, |mho_1(P)|)`;
//! * [`check_nenciu`] builds isomorphisms `alpha: P/P' -> Q/Q'` and
//!   `beta: Z(P) -> Z(Q)` with `nu_Q alpha = beta nu_P`;
//! * [`check_direct`] searches for a simultaneous bijection of classes and
//!   characters on the explicit tables.
//!
//! [`is_isomorphic`] decides whether the groups themselves agree, which is
//! what separates a Brauer pair from a pair of equal groups.

mod direct;

pub use direct::{check_direct, match_tables, DirectWitness};

use crate::equiv::{is_equivalence, EquivSearch, Equivalence};
use crate::error::{Error, Result};
use crate::fpla::{self, FpMat, FpVec};
use crate::group::GroupDatum;

/// `(|P:P'|, |P'|, |mho_1(P)|)`.
pub fn invariant_triple(g: &GroupDatum) -> Result<(u128, u128, u128)> {
    if !g.is_camina() {
        return Err(Error::NotCamina);
    }
    let p = g.p as u128;
    Ok((
        p.pow(g.r as u32),
        p.pow(g.n as u32),
        p.pow(g.mu.rank() as u32),
    ))
}

/// The Brauer-pair condition on invariants. Whether `P` and `Q` are
/// isomorphic is a separate question, see [`is_isomorphic`].
pub fn check_main_theorem(p: &GroupDatum, q: &GroupDatum) -> Result<bool> {
    if p.p != q.p {
        return Err(Error::PrimeMismatch(p.p, q.p));
    }
    Ok(invariant_triple(p)? == invariant_triple(q)?)
}

/// Matrices of `alpha: P/P' -> Q/Q'` (`r x r`) and `beta: Z(P) -> Z(Q)` (`n x n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NenciuWitness {
    pub a: FpMat,
    pub c: FpMat,
}

impl NenciuWitness {
    /// `alpha phi_P = phi_Q beta`. For Camina groups `Z(P) = P'`, so the
    /// projection `phi: Z(P) -> P/P'` is the zero map and this always holds.
    pub fn phi_compatible(&self) -> bool {
        true
    }

    /// Replays the defining equations: both maps invertible and
    /// `C mu_P = mu_Q A`.
    pub fn verify(&self, p: &GroupDatum, q: &GroupDatum) -> bool {
        self.a.rows == p.r
            && self.c.rows == p.n
            && self.a.is_invertible()
            && self.c.is_invertible()
            && self.phi_compatible()
            && self.c.mul(&p.mu).ok() == q.mu.mul(&self.a).ok()
    }
}

/// Basis vectors `u_1..u_k` of a complement to `ker mu` on which `mu` is
/// injective: the standard vectors at the pivot columns of `mu`.
fn complement_basis(mu: &FpMat) -> Vec<FpVec> {
    let (_, pivots) = mu.rref();
    pivots.iter().map(|&j| FpVec::unit(mu.cols, j)).collect()
}

/// Extends independent vectors to a basis with standard vectors.
fn extend_to_basis(p: u32, dim: usize, vs: &[FpVec]) -> Vec<FpVec> {
    let mut basis = vs.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut trial = basis.clone();
        trial.push(FpVec::unit(dim, k));
        if FpMat::from_columns(p, dim, &trial).rank() == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Builds `(alpha, beta)` whenever `rank mu_P = rank mu_Q`.
///
/// Split `P/P' = Omega_1(P)/P' x A/P'` with `A` spanned by a complement of
/// `ker mu_P`; `nu_P` maps `A/P'` isomorphically onto `mho_1(P)`. Choose
/// `beta` on `mho_1(P)` sending `nu_P(u_i)` to `nu_Q(u'_i)`, extend it to all
/// of `P'`, then let `alpha` send `u_i` to `u'_i` and a basis of the kernel
/// of `mu_P` to one of `mu_Q`.
pub fn check_nenciu(p: &GroupDatum, q: &GroupDatum) -> Result<Option<NenciuWitness>> {
    if p.params() != q.params() {
        return Err(Error::ParameterMismatch(p.params(), q.params()));
    }
    if !p.is_camina() || !q.is_camina() {
        return Err(Error::NotCamina);
    }
    if p.mu.rank() != q.mu.rank() {
        return Ok(None);
    }
    let prime = p.p;
    let up = complement_basis(&p.mu);
    let uq = complement_basis(&q.mu);
    let wp: Vec<FpVec> = up.iter().map(|u| p.mu.apply(&u.0)).collect();
    let wq: Vec<FpVec> = uq.iter().map(|u| q.mu.apply(&u.0)).collect();

    let zp = extend_to_basis(prime, p.n, &wp);
    let zq = extend_to_basis(prime, q.n, &wq);
    let zp_inv = FpMat::from_columns(prime, p.n, &zp)
        .inverse()
        .expect("basis");
    let c = FpMat::from_columns(prime, q.n, &zq).mul(&zp_inv)?;

    let mut src = up.clone();
    src.extend(fpla::kernel_basis(&p.mu));
    let mut dst = uq.clone();
    dst.extend(fpla::kernel_basis(&q.mu));
    let src_inv = FpMat::from_columns(prime, p.r, &src)
        .inverse()
        .expect("complement plus kernel is a basis");
    let a = FpMat::from_columns(prime, q.r, &dst).mul(&src_inv)?;

    let w = NenciuWitness { a, c };
    debug_assert!(w.verify(p, q));
    Ok(Some(w))
}

/// Exhaustive search over `GL(r, p) x GL(n, p)` for `C mu_P = mu_Q A`.
/// Only sensible for tiny parameters; used to cross-check [`check_nenciu`].
pub fn nenciu_brute_force(p: &GroupDatum, q: &GroupDatum) -> Option<NenciuWitness> {
    let prime = p.p;
    let invertible = |d: usize| -> Vec<FpMat> {
        let count = (prime as u64).pow((d * d) as u32);
        (0..count)
            .map(|i| FpMat::new(prime, d, d, FpVec::from_index(i, d * d, prime).0).expect("shape"))
            .filter(|m| m.is_invertible())
            .collect()
    };
    let cs = invertible(p.n);
    invertible(p.r).into_iter().find_map(|a| {
        let rhs = q.mu.mul(&a).ok()?;
        cs.iter()
            .find(|c| c.mul(&p.mu).ok().as_ref() == Some(&rhs))
            .map(|c| NenciuWitness {
                a: a.clone(),
                c: c.clone(),
            })
    })
}

/// A group isomorphism `(e, z) -> (Ae, Cz + q(e))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub a: FpMat,
    pub c: FpMat,
    /// `q[index of e]`, present when the correction was solved for
    pub q: Option<Vec<FpVec>>,
}

impl IsoWitness {
    pub fn verify_linear(&self, p: &GroupDatum, q: &GroupDatum) -> bool {
        is_equivalence(
            p,
            q,
            &Equivalence {
                a: self.a.clone(),
                c: self.c.clone(),
            },
            true,
        )
    }
}

/// Largest `p^r` for which [`is_isomorphic`] also solves for the correction table.
pub const COBOUNDARY_LIMIT: u64 = 729;

/// Isomorphism test by backtracking over the columns of `A`.
pub fn is_isomorphic(p: &GroupDatum, q: &GroupDatum) -> Result<Option<IsoWitness>> {
    p.validate()?;
    q.validate()?;
    if p.params() != q.params() {
        return Ok(None);
    }
    // cheap invariants first
    let (rp, rq) = (p.subgroup_report(), q.subgroup_report());
    if rp != rq {
        return Ok(None);
    }
    let Some(eq) = EquivSearch::new(p, q, true).first() else {
        return Ok(None);
    };
    let correction = if (p.p as u64).pow(p.r as u32) <= COBOUNDARY_LIMIT {
        solve_coboundary(p, q, &eq.a, &eq.c)?
    } else {
        None
    };
    Ok(Some(IsoWitness {
        a: eq.a,
        c: eq.c,
        q: correction,
    }))
}

/// Solves `q(e + e') - q(e) - q(e') = f_Q(Ae, Ae') - C f_P(e, e')` for the
/// correction table, with `f` the full multiplication cocycle, then checks
/// that `(e, z) -> (Ae, Cz + q(e))` is a bijective homomorphism on every
/// pair of elements.
///
/// `Ok(None)` means the assembled map failed the final check.
pub fn solve_coboundary(
    p: &GroupDatum,
    q: &GroupDatum,
    a: &FpMat,
    c: &FpMat,
) -> Result<Option<Vec<FpVec>>> {
    if p.params() != q.params() {
        return Err(Error::ParameterMismatch(p.params(), q.params()));
    }
    p.guard("coboundary solver")?;
    let prime = p.p;
    let (r, n) = (p.r, p.n);
    let size = (prime as u64).pow(r as u32) as usize;
    let vecs: Vec<FpVec> = (0..size as u64)
        .map(|i| FpVec::from_index(i, r, prime))
        .collect();
    let images: Vec<FpVec> = vecs.iter().map(|e| a.apply(&e.0)).collect();

    // one system per central coordinate; unknown u stands for q(vecs[u + 1])
    let unknowns = size - 1;
    let mut systems: Vec<(Vec<u32>, Vec<u32>)> = vec![(Vec::new(), Vec::new()); n];
    for x in 0..size {
        for y in 0..size {
            let sum = vecs[x].add(&vecs[y], prime).to_index(prime) as usize;
            let rhs = q
                .cocycle(&images[x].0, &images[y].0)
                .sub(&c.apply(&p.cocycle(&vecs[x].0, &vecs[y].0).0), prime);
            let mut row = vec![0u32; unknowns];
            for (idx, coef) in [(sum, 1), (x, prime - 1), (y, prime - 1)] {
                if idx > 0 {
                    row[idx - 1] = (row[idx - 1] + coef) % prime;
                }
            }
            for (k, sys) in systems.iter_mut().enumerate() {
                sys.0.extend_from_slice(&row);
                sys.1.push(rhs.0[k]);
            }
        }
    }
    let mut table = vec![FpVec::zeros(n); size];
    for (k, (entries, rhs)) in systems.into_iter().enumerate() {
        let m = FpMat::new(prime, size * size, unknowns, entries)?;
        let Some(sol) = fpla::solve(&m, &FpVec(rhs))? else {
            return Err(Error::InconsistentCoboundary);
        };
        for u in 0..unknowns {
            table[u + 1].0[k] = sol.0[u];
        }
    }
    Ok(verify_isomorphism(p, q, a, c, &table).then_some(table))
}

/// Full check that `(e, z) -> (Ae, Cz + q(e))` is a bijective homomorphism.
pub fn verify_isomorphism(
    p: &GroupDatum,
    q: &GroupDatum,
    a: &FpMat,
    c: &FpMat,
    table: &[FpVec],
) -> bool {
    let prime = p.p;
    let map = |x: &crate::group::Element| {
        let idx = x.e.to_index(prime) as usize;
        crate::group::Element::new(a.apply(&x.e.0), c.apply(&x.z.0).add(&table[idx], prime))
    };
    let elems: Vec<_> = p.elements().collect();
    let imgs: Vec<_> = elems.iter().map(map).collect();
    let mut seen: Vec<u64> = imgs.iter().map(|y| q.element_index(y)).collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != elems.len() {
        return false;
    }
    crate::par::Exec::default().all_range(elems.len(), |i| {
        elems
            .iter()
            .zip(&imgs)
            .all(|(y, iy)| map(&p.mul_unchecked(&elems[i], y)) == q.mul_unchecked(&imgs[i], iy))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_mu, extraspecial, field_camina, with_mu, Variant};
    use crate::equiv::transport;

    fn order_729(k: usize) -> GroupDatum {
        with_mu(&field_camina(3, 2).unwrap(), &canonical_mu(3, 2, 4, k)).unwrap()
    }

    #[test]
    fn triples() {
        assert_eq!(
            invariant_triple(&extraspecial(3, 1, Variant::ExpP)).unwrap(),
            (9, 3, 1)
        );
        assert_eq!(
            invariant_triple(&extraspecial(3, 1, Variant::ExpP2)).unwrap(),
            (9, 3, 3)
        );
        assert_eq!(invariant_triple(&order_729(2)).unwrap(), (81, 9, 9));
        assert_eq!(
            invariant_triple(&GroupDatum::zero(3, 2, 1)),
            Err(Error::NotCamina)
        );
    }

    #[test]
    fn main_theorem_examples() {
        let a = extraspecial(3, 1, Variant::ExpP);
        let b = extraspecial(3, 1, Variant::ExpP2);
        assert!(!check_main_theorem(&a, &b).unwrap());
        assert!(check_main_theorem(&a, &a).unwrap());
        assert!(matches!(
            check_main_theorem(&a, &extraspecial(5, 1, Variant::ExpP)),
            Err(Error::PrimeMismatch(3, 5))
        ));
    }

    #[test]
    fn nenciu_examples() {
        let a = extraspecial(3, 1, Variant::ExpP);
        let w = check_nenciu(&a, &a).unwrap().unwrap();
        assert_eq!(w.a, FpMat::identity(3, 2));
        assert_eq!(w.c, FpMat::identity(3, 1));
        let b = extraspecial(3, 1, Variant::ExpP2);
        assert!(check_nenciu(&a, &b).unwrap().is_none());
        assert!(nenciu_brute_force(&a, &b).is_none());
        let g1 = order_729(1);
        let g2 = order_729(2);
        assert!(check_nenciu(&g1, &g2).unwrap().is_none());
        let h = transport(
            &g2,
            &FpMat::from_rows(
                3,
                &[&[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]],
            ),
            &FpMat::from_rows(3, &[&[1, 2], &[0, 1]]),
        )
        .unwrap();
        let w = check_nenciu(&g2, &h).unwrap().unwrap();
        assert!(w.verify(&g2, &h));
        assert!(check_nenciu(&a, &g1).is_err());
    }

    #[test]
    fn nenciu_matches_brute_force_r2_n1() {
        // every mu in F_3^{1x2} over the Heisenberg commutator data
        let base = extraspecial(3, 1, Variant::ExpP);
        let mus: Vec<FpMat> = (0..9)
            .map(|i| FpMat::new(3, 1, 2, FpVec::from_index(i, 2, 3).0).unwrap())
            .collect();
        for mp in &mus {
            for mq in &mus {
                let p = with_mu(&base, mp).unwrap();
                let q = with_mu(&base, mq).unwrap();
                let fast = check_nenciu(&p, &q).unwrap();
                let slow = nenciu_brute_force(&p, &q);
                assert_eq!(fast.is_some(), slow.is_some(), "{mp} vs {mq}");
                if let Some(w) = fast {
                    assert!(w.verify(&p, &q));
                }
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let g = order_729(2);
        let perm = FpMat::from_rows(
            3,
            &[&[0, 1, 0, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 0, 1, 0]],
        );
        let h = transport(&g, &perm, &FpMat::identity(3, 2)).unwrap();
        let w = is_isomorphic(&g, &h).unwrap().unwrap();
        assert!(w.verify_linear(&g, &h));
        assert!(w.q.is_some());

        let a = extraspecial(3, 1, Variant::ExpP);
        let b = extraspecial(3, 1, Variant::ExpP2);
        assert!(is_isomorphic(&a, &b).unwrap().is_none());
        assert!(is_isomorphic(&order_729(1), &order_729(2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn coboundary_identity_is_zero() {
        let g = order_729(1);
        let id4 = FpMat::identity(3, 4);
        let id2 = FpMat::identity(3, 2);
        let q = solve_coboundary(&g, &g, &id4, &id2).unwrap().unwrap();
        assert!(q.iter().all(FpVec::is_zero));
    }

    #[test]
    fn coboundary_for_permuted_basis() {
        let g = extraspecial(3, 2, Variant::ExpP2);
        let perm = FpMat::from_rows(
            3,
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        );
        let c = FpMat::identity(3, 1);
        let h = transport(&g, &perm, &c).unwrap();
        let q = solve_coboundary(&g, &h, &perm, &c).unwrap().unwrap();
        assert!(q.iter().all(FpVec::is_zero));
    }

    #[test]
    fn coboundary_for_shear() {
        // a non-permutation change of basis needs a nonzero correction
        let g = extraspecial(3, 1, Variant::ExpP);
        let a = FpMat::from_rows(3, &[&[1, 1], &[0, 1]]);
        let c = FpMat::identity(3, 1);
        let h = transport(&g, &a, &c).unwrap();
        let q = solve_coboundary(&g, &h, &a, &c).unwrap().unwrap();
        assert!(verify_isomorphism(&g, &h, &a, &c, &q));
        assert!(q.iter().any(|v| !v.is_zero()));
    }
}
