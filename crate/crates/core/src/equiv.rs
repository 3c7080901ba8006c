//! Backtracking search for linear equivalences between two data.
//!
//! An equivalence from `P` to `Q` is a pair of invertible matrices `(A, C)`
//! with `C B_P(x, y) = B_Q(Ax, Ay)` for the commutator forms and, when power
//! data is included, `C mu_P = mu_Q A`. The search fixes the columns of `A`
//! one at a time; each new column adds linear constraints `C v = w` that are
//! kept in echelon form, so an inconsistent or rank-dropping partial choice
//! is rejected as soon as it appears.

use std::ops::ControlFlow;

use crate::fpla::{inv_mod, FpMat, FpVec};
use crate::group::GroupDatum;
use crate::par::Exec;

/// Linear constraints `C v_k = w_k` on an unknown invertible `n x n` matrix.
#[derive(Clone, Debug)]
pub struct Pairing {
    p: u32,
    n: usize,
    /// reduced constraints: `v` has a 1 at `pivot` and zeros at earlier pivots
    rows: Vec<(Vec<u32>, Vec<u32>, usize)>,
    /// echelon basis of the `w` span, for the rank check
    w_basis: Vec<(Vec<u32>, usize)>,
}

fn axpy(dst: &mut [u32], k: u32, src: &[u32], p: u32) {
    // dst -= k * src
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u64 + (p - k) as u64 * s as u64) % p as u64) as u32;
    }
}

fn normalize(v: &mut [u32], w: Option<&mut [u32]>, p: u32) -> Option<usize> {
    let piv = v.iter().position(|&x| x != 0)?;
    let inv = inv_mod(v[piv], p);
    for x in v.iter_mut() {
        *x = (*x as u64 * inv as u64 % p as u64) as u32;
    }
    if let Some(w) = w {
        for x in w.iter_mut() {
            *x = (*x as u64 * inv as u64 % p as u64) as u32;
        }
    }
    Some(piv)
}

impl Pairing {
    pub fn new(p: u32, n: usize) -> Self {
        Pairing {
            p,
            n,
            rows: Vec::new(),
            w_basis: Vec::new(),
        }
    }

    /// Adds `C v = w`; false if no invertible `C` satisfies all constraints.
    pub fn add(&mut self, v: &[u32], w: &[u32]) -> bool {
        let p = self.p;
        let mut v = v.to_vec();
        let mut w = w.to_vec();
        for (bv, bw, piv) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                axpy(&mut v, c, bv, p);
                axpy(&mut w, c, bw, p);
            }
        }
        let Some(piv) = normalize(&mut v, Some(&mut w), p) else {
            return w.iter().all(|&x| x == 0);
        };
        // w must be independent of the current image
        let mut wr = w.clone();
        for (bw, wp) in &self.w_basis {
            let c = wr[*wp];
            if c != 0 {
                axpy(&mut wr, c, bw, p);
            }
        }
        let Some(wpiv) = normalize(&mut wr, None, p) else {
            return false;
        };
        // keep the v-rows reduced at the new pivot
        for (bv, bw, _) in self.rows.iter_mut() {
            let c = bv[piv];
            if c != 0 {
                axpy(bv, c, &v, p);
                axpy(bw, c, &w, p);
            }
        }
        for (bw, _) in self.w_basis.iter_mut() {
            let c = bw[wpiv];
            if c != 0 {
                axpy(bw, c, &wr, p);
            }
        }
        self.rows.push((v, w, piv));
        self.w_basis.push((wr, wpiv));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// An invertible `C` meeting every constraint. Directions not yet
    /// constrained are sent to the least standard vectors outside the image.
    pub fn solve(&self) -> FpMat {
        let mut full = self.clone();
        for k in 0..self.n {
            if full.rank() == self.n {
                break;
            }
            let e = FpVec::unit(self.n, k).0;
            let mut probe = full.clone();
            // v = e_k is free iff it reduces to nonzero
            let mut v = e.clone();
            for (bv, _, piv) in &full.rows {
                let c = v[*piv];
                if c != 0 {
                    axpy(&mut v, c, bv, self.p);
                }
            }
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            for t in 0..self.n {
                if probe.add(&e, &FpVec::unit(self.n, t).0) {
                    break;
                }
                probe = full.clone();
            }
            full = probe;
        }
        debug_assert_eq!(full.rank(), self.n);
        let vs: Vec<FpVec> = full.rows.iter().map(|(v, _, _)| FpVec(v.clone())).collect();
        let ws: Vec<FpVec> = full.rows.iter().map(|(_, w, _)| FpVec(w.clone())).collect();
        let vm = FpMat::from_columns(self.p, self.n, &vs);
        let wm = FpMat::from_columns(self.p, self.n, &ws);
        wm.mul(&vm.inverse().expect("pivot rows are independent"))
            .expect("square")
    }
}

/// One equivalence `(A, C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equivalence {
    pub a: FpMat,
    pub c: FpMat,
}

/// Search configuration.
pub struct EquivSearch<'a> {
    pub from: &'a GroupDatum,
    pub to: &'a GroupDatum,
    /// also impose `C mu_P = mu_Q A`
    pub with_mu: bool,
}

struct Node {
    cols: Vec<Vec<u32>>,
    /// echelon basis of the chosen columns
    span: Vec<(Vec<u32>, usize)>,
    pairing: Pairing,
}

impl<'a> EquivSearch<'a> {
    pub fn new(from: &'a GroupDatum, to: &'a GroupDatum, with_mu: bool) -> Self {
        assert_eq!(from.params(), to.params());
        EquivSearch { from, to, with_mu }
    }

    fn root(&self) -> Node {
        Node {
            cols: Vec::new(),
            span: Vec::new(),
            pairing: Pairing::new(self.from.p, self.from.n),
        }
    }

    fn candidates(&self, node: &Node) -> Vec<Vec<u32>> {
        let (p, r) = (self.from.p, self.from.r);
        let total = (p as u64).pow(r as u32);
        (1..total)
            .map(|i| FpVec::from_index(i, r, p).0)
            .filter(|x| {
                let mut x = x.clone();
                for (b, piv) in &node.span {
                    let c = x[*piv];
                    if c != 0 {
                        axpy(&mut x, c, b, p);
                    }
                }
                x.iter().any(|&v| v != 0)
            })
            .collect()
    }

    /// Extends `node` with column `x`, or `None` if a constraint fails.
    fn extend(&self, node: &Node, x: &[u32]) -> Option<Node> {
        let p = self.from.p;
        let k = node.cols.len();
        let mut pairing = node.pairing.clone();
        for (j, col) in node.cols.iter().enumerate() {
            let v = &self.from.b_at(k, j).0;
            let w = self.to.commutator_form(x, col);
            if !pairing.add(v, &w.0) {
                return None;
            }
        }
        if self.with_mu {
            let v = self.from.mu.column(k);
            let w = self.to.mu.apply(x);
            if !pairing.add(&v.0, &w.0) {
                return None;
            }
        }
        let mut span = node.span.clone();
        let mut red = x.to_vec();
        for (b, piv) in &span {
            let c = red[*piv];
            if c != 0 {
                axpy(&mut red, c, b, p);
            }
        }
        let piv = normalize(&mut red, None, p).expect("candidate is independent");
        for (b, _) in span.iter_mut() {
            let c = b[piv];
            if c != 0 {
                axpy(b, c, &red, p);
            }
        }
        span.push((red, piv));
        let mut cols = node.cols.clone();
        cols.push(x.to_vec());
        Some(Node {
            cols,
            span,
            pairing,
        })
    }

    fn finish(&self, node: &Node) -> Equivalence {
        let cols: Vec<FpVec> = node.cols.iter().map(|c| FpVec(c.clone())).collect();
        Equivalence {
            a: FpMat::from_columns(self.from.p, self.from.r, &cols),
            c: node.pairing.solve(),
        }
    }

    fn walk<F>(&self, node: &Node, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Equivalence) -> ControlFlow<()>,
    {
        if node.cols.len() == self.from.r {
            return visit(self.finish(node));
        }
        for x in self.candidates(node) {
            if let Some(child) = self.extend(node, &x) {
                self.walk(&child, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// First equivalence in canonical order (columns by vector index).
    pub fn first(&self) -> Option<Equivalence> {
        let mut found = None;
        let _ = self.walk(&self.root(), &mut |eq| {
            found = Some(eq);
            ControlFlow::Break(())
        });
        found
    }

    /// Every equivalence, in canonical order. The subtrees below the first
    /// column are distributed according to `exec`.
    ///
    /// For `from == to` this is the automorphism group of the data.
    pub fn all(&self, exec: Exec) -> Vec<Equivalence> {
        let root = self.root();
        let firsts = self.candidates(&root);
        exec.map_slice(&firsts, |x| {
            let mut out = Vec::new();
            if let Some(child) = self.extend(&root, x) {
                let _ = self.walk(&child, &mut |eq| {
                    out.push(eq);
                    ControlFlow::Continue(())
                });
            }
            out
        })
        .concat()
    }
}

/// Checks `C B_P(x, y) = B_Q(Ax, Ay)` on basis pairs and, optionally,
/// `C mu_P = mu_Q A`.
pub fn is_equivalence(from: &GroupDatum, to: &GroupDatum, eq: &Equivalence, with_mu: bool) -> bool {
    if from.params() != to.params() || !eq.a.is_invertible() || !eq.c.is_invertible() {
        return false;
    }
    let cols: Vec<FpVec> = (0..from.r).map(|i| eq.a.column(i)).collect();
    let forms = crate::group::pairs(from.r)
        .all(|(i, j)| eq.c.apply(&from.b_at(i, j).0) == to.commutator_form(&cols[i].0, &cols[j].0));
    let powers = !with_mu || eq.c.mul(&from.mu).ok() == to.mu.mul(&eq.a).ok();
    forms && powers
}

/// The datum obtained by moving `g` along `(A, C)`: `B'(x, y) = C B(A^-1 x, A^-1 y)`
/// and `mu' = C mu A^-1`, so that `(A, C)` is an equivalence from `g` to the result.
pub fn transport(g: &GroupDatum, a: &FpMat, c: &FpMat) -> Option<GroupDatum> {
    let ainv = a.inverse()?;
    if !c.is_invertible() {
        return None;
    }
    let mut out = g.clone();
    let cols: Vec<FpVec> = (0..g.r).map(|i| ainv.column(i)).collect();
    for (i, j) in crate::group::pairs(g.r) {
        out.b[crate::group::pair_index(i, j)] =
            c.apply(&g.commutator_form(&cols[i].0, &cols[j].0).0);
    }
    out.mu = c.mul(&g.mu).ok()?.mul(&ainv).ok()?;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{extraspecial, field_camina, Variant};
    use crate::fpla::{gl_order, FpMat};

    #[test]
    fn pairing_rejects_inconsistency() {
        let mut pr = Pairing::new(3, 2);
        assert!(pr.add(&[1, 0], &[0, 1]));
        assert!(pr.add(&[2, 0], &[0, 2]));
        assert!(!pr.add(&[1, 0], &[1, 0]));
        // rank drop: second direction may not land on the first image
        assert!(!pr.add(&[0, 1], &[0, 2]));
        assert!(pr.add(&[0, 1], &[1, 1]));
        let c = pr.solve();
        assert_eq!(c, FpMat::from_rows(3, &[&[0, 1], &[1, 1]]));
    }

    #[test]
    fn pairing_extends_to_invertible() {
        let mut pr = Pairing::new(3, 3);
        assert!(pr.add(&[0, 1, 0], &[1, 0, 0]));
        let c = pr.solve();
        assert!(c.is_invertible());
        assert_eq!(c.apply(&[0, 1, 0]), FpVec(vec![1, 0, 0]));
    }

    #[test]
    fn extraspecial_automorphisms() {
        // (A, c) with A^T J A = c J: |GSp(2, 3)| = |GL(2, 3)| = 48
        let g = extraspecial(3, 1, Variant::ExpP);
        let all = EquivSearch::new(&g, &g, false).all(Exec::Sequential);
        assert_eq!(all.len() as u128, gl_order(2, 3));
        assert!(all.iter().all(|eq| is_equivalence(&g, &g, eq, false)));
        assert_eq!(all, EquivSearch::new(&g, &g, false).all(Exec::Parallel));
    }

    #[test]
    fn transport_gives_equivalent_data() {
        let g = field_camina(3, 2).unwrap();
        let a = FpMat::from_rows(
            3,
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]],
        );
        let c = FpMat::from_rows(3, &[&[1, 1], &[0, 2]]);
        let h = transport(&g, &a, &c).unwrap();
        assert!(h.is_camina());
        let eq = Equivalence { a, c };
        assert!(is_equivalence(&g, &h, &eq, true));
        let found = EquivSearch::new(&g, &h, true).first().unwrap();
        assert!(is_equivalence(&g, &h, &found, true));
    }

    #[test]
    fn exponent_mismatch_has_no_equivalence() {
        let a = extraspecial(3, 1, Variant::ExpP);
        let b = extraspecial(3, 1, Variant::ExpP2);
        assert!(EquivSearch::new(&a, &b, true).first().is_none());
        assert!(EquivSearch::new(&a, &b, false).first().is_some());
    }
}
