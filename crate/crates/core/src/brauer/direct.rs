//! Matching two explicit character tables.
//!
//! Classes and characters are first colored by iterated fingerprints (class
//! size, value multisets, and the colors reached through the power maps,
//! forwards and backwards). The search then fixes classes in canonical
//! order, trying only targets of the same color. Every fixed pair refines
//! the characters by the values they take there; the refinement on the two
//! sides must stay balanced. Once all classes are fixed the character cells
//! are singletons and give the character bijection.

use std::collections::HashMap;

use crate::chartable::{build_table, CharLabel, CharacterTable, ClassLabel};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::GroupDatum;

/// `rho[c]` is the class of `Q` matched with class `c` of `P`; `tau` the same
/// for characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectWitness {
    pub rho: Vec<usize>,
    pub tau: Vec<usize>,
}

impl DirectWitness {
    /// Replays the witness against both tables.
    pub fn verify(&self, tp: &CharacterTable, tq: &CharacterTable, use_power_maps: bool) -> bool {
        let h = tp.class_count();
        if tq.class_count() != h || self.rho.len() != h || self.tau.len() != h {
            return false;
        }
        let mut seen = vec![false; h];
        for &d in &self.rho {
            if std::mem::replace(&mut seen[d], true) {
                return false;
            }
        }
        let mut seen = vec![false; h];
        for &d in &self.tau {
            if std::mem::replace(&mut seen[d], true) {
                return false;
            }
        }
        let values = (0..h)
            .all(|chi| (0..h).all(|c| tq.values[self.tau[chi]][self.rho[c]] == tp.values[chi][c]));
        let sizes = (0..h).all(|c| tp.class_sizes[c] == tq.class_sizes[self.rho[c]]);
        let powers = !use_power_maps
            || (tp.power_maps.len() == tq.power_maps.len()
                && tp
                    .power_maps
                    .iter()
                    .zip(&tq.power_maps)
                    .all(|(mp, mq)| (0..h).all(|c| self.rho[mp[c]] == mq[self.rho[c]])));
        values && sizes && powers
    }

    pub fn class_pairs<'a>(
        &'a self,
        tp: &'a CharacterTable,
        tq: &'a CharacterTable,
    ) -> impl Iterator<Item = (&'a ClassLabel, &'a ClassLabel)> + 'a {
        self.rho
            .iter()
            .enumerate()
            .map(move |(c, &d)| (&tp.classes[c], &tq.classes[d]))
    }

    pub fn char_pairs<'a>(
        &'a self,
        tp: &'a CharacterTable,
        tq: &'a CharacterTable,
    ) -> impl Iterator<Item = (&'a CharLabel, &'a CharLabel)> + 'a {
        self.tau
            .iter()
            .enumerate()
            .map(move |(x, &y)| (&tp.chars[x], &tq.chars[y]))
    }
}

/// Both tables with values replaced by small integer ids.
struct Interned {
    h: usize,
    vp: Vec<Vec<u32>>,
    vq: Vec<Vec<u32>>,
}

fn intern(tp: &CharacterTable, tq: &CharacterTable) -> Interned {
    let mut ids: HashMap<Cyclotomic, u32> = HashMap::new();
    let mut conv = |t: &CharacterTable| -> Vec<Vec<u32>> {
        t.values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        let next = ids.len() as u32;
                        *ids.entry(v.clone()).or_insert(next)
                    })
                    .collect()
            })
            .collect()
    };
    let vp = conv(tp);
    let vq = conv(tq);
    Interned {
        h: tp.class_count(),
        vp,
        vq,
    }
}

/// Assigns dense ids to keys, shared between the `P` and `Q` sides.
fn recolor<K: std::hash::Hash + Eq + Clone + Ord>(kp: &[K], kq: &[K]) -> (Vec<u32>, Vec<u32>) {
    let mut keys: Vec<K> = kp.iter().chain(kq).cloned().collect();
    keys.sort();
    keys.dedup();
    let id: HashMap<K, u32> = keys
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u32))
        .collect();
    (
        kp.iter().map(|k| id[k]).collect(),
        kq.iter().map(|k| id[k]).collect(),
    )
}

fn histogram(colors: &[u32]) -> Vec<u32> {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Coloring {
    class_p: Vec<u32>,
    class_q: Vec<u32>,
}

/// Iterated fingerprints for classes and characters. `None` if the
/// color histograms already differ.
fn color(
    tp: &CharacterTable,
    tq: &CharacterTable,
    iv: &Interned,
    use_power_maps: bool,
) -> Option<Coloring> {
    let h = iv.h;
    let col_key = |vals: &Vec<Vec<u32>>, sizes: &[u64], c: usize| -> (u64, Vec<u32>) {
        let mut col: Vec<u32> = (0..h).map(|chi| vals[chi][c]).collect();
        col.sort_unstable();
        (sizes[c], col)
    };
    let kp: Vec<_> = (0..h)
        .map(|c| col_key(&iv.vp, &tp.class_sizes, c))
        .collect();
    let kq: Vec<_> = (0..h)
        .map(|c| col_key(&iv.vq, &tq.class_sizes, c))
        .collect();
    let (mut cp, mut cq) = recolor(&kp, &kq);
    let row_key = |vals: &Vec<Vec<u32>>, chi: usize| -> Vec<u32> {
        let mut row = vals[chi].clone();
        row.sort_unstable();
        row
    };
    let kp: Vec<_> = (0..h).map(|x| row_key(&iv.vp, x)).collect();
    let kq: Vec<_> = (0..h).map(|x| row_key(&iv.vq, x)).collect();
    let (mut xp, mut xq) = recolor(&kp, &kq);

    loop {
        if histogram(&cp) != histogram(&cq) || histogram(&xp) != histogram(&xq) {
            return None;
        }
        let before = (distinct(&cp), distinct(&xp));

        type ClassKey = (u32, Vec<u32>, Vec<(usize, u32)>, Vec<(u32, u32)>);
        let class_keys = |t: &CharacterTable, vals: &Vec<Vec<u32>>, cc: &[u32], xc: &[u32]| {
            (0..h)
                .map(|c| {
                    let (fwd, back) = if use_power_maps {
                        let fwd: Vec<u32> = t.power_maps.iter().map(|m| cc[m[c]]).collect();
                        let mut back: Vec<(usize, u32)> = Vec::new();
                        for (k, m) in t.power_maps.iter().enumerate() {
                            for d in 0..h {
                                if m[d] == c {
                                    back.push((k, cc[d]));
                                }
                            }
                        }
                        back.sort_unstable();
                        (fwd, back)
                    } else {
                        (Vec::new(), Vec::new())
                    };
                    let mut by_char: Vec<(u32, u32)> =
                        (0..h).map(|x| (xc[x], vals[x][c])).collect();
                    by_char.sort_unstable();
                    (cc[c], fwd, back, by_char)
                })
                .collect::<Vec<ClassKey>>()
        };
        let kp = class_keys(tp, &iv.vp, &cp, &xp);
        let kq = class_keys(tq, &iv.vq, &cq, &xq);
        let (ncp, ncq) = recolor(&kp, &kq);

        let char_keys = |vals: &Vec<Vec<u32>>, cc: &[u32], xc: &[u32]| {
            (0..h)
                .map(|x| {
                    let mut by_class: Vec<(u32, u32)> =
                        (0..h).map(|c| (cc[c], vals[x][c])).collect();
                    by_class.sort_unstable();
                    (xc[x], by_class)
                })
                .collect::<Vec<_>>()
        };
        let kp = char_keys(&iv.vp, &ncp, &xp);
        let kq = char_keys(&iv.vq, &ncq, &xq);
        let (nxp, nxq) = recolor(&kp, &kq);

        cp = ncp;
        cq = ncq;
        xp = nxp;
        xq = nxq;
        if (distinct(&cp), distinct(&xp)) == before {
            if histogram(&cp) != histogram(&cq) || histogram(&xp) != histogram(&xq) {
                return None;
            }
            return Some(Coloring {
                class_p: cp,
                class_q: cq,
            });
        }
    }
}

struct Search<'a> {
    tp: &'a CharacterTable,
    tq: &'a CharacterTable,
    iv: &'a Interned,
    colors: &'a Coloring,
    use_power_maps: bool,
}

#[derive(Clone)]
struct State {
    rho: Vec<Option<usize>>,
    used: Vec<bool>,
    /// character cells on both sides, refined by every fixed class pair
    cell_p: Vec<u32>,
    cell_q: Vec<u32>,
}

impl<'a> Search<'a> {
    /// Fixes `c -> d` and everything the power maps force. False on conflict.
    fn assign(&self, st: &mut State, c: usize, d: usize) -> bool {
        let mut queue = vec![(c, d)];
        while let Some((c, d)) = queue.pop() {
            match st.rho[c] {
                Some(prev) if prev == d => continue,
                Some(_) => return false,
                None => {}
            }
            if st.used[d] || self.colors.class_p[c] != self.colors.class_q[d] {
                return false;
            }
            st.rho[c] = Some(d);
            st.used[d] = true;
            if !self.refine(st, c, d) {
                return false;
            }
            if self.use_power_maps {
                for (mp, mq) in self.tp.power_maps.iter().zip(&self.tq.power_maps) {
                    queue.push((mp[c], mq[d]));
                }
            }
        }
        true
    }

    fn refine(&self, st: &mut State, c: usize, d: usize) -> bool {
        let h = self.iv.h;
        let kp: Vec<(u32, u32)> = (0..h).map(|x| (st.cell_p[x], self.iv.vp[x][c])).collect();
        let kq: Vec<(u32, u32)> = (0..h).map(|y| (st.cell_q[y], self.iv.vq[y][d])).collect();
        let (np, nq) = recolor(&kp, &kq);
        if histogram(&np) != histogram(&nq) {
            return false;
        }
        st.cell_p = np;
        st.cell_q = nq;
        true
    }

    fn run(&self, st: State) -> Option<State> {
        let Some(c) = st.rho.iter().position(Option::is_none) else {
            return Some(st);
        };
        for d in 0..self.iv.h {
            if st.used[d] || self.colors.class_p[c] != self.colors.class_q[d] {
                continue;
            }
            let mut next = st.clone();
            if self.assign(&mut next, c, d) {
                if let Some(done) = self.run(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Searches for bijections of classes and characters preserving all table
/// entries and, with `use_power_maps`, every power map `pi_k`, `0 <= k < p^2`.
pub fn check_direct(
    p: &GroupDatum,
    q: &GroupDatum,
    use_power_maps: bool,
) -> Result<Option<DirectWitness>> {
    if p.p != q.p {
        return Err(Error::PrimeMismatch(p.p, q.p));
    }
    let tp = build_table(p)?;
    let tq = build_table(q)?;
    Ok(match_tables(&tp, &tq, use_power_maps))
}

/// [`check_direct`] on prebuilt tables.
pub fn match_tables(
    tp: &CharacterTable,
    tq: &CharacterTable,
    use_power_maps: bool,
) -> Option<DirectWitness> {
    if tp.p != tq.p
        || tp.order != tq.order
        || tp.class_count() != tq.class_count()
        || tp.power_maps.len() != tq.power_maps.len()
    {
        return None;
    }
    let iv = intern(tp, tq);
    let colors = color(tp, tq, &iv, use_power_maps)?;
    let h = iv.h;
    let search = Search {
        tp,
        tq,
        iv: &iv,
        colors: &colors,
        use_power_maps,
    };
    let start = State {
        rho: vec![None; h],
        used: vec![false; h],
        cell_p: vec![0; h],
        cell_q: vec![0; h],
    };
    let done = search.run(start)?;
    let rho: Vec<usize> = done.rho.iter().map(|d| d.expect("complete")).collect();
    // cells are singletons once every column is fixed
    let mut by_cell: HashMap<u32, usize> = HashMap::new();
    for (y, &cell) in done.cell_q.iter().enumerate() {
        by_cell.insert(cell, y);
    }
    let tau: Vec<usize> = done.cell_p.iter().map(|cell| by_cell[cell]).collect();
    let w = DirectWitness { rho, tau };
    w.verify(tp, tq, use_power_maps).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_mu, extraspecial, field_camina, with_mu, Variant};
    use crate::equiv::transport;
    use crate::fpla::FpMat;

    #[test]
    fn self_match_is_identity() {
        let g = extraspecial(3, 1, Variant::ExpP2);
        let w = check_direct(&g, &g, true).unwrap().unwrap();
        assert_eq!(w.rho, (0..11).collect::<Vec<_>>());
        assert_eq!(w.tau, (0..11).collect::<Vec<_>>());
    }

    #[test]
    fn extraspecial_pair() {
        let a = extraspecial(3, 1, Variant::ExpP);
        let b = extraspecial(3, 1, Variant::ExpP2);
        assert!(check_direct(&a, &b, true).unwrap().is_none());
        let w = check_direct(&a, &b, false).unwrap().unwrap();
        let (ta, tb) = (build_table(&a).unwrap(), build_table(&b).unwrap());
        assert!(w.verify(&ta, &tb, false));
        assert!(!w.verify(&ta, &tb, true));
    }

    #[test]
    fn transported_data_match() {
        let g = with_mu(&field_camina(3, 2).unwrap(), &canonical_mu(3, 2, 4, 1)).unwrap();
        let h = transport(
            &g,
            &FpMat::from_rows(
                3,
                &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 0], &[1, 0, 0, 1]],
            ),
            &FpMat::from_rows(3, &[&[0, 1], &[1, 0]]),
        )
        .unwrap();
        let w = check_direct(&g, &h, true).unwrap().unwrap();
        assert!(w.verify(&build_table(&g).unwrap(), &build_table(&h).unwrap(), true));
        let k = with_mu(&g, &canonical_mu(3, 2, 4, 2)).unwrap();
        assert!(check_direct(&g, &k, true).unwrap().is_none());
        assert!(check_direct(&g, &k, false).unwrap().is_some());
    }
}
