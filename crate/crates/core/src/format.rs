//! Plain-text datum files.
//!
//! ```text
//! caminalab 1
//! p 3
//! r 2
//! n 1
//! B 2 1 1
//! mu 1 0
//! mu 2 0
//! ```
//!
//! `B i j c1 .. cn` gives the commutator value for generators `i > j`
//! (1-based), `mu i c1 .. cn` the `p`-th power of generator `i`. Missing
//! `B` and `mu` lines mean zero and `#` starts a comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fpla::{FpMat, FpVec};
use crate::group::{pair_index, pairs, GroupDatum};

pub const HEADER: &str = "caminalab 1";

/// Canonical serialization: every `B` pair in lex order, every `mu` column.
pub fn serialize(g: &GroupDatum) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    let _ = writeln!(s, "p {}", g.p);
    let _ = writeln!(s, "r {}", g.r);
    let _ = writeln!(s, "n {}", g.n);
    for (i, j) in pairs(g.r) {
        let _ = write!(s, "B {} {}", i + 1, j + 1);
        for c in &g.b_at(i, j).0 {
            let _ = write!(s, " {c}");
        }
        s.push('\n');
    }
    for i in 0..g.r {
        let _ = write!(s, "mu {}", i + 1);
        for k in 0..g.n {
            let _ = write!(s, " {}", g.mu.get(k, i));
        }
        s.push('\n');
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| {
        perr(
            line,
            format!("expected a non-negative integer, found `{tok}`"),
        )
    })
}

struct Pending {
    line: usize,
    idx: Vec<usize>,
    coeffs: Vec<u32>,
}

pub fn parse(text: &str) -> Result<GroupDatum> {
    let mut header = false;
    let (mut p, mut r, mut n) = (None, None, None);
    let mut b_lines: Vec<Pending> = Vec::new();
    let mut mu_lines: Vec<Pending> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !header {
            if toks != ["caminalab", "1"] {
                return Err(perr(line, format!("expected header `{HEADER}`")));
            }
            header = true;
            continue;
        }
        let set = |slot: &mut Option<u64>, name: &str| -> Result<()> {
            if toks.len() != 2 {
                return Err(perr(line, format!("`{name}` takes one value")));
            }
            if slot.is_some() {
                return Err(perr(line, format!("`{name}` given twice")));
            }
            *slot = Some(number(toks[1], line)?);
            Ok(())
        };
        match toks[0] {
            "p" => set(&mut p, "p")?,
            "r" => set(&mut r, "r")?,
            "n" => set(&mut n, "n")?,
            "B" | "mu" => {
                let nidx = if toks[0] == "B" { 2 } else { 1 };
                if toks.len() < 1 + nidx {
                    return Err(perr(line, format!("`{}` line is missing indices", toks[0])));
                }
                let idx = toks[1..=nidx]
                    .iter()
                    .map(|t| number(t, line))
                    .collect::<Result<Vec<usize>>>()?;
                let coeffs = toks[1 + nidx..]
                    .iter()
                    .map(|t| number(t, line))
                    .collect::<Result<Vec<u32>>>()?;
                let entry = Pending { line, idx, coeffs };
                if toks[0] == "B" {
                    b_lines.push(entry);
                } else {
                    mu_lines.push(entry);
                }
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    let last = text.lines().count().max(1);
    if !header {
        return Err(perr(last, format!("missing header `{HEADER}`")));
    }
    let p = p.ok_or_else(|| perr(last, "missing `p` line"))?;
    let r = r.ok_or_else(|| perr(last, "missing `r` line"))? as usize;
    let n = n.ok_or_else(|| perr(last, "missing `n` line"))? as usize;
    if p > u32::MAX as u64 || !crate::fpla::is_odd_prime(p as u32) {
        return Err(Error::InvalidDatum(format!(
            "p = {p} is not a supported odd prime"
        )));
    }
    let p = p as u32;
    if r == 0 || r > 64 || n > 64 {
        return Err(Error::InvalidDatum(format!(
            "unsupported dimensions r = {r}, n = {n}"
        )));
    }

    let check_coeffs = |e: &Pending| -> Result<()> {
        if e.coeffs.len() != n {
            return Err(perr(
                e.line,
                format!("expected {n} coefficients, found {}", e.coeffs.len()),
            ));
        }
        if let Some(c) = e.coeffs.iter().find(|&&c| c >= p) {
            return Err(perr(
                e.line,
                format!("coefficient {c} is not reduced mod {p}"),
            ));
        }
        Ok(())
    };

    let mut b = vec![FpVec::zeros(n); r * (r - 1) / 2];
    let mut seen_b = vec![false; b.len()];
    for e in &b_lines {
        let (i, j) = (e.idx[0], e.idx[1]);
        if !(1 <= j && j < i && i <= r) {
            return Err(perr(
                e.line,
                format!("need 1 <= j < i <= {r}, found i = {i}, j = {j}"),
            ));
        }
        check_coeffs(e)?;
        let slot = pair_index(i - 1, j - 1);
        if std::mem::replace(&mut seen_b[slot], true) {
            return Err(perr(e.line, format!("pair ({i}, {j}) given twice")));
        }
        b[slot] = FpVec(e.coeffs.clone());
    }
    let mut mu = FpMat::zeros(p, n, r);
    let mut seen_mu = vec![false; r];
    for e in &mu_lines {
        let i = e.idx[0];
        if !(1 <= i && i <= r) {
            return Err(perr(e.line, format!("generator index {i} outside 1..={r}")));
        }
        check_coeffs(e)?;
        if std::mem::replace(&mut seen_mu[i - 1], true) {
            return Err(perr(e.line, format!("mu column {i} given twice")));
        }
        for (k, &c) in e.coeffs.iter().enumerate() {
            mu.set(k, i - 1, c);
        }
    }
    GroupDatum::new(p, r, n, b, mu)
}
