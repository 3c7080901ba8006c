//! Built-in consistency checks.
//!
//! The quick level exercises the algebraic laws, table orthogonality on
//! groups of order at most 3^5 and a sample of oracle comparisons. The full
//! level runs the acceptance criteria, including the classifications at
//! `p = 3`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rand_core::RngCore;

use crate::brauer::{check_direct, check_main_theorem, check_nenciu, match_tables};
use crate::chartable::{
    build_table, induced_from_center_oracle, CharLabel, CharacterTable, ClassLabel,
};
use crate::constructions::{
    canonical_mu, datum_rng, extraspecial, field_camina, random_datum, random_element, with_mu,
    Variant,
};
use crate::cyclotomic::Cyclotomic;
use crate::enumerate::{classify, ClassificationReport};
use crate::fpla::FpVec;
use crate::group::{Element, GroupDatum, IndexedGroup};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub level: Level,
    pub seed: u64,
    /// Corrupts one table entry before the orthogonality checks.
    #[doc(hidden)]
    pub perturb_table: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            level: Level::Quick,
            seed: 1,
            perturb_table: false,
        }
    }
}

pub type Check = std::result::Result<String, String>;

/// Shared state; classifications are computed once.
pub struct Context {
    pub opts: Options,
    reports: HashMap<(u32, usize, usize), ClassificationReport>,
}

impl Context {
    pub fn new(opts: Options) -> Self {
        Context {
            opts,
            reports: HashMap::new(),
        }
    }

    pub fn report(
        &mut self,
        p: u32,
        r: usize,
        n: usize,
    ) -> std::result::Result<&ClassificationReport, String> {
        if !self.reports.contains_key(&(p, r, n)) {
            let rep = classify(p, r, n).map_err(|e| e.to_string())?;
            self.reports.insert((p, r, n), rep);
        }
        Ok(&self.reports[&(p, r, n)])
    }

    /// Representatives of the `(3,4,2)`, `(3,2,1)` and `(3,4,1)` classifications.
    pub fn representatives(&mut self) -> std::result::Result<Vec<GroupDatum>, String> {
        let mut out = Vec::new();
        for (p, r, n) in [(3, 4, 2), (3, 2, 1), (3, 4, 1)] {
            out.extend(
                self.report(p, r, n)?
                    .classes
                    .iter()
                    .map(|c| c.representative.clone()),
            );
        }
        Ok(out)
    }
}

pub struct NamedCheck {
    pub id: u32,
    pub name: &'static str,
    pub run: fn(&mut Context) -> Check,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub result: Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Camina data of order at most `limit` from the construction families.
pub fn constructed_family(limit: u128) -> Vec<GroupDatum> {
    let mut out = Vec::new();
    for p in [3u32, 5, 7] {
        for m in 1..=3 {
            for v in [Variant::ExpP, Variant::ExpP2] {
                let g = extraspecial(p, m, v);
                if g.order() <= limit {
                    out.push(g);
                }
            }
            if let Ok(f) = field_camina(p, m) {
                for k in 0..=m {
                    let g = with_mu(&f, &canonical_mu(p, m, 2 * m, k)).expect("shape");
                    if g.order() <= limit {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

fn table_for(g: &GroupDatum, perturb: bool) -> std::result::Result<CharacterTable, String> {
    let mut t = build_table(g).map_err(|e| e.to_string())?;
    if perturb {
        let last = t.classes.len() - 1;
        t.values[1][last] = &t.values[1][last] + &Cyclotomic::one(t.p);
    }
    Ok(t)
}

fn orthogonality(data: &[GroupDatum], perturb: bool) -> Check {
    for g in data {
        let t = table_for(g, perturb)?;
        t.check_orthogonality()
            .map_err(|f| format!("orthogonality: {f} for datum of order {}", g.order()))?;
    }
    Ok(format!("{} tables", data.len()))
}

/// `power(x, p) = (0, mu e)`, `nu(xy) = nu(x) + nu(y)` on random samples.
fn nu_samples(
    g: &GroupDatum,
    samples: usize,
    rng: &mut impl RngCore,
) -> std::result::Result<(), String> {
    for _ in 0..samples {
        let x = random_element(g, rng);
        let y = random_element(g, rng);
        let xp = g.power(&x, g.p as i64);
        let expect = Element::new(FpVec::zeros(g.r), g.mu.apply(&x.e.0));
        ensure(xp == expect, || format!("power law fails at {x}"))?;
        let xy = g.multiply(&x, &y).map_err(|e| e.to_string())?;
        ensure(g.nu(&xy) == g.nu(&x).add(&g.nu(&y), g.p), || {
            format!("nu is not additive at {x}, {y}")
        })?;
    }
    Ok(())
}

/// Exhaustive `|G : Omega_1| = |mho_1|` against the subgroup report.
fn index_identity(g: &GroupDatum) -> std::result::Result<(), String> {
    let mut omega = 0u128;
    let mut powers = HashSet::new();
    for x in g.elements() {
        let xp = g.power(&x, g.p as i64);
        if xp == g.identity() {
            omega += 1;
        }
        powers.insert(xp);
    }
    let mho = powers.len() as u128;
    let rep = g.subgroup_report();
    ensure(g.order() == omega * mho, || {
        format!("|G| = {} but |Omega1| = {omega}, |mho1| = {mho}", g.order())
    })?;
    ensure(
        omega == (g.p as u128).pow(rep.omega1_log_order as u32)
            && mho == (g.p as u128).pow(rep.mho1_dim as u32),
        || "subgroup report disagrees with element count".into(),
    )
}

fn check_group_laws(ctx: &mut Context) -> Check {
    let mut rng = datum_rng(3, 0, 0, ctx.opts.seed);
    let mut triples = 0;
    for (i, (p, r, n)) in [(3, 2, 1), (3, 4, 2), (5, 3, 2), (7, 2, 2)]
        .into_iter()
        .enumerate()
    {
        let g = random_datum(p, r, n, ctx.opts.seed.wrapping_add(i as u64), false)
            .map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let (x, y, z) = (
                random_element(&g, &mut rng),
                random_element(&g, &mut rng),
                random_element(&g, &mut rng),
            );
            let m = |a: &Element, b: &Element| g.multiply(a, b).expect("same datum");
            ensure(m(&m(&x, &y), &z) == m(&x, &m(&y, &z)), || {
                format!("associativity fails at {x}, {y}, {z}")
            })?;
            ensure(m(&x, &g.inverse(&x)) == g.identity(), || {
                format!("inverse fails at {x}")
            })?;
            ensure(m(&x, &g.identity()) == x, || {
                format!("identity fails at {x}")
            })?;
            let word = m(&m(&g.inverse(&x), &g.inverse(&y)), &m(&x, &y));
            ensure(word == g.commutator(&x, &y), || {
                format!("commutator fails at {x}, {y}")
            })?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples"))
}

fn check_quick_orthogonality(ctx: &mut Context) -> Check {
    orthogonality(&constructed_family(243), ctx.opts.perturb_table)
}

fn check_quick_oracles(ctx: &mut Context) -> Check {
    let mut count = 0;
    for (i, (p, r, n)) in [(3, 2, 1), (3, 2, 2), (3, 3, 1), (3, 4, 1), (5, 2, 1)]
        .into_iter()
        .enumerate()
    {
        for k in 0..8u64 {
            let seed = ctx
                .opts
                .seed
                .wrapping_mul(1000)
                .wrapping_add(10 * i as u64 + k);
            let g = random_datum(p, r, n, seed, false).map_err(|e| e.to_string())?;
            let oracle = g.is_camina_oracle().map_err(|e| e.to_string())?;
            ensure(oracle == g.is_camina(), || {
                format!(
                    "camina predicate disagrees for\n{}",
                    crate::format::serialize(&g)
                )
            })?;
            count += 1;
        }
    }
    for g in constructed_family(243) {
        let classes = g.conjugacy_classes_oracle().map_err(|e| e.to_string())?;
        let t = build_table(&g).map_err(|e| e.to_string())?;
        ensure(classes.len() == t.class_count(), || {
            "class count disagrees with oracle".into()
        })?;
        count += 1;
    }
    Ok(format!("{count} comparisons"))
}

fn check_quick_nu(ctx: &mut Context) -> Check {
    let mut rng = datum_rng(5, 0, 0, ctx.opts.seed);
    for (i, (p, r, n)) in [(3, 2, 1), (3, 4, 1), (5, 2, 1)].into_iter().enumerate() {
        let g = random_datum(p, r, n, ctx.opts.seed.wrapping_add(i as u64), true)
            .map_err(|e| e.to_string())?;
        nu_samples(&g, 300, &mut rng)?;
        index_identity(&g)?;
    }
    Ok("3 data".into())
}

fn check_c1(ctx: &mut Context) -> Check {
    let rep = ctx.report(3, 4, 2)?;
    ensure(rep.classes.len() == 6, || {
        format!("{} classes, expected 6", rep.classes.len())
    })?;
    let want: BTreeMap<u128, usize> = [(1, 1), (3, 1), (9, 4)].into_iter().collect();
    let got = rep.mho1_distribution();
    ensure(got == want, || format!("|mho1| distribution {got:?}"))?;
    let nonabelian = rep
        .classes
        .iter()
        .filter(|c| c.mho1_order() == 9 && !c.report.omega1_abelian)
        .count();
    ensure(nonabelian == 1, || {
        format!("{nonabelian} classes with |mho1| = 9 and Omega1 nonabelian")
    })?;
    ensure(rep.survivors == 101_088 && rep.b_orbits.len() == 1, || {
        format!(
            "{} camina commutator data in {} orbits",
            rep.survivors,
            rep.b_orbits.len()
        )
    })?;
    Ok("6 classes, {1: 1, 3: 1, 9: 4}, one Omega1 nonabelian".into())
}

fn check_c2(ctx: &mut Context) -> Check {
    for (r, n) in [(2, 1), (4, 1)] {
        let k = ctx.report(3, r, n)?.classes.len();
        ensure(k == 2, || format!("(3, {r}, {n}) gives {k} classes"))?;
    }
    Ok("2 + 2 classes".into())
}

/// Unordered pairs of representatives with equal parameters, as indices.
fn same_param_pairs(reps: &[GroupDatum]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if reps[i].params() == reps[j].params() {
                out.push((i, j));
            }
        }
    }
    out
}

fn check_c3(ctx: &mut Context) -> Check {
    let reps = ctx.representatives()?;
    let tables: Vec<CharacterTable> = reps
        .iter()
        .map(|g| build_table(g).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    let mut brauer = Vec::new();
    for (i, j) in same_param_pairs(&reps) {
        let (a, b) = (&reps[i], &reps[j]);
        let main = check_main_theorem(a, b).map_err(|e| e.to_string())?;
        let nenciu = check_nenciu(a, b).map_err(|e| e.to_string())?;
        if let Some(w) = &nenciu {
            ensure(w.verify(a, b), || {
                format!("nenciu witness for ({i}, {j}) does not verify")
            })?;
        }
        let direct = match_tables(&tables[i], &tables[j], true);
        if let Some(w) = &direct {
            ensure(w.verify(&tables[i], &tables[j], true), || {
                format!("direct witness for ({i}, {j}) does not verify")
            })?;
        }
        ensure(main == nenciu.is_some() && main == direct.is_some(), || {
            format!(
                "pair ({i}, {j}): triple {main}, nenciu {}, direct {}",
                nenciu.is_some(),
                direct.is_some()
            )
        })?;
        if main {
            brauer.push((i, j));
        }
    }
    // indices 0..6 are the (3,4,2) classes, sorted by |mho1|
    let quad: Vec<usize> = ctx
        .report(3, 4, 2)?
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.mho1_order() == 9)
        .map(|(i, _)| i)
        .collect();
    let mut expected = Vec::new();
    for (x, &i) in quad.iter().enumerate() {
        for &j in &quad[x + 1..] {
            expected.push((i, j));
        }
    }
    ensure(brauer == expected, || {
        format!("brauer pairs {brauer:?}, expected {expected:?}")
    })?;
    Ok(format!(
        "{} brauer pairs, all within the |mho1| = 9 classes",
        brauer.len()
    ))
}

fn check_c4(ctx: &mut Context) -> Check {
    let reps = ctx.representatives()?;
    let pairs = same_param_pairs(&reps);
    for &(i, j) in &pairs {
        let w = check_direct(&reps[i], &reps[j], false).map_err(|e| e.to_string())?;
        ensure(w.is_some(), || format!("tables of ({i}, {j}) do not match"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn check_c5(ctx: &mut Context) -> Check {
    let mut data = ctx.representatives()?;
    data.extend(constructed_family(729));
    let data: Vec<GroupDatum> = data.into_iter().filter(|g| g.order() <= 729).collect();
    orthogonality(&data, ctx.opts.perturb_table)?;
    for g in &data {
        let t = build_table(g).map_err(|e| e.to_string())?;
        let expected = (g.p as u128).pow(g.n as u32) + (g.p as u128).pow(g.r as u32) - 1;
        ensure(t.class_count() as u128 == expected, || {
            format!("class count {}", t.class_count())
        })?;
        let oracle = IndexedGroup::build(g, Exec::default())
            .map_err(|e| e.to_string())?
            .conjugacy_classes(Exec::default())
            .len();
        ensure(oracle == t.class_count(), || {
            format!("oracle finds {oracle} classes")
        })?;
        let degree = (g.p as i64).pow((g.r / 2) as u32);
        for (row, label) in t.chars.iter().enumerate() {
            if let CharLabel::Nonlinear(lambda) = label {
                let induced = induced_from_center_oracle(g, lambda).map_err(|e| e.to_string())?;
                let scaled: Vec<Cyclotomic> =
                    t.values[row].iter().map(|v| v.scale(degree)).collect();
                ensure(induced == scaled, || {
                    format!("row {label} differs from the induced character")
                })?;
            }
        }
    }
    Ok(format!("{} tables", data.len()))
}

fn check_c6(ctx: &mut Context) -> Check {
    let params = [
        (3, 2, 1),
        (3, 4, 1),
        (3, 4, 2),
        (5, 2, 1),
        (5, 4, 1),
        (5, 4, 2),
    ];
    let mut rng = datum_rng(3, 1, 1, ctx.opts.seed);
    let (mut data, mut samples) = (0, 0);
    for k in 0..60u64 {
        let (p, r, n) = params[k as usize % params.len()];
        let g = random_datum(
            p,
            r,
            n,
            ctx.opts.seed.wrapping_mul(7919).wrapping_add(k),
            true,
        )
        .map_err(|e| e.to_string())?;
        nu_samples(&g, 200, &mut rng)?;
        index_identity(&g)?;
        data += 1;
        samples += 200;
    }
    Ok(format!("{samples} samples over {data} data"))
}

fn check_c7(ctx: &mut Context) -> Check {
    let params = [
        (3, 2, 1),
        (3, 2, 2),
        (3, 3, 1),
        (3, 3, 2),
        (3, 4, 1),
        (3, 4, 2),
        (3, 2, 3),
        (3, 5, 1),
        (5, 2, 1),
        (5, 3, 1),
        (5, 2, 2),
        (7, 2, 1),
    ];
    let mut agree = 0;
    let mut camina = 0;
    for k in 0..520u64 {
        let (p, r, n) = params[k as usize % params.len()];
        let seed = ctx.opts.seed.wrapping_mul(104_729).wrapping_add(k);
        let want = k % 3 == 0 && r % 2 == 0 && r >= 2 * n;
        let g = random_datum(p, r, n, seed, want).map_err(|e| e.to_string())?;
        let oracle = g.is_camina_oracle().map_err(|e| e.to_string())?;
        ensure(oracle == g.is_camina(), || {
            format!(
                "camina predicate disagrees for\n{}",
                crate::format::serialize(&g)
            )
        })?;
        agree += 1;
        camina += oracle as usize;
    }
    let family = constructed_family(3125);
    for g in &family {
        let oracle = g.is_camina_oracle().map_err(|e| e.to_string())?;
        ensure(oracle && g.is_camina(), || {
            format!("constructed datum of order {} fails", g.order())
        })?;
    }
    Ok(format!(
        "{agree} random data ({camina} camina), {} constructed",
        family.len()
    ))
}

fn check_c8(ctx: &mut Context) -> Check {
    let mut data = ctx.representatives()?;
    data.extend(constructed_family(729));
    let data: Vec<GroupDatum> = data.into_iter().filter(|g| g.order() <= 729).collect();
    for g in &data {
        let t = build_table(g).map_err(|e| e.to_string())?;
        let p = g.p as usize;
        let identity = t
            .class_index(&ClassLabel::Identity)
            .expect("identity class");
        for (c, label) in t.classes.iter().enumerate() {
            let image = &t.classes[t.power_maps[p][c]];
            let ok = match label {
                ClassLabel::Identity | ClassLabel::Central(_) => t.power_maps[p][c] == identity,
                ClassLabel::Noncentral(e) => {
                    let x = Element::new(FpVec::zeros(g.r), g.mu.apply(&e.0));
                    *image == ClassLabel::of(&x)
                }
            };
            ensure(ok, || format!("pi_p sends {label} to {image}"))?;
        }
        for x in g.elements() {
            let c = t.class_index(&ClassLabel::of(&x)).expect("class");
            for k in 0..t.power_maps.len() {
                let got = ClassLabel::of(&g.power(&x, k as i64));
                ensure(t.classes[t.power_maps[k][c]] == got, || {
                    format!("pi_{k} disagrees with powering at {x}")
                })?;
            }
        }
    }
    Ok(format!("{} tables", data.len()))
}

pub fn quick_checks() -> Vec<NamedCheck> {
    vec![
        NamedCheck {
            id: 1,
            name: "group laws",
            run: check_group_laws,
        },
        NamedCheck {
            id: 2,
            name: "orthogonality",
            run: check_quick_orthogonality,
        },
        NamedCheck {
            id: 3,
            name: "oracle agreement",
            run: check_quick_oracles,
        },
        NamedCheck {
            id: 4,
            name: "nu laws",
            run: check_quick_nu,
        },
    ]
}

pub fn acceptance_criteria() -> Vec<NamedCheck> {
    vec![
        NamedCheck {
            id: 1,
            name: "classification (3,4,2)",
            run: check_c1,
        },
        NamedCheck {
            id: 2,
            name: "extraspecial counts",
            run: check_c2,
        },
        NamedCheck {
            id: 3,
            name: "brauer deciders agree",
            run: check_c3,
        },
        NamedCheck {
            id: 4,
            name: "tables without power maps",
            run: check_c4,
        },
        NamedCheck {
            id: 5,
            name: "table orthogonality and induction",
            run: check_c5,
        },
        NamedCheck {
            id: 6,
            name: "nu laws",
            run: check_c6,
        },
        NamedCheck {
            id: 7,
            name: "camina oracle",
            run: check_c7,
        },
        NamedCheck {
            id: 8,
            name: "power maps",
            run: check_c8,
        },
    ]
}

/// Runs the checks of the chosen level and reports them line by line.
/// Stops at the first failure.
pub fn run(opts: Options) -> (String, Vec<Outcome>) {
    let checks = match opts.level {
        Level::Quick => quick_checks(),
        Level::Full => acceptance_criteria(),
    };
    let mut ctx = Context::new(opts);
    let mut out = String::new();
    let mut outcomes = Vec::new();
    for c in checks {
        let result = (c.run)(&mut ctx);
        match &result {
            Ok(msg) => {
                let _ = writeln!(out, "PASS {} {}: {msg}", c.id, c.name);
            }
            Err(msg) => {
                let _ = writeln!(out, "FAIL {} {}: {msg}", c.id, c.name);
            }
        }
        let failed = result.is_err();
        outcomes.push(Outcome {
            id: c.id,
            name: c.name,
            result,
        });
        if failed {
            break;
        }
    }
    (out, outcomes)
}
