//! Command-line front end. [`run`] returns the text to print and the exit
//! code so the whole surface can be tested in-process.
//!
//! Exit codes: 0 affirmative, 1 negative verdict, 2 usage or validation error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::brauer::{
    check_direct, check_main_theorem, check_nenciu, invariant_triple, is_isomorphic, DirectWitness,
};
use crate::chartable::{build_table, CharacterTable};
use crate::constructions::{canonical_mu, extraspecial, field_camina, with_mu, Variant};
use crate::enumerate::classify_with;
use crate::error::Error;
use crate::format;
use crate::fpla::FpVec;
use crate::group::{GroupDatum, IndexedGroup};
use crate::par::{with_jobs, Exec};
use crate::selftest::{self, Level, Options};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest group on which `analyze` also runs the exhaustive oracles.
const ANALYZE_ORACLE_LIMIT: u128 = 6561;

#[derive(Parser, Debug)]
#[command(
    name = "caminalab",
    version,
    about = "Camina p-groups of class 2: character tables, power maps and Brauer pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print invariants of a datum file.
    Analyze { file: PathBuf },
    /// Decide whether two groups have the same character table and power maps.
    Compare {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Write a datum from one of the built-in families.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "mu-rank", default_value_t = 0)]
        mu_rank: usize,
    },
    /// Classify Camina groups with |G:G'| = p^r and |G'| = p^n.
    Enumerate {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// worker threads, 0 for all cores
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// directory receiving one datum file per class
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the character table and power maps.
    Chartable {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run built-in consistency checks.
    Selftest {
        #[arg(long, value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "inject-perturbation", hide = true)]
        inject_perturbation: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Triple,
    Nenciu,
    Direct,
    DirectNopow,
    Iso,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    ExtraspecialP,
    ExtraspecialP2,
    Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelftestLevel {
    Quick,
    Full,
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::usage(e)
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome::ok(text, EXIT_YES)
            };
        }
    };
    execute(cli.command)
}

pub fn execute(cmd: Command) -> Outcome {
    let result = match cmd {
        Command::Analyze { file } => load(&file).map(|g| analyze(&g)),
        Command::Compare { p, q, method } => {
            load(&p).and_then(|gp| load(&q).and_then(|gq| compare(&gp, &gq, method)))
        }
        Command::Construct {
            family,
            p,
            m,
            mu_rank,
        } => construct(family, p, m, mu_rank).map(|g| Outcome::ok(format::serialize(&g), EXIT_YES)),
        Command::Enumerate {
            p,
            r,
            n,
            jobs,
            out_dir,
            format,
        } => enumerate(p, r, n, jobs, out_dir.as_deref(), format),
        Command::Chartable { file, format } => load(&file)
            .and_then(|g| build_table(&g))
            .map(|t| Outcome::ok(render_table(&t, format), EXIT_YES)),
        Command::Selftest {
            level,
            seed,
            inject_perturbation,
        } => Ok(run_selftest(level, seed, inject_perturbation)),
    };
    result.unwrap_or_else(Outcome::from)
}

fn load(path: &Path) -> crate::Result<GroupDatum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDatum(format!("cannot read {}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn analyze(g: &GroupDatum) -> Outcome {
    let mut s = String::new();
    let p = g.p as u128;
    let rep = g.subgroup_report();
    let camina = g.is_camina();
    let _ = writeln!(s, "p = {}, r = {}, n = {}", g.p, g.r, g.n);
    let _ = writeln!(s, "|G| = {}", g.order());
    let _ = writeln!(s, "valid: yes");
    let _ = writeln!(s, "camina: {}", yes_no(camina));
    let small = g.order() <= ANALYZE_ORACLE_LIMIT;
    if small {
        match g.is_camina_oracle() {
            Ok(o) => {
                let _ = writeln!(s, "camina (exhaustive): {}", yes_no(o));
            }
            Err(e) => {
                let _ = writeln!(s, "camina (exhaustive): {e}");
            }
        }
    }
    let _ = writeln!(s, "exponent {}", rep.exponent);
    let _ = writeln!(s, "|G'| = {}", p.pow(rep.derived_dim as u32));
    let _ = writeln!(s, "|Z| = {}", p.pow(rep.center_dim as u32));
    let mho = p.pow(rep.mho1_dim as u32);
    let omega = p.pow(rep.omega1_log_order as u32);
    let _ = writeln!(s, "|℧₁| = {mho}");
    let _ = writeln!(s, "|Ω₁| = {omega}");
    let _ = writeln!(s, "|G:Ω₁| = {}", g.order() / omega);
    let _ = writeln!(s, "Ω₁ abelian: {}", yes_no(rep.omega1_abelian));
    if camina {
        let classes = p.pow(g.n as u32) + p.pow(g.r as u32) - 1;
        let _ = writeln!(s, "conjugacy classes: {classes}");
    } else if small {
        if let Ok(t) = IndexedGroup::build(g, Exec::default()) {
            let _ = writeln!(
                s,
                "conjugacy classes: {}",
                t.conjugacy_classes(Exec::default()).len()
            );
        }
    }
    if let Ok((a, b, c)) = invariant_triple(g) {
        let _ = writeln!(s, "invariant triple: ({a}, {b}, {c})");
    }
    Outcome::ok(s, EXIT_YES)
}

fn write_direct(s: &mut String, w: &DirectWitness, tp: &CharacterTable, tq: &CharacterTable) {
    let _ = writeln!(s, "  classes:");
    for (a, b) in w.class_pairs(tp, tq) {
        let _ = writeln!(s, "    {a} -> {b}");
    }
    let _ = writeln!(s, "  characters:");
    for (a, b) in w.char_pairs(tp, tq) {
        let _ = writeln!(s, "    {a} -> {b}");
    }
}

pub fn compare(gp: &GroupDatum, gq: &GroupDatum, method: Method) -> crate::Result<Outcome> {
    let mut s = String::new();
    let verdict = |b: bool| {
        if b {
            "Brauer pair"
        } else {
            "not a Brauer pair"
        }
    };
    let code = |b: bool| if b { EXIT_YES } else { EXIT_NO };

    let triple = || -> crate::Result<bool> {
        let (tp, tq) = (invariant_triple(gp)?, invariant_triple(gq)?);
        Ok(tp == tq && check_main_theorem(gp, gq)?)
    };
    let nenciu = |s: &mut String| -> crate::Result<bool> {
        let w = check_nenciu(gp, gq)?;
        let _ = writeln!(s, "nenciu: {}", verdict(w.is_some()));
        if let Some(w) = &w {
            let _ = writeln!(s, "  A = {}", w.a);
            let _ = writeln!(s, "  C = {}", w.c);
        }
        Ok(w.is_some())
    };
    let direct = |s: &mut String, pow: bool| -> crate::Result<bool> {
        if gp.p != gq.p {
            return Err(Error::PrimeMismatch(gp.p, gq.p));
        }
        let (tp, tq) = (build_table(gp)?, build_table(gq)?);
        let w = check_direct(gp, gq, pow)?;
        let name = if pow { "direct" } else { "direct-nopow" };
        let what = if pow {
            verdict(w.is_some())
        } else if w.is_some() {
            "character tables match"
        } else {
            "character tables differ"
        };
        let _ = writeln!(s, "{name}: {what}");
        if let Some(w) = &w {
            write_direct(s, w, &tp, &tq);
        }
        Ok(w.is_some())
    };
    let iso = |s: &mut String| -> crate::Result<bool> {
        let w = is_isomorphic(gp, gq)?;
        let _ = writeln!(
            s,
            "iso: {}",
            if w.is_some() {
                "isomorphic"
            } else {
                "not isomorphic"
            }
        );
        if let Some(w) = &w {
            let _ = writeln!(s, "  A = {}", w.a);
            let _ = writeln!(s, "  C = {}", w.c);
            if let Some(q) = &w.q {
                let dim = gp.r;
                for (idx, v) in q.iter().enumerate() {
                    let e = FpVec::from_index(idx as u64, dim, gp.p);
                    let _ = writeln!(s, "  q{e} = {v}");
                }
            }
        }
        Ok(w.is_some())
    };

    let out = match method {
        Method::Triple => {
            let t = triple()?;
            let _ = writeln!(
                s,
                "triple: {:?} vs {:?}",
                invariant_triple(gp)?,
                invariant_triple(gq)?
            );
            let _ = writeln!(s, "{}", verdict(t));
            code(t)
        }
        Method::Nenciu => code(nenciu(&mut s)?),
        Method::Direct => code(direct(&mut s, true)?),
        Method::DirectNopow => code(direct(&mut s, false)?),
        Method::Iso => code(iso(&mut s)?),
        Method::All => {
            if gp.params() != gq.params() {
                return Err(Error::ParameterMismatch(gp.params(), gq.params()));
            }
            let t = triple()?;
            let _ = writeln!(s, "triple: {}", verdict(t));
            let n = nenciu(&mut s)?;
            let d = direct(&mut s, true)?;
            direct(&mut s, false)?;
            let i = iso(&mut s)?;
            if t != n || t != d || (i && !t) {
                let _ = writeln!(s, "checkers disagree");
                return Ok(Outcome::ok(s, EXIT_NO));
            }
            if i {
                let _ = writeln!(s, "note: the groups are isomorphic");
            }
            code(t)
        }
    };
    Ok(Outcome::ok(s, out))
}

pub fn construct(family: Family, p: u32, m: usize, mu_rank: usize) -> crate::Result<GroupDatum> {
    if !crate::fpla::is_odd_prime(p) {
        return Err(Error::Unsupported(format!("p = {p} is not an odd prime")));
    }
    if m == 0 || m > 16 {
        return Err(Error::Unsupported(format!("m = {m}")));
    }
    match family {
        Family::ExtraspecialP | Family::ExtraspecialP2 => {
            if mu_rank != 0 {
                return Err(Error::Unsupported(
                    "--mu-rank applies to the field family".into(),
                ));
            }
            let v = if family == Family::ExtraspecialP {
                Variant::ExpP
            } else {
                Variant::ExpP2
            };
            Ok(extraspecial(p, m, v))
        }
        Family::Field => {
            if mu_rank > m {
                return Err(Error::Unsupported(format!(
                    "mu rank {mu_rank} exceeds n = {m}"
                )));
            }
            let g = field_camina(p, m)?;
            with_mu(&g, &canonical_mu(p, m, 2 * m, mu_rank))
        }
    }
}

fn enumerate(
    p: u32,
    r: usize,
    n: usize,
    jobs: usize,
    out_dir: Option<&Path>,
    fmt: Format,
) -> crate::Result<Outcome> {
    let exec = if jobs == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let report = with_jobs(jobs, || classify_with(p, r, n, exec))?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidDatum(format!("cannot create {}: {e}", dir.display())))?;
        for (i, c) in report.classes.iter().enumerate() {
            let path = dir.join(format!("class-{}.txt", i + 1));
            std::fs::write(&path, format::serialize(&c.representative)).map_err(|e| {
                Error::InvalidDatum(format!("cannot write {}: {e}", path.display()))
            })?;
        }
    }
    let text = match fmt {
        Format::Text => report.to_text(),
        Format::Tsv => report.to_tsv(),
    };
    Ok(Outcome::ok(text, EXIT_YES))
}

pub fn render_table(t: &CharacterTable, fmt: Format) -> String {
    let mut s = String::new();
    let sep = match fmt {
        Format::Text => " ",
        Format::Tsv => "\t",
    };
    let join = |items: Vec<String>| items.join(sep);
    match fmt {
        Format::Text => {
            let _ = writeln!(s, "order {}, {} classes", t.order, t.class_count());
            let _ = writeln!(
                s,
                "classes {}",
                join(t.classes.iter().map(|c| c.to_string()).collect())
            );
            let _ = writeln!(
                s,
                "sizes {}",
                join(t.class_sizes.iter().map(|c| c.to_string()).collect())
            );
        }
        Format::Tsv => {
            let mut head = vec!["char".to_string()];
            head.extend(t.classes.iter().map(|c| c.to_string()));
            let _ = writeln!(s, "{}", join(head));
            let mut sizes = vec!["size".to_string()];
            sizes.extend(t.class_sizes.iter().map(|c| c.to_string()));
            let _ = writeln!(s, "{}", join(sizes));
        }
    }
    for (label, row) in t.chars.iter().zip(&t.values) {
        let mut cells = vec![label.to_string()];
        cells.extend(row.iter().map(|v| v.to_string()));
        let _ = writeln!(s, "{}", join(cells));
    }
    for (k, map) in t.power_maps.iter().enumerate() {
        match fmt {
            Format::Text => {
                let pairs: Vec<String> = map
                    .iter()
                    .enumerate()
                    .map(|(c, &d)| format!("{}>{}", t.classes[c], t.classes[d]))
                    .collect();
                let _ = writeln!(s, "pi_{k} {}", pairs.join(" "));
            }
            Format::Tsv => {
                for (c, &d) in map.iter().enumerate() {
                    let _ = writeln!(s, "pi\t{k}\t{}\t{}", t.classes[c], t.classes[d]);
                }
            }
        }
    }
    s
}

fn run_selftest(level: SelftestLevel, seed: u64, perturb: bool) -> Outcome {
    let opts = Options {
        level: match level {
            SelftestLevel::Quick => Level::Quick,
            SelftestLevel::Full => Level::Full,
        },
        seed,
        perturb_table: perturb,
    };
    let (mut text, outcomes) = selftest::run(opts);
    match outcomes.iter().find(|o| o.result.is_err()) {
        Some(f) => {
            let _ = writeln!(text, "first failing invariant: {}", f.name);
            Outcome::ok(text, EXIT_NO)
        }
        None => {
            let _ = writeln!(text, "all {} checks passed", outcomes.len());
            Outcome::ok(text, EXIT_YES)
        }
    }
}
