//! Command-line surface: invariants, trace tables, sieving, theorem pipelines, the second case, inertia.

pub mod prove;
pub mod trace;

pub use prove::{prove, ProveOptions};
pub use trace::{ProofTrace, Verdict};

use crate::arith;
use crate::ellcurve::{inertia_order_set, tate_conductor_q, WeierstrassModel};
use crate::freycurves::{build_frey, conductor_profile, serre_level, trace_table, trace_table_any, FreyError, FreyKind};
use crate::newformdb::{parse_hilbert_db, parse_rational_db, NewformDbError, NewformRecord};
use crate::numfield::{FieldId, NfElem};
use crate::sieve::{run_sieve, second_case_report, Branch, SieveConfig, SieveError, SignMode, Survivors};
use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::{Path, PathBuf};

/// Curves of conductor 50, 200 and 400, shipped with the crate.
pub const BUNDLED_CURVES: &str = include_str!("../../data/curves_50_200_400.txt");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Data(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<FreyError> for CliError {
    fn from(e: FreyError) -> Self {
        match e {
            FreyError::DegeneratePair { .. } | FreyError::HypothesisViolated(_) | FreyError::InadmissibleAuxPrime { .. } => CliError::Input(e.to_string()),
            FreyError::CrossCheckFailed(_) => CliError::Verification(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::InadmissibleAuxPrime { .. } | SieveError::InvalidConfig(_) => CliError::Input(e.to_string()),
            SieveError::Frey(f) => f.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<NewformDbError> for CliError {
    fn from(e: NewformDbError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "frey", about = "Multi-Frey elimination for x^r + y^r = d z^p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the text report here and a JSON sidecar next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model, invariants, conductor profile and predicted levels of a Frey curve.
    Invariants {
        #[arg(long)]
        kind: FreyKind,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Also print the level after level lowering mod p.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Traces of Frobenius at the primes above q, per residue class.
    Trace {
        #[arg(long)]
        kind: FreyKind,
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<i64>,
        /// Allow q ≡ 1 mod r.
        #[arg(long)]
        relaxed: bool,
    },
    /// Bound the exponent for every form of a data file.
    Sieve {
        #[arg(long)]
        kind: FreyKind,
        /// Hilbert eigenvalue file.
        #[arg(long, conflicts_with = "curves")]
        forms: Option<PathBuf>,
        /// Rational curve table (for kind W).
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        aux_primes: Vec<u64>,
        #[arg(long, default_value_t = 7)]
        p_floor: u64,
        /// Class restriction "m:divides" or "m:not" on m | x + y.
        #[arg(long)]
        branch: Vec<String>,
        /// Labels expected to survive; the exit code reports whether they match.
        #[arg(long, value_delimiter = ',')]
        expect: Option<Vec<String>>,
    },
    /// Run a theorem pipeline.
    Prove {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 3)]
        d: u64,
        /// Directory of Hilbert eigenvalue files.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Report data_missing rather than using survivor lists without data.
        #[arg(long)]
        strict_no_cited: bool,
        /// Independent signs at multiplicative slots in refined elimination.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        permissive_signs: bool,
        /// r = 13: treat the p = 7 form g as congruent to E_{1,-1} mod 7 (an unverified assumption).
        #[arg(long)]
        assume_p7_congruence: bool,
    },
    /// x^5 + y^5 = d z^p with p | z.
    SecondCase {
        #[arg(long)]
        d: u64,
        /// Curve table; defaults to the bundled conductor 50, 200, 400 tables.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Inertia orders at ℓ of curves over Q, and version 1 disjointness for two curves.
    Inertia {
        /// "W:a,b" or five a-invariants "a1,a2,a3,a4,a6"; give one or two.
        #[arg(long, required = true, allow_hyphen_values = true)]
        curve: Vec<String>,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
    },
}

/// A rendered report with its exit code.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub exit: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Every `.txt` or `.hilbert` file in the directory, in name order.
pub fn load_hilbert_dir(dir: &Path) -> Result<Vec<NewformRecord>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|x| x.to_str()), Some("txt" | "hilbert")))
        .collect();
    paths.sort();
    let mut forms = Vec::new();
    for p in paths {
        forms.extend(parse_hilbert_db(&read(&p)?).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?);
    }
    Ok(forms)
}

fn factored(x: &NfElem) -> String {
    match x.as_rational() {
        Some(r) if r.is_integer() && !r.is_zero() => arith::factored_string(r.numer()),
        _ => {
            let n = x.norm();
            if n.is_integer() && !n.is_zero() {
                format!("{x}  (norm {})", arith::factored_string(n.numer()))
            } else {
                x.to_string()
            }
        }
    }
}

fn cmd_invariants(kind: FreyKind, a: i64, b: i64, d: u64, p: Option<u64>) -> Result<Report, CliError> {
    let e = build_frey(kind, a, b)?;
    let inv = &e.invariants;
    let mut t = String::new();
    writeln!(t, "{kind}({a},{b}) over {}", kind.field()).unwrap();
    writeln!(t, "model: {}", e.model).unwrap();
    writeln!(t, "c4 = {}", factored(&inv.c4)).unwrap();
    writeln!(t, "c6 = {}", factored(&inv.c6)).unwrap();
    writeln!(t, "disc = {}", factored(&inv.disc)).unwrap();
    writeln!(t, "j = {}", inv.j).unwrap();
    let prof = conductor_profile(kind, a, b, d)?;
    writeln!(t, "conductor:").unwrap();
    for en in &prof.entries {
        let ex: Vec<String> = en.exponents.iter().map(|x| x.to_string()).collect();
        writeln!(t, "  {} {:?} exponent {}", en.slot, en.reduction, ex.join("|")).unwrap();
    }
    if let Some(n) = prof.norm() {
        writeln!(t, "conductor norm = {}", arith::factored_string(&n)).unwrap();
    }
    let mut js = json!({
        "kind": kind.to_string(), "a": a, "b": b, "d": d,
        "model": e.model.to_string(),
        "c4": inv.c4.to_string(), "c6": inv.c6.to_string(), "disc": inv.disc.to_string(), "j": inv.j.to_string(),
        "conductor": prof,
    });
    if let Some(p) = p {
        let sl = serre_level(kind, a, b, d, p)?;
        for (lv, n) in sl.candidates.iter().zip(sl.norms()) {
            let parts: Vec<String> = lv.iter().map(|(s, e)| format!("{s}^{e}")).collect();
            writeln!(t, "level mod {p}: {} (norm {n})", if parts.is_empty() { "1".into() } else { parts.join("·") }).unwrap();
        }
        for c in &sl.conditions {
            writeln!(t, "  when {c}").unwrap();
        }
        js["serre_level"] = serde_json::to_value(&sl).unwrap();
    }
    Ok(Report { text: t, json: js, exit: 0 })
}

fn cmd_trace(kind: FreyKind, q: u64, pair: Option<(i64, i64)>, relaxed: bool) -> Result<Report, CliError> {
    let table = if relaxed { trace_table_any(kind, q)? } else { trace_table(kind, q)? };
    let mut t = String::new();
    let slots: Vec<String> = table.slots.iter().map(|s| format!("{s} norm {}", s.norm())).collect();
    writeln!(t, "{kind} at q = {q}: slots {}", slots.join(", ")).unwrap();
    let classes: Vec<(&(u64, u64), &crate::freycurves::ClassTraces)> = match pair {
        Some((a, b)) => {
            let key = (a.rem_euclid(q as i64) as u64, b.rem_euclid(q as i64) as u64);
            let c = table.classes.get_key_value(&key).ok_or_else(|| CliError::Input(format!("({a},{b}) is 0 mod {q}")))?;
            vec![c]
        }
        None => table.classes.iter().collect(),
    };
    let mut rows = Vec::new();
    for ((x, y), c) in &classes {
        writeln!(t, "({x},{y}) a = {:?} {:?}", c.traces(), c.shapes).unwrap();
        rows.push(json!({"x": x, "y": y, "traces": c.traces(), "shapes": c.shapes}));
    }
    Ok(Report { text: t, json: json!({"kind": kind.to_string(), "q": q, "classes": rows}), exit: 0 })
}

fn parse_branch(s: &str) -> Result<Branch, CliError> {
    let (m, how) = s.split_once(':').ok_or_else(|| CliError::Input(format!("bad branch {s}")))?;
    let modulus = m.parse().map_err(|_| CliError::Input(format!("bad branch modulus {m}")))?;
    let divides = match how {
        "divides" => true,
        "not" => false,
        _ => return Err(CliError::Input(format!("bad branch condition {how}"))),
    };
    Ok(Branch { modulus, divides })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sieve(
    kind: FreyKind,
    forms: Option<&Path>,
    curves: Option<&Path>,
    aux: Vec<u64>,
    p_floor: u64,
    branch: &[String],
    expect: Option<Vec<String>>,
) -> Result<Report, CliError> {
    let records = match (forms, curves) {
        (Some(f), None) => parse_hilbert_db(&read(f)?)?,
        (None, Some(c)) => parse_rational_db(&read(c)?)?.iter().map(|e| e.as_newform()).collect(),
        _ => return Err(CliError::Input("give --forms or --curves".into())),
    };
    let branches = branch.iter().map(|b| parse_branch(b)).collect::<Result<Vec<_>, _>>()?;
    let cfg = SieveConfig { kind, d: 1, aux_primes: aux, p_floor, branches };
    let results = run_sieve(&cfg, &records)?;
    let mut t = String::new();
    let mut surviving = BTreeSet::new();
    for r in &results {
        let s = match &r.survivors {
            Survivors::All => format!("all p >= {p_floor}"),
            Survivors::Finite(v) => format!("{v:?}"),
        };
        if !r.survivors.is_empty() {
            surviving.insert(r.form.clone());
        }
        writeln!(t, "{}: survivors {s}", r.form).unwrap();
        for b in &r.evidence {
            writeln!(t, "  q = {}: bound {}", b.q, arith::factored_string(&b.bound)).unwrap();
        }
    }
    let mut exit = 0;
    if let Some(exp) = expect {
        let exp: BTreeSet<String> = exp.into_iter().collect();
        let ok = exp == surviving;
        writeln!(t, "expected survivors match: {ok}").unwrap();
        if !ok {
            exit = 4;
        }
    }
    Ok(Report { text: t, json: json!({"config": cfg, "results": results}), exit })
}

fn trace_report(tr: &ProofTrace) -> Report {
    Report { text: tr.render_text(), json: serde_json::to_value(tr).unwrap(), exit: tr.verdict.exit_code() }
}

fn cmd_second_case(d: u64, curves: Option<&Path>) -> Result<Report, CliError> {
    let text = match curves {
        Some(p) => read(p)?,
        None => BUNDLED_CURVES.to_string(),
    };
    let db = parse_rational_db(&text)?;
    let rep = second_case_report(d, &db)?;
    let tr = ProofTrace::new(5, d, rep.steps, Vec::new(), Vec::new(), false);
    Ok(trace_report(&tr))
}

fn parse_curve(spec: &str) -> Result<(String, WeierstrassModel), CliError> {
    let bad = || CliError::Input(format!("bad curve {spec}"));
    if let Some(rest) = spec.strip_prefix("W:") {
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((format!("W({a},{b})"), build_frey(FreyKind::W, a, b)?.model));
    }
    let v: Vec<i64> = spec.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let a: [i64; 5] = v.try_into().map_err(|_| bad())?;
    let m = WeierstrassModel::from_ints(FieldId::Q, a).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((format!("[{spec}]"), m))
}

fn cmd_inertia(curves: &[String], ell: u64, p: u64) -> Result<Report, CliError> {
    if curves.len() > 2 {
        return Err(CliError::Input("give one or two curves".into()));
    }
    if !arith::is_prime(ell) || !arith::is_prime(p) || p < 5 || p == ell {
        return Err(CliError::Input("need primes ℓ and p with p >= 5, p != ℓ".into()));
    }
    let mut t = String::new();
    let mut profiles = Vec::new();
    let mut rows = Vec::new();
    for spec in curves {
        let (label, m) = parse_curve(spec)?;
        let (class, ld) = tate_conductor_q(&m, ell).map_err(|e| CliError::Input(e.to_string()))?;
        let prof = inertia_order_set(&class, ld.disc_valuation as i64, ell, p);
        writeln!(t, "{label} at {ell}: {} {:?} {:?}, conductor exponent {}, inertia orders {:?}", ld.kodaira, class.kind, class.potential, ld.conductor_exponent, prof.orders).unwrap();
        rows.push(json!({"curve": label, "class": class, "orders": prof.orders}));
        profiles.push(prof);
    }
    let mut js = json!({"ell": ell, "p": p, "curves": rows});
    if let [x, y] = &profiles[..] {
        let dis = crate::ellcurve::inertia_v1_disjoint(x, y, p);
        writeln!(t, "disjoint: {dis}").unwrap();
        js["disjoint"] = json!(dis);
    }
    Ok(Report { text: t, json: js, exit: 0 })
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Invariants { kind, a, b, d, p } => cmd_invariants(*kind, *a, *b, *d, *p),
        Command::Trace { kind, q, a, b, relaxed } => cmd_trace(*kind, *q, a.zip(*b), *relaxed),
        Command::Sieve { kind, forms, curves, aux_primes, p_floor, branch, expect } => {
            cmd_sieve(*kind, forms.as_deref(), curves.as_deref(), aux_primes.clone(), *p_floor, branch, expect.clone())
        }
        Command::Prove { r, d, data, strict_no_cited, permissive_signs, assume_p7_congruence } => {
            let forms = match data {
                Some(dir) => load_hilbert_dir(dir)?,
                None => Vec::new(),
            };
            let sign_mode = if *permissive_signs { SignMode::Permissive } else { SignMode::Strict };
            let tr = prove(*r, *d, &forms, ProveOptions { strict_no_cited: *strict_no_cited, sign_mode, assume_p7_congruence: *assume_p7_congruence })?;
            Ok(trace_report(&tr))
        }
        Command::SecondCase { d, curves } => cmd_second_case(*d, curves.as_deref()),
        Command::Inertia { curve, ell, p } => cmd_inertia(curve, *ell, *p),
    }
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let rep = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let json = serde_json::to_string_pretty(&rep.json).unwrap() + "\n";
    match &cli.out {
        Some(path) => {
            let mut side = path.clone().into_os_string();
            side.push(".json");
            if let Err(e) = std::fs::write(path, &rep.text).and_then(|_| std::fs::write(&side, &json)) {
                eprintln!("{}: {e}", path.display());
                return 2;
            }
        }
        None if cli.json => print!("{json}"),
        None => print!("{}", rep.text),
    }
    rep.exit
}
