//! The `deuring` command line: table and JSON renderings of the
//! correspondence for one prime or a range of primes.

use std::ffi::OsString;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::clifford_orders::Fingerprint;
use crate::error::{Error, Result};
use crate::finite_fields::{is_prime, smallest_nonresidue};
use crate::matcher::{build_correspondence, Correspondence, MatchOptions, TauClass};
use crate::ternary_forms::TernaryForm;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Explicit Deuring correspondence: supersingular j-invariants and maximal
/// orders of the quaternion algebra ramified at p and ∞.
#[derive(Debug, Parser)]
#[command(name = "deuring", version)]
pub struct Cli {
    /// A single prime.
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    pub prime: Option<u64>,
    /// Every prime in A..B (inclusive).
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(u64, u64)>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// `auto`, or a comma-separated list of odd primes that must separate the orders.
    #[arg(long, default_value = "auto", value_parser = parse_ell_set)]
    pub ell_set: EllSet,
    /// Include the basis relations of each order.
    #[arg(long)]
    pub emit_orders: bool,
    /// Include the (trace, ℓ) fingerprints used for matching.
    #[arg(long)]
    pub emit_fingerprints: bool,
    /// Seed for torsion-point draws; output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EllSet {
    Auto,
    List(Vec<u64>),
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start: {e}"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_ell_set(s: &str) -> std::result::Result<EllSet, String> {
    if s == "auto" {
        return Ok(EllSet::Auto);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad ℓ {t:?}: {e}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(EllSet::List)
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema: u32,
    pub records: Vec<OutputRecord>,
}

/// One prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// `ε` in the `a±b√ε` renderings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<u64>,
    pub class_number: usize,
    pub type_number: usize,
    pub lambda: Vec<u64>,
    pub entries: Vec<EntryRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub j: String,
    pub orbit_size: usize,
    pub tau_class: TauClass,
    pub form: TernaryForm,
    pub tau: u32,
    pub seeber: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
}

pub fn type_number_one_note(p: u64) -> String {
    format!(
        "the quaternion algebra ramified at {p} and ∞ has class number one, so the type number is one"
    )
}

/// Record for `p ∈ {2, 3, 5, 7}`.
pub fn trivial_record(p: u64) -> OutputRecord {
    OutputRecord {
        p,
        note: Some(type_number_one_note(p)),
        epsilon: None,
        class_number: 1,
        type_number: 1,
        lambda: Vec::new(),
        entries: Vec::new(),
    }
}

pub fn record_from(c: &Correspondence, emit_orders: bool, emit_fingerprints: bool) -> OutputRecord {
    OutputRecord {
        p: c.p,
        note: None,
        epsilon: Some(smallest_nonresidue(c.p)),
        class_number: c.class_number(),
        type_number: c.type_number(),
        lambda: c.lambda.clone(),
        entries: c
            .entries
            .iter()
            .map(|e| EntryRecord {
                j: e.j_label.clone(),
                orbit_size: e.orbit.members.len(),
                tau_class: e.tau_class,
                form: e.form,
                tau: e.tau,
                seeber: e.form.seeber_rows(Some(e.tau)),
                relations: emit_orders.then(|| e.order.relations()),
                fingerprint: emit_fingerprints.then(|| e.isog.clone()),
            })
            .collect(),
    }
}

/// Computes the record for one prime.
pub fn compute_record(
    p: u64,
    opts: &MatchOptions,
    emit_orders: bool,
    emit_fingerprints: bool,
) -> Result<OutputRecord> {
    if matches!(p, 2 | 3 | 5 | 7) {
        return Ok(trivial_record(p));
    }
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let c = build_correspondence(p, opts)?;
    Ok(record_from(&c, emit_orders, emit_fingerprints))
}

/// Records for several primes, computed on all available cores and
/// returned in input order.
pub fn compute_records(
    primes: &[u64],
    opts: &MatchOptions,
    emit_orders: bool,
    emit_fingerprints: bool,
) -> Result<Vec<OutputRecord>> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(primes.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<OutputRecord>>>> =
        Mutex::new((0..primes.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= primes.len() {
                    break;
                }
                let r = compute_record(primes[i], opts, emit_orders, emit_fingerprints);
                slots
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

fn json_of(records: Vec<OutputRecord>) -> String {
    let doc = OutputDocument {
        schema: SCHEMA_VERSION,
        records,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
    s.push('\n');
    s
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{}{}", " ".repeat(w.saturating_sub(width(s))), s)
}

/// Table-1-style block: generic j's, then the 1728 and 0 columns, with ⋆
/// where that value is not supersingular.
pub fn render_table(rec: &OutputRecord) -> String {
    let mut out = String::new();
    if let Some(note) = &rec.note {
        out.push_str(&format!("p = {}: {note}\n", rec.p));
        return out;
    }
    let cell = |e: &EntryRecord| -> [String; 4] {
        [
            e.j.clone(),
            e.seeber[0].clone(),
            e.seeber[1].clone(),
            e.seeber[2].clone(),
        ]
    };
    let star = || ["⋆".to_string(), String::new(), String::new(), String::new()];
    let find = |c: TauClass| rec.entries.iter().find(|e| e.tau_class == c).map(cell);
    let generic: Vec<[String; 4]> = rec
        .entries
        .iter()
        .filter(|e| matches!(e.tau_class, TauClass::RationalJ | TauClass::ConjugatePair))
        .map(cell)
        .collect();
    let c1728 = find(TauClass::J1728).unwrap_or_else(star);
    let c0 = find(TauClass::ZeroJ).unwrap_or_else(star);

    let head = format!("p = {}", rec.p);
    let gw: Vec<usize> = generic
        .iter()
        .map(|c| c.iter().map(|s| width(s)).max().unwrap_or(1))
        .collect();
    let sw = |c: &[String; 4], h: &str| {
        c.iter()
            .map(|s| width(s))
            .chain([width(h)])
            .max()
            .unwrap_or(1)
    };
    let w1728 = sw(&c1728, "1728");
    let w0 = sw(&c0, "0");
    let lead = width(&head).max(6);

    let mut lines = Vec::new();
    let mut header = format!("{head:<lead$}");
    for w in &gw {
        header.push_str(&format!("  {}", " ".repeat(*w)));
    }
    header.push_str(&format!(" | {} | {}", pad("1728", w1728), pad("0", w0)));
    lines.push(header);
    for row in 0..4 {
        let mut line = " ".repeat(lead);
        for (c, w) in generic.iter().zip(&gw) {
            line.push_str(&format!("  {}", pad(&c[row], *w)));
        }
        line.push_str(&format!(
            " | {} | {}",
            pad(&c1728[row], w1728),
            pad(&c0[row], w0)
        ));
        lines.push(line);
    }
    for l in lines {
        out.push_str(l.trim_end());
        out.push('\n');
    }
    let lam: Vec<String> = rec.lambda.iter().map(|l| l.to_string()).collect();
    out.push_str(&format!("Λ = {{{}}}\n", lam.join(", ")));
    for e in &rec.entries {
        if let Some(rel) = &e.relations {
            out.push_str(&format!("j = {}: order of {}\n", e.j, e.form));
            for r in rel {
                out.push_str(&format!("    {r}\n"));
            }
        }
        if let Some(fp) = &e.fingerprint {
            let pairs: Vec<String> = fp.iter().map(|(t, n)| format!("({t}, {n})")).collect();
            out.push_str(&format!("j = {}: Isog = {{{}}}\n", e.j, pairs.join(", ")));
        }
    }
    out
}

fn primes_of(cli: &Cli) -> Vec<u64> {
    match (cli.prime, cli.range) {
        (Some(p), _) => vec![p],
        (None, Some((a, b))) => (a..=b).filter(|&n| is_prime(n)).collect(),
        (None, None) => Vec::new(),
    }
}

/// Renders everything the flags ask for.
pub fn render(cli: &Cli) -> Result<String> {
    let primes = primes_of(cli);
    if primes.is_empty() {
        return Err(Error::input("no primes in the requested range"));
    }
    if let Some(p) = cli.prime {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
    }
    let opts = MatchOptions {
        lambda: match &cli.ell_set {
            EllSet::Auto => None,
            EllSet::List(l) => Some(l.clone()),
        },
        seed: cli.seed,
    };
    let records = compute_records(&primes, &opts, cli.emit_orders, cli.emit_fingerprints)?;
    Ok(match cli.format {
        Format::Json => json_of(records),
        Format::Table => records
            .iter()
            .map(render_table)
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

/// Runs the command; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let text = match render(cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("deuring: {e}");
            return if matches!(e.root(), Error::Input(_)) {
                2
            } else {
                1
            };
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("deuring: cannot write output: {e}");
            1
        }
    }
}

/// Parses `args` (including the program name) and runs.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
    }
}
