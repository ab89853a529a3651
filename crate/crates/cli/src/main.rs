//! Command-line front end: solve one `n`, run a range, verify certificates,
//! and compare a range run with the table of known solutions.
//!
//! Exit codes: 0 when everything is decided and verified, 2 when something
//! is undecided, 1 on a verification failure or contradiction.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use quartdiff_core::certificate::{Certificate, Config, Proof, Verdict};
use quartdiff_core::fixtures::rational_solutions;
use quartdiff_core::pipeline::{run_range, solve, RangeSummary};
use quartdiff_core::sieve::GeneratorTable;
use quartdiff_core::verify::verify_certificate;

const OK: u8 = 0;
const FAILURE: u8 = 1;
const UNDECIDED: u8 = 2;

#[derive(Parser)]
#[command(name = "quartdiff", version, about = "Is n a difference of two rational fourth powers?")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Search bounds shared by the solving commands.
#[derive(clap::Args)]
struct Bounds {
    /// Witness search height.
    #[arg(long, default_value_t = 250)]
    height: u64,
    /// Largest prime tried for local obstructions.
    #[arg(long, default_value_t = 13)]
    local_prime_cap: u64,
    /// Lifting depth for the quartic systems (default depends on the prime).
    #[arg(long)]
    padic_depth: Option<u32>,
    /// Sieve primes are below this bound.
    #[arg(long, default_value_t = 229)]
    sieve_prime_cap: u64,
    /// Generator file: one curve per line, `A` then `X Y Z` triples.
    #[arg(long)]
    generators: Option<PathBuf>,
}

impl Bounds {
    fn config(&self) -> Result<Config> {
        let mut cfg = Config {
            height: self.height,
            local_prime_cap: self.local_prime_cap,
            padic_depth: self.padic_depth,
            sieve_prime_cap: self.sieve_prime_cap,
            ..Config::default()
        };
        if let Some(path) = &self.generators {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.generators = GeneratorTable::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide one n and print the reasoning.
    Solve {
        n: u64,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the certificate as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Decide every n in lo..=hi.
    Range {
        lo: u64,
        hi: u64,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the summary and all certificates as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also list perfect fourth powers (solutions with y = 0).
        #[arg(long)]
        include_fourth_powers: bool,
    },
    /// Check a certificate file, or a range file written by `range --out`.
    Verify { file: PathBuf },
    /// Run a range and compare it with the table of known solutions.
    TableCheck {
        #[arg(long, default_value_t = 1)]
        lo: u64,
        #[arg(long, default_value_t = 1000)]
        hi: u64,
        #[command(flatten)]
        bounds: Bounds,
    },
}

/// Contents of a `range --out` file.
#[derive(Serialize, Deserialize)]
struct RangeFile {
    summary: RangeSummary,
    certificates: Vec<Certificate>,
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Representable => "representable",
        Verdict::NotRepresentable => "not representable",
        Verdict::Undecided => "undecided",
    }
}

fn describe(cert: &Certificate) {
    println!("n = {}: {}", cert.n, verdict_word(cert.verdict));
    if cert.reduction.k > 1 {
        println!("  reduced: {} = {}^4 * {}", cert.n, cert.reduction.k, cert.reduction.n_prime);
    }
    match &cert.proof {
        Proof::Witness { witness: w } => {
            println!("  {} = ({}/{})^4 - ({}/{})^4", cert.n, w.x, w.z, w.y, w.z);
        }
        Proof::EasyCurveRank0 { step } => {
            println!("  curve y^2 = x^3 + ({})x has rank 0 and no usable torsion", step.curve_a);
        }
        Proof::Triples { triples } => {
            for t in triples {
                let (a, b, c) = t.equation.triple();
                let tag = t.step.as_ref().map_or("open", |s| s.tag());
                println!("  {}u^8 + {}v^8 = {}w^4: {tag}", a * a, b * b, c);
            }
        }
    }
    if cert.is_conditional() {
        println!("  conditional on searched generators being complete");
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn exit_for(verdicts: impl IntoIterator<Item = Verdict>) -> u8 {
    if verdicts.into_iter().any(|v| v == Verdict::Undecided) {
        UNDECIDED
    } else {
        OK
    }
}

fn cmd_solve(n: u64, bounds: &Bounds, emit: Option<&Path>) -> Result<u8> {
    anyhow::ensure!(n >= 1, "n must be positive");
    let outcome = solve(n, &bounds.config()?);
    let cert = outcome.certificate();
    describe(cert);
    if let Some(path) = emit {
        write_json(path, cert)?;
    }
    Ok(exit_for([cert.verdict]))
}

fn cmd_range(lo: u64, hi: u64, bounds: &Bounds, out: Option<&Path>, fourth: bool) -> Result<u8> {
    anyhow::ensure!(1 <= lo && lo <= hi, "need 1 <= lo <= hi");
    let (summary, outcomes) = run_range(lo, hi, &bounds.config()?, fourth);
    for e in &summary.entries {
        let flag = if e.conditional { " (conditional)" } else { "" };
        println!("{}\t{}{flag}", e.n, e.label);
    }
    println!(
        "representable: {}, not representable: {}, undecided: {}",
        summary.representable.len(),
        summary.not_representable.len(),
        summary.undecided.len()
    );
    println!("representable n: {:?}", summary.representable);
    if !summary.undecided.is_empty() {
        println!("undecided n: {:?}", summary.undecided);
    }
    if fourth {
        println!("fourth powers (y = 0): {:?}", summary.fourth_powers);
    }
    for (tag, count) in &summary.mechanisms {
        println!("  {tag}: {count}");
    }
    let code = exit_for(summary.entries.iter().map(|e| e.verdict));
    if let Some(path) = out {
        let certificates = outcomes.into_iter().map(|o| o.certificate().clone()).collect();
        write_json(path, &RangeFile { summary, certificates })?;
    }
    Ok(code)
}

fn cmd_verify(file: &Path) -> Result<u8> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let certs = match serde_json::from_str::<Certificate>(&text) {
        Ok(c) => vec![c],
        Err(single) => serde_json::from_str::<RangeFile>(&text)
            .map(|r| r.certificates)
            .map_err(|_| single)
            .context("not a certificate or range file")?,
    };
    let mut code = OK;
    let mut invalid = false;
    for cert in &certs {
        match verify_certificate(cert) {
            Ok(report) => {
                let mut line = format!("n = {}: verified, {}", report.n, verdict_word(report.verdict));
                if !report.conditional.is_empty() {
                    line += &format!(" (conditional: {})", report.conditional.join("; "));
                }
                if !report.uncovered.is_empty() {
                    line += &format!(" (open: {:?})", report.uncovered);
                    code = code.max(UNDECIDED);
                }
                println!("{line}");
            }
            Err(e) => {
                println!("n = {}: INVALID {e}", cert.n);
                invalid = true;
            }
        }
    }
    Ok(if invalid { FAILURE } else { code })
}

fn cmd_table_check(lo: u64, hi: u64, bounds: &Bounds) -> Result<u8> {
    anyhow::ensure!(1 <= lo && lo <= hi, "need 1 <= lo <= hi");
    let (summary, _) = run_range(lo, hi, &bounds.config()?, false);
    let table: BTreeSet<u64> = rational_solutions()
        .iter()
        .map(|r| r.n)
        .filter(|n| (lo..=hi).contains(n))
        .collect();
    let found: BTreeSet<u64> = summary.representable.iter().copied().collect();
    let excluded: BTreeSet<u64> = summary.not_representable.iter().copied().collect();
    let extra: Vec<u64> = found.difference(&table).copied().collect();
    let wrongly_excluded: Vec<u64> = table.intersection(&excluded).copied().collect();
    let missing: Vec<u64> = table.difference(&found).copied().collect();
    println!("table entries in {lo}..={hi}: {}", table.len());
    println!("found with witnesses: {}", table.intersection(&found).count());
    if !missing.is_empty() {
        println!("table entries without a witness at this height: {missing:?}");
    }
    if !extra.is_empty() {
        println!("representable but not in the table: {extra:?}");
    }
    if !wrongly_excluded.is_empty() {
        println!("table entries certified not representable: {wrongly_excluded:?}");
    }
    println!("undecided: {:?}", summary.undecided);
    Ok(if !extra.is_empty() || !wrongly_excluded.is_empty() {
        FAILURE
    } else if !missing.is_empty() || !summary.undecided.is_empty() {
        UNDECIDED
    } else {
        OK
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { n, bounds, emit } => cmd_solve(*n, bounds, emit.as_deref()),
        Command::Range {
            lo,
            hi,
            bounds,
            out,
            include_fourth_powers,
        } => cmd_range(*lo, *hi, bounds, out.as_deref(), *include_fourth_powers),
        Command::Verify { file } => cmd_verify(file),
        Command::TableCheck { lo, hi, bounds } => cmd_table_check(*lo, *hi, bounds),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}
