//! `qanalog`: compute, cross-verify and scan q-analogs of descent and peak
//! polynomials.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
//! 3 counterexample found.

use std::fs;
use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qanalog::descent::{a_coefficients_from_b, b_coefficients, descent_gf_a, descent_gf_b, Basis};
use qanalog::peak::{
    admissible_supersets, check_palindromic_peak, is_admissible, peak_gf_compatible, peak_gf_pie,
    peak_gf_recurrence, q_superset_gf,
};
use qanalog::permtools::BruteForceOracle;
use qanalog::properties::ScanReport;
use qanalog::qcore::q_factorial;
use qanalog::{EnumerationCap, IntPolynomial, PositionSet};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;

/// Largest `n` accepted by `descent` and `peak`.
const MAX_N: u64 = 2000;

#[derive(Parser)]
#[command(
    name = "qanalog",
    version,
    about = "q-analogs of descent and peak polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// D_S(n,q): length generating function of permutations with descent set S.
    Descent {
        /// Comma-separated strictly increasing positive integers; "" for the empty set.
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        set: PositionSet,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_N))]
        n: u64,
        #[arg(long, value_enum, default_value_t = BasisArg::B)]
        basis: BasisArg,
        /// Also print the coefficient table in the chosen basis.
        #[arg(long)]
        coeffs: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// P_S(n,q): length generating function of permutations with peak set S.
    Peak {
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        set: PositionSet,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_N))]
        n: u64,
        #[arg(long, value_enum, default_value_t = PeakMethod::Compatible)]
        method: PeakMethod,
        /// Enumeration cap for the brute method.
        #[arg(long, default_value_t = EnumerationCap::DEFAULT)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Cross-check every formula against brute-force enumeration for n <= max-n.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = EnumerationCap::DEFAULT)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Check (a_k(S;q))_k for strong q-log-concavity over all nonempty S ⊆ [max-m].
    Scan {
        #[arg(long)]
        max_m: usize,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write elapsed_seconds as 0 so reports are byte-identical across runs.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PeakMethod {
    Compatible,
    Recurrence,
    Pie,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Descent,
    Peak,
    Identities,
    All,
}

fn parse_set(s: &str) -> Result<PositionSet, String> {
    s.parse().map_err(|e: qanalog::Error| e.to_string())
}

/// Either an exit code or a usage/I-O failure message.
type Outcome = Result<u8, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Descent {
            set,
            n,
            basis,
            coeffs,
            format,
        } => cmd_descent(&set, n as usize, basis, coeffs, format),
        Command::Peak {
            set,
            n,
            method,
            cap,
            format,
        } => cmd_peak(&set, n as usize, method, cap, format),
        Command::Verify {
            max_n,
            suite,
            cap,
            format,
        } => cmd_verify(max_n, suite, cap, format),
        Command::Scan {
            max_m,
            out,
            no_timing,
        } => cmd_scan(max_m, out, no_timing),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn emit_polynomial(p: &IntPolynomial, format: OutputFormat) {
    match format {
        OutputFormat::Text => println!("{p}"),
        OutputFormat::Latex => println!("{}", p.to_latex()),
        OutputFormat::Json => println!("{}", serde_json::to_string(p).expect("serializable")),
    }
}

fn cmd_descent(
    set: &PositionSet,
    n: usize,
    basis: BasisArg,
    coeffs: bool,
    format: OutputFormat,
) -> Outcome {
    let (basis, poly) = match basis {
        BasisArg::A => (Basis::A, descent_gf_a(set, n)),
        BasisArg::B => (Basis::B, descent_gf_b(set, n)),
    };
    let table = if coeffs && !set.is_empty() {
        let c = match basis {
            Basis::A => a_coefficients_from_b(set),
            Basis::B => b_coefficients(set),
        };
        Some(c.map_err(|e| e.to_string())?)
    } else {
        if coeffs {
            eprintln!("note: the empty set has no coefficient table");
        }
        None
    };
    let rows: Vec<(usize, &IntPolynomial)> = table
        .iter()
        .flat_map(|t| t.coeffs.iter().enumerate().skip(1))
        .collect();

    match format {
        OutputFormat::Json => {
            let mut doc = json!({
                "set": set,
                "n": n,
                "basis": basis,
                "polynomial": poly,
            });
            if table.is_some() {
                let entries: Vec<_> = rows
                    .iter()
                    .map(|(k, p)| json!({ "k": k, "coefficient": p }))
                    .collect();
                doc["coefficients"] = json!(entries);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        OutputFormat::Text => {
            println!("{poly}");
            for (k, p) in &rows {
                println!("{basis}_{k} = {p}");
            }
        }
        OutputFormat::Latex => {
            println!("{}", poly.to_latex());
            for (k, p) in &rows {
                println!("{basis}_{{{k}}} = {}", p.to_latex());
            }
        }
    }
    Ok(0)
}

fn cmd_peak(
    set: &PositionSet,
    n: usize,
    method: PeakMethod,
    cap: usize,
    format: OutputFormat,
) -> Outcome {
    if method == PeakMethod::Brute {
        let cap = EnumerationCap::new(cap).map_err(|e| e.to_string())?;
        cap.check(n).map_err(|e| e.to_string())?;
    }
    if !is_admissible(set, n) {
        eprintln!("warning: {set} is not {n}-admissible; no permutation has this peak set");
        emit_polynomial(&IntPolynomial::zero(), format);
        return Ok(0);
    }
    let poly = match method {
        PeakMethod::Compatible => peak_gf_compatible(set, n),
        PeakMethod::Recurrence => peak_gf_recurrence(set, n),
        PeakMethod::Pie => peak_gf_pie(set, n),
        PeakMethod::Brute => {
            let cap = EnumerationCap::new(cap).map_err(|e| e.to_string())?;
            qanalog::permtools::brute_peak_gf(set, n, cap).map_err(|e| e.to_string())?
        }
    };
    emit_polynomial(&poly, format);
    Ok(0)
}

#[derive(Serialize)]
struct Mismatch {
    suite: &'static str,
    set: Option<PositionSet>,
    n: usize,
    methods: [&'static str; 2],
    left: IntPolynomial,
    right: IntPolynomial,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn compare(
        &mut self,
        suite: &'static str,
        set: Option<&PositionSet>,
        n: usize,
        methods: [&'static str; 2],
        left: IntPolynomial,
        right: IntPolynomial,
    ) {
        self.checks += 1;
        if left != right {
            self.mismatches.push(Mismatch {
                suite,
                set: set.cloned(),
                n,
                methods,
                left,
                right,
            });
        }
    }
}

fn cmd_verify(max_n: usize, suite: Suite, cap: usize, format: OutputFormat) -> Outcome {
    let cap = EnumerationCap::new(cap).map_err(|e| e.to_string())?;
    cap.check(max_n).map_err(|e| e.to_string())?;
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut tally = Tally::default();

    for n in 1..=max_n {
        let oracle = BruteForceOracle::build(n, cap).map_err(|e| e.to_string())?;
        let sets = PositionSet::all_subsets(n - 1);
        if wants(Suite::Descent) {
            for s in &sets {
                let brute = oracle.descent_gf(s);
                tally.compare(
                    "descent",
                    Some(s),
                    n,
                    ["a", "brute"],
                    descent_gf_a(s, n),
                    brute.clone(),
                );
                tally.compare(
                    "descent",
                    Some(s),
                    n,
                    ["b", "brute"],
                    descent_gf_b(s, n),
                    brute,
                );
            }
        }
        if wants(Suite::Peak) {
            for s in &sets {
                let brute = oracle.peak_gf(s);
                tally.compare(
                    "peak",
                    Some(s),
                    n,
                    ["compatible", "brute"],
                    peak_gf_compatible(s, n),
                    brute.clone(),
                );
                tally.compare(
                    "peak",
                    Some(s),
                    n,
                    ["recurrence", "brute"],
                    peak_gf_recurrence(s, n),
                    brute.clone(),
                );
                tally.compare(
                    "peak",
                    Some(s),
                    n,
                    ["pie", "brute"],
                    peak_gf_pie(s, n),
                    brute,
                );
            }
        }
        if wants(Suite::Identities) {
            let factorial = q_factorial(n);
            let des: IntPolynomial = sets.iter().map(|s| oracle.descent_gf(s)).sum();
            tally.compare(
                "identities",
                None,
                n,
                ["sum of D_S", "[n]!"],
                des,
                factorial.clone(),
            );
            let admissible: Vec<&PositionSet> =
                sets.iter().filter(|s| is_admissible(s, n)).collect();
            let peaks: IntPolynomial = admissible.iter().map(|s| oracle.peak_gf(s)).sum();
            tally.compare(
                "identities",
                None,
                n,
                ["sum of P_S", "[n]!"],
                peaks,
                factorial,
            );
            for s in admissible {
                let unwound: IntPolynomial = admissible_supersets(s, n)
                    .iter()
                    .map(|t| oracle.peak_gf(t))
                    .sum();
                tally.compare(
                    "identities",
                    Some(s),
                    n,
                    ["Q_S", "brute supersets"],
                    q_superset_gf(s, n),
                    unwound,
                );
                tally.checks += 1;
                if !check_palindromic_peak(s, n) {
                    let p = peak_gf_compatible(s, n);
                    let d = n * (n - 1) / 2;
                    let mirror = p.reverse_in_degree(d).unwrap_or_default();
                    tally.mismatches.push(Mismatch {
                        suite: "identities",
                        set: Some(s.clone()),
                        n,
                        methods: ["P_S", "reversed P_S"],
                        left: p,
                        right: mirror,
                    });
                }
            }
        }
    }

    let passed = tally.mismatches.is_empty();
    match format {
        OutputFormat::Json => {
            let doc = json!({
                "max_n": max_n,
                "suite": suite,
                "checks": tally.checks,
                "passed": passed,
                "mismatches": tally.mismatches,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        OutputFormat::Text | OutputFormat::Latex => {
            let render = |p: &IntPolynomial| match format {
                OutputFormat::Latex => p.to_latex(),
                _ => p.to_string(),
            };
            for m in &tally.mismatches {
                let set = m
                    .set
                    .as_ref()
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "-".into());
                println!(
                    "MISMATCH {} S={} n={}: {} vs {}",
                    m.suite, set, m.n, m.methods[0], m.methods[1]
                );
                println!("  {}: {}", m.methods[0], render(&m.left));
                println!("  {}: {}", m.methods[1], render(&m.right));
            }
            println!(
                "{}: {} checks, {} mismatches (n <= {max_n})",
                if passed { "PASS" } else { "FAIL" },
                tally.checks,
                tally.mismatches.len()
            );
        }
    }
    Ok(if passed { 0 } else { EXIT_VERIFY })
}

fn cmd_scan(max_m: usize, out: Option<PathBuf>, no_timing: bool) -> Outcome {
    let show_progress = std::io::stderr().is_terminal();
    let mut report = ScanReport::run(max_m, |done, total| {
        if show_progress && (done == total || done % 64 == 0) {
            eprint!("\rchecked {done}/{total}");
            if done == total {
                eprintln!();
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if no_timing {
        report.elapsed_seconds = 0.0;
    }
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    match &out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!(
                "checked {} sets, {} counterexamples; report written to {}",
                report.sets_checked,
                report.counterexamples.len(),
                path.display()
            );
        }
        None => print!("{text}"),
    }
    if report.counterexamples.is_empty() {
        Ok(0)
    } else {
        for c in &report.counterexamples {
            eprintln!(
                "counterexample: S={} {} at ({}, {})",
                c.set, c.kind, c.i, c.j
            );
        }
        Ok(EXIT_COUNTEREXAMPLE)
    }
}
