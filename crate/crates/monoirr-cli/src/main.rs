//! Command-line front end for the monomial irreducibility classifier.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 work
//! budget exceeded.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use monoirr::budget::Budget;
use monoirr::closed_forms::{verify_closed_forms, ClosedFormMismatch, FamilyCase};
use monoirr::error::Error;
use monoirr::modular::{primes_up_to, Modulus};
use monoirr::monomial::{
    classify_range, find_reduction_certificate, monomial_report, MonomialReport,
    RangeClassification, ReductionCertificate,
};
use monoirr::screening::{
    density_report, omega_unscreened, screen_prime, screen_prime_fixed, PrimeScreenReport,
    ScreenRule, DEFAULT_NMAX,
};
use monoirr::solutions::enumerate_solutions;

const CSV_COLUMNS: &str = "CSV columns per subcommand:
  solve:               N,size,sign,entries   (entries space-separated)
  monomial:            N,k,size,sign,irreducible,part_size,junction_a
  classify:            N,monomially_irreducible,reducible_k_count,first_reducible_k
  screen:              p,rule,root,n,eps,s,x
  omega:               p
  density:             x,numerator,denominator,value
  verify-closed-forms: kind,k,m,l,case,n,point,expected,got";

#[derive(Parser)]
#[command(
    name = "monoirr",
    version,
    about = "Classify moduli N by irreducibility of their minimal monomial solutions \
             of M_n(a_1, ..., a_n) = ±Id over Z/NZ",
    after_long_help = CSV_COLUMNS
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores). Output order never depends on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Work budget in abstract units (matrix products / residue probes).
    #[arg(long, global = true, env = "MONOIRR_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all size-n solutions over Z/NZ, lexicographically.
    Solve {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        size: usize,
    },
    /// Minimal monomial sizes and reduction certificates for one k or all k.
    Monomial {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Classify every N in a range as monomially irreducible or not.
    Classify {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Screening rules for all primes 5 <= p <= the bound.
    Screen {
        #[arg(long)]
        to: u64,
        /// Also run the generic witness search where no fixed rule applies.
        #[arg(long)]
        generic: bool,
        /// Cap on the witness size n for the generic search.
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: u32,
    },
    /// Primes the fixed screening rules leave unscreened.
    Omega {
        #[arg(long)]
        to: u64,
    },
    /// Share of primes <= x screened by the two quadratic rules.
    Density {
        #[arg(long)]
        to: u64,
    },
    /// Check the closed-form continuant tables against the recurrence.
    VerifyClosedForms {
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        mmax: u64,
    },
    /// Replay a reduction certificate from a JSON file; exit 0 iff it is
    /// valid and canonical (bit-identical to what this tool emits).
    CheckCertificate {
        #[arg(long)]
        file: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let budget = cli.budget.map(Budget::new).unwrap_or_default();
    match run(&cli.command, cli.format, budget) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidArgument(_) => 2,
                Error::UnsupportedSize(_) | Error::BudgetExceeded(_) => 3,
                Error::Internal(_) => 1,
            })
        }
    }
}

fn run(command: &Command, format: Format, budget: Budget) -> Result<ExitCode, Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match command {
        Command::Solve { modulus, size } => cmd_solve(&mut out, format, budget, *modulus, *size)?,
        Command::Monomial { modulus, k } => cmd_monomial(&mut out, format, *modulus, *k)?,
        Command::Classify { from, to } => cmd_classify(&mut out, format, budget, *from, *to)?,
        Command::Screen { to, generic, nmax } => {
            cmd_screen(&mut out, format, *to, *generic, *nmax)?
        }
        Command::Omega { to } => cmd_omega(&mut out, format, *to)?,
        Command::Density { to } => cmd_density(&mut out, format, *to)?,
        Command::VerifyClosedForms { kmax, mmax } => {
            cmd_verify_closed_forms(&mut out, format, *kmax, *mmax)?
        }
        Command::CheckCertificate { file } => cmd_check_certificate(&mut out, format, file)?,
    };
    out.flush().map_err(io_err)?;
    Ok(code)
}

fn io_err(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::BrokenPipe {
        // Downstream closed the pipe (e.g. `| head`); nothing left to say.
        std::process::exit(0);
    }
    Error::Internal(format!("writing output: {e}"))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Internal(format!("serializing output: {e}"))
}

fn json_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<(), Error> {
    let s = serde_json::to_string(value).map_err(json_err)?;
    writeln!(out, "{s}").map_err(io_err)
}

// ---------------------------------------------------------------------------
// solve

#[derive(Serialize)]
struct SolveReport {
    #[serde(rename = "N")]
    modulus: u64,
    size: usize,
    count: usize,
    solutions: Vec<SolutionJson>,
}

#[derive(Serialize)]
struct SolutionJson {
    entries: Vec<u64>,
    sign: i8,
}

fn cmd_solve(
    out: &mut impl Write,
    format: Format,
    budget: Budget,
    modulus: u64,
    size: usize,
) -> Result<ExitCode, Error> {
    let md = Modulus::new(modulus)?;
    let solutions = enumerate_solutions(md, size, budget)?;
    match format {
        Format::Text => {
            for s in &solutions {
                let sign = s.sign().expect("enumerated tuples are solutions");
                writeln!(out, "({}) sign={sign}", join(s.values(), ", ")).map_err(io_err)?;
            }
            writeln!(out, "{} solution(s) of size {size} mod {modulus}", solutions.len())
                .map_err(io_err)?;
        }
        Format::Json => {
            let report = SolveReport {
                modulus,
                size,
                count: solutions.len(),
                solutions: solutions
                    .iter()
                    .map(|s| SolutionJson {
                        entries: s.values().to_vec(),
                        sign: s.sign().expect("solution").to_i8(),
                    })
                    .collect(),
            };
            json_line(out, &report)?;
        }
        Format::Csv => {
            writeln!(out, "N,size,sign,entries").map_err(io_err)?;
            for s in &solutions {
                let sign = s.sign().expect("solution").to_i8();
                writeln!(out, "{modulus},{size},{sign},{}", join(s.values(), " "))
                    .map_err(io_err)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join(values: &[u64], sep: &str) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}

// ---------------------------------------------------------------------------
// monomial

fn cmd_monomial(
    out: &mut impl Write,
    format: Format,
    modulus: u64,
    k: Option<u64>,
) -> Result<ExitCode, Error> {
    let md = Modulus::new(modulus)?;
    let reports: Vec<MonomialReport> = match k {
        Some(k) => {
            if k == 0 || k >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "k must lie in [1, {modulus}), got {k}"
                )));
            }
            vec![monomial_report(md.residue(k))?]
        }
        None => {
            use rayon::prelude::*;
            (1..modulus)
                .into_par_iter()
                .map(|k| monomial_report(md.residue(k)))
                .collect::<Result<_, _>>()?
        }
    };
    match format {
        Format::Text => {
            for r in &reports {
                let status = match &r.certificate {
                    Some(c) => format!(
                        "reducible part_size={} junction_a={}",
                        c.part_size, c.junction_a
                    ),
                    None => "irreducible".into(),
                };
                writeln!(out, "k={} size={} sign={:+} {status}", r.k, r.size, r.sign)
                    .map_err(io_err)?;
            }
        }
        Format::Json => {
            if k.is_some() {
                json_line(out, &reports[0])?;
            } else {
                json_line(out, &reports)?;
            }
        }
        Format::Csv => {
            writeln!(out, "N,k,size,sign,irreducible,part_size,junction_a").map_err(io_err)?;
            for r in &reports {
                let (part, junction) = match &r.certificate {
                    Some(c) => (c.part_size.to_string(), c.junction_a.to_string()),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{part},{junction}",
                    r.modulus, r.k, r.size, r.sign, r.irreducible
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// classify

fn cmd_classify(
    out: &mut impl Write,
    format: Format,
    budget: Budget,
    from: u64,
    to: u64,
) -> Result<ExitCode, Error> {
    let result: RangeClassification = classify_range(from, to, budget)?;
    match format {
        Format::Text => {
            for v in &result.verdicts {
                let status = if v.monomially_irreducible { "irreducible" } else { "reducible" };
                writeln!(out, "N={}: {status}", v.modulus).map_err(io_err)?;
            }
            let irreducible: Vec<String> = result
                .verdicts
                .iter()
                .filter(|v| v.monomially_irreducible)
                .map(|v| v.modulus.to_string())
                .collect();
            writeln!(out, "irreducible: {}", irreducible.join(" ")).map_err(io_err)?;
            for gap in &result.gaps {
                writeln!(out, "skipped (budget exceeded): {}..={}", gap.from, gap.to)
                    .map_err(io_err)?;
            }
        }
        Format::Json => {
            // Streamed so large ranges do not buffer the whole document; the
            // byte layout matches serde_json's compact encoding.
            write!(out, "{{\"verdicts\":[").map_err(io_err)?;
            for (i, v) in result.verdicts.iter().enumerate() {
                if i > 0 {
                    write!(out, ",").map_err(io_err)?;
                }
                let s = serde_json::to_string(v).map_err(json_err)?;
                write!(out, "{s}").map_err(io_err)?;
            }
            let gaps = serde_json::to_string(&result.gaps).map_err(json_err)?;
            writeln!(out, "],\"gaps\":{gaps}}}").map_err(io_err)?;
        }
        Format::Csv => {
            writeln!(out, "N,monomially_irreducible,reducible_k_count,first_reducible_k")
                .map_err(io_err)?;
            for v in &result.verdicts {
                let reducible: Vec<u64> =
                    v.witnesses.iter().filter(|w| !w.irreducible).map(|w| w.k).collect();
                let first = reducible.first().map(u64::to_string).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{first}",
                    v.modulus,
                    v.monomially_irreducible,
                    reducible.len()
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(if result.gaps.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

// ---------------------------------------------------------------------------
// screen

fn rule_fields(rule: &ScreenRule) -> (&'static str, [String; 5]) {
    let name = match rule {
        ScreenRule::Quadratic5 { .. } => "quadratic-5",
        ScreenRule::Quadratic8 { .. } => "quadratic-8",
        ScreenRule::PolyCubic { .. } => "poly-cubic",
        ScreenRule::PolyQuintic { .. } => "poly-quintic",
        ScreenRule::PolySextic { .. } => "poly-sextic",
        ScreenRule::PolyNonic { .. } => "poly-nonic",
        ScreenRule::Generic(_) => "generic",
        ScreenRule::None => "none",
    };
    let mut fields: [String; 5] = Default::default();
    match rule {
        ScreenRule::Quadratic5 { root }
        | ScreenRule::Quadratic8 { root }
        | ScreenRule::PolyCubic { root }
        | ScreenRule::PolyQuintic { root }
        | ScreenRule::PolySextic { root }
        | ScreenRule::PolyNonic { root } => {
            fields[0] = root.to_string();
        }
        ScreenRule::Generic(w) => {
            fields[1] = w.n.to_string();
            fields[2] = w.eps.to_string();
            fields[3] = w.s.to_string();
            fields[4] = w.x.to_string();
        }
        ScreenRule::None => {}
    }
    (name, fields)
}

fn cmd_screen(
    out: &mut impl Write,
    format: Format,
    to: u64,
    generic: bool,
    nmax: u32,
) -> Result<ExitCode, Error> {
    use rayon::prelude::*;
    let reports: Vec<PrimeScreenReport> = primes_up_to(to)?
        .into_par_iter()
        .filter(|&p| p >= 5)
        .map(|p| {
            let rule = if generic { screen_prime(p, nmax)? } else { screen_prime_fixed(p)? };
            Ok(PrimeScreenReport { p, rule })
        })
        .collect::<Result<_, Error>>()?;
    match format {
        Format::Text => {
            for r in &reports {
                let (name, f) = rule_fields(&r.rule);
                let detail = match &r.rule {
                    ScreenRule::Generic(_) => {
                        format!(" n={} eps={} s={} x={}", f[1], f[2], f[3], f[4])
                    }
                    ScreenRule::None => String::new(),
                    _ => format!(" root={}", f[0]),
                };
                writeln!(out, "p={} rule={name}{detail}", r.p).map_err(io_err)?;
            }
        }
        Format::Json => json_line(out, &reports)?,
        Format::Csv => {
            writeln!(out, "p,rule,root,n,eps,s,x").map_err(io_err)?;
            for r in &reports {
                let (name, f) = rule_fields(&r.rule);
                writeln!(out, "{},{name},{},{},{},{},{}", r.p, f[0], f[1], f[2], f[3], f[4])
                    .map_err(io_err)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// omega / density

fn cmd_omega(out: &mut impl Write, format: Format, to: u64) -> Result<ExitCode, Error> {
    let unscreened = omega_unscreened(to)?;
    match format {
        Format::Text => {
            writeln!(
                out,
                "{} prime(s) <= {to} unscreened by the fixed rules: {}",
                unscreened.len(),
                join(&unscreened, " ")
            )
            .map_err(io_err)?;
        }
        Format::Json => json_line(out, &unscreened)?,
        Format::Csv => {
            writeln!(out, "p").map_err(io_err)?;
            for p in &unscreened {
                writeln!(out, "{p}").map_err(io_err)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_density(out: &mut impl Write, format: Format, to: u64) -> Result<ExitCode, Error> {
    let report = density_report(to)?;
    match format {
        Format::Text => {
            writeln!(
                out,
                "D({}) = {}/{} = {}",
                report.x, report.numerator, report.denominator, report.value
            )
            .map_err(io_err)?;
            for c in &report.classes {
                writeln!(out, "  primes = {} mod {}: {}", c.residue, c.modulus, c.count)
                    .map_err(io_err)?;
            }
        }
        Format::Json => json_line(out, &report)?,
        Format::Csv => {
            writeln!(out, "x,numerator,denominator,value").map_err(io_err)?;
            writeln!(
                out,
                "{},{},{},{}",
                report.x, report.numerator, report.denominator, report.value
            )
            .map_err(io_err)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify-closed-forms / check-certificate

fn mismatch_row(m: &ClosedFormMismatch) -> String {
    fn case_name(c: FamilyCase) -> &'static str {
        match c {
            FamilyCase::Plus => "plus",
            FamilyCase::Minus => "minus",
        }
    }
    match m {
        ClosedFormMismatch::ClosedForm { k, m, l, case, n, expected, got } => {
            format!("closed-form,{k},{m},{l},{},{n},,{expected},{got}", case_name(*case))
        }
        ClosedFormMismatch::TableRow { k, m, l, case, n, expected, got } => {
            format!("table-row,{k},{m},{l},{},{n},,{expected},{got}", case_name(*case))
        }
        ClosedFormMismatch::MinimalSize { k, m, point, expected, got } => {
            format!("minimal-size,{k},{m},,,,{point},{expected},{got}")
        }
    }
}

fn cmd_verify_closed_forms(
    out: &mut impl Write,
    format: Format,
    kmax: u64,
    mmax: u64,
) -> Result<ExitCode, Error> {
    let mismatches = verify_closed_forms(kmax, mmax)?;
    match format {
        Format::Text => {
            if mismatches.is_empty() {
                writeln!(out, "no mismatches (k <= {kmax}, m <= {mmax}, n <= 48)")
                    .map_err(io_err)?;
            } else {
                for m in &mismatches {
                    writeln!(out, "mismatch: {m:?}").map_err(io_err)?;
                }
                writeln!(out, "{} mismatch(es)", mismatches.len()).map_err(io_err)?;
            }
        }
        Format::Json => json_line(out, &mismatches)?,
        Format::Csv => {
            writeln!(out, "kind,k,m,l,case,n,point,expected,got").map_err(io_err)?;
            for m in &mismatches {
                writeln!(out, "{}", mismatch_row(m)).map_err(io_err)?;
            }
        }
    }
    Ok(if mismatches.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct CertificateCheck {
    valid: bool,
    reason: String,
}

fn cmd_check_certificate(
    out: &mut impl Write,
    format: Format,
    file: &str,
) -> Result<ExitCode, Error> {
    let body = fs::read_to_string(file)
        .map_err(|e| Error::InvalidArgument(format!("reading {file}: {e}")))?;
    let cert: ReductionCertificate = serde_json::from_str(&body)
        .map_err(|e| Error::InvalidArgument(format!("parsing {file}: {e}")))?;

    // Replay everything the certificate claims, then require it to be the
    // canonical certificate (the one the deterministic search emits), so
    // that any mutation of an emitted certificate is rejected.
    let check = match cert.validate() {
        Err(reason) => CertificateCheck { valid: false, reason },
        Ok(()) => {
            let modulus = Modulus::new(cert.modulus)?;
            match find_reduction_certificate(modulus.residue(cert.k))? {
                Some(canonical) if canonical == cert => CertificateCheck {
                    valid: true,
                    reason: "replays correctly and matches the canonical certificate".into(),
                },
                Some(canonical) => CertificateCheck {
                    valid: false,
                    reason: format!(
                        "replays but is not canonical: expected part_size={}, junction_a={}",
                        canonical.part_size, canonical.junction_a
                    ),
                },
                None => CertificateCheck {
                    valid: false,
                    reason: "classifier finds the minimal monomial solution irreducible".into(),
                },
            }
        }
    };

    match format {
        Format::Text => {
            writeln!(
                out,
                "{}: {}",
                if check.valid { "valid" } else { "invalid" },
                check.reason
            )
            .map_err(io_err)?;
        }
        Format::Json => json_line(out, &check)?,
        Format::Csv => {
            writeln!(out, "valid,reason").map_err(io_err)?;
            writeln!(out, "{},{}", check.valid, check.reason.replace(',', ";")).map_err(io_err)?;
        }
    }
    Ok(if check.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
