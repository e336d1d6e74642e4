//! The `sdesign` command line.
//!
//! Exit codes: 0 success, 1 verification failure, budget exhaustion or
//! bound mismatch, 2 usage, I/O or parse error, 3 size not constructible.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::design::{default_tolerance, DesignMatrix};
use crate::error::Error;
use crate::format::{self, Format};
use crate::harmonic::{moment_check, verify_design, VerificationReport};
use crate::planner::{self, classify, Status};
use crate::sidon::{self, SearchBudget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONSTRUCTIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sdesign",
    version,
    about = "Construct and verify spherical 3-designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a 3-design of the given size on S^d.
    Construct {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        points: usize,
        /// Write the design here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
        /// Verification tolerance, default 1e-9 * n.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check a design file.
    Verify {
        file: PathBuf,
        /// Strength to check, default the one claimed in the file.
        #[arg(long)]
        strength: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Sidon-type sets in Z_n.
    Sidon {
        #[command(subcommand)]
        command: SidonCommand,
    },
    /// Constructible sizes for each dimension up to d-max.
    Table {
        #[arg(long, default_value_t = 9)]
        d_max: usize,
        /// Build and verify every listed size.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Confirm that no regular 3-design exists for odd n below 5(d+1)/2.
    Scan {
        #[arg(long, default_value_t = 21)]
        d_max: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Subcommand, Debug)]
enum SidonCommand {
    /// The explicit set meeting the lower bound.
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Exhaustive search for s(n, t).
    Search {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Compare s(n, t) with the lower bound for 2 <= n <= max-n.
    Table {
        #[arg(long)]
        max_n: u64,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Worker threads, default all cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Maximum search nodes per modulus.
    #[arg(long)]
    budget: Option<u64>,
    /// Time limit per modulus, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.budget,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Write failures on stdout/stderr are ignored; there is nowhere to report them.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Runs the command line with `args` (including the program name) and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let mut io = Io { out, err };
    match cli.command {
        Command::Construct {
            dim,
            points,
            output,
            format,
            tol,
        } => construct(&mut io, dim, points, output, format, tol),
        Command::Verify {
            file,
            strength,
            tol,
            format,
        } => verify(&mut io, file, strength, tol, format),
        Command::Sidon { command } => match command {
            SidonCommand::Construct { n, t, format } => sidon_construct(&mut io, n, t, format),
            SidonCommand::Search {
                n,
                t,
                budget,
                format,
            } => sidon_search(&mut io, n, t, budget.budget(), format),
            SidonCommand::Table {
                max_n,
                t,
                budget,
                jobs,
                format,
            } => sidon_table(&mut io, max_n, t, budget.budget(), jobs, format),
        },
        Command::Table {
            d_max,
            check,
            format,
        } => table(&mut io, d_max, check, format),
        Command::Scan {
            d_max,
            budget,
            format,
        } => scan(&mut io, d_max, budget.budget(), format),
    }
}

fn usage(io: &mut Io, e: impl std::fmt::Display) -> i32 {
    say!(io.err, "error: {e}");
    EXIT_USAGE
}

#[derive(Serialize)]
struct Reports<'a> {
    recipe: Option<&'a str>,
    verify: &'a VerificationReport,
    moments: &'a VerificationReport,
}

fn check_both(
    u: &DesignMatrix,
    t: u32,
    tol: f64,
) -> Result<(VerificationReport, VerificationReport), Error> {
    Ok((verify_design(u, t, tol)?, moment_check(u, t, tol)?))
}

fn construct(
    io: &mut Io,
    d: usize,
    n: usize,
    output: Option<PathBuf>,
    format: OutFormat,
    tol: Option<f64>,
) -> i32 {
    if d == 0 {
        return usage(io, "--dim must be at least 1");
    }
    let feasibility = classify(d, n);
    if feasibility.status != Status::Constructible {
        say!(
            io.err,
            "no construction for {n} points on S^{d}: {}",
            feasibility.reason
        );
        return EXIT_NOT_CONSTRUCTIBLE;
    }
    let u = match planner::build(d, n) {
        Ok(u) => u,
        Err(e) => {
            say!(io.err, "error: {e}");
            return EXIT_FAIL;
        }
    };
    let tol = tol.unwrap_or_else(|| default_tolerance(n));
    let (v, m) = match check_both(&u, 3, tol) {
        Ok(r) => r,
        Err(e) => return usage(io, e),
    };
    let text = format::render(&u, format.into());
    // The design goes to stdout unless a file was requested; the reports
    // then take its place.
    let report_sink: &mut dyn Write = match &output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return usage(io, format_args!("cannot write {}: {e}", path.display()));
            }
            &mut *io.out
        }
        None => {
            let _ = io.out.write_all(text.as_bytes());
            &mut *io.err
        }
    };
    match format {
        OutFormat::Json if output.is_some() => say!(
            report_sink,
            "{}",
            to_json(&Reports {
                recipe: u.provenance(),
                verify: &v,
                moments: &m
            })
        ),
        _ => {
            say!(report_sink, "recipe: {}", u.provenance().unwrap_or("none"));
            say!(report_sink, "harmonic check: {}", v.to_string().trim_end());
            say!(report_sink, "moment check:   {}", m.to_string().trim_end());
        }
    }
    if v.passed && m.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn verify(
    io: &mut Io,
    file: PathBuf,
    strength: Option<u32>,
    tol: Option<f64>,
    format: OutFormat,
) -> i32 {
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return usage(io, format_args!("cannot read {}: {e}", file.display())),
    };
    let u = match format::parse(&text) {
        Ok(u) => u,
        Err(e @ Error::NotUnit { .. }) => {
            say!(
                io.err,
                "{}: not a point set on the sphere: {e}",
                file.display()
            );
            return EXIT_FAIL;
        }
        Err(e) => return usage(io, format_args!("{}: {e}", file.display())),
    };
    let t = strength.unwrap_or(u.strength());
    let tol = tol.unwrap_or_else(|| default_tolerance(u.size()));
    let (v, m) = match check_both(&u, t, tol) {
        Ok(r) => r,
        Err(e) => return usage(io, e),
    };
    match format {
        OutFormat::Json => say!(
            io.out,
            "{}",
            to_json(&Reports {
                recipe: u.provenance(),
                verify: &v,
                moments: &m
            })
        ),
        OutFormat::Text => {
            say!(
                io.out,
                "{} points on S^{}, strength {t}",
                u.size(),
                u.dimension()
            );
            say!(io.out, "harmonic check: {}", v.to_string().trim_end());
            say!(io.out, "moment check:   {}", m.to_string().trim_end());
        }
    }
    if v.passed && m.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn sidon_construct(io: &mut Io, n: u64, t: u32, format: OutFormat) -> i32 {
    let set = match sidon::construct_bound_set(n, t) {
        Ok(s) => s,
        Err(e) => return usage(io, e),
    };
    match format {
        OutFormat::Json => say!(
            io.out,
            "{}",
            serde_json::json!({"n": n, "t": t, "size": set.len(), "set": set.elements()})
        ),
        OutFormat::Text => say!(io.out, "{set}"),
    }
    EXIT_OK
}

fn sidon_search(io: &mut Io, n: u64, t: u32, budget: SearchBudget, format: OutFormat) -> i32 {
    let r = match sidon::max_sidon_search(n, t, budget) {
        Ok(r) => r,
        Err(e) => return usage(io, e),
    };
    match format {
        OutFormat::Json => say!(io.out, "{}", to_json(&r)),
        OutFormat::Text if r.complete => say!(
            io.out,
            "s({n},{t}) = {}, witness {}",
            r.max_cardinality,
            r.witness
        ),
        OutFormat::Text => say!(
            io.out,
            "s({n},{t}) >= {}, witness {} (search incomplete)",
            r.max_cardinality,
            r.witness
        ),
    }
    if r.complete {
        EXIT_OK
    } else {
        say!(
            io.err,
            "budget exhausted after {} nodes; the value is not certified",
            r.nodes_explored
        );
        EXIT_FAIL
    }
}

fn sidon_table(
    io: &mut Io,
    max_n: u64,
    t: u32,
    budget: SearchBudget,
    jobs: Option<usize>,
    format: OutFormat,
) -> i32 {
    let rows = match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| sidon::bound_report(max_n, t, budget)),
            Err(e) => return usage(io, e),
        },
        None => sidon::bound_report(max_n, t, budget),
    };
    let rows = match rows {
        Ok(r) => r,
        Err(e) => return usage(io, e),
    };
    match format {
        OutFormat::Json => say!(io.out, "{}", to_json(&rows)),
        OutFormat::Text => {
            say!(
                io.out,
                "{:>5} {:>2} {:>6} {:>6} {:>6} {:>12}  witness",
                "n",
                "t",
                "bound",
                "exact",
                "equal",
                "nodes"
            );
            for r in &rows {
                let exact = if r.complete {
                    r.exact.to_string()
                } else {
                    format!(">={}", r.exact)
                };
                let witness: Vec<String> = r.witness.iter().map(u64::to_string).collect();
                say!(
                    io.out,
                    "{:>5} {:>2} {:>6} {:>6} {:>6} {:>12}  {{{}}}",
                    r.n,
                    r.t,
                    r.bound,
                    exact,
                    if r.equal { "yes" } else { "NO" },
                    r.nodes,
                    witness.join(",")
                );
            }
        }
    }
    let incomplete: Vec<u64> = rows.iter().filter(|r| !r.complete).map(|r| r.n).collect();
    let differ: Vec<u64> = rows
        .iter()
        .filter(|r| r.complete && !r.equal)
        .map(|r| r.n)
        .collect();
    if !incomplete.is_empty() {
        say!(
            io.err,
            "INCOMPLETE: budget exhausted for n in {incomplete:?}"
        );
    }
    if !differ.is_empty() {
        say!(
            io.err,
            "MISMATCH: s(n,{t}) exceeds the lower bound for n in {differ:?}"
        );
    }
    if incomplete.is_empty() && differ.is_empty() {
        say!(io.err, "all {} rows equal the lower bound", rows.len());
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn table(io: &mut Io, d_max: usize, check: bool, format: OutFormat) -> i32 {
    if d_max == 0 {
        return usage(io, "--d-max must be at least 1");
    }
    let rows = if check {
        match planner::results_table_checked(d_max) {
            Ok(r) => r,
            Err(e) => {
                say!(io.err, "check failed: {e}");
                return EXIT_FAIL;
            }
        }
    } else {
        planner::results_table(d_max)
    };
    match format {
        OutFormat::Json => say!(io.out, "{}", to_json(&rows)),
        OutFormat::Text => {
            say!(io.out, "{:>3} {:>4}  sizes", "d", "N");
            for r in &rows {
                say!(io.out, "{:>3} {:>4}  {}", r.d, r.bound, r.sizes);
            }
        }
    }
    if check {
        let built: usize = rows.iter().map(|r| r.constructible.len()).sum();
        say!(io.err, "built and verified {built} designs");
    }
    EXIT_OK
}

fn scan(io: &mut Io, d_max: usize, budget: SearchBudget, format: OutFormat) -> i32 {
    let rows = match planner::regular_nonexistence_scan(d_max, budget) {
        Ok(r) => r,
        Err(e) => return usage(io, e),
    };
    match format {
        OutFormat::Json => say!(io.out, "{}", to_json(&rows)),
        OutFormat::Text => {
            say!(
                io.out,
                "{:>3} {:>4} {:>7} {:>7}  excluded",
                "d",
                "n",
                "s(n,3)",
                "needed"
            );
            for r in &rows {
                say!(
                    io.out,
                    "{:>3} {:>4} {:>7} {:>7}  {}",
                    r.d,
                    r.n,
                    r.sidon_max,
                    r.needed,
                    if r.excluded { "yes" } else { "NO" }
                );
            }
        }
    }
    let bad: Vec<(usize, usize)> = rows
        .iter()
        .filter(|r| !r.excluded)
        .map(|r| (r.d, r.n))
        .collect();
    if bad.is_empty() {
        say!(
            io.err,
            "no regular 3-design below the odd threshold for d <= {d_max}"
        );
        EXIT_OK
    } else {
        say!(
            io.err,
            "NOT EXCLUDED (counterexample or incomplete search): {bad:?}"
        );
        EXIT_FAIL
    }
}
