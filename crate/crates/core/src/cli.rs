//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bounds::johnson_bound;
use crate::code::verify_code;
use crate::degrees::{
    degree_census, degree_concentration_mc, exact_degree_over_b, DegreeReport, DEFAULT_ASSIGNMENT_CAP,
    DEGREES_CSV_HEADER,
};
use crate::error::Error;
use crate::io::{read_code, write_b_assignment, write_code};
use crate::matching::{construct, BuildReport};
use crate::matching::V2Key;
use crate::oracle::{max_code_exact, DEFAULT_NODE_LIMIT};
use crate::params::CodeParams;

pub const SWEEP_CSV_HEADER: &str = "n,q,d,w,t,x_size,code_size,johnson_floor,main_term,ratio,seed,restarts,elapsed_ms";

#[derive(Parser, Debug)]
#[command(name = "cwcode", version, about = "Construct, verify and bound q-ary constant-weight codes")]
struct Cli {
    /// Worker threads for restarts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    w: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<CodeParams, Error> {
        CodeParams::new(self.q, self.n, self.d, self.w)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Johnson-type upper bound.
    Bound {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exact maximum code size by clique search (tiny instances).
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        max_nodes: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized greedy construction.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        improve: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_b: Option<PathBuf>,
    },
    /// Check a code file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// V2 degree statistics.
    Degrees {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long)]
        exact: bool,
    },
    /// Construction over a range of lengths.
    Sweep {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        n_start: usize,
        #[arg(long)]
        n_end: usize,
        #[arg(long)]
        n_step: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        csv: PathBuf,
    },
}

/// `r` rounded half-to-even to `digits` fractional digits.
pub fn decimal_half_even(r: &BigRational, digits: u32) -> String {
    let negative = r.is_negative();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = scaled - BigRational::from_integer(floor.clone());
    let half = BigRational::new(1.into(), 2.into());
    let rounded = if frac > half || (frac == half && floor.is_odd()) { floor + 1 } else { floor };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if negative && !rounded_is_zero(&int_part, &frac_part) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits as usize)
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

/// One line of the sweep / construct CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: usize,
    pub q: u32,
    pub d: usize,
    pub w: usize,
    pub t: usize,
    pub x_size: usize,
    pub code_size: usize,
    pub johnson_floor: String,
    pub main_term_num: String,
    pub main_term_den: String,
    pub ratio: String,
    pub seed: u64,
    pub restarts: usize,
    pub elapsed_ms: u128,
}

impl SweepRow {
    pub fn from_report(report: &BuildReport) -> Self {
        let p = report.code.params();
        SweepRow {
            n: p.n(),
            q: p.q(),
            d: p.d(),
            w: p.w(),
            t: p.t(),
            x_size: report.x_size,
            code_size: report.code.len(),
            johnson_floor: johnson_bound(p).floor_value.to_string(),
            main_term_num: report.target.numerator.to_string(),
            main_term_den: report.target.denominator.to_string(),
            ratio: decimal_half_even(&report.ratio_to_main_term, 6),
            seed: report.seed,
            restarts: report.restarts_run,
            elapsed_ms: report.elapsed.as_millis(),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}/{},{},{},{},{}",
            self.n,
            self.q,
            self.d,
            self.w,
            self.t,
            self.x_size,
            self.code_size,
            self.johnson_floor,
            self.main_term_num,
            self.main_term_den,
            self.ratio,
            self.seed,
            self.restarts,
            self.elapsed_ms
        )
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, message: format!("{}: {e}", path.display()) }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| io_failure(path, e))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };

    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => {
                let (mut buf_out, mut buf_err) = (Vec::new(), Vec::new());
                let r = pool.install(|| dispatch(cli.command, &mut buf_out, &mut buf_err));
                let _ = out.write_all(&buf_out);
                let _ = err.write_all(&buf_err);
                r
            }
            Err(e) => Err(Failure { code: 2, message: e.to_string() }),
        },
        None => dispatch(cli.command, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure { code, message }) => {
            if !message.is_empty() {
                let _ = writeln!(err, "error: {message}");
            }
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let mut emit = |line: String| -> Result<(), Failure> {
        writeln!(out, "{line}").map_err(|e| Failure { code: 2, message: e.to_string() })
    };
    match command {
        Command::Bound { params, json } => {
            let p = params.params()?;
            let b = johnson_bound(&p);
            let parity = if p.d_is_even() { "even" } else { "odd" };
            if json {
                let number = |s: String| serde_json::Value::Number(s.parse().expect("decimal integer"));
                let value = serde_json::json!({
                    "floor": number(b.floor_value.to_string()),
                    "numerator": number(b.numerator.to_string()),
                    "denominator": number(b.denominator.to_string()),
                    "t": p.t(),
                    "parity": parity,
                });
                emit(value.to_string())
            } else {
                emit(format!("{b} t={} parity={parity}", p.t()))
            }
        }
        Command::Oracle { params, max_nodes, out: path } => {
            let p = params.params()?;
            let r = max_code_exact(&p, max_nodes)?;
            if let Some(path) = path {
                write_file(&path, &write_code(&r.witness))?;
            }
            emit(format!("A={} exact={} nodes={}", r.value, r.exhausted, r.nodes_explored))
        }
        Command::Construct { params, seed, restarts, improve, out: path, emit_b } => {
            let p = params.params()?;
            let report = construct(&p, seed, restarts, improve)?;
            if !verify_code(&report.code).passed() {
                return Err(Failure { code: 1, message: "constructed code failed verification".into() });
            }
            if let Some(path) = path {
                write_file(&path, &write_code(&report.code))?;
            }
            if let Some(path) = emit_b {
                match &report.b {
                    Some(b) => write_file(&path, &write_b_assignment(b))?,
                    None => {
                        let _ = writeln!(err, "note: odd d uses no constraint table; {} not written", path.display());
                    }
                }
            }
            emit(SWEEP_CSV_HEADER.to_string())?;
            emit(SweepRow::from_report(&report).to_csv())
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| io_failure(&file, e))?;
            let code = match read_code(&text) {
                Ok(code) => code,
                Err(e) => {
                    emit(format!("FAIL: {e}"))?;
                    return Err(Failure { code: 1, message: String::new() });
                }
            };
            let report = verify_code(&code);
            match report.witness {
                None => emit("PASS".to_string()),
                Some(v) => {
                    emit(format!("FAIL: {v}"))?;
                    Err(Failure { code: 1, message: String::new() })
                }
            }
        }
        Command::Degrees { params, seed, samples, exact } => {
            let p = params.params()?;
            let report: DegreeReport = if exact {
                let v = V2Key((0..p.t()).map(|i| (i, 1)).collect());
                let mut r = exact_degree_over_b(&p, &v, DEFAULT_ASSIGNMENT_CAP)?;
                r.seed = Some(seed);
                r
            } else if samples == 0 {
                let r = degree_census(&p, seed)?;
                if let (Some(max), Some(mean)) = (r.v1_max, &r.v1_mean) {
                    let _ = writeln!(err, "v1_max={max} v1_mean={}", decimal_half_even(mean, 6));
                }
                r
            } else {
                degree_concentration_mc(&p, samples, seed)?
            };
            emit(DEGREES_CSV_HEADER.to_string())?;
            emit(report.csv_row())
        }
        Command::Sweep { q, d, w, n_start, n_end, n_step, seed, restarts, csv } => {
            if n_step == 0 || n_start > n_end {
                return Err(Failure { code: 2, message: "need n-step > 0 and n-start <= n-end".into() });
            }
            let mut text = format!("{SWEEP_CSV_HEADER}\n");
            emit(SWEEP_CSV_HEADER.to_string())?;
            for n in (n_start..=n_end).step_by(n_step) {
                let p = CodeParams::new(q, n, d, w)?;
                let report = construct(&p, seed, restarts, false)?;
                if !verify_code(&report.code).passed() {
                    return Err(Failure { code: 1, message: format!("code at n={n} failed verification") });
                }
                let row = SweepRow::from_report(&report).to_csv();
                text.push_str(&row);
                text.push('\n');
                emit(row)?;
            }
            write_file(&csv, &text)
        }
    }
}
