//! Command-line driver for `carlitz-core`: single computations, range checks
//! and cached parallel sweeps.

pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use carlitz_core::classmod::{fitting_data, pn_poly};
use carlitz_core::motcoh::{en_from_gn, ext_structure, gn_compute, gn_compute_in};
use carlitz_core::zeta::{z_direct, z_goss, zeta_star_neg, DEFAULT_WORK_LIMIT};
use carlitz_core::{ff_make, Error, FieldSpec, Report, Status, TwistParams, Window};
use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Result};
pub use output::Format;
pub use sweep::{Check, Ctx};

#[derive(Parser, Debug)]
#[command(
    name = "carlitz",
    version,
    about = "Zeta values, class modules and extension modules of Carlitz twists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Extension degree: the field has q = p^s elements.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
}

#[derive(Args, Debug, Clone)]
pub struct RangeArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["n_min", "n_max"])]
    pub n: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub n_max: Option<i64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct WindowArgs {
    /// Number of t-coefficients kept.
    #[arg(long)]
    pub t_prec: Option<usize>,
    /// Lowest theta-exponent kept.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_floor: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct JobsArg {
    #[arg(long, default_value_t = default_jobs())]
    pub jobs: usize,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Z(x, -n) by the recursion and, within budget, by direct summation.
    Zeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
        work_limit: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Z(x, -n) by the recursion only.
    Goss {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// P_n(x) = det(1 - x M_n) and its Fitting data.
    Pn {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The polynomial part g_n of omega^n.
    Gn {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// e_n = (t - theta)^n g_n - g_n^(1).
    En {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Content of e_n next to the closed form.
    Epsilon {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compares computed and closed-form epsilon_n over a range of n.
    CheckEpsilon {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compares P_n(x) with Z(x, -n) over a range of n.
    CheckConjecture {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Zeros of epsilon_n over F_{q^r}, r <= r-max.
    Roots {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shape of the extension module for the twist n.
    ExtStructure {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Runs the selected checks over a range of n with a resumable cache.
    Sweep {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = Check::ALL)]
        checks: Vec<Check>,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
        #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
        work_limit: u64,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recomputes a fixed set of known values.
    Selftest,
}

const MAX_T_PREC: usize = 1 << 16;
const MAX_FLOOR: i64 = 1 << 24;

fn field(a: &FieldArgs) -> Result<FieldSpec> {
    ff_make(a.p, a.s).map_err(|e| CliError::Usage(format!("--p {} --s {}: {e}", a.p, a.s)))
}

fn non_negative(n: i64) -> Result<u64> {
    u64::try_from(n).map_err(|_| CliError::Usage(format!("--n must be >= 0, got {n}")))
}

/// The window override, completed from the exact `g_n` window `(m, 0)` when
/// only one bound is given.
fn window(a: &WindowArgs, params: Option<&TwistParams>) -> Result<Option<Window>> {
    if a.t_prec.is_none() && a.theta_floor.is_none() {
        return Ok(None);
    }
    let m = params.and_then(|p| p.m).unwrap_or(0) as usize;
    let w = Window::new(a.t_prec.unwrap_or(m), a.theta_floor.unwrap_or(0));
    if w.t_prec > MAX_T_PREC || w.floor.abs() > MAX_FLOOR {
        return Err(CliError::Usage(format!(
            "window {w} outside the supported bounds T <= {MAX_T_PREC}, |floor| <= {MAX_FLOOR}"
        )));
    }
    Ok(Some(w))
}

fn range(a: &RangeArgs, default_min: i64) -> Result<(i64, i64)> {
    let (lo, hi) = match (a.n, a.n_min, a.n_max) {
        (Some(n), _, _) => (n, n),
        (None, lo, Some(hi)) => (lo.unwrap_or(default_min), hi),
        (None, _, None) => return Err(CliError::Usage("give --n or --n-max".into())),
    };
    if lo > hi {
        return Err(CliError::Usage(format!(
            "--n-min {lo} exceeds --n-max {hi}"
        )));
    }
    Ok((lo, hi))
}

fn jobs(a: &JobsArg) -> Result<usize> {
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(a.jobs)
}

fn emit(reports: &[Report], out: &OutArgs, stdout: &mut dyn Write) -> Result<()> {
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output::write_reports(reports, out.format, &mut w)?;
            w.flush()?;
        }
        None => output::write_reports(reports, out.format, stdout)?,
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    match cmd {
        Command::Zeta {
            field: fa,
            n,
            work_limit,
            out,
        } => {
            let f = field(&fa)?;
            let n = non_negative(n)?;
            let mut rep = Report::new("zeta", n as i64, &f);
            let start = Instant::now();
            let z = z_goss(n, &f);
            rep.time("goss", start);
            let (h, star, value) = zeta_star_neg(&z, &f);
            rep.z_coeffs = Some(z.coeff_texts(&f));
            rep.h_n = Some(h);
            rep.zeta_star = Some(star.to_text(&f));
            rep.zeta_value = Some(value.to_text(&f));
            let start = Instant::now();
            match z_direct(n, &f, work_limit) {
                Ok(d) => {
                    rep.time("direct", start);
                    rep.equal = Some(d == z);
                    rep.z_direct_coeffs = Some(d.coeff_texts(&f));
                    rep.status = if d == z { Status::Ok } else { Status::Mismatch };
                }
                Err(e) => {
                    rep.status = Status::Ok;
                    rep.reason = Some(format!("direct sum skipped: {e}"));
                }
            }
            emit(&[rep.clone()], &out, stdout)?;
            Ok(sweep::exit_code(&[rep]))
        }
        Command::Goss { field: fa, n, out } => {
            let f = field(&fa)?;
            let n = non_negative(n)?;
            let mut rep = Report::new("goss", n as i64, &f);
            let z = z_goss(n, &f);
            let (h, star, value) = zeta_star_neg(&z, &f);
            rep.status = Status::Ok;
            rep.z_coeffs = Some(z.coeff_texts(&f));
            rep.h_n = Some(h);
            rep.zeta_star = Some(star.to_text(&f));
            rep.zeta_value = Some(value.to_text(&f));
            emit(&[rep], &out, stdout)?;
            Ok(0)
        }
        Command::Pn { field: fa, n, out } => {
            let f = field(&fa)?;
            non_negative(n)?;
            let mut rep = Report::new("pn", n, &f);
            let start = Instant::now();
            let pn = pn_poly(&TwistParams::new(n, &f), &f);
            rep.time("pn", start);
            let (rank, lambda) = fitting_data(&pn, &f);
            rep.status = Status::Ok;
            rep.p_coeffs = Some(pn.coeff_texts(&f));
            rep.rank = Some(rank);
            rep.lambda = Some(lambda.to_text(&f));
            emit(&[rep], &out, stdout)?;
            Ok(0)
        }
        Command::Gn {
            field: fa,
            n,
            window: wa,
            out,
        } => gn_en(&fa, n, &wa, &out, false, stdout),
        Command::En {
            field: fa,
            n,
            window: wa,
            out,
        } => gn_en(&fa, n, &wa, &out, true, stdout),
        Command::Epsilon {
            field: fa,
            n,
            window: wa,
            out,
        } => {
            let f = field(&fa)?;
            let params = TwistParams::new(n, &f);
            let w = window(&wa, Some(&params))?;
            let ctx = Ctx {
                field: f,
                window: w,
                r_max: 1,
                work_limit: 0,
            };
            let rep = sweep::compute_cell(&ctx, n, Check::Epsilon);
            emit(std::slice::from_ref(&rep), &out, stdout)?;
            Ok(sweep::exit_code(&[rep]))
        }
        Command::CheckEpsilon {
            field: fa,
            range: ra,
            window: wa,
            jobs: ja,
            out,
        } => {
            let f = field(&fa)?;
            let (lo, hi) = range(&ra, 1)?;
            let w = window(&wa, None)?;
            let ctx = Ctx {
                field: f,
                window: w,
                r_max: 1,
                work_limit: 0,
            };
            let cells: Vec<_> = (lo..=hi).map(|n| (n, Check::Epsilon)).collect();
            let res = sweep::run_cells(&ctx, &cells, jobs(&ja)?, None)?;
            emit(&res.reports, &out, stdout)?;
            Ok(sweep::exit_code(&res.reports))
        }
        Command::CheckConjecture {
            field: fa,
            range: ra,
            jobs: ja,
            out,
        } => {
            let f = field(&fa)?;
            let (lo, hi) = range(&ra, 0)?;
            if lo < 0 {
                return Err(CliError::Usage("--n-min must be >= 0".into()));
            }
            let ctx = Ctx {
                field: f,
                window: None,
                r_max: 1,
                work_limit: 0,
            };
            let cells: Vec<_> = (lo..=hi).map(|n| (n, Check::Conjecture)).collect();
            let res = sweep::run_cells(&ctx, &cells, jobs(&ja)?, None)?;
            emit(&res.reports, &out, stdout)?;
            Ok(sweep::exit_code(&res.reports))
        }
        Command::Roots {
            field: fa,
            n,
            r_max,
            out,
        } => {
            let f = field(&fa)?;
            if r_max == 0 {
                return Err(CliError::Usage("--r-max must be at least 1".into()));
            }
            let ctx = Ctx {
                field: f,
                window: None,
                r_max,
                work_limit: 0,
            };
            let rep = sweep::compute_cell(&ctx, n, Check::Roots);
            emit(std::slice::from_ref(&rep), &out, stdout)?;
            Ok(sweep::exit_code(&[rep]))
        }
        Command::ExtStructure { field: fa, n, out } => {
            let f = field(&fa)?;
            let e = ext_structure(n, &f)?;
            match &out.out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    output::write_ext(&e, &f, out.format, &mut w)?;
                    w.flush()?;
                }
                None => output::write_ext(&e, &f, out.format, stdout)?,
            }
            Ok(if e.matches == Some(false) { 1 } else { 0 })
        }
        Command::Sweep {
            field: fa,
            range: ra,
            checks,
            r_max,
            work_limit,
            window: wa,
            jobs: ja,
            out,
        } => {
            let f = field(&fa)?;
            let (lo, hi) = range(&ra, 0)?;
            let w = window(&wa, None)?;
            let mut checks = checks;
            checks.sort();
            checks.dedup();
            let ctx = Ctx {
                field: f,
                window: w,
                r_max,
                work_limit,
            };
            let cells: Vec<_> = (lo..=hi)
                .flat_map(|n| checks.iter().map(move |&c| (n, c)))
                .collect();
            let cache = sweep::cache_path();
            let res = sweep::run_cells(&ctx, &cells, jobs(&ja)?, Some(&cache))?;
            emit(&res.reports, &out, stdout)?;
            writeln!(stderr, "{}", sweep::summary(&res))?;
            Ok(sweep::exit_code(&res.reports))
        }
        Command::Selftest => selftest(stdout),
    }
}

fn gn_en(
    fa: &FieldArgs,
    n: i64,
    wa: &WindowArgs,
    out: &OutArgs,
    with_e: bool,
    stdout: &mut dyn Write,
) -> Result<u8> {
    let f = field(fa)?;
    let params = TwistParams::new(n, &f);
    let w = window(wa, Some(&params))?;
    let check = if with_e { "en" } else { "gn" };
    let precision = w.map_or_else(|| "exact".to_string(), |w| w.to_string());
    let start = Instant::now();
    let computed = sweep::with_retry(w, |w| match w {
        Some(w) => gn_compute_in(&params, w, &f),
        None => gn_compute(&params, &f),
    });
    let rep = match computed {
        Ok((g, used)) => {
            let mut rep = Report::new(check, n, &f);
            rep.status = Status::Ok;
            rep.precision = precision;
            rep.g_n = Some(g.to_text(&f));
            if with_e {
                rep.e_n = Some(en_from_gn(&g, n as u64, &f).to_text(&f));
            }
            if used != w {
                rep.reason = Some(format!(
                    "window doubled to {}",
                    used.expect("retry uses a window")
                ));
            }
            rep.time(check, start);
            rep
        }
        Err(e @ Error::PrecisionInsufficient(_)) => {
            sweep::precision_failure(check, n, &f, precision, &e)
        }
        Err(e) => return Err(e.into()),
    };
    emit(std::slice::from_ref(&rep), out, stdout)?;
    Ok(sweep::exit_code(&[rep]))
}

/// Known values recomputed from scratch; one line per item.
fn selftest(stdout: &mut dyn Write) -> Result<u8> {
    let f2 = ff_make(2, 1)?;
    let f3 = ff_make(3, 1)?;
    let p3 = TwistParams::new(2, &f3);
    let text = |x: carlitz_core::Result<String>| x.unwrap_or_else(|e| e.to_string());
    let items: Vec<(&str, String, &str)> = vec![
        (
            "P_2 over F_3",
            pn_poly(&p3, &f3).to_text(&f3),
            "(2)*x^1 + (1)*x^0",
        ),
        (
            "Z(x,-2) over F_3",
            z_goss(2, &f3).to_text(&f3),
            "(2)*x^1 + (1)*x^0",
        ),
        (
            "g_2 over F_3",
            text(gn_compute(&p3, &f3).map(|g| g.to_text(&f3))),
            "2*theta + t",
        ),
        (
            "epsilon_2 over F_3",
            text(carlitz_core::motcoh::epsilon_computed(&p3, &f3).map(|e| e.to_text(&f3))),
            "t^3 + 2*t",
        ),
        (
            "epsilon_6 over F_2",
            text(
                carlitz_core::motcoh::epsilon_computed(&TwistParams::new(6, &f2), &f2)
                    .map(|e| e.to_text(&f2)),
            ),
            "t^8 + t^2",
        ),
        (
            "P_n = Z(x,-n) over F_2, n <= 40",
            (0..=40u64)
                .all(|n| pn_poly(&TwistParams::new(n as i64, &f2), &f2) == z_goss(n, &f2))
                .to_string(),
            "true",
        ),
    ];
    let mut failed = 0;
    for (name, got, want) in items {
        if got == want {
            writeln!(stdout, "ok   {name}")?;
        } else {
            failed += 1;
            writeln!(stdout, "FAIL {name}: got {got}, expected {want}")?;
        }
    }
    writeln!(stdout, "selftest: {failed} failure(s)")?;
    Ok(u8::from(failed > 0))
}
