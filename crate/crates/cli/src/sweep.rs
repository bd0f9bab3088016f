//! Per-cell checks, the JSONL result cache and the parallel runner.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use carlitz_core::report::{check_conjecture, check_cross, check_epsilon, check_roots};
use carlitz_core::{Error, FieldSpec, Report, Status, Window};
use clap::ValueEnum;
use rayon::prelude::*;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Check {
    Conjecture,
    Epsilon,
    Roots,
    Cross,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::Conjecture,
        Check::Epsilon,
        Check::Roots,
        Check::Cross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Conjecture => "conjecture",
            Check::Epsilon => "epsilon",
            Check::Roots => "roots",
            Check::Cross => "cross",
        }
    }
}

/// Read-only data shared by all workers.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub field: FieldSpec,
    pub window: Option<Window>,
    pub r_max: u32,
    pub work_limit: u64,
}

impl Ctx {
    /// Precision tag of a cell, part of its cache key.
    pub fn precision(&self, check: Check) -> String {
        match (check, self.window) {
            (Check::Epsilon, Some(w)) => w.to_string(),
            _ => "exact".to_string(),
        }
    }
}

/// Enlarged window for the single retry: twice the `t`-range, and the floor
/// moved down by its own size (to `0` if it was positive).
pub fn doubled(w: Window) -> Window {
    Window::new(w.t_prec.saturating_mul(2).max(1), w.floor - w.floor.abs())
}

/// Runs `op` in `window`, retrying once in [`doubled`] after a precision
/// error. Returns the value and the window actually used.
pub fn with_retry<T>(
    window: Option<Window>,
    mut op: impl FnMut(Option<Window>) -> carlitz_core::Result<T>,
) -> carlitz_core::Result<(T, Option<Window>)> {
    match op(window) {
        Err(Error::PrecisionInsufficient(_)) if window.is_some() => {
            let w2 = doubled(window.unwrap());
            op(Some(w2)).map(|v| (v, Some(w2)))
        }
        other => other.map(|v| (v, window)),
    }
}

pub fn precision_failure(
    check: &str,
    n: i64,
    f: &FieldSpec,
    precision: String,
    e: &Error,
) -> Report {
    let mut rep = Report::new(check, n, f);
    rep.status = Status::PrecisionFailure;
    rep.precision = precision;
    rep.reason = Some(format!("{e} (after one retry with a doubled window)"));
    rep
}

pub fn compute_cell(ctx: &Ctx, n: i64, check: Check) -> Report {
    let f = &ctx.field;
    match check {
        Check::Conjecture if n < 0 => Report::new("conjecture", n, f).skipped("requires n >= 0"),
        Check::Conjecture => check_conjecture(n as u64, f),
        Check::Cross if n < 0 => Report::new("cross", n, f).skipped("requires n >= 0"),
        Check::Cross => check_cross(n as u64, f, ctx.work_limit),
        Check::Roots => check_roots(n, f, ctx.r_max)
            .unwrap_or_else(|e| Report::new("roots", n, f).skipped(e.to_string())),
        Check::Epsilon => {
            let requested = ctx.precision(check);
            match with_retry(ctx.window, |w| check_epsilon(n, f, w)) {
                Ok((mut rep, used)) => {
                    rep.precision = requested;
                    if used != ctx.window {
                        let note =
                            format!("window doubled to {}", used.expect("retry uses a window"));
                        rep.reason = Some(match rep.reason.take() {
                            Some(r) => format!("{r}; {note}"),
                            None => note,
                        });
                    }
                    rep
                }
                Err(e @ Error::PrecisionInsufficient(_)) => {
                    precision_failure("epsilon", n, f, requested, &e)
                }
                Err(e) => Report::new("epsilon", n, f).skipped(e.to_string()),
            }
        }
    }
}

type Key = (u64, u32, i64, String, String);

fn key(r: &Report) -> Key {
    (r.p, r.s, r.n, r.check.clone(), r.precision.clone())
}

/// Default cache location, overridden by `CARLITZ_CACHE`.
pub fn cache_path() -> PathBuf {
    std::env::var_os("CARLITZ_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("carlitz-cache.jsonl"))
}

/// Reads the `ok` cells of a cache file; unparsable lines (such as a line cut
/// short by an interruption) are ignored.
pub fn load_cache(path: &Path) -> Result<HashMap<Key, Report>> {
    let mut out = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if let Ok(rep) = serde_json::from_str::<Report>(&line) {
            if rep.status == Status::Ok {
                out.insert(key(&rep), rep);
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
pub struct RunOutcome {
    /// Sorted by `(p, s, n, check)`, timings removed.
    pub reports: Vec<Report>,
    pub computed: usize,
    pub cached: usize,
}

/// Evaluates every `(n, check)` cell on `jobs` workers. With a cache path,
/// cached `ok` cells are reused and each new result is appended as soon as
/// it is available.
pub fn run_cells(
    ctx: &Ctx,
    cells: &[(i64, Check)],
    jobs: usize,
    cache: Option<&Path>,
) -> Result<RunOutcome> {
    let f = &ctx.field;
    let known = match cache {
        Some(p) => load_cache(p)?,
        None => HashMap::new(),
    };
    let mut reports = Vec::new();
    let mut todo = Vec::new();
    for &(n, check) in cells {
        let probe = Report::new(check.name(), n, f);
        let k = (
            probe.p,
            probe.s,
            n,
            check.name().to_string(),
            ctx.precision(check),
        );
        match known.get(&k) {
            Some(r) => reports.push(r.clone()),
            None => todo.push((n, check)),
        }
    }
    let cached = reports.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut sink = match cache {
        Some(p) => Some(BufWriter::new(
            OpenOptions::new().create(true).append(true).open(p)?,
        )),
        None => None,
    };
    let (tx, rx) = mpsc::channel::<Report>();
    let fresh = std::thread::scope(|scope| -> Result<Vec<Report>> {
        let writer = scope.spawn(move || -> Result<Vec<Report>> {
            let mut got = Vec::new();
            for rep in rx {
                if let Some(w) = sink.as_mut() {
                    serde_json::to_writer(&mut *w, &rep)?;
                    writeln!(w)?;
                    w.flush()?;
                }
                got.push(rep);
            }
            Ok(got)
        });
        pool.install(|| {
            todo.par_iter().for_each_with(tx, |tx, &(n, check)| {
                let _ = tx.send(compute_cell(ctx, n, check));
            })
        });
        writer.join().expect("writer thread")
    })?;
    let computed = fresh.len();
    reports.extend(fresh);
    for r in &mut reports {
        r.timings_ms = None;
    }
    reports.sort_by(|a, b| (a.p, a.s, a.n, &a.check).cmp(&(b.p, b.s, b.n, &b.check)));
    Ok(RunOutcome {
        reports,
        computed,
        cached,
    })
}

/// `1` if any cell mismatched, else `3` if any cell ran out of precision,
/// else `0`.
pub fn exit_code(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| r.status == Status::Mismatch) {
        1
    } else if reports.iter().any(|r| r.status == Status::PrecisionFailure) {
        3
    } else {
        0
    }
}

pub fn summary(out: &RunOutcome) -> String {
    let count = |s: Status| out.reports.iter().filter(|r| r.status == s).count();
    format!(
        "summary: cells={} ok={} mismatch={} skipped={} precision_failure={} computed={} cached={}",
        out.reports.len(),
        count(Status::Ok),
        count(Status::Mismatch),
        count(Status::Skipped),
        count(Status::PrecisionFailure),
        out.computed,
        out.cached
    )
}
