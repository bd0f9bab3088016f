//! JSON-lines and CSV emission of reports.

use std::io::Write;

use carlitz_core::motcoh::ExtStructure;
use carlitz_core::{FieldSpec, Report};
use clap::ValueEnum;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

const CSV_HEADER: [&str; 25] = [
    "check",
    "status",
    "p",
    "s",
    "q",
    "n",
    "h",
    "delta",
    "P_coeffs",
    "Z_coeffs",
    "Z_direct_coeffs",
    "equal",
    "rank",
    "lambda",
    "h_n",
    "zeta_star",
    "zeta_value",
    "rank_consistent",
    "g_n",
    "e_n",
    "epsilon_computed",
    "epsilon_formula",
    "match",
    "roots",
    "reason",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn list(v: &Option<Vec<String>>) -> String {
    v.as_ref().map(|c| c.join(";")).unwrap_or_default()
}

fn csv_row(r: &Report) -> Vec<String> {
    let roots = r
        .roots
        .as_ref()
        .map(|rows| {
            rows.iter()
                .map(|x| {
                    format!(
                        "{}:{}:{}:{}:{}",
                        x.r, x.divides, x.n_roots, x.consistent, x.all_simple
                    )
                })
                .collect::<Vec<_>>()
                .join(";")
        })
        .unwrap_or_default();
    let status = serde_json::to_value(r.status)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    vec![
        r.check.clone(),
        status,
        r.p.to_string(),
        r.s.to_string(),
        r.q.to_string(),
        r.n.to_string(),
        r.h.to_string(),
        r.delta.to_string(),
        list(&r.p_coeffs),
        list(&r.z_coeffs),
        list(&r.z_direct_coeffs),
        opt(&r.equal),
        opt(&r.rank),
        opt(&r.lambda),
        opt(&r.h_n),
        opt(&r.zeta_star),
        opt(&r.zeta_value),
        opt(&r.rank_consistent),
        opt(&r.g_n),
        opt(&r.e_n),
        opt(&r.epsilon_computed),
        opt(&r.epsilon_formula),
        opt(&r.matches),
        roots,
        opt(&r.reason),
    ]
}

/// Writes one JSON object per line, or a CSV table with a header row.
pub fn write_reports(reports: &[Report], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in reports {
                w.write_record(csv_row(r))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExtRecord {
    p: u64,
    s: u32,
    q: u64,
    n: i64,
    case: &'static str,
    rank: u64,
    epsilon_computed: Option<String>,
    epsilon_formula: Option<String>,
    #[serde(rename = "match")]
    matches: Option<bool>,
    class_rank: usize,
}

pub fn write_ext(
    e: &ExtStructure,
    f: &FieldSpec,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let rec = ExtRecord {
        p: f.characteristic() as u64,
        s: f.degree(),
        q: f.order() as u64,
        n: e.n,
        case: e.case.as_str(),
        rank: e.rank,
        epsilon_computed: e.epsilon_computed.as_ref().map(|x| x.to_text(f)),
        epsilon_formula: e.epsilon_formula.as_ref().map(|x| x.to_text(f)),
        matches: e.matches,
        class_rank: e.class_rank,
    };
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &rec)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(&rec)?;
            w.flush()?;
        }
    }
    Ok(())
}
