//! Per-cell verification records shared by the command-line driver.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classmod::{fitting_data, pn_poly};
use crate::error::Result;
use crate::ff::FieldSpec;
use crate::motcoh::{
    epsilon_computed_in, epsilon_formula, epsilon_lcm_form, root_locus, ROOT_BUDGET,
};
use crate::polyring::XPoly;
use crate::tate::{TwistParams, Window};
use crate::zeta::{z_direct, z_goss, zeta_star_neg};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Mismatch,
    #[default]
    Skipped,
    PrecisionFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRowReport {
    pub r: u32,
    pub divides: bool,
    pub n_roots: usize,
    pub consistent: bool,
    pub all_simple: bool,
}

/// One `(field, n, check)` cell. Optional fields are omitted from JSON when
/// they do not apply to the check.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub p: u64,
    pub s: u32,
    pub q: u64,
    pub n: i64,
    pub h: i64,
    pub delta: u64,
    #[serde(rename = "P_coeffs", default, skip_serializing_if = "Option::is_none")]
    pub p_coeffs: Option<Vec<String>>,
    #[serde(rename = "Z_coeffs", default, skip_serializing_if = "Option::is_none")]
    pub z_coeffs: Option<Vec<String>>,
    #[serde(
        rename = "Z_direct_coeffs",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub z_direct_coeffs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_star: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_computed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_lcm: Option<String>,
    #[serde(rename = "match", default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lcm_match: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootRowReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub precision: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(check: &str, n: i64, f: &FieldSpec) -> Self {
        let params = TwistParams::new(n, f);
        Report {
            check: check.to_string(),
            p: params.p,
            s: f.degree(),
            q: params.q,
            n,
            h: params.h,
            delta: params.delta,
            precision: "exact".to_string(),
            ..Report::default()
        }
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.reason = Some(reason.into());
        self
    }

    pub fn time(&mut self, label: &str, start: Instant) {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        self.timings_ms
            .get_or_insert_with(BTreeMap::new)
            .insert(label.to_string(), (ms * 1e3).round() / 1e3);
    }
}

fn coeffs(x: &XPoly, f: &FieldSpec) -> Vec<String> {
    x.coeff_texts(f)
}

/// `P_n = Z(x, -n)`, with the Fitting data of both sides and the rank
/// pattern: order 1 at `x = 1` exactly when `n >= 1` and `(q-1) | n`.
pub fn check_conjecture(n: u64, f: &FieldSpec) -> Report {
    let mut rep = Report::new("conjecture", n as i64, f);
    let params = TwistParams::new(n as i64, f);
    let start = Instant::now();
    let pn = pn_poly(&params, f);
    rep.time("pn", start);
    let start = Instant::now();
    let z = z_goss(n, f);
    rep.time("goss", start);
    let (rank, lambda) = fitting_data(&pn, f);
    let (h_n, zeta_star, zeta_value) = zeta_star_neg(&z, f);
    let equal = pn == z;
    let expected_rank = usize::from(n >= 1 && params.divisible());
    rep.p_coeffs = Some(coeffs(&pn, f));
    rep.z_coeffs = Some(coeffs(&z, f));
    rep.equal = Some(equal);
    rep.rank = Some(rank);
    rep.lambda = Some(lambda.to_text(f));
    rep.h_n = Some(h_n);
    rep.zeta_star = Some(zeta_star.to_text(f));
    rep.zeta_value = Some(zeta_value.to_text(f));
    let consistent = rank == expected_rank && (!equal || h_n == rank);
    rep.rank_consistent = Some(consistent);
    rep.status = if equal && consistent {
        Status::Ok
    } else {
        Status::Mismatch
    };
    if !equal {
        rep.reason = Some("P_n differs from Z(x, -n)".into());
    } else if !consistent {
        rep.reason = Some(format!(
            "order at x = 1 is {rank}, expected {expected_rank}"
        ));
    }
    rep
}

/// Computed content of `e_n` against the closed form, in an optional
/// window override for `g_n`. Precision errors are returned, not reported.
pub fn check_epsilon(n: i64, f: &FieldSpec, window: Option<Window>) -> Result<Report> {
    let mut rep = Report::new("epsilon", n, f);
    let params = TwistParams::new(n, f);
    if n < 1 || !params.divisible() {
        return Ok(rep.skipped(format!(
            "requires n >= 1 and q - 1 = {} dividing n",
            params.q - 1
        )));
    }
    if let Some(w) = window {
        rep.precision = w.to_string();
    }
    let start = Instant::now();
    let computed = epsilon_computed_in(&params, window, f)?;
    rep.time("epsilon_computed", start);
    let formula = epsilon_formula(&params, f)?;
    let lcm = epsilon_lcm_form(&params, f)?;
    let matches = computed == formula;
    rep.epsilon_computed = Some(computed.to_text(f));
    rep.epsilon_formula = Some(formula.to_text(f));
    rep.epsilon_lcm = Some(lcm.to_text(f));
    rep.matches = Some(matches);
    rep.lcm_match = Some(computed == lcm);
    rep.status = if matches {
        Status::Ok
    } else {
        Status::Mismatch
    };
    if !matches {
        rep.reason = Some("content of e_n differs from (t^(q^l) - t)^(p^c)".into());
    }
    Ok(rep)
}

/// Root locus of `epsilon_n` over `F_{q^r}`, `r <= r_max`; fields beyond the
/// enumeration budget are left out and noted.
pub fn check_roots(n: i64, f: &FieldSpec, r_max: u32) -> Result<Report> {
    let mut rep = Report::new("roots", n, f);
    let params = TwistParams::new(n, f);
    if n < 1 || !params.divisible() {
        return Ok(rep.skipped(format!(
            "requires n >= 1 and q - 1 = {} dividing n",
            params.q - 1
        )));
    }
    let mut r_eff = 0;
    while r_eff < r_max
        && params
            .q
            .checked_pow(r_eff + 1)
            .is_some_and(|v| v <= ROOT_BUDGET)
    {
        r_eff += 1;
    }
    if r_eff < r_max {
        rep.reason = Some(format!(
            "r limited to {r_eff} by the enumeration budget {ROOT_BUDGET}"
        ));
    }
    let start = Instant::now();
    let rows = root_locus(&params, f, r_eff)?;
    rep.time("roots", start);
    let good = rows.iter().all(|r| r.consistent && r.all_simple);
    rep.roots = Some(
        rows.into_iter()
            .map(|r| RootRowReport {
                r: r.r,
                divides: r.divides,
                n_roots: r.n_roots,
                consistent: r.consistent,
                all_simple: r.all_simple,
            })
            .collect(),
    );
    rep.status = if good { Status::Ok } else { Status::Mismatch };
    if !good {
        rep.reason = Some("zeros of epsilon_n not as predicted, or not simple".into());
    }
    Ok(rep)
}

/// `Z(x, -n)` by direct summation against Goss's recursion; skipped when the
/// direct sum exceeds `work_limit`.
pub fn check_cross(n: u64, f: &FieldSpec, work_limit: u64) -> Report {
    let mut rep = Report::new("cross", n as i64, f);
    let start = Instant::now();
    let direct = match z_direct(n, f, work_limit) {
        Ok(z) => z,
        Err(e) => return rep.skipped(e.to_string()),
    };
    rep.time("direct", start);
    let start = Instant::now();
    let goss = z_goss(n, f);
    rep.time("goss", start);
    let equal = direct == goss;
    rep.z_direct_coeffs = Some(coeffs(&direct, f));
    rep.z_coeffs = Some(coeffs(&goss, f));
    rep.equal = Some(equal);
    rep.status = if equal { Status::Ok } else { Status::Mismatch };
    if !equal {
        rep.reason = Some("direct sum differs from the recursion".into());
    }
    rep
}
