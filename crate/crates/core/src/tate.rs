//! Truncated elements of the Tate algebra `K_inf<t>` over `K_inf = F_q((1/theta))`.
//!
//! A [`TateSeries`] stores the coefficients of `t^0 ..= t^T` as finite
//! Laurent polynomials in `theta`, together with a common floor `v`: every
//! stored coefficient is exact for `theta`-degrees `>= v`, and nothing is
//! known below it. A floor of `None` means the value is known exactly (no
//! truncation in `theta`); a `t_prec` of `usize::MAX` means no truncation in
//! `t`. Every operation derives the window on which its output is exact from
//! the windows of its inputs, so a comparison "equal within the window" is an
//! exact statement.

use std::cmp::{max, min};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{lucas_binom, FieldSpec, Gf};
use crate::polyring::{mono, term_text, BiPoly, PolyT};

/// Finite Laurent polynomial in `theta`: `coeffs[i]` multiplies `theta^(low + i)`.
/// Normalized so that the first and last stored coefficients are nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Laurent {
    low: i64,
    coeffs: Vec<Gf>,
}

impl Laurent {
    fn zero() -> Self {
        Laurent::default()
    }

    fn monomial(c: Gf, d: i64) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            low: d,
            coeffs: vec![c],
        }
    }

    fn normalized(mut low: i64, mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Laurent::zero();
        }
        coeffs.drain(..lead);
        low += lead as i64;
        Laurent { low, coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn top(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    fn coeff(&self, d: i64) -> Gf {
        if d < self.low {
            return Gf::ZERO;
        }
        self.coeffs
            .get((d - self.low) as usize)
            .copied()
            .unwrap_or(Gf::ZERO)
    }

    fn terms(&self) -> impl Iterator<Item = (i64, Gf)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    fn add(&self, other: &Laurent, f: &FieldSpec) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = min(self.low, other.low);
        let high = max(self.top().unwrap(), other.top().unwrap());
        let mut coeffs = vec![Gf::ZERO; (high - low + 1) as usize];
        for (d, c) in self.terms() {
            coeffs[(d - low) as usize] = c;
        }
        for (d, c) in other.terms() {
            let slot = &mut coeffs[(d - low) as usize];
            *slot = f.add(*slot, c);
        }
        Laurent::normalized(low, coeffs)
    }

    fn neg(&self, f: &FieldSpec) -> Laurent {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    fn scale(&self, c: Gf, f: &FieldSpec) -> Laurent {
        Laurent::normalized(self.low, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Product, keeping only `theta`-degrees `>= floor`.
    fn mul_above(&self, other: &Laurent, floor: Option<i64>, f: &FieldSpec) -> Laurent {
        let (Some(ta), Some(tb)) = (self.top(), other.top()) else {
            return Laurent::zero();
        };
        let high = ta + tb;
        let low = match floor {
            Some(v) => max(v, self.low + other.low),
            None => self.low + other.low,
        };
        if low > high {
            return Laurent::zero();
        }
        let mut out = vec![Gf::ZERO; (high - low + 1) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let da = self.low + i as i64;
            // need da + db >= low
            let jstart = max(0, low - da - other.low) as usize;
            for (j, &b) in other.coeffs.iter().enumerate().skip(jstart) {
                if !b.is_zero() {
                    let k = (da + other.low + j as i64 - low) as usize;
                    out[k] = f.add(out[k], f.mul(a, b));
                }
            }
        }
        Laurent::normalized(low, out)
    }

    fn truncate_below(&self, floor: Option<i64>) -> Laurent {
        match floor {
            Some(v) if v > self.low => {
                if self.top().is_none_or(|t| t < v) {
                    return Laurent::zero();
                }
                Laurent::normalized(v, self.coeffs[(v - self.low) as usize..].to_vec())
            }
            _ => self.clone(),
        }
    }

    /// `c theta^d -> c^q theta^(q d)`.
    fn twist(&self, f: &FieldSpec) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        let q = f.order() as i64;
        let mut coeffs = vec![Gf::ZERO; ((self.coeffs.len() as i64 - 1) * q + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * q as usize] = f.pow(c, q as u64);
        }
        Laurent::normalized(self.low * q, coeffs)
    }

    fn to_text(&self, f: &FieldSpec) -> String {
        let terms: Vec<String> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(d, c)| term_text(c, &mono("theta", d), f))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// A precision window: `t`-degrees `0..=t_prec`, `theta`-degrees `>= floor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub t_prec: usize,
    pub floor: i64,
}

impl Window {
    pub fn new(t_prec: usize, floor: i64) -> Self {
        Window { t_prec, floor }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={},floor={}", self.t_prec, self.floor)
    }
}

/// A truncated element of `K_inf<t>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSeries {
    t_prec: usize,
    floor: Option<i64>,
    rows: Vec<Laurent>,
}

fn lift(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl TateSeries {
    fn build(t_prec: usize, floor: Option<i64>, rows: Vec<Laurent>) -> Self {
        let mut s = TateSeries {
            t_prec,
            floor,
            rows,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.rows.len() > self.t_prec.saturating_add(1) {
            self.rows.truncate(self.t_prec + 1);
        }
        if self.floor.is_some() {
            for r in &mut self.rows {
                *r = r.truncate_below(self.floor);
            }
        }
        while self.rows.last().is_some_and(|r| r.is_zero()) {
            self.rows.pop();
        }
    }

    /// The exact zero.
    pub fn exact_zero() -> Self {
        TateSeries::build(usize::MAX, None, Vec::new())
    }

    pub fn exact_one() -> Self {
        TateSeries::exact_monomial(Gf::ONE, 0, 0)
    }

    /// `c theta^d t^k`, exact.
    pub fn exact_monomial(c: Gf, theta_deg: i64, t_deg: usize) -> Self {
        let mut rows = vec![Laurent::zero(); t_deg + 1];
        rows[t_deg] = Laurent::monomial(c, theta_deg);
        TateSeries::build(usize::MAX, None, rows)
    }

    pub fn zero(w: Window) -> Self {
        TateSeries::build(w.t_prec, Some(w.floor), Vec::new())
    }

    pub fn from_bipoly(p: &BiPoly) -> Self {
        let deg_t = p.deg_t().map_or(0, |d| d + 1);
        let rows = (0..deg_t)
            .map(|k| {
                let coeffs: Vec<Gf> = p.rows().iter().map(|r| r.coeff(k)).collect();
                Laurent::normalized(0, coeffs)
            })
            .collect();
        TateSeries::build(usize::MAX, None, rows)
    }

    /// Builds from `(coefficient, theta-degree, t-degree)` triples, exact.
    pub fn from_terms(terms: &[(Gf, i64, usize)], f: &FieldSpec) -> Self {
        terms
            .iter()
            .fold(TateSeries::exact_zero(), |acc, &(c, d, k)| {
                acc.add(&TateSeries::exact_monomial(c, d, k), f)
            })
    }

    pub fn t_prec(&self) -> usize {
        self.t_prec
    }

    /// `None` when exact in `theta`.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn window(&self) -> Option<Window> {
        self.floor.map(|v| Window::new(self.t_prec, v))
    }

    pub fn coeff(&self, theta_deg: i64, t_deg: usize) -> Gf {
        self.rows
            .get(t_deg)
            .map_or(Gf::ZERO, |r| r.coeff(theta_deg))
    }

    /// The `t^k` coefficient as an element of `K_inf`.
    pub fn t_coeff(&self, k: usize) -> LaurentTheta {
        LaurentTheta {
            value: self.rows.get(k).cloned().unwrap_or_default(),
            floor: self.floor,
        }
    }

    /// Number of stored `t`-rows (trailing zero rows omitted).
    pub fn stored_rows(&self) -> usize {
        self.rows.len()
    }

    /// Exponent `e` of the Gauss norm `q^e` of the known part, `None` when the
    /// window holds no nonzero term.
    pub fn norm_exponent(&self) -> Option<i64> {
        self.rows.iter().filter_map(|r| r.top()).max()
    }

    /// Upper bound on the `theta`-degree of any term, known or not.
    fn degree_bound(&self) -> Option<i64> {
        max(self.norm_exponent(), self.floor.map(|v| v - 1))
    }

    /// True when the window holds no nonzero term.
    pub fn is_zero_in_window(&self) -> bool {
        self.rows.is_empty()
    }

    /// Lowers the precision to `w` (never raises it).
    pub fn truncate(&self, w: Window) -> TateSeries {
        TateSeries::build(
            min(self.t_prec, w.t_prec),
            max(self.floor, Some(w.floor)),
            self.rows.clone(),
        )
    }

    pub fn truncate_floor(&self, floor: i64) -> TateSeries {
        TateSeries::build(self.t_prec, max(self.floor, Some(floor)), self.rows.clone())
    }

    pub fn add(&self, other: &TateSeries, f: &FieldSpec) -> TateSeries {
        let t_prec = min(self.t_prec, other.t_prec);
        let floor = max(self.floor, other.floor);
        let n = max(self.rows.len(), other.rows.len());
        let rows = (0..n)
            .map(|k| match (self.rows.get(k), other.rows.get(k)) {
                (Some(a), Some(b)) => a.add(b, f),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        TateSeries::build(t_prec, floor, rows)
    }

    pub fn neg(&self, f: &FieldSpec) -> TateSeries {
        TateSeries {
            t_prec: self.t_prec,
            floor: self.floor,
            rows: self.rows.iter().map(|r| r.neg(f)).collect(),
        }
    }

    pub fn sub(&self, other: &TateSeries, f: &FieldSpec) -> TateSeries {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Gf, f: &FieldSpec) -> TateSeries {
        TateSeries::build(
            self.t_prec,
            self.floor,
            self.rows.iter().map(|r| r.scale(c, f)).collect(),
        )
    }

    /// Product. Unknown terms of either factor lie below its floor, so the
    /// result is exact above `max(deg(a) + floor(b), deg(b) + floor(a))`.
    pub fn mul(&self, other: &TateSeries, f: &FieldSpec) -> TateSeries {
        let t_prec = min(self.t_prec, other.t_prec);
        let floor = max(
            lift(self.degree_bound(), other.floor),
            lift(other.degree_bound(), self.floor),
        );
        if self.rows.is_empty() || other.rows.is_empty() {
            return TateSeries::build(t_prec, floor, Vec::new());
        }
        let n = min(
            self.rows.len() + other.rows.len() - 1,
            t_prec.saturating_add(1),
        );
        let mut rows = vec![Laurent::zero(); n];
        for (a, ra) in self.rows.iter().enumerate() {
            if ra.is_zero() {
                continue;
            }
            for (b, rb) in other.rows.iter().enumerate() {
                if a + b >= n {
                    break;
                }
                if !rb.is_zero() {
                    let prod = ra.mul_above(rb, floor, f);
                    rows[a + b] = rows[a + b].add(&prod, f);
                }
            }
        }
        TateSeries::build(t_prec, floor, rows)
    }

    pub fn mul_bipoly(&self, p: &BiPoly, f: &FieldSpec) -> TateSeries {
        self.mul(&TateSeries::from_bipoly(p), f)
    }

    /// Coefficient-wise `q`-th power. Unknown terms of degree `< v` map to
    /// degree `<= q(v-1)`, so the new floor is `q v - (q-1)`.
    pub fn twist(&self, f: &FieldSpec) -> TateSeries {
        let q = f.order() as i64;
        TateSeries::build(
            self.t_prec,
            self.floor.map(|v| q * v - (q - 1)),
            self.rows.iter().map(|r| r.twist(f)).collect(),
        )
    }

    /// Splits into the `F[theta, t]` part (`theta`-degrees `>= 0`) and the
    /// part of Gauss norm `< 1`. The polynomial part is exact for
    /// `t`-degrees up to `t_prec`.
    pub fn decompose(&self) -> Result<(BiPoly, TateSeries)> {
        if let Some(v) = self.floor {
            if v > 0 {
                return Err(Error::PrecisionInsufficient(format!(
                    "floor theta^{v} hides part of the polynomial component"
                )));
            }
        }
        let top = max(self.norm_exponent().unwrap_or(-1), -1);
        let mut grid = vec![vec![Gf::ZERO; self.rows.len()]; (top + 1) as usize];
        let mut small_rows = Vec::with_capacity(self.rows.len());
        for (k, r) in self.rows.iter().enumerate() {
            let mut neg = Vec::new();
            for (d, c) in r.terms() {
                if d >= 0 {
                    grid[d as usize][k] = c;
                } else {
                    neg.push((d, c));
                }
            }
            small_rows.push(match neg.first() {
                Some(&(low, _)) => {
                    let mut coeffs = vec![Gf::ZERO; (-low) as usize];
                    for (d, c) in neg {
                        coeffs[(d - low) as usize] = c;
                    }
                    Laurent::normalized(low, coeffs)
                }
                None => Laurent::zero(),
            });
        }
        let poly = BiPoly::from_rows(grid.into_iter().map(PolyT::from_coeffs).collect());
        Ok((poly, TateSeries::build(self.t_prec, self.floor, small_rows)))
    }

    /// Inverse, for series whose `t^0` coefficient `c theta^N` (leading term)
    /// strictly dominates every other `t`-coefficient. The result is
    /// computed down to `theta^floor_limit` at most.
    pub fn invert(&self, floor_limit: i64, f: &FieldSpec) -> Result<TateSeries> {
        let row0 = self.rows.first().filter(|r| !r.is_zero());
        let Some(row0) = row0 else {
            return Err(match self.floor {
                None => Error::NotInvertible,
                Some(v) => Error::PrecisionInsufficient(format!(
                    "t^0 coefficient vanishes above theta^{v}"
                )),
            });
        };
        let big_n = row0.top().unwrap();
        let rest = self.rows[1..].iter().filter_map(|r| r.top()).max();
        if rest.is_some_and(|e| e >= big_n) {
            return Err(Error::NotDominant);
        }
        let c_inv = f
            .inv(row0.coeff(big_n))
            .expect("leading coefficient is nonzero");
        let unit = TateSeries::exact_monomial(c_inv, -big_n, 0);
        let r = self.mul(&unit, f).sub(&TateSeries::exact_one(), f);
        let target = max(r.floor, Some(floor_limit + big_n)).unwrap();
        let minus_r = r.neg(f);
        let mut sum = TateSeries::exact_one().truncate(Window::new(r.t_prec, target));
        let mut power = sum.clone();
        loop {
            power = power.mul(&minus_r, f).truncate_floor(target);
            if power.is_zero_in_window() {
                break;
            }
            sum = sum.add(&power, f);
        }
        // every omitted power lies below `target`
        Ok(sum.mul(&unit, f))
    }
}

impl fmt::Display for TateSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let floor = match self.floor {
            Some(v) => format!(" [floor=θ^{v}]"),
            None => String::new(),
        };
        if self.rows.is_empty() {
            return write!(out, "0{floor}");
        }
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                writeln!(out)?;
            }
            write!(out, "t^{k}: {}{floor}", r.debug_text())?;
        }
        Ok(())
    }
}

impl TateSeries {
    /// Debug text with field-aware coefficients.
    pub fn to_text(&self, f: &FieldSpec) -> String {
        let floor = match self.floor {
            Some(v) => format!(" [floor=θ^{v}]"),
            None => String::new(),
        };
        if self.rows.is_empty() {
            return format!("0{floor}");
        }
        self.rows
            .iter()
            .enumerate()
            .map(|(k, r)| format!("t^{k}: {}{floor}", r.to_text(f)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Laurent {
    fn debug_text(&self) -> String {
        let terms: Vec<String> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(d, c)| format!("{}*{}", c.0, mono("theta", d)))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// A truncated element of `K_inf = F_q((1/theta))`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentTheta {
    value: Laurent,
    floor: Option<i64>,
}

impl LaurentTheta {
    pub fn zero() -> Self {
        LaurentTheta::default()
    }

    pub fn one() -> Self {
        LaurentTheta::monomial(Gf::ONE, 0)
    }

    pub fn monomial(c: Gf, d: i64) -> Self {
        LaurentTheta {
            value: Laurent::monomial(c, d),
            floor: None,
        }
    }

    /// Exact element from `(coefficient, theta-degree)` pairs.
    pub fn exact(terms: &[(Gf, i64)], f: &FieldSpec) -> Self {
        terms.iter().fold(LaurentTheta::zero(), |acc, &(c, d)| {
            acc.add(&LaurentTheta::monomial(c, d), f)
        })
    }

    fn series(&self) -> TateSeries {
        TateSeries::build(0, self.floor, vec![self.value.clone()])
    }

    fn from_series(s: &TateSeries) -> Self {
        s.t_coeff(0)
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    /// `e` with `|self| = q^e`, `None` when nothing survives above the floor.
    pub fn norm_exponent(&self) -> Option<i64> {
        self.value.top()
    }

    pub fn coeff(&self, d: i64) -> Gf {
        self.value.coeff(d)
    }

    /// Nonzero terms in ascending degree.
    pub fn terms(&self) -> Vec<(i64, Gf)> {
        self.value.terms().collect()
    }

    pub fn is_zero_in_window(&self) -> bool {
        self.value.is_zero()
    }

    pub fn truncate_floor(&self, floor: i64) -> Self {
        LaurentTheta::from_series(&self.series().truncate_floor(floor))
    }

    pub fn add(&self, other: &Self, f: &FieldSpec) -> Self {
        LaurentTheta::from_series(&self.series().add(&other.series(), f))
    }

    pub fn neg(&self, f: &FieldSpec) -> Self {
        LaurentTheta {
            value: self.value.neg(f),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &Self, f: &FieldSpec) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Self, f: &FieldSpec) -> Self {
        LaurentTheta::from_series(&self.series().mul(&other.series(), f))
    }

    pub fn twist(&self, f: &FieldSpec) -> Self {
        LaurentTheta::from_series(&self.series().twist(f))
    }

    pub fn invert(&self, floor_limit: i64, f: &FieldSpec) -> Result<Self> {
        Ok(LaurentTheta::from_series(
            &self.series().invert(floor_limit, f)?,
        ))
    }

    pub fn to_text(&self, f: &FieldSpec) -> String {
        match self.floor {
            Some(v) => format!("{} [floor=θ^{v}]", self.value.to_text(f)),
            None => self.value.to_text(f),
        }
    }
}

/// Derived constants of the twist `n`: `n = h (q-1) + delta` with
/// `0 <= delta < q-1`; when `(q-1) | n`, `m = n/(q-1) = p^c m0` with `p` not
/// dividing `m0`, and `ell` is the lcm of all `r` with `q^r - 1 | n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistParams {
    pub n: i64,
    pub p: u64,
    pub q: u64,
    pub h: i64,
    pub delta: u64,
    pub m: Option<u64>,
    pub c: Option<u32>,
    pub m0: Option<u64>,
    pub ell: Option<u64>,
}

impl TwistParams {
    pub fn new(n: i64, f: &FieldSpec) -> Self {
        let p = f.characteristic() as u64;
        let q = f.order() as u64;
        let qm1 = (q - 1) as i64;
        let h = n.div_euclid(qm1);
        let delta = n.rem_euclid(qm1) as u64;
        let m = (delta == 0 && n >= 0).then_some(h as u64);
        let (c, m0) = match m {
            Some(m) if m > 0 => {
                let mut c = 0;
                let mut m0 = m;
                while m0 % p == 0 {
                    m0 /= p;
                    c += 1;
                }
                (Some(c), Some(m0))
            }
            _ => (None, None),
        };
        let ell = if n >= 1 {
            crate::motcoh::ell_of(n as u64, q).ok()
        } else {
            None
        };
        TwistParams {
            n,
            p,
            q,
            h,
            delta,
            m,
            c,
            m0,
            ell,
        }
    }

    pub fn divisible(&self) -> bool {
        self.delta == 0
    }

    /// `T = h + delta + 2`, `floor = -(q T + h)`.
    pub fn default_window(&self) -> Window {
        let h = max(self.h, 0);
        let t = (h + self.delta as i64 + 2) as usize;
        Window::new(t, -(self.q as i64 * t as i64 + h))
    }

    pub(crate) fn require_positive_divisible(&self) -> Result<u64> {
        if self.n <= 0 {
            return Err(Error::NonPositiveTwist);
        }
        match self.m {
            Some(m) => Ok(m),
            None => Err(Error::NotDivisible {
                n: self.n as u64,
                q_minus_one: self.q - 1,
            }),
        }
    }
}

/// `(1 - t theta^(-a))^e` truncated to `t^0..=t^T` and `theta`-degrees
/// `>= floor`. Negative `e` uses the series `sum_k C(-e+k-1, k) (t theta^-a)^k`.
fn binomial_factor(a: i64, e: i64, w: Window, f: &FieldSpec) -> TateSeries {
    debug_assert!(a > 0);
    let p = f.characteristic();
    let mut rows = Vec::new();
    let mut k = 0usize;
    while k <= w.t_prec && -(a * k as i64) >= w.floor {
        if e >= 0 && k as i64 > e {
            break;
        }
        let c = if e >= 0 {
            let b = lucas_binom(e as u64, k as i64, p);
            if k % 2 == 1 {
                f.neg(f.from_int(b as i64))
            } else {
                f.from_int(b as i64)
            }
        } else {
            f.from_int(lucas_binom((-e) as u64 + k as u64 - 1, k as i64, p) as i64)
        };
        rows.push(Laurent::monomial(c, -(a * k as i64)));
        k += 1;
    }
    TateSeries::build(w.t_prec, Some(w.floor), rows)
}

/// `prod_{i >= 0} (1 - t theta^(-q^i))^e`, exact in the window.
fn flattened_product(e: i64, w: Window, f: &FieldSpec) -> TateSeries {
    let q = f.order() as i64;
    let mut acc = TateSeries::exact_one().truncate(w);
    let mut a = 1i64;
    while a <= -w.floor {
        acc = acc.mul(&binomial_factor(a, e, w, f), f);
        a *= q;
    }
    acc
}

fn sign_power(k: i64, f: &FieldSpec) -> Gf {
    if k.rem_euclid(2) == 1 {
        f.neg(Gf::ONE)
    } else {
        Gf::ONE
    }
}

/// `(t - theta^a)^(-n) = (-1)^n theta^(-n a) (1 - t theta^-a)^(-n)`, exact
/// in the window.
pub fn inv_t_minus_theta_power(a: i64, n: u64, w: Window, f: &FieldSpec) -> TateSeries {
    let shift = n as i64 * a;
    let rel = Window::new(w.t_prec, w.floor + shift);
    let unit = TateSeries::exact_monomial(sign_power(n as i64, f), -shift, 0);
    if n == 0 {
        return unit.truncate(w);
    }
    binomial_factor(a, -(n as i64), rel, f).mul(&unit, f)
}

/// `(t - theta)^n` as an exact polynomial.
pub fn t_minus_theta_pow(n: u64, f: &FieldSpec) -> BiPoly {
    BiPoly::t().sub(&BiPoly::theta(), f).pow(n, f)
}

/// `omega^n = (-theta)^m prod_i (1 - t theta^(-q^i))^(-n)` for `n = m (q-1) > 0`.
pub fn omega_pow(params: &TwistParams, w: Window, f: &FieldSpec) -> Result<TateSeries> {
    let m = params.require_positive_divisible()? as i64;
    let rel = Window::new(w.t_prec, w.floor - m);
    let unit = TateSeries::exact_monomial(sign_power(m, f), m, 0);
    Ok(flattened_product(-params.n, rel, f).mul(&unit, f))
}

/// `nu_n = (-theta)^(-h) prod_j (1 - t theta^(-q^j))^n` for `n >= 0`.
pub fn nu(params: &TwistParams, w: Window, f: &FieldSpec) -> Result<TateSeries> {
    if params.n < 0 {
        return Err(Error::NegativeTwist(params.n));
    }
    let h = params.h;
    let rel = Window::new(w.t_prec, w.floor + h);
    let unit = TateSeries::exact_monomial(sign_power(h, f), -h, 0);
    Ok(flattened_product(params.n, rel, f).mul(&unit, f))
}

/// `(t - theta)^n x - x^(1)`.
pub fn twisted_difference(x: &TateSeries, n: u64, f: &FieldSpec) -> TateSeries {
    x.mul_bipoly(&t_minus_theta_pow(n, f), f)
        .sub(&x.twist(f), f)
}

/// `beta(x) = x - (t - theta)^n x^(1)`.
pub fn beta(x: &TateSeries, n: u64, f: &FieldSpec) -> TateSeries {
    x.sub(&x.twist(f).mul_bipoly(&t_minus_theta_pow(n, f), f), f)
}

/// The solution `s` of `s - (t - theta)^(-n) s^(1) = h` for `|h| < 1`,
/// summed as `sum_k` of iterates of `x -> (t - theta)^(-n) x^(1)`.
pub fn solve_small(h: &TateSeries, n: u64, w: Window, f: &FieldSpec) -> Result<TateSeries> {
    let h = h.truncate(w);
    if let Some(e) = h.norm_exponent() {
        if e >= 0 {
            return Err(Error::NormTooLarge { exponent: e });
        }
    }
    let floor = h.floor.expect("truncated to a window");
    if floor > 0 {
        return Err(Error::PrecisionInsufficient(format!(
            "floor theta^{floor} hides terms of norm >= 1"
        )));
    }
    let mut sum = h.clone();
    let mut term = h;
    loop {
        let tw = term.twist(f);
        let bound = match tw.degree_bound() {
            Some(b) => b,
            None => break,
        };
        if bound - (n as i64) < floor {
            break;
        }
        let gen = inv_t_minus_theta_power(1, n, Window::new(w.t_prec, floor - bound), f);
        term = gen.mul(&tw, f).truncate_floor(floor);
        sum = sum.add(&term, f);
    }
    Ok(sum)
}

/// `xi_e = sum_k e^(k) / prod_{j <= k} (t - theta^(q^j))^n` for
/// `deg_theta(e) < n`; it solves `(t - theta)^n xi - xi^(1) = e`.
pub fn xi_series(e: &BiPoly, n: u64, w: Window, f: &FieldSpec) -> Result<TateSeries> {
    let Some(d) = e.deg_theta() else {
        return Ok(TateSeries::zero(w));
    };
    if d as u64 >= n {
        return Err(Error::DegreeBound {
            degree: d as i64,
            bound: n as i64,
        });
    }
    let gen = inv_t_minus_theta_power(1, n, Window::new(w.t_prec, w.floor - d as i64), f);
    let h = gen.mul_bipoly(e, f).truncate(w);
    solve_small(&h, n, w, f)
}

/// The Carlitz polylogarithm `L_n(z) = sum_i z^(q^i) / prod_{j=1..i} (theta - theta^(q^j))^n`,
/// exact above `floor`. Requires `|z| < q^(q n / (q-1))`.
pub fn polylog(n: u64, z: &LaurentTheta, floor: i64, f: &FieldSpec) -> Result<LaurentTheta> {
    let Some(d) = z.norm_exponent() else {
        return Ok(z.truncate_floor(floor));
    };
    let q = f.order() as i64;
    let n = n as i64;
    if (q - 1) * d >= q * n {
        return Err(Error::RadiusViolation {
            degree: d,
            bound_num: q * n,
            bound_den: q - 1,
        });
    }
    let mut sum = z.truncate_floor(floor);
    let mut zpow = z.clone();
    let mut i = 0u32;
    let mut qi = 1i64;
    let mut den_norm = 0i64;
    loop {
        i += 1;
        qi *= q;
        den_norm -= n * qi;
        zpow = zpow.twist(f);
        let zbound = max(zpow.norm_exponent(), zpow.floor().map(|v| v - 1)).unwrap_or(i64::MIN / 4);
        let expected = zbound + den_norm;
        if expected < floor {
            break;
        }
        let mut term = zpow.truncate_floor(floor - den_norm);
        let mut qj = 1i64;
        for _ in 1..=i {
            qj *= q;
            // (theta - theta^(q^j))^(-n) = (-1)^n theta^(-n q^j) (1 - theta^(1 - q^j))^(-n)
            let own = -n * qj;
            let fl = floor - (expected - own);
            term = term.mul(&inv_theta_gap(qj, n, fl, f), f);
        }
        sum = sum.add(&term.truncate_floor(floor), f);
    }
    Ok(sum)
}

/// `(theta - theta^a)^(-n)` as a Laurent series, exact above `floor`.
fn inv_theta_gap(a: i64, n: i64, floor: i64, f: &FieldSpec) -> LaurentTheta {
    let p = f.characteristic();
    let lead = -n * a;
    let step = a - 1;
    let mut acc = LaurentTheta {
        value: Laurent::zero(),
        floor: Some(floor),
    };
    let sign = sign_power(n, f);
    let mut k = 0i64;
    while lead - k * step >= floor {
        let c = f.from_int(lucas_binom((n + k - 1) as u64, k, p) as i64);
        acc = acc.add(&LaurentTheta::monomial(f.mul(c, sign), lead - k * step), f);
        k += 1;
    }
    acc
}
