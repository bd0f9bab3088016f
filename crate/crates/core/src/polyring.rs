//! Dense polynomials over a finite field: `F_q[t]`, `F_q[theta, t]` and
//! `F_q[t][x]`.
//!
//! All types are plain coefficient vectors with trailing zeros trimmed;
//! arithmetic takes the ambient [`FieldSpec`] as an explicit argument.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Embedding, FieldSpec, Gf};

/// A polynomial in `t` over `F_q`. `coeffs[k]` is the coefficient of `t^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyT {
    coeffs: Vec<Gf>,
}

fn trim(v: &mut Vec<Gf>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl PolyT {
    pub fn zero() -> Self {
        PolyT { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyT::constant(Gf::ONE)
    }

    pub fn constant(c: Gf) -> Self {
        PolyT::monomial(c, 0)
    }

    pub fn monomial(c: Gf, k: usize) -> Self {
        if c.is_zero() {
            return PolyT::zero();
        }
        let mut coeffs = vec![Gf::ZERO; k + 1];
        coeffs[k] = c;
        PolyT { coeffs }
    }

    /// `t`.
    pub fn t() -> Self {
        PolyT::monomial(Gf::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        trim(&mut coeffs);
        PolyT { coeffs }
    }

    /// Builds from small integers interpreted in the prime field.
    pub fn from_ints(coeffs: &[i64], f: &FieldSpec) -> Self {
        PolyT::from_coeffs(coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Gf::ONE]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Gf {
        self.coeffs.get(k).copied().unwrap_or(Gf::ZERO)
    }

    pub fn leading(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    pub fn add(&self, other: &PolyT, f: &FieldSpec) -> PolyT {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = f.add(*c, s);
        }
        PolyT::from_coeffs(coeffs)
    }

    pub fn add_assign(&mut self, other: &PolyT, f: &FieldSpec) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Gf::ZERO);
        }
        for (c, &o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c = f.add(*c, o);
        }
        trim(&mut self.coeffs);
    }

    /// `self += c * t^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &PolyT, c: Gf, shift: usize, f: &FieldSpec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Gf::ZERO);
        }
        for (i, &o) in other.coeffs.iter().enumerate() {
            if !o.is_zero() {
                let slot = &mut self.coeffs[i + shift];
                *slot = f.add(*slot, f.mul(c, o));
            }
        }
        trim(&mut self.coeffs);
    }

    pub fn neg(&self, f: &FieldSpec) -> PolyT {
        PolyT {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyT, f: &FieldSpec) -> PolyT {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Gf, f: &FieldSpec) -> PolyT {
        if c.is_zero() {
            return PolyT::zero();
        }
        PolyT {
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> PolyT {
        if self.is_zero() {
            return PolyT::zero();
        }
        let mut coeffs = vec![Gf::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        PolyT { coeffs }
    }

    pub fn mul(&self, other: &PolyT, f: &FieldSpec) -> PolyT {
        if self.is_zero() || other.is_zero() {
            return PolyT::zero();
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        PolyT::from_coeffs(out)
    }

    pub fn pow(&self, mut e: u64, f: &FieldSpec) -> PolyT {
        let mut acc = PolyT::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &PolyT, f: &FieldSpec) -> Result<(PolyT, PolyT)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((PolyT::zero(), self.clone()));
        }
        let mut quot = vec![Gf::ZERO; r.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(r[k + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        Ok((PolyT::from_coeffs(quot), PolyT::from_coeffs(r)))
    }

    pub fn make_monic(&self, f: &FieldSpec) -> PolyT {
        match f.inv(self.leading()) {
            Some(inv) => self.scale(inv, f),
            None => PolyT::zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Gf::ONE
    }

    /// Formal derivative in `t`.
    pub fn derivative(&self, f: &FieldSpec) -> PolyT {
        PolyT::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| f.mul_int(c, k as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: Gf, f: &FieldSpec) -> Gf {
        self.coeffs
            .iter()
            .rev()
            .fold(Gf::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at `zeta` in an extension, mapping coefficients through `embed`.
    pub fn eval_in(&self, zeta: Gf, ext: &FieldSpec, embed: &Embedding) -> Gf {
        self.coeffs.iter().rev().fold(Gf::ZERO, |acc, &c| {
            ext.add(ext.mul(acc, zeta), embed.apply(c))
        })
    }

    /// Applies `g` to every coefficient.
    pub fn map_coeffs(&self, g: impl Fn(Gf) -> Gf) -> PolyT {
        PolyT::from_coeffs(self.coeffs.iter().map(|&c| g(c)).collect())
    }

    /// Canonical text form in the variable `t`, descending degree.
    pub fn to_text(&self, f: &FieldSpec) -> String {
        self.to_text_in("t", f)
    }

    pub fn to_text_in(&self, var: &str, f: &FieldSpec) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| term_text(c, &mono(var, k as i64), f))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

pub(crate) fn mono(var: &str, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// `c*mono` with the conventions: coefficient 1 omitted, non-prime-field
/// coefficients parenthesized when multiplied.
pub(crate) fn term_text(c: Gf, mono: &str, f: &FieldSpec) -> String {
    let cs = f.format(c);
    if mono.is_empty() {
        return cs;
    }
    if c == Gf::ONE {
        return mono.to_string();
    }
    if f.is_prime_field() || !cs.contains('+') {
        format!("{cs}*{mono}")
    } else {
        format!("({cs})*{mono}")
    }
}

/// Monic gcd. `gcd(0, 0)` is rejected.
pub fn gcd_t(a: &PolyT, b: &PolyT, f: &FieldSpec) -> Result<PolyT> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y, f)?;
        x = y;
        y = r;
    }
    Ok(x.make_monic(f))
}

/// A polynomial in `theta` and `t`, stored as `F_q[t][theta]`:
/// `rows[j]` is the coefficient of `theta^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiPoly {
    rows: Vec<PolyT>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::from_poly_t(PolyT::one())
    }

    pub fn from_rows(mut rows: Vec<PolyT>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn from_poly_t(p: PolyT) -> Self {
        BiPoly::from_rows(vec![p])
    }

    /// `c * theta^j * t^i`.
    pub fn monomial(c: Gf, theta_deg: usize, t_deg: usize) -> Self {
        let mut rows = vec![PolyT::zero(); theta_deg + 1];
        rows[theta_deg] = PolyT::monomial(c, t_deg);
        BiPoly::from_rows(rows)
    }

    pub fn theta() -> Self {
        BiPoly::monomial(Gf::ONE, 1, 0)
    }

    pub fn t() -> Self {
        BiPoly::monomial(Gf::ONE, 0, 1)
    }

    /// Builds from `(coefficient, theta-degree, t-degree)` triples with
    /// prime-field integer coefficients.
    pub fn from_terms(terms: &[(i64, usize, usize)], f: &FieldSpec) -> Self {
        terms.iter().fold(BiPoly::zero(), |acc, &(c, j, i)| {
            acc.add(&BiPoly::monomial(f.from_int(c), j, i), f)
        })
    }

    pub fn rows(&self) -> &[PolyT] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_theta(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn coeff(&self, theta_deg: usize, t_deg: usize) -> Gf {
        self.rows
            .get(theta_deg)
            .map_or(Gf::ZERO, |r| r.coeff(t_deg))
    }

    pub fn theta_coeff(&self, theta_deg: usize) -> PolyT {
        self.rows.get(theta_deg).cloned().unwrap_or_default()
    }

    /// Returns the polynomial as an element of `F_q[t]` if it has no `theta`.
    pub fn as_poly_t(&self) -> Option<PolyT> {
        match self.rows.len() {
            0 => Some(PolyT::zero()),
            1 => Some(self.rows[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &BiPoly, f: &FieldSpec) -> BiPoly {
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n)
            .map(|j| match (self.rows.get(j), other.rows.get(j)) {
                (Some(a), Some(b)) => a.add(b, f),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        BiPoly::from_rows(rows)
    }

    pub fn neg(&self, f: &FieldSpec) -> BiPoly {
        BiPoly {
            rows: self.rows.iter().map(|r| r.neg(f)).collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly, f: &FieldSpec) -> BiPoly {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Gf, f: &FieldSpec) -> BiPoly {
        BiPoly::from_rows(self.rows.iter().map(|r| r.scale(c, f)).collect())
    }

    pub fn mul_poly_t(&self, p: &PolyT, f: &FieldSpec) -> BiPoly {
        BiPoly::from_rows(self.rows.iter().map(|r| r.mul(p, f)).collect())
    }

    pub fn mul(&self, other: &BiPoly, f: &FieldSpec) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![PolyT::zero(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j].add_assign(&a.mul(b, f), f);
                }
            }
        }
        BiPoly::from_rows(rows)
    }

    pub fn pow(&self, mut e: u64, f: &FieldSpec) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// The `k`-fold twist: `c theta^j t^i -> c^(q^k) theta^(j q^k) t^i`.
    pub fn twist(&self, k: u32, f: &FieldSpec) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let qk = (f.order() as usize).pow(k);
        let mut rows = vec![PolyT::zero(); (self.rows.len() - 1) * qk + 1];
        for (j, r) in self.rows.iter().enumerate() {
            rows[j * qk] = r.map_coeffs(|c| f.pow(c, qk as u64));
        }
        BiPoly::from_rows(rows)
    }

    /// Largest monic polynomial of `F_q[t]` dividing `self`: the monic gcd of
    /// its `theta`-coefficients.
    pub fn content_t(&self, f: &FieldSpec) -> Result<PolyT> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = PolyT::zero();
        for r in &self.rows {
            if r.is_zero() {
                continue;
            }
            g = gcd_t(&g, r, f)?;
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    /// Exact division of every `theta`-coefficient by `d`, or `None` if `d`
    /// does not divide.
    pub fn div_exact_poly_t(&self, d: &PolyT, f: &FieldSpec) -> Result<Option<BiPoly>> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let (q, rem) = r.div_rem(d, f)?;
            if !rem.is_zero() {
                return Ok(None);
            }
            rows.push(q);
        }
        Ok(Some(BiPoly::from_rows(rows)))
    }

    /// Partial derivative in `t`.
    pub fn derivative_t(&self, f: &FieldSpec) -> BiPoly {
        BiPoly::from_rows(self.rows.iter().map(|r| r.derivative(f)).collect())
    }

    /// Substitutes `t = zeta` (in an extension); the result is a polynomial
    /// in `theta` over the extension, returned as a [`PolyT`] whose variable
    /// stands for `theta`.
    pub fn eval_t(&self, zeta: Gf, ext: &FieldSpec, embed: &Embedding) -> PolyT {
        PolyT::from_coeffs(
            self.rows
                .iter()
                .map(|r| r.eval_in(zeta, ext, embed))
                .collect(),
        )
    }

    /// Canonical text form: terms in descending `(theta-degree, t-degree)` order.
    pub fn to_text(&self, f: &FieldSpec) -> String {
        let mut terms = Vec::new();
        for (j, r) in self.rows.iter().enumerate().rev() {
            for (i, &c) in r.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let m = match (mono("theta", j as i64), mono("t", i as i64)) {
                    (a, b) if a.is_empty() => b,
                    (a, b) if b.is_empty() => a,
                    (a, b) => format!("{a}*{b}"),
                };
                terms.push(term_text(c, &m, f));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// A polynomial in `x` with coefficients in `F_q[t]`; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XPoly {
    coeffs: Vec<PolyT>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        XPoly::from_coeffs(vec![PolyT::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<PolyT>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    /// `c * x^k`.
    pub fn monomial(c: PolyT, k: usize) -> Self {
        let mut coeffs = vec![PolyT::zero(); k + 1];
        coeffs[k] = c;
        XPoly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[PolyT] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> PolyT {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &XPoly, f: &FieldSpec) -> XPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        XPoly::from_coeffs(
            (0..n)
                .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                    (Some(a), Some(b)) => a.add(b, f),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn neg(&self, f: &FieldSpec) -> XPoly {
        XPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg(f)).collect(),
        }
    }

    pub fn sub(&self, other: &XPoly, f: &FieldSpec) -> XPoly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &XPoly, f: &FieldSpec) -> XPoly {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![PolyT::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_assign(&a.mul(b, f), f);
                }
            }
        }
        XPoly::from_coeffs(out)
    }

    pub fn mul_poly_t(&self, c: &PolyT, f: &FieldSpec) -> XPoly {
        XPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c, f)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> XPoly {
        if self.is_zero() {
            return XPoly::zero();
        }
        let mut coeffs = vec![PolyT::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        XPoly { coeffs }
    }

    /// Exact quotient by a divisor whose `x^0` coefficient is a nonzero
    /// constant, computed from the low-degree end. Returns `None` when the
    /// division is not exact.
    pub fn div_exact(&self, d: &XPoly, f: &FieldSpec) -> Option<XPoly> {
        let dd = d.degree()?;
        let d0 = &d.coeffs[0];
        if d0.degree() != Some(0) {
            return None;
        }
        let c_inv = f.inv(d0.coeff(0))?;
        let na = match self.degree() {
            None => return Some(XPoly::zero()),
            Some(na) => na,
        };
        if na < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![PolyT::zero(); na - dd + 1];
        for k in 0..quot.len() {
            let qk = rem[k].scale(c_inv, f);
            if qk.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[k + j] = rem[k + j].sub(&qk.mul(dj, f), f);
                }
            }
            quot[k] = qk;
        }
        if rem.iter().all(|r| r.is_zero()) {
            Some(XPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    pub fn eval(&self, x: Gf, f: &FieldSpec) -> PolyT {
        self.coeffs
            .iter()
            .rev()
            .fold(PolyT::zero(), |acc, c| acc.scale(x, f).add(c, f))
    }

    /// Synthetic division by `x - 1`: returns `(quotient, remainder)`.
    fn div_x_minus_one(&self, f: &FieldSpec) -> (XPoly, PolyT) {
        let n = self.coeffs.len();
        if n == 0 {
            return (XPoly::zero(), PolyT::zero());
        }
        let mut quot = vec![PolyT::zero(); n - 1];
        let mut carry = PolyT::zero();
        for k in (0..n).rev() {
            let cur = self.coeffs[k].add(&carry, f);
            if k == 0 {
                return (XPoly::from_coeffs(quot), cur);
            }
            quot[k - 1] = cur.clone();
            carry = cur;
        }
        unreachable!()
    }

    /// Order of vanishing `h` at `x = 1` and the coefficient of `(x-1)^h` in
    /// the expansion there.
    pub fn expand_at_one(&self, f: &FieldSpec) -> Result<(usize, PolyT)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut cur = self.clone();
        let mut h = 0;
        loop {
            let (quot, rem) = cur.div_x_minus_one(f);
            if !rem.is_zero() {
                return Ok((h, rem));
            }
            h += 1;
            cur = quot;
        }
    }

    /// Text form `(<PolyT>)*x^k + ...`, descending `k`.
    pub fn to_text(&self, f: &FieldSpec) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = write!(out, "({})*x^{k}", c.to_text(f));
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }

    /// Canonical text of each coefficient, ascending in `x`.
    pub fn coeff_texts(&self, f: &FieldSpec) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_text(f)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{ext_field, ff_make};
    use proptest::prelude::*;

    fn f3() -> FieldSpec {
        ff_make(3, 1).unwrap()
    }

    #[test]
    fn twist_examples() {
        let f = f3();
        let p = BiPoly::theta().add(&BiPoly::t(), &f);
        let expect = BiPoly::monomial(Gf::ONE, 3, 0).add(&BiPoly::t(), &f);
        assert_eq!(p.twist(1, &f), expect);

        let f4 = ff_make(2, 2).unwrap();
        let u = f4.generator();
        // q = 4: u^4 = u
        let tw = BiPoly::monomial(u, 1, 0).twist(1, &f4);
        assert_eq!(tw, BiPoly::monomial(u, 4, 0));
        for c in f4.elements() {
            let cst = BiPoly::monomial(c, 0, 0);
            assert_eq!(cst.twist(1, &f4), cst);
        }
        // the absolute Frobenius (p-th power) moves u, the q-power does not
        assert_ne!(f4.frobenius(u), u);
    }

    #[test]
    fn content_examples() {
        let f = f3();
        let p = BiPoly::from_terms(&[(1, 0, 3), (2, 0, 1)], &f);
        assert_eq!(
            p.content_t(&f).unwrap(),
            PolyT::from_ints(&[0, 2, 0, 1], &f)
        );

        let f2 = ff_make(2, 1).unwrap();
        let p = BiPoly::from_terms(&[(1, 1, 2), (1, 1, 1), (1, 0, 3), (1, 0, 2)], &f2);
        assert_eq!(p.content_t(&f2).unwrap(), PolyT::from_ints(&[0, 1, 1], &f2));

        let p = BiPoly::theta().add(&BiPoly::one(), &f);
        assert_eq!(p.content_t(&f).unwrap(), PolyT::one());
        assert_eq!(
            BiPoly::zero().content_t(&f).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn expand_at_one_examples() {
        let f = f3();
        let z = XPoly::from_coeffs(vec![PolyT::one(), PolyT::from_ints(&[2], &f)]);
        assert_eq!(
            z.expand_at_one(&f).unwrap(),
            (1, PolyT::from_ints(&[2], &f))
        );
        assert_eq!(XPoly::one().expand_at_one(&f).unwrap(), (0, PolyT::one()));
        let xm1 = XPoly::from_coeffs(vec![PolyT::from_ints(&[-1], &f), PolyT::one()]);
        let z = xm1.mul(&xm1, &f).mul_poly_t(&PolyT::t(), &f);
        assert_eq!(z.expand_at_one(&f).unwrap(), (2, PolyT::t()));
        assert_eq!(
            XPoly::zero().expand_at_one(&f).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn gcd_eval_derivative_examples() {
        let f = f3();
        let a = PolyT::from_ints(&[0, -1, 1], &f);
        let b = PolyT::from_ints(&[0, -1, 0, 1], &f);
        assert_eq!(gcd_t(&a, &b, &f).unwrap(), PolyT::from_ints(&[0, 2, 1], &f));
        for z in f.elements() {
            assert_eq!(b.eval(z, &f), Gf::ZERO);
        }
        let d = PolyT::from_ints(&[0, 2, 0, 1], &f).derivative(&f);
        assert_eq!(d, PolyT::from_ints(&[2], &f));
        assert_eq!(
            gcd_t(&PolyT::zero(), &PolyT::zero(), &f).unwrap_err(),
            Error::GcdOfZeros
        );
    }

    #[test]
    fn eval_t_matches_direct_substitution() {
        let base = ff_make(2, 1).unwrap();
        let (ext, emb) = ext_field(&base, 3).unwrap();
        let p = BiPoly::from_terms(&[(1, 2, 3), (1, 1, 1), (1, 0, 2), (1, 0, 0)], &base);
        for z in ext.elements() {
            let got = p.eval_t(z, &ext, &emb);
            for (j, r) in p.rows().iter().enumerate() {
                let mut v = Gf::ZERO;
                for (i, &c) in r.coeffs().iter().enumerate() {
                    v = ext.add(v, ext.mul(emb.apply(c), ext.pow(z, i as u64)));
                }
                assert_eq!(got.coeff(j), v);
            }
        }
    }

    #[test]
    fn text_forms() {
        let f = f3();
        let p = BiPoly::from_terms(&[(2, 3, 0), (1, 0, 3), (2, 0, 1)], &f);
        assert_eq!(p.to_text(&f), "2*theta^3 + t^3 + 2*t");
        assert_eq!(BiPoly::zero().to_text(&f), "0");
        let z = XPoly::from_coeffs(vec![PolyT::one(), PolyT::from_ints(&[2], &f)]);
        assert_eq!(z.to_text(&f), "(2)*x^1 + (1)*x^0");
        let f4 = ff_make(2, 2).unwrap();
        let u1 = f4.from_coords(&[1, 1]);
        assert_eq!(PolyT::monomial(u1, 2).to_text(&f4), "(u+1)*t^2");
        assert_eq!(PolyT::monomial(f4.generator(), 1).to_text(&f4), "u*t");
    }

    #[test]
    fn div_exact_low_end() {
        let f = f3();
        let a = XPoly::from_coeffs(vec![
            PolyT::one(),
            PolyT::t(),
            PolyT::from_ints(&[1, 1], &f),
        ]);
        let b = XPoly::from_coeffs(vec![PolyT::one(), PolyT::from_ints(&[0, 0, 2], &f)]);
        let prod = a.mul(&b, &f);
        assert_eq!(prod.div_exact(&b, &f).unwrap(), a);
        assert!(prod
            .add(&XPoly::monomial(PolyT::one(), 3), &f)
            .div_exact(&b, &f)
            .is_none());
    }

    fn arb_bipoly() -> impl Strategy<Value = Vec<(i64, usize, usize)>> {
        prop::collection::vec((0i64..3, 0usize..4, 0usize..4), 0..6)
    }

    proptest! {
        #[test]
        fn twist_is_a_ring_homomorphism(a in arb_bipoly(), b in arb_bipoly(), k in 1u32..3) {
            let f = f3();
            let a = BiPoly::from_terms(&a, &f);
            let b = BiPoly::from_terms(&b, &f);
            prop_assert_eq!(a.mul(&b, &f).twist(k, &f), a.twist(k, &f).mul(&b.twist(k, &f), &f));
            prop_assert_eq!(a.add(&b, &f).twist(k, &f), a.twist(k, &f).add(&b.twist(k, &f), &f));
        }

        #[test]
        fn twist_is_a_ring_homomorphism_f4(a in prop::collection::vec((0u32..4, 0usize..3, 0usize..3), 0..5),
                                           b in prop::collection::vec((0u32..4, 0usize..3, 0usize..3), 0..5)) {
            let f = ff_make(2, 2).unwrap();
            let build = |v: &[(u32, usize, usize)]| v.iter().fold(BiPoly::zero(), |acc, &(c, j, i)| {
                acc.add(&BiPoly::monomial(Gf(c), j, i), &f)
            });
            let (a, b) = (build(&a), build(&b));
            prop_assert_eq!(a.mul(&b, &f).twist(1, &f), a.twist(1, &f).mul(&b.twist(1, &f), &f));
        }

        #[test]
        fn content_times_cofactor(a in arb_bipoly(), c in prop::collection::vec(0i64..3, 1..4)) {
            let f = f3();
            let a = BiPoly::from_terms(&a, &f);
            let c = PolyT::from_ints(&c, &f);
            prop_assume!(!a.is_zero() && !c.is_zero());
            let p = a.mul_poly_t(&c, &f);
            let content = p.content_t(&f).unwrap();
            prop_assert!(content.is_monic());
            let cof = p.div_exact_poly_t(&content, &f).unwrap().unwrap();
            prop_assert_eq!(cof.mul_poly_t(&content, &f), p);
            prop_assert!(cof.content_t(&f).unwrap().is_one());
            // c divides the content
            let (_, r) = content.div_rem(&c, &f).unwrap();
            prop_assert!(r.is_zero());
        }

        #[test]
        fn expand_at_one_leading_term(z in prop::collection::vec(prop::collection::vec(0i64..3, 0..3), 1..5),
                                      extra in 0usize..3) {
            let f = f3();
            let mut z = XPoly::from_coeffs(z.iter().map(|c| PolyT::from_ints(c, &f)).collect());
            let xm1 = XPoly::from_coeffs(vec![PolyT::from_ints(&[-1], &f), PolyT::one()]);
            for _ in 0..extra {
                z = z.mul(&xm1, &f);
            }
            prop_assume!(!z.is_zero());
            let (h, lead) = z.expand_at_one(&f).unwrap();
            prop_assert!(h >= extra);
            prop_assert!(!lead.is_zero());
            let mut pw = XPoly::one();
            for _ in 0..h {
                pw = pw.mul(&xm1, &f);
            }
            let rest = z.sub(&pw.mul_poly_t(&lead, &f), &f);
            if !rest.is_zero() {
                prop_assert!(rest.expand_at_one(&f).unwrap().0 > h);
            }
        }
    }
}
