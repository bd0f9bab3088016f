//! Power sums `S_d(n)`, the zeta polynomial `Z(x, -n)` by enumeration and
//! by Goss's recursion, its expansion at `x = 1`, and truncated values
//! `zeta_C(n)` at positive `n`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ff::{lucas_binom, FieldSpec, Gf};
use crate::polyring::{PolyT, XPoly};
use crate::tate::LaurentTheta;

/// Default bound on the estimated number of field multiplications spent by
/// [`z_direct`].
pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;

/// `{k : C(n, k) != 0 mod p}`, ascending.
fn lucas_support(n: u64, p: u32) -> Vec<u64> {
    (0..=n)
        .filter(|&k| lucas_binom(n, k as i64, p) != 0)
        .collect()
}

fn base_p_digits(mut k: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while k > 0 {
        out.push(k % p);
        k /= p;
    }
    out
}

/// `g^(p^j)`: coefficients raised to `p^j`, `t -> t^(p^j)`.
fn frobenius_expand(g: &PolyT, j: u32, f: &FieldSpec) -> PolyT {
    if j == 0 || g.is_zero() {
        return g.clone();
    }
    let step = (f.characteristic() as usize).pow(j);
    let mut coeffs = vec![Gf::ZERO; (g.coeffs().len() - 1) * step + 1];
    for (i, &c) in g.coeffs().iter().enumerate() {
        coeffs[i * step] = f.frobenius_iter(c, j);
    }
    PolyT::from_coeffs(coeffs)
}

/// Accumulates `sum_g g^k` for each `k` in `ks`, using the base-`p` digits
/// of `k` and Frobenius to assemble each power from `g^0 .. g^(p-1)`.
struct PowerAccumulator<'a> {
    digits: Vec<Vec<u64>>,
    sums: Vec<PolyT>,
    f: &'a FieldSpec,
}

impl<'a> PowerAccumulator<'a> {
    fn new(ks: &'a [u64], f: &'a FieldSpec) -> Self {
        let p = f.characteristic() as u64;
        PowerAccumulator {
            digits: ks.iter().map(|&k| base_p_digits(k, p)).collect(),
            sums: vec![PolyT::zero(); ks.len()],
            f,
        }
    }

    fn push(&mut self, g: &PolyT) {
        let f = self.f;
        let p = f.characteristic() as usize;
        let mut small = Vec::with_capacity(p);
        small.push(PolyT::one());
        for r in 1..p {
            small.push(small[r - 1].mul(g, f));
        }
        for (idx, digits) in self.digits.iter().enumerate() {
            let mut acc = PolyT::one();
            for (j, &d) in digits.iter().enumerate() {
                if d > 0 {
                    acc = acc.mul(&frobenius_expand(&small[d as usize], j as u32, f), f);
                }
            }
            self.sums[idx].add_assign(&acc, f);
        }
    }
}

/// Calls `visit` on every polynomial of degree `< len` (monic of degree
/// `len` when `monic`), in lexicographic coefficient order.
fn for_each_poly(len: usize, monic: bool, f: &FieldSpec, mut visit: impl FnMut(&PolyT)) {
    let q = f.order();
    let mut coeffs = vec![Gf::ZERO; len];
    if monic {
        coeffs.push(Gf::ONE);
    }
    loop {
        visit(&PolyT::from_coeffs(coeffs.clone()));
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if coeffs[i].0 + 1 < q {
                coeffs[i] = Gf(coeffs[i].0 + 1);
                break;
            }
            coeffs[i] = Gf::ZERO;
            i += 1;
        }
    }
}

/// Estimated field multiplications for `S_d(n)`.
fn power_sum_work(n: u64, d: usize, f: &FieldSpec) -> u64 {
    let q = f.order() as u64;
    let p = f.characteristic() as u64;
    let ks = lucas_support(n, p as u32);
    let low = d / 2;
    let per_poly = |e: u64| -> u64 {
        let small = p * (e + 1) * (e * p + 1);
        let big: u64 = ks
            .iter()
            .map(|&k| base_p_digits(k, p).len() as u64 * (e * k + 1) * (e * (p - 1) + 1))
            .sum();
        small + big
    };
    let count = |e: usize| q.saturating_pow(e as u32);
    let hi = (d - low) as u64;
    count(d - low)
        .saturating_mul(per_poly(hi))
        .saturating_add(count(low).saturating_mul(per_poly(low as u64)))
}

/// `S_d(n) = sum_{a monic, deg a = d} a^n`.
///
/// Each monic `a` of degree `d` is split as `t^L w + v` with `w` monic of
/// degree `d - L` and `deg v < L`, so that
/// `S_d(n) = sum_k C(n, k) t^(L k) (sum_w w^k) (sum_v v^(n-k))`.
pub fn power_sum(n: u64, d: usize, f: &FieldSpec) -> PolyT {
    let p = f.characteristic();
    let ks = lucas_support(n, p);
    let low = d / 2;
    let mut upper = PowerAccumulator::new(&ks, f);
    for_each_poly(d - low, true, f, |w| upper.push(w));
    let mut lower = PowerAccumulator::new(&ks, f);
    for_each_poly(low, false, f, |v| lower.push(v));
    let mut total = PolyT::zero();
    for (idx, &k) in ks.iter().enumerate() {
        let comp = ks.len() - 1 - idx;
        debug_assert_eq!(ks[comp], n - k);
        let c = f.from_int(lucas_binom(n, k as i64, p) as i64);
        let term = upper.sums[idx].mul(&lower.sums[comp], f);
        total.add_scaled_shifted(&term, c, low * k as usize, f);
    }
    total
}

/// `Z(x, -n) = sum_d S_d(n) x^d` by enumeration. Checks that `S_d(n)` vanishes
/// for `d = h+1, h+2` (and keeps going until two consecutive blocks vanish).
pub fn z_direct(n: u64, f: &FieldSpec, work_limit: u64) -> Result<XPoly> {
    let h = n / (f.order() as u64 - 1);
    let planned =
        (0..=h as usize + 2).fold(0u64, |acc, d| acc.saturating_add(power_sum_work(n, d, f)));
    if planned > work_limit {
        return Err(Error::WorkLimitExceeded {
            needed: planned,
            limit: work_limit,
        });
    }
    let mut spent = planned;
    let mut coeffs = Vec::new();
    let mut zeros = 0;
    let mut d = 0usize;
    while d <= h as usize + 2 || zeros < 2 {
        if d > h as usize + 2 {
            spent = spent.saturating_add(power_sum_work(n, d, f));
            if spent > work_limit {
                return Err(Error::WorkLimitExceeded {
                    needed: spent,
                    limit: work_limit,
                });
            }
        }
        let s = power_sum(n, d, f);
        zeros = if s.is_zero() { zeros + 1 } else { 0 };
        coeffs.push(s);
        d += 1;
    }
    Ok(XPoly::from_coeffs(coeffs))
}

/// Memo table for Goss's recursion
/// `Z(x,-n) = 1 - x sum_{i<h} C(n, i(q-1)+delta) t^(i(q-1)+delta) Z(x, -i(q-1)-delta)`
/// within one field.
#[derive(Clone, Debug)]
pub struct GossTable {
    f: FieldSpec,
    memo: HashMap<u64, XPoly>,
}

impl GossTable {
    pub fn new(f: &FieldSpec) -> Self {
        GossTable {
            f: f.clone(),
            memo: HashMap::new(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.f
    }

    pub fn z(&mut self, n: u64) -> XPoly {
        let qm1 = self.f.order() as u64 - 1;
        let delta = n % qm1;
        let mut j = delta;
        while j <= n {
            if !self.memo.contains_key(&j) {
                let z = self.step(j, delta);
                self.memo.insert(j, z);
            }
            j += qm1;
        }
        self.memo[&n].clone()
    }

    fn step(&self, n: u64, delta: u64) -> XPoly {
        let f = &self.f;
        let p = f.characteristic();
        let qm1 = f.order() as u64 - 1;
        let h = n / qm1;
        let mut sum = XPoly::zero();
        for i in 0..h {
            let j = i * qm1 + delta;
            let c = lucas_binom(n, j as i64, p);
            if c == 0 {
                continue;
            }
            let mono = PolyT::monomial(f.from_int(c as i64), j as usize);
            sum = sum.add(&self.memo[&j].mul_poly_t(&mono, f), f);
        }
        XPoly::one().sub(&sum.shift(1), f)
    }
}

/// `Z(x, -n)` by Goss's recursion.
pub fn z_goss(n: u64, f: &FieldSpec) -> XPoly {
    GossTable::new(f).z(n)
}

/// `(h_n, zeta*, zeta_C(-n))`: order of vanishing of `Z(x, -n)` at `x = 1`,
/// the leading coefficient there, and `Z(1, -n)`.
pub fn zeta_star_neg(z: &XPoly, f: &FieldSpec) -> (usize, PolyT, PolyT) {
    let (h, lead) = z.expand_at_one(f).expect("Z(x,-n) has constant term 1");
    (h, lead, z.eval(Gf::ONE, f))
}

/// `zeta_C(n) = sum_{a monic} a(theta)^(-n)` in `F_q((1/theta))`, exact above
/// `theta^floor`. Every term of degree `d` has norm exactly `q^(-n d)`, so the
/// sum stops at the first `d` with `-n d < floor`.
pub fn zeta_pos(n: u64, f: &FieldSpec, floor: i64) -> Result<LaurentTheta> {
    if n == 0 {
        return Err(Error::NonPositiveTwist);
    }
    let mut sum = LaurentTheta::zero().truncate_floor(floor);
    let mut d = 0usize;
    while -(n as i64) * (d as i64) >= floor {
        for_each_poly(d, true, f, |a| {
            let an = a.pow(n, f);
            let terms: Vec<(Gf, i64)> = an
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, i as i64))
                .collect();
            let inv = LaurentTheta::exact(&terms, f)
                .invert(floor, f)
                .expect("monic polynomials are invertible");
            sum = sum.add(&inv, f);
        });
        d += 1;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ff_make;

    /// Sum of `a^n` over an explicit list of every monic polynomial of degree `d`.
    fn naive_power_sum(n: u64, d: usize, f: &FieldSpec) -> PolyT {
        let q = f.order() as usize;
        let mut total = PolyT::zero();
        for idx in 0..q.pow(d as u32) {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                coeffs.push(Gf((rest % q) as u32));
                rest /= q;
            }
            coeffs.push(Gf::ONE);
            let mut pow = PolyT::one();
            let a = PolyT::from_coeffs(coeffs);
            for _ in 0..n {
                pow = pow.mul(&a, f);
            }
            total = total.add(&pow, f);
        }
        total
    }

    #[test]
    fn power_sum_examples() {
        let f = ff_make(3, 1).unwrap();
        for n in 0..6 {
            assert_eq!(power_sum(n, 0, &f), PolyT::one());
        }
        assert_eq!(power_sum(2, 1, &f), PolyT::constant(Gf(2)));
        assert!(power_sum(1, 1, &f).is_zero());
        assert!(power_sum(2, 2, &f).is_zero());
    }

    #[test]
    fn power_sum_matches_naive() {
        for (p, s, nmax, dmax) in [
            (2, 1, 12, 6),
            (3, 1, 10, 4),
            (2, 2, 8, 3),
            (5, 1, 9, 3),
            (3, 2, 8, 2),
        ] {
            let f = ff_make(p, s).unwrap();
            for n in 0..=nmax {
                for d in 0..=dmax {
                    assert_eq!(
                        power_sum(n, d, &f),
                        naive_power_sum(n, d, &f),
                        "p={p} s={s} n={n} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn z_examples() {
        let f = ff_make(3, 1).unwrap();
        let one_plus_2x = XPoly::from_coeffs(vec![PolyT::one(), PolyT::constant(Gf(2))]);
        assert_eq!(z_direct(0, &f, DEFAULT_WORK_LIMIT).unwrap(), XPoly::one());
        assert_eq!(z_direct(2, &f, DEFAULT_WORK_LIMIT).unwrap(), one_plus_2x);
        assert_eq!(z_direct(4, &f, DEFAULT_WORK_LIMIT).unwrap(), one_plus_2x);
        assert_eq!(z_goss(1, &f), XPoly::one());
        assert_eq!(z_goss(2, &f), one_plus_2x);
        assert_eq!(z_goss(4, &f), one_plus_2x);
    }

    #[test]
    fn direct_agrees_with_recursion() {
        for (p, s, nmax) in [(2, 1, 12), (3, 1, 14), (2, 2, 10), (5, 1, 10), (7, 1, 14)] {
            let f = ff_make(p, s).unwrap();
            let mut table = GossTable::new(&f);
            for n in 0..=nmax {
                let z = table.z(n);
                assert_eq!(
                    z_direct(n, &f, DEFAULT_WORK_LIMIT).unwrap(),
                    z,
                    "p={p} s={s} n={n}"
                );
                let h = n / (f.order() as u64 - 1);
                assert!(z.degree().unwrap() as u64 <= h);
                assert_eq!(z.coeff(0), PolyT::one());
            }
        }
    }

    #[test]
    fn work_limit_is_enforced() {
        let f = ff_make(2, 1).unwrap();
        assert!(matches!(
            z_direct(40, &f, DEFAULT_WORK_LIMIT),
            Err(Error::WorkLimitExceeded { .. })
        ));
        assert!(matches!(
            z_direct(4, &f, 10),
            Err(Error::WorkLimitExceeded { .. })
        ));
    }

    #[test]
    fn zeta_star_examples() {
        let f = ff_make(3, 1).unwrap();
        assert_eq!(
            zeta_star_neg(&z_goss(2, &f), &f),
            (1, PolyT::constant(Gf(2)), PolyT::zero())
        );
        assert_eq!(
            zeta_star_neg(&z_goss(0, &f), &f),
            (0, PolyT::one(), PolyT::one())
        );
        let z3 = z_goss(3, &f);
        assert_eq!(z3, z_direct(3, &f, DEFAULT_WORK_LIMIT).unwrap());
        let (h, lead, _) = zeta_star_neg(&z3, &f);
        assert_eq!(h, 0);
        assert!(!lead.is_zero());
        for n in 0..30 {
            let z = z_goss(n, &f);
            let (h, lead, _) = zeta_star_neg(&z, &f);
            // (1 - x)^h divides Z
            let one_minus_x = XPoly::from_coeffs(vec![PolyT::one(), PolyT::constant(Gf(2))]);
            let mut rem = z.clone();
            for _ in 0..h {
                rem = rem.div_exact(&one_minus_x, &f).expect("(x-1)^h divides Z");
            }
            assert!(!lead.is_zero());
        }
    }

    /// `1/(theta + c)` expanded as `theta^-1 sum_k (-c/theta)^k`.
    fn inverse_linear(c: Gf, floor: i64, f: &FieldSpec) -> LaurentTheta {
        let mut terms = Vec::new();
        let mut coef = Gf::ONE;
        let minus_c = f.neg(c);
        let mut d = -1;
        while d >= floor {
            terms.push((coef, d));
            coef = f.mul(coef, minus_c);
            d -= 1;
        }
        LaurentTheta::exact(&terms, f).truncate_floor(floor)
    }

    #[test]
    fn zeta_pos_first_blocks() {
        let f = ff_make(3, 1).unwrap();
        let z = zeta_pos(1, &f, -4).unwrap();
        assert_eq!(z.norm_exponent(), Some(0));
        assert_eq!(z.coeff(0), Gf::ONE);
        // blocks of degree >= 2 only reach theta^-2 and below
        let mut oracle = LaurentTheta::one().truncate_floor(-4);
        for c in f.elements() {
            oracle = oracle.add(&inverse_linear(c, -4, &f), &f);
        }
        let tail = z.sub(&oracle, &f);
        assert!(tail.norm_exponent().is_none_or(|e| e <= -2));
        let mut full = oracle;
        for d in 2..=4 {
            for_each_poly(d, true, &f, |a| {
                let terms: Vec<(Gf, i64)> = a
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, i as i64))
                    .collect();
                full = full.add(&LaurentTheta::exact(&terms, &f).invert(-4, &f).unwrap(), &f);
            });
        }
        assert!(z.sub(&full, &f).is_zero_in_window());
        for n in 1..5 {
            let z = zeta_pos(n, &f, -6 * n as i64).unwrap();
            assert!(!z.is_zero_in_window());
            assert_eq!(z.coeff(0), Gf::ONE);
        }
    }
}
