//! Finite fields `F_q = F_{p^s}` with table-driven arithmetic.
//!
//! Elements are stored as their integer encoding `sum c_i p^i`, where
//! `(c_0, ..., c_{s-1})` are the coordinates in the power basis of the
//! generator `u` of the modulus. Enumeration order is ascending encoding,
//! i.e. lexicographic on the coordinates read from `c_{s-1}` down to `c_0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// Add tables are only materialized for fields at most this large.
const ADD_TABLE_LIMIT: u32 = 729;

/// An element of a finite field, meaningful only together with its [`FieldSpec`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[k] = g^k` for `k < 2(q-1)`, `g` the first primitive element.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// Description of `F_{p^s}` together with its arithmetic tables.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.modulus == other.t.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.t.p)
            .field("s", &self.t.s)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense F_p[x] helpers used while building tables. Little-endian, untrimmed.

fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m` over F_p.
fn fp_frobenius_power(m: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut cur = fp_rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1u32];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Irreducibility of a monic `m` of degree `s` over F_p: `gcd(m, x^(p^i) - x) = 1`
/// for all `1 <= i <= s/2`.
fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let s = (m.len() - 1) as u32;
    if s == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    for i in 1..=s / 2 {
        let mut f = fp_frobenius_power(m, p, i);
        if f.len() < 2 {
            f.resize(2, 0);
        }
        f[1] = (f[1] + p - 1) % p;
        let g = fp_gcd(m, &f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `s`, coefficients
/// compared from the constant term upward. For `s = 1` this is `x`.
fn canonical_modulus(p: u32, s: u32) -> Vec<u32> {
    let count = (p as u64).pow(s);
    for idx in 0..count {
        // c_0 is the most significant digit of idx
        let mut coeffs = vec![0u32; s as usize + 1];
        let mut rest = idx;
        for i in (0..s as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[s as usize] = 1;
        if fp_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn encode(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut x: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        out.push(x % p);
        x /= p;
    }
    out
}

/// Builds `F_{p^s}` with the canonical modulus.
pub fn ff_make(p: u64, s: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::ZeroDegree);
    }
    match p.checked_pow(s) {
        Some(q) if q <= MAX_FIELD_ORDER => {}
        _ => return Err(Error::FieldTooLarge { p, s }),
    }
    let p = p as u32;
    let modulus = canonical_modulus(p, s);
    Ok(FieldSpec::with_modulus(p, s, modulus))
}

impl FieldSpec {
    fn with_modulus(p: u32, s: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(s);
        let mulmod = |a: u32, b: u32| -> u32 {
            let r = fp_mulmod(&decode(a, p, s), &decode(b, p, s), &modulus, p);
            encode(&r, p)
        };

        let (exp, log) = if q == 2 {
            (vec![1, 1], vec![0, 0])
        } else {
            let order = q - 1;
            let mut found = None;
            for g in 2..q {
                let mut powers = Vec::with_capacity(order as usize);
                let mut x = 1u32;
                let mut ok = true;
                for k in 0..order {
                    if k > 0 && x == 1 {
                        ok = false;
                        break;
                    }
                    powers.push(x);
                    x = mulmod(x, g);
                }
                if ok && x == 1 {
                    found = Some(powers);
                    break;
                }
            }
            let powers = found.expect("multiplicative group is cyclic");
            let mut log = vec![0u32; q as usize];
            for (k, &x) in powers.iter().enumerate() {
                log[x as usize] = k as u32;
            }
            let mut exp = powers.clone();
            exp.extend_from_slice(&powers);
            (exp, log)
        };

        let neg = (0..q)
            .map(|x| {
                let c: Vec<u32> = decode(x, p, s).into_iter().map(|c| (p - c) % p).collect();
                encode(&c, p)
            })
            .collect();

        let add = if p != 2 && s > 1 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let ca = decode(a, p, s);
                for b in 0..q {
                    let cb = decode(b, p, s);
                    let c: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                    table[(a * q + b) as usize] = encode(&c, p);
                }
            }
            Some(table)
        } else {
            None
        };

        FieldSpec {
            t: Arc::new(Tables {
                p,
                s,
                q,
                modulus,
                exp,
                log,
                neg,
                add,
            }),
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.t.s
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.t.q
    }

    /// Monic modulus, little-endian coefficients in `[0, p)`.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.t.s == 1
    }

    pub fn coords(&self, a: Gf) -> Vec<u32> {
        decode(a.0, self.t.p, self.t.s)
    }

    /// Element with the given power-basis coordinates (missing ones are zero).
    pub fn from_coords(&self, coords: &[u32]) -> Gf {
        assert!(coords.len() <= self.t.s as usize);
        let reduced: Vec<u32> = coords.iter().map(|&c| c % self.t.p).collect();
        Gf(encode(&reduced, self.t.p))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Gf {
        Gf(k.rem_euclid(self.t.p as i64) as u32)
    }

    /// The generator `u` of the power basis (equal to 0 in a prime field).
    pub fn generator(&self) -> Gf {
        if self.t.s == 1 {
            Gf::ZERO
        } else {
            Gf(self.t.p)
        }
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.t.q).map(Gf)
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        let t = &*self.t;
        if t.s == 1 {
            let r = a.0 + b.0;
            Gf(if r >= t.p { r - t.p } else { r })
        } else if t.p == 2 {
            Gf(a.0 ^ b.0)
        } else if let Some(table) = &t.add {
            Gf(table[(a.0 * t.q + b.0) as usize])
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0;
            let mut scale = 1;
            for _ in 0..t.s {
                out += ((x % t.p + y % t.p) % t.p) * scale;
                x /= t.p;
                y /= t.p;
                scale *= t.p;
            }
            Gf(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        Gf(self.t.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        let t = &*self.t;
        Gf(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Gf) -> Option<Gf> {
        if a.is_zero() {
            return None;
        }
        let t = &*self.t;
        let order = t.q - 1;
        Some(Gf(t.exp[((order - t.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Option<Gf> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let t = &*self.t;
        let order = (t.q - 1) as u64;
        let k = (t.log[a.0 as usize] as u64 * (e % order)) % order;
        Gf(t.exp[k as usize])
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Gf) -> Gf {
        self.pow(a, self.t.p as u64)
    }

    /// `x -> x^(p^k)`, the `k`-fold absolute Frobenius.
    pub fn frobenius_iter(&self, a: Gf, k: u32) -> Gf {
        let e = (self.t.p as u64).pow(k % self.t.s);
        self.pow(a, e)
    }

    /// Scalar multiple by a natural number.
    pub fn mul_int(&self, a: Gf, k: u64) -> Gf {
        self.mul(a, self.from_int((k % self.t.p as u64) as i64))
    }

    /// Text form: a polynomial in `u`, e.g. `u+1` or `2*u^2+1`; prime-field
    /// elements print as bare digits.
    pub fn format(&self, a: Gf) -> String {
        if self.t.s == 1 {
            return a.0.to_string();
        }
        let coords = self.coords(a);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Ring embedding of a base field into an extension of it.
#[derive(Clone, Debug)]
pub struct Embedding {
    table: Vec<Gf>,
}

impl Embedding {
    #[inline]
    pub fn apply(&self, x: Gf) -> Gf {
        self.table[x.0 as usize]
    }
}

/// Realizes `F_{q^r}` as `F_{p^(s r)}` over the prime field, mapping the base
/// generator to the smallest root of the base modulus.
pub fn ext_field(base: &FieldSpec, r: u32) -> Result<(FieldSpec, Embedding)> {
    if r == 0 {
        return Err(Error::ZeroDegree);
    }
    let p = base.characteristic();
    let ext = ff_make(p as u64, base.degree() * r)?;
    let m = base.modulus();
    let root = if base.degree() == 1 {
        Gf::ZERO
    } else {
        ext.elements()
            .find(|&z| {
                let mut acc = Gf::ZERO;
                for &c in m.iter().rev() {
                    acc = ext.add(ext.mul(acc, z), ext.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("the base modulus splits in the extension")
    };
    let mut root_powers = Vec::with_capacity(base.degree() as usize);
    let mut x = Gf::ONE;
    for _ in 0..base.degree() {
        root_powers.push(x);
        x = ext.mul(x, root);
    }
    let table = base
        .elements()
        .map(|a| {
            base.coords(a)
                .iter()
                .zip(&root_powers)
                .fold(Gf::ZERO, |acc, (&c, &rp)| {
                    ext.add(acc, ext.mul_int(rp, c as u64))
                })
        })
        .collect();
    Ok((ext, Embedding { table }))
}

/// Ordered list of all elements.
pub fn enumerate(spec: &FieldSpec) -> Vec<Gf> {
    spec.elements().collect()
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * fp_inv(den as u32, p as u32) as u64 % p
}

/// `C(n, k) mod p` by Lucas' theorem; zero when `k < 0` or `k > n`.
pub fn lucas_binom(n: u64, k: i64, p: u32) -> u32 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let p = p as u64;
    let (mut n, mut k) = (n, k as u64);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom_mod(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_irreducible_brute(m: &[u32], p: u32) -> bool {
        // no monic factor of degree 1..=deg/2
        let d = m.len() - 1;
        for fd in 1..=d / 2 {
            for idx in 0..(p as u64).pow(fd as u32) {
                let mut f = decode(idx as u32, p, fd as u32);
                f.push(1);
                if fp_rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_uses_modulus_x() {
        let f = ff_make(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f4_modulus_is_the_unique_irreducible_quadratic() {
        let f = ff_make(2, 2).unwrap();
        let irreducible: Vec<Vec<u32>> = (0..4u32)
            .map(|i| vec![i & 1, i >> 1, 1])
            .filter(|m| is_irreducible_brute(m, 2))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn canonical_modulus_is_lex_smallest_irreducible() {
        for (p, s) in [(2u32, 3u32), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = ff_make(p as u64, s).unwrap();
            let mut best = None;
            for idx in 0..p.pow(s) {
                let mut m: Vec<u32> = (0..s).map(|i| (idx / p.pow(s - 1 - i)) % p).collect();
                m.push(1);
                if is_irreducible_brute(&m, p) {
                    best = Some(m);
                    break;
                }
            }
            assert_eq!(f.modulus(), best.unwrap().as_slice(), "p={p} s={s}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(ff_make(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(ff_make(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(ff_make(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(ff_make(2, 40), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn enumeration_is_ordered_and_distinct() {
        assert_eq!(enumerate(&ff_make(2, 1).unwrap()), vec![Gf(0), Gf(1)]);
        assert_eq!(
            enumerate(&ff_make(3, 1).unwrap()),
            vec![Gf(0), Gf(1), Gf(2)]
        );
        let f4 = ff_make(2, 2).unwrap();
        let elems = enumerate(&f4);
        assert_eq!(elems.len(), 4);
        let mut sorted = elems.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, s) in [(2u64, 1u32), (2, 2), (3, 2), (5, 1), (2, 3)] {
            let f = ff_make(p, s).unwrap();
            let el: Vec<Gf> = f.elements().collect();
            for &a in &el {
                assert_eq!(f.add(a, f.neg(a)), Gf::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
                }
                for &b in &el {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &el {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_polynomial_reduction() {
        let f = ff_make(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(5) {
                let expect = fp_mulmod(&f.coords(a), &f.coords(b), f.modulus(), 3);
                assert_eq!(f.coords(f.mul(a, b)), {
                    let mut e = expect.clone();
                    e.resize(3, 0);
                    e
                });
            }
        }
    }

    #[test]
    fn every_element_satisfies_x_pow_order() {
        for (p, s) in [(2u64, 12u32), (3, 7), (5, 5), (7, 4), (2, 1), (3, 1)] {
            let f = ff_make(p, s).unwrap();
            let q = f.order() as u64;
            assert!(q <= 4096);
            for a in f.elements() {
                // square-and-multiply independent of the log tables' reduction mod q-1
                let mut acc = Gf::ONE;
                let mut base = a;
                let mut e = q;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = f.mul(acc, base);
                    }
                    base = f.mul(base, base);
                    e >>= 1;
                }
                assert_eq!(acc, a);
            }
        }
    }

    #[test]
    fn embeddings_are_ring_homomorphisms() {
        for (p, s, r) in [
            (3u64, 1u32, 1u32),
            (2, 1, 2),
            (2, 2, 2),
            (3, 2, 2),
            (2, 2, 3),
            (5, 1, 2),
        ] {
            let base = ff_make(p, s).unwrap();
            let (ext, emb) = ext_field(&base, r).unwrap();
            assert_eq!(ext.order(), base.order().pow(r));
            let qr = ext.order() as u64;
            for a in base.elements() {
                let ea = emb.apply(a);
                assert_eq!(ext.pow(ea, qr), ea);
                // image lies in the subfield F_q of the extension
                assert_eq!(ext.pow(ea, base.order() as u64), ea);
                for b in base.elements() {
                    assert_eq!(emb.apply(base.add(a, b)), ext.add(ea, emb.apply(b)));
                    assert_eq!(emb.apply(base.mul(a, b)), ext.mul(ea, emb.apply(b)));
                }
            }
        }
    }

    #[test]
    fn trivial_embeddings() {
        let f3 = ff_make(3, 1).unwrap();
        let (e, emb) = ext_field(&f3, 1).unwrap();
        assert_eq!(e, f3);
        for a in f3.elements() {
            assert_eq!(emb.apply(a), a);
        }
        let f2 = ff_make(2, 1).unwrap();
        let (e4, emb) = ext_field(&f2, 2).unwrap();
        assert_eq!(e4.order(), 4);
        assert_eq!(emb.apply(Gf(0)), Gf(0));
        assert_eq!(emb.apply(Gf(1)), Gf(1));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(2, 0, 3), 1);
        assert_eq!(lucas_binom(2, 5, 3), 0);
        assert_eq!(lucas_binom(7, 3, 2), 1);
        assert_eq!(lucas_binom(2, 1, 2), 0);
        assert_eq!(lucas_binom(5, -1, 5), 0);
    }

    #[test]
    fn lucas_matches_pascal_triangle() {
        for p in [2u32, 3, 5, 7] {
            let mut row = vec![1u32];
            for n in 0..=30u64 {
                for k in -2..=(n as i64 + 2) {
                    let expect = if k < 0 || k as u64 > n {
                        0
                    } else {
                        row[k as usize]
                    };
                    assert_eq!(lucas_binom(n, k, p), expect, "C({n},{k}) mod {p}");
                }
                let mut next = vec![1u32; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = (row[i - 1] + row[i]) % p;
                }
                row = next;
            }
        }
    }

    #[test]
    fn element_text_form() {
        let f4 = ff_make(2, 2).unwrap();
        assert_eq!(f4.format(Gf(3)), "u+1");
        assert_eq!(f4.format(Gf(2)), "u");
        assert_eq!(f4.format(Gf(0)), "0");
        let f9 = ff_make(3, 2).unwrap();
        assert_eq!(f9.format(f9.from_coords(&[1, 2])), "2*u+1");
        let f3 = ff_make(3, 1).unwrap();
        assert_eq!(f3.format(Gf(2)), "2");
    }
}
