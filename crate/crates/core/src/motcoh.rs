//! Positive twists: the generator `e_n` of the extension module, its content
//! `epsilon_n` and the closed form it is compared with.

use crate::classmod::{fitting_data, pn_poly};
use crate::error::{Error, Result};
use crate::ff::{ext_field, FieldSpec, Gf};
use crate::polyring::{gcd_t, BiPoly, PolyT};
use crate::tate::{omega_pow, t_minus_theta_pow, TwistParams, Window};

/// Largest field enumerated by [`root_locus`].
pub const ROOT_BUDGET: u64 = 4096;

/// `lcm{r >= 1 : q^r - 1 | n}`.
pub fn ell_of(n: u64, q: u64) -> Result<u64> {
    let mut ell: Option<u64> = None;
    let mut qr = q;
    let mut r = 1u64;
    while qr - 1 <= n {
        if n.is_multiple_of(qr - 1) {
            ell = Some(ell.map_or(r, |l| lcm(l, r)));
        }
        r += 1;
        qr = match qr.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
    }
    ell.ok_or(Error::EmptyEllSet { n, q })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `(t^(q^ell) - t)^(p^c) = t^(q^ell p^c) - t^(p^c)`.
pub fn epsilon_formula(params: &TwistParams, f: &FieldSpec) -> Result<PolyT> {
    params.require_positive_divisible()?;
    let ell = ell_of(params.n as u64, params.q)?;
    let pc = params.p.pow(params.c.unwrap_or(0));
    let top = u32::try_from(ell)
        .ok()
        .and_then(|e| params.q.checked_pow(e))
        .and_then(|v| v.checked_mul(pc))
        .filter(|&d| d <= 1 << 28)
        .ok_or(Error::DegreeOverflow("epsilon_n"))?;
    let minus_one = f.neg(Gf::ONE);
    Ok(PolyT::monomial(Gf::ONE, top as usize).add(&PolyT::monomial(minus_one, pc as usize), f))
}

/// `(lcm{t^(q^r) - t : q^r - 1 | n})^(p^c)`: the polynomial whose roots are
/// exactly the `zeta` of degree `r` with `q^r - 1 | n`, each with
/// multiplicity `p^c`. It agrees with [`epsilon_formula`] precisely when the
/// set of such `r` is closed under lcm.
pub fn epsilon_lcm_form(params: &TwistParams, f: &FieldSpec) -> Result<PolyT> {
    params.require_positive_divisible()?;
    let n = params.n as u64;
    let q = params.q;
    let minus_one = f.neg(Gf::ONE);
    let mut acc = PolyT::one();
    let mut qr = q;
    while qr - 1 <= n {
        if n.is_multiple_of(qr - 1) {
            let b = PolyT::monomial(Gf::ONE, qr as usize).add(&PolyT::monomial(minus_one, 1), f);
            let g = gcd_t(&acc, &b, f)?;
            acc = acc.mul(&b.div_rem(&g, f)?.0, f);
        }
        qr = match qr.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(acc.pow(params.p.pow(params.c.unwrap_or(0)), f))
}

/// `g_n`: the `F[theta, t]` part of `omega^n`, using the exact window
/// `T = m`, `floor = 0` (every term `t^k` with `k > m` has negative
/// `theta`-degree).
pub fn gn_compute(params: &TwistParams, f: &FieldSpec) -> Result<BiPoly> {
    let m = params.require_positive_divisible()?;
    gn_compute_in(params, Window::new(m as usize, 0), f)
}

/// [`gn_compute`] in a caller-chosen window, which must contain `T = m`,
/// `floor = 0`.
pub fn gn_compute_in(params: &TwistParams, w: Window, f: &FieldSpec) -> Result<BiPoly> {
    let m = params.require_positive_divisible()?;
    if (w.t_prec as u64) < m || w.floor > 0 {
        return Err(Error::PrecisionInsufficient(format!(
            "g_n needs T >= {m} and floor <= 0, got {w}"
        )));
    }
    let (poly, _) = omega_pow(params, w, f)?.decompose()?;
    Ok(BiPoly::from_rows(
        poly.rows()
            .iter()
            .map(|r| truncate_t(r, m as usize))
            .collect(),
    ))
}

fn truncate_t(p: &PolyT, max_deg: usize) -> PolyT {
    PolyT::from_coeffs(p.coeffs().iter().take(max_deg + 1).copied().collect())
}

/// `e_n = (t - theta)^n g_n - g_n^(1)`.
pub fn en_compute(params: &TwistParams, f: &FieldSpec) -> Result<BiPoly> {
    let g = gn_compute(params, f)?;
    Ok(en_from_gn(&g, params.n as u64, f))
}

pub fn en_from_gn(g: &BiPoly, n: u64, f: &FieldSpec) -> BiPoly {
    t_minus_theta_pow(n, f).mul(g, f).sub(&g.twist(1, f), f)
}

/// Monic content of `e_n` in `F[t]`.
pub fn epsilon_computed(params: &TwistParams, f: &FieldSpec) -> Result<PolyT> {
    en_compute(params, f)?.content_t(f)
}

/// [`epsilon_computed`] with `g_n` taken in `window` when one is given.
pub fn epsilon_computed_in(
    params: &TwistParams,
    window: Option<Window>,
    f: &FieldSpec,
) -> Result<PolyT> {
    let g = match window {
        Some(w) => gn_compute_in(params, w, f)?,
        None => gn_compute(params, f)?,
    };
    en_from_gn(&g, params.n as u64, f).content_t(f)
}

/// `p`-th root of a polynomial that is a `p`-th power, if it is one.
fn pth_root(a: &PolyT, f: &FieldSpec) -> Option<PolyT> {
    let p = f.characteristic() as usize;
    let s = f.degree();
    let mut coeffs = Vec::new();
    for (k, &c) in a.coeffs().iter().enumerate() {
        if k % p == 0 {
            coeffs.push(f.frobenius_iter(c, s - 1));
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(PolyT::from_coeffs(coeffs))
}

/// Writes `eps = r^(p^c)` with `c` maximal; returns `(r, c)`.
pub fn power_decomposition(eps: &PolyT, f: &FieldSpec) -> (PolyT, u32) {
    let mut r = eps.clone();
    let mut c = 0;
    while r.degree().is_some_and(|d| d > 0) {
        match pth_root(&r, f) {
            Some(root) => {
                r = root;
                c += 1;
            }
            None => break,
        }
    }
    (r, c)
}

/// `gcd(r, r') = 1` for the `p^c`-th root `r` of `eps`.
pub fn roots_simple(eps: &PolyT, f: &FieldSpec) -> Result<bool> {
    let (r, _) = power_decomposition(eps, f);
    Ok(gcd_t(&r, &r.derivative(f), f)?.is_one())
}

/// One row of [`root_locus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootRow {
    pub r: u32,
    /// `q^r - 1 | n`.
    pub divides: bool,
    /// Zeros of `epsilon_n` in `F_{q^r}`.
    pub n_roots: usize,
    /// For every `zeta` in `F_{q^r}`, of exact degree `d` over `F_q`:
    /// `epsilon_n(zeta) = 0` iff `q^d - 1 | n`.
    pub consistent: bool,
    /// The `p^c`-th root of `epsilon_n` has nonzero derivative at each of
    /// those zeros.
    pub all_simple: bool,
}

/// Evaluates `epsilon_n` (equivalently every `theta`-coefficient of `e_n`) at
/// every element of `F_{q^r}`, `r = 1..=r_max`.
pub fn root_locus(params: &TwistParams, f: &FieldSpec, r_max: u32) -> Result<Vec<RootRow>> {
    let eps = epsilon_computed(params, f)?;
    let (root, _) = power_decomposition(&eps, f);
    let droot = root.derivative(f);
    let n = params.n as u64;
    let q = params.q;
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let size =
            q.checked_pow(r)
                .filter(|&s| s <= ROOT_BUDGET)
                .ok_or(Error::EnumerationBudget {
                    what: "root locus",
                    size: q.saturating_pow(r),
                    limit: ROOT_BUDGET,
                })?;
        let (ext, embed) = ext_field(f, r)?;
        let mut n_roots = 0;
        let mut consistent = true;
        let mut all_simple = true;
        for zeta in ext.elements() {
            let vanishes = eps.eval_in(zeta, &ext, &embed).is_zero();
            let d = degree_over_base(zeta, &ext, q);
            if vanishes != n.is_multiple_of(q.pow(d) - 1) {
                consistent = false;
            }
            if vanishes {
                n_roots += 1;
                if droot.eval_in(zeta, &ext, &embed).is_zero() {
                    all_simple = false;
                }
            }
        }
        rows.push(RootRow {
            r,
            divides: n.is_multiple_of(size - 1),
            n_roots,
            consistent,
            all_simple,
        });
    }
    Ok(rows)
}

/// Smallest `d >= 1` with `zeta^(q^d) = zeta`.
fn degree_over_base(zeta: Gf, ext: &FieldSpec, q: u64) -> u32 {
    let mut d = 1;
    let mut z = ext.pow(zeta, q);
    while z != zeta {
        z = ext.pow(z, q);
        d += 1;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtCase {
    Trivial,
    Free,
    FreePlusTorsion,
}

impl ExtCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtCase::Trivial => "trivial",
            ExtCase::Free => "free",
            ExtCase::FreePlusTorsion => "free_plus_torsion",
        }
    }
}

/// Shape of the extension module of `1` by `A(n)` and the rank of the class
/// module of `A(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtStructure {
    pub n: i64,
    pub case: ExtCase,
    pub rank: u64,
    pub epsilon_computed: Option<PolyT>,
    pub epsilon_formula: Option<PolyT>,
    pub matches: Option<bool>,
    /// `0` for `n >= 0`; for `n < 0` the order of `P_{-n}` at `x = 1`.
    pub class_rank: usize,
}

pub fn ext_structure(n: i64, f: &FieldSpec) -> Result<ExtStructure> {
    let q = f.order() as i64;
    let mut out = ExtStructure {
        n,
        case: ExtCase::Trivial,
        rank: 0,
        epsilon_computed: None,
        epsilon_formula: None,
        matches: None,
        class_rank: 0,
    };
    if n <= 0 {
        if n < 0 {
            let params = TwistParams::new(-n, f);
            out.class_rank = fitting_data(&pn_poly(&params, f), f).0;
        }
        return Ok(out);
    }
    if n % (q - 1) != 0 {
        out.case = ExtCase::Free;
        out.rank = n as u64;
        return Ok(out);
    }
    let params = TwistParams::new(n, f);
    let computed = epsilon_computed(&params, f)?;
    let formula = epsilon_formula(&params, f)?;
    out.case = ExtCase::FreePlusTorsion;
    out.rank = n as u64 - 1;
    out.matches = Some(computed == formula);
    out.epsilon_computed = Some(computed);
    out.epsilon_formula = Some(formula);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ff_make;
    use crate::tate::{xi_series, TateSeries};

    fn tp(coeffs: &[i64], f: &FieldSpec) -> PolyT {
        PolyT::from_ints(coeffs, f)
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell_of(2, 3), Ok(1));
        assert_eq!(ell_of(6, 2), Ok(2));
        assert_eq!(ell_of(1, 2), Ok(1));
        assert_eq!(ell_of(3, 3), Err(Error::EmptyEllSet { n: 3, q: 3 }));
        assert_eq!(ell_of(21, 2), Ok(6)); // r = 1, 2, 3
    }

    #[test]
    fn epsilon_formula_examples() {
        let f3 = ff_make(3, 1).unwrap();
        let f2 = ff_make(2, 1).unwrap();
        assert_eq!(
            epsilon_formula(&TwistParams::new(2, &f3), &f3).unwrap(),
            tp(&[0, 2, 0, 1], &f3)
        );
        assert_eq!(
            epsilon_formula(&TwistParams::new(6, &f2), &f2).unwrap(),
            tp(&[0, 0, 1, 0, 0, 0, 0, 0, 1], &f2)
        );
        assert_eq!(
            epsilon_formula(&TwistParams::new(1, &f2), &f2).unwrap(),
            tp(&[0, 1, 1], &f2)
        );
        assert!(matches!(
            epsilon_formula(&TwistParams::new(3, &f3), &f3),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn gn_and_en_example() {
        let f = ff_make(3, 1).unwrap();
        let params = TwistParams::new(2, &f);
        let g = gn_compute(&params, &f).unwrap();
        assert_eq!(g, BiPoly::from_terms(&[(2, 1, 0), (1, 0, 1)], &f));
        let e = en_compute(&params, &f).unwrap();
        assert_eq!(e, BiPoly::from_poly_t(tp(&[0, 2, 0, 1], &f)));
        assert_eq!(
            epsilon_computed(&params, &f).unwrap(),
            tp(&[0, 2, 0, 1], &f)
        );
    }

    #[test]
    fn gn_window_override_checked() {
        let f = ff_make(3, 1).unwrap();
        let params = TwistParams::new(4, &f);
        assert!(gn_compute_in(&params, Window::new(1, 0), &f).is_err());
        assert!(gn_compute_in(&params, Window::new(2, 1), &f).is_err());
        assert_eq!(
            gn_compute_in(&params, Window::new(6, -20), &f).unwrap(),
            gn_compute(&params, &f).unwrap()
        );
    }

    #[test]
    fn gn_shape_and_frobenius() {
        for (p, s) in [(2, 1), (3, 1), (2, 2)] {
            let f = ff_make(p, s).unwrap();
            let q = f.order() as i64;
            for n in (q - 1..=18).step_by((q - 1) as usize) {
                let params = TwistParams::new(n, &f);
                let m = params.m.unwrap() as usize;
                let g = gn_compute(&params, &f).unwrap();
                assert_eq!(g.deg_theta(), Some(m), "q={q} n={n}");
                assert!(g.deg_t().unwrap() <= m);
                let e = en_compute(&params, &f).unwrap();
                assert!(e.deg_theta().unwrap() < n as usize, "q={q} n={n}");
                if n * p as i64 <= 36 {
                    let gp = gn_compute(&TwistParams::new(n * p as i64, &f), &f).unwrap();
                    assert_eq!(gp, g.pow(p, &f), "q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn gn_close_to_omega() {
        let f = ff_make(3, 1).unwrap();
        for n in [2, 4, 6, 8] {
            let params = TwistParams::new(n, &f);
            let w = params.default_window();
            let om = omega_pow(&params, w, &f).unwrap();
            let g = gn_compute(&params, &f).unwrap();
            let diff = TateSeries::from_bipoly(&g).sub(&om, &f);
            assert!(diff.norm_exponent().is_none_or(|e| e < 0));
            // xi_{e_n} = g_n - omega^n
            let e = en_compute(&params, &f).unwrap();
            let xi = xi_series(&e, n as u64, w, &f).unwrap();
            assert!(xi.sub(&diff, &f).truncate(w).is_zero_in_window(), "n={n}");
        }
    }

    fn lcm_closed(n: u64, q: u64) -> bool {
        let rs: Vec<u32> = (1..)
            .take_while(|&r| q.pow(r) - 1 <= n)
            .filter(|&r| n.is_multiple_of(q.pow(r) - 1))
            .collect();
        rs.iter().all(|&a| {
            rs.iter()
                .all(|&b| rs.contains(&(lcm(a as u64, b as u64) as u32)))
        })
    }

    #[test]
    fn epsilon_matches_lcm_form() {
        for (p, s, nmax) in [(2, 1, 45), (3, 1, 30), (2, 2, 30), (5, 1, 32)] {
            let f = ff_make(p, s).unwrap();
            let q = f.order() as i64;
            for n in (q - 1..=nmax).step_by((q - 1) as usize) {
                let params = TwistParams::new(n, &f);
                let computed = epsilon_computed(&params, &f).unwrap();
                assert_eq!(
                    computed,
                    epsilon_lcm_form(&params, &f).unwrap(),
                    "q={q} n={n}"
                );
                let closed = lcm_closed(n as u64, q as u64);
                assert_eq!(
                    computed == epsilon_formula(&params, &f).unwrap(),
                    closed,
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn lcm_form_example() {
        // r in {1, 2, 3} but not 6: roots are F_4 and F_8, 10 in all
        let f = ff_make(2, 1).unwrap();
        let params = TwistParams::new(21, &f);
        let e = epsilon_lcm_form(&params, &f).unwrap();
        assert_eq!(e.degree(), Some(10));
        assert_eq!(epsilon_formula(&params, &f).unwrap().degree(), Some(64));
        let rows = root_locus(&params, &f, 6).unwrap();
        assert!(rows.iter().all(|r| r.consistent && r.all_simple));
        assert_eq!(
            rows.iter().map(|r| r.n_roots).collect::<Vec<_>>(),
            [2, 4, 8, 4, 2, 10]
        );
    }

    #[test]
    fn epsilon_frobenius() {
        let f = ff_make(2, 1).unwrap();
        for n in 1..=8 {
            let e = epsilon_computed(&TwistParams::new(n, &f), &f).unwrap();
            let e2 = epsilon_computed(&TwistParams::new(2 * n, &f), &f).unwrap();
            assert_eq!(e2, e.pow(2, &f), "n={n}");
        }
    }

    #[test]
    fn power_decomposition_examples() {
        let f = ff_make(2, 1).unwrap();
        let eps = tp(&[0, 0, 1, 0, 0, 0, 0, 0, 1], &f);
        assert_eq!(power_decomposition(&eps, &f), (tp(&[0, 1, 0, 0, 1], &f), 1));
        assert!(roots_simple(&eps, &f).unwrap());
        let f4 = ff_make(2, 2).unwrap();
        let a = tp(&[0, 1, 1], &f4).map_coeffs(|c| if c.is_zero() { c } else { f4.generator() });
        let (r, c) = power_decomposition(&a.pow(4, &f4), &f4);
        assert_eq!((r, c), (a, 2));
    }

    #[test]
    fn root_locus_examples() {
        let f3 = ff_make(3, 1).unwrap();
        let rows = root_locus(&TwistParams::new(2, &f3), &f3, 2).unwrap();
        assert_eq!(
            rows[0],
            RootRow {
                r: 1,
                divides: true,
                n_roots: 3,
                consistent: true,
                all_simple: true
            }
        );
        assert_eq!(
            rows[1],
            RootRow {
                r: 2,
                divides: false,
                n_roots: 3,
                consistent: true,
                all_simple: true
            }
        );
        let f2 = ff_make(2, 1).unwrap();
        let rows = root_locus(&TwistParams::new(6, &f2), &f2, 3).unwrap();
        assert!(rows.iter().all(|r| r.consistent && r.all_simple));
        assert_eq!(rows[2].n_roots, 2);
        assert_eq!(rows[1].n_roots, 4);
        assert!(matches!(
            root_locus(&TwistParams::new(2, &f3), &f3, 9),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn ext_structure_examples() {
        let f = ff_make(3, 1).unwrap();
        let e = ext_structure(2, &f).unwrap();
        assert_eq!(e.case, ExtCase::FreePlusTorsion);
        assert_eq!(e.rank, 1);
        assert_eq!(e.epsilon_computed, Some(tp(&[0, 2, 0, 1], &f)));
        assert_eq!(e.matches, Some(true));
        let e = ext_structure(3, &f).unwrap();
        assert_eq!((e.case, e.rank), (ExtCase::Free, 3));
        let e = ext_structure(-5, &f).unwrap();
        assert_eq!((e.case, e.rank), (ExtCase::Trivial, 0));
        assert_eq!(ext_structure(-4, &f).unwrap().class_rank, 1);
        assert_eq!(ext_structure(-5, &f).unwrap().class_rank, 0);
    }
}
