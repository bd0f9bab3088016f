//! The class-module side of negative twists: the matrix `M_n`, the
//! polynomial `P_n(x) = det(1 - x M_n)`, its expansion at `x = 1`, and an
//! independent computation of the same matrix from the Tate-algebra
//! operator `gamma`.

use crate::error::{Error, Result};
use crate::ff::{lucas_binom, FieldSpec, Gf};
use crate::polyring::{PolyT, XPoly};
use crate::tate::{beta, nu, TateSeries, TwistParams, Window};

/// A square matrix over `F_q[t]`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<PolyT>,
}

impl PolyMatrix {
    pub fn zero(dim: usize) -> Self {
        PolyMatrix {
            dim,
            entries: vec![PolyT::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<PolyT>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        PolyMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyT {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PolyT) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn to_text(&self, f: &FieldSpec) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_text(f)).collect())
            .collect()
    }
}

/// `M_n = (C(n, iq - j + delta) t^(iq - j + delta))_{0 <= i, j < h}`.
pub fn mn_matrix(params: &TwistParams, f: &FieldSpec) -> PolyMatrix {
    let h = params.h.max(0) as usize;
    let q = params.q as i64;
    let p = f.characteristic();
    let mut m = PolyMatrix::zero(h);
    if params.n < 0 {
        return m;
    }
    for i in 0..h {
        for j in 0..h {
            let e = i as i64 * q - j as i64 + params.delta as i64;
            if e < 0 || e > params.n {
                continue;
            }
            let c = lucas_binom(params.n as u64, e, p);
            if c != 0 {
                m.set(i, j, PolyT::monomial(f.from_int(c as i64), e as usize));
            }
        }
    }
    m
}

/// `1 - x M` restricted to the index set `idx`.
fn one_minus_x(m: &PolyMatrix, idx: &[usize], f: &FieldSpec) -> Vec<Vec<XPoly>> {
    idx.iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| {
                    let lin = XPoly::monomial(m.get(i, j).neg(f), 1);
                    if i == j {
                        lin.add(&XPoly::one(), f)
                    } else {
                        lin
                    }
                })
                .collect()
        })
        .collect()
}

/// Fraction-free elimination. The leading principal minors of `1 - x M`
/// have constant term 1, so no pivoting is needed and every division is an
/// exact division by a polynomial with unit constant term.
fn bareiss(mut a: Vec<Vec<XPoly>>, f: &FieldSpec) -> XPoly {
    let n = a.len();
    if n == 0 {
        return XPoly::one();
    }
    let mut prev = XPoly::one();
    for k in 0..n - 1 {
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let aik = a[i][k].clone();
            for j in k + 1..n {
                let mut v = pivot.mul(&a[i][j], f);
                if !aik.is_zero() && !a[k][j].is_zero() {
                    v = v.sub(&aik.mul(&a[k][j], f), f);
                }
                a[i][j] = if prev == XPoly::one() {
                    v
                } else {
                    v.div_exact(&prev, f).expect("Bareiss divisions are exact")
                };
            }
        }
        prev = pivot;
    }
    a[n - 1][n - 1].clone()
}

/// Laplace expansion along the first row.
fn cofactor(a: &[Vec<XPoly>], f: &FieldSpec) -> XPoly {
    let n = a.len();
    match n {
        0 => XPoly::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut total = XPoly::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<XPoly>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][j].mul(&cofactor(&minor, f), f);
                total = if j % 2 == 0 {
                    total.add(&term, f)
                } else {
                    total.sub(&term, f)
                };
            }
            total
        }
    }
}

/// Strongly connected components of the graph `i -> j` for `M[i][j] != 0`.
fn components(m: &PolyMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !m.get(i, j).is_zero()).collect())
        .collect();
    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = work.last_mut() {
            if *next == 0 && index[v] == usize::MAX {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(u, _)) = work.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Which elimination to use for each diagonal block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    /// Bareiss for blocks larger than 4, cofactor expansion otherwise.
    Auto,
    Bareiss,
    Cofactor,
}

/// `det(1 - x M)` over `F_q[t][x]`. After a simultaneous permutation of rows
/// and columns, `M` is block triangular with the strongly connected
/// components of its sparsity graph as diagonal blocks, so the determinant is
/// the product of the blockwise determinants.
pub fn det_one_minus_x(m: &PolyMatrix, method: DetMethod, f: &FieldSpec) -> XPoly {
    let mut total = XPoly::one();
    for comp in components(m) {
        if comp.len() == 1 && m.get(comp[0], comp[0]).is_zero() {
            continue;
        }
        let block = one_minus_x(m, &comp, f);
        let det = match method {
            DetMethod::Cofactor => cofactor(&block, f),
            DetMethod::Bareiss => bareiss(block, f),
            DetMethod::Auto if comp.len() <= 4 => cofactor(&block, f),
            DetMethod::Auto => bareiss(block, f),
        };
        total = total.mul(&det, f);
    }
    total
}

/// `P_n(x) = det(1 - x M_n)`, computed by [`pn_poly_reduced`].
pub fn pn_poly(params: &TwistParams, f: &FieldSpec) -> XPoly {
    pn_poly_reduced(params, f)
}

/// `det(1 - x M_n)` by elimination on the full `h x h` matrix.
pub fn pn_poly_direct(params: &TwistParams, f: &FieldSpec) -> XPoly {
    det_one_minus_x(&mn_matrix(params, f), DetMethod::Auto, f)
}

// The operator behind M_n.
//
// For G in F_q[t][u] let Psi_G send f to the polynomial whose u^i coefficient
// is the u^(iq + delta) coefficient of G f. On polynomials of degree < h,
// Psi_G for G = (1 + t u)^n has matrix M_n. Psi_G maps V_K (degree < K) into
// itself once K (q-1) >= deg G - delta, and for G = L(u) A(u^q) it factors as
// Psi_G = A(u) * Psi_L. With Psi_L : V_K -> V_m and A(u) : V_m -> V_K,
// det(1 - x A Psi_L | V_K) = det(1 - x Psi_L A | V_m) = det(1 - x Psi_{L A(u)} | V_m),
// and the base-q digits of n supply such a factorization at every step.

/// Matrix of `Psi_G` on `V_k`.
fn psi_matrix(g: &XPoly, k: usize, q: usize, delta: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zero(k);
    for i in 0..k {
        for j in 0..k {
            if i * q + delta >= j {
                let c = g.coeff(i * q + delta - j);
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
    }
    m
}

/// Smallest `K` with `K (q-1) >= deg G - delta`.
fn closed_dim(g: &XPoly, q: usize, delta: usize) -> usize {
    let d = g.degree().unwrap_or(0);
    (d.saturating_sub(delta)).div_ceil(q - 1)
}

/// Dimension of the span of `Psi_L(V_k)`'s possible support.
fn image_dim(deg_l: usize, k: usize, q: usize, delta: usize) -> usize {
    if k == 0 || k - 1 + deg_l < delta {
        0
    } else {
        (k - 1 + deg_l - delta) / q + 1
    }
}

/// `det(1 - x Y)` for the diagonal block of `m` on indices `from..to`.
fn block_det(m: &PolyMatrix, from: usize, to: usize, f: &FieldSpec) -> XPoly {
    let mut sub = PolyMatrix::zero(to - from);
    for i in from..to {
        for j in from..to {
            sub.set(i - from, j - from, m.get(i, j).clone());
        }
    }
    debug_assert!((from..m.dim()).all(|i| (0..from).all(|j| m.get(i, j).is_zero())));
    det_one_minus_x(&sub, DetMethod::Auto, f)
}

/// `(1 + c t^e u)^k` with `c = 1`.
fn binomial_u(e: usize, k: u64, f: &FieldSpec) -> XPoly {
    let p = f.characteristic();
    XPoly::from_coeffs(
        (0..=k)
            .map(|i| {
                PolyT::monomial(
                    f.from_int(lucas_binom(k, i as i64, p) as i64),
                    e * i as usize,
                )
            })
            .collect(),
    )
}

/// `p(u) -> p(u^q)`.
fn inflate(p: &XPoly, q: usize) -> XPoly {
    let mut coeffs = vec![PolyT::zero(); p.degree().map_or(0, |d| d * q + 1)];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs[i * q] = c.clone();
    }
    XPoly::from_coeffs(coeffs)
}

/// `det(1 - x M_n)` through the digit-by-digit reduction described above;
/// each step is an exact determinant identity, and the final matrix has
/// dimension about `(sum of base-q digits of n) / (q-1)`.
pub fn pn_poly_reduced(params: &TwistParams, f: &FieldSpec) -> XPoly {
    if params.n < 0 || params.h <= 0 {
        return XPoly::one();
    }
    let q = params.q as usize;
    let delta = params.delta as usize;
    let mut prefix = XPoly::one();
    let mut level_exp = 1usize; // t-exponent q^j of the current digit factor
    let mut rest = params.n as u64;
    let mut k = params.h as usize;
    let mut num = XPoly::one();
    let mut den = XPoly::one();
    while rest > 0 {
        let digit = rest % q as u64;
        let high = rest / q as u64;
        let low = prefix.mul(&binomial_u(level_exp, digit, f), f);
        if high == 0 {
            prefix = low;
            break;
        }
        let next_exp = level_exp * q;
        let a = binomial_u(next_exp, high, f);
        let deg_low = low.degree().unwrap_or(0);
        let deg_a = high as usize;
        let mut k2 = k;
        while image_dim(deg_low, k2, q, delta) + deg_a > k2 {
            k2 += 1;
        }
        if k2 > k {
            let g = low.mul(&inflate(&a, q), f);
            den = den.mul(&block_det(&psi_matrix(&g, k2, q, delta), k, k2, f), f);
        }
        let m = image_dim(deg_low, k2, q, delta);
        let g2 = low.mul(&a, f);
        let km = closed_dim(&g2, q, delta);
        if m < km {
            den = den.mul(&block_det(&psi_matrix(&g2, km, q, delta), m, km, f), f);
        } else if m > km {
            num = num.mul(&block_det(&psi_matrix(&g2, m, q, delta), km, m, f), f);
        }
        k = km;
        prefix = low;
        level_exp = next_exp;
        rest = high;
    }
    let det = det_one_minus_x(&psi_matrix(&prefix, k, q, delta), DetMethod::Auto, f);
    det.mul(&num, f)
        .div_exact(&den, f)
        .expect("block determinants divide exactly")
}

/// Order of vanishing of `P_n` at `x = 1` and the leading coefficient there.
pub fn fitting_data(pn: &XPoly, f: &FieldSpec) -> (usize, PolyT) {
    pn.expand_at_one(f).expect("P_n(0) = 1")
}

/// Window used by [`gamma_matrix_oracle`] when none is given: `T` covers the
/// largest `t`-degree `q(h-1) + delta` an entry can have, plus a margin.
pub fn gamma_default_window(params: &TwistParams) -> Window {
    let h = params.h.max(1);
    let q = params.q as i64;
    let t = q * (h - 1) + params.delta as i64 + 2;
    Window::new(t as usize, -(q * t + h))
}

fn gamma_at(params: &TwistParams, w: Window, f: &FieldSpec) -> Result<PolyMatrix> {
    let h = params.h as usize;
    let n = params.n as u64;
    let v = nu(params, w, f)?;
    let v_inv = v.invert(w.floor, f)?;
    let mut out = PolyMatrix::zero(h);
    for k in 0..h {
        let g = TateSeries::exact_monomial(Gf::ONE, k as i64, 0).mul(&v, f);
        let (_, small) = beta(&g, n, f).decompose()?;
        let (b, _) = small.mul(&v_inv, f).decompose()?;
        if let Some(d) = b.deg_theta() {
            if d >= h {
                return Err(Error::PrecisionInsufficient(format!(
                    "projection of column {k} has theta-degree {d} >= h = {h}"
                )));
            }
        }
        for j in 0..h {
            let gamma_jk = b.theta_coeff(j);
            let entry = if j == k {
                PolyT::one().sub(&gamma_jk, f)
            } else {
                gamma_jk.neg(f)
            };
            out.set(j, k, entry);
        }
    }
    Ok(out)
}

/// The matrix `N` of `id - gamma` on `sum_{k<h} F[t] theta^k nu_n`, computed from
/// `beta` and the decompositions of the Tate algebra. The result is checked
/// against a recomputation at the enlarged window `(T + q, floor - q h)`.
pub fn gamma_matrix_oracle(params: &TwistParams, w: Window, f: &FieldSpec) -> Result<PolyMatrix> {
    if params.n < 0 {
        return Err(Error::NegativeTwist(params.n));
    }
    if params.h < 1 {
        return Ok(PolyMatrix::zero(0));
    }
    let q = params.q as i64;
    let first = gamma_at(params, w, f)?;
    let wider = Window::new(w.t_prec + q as usize, w.floor - q * params.h);
    let second = gamma_at(params, wider, f)?;
    if first != second {
        return Err(Error::PrecisionInsufficient(format!(
            "gamma matrix unstable between {w} and {wider}"
        )));
    }
    Ok(first)
}
