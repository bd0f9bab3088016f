//! Exact arithmetic for Carlitz twists over `F_q[t]`.
//!
//! The crate computes the zeta polynomials `Z(x, -n)`, the class-module
//! polynomials `P_n(x) = det(1 - x M_n)`, and the torsion polynomial
//! `epsilon_n` of the extension module of a positive twist, together with
//! the truncated Tate-algebra machinery (`omega^n`, `nu_n`, twisted
//! difference equations) needed to compute them independently.

pub mod classmod;
pub mod error;
pub mod ff;
pub mod motcoh;
pub mod polyring;
pub mod report;
pub mod tate;
pub mod zeta;

pub use error::{Error, Result};
pub use ff::{enumerate, ext_field, ff_make, lucas_binom, Embedding, FieldSpec, Gf};
pub use polyring::{gcd_t, BiPoly, PolyT, XPoly};
pub use report::{Report, Status};
pub use tate::{LaurentTheta, TateSeries, TwistParams, Window};
