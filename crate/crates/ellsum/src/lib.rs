//! Special-function toolkit for hyperbolic lattice sums.
//!
//! The crate evaluates complete and incomplete elliptic integrals, the twelve
//! Jacobi elliptic functions, elliptic singular values, the q-digamma
//! function, and the Fourier/q-series expansions that tie them together. On
//! top of those primitives sits a declarative corpus of closed-form identities
//! for hyperbolic series (sech, csch, their squares, and 1/(e^x ± 1) kernels)
//! together with a verification engine that checks every identity numerically.
//!
//! Entry points:
//! - [`elliptic`]: AGM-based K, E, incomplete F, and the [`elliptic::EllipticContext`] bundle
//! - [`jacobi`]: sn/cn/dn via descending Landen, the nine quotient functions, derivatives
//! - [`fourier`]: q-series expansions of dc, nc, ns² and the second-derivative dc pair
//! - [`singular`]: singular moduli k_r, the elliptic alpha function, Γ(1/4)
//! - [`closedform`]: a tiny expression grammar for closed-form sides of identities
//! - [`qspecial`]: q-digamma for real and complex arguments
//! - [`hypersum`]: rigorous truncated evaluation of the hyperbolic sum families
//! - [`corpus`]: the identity registry and pass/fail verification reports

pub mod closedform;
pub mod corpus;
pub mod elliptic;
pub mod error;
pub mod fourier;
pub mod hypersum;
pub mod jacobi;
pub mod kahan;
pub mod qspecial;
pub mod singular;

pub use error::{Error, Result};
