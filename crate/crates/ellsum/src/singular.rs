//! Elliptic singular values k_r (moduli with K'/K = √r), the elliptic alpha
//! function, Γ(1/4), and the E' reconstruction identity.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::OnceLock;

use crate::closedform::{self, Expr};
use crate::elliptic::{complete_k, EllipticContext, Modulus};
use crate::error::{Error, Result};

/// A singular modulus together with its closed-form data when tabulated.
///
/// For r ∈ {1, 4} the exact values of k_r, α(r), and a closed form for
/// K(k_r) are attached; other r come from the numeric solver and carry no α.
#[derive(Debug, Clone)]
pub struct SingularValue {
    pub r: u32,
    pub k_r: f64,
    pub alpha_r: Option<f64>,
    pub k_closed: Option<Expr>,
}

/// Solve K'(k)/K(k) = √r, with exact closed forms for r ∈ {1, 4}.
pub fn singular_modulus(r: u32) -> Result<SingularValue> {
    if r == 0 {
        return Err(Error::Domain("singular value index must be positive".into()));
    }
    match r {
        1 => Ok(SingularValue {
            r: 1,
            k_r: FRAC_1_SQRT_2,
            alpha_r: Some(0.5),
            k_closed: Some(closedform::parse("gamma4^2/(4*sqrt(pi))").expect("static expression")),
        }),
        4 => Ok(SingularValue {
            r: 4,
            k_r: 3.0 - 2.0 * SQRT_2,
            alpha_r: Some(2.0 * (SQRT_2 - 1.0) * (SQRT_2 - 1.0)),
            k_closed: Some(
                closedform::parse("(1+sqrt(2))*gamma4^2/(8*sqrt(2*pi))")
                    .expect("static expression"),
            ),
        }),
        _ => {
            // K'/K is continuous and strictly decreasing on (0,1), from +inf
            // to 0, so bisection always brackets.
            let target = (r as f64).sqrt();
            let ratio = |k: f64| {
                let m = Modulus::new(k).expect("bracket stays inside (0,1)");
                complete_k(&m.complement()) / complete_k(&m)
            };
            let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if ratio(mid) > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-16 {
                    break;
                }
            }
            Ok(SingularValue {
                r,
                k_r: 0.5 * (lo + hi),
                alpha_r: None,
                k_closed: None,
            })
        }
    }
}

/// Γ(1/4), obtained from K(k₁) = Γ²(1/4)/(4√π) rather than from a general
/// Γ implementation. Cached after the first call.
pub fn gamma_quarter() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let k1 = Modulus::new(FRAC_1_SQRT_2).expect("k1 in (0,1)");
        (4.0 * PI.sqrt() * complete_k(&k1)).sqrt()
    })
}

/// α(r) from its defining combination of K and E at the singular modulus:
/// α(r) = π/(4K²) + √r − √r·E/K.
pub fn alpha_from_context(ctx: &EllipticContext, r: u32) -> f64 {
    let sqrt_r = (r as f64).sqrt();
    PI / (4.0 * ctx.K * ctx.K) + sqrt_r - sqrt_r * ctx.E / ctx.K
}

/// E' reconstructed from the alpha function: E' = π/(4K) + α(r)·K.
///
/// Errors if the reconstruction disagrees with the context's own E' by more
/// than 1e-9, which signals a mismatched (r, ctx) pairing.
pub fn e_prime_from_alpha(ctx: &EllipticContext, r: u32, alpha_r: f64) -> Result<f64> {
    let _ = r;
    let v = PI / (4.0 * ctx.K) + alpha_r * ctx.K;
    if (v - ctx.E_prime).abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "E' from alpha is {v} but context has {}",
            ctx.E_prime
        )));
    }
    Ok(v)
}
