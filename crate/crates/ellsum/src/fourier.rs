//! Fourier/q-series expansions of dc, nc, ns² and the second u-derivative of
//! dc.
//!
//! Every exponential appears in a denominator as 1/(e^x ∓ 1) with
//! x = (2n+1)·π·K'/K, never as a quotient of q-powers; this keeps the terms
//! well scaled for large n. Each evaluation carries the number of terms used
//! and a rigorous geometric tail bound.

use std::f64::consts::PI;

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};
use crate::jacobi::{jacobi_point, POLE_GUARD};
use crate::kahan::KahanSum;

/// Cap on series terms before reporting a convergence error.
pub const MAX_TERMS: usize = 1_000_000;

/// A series value together with its truncation evidence.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// 1/(e^x - 1) in exponential-denominator form.
#[inline]
fn inv_expm1(x: f64) -> f64 {
    let e = (-x).exp();
    e / (1.0 - e)
}

/// 1/(e^x + 1) in exponential-denominator form.
#[inline]
fn inv_expp1(x: f64) -> f64 {
    let e = (-x).exp();
    e / (1.0 + e)
}

/// Distance from w to the nearest number of the form 1/2 + integer.
fn dist_to_half_odd(w: f64) -> f64 {
    let t = w - 0.5;
    (t - t.round()).abs()
}

/// Distance from w to the nearest integer.
fn dist_to_integer(w: f64) -> f64 {
    (w - w.round()).abs()
}

/// Tail bound for Σ_{m > n} P(m)·r^m given the envelope of the (n+1)-st term,
/// where P is a degree-`deg` monomial-like factor with nonincreasing
/// successive ratios. The geometric ratio is inflated by ((n+2)/(n+1))^deg to
/// absorb the polynomial growth.
fn geom_tail(env_next: f64, r: f64, n: usize, deg: u32) -> f64 {
    let g = r * ((n as f64 + 2.0) / (n as f64 + 1.0)).powi(deg as i32);
    if g >= 1.0 {
        f64::INFINITY
    } else {
        env_next / (1.0 - g)
    }
}

struct SeriesAccum {
    sum: KahanSum,
    n: usize,
    tol: f64,
    r: f64,
    deg: u32,
}

impl SeriesAccum {
    fn new(tol: f64, r: f64, deg: u32) -> Self {
        Self {
            sum: KahanSum::new(),
            n: 0,
            tol,
            r,
            deg,
        }
    }

    /// Add one term with its envelope (a bound on |term| that also bounds all
    /// cosine factors by 1). Returns the tail bound once it drops under
    /// budget.
    fn push(&mut self, term: f64, envelope: f64, next_envelope: f64) -> Option<f64> {
        self.sum.add(term);
        self.n += 1;
        if envelope < self.tol / 4.0 {
            let tail = geom_tail(next_envelope, self.r, self.n, self.deg);
            if tail < self.tol / 2.0 {
                return Some(tail);
            }
        }
        None
    }
}

/// dc(2Kw, k) from its cosine q-series:
/// π/(2K)·[sec(πw) + 4·Σ (-1)ⁿ cos((2n+1)πw) / (e^{(2n+1)πK'/K} - 1)].
pub fn dc_series(w: f64, ctx: &EllipticContext, tol: f64) -> Result<SeriesEval> {
    require_tol(tol)?;
    if dist_to_half_odd(w) < 1e-6 {
        return Err(Error::Pole {
            denom: (PI * w).cos().abs(),
        });
    }
    let pref = PI / (2.0 * ctx.K);
    let step = PI * ctx.ratio;
    let r = (-2.0 * step).exp();
    let mut acc = SeriesAccum::new(tol, r, 0);
    let mut total = pref / (PI * w).cos();
    for n in 0..MAX_TERMS {
        let m = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = 4.0 * pref * sign * (m * PI * w).cos() * inv_expm1(m * step);
        let env = 8.0 * pref * (-m * step).exp();
        let env_next = 8.0 * pref * (-(m + 2.0) * step).exp();
        if let Some(tail) = acc.push(term, env, env_next) {
            total += acc.sum.value();
            return Ok(SeriesEval {
                value: total,
                terms_used: acc.n,
                tail_bound: tail,
            });
        }
    }
    Err(Error::Convergence {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// nc(2Kw, k) from its cosine q-series:
/// π/(2k'K)·sec(πw) - (2π/(k'K))·Σ (-1)ⁿ cos((2n+1)πw) / (e^{(2n+1)πK'/K} + 1).
pub fn nc_series(w: f64, ctx: &EllipticContext, tol: f64) -> Result<SeriesEval> {
    require_tol(tol)?;
    if dist_to_half_odd(w) < 1e-6 {
        return Err(Error::Pole {
            denom: (PI * w).cos().abs(),
        });
    }
    let kp = ctx.modulus.k_prime();
    let pref = PI / (ctx.K * kp);
    let step = PI * ctx.ratio;
    let r = (-2.0 * step).exp();
    let mut acc = SeriesAccum::new(tol, r, 0);
    let mut total = 0.5 * pref / (PI * w).cos();
    for n in 0..MAX_TERMS {
        let m = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = -2.0 * pref * sign * (m * PI * w).cos() * inv_expp1(m * step);
        let env = 4.0 * pref * (-m * step).exp();
        let env_next = 4.0 * pref * (-(m + 2.0) * step).exp();
        if let Some(tail) = acc.push(term, env, env_next) {
            total += acc.sum.value();
            return Ok(SeriesEval {
                value: total,
                terms_used: acc.n,
                tail_bound: tail,
            });
        }
    }
    Err(Error::Convergence {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// ns²(2Kw, k): the classical expansion
/// (2K/π)²·ns² = 4K(K-E)/π² + csc²(πw) - 8·Σ n·cos(2nπw) / (e^{2nπK'/K} - 1),
/// divided through by (2K/π)².
pub fn ns2_series(w: f64, ctx: &EllipticContext, tol: f64) -> Result<SeriesEval> {
    require_tol(tol)?;
    if dist_to_integer(w) < 1e-6 {
        return Err(Error::Pole {
            denom: (PI * w).sin().abs(),
        });
    }
    let scale = (2.0 * ctx.K / PI).powi(2);
    let step = 2.0 * PI * ctx.ratio;
    let r = (-step).exp();
    // Budget the tail in units of the returned (scaled) value.
    let mut acc = SeriesAccum::new(tol * scale, r, 1);
    let csc = 1.0 / (PI * w).sin();
    let head = 4.0 * ctx.K * (ctx.K - ctx.E) / (PI * PI) + csc * csc;
    for n in 1..=MAX_TERMS {
        let nf = n as f64;
        let term = -8.0 * nf * (2.0 * nf * PI * w).cos() * inv_expm1(nf * step);
        let env = 16.0 * nf * (-nf * step).exp();
        let env_next = 16.0 * (nf + 1.0) * (-(nf + 1.0) * step).exp();
        if let Some(tail) = acc.push(term, env, env_next) {
            let value = (head + acc.sum.value()) / scale;
            return Ok(SeriesEval {
                value,
                terms_used: acc.n,
                // Never report tighter than the value's own rounding level.
                tail_bound: (tail / scale).max(f64::EPSILON * value.abs()),
            });
        }
    }
    Err(Error::Convergence {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// Both sides of the second u-derivative of the dc expansion at u = 2wK.
///
/// The left side is dn·(dn² - k²cn²)·(cn² + 2sn²)/cn³ evaluated directly;
/// the right side is
/// π³(3 - cos(πu/K))·sec³(πu/2K)/(16K³)
///   - (π³/2K³)·Σ (-1)ⁿ (2n+1)² cos((2n+1)πu/2K) / (e^{(2n+1)πK'/K} - 1).
pub fn dc_d2u_pair(w: f64, ctx: &EllipticContext, tol: f64) -> Result<(f64, SeriesEval)> {
    require_tol(tol)?;
    if dist_to_half_odd(w) < 1e-6 {
        return Err(Error::Pole {
            denom: (PI * w).cos().abs(),
        });
    }
    let u = 2.0 * w * ctx.K;
    let p = jacobi_point(u, ctx);
    if p.cn.abs() < POLE_GUARD {
        return Err(Error::Pole { denom: p.cn.abs() });
    }
    let k2 = ctx.modulus.k().powi(2);
    let lhs = p.dn * (p.dn * p.dn - k2 * p.cn * p.cn) * (p.cn * p.cn + 2.0 * p.sn * p.sn)
        / (p.cn * p.cn * p.cn);

    let k3 = ctx.K.powi(3);
    let sec = 1.0 / (PI * w).cos();
    let head = PI.powi(3) * (3.0 - (2.0 * PI * w).cos()) * sec * sec * sec / (16.0 * k3);
    let pref = PI.powi(3) / (2.0 * k3);
    let step = PI * ctx.ratio;
    let r = (-2.0 * step).exp();
    let mut acc = SeriesAccum::new(tol, r, 2);
    for n in 0..MAX_TERMS {
        let m = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = -pref * sign * m * m * (m * PI * w).cos() * inv_expm1(m * step);
        let env = 2.0 * pref * m * m * (-m * step).exp();
        let env_next = 2.0 * pref * (m + 2.0) * (m + 2.0) * (-(m + 2.0) * step).exp();
        if let Some(tail) = acc.push(term, env, env_next) {
            return Ok((
                lhs,
                SeriesEval {
                    value: head + acc.sum.value(),
                    terms_used: acc.n,
                    tail_bound: tail,
                },
            ));
        }
    }
    Err(Error::Convergence {
        tol,
        max_terms: MAX_TERMS,
    })
}

fn require_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be positive, got {tol}")))
    }
}
