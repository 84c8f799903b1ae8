//! Complete and incomplete elliptic integrals, the nome, and modulus
//! derivatives. Everything else in the crate sits on top of this module.
//!
//! K is evaluated through the arithmetic-geometric mean, E through the AGM
//! iteration with the c_n correction sum, and the incomplete integral F
//! through Carlson's symmetric form R_F. All routines work at binary64.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Elliptic modulus k together with its complement k' = sqrt(1 - k²).
///
/// Restricted to the open interval (0, 1); endpoints are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    k_prime: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("modulus must lie in (0,1), got {k}")));
        }
        Ok(Self {
            k,
            k_prime: (1.0 - k * k).sqrt(),
        })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn k_prime(&self) -> f64 {
        self.k_prime
    }

    /// The complementary modulus as a `Modulus` in its own right.
    pub fn complement(&self) -> Modulus {
        Modulus {
            k: self.k_prime,
            k_prime: self.k,
        }
    }
}

/// All modulus-indexed quantities bundled together: K, E, their
/// complementary counterparts, the nome q = exp(-π K'/K), and K'/K.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, Copy)]
#[allow(non_snake_case)]
pub struct EllipticContext {
    pub modulus: Modulus,
    pub K: f64,
    pub E: f64,
    pub K_prime: f64,
    pub E_prime: f64,
    pub q: f64,
    /// K'/K, the argument scale of every hyperbolic sum in the corpus.
    pub ratio: f64,
}

impl EllipticContext {
    /// Legendre relation defect E·K' + E'·K - K·K' - π/2.
    pub fn legendre_defect(&self) -> f64 {
        self.E * self.K_prime + self.E_prime * self.K - self.K * self.K_prime - FRAC_PI_2
    }

    /// Context at the complementary modulus. K and K' (and E, E') swap;
    /// the nome and ratio are recomputed.
    pub fn complement(&self) -> EllipticContext {
        let ratio = self.K / self.K_prime;
        EllipticContext {
            modulus: self.modulus.complement(),
            K: self.K_prime,
            E: self.E_prime,
            K_prime: self.K,
            E_prime: self.E,
            q: (-PI * ratio).exp(),
            ratio,
        }
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("agm requires positive inputs, got ({a}, {b})")));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
    }
    Ok(0.5 * (a + b))
}

/// Complete elliptic integral of the first kind, K(k) = π / (2·agm(1, k')).
pub fn complete_k(m: &Modulus) -> f64 {
    // Modulus construction guarantees k' in (0,1), so agm cannot fail.
    FRAC_PI_2 / agm(1.0, m.k_prime()).expect("modulus invariant")
}

/// Complete elliptic integral of the second kind via the AGM correction sum:
/// E = K·(1 - Σ 2^{n-1} c_n²) with c_0 = k, c_{n+1} = (a_n - b_n)/2.
pub fn complete_e(m: &Modulus) -> f64 {
    let mut a = 1.0_f64;
    let mut b = m.k_prime();
    let mut c = m.k();
    let mut pow = 0.5;
    let mut sum = pow * c * c;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let big_k = FRAC_PI_2 / a;
    big_k * (1.0 - sum)
}

/// Carlson's symmetric integral R_F(x, y, z) by the duplication algorithm.
/// At most one argument may be zero.
fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0025;
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let (mut ave, mut dx, mut dy, mut dz);
    loop {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = (xt + yt + zt) / 3.0;
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt()
}

/// Incomplete elliptic integral of the first kind,
/// F(φ, k) = ∫₀^φ dt / sqrt(1 - k² sin² t), for |φ| ≤ π/2.
pub fn incomplete_f(phi: f64, m: &Modulus) -> Result<f64> {
    if phi.abs() > FRAC_PI_2 + 1e-12 {
        return Err(Error::Domain(format!("amplitude must satisfy |phi| <= pi/2, got {phi}")));
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    let s = phi.sin();
    let c = phi.cos();
    let k = m.k();
    Ok(s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0))
}

/// Populate the full context at modulus k.
pub fn build_context(m: &Modulus) -> EllipticContext {
    let mc = m.complement();
    let big_k = complete_k(m);
    let big_kp = complete_k(&mc);
    let big_e = complete_e(m);
    let big_ep = complete_e(&mc);
    let ratio = big_kp / big_k;
    EllipticContext {
        modulus: *m,
        K: big_k,
        E: big_e,
        K_prime: big_kp,
        E_prime: big_ep,
        q: (-PI * ratio).exp(),
        ratio,
    }
}

/// dK/dk = (E - k'²·K) / (k·k'²).
pub fn dk_dk(ctx: &EllipticContext) -> f64 {
    let k = ctx.modulus.k();
    let kp2 = ctx.modulus.k_prime() * ctx.modulus.k_prime();
    (ctx.E - kp2 * ctx.K) / (k * kp2)
}

/// dE/dk = (E - K) / k.
pub fn de_dk(ctx: &EllipticContext) -> f64 {
    (ctx.E - ctx.K) / ctx.modulus.k()
}

/// d(K'/K)/dk, assembled from dK/dk at k and at the complementary modulus
/// (chain rule with dk'/dk = -k/k').
pub fn d_ratio_dk(ctx: &EllipticContext) -> f64 {
    let k = ctx.modulus.k();
    let kp = ctx.modulus.k_prime();
    let dkp_dk = dk_dk(&ctx.complement()) * (-k / kp);
    (dkp_dk * ctx.K - ctx.K_prime * dk_dk(ctx)) / (ctx.K * ctx.K)
}
