//! The twelve Jacobi elliptic functions, their u-derivatives, and the
//! half-K special values.
//!
//! sn, cn, dn are computed by the descending Landen transformation seeded
//! from the AGM sequence; the remaining nine functions are quotients of
//! those three.

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};

/// Denominators smaller than this raise a pole error from quotient functions.
pub const POLE_GUARD: f64 = 1e-12;

/// The twelve Jacobi function codes. Two-letter names follow Glaisher's
/// quotient notation: the first letter is the numerator, the second the
/// denominator, with n standing for 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JacobiCode {
    Sn,
    Cn,
    Dn,
    Cd,
    Cs,
    Dc,
    Ds,
    Nc,
    Nd,
    Ns,
    Sc,
    Sd,
}

impl JacobiCode {
    pub const ALL: [JacobiCode; 12] = [
        JacobiCode::Sn,
        JacobiCode::Cn,
        JacobiCode::Dn,
        JacobiCode::Cd,
        JacobiCode::Cs,
        JacobiCode::Dc,
        JacobiCode::Ds,
        JacobiCode::Nc,
        JacobiCode::Nd,
        JacobiCode::Ns,
        JacobiCode::Sc,
        JacobiCode::Sd,
    ];

    /// Numerator/denominator decomposition over {1, sn, cn, dn}.
    fn parts(self) -> (Basis, Basis) {
        use Basis::*;
        use JacobiCode::*;
        match self {
            Sn => (S, One),
            Cn => (C, One),
            Dn => (D, One),
            Cd => (C, D),
            Cs => (C, S),
            Dc => (D, C),
            Ds => (D, S),
            Nc => (One, C),
            Nd => (One, D),
            Ns => (One, S),
            Sc => (S, C),
            Sd => (S, D),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Basis {
    One,
    S,
    C,
    D,
}

/// sn, cn, dn at a single argument, bundled with the context they were
/// computed in.
#[derive(Debug, Clone, Copy)]
pub struct JacobiPoint {
    pub u: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl JacobiPoint {
    fn basis(&self, b: Basis) -> f64 {
        match b {
            Basis::One => 1.0,
            Basis::S => self.sn,
            Basis::C => self.cn,
            Basis::D => self.dn,
        }
    }

    /// u-derivative of a basis function from the sn/cn/dn differential
    /// system: sn' = cn·dn, cn' = -sn·dn, dn' = -k²·sn·cn.
    fn basis_du(&self, b: Basis, k: f64) -> f64 {
        match b {
            Basis::One => 0.0,
            Basis::S => self.cn * self.dn,
            Basis::C => -self.sn * self.dn,
            Basis::D => -k * k * self.sn * self.cn,
        }
    }
}

/// sn, cn, dn by the descending Landen recursion (A&S 16.4).
pub fn jacobi_point(u: f64, ctx: &EllipticContext) -> JacobiPoint {
    let kp = ctx.modulus.k_prime();
    // Ascend the AGM ladder, recording a_n and c_n.
    let mut a_seq = vec![1.0_f64];
    let mut c_seq = vec![ctx.modulus.k()];
    let (mut a, mut b) = (1.0_f64, kp);
    while *c_seq.last().unwrap() > f64::EPSILON * a {
        let an = 0.5 * (a + b);
        let cn = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        a_seq.push(a);
        c_seq.push(cn);
        if a_seq.len() > 32 {
            break;
        }
    }
    let levels = a_seq.len() - 1;

    // Descend: phi_N = 2^N a_N u, then halve the amplitude back down.
    let mut phi = (1u64 << levels) as f64 * a_seq[levels] * u;
    let mut phi_prev = phi;
    for n in (1..=levels).rev() {
        phi_prev = phi;
        phi = 0.5 * (phi + ((c_seq[n] / a_seq[n]) * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = if levels >= 1 {
        let d = (phi_prev - phi).cos();
        if d.abs() > 1e-3 {
            cn / d
        } else {
            // Very near a pole of cd; fall back to the defining relation.
            (1.0 - ctx.modulus.k().powi(2) * sn * sn).sqrt()
        }
    } else {
        (1.0 - ctx.modulus.k().powi(2) * sn * sn).sqrt()
    };
    JacobiPoint { u, sn, cn, dn }
}

/// Jacobi amplitude am(u, k) = atan2(sn, cn). Inverts the incomplete
/// integral F on |φ| ≤ π/2.
pub fn amplitude(u: f64, ctx: &EllipticContext) -> f64 {
    let p = jacobi_point(u, ctx);
    p.sn.atan2(p.cn)
}

/// Any of the twelve Jacobi functions as a quotient of sn/cn/dn.
pub fn jacobi_fn(code: JacobiCode, u: f64, ctx: &EllipticContext) -> Result<f64> {
    let p = jacobi_point(u, ctx);
    let (num, den) = code.parts();
    let d = p.basis(den);
    if d.abs() < POLE_GUARD {
        return Err(Error::Pole { denom: d.abs() });
    }
    Ok(p.basis(num) / d)
}

/// Analytic u-derivative of any of the twelve functions, assembled from the
/// differential system by the quotient rule.
pub fn jacobi_du(code: JacobiCode, u: f64, ctx: &EllipticContext) -> Result<f64> {
    let p = jacobi_point(u, ctx);
    let k = ctx.modulus.k();
    let (num, den) = code.parts();
    let d = p.basis(den);
    if d.abs() < POLE_GUARD {
        return Err(Error::Pole { denom: d.abs() });
    }
    let n = p.basis(num);
    let dn_du = p.basis_du(num, k);
    let dd_du = p.basis_du(den, k);
    Ok((dn_du * d - n * dd_du) / (d * d))
}

/// Closed forms of sn, cn, dn at u = K/2:
/// sn = √2/(√(1+k)+√(1-k)), cn = √2·(1-k²)^¼/(√(1+k)+√(1-k)), dn = (1-k²)^¼.
pub fn half_k_values(ctx: &EllipticContext) -> (f64, f64, f64) {
    let k = ctx.modulus.k();
    let root = (1.0 - k * k).powf(0.25);
    let denom = (1.0 + k).sqrt() + (1.0 - k).sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    (sqrt2 / denom, sqrt2 * root / denom, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{build_context, incomplete_f, Modulus};

    fn ctx(k: f64) -> EllipticContext {
        build_context(&Modulus::new(k).unwrap())
    }

    #[test]
    fn origin_values() {
        let c = ctx(0.55);
        let p = jacobi_point(0.0, &c);
        assert_eq!(p.sn, 0.0);
        assert!((p.cn - 1.0).abs() < 1e-15);
        assert!((p.dn - 1.0).abs() < 1e-15);
        assert_eq!(amplitude(0.0, &c), 0.0);
        assert!((jacobi_fn(JacobiCode::Dc, 0.0, &c).unwrap() - 1.0).abs() < 1e-14);
        assert!((jacobi_fn(JacobiCode::Nc, 0.0, &c).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_limit_is_circular() {
        let c = ctx(1e-8);
        let p = jacobi_point(1.1, &c);
        assert!((p.sn - 1.1_f64.sin()).abs() < 1e-7);
        assert!((p.cn - 1.1_f64.cos()).abs() < 1e-7);
    }

    #[test]
    fn quarter_period() {
        let c = ctx(0.55);
        let p = jacobi_point(c.K, &c);
        assert!((p.sn - 1.0).abs() < 1e-12, "sn(K) = {}", p.sn);
        assert!((amplitude(c.K, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn reference_point_against_external_value() {
        // sn/cn/dn(1.1, 0.55), cross-checked against an independent
        // multiprecision evaluation.
        let c = ctx(0.55);
        let p = jacobi_point(1.1, &c);
        assert!((p.sn - 0.866_189_816_719_784_3).abs() < 1e-13);
        assert!((p.cn - 0.499_715_120_254_477_16).abs() < 1e-13);
        assert!((p.dn - 0.879_226_278_284_954).abs() < 1e-13);
    }

    #[test]
    fn amplitude_inverts_incomplete_f() {
        let m = Modulus::new(0.4).unwrap();
        let c = build_context(&m);
        let u = incomplete_f(0.6, &m).unwrap();
        assert!((amplitude(u, &c) - 0.6).abs() < 1e-10);
    }

    #[test]
    fn pythagorean_identities_random_grid() {
        // Deterministic pseudo-random (u, k) pairs via a simple LCG.
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let k = 0.01 + 0.98 * next();
            let c = ctx(k);
            let u = (next() - 0.5) * 4.0 * c.K;
            let p = jacobi_point(u, &c);
            assert!((p.sn * p.sn + p.cn * p.cn - 1.0).abs() <= 1e-11);
            assert!((p.dn * p.dn + k * k * p.sn * p.sn - 1.0).abs() <= 1e-11);
        }
    }

    #[test]
    fn periodicity_4k() {
        for k in [0.2, 0.6, 0.9] {
            let c = ctx(k);
            for i in -8..=8 {
                let u = i as f64 / 4.0 * c.K;
                let a = jacobi_point(u, &c);
                let b = jacobi_point(u + 4.0 * c.K, &c);
                assert!((a.sn - b.sn).abs() < 1e-9, "sn period at k={k}, u={u}");
                assert!((a.cn - b.cn).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quotient_consistency() {
        let c = ctx(0.45);
        for u in [0.3, 0.8, 1.4] {
            let cd = jacobi_fn(JacobiCode::Cd, u, &c).unwrap();
            let dc = jacobi_fn(JacobiCode::Dc, u, &c).unwrap();
            assert!((cd * dc - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pole_detection() {
        let c = ctx(0.5);
        // ns has a pole at u = 0.
        assert!(matches!(
            jacobi_fn(JacobiCode::Ns, 0.0, &c),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn derivatives_at_origin() {
        let c = ctx(0.63);
        assert!((jacobi_du(JacobiCode::Sn, 0.0, &c).unwrap() - 1.0).abs() < 1e-13);
        assert!(jacobi_du(JacobiCode::Dn, 0.0, &c).unwrap().abs() < 1e-13);
    }

    #[test]
    fn derivatives_match_finite_differences_all_codes() {
        let c = ctx(0.6);
        let h = 1e-6;
        for code in JacobiCode::ALL {
            // Sample away from poles of each quotient.
            for u in [0.4, 0.8, 1.3] {
                let analytic = jacobi_du(code, u, &c).unwrap();
                let fp = jacobi_fn(code, u + h, &c).unwrap();
                let fm = jacobi_fn(code, u - h, &c).unwrap();
                let fd = (fp - fm) / (2.0 * h);
                let scale = analytic.abs().max(1.0);
                assert!(
                    ((analytic - fd) / scale).abs() < 1e-6,
                    "{code:?} at u={u}: analytic {analytic} vs fd {fd}"
                );
            }
        }
    }

    #[test]
    fn half_k_closed_forms() {
        for k in [0.15, 0.6, 0.85] {
            let c = ctx(k);
            let (sn_h, cn_h, dn_h) = half_k_values(&c);
            let p = jacobi_point(0.5 * c.K, &c);
            assert!((sn_h - p.sn).abs() < 1e-11, "sn half at k={k}");
            assert!((cn_h - p.cn).abs() < 1e-11, "cn half at k={k}");
            assert!((dn_h - p.dn).abs() < 1e-11, "dn half at k={k}");
            assert!((sn_h * sn_h + cn_h * cn_h - 1.0).abs() < 1e-14);
        }
        // dn(K/2) at k = 0.6 is (1 - 0.36)^(1/4).
        let (_, _, dn_h) = half_k_values(&ctx(0.6));
        assert!((dn_h - 0.894_427_190_999_915_9).abs() < 1e-13);
    }
}
