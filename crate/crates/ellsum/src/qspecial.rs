//! The q-digamma function ψ_q(z) for real q and complex z, and the bridge
//! expressing the exponential-kernel hyperbolic sums as signed combinations
//! of ψ_q values.
//!
//! The defining series
//!   ψ_q(z) = -ln(1-q) + ln q · Σ_{n≥0} q^{n+z}/(1-q^{n+z})
//! converges only for 0 < q < 1. Literature formulas are often stated with
//! bases like e^{8π} > 1; those are evaluated here with the base-inversion
//! convention used by the major CAS implementations,
//!   ψ_q(z) = (z - 1/2)·ln q + ψ_{1/q}(z)   for q > 1,
//! which is the convention under which the classical closed forms hold.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};
use crate::hypersum::{IndexFamily, Kernel, SignPattern, SumSpec, MAX_TERMS};
use crate::kahan::KahanSum;

/// Argument pair for [`q_digamma`]. Any positive base except 1 is accepted;
/// bases above 1 trigger the inversion convention described in the module
/// docs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDigammaArg {
    pub q: f64,
    pub z: Complex64,
}

impl QDigammaArg {
    pub fn new(q: f64, z: Complex64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q == 1.0 {
            return Err(Error::Domain(format!(
                "q-digamma base must be positive and distinct from 1, got {q}"
            )));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain("q-digamma argument must be finite".into()));
        }
        Ok(Self { q, z })
    }

    pub fn real(q: f64, z: f64) -> Result<Self> {
        Self::new(q, Complex64::new(z, 0.0))
    }
}

/// Evaluate ψ_q(z) to within `tol` via the defining series, with compensated
/// summation carried independently on the real and imaginary parts.
pub fn q_digamma(arg: &QDigammaArg, tol: f64) -> Result<Complex64> {
    if tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if arg.q > 1.0 {
        let inner = QDigammaArg::new(1.0 / arg.q, arg.z)?;
        let ln_q = arg.q.ln();
        return Ok((arg.z - 0.5) * ln_q + q_digamma(&inner, tol)?);
    }
    let q = arg.q;
    let ln_q = q.ln();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for n in 0..MAX_TERMS {
        // w = q^{n+z}
        let w = ((arg.z + n as f64) * ln_q).exp();
        let denom = Complex64::new(1.0, 0.0) - w;
        if denom.norm() < 1e-12 {
            return Err(Error::Pole { denom: denom.norm() });
        }
        let term = w / denom;
        re.add(term.re);
        im.add(term.im);
        // |w_j| = q^{j+Re z} decays geometrically; once the next magnitude
        // drops below 1/2, every remaining |term| is at most twice it.
        let mag_next = q.powf(n as f64 + 1.0 + arg.z.re);
        if mag_next < 0.5 {
            let tail = ln_q.abs() * 2.0 * mag_next / (1.0 - q);
            if tail < tol {
                let series = Complex64::new(re.value(), im.value());
                return Ok(Complex64::new(-(1.0 - q).ln(), 0.0) + series * ln_q);
            }
        }
    }
    Err(Error::Convergence {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// Σ sign(n)/(e^{(2n+1)t}-1) written as a ψ combination, with t absorbed
/// into the base so that each residue class mod the sign period becomes one
/// ψ_q(a/period) term.
fn expm1_bridge(sign: SignPattern, t: f64, tol: f64) -> Result<f64> {
    let psi = |q: f64, z: f64| -> Result<f64> {
        Ok(q_digamma(&QDigammaArg::real(q, z)?, tol)?.re)
    };
    match sign {
        SignPattern::None => {
            let q = (-2.0 * t).exp();
            Ok((psi(q, 0.5)? + (1.0 - q).ln()) / q.ln())
        }
        SignPattern::Alt => {
            let q = (-4.0 * t).exp();
            Ok((psi(q, 0.75)? - psi(q, 0.25)?) / (4.0 * t))
        }
        SignPattern::Alt2 => {
            let q = (-8.0 * t).exp();
            Ok(
                (-psi(q, 0.125)? - psi(q, 0.375)? + psi(q, 0.625)? + psi(q, 0.875)?)
                    / (8.0 * t),
            )
        }
    }
}

/// Re-evaluate an exponential-kernel odd-index sum through its q-digamma
/// representation. Supports s = 0 with kernels 1/(e^x-1) and 1/(e^x+1); the
/// latter reduces via 1/(e^x+1) = 1/(e^x-1) - 2/(e^{2x}-1).
pub fn qdigamma_sum_bridge(spec: &SumSpec, ctx: &EllipticContext, tol: f64) -> Result<f64> {
    if spec.index != IndexFamily::Odd || spec.power != 0 {
        return Err(Error::Bridge(format!(
            "bridge requires an odd-index sum with s = 0, got {spec:?}"
        )));
    }
    let t = spec.scale.value() * PI * ctx.ratio;
    let inner_tol = (tol * t).min(tol) / 8.0;
    match spec.kernel {
        Kernel::InvExpm1 => expm1_bridge(spec.sign, t, inner_tol),
        Kernel::InvExpp1 => {
            Ok(expm1_bridge(spec.sign, t, inner_tol)?
                - 2.0 * expm1_bridge(spec.sign, 2.0 * t, inner_tol)?)
        }
        other => Err(Error::Bridge(format!(
            "bridge requires an exponential kernel, got {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{build_context, Modulus};
    use crate::hypersum::{evaluate, Scale};
    use crate::singular::{gamma_quarter, singular_modulus};
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    const TOL: f64 = 1e-13;

    fn psi(q: f64, z: f64) -> f64 {
        q_digamma(&QDigammaArg::real(q, z).unwrap(), TOL).unwrap().re
    }

    fn psi_c(q: f64, z: Complex64) -> Complex64 {
        q_digamma(&QDigammaArg::new(q, z).unwrap(), TOL).unwrap()
    }

    #[test]
    fn recurrence_at_fixed_point() {
        let (q, z) = (0.3_f64, 0.7_f64);
        let lhs = psi(q, z + 1.0) - psi(q, z);
        let rhs = -q.ln() * q.powf(z) / (1.0 - q.powf(z));
        assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn recurrence_random_pairs() {
        let mut state = 0x2545f4914f6cdd1d_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1_u64 << 53) as f64
        };
        for _ in 0..50 {
            let q = 0.05 + 0.85 * next();
            let z = 0.1 + 1.9 * next();
            let lhs = psi(q, z + 1.0) - psi(q, z);
            let rhs = -q.ln() * q.powf(z) / (1.0 - q.powf(z));
            assert!((lhs - rhs).abs() <= 1e-12, "q={q}, z={z}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for (q, z) in [
            (0.4, Complex64::new(0.8, 0.6)),
            (0.9, Complex64::new(1.5, -2.0)),
            (23.140692632779267, Complex64::new(0.5, 0.5)),
        ] {
            let a = psi_c(q, z.conj());
            let b = psi_c(q, z).conj();
            assert!((a - b).norm() <= 1e-12, "q={q}, z={z}");
        }
    }

    #[test]
    fn real_argument_yields_real_value() {
        let v = q_digamma(&QDigammaArg::real(0.37, 1.25).unwrap(), TOL).unwrap();
        assert!(v.im.abs() <= 1e-15);
    }

    #[test]
    fn base_inversion_convention() {
        let q = 11.3_f64;
        let z = Complex64::new(0.6, 0.3);
        let direct = psi_c(q, z);
        let inverted = (z - 0.5) * q.ln() + psi_c(1.0 / q, z);
        assert!((direct - inverted).norm() <= 1e-13);
    }

    #[test]
    fn pole_and_domain_errors() {
        // q^{0+0} = 1 is a pole of the first term.
        assert!(matches!(
            q_digamma(&QDigammaArg::real(0.5, 0.0).unwrap(), TOL),
            Err(Error::Pole { .. })
        ));
        assert!(QDigammaArg::real(1.0, 0.5).is_err());
        assert!(QDigammaArg::real(-0.2, 0.5).is_err());
    }

    fn spec(sign: SignPattern, kernel: Kernel, scale: (u32, u32)) -> SumSpec {
        SumSpec {
            index: IndexFamily::Odd,
            power: 0,
            sign,
            kernel,
            scale: Scale::new(scale.0, scale.1).unwrap(),
        }
    }

    #[test]
    fn bridge_matches_direct_sum() {
        let contexts = [
            build_context(&Modulus::new(FRAC_1_SQRT_2).unwrap()),
            build_context(&Modulus::new(singular_modulus(4).unwrap().k_r).unwrap()),
            build_context(&Modulus::new(0.3).unwrap()),
        ];
        let signs = [SignPattern::None, SignPattern::Alt, SignPattern::Alt2];
        let kernels = [Kernel::InvExpm1, Kernel::InvExpp1];
        for ctx in &contexts {
            for &sign in &signs {
                for &kernel in &kernels {
                    let s = spec(sign, kernel, (1, 1));
                    let direct = evaluate(&s, ctx, 1e-13).unwrap().value;
                    let bridged = qdigamma_sum_bridge(&s, ctx, 1e-11).unwrap();
                    assert!(
                        (direct - bridged).abs() <= 1e-9,
                        "{sign:?}/{kernel:?}: {direct} vs {bridged}"
                    );
                }
            }
        }
    }

    #[test]
    fn bridge_rejects_unsupported_shapes() {
        let ctx = build_context(&Modulus::new(FRAC_1_SQRT_2).unwrap());
        let bad_kernel = spec(SignPattern::Alt, Kernel::Sech, (1, 2));
        assert!(qdigamma_sum_bridge(&bad_kernel, &ctx, 1e-10).is_err());
        let mut bad_power = spec(SignPattern::Alt, Kernel::InvExpm1, (1, 1));
        bad_power.power = 2;
        assert!(qdigamma_sum_bridge(&bad_power, &ctx, 1e-10).is_err());
    }

    #[test]
    fn lemniscatic_four_term_combination() {
        // -ψ_q(1/8) - ψ_q(3/8) + ψ_q(5/8) + ψ_q(7/8) with q = e^{8π}
        // equals 4π + √((2+√2)/π)·Γ²(1/4).
        let q = (8.0 * PI).exp();
        let lhs = -psi(q, 0.125) - psi(q, 0.375) + psi(q, 0.625) + psi(q, 0.875);
        let g = gamma_quarter();
        let rhs = 4.0 * PI + ((2.0 + SQRT_2) / PI).sqrt() * g * g;
        assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn doubled_base_four_term_combination() {
        // Same combination at q = e^{16π}:
        // 8π + √((3+2√2+2√(4+3√2))/π)·Γ²(1/4).
        let q = (16.0 * PI).exp();
        let lhs = -psi(q, 0.125) - psi(q, 0.375) + psi(q, 0.625) + psi(q, 0.875);
        let g = gamma_quarter();
        let inner = 3.0 + 2.0 * SQRT_2 + 2.0 * (4.0 + 3.0 * SQRT_2).sqrt();
        let rhs = 8.0 * PI + (inner / PI).sqrt() * g * g;
        assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn complex_shifted_combination() {
        // ψ_q((1-i)/8) + ψ_q((3-i)/8) - ψ_q((5-i)/8) - ψ_q((7-i)/8) with
        // q = e^{8π} equals -4π - √((1+√2)/π)·Γ²(1/4).
        let q = (8.0 * PI).exp();
        let shift = Complex64::new(0.0, -0.125);
        let lhs = psi_c(q, Complex64::new(0.125, 0.0) + shift)
            + psi_c(q, Complex64::new(0.375, 0.0) + shift)
            - psi_c(q, Complex64::new(0.625, 0.0) + shift)
            - psi_c(q, Complex64::new(0.875, 0.0) + shift);
        let g = gamma_quarter();
        let rhs = Complex64::new(-4.0 * PI - ((1.0 + SQRT_2) / PI).sqrt() * g * g, 0.0);
        assert!((lhs - rhs).norm() <= 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn complex_half_argument_difference() {
        // ψ_q((1-i)/2) - ψ_q((1+i)/2) with q = e^π equals
        // -iπ - i·Γ²(1/4)/(4√(2π)).
        let q = PI.exp();
        let lhs = psi_c(q, Complex64::new(0.5, -0.5)) - psi_c(q, Complex64::new(0.5, 0.5));
        let g = gamma_quarter();
        let rhs = Complex64::new(0.0, -PI - g * g / (4.0 * (2.0 * PI).sqrt()));
        assert!((lhs - rhs).norm() <= 1e-9, "{lhs} vs {rhs}");
    }
}
