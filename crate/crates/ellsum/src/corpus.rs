//! Declarative identity corpus: each record pairs a closed-form expression
//! with a hyperbolic-sum specification, a modulus selector, and a tolerance.
//! The verification engine evaluates both sides and reports pass/fail.
//!
//! Records that hold for every modulus appear several times, once per probe
//! modulus (two generic k plus the singular values where a Γ(1/4) closed
//! form exists), so one corpus run covers both the generic statements and
//! their lemniscatic specializations.

use std::fmt;
use std::path::Path;

use crate::closedform::{self, Expr};
use crate::elliptic::{build_context, EllipticContext, Modulus};
use crate::error::{Error, Result};
use crate::hypersum::{
    self, berndt_combination, IndexFamily, Kernel, Scale, SignPattern, SumSpec,
};
use crate::singular::singular_modulus;

/// Named multi-series combinations that cannot be written as one `SumSpec`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinSum {
    /// 2·Σ (-1)ⁿ/(e^{(2n+1)πK'/K}+1) + Σ sech((2n+1)πK'/(2K)).
    BerndtCombination,
}

/// Right-hand side of an identity: a single series or a named combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhsSpec {
    Sum(SumSpec),
    Builtin(BuiltinSum),
}

/// Where to evaluate the identity: a singular value K'/K = √r, or a literal
/// modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusSelector {
    SingularR(u32),
    K(f64),
}

/// One verifiable identity.
#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs_text: String,
    pub lhs: Expr,
    pub rhs: RhsSpec,
    pub modulus: ModulusSelector,
    pub tol: f64,
    pub anchor: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// Outcome of verifying one record.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub id: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub terms_used: usize,
    pub status: Status,
    pub message: Option<String>,
}

/// Build the context a record's modulus selector describes.
pub fn context_for(selector: &ModulusSelector) -> Result<EllipticContext> {
    let k = match selector {
        ModulusSelector::SingularR(r) => singular_modulus(*r)?.k_r,
        ModulusSelector::K(k) => *k,
    };
    Ok(build_context(&Modulus::new(k)?))
}

/// Verify one record. Evaluation failures surface as `Status::Error`, never
/// as a panic.
pub fn verify(record: &IdentityRecord, tol_override: Option<f64>) -> VerificationReport {
    let tol = tol_override.unwrap_or(record.tol);
    let mut report = VerificationReport {
        id: record.id.clone(),
        lhs_value: f64::NAN,
        rhs_value: f64::NAN,
        abs_err: f64::NAN,
        rel_err: f64::NAN,
        terms_used: 0,
        status: Status::Error,
        message: None,
    };
    let outcome = (|| -> Result<()> {
        let ctx = context_for(&record.modulus)?;
        report.lhs_value = closedform::eval(&record.lhs, &ctx)?;
        let series_tol = (tol / 4.0).clamp(1e-15, 1e-10);
        let sum = match &record.rhs {
            RhsSpec::Sum(spec) => hypersum::evaluate(spec, &ctx, series_tol)?,
            RhsSpec::Builtin(BuiltinSum::BerndtCombination) => {
                berndt_combination(&ctx, series_tol)?
            }
        };
        report.rhs_value = sum.value;
        report.terms_used = sum.terms_used;
        report.abs_err = (report.lhs_value - report.rhs_value).abs();
        report.rel_err =
            report.abs_err / report.lhs_value.abs().max(report.rhs_value.abs()).max(f64::MIN_POSITIVE);
        report.status = if report.abs_err <= tol || report.rel_err <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Ok(())
    })();
    if let Err(e) = outcome {
        report.status = Status::Error;
        report.message = Some(e.to_string());
    }
    report
}

/// Verify every record in order.
pub fn verify_all(records: &[IdentityRecord], tol_override: Option<f64>) -> Vec<VerificationReport> {
    records.iter().map(|r| verify(r, tol_override)).collect()
}

fn sum_spec(index: IndexFamily, power: u32, sign: SignPattern, kernel: Kernel, scale: (u32, u32)) -> RhsSpec {
    RhsSpec::Sum(SumSpec {
        index,
        power,
        sign,
        kernel,
        scale: Scale::new(scale.0, scale.1).expect("static scale"),
    })
}

fn record(
    id: &str,
    lhs: &str,
    rhs: RhsSpec,
    modulus: ModulusSelector,
    tol: f64,
    anchor: &str,
) -> IdentityRecord {
    IdentityRecord {
        id: id.to_string(),
        lhs_text: lhs.to_string(),
        lhs: closedform::parse(lhs).expect("built-in lhs expressions are well-formed"),
        rhs,
        modulus,
        tol,
        anchor: anchor.to_string(),
    }
}

const TOL_REL: f64 = 1e-9;
const TOL_ZERO: f64 = 1e-12;

/// The built-in corpus. Generic identities are instantiated at k = 0.3 and
/// k = 0.77 (plus k = 0.6 for the two modulus-derivative families), and the
/// lemniscatic (r = 1) and r = 4 specializations carry Γ(1/4) closed forms.
pub fn builtin_corpus() -> Vec<IdentityRecord> {
    use IndexFamily::{All, Odd};
    use Kernel::{Csch, Csch2, InvExpm1, InvExpp1, Sech, Sech2};
    use ModulusSelector::{SingularR, K};
    use SignPattern::{Alt, Alt2, None as NoSign};

    let mut out = Vec::new();

    // Alternating weighted sech sums: Σ (-1)ⁿ(2n+1) sech((2n+1)πK'/(2K)).
    let lhs = "2*k*kp*K^2/pi^2";
    let anchor = "Ramanujan, 2nd notebook (Berndt, Part III, ch. 17): alternating (2n+1)·sech sum";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77)), ("r1", SingularR(1))] {
        out.push(record(
            &format!("sech-weighted-{suffix}"),
            lhs,
            sum_spec(Odd, 1, Alt, Sech, (1, 2)),
            m,
            TOL_REL,
            anchor,
        ));
    }

    // Zucker's alternating csch sums J0 and J2.
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("zucker-j0-{suffix}"),
            "k*K/pi",
            sum_spec(Odd, 0, Alt, Csch, (1, 2)),
            m,
            TOL_REL,
            "Zucker (1979): J0 alternating csch sum",
        ));
        out.push(record(
            &format!("zucker-j2-{suffix}"),
            "(2*K/pi)^3*k*(1-k^2)/2",
            sum_spec(Odd, 2, Alt, Csch, (1, 2)),
            m,
            TOL_REL,
            "Zucker (1979): J2 alternating csch sum",
        ));
    }

    // Σ (-1)ⁿ/(e^{(2n+1)πK'/K}-1) = K/(2π) - 1/4.
    let anchor = "Bagis: alternating exponential sum equal to K/(2π)-1/4";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77)), ("r1", SingularR(1))] {
        out.push(record(
            &format!("bagis-{suffix}"),
            "K/(2*pi) - 1/4",
            sum_spec(Odd, 0, Alt, InvExpm1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }

    // d/dk of the Bagis series: Σ (-1)ⁿ(2n+1) csch²((2n+1)πK'/(2K)).
    let lhs = "2*K^2*(E+(k^2-1)*K)/(pi^2*(Kp*(E-K)+Ep*K))";
    for (suffix, m) in [("k03", K(0.3)), ("k06", K(0.6)), ("k077", K(0.77))] {
        out.push(record(
            &format!("dc-dk-csch2-{suffix}"),
            lhs,
            sum_spec(Odd, 1, Alt, Csch2, (1, 2)),
            m,
            TOL_REL,
            "term-by-term modulus derivative of the Bagis series",
        ));
    }

    // s = 2 generalization: Σ (-1)ⁿ(2n+1)²/(e^{(2n+1)πK'/K}-1).
    let anchor = "Zucker-type s=2 extension of the alternating exponential sum";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("exp-s2-{suffix}"),
            "1/4 + 2*(k^2-1)*K^3/pi^3",
            sum_spec(Odd, 2, Alt, InvExpm1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "exp-s2-r1",
        "1/4 - gamma4^6/(64*pi^(9/2))",
        sum_spec(Odd, 2, Alt, InvExpm1, (1, 1)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "exp-s2-r4",
        "1/4 - (1+sqrt(2))*gamma4^6/(128*pi^(9/2))",
        sum_spec(Odd, 2, Alt, InvExpm1, (1, 1)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // s = 3 alternating csch² family.
    let anchor = "s=3 alternating csch² sum from the second modulus derivative";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("csch2-s3-{suffix}"),
            "8*(k^2-1)*K^4*(3*E+(k^2-3)*K)/(pi^4*(Kp*(E-K)+Ep*K))",
            sum_spec(Odd, 3, Alt, Csch2, (1, 2)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "csch2-s3-r1",
        "gamma4^10/(128*pi^(15/2)) - 3*gamma4^6/(32*pi^(11/2))",
        sum_spec(Odd, 3, Alt, Csch2, (1, 2)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "csch2-s3-r4",
        "(2+sqrt(2))*gamma4^10/(1024*pi^(15/2)) - 3*(1+sqrt(2))*gamma4^6/(128*pi^(11/2))",
        sum_spec(Odd, 3, Alt, Csch2, (1, 2)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // Period-4 sign pattern on 1/(e^{(2n+1)πK'/K}-1).
    let anchor = "alt2-signed exponential sum from the dc expansion at w=1/4";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("half-arg-exp-{suffix}"),
            "(sqrt(1-k)+sqrt(1+k))*K/(2*pi) - 1/2",
            sum_spec(Odd, 0, Alt2, InvExpm1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "half-arg-exp-r1",
        "sqrt(2+sqrt(2))*gamma4^2/(8*pi^(3/2)) - 1/2",
        sum_spec(Odd, 0, Alt2, InvExpm1, (1, 1)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "half-arg-exp-r4",
        "sqrt(3+2*sqrt(2)+2*sqrt(4+3*sqrt(2)))*gamma4^2/(16*pi^(3/2)) - 1/2",
        sum_spec(Odd, 0, Alt2, InvExpm1, (1, 1)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // alt2-signed (2n+1)·csch² family.
    let anchor = "alt2-signed (2n+1)·csch² sum (k-derivative of the half-argument series)";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("half-arg-csch2-{suffix}"),
            "2*k*(k^2-1)*K^2*((sqrt(1-k)+sqrt(1+k))*(E+(k^2-1)*K)/(k*(k^2-1)) - (1/sqrt(1+k) - 1/sqrt(1-k))*K/2)/(pi^2*(Ep*K+(E-K)*Kp))",
            sum_spec(Odd, 1, Alt2, Csch2, (1, 2)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "half-arg-csch2-r1",
        "sqrt(2+sqrt(2))*gamma4^2/(4*pi^(5/2)) - sqrt(2-sqrt(2))*gamma4^6/(64*pi^(9/2))",
        sum_spec(Odd, 1, Alt2, Csch2, (1, 2)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "half-arg-csch2-r4",
        "(sqrt(1+sqrt(2))+sqrt(2+sqrt(2)))*gamma4^2/(16*pi^(5/2)) - sqrt(4+sqrt(2)+2^(7/4))*gamma4^6/(256*pi^(9/2))",
        sum_spec(Odd, 1, Alt2, Csch2, (1, 2)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // Nanjundiah's csch² sum.
    out.push(record(
        "nanjundiah",
        "1/6 - 1/(2*pi)",
        sum_spec(All, 0, NoSign, Csch2, (1, 1)),
        SingularR(1),
        TOL_REL,
        "Nanjundiah (1951): Σ csch²(nπ) = 1/6 - 1/(2π)",
    ));

    // alt2-signed s = 2 exponential family.
    let anchor = "alt2-signed s=2 exponential sum (second u-derivative at the half period)";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("half-arg-s2-{suffix}"),
            "3/2 + 4*(k^2*(3+kp) - 3*(1+kp))*K^3/((sqrt(1-k)+sqrt(1+k))*pi^3)",
            sum_spec(Odd, 2, Alt2, InvExpm1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "half-arg-s2-r1",
        "3/2 - sqrt(26+17*sqrt(2))*gamma4^6/(64*pi^(9/2))",
        sum_spec(Odd, 2, Alt2, InvExpm1, (1, 1)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "half-arg-s2-r4",
        "3/2 - sqrt(54+37*sqrt(2)+4*sqrt(352+249*sqrt(2)))*gamma4^6/(128*pi^(9/2))",
        sum_spec(Odd, 2, Alt2, InvExpm1, (1, 1)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // alt2-signed s = 3 csch² family.
    let anchor = "alt2-signed s=3 csch² sum (mixed u- and k-derivatives at the half period)";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("half-arg-s3-{suffix}"),
            "4*kp*K^4*(6*(k*(k*(sqrt(1-k)+sqrt(1+k))-3*sqrt(1-k)+3*sqrt(1+k))-6*(sqrt(1-k)+sqrt(1+k)))*E + (36*(sqrt(1-k)+sqrt(1+k))+k*(18*(sqrt(1-k)-sqrt(1+k))+k*(k*(k*(sqrt(1-k)+sqrt(1+k))-8*sqrt(1-k)+8*sqrt(1+k))-23*(sqrt(1-k)+sqrt(1+k)))))*K)/(pi^4*(kp+1)*(Kp*(E-K)+Ep*K))",
            sum_spec(Odd, 3, Alt2, Csch2, (1, 2)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "half-arg-s3-r1",
        "sqrt(218+151*sqrt(2))*gamma4^10/(512*pi^(15/2)) - 3*sqrt(26+17*sqrt(2))*gamma4^6/(32*pi^(11/2))",
        sum_spec(Odd, 3, Alt2, Csch2, (1, 2)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "half-arg-s3-r4",
        "sqrt(402+287*sqrt(2)+4*sqrt(20296+14358*sqrt(2)))*gamma4^10/(2048*pi^(15/2)) - 3*sqrt(54+37*sqrt(2)+4*sqrt(352+249*sqrt(2)))*gamma4^6/(128*pi^(11/2))",
        sum_spec(Odd, 3, Alt2, Csch2, (1, 2)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // Alternating 1/(e^x+1) sum from the nc expansion.
    let anchor = "alternating 1/(e^x+1) sum from the nc expansion at w=0";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("nc-exp-{suffix}"),
            "1/4 - sqrt(1-k^2)*K/(2*pi)",
            sum_spec(Odd, 0, Alt, InvExpp1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "nc-exp-r1",
        "1/4 - gamma4^2/(8*sqrt(2)*pi^(3/2))",
        sum_spec(Odd, 0, Alt, InvExpp1, (1, 1)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));

    // Alternating (2n+1)·sech² family (k-derivative of the nc sum).
    for (suffix, m) in [("k03", K(0.3)), ("k06", K(0.6)), ("k077", K(0.77))] {
        out.push(record(
            &format!("nc-dk-sech2-{suffix}"),
            "2*kp*K^2*(K-E)/(pi^2*(Kp*(E-K)+Ep*K))",
            sum_spec(Odd, 1, Alt, Sech2, (1, 2)),
            m,
            TOL_REL,
            "term-by-term modulus derivative of the alternating nc exponential sum",
        ));
    }

    // Berndt's two-series combination equal to 1/2 at the lemniscatic point.
    out.push(record(
        "berndt-combination",
        "1/2",
        RhsSpec::Builtin(BuiltinSum::BerndtCombination),
        SingularR(1),
        TOL_REL,
        "Berndt (1978): 2·Σ(-1)ⁿ/(e^{(2n+1)π}+1) + Σ sech((2n+1)π/2) = 1/2",
    ));

    // Σ sech((2n+1)π/2) = Γ²(1/4)/(4√2·π^{3/2}).
    out.push(record(
        "sech-sum-r1",
        "gamma4^2/(4*sqrt(2)*pi^(3/2))",
        sum_spec(Odd, 0, NoSign, Sech, (1, 2)),
        SingularR(1),
        TOL_REL,
        "Ramanujan/Berndt: lemniscatic sech sum over positive odd half-multiples of π",
    ));

    // alt2-signed 1/(e^x+1) family.
    let anchor = "alt2-signed 1/(e^x+1) sum from the nc expansion at w=1/4";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("nc-half-arg-{suffix}"),
            "1/2 - sqrt(kp)*(sqrt(1-k)+sqrt(1+k))*K/(2*pi)",
            sum_spec(Odd, 0, Alt2, InvExpp1, (1, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "nc-half-arg-r1",
        "1/2 - sqrt(1+sqrt(2))*gamma4^2/(8*pi^(3/2))",
        sum_spec(Odd, 0, Alt2, InvExpp1, (1, 1)),
        SingularR(1),
        TOL_REL,
        anchor,
    ));
    out.push(record(
        "nc-half-arg-r4",
        "1/2 - sqrt((2*sqrt(2)+sqrt(4+3*sqrt(2)))/2)*gamma4^2/(8*pi^(3/2))",
        sum_spec(Odd, 0, Alt2, InvExpp1, (1, 1)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    // alt2-signed (2n+1)·sech² family.
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("nc-half-arg-sech2-{suffix}"),
            "K^2*sqrt(kp)*((k*(sqrt(1-k)-sqrt(1+k))+2*(sqrt(1-k)+sqrt(1+k)))*K - 2*(sqrt(1-k)+sqrt(1+k))*E)/(pi^2*(Kp*(E-K)+Ep*K))",
            sum_spec(Odd, 1, Alt2, Sech2, (1, 2)),
            m,
            TOL_REL,
            "alt2-signed (2n+1)·sech² sum (k-derivative of the alt2 nc series)",
        ));
    }

    // Σ_{n≥1} sech(nπ) = Γ²(1/4)/(4π^{3/2}) - 1/2.
    out.push(record(
        "sech-all-r1",
        "gamma4^2/(4*pi^(3/2)) - 1/2",
        sum_spec(All, 0, NoSign, Sech, (1, 1)),
        SingularR(1),
        TOL_REL,
        "Ramanujan: Σ_{n≥1} sech(nπ)",
    ));

    // Vanishing alternating sech sums with s = 4m-1.
    for (suffix, power) in [("m1", 3), ("m2", 7)] {
        out.push(record(
            &format!("sech-zero-{suffix}"),
            "0",
            sum_spec(Odd, power, Alt, Sech, (1, 2)),
            SingularR(1),
            TOL_ZERO,
            "Ramanujan: Σ(-1)ⁿ(2n+1)^{4m-1} sech((2n+1)π/2) = 0",
        ));
    }

    // Xu's motivating weighted sech/sech² sums.
    out.push(record(
        "xu-sech-s2",
        "gamma4^6/(16*sqrt(2)*pi^(9/2))",
        sum_spec(Odd, 2, NoSign, Sech, (1, 2)),
        SingularR(1),
        TOL_REL,
        "Xu (2018) motivating sum: Σ(2n+1)² sech((2n+1)π/2)",
    ));
    out.push(record(
        "xu-sech2-s2",
        "gamma4^8/(192*pi^6)",
        sum_spec(Odd, 2, NoSign, Sech2, (1, 2)),
        SingularR(1),
        TOL_REL,
        "Xu (2018) motivating sum: Σ(2n+1)² sech²((2n+1)π/2)",
    ));

    // Σ sech²((2n+1)π/2) over n ≥ 0. The classical statement over all odd
    // integers equals 1/π; restricted to positive odd integers it is half
    // of that.
    out.push(record(
        "berndt-sech2",
        "1/(2*pi)",
        sum_spec(Odd, 0, NoSign, Sech2, (1, 2)),
        SingularR(1),
        TOL_REL,
        "Berndt (1978)/Nanjundiah/Ling: sech² sum over positive odd indices, half the two-sided value 1/π",
    ));

    // Σ_{n≥1} (-1)ⁿ n csch(nπ) = -1/(4π).
    out.push(record(
        "alt-csch-weighted",
        "-1/(4*pi)",
        sum_spec(All, 1, Alt, Csch, (1, 1)),
        SingularR(1),
        TOL_REL,
        "Berndt: Σ(-1)^{n+1} n·csch(nπ) = 1/(4π), sign-flipped to the (-1)ⁿ convention",
    ));

    // Ramanujan's 1/(e^{2πn}-1) sums.
    out.push(record(
        "ramanujan-n",
        "1/24 - 1/(8*pi)",
        sum_spec(All, 1, NoSign, InvExpm1, (2, 1)),
        SingularR(1),
        TOL_ZERO,
        "Ramanujan: Σ n/(e^{2πn}-1) = 1/24 - 1/(8π)",
    ));
    out.push(record(
        "ramanujan-n13",
        "1/24",
        sum_spec(All, 13, NoSign, InvExpm1, (2, 1)),
        SingularR(1),
        TOL_ZERO,
        "Ramanujan: Σ n¹³/(e^{2πn}-1) = 1/24",
    ));

    // Alternating n²·csch² sum from the ns² expansion.
    let anchor = "alternating n²·csch² sum from the ns² expansion at the half period";
    for (suffix, m) in [("k03", K(0.3)), ("k077", K(0.77))] {
        out.push(record(
            &format!("ns2-{suffix}"),
            "-K^2*(2*E*K*kp + E^2 + K^2*(k^2*(kp+1) - 2*kp - 1))/(4*pi^3*(Kp*(E-K)+Ep*K))",
            sum_spec(All, 2, Alt, Csch2, (2, 1)),
            m,
            TOL_REL,
            anchor,
        ));
    }
    out.push(record(
        "ns2-r4",
        "-1/(32*pi^2) - (1+sqrt(2))*gamma4^4/(128*pi^4) + (1+sqrt(2))*gamma4^8/(2048*pi^6)",
        sum_spec(All, 2, Alt, Csch2, (1, 1)),
        SingularR(4),
        TOL_REL,
        anchor,
    ));

    out
}

// ---------------------------------------------------------------------------
// Text serialization: one block of `key: value` lines per record, blocks
// separated by blank lines.
// ---------------------------------------------------------------------------

fn render_rhs(rhs: &RhsSpec) -> String {
    match rhs {
        RhsSpec::Sum(s) => format!(
            "sum index={} s={} sign={} kernel={} scale={}",
            s.index, s.power, s.sign, s.kernel, s.scale
        ),
        RhsSpec::Builtin(BuiltinSum::BerndtCombination) => "builtin:berndt_combination".into(),
    }
}

fn render_modulus(m: &ModulusSelector) -> String {
    match m {
        ModulusSelector::SingularR(r) => format!("r={r}"),
        ModulusSelector::K(k) => format!("k={k}"),
    }
}

/// Serialize records in the corpus file format.
pub fn render_corpus(records: &[IdentityRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("id: {}\n", r.id));
        out.push_str(&format!("lhs: {}\n", r.lhs_text));
        out.push_str(&format!("rhs: {}\n", render_rhs(&r.rhs)));
        out.push_str(&format!("modulus: {}\n", render_modulus(&r.modulus)));
        out.push_str(&format!("tol: {:e}\n", r.tol));
        out.push_str(&format!("anchor: {}\n", r.anchor));
    }
    out
}

fn parse_rhs(value: &str, line: usize) -> Result<RhsSpec> {
    let fmt_err = |message: String| Error::Format { line, message };
    if let Some(rest) = value.strip_prefix("builtin:") {
        return match rest.trim() {
            "berndt_combination" => Ok(RhsSpec::Builtin(BuiltinSum::BerndtCombination)),
            other => Err(fmt_err(format!("unknown builtin '{other}'"))),
        };
    }
    let Some(rest) = value.strip_prefix("sum ") else {
        return Err(fmt_err(format!("rhs must start with 'sum' or 'builtin:', got '{value}'")));
    };
    let mut index = None;
    let mut power = None;
    let mut sign = None;
    let mut kernel = None;
    let mut scale = None;
    for field in rest.split_whitespace() {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| fmt_err(format!("expected key=value, got '{field}'")))?;
        match key {
            "index" => index = Some(val.parse::<IndexFamily>().map_err(|e| fmt_err(e.to_string()))?),
            "s" => {
                power = Some(
                    val.parse::<u32>()
                        .map_err(|_| fmt_err(format!("invalid power '{val}'")))?,
                )
            }
            "sign" => sign = Some(val.parse::<SignPattern>().map_err(|e| fmt_err(e.to_string()))?),
            "kernel" => kernel = Some(val.parse::<Kernel>().map_err(|e| fmt_err(e.to_string()))?),
            "scale" => scale = Some(val.parse::<Scale>().map_err(|e| fmt_err(e.to_string()))?),
            other => return Err(fmt_err(format!("unknown sum field '{other}'"))),
        }
    }
    let missing = |name: &str| fmt_err(format!("sum spec is missing '{name}'"));
    Ok(RhsSpec::Sum(SumSpec {
        index: index.ok_or_else(|| missing("index"))?,
        power: power.ok_or_else(|| missing("s"))?,
        sign: sign.ok_or_else(|| missing("sign"))?,
        kernel: kernel.ok_or_else(|| missing("kernel"))?,
        scale: scale.ok_or_else(|| missing("scale"))?,
    }))
}

fn parse_modulus(value: &str, line: usize) -> Result<ModulusSelector> {
    let fmt_err = |message: String| Error::Format { line, message };
    if let Some(r) = value.strip_prefix("r=") {
        return Ok(ModulusSelector::SingularR(
            r.parse().map_err(|_| fmt_err(format!("invalid singular index '{r}'")))?,
        ));
    }
    if let Some(k) = value.strip_prefix("k=") {
        return Ok(ModulusSelector::K(
            k.parse().map_err(|_| fmt_err(format!("invalid modulus '{k}'")))?,
        ));
    }
    Err(fmt_err(format!("modulus must be 'r=N' or 'k=X', got '{value}'")))
}

/// Parse corpus text. Line numbers in errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<IdentityRecord>> {
    #[derive(Default)]
    struct Partial {
        id: Option<(String, usize)>,
        lhs: Option<String>,
        rhs: Option<RhsSpec>,
        modulus: Option<ModulusSelector>,
        tol: Option<f64>,
        anchor: Option<String>,
    }
    let mut records = Vec::new();
    let mut cur = Partial::default();
    let mut finish = |cur: &mut Partial| -> Result<()> {
        let Some((id, start_line)) = cur.id.take() else {
            return if cur.lhs.is_none()
                && cur.rhs.is_none()
                && cur.modulus.is_none()
                && cur.tol.is_none()
                && cur.anchor.is_none()
            {
                Ok(())
            } else {
                Err(Error::Format {
                    line: 0,
                    message: "record without an 'id' line".into(),
                })
            };
        };
        let missing = |name: &str| Error::Format {
            line: start_line,
            message: format!("record '{id}' is missing '{name}'"),
        };
        let lhs_text = cur.lhs.take().ok_or_else(|| missing("lhs"))?;
        let lhs = closedform::parse(&lhs_text)?;
        let rhs = cur.rhs.take().ok_or_else(|| missing("rhs"))?;
        let modulus = cur.modulus.take().ok_or_else(|| missing("modulus"))?;
        let tol = cur.tol.take().ok_or_else(|| missing("tol"))?;
        let anchor = cur.anchor.take().ok_or_else(|| missing("anchor"))?;
        records.push(IdentityRecord {
            id,
            lhs_text,
            lhs,
            rhs,
            modulus,
            tol,
            anchor,
        });
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            finish(&mut cur)?;
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| Error::Format {
            line: line_no,
            message: format!("expected 'key: value', got '{line}'"),
        })?;
        let value = value.trim();
        match key.trim() {
            "id" => {
                if cur.id.is_some() {
                    finish(&mut cur)?;
                }
                cur.id = Some((value.to_string(), line_no));
            }
            "lhs" => cur.lhs = Some(value.to_string()),
            "rhs" => cur.rhs = Some(parse_rhs(value, line_no)?),
            "modulus" => cur.modulus = Some(parse_modulus(value, line_no)?),
            "tol" => {
                cur.tol = Some(value.parse().map_err(|_| Error::Format {
                    line: line_no,
                    message: format!("invalid tolerance '{value}'"),
                })?)
            }
            "anchor" => cur.anchor = Some(value.to_string()),
            other => {
                return Err(Error::Format {
                    line: line_no,
                    message: format!("unknown key '{other}'"),
                })
            }
        }
    }
    finish(&mut cur)?;
    Ok(records)
}

/// Load a corpus file from disk.
pub fn load_corpus(path: &Path) -> Result<Vec<IdentityRecord>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_large_and_ids_are_unique() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 30, "only {} records", corpus.len());
        let mut ids: Vec<_> = corpus.iter().map(|r| r.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), corpus.len(), "duplicate record ids");
        for r in &corpus {
            assert!(r.tol > 0.0);
            assert!(!r.anchor.is_empty());
        }
    }

    #[test]
    fn bagis_record_passes() {
        let corpus = builtin_corpus();
        let rec = corpus.iter().find(|r| r.id == "bagis-r1").unwrap();
        let report = verify(rec, None);
        assert_eq!(report.status, Status::Pass, "{:?}", report.message);
        assert!(report.abs_err < 1e-11);
    }

    #[test]
    fn full_corpus_passes() {
        let reports = verify_all(&builtin_corpus(), None);
        for r in &reports {
            assert_eq!(
                r.status,
                Status::Pass,
                "{}: lhs={} rhs={} abs={} rel={} msg={:?}",
                r.id,
                r.lhs_value,
                r.rhs_value,
                r.abs_err,
                r.rel_err,
                r.message
            );
        }
    }

    #[test]
    fn perturbed_record_fails() {
        let corpus = builtin_corpus();
        let rec = corpus.iter().find(|r| r.id == "sech-sum-r1").unwrap();
        let mut bad = rec.clone();
        bad.lhs_text = format!("({}) + 1/1000", bad.lhs_text);
        bad.lhs = closedform::parse(&bad.lhs_text).unwrap();
        assert_eq!(verify(&bad, None).status, Status::Fail);
    }

    #[test]
    fn unknown_singular_index_is_reported_not_panicked() {
        let rec = record(
            "broken",
            "1/2",
            RhsSpec::Builtin(BuiltinSum::BerndtCombination),
            ModulusSelector::SingularR(0),
            1e-9,
            "invalid on purpose",
        );
        let report = verify(&rec, None);
        assert_eq!(report.status, Status::Error);
        assert!(report.message.is_some());
    }

    #[test]
    fn render_parse_round_trip() {
        let corpus = builtin_corpus();
        let text = render_corpus(&corpus);
        let reparsed = parse_corpus(&text).unwrap();
        assert_eq!(reparsed.len(), corpus.len());
        for (a, b) in corpus.iter().zip(&reparsed) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.lhs_text, b.lhs_text);
            assert_eq!(a.lhs, b.lhs);
            assert_eq!(a.rhs, b.rhs);
            assert_eq!(a.modulus, b.modulus);
            assert_eq!(a.tol, b.tol);
            assert_eq!(a.anchor, b.anchor);
        }
    }

    #[test]
    fn shipped_corpus_matches_builtin() {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus.txt");
        let shipped = load_corpus(&path).unwrap();
        let builtin = builtin_corpus();
        assert_eq!(shipped.len(), builtin.len());
        for (a, b) in builtin.iter().zip(&shipped) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.lhs_text, b.lhs_text);
            assert_eq!(a.rhs, b.rhs);
            assert_eq!(a.modulus, b.modulus);
        }
    }

    #[test]
    fn format_errors_carry_line_numbers() {
        let text = "id: x\nlhs: 1/2\nrhs: sum index=odd s=0 sign=alt kernel=bogus scale=1\nmodulus: r=1\ntol: 1e-9\nanchor: t\n";
        match parse_corpus(text) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected format error, got {other:?}"),
        }
        let text = "id: x\nlhs: 1/2\nrhs: builtin:berndt_combination\nmodulus: r=1\ntol: 1e-9\nanchor: t\nbogus: y\n";
        match parse_corpus(text) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_an_error() {
        let text = "id: x\nlhs: 1/2\nmodulus: r=1\ntol: 1e-9\nanchor: t\n";
        assert!(matches!(parse_corpus(text), Err(Error::Format { .. })));
    }

    #[test]
    fn empty_input_parses_to_empty_corpus() {
        assert!(parse_corpus("").unwrap().is_empty());
        assert!(parse_corpus("\n\n").unwrap().is_empty());
    }
}
