//! Term-by-term closed forms for NZR and SOP.
//!
//! Shorthands: `s = σ_E λ_E`, `d = σ_D λ_D`, `ρ = 2^R_th`, `b = d(ρ − 1)`.
//! The SOP expressions carry two ambiguous constants, selectable through
//! [`SopReading`]: the composite `a` and the single-argument gamma term
//! `γ(n+1)`.

use super::{Metric, MetricSource, MetricValue};
use crate::error::{Error, Result};
use crate::model::{KnowledgeMode, SystemParams};
use crate::special::{
    binomial, exp_integral_ei, factorial_f64, lower_incomplete_gamma, upper_incomplete_gamma, MAX_EXACT_FACTORIAL,
};

/// Which composite constant `a` the SOP closed forms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AConstant {
    /// `a = ρσ_Dλ_D + σ_Dλ_D`
    DestinationOnly,
    /// `a = ρσ_Dλ_D + σ_Eλ_E`
    DestinationEavesdropper,
}

/// How the single-argument `γ(n+1)` term is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaTerm {
    /// Complete gamma, `Γ(n+1) = n!`.
    Complete,
    /// Lower incomplete gamma at the threshold constant, `γ(n+1, b)`.
    LowerAtB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SopReading {
    pub a: AConstant,
    pub gamma: GammaTerm,
}

impl SopReading {
    /// The reading used by [`sop_closed_form`].
    pub const PRIMARY: SopReading = SopReading {
        a: AConstant::DestinationOnly,
        gamma: GammaTerm::Complete,
    };

    pub const ALL: [SopReading; 4] = [
        SopReading::PRIMARY,
        SopReading {
            a: AConstant::DestinationOnly,
            gamma: GammaTerm::LowerAtB,
        },
        SopReading {
            a: AConstant::DestinationEavesdropper,
            gamma: GammaTerm::Complete,
        },
        SopReading {
            a: AConstant::DestinationEavesdropper,
            gamma: GammaTerm::LowerAtB,
        },
    ];

    /// Short stable tag, e.g. `a=dd;gamma=complete`.
    pub fn tag(&self) -> &'static str {
        match (self.a, self.gamma) {
            (AConstant::DestinationOnly, GammaTerm::Complete) => "a=dd;gamma=complete",
            (AConstant::DestinationOnly, GammaTerm::LowerAtB) => "a=dd;gamma=lower",
            (AConstant::DestinationEavesdropper, GammaTerm::Complete) => "a=de;gamma=complete",
            (AConstant::DestinationEavesdropper, GammaTerm::LowerAtB) => "a=de;gamma=lower",
        }
    }
}

impl Default for SopReading {
    fn default() -> Self {
        SopReading::PRIMARY
    }
}

/// Constants shared by the SOP closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormContext {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    /// `σ_E λ_E`
    pub s: f64,
    /// `σ_D λ_D`
    pub d: f64,
    sigma_ratio: f64,
    sigma_e: f64,
}

impl ClosedFormContext {
    pub fn new(p: &SystemParams, a: AConstant) -> Self {
        let rho = p.rho();
        let s = p.sigma_e() * p.lambda_e();
        let d = p.sigma_d() * p.lambda_d();
        let a = match a {
            AConstant::DestinationOnly => rho * d + d,
            AConstant::DestinationEavesdropper => rho * d + s,
        };
        Self {
            rho,
            a,
            b: d * (rho - 1.0),
            s,
            d,
            sigma_ratio: p.sigma_d() / p.sigma_e(),
            sigma_e: p.sigma_e(),
        }
    }

    /// `χ(x) = (ρx + σ_E(ρ − 1))·σ_D/σ_E`, the destination gain at the edge
    /// of the outage region for eavesdropper gain `x`.
    pub fn chi(&self, x: f64) -> f64 {
        (self.rho * x + self.sigma_e * (self.rho - 1.0)) * self.sigma_ratio
    }
}

fn check_budget(p: &SystemParams) -> Result<()> {
    // the sums use factorials up to K!
    if p.k() > MAX_EXACT_FACTORIAL {
        return Err(Error::Overflow("closed form (K too large)"));
    }
    Ok(())
}

fn choose(n: u32, k: u32) -> Result<f64> {
    Ok(binomial(n, k)? as f64)
}

fn sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

// Σ_{i=1}^{n} (−1)^{n−i} (n−i)!(i−1)!/n! + (−1)^n/(n+1)
fn harmonic_like(n: u32) -> f64 {
    let nf = factorial_f64(n);
    let mut acc = 0.0;
    for i in 1..=n {
        acc += sign((n - i) as i64) * factorial_f64(n - i) * factorial_f64(i - 1) / nf;
    }
    acc + sign(n as i64) / (n as f64 + 1.0)
}

/// Closed-form NZR.
pub fn nzr_closed_form(p: &SystemParams, mode: KnowledgeMode) -> Result<MetricValue> {
    check_budget(p)?;
    let k = p.k();
    let delta = p.delta();
    let s = p.sigma_e() * p.lambda_e();
    let d = p.sigma_d() * p.lambda_d();
    let sd = s + d;
    let value = match mode {
        KnowledgeMode::Available => {
            let mut pz = (1.0 - delta).powi(k as i32) + k as f64 * delta * (1.0 - delta).powi(k as i32 - 1) * d / sd;
            for q in 1..=k {
                for n in 1..q {
                    let nf = n as f64;
                    let inner = -(1.0 / nf) * (-s.powi(n as i32) + sd.powi(n as i32))
                        + (sd.powi(n as i32 + 1) / s - s.powi(n as i32)) * harmonic_like(n);
                    pz += choose(k, q)?
                        * choose(q - 1, n)?
                        * sign(n as i64 + 1)
                        * nf
                        * q as f64
                        * delta.powi(n as i32 + 1)
                        * s
                        / sd.powi(n as i32 + 1)
                        * inner;
                }
            }
            1.0 - pz
        }
        KnowledgeMode::Unavailable => {
            let mut sum = 0.0;
            for n in 1..k {
                let nf = n as f64;
                let inner = (s.powi(n as i32) - sd.powi(n as i32)) / nf
                    + (sd.powi(n as i32 + 1) / s - s.powi(n as i32)) * harmonic_like(n);
                sum += choose(k - 1, n)? * sign(n as i64 + 1) * nf * s / sd.powi(n as i32 + 1) * inner;
            }
            delta * (1.0 - k as f64 * sum)
        }
    };
    Ok(MetricValue::new(Metric::Nzr, mode, value, MetricSource::ClosedForm))
}

/// Closed-form SOP with the primary reading of the ambiguous constants.
pub fn sop_closed_form(p: &SystemParams, mode: KnowledgeMode) -> Result<MetricValue> {
    sop_closed_form_with(p, mode, SopReading::PRIMARY)
}

/// The bracketed per-`n` term. The Available and Unavailable expressions
/// differ in the coefficient of the incomplete-gamma double sum and in
/// whether the `Ei` group is added to or multiplied by `(−1)^n/a^(n+1)`.
fn sop_bracket(
    n: u32,
    ctx: &ClosedFormContext,
    p: &SystemParams,
    reading: SopReading,
    mode: KnowledgeMode,
) -> Result<f64> {
    let (a, b, s) = (ctx.a, ctx.b, ctx.s);
    let ni = n as i32;
    let nf = n as f64;
    let n_fact = factorial_f64(n);
    let a_pow = a.powi(ni + 1);
    let s_pow = s.powi(ni + 1);
    let exp_b = (-b).exp();

    let mut t = 0.0;
    for r in 1..=n {
        t += sign((n - r) as i64) / n_fact * factorial_f64(r - 1) * factorial_f64(n - r);
    }

    let gamma_term = match reading.gamma {
        GammaTerm::Complete => n_fact,
        GammaTerm::LowerAtB => lower_incomplete_gamma(ni + 1, b)?,
    };
    t += sign(n as i64) * gamma_term / (nf + 1.0);

    let mut double_sum = 0.0;
    for r in 1..=n {
        let mut inner = 0.0;
        for i in 0..=n {
            inner += choose(n, i)? * (-b).powi((n - i) as i32) * upper_incomplete_gamma(i as i32 - r as i32 + 1, b)?;
        }
        double_sum += factorial_f64(r - 1) * sign((n - r) as i64) * inner;
    }
    let coef = match mode {
        KnowledgeMode::Available => p.sigma_d() * p.lambda_d().powi(ni + 1),
        KnowledgeMode::Unavailable => s_pow,
    };
    t -= coef / (a_pow * n_fact) * double_sum;

    let mut tail = 0.0;
    for l in 0..=n {
        tail += factorial_f64(n - l) * (-b).powi(l as i32);
    }
    let ei_group = s_pow / factorial_f64(n + 1) * ((-b).powi(ni + 1) * exp_integral_ei(-b)? - exp_b * tail);
    match mode {
        KnowledgeMode::Available => t += sign(n as i64) / a_pow + ei_group,
        KnowledgeMode::Unavailable => t += sign(n as i64) / a_pow * ei_group,
    }

    let mut p_sum = 0.0;
    for pi in 0..=n {
        p_sum += choose(n, pi)? * upper_incomplete_gamma(pi as i32 - ni + 1, b)? / (a * (-b).powi(pi as i32 - ni));
    }
    t += s_pow / (nf * a_pow) * p_sum;
    t -= exp_b / (nf * a * s);
    Ok(t)
}

/// Closed-form SOP under an explicit reading of the ambiguous constants.
pub fn sop_closed_form_with(p: &SystemParams, mode: KnowledgeMode, reading: SopReading) -> Result<MetricValue> {
    check_budget(p)?;
    let ctx = ClosedFormContext::new(p, reading.a);
    let k = p.k();
    let delta = p.delta();
    let value = match mode {
        KnowledgeMode::Available => {
            let single = 1.0 - ctx.s * (-ctx.b).exp() / (ctx.rho * ctx.d + ctx.s);
            let mut out = (1.0 - delta).powi(k as i32) + delta * (1.0 - delta).powi(k as i32 - 1) * k as f64 * single;
            if k >= 2 {
                let mut inner = 0.0;
                for n in 1..k {
                    inner += choose(k - 1, n)?
                        * sign(n as i64 + 1)
                        * delta.powi(n as i32 + 1)
                        * n as f64
                        * sop_bracket(n, &ctx, p, reading, mode)?;
                }
                for q in 2..=k {
                    out += choose(k, q)? * q as f64 * inner;
                }
            }
            out
        }
        KnowledgeMode::Unavailable => {
            let mut sum = 0.0;
            for n in 1..k {
                sum += choose(k - 1, n)? * sign(n as i64 + 1) * n as f64 * sop_bracket(n, &ctx, p, reading, mode)?;
            }
            (1.0 - delta) + delta * k as f64 * sum
        }
    };
    Ok(MetricValue::new(Metric::Sop, mode, value, MetricSource::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig(k: u32, delta: f64, snr_db: f64) -> SystemParams {
        SystemParams::from_db(k, delta, snr_db, 8.0, 1.0, 10.0, 1.0).unwrap()
    }

    #[test]
    fn unavailable_nzr_vanishes_without_backhaul() {
        for k in 1..6 {
            let v = nzr_closed_form(&fig(k, 0.0, 15.0), KnowledgeMode::Unavailable).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn sop_is_one_without_backhaul() {
        for k in 1..6 {
            for mode in KnowledgeMode::ALL {
                let v = sop_closed_form(&fig(k, 0.0, 15.0), mode).unwrap();
                assert_eq!(v.value, 1.0, "k={k} {mode}");
            }
        }
    }

    #[test]
    fn single_transmitter_available_nzr() {
        for delta in [0.2, 0.5, 0.9, 1.0] {
            let p = fig(1, delta, 12.0);
            let s = p.sigma_e() * p.lambda_e();
            let d = p.sigma_d() * p.lambda_d();
            let v = nzr_closed_form(&p, KnowledgeMode::Available).unwrap();
            assert!((v.value - delta * s / (s + d)).abs() < 1e-15);
            assert!(v.in_range());
        }
    }

    #[test]
    fn single_transmitter_available_sop() {
        // P[g_D/σ_D < ρ g_E/σ_E + ρ − 1] = 1 − e^(−b) s/(ρd + s)
        let p = fig(1, 0.7, 10.0);
        let ctx = ClosedFormContext::new(&p, AConstant::DestinationOnly);
        let direct = 1.0 - (-ctx.b).exp() * ctx.s / (ctx.rho * ctx.d + ctx.s);
        let v = sop_closed_form(&p, KnowledgeMode::Available).unwrap();
        assert!((v.value - (0.3 + 0.7 * direct)).abs() < 1e-15);
    }

    #[test]
    fn chi_marks_the_outage_boundary() {
        let p = fig(2, 0.5, 10.0);
        let ctx = ClosedFormContext::new(&p, AConstant::DestinationOnly);
        let g_e = 3.7;
        let g_d = ctx.chi(g_e);
        let rate = crate::model::secrecy_rate(g_d, g_e, p.sigma_d(), p.sigma_e()).unwrap();
        assert!((rate - p.r_th()).abs() < 1e-12);
        assert!((ctx.rho - 2.0).abs() < 1e-15);
        assert!(ctx.b >= 0.0);
    }

    #[test]
    fn readings_are_distinct() {
        let p = fig(3, 0.9, 10.0);
        let values: Vec<f64> = SopReading::ALL
            .iter()
            .map(|r| sop_closed_form_with(&p, KnowledgeMode::Available, *r).unwrap().value)
            .collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!(values[i] != values[j]);
            }
        }
        let tags: std::collections::HashSet<_> = SopReading::ALL.iter().map(|r| r.tag()).collect();
        assert_eq!(tags.len(), 4);
    }

    #[test]
    fn zero_threshold_sop_is_undefined_for_multiple_transmitters() {
        let p = fig(3, 0.9, 10.0).with_r_th(0.0).unwrap();
        assert!(matches!(
            sop_closed_form(&p, KnowledgeMode::Available),
            Err(Error::Domain { .. })
        ));
        // a single transmitter has no incomplete-gamma terms
        let p1 = p.with_k(1).unwrap();
        assert!(sop_closed_form(&p1, KnowledgeMode::Available).is_ok());
    }

    #[test]
    fn overflow_budget() {
        let p = fig(35, 0.5, 10.0);
        assert_eq!(
            nzr_closed_form(&p, KnowledgeMode::Available),
            Err(Error::Overflow("closed form (K too large)"))
        );
    }
}
