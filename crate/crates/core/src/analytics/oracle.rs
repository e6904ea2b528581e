//! Deterministic quadrature oracles for NZR and SOP.
//!
//! With `q` active candidates, the selected link lands in the event region
//! with probability
//!
//! ```text
//! q · ∫∫ f_D(x) f_E(y) F_R(x/y)^(q−1) 1[x < x*(y)] dx dy
//! ```
//!
//! where `F_R(t) = λ_D t/(λ_D t + λ_E)` is the single-ratio CDF (the chance a
//! competitor's ratio is below `t`) and `x*(y) = σ_D(ρ y/σ_E + ρ − 1)`. The
//! zero-secrecy event is the `ρ = 1` case. The outer variable is mapped to
//! `u = e^(−λ_E y)` and the inner one to `v = 1 − e^(−λ_D x)`, so both
//! integrals run over bounded intervals with bounded integrands.

use std::cell::Cell;

use super::{Metric, MetricSource, MetricValue};
use crate::distributions::single_ratio_cdf;
use crate::error::Result;
use crate::model::{KnowledgeMode, SystemParams};
use crate::quadrature::Quadrature;
use crate::special::binomial;

/// Error budget for the oracle. `total_abs_tol` bounds the absolute error of
/// the final probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub total_abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            total_abs_tol: 1e-8,
            max_subdivisions: 4000,
        }
    }
}

struct EventProbability {
    value: f64,
    abs_err: f64,
}

/// Probability that, among `q` i.i.d. active links, the max-ratio link falls
/// in the event region `g_D/σ_D < ρ g_E/σ_E + ρ − 1`.
///
/// Outer variable is the eavesdropper gain `y`; inner variable is
/// `v = 1 − exp(−λ_D x)`. For `ρ > 1` and a strong destination channel most of
/// the mass sits in a thin layer `y ≲ y_c` where the competitors' ratio CDF
/// crosses 1/2, so the outer range is cut on a geometric ladder around `y_c`.
fn selected_in_region(p: &SystemParams, q: u32, rho: f64, settings: &OracleSettings) -> Result<EventProbability> {
    let (ld, le) = (p.lambda_d(), p.lambda_e());
    let (sd, se) = (p.sigma_d(), p.sigma_e());
    let cuts = outer_cuts(ld, le, sd, se, rho);
    let pieces = cuts.len() as f64;
    let outer_tol = settings.total_abs_tol / (8.0 * pieces);
    let inner_tol = settings.total_abs_tol / 800.0;
    let inner_q = Quadrature {
        abs_tol: inner_tol / 2.0,
        rel_tol: 0.0,
        max_subdivisions: settings.max_subdivisions,
    };
    let outer_q = Quadrature {
        abs_tol: outer_tol,
        rel_tol: 0.0,
        max_subdivisions: settings.max_subdivisions,
    };

    let worst_inner = Cell::new(0.0f64);
    let failure = Cell::new(None);

    let competitors = q - 1;
    let inner = |y: f64| -> f64 {
        let x_edge = sd * (rho * y / se + rho - 1.0);
        let v_edge = -(-ld * x_edge).exp_m1();
        if v_edge <= 0.0 {
            return 0.0;
        }
        if competitors == 0 {
            return v_edge;
        }
        let integrand = |v: f64| {
            let x = -(-v).ln_1p() / ld;
            single_ratio_cdf(x / y, ld, le).powi(competitors as i32)
        };
        // competitors' CDF passes 1/2 at x = y λ_E/λ_D
        let v_half = -(-le * y).exp_m1();
        let parts = if v_half > 0.0 && v_half < v_edge {
            inner_q
                .integrate(integrand, 0.0, v_half)
                .and_then(|a| inner_q.integrate(integrand, v_half, v_edge).map(|b| (a, b)))
                .map(|(a, b)| (a.value + b.value, a.abs_err + b.abs_err))
        } else {
            inner_q.integrate(integrand, 0.0, v_edge).map(|r| (r.value, r.abs_err))
        };
        match parts {
            Ok((value, err)) => {
                worst_inner.set(worst_inner.get().max(err));
                value
            }
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let weighted = |y: f64| le * (-le * y).exp() * inner(y);

    let (mut value, mut err) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let r = outer_q.integrate(weighted, w[0], w[1])?;
        value += r.value;
        err += r.abs_err;
    }
    let tail = outer_q.integrate_to_infinity(weighted, *cuts.last().expect("nonempty"));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let tail = tail?;
    value += tail.value;
    err += tail.abs_err;
    let qf = q as f64;
    Ok(EventProbability {
        value: (qf * value).clamp(0.0, 1.0),
        abs_err: qf * (err + worst_inner.get()),
    })
}

/// Breakpoints for the outer integral over `y`, starting at 0.
fn outer_cuts(ld: f64, le: f64, sd: f64, se: f64, rho: f64) -> Vec<f64> {
    let mut cuts = vec![0.0];
    let denom = le - ld * sd * rho / se;
    if rho > 1.0 && denom > 0.0 {
        let y_c = ld * sd * (rho - 1.0) / denom;
        cuts.extend((-12..=12).map(|j| y_c * 2f64.powi(j)));
    }
    cuts.extend([0.25, 1.0, 4.0].map(|m| m / le));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    cuts
}

// Σ over active-set sizes: returns (Σ_q w_q P^(q), Σ_q w_q err_q, Σ_q w_q)
// with w_q = C(K,q) Δ^q (1−Δ)^(K−q), for q >= 1.
fn mix_over_active_sets(p: &SystemParams, rho: f64, settings: &OracleSettings) -> Result<(f64, f64, f64)> {
    let k = p.k();
    let delta = p.delta();
    let (mut value, mut err, mut mass) = (0.0, 0.0, 0.0);
    for q in 1..=k {
        let w = binomial(k, q)? as f64 * delta.powi(q as i32) * (1.0 - delta).powi((k - q) as i32);
        if w == 0.0 {
            continue;
        }
        let e = selected_in_region(p, q, rho, settings)?;
        value += w * e.value;
        err += w * e.abs_err;
        mass += w;
    }
    Ok((value, err, mass))
}

/// Probability that the selected link has zero secrecy rate (including the
/// no-transmission and dead-backhaul cases).
pub fn zero_secrecy_oracle(p: &SystemParams, mode: KnowledgeMode) -> Result<MetricValue> {
    zero_probability(p, mode, &OracleSettings::default()).map(|(v, e)| {
        let mut m = MetricValue::new(Metric::Nzr, mode, v, MetricSource::Oracle);
        m.error_bound = e;
        m
    })
}

fn zero_probability(p: &SystemParams, mode: KnowledgeMode, settings: &OracleSettings) -> Result<(f64, f64)> {
    region_probability(p, mode, 1.0, settings)
}

fn region_probability(
    p: &SystemParams,
    mode: KnowledgeMode,
    rho: f64,
    settings: &OracleSettings,
) -> Result<(f64, f64)> {
    let delta = p.delta();
    match mode {
        KnowledgeMode::Available => {
            let all_down = (1.0 - delta).powi(p.k() as i32);
            let (v, e, _) = mix_over_active_sets(p, rho, settings)?;
            Ok((all_down + v, e))
        }
        KnowledgeMode::Unavailable => {
            if delta == 0.0 {
                return Ok((1.0, 0.0));
            }
            let e = selected_in_region(p, p.k(), rho, settings)?;
            Ok(((1.0 - delta) + delta * e.value, delta * e.abs_err))
        }
    }
}

/// NZR by quadrature of the defining conditional probabilities.
pub fn nzr_oracle(p: &SystemParams, mode: KnowledgeMode) -> Result<MetricValue> {
    nzr_oracle_with(p, mode, &OracleSettings::default())
}

pub fn nzr_oracle_with(p: &SystemParams, mode: KnowledgeMode, settings: &OracleSettings) -> Result<MetricValue> {
    let delta = p.delta();
    let (value, err) = match mode {
        KnowledgeMode::Available => {
            // Σ_q w_q (1 − P_Z^(q)) evaluated as mass − Σ w_q P_Z^(q)
            let (v, e, mass) = mix_over_active_sets(p, 1.0, settings)?;
            (mass - v, e)
        }
        KnowledgeMode::Unavailable => {
            if delta == 0.0 {
                (0.0, 0.0)
            } else {
                let e = selected_in_region(p, p.k(), 1.0, settings)?;
                (delta * (1.0 - e.value), delta * e.abs_err)
            }
        }
    };
    let mut m = MetricValue::new(Metric::Nzr, mode, value.clamp(0.0, 1.0), MetricSource::Oracle);
    m.error_bound = err;
    Ok(m)
}

/// SOP by quadrature of the defining conditional probabilities.
pub fn sop_oracle(p: &SystemParams, mode: KnowledgeMode) -> Result<MetricValue> {
    sop_oracle_with(p, mode, &OracleSettings::default())
}

pub fn sop_oracle_with(p: &SystemParams, mode: KnowledgeMode, settings: &OracleSettings) -> Result<MetricValue> {
    let (value, err) = region_probability(p, mode, p.rho(), settings)?;
    let mut m = MetricValue::new(Metric::Sop, mode, value.clamp(0.0, 1.0), MetricSource::Oracle);
    m.error_bound = err;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig(k: u32, delta: f64, snr_db: f64) -> SystemParams {
        SystemParams::from_db(k, delta, snr_db, 8.0, 1.0, 10.0, 1.0).unwrap()
    }

    #[test]
    fn single_pair_matches_analytic() {
        for snr in [0.0, 10.0, 30.0] {
            let p = fig(1, 1.0, snr);
            let s = p.sigma_e() * p.lambda_e();
            let d = p.sigma_d() * p.lambda_d();
            for mode in KnowledgeMode::ALL {
                let v = nzr_oracle(&p, mode).unwrap();
                assert!((v.value - (1.0 - d / (d + s))).abs() < 1e-9, "{snr} {mode}");
                assert!(v.error_bound <= 1e-8);
            }
        }
    }

    #[test]
    fn no_backhaul() {
        for k in 1..5 {
            let p = fig(k, 0.0, 20.0);
            for mode in KnowledgeMode::ALL {
                assert_eq!(nzr_oracle(&p, mode).unwrap().value, 0.0);
                assert_eq!(sop_oracle(&p, mode).unwrap().value, 1.0);
            }
        }
    }

    #[test]
    fn zero_threshold_outage_is_zero_secrecy() {
        for k in [1, 3] {
            let p = fig(k, 0.6, 10.0).with_r_th(0.0).unwrap();
            for mode in KnowledgeMode::ALL {
                let sop = sop_oracle(&p, mode).unwrap().value;
                let nzr = nzr_oracle(&p, mode).unwrap().value;
                assert!((sop - (1.0 - nzr)).abs() < 1e-12, "k={k} {mode}");
            }
        }
    }

    #[test]
    fn complementarity() {
        for k in [1, 2, 4] {
            let p = fig(k, 0.7, 5.0);
            for mode in KnowledgeMode::ALL {
                let nzr = nzr_oracle(&p, mode).unwrap().value;
                let zero = zero_secrecy_oracle(&p, mode).unwrap().value;
                assert!((nzr + zero - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_transmitter_modes_coincide() {
        let p = fig(1, 0.45, 7.0);
        let a = sop_oracle(&p, KnowledgeMode::Available).unwrap().value;
        let u = sop_oracle(&p, KnowledgeMode::Unavailable).unwrap().value;
        assert!((a - u).abs() < 1e-15);
    }
}
