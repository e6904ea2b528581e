//! Seeded Monte Carlo of the selection schemes.
//!
//! Randomness for trial `t` comes from a ChaCha8 generator keyed by
//! `ChaCha8Rng::seed_from_u64(seed)` with its stream id set to `t`. Each
//! trial consumes `3K` open-interval uniforms (`Open01`, one 64-bit word
//! each) in the fixed order `g_d[0..K)`, `g_e[0..K)`, `backhaul[0..K)`;
//! gains use inverse-CDF sampling and link `k` is up when `u < Δ`. Trials are
//! sharded across rayon workers and reduced by integer counts, so estimates
//! do not depend on the worker count or shard boundaries.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::Metric;
use crate::distributions::ExponentialGain;
use crate::error::{Error, Result};
use crate::model::{secrecy_rate_unchecked, KnowledgeMode, SchemeId, SystemParams};

const SHARD: u64 = 1 << 14;

/// One draw of every channel gain and backhaul state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub g_d: Vec<f64>,
    pub g_e: Vec<f64>,
    pub backhaul_active: Vec<bool>,
}

impl ChannelRealization {
    pub fn new(g_d: Vec<f64>, g_e: Vec<f64>, backhaul_active: Vec<bool>) -> Result<Self> {
        if g_d.len() != g_e.len() || g_d.len() != backhaul_active.len() {
            return Err(Error::param("realization", "list lengths differ"));
        }
        if g_d.iter().chain(&g_e).any(|g| !(*g >= 0.0)) {
            return Err(Error::param("realization", "gains must be >= 0"));
        }
        Ok(Self {
            g_d,
            g_e,
            backhaul_active,
        })
    }

    pub fn k(&self) -> usize {
        self.g_d.len()
    }

    /// Multiplies every gain by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            g_d: self.g_d.iter().map(|g| g * c).collect(),
            g_e: self.g_e.iter().map(|g| g * c).collect(),
            backhaul_active: self.backhaul_active.clone(),
        }
    }
}

/// Result of applying a selection scheme to one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionOutcome {
    pub selected: Option<usize>,
    pub rate: f64,
    /// False only when backhaul knowledge is available and every link is down.
    pub transmitted: bool,
}

impl SelectionOutcome {
    const SILENT: SelectionOutcome = SelectionOutcome {
        selected: None,
        rate: 0.0,
        transmitted: false,
    };

    pub fn has_secrecy(&self) -> bool {
        self.rate > 0.0
    }

    /// Outage when the rate falls below `r_th`; a zero rate is always an
    /// outage, which makes `r_th = 0` outage coincide with zero secrecy.
    pub fn is_outage(&self, r_th: f64) -> bool {
        self.rate < r_th || self.rate <= 0.0
    }
}

/// Simulated probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub trials: u64,
    pub std_err: f64,
    pub seed: u64,
}

impl MetricEstimate {
    pub fn from_count(hits: u64, trials: u64, seed: u64) -> Self {
        let value = hits as f64 / trials as f64;
        Self {
            value,
            trials,
            std_err: (value * (1.0 - value) / trials as f64).sqrt(),
            seed,
        }
    }
}

/// Generator for trial `trial` under root `seed`.
pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn fill_realization<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R, real: &mut ChannelRealization) {
    let k = p.k() as usize;
    let dest = ExponentialGain::new(p.lambda_d()).expect("validated");
    let eve = ExponentialGain::new(p.lambda_e()).expect("validated");
    real.g_d.clear();
    real.g_e.clear();
    real.backhaul_active.clear();
    for _ in 0..k {
        real.g_d.push(dest.sample_unchecked(rng.sample(Open01)));
    }
    for _ in 0..k {
        real.g_e.push(eve.sample_unchecked(rng.sample(Open01)));
    }
    for _ in 0..k {
        let u: f64 = rng.sample(Open01);
        real.backhaul_active.push(u < p.delta());
    }
}

/// Draws `2K` exponential gains and `K` Bernoulli(Δ) backhaul states.
pub fn sample_realization<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> ChannelRealization {
    let k = p.k() as usize;
    let mut real = ChannelRealization {
        g_d: Vec::with_capacity(k),
        g_e: Vec::with_capacity(k),
        backhaul_active: Vec::with_capacity(k),
    };
    fill_realization(p, rng, &mut real);
    real
}

/// `g_d/g_e`, with `0/0` read as 0.
#[inline]
fn gain_ratio(g_d: f64, g_e: f64) -> f64 {
    if g_d == 0.0 {
        0.0
    } else {
        g_d / g_e
    }
}

#[inline]
fn score(scheme: SchemeId, g_d: f64, g_e: f64, p: &SystemParams) -> f64 {
    match scheme {
        SchemeId::Rts => gain_ratio(g_d, g_e),
        SchemeId::Tts => g_d,
        SchemeId::MinEs => -g_e,
        SchemeId::Optimal => secrecy_rate_unchecked(g_d, g_e, p.sigma_d(), p.sigma_e()),
    }
}

fn select_unchecked(
    scheme: SchemeId,
    mode: KnowledgeMode,
    real: &ChannelRealization,
    p: &SystemParams,
) -> SelectionOutcome {
    let mut best: Option<(usize, f64)> = None;
    for k in 0..real.k() {
        if mode == KnowledgeMode::Available && !real.backhaul_active[k] {
            continue;
        }
        let sc = score(scheme, real.g_d[k], real.g_e[k], p);
        // strict comparison keeps the lowest index on ties
        if best.is_none_or(|(_, b)| sc > b) {
            best = Some((k, sc));
        }
    }
    let Some((k, _)) = best else {
        return SelectionOutcome::SILENT;
    };
    let rate = if real.backhaul_active[k] {
        secrecy_rate_unchecked(real.g_d[k], real.g_e[k], p.sigma_d(), p.sigma_e())
    } else {
        0.0
    };
    SelectionOutcome {
        selected: Some(k),
        rate,
        transmitted: true,
    }
}

/// Applies `scheme` to one realization. Ties go to the lowest index. With
/// knowledge unavailable a winner behind a dead backhaul delivers rate 0.
pub fn select(
    scheme: SchemeId,
    mode: KnowledgeMode,
    real: &ChannelRealization,
    p: &SystemParams,
) -> Result<SelectionOutcome> {
    if real.k() != p.k() as usize {
        return Err(Error::param(
            "realization",
            format!("has {} links, parameters say K={}", real.k(), p.k()),
        ));
    }
    Ok(select_unchecked(scheme, mode, real, p))
}

/// The RTS selection statistic: the largest gain ratio among candidates, with
/// dead links contributing 0 when backhaul knowledge is available.
pub fn max_gain_ratio(real: &ChannelRealization, mode: KnowledgeMode) -> f64 {
    (0..real.k())
        .map(|k| match mode {
            KnowledgeMode::Available if !real.backhaul_active[k] => 0.0,
            _ => gain_ratio(real.g_d[k], real.g_e[k]),
        })
        .fold(0.0, f64::max)
}

/// Per-scheme event counts from one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SchemeCounts {
    pub trials: u64,
    /// Trials with a strictly positive secrecy rate.
    pub secrecy: u64,
    /// Trials in secrecy outage.
    pub outage: u64,
}

impl SchemeCounts {
    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            secrecy: self.secrecy + other.secrecy,
            outage: self.outage + other.outage,
        }
    }

    pub fn estimate(&self, metric: Metric, seed: u64) -> MetricEstimate {
        let hits = match metric {
            Metric::Nzr => self.secrecy,
            Metric::Sop => self.outage,
        };
        MetricEstimate::from_count(hits, self.trials, seed)
    }
}

/// Runs `trials` shared realizations through every scheme in `schemes`.
/// All schemes see the same channels, so their counts are paired.
pub fn simulate(
    p: &SystemParams,
    mode: KnowledgeMode,
    schemes: &[SchemeId],
    trials: u64,
    seed: u64,
) -> Result<Vec<SchemeCounts>> {
    if trials < 1 {
        return Err(Error::param("trials", "must be >= 1"));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let shards = trials.div_ceil(SHARD);
    let zero = vec![SchemeCounts::default(); schemes.len()];
    let counts = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut counts = vec![SchemeCounts::default(); schemes.len()];
            let mut real = ChannelRealization {
                g_d: Vec::new(),
                g_e: Vec::new(),
                backhaul_active: Vec::new(),
            };
            let start = shard * SHARD;
            let end = (start + SHARD).min(trials);
            for t in start..end {
                let mut rng = base.clone();
                rng.set_stream(t);
                fill_realization(p, &mut rng, &mut real);
                for (c, &scheme) in counts.iter_mut().zip(schemes) {
                    let o = select_unchecked(scheme, mode, &real, p);
                    c.trials += 1;
                    c.secrecy += o.has_secrecy() as u64;
                    c.outage += o.is_outage(p.r_th()) as u64;
                }
            }
            counts
        })
        .reduce(
            || zero.clone(),
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
        );
    Ok(counts)
}

/// Monte Carlo estimate of one metric for one scheme.
pub fn estimate_metric(
    scheme: SchemeId,
    metric: Metric,
    mode: KnowledgeMode,
    p: &SystemParams,
    trials: u64,
    seed: u64,
) -> Result<MetricEstimate> {
    let counts = simulate(p, mode, &[scheme], trials, seed)?;
    Ok(counts[0].estimate(metric, seed))
}

/// Number of trials in which `better` is in outage while `worse` is not,
/// with both schemes applied to the same realization.
pub fn count_outage_inversions(
    p: &SystemParams,
    mode: KnowledgeMode,
    better: SchemeId,
    worse: SchemeId,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    if trials < 1 {
        return Err(Error::param("trials", "must be >= 1"));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let shards = trials.div_ceil(SHARD);
    Ok((0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut real = sample_realization(p, &mut base.clone());
            let start = shard * SHARD;
            let mut n = 0u64;
            for t in start..(start + SHARD).min(trials) {
                let mut rng = base.clone();
                rng.set_stream(t);
                fill_realization(p, &mut rng, &mut real);
                let b = select_unchecked(better, mode, &real, p).is_outage(p.r_th());
                let w = select_unchecked(worse, mode, &real, p).is_outage(p.r_th());
                n += (b && !w) as u64;
            }
            n
        })
        .sum())
}

/// Per-trial outcomes for trials `range`, for paired comparisons.
pub fn trial_outcomes(
    p: &SystemParams,
    mode: KnowledgeMode,
    scheme: SchemeId,
    range: std::ops::Range<u64>,
    seed: u64,
) -> Vec<SelectionOutcome> {
    range
        .map(|t| {
            let real = sample_realization(p, &mut trial_stream(seed, t));
            select_unchecked(scheme, mode, &real, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig(k: u32, delta: f64, snr_db: f64) -> SystemParams {
        SystemParams::from_db(k, delta, snr_db, 8.0, 1.0, 10.0, 1.0).unwrap()
    }

    fn real(g_d: &[f64], g_e: &[f64], up: &[bool]) -> ChannelRealization {
        ChannelRealization::new(g_d.to_vec(), g_e.to_vec(), up.to_vec()).unwrap()
    }

    #[test]
    fn backhaul_extremes() {
        let mut rng = trial_stream(7, 0);
        for _ in 0..100 {
            assert!(sample_realization(&fig(4, 1.0, 10.0), &mut rng)
                .backhaul_active
                .iter()
                .all(|b| *b));
            assert!(sample_realization(&fig(4, 0.0, 10.0), &mut rng)
                .backhaul_active
                .iter()
                .all(|b| !*b));
        }
    }

    #[test]
    fn stream_is_a_pure_function_of_seed_and_trial() {
        let p = fig(3, 0.5, 10.0);
        let a = sample_realization(&p, &mut trial_stream(11, 12345));
        let b = sample_realization(&p, &mut trial_stream(11, 12345));
        let c = sample_realization(&p, &mut trial_stream(11, 12346));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn schemes_pick_expected_links() {
        let p = fig(3, 0.5, 10.0);
        let r = real(&[4.0, 9.0, 1.0], &[1.0, 6.0, 0.1], &[true, true, true]);
        let pick = |s| select(s, KnowledgeMode::Available, &r, &p).unwrap().selected;
        assert_eq!(pick(SchemeId::Rts), Some(2));
        assert_eq!(pick(SchemeId::Tts), Some(1));
        assert_eq!(pick(SchemeId::MinEs), Some(2));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let p = fig(3, 0.5, 10.0);
        let r = real(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0], &[true, true, true]);
        for s in SchemeId::ALL {
            assert_eq!(select(s, KnowledgeMode::Unavailable, &r, &p).unwrap().selected, Some(0));
        }
    }

    #[test]
    fn no_active_backhaul_means_no_transmission() {
        let p = fig(2, 0.5, 10.0);
        let r = real(&[5.0, 3.0], &[0.1, 0.2], &[false, false]);
        let o = select(SchemeId::Rts, KnowledgeMode::Available, &r, &p).unwrap();
        assert_eq!(
            o,
            SelectionOutcome {
                selected: None,
                rate: 0.0,
                transmitted: false
            }
        );
        assert!(o.is_outage(1.0) && !o.has_secrecy());
        let o = select(SchemeId::Rts, KnowledgeMode::Unavailable, &r, &p).unwrap();
        assert_eq!(o.selected, Some(0));
        assert!(o.transmitted);
        assert_eq!(o.rate, 0.0);
    }

    #[test]
    fn available_mode_skips_dead_links() {
        let p = fig(3, 0.5, 10.0);
        let r = real(&[50.0, 3.0, 2.0], &[0.1, 1.0, 0.1], &[false, true, true]);
        let o = select(SchemeId::Rts, KnowledgeMode::Available, &r, &p).unwrap();
        assert_eq!(o.selected, Some(2));
        assert!(o.rate > 0.0);
    }

    #[test]
    fn mismatched_realization_is_rejected() {
        let p = fig(3, 0.5, 10.0);
        let r = real(&[1.0], &[1.0], &[true]);
        assert!(select(SchemeId::Rts, KnowledgeMode::Available, &r, &p).is_err());
        assert!(ChannelRealization::new(vec![1.0], vec![1.0, 2.0], vec![true]).is_err());
        assert!(ChannelRealization::new(vec![-1.0], vec![1.0], vec![true]).is_err());
    }

    #[test]
    fn zero_threshold_outage_is_zero_rate() {
        let o = SelectionOutcome {
            selected: Some(0),
            rate: 0.0,
            transmitted: true,
        };
        assert!(o.is_outage(0.0));
        let o = SelectionOutcome { rate: 0.3, ..o };
        assert!(!o.is_outage(0.0) && o.is_outage(0.5));
    }

    #[test]
    fn no_backhaul_estimates_are_exact() {
        let p = fig(3, 0.0, 20.0);
        for s in SchemeId::ALL {
            let nzr = estimate_metric(s, Metric::Nzr, KnowledgeMode::Available, &p, 5000, 1).unwrap();
            let sop = estimate_metric(s, Metric::Sop, KnowledgeMode::Available, &p, 5000, 1).unwrap();
            assert_eq!((nzr.value, nzr.std_err), (0.0, 0.0));
            assert_eq!((sop.value, sop.std_err), (1.0, 0.0));
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(simulate(&fig(2, 0.5, 0.0), KnowledgeMode::Available, &[SchemeId::Rts], 0, 1).is_err());
    }

    #[test]
    fn standard_error() {
        let e = MetricEstimate::from_count(25, 100, 9);
        assert_eq!(e.value, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.seed, 9);
    }
}
