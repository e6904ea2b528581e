//! Statistical and structural checks of the Monte Carlo simulator.

use proptest::prelude::*;
use rts_core::analytics::{nzr_oracle, sop_oracle};
use rts_core::distributions::MaxRatioDistribution;
use rts_core::simulator::{
    estimate_metric, max_gain_ratio, sample_realization, select, simulate, trial_outcomes, trial_stream,
    ChannelRealization,
};
use rts_core::{KnowledgeMode, Metric, SchemeId, SystemParams};

use KnowledgeMode::{Available, Unavailable};

fn fig(k: u32, delta: f64, snr_db: f64) -> SystemParams {
    SystemParams::from_db(k, delta, snr_db, 8.0, 1.0, 10.0, 1.0).unwrap()
}

/// Kolmogorov–Smirnov distance for a law that may carry an atom at zero.
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let left = if x == 0.0 { 0.0 } else { cdf(x) };
        worst = worst
            .max((j as f64 / n - cdf(x)).abs())
            .max((i as f64 / n - left).abs());
        i = j;
    }
    worst
}

#[test]
fn max_ratio_samples_follow_their_law() {
    let n = 1_000_000u64;
    for (k, delta, snr) in [(3, 0.5, 10.0), (5, 0.9, 0.0)] {
        let p = fig(k, delta, snr);
        for mode in KnowledgeMode::ALL {
            let law = MaxRatioDistribution::new(k, p.lambda_d(), p.lambda_e(), delta, mode).unwrap();
            let xs = (0..n)
                .map(|t| max_gain_ratio(&sample_realization(&p, &mut trial_stream(99, t)), mode))
                .collect();
            let d = ks_distance(xs, |x| law.cdf(x).unwrap());
            assert!(d <= 0.002, "K={k} Δ={delta} {mode}: KS {d}");
        }
    }
}

#[test]
fn gain_and_backhaul_moments() {
    let p = fig(4, 0.3, 5.0);
    let n = 200_000u64;
    let (mut sd, mut sd2, mut se, mut up) = (0.0, 0.0, 0.0, 0u64);
    for t in 0..n {
        let r = sample_realization(&p, &mut trial_stream(5, t));
        for k in 0..4 {
            sd += r.g_d[k];
            sd2 += r.g_d[k] * r.g_d[k];
            se += r.g_e[k];
            up += r.backhaul_active[k] as u64;
        }
    }
    let m = 4.0 * n as f64;
    let (mean_d, mean_e) = (1.0 / p.lambda_d(), 1.0 / p.lambda_e());
    // sd of an exponential equals its mean
    assert!((sd / m - mean_d).abs() < 5.0 * mean_d / m.sqrt());
    assert!((se / m - mean_e).abs() < 5.0 * mean_e / m.sqrt());
    assert!((sd2 / m - 2.0 * mean_d * mean_d).abs() < 5.0 * mean_d * mean_d * (20.0 / m).sqrt());
    let freq = up as f64 / m;
    assert!((freq - 0.3).abs() < 5.0 * (0.21 / m).sqrt());
}

#[test]
fn single_transmitter_modes_coincide() {
    let p = fig(1, 0.6, 10.0);
    for scheme in SchemeId::ALL {
        let a = trial_outcomes(&p, Available, scheme, 0..20_000, 3);
        let u = trial_outcomes(&p, Unavailable, scheme, 0..20_000, 3);
        for (x, y) in a.iter().zip(&u) {
            assert_eq!(x.rate, y.rate);
        }
    }
}

#[test]
fn optimal_never_in_outage_when_rts_is_not() {
    for (k, delta) in [(5, 0.9), (3, 0.5)] {
        let p = fig(k, delta, 15.0);
        let opt = trial_outcomes(&p, Available, SchemeId::Optimal, 0..50_000, 17);
        for scheme in [SchemeId::Rts, SchemeId::Tts, SchemeId::MinEs] {
            let other = trial_outcomes(&p, Available, scheme, 0..50_000, 17);
            for (o, r) in opt.iter().zip(&other) {
                assert!(o.rate >= r.rate);
                assert!(!o.is_outage(p.r_th()) || r.is_outage(p.r_th()));
            }
        }
    }
}

#[test]
fn counts_do_not_depend_on_worker_count() {
    let p = fig(5, 0.9, 20.0);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate(&p, Available, &SchemeId::ALL, 100_003, 2024).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn simulation_tracks_oracle() {
    let trials = 200_000;
    for (k, delta, snr) in [(5, 0.9, 10.0), (3, 0.2, 20.0), (2, 0.5, 0.0), (4, 0.7, 30.0)] {
        let p = fig(k, delta, snr);
        for mode in KnowledgeMode::ALL {
            for metric in Metric::ALL {
                let truth = match metric {
                    Metric::Nzr => nzr_oracle(&p, mode),
                    Metric::Sop => sop_oracle(&p, mode),
                }
                .unwrap()
                .value;
                let est = estimate_metric(SchemeId::Rts, metric, mode, &p, trials, 77).unwrap();
                let se = (truth * (1.0 - truth) / trials as f64).sqrt().max(1e-12);
                assert!(
                    (est.value - truth).abs() <= 4.0 * se,
                    "K={k} Δ={delta} {snr} dB {metric} {mode}: {} vs {truth}",
                    est.value
                );
            }
        }
    }
}

fn realization(k: usize) -> impl Strategy<Value = ChannelRealization> {
    (
        prop::collection::vec(1e-3f64..1e3, k),
        prop::collection::vec(1e-3f64..1e3, k),
        prop::collection::vec(any::<bool>(), k),
    )
        .prop_map(|(d, e, b)| ChannelRealization::new(d, e, b).unwrap())
}

proptest! {
    #[test]
    fn rts_choice_is_scale_invariant(r in realization(5), c in 1e-3f64..1e3) {
        let p = fig(5, 0.5, 10.0);
        for mode in KnowledgeMode::ALL {
            let a = select(SchemeId::Rts, mode, &r, &p).unwrap().selected;
            let b = select(SchemeId::Rts, mode, &r.scaled(c), &p).unwrap().selected;
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn rts_choice_ignores_noise_powers(r in realization(4), sd in 0.01f64..100.0, se in 0.01f64..100.0) {
        let p = fig(4, 0.5, 10.0);
        let q = p.with_noise(sd, se).unwrap();
        for mode in KnowledgeMode::ALL {
            prop_assert_eq!(
                select(SchemeId::Rts, mode, &r, &p).unwrap().selected,
                select(SchemeId::Rts, mode, &r, &q).unwrap().selected
            );
        }
    }

    #[test]
    fn available_choice_is_always_live(r in realization(4)) {
        let p = fig(4, 0.5, 10.0);
        for scheme in SchemeId::ALL {
            let o = select(scheme, Available, &r, &p).unwrap();
            match o.selected {
                Some(k) => prop_assert!(r.backhaul_active[k] && o.transmitted),
                None => prop_assert!(r.backhaul_active.iter().all(|b| !b) && !o.transmitted),
            }
            prop_assert!(o.rate >= 0.0);
        }
    }
}

#[test]
fn optimal_outage_inversions_never_occur() {
    let p = fig(5, 0.9, 10.0);
    let n = rts_core::simulator::count_outage_inversions(&p, Available, SchemeId::Optimal, SchemeId::Rts, 100_000, 4)
        .unwrap();
    assert_eq!(n, 0);
    // TTS is not rate-optimal, so inversions against it do happen
    let n =
        rts_core::simulator::count_outage_inversions(&p, Available, SchemeId::Tts, SchemeId::Rts, 100_000, 4).unwrap();
    assert!(n > 0);
}
