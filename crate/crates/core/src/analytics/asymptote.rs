use super::{Metric, MetricSource, MetricValue};
use crate::error::{Error, Result};
use crate::model::KnowledgeMode;

/// High-SNR (`1/λ_D → ∞`) limit of NZR or SOP; depends on `Δ` and `K` only.
pub fn asymptote(metric: Metric, mode: KnowledgeMode, delta: f64, k: u32) -> Result<MetricValue> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param("delta", format!("{delta} not in [0, 1]")));
    }
    if k < 1 {
        return Err(Error::param("k", "must be >= 1"));
    }
    let all_down = (1.0 - delta).powi(k as i32);
    let value = match (metric, mode) {
        (Metric::Nzr, KnowledgeMode::Available) => 1.0 - all_down,
        (Metric::Nzr, KnowledgeMode::Unavailable) => delta,
        (Metric::Sop, KnowledgeMode::Available) => all_down,
        (Metric::Sop, KnowledgeMode::Unavailable) => 1.0 - delta,
    };
    Ok(MetricValue::new(metric, mode, value, MetricSource::Asymptote))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let v = asymptote(Metric::Nzr, KnowledgeMode::Available, 0.9, 5).unwrap();
        assert!((v.value - 0.99999).abs() < 1e-15);
        for k in [1, 3, 7] {
            let v = asymptote(Metric::Sop, KnowledgeMode::Unavailable, 0.2, k).unwrap();
            assert!((v.value - 0.8).abs() < 1e-15);
            let v = asymptote(Metric::Nzr, KnowledgeMode::Unavailable, 0.0, k).unwrap();
            assert_eq!(v.value, 0.0);
        }
        let v = asymptote(Metric::Sop, KnowledgeMode::Available, 0.2, 3).unwrap();
        assert!((v.value - 0.512).abs() < 1e-15);
        assert_eq!(v.source, MetricSource::Asymptote);
        assert!(asymptote(Metric::Sop, KnowledgeMode::Available, 1.2, 3).is_err());
        assert!(asymptote(Metric::Sop, KnowledgeMode::Available, 0.2, 0).is_err());
    }
}
