//! Channel gain laws and the max-ratio distributions driving the selection.
//!
//! Backhaul failure is carried as an explicit probability atom at zero rather
//! than a Dirac spike: CDFs include the atom at the origin, and every `pdf`
//! here is the density of the continuous part only.

use crate::error::{Error, Result};
use crate::model::KnowledgeMode;
use crate::special::binomial;

fn check_support(function: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::domain(function, format!("x={x} must be >= 0")));
    }
    Ok(())
}

/// Exponentially distributed channel power gain (Rayleigh fading).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialGain {
    lambda: f64,
}

impl ExponentialGain {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::param("lambda", format!("{lambda} must be finite and > 0")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_support("exp_cdf", x)?;
        Ok(-(-self.lambda * x).exp_m1())
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_support("exp_pdf", x)?;
        Ok(self.lambda * (-self.lambda * x).exp())
    }

    /// Inverse-CDF sample `−ln(1−u)/λ` for a uniform variate `u ∈ (0, 1)`.
    pub fn sample(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain("sample_gain", format!("u={u} not in (0, 1)")));
        }
        Ok(self.sample_unchecked(u))
    }

    #[inline]
    pub(crate) fn sample_unchecked(&self, u: f64) -> f64 {
        -(-u).ln_1p() / self.lambda
    }
}

/// Gain seen through an unreliable backhaul: zero with probability `1 − Δ`,
/// otherwise exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureDistribution {
    atom_at_zero: f64,
    continuous_weight: f64,
    continuous_part: ExponentialGain,
}

impl MixtureDistribution {
    pub fn new(delta: f64, continuous_part: ExponentialGain) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::param("delta", format!("{delta} not in [0, 1]")));
        }
        Ok(Self {
            atom_at_zero: 1.0 - delta,
            continuous_weight: delta,
            continuous_part,
        })
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    pub fn continuous_weight(&self) -> f64 {
        self.continuous_weight
    }

    pub fn continuous_part(&self) -> &ExponentialGain {
        &self.continuous_part
    }

    /// `(1−Δ) + Δ(1 − e^(−λx))`, with the atom counted at the origin.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_support("mixture_cdf", x)?;
        Ok(self.atom_at_zero + self.continuous_weight * self.continuous_part.cdf(x)?)
    }

    /// Density of the continuous part, `Δ λ e^(−λx)`.
    pub fn pdf_continuous(&self, x: f64) -> Result<f64> {
        check_support("mixture_pdf", x)?;
        Ok(self.continuous_weight * self.continuous_part.pdf(x)?)
    }
}

/// CDF of one destination-to-eavesdropper gain ratio `g_D/g_E`:
/// `λ_D x / (λ_D x + λ_E)`.
pub fn single_ratio_cdf(x: f64, lambda_d: f64, lambda_e: f64) -> f64 {
    if x.is_infinite() {
        1.0
    } else {
        lambda_d * x / (lambda_d * x + lambda_e)
    }
}

/// Law of the largest of `k_links` i.i.d. gain ratios.
///
/// In [`KnowledgeMode::Available`] a link with a dead backhaul contributes a
/// zero ratio (the backhaul factor sits on the destination-side gain), so the
/// maximum has an atom of `(1−Δ)^k` at zero. In
/// [`KnowledgeMode::Unavailable`] backhaul plays no part in the maximum.
/// `k_links = 0` is the empty competitor set: CDF ≡ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRatioDistribution {
    k_links: u32,
    lambda_d: f64,
    lambda_e: f64,
    delta: f64,
    mode: KnowledgeMode,
}

impl MaxRatioDistribution {
    pub fn new(k_links: u32, lambda_d: f64, lambda_e: f64, delta: f64, mode: KnowledgeMode) -> Result<Self> {
        ExponentialGain::new(lambda_d)?;
        ExponentialGain::new(lambda_e)?;
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::param("delta", format!("{delta} not in [0, 1]")));
        }
        Ok(Self {
            k_links,
            lambda_d,
            lambda_e,
            delta,
            mode,
        })
    }

    pub fn k_links(&self) -> u32 {
        self.k_links
    }

    pub fn mode(&self) -> KnowledgeMode {
        self.mode
    }

    fn link_weight(&self) -> f64 {
        match self.mode {
            KnowledgeMode::Available => self.delta,
            KnowledgeMode::Unavailable => 1.0,
        }
    }

    // λ_E / (λ_D x + λ_E), the single-ratio survival function
    fn survival(&self, x: f64) -> f64 {
        if x.is_infinite() {
            0.0
        } else {
            self.lambda_e / (self.lambda_d * x + self.lambda_e)
        }
    }

    /// Probability mass at zero.
    pub fn atom(&self) -> f64 {
        (1.0 - self.link_weight()).powi(self.k_links as i32)
    }

    /// Product form `(1 − w·λ_E/(λ_D x + λ_E))^k` with `w = Δ` (Available)
    /// or `w = 1` (Unavailable).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_support("max_ratio_cdf", x)?;
        if self.k_links == 0 {
            return Ok(1.0);
        }
        let w = self.link_weight();
        Ok((1.0 - w * self.survival(x)).powi(self.k_links as i32))
    }

    /// Alternating binomial expansion
    /// `1 − Σ_{j=1}^{k} C(k,j)(−1)^{j+1} w^j (λ_E/(λ_D x + λ_E))^j`.
    pub fn cdf_expanded(&self, x: f64) -> Result<f64> {
        check_support("max_ratio_cdf", x)?;
        let w = self.link_weight();
        let h = w * self.survival(x);
        let mut acc = 1.0;
        let mut pow = 1.0;
        for j in 1..=self.k_links {
            pow *= h;
            let c = binomial(self.k_links, j)? as f64;
            if j % 2 == 1 {
                acc -= c * pow;
            } else {
                acc += c * pow;
            }
        }
        Ok(acc)
    }

    /// Density of the continuous part:
    /// `k·w·(1 − w h)^(k−1) · λ_D λ_E / (λ_D x + λ_E)²` with `h` the
    /// single-ratio survival function.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_support("max_ratio_pdf", x)?;
        if self.k_links == 0 || x.is_infinite() {
            return Ok(0.0);
        }
        let w = self.link_weight();
        let k = self.k_links as i32;
        let denom = self.lambda_d * x + self.lambda_e;
        let base = 1.0 - w * self.survival(x);
        Ok(k as f64 * w * base.powi(k - 1) * self.lambda_d * self.lambda_e / (denom * denom))
    }
}
