//! System parameters and the secrecy-rate primitive.
//!
//! Transmit power is normalized to one, so a link SNR is its channel power
//! gain divided by the receiver noise power. All dB values are power dB.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest transmitter count accepted; binomials up to this order stay exact
/// in `u64`.
pub const MAX_TRANSMITTERS: u32 = 64;

/// Full parameter vector of the K-transmitter wiretap system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    k: u32,
    delta: f64,
    lambda_d: f64,
    lambda_e: f64,
    sigma_d: f64,
    sigma_e: f64,
    r_th: f64,
}

impl SystemParams {
    /// Builds a validated parameter set. Rates and noise powers are linear.
    pub fn new(
        k: u32,
        delta: f64,
        lambda_d: f64,
        lambda_e: f64,
        sigma_d: f64,
        sigma_e: f64,
        r_th: f64,
    ) -> Result<Self> {
        if !(1..=MAX_TRANSMITTERS).contains(&k) {
            return Err(Error::param("k", format!("{k} not in [1, {MAX_TRANSMITTERS}]")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::param("delta", format!("{delta} not in [0, 1]")));
        }
        for (name, v) in [
            ("lambda_d", lambda_d),
            ("lambda_e", lambda_e),
            ("sigma_d", sigma_d),
            ("sigma_e", sigma_e),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("{v} must be finite and > 0")));
            }
        }
        if !(r_th.is_finite() && r_th >= 0.0) {
            return Err(Error::param("r_th", format!("{r_th} must be finite and >= 0")));
        }
        Ok(Self {
            k,
            delta,
            lambda_d,
            lambda_e,
            sigma_d,
            sigma_e,
            r_th,
        })
    }

    /// Builds parameters from the dB quantities used on figure axes:
    /// mean link gains `1/λ` and noise powers `σ` in dB.
    pub fn from_db(
        k: u32,
        delta: f64,
        inv_lambda_d_db: f64,
        inv_lambda_e_db: f64,
        sigma_d_db: f64,
        sigma_e_db: f64,
        r_th: f64,
    ) -> Result<Self> {
        Self::new(
            k,
            delta,
            1.0 / db_to_linear(inv_lambda_d_db),
            1.0 / db_to_linear(inv_lambda_e_db),
            db_to_linear(sigma_d_db),
            db_to_linear(sigma_e_db),
            r_th,
        )
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn lambda_d(&self) -> f64 {
        self.lambda_d
    }
    pub fn lambda_e(&self) -> f64 {
        self.lambda_e
    }
    pub fn sigma_d(&self) -> f64 {
        self.sigma_d
    }
    pub fn sigma_e(&self) -> f64 {
        self.sigma_e
    }
    pub fn r_th(&self) -> f64 {
        self.r_th
    }

    /// `ρ = 2^R_th`.
    pub fn rho(&self) -> f64 {
        self.r_th.exp2()
    }

    pub fn with_k(self, k: u32) -> Result<Self> {
        Self::new(
            k,
            self.delta,
            self.lambda_d,
            self.lambda_e,
            self.sigma_d,
            self.sigma_e,
            self.r_th,
        )
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(
            self.k,
            delta,
            self.lambda_d,
            self.lambda_e,
            self.sigma_d,
            self.sigma_e,
            self.r_th,
        )
    }

    pub fn with_r_th(self, r_th: f64) -> Result<Self> {
        Self::new(
            self.k,
            self.delta,
            self.lambda_d,
            self.lambda_e,
            self.sigma_d,
            self.sigma_e,
            r_th,
        )
    }

    pub fn with_noise(self, sigma_d: f64, sigma_e: f64) -> Result<Self> {
        Self::new(
            self.k,
            self.delta,
            self.lambda_d,
            self.lambda_e,
            sigma_d,
            sigma_e,
            self.r_th,
        )
    }
}

/// Whether the selector knows which backhaul links are currently up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnowledgeMode {
    Available,
    Unavailable,
}

impl KnowledgeMode {
    pub const ALL: [KnowledgeMode; 2] = [KnowledgeMode::Available, KnowledgeMode::Unavailable];

    pub fn as_str(&self) -> &'static str {
        match self {
            KnowledgeMode::Available => "available",
            KnowledgeMode::Unavailable => "unavailable",
        }
    }
}

/// Transmitter selection scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Maximize destination-to-eavesdropper channel power gain ratio.
    Rts,
    /// Maximize the destination channel gain.
    Tts,
    /// Minimize the eavesdropper channel gain.
    MinEs,
    /// Maximize the instantaneous secrecy rate (needs noise powers).
    Optimal,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Rts, SchemeId::Tts, SchemeId::MinEs, SchemeId::Optimal];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Rts => "RTS",
            SchemeId::Tts => "TTS",
            SchemeId::MinEs => "MIN-ES",
            SchemeId::Optimal => "OPTIMAL",
        }
    }
}

impl fmt::Display for KnowledgeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KnowledgeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "available" | "avail" | "a" => Ok(KnowledgeMode::Available),
            "unavailable" | "unavail" | "u" => Ok(KnowledgeMode::Unavailable),
            _ => Err(Error::param("mode", format!("unknown knowledge mode `{s}`"))),
        }
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rts" => Ok(SchemeId::Rts),
            "tts" => Ok(SchemeId::Tts),
            "min-es" | "mines" => Ok(SchemeId::MinEs),
            "optimal" | "opt" => Ok(SchemeId::Optimal),
            _ => Err(Error::param("scheme", format!("unknown scheme `{s}`"))),
        }
    }
}

/// `10^(x/10)`.
pub fn db_to_linear(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// `10·log10(y)`; `y` must be positive.
pub fn linear_to_db(y: f64) -> f64 {
    10.0 * y.log10()
}

/// Secrecy rate in bits/s/Hz for one transmitter with unit transmit power:
/// `max{log2((1 + g_d/σ_D) / (1 + g_e/σ_E)), 0}`.
pub fn secrecy_rate(g_d: f64, g_e: f64, sigma_d: f64, sigma_e: f64) -> Result<f64> {
    if !(g_d >= 0.0 && g_e >= 0.0) {
        return Err(Error::domain("secrecy_rate", format!("negative gain ({g_d}, {g_e})")));
    }
    if !(sigma_d > 0.0 && sigma_e > 0.0) {
        return Err(Error::domain("secrecy_rate", "noise power must be > 0"));
    }
    Ok(secrecy_rate_unchecked(g_d, g_e, sigma_d, sigma_e))
}

#[inline]
pub(crate) fn secrecy_rate_unchecked(g_d: f64, g_e: f64, sigma_d: f64, sigma_e: f64) -> f64 {
    let r = ((g_d / sigma_d).ln_1p() - (g_e / sigma_e).ln_1p()) / std::f64::consts::LN_2;
    r.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn db_examples() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        // 10^0.8, evaluated with mpmath at 30 digits
        assert!((db_to_linear(8.0) - 6.309_573_444_801_933).abs() < 1e-14);
    }

    #[test]
    fn secrecy_rate_examples() {
        for c in [0.0, 0.3, 1.0, 17.0] {
            let r = secrecy_rate(c * 2.0, c * 5.0, 2.0, 5.0).unwrap();
            assert!(r.abs() < 1e-15, "c={c} r={r}");
        }
        let r = secrecy_rate(3.0 * 1.7, 1.0 * 0.4, 1.7, 0.4).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        assert_eq!(secrecy_rate(0.0, 5.0 * 3.0, 1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn secrecy_rate_rejects_negative_gain() {
        assert!(matches!(secrecy_rate(-1.0, 1.0, 1.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(secrecy_rate(1.0, -0.1, 1.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn params_reject_boundaries() {
        let ok = |k, d, ld, le, sd, se, r| SystemParams::new(k, d, ld, le, sd, se, r).is_ok();
        assert!(ok(1, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0));
        assert!(ok(64, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0));
        assert!(!ok(0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(65, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, -1e-12, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, 1.0 + 1e-12, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, 0.5, 0.0, 1.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, 0.5, 1.0, 0.0, 1.0, 1.0, 1.0));
        assert!(!ok(2, 0.5, 1.0, 1.0, 0.0, 1.0, 1.0));
        assert!(!ok(2, 0.5, 1.0, 1.0, 1.0, -2.0, 1.0));
        assert!(!ok(2, 0.5, 1.0, 1.0, 1.0, 1.0, -1e-9));
        assert!(!ok(2, 0.5, f64::INFINITY, 1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn parse_enums() {
        assert_eq!("MIN-ES".parse::<SchemeId>().unwrap(), SchemeId::MinEs);
        assert_eq!("min_es".parse::<SchemeId>().unwrap(), SchemeId::MinEs);
        assert_eq!(
            "Unavailable".parse::<KnowledgeMode>().unwrap(),
            KnowledgeMode::Unavailable
        );
        assert!("foo".parse::<SchemeId>().is_err());
        for s in SchemeId::ALL {
            assert_eq!(s.as_str().parse::<SchemeId>().unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn db_round_trip(y in 1e-12f64..1e12) {
            let back = db_to_linear(linear_to_db(y));
            prop_assert!(((back - y) / y).abs() <= 1e-12);
        }

        #[test]
        fn secrecy_rate_monotone(
            gd in 0.0f64..100.0, ge in 0.0f64..100.0, step in 0.0f64..10.0,
            sd in 0.01f64..10.0, se in 0.01f64..10.0,
        ) {
            let base = secrecy_rate(gd, ge, sd, se).unwrap();
            prop_assert!(secrecy_rate(gd + step, ge, sd, se).unwrap() >= base);
            prop_assert!(secrecy_rate(gd, ge + step, sd, se).unwrap() <= base);
        }

        #[test]
        fn params_field_ranges(k in 0u32..70, delta in -0.5f64..1.5, r in -1.0f64..3.0) {
            let res = SystemParams::new(k, delta, 0.1, 0.2, 1.0, 2.0, r);
            let valid = (1..=64).contains(&k) && (0.0..=1.0).contains(&delta) && r >= 0.0;
            prop_assert_eq!(res.is_ok(), valid);
        }
    }
}
