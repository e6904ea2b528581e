//! Integer-order incomplete gamma functions, the exponential integrals and
//! exact binomials/factorials used by the closed-form evaluators.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest `n` with `n!` exact in `u128`.
pub const MAX_EXACT_FACTORIAL: u32 = 34;

/// Largest `n` accepted by [`binomial`].
pub const MAX_BINOMIAL_N: u32 = 64;

/// Relative tolerance and iteration cap for the iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 1000,
        }
    }
}

impl AccuracyBudget {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::param("rel_tol", "must be > 0"));
        }
        if max_terms < 1 {
            return Err(Error::param("max_terms", "must be >= 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Exact `C(n, k)` for `0 <= k <= n <= 64`.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if n > MAX_BINOMIAL_N || k > n {
        return Err(Error::domain("binomial", format!("({n}, {k})")));
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc as u64)
}

/// Exact `n!` for `n <= 34`.
pub fn factorial(n: u32) -> Result<u128> {
    if n > MAX_EXACT_FACTORIAL {
        return Err(Error::Overflow("factorial"));
    }
    Ok((1..=n as u128).product())
}

/// `n!` as a float; exact for `n <= 22`, correctly accumulated beyond.
pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Lower incomplete gamma `γ(s, x) = ∫₀ˣ t^(s−1) e^(−t) dt` for integer `s >= 1`.
pub fn lower_incomplete_gamma(s: i32, x: f64) -> Result<f64> {
    if s < 1 || !(x >= 0.0) {
        return Err(Error::domain("lower_incomplete_gamma", format!("s={s}, x={x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(factorial_f64(s as u32 - 1));
    }
    if x < s as f64 + 1.0 {
        // x^s e^(−x) Σ_{n≥0} x^n / (s (s+1) ... (s+n)), positive terms only
        let mut term = 1.0 / s as f64;
        let mut sum = term;
        let mut a = s as f64;
        loop {
            a += 1.0;
            term *= x / a;
            sum += term;
            if term < sum * f64::EPSILON {
                break;
            }
        }
        Ok(sum * (s as f64 * x.ln() - x).exp())
    } else {
        let upper = upper_incomplete_gamma(s, x)?;
        Ok(factorial_f64(s as u32 - 1) - upper)
    }
}

/// Upper incomplete gamma `Γ(s, x) = ∫ₓ^∞ t^(s−1) e^(−t) dt` for integer `s`.
///
/// For `s >= 1` this is the finite sum `(s−1)! e^(−x) Σ_{m<s} x^m/m!`.
/// For `s <= 0` it uses `Γ(−m, x) = x^(−m) E_{m+1}(x)`, which requires `x > 0`.
pub fn upper_incomplete_gamma(s: i32, x: f64) -> Result<f64> {
    upper_incomplete_gamma_with(s, x, &AccuracyBudget::default())
}

pub fn upper_incomplete_gamma_with(s: i32, x: f64, budget: &AccuracyBudget) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("upper_incomplete_gamma", format!("s={s}, x={x}")));
    }
    if s >= 1 {
        if x.is_infinite() {
            return Ok(0.0);
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..s {
            term *= x / m as f64;
            sum += term;
        }
        return Ok(factorial_f64(s as u32 - 1) * (-x).exp() * sum);
    }
    if x == 0.0 {
        return Err(Error::domain(
            "upper_incomplete_gamma",
            format!("s={s} diverges at x=0"),
        ));
    }
    let m = (-s) as u32;
    let en = exp_integral_en_with(m + 1, x, budget)?;
    Ok(en * x.powi(-(m as i32)))
}

/// Generalized exponential integral `E_n(x) = ∫₁^∞ e^(−xt) t^(−n) dt`.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    exp_integral_en_with(n, x, &AccuracyBudget::default())
}

pub fn exp_integral_en_with(n: u32, x: f64, budget: &AccuracyBudget) -> Result<f64> {
    if !(x >= 0.0) || (x == 0.0 && n <= 1) {
        return Err(Error::domain("exp_integral_en", format!("n={n}, x={x}")));
    }
    if n == 0 {
        return Ok((-x).exp() / x);
    }
    if x == 0.0 {
        return Ok(1.0 / (n as f64 - 1.0));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let nm1 = n - 1;
    if x > 1.0 {
        // modified Lentz evaluation of the continued fraction
        let tiny = 1e-300;
        let mut b = x + n as f64;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=budget.max_terms {
            let a = -(i as f64) * (nm1 as f64 + i as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let step = c * d;
            h *= step;
            if (step - 1.0).abs() <= budget.rel_tol * 1e-3 {
                return Ok(h * (-x).exp());
            }
        }
        Err(Error::NoConvergence {
            estimate: h * (-x).exp(),
            error: f64::NAN,
            tolerance: budget.rel_tol,
        })
    } else {
        let mut ans = if nm1 != 0 {
            1.0 / nm1 as f64
        } else {
            -x.ln() - EULER_GAMMA
        };
        let mut fact = 1.0;
        for i in 1..=budget.max_terms {
            fact *= -x / i as f64;
            let delta = if i as u32 != nm1 {
                -fact / (i as f64 - nm1 as f64)
            } else {
                let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
                fact * (-x.ln() + psi)
            };
            ans += delta;
            if delta.abs() <= ans.abs() * budget.rel_tol * 1e-3 {
                return Ok(ans);
            }
        }
        Err(Error::NoConvergence {
            estimate: ans,
            error: f64::NAN,
            tolerance: budget.rel_tol,
        })
    }
}

/// Exponential integral `Ei(x)` on the negative axis, `Ei(−b) = −E₁(b)`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    exp_integral_ei_with(x, &AccuracyBudget::default())
}

pub fn exp_integral_ei_with(x: f64, budget: &AccuracyBudget) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain(
            "exp_integral_ei",
            format!("x={x} (only x < 0 supported)"),
        ));
    }
    Ok(-exp_integral_en_with(1, -x, budget)?)
}
