//! Gaussian phase-diffusion environments.
//!
//! Every environment enters the channel only through the accumulated phase
//! variance σ(t): a Fock coherence `ρ_{n,m}` decays by `e^{-(n-m)² σ / 2}`
//! while populations are untouched. Static (Markovian) noise has σ = τ = Γt.
//! The power-law process has the stationary kernel
//! `K(u) = (a-1)/2 · γΓ / (1 + γu)^a`, and
//! `σ(t) = ∫₀ᵗ∫₀ᵗ cos[ω(s-s')] K(|s-s'|) ds ds'`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::quadrature::{self, Tolerance};

/// Half-width of the window around a = 2 where the analytic limit is used.
pub const EXPONENT_TWO_WINDOW: f64 = 1e-6;

/// Relative accuracy requested from the σ(t) quadrature.
pub const SIGMA_QUADRATURE_RTOL: f64 = 1e-8;

/// Below this γt the closed form is replaced by its Taylor series to avoid
/// cancellation in `(1+γt)^{2-a} + γt(a-2) - 1`.
const SERIES_SWITCH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    /// Γ, phase diffusion rate.
    pub gamma_rate: f64,
    /// γ = 1 / t_E, inverse correlation time of the environment.
    pub gamma_inv_corr: f64,
    /// Power-law exponent a > 1.
    pub exponent_a: f64,
    /// Central frequency ω of the environment.
    pub omega: f64,
}

impl PowerLawParams {
    pub fn new(gamma_rate: f64, gamma_inv_corr: f64, exponent_a: f64) -> Self {
        Self {
            gamma_rate,
            gamma_inv_corr,
            exponent_a,
            omega: 0.0,
        }
    }

    pub fn from_correlation_time(gamma_rate: f64, t_corr: f64, exponent_a: f64) -> Self {
        Self::new(gamma_rate, 1.0 / t_corr, exponent_a)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn correlation_time(&self) -> f64 {
        1.0 / self.gamma_inv_corr
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_rate.is_finite() && self.gamma_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma-rate must be > 0, got {}",
                self.gamma_rate
            )));
        }
        if !(self.gamma_inv_corr.is_finite() && self.gamma_inv_corr > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "inverse correlation time must be > 0 (t-corr finite and positive), got {}",
                self.gamma_inv_corr
            )));
        }
        if !(self.exponent_a.is_finite() && self.exponent_a > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "exponent-a must be > 1 for a normalizable kernel, got {}",
                self.exponent_a
            )));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "omega must be >= 0, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Autocorrelation `K(u)` at lag `u ≥ 0`.
    pub fn kernel(&self, lag: f64) -> f64 {
        let g = self.gamma_inv_corr;
        0.5 * (self.exponent_a - 1.0) * g * self.gamma_rate / (1.0 + g * lag).powf(self.exponent_a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Markovian phase diffusion with dephasing parameter τ = Γt.
    Static {
        tau: f64,
    },
    PowerLaw(PowerLawParams),
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Static { tau } => {
                if tau.is_finite() && *tau >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!("tau must be >= 0, got {tau}")))
                }
            }
            NoiseModel::PowerLaw(p) => p.validate(),
        }
    }

    /// σ after interaction time `t`. Static noise ignores `t`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        match self {
            NoiseModel::Static { tau } => sigma_static(*tau),
            NoiseModel::PowerLaw(p) if p.omega == 0.0 => sigma_power_law(t, p),
            NoiseModel::PowerLaw(p) => sigma_quadrature(t, p),
        }
    }
}

pub fn sigma_static(tau: f64) -> Result<f64> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    Ok(tau)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// `Σ_{k≥2} C(b, k) x^k / b` with `b = 2 - a`, finite at b = 0.
fn binomial_remainder_over_b(b: f64, x: f64) -> f64 {
    let mut coeff = 0.5 * (b - 1.0);
    let mut power = x * x;
    let mut sum = coeff * power;
    for k in 2..400 {
        coeff *= (b - k as f64) / (k as f64 + 1.0);
        power *= x;
        let term = coeff * power;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Closed-form σ(t) of the power-law process at zero central frequency.
pub fn sigma_power_law(t: f64, params: &PowerLawParams) -> Result<f64> {
    if params.exponent_a.is_nan() || params.exponent_a <= 1.0 {
        return Err(Error::Domain(format!(
            "power-law exponent must exceed 1, got {}",
            params.exponent_a
        )));
    }
    if params.omega != 0.0 {
        return Err(Error::Unsupported(format!(
            "closed-form sigma needs omega = 0 (got {}); use sigma_quadrature",
            params.omega
        )));
    }
    params.validate()?;
    check_time(t)?;

    let g = params.gamma_inv_corr;
    let x = g * t;
    let b = 2.0 - params.exponent_a;
    let bracket = if x < SERIES_SWITCH {
        // (1+x)^b - 1 - bx = b · Σ_{k≥2} C(b,k)/b · x^k, and the bracket is that over -b.
        -binomial_remainder_over_b(b, x)
    } else if b.abs() < EXPONENT_TWO_WINDOW {
        x - x.ln_1p()
    } else {
        ((b * x.ln_1p()).exp_m1() - b * x) / -b
    };
    Ok((params.gamma_rate / g * bracket).max(0.0))
}

/// σ(t) by numerical integration, valid for any ω ≥ 0.
///
/// Stationarity of the kernel reduces the square to
/// `σ(t) = 2 ∫₀ᵗ (t - u) cos(ωu) K(u) du`.
pub fn sigma_quadrature(t: f64, params: &PowerLawParams) -> Result<f64> {
    params.validate()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let integrand = |u: f64| 2.0 * (t - u) * (params.omega * u).cos() * params.kernel(u);
    let tol = Tolerance {
        absolute: 1e-300,
        relative: SIGMA_QUADRATURE_RTOL,
        max_intervals: 4000,
    };
    Ok(quadrature::integrate(integrand, 0.0, t, tol)?.value)
}

/// Per-distance decoherence factors `e^{-d² σ / 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingFactorTable {
    pub sigma: f64,
    pub factors: Vec<f64>,
}

impl DephasingFactorTable {
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        if sigma.is_nan() || sigma < 0.0 {
            return Err(Error::Domain(format!("sigma must be >= 0, got {sigma}")));
        }
        let factors = (0..dim)
            .map(|d| {
                let d = d as f64;
                (-0.5 * d * d * sigma).exp()
            })
            .collect();
        Ok(Self { sigma, factors })
    }

    pub fn factor(&self, distance: usize) -> f64 {
        self.factors[distance]
    }
}

/// Applies the Gaussian phase-diffusion map; populations are left bit-exact.
pub fn apply_dephasing(rho: &DensityMatrix, sigma: f64) -> Result<DensityMatrix> {
    let table = DephasingFactorTable::new(sigma, rho.dim())?;
    Ok(rho.map_elements(|n, m, z| {
        if n == m {
            z
        } else {
            z * table.factor(n.abs_diff(m))
        }
    }))
}

/// Monte-Carlo average of `U(φ) ρ U†(φ)` over `φ ~ N(0, σ)`.
///
/// Intended as an oracle for [`apply_dephasing`]. Rotated copies differ only
/// by `e^{iφ(n-m)}`, so the average is accumulated per distance.
pub fn dephase_monte_carlo(
    rho: &DensityMatrix,
    sigma: f64,
    samples: usize,
    rng_seed: u64,
) -> Result<DensityMatrix> {
    let guard = std::f64::consts::TAU.powi(2);
    if sigma.is_nan() || sigma < 0.0 || sigma >= guard {
        return Err(Error::ValidityGuard { sigma });
    }
    if samples == 0 {
        return Err(Error::Domain("need at least one Monte-Carlo sample".into()));
    }
    if sigma == 0.0 {
        return Ok(rho.clone());
    }

    let dim = rho.dim();
    let normal = Normal::new(0.0, sigma.sqrt()).expect("finite positive std dev");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut sums = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..samples {
        let phi: f64 = normal.sample(&mut rng);
        let step = Complex64::from_polar(1.0, phi);
        let mut rotation = Complex64::new(1.0, 0.0);
        for acc in sums.iter_mut().skip(1) {
            rotation *= step;
            *acc += rotation;
        }
    }
    let means: Vec<Complex64> = sums.iter().map(|s| s / samples as f64).collect();

    Ok(rho.map_elements(|n, m, z| {
        if n == m {
            z
        } else if n > m {
            z * means[n - m]
        } else {
            z * means[m - n].conj()
        }
    }))
}
