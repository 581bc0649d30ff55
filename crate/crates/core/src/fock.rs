//! Truncated Fock-space density matrices for coherent and NLA-amplified
//! coherent seeds.
//!
//! The first-order noiseless linear amplifier acts as `1 + (g - 1) a†a`, so
//! on a coherent input every Fock amplitude picks up the factor
//! `1 + (g - 1) n`. The amplified state is still pure; we build its
//! amplitude vector in log space and take the outer product, which keeps the
//! matrix Hermitian and positive by construction.

use libm::lgamma as ln_gamma;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest trace weight the truncation may discard before it is rejected.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Hard cap on the adaptive Fock dimension.
pub const MAX_AUTO_DIM: usize = 4096;

/// Seed state of the phase channel: a coherent state of mean photon number
/// `nbar`, optionally passed through a first-order NLA of nominal gain `gain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSpec {
    pub nbar: f64,
    pub gain: f64,
    /// Initial coherent phase in radians.
    pub phase: f64,
}

impl SeedSpec {
    pub fn coherent(nbar: f64) -> Self {
        Self {
            nbar,
            gain: 1.0,
            phase: 0.0,
        }
    }

    pub fn amplified(nbar: f64, gain: f64) -> Self {
        Self {
            nbar,
            gain,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "nbar must be a finite number >= 0, got {}",
                self.nbar
            )));
        }
        if !(self.gain.is_finite() && self.gain >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "gain must be >= 1 (the NLA amplifies), got {}",
                self.gain
            )));
        }
        if !(self.phase.is_finite() && (0.0..std::f64::consts::TAU).contains(&self.phase)) {
            return Err(Error::InvalidConfig(format!(
                "phase must lie in [0, 2pi), got {}",
                self.phase
            )));
        }
        Ok(())
    }

    /// Log of the squared Fock amplitude `|c_n|²` before the `1/A` normalization.
    fn ln_weight(&self, n: usize) -> f64 {
        let nf = n as f64;
        let poisson = if self.nbar > 0.0 {
            -self.nbar + nf * self.nbar.ln() - ln_gamma(nf + 1.0)
        } else if n == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        poisson + 2.0 * (1.0 + (self.gain - 1.0) * nf).ln()
    }

    /// Photon-number probability `p_n = ρ_{n,n}` of the untruncated state.
    pub fn photon_probability(&self, n: usize) -> f64 {
        (self.ln_weight(n) - nla_normalization(self.gain, self.nbar).ln()).exp()
    }
}

/// `A = 1 + (g² - 1) n̄ + (g - 1)² n̄²`, the trace of the unnormalized
/// amplified state.
pub fn nla_normalization(gain: f64, nbar: f64) -> f64 {
    1.0 + (gain * gain - 1.0) * nbar + (gain - 1.0).powi(2) * nbar * nbar
}

/// Truncated Fock-basis density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elements: DMatrix<Complex64>,
    tail_mass: f64,
}

impl DensityMatrix {
    /// Wraps an arbitrary square matrix. No physicality checks are made; use
    /// [`DensityMatrix::check_invariants`] when that matters.
    pub fn from_matrix(elements: DMatrix<Complex64>, tail_mass: f64) -> Result<Self> {
        if elements.nrows() != elements.ncols() || elements.nrows() == 0 {
            return Err(Error::Domain(format!(
                "density matrix must be square and nonempty, got {}x{}",
                elements.nrows(),
                elements.ncols()
            )));
        }
        Ok(Self {
            elements,
            tail_mass,
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn into_elements(self) -> DMatrix<Complex64> {
        self.elements
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.elements[(n, m)]
    }

    /// Trace weight removed by the truncation before renormalization.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.elements[(n, n)].re).collect()
    }

    /// `Tr[a†a ρ]`.
    pub fn mean_photon_number(&self) -> f64 {
        self.diagonal()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `Tr[a ρ] = Σ_n √(n+1) ρ_{n+1,n}`.
    pub fn annihilation_expectation(&self) -> Complex64 {
        (0..self.dim().saturating_sub(1))
            .map(|n| self.elements[(n + 1, n)] * ((n + 1) as f64).sqrt())
            .sum()
    }

    /// Largest `|ρ_{n,m} - conj(ρ_{m,n})|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for n in 0..d {
            for m in n..d {
                let gap = (self.elements[(n, m)] - self.elements[(m, n)].conj()).norm();
                worst = worst.max(gap);
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.elements + self.elements.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Hermitian to 1e-12, unit trace to 1e-12, diagonal ≥ -1e-14.
    pub fn check_invariants(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::Domain(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::Domain(format!("trace {tr} is not 1")));
        }
        if let Some(p) = self.diagonal().into_iter().find(|&p| p < -1e-14) {
            return Err(Error::Domain(format!("negative population {p:.3e}")));
        }
        Ok(())
    }

    pub(crate) fn map_elements(&self, f: impl Fn(usize, usize, Complex64) -> Complex64) -> Self {
        let d = self.dim();
        let elements = DMatrix::from_fn(d, d, |n, m| f(n, m, self.elements[(n, m)]));
        Self {
            elements,
            tail_mass: self.tail_mass,
        }
    }
}

/// Trace weight `Σ_{n ≥ dim} p_n` of a photon distribution, summed directly
/// so that tiny tails are resolved.
fn tail_beyond(dim: usize, prob: impl Fn(usize) -> f64, mean: f64) -> f64 {
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let p = prob(n);
        tail += p;
        // Past the mode the terms fall off at least geometrically.
        if (n as f64) > mean + 2.0 && (p == 0.0 || p < tail * 1e-18) {
            break;
        }
        n += 1;
        if n > dim + 100_000 {
            break;
        }
    }
    tail
}

/// Poisson tail `Σ_{n ≥ dim} e^{-λ} λ^n / n!`.
pub(crate) fn poisson_tail(dim: usize, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    tail_beyond(
        dim,
        |n| (-lambda + n as f64 * lambda.ln() - ln_gamma(n as f64 + 1.0)).exp(),
        lambda,
    )
}

fn seed_tail(seed: &SeedSpec, dim: usize) -> f64 {
    let mean = seed.nbar * seed.gain * seed.gain + 1.0;
    tail_beyond(dim, |n| seed.photon_probability(n), mean)
}

/// Smallest Fock dimension whose discarded trace weight is at most `tolerance`.
pub fn auto_dimension(seed: &SeedSpec, tolerance: f64) -> Result<usize> {
    seed.validate()?;
    let mut dim = 1;
    while seed_tail(seed, dim) > tolerance {
        dim += 1;
        if dim > MAX_AUTO_DIM {
            return Err(Error::Truncation {
                dim: MAX_AUTO_DIM,
                tail_mass: seed_tail(seed, MAX_AUTO_DIM),
                tolerance,
            });
        }
    }
    Ok(dim)
}

/// Coherent state `|√n̄⟩⟨√n̄|` truncated to `dim` levels and renormalized.
pub fn coherent_density(nbar: f64, dim: usize) -> Result<DensityMatrix> {
    amplified_coherent_density(&SeedSpec::coherent(nbar), dim)
}

/// First-order NLA output for a coherent input, truncated to `dim` levels.
pub fn amplified_coherent_density(seed: &SeedSpec, dim: usize) -> Result<DensityMatrix> {
    amplified_coherent_density_with_tolerance(seed, dim, DEFAULT_TAIL_TOLERANCE)
}

pub fn amplified_coherent_density_with_tolerance(
    seed: &SeedSpec,
    dim: usize,
    tolerance: f64,
) -> Result<DensityMatrix> {
    seed.validate()?;
    if dim == 0 {
        return Err(Error::Domain("Fock dimension must be at least 1".into()));
    }
    let tail_mass = seed_tail(seed, dim);
    if tail_mass > tolerance {
        return Err(Error::Truncation {
            dim,
            tail_mass,
            tolerance,
        });
    }

    let ln_norm = nla_normalization(seed.gain, seed.nbar).ln();
    let amplitudes: Vec<Complex64> = (0..dim)
        .map(|n| {
            let modulus = (0.5 * (seed.ln_weight(n) - ln_norm)).exp();
            Complex64::from_polar(modulus, n as f64 * seed.phase)
        })
        .collect();

    let mut elements = DMatrix::from_fn(dim, dim, |n, m| amplitudes[n] * amplitudes[m].conj());
    let trace = elements.trace().re;
    elements /= Complex64::new(trace, 0.0);
    // Exact Hermiticity and a real diagonal regardless of rounding in the product.
    for n in 0..dim {
        elements[(n, n)].im = 0.0;
        for m in 0..n {
            elements[(m, n)] = elements[(n, m)].conj();
        }
    }

    Ok(DensityMatrix {
        elements,
        tail_mass,
    })
}

/// `g_eff = Tr[a ρ_a] / α` with `α = √n̄ e^{iφ}`.
pub fn effective_gain(seed: &SeedSpec, dim: usize) -> Result<f64> {
    if seed.nbar <= 0.0 {
        return Err(Error::UndefinedGain);
    }
    let rho = amplified_coherent_density(seed, dim)?;
    let alpha = Complex64::from_polar(seed.nbar.sqrt(), seed.phase);
    Ok((rho.annihilation_expectation() / alpha).re)
}

/// Overlap `⟨gα| ρ_a |gα⟩` with the ideally amplified coherent state.
pub fn fidelity_to_ideal(seed: &SeedSpec, dim: usize) -> Result<f64> {
    let rho = amplified_coherent_density(seed, dim)?;
    let target_energy = seed.gain * seed.gain * seed.nbar;
    let target_tail = poisson_tail(dim, target_energy);
    if target_tail > DEFAULT_TAIL_TOLERANCE {
        return Err(Error::Truncation {
            dim,
            tail_mass: target_tail,
            tolerance: DEFAULT_TAIL_TOLERANCE,
        });
    }

    let target: Vec<Complex64> = (0..dim)
        .map(|n| {
            let nf = n as f64;
            let ln_mod = if target_energy > 0.0 {
                0.5 * (-target_energy + nf * target_energy.ln() - ln_gamma(nf + 1.0))
            } else if n == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            };
            Complex64::from_polar(ln_mod.exp(), nf * seed.phase)
        })
        .collect();

    let elements = rho.elements();
    let mut overlap = Complex64::new(0.0, 0.0);
    for n in 0..dim {
        for m in 0..dim {
            overlap += target[n].conj() * elements[(n, m)] * target[m];
        }
    }
    Ok(overlap.re)
}
