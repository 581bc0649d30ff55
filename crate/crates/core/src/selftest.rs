//! Built-in oracle checks run by `psk-nla selftest`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{self, SeedSpec};
use crate::noise::{self, PowerLawParams};
use crate::povm::{self, AlphabetSpec, PovmKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, measured: std::result::Result<f64, String>, limit: f64) -> Self {
        match measured {
            Ok(v) => Check {
                name,
                passed: v <= limit,
                detail: format!("{v:.3e} (limit {limit:.0e})"),
            },
            Err(e) => Check {
                name,
                passed: false,
                detail: e,
            },
        }
    }
}

fn sigma_oracle() -> Result<f64, String> {
    let mut worst = 0.0_f64;
    for a in [1.5, 2.0, 2.5, 3.0] {
        for gamma in [0.2, 1.0, 5.0] {
            for t in [0.1, 1.0, 5.0] {
                let p = PowerLawParams::new(1.0, gamma, a);
                let closed = noise::sigma_power_law(t, &p).map_err(|e| e.to_string())?;
                let quad = noise::sigma_quadrature(t, &p).map_err(|e| e.to_string())?;
                worst = worst.max((closed - quad).abs() / quad.abs());
            }
        }
    }
    Ok(worst)
}

/// Largest element deviation in units of the per-element standard error.
fn monte_carlo_oracle(samples: usize, seed: u64) -> Result<f64, String> {
    let sigma = 0.5;
    let rho = fock::amplified_coherent_density(&SeedSpec::amplified(1.0, 2.0), 20)
        .map_err(|e| e.to_string())?;
    let exact = noise::apply_dephasing(&rho, sigma).map_err(|e| e.to_string())?;
    let mc = noise::dephase_monte_carlo(&rho, sigma, samples, seed).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for n in 0..rho.dim() {
        for m in 0..n {
            let d2 = ((n - m) * (n - m)) as f64;
            let var_cos = 0.5 * (1.0 + (-2.0 * d2 * sigma).exp()) - (-d2 * sigma).exp();
            let var_sin = 0.5 * (1.0 - (-2.0 * d2 * sigma).exp());
            let se = rho.get(n, m).norm() * ((var_cos + var_sin) / samples as f64).sqrt();
            if se > 0.0 {
                worst = worst.max((mc.get(n, m) - exact.get(n, m)).norm() / se);
            }
        }
    }
    Ok(worst)
}

fn covariance_oracle() -> Result<f64, String> {
    let rho = fock::amplified_coherent_density(&SeedSpec::amplified(1.0, 2.0), 30)
        .and_then(|r| noise::apply_dephasing(&r, 0.3))
        .map_err(|e| e.to_string())?;
    let m = 10;
    let alphabet = AlphabetSpec::new(m).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for kind in [PovmKind::Canonical, PovmKind::HusimiQ] {
        let povm = povm::povm_matrix(kind, 30).map_err(|e| e.to_string())?;
        let table = povm::conditional_probability_table(&rho, &povm, &alphabet)
            .map_err(|e| e.to_string())?;
        for (k, row) in table.iter().enumerate() {
            for (l, &p) in row.iter().enumerate() {
                worst = worst.max((p - table[0][(l + m - k) % m]).abs());
            }
        }
    }
    Ok(worst)
}

fn completeness_oracle() -> Result<f64, String> {
    let dim = 30;
    let identity = DMatrix::<Complex64>::identity(dim, dim);
    let mut worst = 0.0_f64;
    for kind in [PovmKind::Canonical, PovmKind::HusimiQ] {
        let povm = povm::povm_matrix(kind, dim).map_err(|e| e.to_string())?;
        for m in [2, 10, 20] {
            let alphabet = AlphabetSpec::new(m).map_err(|e| e.to_string())?;
            let total = (0..m)
                .map(|l| povm::outcome_operator(&povm, &alphabet, l))
                .fold(DMatrix::zeros(dim, dim), |acc, op| acc + op);
            worst = (total - &identity)
                .iter()
                .map(|z| z.norm())
                .fold(worst, f64::max);
        }
    }
    Ok(worst)
}

fn effective_gain_oracle() -> Result<f64, String> {
    fock::effective_gain(&SeedSpec::amplified(1.0, 2.0), 30)
        .map(|g| (g - 1.4).abs())
        .map_err(|e| e.to_string())
}

pub fn run(rng_seed: u64) -> Vec<Check> {
    vec![
        Check::new(
            "sigma closed form vs quadrature (rel)",
            sigma_oracle(),
            1e-6,
        ),
        Check::new(
            "Monte-Carlo vs analytic dephasing (std errors)",
            monte_carlo_oracle(200_000, rng_seed),
            4.0,
        ),
        Check::new(
            "POVM covariance |p(l|k) - p(l-k|0)|",
            covariance_oracle(),
            1e-12,
        ),
        Check::new(
            "POVM completeness |sum Pi_l - 1|",
            completeness_oracle(),
            1e-10,
        ),
        Check::new(
            "effective gain |g_eff - 1.4|",
            effective_gain_oracle(),
            1e-9,
        ),
    ]
}
