//! End-to-end channel figures of merit.
//!
//! A configuration fixes the seed, the environment, the receiver and the
//! alphabet. Evaluation builds the seed density matrix, dephases it with
//! σ(t), forms `q(s)` and returns `I = log₂ M + Σ q(s) log₂ q(s)` in bits.

use crate::error::{Error, Result};
use crate::fock::{self, DensityMatrix, SeedSpec, DEFAULT_TAIL_TOLERANCE};
use crate::noise::{self, NoiseModel};
use crate::povm::{self, AlphabetSpec, PovmKind};

/// Probabilities below this are left out of the entropy sum.
pub const ENTROPY_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Smallest dimension whose discarded trace weight is at most 1e-12.
    Auto,
    Fixed(usize),
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truncation::Auto => write!(f, "auto"),
            Truncation::Fixed(d) => write!(f, "{d}"),
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Truncation::Auto);
        }
        s.parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .map(Truncation::Fixed)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "dim must be 'auto' or a positive integer, got '{s}'"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub seed: SeedSpec,
    pub noise: NoiseModel,
    /// Interaction time; only read by dynamical noise models.
    pub time: f64,
    pub povm: PovmKind,
    pub m_symbols: usize,
    pub dim: Truncation,
}

impl ChannelConfig {
    pub fn new(seed: SeedSpec, noise: NoiseModel, povm: PovmKind, m_symbols: usize) -> Self {
        Self {
            seed,
            noise,
            time: 0.0,
            povm,
            m_symbols,
            dim: Truncation::Auto,
        }
    }

    /// Static dephasing `τ` with the given seed and receiver.
    pub fn static_noise(seed: SeedSpec, tau: f64, povm: PovmKind, m_symbols: usize) -> Self {
        Self::new(seed, NoiseModel::Static { tau }, povm, m_symbols)
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn with_povm(mut self, povm: PovmKind) -> Self {
        self.povm = povm;
        self
    }

    pub fn with_gain(mut self, gain: f64) -> Self {
        self.seed.gain = gain;
        self
    }

    pub fn with_dim(mut self, dim: Truncation) -> Self {
        self.dim = dim;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.seed.validate()?;
        self.noise.validate()?;
        AlphabetSpec::new(self.m_symbols)?;
        if !(self.time.is_finite() && self.time >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "time must be finite and >= 0, got {}",
                self.time
            )));
        }
        if self.dim == Truncation::Fixed(0) {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        Ok(())
    }

    pub fn resolve_dim(&self) -> Result<usize> {
        match self.dim {
            Truncation::Auto => fock::auto_dimension(&self.seed, DEFAULT_TAIL_TOLERANCE),
            Truncation::Fixed(d) => Ok(d),
        }
    }

    /// Seed density matrix before transmission.
    pub fn seed_state(&self) -> Result<DensityMatrix> {
        self.validate()?;
        fock::amplified_coherent_density(&self.seed, self.resolve_dim()?)
    }

    /// Dephasing strength accumulated over the channel.
    pub fn sigma(&self) -> Result<f64> {
        self.noise.sigma(self.time)
    }

    /// Density matrix at the receiver, before the encoding rotation.
    pub fn received_state(&self) -> Result<DensityMatrix> {
        let rho = self.seed_state()?;
        noise::apply_dephasing(&rho, self.sigma()?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResult {
    pub q: Vec<f64>,
    pub mutual_information_bits: f64,
    pub sigma_used: f64,
    pub tail_mass: f64,
    pub dim: usize,
    /// `Tr[a†a ρ]` of the transmitted seed.
    pub mean_photon_number: f64,
    pub config: ChannelConfig,
}

/// `log₂ M + Σ q log₂ q` with `0 log 0 = 0`, clamped to `[0, log₂ M]`.
pub fn mutual_information_from_q(q: &[f64]) -> f64 {
    let m = q.len() as f64;
    let neg_entropy: f64 = q
        .iter()
        .filter(|&&p| p > ENTROPY_FLOOR)
        .map(|&p| p * p.log2())
        .sum();
    (m.log2() + neg_entropy).clamp(0.0, m.log2())
}

/// Mutual information in bits from a full table `p[k][l] = p(l|k)` under a
/// uniform prior.
pub fn mutual_information_from_table(table: &[Vec<f64>]) -> f64 {
    let m = table.len();
    let mf = m as f64;
    let mut total = 0.0;
    for l in 0..m {
        let column: f64 = table.iter().map(|row| row[l]).sum();
        for row in table {
            let p = row[l];
            if p > ENTROPY_FLOOR {
                total += p * (mf * p / column).log2();
            }
        }
    }
    total / mf
}

pub fn mutual_information(config: &ChannelConfig) -> Result<ChannelResult> {
    config.validate()?;
    let dim = config.resolve_dim()?;
    let rho = fock::amplified_coherent_density(&config.seed, dim)?;
    let sigma = config.sigma()?;
    let received = noise::apply_dephasing(&rho, sigma)?;
    let povm = povm::povm_matrix(config.povm, dim)?;
    let alphabet = AlphabetSpec::new(config.m_symbols)?;
    let q = povm::q_distribution(&received, &povm, &alphabet)?;
    let mutual_information_bits = mutual_information_from_q(&q);
    Ok(ChannelResult {
        q,
        mutual_information_bits,
        sigma_used: sigma,
        tail_mass: rho.tail_mass(),
        dim,
        mean_photon_number: rho.mean_photon_number(),
        config: *config,
    })
}

/// `C_amp(η) = log₂(1 + η n̄)`.
pub fn amplitude_capacity(eta: f64, nbar: f64) -> f64 {
    (eta * nbar).ln_1p() / std::f64::consts::LN_2
}

fn ratio(numerator: f64, denominator: f64, what: &str) -> Result<f64> {
    if denominator <= 0.0 {
        return Err(Error::UndefinedRatio(format!(
            "{what}: denominator is zero"
        )));
    }
    Ok(numerator / denominator)
}

/// `R_{Q/ID} = I_Q / I_ID`, all else equal.
pub fn receiver_ratio(config_base: &ChannelConfig) -> Result<f64> {
    let q = mutual_information(&config_base.with_povm(PovmKind::HusimiQ))?;
    let ideal = mutual_information(&config_base.with_povm(PovmKind::Canonical))?;
    ratio(
        q.mutual_information_bits,
        ideal.mutual_information_bits,
        "receiver ratio I_Q/I_ID",
    )
}

/// `I_c / I_AC`: plain coherent seed against the same input amplified with
/// nominal gain `gain`, same receiver and channel.
pub fn amplification_ratio(config: &ChannelConfig, gain: f64) -> Result<f64> {
    let coherent = mutual_information(&config.with_gain(1.0))?;
    let amplified = mutual_information(&config.with_gain(gain))?;
    ratio(
        coherent.mutual_information_bits,
        amplified.mutual_information_bits,
        "amplification ratio I_c/I_AC",
    )
}

/// `I(config) / C_amp(η, n̄_eff)` where the amplitude channel gets the same
/// mean photon number as the transmitted phase-channel seed.
pub fn phase_vs_amplitude_ratio(config: &ChannelConfig, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "eta must lie in (0, 1], got {eta}"
        )));
    }
    if config.seed.nbar <= 0.0 {
        return Err(Error::UndefinedRatio(
            "phase/amplitude ratio needs nbar > 0".into(),
        ));
    }
    let phase = mutual_information(config)?;
    let capacity = amplitude_capacity(eta, phase.mean_photon_number);
    ratio(
        phase.mutual_information_bits,
        capacity,
        "phase/amplitude ratio I/C_amp",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::PowerLawParams;
    use approx::assert_relative_eq;

    fn cfg(nbar: f64, gain: f64, tau: f64, povm: PovmKind, m: usize) -> ChannelConfig {
        ChannelConfig::static_noise(SeedSpec::amplified(nbar, gain), tau, povm, m)
    }

    #[test]
    fn vacuum_carries_no_information() {
        for m in [2, 7, 20] {
            for tau in [0.0, 1.0] {
                let r = mutual_information(&cfg(0.0, 2.0, tau, PovmKind::Canonical, m)).unwrap();
                assert_eq!(r.mutual_information_bits, 0.0);
            }
        }
    }

    #[test]
    fn strong_coherent_signal_approaches_log_m() {
        let r = mutual_information(&cfg(10.0, 1.0, 0.0, PovmKind::Canonical, 4)).unwrap();
        assert!((r.mutual_information_bits - 2.0).abs() < 0.05);
        let trend: Vec<f64> = [2.0, 5.0, 10.0]
            .iter()
            .map(|&n| {
                mutual_information(&cfg(n, 1.0, 0.0, PovmKind::Canonical, 4))
                    .unwrap()
                    .mutual_information_bits
            })
            .collect();
        assert!(trend.windows(2).all(|w| w[1] > w[0]), "{trend:?}");
    }

    #[test]
    fn fully_dephased_channel() {
        let r = mutual_information(&cfg(2.0, 2.0, 1e3, PovmKind::Canonical, 20)).unwrap();
        assert!(r.mutual_information_bits <= 1e-9);
    }

    #[test]
    fn amplitude_capacity_values() {
        assert_eq!(amplitude_capacity(1.0, 1.0), 1.0);
        assert_eq!(amplitude_capacity(0.0, 5.0), 0.0);
        assert_eq!(amplitude_capacity(0.3, 0.0), 0.0);
    }

    #[test]
    fn self_ratios_are_exactly_one() {
        let c = cfg(1.0, 2.0, 0.5, PovmKind::HusimiQ, 20);
        assert_eq!(amplification_ratio(&c, 1.0).unwrap(), 1.0);
        let i = mutual_information(&c).unwrap().mutual_information_bits;
        assert_eq!(ratio(i, i, "self").unwrap(), 1.0);
    }

    #[test]
    fn receiver_ratio_at_zero_noise() {
        let r = receiver_ratio(&cfg(1.0, 1.0, 0.0, PovmKind::Canonical, 20)).unwrap();
        assert!(r > 0.0 && r <= 1.0, "{r}");
        let err = receiver_ratio(&cfg(0.0, 1.0, 0.0, PovmKind::Canonical, 20)).unwrap_err();
        assert!(matches!(err, Error::UndefinedRatio(_)));
    }

    #[test]
    fn amplification_helps() {
        let r = amplification_ratio(&cfg(1.0, 1.0, 0.5, PovmKind::HusimiQ, 20), 2.0).unwrap();
        assert!(r < 1.0, "{r}");
    }

    #[test]
    fn phase_vs_amplitude_edges() {
        let c = cfg(1.0, 2.0, 0.2, PovmKind::HusimiQ, 20);
        assert!(phase_vs_amplitude_ratio(&c, 1e-12).unwrap() > 1e9);
        let dead = cfg(1.0, 2.0, 1e3, PovmKind::HusimiQ, 20);
        assert_eq!(phase_vs_amplitude_ratio(&dead, 1.0).unwrap(), 0.0);
        assert!(phase_vs_amplitude_ratio(&c, 0.0).is_err());
        assert!(matches!(
            phase_vs_amplitude_ratio(&cfg(0.0, 2.0, 0.2, PovmKind::HusimiQ, 20), 1.0),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn table_and_q_routes_agree() {
        let c = cfg(1.0, 1.6, 0.4, PovmKind::HusimiQ, 12);
        let res = mutual_information(&c).unwrap();
        let rho = c.received_state().unwrap();
        let povm = povm::povm_matrix(c.povm, rho.dim()).unwrap();
        let alphabet = AlphabetSpec::new(12).unwrap();
        let table = povm::conditional_probability_table(&rho, &povm, &alphabet).unwrap();
        assert_relative_eq!(
            mutual_information_from_table(&table),
            res.mutual_information_bits,
            epsilon = 1e-10
        );
    }

    #[test]
    fn power_law_config_uses_time() {
        let p = PowerLawParams::new(1.0, 1.0, 3.0);
        let c = ChannelConfig::new(
            SeedSpec::amplified(2.0, 2.0),
            NoiseModel::PowerLaw(p),
            PovmKind::Canonical,
            20,
        )
        .with_time(1.0);
        let r = mutual_information(&c).unwrap();
        assert_relative_eq!(r.sigma_used, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn truncation_parsing() {
        assert_eq!("auto".parse::<Truncation>().unwrap(), Truncation::Auto);
        assert_eq!("12".parse::<Truncation>().unwrap(), Truncation::Fixed(12));
        assert!("0".parse::<Truncation>().is_err());
        assert!("x".parse::<Truncation>().is_err());
    }
}
