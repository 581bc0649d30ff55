//! Parameter sweeps and CSV output.
//!
//! A sweep varies one parameter over a grid while the rest of a
//! [`Parameters`] set stays fixed. Points are evaluated in parallel and
//! written back in grid order, so the CSV is byte-identical across runs and
//! thread counts.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{
    amplification_ratio, amplitude_capacity, mutual_information, phase_vs_amplitude_ratio,
    ChannelConfig, Truncation,
};
use crate::error::{Error, Result};
use crate::fock::SeedSpec;
use crate::noise::{NoiseModel, PowerLawParams};
use crate::povm::PovmKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Static,
    PowerLaw,
}

/// Flat parameter set from which a [`ChannelConfig`] is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub nbar: f64,
    pub gain: f64,
    pub noise: NoiseKind,
    pub tau: f64,
    pub gamma_rate: f64,
    pub gamma_inv_corr: f64,
    pub exponent_a: f64,
    pub omega: f64,
    pub time: f64,
    pub povm: PovmKind,
    pub m_symbols: usize,
    pub eta: f64,
    pub dim: Truncation,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            nbar: 1.0,
            gain: 1.0,
            noise: NoiseKind::Static,
            tau: 0.0,
            gamma_rate: 1.0,
            gamma_inv_corr: 1.0,
            exponent_a: 3.0,
            omega: 0.0,
            time: 0.0,
            povm: PovmKind::Canonical,
            m_symbols: 20,
            eta: 1.0,
            dim: Truncation::Auto,
        }
    }
}

impl Parameters {
    pub fn channel_config(&self) -> ChannelConfig {
        let noise = match self.noise {
            NoiseKind::Static => NoiseModel::Static { tau: self.tau },
            NoiseKind::PowerLaw => NoiseModel::PowerLaw(
                PowerLawParams::new(self.gamma_rate, self.gamma_inv_corr, self.exponent_a)
                    .with_omega(self.omega),
            ),
        };
        ChannelConfig {
            seed: SeedSpec::amplified(self.nbar, self.gain),
            noise,
            time: self.time,
            povm: self.povm,
            m_symbols: self.m_symbols,
            dim: self.dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel_config().validate()?;
        if !(self.eta >= 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "eta must lie in [0, 1], got {}",
                self.eta
            )));
        }
        if self.noise == NoiseKind::Static
            && !(self.gamma_rate.is_finite() && self.gamma_rate > 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "gamma-rate must be > 0, got {}",
                self.gamma_rate
            )));
        }
        Ok(())
    }

    /// Sets one swept variable. Sweeping `time` under static noise sets
    /// `τ = Γ t`, the Markovian limit of the dynamical model.
    pub fn set(&mut self, variable: SweepVariable, value: f64) -> Result<()> {
        match variable {
            SweepVariable::Tau => self.tau = value,
            SweepVariable::Nbar => self.nbar = value,
            SweepVariable::Gain => self.gain = value,
            SweepVariable::Time => {
                self.time = value;
                if self.noise == NoiseKind::Static {
                    self.tau = self.gamma_rate * value;
                }
            }
            SweepVariable::Eta => self.eta = value,
            SweepVariable::MSymbols => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "m_symbols must be an integer, got {value}"
                    )));
                }
                self.m_symbols = value as usize;
            }
            SweepVariable::TCorr => {
                self.gamma_inv_corr = 1.0 / value;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nbar={} gain={} m_symbols={} povm={} eta={} dim={} ",
            self.nbar,
            self.gain,
            self.m_symbols,
            self.povm.label(),
            self.eta,
            self.dim
        )?;
        match self.noise {
            NoiseKind::Static => write!(f, "noise=static tau={}", self.tau),
            NoiseKind::PowerLaw => write!(
                f,
                "noise=power-law gamma_rate={} gamma_inv={} t_corr={} exponent_a={} omega={} time={}",
                self.gamma_rate,
                self.gamma_inv_corr,
                1.0 / self.gamma_inv_corr,
                self.exponent_a,
                self.omega,
                self.time
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Tau,
    Nbar,
    Gain,
    Time,
    Eta,
    MSymbols,
    TCorr,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Tau => "tau",
            SweepVariable::Nbar => "nbar",
            SweepVariable::Gain => "gain",
            SweepVariable::Time => "time",
            SweepVariable::Eta => "eta",
            SweepVariable::MSymbols => "m_symbols",
            SweepVariable::TCorr => "t_corr",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tau" => SweepVariable::Tau,
            "nbar" => SweepVariable::Nbar,
            "gain" => SweepVariable::Gain,
            "time" => SweepVariable::Time,
            "eta" => SweepVariable::Eta,
            "m_symbols" | "m-symbols" => SweepVariable::MSymbols,
            "t_corr" | "t-corr" => SweepVariable::TCorr,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown sweep variable '{other}'"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    /// Mutual information with the canonical receiver.
    IId,
    /// Mutual information with the Husimi-Q receiver.
    IQ,
    RQId,
    /// `I_c / I_AC` with the configured receiver and gain.
    RAmp,
    /// `I_Q / C_amp(η, n̄_eff)`.
    RQAmp,
    /// `C_amp(η, n̄_eff)`.
    CAmp,
    Sigma,
}

impl Output {
    pub fn name(&self) -> &'static str {
        match self {
            Output::IId => "I_ID",
            Output::IQ => "I_Q",
            Output::RQId => "R_Q_ID",
            Output::RAmp => "R_amp",
            Output::RQAmp => "R_Q_amp",
            Output::CAmp => "C_amp",
            Output::Sigma => "sigma",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Output>> {
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I_ID" => Output::IId,
            "I_Q" => Output::IQ,
            "R_Q_ID" => Output::RQId,
            "R_amp" => Output::RAmp,
            "R_Q_amp" => Output::RQAmp,
            "C_amp" => Output::CAmp,
            "sigma" => Output::Sigma,
            other => return Err(Error::InvalidConfig(format!("unknown output '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` points from `start` to `stop` inclusive.
pub fn grid_range(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidConfig("grid needs at least one point".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    if spacing == Spacing::Log && (start.is_nan() || stop.is_nan() || start <= 0.0 || stop <= 0.0) {
        return Err(Error::InvalidConfig(
            "log grid needs positive endpoints".into(),
        ));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                return start;
            }
            if i == count - 1 {
                return stop;
            }
            let frac = i as f64 / last;
            match spacing {
                Spacing::Linear => start + (stop - start) * frac,
                Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * frac).exp(),
            }
        })
        .collect())
}

/// Parses `start:stop:count` or `start:stop:count:log`.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || {
        Error::InvalidConfig(format!(
            "range must be start:stop:count[:linear|log], got '{s}'"
        ))
    };
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    let spacing = match parts.get(3).map(|p| p.trim()) {
        None | Some("linear") | Some("lin") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(_) => return Err(bad()),
    };
    grid_range(start, stop, count, spacing)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad grid value '{p}'")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub base: Parameters,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("sweep grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "sweep grid has non-finite values".into(),
            ));
        }
        let increasing = self.grid.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidConfig(
                "sweep grid must be strictly monotone".into(),
            ));
        }
        if self.outputs.is_empty() {
            return Err(Error::InvalidConfig("no outputs requested".into()));
        }
        for &value in &self.grid {
            self.point(value)?.validate().map_err(|e| {
                Error::InvalidConfig(format!(
                    "{} = {value} in series '{}': {e}",
                    self.variable.name(),
                    self.label
                ))
            })?;
        }
        Ok(())
    }

    fn point(&self, value: f64) -> Result<Parameters> {
        let mut p = self.base;
        p.set(self.variable, value)?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub outputs: Vec<Option<f64>>,
    pub tail_mass: Option<f64>,
    pub dim: Option<usize>,
    pub errors: Vec<String>,
}

/// Evaluates every requested output at one parameter point. Failures are
/// recorded per output and do not abort the point.
pub fn evaluate_point(params: &Parameters, outputs: &[Output]) -> PointResult {
    let config = params.channel_config();
    let mut errors = Vec::new();
    let mut record = |name: &str, r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            None
        }
    };

    let ideal = || mutual_information(&config.with_povm(PovmKind::Canonical));
    let husimi = || mutual_information(&config.with_povm(PovmKind::HusimiQ));
    let needs_ideal = outputs
        .iter()
        .any(|o| matches!(o, Output::IId | Output::RQId));
    let needs_husimi = outputs
        .iter()
        .any(|o| matches!(o, Output::IQ | Output::RQId | Output::CAmp));
    let ideal = if needs_ideal { Some(ideal()) } else { None };
    let husimi = if needs_husimi { Some(husimi()) } else { None };

    let mut values = Vec::with_capacity(outputs.len());
    for output in outputs {
        let r = match output {
            Output::IId => ideal.clone().unwrap().map(|r| r.mutual_information_bits),
            Output::IQ => husimi.clone().unwrap().map(|r| r.mutual_information_bits),
            Output::RQId => match (ideal.clone().unwrap(), husimi.clone().unwrap()) {
                (Ok(i), Ok(q)) if i.mutual_information_bits > 0.0 => {
                    Ok(q.mutual_information_bits / i.mutual_information_bits)
                }
                (Ok(_), Ok(_)) => Err(Error::UndefinedRatio("I_ID is zero".into())),
                (Err(e), _) | (_, Err(e)) => Err(e),
            },
            Output::RAmp => amplification_ratio(&config, params.gain),
            Output::RQAmp => {
                phase_vs_amplitude_ratio(&config.with_povm(PovmKind::HusimiQ), params.eta)
            }
            Output::CAmp => husimi
                .clone()
                .unwrap()
                .map(|r| amplitude_capacity(params.eta, r.mean_photon_number)),
            Output::Sigma => config.sigma(),
        };
        values.push(record(output.name(), r));
    }

    let (tail_mass, dim) = match config.seed_state() {
        Ok(rho) => (Some(rho.tail_mass()), Some(rho.dim())),
        Err(e) => {
            errors.push(format!("seed: {e}"));
            (None, None)
        }
    };
    PointResult {
        outputs: values,
        tail_mass,
        dim,
        errors,
    }
}

/// Runs a single sweep; see [`run_series`].
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<String> {
    run_series("sweep", std::slice::from_ref(spec), threads)
}

/// Evaluates all points of all series and renders them as one CSV table.
/// Every series must share the swept variable and the output list.
pub fn run_series(name: &str, series: &[SweepSpec], threads: Option<usize>) -> Result<String> {
    let first = series
        .first()
        .ok_or_else(|| Error::InvalidConfig("no series to run".into()))?;
    for s in series {
        if s.variable != first.variable || s.outputs != first.outputs {
            return Err(Error::InvalidConfig(
                "all series must share the swept variable and outputs".into(),
            ));
        }
        s.validate()?;
    }
    let jobs: Vec<(usize, f64)> = series
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.grid.iter().map(move |&v| (i, v)))
        .collect();

    let eval = |&(i, value): &(usize, f64)| -> PointResult {
        let spec = &series[i];
        let params = spec.point(value).expect("validated above");
        evaluate_point(&params, &spec.outputs)
    };

    let results: Vec<PointResult> = match threads {
        Some(1) => jobs.iter().map(eval).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(|| jobs.par_iter().map(eval).collect()),
        None => jobs.par_iter().map(eval).collect(),
    };

    let mut csv = String::new();
    writeln!(csv, "# psk-nla {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(csv, "# run: {name}").unwrap();
    for s in series {
        writeln!(
            csv,
            "# series '{}': variable={} points={} first={} last={} | {}",
            s.label,
            s.variable.name(),
            s.grid.len(),
            s.grid[0],
            s.grid[s.grid.len() - 1],
            s.base
        )
        .unwrap();
    }
    let mut header = vec!["series".to_string(), first.variable.name().to_string()];
    header.extend(first.outputs.iter().map(|o| o.name().to_string()));
    header.extend(["tail_mass", "dim", "error"].map(String::from));
    writeln!(csv, "{}", header.join(",")).unwrap();

    for ((i, value), r) in jobs.iter().zip(&results) {
        let mut row = vec![series[*i].label.clone(), format_number(*value)];
        row.extend(
            r.outputs
                .iter()
                .map(|v| v.map(format_number).unwrap_or_default()),
        );
        row.push(r.tail_mass.map(format_number).unwrap_or_default());
        row.push(r.dim.map(|d| d.to_string()).unwrap_or_default());
        row.push(sanitize(&r.errors.join("; ")));
        writeln!(csv, "{}", row.join(",")).unwrap();
    }
    Ok(csv)
}

/// Twelve significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}

fn sanitize(s: &str) -> String {
    s.replace([',', '\n', '\r', '"'], " ")
}

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig2-left", "fig2-right", "fig3"];

fn fmt_label(parts: &[(&str, f64)]) -> String {
    parts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Series reproducing the data behind each figure.
pub fn preset(name: &str) -> Result<Vec<SweepSpec>> {
    match name {
        "fig1" => {
            // Static noise, M = 20. Gain curves at n̄ = 1 and energy curves at g = 2.
            let grid = grid_range(0.0, 3.0, 61, Spacing::Linear)?;
            let outputs = vec![Output::IId, Output::IQ, Output::RQId, Output::RAmp];
            let base = Parameters {
                povm: PovmKind::HusimiQ,
                m_symbols: 20,
                ..Parameters::default()
            };
            let mut series: Vec<SweepSpec> = [1.0, 1.2, 1.6, 2.0]
                .iter()
                .map(|&g| SweepSpec {
                    label: fmt_label(&[("nbar", 1.0), ("gain", g)]),
                    variable: SweepVariable::Tau,
                    grid: grid.clone(),
                    base: Parameters {
                        nbar: 1.0,
                        gain: g,
                        ..base
                    },
                    outputs: outputs.clone(),
                })
                .collect();
            series.extend([0.25, 0.5, 1.5, 2.0, 3.0].iter().map(|&n| SweepSpec {
                label: fmt_label(&[("nbar", n), ("gain", 2.0)]),
                variable: SweepVariable::Tau,
                grid: grid.clone(),
                base: Parameters {
                    nbar: n,
                    gain: 2.0,
                    ..base
                },
                outputs: outputs.clone(),
            }));
            Ok(series)
        }
        "fig2-left" => {
            // Noiseless channels versus energy; M = 30 as in the figure.
            let grid = grid_range(0.01, 10.0, 61, Spacing::Log)?;
            Ok([1.0, 2.0]
                .iter()
                .map(|&g| SweepSpec {
                    label: fmt_label(&[("gain", g)]),
                    variable: SweepVariable::Nbar,
                    grid: grid.clone(),
                    base: Parameters {
                        gain: g,
                        m_symbols: 30,
                        eta: 1.0,
                        ..Parameters::default()
                    },
                    outputs: vec![Output::IId, Output::IQ, Output::CAmp],
                })
                .collect())
        }
        "fig2-right" => {
            // I_Q / C_amp over a (τ, η) grid for g = 2, M = 20.
            let taus = grid_range(0.0, 2.0, 20, Spacing::Linear)?;
            let etas = grid_range(0.05, 1.0, 20, Spacing::Linear)?;
            let mut series = Vec::new();
            for nbar in [0.2, 1.0, 2.0] {
                for &eta in &etas {
                    series.push(SweepSpec {
                        label: fmt_label(&[("nbar", nbar), ("eta", eta)]),
                        variable: SweepVariable::Tau,
                        grid: taus.clone(),
                        base: Parameters {
                            nbar,
                            gain: 2.0,
                            eta,
                            povm: PovmKind::HusimiQ,
                            m_symbols: 20,
                            ..Parameters::default()
                        },
                        outputs: vec![Output::IQ, Output::CAmp, Output::RQAmp],
                    });
                }
            }
            Ok(series)
        }
        "fig3" => {
            // Power-law noise with Γ = 1, a = 3 against static τ = Γt.
            let grid = grid_range(0.05, 3.0, 60, Spacing::Linear)?;
            let outputs = vec![
                Output::IId,
                Output::IQ,
                Output::RQId,
                Output::RQAmp,
                Output::Sigma,
            ];
            let base = Parameters {
                gain: 2.0,
                gamma_rate: 1.0,
                exponent_a: 3.0,
                m_symbols: 20,
                povm: PovmKind::HusimiQ,
                ..Parameters::default()
            };
            let noise = |t_corr: Option<f64>, p: Parameters| match t_corr {
                Some(tc) => Parameters {
                    noise: NoiseKind::PowerLaw,
                    gamma_inv_corr: 1.0 / tc,
                    ..p
                },
                None => Parameters {
                    noise: NoiseKind::Static,
                    ..p
                },
            };
            let label = |t_corr: Option<f64>, nbar: f64, eta: f64| match t_corr {
                Some(tc) => fmt_label(&[("t_corr", tc), ("nbar", nbar), ("eta", eta)]),
                None => format!("static {}", fmt_label(&[("nbar", nbar), ("eta", eta)])),
            };
            let mut series = Vec::new();
            for t_corr in [None, Some(0.5), Some(1.0), Some(5.0)] {
                series.push(SweepSpec {
                    label: label(t_corr, 2.0, 1.0),
                    variable: SweepVariable::Time,
                    grid: grid.clone(),
                    base: noise(
                        t_corr,
                        Parameters {
                            nbar: 2.0,
                            eta: 1.0,
                            ..base
                        },
                    ),
                    outputs: outputs.clone(),
                });
            }
            for t_corr in [None, Some(1.0), Some(5.0)] {
                for eta in [0.2, 0.4, 0.6, 0.8, 1.0] {
                    series.push(SweepSpec {
                        label: label(t_corr, 0.2, eta),
                        variable: SweepVariable::Time,
                        grid: grid.clone(),
                        base: noise(
                            t_corr,
                            Parameters {
                                nbar: 0.2,
                                eta,
                                ..base
                            },
                        ),
                        outputs: outputs.clone(),
                    });
                }
            }
            Ok(series)
        }
        other => Err(Error::InvalidConfig(format!(
            "unknown preset '{other}', expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub fn run_preset(name: &str, threads: Option<usize>) -> Result<String> {
    run_series(name, &preset(name)?, threads)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            grid_range(0.0, 1.0, 3, Spacing::Linear).unwrap(),
            vec![0.0, 0.5, 1.0]
        );
        let g = grid_range(0.01, 10.0, 4, Spacing::Log).unwrap();
        assert!((g[1] - 0.1).abs() < 1e-15 && g[3] == 10.0);
        assert_eq!(parse_range("0:3:61").unwrap().len(), 61);
        assert!(parse_range("0:3").is_err());
        assert!(parse_range("0:1:5:log").is_err());
        assert_eq!(parse_list("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn number_format_has_twelve_digits() {
        assert_eq!(format_number(0.5), "5.00000000000e-1");
        assert_eq!(format_number(1.0 / 3.0), "3.33333333333e-1");
    }

    #[test]
    fn rejects_bad_grids_and_points() {
        let mut spec = SweepSpec {
            label: "x".into(),
            variable: SweepVariable::Tau,
            grid: vec![0.0, 0.5, 0.5],
            base: Parameters::default(),
            outputs: vec![Output::IId],
        };
        assert!(spec.validate().is_err());
        spec.grid = vec![];
        assert!(spec.validate().is_err());
        spec.variable = SweepVariable::Gain;
        spec.grid = vec![0.5, 1.0];
        assert!(spec.validate().is_err());
        spec.grid = vec![1.0, 2.0];
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn static_time_sweep_sets_tau() {
        let mut p = Parameters {
            gamma_rate: 2.0,
            ..Parameters::default()
        };
        p.set(SweepVariable::Time, 0.5).unwrap();
        assert_eq!(p.tau, 1.0);
        p.set(SweepVariable::TCorr, 4.0).unwrap();
        assert_eq!(p.gamma_inv_corr, 0.25);
    }

    #[test]
    fn errors_go_to_error_column() {
        let spec = SweepSpec {
            label: "vac".into(),
            variable: SweepVariable::Nbar,
            grid: vec![0.0, 1.0],
            base: Parameters::default(),
            outputs: vec![Output::RQId, Output::IId],
        };
        let csv = run_sweep(&spec, Some(1)).unwrap();
        let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "series,nbar,R_Q_ID,I_ID,tail_mass,dim,error");
        let vacuum: Vec<&str> = rows[1].split(',').collect();
        assert_eq!(vacuum[2], "");
        assert!(vacuum[6].contains("R_Q_ID"));
        let ok: Vec<&str> = rows[2].split(',').collect();
        assert!(!ok[2].is_empty() && ok[6].is_empty());
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("fig9").is_err());
        for name in PRESET_NAMES {
            for s in preset(name).unwrap() {
                s.validate().unwrap();
            }
        }
    }
}
