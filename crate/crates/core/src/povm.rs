//! Covariant phase measurements and PSK outcome statistics.
//!
//! A covariant phase POVM is fixed by a real symmetric coefficient matrix
//! `A_{n,m}`: `π(θ) = (1/2π) Σ A_{n,m} e^{-i(n-m)θ} |n⟩⟨m|`. Integrating it
//! over the bin `Σ_l = [φ_l - Δ/2, φ_l + Δ/2)` with `φ_l = 2πl/M` gives
//! `Π_l = Σ A_{n,m} f_{n-m}(l) |n⟩⟨m|` where
//! `f_d(l) = e^{-2πi l d / M} sin(πd/M) / (πd)`.
//!
//! Symbol `k` is encoded as `ρ_k = e^{-iφ_k a†a} ρ_0 e^{iφ_k a†a}`, the
//! rotation under which `Π_l` is covariant, so `p(l|k)` depends on `l - k`
//! only.

use std::f64::consts::PI;

use libm::lgamma as ln_gamma;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Series terms in `q(s)` with magnitude below this are dropped.
pub const SERIES_CUTOFF: f64 = 1e-16;

/// `q(s)` below `-NEGATIVE_TOLERANCE` is an error; smaller negatives are clamped.
pub const NEGATIVE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PovmKind {
    /// Ideal phase measurement, `A_{n,m} = 1`.
    Canonical,
    /// Angle margin of the Husimi Q-function (heterodyne),
    /// `A_{n,m} = Γ(1 + (n+m)/2) / √(n! m!)`.
    HusimiQ,
}

impl PovmKind {
    pub fn label(&self) -> &'static str {
        match self {
            PovmKind::Canonical => "canonical",
            PovmKind::HusimiQ => "husimi-q",
        }
    }
}

impl std::str::FromStr for PovmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" | "ideal" | "id" => Ok(PovmKind::Canonical),
            "husimi-q" | "husimiq" | "q" => Ok(PovmKind::HusimiQ),
            other => Err(Error::InvalidConfig(format!(
                "unknown POVM '{other}', expected canonical or husimi-q"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePovm {
    kind: PovmKind,
    a_matrix: DMatrix<f64>,
}

impl PhasePovm {
    pub fn kind(&self) -> PovmKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.a_matrix.nrows()
    }

    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.a_matrix
    }

    pub fn coefficient(&self, n: usize, m: usize) -> f64 {
        self.a_matrix[(n, m)]
    }
}

fn husimi_coefficient(n: usize, m: usize) -> f64 {
    if n == m {
        return 1.0;
    }
    let (nf, mf) = (n as f64, m as f64);
    let ln_a = ln_gamma(1.0 + 0.5 * (nf + mf)) - 0.5 * (ln_gamma(nf + 1.0) + ln_gamma(mf + 1.0));
    ln_a.exp().min(1.0)
}

pub fn povm_matrix(kind: PovmKind, dim: usize) -> Result<PhasePovm> {
    if dim == 0 {
        return Err(Error::Domain("POVM dimension must be at least 1".into()));
    }
    let a_matrix = match kind {
        PovmKind::Canonical => DMatrix::from_element(dim, dim, 1.0),
        PovmKind::HusimiQ => {
            let mut a = DMatrix::zeros(dim, dim);
            for n in 0..dim {
                for m in 0..=n {
                    let v = husimi_coefficient(n, m);
                    a[(n, m)] = v;
                    a[(m, n)] = v;
                }
            }
            a
        }
    };
    Ok(PhasePovm { kind, a_matrix })
}

/// M-ary PSK alphabet with phases `2πl/M` and bins of width `2π/M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetSpec {
    m_symbols: usize,
}

impl AlphabetSpec {
    pub fn new(m_symbols: usize) -> Result<Self> {
        if m_symbols < 2 {
            return Err(Error::InvalidConfig(format!(
                "alphabet needs at least 2 symbols, got {m_symbols}"
            )));
        }
        Ok(Self { m_symbols })
    }

    pub fn size(&self) -> usize {
        self.m_symbols
    }

    pub fn bin_width(&self) -> f64 {
        2.0 * PI / self.m_symbols as f64
    }

    pub fn phase(&self, l: usize) -> f64 {
        self.bin_width() * l as f64
    }

    /// Half-open bin `[φ_l - Δ/2, φ_l + Δ/2)`.
    pub fn bin(&self, l: usize) -> (f64, f64) {
        let centre = self.phase(l);
        let half = 0.5 * self.bin_width();
        (centre - half, centre + half)
    }
}

/// Resolution function `f_d(l) = (1/2π) ∫_{Σ_l} e^{-idθ} dθ`.
pub fn resolution_function(d: i64, l: i64, m_symbols: usize) -> Complex64 {
    let m = m_symbols as f64;
    if d == 0 {
        return Complex64::new(1.0 / m, 0.0);
    }
    let df = d as f64;
    // Reduce l·d mod M before scaling so large arguments keep full precision.
    let turns = (l * d).rem_euclid(m_symbols as i64) as f64;
    let amplitude = (PI * df / m).sin() / (PI * df);
    Complex64::from_polar(1.0, -2.0 * PI * turns / m) * amplitude
}

fn check_dims(rho: &DensityMatrix, povm: &PhasePovm) -> Result<()> {
    if povm.dim() < rho.dim() {
        return Err(Error::Domain(format!(
            "POVM dimension {} is smaller than state dimension {}",
            povm.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// Matrix of `Π_l` on the first `dim` Fock levels.
pub fn outcome_operator(povm: &PhasePovm, alphabet: &AlphabetSpec, l: usize) -> DMatrix<Complex64> {
    let dim = povm.dim();
    let m = alphabet.size();
    DMatrix::from_fn(dim, dim, |n, k| {
        resolution_function(n as i64 - k as i64, l as i64, m) * povm.coefficient(n, k)
    })
}

/// `p(l|k) = Tr[ρ_k Π_l] = Σ_{n,m} A_{n,m} f_{n-m}(l-k) ρ_{m,n}`, clamped to [0, 1].
pub fn conditional_probability(
    rho: &DensityMatrix,
    povm: &PhasePovm,
    alphabet: &AlphabetSpec,
    l: usize,
    k: usize,
) -> Result<f64> {
    check_dims(rho, povm)?;
    let m = alphabet.size();
    let offset = l as i64 - k as i64;
    let dim = rho.dim();
    let elements = rho.elements();
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..dim {
        for j in 0..dim {
            total += resolution_function(n as i64 - j as i64, offset, m)
                * povm.coefficient(n, j)
                * elements[(j, n)];
        }
    }
    Ok(total.re.clamp(0.0, 1.0))
}

/// Full `M × M` table `p(l|k)`, indexed `[k][l]`.
pub fn conditional_probability_table(
    rho: &DensityMatrix,
    povm: &PhasePovm,
    alphabet: &AlphabetSpec,
) -> Result<Vec<Vec<f64>>> {
    let m = alphabet.size();
    (0..m)
        .map(|k| {
            (0..m)
                .map(|l| conditional_probability(rho, povm, alphabet, l, k))
                .collect()
        })
        .collect()
}

/// Distribution `q(s) = p(s|0)` of the offset between decoded and sent symbol.
///
/// Evaluated as `1/M + 2 Σ_{d≥1} Re[f_d(s) conj(S_d)]` with
/// `S_d = Σ_n A_{n+d,n} ρ_{n+d,n}`; for a real seed this is
/// `(1/M)[1 + 2M Σ_d Σ_n A_{n,n+d} ρ_{n+d,n} cos(2πds/M) sin(πd/M)/(πd)]`.
pub fn q_distribution(
    rho: &DensityMatrix,
    povm: &PhasePovm,
    alphabet: &AlphabetSpec,
) -> Result<Vec<f64>> {
    check_dims(rho, povm)?;
    let m = alphabet.size();
    let dim = rho.dim();
    let elements = rho.elements();

    let trace = rho.trace().re;
    let mut q = vec![trace / m as f64; m];
    for d in 1..dim {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut largest = 0.0_f64;
        for n in 0..dim - d {
            let term = elements[(n + d, n)] * povm.coefficient(n + d, n);
            largest = largest.max(term.norm());
            sum += term;
        }
        if largest < SERIES_CUTOFF {
            continue;
        }
        for (s, qs) in q.iter_mut().enumerate() {
            *qs += 2.0 * (resolution_function(d as i64, s as i64, m) * sum.conj()).re;
        }
    }

    for (index, qs) in q.iter_mut().enumerate() {
        if *qs < -NEGATIVE_TOLERANCE {
            return Err(Error::NegativeProbability { index, value: *qs });
        }
        if *qs < 0.0 {
            *qs = 0.0;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_density, SeedSpec};
    use crate::noise::apply_dephasing;
    use approx::assert_relative_eq;

    #[test]
    fn canonical_is_all_ones() {
        let p = povm_matrix(PovmKind::Canonical, 4).unwrap();
        assert_eq!(p.a_matrix(), &DMatrix::from_element(4, 4, 1.0));
    }

    #[test]
    fn husimi_entries() {
        let p = povm_matrix(PovmKind::HusimiQ, 40).unwrap();
        assert_eq!(p.coefficient(0, 0), 1.0);
        assert_relative_eq!(p.coefficient(0, 1), PI.sqrt() / 2.0, epsilon = 1e-14);
        // Γ(2) / √(0! 2!) = 1/√2
        assert_relative_eq!(p.coefficient(0, 2), 0.5f64.sqrt(), epsilon = 1e-14);
        for n in 0..40 {
            assert_eq!(p.coefficient(n, n), 1.0);
            for m in 0..40 {
                let a = p.coefficient(n, m);
                assert!(a > 0.0 && a <= 1.0);
                assert_eq!(a, p.coefficient(m, n));
            }
        }
    }

    #[test]
    fn husimi_decreases_away_from_diagonal() {
        let p = povm_matrix(PovmKind::HusimiQ, 40).unwrap();
        for total in 0..40usize {
            // Pairs (n, total - n) with growing |n - m|.
            let mut prev = f64::INFINITY;
            for n in (0..=total / 2).rev() {
                let m = total - n;
                if m >= 40 {
                    break;
                }
                let a = p.coefficient(n, m);
                assert!(a < prev, "sum {total}, n {n}");
                prev = a;
            }
        }
    }

    #[test]
    fn resolution_function_values() {
        assert_eq!(resolution_function(0, 3, 8), Complex64::new(0.125, 0.0));
        for m in [2usize, 5, 20] {
            for d in -(m as i64 - 1)..(m as i64) {
                let total: Complex64 = (0..m as i64).map(|l| resolution_function(d, l, m)).sum();
                let expected = if d == 0 { 1.0 } else { 0.0 };
                assert!((total - expected).norm() < 1e-14, "M={m} d={d}");
                for l in 0..m as i64 {
                    let a = resolution_function(-d, -l, m);
                    let b = resolution_function(d, l, m);
                    assert!((a - b).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn resolution_function_is_bin_integral() {
        // Closed-form bin integral of e^{-idθ} against a midpoint rule.
        let (m, d, l) = (7usize, 3i64, 2usize);
        let alphabet = AlphabetSpec::new(m).unwrap();
        let (lo, hi) = alphabet.bin(l);
        let steps = 20_000;
        let h = (hi - lo) / steps as f64;
        let integral: Complex64 = (0..steps)
            .map(|i| Complex64::from_polar(1.0, -(d as f64) * (lo + (i as f64 + 0.5) * h)) * h)
            .sum::<Complex64>()
            / (2.0 * PI);
        assert!((integral - resolution_function(d, l as i64, m)).norm() < 1e-8);
    }

    #[test]
    fn vacuum_gives_uniform_outcomes() {
        let rho = coherent_density(0.0, 6).unwrap();
        let alphabet = AlphabetSpec::new(5).unwrap();
        for kind in [PovmKind::Canonical, PovmKind::HusimiQ] {
            let povm = povm_matrix(kind, 6).unwrap();
            for l in 0..5 {
                for k in 0..5 {
                    let p = conditional_probability(&rho, &povm, &alphabet, l, k).unwrap();
                    assert_relative_eq!(p, 0.2, epsilon = 1e-15);
                }
            }
            let q = q_distribution(&rho, &povm, &alphabet).unwrap();
            assert!(q.iter().all(|&x| (x - 0.2).abs() < 1e-15));
        }
    }

    #[test]
    fn rows_sum_to_one() {
        let rho = coherent_density(1.5, 30).unwrap();
        let alphabet = AlphabetSpec::new(6).unwrap();
        let povm = povm_matrix(PovmKind::HusimiQ, 30).unwrap();
        let table = conditional_probability_table(&rho, &povm, &alphabet).unwrap();
        for row in table {
            assert_relative_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fully_dephased_is_uniform() {
        let rho = coherent_density(2.0, 30).unwrap();
        let rho = apply_dephasing(&rho, 1e3).unwrap();
        let alphabet = AlphabetSpec::new(20).unwrap();
        let povm = povm_matrix(PovmKind::Canonical, 30).unwrap();
        let q = q_distribution(&rho, &povm, &alphabet).unwrap();
        assert!(q.iter().all(|&x| (x - 0.05).abs() < 1e-10));
    }

    #[test]
    fn q_matches_conditional_probability() {
        let seed = SeedSpec::amplified(1.0, 2.0);
        let rho = crate::fock::amplified_coherent_density(&seed, 30).unwrap();
        let rho = apply_dephasing(&rho, 0.3).unwrap();
        let alphabet = AlphabetSpec::new(9).unwrap();
        for kind in [PovmKind::Canonical, PovmKind::HusimiQ] {
            let povm = povm_matrix(kind, 30).unwrap();
            let q = q_distribution(&rho, &povm, &alphabet).unwrap();
            for (s, &qs) in q.iter().enumerate() {
                for k in 0..9 {
                    let p =
                        conditional_probability(&rho, &povm, &alphabet, (s + k) % 9, k).unwrap();
                    assert!((p - qs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bins_partition_circle() {
        let a = AlphabetSpec::new(8).unwrap();
        for l in 0..8 {
            let (_, hi) = a.bin(l);
            let (next_lo, _) = a.bin(l + 1);
            assert_relative_eq!(hi, next_lo, epsilon = 1e-14);
        }
        assert_relative_eq!(a.bin(7).1 - a.bin(0).0, 2.0 * PI, epsilon = 1e-14);
        assert!(AlphabetSpec::new(1).is_err());
    }

    #[test]
    fn parse_kind() {
        assert_eq!(
            "canonical".parse::<PovmKind>().unwrap(),
            PovmKind::Canonical
        );
        assert_eq!("husimi-q".parse::<PovmKind>().unwrap(), PovmKind::HusimiQ);
        assert!("other".parse::<PovmKind>().is_err());
    }
}
