//! Fidelities, ℓ1 coherence, revival peaks and the κ time-scale calibration.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::experiment::config::ExperimentConfig;
use crate::experiment::pipeline::{first_peak_fidelity, NoiseChannels};
use crate::linalg::{herm_eig, ComplexMatrix, Convention, DensityMatrix, StateVector, C64, NEGATIVE_SPECTRUM_TOL};
use crate::roots::bisect;

/// Purity above 1 − this counts as a pure state in [`fidelity_mixed`].
const PURITY_TOL: f64 = 1e-10;

/// |⟨a|b⟩|²
pub fn fidelity_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

/// Extracts ψ from a rank-one ρ = ψψ† using its largest-diagonal column.
fn pure_vector(rho: &DensityMatrix) -> Result<StateVector> {
    let m = rho.matrix();
    let j = (0..m.rows())
        .max_by(|&a, &b| m.get(a, a).re.total_cmp(&m.get(b, b).re))
        .expect("non-empty matrix");
    let column: ndarray::Array1<C64> = m.as_array().column(j).to_owned();
    StateVector::normalized(column, Convention::Computational)
}

/// Eigenvalues below this are treated as exact zeros of a density matrix.
const SUPPORT_TOL: f64 = 1e-14;

/// Uhlmann fidelity (Tr√(√ρ σ √ρ))².
///
/// When either argument is pure this is evaluated as ⟨ψ|other|ψ⟩. Otherwise
/// √ρ is restricted to the support of the lower-rank argument, so round-off
/// in its null space does not turn into spurious square roots.
pub fn fidelity_mixed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    if (sigma.purity() - 1.0).abs() <= PURITY_TOL {
        return Ok(rho.overlap_with(&pure_vector(sigma)?)?.clamp(0.0, 1.0));
    }
    if (rho.purity() - 1.0).abs() <= PURITY_TOL {
        return Ok(sigma.overlap_with(&pure_vector(rho)?)?.clamp(0.0, 1.0));
    }
    let (eig_r, eig_s) = (herm_eig(rho.matrix())?, herm_eig(sigma.matrix())?);
    for eig in [&eig_r, &eig_s] {
        if eig.values[0] < -NEGATIVE_SPECTRUM_TOL {
            return Err(Error::NegativeSpectrum(eig.values[0]));
        }
    }
    let rank = |values: &[f64]| values.iter().filter(|&&l| l > SUPPORT_TOL).count();
    let (eig, other) = if rank(&eig_r.values) <= rank(&eig_s.values) { (&eig_r, sigma) } else { (&eig_s, rho) };
    // B = V_s·diag(√p_s) over the support; B†·other·B has the spectrum of √ρσ√ρ.
    let support: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > SUPPORT_TOL).collect();
    let dim = rho.dim();
    let b = ComplexMatrix::from_fn(dim, support.len(), |i, j| {
        let k = support[j];
        eig.vectors.get(i, k) * eig.values[k].sqrt()
    });
    let reduced = b.adjoint().matmul(other.matrix()).matmul(&b).hermitian_part();
    let trace_sqrt: f64 = herm_eig(&reduced)?.values.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok((trace_sqrt * trace_sqrt).clamp(0.0, 1.0))
}

/// Σ_{i≠j} |ρ_ij|
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    rho.matrix()
        .as_array()
        .indexed_iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, z)| z.norm())
        .sum()
}

/// Interior local maxima of a sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    pub peak_indices: Vec<usize>,
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Nearest odd multiple of π to each peak.
    pub expected_times: Vec<f64>,
    /// Whether each peak lies within the matching window of its odd multiple.
    pub matched: Vec<bool>,
    pub sample_spacing: f64,
}

impl PeakReport {
    pub fn len(&self) -> usize {
        self.peak_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peak_times.is_empty()
    }

    /// Only the peaks matched to a revival time.
    pub fn revivals(&self) -> PeakReport {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| self.matched[k]).collect();
        PeakReport {
            peak_indices: keep.iter().map(|&k| self.peak_indices[k]).collect(),
            peak_times: keep.iter().map(|&k| self.peak_times[k]).collect(),
            peak_values: keep.iter().map(|&k| self.peak_values[k]).collect(),
            expected_times: keep.iter().map(|&k| self.expected_times[k]).collect(),
            matched: vec![true; keep.len()],
            sample_spacing: self.sample_spacing,
        }
    }

    /// Peak matched to (2m+1)π, m = 0 for the first revival.
    pub fn revival(&self, m: usize) -> Option<(f64, f64)> {
        let target = (2 * m + 1) as f64 * PI;
        (0..self.len())
            .find(|&k| self.matched[k] && (self.expected_times[k] - target).abs() < 1e-9)
            .map(|k| (self.peak_times[k], self.peak_values[k]))
    }
}

/// Peak matching window in units of the sample spacing. Decay pulls noisy
/// revivals slightly ahead of the odd multiples of π (about 0.02 at the
/// calibrated κ), so the window is wider than the grid resolution alone needs.
pub const PEAK_MATCH_SPACINGS: f64 = 5.0;

fn nearest_odd_multiple_of_pi(t: f64) -> f64 {
    let m = ((t / PI - 1.0) / 2.0).round().max(0.0);
    (2.0 * m + 1.0) * PI
}

/// Samples strictly above both neighbours; a flat top counts once, at its
/// first index, when it is followed by a strict descent.
pub fn find_peaks(times: &[f64], values: &[f64]) -> Result<PeakReport> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
    }
    if values.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {}", values.len())));
    }
    let spacing = times[1] - times[0];
    let mut indices = Vec::new();
    let mut i = 1;
    while i + 1 < values.len() {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < values.len() && values[j + 1] < values[i] {
                indices.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    if indices.is_empty() {
        return Err(Error::NoPeaks);
    }
    let peak_times: Vec<f64> = indices.iter().map(|&k| times[k]).collect();
    let expected_times: Vec<f64> = peak_times.iter().map(|&t| nearest_odd_multiple_of_pi(t)).collect();
    let matched = peak_times
        .iter()
        .zip(&expected_times)
        .map(|(t, e)| (t - e).abs() <= PEAK_MATCH_SPACINGS * spacing + 1e-12)
        .collect();
    Ok(PeakReport {
        peak_values: indices.iter().map(|&k| values[k]).collect(),
        peak_indices: indices,
        peak_times,
        expected_times,
        matched,
        sample_spacing: spacing,
    })
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    x_tol: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (t, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok((t, v))
}

/// Time resolution of refined peaks.
pub const PEAK_REFINE_TOL: f64 = 1e-7;

/// Re-locates each peak between its neighbouring samples with an exact
/// evaluator of the underlying curve. Values never drop below the sampled
/// maximum.
pub fn refine_peaks(
    report: &PeakReport,
    times: &[f64],
    mut evaluate: impl FnMut(usize, f64) -> Result<f64>,
) -> Result<PeakReport> {
    let mut refined = report.clone();
    for (k, &idx) in report.peak_indices.iter().enumerate() {
        let lo = times[idx - 1];
        let hi = times[idx + 1];
        let (t, v) = golden_section_max(|t| evaluate(idx, t), lo, hi, PEAK_REFINE_TOL)?;
        if v > report.peak_values[k] {
            refined.peak_times[k] = t;
            refined.peak_values[k] = v;
        }
    }
    Ok(refined)
}

/// First time the series falls to `level`, linearly interpolated.
pub fn first_crossing_below(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    for k in 1..values.len() {
        if values[k] <= level && values[k - 1] > level {
            let frac = (values[k - 1] - level) / (values[k - 1] - values[k]);
            return Some(times[k - 1] + frac * (times[k] - times[k - 1]));
        }
    }
    None
}

/// Linear interpolation of a sampled series at `t`.
pub fn interpolate(times: &[f64], values: &[f64], t: f64) -> Option<f64> {
    if times.is_empty() || t < times[0] || t > *times.last()? {
        return None;
    }
    let k = times.partition_point(|&s| s <= t);
    if k == times.len() {
        return values.last().copied();
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let w = (t - t0) / (t1 - t0);
    Some(values[k - 1] * (1.0 - w) + values[k] * w)
}

/// Bracket searched by [`calibrate_kappa`], µs per simulation unit.
pub const KAPPA_BRACKET: (f64, f64) = (1e-3, 1e3);
/// Allowed miss on the calibrated first-peak fidelity.
pub const CALIBRATION_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub kappa: f64,
    pub first_peak: f64,
    pub target: f64,
}

/// κ at which the combined-noise first revival reaches `target`.
///
/// The first-peak fidelity decreases monotonically with κ, so bisection runs
/// on log κ over [`KAPPA_BRACKET`].
pub fn calibrate_kappa(target: f64, config: &ExperimentConfig) -> Result<Calibration> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target must lie in (0, 1), got {target}")));
    }
    let peak_at = |log_kappa: f64| first_peak_fidelity(config, NoiseChannels::Combined, 10f64.powf(log_kappa));
    let (lo, hi) = (KAPPA_BRACKET.0.log10(), KAPPA_BRACKET.1.log10());
    let high = peak_at(lo)?;
    let low = peak_at(hi)?;
    if !(target <= high && target >= low) {
        return Err(Error::TargetUnreachable { target, low, high });
    }
    let mut failure = None;
    let log_kappa = bisect(
        |u| match peak_at(u) {
            Ok(v) => v - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-9,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let kappa = 10f64.powf(log_kappa?);
    let first_peak = first_peak_fidelity(config, NoiseChannels::Combined, kappa)?;
    if (first_peak - target).abs() > CALIBRATION_TOL {
        return Err(Error::TargetUnreachable { target, low, high });
    }
    Ok(Calibration { kappa, first_peak, target })
}
