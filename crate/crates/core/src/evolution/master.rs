//! Lindblad master equation with a fixed-step RK4 integrator.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, DensityMatrix, C64};

/// Samples whose trace has drifted further than this are renormalized.
pub const TRACE_REPAIR_TOL: f64 = 1e-10;
/// Samples with an eigenvalue below this are clipped back to PSD.
pub const PSD_REPAIR_TOL: f64 = -1e-8;
/// Samples with an eigenvalue below this abort the run.
pub const PSD_FAIL_TOL: f64 = -1e-5;

fn check_square(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
    }
    Ok(())
}

/// dρ/dt = −i[H, ρ] + Σ_k (C_k ρ C_k† − ½{C_k†C_k, ρ})
///
/// Direct dense evaluation, term by term.
pub fn lindblad_rhs(rho: &DensityMatrix, h: &ComplexMatrix, collapse: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let dim = rho.dim();
    check_square(h, dim)?;
    let r = rho.matrix();
    let minus_i = C64::new(0.0, -1.0);
    let mut out = h.commutator(r).scale(minus_i);
    for c in collapse {
        check_square(c, dim)?;
        let cd = c.adjoint();
        let cdc = cd.matmul(c);
        let sandwich = c.matmul(r).matmul(&cd);
        let anti = &cdc.matmul(r) + &r.matmul(&cdc);
        out = &out + &(&sandwich - &anti.scale_real(0.5));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Jump {
    /// Nonzero entries (row, col, value).
    Sparse(Vec<(usize, usize, C64)>),
    Dense { op: Array2<C64>, adjoint: Array2<C64> },
}

/// Pre-factored generator: −i(H_eff ρ − ρ H_eff†) + Σ C ρ C†
/// with H_eff = H − (i/2)·Σ C†C.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    dim: usize,
    h_eff: Array2<C64>,
    h_eff_adjoint: Array2<C64>,
    jumps: Vec<Jump>,
}

impl Lindbladian {
    pub fn new(h: &ComplexMatrix, collapse: &[ComplexMatrix]) -> Result<Self> {
        let dim = h.rows();
        check_square(h, dim)?;
        h.ensure_hermitian(1e-10)?;
        let mut h_eff = h.as_array().clone();
        let mut jumps = Vec::with_capacity(collapse.len());
        for c in collapse {
            check_square(c, dim)?;
            let cdc = c.adjoint().matmul(c);
            h_eff = h_eff - cdc.as_array() * C64::new(0.0, 0.5);
            let entries: Vec<(usize, usize, C64)> = c
                .as_array()
                .indexed_iter()
                .filter(|(_, z)| z.norm() != 0.0)
                .map(|((i, j), z)| (i, j, *z))
                .collect();
            if entries.len() <= 2 * dim {
                jumps.push(Jump::Sparse(entries));
            } else {
                jumps.push(Jump::Dense { op: c.as_array().clone(), adjoint: c.adjoint().into_array() });
            }
        }
        let h_eff_adjoint = h_eff.t().mapv(|z| z.conj());
        Ok(Self { dim, h_eff, h_eff_adjoint, jumps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let minus_i = C64::new(0.0, -1.0);
        let mut out = (self.h_eff.dot(rho) - rho.dot(&self.h_eff_adjoint)) * minus_i;
        for jump in &self.jumps {
            match jump {
                Jump::Sparse(entries) => {
                    for &(a, c, v) in entries {
                        for &(b, d, w) in entries {
                            out[[a, b]] += v * rho[[c, d]] * w.conj();
                        }
                    }
                }
                Jump::Dense { op, adjoint } => {
                    out = out + op.dot(rho).dot(adjoint);
                }
            }
        }
        out
    }

    pub fn rk4_step(&self, rho: &Array2<C64>, dt: f64) -> Array2<C64> {
        let half = C64::new(dt / 2.0, 0.0);
        let full = C64::new(dt, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &(&k1 * half)));
        let k3 = self.apply(&(rho + &(&k2 * half)));
        let k4 = self.apply(&(rho + &(&k3 * full)));
        let sixth = C64::new(dt / 6.0, 0.0);
        rho + &((k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * sixth)
    }

    /// Advances by `duration` in equal steps no longer than `max_dt`.
    pub fn propagate(&self, rho: &DensityMatrix, duration: f64, max_dt: f64) -> Result<DensityMatrix> {
        check_square(rho.matrix(), self.dim)?;
        if duration < 0.0 || !(max_dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "propagate needs duration >= 0 and max_dt > 0 (got {duration}, {max_dt})"
            )));
        }
        let steps = (duration / max_dt).ceil() as usize;
        let mut state = rho.matrix().as_array().clone();
        if steps > 0 {
            let dt = duration / steps as f64;
            for _ in 0..steps {
                state = self.rk4_step(&state, dt);
            }
        }
        let (repaired, _) = repair_sample(ComplexMatrix::from_array(state), duration)?;
        Ok(repaired)
    }
}

/// Health counters collected while integrating.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegrationDiagnostics {
    /// Largest |Tr ρ − 1| seen at a sample before renormalization.
    pub max_trace_drift: f64,
    /// Largest max|ρ − ρ†| seen at a sample before re-Hermitization.
    pub max_hermiticity_error: f64,
    /// Samples that needed eigenvalue clipping.
    pub psd_repairs: usize,
    /// Most negative eigenvalue seen.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionTrajectory {
    pub scenario: String,
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: IntegrationDiagnostics,
}

impl EvolutionTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, f: impl FnMut(&DensityMatrix) -> Result<f64>) -> Result<Vec<f64>> {
        self.states.iter().map(f).collect()
    }

    pub fn last(&self) -> Option<(f64, &DensityMatrix)> {
        self.times.last().copied().zip(self.states.last())
    }
}

struct RepairInfo {
    trace_drift: f64,
    hermiticity_error: f64,
    min_eigenvalue: f64,
    clipped: bool,
}

fn repair_sample(matrix: ComplexMatrix, time: f64) -> Result<(DensityMatrix, RepairInfo)> {
    let hermiticity_error = matrix.hermiticity_error();
    let mut m = matrix.hermitian_part();
    let trace = m.trace().re;
    let trace_drift = (trace - 1.0).abs();
    if trace_drift > TRACE_REPAIR_TOL {
        m = m.scale_real(1.0 / trace);
    }
    let eig = herm_eig(&m)?;
    let min_eigenvalue = eig.values[0];
    if min_eigenvalue < PSD_FAIL_TOL {
        return Err(Error::StepTooLarge { time, eigenvalue: min_eigenvalue });
    }
    let clipped = min_eigenvalue < PSD_REPAIR_TOL;
    if clipped {
        let total: f64 = eig.values.iter().map(|l| l.max(0.0)).sum();
        m = eig.map_spectrum(|l| C64::new(l.max(0.0) / total, 0.0));
    }
    let info = RepairInfo { trace_drift, hermiticity_error, min_eigenvalue, clipped };
    Ok((DensityMatrix::from_matrix_unchecked(m), info))
}

/// Number of samples after t = 0 on the grid k·dt·sample_every ≤ t_end.
pub fn sample_count(t_end: f64, dt: f64, sample_every: usize) -> usize {
    (t_end / (dt * sample_every as f64) + 1e-9).floor() as usize
}

/// Fixed-step RK4 from t = 0, sampling every `sample_every` steps.
///
/// Every sample is re-Hermitized, renormalized when the trace drifts past
/// [`TRACE_REPAIR_TOL`], and checked for positivity; integration continues
/// from the repaired state.
pub fn integrate_master(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    collapse: &[ComplexMatrix],
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<EvolutionTrajectory> {
    let generator = Lindbladian::new(h, collapse)?;
    integrate_with(&generator, rho0, t_end, dt, sample_every)
}

pub fn integrate_with(
    generator: &Lindbladian,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<EvolutionTrajectory> {
    if !(dt > 0.0) || !(t_end > 0.0) || sample_every == 0 {
        return Err(Error::InvalidParameter(format!(
            "integration needs dt > 0, t_end > 0, sample_every >= 1 (got {dt}, {t_end}, {sample_every})"
        )));
    }
    check_square(rho0.matrix(), generator.dim())?;
    let samples = sample_count(t_end, dt, sample_every);
    let mut times = Vec::with_capacity(samples + 1);
    let mut states = Vec::with_capacity(samples + 1);
    let mut diagnostics = IntegrationDiagnostics::default();

    times.push(0.0);
    states.push(rho0.clone());
    let mut current = rho0.matrix().as_array().clone();
    for k in 1..=samples {
        for _ in 0..sample_every {
            current = generator.rk4_step(&current, dt);
        }
        let time = (k * sample_every) as f64 * dt;
        let (rho, info) = repair_sample(ComplexMatrix::from_array(current), time)?;
        diagnostics.max_trace_drift = diagnostics.max_trace_drift.max(info.trace_drift);
        diagnostics.max_hermiticity_error = diagnostics.max_hermiticity_error.max(info.hermiticity_error);
        diagnostics.min_eigenvalue = diagnostics.min_eigenvalue.min(info.min_eigenvalue);
        if info.clipped {
            diagnostics.psd_repairs += 1;
        }
        current = rho.matrix().as_array().clone();
        times.push(time);
        states.push(rho);
    }
    Ok(EvolutionTrajectory { scenario: String::new(), times, states, diagnostics })
}
