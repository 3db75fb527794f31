//! Steepest-entropy-ascent propagation.
//!
//! Each step freezes the eigenbasis `S` of the current state and the
//! multipliers `beta_H`, `beta_I`, then applies the closed-form update
//!
//! ```text
//! rho(t) = U(t) S exp(2 D(t)) S^dag U(t)^dag,
//! D(t)   = (c(t) A0 - beta_H S^dag H S - beta_I) / 2k,
//! c(t)   = exp(exp(-4 k t / tau) - 1),
//! A0     = k ln(rho_D) + beta_H S^dag H S + beta_I,
//! ```
//!
//! with `U(t) = exp(-i H t / hbar)`, followed by renormalization.

use crate::error::{Error, Result};
use crate::observables;
use crate::operator::{
    anticommutator, c64, commutator, hs_inner, spectral_decompose, ComplexMatrix, DensityMatrix, HermitianOperator,
    SpectralDecomposition, SpectralFn,
};

/// Relative threshold below which the constraint system counts as singular.
pub const SINGULARITY_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeaParams {
    pub k: f64,
    pub hbar: f64,
    pub tau: f64,
    pub dt: f64,
    /// Eigenvalue floor applied inside logarithms and fractional powers.
    pub log_floor: f64,
    /// When set, a step whose raw trace leaves `1 ± limit` fails.
    pub max_trace_drift: Option<f64>,
}

impl SeaParams {
    pub fn new(tau: f64) -> Self {
        Self {
            k: 1.0,
            hbar: 1.0,
            tau,
            dt: 1.0,
            log_floor: 1e-12,
            max_trace_drift: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive and finite",
                })
            }
        };
        positive("k", self.k)?;
        positive("hbar", self.hbar)?;
        positive("tau", self.tau)?;
        positive("dt", self.dt)?;
        positive("log_floor", self.log_floor)?;
        if let Some(limit) = self.max_trace_drift {
            positive("max_trace_drift", limit)?;
        }
        Ok(())
    }

    /// The scalar `L = 1/tau` of the Euclidean metric.
    pub fn l_hat(&self) -> f64 {
        1.0 / self.tau
    }
}

/// Positive square root `gamma` of a state, `rho = gamma gamma^dag`.
#[derive(Clone, Debug)]
pub struct StateRoot {
    gamma: HermitianOperator,
    decomposition: SpectralDecomposition,
}

impl StateRoot {
    pub fn gamma(&self) -> &HermitianOperator {
        &self.gamma
    }

    /// Eigenpairs of `gamma`; the basis is the frozen `S` of a step.
    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Eigenvalues of `rho = gamma^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.decomposition.eigenvalues().iter().map(|g| g * g).collect()
    }
}

pub fn state_root(rho: &DensityMatrix) -> StateRoot {
    let spec = rho.spectrum();
    let g: Vec<f64> = spec.eigenvalues().iter().map(|&p| p.max(0.0).sqrt()).collect();
    let gamma = HermitianOperator::symmetrize(spec.compose(&g));
    StateRoot {
        gamma,
        decomposition: SpectralDecomposition::from_parts(g, spec.basis().clone()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LagrangeMultipliers {
    pub beta_h: f64,
    pub beta_i: f64,
    pub det_delta: f64,
}

/// Multipliers that make the energy and trace production vanish, computed
/// in the eigenbasis of `rho` (`p` its eigenvalues, `h_rot = S^dag H S`).
pub(crate) fn solve_multipliers(p: &[f64], h_rot: &ComplexMatrix, params: &SeaParams) -> Result<LagrangeMultipliers> {
    let g: Vec<f64> = p.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let ln_g: Vec<f64> = p.iter().zip(&g).map(|(&x, &gi)| x.max(params.log_floor).ln() * gi).collect();
    let gamma = ComplexMatrix::from_diagonal(&g);
    let ln_gamma = ComplexMatrix::from_diagonal(&ln_g);
    let h_gamma = h_rot.scale_columns(&g);
    let l = params.l_hat();

    let m11 = l * hs_inner(&h_gamma, &h_gamma)?;
    let m12 = l * hs_inner(&h_gamma, &gamma)?;
    let m21 = l * hs_inner(&gamma, &h_gamma)?;
    let m22 = l * hs_inner(&gamma, &gamma)?;
    let r1 = -params.k * l * hs_inner(&h_gamma, &ln_gamma)?;
    let r2 = -params.k * l * hs_inner(&gamma, &ln_gamma)?;

    let det = m11 * m22 - m12 * m21;
    let det_delta = -det;
    if !(det.abs() > SINGULARITY_TOL * (m11 * m22).abs()) {
        return Err(Error::SingularConstraintSystem { det_delta });
    }
    Ok(LagrangeMultipliers {
        beta_h: (r1 * m22 - m12 * r2) / det,
        beta_i: (m11 * r2 - m21 * r1) / det,
        det_delta,
    })
}

pub fn lagrange_multipliers(root: &StateRoot, h: &HermitianOperator, params: &SeaParams) -> Result<LagrangeMultipliers> {
    let h_rot = root.decomposition().basis().rotate_into(h.matrix());
    solve_multipliers(&root.probabilities(), &h_rot, params)
}

/// `c(t) = exp(exp(-4 k t / tau) - 1)`.
pub fn dissipation_factor(t: f64, params: &SeaParams) -> f64 {
    ((-4.0 * params.k * t / params.tau).exp() - 1.0).exp()
}

/// `A0 = k ln(rho_D) + beta_H H_rot + beta_I` in the eigenbasis of `rho`.
pub(crate) fn a0_rotated(p: &[f64], h_rot: &ComplexMatrix, mult: &LagrangeMultipliers, params: &SeaParams) -> ComplexMatrix {
    let diag: Vec<f64> = p
        .iter()
        .map(|&x| params.k * x.max(params.log_floor).ln() + mult.beta_i)
        .collect();
    h_rot.scale(mult.beta_h).add_diagonal(&diag)
}

/// `D(t) = (c(t) A0 - beta_H H_rot - beta_I) / 2k`.
pub fn dissipative_exponent(
    a0: &HermitianOperator,
    mult: &LagrangeMultipliers,
    h_rot: &HermitianOperator,
    t: f64,
    params: &SeaParams,
) -> HermitianOperator {
    let c = dissipation_factor(t, params);
    let m = &a0.matrix().scale(c) - &h_rot.matrix().scale(mult.beta_h);
    HermitianOperator::symmetrize(m.add_identity(-mult.beta_i).scale(0.5 / params.k))
}

/// Spectrum of the normalized `exp(2 D(t))` in the frozen frame.
pub(crate) struct Dissipated {
    /// Normalized eigenvalues.
    pub q: Vec<f64>,
    /// `ln q`, exact even where `q` underflows.
    pub ln_q: Vec<f64>,
    /// Eigenvectors of `D(t)` in the frozen frame.
    pub w: ComplexMatrix,
    /// `Tr exp(2 D(t))` before normalization.
    pub raw_trace: f64,
}

pub(crate) fn dissipate(
    a0: &ComplexMatrix,
    h_rot: &ComplexMatrix,
    mult: &LagrangeMultipliers,
    params: &SeaParams,
    t: f64,
) -> Result<Dissipated> {
    let d = dissipative_exponent(
        &HermitianOperator::symmetrize(a0.clone()),
        mult,
        &HermitianOperator::symmetrize(h_rot.clone()),
        t,
        params,
    );
    let spec = spectral_decompose(&d)?;
    let two_d: Vec<f64> = spec.eigenvalues().iter().map(|x| 2.0 * x).collect();
    let top = two_d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = two_d.iter().map(|x| (x - top).exp()).collect();
    let sum: f64 = w.iter().sum();
    let log_z = top + sum.ln();
    Ok(Dissipated {
        q: w.iter().map(|x| x / sum).collect(),
        ln_q: two_d.iter().map(|x| x - log_z).collect(),
        w: spec.basis().clone(),
        raw_trace: log_z.exp(),
    })
}

/// A state together with the quantities a step freezes: `S^dag H S` and the
/// multipliers.
#[derive(Clone, Debug)]
pub struct StateFrame {
    rho: DensityMatrix,
    h_rot: ComplexMatrix,
    multipliers: LagrangeMultipliers,
}

impl StateFrame {
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> DensityMatrix {
        self.rho
    }

    /// `S^dag H S` with `S` the eigenbasis of `rho`.
    pub fn h_rot(&self) -> &ComplexMatrix {
        &self.h_rot
    }

    pub fn multipliers(&self) -> &LagrangeMultipliers {
        &self.multipliers
    }

    pub(crate) fn a0(&self, params: &SeaParams) -> ComplexMatrix {
        a0_rotated(self.rho.eigenvalues(), &self.h_rot, &self.multipliers, params)
    }
}

#[derive(Clone, Debug)]
pub struct ClosedForm {
    /// Normalized state.
    pub state: DensityMatrix,
    /// Trace before normalization.
    pub raw_trace: f64,
}

#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub rho: DensityMatrix,
    pub entropy: f64,
    /// Entropy production rate of `rho` under its own multipliers.
    pub entropy_rate: f64,
    pub energy: f64,
    /// Raw trace produced by the step; 1 for the initial record.
    pub trace: f64,
    pub multipliers: LagrangeMultipliers,
}

/// `exp(-i H t / hbar)` from a spectral decomposition of `H`.
fn evolution_operator(h_spec: &SpectralDecomposition, t: f64, hbar: f64) -> ComplexMatrix {
    let v = h_spec.basis();
    let phases: Vec<c64> = h_spec
        .eigenvalues()
        .iter()
        .map(|&e| c64::cis(-e * t / hbar))
        .collect();
    let scaled = ComplexMatrix::from_fn(v.dim(), |i, j| v.get(i, j) * phases[j]);
    &scaled * &v.adjoint()
}

/// SEA propagator for a fixed Hamiltonian and parameter set. The one-step
/// evolution operator is computed once.
#[derive(Clone, Debug)]
pub struct SeaPropagator {
    h: HermitianOperator,
    h_spec: SpectralDecomposition,
    params: SeaParams,
    step_unitary: ComplexMatrix,
}

impl SeaPropagator {
    pub fn new(h: HermitianOperator, params: SeaParams) -> Result<Self> {
        params.validate()?;
        let h_spec = spectral_decompose(&h)?;
        let step_unitary = evolution_operator(&h_spec, params.dt, params.hbar);
        Ok(Self {
            h,
            h_spec,
            params,
            step_unitary,
        })
    }

    pub fn params(&self) -> &SeaParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    /// `exp(-i H t / hbar)`.
    pub fn evolution_operator(&self, t: f64) -> ComplexMatrix {
        if t == self.params.dt {
            return self.step_unitary.clone();
        }
        evolution_operator(&self.h_spec, t, self.params.hbar)
    }

    /// Freezes the eigenbasis and multipliers of `rho`.
    pub fn analyze(&self, rho: DensityMatrix) -> Result<StateFrame> {
        if rho.dim() != self.h.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.h.dim(),
                found: rho.dim(),
            });
        }
        let h_rot = rho.spectrum().basis().rotate_into(self.h.matrix());
        let multipliers = solve_multipliers(rho.eigenvalues(), &h_rot, &self.params)?;
        Ok(StateFrame {
            rho,
            h_rot,
            multipliers,
        })
    }

    /// Closed-form state a time `t` (of either sign) after the frame.
    pub fn closed_form(&self, frame: &StateFrame, t: f64) -> Result<ClosedForm> {
        let unitary = self.evolution_operator(t);
        self.closed_form_with(frame, t, &unitary)
    }

    fn closed_form_with(&self, frame: &StateFrame, t: f64, unitary: &ComplexMatrix) -> Result<ClosedForm> {
        let a0 = frame.a0(&self.params);
        let diss = dissipate(&a0, &frame.h_rot, &frame.multipliers, &self.params, t)?;
        let basis = &(unitary * frame.rho.spectrum().basis()) * &diss.w;
        let state = DensityMatrix::from_spectrum(SpectralDecomposition::from_parts(diss.q, basis))?;
        Ok(ClosedForm {
            state,
            raw_trace: diss.raw_trace,
        })
    }

    /// One step of length `dt`.
    pub fn step(&self, frame: &StateFrame) -> Result<ClosedForm> {
        let out = self.closed_form_with(frame, self.params.dt, &self.step_unitary)?;
        if let Some(limit) = self.params.max_trace_drift {
            let drift = (out.raw_trace - 1.0).abs();
            if drift > limit {
                return Err(Error::TraceDrift { drift, limit });
            }
        }
        Ok(out)
    }

    /// `sea_step` on a bare state: analyze, then step.
    pub fn sea_step(&self, rho: DensityMatrix) -> Result<(ClosedForm, LagrangeMultipliers)> {
        let frame = self.analyze(rho)?;
        let out = self.step(&frame)?;
        Ok((out, frame.multipliers))
    }

    fn record(&self, step: usize, frame: &StateFrame, trace: f64) -> TrajectoryRecord {
        let params = &self.params;
        TrajectoryRecord {
            step,
            rho: frame.rho.clone(),
            entropy: observables::entropy(&frame.rho, params.k, params.log_floor),
            entropy_rate: observables::frame_production(frame, params),
            energy: observables::energy_expectation(&frame.rho, &self.h),
            trace,
            multipliers: frame.multipliers,
        }
    }

    /// Evolves `steps` steps, handing each record (initial state first) to
    /// `sink` as soon as it is available.
    pub fn evolve_with<F>(&self, rho0: DensityMatrix, steps: usize, mut sink: F) -> Result<()>
    where
        F: FnMut(TrajectoryRecord) -> Result<()>,
    {
        let at = |step: usize| move |e: Error| Error::Step { step, source: Box::new(e) };
        let trace0 = rho0.trace();
        let mut frame = self.analyze(rho0).map_err(at(0))?;
        sink(self.record(0, &frame, trace0))?;
        for step in 1..=steps {
            let out = self.step(&frame).map_err(at(step))?;
            frame = self.analyze(out.state).map_err(at(step))?;
            sink(self.record(step, &frame, out.raw_trace))?;
        }
        Ok(())
    }

    pub fn evolve(&self, rho0: DensityMatrix, steps: usize) -> Result<Vec<TrajectoryRecord>> {
        let mut out = Vec::with_capacity(steps + 1);
        self.evolve_with(rho0, steps, |r| {
            out.push(r);
            Ok(())
        })?;
        Ok(out)
    }
}

pub fn sea_step(rho: DensityMatrix, h: &HermitianOperator, params: &SeaParams) -> Result<(ClosedForm, LagrangeMultipliers)> {
    SeaPropagator::new(h.clone(), *params)?.sea_step(rho)
}

pub fn evolve(rho0: DensityMatrix, h: &HermitianOperator, params: &SeaParams, steps: usize) -> Result<Vec<TrajectoryRecord>> {
    SeaPropagator::new(h.clone(), *params)?.evolve(rho0, steps)
}

/// Plain unitary walk, `rho -> U rho U^dag` with `U = exp(-i H dt / hbar)`.
#[derive(Clone, Debug)]
pub struct UnitaryPropagator {
    u: ComplexMatrix,
}

impl UnitaryPropagator {
    pub fn new(h: &HermitianOperator, dt: f64, hbar: f64) -> Result<Self> {
        Ok(Self {
            u: evolution_operator(&spectral_decompose(h)?, dt, hbar),
        })
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn step(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        crate::operator::unitary_conjugate(rho, &self.u)
    }

    /// States at steps `0..=steps`.
    pub fn evolve(&self, rho0: DensityMatrix, steps: usize) -> Result<Vec<DensityMatrix>> {
        let mut out = vec![rho0];
        for _ in 0..steps {
            let next = self.step(out.last().expect("non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }
}

/// One unitary step with `hbar = 1`.
pub fn unitary_step(rho: &DensityMatrix, h: &HermitianOperator, dt: f64) -> Result<DensityMatrix> {
    UnitaryPropagator::new(h, dt, 1.0)?.step(rho)
}

/// Right-hand side of the equation of motion,
/// `-(2/tau) {k ln rho + beta_H H + beta_I, rho} - (i/hbar) [H, rho]`.
pub fn eom_rhs(rho: &DensityMatrix, h: &HermitianOperator, params: &SeaParams) -> Result<ComplexMatrix> {
    let h_rot = rho.spectrum().basis().rotate_into(h.matrix());
    let mult = solve_multipliers(rho.eigenvalues(), &h_rot, params)?;
    let ln_rho = rho.spectrum().apply(SpectralFn::Ln, Some(params.log_floor))?;
    let x = (&ln_rho.matrix().scale(params.k) + &h.matrix().scale(mult.beta_h)).add_identity(mult.beta_i);
    let dissipative = anticommutator(&x, rho.matrix())?.scale(-2.0 * params.l_hat());
    let unitary = commutator(h.matrix(), rho.matrix())?.scale_complex(c64::new(0.0, -1.0 / params.hbar));
    Ok(&dissipative + &unitary)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintResiduals {
    pub pi_s: f64,
    pub pi_h: f64,
    pub pi_i: f64,
}

/// Production rates `<Phi|Pi_gamma>` of entropy, energy and trace for the
/// gamma-space direction `Pi_gamma = L (-2k ln(rho) gamma - 2 beta_H H gamma - 2 beta_I gamma)`.
pub fn constraint_residuals(
    root: &StateRoot,
    h: &HermitianOperator,
    mult: &LagrangeMultipliers,
    params: &SeaParams,
) -> Result<ConstraintResiduals> {
    let spec = root.decomposition();
    let g = spec.eigenvalues();
    let h_rot = spec.basis().rotate_into(h.matrix());
    let ln_g: Vec<f64> = g
        .iter()
        .map(|&x| (x * x).max(params.log_floor).ln() * x)
        .collect();
    let gamma = ComplexMatrix::from_diagonal(g);
    let ln_gamma = ComplexMatrix::from_diagonal(&ln_g);
    let h_gamma = h_rot.scale_columns(g);
    let k = params.k;
    let direction = (&(&ln_gamma.scale(-2.0 * k) - &h_gamma.scale(2.0 * mult.beta_h)) - &gamma.scale(2.0 * mult.beta_i))
        .scale(params.l_hat());
    Ok(ConstraintResiduals {
        pi_s: hs_inner(&ln_gamma.scale(-2.0 * k), &direction)?,
        pi_h: hs_inner(&h_gamma.scale(2.0), &direction)?,
        pi_i: hs_inner(&gamma.scale(2.0), &direction)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{build_laplacian, hamiltonian, perturbed_initial, Graph};

    fn ring_h(n: usize) -> HermitianOperator {
        hamiltonian(&build_laplacian(&Graph::ring(n).unwrap()), 1.0).unwrap()
    }

    fn localized(n: usize, i: usize, eps: f64) -> DensityMatrix {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        let rho0 = DensityMatrix::new(HermitianOperator::from_diagonal(&p)).unwrap();
        perturbed_initial(&rho0, &DensityMatrix::maximally_mixed(n), eps).unwrap()
    }

    #[test]
    fn propagator_is_shareable() {
        fn check<T: Send + Sync>() {}
        check::<SeaPropagator>();
        check::<TrajectoryRecord>();
    }

    #[test]
    fn root_examples() {
        let r = state_root(&DensityMatrix::maximally_mixed(4));
        assert!(r.gamma().matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.5)) < 1e-15);
        let rho = DensityMatrix::new(HermitianOperator::from_diagonal(&[0.64, 0.36])).unwrap();
        let r = state_root(&rho);
        assert!(r.gamma().matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[0.8, 0.6])) < 1e-15);
    }

    #[test]
    fn maximally_mixed_multipliers() {
        let n = 6;
        let params = SeaParams::new(1.0);
        let m = lagrange_multipliers(&state_root(&DensityMatrix::maximally_mixed(n)), &ring_h(n), &params).unwrap();
        assert!(m.beta_h.abs() < 1e-12);
        assert!((m.beta_i - (n as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn multipliers_do_not_depend_on_tau() {
        let rho = localized(5, 1, 0.3);
        let root = state_root(&rho);
        let h = ring_h(5);
        let a = lagrange_multipliers(&root, &h, &SeaParams::new(0.02)).unwrap();
        let b = lagrange_multipliers(&root, &h, &SeaParams::new(90.02)).unwrap();
        assert!((a.beta_h - b.beta_h).abs() <= 1e-10 * a.beta_h.abs().max(1.0));
        assert!((a.beta_i - b.beta_i).abs() <= 1e-10 * a.beta_i.abs().max(1.0));
    }

    #[test]
    fn singular_system_is_reported() {
        let rho = DensityMatrix::maximally_mixed(3);
        let err = lagrange_multipliers(&state_root(&rho), &HermitianOperator::identity(3), &SeaParams::new(1.0)).unwrap_err();
        assert!(matches!(err, Error::SingularConstraintSystem { .. }));
    }

    #[test]
    fn factor_limits() {
        let p = SeaParams::new(2.0);
        assert_eq!(dissipation_factor(0.0, &p), 1.0);
        assert!((dissipation_factor(1e9, &p) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((dissipation_factor(1.0, &SeaParams::new(1e12)) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn exponent_at_zero_is_half_log() {
        let rho = localized(4, 0, 0.5);
        let h = ring_h(4);
        let params = SeaParams::new(1.0);
        let prop = SeaPropagator::new(h, params).unwrap();
        let frame = prop.analyze(rho.clone()).unwrap();
        let a0 = HermitianOperator::symmetrize(frame.a0(&params));
        let hr = HermitianOperator::symmetrize(frame.h_rot().clone());
        let d = dissipative_exponent(&a0, frame.multipliers(), &hr, 0.0, &params);
        let half_log: Vec<f64> = rho.eigenvalues().iter().map(|p| 0.5 * p.ln()).collect();
        assert!(d.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&half_log)) < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_a_fixed_point() {
        let n = 8;
        let prop = SeaPropagator::new(ring_h(n), SeaParams::new(0.1)).unwrap();
        let (out, _) = prop.sea_step(DensityMatrix::maximally_mixed(n)).unwrap();
        assert!(out.state.matrix().max_abs_diff(&ComplexMatrix::identity(n).scale(1.0 / n as f64)) < 1e-12);
        assert!((out.raw_trace - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frozen_dissipation_recovers_unitary_walk() {
        let n = 10;
        let h = ring_h(n);
        let rho = localized(n, 3, 1.0);
        let prop = SeaPropagator::new(h.clone(), SeaParams::new(1e9)).unwrap();
        let (out, _) = prop.sea_step(rho.clone()).unwrap();
        let reference = unitary_step(&rho, &h, 1.0).unwrap();
        assert!(out.state.matrix().max_abs_diff(reference.matrix()) < 1e-6);
    }

    #[test]
    fn evolve_zero_steps() {
        let rho = localized(5, 0, 0.5);
        let recs = evolve(rho.clone(), &ring_h(5), &SeaParams::new(1.0), 0).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].rho.matrix(), rho.matrix());
        assert_eq!(recs[0].step, 0);
    }

    #[test]
    fn step_errors_carry_the_index() {
        let mut params = SeaParams::new(0.1);
        params.max_trace_drift = Some(1e-6);
        let err = evolve(localized(6, 0, 0.5), &ring_h(6), &params, 3).unwrap_err();
        assert!(matches!(err, Error::Step { step: 1, .. }), "{err:?}");
    }

    #[test]
    fn unitary_step_commuting_state() {
        let h = ring_h(5);
        let rho = DensityMatrix::maximally_mixed(5);
        let out = unitary_step(&rho, &h, 1.0).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn rhs_vanishes_at_fixed_point_and_is_traceless() {
        let n = 6;
        let h = ring_h(n);
        let params = SeaParams::new(1.0);
        let rhs = eom_rhs(&DensityMatrix::maximally_mixed(n), &h, &params).unwrap();
        assert!(rhs.norm_max() < 1e-12);
        let rhs = eom_rhs(&localized(n, 2, 0.4), &h, &params).unwrap();
        assert!(rhs.trace().norm() < 1e-12);
        assert!(rhs.norm_max() > 1e-3);
    }

    #[test]
    fn eigenstate_mixture_has_only_dissipative_motion() {
        let n = 6;
        let h = ring_h(n);
        let spec = spectral_decompose(&h).unwrap();
        let mut p = vec![0.5 / n as f64; n];
        p[n - 1] += 0.5;
        let rho = DensityMatrix::from_spectrum(SpectralDecomposition::from_parts(p, spec.basis().clone())).unwrap();
        let comm = commutator(h.matrix(), rho.matrix()).unwrap();
        assert!(comm.norm_max() < 1e-12);
        let rhs = eom_rhs(&rho, &h, &SeaParams::new(1.0)).unwrap();
        assert!(rhs.norm_max() > 1e-3);
    }

    #[test]
    fn residuals_vanish_for_solved_multipliers() {
        let n = 4;
        let h = ring_h(n);
        let params = SeaParams::new(1.0);
        for rho in [localized(n, 0, 0.999), localized(n, 1, 0.5)] {
            let root = state_root(&rho);
            let m = lagrange_multipliers(&root, &h, &params).unwrap();
            let r = constraint_residuals(&root, &h, &m, &params).unwrap();
            assert!(r.pi_h.abs() <= 1e-8 * h.matrix().norm_max(), "{r:?}");
            assert!(r.pi_i.abs() <= 1e-8, "{r:?}");
            assert!(r.pi_s > 0.0);
        }
        let root = state_root(&DensityMatrix::maximally_mixed(n));
        let m = lagrange_multipliers(&root, &h, &params).unwrap();
        let r = constraint_residuals(&root, &h, &m, &params).unwrap();
        assert!(r.pi_s.abs() < 1e-12);
    }
}
