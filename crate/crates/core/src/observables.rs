//! Node distributions, entropy, entropy production and the closed-form
//! limits of entropy and its production rate at the corners of the
//! `(tau, epsilon)` plane.

use std::f64::consts::E;

use crate::engine::{a0_rotated, dissipate, dissipation_factor, LagrangeMultipliers, SeaParams, StateFrame, StateRoot};
use crate::error::{Error, Result};
use crate::operator::{
    partial_trace, spectral_decompose, ComplexMatrix, DensityMatrix, HermitianOperator, SpectralFn, Subsystem,
};

/// Tolerance on the probability sum accepted before renormalizing.
pub const PROBABILITY_SUM_TOL: f64 = 1e-8;

/// Node occupation probabilities with an optional presentation origin.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeDistribution {
    probabilities: Vec<f64>,
    origin: Option<usize>,
}

impl NodeDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Relabels nodes so that `origin` becomes 0, wrapping around the ring
    /// into `-N/2 .. N/2`.
    pub fn with_origin(self, origin: Option<usize>) -> Self {
        Self { origin, ..self }
    }

    pub fn origin(&self) -> Option<usize> {
        self.origin
    }

    /// `(label, probability)` pairs ordered by label.
    pub fn labelled(&self) -> Vec<(i64, f64)> {
        let n = self.probabilities.len() as i64;
        let mut out: Vec<(i64, f64)> = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let label = match self.origin {
                    None => i as i64,
                    Some(o) => {
                        let r = (i as i64 - o as i64).rem_euclid(n);
                        if r >= n - n / 2 {
                            r - n
                        } else {
                            r
                        }
                    }
                };
                (label, p)
            })
            .collect();
        out.sort_by_key(|&(label, _)| label);
        out
    }
}

/// Diagonal of `rho` in the node basis.
pub fn node_probabilities(rho: &DensityMatrix) -> Result<NodeDistribution> {
    let mut p: Vec<f64> = rho.matrix().diagonal_real().into_iter().map(|x| x.max(0.0)).collect();
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::TraceMismatch { trace: total });
    }
    p.iter_mut().for_each(|x| *x /= total);
    Ok(NodeDistribution {
        probabilities: p,
        origin: None,
    })
}

/// Single-walker distribution of a two-walker state on `nodes * nodes`.
pub fn reduced_probabilities(rho2: &DensityMatrix, nodes: usize) -> Result<NodeDistribution> {
    node_probabilities(&partial_trace(rho2, nodes, nodes, Subsystem::First)?)
}

/// `-k Tr(rho ln rho)`.
pub fn entropy(rho: &DensityMatrix, k: f64, floor: f64) -> f64 {
    entropy_of_spectrum(rho.eigenvalues(), k, floor)
}

pub fn entropy_of_spectrum(p: &[f64], k: f64, floor: f64) -> f64 {
    -k * p.iter().map(|&x| x * x.max(floor).ln()).sum::<f64>()
}

/// `Tr(H rho)`.
pub fn energy_expectation(rho: &DensityMatrix, h: &HermitianOperator) -> f64 {
    h.matrix().trace_product_re(rho.matrix())
}

/// `-c'(t) Cov(a, ln q)` for populations `q` and the diagonal `a` of `A0`
/// in the eigenbasis of the evolved state.
fn production(c_dot_neg: f64, a: &[f64], q: &[f64], ln_q: &[f64]) -> f64 {
    let mean_a: f64 = a.iter().zip(q).map(|(a, q)| a * q).sum();
    let mean_ln: f64 = q.iter().zip(ln_q).map(|(q, l)| q * l).sum();
    let mixed: f64 = a.iter().zip(q).zip(ln_q).map(|((a, q), l)| a * q * l).sum();
    c_dot_neg * (mixed - mean_a * mean_ln)
}

fn production_at_start(p: &[f64], a0: &ComplexMatrix, params: &SeaParams) -> f64 {
    let a = a0.diagonal_real();
    let ln_p: Vec<f64> = p.iter().map(|&x| x.max(params.log_floor).ln()).collect();
    production(4.0 * params.k / params.tau, &a, p, &ln_p)
}

pub(crate) fn frame_production(frame: &StateFrame, params: &SeaParams) -> f64 {
    production_at_start(frame.rho().eigenvalues(), &frame.a0(params), params)
}

/// Entropy production rate `dS/dt` a time `t` into a step that started from
/// the state with root `root` and multipliers `mult`.
pub fn entropy_production(
    root: &StateRoot,
    h: &HermitianOperator,
    mult: &LagrangeMultipliers,
    params: &SeaParams,
    t: f64,
) -> Result<f64> {
    let p = root.probabilities();
    let h_rot = root.decomposition().basis().rotate_into(h.matrix());
    let a0 = a0_rotated(&p, &h_rot, mult, params);
    if t == 0.0 {
        return Ok(production_at_start(&p, &a0, params));
    }
    let diss = dissipate(&a0, &h_rot, mult, params, t)?;
    let a = diss.w.rotate_into(&a0).diagonal_real();
    let decay = (-4.0 * params.k * t / params.tau).exp();
    let c_dot_neg = 4.0 * params.k / params.tau * dissipation_factor(t, params) * decay;
    Ok(production(c_dot_neg, &a, &diss.q, &diss.ln_q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TauLimit {
    Zero,
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsLimit {
    Zero,
    One,
}

/// One cell of the `(tau, epsilon)` limit table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LimitCorner {
    pub tau: TauLimit,
    pub eps: EpsLimit,
}

impl LimitCorner {
    pub const ALL: [LimitCorner; 4] = [
        LimitCorner::new(TauLimit::Zero, EpsLimit::Zero),
        LimitCorner::new(TauLimit::Zero, EpsLimit::One),
        LimitCorner::new(TauLimit::Infinity, EpsLimit::Zero),
        LimitCorner::new(TauLimit::Infinity, EpsLimit::One),
    ];

    pub const fn new(tau: TauLimit, eps: EpsLimit) -> Self {
        Self { tau, eps }
    }

    /// Subscript used in the table: `00`, `01`, `inf0`, `inf1`.
    pub fn label(&self) -> &'static str {
        match (self.tau, self.eps) {
            (TauLimit::Zero, EpsLimit::Zero) => "00",
            (TauLimit::Zero, EpsLimit::One) => "01",
            (TauLimit::Infinity, EpsLimit::Zero) => "inf0",
            (TauLimit::Infinity, EpsLimit::One) => "inf1",
        }
    }
}

/// Limit of a production rate that scales as `prefactor / tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateLimit {
    pub prefactor: f64,
    /// Set for `tau -> 0` with a non-vanishing prefactor.
    pub divergent: bool,
}

impl RateLimit {
    pub fn at_tau(&self, tau: f64) -> f64 {
        self.prefactor / tau
    }
}

/// `beta_H H + beta_I`.
fn constraint_operator(h: &HermitianOperator, mult: &LagrangeMultipliers) -> HermitianOperator {
    HermitianOperator::symmetrize(h.matrix().scale(mult.beta_h).add_identity(mult.beta_i))
}

fn trace_re(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// Entropy limit evaluated from the corner's closed-form display.
///
/// `tau -> 0, eps -> 0`: `-k^2 Tr[I/N^(1/e) exp((1-e)/(ke) B) (1-e)/(ke) B]`;
/// `tau -> 0, eps -> 1`: `-(1/e) Tr[rho0^(1/e) exp((1-e)/(ke) B) (ln rho0 + (1-e) k B)]`;
/// `tau -> inf`: `-(1/2) Tr[rho0 ln rho0]`; with `B = beta_H H + beta_I`.
pub fn entropy_limit(
    corner: LimitCorner,
    rho0: &DensityMatrix,
    mult: &LagrangeMultipliers,
    h: &HermitianOperator,
    k: f64,
    floor: f64,
) -> Result<f64> {
    let b = constraint_operator(h, mult);
    let n = rho0.dim() as f64;
    match (corner.tau, corner.eps) {
        (TauLimit::Zero, EpsLimit::Zero) => {
            let alpha = (1.0 - E) / (k * E);
            let exp_term = spectral_decompose(&b.scale(alpha))?.apply(SpectralFn::Exp, None)?;
            let product = &exp_term.matrix().scale(n.powf(-1.0 / E)) * &b.matrix().scale(alpha);
            Ok(-k * k * trace_re(&product))
        }
        (TauLimit::Zero, EpsLimit::One) => {
            let alpha = (1.0 - E) / (k * E);
            let root = rho0.spectrum().apply(SpectralFn::Pow(1.0 / E), Some(floor))?;
            let exp_term = spectral_decompose(&b.scale(alpha))?.apply(SpectralFn::Exp, None)?;
            let ln_rho = rho0.spectrum().apply(SpectralFn::Ln, Some(floor))?;
            let tail = ln_rho.matrix() + &b.matrix().scale((1.0 - E) * k);
            let product = &(root.matrix() * exp_term.matrix()) * &tail;
            Ok(-trace_re(&product) / E)
        }
        (TauLimit::Infinity, _) => Ok(0.5 * entropy_of_spectrum(rho0.eigenvalues(), 1.0, floor)),
    }
}

/// The value the limit table asserts for a corner, where it states one.
pub fn claimed_entropy_limit(corner: LimitCorner) -> Option<f64> {
    match corner.tau {
        TauLimit::Infinity => Some(0.0),
        TauLimit::Zero => None,
    }
}

/// Entropy production limit evaluated from the corner's closed-form display,
/// returned as the coefficient of `1/tau`.
///
/// `tau -> 0, eps -> 0`: `(1/e) Tr[(1-e) B^2 I/N^(1/2e) exp((1-e)/(2ke) B)]`;
/// `tau -> 0, eps -> 1`:
/// `(1/e) Tr[(k^2 ln^2 rho0 + k(2-e) B ln rho0 + (1-e) B^2) rho0^(1/2e) exp((1-e)/(2ke) B)]`;
/// `tau -> inf`: `k Tr[(k ln^2 rho0 + B ln rho0) rho0^(1/2)]`.
pub fn pi_s_limit(
    corner: LimitCorner,
    rho0: &DensityMatrix,
    mult: &LagrangeMultipliers,
    h: &HermitianOperator,
    params: &SeaParams,
) -> Result<RateLimit> {
    let k = params.k;
    let floor = params.log_floor;
    let b = constraint_operator(h, mult);
    let b2 = b.matrix() * b.matrix();
    let n = rho0.dim() as f64;
    let half_exp = || -> Result<HermitianOperator> {
        spectral_decompose(&b.scale((1.0 - E) / (2.0 * k * E)))?.apply(SpectralFn::Exp, None)
    };
    let prefactor = match (corner.tau, corner.eps) {
        (TauLimit::Zero, EpsLimit::Zero) => {
            let product = &b2.scale((1.0 - E) * n.powf(-1.0 / (2.0 * E))) * half_exp()?.matrix();
            trace_re(&product) / E
        }
        (TauLimit::Zero, EpsLimit::One) => {
            let ln_rho = rho0.spectrum().apply(SpectralFn::Ln, Some(floor))?;
            let ln_rho = ln_rho.matrix();
            let quadratic = &(&(ln_rho * ln_rho).scale(k * k) + &(b.matrix() * ln_rho).scale(k * (2.0 - E)))
                + &b2.scale(1.0 - E);
            let root = rho0.spectrum().apply(SpectralFn::Pow(1.0 / (2.0 * E)), Some(floor))?;
            let product = &(&quadratic * root.matrix()) * half_exp()?.matrix();
            trace_re(&product) / E
        }
        (TauLimit::Infinity, _) => {
            let ln_rho = rho0.spectrum().apply(SpectralFn::Ln, Some(floor))?;
            let ln_rho = ln_rho.matrix();
            let inner = &(ln_rho * ln_rho).scale(k) + &(b.matrix() * ln_rho);
            let root = rho0.spectrum().apply(SpectralFn::Sqrt, Some(floor))?;
            k * trace_re(&(&inner * root.matrix()))
        }
    };
    Ok(RateLimit {
        prefactor,
        divergent: corner.tau == TauLimit::Zero && prefactor.abs() > 1e-12,
    })
}

/// The value the limit table asserts for a production corner, where it
/// states one.
pub fn claimed_pi_s_limit(corner: LimitCorner) -> Option<f64> {
    match (corner.tau, corner.eps) {
        (TauLimit::Infinity, EpsLimit::Zero) => Some(0.0),
        _ => None,
    }
}
