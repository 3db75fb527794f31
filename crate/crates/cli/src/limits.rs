use std::io::Write;

use sea_core::engine::{lagrange_multipliers, state_root};
use sea_core::observables::{
    claimed_entropy_limit, claimed_pi_s_limit, entropy_limit, pi_s_limit, EpsLimit, LimitCorner, TauLimit,
};

use crate::config::ScenarioConfig;
use crate::output::FloatFormat;

/// One corner of the `(tau, epsilon)` limit table for a scenario's system.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub corner: LimitCorner,
    pub entropy: f64,
    pub entropy_claimed: Option<f64>,
    /// Coefficient of `1/tau` in the production rate.
    pub pi_s_prefactor: f64,
    pub pi_s_divergent: bool,
    pub pi_s_claimed: Option<f64>,
}

/// Evaluates the four corners. The `epsilon -> 0` corners start from the
/// reference ensemble state, the `epsilon -> 1` corners from the walker state.
pub fn limit_table(cfg: &ScenarioConfig) -> Result<Vec<LimitRow>, Box<dyn std::error::Error>> {
    let system = cfg.system()?;
    let ensemble = cfg.ensemble(&system)?;
    let params = cfg.sea_params(cfg.sea.tau.unwrap_or(1.0));
    let h = system.hamiltonian();
    let thermal = system.thermal_state(&ensemble)?;
    let walker = system.initial_state()?;

    let mut rows = Vec::with_capacity(4);
    for corner in LimitCorner::ALL {
        let rho = match corner.eps {
            EpsLimit::Zero => &thermal,
            EpsLimit::One => &walker,
        };
        let mult = lagrange_multipliers(&state_root(rho), h, &params)?;
        let s = entropy_limit(corner, rho, &mult, h, params.k, params.log_floor)?;
        let pi = pi_s_limit(corner, rho, &mult, h, &params)?;
        rows.push(LimitRow {
            corner,
            entropy: s,
            entropy_claimed: claimed_entropy_limit(corner),
            pi_s_prefactor: pi.prefactor,
            pi_s_divergent: pi.divergent,
            pi_s_claimed: claimed_pi_s_limit(corner),
        });
    }
    Ok(rows)
}

pub fn write_limit_csv<W: Write>(rows: &[LimitRow], float: FloatFormat, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record([
        "corner",
        "tau",
        "epsilon",
        "entropy",
        "entropy_claimed",
        "pi_s_prefactor",
        "pi_s_divergent",
        "pi_s_claimed",
    ])?;
    let opt = |x: Option<f64>| x.map(|v| float.format(v)).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.corner.label().to_string(),
            match r.corner.tau {
                TauLimit::Zero => "0",
                TauLimit::Infinity => "inf",
            }
            .to_string(),
            match r.corner.eps {
                EpsLimit::Zero => "0",
                EpsLimit::One => "1",
            }
            .to_string(),
            float.format(r.entropy),
            opt(r.entropy_claimed),
            float.format(r.pi_s_prefactor),
            r.pi_s_divergent.to_string(),
            opt(r.pi_s_claimed),
        ])?;
    }
    w.flush()?;
    Ok(())
}
