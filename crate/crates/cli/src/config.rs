//! Scenario configuration: a TOML document deserialized into [`ScenarioConfig`]
//! and then range-checked. Every error names the dotted path of the key at
//! fault.

use std::fmt;
use std::path::PathBuf;

use sea_core::engine::SeaParams;
use sea_core::walk::{Ensemble, Graph, Interaction, WalkSystem, WalkerConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Dynamics {
    #[default]
    Sea,
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Ring,
    Hypercube,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub kind: GraphKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartNodes {
    One(usize),
    Many(Vec<usize>),
}

impl StartNodes {
    pub fn nodes(&self) -> Vec<usize> {
        match self {
            StartNodes::One(i) => vec![*i],
            StartNodes::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    #[default]
    None,
    Boson,
    Fermion,
}

impl From<InteractionKind> for Interaction {
    fn from(k: InteractionKind) -> Self {
        match k {
            InteractionKind::None => Interaction::None,
            InteractionKind::Boson => Interaction::Boson,
            InteractionKind::Fermion => Interaction::Fermion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkersSection {
    pub start: StartNodes,
    #[serde(default)]
    pub interaction: InteractionKind,
    #[serde(default = "one")]
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    #[default]
    Microcanonical,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Auto(AutoTag),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    #[serde(default)]
    pub kind: EnsembleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeaSection {
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "one")]
    pub dt: f64,
    #[serde(default = "default_log_floor")]
    pub log_floor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trace_drift: Option<f64>,
}

impl Default for SeaSection {
    fn default() -> Self {
        Self {
            k: 1.0,
            hbar: 1.0,
            tau: None,
            epsilon: None,
            dt: 1.0,
            log_floor: default_log_floor(),
            max_trace_drift: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub eps_values: Vec<f64>,
    pub tau_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftTag {
    Center,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shift {
    Named(ShiftTag),
    Origin(usize),
}

impl Default for Shift {
    fn default() -> Self {
        Shift::Named(ShiftTag::None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub shift: Shift,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: None,
            formats: default_formats(),
            shift: Shift::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub steps: usize,
    #[serde(default)]
    pub dynamics: Dynamics,
    #[serde(default)]
    pub baseline: bool,
    pub graph: GraphSection,
    pub walkers: WalkersSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub sea: SeaSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

fn one() -> f64 {
    1.0
}

fn default_log_floor() -> f64 {
    1e-12
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

/// One `(epsilon, tau)` trajectory job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub epsilon: f64,
    pub tau: f64,
}

/// Parses and validates a scenario. The returned config has every default
/// filled in.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let de = toml::Deserializer::new(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.message().to_string();
        ConfigError::at(if path == "." { "config".to_string() } else { path }, message)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(path: &str, x: f64) -> Result<(), ConfigError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::at(path, format!("must be a positive finite number, got {x}")))
    }
}

fn epsilon_in_range(path: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(ConfigError::at(path, format!("must lie in (0, 1], got {x}")))
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::at("name", "must not be empty"));
        }
        if self.steps == 0 {
            return Err(ConfigError::at("steps", "must be at least 1"));
        }
        let graph = self.graph()?;
        self.walker_config(graph.nodes())?;

        let sea = &self.sea;
        positive("sea.k", sea.k)?;
        positive("sea.hbar", sea.hbar)?;
        positive("sea.dt", sea.dt)?;
        if !(sea.log_floor > 0.0 && sea.log_floor < 1.0) {
            return Err(ConfigError::at("sea.log_floor", format!("must lie in (0, 1), got {}", sea.log_floor)));
        }
        if let Some(d) = sea.max_trace_drift {
            positive("sea.max_trace_drift", d)?;
        }
        if let Some(t) = sea.tau {
            positive("sea.tau", t)?;
        }
        if let Some(e) = sea.epsilon {
            epsilon_in_range("sea.epsilon", e)?;
        }

        match (&self.sweep, self.dynamics) {
            (Some(_), Dynamics::Unitary) => {
                return Err(ConfigError::at("sweep", "a sweep requires dynamics = \"sea\""));
            }
            (Some(sweep), Dynamics::Sea) => {
                if sweep.eps_values.is_empty() {
                    return Err(ConfigError::at("sweep.eps_values", "must not be empty"));
                }
                if sweep.tau_values.is_empty() {
                    return Err(ConfigError::at("sweep.tau_values", "must not be empty"));
                }
                for (i, &e) in sweep.eps_values.iter().enumerate() {
                    epsilon_in_range(&format!("sweep.eps_values[{i}]"), e)?;
                }
                for (i, &t) in sweep.tau_values.iter().enumerate() {
                    positive(&format!("sweep.tau_values[{i}]"), t)?;
                }
            }
            (None, Dynamics::Sea) => {
                if sea.tau.is_none() {
                    return Err(ConfigError::at("sea.tau", "required when no sweep is given"));
                }
                if sea.epsilon.is_none() {
                    return Err(ConfigError::at("sea.epsilon", "required when no sweep is given"));
                }
            }
            (None, Dynamics::Unitary) => {}
        }

        match (self.ensemble.kind, self.ensemble.beta) {
            (EnsembleKind::Microcanonical, Some(_)) => {
                return Err(ConfigError::at("ensemble.beta", "only meaningful for kind = \"canonical\""));
            }
            (EnsembleKind::Canonical, None) => {
                return Err(ConfigError::at("ensemble.beta", "required for kind = \"canonical\" (a number or \"auto\")"));
            }
            (EnsembleKind::Canonical, Some(BetaSpec::Value(b))) if !(b.is_finite() && b >= 0.0) => {
                return Err(ConfigError::at("ensemble.beta", format!("must be finite and non-negative, got {b}")));
            }
            _ => {}
        }

        if self.output.formats.is_empty() {
            return Err(ConfigError::at("output.formats", "must list at least one of \"csv\", \"json\""));
        }
        if let Shift::Origin(o) = self.output.shift {
            if o >= graph.nodes() {
                return Err(ConfigError::at("output.shift", format!("node {o} is outside the graph ({} nodes)", graph.nodes())));
            }
        }
        if self.output.shift != Shift::default() && self.graph.kind == GraphKind::Hypercube {
            return Err(ConfigError::at("output.shift", "shifts apply to ring graphs only"));
        }
        Ok(())
    }

    pub fn graph(&self) -> Result<Graph, ConfigError> {
        let g = &self.graph;
        match g.kind {
            GraphKind::Ring => {
                if g.dimension.is_some() {
                    return Err(ConfigError::at("graph.dimension", "not used by ring graphs"));
                }
                let nodes = g.nodes.ok_or_else(|| ConfigError::at("graph.nodes", "required for ring graphs"))?;
                Graph::ring(nodes).map_err(|e| ConfigError::at("graph.nodes", e))
            }
            GraphKind::Hypercube => {
                if g.nodes.is_some() {
                    return Err(ConfigError::at("graph.nodes", "not used by hypercube graphs; set graph.dimension"));
                }
                let d = g.dimension.ok_or_else(|| ConfigError::at("graph.dimension", "required for hypercube graphs"))?;
                Graph::hypercube(d).map_err(|e| ConfigError::at("graph.dimension", e))
            }
        }
    }

    pub fn walker_config(&self, nodes: usize) -> Result<WalkerConfig, ConfigError> {
        let w = &self.walkers;
        let start = w.start.nodes();
        for (i, &s) in start.iter().enumerate() {
            if s >= nodes {
                let path = match w.start {
                    StartNodes::One(_) => "walkers.start".to_string(),
                    StartNodes::Many(_) => format!("walkers.start[{i}]"),
                };
                return Err(ConfigError::at(path, format!("node {s} is outside the graph ({nodes} nodes)")));
            }
        }
        let cfg = match start.as_slice() {
            [i] => {
                if w.interaction != InteractionKind::None {
                    return Err(ConfigError::at("walkers.interaction", "needs two walkers"));
                }
                WalkerConfig::single(*i)
            }
            [i, j] => {
                if w.interaction == InteractionKind::Fermion && i == j {
                    return Err(ConfigError::at("walkers.start", format!("fermions cannot share node {i}")));
                }
                WalkerConfig::pair(*i, *j, w.interaction.into())
            }
            _ => return Err(ConfigError::at("walkers.start", format!("expected one or two nodes, got {}", start.len()))),
        };
        let cfg = cfg.with_mu(w.mu);
        cfg.validate(nodes).map_err(|e| ConfigError::at("walkers.mu", e))?;
        Ok(cfg)
    }

    pub fn system(&self) -> Result<WalkSystem, ConfigError> {
        let graph = self.graph()?;
        let walkers = self.walker_config(graph.nodes())?;
        WalkSystem::new(graph, walkers).map_err(|e| ConfigError::at("walkers", e))
    }

    /// Reference ensemble with `"auto"` resolved against the full Hamiltonian.
    pub fn ensemble(&self, system: &WalkSystem) -> Result<Ensemble, ConfigError> {
        match (self.ensemble.kind, self.ensemble.beta) {
            (EnsembleKind::Microcanonical, _) => Ok(Ensemble::Microcanonical),
            (EnsembleKind::Canonical, Some(BetaSpec::Value(b))) => {
                Ensemble::canonical(b).map_err(|e| ConfigError::at("ensemble.beta", e))
            }
            (EnsembleKind::Canonical, _) => {
                let b = system.auto_beta().map_err(|e| ConfigError::at("ensemble.beta", e))?;
                Ensemble::canonical(b).map_err(|e| ConfigError::at("ensemble.beta", e))
            }
        }
    }

    /// Sweep cells in row-major `(epsilon, tau)` order; a single cell without
    /// a sweep.
    pub fn cells(&self) -> Vec<Cell> {
        let (eps, taus) = match &self.sweep {
            Some(s) => (s.eps_values.clone(), s.tau_values.clone()),
            None => (
                vec![self.sea.epsilon.unwrap_or(1.0)],
                vec![self.sea.tau.unwrap_or(f64::INFINITY)],
            ),
        };
        let mut out = Vec::with_capacity(eps.len() * taus.len());
        for &epsilon in &eps {
            for &tau in &taus {
                out.push(Cell {
                    index: out.len(),
                    epsilon,
                    tau,
                });
            }
        }
        out
    }

    pub fn sea_params(&self, tau: f64) -> SeaParams {
        SeaParams {
            k: self.sea.k,
            hbar: self.sea.hbar,
            tau,
            dt: self.sea.dt,
            log_floor: self.sea.log_floor,
            max_trace_drift: self.sea.max_trace_drift,
        }
    }

    /// Node that the `"center"` shift moves to label 0: the first walker's start.
    pub fn origin(&self) -> Option<usize> {
        match self.output.shift {
            Shift::Named(ShiftTag::None) => None,
            Shift::Named(ShiftTag::Center) => self.walkers.start.nodes().first().copied(),
            Shift::Origin(o) => Some(o),
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "walk"
steps = 3
[graph]
kind = "ring"
nodes = 10
[walkers]
start = 4
[sea]
tau = 1.0
epsilon = 0.5
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.walkers.mu, 1.0);
        assert_eq!(cfg.sea.k, 1.0);
        assert_eq!(cfg.sea.dt, 1.0);
        assert_eq!(cfg.sea.hbar, 1.0);
        assert_eq!(cfg.dynamics, Dynamics::Sea);
        assert_eq!(cfg.output.formats, vec![Format::Csv, Format::Json]);
        assert_eq!(cfg.cells().len(), 1);
    }

    #[test]
    fn sweep_enumerates_grid() {
        let text = format!("{MINIMAL}[sweep]\neps_values = [0.2, 0.4, 0.6, 0.8, 1.0]\ntau_values = [0.02, 0.1, 1.0, 10.0, 90.02]\n");
        let cells = parse_config(&text).unwrap().cells();
        assert_eq!(cells.len(), 25);
        assert_eq!((cells[6].epsilon, cells[6].tau), (0.4, 0.1));
    }

    fn error_path(text: &str) -> String {
        parse_config(text).unwrap_err().path
    }

    #[test]
    fn unknown_keys_are_named() {
        assert_eq!(error_path(&MINIMAL.replace("tau = 1.0", "tau = 1.0\ntua = 2.0")), "sea.tua");
        assert_eq!(error_path(&format!("colour = 1\n{MINIMAL}")), "colour");
    }

    #[test]
    fn range_errors_are_named() {
        assert_eq!(error_path(&MINIMAL.replace("tau = 1.0", "tau = -1.0")), "sea.tau");
        assert_eq!(error_path(&MINIMAL.replace("epsilon = 0.5", "epsilon = 1.5")), "sea.epsilon");
        assert_eq!(error_path(&MINIMAL.replace("steps = 3", "steps = 0")), "steps");
        assert_eq!(error_path(&MINIMAL.replace("nodes = 10", "nodes = 2")), "graph.nodes");
        assert_eq!(error_path(&MINIMAL.replace("start = 4", "start = 40")), "walkers.start");
        let sweep = format!("{MINIMAL}[sweep]\neps_values = []\ntau_values = [1.0]\n");
        assert_eq!(error_path(&sweep), "sweep.eps_values");
    }

    #[test]
    fn coincident_fermions_are_rejected() {
        let text = MINIMAL.replace("start = 4", "start = [3, 3]\ninteraction = \"fermion\"");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.path, "walkers.start");
        assert!(err.message.contains("fermion"));
    }

    #[test]
    fn auto_beta_resolves_against_hamiltonian() {
        let text = MINIMAL
            .replace("nodes = 10", "nodes = 100")
            .replace("start = 4", "start = 50")
            + "[ensemble]\nkind = \"canonical\"\nbeta = \"auto\"\n";
        let cfg = parse_config(&text).unwrap();
        let sys = cfg.system().unwrap();
        match cfg.ensemble(&sys).unwrap() {
            Ensemble::Canonical { beta } => assert!((beta - 0.02178).abs() < 1e-5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_forms() {
        let center = parse_config(&format!("{MINIMAL}[output]\nshift = \"center\"\n")).unwrap();
        assert_eq!(center.origin(), Some(4));
        let fixed = parse_config(&format!("{MINIMAL}[output]\nshift = 7\n")).unwrap();
        assert_eq!(fixed.origin(), Some(7));
        assert_eq!(parse_config(MINIMAL).unwrap().origin(), None);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = parse_config(&format!("{MINIMAL}[ensemble]\nkind = \"canonical\"\nbeta = \"auto\"\n")).unwrap();
        let back: ScenarioConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
