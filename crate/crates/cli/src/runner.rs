//! Executes a scenario: every `(epsilon, tau)` cell is an independent job on a
//! rayon pool, and a single collector on the calling thread writes results in
//! cell order, so output bytes do not depend on the worker count.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use sea_core::engine::{SeaPropagator, UnitaryPropagator};
use sea_core::observables::{entropy, energy_expectation, node_probabilities, reduced_probabilities};
use sea_core::operator::DensityMatrix;
use sea_core::walk::{Ensemble, WalkSystem};
use serde::{Deserialize, Serialize};

use crate::config::{parse_config, Cell, ConfigError, Dynamics, Format, ScenarioConfig};
use crate::manifest::{content_hash, CellReport, CellStatus, FileEntry, RunManifest};
use crate::output::{write_json, CsvSink, FloatFormat, OutputError};

pub const PROBABILITY_CSV: &str = "probability.csv";
pub const ENTROPY_CSV: &str = "entropy.csv";
pub const HEATMAP_CSV: &str = "heatmap.csv";
pub const UNITARY_CSV: &str = "probability_unitary.csv";
pub const RECORDS_JSON: &str = "records.json";
pub const MANIFEST_JSON: &str = "manifest.json";

const PROBABILITY_HEADER: [&str; 6] = ["scenario", "epsilon", "tau", "step", "node", "probability"];
const ENTROPY_HEADER: [&str; 10] = [
    "scenario",
    "epsilon",
    "tau",
    "step",
    "entropy",
    "entropy_rate",
    "energy",
    "trace",
    "beta_H",
    "beta_I",
];
const HEATMAP_HEADER: [&str; 5] = ["epsilon", "tau", "step", "entropy", "entropy_rate"];

/// A parsed config together with the text it came from.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub source: String,
}

impl Scenario {
    pub fn parse(source: impl Into<String>) -> Result<Self, ConfigError> {
        let source = source.into();
        Ok(Self {
            config: parse_config(&source)?,
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(text)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `output.directory`.
    pub out: Option<PathBuf>,
    /// Pool size; 0 lets rayon choose.
    pub workers: usize,
    /// Forces the unitary baseline on.
    pub baseline: bool,
    pub float: FloatFormat,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Observables of one recorded step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub entropy: f64,
    pub entropy_rate: f64,
    pub energy: f64,
    pub trace: f64,
    pub beta_h: Option<f64>,
    pub beta_i: Option<f64>,
    /// `(node label, probability)`, sorted by label.
    pub probabilities: Vec<(i64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub epsilon: Option<f64>,
    pub tau: Option<f64>,
    pub steps: Vec<StepRecord>,
    pub error: Option<String>,
    /// Wall time, reported in the manifest only so records stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

impl Trajectory {
    fn report(&self, index: usize) -> CellReport {
        CellReport {
            index,
            epsilon: self.epsilon,
            tau: self.tau,
            status: if self.error.is_some() { CellStatus::Failed } else { CellStatus::Ok },
            steps_completed: self.steps.last().map_or(0, |s| s.step),
            error: self.error.clone(),
            seconds: self.seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordsFile {
    pub scenario: String,
    pub cells: Vec<Trajectory>,
    pub baseline: Option<Trajectory>,
}

/// Node distribution of a sector state, reduced to one walker for pairs.
fn distribution(system: &WalkSystem, rho: &DensityMatrix, origin: Option<usize>) -> sea_core::Result<Vec<(i64, f64)>> {
    let full = system.to_node_space(rho)?;
    let dist = if system.walkers().count() == 1 {
        node_probabilities(&full)?
    } else {
        reduced_probabilities(&full, system.nodes())?
    };
    Ok(dist.with_origin(origin).labelled())
}

fn sea_trajectory(cfg: &ScenarioConfig, system: &WalkSystem, ensemble: &Ensemble, cell: Cell) -> Trajectory {
    let start = Instant::now();
    let mut steps = Vec::with_capacity(cfg.steps + 1);
    let origin = cfg.origin();
    let result = (|| {
        let prop = SeaPropagator::new(system.hamiltonian().clone(), cfg.sea_params(cell.tau))?;
        let rho0 = system.sea_initial(ensemble, cell.epsilon)?;
        prop.evolve_with(rho0, cfg.steps, |rec| {
            steps.push(StepRecord {
                step: rec.step,
                entropy: rec.entropy,
                entropy_rate: rec.entropy_rate,
                energy: rec.energy,
                trace: rec.trace,
                beta_h: Some(rec.multipliers.beta_h),
                beta_i: Some(rec.multipliers.beta_i),
                probabilities: distribution(system, &rec.rho, origin)?,
            });
            Ok(())
        })
    })();
    Trajectory {
        epsilon: Some(cell.epsilon),
        tau: Some(cell.tau),
        steps,
        error: result.err().map(|e| e.to_string()),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn unitary_trajectory(cfg: &ScenarioConfig, system: &WalkSystem) -> Trajectory {
    let start = Instant::now();
    let mut steps = Vec::with_capacity(cfg.steps + 1);
    let origin = cfg.origin();
    let h = system.hamiltonian();
    let result = (|| {
        let prop = UnitaryPropagator::new(h, cfg.sea.dt, cfg.sea.hbar)?;
        let mut rho = system.initial_state()?;
        for step in 0..=cfg.steps {
            if step > 0 {
                rho = prop.step(&rho)?;
            }
            steps.push(StepRecord {
                step,
                entropy: entropy(&rho, cfg.sea.k, cfg.sea.log_floor),
                entropy_rate: 0.0,
                energy: energy_expectation(&rho, h),
                trace: rho.trace(),
                beta_h: None,
                beta_i: None,
                probabilities: distribution(system, &rho, origin)?,
            });
        }
        sea_core::Result::Ok(())
    })();
    Trajectory {
        epsilon: None,
        tau: None,
        steps,
        error: result.err().map(|e| e.to_string()),
        seconds: start.elapsed().as_secs_f64(),
    }
}

enum Job {
    Cell(Cell),
    Unitary,
    Baseline,
}

/// Writers for the CSV tables of one run.
struct Tables {
    scenario: String,
    float: FloatFormat,
    probability: Option<CsvSink>,
    entropy: Option<CsvSink>,
    heatmap: Option<CsvSink>,
    unitary: Option<CsvSink>,
}

impl Tables {
    fn opt(&self, x: Option<f64>) -> String {
        x.map(|v| self.float.format(v)).unwrap_or_default()
    }

    fn write_main(&mut self, t: &Trajectory) -> Result<(), OutputError> {
        let (eps, tau) = (self.opt(t.epsilon), self.opt(t.tau));
        for s in &t.steps {
            if let Some(sink) = self.probability.as_mut() {
                for &(node, p) in &s.probabilities {
                    let row = [
                        self.scenario.clone(),
                        eps.clone(),
                        tau.clone(),
                        s.step.to_string(),
                        node.to_string(),
                        self.float.format(p),
                    ];
                    sink.write(&row)?;
                }
            }
            let row = [
                self.scenario.clone(),
                eps.clone(),
                tau.clone(),
                s.step.to_string(),
                self.float.format(s.entropy),
                self.float.format(s.entropy_rate),
                self.float.format(s.energy),
                self.float.format(s.trace),
                self.opt(s.beta_h),
                self.opt(s.beta_i),
            ];
            if let Some(sink) = self.entropy.as_mut() {
                sink.write(&row)?;
            }
            if let Some(sink) = self.heatmap.as_mut() {
                if s.step > 0 {
                    let row = [
                        eps.clone(),
                        tau.clone(),
                        s.step.to_string(),
                        self.float.format(s.entropy),
                        self.float.format(s.entropy_rate),
                    ];
                    sink.write(&row)?;
                }
            }
        }
        Ok(())
    }

    fn write_baseline(&mut self, t: &Trajectory) -> Result<(), OutputError> {
        let Some(sink) = self.unitary.as_mut() else {
            return Ok(());
        };
        for s in &t.steps {
            for &(node, p) in &s.probabilities {
                let row = [
                    self.scenario.clone(),
                    String::new(),
                    String::new(),
                    s.step.to_string(),
                    node.to_string(),
                    self.float.format(p),
                ];
                sink.write(&row)?;
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<Vec<FileEntry>, OutputError> {
        let mut files = Vec::new();
        for (name, sink) in [
            (PROBABILITY_CSV, self.probability),
            (ENTROPY_CSV, self.entropy),
            (HEATMAP_CSV, self.heatmap),
            (UNITARY_CSV, self.unitary),
        ] {
            if let Some(sink) = sink {
                files.push(FileEntry {
                    path: name.to_string(),
                    rows: Some(sink.finish()?),
                });
            }
        }
        Ok(files)
    }
}

pub fn output_directory(cfg: &ScenarioConfig, opts: &RunOptions) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| cfg.output.directory.clone())
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

/// Runs every cell of the scenario and writes its datasets and manifest.
/// Engine failures are confined to their cell; only configuration and I/O
/// problems return an error.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunManifest, RunError> {
    let started = Instant::now();
    let cfg = &scenario.config;
    let system = cfg.system()?;
    let ensemble = cfg.ensemble(&system)?;
    let dir = output_directory(cfg, opts);
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| OutputError::Io { path, source }
    };
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    for name in [PROBABILITY_CSV, ENTROPY_CSV, HEATMAP_CSV, UNITARY_CSV, RECORDS_JSON, MANIFEST_JSON] {
        let path = dir.join(name);
        if path.exists() {
            fs::remove_file(&path).map_err(io_err(&path))?;
        }
    }

    let baseline = (cfg.baseline || opts.baseline) && cfg.dynamics == Dynamics::Sea;
    let mut jobs: Vec<Job> = match cfg.dynamics {
        Dynamics::Sea => cfg.cells().into_iter().map(Job::Cell).collect(),
        Dynamics::Unitary => vec![Job::Unitary],
    };
    let main_jobs = jobs.len();
    if baseline {
        jobs.push(Job::Baseline);
    }

    let csv = cfg.wants(Format::Csv);
    let sink = |name: &str, header: &[&str], on: bool| -> Result<Option<CsvSink>, OutputError> {
        if on {
            CsvSink::create(&dir.join(name), header).map(Some)
        } else {
            Ok(None)
        }
    };
    let mut tables = Tables {
        scenario: cfg.name.clone(),
        float: opts.float,
        probability: sink(PROBABILITY_CSV, &PROBABILITY_HEADER, csv)?,
        entropy: sink(ENTROPY_CSV, &ENTROPY_HEADER, csv)?,
        heatmap: sink(HEATMAP_CSV, &HEATMAP_HEADER, csv && cfg.sweep.is_some())?,
        unitary: sink(UNITARY_CSV, &PROBABILITY_HEADER, csv && baseline)?,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let workers = pool.current_num_threads();
    let keep_records = cfg.wants(Format::Json);

    let (tx, rx) = mpsc::channel::<(usize, Trajectory)>();
    let collected = pool.in_place_scope(|scope| -> Result<(Vec<Trajectory>, Option<Trajectory>), OutputError> {
        for (slot, job) in jobs.into_iter().enumerate() {
            let tx = tx.clone();
            let (system, ensemble) = (&system, &ensemble);
            scope.spawn(move |_| {
                let t = match job {
                    Job::Cell(cell) => sea_trajectory(cfg, system, ensemble, cell),
                    Job::Unitary | Job::Baseline => unitary_trajectory(cfg, system),
                };
                // The receiver only disappears if the collector already failed.
                let _ = tx.send((slot, t));
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut next = 0;
        let mut cells = Vec::with_capacity(main_jobs);
        let mut base = None;
        for (slot, t) in rx {
            if slot == main_jobs {
                tables.write_baseline(&t)?;
                base = Some(t);
                continue;
            }
            pending.insert(slot, t);
            while let Some(t) = pending.remove(&next) {
                tables.write_main(&t)?;
                cells.push(t);
                next += 1;
            }
        }
        Ok((cells, base))
    });
    let (cells, base) = collected?;

    let mut files = tables.finish()?;
    if keep_records {
        let records = RecordsFile {
            scenario: cfg.name.clone(),
            cells: cells.clone(),
            baseline: base.clone(),
        };
        write_json(&records, &dir.join(RECORDS_JSON))?;
        files.push(FileEntry {
            path: RECORDS_JSON.to_string(),
            rows: None,
        });
    }

    let manifest = RunManifest {
        scenario: cfg.name.clone(),
        config: cfg.clone(),
        config_hash: content_hash(scenario.source.as_bytes()),
        beta: match ensemble {
            Ensemble::Canonical { beta } => Some(beta),
            Ensemble::Microcanonical => None,
        },
        float_digits: opts.float.digits(),
        workers,
        files,
        cells: cells.iter().enumerate().map(|(i, t)| t.report(i)).collect(),
        baseline: base.as_ref().map(|t| t.report(0)),
        total_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(&manifest, &dir.join(MANIFEST_JSON))?;
    Ok(manifest)
}
