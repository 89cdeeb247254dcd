//! End-to-end runs: validate, analyze persistence and weights, certify growth.

use crate::engine::{Engine, DEFAULT_DEPTH_BOUND};
use crate::error::{Error, ReduceError};
use crate::exec::Exec;
use crate::growth::{
    certify, compute_k, compute_l, verify_k_window, DefectViolation, GrowthCertificate, DEFAULT_FRONTIER_CAP,
    DEFAULT_M_MAX,
};
use crate::persistence::{
    build_persistence_graph, default_samples, sample_trajectories, verify_multipliers, verify_trajectory_structure,
    verify_transitivity, verify_x_independence, PersistenceGraph, StructureViolation, TrajectoryRecord,
    DEFAULT_HORIZON, DEFAULT_RETURN_BOUND,
};
use crate::semigroup::{Element, SemigroupSpec};
use crate::validate::{validate, ValidationReport, DEFAULT_WINDOW};
use crate::weights::{condense, synthesize_weights, verify_weights, Condensation, WeightAssignment, WeightViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub window: u64,
    pub depth_bound: u64,
    pub horizon: u64,
    pub t_max: u64,
    pub q_max: u64,
    pub m_max: u64,
    pub frontier_cap: usize,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window: DEFAULT_WINDOW,
            depth_bound: DEFAULT_DEPTH_BOUND,
            horizon: DEFAULT_HORIZON,
            t_max: DEFAULT_RETURN_BOUND,
            q_max: DEFAULT_RETURN_BOUND,
            m_max: DEFAULT_M_MAX,
            frontier_cap: DEFAULT_FRONTIER_CAP,
            exec: Exec::Sequential,
        }
    }
}

impl Config {
    pub fn engine(&self, spec: SemigroupSpec) -> Engine {
        Engine::with_depth_bound(spec, self.depth_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub graph: PersistenceGraph,
    pub samples: Vec<Element>,
    pub trajectories: Vec<TrajectoryRecord>,
    pub condensation: Condensation,
    pub weights: WeightAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("spec rejected by validation")]
    Invalid(ValidationReport),
    #[error("structural check failed")]
    Structural(Vec<StructureViolation>),
    #[error("weight verification failed")]
    Weights(Vec<WeightViolation>),
    #[error("search bounds too small")]
    Bounds(Vec<StructureViolation>),
    #[error("defect exceeds K on the re-check window")]
    KWindow(Vec<DefectViolation>),
    #[error(transparent)]
    Core(Error),
}

/// Coarse failure classes, one per exit code of the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Invalid,
    Horizon,
    Certificate,
    Resource,
}

impl PipelineError {
    pub fn kind(&self) -> FailureKind {
        match self {
            PipelineError::Invalid(_) | PipelineError::Structural(_) | PipelineError::Weights(_) => {
                FailureKind::Invalid
            }
            PipelineError::Bounds(_) => FailureKind::Horizon,
            PipelineError::KWindow(_) => FailureKind::Certificate,
            PipelineError::Core(e) => match e {
                Error::HorizonExhausted { .. } => FailureKind::Horizon,
                Error::CertificateViolation { .. } => FailureKind::Certificate,
                Error::FrontierCap { .. }
                | Error::SearchTooLarge { .. }
                | Error::ArithmeticOverflow
                | Error::Reduce(ReduceError::ExponentOverflow) => FailureKind::Resource,
                _ => FailureKind::Invalid,
            },
        }
    }
}

impl From<Error> for PipelineError {
    fn from(e: Error) -> Self {
        PipelineError::Core(e)
    }
}

/// Window checks only.
pub fn run_validation(engine: &Engine, cfg: &Config) -> ValidationReport {
    validate(engine, cfg.window, cfg.exec)
}

/// Persistence graph, structural verification, condensation and weights.
/// Assumes the spec passed validation.
pub fn analyze(engine: &Engine, cfg: &Config) -> Result<Analysis, PipelineError> {
    let graph = build_persistence_graph(engine, cfg.t_max, cfg.q_max, cfg.exec)?;
    let mut violations = verify_multipliers(engine, &graph, cfg.t_max, cfg.q_max)?;
    let samples = default_samples(engine)?;
    let trajectories = sample_trajectories(engine, &samples, cfg.horizon, cfg.exec)?;
    for rec in &trajectories {
        violations.extend(verify_trajectory_structure(rec));
    }
    violations.extend(verify_x_independence(&graph, &trajectories));
    violations.extend(verify_transitivity(&graph)?);
    if violations.iter().any(|v| !v.is_bound_related()) {
        violations.retain(|v| !v.is_bound_related());
        return Err(PipelineError::Structural(violations));
    }
    if !violations.is_empty() {
        return Err(PipelineError::Bounds(violations));
    }

    let condensation = condense(&graph)?;
    let weights = synthesize_weights(&condensation, &graph)?;
    let bad = verify_weights(&graph, &weights)?;
    if !bad.is_empty() {
        return Err(PipelineError::Weights(bad));
    }
    Ok(Analysis {
        graph,
        samples,
        trajectories,
        condensation,
        weights,
    })
}

/// Computes `K` and `L`, re-checks `K` on `(horizon, 2·horizon]` and
/// certifies the balls up to `m_max`.
pub fn certify_growth(engine: &Engine, cfg: &Config, analysis: &Analysis) -> Result<GrowthCertificate, PipelineError> {
    let d = &analysis.weights;
    let k = compute_k(engine, d, cfg.horizon, cfg.exec)?;
    let late = verify_k_window(engine, d, k.k, cfg.horizon, 2 * cfg.horizon)?;
    if !late.is_empty() {
        return Err(PipelineError::KWindow(late));
    }
    let l = compute_l(d)?;
    Ok(certify(
        engine,
        &analysis.graph,
        d,
        &k,
        l,
        cfg.m_max,
        cfg.frontier_cap,
        cfg.exec,
    )?)
}

/// Validation, analysis and certification in sequence.
pub fn run_all(engine: &Engine, cfg: &Config) -> Result<(Analysis, GrowthCertificate), PipelineError> {
    let report = run_validation(engine, cfg);
    if !report.accepted() {
        return Err(PipelineError::Invalid(report));
    }
    let analysis = analyze(engine, cfg)?;
    let cert = certify_growth(engine, cfg, &analysis)?;
    Ok((analysis, cert))
}
