//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum PhysicsError {
    /// A state left the admissible set (positive density and pressure).
    #[error("inadmissible state: rho = {rho:.6e}, p = {p:.6e} ({context})")]
    Inadmissible { rho: f64, p: f64, context: &'static str },
}

#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("unsupported polynomial degree N = {0} (supported: 1..=15)")]
    UnsupportedDegree(usize),
    #[error("logarithmic mean requires positive arguments, got ({0:.6e}, {1:.6e})")]
    NonPositiveLogMean(f64, f64),
}

#[derive(Debug, Clone, Error)]
pub enum MeshError {
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("mesh fold-over: J = {j:.6e} <= 0 in element {elem} at node {node}")]
    FoldOver { elem: usize, node: usize, j: f64 },
    #[error("geometry degree N_geo = {n_geo} exceeds solution degree N = {n}")]
    GeometryDegree { n_geo: usize, n: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Failure during a time-marching run, carrying enough context to locate it.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error("run aborted at t = {time:.8e}, step {step}, stage {stage}, element {element}: {source}")]
    Aborted {
        time: f64,
        step: usize,
        stage: usize,
        element: usize,
        source: PhysicsError,
    },
    #[error("non-finite wave speed at t = {time:.8e}, step {step}, element {element}")]
    NonFiniteWaveSpeed { time: f64, step: usize, element: usize },
    #[error("configuration error: {0}")]
    Config(String),
}
