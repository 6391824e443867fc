use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function class: need 0 < mu < L, got mu = {mu}, L = {l}")]
    InvalidClass { mu: f64, l: f64 },

    #[error("invalid tuning: {0}")]
    InvalidTuning(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("data not in class: secant slope {slope} between sorted knots {index} and {} outside [{mu}, {l}]", index + 1)]
    NotInClass {
        index: usize,
        slope: f64,
        mu: f64,
        l: f64,
    },

    #[error("inconsistent data: duplicate point x = {x} carries gradients {g1} and {g2}")]
    InconsistentData { x: f64, g1: f64, g2: f64 },

    #[error("solver could not decide: {0}")]
    Indeterminate(String),

    #[error("border bisection needs opposite statuses at the ray endpoints (both {0})")]
    SameStatus(&'static str),

    #[error("conflicting certificates at gamma = {gamma}, beta = {beta}:\n{dump}")]
    Conflict { gamma: f64, beta: f64, dump: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
