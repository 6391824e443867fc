//! Parameter-plane sweeps and their export.

pub mod border;
pub mod classify;
pub mod export;
pub mod grid;
pub mod permutations;

pub use border::{border_bisect, Border};
pub use classify::{classify_cell, classify_point, sweep, CellCertificates, Classification, ClassifyConfig, CycleSource};
pub use grid::{GridSpec, Provenance, RegionGrid, FORMAT_VERSION};
