//! One feasibility map per sort permutation.

use rayon::prelude::*;

use crate::atlas::classify::{Classification, CycleSource};
use crate::atlas::grid::{GridSpec, Provenance, RegionGrid};
use crate::cycle_lp::{lp_feasible_sigma, CycleOutcome};
use crate::error::Result;
use crate::format::fmt17;
use crate::lp::LpTolerances;
use crate::permutation::{reduced_permutations, Permutation};
use crate::types::{ClassParams, Tuning};

/// Cells where the system for `sigma` is feasible are `Cycle { min_k: K }`,
/// the rest `Unknown`.
pub fn permutation_map(
    spec: &GridSpec,
    c: &ClassParams,
    sigma: &Permutation,
    tol: &LpTolerances,
) -> Result<RegionGrid<Classification>> {
    spec.validate()?;
    c.validate()?;
    let k = sigma.len();
    let tunings: Vec<Tuning> = spec.centers().collect();
    let cells: Vec<Classification> = tunings
        .par_iter()
        .map(|t| {
            Ok(match lp_feasible_sigma(t, c, k, sigma, tol)? {
                CycleOutcome::Found(_) => Classification::Cycle {
                    min_k: k,
                    source: CycleSource::Dim1,
                },
                CycleOutcome::NotFound => Classification::Unknown { indeterminate: false },
                CycleOutcome::Indeterminate(_) => Classification::Unknown { indeterminate: true },
            })
        })
        .collect::<Result<_>>()?;
    let mut provenance = Provenance::new();
    provenance.insert("analysis", "permutation");
    provenance.insert("sigma", sigma.to_string());
    provenance.insert("mu", fmt17(c.mu));
    provenance.insert("L", fmt17(c.l));
    provenance.insert("tol_feas", fmt17(tol.feasible));
    provenance.insert("tol_infeas", fmt17(tol.infeasible));
    Ok(RegionGrid {
        spec: *spec,
        class: *c,
        cells,
        provenance,
        certificates: None,
    })
}

/// Maps for every reduced permutation of length `k`.
pub fn permutation_atlas(
    spec: &GridSpec,
    c: &ClassParams,
    k: usize,
    tol: &LpTolerances,
) -> Result<Vec<(Permutation, RegionGrid<Classification>)>> {
    reduced_permutations(k)?
        .into_iter()
        .map(|sigma| permutation_map(spec, c, &sigma, tol).map(|g| (sigma, g)))
        .collect()
}

pub fn count_feasible(grid: &RegionGrid<Classification>) -> usize {
    grid.cells.iter().filter(|c| c.is_cycle()).count()
}

pub fn count_indeterminate(grid: &RegionGrid<Classification>) -> usize {
    grid.cells
        .iter()
        .filter(|c| **c == Classification::Unknown { indeterminate: true })
        .count()
}
