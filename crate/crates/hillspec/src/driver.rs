//! Parallel computation drivers.
//!
//! The refinement plan from `hill-core` is a flat task list precisely so the
//! tasks can run on a worker pool; results are reassembled in plan order, so
//! parallel and sequential execution produce identical tables.

use std::sync::OnceLock;

use hill_core::floquet::{self, FloquetError, SpectrumTable};
use hill_core::galerkin::{self, GalerkinError};
use hill_core::potential::FourierPotential;
use hill_core::Parity;
use rayon::prelude::*;

/// Shared worker pool. `HILLSPEC_THREADS` caps the worker count; unset or
/// unparsable values fall back to the rayon default (one worker per CPU).
pub fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Ok(raw) = std::env::var("HILLSPEC_THREADS") {
            match raw.parse::<usize>() {
                Ok(n) if n >= 1 => builder = builder.num_threads(n),
                _ => eprintln!(
                    "hillspec: ignoring HILLSPEC_THREADS={raw:?} (want a positive integer)"
                ),
            }
        }
        builder.build().expect("worker pool")
    })
}

/// `count` eigenvalues per family via shooting-based refinement, with the
/// refinement tasks fanned out across the worker pool.
pub fn spectrum_parallel(
    q: &FourierPotential,
    count: usize,
    tol: f64,
) -> Result<SpectrumTable, FloquetError> {
    let plan = floquet::plan_spectrum(q, count, tol)?;
    let results: Result<Vec<_>, FloquetError> = thread_pool().install(|| {
        plan.tasks()
            .par_iter()
            .map(|task| floquet::refine(q, task, tol))
            .collect()
    });
    floquet::assemble_spectrum(&plan, &results?)
}

/// `count` eigenvalues per family from the truncated-matrix route, packaged
/// as a spectrum table (residuals are matrix residual norms).
pub fn matrix_spectrum(
    q: &FourierPotential,
    count: usize,
    cutoff: Option<usize>,
) -> Result<SpectrumTable, FloquetError> {
    let rows = |parity: Parity| -> Result<Vec<(f64, f64)>, GalerkinError> {
        let k = cutoff.unwrap_or_else(|| galerkin::default_cutoff(q, count));
        let set = galerkin::eigen(&galerkin::assemble(q, parity, k)?, count)?;
        Ok((0..count).map(|i| (set.value(i), set.residual(i))).collect())
    };
    let per = rows(Parity::Periodic).map_err(FloquetError::Seeding)?;
    let anti = rows(Parity::Antiperiodic).map_err(FloquetError::Seeding)?;
    SpectrumTable::from_routes(&per, &anti)
}
