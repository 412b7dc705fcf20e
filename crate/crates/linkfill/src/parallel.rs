//! Rayon-backed drivers. Work is split per matrix row or per seed and
//! reassembled in index order, so results do not depend on the thread count.

use std::ops::Range;

use linkfill_core::certify::{certify_filling_with, Certificate, CertifyOptions, LinkingMatrix, MatrixPlan, Mode};
use linkfill_core::finger::{kernel_invariance_check, random_finger_map, FingerMoveMap, InvarianceReport};
use linkfill_core::{Ambient, LinkSpec, Result};
use rayon::prelude::*;

pub const THREADS_VAR: &str = "LINKFILL_THREADS";

/// Sizes the global pool from `LINKFILL_THREADS` if set. Later calls are no-ops.
pub fn init_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be positive"));
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn build_matrix(k: usize, link: &LinkSpec, mode: Mode) -> Result<LinkingMatrix> {
    let plan = MatrixPlan::new(k, link)?;
    let rows = (0..plan.basis_j.len())
        .into_par_iter()
        .map(|i| plan.row(i, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(plan.assemble(rows))
}

pub fn certify(m: usize, ambient: Ambient, opts: CertifyOptions) -> Result<Certificate> {
    certify_filling_with(m, ambient, opts, build_matrix)
}

#[derive(Clone, Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub map: FingerMoveMap,
    pub report: InvarianceReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerParams {
    pub radius: i64,
    pub value_degree: usize,
}

impl Default for FingerParams {
    fn default() -> Self {
        FingerParams {
            radius: 2,
            value_degree: 3,
        }
    }
}

pub fn finger_sweep(k: usize, link: &LinkSpec, seeds: Range<u64>, params: FingerParams) -> Result<Vec<SeedRun>> {
    seeds
        .into_par_iter()
        .map(|seed| {
            let map = random_finger_map(seed, params.radius, params.value_degree, link);
            let report = kernel_invariance_check(k, link, &map)?;
            Ok(SeedRun { seed, map, report })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use linkfill_core::certify;
    use linkfill_core::link::standard_link;

    #[test]
    fn parallel_matches_serial() {
        for ambient in [Ambient::Relative, Ambient::Torus] {
            let link = standard_link(2, ambient);
            for mode in [Mode::ClosedForm, Mode::Geometric] {
                assert_eq!(
                    build_matrix(2, &link, mode).unwrap(),
                    certify::build_matrix(2, &link, mode).unwrap()
                );
            }
        }
    }

    #[test]
    fn sweep_is_ordered_and_clean() {
        let link = standard_link(2, Ambient::Relative);
        let runs = finger_sweep(2, &link, 5..15, FingerParams::default()).unwrap();
        assert_eq!(
            runs.iter().map(|r| r.seed).collect::<Vec<_>>(),
            (5..15).collect::<Vec<_>>()
        );
        assert!(runs.iter().all(|r| r.report.clean()));
    }
}
