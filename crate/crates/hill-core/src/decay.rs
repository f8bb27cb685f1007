//! Decay-rate classification and the end-to-end verification harnesses.
//!
//! The analytical statements under test relate the decay of instability-gap
//! lengths `l_n` to the decay of the potential's Fourier coefficients
//! `|c_n|`: if gaps decay like `o(n⁻²)` so do the coefficients, and a strong
//! smallness hypothesis (`l_n < ε n⁻²` beyond some `n₀`) together with the
//! free eigenvalues `(nπ)²` appearing in the spectrum pins the potential to
//! zero. At desk scale an `o(·)` claim is not falsifiable at a single index,
//! so it is operationalized as a dyadic-block trend policy: fixed, explicit
//! thresholds make every verdict reproducible.
//!
//! Gap measurement runs on two independent routes — truncated-matrix
//! eigenvalue differences (fast, used for the full sweep) and shooting-based
//! band-edge refinement (used on a spot-check subset) — so neither method's
//! systematic error silently shapes a verdict.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::asymptotics::{self, AsymptoticsError};
use crate::floquet::{self, FloquetError, RefineTask, SpectrumTable, CLUSTER_TOL};
use crate::galerkin::{self, GalerkinError};
use crate::potential::FourierPotential;
use crate::Parity;

/// Desk-scale cap on the harness sweep.
const MAX_N: usize = 200;

/// Pairs split narrower than this fraction of their energy are beyond the
/// edge-resolving power of double-precision shooting (see the spot-check
/// allowance in [`theorem1_harness`]).
const SPLIT_CONDITIONING: f64 = 2e-5;

/// Recovered mean below this is "indistinguishable from zero" for the
/// inverse-direction conclusion.
const ZERO_MEAN_TOL: f64 = 1e-2;

/// Recovered `∫q²` below this is "indistinguishable from zero".
const ZERO_NORM_TOL: f64 = 5e-2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecayError {
    #[error("classification range [{n_min}, {n_max}] too small (need n_min ≥ 4, n_max ≥ 4·n_min)")]
    InsufficientRange { n_min: usize, n_max: usize },
    #[error("sweep limit {n_max} exceeds the supported {MAX_N}")]
    SweepTooLarge { n_max: usize },
    #[error("gap measurement failed: {0}")]
    Matrix(#[from] GalerkinError),
    #[error("band-edge refinement failed: {0}")]
    Shooting(#[from] FloquetError),
    #[error("recovery step failed: {0}")]
    Recovery(#[from] AsymptoticsError),
}

/// A non-negative sequence `s_n`, `n = n_min ..= n_max`, tested against the
/// power `n^{-p}`. Classification works on the scaled values `n^p·|s_n|`.
#[derive(Debug, Clone)]
pub struct DecaySequence {
    n_min: usize,
    exponent: i32,
    values: Vec<f64>,
}

impl DecaySequence {
    /// Sequence starting at `n_min`, tested against `n⁻²`.
    pub fn new(n_min: usize, values: Vec<f64>) -> Self {
        DecaySequence {
            n_min,
            exponent: 2,
            values,
        }
    }

    pub fn with_exponent(mut self, p: i32) -> Self {
        self.exponent = p;
        self
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_min + self.values.len().saturating_sub(1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `n^p·|s_n|` for the entry at sequence index `i`.
    pub fn scaled(&self, i: usize) -> f64 {
        let n = (self.n_min + i) as f64;
        n.powi(self.exponent) * self.values[i].abs()
    }
}

/// The classification policy: dyadic-block maxima of the scaled sequence
/// must decay by `rho` per block (or bottom out below `tau_abs`) to count as
/// `o(n⁻ᵖ)`; a total growth within `gamma` still counts as `O(n⁻ᵖ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Required per-block decay ratio for the small-o verdict.
    pub rho: f64,
    /// Absolute floor: a final block below this is already "vanished".
    pub tau_abs: f64,
    /// Allowed total growth of block maxima for the big-O verdict.
    pub gamma: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            rho: 0.7,
            tau_abs: 1e-3,
            gamma: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DecayClass {
    SmallO,
    BigOOnly,
    NotBigO,
}

/// Classification outcome plus everything needed to reproduce it.
#[derive(Debug, Clone)]
pub struct DecayVerdict {
    pub classification: DecayClass,
    /// Max of the scaled sequence over the final dyadic block.
    pub tail_statistic: f64,
    /// `(block start 2^k, block max)` rows, ascending.
    pub block_table: Vec<(usize, f64)>,
    pub thresholds: Thresholds,
}

/// Classify a sequence against `n⁻ᵖ` by dyadic-block maxima of `n^p·s_n`:
/// `SmallO` when the last blocks decay by `rho` each (or the final block sits
/// below `tau_abs`), `BigOOnly` when the blocks stay within a factor `gamma`
/// of the first without decaying, `NotBigO` otherwise.
pub fn classify(seq: &DecaySequence, thresholds: &Thresholds) -> Result<DecayVerdict, DecayError> {
    let (n_min, n_max) = (seq.n_min(), seq.n_max());
    if n_min < 4 || n_max < 4 * n_min {
        return Err(DecayError::InsufficientRange { n_min, n_max });
    }
    let mut blocks: Vec<(usize, f64)> = Vec::new();
    for i in 0..seq.values.len() {
        let n = n_min + i;
        let start = 1usize << n.ilog2();
        let scaled = seq.scaled(i);
        match blocks.last_mut() {
            Some((s, max)) if *s == start => *max = max.max(scaled),
            _ => blocks.push((start, scaled)),
        }
    }
    let maxima: Vec<f64> = blocks.iter().map(|b| b.1).collect();
    let tail = *maxima.last().expect("pre guarantees blocks");

    let ratio_window = maxima.len().saturating_sub(1).min(3);
    let ratios_decay = (maxima.len() - 1 - ratio_window..maxima.len() - 1).all(|i| {
        let (prev, next) = (maxima[i], maxima[i + 1]);
        if prev == 0.0 {
            next == 0.0
        } else {
            next / prev <= thresholds.rho
        }
    });

    let classification = if ratios_decay || tail < thresholds.tau_abs {
        DecayClass::SmallO
    } else {
        let peak = maxima.iter().copied().fold(0.0, f64::max);
        let base = maxima[0].max(thresholds.tau_abs);
        if peak / base <= thresholds.gamma {
            DecayClass::BigOOnly
        } else {
            DecayClass::NotBigO
        }
    };
    Ok(DecayVerdict {
        classification,
        tail_statistic: tail,
        block_table: blocks,
        thresholds: *thresholds,
    })
}

// ---------------------------------------------------------------------------
// Gap measurement routes
// ---------------------------------------------------------------------------

/// Gap lengths `l_1 ..= l_n_max` from truncated-matrix eigenvalue
/// differences. Truncation bias largely cancels in the difference of two
/// adjacent eigenvalues, making this the fast full-sweep route. Lengths
/// below the clustering resolution are reported as exact zeros.
pub fn matrix_gap_lengths(q: &FourierPotential, n_max: usize) -> Result<Vec<f64>, DecayError> {
    if n_max > MAX_N {
        return Err(DecayError::SweepTooLarge { n_max });
    }
    let cutoff = galerkin::default_cutoff(q, n_max + 2);
    let per = galerkin::eigen(&galerkin::assemble(q, Parity::Periodic, cutoff)?, 0)?;
    let anti = galerkin::eigen(&galerkin::assemble(q, Parity::Antiperiodic, cutoff)?, 0)?;
    // The eigensolver resolves differences down to a multiple of ε·‖T‖ with
    // ‖T‖ set by the largest retained frequency; only differences below that
    // are indistinguishable from a degenerate pair.
    let resolution = 100.0 * f64::EPSILON * (1.0 + (2.0 * PI * cutoff as f64).powi(2));
    let mut lengths = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let m = (n - 1) / 2;
        let (a, b) = if n % 2 == 1 {
            (anti.value(2 * m), anti.value(2 * m + 1))
        } else {
            (per.value(2 * m + 1), per.value(2 * m + 2))
        };
        let raw = b - a;
        lengths.push(if raw < resolution { 0.0 } else { raw });
    }
    Ok(lengths)
}

/// Gap lengths for a chosen subset of indices via shooting-based band-edge
/// refinement — the independent spot-check route. Returns `(n, length)` in
/// the order requested.
pub fn shooting_gap_lengths(
    q: &FourierPotential,
    subset: &[usize],
    tol: f64,
) -> Result<Vec<(usize, f64)>, DecayError> {
    let Some(&n_top) = subset.iter().max() else {
        return Ok(Vec::new());
    };
    let plan = floquet::plan_spectrum(q, n_top + 2, tol)?;
    let mut out = Vec::with_capacity(subset.len());
    for &n in subset {
        let want_parity = if n % 2 == 1 {
            Parity::Antiperiodic
        } else {
            Parity::Periodic
        };
        let want_m = if n % 2 == 1 { (n - 1) / 2 } else { (n - 2) / 2 };
        let task = plan
            .tasks()
            .iter()
            .find(|t| matches!(t, RefineTask::Pair { parity, m, .. } if *parity == want_parity && *m == want_m))
            .copied()
            .ok_or(FloquetError::PlanMismatch)?;
        match floquet::refine(q, &task, tol)? {
            floquet::RefinedRoots::Pair { left, right, .. } => {
                let raw = right - left;
                let len = if raw < CLUSTER_TOL * (1.0 + left.abs()) {
                    0.0
                } else {
                    raw
                };
                out.push((n, len));
            }
            floquet::RefinedRoots::Ground { .. } => return Err(FloquetError::PlanMismatch.into()),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Forward-direction harness: gap decay ⇒ coefficient decay
// ---------------------------------------------------------------------------

/// One row of the `l_n` vs `2|c_n|` comparison, kept only where the
/// coefficient rises above the measurement floor.
#[derive(Debug, Clone, Copy)]
pub struct RatioRow {
    pub n: usize,
    pub gap: f64,
    pub two_cn: f64,
    pub ratio: f64,
}

/// One spot-check row: both measurement routes at the same index.
#[derive(Debug, Clone, Copy)]
pub struct CrossCheckRow {
    pub n: usize,
    pub matrix_length: f64,
    pub shooting_length: f64,
    pub allowance: f64,
}

impl CrossCheckRow {
    pub fn within_allowance(&self) -> bool {
        (self.matrix_length - self.shooting_length).abs() <= self.allowance
    }
}

/// Full forward-direction report: both verdicts, the implication status, the
/// leading-order ratio table, and the dual-route spot checks.
#[derive(Debug, Clone)]
pub struct Theorem1Report {
    pub n_max: usize,
    pub gap_lengths: Vec<f64>,
    pub coefficient_moduli: Vec<f64>,
    pub gap_verdict: DecayVerdict,
    pub coefficient_verdict: DecayVerdict,
    /// `gaps o(n⁻²) ⇒ coefficients o(n⁻²)` — the statement under test.
    pub implication_holds: bool,
    pub ratio_rows: Vec<RatioRow>,
    pub cross_checks: Vec<CrossCheckRow>,
}

impl Theorem1Report {
    pub fn cross_checks_pass(&self) -> bool {
        self.cross_checks.iter().all(CrossCheckRow::within_allowance)
    }
}

/// Smallest coefficient scale the gap measurement can resolve at index `n`.
fn ratio_floor(n: usize) -> f64 {
    let lam = (n as f64 * PI) * (n as f64 * PI);
    (1e-11 * (1.0 + lam)).max(1e-7)
}

/// Measure gaps (matrix sweep + shooting spot checks on `subset`), classify
/// both the gap and coefficient sequences, and test the implication
/// direction. Report-producing: verdicts are data, not assertions.
pub fn theorem1_harness(
    q: &FourierPotential,
    n_max: usize,
    thresholds: &Thresholds,
    subset: &[usize],
) -> Result<Theorem1Report, DecayError> {
    if n_max > MAX_N {
        return Err(DecayError::SweepTooLarge { n_max });
    }
    let gap_lengths = matrix_gap_lengths(q, n_max)?;
    let coefficient_moduli: Vec<f64> = (1..=n_max)
        .map(|n| q.coefficient(n as i64).norm())
        .collect();

    let start = 4usize;
    let gap_seq = DecaySequence::new(start, gap_lengths[start - 1..].to_vec());
    let coeff_seq = DecaySequence::new(start, coefficient_moduli[start - 1..].to_vec());
    let gap_verdict = classify(&gap_seq, thresholds)?;
    let coefficient_verdict = classify(&coeff_seq, thresholds)?;
    let implication_holds = gap_verdict.classification != DecayClass::SmallO
        || coefficient_verdict.classification == DecayClass::SmallO;

    let ratio_rows: Vec<RatioRow> = (1..=n_max)
        .filter_map(|n| {
            let two_cn = 2.0 * q.coefficient(n as i64).norm();
            if two_cn <= ratio_floor(n) {
                return None;
            }
            let gap = gap_lengths[n - 1];
            Some(RatioRow {
                n,
                gap,
                two_cn,
                ratio: gap / two_cn,
            })
        })
        .collect();

    let spot = shooting_gap_lengths(q, subset, 1e-10)?;
    let cross_checks = spot
        .into_iter()
        .map(|(n, shooting_length)| {
            let lam = (n as f64 * PI) * (n as f64 * PI);
            let matrix_length = gap_lengths[n - 1];
            // Edge location through the discriminant is conditioned as
            // δλ ≈ 2λ·δΔ / l against the f64 evaluation floor δΔ ≈ 1e-13, so
            // a pair split narrower than ~2e-5·λ cannot be edge-resolved by
            // any double-precision shooting method. Its refined interval
            // still lies inside the true gap, so grant such pairs their own
            // width as slack; wider gaps are held to the strict allowance.
            let conditioning = SPLIT_CONDITIONING * lam.max(1.0);
            CrossCheckRow {
                n,
                matrix_length,
                shooting_length,
                allowance: 1e-8 * (1.0 + lam) + matrix_length.min(conditioning),
            }
        })
        .collect();

    Ok(Theorem1Report {
        n_max,
        gap_lengths,
        coefficient_moduli,
        gap_verdict,
        coefficient_verdict,
        implication_holds,
        ratio_rows,
        cross_checks,
    })
}

// ---------------------------------------------------------------------------
// Inverse-direction harness: smallness hypotheses ⇒ q = 0
// ---------------------------------------------------------------------------

/// One membership row: how close `(nπ)²` comes to the computed spectrum of
/// the matching family.
#[derive(Debug, Clone, Copy)]
pub struct MembershipRow {
    pub n: usize,
    pub target: f64,
    pub nearest: f64,
    pub defect: f64,
    pub within_tolerance: bool,
}

/// Inverse-direction report: gap-smallness hypothesis, free-eigenvalue
/// membership, recovered mean and norm, and the conclusion (drawn only when
/// every hypothesis holds).
#[derive(Debug, Clone)]
pub struct Theorem2Report {
    pub n0: usize,
    pub eps: f64,
    /// `(n, l_n, ε·n⁻²)` for `n > n0`.
    pub gap_rows: Vec<(usize, f64, f64)>,
    pub gap_hypothesis_holds: bool,
    pub membership_rows: Vec<MembershipRow>,
    pub membership_holds: bool,
    pub recovered_mean: f64,
    pub recovered_norm: f64,
    /// `Some(true)` = hypotheses hold and both recovered quantities vanish
    /// ("consistent with q = 0"); `None` = hypotheses failed, no conclusion.
    pub consistent_with_zero: Option<bool>,
}

/// Analyze an already-computed spectrum against the inverse hypotheses.
/// `refinement_tol` must be the tolerance the spectrum was refined at; the
/// membership window is `10·refinement_tol·(1 + (nπ)²)`.
pub fn theorem2_analyze(
    spec: &SpectrumTable,
    n0: usize,
    eps: f64,
    refinement_tol: f64,
) -> Result<Theorem2Report, DecayError> {
    let gaps = floquet::gap_table(spec);
    let mut gap_rows = Vec::new();
    let mut gap_hypothesis_holds = true;
    for entry in gaps.entries().iter().filter(|e| e.n > n0) {
        let bound = eps / (entry.n as f64 * entry.n as f64);
        if entry.length >= bound {
            gap_hypothesis_holds = false;
        }
        gap_rows.push((entry.n, entry.length, bound));
    }

    let n_top = 2 * n0;
    let mut membership_rows = Vec::with_capacity(n_top);
    let mut membership_holds = true;
    for n in 1..=n_top {
        let family = if n % 2 == 0 {
            spec.periodic()
        } else {
            spec.antiperiodic()
        };
        let target = (n as f64 * PI) * (n as f64 * PI);
        let nearest = family
            .iter()
            .map(|e| e.lambda)
            .min_by(|a, b| {
                (a - target)
                    .abs()
                    .partial_cmp(&(b - target).abs())
                    .expect("finite eigenvalues")
            })
            .unwrap_or(f64::INFINITY);
        let defect = (nearest - target).abs();
        let within = defect < 10.0 * refinement_tol * (1.0 + target);
        if !within {
            membership_holds = false;
        }
        membership_rows.push(MembershipRow {
            n,
            target,
            nearest,
            defect,
            within_tolerance: within,
        });
    }

    let m_max = (spec.periodic().len().saturating_sub(3)) / 2;
    let m_range = 2..=m_max.max(2);
    let mean = asymptotics::recover_c0(spec, Parity::Periodic, m_range.clone())?;
    let norm = asymptotics::recover_l2norm(spec, Parity::Periodic, mean.estimate, m_range)?;

    let consistent_with_zero = if gap_hypothesis_holds && membership_holds {
        Some(mean.estimate.abs() < ZERO_MEAN_TOL && norm.estimate.abs() < ZERO_NORM_TOL)
    } else {
        None
    };

    Ok(Theorem2Report {
        n0,
        eps,
        gap_rows,
        gap_hypothesis_holds,
        membership_rows,
        membership_holds,
        recovered_mean: mean.estimate,
        recovered_norm: norm.estimate,
        consistent_with_zero,
    })
}

/// Compute the spectrum through index `~2n0` and run the inverse analysis.
pub fn theorem2_harness(
    q: &FourierPotential,
    n0: usize,
    eps: f64,
    tol: f64,
) -> Result<Theorem2Report, DecayError> {
    let spec = floquet::compute_spectrum(q, 2 * n0 + 2, tol)?;
    theorem2_analyze(&spec, n0, eps, tol)
}
