//! Built-in potential corpus.
//!
//! A fixed family of potentials exercising every code path: the free
//! operator, constants, single cosine modes at several amplitudes, a
//! two-mode even potential, a seeded random trigonometric polynomial, and
//! grid-sampled potentials with power-law coefficient decay
//! `c_n = DECAY_SCALE · n^{-s}`.
//! Generation is deterministic given the seed: two runs with the same seed
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{write_potential_file, PotentialFile};
use crate::{emit, CliError};

/// Band limit of the power-law families.
pub const DECAY_DEGREE: usize = 48;
/// Grid size for the sampled families (power of two, > 2·DECAY_DEGREE).
pub const DECAY_GRID: usize = 256;

fn coeff_map(rows: &[(i64, f64, f64)]) -> PotentialFile {
    let mut coeffs = BTreeMap::new();
    for &(n, re, im) in rows {
        coeffs.insert(n.to_string(), [re, im]);
    }
    PotentialFile::Coeffs { coeffs }
}

/// Overall amplitude of the power-law families: `c_n = DECAY_SCALE · n^{-s}`.
/// Kept well below 1 so every spectral gap stays in the first-order regime
/// (`l_n ≈ 2|c_n|`): at unit scale the second-order contribution to gap 2
/// from `c_1` is `c_1²/(2π²) ≈ 0.05`, which for `s = 4` is 40% of `c_2` and
/// pushes the gap/coefficient ratio far from 1.
pub const DECAY_SCALE: f64 = 0.25;

/// `q(x) = Σ_{n=1}^{M} 2 · DECAY_SCALE · n^{-s} cos(2πnx)` sampled on the
/// standard grid.
fn power_law_samples(s: f64) -> PotentialFile {
    let mut samples = Vec::with_capacity(DECAY_GRID);
    for j in 0..DECAY_GRID {
        let x = j as f64 / DECAY_GRID as f64;
        let mut acc = 0.0;
        for n in 1..=DECAY_DEGREE {
            acc += 2.0 * DECAY_SCALE * (n as f64).powf(-s) * (TAU * n as f64 * x).cos();
        }
        samples.push(acc);
    }
    PotentialFile::Samples { samples }
}

/// Random trigonometric polynomial with zero mean: modes `1..=4` with
/// moduli in `[0.15, 0.45]` and uniform phases, conjugate-completed.
fn random_trig(seed: u64) -> PotentialFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for n in 1..=4i64 {
        let r: f64 = rng.gen_range(0.15..0.45);
        let theta: f64 = rng.gen_range(0.0..TAU);
        let (im, re) = theta.sin_cos();
        rows.push((n, r * re, r * im));
        rows.push((-n, r * re, -(r * im)));
    }
    coeff_map(&rows)
}

/// One corpus entry: file name plus its content description.
pub struct CorpusEntry {
    pub name: &'static str,
    pub file: PotentialFile,
}

/// The full corpus for a given seed, in emission order.
pub fn corpus_entries(seed: u64) -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "zero.cfg",
            file: coeff_map(&[(0, 0.0, 0.0)]),
        },
        CorpusEntry {
            name: "const5.cfg",
            file: coeff_map(&[(0, 5.0, 0.0)]),
        },
        CorpusEntry {
            name: "cos1_a0.5.cfg",
            file: coeff_map(&[(-1, 0.5, 0.0), (1, 0.5, 0.0)]),
        },
        CorpusEntry {
            name: "cos1_a1.cfg",
            file: coeff_map(&[(-1, 1.0, 0.0), (1, 1.0, 0.0)]),
        },
        CorpusEntry {
            name: "cos1_a2.cfg",
            file: coeff_map(&[(-1, 2.0, 0.0), (1, 2.0, 0.0)]),
        },
        CorpusEntry {
            name: "mathieu_plus.cfg",
            file: coeff_map(&[
                (-2, 0.25, 0.0),
                (-1, 1.0, 0.0),
                (1, 1.0, 0.0),
                (2, 0.25, 0.0),
            ]),
        },
        CorpusEntry {
            name: "trig4.cfg",
            file: random_trig(seed),
        },
        CorpusEntry {
            name: "decay_s2.5.cfg",
            file: power_law_samples(2.5),
        },
        CorpusEntry {
            name: "decay_s3.cfg",
            file: power_law_samples(3.0),
        },
        CorpusEntry {
            name: "decay_s4.cfg",
            file: power_law_samples(4.0),
        },
    ]
}

/// Write the corpus plus a manifest into `out_dir`; returns the files in
/// emission order (manifest last).
pub fn write_corpus(
    out_dir: &Path,
    seed: u64,
    config_hash: &str,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let entries = corpus_entries(seed);
    let mut files = Vec::with_capacity(entries.len() + 1);
    let mut manifest_rows = Vec::with_capacity(entries.len());
    for entry in &entries {
        let path = out_dir.join(entry.name);
        write_potential_file(&path, &entry.file)?;
        let built = entry.file.build(&path)?;
        manifest_rows.push(json!({
            "name": entry.name,
            "kind": entry.file.kind(),
            "degree": built.degree(),
        }));
        files.push(path);
    }
    let manifest = json!({
        "provenance": emit::provenance(config_hash),
        "seed": seed,
        "files": manifest_rows,
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    files.push(emit::write_file(out_dir, "manifest.json", &text)?);
    Ok(files)
}
