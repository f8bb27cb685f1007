//! Potential file schema, run configuration, and provenance hashing.
//!
//! A potential file is JSON with a `kind` tag:
//!
//! ```json
//! { "kind": "coeffs", "coeffs": { "0": [3.0, 0.0], "1": [1.0, 0.0], "-1": [1.0, 0.0] } }
//! { "kind": "samples", "samples": [ 2.0, 1.84, ... ] }
//! ```
//!
//! `coeffs` keys are mode numbers `n` (as JSON object keys, hence strings)
//! mapping to `[re, im]` of `c_n = ∫₀¹ q e^{-i2πnx} dx`; real potentials
//! need `c_{-n} = conj(c_n)`. `samples` is `q` on a power-of-two equispaced
//! grid `q(j/N)`.
//!
//! The run configuration is canonicalized (potential content, not path) and
//! hashed; the hash ties every output file to the exact inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hill_core::potential::FourierPotential;
use hill_core::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// On-disk potential description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialFile {
    Coeffs { coeffs: BTreeMap<String, [f64; 2]> },
    Samples { samples: Vec<f64> },
}

impl PotentialFile {
    pub fn kind(&self) -> &'static str {
        match self {
            PotentialFile::Coeffs { .. } => "coeffs",
            PotentialFile::Samples { .. } => "samples",
        }
    }

    /// Build the trigonometric-polynomial form this file describes.
    pub fn build(&self, path: &Path) -> Result<FourierPotential, CliError> {
        match self {
            PotentialFile::Coeffs { coeffs } => {
                let mut modes = Vec::with_capacity(coeffs.len());
                for (key, &[re, im]) in coeffs {
                    let n: i64 = key.parse().map_err(|_| CliError::Schema {
                        path: path.to_path_buf(),
                        detail: format!("mode key {key:?} is not an integer"),
                    })?;
                    modes.push((n, Complex64::new(re, im)));
                }
                Ok(FourierPotential::from_modes(&modes)?)
            }
            PotentialFile::Samples { samples } => Ok(FourierPotential::ingest_grid(samples)?),
        }
    }
}

/// Read and parse a potential file, returning both the built potential and
/// the parsed file (for provenance).
pub fn load_potential(path: &Path) -> Result<(FourierPotential, PotentialFile), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadPotential {
        path: path.to_path_buf(),
        source,
    })?;
    let file: PotentialFile =
        serde_json::from_str(&text).map_err(|e| CliError::Schema {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
    let q = file.build(path)?;
    Ok((q, file))
}

/// Canonical content of a potential: sorted `(n, re, im)` rows. Two files
/// describing the same potential hash identically regardless of path or
/// on-disk encoding.
pub fn canonical_modes(q: &FourierPotential) -> Vec<(i64, f64, f64)> {
    let mut rows: Vec<(i64, f64, f64)> = q
        .modes()
        .filter(|(_, c)| c.norm() != 0.0)
        .map(|(n, c)| (n, c.re, c.im))
        .collect();
    rows.sort_by_key(|r| r.0);
    rows
}

/// Everything that determines a run's numeric output. Serialized (losslessly
/// round-trippable) and hashed for provenance; fields irrelevant to a given
/// subcommand stay `None` so distinct subcommands hash differently only
/// through fields they actually use.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<(i64, f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_owned(),
            ..Default::default()
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Cheap upfront checks so no file is touched on bad input.
pub fn require(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg.to_owned()))
    }
}

/// Write a potential file in the canonical on-disk encoding (pretty JSON,
/// trailing newline). Used by the corpus generator and available to tests.
pub fn write_potential_file(path: &PathBuf, file: &PotentialFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(file).expect("potential file serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_losslessly() {
        let cfg = RunConfig {
            command: "spectrum".into(),
            potential: Some(vec![(-1, 1.0, 0.5), (0, 3.0, 0.0), (1, 1.0, -0.5)]),
            parity: Some("periodic".into()),
            count: Some(20),
            tol: Some(1e-9),
            ..Default::default()
        };
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = RunConfig {
            command: "spectrum".into(),
            count: Some(5),
            ..Default::default()
        };
        let b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
        let c = RunConfig {
            count: Some(6),
            ..a.clone()
        };
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn coeffs_file_builds_expected_potential() {
        let file = PotentialFile::Coeffs {
            coeffs: BTreeMap::from([
                ("0".into(), [3.0, 0.0]),
                ("1".into(), [1.0, 0.0]),
                ("-1".into(), [1.0, 0.0]),
            ]),
        };
        let q = file.build(Path::new("inline")).unwrap();
        assert_eq!(q.degree(), 1);
        assert!((q.mean() - 3.0).abs() < 1e-15);
        assert!((q.evaluate(0.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn bad_mode_key_is_a_schema_error() {
        let file = PotentialFile::Coeffs {
            coeffs: BTreeMap::from([("one".into(), [1.0, 0.0])]),
        };
        assert!(matches!(
            file.build(Path::new("inline")),
            Err(CliError::Schema { .. })
        ));
    }
}
