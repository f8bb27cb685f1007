//! Deterministic CSV and JSON emission.
//!
//! Floats print through Rust's shortest round-trip formatting, so identical
//! numbers give identical bytes; no timestamps or other ambient state enter
//! any output. Every file's first line cites the config hash.

use std::path::{Path, PathBuf};

use hill_core::asymptotics::ReportRow;
use hill_core::decay::{DecayClass, Theorem1Report, Theorem2Report};
use hill_core::floquet::{GapTable, PairLabel, SpectrumTable};
use hill_core::potential::FourierPotential;
use hill_core::Parity;
use serde_json::json;

use crate::CliError;

pub fn hillspec_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Leading comment line carried by every CSV output.
pub fn csv_header(config_hash: &str) -> String {
    format!(
        "# config {config_hash} hillspec {} hill-core {}\n",
        hillspec_version(),
        hill_core::VERSION
    )
}

/// Provenance object embedded in every JSON output.
pub fn provenance(config_hash: &str) -> serde_json::Value {
    json!({
        "config": config_hash,
        "hillspec": hillspec_version(),
        "hill_core": hill_core::VERSION,
    })
}

fn label_text(label: &PairLabel) -> String {
    match label {
        PairLabel::Ground => "ground".to_owned(),
        PairLabel::Member { m, j } => format!("pair{m}.{j}"),
    }
}

/// `kind,index,label,lambda,residual` rows, periodic family first; `only`
/// restricts the output to one family.
pub fn spectrum_csv(table: &SpectrumTable, config_hash: &str, only: Option<Parity>) -> String {
    let mut out = csv_header(config_hash);
    out.push_str("kind,index,label,lambda,residual\n");
    for (kind, parity) in [
        ("periodic", Parity::Periodic),
        ("antiperiodic", Parity::Antiperiodic),
    ] {
        if only.is_some_and(|p| p != parity) {
            continue;
        }
        for (i, entry) in table.family(parity).iter().enumerate() {
            out.push_str(&format!(
                "{kind},{i},{},{},{:e}\n",
                label_text(&entry.label),
                entry.lambda,
                entry.residual
            ));
        }
    }
    out
}

/// `n,left,right,length` rows.
pub fn gaps_csv(gaps: &GapTable, config_hash: &str) -> String {
    let mut out = csv_header(config_hash);
    out.push_str("n,left,right,length\n");
    for e in gaps.entries() {
        out.push_str(&format!("{},{},{},{}\n", e.n, e.left, e.right, e.length));
    }
    out
}

/// `n,re,im,modulus` rows for `n = 0 ..= degree`.
pub fn coeffs_csv(q: &FourierPotential, config_hash: &str) -> String {
    let mut out = csv_header(config_hash);
    out.push_str("n,re,im,modulus\n");
    for n in 0..=q.degree() as i64 {
        let c = q.coefficient(n);
        out.push_str(&format!("{n},{},{},{}\n", c.re, c.im, c.norm()));
    }
    out
}

/// Asymptotic comparison rows.
pub fn asym_csv(rows: &[ReportRow], config_hash: &str) -> String {
    let mut out = csv_header(config_hash);
    out.push_str(
        "m,lambda1,lambda2,center_pred,split_pred,gap_meas,resid_center,resid_gap,m2_resid_center,budget\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:e},{:e},{:e},{:e}\n",
            r.m,
            r.lambda1,
            r.lambda2,
            r.center_pred,
            r.split_pred,
            r.gap_meas,
            r.resid_center,
            r.resid_gap,
            r.m2_resid_center,
            r.budget
        ));
    }
    out
}

pub fn class_text(class: DecayClass) -> &'static str {
    match class {
        DecayClass::SmallO => "small_o",
        DecayClass::BigOOnly => "big_o_only",
        DecayClass::NotBigO => "not_big_o",
    }
}

fn block_table_json(verdict: &hill_core::decay::DecayVerdict) -> serde_json::Value {
    json!({
        "class": class_text(verdict.classification),
        "tail_statistic": verdict.tail_statistic,
        "blocks": verdict
            .block_table
            .iter()
            .map(|&(start, max)| json!({"block_start": start, "max": max}))
            .collect::<Vec<_>>(),
        "thresholds": {
            "rho": verdict.thresholds.rho,
            "tau_abs": verdict.thresholds.tau_abs,
            "gamma": verdict.thresholds.gamma,
        },
    })
}

/// Verdict document for the forward (gap decay ⇒ coefficient decay) harness.
pub fn thm1_verdict_json(report: &Theorem1Report, config_hash: &str) -> String {
    let pass = report.implication_holds && report.cross_checks_pass();
    let doc = json!({
        "provenance": provenance(config_hash),
        "harness": "gap-decay-implies-coefficient-decay",
        "n_max": report.n_max,
        "gaps": block_table_json(&report.gap_verdict),
        "coefficients": block_table_json(&report.coefficient_verdict),
        "implication": if report.implication_holds { "holds" } else { "violated" },
        "ratio_rows": report
            .ratio_rows
            .iter()
            .map(|r| json!({"n": r.n, "gap": r.gap, "two_cn": r.two_cn, "ratio": r.ratio}))
            .collect::<Vec<_>>(),
        "cross_checks": report
            .cross_checks
            .iter()
            .map(|c| json!({
                "n": c.n,
                "matrix": c.matrix_length,
                "shooting": c.shooting_length,
                "allowance": c.allowance,
                "pass": c.within_allowance(),
            }))
            .collect::<Vec<_>>(),
        "pass": pass,
    });
    pretty(doc)
}

/// Verdict document for the inverse (smallness ⇒ zero potential) harness.
pub fn thm2_verdict_json(report: &Theorem2Report, config_hash: &str) -> String {
    let conclusion = match report.consistent_with_zero {
        Some(true) => "consistent with q = 0",
        Some(false) => "hypotheses hold but recovered potential is nonzero",
        None => "hypotheses not satisfied; no conclusion",
    };
    let doc = json!({
        "provenance": provenance(config_hash),
        "harness": "spectral-smallness-implies-zero-potential",
        "n0": report.n0,
        "eps": report.eps,
        "gap_hypothesis": report.gap_hypothesis_holds,
        "gap_rows": report
            .gap_rows
            .iter()
            .map(|&(n, l, bound)| json!({"n": n, "length": l, "bound": bound}))
            .collect::<Vec<_>>(),
        "membership": report.membership_holds,
        "membership_rows": report
            .membership_rows
            .iter()
            .map(|r| json!({
                "n": r.n,
                "target": r.target,
                "nearest": r.nearest,
                "defect": r.defect,
                "pass": r.within_tolerance,
            }))
            .collect::<Vec<_>>(),
        "recovered_mean": report.recovered_mean,
        "recovered_norm": report.recovered_norm,
        "conclusion": conclusion,
        "pass": report.consistent_with_zero == Some(true),
    });
    pretty(doc)
}

fn pretty(doc: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&doc).expect("verdict serializes");
    text.push('\n');
    text
}

/// Write one output file, reporting the path on failure.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| CliError::Write {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    std::fs::write(&path, contents).map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
