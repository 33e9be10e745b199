//! Batch analysis of Hantzsche–Wendt candidates.
//!
//! Work is split into batches that are analysed in parallel and emitted in
//! candidate order, so the output does not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use flatspin::catalog::{candidate_count, enumerate_specs, exhaustive_allowed, hw_from_spec, spec_from_index, EnumerationMode, HwSpec};
use flatspin::lifting::{decide_spin, decide_spinc, verify_verdict, Answer};
use flatspin::linalg::rational::format_rational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{CliError, Status};

/// Candidate indices handled by one exhaustive work item.
const CHUNK: u64 = 1 << 13;
/// Sampled candidates handled per parallel batch.
const SAMPLE_BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    /// Candidate index in exhaustive mode, draw number when sampling.
    pub index: u64,
    pub b_rows: Vec<Vec<String>>,
    pub spin: String,
    pub spinc: String,
    /// Both verdicts' witnesses or certificates replay.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mode: String,
    pub seed: Option<u64>,
    /// Translation tables examined, exhaustive mode only.
    pub candidates: Option<u64>,
    pub torsion_free: u64,
    pub spin: BTreeMap<String, u64>,
    pub spinc: BTreeMap<String, u64>,
    pub unverified: u64,
    pub note: String,
}

const OVERCOUNT_NOTE: &str = "groups are counted by their translation tables reduced mod Z^n; \
    isomorphic or affinely equivalent groups are counted separately, so these are not manifold counts";

fn analyze_spec(index: u64, spec: &HwSpec) -> Result<Record, CliError> {
    let group = hw_from_spec(spec)?;
    let spin = decide_spin(&group)?;
    let spinc = decide_spinc(&group)?;
    let verified = verify_verdict(&group, &spin)? && verify_verdict(&group, &spinc)?;
    Ok(Record {
        index,
        b_rows: spec
            .b_rows()
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect(),
        spin: spin.answer.to_string(),
        spinc: spinc.answer.to_string(),
        verified,
    })
}

fn exhaustive_chunk(n: usize, start: u64, end: u64) -> Result<Vec<Record>, CliError> {
    (start..end)
        .filter_map(|index| {
            let spec = spec_from_index(n, index).expect("index in range");
            spec.is_torsion_free().then(|| analyze_spec(index, &spec))
        })
        .collect()
}

/// Runs the enumeration, handing records to `emit` in candidate order, and
/// returns the summary. `jobs = None` uses every core.
pub fn enumerate(
    n: usize,
    mode: EnumerationMode,
    jobs: Option<usize>,
    emit: &mut dyn FnMut(&Record) -> std::io::Result<()>,
) -> Result<(Summary, Status), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    let mut summary = Summary {
        n,
        mode: String::new(),
        seed: None,
        candidates: None,
        torsion_free: 0,
        spin: BTreeMap::new(),
        spinc: BTreeMap::new(),
        unverified: 0,
        note: OVERCOUNT_NOTE.to_string(),
    };
    let mut absorb = |batch: Vec<Record>, summary: &mut Summary| -> Result<(), CliError> {
        for r in batch {
            summary.torsion_free += 1;
            *summary.spin.entry(r.spin.clone()).or_default() += 1;
            *summary.spinc.entry(r.spinc.clone()).or_default() += 1;
            summary.unverified += u64::from(!r.verified);
            emit(&r).map_err(CliError::Write)?;
        }
        Ok(())
    };
    match mode {
        EnumerationMode::Exhaustive => {
            exhaustive_allowed(n)?;
            let total = candidate_count(n)?;
            summary.mode = "exhaustive".into();
            summary.candidates = Some(total);
            let chunks: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
            let width = pool.current_num_threads().max(1) * 4;
            for group in chunks.chunks(width) {
                let results: Vec<Result<Vec<Record>, CliError>> = pool.install(|| {
                    group
                        .par_iter()
                        .map(|&start| exhaustive_chunk(n, start, (start + CHUNK).min(total)))
                        .collect()
                });
                for batch in results {
                    absorb(batch?, &mut summary)?;
                }
            }
        }
        EnumerationMode::Sample { seed, .. } => {
            summary.mode = "sample".into();
            summary.seed = Some(seed);
            let specs: Vec<_> = enumerate_specs(n, mode)?.collect();
            for batch in specs.chunks(SAMPLE_BATCH) {
                let results: Vec<Result<Record, CliError>> = pool.install(|| {
                    batch
                        .par_iter()
                        .map(|c| analyze_spec(c.index, &c.spec))
                        .collect()
                });
                let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
                absorb(records, &mut summary)?;
            }
        }
    }
    let status = if summary.unverified == 0 {
        Status::Success
    } else {
        Status::Mismatch
    };
    Ok((summary, status))
}

/// Count of records with the given answer.
pub fn answer_count(counts: &BTreeMap<String, u64>, answer: Answer) -> u64 {
    counts.get(&answer.to_string()).copied().unwrap_or(0)
}

pub fn record_text(r: &Record) -> String {
    let rows: Vec<String> = r.b_rows.iter().map(|row| format!("({})", row.join(","))).collect();
    format!(
        "{} b={} spin={} spinc={} verified={}",
        r.index,
        rows.join(""),
        r.spin,
        r.spinc,
        r.verified
    )
}

pub fn summary_text(s: &Summary) -> String {
    let counts = |m: &BTreeMap<String, u64>| {
        m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "n: {}", s.n);
    let _ = writeln!(out, "mode: {}", s.mode);
    if let Some(seed) = s.seed {
        let _ = writeln!(out, "seed: {seed}");
    }
    if let Some(c) = s.candidates {
        let _ = writeln!(out, "candidates: {c}");
    }
    let _ = writeln!(out, "torsion_free: {}", s.torsion_free);
    let _ = writeln!(out, "spin: {}", counts(&s.spin));
    let _ = writeln!(out, "spinc: {}", counts(&s.spinc));
    let _ = writeln!(out, "unverified: {}", s.unverified);
    let _ = writeln!(out, "note: {}", s.note);
    out
}
