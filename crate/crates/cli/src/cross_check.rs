use std::fmt::Write as _;

use flatspin::crystal::BieberbachGroup;
use flatspin::lifting::{cocycle_oracle_decide, decide, verify_verdict, StructureKind, MAX_ORACLE_RANK};
use serde::{Deserialize, Serialize};

use crate::{CliError, Status, Target};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub presentation: String,
    pub oracle: String,
    /// Both verdicts carry evidence that replays.
    pub evidence_verified: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub source: String,
    pub holonomy_rank: usize,
    pub spin: MethodComparison,
    pub spinc: MethodComparison,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn compare(group: &BieberbachGroup, kind: StructureKind) -> Result<MethodComparison, CliError> {
    let direct = decide(group, kind)?;
    let oracle = cocycle_oracle_decide(group, kind)?;
    Ok(MethodComparison {
        presentation: direct.answer.to_string(),
        oracle: oracle.answer.to_string(),
        evidence_verified: verify_verdict(group, &direct)? && verify_verdict(group, &oracle)?,
        agree: direct.answer == oracle.answer,
    })
}

/// Decides both structures with the presentation method and the pairwise
/// cocycle oracle. Holonomy rank is limited to [`MAX_ORACLE_RANK`].
/// An input that is not a Bieberbach group yields `Err` with the diagnostic
/// and [`Status::ValidationFailed`].
pub fn cross_check(target: &Target) -> Result<(Result<CrossCheckReport, String>, Status), CliError> {
    let group = match &target.group {
        Some(g) => g.clone(),
        None => match target.file.build() {
            Ok(g) => g,
            Err(e) => return Ok((Err(e.to_string()), Status::ValidationFailed)),
        },
    };
    if let Some(w) = group.torsion_witness() {
        return Ok((Err(format!("the group has torsion, witness {w}")), Status::ValidationFailed));
    }
    let spin = compare(&group, StructureKind::Spin)?;
    let spinc = compare(&group, StructureKind::SpinC)?;
    let matches = spin.agree && spinc.agree && spin.evidence_verified && spinc.evidence_verified;
    let report = CrossCheckReport {
        source: target.source.clone(),
        holonomy_rank: group.holonomy_rank(),
        spin,
        spinc,
        matches,
    };
    let status = if matches { Status::Success } else { Status::Mismatch };
    Ok((Ok(report), status))
}

pub fn render_text(r: &CrossCheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source: {}", r.source);
    let _ = writeln!(out, "holonomy_rank: {} (oracle limit {MAX_ORACLE_RANK})", r.holonomy_rank);
    for (name, c) in [("spin", &r.spin), ("spinc", &r.spinc)] {
        let _ = writeln!(
            out,
            "{name}: presentation={} oracle={} agree={} evidence_verified={}",
            c.presentation, c.oracle, c.agree, c.evidence_verified
        );
    }
    let _ = writeln!(out, "match: {}", r.matches);
    out
}
