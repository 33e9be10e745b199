//! Replays a JSON report against the group it echoes.

use std::fmt::Write as _;

use flatspin::crystal::{betti_profile, h1_elementary_divisors, holonomy_characters, BieberbachGroup};
use flatspin::lifting::{verify_verdict, StructureKind};
use serde::Serialize;

use crate::report::{Report, REPORT_VERSION};
use crate::{CliError, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub item: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub source: String,
    pub items: Vec<ItemResult>,
    pub ok: bool,
}

struct Items(Vec<ItemResult>);

impl Items {
    fn push(&mut self, item: &str, ok: bool, detail: Option<String>) {
        self.0.push(ItemResult {
            item: item.to_string(),
            ok,
            detail: if ok { None } else { detail },
        });
    }

    fn compare<T: PartialEq + std::fmt::Debug>(&mut self, item: &str, claimed: Option<&T>, actual: impl FnOnce() -> T) {
        if let Some(claimed) = claimed {
            let actual = actual();
            let ok = *claimed == actual;
            self.push(item, ok, Some(format!("report says {claimed:?}, recomputed {actual:?}")));
        }
    }
}

pub fn parse_report(text: &str) -> Result<Report, CliError> {
    let report: Report = serde_json::from_str(text)?;
    if report.version != REPORT_VERSION {
        return Err(CliError::InvalidReport(format!(
            "report version {} is not supported (expected {REPORT_VERSION})",
            report.version
        )));
    }
    Ok(report)
}

/// Rebuilds the group and re-checks every fact the report states:
/// validation flags, invariants, and each verdict's witness or certificate.
pub fn verify_report(report: &Report) -> Result<(VerifyReport, Status), CliError> {
    let mut items = Items(Vec::new());
    let built = report.group.build();
    items.push("group builds", built.is_ok() == report.validation.valid, built.as_ref().err().map(|e| e.to_string()));
    if let Ok(group) = built {
        check_group(&group, report, &mut items)?;
    }
    let ok = items.0.iter().all(|i| i.ok);
    let status = if ok { Status::Success } else { Status::Mismatch };
    Ok((
        VerifyReport {
            source: report.source.clone(),
            items: items.0,
            ok,
        },
        status,
    ))
}

fn check_group(group: &BieberbachGroup, report: &Report, items: &mut Items) -> Result<(), CliError> {
    let v = &report.validation;
    items.compare("torsion_free", v.torsion_free.as_ref(), || group.is_torsion_free());
    items.compare("orientable", v.orientable.as_ref(), || group.is_orientable());
    items.compare("is_hw", v.is_hw.as_ref(), || group.is_hw());
    items.compare("holonomy_order", v.holonomy_order.as_ref(), || group.holonomy_order().to_string());
    if let Some(entry) = &v.torsion_witness {
        let file = crate::group_file::GroupFile {
            dimension: report.group.dimension,
            generators: vec![entry.clone()],
        };
        let ok = match file.elements() {
            Ok(w) => {
                let w = &w[0];
                !w.is_identity() && (w * w).is_identity() && group.normal_form(w).is_some()
            }
            Err(_) => false,
        };
        items.push("torsion_witness", ok, Some("not an element of order two in the group".into()));
    }
    let inv = &report.invariants;
    items.compare("betti", inv.betti.as_ref(), || betti_profile(group));
    if let Some(h) = &inv.h1 {
        let actual = h1_elementary_divisors(group);
        let torsion: Vec<String> = actual.torsion.iter().map(ToString::to_string).collect();
        items.compare("h1", Some(&(h.torsion.clone(), h.free_rank)), || (torsion, actual.free_rank));
    }
    if let Some(chars) = &inv.characters {
        let actual: Vec<(usize, Vec<i64>, bool)> = holonomy_characters(group)
            .into_iter()
            .map(|c| (c.coordinate + 1, c.generator_values, c.is_homomorphism))
            .collect();
        let claimed: Vec<(usize, Vec<i64>, bool)> = chars
            .iter()
            .map(|c| (c.coordinate, c.generator_values.clone(), c.homomorphism))
            .collect();
        items.compare("characters", Some(&claimed), || actual);
    }
    for kind in [StructureKind::Spin, StructureKind::SpinC] {
        if let Some(json) = report.verdicts.get(kind) {
            let verdict = crate::report::verdict_from_json(kind, json)?;
            let (ok, detail) = match verify_verdict(group, &verdict) {
                Ok(ok) => (ok, "the witness or certificate does not replay".to_string()),
                Err(e) => (false, e.to_string()),
            };
            items.push(&format!("{kind} {}", verdict.answer), ok, Some(detail));
        }
    }
    Ok(())
}

pub fn render_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source: {}", r.source);
    for i in &r.items {
        let _ = write!(out, "{}: {}", i.item, if i.ok { "ok" } else { "FAILED" });
        if let Some(d) = &i.detail {
            let _ = write!(out, " ({d})");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "verified: {}", r.ok);
    out
}
