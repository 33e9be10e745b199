use std::collections::BTreeMap;
use std::time::Instant;

use flatspin::crystal::{betti_profile, h1_elementary_divisors, holonomy_characters, BieberbachGroup};
use flatspin::lifting::{decide, StructureKind};

use crate::group_file::GroupFile;
use crate::report::{verdict_to_json, CharacterJson, Check, H1Json, Invariants, Report, Validation, Verdicts, REPORT_VERSION};
use crate::{CliError, Status, Target};

fn timed<T>(timing: &mut BTreeMap<String, f64>, key: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timing.insert(key.to_string(), start.elapsed().as_secs_f64() * 1e3);
    out
}

/// Runs `checks` on the target. Torsion-freeness is always checked, since
/// the remaining analyses assume a Bieberbach group; a group with torsion
/// yields a report carrying the witness and [`Status::ValidationFailed`].
pub fn analyze(target: &Target, checks: &[Check]) -> Result<(Report, Status), CliError> {
    let mut checks: Vec<Check> = checks.to_vec();
    checks.sort();
    checks.dedup();
    let mut report = Report {
        version: REPORT_VERSION,
        source: target.source.clone(),
        labels: target.labels.clone(),
        group: target.file.clone(),
        checks: checks.clone(),
        validation: Validation::default(),
        invariants: Invariants::default(),
        verdicts: Verdicts::default(),
        notes: Vec::new(),
        timing_ms: BTreeMap::new(),
    };
    let built = match &target.group {
        Some(g) => Ok(g.clone()),
        None => timed(&mut report.timing_ms, "build", || target.file.build()),
    };
    let group = match built {
        Ok(g) => g,
        Err(e) => {
            report.validation.error = Some(e.to_string());
            return Ok((report, Status::ValidationFailed));
        }
    };
    report.validation.valid = true;
    let witness = timed(&mut report.timing_ms, "torsion", || group.torsion_witness());
    report.validation.torsion_free = Some(witness.is_none());
    report.validation.orientable = Some(group.is_orientable());
    report.validation.holonomy_order = Some(group.holonomy_order().to_string());
    report.validation.is_hw = Some(group.is_hw());
    if let Some(w) = witness {
        report.validation.torsion_witness = GroupFile::from_elements(group.dim(), &[w]).generators.pop();
        report.notes.push("the group has torsion; no further analyses were run".into());
        return Ok((report, Status::ValidationFailed));
    }
    run_checks(&group, &checks, &mut report)?;
    Ok((report, Status::Success))
}

fn run_checks(group: &BieberbachGroup, checks: &[Check], report: &mut Report) -> Result<(), CliError> {
    for &check in checks {
        let timing = &mut report.timing_ms;
        match check {
            Check::Torsion => {}
            Check::Betti => {
                report.invariants.betti = Some(timed(timing, "betti", || betti_profile(group)));
            }
            Check::H1 => {
                let h = timed(timing, "h1", || h1_elementary_divisors(group));
                report.invariants.h1 = Some(H1Json {
                    torsion: h.torsion.iter().map(ToString::to_string).collect(),
                    free_rank: h.free_rank,
                });
            }
            Check::Characters => {
                let chars = timed(timing, "characters", || holonomy_characters(group));
                report.invariants.characters = Some(
                    chars
                        .into_iter()
                        .map(|c| CharacterJson {
                            coordinate: c.coordinate + 1,
                            generator_values: c.generator_values,
                            homomorphism: c.is_homomorphism,
                        })
                        .collect(),
                );
            }
            Check::Spin | Check::Spinc => {
                let kind = if check == Check::Spin {
                    StructureKind::Spin
                } else {
                    StructureKind::SpinC
                };
                if !group.is_orientable() {
                    report
                        .notes
                        .push(format!("{kind}: not applicable, the group is not orientable"));
                    continue;
                }
                let v = timed(timing, check.name(), || decide(group, kind))?;
                let json = Some(verdict_to_json(&v));
                match kind {
                    StructureKind::Spin => report.verdicts.spin = json,
                    StructureKind::SpinC => report.verdicts.spinc = json,
                }
            }
        }
    }
    Ok(())
}

