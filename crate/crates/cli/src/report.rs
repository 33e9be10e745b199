//! Analysis reports: the JSON document and its text rendering.
//!
//! Exact quantities (rationals, big integers) are strings; everything the
//! text rendering shows is taken from the same [`Report`] value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use flatspin::lifting::{Answer, Obstruction, RelationName, StructureKind, StructureVerdict, Witness};
use flatspin::linalg::rational::format_rational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::group_file::{ExactRational, GeneratorEntry, GroupFile};
use crate::CliError;

pub const REPORT_VERSION: u32 = 1;

/// An analysis that `analyze` can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Torsion,
    Betti,
    H1,
    Characters,
    Spin,
    Spinc,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Torsion, Check::Betti, Check::H1, Check::Characters, Check::Spin, Check::Spinc];

    pub fn name(self) -> &'static str {
        match self {
            Check::Spin => "spin",
            Check::Spinc => "spinc",
            Check::Betti => "betti",
            Check::H1 => "h1",
            Check::Torsion => "torsion",
            Check::Characters => "characters",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub version: u32,
    pub source: String,
    pub labels: Vec<String>,
    pub group: GroupFile,
    pub checks: Vec<Check>,
    pub validation: Validation,
    pub invariants: Invariants,
    pub verdicts: Verdicts,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per analysis.
    pub timing_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Validation {
    /// The generators define a crystallographic group with lattice ℤⁿ.
    pub valid: bool,
    pub error: Option<String>,
    pub torsion_free: Option<bool>,
    /// An element of order two, present when `torsion_free` is false.
    pub torsion_witness: Option<GeneratorEntry>,
    pub orientable: Option<bool>,
    pub holonomy_order: Option<String>,
    pub is_hw: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Invariants {
    pub betti: Option<Vec<u64>>,
    pub h1: Option<H1Json>,
    pub characters: Option<Vec<CharacterJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H1Json {
    pub torsion: Vec<String>,
    pub free_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    /// 1-based.
    pub coordinate: usize,
    pub generator_values: Vec<i64>,
    pub homomorphism: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdicts {
    pub spin: Option<VerdictJson>,
    pub spinc: Option<VerdictJson>,
}

impl Verdicts {
    pub fn get(&self, kind: StructureKind) -> Option<&VerdictJson> {
        match kind {
            StructureKind::Spin => self.spin.as_ref(),
            StructureKind::SpinC => self.spinc.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictJson {
    /// `YES`, `NO` or `NO_LIFT_INCONCLUSIVE`.
    pub answer: String,
    pub witness: Option<WitnessJson>,
    pub obstruction: Option<ObstructionJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessJson {
    /// Generator and lattice signs as bits: `1` means `−1`.
    Spin { sigma: Vec<u8>, chi: Vec<u8> },
    /// Circle angles in `[0, 1)`.
    SpinC { z: Vec<ExactRational>, zeta: Vec<ExactRational> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionJson {
    pub terms: Vec<TermJson>,
    /// Sum of the coefficients times the right-hand sides, mod 1.
    pub parity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub relation: String,
    pub coefficient: String,
}

pub fn verdict_to_json(v: &StructureVerdict) -> VerdictJson {
    let bits = |v: &[bool]| v.iter().map(|&b| u8::from(b)).collect();
    let angles = |v: &[flatspin::linalg::rational::Rational]| v.iter().cloned().map(ExactRational).collect();
    VerdictJson {
        answer: v.answer.to_string(),
        witness: v.witness.as_ref().map(|w| match w {
            Witness::Spin { sigma, chi } => WitnessJson::Spin {
                sigma: bits(sigma),
                chi: bits(chi),
            },
            Witness::SpinC { z, zeta } => WitnessJson::SpinC {
                z: angles(z),
                zeta: angles(zeta),
            },
        }),
        obstruction: v.obstruction.as_ref().map(|o| ObstructionJson {
            terms: o
                .terms
                .iter()
                .map(|(name, c)| TermJson {
                    relation: name.to_string(),
                    coefficient: c.to_string(),
                })
                .collect(),
            parity: format_rational(&o.pairing),
        }),
    }
}

pub fn verdict_from_json(kind: StructureKind, v: &VerdictJson) -> Result<StructureVerdict, CliError> {
    let invalid = |msg: String| CliError::InvalidReport(format!("{kind} verdict: {msg}"));
    let answer: Answer = v.answer.parse().map_err(invalid)?;
    let bits = |v: &[u8]| -> Result<Vec<bool>, CliError> {
        v.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(invalid(format!("sign bit {b} is not 0 or 1"))),
            })
            .collect()
    };
    let witness = match &v.witness {
        None => None,
        Some(WitnessJson::Spin { sigma, chi }) => Some(Witness::Spin {
            sigma: bits(sigma)?,
            chi: bits(chi)?,
        }),
        Some(WitnessJson::SpinC { z, zeta }) => Some(Witness::SpinC {
            z: z.iter().map(|q| q.0.clone()).collect(),
            zeta: zeta.iter().map(|q| q.0.clone()).collect(),
        }),
    };
    let obstruction = match &v.obstruction {
        None => None,
        Some(o) => {
            let terms = o
                .terms
                .iter()
                .map(|t| {
                    let name: RelationName = t.relation.parse().map_err(invalid)?;
                    let coeff: BigInt = t
                        .coefficient
                        .parse()
                        .map_err(|_| invalid(format!("bad coefficient {:?}", t.coefficient)))?;
                    Ok((name, coeff))
                })
                .collect::<Result<_, CliError>>()?;
            let pairing = flatspin::linalg::rational::parse_rational(&o.parity)
                .map_err(|e| invalid(format!("bad parity: {e}")))?;
            Some(Obstruction { terms, pairing })
        }
    };
    Ok(StructureVerdict {
        kind,
        answer,
        witness,
        obstruction,
    })
}

fn element_text(e: &GeneratorEntry) -> String {
    let signs: Vec<String> = e.signs.iter().map(|s| s.0.to_string()).collect();
    let t: Vec<String> = e.translation.iter().map(|q| format_rational(&q.0)).collect();
    format!("([{}], ({}))", signs.join(","), t.join(","))
}

fn verdict_text(out: &mut String, name: &str, v: &VerdictJson) {
    let _ = writeln!(out, "{name}: {}", v.answer);
    match &v.witness {
        Some(WitnessJson::Spin { sigma, chi }) => {
            let j = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "  witness sigma: {}", j(sigma));
            let _ = writeln!(out, "  witness chi: {}", j(chi));
        }
        Some(WitnessJson::SpinC { z, zeta }) => {
            let j = |v: &[ExactRational]| v.iter().map(|q| format_rational(&q.0)).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "  witness z: {}", j(z));
            let _ = writeln!(out, "  witness zeta: {}", j(zeta));
        }
        None => {}
    }
    if let Some(o) = &v.obstruction {
        let _ = writeln!(out, "  obstruction parity: {}", o.parity);
        for t in &o.terms {
            let _ = writeln!(out, "    {} * {}", t.coefficient, t.relation);
        }
    }
}

/// Plain-text rendering, one `key: value` fact per line.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source: {}", r.source);
    if !r.labels.is_empty() {
        let _ = writeln!(out, "labels: {}", r.labels.join(", "));
    }
    let _ = writeln!(out, "dimension: {}", r.group.dimension);
    let _ = writeln!(out, "generators: {}", r.group.generators.len());
    for (i, g) in r.group.generators.iter().enumerate() {
        let _ = writeln!(out, "  g{} = {}", i + 1, element_text(g));
    }
    let checks: Vec<&str> = r.checks.iter().map(|c| c.name()).collect();
    let _ = writeln!(out, "checks: {}", checks.join(","));
    let v = &r.validation;
    let _ = writeln!(out, "valid: {}", v.valid);
    if let Some(e) = &v.error {
        let _ = writeln!(out, "error: {e}");
    }
    let opt = |out: &mut String, key: &str, value: Option<String>| {
        if let Some(value) = value {
            let _ = writeln!(out, "{key}: {value}");
        }
    };
    opt(&mut out, "torsion_free", v.torsion_free.map(|b| b.to_string()));
    opt(&mut out, "torsion_witness", v.torsion_witness.as_ref().map(element_text));
    opt(&mut out, "orientable", v.orientable.map(|b| b.to_string()));
    opt(&mut out, "holonomy_order", v.holonomy_order.clone());
    opt(&mut out, "is_hw", v.is_hw.map(|b| b.to_string()));
    let inv = &r.invariants;
    opt(
        &mut out,
        "betti",
        inv.betti
            .as_ref()
            .map(|b| b.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
    );
    if let Some(h) = &inv.h1 {
        let _ = writeln!(out, "h1_torsion: {}", h.torsion.join(" "));
        let _ = writeln!(out, "h1_free_rank: {}", h.free_rank);
    }
    if let Some(chars) = &inv.characters {
        let _ = writeln!(out, "characters: {}", chars.len());
        for c in chars {
            let values: Vec<String> = c.generator_values.iter().map(i64::to_string).collect();
            let _ = writeln!(
                out,
                "  x{}: [{}] homomorphism={}",
                c.coordinate,
                values.join(","),
                c.homomorphism
            );
        }
    }
    if let Some(s) = &r.verdicts.spin {
        verdict_text(&mut out, "spin", s);
    }
    if let Some(s) = &r.verdicts.spinc {
        verdict_text(&mut out, "spinc", s);
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    for (k, ms) in &r.timing_ms {
        let _ = writeln!(out, "time {k}: {ms:.3} ms");
    }
    out
}

/// Reads the top-level `key: value` lines back from a text report.
pub fn text_facts(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter(|l| !l.starts_with(' '))
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
