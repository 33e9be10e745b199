//! The JSON input format for groups.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "generators": [
//!     {"signs": [1, -1, -1], "translation": ["1/2", "1/2", "0"]},
//!     {"signs": [-1, 1, -1], "translation": ["0", "1/2", "1/2"]}
//!   ]
//! }
//! ```
//!
//! Every generator is `(diag(signs), translation)`. Rationals are strings in
//! lowest terms (`"0"`, `"-1/2"`, `"3"`). Unknown fields are rejected.

use std::fmt::{self, Write as _};

use flatspin::crystal::{build_group, AffineElement, BieberbachGroup, CrystalError};
use flatspin::linalg::rational::{format_rational, parse_rational, Rational};
use flatspin::signs::SignVector;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupFileError {
    /// Syntax and type errors, with the line and column reported by the parser.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("generator {}: {field} has {found} entries, but the dimension is {dim}", .index + 1)]
    Length {
        index: usize,
        field: &'static str,
        found: usize,
        dim: usize,
    },
    #[error("dimension must be between 1 and 63, found {0}")]
    Dimension(usize),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

/// A diagonal entry, `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sign(pub i64);

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        if v == 1 || v == -1 {
            Ok(Sign(v))
        } else {
            Err(de::Error::custom(format_args!(
                "sign entries must be 1 or -1 (diagonal holonomy only), found {v}"
            )))
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.0)
    }
}

/// An exact rational written as `"p/q"` or `"p"`, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational(pub Rational);

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let q = parse_rational(&s).map_err(|e| de::Error::custom(format_args!("bad rational {s:?}: {e}")))?;
        let canonical = format_rational(&q);
        if canonical != s {
            return Err(de::Error::custom(format_args!(
                "rational {s:?} is not in lowest terms; write {canonical:?}"
            )));
        }
        Ok(ExactRational(q))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub signs: Vec<Sign>,
    pub translation: Vec<ExactRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub dimension: usize,
    pub generators: Vec<GeneratorEntry>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, GroupFileError> {
        let file: GroupFile = serde_json::from_str(text)?;
        file.check_shape()?;
        Ok(file)
    }

    fn check_shape(&self) -> Result<(), GroupFileError> {
        let dim = self.dimension;
        if dim == 0 || dim > flatspin::signs::MAX_DIM {
            return Err(GroupFileError::Dimension(dim));
        }
        for (index, g) in self.generators.iter().enumerate() {
            for (field, found) in [("signs", g.signs.len()), ("translation", g.translation.len())] {
                if found != dim {
                    return Err(GroupFileError::Length { index, field, found, dim });
                }
            }
        }
        Ok(())
    }

    pub fn from_elements(dimension: usize, generators: &[AffineElement]) -> Self {
        GroupFile {
            dimension,
            generators: generators
                .iter()
                .map(|g| GeneratorEntry {
                    signs: g.rotation().to_signs().into_iter().map(Sign).collect(),
                    translation: g.translation().iter().cloned().map(ExactRational).collect(),
                })
                .collect(),
        }
    }

    pub fn from_group(g: &BieberbachGroup) -> Self {
        Self::from_elements(g.dim(), g.generators())
    }

    pub fn elements(&self) -> Result<Vec<AffineElement>, GroupFileError> {
        self.check_shape()?;
        self.generators
            .iter()
            .map(|g| {
                let signs: Vec<i64> = g.signs.iter().map(|s| s.0).collect();
                let rotation = SignVector::from_signs(&signs).map_err(CrystalError::from)?;
                let translation = g.translation.iter().map(|q| q.0.clone()).collect();
                Ok(AffineElement::new(rotation, translation)?)
            })
            .collect()
    }

    /// Builds the group; consistency failures surface as [`CrystalError`].
    /// Torsion is not checked here.
    pub fn build(&self) -> Result<BieberbachGroup, GroupFileError> {
        Ok(build_group(self.dimension, self.elements()?)?)
    }

    /// The canonical text: one generator per line, trailing newline.
    /// Parsing a canonical file and writing it back is byte-identical.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GroupFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{{")?;
        writeln!(f, "  \"dimension\": {},", self.dimension)?;
        if self.generators.is_empty() {
            writeln!(f, "  \"generators\": []")?;
        } else {
            writeln!(f, "  \"generators\": [")?;
            for (i, g) in self.generators.iter().enumerate() {
                let mut line = String::from("    {\"signs\": [");
                for (k, s) in g.signs.iter().enumerate() {
                    if k > 0 {
                        line.push_str(", ");
                    }
                    write!(line, "{}", s.0)?;
                }
                line.push_str("], \"translation\": [");
                for (k, q) in g.translation.iter().enumerate() {
                    if k > 0 {
                        line.push_str(", ");
                    }
                    write!(line, "\"{}\"", format_rational(&q.0))?;
                }
                line.push_str("]}");
                if i + 1 < self.generators.len() {
                    line.push(',');
                }
                writeln!(f, "{line}")?;
            }
            writeln!(f, "  ]")?;
        }
        writeln!(f, "}}")
    }
}
