//! Named groups and enumeration of Hantzsche–Wendt candidates.
//!
//! A candidate in dimension `n` (odd) has generators `(Bᵢ, bᵢ)` for
//! `1 ≤ i ≤ n − 1`, where `Bᵢ` negates every coordinate except the `i`-th and
//! `bᵢ ∈ {0, 1/2}ⁿ`. The translation rows are stored as bit masks of their
//! half entries.

use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::crystal::{build_group, AffineElement, BieberbachGroup, CrystalError};
use crate::linalg::rational::{half, rat, Rational};
use crate::signs::{full_mask, SignVector, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("dimension {0} is not an odd number between 3 and {MAX_DIM}")]
    BadDimension(usize),
    #[error("torus dimension {0} exceeds the supported maximum {MAX_DIM}")]
    BadTorusDimension(usize),
    #[error("expected {expected} translation rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {} entry {} is {value}; entries must be 0 or 1/2", .row + 1, .coord + 1)]
    NotHalfInteger { row: usize, coord: usize, value: String },
    #[error("row {} has length {found}, expected {expected}", .row + 1)]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("the group has torsion: {witness} has order 2")]
    Torsion { witness: AffineElement },
    #[error(transparent)]
    Crystal(#[from] CrystalError),
    #[error(
        "exhaustive enumeration in dimension {n} would visit 2^{bits} candidates; \
         it is limited to n = 3 and n = 5, use sampling instead",
        bits = .n * (.n - 1)
    )]
    ExhaustiveRefused { n: usize },
    #[error("unknown catalog name {0:?}; expected cyclic-hw-<n>, hw-5-1, hw-5-2 or torus-<n>")]
    UnknownName(String),
    #[error("sampling found only {found} distinct torsion-free candidates out of {requested} requested")]
    SamplingExhausted { requested: usize, found: usize },
}

fn check_hw_dim(n: usize) -> Result<(), CatalogError> {
    if n < 3 || n.is_multiple_of(2) || n > MAX_DIM {
        return Err(CatalogError::BadDimension(n));
    }
    Ok(())
}

/// `Bᵢ` (0-based `i`): every coordinate negated except the `i`-th.
pub fn hw_rotation(n: usize, i: usize) -> SignVector {
    SignVector::from_mask(n, full_mask(n) ^ (1 << i)).expect("valid dimension")
}

fn half_vector(n: usize, mask: u64) -> Vec<Rational> {
    (0..n)
        .map(|k| if mask >> k & 1 == 1 { half() } else { Rational::zero() })
        .collect()
}

/// ℤⁿ itself: no generators beyond the lattice.
pub fn torus(n: usize) -> Result<BieberbachGroup, CatalogError> {
    if n > MAX_DIM {
        return Err(CatalogError::BadTorusDimension(n));
    }
    Ok(build_group(n, vec![])?)
}

/// The cyclic group: `βᵢ = (Bᵢ, eᵢ/2 + eᵢ₊₁/2)` for `i < n` and the dependent
/// `βₙ = (Bₙ, (1/2, 0, …, 0, −1/2))`. The exact inverse product
/// `(β₁ ⋯ βₙ₋₁)⁻¹` has last translation entry `+1/2`; the two differ by the
/// lattice vector `tₙ`, so `βₙ = tₙ⁻¹ (β₁ ⋯ βₙ₋₁)⁻¹` generates the same group.
pub fn cyclic_hw(n: usize) -> Result<BieberbachGroup, CatalogError> {
    check_hw_dim(n)?;
    let mut generators: Vec<AffineElement> = (0..n - 1)
        .map(|i| AffineElement::new(hw_rotation(n, i), half_vector(n, 0b11 << i)).expect("same dimension"))
        .collect();
    let mut last = vec![Rational::zero(); n];
    last[0] = half();
    last[n - 1] = -half();
    generators.push(AffineElement::new(hw_rotation(n, n - 1), last)?);
    let group = build_group(n, generators)?;
    if let Some(witness) = group.torsion_witness() {
        return Err(CatalogError::Torsion { witness });
    }
    Ok(group)
}

/// The first five-dimensional group of the pair, given by four generators.
pub fn hw_5_1() -> BieberbachGroup {
    let gen = |signs: [i64; 5], t: [i64; 5]| {
        AffineElement::new(
            SignVector::from_signs(&signs).expect("signs"),
            t.iter().map(|&x| rat(x, 2)).collect(),
        )
        .expect("same dimension")
    };
    let generators = vec![
        gen([1, 1, 1, -1, -1], [0, 0, 1, 1, 0]),
        gen([1, 1, -1, -1, 1], [0, 1, 0, 0, 0]),
        gen([-1, 1, 1, -1, 1], [0, 0, 0, 0, 1]),
        gen([1, -1, -1, 1, 1], [1, 0, 0, 0, 0]),
    ];
    build_group(5, generators).expect("valid generator data")
}

/// Looks up `cyclic-hw-<n>`, `hw-5-1`, `hw-5-2` (the same group as
/// `cyclic-hw-5`) or `torus-<n>`.
pub fn by_name(name: &str) -> Result<BieberbachGroup, CatalogError> {
    let unknown = || CatalogError::UnknownName(name.to_string());
    let parse_dim = |s: &str| -> Result<usize, CatalogError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
            return Err(unknown());
        }
        s.parse().map_err(|_| unknown())
    };
    match name {
        "hw-5-1" => Ok(hw_5_1()),
        "hw-5-2" => cyclic_hw(5),
        _ => {
            if let Some(n) = name.strip_prefix("cyclic-hw-") {
                cyclic_hw(parse_dim(n)?)
            } else if let Some(n) = name.strip_prefix("torus-") {
                torus(parse_dim(n)?)
            } else {
                Err(unknown())
            }
        }
    }
}

/// Translation data of a candidate: `n − 1` rows with entries in `{0, 1/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HwSpec {
    n: usize,
    half_masks: Vec<u64>,
}

impl HwSpec {
    pub fn new(n: usize, rows: &[Vec<Rational>]) -> Result<Self, CatalogError> {
        check_hw_dim(n)?;
        if rows.len() != n - 1 {
            return Err(CatalogError::RowCount {
                expected: n - 1,
                found: rows.len(),
            });
        }
        let mut half_masks = Vec::with_capacity(n - 1);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != n {
                return Err(CatalogError::RowLength {
                    row,
                    expected: n,
                    found: values.len(),
                });
            }
            let mut mask = 0;
            for (coord, q) in values.iter().enumerate() {
                if *q == half() {
                    mask |= 1 << coord;
                } else if !q.is_zero() {
                    return Err(CatalogError::NotHalfInteger {
                        row,
                        coord,
                        value: crate::linalg::rational::format_rational(q),
                    });
                }
            }
            half_masks.push(mask);
        }
        Ok(Self { n, half_masks })
    }

    /// Bit `k` of `half_masks[i]` marks `bᵢ₊₁[k+1] = 1/2`.
    pub fn from_half_masks(n: usize, half_masks: Vec<u64>) -> Result<Self, CatalogError> {
        check_hw_dim(n)?;
        if half_masks.len() != n - 1 {
            return Err(CatalogError::RowCount {
                expected: n - 1,
                found: half_masks.len(),
            });
        }
        if let Some(row) = half_masks.iter().position(|m| m & !full_mask(n) != 0) {
            return Err(CatalogError::RowLength {
                row,
                expected: n,
                found: 64 - half_masks[row].leading_zeros() as usize,
            });
        }
        Ok(Self { n, half_masks })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_masks(&self) -> &[u64] {
        &self.half_masks
    }

    pub fn b_rows(&self) -> Vec<Vec<Rational>> {
        self.half_masks.iter().map(|&m| half_vector(self.n, m)).collect()
    }

    pub fn generators(&self) -> Vec<AffineElement> {
        self.half_masks
            .iter()
            .enumerate()
            .map(|(i, &m)| AffineElement::new(hw_rotation(self.n, i), half_vector(self.n, m)).expect("same dimension"))
            .collect()
    }

    /// Torsion test on bit masks alone.
    ///
    /// Modulo ℤⁿ every representative translation is the XOR of the selected
    /// half masks (signs do not matter for halves), and the fixed coordinates
    /// of a class are the complement of the XOR of its negation masks. This
    /// agrees with [`BieberbachGroup::is_torsion_free`] on the built group.
    pub fn is_torsion_free(&self) -> bool {
        let full = full_mask(self.n);
        let m = self.half_masks.len();
        let mut trans = vec![0u64; 1 << m];
        let mut neg = vec![0u64; 1 << m];
        for i in 0..m {
            let (h, b) = (self.half_masks[i], full ^ (1 << i));
            for s in 0..1usize << i {
                let a = s | 1 << i;
                trans[a] = trans[s] ^ h;
                neg[a] = neg[s] ^ b;
                if trans[a] & !neg[a] & full == 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds and validates the candidate, rejecting torsion with a witness.
pub fn hw_from_spec(spec: &HwSpec) -> Result<BieberbachGroup, CatalogError> {
    let group = build_group(spec.n, spec.generators())?;
    if let Some(witness) = group.torsion_witness() {
        return Err(CatalogError::Torsion { witness });
    }
    Ok(group)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Every candidate, in increasing index order. Only `n ∈ {3, 5}`.
    Exhaustive,
    /// Seeded draws of distinct torsion-free candidates.
    Sample { count: usize, seed: u64 },
}

/// Number of candidates in dimension `n`: `2^{n(n−1)}`.
pub fn candidate_count(n: usize) -> Result<u64, CatalogError> {
    check_hw_dim(n)?;
    if n > 7 {
        return Err(CatalogError::ExhaustiveRefused { n });
    }
    Ok(1u64 << (n * (n - 1)))
}

/// The candidate with the given index. Reading the entries row by row
/// (`b₁[1..n]`, then `b₂[1..n]`, …) as binary digits with `1/2 ↦ 1` and the
/// first entry most significant gives the index.
pub fn spec_from_index(n: usize, index: u64) -> Result<HwSpec, CatalogError> {
    let total = candidate_count(n)?;
    assert!(index < total, "candidate index {index} out of range");
    let width = n * (n - 1);
    let half_masks = (0..n - 1)
        .map(|i| {
            (0..n).fold(0u64, |mask, k| {
                let pos = i * n + k;
                mask | (index >> (width - 1 - pos) & 1) << k
            })
        })
        .collect();
    HwSpec::from_half_masks(n, half_masks)
}

pub fn exhaustive_allowed(n: usize) -> Result<(), CatalogError> {
    check_hw_dim(n)?;
    if n > 5 {
        return Err(CatalogError::ExhaustiveRefused { n });
    }
    Ok(())
}

/// A torsion-free candidate with its index (candidate index in exhaustive
/// mode, draw number when sampling).
#[derive(Debug, Clone)]
pub struct Candidate {
    pub index: u64,
    pub spec: HwSpec,
}

/// Torsion-free candidates in dimension `n`.
///
/// Exhaustive mode walks all `2^{n(n−1)}` translation tables in index order.
/// Every table is already reduced mod ℤⁿ, so no two are duplicates; groups
/// that are merely isomorphic or affinely equivalent are all listed.
///
/// Sampling draws tables by randomized backtracking: row `i` is drawn
/// uniformly and kept if the `2^{i}` classes it completes are torsion-free,
/// with a bounded number of retries before backing up a row. The result is
/// reproducible for a given seed but is not a uniform sample of the
/// torsion-free tables. Repeated tables are skipped.
pub fn enumerate_specs(n: usize, mode: EnumerationMode) -> Result<Box<dyn Iterator<Item = Candidate>>, CatalogError> {
    check_hw_dim(n)?;
    match mode {
        EnumerationMode::Exhaustive => {
            exhaustive_allowed(n)?;
            let total = candidate_count(n)?;
            Ok(Box::new((0..total).filter_map(move |index| {
                let spec = spec_from_index(n, index).expect("index in range");
                spec.is_torsion_free().then_some(Candidate { index, spec })
            })))
        }
        EnumerationMode::Sample { count, seed } => {
            let specs = sample_specs(n, count, seed)?;
            Ok(Box::new(
                specs
                    .into_iter()
                    .enumerate()
                    .map(|(i, spec)| Candidate { index: i as u64, spec }),
            ))
        }
    }
}

/// [`enumerate_specs`] with each candidate built into a group.
pub fn enumerate_hw(
    n: usize,
    mode: EnumerationMode,
) -> Result<impl Iterator<Item = (Candidate, BieberbachGroup)>, CatalogError> {
    Ok(enumerate_specs(n, mode)?.map(|c| {
        let group = hw_from_spec(&c.spec).expect("candidate passed the torsion filter");
        (c, group)
    }))
}

/// A random orientable, torsion-free group with diagonal holonomy in
/// dimension `n`, not necessarily Hantzsche–Wendt.
///
/// Up to `n` generators get random even-weight rotations and translations in
/// `{-1, -1/2, 0, 1/2, 1}`; a generator whose rotation is already spanned is
/// replaced by the matching product of earlier ones times a random lattice
/// vector, so dependent generators appear too. Draws with torsion are
/// discarded and redrawn.
pub fn random_diagonal_group<R: Rng>(rng: &mut R, n: usize) -> BieberbachGroup {
    assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
    let full = full_mask(n);
    loop {
        let count = rng.gen_range(0..=n);
        let mut generators: Vec<AffineElement> = Vec::with_capacity(count);
        for _ in 0..count {
            let mut mask = rng.gen::<u64>() & full;
            if mask.count_ones() % 2 == 1 {
                mask ^= 1 << rng.gen_range(0..n);
            }
            let rotation = SignVector::from_mask(n, mask).expect("mask within dimension");
            let translation = (0..n).map(|_| rat(rng.gen_range(-2..=2), 2)).collect();
            generators.push(AffineElement::new(rotation, translation).expect("same dimension"));
        }
        let group = match build_group(n, generators.clone()) {
            Ok(g) => g,
            Err(CrystalError::InconsistentGenerator { index, .. }) => {
                // rebuild the dependent generator from its normal form
                let partial = build_group(n, generators[..index].to_vec()).expect("prefix is valid");
                let class = partial
                    .class_of(generators[index].rotation())
                    .expect("dependent rotation lies in the span");
                let shift: Vec<num_bigint::BigInt> =
                    (0..n).map(|_| num_bigint::BigInt::from(rng.gen_range(-1..=1))).collect();
                let fixed = &AffineElement::lattice(&shift).expect("valid dimension") * &partial.representative(class);
                generators[index] = fixed;
                match build_group(n, generators) {
                    Ok(g) => g,
                    Err(_) => continue,
                }
            }
            Err(_) => continue,
        };
        if group.is_torsion_free() {
            return group;
        }
    }
}

const RETRIES_PER_ROW: usize = 64;

fn sample_specs(n: usize, count: usize, seed: u64) -> Result<Vec<HwSpec>, CatalogError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let max_draws = count.saturating_mul(64).max(1024);
    let mut draws = 0;
    while out.len() < count && draws < max_draws {
        draws += 1;
        if let Some(masks) = draw_torsion_free(n, &mut rng) {
            if seen.insert(masks.clone()) {
                out.push(HwSpec::from_half_masks(n, masks)?);
            }
        }
    }
    if out.len() < count {
        return Err(CatalogError::SamplingExhausted {
            requested: count,
            found: out.len(),
        });
    }
    Ok(out)
}

fn draw_torsion_free(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let full = full_mask(n);
    let m = n - 1;
    let mut rows: Vec<u64> = Vec::with_capacity(m);
    let mut trans = vec![0u64; 1 << m];
    let mut neg = vec![0u64; 1 << m];
    let mut retries = vec![0usize; m];
    let mut budget = RETRIES_PER_ROW * m * 4;
    while rows.len() < m {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let i = rows.len();
        let h = rng.gen::<u64>() & full;
        let b = full ^ (1 << i);
        let ok = (0..1usize << i).all(|s| {
            let a = s | 1 << i;
            trans[a] = trans[s] ^ h;
            neg[a] = neg[s] ^ b;
            trans[a] & !neg[a] & full != 0
        });
        if ok {
            rows.push(h);
            continue;
        }
        retries[i] += 1;
        if retries[i] >= RETRIES_PER_ROW {
            retries[i] = 0;
            rows.pop();
        }
    }
    Some(rows)
}
