//! Finite ℤ-filtered chain complexes over 𝔽₂.
//!
//! Every complex carries an Alexander grading (the filtration) and a Maslov
//! grading (the homological grading). Homology is computed by Gaussian
//! elimination on bit-packed boundary matrices, so this module is
//! independent of the closed-form cabling formulas it is used to check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;

pub const DEFAULT_MAX_GENERATORS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex has {0} generators, above the cap of {1}")]
    TooLarge(usize, usize),
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("unknown generator id {0:?}")]
    UnknownId(String),
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("boundary {from} -> {to} does not drop the Maslov grading by one")]
    MaslovDrop { from: String, to: String },
    #[error("boundary {from} -> {to} raises the Alexander filtration")]
    NotFiltered { from: String, to: String },
    #[error("d∘d != 0 at generator {0:?}")]
    NotADifferential(String),
    #[error("not a model of CF-hat(S^3): full homology is {0}")]
    NotASphereComplex(GradedRanks),
    #[error("not a staircase: {0}")]
    NotAStaircase(String),
    #[error("malformed complex JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    #[serde(rename = "A")]
    pub alexander: i64,
    #[serde(rename = "M")]
    pub maslov: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, alexander: i64, maslov: i64) -> Self {
        Self { id: id.into(), alexander, maslov }
    }
}

/// Homology ranks by Maslov grading. Only positive ranks are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedRanks(BTreeMap<i64, usize>);

impl GradedRanks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, usize)>>(pairs: I) -> Self {
        let mut out = Self::new();
        for (m, r) in pairs {
            out.add(m, r);
        }
        out
    }

    pub fn add(&mut self, maslov: i64, rank: usize) {
        if rank > 0 {
            *self.0.entry(maslov).or_insert(0) += rank;
        }
    }

    pub fn rank(&self, maslov: i64) -> usize {
        self.0.get(&maslov).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(&m, &r)| (m, r))
    }

    /// Regrades by `maslov ↦ maslov + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self(self.0.iter().map(|(&m, &r)| (m + shift, r)).collect())
    }
}

impl fmt::Display for GradedRanks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<_> = self.iter().map(|(m, r)| format!("F^{r}({m})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Ranks of the associated graded homology, keyed by (Alexander, Maslov).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HfkTable(BTreeMap<(i64, i64), usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkEntry {
    #[serde(rename = "A")]
    pub alexander: i64,
    #[serde(rename = "M")]
    pub maslov: i64,
    pub rank: usize,
}

impl HfkTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, alexander: i64, maslov: i64, rank: usize) {
        if rank > 0 {
            *self.0.entry((alexander, maslov)).or_insert(0) += rank;
        }
    }

    pub fn rank(&self, alexander: i64, maslov: i64) -> usize {
        self.0.get(&(alexander, maslov)).copied().unwrap_or(0)
    }

    /// All Maslov ranks in one Alexander grading.
    pub fn at_alexander(&self, alexander: i64) -> GradedRanks {
        GradedRanks::from_pairs(
            self.0.range((alexander, i64::MIN)..=(alexander, i64::MAX)).map(|(&(_, m), &r)| (m, r)),
        )
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries sorted by decreasing Alexander grading, then decreasing Maslov.
    pub fn entries(&self) -> Vec<HfkEntry> {
        self.0.iter().rev().map(|(&(a, m), &rank)| HfkEntry { alexander: a, maslov: m, rank }).collect()
    }
}

impl FromIterator<((i64, i64), usize)> for HfkTable {
    fn from_iter<I: IntoIterator<Item = ((i64, i64), usize)>>(iter: I) -> Self {
        let mut t = Self::new();
        for ((a, m), r) in iter {
            t.add(a, m, r);
        }
        t
    }
}

impl Serialize for HfkTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HfkTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<HfkEntry>::deserialize(d)?;
        Ok(entries.into_iter().map(|e| ((e.alexander, e.maslov), e.rank)).collect())
    }
}

/// A filtered complex: generators with (A, M) gradings and an 𝔽₂ differential
/// stored as, for each generator, the sorted indices of its boundary terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    boundary: Vec<Vec<usize>>,
}

impl FilteredComplex {
    pub fn empty() -> Self {
        Self { generators: Vec::new(), boundary: Vec::new() }
    }

    /// Builds and validates a complex with the default size cap.
    pub fn new(generators: Vec<Generator>, boundary: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        Self::with_cap(generators, boundary, DEFAULT_MAX_GENERATORS)
    }

    pub fn with_cap(
        generators: Vec<Generator>,
        mut boundary: Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<Self, ComplexError> {
        if generators.len() > cap {
            return Err(ComplexError::TooLarge(generators.len(), cap));
        }
        if boundary.len() > generators.len() {
            return Err(ComplexError::BadIndex(boundary.len() - 1));
        }
        boundary.resize(generators.len(), Vec::new());
        let mut ids = HashMap::new();
        for g in &generators {
            if ids.insert(g.id.as_str(), ()).is_some() {
                return Err(ComplexError::DuplicateId(g.id.clone()));
            }
        }
        for (i, targets) in boundary.iter_mut().enumerate() {
            // 𝔽₂ coefficients: repeated terms cancel in pairs
            targets.sort_unstable();
            let mut reduced: Vec<usize> = Vec::with_capacity(targets.len());
            for &t in targets.iter() {
                if reduced.last() == Some(&t) {
                    reduced.pop();
                } else {
                    reduced.push(t);
                }
            }
            *targets = reduced;
            let src = &generators[i];
            for &t in targets.iter() {
                let dst = generators.get(t).ok_or(ComplexError::BadIndex(t))?;
                if dst.maslov != src.maslov - 1 {
                    return Err(ComplexError::MaslovDrop { from: src.id.clone(), to: dst.id.clone() });
                }
                if dst.alexander > src.alexander {
                    return Err(ComplexError::NotFiltered { from: src.id.clone(), to: dst.id.clone() });
                }
            }
        }
        let c = Self { generators, boundary };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<(), ComplexError> {
        for (i, targets) in self.boundary.iter().enumerate() {
            let mut count: HashMap<usize, u8> = HashMap::new();
            for &t in targets {
                for &u in &self.boundary[t] {
                    *count.entry(u).or_insert(0) ^= 1;
                }
            }
            if count.values().any(|&c| c == 1) {
                return Err(ComplexError::NotADifferential(self.generators[i].id.clone()));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn boundary_of(&self, index: usize) -> &[usize] {
        &self.boundary[index]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn alexander_range(&self) -> Option<(i64, i64)> {
        let min = self.generators.iter().map(|g| g.alexander).min()?;
        let max = self.generators.iter().map(|g| g.alexander).max()?;
        Some((min, max))
    }

    /// Homology of the span of the selected generators, with the differential
    /// truncated to selected targets. For a subcomplex nothing is truncated;
    /// for a single filtration level this is the associated graded piece.
    fn homology_of_selection(&self, selected: &[bool]) -> GradedRanks {
        let mut by_maslov: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if selected[i] {
                by_maslov.entry(g.maslov).or_default().push(i);
            }
        }
        // rank of ∂ : C_m → C_{m-1}
        let mut d_rank: BTreeMap<i64, usize> = BTreeMap::new();
        for (&m, sources) in &by_maslov {
            let Some(targets) = by_maslov.get(&(m - 1)) else { continue };
            let col: HashMap<usize, usize> = targets.iter().enumerate().map(|(c, &g)| (g, c)).collect();
            let rows = sources
                .iter()
                .map(|&s| {
                    let mut row = BitRow::zeros(targets.len());
                    for t in &self.boundary[s] {
                        if let Some(&c) = col.get(t) {
                            row.flip(c);
                        }
                    }
                    row
                })
                .collect();
            d_rank.insert(m, gf2_rank(rows));
        }
        let mut out = GradedRanks::new();
        for (&m, gens) in &by_maslov {
            let out_rank = d_rank.get(&m).copied().unwrap_or(0);
            let in_rank = d_rank.get(&(m + 1)).copied().unwrap_or(0);
            out.add(m, gens.len() - out_rank - in_rank);
        }
        out
    }

    /// Homology of the whole complex.
    pub fn homology(&self) -> GradedRanks {
        self.homology_of_selection(&vec![true; self.len()])
    }

    /// Maslov-graded homology of the subcomplex spanned by generators with
    /// Alexander grading at most `j`.
    pub fn homology_of_subcomplex(&self, j: i64) -> GradedRanks {
        let selected: Vec<bool> = self.generators.iter().map(|g| g.alexander <= j).collect();
        self.homology_of_selection(&selected)
    }

    /// Homology of every quotient `Filt(j) / Filt(j-1)`, assembled.
    pub fn associated_graded_hfk(&self) -> HfkTable {
        let mut table = HfkTable::new();
        let Some((lo, hi)) = self.alexander_range() else { return table };
        for j in lo..=hi {
            let selected: Vec<bool> = self.generators.iter().map(|g| g.alexander == j).collect();
            if !selected.iter().any(|&s| s) {
                continue;
            }
            for (m, r) in self.homology_of_selection(&selected).iter() {
                table.add(j, m, r);
            }
        }
        table
    }

    /// Rank of the image of `H_m(Filt(j)) → H_m(full complex)`.
    pub fn inclusion_image_rank(&self, j: i64, maslov: i64) -> usize {
        let degree: Vec<usize> = (0..self.len()).filter(|&i| self.generators[i].maslov == maslov).collect();
        if degree.is_empty() {
            return 0;
        }
        let col: HashMap<usize, usize> = degree.iter().enumerate().map(|(c, &g)| (g, c)).collect();
        let width = degree.len();

        // boundaries landing in this degree, from the full complex
        let boundaries: Vec<BitRow> = (0..self.len())
            .filter(|&i| self.generators[i].maslov == maslov + 1)
            .map(|i| {
                let mut row = BitRow::zeros(width);
                for t in &self.boundary[i] {
                    row.flip(col[t]);
                }
                row
            })
            .collect();
        let boundary_rank = gf2_rank(boundaries.clone());

        // cycles of Filt(j) in this degree
        let sub: Vec<usize> = degree.iter().copied().filter(|&i| self.generators[i].alexander <= j).collect();
        let below: Vec<usize> =
            (0..self.len()).filter(|&i| self.generators[i].maslov == maslov - 1).collect();
        let below_col: HashMap<usize, usize> = below.iter().enumerate().map(|(c, &g)| (g, c)).collect();
        let d_rows: Vec<BitRow> = sub
            .iter()
            .map(|&s| {
                let mut row = BitRow::zeros(below.len());
                for t in &self.boundary[s] {
                    row.flip(below_col[t]);
                }
                row
            })
            .collect();
        let cycles = gf2_kernel(&d_rows).into_iter().map(|combo| {
            let mut v = BitRow::zeros(width);
            for (k, &s) in sub.iter().enumerate() {
                if combo.get(k) {
                    v.flip(col[&s]);
                }
            }
            v
        });
        let mut all = boundaries;
        all.extend(cycles);
        gf2_rank(all) - boundary_rank
    }

    /// The least `j` for which `Filt(j)` carries the generator of
    /// `HF-hat(S³)`. Requires the full homology to be one copy of 𝔽₂ in
    /// Maslov grading 0.
    pub fn tau(&self) -> Result<i64, ComplexError> {
        let full = self.homology();
        if full.total() != 1 || full.rank(0) != 1 {
            return Err(ComplexError::NotASphereComplex(full));
        }
        let (lo, hi) = self.alexander_range().expect("nonempty when homology is nonzero");
        (lo..=hi).find(|&j| self.inclusion_image_rank(j, 0) == 1).ok_or(ComplexError::NotASphereComplex(full))
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            generators: self.generators.clone(),
            boundary: self
                .boundary
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_empty())
                .map(|(i, t)| {
                    (
                        self.generators[i].id.clone(),
                        t.iter().map(|&k| self.generators[k].id.clone()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, ComplexError> {
        let index: HashMap<&str, usize> =
            json.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
        let mut boundary = vec![Vec::new(); json.generators.len()];
        for (src, targets) in &json.boundary {
            let &s = index.get(src.as_str()).ok_or_else(|| ComplexError::UnknownId(src.clone()))?;
            for t in targets {
                let &t = index.get(t.as_str()).ok_or_else(|| ComplexError::UnknownId(t.clone()))?;
                boundary[s].push(t);
            }
        }
        Self::new(json.generators.clone(), boundary)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ComplexError> {
        let json: ComplexJson = serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// `{"generators":[{"id","A","M"}], "boundary":{id:[id,...]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<String>>,
}

pub fn homology_of_subcomplex(c: &FilteredComplex, j: i64) -> GradedRanks {
    c.homology_of_subcomplex(j)
}

pub fn associated_graded_hfk(c: &FilteredComplex) -> HfkTable {
    c.associated_graded_hfk()
}

pub fn tau_of_complex(c: &FilteredComplex) -> Result<i64, ComplexError> {
    c.tau()
}

/// How the Maslov grading steps along a staircase. `Standard` is the correct
/// rule; `SwappedParity` exchanges the odd and even steps and exists so the
/// verification suite can be shown to reject a corrupted recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StaircaseRule {
    #[default]
    Standard,
    SwappedParity,
}

/// The hat-version filtered complex of an L-space knot with Alexander
/// polynomial `delta`.
///
/// With exponents `n_0 > n_1 > … > n_{2m}` of the nonzero terms, generator
/// `x_j` sits at Alexander grading `n_j`; Maslov gradings start at 0 and step
/// by `-2(n_{j-1} - n_j) + 1` into odd `j` and by `-1` into even `j`; the only
/// differentials are `∂x_j = x_{j+1}` for odd `j`.
pub fn staircase_complex(delta: &LaurentPoly) -> Result<FilteredComplex, ComplexError> {
    staircase_complex_with(delta, StaircaseRule::Standard)
}

pub fn staircase_complex_with(
    delta: &LaurentPoly,
    rule: StaircaseRule,
) -> Result<FilteredComplex, ComplexError> {
    match delta.coeffs_alternating_pm1() {
        Ok(true) => {}
        Ok(false) => {
            return Err(ComplexError::NotAStaircase(format!(
                "{delta} does not have alternating +-1 coefficients"
            )))
        }
        Err(e) => return Err(ComplexError::NotAStaircase(e.to_string())),
    }
    let exps: Vec<i64> = delta.terms_desc().map(|(e, _)| e).collect();
    let mut generators = Vec::with_capacity(exps.len());
    let mut maslov = 0i64;
    for (j, &e) in exps.iter().enumerate() {
        if j > 0 {
            let long_step = match rule {
                StaircaseRule::Standard => j % 2 == 1,
                StaircaseRule::SwappedParity => j % 2 == 0,
            };
            maslov += if long_step { -2 * (exps[j - 1] - e) + 1 } else { -1 };
        }
        generators.push(Generator::new(format!("x{j}"), e, maslov));
    }
    let boundary = (0..exps.len()).map(|j| if j % 2 == 1 { vec![j + 1] } else { Vec::new() }).collect();
    FilteredComplex::new(generators, boundary)
}

// --- 𝔽₂ linear algebra -----------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

fn gf2_rank(mut rows: Vec<BitRow>) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<(usize, BitRow)> = Vec::new();
    for row in rows.iter_mut() {
        for (col, p) in &pivots {
            if row.get(*col) {
                row.xor_assign(p);
            }
        }
        if let Some(col) = row.leading() {
            // keep pivots reduced against the new one
            for (_, p) in pivots.iter_mut() {
                if p.get(col) {
                    p.xor_assign(row);
                }
            }
            pivots.push((col, row.clone()));
            rank += 1;
        }
    }
    rank
}

/// Basis of `{c : Σ c_k rows[k] = 0}`, each vector indexed by row.
fn gf2_kernel(rows: &[BitRow]) -> Vec<BitRow> {
    let n = rows.len();
    let mut work: Vec<(BitRow, BitRow)> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut tag = BitRow::zeros(n);
            tag.flip(k);
            (r.clone(), tag)
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for k in 0..n {
        for &(col, p) in &pivots {
            if work[k].0.get(col) {
                let (pr, pt) = work[p].clone();
                work[k].0.xor_assign(&pr);
                work[k].1.xor_assign(&pt);
            }
        }
        match work[k].0.leading() {
            Some(col) => pivots.push((col, k)),
            None => kernel.push(work[k].1.clone()),
        }
    }
    kernel
}
