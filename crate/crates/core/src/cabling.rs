//! Invariants of cable knots `K_{p,q}` computed from invariants of the companion `K`.
//!
//! Most of the module concerns the `(p, pn+1)` family, where the filtered
//! complex of the cable agrees with that of `K` in a band of filtration levels
//! once `n` is large. The stabilization functions return what the cable's
//! homology *should* be; the `filtration` module computes what it *is* for
//! L-space knots, and the verification suite compares the two.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filtration::{ComplexError, FilteredComplex, GradedRanks, HfkTable};
use crate::knotdb::{torus_knot_record, validate_record, KnotRecord};
use crate::laurent::{torus_alexander, LaurentError, LaurentPoly};
use crate::obstructions::{fiber_surface_complex_criterion, pos_membership_cable, PosMembership};
use crate::surgery::{cable_lspace_certificate, CableCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CablingError {
    #[error("invalid cable parameters: {0}")]
    InvalidParameters(String),
    #[error("tau({0}) is unknown")]
    TauUnknown(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("tau of the cable is not determined: {0}")]
    Undetermined(String),
    #[error("filtered homology profile has no data at level {0}")]
    WindowExceedsData(i64),
    #[error("j = {j} lies outside the validity window {min}..={max}")]
    WindowViolation { j: i64, min: i64, max: i64 },
    #[error("profile is inconsistent with genus {genus}: {reason}")]
    ProfileInconsistent { genus: i64, reason: String },
    #[error("derived record {name:?} fails validation: {reason}")]
    InvalidDerivedRecord { name: String, reason: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Cabling parameters: `p` strands longitudinally, `q` meridionally.
/// `n` is set exactly when `q = pn + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableParams {
    p: i64,
    q: i64,
    n: Option<i64>,
}

impl CableParams {
    pub fn new(p: i64, q: i64) -> Result<Self, CablingError> {
        if p < 2 {
            return Err(CablingError::InvalidParameters(format!("p must be >= 2, got {p}")));
        }
        if p.gcd(&q) != 1 {
            return Err(CablingError::InvalidParameters(format!("gcd({p}, {q}) != 1")));
        }
        let n = ((q - 1) % p == 0).then(|| (q - 1) / p);
        Ok(Self { p, q, n })
    }

    /// The `(p, pn + 1)` cable.
    pub fn from_n(p: i64, n: i64) -> Result<Self, CablingError> {
        let q = p
            .checked_mul(n)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| CablingError::InvalidParameters("q overflows".into()))?;
        Self::new(p, q)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn n(&self) -> Option<i64> {
        self.n
    }
}

impl fmt::Display for CableParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// `pn(p-1)/2`, the offset shared by every `(p, pn+1)` formula.
pub fn twist_offset(p: i64, n: i64) -> i64 {
    p * n * (p - 1) / 2
}

/// `Δ_{K_{p,q}}(t) = Δ_{T_{p,q}}(t) · Δ_K(t^p)`
pub fn cable_alexander(k: &KnotRecord, cp: &CableParams) -> Result<LaurentPoly, CablingError> {
    let pattern = torus_alexander(cp.p, cp.q)?;
    let companion = k.alexander.substitute_power(cp.p)?;
    Ok(pattern.checked_mul(&companion)?)
}

/// Seifert genus `p·g(K) + (p-1)(q-1)/2` of a positive cable.
pub fn cable_genus(k: &KnotRecord, cp: &CableParams) -> Result<i64, CablingError> {
    if cp.q <= 0 {
        return Err(CablingError::Unsupported(format!("cable genus for q = {} <= 0 is not computed", cp.q)));
    }
    Ok(cp.p * k.genus + (cp.p - 1) * (cp.q - 1) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauReason {
    TauEqualsGenus,
    TauEqualsMinusGenus,
    /// The companion is the unknot, so the cable is a torus knot.
    UnknotCompanion,
    Undetermined,
}

/// Bounds `lower ≤ τ(K_{p,pn+1}) ≤ upper = lower + p - 1`, with the exact
/// value when it is forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauInterval {
    pub p: i64,
    pub n: i64,
    pub lower: i64,
    pub upper: i64,
    pub exact: Option<i64>,
    pub reason: TauReason,
}

impl TauInterval {
    pub fn contains(&self, tau: i64) -> bool {
        (self.lower..=self.upper).contains(&tau)
    }

    /// The two values the stabilization argument allows.
    pub fn candidates(&self) -> [i64; 2] {
        [self.lower, self.upper]
    }
}

/// τ of the `(p, pn+1)` cable of `k`, for any integer `n`.
pub fn tau_cable_interval(k: &KnotRecord, p: i64, n: i64) -> Result<TauInterval, CablingError> {
    if p < 2 {
        return Err(CablingError::InvalidParameters(format!("p must be >= 2, got {p}")));
    }
    let tau = k.tau.ok_or_else(|| CablingError::TauUnknown(k.name.clone()))?;
    let lower = p * tau + twist_offset(p, n);
    let upper = lower + p - 1;
    let (exact, reason) = if k.is_unknot() {
        let torus =
            torus_knot_record(p, p * n + 1).map_err(|e| CablingError::InvalidParameters(e.to_string()))?;
        (torus.tau, TauReason::UnknotCompanion)
    } else if tau == k.genus {
        (Some(lower), TauReason::TauEqualsGenus)
    } else if tau == -k.genus {
        (Some(upper), TauReason::TauEqualsMinusGenus)
    } else {
        (None, TauReason::Undetermined)
    };
    Ok(TauInterval { p, n, lower, upper, exact, reason })
}

/// τ of the `(p, -pn+1)` cable, `n > 0`.
pub fn tau_cable_negative_n(k: &KnotRecord, p: i64, n: i64) -> Result<TauInterval, CablingError> {
    if n <= 0 {
        return Err(CablingError::InvalidParameters(format!("n must be positive, got {n}")));
    }
    tau_cable_interval(k, p, -n)
}

/// `H_*(Filt(K, j))` for every `j`, for a knot of genus `g`. Levels outside
/// `[-g, g]` are implied: empty below `-g`, the full homology at and above `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredHomologyProfile {
    pub genus: i64,
    pub levels: BTreeMap<i64, GradedRanks>,
}

impl FilteredHomologyProfile {
    pub fn from_complex(c: &FilteredComplex, genus: i64) -> Result<Self, CablingError> {
        let inconsistent = |reason: String| CablingError::ProfileInconsistent { genus, reason };
        if genus < 0 {
            return Err(inconsistent("negative genus".into()));
        }
        let below = c.homology_of_subcomplex(-genus - 1);
        if !below.is_zero() {
            return Err(inconsistent(format!("Filt(-g-1) has homology {below}")));
        }
        let full = c.homology();
        let top = c.homology_of_subcomplex(genus);
        if top != full {
            return Err(inconsistent(format!("Filt(g) = {top} differs from H_* = {full}")));
        }
        let levels = (-genus..=genus).map(|j| (j, c.homology_of_subcomplex(j))).collect();
        Ok(Self { genus, levels })
    }

    pub fn level(&self, j: i64) -> Result<GradedRanks, CablingError> {
        if j < -self.genus {
            return Ok(GradedRanks::new());
        }
        let j = j.min(self.genus);
        self.levels.get(&j).cloned().ok_or(CablingError::WindowExceedsData(j))
    }
}

/// Filtered homology of the cable at level `pj + pn(p-1)/2 - 1`, read off
/// from the companion, together with the levels the plateau clause says are
/// indistinguishable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizedFiltration {
    pub j: i64,
    pub cable_level: i64,
    pub ranks: GradedRanks,
    /// Pairs `(L - i, L - i - 1)`, `i = 2..p-1`, with `L = pj + pn(p-1)/2`.
    pub plateau: Vec<(i64, i64)>,
}

/// The range of `j` used when no window is supplied for the filtered
/// stabilization: `g + 1 - n ..= g + 1`. Below the lower end the plateau
/// levels of L-space knots stop agreeing; above `g + 1` both sides are the
/// full homology.
pub fn default_filtration_window(n: i64, genus: i64) -> RangeInclusive<i64> {
    (genus + 1 - n)..=(genus + 1)
}

/// Largest `j` used when no window is supplied for the knot Floer
/// stabilization: `n - g`, but never past `n - 1`. For the unknot the row at
/// `j = n` would sit below the cable's bottom grading.
pub fn default_hfk_window(n: i64, genus: i64) -> i64 {
    (n - genus).min(n - 1)
}

pub fn filtered_homology_cable_stabilized(
    profile: &FilteredHomologyProfile,
    p: i64,
    n: i64,
    j: i64,
    window: RangeInclusive<i64>,
) -> Result<StabilizedFiltration, CablingError> {
    check_stabilization_params(p, n)?;
    if !window.contains(&j) {
        return Err(CablingError::WindowViolation { j, min: *window.start(), max: *window.end() });
    }
    let base = p * j + twist_offset(p, n);
    Ok(StabilizedFiltration {
        j,
        cable_level: base - 1,
        ranks: profile.level(j - 1)?,
        plateau: (2..p).map(|i| (base - i, base - i - 1)).collect(),
    })
}

fn check_stabilization_params(p: i64, n: i64) -> Result<(), CablingError> {
    if p < 2 {
        return Err(CablingError::InvalidParameters(format!("p must be >= 2, got {p}")));
    }
    if n <= 0 {
        return Err(CablingError::InvalidParameters(format!("stabilization needs n > 0, got {n}")));
    }
    Ok(())
}

/// Knot Floer homology of the `(p, pn+1)` cable predicted from the filtered
/// homology of the companion, for `j = 0 ..= window_max_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizedHfk {
    pub p: i64,
    pub n: i64,
    pub window_max_j: i64,
    /// `pg + pn(p-1)/2`, the top Alexander grading of the cable.
    pub top: i64,
    /// Lowest Alexander grading with an asserted value.
    pub lowest_asserted: i64,
    pub table: HfkTable,
}

impl StabilizedHfk {
    /// `None` when the grading lies below the window and nothing is claimed.
    pub fn asserted(&self, alexander: i64) -> Option<GradedRanks> {
        (alexander >= self.lowest_asserted).then(|| self.table.at_alexander(alexander))
    }

    /// Asserted Alexander gradings, `top` down to `lowest_asserted`.
    pub fn asserted_gradings(&self) -> impl Iterator<Item = i64> {
        (self.lowest_asserted..=self.top).rev()
    }
}

pub fn hfk_cable_stabilized(
    profile: &FilteredHomologyProfile,
    p: i64,
    n: i64,
    window_max_j: i64,
) -> Result<StabilizedHfk, CablingError> {
    check_stabilization_params(p, n)?;
    let g = profile.genus;
    let top = p * g + twist_offset(p, n);
    let mut table = HfkTable::new();
    for j in 0..=window_max_j {
        let i = top - p * j;
        let filt = profile.level(j - g)?;
        for (m, r) in filt.iter() {
            table.add(i, m - 2 * (j - g), r);
            table.add(i - 1, m - 2 * (j - g) - 1, r);
        }
    }
    let lowest_asserted = if window_max_j >= 0 { top - p * window_max_j - 1 } else { top + 1 };
    Ok(StabilizedHfk { p, n, window_max_j, top, lowest_asserted, table })
}

// --- exterior point gradings ---------------------------------------------------

/// How consecutive exterior points are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// `x_{i-1} → x_i`, `i` odd: both gradings drop by 1.
    OddStep,
    /// `x_i → x_{i+1}`, `i` odd: `A` is unchanged, `A'` drops by `p - 1`.
    EvenStep,
    /// `C(k) → C(k-1)` at a fixed point: `A` drops by 1, `A'` by `p`.
    TupleStep,
}

impl StepRule {
    pub fn delta(self, p: i64) -> (i64, i64) {
        match self {
            StepRule::OddStep => (1, 1),
            StepRule::EvenStep => (0, p - 1),
            StepRule::TupleStep => (1, p),
        }
    }

    /// Every rule whose `(ΔA, ΔA')` equals the given drop.
    pub fn matching(delta_a: i64, delta_a_prime: i64, p: i64) -> Vec<StepRule> {
        [StepRule::OddStep, StepRule::EvenStep, StepRule::TupleStep]
            .into_iter()
            .filter(|r| r.delta(p) == (delta_a, delta_a_prime))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingRow {
    /// Index `i` of the point `x_i`.
    pub point: i64,
    /// `k` in `C(k)`: the companion's Alexander grading of the tuple.
    pub column: i64,
    #[serde(rename = "A")]
    pub alexander: i64,
    #[serde(rename = "A_prime")]
    pub cable_alexander: i64,
}

/// `(A, A')` bigradings of the exterior points `{x_i, y}`, `y ∈ C(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingTable {
    pub p: i64,
    pub n: i64,
    pub g: i64,
    pub g_prime: i64,
    pub rows: Vec<GradingRow>,
}

pub fn exterior_grading_table(p: i64, n: i64, g: i64) -> Result<GradingTable, CablingError> {
    if p < 2 || n < 1 || g < 0 {
        return Err(CablingError::InvalidParameters(format!(
            "grading table needs p >= 2, n >= 1, g >= 0; got p={p}, n={n}, g={g}"
        )));
    }
    let last = 2 * n * (p - 1);
    let mut rows = Vec::new();
    for k in (-g..=g).rev() {
        let mut a = k;
        let mut a_prime = p * k + twist_offset(p, n);
        for i in 0..=last {
            if i > 0 {
                let rule = if i % 2 == 1 { StepRule::OddStep } else { StepRule::EvenStep };
                let (da, dap) = rule.delta(p);
                a -= da;
                a_prime -= dap;
            }
            rows.push(GradingRow { point: i, column: k, alexander: a, cable_alexander: a_prime });
        }
    }
    Ok(GradingTable { p, n, g, g_prime: p * g + twist_offset(p, n), rows })
}

impl GradingTable {
    pub fn points(&self) -> i64 {
        2 * self.n * (self.p - 1) + 1
    }

    pub fn cell(&self, point: i64, column: i64) -> Option<&GradingRow> {
        self.rows.iter().find(|r| r.point == point && r.column == column)
    }

    pub fn outermost(&self) -> impl Iterator<Item = &GradingRow> {
        self.rows.iter().filter(|r| r.point == 0)
    }

    /// Adjacent cells with the rule that should relate them: down a column
    /// (`x_{i-1}`, `x_i`) and across columns (`C(k)`, `C(k-1)`).
    pub fn adjacent_pairs(&self) -> Vec<(GradingRow, GradingRow, StepRule)> {
        let mut out = Vec::new();
        for r in &self.rows {
            if let Some(next) = self.cell(r.point + 1, r.column) {
                let rule = if next.point % 2 == 1 { StepRule::OddStep } else { StepRule::EvenStep };
                out.push((*r, *next, rule));
            }
            if let Some(next) = self.cell(r.point, r.column - 1) {
                out.push((*r, *next, StepRule::TupleStep));
            }
        }
        out
    }

    pub fn max_cable_alexander(&self) -> Option<i64> {
        self.rows.iter().map(|r| r.cable_alexander).max()
    }

    /// Aligned text: one line per point `x_i`, one column per `C(k)`.
    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.points())
            .map(|i| {
                (-self.g..=self.g)
                    .rev()
                    .map(|k| {
                        let c = self.cell(i, k).expect("full table");
                        format!("({}, {})", c.alexander, c.cable_alexander)
                    })
                    .collect()
            })
            .collect();
        let headers: Vec<String> = (-self.g..=self.g).rev().map(|k| format!("C({k})")).collect();
        let width = cells.iter().flatten().chain(&headers).map(|s| s.chars().count()).max().unwrap_or(0);
        let label_width = format!("x{}", self.points() - 1).len();
        let mut out = format!("{:label_width$}", "");
        for h in &headers {
            out.push_str(&format!("  {h:>width$}"));
        }
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            out.push_str(&format!("{:<label_width$}", format!("x{i}")));
            for c in row {
                out.push_str(&format!("  {c:>width$}"));
            }
            out.push('\n');
        }
        out
    }
}

// --- τ as a function of n ------------------------------------------------------

/// `n ↦ τ(K_{p,pn+1})` over a contiguous window of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauProfile {
    pub p: i64,
    pub values: BTreeMap<i64, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileViolation {
    EmptyWindow,
    NotContiguous { missing: i64 },
    TauUnknown,
    OutsideBand { n: i64, value: i64, lower: i64, upper: i64 },
    StepOutOfRange { n: i64, step: i64, max: i64 },
    JumpLocusTooLarge { size: usize, max: i64 },
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyWindow => write!(f, "profile window is empty"),
            Self::NotContiguous { missing } => write!(f, "profile has no value at n = {missing}"),
            Self::TauUnknown => write!(f, "companion tau is unknown, band cannot be checked"),
            Self::OutsideBand { n, value, lower, upper } => {
                write!(f, "tau at n = {n} is {value}, outside [{lower}, {upper}]")
            }
            Self::StepOutOfRange { n, step, max } => {
                write!(f, "step from n = {n} to {} is {step}, outside [0, {max}]", n + 1)
            }
            Self::JumpLocusTooLarge { size, max } => {
                write!(f, "jump locus has {size} elements, more than {max}")
            }
        }
    }
}

impl TauProfile {
    /// Values forced by the exact branches of the τ bounds; fails on any `n`
    /// where τ is undetermined.
    pub fn from_formula(k: &KnotRecord, p: i64, window: RangeInclusive<i64>) -> Result<Self, CablingError> {
        let mut values = BTreeMap::new();
        for n in window {
            let iv = tau_cable_interval(k, p, n)?;
            let tau = iv
                .exact
                .ok_or_else(|| CablingError::Undetermined(format!("{} at p = {p}, n = {n}", k.name)))?;
            values.insert(n, tau);
        }
        Ok(Self { p, values })
    }

    /// `n ↦ τ(T(p, pn+1))` from the torus knot closed form.
    pub fn torus(p: i64, window: RangeInclusive<i64>) -> Result<Self, CablingError> {
        let mut values = BTreeMap::new();
        for n in window {
            let k = torus_knot_record(p, p * n + 1)
                .map_err(|e| CablingError::InvalidParameters(e.to_string()))?;
            values.insert(n, k.tau.expect("torus records carry tau"));
        }
        Ok(Self { p, values })
    }

    fn slope(&self) -> i64 {
        self.p * (self.p - 1) / 2
    }
}

/// `{n : τ(n) ≠ τ(n+1) - p(p-1)/2}` over pairs inside the window.
pub fn jump_locus(tp: &TauProfile) -> BTreeSet<i64> {
    tp.values
        .iter()
        .filter_map(|(&n, &tau)| {
            let next = *tp.values.get(&(n + 1))?;
            (tau != next - tp.slope()).then_some(n)
        })
        .collect()
}

pub fn validate_tau_profile(tp: &TauProfile, k: &KnotRecord) -> Vec<ProfileViolation> {
    let mut out = Vec::new();
    let (Some(&lo), Some(&hi)) = (tp.values.keys().next(), tp.values.keys().next_back()) else {
        return vec![ProfileViolation::EmptyWindow];
    };
    for n in lo..=hi {
        if !tp.values.contains_key(&n) {
            out.push(ProfileViolation::NotContiguous { missing: n });
        }
    }
    match k.tau {
        None => out.push(ProfileViolation::TauUnknown),
        Some(_) => {
            for (&n, &value) in &tp.values {
                match tau_cable_interval(k, tp.p, n) {
                    Ok(iv) if !iv.contains(value) => {
                        out.push(ProfileViolation::OutsideBand { n, value, lower: iv.lower, upper: iv.upper })
                    }
                    _ => {}
                }
            }
        }
    }
    let max = tp.slope();
    for (&n, &tau) in &tp.values {
        if let Some(&next) = tp.values.get(&(n + 1)) {
            let step = next - tau;
            if !(0..=max).contains(&step) {
                out.push(ProfileViolation::StepOutOfRange { n, step, max });
            }
        }
    }
    let size = jump_locus(tp).len();
    if size as i64 > tp.p - 1 {
        out.push(ProfileViolation::JumpLocusTooLarge { size, max: tp.p - 1 });
    }
    out
}

// --- derived records -----------------------------------------------------------

/// The invariants of `K_{p,q}` that can be certified from those of `K`:
/// genus and Δ always; τ, the L-space flag and Pos membership when one of the
/// cabling results pins them down; otherwise left unknown.
pub fn cable_record(k: &KnotRecord, cp: &CableParams) -> Result<KnotRecord, CablingError> {
    let genus = cable_genus(k, cp)?;
    let alexander = cable_alexander(k, cp)?;
    let name = format!("{}_({},{})", k.name, cp.p, cp.q);

    let certified = matches!(cable_lspace_certificate(k, cp), CableCertificate::Certified { .. });
    let tau = if certified {
        Some(genus)
    } else {
        match (cp.n, k.tau) {
            (Some(n), Some(_)) => tau_cable_interval(k, cp.p, n)?.exact,
            _ => None,
        }
    };
    let pos_member = match tau {
        Some(t) => Some(t == genus),
        None => match cp.n.map(|n| pos_membership_cable(k, cp.p, n)) {
            Some(PosMembership::InPos) => Some(true),
            Some(PosMembership::NotInPos) => Some(false),
            _ => None,
        },
    };
    let qp_fiber = match k.fibered {
        Some(true) => fiber_surface_complex_criterion(k, cp.q).ok(),
        _ => None,
    };
    let record = KnotRecord {
        name,
        genus,
        tau,
        alexander,
        lspace_knot: certified,
        pos_member,
        fibered: k.fibered,
        qp_fiber,
    };
    let violations = validate_record(&record);
    if !violations.is_empty() {
        let reason = violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(CablingError::InvalidDerivedRecord { name: record.name, reason });
    }
    Ok(record)
}

/// Applies [`cable_record`] for each `(p, q)` in turn.
pub fn iterated_cable_record(k: &KnotRecord, steps: &[(i64, i64)]) -> Result<KnotRecord, CablingError> {
    let mut current = k.clone();
    for &(p, q) in steps {
        current = cable_record(&current, &CableParams::new(p, q)?)?;
    }
    Ok(current)
}
