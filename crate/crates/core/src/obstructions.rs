//! One-directional obstructions for `(p, pn+1)` cables.
//!
//! An `Obstructed` verdict proves the cable lacks the property in question.
//! `NotObstructed` proves nothing; it only says this inequality is satisfied.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cabling::{tau_cable_interval, CableParams, CablingError};
use crate::knotdb::{lookup_knot, KnotRecord};
use crate::surgery::{cable_lspace_certificate, CableCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("tau({0}) is unknown")]
    TauUnknown(String),
    #[error("Pos membership of {0} is unknown")]
    PosUnknown(String),
    #[error("fibered or quasipositive-fiber flag of {0} is unknown")]
    FlagsUnknown(String),
    #[error("{0} is not fibered")]
    NotFibered(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Cabling(#[from] CablingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "obstructed",
            Verdict::NotObstructed => "not-obstructed",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

const NOT_OBSTRUCTED_NOTE: &str = "the necessary condition holds; the property itself is not asserted";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub predicate: String,
    pub verdict: Verdict,
    /// The necessary condition, symbolically.
    pub inequality: String,
    /// The same condition with this knot's numbers in it.
    pub substitution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PredicateReport {
    fn new(predicate: &str, holds: bool, inequality: &str, substitution: String) -> Self {
        let verdict = if holds { Verdict::NotObstructed } else { Verdict::Obstructed };
        Self {
            predicate: predicate.into(),
            verdict,
            inequality: inequality.into(),
            substitution,
            note: holds.then(|| NOT_OBSTRUCTED_NOTE.to_string()),
        }
    }

    fn inapplicable(predicate: &str, inequality: &str, reason: String) -> Self {
        Self {
            predicate: predicate.into(),
            verdict: Verdict::Inapplicable,
            inequality: inequality.into(),
            substitution: String::new(),
            note: Some(reason),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosMembership {
    InPos,
    NotInPos,
    Unknown,
}

fn check_p(p: i64) -> Result<(), ObstructionError> {
    if p < 2 {
        return Err(ObstructionError::InvalidParameters(format!("p must be >= 2, got {p}")));
    }
    Ok(())
}

fn known_tau(k: &KnotRecord) -> Result<i64, ObstructionError> {
    k.tau.ok_or_else(|| ObstructionError::TauUnknown(k.name.clone()))
}

/// For the unknot the cable is `T(p, pn+1)`. It has `τ = g` exactly when
/// `n >= 0` or it is itself the unknot (`p = 2, n = -1`).
fn unknot_cable_is_positive(p: i64, n: i64) -> bool {
    n >= 0 || p * n + 1 == -1
}

/// Whether `K_{p,pn+1}` has `τ = g`.
pub fn pos_membership_cable(k: &KnotRecord, p: i64, n: i64) -> PosMembership {
    if k.is_unknot() {
        return if unknot_cable_is_positive(p, n) { PosMembership::InPos } else { PosMembership::NotInPos };
    }
    match k.pos_member {
        Some(true) if n >= 0 => PosMembership::InPos,
        Some(_) => PosMembership::NotInPos,
        None => PosMembership::Unknown,
    }
}

/// `-2(τ/(p-1) + 1/p)`
pub fn cknot_threshold(tau: i64, p: i64) -> Ratio<i64> {
    Ratio::from_integer(-2) * (Ratio::new(tau, p - 1) + Ratio::new(1, p))
}

fn cknot_bound(predicate: &str, k: &KnotRecord, p: i64, n: i64) -> Result<PredicateReport, ObstructionError> {
    check_p(p)?;
    let tau = known_tau(k)?;
    let bound = cknot_threshold(tau, p);
    Ok(PredicateReport::new(
        predicate,
        Ratio::from_integer(n) >= bound,
        "n >= -2(tau/(p-1) + 1/p)",
        format!("{n} >= -2({tau}/{} + 1/{p}) = {bound}", p - 1),
    ))
}

/// Whether `K_{p,pn+1}` can be a transverse `C`-knot.
pub fn obstruct_cknot(k: &KnotRecord, p: i64, n: i64) -> Result<PredicateReport, ObstructionError> {
    cknot_bound("c-knot", k, p, n)
}

/// Whether `K_{p,pn+1}` can be the closure of a quasipositive braid.
pub fn obstruct_quasipositive(k: &KnotRecord, p: i64, n: i64) -> Result<PredicateReport, ObstructionError> {
    cknot_bound("quasipositive", k, p, n)
}

fn genus_condition(
    predicate: &str,
    k: &KnotRecord,
    p: i64,
    n: i64,
) -> Result<PredicateReport, ObstructionError> {
    check_p(p)?;
    let tau = known_tau(k)?;
    if k.is_unknot() {
        let q = p * n + 1;
        return Ok(PredicateReport::new(
            predicate,
            unknot_cable_is_positive(p, n),
            "T(p,pn+1) is a positive torus knot or the unknot",
            format!("T({p},{q})"),
        ));
    }
    Ok(PredicateReport::new(
        predicate,
        n >= 0 && tau == k.genus,
        "n >= 0 and tau(K) = g(K)",
        format!("{n} >= 0 and {tau} = {}", k.genus),
    ))
}

/// Whether `K_{p,pn+1}` can be a `C`-knot whose piece of complex curve has
/// genus `g(K_{p,pn+1})`.
pub fn obstruct_cknot_seifert_genus(
    k: &KnotRecord,
    p: i64,
    n: i64,
) -> Result<PredicateReport, ObstructionError> {
    genus_condition("c-knot-seifert-genus", k, p, n)
}

/// Whether positive surgery on `K_{p,pn+1}` can be an L-space.
pub fn obstruct_lspace_surgery(k: &KnotRecord, p: i64, n: i64) -> Result<PredicateReport, ObstructionError> {
    genus_condition("lspace-surgery", k, p, n)
}

/// Whether `K_{p,pn+1}` can be a positive knot.
pub fn obstruct_positive(k: &KnotRecord, p: i64, n: i64) -> Result<PredicateReport, ObstructionError> {
    check_p(p)?;
    let pos = k.pos_member.ok_or_else(|| ObstructionError::PosUnknown(k.name.clone()))?;
    Ok(PredicateReport::new(
        "positive",
        pos,
        "K in Pos",
        format!(
            "K = {}, tau = {}, g = {}; the condition does not depend on n = {n}",
            k.name,
            k.tau.map_or("?".into(), |t| t.to_string()),
            k.genus
        ),
    ))
}

/// Whether `K_{p,q}` has a Seifert surface isotopic to a piece of a complex
/// curve, for fibered `K`.
pub fn fiber_surface_complex_criterion(k: &KnotRecord, q: i64) -> Result<bool, ObstructionError> {
    match (k.fibered, k.qp_fiber) {
        (Some(false), _) => Err(ObstructionError::NotFibered(k.name.clone())),
        (Some(true), Some(qp)) => Ok(qp && q > 0),
        _ => Err(ObstructionError::FlagsUnknown(k.name.clone())),
    }
}

fn fiber_surface_report(k: &KnotRecord, q: i64) -> PredicateReport {
    let inequality = "K's fiber is a piece of a complex curve and q > 0";
    match fiber_surface_complex_criterion(k, q) {
        Ok(holds) => {
            let mut r = PredicateReport::new(
                "complex-fiber-surface",
                holds,
                inequality,
                format!("qp_fiber = {} and {q} > 0", k.qp_fiber.unwrap_or(false)),
            );
            // this criterion is an equivalence, so a pass does assert the property
            r.note = holds.then(|| "equivalence: the cable's fiber is a piece of a complex curve".into());
            r
        }
        Err(e) => PredicateReport::inapplicable("complex-fiber-surface", inequality, e.to_string()),
    }
}

/// `τ^p(K_1 # K_2, 1)` against `τ^p(K_1, 1) + τ^p(K_2, 1)` for the two trefoils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcordanceDemo {
    pub p: i64,
    /// `K_1 # K_2` is slice, so this is computed on the unknot.
    pub tau_sum_cable: i64,
    pub tau_k1_cable: i64,
    pub tau_k2_cable: i64,
    pub additive_prediction: i64,
    pub not_homomorphism: bool,
}

pub fn concordance_demo(p: i64) -> Result<ConcordanceDemo, ObstructionError> {
    check_p(p)?;
    let exact = |name: &str| -> Result<i64, ObstructionError> {
        let k = lookup_knot(name, None).expect("builtin knot");
        let iv = tau_cable_interval(&k, p, 0)?;
        Ok(iv.exact.expect("trefoils and unknot have tau = ±g"))
    };
    let tau_sum_cable = exact("unknot")?;
    let tau_k1_cable = exact("right-trefoil")?;
    let tau_k2_cable = exact("left-trefoil")?;
    let additive_prediction = tau_k1_cable + tau_k2_cable;
    Ok(ConcordanceDemo {
        p,
        tau_sum_cable,
        tau_k1_cable,
        tau_k2_cable,
        additive_prediction,
        not_homomorphism: tau_sum_cable != additive_prediction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub knot: String,
    pub p: i64,
    pub n: i64,
    pub q: i64,
    pub pos_membership: PosMembership,
    pub lspace_certificate: CableCertificate,
    pub predicates: Vec<PredicateReport>,
}

impl ObstructionReport {
    pub fn verdict(&self, predicate: &str) -> Option<Verdict> {
        self.predicates.iter().find(|r| r.predicate == predicate).map(|r| r.verdict)
    }
}

/// Every predicate for `K_{p,pn+1}`. Missing inputs make a predicate
/// inapplicable rather than failing the report.
pub fn obstruction_report(k: &KnotRecord, p: i64, n: i64) -> Result<ObstructionReport, ObstructionError> {
    let cp = CableParams::from_n(p, n)?;
    type Check = fn(&KnotRecord, i64, i64) -> Result<PredicateReport, ObstructionError>;
    let checks: [(&str, &str, Check); 5] = [
        ("c-knot", "n >= -2(tau/(p-1) + 1/p)", obstruct_cknot),
        ("quasipositive", "n >= -2(tau/(p-1) + 1/p)", obstruct_quasipositive),
        ("c-knot-seifert-genus", "n >= 0 and tau(K) = g(K)", obstruct_cknot_seifert_genus),
        ("lspace-surgery", "n >= 0 and tau(K) = g(K)", obstruct_lspace_surgery),
        ("positive", "K in Pos", obstruct_positive),
    ];
    let mut predicates: Vec<PredicateReport> = checks
        .iter()
        .map(|(name, inequality, f)| {
            f(k, p, n).unwrap_or_else(|e| PredicateReport::inapplicable(name, inequality, e.to_string()))
        })
        .collect();
    predicates.push(fiber_surface_report(k, cp.q()));
    Ok(ObstructionReport {
        knot: k.name.clone(),
        p,
        n,
        q: cp.q(),
        pos_membership: pos_membership_cable(k, p, n),
        lspace_certificate: cable_lspace_certificate(k, &cp),
        predicates,
    })
}
