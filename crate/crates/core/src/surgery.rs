//! Ranks of `HF-hat` for Dehn surgeries on L-space knots and on their cables.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cabling::{cable_genus, CableParams, CablingError};
use crate::knotdb::KnotRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("{0} is not an L-space knot")]
    NotLspaceKnot(String),
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error(
        "negative slope {slope} on {knot}: the rank formula only covers \
         positive slopes on a non-trivial L-space knot"
    )]
    NegativeSlope { knot: String, slope: Slope },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("rank overflows")]
    Overflow,
    #[error("surgery identity fails: direct rank {direct} != product rank {product}")]
    IdentityViolation { direct: u64, product: u64 },
    #[error(transparent)]
    Cabling(#[from] CablingError),
}

/// A surgery coefficient `q/p` in lowest terms with `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    num: i64,
    den: i64,
}

impl Slope {
    /// `q/p`. Both must be non-zero and coprime.
    pub fn new(q: i64, p: i64) -> Result<Self, SurgeryError> {
        if p == 0 {
            return Err(SurgeryError::InvalidSlope(format!("{q}/0 is the meridian")));
        }
        if q == 0 {
            return Err(SurgeryError::InvalidSlope("0 surgery is not a rational homology sphere".into()));
        }
        if q.gcd(&p) != 1 {
            return Err(SurgeryError::InvalidSlope(format!("{q}/{p} is not in lowest terms")));
        }
        let (q, p) = if p < 0 {
            (q.checked_neg().ok_or(SurgeryError::Overflow)?, p.checked_neg().ok_or(SurgeryError::Overflow)?)
        } else {
            (q, p)
        };
        Ok(Self { num: q, den: p })
    }

    pub fn integer(q: i64) -> Result<Self, SurgeryError> {
        Self::new(q, 1)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }

    /// `|H_1|` of the surgered manifold.
    pub fn h1_order(&self) -> u64 {
        self.num.unsigned_abs()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Slope {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurgeryError::InvalidSlope(format!("cannot parse {s:?}; expected q/p or q"));
        let s = s.trim();
        let (q, p) = match s.split_once('/') {
            Some((q, p)) => (q.trim().parse().map_err(|_| bad())?, p.trim().parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        Self::new(q, p)
    }
}

impl TryFrom<String> for Slope {
    type Error = SurgeryError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryRankReport {
    pub knot: String,
    pub slope: Slope,
    pub rank: u64,
    #[serde(rename = "h1")]
    pub h1_order: u64,
    #[serde(rename = "lspace")]
    pub is_lspace: bool,
}

/// `|q| + 2·max(0, (2g-1)|p| - |q|)`
pub fn lspace_knot_rank(genus: i64, p: i64, q: i64) -> Result<u64, SurgeryError> {
    let (g, p, q) = (genus as i128, p.unsigned_abs() as i128, q.unsigned_abs() as i128);
    let rank = q + 2 * ((2 * g - 1) * p - q).max(0);
    u64::try_from(rank).map_err(|_| SurgeryError::Overflow)
}

fn require_lspace(k: &KnotRecord) -> Result<(), SurgeryError> {
    if k.lspace_knot {
        Ok(())
    } else {
        Err(SurgeryError::NotLspaceKnot(k.name.clone()))
    }
}

/// Rank of `HF-hat(S^3_{q/p}(K))` for an L-space knot `K`.
pub fn surgery_rank_lspace_knot(k: &KnotRecord, p: i64, q: i64) -> Result<SurgeryRankReport, SurgeryError> {
    require_lspace(k)?;
    let slope = Slope::new(q, p)?;
    if slope.num < 0 && !k.is_unknot() {
        return Err(SurgeryError::NegativeSlope { knot: k.name.clone(), slope });
    }
    let rank = lspace_knot_rank(k.genus, slope.den, slope.num)?;
    let h1_order = slope.h1_order();
    Ok(SurgeryRankReport { knot: k.name.clone(), slope, rank, h1_order, is_lspace: rank == h1_order })
}

/// `2g(K) - 1`: every slope at or above it is an L-space surgery.
pub fn lspace_slope_threshold(k: &KnotRecord) -> Result<Ratio<i64>, SurgeryError> {
    require_lspace(k)?;
    Ok(Ratio::from_integer(2 * k.genus - 1))
}

/// Whether `S^3_{q/p}(K)` is an L-space. Every surgery on the unknot is a
/// lens space.
pub fn is_lspace_surgery_slope(k: &KnotRecord, q: i64, p: i64) -> Result<bool, SurgeryError> {
    let threshold = lspace_slope_threshold(k)?;
    let slope = Slope::new(q, p)?;
    Ok(k.is_unknot() || slope.as_ratio() >= threshold)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RefusalReason {
    CompanionNotLspace {
        knot: String,
    },
    BelowThreshold {
        q: i64,
        threshold: i64,
    },
    /// `T(p,q)` with `q < 1` has no positive L-space surgery to certify.
    UnknotNonPositive {
        q: i64,
    },
}

impl fmt::Display for RefusalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CompanionNotLspace { knot } => write!(f, "{knot} is not an L-space knot"),
            Self::BelowThreshold { q, threshold } => write!(f, "q = {q} < p(2g-1) = {threshold}"),
            Self::UnknotNonPositive { q } => write!(f, "unknot companion with q = {q} < 1"),
        }
    }
}

/// Outcome of asking whether `K_{p,q}` is an L-space knot. A refusal is not
/// a proof that it is not one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CableCertificate {
    Certified { threshold: i64 },
    Refused { reasons: Vec<RefusalReason> },
}

impl CableCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified { .. })
    }
}

pub fn cable_lspace_certificate(k: &KnotRecord, cp: &CableParams) -> CableCertificate {
    let (p, q) = (cp.p(), cp.q());
    let threshold = p * (2 * k.genus - 1);
    let mut reasons = Vec::new();
    if !k.lspace_knot {
        reasons.push(RefusalReason::CompanionNotLspace { knot: k.name.clone() });
    }
    if k.is_unknot() {
        if q < 1 {
            reasons.push(RefusalReason::UnknotNonPositive { q });
        }
    } else if q < threshold {
        reasons.push(RefusalReason::BelowThreshold { q, threshold });
    }
    if reasons.is_empty() {
        CableCertificate::Certified { threshold }
    } else {
        CableCertificate::Refused { reasons }
    }
}

/// Rank of `HF-hat(Y_1 # Y_2)`.
pub fn connected_sum_rank(r1: u64, r2: u64) -> Option<u64> {
    r1.checked_mul(r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectMethod {
    /// The cable is a certified L-space knot.
    CertifiedCable,
    /// Unknot companion, `q < 0`: `S^3_{pq}(T(p,q)) = -S^3_{-pq}(T(p,-q))`.
    MirroredTorusKnot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectRank {
    pub method: DirectMethod,
    pub genus: i64,
    pub rank: u64,
}

/// `S^3_{pq}(K_{p,q}) = S^3_{q/p}(K) # L(p,q)`, with both sides computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryDecomposition {
    pub knot: String,
    pub cable: CableParams,
    pub cable_slope: i64,
    pub companion: SurgeryRankReport,
    pub lens_rank: u64,
    pub product_rank: u64,
    pub direct: Option<DirectRank>,
}

pub fn cable_surgery_decomposition(
    k: &KnotRecord,
    cp: &CableParams,
) -> Result<SurgeryDecomposition, SurgeryError> {
    require_lspace(k)?;
    let (p, q) = (cp.p(), cp.q());
    if q < 1 && !k.is_unknot() {
        return Err(SurgeryError::InvalidParameters(format!(
            "decomposition needs q >= 1 for a non-trivial companion, got q = {q}"
        )));
    }
    let cable_slope = p.checked_mul(q).ok_or(SurgeryError::Overflow)?;
    let companion = surgery_rank_lspace_knot(k, p, q)?;
    let lens_rank = p as u64;
    let product_rank = connected_sum_rank(companion.rank, lens_rank).ok_or(SurgeryError::Overflow)?;

    let direct = if cable_lspace_certificate(k, cp).is_certified() {
        let genus = cable_genus(k, cp)?;
        let rank = lspace_knot_rank(genus, 1, cable_slope)?;
        Some(DirectRank { method: DirectMethod::CertifiedCable, genus, rank })
    } else if k.is_unknot() && q < -1 {
        let genus = (p - 1) * (-q - 1) / 2;
        let rank = lspace_knot_rank(genus, 1, -cable_slope)?;
        Some(DirectRank { method: DirectMethod::MirroredTorusKnot, genus, rank })
    } else if k.is_unknot() {
        // q = -1: the cable is the unknot itself
        let rank = lspace_knot_rank(0, 1, cable_slope)?;
        Some(DirectRank { method: DirectMethod::MirroredTorusKnot, genus: 0, rank })
    } else {
        None
    };
    if let Some(d) = direct {
        if d.rank != product_rank {
            return Err(SurgeryError::IdentityViolation { direct: d.rank, product: product_rank });
        }
    }
    Ok(SurgeryDecomposition {
        knot: k.name.clone(),
        cable: *cp,
        cable_slope,
        companion,
        lens_rank,
        product_rank,
        direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdb::{builtin_knots, lookup_knot, torus_knot_record};

    fn knot(name: &str) -> KnotRecord {
        lookup_knot(name, None).unwrap()
    }

    fn cp(p: i64, q: i64) -> CableParams {
        CableParams::new(p, q).unwrap()
    }

    #[test]
    fn slopes() {
        let s: Slope = "5/1".parse().unwrap();
        assert_eq!((s.num(), s.den()), (5, 1));
        let s: Slope = "3/-2".parse().unwrap();
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!("7".parse::<Slope>().unwrap(), Slope::integer(7).unwrap());
        assert!("4/2".parse::<Slope>().is_err());
        assert!("0".parse::<Slope>().is_err());
        assert!("1/0".parse::<Slope>().is_err());
        assert!("x/2".parse::<Slope>().is_err());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"-3/2\"");
        assert_eq!(serde_json::from_str::<Slope>(&json).unwrap(), s);
    }

    #[test]
    fn trefoil_ranks() {
        let t = knot("trefoil");
        let r = surgery_rank_lspace_knot(&t, 1, 5).unwrap();
        assert_eq!((r.rank, r.h1_order, r.is_lspace), (5, 5, true));
        let r = surgery_rank_lspace_knot(&t, 2, 1).unwrap();
        assert_eq!((r.rank, r.is_lspace), (3, false));
        let r = surgery_rank_lspace_knot(&t, 1, 1).unwrap();
        assert_eq!((r.rank, r.is_lspace), (1, true));
        assert!(matches!(surgery_rank_lspace_knot(&t, 1, -1), Err(SurgeryError::NegativeSlope { .. })));
        assert!(matches!(
            surgery_rank_lspace_knot(&knot("figure-eight"), 1, 5),
            Err(SurgeryError::NotLspaceKnot(_))
        ));
        let u = surgery_rank_lspace_knot(&knot("unknot"), 3, -7).unwrap();
        assert_eq!((u.rank, u.is_lspace), (7, true));
    }

    #[test]
    fn thresholds() {
        let t = knot("trefoil");
        assert_eq!(lspace_slope_threshold(&t).unwrap(), Ratio::from_integer(1));
        assert!(is_lspace_surgery_slope(&t, 5, 1).unwrap());
        assert!(!is_lspace_surgery_slope(&t, 1, 2).unwrap());
        assert!(!is_lspace_surgery_slope(&t, -3, 1).unwrap());
        for (q, p) in [(1, 1), (5, 3), (2, 7), (-4, 1)] {
            assert!(is_lspace_surgery_slope(&knot("unknot"), q, p).unwrap());
        }
        assert!(is_lspace_surgery_slope(&knot("figure-eight"), 5, 1).is_err());
    }

    #[test]
    fn slope_criterion_agrees_with_rank() {
        for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
            for p in 1..=6i64 {
                for q in 1..=30i64 {
                    if q.gcd(&p) != 1 {
                        continue;
                    }
                    let rank = surgery_rank_lspace_knot(k, p, q).unwrap().rank;
                    assert_eq!(
                        is_lspace_surgery_slope(k, q, p).unwrap(),
                        rank == q as u64,
                        "{} {q}/{p}",
                        k.name
                    );
                }
            }
        }
    }

    #[test]
    fn certificates() {
        assert!(cable_lspace_certificate(&knot("trefoil"), &cp(2, 3)).is_certified());
        assert_eq!(
            cable_lspace_certificate(&knot("trefoil"), &cp(2, 1)),
            CableCertificate::Refused { reasons: vec![RefusalReason::BelowThreshold { q: 1, threshold: 2 }] }
        );
        let CableCertificate::Refused { reasons } =
            cable_lspace_certificate(&knot("figure-eight"), &cp(2, 5))
        else {
            panic!("figure-eight cable certified");
        };
        assert_eq!(reasons[0], RefusalReason::CompanionNotLspace { knot: "figure-eight".into() });
        assert!(cable_lspace_certificate(&knot("unknot"), &cp(3, 1)).is_certified());
        assert!(!cable_lspace_certificate(&knot("unknot"), &cp(3, -2)).is_certified());
    }

    #[test]
    fn decomposition_examples() {
        let d = cable_surgery_decomposition(&knot("trefoil"), &cp(2, 3)).unwrap();
        assert_eq!((d.companion.rank, d.lens_rank, d.product_rank), (3, 2, 6));
        assert_eq!(d.direct, Some(DirectRank { method: DirectMethod::CertifiedCable, genus: 3, rank: 6 }));

        let d = cable_surgery_decomposition(&knot("trefoil"), &cp(2, 7)).unwrap();
        assert_eq!((d.product_rank, d.direct.unwrap().rank), (14, 14));

        let d = cable_surgery_decomposition(&knot("trefoil"), &cp(2, 1)).unwrap();
        assert_eq!((d.product_rank, d.direct), (6, None));

        for (p, q) in [(2, 5), (3, -2), (4, -1), (5, 3)] {
            let d = cable_surgery_decomposition(&knot("unknot"), &cp(p, q)).unwrap();
            assert_eq!(d.direct.unwrap().rank, (p * q).unsigned_abs());
            assert_eq!(d.product_rank, (p * q).unsigned_abs());
        }
        assert!(cable_surgery_decomposition(&knot("trefoil"), &cp(2, -1)).is_err());
        assert!(cable_surgery_decomposition(&knot("figure-eight"), &cp(2, 5)).is_err());
    }

    #[test]
    fn mirrored_torus_side_matches_direct_torus_record() {
        // the direct rank for q < 0 uses the genus of T(p,|q|)
        for (p, q) in [(2, -3), (3, -4), (3, -5)] {
            let d = cable_surgery_decomposition(&knot("unknot"), &cp(p, q)).unwrap();
            let t = torus_knot_record(p, -q).unwrap();
            assert_eq!(d.direct.unwrap().genus, t.genus);
        }
    }

    #[test]
    fn connected_sums() {
        assert_eq!(connected_sum_rank(3, 2), Some(6));
        assert_eq!(connected_sum_rank(1, 9), Some(9));
        assert_eq!(connected_sum_rank(5, 5), Some(25));
        assert_eq!(connected_sum_rank(u64::MAX, 2), None);
    }
}
