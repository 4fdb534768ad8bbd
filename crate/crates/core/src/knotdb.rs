//! Knot records: the certified invariants every cabling computation starts from.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{torus_alexander, LaurentError, LaurentPoly};

/// Invariants of a knot in S³.
///
/// `tau` and `pos_member` are optional because cabling results sometimes only
/// bound τ. `fibered` and `qp_fiber` (a Seifert surface isotopic to a piece of
/// a complex curve) are only consulted by the fiber-surface criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub genus: i64,
    pub tau: Option<i64>,
    pub alexander: LaurentPoly,
    pub lspace_knot: bool,
    pub pos_member: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibered: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qp_fiber: Option<bool>,
}

impl KnotRecord {
    pub fn is_unknot(&self) -> bool {
        self.genus == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyName,
    NegativeGenus(i64),
    TauExceedsGenus { tau: i64, genus: i64 },
    ZeroAlexander,
    AlexanderAsymmetric,
    AlexanderNotNormalized(i64),
    AlexanderDegreeExceedsGenus { degree: i64, genus: i64 },
    LspaceCoefficients,
    LspaceTauNotGenus { tau: Option<i64>, genus: i64 },
    LspaceNotPos,
    PosTauNotGenus { tau: Option<i64>, genus: i64 },
    NotPosButTauIsGenus,
    Arithmetic(LaurentError),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyName => write!(f, "name is empty"),
            NegativeGenus(g) => write!(f, "genus {g} is negative"),
            TauExceedsGenus { tau, genus } => {
                write!(f, "|tau| <= genus violated: |{tau}| > {genus}")
            }
            ZeroAlexander => write!(f, "Alexander polynomial is zero"),
            AlexanderAsymmetric => write!(f, "Alexander polynomial is not symmetric"),
            AlexanderNotNormalized(v) => {
                write!(f, "Alexander polynomial evaluates to {v} at t = 1, expected 1")
            }
            AlexanderDegreeExceedsGenus { degree, genus } => {
                write!(f, "Alexander degree {degree} exceeds genus {genus}")
            }
            LspaceCoefficients => {
                write!(f, "lspace_knot requires Alexander coefficients alternating +1, -1, ..., +1")
            }
            LspaceTauNotGenus { tau, genus } => {
                write!(f, "lspace_knot requires tau = genus ({genus}), tau is {}", show(tau))
            }
            LspaceNotPos => write!(f, "lspace_knot requires pos_member = true"),
            PosTauNotGenus { tau, genus } => {
                write!(f, "pos_member requires tau = genus ({genus}), tau is {}", show(tau))
            }
            NotPosButTauIsGenus => write!(f, "pos_member = false requires tau != genus"),
            Arithmetic(e) => write!(f, "{e}"),
        }
    }
}

fn show(tau: &Option<i64>) -> String {
    tau.map_or_else(|| "unknown".to_string(), |t| t.to_string())
}

/// Every violated record invariant; empty means valid.
pub fn validate_record(k: &KnotRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    if k.name.trim().is_empty() {
        out.push(Violation::EmptyName);
    }
    if k.genus < 0 {
        out.push(Violation::NegativeGenus(k.genus));
    }
    if let Some(tau) = k.tau {
        if tau.abs() > k.genus {
            out.push(Violation::TauExceedsGenus { tau, genus: k.genus });
        }
    }

    let delta = &k.alexander;
    let mut delta_ok = true;
    if delta.is_zero() {
        out.push(Violation::ZeroAlexander);
        delta_ok = false;
    } else {
        if !delta.is_symmetric() {
            out.push(Violation::AlexanderAsymmetric);
            delta_ok = false;
        }
        match delta.eval_at_one() {
            Ok(1) => {}
            Ok(v) => {
                out.push(Violation::AlexanderNotNormalized(v));
                delta_ok = false;
            }
            Err(e) => {
                out.push(Violation::Arithmetic(e));
                delta_ok = false;
            }
        }
        if let Some(d) = delta.top_degree() {
            if d > k.genus {
                out.push(Violation::AlexanderDegreeExceedsGenus { degree: d, genus: k.genus });
            }
        }
    }

    if k.lspace_knot {
        if delta_ok && !matches!(delta.coeffs_alternating_pm1(), Ok(true)) {
            out.push(Violation::LspaceCoefficients);
        }
        if k.tau != Some(k.genus) {
            out.push(Violation::LspaceTauNotGenus { tau: k.tau, genus: k.genus });
        }
        if k.pos_member == Some(false) {
            out.push(Violation::LspaceNotPos);
        }
    }
    match k.pos_member {
        Some(true) if k.tau != Some(k.genus) => {
            out.push(Violation::PosTauNotGenus { tau: k.tau, genus: k.genus })
        }
        Some(false) if k.tau == Some(k.genus) => out.push(Violation::NotPosButTauIsGenus),
        _ => {}
    }
    out
}

#[derive(Debug, Error)]
pub enum KnotDbError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid record {name:?}: {}", join(.violations))]
    Validation { name: String, violations: Vec<Violation> },
    #[error("duplicate knot name {0:?}")]
    DuplicateName(String),
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotTable {
    knots: Vec<KnotRecord>,
}

/// Parses `{"knots": [...]}`, validating every record and rejecting repeated names.
pub fn load_knot_table<R: Read>(mut source: R) -> Result<Vec<KnotRecord>, KnotDbError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let table: KnotTable = serde_json::from_str(&text).map_err(|e| KnotDbError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = HashSet::new();
    for k in &table.knots {
        if !seen.insert(k.name.clone()) {
            return Err(KnotDbError::DuplicateName(k.name.clone()));
        }
        let violations = validate_record(k);
        if !violations.is_empty() {
            return Err(KnotDbError::Validation { name: k.name.clone(), violations });
        }
    }
    Ok(table.knots)
}

pub fn serialize_knot_table(knots: &[KnotRecord]) -> String {
    let table = KnotTable { knots: knots.to_vec() };
    serde_json::to_string_pretty(&table).expect("knot records always serialize")
}

/// Record for the `(p, q)` torus knot. Negative `q` gives the mirror of `T(p, |q|)`.
pub fn torus_knot_record(p: i64, q: i64) -> Result<KnotRecord, KnotDbError> {
    if p < 1 || p.gcd(&q) != 1 {
        return Err(KnotDbError::InvalidParameters(format!("T({p},{q}) needs p >= 1 and gcd(p, |q|) = 1")));
    }
    let alexander = torus_alexander(p, q).map_err(|e| KnotDbError::InvalidParameters(e.to_string()))?;
    let genus = (p - 1) * (q.abs() - 1) / 2;
    let tau = if q > 0 { genus } else { -genus };
    let positive = q > 0 || genus == 0;
    Ok(KnotRecord {
        name: format!("T({p},{q})"),
        genus,
        tau: Some(tau),
        alexander,
        lspace_knot: positive,
        pos_member: Some(positive),
        fibered: Some(true),
        qp_fiber: Some(positive),
    })
}

/// Seed atlas: unknot, both trefoils, figure-eight, and two more positive
/// torus knots.
pub fn builtin_knots() -> Vec<KnotRecord> {
    let named = |p, q, name: &str| {
        let mut k = torus_knot_record(p, q).expect("builtin torus parameters are coprime");
        k.name = name.to_string();
        k
    };
    let figure_eight = KnotRecord {
        name: "figure-eight".into(),
        genus: 1,
        tau: Some(0),
        alexander: LaurentPoly::from_terms([(1, -1), (0, 3), (-1, -1)]),
        lspace_knot: false,
        pos_member: Some(false),
        fibered: Some(true),
        qp_fiber: Some(false),
    };
    vec![
        named(2, 1, "unknot"),
        named(2, 3, "right-trefoil"),
        named(2, -3, "left-trefoil"),
        figure_eight,
        named(2, 5, "T(2,5)"),
        named(3, 4, "T(3,4)"),
    ]
}

fn canonical_name(name: &str) -> &str {
    match name {
        "trefoil" | "rh-trefoil" | "3_1" => "right-trefoil",
        "lh-trefoil" => "left-trefoil",
        "figure8" | "figure-8" | "4_1" => "figure-eight",
        "U" | "0_1" => "unknot",
        other => other,
    }
}

/// Resolves `name` against `table` (or the builtin atlas when `table` is
/// `None`). Names of the form `T(p,q)` always resolve to the torus knot.
pub fn lookup_knot(name: &str, table: Option<&[KnotRecord]>) -> Result<KnotRecord, KnotDbError> {
    let builtin;
    let knots = match table {
        Some(t) => t,
        None => {
            builtin = builtin_knots();
            &builtin
        }
    };
    let canonical = canonical_name(name.trim());
    if let Some(k) = knots.iter().find(|k| k.name == name || k.name == canonical) {
        return Ok(k.clone());
    }
    if let Some((p, q)) = parse_torus_name(canonical) {
        return torus_knot_record(p, q);
    }
    Err(KnotDbError::UnknownKnot(name.to_string()))
}

fn parse_torus_name(s: &str) -> Option<(i64, i64)> {
    let inner = s.strip_prefix("T(")?.strip_suffix(')')?;
    let (p, q) = inner.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}
