use std::fmt::Write as _;

use cablefloer::cabling::{GradingTable, TauInterval};
use cablefloer::filtration::HfkTable;
use cablefloer::knotdb::KnotRecord;
use cablefloer::laurent::LaurentPoly;
use cablefloer::obstructions::ObstructionReport;
use cablefloer::surgery::{CableCertificate, SurgeryDecomposition, SurgeryRankReport};
use cablefloer::verify::{CriterionOutcome, Suite};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct KnotListOutput {
    pub knots: Vec<KnotRecord>,
}

#[derive(Debug, Serialize)]
pub struct InvalidRecord {
    pub name: String,
    pub violations: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ValidateOutput {
    pub source: String,
    pub records: usize,
    pub invalid: Vec<InvalidRecord>,
}

#[derive(Debug, Serialize)]
pub struct AlexanderOutput {
    pub knot: String,
    pub cables: Vec<[i64; 2]>,
    pub alexander: LaurentPoly,
    pub rendered: String,
}

#[derive(Debug, Serialize)]
pub struct TauOutput {
    pub knot: String,
    pub cable: Option<[i64; 2]>,
    pub tau: Option<i64>,
    pub interval: Option<TauInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HfkSource {
    Staircase,
    ComplexFile,
    Stabilization,
}

#[derive(Debug, Serialize)]
pub struct HfkOutput {
    pub knot: Option<String>,
    pub cable: Option<[i64; 2]>,
    pub source: HfkSource,
    pub tau: Option<i64>,
    /// Set for stabilization output: nothing is claimed below this grading.
    pub lowest_asserted: Option<i64>,
    pub hfk: HfkTable,
}

#[derive(Debug, Serialize)]
pub struct SurgeryOutput {
    #[serde(flatten)]
    pub report: SurgeryRankReport,
    pub decomposition: Option<SurgeryDecomposition>,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub suite: Suite,
    pub passed: bool,
    pub outcomes: Vec<CriterionOutcome>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Payload {
    KnotList(KnotListOutput),
    Validate(ValidateOutput),
    Alexander(AlexanderOutput),
    Tau(TauOutput),
    Hfk(HfkOutput),
    Surgery(SurgeryOutput),
    Obstruct(ObstructionReport),
    Gradings(GradingTable),
    Verify(VerifyOutput),
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    InputError,
    ComputationRefused,
    VerificationFailed,
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<&'a Payload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn pair(c: Option<[i64; 2]>) -> String {
    c.map_or_else(|| "-".to_string(), |[p, q]| format!("({p},{q})"))
}

fn hfk_lines(out: &mut String, t: &HfkTable) {
    let _ = writeln!(out, "{:>6} {:>6} {:>5}", "A", "M", "rank");
    for e in t.entries() {
        let _ = writeln!(out, "{:>6} {:>6} {:>5}", e.alexander, e.maslov, e.rank);
    }
}

impl Payload {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        match self {
            Payload::KnotList(l) => {
                let w = l.knots.iter().map(|k| k.name.len()).max().unwrap_or(4).max(4);
                let _ = writeln!(
                    out,
                    "{:<w$}  {:>5}  {:>4}  {:<7}  {:<5}  alexander",
                    "name", "genus", "tau", "lspace", "pos"
                );
                for k in &l.knots {
                    let _ = writeln!(
                        out,
                        "{:<w$}  {:>5}  {:>4}  {:<7}  {:<5}  {}",
                        k.name,
                        k.genus,
                        opt(k.tau),
                        k.lspace_knot,
                        opt(k.pos_member),
                        k.alexander
                    );
                }
            }
            Payload::Validate(v) => {
                let _ = writeln!(out, "{}: {} record(s), all valid", v.source, v.records);
            }
            Payload::Alexander(a) => {
                let chain: String = a.cables.iter().map(|[p, q]| format!("_({p},{q})")).collect();
                let _ = writeln!(out, "{}{chain}: {}", a.knot, a.rendered);
            }
            Payload::Tau(t) => match &t.interval {
                None => {
                    let _ = writeln!(out, "tau({}) = {}", t.knot, opt(t.tau));
                }
                Some(iv) => {
                    let _ = writeln!(out, "tau({}{}) in [{}, {}]", t.knot, pair(t.cable), iv.lower, iv.upper);
                    let _ = writeln!(out, "exact: {}", opt(iv.exact));
                    let _ = writeln!(out, "reason: {:?}", iv.reason);
                }
            },
            Payload::Hfk(h) => {
                let _ = writeln!(
                    out,
                    "knot {} cable {} source {:?} tau {}",
                    h.knot.as_deref().unwrap_or("-"),
                    pair(h.cable),
                    h.source,
                    opt(h.tau)
                );
                if let Some(low) = h.lowest_asserted {
                    let _ = writeln!(out, "asserted for A >= {low} only");
                }
                hfk_lines(&mut out, &h.hfk);
            }
            Payload::Surgery(s) => {
                let r = &s.report;
                let _ = writeln!(
                    out,
                    "{} slope {}: rank {}, |H1| {}, L-space {}",
                    r.knot, r.slope, r.rank, r.h1_order, r.is_lspace
                );
                if let Some(d) = &s.decomposition {
                    let _ = writeln!(
                        out,
                        "{} {}: {} surgery = {}/{} on companion # lens space",
                        d.knot,
                        d.cable,
                        d.cable_slope,
                        d.cable.q(),
                        d.cable.p()
                    );
                    let _ = writeln!(
                        out,
                        "companion rank {} x lens rank {} = {}; direct {}",
                        d.companion.rank,
                        d.lens_rank,
                        d.product_rank,
                        opt(d.direct.map(|x| x.rank))
                    );
                }
            }
            Payload::Obstruct(o) => {
                let _ = writeln!(out, "{} cable ({},{}) n={}", o.knot, o.p, o.q, o.n);
                let _ = writeln!(out, "Pos: {:?}", o.pos_membership);
                match &o.lspace_certificate {
                    CableCertificate::Certified { threshold } => {
                        let _ = writeln!(out, "L-space cable: certified (q >= {threshold})");
                    }
                    CableCertificate::Refused { reasons } => {
                        let r: Vec<String> = reasons.iter().map(ToString::to_string).collect();
                        let _ = writeln!(out, "L-space cable: not certified ({})", r.join("; "));
                    }
                }
                let w = o.predicates.iter().map(|p| p.predicate.len()).max().unwrap_or(0);
                for p in &o.predicates {
                    let _ = writeln!(
                        out,
                        "{:<w$}  {:<15}  {}",
                        p.predicate,
                        p.verdict.to_string(),
                        p.substitution
                    );
                }
            }
            Payload::Gradings(g) => out.push_str(&g.render_text()),
            Payload::Verify(v) => {
                for o in &v.outcomes {
                    let _ = writeln!(out, "{o}");
                }
            }
        }
        out
    }
}
