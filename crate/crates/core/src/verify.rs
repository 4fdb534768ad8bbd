//! Self-verification: each criterion recomputes a published value or an
//! identity from scratch and compares with exact equality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cabling::{
    cable_alexander, exterior_grading_table, filtered_homology_cable_stabilized, hfk_cable_stabilized,
    jump_locus, tau_cable_interval, twist_offset, validate_tau_profile, CableParams, FilteredHomologyProfile,
    StepRule, TauProfile,
};
use crate::filtration::{staircase_complex_with, FilteredComplex, GradedRanks, StaircaseRule};
use crate::knotdb::{builtin_knots, lookup_knot, KnotRecord};
use crate::laurent::{torus_alexander, LaurentPoly};
use crate::obstructions::concordance_demo;
use crate::surgery::{cable_lspace_certificate, cable_surgery_decomposition, surgery_rank_lspace_knot};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyConfig {
    pub staircase_rule: StaircaseRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Alexander,
    Staircase,
    Tau,
    Stabilization,
    Surgery,
    Gradings,
}

impl Suite {
    pub const NAMES: [&'static str; 7] =
        ["all", "alexander", "staircase", "tau", "stabilization", "surgery", "gradings"];

    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            Suite::Alexander => &[1],
            Suite::Staircase => &[2, 3],
            Suite::Tau => &[4, 8, 9],
            Suite::Stabilization => &[5, 6],
            Suite::Surgery => &[7],
            Suite::Gradings => &[10],
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Suite::All,
            "alexander" => Suite::Alexander,
            "staircase" => Suite::Staircase,
            "tau" => Suite::Tau,
            "stabilization" => Suite::Stabilization,
            "surgery" => Suite::Surgery,
            "gradings" => Suite::Gradings,
            other => {
                return Err(format!("unknown suite {other:?}; expected one of {}", Suite::NAMES.join(", ")))
            }
        })
    }
}

pub const TITLES: [&str; 10] = [
    "cable Alexander polynomial of the (2,3)-cable of the trefoil",
    "(2,3)-cable of the trefoil and T(3,4) have equal knot Floer homology",
    "staircase normalization",
    "exact tau branches",
    "filtered stabilization",
    "knot Floer homology of large-n cables",
    "surgery rank identity",
    "jump locus",
    "cabling is not a concordance homomorphism",
    "exterior grading table",
];

type Check = Result<String, String>;

pub fn run_criterion(id: u8, config: &VerifyConfig) -> CriterionOutcome {
    let result = match id {
        1 => criterion_1(),
        2 => criterion_2(config),
        3 => criterion_3(config),
        4 => criterion_4(config),
        5 => criterion_5(config),
        6 => criterion_6(config),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => Err(format!("no criterion {id}")),
    };
    let title = TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown").to_string();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionOutcome { id, title, passed, detail }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Vec<CriterionOutcome> {
    suite.criteria().iter().map(|&id| run_criterion(id, config)).collect()
}

fn knot(name: &str) -> KnotRecord {
    lookup_knot(name, None).expect("builtin knot")
}

fn staircase(delta: &LaurentPoly, config: &VerifyConfig) -> Result<FilteredComplex, String> {
    staircase_complex_with(delta, config.staircase_rule).map_err(|e| format!("staircase of {delta}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    let cable = cable_alexander(&knot("right-trefoil"), &CableParams::new(2, 3).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let expected = LaurentPoly::from_terms([(3, 1), (2, -1), (0, 1), (-2, -1), (-3, 1)]);
    let torus = torus_alexander(3, 4).map_err(|e| e.to_string())?;
    ensure(cable == expected, || format!("got {cable}, expected {expected}"))?;
    ensure(cable == torus, || format!("cable {cable} differs from T(3,4) {torus}"))?;
    Ok(format!("{cable} = Δ_T(3,4)"))
}

fn criterion_2(config: &VerifyConfig) -> Check {
    let cable = cable_alexander(&knot("right-trefoil"), &CableParams::new(2, 3).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let a = staircase(&cable, config)?.associated_graded_hfk();
    let b = staircase(&torus_alexander(3, 4).map_err(|e| e.to_string())?, config)?.associated_graded_hfk();
    ensure(a == b, || format!("HFK differs: {:?} vs {:?}", a.entries(), b.entries()))?;
    Ok(format!("{} generators, equal entrywise", a.total()))
}

fn stabilization_grid() -> impl Iterator<Item = (i64, i64)> {
    [2i64, 3].into_iter().flat_map(|p| [3i64, 4, 5].into_iter().map(move |n| (p, n)))
}

fn check_normalized(name: &str, delta: &LaurentPoly, config: &VerifyConfig) -> Result<(), String> {
    let c = staircase(delta, config)?;
    let h = c.homology();
    let unit = GradedRanks::from_pairs([(0, 1)]);
    ensure(h == unit, || format!("{name}: H_* = {h}, expected F(0)"))?;
    let tau = c.tau().map_err(|e| format!("{name}: {e}"))?;
    let top = delta.top_degree().unwrap_or(0);
    ensure(tau == top, || format!("{name}: tau {tau} != top degree {top}"))
}

fn criterion_3(config: &VerifyConfig) -> Check {
    let mut count = 0;
    for p in 2..=5i64 {
        for q in (p + 1)..=13 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let delta = torus_alexander(p, q).map_err(|e| e.to_string())?;
            check_normalized(&format!("T({p},{q})"), &delta, config)?;
            count += 1;
        }
    }
    let k = knot("right-trefoil");
    for (p, n) in stabilization_grid() {
        let cp = CableParams::from_n(p, n).map_err(|e| e.to_string())?;
        ensure(cable_lspace_certificate(&k, &cp).is_certified(), || format!("cable {cp} not certified"))?;
        let delta = cable_alexander(&k, &cp).map_err(|e| e.to_string())?;
        check_normalized(&format!("trefoil {cp}"), &delta, config)?;
        count += 1;
    }
    Ok(format!("{count} complexes with H_* = F(0) and tau = top degree"))
}

fn criterion_4(config: &VerifyConfig) -> Check {
    let k = knot("right-trefoil");
    let mut rows = Vec::new();
    for n in 0..=5i64 {
        let expected = 2 + n;
        let formula = tau_cable_interval(&k, 2, n).map_err(|e| e.to_string())?.exact;
        ensure(formula == Some(expected), || format!("n={n}: formula {formula:?}, expected {expected}"))?;
        let cp = CableParams::from_n(2, n).map_err(|e| e.to_string())?;
        let certified = cable_lspace_certificate(&k, &cp).is_certified();
        let delta = cable_alexander(&k, &cp).map_err(|e| e.to_string())?;
        let oracle = staircase(&delta, config)?.tau().map_err(|e| e.to_string())?;
        ensure(oracle == expected, || format!("n={n}: staircase tau {oracle}, expected {expected}"))?;
        rows.push(if certified { format!("{expected}") } else { format!("{expected} (uncertified model)") });
    }
    let left = tau_cable_interval(&knot("left-trefoil"), 2, 0).map_err(|e| e.to_string())?.exact;
    ensure(left == Some(-1), || format!("left trefoil (2,1): {left:?}, expected -1"))?;
    Ok(format!("right trefoil n=0..5: [{}]; left trefoil (2,1): -1", rows.join(", ")))
}

fn trefoil_profile(config: &VerifyConfig) -> Result<FilteredHomologyProfile, String> {
    let k = knot("right-trefoil");
    let c = staircase(&k.alexander, config)?;
    FilteredHomologyProfile::from_complex(&c, k.genus).map_err(|e| e.to_string())
}

/// Largest `j` with the identity holding on all of `start..=j`, and the
/// smallest `j` with it holding on all of `j..=stop`.
fn contiguous_extent(start: i64, stop: i64, holds: impl Fn(i64) -> bool) -> (Option<i64>, Option<i64>) {
    let ok: Vec<bool> = (start..=stop).map(&holds).collect();
    let up = ok.iter().take_while(|b| **b).count() as i64;
    let down = ok.iter().rev().take_while(|b| **b).count() as i64;
    let max = (up > 0).then(|| start + up - 1);
    let min = (down > 0).then(|| stop - down + 1);
    (max, min)
}

fn criterion_5(config: &VerifyConfig) -> Check {
    let k = knot("right-trefoil");
    let g = k.genus;
    let profile = trefoil_profile(config)?;
    let mut details = Vec::new();
    for (p, n) in stabilization_grid() {
        let cp = CableParams::from_n(p, n).map_err(|e| e.to_string())?;
        let cable = staircase(&cable_alexander(&k, &cp).map_err(|e| e.to_string())?, config)?;
        let window = (2 - n)..=(g + 1);
        let holds = |j: i64| -> Result<bool, String> {
            let s =
                filtered_homology_cable_stabilized(&profile, p, n, j, j..=j).map_err(|e| e.to_string())?;
            let main = cable.homology_of_subcomplex(s.cable_level) == s.ranks;
            let plateau = s
                .plateau
                .iter()
                .all(|&(a, b)| cable.homology_of_subcomplex(a) == cable.homology_of_subcomplex(b));
            Ok(main && plateau)
        };
        for j in window.clone() {
            ensure(holds(j)?, || format!("p={p} n={n}: fails at j={j}"))?;
        }
        let cap = n + g + 2;
        let scan_lo = 2 - n - 3 * p - 2 * g;
        let (max_j, _) = contiguous_extent(*window.start(), cap, |j| holds(j).unwrap_or(false));
        let (_, min_j) = contiguous_extent(scan_lo, cap, |j| holds(j).unwrap_or(false));
        let max_j = max_j.ok_or_else(|| format!("p={p} n={n}: no valid j"))?;
        ensure(max_j >= n - g, || format!("p={p} n={n}: maximal valid j {max_j} < n-g = {}", n - g))?;
        let min = min_j.map_or("none".to_string(), |m| m.to_string());
        details.push(format!("p={p} n={n}: j in [{min}, {max_j}] of scan {scan_lo}..={cap}"));
    }
    Ok(format!("holds on 2-n..=g+1; scanned extent {}", details.join("; ")))
}

fn criterion_6(config: &VerifyConfig) -> Check {
    let k = knot("right-trefoil");
    let profile = trefoil_profile(config)?;
    let p = 2;
    let mut details = Vec::new();
    for n in [3i64, 4, 5] {
        let cp = CableParams::from_n(p, n).map_err(|e| e.to_string())?;
        let hfk =
            staircase(&cable_alexander(&k, &cp).map_err(|e| e.to_string())?, config)?.associated_graded_hfk();
        let matches = |w: i64| -> Result<Option<i64>, String> {
            let s = hfk_cable_stabilized(&profile, p, n, w).map_err(|e| e.to_string())?;
            for a in s.asserted_gradings().chain([s.top + 1]) {
                let predicted = s.asserted(a).expect("asserted grading");
                if predicted != hfk.at_alexander(a) {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        };
        if let Some(a) = matches(n - 1)? {
            return Err(format!("n={n}: mismatch at Alexander grading {a}"));
        }
        let mut widest = n - 1;
        while widest < n + k.genus + 3 && matches(widest + 1)?.is_none() {
            widest += 1;
        }
        details.push(format!("n={n}: valid up to j={widest}"));
    }
    Ok(format!("window n-1 matches; {}", details.join("; ")))
}

fn criterion_7() -> Check {
    let mut points = 0;
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        for p in 2..=4i64 {
            let lo = p * (2 * k.genus - 1);
            for q in lo..=lo + 12 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let cp = CableParams::new(p, q).map_err(|e| e.to_string())?;
                let d = cable_surgery_decomposition(k, &cp).map_err(|e| format!("{} {cp}: {e}", k.name))?;
                let direct = d.direct.ok_or_else(|| format!("{} {cp}: no direct rank", k.name))?;
                let product = p as u64 * d.companion.rank;
                ensure(direct.rank == product, || {
                    format!("{} {cp}: direct {} != {p} x {}", k.name, direct.rank, d.companion.rank)
                })?;
                points += 1;
            }
        }
    }
    let r = surgery_rank_lspace_knot(&knot("trefoil"), 1, 5).map_err(|e| e.to_string())?;
    ensure(r.rank == 5 && r.is_lspace, || format!("trefoil 5/1 rank {}", r.rank))?;
    Ok(format!("{points} grid points agree; rank(trefoil, 5/1) = 5"))
}

fn criterion_8() -> Check {
    let unknot = TauProfile::torus(2, -4..=4).map_err(|e| e.to_string())?;
    let violations = validate_tau_profile(&unknot, &knot("unknot"));
    ensure(violations.is_empty(), || {
        format!(
            "unknot profile: {}",
            violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )
    })?;
    let j = jump_locus(&unknot);
    ensure(j == BTreeSet::from([-1]), || format!("unknot jump locus {j:?}"))?;
    let rh = TauProfile::from_formula(&knot("right-trefoil"), 2, -4..=4).map_err(|e| e.to_string())?;
    let j = jump_locus(&rh);
    ensure(j.is_empty(), || format!("right trefoil jump locus {j:?}"))?;
    Ok("J(unknot) = {-1}, J(right trefoil) = {}".into())
}

fn criterion_9() -> Check {
    for p in 2..=10 {
        let d = concordance_demo(p).map_err(|e| e.to_string())?;
        ensure(d.tau_sum_cable == 0 && d.tau_k1_cable == p && d.tau_k2_cable == -1, || {
            format!("p={p}: got {} vs {} + {}", d.tau_sum_cable, d.tau_k1_cable, d.tau_k2_cable)
        })?;
        ensure(d.not_homomorphism && d.additive_prediction == p - 1, || format!("p={p}: sums agree"))?;
    }
    Ok("0 != p + (-1) for p = 2..10".into())
}

fn criterion_10() -> Check {
    let mut tables = 0;
    for p in 2..=4i64 {
        for n in 1..=3i64 {
            for g in 0..=2i64 {
                let t = exterior_grading_table(p, n, g).map_err(|e| e.to_string())?;
                for r in t.outermost() {
                    ensure(r.cable_alexander == p * r.alexander + twist_offset(p, n), || {
                        format!("p={p} n={n} g={g}: outer row {r:?}")
                    })?;
                }
                for (a, b, expected) in t.adjacent_pairs() {
                    let found = StepRule::matching(
                        a.alexander - b.alexander,
                        a.cable_alexander - b.cable_alexander,
                        p,
                    );
                    ensure(found == vec![expected], || {
                        format!("p={p} n={n} g={g}: {a:?} -> {b:?} matches {found:?}")
                    })?;
                }
                let max = t.max_cable_alexander();
                let g_prime = p * g + twist_offset(p, n);
                ensure(max == Some(g_prime), || format!("p={p} n={n} g={g}: max A' {max:?} != {g_prime}"))?;
                tables += 1;
            }
        }
    }
    Ok(format!("{tables} tables obey the step rules with max A' = g'"))
}
