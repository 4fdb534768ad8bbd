//! The ten acceptance criteria. Each one runs the library's own check and a
//! recomputation against the model in `common`, then prints one line.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use cablefloer::cabling::{cable_alexander, exterior_grading_table, CableParams};
use cablefloer::filtration::{staircase_complex, GradedRanks};
use cablefloer::knotdb::{builtin_knots, lookup_knot, KnotRecord};
use cablefloer::laurent::{torus_alexander, LaurentPoly};
use cablefloer::obstructions::concordance_demo;
use cablefloer::surgery::cable_surgery_decomposition;
use cablefloer::verify::{run_criterion, VerifyConfig};

use common::{gcd, lspace_rank, ranks, staircase, Ranks};

fn knot(name: &str) -> KnotRecord {
    lookup_knot(name, None).unwrap()
}

fn to_ranks(g: &GradedRanks) -> Ranks {
    g.iter().collect()
}

fn cable(k: &KnotRecord, p: i64, n: i64) -> LaurentPoly {
    cable_alexander(k, &CableParams::from_n(p, n).unwrap()).unwrap()
}

fn model_1() -> Result<(), String> {
    let delta = cable(&knot("right-trefoil"), 2, 1);
    if delta.to_string() != "t^3 - t^2 + 1 - t^-2 + t^-3" {
        return Err(format!("rendered {delta}"));
    }
    // Δ_T(3,4) from the semigroup <3,4>: (1 - t)(1 + t^3 + t^4) + t^6, centred
    let semigroup = LaurentPoly::from_terms([(-3, 1), (-2, -1), (0, 1), (2, -1), (3, 1)]);
    if torus_alexander(3, 4).unwrap() != semigroup {
        return Err("T(3,4) disagrees with the semigroup form".into());
    }
    Ok(())
}

fn model_2() -> Result<(), String> {
    let a = staircase(&cable(&knot("right-trefoil"), 2, 1)).hfk();
    let b = staircase(&torus_alexander(3, 4).unwrap()).hfk();
    let expected: BTreeMap<(i64, i64), usize> =
        [((3, 0), 1), ((2, -1), 1), ((0, -2), 1), ((-2, -5), 1), ((-3, -6), 1)].into();
    if a != b || a != expected {
        return Err(format!("model HFK {a:?} vs {b:?}"));
    }
    let lib: BTreeMap<(i64, i64), usize> = staircase_complex(&torus_alexander(3, 4).unwrap())
        .unwrap()
        .associated_graded_hfk()
        .entries()
        .iter()
        .map(|e| ((e.alexander, e.maslov), e.rank))
        .collect();
    if lib != expected {
        return Err(format!("library HFK {lib:?}"));
    }
    Ok(())
}

fn model_3() -> Result<(), String> {
    let mut deltas = Vec::new();
    for p in 2..=5 {
        for q in (p + 1)..=13 {
            if gcd(p, q) == 1 {
                deltas.push(torus_alexander(p, q).unwrap());
            }
        }
    }
    for p in [2, 3] {
        for n in [3, 4, 5] {
            deltas.push(cable(&knot("right-trefoil"), p, n));
        }
    }
    for d in &deltas {
        let m = staircase(d);
        let c = staircase_complex(d).unwrap();
        if m.homology() != ranks(&[(0, 1)]) || to_ranks(&c.homology()) != m.homology() {
            return Err(format!("{d}: homology"));
        }
        if c.tau().unwrap() != m.tau() || m.tau() != d.top_degree().unwrap() {
            return Err(format!("{d}: tau"));
        }
    }
    Ok(())
}

fn model_4() -> Result<(), String> {
    for n in 0..=5 {
        let m = staircase(&cable(&knot("right-trefoil"), 2, n));
        if m.tau() != 2 + n {
            return Err(format!("n={n}: model tau {}", m.tau()));
        }
    }
    Ok(())
}

fn model_5() -> Result<(), String> {
    let k = knot("right-trefoil");
    let base = staircase(&k.alexander);
    for p in [2i64, 3] {
        for n in [3i64, 4, 5] {
            let m = staircase(&cable(&k, p, n));
            let lib = staircase_complex(&cable(&k, p, n)).unwrap();
            let offset = p * n * (p - 1) / 2;
            for j in (2 - n)..=(k.genus + 1) {
                let level = p * j + offset;
                if m.filt(level - 1) != base.filt(j - 1) {
                    return Err(format!("p={p} n={n} j={j}"));
                }
                if to_ranks(&lib.homology_of_subcomplex(level - 1)) != m.filt(level - 1) {
                    return Err(format!("p={p} n={n} j={j}: library and model differ"));
                }
                for i in 2..p {
                    if m.filt(level - i) != m.filt(level - i - 1) {
                        return Err(format!("p={p} n={n} j={j}: plateau i={i}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn model_6() -> Result<(), String> {
    let k = knot("right-trefoil");
    let g = k.genus;
    let base = staircase(&k.alexander);
    let p = 2;
    for n in [3i64, 4, 5] {
        let m = staircase(&cable(&k, p, n));
        let top = p * g + p * n * (p - 1) / 2;
        let mut predicted: BTreeMap<i64, Ranks> = BTreeMap::new();
        for j in 0..=(n - 1) {
            let i = top - p * j;
            for (d, r) in base.filt(j - g) {
                *predicted.entry(i).or_default().entry(d - 2 * (j - g)).or_default() += r;
                *predicted.entry(i - 1).or_default().entry(d - 2 * (j - g) - 1).or_default() += r;
            }
        }
        for a in (top - p * (n - 1) - 1)..=top {
            let want = predicted.get(&a).cloned().unwrap_or_default();
            if m.hfk_at(a) != want {
                return Err(format!("n={n} A={a}: model {:?} vs predicted {want:?}", m.hfk_at(a)));
            }
        }
    }
    Ok(())
}

fn model_7() -> Result<(), String> {
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        let g = k.genus;
        for p in 2..=4i64 {
            let lo = p * (2 * g - 1);
            for q in lo..=lo + 12 {
                if gcd(p, q) != 1 {
                    continue;
                }
                let right = p * lspace_rank(g, p, q);
                let left = if q > 0 {
                    lspace_rank(p * g + (p - 1) * (q - 1) / 2, 1, p * q)
                } else {
                    lspace_rank((p - 1) * (q.abs() - 1) / 2, 1, p * q)
                };
                let d = cable_surgery_decomposition(k, &CableParams::new(p, q).unwrap()).unwrap();
                if left != right || d.direct.map(|x| x.rank as i64) != Some(left) {
                    return Err(format!("{} ({p},{q}): {left} vs {right}", k.name));
                }
            }
        }
    }
    if lspace_rank(1, 1, 5) != 5 {
        return Err("trefoil 5/1".into());
    }
    Ok(())
}

fn model_8() -> Result<(), String> {
    // τ(T(2, 2n+1)) is n for n >= 0 and n + 1 below
    let tau = |n: i64| if n >= 0 { n } else { n + 1 };
    let jumps: BTreeSet<i64> = (-4..4).filter(|&n| tau(n) != tau(n + 1) - 1).collect();
    if jumps != BTreeSet::from([-1]) {
        return Err(format!("unknot jumps {jumps:?}"));
    }
    let rh = |n: i64| 2 + n;
    if (-4..4).any(|n| rh(n) != rh(n + 1) - 1) {
        return Err("right trefoil profile jumps".into());
    }
    Ok(())
}

fn model_9() -> Result<(), String> {
    for p in 2..=10 {
        let d = concordance_demo(p).unwrap();
        if (d.tau_sum_cable, d.tau_k1_cable, d.tau_k2_cable) != (0, p, -1) {
            return Err(format!("p={p}: {d:?}"));
        }
    }
    Ok(())
}

fn model_10() -> Result<(), String> {
    for p in 2..=4i64 {
        for n in 1..=3i64 {
            for g in 0..=2i64 {
                let t = exterior_grading_table(p, n, g).unwrap();
                let offset = p * n * (p - 1) / 2;
                for r in &t.rows {
                    let (i, k) = (r.point, r.column);
                    let a = k - (i + 1) / 2;
                    let a_prime = p * k + offset - (i + 1) / 2 - (p - 1) * (i / 2);
                    if (r.alexander, r.cable_alexander) != (a, a_prime) {
                        return Err(format!("p={p} n={n} g={g}: cell x{i} C({k})"));
                    }
                }
                if t.rows.len() as i64 != (2 * g + 1) * (2 * n * (p - 1) + 1) {
                    return Err(format!("p={p} n={n} g={g}: {} cells", t.rows.len()));
                }
            }
        }
    }
    Ok(())
}

fn main() {
    let models: [fn() -> Result<(), String>; 10] =
        [model_1, model_2, model_3, model_4, model_5, model_6, model_7, model_8, model_9, model_10];
    let config = VerifyConfig::default();
    let mut failed = Vec::new();
    for (id, model) in (1u8..).zip(models) {
        let outcome = run_criterion(id, &config);
        let model = model();
        let passed = outcome.passed && model.is_ok();
        let note = match &model {
            Ok(()) => "model agrees".to_string(),
            Err(e) => format!("model disagrees: {e}"),
        };
        println!(
            "criterion {id:>2} {}: {} ({}; {note})",
            if passed { "PASS" } else { "FAIL" },
            outcome.title,
            outcome.detail
        );
        if !passed {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
