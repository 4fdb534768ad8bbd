//! Browser bindings. Every function returns a JSON string: the payload on
//! success, `{"error": "..."}` otherwise.

use cablefloer::cabling::{
    cable_alexander, exterior_grading_table, jump_locus, tau_cable_interval, CableParams, TauProfile,
};
use cablefloer::filtration::{staircase_complex, Generator, HfkTable};
use cablefloer::knotdb::{builtin_knots, lookup_knot};
use cablefloer::surgery::cable_lspace_certificate;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[wasm_bindgen]
pub fn knot_names() -> String {
    let names: Vec<String> = builtin_knots().into_iter().map(|k| k.name).collect();
    respond(Ok(names))
}

#[derive(Serialize)]
struct CableView {
    knot: String,
    p: i64,
    q: i64,
    alexander: String,
    certified: bool,
    /// Staircase generators, top Alexander grading first; empty when the
    /// cable is not certified to be an L-space knot.
    generators: Vec<Generator>,
    arrows: Vec<[usize; 2]>,
    hfk: Option<HfkTable>,
    tau: Option<i64>,
}

/// Cable Alexander polynomial and, for certified L-space cables, the
/// staircase complex with its knot Floer homology.
#[wasm_bindgen]
pub fn cable_staircase(knot: &str, p: i64, q: i64) -> String {
    respond((|| {
        let k = lookup_knot(knot, None).map_err(|e| e.to_string())?;
        let cp = CableParams::new(p, q).map_err(|e| e.to_string())?;
        let delta = cable_alexander(&k, &cp).map_err(|e| e.to_string())?;
        let certified = cable_lspace_certificate(&k, &cp).is_certified();
        let mut view = CableView {
            knot: k.name,
            p,
            q,
            alexander: delta.to_string(),
            certified,
            generators: Vec::new(),
            arrows: Vec::new(),
            hfk: None,
            tau: None,
        };
        if certified {
            let c = staircase_complex(&delta).map_err(|e| e.to_string())?;
            view.arrows = (0..c.len()).flat_map(|i| c.boundary_of(i).iter().map(move |&j| [i, j])).collect();
            view.generators = c.generators().to_vec();
            view.hfk = Some(c.associated_graded_hfk());
            view.tau = Some(c.tau().map_err(|e| e.to_string())?);
        }
        Ok(view)
    })())
}

#[derive(Serialize)]
struct TauRow {
    n: i64,
    lower: i64,
    upper: i64,
    exact: Option<i64>,
}

#[derive(Serialize)]
struct TauView {
    knot: String,
    p: i64,
    rows: Vec<TauRow>,
    /// Only when every value in the window is determined.
    jumps: Option<Vec<i64>>,
}

/// τ bands of `K_{p,pn+1}` for `n` in `n_min..=n_max`.
#[wasm_bindgen]
pub fn tau_profile(knot: &str, p: i64, n_min: i64, n_max: i64) -> String {
    respond((|| {
        if n_max < n_min || n_max - n_min > 200 {
            return Err(format!("window {n_min}..={n_max} is empty or too wide"));
        }
        let k = lookup_knot(knot, None).map_err(|e| e.to_string())?;
        let rows = (n_min..=n_max)
            .map(|n| {
                tau_cable_interval(&k, p, n)
                    .map(|iv| TauRow { n, lower: iv.lower, upper: iv.upper, exact: iv.exact })
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let jumps = TauProfile::from_formula(&k, p, n_min..=n_max)
            .ok()
            .map(|tp| jump_locus(&tp).into_iter().collect());
        Ok(TauView { knot: k.name, p, rows, jumps })
    })())
}

#[derive(Serialize)]
struct GradingView {
    text: String,
    #[serde(flatten)]
    table: cablefloer::cabling::GradingTable,
}

/// Exterior point gradings `(A, A')` for the cabling diagram.
#[wasm_bindgen]
pub fn grading_table(p: i64, n: i64, g: i64) -> String {
    respond((|| {
        if p > 12 || n > 12 || g > 12 {
            return Err("parameters above 12 make an unreadable table".to_string());
        }
        let table = exterior_grading_table(p, n, g).map_err(|e| e.to_string())?;
        Ok(GradingView { text: table.render_text(), table })
    })())
}
