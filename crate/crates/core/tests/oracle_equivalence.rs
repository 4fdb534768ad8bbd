//! Stabilization results checked against computed complexes for every
//! L-space knot in the atlas.

mod common;

use cablefloer::cabling::{
    cable_alexander, default_filtration_window, default_hfk_window, filtered_homology_cable_stabilized,
    hfk_cable_stabilized, tau_cable_interval, CableParams, FilteredHomologyProfile,
};
use cablefloer::filtration::staircase_complex;
use cablefloer::knotdb::builtin_knots;
use cablefloer::surgery::cable_lspace_certificate;

#[test]
fn stabilization_matches_staircases() {
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        let g = k.genus;
        let base = staircase_complex(&k.alexander).unwrap();
        let profile = FilteredHomologyProfile::from_complex(&base, g).unwrap();
        for p in [2i64, 3] {
            for n in (g + 2)..=(g + 5) {
                let cp = CableParams::from_n(p, n).unwrap();
                assert!(cable_lspace_certificate(k, &cp).is_certified(), "{} {cp}", k.name);
                let delta = cable_alexander(k, &cp).unwrap();
                let cable = staircase_complex(&delta).unwrap();
                let label = format!("{} {cp}", k.name);

                let iv = tau_cable_interval(k, p, n).unwrap();
                assert_eq!(Some(cable.tau().unwrap()), iv.exact, "{label}: tau");

                for j in default_filtration_window(n, g) {
                    let s = filtered_homology_cable_stabilized(&profile, p, n, j, j..=j).unwrap();
                    assert_eq!(cable.homology_of_subcomplex(s.cable_level), s.ranks, "{label}: j={j}");
                    assert_eq!(base.homology_of_subcomplex(j - 1), s.ranks, "{label}: j={j}");
                    for (a, b) in s.plateau {
                        assert_eq!(
                            cable.homology_of_subcomplex(a),
                            cable.homology_of_subcomplex(b),
                            "{label}: plateau {a}/{b}"
                        );
                    }
                }

                let s = hfk_cable_stabilized(&profile, p, n, default_hfk_window(n, g)).unwrap();
                let hfk = cable.associated_graded_hfk();
                for a in s.asserted_gradings() {
                    assert_eq!(s.asserted(a).unwrap(), hfk.at_alexander(a), "{label}: A={a}");
                }
                assert_eq!(s.asserted(s.lowest_asserted - 1), None);
            }
        }
    }
}

#[test]
fn library_filtration_matches_model() {
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        for p in [2i64, 3, 4] {
            for n in 0..=4 {
                let cp = CableParams::from_n(p, n).unwrap();
                if !cable_lspace_certificate(k, &cp).is_certified() {
                    continue;
                }
                let delta = cable_alexander(k, &cp).unwrap();
                let lib = staircase_complex(&delta).unwrap();
                let model = common::staircase(&delta);
                let top = delta.top_degree().unwrap();
                for j in (-top - 2)..=(top + 1) {
                    let got: common::Ranks = lib.homology_of_subcomplex(j).iter().collect();
                    assert_eq!(got, model.filt(j), "{} {cp} j={j}", k.name);
                }
            }
        }
    }
}

fn hfk_window_holds(k: &cablefloer::knotdb::KnotRecord, p: i64, n: i64, w: i64) -> bool {
    let base = staircase_complex(&k.alexander).unwrap();
    let profile = FilteredHomologyProfile::from_complex(&base, k.genus).unwrap();
    let cp = CableParams::from_n(p, n).unwrap();
    let hfk = staircase_complex(&cable_alexander(k, &cp).unwrap()).unwrap().associated_graded_hfk();
    let s = hfk_cable_stabilized(&profile, p, n, w).unwrap();
    s.asserted_gradings().all(|a| s.asserted(a).unwrap() == hfk.at_alexander(a))
}

#[test]
fn measured_hfk_window_is_n_minus_one() {
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        for p in [2i64, 3, 4] {
            for n in (k.genus + 1).max(1)..=(k.genus + 4) {
                assert!(hfk_window_holds(k, p, n, n - 1), "{} p={p} n={n}", k.name);
                assert!(!hfk_window_holds(k, p, n, n), "{} p={p} n={n}", k.name);
                assert!(default_hfk_window(n, k.genus) < n);
            }
        }
    }
}

#[test]
fn unknot_window_n_minus_g_overshoots() {
    let u = cablefloer::knotdb::lookup_knot("unknot", None).unwrap();
    // T(2,5): the j = 2 row would put a generator at A = -3
    assert!(!hfk_window_holds(&u, 2, 2, 2));
    assert!(hfk_window_holds(&u, 2, 2, default_hfk_window(2, 0)));
}

fn plateau_holds(k: &cablefloer::knotdb::KnotRecord, p: i64, n: i64, j: i64) -> bool {
    let base = staircase_complex(&k.alexander).unwrap();
    let profile = FilteredHomologyProfile::from_complex(&base, k.genus).unwrap();
    let cp = CableParams::from_n(p, n).unwrap();
    let cable = staircase_complex(&cable_alexander(k, &cp).unwrap()).unwrap();
    let s = filtered_homology_cable_stabilized(&profile, p, n, j, j..=j).unwrap();
    s.plateau.iter().all(|&(a, b)| cable.homology_of_subcomplex(a) == cable.homology_of_subcomplex(b))
}

#[test]
fn plateau_window_starts_at_g_plus_one_minus_n() {
    for k in builtin_knots().iter().filter(|k| k.lspace_knot) {
        let g = k.genus;
        for p in [3i64, 4] {
            for n in (g + 2)..=(g + 4) {
                let lo = *default_filtration_window(n, g).start();
                assert_eq!(lo, g + 1 - n);
                assert!(plateau_holds(k, p, n, lo), "{} p={p} n={n}", k.name);
                assert!(!plateau_holds(k, p, n, lo - 1), "{} p={p} n={n}", k.name);
            }
        }
    }
    // for genus 2 the fixed lower end 2 - n is one step too low
    let t25 = cablefloer::knotdb::lookup_knot("T(2,5)", None).unwrap();
    assert!(!plateau_holds(&t25, 3, 4, 2 - 4));
}
