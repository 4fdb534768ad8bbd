use cablefloer::cabling::{
    cable_alexander, cable_genus, cable_record, iterated_cable_record, jump_locus, tau_cable_interval,
    validate_tau_profile, CableParams, ProfileViolation, TauProfile,
};
use cablefloer::filtration::{staircase_complex, GradedRanks};
use cablefloer::knotdb::{
    builtin_knots, load_knot_table, lookup_knot, serialize_knot_table, torus_knot_record, validate_record,
};
use cablefloer::laurent::torus_alexander;
use cablefloer::obstructions::{
    obstruct_cknot, obstruct_lspace_surgery, pos_membership_cable, PosMembership, Verdict,
};
use cablefloer::surgery::cable_lspace_certificate;
use num_integer::Integer;
use proptest::prelude::*;

fn coprime_pair(max_p: i64, max_q: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_p, 2..=max_q).prop_filter("coprime, p < q", |(p, q)| p < q && p.gcd(q) == 1)
}

fn lspace_knots() -> Vec<cablefloer::knotdb::KnotRecord> {
    builtin_knots().into_iter().filter(|k| k.lspace_knot).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torus_staircases_are_normalized((p, q) in coprime_pair(6, 21)) {
        let delta = torus_alexander(p, q).unwrap();
        let top = delta.top_degree().unwrap();
        let c = staircase_complex(&delta).unwrap();
        prop_assert_eq!(c.homology(), GradedRanks::from_pairs([(0, 1)]));
        prop_assert_eq!(c.tau().unwrap(), top);
        let bottom = c.generators().iter().min_by_key(|g| g.alexander).unwrap();
        prop_assert_eq!(bottom.maslov, -2 * top);
        prop_assert!(c.homology_of_subcomplex(-top - 1).is_zero());
        prop_assert_eq!(c.associated_graded_hfk().total(), delta.num_terms());
    }

    #[test]
    fn certified_cables_are_normalized(ki in 0usize..4, p in 2i64..=4, extra in 0i64..8) {
        let k = &lspace_knots()[ki];
        let q = (p * (2 * k.genus - 1)).max(1) + extra;
        prop_assume!(p.gcd(&q) == 1);
        let cp = CableParams::new(p, q).unwrap();
        prop_assert!(cable_lspace_certificate(k, &cp).is_certified());
        let delta = cable_alexander(k, &cp).unwrap();
        prop_assert_eq!(delta.top_degree(), Some(cable_genus(k, &cp).unwrap()));
        let c = staircase_complex(&delta).unwrap();
        prop_assert_eq!(c.tau().unwrap(), delta.top_degree().unwrap());
        if let Some(n) = cp.n() {
            prop_assert_eq!(tau_cable_interval(k, p, n).unwrap().exact, Some(c.tau().unwrap()));
        }
        let r = cable_record(k, &cp).unwrap();
        prop_assert!(validate_record(&r).is_empty());
        prop_assert_eq!(r.tau, Some(r.genus));
        prop_assert_eq!(r.pos_member, Some(true));
    }

    /// A profile that stays in the band and steps by at most p(p-1)/2 has at
    /// most p - 1 jumps, whether or not the caller checks it.
    #[test]
    fn band_and_steps_bound_the_jump_locus(
        p in 2i64..=6,
        tau in -3i64..=3,
        start in -5i64..=5,
        mut excess in prop::collection::vec(0i64..6, 1..12),
    ) {
        excess.iter_mut().for_each(|e| *e %= p);
        excess.sort_unstable_by(|a, b| b.cmp(a));
        let k = cablefloer::knotdb::KnotRecord {
            name: "companion".into(),
            genus: tau.abs().max(1),
            tau: Some(tau),
            alexander: cablefloer::laurent::LaurentPoly::one(),
            lspace_knot: false,
            pos_member: None,
            fibered: None,
            qp_fiber: None,
        };
        let values = excess
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let n = start + i as i64;
                (n, tau_cable_interval(&k, p, n).unwrap().lower + e)
            })
            .collect();
        let tp = TauProfile { p, values };
        let v = validate_tau_profile(&tp, &k);
        prop_assert!(v.is_empty(), "{:?}", v);
        prop_assert!((jump_locus(&tp).len() as i64) < p);
    }

    #[test]
    fn cknot_obstruction_is_monotone(tau in -6i64..=6, p in 2i64..=8, n in -12i64..=12) {
        let mut k = lookup_knot("trefoil", None).unwrap();
        k.tau = Some(tau);
        k.genus = tau.abs().max(1);
        let here = obstruct_cknot(&k, p, n).unwrap().verdict;
        let above = obstruct_cknot(&k, p, n + 1).unwrap().verdict;
        if here == Verdict::NotObstructed {
            prop_assert_eq!(above, Verdict::NotObstructed);
        }
    }

    #[test]
    fn certified_cables_are_never_lspace_obstructed(ki in 0usize..6, p in 2i64..=5, n in -6i64..=6) {
        let k = &builtin_knots()[ki];
        let cp = CableParams::from_n(p, n).unwrap();
        if cable_lspace_certificate(k, &cp).is_certified() {
            prop_assert_eq!(obstruct_lspace_surgery(k, p, n).unwrap().verdict, Verdict::NotObstructed);
        }
    }

    #[test]
    fn nonnegative_iterated_cables_stay_in_pos(
        ki in 0usize..4,
        steps in prop::collection::vec((2i64..=3, 0i64..=3), 1..=3),
    ) {
        let k = &lspace_knots()[ki];
        let mut current = k.clone();
        for &(p, n) in &steps {
            prop_assert_eq!(pos_membership_cable(&current, p, n), PosMembership::InPos);
            current = cable_record(&current, &CableParams::from_n(p, n).unwrap()).unwrap();
            prop_assert_eq!(current.pos_member, Some(true));
            prop_assert_eq!(current.tau, Some(current.genus));
        }
        let pq: Vec<(i64, i64)> = steps.iter().map(|&(p, n)| (p, p * n + 1)).collect();
        prop_assert_eq!(iterated_cable_record(k, &pq).unwrap(), current);
    }

    #[test]
    fn torus_records_round_trip((p, q) in coprime_pair(5, 11), mirror in any::<bool>()) {
        let q = if mirror { -q } else { q };
        let r = torus_knot_record(p, q).unwrap();
        prop_assert!(validate_record(&r).is_empty());
        prop_assert_eq!(r.tau.unwrap().abs(), r.genus);
        let text = serialize_knot_table(std::slice::from_ref(&r));
        prop_assert_eq!(load_knot_table(text.as_bytes()).unwrap(), vec![r]);
    }
}

#[test]
fn jump_locus_too_large_is_reported() {
    let k = lookup_knot("trefoil", None).unwrap();
    let tp = TauProfile { p: 2, values: [(0, 2), (1, 2), (2, 3), (3, 3)].into() };
    assert!(validate_tau_profile(&tp, &k).contains(&ProfileViolation::JumpLocusTooLarge { size: 2, max: 1 }));
}
