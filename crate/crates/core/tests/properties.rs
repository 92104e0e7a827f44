//! Property tests for the structural invariants: serialisation round-trips,
//! window enumeration, norm preservation, commutation of disjoint elements
//! and the phase-aligned distance axioms.

use num_complex::Complex64;
use proptest::prelude::*;

use oamsynth::elements::{apply_netlist, from_json, to_json, Element, Netlist};
use oamsynth::modes::{required_window, Mode, ModeWindow, StateVector};
use oamsynth::numerics::{haar_unitary, matrix_power, phase_aligned_distance};

const PATHS: usize = 4;

fn arb_element() -> impl Strategy<Value = Element> {
    let path = 0..PATHS;
    prop_oneof![
        (0..PATHS, 0..PATHS - 1, -1.5..1.5f64, -3.0..3.0f64).prop_map(|(a, off, theta, phi)| {
            let b = (a + 1 + off) % PATHS;
            Element::BeamSplitter {
                path_a: a,
                path_b: b,
                theta,
                phi,
            }
        }),
        (path.clone(), -3.0..3.0f64).prop_map(|(path, phi)| Element::PhaseShifter { path, phi }),
        (path.clone(), -1.5..1.5f64).prop_map(|(path, alpha)| Element::DovePrism { path, alpha }),
        (path.clone(), -2i64..=2).prop_map(|(path, charge)| Element::Hologram { path, charge }),
        path.clone().prop_map(|path| Element::Mirror { path }),
        prop_oneof![
            Just(vec![1, 0, 3, 2]),
            Just(vec![3, 0, 1, 2]),
            Just(vec![2, 3, 0, 1]),
        ]
        .prop_map(|map| Element::PathPermutation { map }),
    ]
}

fn arb_netlist() -> impl Strategy<Value = Netlist> {
    proptest::collection::vec(arb_element(), 0..12).prop_map(|elements| {
        Netlist::from_elements("random", ModeWindow::new(-2, 2, PATHS), elements)
            .annotate("construction", "random")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_identity(nl in arb_netlist()) {
        let text = to_json(&nl);
        let back = from_json(&text).unwrap();
        prop_assert_eq!(&nl, &back);
        prop_assert_eq!(text, to_json(&back));
    }

    #[test]
    fn window_enumeration_is_a_bijection(
        lo in -10i64..0,
        span in 0i64..8,
        paths in 1usize..5,
    ) {
        let w = ModeWindow::new(lo, lo + span, paths);
        for i in 0..w.size() {
            prop_assert_eq!(w.index_of(&w.mode_at(i)), Some(i));
        }
    }

    #[test]
    fn netlists_preserve_norm_inside_their_required_window(
        nl in arb_netlist(),
        oam in -2i64..=2,
        path in 0..PATHS,
    ) {
        let window = required_window(&nl, &ModeWindow::new(-2, 2, PATHS));
        let input = StateVector::basis_state(window, Mode::new(oam, path)).unwrap();
        let out = apply_netlist(&nl, &input).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn path_only_commutes_with_oam_only_on_disjoint_paths(
        theta in -1.5..1.5f64,
        phi in -3.0..3.0f64,
        alpha in -1.5..1.5f64,
        charge in -2i64..=2,
        use_dove in any::<bool>(),
        oam in -4i64..=4,
        path in 0usize..3,
    ) {
        // Beam splitter on (0, 1), OAM element on path 2.
        let bs = Element::BeamSplitter { path_a: 0, path_b: 1, theta, phi };
        let oam_el = if use_dove {
            Element::DovePrism { path: 2, alpha }
        } else {
            Element::Hologram { path: 2, charge }
        };
        let base = ModeWindow::new(-4, 4, 3);
        let ab = Netlist::from_elements("ab", base, vec![bs.clone(), oam_el.clone()]);
        let ba = Netlist::from_elements("ba", base, vec![oam_el, bs]);
        let hull = required_window(&ab, &base);
        let input = StateVector::basis_state(hull, Mode::new(oam, path)).unwrap();
        let out_ab = apply_netlist(&ab, &input).unwrap();
        let out_ba = apply_netlist(&ba, &input).unwrap();
        for (mode, amp) in out_ab.iter() {
            prop_assert!((amp - out_ba.amplitude(mode)).norm() < 1e-12);
        }
        prop_assert!((out_ab.norm() - out_ba.norm()).abs() < 1e-12);
    }

    #[test]
    fn matrix_power_is_additive(
        dim in 2usize..6,
        seed in 0u64..32,
        j in 0u32..5,
        k in 0u32..5,
    ) {
        let u = haar_unitary(dim, seed);
        let lhs = matrix_power(&u, j + k).unwrap();
        let rhs = matrix_power(&u, j).unwrap().mul(&matrix_power(&u, k).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn distance_is_symmetric_and_detects_global_phase(
        dim in 2usize..6,
        seed in 0u64..32,
        theta in -3.0..3.0f64,
    ) {
        let a = haar_unitary(dim, seed);
        let b = haar_unitary(dim, seed + 1000);
        let d_ab = phase_aligned_distance(&a, &b).unwrap();
        let d_ba = phase_aligned_distance(&b, &a).unwrap();
        prop_assert!((d_ab - d_ba).abs() < 1e-12);

        let shifted = a.scale(Complex64::from_polar(1.0, theta));
        prop_assert!(phase_aligned_distance(&a, &shifted).unwrap() < 1e-12);
        // Distinct Haar matrices are far apart.
        prop_assert!(d_ab > 1e-3);
    }
}
