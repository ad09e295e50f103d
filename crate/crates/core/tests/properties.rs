use std::collections::BTreeMap;

use proptest::prelude::*;
use typea_sheets::ab_diagram::{delta_of_phi, gamma_of_nilpotent, rigidify, ABDiagram, Label};
use typea_sheets::epsilon::{same_rank_profile, scaling_action, slice_contains, EpsilonMap};
use typea_sheets::gl_setup::{build_triple, grading_component, TorusElement};
use typea_sheets::involution::build_aiii;
use typea_sheets::linalg::{frac, inverse, jordan_structure, RatMatrix, Rational};
use typea_sheets::sheets::{jordan_type_on_slice, k_sheet_components, JordanType};
use typea_sheets::Partition;

fn partition_up_to(n: usize) -> impl Strategy<Value = Partition> {
    proptest::sample::select(Partition::all_up_to(n))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| frac(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(a, b)| frac(a, b))
}

fn torus_for(lambda: &Partition) -> impl Strategy<Value = TorusElement> {
    proptest::collection::vec(rational(), lambda.largest()).prop_map(TorusElement::new)
}

fn labels(len: usize) -> impl Strategy<Value = Vec<Label>> {
    proptest::collection::vec(prop_oneof![Just(Label::A), Just(Label::B)], len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn epsilon_lands_on_slice_and_stays_conjugate(
        (lambda, t) in partition_up_to(7).prop_flat_map(|l| { let s = torus_for(&l); (Just(l), s) })
    ) {
        let triple = build_triple(&lambda);
        let x = EpsilonMap::new(&triple).unwrap().apply_torus(&t).unwrap();
        prop_assert!(slice_contains(&triple, &x).unwrap());
        prop_assert!(same_rank_profile(&(&triple.e + &t.to_matrix(&lambda).unwrap()), &x).unwrap());
    }

    #[test]
    fn epsilon_is_homogeneous(
        (lambda, t) in partition_up_to(6).prop_flat_map(|l| { let s = torus_for(&l); (Just(l), s) }),
        s in nonzero_rational(),
    ) {
        let triple = build_triple(&lambda);
        let map = EpsilonMap::new(&triple).unwrap();
        let base = &map.apply_torus(&t).unwrap() - &triple.e;
        let st = TorusElement::new(t.coords.iter().map(|x| x * &s).collect());
        let scaled = &map.apply_torus(&st).unwrap() - &triple.e;
        for j in 0..lambda.largest() as i64 {
            let w = -2 * j;
            let factor = typea_sheets::linalg::pow_i(&s, 1 + j).unwrap();
            prop_assert_eq!(
                grading_component(&scaled, &triple.h, w).unwrap(),
                grading_component(&base, &triple.h, w).unwrap().scale(&factor)
            );
        }
    }

    #[test]
    fn scaling_keeps_slice_points_on_slice(
        (lambda, t) in partition_up_to(6).prop_flat_map(|l| { let s = torus_for(&l); (Just(l), s) }),
        s in nonzero_rational(),
    ) {
        let triple = build_triple(&lambda);
        let map = EpsilonMap::new(&triple).unwrap();
        let x = map.apply_torus(&t).unwrap();
        let y = scaling_action(&s, &triple, &x).unwrap();
        prop_assert!(slice_contains(&triple, &y).unwrap());
        // F_s ∘ ε = ε ∘ (t ↦ s^{-2} t)
        let s2 = (&s * &s).recip();
        let t2 = TorusElement::new(t.coords.iter().map(|c| c * &s2).collect());
        prop_assert_eq!(y, map.apply_torus(&t2).unwrap());
    }

    #[test]
    fn regular_case_has_one_block_per_eigenvalue(
        vals in proptest::collection::vec(-2i64..=2, 1..=6),
        perm_seed in any::<u64>(),
    ) {
        let n = vals.len();
        let lambda = Partition::new(vec![n]).unwrap();
        let map = EpsilonMap::new(&build_triple(&lambda)).unwrap();
        let mut coords: Vec<Rational> = vals.iter().map(|&v| frac(v, 1)).collect();
        let x = map.apply_torus(&TorusElement::new(coords.clone())).unwrap();
        let mut mult: BTreeMap<Rational, usize> = BTreeMap::new();
        for c in &coords {
            *mult.entry(c.clone()).or_default() += 1;
        }
        let js = jordan_structure(&x).unwrap();
        prop_assert_eq!(js.len(), mult.len());
        for (c, m) in &mult {
            prop_assert_eq!(&js[c], &vec![*m]);
        }
        // symmetric in the eigenvalues
        let k = (perm_seed % n as u64) as usize;
        coords.rotate_left(k);
        if n > 1 {
            coords.swap(0, (perm_seed as usize / n) % n);
        }
        prop_assert_eq!(map.apply_torus(&TorusElement::new(coords)).unwrap(), x);
    }

    #[test]
    fn jordan_type_matches_rank_profile(
        (lambda, t) in partition_up_to(6).prop_flat_map(|l| {
            let s = proptest::collection::vec((-2i64..=2).prop_map(|v| frac(v, 1)), l.largest()).prop_map(TorusElement::new);
            (Just(l), s)
        })
    ) {
        let m = &build_triple(&lambda).e + &t.to_matrix(&lambda).unwrap();
        let brute = JordanType::from_blocks(jordan_structure(&m).unwrap()).unwrap();
        prop_assert_eq!(jordan_type_on_slice(&lambda, &t).unwrap(), brute);
    }

    #[test]
    fn gamma_is_k_conjugation_invariant(
        (lambda, phi, entries) in partition_up_to(7).prop_flat_map(|l| {
            let n = l.size();
            let d = l.len();
            (Just(l), labels(d), proptest::collection::vec(-2i64..=2, n * n))
        })
    ) {
        let inv = build_aiii(&lambda, &phi).unwrap();
        let n = lambda.size();
        let mut g = RatMatrix::identity(n);
        for side in [inv.a_indices(), inv.b_indices()] {
            for &r in side {
                for &c in side {
                    if r != c {
                        g[(r, c)] = frac(entries[r * n + c], 1);
                    }
                }
            }
        }
        prop_assume!(inverse(&g).unwrap().is_some());
        let gi = inverse(&g).unwrap().unwrap();
        let e = build_triple(&lambda).e;
        let moved = &(&g * &e) * &gi;
        prop_assert!(inv.in_p(&moved).unwrap());
        prop_assert_eq!(gamma_of_nilpotent(&inv, &moved).unwrap(), delta_of_phi(&lambda, &phi).unwrap());
    }

    #[test]
    fn equivalent_pictures_canonicalize_alike(
        (lambda, phi, rot) in partition_up_to(9).prop_flat_map(|l| { let d = l.len(); (Just(l), labels(d), any::<usize>()) })
    ) {
        let d = delta_of_phi(&lambda, &phi).unwrap();
        let mut rows = d.rows().to_vec();
        let k = rot % rows.len();
        rows.rotate_left(k);
        let again = ABDiagram::from_rows(rows).unwrap();
        prop_assert_eq!(&again, &d);
        prop_assert_eq!(ABDiagram::from_rows(again.rows().to_vec()).unwrap(), again);
        prop_assert_eq!(d.to_string().parse::<ABDiagram>().unwrap(), d.clone());
        let r = rigidify(&d);
        prop_assert_eq!(rigidify(&r), r);
    }

    #[test]
    fn components_cover_admissible_diagrams_once(lambda in partition_up_to(9), na_frac in 0.0f64..=1.0) {
        let n = lambda.size();
        let na = ((n as f64) * na_frac).round() as usize;
        let r = k_sheet_components(&lambda, na, n - na).unwrap();
        let mut seen: Vec<ABDiagram> = r.components.iter().flat_map(|c| c.orbits.clone()).collect();
        let total = seen.len();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), total);
        prop_assert!(r.components.len() <= total.max(1));
        for c in &r.components {
            prop_assert!(c.orbits.iter().all(|d| rigidify(d) == c.rigidified));
        }
    }
}
