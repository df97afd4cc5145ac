use std::time::Instant;

use num_traits::{One, Zero};
use topos_core::fixtures::{self, basis_operators, random_scenario, CABELLO_BASES};
use topos_core::presheaf::{omega_presheaf, SearchOptions};
use topos_core::quantum::gauss::CMatrix;
use topos_core::quantum::{
    born_prob_mask, build_operator_category, coarse_graining_presheaf, dual_presheaf, image_mask,
    ks_global_section_search, nu_state_by_probability, nu_state_mask, Rational, SieveValuation,
    State,
};

/// Number of ways to pick one ray per basis so that every ray shared by two
/// bases is picked in both or in neither. Rays are compared as projectors.
fn ray_colorings(bases: &[[[i64; 4]; 4]]) -> usize {
    let proj = |v: &[i64; 4]| CMatrix::line_projector(&fixtures::cvec(v)).unwrap();
    let mut rays: Vec<CMatrix> = Vec::new();
    let ids: Vec<[usize; 4]> = bases
        .iter()
        .map(|b| {
            let mut row = [0; 4];
            for (k, v) in b.iter().enumerate() {
                let p = proj(v);
                row[k] = match rays.iter().position(|r| *r == p) {
                    Some(i) => i,
                    None => {
                        rays.push(p);
                        rays.len() - 1
                    }
                };
            }
            row
        })
        .collect();
    assert!(rays.len() <= 20);
    (0u32..1 << rays.len())
        .filter(|m| {
            ids.iter()
                .all(|row| row.iter().filter(|&&r| m >> r & 1 == 1).count() == 1)
        })
        .count()
}

#[test]
fn cabello_set_has_no_global_section() {
    let ops = fixtures::cabello_operators();
    let start = Instant::now();
    let oc = build_operator_category(ops, true).unwrap();
    let d = dual_presheaf(&oc);
    assert!(d.validate().is_ok());
    let res = ks_global_section_search(&oc, SearchOptions::default()).unwrap();
    assert!(res.sections.is_empty());
    assert!(start.elapsed().as_secs() < 30);
    assert_eq!(ray_colorings(&CABELLO_BASES), 0);
}

/// On subsets of the bases the section count equals the coloring count.
#[test]
fn sections_match_colorings_on_sub_families() {
    for pick in [
        &[0usize, 1][..],
        &[0, 4],
        &[2, 3, 6],
        &[0, 1, 4],
        &[0, 1, 2, 3],
    ] {
        let bases: Vec<[[i64; 4]; 4]> = pick.iter().map(|&i| CABELLO_BASES[i]).collect();
        let oc = build_operator_category(basis_operators(&bases), true).unwrap();
        let res = ks_global_section_search(&oc, SearchOptions::default()).unwrap();
        assert_eq!(res.sections.len(), ray_colorings(&bases), "bases {pick:?}");
        assert!(!res.sections.is_empty());
        let seq = ks_global_section_search(
            &oc,
            SearchOptions {
                parallel: false,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(res.sections, seq.sections);
    }
}

#[test]
fn qubit_fragments_have_sections() {
    let one = build_operator_category(vec![fixtures::sigma_z()], true).unwrap();
    let r = ks_global_section_search(&one, SearchOptions::default()).unwrap();
    assert_eq!(r.sections.len(), 2);
    for ops in [
        vec![fixtures::sigma_z(), fixtures::sigma_x()],
        vec![
            fixtures::sigma_x(),
            fixtures::sigma_y(),
            fixtures::sigma_z(),
        ],
    ] {
        let n = ops.len();
        let oc = build_operator_category(ops, true).unwrap();
        let r = ks_global_section_search(&oc, SearchOptions::default()).unwrap();
        // each Pauli context is independent: two choices apiece
        assert_eq!(r.sections.len(), 1 << n);
    }
}

fn random_scenarios() -> impl Iterator<Item = fixtures::RandomScenario> {
    (0..60u64).map(|seed| random_scenario(seed, 2 + (seed % 3) as usize, 1 + (seed % 6) as usize))
}

#[test]
fn state_valuations_satisfy_func_and_agree() {
    for sc in random_scenarios() {
        let oc = build_operator_category(sc.operators.clone(), true).unwrap();
        let psi = State::new(sc.state.clone()).unwrap();
        let nu = SieveValuation::from_state(&oc, &psi).unwrap();
        assert!(nu.func_check().is_ok(), "seed {}", sc.seed);
        let cat = oc.category();
        for o in cat.objects() {
            let op = oc.operator(o);
            for mask in 0..=op.full_mask() {
                let by_p = nu_state_by_probability(&oc, &psi, o, mask).unwrap();
                assert_eq!(&by_p, nu.value(o, mask), "seed {}", sc.seed);
                assert_eq!(nu_state_mask(&oc, &psi, o, mask).unwrap(), by_p);
            }
            assert!(nu.value(o, op.full_mask()).is_principal(cat));
            assert!(nu.value(o, 0).is_empty());
        }
    }
}

#[test]
fn coarse_graining_is_monotone_and_born_sums_to_one() {
    for sc in random_scenarios() {
        let oc = build_operator_category(sc.operators.clone(), true).unwrap();
        let psi = State::new(sc.state.clone()).unwrap();
        let cat = oc.category();
        for a in cat.arrows() {
            let (src, dst) = (oc.operator(a.dom), oc.operator(a.cod));
            for mask in 0..=src.full_mask() {
                let img = image_mask(oc.function(a.id), mask);
                assert!(
                    src.projector_for_mask(mask)
                        .projector_leq(&dst.projector_for_mask(img)),
                    "seed {}",
                    sc.seed
                );
            }
        }
        for op in oc.operators() {
            let total: Rational = (0..op.spectrum().len())
                .map(|i| born_prob_mask(&psi, op, 1 << i))
                .fold(Rational::zero(), |s, p| s + p);
            assert!(total.is_one(), "seed {}", sc.seed);
        }
    }
}

#[test]
fn presheaves_are_functors_on_random_categories() {
    for sc in random_scenarios().take(20) {
        let oc = build_operator_category(sc.operators.clone(), true).unwrap();
        assert!(dual_presheaf(&oc).validate().is_ok());
        assert!(coarse_graining_presheaf(&oc).validate().is_ok());
        let g = coarse_graining_presheaf(&oc);
        let omega = omega_presheaf(oc.category().clone()).unwrap();
        assert!(omega.presheaf().validate().is_ok());
        let psi = State::new(sc.state.clone()).unwrap();
        let nu = SieveValuation::from_state(&oc, &psi).unwrap();
        assert!(nu.natural_transformation(&g, &omega).unwrap().is_natural());
    }
}
