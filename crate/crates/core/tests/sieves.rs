mod common;

use std::collections::BTreeSet;

use common::brute_force_sieves;
use topos_core::fincat::FinCategory;
use topos_core::fixtures;
use topos_core::heyting::{all_sieves, is_sieve, HeytingAlgebraTable, Sieve};

fn all_fixture_categories() -> Vec<(&'static str, FinCategory)> {
    fixtures::categories()
}

#[test]
fn enumeration_matches_power_set_filter() {
    for (name, cat) in all_fixture_categories() {
        for o in cat.objects() {
            let got: BTreeSet<BTreeSet<_>> = all_sieves(&cat, o)
                .unwrap()
                .into_iter()
                .map(|s| s.members().clone())
                .collect();
            let want: BTreeSet<BTreeSet<_>> = brute_force_sieves(&cat, o).into_iter().collect();
            assert_eq!(got, want, "{name} at {}", cat.object_name(o));
            for s in &want {
                assert!(is_sieve(&cat, o, s).unwrap());
            }
        }
    }
}

/// On a poset a sieve on `p` is determined by its set of codomains, which
/// is an up-set of `↑p`.
#[test]
fn poset_sieves_are_up_sets() {
    for cat in [fixtures::chain3(), fixtures::vposet(), fixtures::diamond()] {
        let leq = |a, b| !cat.hom(a, b).is_empty();
        for p in cat.objects() {
            let above: Vec<_> = cat.objects().filter(|&q| leq(p, q)).collect();
            let mut up_sets = 0;
            for mask in 0u32..(1 << above.len()) {
                let u: BTreeSet<_> = (0..above.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| above[i])
                    .collect();
                if u.iter()
                    .all(|&a| above.iter().all(|&b| !leq(a, b) || u.contains(&b)))
                {
                    up_sets += 1;
                }
            }
            let sieves = all_sieves(&cat, p).unwrap();
            assert_eq!(sieves.len(), up_sets);
            for s in sieves {
                let cods = s.codomains(&cat);
                assert!(cods
                    .iter()
                    .all(|&a| above.iter().all(|&b| !leq(a, b) || cods.contains(&b))));
            }
        }
    }
}

/// Operations against their pointwise definitions.
#[test]
fn operations_match_definitions() {
    for (name, cat) in all_fixture_categories() {
        for o in cat.objects() {
            let out = cat.arrows_from(o).unwrap();
            let sieves = all_sieves(&cat, o).unwrap();
            for s1 in &sieves {
                for s2 in &sieves {
                    let imp: BTreeSet<_> = out
                        .iter()
                        .copied()
                        .filter(|&f| {
                            cat.arrows_from(cat.cod(f)).unwrap().iter().all(|&g| {
                                let gf = cat.compose(g, f).unwrap();
                                !s1.contains(gf) || s2.contains(gf)
                            })
                        })
                        .collect();
                    assert_eq!(s1.implies(&cat, s2).unwrap().members(), &imp, "{name}");
                    let meet: BTreeSet<_> =
                        s1.members().intersection(s2.members()).copied().collect();
                    assert_eq!(s1.meet(s2).unwrap().members(), &meet);
                    let join: BTreeSet<_> = s1.members().union(s2.members()).copied().collect();
                    assert_eq!(s1.join(s2).unwrap().members(), &join);
                }
                let neg = s1.not(&cat).unwrap();
                assert_eq!(neg, s1.implies(&cat, &Sieve::empty(o)).unwrap());
            }
        }
    }
}

/// `Ω(id) = id` and `Ω(g ∘ f) = Ω(g) ∘ Ω(f)`.
#[test]
fn push_is_functorial() {
    for (name, cat) in all_fixture_categories() {
        for a in cat.arrows() {
            for s in all_sieves(&cat, a.dom).unwrap() {
                let pushed = s.push(&cat, a.id).unwrap();
                assert!(is_sieve(&cat, a.cod, pushed.members()).unwrap());
                if cat.is_identity(a.id) {
                    assert_eq!(pushed, s, "{name}");
                }
                for &g in cat.arrows_from(a.cod).unwrap() {
                    let gf = cat.compose(g, a.id).unwrap();
                    assert_eq!(
                        pushed.push(&cat, g).unwrap(),
                        s.push(&cat, gf).unwrap(),
                        "{name}"
                    );
                }
            }
        }
    }
}

#[test]
fn every_fixture_algebra_is_heyting() {
    for (name, cat) in all_fixture_categories() {
        for o in cat.objects() {
            let t = HeytingAlgebraTable::from_sieves(&cat, o).unwrap();
            t.check_laws().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
    let t = HeytingAlgebraTable::from_topology(&fixtures::sierpinski());
    t.check_laws().unwrap();
    assert_eq!(t.excluded_middle_failures().len(), 1);
}

/// In the V-poset the sieve `{p->q}` on `p` is neither true nor false
/// classically: `S ∨ ¬S` is not the top sieve.
#[test]
fn vposet_excluded_middle_fails() {
    let cat = fixtures::vposet();
    let p = cat.object_id("p").unwrap();
    let pq = cat.arrow_id("p->q").unwrap();
    let s = Sieve::new(&cat, p, BTreeSet::from([pq])).unwrap();
    let neg = s.not(&cat).unwrap();
    assert_eq!(neg.display(&cat).to_string(), "{p->r}");
    let lem = s.join(&neg).unwrap();
    assert!(!lem.is_principal(&cat));
    assert_eq!(neg.not(&cat).unwrap(), s);
    // {p->q}, {p->r} and {p->q, p->r}, whose negation is empty
    let t = HeytingAlgebraTable::from_sieves(&cat, p).unwrap();
    assert_eq!(t.excluded_middle_failures().len(), 3);
}
