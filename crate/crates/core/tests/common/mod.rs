#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topos_core::fincat::{ArrowId, FinCategory, ObjectId};
use topos_core::presheaf::{
    coproduct, product, representable, terminal_presheaf, Presheaf, Subobject,
};

/// Every subset of `arrows out of base` closed under post-composition,
/// found by filtering the full power set.
pub fn brute_force_sieves(cat: &FinCategory, base: ObjectId) -> Vec<BTreeSet<ArrowId>> {
    let out = cat.arrows_from(base).unwrap().to_vec();
    assert!(out.len() <= 16, "power set too large for the oracle");
    let mut found = Vec::new();
    for mask in 0u32..(1 << out.len()) {
        let set: BTreeSet<ArrowId> = (0..out.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| out[i])
            .collect();
        let closed = set.iter().all(|&f| {
            cat.arrows_from(cat.cod(f))
                .unwrap()
                .iter()
                .all(|&g| set.contains(&cat.compose(g, f).unwrap()))
        });
        if closed {
            found.push(set);
        }
    }
    found
}

/// Every choice of subsets `K(A) ⊆ X(A)` closed under the arrow maps, by
/// filtering all `2^Σ|X(A)|` families.
pub fn brute_force_subobjects(x: &Presheaf) -> Vec<Vec<BTreeSet<usize>>> {
    let cat = x.category();
    let slots: Vec<(ObjectId, usize)> = cat
        .objects()
        .flat_map(|o| (0..x.size(o)).map(move |e| (o, e)))
        .collect();
    assert!(slots.len() <= 18, "power set too large for the oracle");
    let mut found = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let mut k = vec![BTreeSet::new(); cat.num_objects()];
        for (i, &(o, e)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                k[o.0].insert(e);
            }
        }
        let closed = cat.arrows().iter().all(|a| {
            k[a.dom.0]
                .iter()
                .all(|&e| k[a.cod.0].contains(&x.apply(a.id, e)))
        });
        if closed {
            found.push(k);
        }
    }
    found
}

/// Every choice vector in `Π_A X(A)` satisfying all matching conditions.
pub fn brute_force_sections(x: &Presheaf) -> Vec<Vec<usize>> {
    let cat = x.category();
    let sizes: Vec<usize> = cat.objects().map(|o| x.size(o)).collect();
    if sizes.contains(&0) {
        return Vec::new();
    }
    let total: usize = sizes.iter().product();
    assert!(total <= 1 << 22, "product too large for the oracle");
    let mut out = Vec::new();
    let mut choice = vec![0; sizes.len()];
    for mut idx in 0..total {
        for (o, &s) in sizes.iter().enumerate().rev() {
            choice[o] = idx % s;
            idx /= s;
        }
        if cat
            .arrows()
            .iter()
            .all(|a| x.apply(a.id, choice[a.dom.0]) == choice[a.cod.0])
        {
            out.push(choice.clone());
        }
    }
    out
}

/// Random presheaf built from representables and `1` by coproducts,
/// occasional products and a random subobject, with at most `max_total`
/// elements in all.
pub fn random_presheaf(cat: &Arc<FinCategory>, rng: &mut ChaCha8Rng, max_total: usize) -> Presheaf {
    loop {
        let parts: Vec<Presheaf> = (0..rng.gen_range(1..=3))
            .map(|_| {
                if rng.gen_bool(0.25) {
                    terminal_presheaf(cat.clone())
                } else {
                    let a = ObjectId(rng.gen_range(0..cat.num_objects()));
                    representable(cat.clone(), a).unwrap()
                }
            })
            .collect();
        let refs: Vec<&Presheaf> = parts.iter().collect();
        let mut x = coproduct(&refs).unwrap();
        if rng.gen_bool(0.3) {
            let a = ObjectId(rng.gen_range(0..cat.num_objects()));
            x = product(&x, &representable(cat.clone(), a).unwrap()).unwrap();
        }
        let total: usize = cat.objects().map(|o| x.size(o)).sum();
        if total > max_total || total == 0 {
            continue;
        }
        if rng.gen_bool(0.4) {
            let subs = brute_force_subobjects(&x);
            let k = &subs[rng.gen_range(0..subs.len())];
            x = Subobject::new(&x, k.clone()).unwrap().to_presheaf();
        }
        return x;
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
