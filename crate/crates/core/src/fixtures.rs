//! Small named categories, topologies and operators used throughout the
//! tests, the acceptance suite and the bundled scenarios.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fincat::{poset_to_category, CategoryBuilder, FinCategory};
use crate::heyting::FiniteTopology;
use crate::quantum::gauss::{rat, GaussianRational, Rational};
use crate::quantum::{function_of, make_operator, SpectralOperator};

fn poset(elements: &[&str], strict: &[(&str, &str)]) -> FinCategory {
    let mut leq: Vec<(&str, &str)> = elements.iter().map(|&e| (e, e)).collect();
    leq.extend_from_slice(strict);
    poset_to_category(elements, &leq).expect("fixture is a poset")
}

/// One object, identity only.
pub fn one_object() -> FinCategory {
    poset(&["A"], &[])
}

/// `p ≤ q`.
pub fn chain2() -> FinCategory {
    poset(&["p", "q"], &[("p", "q")])
}

/// `p ≤ q ≤ r`.
pub fn chain3() -> FinCategory {
    poset(&["p", "q", "r"], &[("p", "q"), ("q", "r"), ("p", "r")])
}

/// `p ≤ q`, `p ≤ r` with `q`, `r` incomparable.
pub fn vposet() -> FinCategory {
    poset(&["p", "q", "r"], &[("p", "q"), ("p", "r")])
}

/// Two incomparable elements.
pub fn antichain() -> FinCategory {
    poset(&["p", "q"], &[])
}

/// The diamond `b ≤ l, r ≤ t`.
pub fn diamond() -> FinCategory {
    poset(
        &["b", "l", "r", "t"],
        &[("b", "l"), ("b", "r"), ("b", "t"), ("l", "t"), ("r", "t")],
    )
}

/// The group `Z/2` as a one-object category: `s ∘ s = id`.
pub fn z2_group() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let o = b.object_with_identity("*").expect("fresh");
    let s = b.arrow("s", o, o).expect("fresh");
    let id = b.arrow_id("id_*").expect("identity");
    b.compose(s, s, id).expect("known arrows");
    b.build().expect("Z/2 is a category")
}

/// The monoid `{id, e}` with `e ∘ e = e`.
pub fn idempotent_monoid() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let o = b.object_with_identity("A").expect("fresh");
    let e = b.arrow("e", o, o).expect("fresh");
    b.compose(e, e, e).expect("known arrows");
    b.build().expect("idempotent monoid is a category")
}

/// Two parallel arrows `f, g: A → B`.
pub fn parallel_pair() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let a = b.object_with_identity("A").expect("fresh");
    let c = b.object_with_identity("B").expect("fresh");
    b.arrow("f", a, c).expect("fresh");
    b.arrow("g", a, c).expect("fresh");
    b.build().expect("parallel pair is a category")
}

/// Every small fixture category, by name.
pub fn categories() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("one_object", one_object()),
        ("chain2", chain2()),
        ("chain3", chain3()),
        ("vposet", vposet()),
        ("antichain", antichain()),
        ("diamond", diamond()),
        ("z2_group", z2_group()),
        ("idempotent_monoid", idempotent_monoid()),
        ("parallel_pair", parallel_pair()),
    ]
}

/// Sierpiński space: points `a, b`, opens `∅, {a}, {a, b}`.
pub fn sierpinski() -> FiniteTopology {
    FiniteTopology::new(
        vec!["a".into(), "b".into()],
        [BTreeSet::new(), BTreeSet::from([0]), BTreeSet::from([0, 1])],
    )
    .expect("Sierpiński space is a topology")
}

/// Integer vector as Gaussian rationals.
pub fn cvec(xs: &[i64]) -> Vec<GaussianRational> {
    xs.iter().map(|&x| GaussianRational::from_int(x)).collect()
}

fn two_level(
    name: &str,
    up: Vec<GaussianRational>,
    down: Vec<GaussianRational>,
) -> SpectralOperator {
    make_operator(
        name,
        2,
        vec![(rat(1, 1), vec![up]), (rat(-1, 1), vec![down])],
    )
    .expect("orthogonal basis")
}

pub fn sigma_z() -> SpectralOperator {
    two_level("sigma_z", cvec(&[1, 0]), cvec(&[0, 1]))
}

pub fn sigma_x() -> SpectralOperator {
    two_level("sigma_x", cvec(&[1, 1]), cvec(&[1, -1]))
}

pub fn sigma_y() -> SpectralOperator {
    let i = GaussianRational::i();
    let one = GaussianRational::from_int(1);
    two_level("sigma_y", vec![one.clone(), i.clone()], vec![one, -i])
}

/// Nine orthogonal bases of `ℂ⁴` built from 18 rays with components in
/// `{0, ±1}`; every ray lies in exactly two bases, so no assignment can pick
/// exactly one ray per basis.
pub const CABELLO_BASES: [[[i64; 4]; 4]; 9] = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
    [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
    [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
    [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
    [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
    [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
    [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
    [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
];

/// One nondegenerate operator per basis, eigenvalues `1, 2, 3, 4`,
/// named `B1` … `B9`.
pub fn basis_operators(bases: &[[[i64; 4]; 4]]) -> Vec<SpectralOperator> {
    bases
        .iter()
        .enumerate()
        .map(|(k, basis)| {
            let groups = basis
                .iter()
                .enumerate()
                .map(|(i, v)| (rat(i as i64 + 1, 1), vec![cvec(v)]))
                .collect();
            make_operator(format!("B{}", k + 1), 4, groups).expect("orthogonal basis")
        })
        .collect()
}

pub fn cabello_operators() -> Vec<SpectralOperator> {
    basis_operators(&CABELLO_BASES)
}

/// Operators and a state drawn from a seeded generator.
#[derive(Clone, Debug)]
pub struct RandomScenario {
    pub seed: u64,
    pub dim: usize,
    pub operators: Vec<SpectralOperator>,
    pub state: Vec<GaussianRational>,
}

const SMALL_GAUSSIANS: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (2, 0),
    (1, 1),
    (1, -1),
    (-2, 1),
];

fn small_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    let (re, im) = SMALL_GAUSSIANS[rng.gen_range(0..SMALL_GAUSSIANS.len())];
    GaussianRational::new(rat(re, 1), rat(im, 1))
}

/// A permuted standard basis with a few disjoint coordinate pairs mixed by
/// `[[a, -b̄], [b, ā]]`, which keeps it orthogonal.
fn random_basis(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<GaussianRational>> {
    let zero = GaussianRational::from_int(0);
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let mut basis: Vec<Vec<GaussianRational>> = (0..dim)
        .map(|i| {
            let mut v = vec![zero.clone(); dim];
            v[perm[i]] = GaussianRational::from_int(1);
            v
        })
        .collect();
    let mut slots: Vec<usize> = (0..dim).collect();
    slots.shuffle(rng);
    for pair in slots.chunks_exact(2) {
        if rng.gen_bool(0.3) {
            continue;
        }
        let (i, j) = (pair[0], pair[1]);
        let (a, b) = (small_gaussian(rng), small_gaussian(rng));
        let (ei, ej) = (basis[i].clone(), basis[j].clone());
        basis[i] = ei
            .iter()
            .zip(&ej)
            .map(|(x, y)| &(&a * x) + &(&b * y))
            .collect();
        basis[j] = ei
            .iter()
            .zip(&ej)
            .map(|(x, y)| &(&a.conj() * y) - &(&b.conj() * x))
            .collect();
    }
    basis
}

fn operator_on_basis(
    rng: &mut ChaCha8Rng,
    name: String,
    basis: &[Vec<GaussianRational>],
) -> SpectralOperator {
    let dim = basis.len();
    let mut groups: BTreeMap<i64, Vec<Vec<GaussianRational>>> = BTreeMap::new();
    for v in basis {
        groups
            .entry(rng.gen_range(-2..=2))
            .or_default()
            .push(v.clone());
    }
    let eig = groups.into_iter().map(|(a, vs)| (rat(a, 1), vs)).collect();
    make_operator(name, dim, eig).expect("orthogonal basis")
}

/// Draws `count` operators on `ℂ^dim` and a state. Roughly half of the
/// operators after the first are functions of earlier ones, the rest share
/// or replace the basis, so the operator category has nontrivial arrows.
/// The state is an eigenvector of one of the bases half of the time.
pub fn random_scenario(seed: u64, dim: usize, count: usize) -> RandomScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases = vec![random_basis(&mut rng, dim)];
    let mut operators: Vec<SpectralOperator> = Vec::new();
    for k in 0..count {
        let name = format!("A{}", k + 1);
        let op = match rng.gen_range(0..3) {
            0 if !operators.is_empty() => {
                let src = &operators[rng.gen_range(0..operators.len())];
                let f: BTreeMap<Rational, Rational> = src
                    .spectrum()
                    .iter()
                    .map(|a| (a.clone(), rat(rng.gen_range(-1..=2), 1)))
                    .collect();
                function_of(src, &f, name).expect("total function")
            }
            1 => {
                bases.push(random_basis(&mut rng, dim));
                operator_on_basis(&mut rng, name, bases.last().expect("just pushed"))
            }
            _ => {
                let b = bases[rng.gen_range(0..bases.len())].clone();
                operator_on_basis(&mut rng, name, &b)
            }
        };
        operators.push(op);
    }
    let state = if rng.gen_bool(0.5) {
        let b = &bases[rng.gen_range(0..bases.len())];
        b[rng.gen_range(0..dim)].clone()
    } else {
        loop {
            let v: Vec<GaussianRational> = (0..dim)
                .map(|_| GaussianRational::from_int(rng.gen_range(-2..=2)))
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                break v;
            }
        }
    };
    RandomScenario {
        seed,
        dim,
        operators,
        state,
    }
}
