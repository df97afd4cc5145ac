//! Sieves and finite Heyting algebras.
//!
//! A sieve on `A` is a set of arrows out of `A` closed under
//! post-composition. The sieves on a fixed object form a Heyting algebra
//! with intersection, union, the relative pseudo-complement
//! [`Sieve::implies`] and negation `¬S = S ⇒ ∅`; the empty sieve is the
//! bottom and the principal sieve `↑A` the top.
//!
//! The same algebraic structure arises from the open sets of a finite
//! topological space, see [`FiniteTopology`]. Both are flattened into a
//! [`HeytingAlgebraTable`] so the laws can be checked by finite loops.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::fincat::{ArrowId, CategoryError, FinCategory, ObjectId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeytingError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("sieves live on different objects ({0} and {1})")]
    BaseMismatch(ObjectId, ObjectId),
    #[error("arrow {0} does not start at the base object")]
    WrongDomain(ArrowId),
    #[error("not closed under post-composition: {missing} is missing")]
    NotASieve { missing: ArrowId },
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("Heyting law violated: {0}")]
    LawViolation(String),
}

/// A post-composition-closed set of arrows out of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    base: ObjectId,
    members: BTreeSet<ArrowId>,
}

/// Checks that `arrows` all start at `base` and are closed under
/// post-composition.
pub fn is_sieve(
    cat: &FinCategory,
    base: ObjectId,
    arrows: &BTreeSet<ArrowId>,
) -> Result<bool, HeytingError> {
    Ok(sieve_witness(cat, base, arrows)?.is_none())
}

// Returns the first arrow whose absence breaks closure, if any.
fn sieve_witness(
    cat: &FinCategory,
    base: ObjectId,
    arrows: &BTreeSet<ArrowId>,
) -> Result<Option<Result<ArrowId, ArrowId>>, HeytingError> {
    cat.arrows_from(base)?;
    for &f in arrows {
        if f.0 >= cat.num_arrows() {
            return Err(CategoryError::UnknownArrow(f.to_string()).into());
        }
        if cat.dom(f) != base {
            return Ok(Some(Err(f)));
        }
        for &g in cat.arrows_from(cat.cod(f))? {
            let gf = cat.comp(g, f);
            if !arrows.contains(&gf) {
                return Ok(Some(Ok(gf)));
            }
        }
    }
    Ok(None)
}

impl Sieve {
    /// Validates `members` as a sieve on `base`.
    pub fn new(
        cat: &FinCategory,
        base: ObjectId,
        members: BTreeSet<ArrowId>,
    ) -> Result<Self, HeytingError> {
        match sieve_witness(cat, base, &members)? {
            None => Ok(Sieve { base, members }),
            Some(Ok(missing)) => Err(HeytingError::NotASieve { missing }),
            Some(Err(f)) => Err(HeytingError::WrongDomain(f)),
        }
    }

    pub(crate) fn from_parts_unchecked(base: ObjectId, members: BTreeSet<ArrowId>) -> Self {
        Sieve { base, members }
    }

    pub fn empty(base: ObjectId) -> Self {
        Sieve {
            base,
            members: BTreeSet::new(),
        }
    }

    /// `↑A`, every arrow out of `A`.
    pub fn principal(cat: &FinCategory, base: ObjectId) -> Result<Self, HeytingError> {
        Ok(Sieve {
            base,
            members: cat.arrows_from(base)?.iter().copied().collect(),
        })
    }

    pub fn base(&self) -> ObjectId {
        self.base
    }

    pub fn members(&self) -> &BTreeSet<ArrowId> {
        &self.members
    }

    pub fn contains(&self, f: ArrowId) -> bool {
        self.members.contains(&f)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when this is `↑base`; in any category that is exactly when the
    /// identity belongs to it.
    pub fn is_principal(&self, cat: &FinCategory) -> bool {
        self.members.contains(&cat.identity(self.base))
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Codomains of the members. In a poset category this is the upper set
    /// the sieve stands for.
    pub fn codomains(&self, cat: &FinCategory) -> BTreeSet<ObjectId> {
        self.members.iter().map(|&f| cat.cod(f)).collect()
    }

    fn same_base(&self, other: &Sieve) -> Result<(), HeytingError> {
        if self.base != other.base {
            return Err(HeytingError::BaseMismatch(self.base, other.base));
        }
        Ok(())
    }

    pub fn meet(&self, other: &Sieve) -> Result<Sieve, HeytingError> {
        self.same_base(other)?;
        Ok(Sieve {
            base: self.base,
            members: &self.members & &other.members,
        })
    }

    pub fn join(&self, other: &Sieve) -> Result<Sieve, HeytingError> {
        self.same_base(other)?;
        Ok(Sieve {
            base: self.base,
            members: &self.members | &other.members,
        })
    }

    /// `S1 ⇒ S2`: the arrows `f` such that every extension `g ∘ f` lying in
    /// `S1` also lies in `S2`.
    pub fn implies(&self, cat: &FinCategory, other: &Sieve) -> Result<Sieve, HeytingError> {
        self.same_base(other)?;
        let mut members = BTreeSet::new();
        for &f in cat.arrows_from(self.base)? {
            let ok = cat.arrows_from(cat.cod(f))?.iter().all(|&g| {
                let gf = cat.comp(g, f);
                !self.members.contains(&gf) || other.members.contains(&gf)
            });
            if ok {
                members.insert(f);
            }
        }
        Ok(Sieve {
            base: self.base,
            members,
        })
    }

    /// Pseudo-complement `¬S = S ⇒ ∅`.
    pub fn not(&self, cat: &FinCategory) -> Result<Sieve, HeytingError> {
        self.implies(cat, &Sieve::empty(self.base))
    }

    /// Pushes the sieve forward along `f: A → B`:
    /// `{h: B → C | h ∘ f ∈ S}`, a sieve on `B`.
    pub fn push(&self, cat: &FinCategory, f: ArrowId) -> Result<Sieve, HeytingError> {
        if f.0 >= cat.num_arrows() {
            return Err(CategoryError::UnknownArrow(f.to_string()).into());
        }
        if cat.dom(f) != self.base {
            return Err(HeytingError::BaseMismatch(cat.dom(f), self.base));
        }
        let b = cat.cod(f);
        let members = cat
            .arrows_from(b)?
            .iter()
            .copied()
            .filter(|&h| self.members.contains(&cat.comp(h, f)))
            .collect();
        Ok(Sieve { base: b, members })
    }

    /// Renders the members as `{name, name}` using arrow names.
    pub fn display<'a>(&'a self, cat: &'a FinCategory) -> SieveDisplay<'a> {
        SieveDisplay { sieve: self, cat }
    }
}

pub struct SieveDisplay<'a> {
    sieve: &'a Sieve,
    cat: &'a FinCategory,
}

impl fmt::Display for SieveDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &a) in self.sieve.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.cat.arrow_name(a))?;
        }
        f.write_str("}")
    }
}

/// Every sieve on `base`, each once, ordered lexicographically by member
/// tokens.
///
/// Sieves are exactly the unions of the principal up-closures
/// `{g ∘ f}` of single arrows, so the enumeration grows the family of
/// unions breadth-first instead of filtering the full power set.
pub fn all_sieves(cat: &FinCategory, base: ObjectId) -> Result<Vec<Sieve>, HeytingError> {
    let out = cat.arrows_from(base)?;
    let pos: HashMap<ArrowId, usize> = out.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let words = out.len().div_ceil(64).max(1);
    let ups: Vec<Vec<u64>> = out
        .iter()
        .map(|&f| {
            let mut m = vec![0u64; words];
            for &g in cat.arrows_from(cat.cod(f)).expect("valid object") {
                let i = pos[&cat.comp(g, f)];
                m[i / 64] |= 1 << (i % 64);
            }
            m
        })
        .collect();

    let empty = vec![0u64; words];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([empty.clone()]);
    let mut frontier = vec![empty];
    while let Some(mask) = frontier.pop() {
        for up in &ups {
            let joined: Vec<u64> = mask.iter().zip(up).map(|(a, b)| a | b).collect();
            if seen.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }

    let mut sieves: Vec<Sieve> = seen
        .into_iter()
        .map(|mask| Sieve {
            base,
            members: (0..out.len())
                .filter(|i| mask[i / 64] >> (i % 64) & 1 == 1)
                .map(|i| out[i])
                .collect(),
        })
        .collect();
    sort_sieves(&mut sieves);
    Ok(sieves)
}

pub(crate) fn sort_sieves(sieves: &mut [Sieve]) {
    sieves.sort_by(|a, b| a.members.iter().cmp(b.members.iter()));
}

/// A finite topological space given by its family of open sets.
#[derive(Clone, Debug)]
pub struct FiniteTopology {
    points: Vec<String>,
    opens: Vec<BTreeSet<usize>>,
}

impl FiniteTopology {
    /// Validates the family: contains `∅` and the whole space, closed under
    /// pairwise union and intersection. Duplicate opens are dropped and the
    /// rest sorted by size, then lexicographically.
    pub fn new(
        points: Vec<String>,
        opens: impl IntoIterator<Item = BTreeSet<usize>>,
    ) -> Result<Self, HeytingError> {
        let n = points.len();
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != n {
            return Err(HeytingError::NotATopology("repeated point".into()));
        }
        let mut family: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for o in opens {
            if let Some(&p) = o.iter().find(|&&p| p >= n) {
                return Err(HeytingError::NotATopology(format!(
                    "unknown point index {p}"
                )));
            }
            family.insert(o);
        }
        let full: BTreeSet<usize> = (0..n).collect();
        if !family.contains(&BTreeSet::new()) {
            return Err(HeytingError::NotATopology("∅ is not open".into()));
        }
        if !family.contains(&full) {
            return Err(HeytingError::NotATopology(
                "the whole space is not open".into(),
            ));
        }
        for a in &family {
            for b in &family {
                if !family.contains(&(a | b)) {
                    return Err(HeytingError::NotATopology("not closed under union".into()));
                }
                if !family.contains(&(a & b)) {
                    return Err(HeytingError::NotATopology(
                        "not closed under intersection".into(),
                    ));
                }
            }
        }
        let mut opens: Vec<BTreeSet<usize>> = family.into_iter().collect();
        opens.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(FiniteTopology { points, opens })
    }

    /// Every subset is open.
    pub fn discrete(points: Vec<String>) -> Result<Self, HeytingError> {
        let n = points.len();
        let opens = (0u64..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect());
        Self::new(points, opens)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[BTreeSet<usize>] {
        &self.opens
    }

    /// Largest open set contained in `set`.
    pub fn interior(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.opens
            .iter()
            .filter(|o| o.is_subset(set))
            .flat_map(|o| o.iter().copied())
            .collect()
    }

    /// `{a, b}` style name of a set of points.
    pub fn label(&self, o: &BTreeSet<usize>) -> String {
        let names: Vec<&str> = o.iter().map(|&i| self.points[i].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A finite Heyting algebra flattened into operation tables over element
/// indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeytingAlgebraTable {
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub implies: Vec<Vec<usize>>,
    pub not: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl HeytingAlgebraTable {
    /// The algebra of open sets: meet `∩`, join `∪`, `¬O = int(X − O)` and
    /// `O1 ⇒ O2` the largest open `U` with `U ∩ O1 ⊆ O2`.
    pub fn from_topology(top: &FiniteTopology) -> Self {
        let opens = top.opens();
        let index: HashMap<&BTreeSet<usize>, usize> =
            opens.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let full: BTreeSet<usize> = (0..top.points().len()).collect();
        let n = opens.len();
        type SetOp<'a> = &'a dyn Fn(&BTreeSet<usize>, &BTreeSet<usize>) -> BTreeSet<usize>;
        let table = |op: SetOp| {
            (0..n)
                .map(|i| (0..n).map(|j| index[&op(&opens[i], &opens[j])]).collect())
                .collect::<Vec<Vec<usize>>>()
        };
        let implies = table(&|a, b| {
            opens
                .iter()
                .filter(|u| (*u & a).is_subset(b))
                .flat_map(|u| u.iter().copied())
                .collect()
        });
        HeytingAlgebraTable {
            labels: opens.iter().map(|o| top.label(o)).collect(),
            leq: (0..n)
                .map(|i| (0..n).map(|j| opens[i].is_subset(&opens[j])).collect())
                .collect(),
            meet: table(&|a, b| a & b),
            join: table(&|a, b| a | b),
            implies,
            not: opens
                .iter()
                .map(|o| index[&top.interior(&(&full - o))])
                .collect(),
            zero: index[&BTreeSet::new()],
            one: index[&full],
        }
    }

    /// The algebra `Ω(A)` of sieves on `base`.
    pub fn from_sieves(cat: &FinCategory, base: ObjectId) -> Result<Self, HeytingError> {
        let sieves = all_sieves(cat, base)?;
        let index: HashMap<&Sieve, usize> =
            sieves.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let n = sieves.len();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        let mut implies = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                meet[i][j] = index[&sieves[i].meet(&sieves[j])?];
                join[i][j] = index[&sieves[i].join(&sieves[j])?];
                implies[i][j] = index[&sieves[i].implies(cat, &sieves[j])?];
            }
        }
        let not = sieves
            .iter()
            .map(|s| Ok(index[&s.not(cat)?]))
            .collect::<Result<_, HeytingError>>()?;
        Ok(HeytingAlgebraTable {
            labels: sieves.iter().map(|s| s.display(cat).to_string()).collect(),
            leq: (0..n)
                .map(|i| (0..n).map(|j| sieves[i].is_subset(&sieves[j])).collect())
                .collect(),
            meet,
            join,
            implies,
            not,
            zero: index[&Sieve::empty(base)],
            one: index[&Sieve::principal(cat, base)?],
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Elements `x` with `x ∨ ¬x ≠ 1`.
    pub fn excluded_middle_failures(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.join[x][self.not[x]] != self.one)
            .collect()
    }

    /// Exhaustively checks the partial order, the lattice and distributive
    /// laws, the bounds, the adjunction `s ≤ (a ⇒ b) ⟺ s ∧ a ≤ b` and
    /// `¬x = x ⇒ 0`.
    pub fn check_laws(&self) -> Result<(), HeytingError> {
        let n = self.len();
        let fail = |m: String| Err(HeytingError::LawViolation(m));
        let l = |i: usize| &self.labels[i];
        for a in 0..n {
            if !self.leq[a][a] {
                return fail(format!("reflexivity at {}", l(a)));
            }
            if !self.leq[self.zero][a] || !self.leq[a][self.one] {
                return fail(format!("bounds at {}", l(a)));
            }
            if self.not[a] != self.implies[a][self.zero] {
                return fail(format!("¬{} ≠ {} ⇒ 0", l(a), l(a)));
            }
            if self.meet[a][a] != a || self.join[a][a] != a {
                return fail(format!("idempotence at {}", l(a)));
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return fail(format!("antisymmetry at {}, {}", l(a), l(b)));
                }
                let (m, j) = (self.meet[a][b], self.join[a][b]);
                if m != self.meet[b][a] || j != self.join[b][a] {
                    return fail(format!("commutativity at {}, {}", l(a), l(b)));
                }
                if self.meet[a][j] != a || self.join[a][m] != a {
                    return fail(format!("absorption at {}, {}", l(a), l(b)));
                }
                if self.leq[a][b] != (m == a) || self.leq[a][b] != (j == b) {
                    return fail(format!("order/lattice mismatch at {}, {}", l(a), l(b)));
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return fail(format!("transitivity at {}, {}, {}", l(a), l(b), l(c)));
                    }
                    if self.meet[self.meet[a][b]][c] != self.meet[a][self.meet[b][c]]
                        || self.join[self.join[a][b]][c] != self.join[a][self.join[b][c]]
                    {
                        return fail(format!("associativity at {}, {}, {}", l(a), l(b), l(c)));
                    }
                    if self.meet[a][self.join[b][c]] != self.join[self.meet[a][b]][self.meet[a][c]]
                        || self.join[a][self.meet[b][c]]
                            != self.meet[self.join[a][b]][self.join[a][c]]
                    {
                        return fail(format!("distributivity at {}, {}, {}", l(a), l(b), l(c)));
                    }
                    // c ≤ (a ⇒ b) iff c ∧ a ≤ b
                    if self.leq[c][self.implies[a][b]] != self.leq[self.meet[c][a]][b] {
                        return fail(format!("adjunction at s={}, {} ⇒ {}", l(c), l(a), l(b)));
                    }
                }
            }
        }
        Ok(())
    }
}
