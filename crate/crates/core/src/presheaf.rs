//! Set-valued covariant functors on a finite category.
//!
//! Arrow maps push forward: for `f: A → B` the map `X(f)` goes from `X(A)`
//! to `X(B)`. Elements of `X(A)` are indices into a per-object label list;
//! equality is the only structure they carry.
//!
//! Besides the presheaf type itself this module provides natural
//! transformations, subobjects, the terminal presheaf `1`, the subobject
//! classifier `Ω` of sieves together with characteristic arrows, and an
//! exhaustive global-section search.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::fincat::{ArrowId, FinCategory, ObjectId};
use crate::heyting::{all_sieves, HeytingError, Sieve};

/// Default bound on `Σ_A |X(A)|` (equivalently on `Π_A 2^|X(A)|` as a power
/// of two) for subobject and natural transformation enumeration.
pub const DEFAULT_ENUMERATION_BITS: u32 = 20;

/// Default bound on the number of nodes the global-section search may visit.
pub const DEFAULT_SEARCH_NODES: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("map for arrow {arrow} is not a total function X(dom) → X(cod)")]
    NotTotal { arrow: ArrowId },
    #[error("expected one element set per object")]
    WrongObjectCount,
    #[error("components do not match the source/target presheaves: {0}")]
    ComponentDomainMismatch(String),
    #[error("not a subobject: arrow {arrow} sends a member outside the subfamily")]
    NotASubobject { arrow: ArrowId },
    #[error("transformation is not natural (square at arrow {arrow} fails)")]
    NotNatural { arrow: ArrowId },
    #[error("size limit exceeded: {needed} > {limit}")]
    SizeLimitExceeded { needed: u64, limit: u64 },
    #[error(transparent)]
    Heyting(#[from] HeytingError),
}

/// A failed functor law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    /// `X(id_A)` moves `element`.
    Identity { object: ObjectId, element: usize },
    /// `X(f ∘ g)(element) ≠ X(f)(X(g)(element))`.
    Composition {
        f: ArrowId,
        g: ArrowId,
        element: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    cat: Arc<FinCategory>,
    labels: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Assembles a presheaf from element labels per object and one total map
    /// per arrow. Only totality is checked; the functor laws are checked by
    /// [`Presheaf::validate`].
    pub fn new(
        cat: Arc<FinCategory>,
        labels: Vec<Vec<String>>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        if labels.len() != cat.num_objects() || maps.len() != cat.num_arrows() {
            return Err(PresheafError::WrongObjectCount);
        }
        for a in cat.arrows() {
            let m = &maps[a.id.0];
            let cod_size = labels[a.cod.0].len();
            if m.len() != labels[a.dom.0].len() || m.iter().any(|&y| y >= cod_size) {
                return Err(PresheafError::NotTotal { arrow: a.id });
            }
        }
        Ok(Presheaf { cat, labels, maps })
    }

    /// Builds the arrow maps from a closure `(arrow, element) -> element`.
    pub fn from_fn(
        cat: Arc<FinCategory>,
        labels: Vec<Vec<String>>,
        map: impl Fn(ArrowId, usize) -> usize,
    ) -> Result<Self, PresheafError> {
        if labels.len() != cat.num_objects() {
            return Err(PresheafError::WrongObjectCount);
        }
        let maps = cat
            .arrows()
            .iter()
            .map(|a| (0..labels[a.dom.0].len()).map(|x| map(a.id, x)).collect())
            .collect();
        Self::new(cat, labels, maps)
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    /// `|X(A)|`.
    pub fn size(&self, o: ObjectId) -> usize {
        self.labels[o.0].len()
    }

    pub fn labels(&self, o: ObjectId) -> &[String] {
        &self.labels[o.0]
    }

    pub fn label(&self, o: ObjectId, x: usize) -> &str {
        &self.labels[o.0][x]
    }

    /// `X(f)(x)`.
    #[inline]
    pub fn apply(&self, f: ArrowId, x: usize) -> usize {
        self.maps[f.0][x]
    }

    pub fn map(&self, f: ArrowId) -> &[usize] {
        &self.maps[f.0]
    }

    /// Checks `X(id_A) = id` and `X(f ∘ g) = X(f) ∘ X(g)` exhaustively,
    /// returning the first violation found.
    pub fn validate(&self) -> Result<(), FunctorViolation> {
        let cat = &*self.cat;
        for o in cat.objects() {
            let id = cat.identity(o);
            if let Some(x) = (0..self.size(o)).find(|&x| self.apply(id, x) != x) {
                return Err(FunctorViolation::Identity {
                    object: o,
                    element: x,
                });
            }
        }
        for g in cat.arrows() {
            for &f in cat.arrows_from(g.cod).expect("valid object") {
                let fg = cat.comp(f, g.id);
                for x in 0..self.size(g.dom) {
                    if self.apply(fg, x) != self.apply(f, self.apply(g.id, x)) {
                        return Err(FunctorViolation::Composition {
                            f,
                            g: g.id,
                            element: x,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_global_section(&self, choice: &[usize]) -> bool {
        choice.len() == self.cat.num_objects()
            && self.cat.objects().all(|o| choice[o.0] < self.size(o))
            && self
                .cat
                .arrows()
                .iter()
                .all(|a| self.apply(a.id, choice[a.dom.0]) == choice[a.cod.0])
    }
}

/// `1(A) = {*}` at every object.
pub fn terminal_presheaf(cat: Arc<FinCategory>) -> Presheaf {
    let labels = vec![vec!["*".to_string()]; cat.num_objects()];
    Presheaf::from_fn(cat, labels, |_, _| 0).expect("singletons are total")
}

/// The representable `Hom(A, -)`: elements of `X(B)` are the arrows
/// `A → B`, and `X(f)(g) = f ∘ g`.
pub fn representable(cat: Arc<FinCategory>, a: ObjectId) -> Result<Presheaf, PresheafError> {
    if !cat.contains_object(a) {
        let e = crate::fincat::CategoryError::UnknownObject(a.to_string());
        return Err(HeytingError::Category(e).into());
    }
    let homs: Vec<Vec<ArrowId>> = cat.objects().map(|b| cat.hom(a, b).to_vec()).collect();
    let labels = homs
        .iter()
        .map(|h| h.iter().map(|&g| cat.arrow_name(g).to_string()).collect())
        .collect();
    let index: Vec<HashMap<ArrowId, usize>> = homs
        .iter()
        .map(|h| h.iter().enumerate().map(|(i, &g)| (g, i)).collect())
        .collect();
    let c = cat.clone();
    Presheaf::from_fn(cat, labels, |f, i| {
        let g = homs[c.dom(f).0][i];
        index[c.cod(f).0][&c.comp(f, g)]
    })
}

/// Disjoint union; element `x` of the `k`-th summand is labelled `k:x`.
pub fn coproduct(parts: &[&Presheaf]) -> Result<Presheaf, PresheafError> {
    let Some(first) = parts.first() else {
        return Err(PresheafError::ComponentDomainMismatch(
            "empty coproduct".into(),
        ));
    };
    let cat = first.cat.clone();
    if parts.iter().any(|p| *p.cat != *cat) {
        return Err(PresheafError::ComponentDomainMismatch(
            "different categories".into(),
        ));
    }
    let offsets: Vec<Vec<usize>> = cat
        .objects()
        .map(|o| {
            parts
                .iter()
                .scan(0, |acc, p| {
                    let start = *acc;
                    *acc += p.size(o);
                    Some(start)
                })
                .collect()
        })
        .collect();
    let labels = cat
        .objects()
        .map(|o| {
            parts
                .iter()
                .enumerate()
                .flat_map(|(k, p)| p.labels(o).iter().map(move |l| format!("{k}:{l}")))
                .collect()
        })
        .collect();
    let maps = cat
        .arrows()
        .iter()
        .map(|a| {
            parts
                .iter()
                .enumerate()
                .flat_map(|(k, p)| {
                    let off = offsets[a.cod.0][k];
                    p.map(a.id).iter().map(move |&y| y + off)
                })
                .collect()
        })
        .collect();
    Presheaf::new(cat, labels, maps)
}

/// Pointwise product; `(x, y)` has index `x · |Y(A)| + y`.
pub fn product(x: &Presheaf, y: &Presheaf) -> Result<Presheaf, PresheafError> {
    if *x.cat != *y.cat {
        return Err(PresheafError::ComponentDomainMismatch(
            "different categories".into(),
        ));
    }
    let cat = x.cat.clone();
    let labels = cat
        .objects()
        .map(|o| {
            x.labels(o)
                .iter()
                .flat_map(|lx| y.labels(o).iter().map(move |ly| format!("({lx},{ly})")))
                .collect()
        })
        .collect();
    let c = cat.clone();
    Presheaf::from_fn(cat, labels, |f, i| {
        let (ny, my) = (y.size(c.dom(f)), y.size(c.cod(f)));
        x.apply(f, i / ny) * my + y.apply(f, i % ny)
    })
}

/// A family of component maps `N_A: X(A) → Y(A)`.
#[derive(Clone, Debug)]
pub struct NaturalTransformation<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    components: Vec<Vec<usize>>,
}

impl<'a> NaturalTransformation<'a> {
    /// Checks shapes only; commutation is checked by [`Self::is_natural`].
    pub fn new(
        source: &'a Presheaf,
        target: &'a Presheaf,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        if source.cat != target.cat {
            return Err(PresheafError::ComponentDomainMismatch(
                "source and target live on different categories".into(),
            ));
        }
        if components.len() != source.cat.num_objects() {
            return Err(PresheafError::ComponentDomainMismatch(
                "one component per object expected".into(),
            ));
        }
        for o in source.cat.objects() {
            let c = &components[o.0];
            if c.len() != source.size(o) || c.iter().any(|&y| y >= target.size(o)) {
                return Err(PresheafError::ComponentDomainMismatch(format!(
                    "component at {} is not a map X(A) → Y(A)",
                    source.cat.object_name(o)
                )));
            }
        }
        Ok(NaturalTransformation {
            source,
            target,
            components,
        })
    }

    /// The unique transformation `X → 1`.
    pub fn to_terminal(source: &'a Presheaf, one: &'a Presheaf) -> Result<Self, PresheafError> {
        let components = source
            .cat
            .objects()
            .map(|o| vec![0; source.size(o)])
            .collect();
        Self::new(source, one, components)
    }

    pub fn identity(x: &'a Presheaf) -> Self {
        let components = x.cat.objects().map(|o| (0..x.size(o)).collect()).collect();
        NaturalTransformation {
            source: x,
            target: x,
            components,
        }
    }

    pub fn source(&self) -> &'a Presheaf {
        self.source
    }

    pub fn target(&self) -> &'a Presheaf {
        self.target
    }

    pub fn component(&self, o: ObjectId) -> &[usize] {
        &self.components[o.0]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// First arrow `f: A → B` and element `x` with
    /// `Y(f)(N_A(x)) ≠ N_B(X(f)(x))`.
    pub fn naturality_witness(&self) -> Option<(ArrowId, usize)> {
        for a in self.source.cat.arrows() {
            for x in 0..self.source.size(a.dom) {
                let up = self.target.apply(a.id, self.components[a.dom.0][x]);
                let across = self.components[a.cod.0][self.source.apply(a.id, x)];
                if up != across {
                    return Some((a.id, x));
                }
            }
        }
        None
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_witness().is_none()
    }
}

/// A subfamily `K(A) ⊆ X(A)` stable under the arrow maps of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subobject<'a> {
    parent: &'a Presheaf,
    members: Vec<BTreeSet<usize>>,
}

impl<'a> Subobject<'a> {
    pub fn new(parent: &'a Presheaf, members: Vec<BTreeSet<usize>>) -> Result<Self, PresheafError> {
        let cat = &parent.cat;
        if members.len() != cat.num_objects() {
            return Err(PresheafError::WrongObjectCount);
        }
        for o in cat.objects() {
            if members[o.0].iter().any(|&x| x >= parent.size(o)) {
                return Err(PresheafError::ComponentDomainMismatch(format!(
                    "member outside X({})",
                    cat.object_name(o)
                )));
            }
        }
        for a in cat.arrows() {
            if members[a.dom.0]
                .iter()
                .any(|&x| !members[a.cod.0].contains(&parent.apply(a.id, x)))
            {
                return Err(PresheafError::NotASubobject { arrow: a.id });
            }
        }
        Ok(Subobject { parent, members })
    }

    pub fn full(parent: &'a Presheaf) -> Self {
        let members = parent
            .cat
            .objects()
            .map(|o| (0..parent.size(o)).collect())
            .collect();
        Subobject { parent, members }
    }

    pub fn empty(parent: &'a Presheaf) -> Self {
        Subobject {
            parent,
            members: vec![BTreeSet::new(); parent.cat.num_objects()],
        }
    }

    pub fn parent(&self) -> &'a Presheaf {
        self.parent
    }

    /// `K(A)` as a set of element indices of `X(A)`.
    pub fn at(&self, o: ObjectId) -> &BTreeSet<usize> {
        &self.members[o.0]
    }

    /// `K` as a presheaf in its own right, with the restricted maps.
    pub fn to_presheaf(&self) -> Presheaf {
        let cat = &self.parent.cat;
        let positions: Vec<HashMap<usize, usize>> = self
            .members
            .iter()
            .map(|m| m.iter().enumerate().map(|(i, &x)| (x, i)).collect())
            .collect();
        let labels = cat
            .objects()
            .map(|o| {
                self.members[o.0]
                    .iter()
                    .map(|&x| self.parent.label(o, x).to_string())
                    .collect()
            })
            .collect();
        let maps = cat
            .arrows()
            .iter()
            .map(|a| {
                self.members[a.dom.0]
                    .iter()
                    .map(|&x| positions[a.cod.0][&self.parent.apply(a.id, x)])
                    .collect()
            })
            .collect();
        Presheaf::new(cat.clone(), labels, maps).expect("restriction of a total map")
    }
}

/// The subobject classifier: `Ω(A)` is the set of sieves on `A` and
/// `Ω(f)` pushes sieves forward along `f`.
#[derive(Clone, Debug)]
pub struct OmegaPresheaf {
    presheaf: Presheaf,
    sieves: Vec<Vec<Sieve>>,
    index: Vec<HashMap<Sieve, usize>>,
}

impl OmegaPresheaf {
    pub fn new(cat: Arc<FinCategory>) -> Result<Self, PresheafError> {
        let sieves: Vec<Vec<Sieve>> = cat
            .objects()
            .map(|o| all_sieves(&cat, o))
            .collect::<Result<_, _>>()?;
        let index: Vec<HashMap<Sieve, usize>> = sieves
            .iter()
            .map(|ss| {
                ss.iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect()
            })
            .collect();
        let labels = sieves
            .iter()
            .map(|ss| ss.iter().map(|s| s.display(&cat).to_string()).collect())
            .collect();
        let mut maps = Vec::with_capacity(cat.num_arrows());
        for a in cat.arrows() {
            let m = sieves[a.dom.0]
                .iter()
                .map(|s| Ok(index[a.cod.0][&s.push(&cat, a.id)?]))
                .collect::<Result<Vec<usize>, HeytingError>>()?;
            maps.push(m);
        }
        let presheaf = Presheaf::new(cat, labels, maps)?;
        Ok(OmegaPresheaf {
            presheaf,
            sieves,
            index,
        })
    }

    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }

    pub fn sieves(&self, o: ObjectId) -> &[Sieve] {
        &self.sieves[o.0]
    }

    pub fn sieve(&self, o: ObjectId, i: usize) -> &Sieve {
        &self.sieves[o.0][i]
    }

    pub fn index_of(&self, s: &Sieve) -> Option<usize> {
        self.index.get(s.base().0)?.get(s).copied()
    }

    /// Element index of `↑A` in `Ω(A)`.
    pub fn principal_index(&self, o: ObjectId) -> usize {
        let cat = self.presheaf.category();
        self.index_of(&Sieve::principal(cat, o).expect("valid object"))
            .expect("principal sieve is enumerated")
    }
}

/// Builds `Ω` over `cat`.
pub fn omega_presheaf(cat: Arc<FinCategory>) -> Result<OmegaPresheaf, PresheafError> {
    OmegaPresheaf::new(cat)
}

/// `χ^K_A(x) = {f: A → B | X(f)(x) ∈ K(B)}`.
pub fn characteristic_arrow<'a>(
    k: &Subobject<'a>,
    omega: &'a OmegaPresheaf,
) -> Result<NaturalTransformation<'a>, PresheafError> {
    let x = k.parent;
    let cat = x.category();
    if **cat != **omega.presheaf.category() {
        return Err(PresheafError::ComponentDomainMismatch(
            "Ω lives on a different category".into(),
        ));
    }
    let mut components = Vec::with_capacity(cat.num_objects());
    for o in cat.objects() {
        let out = cat.arrows_from(o).expect("valid object");
        let mut comp = Vec::with_capacity(x.size(o));
        for e in 0..x.size(o) {
            let members = out
                .iter()
                .copied()
                .filter(|&f| k.members[cat.cod(f).0].contains(&x.apply(f, e)))
                .collect();
            let s = Sieve::from_parts_unchecked(o, members);
            let i = omega
                .index_of(&s)
                .ok_or_else(|| PresheafError::NotASubobject {
                    arrow: cat.identity(o),
                })?;
            comp.push(i);
        }
        components.push(comp);
    }
    NaturalTransformation::new(x, &omega.presheaf, components)
}

/// `K^χ(A) = χ_A⁻¹{↑A}`.
pub fn subobject_from_arrow<'a>(
    chi: &NaturalTransformation<'a>,
    omega: &OmegaPresheaf,
) -> Result<Subobject<'a>, PresheafError> {
    if !std::ptr::eq(chi.target, &omega.presheaf) && *chi.target != omega.presheaf {
        return Err(PresheafError::ComponentDomainMismatch(
            "target is not Ω".into(),
        ));
    }
    if let Some((arrow, _)) = chi.naturality_witness() {
        return Err(PresheafError::NotNatural { arrow });
    }
    let cat = chi.source.category();
    let members = cat
        .objects()
        .map(|o| {
            let top = omega.principal_index(o);
            chi.components[o.0]
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s == top)
                .map(|(x, _)| x)
                .collect()
        })
        .collect();
    Subobject::new(chi.source, members)
}

fn check_bits(needed: u64, bits: u32) -> Result<(), PresheafError> {
    if needed > bits as u64 {
        return Err(PresheafError::SizeLimitExceeded {
            needed,
            limit: bits as u64,
        });
    }
    Ok(())
}

/// Every subobject of `x`, each once.
///
/// `bits` bounds `Σ_A |X(A)|`, i.e. the search space `Π_A 2^|X(A)|` must
/// not exceed `2^bits`.
pub fn enumerate_subobjects(x: &Presheaf, bits: u32) -> Result<Vec<Subobject<'_>>, PresheafError> {
    let cat = x.category();
    let total: u64 = cat.objects().map(|o| x.size(o) as u64).sum();
    check_bits(total, bits)?;

    // Arrows to check once both endpoints are decided, keyed by the later one.
    let n = cat.num_objects();
    let mut checks: Vec<Vec<ArrowId>> = vec![Vec::new(); n];
    for a in cat.arrows() {
        if !cat.is_identity(a.id) {
            checks[a.dom.0.max(a.cod.0)].push(a.id);
        }
    }

    fn rec<'a>(
        x: &'a Presheaf,
        checks: &[Vec<ArrowId>],
        obj: usize,
        chosen: &mut Vec<u32>,
        out: &mut Vec<Subobject<'a>>,
    ) {
        let cat = x.category();
        if obj == cat.num_objects() {
            let members = chosen
                .iter()
                .map(|&m| (0..32).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            out.push(Subobject { parent: x, members });
            return;
        }
        let size = x.size(ObjectId(obj));
        for mask in 0u32..(1u32 << size) {
            chosen.push(mask);
            let ok = checks[obj].iter().all(|&f| {
                let (d, c) = (cat.dom(f).0, cat.cod(f).0);
                (0..x.size(ObjectId(d)))
                    .filter(|i| chosen[d] >> i & 1 == 1)
                    .all(|e| chosen[c] >> x.apply(f, e) & 1 == 1)
            });
            if ok {
                rec(x, checks, obj + 1, chosen, out);
            }
            chosen.pop();
        }
    }

    let mut out = Vec::new();
    rec(x, &checks, 0, &mut Vec::with_capacity(n), &mut out);
    Ok(out)
}

/// Every natural transformation `x → y`, as component tables.
///
/// Search is element by element with each square checked as soon as both
/// of its corners are assigned. `bits` bounds `log2 Π_A |Y(A)|^|X(A)|`.
pub fn natural_transformations(
    x: &Presheaf,
    y: &Presheaf,
    bits: u32,
) -> Result<Vec<Vec<Vec<usize>>>, PresheafError> {
    let cat = x.category();
    if **cat != **y.category() {
        return Err(PresheafError::ComponentDomainMismatch(
            "different categories".into(),
        ));
    }
    let mut log2 = 0f64;
    for o in cat.objects() {
        if x.size(o) > 0 {
            if y.size(o) == 0 {
                return Ok(Vec::new());
            }
            log2 += x.size(o) as f64 * (y.size(o) as f64).log2();
        }
    }
    check_bits(log2.ceil() as u64, bits)?;

    // Variables are (object, element) pairs in object-major order.
    let mut vars: Vec<(ObjectId, usize)> = Vec::new();
    let mut var_of: Vec<Vec<usize>> = Vec::new();
    for o in cat.objects() {
        var_of.push((0..x.size(o)).map(|e| vars.len() + e).collect());
        vars.extend((0..x.size(o)).map(|e| (o, e)));
    }
    // Square (f, e) relates var (dom f, e) and var (cod f, X(f)(e)); it is
    // checked when the later of the two is assigned.
    let mut squares: Vec<Vec<(ArrowId, usize)>> = vec![Vec::new(); vars.len()];
    for a in cat.arrows() {
        for e in 0..x.size(a.dom) {
            let v1 = var_of[a.dom.0][e];
            let v2 = var_of[a.cod.0][x.apply(a.id, e)];
            squares[v1.max(v2)].push((a.id, e));
        }
    }

    struct Ctx<'a> {
        x: &'a Presheaf,
        y: &'a Presheaf,
        vars: Vec<(ObjectId, usize)>,
        var_of: Vec<Vec<usize>>,
        squares: Vec<Vec<(ArrowId, usize)>>,
    }
    fn rec(ctx: &Ctx<'_>, i: usize, vals: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let cat = ctx.x.category();
        if i == ctx.vars.len() {
            out.push(
                ctx.var_of
                    .iter()
                    .map(|vs| vs.iter().map(|&v| vals[v]).collect())
                    .collect(),
            );
            return;
        }
        let (o, _) = ctx.vars[i];
        for val in 0..ctx.y.size(o) {
            vals.push(val);
            let ok = ctx.squares[i].iter().all(|&(f, e)| {
                let lhs = ctx.y.apply(f, vals[ctx.var_of[cat.dom(f).0][e]]);
                let rhs = vals[ctx.var_of[cat.cod(f).0][ctx.x.apply(f, e)]];
                lhs == rhs
            });
            if ok {
                rec(ctx, i + 1, vals, out);
            }
            vals.pop();
        }
    }
    let ctx = Ctx {
        x,
        y,
        vars,
        var_of,
        squares,
    };
    let mut out = Vec::new();
    rec(&ctx, 0, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A choice `γ_A ∈ X(A)` for every object satisfying `X(f)(γ_A) = γ_B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalSection {
    pub choice: Vec<usize>,
}

#[derive(Copy, Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of search nodes before giving up.
    pub max_nodes: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_nodes: DEFAULT_SEARCH_NODES,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSearch {
    /// Sections in lexicographic order of their choice vectors.
    pub sections: Vec<GlobalSection>,
    /// Search nodes visited (branching points plus leaves).
    pub nodes: u64,
    /// Objects in the order the search branches on them.
    pub order: Vec<ObjectId>,
}

struct SectionSearcher<'a> {
    x: &'a Presheaf,
    order: Vec<ObjectId>,
    // non-identity arrows touching each object
    incident: Vec<Vec<ArrowId>>,
    max_nodes: u64,
    nodes: AtomicU64,
}

type Domains = Vec<Vec<bool>>;

impl SectionSearcher<'_> {
    fn tick(&self) -> Result<(), PresheafError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max_nodes {
            return Err(PresheafError::SizeLimitExceeded {
                needed: n,
                limit: self.max_nodes,
            });
        }
        Ok(())
    }

    // Arc consistency over the matching constraints. Returns false on a wipe-out.
    fn propagate(&self, doms: &mut Domains, mut queue: Vec<ObjectId>) -> bool {
        let cat = self.x.category();
        let mut queued = vec![false; cat.num_objects()];
        for o in &queue {
            queued[o.0] = true;
        }
        while let Some(o) = queue.pop() {
            queued[o.0] = false;
            for &f in &self.incident[o.0] {
                let (a, b) = (cat.dom(f), cat.cod(f));
                // cod side: only images of live domain values survive
                let mut image = vec![false; self.x.size(b)];
                for (e, &live) in doms[a.0].iter().enumerate() {
                    if live {
                        image[self.x.apply(f, e)] = true;
                    }
                }
                let mut changed_b = false;
                for (v, keep) in doms[b.0].iter_mut().zip(&image) {
                    if *v && !keep {
                        *v = false;
                        changed_b = true;
                    }
                }
                // dom side: only values mapping into a live codomain value
                let mut changed_a = false;
                for e in 0..self.x.size(a) {
                    if doms[a.0][e] && !doms[b.0][self.x.apply(f, e)] {
                        doms[a.0][e] = false;
                        changed_a = true;
                    }
                }
                for (obj, changed) in [(b, changed_b), (a, changed_a)] {
                    if changed {
                        if !doms[obj.0].iter().any(|&v| v) {
                            return false;
                        }
                        if !queued[obj.0] {
                            queued[obj.0] = true;
                            queue.push(obj);
                        }
                    }
                }
            }
        }
        true
    }

    fn branch_point(&self, doms: &Domains, from: usize) -> Option<usize> {
        (from..self.order.len()).find(|&i| doms[self.order[i].0].iter().filter(|&&v| v).count() > 1)
    }

    fn children(&self, doms: &Domains, pos: usize) -> Vec<(usize, Domains)> {
        let o = self.order[pos];
        doms[o.0]
            .iter()
            .enumerate()
            .filter(|&(_, &live)| live)
            .filter_map(|(v, _)| {
                let mut d = doms.clone();
                for (i, slot) in d[o.0].iter_mut().enumerate() {
                    *slot = i == v;
                }
                self.propagate(&mut d, vec![o]).then_some((pos + 1, d))
            })
            .collect()
    }

    fn solve(
        &self,
        doms: Domains,
        from: usize,
        out: &mut Vec<GlobalSection>,
    ) -> Result<(), PresheafError> {
        self.tick()?;
        match self.branch_point(&doms, from) {
            None => {
                let choice = doms
                    .iter()
                    .map(|d| d.iter().position(|&v| v).expect("nonempty domain"))
                    .collect();
                out.push(GlobalSection { choice });
            }
            Some(pos) => {
                for (next, d) in self.children(&doms, pos) {
                    self.solve(d, next, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Finds every global section of `x` by backtracking with constraint
/// propagation.
///
/// Objects are branched on in a fixed order, most incident non-identity
/// arrows first, ties by object token. After each choice the matching
/// constraints are propagated to all other objects, so any violated
/// constraint prunes the branch immediately. The result is sorted and does
/// not depend on `options.parallel`.
pub fn global_sections(
    x: &Presheaf,
    options: SearchOptions,
) -> Result<SectionSearch, PresheafError> {
    let cat = x.category();
    let n = cat.num_objects();
    let mut incident: Vec<Vec<ArrowId>> = vec![Vec::new(); n];
    for a in cat.arrows() {
        if cat.is_identity(a.id) {
            continue;
        }
        incident[a.dom.0].push(a.id);
        if a.cod != a.dom {
            incident[a.cod.0].push(a.id);
        }
    }
    let mut order: Vec<ObjectId> = cat.objects().collect();
    order.sort_by(|a, b| incident[b.0].len().cmp(&incident[a.0].len()).then(a.cmp(b)));

    let searcher = SectionSearcher {
        x,
        order: order.clone(),
        incident,
        max_nodes: options.max_nodes,
        nodes: AtomicU64::new(0),
    };

    let mut doms: Domains = cat.objects().map(|o| vec![true; x.size(o)]).collect();
    // Non-identity endomorphisms force fixed points.
    for a in cat.arrows() {
        if a.dom == a.cod && !cat.is_identity(a.id) {
            for (e, live) in doms[a.dom.0].iter_mut().enumerate() {
                if x.apply(a.id, e) != e {
                    *live = false;
                }
            }
        }
    }

    let mut sections = Vec::new();
    let consistent = doms.iter().all(|d| d.iter().any(|&v| v))
        && searcher.propagate(&mut doms, cat.objects().collect());
    if consistent {
        if options.parallel {
            searcher.tick()?;
            match searcher.branch_point(&doms, 0) {
                None => searcher.solve_leaf(&doms, &mut sections),
                Some(pos) => {
                    let parts: Vec<Result<Vec<GlobalSection>, PresheafError>> = searcher
                        .children(&doms, pos)
                        .into_par_iter()
                        .map(|(next, d)| {
                            let mut out = Vec::new();
                            searcher.solve(d, next, &mut out).map(|_| out)
                        })
                        .collect();
                    for p in parts {
                        sections.extend(p?);
                    }
                }
            }
        } else {
            searcher.solve(doms, 0, &mut sections)?;
        }
    } else {
        searcher.tick()?;
    }
    sections.sort();
    Ok(SectionSearch {
        sections,
        nodes: searcher.nodes.load(Ordering::Relaxed),
        order,
    })
}

impl SectionSearcher<'_> {
    fn solve_leaf(&self, doms: &Domains, out: &mut Vec<GlobalSection>) {
        let choice = doms
            .iter()
            .map(|d| d.iter().position(|&v| v).expect("nonempty domain"))
            .collect();
        out.push(GlobalSection { choice });
    }
}
