//! Finite ("small") categories.
//!
//! A [`FinCategory`] is an explicit finite presentation: a list of objects,
//! a list of arrows with domain and codomain, a chosen identity for every
//! object and a total composition table on composable pairs. Validation is
//! eager, so every value of this type satisfies the category axioms.
//!
//! Composition follows the usual right-to-left convention: for `g: C → B`
//! and `f: B → A` the composite is `f ∘ g: C → A`, written
//! `compose(f, g)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of an object inside one [`FinCategory`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

/// Index of an arrow inside one [`FinCategory`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: ArrowId,
    pub name: String,
    pub dom: ObjectId,
    pub cod: ObjectId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("object `{object}` has no identity arrow")]
    MissingIdentity { object: String },
    #[error("composite `{f} ∘ {g}` is ill-typed: {reason}")]
    CompositionDomainMismatch {
        f: String,
        g: String,
        reason: String,
    },
    #[error("composable pair `{f} ∘ {g}` has no composite")]
    MissingComposite { f: String, g: String },
    #[error("associativity fails for ({f} ∘ {g}) ∘ {h}")]
    AssociativityViolation { f: String, g: String, h: String },
    #[error("identity law fails: `{identity}` composed with `{arrow}` gives `{got}`")]
    IdentityLawViolation {
        identity: String,
        arrow: String,
        got: String,
    },
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("`{f}` cannot follow `{g}`: cod {g} ≠ dom {f}")]
    NotComposable { f: String, g: String },
}

/// An immutable, validated finite category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<ArrowId>,
    // composition[f * n + g] = f ∘ g when cod g = dom f
    composition: Vec<Option<ArrowId>>,
    outgoing: Vec<Vec<ArrowId>>,
    incoming: Vec<Vec<ArrowId>>,
    homs: HashMap<(ObjectId, ObjectId), Vec<ArrowId>>,
}

/// Incremental description of a category, checked by [`CategoryBuilder::build`].
///
/// Composites involving an identity may be omitted from the table; they are
/// forced by the identity laws and filled in. Entries that are present are
/// checked against those laws.
#[derive(Default, Debug, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    object_index: HashMap<String, ObjectId>,
    arrows: Vec<Arrow>,
    arrow_index: HashMap<String, ArrowId>,
    identities: HashMap<ObjectId, ArrowId>,
    table: Vec<(ArrowId, ArrowId, ArrowId)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Result<ObjectId, CategoryError> {
        let name = name.into();
        if self.object_index.contains_key(&name) {
            return Err(CategoryError::DuplicateName(name));
        }
        let id = ObjectId(self.objects.len());
        self.object_index.insert(name.clone(), id);
        self.objects.push(name);
        Ok(id)
    }

    pub fn arrow(
        &mut self,
        name: impl Into<String>,
        dom: ObjectId,
        cod: ObjectId,
    ) -> Result<ArrowId, CategoryError> {
        let name = name.into();
        for o in [dom, cod] {
            if o.0 >= self.objects.len() {
                return Err(CategoryError::UnknownObject(o.to_string()));
            }
        }
        if self.arrow_index.contains_key(&name) {
            return Err(CategoryError::DuplicateName(name));
        }
        let id = ArrowId(self.arrows.len());
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow { id, name, dom, cod });
        Ok(id)
    }

    /// Declares `arrow` to be the identity on `object`.
    pub fn identity(&mut self, object: ObjectId, arrow: ArrowId) -> Result<(), CategoryError> {
        if object.0 >= self.objects.len() {
            return Err(CategoryError::UnknownObject(object.to_string()));
        }
        if arrow.0 >= self.arrows.len() {
            return Err(CategoryError::UnknownArrow(arrow.to_string()));
        }
        self.identities.insert(object, arrow);
        Ok(())
    }

    /// Adds an object together with a fresh identity arrow named `id_<name>`.
    pub fn object_with_identity(
        &mut self,
        name: impl Into<String>,
    ) -> Result<ObjectId, CategoryError> {
        let name = name.into();
        let o = self.object(name.clone())?;
        let id = self.arrow(format!("id_{name}"), o, o)?;
        self.identities.insert(o, id);
        Ok(o)
    }

    /// Records the table entry `f ∘ g = composite`.
    pub fn compose(
        &mut self,
        f: ArrowId,
        g: ArrowId,
        composite: ArrowId,
    ) -> Result<(), CategoryError> {
        for a in [f, g, composite] {
            if a.0 >= self.arrows.len() {
                return Err(CategoryError::UnknownArrow(a.to_string()));
            }
        }
        self.table.push((f, g, composite));
        Ok(())
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn build(self) -> Result<FinCategory, CategoryError> {
        let n = self.arrows.len();
        let name = |a: ArrowId| self.arrows[a.0].name.clone();

        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, obj) in self.objects.iter().enumerate() {
            let Some(&id) = self.identities.get(&ObjectId(i)) else {
                return Err(CategoryError::MissingIdentity {
                    object: obj.clone(),
                });
            };
            let a = &self.arrows[id.0];
            if a.dom != ObjectId(i) || a.cod != ObjectId(i) {
                return Err(CategoryError::MissingIdentity {
                    object: obj.clone(),
                });
            }
            identities.push(id);
        }
        let identity_set: BTreeSet<ArrowId> = identities.iter().copied().collect();

        let mut composition: Vec<Option<ArrowId>> = vec![None; n * n];
        for &(f, g, c) in &self.table {
            let (af, ag) = (&self.arrows[f.0], &self.arrows[g.0]);
            if ag.cod != af.dom {
                return Err(CategoryError::CompositionDomainMismatch {
                    f: name(f),
                    g: name(g),
                    reason: "cod g ≠ dom f".into(),
                });
            }
            // Identity laws take precedence over typing of the result.
            if identity_set.contains(&f) && c != g {
                return Err(CategoryError::IdentityLawViolation {
                    identity: name(f),
                    arrow: name(g),
                    got: name(c),
                });
            }
            if identity_set.contains(&g) && c != f {
                return Err(CategoryError::IdentityLawViolation {
                    identity: name(g),
                    arrow: name(f),
                    got: name(c),
                });
            }
            let ac = &self.arrows[c.0];
            if ac.dom != ag.dom || ac.cod != af.cod {
                return Err(CategoryError::CompositionDomainMismatch {
                    f: name(f),
                    g: name(g),
                    reason: format!("composite `{}` has the wrong type", ac.name),
                });
            }
            match composition[f.0 * n + g.0] {
                Some(prev) if prev != c => {
                    return Err(CategoryError::CompositionDomainMismatch {
                        f: name(f),
                        g: name(g),
                        reason: "two different table entries".into(),
                    })
                }
                _ => composition[f.0 * n + g.0] = Some(c),
            }
        }

        for a in &self.arrows {
            let id_cod = identities[a.cod.0];
            let id_dom = identities[a.dom.0];
            composition[id_cod.0 * n + a.id.0].get_or_insert(a.id);
            composition[a.id.0 * n + id_dom.0].get_or_insert(a.id);
        }

        let mut outgoing = vec![Vec::new(); self.objects.len()];
        let mut incoming = vec![Vec::new(); self.objects.len()];
        let mut homs: HashMap<(ObjectId, ObjectId), Vec<ArrowId>> = HashMap::new();
        for a in &self.arrows {
            outgoing[a.dom.0].push(a.id);
            incoming[a.cod.0].push(a.id);
            homs.entry((a.dom, a.cod)).or_default().push(a.id);
        }

        for f in &self.arrows {
            for &g in &incoming[f.dom.0] {
                if composition[f.id.0 * n + g.0].is_none() {
                    return Err(CategoryError::MissingComposite {
                        f: f.name.clone(),
                        g: name(g),
                    });
                }
            }
        }

        let cat = FinCategory {
            objects: self.objects,
            arrows: self.arrows,
            identities,
            composition,
            outgoing,
            incoming,
            homs,
        };
        cat.check_associativity()?;
        Ok(cat)
    }
}

impl FinCategory {
    fn check_associativity(&self) -> Result<(), CategoryError> {
        for h in &self.arrows {
            for &g in &self.outgoing[h.cod.0] {
                let gh = self.comp(g, h.id);
                for &f in &self.outgoing[self.arrows[g.0].cod.0] {
                    let fg = self.comp(f, g);
                    if self.comp(fg, h.id) != self.comp(f, gh) {
                        return Err(CategoryError::AssociativityViolation {
                            f: self.arrows[f.0].name.clone(),
                            g: self.arrows[g.0].name.clone(),
                            h: h.name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite of a pair already known to be composable.
    #[inline]
    pub(crate) fn comp(&self, f: ArrowId, g: ArrowId) -> ArrowId {
        self.composition[f.0 * self.arrows.len() + g.0].expect("composable pair")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn dom(&self, a: ArrowId) -> ObjectId {
        self.arrows[a.0].dom
    }

    pub fn cod(&self, a: ArrowId) -> ObjectId {
        self.arrows[a.0].cod
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.0]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name).map(ObjectId)
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name).map(ArrowId)
    }

    pub fn contains_object(&self, o: ObjectId) -> bool {
        o.0 < self.objects.len()
    }

    pub fn identity(&self, o: ObjectId) -> ArrowId {
        self.identities[o.0]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.identities[self.arrows[a.0].dom.0] == a
    }

    /// All arrows with domain `o`, including its identity, in token order.
    pub fn arrows_from(&self, o: ObjectId) -> Result<&[ArrowId], CategoryError> {
        self.outgoing
            .get(o.0)
            .map(Vec::as_slice)
            .ok_or_else(|| CategoryError::UnknownObject(o.to_string()))
    }

    /// All arrows with codomain `o`, in token order.
    pub fn arrows_into(&self, o: ObjectId) -> Result<&[ArrowId], CategoryError> {
        self.incoming
            .get(o.0)
            .map(Vec::as_slice)
            .ok_or_else(|| CategoryError::UnknownObject(o.to_string()))
    }

    /// The arrows `a → b`.
    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[ArrowId] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `f ∘ g`, defined when `cod g = dom f`.
    pub fn compose(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId, CategoryError> {
        let n = self.arrows.len();
        if f.0 >= n {
            return Err(CategoryError::UnknownArrow(f.to_string()));
        }
        if g.0 >= n {
            return Err(CategoryError::UnknownArrow(g.to_string()));
        }
        self.composition[f.0 * n + g.0].ok_or_else(|| CategoryError::NotComposable {
            f: self.arrows[f.0].name.clone(),
            g: self.arrows[g.0].name.clone(),
        })
    }

    /// True when every hom-set has at most one arrow.
    pub fn is_thin(&self) -> bool {
        self.homs.values().all(|h| h.len() <= 1)
    }

    /// Whether `a` is terminal: exactly one arrow from every object into it.
    pub fn is_terminal(&self, a: ObjectId) -> bool {
        self.objects().all(|b| self.hom(b, a).len() == 1)
    }
}

/// Builds the thin category of a finite partial order.
///
/// `leq` lists the pairs `(p, q)` with `p ≤ q`; it must be reflexive,
/// transitive and antisymmetric on `elements`. Identities are named `id_p`
/// and the other arrows `p->q`.
pub fn poset_to_category<S: AsRef<str>>(
    elements: &[S],
    leq: &[(S, S)],
) -> Result<FinCategory, CategoryError> {
    let idx: BTreeMap<&str, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_ref(), i))
        .collect();
    if idx.len() != elements.len() {
        return Err(CategoryError::NotAPoset("repeated element".into()));
    }
    let n = elements.len();
    let mut rel = vec![vec![false; n]; n];
    for (p, q) in leq {
        let (p, q) = (p.as_ref(), q.as_ref());
        let pi = *idx
            .get(p)
            .ok_or_else(|| CategoryError::UnknownObject(p.into()))?;
        let qi = *idx
            .get(q)
            .ok_or_else(|| CategoryError::UnknownObject(q.into()))?;
        rel[pi][qi] = true;
    }
    let nm = |i: usize| elements[i].as_ref();
    if let Some(i) = (0..n).find(|&i| !rel[i][i]) {
        return Err(CategoryError::NotAPoset(format!(
            "reflexivity fails at {}",
            nm(i)
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rel[i][j] && rel[j][i] {
                return Err(CategoryError::NotAPoset(format!(
                    "antisymmetry fails: {} ≤ {} and {} ≤ {}",
                    nm(i),
                    nm(j),
                    nm(j),
                    nm(i)
                )));
            }
            for k in 0..n {
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Err(CategoryError::NotAPoset(format!(
                        "transitivity fails: {} ≤ {} ≤ {} but not {} ≤ {}",
                        nm(i),
                        nm(j),
                        nm(k),
                        nm(i),
                        nm(k)
                    )));
                }
            }
        }
    }

    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjectId> = (0..n)
        .map(|i| b.object_with_identity(nm(i)))
        .collect::<Result<_, _>>()?;
    let mut arrow = vec![vec![None; n]; n];
    for i in 0..n {
        arrow[i][i] = b.arrow_id(&format!("id_{}", nm(i)));
        for j in 0..n {
            if i != j && rel[i][j] {
                arrow[i][j] = Some(b.arrow(format!("{}->{}", nm(i), nm(j)), objs[i], objs[j])?);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(g), Some(f)) = (arrow[i][j], arrow[j][k]) {
                    b.compose(f, g, arrow[i][k].expect("transitive"))?;
                }
            }
        }
    }
    b.build()
}
