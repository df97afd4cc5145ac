use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::Rational;
use super::operator::{constant, find_arrow, question, EigenMask, SpectralOperator};
use super::QuantumError;
use crate::fincat::{ArrowId, CategoryBuilder, FinCategory, ObjectId};

/// Names of the two constant operators added by question closure.
pub const ZERO_NAME: &str = "0";
pub const ONE_NAME: &str = "1";

/// The thin category of operators with an arrow `A → B` whenever
/// `B = f(A)`. Each arrow carries its `f` as a map between eigenvalue
/// positions.
#[derive(Clone, Debug)]
pub struct OperatorCategory {
    cat: Arc<FinCategory>,
    operators: Vec<SpectralOperator>,
    functions: Vec<Vec<usize>>,
    seeds: usize,
}

/// Builds the operator category on `operators`.
///
/// With `close_under_questions` every `Ê[A ∈ Δ]` for proper nonempty `Δ` is
/// added as an operator with spectrum `{0, 1}`, together with the constants
/// `0` and `1`; structurally equal operators are merged, the first name
/// wins. Arrows are all successful [`find_arrow`] checks, identities
/// included.
pub fn build_operator_category(
    operators: Vec<SpectralOperator>,
    close_under_questions: bool,
) -> Result<OperatorCategory, QuantumError> {
    let Some(dim) = operators.first().map(SpectralOperator::dim) else {
        return Ok(OperatorCategory {
            cat: Arc::new(CategoryBuilder::new().build()?),
            operators,
            functions: Vec::new(),
            seeds: 0,
        });
    };
    let mut names = HashSet::new();
    for op in &operators {
        if op.dim() != dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: op.dim(),
            });
        }
        if !names.insert(op.name().to_string()) {
            return Err(QuantumError::NameCollision(op.name().to_string()));
        }
    }
    let seeds = operators.len();
    let mut all = operators;
    if close_under_questions {
        let mut extra = Vec::new();
        for op in &all {
            let k = op.spectrum().len();
            for mask in 1..((1 as EigenMask) << k) - 1 {
                let name = format!("E[{}∈{}]", op.name(), op.fmt_mask(mask));
                extra.push(question(name, op.projector_for_mask(mask))?);
            }
        }
        extra.push(constant(ZERO_NAME, Rational::zero(), dim));
        extra.push(constant(ONE_NAME, Rational::one(), dim));
        for q in extra {
            if all.iter().any(|o| o.structurally_eq(&q)) {
                continue;
            }
            if !names.insert(q.name().to_string()) {
                return Err(QuantumError::NameCollision(q.name().to_string()));
            }
            all.push(q);
        }
    }

    let n = all.len();
    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjectId> = all
        .iter()
        .map(|o| b.object_with_identity(o.name()))
        .collect::<Result<_, _>>()?;
    let mut functions: Vec<Vec<usize>> = all
        .iter()
        .map(|o| (0..o.spectrum().len()).collect())
        .collect();
    let mut hom: Vec<Vec<Option<ArrowId>>> = vec![vec![None; n]; n];
    for i in 0..n {
        hom[i][i] = Some(
            b.arrow_id(&format!("id_{}", all[i].name()))
                .expect("identity"),
        );
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(f) = find_arrow(&all[i], &all[j])? {
                let a = b.arrow(
                    format!("{}->{}", all[i].name(), all[j].name()),
                    objs[i],
                    objs[j],
                )?;
                debug_assert_eq!(a.0, functions.len());
                functions.push(f);
                hom[i][j] = Some(a);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let Some(g) = hom[i][j] else { continue };
            for (k, f) in hom[j].iter().enumerate() {
                let Some(f) = *f else { continue };
                let fg = hom[i][k].expect("B = f(A) and C = g(B) give C = (g∘f)(A)");
                debug_assert!(
                    functions[fg.0]
                        == functions[g.0]
                            .iter()
                            .map(|&x| functions[f.0][x])
                            .collect::<Vec<_>>()
                );
                b.compose(f, g, fg)?;
            }
        }
    }
    Ok(OperatorCategory {
        cat: Arc::new(b.build()?),
        operators: all,
        functions,
        seeds,
    })
}

impl OperatorCategory {
    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn operators(&self) -> &[SpectralOperator] {
        &self.operators
    }

    pub fn operator(&self, o: ObjectId) -> &SpectralOperator {
        &self.operators[o.0]
    }

    /// Number of operators supplied by the caller; the rest come from
    /// question closure.
    pub fn num_seeds(&self) -> usize {
        self.seeds
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjectId, QuantumError> {
        self.cat
            .object_id(name)
            .ok_or_else(|| QuantumError::UnknownObject(name.to_string()))
    }

    /// The function `f` of arrow `A → f(A)`, as eigenvalue positions.
    pub fn function(&self, a: ArrowId) -> &[usize] {
        &self.functions[a.0]
    }

    /// `f` rendered as `a↦b` pairs over the actual eigenvalues.
    pub fn function_pairs(&self, a: ArrowId) -> Vec<(Rational, Rational)> {
        let src = self.operator(self.cat.dom(a));
        let dst = self.operator(self.cat.cod(a));
        self.functions[a.0]
            .iter()
            .enumerate()
            .map(|(i, &j)| (src.spectrum()[i].clone(), dst.spectrum()[j].clone()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.operators.first().map_or(0, SpectralOperator::dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sigma_x, sigma_z};

    #[test]
    fn single_operator_unclosed() {
        let oc = build_operator_category(vec![sigma_z()], false).unwrap();
        assert_eq!(oc.category().num_objects(), 1);
        assert_eq!(oc.category().num_arrows(), 1);
    }

    #[test]
    fn single_operator_closed() {
        let oc = build_operator_category(vec![sigma_z()], true).unwrap();
        let cat = oc.category();
        let names: Vec<&str> = cat.objects().map(|o| cat.object_name(o)).collect();
        assert_eq!(
            names,
            ["sigma_z", "E[sigma_z∈{-1}]", "E[sigma_z∈{1}]", "0", "1"]
        );
        let z = oc.object_by_name("sigma_z").unwrap();
        let q1 = oc.object_by_name("E[sigma_z∈{1}]").unwrap();
        let qm = oc.object_by_name("E[sigma_z∈{-1}]").unwrap();
        assert_eq!(cat.hom(z, q1).len(), 1);
        assert_eq!(cat.hom(z, qm).len(), 1);
        // a two-outcome question carries the same algebra as sigma_z
        assert_eq!(cat.hom(q1, z).len(), 1);
        assert!(cat.is_thin());
        // five arrows out of each two-outcome object, two out of each constant
        assert_eq!(cat.num_arrows(), 5 * 3 + 2 * 2);
    }

    #[test]
    fn incompatible_operators_unconnected() {
        let oc = build_operator_category(vec![sigma_z(), sigma_x()], false).unwrap();
        assert_eq!(oc.category().num_arrows(), 2);
    }

    #[test]
    fn name_and_dimension_checks() {
        let dup = build_operator_category(vec![sigma_z(), sigma_x().with_name("sigma_z")], false);
        assert!(matches!(dup, Err(QuantumError::NameCollision(_))));
        let c3 = crate::quantum::operator::constant("c", Rational::one(), 3);
        let mixed = build_operator_category(vec![sigma_z(), c3], false);
        assert!(matches!(mixed, Err(QuantumError::DimensionMismatch { .. })));
    }

    #[test]
    fn scaled_operator_distinct_but_connected() {
        let z = sigma_z();
        let two: std::collections::BTreeMap<_, _> = z
            .spectrum()
            .iter()
            .map(|a| (a.clone(), a * Rational::from_integer(2.into())))
            .collect();
        let z2 = crate::quantum::function_of(&z, &two, "2z").unwrap();
        let oc = build_operator_category(vec![z, z2], false).unwrap();
        let cat = oc.category();
        assert_eq!(cat.num_objects(), 2);
        assert_eq!(cat.hom(ObjectId(0), ObjectId(1)).len(), 1);
        assert_eq!(cat.hom(ObjectId(1), ObjectId(0)).len(), 1);
    }
}
