use num_traits::One;

use super::category::OperatorCategory;
use super::gauss::Rational;
use super::operator::{image_mask, EigenMask, State};
use super::QuantumError;
use crate::fincat::{ArrowId, ObjectId};
use crate::heyting::Sieve;
use crate::presheaf::{NaturalTransformation, OmegaPresheaf, Presheaf, PresheafError};

fn check_query(
    oc: &OperatorCategory,
    psi: &State,
    a: ObjectId,
    mask: EigenMask,
) -> Result<(), QuantumError> {
    if !oc.category().contains_object(a) {
        return Err(QuantumError::UnknownObject(a.to_string()));
    }
    let op = oc.operator(a);
    if psi.dim() != op.dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: op.dim(),
            found: psi.dim(),
        });
    }
    if mask & !op.full_mask() != 0 {
        return Err(QuantumError::NotInSpectrum {
            operator: op.name().to_string(),
            value: format!("mask {mask:#b}"),
        });
    }
    Ok(())
}

fn nu_by(
    oc: &OperatorCategory,
    a: ObjectId,
    mask: EigenMask,
    holds: impl Fn(ObjectId, EigenMask) -> bool,
) -> Sieve {
    let cat = oc.category();
    let members = cat
        .arrows_from(a)
        .expect("checked object")
        .iter()
        .copied()
        .filter(|&f| holds(cat.cod(f), image_mask(oc.function(f), mask)))
        .collect();
    Sieve::from_parts_unchecked(a, members)
}

/// `ν^ψ(A ∈ Δ)`: the arrows `f: A → B` with `Ê[B ∈ f(Δ)] ψ = ψ`.
pub fn nu_state(
    oc: &OperatorCategory,
    psi: &State,
    a: ObjectId,
    delta: &[Rational],
) -> Result<Sieve, QuantumError> {
    let mask = oc.operator(a).mask_of(delta)?;
    nu_state_mask(oc, psi, a, mask)
}

/// [`nu_state`] with `Δ` given as a mask over `σ(A)`.
pub fn nu_state_mask(
    oc: &OperatorCategory,
    psi: &State,
    a: ObjectId,
    mask: EigenMask,
) -> Result<Sieve, QuantumError> {
    check_query(oc, psi, a, mask)?;
    Ok(nu_by(oc, a, mask, |b, m| {
        psi.is_fixed_by(&oc.operator(b).projector_for_mask(m))
    }))
}

/// `ν^ψ(A ∈ Δ)` computed as the arrows with `Prob(B ∈ f(Δ); ψ) = 1`.
pub fn nu_state_by_probability(
    oc: &OperatorCategory,
    psi: &State,
    a: ObjectId,
    mask: EigenMask,
) -> Result<Sieve, QuantumError> {
    check_query(oc, psi, a, mask)?;
    Ok(nu_by(oc, a, mask, |b, m| {
        psi.expectation(&oc.operator(b).projector_for_mask(m))
            .is_one()
    }))
}

/// A failure of functional composition: along `arrow: A → B`,
/// `ν(B ∈ f(Δ)) ≠ Ω(f)(ν(A ∈ Δ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncViolation {
    pub arrow: ArrowId,
    pub delta: EigenMask,
}

/// An assignment of a sieve on `A` to every proposition `A ∈ Δ`.
#[derive(Clone, Debug)]
pub struct SieveValuation<'a> {
    oc: &'a OperatorCategory,
    values: Vec<Vec<Sieve>>,
}

impl<'a> SieveValuation<'a> {
    /// Takes `values[A][Δ]` for every object and every mask over `σ(A)`.
    pub fn new(oc: &'a OperatorCategory, values: Vec<Vec<Sieve>>) -> Result<Self, QuantumError> {
        let cat = oc.category();
        if values.len() != cat.num_objects() {
            return Err(QuantumError::IncompleteValuation(format!(
                "{} contexts given, {} expected",
                values.len(),
                cat.num_objects()
            )));
        }
        for o in cat.objects() {
            let want = oc.operator(o).full_mask() as usize + 1;
            if values[o.0].len() != want {
                return Err(QuantumError::IncompleteValuation(format!(
                    "context `{}` has {} values, {} expected",
                    cat.object_name(o),
                    values[o.0].len(),
                    want
                )));
            }
            for s in &values[o.0] {
                Sieve::new(cat, o, s.members().clone())?;
            }
        }
        Ok(SieveValuation { oc, values })
    }

    /// `ν^ψ` on every proposition of every context.
    pub fn from_state(oc: &'a OperatorCategory, psi: &State) -> Result<Self, QuantumError> {
        let values = oc
            .category()
            .objects()
            .map(|o| {
                (0..=oc.operator(o).full_mask())
                    .map(|m| nu_state_mask(oc, psi, o, m))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(SieveValuation { oc, values })
    }

    /// The valuation that calls every proposition totally true.
    pub fn principal(oc: &'a OperatorCategory) -> Self {
        let cat = oc.category();
        let values = cat
            .objects()
            .map(|o| {
                let top = Sieve::principal(cat, o).expect("valid object");
                vec![top; oc.operator(o).full_mask() as usize + 1]
            })
            .collect();
        SieveValuation { oc, values }
    }

    pub fn value(&self, o: ObjectId, mask: EigenMask) -> &Sieve {
        &self.values[o.0][mask as usize]
    }

    /// Replaces one value; the new sieve must live on `o`.
    pub fn set(&mut self, o: ObjectId, mask: EigenMask, sieve: Sieve) -> Result<(), QuantumError> {
        let slot = self
            .values
            .get_mut(o.0)
            .and_then(|v| v.get_mut(mask as usize))
            .ok_or_else(|| QuantumError::IncompleteValuation(format!("no slot {o}/{mask:#b}")))?;
        if sieve.base() != o {
            return Err(crate::heyting::HeytingError::BaseMismatch(sieve.base(), o).into());
        }
        *slot = sieve;
        Ok(())
    }

    /// Checks `ν(f(A) ∈ f(Δ)) = Ω(f)(ν(A ∈ Δ))` for every arrow and every
    /// `Δ`, returning the first violation.
    pub fn func_check(&self) -> Result<(), FuncViolation> {
        let cat = self.oc.category();
        for a in cat.arrows() {
            let f = self.oc.function(a.id);
            for mask in 0..=self.oc.operator(a.dom).full_mask() {
                let pushed = self.values[a.dom.0][mask as usize]
                    .push(cat, a.id)
                    .expect("value is a sieve on dom");
                if self.values[a.cod.0][image_mask(f, mask) as usize] != pushed {
                    return Err(FuncViolation {
                        arrow: a.id,
                        delta: mask,
                    });
                }
            }
        }
        Ok(())
    }

    /// The components `N_A(Ê[A ∈ Δ]) = ν(A ∈ Δ)` as a transformation
    /// `G → Ω`. Naturality is equivalent to [`Self::func_check`].
    pub fn natural_transformation<'p>(
        &self,
        g: &'p Presheaf,
        omega: &'p OmegaPresheaf,
    ) -> Result<NaturalTransformation<'p>, QuantumError> {
        let cat = self.oc.category();
        let components = cat
            .objects()
            .map(|o| {
                self.values[o.0]
                    .iter()
                    .map(|s| {
                        omega.index_of(s).ok_or_else(|| {
                            PresheafError::ComponentDomainMismatch("value not in Ω".into())
                        })
                    })
                    .collect::<Result<Vec<usize>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(NaturalTransformation::new(g, omega.presheaf(), components)?)
    }
}
