use super::category::OperatorCategory;
use super::gauss::fmt_rational;
use super::operator::{image_mask, EigenMask};
use super::QuantumError;
use crate::presheaf::{global_sections, Presheaf, SearchOptions, SectionSearch};

/// The dual presheaf `D`.
///
/// `D(A)` is the set of `{0,1}`-valued homomorphisms of the spectral
/// algebra `W_A`. Such a homomorphism is fixed by the one atom `P_a` it
/// sends to 1, so element `i` of `D(A)` stands for the atom of the `i`-th
/// eigenvalue. Along `A → f(A)` a homomorphism restricts to `W_{f(A)}`,
/// which sends the atom `P_a` to the unique atom `Q_{f(a)}` above it.
pub fn dual_presheaf(oc: &OperatorCategory) -> Presheaf {
    let cat = oc.category().clone();
    let labels = cat
        .objects()
        .map(|o| {
            oc.operator(o)
                .spectrum()
                .iter()
                .map(|a| format!("δ[{}]", fmt_rational(a)))
                .collect()
        })
        .collect();
    Presheaf::from_fn(cat, labels, |f, i| oc.function(f)[i]).expect("functions are total")
}

/// The coarse-graining presheaf `G`.
///
/// `G(A) = W_A`, element `Δ` (an [`EigenMask`]) standing for `Ê[A ∈ Δ]`;
/// along `A → f(A)` the projector `Ê[A ∈ Δ]` goes to `Ê[f(A) ∈ f(Δ)]`.
pub fn coarse_graining_presheaf(oc: &OperatorCategory) -> Presheaf {
    let cat = oc.category().clone();
    let labels = cat
        .objects()
        .map(|o| {
            let op = oc.operator(o);
            (0..=op.full_mask())
                .map(|m| format!("E[∈{}]", op.fmt_mask(m)))
                .collect()
        })
        .collect();
    Presheaf::from_fn(cat, labels, |f, m| {
        image_mask(oc.function(f), m as EigenMask) as usize
    })
    .expect("images are total")
}

/// Searches for global sections of the dual presheaf. An empty result
/// certifies that no noncontextual `{0,1}` assignment exists on this
/// fragment.
pub fn ks_global_section_search(
    oc: &OperatorCategory,
    options: SearchOptions,
) -> Result<SectionSearch, QuantumError> {
    Ok(global_sections(&dual_presheaf(oc), options)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::ObjectId;
    use crate::fixtures::{sigma_x, sigma_z};
    use crate::quantum::{build_operator_category, function_of, Rational};
    use std::collections::BTreeMap;

    #[test]
    fn dual_sizes_and_sections() {
        let oc = build_operator_category(vec![sigma_z()], true).unwrap();
        let d = dual_presheaf(&oc);
        assert!(d.validate().is_ok());
        for o in oc.category().objects() {
            assert_eq!(d.size(o), oc.operator(o).spectrum().len());
        }
        let s = ks_global_section_search(&oc, SearchOptions::default()).unwrap();
        assert_eq!(s.sections.len(), 2);
        let single = build_operator_category(vec![sigma_x()], false).unwrap();
        assert_eq!(
            ks_global_section_search(&single, SearchOptions::default())
                .unwrap()
                .sections
                .len(),
            2
        );
    }

    #[test]
    fn square_collapses_both_atoms() {
        let z = sigma_z();
        let sq: BTreeMap<Rational, Rational> =
            z.spectrum().iter().map(|a| (a.clone(), a * a)).collect();
        let z2 = function_of(&z, &sq, "z^2").unwrap();
        let oc = build_operator_category(vec![z, z2], false).unwrap();
        let f = oc.category().hom(ObjectId(0), ObjectId(1))[0];
        let d = dual_presheaf(&oc);
        assert_eq!(d.map(f), &[0, 0]);
        let g = coarse_graining_presheaf(&oc);
        assert!(g.validate().is_ok());
        // {1} ↦ {1}, which is the whole spectrum of z^2
        assert_eq!(g.apply(f, 0b10), 0b1);
        assert_eq!(g.apply(f, 0), 0);
        assert_eq!(g.size(ObjectId(0)), 4);
        assert_eq!(g.size(ObjectId(1)), 2);
    }
}
