//! Self-adjoint operators given by exact spectral data.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gauss::{fmt_rational, inner, CMatrix, GaussianRational, Rational};
use super::QuantumError;

/// Largest supported Hilbert-space dimension. Spectral algebras have
/// `2^|σ(A)|` elements, so this keeps them enumerable.
pub const MAX_DIM: usize = 16;

/// A subset `Δ ⊆ σ(A)` as a bit mask over the eigenvalue positions of the
/// (ascending) spectrum.
pub type EigenMask = u64;

/// Exact spectral data of a self-adjoint operator: distinct eigenvalues in
/// ascending order, each with its eigenprojector.
#[derive(Clone, Debug)]
pub struct SpectralOperator {
    name: String,
    dim: usize,
    spectrum: Vec<Rational>,
    projectors: Vec<CMatrix>,
}

/// Eigenvalue together with orthogonal (unnormalized) eigenvectors.
pub type EigenGroup = (Rational, Vec<Vec<GaussianRational>>);

/// Builds `A = Σ a P_a` from eigenvectors: `P_a = Σ v v† / ⟨v, v⟩` over the
/// vectors of `a`. All vectors must be pairwise orthogonal and there must be
/// exactly `dim` of them.
pub fn make_operator(
    name: impl Into<String>,
    dim: usize,
    eigendata: Vec<EigenGroup>,
) -> Result<SpectralOperator, QuantumError> {
    let name = name.into();
    if dim == 0 || dim > MAX_DIM {
        return Err(QuantumError::DimensionTooLarge { dim, max: MAX_DIM });
    }
    let mut seen = BTreeMap::new();
    for (a, _) in &eigendata {
        if seen.insert(a.clone(), ()).is_some() {
            return Err(QuantumError::DuplicateEigenvalue {
                operator: name,
                eigenvalue: fmt_rational(a),
            });
        }
    }
    let all: Vec<&Vec<GaussianRational>> = eigendata.iter().flat_map(|(_, vs)| vs).collect();
    for v in &all {
        if v.len() != dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if v.iter().all(Zero::is_zero) {
            return Err(QuantumError::ZeroVector { operator: name });
        }
    }
    for (i, u) in all.iter().enumerate() {
        for w in &all[i + 1..] {
            if !inner(u, w).is_zero() {
                return Err(QuantumError::NotOrthogonal { operator: name });
            }
        }
    }
    if all.len() != dim {
        return Err(QuantumError::IncompleteBasis {
            operator: name,
            rank: all.len(),
            dim,
        });
    }
    let mut parts = Vec::with_capacity(eigendata.len());
    for (a, vs) in eigendata {
        if vs.is_empty() {
            return Err(QuantumError::EmptyEigenspace {
                operator: name,
                eigenvalue: fmt_rational(&a),
            });
        }
        let mut p = CMatrix::zero(dim);
        for v in &vs {
            p = p.add(&CMatrix::line_projector(v).expect("nonzero vector"));
        }
        parts.push((a, p));
    }
    SpectralOperator::from_projectors(name, parts)
}

impl SpectralOperator {
    /// Assembles an operator from `(eigenvalue, projector)` pairs and checks
    /// every spectral invariant: projectors Hermitian, idempotent, nonzero,
    /// mutually orthogonal and summing to the identity; eigenvalues distinct.
    pub fn from_projectors(
        name: impl Into<String>,
        mut parts: Vec<(Rational, CMatrix)>,
    ) -> Result<Self, QuantumError> {
        let name = name.into();
        let Some(dim) = parts.first().map(|(_, p)| p.dim()) else {
            return Err(QuantumError::IncompleteBasis {
                operator: name,
                rank: 0,
                dim: 0,
            });
        };
        if dim == 0 || dim > MAX_DIM {
            return Err(QuantumError::DimensionTooLarge { dim, max: MAX_DIM });
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        for w in parts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(QuantumError::DuplicateEigenvalue {
                    operator: name,
                    eigenvalue: fmt_rational(&w[0].0),
                });
            }
        }
        let violation = |law: &str| QuantumError::InvariantViolation {
            operator: name.clone(),
            law: law.to_string(),
        };
        let mut sum = CMatrix::zero(dim);
        for (i, (_, p)) in parts.iter().enumerate() {
            if p.dim() != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if p.is_zero() {
                return Err(violation("nonzero projector"));
            }
            if !p.is_hermitian() {
                return Err(violation("Hermitian projector"));
            }
            if p.mul(p) != *p {
                return Err(violation("idempotent projector"));
            }
            for (_, q) in &parts[i + 1..] {
                if !p.mul(q).is_zero() {
                    return Err(violation("mutually orthogonal projectors"));
                }
            }
            sum = sum.add(p);
        }
        if sum != CMatrix::identity(dim) {
            return Err(QuantumError::IncompleteBasis {
                operator: name,
                rank: sum.trace().re.to_integer().try_into().unwrap_or(0),
                dim,
            });
        }
        let (spectrum, projectors) = parts.into_iter().unzip();
        Ok(SpectralOperator {
            name,
            dim,
            spectrum,
            projectors,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `σ(A)`, ascending.
    pub fn spectrum(&self) -> &[Rational] {
        &self.spectrum
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn projector(&self, i: usize) -> &CMatrix {
        &self.projectors[i]
    }

    /// Mask of the whole spectrum.
    pub fn full_mask(&self) -> EigenMask {
        (1u64 << self.spectrum.len()) - 1
    }

    /// Same spectrum and same projectors; names are ignored.
    pub fn structurally_eq(&self, other: &SpectralOperator) -> bool {
        self.spectrum == other.spectrum && self.projectors == other.projectors
    }

    /// The matrix `Σ a P_a`.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zero(self.dim);
        for (a, p) in self.spectrum.iter().zip(&self.projectors) {
            m = m.add(&p.scale(a));
        }
        m
    }

    /// Converts a set of eigenvalues into a mask.
    pub fn mask_of(&self, delta: &[Rational]) -> Result<EigenMask, QuantumError> {
        let mut mask = 0;
        for d in delta {
            let i = self.spectrum.iter().position(|a| a == d).ok_or_else(|| {
                QuantumError::NotInSpectrum {
                    operator: self.name.clone(),
                    value: fmt_rational(d),
                }
            })?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// Eigenvalues selected by `mask`.
    pub fn values_of(&self, mask: EigenMask) -> Vec<Rational> {
        self.spectrum
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// `{a, b}` rendering of the eigenvalues in `mask`.
    pub fn fmt_mask(&self, mask: EigenMask) -> String {
        let vals: Vec<String> = self.values_of(mask).iter().map(fmt_rational).collect();
        format!("{{{}}}", vals.join(","))
    }

    /// `Ê[A ∈ Δ] = Σ_{a ∈ Δ} P_a` for a mask.
    pub fn projector_for_mask(&self, mask: EigenMask) -> CMatrix {
        let mut m = CMatrix::zero(self.dim);
        for (i, p) in self.projectors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m = m.add(p);
            }
        }
        m
    }

    /// `Ê[A ∈ Δ]`.
    pub fn spectral_projector(&self, delta: &[Rational]) -> Result<CMatrix, QuantumError> {
        Ok(self.projector_for_mask(self.mask_of(delta)?))
    }
}

impl fmt::Display for SpectralOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.spectrum.iter().map(fmt_rational).collect();
        write!(
            f,
            "{} (dim {}, σ = {{{}}})",
            self.name,
            self.dim,
            vals.join(", ")
        )
    }
}

/// `f(A)`: spectrum `f(σ(A))`, with the projector of `b` the sum of the
/// `P_a` with `f(a) = b`.
pub fn function_of(
    a: &SpectralOperator,
    f: &BTreeMap<Rational, Rational>,
    name: impl Into<String>,
) -> Result<SpectralOperator, QuantumError> {
    let mut groups: BTreeMap<Rational, CMatrix> = BTreeMap::new();
    for (x, p) in a.spectrum.iter().zip(&a.projectors) {
        let y = f.get(x).ok_or_else(|| QuantumError::PartialFunction {
            operator: a.name.clone(),
            eigenvalue: fmt_rational(x),
        })?;
        let slot = groups
            .entry(y.clone())
            .or_insert_with(|| CMatrix::zero(a.dim));
        *slot = slot.add(p);
    }
    SpectralOperator::from_projectors(name, groups.into_iter().collect())
}

/// The unique `f` on `σ(A)` with `B = f(A)`, as a map from eigenvalue
/// positions of `A` to eigenvalue positions of `B`, or `None` when `B` is
/// not a function of `A`.
///
/// `B = f(A)` exactly when every projector of `B` is a sum of projectors of
/// `A`; each `P_a` then lies under exactly one `Q_b`, and `f(a) = b`.
pub fn find_arrow(
    a: &SpectralOperator,
    b: &SpectralOperator,
) -> Result<Option<Vec<usize>>, QuantumError> {
    if a.dim != b.dim {
        return Err(QuantumError::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    if b.spectrum.len() > a.spectrum.len() {
        return Ok(None);
    }
    let mut f = Vec::with_capacity(a.spectrum.len());
    for p in &a.projectors {
        match b.projectors.iter().position(|q| p.projector_leq(q)) {
            Some(j) => f.push(j),
            None => return Ok(None),
        }
    }
    for (j, q) in b.projectors.iter().enumerate() {
        let mut sum = CMatrix::zero(a.dim);
        for (i, p) in a.projectors.iter().enumerate() {
            if f[i] == j {
                sum = sum.add(p);
            }
        }
        if sum != *q {
            return Ok(None);
        }
    }
    Ok(Some(f))
}

/// Image `f(Δ)` of a mask under an eigenvalue-position map.
pub fn image_mask(f: &[usize], mask: EigenMask) -> EigenMask {
    f.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(0, |m, (_, &j)| m | 1 << j)
}

/// A state vector, stored unnormalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    vector: Vec<GaussianRational>,
}

impl State {
    pub fn new(vector: Vec<GaussianRational>) -> Result<Self, QuantumError> {
        if vector.iter().all(Zero::is_zero) {
            return Err(QuantumError::ZeroState);
        }
        Ok(State { vector })
    }

    pub fn vector(&self) -> &[GaussianRational] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// `⟨ψ, E ψ⟩ / ⟨ψ, ψ⟩` for a projector `E`.
    pub fn expectation(&self, e: &CMatrix) -> Rational {
        let num = inner(&self.vector, &e.apply(&self.vector));
        let den = inner(&self.vector, &self.vector);
        debug_assert!(num.is_real() && den.is_real());
        num.re / den.re
    }

    /// Whether `E ψ = ψ`.
    pub fn is_fixed_by(&self, e: &CMatrix) -> bool {
        e.apply(&self.vector) == self.vector
    }
}

/// Born probability `Prob(A ∈ Δ; ψ)`.
pub fn born_prob(
    psi: &State,
    a: &SpectralOperator,
    delta: &[Rational],
) -> Result<Rational, QuantumError> {
    if psi.dim() != a.dim {
        return Err(QuantumError::DimensionMismatch {
            expected: a.dim,
            found: psi.dim(),
        });
    }
    Ok(psi.expectation(&a.spectral_projector(delta)?))
}

/// Born probability for a mask over `σ(A)`.
pub fn born_prob_mask(psi: &State, a: &SpectralOperator, mask: EigenMask) -> Rational {
    psi.expectation(&a.projector_for_mask(mask))
}

/// The identity on `σ(A)`, as a rational map.
pub fn identity_function(a: &SpectralOperator) -> BTreeMap<Rational, Rational> {
    a.spectrum.iter().map(|x| (x.clone(), x.clone())).collect()
}

pub(crate) fn question(name: String, projector: CMatrix) -> Result<SpectralOperator, QuantumError> {
    let dim = projector.dim();
    let complement = CMatrix::identity(dim).sub(&projector);
    SpectralOperator::from_projectors(
        name,
        vec![(Rational::zero(), complement), (Rational::one(), projector)],
    )
}

pub(crate) fn constant(name: &str, value: Rational, dim: usize) -> SpectralOperator {
    SpectralOperator::from_projectors(name, vec![(value, CMatrix::identity(dim))])
        .expect("identity is a valid spectral resolution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cvec, sigma_x, sigma_z};
    use crate::quantum::gauss::rat;

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn sigma_z_projectors() {
        let z = sigma_z();
        assert_eq!(z.spectrum(), &[r(-1), r(1)]);
        let p1 = z.spectral_projector(&[r(1)]).unwrap();
        assert_eq!(p1, CMatrix::line_projector(&cvec(&[1, 0])).unwrap());
        assert_eq!(z.spectral_projector(&[]).unwrap(), CMatrix::zero(2));
        assert_eq!(
            z.spectral_projector(&[r(1), r(-1)]).unwrap(),
            CMatrix::identity(2)
        );
        assert!(matches!(
            z.spectral_projector(&[r(3)]),
            Err(QuantumError::NotInSpectrum { .. })
        ));
    }

    #[test]
    fn sigma_x_plus_projector_is_half_ones() {
        let x = sigma_x();
        let p = x.spectral_projector(&[r(1)]).unwrap();
        let half = GaussianRational::real(rat(1, 2));
        assert!(p.rows().all(|row| row.iter().all(|e| *e == half)));
    }

    #[test]
    fn construction_errors() {
        let bad = make_operator("bad", 2, vec![(r(1), vec![cvec(&[1, 0]), cvec(&[1, 1])])]);
        assert!(matches!(bad, Err(QuantumError::NotOrthogonal { .. })));
        let short = make_operator("short", 2, vec![(r(1), vec![cvec(&[1, 0])])]);
        assert!(matches!(short, Err(QuantumError::IncompleteBasis { .. })));
        let dup = make_operator(
            "dup",
            2,
            vec![(r(1), vec![cvec(&[1, 0])]), (r(1), vec![cvec(&[0, 1])])],
        );
        assert!(matches!(dup, Err(QuantumError::DuplicateEigenvalue { .. })));
        let across = make_operator(
            "across",
            2,
            vec![(r(1), vec![cvec(&[1, 0])]), (r(2), vec![cvec(&[1, 1])])],
        );
        assert!(matches!(across, Err(QuantumError::NotOrthogonal { .. })));
    }

    #[test]
    fn functions_of_sigma_z() {
        let z = sigma_z();
        let same = function_of(&z, &identity_function(&z), "z'").unwrap();
        assert!(same.structurally_eq(&z));
        let sq: BTreeMap<_, _> = [(r(1), r(1)), (r(-1), r(1))].into();
        let one = function_of(&z, &sq, "z^2").unwrap();
        assert_eq!(one.spectrum(), &[r(1)]);
        assert_eq!(one.projector(0), &CMatrix::identity(2));
        let relabel: BTreeMap<_, _> = [(r(1), r(3)), (r(-1), r(7))].into();
        let d = function_of(&z, &relabel, "d").unwrap();
        assert_eq!(d.spectrum(), &[r(3), r(7)]);
        assert_eq!(d.projector(0), &z.spectral_projector(&[r(1)]).unwrap());
        let partial: BTreeMap<_, _> = [(r(1), r(3))].into();
        assert!(matches!(
            function_of(&z, &partial, "p"),
            Err(QuantumError::PartialFunction { .. })
        ));
    }

    #[test]
    fn arrows_between_operators() {
        let z = sigma_z();
        let sq: BTreeMap<_, _> = [(r(1), r(1)), (r(-1), r(1))].into();
        let one = function_of(&z, &sq, "z^2").unwrap();
        assert_eq!(find_arrow(&z, &one).unwrap(), Some(vec![0, 0]));
        assert_eq!(find_arrow(&z, &sigma_x()).unwrap(), None);
        assert_eq!(find_arrow(&sigma_x(), &z).unwrap(), None);
        assert_eq!(find_arrow(&z, &z).unwrap(), Some(vec![0, 1]));
        assert_eq!(find_arrow(&one, &z).unwrap(), None);
    }

    #[test]
    fn born_probabilities() {
        let z = sigma_z();
        let up = State::new(cvec(&[1, 0])).unwrap();
        assert_eq!(born_prob(&up, &z, &[r(1)]).unwrap(), r(1));
        let plus = State::new(cvec(&[1, 1])).unwrap();
        assert_eq!(born_prob(&plus, &z, &[r(1)]).unwrap(), rat(1, 2));
        assert_eq!(born_prob(&plus, &z, &[r(1), r(-1)]).unwrap(), r(1));
        assert!(matches!(
            State::new(cvec(&[0, 0])),
            Err(QuantumError::ZeroState)
        ));
        let three = State::new(cvec(&[1, 0, 0])).unwrap();
        assert!(matches!(
            born_prob(&three, &z, &[r(1)]),
            Err(QuantumError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn image_masks() {
        assert_eq!(image_mask(&[0, 0, 1], 0b011), 0b01);
        assert_eq!(image_mask(&[0, 0, 1], 0b100), 0b10);
        assert_eq!(image_mask(&[0, 0, 1], 0), 0);
    }
}
