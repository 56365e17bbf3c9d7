//! Density operators and the spectral side of the state calculus.
//!
//! The bridge between matrices and [`EigenvalueList`]s lives here. The key
//! inequality, due to Weyl, is that eigenvalue lists are stable under
//! trace-norm perturbation:
//!
//! ```text
//! l1(Lambda(A), Lambda(B)) <= trace |A - B|        (A, B >= 0)
//! ```
//!
//! so spectra can certify lower bounds on trace-norm distances. The module
//! also provides partial traces over arbitrary tensor factors, tensor
//! products of states, support projections, Uhlmann fidelity, and seeded
//! random states, plus the check that a rectangular `L` has
//! `Lambda(L^* L) = Lambda(L L^*)` away from zero.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigenlist::EigenvalueList;
use crate::linalg::{
    self, cr, eigh_desc, eigvalsh_desc, hermitian_deviation, hermitize, CMat, CVec,
};
use crate::{tol, Error, Result};

/// A Hermitian matrix, symmetrized on construction. The stored matrix is
/// exactly equal to its adjoint; inputs may deviate by at most
/// [`tol::HERMITIAN_DEV`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMat,
}

impl HermitianMatrix {
    /// Validate and symmetrize. Rejects non-square or grossly non-Hermitian
    /// input.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::BadDim {
                dim: 0,
                reason: "matrices must have positive dimension".into(),
            });
        }
        let deviation = hermitian_deviation(&m);
        if deviation > tol::HERMITIAN_DEV {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { m: hermitize(&m) })
    }

    /// Real diagonal matrix.
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::BadDim {
                dim: 0,
                reason: "matrices must have positive dimension".into(),
            });
        }
        let n = diag.len();
        Ok(Self {
            m: CMat::from_fn(n, n, |i, j| if i == j { cr(diag[i]) } else { cr(0.0) }),
        })
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        Self {
            m: CMat::identity(n, n),
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Real trace (the imaginary part is zero for Hermitian matrices).
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Eigendecomposition with nonincreasing eigenvalues.
    pub fn eigh(&self) -> (Vec<f64>, CMat) {
        eigh_desc(&self.m)
    }
}

/// Eigenvalue list of a Hermitian matrix.
///
/// Eigenvalues in `[-PSD_EIG, 0)` are numerical noise on a PSD input and are
/// clamped to zero. Anything more negative is rejected when `require_psd`
/// is set and clamped otherwise (the list then describes the positive part).
pub fn eigenlist_of(h: &HermitianMatrix, require_psd: bool) -> Result<EigenvalueList> {
    let vals = eigvalsh_desc(h.matrix());
    let min = vals.last().copied().unwrap_or(0.0);
    if require_psd && min < -tol::PSD_EIG {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let clamped: Vec<f64> = vals.into_iter().map(|v| v.max(0.0)).collect();
    EigenvalueList::from_values(&clamped)
}

/// `trace |A - B|` for Hermitian `A`, `B` of equal dimension.
pub fn trace_norm_distance(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(linalg::trace_norm_hermitian(&(a.matrix() - b.matrix())))
}

/// Outcome of one trace-norm domination check.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WeylReport {
    /// `l1(Lambda(A), Lambda(B))`.
    pub lhs: f64,
    /// `trace |A - B|`.
    pub rhs: f64,
    /// Whether `lhs <= rhs + WEYL_SLACK`.
    pub holds: bool,
}

/// Check `l1(Lambda(A), Lambda(B)) <= trace|A - B|` for a PSD pair.
pub fn check_weyl(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<WeylReport> {
    let la = eigenlist_of(a, true)?;
    let lb = eigenlist_of(b, true)?;
    let lhs = la.l1_distance(&lb);
    let rhs = trace_norm_distance(a, b)?;
    Ok(WeylReport {
        lhs,
        rhs,
        holds: lhs <= rhs + tol::WEYL_SLACK,
    })
}

/// Spectra of the two Gram matrices of a rectangular `L`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SingularListReport {
    /// `Lambda(L^* L)`.
    pub gram: EigenvalueList,
    /// `Lambda(L L^*)`.
    pub cogram: EigenvalueList,
    /// Whether the lists agree within [`tol::ENTRYWISE`] in l1.
    pub equal: bool,
}

/// Verify that `L^* L` and `L L^*` share their nonzero spectrum. The two
/// lists live on spaces of different dimension; after zero-trimming they
/// must coincide.
pub fn singular_list_check(l: &CMat) -> Result<SingularListReport> {
    if l.nrows() == 0 || l.ncols() == 0 {
        return Err(Error::BadDim {
            dim: 0,
            reason: "matrices must have positive dimension".into(),
        });
    }
    let gram_m = HermitianMatrix::new(l.adjoint() * l)?;
    let cogram_m = HermitianMatrix::new(l * l.adjoint())?;
    let gram = eigenlist_of(&gram_m, true)?;
    let cogram = eigenlist_of(&cogram_m, true)?;
    let equal = gram.l1_distance(&cogram) <= tol::ENTRYWISE;
    Ok(SingularListReport {
        gram,
        cogram,
        equal,
    })
}

/// A density operator: Hermitian, PSD within [`tol::PSD_EIG`], trace within
/// [`tol::TRACE_ONE`] of one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    h: HermitianMatrix,
}

impl DensityOperator {
    /// Validate a Hermitian matrix as a state. Costs one eigendecomposition.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let vals = eigvalsh_desc(h.matrix());
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -tol::PSD_EIG {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let trace = h.trace();
        if (trace - 1.0).abs() > tol::TRACE_ONE {
            return Err(Error::TraceMismatch {
                expected: 1.0,
                actual: trace,
            });
        }
        Ok(Self { h })
    }

    /// Validate a raw complex matrix as a state.
    pub fn from_matrix(m: CMat) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// State built from trusted arithmetic (tensor products, partial traces
    /// of valid states). Symmetrizes and checks the trace, but skips the
    /// eigendecomposition; callers guarantee positivity.
    pub(crate) fn from_trusted(m: CMat) -> Self {
        let h = hermitize(&m);
        debug_assert!((h.trace().re - 1.0).abs() <= 1e-9, "trusted state trace");
        Self {
            h: HermitianMatrix { m: h },
        }
    }

    /// Diagonal state with the given probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol::UNIT_SUM {
            return Err(Error::NotAState { sum });
        }
        if let Some((index, &value)) = probs.iter().enumerate().find(|(_, &v)| v < -tol::NEG_CLAMP)
        {
            return Err(Error::NegativeEntry { index, value });
        }
        let clamped: Vec<f64> = probs.iter().map(|&v| v.max(0.0)).collect();
        Self::new(HermitianMatrix::from_real_diagonal(&clamped)?)
    }

    /// Diagonal state realizing `list` on a space of dimension `dim`,
    /// padding with zeros. The list must sum to one and fit in `dim`.
    pub fn from_list(list: &EigenvalueList, dim: usize) -> Result<Self> {
        if list.len() > dim {
            return Err(Error::BadSpectrum {
                reason: format!("support {} exceeds dimension {}", list.len(), dim),
            });
        }
        if !list.is_unit_sum(tol::UNIT_SUM) {
            return Err(Error::NotAState { sum: list.sum() });
        }
        let mut probs = vec![0.0; dim];
        probs[..list.len()].copy_from_slice(list.values());
        Self::diagonal(&probs)
    }

    /// Pure state `v v^* / <v, v>`.
    pub fn pure(v: &CVec) -> Result<Self> {
        let norm2 = v.norm_squared();
        if norm2 <= 0.0 {
            return Err(Error::BadArgs {
                reason: "pure state needs a nonzero vector".into(),
            });
        }
        Ok(Self::from_trusted(
            linalg::rank_one(v, v).scale(1.0 / norm2),
        ))
    }

    /// The tracial state `1/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self::from_trusted(CMat::identity(n, n).scale(1.0 / n as f64))
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// The state as a Hermitian matrix.
    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    /// The raw matrix.
    pub fn matrix(&self) -> &CMat {
        self.h.matrix()
    }

    /// Eigenvalue list of the state.
    pub fn eigenlist(&self) -> Result<EigenvalueList> {
        eigenlist_of(&self.h, true)
    }

    /// Trace-norm distance to another state.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        trace_norm_distance(&self.h, &other.h)
    }
}

/// Shape of a tensor-product space: factor dimensions in Kronecker order
/// (factor 0 is the leftmost, most significant factor).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FactorShape {
    dims: Vec<usize>,
}

impl FactorShape {
    /// Validate factor dimensions (all positive, at least one factor).
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadArgs {
                reason: format!("invalid factor shape {dims:?}"),
            });
        }
        Ok(Self { dims })
    }

    /// Factor dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of factors.
    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    /// Product of the factor dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn check_matches(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::ShapeMismatch {
                shape: self.dims.clone(),
                dim,
            });
        }
        Ok(())
    }
}

/// Partial trace of a raw matrix over the factors *not* listed in `keep`.
/// `keep` must be strictly increasing and nonempty; kept factors stay in
/// their original order.
pub fn partial_trace_matrix(m: &CMat, shape: &FactorShape, keep: &[usize]) -> Result<CMat> {
    shape.check_matches(m.nrows())?;
    if m.nrows() != m.ncols() {
        return Err(Error::DimMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&f| f >= shape.factors())
    {
        return Err(Error::BadArgs {
            reason: format!(
                "keep {keep:?} must be strictly increasing factor indices below {}",
                shape.factors()
            ),
        });
    }
    let dims = shape.dims();
    let total = shape.total();
    let keep_dim: usize = keep.iter().map(|&f| dims[f]).product();
    // Row-major digit split of every full index into (kept part, traced part).
    let mut kept_part = vec![0usize; total];
    let mut traced_part = vec![0usize; total];
    for x in 0..total {
        let (mut rest, mut k, mut t) = (x, 0usize, 0usize);
        for (f, &d) in dims.iter().enumerate() {
            let stride: usize = dims[f + 1..].iter().product();
            let digit = rest / stride;
            rest %= stride;
            if keep.contains(&f) {
                k = k * d + digit;
            } else {
                t = t * d + digit;
            }
        }
        kept_part[x] = k;
        traced_part[x] = t;
    }
    let mut out = CMat::zeros(keep_dim, keep_dim);
    for r in 0..total {
        for c in 0..total {
            if traced_part[r] == traced_part[c] {
                out[(kept_part[r], kept_part[c])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Partial trace of a state; the result is again a state on the kept
/// factors (trace is preserved, positivity is inherited).
pub fn partial_trace(
    rho: &DensityOperator,
    shape: &FactorShape,
    keep: &[usize],
) -> Result<DensityOperator> {
    let m = partial_trace_matrix(rho.matrix(), shape, keep)?;
    Ok(DensityOperator::from_trusted(m))
}

/// Tensor product of states, `rho (x) sigma` in Kronecker order.
pub fn tensor_states(rho: &DensityOperator, sigma: &DensityOperator) -> DensityOperator {
    DensityOperator::from_trusted(rho.matrix().kronecker(sigma.matrix()))
}

/// Spectral projection onto eigenvalues above `rank_tol`.
pub fn support_projection(rho: &DensityOperator, rank_tol: f64) -> HermitianMatrix {
    let (vals, u) = rho.hermitian().eigh();
    let n = rho.dim();
    let mut p = CMat::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        if v > rank_tol {
            let col = CVec::from_column_slice(u.column(i).as_slice());
            p += linalg::rank_one(&col, &col);
        }
    }
    HermitianMatrix { m: hermitize(&p) }
}

/// Uhlmann fidelity `trace sqrt(sqrt(rho) sigma sqrt(rho))`, in `[0, 1]`.
/// Multiplicative over tensor products; equals one exactly on equal states.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let s = linalg::sqrt_psd(rho.matrix());
    let inner = &s * sigma.matrix() * &s;
    let vals = eigvalsh_desc(&hermitize(&inner));
    Ok(vals
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .sum::<f64>()
        .min(1.0))
}

/// Random state, deterministic in `seed`.
///
/// With a prescribed `spectrum` the state is `U diag(spectrum) U^*` for a
/// Haar unitary `U`; the spectrum must sum to one and fit in `dim`. Without
/// one, the state is `G G^* / trace(G G^*)` for a Ginibre `G` (full rank
/// almost surely).
pub fn random_density(
    dim: usize,
    spectrum: Option<&EigenvalueList>,
    seed: u64,
) -> Result<DensityOperator> {
    if dim == 0 {
        return Err(Error::BadDim {
            dim,
            reason: "states need positive dimension".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spectrum {
        Some(list) => {
            if list.len() > dim {
                return Err(Error::BadSpectrum {
                    reason: format!("support {} exceeds dimension {}", list.len(), dim),
                });
            }
            if !list.is_unit_sum(tol::UNIT_SUM) {
                return Err(Error::NotAState { sum: list.sum() });
            }
            let u = linalg::random_unitary(&mut rng, dim);
            let mut diag = vec![0.0; dim];
            diag[..list.len()].copy_from_slice(list.values());
            let d = CMat::from_fn(dim, dim, |i, j| if i == j { cr(diag[i]) } else { cr(0.0) });
            Ok(DensityOperator::from_trusted(&u * d * u.adjoint()))
        }
        None => {
            let g = linalg::ginibre(&mut rng, dim, dim);
            let p = &g * g.adjoint();
            let trace = p.trace().re;
            Ok(DensityOperator::from_trusted(p.scale(1.0 / trace)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn list(raw: &[f64]) -> EigenvalueList {
        EigenvalueList::from_values(raw).unwrap()
    }

    #[test]
    fn hermitian_constructor_symmetrizes_and_rejects() {
        let mut m = CMat::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 3e-13);
        let h = HermitianMatrix::new(m).unwrap();
        assert!(hermitian_deviation(h.matrix()) == 0.0);
        let mut bad = CMat::identity(2, 2);
        bad[(0, 1)] = cr(0.5);
        assert!(matches!(
            HermitianMatrix::new(bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigenlist_of_diagonal_sorts_and_clamps() {
        let h = HermitianMatrix::from_real_diagonal(&[0.25, 0.75, -5e-11]).unwrap();
        let l = eigenlist_of(&h, true).unwrap();
        assert_eq!(l.values(), &[0.75, 0.25]);
        let neg = HermitianMatrix::from_real_diagonal(&[0.5, -0.5]).unwrap();
        assert!(matches!(
            eigenlist_of(&neg, true),
            Err(Error::NotPsd { .. })
        ));
        // Without the PSD requirement the negative part is dropped.
        let pos_part = eigenlist_of(&neg, false).unwrap();
        assert_eq!(pos_part.values(), &[0.5]);
    }

    #[test]
    fn eigenlist_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = linalg::random_psd(&mut rng, 6);
        let h = HermitianMatrix::new(p).unwrap();
        let u = linalg::random_unitary(&mut rng, 6);
        let conj = HermitianMatrix::new(&u * h.matrix() * u.adjoint()).unwrap();
        let la = eigenlist_of(&h, true).unwrap();
        let lb = eigenlist_of(&conj, true).unwrap();
        assert!(la.l1_distance(&lb) < 1e-10);
    }

    #[test]
    fn trace_norm_equals_list_distance_for_aligned_diagonals() {
        let a = HermitianMatrix::from_real_diagonal(&[0.75, 0.25, 0.0]).unwrap();
        let b = HermitianMatrix::from_real_diagonal(&[0.6, 0.2, 0.2]).unwrap();
        let d = trace_norm_distance(&a, &b).unwrap();
        assert_relative_eq!(d, 0.4, epsilon = 1e-14);
        let report = check_weyl(&a, &b).unwrap();
        assert!(report.holds);
        assert_relative_eq!(report.lhs, report.rhs, epsilon = 1e-13);
    }

    #[test]
    fn weyl_gap_is_strict_for_misaligned_projections() {
        // Same spectrum, orthogonal supports: lists agree, operators do not.
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let b = HermitianMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let report = check_weyl(&a, &b).unwrap();
        assert_relative_eq!(report.lhs, 0.0, epsilon = 1e-15);
        assert_relative_eq!(report.rhs, 2.0, epsilon = 1e-13);
        assert!(report.holds);
    }

    #[test]
    fn check_weyl_rejects_indefinite_input() {
        let a = HermitianMatrix::from_real_diagonal(&[0.5, -0.5]).unwrap();
        let b = HermitianMatrix::identity(2);
        assert!(matches!(check_weyl(&a, &b), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn density_validation_gates() {
        let h = HermitianMatrix::from_real_diagonal(&[0.7, 0.4]).unwrap();
        assert!(matches!(
            DensityOperator::new(h),
            Err(Error::TraceMismatch { .. })
        ));
        let neg = HermitianMatrix::from_real_diagonal(&[1.5, -0.5]).unwrap();
        assert!(matches!(
            DensityOperator::new(neg),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            DensityOperator::diagonal(&[0.5, 0.4]),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_recovers_factors() {
        let rho = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        let sigma = DensityOperator::diagonal(&[0.6, 0.2, 0.2]).unwrap();
        let prod = tensor_states(&rho, &sigma);
        let shape = FactorShape::new(vec![2, 3]).unwrap();
        let left = partial_trace(&prod, &shape, &[0]).unwrap();
        let right = partial_trace(&prod, &shape, &[1]).unwrap();
        assert!(linalg::max_abs(&(left.matrix() - rho.matrix())) < 1e-14);
        assert!(linalg::max_abs(&(right.matrix() - sigma.matrix())) < 1e-14);
    }

    #[test]
    fn partial_trace_of_maximally_entangled_is_maximally_mixed() {
        let d = 3;
        let mut v = CVec::zeros(d * d);
        for i in 0..d {
            v[i * d + i] = cr(1.0 / (d as f64).sqrt());
        }
        let rho = DensityOperator::pure(&v).unwrap();
        let shape = FactorShape::new(vec![d, d]).unwrap();
        let reduced = partial_trace(&rho, &shape, &[0]).unwrap();
        let mixed = DensityOperator::maximally_mixed(d);
        assert!(linalg::max_abs(&(reduced.matrix() - mixed.matrix())) < 1e-14);
    }

    #[test]
    fn partial_trace_composes_factor_by_factor() {
        let rho = random_density(2, None, 21).unwrap();
        let sigma = random_density(3, None, 22).unwrap();
        let tau = random_density(2, None, 23).unwrap();
        let triple = tensor_states(&tensor_states(&rho, &sigma), &tau);
        let shape = FactorShape::new(vec![2, 3, 2]).unwrap();
        let direct = partial_trace(&triple, &shape, &[0]).unwrap();
        let step1 = partial_trace(&triple, &shape, &[0, 2]).unwrap();
        let step2 = partial_trace(&step1, &FactorShape::new(vec![2, 2]).unwrap(), &[0]).unwrap();
        assert!(linalg::max_abs(&(direct.matrix() - step2.matrix())) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_shape_or_keep() {
        let rho = DensityOperator::maximally_mixed(4);
        let bad_shape = FactorShape::new(vec![3, 2]).unwrap();
        assert!(matches!(
            partial_trace(&rho, &bad_shape, &[0]),
            Err(Error::ShapeMismatch { .. })
        ));
        let shape = FactorShape::new(vec![2, 2]).unwrap();
        assert!(partial_trace(&rho, &shape, &[]).is_err());
        assert!(partial_trace(&rho, &shape, &[1, 0]).is_err());
        assert!(partial_trace(&rho, &shape, &[2]).is_err());
    }

    #[test]
    fn tensor_state_spectrum_is_tensor_of_spectra() {
        let rho = random_density(3, Some(&list(&[0.5, 0.3, 0.2])), 31).unwrap();
        let sigma = random_density(2, Some(&list(&[0.9, 0.1])), 32).unwrap();
        let prod = tensor_states(&rho, &sigma);
        let via_matrix = prod.eigenlist().unwrap();
        let via_lists = rho
            .eigenlist()
            .unwrap()
            .tensor(&sigma.eigenlist().unwrap())
            .unwrap();
        assert!(via_matrix.l1_distance(&via_lists) < 1e-10);
    }

    #[test]
    fn singular_lists_agree_for_rectangular_and_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for &(r, c) in &[(2usize, 5usize), (5, 2), (4, 4), (1, 6)] {
            let l = linalg::ginibre(&mut rng, r, c);
            let report = singular_list_check(&l).unwrap();
            assert!(report.equal, "{r}x{c}");
            assert_eq!(report.gram.len(), report.cogram.len());
        }
        // Rank one by construction: outer product of two vectors.
        let u = CVec::from_vec(vec![cr(1.0), cr(2.0)]);
        let v = CVec::from_vec(vec![cr(0.5), cr(0.0), cr(-1.0)]);
        let l = u * v.transpose();
        let report = singular_list_check(&l).unwrap();
        assert!(report.equal);
        assert_eq!(report.gram.len(), 1);
    }

    #[test]
    fn support_projection_of_degenerate_diagonal() {
        let rho = DensityOperator::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        let p = support_projection(&rho, 1e-10);
        let expected = HermitianMatrix::from_real_diagonal(&[1.0, 1.0, 0.0]).unwrap();
        assert!(linalg::max_abs(&(p.matrix() - expected.matrix())) < 1e-12);
        let idem = p.matrix() * p.matrix() - p.matrix();
        assert!(linalg::max_abs(&idem) < 1e-12);
    }

    #[test]
    fn fidelity_matches_bhattacharyya_on_diagonals() {
        let rho = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        let sigma = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        let expected: f64 = (0.75f64 * 0.5).sqrt() + (0.25f64 * 0.5).sqrt();
        assert_relative_eq!(fidelity(&rho, &sigma).unwrap(), expected, epsilon = 1e-12);
        assert_relative_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-12);
        let e0 = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let e1 = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        assert!(fidelity(&e0, &e1).unwrap() < 1e-12);
    }

    #[test]
    fn random_density_is_seed_deterministic_and_respects_spectrum() {
        let spec = list(&[0.4, 0.3, 0.2, 0.1]);
        let a = random_density(4, Some(&spec), 7).unwrap();
        let b = random_density(4, Some(&spec), 7).unwrap();
        let c = random_density(4, Some(&spec), 8).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(linalg::max_abs(&(a.matrix() - c.matrix())) > 1e-3);
        assert!(a.eigenlist().unwrap().l1_distance(&spec) < 1e-10);
        let free = random_density(5, None, 9).unwrap();
        assert_relative_eq!(free.hermitian().trace(), 1.0, epsilon = 1e-12);
        assert!(matches!(
            random_density(2, Some(&list(&[0.5, 0.3, 0.2])), 7),
            Err(Error::BadSpectrum { .. })
        ));
    }
}
