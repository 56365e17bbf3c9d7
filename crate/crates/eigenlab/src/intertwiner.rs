//! Finite model of a unital *-endomorphism and the operators that measure
//! how a state sits across it.
//!
//! The model is built from `k` isometric intertwiners on a `d`-dimensional
//! space: `v_i : H0 -> E (x) H0` with `v_i(eta) = e_i (x) eta`, so
//! `v_i^* v_j = delta_ij` and `alpha(x) = sum_i v_i x v_i^*` is a unital
//! *-homomorphism from `B(H0)` into `B(E (x) H0)` of multiplicity `k`.
//!
//! For a state `rho` on the big space two operators carry its spectral data
//! back to `E`:
//!
//! - the *correlation operator* `A` on `E` with `<A u, v> = rho(u v^*)` for
//!   `u, v` among the intertwiners. Its eigenvalue list equals the list of
//!   the restriction of `rho` to the commutant of the image of `alpha`,
//!   realized here as the partial trace over `H0`.
//! - the *defect operator* `L : E -> HS`, `L v = R^{1/2} v`, whose Gram
//!   matrix `L^* L` reproduces the correlation operator and whose cogram
//!   `L L^*` satisfies the bilinear identity
//!   `<L L^* (x1 (x) conj(x2)), y1 (x) conj(y2)> =
//!    <alpha(y2 conj(x2)^T) R^{1/2} x1, R^{1/2} y1>`
//!   with `x1, y1` on the big space and `x2, y2` on `H0`.
//!
//! Because `Lambda(L^* L) = Lambda(L L^*)` away from zero, these tie the
//! spectrum of a `k x k` matrix to the spectrum of an operator on the much
//! larger Hilbert-Schmidt space. The sandwich operator `T -> A T B` and the
//! weak-to-trace-norm convergence checker complete the toolkit: a family
//! with matched traces that converges weakly on a spanning set converges in
//! trace norm, which is how limits of defect cograms are identified with
//! sandwich operators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::densop::{
    eigenlist_of, partial_trace_matrix, DensityOperator, FactorShape, HermitianMatrix,
};
use crate::eigenlist::EigenvalueList;
use crate::linalg::{
    cr, inner, max_abs, rank_one, span_rank, sqrt_psd, trace_norm_hermitian, vec_rm, CMat, CVec,
};
use crate::{tol, Error, Result};

/// Largest ambient dimension `k * d` the dense routines accept.
pub const MODEL_DIM_CAP: usize = 1 << 12;

/// The multiplicity-`k` endomorphism model on a `d`-dimensional base space.
#[derive(Debug, Clone)]
pub struct IntertwinerModel {
    k: usize,
    d: usize,
}

impl IntertwinerModel {
    /// Build the model and assert the isometry relations it is defined by.
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::BadDim {
                dim: 0,
                reason: "multiplicity and base dimension must be positive".into(),
            });
        }
        let dim = k.checked_mul(d).filter(|&n| n <= MODEL_DIM_CAP);
        if dim.is_none() {
            return Err(Error::BadDim {
                dim: k.saturating_mul(d),
                reason: format!("ambient dimension exceeds cap {MODEL_DIM_CAP}"),
            });
        }
        let model = Self { k, d };
        let deviation = model.isometry_relations_deviation();
        debug_assert!(deviation <= 1e-15, "intertwiner relations violated");
        Ok(model)
    }

    /// Multiplicity (dimension of `E`).
    pub fn multiplicity(&self) -> usize {
        self.k
    }

    /// Base space dimension.
    pub fn base_dim(&self) -> usize {
        self.d
    }

    /// Ambient dimension `k * d`.
    pub fn ambient_dim(&self) -> usize {
        self.k * self.d
    }

    /// The `i`-th intertwiner as a `(k d) x d` matrix `e_i (x) 1`.
    pub fn isometry(&self, i: usize) -> CMat {
        assert!(i < self.k, "isometry index out of range");
        let mut e = CMat::zeros(self.k, 1);
        e[(i, 0)] = cr(1.0);
        e.kronecker(&CMat::identity(self.d, self.d))
    }

    /// Max deviation from `v_i^* v_j = delta_ij 1` and
    /// `sum_i v_i v_i^* = 1`.
    pub fn isometry_relations_deviation(&self) -> f64 {
        let id_d = CMat::identity(self.d, self.d);
        let mut worst: f64 = 0.0;
        let mut completeness = CMat::zeros(self.ambient_dim(), self.ambient_dim());
        for i in 0..self.k {
            let vi = self.isometry(i);
            completeness += &vi * vi.adjoint();
            for j in 0..self.k {
                let vj = self.isometry(j);
                let prod = vi.adjoint() * &vj;
                let target = if i == j {
                    id_d.clone()
                } else {
                    CMat::zeros(self.d, self.d)
                };
                worst = worst.max(max_abs(&(prod - target)));
            }
        }
        let id = CMat::identity(self.ambient_dim(), self.ambient_dim());
        worst.max(max_abs(&(completeness - id)))
    }

    /// `alpha(x) = sum_i v_i x v_i^*` for `x` on the base space.
    pub fn endomorphism_apply(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.d || x.ncols() != self.d {
            return Err(Error::DimMismatch {
                left: x.nrows(),
                right: self.d,
            });
        }
        let n = self.ambient_dim();
        let mut out = CMat::zeros(n, n);
        for i in 0..self.k {
            let vi = self.isometry(i);
            out += &vi * x * vi.adjoint();
        }
        Ok(out)
    }
}

/// Correlation operator of `rho` on `E`: the `k x k` Hermitian matrix
/// defined by `<A e_m, e_n> = rho(v_m v_n^*)`. With the inner product
/// linear in the first slot this pins the entries to
/// `A_ij = rho(v_j v_i^*) = trace(v_i^* R v_j)`.
pub fn correlation_operator(
    model: &IntertwinerModel,
    rho: &DensityOperator,
) -> Result<HermitianMatrix> {
    if rho.dim() != model.ambient_dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: model.ambient_dim(),
        });
    }
    let k = model.multiplicity();
    let mut a = CMat::zeros(k, k);
    for j in 0..k {
        let r_vj = rho.matrix() * model.isometry(j);
        for i in 0..k {
            a[(i, j)] = (model.isometry(i).adjoint() * &r_vj).trace();
        }
    }
    HermitianMatrix::new(a)
}

/// Two routes to the same eigenvalue list: the correlation operator on `E`
/// versus the partial trace of `rho` over the base space.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RestrictionSpectrumReport {
    /// `Lambda` of the correlation operator.
    pub lambda_correlation: EigenvalueList,
    /// `Lambda` of the partial trace of `rho` over the base factor.
    pub lambda_restriction: EigenvalueList,
    /// l1 gap between the two lists.
    pub distance: f64,
    /// Whether the gap is within [`tol::SPECTRUM_GAP`].
    pub ok: bool,
}

/// Check that the correlation operator's spectrum equals the spectrum of
/// the restriction of `rho` to the factor `E` (the commutant of the image
/// of `alpha` in this model).
pub fn verify_restriction_spectrum(
    model: &IntertwinerModel,
    rho: &DensityOperator,
) -> Result<RestrictionSpectrumReport> {
    let a = correlation_operator(model, rho)?;
    let lambda_correlation = eigenlist_of(&a, true)?;
    let shape = FactorShape::new(vec![model.multiplicity(), model.base_dim()])?;
    let restriction = partial_trace_matrix(rho.matrix(), &shape, &[0])?;
    let lambda_restriction = eigenlist_of(&HermitianMatrix::new(restriction)?, true)?;
    let distance = lambda_correlation.l1_distance(&lambda_restriction);
    Ok(RestrictionSpectrumReport {
        lambda_correlation,
        lambda_restriction,
        distance,
        ok: distance <= tol::SPECTRUM_GAP,
    })
}

/// Defect operator of `rho`: the `(k d^2) x k` matrix whose column `j` is
/// `R^{1/2} v_j` flattened row-major into the Hilbert-Schmidt space of maps
/// `H0 -> E (x) H0`.
pub fn defect_operator(model: &IntertwinerModel, rho: &DensityOperator) -> Result<CMat> {
    if rho.dim() != model.ambient_dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: model.ambient_dim(),
        });
    }
    let root = sqrt_psd(rho.matrix());
    let rows = model.ambient_dim() * model.base_dim();
    let mut l = CMat::zeros(rows, model.multiplicity());
    for j in 0..model.multiplicity() {
        let col = vec_rm(&(&root * model.isometry(j)));
        l.set_column(j, &col);
    }
    Ok(l)
}

/// Agreement of the defect Gram matrix with the correlation operator.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DefectGramReport {
    /// Max entrywise deviation `|(L^* L)_ij - rho(v_i v_j^*)|`.
    pub max_deviation: f64,
    /// Whether the deviation is within [`tol::ENTRYWISE`].
    pub ok: bool,
}

/// Check `<L^* L e_i, e_j> = rho(v_i v_j^*)` entry by entry. The two sides
/// come from independent routes: Hilbert-Schmidt pairings of `R^{1/2} v_i`
/// against direct traces of `R v_i v_j^*`.
pub fn verify_defect_gram(
    model: &IntertwinerModel,
    rho: &DensityOperator,
) -> Result<DefectGramReport> {
    let l = defect_operator(model, rho)?;
    let gram = l.adjoint() * &l;
    let corr = correlation_operator(model, rho)?;
    let max_deviation = max_abs(&(gram - corr.matrix()));
    Ok(DefectGramReport {
        max_deviation,
        ok: max_deviation <= tol::ENTRYWISE,
    })
}

/// Deviation of the defect cogram bilinear identity over sampled vectors.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DefectBilinearReport {
    /// Number of sampled quadruples.
    pub samples: usize,
    /// Max `|lhs - rhs|` over the samples.
    pub max_deviation: f64,
    /// Whether the deviation is within [`tol::ENTRYWISE`].
    pub ok: bool,
}

/// Sample the identity
/// `<L L^* (x1 (x) conj(x2)), y1 (x) conj(y2)> =
///  <alpha(y2 x2^*) R^{1/2} x1, R^{1/2} y1>`
/// on `quadruples` random vectors, with `x1, y1` ambient and `x2, y2` on
/// the base space. Both sides are computed without materializing `L L^*`.
pub fn verify_defect_bilinear(
    model: &IntertwinerModel,
    rho: &DensityOperator,
    quadruples: usize,
    seed: u64,
) -> Result<DefectBilinearReport> {
    let l = defect_operator(model, rho)?;
    let root = sqrt_psd(rho.matrix());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..quadruples {
        let x1 = crate::linalg::random_vector(&mut rng, model.ambient_dim());
        let y1 = crate::linalg::random_vector(&mut rng, model.ambient_dim());
        let x2 = crate::linalg::random_vector(&mut rng, model.base_dim());
        let y2 = crate::linalg::random_vector(&mut rng, model.base_dim());
        let dev = defect_bilinear_deviation(model, &l, &root, &x1, &x2, &y1, &y2)?;
        max_deviation = max_deviation.max(dev);
    }
    Ok(DefectBilinearReport {
        samples: quadruples,
        max_deviation,
        ok: max_deviation <= tol::ENTRYWISE,
    })
}

/// `|lhs - rhs|` of the bilinear identity for one vector quadruple.
pub fn defect_bilinear_deviation(
    model: &IntertwinerModel,
    l: &CMat,
    root: &CMat,
    x1: &CVec,
    x2: &CVec,
    y1: &CVec,
    y2: &CVec,
) -> Result<f64> {
    let s = vec_rm(&rank_one(x1, x2));
    let t = vec_rm(&rank_one(y1, y2));
    // <L L^* s, t> = <L^* s, L^* t> in E.
    let ls = l.adjoint() * s;
    let lt = l.adjoint() * t;
    let lhs = inner(&ls, &lt);
    let alpha = model.endomorphism_apply(&rank_one(y2, x2))?;
    let rhs = inner(&(alpha * (root * x1)), &(root * y1));
    Ok((lhs - rhs).norm())
}

/// The sandwich operator `T -> A T B` on the Hilbert-Schmidt space of the
/// common ambient dimension, assembled entry by entry in the matrix-unit
/// basis ordered row-major. For Hermitian `A`, `B` the result is Hermitian,
/// and for PSD inputs its eigenvalue list is `Lambda(A) (x) Lambda(B)`.
pub fn sandwich_operator(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let nn = n.checked_mul(n).filter(|&s| s <= MODEL_DIM_CAP);
    if nn.is_none() {
        return Err(Error::BadDim {
            dim: n,
            reason: format!("Hilbert-Schmidt dimension exceeds cap {MODEL_DIM_CAP}"),
        });
    }
    let nn = nn.unwrap();
    let am = a.matrix();
    let bm = b.matrix();
    let mut s = CMat::zeros(nn, nn);
    // (A E_{rc} B)_{r'c'} = A_{r'r} B_{c c'}: column (r, c) of S holds the
    // sandwiched matrix unit, flattened row-major.
    for r in 0..n {
        for c in 0..n {
            let col = r * n + c;
            for rp in 0..n {
                for cp in 0..n {
                    s[(rp * n + cp, col)] = am[(rp, r)] * bm[(c, cp)];
                }
            }
        }
    }
    HermitianMatrix::new(s)
}

/// Two routes to the sandwich spectrum: the assembled superoperator versus
/// the tensor product of the factor lists.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SandwichSpectrumReport {
    /// `Lambda` of the assembled sandwich operator.
    pub lambda_sandwich: EigenvalueList,
    /// `Lambda(A) (x) Lambda(B)` computed in list arithmetic.
    pub lambda_tensor: EigenvalueList,
    /// l1 gap between the two lists.
    pub distance: f64,
    /// Whether the gap is within [`tol::SPECTRUM_GAP`].
    pub ok: bool,
}

/// Check `Lambda(T -> A T B) = Lambda(A) (x) Lambda(B)` for PSD `A`, `B`.
pub fn verify_sandwich_spectrum(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<SandwichSpectrumReport> {
    let la = eigenlist_of(a, true)?;
    let lb = eigenlist_of(b, true)?;
    let sandwich = sandwich_operator(a, b)?;
    let lambda_sandwich = eigenlist_of(&sandwich, true)?;
    let lambda_tensor = la.tensor(&lb)?;
    let distance = lambda_sandwich.l1_distance(&lambda_tensor);
    Ok(SandwichSpectrumReport {
        lambda_sandwich,
        lambda_tensor,
        distance,
        ok: distance <= tol::SPECTRUM_GAP,
    })
}

/// One family member's deviation columns.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConvergenceRow {
    /// `max_{u, v in span} |<(A_t - B) u, v>|`.
    pub weak: f64,
    /// `trace |A_t - B|`.
    pub trace: f64,
}

/// Weak and trace-norm deviation columns for a family against its target.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceReport {
    /// One row per family member, in the order given.
    pub rows: Vec<ConvergenceRow>,
}

/// Compare weak-topology deviations (against a spanning set of vectors)
/// with trace-norm deviations for a family sharing the target's trace.
///
/// For positive families with matched traces, weak convergence on a
/// spanning set already forces trace-norm convergence; the report exposes
/// both columns so that monotone domination can be asserted by the caller.
pub fn weak_to_trace_convergence_check(
    family: &[HermitianMatrix],
    target: &HermitianMatrix,
    span: &[CVec],
) -> Result<ConvergenceReport> {
    let dim = target.dim();
    for a in family {
        if a.dim() != dim {
            return Err(Error::DimMismatch {
                left: a.dim(),
                right: dim,
            });
        }
        let trace = a.trace();
        if (trace - target.trace()).abs() > tol::TRACE_ONE {
            return Err(Error::TraceMismatch {
                expected: target.trace(),
                actual: trace,
            });
        }
    }
    if span.iter().any(|v| v.len() != dim) {
        return Err(Error::BadArgs {
            reason: "span vectors must live on the target's space".into(),
        });
    }
    let rank = span_rank(span, 1e-10);
    if rank < dim {
        return Err(Error::SpanDeficient { rank, dim });
    }
    let rows = family
        .iter()
        .map(|a| {
            let diff = a.matrix() - target.matrix();
            let mut weak: f64 = 0.0;
            for u in span {
                let du = &diff * u;
                for v in span {
                    weak = weak.max(inner(&du, v).norm());
                }
            }
            ConvergenceRow {
                weak,
                trace: trace_norm_hermitian(&diff),
            }
        })
        .collect();
    Ok(ConvergenceReport { rows })
}

/// Whether `column` is nonincreasing up to `jitter`.
pub fn is_nonincreasing(column: &[f64], jitter: f64) -> bool {
    column.windows(2).all(|w| w[1] <= w[0] + jitter)
}
